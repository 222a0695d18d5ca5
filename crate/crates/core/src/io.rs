//! Text formats: instance files, the tabular schedule layout and the signed
//! matrix solution format.
//!
//! Instance file: an optional line holding the team count `n`, `n` rows of
//! `n` whitespace-separated distances, then an optional line of `n` team
//! labels.
//! Blank lines and lines starting with `#` are ignored. LF and CRLF both work.
//!
//! Tabular schedule: a header of team labels, an optional `---` rule, one row
//! per round with the opponent label of each column (`@` marks an away game),
//! then an optional footer of per-team distances followed by the total.
//!
//! Solution file: one line per round, one signed integer per team. Entry
//! `(r, t)` is the 1-based index of `t`'s opponent, negated when `t` is away.

use std::fmt::Write as _;

use thiserror::Error;

use crate::instance::{Instance, InstanceError};
use crate::scalar::Distance;
use crate::schedule::{team_distances, Schedule, ScheduleError, Venue};
use crate::TeamId;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("empty input")]
    Empty,
    #[error("malformed number {0:?}")]
    Malformed(String),
    #[error("team count must be an even integer >= 4, got {0}")]
    TeamCount(usize),
    #[error("expected {expected} entries, found {found}")]
    RowLength { expected: usize, found: usize },
    #[error("expected {expected} rounds, found {found}")]
    RowCount { expected: usize, found: usize },
    #[error("{0}")]
    Instance(InstanceError),
    #[error("unknown team {0:?}")]
    UnknownTeam(String),
    #[error("header must list every team exactly once")]
    Header,
    #[error("opponent index {0} out of range")]
    OutOfRange(i64),
    #[error("team {0} plays itself")]
    SelfPlay(String),
    #[error("inconsistent pairing: {team} lists {listed} but {opponent} lists {back}")]
    Pairing {
        team: String,
        listed: String,
        opponent: String,
        back: String,
    },
    #[error("unexpected trailing content")]
    Trailing,
}

fn err(line: usize, kind: ParseErrorKind) -> ParseError {
    ParseError { line, kind }
}

/// Content lines with 1-based line numbers; blanks and `#` comments dropped.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(k, raw)| {
        let line = raw.trim_end_matches('\r').trim();
        if line.is_empty() || line.starts_with('#') {
            None
        } else {
            Some((k + 1, line.split_whitespace().collect()))
        }
    })
}

fn end_line(text: &str) -> usize {
    text.lines().count() + 1
}

pub fn parse_instance<D: Distance>(text: &str) -> Result<Instance<D>, ParseError> {
    let mut lines = content_lines(text).peekable();
    let (first, tokens) = lines.peek().cloned().ok_or_else(|| err(1, ParseErrorKind::Empty))?;
    // Without a count line the first matrix row fixes n.
    let n: usize = if tokens.len() == 1 {
        lines.next();
        tokens[0]
            .parse()
            .map_err(|_| err(first, ParseErrorKind::Malformed(tokens[0].to_string())))?
    } else {
        tokens.len()
    };
    if n < 4 || !n.is_multiple_of(2) {
        return Err(err(first, ParseErrorKind::TeamCount(n)));
    }

    let mut rows: Vec<Vec<D>> = Vec::with_capacity(n);
    for i in 0..n {
        let (line, tokens) = lines
            .next()
            .ok_or_else(|| err(end_line(text), ParseErrorKind::RowCount { expected: n, found: i }))?;
        if tokens.len() != n {
            return Err(err(
                line,
                ParseErrorKind::RowLength {
                    expected: n,
                    found: tokens.len(),
                },
            ));
        }
        let row = tokens
            .iter()
            .map(|tok| {
                tok.parse::<D>()
                    .map_err(|_| err(line, ParseErrorKind::Malformed(tok.to_string())))
            })
            .collect::<Result<Vec<D>, _>>()?;
        let bad = |kind| err(line, ParseErrorKind::Instance(kind));
        if row[i] != D::zero() {
            return Err(bad(InstanceError::NonzeroDiagonal(i)));
        }
        if let Some(j) = row.iter().position(|&x| x < D::zero()) {
            return Err(bad(InstanceError::Negative { i, j }));
        }
        for (j, prev) in rows.iter().enumerate() {
            if prev[i] != row[j] {
                return Err(bad(InstanceError::Asymmetric {
                    i,
                    j,
                    ij: row[j].to_string(),
                    ji: prev[i].to_string(),
                }));
            }
        }
        rows.push(row);
    }

    let mut names = None;
    let mut names_line = end_line(text);
    if let Some((line, tokens)) = lines.next() {
        if tokens.len() != n {
            return Err(err(
                line,
                ParseErrorKind::RowLength {
                    expected: n,
                    found: tokens.len(),
                },
            ));
        }
        names = Some(tokens.iter().map(|s| s.to_string()).collect());
        names_line = line;
    }
    if let Some((line, _)) = lines.next() {
        return Err(err(line, ParseErrorKind::Trailing));
    }
    Instance::new(rows, names).map_err(|e| err(names_line, ParseErrorKind::Instance(e)))
}

fn is_numeric_row(tokens: &[&str]) -> bool {
    tokens.iter().all(|t| t.parse::<f64>().is_ok())
}

/// Parses the tabular layout. Pairings must be mutually consistent; the
/// double round-robin property is not required.
pub fn parse_schedule<D: Distance>(text: &str, inst: &Instance<D>) -> Result<Schedule, ParseError> {
    let n = inst.n();
    let rounds = inst.rounds();
    let mut lines = content_lines(text).peekable();
    let &(first, ref first_tokens) = lines.peek().ok_or_else(|| err(1, ParseErrorKind::Empty))?;

    // A header is a row without '@'; every real round has away games.
    let columns: Vec<TeamId> = if first_tokens.iter().any(|t| t.starts_with('@')) {
        (0..n).collect()
    } else {
        let (_, tokens) = lines.next().expect("peeked");
        if tokens.len() != n {
            return Err(err(
                first,
                ParseErrorKind::RowLength {
                    expected: n,
                    found: tokens.len(),
                },
            ));
        }
        let mut cols = Vec::with_capacity(n);
        for tok in tokens {
            let t = inst
                .team_index(tok)
                .ok_or_else(|| err(first, ParseErrorKind::UnknownTeam(tok.to_string())))?;
            if cols.contains(&t) {
                return Err(err(first, ParseErrorKind::Header));
            }
            cols.push(t);
        }
        if lines
            .peek()
            .is_some_and(|(_, toks)| toks.iter().all(|t| t.chars().all(|c| c == '-')))
        {
            lines.next();
        }
        cols
    };

    let mut grid = vec![vec![(0, Venue::Home); n]; rounds];
    let mut row_lines = Vec::with_capacity(rounds);
    for (line, tokens) in lines.by_ref() {
        if row_lines.len() == rounds {
            if is_numeric_row(&tokens) {
                break;
            }
            return Err(err(
                line,
                ParseErrorKind::RowCount {
                    expected: rounds,
                    found: rounds + 1,
                },
            ));
        }
        if is_numeric_row(&tokens) {
            return Err(err(
                line,
                ParseErrorKind::RowCount {
                    expected: rounds,
                    found: row_lines.len(),
                },
            ));
        }
        if tokens.len() != n {
            return Err(err(
                line,
                ParseErrorKind::RowLength {
                    expected: n,
                    found: tokens.len(),
                },
            ));
        }
        let r = row_lines.len();
        for (c, tok) in tokens.iter().enumerate() {
            let (name, venue) = match tok.strip_prefix('@') {
                Some(rest) => (rest, Venue::Away),
                None => (*tok, Venue::Home),
            };
            let o = inst
                .team_index(name)
                .ok_or_else(|| err(line, ParseErrorKind::UnknownTeam(name.to_string())))?;
            grid[r][columns[c]] = (o, venue);
        }
        row_lines.push(line);
    }
    if let Some((line, _)) = lines.next() {
        return Err(err(line, ParseErrorKind::Trailing));
    }
    if row_lines.len() != rounds {
        return Err(err(
            end_line(text),
            ParseErrorKind::RowCount {
                expected: rounds,
                found: row_lines.len(),
            },
        ));
    }
    build(grid, &row_lines, inst)
}

fn token(inst_names: &[String], o: TeamId, v: Venue) -> String {
    match v {
        Venue::Home => inst_names[o].clone(),
        Venue::Away => format!("@{}", inst_names[o]),
    }
}

fn build<D: Distance>(
    grid: Vec<Vec<(TeamId, Venue)>>,
    row_lines: &[usize],
    inst: &Instance<D>,
) -> Result<Schedule, ParseError> {
    let names = inst.names();
    let snapshot = grid.clone();
    Schedule::from_round_rows(grid).map_err(|e| match e {
        ScheduleError::SelfPlay { team, round } => err(row_lines[round], ParseErrorKind::SelfPlay(names[team].clone())),
        ScheduleError::Pairing { round, team, opponent } => {
            let (listed_o, listed_v) = snapshot[round][team];
            let (back_o, back_v) = snapshot[round][opponent];
            err(
                row_lines[round],
                ParseErrorKind::Pairing {
                    team: names[team].clone(),
                    listed: token(names, listed_o, listed_v),
                    opponent: names[opponent].clone(),
                    back: token(names, back_o, back_v),
                },
            )
        }
        ScheduleError::TeamOutOfRange { team, round } => {
            err(row_lines[round], ParseErrorKind::OutOfRange(team as i64 + 1))
        }
        ScheduleError::RowCount { expected, found } => err(
            row_lines.last().copied().unwrap_or(1),
            ParseErrorKind::RowCount { expected, found },
        ),
        ScheduleError::ColumnCount { row, expected, found } => err(
            row_lines.get(row).copied().unwrap_or(1),
            ParseErrorKind::RowLength { expected, found },
        ),
    })
}

/// Renders the tabular layout with a footer of per-team distances and total.
pub fn render_schedule<D: Distance>(s: &Schedule, inst: &Instance<D>) -> String {
    let names = inst.names();
    let distances = team_distances(s, inst);
    let footer: Vec<String> = distances.iter().map(|d| d.to_string()).collect();
    let total: D = distances.iter().copied().sum();
    let width = footer
        .iter()
        .map(String::len)
        .chain(names.iter().map(|x| x.chars().count() + 1))
        .max()
        .unwrap_or(0)
        .max(5)
        + 1;

    let mut out = String::new();
    let mut emit = |cells: &mut dyn Iterator<Item = String>| {
        let line: String = cells.map(|c| format!("{c:<width$}")).collect();
        out.push_str(line.trim_end());
        out.push('\n');
    };
    emit(&mut names.iter().cloned());
    emit(&mut (0..s.n()).map(|_| "---".to_string()));
    for r in 0..s.rounds() {
        emit(&mut (0..s.n()).map(|t| {
            let (o, v) = s.game(t, r);
            token(names, o, v)
        }));
    }
    emit(&mut footer.into_iter().chain(std::iter::once(total.to_string())));
    out
}

pub fn write_solution(s: &Schedule) -> String {
    let mut out = String::new();
    for row in s.to_signed() {
        let cells: Vec<String> = row.iter().map(i64::to_string).collect();
        let _ = writeln!(out, "{}", cells.join(" "));
    }
    out
}

pub fn parse_solution<D: Distance>(text: &str, inst: &Instance<D>) -> Result<Schedule, ParseError> {
    let n = inst.n();
    let rounds = inst.rounds();
    let mut grid = Vec::with_capacity(rounds);
    let mut row_lines = Vec::with_capacity(rounds);
    for (line, tokens) in content_lines(text) {
        if grid.len() == rounds {
            return Err(err(
                line,
                ParseErrorKind::RowCount {
                    expected: rounds,
                    found: rounds + 1,
                },
            ));
        }
        if tokens.len() != n {
            return Err(err(
                line,
                ParseErrorKind::RowLength {
                    expected: n,
                    found: tokens.len(),
                },
            ));
        }
        let mut row = Vec::with_capacity(n);
        for (t, tok) in tokens.iter().enumerate() {
            let k: i64 = tok
                .parse()
                .map_err(|_| err(line, ParseErrorKind::Malformed(tok.to_string())))?;
            if k == 0 || k.unsigned_abs() as usize > n {
                return Err(err(line, ParseErrorKind::OutOfRange(k)));
            }
            let o = k.unsigned_abs() as usize - 1;
            if o == t {
                return Err(err(line, ParseErrorKind::SelfPlay(inst.name(t).to_string())));
            }
            row.push((o, if k > 0 { Venue::Home } else { Venue::Away }));
        }
        grid.push(row);
        row_lines.push(line);
    }
    if grid.is_empty() {
        return Err(err(1, ParseErrorKind::Empty));
    }
    if grid.len() != rounds {
        return Err(err(
            end_line(text),
            ParseErrorKind::RowCount {
                expected: rounds,
                found: grid.len(),
            },
        ));
    }
    build(grid, &row_lines, inst)
}

/// Parses either schedule format, choosing by the first token.
pub fn parse_schedule_any<D: Distance>(text: &str, inst: &Instance<D>) -> Result<Schedule, ParseError> {
    let numeric = content_lines(text)
        .next()
        .is_some_and(|(_, tokens)| tokens[0].parse::<i64>().is_ok());
    if numeric {
        parse_solution(text, inst)
    } else {
        parse_schedule(text, inst)
    }
}
