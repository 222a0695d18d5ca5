//! Schedule model, feasibility checks and travel evaluation.

use std::fmt;
use std::ops::Not;

use thiserror::Error;

use crate::instance::Instance;
use crate::scalar::Distance;
use crate::{RoundId, TeamId};

/// Longest run of consecutive home (or away) games allowed per team.
pub const MAX_STREAK: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Venue {
    Home,
    Away,
}

impl Venue {
    pub fn is_home(self) -> bool {
        self == Venue::Home
    }
}

impl Not for Venue {
    type Output = Venue;

    fn not(self) -> Venue {
        match self {
            Venue::Home => Venue::Away,
            Venue::Away => Venue::Home,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScheduleError {
    #[error("schedule must have {expected} rows, found {found}")]
    RowCount { expected: usize, found: usize },
    #[error("row {row} must have {expected} entries, found {found}")]
    ColumnCount { row: usize, expected: usize, found: usize },
    #[error("team {team} out of range in round {round}")]
    TeamOutOfRange { team: usize, round: RoundId },
    #[error("team {team} plays itself in round {round}")]
    SelfPlay { team: TeamId, round: RoundId },
    #[error("inconsistent pairing in round {round}: team {team} lists {opponent} but {opponent} does not list {team} at the opposite venue")]
    Pairing {
        round: RoundId,
        team: TeamId,
        opponent: TeamId,
    },
}

/// Per-team, per-round opponent and venue grid.
///
/// Every value of this type is pairing-consistent: if `t` plays `o` at home
/// in round `r`, then `o` plays `t` away in round `r`. It is not necessarily
/// a double round-robin; see [`is_double_round_robin`].
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Schedule {
    n: usize,
    rounds: usize,
    opponent: Vec<TeamId>,
    venue: Vec<Venue>,
}

impl Schedule {
    /// Builds a schedule from per-team rows of `(opponent, venue)`.
    pub fn from_rows(rows: Vec<Vec<(TeamId, Venue)>>) -> Result<Self, ScheduleError> {
        let n = rows.len();
        let rounds = 2 * n.saturating_sub(1);
        let mut opponent = Vec::with_capacity(n * rounds);
        let mut venue = Vec::with_capacity(n * rounds);
        for (t, row) in rows.into_iter().enumerate() {
            if row.len() != rounds {
                return Err(ScheduleError::ColumnCount {
                    row: t,
                    expected: rounds,
                    found: row.len(),
                });
            }
            for (o, v) in row {
                opponent.push(o);
                venue.push(v);
            }
        }
        let s = Schedule {
            n,
            rounds,
            opponent,
            venue,
        };
        s.check_pairing()?;
        Ok(s)
    }

    /// Builds a schedule from round-major rows of per-team `(opponent, venue)`.
    pub fn from_round_rows(rounds: Vec<Vec<(TeamId, Venue)>>) -> Result<Self, ScheduleError> {
        let n = rounds.first().map_or(0, Vec::len);
        let expected = 2 * n.saturating_sub(1);
        if rounds.len() != expected {
            return Err(ScheduleError::RowCount {
                expected,
                found: rounds.len(),
            });
        }
        let mut rows = vec![Vec::with_capacity(expected); n];
        for (r, round) in rounds.into_iter().enumerate() {
            if round.len() != n {
                return Err(ScheduleError::ColumnCount {
                    row: r,
                    expected: n,
                    found: round.len(),
                });
            }
            for (t, game) in round.into_iter().enumerate() {
                rows[t].push(game);
            }
        }
        Self::from_rows(rows)
    }

    fn check_pairing(&self) -> Result<(), ScheduleError> {
        for t in 0..self.n {
            for r in 0..self.rounds {
                let o = self.opponent(t, r);
                if o >= self.n {
                    return Err(ScheduleError::TeamOutOfRange { team: o, round: r });
                }
                if o == t {
                    return Err(ScheduleError::SelfPlay { team: t, round: r });
                }
                if self.opponent(o, r) != t || self.venue(o, r) == self.venue(t, r) {
                    return Err(ScheduleError::Pairing {
                        round: r,
                        team: t,
                        opponent: o,
                    });
                }
            }
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rounds(&self) -> usize {
        self.rounds
    }

    #[inline]
    fn idx(&self, t: TeamId, r: RoundId) -> usize {
        t * self.rounds + r
    }

    #[inline]
    pub fn opponent(&self, t: TeamId, r: RoundId) -> TeamId {
        self.opponent[self.idx(t, r)]
    }

    #[inline]
    pub fn venue(&self, t: TeamId, r: RoundId) -> Venue {
        self.venue[self.idx(t, r)]
    }

    #[inline]
    pub fn game(&self, t: TeamId, r: RoundId) -> (TeamId, Venue) {
        let i = self.idx(t, r);
        (self.opponent[i], self.venue[i])
    }

    /// Rounds in which `a` plays `b`, in increasing order.
    pub fn meetings(&self, a: TeamId, b: TeamId) -> impl Iterator<Item = RoundId> + '_ {
        (0..self.rounds).filter(move |&r| self.opponent(a, r) == b)
    }

    /// Round of `t`'s game against `o` at venue `v`, skipping `except`.
    pub(crate) fn find_game(&self, t: TeamId, o: TeamId, v: Venue, except: RoundId) -> Option<RoundId> {
        (0..self.rounds).find(|&r| r != except && self.game(t, r) == (o, v))
    }

    /// Writes one cell without touching the opponent's row.
    #[inline]
    pub(crate) fn set_cell(&mut self, t: TeamId, r: RoundId, o: TeamId, v: Venue) {
        let i = self.idx(t, r);
        self.opponent[i] = o;
        self.venue[i] = v;
    }

    /// Flips the venue of `t`'s round-`r` game on both sides.
    pub(crate) fn flip_game(&mut self, t: TeamId, r: RoundId) {
        let o = self.opponent(t, r);
        let (i, j) = (self.idx(t, r), self.idx(o, r));
        self.venue[i] = !self.venue[i];
        self.venue[j] = !self.venue[j];
    }

    /// Exchanges the round-`r` games of `a` and `b`, rewiring their opponents.
    /// `a` and `b` must not play each other in `r`.
    pub(crate) fn exchange_games(&mut self, a: TeamId, b: TeamId, r: RoundId) {
        let (x, vx) = self.game(a, r);
        let (y, vy) = self.game(b, r);
        debug_assert!(x != b && y != a);
        self.set_cell(a, r, y, vy);
        self.set_cell(b, r, x, vx);
        self.set_cell(y, r, a, !vy);
        self.set_cell(x, r, b, !vx);
    }

    /// Exchanges rounds `rk` and `rl` in `t`'s row only.
    pub(crate) fn swap_row_rounds(&mut self, t: TeamId, rk: RoundId, rl: RoundId) {
        let (i, j) = (self.idx(t, rk), self.idx(t, rl));
        self.opponent.swap(i, j);
        self.venue.swap(i, j);
    }

    /// Round-major signed view: `+o` for a home game against 0-based team
    /// `o - 1`, `-o` for away.
    pub fn to_signed(&self) -> Vec<Vec<i64>> {
        (0..self.rounds)
            .map(|r| {
                (0..self.n)
                    .map(|t| {
                        let (o, v) = self.game(t, r);
                        let k = o as i64 + 1;
                        if v.is_home() {
                            k
                        } else {
                            -k
                        }
                    })
                    .collect()
            })
            .collect()
    }
}

impl fmt::Debug for Schedule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Schedule(n={}) [", self.n)?;
        for row in self.to_signed() {
            let cells: Vec<String> = row.iter().map(|x| format!("{x:>4}")).collect();
            writeln!(f, "  {}", cells.join(""))?;
        }
        write!(f, "]")
    }
}

/// Constraint violation counts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ViolationReport {
    pub atmost: usize,
    pub norepeat: usize,
    pub total: usize,
}

impl ViolationReport {
    pub fn is_feasible(&self) -> bool {
        self.total == 0
    }
}

/// True iff every ordered pair of distinct teams meets exactly once with the
/// first team at home.
pub fn is_double_round_robin(s: &Schedule) -> bool {
    let n = s.n();
    let mut seen = vec![false; n * n];
    for t in 0..n {
        for r in 0..s.rounds() {
            let (o, v) = s.game(t, r);
            if v.is_home() {
                let k = t * n + o;
                if seen[k] {
                    return false;
                }
                seen[k] = true;
            }
        }
    }
    // 2n-2 rounds with n(n-1) home slots in total: no duplicates means every pair is covered.
    (0..n).all(|t| (0..n).all(|o| seen[t * n + o] != (t == o)))
}

/// Sum over teams and maximal same-venue runs of `max(0, len - 3)`.
pub fn count_atmost_violations(s: &Schedule) -> usize {
    let mut count = 0;
    for t in 0..s.n() {
        let mut run = 0usize;
        let mut last = None;
        for r in 0..s.rounds() {
            let v = s.venue(t, r);
            if Some(v) == last {
                run += 1;
            } else {
                count += run.saturating_sub(MAX_STREAK);
                run = 1;
                last = Some(v);
            }
        }
        count += run.saturating_sub(MAX_STREAK);
    }
    count
}

/// Number of (unordered pair, round) repeats between adjacent rounds.
pub fn count_norepeat_violations(s: &Schedule) -> usize {
    let mut count = 0;
    for r in 1..s.rounds() {
        for t in 0..s.n() {
            let o = s.opponent(t, r);
            if t < o && s.opponent(t, r - 1) == o {
                count += 1;
            }
        }
    }
    count
}

pub fn violations(s: &Schedule) -> ViolationReport {
    let atmost = count_atmost_violations(s);
    let norepeat = count_norepeat_violations(s);
    ViolationReport {
        atmost,
        norepeat,
        total: atmost + norepeat,
    }
}

/// Travel of team `t`: from home through each game venue and back home.
pub fn team_distance<D: Distance>(s: &Schedule, inst: &Instance<D>, t: TeamId) -> D {
    let mut here = t;
    let mut total = D::zero();
    for r in 0..s.rounds() {
        let (o, v) = s.game(t, r);
        let there = if v.is_home() { t } else { o };
        total += inst.d(here, there);
        here = there;
    }
    total + inst.d(here, t)
}

pub fn team_distances<D: Distance>(s: &Schedule, inst: &Instance<D>) -> Vec<D> {
    (0..s.n()).map(|t| team_distance(s, inst, t)).collect()
}

pub fn total_distance<D: Distance>(s: &Schedule, inst: &Instance<D>) -> D {
    (0..s.n()).map(|t| team_distance(s, inst, t)).sum()
}

/// Violation growth function: `1 + sqrt(v) ln(v) / 2`, with `f(0) = 0`.
pub fn violation_scale(v: usize) -> f64 {
    if v == 0 {
        return 0.0;
    }
    let v = v as f64;
    1.0 + v.sqrt() * v.ln() / 2.0
}

/// Composite cost from a distance and a violation count.
pub fn blend_cost(distance: f64, violations: usize, w: f64) -> f64 {
    if violations == 0 {
        distance
    } else {
        distance.hypot(w * violation_scale(violations))
    }
}

/// Annealing objective: travel distance when feasible, otherwise
/// `sqrt(d^2 + (w f(v))^2)`.
pub fn objective<D: Distance>(s: &Schedule, inst: &Instance<D>, w: f64) -> f64 {
    let d = total_distance(s, inst).to_f64().unwrap_or(f64::INFINITY);
    blend_cost(d, violations(s).total, w)
}
