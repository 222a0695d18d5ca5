//! Shared fixtures and independent oracles for the integration tests.
#![allow(dead_code)]

use std::path::PathBuf;

use rand::Rng;
use ttp_core::schedule::{Schedule, Venue};
use ttp_core::{Instance, TeamId};

use Venue::{Away, Home};

pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name)
}

pub fn read_fixture(name: &str) -> String {
    std::fs::read_to_string(fixture(name)).unwrap_or_else(|e| panic!("{name}: {e}"))
}

pub const TOY4: &str = "4\n0 1 2 3\n1 0 4 5\n2 4 0 6\n3 5 6 0\n";

pub const GALAXY10_NAMES: [&str; 10] = ["SOL", "ERI", "ARA", "GEM", "PSC", "CEP", "AND", "CNC", "PEG", "HOR"];

pub fn named_zero_instance(names: &[&str]) -> Instance<i64> {
    let n = names.len();
    Instance::new(vec![vec![0; n]; n], Some(names.iter().map(|s| s.to_string()).collect())).unwrap()
}

pub fn letters(n: usize) -> Vec<String> {
    (0..n).map(|k| ((b'A' + k as u8) as char).to_string()).collect()
}

pub fn team(c: char) -> TeamId {
    (c as u8 - b'A') as TeamId
}

/// Columns A and B of the 14-round, 8-team fragment.
pub fn chain8_columns() -> [Vec<(TeamId, Venue)>; 2] {
    let a = (1..8).map(|o| (o, Home)).chain((1..8).map(|o| (o, Away))).collect();
    let b = "@A @H @C @F @G @E @D A D E F C H G"
        .split(' ')
        .map(|tok| match tok.strip_prefix('@') {
            Some(x) => (team(x.chars().next().unwrap()), Away),
            None => (team(tok.chars().next().unwrap()), Home),
        })
        .collect();
    [a, b]
}

/// Backtracking oracle: completes teams C..H around the fixed A and B columns
/// so that the result is a double round-robin.
pub fn complete_chain8() -> Option<Schedule> {
    let n = 8;
    let rounds = 14;
    let mut grid: Vec<Vec<Option<(TeamId, Venue)>>> = vec![vec![None; rounds]; n];
    let mut home_used = vec![vec![false; n]; n];
    for (t, col) in chain8_columns().into_iter().enumerate() {
        for (r, (o, v)) in col.into_iter().enumerate() {
            grid[t][r] = Some((o, v));
            grid[o][r] = Some((t, !v));
            let (h, a) = if v == Home { (t, o) } else { (o, t) };
            home_used[h][a] = true;
        }
    }

    fn fill(
        grid: &mut Vec<Vec<Option<(TeamId, Venue)>>>,
        home_used: &mut Vec<Vec<bool>>,
        r: usize,
        rounds: usize,
    ) -> bool {
        if r == rounds {
            return true;
        }
        let n = grid.len();
        let Some(t) = (0..n).find(|&t| grid[t][r].is_none()) else {
            return fill(grid, home_used, r + 1, rounds);
        };
        for o in (t + 1)..n {
            if grid[o][r].is_some() {
                continue;
            }
            for (h, a) in [(t, o), (o, t)] {
                if home_used[h][a] {
                    continue;
                }
                home_used[h][a] = true;
                grid[h][r] = Some((a, Home));
                grid[a][r] = Some((h, Away));
                if fill(grid, home_used, r, rounds) {
                    return true;
                }
                grid[h][r] = None;
                grid[a][r] = None;
                home_used[h][a] = false;
            }
        }
        false
    }

    if !fill(&mut grid, &mut home_used, 0, rounds) {
        return None;
    }
    let rows = grid
        .into_iter()
        .map(|row| row.into_iter().map(Option::unwrap).collect())
        .collect();
    Schedule::from_rows(rows).ok()
}

/// Independent double round-robin check by counting meetings per ordered pair.
pub fn drr_oracle(s: &Schedule) -> bool {
    let n = s.n();
    let mut home = vec![vec![0; n]; n];
    let mut away = vec![vec![0; n]; n];
    for t in 0..n {
        for r in 0..s.rounds() {
            let (o, v) = s.game(t, r);
            if o == t || s.opponent(o, r) != t || s.venue(o, r) == v {
                return false;
            }
            match v {
                Home => home[t][o] += 1,
                Away => away[t][o] += 1,
            }
        }
    }
    (0..n).all(|t| (0..n).all(|o| t == o || (home[t][o] == 1 && away[t][o] == 1)))
}

/// Path-walk oracle: lists the location sequence explicitly and sums legs.
pub fn walk_distance(s: &Schedule, d: &[Vec<i64>], t: TeamId) -> i64 {
    let mut stops = vec![t];
    for r in 0..s.rounds() {
        let (o, v) = s.game(t, r);
        stops.push(if v == Home { t } else { o });
    }
    stops.push(t);
    stops.windows(2).map(|w| d[w[0]][w[1]]).sum()
}

pub fn toy4_matrix() -> Vec<Vec<i64>> {
    TOY4.lines()
        .skip(1)
        .map(|l| l.split(' ').map(|x| x.parse().unwrap()).collect())
        .collect()
}

/// Every n=4 double round-robin: each of the three perfect matchings occurs
/// in two rounds with mirrored venues.
pub fn enumerate_drr4() -> Vec<Schedule> {
    let matchings = [[(0, 1), (2, 3)], [(0, 2), (1, 3)], [(0, 3), (1, 2)]];
    // A round is a matching plus an orientation bit per game.
    let round_games = |m: usize, bits: u8| -> Vec<(TeamId, TeamId)> {
        matchings[m]
            .iter()
            .enumerate()
            .map(|(g, &(x, y))| if bits >> g & 1 == 0 { (x, y) } else { (y, x) })
            .collect()
    };
    let mut out = Vec::new();
    let mut seq: Vec<(usize, u8)> = Vec::new();
    fn rec(
        seq: &mut Vec<(usize, u8)>,
        out: &mut Vec<Schedule>,
        round_games: &dyn Fn(usize, u8) -> Vec<(TeamId, TeamId)>,
    ) {
        if seq.len() == 6 {
            let mut rows = vec![Vec::new(); 4];
            for &(m, bits) in seq.iter() {
                let mut round = [(0, Home); 4];
                for (h, a) in round_games(m, bits) {
                    round[h] = (a, Home);
                    round[a] = (h, Away);
                }
                for t in 0..4 {
                    rows[t].push(round[t]);
                }
            }
            let s = Schedule::from_rows(rows).unwrap();
            if drr_oracle(&s) {
                out.push(s);
            }
            return;
        }
        for m in 0..3 {
            if seq.iter().filter(|&&(x, _)| x == m).count() == 2 {
                continue;
            }
            for bits in 0..4u8 {
                seq.push((m, bits));
                rec(seq, out, round_games);
                seq.pop();
            }
        }
    }
    rec(&mut seq, &mut out, &round_games);
    out
}

/// Exhaustive optimum over feasible n=4 double round-robins.
pub fn brute_force_optimum4(d: &[Vec<i64>]) -> Option<i64> {
    enumerate_drr4()
        .iter()
        .filter(|s| ttp_core::violations(s).total == 0)
        .map(|s| (0..4).map(|t| walk_distance(s, d, t)).sum())
        .min()
}

/// Random distances on a 3-D grid, rounded Euclidean.
pub fn random_euclidean<R: Rng>(n: usize, rng: &mut R) -> Instance<i64> {
    let pts: Vec<[f64; 3]> = (0..n)
        .map(|_| {
            [
                rng.gen_range(0.0..100.0),
                rng.gen_range(0.0..100.0),
                rng.gen_range(0.0..100.0),
            ]
        })
        .collect();
    let rows = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let d: f64 = (0..3).map(|k| (pts[i][k] - pts[j][k]).powi(2)).sum();
                    d.sqrt().round() as i64
                })
                .collect()
        })
        .collect();
    Instance::new(rows, None).unwrap()
}
