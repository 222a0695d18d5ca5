//! Move descriptors and the proposal distribution used by the annealer.

use std::fmt;

use rand::Rng;

use crate::schedule::Schedule;
use crate::{RoundId, TeamId};

use super::lookahead::{lpst, PlanPenalties};
use super::moves::{check_rounds, check_teams, partial_swap_rounds, swap_homes, swap_rounds, swap_teams};
use super::pst::partial_swap_teams;
use super::MoveError;

/// Attempts at drawing valid arguments before falling back to swapHomes.
const MAX_DRAWS: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum MoveKind {
    SwapHomes,
    SwapRounds,
    SwapTeams,
    SwapTeamsVN,
    PartialSwapRounds,
    PartialSwapTeams,
    Lpst,
}

impl MoveKind {
    pub const ALL: [MoveKind; 7] = [
        MoveKind::SwapHomes,
        MoveKind::SwapRounds,
        MoveKind::SwapTeams,
        MoveKind::SwapTeamsVN,
        MoveKind::PartialSwapRounds,
        MoveKind::PartialSwapTeams,
        MoveKind::Lpst,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        match self {
            MoveKind::SwapHomes => "swap_homes",
            MoveKind::SwapRounds => "swap_rounds",
            MoveKind::SwapTeams => "swap_teams",
            MoveKind::SwapTeamsVN => "swap_teams_vn",
            MoveKind::PartialSwapRounds => "partial_swap_rounds",
            MoveKind::PartialSwapTeams => "partial_swap_teams",
            MoveKind::Lpst => "lpst",
        }
    }

    pub fn from_name(name: &str) -> Option<MoveKind> {
        MoveKind::ALL.into_iter().find(|k| k.name() == name)
    }
}

impl fmt::Display for MoveKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MoveSpec {
    SwapHomes { ti: TeamId, tj: TeamId },
    SwapRounds { rk: RoundId, rl: RoundId },
    SwapTeams { ti: TeamId, tj: TeamId },
    SwapTeamsVN { ti: TeamId, tj: TeamId },
    PartialSwapRounds { ti: TeamId, rk: RoundId, rl: RoundId },
    PartialSwapTeams { ti: TeamId, tj: TeamId, r: RoundId },
    Lpst { ti: TeamId, tj: TeamId, r: RoundId },
}

impl MoveSpec {
    pub fn kind(&self) -> MoveKind {
        match self {
            MoveSpec::SwapHomes { .. } => MoveKind::SwapHomes,
            MoveSpec::SwapRounds { .. } => MoveKind::SwapRounds,
            MoveSpec::SwapTeams { .. } => MoveKind::SwapTeams,
            MoveSpec::SwapTeamsVN { .. } => MoveKind::SwapTeamsVN,
            MoveSpec::PartialSwapRounds { .. } => MoveKind::PartialSwapRounds,
            MoveSpec::PartialSwapTeams { .. } => MoveKind::PartialSwapTeams,
            MoveSpec::Lpst { .. } => MoveKind::Lpst,
        }
    }

    /// Checks the move's preconditions against `s`.
    pub fn check(&self, s: &Schedule) -> Result<(), MoveError> {
        match *self {
            MoveSpec::SwapHomes { ti, tj } | MoveSpec::SwapTeams { ti, tj } | MoveSpec::SwapTeamsVN { ti, tj } => {
                check_teams(s, ti, tj)
            }
            MoveSpec::SwapRounds { rk, rl } => check_rounds(s, rk, rl),
            MoveSpec::PartialSwapRounds { ti, rk, rl } => {
                if ti >= s.n() {
                    return Err(MoveError::TeamOutOfRange(ti));
                }
                check_rounds(s, rk, rl)
            }
            MoveSpec::PartialSwapTeams { ti, tj, r } | MoveSpec::Lpst { ti, tj, r } => {
                check_teams(s, ti, tj)?;
                if r >= s.rounds() {
                    return Err(MoveError::RoundOutOfRange(r));
                }
                if s.opponent(ti, r) == tj {
                    return Err(MoveError::MutualGame { ti, tj, round: r });
                }
                Ok(())
            }
        }
    }

    pub fn apply<R: Rng + ?Sized>(
        &self,
        s: &Schedule,
        penalties: PlanPenalties,
        rng: &mut R,
    ) -> Result<Schedule, MoveError> {
        match *self {
            MoveSpec::SwapHomes { ti, tj } => swap_homes(s, ti, tj),
            MoveSpec::SwapRounds { rk, rl } => swap_rounds(s, rk, rl),
            MoveSpec::SwapTeams { ti, tj } => swap_teams(s, ti, tj, false),
            MoveSpec::SwapTeamsVN { ti, tj } => swap_teams(s, ti, tj, true),
            MoveSpec::PartialSwapRounds { ti, rk, rl } => partial_swap_rounds(s, ti, rk, rl),
            MoveSpec::PartialSwapTeams { ti, tj, r } => partial_swap_teams(s, ti, tj, r, false, rng),
            MoveSpec::Lpst { ti, tj, r } => lpst(s, ti, tj, r, penalties.look, penalties.exit, rng),
        }
    }
}

/// Probability of proposing each [`MoveKind`], indexed by [`MoveKind::index`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProposalWeights([f64; 7]);

/// Default share of L-PST proposals.
pub const DEFAULT_LPST_WEIGHT: f64 = 0.66;

impl Default for ProposalWeights {
    fn default() -> Self {
        let rest = (1.0 - DEFAULT_LPST_WEIGHT) / 6.0;
        let mut w = [rest; 7];
        w[MoveKind::Lpst.index()] = DEFAULT_LPST_WEIGHT;
        ProposalWeights(w)
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum WeightsError {
    #[error("proposal weight for {0} must be finite and non-negative")]
    Negative(MoveKind),
    #[error("proposal weights must sum to 1, got {0}")]
    Sum(f64),
}

impl ProposalWeights {
    pub fn new(weights: [f64; 7]) -> Result<Self, WeightsError> {
        for k in MoveKind::ALL {
            let w = weights[k.index()];
            if !w.is_finite() || w < 0.0 {
                return Err(WeightsError::Negative(k));
            }
        }
        let sum: f64 = weights.iter().sum();
        if (sum - 1.0).abs() > 1e-6 {
            return Err(WeightsError::Sum(sum));
        }
        Ok(ProposalWeights(weights))
    }

    /// All mass on one move kind.
    pub fn only(kind: MoveKind) -> Self {
        let mut w = [0.0; 7];
        w[kind.index()] = 1.0;
        ProposalWeights(w)
    }

    pub fn get(&self, kind: MoveKind) -> f64 {
        self.0[kind.index()]
    }

    pub fn as_array(&self) -> [f64; 7] {
        self.0
    }

    pub fn sample_kind<R: Rng + ?Sized>(&self, rng: &mut R) -> MoveKind {
        let mut u: f64 = rng.gen::<f64>() * self.0.iter().sum::<f64>();
        for k in MoveKind::ALL {
            let w = self.0[k.index()];
            if u < w {
                return k;
            }
            u -= w;
        }
        // Rounding left u at the top edge; take the last kind with mass.
        MoveKind::ALL
            .into_iter()
            .rev()
            .find(|k| self.0[k.index()] > 0.0)
            .unwrap_or(MoveKind::SwapHomes)
    }
}

fn distinct_pair<R: Rng + ?Sized>(rng: &mut R, n: usize) -> (usize, usize) {
    let a = rng.gen_range(0..n);
    let mut b = rng.gen_range(0..n - 1);
    if b >= a {
        b += 1;
    }
    (a, b)
}

fn draw_args<R: Rng + ?Sized>(kind: MoveKind, s: &Schedule, rng: &mut R) -> MoveSpec {
    let (n, rounds) = (s.n(), s.rounds());
    match kind {
        MoveKind::SwapHomes => {
            let (ti, tj) = distinct_pair(rng, n);
            MoveSpec::SwapHomes { ti, tj }
        }
        MoveKind::SwapRounds => {
            let (rk, rl) = distinct_pair(rng, rounds);
            MoveSpec::SwapRounds { rk, rl }
        }
        MoveKind::SwapTeams => {
            let (ti, tj) = distinct_pair(rng, n);
            MoveSpec::SwapTeams { ti, tj }
        }
        MoveKind::SwapTeamsVN => {
            let (ti, tj) = distinct_pair(rng, n);
            MoveSpec::SwapTeamsVN { ti, tj }
        }
        MoveKind::PartialSwapRounds => {
            let ti = rng.gen_range(0..n);
            let (rk, rl) = distinct_pair(rng, rounds);
            MoveSpec::PartialSwapRounds { ti, rk, rl }
        }
        MoveKind::PartialSwapTeams => {
            let (ti, tj) = distinct_pair(rng, n);
            MoveSpec::PartialSwapTeams {
                ti,
                tj,
                r: rng.gen_range(0..rounds),
            }
        }
        MoveKind::Lpst => {
            let (ti, tj) = distinct_pair(rng, n);
            MoveSpec::Lpst {
                ti,
                tj,
                r: rng.gen_range(0..rounds),
            }
        }
    }
}

/// Draws a move kind from `weights`, then uniformly valid arguments for it.
pub fn sample_move<R: Rng + ?Sized>(s: &Schedule, weights: &ProposalWeights, rng: &mut R) -> MoveSpec {
    let kind = weights.sample_kind(rng);
    for _ in 0..MAX_DRAWS {
        let spec = draw_args(kind, s, rng);
        if spec.check(s).is_ok() {
            return spec;
        }
    }
    let (ti, tj) = distinct_pair(rng, s.n());
    MoveSpec::SwapHomes { ti, tj }
}
