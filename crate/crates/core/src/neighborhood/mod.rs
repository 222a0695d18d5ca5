//! Schedule moves. Every move maps a double round-robin schedule to another
//! double round-robin schedule and leaves its input untouched.

mod lookahead;
mod moves;
mod proposal;
mod pst;

use thiserror::Error;

use crate::{RoundId, TeamId};

pub use lookahead::{
    execute_plan, lpst, lpst_traced, plan_options, select_plan, select_plan_with, Lookahead, LookaheadPlan,
    LpstOutcome, PlanPenalties, MIN_GAP,
};
pub use moves::{partial_swap_rounds, partial_swap_rounds_closure, swap_homes, swap_rounds, swap_teams};
pub use proposal::{sample_move, MoveKind, MoveSpec, ProposalWeights, WeightsError, DEFAULT_LPST_WEIGHT};
pub use pst::{partial_swap_teams, partial_swap_teams_traced, simulate_pst, PstOutcome, SwapEntry, SwapList};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MoveError {
    #[error("move needs two distinct teams, got {0} twice")]
    SameTeam(TeamId),
    #[error("move needs two distinct rounds, got {0} twice")]
    SameRound(RoundId),
    #[error("team {0} out of range")]
    TeamOutOfRange(TeamId),
    #[error("round {0} out of range")]
    RoundOutOfRange(RoundId),
    #[error("teams {ti} and {tj} play each other in round {round}")]
    MutualGame { ti: TeamId, tj: TeamId, round: RoundId },
    #[error("swap chain exceeded {limit} exchanges; schedule is not a double round-robin")]
    ChainTooLong { limit: usize },
    #[error("swap chain broke at round {round}: no duplicate game found")]
    BrokenChain { round: RoundId },
    #[error("early-exit repair failed: team {team} lacks two same-venue games against {opponent}")]
    Repair { team: TeamId, opponent: TeamId },
    #[error("look-ahead opponent {0} is the moving team")]
    LookaheadIsMover(TeamId),
}
