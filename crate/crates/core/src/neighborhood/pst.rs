//! partialSwapTeams: the game-exchange chain between two teams, its
//! side-effect-free simulation, and the early-exit repair.

use rand::Rng;

use crate::schedule::{Schedule, Venue};
use crate::{RoundId, TeamId};

use super::moves::check_teams;
use super::MoveError;

/// One game of `t_j` visited by the chain, as `t_j` held it before the exchange.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SwapEntry {
    pub round: RoundId,
    pub opponent: TeamId,
    pub venue: Venue,
}

/// `t_j`'s opponents in the order the chain visits rounds.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SwapList {
    owner: TeamId,
    entries: Vec<SwapEntry>,
}

impl SwapList {
    pub fn new(owner: TeamId, entries: Vec<SwapEntry>) -> Self {
        debug_assert!(entries.iter().all(|e| e.opponent != owner));
        SwapList { owner, entries }
    }

    /// Builds a list from `(opponent, venue)` pairs, numbering rounds by
    /// position. Useful for planning over hand-written lists.
    pub fn from_games(owner: TeamId, games: impl IntoIterator<Item = (TeamId, Venue)>) -> Self {
        let entries = games
            .into_iter()
            .enumerate()
            .map(|(round, (opponent, venue))| SwapEntry { round, opponent, venue })
            .collect();
        Self::new(owner, entries)
    }

    pub fn owner(&self) -> TeamId {
        self.owner
    }

    pub fn entries(&self) -> &[SwapEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn rounds(&self) -> Vec<RoundId> {
        self.entries.iter().map(|e| e.round).collect()
    }

    pub fn games(&self) -> Vec<(TeamId, Venue)> {
        self.entries.iter().map(|e| (e.opponent, e.venue)).collect()
    }
}

pub(crate) struct ChainRun {
    /// `ti`'s opponent in the starting round.
    pub lost: TeamId,
    pub entries: Vec<SwapEntry>,
    pub early_exit: bool,
}

/// Runs the exchange chain on `s`. Stops when `ti` receives back the game it
/// lost in round `r`, or, with `allow_early_exit`, the same opponent at the
/// other venue.
pub(crate) fn run_chain(
    s: &mut Schedule,
    ti: TeamId,
    tj: TeamId,
    r: RoundId,
    allow_early_exit: bool,
) -> Result<ChainRun, MoveError> {
    check_teams(s, ti, tj)?;
    if r >= s.rounds() {
        return Err(MoveError::RoundOutOfRange(r));
    }
    if s.opponent(ti, r) == tj {
        return Err(MoveError::MutualGame { ti, tj, round: r });
    }
    let (lost, lost_venue) = s.game(ti, r);
    let mut round = r;
    let mut entries = Vec::new();
    loop {
        if entries.len() == s.rounds() {
            return Err(MoveError::ChainTooLong { limit: s.rounds() });
        }
        let (got, got_venue) = s.game(tj, round);
        entries.push(SwapEntry {
            round,
            opponent: got,
            venue: got_venue,
        });
        s.exchange_games(ti, tj, round);
        if got == lost {
            if got_venue == lost_venue {
                return Ok(ChainRun {
                    lost,
                    entries,
                    early_exit: false,
                });
            }
            if allow_early_exit {
                return Ok(ChainRun {
                    lost,
                    entries,
                    early_exit: true,
                });
            }
        }
        // Continue where ti now holds the duplicate of the game just received.
        round = s
            .find_game(ti, got, got_venue, round)
            .ok_or(MoveError::BrokenChain { round })?;
    }
}

/// After an early exit `ti` and `tj` each hold two same-venue games against
/// `x`; flip one of each, chosen uniformly, on both sides of the game.
pub(crate) fn repair_early_exit<R: Rng + ?Sized>(
    s: &mut Schedule,
    ti: TeamId,
    tj: TeamId,
    x: TeamId,
    rng: &mut R,
) -> Result<(), MoveError> {
    for team in [ti, tj] {
        let rounds: Vec<RoundId> = s.meetings(team, x).collect();
        match rounds[..] {
            [a, b] if s.venue(team, a) == s.venue(team, b) => {
                let pick = if rng.gen_bool(0.5) { a } else { b };
                s.flip_game(team, pick);
            }
            _ => return Err(MoveError::Repair { team, opponent: x }),
        }
    }
    Ok(())
}

/// Simulates `partialSwapTeams(ti, tj, r)` and returns `tj`'s swaplist.
/// `s` is left untouched.
pub fn simulate_pst(s: &Schedule, ti: TeamId, tj: TeamId, r: RoundId) -> Result<SwapList, MoveError> {
    let mut scratch = s.clone();
    let run = run_chain(&mut scratch, ti, tj, r, false)?;
    Ok(SwapList::new(tj, run.entries))
}

/// Result of an executed partialSwapTeams.
#[derive(Debug, Clone)]
pub struct PstOutcome {
    pub schedule: Schedule,
    pub swaps: SwapList,
    pub early_exit: bool,
}

impl PstOutcome {
    pub fn exchanges(&self) -> usize {
        self.swaps.len()
    }
}

pub fn partial_swap_teams_traced<R: Rng + ?Sized>(
    s: &Schedule,
    ti: TeamId,
    tj: TeamId,
    r: RoundId,
    allow_early_exit: bool,
    rng: &mut R,
) -> Result<PstOutcome, MoveError> {
    let mut out = s.clone();
    let run = run_chain(&mut out, ti, tj, r, allow_early_exit)?;
    if run.early_exit {
        repair_early_exit(&mut out, ti, tj, run.lost, rng)?;
    }
    Ok(PstOutcome {
        schedule: out,
        swaps: SwapList::new(tj, run.entries),
        early_exit: run.early_exit,
    })
}

/// Exchanges games between `ti` and `tj`, starting in round `r`, until the
/// schedule is a double round-robin again. With `allow_early_exit` the chain
/// stops as soon as `ti` gets its round-`r` opponent back at the wrong venue
/// and the venues are repaired.
pub fn partial_swap_teams<R: Rng + ?Sized>(
    s: &Schedule,
    ti: TeamId,
    tj: TeamId,
    r: RoundId,
    allow_early_exit: bool,
    rng: &mut R,
) -> Result<Schedule, MoveError> {
    partial_swap_teams_traced(s, ti, tj, r, allow_early_exit, rng).map(|o| o.schedule)
}
