//! The basic neighbourhood: swapHomes, swapRounds, swapTeams and
//! partialSwapRounds.

use crate::schedule::Schedule;
use crate::{RoundId, TeamId};

use super::MoveError;

pub(crate) fn check_teams(s: &Schedule, ti: TeamId, tj: TeamId) -> Result<(), MoveError> {
    for t in [ti, tj] {
        if t >= s.n() {
            return Err(MoveError::TeamOutOfRange(t));
        }
    }
    if ti == tj {
        return Err(MoveError::SameTeam(ti));
    }
    Ok(())
}

pub(crate) fn check_rounds(s: &Schedule, rk: RoundId, rl: RoundId) -> Result<(), MoveError> {
    for r in [rk, rl] {
        if r >= s.rounds() {
            return Err(MoveError::RoundOutOfRange(r));
        }
    }
    if rk == rl {
        return Err(MoveError::SameRound(rk));
    }
    Ok(())
}

pub(crate) fn swap_homes_in_place(s: &mut Schedule, ti: TeamId, tj: TeamId) -> Result<(), MoveError> {
    check_teams(s, ti, tj)?;
    for r in 0..s.rounds() {
        if s.opponent(ti, r) == tj {
            s.flip_game(ti, r);
        }
    }
    Ok(())
}

/// Reverses home/away in every game between `ti` and `tj`.
pub fn swap_homes(s: &Schedule, ti: TeamId, tj: TeamId) -> Result<Schedule, MoveError> {
    let mut out = s.clone();
    swap_homes_in_place(&mut out, ti, tj)?;
    Ok(out)
}

/// Exchanges rounds `rk` and `rl` for every team.
pub fn swap_rounds(s: &Schedule, rk: RoundId, rl: RoundId) -> Result<Schedule, MoveError> {
    check_rounds(s, rk, rl)?;
    let mut out = s.clone();
    for t in 0..s.n() {
        out.swap_row_rounds(t, rk, rl);
    }
    Ok(out)
}

/// Exchanges the schedules of `ti` and `tj` outside their mutual games.
///
/// With `violation_neutral` the result is composed with `swap_homes(ti, tj)`,
/// which makes the two teams trade complete venue patterns: the violation
/// counts are unchanged.
pub fn swap_teams(s: &Schedule, ti: TeamId, tj: TeamId, violation_neutral: bool) -> Result<Schedule, MoveError> {
    check_teams(s, ti, tj)?;
    let mut out = s.clone();
    for r in 0..s.rounds() {
        if out.opponent(ti, r) != tj {
            out.exchange_games(ti, tj, r);
        }
    }
    if violation_neutral {
        swap_homes_in_place(&mut out, ti, tj)?;
    }
    Ok(out)
}

/// Teams whose rounds `rk` and `rl` must be exchanged together with `ti`'s.
pub fn partial_swap_rounds_closure(s: &Schedule, ti: TeamId, rk: RoundId, rl: RoundId) -> Vec<TeamId> {
    let mut member = vec![false; s.n()];
    let mut stack = vec![ti];
    member[ti] = true;
    while let Some(t) = stack.pop() {
        for r in [rk, rl] {
            let o = s.opponent(t, r);
            if !member[o] {
                member[o] = true;
                stack.push(o);
            }
        }
    }
    (0..s.n()).filter(|&t| member[t]).collect()
}

/// Swaps rounds `rk` and `rl` for `ti` and, transitively, for every opponent
/// met in either round until the closure is consistent.
pub fn partial_swap_rounds(s: &Schedule, ti: TeamId, rk: RoundId, rl: RoundId) -> Result<Schedule, MoveError> {
    if ti >= s.n() {
        return Err(MoveError::TeamOutOfRange(ti));
    }
    check_rounds(s, rk, rl)?;
    let mut out = s.clone();
    for t in partial_swap_rounds_closure(s, ti, rk, rl) {
        out.swap_row_rounds(t, rk, rl);
    }
    Ok(out)
}
