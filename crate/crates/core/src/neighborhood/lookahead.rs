//! Lookahead Partial Swap Teams (L-PST).
//!
//! A simulated partialSwapTeams produces `t_j`'s swaplist. If some opponent
//! `t_l` occurs twice in it, flipping `t_j`'s venues against `t_l` before the
//! chain makes `t_i` skip straight past the second occurrence, saving `gap`
//! exchanges. The flip is undone afterwards. Independently, if `t_i` would
//! receive its round-`r` opponent at the wrong venue before the end of the
//! list, the chain can stop there and the two duplicated venues are repaired.
//! The plan with the fewest predicted exchanges, after adding a penalty for
//! each device used, wins; ties are broken uniformly at random.

use rand::Rng;

use crate::schedule::Schedule;
use crate::{RoundId, TeamId};

use super::moves::swap_homes_in_place;
use super::pst::{repair_early_exit, run_chain, simulate_pst, SwapList};
use super::MoveError;

/// Smallest gap worth a preconditioning flip.
pub const MIN_GAP: usize = 2;

const COST_EPS: f64 = 1e-9;

/// Additive plan penalties for the preconditioning flip and the early-exit repair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlanPenalties {
    pub look: f64,
    pub exit: f64,
}

impl Default for PlanPenalties {
    fn default() -> Self {
        PlanPenalties { look: 2.0, exit: 3.0 }
    }
}

/// A look-ahead opponent and the two swaplist positions that frame its gap.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Lookahead {
    pub team: TeamId,
    pub first: usize,
    pub second: usize,
}

impl Lookahead {
    pub fn gap(&self) -> usize {
        self.second - self.first
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LookaheadPlan {
    pub lookahead: Option<Lookahead>,
    /// Swaplist position at which the chain stops early.
    pub early_exit: Option<usize>,
    pub predicted_swaps: usize,
    pub cost: f64,
}

impl LookaheadPlan {
    /// The plain chain over the whole list.
    pub fn full(sl: &SwapList) -> Self {
        LookaheadPlan {
            lookahead: None,
            early_exit: None,
            predicted_swaps: sl.len(),
            cost: sl.len() as f64,
        }
    }

    /// Plan using `team` as look-ahead opponent, without early exit.
    pub fn lookahead_on(sl: &SwapList, team: TeamId, p_look: f64) -> Option<Self> {
        let la = sl.lookahead_candidates().into_iter().find(|c| c.team == team)?;
        let predicted_swaps = sl.len() - la.gap();
        Some(LookaheadPlan {
            lookahead: Some(la),
            early_exit: None,
            predicted_swaps,
            cost: predicted_swaps as f64 + p_look,
        })
    }

    pub fn gap(&self) -> Option<usize> {
        self.lookahead.map(|la| la.gap())
    }
}

impl SwapList {
    /// Every opponent occurring at least twice, framed by its widest pair of
    /// positions, when that gap is at least [`MIN_GAP`]. Venue is ignored.
    pub fn lookahead_candidates(&self) -> Vec<Lookahead> {
        let entries = self.entries();
        let mut out: Vec<Lookahead> = Vec::new();
        for (first, e) in entries.iter().enumerate() {
            if entries[..first].iter().any(|p| p.opponent == e.opponent) {
                continue;
            }
            let second = entries.iter().rposition(|p| p.opponent == e.opponent).unwrap_or(first);
            if second - first >= MIN_GAP {
                out.push(Lookahead {
                    team: e.opponent,
                    first,
                    second,
                });
            }
        }
        out
    }

    /// Earliest position holding the final opponent at the other venue.
    pub fn early_exit_index(&self) -> Option<usize> {
        let (last, rest) = self.entries().split_last()?;
        rest.iter()
            .position(|e| e.opponent == last.opponent && e.venue != last.venue)
    }
}

/// All candidate plans for `sl`; `allow` filters look-ahead opponents.
pub fn plan_options(sl: &SwapList, penalties: PlanPenalties, allow: impl Fn(TeamId) -> bool) -> Vec<LookaheadPlan> {
    let len = sl.len();
    let mut plans = vec![LookaheadPlan::full(sl)];
    let exit = sl.early_exit_index();
    if let Some(e) = exit {
        plans.push(LookaheadPlan {
            lookahead: None,
            early_exit: Some(e),
            predicted_swaps: e + 1,
            cost: (e + 1) as f64 + penalties.exit,
        });
    }
    for la in sl.lookahead_candidates().into_iter().filter(|la| allow(la.team)) {
        let swaps = len - la.gap();
        plans.push(LookaheadPlan {
            lookahead: Some(la),
            early_exit: None,
            predicted_swaps: swaps,
            cost: swaps as f64 + penalties.look,
        });
        // The exit point must lie after the skipped stretch.
        if let Some(e) = exit.filter(|&e| e > la.second) {
            let swaps = la.first + 1 + (e - la.second);
            plans.push(LookaheadPlan {
                lookahead: Some(la),
                early_exit: Some(e),
                predicted_swaps: swaps,
                cost: swaps as f64 + penalties.look + penalties.exit,
            });
        }
    }
    plans
}

/// Cheapest plan among those whose look-ahead opponent passes `allow`.
pub fn select_plan_with<R: Rng + ?Sized>(
    sl: &SwapList,
    penalties: PlanPenalties,
    allow: impl Fn(TeamId) -> bool,
    rng: &mut R,
) -> LookaheadPlan {
    let mut plans = plan_options(sl, penalties, allow);
    let best = plans.iter().map(|p| p.cost).fold(f64::INFINITY, f64::min);
    plans.retain(|p| p.cost <= best + COST_EPS);
    let k = rng.gen_range(0..plans.len());
    plans.swap_remove(k)
}

pub fn select_plan<R: Rng + ?Sized>(sl: &SwapList, p_look: f64, p_exit: f64, rng: &mut R) -> LookaheadPlan {
    select_plan_with(
        sl,
        PlanPenalties {
            look: p_look,
            exit: p_exit,
        },
        |_| true,
        rng,
    )
}

#[derive(Debug, Clone)]
pub struct LpstOutcome {
    pub schedule: Schedule,
    pub plan: LookaheadPlan,
    /// Rounds exchanged by the chain phase, in order.
    pub exchanged_rounds: Vec<RoundId>,
    pub early_exit: bool,
}

impl LpstOutcome {
    pub fn exchanges(&self) -> usize {
        self.exchanged_rounds.len()
    }
}

/// Executes `plan`: precondition, chain, revert the precondition, repair.
pub fn execute_plan<R: Rng + ?Sized>(
    s: &Schedule,
    ti: TeamId,
    tj: TeamId,
    r: RoundId,
    plan: &LookaheadPlan,
    rng: &mut R,
) -> Result<LpstOutcome, MoveError> {
    let mut out = s.clone();
    if let Some(la) = plan.lookahead {
        if la.team == ti {
            return Err(MoveError::LookaheadIsMover(ti));
        }
        swap_homes_in_place(&mut out, tj, la.team)?;
    }
    let run = run_chain(&mut out, ti, tj, r, plan.early_exit.is_some())?;
    if let Some(la) = plan.lookahead {
        swap_homes_in_place(&mut out, tj, la.team)?;
    }
    if run.early_exit {
        repair_early_exit(&mut out, ti, tj, run.lost, rng)?;
    }
    Ok(LpstOutcome {
        schedule: out,
        plan: plan.clone(),
        exchanged_rounds: run.entries.iter().map(|e| e.round).collect(),
        early_exit: run.early_exit,
    })
}

pub fn lpst_traced<R: Rng + ?Sized>(
    s: &Schedule,
    ti: TeamId,
    tj: TeamId,
    r: RoundId,
    penalties: PlanPenalties,
    rng: &mut R,
) -> Result<LpstOutcome, MoveError> {
    let sl = simulate_pst(s, ti, tj, r)?;
    let plan = select_plan_with(&sl, penalties, |t| t != ti, rng);
    execute_plan(s, ti, tj, r, &plan, rng)
}

/// Lookahead Partial Swap Teams with optional early exit.
pub fn lpst<R: Rng + ?Sized>(
    s: &Schedule,
    ti: TeamId,
    tj: TeamId,
    r: RoundId,
    p_look: f64,
    p_exit: f64,
    rng: &mut R,
) -> Result<Schedule, MoveError> {
    lpst_traced(
        s,
        ti,
        tj,
        r,
        PlanPenalties {
            look: p_look,
            exit: p_exit,
        },
        rng,
    )
    .map(|o| o.schedule)
}
