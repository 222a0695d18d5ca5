//! Simulated annealing without reheats over the L-PST neighbourhood.
//!
//! Each chain starts from a random double round-robin, proposes moves drawn
//! from [`ProposalWeights`], accepts them by the Metropolis rule on the
//! composite objective and cools geometrically once per proposal. Chains are
//! independent; their incumbents are reduced at the end, feasible schedules
//! first.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::instance::Instance;
use crate::neighborhood::{
    sample_move, swap_homes, swap_rounds, MoveKind, PlanPenalties, ProposalWeights, WeightsError,
};
use crate::scalar::Distance;
use crate::schedule::{blend_cost, total_distance, violations, Schedule, Venue};
use crate::TeamId;

/// Temperature ratio between the first and the last proposal for default parameters.
pub const DEFAULT_COOLING_SPAN: f64 = 1e-4;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParamError {
    #[error("initial temperature must be positive, got {0}")]
    Temperature(f64),
    #[error("cooling factor must lie in (0, 1), got {0}")]
    Beta(f64),
    #[error("violation weight must be positive, got {0}")]
    Weight(f64),
    #[error("plan penalties must be finite and non-negative")]
    Penalty,
    #[error("at least one chain is required")]
    Chains,
    #[error(transparent)]
    Weights(#[from] WeightsError),
}

#[derive(Debug, Clone, PartialEq)]
pub struct AnnealParams {
    pub t0: f64,
    pub beta: f64,
    pub steps: u64,
    /// Violation weight in the objective.
    pub w: f64,
    pub weights: ProposalWeights,
    pub p_look: f64,
    pub p_exit: f64,
    pub seed: u64,
    pub chains: usize,
    /// Stop a chain once it holds a feasible schedule at or below this distance.
    pub target: Option<f64>,
    /// Observer call interval in proposals; 0 disables progress reports.
    pub progress_stride: u64,
}

impl AnnealParams {
    /// Defaults scaled to the instance's mean distance.
    pub fn for_instance<D: Distance>(inst: &Instance<D>, steps: u64) -> Self {
        let mean = inst.mean_distance().max(1.0);
        AnnealParams {
            t0: mean,
            beta: Self::beta_for(steps, DEFAULT_COOLING_SPAN),
            steps,
            w: 4000.0 * mean,
            weights: ProposalWeights::default(),
            p_look: PlanPenalties::default().look,
            p_exit: PlanPenalties::default().exit,
            seed: 0,
            chains: 1,
            target: None,
            progress_stride: 0,
        }
    }

    /// Cooling factor taking the temperature down by `span` over `steps` proposals.
    pub fn beta_for(steps: u64, span: f64) -> f64 {
        if steps == 0 {
            return 0.5;
        }
        span.powf(1.0 / steps as f64)
            .clamp(f64::MIN_POSITIVE, 1.0 - f64::EPSILON)
    }

    pub fn validate(&self) -> Result<(), ParamError> {
        if !(self.t0 > 0.0 && self.t0.is_finite()) {
            return Err(ParamError::Temperature(self.t0));
        }
        if !(self.beta > 0.0 && self.beta < 1.0) {
            return Err(ParamError::Beta(self.beta));
        }
        if !(self.w > 0.0 && self.w.is_finite()) {
            return Err(ParamError::Weight(self.w));
        }
        if !(self.p_look >= 0.0 && self.p_exit >= 0.0 && self.p_look.is_finite() && self.p_exit.is_finite()) {
            return Err(ParamError::Penalty);
        }
        if self.chains == 0 {
            return Err(ParamError::Chains);
        }
        ProposalWeights::new(self.weights.as_array())?;
        Ok(())
    }

    pub fn penalties(&self) -> PlanPenalties {
        PlanPenalties {
            look: self.p_look,
            exit: self.p_exit,
        }
    }

    pub fn temperature_at(&self, step: u64) -> f64 {
        self.t0 * self.beta.powf(step as f64)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct KindStats {
    pub proposed: u64,
    pub accepted: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AnnealResult<D> {
    pub best: Schedule,
    pub best_distance: D,
    pub best_feasible: bool,
    pub best_objective: f64,
    /// Chain that produced `best`.
    pub chain: usize,
    pub proposals: u64,
    pub acceptances: u64,
    pub kind_stats: [KindStats; 7],
    /// Proposals that failed a move precondition and were counted as rejected.
    pub move_errors: u64,
    /// False when every chain stopped early on `target`.
    pub budget_exhausted: bool,
}

impl<D> AnnealResult<D> {
    pub fn stats(&self, kind: MoveKind) -> KindStats {
        self.kind_stats[kind.index()]
    }
}

/// Snapshot handed to a progress observer.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Progress {
    pub chain: usize,
    pub step: u64,
    pub temperature: f64,
    pub cost: f64,
    /// Best feasible distance so far in this chain.
    pub best_distance: Option<f64>,
}

/// Progress callback; called concurrently from every chain.
pub trait Observer: Sync {
    fn observe(&self, progress: &Progress);
}

impl<F: Fn(&Progress) + Sync> Observer for F {
    fn observe(&self, progress: &Progress) {
        self(progress)
    }
}

/// Metropolis acceptance.
pub fn accept<R: Rng + ?Sized>(delta: f64, temp: f64, rng: &mut R) -> bool {
    delta <= 0.0 || rng.gen::<f64>() < (-delta / temp).exp()
}

/// Circle-method single round-robin over a random team order, mirrored with
/// flipped venues, then shuffled by random swapRounds/swapHomes.
pub fn random_schedule<D: Distance, R: Rng + ?Sized>(inst: &Instance<D>, rng: &mut R) -> Schedule {
    random_drr(inst.n(), rng)
}

pub fn random_drr<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Schedule {
    assert!(n >= 2 && n.is_multiple_of(2), "team count must be even");
    let mut order: Vec<TeamId> = (0..n).collect();
    order.shuffle(rng);
    let half = n - 1;
    let mut rounds = vec![vec![(0, Venue::Home); n]; 2 * half];
    for k in 0..half {
        let mut pairs = vec![(order[n - 1], order[k])];
        for i in 1..n / 2 {
            pairs.push((order[(k + i) % half], order[(k + half - i) % half]));
        }
        for (a, b) in pairs {
            let va = if rng.gen_bool(0.5) { Venue::Home } else { Venue::Away };
            rounds[k][a] = (b, va);
            rounds[k][b] = (a, !va);
            rounds[k + half][a] = (b, !va);
            rounds[k + half][b] = (a, va);
        }
    }
    let mut s = Schedule::from_round_rows(rounds).expect("circle method yields a consistent schedule");
    for _ in 0..4 * n {
        let (x, y) = (rng.gen_range(0..s.rounds()), rng.gen_range(0..s.rounds()));
        if x != y {
            s = swap_rounds(&s, x, y).expect("distinct rounds");
        }
        let (a, b) = (rng.gen_range(0..n), rng.gen_range(0..n));
        if a != b {
            s = swap_homes(&s, a, b).expect("distinct teams");
        }
    }
    s
}

/// Random stream for chain `chain` under `seed`.
pub fn chain_rng(seed: u64, chain: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(chain as u64);
    rng
}

struct Incumbent<D> {
    schedule: Schedule,
    distance: D,
    objective: f64,
}

struct ChainOutcome<D> {
    feasible: Option<Incumbent<D>>,
    any: Incumbent<D>,
    proposals: u64,
    acceptances: u64,
    kind_stats: [KindStats; 7],
    move_errors: u64,
    hit_target: bool,
}

fn run_chain<D: Distance>(
    inst: &Instance<D>,
    params: &AnnealParams,
    chain: usize,
    observer: Option<&dyn Observer>,
) -> ChainOutcome<D> {
    let mut rng = chain_rng(params.seed, chain);
    let penalties = params.penalties();
    let evaluate = |s: &Schedule| {
        let d = total_distance(s, inst);
        let v = violations(s).total;
        (d, v, blend_cost(d.to_f64().unwrap_or(f64::INFINITY), v, params.w))
    };

    let mut current = random_schedule(inst, &mut rng);
    let (d0, v0, mut cost) = evaluate(&current);
    let mut any = Incumbent {
        schedule: current.clone(),
        distance: d0,
        objective: cost,
    };
    let mut feasible = (v0 == 0).then(|| Incumbent {
        schedule: current.clone(),
        distance: d0,
        objective: cost,
    });
    let reached = |f: &Option<Incumbent<D>>| match (params.target, f) {
        (Some(t), Some(inc)) => inc.distance.to_f64().is_some_and(|d| d <= t),
        _ => false,
    };

    let mut out_stats = [KindStats::default(); 7];
    let (mut proposals, mut acceptances, mut move_errors) = (0, 0, 0);
    let mut hit_target = reached(&feasible);
    for step in 0..params.steps {
        if hit_target {
            break;
        }
        let temp = params.temperature_at(step);
        let spec = sample_move(&current, &params.weights, &mut rng);
        let stats = &mut out_stats[spec.kind().index()];
        stats.proposed += 1;
        proposals += 1;
        match spec.apply(&current, penalties, &mut rng) {
            Ok(candidate) => {
                let (d, v, c) = evaluate(&candidate);
                if accept(c - cost, temp, &mut rng) {
                    stats.accepted += 1;
                    acceptances += 1;
                    current = candidate;
                    cost = c;
                    if v == 0 && feasible.as_ref().is_none_or(|inc| d < inc.distance) {
                        feasible = Some(Incumbent {
                            schedule: current.clone(),
                            distance: d,
                            objective: c,
                        });
                        hit_target = reached(&feasible);
                    }
                    if c < any.objective {
                        any = Incumbent {
                            schedule: current.clone(),
                            distance: d,
                            objective: c,
                        };
                    }
                }
            }
            Err(_) => move_errors += 1,
        }
        if let Some(obs) = observer {
            if params.progress_stride > 0 && (step + 1) % params.progress_stride == 0 {
                obs.observe(&Progress {
                    chain,
                    step: step + 1,
                    temperature: temp,
                    cost,
                    best_distance: feasible.as_ref().and_then(|inc| inc.distance.to_f64()),
                });
            }
        }
    }
    ChainOutcome {
        feasible,
        any,
        proposals,
        acceptances,
        kind_stats: out_stats,
        move_errors,
        hit_target,
    }
}

/// Runs `params.chains` independent annealing chains and returns the best
/// schedule found, preferring feasible schedules over infeasible ones.
pub fn run_anneal<D: Distance>(
    inst: &Instance<D>,
    params: &AnnealParams,
    observer: Option<&dyn Observer>,
) -> Result<AnnealResult<D>, ParamError> {
    params.validate()?;
    let outcomes: Vec<ChainOutcome<D>> = if params.chains == 1 {
        vec![run_chain(inst, params, 0, observer)]
    } else {
        std::thread::scope(|scope| {
            let handles: Vec<_> = (0..params.chains)
                .map(|c| scope.spawn(move || run_chain(inst, params, c, observer)))
                .collect();
            handles
                .into_iter()
                .map(|h| h.join().expect("annealing chain panicked"))
                .collect()
        })
    };

    let mut kind_stats = [KindStats::default(); 7];
    let (mut proposals, mut acceptances, mut move_errors) = (0, 0, 0);
    for o in &outcomes {
        proposals += o.proposals;
        acceptances += o.acceptances;
        move_errors += o.move_errors;
        for (acc, s) in kind_stats.iter_mut().zip(o.kind_stats.iter()) {
            acc.proposed += s.proposed;
            acc.accepted += s.accepted;
        }
    }
    let budget_exhausted = !outcomes.iter().any(|o| o.hit_target);

    let mut best: Option<(usize, &Incumbent<D>, bool)> = None;
    for (c, o) in outcomes.iter().enumerate() {
        let (inc, feasible) = match &o.feasible {
            Some(inc) => (inc, true),
            None => (&o.any, false),
        };
        let better = match best {
            None => true,
            Some((_, b, bf)) => match (feasible, bf) {
                (true, false) => true,
                (false, true) => false,
                (true, true) => inc.distance < b.distance,
                (false, false) => inc.objective < b.objective,
            },
        };
        if better {
            best = Some((c, inc, feasible));
        }
    }
    let (chain, inc, best_feasible) = best.expect("at least one chain");
    Ok(AnnealResult {
        best: inc.schedule.clone(),
        best_distance: inc.distance,
        best_feasible,
        best_objective: inc.objective,
        chain,
        proposals,
        acceptances,
        kind_stats,
        move_errors,
        budget_exhausted,
    })
}
