//! Traveling Tournament Problem solver built around the Lookahead Partial
//! Swap Teams (L-PST) neighbourhood.
//!
//! The crate is generic over the distance scalar ([`Distance`]); the aliases
//! [`IntInstance`] and [`RealInstance`] cover the usual integer and float
//! matrices.

pub mod annealer;
pub mod instance;
pub mod io;
pub mod neighborhood;
pub mod scalar;
pub mod schedule;

/// 0-based team index.
pub type TeamId = usize;
/// 0-based round index.
pub type RoundId = usize;

pub use annealer::{accept, random_schedule, run_anneal, AnnealParams, AnnealResult, Observer, Progress};
pub use instance::{Instance, InstanceError};
pub use io::{
    parse_instance, parse_schedule, parse_schedule_any, parse_solution, render_schedule, write_solution, ParseError,
};
pub use scalar::Distance;
pub use schedule::{
    count_atmost_violations, count_norepeat_violations, is_double_round_robin, objective, team_distance,
    team_distances, total_distance, violations, Schedule, Venue, ViolationReport,
};

/// Instance with integer distances, as in the challenge data sets.
pub type IntInstance = Instance<i64>;
/// Instance with real-valued distances.
pub type RealInstance = Instance<f64>;
/// Annealing result over integer distances.
pub type IntAnnealResult = AnnealResult<i64>;
