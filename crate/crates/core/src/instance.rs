use thiserror::Error;

use crate::scalar::Distance;
use crate::TeamId;

/// Longest accepted team label.
pub const MAX_NAME_LEN: usize = 4;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InstanceError {
    #[error("team count must be an even integer >= 4, got {0}")]
    TeamCount(usize),
    #[error("distance matrix must be {n}x{n}")]
    Shape { n: usize },
    #[error("distance matrix is not symmetric: D[{i}][{j}] = {ij} but D[{j}][{i}] = {ji}")]
    Asymmetric { i: usize, j: usize, ij: String, ji: String },
    #[error("nonzero diagonal entry D[{0}][{0}]")]
    NonzeroDiagonal(usize),
    #[error("negative distance D[{i}][{j}]")]
    Negative { i: usize, j: usize },
    #[error("expected {expected} team names, found {found}")]
    NameCount { expected: usize, found: usize },
    #[error("invalid team name {0:?} (1 to 4 characters, no '@', no whitespace)")]
    BadName(String),
    #[error("duplicate team name {0:?}")]
    DuplicateName(String),
}

/// A TTP instance: team count, symmetric distance matrix and team labels.
#[derive(Debug, Clone, PartialEq)]
pub struct Instance<D> {
    n: usize,
    dist: Vec<D>,
    names: Vec<String>,
}

impl<D: Distance> Instance<D> {
    /// Builds a validated instance. Missing names default to `T1..Tn`.
    pub fn new(rows: Vec<Vec<D>>, names: Option<Vec<String>>) -> Result<Self, InstanceError> {
        let n = rows.len();
        if n < 4 || !n.is_multiple_of(2) {
            return Err(InstanceError::TeamCount(n));
        }
        if rows.iter().any(|row| row.len() != n) {
            return Err(InstanceError::Shape { n });
        }
        let dist: Vec<D> = rows.into_iter().flatten().collect();
        let names = match names {
            Some(names) => names,
            None => default_names(n),
        };
        let inst = Instance { n, dist, names };
        inst.check_matrix()?;
        inst.check_names()?;
        Ok(inst)
    }

    fn check_matrix(&self) -> Result<(), InstanceError> {
        let n = self.n;
        for i in 0..n {
            if self.d(i, i) != D::zero() {
                return Err(InstanceError::NonzeroDiagonal(i));
            }
            for j in 0..n {
                if self.d(i, j) < D::zero() {
                    return Err(InstanceError::Negative { i, j });
                }
                if j < i && self.d(i, j) != self.d(j, i) {
                    return Err(InstanceError::Asymmetric {
                        i,
                        j,
                        ij: self.d(i, j).to_string(),
                        ji: self.d(j, i).to_string(),
                    });
                }
            }
        }
        Ok(())
    }

    fn check_names(&self) -> Result<(), InstanceError> {
        if self.names.len() != self.n {
            return Err(InstanceError::NameCount {
                expected: self.n,
                found: self.names.len(),
            });
        }
        for (k, name) in self.names.iter().enumerate() {
            if !valid_name(name) {
                return Err(InstanceError::BadName(name.clone()));
            }
            if self.names[..k].contains(name) {
                return Err(InstanceError::DuplicateName(name.clone()));
            }
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Rounds in a double round-robin over this instance: `2n - 2`.
    pub fn rounds(&self) -> usize {
        2 * self.n - 2
    }

    #[inline]
    pub fn d(&self, i: TeamId, j: TeamId) -> D {
        self.dist[i * self.n + j]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, t: TeamId) -> &str {
        &self.names[t]
    }

    pub fn team_index(&self, name: &str) -> Option<TeamId> {
        self.names.iter().position(|x| x == name)
    }

    /// Mean off-diagonal distance.
    pub fn mean_distance(&self) -> f64 {
        let total: f64 = self.dist.iter().map(|d| d.to_f64().unwrap_or(0.0)).sum();
        total / (self.n * (self.n - 1)) as f64
    }
}

pub(crate) fn valid_name(name: &str) -> bool {
    let len = name.chars().count();
    (1..=MAX_NAME_LEN).contains(&len) && !name.contains('@') && !name.chars().any(char::is_whitespace)
}

pub(crate) fn default_names(n: usize) -> Vec<String> {
    (1..=n).map(|k| format!("T{k}")).collect()
}
