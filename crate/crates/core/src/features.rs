//! Linear feature maps for states (`Φ`) and state-action pairs (`φ₁`).
//!
//! Both maps return the zero vector at the terminal state, so the terminal
//! contributes nothing to any update or bootstrap target.

use crate::error::{Error, Result};
use crate::mdp::TabularMdp;
use nalgebra::DMatrix;

/// Smallest singular value accepted for a full-column-rank `Φ`.
pub const RANK_TOL: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq)]
pub struct StateFeatures {
    dim: usize,
    n_states: usize,
    /// Row per state, terminal row zero.
    data: Vec<f64>,
}

impl StateFeatures {
    /// Builds `Φ` from one row per non-terminal state (ascending order) and
    /// checks that its columns are linearly independent.
    pub fn new(mdp: &TabularMdp, rows: &[Vec<f64>]) -> Result<Self> {
        let f = Self::new_unchecked(mdp, rows)?;
        f.check_rank(mdp)?;
        Ok(f)
    }

    pub fn new_unchecked(mdp: &TabularMdp, rows: &[Vec<f64>]) -> Result<Self> {
        let states = mdp.nonterminal_states();
        if rows.len() != states.len() {
            return Err(Error::Features(format!(
                "need {} state rows, got {}",
                states.len(),
                rows.len()
            )));
        }
        let dim = rows.first().map_or(0, Vec::len);
        if dim == 0 {
            return Err(Error::Features("feature dimension must be positive".into()));
        }
        let mut data = vec![0.0; mdp.n_states() * dim];
        for (&i, row) in states.iter().zip(rows) {
            if row.len() != dim {
                return Err(Error::Features(format!(
                    "row for state {i} has wrong length"
                )));
            }
            if row.iter().any(|x| !x.is_finite()) {
                return Err(Error::Features(format!("row for state {i} is not finite")));
            }
            data[i * dim..(i + 1) * dim].copy_from_slice(row);
        }
        Ok(Self {
            dim,
            n_states: mdp.n_states(),
            data,
        })
    }

    /// One-hot features over non-terminal states (`Φ = I`).
    pub fn tabular(mdp: &TabularMdp) -> Self {
        let n = mdp.n_nonterminal();
        let rows: Vec<Vec<f64>> = (0..n)
            .map(|k| (0..n).map(|c| if c == k { 1.0 } else { 0.0 }).collect())
            .collect();
        Self::new(mdp, &rows).expect("identity has full rank")
    }

    fn check_rank(&self, mdp: &TabularMdp) -> Result<()> {
        let n = mdp.n_nonterminal();
        if self.dim > n {
            return Err(Error::Features(format!(
                "dimension {} exceeds the {n} non-terminal states",
                self.dim
            )));
        }
        let s = self.matrix(mdp).singular_values();
        let min = s.iter().fold(f64::INFINITY, |m, &x| m.min(x));
        if min <= RANK_TOL {
            return Err(Error::Features(format!(
                "columns are linearly dependent (smallest singular value {min:e})"
            )));
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    pub fn dot(&self, v: &[f64], i: usize) -> f64 {
        self.row(i).iter().zip(v).map(|(a, b)| a * b).sum()
    }

    /// `|S⁻| × d` matrix with rows in ascending non-terminal order.
    pub fn matrix(&self, mdp: &TabularMdp) -> DMatrix<f64> {
        let states = mdp.nonterminal_states();
        DMatrix::from_fn(states.len(), self.dim, |r, c| self.row(states[r])[c])
    }

    pub fn n_states(&self) -> usize {
        self.n_states
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ActionFeatures {
    dim: usize,
    n_states: usize,
    n_actions: usize,
    /// Block per (state, action); terminal and infeasible blocks are zero.
    data: Vec<f64>,
    feasible: Vec<Vec<usize>>,
}

impl ActionFeatures {
    /// Builds `φ₁` from a closure evaluated on every feasible non-terminal pair.
    pub fn from_fn(
        mdp: &TabularMdp,
        dim: usize,
        mut f: impl FnMut(usize, usize) -> Vec<f64>,
    ) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Features("feature dimension must be positive".into()));
        }
        let na = mdp.n_actions();
        let mut data = vec![0.0; mdp.n_states() * na * dim];
        for (i, u) in mdp.feasible_pairs() {
            let row = f(i, u);
            if row.len() != dim {
                return Err(Error::Features(format!(
                    "feature for ({i},{u}) has wrong length"
                )));
            }
            if row.iter().any(|x| !x.is_finite()) {
                return Err(Error::Features(format!(
                    "feature for ({i},{u}) is not finite"
                )));
            }
            let k = (i * na + u) * dim;
            data[k..k + dim].copy_from_slice(&row);
        }
        let feasible = (0..mdp.n_states())
            .map(|i| {
                if mdp.is_terminal(i) {
                    Vec::new()
                } else {
                    mdp.feasible_actions(i).to_vec()
                }
            })
            .collect();
        Ok(Self {
            dim,
            n_states: mdp.n_states(),
            n_actions: na,
            data,
            feasible,
        })
    }

    /// One-hot features with one coordinate per feasible non-terminal pair,
    /// numbered in [`TabularMdp::feasible_pairs`] order.
    pub fn one_hot(mdp: &TabularMdp) -> Self {
        let pairs = mdp.feasible_pairs();
        let dim = pairs.len();
        Self::from_fn(mdp, dim, |i, u| {
            let k = pairs
                .iter()
                .position(|&p| p == (i, u))
                .expect("pair is feasible");
            let mut row = vec![0.0; dim];
            row[k] = 1.0;
            row
        })
        .expect("one-hot features are well formed")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn n_actions(&self) -> usize {
        self.n_actions
    }

    pub fn n_states(&self) -> usize {
        self.n_states
    }

    /// Feasible actions at `i`; empty at the terminal.
    pub fn feasible(&self, i: usize) -> &[usize] {
        &self.feasible[i]
    }

    #[inline]
    pub fn row(&self, i: usize, u: usize) -> &[f64] {
        let k = (i * self.n_actions + u) * self.dim;
        &self.data[k..k + self.dim]
    }

    pub fn dot(&self, w: &[f64], i: usize, u: usize) -> f64 {
        self.row(i, u).iter().zip(w).map(|(a, b)| a * b).sum()
    }

    /// Rank of the matrix stacking `φ₁(i,u)ᵀ` over feasible pairs.
    pub fn rank(&self) -> usize {
        let rows: Vec<(usize, usize)> = (0..self.n_states)
            .flat_map(|i| self.feasible[i].iter().map(move |&u| (i, u)))
            .collect();
        if rows.is_empty() {
            return 0;
        }
        let m = DMatrix::from_fn(rows.len(), self.dim, |r, c| {
            let (i, u) = rows[r];
            self.row(i, u)[c]
        });
        m.rank(RANK_TOL)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mdp::MdpBuilder;

    fn three_state() -> TabularMdp {
        MdpBuilder::new(4, 1, 3)
            .transition(0, 0, 1, 1.0, 0.0)
            .transition(1, 0, 2, 1.0, 0.0)
            .transition(2, 0, 3, 1.0, 0.0)
            .start(0)
            .build()
            .unwrap()
    }

    #[test]
    fn dependent_columns_rejected() {
        let m = three_state();
        let rows = vec![vec![1.0, 2.0], vec![2.0, 4.0], vec![3.0, 6.0]];
        assert!(StateFeatures::new(&m, &rows).is_err());
        let rows = vec![vec![1.0, 0.0], vec![0.0, 1.0], vec![0.0, 1.0]];
        let f = StateFeatures::new(&m, &rows).unwrap();
        assert_eq!(f.row(3), &[0.0, 0.0]);
        assert_eq!(f.dot(&[2.0, 3.0], 1), 3.0);
    }

    #[test]
    fn too_many_columns_rejected() {
        let m = three_state();
        let rows = vec![vec![1.0, 0.0, 0.0, 0.0]; 3];
        assert!(StateFeatures::new(&m, &rows).is_err());
    }

    #[test]
    fn one_hot_action_features() {
        let m = three_state();
        let f = ActionFeatures::one_hot(&m);
        assert_eq!(f.dim(), 3);
        assert_eq!(f.row(1, 0), &[0.0, 1.0, 0.0]);
        assert_eq!(f.row(3, 0), &[0.0, 0.0, 0.0]);
        assert_eq!(f.rank(), 3);
        assert!(f.feasible(3).is_empty());
    }
}
