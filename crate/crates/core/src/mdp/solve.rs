//! Model-based solvers. These are the ground truth every learner is checked
//! against, so they favour dense exact linear algebra over speed.

use super::{greedy_over, Objective, QTable, StationaryPolicy, TabularMdp, ValueTable};
use crate::error::{Error, Result};
use nalgebra::{DMatrix, DVector};

pub const DEFAULT_MAX_SWEEPS: u64 = 1_000_000;

/// Divergence threshold for the auxiliary hitting-time iteration.
const CERTIFICATE_BLOWUP: f64 = 1e9;

/// Relative pivot size below which a dense system is treated as singular.
const PIVOT_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug)]
pub enum Backup<'a> {
    Optimal(Objective),
    Policy(&'a StationaryPolicy),
}

/// `(P_π, R_π)` restricted to non-terminal states, rows and columns in
/// ascending state order.
pub fn policy_matrices(mdp: &TabularMdp, pi: &StationaryPolicy) -> (DMatrix<f64>, DVector<f64>) {
    let states = mdp.nonterminal_states();
    let n = states.len();
    let mut p = DMatrix::zeros(n, n);
    let mut r = DVector::zeros(n);
    for (row, &i) in states.iter().enumerate() {
        for &u in mdp.feasible_actions(i) {
            let w = pi.prob(i, u);
            if w == 0.0 {
                continue;
            }
            r[row] += w * mdp.expected_cost(i, u);
            for (col, &j) in states.iter().enumerate() {
                p[(row, col)] += w * mdp.p(i, u, j);
            }
        }
    }
    (p, r)
}

/// Solves `a x = b` by LU with one step of iterative refinement. Returns
/// `None` when a pivot is negligible relative to the largest one.
pub(crate) fn solve_dense(a: &DMatrix<f64>, b: &DVector<f64>) -> Option<DVector<f64>> {
    if a.nrows() == 0 {
        return Some(DVector::zeros(0));
    }
    let lu = a.clone().lu();
    let u = lu.u();
    let diag = u.diagonal();
    let max = diag.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let min = diag.iter().fold(f64::INFINITY, |m, x| m.min(x.abs()));
    if !(max > 0.0) || min <= PIVOT_TOL * max {
        return None;
    }
    let mut x = lu.solve(b)?;
    let resid = b - a * &x;
    if let Some(dx) = lu.solve(&resid) {
        x += dx;
    }
    x.iter().all(|v| v.is_finite()).then_some(x)
}

/// `V^π = (I − P_π)^{-1} R_π`.
pub fn exact_policy_value(mdp: &TabularMdp, pi: &StationaryPolicy) -> Result<ValueTable> {
    let (p, r) = policy_matrices(mdp, pi);
    let n = p.nrows();
    let a = DMatrix::identity(n, n) - p;
    let v = solve_dense(&a, &r).ok_or_else(|| {
        Error::ImproperPolicy("I - P_pi is singular, the terminal is not reached surely".into())
    })?;
    ValueTable::from_nonterminal(mdp, v.as_slice())
}

fn backup_state(mdp: &TabularMdp, v: &ValueTable, i: usize, u: usize) -> f64 {
    let t = mdp.terminal();
    let mut acc = 0.0;
    for (j, (&p, &g)) in mdp.row(i, u).iter().zip(mdp.cost_row(i, u)).enumerate() {
        if p == 0.0 {
            continue;
        }
        acc += p * g;
        if j != t {
            acc += p * v.get(j);
        }
    }
    acc
}

/// One application of `T` (optimal) or `T_π` (policy evaluation).
pub fn bellman_backup(mdp: &TabularMdp, v: &ValueTable, mode: Backup<'_>) -> ValueTable {
    let mut out = ValueTable::zeros(mdp);
    for &i in mdp.nonterminal_states() {
        let acts = mdp.feasible_actions(i);
        let x = match mode {
            Backup::Optimal(obj) => {
                let u = greedy_over(acts, |u| backup_state(mdp, v, i, u), obj);
                backup_state(mdp, v, i, u)
            }
            Backup::Policy(pi) => acts
                .iter()
                .map(|&u| {
                    let w = pi.prob(i, u);
                    if w == 0.0 {
                        0.0
                    } else {
                        w * backup_state(mdp, v, i, u)
                    }
                })
                .sum(),
        };
        out.set(i, x);
    }
    out
}

pub fn value_iteration(
    mdp: &TabularMdp,
    tol: f64,
    objective: Objective,
) -> Result<(ValueTable, StationaryPolicy)> {
    value_iteration_capped(mdp, tol, objective, DEFAULT_MAX_SWEEPS)
}

/// Iterates `T` from `V = 0` until successive iterates differ by less than
/// `tol` in sup norm, then returns the last iterate and its greedy policy.
pub fn value_iteration_capped(
    mdp: &TabularMdp,
    tol: f64,
    objective: Objective,
    max_sweeps: u64,
) -> Result<(ValueTable, StationaryPolicy)> {
    if !(tol > 0.0) {
        return Err(Error::Config(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    let mut v = ValueTable::zeros(mdp);
    let mut sweeps = 0u64;
    loop {
        if sweeps >= max_sweeps {
            return Err(Error::IterationCap(max_sweeps));
        }
        let next = bellman_backup(mdp, &v, Backup::Optimal(objective));
        sweeps += 1;
        let diff = next.sup_distance(&v);
        v = next;
        if diff < tol {
            break;
        }
    }
    let actions: Vec<usize> = (0..mdp.n_states())
        .map(|i| {
            if mdp.is_terminal(i) {
                0
            } else {
                greedy_over(
                    mdp.feasible_actions(i),
                    |u| backup_state(mdp, &v, i, u),
                    objective,
                )
            }
        })
        .collect();
    let greedy = StationaryPolicy::deterministic(mdp, &actions)?;
    Ok((v, greedy))
}

/// `Q(i,u) = Σ_j p(i,u,j) g(i,u,j) + Σ_{j≠i₀} p(i,u,j) V(j)` on feasible pairs.
pub fn q_from_v(mdp: &TabularMdp, v: &ValueTable) -> QTable {
    let mut q = QTable::zeros(mdp);
    for &i in mdp.nonterminal_states() {
        for &u in mdp.feasible_actions(i) {
            q.set(i, u, backup_state(mdp, v, i, u));
        }
    }
    q
}

/// Maximal expected hitting times of the terminal and the contraction modulus
/// they certify for `T` in the `ξ`-weighted sup norm.
#[derive(Clone, Debug, PartialEq)]
pub struct Certificate {
    /// One entry per state; the terminal entry is 0.
    pub xi: Vec<f64>,
    pub beta: f64,
}

pub fn auxiliary_certificate(mdp: &TabularMdp, tol: f64) -> Result<Certificate> {
    if !(tol > 0.0) {
        return Err(Error::Config(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    if !trapping_set(mdp).is_empty() {
        return Err(Error::NotAllProper);
    }
    let t = mdp.terminal();
    let mut xi = vec![0.0; mdp.n_states()];
    let mut sweeps = 0u64;
    loop {
        let mut next = vec![0.0; mdp.n_states()];
        for &i in mdp.nonterminal_states() {
            next[i] = mdp
                .feasible_actions(i)
                .iter()
                .map(|&u| {
                    1.0 + mdp
                        .row(i, u)
                        .iter()
                        .enumerate()
                        .filter(|&(j, _)| j != t)
                        .map(|(j, &p)| p * xi[j])
                        .sum::<f64>()
                })
                .fold(f64::NEG_INFINITY, f64::max);
        }
        sweeps += 1;
        let diff = next
            .iter()
            .zip(&xi)
            .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
        xi = next;
        if xi.iter().any(|&x| x > CERTIFICATE_BLOWUP) {
            return Err(Error::NotAllProper);
        }
        if diff < tol {
            break;
        }
        if sweeps >= DEFAULT_MAX_SWEEPS {
            return Err(Error::IterationCap(DEFAULT_MAX_SWEEPS));
        }
    }
    polish_hitting_times(mdp, &mut xi, tol);
    let beta = mdp
        .nonterminal_states()
        .iter()
        .map(|&i| (xi[i] - 1.0) / xi[i])
        .fold(f64::NEG_INFINITY, f64::max);
    Ok(Certificate { xi, beta })
}

/// Replaces the iterated hitting times by the exact ones of the policy that
/// attains the maximum, provided they still satisfy the max-equation.
fn polish_hitting_times(mdp: &TabularMdp, xi: &mut [f64], tol: f64) {
    let t = mdp.terminal();
    let expected = |xi: &[f64], i: usize, u: usize| -> f64 {
        1.0 + mdp
            .row(i, u)
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != t)
            .map(|(j, &p)| p * xi[j])
            .sum::<f64>()
    };
    let states = mdp.nonterminal_states();
    let n = states.len();
    let mut a = DMatrix::identity(n, n);
    for (r, &i) in states.iter().enumerate() {
        let u = greedy_over(
            mdp.feasible_actions(i),
            |u| expected(xi, i, u),
            Objective::Maximize,
        );
        for (j, &p) in mdp.row(i, u).iter().enumerate() {
            if j != t && p != 0.0 {
                a[(r, mdp.compact_index(j).expect("non-terminal"))] -= p;
            }
        }
    }
    let Some(exact) = solve_dense(&a, &DVector::from_element(n, 1.0)) else {
        return;
    };
    let mut candidate = vec![0.0; mdp.n_states()];
    for (&i, &x) in states.iter().zip(exact.iter()) {
        candidate[i] = x;
    }
    let consistent = states.iter().all(|&i| {
        let best = mdp
            .feasible_actions(i)
            .iter()
            .map(|&u| expected(&candidate, i, u))
            .fold(f64::NEG_INFINITY, f64::max);
        (best - candidate[i]).abs() <= tol * candidate[i].max(1.0)
    });
    if consistent {
        xi.copy_from_slice(&candidate);
    }
}

/// Largest set of non-terminal states in which some stationary policy can
/// stay forever: every member has a feasible action whose support lies in
/// the set. Empty iff every stationary policy reaches the terminal.
pub fn trapping_set(mdp: &TabularMdp) -> Vec<usize> {
    let mut inside = vec![false; mdp.n_states()];
    for &i in mdp.nonterminal_states() {
        inside[i] = true;
    }
    loop {
        let mut changed = false;
        for &i in mdp.nonterminal_states() {
            if !inside[i] {
                continue;
            }
            let stays = mdp.feasible_actions(i).iter().any(|&u| {
                mdp.row(i, u)
                    .iter()
                    .enumerate()
                    .all(|(j, &p)| p == 0.0 || inside[j])
            });
            if !stays {
                inside[i] = false;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    (0..mdp.n_states()).filter(|&i| inside[i]).collect()
}

/// `max_i |V(i)| / ξ(i)` over non-terminal states.
pub fn weighted_sup_norm(mdp: &TabularMdp, v: &[f64], xi: &[f64]) -> f64 {
    mdp.nonterminal_states()
        .iter()
        .map(|&i| v[i].abs() / xi[i])
        .fold(0.0, f64::max)
}

/// `max_i P(X_{|S⁻|} ≠ i₀ | X₀ = i, π)`. A value below one certifies that
/// `π` reaches the terminal with positive probability within `|S⁻|` steps
/// from every state.
pub fn properness_probe(mdp: &TabularMdp, pi: &StationaryPolicy) -> f64 {
    let (p, _) = policy_matrices(mdp, pi);
    let n = p.nrows();
    let mut survive = DVector::from_element(n, 1.0);
    for _ in 0..n {
        survive = &p * survive;
    }
    survive.iter().fold(0.0, |m, &x| m.max(x))
}

/// Expected number of visits to each state before absorption,
/// `hᵀ = h0ᵀ (I − P_π)^{-1}`. The terminal entry is 0.
pub fn occupancy(mdp: &TabularMdp, pi: &StationaryPolicy) -> Result<Vec<f64>> {
    let (p, _) = policy_matrices(mdp, pi);
    let n = p.nrows();
    let a = (DMatrix::identity(n, n) - p).transpose();
    let h0 = DVector::from_iterator(n, mdp.nonterminal_states().iter().map(|&i| mdp.h0()[i]));
    let h = solve_dense(&a, &h0)
        .ok_or_else(|| Error::Singular("occupancy system I - P_pi is singular".into()))?;
    let mut out = vec![0.0; mdp.n_states()];
    for (&i, &x) in mdp.nonterminal_states().iter().zip(h.iter()) {
        out[i] = x;
    }
    Ok(out)
}
