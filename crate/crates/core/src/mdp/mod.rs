//! Finite stochastic shortest path MDPs.
//!
//! States are enumerated `0..n_states` and one of them is the absorbing,
//! zero-cost terminal state. Every table indexed by state keeps a slot for the
//! terminal state and pins it to zero, so indices never need translating.
//!
//! An action is feasible at a state when its transition row has mass. Rows of
//! infeasible actions are identically zero.

mod solve;

pub(crate) use solve::solve_dense;

pub use solve::{
    auxiliary_certificate, bellman_backup, exact_policy_value, occupancy, policy_matrices,
    properness_probe, q_from_v, trapping_set, value_iteration, value_iteration_capped,
    weighted_sup_norm, Backup, Certificate, DEFAULT_MAX_SWEEPS,
};

use crate::error::{Error, Result};
use crate::rng::sample_index;
use rand::Rng;
use std::fmt;
use std::str::FromStr;

pub const STOCHASTIC_TOL: f64 = 1e-12;

/// Whether the learner minimises expected total cost or maximises expected
/// total reward.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum Objective {
    #[default]
    Minimize,
    Maximize,
}

impl Objective {
    /// Sign applied to advantage-style actor updates: descent for costs,
    /// ascent for rewards.
    pub fn ascent_sign(self) -> f64 {
        match self {
            Objective::Minimize => -1.0,
            Objective::Maximize => 1.0,
        }
    }

    /// True when `a` is strictly preferred to `b`.
    pub fn better(self, a: f64, b: f64) -> bool {
        match self {
            Objective::Minimize => a < b,
            Objective::Maximize => a > b,
        }
    }
}

impl fmt::Display for Objective {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Objective::Minimize => "min",
            Objective::Maximize => "max",
        })
    }
}

impl FromStr for Objective {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "min" | "minimize" => Ok(Objective::Minimize),
            "max" | "maximize" => Ok(Objective::Maximize),
            other => Err(Error::Config(format!("unknown objective '{other}'"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TabularMdp {
    n_states: usize,
    n_actions: usize,
    terminal: usize,
    /// `p[(i * n_actions + u) * n_states + j]`
    p: Vec<f64>,
    g: Vec<f64>,
    h0: Vec<f64>,
    feasible: Vec<Vec<usize>>,
    nonterminal: Vec<usize>,
}

impl TabularMdp {
    /// Builds and validates an MDP.
    pub fn new(
        n_states: usize,
        n_actions: usize,
        terminal: usize,
        p: Vec<f64>,
        g: Vec<f64>,
        h0: Vec<f64>,
    ) -> Result<Self> {
        let mdp = Self::from_raw(n_states, n_actions, terminal, p, g, h0)?;
        mdp.validate()?;
        Ok(mdp)
    }

    /// Builds an MDP checking only tensor shapes. Use [`TabularMdp::validate`]
    /// before handing the result to a solver.
    ///
    /// Costs on zero-probability transitions are reset to zero so that the
    /// sparse text format round-trips exactly.
    pub fn from_raw(
        n_states: usize,
        n_actions: usize,
        terminal: usize,
        p: Vec<f64>,
        mut g: Vec<f64>,
        h0: Vec<f64>,
    ) -> Result<Self> {
        if n_states < 2 {
            return Err(Error::Shape(format!(
                "need at least 2 states, got {n_states}"
            )));
        }
        if n_actions == 0 {
            return Err(Error::Shape("need at least one action".into()));
        }
        if terminal >= n_states {
            return Err(Error::Shape(format!("terminal {terminal} out of range")));
        }
        let len = n_states * n_actions * n_states;
        if p.len() != len || g.len() != len {
            return Err(Error::Shape(format!(
                "transition/cost tensors must have {len} entries (got {} and {})",
                p.len(),
                g.len()
            )));
        }
        if h0.len() != n_states {
            return Err(Error::Shape(format!(
                "h0 must have {n_states} entries, got {}",
                h0.len()
            )));
        }
        for (gk, &pk) in g.iter_mut().zip(&p) {
            if pk == 0.0 {
                *gk = 0.0;
            }
        }
        let feasible = (0..n_states)
            .map(|i| {
                (0..n_actions)
                    .filter(|&u| {
                        let base = (i * n_actions + u) * n_states;
                        p[base..base + n_states].iter().any(|&x| x != 0.0)
                    })
                    .collect()
            })
            .collect();
        let nonterminal = (0..n_states).filter(|&i| i != terminal).collect();
        Ok(Self {
            n_states,
            n_actions,
            terminal,
            p,
            g,
            h0,
            feasible,
            nonterminal,
        })
    }

    /// Checks every structural invariant and reports the first violation.
    pub fn validate(&self) -> Result<()> {
        let ns = self.n_states;
        let t = self.terminal;
        for u in 0..self.n_actions {
            let row = self.row(t, u);
            if (row[t] - 1.0).abs() > STOCHASTIC_TOL {
                return Err(Error::InvalidMdp(format!(
                    "terminal not absorbing: p[{t}][{u}][{t}] = {}",
                    row[t]
                )));
            }
            if self.g(t, u, t) != 0.0 {
                return Err(Error::InvalidMdp(format!(
                    "terminal cost nonzero: g[{t}][{u}][{t}] = {}",
                    self.g(t, u, t)
                )));
            }
        }
        for i in 0..ns {
            let mut any_feasible = false;
            for u in 0..self.n_actions {
                let row = self.row(i, u);
                for (j, &x) in row.iter().enumerate() {
                    if !(0.0..=1.0).contains(&x) || !x.is_finite() {
                        return Err(Error::InvalidMdp(format!(
                            "probability out of range: p[{i}][{u}][{j}] = {x}"
                        )));
                    }
                    let c = self.g(i, u, j);
                    if !c.is_finite() {
                        return Err(Error::InvalidMdp(format!(
                            "cost not finite: g[{i}][{u}][{j}] = {c}"
                        )));
                    }
                }
                let sum: f64 = row.iter().sum();
                if sum == 0.0 {
                    continue;
                }
                any_feasible = true;
                if (sum - 1.0).abs() > STOCHASTIC_TOL {
                    return Err(Error::InvalidMdp(format!(
                        "row not stochastic: p[{i}][{u}][.] sums to {sum}"
                    )));
                }
            }
            if !any_feasible {
                return Err(Error::InvalidMdp(format!(
                    "state {i} has no feasible action"
                )));
            }
        }
        let mut total = 0.0;
        for (i, &x) in self.h0.iter().enumerate() {
            if !(x >= 0.0) || !x.is_finite() {
                return Err(Error::InvalidMdp(format!("h0[{i}] = {x} is negative")));
            }
            total += x;
        }
        if self.h0[t] != 0.0 {
            return Err(Error::InvalidMdp(format!(
                "h0 puts mass {} on the terminal",
                self.h0[t]
            )));
        }
        if (total - 1.0).abs() > STOCHASTIC_TOL {
            return Err(Error::InvalidMdp(format!("h0 sums to {total}")));
        }
        Ok(())
    }

    pub fn n_states(&self) -> usize {
        self.n_states
    }

    pub fn n_actions(&self) -> usize {
        self.n_actions
    }

    pub fn terminal(&self) -> usize {
        self.terminal
    }

    pub fn is_terminal(&self, i: usize) -> bool {
        i == self.terminal
    }

    /// Non-terminal states in ascending order. Position in this list is the
    /// row index used by the dense `|S⁻|`-sized matrices.
    pub fn nonterminal_states(&self) -> &[usize] {
        &self.nonterminal
    }

    pub fn n_nonterminal(&self) -> usize {
        self.nonterminal.len()
    }

    /// Row index of `i` in `|S⁻|`-sized matrices.
    pub fn compact_index(&self, i: usize) -> Option<usize> {
        match i.cmp(&self.terminal) {
            std::cmp::Ordering::Less => Some(i),
            std::cmp::Ordering::Equal => None,
            std::cmp::Ordering::Greater => Some(i - 1),
        }
    }

    pub fn feasible_actions(&self, i: usize) -> &[usize] {
        &self.feasible[i]
    }

    pub fn is_feasible(&self, i: usize, u: usize) -> bool {
        self.feasible[i].contains(&u)
    }

    /// Feasible (state, action) pairs over non-terminal states.
    pub fn feasible_pairs(&self) -> Vec<(usize, usize)> {
        self.nonterminal
            .iter()
            .flat_map(|&i| self.feasible[i].iter().map(move |&u| (i, u)))
            .collect()
    }

    #[inline]
    fn idx(&self, i: usize, u: usize, j: usize) -> usize {
        (i * self.n_actions + u) * self.n_states + j
    }

    #[inline]
    pub fn p(&self, i: usize, u: usize, j: usize) -> f64 {
        self.p[self.idx(i, u, j)]
    }

    #[inline]
    pub fn g(&self, i: usize, u: usize, j: usize) -> f64 {
        self.g[self.idx(i, u, j)]
    }

    pub fn row(&self, i: usize, u: usize) -> &[f64] {
        let base = self.idx(i, u, 0);
        &self.p[base..base + self.n_states]
    }

    pub fn cost_row(&self, i: usize, u: usize) -> &[f64] {
        let base = self.idx(i, u, 0);
        &self.g[base..base + self.n_states]
    }

    pub fn h0(&self) -> &[f64] {
        &self.h0
    }

    /// Expected one-step cost `Σ_j p(i,u,j) g(i,u,j)`.
    pub fn expected_cost(&self, i: usize, u: usize) -> f64 {
        self.row(i, u)
            .iter()
            .zip(self.cost_row(i, u))
            .map(|(p, g)| p * g)
            .sum()
    }

    /// Largest absolute single-transition cost.
    pub fn max_abs_cost(&self) -> f64 {
        self.g.iter().fold(0.0, |m, &c| m.max(c.abs()))
    }

    pub fn sample_transition<R: Rng + ?Sized>(
        &self,
        i: usize,
        u: usize,
        rng: &mut R,
    ) -> Result<(usize, f64)> {
        if i >= self.n_states || u >= self.n_actions {
            return Err(Error::Index(format!("({i}, {u})")));
        }
        if self.is_terminal(i) {
            return Err(Error::TerminalState(i));
        }
        if !self.is_feasible(i, u) {
            return Err(Error::Index(format!(
                "action {u} is not feasible at state {i}"
            )));
        }
        let j = sample_index(self.row(i, u), rng);
        Ok((j, self.g(i, u, j)))
    }

    pub fn sample_start<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        sample_index(&self.h0, rng)
    }
}

/// Incremental construction of a [`TabularMdp`]; unset transitions are zero.
#[derive(Clone, Debug)]
pub struct MdpBuilder {
    n_states: usize,
    n_actions: usize,
    terminal: usize,
    p: Vec<f64>,
    g: Vec<f64>,
    h0: Vec<f64>,
}

impl MdpBuilder {
    /// Starts an MDP whose terminal state already self-loops at zero cost.
    pub fn new(n_states: usize, n_actions: usize, terminal: usize) -> Self {
        let len = n_states * n_actions * n_states;
        let mut b = Self {
            n_states,
            n_actions,
            terminal,
            p: vec![0.0; len],
            g: vec![0.0; len],
            h0: vec![0.0; n_states],
        };
        if terminal < n_states {
            for u in 0..n_actions {
                b = b.transition(terminal, u, terminal, 1.0, 0.0);
            }
        }
        b
    }

    pub fn transition(mut self, i: usize, u: usize, j: usize, prob: f64, cost: f64) -> Self {
        let k = (i * self.n_actions + u) * self.n_states + j;
        self.p[k] = prob;
        self.g[k] = cost;
        self
    }

    pub fn h0(mut self, h0: Vec<f64>) -> Self {
        self.h0 = h0;
        self
    }

    pub fn start(mut self, i: usize) -> Self {
        self.h0 = vec![0.0; self.n_states];
        if i < self.n_states {
            self.h0[i] = 1.0;
        }
        self
    }

    pub fn build(self) -> Result<TabularMdp> {
        TabularMdp::new(
            self.n_states,
            self.n_actions,
            self.terminal,
            self.p,
            self.g,
            self.h0,
        )
    }

    pub fn build_unchecked(self) -> Result<TabularMdp> {
        TabularMdp::from_raw(
            self.n_states,
            self.n_actions,
            self.terminal,
            self.p,
            self.g,
            self.h0,
        )
    }
}

/// State values with the terminal slot pinned to zero.
#[derive(Clone, Debug, PartialEq)]
pub struct ValueTable {
    v: Vec<f64>,
    terminal: usize,
}

impl ValueTable {
    pub fn zeros(mdp: &TabularMdp) -> Self {
        Self {
            v: vec![0.0; mdp.n_states()],
            terminal: mdp.terminal(),
        }
    }

    /// Builds a table from one value per state; the terminal entry is ignored.
    pub fn from_full(mdp: &TabularMdp, values: &[f64]) -> Result<Self> {
        if values.len() != mdp.n_states() {
            return Err(Error::Shape(format!(
                "expected {} values, got {}",
                mdp.n_states(),
                values.len()
            )));
        }
        let mut v = values.to_vec();
        v[mdp.terminal()] = 0.0;
        Ok(Self {
            v,
            terminal: mdp.terminal(),
        })
    }

    /// Builds a table from one value per non-terminal state, in ascending
    /// state order.
    pub fn from_nonterminal(mdp: &TabularMdp, values: &[f64]) -> Result<Self> {
        if values.len() != mdp.n_nonterminal() {
            return Err(Error::Shape(format!(
                "expected {} non-terminal values, got {}",
                mdp.n_nonterminal(),
                values.len()
            )));
        }
        let mut t = Self::zeros(mdp);
        for (&i, &x) in mdp.nonterminal_states().iter().zip(values) {
            t.v[i] = x;
        }
        Ok(t)
    }

    #[inline]
    pub fn get(&self, i: usize) -> f64 {
        self.v[i]
    }

    /// Adds `delta` to a non-terminal entry; the terminal entry never moves.
    #[inline]
    pub fn add(&mut self, i: usize, delta: f64) {
        if i != self.terminal {
            self.v[i] += delta;
        }
    }

    #[inline]
    pub fn set(&mut self, i: usize, x: f64) {
        if i != self.terminal {
            self.v[i] = x;
        }
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.v
    }

    pub fn len(&self) -> usize {
        self.v.len()
    }

    pub fn is_empty(&self) -> bool {
        self.v.is_empty()
    }

    pub fn terminal(&self) -> usize {
        self.terminal
    }

    pub fn nonterminal_values(&self) -> Vec<f64> {
        self.v
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != self.terminal)
            .map(|(_, &x)| x)
            .collect()
    }

    pub fn sup_norm(&self) -> f64 {
        self.v.iter().fold(0.0, |m, &x| m.max(x.abs()))
    }

    /// `max_i |self(i) - other(i)|`.
    pub fn sup_distance(&self, other: &ValueTable) -> f64 {
        self.v
            .iter()
            .zip(&other.v)
            .fold(0.0, |m, (a, b)| m.max((a - b).abs()))
    }
}

/// State-action values; terminal and infeasible entries stay at zero.
#[derive(Clone, Debug, PartialEq)]
pub struct QTable {
    q: Vec<f64>,
    n_actions: usize,
    terminal: usize,
}

impl QTable {
    pub fn zeros(mdp: &TabularMdp) -> Self {
        Self {
            q: vec![0.0; mdp.n_states() * mdp.n_actions()],
            n_actions: mdp.n_actions(),
            terminal: mdp.terminal(),
        }
    }

    #[inline]
    pub fn get(&self, i: usize, u: usize) -> f64 {
        self.q[i * self.n_actions + u]
    }

    #[inline]
    pub fn set(&mut self, i: usize, u: usize, x: f64) {
        if i != self.terminal {
            self.q[i * self.n_actions + u] = x;
        }
    }

    #[inline]
    pub fn add(&mut self, i: usize, u: usize, delta: f64) {
        if i != self.terminal {
            self.q[i * self.n_actions + u] += delta;
        }
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.q[i * self.n_actions..(i + 1) * self.n_actions]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.q
    }

    pub fn n_actions(&self) -> usize {
        self.n_actions
    }

    /// Best value over feasible actions (0 at the terminal).
    pub fn best_value(&self, mdp: &TabularMdp, i: usize, objective: Objective) -> f64 {
        if mdp.is_terminal(i) {
            return 0.0;
        }
        let u = self.greedy_action(mdp, i, objective);
        self.get(i, u)
    }

    /// Greedy feasible action, ties to the lowest index.
    pub fn greedy_action(&self, mdp: &TabularMdp, i: usize, objective: Objective) -> usize {
        greedy_over(mdp.feasible_actions(i), |u| self.get(i, u), objective)
    }

    /// `V(i) = opt_u Q(i,u)` for every state.
    pub fn greedy_values(&self, mdp: &TabularMdp, objective: Objective) -> ValueTable {
        let mut v = ValueTable::zeros(mdp);
        for &i in mdp.nonterminal_states() {
            v.set(i, self.best_value(mdp, i, objective));
        }
        v
    }
}

/// Lowest-index optimiser of `value` over `actions`.
pub fn greedy_over(actions: &[usize], value: impl Fn(usize) -> f64, objective: Objective) -> usize {
    let mut best = actions[0];
    let mut best_v = value(best);
    for &u in &actions[1..] {
        let x = value(u);
        if objective.better(x, best_v) {
            best = u;
            best_v = x;
        }
    }
    best
}

/// A stationary randomized policy over non-terminal states.
#[derive(Clone, Debug, PartialEq)]
pub struct StationaryPolicy {
    probs: Vec<f64>,
    n_actions: usize,
}

impl StationaryPolicy {
    pub fn new(mdp: &TabularMdp, probs: Vec<f64>) -> Result<Self> {
        let na = mdp.n_actions();
        if probs.len() != mdp.n_states() * na {
            return Err(Error::Shape(format!(
                "policy needs {} entries, got {}",
                mdp.n_states() * na,
                probs.len()
            )));
        }
        let mut probs = probs;
        for i in 0..mdp.n_states() {
            let row = &mut probs[i * na..(i + 1) * na];
            if mdp.is_terminal(i) {
                row.iter_mut().for_each(|x| *x = 0.0);
                continue;
            }
            let mut sum = 0.0;
            for (u, &x) in row.iter().enumerate() {
                if !(0.0..=1.0).contains(&x) {
                    return Err(Error::InvalidPolicy(format!("pi({i},{u}) = {x}")));
                }
                if x > 0.0 && !mdp.is_feasible(i, u) {
                    return Err(Error::InvalidPolicy(format!(
                        "pi({i},{u}) = {x} on an infeasible action"
                    )));
                }
                sum += x;
            }
            if (sum - 1.0).abs() > STOCHASTIC_TOL {
                return Err(Error::InvalidPolicy(format!("row {i} sums to {sum}")));
            }
        }
        Ok(Self {
            probs,
            n_actions: na,
        })
    }

    pub fn uniform(mdp: &TabularMdp) -> Self {
        let na = mdp.n_actions();
        let mut probs = vec![0.0; mdp.n_states() * na];
        for &i in mdp.nonterminal_states() {
            let acts = mdp.feasible_actions(i);
            let w = 1.0 / acts.len() as f64;
            for &u in acts {
                probs[i * na + u] = w;
            }
        }
        Self {
            probs,
            n_actions: na,
        }
    }

    /// Deterministic policy from one action per state (terminal entry ignored).
    pub fn deterministic(mdp: &TabularMdp, actions: &[usize]) -> Result<Self> {
        let na = mdp.n_actions();
        let mut probs = vec![0.0; mdp.n_states() * na];
        for &i in mdp.nonterminal_states() {
            let u = *actions
                .get(i)
                .ok_or_else(|| Error::Shape("one action per state required".into()))?;
            if !mdp.is_feasible(i, u) {
                return Err(Error::InvalidPolicy(format!(
                    "action {u} infeasible at {i}"
                )));
            }
            probs[i * na + u] = 1.0;
        }
        Ok(Self {
            probs,
            n_actions: na,
        })
    }

    #[inline]
    pub fn prob(&self, i: usize, u: usize) -> f64 {
        self.probs[i * self.n_actions + u]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.probs[i * self.n_actions..(i + 1) * self.n_actions]
    }

    /// The action carrying all the mass at `i`, if the row is deterministic.
    pub fn action(&self, i: usize) -> Option<usize> {
        self.row(i).iter().position(|&x| x == 1.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::substream;

    fn chain() -> TabularMdp {
        // 0 -a0-> 1 -a0-> terminal(2); costs 1 and 2.
        MdpBuilder::new(3, 1, 2)
            .transition(0, 0, 1, 1.0, 1.0)
            .transition(1, 0, 2, 1.0, 2.0)
            .start(0)
            .build()
            .unwrap()
    }

    #[test]
    fn terminal_not_absorbing_is_reported() {
        let m = chain();
        let mut p = m.p.clone();
        let k = m.idx(2, 0, 2);
        p[k] = 0.5;
        p[m.idx(2, 0, 0)] = 0.5;
        let bad = TabularMdp::from_raw(3, 1, 2, p, m.g.clone(), m.h0.clone()).unwrap();
        let err = bad.validate().unwrap_err().to_string();
        assert!(err.contains("terminal not absorbing"), "{err}");
    }

    #[test]
    fn row_sum_off_by_a_percent_is_reported() {
        let m = chain();
        let mut p = m.p.clone();
        p[m.idx(0, 0, 1)] = 0.99;
        let bad = TabularMdp::from_raw(3, 1, 2, p, m.g.clone(), m.h0.clone()).unwrap();
        let err = bad.validate().unwrap_err().to_string();
        assert!(err.contains("row not stochastic"), "{err}");
        assert!(err.contains("p[0][0]"), "{err}");
    }

    #[test]
    fn h0_on_terminal_is_rejected() {
        let m = chain();
        let bad =
            TabularMdp::from_raw(3, 1, 2, m.p.clone(), m.g.clone(), vec![0.5, 0.0, 0.5]).unwrap();
        assert!(bad.validate().is_err());
    }

    #[test]
    fn costs_on_impossible_transitions_are_dropped() {
        let m = chain();
        let mut g = m.g.clone();
        g[m.idx(0, 0, 0)] = 9.0;
        let m2 = TabularMdp::new(3, 1, 2, m.p.clone(), g, m.h0.clone()).unwrap();
        assert_eq!(m2, m);
    }

    #[test]
    fn deterministic_transition_always_hits_successor() {
        let m = chain();
        let mut rng = substream(3, 0);
        for _ in 0..100 {
            assert_eq!(m.sample_transition(0, 0, &mut rng).unwrap(), (1, 1.0));
        }
        assert!(matches!(
            m.sample_transition(2, 0, &mut rng),
            Err(Error::TerminalState(2))
        ));
    }

    #[test]
    fn compact_index_skips_terminal() {
        let m = MdpBuilder::new(4, 1, 1)
            .transition(0, 0, 1, 1.0, 0.0)
            .transition(2, 0, 1, 1.0, 0.0)
            .transition(3, 0, 1, 1.0, 0.0)
            .start(0)
            .build()
            .unwrap();
        assert_eq!(m.nonterminal_states(), &[0, 2, 3]);
        assert_eq!(m.compact_index(0), Some(0));
        assert_eq!(m.compact_index(1), None);
        assert_eq!(m.compact_index(3), Some(2));
    }

    #[test]
    fn value_table_pins_terminal() {
        let m = chain();
        let mut v = ValueTable::from_full(&m, &[1.0, 2.0, 3.0]).unwrap();
        assert_eq!(v.get(2), 0.0);
        v.add(2, 5.0);
        v.set(2, 5.0);
        assert_eq!(v.get(2), 0.0);
        assert_eq!(v.nonterminal_values(), vec![1.0, 2.0]);
    }

    #[test]
    fn greedy_ties_go_to_lowest_index() {
        let m = MdpBuilder::new(2, 3, 1)
            .transition(0, 0, 1, 1.0, 0.0)
            .transition(0, 1, 1, 1.0, 0.0)
            .transition(0, 2, 1, 1.0, 0.0)
            .start(0)
            .build()
            .unwrap();
        let q = QTable::zeros(&m);
        assert_eq!(q.greedy_action(&m, 0, Objective::Minimize), 0);
        assert_eq!(q.greedy_action(&m, 0, Objective::Maximize), 0);
    }
}
