//! Policy parameterisations and exploration rules.

use crate::error::{Error, Result};
use crate::features::ActionFeatures;
use crate::mdp::{greedy_over, Objective, StationaryPolicy, TabularMdp};
use std::fmt;

/// Softmax over the feasible entries of `logits`, written into a vector of
/// length `logits.len()` with zeros at infeasible positions.
pub fn softmax(logits: &[f64], feasible: &[usize]) -> Vec<f64> {
    let mut out = vec![0.0; logits.len()];
    if feasible.is_empty() {
        return out;
    }
    let max = feasible
        .iter()
        .map(|&u| logits[u])
        .fold(f64::NEG_INFINITY, f64::max);
    let mut z = 0.0;
    for &u in feasible {
        let e = (logits[u] - max).exp();
        out[u] = e;
        z += e;
    }
    for &u in feasible {
        out[u] /= z;
    }
    out
}

/// `ε/|A_i| + (1-ε) softmax(logits)` over the feasible actions.
pub fn eps_softmax(logits: &[f64], feasible: &[usize], eps: f64) -> Vec<f64> {
    let mut out = softmax(logits, feasible);
    if eps > 0.0 {
        let floor = eps / feasible.len() as f64;
        for &u in feasible {
            out[u] = floor + (1.0 - eps) * out[u];
        }
    }
    out
}

/// Componentwise clamp to `[-radius, radius]`.
pub fn project_box(values: &mut [f64], radius: f64) {
    for x in values {
        *x = x.clamp(-radius, radius);
    }
}

/// Tabular softmax actor `π_θ(i,u) ∝ exp θ(i,u)` with `θ` kept in a box.
#[derive(Clone, Debug, PartialEq)]
pub struct SoftmaxActor {
    theta: Vec<f64>,
    n_actions: usize,
    radius: f64,
    feasible: Vec<Vec<usize>>,
}

impl SoftmaxActor {
    pub fn new(mdp: &TabularMdp, radius: f64) -> Result<Self> {
        if !(radius > 0.0) {
            return Err(Error::Config(format!(
                "box radius must be positive, got {radius}"
            )));
        }
        Ok(Self {
            theta: vec![0.0; mdp.n_states() * mdp.n_actions()],
            n_actions: mdp.n_actions(),
            radius,
            feasible: (0..mdp.n_states())
                .map(|i| {
                    if mdp.is_terminal(i) {
                        Vec::new()
                    } else {
                        mdp.feasible_actions(i).to_vec()
                    }
                })
                .collect(),
        })
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    #[inline]
    pub fn theta(&self, i: usize, u: usize) -> f64 {
        self.theta[i * self.n_actions + u]
    }

    pub fn params(&self) -> &[f64] {
        &self.theta
    }

    /// Overwrites one parameter, projecting it into the box.
    pub fn set(&mut self, i: usize, u: usize, x: f64) {
        self.theta[i * self.n_actions + u] = x.clamp(-self.radius, self.radius);
    }

    /// `θ(i,u) ← Γ(θ(i,u) + delta)`.
    pub fn step(&mut self, i: usize, u: usize, delta: f64) {
        let k = i * self.n_actions + u;
        self.theta[k] = (self.theta[k] + delta).clamp(-self.radius, self.radius);
    }

    pub fn probs(&self, i: usize) -> Vec<f64> {
        softmax(
            &self.theta[i * self.n_actions..(i + 1) * self.n_actions],
            &self.feasible[i],
        )
    }

    pub fn policy(&self, mdp: &TabularMdp) -> StationaryPolicy {
        let mut probs = vec![0.0; mdp.n_states() * self.n_actions];
        for &i in mdp.nonterminal_states() {
            probs[i * self.n_actions..(i + 1) * self.n_actions].copy_from_slice(&self.probs(i));
        }
        StationaryPolicy::new(mdp, probs).expect("softmax rows are distributions")
    }
}

/// Linear softmax actor `π_θ(i,u) ∝ exp(θᵀφ₁(i,u))`, optionally mixed with the
/// uniform distribution at weight `ε`.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearSoftmaxActor {
    theta: Vec<f64>,
    features: ActionFeatures,
    radius: f64,
    epsilon: f64,
}

impl LinearSoftmaxActor {
    pub fn new(features: ActionFeatures, radius: f64, epsilon: f64) -> Result<Self> {
        if !(radius > 0.0) {
            return Err(Error::Config(format!(
                "box radius must be positive, got {radius}"
            )));
        }
        if !(0.0..=1.0).contains(&epsilon) {
            return Err(Error::Config(format!(
                "epsilon must lie in [0,1], got {epsilon}"
            )));
        }
        Ok(Self {
            theta: vec![0.0; features.dim()],
            features,
            radius,
            epsilon,
        })
    }

    pub fn with_theta(mut self, theta: &[f64]) -> Result<Self> {
        if theta.len() != self.theta.len() {
            return Err(Error::Shape(format!(
                "theta has {} entries, features have dimension {}",
                theta.len(),
                self.theta.len()
            )));
        }
        self.theta.copy_from_slice(theta);
        project_box(&mut self.theta, self.radius);
        Ok(self)
    }

    pub fn theta(&self) -> &[f64] {
        &self.theta
    }

    /// Sets parameters without projection; used by finite-difference checks.
    pub fn set_theta_raw(&mut self, theta: &[f64]) {
        self.theta.copy_from_slice(theta);
    }

    pub fn features(&self) -> &ActionFeatures {
        &self.features
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    fn logits(&self, i: usize) -> Vec<f64> {
        let mut l = vec![0.0; self.features.n_actions()];
        for &u in self.features.feasible(i) {
            l[u] = self.features.dot(&self.theta, i, u);
        }
        l
    }

    pub fn probs(&self, i: usize) -> Vec<f64> {
        eps_softmax(&self.logits(i), self.features.feasible(i), self.epsilon)
    }

    /// `ψ_θ(i,u) = ∇_θ log π_θ(i,u)`, exact for the ε-mixture as well.
    pub fn log_policy_gradient(&self, i: usize, u: usize) -> Vec<f64> {
        let feasible = self.features.feasible(i);
        let d = self.features.dim();
        let sigma = softmax(&self.logits(i), feasible);
        let mut mean = vec![0.0; d];
        for &a in feasible {
            for (m, &f) in mean.iter_mut().zip(self.features.row(i, a)) {
                *m += sigma[a] * f;
            }
        }
        // ∇σ(u) = σ(u)(φ₁(u) − φ̄); the mixture scales it by (1-ε)/π(u).
        let weight = if self.epsilon > 0.0 {
            let pi = self.epsilon / feasible.len() as f64 + (1.0 - self.epsilon) * sigma[u];
            (1.0 - self.epsilon) * sigma[u] / pi
        } else {
            1.0
        };
        self.features
            .row(i, u)
            .iter()
            .zip(&mean)
            .map(|(f, m)| weight * (f - m))
            .collect()
    }

    /// `θ ← Γ¹(θ + step · direction)`.
    pub fn step(&mut self, direction: &[f64], step: f64) {
        for (t, d) in self.theta.iter_mut().zip(direction) {
            *t += step * d;
        }
        project_box(&mut self.theta, self.radius);
    }

    pub fn policy(&self, mdp: &TabularMdp) -> StationaryPolicy {
        let na = mdp.n_actions();
        let mut probs = vec![0.0; mdp.n_states() * na];
        for &i in mdp.nonterminal_states() {
            probs[i * na..(i + 1) * na].copy_from_slice(&self.probs(i));
        }
        StationaryPolicy::new(mdp, probs).expect("softmax rows are distributions")
    }
}

/// Behaviour rules for the value-based baselines.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ExplorationSchedule {
    /// ε-greedy with `ε = min(1, c/(n+1))`.
    EpsGreedyGlie { c: f64 },
    /// Boltzmann with temperature `C/log(n+2)`.
    SoftmaxGlie { c: f64 },
    /// ε-greedy with a fixed ε.
    ConstantEps { eps: f64 },
    /// Fixed ε-softmax: `ε/|A| + (1-ε) softmax(q/τ)`.
    EpsSoftmax { eps: f64, temperature: f64 },
}

/// Exploration parameters in effect after `n` visits.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Exploration {
    Greedy { eps: f64 },
    Boltzmann { eps: f64, temperature: f64 },
}

impl ExplorationSchedule {
    pub fn validate(&self) -> Result<()> {
        let ok = match *self {
            ExplorationSchedule::EpsGreedyGlie { c } | ExplorationSchedule::SoftmaxGlie { c } => {
                c > 0.0
            }
            ExplorationSchedule::ConstantEps { eps } => (0.0..=1.0).contains(&eps),
            ExplorationSchedule::EpsSoftmax { eps, temperature } => {
                (0.0..=1.0).contains(&eps) && temperature > 0.0
            }
        };
        if ok {
            Ok(())
        } else {
            Err(Error::Config(format!(
                "invalid exploration schedule {self:?}"
            )))
        }
    }

    pub fn tag(&self) -> &'static str {
        match self {
            ExplorationSchedule::EpsGreedyGlie { .. } => "eps-greedy-glie",
            ExplorationSchedule::SoftmaxGlie { .. } => "softmax-glie",
            ExplorationSchedule::ConstantEps { .. } => "constant-eps",
            ExplorationSchedule::EpsSoftmax { .. } => "eps-softmax",
        }
    }

    pub fn params(&self, visit_count: u64) -> Exploration {
        let n = visit_count as f64;
        match *self {
            ExplorationSchedule::EpsGreedyGlie { c } => Exploration::Greedy {
                eps: (c / (n + 1.0)).min(1.0),
            },
            ExplorationSchedule::SoftmaxGlie { c } => Exploration::Boltzmann {
                eps: 0.0,
                temperature: c / (n + 2.0).ln(),
            },
            ExplorationSchedule::ConstantEps { eps } => Exploration::Greedy { eps },
            ExplorationSchedule::EpsSoftmax { eps, temperature } => {
                Exploration::Boltzmann { eps, temperature }
            }
        }
    }

    /// Behaviour distribution over actions given their current values.
    /// `values[u]` is read only for feasible `u`.
    pub fn behavior(
        &self,
        values: &[f64],
        feasible: &[usize],
        objective: Objective,
        visit_count: u64,
    ) -> Vec<f64> {
        match self.params(visit_count) {
            Exploration::Greedy { eps } => {
                let mut out = vec![0.0; values.len()];
                let floor = eps / feasible.len() as f64;
                for &u in feasible {
                    out[u] = floor;
                }
                let best = greedy_over(feasible, |u| values[u], objective);
                out[best] += 1.0 - eps;
                out
            }
            Exploration::Boltzmann { eps, temperature } => {
                let sign = objective.ascent_sign();
                let logits: Vec<f64> = values.iter().map(|q| sign * q / temperature).collect();
                eps_softmax(&logits, feasible, eps)
            }
        }
    }
}

impl fmt::Display for ExplorationSchedule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mdp::MdpBuilder;
    use proptest::prelude::*;

    fn four_action() -> TabularMdp {
        let mut b = MdpBuilder::new(2, 4, 1);
        for u in 0..4 {
            b = b.transition(0, u, 1, 1.0, 0.0);
        }
        b.start(0).build().unwrap()
    }

    #[test]
    fn uniform_at_zero() {
        let m = four_action();
        let a = SoftmaxActor::new(&m, 10.0).unwrap();
        assert_eq!(a.probs(0), vec![0.25; 4]);
    }

    #[test]
    fn saturated_pair() {
        let p = softmax(&[10.0, -10.0], &[0, 1]);
        let small = 1.0 / (1.0 + 20f64.exp());
        assert!((p[1] - small).abs() < 1e-20);
        assert!((p[1] - 2.06e-9).abs() < 1e-11);
        assert!((p[0] - (1.0 - small)).abs() < 1e-15);
    }

    #[test]
    fn projection() {
        let mut v = [12.0, -3.0, -15.0];
        project_box(&mut v, 10.0);
        assert_eq!(v, [10.0, -3.0, -10.0]);
        let once = v;
        project_box(&mut v, 10.0);
        assert_eq!(v, once);
    }

    #[test]
    fn actor_step_stays_in_box() {
        let m = four_action();
        let mut a = SoftmaxActor::new(&m, 10.0).unwrap();
        a.step(0, 1, 25.0);
        assert_eq!(a.theta(0, 1), 10.0);
        a.step(0, 1, -50.0);
        assert_eq!(a.theta(0, 1), -10.0);
    }

    #[test]
    fn glie_values() {
        let s = ExplorationSchedule::EpsGreedyGlie { c: 1.0 };
        assert_eq!(s.params(0), Exploration::Greedy { eps: 1.0 });
        assert_eq!(s.params(9), Exploration::Greedy { eps: 0.1 });
        let s = ExplorationSchedule::ConstantEps { eps: 1.0 };
        assert_eq!(s.params(12345), Exploration::Greedy { eps: 1.0 });
        let s = ExplorationSchedule::SoftmaxGlie { c: 2.0 };
        match s.params(0) {
            Exploration::Boltzmann { temperature, .. } => {
                assert!((temperature - 2.0 / 2f64.ln()).abs() < 1e-15)
            }
            _ => unreachable!(),
        }
    }

    #[test]
    fn greedy_behavior_prefers_lower_cost() {
        let s = ExplorationSchedule::ConstantEps { eps: 0.2 };
        let p = s.behavior(&[1.0, -1.0, 0.0], &[0, 1, 2], Objective::Minimize, 0);
        assert!((p[1] - (0.2 / 3.0 + 0.8)).abs() < 1e-15);
        let p = s.behavior(&[1.0, -1.0, 0.0], &[0, 1, 2], Objective::Maximize, 0);
        assert!((p[0] - (0.2 / 3.0 + 0.8)).abs() < 1e-15);
        let p = s.behavior(&[0.0, 0.0], &[0, 1], Objective::Minimize, 0);
        assert!(p[0] > p[1]);
    }

    #[test]
    fn boltzmann_behavior_direction() {
        let s = ExplorationSchedule::EpsSoftmax {
            eps: 0.0,
            temperature: 1.0,
        };
        let p = s.behavior(&[0.0, 1.0], &[0, 1], Objective::Minimize, 0);
        assert!(p[0] > p[1]);
        let p = s.behavior(&[0.0, 1.0], &[0, 1], Objective::Maximize, 0);
        assert!(p[0] < p[1]);
    }

    proptest! {
        #[test]
        fn distributions_are_normalised(
            logits in prop::collection::vec(-30.0f64..30.0, 1..6),
            eps in 0.0f64..1.0,
            shift in -50.0f64..50.0,
        ) {
            let feasible: Vec<usize> = (0..logits.len()).collect();
            let p = eps_softmax(&logits, &feasible, eps);
            let s: f64 = p.iter().sum();
            prop_assert!((s - 1.0).abs() < 1e-12);
            prop_assert!(p.iter().all(|&x| x >= 0.0));
            let shifted: Vec<f64> = logits.iter().map(|x| x + shift).collect();
            let q = eps_softmax(&shifted, &feasible, eps);
            for (a, b) in p.iter().zip(&q) {
                prop_assert!((a - b).abs() < 1e-12);
            }
        }

        #[test]
        fn projection_is_idempotent(v in prop::collection::vec(-100.0f64..100.0, 0..8), r in 0.1f64..50.0) {
            let mut once = v.clone();
            project_box(&mut once, r);
            prop_assert!(once.iter().all(|x| x.abs() <= r));
            let mut twice = once.clone();
            project_box(&mut twice, r);
            prop_assert_eq!(once, twice);
        }
    }
}
