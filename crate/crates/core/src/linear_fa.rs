//! Linear function approximation: the episodic actor-critic with a linear
//! critic and linear softmax actor, the Q-LFA and SARSA-LFA baselines, and
//! exact expected-dynamics diagnostics.
//!
//! Feature maps return the zero vector at the terminal, so bootstrapped
//! targets vanish there without special casing.

use crate::episode::{EpisodeTrace, Transition};
use crate::error::{Error, Result};
use crate::features::{ActionFeatures, StateFeatures};
use crate::mdp::{
    exact_policy_value, occupancy, policy_matrices, q_from_v, solve_dense, Objective,
    StationaryPolicy, TabularMdp, ValueTable,
};
use crate::policies::{ExplorationSchedule, LinearSoftmaxActor};
use crate::rng::{sample_index, Streams};
use crate::schedules::StepSchedule;
use nalgebra::{DMatrix, DVector};

/// Parameter sup-norm beyond which a value-based run is declared diverged.
pub const DIVERGENCE_GUARD: f64 = 1e12;
pub const DEFAULT_PARAM_BOX: f64 = 20.0;

/// Linear critic `V(i) ≈ vᵀφ(i)`.
#[derive(Clone, Debug, PartialEq)]
pub struct FaCritic {
    pub v: Vec<f64>,
}

impl FaCritic {
    pub fn zeros(dim: usize) -> Self {
        Self { v: vec![0.0; dim] }
    }

    pub fn value(&self, phi: &StateFeatures, i: usize) -> f64 {
        phi.dot(&self.v, i)
    }

    /// `V(i) = vᵀφ(i)` for every state.
    pub fn snapshot(&self, mdp: &TabularMdp, phi: &StateFeatures) -> ValueTable {
        let full: Vec<f64> = (0..mdp.n_states()).map(|i| self.value(phi, i)).collect();
        ValueTable::from_full(mdp, &full).expect("feature map matches the MDP")
    }
}

/// Run state for the episodic linear actor-critic.
#[derive(Clone, Debug)]
pub struct AcFaState {
    pub critic: FaCritic,
    pub actor: LinearSoftmaxActor,
    pub critic_step: StepSchedule,
    pub actor_step: StepSchedule,
    pub objective: Objective,
    pub freeze_actor: bool,
    /// Episodes completed; indexes both step-size sequences.
    pub episodes: u64,
    pub streams: Streams,
    pub episode_cap: usize,
}

impl AcFaState {
    pub fn new(
        critic: FaCritic,
        actor: LinearSoftmaxActor,
        critic_step: StepSchedule,
        actor_step: StepSchedule,
        objective: Objective,
        seed: u64,
    ) -> Self {
        Self {
            critic,
            actor,
            critic_step,
            actor_step,
            objective,
            freeze_actor: false,
            episodes: 0,
            streams: Streams::new(seed),
            episode_cap: crate::tabular::DEFAULT_EPISODE_CAP,
        }
    }

    /// Critic weights followed by actor weights.
    pub fn params(&self) -> Vec<f64> {
        let mut p = self.critic.v.clone();
        p.extend_from_slice(self.actor.theta());
        p
    }
}

/// One episode under the current (fixed) policy, then one critic step and
/// one projected actor step built from the episode's accumulated TD terms.
/// Every TD term uses the critic as it was at the start of the episode.
pub fn ac_fa_episode(
    st: &mut AcFaState,
    mdp: &TabularMdp,
    phi: &StateFeatures,
) -> Result<EpisodeTrace> {
    let d1 = phi.dim();
    let d2 = st.actor.features().dim();
    let mut critic_sum = vec![0.0; d1];
    let mut actor_sum = vec![0.0; d2];
    let mut trace = EpisodeTrace::default();
    let mut i = mdp.sample_start(&mut st.streams.env);
    while !mdp.is_terminal(i) {
        if trace.len() >= st.episode_cap {
            return Err(Error::EpisodeCap(st.episode_cap));
        }
        let u = sample_index(&st.actor.probs(i), &mut st.streams.action);
        let (j, c) = mdp.sample_transition(i, u, &mut st.streams.env)?;
        let d = c + st.critic.value(phi, j) - st.critic.value(phi, i);
        for (s, f) in critic_sum.iter_mut().zip(phi.row(i)) {
            *s += d * f;
        }
        if !st.freeze_actor {
            for (s, p) in actor_sum.iter_mut().zip(st.actor.log_policy_gradient(i, u)) {
                *s += d * p;
            }
        }
        trace.steps.push(Transition {
            state: i,
            action: u,
            cost: c,
            next: j,
        });
        i = j;
    }
    let n = st.episodes;
    let a = st.critic_step.eval(n);
    for (v, s) in st.critic.v.iter_mut().zip(&critic_sum) {
        *v += a * s;
    }
    if !st.freeze_actor {
        let b = st.actor_step.eval(n);
        st.actor.step(&actor_sum, st.objective.ascent_sign() * b);
    }
    st.episodes += 1;
    Ok(trace)
}

/// Shared state of the linear value-based baselines.
#[derive(Clone, Debug)]
pub struct LinearQ {
    pub q: Vec<f64>,
    pub features: ActionFeatures,
    pub step: StepSchedule,
    pub explore: ExplorationSchedule,
    pub objective: Objective,
    /// Transitions processed; drives both step size and exploration.
    pub transitions: u64,
    /// Transition count at which the norm guard tripped.
    pub diverged_at: Option<u64>,
    pub streams: Streams,
    pub episode_cap: usize,
}

impl LinearQ {
    pub fn new(
        features: ActionFeatures,
        step: StepSchedule,
        explore: ExplorationSchedule,
        objective: Objective,
        seed: u64,
    ) -> Self {
        Self {
            q: vec![0.0; features.dim()],
            features,
            step,
            explore,
            objective,
            transitions: 0,
            diverged_at: None,
            streams: Streams::new(seed),
            episode_cap: crate::tabular::DEFAULT_EPISODE_CAP,
        }
    }

    pub fn with_q(mut self, q: &[f64]) -> Result<Self> {
        if q.len() != self.q.len() {
            return Err(Error::Shape(format!(
                "q has {} entries, features have dimension {}",
                q.len(),
                self.q.len()
            )));
        }
        self.q.copy_from_slice(q);
        Ok(self)
    }

    pub fn diverged(&self) -> bool {
        self.diverged_at.is_some()
    }

    /// `qᵀφ₁(i,u)` for every action (zero for infeasible ones).
    pub fn action_values(&self, i: usize) -> Vec<f64> {
        let mut out = vec![0.0; self.features.n_actions()];
        for &u in self.features.feasible(i) {
            out[u] = self.features.dot(&self.q, i, u);
        }
        out
    }

    /// Best action value at `j`; 0 at the terminal.
    fn best_value(&self, j: usize) -> f64 {
        let feasible = self.features.feasible(j);
        if feasible.is_empty() {
            return 0.0;
        }
        let values = self.action_values(j);
        let u = crate::mdp::greedy_over(feasible, |u| values[u], self.objective);
        values[u]
    }

    fn choose(&mut self, i: usize) -> usize {
        let probs = self.explore.behavior(
            &self.action_values(i),
            self.features.feasible(i),
            self.objective,
            self.transitions,
        );
        sample_index(&probs, &mut self.streams.action)
    }

    fn learn(&mut self, i: usize, u: usize, target: f64) {
        let alpha = self.step.eval(self.transitions);
        self.transitions += 1;
        if self.diverged() {
            return;
        }
        let delta = target - self.features.dot(&self.q, i, u);
        let scaled = alpha * delta;
        for (q, f) in self.q.iter_mut().zip(self.features.row(i, u)) {
            *q += scaled * f;
        }
        let norm = self.q.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        if !(norm <= DIVERGENCE_GUARD) {
            self.diverged_at = Some(self.transitions);
        }
    }
}

/// One Q-LFA episode: off-policy semi-gradient updates towards
/// `g + opt_{u'} qᵀφ₁(j,u')`.
pub fn q_lfa_episode(l: &mut LinearQ, mdp: &TabularMdp) -> Result<EpisodeTrace> {
    let mut trace = EpisodeTrace::default();
    let mut i = mdp.sample_start(&mut l.streams.env);
    while !mdp.is_terminal(i) {
        if trace.len() >= l.episode_cap {
            return Err(Error::EpisodeCap(l.episode_cap));
        }
        let u = l.choose(i);
        let (j, c) = mdp.sample_transition(i, u, &mut l.streams.env)?;
        let target = c + l.best_value(j);
        l.learn(i, u, target);
        trace.steps.push(Transition {
            state: i,
            action: u,
            cost: c,
            next: j,
        });
        i = j;
    }
    Ok(trace)
}

/// One SARSA-LFA episode: on-policy semi-gradient updates towards
/// `g + qᵀφ₁(j,u')` with `u'` the next action actually taken.
pub fn sarsa_lfa_episode(l: &mut LinearQ, mdp: &TabularMdp) -> Result<EpisodeTrace> {
    let mut trace = EpisodeTrace::default();
    let mut i = mdp.sample_start(&mut l.streams.env);
    if mdp.is_terminal(i) {
        return Ok(trace);
    }
    let mut u = l.choose(i);
    loop {
        if trace.len() >= l.episode_cap {
            return Err(Error::EpisodeCap(l.episode_cap));
        }
        let (j, c) = mdp.sample_transition(i, u, &mut l.streams.env)?;
        trace.steps.push(Transition {
            state: i,
            action: u,
            cost: c,
            next: j,
        });
        if mdp.is_terminal(j) {
            l.learn(i, u, c);
            break;
        }
        let next_u = l.choose(j);
        let target = c + l.features.dot(&l.q, j, next_u);
        l.learn(i, u, target);
        i = j;
        u = next_u;
    }
    Ok(trace)
}

/// Expected per-episode critic dynamics under `π`:
/// `A¹ = Φᵀ H (P_π − I) Φ` and `b¹ = Φᵀ H R_π` with `H = diag(h^π)`.
pub fn expected_dynamics(
    mdp: &TabularMdp,
    pi: &StationaryPolicy,
    phi: &StateFeatures,
) -> Result<(DMatrix<f64>, DVector<f64>)> {
    let h = occupancy(mdp, pi)?;
    let (p, r) = policy_matrices(mdp, pi);
    let n = p.nrows();
    let phi_m = phi.matrix(mdp);
    let hdiag = DMatrix::from_diagonal(&DVector::from_iterator(
        n,
        mdp.nonterminal_states().iter().map(|&i| h[i]),
    ));
    let weighted = phi_m.transpose() * hdiag;
    let a = &weighted * (p - DMatrix::identity(n, n)) * &phi_m;
    let b = weighted * r;
    Ok((a, b))
}

/// Equilibrium of `v̇ = A¹v + b¹`, i.e. the solution of `A¹v = −b¹`.
pub fn fa_fixed_point(a: &DMatrix<f64>, b: &DVector<f64>) -> Result<FaCritic> {
    let v = solve_dense(a, &(-b))
        .ok_or_else(|| Error::Singular("feature/occupancy degeneracy".into()))?;
    Ok(FaCritic {
        v: v.iter().copied().collect(),
    })
}

/// `J(θ) = h0ᵀ V^θ`.
pub fn policy_objective(mdp: &TabularMdp, actor: &LinearSoftmaxActor) -> Result<f64> {
    let v = exact_policy_value(mdp, &actor.policy(mdp))?;
    Ok(mdp.h0().iter().zip(v.as_slice()).map(|(h, x)| h * x).sum())
}

/// `∇J(θ) = Σ_i h(i) Σ_u π(i,u) ψ(i,u) Q(i,u)`, evaluated exactly.
pub fn exact_policy_gradient(mdp: &TabularMdp, actor: &LinearSoftmaxActor) -> Result<Vec<f64>> {
    let pi = actor.policy(mdp);
    let h = occupancy(mdp, &pi)?;
    let q = q_from_v(mdp, &exact_policy_value(mdp, &pi)?);
    let mut grad = vec![0.0; actor.features().dim()];
    for &i in mdp.nonterminal_states() {
        for &u in mdp.feasible_actions(i) {
            let w = h[i] * pi.prob(i, u) * q.get(i, u);
            if w == 0.0 {
                continue;
            }
            for (g, p) in grad.iter_mut().zip(actor.log_policy_gradient(i, u)) {
                *g += w * p;
            }
        }
    }
    Ok(grad)
}

/// Expected actor direction `f²(θ, v)` built from the linear critic `v`.
pub fn expected_actor_direction(
    mdp: &TabularMdp,
    actor: &LinearSoftmaxActor,
    phi: &StateFeatures,
    critic: &FaCritic,
) -> Result<Vec<f64>> {
    let pi = actor.policy(mdp);
    let h = occupancy(mdp, &pi)?;
    let mut out = vec![0.0; actor.features().dim()];
    for &i in mdp.nonterminal_states() {
        let vi = critic.value(phi, i);
        for &u in mdp.feasible_actions(i) {
            let td: f64 = mdp
                .row(i, u)
                .iter()
                .zip(mdp.cost_row(i, u))
                .enumerate()
                .map(|(j, (&p, &g))| p * (g + critic.value(phi, j)))
                .sum::<f64>()
                - vi;
            let w = h[i] * pi.prob(i, u) * td;
            if w == 0.0 {
                continue;
            }
            for (o, p) in out.iter_mut().zip(actor.log_policy_gradient(i, u)) {
                *o += w * p;
            }
        }
    }
    Ok(out)
}

/// `‖f²(θ, v^θ) − ∇J(θ)‖₂`, with `v^θ` the critic's fixed point.
pub fn approximation_error(
    mdp: &TabularMdp,
    actor: &LinearSoftmaxActor,
    phi: &StateFeatures,
) -> Result<f64> {
    let (a, b) = expected_dynamics(mdp, &actor.policy(mdp), phi)?;
    let critic = fa_fixed_point(&a, &b)?;
    let f2 = expected_actor_direction(mdp, actor, phi, &critic)?;
    let grad = exact_policy_gradient(mdp, actor)?;
    Ok(f2
        .iter()
        .zip(&grad)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt())
}
