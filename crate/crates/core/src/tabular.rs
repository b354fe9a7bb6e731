//! Tabular two-timescale actor-critic / critic-actor and the value-based
//! baselines (Q-learning, SARSA).
//!
//! Actor-critic and critic-actor share one recursion and differ only in
//! which of the two step-size sequences decays faster: actor-critic runs the
//! critic on the fast timescale, critic-actor runs the actor there.

use crate::episode::{EpisodeTrace, Transition};
use crate::error::{Error, Result};
use crate::mdp::{value_iteration, Objective, QTable, TabularMdp, ValueTable};
use crate::policies::{ExplorationSchedule, SoftmaxActor};
use crate::record::{param_hash, MetricRow, ParamColumns, RunRecord};
use crate::rng::{sample_index, Streams};
use crate::schedules::{Component, ScheduleFamily, StepSchedule, VisitCounters};
use rand::Rng;
use std::collections::VecDeque;
use std::fmt;
use std::str::FromStr;

pub const DEFAULT_THETA_BOX: f64 = 10.0;
pub const DEFAULT_EPISODE_CAP: usize = 100_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Variant {
    ActorCritic,
    CriticActor,
}

impl Variant {
    /// `(critic, actor)` schedules with unit scale.
    pub fn default_schedules(self) -> (StepSchedule, StepSchedule) {
        match self {
            Variant::ActorCritic => (
                StepSchedule::unit(ScheduleFamily::AcFast),
                StepSchedule::unit(ScheduleFamily::AcSlow),
            ),
            Variant::CriticActor => (
                StepSchedule::unit(ScheduleFamily::CaFast),
                StepSchedule::unit(ScheduleFamily::CaSlow),
            ),
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Variant::ActorCritic => "ac",
            Variant::CriticActor => "ca",
        })
    }
}

impl FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ac" => Ok(Variant::ActorCritic),
            "ca" => Ok(Variant::CriticActor),
            other => Err(Error::Config(format!("unknown variant '{other}'"))),
        }
    }
}

/// Mutable state of one tabular actor-critic or critic-actor run.
#[derive(Clone, Debug)]
pub struct TabularRunState {
    pub values: ValueTable,
    pub actor: SoftmaxActor,
    pub counters: VisitCounters,
    pub critic_step: StepSchedule,
    pub actor_step: StepSchedule,
    pub objective: Objective,
    /// Skip actor updates (policy evaluation only). Random draws are still
    /// made so that streams stay aligned with an unfrozen run.
    pub freeze_actor: bool,
    pub streams: Streams,
    pub episode_cap: usize,
    pairs: Vec<(usize, usize)>,
}

impl TabularRunState {
    pub fn new(mdp: &TabularMdp, variant: Variant, objective: Objective, seed: u64) -> Self {
        let (critic_step, actor_step) = variant.default_schedules();
        Self {
            values: ValueTable::zeros(mdp),
            actor: SoftmaxActor::new(mdp, DEFAULT_THETA_BOX).expect("positive radius"),
            counters: VisitCounters::new(mdp),
            critic_step,
            actor_step,
            objective,
            freeze_actor: false,
            streams: Streams::new(seed),
            episode_cap: DEFAULT_EPISODE_CAP,
            pairs: mdp.feasible_pairs(),
        }
    }

    pub fn with_schedules(mut self, critic: StepSchedule, actor: StepSchedule) -> Self {
        self.critic_step = critic;
        self.actor_step = actor;
        self
    }

    pub fn with_actor(mut self, actor: SoftmaxActor) -> Self {
        self.actor = actor;
        self
    }

    pub fn frozen(mut self) -> Self {
        self.freeze_actor = true;
        self
    }

    fn actor_update(&mut self, i: usize, u: usize, td: f64) -> Result<()> {
        if self.freeze_actor {
            return Ok(());
        }
        let b = self
            .counters
            .record_and_step(Component::Pair(i, u), &self.actor_step)?;
        self.actor.step(i, u, self.objective.ascent_sign() * b * td);
        Ok(())
    }

    /// Critic values followed by actor parameters.
    pub fn params(&self) -> Vec<f64> {
        let mut p = self.values.as_slice().to_vec();
        p.extend_from_slice(self.actor.params());
        p
    }
}

/// One offline iteration: a critic update at a uniformly drawn state and an
/// actor update at a uniformly drawn feasible state-action pair, each with
/// its own independent successor sample. Both temporal differences use the
/// critic as it was before this iteration.
pub fn offline_step(rs: &mut TabularRunState, mdp: &TabularMdp) -> Result<()> {
    let states = mdp.nonterminal_states();
    let i = states[rs.streams.component.random_range(0..states.len())];
    let u = sample_index(&rs.actor.probs(i), &mut rs.streams.action);
    let (j, c) = mdp.sample_transition(i, u, &mut rs.streams.env)?;
    let critic_td = c + rs.values.get(j) - rs.values.get(i);

    let (k, w) = rs.pairs[rs.streams.component.random_range(0..rs.pairs.len())];
    let (j2, c2) = mdp.sample_transition(k, w, &mut rs.streams.env)?;
    let actor_td = c2 + rs.values.get(j2) - rs.values.get(k);

    let a = rs
        .counters
        .record_and_step(Component::State(i), &rs.critic_step)?;
    rs.values.add(i, a * critic_td);
    rs.actor_update(k, w, actor_td)
}

/// One online episode: every visited state gets a critic update and every
/// visited pair an actor update, both driven by the same observed transition.
pub fn run_online_episode(rs: &mut TabularRunState, mdp: &TabularMdp) -> Result<EpisodeTrace> {
    let mut trace = EpisodeTrace::default();
    let mut i = mdp.sample_start(&mut rs.streams.env);
    while !mdp.is_terminal(i) {
        if trace.len() >= rs.episode_cap {
            return Err(Error::EpisodeCap(rs.episode_cap));
        }
        let u = sample_index(&rs.actor.probs(i), &mut rs.streams.action);
        let (j, c) = mdp.sample_transition(i, u, &mut rs.streams.env)?;
        let td = c + rs.values.get(j) - rs.values.get(i);
        let a = rs
            .counters
            .record_and_step(Component::State(i), &rs.critic_step)?;
        rs.values.add(i, a * td);
        rs.actor_update(i, u, td)?;
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

/// Rolls out the current softmax policy without learning.
pub fn rollout<R: Rng>(
    mdp: &TabularMdp,
    actor: &SoftmaxActor,
    rng: &mut R,
    cap: usize,
) -> Result<EpisodeTrace> {
    let mut trace = EpisodeTrace::default();
    let mut i = mdp.sample_start(rng);
    while !mdp.is_terminal(i) {
        if trace.len() >= cap {
            return Err(Error::EpisodeCap(cap));
        }
        let u = sample_index(&actor.probs(i), rng);
        let (j, c) = mdp.sample_transition(i, u, rng)?;
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

#[derive(Clone, Debug)]
pub struct OfflineConfig {
    pub objective: Objective,
    /// Overrides the variant's critic schedule.
    pub critic_step: Option<StepSchedule>,
    /// Overrides the variant's actor schedule.
    pub actor_step: Option<StepSchedule>,
    pub theta_box: f64,
    pub freeze_actor: bool,
    /// Steps between logged rows.
    pub interval: u64,
    /// Evaluation episodes averaged into the running return.
    pub window: usize,
    pub seed: u64,
    pub episode_cap: usize,
}

impl OfflineConfig {
    pub fn new(seed: u64) -> Self {
        Self {
            objective: Objective::Minimize,
            critic_step: None,
            actor_step: None,
            theta_box: DEFAULT_THETA_BOX,
            freeze_actor: false,
            interval: 10_000,
            window: 10_000,
            seed,
            episode_cap: DEFAULT_EPISODE_CAP,
        }
    }
}

/// Sliding mean over the most recent `window` episode returns.
#[derive(Clone, Debug)]
pub struct RunningMean {
    window: usize,
    buf: VecDeque<f64>,
}

impl RunningMean {
    pub fn new(window: usize) -> Self {
        Self {
            window: window.max(1),
            buf: VecDeque::new(),
        }
    }

    pub fn push(&mut self, x: f64) {
        if self.buf.len() == self.window {
            self.buf.pop_front();
        }
        self.buf.push_back(x);
    }

    /// Mean in arrival order, `None` before the first push.
    pub fn mean(&self) -> Option<f64> {
        if self.buf.is_empty() {
            None
        } else {
            Some(self.buf.iter().sum::<f64>() / self.buf.len() as f64)
        }
    }
}

/// Runs `budget` offline iterations, logging every `interval` steps the
/// return of one evaluation episode, the running return over the window and
/// `‖V_n − V*‖₂`.
pub fn run_offline(
    mdp: &TabularMdp,
    variant: Variant,
    budget: u64,
    cfg: &OfflineConfig,
) -> Result<RunRecord> {
    let (vstar, _) = value_iteration(mdp, 1e-12, cfg.objective)?;
    let (dc, da) = variant.default_schedules();
    let mut rs = TabularRunState::new(mdp, variant, cfg.objective, cfg.seed)
        .with_schedules(cfg.critic_step.unwrap_or(dc), cfg.actor_step.unwrap_or(da))
        .with_actor(SoftmaxActor::new(mdp, cfg.theta_box)?);
    rs.freeze_actor = cfg.freeze_actor;
    rs.episode_cap = cfg.episode_cap;

    let mut record = RunRecord::new(ParamColumns::None);
    let mut running = RunningMean::new(cfg.window);
    let interval = cfg.interval.max(1);
    let mut log = |rs: &mut TabularRunState, step: u64, record: &mut RunRecord| -> Result<()> {
        let ret = rollout(mdp, &rs.actor, &mut rs.streams.eval, rs.episode_cap)?.total();
        running.push(ret);
        record.rows.push(MetricRow {
            index: step,
            steps: step,
            episodes: record.rows.len() as u64 + 1,
            episode_return: Some(ret),
            running_return: running.mean(),
            value_error: Some(l2_distance(&rs.values, &vstar)),
            param_hash: param_hash(&rs.params()),
            params: Vec::new(),
            diverged: false,
        });
        Ok(())
    };
    log(&mut rs, 0, &mut record)?;
    for n in 1..=budget {
        offline_step(&mut rs, mdp)?;
        if n % interval == 0 || n == budget {
            log(&mut rs, n, &mut record)?;
        }
    }
    Ok(record)
}

/// `‖a − b‖₂` over non-terminal states.
pub fn l2_distance(a: &ValueTable, b: &ValueTable) -> f64 {
    a.as_slice()
        .iter()
        .zip(b.as_slice())
        .enumerate()
        .filter(|&(i, _)| i != a.terminal())
        .map(|(_, (x, y))| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

/// How step sizes and exploration decay are indexed.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum StepIndexing {
    /// Step `α(ν₂(i,u))`, exploration by visits to `i`.
    #[default]
    PerComponent,
    /// Step `α(n)` and exploration by the global transition count `n`.
    Global,
}

impl fmt::Display for StepIndexing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            StepIndexing::PerComponent => "per-component",
            StepIndexing::Global => "global",
        })
    }
}

impl FromStr for StepIndexing {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "per-component" => Ok(StepIndexing::PerComponent),
            "global" => Ok(StepIndexing::Global),
            other => Err(Error::Config(format!("unknown step indexing '{other}'"))),
        }
    }
}

/// State of a tabular Q-learning or SARSA run.
#[derive(Clone, Debug)]
pub struct ValueLearner {
    pub q: QTable,
    pub counters: VisitCounters,
    pub step: StepSchedule,
    pub explore: ExplorationSchedule,
    pub objective: Objective,
    pub indexing: StepIndexing,
    /// Transitions processed so far.
    pub transitions: u64,
    pub streams: Streams,
    pub episode_cap: usize,
}

impl ValueLearner {
    pub fn new(
        mdp: &TabularMdp,
        step: StepSchedule,
        explore: ExplorationSchedule,
        objective: Objective,
        seed: u64,
    ) -> Self {
        Self {
            q: QTable::zeros(mdp),
            counters: VisitCounters::new(mdp),
            step,
            explore,
            objective,
            indexing: StepIndexing::PerComponent,
            transitions: 0,
            streams: Streams::new(seed),
            episode_cap: DEFAULT_EPISODE_CAP,
        }
    }

    pub fn with_indexing(mut self, indexing: StepIndexing) -> Self {
        self.indexing = indexing;
        self
    }

    fn choose(&mut self, mdp: &TabularMdp, i: usize) -> Result<usize> {
        let visits = self.counters.bump(Component::State(i))?;
        let count = match self.indexing {
            StepIndexing::PerComponent => visits,
            StepIndexing::Global => self.transitions,
        };
        let probs = self.explore.behavior(
            self.q.row(i),
            mdp.feasible_actions(i),
            self.objective,
            count,
        );
        Ok(sample_index(&probs, &mut self.streams.action))
    }

    fn learn(&mut self, i: usize, u: usize, target: f64) -> Result<()> {
        let alpha = match self.indexing {
            StepIndexing::PerComponent => self
                .counters
                .record_and_step(Component::Pair(i, u), &self.step)?,
            StepIndexing::Global => {
                self.counters.bump(Component::Pair(i, u))?;
                self.step.eval(self.transitions)
            }
        };
        self.transitions += 1;
        let q = self.q.get(i, u);
        self.q.add(i, u, alpha * (target - q));
        Ok(())
    }
}

/// One Q-learning episode: the target bootstraps from the best next action
/// (`min` for costs, `max` for rewards); the terminal contributes 0.
pub fn q_learning_episode(l: &mut ValueLearner, mdp: &TabularMdp) -> Result<EpisodeTrace> {
    let mut trace = EpisodeTrace::default();
    let mut i = mdp.sample_start(&mut l.streams.env);
    while !mdp.is_terminal(i) {
        if trace.len() >= l.episode_cap {
            return Err(Error::EpisodeCap(l.episode_cap));
        }
        let u = l.choose(mdp, i)?;
        let (j, c) = mdp.sample_transition(i, u, &mut l.streams.env)?;
        let target = c + l.q.best_value(mdp, j, l.objective);
        l.learn(i, u, target)?;
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

/// One SARSA episode: the target bootstraps from the next action actually
/// chosen by the behaviour rule.
pub fn sarsa_episode(l: &mut ValueLearner, mdp: &TabularMdp) -> Result<EpisodeTrace> {
    let mut trace = EpisodeTrace::default();
    let mut i = mdp.sample_start(&mut l.streams.env);
    if mdp.is_terminal(i) {
        return Ok(trace);
    }
    let mut u = l.choose(mdp, i)?;
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
            l.learn(i, u, c)?;
            break;
        }
        let next_u = l.choose(mdp, j)?;
        let target = c + l.q.get(j, next_u);
        l.learn(i, u, target)?;
        i = j;
        u = next_u;
    }
    Ok(trace)
}
