use super::config::{Algorithm, ExperimentConfig};
use crate::envs::FeaturedMdp;
use crate::episode::EpisodeTrace;
use crate::error::{Error, Result};
use crate::features::StateFeatures;
use crate::linear_fa::{
    ac_fa_episode, q_lfa_episode, sarsa_lfa_episode, AcFaState, FaCritic, LinearQ,
};
use crate::mdp::{greedy_over, value_iteration, Objective, TabularMdp, ValueTable};
use crate::policies::{LinearSoftmaxActor, SoftmaxActor};
use crate::record::{param_hash, CsvTable, MetricRow, ParamColumns, RunRecord};
use crate::tabular::{
    l2_distance, q_learning_episode, run_offline, run_online_episode, sarsa_episode, OfflineConfig,
    RunningMean, TabularRunState, ValueLearner,
};
use rayon::prelude::*;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

/// A learner that advances one episode at a time.
pub trait EpisodicLearner {
    fn episode(&mut self, mdp: &TabularMdp) -> Result<EpisodeTrace>;

    /// Every learned parameter, in a fixed order.
    fn params(&self) -> Vec<f64>;

    /// Current estimate of the optimal value function.
    fn value_estimate(&self, mdp: &TabularMdp) -> ValueTable;

    /// Transition count at which a divergence guard tripped.
    fn diverged_at(&self) -> Option<u64> {
        None
    }
}

pub struct OnlineActorCritic(pub TabularRunState);

impl EpisodicLearner for OnlineActorCritic {
    fn episode(&mut self, mdp: &TabularMdp) -> Result<EpisodeTrace> {
        run_online_episode(&mut self.0, mdp)
    }

    fn params(&self) -> Vec<f64> {
        self.0.params()
    }

    fn value_estimate(&self, _: &TabularMdp) -> ValueTable {
        self.0.values.clone()
    }
}

pub struct TabularValue {
    pub learner: ValueLearner,
    pub sarsa: bool,
}

impl EpisodicLearner for TabularValue {
    fn episode(&mut self, mdp: &TabularMdp) -> Result<EpisodeTrace> {
        if self.sarsa {
            sarsa_episode(&mut self.learner, mdp)
        } else {
            q_learning_episode(&mut self.learner, mdp)
        }
    }

    fn params(&self) -> Vec<f64> {
        self.learner.q.as_slice().to_vec()
    }

    fn value_estimate(&self, mdp: &TabularMdp) -> ValueTable {
        self.learner.q.greedy_values(mdp, self.learner.objective)
    }
}

pub struct LinearActorCritic {
    pub state: AcFaState,
    pub phi: StateFeatures,
}

impl EpisodicLearner for LinearActorCritic {
    fn episode(&mut self, mdp: &TabularMdp) -> Result<EpisodeTrace> {
        ac_fa_episode(&mut self.state, mdp, &self.phi)
    }

    fn params(&self) -> Vec<f64> {
        self.state.params()
    }

    fn value_estimate(&self, mdp: &TabularMdp) -> ValueTable {
        self.state.critic.snapshot(mdp, &self.phi)
    }
}

pub struct LinearValue {
    pub learner: LinearQ,
    pub sarsa: bool,
}

impl EpisodicLearner for LinearValue {
    fn episode(&mut self, mdp: &TabularMdp) -> Result<EpisodeTrace> {
        if self.sarsa {
            sarsa_lfa_episode(&mut self.learner, mdp)
        } else {
            q_lfa_episode(&mut self.learner, mdp)
        }
    }

    fn params(&self) -> Vec<f64> {
        self.learner.q.clone()
    }

    fn value_estimate(&self, mdp: &TabularMdp) -> ValueTable {
        let mut v = ValueTable::zeros(mdp);
        for &i in mdp.nonterminal_states() {
            let q = self.learner.action_values(i);
            let u = greedy_over(mdp.feasible_actions(i), |u| q[u], self.learner.objective);
            v.set(i, q[u]);
        }
        v
    }

    fn diverged_at(&self) -> Option<u64> {
        self.learner.diverged_at
    }
}

fn exact_values(mdp: &TabularMdp, objective: Objective) -> Option<ValueTable> {
    value_iteration(mdp, 1e-12, objective).ok().map(|(v, _)| v)
}

fn vec_or_zeros(v: &[f64], dim: usize) -> Vec<f64> {
    if v.is_empty() {
        vec![0.0; dim]
    } else {
        v.to_vec()
    }
}

/// Builds the learner for an episodic algorithm.
pub fn make_learner(
    cfg: &ExperimentConfig,
    env: &FeaturedMdp,
    seed: u64,
) -> Result<(Box<dyn EpisodicLearner>, ParamColumns)> {
    let mdp = &env.mdp;
    let missing = || Error::Config(format!("{} needs feature maps", cfg.algorithm));
    Ok(match cfg.algorithm {
        Algorithm::AcOnline | Algorithm::CaOnline => {
            let variant = cfg.algorithm.variant().expect("actor-critic variant");
            let mut rs = TabularRunState::new(mdp, variant, cfg.objective, seed)
                .with_schedules(cfg.critic_step, cfg.actor_step)
                .with_actor(SoftmaxActor::new(mdp, cfg.theta0)?);
            rs.freeze_actor = cfg.freeze_actor;
            rs.episode_cap = cfg.episode_cap;
            (Box::new(OnlineActorCritic(rs)), ParamColumns::None)
        }
        Algorithm::Q | Algorithm::Sarsa => {
            let mut l = ValueLearner::new(mdp, cfg.critic_step, cfg.explore, cfg.objective, seed)
                .with_indexing(cfg.step_indexing);
            l.episode_cap = cfg.episode_cap;
            let sarsa = cfg.algorithm == Algorithm::Sarsa;
            (
                Box::new(TabularValue { learner: l, sarsa }),
                ParamColumns::None,
            )
        }
        Algorithm::AcFa => {
            let phi = env.state_features.clone().ok_or_else(missing)?;
            let phi1 = env.action_features.clone().ok_or_else(missing)?;
            let d2 = phi1.dim();
            let actor = LinearSoftmaxActor::new(phi1, cfg.theta_p, cfg.policy_epsilon)?
                .with_theta(&vec_or_zeros(&cfg.init_theta, d2))?;
            let critic = FaCritic {
                v: vec_or_zeros(&cfg.init_v, phi.dim()),
            };
            let mut st = AcFaState::new(
                critic,
                actor,
                cfg.critic_step,
                cfg.actor_step,
                cfg.objective,
                seed,
            );
            st.freeze_actor = cfg.freeze_actor;
            st.episode_cap = cfg.episode_cap;
            let cols = ParamColumns::for_dimension(phi.dim() + d2);
            (Box::new(LinearActorCritic { state: st, phi }), cols)
        }
        Algorithm::QLfa | Algorithm::SarsaLfa => {
            let phi1 = env.action_features.clone().ok_or_else(missing)?;
            let d2 = phi1.dim();
            let mut l = LinearQ::new(phi1, cfg.critic_step, cfg.explore, cfg.objective, seed)
                .with_q(&vec_or_zeros(&cfg.init_q, d2))?;
            l.episode_cap = cfg.episode_cap;
            let sarsa = cfg.algorithm == Algorithm::SarsaLfa;
            (
                Box::new(LinearValue { learner: l, sarsa }),
                ParamColumns::for_dimension(d2),
            )
        }
        Algorithm::Ac | Algorithm::Ca => {
            return Err(Error::Config(format!(
                "{} is not an episodic learner",
                cfg.algorithm
            )))
        }
    })
}

/// Runs `budget` episodes, logging a row at episode 0 and then every
/// `interval` episodes (and after the last one).
pub fn drive(
    learner: &mut dyn EpisodicLearner,
    mdp: &TabularMdp,
    vstar: Option<&ValueTable>,
    columns: ParamColumns,
    budget: u64,
    interval: u64,
    window: usize,
) -> RunRecord {
    let mut record = RunRecord::new(columns);
    let mut running = RunningMean::new(window);
    let mut steps = 0u64;
    let mut last: Option<f64> = None;
    let log = |learner: &dyn EpisodicLearner,
               record: &mut RunRecord,
               episodes: u64,
               steps: u64,
               last: Option<f64>,
               running: &RunningMean| {
        let params = learner.params();
        let keep = if columns == ParamColumns::None {
            Vec::new()
        } else {
            params.clone()
        };
        record.rows.push(MetricRow {
            index: episodes,
            steps,
            episodes,
            episode_return: last,
            running_return: running.mean(),
            value_error: vstar.map(|v| l2_distance(&learner.value_estimate(mdp), v)),
            param_hash: param_hash(&params),
            params: keep,
            diverged: learner.diverged_at().is_some(),
        });
    };
    log(learner, &mut record, 0, 0, last, &running);
    for e in 1..=budget {
        match learner.episode(mdp) {
            Ok(trace) => {
                steps += trace.len() as u64;
                last = Some(trace.total());
                running.push(trace.total());
            }
            Err(err) => {
                record.failure = Some(err.to_string());
                break;
            }
        }
        if e % interval == 0 || e == budget {
            log(learner, &mut record, e, steps, last, &running);
        }
    }
    if let Some(n) = learner.diverged_at() {
        record.trailer.push(("diverged_at".into(), n.to_string()));
    }
    record
}

fn header(cfg: &ExperimentConfig, seed: u64) -> Vec<(String, String)> {
    let mut h = cfg.to_pairs();
    h.push(("seed".into(), seed.to_string()));
    h
}

/// One seed of a validated config. Errors end the run with a failure line;
/// rows logged before the error are kept.
pub fn run_seed(cfg: &ExperimentConfig, env: &FeaturedMdp, seed: u64) -> RunRecord {
    let mdp = &env.mdp;
    let mut record = if cfg.algorithm.budget_in_steps() {
        let variant = cfg.algorithm.variant().expect("offline variant");
        let oc = OfflineConfig {
            objective: cfg.objective,
            critic_step: Some(cfg.critic_step),
            actor_step: Some(cfg.actor_step),
            theta_box: cfg.theta0,
            freeze_actor: cfg.freeze_actor,
            interval: cfg.interval,
            window: cfg.window,
            seed,
            episode_cap: cfg.episode_cap,
        };
        run_offline(mdp, variant, cfg.budget, &oc).unwrap_or_else(|e| {
            let mut r = RunRecord::new(ParamColumns::None);
            r.failure = Some(e.to_string());
            r
        })
    } else {
        match make_learner(cfg, env, seed) {
            Ok((mut learner, cols)) => {
                let vstar = exact_values(mdp, cfg.objective);
                drive(
                    learner.as_mut(),
                    mdp,
                    vstar.as_ref(),
                    cols,
                    cfg.budget,
                    cfg.interval,
                    cfg.window,
                )
            }
            Err(e) => {
                let mut r = RunRecord::new(ParamColumns::None);
                r.failure = Some(e.to_string());
                r
            }
        }
    };
    record.header = header(cfg, seed);
    record
}

/// Validates the config, then runs every seed (in parallel). Records come
/// back in seed order and do not depend on thread scheduling.
pub fn run(cfg: &ExperimentConfig) -> Result<Vec<RunRecord>> {
    let env = cfg.validate()?;
    Ok(cfg
        .seeds
        .par_iter()
        .map(|&s| run_seed(cfg, &env, s))
        .collect())
}

/// Writes `seed_<s>.csv` per record and `aggregate.csv` into `dir`.
pub fn write_outputs(
    cfg: &ExperimentConfig,
    records: &[RunRecord],
    dir: &Path,
) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir)?;
    let mut paths = Vec::new();
    let mut tables = Vec::new();
    for (seed, rec) in cfg.seeds.iter().zip(records) {
        let path = dir.join(format!("seed_{seed}.csv"));
        let text = rec.to_csv();
        std::fs::write(&path, &text)?;
        tables.push(CsvTable::parse(&text)?);
        paths.push(path);
    }
    let path = dir.join("aggregate.csv");
    std::fs::write(&path, aggregate(&tables)?)?;
    paths.push(path);
    Ok(paths)
}

const NOT_AGGREGATED: [&str; 2] = ["index", "param_hash"];

/// Per-row mean and population standard deviation of every numeric column
/// across runs. Rows are matched by position and must agree on `index`;
/// runs that stopped early simply contribute to fewer rows.
pub fn aggregate(tables: &[CsvTable]) -> Result<String> {
    let first = tables
        .first()
        .ok_or_else(|| Error::Shape("nothing to aggregate".into()))?;
    for t in tables {
        if t.columns != first.columns {
            return Err(Error::Shape("runs have different column layouts".into()));
        }
    }
    let cols: Vec<&String> = first
        .columns
        .iter()
        .filter(|c| !NOT_AGGREGATED.contains(&c.as_str()))
        .collect();
    let index_col = first
        .column("index")
        .ok_or_else(|| Error::Shape("missing index column".into()))?;
    let numeric: Vec<Vec<Vec<Option<f64>>>> = tables
        .iter()
        .map(|t| cols.iter().map(|c| t.numeric(c)).collect::<Result<_>>())
        .collect::<Result<_>>()?;

    let mut out = String::new();
    for (k, v) in &first.header {
        if k != "seed" && k != "failure" && k != "diverged_at" && k != "aggregate_of" {
            let _ = writeln!(out, "# {k}={v}");
        }
    }
    let _ = writeln!(out, "# aggregate_of={}", tables.len());
    let mut names = vec!["index".to_string(), "runs".to_string()];
    for c in &cols {
        names.push(format!("{c}_mean"));
        names.push(format!("{c}_std"));
    }
    out.push_str(&names.join(","));
    out.push('\n');

    let n_rows = tables.iter().map(|t| t.rows.len()).max().unwrap_or(0);
    for r in 0..n_rows {
        let present: Vec<usize> = (0..tables.len())
            .filter(|&t| r < tables[t].rows.len())
            .collect();
        let index = &tables[present[0]].rows[r][index_col];
        if present
            .iter()
            .any(|&t| &tables[t].rows[r][index_col] != index)
        {
            return Err(Error::Shape(format!(
                "runs disagree on the index of row {r}"
            )));
        }
        let mut fields = vec![index.clone(), present.len().to_string()];
        for c in 0..cols.len() {
            let xs: Vec<f64> = present.iter().filter_map(|&t| numeric[t][c][r]).collect();
            if xs.is_empty() {
                fields.push(String::new());
                fields.push(String::new());
            } else {
                let n = xs.len() as f64;
                let mean = xs.iter().sum::<f64>() / n;
                let var = xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / n;
                fields.push(mean.to_string());
                fields.push(var.sqrt().to_string());
            }
        }
        out.push_str(&fields.join(","));
        out.push('\n');
    }
    Ok(out)
}
