//! Experiment configuration: a flat `key=value` text format whose every key
//! can also be given on the command line as `--key value`.
//!
//! A resolved config is written back in full (one key per line, fixed order)
//! into the header of every CSV, and parsing that header yields the same
//! config again.

use crate::envs::{
    EnvKind, EnvSpec, FeaturedMdp, GridSpec, DEFAULT_LEAK, DEFAULT_SLIP, LAYOUT_4X4, LAYOUT_8X8,
};
use crate::error::{Error, Result};
use crate::format::parse_mdp;
use crate::linear_fa::DEFAULT_PARAM_BOX;
use crate::mdp::Objective;
use crate::policies::ExplorationSchedule;
use crate::schedules::{ScheduleFamily, StepSchedule};
use crate::tabular::{StepIndexing, Variant, DEFAULT_EPISODE_CAP, DEFAULT_THETA_BOX};
use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Algorithm {
    /// Offline (simulator-driven) tabular actor-critic.
    Ac,
    /// Offline tabular critic-actor.
    Ca,
    AcOnline,
    CaOnline,
    Q,
    Sarsa,
    AcFa,
    QLfa,
    SarsaLfa,
}

impl Algorithm {
    pub const ALL: [Algorithm; 9] = [
        Algorithm::Ac,
        Algorithm::Ca,
        Algorithm::AcOnline,
        Algorithm::CaOnline,
        Algorithm::Q,
        Algorithm::Sarsa,
        Algorithm::AcFa,
        Algorithm::QLfa,
        Algorithm::SarsaLfa,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            Algorithm::Ac => "ac",
            Algorithm::Ca => "ca",
            Algorithm::AcOnline => "ac-online",
            Algorithm::CaOnline => "ca-online",
            Algorithm::Q => "q",
            Algorithm::Sarsa => "sarsa",
            Algorithm::AcFa => "ac-fa",
            Algorithm::QLfa => "q-lfa",
            Algorithm::SarsaLfa => "sarsa-lfa",
        }
    }

    /// Budget counts simulator steps rather than episodes.
    pub fn budget_in_steps(self) -> bool {
        matches!(self, Algorithm::Ac | Algorithm::Ca)
    }

    pub fn variant(self) -> Option<Variant> {
        match self {
            Algorithm::Ac | Algorithm::AcOnline => Some(Variant::ActorCritic),
            Algorithm::Ca | Algorithm::CaOnline => Some(Variant::CriticActor),
            _ => None,
        }
    }

    pub fn needs_state_features(self) -> bool {
        self == Algorithm::AcFa
    }

    pub fn needs_action_features(self) -> bool {
        matches!(
            self,
            Algorithm::AcFa | Algorithm::QLfa | Algorithm::SarsaLfa
        )
    }

    fn default_schedules(self) -> (StepSchedule, StepSchedule) {
        match self.variant() {
            Some(v) => v.default_schedules(),
            None => (
                StepSchedule::unit(ScheduleFamily::AcFast),
                StepSchedule::unit(ScheduleFamily::AcSlow),
            ),
        }
    }

    fn default_explore(self) -> ExplorationSchedule {
        match self {
            Algorithm::SarsaLfa => ExplorationSchedule::EpsSoftmax {
                eps: 0.1,
                temperature: 0.01,
            },
            _ => ExplorationSchedule::EpsGreedyGlie { c: 1.0 },
        }
    }

    fn default_budget(self) -> u64 {
        if self.budget_in_steps() {
            20_000_000
        } else {
            20_000
        }
    }

    fn default_interval(self) -> u64 {
        if self.budget_in_steps() {
            100_000
        } else {
            100
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.tag() == s)
            .ok_or_else(|| Error::Config(format!("unknown algorithm '{s}'")))
    }
}

/// Environment selection as written in a config.
#[derive(Clone, Debug, PartialEq)]
pub enum EnvConfig {
    Builtin(EnvSpec),
    File(PathBuf),
}

impl EnvConfig {
    pub fn kind(&self) -> EnvKind {
        match self {
            EnvConfig::Builtin(EnvSpec::Random { .. }) => EnvKind::Random,
            EnvConfig::Builtin(EnvSpec::FrozenLake(_)) => EnvKind::FrozenLake,
            EnvConfig::Builtin(EnvSpec::QlfaCounterexample) => EnvKind::QlfaCounterexample,
            EnvConfig::Builtin(EnvSpec::SarsaChatter) => EnvKind::SarsaChatter,
            EnvConfig::File(_) => EnvKind::File,
        }
    }

    pub fn build(&self) -> Result<FeaturedMdp> {
        match self {
            EnvConfig::Builtin(spec) => spec.build(),
            EnvConfig::File(path) => parse_mdp(&std::fs::read_to_string(path)?),
        }
    }

    pub fn default_objective(&self) -> Objective {
        match self {
            EnvConfig::Builtin(spec) => spec.default_objective(),
            EnvConfig::File(_) => Objective::Minimize,
        }
    }
}

/// Fully resolved experiment description.
#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub env: EnvConfig,
    pub algorithm: Algorithm,
    pub objective: Objective,
    /// Critic (or Q-value) step sizes.
    pub critic_step: StepSchedule,
    pub actor_step: StepSchedule,
    pub explore: ExplorationSchedule,
    pub step_indexing: StepIndexing,
    /// Box radius for tabular actor parameters.
    pub theta0: f64,
    /// Box radius for linear actor parameters.
    pub theta_p: f64,
    /// Uniform mixing weight of the linear actor.
    pub policy_epsilon: f64,
    pub freeze_actor: bool,
    pub init_v: Vec<f64>,
    pub init_theta: Vec<f64>,
    pub init_q: Vec<f64>,
    pub budget: u64,
    pub interval: u64,
    pub window: usize,
    pub episode_cap: usize,
    pub seeds: Vec<u64>,
    pub output: Option<PathBuf>,
}

/// Keys in echo order.
pub const KEYS: &[&str] = &[
    "env",
    "env.states",
    "env.actions",
    "env.seed",
    "env.leak",
    "env.layout",
    "env.slip",
    "env.path",
    "algorithm",
    "objective",
    "critic.schedule",
    "critic.scale",
    "critic.alpha",
    "critic.offset",
    "actor.schedule",
    "actor.scale",
    "actor.alpha",
    "actor.offset",
    "explore",
    "explore.c",
    "explore.eps",
    "explore.temperature",
    "step_indexing",
    "theta0",
    "theta_p",
    "policy.epsilon",
    "freeze_actor",
    "init.v",
    "init.theta",
    "init.q",
    "budget",
    "interval",
    "window",
    "episode_cap",
    "seeds",
    "output",
];

/// Header keys a run adds on top of the config; ignored when a CSV header is
/// read back as a config.
const RUN_KEYS: &[&str] = &["seed", "failure", "diverged_at", "aggregate_of"];

type Map = BTreeMap<String, String>;

fn get<T: FromStr>(map: &Map, key: &str, default: T) -> Result<T> {
    match map.get(key) {
        None => Ok(default),
        Some(raw) => raw
            .trim()
            .parse()
            .map_err(|_| Error::Config(format!("bad value '{raw}' for {key}"))),
    }
}

fn parse_list<T: FromStr>(raw: &str, key: &str) -> Result<Vec<T>> {
    raw.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse()
                .map_err(|_| Error::Config(format!("bad entry '{s}' in {key}")))
        })
        .collect()
}

fn join<T: fmt::Display>(xs: &[T]) -> String {
    xs.iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

fn layout_name(spec: &GridSpec) -> String {
    let layout = spec.layout();
    if layout == LAYOUT_4X4 {
        "4x4".into()
    } else if layout == LAYOUT_8X8 {
        "8x8".into()
    } else {
        layout.trim_end().replace('\n', "/")
    }
}

fn parse_layout(raw: &str, slip: f64) -> Result<GridSpec> {
    let text = match raw {
        "4x4" => LAYOUT_4X4.to_string(),
        "8x8" => LAYOUT_8X8.to_string(),
        rows => rows.replace('/', "\n"),
    };
    GridSpec::parse(&text, slip)
}

fn schedule(map: &Map, prefix: &str, default: StepSchedule) -> Result<StepSchedule> {
    let tag = map
        .get(&format!("{prefix}.schedule"))
        .map(|s| s.trim().to_string())
        .unwrap_or_else(|| default.family().tag().to_string());
    let default_alpha = match default.family() {
        ScheduleFamily::PowerLaw { alpha } => alpha,
        _ => 1.0,
    };
    let alpha = get(map, &format!("{prefix}.alpha"), default_alpha)?;
    let family = ScheduleFamily::from_tag(&tag, alpha)?;
    let scale = get(map, &format!("{prefix}.scale"), default.scale())?;
    let offset = get(map, &format!("{prefix}.offset"), default.offset())?;
    Ok(StepSchedule::new(family, scale)?.with_offset(offset))
}

fn echo_schedule(out: &mut Vec<(String, String)>, prefix: &str, s: &StepSchedule) {
    out.push((format!("{prefix}.schedule"), s.family().tag().into()));
    out.push((format!("{prefix}.scale"), s.scale().to_string()));
    if let ScheduleFamily::PowerLaw { alpha } = s.family() {
        out.push((format!("{prefix}.alpha"), alpha.to_string()));
    }
    if s.offset() > 0 {
        out.push((format!("{prefix}.offset"), s.offset().to_string()));
    }
}

impl ExperimentConfig {
    /// Resolves a key/value map, filling defaults that depend on the chosen
    /// environment and algorithm.
    pub fn from_pairs<K: AsRef<str>, V: AsRef<str>>(
        pairs: impl IntoIterator<Item = (K, V)>,
    ) -> Result<Self> {
        let mut map = Map::new();
        for (k, v) in pairs {
            let k = k.as_ref().trim();
            if RUN_KEYS.contains(&k) {
                continue;
            }
            if !KEYS.contains(&k) {
                return Err(Error::Config(format!("unknown key '{k}'")));
            }
            map.insert(k.to_string(), v.as_ref().trim().to_string());
        }

        let kind: EnvKind = get(&map, "env", EnvKind::Random)?;
        let allowed: &[&str] = match kind {
            EnvKind::Random => &["env.states", "env.actions", "env.seed", "env.leak"],
            EnvKind::FrozenLake => &["env.layout", "env.slip"],
            EnvKind::File => &["env.path"],
            _ => &[],
        };
        for k in map.keys().filter(|k| k.starts_with("env.")) {
            if !allowed.contains(&k.as_str()) {
                return Err(Error::Config(format!(
                    "{k} does not apply to env={}",
                    kind.tag()
                )));
            }
        }
        let env = match kind {
            EnvKind::Random => EnvConfig::Builtin(EnvSpec::Random {
                n_states: get(&map, "env.states", 20)?,
                n_actions: get(&map, "env.actions", 4)?,
                seed: get(&map, "env.seed", 0)?,
                leak: get(&map, "env.leak", DEFAULT_LEAK)?,
            }),
            EnvKind::FrozenLake => {
                let slip = get(&map, "env.slip", DEFAULT_SLIP)?;
                let layout = map.get("env.layout").map_or("4x4", String::as_str);
                EnvConfig::Builtin(EnvSpec::FrozenLake(parse_layout(layout, slip)?))
            }
            EnvKind::QlfaCounterexample => EnvConfig::Builtin(EnvSpec::QlfaCounterexample),
            EnvKind::SarsaChatter => EnvConfig::Builtin(EnvSpec::SarsaChatter),
            EnvKind::File => EnvConfig::File(
                map.get("env.path")
                    .ok_or_else(|| Error::Config("env=file needs env.path".into()))?
                    .into(),
            ),
        };

        let algorithm: Algorithm = get(&map, "algorithm", Algorithm::Ac)?;
        let objective = get(&map, "objective", env.default_objective())?;
        let (dc, da) = algorithm.default_schedules();
        let critic_step = schedule(&map, "critic", dc)?;
        let actor_step = schedule(&map, "actor", da)?;

        let de = algorithm.default_explore();
        let tag = map.get("explore").map_or(de.tag(), String::as_str);
        let (c0, eps0, t0) = match de {
            ExplorationSchedule::EpsSoftmax { eps, temperature } => (1.0, eps, temperature),
            _ => (1.0, 0.1, 1.0),
        };
        let explore = match tag {
            "eps-greedy-glie" => ExplorationSchedule::EpsGreedyGlie {
                c: get(&map, "explore.c", c0)?,
            },
            "softmax-glie" => ExplorationSchedule::SoftmaxGlie {
                c: get(&map, "explore.c", c0)?,
            },
            "constant-eps" => ExplorationSchedule::ConstantEps {
                eps: get(&map, "explore.eps", eps0)?,
            },
            "eps-softmax" => ExplorationSchedule::EpsSoftmax {
                eps: get(&map, "explore.eps", eps0)?,
                temperature: get(&map, "explore.temperature", t0)?,
            },
            other => {
                return Err(Error::Config(format!(
                    "unknown exploration schedule '{other}'"
                )))
            }
        };

        let list = |key: &str| -> Result<Vec<f64>> {
            map.get(key)
                .map_or(Ok(Vec::new()), |raw| parse_list(raw, key))
        };
        let cfg = Self {
            env,
            algorithm,
            objective,
            critic_step,
            actor_step,
            explore,
            step_indexing: get(&map, "step_indexing", StepIndexing::default())?,
            theta0: get(&map, "theta0", DEFAULT_THETA_BOX)?,
            theta_p: get(&map, "theta_p", DEFAULT_PARAM_BOX)?,
            policy_epsilon: get(&map, "policy.epsilon", 0.0)?,
            freeze_actor: get(&map, "freeze_actor", false)?,
            init_v: list("init.v")?,
            init_theta: list("init.theta")?,
            init_q: list("init.q")?,
            budget: get(&map, "budget", algorithm.default_budget())?,
            interval: get(&map, "interval", algorithm.default_interval())?,
            window: get(&map, "window", 10_000)?,
            episode_cap: get(&map, "episode_cap", DEFAULT_EPISODE_CAP)?,
            seeds: match map.get("seeds") {
                Some(raw) => parse_list(raw, "seeds")?,
                None => (1..=5).collect(),
            },
            output: map
                .get("output")
                .filter(|s| !s.is_empty())
                .map(PathBuf::from),
        };
        cfg.check_values()?;
        Ok(cfg)
    }

    /// Parses `key=value` lines; blank lines and `#` comments are skipped.
    pub fn parse(text: &str) -> Result<Self> {
        Self::from_pairs(parse_pairs(text)?)
    }

    /// Shape and range checks that need no environment.
    fn check_values(&self) -> Result<()> {
        let fail = |m: String| Err(Error::Config(m));
        if self.budget == 0 {
            return fail("budget must be positive".into());
        }
        if self.interval == 0 {
            return fail("interval must be positive".into());
        }
        if self.window == 0 {
            return fail("window must be positive".into());
        }
        if self.episode_cap == 0 {
            return fail("episode_cap must be positive".into());
        }
        if self.seeds.is_empty() {
            return fail("at least one seed is required".into());
        }
        let mut sorted = self.seeds.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != self.seeds.len() {
            return fail("seeds must be distinct".into());
        }
        if !(self.theta0 > 0.0) || !(self.theta_p > 0.0) {
            return fail("box radii must be positive".into());
        }
        if !(0.0..=1.0).contains(&self.policy_epsilon) {
            return fail(format!(
                "policy.epsilon must lie in [0,1], got {}",
                self.policy_epsilon
            ));
        }
        if let EnvConfig::Builtin(EnvSpec::FrozenLake(g)) = &self.env {
            g.validate()?;
        }
        self.explore.validate()
    }

    /// Builds the environment and checks that it fits the algorithm: feature
    /// maps present, initial vectors of the right length.
    pub fn validate(&self) -> Result<FeaturedMdp> {
        self.check_values()?;
        let env = self.env.build()?;
        let tag = self.algorithm.tag();
        if self.algorithm.needs_state_features() && env.state_features.is_none() {
            return Err(Error::Config(format!(
                "{tag} needs state features, env={} has none",
                self.env.kind().tag()
            )));
        }
        if self.algorithm.needs_action_features() && env.action_features.is_none() {
            return Err(Error::Config(format!(
                "{tag} needs state-action features, env={} has none",
                self.env.kind().tag()
            )));
        }
        let check = |v: &[f64], want: Option<usize>, key: &str| -> Result<()> {
            match want {
                _ if v.is_empty() => Ok(()),
                Some(d) if v.len() == d => Ok(()),
                Some(d) => Err(Error::Config(format!(
                    "{key} has {} entries, expected {d}",
                    v.len()
                ))),
                None => Err(Error::Config(format!("{key} does not apply to {tag}"))),
            }
        };
        let d1 = env.state_features.as_ref().map(|f| f.dim());
        let d2 = env.action_features.as_ref().map(|f| f.dim());
        let fa = self.algorithm == Algorithm::AcFa;
        let lq = matches!(self.algorithm, Algorithm::QLfa | Algorithm::SarsaLfa);
        check(&self.init_v, d1.filter(|_| fa), "init.v")?;
        check(&self.init_theta, d2.filter(|_| fa), "init.theta")?;
        check(&self.init_q, d2.filter(|_| lq), "init.q")?;
        Ok(env)
    }

    /// All keys in echo order with resolved values.
    pub fn to_pairs(&self) -> Vec<(String, String)> {
        let mut out: Vec<(String, String)> = Vec::new();
        let mut push = |k: &str, v: String| out.push((k.to_string(), v));
        push("env", self.env.kind().tag().into());
        match &self.env {
            EnvConfig::Builtin(EnvSpec::Random {
                n_states,
                n_actions,
                seed,
                leak,
            }) => {
                push("env.states", n_states.to_string());
                push("env.actions", n_actions.to_string());
                push("env.seed", seed.to_string());
                push("env.leak", leak.to_string());
            }
            EnvConfig::Builtin(EnvSpec::FrozenLake(g)) => {
                push("env.layout", layout_name(g));
                push("env.slip", g.slip.to_string());
            }
            EnvConfig::File(p) => push("env.path", p.display().to_string()),
            _ => {}
        }
        push("algorithm", self.algorithm.tag().into());
        push("objective", self.objective.to_string());
        echo_schedule(&mut out, "critic", &self.critic_step);
        echo_schedule(&mut out, "actor", &self.actor_step);
        let mut push = |k: &str, v: String| out.push((k.to_string(), v));
        push("explore", self.explore.tag().into());
        match self.explore {
            ExplorationSchedule::EpsGreedyGlie { c } | ExplorationSchedule::SoftmaxGlie { c } => {
                push("explore.c", c.to_string())
            }
            ExplorationSchedule::ConstantEps { eps } => push("explore.eps", eps.to_string()),
            ExplorationSchedule::EpsSoftmax { eps, temperature } => {
                push("explore.eps", eps.to_string());
                push("explore.temperature", temperature.to_string());
            }
        }
        push("step_indexing", self.step_indexing.to_string());
        push("theta0", self.theta0.to_string());
        push("theta_p", self.theta_p.to_string());
        push("policy.epsilon", self.policy_epsilon.to_string());
        push("freeze_actor", self.freeze_actor.to_string());
        push("init.v", join(&self.init_v));
        push("init.theta", join(&self.init_theta));
        push("init.q", join(&self.init_q));
        push("budget", self.budget.to_string());
        push("interval", self.interval.to_string());
        push("window", self.window.to_string());
        push("episode_cap", self.episode_cap.to_string());
        push("seeds", join(&self.seeds));
        push(
            "output",
            self.output
                .as_ref()
                .map(|p| p.display().to_string())
                .unwrap_or_default(),
        );
        out
    }

    pub fn to_text(&self) -> String {
        self.to_pairs()
            .into_iter()
            .map(|(k, v)| format!("{k}={v}\n"))
            .collect()
    }
}

/// Splits `key=value` lines. Lines may carry a leading `#` (CSV headers);
/// lines without `=` are ignored only when commented.
pub fn parse_pairs(text: &str) -> Result<Vec<(String, String)>> {
    let mut out = Vec::new();
    for (ln, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        let (commented, body) = match line.strip_prefix('#') {
            Some(rest) => (true, rest.trim()),
            None => (false, line),
        };
        match body.split_once('=') {
            Some((k, v)) => out.push((k.trim().to_string(), v.trim().to_string())),
            None if commented => {}
            None => {
                // A CSV column line ends the header block.
                if out.is_empty() {
                    return Err(Error::parse(ln + 1, "expected key=value"));
                }
                break;
            }
        }
    }
    Ok(out)
}

/// Turns `--key value` (or `--key=value`) arguments into pairs.
pub fn parse_overrides(args: &[String]) -> Result<Vec<(String, String)>> {
    let mut out = Vec::new();
    let mut it = args.iter();
    while let Some(a) = it.next() {
        let key = a
            .strip_prefix("--")
            .ok_or_else(|| Error::Config(format!("expected --key, found '{a}'")))?;
        match key.split_once('=') {
            Some((k, v)) => out.push((k.to_string(), v.to_string())),
            None => {
                let v = it
                    .next()
                    .ok_or_else(|| Error::Config(format!("--{key} needs a value")))?;
                out.push((key.to_string(), v.clone()));
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_round_trip() {
        for alg in Algorithm::ALL {
            for env in [
                "random",
                "frozen-lake",
                "qlfa-counterexample",
                "sarsa-chatter",
            ] {
                let cfg =
                    ExperimentConfig::from_pairs([("env", env), ("algorithm", alg.tag())]).unwrap();
                let back = ExperimentConfig::parse(&cfg.to_text()).unwrap();
                assert_eq!(back, cfg);
            }
        }
    }

    #[test]
    fn overrides_and_custom_layout_round_trip() {
        let args: Vec<String> = [
            "--env",
            "frozen-lake",
            "--env.layout",
            "SFG/FHF",
            "--env.slip=0.1",
            "--algorithm",
            "q",
            "--critic.schedule",
            "power-law",
            "--critic.alpha",
            "0.7",
            "--explore",
            "eps-softmax",
            "--seeds",
            "3,9",
        ]
        .iter()
        .map(|s| s.to_string())
        .collect();
        let cfg = ExperimentConfig::from_pairs(parse_overrides(&args).unwrap()).unwrap();
        assert_eq!(cfg.seeds, vec![3, 9]);
        assert_eq!(cfg.objective, Objective::Maximize);
        assert_eq!(ExperimentConfig::parse(&cfg.to_text()).unwrap(), cfg);
    }

    #[test]
    fn variants_differ_only_in_schedules() {
        let ac = ExperimentConfig::from_pairs([("algorithm", "ac")]).unwrap();
        let ca = ExperimentConfig::from_pairs([("algorithm", "ca")]).unwrap();
        let diff: Vec<String> = ac
            .to_pairs()
            .into_iter()
            .zip(ca.to_pairs())
            .filter(|(a, b)| a != b)
            .map(|(a, _)| a.0)
            .collect();
        assert_eq!(diff, ["algorithm", "critic.schedule", "actor.schedule"]);
    }

    #[test]
    fn rejections() {
        assert!(ExperimentConfig::from_pairs([("nope", "1")]).is_err());
        assert!(ExperimentConfig::from_pairs([("budget", "0")]).is_err());
        assert!(ExperimentConfig::from_pairs([("seeds", "")]).is_err());
        assert!(ExperimentConfig::from_pairs([("env.slip", "0.1")]).is_err());
        let q = ExperimentConfig::from_pairs([("algorithm", "q-lfa")]).unwrap();
        assert!(q.validate().is_err());
        let bad_init = ExperimentConfig::from_pairs([
            ("env", "qlfa-counterexample"),
            ("algorithm", "q-lfa"),
            ("init.q", "1,2,3"),
        ])
        .unwrap();
        assert!(bad_init.validate().is_err());
    }

    #[test]
    fn csv_header_reads_as_config() {
        let cfg = ExperimentConfig::from_pairs([("algorithm", "sarsa")]).unwrap();
        let mut text: String = cfg.to_text().lines().map(|l| format!("# {l}\n")).collect();
        text.push_str("# seed=4\nindex,steps\n0,0\n");
        assert_eq!(ExperimentConfig::parse(&text).unwrap(), cfg);
    }
}
