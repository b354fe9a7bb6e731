//! Step-size schedules and per-component visit counters.
//!
//! Tabular updates are asynchronous: the `k`-th update of a state (or
//! state-action pair) uses step `a(k)`, where `k` counts that component's
//! earlier updates.

use crate::error::{Error, Result};
use crate::mdp::TabularMdp;
use std::fmt;
use std::str::FromStr;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ScheduleFamily {
    /// `log(n+2)/(n+2)`, the critic step of actor-critic.
    AcFast,
    /// `1/(n+1)`, the actor step of actor-critic.
    AcSlow,
    /// `1/((n+2) log(n+2))`, the critic step of critic-actor.
    CaFast,
    /// `log(n+2)/(n+2)`, the actor step of critic-actor.
    CaSlow,
    /// `1/(n+1)^alpha`, `alpha ∈ (0.5, 1]`.
    PowerLaw { alpha: f64 },
}

impl ScheduleFamily {
    pub fn tag(&self) -> &'static str {
        match self {
            ScheduleFamily::AcFast => "ac-fast",
            ScheduleFamily::AcSlow => "ac-slow",
            ScheduleFamily::CaFast => "ca-fast",
            ScheduleFamily::CaSlow => "ca-slow",
            ScheduleFamily::PowerLaw { .. } => "power-law",
        }
    }

    /// Parses a family tag; `alpha` is only read for `power-law`.
    pub fn from_tag(tag: &str, alpha: f64) -> Result<Self> {
        let family = match tag {
            "ac-fast" => ScheduleFamily::AcFast,
            "ac-slow" => ScheduleFamily::AcSlow,
            "ca-fast" => ScheduleFamily::CaFast,
            "ca-slow" => ScheduleFamily::CaSlow,
            "power-law" => ScheduleFamily::PowerLaw { alpha },
            other => {
                return Err(Error::Schedule(format!(
                    "unknown schedule family '{other}'"
                )))
            }
        };
        Ok(family)
    }
}

impl fmt::Display for ScheduleFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for ScheduleFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::from_tag(s, 1.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StepSchedule {
    family: ScheduleFamily,
    scale: f64,
    offset: u64,
}

impl StepSchedule {
    pub fn new(family: ScheduleFamily, scale: f64) -> Result<Self> {
        if !(scale > 0.0) || !scale.is_finite() {
            return Err(Error::Schedule(format!(
                "scale must be positive, got {scale}"
            )));
        }
        if let ScheduleFamily::PowerLaw { alpha } = family {
            if !(alpha > 0.5 && alpha <= 1.0) {
                return Err(Error::Schedule(format!(
                    "power-law exponent must lie in (0.5, 1], got {alpha}"
                )));
            }
        }
        Ok(Self {
            family,
            scale,
            offset: 0,
        })
    }

    /// Shifts the index: the `n`-th step becomes `scale · base(n + offset)`.
    /// Keeps large scales from producing steps above one early on.
    pub fn with_offset(mut self, offset: u64) -> Self {
        self.offset = offset;
        self
    }

    pub fn offset(&self) -> u64 {
        self.offset
    }

    pub fn unit(family: ScheduleFamily) -> Self {
        Self::new(family, 1.0).expect("unit scale is valid")
    }

    pub fn family(&self) -> ScheduleFamily {
        self.family
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn eval(&self, n: u64) -> f64 {
        let n = n.saturating_add(self.offset) as f64;
        let base = match self.family {
            ScheduleFamily::AcFast | ScheduleFamily::CaSlow => (n + 2.0).ln() / (n + 2.0),
            ScheduleFamily::AcSlow => 1.0 / (n + 1.0),
            ScheduleFamily::CaFast => 1.0 / ((n + 2.0) * (n + 2.0).ln()),
            ScheduleFamily::PowerLaw { alpha } => (n + 1.0).powf(-alpha),
        };
        self.scale * base
    }
}

/// Which component an update touches.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Component {
    State(usize),
    Pair(usize, usize),
}

/// `ν₁(i)` per state and `ν₂(i,u)` per state-action pair.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VisitCounters {
    n_actions: usize,
    terminal: usize,
    state: Vec<u64>,
    pair: Vec<u64>,
}

impl VisitCounters {
    pub fn new(mdp: &TabularMdp) -> Self {
        Self {
            n_actions: mdp.n_actions(),
            terminal: mdp.terminal(),
            state: vec![0; mdp.n_states()],
            pair: vec![0; mdp.n_states() * mdp.n_actions()],
        }
    }

    fn slot(&mut self, which: Component) -> Result<&mut u64> {
        let (i, u) = match which {
            Component::State(i) => (i, None),
            Component::Pair(i, u) => (i, Some(u)),
        };
        if i == self.terminal {
            return Err(Error::TerminalState(i));
        }
        if i >= self.state.len() {
            return Err(Error::Index(format!("state {i}")));
        }
        match u {
            None => Ok(&mut self.state[i]),
            Some(u) if u < self.n_actions => Ok(&mut self.pair[i * self.n_actions + u]),
            Some(u) => Err(Error::Index(format!("action {u}"))),
        }
    }

    /// Returns the step for the component's current count, then counts the
    /// update.
    pub fn record_and_step(&mut self, which: Component, schedule: &StepSchedule) -> Result<f64> {
        let slot = self.slot(which)?;
        let step = schedule.eval(*slot);
        *slot += 1;
        Ok(step)
    }

    /// Counts a visit without producing a step size.
    pub fn bump(&mut self, which: Component) -> Result<u64> {
        let slot = self.slot(which)?;
        let before = *slot;
        *slot += 1;
        Ok(before)
    }

    pub fn state_count(&self, i: usize) -> u64 {
        self.state[i]
    }

    pub fn pair_count(&self, i: usize, u: usize) -> u64 {
        self.pair[i * self.n_actions + u]
    }
}
