//! Environment generators: seeded random SSPs, FrozenLake-style grids and the
//! two small diagnostic MDPs with their feature maps.

use crate::error::{Error, Result};
use crate::features::{ActionFeatures, StateFeatures};
use crate::mdp::{MdpBuilder, Objective, TabularMdp};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::Exp1;
use std::fmt;
use std::str::FromStr;

/// An MDP bundled with whatever feature maps come with it.
#[derive(Clone, Debug, PartialEq)]
pub struct FeaturedMdp {
    pub mdp: TabularMdp,
    pub state_features: Option<StateFeatures>,
    pub action_features: Option<ActionFeatures>,
}

impl FeaturedMdp {
    pub fn bare(mdp: TabularMdp) -> Self {
        Self {
            mdp,
            state_features: None,
            action_features: None,
        }
    }
}

pub const DEFAULT_LEAK: f64 = 0.05;

/// Random SSP with `n_states` states, the last of which is terminal.
pub fn random_mdp(n_states: usize, n_actions: usize, seed: u64) -> Result<TabularMdp> {
    random_mdp_with_leak(n_states, n_actions, seed, DEFAULT_LEAK)
}

/// Each non-terminal row is `(1-leak)·Dirichlet(1,…,1) + leak·δ_terminal`, so
/// every policy terminates with probability at least `leak` per step. Costs
/// are i.i.d. uniform on `[0, 1]`.
pub fn random_mdp_with_leak(
    n_states: usize,
    n_actions: usize,
    seed: u64,
    leak: f64,
) -> Result<TabularMdp> {
    if n_states < 2 {
        return Err(Error::Config(format!(
            "random MDP needs at least 2 states, got {n_states}"
        )));
    }
    if n_actions == 0 {
        return Err(Error::Config("random MDP needs at least one action".into()));
    }
    if !(leak > 0.0 && leak <= 1.0) {
        return Err(Error::Config(format!(
            "termination leak must lie in (0,1], got {leak}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let terminal = n_states - 1;
    let mut b = MdpBuilder::new(n_states, n_actions, terminal);
    for i in 0..terminal {
        for u in 0..n_actions {
            let draws: Vec<f64> = (0..n_states).map(|_| rng.sample::<f64, _>(Exp1)).collect();
            let total: f64 = draws.iter().sum();
            let costs: Vec<f64> = (0..n_states).map(|_| rng.random::<f64>()).collect();
            let mut row: Vec<f64> = draws.iter().map(|x| (1.0 - leak) * x / total).collect();
            row[terminal] += leak;
            // Absorb rounding so the row sums to one to machine precision.
            let drift: f64 = 1.0 - row.iter().sum::<f64>();
            row[terminal] += drift;
            for j in 0..n_states {
                b = b.transition(i, u, j, row[j], costs[j]);
            }
        }
    }
    let mut h0 = vec![1.0 / terminal as f64; n_states];
    h0[terminal] = 0.0;
    b.h0(h0).build()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Cell {
    Start,
    Frozen,
    Hole,
    Goal,
}

impl Cell {
    fn from_char(c: char) -> Option<Self> {
        match c {
            'S' => Some(Cell::Start),
            'F' => Some(Cell::Frozen),
            'H' => Some(Cell::Hole),
            'G' => Some(Cell::Goal),
            _ => None,
        }
    }

    fn to_char(self) -> char {
        match self {
            Cell::Start => 'S',
            Cell::Frozen => 'F',
            Cell::Hole => 'H',
            Cell::Goal => 'G',
        }
    }
}

pub const LAYOUT_4X4: &str = "SFFF\nFHFH\nFFFH\nHFFG\n";
pub const LAYOUT_8X8: &str =
    "SFFFFFFF\nFFFFFFFF\nFFFHFFFF\nFFFFFHFF\nFFFHFFFF\nFHHFFFHF\nFHFFHFHF\nFFFHFFFG\n";
pub const DEFAULT_SLIP: f64 = 2.0 / 3.0;

#[derive(Clone, Debug, PartialEq)]
pub struct GridSpec {
    pub width: usize,
    pub height: usize,
    /// Row-major, top row first.
    pub cells: Vec<Cell>,
    /// Total probability of sliding to one of the two perpendicular moves.
    pub slip: f64,
}

impl GridSpec {
    /// Parses one row per line of `S`/`F`/`H`/`G` characters.
    pub fn parse(layout: &str, slip: f64) -> Result<Self> {
        let mut cells = Vec::new();
        let mut width = None;
        let mut height = 0;
        for (ln, line) in layout.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let row: Vec<Cell> = line
                .chars()
                .map(|c| {
                    Cell::from_char(c)
                        .ok_or_else(|| Error::parse(ln + 1, format!("unknown grid cell '{c}'")))
                })
                .collect::<Result<_>>()?;
            match width {
                None => width = Some(row.len()),
                Some(w) if w != row.len() => {
                    return Err(Error::parse(ln + 1, "ragged grid row"));
                }
                _ => {}
            }
            cells.extend(row);
            height += 1;
        }
        let spec = Self {
            width: width.unwrap_or(0),
            height,
            cells,
            slip,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn standard_4x4() -> Self {
        Self::parse(LAYOUT_4X4, DEFAULT_SLIP).expect("built-in layout")
    }

    pub fn standard_8x8() -> Self {
        Self::parse(LAYOUT_8X8, DEFAULT_SLIP).expect("built-in layout")
    }

    pub fn with_slip(mut self, slip: f64) -> Self {
        self.slip = slip;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.width == 0 || self.height == 0 || self.cells.len() != self.width * self.height {
            return Err(Error::Config("grid must be a non-empty rectangle".into()));
        }
        let starts = self.cells.iter().filter(|&&c| c == Cell::Start).count();
        if starts != 1 {
            return Err(Error::Config(format!(
                "grid needs exactly one start, found {starts}"
            )));
        }
        if !self.cells.contains(&Cell::Goal) {
            return Err(Error::Config("grid needs at least one goal".into()));
        }
        if !(0.0..=1.0).contains(&self.slip) {
            return Err(Error::Config(format!(
                "slip must lie in [0,1], got {}",
                self.slip
            )));
        }
        Ok(())
    }

    pub fn layout(&self) -> String {
        let mut s = String::new();
        for r in 0..self.height {
            for c in 0..self.width {
                s.push(self.cells[r * self.width + c].to_char());
            }
            s.push('\n');
        }
        s
    }
}

impl fmt::Display for GridSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.layout())
    }
}

pub const LEFT: usize = 0;
pub const DOWN: usize = 1;
pub const RIGHT: usize = 2;
pub const UP: usize = 3;

/// State layout of a grid MDP.
#[derive(Clone, Debug, PartialEq)]
pub struct GridMdp {
    pub mdp: TabularMdp,
    /// State index of each cell; `None` for holes (entering one ends the
    /// episode).
    pub cell_state: Vec<Option<usize>>,
    /// The single state standing for every goal cell.
    pub goal_state: usize,
}

/// FrozenLake-style grid.
///
/// Start and frozen cells are states. All goal cells share one state that is
/// entered with reward 1 and leaves for the terminal with reward 0 through a
/// single feasible action; this keeps the reward of each `(i,u,j)` unique
/// when a move can end in both a hole and the goal. Entering a hole goes
/// straight to the terminal with reward 0. Moves off the grid stay in place.
pub fn frozen_lake(spec: &GridSpec) -> Result<GridMdp> {
    spec.validate()?;
    let (w, h) = (spec.width, spec.height);
    let mut cell_state = vec![None; w * h];
    let mut next = 0;
    for (k, &c) in spec.cells.iter().enumerate() {
        if matches!(c, Cell::Start | Cell::Frozen) {
            cell_state[k] = Some(next);
            next += 1;
        }
    }
    let goal_state = next;
    let terminal = next + 1;
    for (k, &c) in spec.cells.iter().enumerate() {
        if c == Cell::Goal {
            cell_state[k] = Some(goal_state);
        }
    }
    let n_states = terminal + 1;
    let mut p = vec![0.0; n_states * 4 * n_states];
    let mut g = vec![0.0; n_states * 4 * n_states];
    let idx = |i: usize, u: usize, j: usize| (i * 4 + u) * n_states + j;

    let move_from = |r: usize, c: usize, dir: usize| -> (usize, usize) {
        match dir {
            LEFT => (r, c.saturating_sub(1)),
            DOWN => ((r + 1).min(h - 1), c),
            RIGHT => (r, (c + 1).min(w - 1)),
            _ => (r.saturating_sub(1), c),
        }
    };

    for r in 0..h {
        for c in 0..w {
            let k = r * w + c;
            if !matches!(spec.cells[k], Cell::Start | Cell::Frozen) {
                continue;
            }
            let i = cell_state[k].expect("walkable cell has a state");
            for u in 0..4 {
                let outcomes = [
                    (u, 1.0 - spec.slip),
                    ((u + 3) % 4, spec.slip / 2.0),
                    ((u + 1) % 4, spec.slip / 2.0),
                ];
                for (dir, prob) in outcomes {
                    if prob == 0.0 {
                        continue;
                    }
                    let (nr, nc) = move_from(r, c, dir);
                    let nk = nr * w + nc;
                    let (j, reward) = match spec.cells[nk] {
                        Cell::Hole => (terminal, 0.0),
                        Cell::Goal => (goal_state, 1.0),
                        _ => (cell_state[nk].expect("walkable"), 0.0),
                    };
                    p[idx(i, u, j)] += prob;
                    g[idx(i, u, j)] = reward;
                }
            }
        }
    }
    p[idx(goal_state, 0, terminal)] = 1.0;
    for u in 0..4 {
        p[idx(terminal, u, terminal)] = 1.0;
    }
    let start = spec
        .cells
        .iter()
        .position(|&c| c == Cell::Start)
        .and_then(|k| cell_state[k])
        .expect("validated grid has a start");
    let mut h0 = vec![0.0; n_states];
    h0[start] = 1.0;
    let mdp = TabularMdp::new(n_states, 4, terminal, p, g, h0)?;
    Ok(GridMdp {
        mdp,
        cell_state,
        goal_state,
    })
}

/// Two-state MDP on which off-policy Q-learning with linear features is
/// examined. States `0 = i₁`, `1 = i₂`, terminal `2`; actions `0 = u₁`,
/// `1 = u₂`. From either state `u₁` moves to `i₂` and `u₂` to `i₁` with
/// probability 0.9, otherwise the episode ends. All costs are zero.
pub fn qlfa_counterexample() -> FeaturedMdp {
    let mut b = MdpBuilder::new(3, 2, 2);
    for i in 0..2 {
        b = b
            .transition(i, 0, 1, 0.9, 0.0)
            .transition(i, 0, 2, 0.1, 0.0)
            .transition(i, 1, 0, 0.9, 0.0)
            .transition(i, 1, 2, 0.1, 0.0);
    }
    let mdp = b.h0(vec![0.5, 0.5, 0.0]).build().expect("well-formed");
    let action_features = ActionFeatures::from_fn(&mdp, 2, |_, u| {
        if u == 0 {
            vec![1.0, 0.0]
        } else {
            vec![0.0, 1.0]
        }
    })
    .expect("well-formed");
    let state_features =
        StateFeatures::new(&mdp, &[vec![1.0], vec![1.0]]).expect("single constant column");
    FeaturedMdp {
        mdp,
        state_features: Some(state_features),
        action_features: Some(action_features),
    }
}

/// Deterministic three-state chain on which SARSA with linear features
/// chatters. States `0 = i₁`, `1 = i₂`, `2 = i₃`, terminal `3`. At `i₁`
/// action 0 leads to `i₂` and action 1 to `i₃`, both at cost 0; `i₂` and
/// `i₃` have the single action 0, ending the episode at cost −2 and −1.
pub fn sarsa_chatter_mdp() -> FeaturedMdp {
    let mdp = MdpBuilder::new(4, 2, 3)
        .transition(0, 0, 1, 1.0, 0.0)
        .transition(0, 1, 2, 1.0, 0.0)
        .transition(1, 0, 3, 1.0, -2.0)
        .transition(2, 0, 3, 1.0, -1.0)
        .start(0)
        .build()
        .expect("well-formed");
    let action_features = ActionFeatures::from_fn(&mdp, 3, |i, u| match (i, u) {
        (0, 0) => vec![1.0, 0.0, 0.0],
        (0, 1) => vec![0.0, 1.0, 0.0],
        _ => vec![0.0, 0.0, 1.0],
    })
    .expect("well-formed");
    let state_features =
        StateFeatures::new(&mdp, &[vec![1.0, 0.0], vec![0.0, 1.0], vec![0.0, 1.0]])
            .expect("two independent columns");
    FeaturedMdp {
        mdp,
        state_features: Some(state_features),
        action_features: Some(action_features),
    }
}

/// Named environments understood by the harness.
#[derive(Clone, Debug, PartialEq)]
pub enum EnvSpec {
    Random {
        n_states: usize,
        n_actions: usize,
        seed: u64,
        leak: f64,
    },
    FrozenLake(GridSpec),
    QlfaCounterexample,
    SarsaChatter,
}

impl EnvSpec {
    pub fn build(&self) -> Result<FeaturedMdp> {
        Ok(match self {
            EnvSpec::Random {
                n_states,
                n_actions,
                seed,
                leak,
            } => FeaturedMdp::bare(random_mdp_with_leak(*n_states, *n_actions, *seed, *leak)?),
            EnvSpec::FrozenLake(spec) => FeaturedMdp::bare(frozen_lake(spec)?.mdp),
            EnvSpec::QlfaCounterexample => qlfa_counterexample(),
            EnvSpec::SarsaChatter => sarsa_chatter_mdp(),
        })
    }

    /// Grids pay rewards; everything else charges costs.
    pub fn default_objective(&self) -> Objective {
        match self {
            EnvSpec::FrozenLake(_) => Objective::Maximize,
            _ => Objective::Minimize,
        }
    }
}

/// Environment identifiers used in configs.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EnvKind {
    Random,
    FrozenLake,
    QlfaCounterexample,
    SarsaChatter,
    File,
}

impl EnvKind {
    pub fn tag(self) -> &'static str {
        match self {
            EnvKind::Random => "random",
            EnvKind::FrozenLake => "frozen-lake",
            EnvKind::QlfaCounterexample => "qlfa-counterexample",
            EnvKind::SarsaChatter => "sarsa-chatter",
            EnvKind::File => "file",
        }
    }
}

impl FromStr for EnvKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "random" => EnvKind::Random,
            "frozen-lake" => EnvKind::FrozenLake,
            "qlfa-counterexample" => EnvKind::QlfaCounterexample,
            "sarsa-chatter" => EnvKind::SarsaChatter,
            "file" => EnvKind::File,
            other => return Err(Error::Config(format!("unknown environment '{other}'"))),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn random_mdp_leaks_to_terminal() {
        let m = random_mdp(20, 4, 11).unwrap();
        assert_eq!(m.terminal(), 19);
        for &i in m.nonterminal_states() {
            for u in 0..4 {
                assert!(m.p(i, u, 19) >= DEFAULT_LEAK);
                for j in 0..20 {
                    let c = m.g(i, u, j);
                    assert!((0.0..=1.0).contains(&c));
                }
            }
        }
        assert_eq!(m, random_mdp(20, 4, 11).unwrap());
        assert_ne!(m, random_mdp(20, 4, 12).unwrap());
    }

    #[test]
    fn grid_parsing() {
        let g = GridSpec::standard_4x4();
        assert_eq!((g.width, g.height), (4, 4));
        assert_eq!(g.layout(), LAYOUT_4X4);
        assert!(GridSpec::parse("SFX\n", 0.0).is_err());
        assert!(GridSpec::parse("SF\nF\n", 0.0).is_err());
        assert!(GridSpec::parse("FF\nFG\n", 0.0).is_err());
        assert!(GridSpec::parse("SS\nFG\n", 0.0).is_err());
        assert!(GridSpec::parse("SF\nFF\n", 0.0).is_err());
    }

    #[test]
    fn grid_states_and_rows() {
        let gm = frozen_lake(&GridSpec::standard_4x4()).unwrap();
        // 11 walkable cells, the shared goal state, the terminal.
        assert_eq!(gm.mdp.n_states(), 13);
        assert_eq!(gm.goal_state, 11);
        assert_eq!(gm.mdp.terminal(), 12);
        assert_eq!(gm.mdp.feasible_actions(11), &[0]);
        // Cell (1,0) borders the hole at (1,1).
        let i = gm.cell_state[4].unwrap();
        for u in 0..4 {
            let s: f64 = gm.mdp.row(i, u).iter().sum();
            assert!((s - 1.0).abs() < 1e-12);
        }
        // Right enters the hole with 1/3; the rest slips up or down.
        assert!((gm.mdp.p(i, RIGHT, gm.mdp.terminal()) - 1.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn goal_reward_is_on_entry() {
        let gm = frozen_lake(&GridSpec::standard_4x4().with_slip(0.0)).unwrap();
        let left_of_goal = gm.cell_state[14].unwrap();
        assert_eq!(gm.mdp.p(left_of_goal, RIGHT, gm.goal_state), 1.0);
        assert_eq!(gm.mdp.g(left_of_goal, RIGHT, gm.goal_state), 1.0);
        assert_eq!(gm.mdp.g(gm.goal_state, 0, gm.mdp.terminal()), 0.0);
    }

    #[test]
    fn diagnostic_shapes() {
        let f4 = qlfa_counterexample();
        assert_eq!(f4.mdp.n_states(), 3);
        assert_eq!(f4.action_features.as_ref().unwrap().rank(), 2);
        let f5 = sarsa_chatter_mdp();
        assert_eq!(f5.mdp.feasible_actions(0), &[0, 1]);
        assert_eq!(f5.mdp.feasible_actions(1), &[0]);
        assert_eq!(f5.mdp.feasible_actions(2), &[0]);
        assert_eq!(f5.state_features.as_ref().unwrap().dim(), 2);
    }
}
