#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Transition {
    pub state: usize,
    pub action: usize,
    pub cost: f64,
    pub next: usize,
}

/// One trajectory from a start state to the terminal.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct EpisodeTrace {
    pub steps: Vec<Transition>,
}

impl EpisodeTrace {
    /// Total cost (or reward) collected.
    pub fn total(&self) -> f64 {
        self.steps.iter().map(|t| t.cost).sum()
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }
}
