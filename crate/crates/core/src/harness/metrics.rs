use crate::error::{Error, Result};
use crate::features::StateFeatures;
use crate::linear_fa::FaCritic;
use crate::mdp::{TabularMdp, ValueTable};

/// Mean of the most recent `min(window, len)` returns.
pub fn running_return(history: &[f64], window: usize) -> Result<f64> {
    if history.is_empty() {
        return Err(Error::Shape("running return of an empty history".into()));
    }
    if window == 0 {
        return Err(Error::Config("window must be positive".into()));
    }
    let tail = &history[history.len().saturating_sub(window)..];
    Ok(tail.iter().sum::<f64>() / tail.len() as f64)
}

/// Euclidean distance between two value tables over non-terminal states.
pub fn value_error(v: &ValueTable, vstar: &ValueTable) -> Result<f64> {
    if v.len() != vstar.len() || v.terminal() != vstar.terminal() {
        return Err(Error::Shape(format!(
            "value tables differ in shape ({} vs {} states)",
            v.len(),
            vstar.len()
        )));
    }
    Ok(crate::tabular::l2_distance(v, vstar))
}

/// `V(i) = vᵀφ(i)`.
pub fn fa_value_snapshot(mdp: &TabularMdp, critic: &FaCritic, phi: &StateFeatures) -> ValueTable {
    critic.snapshot(mdp, phi)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn window_clipping() {
        assert_eq!(running_return(&[1.0, 1.0, 1.0], 10_000).unwrap(), 1.0);
        assert_eq!(running_return(&[0.0, 2.0], 1).unwrap(), 2.0);
        let alt: Vec<f64> = (0..100)
            .map(|k| if k % 2 == 0 { -2.0 } else { -1.0 })
            .collect();
        assert_eq!(running_return(&alt, 10).unwrap(), -1.5);
        assert!(running_return(&[], 5).is_err());
    }
}
