//! Independent oracles shared by the integration tests. Nothing here calls
//! the library's solvers; linear systems are solved by plain Gaussian
//! elimination and expectations by direct enumeration.

#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use ssp_rl::envs::{
    frozen_lake, qlfa_counterexample, random_mdp, sarsa_chatter_mdp, FeaturedMdp, GridSpec,
};
use ssp_rl::mdp::{StationaryPolicy, TabularMdp};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Every environment the library ships, with a label.
pub fn shipped_envs() -> Vec<(&'static str, FeaturedMdp)> {
    vec![
        (
            "random-20x4",
            FeaturedMdp::bare(random_mdp(20, 4, 0).unwrap()),
        ),
        (
            "grid-4x4",
            FeaturedMdp::bare(frozen_lake(&GridSpec::standard_4x4()).unwrap().mdp),
        ),
        (
            "grid-8x8",
            FeaturedMdp::bare(frozen_lake(&GridSpec::standard_8x8()).unwrap().mdp),
        ),
        ("qlfa-counterexample", qlfa_counterexample()),
        ("sarsa-chatter", sarsa_chatter_mdp()),
    ]
}

/// Solves `a x = b` with partial pivoting. Panics on a singular system.
pub fn gauss_solve(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Vec<f64> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n)
            .max_by(|&x, &y| a[x][col].abs().total_cmp(&a[y][col].abs()))
            .unwrap();
        assert!(a[piv][col].abs() > 1e-14, "singular system");
        a.swap(col, piv);
        b.swap(col, piv);
        for r in col + 1..n {
            let f = a[r][col] / a[col][col];
            if f == 0.0 {
                continue;
            }
            for c in col..n {
                a[r][c] -= f * a[col][c];
            }
            b[r] -= f * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for r in (0..n).rev() {
        let s: f64 = (r + 1..n).map(|c| a[r][c] * x[c]).sum();
        x[r] = (b[r] - s) / a[r][r];
    }
    x
}

/// `P_π(i,j)` and `R_π(i)` over non-terminal states, built entry by entry.
pub fn chain(mdp: &TabularMdp, pi: &StationaryPolicy) -> (Vec<Vec<f64>>, Vec<f64>) {
    let states = mdp.nonterminal_states();
    let n = states.len();
    let mut p = vec![vec![0.0; n]; n];
    let mut r = vec![0.0; n];
    for (a, &i) in states.iter().enumerate() {
        for u in 0..mdp.n_actions() {
            let w = pi.prob(i, u);
            if w == 0.0 {
                continue;
            }
            for j in 0..mdp.n_states() {
                let pij = mdp.p(i, u, j);
                r[a] += w * pij * mdp.g(i, u, j);
                if let Some(b) = mdp.compact_index(j) {
                    p[a][b] += w * pij;
                }
            }
        }
    }
    (p, r)
}

/// `V^π = (I − P_π)^{-1} R_π`, full length with 0 at the terminal.
pub fn policy_value(mdp: &TabularMdp, pi: &StationaryPolicy) -> Vec<f64> {
    let (p, r) = chain(mdp, pi);
    let n = r.len();
    let a: Vec<Vec<f64>> = (0..n)
        .map(|x| (0..n).map(|y| f64::from(x == y) - p[x][y]).collect())
        .collect();
    expand(mdp, &gauss_solve(a, r))
}

/// `hᵀ = h0ᵀ (I − P_π)^{-1}`, full length.
pub fn occupancy(mdp: &TabularMdp, pi: &StationaryPolicy) -> Vec<f64> {
    let (p, _) = chain(mdp, pi);
    let n = p.len();
    let at: Vec<Vec<f64>> = (0..n)
        .map(|x| (0..n).map(|y| f64::from(x == y) - p[y][x]).collect())
        .collect();
    let h0: Vec<f64> = mdp
        .nonterminal_states()
        .iter()
        .map(|&i| mdp.h0()[i])
        .collect();
    expand(mdp, &gauss_solve(at, h0))
}

pub fn expand(mdp: &TabularMdp, compact: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; mdp.n_states()];
    for (&i, &x) in mdp.nonterminal_states().iter().zip(compact) {
        out[i] = x;
    }
    out
}

/// A policy with strictly positive probability on every feasible action.
pub fn random_policy<R: Rng>(mdp: &TabularMdp, rng: &mut R) -> StationaryPolicy {
    let na = mdp.n_actions();
    let mut probs = vec![0.0; mdp.n_states() * na];
    for &i in mdp.nonterminal_states() {
        let acts = mdp.feasible_actions(i);
        let w: Vec<f64> = acts.iter().map(|_| rng.random_range(0.05..1.0)).collect();
        let total: f64 = w.iter().sum();
        for (&u, x) in acts.iter().zip(&w) {
            probs[i * na + u] = x / total;
        }
        // Renormalise the last entry so the row sums to one exactly enough.
        let s: f64 = acts.iter().map(|&u| probs[i * na + u]).sum();
        probs[i * na + acts[acts.len() - 1]] += 1.0 - s;
    }
    StationaryPolicy::new(mdp, probs).unwrap()
}

/// Optimal Bellman operator written out directly (minimising costs).
pub fn bellman_min(mdp: &TabularMdp, v: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; mdp.n_states()];
    for &i in mdp.nonterminal_states() {
        out[i] = mdp
            .feasible_actions(i)
            .iter()
            .map(|&u| {
                (0..mdp.n_states())
                    .map(|j| mdp.p(i, u, j) * (mdp.g(i, u, j) + v[j]))
                    .sum::<f64>()
            })
            .fold(f64::INFINITY, f64::min);
    }
    out
}

pub fn sup_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}
