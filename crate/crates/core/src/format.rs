//! Plain-text MDP format.
//!
//! ```text
//! # comments start with '#'
//! mdp <states> <actions> <terminal>
//! t <i> <u> <j> <p> <g>          one line per nonzero transition
//! h0 <x_0> ... <x_{S-1}>
//! state_features <d>             optional
//! s <i> <f_1> ... <f_d>          one line per non-terminal state
//! action_features <d>            optional
//! a <i> <u> <f_1> ... <f_d>      one line per feasible non-terminal pair
//! ```
//!
//! Numbers are written with Rust's shortest round-trip formatting, so
//! `parse(write(m)) == m` exactly.

use crate::envs::FeaturedMdp;
use crate::error::{Error, Result};
use crate::features::{ActionFeatures, StateFeatures};
use crate::mdp::TabularMdp;
use std::collections::HashMap;
use std::fmt::Write as _;

pub fn write_mdp(f: &FeaturedMdp) -> String {
    let m = &f.mdp;
    let mut out = String::new();
    let _ = writeln!(
        out,
        "mdp {} {} {}",
        m.n_states(),
        m.n_actions(),
        m.terminal()
    );
    for i in 0..m.n_states() {
        for u in 0..m.n_actions() {
            for (j, (&p, &g)) in m.row(i, u).iter().zip(m.cost_row(i, u)).enumerate() {
                if p != 0.0 {
                    let _ = writeln!(out, "t {i} {u} {j} {p} {g}");
                }
            }
        }
    }
    out.push_str("h0");
    for x in m.h0() {
        let _ = write!(out, " {x}");
    }
    out.push('\n');
    if let Some(phi) = &f.state_features {
        let _ = writeln!(out, "state_features {}", phi.dim());
        for &i in m.nonterminal_states() {
            let _ = write!(out, "s {i}");
            for x in phi.row(i) {
                let _ = write!(out, " {x}");
            }
            out.push('\n');
        }
    }
    if let Some(phi1) = &f.action_features {
        let _ = writeln!(out, "action_features {}", phi1.dim());
        for (i, u) in m.feasible_pairs() {
            let _ = write!(out, "a {i} {u}");
            for x in phi1.row(i, u) {
                let _ = write!(out, " {x}");
            }
            out.push('\n');
        }
    }
    out
}

fn num<T: std::str::FromStr>(tok: Option<&str>, line: usize, what: &str) -> Result<T> {
    let tok = tok.ok_or_else(|| Error::parse(line, format!("missing {what}")))?;
    tok.parse()
        .map_err(|_| Error::parse(line, format!("bad {what} '{tok}'")))
}

fn floats<'a>(toks: impl Iterator<Item = &'a str>, line: usize) -> Result<Vec<f64>> {
    toks.map(|t| num::<f64>(Some(t), line, "number")).collect()
}

/// Parses and validates an MDP with its optional feature maps.
pub fn parse_mdp(text: &str) -> Result<FeaturedMdp> {
    let mut dims: Option<(usize, usize, usize)> = None;
    let mut p = Vec::new();
    let mut g = Vec::new();
    let mut h0: Option<Vec<f64>> = None;
    let mut seen = HashMap::new();
    let mut state_dim: Option<usize> = None;
    let mut state_rows: Vec<(usize, usize, Vec<f64>)> = Vec::new();
    let mut action_dim: Option<usize> = None;
    let mut action_rows: HashMap<(usize, usize), (usize, Vec<f64>)> = HashMap::new();

    for (k, raw) in text.lines().enumerate() {
        let ln = k + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let mut toks = line.split_whitespace();
        let key = toks.next().unwrap_or_default();
        if key != "mdp" && dims.is_none() {
            return Err(Error::parse(
                ln,
                "expected 'mdp <states> <actions> <terminal>' first",
            ));
        }
        match key {
            "mdp" => {
                if dims.is_some() {
                    return Err(Error::parse(ln, "duplicate 'mdp' header"));
                }
                let ns: usize = num(toks.next(), ln, "state count")?;
                let na: usize = num(toks.next(), ln, "action count")?;
                let t: usize = num(toks.next(), ln, "terminal")?;
                if ns < 2 || na == 0 || t >= ns {
                    return Err(Error::parse(ln, "invalid dimensions"));
                }
                p = vec![0.0; ns * na * ns];
                g = vec![0.0; ns * na * ns];
                dims = Some((ns, na, t));
            }
            "t" => {
                let (ns, na, _) = dims.expect("header checked");
                let i: usize = num(toks.next(), ln, "state")?;
                let u: usize = num(toks.next(), ln, "action")?;
                let j: usize = num(toks.next(), ln, "successor")?;
                let pr: f64 = num(toks.next(), ln, "probability")?;
                let c: f64 = num(toks.next(), ln, "cost")?;
                if i >= ns || j >= ns || u >= na {
                    return Err(Error::parse(ln, "index out of range"));
                }
                if let Some(prev) = seen.insert((i, u, j), ln) {
                    return Err(Error::parse(
                        ln,
                        format!("transition ({i},{u},{j}) already given on line {prev}"),
                    ));
                }
                let idx = (i * na + u) * ns + j;
                p[idx] = pr;
                g[idx] = c;
            }
            "h0" => {
                if h0.is_some() {
                    return Err(Error::parse(ln, "duplicate h0"));
                }
                h0 = Some(floats(toks.by_ref(), ln)?);
            }
            "state_features" => {
                state_dim = Some(num(toks.next(), ln, "dimension")?);
            }
            "s" => {
                let d = state_dim.ok_or_else(|| Error::parse(ln, "'s' before 'state_features'"))?;
                let i: usize = num(toks.next(), ln, "state")?;
                let row = floats(toks.by_ref(), ln)?;
                if row.len() != d {
                    return Err(Error::parse(ln, format!("expected {d} features")));
                }
                state_rows.push((ln, i, row));
            }
            "action_features" => {
                action_dim = Some(num(toks.next(), ln, "dimension")?);
            }
            "a" => {
                let d =
                    action_dim.ok_or_else(|| Error::parse(ln, "'a' before 'action_features'"))?;
                let i: usize = num(toks.next(), ln, "state")?;
                let u: usize = num(toks.next(), ln, "action")?;
                let row = floats(toks.by_ref(), ln)?;
                if row.len() != d {
                    return Err(Error::parse(ln, format!("expected {d} features")));
                }
                if action_rows.insert((i, u), (ln, row)).is_some() {
                    return Err(Error::parse(
                        ln,
                        format!("duplicate features for ({i},{u})"),
                    ));
                }
            }
            other => return Err(Error::parse(ln, format!("unknown record '{other}'"))),
        }
    }

    let (ns, na, t) = dims.ok_or_else(|| Error::parse(0, "empty MDP file"))?;
    let h0 = h0.ok_or_else(|| Error::parse(0, "missing h0 line"))?;
    if h0.len() != ns {
        return Err(Error::parse(
            0,
            format!("h0 needs {ns} entries, got {}", h0.len()),
        ));
    }
    let mdp = TabularMdp::new(ns, na, t, p, g, h0)?;

    let state_features = match state_dim {
        None => None,
        Some(_) => {
            let mut by_state: HashMap<usize, Vec<f64>> = HashMap::new();
            for (ln, i, row) in state_rows {
                if i >= ns || mdp.is_terminal(i) {
                    return Err(Error::parse(ln, format!("state {i} takes no features")));
                }
                if by_state.insert(i, row).is_some() {
                    return Err(Error::parse(
                        ln,
                        format!("duplicate features for state {i}"),
                    ));
                }
            }
            let rows = mdp
                .nonterminal_states()
                .iter()
                .map(|i| {
                    by_state
                        .remove(i)
                        .ok_or_else(|| Error::Features(format!("no features for state {i}")))
                })
                .collect::<Result<Vec<_>>>()?;
            Some(StateFeatures::new(&mdp, &rows)?)
        }
    };

    let action_features = match action_dim {
        None => None,
        Some(d) => {
            for (&(i, u), (ln, _)) in &action_rows {
                if i >= ns || u >= na || mdp.is_terminal(i) || !mdp.is_feasible(i, u) {
                    return Err(Error::parse(
                        *ln,
                        format!("({i},{u}) is not a feasible pair"),
                    ));
                }
            }
            let mut missing = None;
            let f = ActionFeatures::from_fn(&mdp, d, |i, u| match action_rows.get(&(i, u)) {
                Some((_, row)) => row.clone(),
                None => {
                    missing.get_or_insert((i, u));
                    vec![0.0; d]
                }
            })?;
            if let Some((i, u)) = missing {
                return Err(Error::Features(format!("no features for ({i},{u})")));
            }
            Some(f)
        }
    };

    Ok(FeaturedMdp {
        mdp,
        state_features,
        action_features,
    })
}
