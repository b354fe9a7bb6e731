//! Learners checked against exact values computed independently.

mod common;

use rand::Rng;
use ssp_rl::envs::{
    frozen_lake, qlfa_counterexample, random_mdp_with_leak, sarsa_chatter_mdp, GridSpec,
};
use ssp_rl::features::{ActionFeatures, StateFeatures};
use ssp_rl::linear_fa::{
    ac_fa_episode, expected_dynamics, fa_fixed_point, sarsa_lfa_episode, AcFaState, FaCritic,
    LinearQ,
};
use ssp_rl::mdp::{value_iteration, Objective, StationaryPolicy, TabularMdp, ValueTable};
use ssp_rl::policies::{ExplorationSchedule, LinearSoftmaxActor, SoftmaxActor};
use ssp_rl::schedules::{ScheduleFamily, StepSchedule};
use ssp_rl::tabular::{
    l2_distance, offline_step, q_learning_episode, run_offline, run_online_episode, sarsa_episode,
    OfflineConfig, TabularRunState, ValueLearner, Variant,
};

// Only the actor-critic schedule: the critic-actor critic step
// `1/((n+2) log(n+2))` sums to roughly `log log n`, far too little here.
#[test]
fn frozen_actor_critic_finds_uniform_value() {
    let m = sarsa_chatter_mdp().mdp;
    let oracle = common::policy_value(&m, &StationaryPolicy::uniform(&m));
    let mut rs = TabularRunState::new(&m, Variant::ActorCritic, Objective::Minimize, 4).frozen();
    for _ in 0..200_000 {
        offline_step(&mut rs, &m).unwrap();
    }
    let err = common::sup_diff(rs.values.as_slice(), &oracle);
    assert!(err < 0.05, "{:?} vs {oracle:?}", rs.values);
    assert!(rs.actor.params().iter().all(|&t| t == 0.0));
}

#[test]
fn actor_moves_towards_the_cheaper_branch() {
    let m = sarsa_chatter_mdp().mdp;
    let v_uniform = common::policy_value(&m, &StationaryPolicy::uniform(&m));
    let pinned = StepSchedule::new(ScheduleFamily::AcSlow, 1e-300).unwrap();
    let mut rs = TabularRunState::new(&m, Variant::ActorCritic, Objective::Minimize, 9)
        .with_schedules(pinned, StepSchedule::unit(ScheduleFamily::AcSlow));
    rs.values = ValueTable::from_full(&m, &v_uniform).unwrap();
    for _ in 0..1_000 {
        offline_step(&mut rs, &m).unwrap();
    }
    // Advantage of u0 at i1 is V(i2) - V(i1) = -0.5 < 0, so its preference grows.
    assert!(rs.actor.theta(0, 0) > 0.0);
    assert!(rs.actor.theta(0, 1) < 0.0);
    assert!(common::sup_diff(rs.values.as_slice(), &v_uniform) < 1e-12);
}

#[test]
fn offline_actor_critic_reaches_optimum_on_chatter() {
    let m = sarsa_chatter_mdp().mdp;
    let (vstar, _) = value_iteration(&m, 1e-12, Objective::Minimize).unwrap();
    let mut cfg = OfflineConfig::new(3);
    cfg.interval = 100_000;
    cfg.window = 100;
    let record = run_offline(&m, Variant::ActorCritic, 1_000_000, &cfg).unwrap();
    let last = record.rows.last().unwrap();
    assert!(last.value_error.unwrap() < 0.1, "{last:?}");
    assert_eq!(last.index, 1_000_000);
    assert!(vstar.get(0) == -2.0);
}

#[test]
fn online_episodes_on_chatter_have_two_steps() {
    let m = sarsa_chatter_mdp().mdp;
    let mut rs = TabularRunState::new(&m, Variant::CriticActor, Objective::Minimize, 5);
    for _ in 0..2_000 {
        let t = run_online_episode(&mut rs, &m).unwrap();
        assert_eq!(t.len(), 2);
        assert!(t.total() == -2.0 || t.total() == -1.0);
    }
}

#[test]
fn online_actor_critic_on_grid_is_near_optimal_on_average() {
    let g = frozen_lake(&GridSpec::standard_4x4()).unwrap();
    let (v, _) = value_iteration(&g.mdp, 1e-12, Objective::Maximize).unwrap();
    let optimum: f64 = g
        .mdp
        .h0()
        .iter()
        .zip(v.as_slice())
        .map(|(h, x)| h * x)
        .sum();
    let mut means = Vec::new();
    for seed in 1..=5 {
        let actor = SoftmaxActor::new(&g.mdp, 5.0).unwrap();
        let mut rs = TabularRunState::new(&g.mdp, Variant::ActorCritic, Objective::Maximize, seed)
            .with_actor(actor)
            .with_schedules(
                StepSchedule::new(ScheduleFamily::AcFast, 3.0).unwrap(),
                StepSchedule::new(ScheduleFamily::AcSlow, 1000.0).unwrap(),
            );
        let mut tail = Vec::new();
        for e in 0..200_000 {
            let r = run_online_episode(&mut rs, &g.mdp).unwrap().total();
            if e >= 190_000 {
                tail.push(r);
            }
        }
        means.push(tail.iter().sum::<f64>() / tail.len() as f64);
    }
    let mean = means.iter().sum::<f64>() / means.len() as f64;
    assert!(
        mean >= 0.95 * optimum,
        "five-seed mean {mean} ({means:?}) vs optimum {optimum}"
    );
}

/// Optimal Q at `i1` on the chatter MDP is (-2, -1); both value learners
/// must find it when the losing branch is explored often enough.
#[test]
fn value_learners_find_chatter_q() {
    let m = sarsa_chatter_mdp().mdp;
    let explore = ExplorationSchedule::EpsGreedyGlie { c: 50.0 };
    for sarsa in [false, true] {
        let mut l = ValueLearner::new(
            &m,
            StepSchedule::unit(ScheduleFamily::AcSlow),
            explore,
            Objective::Minimize,
            12,
        );
        for _ in 0..50_000 {
            let t = if sarsa {
                sarsa_episode(&mut l, &m).unwrap()
            } else {
                q_learning_episode(&mut l, &m).unwrap()
            };
            assert_eq!(t.len(), 2);
        }
        assert!(
            (l.q.get(0, 0) + 2.0).abs() < 0.05,
            "sarsa={sarsa}: {:?}",
            l.q
        );
        assert!(
            (l.q.get(0, 1) + 1.0).abs() < 0.05,
            "sarsa={sarsa}: {:?}",
            l.q
        );
    }
}

#[test]
fn zero_cost_mdp_keeps_q_at_zero() {
    let m = qlfa_counterexample().mdp;
    let mut l = ValueLearner::new(
        &m,
        StepSchedule::unit(ScheduleFamily::AcSlow),
        ExplorationSchedule::ConstantEps { eps: 0.5 },
        Objective::Minimize,
        1,
    );
    for _ in 0..1_000 {
        sarsa_episode(&mut l, &m).unwrap();
        q_learning_episode(&mut l, &m).unwrap();
    }
    assert!(l.q.as_slice().iter().all(|&q| q == 0.0));
}

/// `A¹` and `b¹` assembled from the oracle chain, then `A¹v = −b¹`.
fn oracle_fixed_point(m: &TabularMdp, pi: &StationaryPolicy, rows: &[Vec<f64>]) -> Vec<f64> {
    let (p, r) = common::chain(m, pi);
    let h: Vec<f64> = m
        .nonterminal_states()
        .iter()
        .map(|&i| common::occupancy(m, pi)[i])
        .collect();
    let n = r.len();
    let d = rows[0].len();
    let mut a = vec![vec![0.0; d]; d];
    let mut b = vec![0.0; d];
    for x in 0..n {
        for k in 0..d {
            b[k] -= h[x] * rows[x][k] * r[x];
            for l in 0..d {
                let next: f64 = (0..n).map(|y| p[x][y] * rows[y][l]).sum();
                a[k][l] += h[x] * rows[x][k] * (next - rows[x][l]);
            }
        }
    }
    common::gauss_solve(a, b)
}

fn frozen_fa_critic(
    m: &TabularMdp,
    phi: &StateFeatures,
    actor: LinearSoftmaxActor,
    critic_scale: f64,
    episodes: usize,
) -> Vec<f64> {
    let mut st = AcFaState::new(
        FaCritic::zeros(phi.dim()),
        actor,
        StepSchedule::new(ScheduleFamily::AcFast, critic_scale).unwrap(),
        StepSchedule::unit(ScheduleFamily::AcSlow),
        Objective::Minimize,
        77,
    );
    st.freeze_actor = true;
    for _ in 0..episodes {
        ac_fa_episode(&mut st, m, phi).unwrap();
    }
    st.critic.v
}

#[test]
fn frozen_fa_critic_on_chatter() {
    let env = sarsa_chatter_mdp();
    let phi = env.state_features.unwrap();
    let actor = LinearSoftmaxActor::new(env.action_features.unwrap(), 20.0, 0.0).unwrap();
    let pi = actor.policy(&env.mdp);
    let rows = vec![vec![1.0, 0.0], vec![0.0, 1.0], vec![0.0, 1.0]];
    let want = oracle_fixed_point(&env.mdp, &pi, &rows);
    let (a, b) = expected_dynamics(&env.mdp, &pi, &phi).unwrap();
    let exact = fa_fixed_point(&a, &b).unwrap();
    assert!(common::sup_diff(&exact.v, &want) < 1e-12);
    let v = frozen_fa_critic(&env.mdp, &phi, actor, 1.0, 200_000);
    assert!(common::sup_diff(&v, &want) < 0.05, "{v:?} vs {want:?}");
}

#[test]
fn frozen_fa_critic_on_counterexample() {
    let env = qlfa_counterexample();
    let phi = env.state_features.unwrap();
    let actor = LinearSoftmaxActor::new(env.action_features.unwrap(), 20.0, 0.0)
        .unwrap()
        .with_theta(&[-2.0, -1.0])
        .unwrap();
    let want = oracle_fixed_point(&env.mdp, &actor.policy(&env.mdp), &[vec![1.0], vec![1.0]]);
    assert!(want[0].abs() < 1e-12);
    let v = frozen_fa_critic(&env.mdp, &phi, actor, 1.0, 200_000);
    assert!((v[0] - want[0]).abs() < 0.05);
}

#[test]
fn frozen_fa_critic_on_random_features() {
    let m = random_mdp_with_leak(6, 2, 41, 0.3).unwrap();
    let mut rng = common::rng(42);
    let rows: Vec<Vec<f64>> = (0..m.n_nonterminal())
        .map(|_| (0..2).map(|_| rng.random_range(0.0..1.0)).collect())
        .collect();
    let phi = StateFeatures::new(&m, &rows).unwrap();
    let table: Vec<f64> = (0..m.n_states() * m.n_actions())
        .map(|_| rng.random_range(-1.0..1.0))
        .collect();
    let na = m.n_actions();
    let feats = ActionFeatures::from_fn(&m, 1, |i, u| vec![table[i * na + u]]).unwrap();
    let actor = LinearSoftmaxActor::new(feats, 20.0, 0.0)
        .unwrap()
        .with_theta(&[0.7])
        .unwrap();
    let pi = actor.policy(&m);
    let want = oracle_fixed_point(&m, &pi, &rows);
    let (a, b) = expected_dynamics(&m, &pi, &phi).unwrap();
    assert!(common::sup_diff(&fa_fixed_point(&a, &b).unwrap().v, &want) < 1e-9);
    let v = frozen_fa_critic(&m, &phi, actor, 1.0, 200_000);
    assert!(common::sup_diff(&v, &want) < 0.05, "{v:?} vs {want:?}");
}

/// With a near-greedy behaviour policy the shared value weight of `i₂`/`i₃`
/// settles at the visit-weighted mean of the two terminal costs.
#[test]
fn sarsa_lfa_shared_weight_tracks_branch_frequencies() {
    let env = sarsa_chatter_mdp();
    let feats = env.action_features.unwrap();
    let explore = ExplorationSchedule::EpsSoftmax {
        eps: 0.1,
        temperature: 0.01,
    };
    let step = StepSchedule::new(ScheduleFamily::PowerLaw { alpha: 0.7 }, 0.1).unwrap();
    for seed in 1..=3 {
        let mut l = LinearQ::new(feats.clone(), step, explore, Objective::Minimize, seed);
        let mut branch_i2 = 0usize;
        let n = 40_000;
        let tail = 10_000;
        for e in 0..n {
            let t = sarsa_lfa_episode(&mut l, &env.mdp).unwrap();
            if e >= n - tail && t.steps[0].action == 0 {
                branch_i2 += 1;
            }
        }
        assert!(!l.diverged());
        let share = branch_i2 as f64 / tail as f64;
        let probs = explore.behavior(&l.action_values(0), &[0, 1], Objective::Minimize, 0);
        assert!((probs[0] - share).abs() < 0.02, "{probs:?} vs {share}");
        let predicted = -2.0 * probs[0] - 1.0 * probs[1];
        assert!(
            (l.q[2] - predicted).abs() < 0.1,
            "seed {seed}: weight {} vs {predicted}",
            l.q[2]
        );
    }
}

#[test]
fn l2_distance_of_unit_shift() {
    let m = random_mdp_with_leak(21, 2, 0, 0.05).unwrap();
    let (vstar, _) = value_iteration(&m, 1e-12, Objective::Minimize).unwrap();
    let mut v = vstar.clone();
    for &i in m.nonterminal_states() {
        v.add(i, 1.0);
    }
    assert!((l2_distance(&v, &vstar) - 20f64.sqrt()).abs() < 1e-12);
}
