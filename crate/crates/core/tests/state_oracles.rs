mod common;

use boxlogic::box_world::{BuiltWorld, JointOutcome, TwoBoxLogic};
use boxlogic::logic::DEFAULT_BUDGET;
use boxlogic::states::{
    chsh_value, factorize_two_valued, ns_polytope, polytope_vertices, pr_box_state, product_state,
    rational, two_valued_states, Behavior, ComponentState, Rational, TwoValuedState,
};
use num_traits::Zero;

use common::{basis_enumeration_vertices, brute_force_deterministic, world};

#[test]
fn vertices_match_basis_enumeration_on_chsh_scenario() {
    let w = world(&[2, 2], &[2, 2]);
    let oracle = basis_enumeration_vertices(&w);
    let mut ours: Vec<Vec<Rational>> = polytope_vertices(&ns_polytope(&w), 16)
        .unwrap()
        .iter()
        .map(|b| b.table().to_vec())
        .collect();
    ours.sort();
    assert_eq!(oracle.len(), 24);
    assert_eq!(ours, oracle);
    let integral = ours
        .iter()
        .filter(|v| v.iter().all(|x| x.is_integer()))
        .count();
    assert_eq!(integral, 16);
    let half = ours
        .iter()
        .filter(|v| v.iter().all(|x| *x == rational(1, 2) || x.is_zero()))
        .count();
    assert_eq!(half, 8);
}

#[test]
fn vertices_match_basis_enumeration_on_small_worlds() {
    for (l, r) in [
        (vec![2], vec![2]),
        (vec![2], vec![3]),
        (vec![2, 2], vec![3]),
        (vec![3], vec![2, 2]),
    ] {
        let w = world(&l, &r);
        let oracle = basis_enumeration_vertices(&w);
        let mut ours: Vec<Vec<Rational>> = polytope_vertices(&ns_polytope(&w), 32)
            .unwrap()
            .iter()
            .map(|b| b.table().to_vec())
            .collect();
        ours.sort();
        assert_eq!(ours, oracle, "{l:?} x {r:?}");
    }
}

#[test]
fn two_valued_states_match_brute_force() {
    for (l, r, expected) in [
        (vec![2, 2], vec![2, 2], 16),
        (vec![2], vec![2], 4),
        (vec![2, 2], vec![3], 12),
        (vec![3], vec![3], 9),
    ] {
        let w = world(&l, &r);
        let logic = TwoBoxLogic::build(&w, DEFAULT_BUDGET).unwrap();
        let mut ours: Vec<Vec<Rational>> = two_valued_states(&logic)
            .unwrap()
            .iter()
            .map(|s| s.behavior().table().to_vec())
            .collect();
        ours.sort();
        let mut oracle = brute_force_deterministic(&w);
        oracle.sort();
        assert_eq!(ours.len(), expected, "{l:?} x {r:?}");
        assert_eq!(ours, oracle, "{l:?} x {r:?}");
    }
}

#[test]
fn deterministic_vertices_two_valued_states_and_product_pairs_agree() {
    let w = world(&[2, 2], &[2, 2]);
    let logic = TwoBoxLogic::build(&w, DEFAULT_BUDGET).unwrap();
    let mut vertices: Vec<Behavior> = polytope_vertices(&ns_polytope(&w), 16)
        .unwrap()
        .into_iter()
        .filter(|b| b.is_deterministic())
        .collect();
    vertices.sort();
    let mut states: Vec<Behavior> = two_valued_states(&logic)
        .unwrap()
        .into_iter()
        .map(|s| s.behavior().clone())
        .collect();
    states.sort();
    let mut products = Vec::new();
    for x in 0..4usize {
        for y in 0..4usize {
            let mu = ComponentState::deterministic(w.left(), &[x & 1, x >> 1]).unwrap();
            let nu = ComponentState::deterministic(w.right(), &[y & 1, y >> 1]).unwrap();
            products.push(product_state(&w, &mu, &nu).unwrap());
        }
    }
    products.sort();
    assert_eq!(vertices, states);
    assert_eq!(states, products);
}

#[test]
fn every_two_valued_state_round_trips_through_factorization() {
    let built = BuiltWorld::build(world(&[2, 2], &[2, 2]), DEFAULT_BUDGET).unwrap();
    let states = two_valued_states(&built.composite).unwrap();
    assert_eq!(states.len(), 16);
    for s in &states {
        let (mu, nu) = factorize_two_valued(s).unwrap();
        assert_eq!(
            &product_state(built.composite.world(), &mu, &nu).unwrap(),
            s.behavior()
        );
    }
}

#[test]
fn pr_support_pattern_is_rejected() {
    let w = world(&[2, 2], &[2, 2]);
    // Correlated in three contexts, anticorrelated in the last.
    let support = vec![
        JointOutcome {
            a: 0,
            b: 0,
            alpha: 0,
            beta: 0,
        },
        JointOutcome {
            a: 0,
            b: 1,
            alpha: 0,
            beta: 0,
        },
        JointOutcome {
            a: 1,
            b: 0,
            alpha: 0,
            beta: 0,
        },
        JointOutcome {
            a: 1,
            b: 1,
            alpha: 0,
            beta: 1,
        },
    ];
    let chi = TwoValuedState::from_support(&w, support).unwrap();
    let err = factorize_two_valued(&chi).unwrap_err().to_string();
    assert!(err.contains("certain"), "{err}");
}

#[test]
fn chsh_extremes_over_vertices() {
    let w = world(&[2, 2], &[2, 2]);
    let vertices = polytope_vertices(&ns_polytope(&w), 16).unwrap();
    let values: Vec<(bool, Rational)> = vertices
        .iter()
        .map(|v| (v.is_deterministic(), chsh_value(v).unwrap()))
        .collect();
    let max_all = values.iter().map(|(_, v)| v.clone()).max().unwrap();
    let max_det = values
        .iter()
        .filter(|(d, _)| *d)
        .map(|(_, v)| v.clone())
        .max()
        .unwrap();
    assert_eq!(max_all, rational(4, 1));
    assert_eq!(max_det, rational(2, 1));
    assert_eq!(chsh_value(&pr_box_state()).unwrap(), rational(4, 1));
    assert!(vertices.contains(&pr_box_state()));
    assert!(chsh_value(&Behavior::uniform(&w)).unwrap().is_zero());
}

#[test]
fn chsh_over_deterministic_by_brute_force() {
    // Local assignments alpha(a), beta(b) in {+1, -1}.
    let mut best = i64::MIN;
    for bits in 0..16 {
        let s = |i: usize| if (bits >> i) & 1 == 1 { -1i64 } else { 1 };
        let (a0, a1, b0, b1) = (s(0), s(1), s(2), s(3));
        best = best.max(a0 * b0 + a0 * b1 + a1 * b0 - a1 * b1);
    }
    let w = world(&[2, 2], &[2, 2]);
    let logic = TwoBoxLogic::build(&w, DEFAULT_BUDGET).unwrap();
    let ours = two_valued_states(&logic)
        .unwrap()
        .iter()
        .map(|s| chsh_value(s.behavior()).unwrap())
        .max()
        .unwrap();
    assert_eq!(ours, rational(best, 1));
}
