//! Oracles shared by integration tests. They use only the box-world
//! description and exact rationals, never the library's own logic or
//! polytope code.
#![allow(dead_code)]

use boxlogic::box_world::{BoxSpec, BoxWorld, JointOutcome};
use boxlogic::states::{Behavior, Rational};
use num_traits::{One, Zero};

pub fn world(left: &[usize], right: &[usize]) -> BoxWorld {
    BoxWorld::new(
        BoxSpec::new(left.to_vec()).unwrap(),
        BoxSpec::new(right.to_vec()).unwrap(),
    )
    .unwrap()
}

/// Equality constraints written out directly from the definitions, with
/// redundant rows left in.
pub fn constraint_rows(w: &BoxWorld) -> Vec<(Vec<Rational>, Rational)> {
    let outcomes = w.joint_outcomes();
    let n = outcomes.len();
    let idx = |a, b, alpha, beta| {
        outcomes
            .iter()
            .position(|o| *o == JointOutcome { a, b, alpha, beta })
            .unwrap()
    };
    let (l, r) = (w.left(), w.right());
    let mut rows = Vec::new();
    for (a, b) in w.contexts() {
        let mut row = vec![Rational::zero(); n];
        for alpha in 0..l.outcomes(a) {
            for beta in 0..r.outcomes(b) {
                row[idx(a, b, alpha, beta)] = Rational::one();
            }
        }
        rows.push((row, Rational::one()));
    }
    for a in 0..l.input_count() {
        for alpha in 0..l.outcomes(a) {
            for b in 0..r.input_count() {
                for c in 0..r.input_count() {
                    let mut row = vec![Rational::zero(); n];
                    for beta in 0..r.outcomes(b) {
                        row[idx(a, b, alpha, beta)] += Rational::one();
                    }
                    for beta in 0..r.outcomes(c) {
                        row[idx(a, c, alpha, beta)] -= Rational::one();
                    }
                    rows.push((row, Rational::zero()));
                }
            }
        }
    }
    for b in 0..r.input_count() {
        for beta in 0..r.outcomes(b) {
            for a in 0..l.input_count() {
                for c in 0..l.input_count() {
                    let mut row = vec![Rational::zero(); n];
                    for alpha in 0..l.outcomes(a) {
                        row[idx(a, b, alpha, beta)] += Rational::one();
                    }
                    for alpha in 0..l.outcomes(c) {
                        row[idx(c, b, alpha, beta)] -= Rational::one();
                    }
                    rows.push((row, Rational::zero()));
                }
            }
        }
    }
    rows
}

/// Solves the square system restricted to `basis` by Gauss-Jordan
/// elimination; `None` when singular.
pub fn solve_on_basis(
    rows: &[(Vec<Rational>, Rational)],
    basis: &[usize],
    n: usize,
) -> Option<Vec<Rational>> {
    let k = basis.len();
    let mut m: Vec<Vec<Rational>> = rows
        .iter()
        .map(|(row, rhs)| {
            basis
                .iter()
                .map(|&j| row[j].clone())
                .chain([rhs.clone()])
                .collect()
        })
        .collect();
    let mut rank = 0;
    for col in 0..k {
        let pivot = (rank..m.len()).find(|&i| !m[i][col].is_zero())?;
        m.swap(rank, pivot);
        let inv = Rational::one() / m[rank][col].clone();
        for x in m[rank].iter_mut() {
            *x *= inv.clone();
        }
        for i in 0..m.len() {
            if i != rank && !m[i][col].is_zero() {
                let f = m[i][col].clone();
                for j in 0..=k {
                    let d = m[rank][j].clone() * f.clone();
                    m[i][j] -= d;
                }
            }
        }
        rank += 1;
    }
    if m[rank..].iter().any(|row| !row[k].is_zero()) {
        return None;
    }
    let mut x = vec![Rational::zero(); n];
    for (i, &j) in basis.iter().enumerate() {
        x[j] = m[i][k].clone();
    }
    Some(x)
}

pub fn rank(rows: &[(Vec<Rational>, Rational)], n: usize) -> usize {
    let mut m: Vec<Vec<Rational>> = rows.iter().map(|(r, _)| r.clone()).collect();
    let mut rank = 0;
    for col in 0..n {
        let Some(p) = (rank..m.len()).find(|&i| !m[i][col].is_zero()) else {
            continue;
        };
        m.swap(rank, p);
        for i in rank + 1..m.len() {
            if !m[i][col].is_zero() {
                let f = m[i][col].clone() / m[rank][col].clone();
                for j in 0..n {
                    let d = m[rank][j].clone() * f.clone();
                    m[i][j] -= d;
                }
            }
        }
        rank += 1;
    }
    rank
}

fn combinations(
    n: usize,
    k: usize,
    start: usize,
    acc: &mut Vec<usize>,
    out: &mut dyn FnMut(&[usize]),
) {
    if acc.len() == k {
        out(acc);
        return;
    }
    for i in start..n {
        if n - i < k - acc.len() {
            break;
        }
        acc.push(i);
        combinations(n, k, i + 1, acc, out);
        acc.pop();
    }
}

/// Vertices as the nonnegative basic feasible solutions.
pub fn basis_enumeration_vertices(w: &BoxWorld) -> Vec<Vec<Rational>> {
    let rows = constraint_rows(w);
    let n = w.joint_outcome_count();
    let k = rank(&rows, n);
    let mut found = std::collections::BTreeSet::new();
    combinations(n, k, 0, &mut Vec::new(), &mut |basis| {
        if let Some(x) = solve_on_basis(&rows, basis, n) {
            if x.iter().all(|v| *v >= Rational::zero()) {
                found.insert(x);
            }
        }
    });
    found.into_iter().collect()
}

/// Every 0/1 table that is normalized per context and no-signaling.
pub fn brute_force_deterministic(w: &BoxWorld) -> Vec<Vec<Rational>> {
    let n = w.joint_outcome_count();
    assert!(n <= 20);
    let mut out = Vec::new();
    for mask in 0u32..(1 << n) {
        let table: Vec<Rational> = (0..n)
            .map(|i| Rational::from_integer(((mask >> i) & 1).into()))
            .collect();
        if Behavior::from_flat(w, table.clone()).is_ok() {
            out.push(table);
        }
    }
    out.sort();
    out
}
