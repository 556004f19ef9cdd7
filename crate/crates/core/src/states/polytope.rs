//! The no-signaling polytope and exact vertex enumeration by the double
//! description method.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde::Serialize;

use super::linalg::rref;
use super::{Behavior, Rational};
use crate::bits::Bits;
use crate::box_world::{BoxWorld, JointOutcome};
use crate::error::{Error, Result};

/// `coeffs . x = rhs`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct LinearRow {
    pub coeffs: Vec<i64>,
    pub rhs: i64,
}

/// `{x >= 0 : equalities}` over the joint outcomes of a box world.
#[derive(Clone, Debug, Serialize)]
pub struct StatePolytope {
    #[serde(skip)]
    world: BoxWorld,
    pub variables: Vec<JointOutcome>,
    /// Normalization rows first, then no-signaling rows.
    pub equalities: Vec<LinearRow>,
    /// Every coordinate is nonnegative; listed by variable index.
    pub nonnegative: Vec<usize>,
}

impl StatePolytope {
    pub fn world(&self) -> &BoxWorld {
        &self.world
    }

    pub fn contains(&self, x: &[Rational]) -> bool {
        x.len() == self.variables.len()
            && x.iter().all(|v| !v.is_negative())
            && self.equalities.iter().all(|row| {
                let lhs: Rational = row
                    .coeffs
                    .iter()
                    .zip(x)
                    .map(|(&c, v)| v * Rational::from_integer(c.into()))
                    .sum();
                lhs == Rational::from_integer(row.rhs.into())
            })
    }
}

/// Nonnegativity, normalization in every context, and no-signaling: each
/// right marginal agrees with the one under the first left input, and each
/// left marginal with the one under the first right input.
pub fn ns_polytope(world: &BoxWorld) -> StatePolytope {
    let variables = world.joint_outcomes();
    let n = variables.len();
    let row =
        |pred: &dyn Fn(&JointOutcome) -> i64| -> Vec<i64> { variables.iter().map(pred).collect() };
    let mut equalities = Vec::new();
    for (a, b) in world.contexts() {
        equalities.push(LinearRow {
            coeffs: row(&|o| i64::from(o.a == a && o.b == b)),
            rhs: 1,
        });
    }
    for b in 0..world.right().input_count() {
        for a in 1..world.left().input_count() {
            for beta in 0..world.right().outcomes(b) {
                let coeffs = row(&|o| {
                    let hit = o.b == b && o.beta == beta;
                    i64::from(hit && o.a == a) - i64::from(hit && o.a == 0)
                });
                equalities.push(LinearRow { coeffs, rhs: 0 });
            }
        }
    }
    for a in 0..world.left().input_count() {
        for b in 1..world.right().input_count() {
            for alpha in 0..world.left().outcomes(a) {
                let coeffs = row(&|o| {
                    let hit = o.a == a && o.alpha == alpha;
                    i64::from(hit && o.b == b) - i64::from(hit && o.b == 0)
                });
                equalities.push(LinearRow { coeffs, rhs: 0 });
            }
        }
    }
    StatePolytope {
        world: world.clone(),
        variables,
        equalities,
        nonnegative: (0..n).collect(),
    }
}

/// Vertices of the polytope as behaviors, in lexicographic order of their
/// coordinate vectors.
pub fn polytope_vertices(p: &StatePolytope, max_dimension: usize) -> Result<Vec<Behavior>> {
    enumerate_vertices(&p.equalities, p.variables.len(), max_dimension)?
        .into_iter()
        .map(|x| Behavior::from_flat(&p.world, x))
        .collect()
}

/// Vertices of `{x in Q^n : x >= 0, rows}`, which must be bounded. Sorted
/// lexicographically, without duplicates.
pub fn enumerate_vertices(
    rows: &[LinearRow],
    n: usize,
    max_dimension: usize,
) -> Result<Vec<Vec<Rational>>> {
    let Some(problem) = ConeProblem::from_equalities(rows, n)? else {
        return Ok(Vec::new());
    };
    if problem.dimension() > max_dimension + 1 {
        return Err(Error::Budget(format!(
            "polytope of dimension {} exceeds the limit of {max_dimension}",
            problem.dimension() - 1
        )));
    }
    let rays = problem.extreme_rays();
    let mut out: Vec<Vec<Rational>> = rays.iter().filter_map(|r| problem.vertex_of(r)).collect();
    out.sort();
    out.dedup();
    Ok(out)
}

/// The polytope rewritten as a pointed cone `{y : G y >= 0}` in the
/// coordinates `y = (t, lambda)`, where `t` are the free variables of the
/// equality system and `lambda` homogenizes. The first `dimension` rows of
/// `G` form the identity.
#[derive(Clone, Debug)]
pub struct ConeProblem {
    n: usize,
    free: Vec<usize>,
    pivots: Vec<usize>,
    /// Reduced equalities: `x_{pivots[i]} = rhs[i] - sum_j coeff[i][j] t_j`.
    reduced: Vec<Vec<Rational>>,
    rows: Vec<Vec<BigInt>>,
}

fn to_integer_row(row: &[Rational]) -> Vec<BigInt> {
    let lcm = row
        .iter()
        .fold(BigInt::from(1), |acc, q| acc.lcm(q.denom()));
    let ints: Vec<BigInt> = row
        .iter()
        .map(|q| (q * Rational::from_integer(lcm.clone())).to_integer())
        .collect();
    primitive(ints)
}

fn primitive(v: Vec<BigInt>) -> Vec<BigInt> {
    let g = v.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() || g == BigInt::from(1) {
        v
    } else {
        v.into_iter().map(|x| x / &g).collect()
    }
}

fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[derive(Clone)]
struct Ray {
    v: Vec<BigInt>,
    zeros: Bits,
}

impl ConeProblem {
    /// `None` when the equalities are inconsistent.
    pub fn from_equalities(rows: &[LinearRow], n: usize) -> Result<Option<Self>> {
        if let Some(r) = rows.iter().find(|r| r.coeffs.len() != n) {
            return Err(Error::Input(format!(
                "row of length {} for {n} variables",
                r.coeffs.len()
            )));
        }
        let mut m: Vec<Vec<Rational>> = rows
            .iter()
            .map(|r| {
                r.coeffs
                    .iter()
                    .chain(std::iter::once(&r.rhs))
                    .map(|&c| Rational::from_integer(c.into()))
                    .collect()
            })
            .collect();
        let pivots = rref(&mut m);
        if pivots.last() == Some(&n) {
            return Ok(None);
        }
        let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
        let d = free.len();
        let mut g: Vec<Vec<BigInt>> = (0..=d)
            .map(|i| (0..=d).map(|j| BigInt::from(i64::from(i == j))).collect())
            .collect();
        let mut reduced = Vec::with_capacity(m.len());
        for row in &m {
            let mut red: Vec<Rational> = free.iter().map(|&f| row[f].clone()).collect();
            red.push(row[n].clone());
            // x_pivot >= 0  <=>  rhs * lambda - sum coeff_j t_j >= 0
            let mut cone_row: Vec<Rational> = red[..d].iter().map(|c| -c.clone()).collect();
            cone_row.push(red[d].clone());
            g.push(to_integer_row(&cone_row));
            reduced.push(red);
        }
        Ok(Some(ConeProblem {
            n,
            free,
            pivots,
            reduced,
            rows: g,
        }))
    }

    /// Number of cone coordinates: free variables plus the homogenizing one.
    pub fn dimension(&self) -> usize {
        self.free.len() + 1
    }

    /// Incremental double description: start from the orthant cut out by
    /// the identity rows and intersect with one halfspace at a time, combining
    /// adjacent rays across each new hyperplane.
    fn extreme_rays(&self) -> Vec<Vec<BigInt>> {
        let dim = self.dimension();
        let total = self.rows.len();
        let mut rays: Vec<Ray> = (0..dim)
            .map(|i| {
                let v = self.rows[i].clone();
                let zeros = Bits::from_predicate(total, |k| k < dim && k != i);
                Ray { v, zeros }
            })
            .collect();
        for k in dim..total {
            let g = &self.rows[k];
            let vals: Vec<BigInt> = rays.iter().map(|r| dot(g, &r.v)).collect();
            let pos: Vec<usize> = (0..rays.len()).filter(|&i| vals[i].is_positive()).collect();
            let neg: Vec<usize> = (0..rays.len()).filter(|&i| vals[i].is_negative()).collect();
            if neg.is_empty() {
                for (r, v) in rays.iter_mut().zip(&vals) {
                    if v.is_zero() {
                        r.zeros.insert(k);
                    }
                }
                continue;
            }
            let mut next: Vec<Ray> = Vec::new();
            for &p in &pos {
                for &q in &neg {
                    let common = rays[p].zeros.intersection(&rays[q].zeros);
                    if common.len() + 2 < dim {
                        continue;
                    }
                    let adjacent = rays
                        .iter()
                        .enumerate()
                        .all(|(i, r)| i == p || i == q || !common.is_subset(&r.zeros));
                    if !adjacent {
                        continue;
                    }
                    let a = vals[p].clone();
                    let b = -vals[q].clone();
                    let v: Vec<BigInt> = rays[q]
                        .v
                        .iter()
                        .zip(&rays[p].v)
                        .map(|(x, y)| &a * x + &b * y)
                        .collect();
                    let mut zeros = common;
                    zeros.insert(k);
                    next.push(Ray {
                        v: primitive(v),
                        zeros,
                    });
                }
            }
            for (i, mut r) in rays.into_iter().enumerate() {
                if vals[i].is_negative() {
                    continue;
                }
                if vals[i].is_zero() {
                    r.zeros.insert(k);
                }
                next.push(r);
            }
            rays = next;
        }
        rays.into_iter().map(|r| r.v).collect()
    }

    fn vertex_of(&self, ray: &[BigInt]) -> Option<Vec<Rational>> {
        let d = self.free.len();
        let lambda = &ray[d];
        if !lambda.is_positive() {
            return None;
        }
        let t: Vec<Rational> = ray[..d]
            .iter()
            .map(|x| Rational::new(x.clone(), lambda.clone()))
            .collect();
        let mut x = vec![Rational::zero(); self.n];
        for (j, &f) in self.free.iter().enumerate() {
            x[f] = t[j].clone();
        }
        for (i, &p) in self.pivots.iter().enumerate() {
            let red = &self.reduced[i];
            let mut v = red[d].clone();
            for j in 0..d {
                v -= &red[j] * &t[j];
            }
            x[p] = v;
        }
        Some(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::box_world::BoxSpec;
    use crate::states::rational;

    fn world(l: &[usize], r: &[usize]) -> BoxWorld {
        BoxWorld::new(
            BoxSpec::new(l.to_vec()).unwrap(),
            BoxSpec::new(r.to_vec()).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn single_context_polytope_is_a_simplex() {
        let p = ns_polytope(&world(&[2], &[2]));
        let v = polytope_vertices(&p, 64).unwrap();
        assert_eq!(v.len(), 4);
        assert!(v.iter().all(Behavior::is_deterministic));
    }

    #[test]
    fn square_has_four_vertices() {
        // x + y = 1 with two slack-free coordinates and a third pinned at 1/2.
        let rows = vec![
            LinearRow {
                coeffs: vec![1, 1, 0],
                rhs: 1,
            },
            LinearRow {
                coeffs: vec![0, 0, 2],
                rhs: 1,
            },
        ];
        let v = enumerate_vertices(&rows, 3, 8).unwrap();
        assert_eq!(
            v,
            vec![
                vec![rational(0, 1), rational(1, 1), rational(1, 2)],
                vec![rational(1, 1), rational(0, 1), rational(1, 2)],
            ]
        );
    }

    #[test]
    fn inconsistent_system_has_no_vertices() {
        let rows = vec![
            LinearRow {
                coeffs: vec![1, 1],
                rhs: 1,
            },
            LinearRow {
                coeffs: vec![1, 1],
                rhs: 2,
            },
        ];
        assert!(enumerate_vertices(&rows, 2, 8).unwrap().is_empty());
        let negative = vec![LinearRow {
            coeffs: vec![1, 1],
            rhs: -1,
        }];
        assert!(enumerate_vertices(&negative, 2, 8).unwrap().is_empty());
    }

    #[test]
    fn dimension_budget() {
        let p = ns_polytope(&world(&[2, 2], &[2, 2]));
        assert!(matches!(polytope_vertices(&p, 4), Err(Error::Budget(_))));
    }

    #[test]
    fn ns_rows_admit_the_pr_box() {
        let p = ns_polytope(&world(&[2, 2], &[2, 2]));
        assert_eq!(p.equalities.len(), 4 + 8);
        assert!(p.contains(crate::states::pr_box_state().table()));
    }
}
