use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde_json::Value;

use super::{rational, AtomState, Rational};
use crate::bits::Bits;
use crate::box_world::{BoxSpec, BoxWorld, JointOutcome, SingleBoxLogic, TwoBoxLogic};
use crate::error::{Error, Result};

/// Parses `"p/q"`, `"p"`, an integer, or a pair `[p, q]`.
pub fn parse_rational(v: &Value) -> Result<Rational> {
    let bad = || Error::Input(format!("not a rational number: {v}"));
    match v {
        Value::String(s) => {
            let (n, d) = s.split_once('/').unwrap_or((s, "1"));
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(Rational::new(n, d))
        }
        Value::Number(n) => n.as_i64().map(|n| rational(n, 1)).ok_or_else(bad),
        Value::Array(pair) if pair.len() == 2 => {
            let n = pair[0].as_i64().ok_or_else(bad)?;
            let d = pair[1].as_i64().filter(|&d| d != 0).ok_or_else(bad)?;
            Ok(rational(n, d))
        }
        _ => Err(bad()),
    }
}

fn in_unit_interval(q: &Rational) -> bool {
    !q.is_negative() && q <= &Rational::one()
}

/// A conditional probability table `P(alpha beta | a b)` that is normalized
/// in every context and no-signaling.
///
/// Entries are stored in the order of [`BoxWorld::joint_outcomes`].
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Behavior {
    left: Vec<usize>,
    right: Vec<usize>,
    table: Vec<Rational>,
}

impl Behavior {
    /// Validates a flat table laid out like [`BoxWorld::joint_outcomes`].
    pub fn from_flat(world: &BoxWorld, table: Vec<Rational>) -> Result<Self> {
        if table.len() != world.joint_outcome_count() {
            return Err(Error::Input(format!(
                "table has {} entries, the world has {} joint outcomes",
                table.len(),
                world.joint_outcome_count()
            )));
        }
        let b = Behavior {
            left: world.left().outcome_sizes().to_vec(),
            right: world.right().outcome_sizes().to_vec(),
            table,
        };
        b.validate()?;
        Ok(b)
    }

    /// Wraps a table without validation.
    pub(crate) fn unchecked(world: &BoxWorld, table: Vec<Rational>) -> Self {
        Behavior {
            left: world.left().outcome_sizes().to_vec(),
            right: world.right().outcome_sizes().to_vec(),
            table,
        }
    }

    /// Validates one row per context `(a, b)` in row-major order; each row
    /// lists `P(alpha beta | a b)` with `alpha` major.
    pub fn from_table(world: &BoxWorld, rows: Vec<Vec<Rational>>) -> Result<Self> {
        if rows.len() != world.context_count() {
            return Err(Error::Input(format!(
                "{} rows for {} contexts",
                rows.len(),
                world.context_count()
            )));
        }
        for ((a, b), row) in world.contexts().zip(&rows) {
            let want = world.left().outcomes(a) * world.right().outcomes(b);
            if row.len() != want {
                return Err(Error::Input(format!(
                    "context ({}, {}) has {} entries, expected {want}",
                    a + 1,
                    b + 1,
                    row.len()
                )));
            }
        }
        Self::from_flat(world, rows.into_iter().flatten().collect())
    }

    /// Range first, then no-signaling, then normalization, so that a single
    /// perturbed entry is reported as the marginal mismatch it causes.
    fn validate(&self) -> Result<()> {
        let (n, m) = (self.left.len(), self.right.len());
        for (a, b) in (0..n).flat_map(|a| (0..m).map(move |b| (a, b))) {
            for alpha in 0..self.left[a] {
                for beta in 0..self.right[b] {
                    let v = self.p(a, b, alpha, beta);
                    if !in_unit_interval(v) {
                        return Err(Error::Range {
                            a: a + 1,
                            b: b + 1,
                            value: v.to_string(),
                        });
                    }
                }
            }
        }
        // Right marginals must not depend on a, left marginals not on b.
        for b in 0..m {
            for a in 1..n {
                for beta in 0..self.right[b] {
                    let (first, here) = (
                        self.right_marginal_in(0, b, beta),
                        self.right_marginal_in(a, b, beta),
                    );
                    if first != here {
                        return Err(Error::Signaling {
                            first: (1, b + 1),
                            second: (a + 1, b + 1),
                            detail: format!(
                                "right outcome {beta} has probability {first} versus {here}"
                            ),
                        });
                    }
                }
            }
        }
        for a in 0..n {
            for b in 1..m {
                for alpha in 0..self.left[a] {
                    let (first, here) = (
                        self.left_marginal_in(a, 0, alpha),
                        self.left_marginal_in(a, b, alpha),
                    );
                    if first != here {
                        return Err(Error::Signaling {
                            first: (a + 1, 1),
                            second: (a + 1, b + 1),
                            detail: format!(
                                "left outcome {alpha} has probability {first} versus {here}"
                            ),
                        });
                    }
                }
            }
        }
        for (a, b) in (0..n).flat_map(|a| (0..m).map(move |b| (a, b))) {
            let sum: Rational = (0..self.left[a])
                .map(|alpha| self.left_marginal_in(a, b, alpha))
                .sum();
            if !sum.is_one() {
                return Err(Error::Normalization {
                    a: a + 1,
                    b: b + 1,
                    sum: sum.to_string(),
                });
            }
        }
        Ok(())
    }

    fn index(&self, a: usize, b: usize, alpha: usize, beta: usize) -> usize {
        let mut at = 0;
        for (i, &ka) in self.left.iter().enumerate() {
            for (j, &kb) in self.right.iter().enumerate() {
                if (i, j) == (a, b) {
                    return at + alpha * kb + beta;
                }
                at += ka * kb;
            }
        }
        unreachable!("context out of range")
    }

    pub fn p(&self, a: usize, b: usize, alpha: usize, beta: usize) -> &Rational {
        &self.table[self.index(a, b, alpha, beta)]
    }

    pub fn get(&self, o: JointOutcome) -> &Rational {
        self.p(o.a, o.b, o.alpha, o.beta)
    }

    pub fn table(&self) -> &[Rational] {
        &self.table
    }

    pub fn shape(&self) -> (&[usize], &[usize]) {
        (&self.left, &self.right)
    }

    fn left_marginal_in(&self, a: usize, b: usize, alpha: usize) -> Rational {
        (0..self.right[b])
            .map(|beta| self.p(a, b, alpha, beta))
            .sum()
    }

    fn right_marginal_in(&self, a: usize, b: usize, beta: usize) -> Rational {
        (0..self.left[a])
            .map(|alpha| self.p(a, b, alpha, beta))
            .sum()
    }

    /// `P(alpha | a)` of the left box.
    pub fn left_marginal(&self, a: usize, alpha: usize) -> Rational {
        self.left_marginal_in(a, 0, alpha)
    }

    /// `P(beta | b)` of the right box.
    pub fn right_marginal(&self, b: usize, beta: usize) -> Rational {
        self.right_marginal_in(0, b, beta)
    }

    pub fn is_deterministic(&self) -> bool {
        self.table.iter().all(|v| v.is_zero() || v.is_one())
    }

    pub fn fits(&self, world: &BoxWorld) -> bool {
        self.left == world.left().outcome_sizes() && self.right == world.right().outcome_sizes()
    }

    /// Values on the atoms of the composite logic.
    pub fn atom_state(&self, logic: &TwoBoxLogic) -> Result<AtomState> {
        if !self.fits(logic.world()) {
            return Err(Error::Input("behavior does not match the box world".into()));
        }
        Ok(AtomState(
            logic
                .atom_labels()
                .iter()
                .map(|&o| self.get(o).clone())
                .collect(),
        ))
    }

    /// Value on an element of the composite logic.
    pub fn evaluate(&self, logic: &TwoBoxLogic, p: &Bits) -> Result<Rational> {
        self.atom_state(logic)?.value_of(logic.logic(), p)
    }

    pub fn uniform(world: &BoxWorld) -> Behavior {
        let table = world
            .joint_outcomes()
            .iter()
            .map(|o| {
                rational(
                    1,
                    (world.left().outcomes(o.a) * world.right().outcomes(o.b)) as i64,
                )
            })
            .collect();
        Behavior {
            left: world.left().outcome_sizes().to_vec(),
            right: world.right().outcome_sizes().to_vec(),
            table,
        }
    }

    /// `{"a,b": [P(alpha beta | a b), ..]}` with inputs numbered from 1 and
    /// each row listed with `alpha` major.
    pub fn to_json(&self) -> Value {
        let mut map = BTreeMap::new();
        for (a, &ka) in self.left.iter().enumerate() {
            for (b, &kb) in self.right.iter().enumerate() {
                let row: Vec<Value> = (0..ka * kb)
                    .map(|i| Value::String(self.p(a, b, i / kb, i % kb).to_string()))
                    .collect();
                map.insert(format!("{},{}", a + 1, b + 1), Value::Array(row));
            }
        }
        serde_json::to_value(map).unwrap()
    }

    pub fn from_json(world: &BoxWorld, v: &Value) -> Result<Self> {
        let obj = v
            .as_object()
            .ok_or_else(|| Error::Input("behavior must be a JSON object".into()))?;
        let mut rows = Vec::with_capacity(world.context_count());
        for (a, b) in world.contexts() {
            let key = format!("{},{}", a + 1, b + 1);
            let row = obj
                .get(&key)
                .and_then(Value::as_array)
                .ok_or_else(|| Error::Input(format!("missing context \"{key}\"")))?;
            rows.push(row.iter().map(parse_rational).collect::<Result<Vec<_>>>()?);
        }
        if obj.len() != world.context_count() {
            return Err(Error::Input(
                "behavior has contexts outside the box world".into(),
            ));
        }
        Self::from_table(world, rows)
    }
}

/// A state of a single box: `P(alpha | a)` for every input.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ComponentState {
    table: Vec<Vec<Rational>>,
}

impl ComponentState {
    pub fn new(spec: &BoxSpec, table: Vec<Vec<Rational>>) -> Result<Self> {
        if table.len() != spec.input_count() {
            return Err(Error::Input(format!(
                "{} rows for {} inputs",
                table.len(),
                spec.input_count()
            )));
        }
        for (a, row) in table.iter().enumerate() {
            if row.len() != spec.outcomes(a) {
                return Err(Error::Input(format!(
                    "input {} has {} entries",
                    a + 1,
                    row.len()
                )));
            }
            if let Some(v) = row.iter().find(|v| !in_unit_interval(v)) {
                return Err(Error::Range {
                    a: a + 1,
                    b: 0,
                    value: v.to_string(),
                });
            }
            let sum: Rational = row.iter().sum();
            if !sum.is_one() {
                return Err(Error::Normalization {
                    a: a + 1,
                    b: 0,
                    sum: sum.to_string(),
                });
            }
        }
        Ok(ComponentState { table })
    }

    /// The point measure at the phase-space point `outcomes`.
    pub fn deterministic(spec: &BoxSpec, outcomes: &[usize]) -> Result<Self> {
        if outcomes.len() != spec.input_count()
            || outcomes
                .iter()
                .enumerate()
                .any(|(a, &o)| o >= spec.outcomes(a))
        {
            return Err(Error::Input(format!(
                "{outcomes:?} is not a point of the phase space"
            )));
        }
        let table = outcomes
            .iter()
            .enumerate()
            .map(|(a, &o)| {
                (0..spec.outcomes(a))
                    .map(|x| rational((x == o) as i64, 1))
                    .collect()
            })
            .collect();
        Ok(ComponentState { table })
    }

    pub fn uniform(spec: &BoxSpec) -> Self {
        let table = spec
            .outcome_sizes()
            .iter()
            .map(|&k| vec![rational(1, k as i64); k])
            .collect();
        ComponentState { table }
    }

    pub fn p(&self, a: usize, alpha: usize) -> &Rational {
        &self.table[a][alpha]
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.table.iter().map(Vec::len).collect()
    }

    pub fn atom_state(&self, logic: &SingleBoxLogic) -> Result<AtomState> {
        if self.sizes() != logic.spec().outcome_sizes() {
            return Err(Error::Input("state does not match the box".into()));
        }
        Ok(AtomState(
            logic
                .atom_labels()
                .iter()
                .map(|&(a, alpha)| self.table[a][alpha].clone())
                .collect(),
        ))
    }

    pub fn evaluate(&self, logic: &SingleBoxLogic, p: &Bits) -> Result<Rational> {
        self.atom_state(logic)?.value_of(logic.logic(), p)
    }
}

/// Two-valued states of a single-box logic as component states.
pub fn component_two_valued_states(logic: &SingleBoxLogic) -> Result<Vec<ComponentState>> {
    let spec = logic.spec();
    let mut out = Vec::new();
    for s in super::enumerate_two_valued_states(logic.logic())? {
        let mut table = Vec::with_capacity(spec.input_count());
        for a in 0..spec.input_count() {
            let row = (0..spec.outcomes(a))
                .map(|alpha| s.value_of(logic.logic(), &logic.cylinder(a, &[alpha])?))
                .collect::<Result<Vec<_>>>()?;
            table.push(row);
        }
        out.push(ComponentState::new(spec, table)?);
    }
    out.sort();
    Ok(out)
}

/// `P(alpha beta | a b) = mu(alpha | a) nu(beta | b)`.
pub fn product_state(
    world: &BoxWorld,
    mu: &ComponentState,
    nu: &ComponentState,
) -> Result<Behavior> {
    if mu.sizes() != world.left().outcome_sizes() || nu.sizes() != world.right().outcome_sizes() {
        return Err(Error::Input(
            "component states do not match the box world".into(),
        ));
    }
    let table = world
        .joint_outcomes()
        .iter()
        .map(|o| mu.p(o.a, o.alpha) * nu.p(o.b, o.beta))
        .collect();
    Ok(Behavior {
        left: world.left().outcome_sizes().to_vec(),
        right: world.right().outcome_sizes().to_vec(),
        table,
    })
}

fn binary_world() -> BoxWorld {
    let spec = BoxSpec::new(vec![2, 2]).unwrap();
    BoxWorld::new(spec.clone(), spec).unwrap()
}

/// The Popescu-Rohrlich box on two binary inputs per side:
/// `P(alpha beta | a b) = 1/2` when `alpha xor beta = a b`, else 0.
pub fn pr_box_state() -> Behavior {
    let world = binary_world();
    let table = world
        .joint_outcomes()
        .iter()
        .map(|o| rational(((o.alpha ^ o.beta) == (o.a & o.b)) as i64, 2))
        .collect();
    Behavior::from_flat(&world, table).expect("PR box is a valid behavior")
}

/// `E(0,0) + E(0,1) + E(1,0) - E(1,1)` with
/// `E(a, b) = sum (-1)^(alpha xor beta) P(alpha beta | a b)`.
pub fn chsh_value(s: &Behavior) -> Result<Rational> {
    if s.left != [2, 2] || s.right != [2, 2] {
        return Err(Error::Input(
            "CHSH needs two binary inputs on each side".into(),
        ));
    }
    let correlator = |a: usize, b: usize| -> Rational {
        let mut e = Rational::zero();
        for alpha in 0..2 {
            for beta in 0..2 {
                if alpha == beta {
                    e += s.p(a, b, alpha, beta);
                } else {
                    e -= s.p(a, b, alpha, beta);
                }
            }
        }
        e
    };
    Ok(correlator(0, 0) + correlator(0, 1) + correlator(1, 0) - correlator(1, 1))
}
