//! Two-valued states: enumeration and factorization into product states.

use std::collections::BTreeSet;

use num_traits::{One, Zero};

use super::{product_state, AtomState, Behavior, ComponentState, LinearRow, Rational};
use crate::box_world::{BoxSpec, BoxWorld, JointOutcome, TwoBoxLogic};
use crate::error::{Error, Result};
use crate::logic::ConcreteLogic;

/// Linear conditions on atom values that make them a state: the whole space
/// has value 1, and `v(r) = v(a) + v(r \ a)` for every element `r` and atom
/// `a` below it, each element being valued through its canonical
/// decomposition. `r \ a` is the complement of `r^c + a` and so always an
/// element; by induction on cover size these equations make every exact
/// cover of an element sum to the same value, which is additivity on all
/// disjoint pairs. Together with nonnegativity they cut out the state space.
pub fn logic_state_equations(logic: &ConcreteLogic) -> Result<Vec<LinearRow>> {
    let n = logic.atoms().len();
    Ok(sparse_state_equations(logic)?
        .into_iter()
        .map(|(terms, rhs)| {
            let mut coeffs = vec![0i64; n];
            for (k, c) in terms {
                coeffs[k] = c;
            }
            LinearRow { coeffs, rhs }
        })
        .collect())
}

type SparseRow = (Vec<(usize, i64)>, i64);

fn sparse_state_equations(logic: &ConcreteLogic) -> Result<Vec<SparseRow>> {
    let top = logic
        .top()
        .ok_or_else(|| Error::Input("logic has no greatest element".into()))?;
    let mut rows: BTreeSet<SparseRow> = BTreeSet::new();
    rows.insert((
        collect_terms(logic.canonical_cover(top)?.iter().map(|&i| (i, 1))),
        1,
    ));
    for r in logic.ids() {
        let whole = logic.members(r);
        let cover = logic.canonical_cover(r)?;
        for (k, &atom) in logic.atoms().iter().enumerate() {
            if atom == r || !logic.members(atom).is_subset(whole) {
                continue;
            }
            let rest = logic.require(&whole.difference(logic.members(atom)))?;
            let terms = cover
                .iter()
                .map(|&i| (i, 1))
                .chain([(k, -1)])
                .chain(logic.canonical_cover(rest)?.iter().map(|&i| (i, -1)));
            let terms = collect_terms(terms);
            if !terms.is_empty() {
                rows.insert((terms, 0));
            }
        }
    }
    Ok(rows.into_iter().collect())
}

/// Sums coefficients per variable and drops the zeros.
fn collect_terms(terms: impl Iterator<Item = (usize, i64)>) -> Vec<(usize, i64)> {
    let mut map = std::collections::BTreeMap::new();
    for (k, c) in terms {
        *map.entry(k).or_insert(0) += c;
    }
    map.into_iter().filter(|&(_, c)| c != 0).collect()
}

/// All states of the logic taking only the values 0 and 1, found by
/// depth-first search over atom values with interval pruning on the state
/// equations. Returned in lexicographic order of their atom vectors.
pub fn enumerate_two_valued_states(logic: &ConcreteLogic) -> Result<Vec<AtomState>> {
    let n = logic.atoms().len();
    let rows = sparse_state_equations(logic)?;
    let mut touching: Vec<Vec<(usize, i64)>> = vec![Vec::new(); n];
    for (r, (terms, _)) in rows.iter().enumerate() {
        for &(k, c) in terms {
            touching[k].push((r, c));
        }
    }
    let mut search = Search {
        rhs: rows.iter().map(|(_, rhs)| *rhs).collect(),
        touching: &touching,
        current: vec![0; rows.len()],
        pos_left: rows
            .iter()
            .map(|(t, _)| t.iter().map(|&(_, c)| c.max(0)).sum())
            .collect(),
        neg_left: rows
            .iter()
            .map(|(t, _)| t.iter().map(|&(_, c)| c.min(0)).sum())
            .collect(),
        assignment: vec![0u8; n],
        found: Vec::new(),
    };
    search.run(0);
    let mut out: Vec<AtomState> = search
        .found
        .into_iter()
        .map(|a| {
            AtomState(
                a.into_iter()
                    .map(|b| Rational::from_integer(i64::from(b).into()))
                    .collect(),
            )
        })
        .collect();
    out.sort();
    debug_assert!(logic.len() > 500 || out.iter().all(|s| s.check_state(logic).is_ok()));
    Ok(out)
}

struct Search<'a> {
    rhs: Vec<i64>,
    /// Per variable, the rows it appears in with its coefficient.
    touching: &'a [Vec<(usize, i64)>],
    current: Vec<i64>,
    pos_left: Vec<i64>,
    neg_left: Vec<i64>,
    assignment: Vec<u8>,
    found: Vec<Vec<u8>>,
}

impl Search<'_> {
    fn feasible(&self, r: usize) -> bool {
        let rhs = self.rhs[r];
        self.current[r] + self.neg_left[r] <= rhs && rhs <= self.current[r] + self.pos_left[r]
    }

    fn run(&mut self, var: usize) {
        if var == self.assignment.len() {
            self.found.push(self.assignment.clone());
            return;
        }
        for value in [0u8, 1] {
            for &(r, c) in &self.touching[var] {
                if c > 0 {
                    self.pos_left[r] -= c;
                } else {
                    self.neg_left[r] -= c;
                }
                self.current[r] += c * i64::from(value);
            }
            self.assignment[var] = value;
            if self.touching[var].iter().all(|&(r, _)| self.feasible(r)) {
                self.run(var + 1);
            }
            for &(r, c) in &self.touching[var] {
                if c > 0 {
                    self.pos_left[r] += c;
                } else {
                    self.neg_left[r] += c;
                }
                self.current[r] -= c * i64::from(value);
            }
        }
        self.assignment[var] = 0;
    }
}

/// A 0/1 table with exactly one certain joint outcome per context. The set
/// of certain outcomes is `O_chi`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct TwoValuedState {
    behavior: Behavior,
    support: Vec<JointOutcome>,
}

impl TwoValuedState {
    pub fn from_behavior(behavior: Behavior, world: &BoxWorld) -> Result<Self> {
        if !behavior.fits(world) {
            return Err(Error::Input("behavior does not match the box world".into()));
        }
        if !behavior.is_deterministic() {
            return Err(Error::NotAState(
                "table has entries other than 0 and 1".into(),
            ));
        }
        let support: Vec<JointOutcome> = world
            .joint_outcomes()
            .into_iter()
            .filter(|&o| behavior.get(o).is_one())
            .collect();
        Ok(TwoValuedState { behavior, support })
    }

    /// Builds the 0/1 table selecting one joint outcome per context without
    /// checking no-signaling; [`factorize_two_valued`] decides whether it is
    /// a state.
    pub fn from_support(world: &BoxWorld, support: Vec<JointOutcome>) -> Result<Self> {
        let mut seen = BTreeSet::new();
        for o in &support {
            if o.a >= world.left().input_count()
                || o.b >= world.right().input_count()
                || o.alpha >= world.left().outcomes(o.a)
                || o.beta >= world.right().outcomes(o.b)
            {
                return Err(Error::Input(format!(
                    "{o:?} is not a joint outcome of the world"
                )));
            }
            if !seen.insert((o.a, o.b)) {
                return Err(Error::Input(format!(
                    "context ({}, {}) selected twice",
                    o.a + 1,
                    o.b + 1
                )));
            }
        }
        if seen.len() != world.context_count() {
            return Err(Error::Input(
                "every context needs one selected outcome".into(),
            ));
        }
        let table = world
            .joint_outcomes()
            .iter()
            .map(|o| Rational::from_integer(i64::from(support.contains(o)).into()))
            .collect();
        let mut support = support;
        support.sort();
        Ok(TwoValuedState {
            behavior: Behavior::unchecked(world, table),
            support,
        })
    }

    pub fn behavior(&self) -> &Behavior {
        &self.behavior
    }

    pub fn support(&self) -> &[JointOutcome] {
        &self.support
    }

    fn selected(&self, a: usize, b: usize) -> JointOutcome {
        *self.support.iter().find(|o| (o.a, o.b) == (a, b)).unwrap()
    }
}

/// Two-valued states of the composite logic, as behaviors.
pub fn two_valued_states(composite: &TwoBoxLogic) -> Result<Vec<TwoValuedState>> {
    let world = composite.world();
    let logic = composite.logic();
    let questions = world
        .joint_outcomes()
        .into_iter()
        .map(|o| world.atom_event(o).and_then(|e| logic.require(&e)))
        .collect::<Result<Vec<_>>>()?;
    let mut out = enumerate_two_valued_states(logic)?
        .into_iter()
        .map(|s| {
            let table = questions
                .iter()
                .map(|&q| s.value(logic, q))
                .collect::<Result<Vec<_>>>()?;
            TwoValuedState::from_behavior(Behavior::from_flat(world, table)?, world)
        })
        .collect::<Result<Vec<_>>>()?;
    out.sort();
    Ok(out)
}

fn bracket(o: &JointOutcome) -> String {
    format!("[{} {}, {} {}]", o.a + 1, o.alpha, o.b + 1, o.beta)
}

/// Splits a two-valued state into deterministic component states whose
/// product it is.
///
/// If `[p, q]` and `[r, s]` are both certain then so are `[p, s]` and
/// `[r, q]`; the certain atoms then form a rectangle `O_1 x O_2`, and the
/// point measures selecting `O_1` and `O_2` multiply back to the input.
pub fn factorize_two_valued(chi: &TwoValuedState) -> Result<(ComponentState, ComponentState)> {
    let (left, right) = chi.behavior.shape();
    let (left, right) = (BoxSpec::new(left.to_vec())?, BoxSpec::new(right.to_vec())?);
    for pq in &chi.support {
        for rs in &chi.support {
            let ps = chi.selected(pq.a, rs.b);
            if ps.alpha != pq.alpha || ps.beta != rs.beta {
                return Err(Error::NotAState(format!(
                    "{} and {} are certain but {} is not, so the value of [{} {}, 1] differs between contexts ({}, {}) and ({}, {})",
                    bracket(pq),
                    bracket(rs),
                    bracket(&JointOutcome { a: pq.a, b: rs.b, alpha: pq.alpha, beta: rs.beta }),
                    pq.a + 1,
                    pq.alpha,
                    pq.a + 1,
                    pq.b + 1,
                    pq.a + 1,
                    rs.b + 1
                )));
            }
        }
    }
    let first_left: Vec<usize> = (0..left.input_count())
        .map(|a| chi.selected(a, 0).alpha)
        .collect();
    let first_right: Vec<usize> = (0..right.input_count())
        .map(|b| chi.selected(0, b).beta)
        .collect();
    let mu = ComponentState::deterministic(&left, &first_left)?;
    let nu = ComponentState::deterministic(&right, &first_right)?;
    let world = BoxWorld::new(left, right)?;
    let product = product_state(&world, &mu, &nu)?;
    if product.table() != chi.behavior.table() {
        return Err(Error::Invariant(
            "factors do not multiply back to the state".into(),
        ));
    }
    if chi
        .behavior
        .table()
        .iter()
        .any(|v| !v.is_zero() && !v.is_one())
    {
        return Err(Error::NotAState("table is not two-valued".into()));
    }
    Ok((mu, nu))
}
