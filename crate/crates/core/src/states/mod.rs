//! States on finite logics and on box-world logics.
//!
//! A state is stored by its values on atoms; the value of any other element
//! is the sum over a decomposition into pairwise disjoint atoms. Whether that
//! sum is independent of the decomposition is checked, not assumed.

mod behavior;
pub(crate) mod linalg;
mod polytope;
mod two_valued;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::bits::Bits;
use crate::error::{Error, Result};
use crate::logic::{ConcreteLogic, EventId};

pub use behavior::{
    chsh_value, component_two_valued_states, parse_rational, pr_box_state, product_state, Behavior,
    ComponentState,
};
pub use polytope::{
    enumerate_vertices, ns_polytope, polytope_vertices, ConeProblem, LinearRow, StatePolytope,
};
pub use two_valued::{
    enumerate_two_valued_states, factorize_two_valued, logic_state_equations, two_valued_states,
    TwoValuedState,
};

pub type Rational = BigRational;

pub fn rational(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Elements (by index) on which a state vanishes or is certain.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LevelSets {
    pub zero: Bits,
    pub one: Bits,
}

/// Values of a state on the atoms of a logic, by atom position.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AtomState(pub Vec<Rational>);

impl AtomState {
    pub fn sum_over(&self, cover: &[usize]) -> Rational {
        cover.iter().map(|&i| &self.0[i]).sum()
    }

    /// Value on an element, through its cached decomposition into atoms.
    pub fn value(&self, logic: &ConcreteLogic, id: EventId) -> Result<Rational> {
        Ok(self.sum_over(logic.canonical_cover(id)?))
    }

    pub fn value_of(&self, logic: &ConcreteLogic, p: &Bits) -> Result<Rational> {
        self.value(logic, logic.require(p)?)
    }

    /// Values on every element, in element order.
    pub fn values(&self, logic: &ConcreteLogic) -> Result<Vec<Rational>> {
        logic.ids().map(|id| self.value(logic, id)).collect()
    }

    /// Elements on which the state is 0 and elements on which it is 1.
    ///
    /// Atom values are put over a common denominator and summed as machine
    /// integers when they fit, with exact rationals as the fallback.
    pub fn level_sets(&self, logic: &ConcreteLogic) -> Result<LevelSets> {
        let n = logic.len();
        let mut zero = Bits::empty(n);
        let mut one = Bits::empty(n);
        if let Some((scaled, denom)) = self.scaled() {
            for id in logic.ids() {
                let sum: i128 = logic.canonical_cover(id)?.iter().map(|&i| scaled[i]).sum();
                if sum == 0 {
                    zero.insert(id.0);
                } else if sum == denom {
                    one.insert(id.0);
                }
            }
        } else {
            for (i, v) in self.values(logic)?.iter().enumerate() {
                if v.is_zero() {
                    zero.insert(i);
                } else if v.is_one() {
                    one.insert(i);
                }
            }
        }
        Ok(LevelSets { zero, one })
    }

    /// Atom values as integers over a common denominator, when every
    /// partial sum is guaranteed to fit.
    fn scaled(&self) -> Option<(Vec<i128>, i128)> {
        let mut denom = BigInt::one();
        for v in &self.0 {
            denom = denom.lcm(v.denom());
        }
        let scaled: Vec<BigInt> = self
            .0
            .iter()
            .map(|v| v.numer() * (&denom / v.denom()))
            .collect();
        let bound = i128::MAX / (self.0.len() as i128 + 1);
        let fits = |x: &BigInt| x.to_i128().is_some_and(|y| y.abs() < bound);
        if !fits(&denom) || !scaled.iter().all(fits) {
            return None;
        }
        Some((
            scaled.iter().map(|x| x.to_i128().unwrap()).collect(),
            denom.to_i128().unwrap(),
        ))
    }

    /// Distinct values taken over every decomposition of `p` into disjoint
    /// atoms. A well-defined state yields exactly one.
    pub fn values_over_all_covers(&self, logic: &ConcreteLogic, p: &Bits) -> Vec<Rational> {
        let mut seen: Vec<Rational> = Vec::new();
        logic.for_each_atom_cover(p, |cover| {
            let v = self.sum_over(cover);
            if !seen.contains(&v) {
                seen.push(v);
            }
            true
        });
        seen
    }

    /// Checks normalization, range and additivity on every disjoint pair.
    pub fn check_state(&self, logic: &ConcreteLogic) -> Result<()> {
        if self.0.len() != logic.atoms().len() {
            return Err(Error::Input(format!(
                "{} atom values for a logic with {} atoms",
                self.0.len(),
                logic.atoms().len()
            )));
        }
        let values = self.values(logic)?;
        let top = logic
            .top()
            .ok_or_else(|| Error::NotAState("logic has no greatest element".into()))?;
        if !values[top.0].is_one() {
            return Err(Error::NotAState(format!(
                "value on the whole space is {}",
                values[top.0]
            )));
        }
        for (i, v) in values.iter().enumerate() {
            if v < &Rational::zero() || v > &Rational::one() {
                return Err(Error::NotAState(format!(
                    "value {v} on {}",
                    logic.members(EventId(i)).to_hex()
                )));
            }
        }
        for i in 0..logic.len() {
            for j in i + 1..logic.len() {
                let (p, q) = (logic.members(EventId(i)), logic.members(EventId(j)));
                if !p.is_disjoint(q) {
                    continue;
                }
                if let Some(r) = logic.find(&p.union(q)) {
                    if values[r.0] != &values[i] + &values[j] {
                        return Err(Error::NotAState(format!(
                            "not additive on {} + {}",
                            p.to_hex(),
                            q.to_hex()
                        )));
                    }
                }
            }
        }
        Ok(())
    }
}

/// For each element, the set of states (by index) taking value 1 on it.
fn certainty_sets(states: &[AtomState], logic: &ConcreteLogic) -> Result<Vec<Bits>> {
    let mut sets = vec![Bits::empty(states.len()); logic.len()];
    for (s, state) in states.iter().enumerate() {
        for e in state.level_sets(logic)?.one.ones() {
            sets[e].insert(s);
        }
    }
    Ok(sets)
}

/// A pair `a`, `b` with `a` not below `b` although every state certain of
/// `a` is certain of `b`; `None` when the states are rich.
///
/// When every element decomposes into atoms it suffices to test atoms `a`:
/// if `a` is not below `b`, neither is some atom `x` of its decomposition,
/// and a state certain of `x` but not of `b` is certain of `a`.
pub fn richness_counterexample(
    states: &[AtomState],
    logic: &ConcreteLogic,
) -> Result<Option<(EventId, EventId)>> {
    let sets = certainty_sets(states, logic)?;
    let decomposable = logic.canonical_covers().iter().all(Option::is_some);
    let candidates: Vec<EventId> = if decomposable {
        logic.atoms().to_vec()
    } else {
        logic.ids().collect()
    };
    for a in candidates {
        for b in logic.ids() {
            if sets[a.0].is_subset(&sets[b.0]) && !logic.members(a).is_subset(logic.members(b)) {
                return Ok(Some((a, b)));
            }
        }
    }
    Ok(None)
}

/// The certainty sets of `states` determine the order of the logic.
pub fn is_rich(states: &[AtomState], logic: &ConcreteLogic) -> Result<bool> {
    Ok(richness_counterexample(states, logic)?.is_none())
}

/// Elements on which every state of `states` vanishes.
pub fn common_null_events(states: &[AtomState], logic: &ConcreteLogic) -> Result<Bits> {
    let mut null = Bits::full(logic.len());
    for state in states {
        null = null.intersection(&state.level_sets(logic)?.zero);
    }
    Ok(null)
}

/// `mu` vanishes wherever every state of `states` vanishes.
pub fn is_superposition(
    mu: &AtomState,
    states: &[AtomState],
    logic: &ConcreteLogic,
) -> Result<bool> {
    let null = common_null_events(states, logic)?;
    for e in null.ones() {
        if !mu.value(logic, EventId(e))?.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Indices of the candidates that are superpositions of `states`.
pub fn superposition_closure_members(
    candidates: &[AtomState],
    states: &[AtomState],
    logic: &ConcreteLogic,
) -> Result<Vec<usize>> {
    let null = common_null_events(states, logic)?;
    let mut out = Vec::new();
    for (i, mu) in candidates.iter().enumerate() {
        if null.is_subset(&mu.level_sets(logic)?.zero) {
            out.push(i);
        }
    }
    Ok(out)
}
