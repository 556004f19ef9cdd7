//! Compatibility of elements and regularity.

use super::{ConcreteLogic, EventId, DEFAULT_BUDGET};
use crate::bits::Bits;
use crate::error::Result;

/// A pairwise disjoint family inside the logic that partitions the ground
/// set and refines every element of a compatible set.
#[derive(Clone, Debug)]
pub struct CompatibilityWitness {
    pub blocks: Vec<EventId>,
}

impl CompatibilityWitness {
    /// The Boolean sublogic generated by the blocks.
    pub fn sublogic(&self, logic: &ConcreteLogic) -> Result<ConcreteLogic> {
        let gens: Vec<Bits> = self
            .blocks
            .iter()
            .map(|&b| logic.members(b).clone())
            .collect();
        ConcreteLogic::generate(logic.ground().clone(), &gens, DEFAULT_BUDGET)
    }
}

impl ConcreteLogic {
    /// In a concrete logic the decomposition `p = p1 + r`, `q = q1 + r` is
    /// forced to `r = p & q`, so compatibility is membership of the
    /// intersection. `p \ q` is then `(p^c + (p & q))^c`, also a member.
    pub fn is_compatible(&self, p: &Bits, q: &Bits) -> Result<bool> {
        self.require(p)?;
        self.require(q)?;
        let compatible = self.contains(&p.intersection(q));
        debug_assert!(
            self.len() > 100
                || compatible
                    == self.compatible_by_search(self.find(p).unwrap(), self.find(q).unwrap())
        );
        Ok(compatible)
    }

    pub(crate) fn compatible_ids(&self, p: EventId, q: EventId) -> bool {
        self.contains(&self.members(p).intersection(self.members(q)))
    }

    /// Direct search for pairwise disjoint `p1, q1, r` in the family with
    /// `p = p1 | r` and `q = q1 | r`. Cubic in the size of the logic.
    pub fn compatible_by_search(&self, p: EventId, q: EventId) -> bool {
        let (p, q) = (self.members(p), self.members(q));
        let candidates: Vec<&Bits> = self.events.iter().map(|e| &e.members).collect();
        candidates
            .iter()
            .filter(|r| r.is_subset(p) && r.is_subset(q))
            .any(|r| {
                candidates
                    .iter()
                    .filter(|p1| p1.is_disjoint(r) && &p1.union(r) == p)
                    .any(|p1| {
                        candidates
                            .iter()
                            .any(|q1| q1.is_disjoint(r) && q1.is_disjoint(p1) && &q1.union(r) == q)
                    })
            })
    }

    /// Decides whether `set` is compatible and, if so, returns the partition
    /// generated by it. A finite set is compatible exactly when every
    /// nonempty cell `p_1^{s_1} & .. & p_k^{s_k}` is an element: any
    /// refining disjoint family, completed by the complement of its union,
    /// has these cells as disjoint unions of its members.
    pub fn is_set_compatible(&self, set: &[&Bits]) -> Result<Option<CompatibilityWitness>> {
        for p in set {
            self.require(p)?;
        }
        let mut cells = vec![self.ground.full_event()];
        for p in set {
            let mut next = Vec::with_capacity(cells.len() * 2);
            for c in &cells {
                let inside = c.intersection(p);
                let outside = c.difference(p);
                for part in [inside, outside] {
                    if !part.is_empty() {
                        next.push(part);
                    }
                }
            }
            cells = next;
        }
        let mut blocks = Vec::with_capacity(cells.len());
        for c in &cells {
            match self.find(c) {
                Some(id) => blocks.push(id),
                None => return Ok(None),
            }
        }
        blocks.sort();
        Ok(Some(CompatibilityWitness { blocks }))
    }

    /// Rows of the compatibility relation, indexed by element.
    pub fn compatibility_matrix(&self) -> Vec<Bits> {
        let n = self.len();
        let mut rows = vec![Bits::empty(n); n];
        for i in 0..n {
            for j in i..n {
                if self.compatible_ids(EventId(i), EventId(j)) {
                    rows[i].insert(j);
                    rows[j].insert(i);
                }
            }
        }
        rows
    }

    /// Every triple of mutually compatible elements `a, b, c` satisfies
    /// `a <-> b v c`. Returns the first failing triple, if any.
    pub fn regularity_counterexample(&self) -> Option<(EventId, EventId, EventId)> {
        let compat = self.compatibility_matrix();
        let n = self.len();
        for b in 0..n {
            for c in compat[b].ones().filter(|&c| c > b) {
                let Some(join) = self.join(EventId(b), EventId(c)) else {
                    return Some((EventId(b), EventId(b), EventId(c)));
                };
                if let Some(a) = compat[b].first_outside(&compat[c], &compat[join.0]) {
                    return Some((EventId(a), EventId(b), EventId(c)));
                }
            }
        }
        None
    }

    pub fn is_regular(&self) -> bool {
        self.regularity_counterexample().is_none()
    }
}

/// Decides compatibility of a finite set from pairwise compatibility only.
/// Agrees with [`ConcreteLogic::is_set_compatible`] on regular logics.
pub fn pairwise_compatible(logic: &ConcreteLogic, set: &[EventId]) -> bool {
    set.iter()
        .enumerate()
        .all(|(i, &p)| set[i + 1..].iter().all(|&q| logic.compatible_ids(p, q)))
}
