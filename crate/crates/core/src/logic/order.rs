//! Lattice-theoretic queries on the poset (family, inclusion).

use super::{ConcreteLogic, EventId};
use crate::bits::Bits;

impl ConcreteLogic {
    /// Least upper bound of `p` and `q` in the family, if one exists.
    pub fn join(&self, p: EventId, q: EventId) -> Option<EventId> {
        let union = self.members(p).union(self.members(q));
        if let Some(id) = self.find(&union) {
            return Some(id);
        }
        // The intersection of all upper bounds is the only candidate.
        let mut candidate: Option<Bits> = None;
        for e in &self.events {
            if union.is_subset(&e.members) {
                candidate = Some(match candidate {
                    None => e.members.clone(),
                    Some(c) => c.intersection(&e.members),
                });
            }
        }
        self.find(&candidate?)
    }

    /// Greatest lower bound of `p` and `q` in the family, if one exists.
    pub fn meet(&self, p: EventId, q: EventId) -> Option<EventId> {
        let inter = self.members(p).intersection(self.members(q));
        if let Some(id) = self.find(&inter) {
            return Some(id);
        }
        let mut candidate = self.ground.empty_event();
        for e in &self.events {
            if e.members.is_subset(&inter) {
                candidate.union_with(&e.members);
            }
        }
        self.find(&candidate)
    }

    /// Every pair of elements has a least upper bound.
    pub fn is_lattice(&self) -> bool {
        let n = self.len();
        (0..n).all(|i| (i + 1..n).all(|j| self.join(EventId(i), EventId(j)).is_some()))
    }

    /// A distributive lattice. Families closed under intersection are fields
    /// of sets and hence Boolean; otherwise distributivity is checked on the
    /// join and meet tables.
    pub fn is_boolean(&self) -> bool {
        let n = self.len();
        let closed_under_meet = (0..n).all(|i| {
            (i + 1..n).all(|j| {
                self.contains(
                    &self
                        .members(EventId(i))
                        .intersection(self.members(EventId(j))),
                )
            })
        });
        if closed_under_meet {
            return true;
        }
        if !self.is_lattice() {
            return false;
        }
        let mut join = vec![0usize; n * n];
        let mut meet = vec![0usize; n * n];
        for i in 0..n {
            for j in 0..n {
                join[i * n + j] = self.join(EventId(i), EventId(j)).unwrap().0;
                meet[i * n + j] = match self.meet(EventId(i), EventId(j)) {
                    Some(m) => m.0,
                    None => return false,
                };
            }
        }
        (0..n).all(|a| {
            (0..n).all(|b| {
                (0..n).all(|c| {
                    meet[a * n + join[b * n + c]] == join[meet[a * n + b] * n + meet[a * n + c]]
                })
            })
        })
    }
}

#[cfg(test)]
mod tests {
    use super::super::tests::single_box_2x2;
    use super::super::{GroundSet, DEFAULT_BUDGET};
    use super::*;

    #[test]
    fn powerset_is_boolean() {
        let g = GroundSet::plain(3);
        let gens: Vec<_> = (0..3).map(|i| g.event(&[i]).unwrap()).collect();
        let l = ConcreteLogic::generate(g, &gens, DEFAULT_BUDGET).unwrap();
        assert!(l.is_lattice());
        assert!(l.is_boolean());
    }

    #[test]
    fn single_box_is_a_non_distributive_lattice() {
        // The horizontal sum of two four-element Boolean algebras.
        let l = single_box_2x2();
        assert!(l.is_lattice());
        assert!(!l.is_boolean());
        let a = l.atoms()[0];
        let b = *l
            .atoms()
            .iter()
            .find(|&&b| b != a && !l.members(a).is_disjoint(l.members(b)))
            .unwrap();
        assert_eq!(l.join(a, b), l.top());
        assert_eq!(l.meet(a, b), l.bottom());
    }
}
