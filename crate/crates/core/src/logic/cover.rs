//! Decomposition of elements into pairwise disjoint atoms.

use super::{ConcreteLogic, EventId};
use crate::bits::Bits;
use crate::error::{Error, Result};

impl ConcreteLogic {
    /// Depth-first exact-cover search of `target` by atoms, branching on the
    /// uncovered point with the fewest candidate atoms. `visit` receives each
    /// cover as positions into [`atoms`](Self::atoms) and returns `false` to
    /// stop the search.
    pub fn for_each_atom_cover(&self, target: &Bits, mut visit: impl FnMut(&[usize]) -> bool) {
        let candidates: Vec<usize> = (0..self.atoms.len())
            .filter(|&i| self.members(self.atoms[i]).is_subset(target))
            .collect();
        let mut chosen = Vec::new();
        self.cover_search(target.clone(), &candidates, &mut chosen, &mut visit);
    }

    fn cover_search(
        &self,
        uncovered: Bits,
        candidates: &[usize],
        chosen: &mut Vec<usize>,
        visit: &mut impl FnMut(&[usize]) -> bool,
    ) -> bool {
        if uncovered.is_empty() {
            return visit(chosen);
        }
        let mut best: Option<(usize, Vec<usize>)> = None;
        for point in uncovered.ones() {
            let options: Vec<usize> = candidates
                .iter()
                .copied()
                .filter(|&i| {
                    let m = self.members(self.atoms[i]);
                    m.contains(point) && m.is_subset(&uncovered)
                })
                .collect();
            if best.as_ref().is_none_or(|(_, b)| options.len() < b.len()) {
                let done = options.is_empty();
                best = Some((point, options));
                if done {
                    break;
                }
            }
        }
        let (_, options) = best.unwrap();
        for i in options {
            chosen.push(i);
            let rest = uncovered.difference(self.members(self.atoms[i]));
            let go_on = self.cover_search(rest, candidates, chosen, visit);
            chosen.pop();
            if !go_on {
                return false;
            }
        }
        true
    }

    /// Every decomposition of `target` into pairwise disjoint atoms.
    pub fn atom_covers(&self, target: &Bits) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        self.for_each_atom_cover(target, |c| {
            let mut c = c.to_vec();
            c.sort_unstable();
            out.push(c);
            true
        });
        out.sort();
        out.dedup();
        out
    }

    /// One fixed decomposition per element, computed once and cached.
    /// Entries are `None` only for elements that are not disjoint unions of
    /// atoms, which cannot happen in a finite concrete logic.
    pub fn canonical_covers(&self) -> &[Option<Vec<usize>>] {
        self.covers.get_or_init(|| {
            self.events
                .iter()
                .map(|e| {
                    let mut found = None;
                    self.for_each_atom_cover(&e.members, |c| {
                        let mut c = c.to_vec();
                        c.sort_unstable();
                        found = Some(c);
                        false
                    });
                    found
                })
                .collect()
        })
    }

    pub fn canonical_cover(&self, id: EventId) -> Result<&[usize]> {
        self.canonical_covers()[id.0].as_deref().ok_or_else(|| {
            Error::Invariant(format!(
                "element {id} has no decomposition into disjoint atoms"
            ))
        })
    }
}
