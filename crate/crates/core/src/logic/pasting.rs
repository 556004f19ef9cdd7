//! 0-1 pastings and isomorphism of finite orthoposets.

use super::{ConcreteLogic, GroundSet, Point};
use crate::bits::Bits;
use crate::error::{Error, Result};

/// A finite bounded poset with an orthocomplementation, stored as explicit
/// relation tables.
#[derive(Clone, Debug)]
pub struct Orthoposet {
    /// `up[i]` holds every `j` with `i <= j`.
    up: Vec<Bits>,
    complement: Vec<usize>,
}

impl Orthoposet {
    pub fn new(up: Vec<Bits>, complement: Vec<usize>) -> Result<Self> {
        let n = up.len();
        if complement.len() != n
            || up.iter().any(|u| u.width() != n)
            || complement.iter().any(|&c| c >= n)
        {
            return Err(Error::Input(
                "relation tables do not match the element count".into(),
            ));
        }
        Ok(Orthoposet { up, complement })
    }

    pub fn len(&self) -> usize {
        self.up.len()
    }

    pub fn is_empty(&self) -> bool {
        self.up.is_empty()
    }

    pub fn leq(&self, i: usize, j: usize) -> bool {
        self.up[i].contains(j)
    }

    pub fn complement(&self, i: usize) -> usize {
        self.complement[i]
    }

    fn profile(&self, i: usize) -> (usize, usize) {
        let above = self.up[i].len();
        let below = (0..self.len()).filter(|&j| self.leq(j, i)).count();
        (below, above)
    }

    /// The disjoint union of the blocks with all least elements identified
    /// and all greatest elements identified. Element 0 is the shared bottom,
    /// element 1 the shared top.
    pub fn abstract_pasting(blocks: &[ConcreteLogic]) -> Result<Self> {
        if blocks.is_empty() {
            return Err(Error::Input("a pasting needs at least one block".into()));
        }
        // (block, element) for the proper elements of each block.
        let mut proper = Vec::new();
        for (b, block) in blocks.iter().enumerate() {
            for id in block.ids() {
                let m = block.members(id);
                if !m.is_empty() && !m.is_full() {
                    proper.push((b, id));
                }
            }
        }
        let n = 2 + proper.len();
        let mut up = vec![Bits::empty(n); n];
        up[0] = Bits::full(n);
        up[1].insert(1);
        let mut complement = vec![1, 0];
        for (i, &(b, p)) in proper.iter().enumerate() {
            up[2 + i].insert(1);
            for (j, &(c, q)) in proper.iter().enumerate() {
                if b == c && blocks[b].members(p).is_subset(blocks[b].members(q)) {
                    up[2 + i].insert(2 + j);
                }
            }
            let pc = blocks[b]
                .complement_id(p)
                .ok_or_else(|| Error::Input(format!("block {b} is not closed under complement")))?;
            let j = proper.iter().position(|&x| x == (b, pc)).unwrap();
            complement.push(2 + j);
        }
        Orthoposet::new(up, complement)
    }
}

impl ConcreteLogic {
    /// The logic as an abstract orthoposet, preserving element indices.
    pub fn orthoposet(&self) -> Result<Orthoposet> {
        let n = self.len();
        let mut up = Vec::with_capacity(n);
        let mut complement = Vec::with_capacity(n);
        for p in self.ids() {
            up.push(Bits::from_predicate(n, |j| {
                self.members(p).is_subset(&self.events[j].members)
            }));
            let c = self.complement_id(p).ok_or_else(|| {
                Error::Input(format!(
                    "element {} has no complement",
                    self.members(p).to_hex()
                ))
            })?;
            complement.push(c.0);
        }
        Orthoposet::new(up, complement)
    }
}

/// Concrete realization of the 0-1 pasting of Boolean powersets over the
/// product of their ground sets: the empty set, the whole space, and every
/// cylinder `{x : x_a in A}` for a proper nonempty subset `A` of block `a`.
pub fn zero_one_pasting(blocks: &[ConcreteLogic]) -> Result<ConcreteLogic> {
    if blocks.is_empty() {
        return Err(Error::Input("a pasting needs at least one block".into()));
    }
    for (a, block) in blocks.iter().enumerate() {
        let k = block.ground().len();
        if k >= usize::BITS as usize || block.len() != 1usize << k {
            return Err(Error::Input(format!(
                "block {a} is not the powerset of its ground set"
            )));
        }
    }
    let sizes: Vec<usize> = blocks.iter().map(|b| b.ground().len()).collect();
    let ground = GroundSet::single_box(&sizes)?;
    let mut family = vec![ground.empty_event(), ground.full_event()];
    for (a, block) in blocks.iter().enumerate() {
        for e in block.events() {
            if e.members.is_empty() || e.members.is_full() {
                continue;
            }
            family.push(
                ground.event_where(|p| matches!(p, Point::Tuple(x) if e.members.contains(x[a]))),
            );
        }
    }
    ConcreteLogic::from_family_unchecked(ground, family)
}

/// Searches for a bijection preserving order and orthocomplement.
pub fn are_isomorphic(a: &Orthoposet, b: &Orthoposet, budget: usize) -> Result<bool> {
    if a.len().max(b.len()) > budget {
        return Err(Error::Budget(format!(
            "isomorphism search over {} elements",
            a.len().max(b.len())
        )));
    }
    if a.len() != b.len() {
        return Ok(false);
    }
    let n = a.len();
    let pa: Vec<_> = (0..n).map(|i| a.profile(i)).collect();
    let pb: Vec<_> = (0..n).map(|i| b.profile(i)).collect();
    let mut sa = pa.clone();
    let mut sb = pb.clone();
    sa.sort_unstable();
    sb.sort_unstable();
    if sa != sb {
        return Ok(false);
    }
    // Most constrained elements first: those with the rarest profile.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&i| (pa.iter().filter(|&&p| p == pa[i]).count(), i));
    let mut map = vec![usize::MAX; n];
    let mut used = vec![false; n];
    Ok(extend(a, b, &pa, &pb, &order, 0, &mut map, &mut used))
}

fn consistent(a: &Orthoposet, b: &Orthoposet, map: &[usize], i: usize, j: usize) -> bool {
    (0..a.len())
        .filter(|&k| map[k] != usize::MAX)
        .all(|k| a.leq(i, k) == b.leq(j, map[k]) && a.leq(k, i) == b.leq(map[k], j))
}

#[allow(clippy::too_many_arguments)]
fn extend(
    a: &Orthoposet,
    b: &Orthoposet,
    pa: &[(usize, usize)],
    pb: &[(usize, usize)],
    order: &[usize],
    depth: usize,
    map: &mut Vec<usize>,
    used: &mut Vec<bool>,
) -> bool {
    let Some(&i) = order[depth..].iter().find(|&&i| map[i] == usize::MAX) else {
        return true;
    };
    let ic = a.complement(i);
    for j in 0..b.len() {
        if used[j] || pb[j] != pa[i] {
            continue;
        }
        let jc = b.complement(j);
        if (ic == i) != (jc == j) || pb[jc] != pa[ic] {
            continue;
        }
        if ic != i && (map[ic] != usize::MAX || used[jc]) {
            continue;
        }
        if !consistent(a, b, map, i, j) {
            continue;
        }
        map[i] = j;
        used[j] = true;
        let paired = ic != i;
        if paired {
            if !consistent(a, b, map, ic, jc) {
                map[i] = usize::MAX;
                used[j] = false;
                continue;
            }
            map[ic] = jc;
            used[jc] = true;
        }
        if extend(a, b, pa, pb, order, depth, map, used) {
            return true;
        }
        map[i] = usize::MAX;
        used[j] = false;
        if paired {
            map[ic] = usize::MAX;
            used[jc] = false;
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::super::tests::single_box_2x2;
    use super::super::DEFAULT_BUDGET;
    use super::*;

    fn powerset(k: usize) -> ConcreteLogic {
        let g = GroundSet::plain(k);
        let gens: Vec<_> = (0..k).map(|i| g.event(&[i]).unwrap()).collect();
        ConcreteLogic::generate(g, &gens, DEFAULT_BUDGET).unwrap()
    }

    #[test]
    fn pasting_sizes() {
        assert_eq!(zero_one_pasting(&[powerset(2)]).unwrap().len(), 4);
        assert_eq!(
            zero_one_pasting(&[powerset(2), powerset(2)]).unwrap().len(),
            6
        );
        assert_eq!(
            zero_one_pasting(&[powerset(3), powerset(3), powerset(3)])
                .unwrap()
                .len(),
            20
        );
        assert!(zero_one_pasting(&[]).is_err());
    }

    #[test]
    fn non_boolean_block_is_rejected() {
        assert!(zero_one_pasting(&[single_box_2x2()]).is_err());
    }

    #[test]
    fn concrete_and_abstract_pastings_agree() {
        let blocks = [powerset(2), powerset(3)];
        let concrete = zero_one_pasting(&blocks).unwrap().orthoposet().unwrap();
        let abstract_view = Orthoposet::abstract_pasting(&blocks).unwrap();
        assert!(are_isomorphic(&concrete, &abstract_view, DEFAULT_BUDGET).unwrap());
    }

    #[test]
    fn isomorphism_distinguishes_size_and_shape() {
        let six = single_box_2x2().orthoposet().unwrap();
        assert!(are_isomorphic(&six, &six, DEFAULT_BUDGET).unwrap());
        assert!(!are_isomorphic(&six, &powerset(3).orthoposet().unwrap(), DEFAULT_BUDGET).unwrap());
        // Two incompatible four-element blocks realized over other points.
        let g = GroundSet::plain(4);
        let family = [
            vec![],
            vec![0, 1],
            vec![2, 3],
            vec![0, 2],
            vec![1, 3],
            vec![0, 1, 2, 3],
        ]
        .iter()
        .map(|s| g.event(s).unwrap())
        .collect();
        let other = ConcreteLogic::from_family_unchecked(g, family)
            .unwrap()
            .orthoposet()
            .unwrap();
        assert!(are_isomorphic(&six, &other, DEFAULT_BUDGET).unwrap());
        assert!(matches!(
            are_isomorphic(&six, &other, 3),
            Err(Error::Budget(_))
        ));
        // Eight elements each, but three blocks versus one.
        let three_blocks = zero_one_pasting(&[powerset(2), powerset(2), powerset(2)]).unwrap();
        assert_eq!(three_blocks.len(), 8);
        assert!(!are_isomorphic(
            &three_blocks.orthoposet().unwrap(),
            &powerset(3).orthoposet().unwrap(),
            DEFAULT_BUDGET
        )
        .unwrap());
    }
}
