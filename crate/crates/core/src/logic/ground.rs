use serde::Serialize;

use crate::bits::Bits;
use crate::error::{Error, Result};

/// Factor structure of a ground set.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Shape {
    /// Points carry no internal structure.
    Plain,
    /// Points are tuples `(x_1, .., x_N)` with `x_a < outcome_sizes[a]`.
    Box { outcome_sizes: Vec<usize> },
    /// Points are pairs of tuples, one per box.
    Composite { left: Vec<usize>, right: Vec<usize> },
}

/// A decoded point of a ground set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Point {
    Index(usize),
    Tuple(Vec<usize>),
    Pair(Vec<usize>, Vec<usize>),
}

/// An enumerated finite set of configurations.
///
/// Tuples use a mixed-radix index with the first input most significant;
/// composite points are indexed `left * |right space| + right`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroundSet {
    len: usize,
    shape: Shape,
}

fn radix_len(sizes: &[usize]) -> usize {
    sizes.iter().product()
}

fn radix_decode(sizes: &[usize], mut index: usize) -> Vec<usize> {
    let mut digits = vec![0; sizes.len()];
    for (slot, &k) in digits.iter_mut().zip(sizes).rev() {
        *slot = index % k;
        index /= k;
    }
    digits
}

fn radix_encode(sizes: &[usize], digits: &[usize]) -> Option<usize> {
    if digits.len() != sizes.len() {
        return None;
    }
    let mut index = 0;
    for (&d, &k) in digits.iter().zip(sizes) {
        if d >= k {
            return None;
        }
        index = index * k + d;
    }
    Some(index)
}

fn check_sizes(sizes: &[usize]) -> Result<()> {
    if sizes.is_empty() {
        return Err(Error::Input("a box needs at least one input".into()));
    }
    if let Some(a) = sizes.iter().position(|&k| k == 0) {
        return Err(Error::Input(format!("input {} has no outcomes", a + 1)));
    }
    Ok(())
}

impl GroundSet {
    pub fn plain(len: usize) -> Self {
        GroundSet {
            len,
            shape: Shape::Plain,
        }
    }

    pub fn single_box(outcome_sizes: &[usize]) -> Result<Self> {
        check_sizes(outcome_sizes)?;
        Ok(GroundSet {
            len: radix_len(outcome_sizes),
            shape: Shape::Box {
                outcome_sizes: outcome_sizes.to_vec(),
            },
        })
    }

    pub fn composite(left: &[usize], right: &[usize]) -> Result<Self> {
        check_sizes(left)?;
        check_sizes(right)?;
        Ok(GroundSet {
            len: radix_len(left) * radix_len(right),
            shape: Shape::Composite {
                left: left.to_vec(),
                right: right.to_vec(),
            },
        })
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn shape(&self) -> &Shape {
        &self.shape
    }

    pub fn decode(&self, index: usize) -> Option<Point> {
        if index >= self.len {
            return None;
        }
        Some(match &self.shape {
            Shape::Plain => Point::Index(index),
            Shape::Box { outcome_sizes } => Point::Tuple(radix_decode(outcome_sizes, index)),
            Shape::Composite { left, right } => {
                let width = radix_len(right);
                Point::Pair(
                    radix_decode(left, index / width),
                    radix_decode(right, index % width),
                )
            }
        })
    }

    pub fn encode(&self, point: &Point) -> Option<usize> {
        match (&self.shape, point) {
            (Shape::Plain, Point::Index(i)) => (*i < self.len).then_some(*i),
            (Shape::Box { outcome_sizes }, Point::Tuple(x)) => radix_encode(outcome_sizes, x),
            (Shape::Composite { left, right }, Point::Pair(x, y)) => {
                Some(radix_encode(left, x)? * radix_len(right) + radix_encode(right, y)?)
            }
            _ => None,
        }
    }

    pub fn empty_event(&self) -> Bits {
        Bits::empty(self.len)
    }

    pub fn full_event(&self) -> Bits {
        Bits::full(self.len)
    }

    /// The event with the given member indices.
    pub fn event(&self, members: &[usize]) -> Result<Bits> {
        Bits::from_indices(self.len, members.iter().copied()).ok_or_else(|| {
            Error::Input(format!(
                "member index out of range for a ground set of {} points",
                self.len
            ))
        })
    }

    pub fn event_where(&self, mut pred: impl FnMut(&Point) -> bool) -> Bits {
        Bits::from_predicate(self.len, |i| pred(&self.decode(i).unwrap()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn first_input_is_most_significant() {
        let g = GroundSet::single_box(&[2, 3]).unwrap();
        assert_eq!(g.len(), 6);
        assert_eq!(g.decode(1), Some(Point::Tuple(vec![0, 1])));
        assert_eq!(g.decode(3), Some(Point::Tuple(vec![1, 0])));
        assert_eq!(g.decode(6), None);
    }

    #[test]
    fn composite_index_is_left_major() {
        let g = GroundSet::composite(&[2, 2], &[3]).unwrap();
        assert_eq!(g.len(), 12);
        assert_eq!(g.decode(4), Some(Point::Pair(vec![0, 1], vec![1])));
        assert_eq!(g.encode(&Point::Pair(vec![1, 1], vec![2])), Some(11));
        assert_eq!(g.encode(&Point::Pair(vec![1, 2], vec![0])), None);
    }

    #[test]
    fn rejects_empty_boxes_and_outcome_sets() {
        assert!(GroundSet::single_box(&[]).is_err());
        assert!(GroundSet::single_box(&[2, 0]).is_err());
        assert!(GroundSet::plain(3).event(&[3]).is_err());
    }

    proptest! {
        #[test]
        fn decode_encode_is_identity(
            left in proptest::collection::vec(1usize..4, 1..4),
            right in proptest::collection::vec(1usize..4, 1..4),
        ) {
            let g = GroundSet::composite(&left, &right).unwrap();
            let mut seen = std::collections::HashSet::new();
            for i in 0..g.len() {
                let p = g.decode(i).unwrap();
                prop_assert_eq!(g.encode(&p), Some(i));
                let key = format!("{:?}", p);
                prop_assert!(seen.insert(key));
            }
        }
    }
}
