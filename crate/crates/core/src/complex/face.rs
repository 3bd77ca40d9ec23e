use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest supported vertex label.
pub const MAX_VERTEX: usize = 64;

/// A face: a finite set of vertices from `1..=64`, stored as a bitmask.
///
/// Faces are ordered lexicographically by their increasing vertex lists, so
/// `{1,2} < {1,2,3} < {1,3} < {2}`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Face(u64);

impl Face {
    pub const EMPTY: Face = Face(0);

    pub fn new(vertices: &[usize]) -> Result<Face> {
        let mut bits = 0u64;
        for &v in vertices {
            if v == 0 || v > MAX_VERTEX {
                return Err(Error::InvalidComplex(format!(
                    "vertex {v} outside the supported range 1..={MAX_VERTEX}"
                )));
            }
            bits |= 1 << (v - 1);
        }
        Ok(Face(bits))
    }

    /// Panicking constructor for literal faces.
    pub fn of(vertices: &[usize]) -> Face {
        Face::new(vertices).expect("valid face")
    }

    pub fn vertex(v: usize) -> Face {
        Face::of(&[v])
    }

    pub fn from_bits(bits: u64) -> Face {
        Face(bits)
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    /// `{1, ..., n}`.
    pub fn full(n: usize) -> Face {
        if n >= 64 {
            Face(u64::MAX)
        } else {
            Face((1u64 << n) - 1)
        }
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, v: usize) -> bool {
        v >= 1 && v <= MAX_VERTEX && self.0 >> (v - 1) & 1 == 1
    }

    pub fn vertices(self) -> Vertices {
        Vertices(self.0)
    }

    pub fn to_vec(self) -> Vec<usize> {
        self.vertices().collect()
    }

    pub fn max_vertex(self) -> usize {
        64 - self.0.leading_zeros() as usize
    }

    pub fn union(self, other: Face) -> Face {
        Face(self.0 | other.0)
    }

    pub fn intersection(self, other: Face) -> Face {
        Face(self.0 & other.0)
    }

    pub fn minus(self, other: Face) -> Face {
        Face(self.0 & !other.0)
    }

    pub fn is_subset(self, other: Face) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn is_disjoint(self, other: Face) -> bool {
        self.0 & other.0 == 0
    }

    pub fn with(self, v: usize) -> Face {
        self.union(Face::vertex(v))
    }

    pub fn without(self, v: usize) -> Face {
        self.minus(Face::vertex(v))
    }

    /// Zero-based position of `v` among the vertices of the face.
    pub fn position(self, v: usize) -> Option<usize> {
        if !self.contains(v) {
            return None;
        }
        let below = self.0 & ((1u64 << (v - 1)) - 1);
        Some(below.count_ones() as usize)
    }

    /// All subsets, including the empty face and the face itself.
    pub fn subsets(self) -> impl Iterator<Item = Face> {
        let full = self.0;
        let mut sub = Some(full);
        std::iter::from_fn(move || {
            let cur = sub?;
            sub = if cur == 0 { None } else { Some((cur - 1) & full) };
            Some(Face(cur))
        })
    }

    pub fn subsets_of_size(self, k: usize) -> impl Iterator<Item = Face> {
        self.subsets().filter(move |f| f.len() == k)
    }

    /// Codimension-one faces with the boundary sign `(-1)^i` for removing the
    /// `i`-th vertex.
    pub fn boundary(self) -> impl Iterator<Item = (i32, Face)> {
        self.vertices()
            .enumerate()
            .map(move |(i, v)| (if i % 2 == 0 { 1 } else { -1 }, self.without(v)))
    }
}

pub struct Vertices(u64);

impl Iterator for Vertices {
    type Item = usize;
    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let v = self.0.trailing_zeros() as usize + 1;
        self.0 &= self.0 - 1;
        Some(v)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = self.0.count_ones() as usize;
        (n, Some(n))
    }
}

impl ExactSizeIterator for Vertices {}

impl Ord for Face {
    fn cmp(&self, other: &Self) -> Ordering {
        let diff = self.0 ^ other.0;
        if diff == 0 {
            return Ordering::Equal;
        }
        let low = diff & diff.wrapping_neg();
        let above = !((low << 1).wrapping_sub(1));
        // whoever holds the lowest differing vertex is smaller, unless the
        // other face ends before that position
        if self.0 & low != 0 {
            if other.0 & above != 0 {
                Ordering::Less
            } else {
                Ordering::Greater
            }
        } else if self.0 & above != 0 {
            Ordering::Greater
        } else {
            Ordering::Less
        }
    }
}

impl PartialOrd for Face {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Face {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, v) in self.vertices().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "}}")
    }
}

impl fmt::Debug for Face {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Sign of the permutation that sorts `vertices` increasingly; 0 when a
/// vertex repeats.
pub fn sorting_sign(vertices: &[usize]) -> i32 {
    let mut sign = 1;
    for i in 0..vertices.len() {
        for j in i + 1..vertices.len() {
            match vertices[i].cmp(&vertices[j]) {
                Ordering::Greater => sign = -sign,
                Ordering::Equal => return 0,
                Ordering::Less => {}
            }
        }
    }
    sign
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lexicographic_order() {
        let mut faces = vec![
            Face::of(&[2]),
            Face::of(&[1, 3]),
            Face::of(&[1, 2, 3]),
            Face::of(&[1, 2]),
            Face::EMPTY,
        ];
        faces.sort();
        let listed: Vec<Vec<usize>> = faces.iter().map(|f| f.to_vec()).collect();
        assert_eq!(
            listed,
            vec![vec![], vec![1, 2], vec![1, 2, 3], vec![1, 3], vec![2]]
        );
    }

    #[test]
    fn order_matches_vec_order_exhaustively() {
        for a in 0u64..64 {
            for b in 0u64..64 {
                let (fa, fb) = (Face(a), Face(b));
                assert_eq!(fa.cmp(&fb), fa.to_vec().cmp(&fb.to_vec()), "{fa} vs {fb}");
            }
        }
    }

    #[test]
    fn subsets_and_boundary() {
        let f = Face::of(&[1, 3, 4]);
        assert_eq!(f.subsets().count(), 8);
        assert_eq!(f.subsets_of_size(2).count(), 3);
        let b: Vec<(i32, Face)> = f.boundary().collect();
        assert_eq!(b[0], (1, Face::of(&[3, 4])));
        assert_eq!(b[1], (-1, Face::of(&[1, 4])));
        assert_eq!(f.position(4), Some(2));
    }

    #[test]
    fn sorting_signs() {
        assert_eq!(sorting_sign(&[1, 2, 3]), 1);
        assert_eq!(sorting_sign(&[2, 1, 3]), -1);
        assert_eq!(sorting_sign(&[3, 1, 2]), 1);
        assert_eq!(sorting_sign(&[1, 1]), 0);
    }
}
