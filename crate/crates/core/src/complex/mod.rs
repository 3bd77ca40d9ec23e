//! Simplicial complexes, cycles, homology and the link condition.

mod cycle;
mod face;
pub mod generators;
mod homology;

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use cycle::{ConditionStarReport, SimplicialCycle, StarEntry, StarFailure};
pub use face::{sorting_sign, Face, Vertices, MAX_VERTEX};
pub use homology::{boundary_matrix, homology_sphere_failure, reduced_homology, HomologyReport};

/// A simplicial complex on the vertex set `1..=n`, stored by its facets
/// together with all faces grouped by cardinality.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimplicialComplex {
    n: usize,
    facets: Vec<Face>,
    /// `faces[k]` lists the faces with `k` vertices in increasing order.
    faces: Vec<Vec<Face>>,
}

impl SimplicialComplex {
    /// The complex generated by `generators` (closed under subsets). An empty
    /// generator list, or one holding only the empty face, gives the complex
    /// `{∅}`.
    pub fn new(n: usize, generators: &[Face]) -> Result<Self> {
        if n > MAX_VERTEX {
            return Err(Error::InvalidComplex(format!("{n} vertices exceed the limit of {MAX_VERTEX}")));
        }
        for g in generators {
            if g.max_vertex() > n {
                return Err(Error::InvalidComplex(format!("face {g} uses a vertex beyond {n}")));
            }
        }
        let mut gens: Vec<Face> = generators.to_vec();
        gens.sort_by_key(|f| std::cmp::Reverse(f.len()));
        let mut facets: Vec<Face> = Vec::new();
        for g in gens {
            if !facets.iter().any(|f| g.is_subset(*f)) {
                facets.push(g);
            }
        }
        if facets.is_empty() {
            facets.push(Face::EMPTY);
        }
        facets.sort();
        let mut set: HashSet<Face> = HashSet::new();
        for f in &facets {
            for s in f.subsets() {
                set.insert(s);
            }
        }
        let top = facets.iter().map(|f| f.len()).max().unwrap_or(0);
        let mut faces = vec![Vec::new(); top + 1];
        for f in set {
            faces[f.len()].push(f);
        }
        for level in &mut faces {
            level.sort();
        }
        Ok(SimplicialComplex { n, facets, faces })
    }

    /// Like [`SimplicialComplex::new`], but rejects duplicate facets and facets
    /// contained in other facets.
    pub fn from_facets(n: usize, facets: &[Face]) -> Result<Self> {
        for (i, a) in facets.iter().enumerate() {
            if a.is_empty() && facets.len() > 1 {
                return Err(Error::InvalidComplex("the empty face is listed as a facet".into()));
            }
            for b in &facets[i + 1..] {
                if a == b {
                    return Err(Error::InvalidComplex(format!("facet {a} is listed twice")));
                }
                if a.is_subset(*b) || b.is_subset(*a) {
                    return Err(Error::InvalidComplex(format!("facets {a} and {b} are nested")));
                }
            }
        }
        Self::new(n, facets)
    }

    /// Size of the ambient vertex set.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn facets(&self) -> &[Face] {
        &self.facets
    }

    /// Faces with exactly `k` vertices.
    pub fn faces_of_size(&self, k: usize) -> &[Face] {
        self.faces.get(k).map(|v| v.as_slice()).unwrap_or(&[])
    }

    pub fn all_faces(&self) -> impl Iterator<Item = Face> + '_ {
        self.faces.iter().flatten().copied()
    }

    pub fn num_faces(&self) -> usize {
        self.faces.iter().map(|v| v.len()).sum()
    }

    /// Largest facet cardinality (the dimension plus one).
    pub fn max_facet_size(&self) -> usize {
        self.faces.len() - 1
    }

    /// Dimension; `-1` for `{∅}`.
    pub fn dim(&self) -> i64 {
        self.max_facet_size() as i64 - 1
    }

    pub fn is_pure(&self) -> bool {
        let k = self.max_facet_size();
        self.facets.iter().all(|f| f.len() == k)
    }

    pub fn contains(&self, f: Face) -> bool {
        self.faces
            .get(f.len())
            .is_some_and(|level| level.binary_search(&f).is_ok())
    }

    /// Vertices lying on some face.
    pub fn vertex_set(&self) -> Face {
        self.facets.iter().fold(Face::EMPTY, |acc, f| acc.union(*f))
    }

    /// Face numbers `f_{-1}, f_0, ...` indexed by cardinality.
    pub fn f_vector(&self) -> Vec<usize> {
        self.faces.iter().map(|v| v.len()).collect()
    }

    /// The h-vector `h_0, ..., h_d` of a complex whose facets have `d` vertices.
    pub fn h_vector(&self) -> Vec<i64> {
        let d = self.max_facet_size();
        let f = self.f_vector();
        (0..=d)
            .map(|k| {
                (0..=k)
                    .map(|i| {
                        let sign = if (k - i) % 2 == 0 { 1 } else { -1 };
                        sign * binomial(d - i, k - i) as i64 * f[i] as i64
                    })
                    .sum()
            })
            .collect()
    }

    pub fn euler_characteristic(&self) -> i64 {
        // reduced: includes the empty face with sign -1
        self.faces
            .iter()
            .enumerate()
            .map(|(k, level)| if k % 2 == 1 { level.len() as i64 } else { -(level.len() as i64) })
            .sum()
    }

    /// `lk_τ K`: faces disjoint from `τ` whose union with `τ` lies in `K`.
    pub fn link(&self, tau: Face) -> Result<SimplicialComplex> {
        if !self.contains(tau) {
            return Err(Error::MissingFace(tau));
        }
        let gens: Vec<Face> = self
            .facets
            .iter()
            .filter(|f| tau.is_subset(**f))
            .map(|f| f.minus(tau))
            .collect();
        SimplicialComplex::new(self.n, &gens)
    }

    /// `st_τ K`: faces whose union with `τ` lies in `K`.
    pub fn star(&self, tau: Face) -> Result<SimplicialComplex> {
        if !self.contains(tau) {
            return Err(Error::MissingFace(tau));
        }
        let gens: Vec<Face> = self.facets.iter().filter(|f| tau.is_subset(**f)).copied().collect();
        SimplicialComplex::new(self.n, &gens)
    }

    /// Whether `σ ∪ τ` is a face, i.e. `σ` lies in the star of `τ`.
    pub fn in_star(&self, tau: Face, sigma: Face) -> bool {
        self.contains(tau.union(sigma))
    }

    /// Relabels the used vertices as `1..=m` in increasing order, returning
    /// the compacted complex and the old label of each new vertex.
    pub fn compact(&self) -> (SimplicialComplex, Vec<usize>) {
        let used = self.vertex_set().to_vec();
        let relabel = |f: Face| {
            Face::from_bits(
                f.vertices()
                    .map(|v| 1u64 << used.iter().position(|&u| u == v).unwrap())
                    .fold(0, |a, b| a | b),
            )
        };
        let gens: Vec<Face> = self.facets.iter().map(|f| relabel(*f)).collect();
        (
            SimplicialComplex::new(used.len(), &gens).expect("relabeling keeps validity"),
            used,
        )
    }

    /// Connected components of the 1-skeleton, as vertex sets.
    pub fn components(&self) -> Vec<Face> {
        let mut comps: Vec<Face> = Vec::new();
        for f in &self.facets {
            if f.is_empty() {
                continue;
            }
            let mut merged = *f;
            comps.retain(|c| {
                if c.is_disjoint(merged) {
                    true
                } else {
                    merged = merged.union(*c);
                    false
                }
            });
            comps.push(merged);
        }
        comps.sort();
        comps
    }
}

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc as usize
}

#[cfg(test)]
mod tests {
    use super::generators;
    use super::*;

    #[test]
    fn link_of_vertex_in_tetrahedron_boundary() {
        let k = generators::simplex_boundary(3);
        let lk = k.link(Face::of(&[1])).unwrap();
        let expected = SimplicialComplex::new(4, &[Face::of(&[2, 3]), Face::of(&[2, 4]), Face::of(&[3, 4])]).unwrap();
        assert_eq!(lk, expected);
    }

    #[test]
    fn link_of_facet_is_empty_face_complex() {
        let k = generators::simplex_boundary(2);
        let lk = k.link(Face::of(&[1, 2])).unwrap();
        assert_eq!(lk.num_faces(), 1);
        assert_eq!(lk.dim(), -1);
    }

    #[test]
    fn star_of_vertex_in_triangle() {
        let k = generators::simplex_boundary(2);
        let st = k.star(Face::of(&[1])).unwrap();
        let faces: Vec<Face> = st.all_faces().collect();
        assert_eq!(faces.len(), 6);
        assert!(!st.contains(Face::of(&[2, 3])));
        assert_eq!(k.star(Face::EMPTY).unwrap(), k);
    }

    #[test]
    fn missing_face_errors() {
        let k = generators::simplex_boundary(2);
        assert_eq!(k.link(Face::of(&[1, 2, 3])), Err(Error::MissingFace(Face::of(&[1, 2, 3]))));
    }

    #[test]
    fn h_vectors() {
        assert_eq!(generators::cross_polytope(3).h_vector(), vec![1, 3, 3, 1]);
        assert_eq!(generators::simplex_boundary(4).h_vector(), vec![1, 1, 1, 1, 1]);
    }

    #[test]
    fn compaction_drops_unused_vertices() {
        let k = SimplicialComplex::new(6, &[Face::of(&[2, 5]), Face::of(&[5, 6])]).unwrap();
        let (c, labels) = k.compact();
        assert_eq!(labels, vec![2, 5, 6]);
        assert_eq!(c.facets(), &[Face::of(&[1, 2]), Face::of(&[2, 3])]);
    }
}
