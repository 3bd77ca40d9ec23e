//! Standard small complexes.

use super::{Face, SimplicialComplex, SimplicialCycle};
use crate::scalars::BaseField;

/// Boundary of the `d`-simplex: all `d`-subsets of `{1, ..., d+1}`.
pub fn simplex_boundary(d: usize) -> SimplicialComplex {
    assert!(d >= 1, "simplex boundary needs d >= 1");
    let full = Face::full(d + 1);
    let facets: Vec<Face> = full.subsets_of_size(d).collect();
    SimplicialComplex::new(d + 1, &facets).expect("valid complex")
}

/// Boundary of the `d`-dimensional cross-polytope; vertices `2i-1` and `2i`
/// are antipodal.
pub fn cross_polytope(d: usize) -> SimplicialComplex {
    assert!(d >= 1, "cross-polytope needs d >= 1");
    let facets: Vec<Face> = (0u64..1 << d)
        .map(|choice| {
            let vs: Vec<usize> = (0..d)
                .map(|i| 2 * i + 1 + ((choice >> i) & 1) as usize)
                .collect();
            Face::of(&vs)
        })
        .collect();
    SimplicialComplex::new(2 * d, &facets).expect("valid complex")
}

/// Boundary of the cyclic `d`-polytope with `n` vertices, whose facets are
/// the `d`-subsets satisfying Gale's evenness condition.
pub fn cyclic_polytope(n: usize, d: usize) -> SimplicialComplex {
    assert!(d >= 2 && n > d, "cyclic polytope needs n > d >= 2");
    let facets: Vec<Face> = Face::full(n)
        .subsets_of_size(d)
        .filter(|s| gale_evenness(*s, n))
        .collect();
    SimplicialComplex::new(n, &facets).expect("valid complex")
}

fn gale_evenness(s: Face, n: usize) -> bool {
    let outside: Vec<usize> = (1..=n).filter(|&v| !s.contains(v)).collect();
    outside.windows(2).all(|w| {
        let between = (w[0] + 1..w[1]).filter(|&v| s.contains(v)).count();
        between % 2 == 0
    })
}

/// The six-vertex real projective plane (half of the icosahedron).
pub fn rp2() -> SimplicialComplex {
    let triangles: [[usize; 3]; 10] = [
        [1, 2, 3],
        [1, 3, 4],
        [1, 4, 5],
        [1, 5, 6],
        [1, 2, 6],
        [2, 3, 5],
        [3, 4, 6],
        [2, 4, 5],
        [3, 5, 6],
        [2, 4, 6],
    ];
    let facets: Vec<Face> = triangles.iter().map(|t| Face::of(t)).collect();
    SimplicialComplex::new(6, &facets).expect("valid complex")
}

/// Two triangle boundaries `{1,2,3}` and `{1,4,5}` glued at vertex 1, as a
/// one-dimensional cycle with unit weights on both loops.
pub fn pinched_triangles<C: BaseField>() -> SimplicialCycle<C> {
    let one = C::one();
    SimplicialCycle::new(
        2,
        [
            (Face::of(&[1, 2]), one.clone()),
            (Face::of(&[2, 3]), one.clone()),
            (Face::of(&[1, 3]), -one.clone()),
            (Face::of(&[1, 4]), one.clone()),
            (Face::of(&[4, 5]), one.clone()),
            (Face::of(&[1, 5]), -one),
        ],
    )
    .expect("valid cycle")
}
