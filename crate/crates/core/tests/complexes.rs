use facering::complex::{generators, reduced_homology, Face, SimplicialComplex, SimplicialCycle};
use facering::{Rational, F2};
use proptest::prelude::*;

fn complex_from_masks(masks: &[u64]) -> SimplicialComplex {
    let faces: Vec<Face> = masks.iter().map(|m| Face::from_bits(*m)).collect();
    SimplicialComplex::new(6, &faces).unwrap()
}

fn masks() -> impl Strategy<Value = Vec<u64>> {
    prop::collection::vec(1u64..64, 1..6)
}

/// Independent f-to-h transform: h_k = Σ_i (-1)^(k-i) C(d-i, k-i) f_(i-1).
fn h_from_f(f: &[usize], d: usize) -> Vec<i64> {
    fn c(n: usize, k: usize) -> i64 {
        (0..k).fold(1i64, |acc, i| acc * (n - i) as i64 / (i + 1) as i64)
    }
    (0..=d)
        .map(|k| {
            (0..=k)
                .map(|i| {
                    let sign = if (k - i) % 2 == 0 { 1 } else { -1 };
                    sign * c(d - i, k - i) * f[i] as i64
                })
                .sum()
        })
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn link_of_link(ms in masks(), a in any::<prop::sample::Index>(), b in any::<prop::sample::Index>()) {
        let k = complex_from_masks(&ms);
        let faces: Vec<Face> = k.all_faces().collect();
        let sigma = faces[a.index(faces.len())];
        let lk = k.link(sigma).unwrap();
        let link_faces: Vec<Face> = lk.all_faces().collect();
        let tau = link_faces[b.index(link_faces.len())];
        let lhs = lk.link(tau).unwrap();
        let rhs = k.link(sigma.union(tau)).unwrap();
        prop_assert_eq!(lhs.all_faces().collect::<Vec<_>>(), rhs.all_faces().collect::<Vec<_>>());
    }

    #[test]
    fn euler_characteristic_matches_homology(ms in masks()) {
        let k = complex_from_masks(&ms);
        prop_assert_eq!(reduced_homology::<F2>(&k).euler_characteristic(), k.euler_characteristic());
        prop_assert_eq!(reduced_homology::<Rational>(&k).euler_characteristic(), k.euler_characteristic());
    }

    #[test]
    fn face_counts_are_consistent(ms in masks()) {
        let k = complex_from_masks(&ms);
        let f = k.f_vector();
        prop_assert_eq!(f.iter().sum::<usize>(), k.num_faces());
        for (i, fi) in f.iter().enumerate() {
            prop_assert_eq!(*fi, k.faces_of_size(i).len());
        }
        // faces are closed under taking subsets
        for face in k.all_faces() {
            for sub in face.subsets() {
                prop_assert!(k.contains(sub));
            }
        }
    }
}

#[test]
fn h_vectors_of_spheres() {
    let cases: Vec<(SimplicialComplex, Vec<i64>)> = vec![
        (generators::simplex_boundary(2), vec![1, 1, 1]),
        (generators::simplex_boundary(3), vec![1, 1, 1, 1]),
        (generators::simplex_boundary(4), vec![1, 1, 1, 1, 1]),
        (generators::cross_polytope(2), vec![1, 2, 1]),
        (generators::cross_polytope(3), vec![1, 3, 3, 1]),
        (generators::cyclic_polytope(6, 3), vec![1, 3, 3, 1]),
        (generators::cyclic_polytope(7, 4), vec![1, 3, 6, 3, 1]),
    ];
    for (k, h) in cases {
        let d = k.max_facet_size();
        assert_eq!(h_from_f(&k.f_vector(), d), h);
        assert_eq!(k.h_vector(), h);
        let hom = reduced_homology::<Rational>(&k);
        assert!(hom.is_sphere(d as i64 - 1));
        let mu = SimplicialCycle::<Rational>::fundamental(&k).unwrap();
        assert!(mu.check_condition_star().unwrap().passed());
    }
}

#[test]
fn rp2_homology_depends_on_the_field() {
    let k = generators::rp2();
    assert_eq!(k.h_vector(), vec![1, 3, 6, 0]);
    let f2 = reduced_homology::<F2>(&k);
    assert_eq!((f2.dim(1), f2.dim(2)), (1, 1));
    let q = reduced_homology::<Rational>(&k);
    assert_eq!(q.dim(2), 0);
    assert_eq!(q.dim(1), 0);
}

#[test]
fn pinched_cycle_fails_the_link_condition_at_the_pinch() {
    let mu = generators::pinched_triangles::<Rational>();
    let report = mu.check_condition_star().unwrap();
    let failure = report.first_failure.expect("pinched cycle fails");
    assert_eq!(failure.degree, 0);
    assert_ne!(failure.dim, 1);
    let link = mu.support().link(failure.face).unwrap();
    assert_eq!(reduced_homology::<Rational>(&link).dim(0), failure.dim);
}

#[test]
fn relabeling_preserves_cycles() {
    let mu = SimplicialCycle::<Rational>::fundamental(&generators::cross_polytope(3)).unwrap();
    let relabeled = mu.relabel(&[6, 5, 4, 3, 2, 1]).unwrap();
    assert!(relabeled.check_cycle());
    let (compact, labels) = SimplicialCycle::<Rational>::fundamental(&generators::simplex_boundary(2))
        .unwrap()
        .relabel(&[2, 4, 6])
        .unwrap()
        .compact();
    assert_eq!(labels, vec![2, 4, 6]);
    assert!(compact.check_cycle());
}
