use facering::complex::{generators, Face, SimplicialCycle};
use facering::degree::{DegreeFunctional, GorensteinAlgebra};
use facering::reduction::{face_monomial, face_monomials, ArtinianAlgebra, MomentCurveLsop};
use facering::scalars::{BaseField, Gf, Monomial};
use facering::verify::{build_symbolic, random_element, sample_powers};
use facering::{Fp, Rational, RationalFunction, F2, F3};
use num_traits::Zero;
use proptest::prelude::*;
use std::rc::Rc;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

type RF<C> = RationalFunction<C>;

fn symbolic<C: BaseField>(k: &facering::complex::SimplicialComplex) -> GorensteinAlgebra<RF<C>> {
    build_symbolic(&SimplicialCycle::<C>::fundamental(k).unwrap()).unwrap()
}

thread_local! {
    static TET: Rc<GorensteinAlgebra<RF<F2>>> =
        Rc::new(symbolic::<F2>(&generators::simplex_boundary(3)));
}

fn tet_f2() -> Rc<GorensteinAlgebra<RF<F2>>> {
    TET.with(Rc::clone)
}

#[test]
fn dims_on_a_cyclic_polytope() {
    let k = generators::cyclic_polytope(6, 3);
    let ga = symbolic::<Rational>(&k);
    assert_eq!(ga.artinian().dims(), vec![1, 3, 3, 1]);
    assert_eq!(ga.dims(), vec![1, 3, 3, 1]);
    // the same build over a prime field at numeric parameters
    let params: Vec<Fp<101>> = (1..=6).map(|v| Fp::new(v * 7)).collect();
    let lsop = MomentCurveLsop::with_params(3, params).unwrap();
    let a = ArtinianAlgebra::build(&k, &lsop, 3).unwrap();
    assert_eq!(a.dims(), vec![1, 3, 3, 1]);
}

#[test]
fn parameters_vanish_in_the_artinian_reduction() {
    let ga = symbolic::<F3>(&generators::cross_polytope(3));
    for i in 1..=3 {
        assert!(ga.artinian().theta_image(i).unwrap().iter().all(|x| x.is_zero()));
    }
}

#[test]
fn orientation_flip_negates_degree() {
    let mu = SimplicialCycle::<Rational>::fundamental(&generators::simplex_boundary(3)).unwrap();
    let ga = build_symbolic(&mu).unwrap();
    let flipped = build_symbolic(&mu.negate()).unwrap();
    for m in face_monomials(ga.complex(), 3) {
        assert_eq!(flipped.degree_of_monomial(&m).unwrap(), -ga.degree_of_monomial(&m).unwrap());
    }
}

#[test]
fn decomposition_relative_to_a_face() {
    let ga = symbolic::<F2>(&generators::cross_polytope(3));
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for &tau in ga.complex().faces_of_size(1) {
        let u = random_element(&ga, 2, &mut rng);
        let dec = match ga.decompose_relative(&u, tau) {
            Ok(dec) => dec,
            Err(facering::Error::NoDualFace) => continue,
            Err(e) => panic!("{e}"),
        };
        let mut rebuilt: Vec<RF<F2>> = ga
            .face_coords(dec.sigma)
            .unwrap()
            .into_iter()
            .map(|x| x * dec.lambda.clone())
            .collect();
        for (m, c) in &dec.remainder {
            // every remainder monomial leaves the star of tau
            assert!(!ga.complex().contains(facering::reduction::monomial_support(m).union(tau)));
            for (slot, x) in rebuilt.iter_mut().zip(ga.coords(m).unwrap()) {
                *slot = slot.clone() + c.clone() * x;
            }
        }
        assert_eq!(rebuilt, u);
    }
}

#[test]
fn squares_do_not_vanish_over_the_rationals() {
    let ga = symbolic::<Rational>(&generators::simplex_boundary(3));
    let report = sample_powers(&ga, 1, 2, 200, 5).unwrap();
    assert_eq!(report.vanishing, 0);
}

#[test]
fn evaluated_algebra_is_a_specialization() {
    // the same basis choice at a generic point gives evaluated coordinates
    let mu = SimplicialCycle::<F2>::fundamental(&generators::simplex_boundary(3)).unwrap();
    let ga = tet_f2();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let pts: Vec<Gf<2>> = (0..5).map(|_| Gf::random(&mut rng)).collect();
    let (params, rho) = (pts[..4].to_vec(), pts[4].clone());
    let lsop = MomentCurveLsop::with_params(3, params.clone()).unwrap();
    let a = ArtinianAlgebra::build(&mu.support(), &lsop, 3).unwrap();
    let df = DegreeFunctional::new(&mu, lsop, rho).unwrap();
    let ge = GorensteinAlgebra::gorensteinify(a, df).unwrap();
    assert_eq!(ge.dims(), ga.dims());
    for m in face_monomials(ga.complex(), 3) {
        let symbolic = ga.degree_of_monomial(&m).unwrap().evaluate(&params).unwrap();
        assert_eq!(ge.degree_of_monomial(&m).unwrap(), symbolic);
    }
}

fn exponent_vector(d: u16) -> impl Strategy<Value = Vec<u16>> {
    prop::collection::vec(0u16..=d, 4).prop_filter("degree", move |v| v.iter().sum::<u16>() == d)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn lee_formula_matches_linear_algebra(exps in exponent_vector(3)) {
        let ga = tet_f2();
        let m = Monomial::from_exps(exps);
        let lee = ga.degree_functional().degree_monomial(&m).unwrap();
        prop_assert!(!lee.mentions(4));
        prop_assert_eq!(lee, ga.degree_of_monomial(&m).unwrap());
    }

    #[test]
    fn multiplication_is_associative_and_commutative(seed in any::<u64>()) {
        let ga = tet_f2();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let u = random_element(&ga, 1, &mut rng);
        let v = random_element(&ga, 1, &mut rng);
        let w = random_element(&ga, 1, &mut rng);
        let uv = ga.multiply(1, &u, 1, &v).unwrap();
        prop_assert_eq!(&uv, &ga.multiply(1, &v, 1, &u).unwrap());
        let left = ga.multiply(2, &uv, 1, &w).unwrap();
        let vw = ga.multiply(1, &v, 1, &w).unwrap();
        prop_assert_eq!(left, ga.multiply(1, &u, 2, &vw).unwrap());
    }

    #[test]
    fn face_monomials_multiply_like_faces(a in 1u64..16, b in 1u64..16) {
        let ga = tet_f2();
        let (fa, fb) = (Face::from_bits(a), Face::from_bits(b));
        prop_assume!(fa.len() + fb.len() <= 3);
        let product = ga
            .artinian()
            .multiply_monomials(&face_monomial(fa), &face_monomial(fb))
            .unwrap();
        let direct = ga.artinian().expand(&face_monomial(fa).mul(&face_monomial(fb))).unwrap();
        prop_assert_eq!(product, direct);
    }
}
