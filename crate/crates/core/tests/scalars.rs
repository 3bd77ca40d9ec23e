use facering::scalars::{BaseField, Field, Gf, Monomial, Polynomial};
use facering::{Fp, Rational, RationalFunction};
use num_traits::{One, Zero};
use proptest::prelude::*;

type F5 = Fp<5>;
type F3 = Fp<3>;

fn poly<C: BaseField>(terms: &[(i64, [u16; 3])]) -> Polynomial<C> {
    Polynomial::from_terms(terms.iter().map(|(c, e)| (Monomial::from_exps(e.iter().copied()), C::from_i64(*c))))
}

fn terms() -> impl Strategy<Value = Vec<(i64, [u16; 3])>> {
    prop::collection::vec((-4i64..=4, [0u16..3, 0u16..3, 0u16..3]), 0..4)
}

fn nonzero_terms() -> impl Strategy<Value = Vec<(i64, [u16; 3])>> {
    terms().prop_filter("nonzero", |t| !poly::<F5>(t).is_zero() && !poly::<F3>(t).is_zero() && !poly::<Rational>(t).is_zero())
}

fn rf<C: BaseField>(num: &[(i64, [u16; 3])], den: &[(i64, [u16; 3])]) -> RationalFunction<C> {
    RationalFunction::new(poly(num), poly(den)).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn polynomial_ring_axioms(a in terms(), b in terms(), c in terms()) {
        let (a, b, c) = (poly::<F5>(&a), poly::<F5>(&b), poly::<F5>(&c));
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a - &a, Polynomial::zero());
        prop_assert_eq!(&a * &Polynomial::one(), a.clone());
    }

    #[test]
    fn exact_division_inverts_multiplication(a in terms(), b in nonzero_terms()) {
        let (a, b) = (poly::<Rational>(&a), poly::<Rational>(&b));
        prop_assert_eq!((&a * &b).exact_div(&b), Some(a));
    }

    #[test]
    fn rational_function_field_axioms(
        a in nonzero_terms(), b in nonzero_terms(), c in nonzero_terms(), d in nonzero_terms()
    ) {
        let x = rf::<Rational>(&a, &b);
        let y = rf::<Rational>(&c, &d);
        prop_assert_eq!(x.clone() * y.clone(), y.clone() * x.clone());
        prop_assert_eq!(x.clone() + y.clone() - y.clone(), x.clone());
        prop_assert_eq!(x.clone() * x.inverse().unwrap(), RationalFunction::one());
        prop_assert_eq!((x.clone() + y.clone()) * x.clone(), x.clone() * x.clone() + y.clone() * x.clone());
    }

    #[test]
    fn leibniz_rule(a in nonzero_terms(), b in nonzero_terms(), c in nonzero_terms(), v in 0usize..3) {
        let f = rf::<F5>(&a, &b);
        let g = RationalFunction::<F5>::from_polynomial(poly(&c));
        let lhs = (f.clone() * g.clone()).partial_derivative(v);
        let rhs = f.partial_derivative(v) * g.clone() + f * g.partial_derivative(v);
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn frobenius_is_additive(a in nonzero_terms(), b in nonzero_terms(), c in nonzero_terms(), d in nonzero_terms()) {
        let x = rf::<F3>(&a, &b);
        let y = rf::<F3>(&c, &d);
        prop_assert_eq!((x.clone() + y.clone()).pow(3), x.pow(3) + y.pow(3));
        prop_assert!(x.pow(3).is_pth_power(3).unwrap().is_some());
        prop_assert!((0..3).all(|v| x.pow(3).partial_derivative(v).is_zero()));
    }

    #[test]
    fn evaluation_is_a_ring_map(
        a in nonzero_terms(), b in nonzero_terms(), c in nonzero_terms(), d in nonzero_terms(), seed in any::<u64>()
    ) {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let point: Vec<Gf<5>> = (0..3).map(|_| Gf::random(&mut rng)).collect();
        let x = rf::<F5>(&a, &b);
        let y = rf::<F5>(&c, &d);
        if let (Ok(ex), Ok(ey)) = (x.evaluate(&point), y.evaluate(&point)) {
            prop_assert_eq!((x.clone() * y.clone()).evaluate(&point).unwrap(), ex.clone() * ey.clone());
            prop_assert_eq!((x + y).evaluate(&point).unwrap(), ex + ey);
        }
    }

    #[test]
    fn gf_is_a_field(seed in any::<u64>()) {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let a = Gf::<2>::random(&mut rng);
        let b = Gf::<2>::random(&mut rng);
        prop_assert_eq!(a.clone() * b.clone(), b.clone() * a.clone());
        prop_assert_eq!((a.clone() + b.clone()).pow(2), a.pow(2) + b.pow(2));
        if !a.is_zero() {
            prop_assert_eq!(a.clone() * a.inverse().unwrap(), Gf::one());
        }
    }
}

#[test]
fn fp_inverses() {
    for v in 1..13u64 {
        let x = Fp::<13>::new(v);
        assert_eq!(x * x.inverse().unwrap(), Fp::<13>::one());
    }
    assert!(Fp::<13>::zero().inverse().is_none());
}
