use proptest::prelude::*;

use qtlab_core::{parse_scalar, DPoly, Scalar, SeriesComparison, TorusOp, ZSeries};

fn scalar() -> impl Strategy<Value = Scalar> {
    let term = (-3i64..=3, 0u32..=1, -4i64..=4).prop_map(|(c, t, e)| (t, e, num_rational::BigRational::from_integer(c.into())));
    (prop::collection::vec(term, 1..=3), prop::collection::vec(1i64..=3, 0..=2), any::<bool>()).prop_map(
        |(terms, dens, with_t)| {
            let mut s = Scalar::from_terms(terms);
            for k in dens {
                s = s.checked_div(&Scalar::one_minus_q(k)).expect("nonzero factor");
                if with_t {
                    s = &s * &Scalar::one_minus_tq(k - 1);
                }
            }
            s
        },
    )
}

fn series() -> impl Strategy<Value = ZSeries> {
    prop::collection::vec((-5i64..=2, scalar()), 1..=4).prop_map(|terms| ZSeries::from_coefficients(terms, 6))
}

fn torus() -> impl Strategy<Value = TorusOp> {
    let atom = (scalar(), -2i64..=2, -2i64..=2, 0usize..=1).prop_map(|(c, m, n, d)| {
        let mut coeffs = vec![Scalar::zero(); d];
        coeffs.push(c);
        TorusOp::atom_d(DPoly::from_coeffs(coeffs), m, n)
    });
    prop::collection::vec(atom, 1..=2).prop_map(|atoms| atoms.iter().fold(TorusOp::zero(), |a, b| a.add(b)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn scalar_ring_axioms(a in scalar(), b in scalar(), c in scalar()) {
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert!((&a - &a).is_zero());
    }

    #[test]
    fn scalar_inverse(a in scalar()) {
        match a.inverse() {
            Ok(inv) => prop_assert!((&a * &inv).is_one()),
            Err(_) => prop_assert!(a.is_zero() || a.has_t() || a.weight() > 1),
        }
    }

    #[test]
    fn scalar_text_round_trip(a in scalar()) {
        let text = a.to_string();
        prop_assert_eq!(parse_scalar(&text).unwrap(), a);
    }

    #[test]
    fn series_ring(f in series(), g in series(), h in series()) {
        let lhs = f.mul(&g.add(&h));
        let rhs = f.mul(&g).add(&f.mul(&h));
        prop_assert_eq!(lhs.eq_to_order(&rhs), SeriesComparison::Equal);
        let lhs = f.mul(&g).mul(&h);
        let rhs = f.mul(&g.mul(&h));
        prop_assert_eq!(lhs.eq_to_order(&rhs), SeriesComparison::Equal);
    }

    #[test]
    fn torus_associative(a in torus(), b in torus(), c in torus()) {
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
    }

    #[test]
    fn torus_acts_as_representation(a in torus(), b in torus(), f in series()) {
        let lhs = a.mul(&b).apply(&f);
        let rhs = a.apply(&b.apply(&f));
        prop_assert_eq!(lhs.eq_to_order(&rhs), SeriesComparison::Equal);
    }

    #[test]
    fn torus_jacobi(a in torus(), b in torus(), c in torus()) {
        let j = a.commutator(&b.commutator(&c))
            .add(&b.commutator(&c.commutator(&a)))
            .add(&c.commutator(&a.commutator(&b)));
        prop_assert!(j.is_identically_zero());
    }
}
