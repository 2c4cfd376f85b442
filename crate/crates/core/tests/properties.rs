use num_bigint::BigUint;
use num_traits::One;
use proptest::prelude::*;

use pnsieve::ffield::{build_field, trace_to_base, FieldCtx};
use pnsieve::gf::{poly, GaloisField};
use pnsieve::intfact::{factor_q_power_minus_one, Budget};
use pnsieve::polyfact::xm1_profile;

fn fields() -> Vec<GaloisField> {
    [(5, 3), (3, 4), (5, 2), (7, 2)].iter().map(|&(p, n)| GaloisField::new(p, n).unwrap()).collect()
}

fn ctx_f81() -> FieldCtx {
    build_field(3, 2, 2).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn field_axioms(which in 0usize..4, a in any::<u64>(), b in any::<u64>(), c in any::<u64>()) {
        let f = &fields()[which];
        let (a, b, c) = (a % f.size(), b % f.size(), c % f.size());
        prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
        prop_assert_eq!(f.sub(f.add(a, b), b), a);
        if a != 0 {
            prop_assert!(f.is_one(f.mul(a, f.inv(a))));
            prop_assert!(f.is_one(f.pow(a, f.size() - 1)));
        }
        // Frobenius is additive and multiplicative
        prop_assert_eq!(f.frobenius(f.add(a, b), 1), f.add(f.frobenius(a, 1), f.frobenius(b, 1)));
        prop_assert_eq!(f.frobenius(f.mul(a, b), 1), f.mul(f.frobenius(a, 1), f.frobenius(b, 1)));
    }

    #[test]
    fn relative_trace_is_linear(a in 0u64..81, b in 0u64..81, c in 0u64..9) {
        let ctx = ctx_f81();
        let (field, base) = (ctx.field(), ctx.base());
        let lhs = trace_to_base(&ctx, field.add(field.mul(ctx.embed(c), a), b));
        let rhs = base.add(base.mul(c, trace_to_base(&ctx, a)), trace_to_base(&ctx, b));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn polynomial_factorization_multiplies_back(which in 0usize..4, coeffs in proptest::collection::vec(any::<u64>(), 2..9)) {
        let f = &fields()[which];
        let mut a: Vec<u64> = coeffs.iter().map(|c| c % f.size()).collect();
        *a.last_mut().unwrap() = 1;
        let mut prod = poly::one();
        for (g, e) in poly::factor(f, &a) {
            prop_assert!(poly::is_irreducible(f, &g));
            for _ in 0..e {
                prod = poly::mul(f, &prod, &g);
            }
        }
        prop_assert_eq!(prod, poly::trim(a));
    }

    #[test]
    fn xm1_profile_matches_explicit_factorization(q in proptest::sample::select(vec![5u64, 25, 3, 9]), m in 1u64..40) {
        let prof = xm1_profile(q, m).unwrap();
        prop_assert_eq!(prof.degrees().iter().map(|&d| d as u64).sum::<u64>(), prof.m_prime);
        let f = if q == 25 { GaloisField::new(5, 2) } else if q == 9 { GaloisField::new(3, 2) } else { GaloisField::prime(q) }.unwrap();
        let mut explicit: Vec<u32> = poly::factor(&f, &poly::xm_minus_one(&f, prof.m_prime as usize))
            .into_iter()
            .map(|(g, _)| poly::degree(&g).unwrap() as u32)
            .collect();
        explicit.sort_unstable();
        prop_assert_eq!(explicit, prof.degrees());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn factorization_multiplies_back(q in proptest::sample::select(vec![2u64, 3, 5, 7, 25, 125]), m in 1u64..40) {
        let fact = factor_q_power_minus_one(q, m, Budget::default()).unwrap();
        prop_assert!(fact.complete);
        let prod = fact.factors.iter().fold(BigUint::one(), |acc, (p, e)| acc * p.pow(*e));
        prop_assert_eq!(prod, BigUint::from(q).pow(m as u32) - 1u32);
    }
}
