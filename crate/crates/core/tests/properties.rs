use kz_core::binomial::{binom, binom_shift_divisibility, binom_valuation_ps, kummer_carries, lucas_mod_p, vp};
use kz_core::kz::{verify_solution, KZInstance};
use kz_core::padic::{binom_half, binom_half_exact, hensel_sqrt, teichmuller, PAdicNumber};
use kz_core::poly::{IntPolynomial, Vars};
use kz_core::solutions::{extract_solution, MVector};
use num_bigint::BigInt;
use proptest::prelude::*;

const PRIMES: [u64; 4] = [3, 5, 7, 11];

fn poly() -> impl Strategy<Value = IntPolynomial> {
    prop::collection::vec((prop::collection::vec(0u32..4, 3), -20i64..=20), 0..6).prop_map(|terms| {
        let vars = Vars::z(3).unwrap();
        IntPolynomial::from_terms(&vars, terms.into_iter().map(|(e, c)| (e, BigInt::from(c)))).unwrap()
    })
}

fn prime() -> impl Strategy<Value = u64> {
    prop::sample::select(PRIMES.to_vec())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ring_laws(f in poly(), g in poly(), h in poly()) {
        prop_assert_eq!(&f + &g, &g + &f);
        prop_assert_eq!(&f * &g, &g * &f);
        prop_assert_eq!(&(&f * &g) * &h, &f * &(&g * &h));
        prop_assert_eq!(&f * &(&g + &h), &(&f * &g) + &(&f * &h));
        prop_assert!((&f - &f).is_zero());
    }

    #[test]
    fn leibniz_rule(f in poly(), g in poly(), var in 0usize..3) {
        let lhs = (&f * &g).diff(var).unwrap();
        let rhs = &(&f.diff(var).unwrap() * &g) + &(&f * &g.diff(var).unwrap());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn evaluation_is_a_ring_map(f in poly(), g in poly(), pt in prop::collection::vec(0u64..1000, 3), m in 2u64..10_000) {
        let (a, b) = (f.eval_mod(&pt, m).unwrap(), g.eval_mod(&pt, m).unwrap());
        prop_assert_eq!((&f * &g).eval_mod(&pt, m).unwrap(), a * b % m);
        prop_assert_eq!((&f + &g).eval_mod(&pt, m).unwrap(), (a + b) % m);
    }

    #[test]
    fn unit_inverse(p in prime(), n in 1u32..8, r in any::<u64>()) {
        let x = PAdicNumber::new(p, n, r).unwrap();
        prop_assume!(x.is_unit());
        prop_assert_eq!(x.mul(&x.inverse().unwrap()), PAdicNumber::one(p, n).unwrap());
    }

    #[test]
    fn teichmuller_is_fixed_root_of_unity(p in prime(), n in 1u32..8, r in any::<u64>()) {
        let x = PAdicNumber::new(p, n, r).unwrap();
        let w = teichmuller(&x);
        prop_assert_eq!(w.pow(p), w);
        prop_assert_eq!(w.digit0(), x.digit0());
    }

    #[test]
    fn hensel_square_roots(p in prime(), n in 1u32..8, beta in 1u64..11, r in any::<u64>()) {
        prop_assume!(beta % p != 0);
        let one = PAdicNumber::one(p, n).unwrap();
        // t = beta^2 (1 + p r) has the branch beta
        let t = one.like_i64((beta * beta) as i64).mul(&one.add(&PAdicNumber::new(p, n, r).unwrap().p_power(1)));
        let y = hensel_sqrt(&t, beta).unwrap();
        prop_assert_eq!(y.mul(&y), t);
        prop_assert_eq!(y.digit0(), beta % p);
    }

    #[test]
    fn half_binomials_match_exact(p in prime(), l1 in 0u64..4, k in 0u64..30, n in 1u32..7) {
        let (num, den) = binom_half_exact(l1, k);
        let one = PAdicNumber::one(p, n).unwrap();
        // den may carry powers of p from k!; the quotient is still integral
        let vd = vp(&den, p).unwrap_or(0);
        let big = PAdicNumber::one(p, n + vd).unwrap();
        let unit_den = big.like_bigint(&(den.clone() / num_traits::pow(BigInt::from(p), vd as usize)));
        let q = big.like_bigint(&(num / num_traits::pow(BigInt::from(p), vd as usize))).mul(&unit_den.inverse().unwrap());
        prop_assert_eq!(binom_half(p, l1, k, n).unwrap(), one.like_bigint(&BigInt::from(q.residue())));
    }

    #[test]
    fn kummer_and_lucas(p in prime(), nn in 0u64..400, k in 0u64..400) {
        prop_assume!(k <= nn);
        let b = binom(nn, k);
        prop_assert_eq!(vp(&b, p).unwrap_or(0), kummer_carries(nn, k, p));
        prop_assert_eq!(BigInt::from(lucas_mod_p(nn, k, p)), b % BigInt::from(p));
    }

    #[test]
    fn prime_power_binomials(p in prime(), s in 1u32..4, a in 1u64..1331) {
        prop_assume!(a <= p.pow(s));
        prop_assert!(binom_valuation_ps(p, s, a).unwrap().holds);
    }

    #[test]
    fn shifted_binomials_divisible(p in prime(), s in 1u32..3, m in 1u64..20, l in 1u64..3) {
        prop_assume!(m % p != 0);
        for r in 0..s {
            prop_assert!(binom_shift_divisibility(p, s, r, m, l).unwrap().holds);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn shifted_exponent_vectors_solve(shift in prop::collection::vec(0u64..3, 3), l in 1u64..3) {
        let inst = KZInstance::new(5, 1, 3).unwrap();
        let m: Vec<u64> = shift.iter().map(|k| 2 + 5 * k).collect();
        let mvec = MVector::new(&inst.ctx, m).unwrap();
        let rec = extract_solution(&inst, &mvec, l, 1).unwrap();
        prop_assert!(verify_solution(&rec.vector, &inst).unwrap().pass);
    }
}
