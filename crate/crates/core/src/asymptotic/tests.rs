use super::*;
use crate::padic::{PAdicNumber, Valuation};

#[test]
fn u_coordinates_round_trip() {
    let uc = UCoordinates { n: 5 };
    let z = [3u64, 8, 1, 6, 10];
    let u = uc.from_z(&z, 11).unwrap();
    let w: Vec<u64> = (0..4).map(|i| (z[i] + 11 - z[4]) % 11).collect();
    assert_eq!(uc.differences(&u, 11), w);
    assert!(uc.from_z(&[1, 2, 3, 4, 4], 11).is_none());
}

#[test]
fn shifted_solutions_verify() {
    for (p, s, n) in [(5, 1, 3), (7, 1, 3), (5, 1, 5)] {
        let inst = KZInstance::new(p, s, n).unwrap();
        for l in 1..=inst.g as u64 {
            let rep = verify_shift_solution(&inst, l, true).unwrap();
            assert!(rep.pass, "{rep:?}");
            assert_eq!(rep.difference_invariant, Some(true));
        }
    }
    let inst = KZInstance::new(5, 2, 3).unwrap();
    assert!(verify_shift_solution(&inst, 1, false).unwrap().pass);
}

#[test]
fn n3_hat_solution_matches_explicit_triples() {
    for (p, s) in [(5, 1), (5, 2), (7, 1)] {
        let inst = KZInstance::new(p, s, 3).unwrap();
        let (negative, e1, triples) = n3_triples(&inst).unwrap();
        let pre = prefactor(&inst, 1).unwrap();
        assert_eq!((pre.negative, pre.exponents[0] as u64, pre.exponents[1]), (negative, e1, 0));
        let hat = hat_solution(&inst, 1).unwrap();
        let sign = pre.sign();
        for (a, t) in triples.iter().enumerate() {
            let m = Monomial::from_exponents(&[e1 as u32, a as u32]).unwrap();
            let got = hat.coefficients_at(&m);
            let want: Vec<BigInt> = t.iter().map(|c| c * &sign).collect();
            assert_eq!(got, want, "p={p} s={s} a={a}");
        }
        assert_eq!(hat.term_count(), triples.iter().flatten().filter(|c| !c.is_zero()).count());
    }
}

#[test]
fn factorization_p5_small() {
    let inst = KZInstance::new(5, 1, 3).unwrap();
    let rep = factorization_check(&inst, 1).unwrap();
    assert!(rep.pass, "{rep:?}");
    let c: Vec<BigInt> = rep.constant_term.iter().map(|d| d.0.clone()).collect();
    assert_eq!(c, [1, 2, 2].map(BigInt::from));
    let inst = KZInstance::new(5, 1, 5).unwrap();
    for l in 1..=2 {
        assert!(factorization_check(&inst, l).unwrap().pass);
        assert_eq!(t_from_hat(&inst, l).unwrap(), t_ls_closed_form(&inst, l).unwrap().to_u_vector().unwrap());
        assert!(q_form_check(&inst, l).unwrap().pass);
    }
    assert!(series_prefactors_distinct(&inst).unwrap());
}

#[test]
fn series_first_coefficients() {
    let t = t_l_series(5, 3, 1, 4, 10).unwrap();
    let half = PAdicNumber::from_i64(5, 10, 2).unwrap().inverse().unwrap().neg();
    let a0: Vec<PAdicNumber> = t.components.iter().map(|c| c.terms[0].c).collect();
    assert_eq!(a0, [PAdicNumber::one(5, 10).unwrap(), half, half]);
    // a = 1 in component 2: binom(-1/2, 2) binom(-3/2, 1) = (3/8)(-3/2)
    let c = &t.components[1].terms[1];
    assert_eq!(c.a, [2, 1]);
    let want = PAdicNumber::from_i64(5, 10, -9).unwrap().mul(&PAdicNumber::from_i64(5, 10, 16).unwrap().inverse().unwrap());
    assert_eq!(c.c, want);
    assert!(t.support_ok());
}

#[test]
fn correspondence_bounds() {
    for (p, s, n) in [(5, 2, 3), (5, 3, 3), (5, 2, 5)] {
        let inst = KZInstance::new(p, s, n).unwrap();
        for l in 1..=inst.g as u64 {
            let rep = truncation_correspondence(&inst, l, 6, s + 8).unwrap();
            assert!(rep.pass, "{:?}", rep.violations);
        }
    }
    let inst = KZInstance::new(5, 2, 3).unwrap();
    let rep = truncation_correspondence(&inst, 1, 3, 10).unwrap();
    assert_eq!(rep.constant_distance, [Valuation::AtLeast(10), Valuation::Finite(2), Valuation::Finite(2)]);
}
