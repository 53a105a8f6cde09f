//! One test per acceptance criterion. Each prints a PASS/FAIL line; all
//! tolerances are pinned here.

use std::time::Instant;

use kz_core::asymptotic::{factorization_check, hat_solution, n3_triples, prefactor};
use kz_core::binomial::{binom_shift_divisibility, binom_valuation_ps};
use kz_core::cartier::{verify_grading_relation, verify_iterated};
use kz_core::convergence::{
    check_xps_convergence, classic, converge_q_general, converge_t_n3, disjoint_domains, sample_disc, ConvergenceSpec,
};
use kz_core::kz::{verify_solution, KZInstance};
use kz_core::padic::{hensel_sqrt, is_nonzero_square_mod_p, teichmuller, DiscSpec, PAdicNumber, Valuation};
use kz_core::poly::Monomial;
use kz_core::solutions::{
    coefficient_vector_by_expansion, extract_solution, formula_vector, leading_term_formula, solution,
    verify_shift_relation, MVector, ModuleCalculus,
};
use num_bigint::BigInt;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const CASES: [(u64, u32, usize); 8] = [(5, 1, 3), (5, 2, 3), (5, 3, 3), (7, 1, 3), (7, 2, 3), (5, 1, 5), (5, 2, 5), (7, 1, 5)];
/// Cases small enough for the fully expanded master polynomial.
const EXPANSION_CASES: [(u64, u32, usize); 5] = [(5, 1, 3), (5, 2, 3), (7, 1, 3), (7, 2, 3), (5, 1, 5)];

const RANDOM_M_SEED: u64 = 0x5eed;
const RANDOM_M_PER_CASE: usize = 3;
const RANDOM_M_MAX_SHIFT: u64 = 2;

const CONV_P: u64 = 5;
const CONV_PREC: u32 = 12;
const CONV_SAMPLES: usize = 50;
const CONV_SEED: u64 = 2024;
const CONV_N3_SMAX: u32 = 4;
const CONV_N5_SMAX: u32 = 2;
const DISJOINT_POINTS: usize = 10_000;
const DISJOINT_SEED: u64 = 99;

const KERNEL_PREC: u32 = 12;
const KERNEL_SAMPLES: usize = 100;
const KERNEL_SEED: u64 = 10;
const KERNEL_SMAX: u32 = 6;

fn report(id: u32, ok: bool, detail: &str, start: Instant) {
    let tag = if ok { "PASS" } else { "FAIL" };
    println!("criterion {id}: {tag} ({detail}; {:.1}s)", start.elapsed().as_secs_f64());
}

#[test]
fn criterion_1_exact_kz_verification() {
    let start = Instant::now();
    let mut ok = true;
    let mut checked = 0;
    for (p, s, n) in CASES {
        let inst = KZInstance::new(p, s, n).unwrap();
        for l in 1..=inst.g as u64 {
            let rec = solution(&inst, l).unwrap();
            let rep = verify_solution(&rec.vector, &inst).unwrap();
            if !rep.pass || rec.vector.is_zero() {
                println!("  ({p},{s},{n}) l={l}: {:?}", rep.first_failure);
                ok = false;
            }
            checked += 1;
        }
    }
    report(1, ok, &format!("{checked} solutions, zero residual mod p^s"), start);
    assert!(ok);
}

#[test]
fn criterion_2_oracle_equivalence() {
    let start = Instant::now();
    let mut ok = true;
    for (p, s, n) in CASES {
        let inst = KZInstance::new(p, s, n).unwrap();
        let modulus = BigInt::from(inst.ctx.modulus);
        for l in 1..=inst.g as u64 {
            let rec = solution(&inst, l).unwrap();
            let formula = formula_vector(&inst, l).unwrap();
            let lt = leading_term_formula(&inst, l).unwrap();
            let (mono, vec) = rec.vector.leading_term().unwrap();
            let sums_ok = rec.vector.support().iter().all(|m| {
                let total: BigInt = rec.vector.coefficients_at(m).iter().sum();
                (total % &modulus) == BigInt::from(0)
            });
            let case_ok = formula == rec.vector && lt.monomial == mono.exponents(n) && lt.vector == vec && sums_ok;
            if !case_ok {
                println!("  ({p},{s},{n}) l={l}: formula/leading/sum mismatch");
            }
            ok &= case_ok;
        }
    }
    for (p, s, n) in EXPANSION_CASES {
        let inst = KZInstance::new(p, s, n).unwrap();
        let m = MVector::minimal(&inst.ctx, n);
        for l in 1..=inst.g as u64 {
            let k = (l * inst.ctx.modulus) as i64 - 1;
            let slow = coefficient_vector_by_expansion(&inst, m.entries(), k).unwrap();
            let same = slow == formula_vector(&inst, l).unwrap();
            if !same {
                println!("  ({p},{s},{n}) l={l}: expansion mismatch");
            }
            ok &= same;
        }
    }
    report(2, ok, "closed formula = extraction, leading terms, column sums", start);
    assert!(ok);
}

#[test]
fn criterion_3_general_m_and_module_independence() {
    let start = Instant::now();
    let inst = KZInstance::new(5, 2, 3).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(RANDOM_M_SEED);
    let mut ok = true;
    let mut calc = ModuleCalculus::new(&inst);
    for _ in 0..RANDOM_M_PER_CASE {
        let m = MVector::random(&inst.ctx, 3, RANDOM_M_MAX_SHIFT, &mut rng);
        for r in 1..=inst.s() {
            let pr = inst.ctx.p.pow(r);
            for l in 1..=m.total() / pr {
                let rec = extract_solution(&inst, &m, l, r).unwrap();
                if rec.vector.is_zero() {
                    continue;
                }
                let sub = inst.at_level(r).unwrap();
                let solves = verify_solution(&rec.vector, &sub).unwrap().pass;
                if !solves {
                    println!("  M={:?} l={l} r={r}: not a solution", m.entries());
                }
                ok &= solves;
            }
        }
        for j in 1..=3 {
            let rep = verify_shift_relation(&inst, &m, j, 1, 2).unwrap();
            if !rep.pass {
                println!("  shift M={:?} j={j} fails", m.entries());
            }
            ok &= rep.pass;
        }
        let rep = calc.module_independence(&m).unwrap();
        if !rep.pass {
            println!("  module independence fails for M={:?}", m.entries());
        }
        ok &= rep.pass;
    }
    let tilde = calc.tilde_equivalence().unwrap();
    ok &= tilde.pass;

    let mut valuations = 0;
    for p in [3u64, 5, 7] {
        for s in 1..=3u32 {
            for a in 1..=p.pow(s) {
                let c = binom_valuation_ps(p, s, a).unwrap();
                ok &= c.holds;
                valuations += 1;
            }
            for r in 0..s {
                for m in (1..=2 * p).filter(|m| m % p != 0) {
                    for l in 1..=3 {
                        let c = binom_shift_divisibility(p, s, r, m, l).unwrap();
                        if !c.holds {
                            println!("  shift divisibility fails at p={p} s={s} r={r} m={m} l={l}");
                        }
                        ok &= c.holds;
                        valuations += 1;
                    }
                }
            }
        }
    }
    report(3, ok, &format!("random M, shift identity, module independence, {valuations} valuations"), start);
    assert!(ok);
}

#[test]
fn criterion_4_cartier_manin() {
    let start = Instant::now();
    let mut ok = true;
    for (p, n, t) in [(5, 3, 2), (5, 3, 3), (7, 3, 2), (5, 5, 2)] {
        let rep = verify_grading_relation(p, n, t).unwrap();
        if !rep.pass {
            println!("  ({p},{n},{t}): {:?}", rep.relations);
        }
        ok &= rep.pass;
    }
    let it = verify_iterated(5, 3, 3).unwrap();
    ok &= it.pass;
    report(4, ok, "graded relation mod p and iterated product", start);
    assert!(ok);
}

#[test]
fn criterion_5_asymptotic_factorization() {
    let start = Instant::now();
    let mut ok = true;
    for (p, s, n) in CASES {
        let inst = KZInstance::new(p, s, n).unwrap();
        for l in 1..=inst.g as u64 {
            let rep = factorization_check(&inst, l).unwrap();
            if !rep.pass {
                println!("  ({p},{s},{n}) l={l}: {rep:?}");
            }
            ok &= rep.pass;
        }
        if n == 3 {
            let (negative, e1, triples) = n3_triples(&inst).unwrap();
            let pre = prefactor(&inst, 1).unwrap();
            let hat = hat_solution(&inst, 1).unwrap();
            let sign = pre.sign();
            let mut same = pre.negative == negative && pre.exponents == [e1 as u32, 0];
            for (a, t) in triples.iter().enumerate() {
                let m = Monomial::from_exponents(&[e1 as u32, a as u32]).unwrap();
                let want: Vec<BigInt> = t.iter().map(|c| c * &sign).collect();
                same &= hat.coefficients_at(&m) == want;
            }
            same &= hat.term_count() == triples.iter().flatten().filter(|c| **c != BigInt::from(0)).count();
            if !same {
                println!("  ({p},{s},3): explicit triple form differs");
            }
            ok &= same;
        }
    }
    report(5, ok, "hat I = u^{l,s} T^{l,s}, constant terms, n = 3 triples", start);
    assert!(ok);
}

#[test]
fn criterion_6_convergence_n3() {
    let start = Instant::now();
    let rep = converge_t_n3(CONV_P, CONV_N3_SMAX, CONV_SAMPLES, CONV_SEED, CONV_PREC).unwrap();
    let constants = rep.rows.iter().all(|r| r.constant_distance == Valuation::Finite(r.s));
    for r in &rep.rows {
        println!("  s={} worst valuation {} (bound >= {})", r.s, r.worst, r.bounds.iter().min().unwrap());
    }
    let ok = rep.pass && rep.strictly_decreasing && constants;
    report(6, ok, "bound at every sample, strict decay, constant distance p^-s", start);
    assert!(ok);
}

#[test]
fn criterion_7_convergence_n5() {
    let start = Instant::now();
    let mut ok = true;
    for l in [1, 2] {
        let spec = ConvergenceSpec {
            precision: CONV_PREC,
            ..ConvergenceSpec::new(CONV_P, 5, l, CONV_N5_SMAX, CONV_SAMPLES, CONV_SEED)
        };
        let rep = converge_q_general(&spec, false).unwrap();
        for r in &rep.rows {
            println!("  l={l} s={} worst valuation {} within bound {}", r.s, r.worst, r.within_bound);
        }
        ok &= rep.pass;
    }
    let d = disjoint_domains(CONV_P, DISJOINT_POINTS, DISJOINT_SEED).unwrap();
    println!("  disjoint: {} / {} / both {}", d.in_first, d.in_second, d.in_both);
    ok &= d.pass;
    report(7, ok, "n = 5 bounds for l = 1, 2 and disjoint domains", start);
    assert!(ok);
}

#[test]
fn criterion_8_classical_example() {
    let start = Instant::now();
    let rep = classic(5, 3).unwrap();
    for l in &rep.levels {
        println!(
            "  s={}: coefficientwise {} (failing k = {:?}), on |z| < 1 {}",
            l.s, l.congruent_coefficientwise, l.failing, l.congruent_on_disc
        );
    }
    report(8, rep.pass, "partial sums congruent mod p^s coefficientwise", start);
    assert!(rep.pass);
}

#[test]
fn criterion_9_padic_kernel() {
    let start = Instant::now();
    let mut ok = true;
    for p in [5u64, 7] {
        for r in 0..p {
            let w = teichmuller(&PAdicNumber::new(p, KERNEL_PREC, r).unwrap());
            ok &= w.pow(p) == w && w.digit0() == r;
        }
        for alpha in (1..p).filter(|&a| is_nonzero_square_mod_p(a, p)) {
            let beta = (1..p).find(|b| b * b % p == alpha).unwrap();
            for t in sample_disc(p, DiscSpec::residue(alpha), 20, KERNEL_SEED, KERNEL_PREC).unwrap() {
                let y = hensel_sqrt(&t, beta).unwrap();
                ok &= y.mul(&y) == t && y.digit0() == beta;
            }
        }
    }
    for alpha in 0..5 {
        let samples = sample_disc(5, DiscSpec::residue(alpha), KERNEL_SAMPLES, KERNEL_SEED + alpha, KERNEL_PREC).unwrap();
        ok &= check_xps_convergence(5, alpha, &samples, KERNEL_SMAX).unwrap().pass;
    }
    report(9, ok, "Teichmuller fixed points, square roots, step bound", start);
    assert!(ok);
}
