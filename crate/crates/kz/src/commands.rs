use std::io::Write as _;
use std::path::Path;

use anyhow::{bail, ensure, Context, Result};
use kz_core::asymptotic::{
    factorization_check, q_form_check, t_l_series, t_ls_closed_form, truncation_correspondence, verify_shift_solution,
};
use kz_core::cartier::{cartier_matrix, verify_grading_relation, verify_iterated};
use kz_core::convergence::{classic, converge_q_general, default_precision, ConvergenceSpec};
use kz_core::kz::{verify_solution, KZInstance};
use kz_core::solutions::{extract_solution, MVector, SolutionRecord};
use kz_core::{is_odd_prime, SCHEMA};
use serde::Serialize;
use serde_json::{json, Value};

use crate::config::{parse_list, RunFile};
use crate::{AsymptArgs, CartierArgs, Command, ConvergeArgs, GenArgs, Instance, VerifyArgs};

const DEFAULT_SAMPLES: usize = 50;
const DEFAULT_SEED: u64 = 1;
const DEFAULT_SMAX: u32 = 3;

#[derive(Debug, Serialize)]
pub struct Artifact {
    pub schema: &'static str,
    pub command: &'static str,
    pub params: Value,
    pub result: Value,
    pub pass: bool,
}

impl Artifact {
    fn new(command: &'static str, params: Value, result: impl Serialize, pass: bool) -> Result<Self> {
        Ok(Artifact { schema: SCHEMA, command, params, result: serde_json::to_value(result)?, pass })
    }

    pub fn write(&self, path: Option<&Path>) -> Result<()> {
        let mut text = serde_json::to_string_pretty(self)?;
        text.push('\n');
        match path {
            Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display())),
            None => std::io::stdout().lock().write_all(text.as_bytes()).context("writing to stdout"),
        }
    }
}

/// Parameter checks shared by every command, reported as usage errors.
fn check_pn(p: u64, n: usize) -> Result<()> {
    ensure!(is_odd_prime(p), "p = {p} must be an odd prime");
    ensure!(n >= 3 && n % 2 == 1, "n = {n} must be odd and at least 3");
    ensure!(p >= n as u64, "need p >= n (p = {p}, n = {n})");
    Ok(())
}

fn instance(args: &Instance, file: &RunFile) -> Result<KZInstance> {
    let p = file.require(args.p, "p")?;
    let n = file.require(args.n, "n")?;
    let s: u32 = file.require(args.s, "s")?;
    check_pn(p, n)?;
    ensure!(s >= 1, "s must be at least 1");
    Ok(KZInstance::new(p, s, n)?)
}

pub fn dispatch(cmd: &Command, file: &RunFile) -> Result<Artifact> {
    match cmd {
        Command::Gen(a) => gen(a, file),
        Command::Verify(a) => verify(a),
        Command::Cartier(a) => cartier(a, file),
        Command::Asympt(a) => asympt(a, file),
        Command::Converge(a) => converge(a, file),
        Command::Classic(a) => run_classic(file.require(a.p, "p")?, file.pick(a.smax, "smax")?.unwrap_or(DEFAULT_SMAX)),
    }
}

fn gen(a: &GenArgs, file: &RunFile) -> Result<Artifact> {
    let inst = instance(&a.inst, file)?;
    let l = file.require(a.l, "l")?;
    let r = file.pick(a.r, "r")?.unwrap_or(inst.s());
    ensure!((1..=inst.s()).contains(&r), "r = {r} must lie in 1..={}", inst.s());
    let level = inst.at_level(r)?;
    let mvec = match file.pick(a.mvec.clone(), "mvec")? {
        Some(text) => {
            let m = parse_list(&text)?;
            ensure!(m.len() == inst.n, "mvec has {} entries, n = {}", m.len(), inst.n);
            MVector::new(&level.ctx, m)?
        }
        None => MVector::minimal(&level.ctx, inst.n),
    };
    let record = extract_solution(&inst, &mvec, l, r)?;
    let verification = verify_solution(&record.vector, &level)?;
    let params = json!({ "p": inst.p(), "s": inst.s(), "n": inst.n, "l": l, "r": r, "mvec": mvec.entries() });
    let pass = verification.pass;
    Artifact::new("gen", params, json!({ "record": record, "verification": verification }), pass)
}

/// Accepts a `gen` artifact or a bare solution record.
fn read_record(path: &Path) -> Result<SolutionRecord> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let value: Value = serde_json::from_str(&text).with_context(|| format!("{} is not JSON", path.display()))?;
    let body = match value.get("schema") {
        Some(tag) => {
            ensure!(tag == SCHEMA, "unsupported schema {tag}");
            value.pointer("/result/record").cloned().context("artifact carries no solution record")?
        }
        None => value,
    };
    serde_json::from_value(body).context("malformed solution record")
}

fn verify(a: &VerifyArgs) -> Result<Artifact> {
    let record = read_record(&a.input)?;
    check_pn(record.p, record.n)?;
    if record.r == 0 || record.r > record.s {
        bail!("record level r = {} outside 1..={}", record.r, record.s);
    }
    let level = KZInstance::new(record.p, record.r, record.n)?;
    let verification = verify_solution(&record.vector, &level)?;
    let params = json!({
        "input": a.input.display().to_string(),
        "p": record.p, "s": record.s, "n": record.n, "l": record.l, "r": record.r,
    });
    let pass = verification.pass;
    Artifact::new("verify", params, json!({ "verification": verification }), pass)
}

fn cartier(a: &CartierArgs, file: &RunFile) -> Result<Artifact> {
    let p = file.require(a.p, "p")?;
    let n = file.require(a.n, "n")?;
    check_pn(p, n)?;
    let t = file.pick(a.t, "t")?.unwrap_or(2);
    ensure!(t >= 2, "t must be at least 2");
    let verify = file.switch(a.verify, "verify")?;
    let matrix = cartier_matrix(p, n)?;
    let degrees_ok = matrix.degrees_ok();
    let frobenius = matrix.frobenius_consistent()?;
    let mut pass = degrees_ok && frobenius;
    let mut result = json!({ "matrix": matrix, "degrees_ok": degrees_ok, "frobenius_consistent": frobenius });
    if verify {
        let grading = verify_grading_relation(p, n, t)?;
        let iterated = verify_iterated(p, n, t)?;
        pass &= grading.pass && iterated.pass;
        result["grading"] = serde_json::to_value(&grading)?;
        result["iterated"] = serde_json::to_value(&iterated)?;
    }
    Artifact::new("cartier", json!({ "p": p, "n": n, "t": t, "verify": verify }), result, pass)
}

fn asympt(a: &AsymptArgs, file: &RunFile) -> Result<Artifact> {
    let inst = instance(&a.inst, file)?;
    let l = file.require(a.l, "l")?;
    ensure!((1..=inst.g as u64).contains(&l), "l = {l} must lie in 1..={}", inst.g);
    let half = inst.ctx.half;
    if file.switch(a.series, "series")? {
        let cutoff = file.pick(a.cutoff, "cutoff")?.unwrap_or(half);
        let prec = file.pick(a.prec, "prec")?.unwrap_or(default_precision(inst.s()));
        ensure!(prec >= 1, "prec must be at least 1");
        let series = t_l_series(inst.p(), inst.n, l, cutoff, prec)?;
        let mut pass = series.support_ok();
        let mut result = json!({ "series": series });
        // The level-s truncation only lives up to degree (p^s - 1)/2.
        if cutoff <= half {
            let corr = truncation_correspondence(&inst, l, cutoff, prec)?;
            pass &= corr.pass;
            result["correspondence"] = serde_json::to_value(&corr)?;
        }
        let params = json!({ "p": inst.p(), "s": inst.s(), "n": inst.n, "l": l, "series": true, "cutoff": cutoff, "prec": prec });
        return Artifact::new("asympt", params, result, pass);
    }
    let translation = file.switch(a.translation, "translation")?;
    let shift = verify_shift_solution(&inst, l, translation)?;
    let factorization = factorization_check(&inst, l)?;
    let q_form = q_form_check(&inst, l)?;
    let closed = t_ls_closed_form(&inst, l)?;
    let pass = shift.pass && factorization.pass && q_form.pass;
    let params = json!({ "p": inst.p(), "s": inst.s(), "n": inst.n, "l": l, "series": false, "translation": translation });
    let result = json!({ "shift": shift, "factorization": factorization, "q_form": q_form, "closed_form": closed });
    Artifact::new("asympt", params, result, pass)
}

fn converge(a: &ConvergeArgs, file: &RunFile) -> Result<Artifact> {
    let p = file.require(a.p, "p")?;
    let s_max = file.pick(a.smax, "smax")?.unwrap_or(DEFAULT_SMAX);
    if file.switch(a.classic, "classic")? {
        return run_classic(p, s_max);
    }
    let n = file.require(a.n, "n")?;
    check_pn(p, n)?;
    ensure!(s_max >= 1, "smax must be at least 1");
    let l = file.pick(a.l, "l")?.unwrap_or(1);
    ensure!((1..=(n as u64 - 1) / 2).contains(&l), "l = {l} must lie in 1..={}", (n - 1) / 2);
    let samples = file.pick(a.samples, "samples")?.unwrap_or(DEFAULT_SAMPLES);
    ensure!(samples > 0, "samples must be positive");
    let seed = file.pick(a.seed, "seed")?.unwrap_or(DEFAULT_SEED);
    let mut spec = ConvergenceSpec::new(p, n, l, s_max, samples, seed);
    if let Some(prec) = file.pick(a.prec, "prec")? {
        ensure!(prec > s_max, "prec must exceed smax");
        spec.precision = prec;
    }
    if let Some(beta) = file.pick(a.beta, "beta")? {
        ensure!(beta % p != 0, "beta must be a unit");
        spec.beta = beta % p;
    }
    let u_form = file.switch(a.u_form, "u-form")?;
    ensure!(!u_form || n == 3, "--u-form needs n = 3");
    let report = converge_q_general(&spec, u_form)?;
    let pass = report.pass;
    Artifact::new("converge", json!({ "spec": spec, "u_form": u_form }), report, pass)
}

fn run_classic(p: u64, s_max: u32) -> Result<Artifact> {
    ensure!(is_odd_prime(p), "p = {p} must be an odd prime");
    ensure!(s_max >= 1, "smax must be at least 1");
    let report = classic(p, s_max)?;
    let pass = report.pass;
    Artifact::new("classic", json!({ "p": p, "smax": s_max }), report, pass)
}
