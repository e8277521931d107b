//! Acceptance criteria. Prints one PASS/FAIL line per criterion and exits
//! non-zero when a criterion fails that is not listed in `KNOWN_FAILURES`.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use evpos_core::classify::{classify, coefficient_at, NecessityWitness, VerdictStatus};
use evpos_core::corpus::corpus;
use evpos_core::parse::parse;
use evpos_core::partitions::{
    binomial_ratio_bound_check, binomial_ratio_threshold, coefficient_via_partitions,
    compression_check, consecutive_decomposition,
};
use evpos_core::poly::{rat, SparsePolynomial};
use evpos_core::powers::{
    coefficient_exact, profile, profiles_upto, range_check, threshold_search,
};
use evpos_core::rational::{ln_abs, Rat};
use evpos_core::saddle::{estimate_coefficient_with, SaddleOptions};
use evpos_core::strongpos::{
    certify, gap_expansion, verify_witness, Status, StrongPositivityVerdict, DEFAULT_DEPTH_BUDGET,
};

const CORPUS_SEED: u64 = 20_240_601;
const CORPUS_SIZE: usize = 200;
const CORPUS_MAX_DEGREE: u64 = 6;

/// Criteria whose statement is false for the stated inputs.
const KNOWN_FAILURES: &[(u32, &str)] = &[
    (
        2,
        "[z^5](1+z^2+z^3-Az^5)^m equals m(m-1) - Am, not C(m,2) - Am; for A = 100 the first positive m is 102",
    ),
    (
        5,
        "the reverse of 1+z^2+z^3-z^4/10+z^5 has a negative z^1 that is not covered, so [z^(5m-1)] f^m = -m/10 for every m",
    ),
];

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn gap_five() -> SparsePolynomial {
    parse("1 + z^3 + z^4 - 1/100 z^5 + z^6 + z^7 + z^10").unwrap()
}

fn two_three_four() -> SparsePolynomial {
    parse("1 + z^2 + z^3 - 1/10 z^4 + z^5").unwrap()
}

fn criterion_1() -> Outcome {
    let f = gap_five();
    let sp = certify(&f, DEFAULT_DEPTH_BUDGET).unwrap();
    let v = classify(&f).unwrap();
    let index_ok = matches!(
        &v.witness,
        Some(NecessityWitness::CoveringFailure { k: 5, index, .. }) if index.slope == 0 && index.offset == 5
    );
    let bad_m: Vec<u64> = (1..=60)
        .filter(|&m| coefficient_exact(&f, 5, m).unwrap() != rat(-(m as i64), 100))
        .collect();
    outcome(
        sp.status == Status::Certified
            && v.status == VerdictStatus::NotEventuallyNonNegative
            && index_ok
            && bad_m.is_empty(),
        format!(
            "certify {:?}, classify {:?}, covering witness at 5: {index_ok}, mismatches in [1,60]: {bad_m:?}",
            sp.status, v.status
        ),
    )
}

fn criterion_2() -> Outcome {
    let mut notes = Vec::new();
    let mut pass = true;
    for (a, forced_first_positive) in [(1i64, 4u64), (100, 202)] {
        let f = SparsePolynomial::from_term_list([
            (0, rat(1, 1)),
            (2, rat(1, 1)),
            (3, rat(1, 1)),
            (5, rat(-a, 1)),
        ])
        .unwrap();
        let profiles = profiles_upto(&f, 500).unwrap();
        let mut first_mismatch = None;
        let mut first_positive = None;
        for p in &profiles {
            let m = p.m as i64;
            let c = p.coefficient(5);
            let claimed = Rat::from_integer(BigInt::from(m * (m - 1) / 2 - a * m));
            if c != claimed && first_mismatch.is_none() {
                first_mismatch = Some((p.m, c.clone(), claimed));
            }
            if c.is_positive() && first_positive.is_none() {
                first_positive = Some(p.m);
            }
        }
        let ok = first_mismatch.is_none() && first_positive == Some(forced_first_positive);
        pass &= ok;
        notes.push(format!(
            "A={a}: first mismatch {:?}, first positive m {:?} (claimed {forced_first_positive})",
            first_mismatch.map(|(m, got, want)| format!("m={m} exact {got} vs claimed {want}")),
            first_positive
        ));
    }
    outcome(pass, notes.join("; "))
}

fn criterion_3() -> Outcome {
    let polys: Vec<SparsePolynomial> = corpus(CORPUS_SEED, CORPUS_SIZE, CORPUS_MAX_DEGREE)
        .into_iter()
        .filter(|f| f.degree().unwrap() <= 5)
        .collect();
    let mut checked = 0u64;
    let mut bad = Vec::new();
    for (i, f) in polys.iter().enumerate() {
        let profiles = profiles_upto(f, 25).unwrap();
        for m in 0..=25u64 {
            for n in 0..=10u64 {
                let oracle = if m == 0 {
                    if n == 0 {
                        rat(1, 1)
                    } else {
                        Rat::zero()
                    }
                } else {
                    profiles[m as usize - 1].coefficient(n)
                };
                let via = coefficient_via_partitions(f, n, m).unwrap();
                checked += 1;
                if via != oracle {
                    bad.push((i, n, m));
                }
            }
        }
    }
    outcome(
        bad.is_empty() && !polys.is_empty(),
        format!(
            "{} polynomials, {checked} (n, m) pairs, mismatches {:?}",
            polys.len(),
            &bad[..bad.len().min(5)]
        ),
    )
}

fn criterion_4() -> Outcome {
    let r = compression_check(&two_three_four(), 10_000, 10).unwrap();
    outcome(
        r.inequality_holds && r.preimages_bounded && r.negative_terms > 0,
        format!(
            "{} negative partitions, min Cont(M)/(d|Cont|) = {:.3e}, max preimages {} (d = {})",
            r.negative_terms, r.min_ratio, r.max_preimages, r.degree
        ),
    )
}

fn criterion_5() -> Outcome {
    let f = two_three_four();
    let d = f.degree().unwrap();
    let mut low_fail = Vec::new();
    let mut top_fail = Vec::new();
    for m in 50..=300u64 {
        let s = (m as f64).sqrt().floor() as u64;
        if !range_check(&f, m, 0, s).unwrap().ok {
            low_fail.push(m);
        }
        let top = d * m;
        if !range_check(&f, m, top - s, top).unwrap().ok {
            top_fail.push(m);
        }
    }
    let sample = coefficient_exact(&f, 5 * 50 - 1, 50).unwrap();
    outcome(
        low_fail.is_empty() && top_fail.is_empty(),
        format!(
            "low range failures {}, top range failures {} of 251 (e.g. [z^249] f^50 = {sample})",
            low_fail.len(),
            top_fail.len()
        ),
    )
}

fn odd_powers_have_negative(f: &SparsePolynomial) -> bool {
    (41..=61u64)
        .step_by(2)
        .all(|m| profile(f, m).unwrap().first_negative.is_some())
}

fn criterion_6() -> Outcome {
    let polys = corpus(CORPUS_SEED, CORPUS_SIZE, CORPUS_MAX_DEGREE);
    let (mut yes, mut no, mut unknown) = (0, 0, 0);
    let mut contradictions = Vec::new();
    for (i, f) in polys.iter().enumerate() {
        let v = classify(f).unwrap();
        match v.status {
            VerdictStatus::EventuallyNonNegative => {
                yes += 1;
                let cov_ok = v.covering.as_ref().is_none_or(|c| c.two_sided);
                let sp_ok = v
                    .strong_positivity
                    .as_ref()
                    .is_none_or(|s| s.status == Status::Certified);
                let t = threshold_search(f, 150).unwrap();
                let window_ok = t.m0.is_some_and(|m0| {
                    (m0..=m0 + 50).all(|m| profile(f, m).unwrap().is_non_negative())
                });
                if !(cov_ok && sp_ok && window_ok) {
                    contradictions.push(format!("#{i} {f}: ENN but m0 = {:?}", t.m0));
                }
            }
            VerdictStatus::NotEventuallyNonNegative => {
                no += 1;
                let ok = match &v.witness {
                    Some(NecessityWitness::CoveringFailure { index, .. }) => {
                        (1..=60).all(|m| coefficient_at(f, *index, m).unwrap().is_negative())
                    }
                    Some(NecessityWitness::StrongPositivityFailure { .. }) => {
                        odd_powers_have_negative(f)
                    }
                    Some(NecessityWitness::SignFailure { index, .. }) => (41..=61u64)
                        .step_by(2)
                        .all(|m| coefficient_at(f, *index, m).unwrap().is_negative()),
                    None => false,
                };
                if !ok {
                    contradictions.push(format!("#{i} {f}: witness not confirmed"));
                }
            }
            VerdictStatus::Inconclusive => {
                unknown += 1;
                let cov_ok = v.covering.as_ref().is_some_and(|c| c.two_sided);
                let sp_ok = v
                    .strong_positivity
                    .as_ref()
                    .is_some_and(|s| s.status == Status::Inconclusive);
                if !(cov_ok && sp_ok) {
                    contradictions.push(format!("#{i} {f}: Inconclusive outside its invariant"));
                }
            }
        }
    }
    let rate = unknown as f64 / polys.len() as f64;
    outcome(
        contradictions.is_empty() && rate <= 0.20,
        format!(
            "ENN {yes}, Not {no}, Inconclusive {unknown} ({:.1}%), contradictions {:?}",
            100.0 * rate,
            contradictions
        ),
    )
}

fn saddle_check(f: &SparsePolynomial, n: u64, m: u64) -> Result<(f64, f64, bool), String> {
    let opts = SaddleOptions {
        exact_limit: 0,
        ..SaddleOptions::default()
    };
    let e = estimate_coefficient_with(f, n, m, &opts).map_err(|e| e.to_string())?;
    let exact = coefficient_exact(f, n, m).map_err(|e| e.to_string())?;
    if !exact.is_positive() {
        return Err(format!("exact coefficient {exact} is not positive"));
    }
    let split = e.split.unwrap();
    let exact_scaled = (ln_abs(&exact) - split.log_scale).exp();
    let rel = (split.total() / (2.0 * std::f64::consts::PI) - exact_scaled).abs() / exact_scaled;
    let sum_rel = (split.total() - 2.0 * std::f64::consts::PI * exact_scaled).abs()
        / (2.0 * std::f64::consts::PI * exact_scaled);
    Ok((rel, sum_rel, split.dominant() && exact.is_positive()))
}

fn criterion_7() -> Outcome {
    let mut cases: Vec<(SparsePolynomial, u64, u64)> = vec![
        (parse("1 + z").unwrap(), 10, 200),
        (parse("1 + z^2 + z^3").unwrap(), 12, 400),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(CORPUS_SEED);
    for f in corpus(CORPUS_SEED ^ 0x5add1e, 400, 3) {
        if cases.len() == 22 {
            break;
        }
        if !f.is_primitive() || classify(&f).unwrap().status != VerdictStatus::EventuallyNonNegative
        {
            continue;
        }
        let d = f.degree().unwrap();
        let m = 2 * 20u64.pow(d as u32 + 1);
        let lo = (m as f64).powf(-1.0 / (d as f64 + 1.0));
        let alpha = lo * (0.05 / lo).powf(rng.gen_range(0.0..1.0));
        let n = ((alpha * m as f64).round() as u64).max(1);
        cases.push((f, n, m));
    }
    let mut worst: f64 = 0.0;
    let mut worst_sum: f64 = 0.0;
    let mut failures = Vec::new();
    for (f, n, m) in &cases {
        match saddle_check(f, *n, *m) {
            Ok((rel, sum_rel, dominant)) => {
                worst = worst.max(rel);
                worst_sum = worst_sum.max(sum_rel);
                if rel >= 0.05 || sum_rel >= 0.01 || !dominant {
                    failures.push(format!(
                        "{f} n={n} m={m}: rel {rel:.2e}, dominant {dominant}"
                    ));
                }
            }
            Err(e) => failures.push(format!("{f} n={n} m={m}: {e}")),
        }
    }
    outcome(
        failures.is_empty() && cases.len() == 22,
        format!(
            "{} cases, worst rel error {worst:.2e}, worst split-sum error {worst_sum:.2e}, failures {failures:?}",
            cases.len()
        ),
    )
}

/// Strict positivity of the reduced gap on a grid over both halves.
fn grid_survives(f: &SparsePolynomial, points: usize) -> Result<(), String> {
    let h = f.shift_down(f.low_degree().unwrap());
    let side = ((points / 2) as f64).sqrt() as usize;
    for p in [h.clone(), h.reverse().unwrap()] {
        let reduced = gap_expansion(&p).reduced().ok_or("no gap")?;
        for i in 0..side {
            let r = (i as f64 + 0.5) / side as f64;
            for j in 0..side {
                let t = -1.0 + 2.0 * (j as f64 + 0.5) / side as f64;
                let v = reduced.eval_f64(r, t);
                if !(v > 0.0) {
                    return Err(format!("reduced gap {v:e} at r = {r}, t = {t}"));
                }
            }
        }
    }
    Ok(())
}

fn criterion_8() -> Outcome {
    let mut verdicts: Vec<(SparsePolynomial, StrongPositivityVerdict)> = Vec::new();
    let named = [
        "1 + z",
        "1 + z + z^2 + z^3",
        "1 + z^2 + z^3",
        "1 - z + z^2",
        "2 + z - z^2 + 2z^3",
    ];
    for s in named
        .iter()
        .map(|s| parse(s).unwrap())
        .chain(std::iter::once(gap_five()))
    {
        let v = certify(&s, DEFAULT_DEPTH_BUDGET).unwrap();
        verdicts.push((s, v));
    }
    for f in corpus(CORPUS_SEED, CORPUS_SIZE, CORPUS_MAX_DEGREE) {
        let v = certify(&f, DEFAULT_DEPTH_BUDGET).unwrap();
        verdicts.push((f, v));
    }
    let mut certified = 0;
    let mut refuted = 0;
    let mut problems = Vec::new();
    for (f, v) in &verdicts {
        match v.status {
            Status::Certified => {
                certified += 1;
                if let Err(e) = grid_survives(f, 1_000_000) {
                    problems.push(format!("{f}: {e}"));
                }
            }
            Status::Refuted => {
                refuted += 1;
                let w = v.witness.as_ref().unwrap();
                let ok = if w.equality {
                    // only non-primitive inputs produce equality witnesses
                    !f.shift_down(f.low_degree().unwrap()).is_primitive() || f.num_terms() == 1
                } else {
                    w.margin > w.error_bound && verify_witness(f, w)
                };
                if !ok {
                    problems.push(format!("{f}: witness {w:?}"));
                }
            }
            Status::Inconclusive => {}
        }
    }
    let alt = evpos_core::strongpos::refute(&parse("1 - z + z^2").unwrap(), 100_000).unwrap();
    let minus_one = (alt.z_re + 1.0).abs() < 1e-6 && alt.z_im.abs() < 1e-6;
    outcome(
        problems.is_empty() && minus_one,
        format!("{certified} certified (10^6-point grid each), {refuted} refuted, z = -1 found: {minus_one}, problems {problems:?}"),
    )
}

/// Largest `b` with `b^q (4d)^{dq} <= a^p`.
fn max_b(a: &BigInt, d: u64, (p, q): (u64, u64)) -> u64 {
    let rhs = num_traits::pow(a.clone(), p as usize);
    let scale = num_traits::pow(BigInt::from(4 * d), (d * q) as usize);
    let fits = |b: u64| num_traits::pow(BigInt::from(b), q as usize) * &scale <= rhs;
    let guess =
        (a.to_f64().unwrap().powf(p as f64 / q as f64) / (4.0 * d as f64).powi(d as i32)) as u64;
    let mut b = guess.saturating_add(2);
    while b > 0 && !fits(b) {
        b -= 1;
    }
    b
}

fn criterion_9() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(CORPUS_SEED);
    let gammas = [(1u64, 4u64), (1, 3), (1, 2), (2, 3), (3, 4)];
    let mut ratio_fail = Vec::new();
    let mut hyp_fail = 0;
    for _ in 0..10_000 {
        let d = rng.gen_range(1..=4u64);
        let gamma = gammas[rng.gen_range(0..gammas.len())];
        let threshold = binomial_ratio_threshold(d, gamma);
        let a = &threshold * BigInt::from(rng.gen_range(1..=1000u64))
            + BigInt::from(rng.gen_range(0..1000u64));
        let b = rng.gen_range(0..=max_b(&a, d, gamma).min(200));
        let i = rng.gen_range(-(d as i64)..=d as i64);
        let j = rng.gen_range(1..=d);
        let r = binomial_ratio_bound_check(&a, b, i, j, gamma, d).unwrap();
        if !r.hypotheses_satisfied {
            hyp_fail += 1;
        } else if !r.holds {
            ratio_fail.push((a.to_string(), b, i, j, gamma, d));
        }
    }
    let mut dec_fail = Vec::new();
    for _ in 0..10_000 {
        let m = rng.gen_range(2..=353u64);
        let x = rng.gen_range(8 * m * m..=1_000_000u64);
        match consecutive_decomposition(x, m) {
            Ok((a, b, c))
                if a * m + b * (m + 1) + c * (m - 1) == x && 4 * m * a.min(b).min(c) >= x => {}
            other => dec_fail.push((x, m, format!("{other:?}"))),
        }
    }
    outcome(
        ratio_fail.is_empty() && hyp_fail == 0 && dec_fail.is_empty(),
        format!(
            "binomial ratio: {} failures, {hyp_fail} generated tuples outside the hypotheses; decomposition: {} failures",
            ratio_fail.len(),
            dec_fail.len()
        ),
    )
}

fn main() -> ExitCode {
    let criteria: [(u32, &str, u64, fn() -> Outcome); 9] = [
        (1, "covering-gap counterexample", 30, criterion_1),
        (2, "worked coefficient example", 10, criterion_2),
        (3, "partition-sum identity", 60, criterion_3),
        (4, "compression inequality", 60, criterion_4),
        (5, "small and mirrored ranges", 120, criterion_5),
        (6, "classifier vs brute force", 600, criterion_6),
        (7, "saddle accuracy", 60, criterion_7),
        (8, "strong-positivity soundness", 120, criterion_8),
        (9, "binomial ratio and decomposition", 30, criterion_9),
    ];
    let mut unexpected = 0;
    for (id, name, limit, run) in criteria {
        let start = Instant::now();
        let out = run();
        let elapsed = start.elapsed();
        let in_time = elapsed < Duration::from_secs(limit);
        let pass = out.pass && in_time;
        let known = KNOWN_FAILURES.iter().find(|(k, _)| *k == id);
        let tag = match (pass, known) {
            (true, _) => "PASS".to_string(),
            (false, Some((_, why))) => format!("FAIL (known: {why})"),
            (false, None) => {
                unexpected += 1;
                "FAIL".to_string()
            }
        };
        println!(
            "criterion {id} [{name}]: {tag} in {:.2}s (limit {limit}s) :: {}",
            elapsed.as_secs_f64(),
            out.detail
        );
    }
    if unexpected == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{unexpected} unexpected failure(s)");
        ExitCode::FAILURE
    }
}
