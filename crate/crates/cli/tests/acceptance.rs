//! Acceptance checks. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any fails.

use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use udec_core::capacity::{
    capacity, unconstrained_capacity, verify_mcmillan_capacity_equivalence, DEFAULT_TOLERANCE,
};
use udec_core::decodability::{build_q_moore, DEFAULT_SPECTRAL_TOLERANCE};
use udec_core::simulate::mix64;
use udec_core::sweep::{family, FamilyParams};
use udec_core::{
    brute_force_ud, check_necessary_condition, decode, example, expected_length,
    test_unique_decodability, SymbolCode,
};

type Check = Result<String, String>;
type Criterion = (&'static str, Duration, fn() -> Check);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn entropy_formula() -> Check {
    let s = example::source();
    let mut worst = 0.0f64;
    for n in 1..=32 {
        worst = worst.max((s.joint_entropy(n) - (2.0 + 1.5 * (n as f64 - 1.0))).abs());
    }
    ensure(worst <= 1e-9, || format!("max error {worst:e}"))?;
    Ok(format!("max error {worst:.1e} over n = 1..32"))
}

fn negative_redundancy() -> Check {
    let s = example::source();
    let alt = example::alternative_code();
    let classic = example::classic_code();
    let mut worst = 0.0f64;
    for n in 1..=32 {
        let nf = n as f64;
        let a = expected_length(&alt, &s, n).map_err(|e| e.to_string())?;
        let c = expected_length(&classic, &s, n).map_err(|e| e.to_string())?;
        let h = s.joint_entropy(n);
        worst = worst
            .max((a - 1.5 * nf).abs())
            .max((c - (2.0 + 1.5 * (nf - 1.0))).abs())
            .max((h - a - 0.5).abs());
    }
    ensure(worst <= 1e-9, || format!("max error {worst:e}"))?;
    Ok(format!(
        "entropy - alternative = 0.5, max error {worst:.1e}"
    ))
}

fn decodability_verdicts() -> Check {
    let alt = example::alternative_code();
    let s = example::source();
    let v = test_unique_decodability(&s, &alt).map_err(|e| e.to_string())?;
    ensure(v.decodable, || "example pair reported not decodable".into())?;
    let b = brute_force_ud(&s, &alt, 8).map_err(|e| e.to_string())?;
    ensure(b.decodable, || {
        format!("brute force disagrees: {:?}", b.witness)
    })?;

    let f = example::full_support_source();
    let v = test_unique_decodability(&f, &alt).map_err(|e| e.to_string())?;
    let w = v.witness.ok_or("full-support pair reported decodable")?;
    let names = [f.format_sequence(&w.first), f.format_sequence(&w.second)];
    ensure(names == ["AB", "C"], || format!("witness {names:?}"))?;
    let b = brute_force_ud(&f, &alt, 8).map_err(|e| e.to_string())?;
    ensure(!b.decodable, || "brute force found no collision".into())?;
    Ok("decodable / not decodable with witness (AB, C); brute force agrees".into())
}

fn spectral_boundary() -> Check {
    let q = build_q_moore(&example::source(), &example::alternative_code())
        .map_err(|e| e.to_string())?;
    let rho = q
        .spectral_radius(DEFAULT_SPECTRAL_TOLERANCE)
        .map_err(|e| e.to_string())?;
    let kraft = example::alternative_code().kraft_sum();
    ensure((rho - 1.0).abs() <= 1e-8, || format!("rho = {rho}"))?;
    ensure(kraft == 1.5, || format!("kraft sum = {kraft}"))?;
    Ok(format!("rho = {rho:.12}, kraft sum = {kraft}"))
}

fn full_support_reduction() -> Check {
    let params = FamilyParams {
        max_symbols: 6,
        max_len: 6,
        radix: 2,
        full_support: true,
    };
    let mut worst = 0.0f64;
    for case in family(&params, 100, 5) {
        let rho = check_necessary_condition(&case.source, &case.code)
            .map_err(|e| e.to_string())?
            .rho;
        worst = worst.max((rho - case.code.kraft_sum()).abs());
    }
    ensure(worst <= 1e-9, || format!("max |rho - kraft| = {worst:e}"))?;
    Ok(format!("100 cases, max |rho - kraft| = {worst:.1e}"))
}

fn sweep_family() -> Vec<udec_core::sweep::Case> {
    family(&FamilyParams::SMALL, 300, 2024)
}

fn soundness_sweep() -> Check {
    let (mut decodable, mut collisions) = (0, 0);
    for (k, case) in sweep_family().iter().enumerate() {
        let v = test_unique_decodability(&case.source, &case.code).map_err(|e| e.to_string())?;
        let rho = check_necessary_condition(&case.source, &case.code)
            .map_err(|e| e.to_string())?
            .rho;
        let b = brute_force_ud(&case.source, &case.code, 8).map_err(|e| e.to_string())?;
        if v.decodable {
            decodable += 1;
            ensure(rho <= 1.0 + 1e-9, || {
                format!("case {k}: decodable with rho = {rho}")
            })?;
        }
        if let Some(w) = &b.witness {
            collisions += 1;
            ensure(w.is_valid(&case.source, &case.code), || {
                format!("case {k}: bad brute witness")
            })?;
            ensure(!v.decodable, || {
                format!("case {k}: brute force collision {w:?} missed")
            })?;
        }
        if let Some(w) = &v.witness {
            ensure(w.is_valid(&case.source, &case.code), || {
                format!("case {k}: bad witness {w:?}")
            })?;
            let short = w.first.len().max(w.second.len()) <= 8;
            ensure(!short || !b.decodable, || {
                format!("case {k}: witness {w:?} not seen by brute force")
            })?;
        }
    }
    Ok(format!(
        "300 cases: {decodable} decodable, {collisions} collisions, no disagreement"
    ))
}

fn round_trip() -> Check {
    let s = example::source();
    let alt = example::alternative_code();
    let classic = example::classic_code();
    for k in 0..10_000u64 {
        let n = (mix64(7, k) % 65) as usize;
        let seq = s.sample(n, k);
        for (name, back) in [
            ("alternative", decode(&s, &alt, &alt.encode(&seq).unwrap())),
            (
                "classic",
                decode(&s, &classic, &classic.encode(&seq).unwrap()),
            ),
        ] {
            ensure(back.as_ref().ok() == Some(&seq), || {
                format!("{name} code, trajectory {k}: {back:?}")
            })?;
        }
    }
    Ok("10^4 trajectories, both codes".into())
}

fn capacities() -> Check {
    let e = |e: udec_core::Error| e.to_string();
    let two = unconstrained_capacity(&[1.0, 1.0], DEFAULT_TOLERANCE).map_err(e)?;
    ensure(two.capacity_bits == 1.0, || format!("{{1,1}}: {two:?}"))?;
    let golden = unconstrained_capacity(&[1.0, 2.0], DEFAULT_TOLERANCE).map_err(e)?;
    ensure((golden.root - 1.618033988).abs() <= 1e-8, || {
        format!("{{1,2}}: {golden:?}")
    })?;
    let graph = capacity(&example::channel(), DEFAULT_TOLERANCE).map_err(e)?;
    ensure((graph.capacity_bits - 1.0).abs() <= 1e-8, || {
        format!("graph: {graph:?}")
    })?;
    for (k, case) in sweep_family().iter().enumerate() {
        let eq = verify_mcmillan_capacity_equivalence(&case.source, &case.code).map_err(e)?;
        ensure(eq.consistent, || format!("case {k}: {eq:?}"))?;
    }
    Ok(format!(
        "{{1,1}} -> 1, {{1,2}} -> {:.9}, graph -> {:.12}, equivalence on 300 cases",
        golden.root, graph.capacity_bits
    ))
}

fn simulate_json(seed: &str) -> Result<String, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_udec"))
        .args([
            "simulate",
            "--source",
            "builtin:source",
            "--code",
            "builtin:alternative_code",
        ])
        .args(["--n", "20", "--trials", "100000", "--seed", seed])
        .output()
        .map_err(|e| e.to_string())?;
    ensure(out.status.success(), || {
        String::from_utf8_lossy(&out.stderr).into_owned()
    })?;
    String::from_utf8(out.stdout).map_err(|e| e.to_string())
}

fn monte_carlo() -> Check {
    let first = simulate_json("42")?;
    let second = simulate_json("42")?;
    ensure(first == second, || "output differs between runs".into())?;
    let v: serde_json::Value = serde_json::from_str(&first).map_err(|e| e.to_string())?;
    let mean = v["empirical_mean"].as_f64().ok_or("no mean")?;
    let se = v["std_error"].as_f64().ok_or("no std_error")?;
    ensure((mean - 30.0).abs() <= 3.0 * se, || {
        format!("mean {mean}, std error {se}")
    })?;
    Ok(format!("mean {mean:.4}, std error {se:.4}, reproducible"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("entropy formula", Duration::from_secs(1), entropy_formula),
        (
            "negative redundancy",
            Duration::from_secs(1),
            negative_redundancy,
        ),
        (
            "decodability verdicts",
            Duration::from_secs(5),
            decodability_verdicts,
        ),
        (
            "spectral boundary",
            Duration::from_secs(1),
            spectral_boundary,
        ),
        (
            "full-support reduction",
            Duration::from_secs(5),
            full_support_reduction,
        ),
        ("soundness sweep", Duration::from_secs(60), soundness_sweep),
        ("round trip", Duration::from_secs(10), round_trip),
        ("capacity", Duration::from_secs(10), capacities),
        ("monte carlo", Duration::from_secs(30), monte_carlo),
    ];
    let mut failed = 0;
    for (i, (name, limit, check)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let result = check();
        let took = start.elapsed();
        let result = match result {
            Ok(detail) if took > limit => {
                Err(format!("{detail}; took {took:.2?}, limit {limit:?}"))
            }
            r => r,
        };
        match result {
            Ok(detail) => println!("PASS {}. {name} ({took:.2?}): {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {}. {name} ({took:.2?}): {why}", i + 1);
            }
        }
    }
    println!("{} of 9 criteria passed", 9 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
