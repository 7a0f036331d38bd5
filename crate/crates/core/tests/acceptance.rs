//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line each,
//! and exits nonzero if any failed.

use std::time::Instant;

use primdeg::digraph::{
    escape_witness, necessary_conditions, short_cycles_and_h, walk_positivity_check, Digraph,
};
use primdeg::engine::pattern_powers;
use primdeg::engine::TraceEnd;
use primdeg::generators::{
    derive_seed, lift_pattern, random_pattern, random_primitive_tensor, random_tensor,
    wielandt_tensor, Values,
};
use primdeg::oracle::{default_tmap_r_max, matrix_exponent, tmap_oracle_degree};
use primdeg::{
    analyze, column_fill_trace, degree_bound, tensor_power, Tensor, DEFAULT_MAX_ENTRIES,
};
use rand::{RngExt, SeedableRng};
use rand_xoshiro::SplitMix64;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(failures: &[String], detail: String) -> Outcome {
    if failures.is_empty() {
        Outcome { pass: true, detail }
    } else {
        let shown: Vec<&str> = failures.iter().take(5).map(String::as_str).collect();
        Outcome {
            pass: false,
            detail: format!(
                "{detail}; {} failures, first: {}",
                failures.len(),
                shown.join(" | ")
            ),
        }
    }
}

fn densities() -> impl Iterator<Item = f64> {
    (1..=9).map(|d| f64::from(d) / 10.0)
}

fn label(a: &Tensor) -> String {
    format!("n={} m={} nnz={}", a.dim(), a.order(), a.nnz())
}

/// Wielandt lifts for n in 2..=8 and m in {2,3,4}.
fn suite1() -> Vec<Tensor> {
    let mut v = Vec::new();
    for n in 2..=8 {
        for m in 2..=4 {
            v.push(wielandt_tensor(n, m).unwrap());
        }
    }
    v
}

/// Random primitive tensors over n in 2..=6, m in {3,4}, density 0.1..0.9.
fn suite2() -> (Vec<Tensor>, Vec<String>) {
    let mut v = Vec::new();
    let mut exhausted = Vec::new();
    let mut cell = 0u64;
    for n in 2..=6 {
        for m in 3..=4 {
            for density in densities() {
                for t in 0..6 {
                    match random_primitive_tensor(n, m, density, derive_seed(2, cell, t), 20_000) {
                        Ok((a, _)) => v.push(a),
                        Err(e) => exhausted.push(e.to_string()),
                    }
                }
                cell += 1;
            }
        }
    }
    (v, exhausted)
}

/// Random m = 3 tensors with n in {2,3}, primitive or not.
fn suite3() -> Vec<Tensor> {
    let mut v = Vec::new();
    for t in 0..180u64 {
        let n = 2 + (t % 2) as usize;
        let density = f64::from((t / 2 % 9) as u32 + 1) / 10.0;
        v.push(random_tensor(n, 3, density, derive_seed(3, 0, t), Values::Ones).unwrap());
    }
    v
}

fn criterion1(s1: &[Tensor]) -> Outcome {
    let start = Instant::now();
    let mut failures = Vec::new();
    for a in s1 {
        let want = degree_bound(a.dim());
        let got = analyze(a).gamma;
        if got != Some(want) {
            failures.push(format!("{}: gamma {:?}, want {want}", label(a), got));
        }
    }
    let secs = start.elapsed().as_secs_f64();
    if secs > 10.0 {
        failures.push(format!("took {secs:.2}s"));
    }
    outcome(
        &failures,
        format!(
            "{} Wielandt lifts (n 2..8, m 2..4) reach (n-1)^2+1 exactly in {secs:.2}s",
            s1.len()
        ),
    )
}

fn criterion2(s2: &[Tensor], exhausted: &[String]) -> Outcome {
    let mut failures: Vec<String> = exhausted.to_vec();
    let mut hits = 0;
    for a in s2 {
        let bound = degree_bound(a.dim());
        match analyze(a).gamma {
            Some(g) if g <= bound => hits += usize::from(g == bound),
            other => failures.push(format!("{}: gamma {:?} vs bound {bound}", label(a), other)),
        }
    }
    if s2.len() < 500 {
        failures.push(format!("only {} instances", s2.len()));
    }
    outcome(
        &failures,
        format!(
            "{} random primitive instances within the bound ({hits} attain it)",
            s2.len()
        ),
    )
}

fn criterion3(s3: &[Tensor]) -> Outcome {
    let mut failures = Vec::new();
    let mut full_depth = 0;
    let mut comparisons = 0;
    for a in s3 {
        let engine = pattern_powers(a, 3);
        let mut depth = 0;
        for r in 1..=3u32 {
            let Ok(p) = tensor_power(a, r, DEFAULT_MAX_ENTRIES) else {
                break;
            };
            comparisons += 1;
            depth = r;
            if p.majorization() != engine[r as usize - 1] {
                failures.push(format!("{}: pattern differs at r={r}", label(a)));
            }
        }
        full_depth += usize::from(depth == 3);
    }
    if full_depth < 100 {
        failures.push(format!(
            "only {full_depth} instances materialized through r=3"
        ));
    }
    outcome(
        &failures,
        format!(
            "{} tensors, {comparisons} (tensor, r) pairs, {full_depth} checked through r=3",
            s3.len()
        ),
    )
}

fn criterion4(suites: &[&[Tensor]]) -> Outcome {
    let mut failures = Vec::new();
    let mut count = 0;
    let mut primitive = 0;
    for a in suites.iter().flat_map(|s| s.iter()) {
        count += 1;
        let engine = analyze(a).gamma;
        let tmap = tmap_oracle_degree(a, default_tmap_r_max(a.dim()));
        primitive += usize::from(engine.is_some());
        if engine != tmap {
            failures.push(format!(
                "{}: engine {:?}, T-map {:?}",
                label(a),
                engine,
                tmap
            ));
        }
    }
    outcome(
        &failures,
        format!("T-map oracle agrees on {count} instances ({primitive} primitive)"),
    )
}

fn criterion5() -> Outcome {
    let mut failures = Vec::new();
    let (mut count, mut primitive) = (0, 0);
    for n in 1..=8usize {
        for m in 3..=4 {
            for (di, density) in densities().enumerate() {
                for t in 0..2u64 {
                    let seed = derive_seed(5, (n * 100 + m * 10 + di) as u64, t);
                    let p = random_pattern(n, density, seed).unwrap();
                    let a = lift_pattern(&p, m).unwrap();
                    count += 1;
                    let mut power = p.clone();
                    for (k, z) in pattern_powers(&a, degree_bound(n)).iter().enumerate() {
                        if *z != power {
                            failures
                                .push(format!("n={n} m={m} seed={seed}: differs at k={}", k + 1));
                            break;
                        }
                        power = power.bool_mul(&p);
                    }
                    let (g, e) = (analyze(&a).gamma, matrix_exponent(&p));
                    primitive += usize::from(e.is_some());
                    if g != e {
                        failures.push(format!(
                            "n={n} m={m} seed={seed}: gamma {g:?}, exponent {e:?}"
                        ));
                    }
                }
            }
        }
    }
    outcome(
        &failures,
        format!(
            "{count} lifted patterns (n 1..8, m 3..4) track Boolean powers; {primitive} primitive"
        ),
    )
}

fn criterion6(s2: &[Tensor]) -> Outcome {
    let mut failures = Vec::new();
    let (mut instances, mut columns) = (0, 0);
    for a in s2 {
        let n = a.dim();
        let m = a.majorization();
        let report = analyze(a);
        let loops: Vec<usize> = (0..n).filter(|&j| m.get(j, j)).collect();
        instances += usize::from(!loops.is_empty());
        for j in loops {
            columns += 1;
            if !report.gamma_j[j].is_some_and(|g| g < n) {
                failures.push(format!(
                    "{} column {}: gamma_j {:?}",
                    label(a),
                    j + 1,
                    report.gamma_j[j]
                ));
            }
            let t = column_fill_trace(a, j).unwrap();
            let strict = t
                .sets
                .windows(2)
                .all(|w| w[0].is_subset(&w[1]) && w[0] != w[1]);
            if !strict || t.end != TraceEnd::Full {
                failures.push(format!(
                    "{} column {}: trace not strictly nested to full",
                    label(a),
                    j + 1
                ));
            }
        }
    }
    outcome(
        &failures,
        format!("{columns} looped columns in {instances} instances fill within n-1 steps, strictly nested"),
    )
}

fn criterion7(primitive: &[&Tensor]) -> Outcome {
    let mut failures = Vec::new();
    let mut rng = SplitMix64::seed_from_u64(7);
    let (mut walks, mut witnesses) = (0, 0);
    for &a in primitive {
        let n = a.dim();
        let id = label(a);
        if let Some(v) = necessary_conditions(a) {
            failures.push(format!("{id}: precheck failed: {v}"));
        }
        let info = short_cycles_and_h(a);
        let graph = Digraph::of(a);
        let has_short_cycle = info.short_cycles.iter().any(|c| {
            c.len() < n && graph.verify_walk(&[c.as_slice(), &c[..1]].concat()) == Ok(true)
        });
        if info.s == 0 || !has_short_cycle {
            failures.push(format!("{id}: H empty or no cycle of length <= n-1"));
        }
        let bound = degree_bound(n);
        let powers = pattern_powers(a, bound.max(n + 2));

        for _ in 0..6 {
            let len = rng.random_range(2..=n + 3);
            let mut walk = vec![rng.random_range(0..n)];
            while walk.len() < len {
                let next: Vec<usize> = graph.successors(*walk.last().unwrap()).iter().collect();
                if next.is_empty() {
                    break;
                }
                walk.push(next[rng.random_range(0..next.len())]);
            }
            if walk.len() < 2 {
                continue;
            }
            walks += 1;
            let (first, last, t) = (walk[0], walk[walk.len() - 1], walk.len());
            let ok = walk_positivity_check(a, &walk) == Ok(true) && powers[t - 2].get(last, first);
            if !ok {
                failures.push(format!(
                    "{id}: walk {walk:?} not reflected in M(A^{})",
                    t - 1
                ));
            }
        }

        for j in (0..n).filter(|&j| !info.h.contains(j)) {
            witnesses += 1;
            match escape_witness(&info, j) {
                Ok((l, i))
                    if l >= 1
                        && l <= n - info.s
                        && info.h.contains(i)
                        && powers[l - 1].get(i, j) => {}
                other => failures.push(format!("{id}: escape from {} gave {other:?}", j + 1)),
            }
        }

        for j in 0..n {
            if let Some(k) = powers.iter().position(|p| p.column_is_full(j)) {
                if !powers[k..].iter().all(|p| p.column_is_full(j)) {
                    failures.push(format!(
                        "{id}: column {} lost positivity after step {}",
                        j + 1,
                        k + 1
                    ));
                }
            }
        }
    }
    outcome(
        &failures,
        format!(
            "{} primitive instances: prechecks, short cycles, {walks} walks, {witnesses} escape witnesses, persistence",
            primitive.len()
        ),
    )
}

fn criterion8(s3: &[Tensor]) -> Outcome {
    let mut failures = Vec::new();
    let mut pool: Vec<Tensor> = s3.to_vec();
    for t in 0..60u64 {
        let n = 2 + (t % 3) as usize;
        let density = f64::from((t % 9) as u32 + 1) / 10.0;
        pool.push(random_tensor(n, 2, density, derive_seed(8, 2, t), Values::Ones).unwrap());
    }
    for t in 0..30u64 {
        let density = f64::from((t % 9) as u32 + 1) / 10.0;
        pool.push(random_tensor(2, 4, density, derive_seed(8, 4, t), Values::Ones).unwrap());
    }
    let (mut pairs, mut both_primitive, mut refused) = (0, 0, 0);
    for a in &pool {
        let p = analyze(a).primitive;
        for power in 2..=3u32 {
            let Ok(ap) = tensor_power(a, power, DEFAULT_MAX_ENTRIES) else {
                refused += 1;
                continue;
            };
            pairs += 1;
            let q = analyze(&ap).primitive;
            both_primitive += usize::from(p && q);
            if p != q {
                failures.push(format!(
                    "{}: A primitive {p}, A^{power} primitive {q}",
                    label(a)
                ));
            }
        }
    }
    outcome(
        &failures,
        format!(
            "{pairs} (A, A^a) pairs agree, {both_primitive} primitive and {} not; {refused} powers over the cap",
            pairs - both_primitive
        ),
    )
}

fn main() {
    let start = Instant::now();
    let s1 = suite1();
    let (s2, exhausted) = suite2();
    let s3 = suite3();
    let primitive: Vec<&Tensor> = s1
        .iter()
        .chain(&s2)
        .chain(&s3)
        .filter(|a| a.dim() >= 2 && analyze(a).primitive)
        .collect();

    let results = [
        ("1 sharpness", criterion1(&s1)),
        ("2 degree bound", criterion2(&s2, &exhausted)),
        ("3 recurrence vs tensor powers", criterion3(&s3)),
        ("4 T-map characterization", criterion4(&[&s1, &s2, &s3])),
        ("5 matrix lifts", criterion5()),
        ("6 looped columns", criterion6(&s2)),
        ("7 lemma suite", criterion7(&primitive)),
        ("8 powers preserve primitivity", criterion8(&s3)),
    ];
    let mut failed = 0;
    for (name, o) in &results {
        println!(
            "criterion {name}: {} ({})",
            if o.pass { "PASS" } else { "FAIL" },
            o.detail
        );
        failed += usize::from(!o.pass);
    }
    println!(
        "acceptance: {} passed, {failed} failed in {:.1}s",
        results.len() - failed,
        start.elapsed().as_secs_f64()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
