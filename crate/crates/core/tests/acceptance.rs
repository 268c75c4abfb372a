//! Acceptance gate: one line per criterion, all must pass.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, PI, SQRT_2};
use std::panic::{catch_unwind, AssertUnwindSafe};

use bellbound_core::inequality::{chsh, classical_bound, triangle};
use bellbound_core::noise::{
    cliqueweb_threshold, noise_quantity, noisy_violation, partitioned_threshold, triangle_threshold,
};
use bellbound_core::optimizer::{
    exhaustive_ratio_probe, planar_bipartite_ratios, ratio_probe, scan_theta, ThetaFamily,
};
use bellbound_core::polytopes::{
    bell_to_cut, bipartite_coefficients, complete_coefficients, cut_to_bell, facet_check,
    membership, vertices, PolytopeSpec,
};
use bellbound_core::quantum::{
    bouquet, chsh_directions, planar_star, quantum_value, v12_formula, v2k1_formula,
    UnitVectorConfig,
};
use bellbound_core::tsirelson::{realize, verify_realization};
use bellbound_core::webs::{clique_web_inequality, verify_alon_theorem, web_edges, WebSpec};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Max ratio of `ratio_probe(5, 100, 2024)`, frozen at first build.
const GOLDEN_N5_MAX_RATIO_BITS: u64 = 0x3ff6_5c55_827d_f1b7;

type Check = Result<(), String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)*) => {
        if !$cond {
            return Err(format!($($msg)*));
        }
    };
}

fn close(label: &str, value: f64, expected: f64, tol: f64) -> Check {
    ensure!(
        (value - expected).abs() <= tol,
        "{label}: {value} vs {expected} (tol {tol})"
    );
    Ok(())
}

fn criterion_1() -> Check {
    let q = quantum_value(&chsh(), &chsh_directions(), false).map_err(|e| e.to_string())?;
    close("CHSH quantum value", q.quantum_value, SQRT_2, 1e-9)?;
    let c = classical_bound(&chsh()).unwrap();
    ensure!(
        c.max_value == 1.0 && c.exact,
        "CHSH classical bound {}",
        c.max_value
    );
    Ok(())
}

fn criterion_2() -> Check {
    let q = quantum_value(&triangle(), &planar_star(3), true)
        .unwrap()
        .quantum_value;
    close("triangle quantum value", q, 1.5, 1e-12)?;
    ensure!(
        classical_bound(&triangle()).unwrap().max_value == 1.0,
        "triangle bound"
    );
    ensure!(q > SQRT_2, "1.5 does not exceed sqrt 2");
    Ok(())
}

fn criterion_3() -> Check {
    for (p, q, r, expected) in [(5, 2, 1, 4.0), (7, 2, 2, 6.0), (12, 3, 4, 15.0)] {
        let ineq = clique_web_inequality(&WebSpec::new(p, q, r).unwrap());
        let b = classical_bound(&ineq).unwrap();
        ensure!(
            b.exact && b.max_value == expected,
            "({p},{q},{r}): {}",
            b.max_value
        );
        ensure!(ineq.rhs() == expected, "({p},{q},{r}) rhs {}", ineq.rhs());
        ensure!(
            ineq.evaluate(&b.argmax).unwrap() == expected,
            "({p},{q},{r}) not attained"
        );
    }
    Ok(())
}

fn criterion_4() -> Check {
    close("V12 at 0.32477 pi", v12_formula(0.32477 * PI), 1.5209, 5e-4)?;
    let scan = scan_theta(ThetaFamily::Bouquet12, 400).unwrap();
    ensure!(
        scan.best_value >= 1.5209 - 5e-4,
        "scan maximum {}",
        scan.best_value
    );
    ensure!(
        scan.best_value > 1.5163,
        "scan maximum {} below 1.5163",
        scan.best_value
    );
    Ok(())
}

fn criterion_5() -> Check {
    close(
        "V11 at 0.3303 pi",
        v2k1_formula(5, 0.3303 * PI),
        1.5168,
        5e-4,
    )
}

fn criterion_6() -> Check {
    close("k = 1000 at pi/3", v2k1_formula(1000, PI / 3.0), 1.5, 2e-3)?;
    for k in 1..=12 {
        let spec = WebSpec::odd_ring(k).unwrap();
        let ineq = clique_web_inequality(&spec);
        for i in 0..100 {
            let theta = FRAC_PI_2 * (i as f64 + 0.5) / 100.0;
            let cfg = bouquet(2 * k + 1, 2, theta).unwrap();
            let built = quantum_value(&ineq, &cfg, true).unwrap().quantum_value;
            close(
                &format!("k = {k}, theta = {theta}"),
                built,
                v2k1_formula(k, theta),
                1e-12,
            )?;
        }
    }
    Ok(())
}

fn criterion_7() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for trial in 0..20 {
        let n = rng.gen_range(1..=6);
        let dim = rng.gen_range(1..=4);
        let vectors = (0..n)
            .map(|_| loop {
                let v: Vec<f64> = (0..dim).map(|_| rng.gen_range(-1.0..1.0)).collect();
                let norm = v.iter().map(|c| c * c).sum::<f64>().sqrt();
                if norm > 0.1 {
                    break v.into_iter().map(|c| c / norm).collect();
                }
            })
            .collect();
        let cfg = UnitVectorConfig::new(dim, vectors).unwrap();
        let real = realize(&cfg).unwrap();
        let report = verify_realization(&real, &cfg);
        ensure!(
            report.max_deviation() < 1e-10,
            "trial {trial} (n = {n}, dim = {dim}): {report:?}"
        );
    }
    Ok(())
}

fn criterion_8() -> Check {
    let h = FRAC_1_SQRT_2;
    let c = membership(&PolytopeSpec::BellBipartite { n: 2, m: 2 }, &[h, h, h, -h]).unwrap();
    ensure!(!c.inside && c.distance > 0.0, "CHSH point judged inside");
    ensure!(
        c.separating.unwrap().verified,
        "BELL(2,2) hyperplane not verified"
    );
    let c = membership(&PolytopeSpec::BellComplete { n: 3 }, &[-0.5; 3]).unwrap();
    ensure!(!c.inside, "(-1/2,-1/2,-1/2) judged inside");
    ensure!(
        c.separating.unwrap().verified,
        "BELL(3) hyperplane not verified"
    );
    for spec in [
        PolytopeSpec::BellBipartite { n: 2, m: 2 },
        PolytopeSpec::BellComplete { n: 3 },
        PolytopeSpec::BellComplete { n: 5 },
        PolytopeSpec::Cut { n: 4 },
        PolytopeSpec::Cor { n: 3 },
    ] {
        for v in vertices(&spec).unwrap() {
            let c = membership(&spec, &v).unwrap();
            ensure!(
                c.inside && c.distance < 1e-10,
                "{spec} vertex {v:?}: {}",
                c.distance
            );
        }
    }
    Ok(())
}

fn criterion_9() -> Check {
    let r = facet_check(
        &PolytopeSpec::BellBipartite { n: 2, m: 2 },
        &bipartite_coefficients(&chsh()),
        1.0,
    )
    .unwrap();
    ensure!(r.is_facet, "CHSH: {r:?}");
    let r = facet_check(
        &PolytopeSpec::BellComplete { n: 3 },
        &complete_coefficients(&triangle()),
        1.0,
    )
    .unwrap();
    ensure!(r.is_facet, "triangle: {r:?}");
    Ok(())
}

fn criterion_10() -> Check {
    let mut checked = 0;
    for r in 1..=3 {
        for p in (2 * r + 3)..=12 {
            let report = verify_alon_theorem(&WebSpec::from_pr(p, r).unwrap()).unwrap();
            ensure!(report.holds(), "p = {p}, r = {r}: {:?}", report.violations);
            checked += 1;
        }
    }
    ensure!(checked == 18, "checked {checked} webs");
    Ok(())
}

fn criterion_11() -> Check {
    ensure!(
        triangle_threshold().eta_threshold == 0.8,
        "triangle threshold"
    );
    let r = cliqueweb_threshold(&WebSpec::odd_ring(500).unwrap(), 1.5).unwrap();
    close("clique-web threshold k = 500", r.eta_threshold, 0.8, 1e-3)?;
    let v = noisy_violation(&triangle(), &planar_star(3), 0.9).unwrap();
    close("noisy triangle at 0.9", v, 1.25, 1e-12)?;
    ensure!(noise_quantity(&chsh()).unwrap().value == 0.0, "bipartite N");
    let b = chsh().to_complete_graph();
    let flipped: Vec<Vec<f64>> = chsh_directions()
        .vectors()
        .iter()
        .enumerate()
        .map(|(k, v)| {
            if k < 2 {
                v.clone()
            } else {
                v.iter().map(|c| -c).collect()
            }
        })
        .collect();
    let cfg = UnitVectorConfig::new(3, flipped).unwrap();
    let r = partitioned_threshold(&b, &cfg).unwrap();
    close(
        "CHSH in K_4 threshold",
        r.eta_threshold,
        FRAC_1_SQRT_2,
        1e-9,
    )
}

fn criterion_12() -> Check {
    let exhaustive = exhaustive_ratio_probe(3).unwrap();
    close(
        "n = 3 exhaustive max ratio",
        exhaustive.max_ratio,
        1.5,
        1e-9,
    )?;
    ensure!(
        exhaustive.instances == 8,
        "{} patterns",
        exhaustive.instances
    );
    let probe = ratio_probe(5, 100, 2024).unwrap();
    ensure!(
        probe.max_ratio.to_bits() == GOLDEN_N5_MAX_RATIO_BITS,
        "golden n = 5 ratio drifted: {} ({:#x})",
        probe.max_ratio,
        probe.max_ratio.to_bits()
    );
    ensure!(probe.max_ratio > 1.0, "no violating instance");
    ensure!(
        exhaustive.all_monotone && probe.all_monotone,
        "non-monotone ascent step"
    );
    let ratios = planar_bipartite_ratios(3, 200, 99).unwrap();
    ensure!(ratios.len() == 200, "{} instances", ratios.len());
    for (k, r) in ratios.iter().enumerate() {
        ensure!(*r <= SQRT_2 + 1e-9, "planar instance {k}: {r}");
    }
    Ok(())
}

fn criterion_13() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for _ in 0..100 {
        let dim = rng.gen_range(1..=15);
        let cut: Vec<f64> = (0..dim).map(|_| rng.gen_range(0.0..1.0)).collect();
        let bell: Vec<f64> = (0..dim).map(|_| rng.gen_range(-1.0..1.0)).collect();
        for (a, b) in bell_to_cut(&cut_to_bell(&cut)).iter().zip(&cut) {
            ensure!((a - b).abs() < 1e-15, "cut round trip {a} vs {b}");
        }
        for (a, b) in cut_to_bell(&bell_to_cut(&bell)).iter().zip(&bell) {
            ensure!((a - b).abs() < 1e-15, "bell round trip {a} vs {b}");
        }
    }

    // the 0/1 web inequality: web edges + pole pairs - cross pairs <= 0
    let spec = WebSpec::new(5, 2, 1).unwrap();
    let cut = clique_web_inequality(&spec).to_cut_form().unwrap();
    ensure!(cut.rhs == 0.0, "cut rhs {}", cut.rhs);
    let web = web_edges(&spec);
    for mask in 0u32..(1 << 7) {
        let bits: Vec<bool> = (0..7).map(|k| (mask >> k) & 1 == 1).collect();
        let xor = |i: usize, j: usize| if bits[i] != bits[j] { 1.0 } else { 0.0 };
        let mut direct = xor(5, 6);
        for (i, j) in web.iter() {
            direct += xor(i, j);
        }
        for i in 0..5 {
            direct -= xor(i, 5) + xor(i, 6);
        }
        let via_cut = cut.evaluate(&bits).unwrap();
        ensure!(via_cut == direct, "mask {mask:#b}: {via_cut} vs {direct}");
    }
    Ok(())
}

#[test]
fn acceptance_criteria() {
    let criteria: [(&str, fn() -> Check); 13] = [
        ("CHSH quantum and classical values", criterion_1),
        ("triangle quantum and classical values", criterion_2),
        ("clique-web classical bounds", criterion_3),
        ("12-bouquet violation", criterion_4),
        ("11-bouquet violation", criterion_5),
        ("bouquet asymptotics and formula cross-check", criterion_6),
        ("Tsirelson operator realizations", criterion_7),
        ("polytope membership", criterion_8),
        ("facets", criterion_9),
        ("antiweb cut-size theorem", criterion_10),
        ("Werner thresholds", criterion_11),
        ("ratio probe properties", criterion_12),
        ("coordinate maps and cut form", criterion_13),
    ];
    let mut failures = Vec::new();
    for (k, (name, run)) in criteria.iter().enumerate() {
        let outcome = match catch_unwind(AssertUnwindSafe(run)) {
            Ok(result) => result,
            Err(_) => Err("panicked".to_string()),
        };
        match outcome {
            Ok(()) => println!("criterion {:>2}: PASS  {name}", k + 1),
            Err(why) => {
                println!("criterion {:>2}: FAIL  {name}: {why}", k + 1);
                failures.push(k + 1);
            }
        }
    }
    assert!(failures.is_empty(), "failed criteria: {failures:?}");
}
