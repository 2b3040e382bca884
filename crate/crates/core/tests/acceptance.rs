//! Acceptance gate. Each criterion prints one PASS/FAIL line; the process
//! exits non-zero if any criterion fails.

mod common;

use std::time::{Duration, Instant};

use ewlimit_core::algebra::parse;
use ewlimit_core::limit::{decoupling_check, log_spaced, mass_invariance_sweep, verify_scaling};
use ewlimit_core::matrix::{verify_commutators, verify_group};
use ewlimit_core::model::{
    calibrated_config, check_su2_invariance, check_u1_invariance, extract_masses, verify_grading, verify_matter_radial,
    verify_trace_identity, ModelConfig, PYTHAGOREAN_TRIPLES,
};
use ewlimit_core::ring::{cr_int, rat, RingError};
use ewlimit_core::rng::seeded;
use ewlimit_core::{ContractionScalar, JMode, VerificationReport};
use rand::Rng;

struct Outcome {
    pass: bool,
    detail: String,
}

impl Outcome {
    fn from_reports(reports: &[VerificationReport]) -> Self {
        let failed: Vec<String> = reports
            .iter()
            .filter(|r| !r.passed())
            .map(|r| format!("{} [{}]: {}", r.check_name, r.mode, r.witness.clone().unwrap_or_default()))
            .collect();
        let worst = reports.iter().map(|r| r.max_abs_error).fold(0.0, f64::max);
        if failed.is_empty() {
            Outcome { pass: true, detail: format!("{} reports, max error {worst:e}", reports.len()) }
        } else {
            Outcome { pass: false, detail: failed.join("; ") }
        }
    }

    fn within(self, elapsed: Duration, limit: Duration) -> Self {
        let t = format!("{:.2}s of {:.0}s", elapsed.as_secs_f64(), limit.as_secs_f64());
        if elapsed < limit {
            Outcome { detail: format!("{}, {t}", self.detail), ..self }
        } else {
            Outcome { pass: false, detail: format!("{}, too slow: {t}", self.detail) }
        }
    }
}

fn timed(f: impl FnOnce() -> Outcome) -> (Outcome, Duration) {
    let start = Instant::now();
    let o = f();
    (o, start.elapsed())
}

fn commutator_table() -> Outcome {
    let (o, t) = timed(|| {
        let modes = [JMode::One, JMode::Nilpotent, JMode::Numeric(0.01), JMode::Numeric(1e-3)];
        let reports: Vec<_> = modes.iter().map(|m| verify_commutators(*m)).collect();
        let mut o = Outcome::from_reports(&reports);
        for r in &reports {
            let bound = if r.mode == "1" || r.mode == "iota" { 0.0 } else { 1e-12 };
            if r.max_abs_error > bound {
                o.pass = false;
            }
        }
        o
    });
    o.within(t, Duration::from_secs(1))
}

fn group_suite() -> Outcome {
    let (o, t) = timed(|| {
        let reports: Vec<_> = [JMode::One, JMode::Nilpotent].iter().map(|m| verify_group(*m, 1000, 42)).collect();
        let mut o = Outcome::from_reports(&reports);
        o.pass &= reports.iter().all(|r| r.tolerance == 0.0 && r.max_abs_error == 0.0);
        o
    });
    o.within(t, Duration::from_secs(10))
}

fn nilpotent_division() -> Outcome {
    let j = |c: i64, d: u32| ContractionScalar::monomial(cr_int(c, 0), d);
    let x = &j(3, 1) + &j(2, 2);
    let quotient = x.div_j();
    let want = &j(3, 0) + &j(2, 1);
    let bad = (&j(1, 0) + &j(1, 1)).div_j();
    let pass = quotient.as_ref() == Ok(&want) && matches!(bad, Err(RingError::DivisionUndefined(_)));
    Outcome { pass, detail: format!("(3j+2j^2)/j = {:?}, (1+j)/j = {:?}", quotient.map(|q| q.to_string()), bad.map(|q| q.to_string())) }
}

fn random_float_configs(n: usize, seed: u64) -> Vec<ModelConfig> {
    let mut rng = seeded(seed, "acceptance_float_points");
    (0..n)
        .map(|_| {
            let g = rng.random_range(0.2..1.5);
            let gp = rng.random_range(0.2..1.5);
            let r = rng.random_range(0.5..3.0);
            ModelConfig::float(g, gp, r).expect("positive couplings")
        })
        .collect()
}

fn triple_configs() -> Vec<ModelConfig> {
    PYTHAGOREAN_TRIPLES.iter().map(|(g, gp, _)| ModelConfig::triple(*g, *gp, 2).expect("rational s")).collect()
}

fn grading_identity() -> Outcome {
    let (o, t) = timed(|| {
        let mut reports: Vec<_> = triple_configs().iter().map(verify_grading).collect();
        let floats: Vec<_> = random_float_configs(10, 5).iter().map(verify_grading).collect();
        let mut o = Outcome::from_reports(&reports);
        o.pass &= reports.iter().all(|r| r.max_abs_error == 0.0);
        let f = Outcome::from_reports(&floats);
        o.pass &= f.pass && floats.iter().all(|r| r.max_abs_error <= 1e-9);
        reports.extend(floats);
        Outcome { detail: Outcome::from_reports(&reports).detail, ..o }
    });
    o.within(t, Duration::from_secs(60))
}

fn matter_radial_identity() -> Outcome {
    let exact: Vec<_> = triple_configs().iter().map(verify_matter_radial).collect();
    let floats: Vec<_> = random_float_configs(10, 5).iter().map(verify_matter_radial).collect();
    let mut o = Outcome::from_reports(&[exact.clone(), floats.clone()].concat());
    o.pass &= exact.iter().all(|r| r.max_abs_error == 0.0) && floats.iter().all(|r| r.max_abs_error <= 1e-9);
    o
}

fn masses() -> Outcome {
    let m = match extract_masses(&ModelConfig::triple(3, 4, 2).expect("rational s")) {
        Ok(m) => m,
        Err(e) => return Outcome { pass: false, detail: e.to_string() },
    };
    let exact_ok = m.exact.as_ref().is_some_and(|x| {
        (&x.m_w, &x.m_z, &x.m_a, &x.e_charge, &x.cos_theta_w) == (&rat(3, 1), &rat(5, 1), &rat(0, 1), &rat(12, 5), &rat(3, 5))
    });
    let cal = calibrated_config(80.0, 91.0, 0.652).and_then(|c| extract_masses(&c));
    match cal {
        Ok(c) => {
            let rel_w = (c.m_w - 80.0).abs() / 80.0;
            let rel_z = (c.m_z - 91.0).abs() / 91.0;
            Outcome {
                pass: exact_ok && rel_w <= 1e-10 && rel_z <= 1e-10 && c.m_a == 0.0,
                detail: format!("(3,4,2) exact {exact_ok}; calibrated m_W = {}, m_Z = {} (rel {rel_z:e})", c.m_w, c.m_z),
            }
        }
        Err(e) => Outcome { pass: false, detail: e.to_string() },
    }
}

fn gauge_invariance() -> Outcome {
    let mut reports = Vec::new();
    for mode in [JMode::One, JMode::Nilpotent] {
        reports.push(check_u1_invariance(&ModelConfig::default().with_mode(mode)));
        reports.push(check_su2_invariance(mode));
    }
    Outcome::from_reports(&reports)
}

fn trace_identity() -> Outcome {
    let reports: Vec<_> =
        [JMode::One, JMode::Nilpotent, JMode::Numeric(0.01)].iter().map(|m| verify_trace_identity(*m, 100, 42)).collect();
    let mut o = Outcome::from_reports(&reports);
    o.pass &= reports[0].max_abs_error == 0.0 && reports[1].max_abs_error == 0.0 && reports[2].max_abs_error <= 1e-10;
    o
}

fn decoupling() -> Outcome {
    Outcome::from_reports(&[decoupling_check(&ModelConfig::default())])
}

fn scaling() -> Outcome {
    let (o, t) = timed(|| {
        let js = log_spaced(1e-1, 1e-3, 9);
        let r = verify_scaling(&js, 100, &ModelConfig::default(), 42);
        let detail = r.notes.join("; ");
        Outcome { pass: r.passed(), detail }
    });
    o.within(t, Duration::from_secs(30))
}

fn mass_invariance() -> Outcome {
    Outcome::from_reports(&[mass_invariance_sweep(100, 42)])
}

fn parser_round_trip() -> Outcome {
    let mut rng = seeded(42, "acceptance_corpus");
    let mut failures = Vec::new();
    for _ in 0..10_000 {
        let e = common::random_expression(&mut rng);
        let text = e.to_string();
        match parse(&text) {
            Ok(back) if back == e => {}
            Ok(back) => failures.push(format!("{text} -> {back}")),
            Err(err) => failures.push(format!("{text}: {err}")),
        }
    }
    let malformed = [("Z[mu]*Z[mu]*Aem[mu]", 12), ("g*(Z[mu]*Z[mu]", 14), ("1 + * rho", 4), ("phi1[mu]", 0), ("Z[mu]^-2", 6)];
    for (text, pos) in malformed {
        match parse(text) {
            Err(e) if e.position() == pos => {}
            other => failures.push(format!("{text:?}: expected an error at byte {pos}, got {other:?}")),
        }
    }
    Outcome {
        pass: failures.is_empty(),
        detail: match failures.first() {
            None => "10000 expressions round-trip; 5 malformed inputs located".into(),
            Some(f) => format!("{} failure(s), first: {f}", failures.len()),
        },
    }
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 12] = [
        ("commutator table", commutator_table),
        ("group suite", group_suite),
        ("nilpotent division", nilpotent_division),
        ("grading identity", grading_identity),
        ("matter radial identity", matter_radial_identity),
        ("masses", masses),
        ("gauge invariance", gauge_invariance),
        ("trace identity", trace_identity),
        ("decoupling", decoupling),
        ("scaling sweep", scaling),
        ("mass invariance under contraction", mass_invariance),
        ("parser round trip", parser_round_trip),
    ];
    let mut failed = 0;
    for (k, (name, check)) in criteria.iter().enumerate() {
        let o = check();
        if !o.pass {
            failed += 1;
        }
        println!("[{}] {:>2}. {name}: {}", if o.pass { "PASS" } else { "FAIL" }, k + 1, o.detail);
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
