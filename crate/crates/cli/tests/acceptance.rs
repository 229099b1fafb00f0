//! Acceptance run: one line per criterion, nonzero exit if any fails.

use std::f64::consts::{PI, TAU};
use std::process::ExitCode;
use std::time::Instant;

use maslov_core::iteration::chebyshev::{chebyshev_r, chebyshev_t, eval};
use maslov_core::linalg::{c, relative_distance, CMat};
use maslov_core::maslov::{iz, maslov_pairs, ActionPath, ConstantFrame, IndexOptions, ProductSpace};
use maslov_core::path::{Domain, SymplecticPath};
use maslov_core::polar::{polar_decompose, random_symplectic};
use maslov_core::positivity::winding_pair;
use maslov_core::random::rng;
use maslov_core::{NormalizedSpace, SymplecticSpace};
use maslov_iter::campaign::{run_campaign, CampaignReport};
use maslov_iter::config::RunConfig;
use maslov_iter::selftest;

const MASTER_SEED: u64 = 20_240_601;

struct Line {
    criterion: u32,
    name: &'static str,
    passed: bool,
    summary: String,
}

fn campaign(suite: &str, trials: u64) -> Result<CampaignReport, String> {
    let cfg = RunConfig {
        suite: suite.into(),
        trials,
        master_seed: MASTER_SEED,
        ..RunConfig::default()
    };
    run_campaign(&cfg, None)
}

/// Runs each suite and requires every trial of every check to pass.
fn exact(criterion: u32, name: &'static str, runs: &[(&str, u64)]) -> Line {
    let mut parts = Vec::new();
    let mut passed = true;
    for &(suite, trials) in runs {
        match campaign(suite, trials) {
            Ok(r) => {
                for (check, t) in &r.per_check {
                    parts.push(format!("{check} {}/{}", t.passed, t.total()));
                    passed &= t.passed == trials && t.total() == trials;
                }
                if let Some(bad) = r.records.iter().find(|x| x.status != maslov_iter::campaign::Status::Pass) {
                    parts.push(format!(
                        "first failure: {} seed {} {}",
                        bad.check,
                        bad.seed,
                        bad.error.clone().unwrap_or_default()
                    ));
                }
            }
            Err(e) => {
                parts.push(format!("{suite}: {e}"));
                passed = false;
            }
        }
    }
    Line {
        criterion,
        name,
        passed,
        summary: parts.join(", "),
    }
}

fn bott_timed() -> Line {
    let started = Instant::now();
    let mut line = exact(1, "bott iteration formula", &[("bott", 200)]);
    let secs = started.elapsed().as_secs_f64();
    line.passed &= secs < 60.0;
    line.summary.push_str(&format!(", {secs:.1}s (limit 60s)"));
    line
}

fn chebyshev_line() -> Line {
    let mut line = exact(6, "chebyshev block power", &[("chebyshev", 100)]);
    let t2 = chebyshev_t(2).map(|p| eval(&p, (PI / 3.0).cos()));
    let r1 = chebyshev_r(1).map(|p| eval(&p, (TAU / 3.0).cos()));
    match (t2, r1) {
        (Ok(t2), Ok(r1)) => {
            let ok = (t2 + 0.5).abs() <= 1e-12 && r1.abs() <= 1e-12;
            line.passed &= ok;
            line.summary.push_str(&format!(", T2(cos pi/3) = {t2:.15}, R1(cos 2pi/3) = {r1:.1e}"));
        }
        _ => {
            line.passed = false;
            line.summary.push_str(", scalar polynomials unavailable");
        }
    }
    line
}

fn fixtures_line() -> Line {
    let mut parts = Vec::new();
    let mut passed = true;
    let mut check = |label: &str, ok: bool, value: String| {
        passed &= ok;
        parts.push(format!("{label} = {value}"));
    };
    let space = SymplecticSpace::canonical(1);
    let opts = IndexOptions::default();
    let ps = ProductSpace::new(&space);
    let model = |b: f64| SymplecticPath::exp(space.j().clone(), Domain::new(0.0, b).unwrap());

    match iz(&ps, &model(TAU), c(1.0, 0.0), &opts) {
        Ok(v) => check("i1(e^{J0 t}, [0, 2pi])", v == 2, v.to_string()),
        Err(e) => check("i1(e^{J0 t}, [0, 2pi])", false, e.to_string()),
    }

    let lambda0 = CMat::from_fn(2, 1, |_, _| c(1.0, 0.0));
    let d = Domain::new(0.0, PI).unwrap();
    let lambda = ActionPath {
        path: model(PI),
        base: lambda0.clone(),
    };
    let mu = ConstantFrame { frame: lambda0, domain: d };
    match maslov_pairs(&space, &lambda, &mu, d, &opts) {
        Ok(r) => check("Mas{e^{J0 s} l0, l0; [0, pi]}", r.index == 1, r.index.to_string()),
        Err(e) => check("Mas{e^{J0 s} l0, l0; [0, pi]}", false, e.to_string()),
    }

    let ns = NormalizedSpace::canonical(1);
    let gen = CMat::from_fn(2, 2, |i, j| if i == 0 && j == 0 { c(0.0, TAU) } else { c(0.0, 0.0) });
    match winding_pair(&ns, &SymplecticPath::exp(gen, Domain::unit())) {
        Ok(w) => check("winding pair of diag(e^{2 pi i t}, 1)", w == (1, 0), format!("{w:?}")),
        Err(e) => check("winding pair of diag(e^{2 pi i t}, 1)", false, e.to_string()),
    }

    let mut worst = 0.0_f64;
    let mut r = rng(MASTER_SEED);
    for n in 1..=3 {
        let ns = NormalizedSpace::canonical(n);
        for _ in 0..20 {
            let m = random_symplectic(&ns, &mut r, 1.0);
            match polar_decompose(&ns, &m) {
                Ok(p) => worst = worst.max(p.residual).max(relative_distance(&(&p.positive * &p.unitary), &m)),
                Err(_) => worst = f64::INFINITY,
            }
        }
    }
    check("worst polar round trip", worst <= 1e-9, format!("{worst:.1e}"));

    let results = selftest::run_all(&Default::default());
    let failed: Vec<_> = results
        .iter()
        .filter(|r| r.status != selftest::FixtureStatus::Pass)
        .map(|r| r.name)
        .collect();
    check(
        "selftest fixtures passing",
        failed.is_empty(),
        format!("{}/{} {failed:?}", results.len() - failed.len(), results.len()),
    );
    Line {
        criterion: 8,
        name: "canonical fixtures",
        passed,
        summary: parts.join(", "),
    }
}

fn main() -> ExitCode {
    let lines = vec![
        bott_timed(),
        exact(2, "a-iteration and delta", &[("a-iteration", 100), ("delta", 50)]),
        exact(3, "brake two-times formula", &[("brake2", 100)]),
        exact(4, "brake k-iteration", &[("brake-k", 100)]),
        exact(5, "nullity splittings", &[("nullity", 200)]),
        chebyshev_line(),
        exact(7, "oracle equivalence", &[("oracle", 100)]),
        fixtures_line(),
        exact(9, "positivity closure", &[("positivity", 50)]),
        exact(10, "deformation", &[("deformation", 50)]),
    ];
    let mut all = true;
    for l in &lines {
        all &= l.passed;
        println!(
            "criterion {:>2} {:<26} {}  {}",
            l.criterion,
            l.name,
            if l.passed { "PASS" } else { "FAIL" },
            l.summary
        );
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
