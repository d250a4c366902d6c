//! Acceptance run: one PASS/FAIL line per criterion, with every tolerance
//! fixed here rather than taken from the check defaults.

use std::time::Instant;

use octoplane::verify::{
    run_suite, CheckRecord, Suite, SuiteConfig, VerificationReport, GROWTH_DELTAS, HARDY_LAMBDAS, OPNORM_RADII,
};
use serde_json::Value;

const SEED: u64 = 20_240_601;

struct Suites {
    reports: Vec<VerificationReport>,
}

impl Suites {
    fn get(&self, id: &str) -> &CheckRecord {
        self.reports.iter().find_map(|r| r.check(id)).unwrap_or_else(|| panic!("no check {id}"))
    }

    fn m(&self, id: &str, i: usize) -> f64 {
        let c = self.get(id);
        if let Some(e) = &c.error {
            println!("    {id}: error: {e}");
        }
        c.measured.get(i).copied().unwrap_or(f64::NAN)
    }

    fn time(&self, ids: &[&str]) -> f64 {
        ids.iter().map(|id| self.get(id).wall_time).sum()
    }
}

struct Line {
    pass: bool,
    detail: String,
}

fn le(v: f64, tol: f64) -> bool {
    v <= tol
}

fn lt(v: f64, tol: f64) -> bool {
    v < tol
}

fn criterion_1(s: &Suites) -> Line {
    let ids = [
        "algebra.norm_multiplicative",
        "algebra.alternative",
        "algebra.moufang",
        "algebra.artin",
        "algebra.conjugate_norm",
    ];
    let worst = ids.iter().map(|id| s.m(id, 0)).fold(0.0, f64::max);
    let table = s.m("algebra.basis_table", 0);
    let t = s.time(&ids) + s.time(&["algebra.basis_table"]);
    let n = s.get("algebra.moufang").n_samples;
    Line {
        pass: le(worst, 1e-12) && table == 0.0 && n >= 100_000 && lt(t, 10.0),
        detail: format!(
            "max relative defect {worst:.2e} (tol 1e-12), table defects {table}, n = {n}, {t:.1} s (< 10 s)"
        ),
    }
}

fn criterion_2(s: &Suites) -> Line {
    let ids = ["geometry.phi_bracket", "geometry.psi_forms"];
    let (a, b) = (s.m(ids[0], 0), s.m(ids[1], 0));
    let t = s.time(&ids);
    Line {
        pass: le(a, 1e-12) && le(b, 1e-12) && lt(t, 10.0),
        detail: format!("Φ forms {a:.2e}, Ψ forms {b:.2e} (tol 1e-12), {t:.1} s (< 10 s)"),
    }
}

fn criterion_3(s: &Suites) -> Line {
    let ids = ["geometry.triangle", "geometry.self_distance"];
    let v = s.m(ids[0], 0);
    let d = s.m(ids[1], 0);
    let n = s.get(ids[0]).n_samples;
    let t = s.time(&ids);
    Line {
        pass: v == 0.0 && n >= 1_000_000 && le(d, 1e-8) && lt(t, 30.0),
        detail: format!("{v} triangle violations in {n} triples, max d(a,a) {d:.2e} (tol 1e-8), {t:.1} s (< 30 s)"),
    }
}

fn criterion_4(s: &Suites) -> Line {
    let id = "geometry.ball_growth";
    let slope = s.m(id, 1);
    let used = s.m(id, 2);
    let t = s.time(&[id]);
    let n = s.get(id).n_samples;
    Line {
        pass: used == GROWTH_DELTAS.len() as f64 && le((slope - 22.0).abs(), 0.5) && lt(t, 60.0),
        detail: format!(
            "slope {slope:.3} (22 ± 0.5) over {used} of {} radii with hits, n = {n}, {t:.1} s (< 60 s)",
            GROWTH_DELTAS.len()
        ),
    }
}

fn criterion_5(s: &Suites) -> Line {
    let a = s.m("special.harmonic_unit", 0);
    let b = s.m("poisson.harmonic_normalization", 0);
    Line {
        pass: le(a, 1e-10) && le(b, 1e-8),
        detail: format!("|Φ_(-iρ,00) - 1| {a:.2e} (tol 1e-10), |∫P - 1| {b:.2e} (tol 1e-8)"),
    }
}

fn criterion_6(s: &Suites) -> Line {
    let id = "poisson.quadrature_vs_series";
    let v = s.m(id, 0);
    let t = s.time(&[id]);
    Line { pass: lt(v, 1e-6) && lt(t, 60.0), detail: format!("max relative gap {v:.2e} (< 1e-6), {t:.1} s (< 60 s)") }
}

fn criterion_7(s: &Suites) -> Line {
    let v = s.m("special.hypergeometric_seam", 0);
    Line { pass: le(v, 1e-9), detail: format!("max relative seam gap {v:.2e} (tol 1e-9), l ≤ 10") }
}

fn criterion_8(s: &Suites) -> Line {
    let id = "poisson.hardy_lower_bound";
    let deficit = s.m(id, 0);
    let ratios: Vec<String> = s.get(id).measured[1..].iter().map(|r| format!("{r:.4}")).collect();
    Line { pass: le(deficit, 1e-3), detail: format!("norm / |c(λ)| = [{}] (≥ 1 - 1e-3)", ratios.join(", ")) }
}

fn criterion_9(s: &Suites) -> Line {
    let refine = s.m("poisson.hardy_upper_refinement", 0);
    let c = s.m("poisson.hardy_upper_refinement", 1);
    let trend = s.m("poisson.operator_norm_trend", 0);
    let est: Vec<String> =
        s.get("poisson.operator_norm_trend").measured[1..].iter().map(|v| format!("{v:.4}")).collect();
    let drift = s.m("poisson.operator_norm_drift", 0);
    let n = s.get("poisson.operator_norm_trend").n_samples;
    Line {
        pass: c.is_finite() && lt(refine, 0.10) && le(trend, 0.8) && lt(drift, 0.15) && n == 4000,
        detail: format!(
            "C = {c:.4} over λ ∈ {HARDY_LAMBDAS:?}, refinement change {refine:.2e} (< 0.10); \
             operator norm at r ∈ {OPNORM_RADII:?}, n = {n}: [{}], rank trend {trend:.2} (≤ 0.8), doubling drift {drift:.3} (< 0.15)",
            est.join(", ")
        ),
    }
}

fn criterion_10(s: &Suites) -> Line {
    let gap = s.m("cz.gap", 0);
    let lip = s.m("cz.bracket_lipschitz", 0);
    let n = s.get("cz.gap").n_samples;
    let spreads: Vec<(&str, f64, f64)> = ["cz.size_spread", "cz.smoothness_spread", "cz.cancellation_spread"]
        .iter()
        .map(|id| {
            let finite = s.get(id).measured[1..].iter().all(|v| v.is_finite());
            (*id, s.m(id, 0), if finite { 1.0 } else { 0.0 })
        })
        .collect();
    let ok = gap == 0.0 && lip == 0.0 && n >= 1_000_000 && spreads.iter().all(|(_, v, f)| lt(*v, 2.0) && *f == 1.0);
    let txt: Vec<String> = spreads.iter().map(|(id, v, _)| format!("{} {v:.2}", &id[3..])).collect();
    Line {
        pass: ok,
        detail: format!("violations {gap} (gap) and {lip} (bracket) in {n} samples; r-spread {} (< 2)", txt.join(", ")),
    }
}

fn criterion_11(s: &Suites) -> Line {
    let ids = ["invert.cauchy", "invert.lambda_independence", "invert.ktype_independence"];
    let g = &s.get(ids[0]).measured;
    let (d1, d2) = if g.len() == 4 { ((g[2] - g[1]).abs(), (g[3] - g[2]).abs()) } else { (f64::NAN, f64::NAN) };
    let lam = s.m(ids[1], 0);
    let k = s.m(ids[2], 0);
    let t = s.time(&ids);
    Line {
        pass: lt(d2, d1) && le(lam, 0.03) && le(k, 0.03) && lt(t, 120.0),
        detail: format!(
            "|g32 - g16| = {d2:.4e} vs |g16 - g8| = {d1:.4e}; λ spread {lam:.2e}, K-type spread {k:.2e} (tol 0.03), {t:.1} s (< 120 s)"
        ),
    }
}

fn criterion_12(s: &Suites) -> Line {
    let radii = s.m("cz.molecule_radii", 0);
    let canc = s.m("cz.molecule_cancellation", 0);
    let diag = s.m("cz.molecule_diagonal", 0);
    Line {
        pass: radii == 0.0 && le(canc, 1e-8) && diag == 0.0,
        detail: format!("radii defects {radii}, max |∫Δ_j| {canc:.2e} (tol 1e-8), diagonal defects {diag}"),
    }
}

fn strip_times(mut v: Value) -> Value {
    v["meta"]["wall_time"] = Value::Null;
    for c in v["checks"].as_array_mut().expect("checks array") {
        c["wall_time"] = Value::Null;
    }
    v
}

fn criterion_13() -> Line {
    let cfg = SuiteConfig { suite: Suite::All, n_mc: 2000, seed: SEED, ..Default::default() };
    let run = || serde_json::to_value(run_suite(&cfg).expect("valid config")).expect("serializable");
    let (a, b) = (strip_times(run()), strip_times(run()));
    let n = a["checks"].as_array().map_or(0, |c| c.len());
    Line { pass: a == b, detail: format!("{n} checks, identical numeric fields: {}", a == b) }
}

fn main() {
    let t0 = Instant::now();
    let reports: Vec<VerificationReport> =
        [Suite::Algebra, Suite::Geometry, Suite::Special, Suite::Poisson, Suite::Cz, Suite::Invert]
            .into_iter()
            .map(|suite| {
                let cfg =
                    SuiteConfig { suite, seed: SEED, l_max: 10, lambdas: vec![0.5, 1.0, 2.0], ..Default::default() };
                run_suite(&cfg).expect("valid config")
            })
            .collect();
    let s = Suites { reports };
    let checks: [(&str, Box<dyn Fn() -> Line + '_>); 13] = [
        ("algebra exactness", Box::new(|| criterion_1(&s))),
        ("form consistency", Box::new(|| criterion_2(&s))),
        ("metric axioms", Box::new(|| criterion_3(&s))),
        ("ball growth", Box::new(|| criterion_4(&s))),
        ("harmonic normalization", Box::new(|| criterion_5(&s))),
        ("quadrature vs series", Box::new(|| criterion_6(&s))),
        ("2F1 seam", Box::new(|| criterion_7(&s))),
        ("Hardy lower bound", Box::new(|| criterion_8(&s))),
        ("Hardy upper bound", Box::new(|| criterion_9(&s))),
        ("CZ estimates", Box::new(|| criterion_10(&s))),
        ("inversion", Box::new(|| criterion_11(&s))),
        ("molecules", Box::new(|| criterion_12(&s))),
        ("determinism", Box::new(criterion_13)),
    ];
    let mut failed = 0;
    for (i, (name, f)) in checks.iter().enumerate() {
        let line = f();
        failed += !line.pass as usize;
        println!("criterion {:>2} {} {name}: {}", i + 1, if line.pass { "PASS" } else { "FAIL" }, line.detail);
    }
    println!("acceptance: {} of 13 passed in {:.0} s", 13 - failed, t0.elapsed().as_secs_f64());
    if failed > 0 {
        std::process::exit(1);
    }
}
