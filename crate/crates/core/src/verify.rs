//! Verification suites: seeded batches of checks with machine-readable
//! reports.
//!
//! Every check records a measured value and, when it has one, the
//! tolerance it is compared against. Exact inequalities report a
//! violation count with tolerance `0`. Checks of constants the theory
//! leaves unnamed are reported with status `measured`.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::Write as _;
use std::path::Path;
use std::sync::Arc;
use std::time::Instant;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{argument, numeric, Error, Result};
use crate::geometry::{
    ball_volume_profile, bracket, ni_dist, phi_form, psi_form, psi_form_bracket, OctPair, SpherePoint,
};
use crate::jordan::{jordan_embed, jordan_product};
use crate::octonion::Octonion;
use crate::poisson::{
    boundary_r_grid, boundary_recover_gt, cz_suite, eta_j, growth_exponent, hardy_norm, inversion_normalization,
    m2_norm, molecule_check, omega_weight, operator_norm_est, operator_norm_spectral, poisson_kernel_polar,
    poisson_transform, szego_zonal, BallFn, BoundaryFunction, CzConfig,
};
use crate::quadrature::{zonal_integrate_focused, QuadratureSpec};
use crate::rng;
use crate::special::{
    gauss_2f1_split, hardy_profile, hc_c_function, hyp2f1_connection, hyp2f1_series, spherical_fn, spherical_fn_at,
    KTypeIndex, RadialPoint, SpectralParam, Z_SWITCH,
};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Algebra,
    Geometry,
    Special,
    Poisson,
    Cz,
    Invert,
    All,
}

impl std::str::FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "algebra" => Suite::Algebra,
            "geometry" => Suite::Geometry,
            "special" => Suite::Special,
            "poisson" => Suite::Poisson,
            "cz" => Suite::Cz,
            "invert" => Suite::Invert,
            "all" => Suite::All,
            _ => return argument(format!("unknown suite `{s}`")),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

impl std::str::FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            _ => argument(format!("unknown format `{s}`")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteConfig {
    pub suite: Suite,
    pub lambdas: Vec<f64>,
    pub l_max: u32,
    pub r_grid: Vec<f64>,
    pub t_grid: Vec<f64>,
    pub n_mc: usize,
    pub n_gauss: usize,
    pub seed: u64,
    pub tolerances: BTreeMap<String, f64>,
    #[serde(skip)]
    pub out: Option<std::path::PathBuf>,
    pub format: Format,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            suite: Suite::All,
            lambdas: vec![0.5, 1.0, 2.0],
            l_max: 10,
            r_grid: boundary_r_grid(1, 0.999),
            t_grid: vec![8.0, 16.0, 32.0],
            n_mc: 100_000,
            n_gauss: 200,
            seed: 0,
            tolerances: BTreeMap::new(),
            out: None,
            format: Format::Json,
        }
    }
}

fn parse_list(v: &str) -> Result<Vec<f64>> {
    v.split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|s| s.trim().parse::<f64>().map_err(|e| Error::Argument(format!("bad number `{s}`: {e}"))))
        .collect()
}

fn parse_num<T: std::str::FromStr>(key: &str, v: &str) -> Result<T>
where
    T::Err: std::fmt::Display,
{
    v.trim().parse::<T>().map_err(|e| Error::Argument(format!("bad value for {key}: {e}")))
}

impl SuiteConfig {
    /// Sets one option by name. Keys match the long command-line flags
    /// without dashes; `tol.<check id>` overrides a tolerance.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let key = key.trim();
        if let Some(id) = key.strip_prefix("tol.") {
            self.tolerances.insert(id.to_string(), parse_num(key, value)?);
            return Ok(());
        }
        match key {
            "suite" => self.suite = value.trim().parse()?,
            "lambda" => self.lambdas = parse_list(value)?,
            "lmax" => self.l_max = parse_num(key, value)?,
            "rgrid" => self.r_grid = parse_list(value)?,
            "tgrid" => self.t_grid = parse_list(value)?,
            "nmc" => self.n_mc = parse_num(key, value)?,
            "ngauss" => self.n_gauss = parse_num(key, value)?,
            "seed" => self.seed = parse_num(key, value)?,
            "out" => self.out = Some(value.trim().into()),
            "format" => self.format = value.trim().parse()?,
            _ => return argument(format!("unknown option `{key}`")),
        }
        Ok(())
    }

    /// Applies `key = value` lines; blank lines and `#` comments are skipped.
    pub fn apply_file_text(&mut self, text: &str) -> Result<()> {
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) =
                line.split_once('=').ok_or_else(|| Error::Argument(format!("line {}: expected key = value", i + 1)))?;
            self.set(k, v)?;
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        if self.lambdas.is_empty() || self.lambdas.iter().any(|l| *l == 0.0 || !l.is_finite()) {
            return argument("λ list must be non-empty with finite nonzero entries");
        }
        if self.r_grid.is_empty() || self.t_grid.is_empty() {
            return argument("grids must be non-empty");
        }
        if self.r_grid.windows(2).any(|w| !(w[0] < w[1])) || self.r_grid.iter().any(|r| !(0.0..1.0).contains(r)) {
            return argument("r-grid must be strictly increasing inside [0, 1)");
        }
        if self.t_grid.windows(2).any(|w| !(w[0] < w[1])) || self.t_grid.iter().any(|t| !(*t > 0.0)) {
            return argument("t-grid must be strictly increasing and positive");
        }
        if let Some((k, v)) = self.tolerances.iter().find(|(_, v)| !(**v > 0.0)) {
            return argument(format!("tolerance {k} must be positive, got {v}"));
        }
        if self.n_mc < 100 {
            return argument("nmc must be at least 100");
        }
        self.quadrature().validate()
    }

    pub fn quadrature(&self) -> QuadratureSpec {
        QuadratureSpec { n_mc: self.n_mc, n_gauss: self.n_gauss, seed: self.seed, ..Default::default() }
    }

    fn tol(&self, id: &str, default: f64) -> f64 {
        self.tolerances.get(id).copied().unwrap_or(default)
    }

    fn params(&self) -> Result<Vec<SpectralParam>> {
        self.lambdas.iter().map(|&l| SpectralParam::new(l)).collect()
    }

    /// Sample budgets, all scaled from `n_mc`.
    fn budget(&self, kind: Budget) -> usize {
        let n = self.n_mc;
        match kind {
            Budget::Algebra => n,
            Budget::Pairs => 10 * n,
            Budget::Volume => 100 * n,
            Budget::Small => (n / 10).max(10),
            Budget::Operator => (n / 25).clamp(16, 4000),
            Budget::Molecule => (n / 5).max(100),
        }
    }
}

#[derive(Clone, Copy)]
enum Budget {
    Algebra,
    Pairs,
    Volume,
    Small,
    Operator,
    Molecule,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Measured,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckRecord {
    pub id: String,
    pub anchor: String,
    pub status: Status,
    pub measured: Vec<f64>,
    pub tolerance: Option<f64>,
    pub n_samples: usize,
    pub seed: u64,
    pub wall_time: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportMeta {
    pub schema_version: u32,
    pub crate_version: String,
    pub suite: Suite,
    pub status: Status,
    pub config: SuiteConfig,
    pub wall_time: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub meta: ReportMeta,
    pub checks: Vec<CheckRecord>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.status != Status::Fail)
    }

    pub fn check(&self, id: &str) -> Option<&CheckRecord> {
        self.checks.iter().find(|c| c.id == id)
    }
}

/// What a check body produces.
struct Outcome {
    measured: Vec<f64>,
    n_samples: usize,
}

impl Outcome {
    fn new(measured: Vec<f64>, n_samples: usize) -> Self {
        Outcome { measured, n_samples }
    }
}

#[derive(Clone, Copy)]
enum Kind {
    /// Passes when the first measured value is at most the tolerance.
    AtMost(f64),
    /// First measured value is a violation count.
    Exact,
    Measured,
}

type Body = Arc<dyn Fn(&SuiteConfig, u64) -> Result<Outcome> + Send + Sync>;

struct Check {
    id: &'static str,
    anchor: &'static str,
    kind: Kind,
    body: Body,
}

fn check<F>(id: &'static str, anchor: &'static str, kind: Kind, f: F) -> Check
where
    F: Fn(&SuiteConfig, u64) -> Result<Outcome> + Send + Sync + 'static,
{
    Check { id, anchor, kind, body: Arc::new(f) }
}

fn id_tag(id: &str) -> u64 {
    // FNV-1a
    id.bytes().fold(0xcbf2_9ce4_8422_2325u64, |h, b| (h ^ b as u64).wrapping_mul(0x0100_0000_01b3))
}

fn run_check(c: &Check, cfg: &SuiteConfig) -> CheckRecord {
    let seed = rng::derive(cfg.seed, id_tag(c.id));
    let t0 = Instant::now();
    let res = (c.body)(cfg, seed);
    let wall_time = t0.elapsed().as_secs_f64();
    let (tolerance, default_status) = match c.kind {
        Kind::AtMost(t) => (Some(cfg.tol(c.id, t)), Status::Pass),
        Kind::Exact => (Some(0.0), Status::Pass),
        Kind::Measured => (None, Status::Measured),
    };
    match res {
        Ok(o) => {
            let first = o.measured.first().copied().unwrap_or(f64::NAN);
            let status = match (c.kind, tolerance) {
                (Kind::Measured, _) => {
                    if o.measured.iter().all(|v| v.is_finite()) {
                        Status::Measured
                    } else {
                        Status::Fail
                    }
                }
                (_, Some(t)) if first <= t => default_status,
                _ => Status::Fail,
            };
            CheckRecord {
                id: c.id.to_string(),
                anchor: c.anchor.to_string(),
                status,
                measured: o.measured,
                tolerance,
                n_samples: o.n_samples,
                seed,
                wall_time,
                error: None,
            }
        }
        Err(e) => CheckRecord {
            id: c.id.to_string(),
            anchor: c.anchor.to_string(),
            status: Status::Fail,
            measured: Vec::new(),
            tolerance,
            n_samples: 0,
            seed,
            wall_time,
            error: Some(e.to_string()),
        },
    }
}

/// Runs the configured suite. Numerical errors inside a check are recorded
/// on that check; only an invalid configuration is an error.
pub fn run_suite(config: &SuiteConfig) -> Result<VerificationReport> {
    config.validate()?;
    let t0 = Instant::now();
    let checks = checks_for(config.suite);
    let records: Vec<CheckRecord> = checks.par_iter().map(|c| run_check(c, config)).collect();
    let status = if records.iter().any(|c| c.status == Status::Fail) { Status::Fail } else { Status::Pass };
    Ok(VerificationReport {
        meta: ReportMeta {
            schema_version: SCHEMA_VERSION,
            crate_version: env!("CARGO_PKG_VERSION").to_string(),
            suite: config.suite,
            status,
            config: config.clone(),
            wall_time: t0.elapsed().as_secs_f64(),
        },
        checks: records,
    })
}

fn checks_for(suite: Suite) -> Vec<Check> {
    match suite {
        Suite::Algebra => algebra_checks(),
        Suite::Geometry => geometry_checks(),
        Suite::Special => special_checks(),
        Suite::Poisson => poisson_checks(),
        Suite::Cz => cz_checks(),
        Suite::Invert => invert_checks(),
        Suite::All => {
            [algebra_checks(), geometry_checks(), special_checks(), poisson_checks(), cz_checks(), invert_checks()]
                .into_iter()
                .flatten()
                .collect()
        }
    }
}

pub const CSV_HEADER: &str = "id,anchor,status,measured,tolerance,n_samples,seed,wall_time,error";

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Renders the report as JSON (`{meta, checks}`) or CSV (header plus one
/// row per check).
pub fn render_report(report: &VerificationReport, format: Format) -> Result<String> {
    match format {
        Format::Json => serde_json::to_string_pretty(report).map_err(|e| Error::Numeric(e.to_string())),
        Format::Csv => {
            let mut out = String::from(CSV_HEADER);
            out.push('\n');
            for c in &report.checks {
                let measured: Vec<String> = c.measured.iter().map(|v| format!("{v:e}")).collect();
                let status = serde_json::to_value(c.status).map_err(|e| Error::Numeric(e.to_string()))?;
                let _ = writeln!(
                    out,
                    "{},{},{},{},{},{},{},{},{}",
                    csv_field(&c.id),
                    csv_field(&c.anchor),
                    status.as_str().unwrap_or(""),
                    csv_field(&measured.join(";")),
                    c.tolerance.map(|t| format!("{t:e}")).unwrap_or_default(),
                    c.n_samples,
                    c.seed,
                    c.wall_time,
                    csv_field(c.error.as_deref().unwrap_or("")),
                );
            }
            Ok(out)
        }
    }
}

/// Writes the rendered report to `path`, or standard output when `None`.
pub fn emit_report(report: &VerificationReport, format: Format, path: Option<&Path>) -> std::io::Result<()> {
    let mut text = render_report(report, format).map_err(std::io::Error::other)?;
    text.truncate(text.trim_end().len());
    match path {
        Some(p) => std::fs::write(p, text + "\n"),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
            out.write_all(b"\n")
        }
    }
}

fn random_oct<R: Rng + ?Sized>(rng: &mut R) -> Octonion {
    let mut c = [0.0; 8];
    c.iter_mut().for_each(|x| *x = rng.sample(StandardNormal));
    Octonion::from_array(c)
}

fn random_pair<R: Rng + ?Sized>(rng: &mut R) -> OctPair {
    OctPair::new(random_oct(rng), random_oct(rng))
}

/// A point of the closed unit ball: on the sphere with probability 1/4,
/// otherwise uniform in the ball.
fn random_closed_ball<R: Rng + ?Sized>(rng: &mut R) -> OctPair {
    let s = SpherePoint::random(rng);
    if rng.random::<f64>() < 0.25 {
        return *s.point();
    }
    s.point().scale(rng.random::<f64>().powf(1.0 / 16.0))
}

/// Runs `f` on `n` seeded draws and reduces with `max`.
fn par_max<F>(n: usize, seed: u64, f: F) -> f64
where
    F: Fn(&mut rand_chacha::ChaCha8Rng) -> f64 + Sync,
{
    let chunks: Vec<_> = rng::chunks(n).collect();
    chunks
        .par_iter()
        .map(|&(id, _, len)| {
            let mut r = rng::stream(seed, id);
            (0..len).map(|_| f(&mut r)).fold(0.0, f64::max)
        })
        .reduce(|| 0.0, f64::max)
}

/// Runs `f` on `n` seeded draws and counts `true` results.
fn par_count<F>(n: usize, seed: u64, f: F) -> u64
where
    F: Fn(&mut rand_chacha::ChaCha8Rng) -> bool + Sync,
{
    let chunks: Vec<_> = rng::chunks(n).collect();
    chunks
        .par_iter()
        .map(|&(id, _, len)| {
            let mut r = rng::stream(seed, id);
            (0..len).filter(|_| f(&mut r)).count() as u64
        })
        .sum()
}

fn algebra_checks() -> Vec<Check> {
    vec![
        check("algebra.norm_multiplicative", "norm multiplicativity |ab| = |a||b|", Kind::AtMost(1e-12), |c, s| {
            let n = c.budget(Budget::Algebra);
            let m = par_max(n, s, |r| {
                let (a, b) = (random_oct(r), random_oct(r));
                ((a * b).norm() - a.norm() * b.norm()).abs() / (a.norm() * b.norm())
            });
            Ok(Outcome::new(vec![m], n))
        }),
        check("algebra.conjugate_norm", "a conj(a) = |a|² e0", Kind::AtMost(1e-12), |c, s| {
            let n = c.budget(Budget::Algebra);
            let m = par_max(n, s, |r| {
                let a = random_oct(r);
                (a * a.conj()).max_abs_diff(&Octonion::from_real(a.norm_sqr())) / a.norm_sqr()
            });
            Ok(Outcome::new(vec![m], n))
        }),
        check("algebra.alternative", "alternativity a(ab) = (aa)b, (ab)b = a(bb)", Kind::AtMost(1e-12), |c, s| {
            let n = c.budget(Budget::Algebra);
            let m = par_max(n, s, |r| {
                let (a, b) = (random_oct(r), random_oct(r));
                let scale = a.norm() * a.norm() * b.norm() + a.norm() * b.norm() * b.norm();
                let l = (a * (a * b) - (a * a) * b).norm();
                let rr = ((a * b) * b - a * (b * b)).norm();
                l.max(rr) / scale
            });
            Ok(Outcome::new(vec![m], n))
        }),
        check("algebra.moufang", "Moufang identity (ab)(ca) = a((bc)a)", Kind::AtMost(1e-12), |c, s| {
            let n = c.budget(Budget::Algebra);
            let m = par_max(n, s, |r| {
                let (a, b, x) = (random_oct(r), random_oct(r), random_oct(r));
                ((a * b) * (x * a) - a * ((b * x) * a)).norm() / (a.norm_sqr() * b.norm() * x.norm())
            });
            Ok(Outcome::new(vec![m], n))
        }),
        check("algebra.artin", "associativity of two-generator subalgebras", Kind::AtMost(1e-12), |c, s| {
            let n = c.budget(Budget::Algebra);
            let m = par_max(n, s, |r| {
                let (a, b) = (random_oct(r), random_oct(r));
                let x = if r.random::<bool>() { a * b } else { a + b };
                ((a * b) * x - a * (b * x)).norm() / (a.norm() * b.norm() * x.norm())
            });
            Ok(Outcome::new(vec![m], n))
        }),
        check("algebra.basis_table", "e_m² = -1 and e_i e_j = -e_j e_i", Kind::Exact, |_, _| {
            let mut bad = 0.0;
            for i in 1..8 {
                let e = Octonion::basis(i);
                if e * e != Octonion::from_real(-1.0) {
                    bad += 1.0;
                }
                for j in 1..8 {
                    if i != j && Octonion::basis(i) * Octonion::basis(j) != -(Octonion::basis(j) * Octonion::basis(i)) {
                        bad += 1.0;
                    }
                }
            }
            Ok(Outcome::new(vec![bad], 49))
        }),
        check("algebra.non_associative", "existence of non-associative basis triples", Kind::Exact, |_, _| {
            let mut witnesses = 0.0;
            for i in 1..8 {
                for j in 1..8 {
                    for k in 1..8 {
                        let (a, b, x) = (Octonion::basis(i), Octonion::basis(j), Octonion::basis(k));
                        if (a * b) * x != a * (b * x) {
                            witnesses += 1.0;
                        }
                    }
                }
            }
            Ok(Outcome::new(vec![if witnesses > 0.0 { 0.0 } else { 1.0 }, witnesses], 343))
        }),
    ]
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn log_log_slope(x: &[f64], y: &[f64]) -> f64 {
    let pts: Vec<(f64, f64)> = x.iter().zip(y).map(|(a, b)| (a.ln(), b.ln())).collect();
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}

pub const GROWTH_DELTAS: [f64; 6] = [0.4, 0.5, 0.6, 0.7, 0.8, 0.9];

fn geometry_checks() -> Vec<Check> {
    vec![
        check("geometry.phi_bracket", "Φ(x,y) = |[x,y]|²", Kind::AtMost(1e-12), |c, s| {
            let n = c.budget(Budget::Algebra);
            let m = par_max(n, s, |r| {
                let (x, y) = (random_pair(r), random_pair(r));
                (phi_form(&x, &y) - bracket(&x, &y).norm_sqr()).abs() / (x.norm_sqr() * y.norm_sqr())
            });
            Ok(Outcome::new(vec![m], n))
        }),
        check("geometry.psi_forms", "Ψ(x,y) = 1 - 2<x,y> + Φ(x,y) = |1 - [x,y]|²", Kind::AtMost(1e-12), |c, s| {
            let n = c.budget(Budget::Algebra);
            let m = par_max(n, s, |r| {
                let (x, y) = (random_pair(r), random_pair(r));
                (psi_form(&x, &y) - psi_form_bracket(&x, &y)).abs() / (1.0 + x.norm() * y.norm()).powi(2)
            });
            Ok(Outcome::new(vec![m], n))
        }),
        check("geometry.bracket_bound", "|[x,y]| ≤ |x||y|", Kind::Exact, |c, s| {
            let n = c.budget(Budget::Algebra);
            let v = par_count(n, s, |r| {
                let (x, y) = (random_pair(r), random_pair(r));
                bracket(&x, &y).norm() > x.norm() * y.norm() * (1.0 + 1e-12)
            });
            Ok(Outcome::new(vec![v as f64], n))
        }),
        check("geometry.triangle", "triangle inequality for d on the closed ball", Kind::Exact, |c, s| {
            let n = c.budget(Budget::Pairs);
            let v = par_count(n, s, |r| {
                let (a, b, x) = (random_closed_ball(r), random_closed_ball(r), random_closed_ball(r));
                ni_dist(&a, &x) > ni_dist(&a, &b) + ni_dist(&b, &x) + 1e-12
            });
            Ok(Outcome::new(vec![v as f64], n))
        }),
        check("geometry.self_distance", "d(a,a) = 0 on the sphere", Kind::AtMost(1e-8), |c, s| {
            let n = c.budget(Budget::Small);
            let m = par_max(n, s, |r| {
                let a = SpherePoint::random(r);
                a.dist(&a)
            });
            let general = par_max(n, s, |r| {
                let a = SpherePoint::random(r);
                ni_dist(a.point(), a.point())
            });
            Ok(Outcome::new(vec![m, general], n))
        }),
        check("geometry.ball_growth", "ball volume grows like δ^{2ρ}", Kind::AtMost(0.5), |c, s| {
            let n = c.budget(Budget::Volume);
            let v = ball_volume_profile(&GROWTH_DELTAS, n, s)?;
            let (d, f): (Vec<f64>, Vec<f64>) = v.iter().filter(|e| e.hits > 0).map(|e| (e.delta, e.fraction)).unzip();
            if d.len() < 2 {
                return numeric("fewer than two radii with hits");
            }
            let slope = log_log_slope(&d, &f);
            Ok(Outcome::new(vec![(slope - 22.0).abs(), slope, d.len() as f64], n))
        }),
        check("geometry.jordan_idempotent", "X(x) is an idempotent of trace one", Kind::AtMost(1e-10), |c, s| {
            let n = c.budget(Budget::Small);
            let m = par_max(n, s, |r| {
                let x = random_closed_ball(r).scale(0.99);
                match jordan_embed(&x).and_then(|m| Ok((jordan_product(&m, &m)?, m))) {
                    Ok((sq, m)) => {
                        let scale = m.max_abs().max(1.0);
                        (sq.max_abs_diff(&m) / scale).max((m.trace() - 1.0).abs())
                    }
                    Err(_) => f64::INFINITY,
                }
            });
            Ok(Outcome::new(vec![m], n))
        }),
    ]
}

const HARMONIC_RADII: [f64; 12] = [0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 0.99, 0.999];

/// Parameter triples of `Φ_{λ,lm}` for `l ≤ l_max`.
fn spherical_triples(lam: SpectralParam, l_max: u32) -> Vec<(Complex64, Complex64, Complex64)> {
    let s = lam.exponent();
    KTypeIndex::up_to(l_max)
        .into_iter()
        .map(|k| {
            let (l, m) = (k.l as f64, k.m as f64);
            (s + (l + m) / 2.0, s + (l - m) / 2.0 - 3.0, Complex64::new(l + 8.0, 0.0))
        })
        .collect()
}

/// Largest relative gap between series and connection evaluations across
/// `Z_SWITCH ± 1e-6`, for the parameters of the spherical functions.
pub fn seam_gap(lambdas: &[f64], l_max: u32) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for &l in lambdas {
        for (a, b, c) in spherical_triples(SpectralParam::new(l)?, l_max) {
            for z in [Z_SWITCH - 1e-6, Z_SWITCH + 1e-6] {
                let s = hyp2f1_series(a, b, c, z)?;
                let k = hyp2f1_connection(a, b, c, 1.0 - z)?;
                worst = worst.max((s - k).norm() / s.norm());
            }
        }
    }
    Ok(worst)
}

fn special_checks() -> Vec<Check> {
    vec![
        check("special.harmonic_unit", "Φ_{-iρ,00} ≡ 1", Kind::AtMost(1e-10), |_, _| {
            let mut worst: f64 = 0.0;
            for r in HARMONIC_RADII {
                let v = spherical_fn(SpectralParam::harmonic(), KTypeIndex::ZERO, r)?;
                worst = worst.max((v - 1.0).norm());
            }
            Ok(Outcome::new(vec![worst], HARMONIC_RADII.len()))
        }),
        check(
            "special.hypergeometric_seam",
            "series and connection formula agree at the switch point",
            Kind::AtMost(1e-9),
            |c, _| Ok(Outcome::new(vec![seam_gap(&c.lambdas, c.l_max)?], c.lambdas.len())),
        ),
        check("special.c_function_symmetry", "|c(λ)| = |c(-λ)|", Kind::AtMost(1e-12), |c, _| {
            let mut worst: f64 = 0.0;
            for l in c.params()? {
                let a = hc_c_function(l)?.norm();
                let b = hc_c_function(l.negated())?.norm();
                worst = worst.max((a - b).abs() / a);
            }
            Ok(Outcome::new(vec![worst], c.lambdas.len()))
        }),
        check(
            "special.dispatch_continuity",
            "2F1 dispatch is continuous across the switch point",
            Kind::AtMost(1e-9),
            |c, _| {
                let mut worst: f64 = 0.0;
                for l in c.params()? {
                    for (a, b, cc) in spherical_triples(l, c.l_max) {
                        let lo = gauss_2f1_split(a, b, cc, Z_SWITCH, 1.0 - Z_SWITCH)?;
                        let hi = gauss_2f1_split(a, b, cc, Z_SWITCH + 1e-12, 1.0 - Z_SWITCH - 1e-12)?;
                        worst = worst.max((lo - hi).norm() / lo.norm());
                    }
                }
                Ok(Outcome::new(vec![worst], c.lambdas.len()))
            },
        ),
        check(
            "special.uniform_bound",
            "uniform bound of the normalized spherical functions",
            Kind::Measured,
            |c, _| {
                let mut fitted: f64 = 0.0;
                let mut n = 0;
                for l in c.params()? {
                    for k in KTypeIndex::up_to(c.l_max) {
                        for &r in &c.r_grid {
                            let v = hardy_profile(l, k, &RadialPoint::from_r(r)?)?.norm() / l.growth();
                            fitted = fitted.max(v);
                            n += 1;
                        }
                    }
                }
                Ok(Outcome::new(vec![fitted], n))
            },
        ),
    ]
}

pub const HARDY_LAMBDAS: [f64; 5] = [0.25, 0.5, 1.0, 2.0, 4.0];
pub const OPNORM_RADII: [f64; 4] = [0.0, 0.5, 0.9, 0.99];

/// Inserts the geometric midpoint (in `1 - r`) between grid neighbours.
pub fn refine_r_grid(grid: &[f64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(2 * grid.len());
    for w in grid.windows(2) {
        out.push(w[0]);
        out.push(1.0 - ((1.0 - w[0]) * (1.0 - w[1])).sqrt());
    }
    out.extend(grid.last());
    out
}

/// `max_λ max_r |(1-r²)^{-ρ/2} Φ_{λ,00}(r)| / (1 + |λ| + 1/|λ|)` over a grid.
pub fn fitted_hardy_constant(lambdas: &[f64], grid: &[f64], spec: &QuadratureSpec) -> Result<f64> {
    let mut c: f64 = 0.0;
    for &l in lambdas {
        let lam = SpectralParam::new(l)?;
        let f = |p: &RadialPoint| spherical_fn_at(lam, KTypeIndex::ZERO, p);
        c = c.max(hardy_norm(BallFn::Radial(&f), 2.0, grid, spec)?.value / lam.growth());
    }
    Ok(c)
}

/// Spearman rank correlation of `y` with its index.
pub fn rank_trend(y: &[f64]) -> f64 {
    let n = y.len();
    if n < 2 {
        return 0.0;
    }
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&a, &b| y[a].total_cmp(&y[b]));
    let mut rank = vec![0.0; n];
    for (r, &i) in idx.iter().enumerate() {
        rank[i] = r as f64;
    }
    let nf = n as f64;
    let d2: f64 = rank.iter().enumerate().map(|(i, r)| (i as f64 - r).powi(2)).sum();
    1.0 - 6.0 * d2 / (nf * (nf * nf - 1.0))
}

fn on_axis(r: f64) -> OctPair {
    SpherePoint::e1().point().scale(r)
}

fn operator_estimates(seed: u64, n: usize) -> Result<Vec<f64>> {
    let one = SpectralParam::new(1.0)?;
    OPNORM_RADII.iter().map(|&r| Ok(operator_norm_est(one, r, n, seed)?.value)).collect()
}

fn poisson_checks() -> Vec<Check> {
    vec![
        check("poisson.harmonic_normalization", "∫ P(x,ω) dω = 1", Kind::AtMost(1e-8), |c, _| {
            let spec = c.quadrature();
            let mut worst: f64 = 0.0;
            for r in [0.3, 0.7, 0.95] {
                let v = poisson_transform(
                    SpectralParam::harmonic(),
                    &BoundaryFunction::Constant(1.0.into()),
                    &on_axis(r),
                    &spec,
                )?;
                worst = worst.max((v.value - 1.0).norm());
            }
            Ok(Outcome::new(vec![worst], 3))
        }),
        check("poisson.quadrature_vs_series", "P_λ acts on constants by Φ_{λ,00}", Kind::AtMost(1e-6), |c, _| {
            let spec = c.quadrature();
            let mut worst: f64 = 0.0;
            for l in c.params()? {
                for i in 1..=9 {
                    let r = i as f64 / 10.0;
                    let q = poisson_transform(l, &BoundaryFunction::Constant(1.0.into()), &on_axis(r), &spec)?.value;
                    let s = spherical_fn(l, KTypeIndex::ZERO, r)?;
                    worst = worst.max((q - s).norm() / (1.0 + s.norm()));
                }
            }
            Ok(Outcome::new(vec![worst], 9 * c.lambdas.len()))
        }),
        check(
            "poisson.factorization",
            "P_λ f(rθ) = (1-r²)^{(iλ+ρ)/2} Ψ_r(λ) f(θ)",
            Kind::AtMost(1e-8),
            |c, s| {
                let spec = c.quadrature();
                let mut rg = rng::stream(s, 0);
                let mut worst: f64 = 0.0;
                for l in c.params()? {
                    for _ in 0..3 {
                        let r: f64 = rg.random_range(0.05..0.95);
                        let p =
                            poisson_transform(l, &BoundaryFunction::Constant(1.0.into()), &on_axis(r), &spec)?.value;
                        let z = zonal_integrate_focused(|u, v| szego_zonal(l, r, u, v), None, &spec)?;
                        let f = (l.exponent() * ((1.0 - r) * (1.0 + r)).ln()).exp() * z;
                        worst = worst.max((p - f).norm() / p.norm());
                    }
                }
                Ok(Outcome::new(vec![worst], 3 * c.lambdas.len()))
            },
        ),
        check("poisson.kernel_symmetry", "P_λ(rθ,ω) = P_λ(rω,θ)", Kind::AtMost(1e-10), |c, s| {
            let n = c.budget(Budget::Small);
            let lam = c.params()?[0];
            let m = par_max(n, s, |rg| {
                let (th, w) = (SpherePoint::random(rg), SpherePoint::random(rg));
                let r: f64 = rg.random_range(0.0..0.99);
                match (poisson_kernel_polar(lam, r, &th, &w), poisson_kernel_polar(lam, r, &w, &th)) {
                    (Ok(a), Ok(b)) => (a - b).norm() / a.norm(),
                    _ => f64::INFINITY,
                }
            });
            Ok(Outcome::new(vec![m], n))
        }),
        check("poisson.hardy_lower_bound", "|c(λ)| ‖f‖₂ ≤ ‖P_λ f‖_{*,2}", Kind::AtMost(1e-3), |c, _| {
            let spec = c.quadrature();
            let mut deficit = f64::MIN;
            let mut ratios = Vec::new();
            for l in c.params()? {
                let f = |p: &RadialPoint| spherical_fn_at(l, KTypeIndex::ZERO, p);
                let h = hardy_norm(BallFn::Radial(&f), 2.0, &c.r_grid, &spec)?;
                let ratio = h.value / hc_c_function(l)?.norm();
                deficit = deficit.max(1.0 - ratio);
                ratios.push(ratio);
            }
            let mut m = vec![deficit];
            m.extend(ratios);
            Ok(Outcome::new(m, c.r_grid.len()))
        }),
        check(
            "poisson.hardy_upper_refinement",
            "‖P_λ f‖_{*,2} ≤ C (1 + |λ| + 1/|λ|) ‖f‖₂",
            Kind::AtMost(0.10),
            |c, _| {
                let spec = c.quadrature();
                let a = fitted_hardy_constant(&HARDY_LAMBDAS, &c.r_grid, &spec)?;
                let fine = refine_r_grid(&c.r_grid);
                let b = fitted_hardy_constant(&HARDY_LAMBDAS, &fine, &spec)?;
                Ok(Outcome::new(vec![(b / a - 1.0).abs(), a, b], fine.len()))
            },
        ),
        check("poisson.operator_norm_range", "sampled ‖Ψ_r(λ)‖ over r: max / min", Kind::Measured, |c, s| {
            let n = c.budget(Budget::Operator);
            let e = operator_estimates(s, n)?;
            let hi = e.iter().cloned().fold(f64::MIN, f64::max);
            let lo = e.iter().cloned().fold(f64::MAX, f64::min);
            let mut m = vec![hi / lo];
            m.extend(e);
            Ok(Outcome::new(m, n))
        }),
        check(
            "poisson.operator_norm_trend",
            "sup_r ‖Ψ_r(λ)‖ ≤ C (1 + |λ| + 1/|λ|): no upward trend in r",
            Kind::AtMost(0.8),
            |c, s| {
                let n = c.budget(Budget::Operator);
                let e = operator_estimates(s, n)?;
                let mut m = vec![rank_trend(&e)];
                m.extend(e);
                Ok(Outcome::new(m, n))
            },
        ),
        check(
            "poisson.operator_norm_drift",
            "sampled operator norm is stable under doubling n",
            Kind::AtMost(0.15),
            |c, s| {
                let n = c.budget(Budget::Operator);
                let a = operator_estimates(s, n)?;
                let b = operator_estimates(s, 2 * n)?;
                let drift: Vec<f64> = a.iter().zip(&b).map(|(x, y)| (y / x - 1.0).abs()).collect();
                let mut m = vec![drift.iter().cloned().fold(0.0, f64::max)];
                m.extend(drift);
                Ok(Outcome::new(m, 3 * n))
            },
        ),
        check(
            "poisson.operator_norm_spectral",
            "‖Ψ_r(λ)‖ from the K-type multipliers",
            Kind::Measured,
            |c, _| {
                let one = SpectralParam::new(1.0)?;
                let v: Result<Vec<f64>> =
                    OPNORM_RADII.iter().map(|&r| operator_norm_spectral(one, r, c.l_max)).collect();
                Ok(Outcome::new(v?, OPNORM_RADII.len()))
            },
        ),
    ]
}

fn cz_checks() -> Vec<Check> {
    fn reports(c: &SuiteConfig, s: u64) -> Result<Vec<crate::poisson::CzReport>> {
        let cfg = CzConfig { n_samples: c.budget(Budget::Pairs), seed: s, ..Default::default() };
        let spec = QuadratureSpec { n_mc: c.budget(Budget::Small), ..c.quadrature() };
        c.params()?.into_iter().map(|l| cz_suite(l, &cfg, &spec)).collect()
    }
    fn spread(c: &SuiteConfig, s: u64, name: &str) -> Result<Outcome> {
        let reps = reports(c, s)?;
        let per: Vec<f64> = reps.iter().map(|r| r.r_spread(name)).collect();
        let mut m = vec![per.iter().cloned().fold(0.0, f64::max)];
        m.extend(reps.iter().map(|r| r.get(name, None).map_or(f64::NAN, |x| x.fitted_constant)));
        Ok(Outcome::new(m, c.budget(Budget::Pairs)))
    }
    vec![
        check("cz.gap", "|1 - r[θ,ω]|⁻¹ ≤ 2 |1 - [θ,ω]|⁻¹", Kind::Exact, |c, s| {
            let reps = reports(c, s)?;
            let v: u64 =
                reps.iter().flat_map(|r| r.records.iter().filter(|x| x.name == "gap")).map(|x| x.violations).sum();
            Ok(Outcome::new(vec![v as f64], c.budget(Budget::Pairs)))
        }),
        check("cz.bracket_lipschitz", "|[θ-θ',ω]| ≤ d(θ,θ')(d(θ,θ') + 2d(θ,ω))", Kind::Exact, |c, s| {
            let reps = reports(c, s)?;
            let v: u64 = reps.iter().flat_map(|r| r.get("bracket_lipschitz", None)).map(|x| x.violations).sum();
            let m = reps
                .iter()
                .flat_map(|r| r.get("bracket_lipschitz", None))
                .map(|x| x.sampled_max_ratio)
                .fold(0.0, f64::max);
            Ok(Outcome::new(vec![v as f64, m], c.budget(Budget::Pairs)))
        }),
        check("cz.size_spread", "uniform size estimate sup_r |Ψ_r| ≤ c d^{-2ρ}", Kind::AtMost(2.0), |c, s| {
            spread(c, s, "size")
        }),
        check("cz.smoothness_spread", "uniform smoothness estimate of Ψ_r", Kind::AtMost(2.0), |c, s| {
            spread(c, s, "smoothness")
        }),
        check(
            "cz.cancellation_spread",
            "uniform cancellation |∫_{d≤δ} Ψ_r| ≤ c (1 + 1/|λ|)",
            Kind::AtMost(2.0),
            |c, s| spread(c, s, "cancellation"),
        ),
        check("cz.averaged_smoothness", "averaged smoothness of Ψ_r off the diagonal", Kind::Measured, |c, s| {
            let reps = reports(c, s)?;
            let v: Vec<f64> = reps
                .iter()
                .flat_map(|r| r.records.iter().filter(|x| x.name == "averaged_smoothness").map(|x| x.fitted_constant))
                .collect();
            Ok(Outcome::new(vec![v.iter().cloned().fold(0.0, f64::max)], c.budget(Budget::Small)))
        }),
        check("cz.molecule_radii", "η_0 = 0, η_1 = 4/5", Kind::Exact, |_, _| {
            let bad = (eta_j(0) != 0.0) as u32 + (eta_j(1) != 0.8) as u32;
            Ok(Outcome::new(vec![bad as f64, eta_j(0), eta_j(1)], 2))
        }),
        check("cz.molecule_diagonal", "Ω_{η,δ}(θ,θ) = η^{-2ρ}", Kind::Exact, |_, s| {
            let mut rg = rng::stream(s, 0);
            let mut bad = 0.0;
            for eta in [1.0, 0.5, 0.125, 2f64.powi(-6)] {
                let p = SpherePoint::random(&mut rg);
                let w = omega_weight(eta, 1.0, &p, &p)?;
                if w != eta.powf(-22.0) {
                    bad += 1.0;
                }
            }
            Ok(Outcome::new(vec![bad], 4))
        }),
        check("cz.molecule_cancellation", "∫ Δ_j(θ,θ₀) dθ = 0", Kind::AtMost(1e-8), |c, s| {
            let spec = c.quadrature();
            let mut worst: f64 = 0.0;
            for j in 0..=6 {
                worst = worst.max(molecule_check(j, 1.0, 16, s, &spec)?.integral.abs());
            }
            Ok(Outcome::new(vec![worst], 7))
        }),
        check(
            "cz.molecule_growth",
            "Δ_j are molecules of width 2^{-j}: constants grow at most linearly",
            Kind::AtMost(1.0),
            |c, s| {
                let spec = c.quadrature();
                let n = c.budget(Budget::Molecule);
                let reps: Result<Vec<_>> = (0..=6).map(|j| molecule_check(j, 1.0, n, s, &spec)).collect();
                let reps = reps?;
                let size = growth_exponent(&reps.iter().map(|r| r.size_constant).collect::<Vec<_>>());
                let smooth = growth_exponent(&reps.iter().map(|r| r.smoothness_constant).collect::<Vec<_>>());
                Ok(Outcome::new(vec![size.max(smooth), size, smooth], 7 * n))
            },
        ),
    ]
}

/// `max / min - 1`.
pub fn relative_spread(v: &[f64]) -> f64 {
    let hi = v.iter().cloned().fold(f64::MIN, f64::max);
    let lo = v.iter().cloned().fold(f64::MAX, f64::min);
    hi / lo - 1.0
}

fn invert_checks() -> Vec<Check> {
    vec![
        check("invert.cauchy", "g_t converges as t → ∞", Kind::AtMost(1.0), |c, _| {
            let spec = c.quadrature();
            let one = SpectralParam::new(1.0)?;
            let g: Result<Vec<f64>> =
                c.t_grid.iter().map(|&t| Ok(boundary_recover_gt(one, KTypeIndex::ZERO, t, &spec)?.g_t)).collect();
            let g = g?;
            if g.len() < 3 {
                return argument("the Cauchy check needs at least three t values");
            }
            let k = g.len();
            let ratio = (g[k - 1] - g[k - 2]).abs() / (g[k - 2] - g[k - 3]).abs();
            let mut m = vec![ratio];
            m.extend(g);
            Ok(Outcome::new(m, c.t_grid.len()))
        }),
        check("invert.normalization", "normalization constant of the inversion formula", Kind::Measured, |c, _| {
            Ok(Outcome::new(vec![inversion_normalization(&c.quadrature())?], 1))
        }),
        check(
            "invert.lambda_independence",
            "f = |c(λ)|⁻² lim (1/t) ∫ P_{-λ} P_λ f dμ, across λ",
            Kind::AtMost(0.03),
            |c, _| {
                let spec = c.quadrature();
                let t = *c.t_grid.last().expect("validated");
                let norm = inversion_normalization(&spec)?;
                let v: Result<Vec<f64>> = c
                    .params()?
                    .into_iter()
                    .map(|l| {
                        Ok(boundary_recover_gt(l, KTypeIndex::ZERO, t, &spec)?.limit
                            / (norm * hc_c_function(l)?.norm_sqr()))
                    })
                    .collect();
                let v = v?;
                let mut m = vec![relative_spread(&v)];
                m.extend(v);
                Ok(Outcome::new(m, c.lambdas.len()))
            },
        ),
        check(
            "invert.ktype_independence",
            "f = |c(λ)|⁻² lim (1/t) ∫ P_{-λ} P_λ f dμ, across K-types",
            Kind::AtMost(0.03),
            |c, _| {
                let spec = c.quadrature();
                let t = *c.t_grid.last().expect("validated");
                let one = SpectralParam::new(1.0)?;
                let ks = [KTypeIndex::ZERO, KTypeIndex::new(2, 0)?, KTypeIndex::new(2, 2)?];
                let v: Result<Vec<f64>> =
                    ks.iter().map(|&k| Ok(boundary_recover_gt(one, k, t, &spec)?.limit)).collect();
                let v = v?;
                let mut m = vec![relative_spread(&v)];
                m.extend(v);
                Ok(Outcome::new(m, ks.len()))
            },
        ),
        check("invert.m2_scaling", "(1/t) ∫ |Φ_{λ,00}|² dμ scales like |c(λ)|²", Kind::AtMost(0.10), |c, _| {
            let spec = c.quadrature();
            let v: Result<Vec<f64>> = c
                .params()?
                .into_iter()
                .map(|l| {
                    let f = |p: &RadialPoint| spherical_fn_at(l, KTypeIndex::ZERO, p);
                    let m = m2_norm(BallFn::Radial(&f), &c.t_grid, &spec)?.value;
                    Ok(m * m / hc_c_function(l)?.norm_sqr())
                })
                .collect();
            let v = v?;
            let mut m = vec![relative_spread(&v)];
            m.extend(v);
            Ok(Outcome::new(m, c.lambdas.len()))
        }),
    ]
}
