//! Job descriptions and machine-readable reports behind the CLI.
//!
//! A [`JobSpec`] captures a whole invocation; [`run`] executes it and
//! returns the exit code plus the report body. Reports embed the resolved
//! job and contain no timestamps, so identical `(job, seed)` pairs produce
//! byte-identical bodies.

use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::json;
use thiserror::Error;

use crate::blackbox::{midpoint_convexity_check, AxisBound, BoxRegion};
use crate::calculus::{
    conjugate, moreau_envelope, prox, proximal_average, tilt_map, ProxAverageParams,
};
use crate::certify::{
    certify_almost_strict_convexity, certify_strict_convexity_pl, certify_strict_convexity_sampled,
    default_envelope_grid, envelope_suite, theorem_almost_suite, SuiteReport,
};
use crate::gallery::{self, FunctionFixture, FunctionShape, Label};
use crate::monotone::{
    check_almost_strictly_monotone, check_monotone, check_paramonotone, check_strictly_monotone,
    check_strictly_nonexpansive, para_equivalence_suite, OperatorFixture,
};
use crate::pl::PlFunction;
use crate::tol::Tolerance;
use crate::verdict::{Verdict, VerdictStatus};

#[derive(Debug, Error)]
pub enum JobError {
    #[error("usage error in `{field}`: {message}")]
    Usage { field: String, message: String },
    #[error("malformed report {0}: {1}")]
    MalformedReport(PathBuf, String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

fn usage(field: &str, message: impl Into<String>) -> JobError {
    JobError::Usage {
        field: field.into(),
        message: message.into(),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Json,
    Csv,
}

/// A fully resolved invocation; embedded verbatim into every report.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct JobSpec {
    /// One of `conjugate`, `prox`, `envelope`, `prox-average`, `tilt`,
    /// `check`, `suite`, `gallery`, `report`.
    pub command: String,
    /// Property name for `check`, suite name for `suite`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fixture: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub inline: Option<PlFunction>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub inline2: Option<PlFunction>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub point: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub region: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub grid: Option<String>,
    pub seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tol_abs: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tol_strict: Option<f64>,
    #[serde(skip)]
    pub out: Option<PathBuf>,
    pub format: OutputFormat,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub report_inputs: Vec<PathBuf>,
}

impl Default for JobSpec {
    fn default() -> Self {
        JobSpec {
            command: String::new(),
            name: None,
            fixture: None,
            inline: None,
            inline2: None,
            lambda: None,
            alpha: None,
            point: None,
            region: None,
            grid: None,
            seed: 0,
            tol_abs: None,
            tol_strict: None,
            out: None,
            format: OutputFormat::Json,
            report_inputs: Vec::new(),
        }
    }
}

pub struct JobOutcome {
    pub exit_code: i32,
    pub body: String,
    pub written: Option<PathBuf>,
}

fn resolved_tolerance(job: &JobSpec) -> Result<Tolerance, JobError> {
    let mut tol = Tolerance::default();
    if let Some(a) = job.tol_abs {
        tol.eq_abs = a;
        tol.eq_rel = a.min(tol.eq_rel);
    }
    if let Some(s) = job.tol_strict {
        tol.strict_margin = s;
    }
    if !(tol.eq_abs > 0.0 && tol.strict_margin > 0.0) {
        return Err(usage("--tol-abs/--tol-strict", "tolerances must be positive"));
    }
    Ok(tol)
}

/// Parses `"a..b,c..d"` into a closed box.
pub fn parse_region(s: &str) -> Result<BoxRegion, JobError> {
    let mut bounds = Vec::new();
    for part in s.split(',') {
        let (lo, hi) = part
            .split_once("..")
            .ok_or_else(|| usage("--region", format!("expected `lo..hi`, got {part:?}")))?;
        let lo: f64 = lo
            .trim()
            .parse()
            .map_err(|e| usage("--region", format!("bad bound {lo:?}: {e}")))?;
        let hi: f64 = hi
            .trim()
            .parse()
            .map_err(|e| usage("--region", format!("bad bound {hi:?}: {e}")))?;
        if !(hi > lo) {
            return Err(usage("--region", format!("empty interval {lo}..{hi}")));
        }
        bounds.push(AxisBound::closed(lo, hi));
    }
    if bounds.is_empty() {
        return Err(usage("--region", "no axes given"));
    }
    Ok(BoxRegion { bounds })
}

/// Parses `"a..b:n"` into `n` equally spaced points.
pub fn parse_grid(s: &str) -> Result<Vec<f64>, JobError> {
    let (span, n) = s
        .split_once(':')
        .ok_or_else(|| usage("--grid", format!("expected `lo..hi:n`, got {s:?}")))?;
    let (lo, hi) = span
        .split_once("..")
        .ok_or_else(|| usage("--grid", format!("expected `lo..hi:n`, got {s:?}")))?;
    let lo: f64 = lo.trim().parse().map_err(|e| usage("--grid", format!("{e}")))?;
    let hi: f64 = hi.trim().parse().map_err(|e| usage("--grid", format!("{e}")))?;
    let n: usize = n.trim().parse().map_err(|e| usage("--grid", format!("{e}")))?;
    if n < 2 || !(hi > lo) {
        return Err(usage("--grid", "need lo < hi and at least two points"));
    }
    Ok((0..n)
        .map(|k| lo + (hi - lo) * k as f64 / (n - 1) as f64)
        .collect())
}

fn resolve_pl(job: &JobSpec) -> Result<PlFunction, JobError> {
    if let Some(f) = &job.inline {
        return Ok(f.clone());
    }
    if let Some(name) = &job.fixture {
        let fx = gallery::function_fixture(name)
            .ok_or_else(|| usage("--fixture", format!("unknown fixture {name:?}")))?;
        return fx
            .pl()
            .cloned()
            .ok_or_else(|| usage("--fixture", format!("{name} is not piecewise linear")));
    }
    Err(usage("--fixture/--inline", "no target function given"))
}

fn resolve_function_fixture(job: &JobSpec) -> Result<FunctionFixture, JobError> {
    if let Some(name) = &job.fixture {
        if let Some(fx) = gallery::function_fixture(name) {
            return Ok(fx);
        }
        return Err(usage("--fixture", format!("unknown function fixture {name:?}")));
    }
    if let Some(f) = &job.inline {
        let region = match &job.region {
            Some(r) => parse_region(r)?,
            None => {
                BoxRegion::closed(&[(f.first_breakpoint() - 3.0, f.last_breakpoint() + 3.0)])
            }
        };
        return Ok(FunctionFixture {
            name: "inline".into(),
            shape: FunctionShape::Pl(f.clone()),
            truth: gallery::TruthLabels {
                convex: Label::True,
                strictly_convex: Label::False,
                almost_strictly_convex: Label::False,
                almost_differentiable: Label::False,
            },
            provenance: "inline function".into(),
            sample_region: region.clone(),
            subdiff_region: Some(region),
            hessian: None,
            prox_oracle: None,
            conj_grad: None,
            tilt_region: None,
            minimize_region: None,
        });
    }
    Err(usage("--fixture/--inline", "no target function given"))
}

fn resolve_operator_fixture(job: &JobSpec) -> Result<OperatorFixture, JobError> {
    let name = job
        .fixture
        .as_ref()
        .ok_or_else(|| usage("--fixture", "operator checks need a fixture name"))?;
    gallery::operator_fixture(name)
        .ok_or_else(|| usage("--fixture", format!("unknown operator fixture {name:?}")))
}

/// Certified outcomes always exit 0; a refutation exits 0 only when the
/// fixture's truth labels expected one; inconclusive runs exit 1.
fn verdict_exit(v: &Verdict, refutation_expected: bool) -> i32 {
    match v.status {
        VerdictStatus::Certified => 0,
        VerdictStatus::Refuted => i32::from(!refutation_expected),
        VerdictStatus::Inconclusive => 1,
    }
}

fn refutation_expected(l: Label) -> bool {
    l == Label::False
}

fn run_check(job: &JobSpec) -> Result<(i32, serde_json::Value), JobError> {
    let tol = resolved_tolerance(job)?;
    let property = job
        .name
        .as_deref()
        .ok_or_else(|| usage("check", "missing property name"))?;
    let seed = job.seed;
    match property {
        "strict-convex" | "almost-strict-convex" | "midpoint-convex" => {
            let fx = resolve_function_fixture(job)?;
            let region = match &job.region {
                Some(r) => Some(parse_region(r)?),
                None => None,
            };
            let (verdict, expected) = match property {
                "midpoint-convex" => {
                    let v = midpoint_convexity_check(&fx.as_blackbox(), 1000, seed, &tol)
                        .map_err(|e| usage("--region", e.to_string()))?;
                    (v, refutation_expected(fx.truth.convex))
                }
                "strict-convex" => {
                    let v = match (&fx.shape, &region) {
                        (FunctionShape::Pl(f), None) => certify_strict_convexity_pl(f),
                        _ => {
                            let r = region.clone().unwrap_or_else(|| fx.sample_region.clone());
                            certify_strict_convexity_sampled(
                                &fx.as_blackbox(),
                                &r,
                                2000,
                                seed,
                                &tol,
                            )
                            .map_err(|e| usage("--region", e.to_string()))?
                        }
                    };
                    (v, refutation_expected(fx.truth.strictly_convex))
                }
                _ => {
                    let r = match &region {
                        Some(r) => r.clone(),
                        None => fx.subdiff_region.clone().ok_or_else(|| {
                            usage("--region", "fixture declares no subdifferential region")
                        })?,
                    };
                    let v = match &fx.shape {
                        FunctionShape::Pl(f) => certify_strict_convexity_pl(f),
                        FunctionShape::BlackBox(bb) => {
                            certify_almost_strict_convexity(bb, &r, 2000, seed, &tol)
                                .map_err(|e| usage("--region", e.to_string()))?
                        }
                    };
                    (v, refutation_expected(fx.truth.almost_strictly_convex))
                }
            };
            let exit = verdict_exit(&verdict, expected);
            Ok((
                exit,
                json!({ "fixture": fx.name, "property": property, "verdict": verdict }),
            ))
        }
        "monotone" | "strict-monotone" | "paramonotone" | "almost-strict-monotone"
        | "strict-nonexpansive" => {
            let fx = resolve_operator_fixture(job)?;
            let (verdict, expected) = match property {
                "monotone" => (check_monotone(&fx.graph, &tol), false),
                "strict-monotone" => (
                    check_strictly_monotone(&fx.graph, &tol),
                    !fx.strictly_monotone,
                ),
                "almost-strict-monotone" => (
                    check_almost_strictly_monotone(&fx.graph, &fx.oracle, 17, &tol),
                    !fx.almost_strictly_monotone,
                ),
                "paramonotone" => (
                    check_paramonotone(&fx.graph, Some(&fx.oracle), &tol)
                        .map_err(|e| usage("--fixture", e.to_string()))?,
                    !fx.paramonotone,
                ),
                _ => (
                    check_strictly_nonexpansive(
                        &fx.resolvent,
                        &fx.resolvent_regions,
                        1000,
                        seed,
                        &tol,
                    )
                    .verdict,
                    !fx.strictly_monotone,
                ),
            };
            let exit = verdict_exit(&verdict, expected);
            Ok((
                exit,
                json!({ "fixture": fx.name, "property": property, "verdict": verdict }),
            ))
        }
        other => Err(usage("check", format!("unknown property {other:?}"))),
    }
}

fn suite_exit(rep: &SuiteReport) -> i32 {
    i32::from(!rep.agreement)
}

fn run_suite(job: &JobSpec) -> Result<(i32, serde_json::Value), JobError> {
    let tol = resolved_tolerance(job)?;
    let name = job
        .name
        .as_deref()
        .ok_or_else(|| usage("suite", "missing suite name"))?;
    match name {
        "t-almost" => {
            let fx = resolve_function_fixture(job)?;
            let rep = theorem_almost_suite(&fx, &tol);
            Ok((suite_exit(&rep), serde_json::to_value(&rep).unwrap()))
        }
        "t-envel" => {
            let fx = resolve_function_fixture(job)?;
            let lambda = job.lambda.unwrap_or(1.0);
            if !(lambda > 0.0) {
                return Err(usage("--lambda", "must be positive"));
            }
            let grid = match &job.grid {
                Some(g) => parse_grid(g)?,
                None => default_envelope_grid(&fx, lambda, 33),
            };
            let rep = envelope_suite(&fx, lambda, &grid, &tol)
                .map_err(|e| usage("--fixture", e.to_string()))?;
            Ok((suite_exit(&rep), serde_json::to_value(&rep).unwrap()))
        }
        "t-para" => {
            let fx = resolve_operator_fixture(job)?;
            let rep = para_equivalence_suite(&fx, &tol);
            let exit = i32::from(!rep.as_expected);
            Ok((exit, serde_json::to_value(&rep).unwrap()))
        }
        other => Err(usage("suite", format!("unknown suite {other:?}"))),
    }
}

/// Versioned CSV schema for aggregated suite reports.
const REPORT_CSV_HEADER: &str = "# konvex-report-v1: fixture,suite,agreement,min_margin,samples";
/// Versioned CSV schema for envelope tables.
const TABLE_CSV_HEADER: &str = "# konvex-csv-v1: x,f,envelope,prox";

/// Aggregates suite report files into a deterministic summary table.
pub fn report_aggregate(paths: &[PathBuf]) -> Result<String, JobError> {
    let mut rows: Vec<(String, String, bool, f64, u64)> = Vec::new();
    for p in paths {
        let text = std::fs::read_to_string(p)
            .map_err(|e| JobError::MalformedReport(p.clone(), e.to_string()))?;
        let v: serde_json::Value = serde_json::from_str(&text)
            .map_err(|e| JobError::MalformedReport(p.clone(), e.to_string()))?;
        let rep = v
            .get("result")
            .ok_or_else(|| JobError::MalformedReport(p.clone(), "missing `result`".into()))?;
        let fixture = rep
            .get("fixture")
            .and_then(|f| f.as_str())
            .ok_or_else(|| JobError::MalformedReport(p.clone(), "missing `fixture`".into()))?;
        let suite = rep
            .get("suite")
            .and_then(|s| s.as_str())
            .unwrap_or("t-para")
            .to_string();
        let agreement = rep
            .get("agreement")
            .and_then(|a| a.as_bool())
            .ok_or_else(|| JobError::MalformedReport(p.clone(), "missing `agreement`".into()))?;
        let conditions = rep
            .get("conditions")
            .and_then(|c| c.as_array())
            .ok_or_else(|| JobError::MalformedReport(p.clone(), "missing `conditions`".into()))?;
        let mut min_margin = f64::INFINITY;
        let mut samples = 0u64;
        for c in conditions {
            if let Some(m) = c.pointer("/verdict/margin").and_then(|m| m.as_f64()) {
                min_margin = min_margin.min(m);
            }
            if let Some(s) = c.pointer("/verdict/samples_used").and_then(|s| s.as_u64()) {
                samples += s;
            }
        }
        rows.push((fixture.to_string(), suite, agreement, min_margin, samples));
    }
    rows.sort_by(|a, b| (&a.0, &a.1).cmp(&(&b.0, &b.1)));
    let mut out = String::from(REPORT_CSV_HEADER);
    out.push('\n');
    out.push_str("fixture,suite,agreement,min_margin,samples\n");
    for (fixture, suite, agreement, margin, samples) in rows {
        let margin = if margin == f64::INFINITY {
            "inf".to_string()
        } else {
            format!("{margin:e}")
        };
        out.push_str(&format!(
            "{fixture},{suite},{agreement},{margin},{samples}\n"
        ));
    }
    Ok(out)
}

fn envelope_table(f: &PlFunction, lambda: f64, grid: &[f64]) -> String {
    let mut out = String::from(TABLE_CSV_HEADER);
    out.push('\n');
    out.push_str("x,f,envelope,prox\n");
    for &x in grid {
        let fx = f.eval(x);
        let e = moreau_envelope(f, lambda, x);
        let p = prox(f, lambda, x);
        let fx = if fx.is_finite() {
            format!("{}", fx.raw())
        } else {
            "inf".into()
        };
        out.push_str(&format!("{x},{fx},{e},{p}\n"));
    }
    out
}

/// Executes a job. Exit code 0 means the outcome matched the fixture's
/// declared truth (or a pure computation succeeded); 1 means a verdict or
/// agreement contrary to expectation; usage problems surface as errors
/// (exit 2 in the CLI).
pub fn run(job: &JobSpec) -> Result<JobOutcome, JobError> {
    let (exit_code, result): (i32, serde_json::Value) = match job.command.as_str() {
        "conjugate" => {
            let f = resolve_pl(job)?;
            (0, serde_json::to_value(conjugate(&f)).unwrap())
        }
        "prox" => {
            let f = resolve_pl(job)?;
            let lambda = job.lambda.unwrap_or(1.0);
            if !(lambda > 0.0) {
                return Err(usage("--lambda", "must be positive"));
            }
            match (&job.point, &job.grid) {
                (Some(x), _) => (0, json!({ "x": x, "prox": prox(&f, lambda, *x) })),
                (None, Some(g)) => {
                    let grid = parse_grid(g)?;
                    let rows: Vec<serde_json::Value> = grid
                        .iter()
                        .map(|&x| json!({ "x": x, "prox": prox(&f, lambda, x) }))
                        .collect();
                    (0, json!(rows))
                }
                (None, None) => return Err(usage("--point/--grid", "prox needs a query point")),
            }
        }
        "envelope" => {
            let f = resolve_pl(job)?;
            let lambda = job.lambda.unwrap_or(1.0);
            if !(lambda > 0.0) {
                return Err(usage("--lambda", "must be positive"));
            }
            let grid = match &job.grid {
                Some(g) => parse_grid(g)?,
                None => {
                    let (lo, hi) = (f.first_breakpoint() - 3.0, f.last_breakpoint() + 3.0);
                    (0..61).map(|k| lo + (hi - lo) * k as f64 / 60.0).collect()
                }
            };
            if job.format == OutputFormat::Csv {
                let body = envelope_table(&f, lambda, &grid);
                return finish(job, 0, BodyKind::Csv(body));
            }
            let rows: Vec<serde_json::Value> = grid
                .iter()
                .map(|&x| {
                    json!({
                        "x": x,
                        "f": f.eval(x),
                        "envelope": moreau_envelope(&f, lambda, x),
                        "prox": prox(&f, lambda, x),
                    })
                })
                .collect();
            (0, json!(rows))
        }
        "prox-average" => {
            let f1 = job
                .inline
                .clone()
                .or_else(|| {
                    job.fixture
                        .as_ref()
                        .and_then(|n| gallery::function_fixture(n))
                        .and_then(|f| f.pl().cloned())
                })
                .ok_or_else(|| usage("--fixture/--inline", "first function missing"))?;
            let f2 = job
                .inline2
                .clone()
                .ok_or_else(|| usage("--inline2", "second function missing"))?;
            let params =
                ProxAverageParams::new(job.lambda.unwrap_or(1.0), job.alpha.unwrap_or(0.5))
                    .map_err(|e| usage("--lambda/--alpha", e.to_string()))?;
            let pa = proximal_average(&f1, &f2, &params)
                .map_err(|e| usage("prox-average", e.to_string()))?;
            if let Some(acc) = job.tol_abs {
                pa.require_accuracy(acc)
                    .map_err(|e| usage("--tol-abs", e.to_string()))?;
            }
            (
                0,
                json!({
                    "function": pa.function,
                    "chording_bound": pa.chording_bound,
                    "lambda": params.lambda,
                    "alpha": params.alpha,
                }),
            )
        }
        "tilt" => {
            let f = resolve_pl(job)?;
            let x = job
                .point
                .ok_or_else(|| usage("--point", "tilt needs a point"))?;
            (0, json!({ "xstar": x, "argmin": tilt_map(&f, x) }))
        }
        "check" => run_check(job)?,
        "suite" => run_suite(job)?,
        "gallery" => (0, gallery::registry_index()),
        "report" => {
            if job.report_inputs.is_empty() {
                return Err(usage("report", "no input report files"));
            }
            let body = report_aggregate(&job.report_inputs)?;
            return finish(job, 0, BodyKind::Csv(body));
        }
        other => return Err(usage("command", format!("unknown command {other:?}"))),
    };
    finish(job, exit_code, BodyKind::Json(result))
}

enum BodyKind {
    Json(serde_json::Value),
    Csv(String),
}

fn finish(job: &JobSpec, exit_code: i32, body: BodyKind) -> Result<JobOutcome, JobError> {
    let body = match body {
        BodyKind::Json(result) => {
            let report = json!({ "job": job, "result": result });
            let mut s = serde_json::to_string_pretty(&report).expect("report serializes");
            s.push('\n');
            s
        }
        BodyKind::Csv(s) => s,
    };
    let written = match &job.out {
        Some(path) => {
            write_atomic(path, body.as_bytes())?;
            Some(path.clone())
        }
        None => None,
    };
    Ok(JobOutcome {
        exit_code,
        body,
        written,
    })
}

/// Writes via a temporary file in the destination directory plus a rename.
fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), JobError> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty());
    let mut tmp = match dir {
        Some(d) => tempfile::NamedTempFile::new_in(d)?,
        None => tempfile::NamedTempFile::new_in(".")?,
    };
    tmp.write_all(bytes)?;
    tmp.persist(path).map_err(|e| JobError::Io(e.error))?;
    Ok(())
}
