//! Running a scenario's checks over its resolutions and reporting the result.

use std::fmt::Write as _;
use std::time::Instant;

use serde::Serialize;
use vekua::grid::GridDomain;
use vekua::potential::curl_inverse;
use vekua::vekua_ops::FactorizingFunction;
use vekua::{Error, Result};

use crate::checks::{check, CheckContext, CheckKind, VerificationCheck};
use crate::scenario::Scenario;

/// Residuals at or below this are round-off and pass outright.
pub const ROUNDOFF_FLOOR: f64 = 1e-12;

/// Largest resolution at which Newton-potential checks run without `--force`.
pub const NEWTON_RES_LIMIT: usize = 32;

#[derive(Clone, Debug)]
pub struct VerifyOptions {
    pub layer: usize,
    pub curl_inverse: String,
    pub force: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckRow {
    pub name: String,
    pub residual: f64,
    pub bound: f64,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct RefinementRow {
    pub check: String,
    pub n: usize,
    pub h: f64,
    pub residual: f64,
    pub ratio: Option<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub scenario: String,
    pub checks: Vec<CheckRow>,
    pub refinement: Vec<RefinementRow>,
    pub status: &'static str,
    pub wall_time_s: f64,
    #[serde(skip)]
    pub usage_error: bool,
    #[serde(skip)]
    pub warnings: Vec<String>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.status == "pass"
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "scenario {}", self.scenario);
        for w in &self.warnings {
            let _ = writeln!(s, "  warning: {w}");
        }
        for c in &self.checks {
            let mark = if c.pass { "PASS" } else { "FAIL" };
            let _ = write!(s, "  {mark} {:<22} residual {:.3e}  bound {:.3e}", c.name, c.residual, c.bound);
            if let Some(e) = &c.error {
                let _ = write!(s, "  ({e})");
            }
            s.push('\n');
        }
        if !self.refinement.is_empty() {
            let _ = writeln!(s, "  {:<22} {:>4} {:>10} {:>11} {:>7}", "refinement", "n", "h", "residual", "ratio");
            for r in &self.refinement {
                let ratio = r.ratio.map(|x| format!("{x:.2}")).unwrap_or_else(|| "-".into());
                let _ = writeln!(s, "  {:<22} {:>4} {:>10.4e} {:>11.3e} {:>7}", r.check, r.n, r.h, r.residual, ratio);
            }
        }
        let _ = writeln!(s, "  status {} ({:.2} s)", self.status, self.wall_time_s);
        s
    }
}

/// Errors that come from input handling rather than from a failed check.
pub fn is_usage_error(e: &Error) -> bool {
    matches!(
        e,
        Error::Io { .. }
            | Error::Format { .. }
            | Error::Unknown { .. }
            | Error::Scenario(_)
            | Error::InvalidGrid(_)
            | Error::FieldMismatch(_)
    )
}

struct Level {
    domain: GridDomain,
    f: FactorizingFunction,
}

fn setup(sc: &Scenario) -> Result<Vec<Level>> {
    let domains: Vec<GridDomain> = match sc.f.file_domain()? {
        Some(d) => vec![d],
        None => sc.res.iter().map(|&n| sc.domain.build(n)).collect::<Result<_>>()?,
    };
    domains
        .into_iter()
        .map(|domain| {
            let f = FactorizingFunction::new(sc.f.sample(&domain)?)?;
            Ok(Level { domain, f })
        })
        .collect()
}

fn error_row(name: &str, e: &Error) -> CheckRow {
    CheckRow { name: name.into(), residual: f64::NAN, bound: f64::NAN, pass: false, error: Some(e.to_string()) }
}

/// Judge one check from its refinement rows.
fn judge(sc: &Scenario, c: &dyn VerificationCheck, rows: &[RefinementRow]) -> CheckRow {
    let last = rows.last().expect("at least one level");
    let bound = match c.kind() {
        CheckKind::Stencil => sc.tol_k_for(c.name()) * last.h * last.h,
        CheckKind::Quadrature => sc.quadrature_bound,
    };
    let pass = if last.residual <= ROUNDOFF_FLOOR {
        true
    } else {
        let trend = rows.windows(2).all(|w| {
            if w[1].residual <= ROUNDOFF_FLOOR {
                return true;
            }
            let ratio = w[0].residual / w[1].residual;
            match c.kind() {
                CheckKind::Stencil => ratio >= sc.ratio.0 && ratio <= sc.ratio.1,
                CheckKind::Quadrature => ratio > 1.0,
            }
        });
        last.residual <= bound && trend
    };
    CheckRow { name: c.name().into(), residual: last.residual, bound, pass, error: None }
}

pub fn verify(sc: &Scenario, opts: &VerifyOptions) -> Report {
    let start = Instant::now();
    let mut report = Report {
        scenario: sc.name.clone(),
        checks: Vec::new(),
        refinement: Vec::new(),
        status: "fail",
        wall_time_s: 0.0,
        usage_error: false,
        warnings: Vec::new(),
    };
    let prepared = sc.validate().and_then(|_| {
        let curl = curl_inverse(&opts.curl_inverse)?;
        let checks = sc.checks.iter().map(|n| check(n)).collect::<Result<Vec<_>>>()?;
        Ok((curl, checks, setup(sc)?))
    });
    let (curl, checks, levels) = match prepared {
        Ok(p) => p,
        Err(e) => {
            report.usage_error = is_usage_error(&e);
            report.checks.push(error_row("setup", &e));
            report.wall_time_s = start.elapsed().as_secs_f64();
            return report;
        }
    };
    for c in &checks {
        let mut rows: Vec<RefinementRow> = Vec::new();
        let mut failure = None;
        for level in &levels {
            let n = level.domain.res().into_iter().max().unwrap_or(0);
            if c.newton_dependent() && n > NEWTON_RES_LIMIT && !opts.force {
                report
                    .warnings
                    .push(format!("{}: skipped n = {n} (above {NEWTON_RES_LIMIT}, use --force)", c.name()));
                continue;
            }
            let ctx = CheckContext {
                scenario: sc,
                domain: level.domain,
                f: &level.f,
                layer: opts.layer,
                curl: curl.clone(),
            };
            match c.residual(&ctx) {
                Ok(residual) => {
                    let ratio = rows.last().map(|p| p.residual / residual);
                    rows.push(RefinementRow { check: c.name().into(), n, h: level.domain.h(), residual, ratio });
                }
                Err(e) => {
                    report.usage_error |= is_usage_error(&e);
                    failure = Some(e);
                    break;
                }
            }
        }
        let row = match (&failure, rows.is_empty()) {
            (Some(e), _) => error_row(c.name(), e),
            (None, true) => CheckRow {
                name: c.name().into(),
                residual: f64::NAN,
                bound: f64::NAN,
                pass: false,
                error: Some("no resolution ran".into()),
            },
            (None, false) => judge(sc, c.as_ref(), &rows),
        };
        report.checks.push(row);
        report.refinement.extend(rows);
    }
    if !report.checks.is_empty() && report.checks.iter().all(|c| c.pass) {
        report.status = "pass";
    }
    report.wall_time_s = start.elapsed().as_secs_f64();
    report
}
