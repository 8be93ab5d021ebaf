//! The completion report and its independent re-verification.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::{complete, error_text, Config};
use crate::arith::{Integrality, Rationals};
use crate::error::Error;
use crate::fgl::{witness, FormalGroupLaw};
use crate::honda::{trivial_sigma, FrobeniusPolynomial};
use crate::lattice::{IntMatrix, TorusSpec};
use crate::series::{tuple_from_json, SeriesContext, SeriesTuple};

pub const REPORT_FORMAT: &str = "fgl-neron-report/1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub status: Status,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

impl Check {
    pub fn pass(name: impl Into<String>) -> Self {
        Check { name: name.into(), status: Status::Pass, witness: None }
    }

    pub fn fail(name: impl Into<String>, witness: impl Into<String>) -> Self {
        Check { name: name.into(), status: Status::Fail, witness: Some(witness.into()) }
    }

    pub fn skipped(name: impl Into<String>, reason: impl Into<String>) -> Self {
        Check { name: name.into(), status: Status::Skipped, witness: Some(reason.into()) }
    }

    pub fn failed(&self) -> bool {
        self.status == Status::Fail
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ReportKind {
    Global,
    Quadratic,
    Local,
}

/// The split `X / Ker rho_s` of a torus over `Q_p` and the resulting type.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LocalSummary {
    pub p: u64,
    pub d_s: usize,
    pub d_a: usize,
    /// `U~_1`, of size `d_s`.
    pub u1_tilde: IntMatrix,
    /// Basis of the character lattice whose last `d_a` columns span `Ker rho_s`.
    pub lattice_basis: IntMatrix,
    /// `C_1` in the type `p I - C_1 D`.
    pub type_coefficient: IntMatrix,
    pub summary: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CompletionReport {
    pub format: String,
    pub kind: ReportKind,
    pub spec: TorusSpec,
    pub degree: u32,
    pub budget: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phi_degree: Option<u32>,
    pub dimension: usize,
    #[serde(rename = "F")]
    pub law: Value,
    pub lambda: Value,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub xi: BTreeMap<u64, IntMatrix>,
    #[serde(rename = "Q", default, skip_serializing_if = "Option::is_none")]
    pub q: Option<IntMatrix>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub e: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub s_choices: Option<Vec<u64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub local: Option<LocalSummary>,
    pub checks: Vec<Check>,
    pub verdict: Status,
}

impl CompletionReport {
    pub fn passed(&self) -> bool {
        self.verdict == Status::Pass
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize") + "\n"
    }

    pub fn from_json(text: &str) -> Result<Self, Error> {
        serde_json::from_str(text).map_err(|e| Error::Spec(format!("malformed report: {e}")))
    }

    pub(crate) fn verdict_of(checks: &[Check]) -> Status {
        if checks.iter().any(Check::failed) {
            Status::Fail
        } else {
            Status::Pass
        }
    }

    /// Which integrality the law satisfies: `Z`, or `Z_(p)` for a local report.
    pub fn integrality(&self) -> Integrality {
        match &self.local {
            Some(l) => Integrality::Local(l.p),
            None => Integrality::Global,
        }
    }

    /// `F` and `lambda` parsed at the report's degree.
    pub fn parse_law(&self) -> Result<(SeriesTuple<Rationals>, SeriesTuple<Rationals>), Error> {
        let d = self.dimension;
        let ctx1 = SeriesContext::new(Rationals, d, self.degree)?;
        let ctx2 = SeriesContext::new(Rationals, 2 * d, self.degree)?;
        let law = tuple_from_json(&ctx2, &self.law)?;
        let lambda = tuple_from_json(&ctx1, &self.lambda)?;
        if law.len() != d || lambda.len() != d {
            return Err(Error::Spec(format!("expected {d} components in F and lambda")));
        }
        Ok((law, lambda))
    }
}

/// Result of re-verifying a report.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerifyOutcome {
    pub checks: Vec<Check>,
}

impl VerifyOutcome {
    pub fn passed(&self) -> bool {
        !self.checks.iter().any(Check::failed)
    }
}

/// First path where two JSON values differ.
fn first_divergence(path: &str, a: &Value, b: &Value) -> Option<String> {
    match (a, b) {
        (Value::Object(x), Value::Object(y)) => {
            let keys: std::collections::BTreeSet<&String> = x.keys().chain(y.keys()).collect();
            keys.into_iter().find_map(|k| match (x.get(k), y.get(k)) {
                (Some(u), Some(v)) => first_divergence(&format!("{path}.{k}"), u, v),
                _ => Some(format!("{path}.{k} present in only one report")),
            })
        }
        (Value::Array(x), Value::Array(y)) => {
            if let Some(i) = (0..x.len().min(y.len())).find(|&i| x[i] != y[i]) {
                return first_divergence(&format!("{path}[{i}]"), &x[i], &y[i]);
            }
            (x.len() != y.len()).then(|| format!("{path} has {} entries, recomputed {}", x.len(), y.len()))
        }
        _ if a == b => None,
        _ => Some(format!("{path}: report has {a}, recomputed {b}")),
    }
}

/// Checks a report against its own embedded data and against a fresh recomputation.
pub fn verify_report(report: &CompletionReport) -> VerifyOutcome {
    let mut checks = Vec::new();
    checks.push(if report.format == REPORT_FORMAT {
        Check::pass("report format")
    } else {
        Check::fail("report format", format!("unknown format {:?}", report.format))
    });
    let failing: Vec<&str> = report.checks.iter().filter(|c| c.failed()).map(|c| c.name.as_str()).collect();
    checks.push(match (failing.first(), report.verdict) {
        (None, Status::Pass) => Check::pass("recorded checks pass"),
        (Some(name), _) => Check::fail("recorded checks pass", format!("check {name:?} failed")),
        (None, v) => Check::fail("recorded checks pass", format!("verdict {v:?} without a failing check")),
    });
    match report.parse_law() {
        Ok((law, lambda)) => embedded_checks(report, &law, &lambda, &mut checks),
        Err(e) => checks.push(Check::fail("embedded F and lambda parse", error_text(&e))),
    }
    let recomputed = complete(&report.spec, Config { degree: report.degree, budget: report.budget });
    checks.push(match recomputed {
        Ok(fresh) => {
            let a = serde_json::to_value(report).expect("reports serialize");
            let b = serde_json::to_value(&fresh).expect("reports serialize");
            match first_divergence("report", &a, &b) {
                None => Check::pass("recomputation matches the report"),
                Some(w) => Check::fail("recomputation matches the report", w),
            }
        }
        Err(e) => Check::fail("recomputation matches the report", error_text(&e)),
    });
    VerifyOutcome { checks }
}

fn embedded_checks(
    report: &CompletionReport,
    law: &SeriesTuple<Rationals>,
    lambda: &SeriesTuple<Rationals>,
    checks: &mut Vec<Check>,
) {
    checks.push(match witness(law, report.integrality()) {
        None => Check::pass("embedded F integral"),
        Some(w) => Check::fail("embedded F integral", w.to_string()),
    });
    checks.push(match FormalGroupLaw::from_logarithm(lambda) {
        Ok(from_log) => match from_log.law().first_difference(law) {
            None => Check::pass("embedded F is the law of embedded lambda"),
            Some((i, m, a, b)) => Check::fail(
                "embedded F is the law of embedded lambda",
                format!("component {i} monomial {:?}: lambda gives {a}, report has {b}", m.exps()),
            ),
        },
        Err(e) => Check::fail("embedded F is the law of embedded lambda", error_text(&e)),
    });
    let mut types: Vec<(String, Result<FrobeniusPolynomial, Error>)> = report
        .xi
        .iter()
        .map(|(&p, m)| (format!("embedded type p={p}"), FrobeniusPolynomial::linear_type(p, m)))
        .collect();
    if let Some(l) = &report.local {
        types.push((format!("embedded type p={}", l.p), FrobeniusPolynomial::linear_type(l.p, &l.type_coefficient)));
    }
    for (name, u) in types {
        checks.push(match u {
            Ok(u) => {
                let c = u.is_type(lambda, report.degree, &trivial_sigma);
                if c.holds() {
                    Check::pass(name)
                } else {
                    Check::fail(name, c.witness.map(|w| w.to_string()).unwrap_or_default())
                }
            }
            Err(e) => Check::fail(name, error_text(&e)),
        });
    }
}
