//! Catalogued end-to-end reproductions, each producing a [`Report`] of
//! exactly checked claims.

mod render;
mod scenarios;

use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::groups::is_prime;
use crate::series::{Precision, Series, ValuationResult};

pub use render::{render_json, render_text, RenderMode};

/// Scenario parameters. Unset fields take the scenario default; the Report
/// records the resolved values.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct Params {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k_max: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub precision: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub field_size: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub s: Option<Vec<u64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClaimStatus {
    Exact,
    Mismatch,
    Indeterminate,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Claim {
    pub description: String,
    pub lhs: String,
    pub rhs: String,
    pub exact_match: bool,
    pub status: ClaimStatus,
    /// Evidence for a limit statement at a finite level only.
    pub finite_level: bool,
}

impl Claim {
    fn new(description: impl Into<String>, lhs: impl Into<String>, rhs: impl Into<String>, status: ClaimStatus) -> Self {
        Claim {
            description: description.into(),
            lhs: lhs.into(),
            rhs: rhs.into(),
            exact_match: status == ClaimStatus::Exact,
            status,
            finite_level: false,
        }
    }

    /// Equality of rendered values.
    pub fn equal(description: impl Into<String>, lhs: impl ToString, rhs: impl ToString) -> Self {
        let (l, r) = (lhs.to_string(), rhs.to_string());
        let status = if l == r { ClaimStatus::Exact } else { ClaimStatus::Mismatch };
        Claim::new(description, l, r, status)
    }

    pub fn holds(description: impl Into<String>, lhs: impl ToString, rhs: impl ToString, ok: bool) -> Self {
        let status = if ok { ClaimStatus::Exact } else { ClaimStatus::Mismatch };
        Claim::new(description, lhs.to_string(), rhs.to_string(), status)
    }

    /// `lhs = rhs` as series, certified at least to `need` when given.
    pub fn series(description: impl Into<String>, lhs: &Series, rhs: &Series, need: Option<&Precision>) -> Self {
        let status = match lhs.sub(rhs) {
            Err(_) => ClaimStatus::Mismatch,
            Ok(d) if !d.is_zero_to_precision() => ClaimStatus::Mismatch,
            Ok(d) => match need {
                Some(n) if d.precision() < n => ClaimStatus::Indeterminate,
                _ => ClaimStatus::Exact,
            },
        };
        Claim::new(description, lhs.to_string(), rhs.to_string(), status)
    }

    pub fn value(description: impl Into<String>, lhs: &ValuationResult, rhs: &crate::groups::GroupElem) -> Self {
        let status = match lhs {
            ValuationResult::Exact(g) if g == rhs => ClaimStatus::Exact,
            ValuationResult::AtLeast(g) if g <= rhs => ClaimStatus::Indeterminate,
            _ => ClaimStatus::Mismatch,
        };
        Claim::new(description, lhs.to_string(), rhs.to_string(), status)
    }

    /// A claim whose computation ran out of precision.
    pub fn indeterminate(description: impl Into<String>, reason: impl ToString, rhs: impl ToString) -> Self {
        Claim::new(description, reason.to_string(), rhs.to_string(), ClaimStatus::Indeterminate)
    }

    pub fn finite_level(mut self) -> Self {
        self.finite_level = true;
        self
    }
}

/// Degree bookkeeping `n = d·e·f` at one level of a tower.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RamificationRow {
    pub level: usize,
    pub n: u64,
    pub e: u64,
    pub f: u64,
    pub d: u64,
    pub finite_level: bool,
}

impl RamificationRow {
    /// Fill in `d = n/(e·f)`, which must be a power of `p`.
    pub fn new(level: usize, p: u64, n: u64, e: u64, f: u64) -> Result<Self> {
        let ef = e * f;
        if ef == 0 || n % ef != 0 {
            return Err(Error::Hypothesis(format!("e·f = {ef} does not divide n = {n}")));
        }
        let d = n / ef;
        let mut x = d;
        while x % p == 0 {
            x /= p;
        }
        if x != 1 {
            return Err(Error::Hypothesis(format!("d = {d} is not a power of {p}")));
        }
        Ok(RamificationRow { level, n, e, f, d, finite_level: true })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub scenario: String,
    pub params: Params,
    pub claims: Vec<Claim>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub ramification: Vec<RamificationRow>,
    pub pass: bool,
    pub elapsed_ms: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ParamSchema {
    pub name: &'static str,
    pub kind: &'static str,
    pub default: String,
    pub constraint: &'static str,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ScenarioInfo {
    pub name: &'static str,
    pub title: &'static str,
    pub reference: &'static str,
    pub params: Vec<ParamSchema>,
}

fn schema(name: &'static str, kind: &'static str, default: impl ToString, constraint: &'static str) -> ParamSchema {
    ParamSchema { name, kind, default: default.to_string(), constraint }
}

fn prime_p(default: u64) -> ParamSchema {
    schema("p", "integer", default, "prime")
}

/// The catalog in its fixed order G1..G9.
pub fn list_scenarios() -> Vec<ScenarioInfo> {
    vec![
        ScenarioInfo {
            name: "G1",
            title: "FrobeniusRoot",
            reference: "root of X^p - X - t lifted from 0 by Newton iteration",
            params: vec![prime_p(2), schema("precision", "group element of Z", "p^4", "positive")],
        },
        ScenarioInfo {
            name: "G2",
            title: "DefectTower",
            reference: "approximations of the Artin-Schreier root of X^p - X - 1/t and the tower of value groups",
            params: vec![prime_p(2), schema("k_max", "integer", 3, "k_max >= 1 and p^(k_max+1) <= 2^40")],
        },
        ScenarioInfo {
            name: "G3",
            title: "BadValueGroup",
            reference: "recovery of t^(1/k) from x2 = sum of t^(-1/n), n in S",
            params: vec![
                prime_p(3),
                schema("s", "set of integers", "[2,4,5,7,8,10]", "every n in S has gcd(n, p) = 1"),
                schema("precision", "group element of (1/lcm S)Z", 3, "positive"),
            ],
        },
        ScenarioInfo {
            name: "G4",
            title: "BadResidue",
            reference: "residues a_k of (x2 - s_k)/t^k generating F_(p^k), lifted as roots of their minimal polynomials",
            params: vec![
                prime_p(2),
                schema("k_max", "integer", 4, "p^lcm(1..k_max) fits in 64 bits"),
                schema("precision", "group element of Z", 8, "positive"),
            ],
        },
        ScenarioInfo {
            name: "G5",
            title: "ZSeries",
            reference: "values 1/p^(k+1) from the series z = sum t^(p^nu_i - p^-nu_i)",
            params: vec![prime_p(2), schema("k_max", "integer", 4, "p^(nu_k + nu_(k+2)) fits in 62 bits")],
        },
        ScenarioInfo {
            name: "G6",
            title: "NonIsoMIE",
            reference: "theta_c - theta is an Artin-Schreier root of the constant c with nonzero trace",
            params: vec![
                prime_p(2),
                schema("k_max", "integer", 3, "k_max >= 1"),
                schema("field_size", "integer", "p^p", "p^m with p | m"),
            ],
        },
        ScenarioInfo {
            name: "G7",
            title: "Puiseux",
            reference: "t^(1/k) in the Puiseux series field over Q: value denominators and residues",
            params: vec![schema("k_max", "integer", 6, "k_max >= 1")],
        },
        ScenarioInfo {
            name: "G8",
            title: "SchmidtDefect",
            reference: "K(t, s) over K(t, s^p) for transcendental s: values and residues unchanged on samples",
            params: vec![prime_p(2), schema("seed", "integer", 0, "any")],
        },
        ScenarioInfo {
            name: "G9",
            title: "CuspIFT",
            reference: "the cusp y^2 = x^3: value 3/2, implicit function at a smooth point, singular origin",
            params: vec![schema("precision", "group element of Z", 8, "positive")],
        },
    ]
}

/// Resolve a scenario name given as `G2`, `g2` or `DefectTower`.
pub fn canonical_name(name: &str) -> Result<&'static str> {
    list_scenarios()
        .into_iter()
        .find(|s| s.name.eq_ignore_ascii_case(name) || s.title.eq_ignore_ascii_case(name))
        .map(|s| s.name)
        .ok_or_else(|| Error::UnknownScenario(name.to_string()))
}

pub(crate) fn check_prime(p: u64) -> Result<u64> {
    if is_prime(p) {
        Ok(p)
    } else {
        Err(Error::InvalidParams(format!("p = {p} is not prime")))
    }
}

pub(crate) fn check_k_max(k: usize) -> Result<usize> {
    if k == 0 {
        Err(Error::InvalidParams("k_max must be at least 1".into()))
    } else {
        Ok(k)
    }
}

/// Run one scenario. Invalid parameters are errors; claims that could not be
/// decided at the available precision are reported as indeterminate.
pub fn run_scenario(name: &str, params: &Params) -> Result<Report> {
    let name = canonical_name(name)?;
    let (params, claims, ramification) = match name {
        "G1" => scenarios::frobenius_root(params)?,
        "G2" => scenarios::defect_tower(params)?,
        "G3" => scenarios::bad_value_group(params)?,
        "G4" => scenarios::bad_residue(params)?,
        "G5" => scenarios::z_series(params)?,
        "G6" => scenarios::non_iso_mie(params)?,
        "G7" => scenarios::puiseux(params)?,
        "G8" => scenarios::schmidt_defect(params)?,
        _ => scenarios::cusp(params)?,
    };
    let pass = !claims.is_empty() && claims.iter().all(|c| c.exact_match);
    Ok(Report { scenario: name.to_string(), params, claims, ramification, pass, elapsed_ms: None })
}

/// [`run_scenario`] with wall-clock time recorded in `elapsed_ms`.
pub fn run_timed(name: &str, params: &Params) -> Result<Report> {
    let start = Instant::now();
    let mut r = run_scenario(name, params)?;
    r.elapsed_ms = Some(start.elapsed().as_millis() as u64);
    Ok(r)
}

/// Run several scenarios concurrently; results come back in input order.
pub fn run_many(names: &[String], params: &Params, timed: bool) -> Vec<Result<Report>> {
    std::thread::scope(|sc| {
        let handles: Vec<_> = names
            .iter()
            .map(|n| sc.spawn(move || if timed { run_timed(n, params) } else { run_scenario(n, params) }))
            .collect();
        handles.into_iter().map(|h| h.join().expect("scenario thread panicked")).collect()
    })
}
