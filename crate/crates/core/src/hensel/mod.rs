//! Hensel lifting over truncated series: simple roots, square systems and the
//! valuative implicit function theorem.
//!
//! Every Newton step records the valuation of the residual so callers can
//! audit the quadratic-convergence certificate.

mod linalg;

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::fields::upoly::UPoly;
use crate::fields::{FieldDesc, FieldElem, MPoly};
use crate::groups::{GroupDesc, GroupElem};
use crate::series::{Precision, Residue, Series, ValuationResult};

pub use linalg::{series_det, series_solve};

const MAX_STEPS: usize = 64;

/// Univariate polynomial with series coefficients, low degree first.
#[derive(Clone, Debug, PartialEq)]
pub struct SeriesPoly {
    field: FieldDesc,
    group: GroupDesc,
    coeffs: Vec<Series>,
}

impl SeriesPoly {
    pub fn new(field: &FieldDesc, group: &GroupDesc, coeffs: Vec<Series>) -> Result<Self> {
        for c in &coeffs {
            if c.field() != field || c.group() != group {
                return Err(Error::FieldMismatch(c.field().to_string(), field.to_string()));
            }
        }
        Ok(SeriesPoly { field: field.clone(), group: group.clone(), coeffs })
    }

    /// Lift a polynomial with constant coefficients.
    pub fn from_upoly(f: &UPoly, group: &GroupDesc) -> Self {
        let coeffs = f.coeffs.iter().map(|c| Series::constant(group, c.clone())).collect();
        SeriesPoly { field: f.desc.clone(), group: group.clone(), coeffs }
    }

    pub fn field(&self) -> &FieldDesc {
        &self.field
    }

    pub fn group(&self) -> &GroupDesc {
        &self.group
    }

    pub fn coeffs(&self) -> &[Series] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn eval(&self, x: &Series) -> Result<Series> {
        let mut acc = Series::zero(&self.field, &self.group);
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(x)?.add(c)?;
        }
        Ok(acc)
    }

    pub fn derivative(&self) -> SeriesPoly {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c.scale(&self.field.from_int(i as i64)))
            .collect();
        SeriesPoly { field: self.field.clone(), group: self.group.clone(), coeffs }
    }

    /// Residue polynomial, requiring integral coefficients.
    pub fn residue_poly(&self) -> Result<UPoly> {
        let mut out = Vec::with_capacity(self.coeffs.len());
        for c in &self.coeffs {
            match c.residue()? {
                Residue::Value(r) => out.push(r),
                Residue::Pole => return Err(Error::Precondition(format!("coefficient {c} is not integral"))),
            }
        }
        Ok(UPoly::new(self.field.clone(), out))
    }

    fn check_integral(&self) -> Result<()> {
        for c in &self.coeffs {
            if let ValuationResult::Exact(g) = c.valuation() {
                if g.is_negative() {
                    return Err(Error::Precondition(format!("coefficient {c} has negative value {g}")));
                }
            }
        }
        Ok(())
    }

    fn check_precision(&self, target: &GroupElem) -> Result<()> {
        for c in &self.coeffs {
            if let Precision::Finite(p) = c.precision() {
                if p < target {
                    return Err(Error::InsufficientPrecision(format!("coefficient known only to O(t^({p})), target {target}")));
                }
            }
        }
        Ok(())
    }
}

impl fmt::Display for SeriesPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.terms().is_empty() && c.is_exact() {
                continue;
            }
            let x = match i {
                0 => String::new(),
                1 => "*X".to_string(),
                _ => format!("*X^{i}"),
            };
            parts.push(format!("({c}){x}"));
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// Outcome of a Newton lift with its per-step residual valuations.
#[derive(Clone, Debug, PartialEq)]
pub struct LiftResult {
    pub root: Series,
    pub steps: Vec<ValuationResult>,
}

/// Truncate a residual, keeping an exact zero exact.
fn cut_residual(r: Series, cut: &Precision) -> Series {
    if r.is_exact() && r.terms().is_empty() {
        r
    } else {
        r.truncate(cut)
    }
}

fn residual_bound(v: &ValuationResult, target: &GroupElem) -> GroupElem {
    match v {
        ValuationResult::Exact(g) => GroupElem::min_of(g, target),
        _ => target.clone(),
    }
}

fn reached(v: &ValuationResult, target: &GroupElem) -> bool {
    match v {
        ValuationResult::Exact(g) => g >= target,
        ValuationResult::Infinity => true,
        ValuationResult::AtLeast(g) => g >= target,
    }
}

/// Check `r_next ≥ min(2r − 2α, target)`.
fn certify(prev: &ValuationResult, next: &ValuationResult, alpha: &GroupElem, target: &GroupElem) -> Result<()> {
    let r = residual_bound(prev, target);
    let want = GroupElem::min_of(&(&r.int_scale(2) - &alpha.int_scale(2)), target);
    let got = match next {
        ValuationResult::Exact(g) => g.clone(),
        _ => return Ok(()),
    };
    if got < want {
        return Err(Error::Precondition(format!("Newton step did not converge quadratically: {got} < {want}")));
    }
    Ok(())
}

/// Lift an approximate simple root `b` of `f` to a root modulo `t^target`.
///
/// Requires `v(f(b)) > 0` and `v(f′(b)) = 0`. Iterates `a ← a − f(a)/f′(a)`.
pub fn hensel_lift(f: &SeriesPoly, b: &Series, target: &GroupElem) -> Result<LiftResult> {
    if f.degree() == 0 {
        return Err(Error::Precondition("polynomial must have degree at least 1".into()));
    }
    f.check_integral()?;
    f.check_precision(target)?;
    if let ValuationResult::Exact(g) = b.valuation() {
        if g.is_negative() {
            return Err(Error::Precondition(format!("start {b} has negative value")));
        }
    }
    let fp = f.derivative();
    let mut a = b.truncate(&Precision::Finite(target.clone())).with_precision(Precision::Infinite);
    let r0 = cut_residual(f.eval(&a)?, &Precision::Finite(target.clone())).valuation();
    match &r0 {
        ValuationResult::Exact(g) if !g.is_positive() => {
            return Err(Error::Precondition(format!("v(f(b)) = {g} is not positive")));
        }
        _ => {}
    }
    let d0 = fp.eval(&a)?.valuation();
    match &d0 {
        ValuationResult::Exact(g) if g.is_zero() => {}
        other => return Err(Error::Precondition(format!("v(f'(b)) = {other}, expected 0"))),
    }
    if let ValuationResult::Exact(g) = &r0 {
        if GroupElem::multiple_reaching(g, target).is_none() {
            return Err(Error::PrecisionUnreachable {
                target: target.to_string(),
                reason: format!("residual value {g} never doubles past it"),
            });
        }
    }
    let cut = Precision::Finite(target.clone());
    let zero = f.group.zero();
    let mut steps = vec![r0.clone()];
    let mut r = r0;
    while !reached(&r, target) {
        if steps.len() > MAX_STEPS {
            return Err(Error::IterationCap(MAX_STEPS));
        }
        let fa = f.eval(&a)?.truncate(&cut);
        let dinv = fp.eval(&a)?.invert(Some(target))?;
        let step = fa.with_precision(Precision::Infinite).mul(&dinv.with_precision(Precision::Infinite))?;
        a = a.sub(&step)?.truncate(&cut).with_precision(Precision::Infinite);
        let next = cut_residual(f.eval(&a)?, &cut).valuation();
        certify(&r, &next, &zero, target)?;
        steps.push(next.clone());
        r = next;
    }
    Ok(LiftResult { root: a.with_precision(cut), steps })
}

/// Simple roots of the residue polynomial of `f` in the residue field.
pub fn residue_simple_roots(f: &SeriesPoly) -> Result<Vec<FieldElem>> {
    let rf = f.residue_poly()?;
    if rf.degree().unwrap_or(0) == 0 {
        return Ok(Vec::new());
    }
    rf.simple_roots()
}

/// Lift every simple residue root; `NoResidueRoot` when there is none.
pub fn lift_residue_roots(f: &SeriesPoly, target: &GroupElem) -> Result<Vec<LiftResult>> {
    let roots = residue_simple_roots(f)?;
    if roots.is_empty() {
        return Err(Error::NoResidueRoot);
    }
    roots
        .into_iter()
        .map(|r| hensel_lift(f, &Series::constant(&f.group, r), target))
        .collect()
}

/// Multivariate polynomial with series coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct SeriesMPoly {
    field: FieldDesc,
    group: GroupDesc,
    vars: Vec<String>,
    terms: BTreeMap<Vec<u32>, Series>,
}

impl SeriesMPoly {
    pub fn new(field: &FieldDesc, group: &GroupDesc, vars: &[String], terms: Vec<(Vec<u32>, Series)>) -> Result<Self> {
        let mut map: BTreeMap<Vec<u32>, Series> = BTreeMap::new();
        for (e, c) in terms {
            if e.len() != vars.len() {
                return Err(Error::Precondition("exponent length does not match variables".into()));
            }
            let merged = match map.remove(&e) {
                Some(old) => old.add(&c)?,
                None => c,
            };
            map.insert(e, merged);
        }
        map.retain(|_, c| !(c.is_exact() && c.terms().is_empty()));
        Ok(SeriesMPoly { field: field.clone(), group: group.clone(), vars: vars.to_vec(), terms: map })
    }

    /// Lift a polynomial with constant coefficients.
    pub fn from_mpoly(f: &MPoly, group: &GroupDesc) -> Self {
        let terms = f.terms().map(|(e, c)| (e.clone(), Series::constant(group, c.clone()))).collect();
        SeriesMPoly { field: f.field().clone(), group: group.clone(), vars: f.vars().to_vec(), terms }
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn eval(&self, point: &[Series]) -> Result<Series> {
        if point.len() != self.vars.len() {
            return Err(Error::Precondition("point dimension mismatch".into()));
        }
        let mut powers: Vec<Vec<Series>> = point.iter().map(|x| vec![Series::one(&self.field, &self.group), x.clone()]).collect();
        let mut acc = Series::zero(&self.field, &self.group);
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (i, k) in e.iter().enumerate() {
                let k = *k as usize;
                while powers[i].len() <= k {
                    let next = powers[i].last().expect("nonempty").mul(&point[i])?;
                    powers[i].push(next);
                }
                if k > 0 {
                    t = t.mul(&powers[i][k])?;
                }
            }
            acc = acc.add(&t)?;
        }
        Ok(acc)
    }

    pub fn partial_derivative(&self, i: usize) -> SeriesMPoly {
        let terms = self
            .terms
            .iter()
            .filter(|(e, _)| e[i] > 0)
            .map(|(e, c)| {
                let mut ne = e.clone();
                ne[i] -= 1;
                (ne, c.scale(&self.field.from_int(e[i] as i64)))
            })
            .collect();
        SeriesMPoly { field: self.field.clone(), group: self.group.clone(), vars: self.vars.clone(), terms }
    }

    fn check_precision(&self, target: &GroupElem) -> Result<()> {
        for c in self.terms.values() {
            if let Precision::Finite(p) = c.precision() {
                if p < target {
                    return Err(Error::InsufficientPrecision(format!("coefficient known only to O(t^({p}))")));
                }
            }
        }
        Ok(())
    }
}

/// Polynomials `f₁..fₙ` in common variables with their formal Jacobian.
#[derive(Clone, Debug)]
pub struct SystemInstance {
    pub polys: Vec<SeriesMPoly>,
    pub jacobian: Vec<Vec<SeriesMPoly>>,
}

impl SystemInstance {
    pub fn new(polys: Vec<SeriesMPoly>) -> Result<Self> {
        let Some(first) = polys.first() else {
            return Err(Error::Precondition("empty system".into()));
        };
        if polys.iter().any(|f| f.vars != first.vars) {
            return Err(Error::VariableMismatch(first.vars.join(","), String::new()));
        }
        let nv = first.vars.len();
        let jacobian = polys.iter().map(|f| (0..nv).map(|j| f.partial_derivative(j)).collect()).collect();
        Ok(SystemInstance { polys, jacobian })
    }

    pub fn num_vars(&self) -> usize {
        self.polys[0].vars.len()
    }

    fn group(&self) -> &GroupDesc {
        &self.polys[0].group
    }

    fn residuals(&self, a: &[Series], cut: &Precision) -> Result<Vec<Series>> {
        self.polys.iter().map(|f| Ok(cut_residual(f.eval(a)?, cut))).collect()
    }

    fn jacobian_at(&self, a: &[Series], cols: std::ops::Range<usize>) -> Result<Vec<Vec<Series>>> {
        self.jacobian
            .iter()
            .map(|row| cols.clone().map(|j| row[j].eval(a)).collect())
            .collect()
    }
}

fn min_valuation(vs: &[Series]) -> ValuationResult {
    let mut best = ValuationResult::Infinity;
    for s in vs {
        let v = s.valuation();
        best = match (&best, &v) {
            (ValuationResult::Infinity, _) => v,
            (_, ValuationResult::Infinity) => best,
            _ => {
                let (a, b) = (best.lower_bound(), v.lower_bound());
                if b < a {
                    v
                } else if a == b && matches!(v, ValuationResult::Exact(_)) {
                    v
                } else {
                    best
                }
            }
        };
    }
    best
}

/// Result of a system solve.
#[derive(Clone, Debug, PartialEq)]
pub struct SystemResult {
    pub solution: Vec<Series>,
    pub steps: Vec<ValuationResult>,
    /// Valuation α of the Jacobian determinant used by the certificate.
    pub alpha: GroupElem,
}

/// Newton iteration on the variables `cols`, with the other coordinates of
/// `a` held fixed. `alpha` is the value of the Jacobian determinant.
fn newton_block(
    s: &SystemInstance,
    mut a: Vec<Series>,
    cols: std::ops::Range<usize>,
    alpha: &GroupElem,
    target: &GroupElem,
) -> Result<(Vec<Series>, Vec<ValuationResult>)> {
    let cut = Precision::Finite(target.clone());
    let inner_target = target + &alpha.int_scale(2);
    let mut r = min_valuation(&s.residuals(&a, &cut)?);
    let mut steps = vec![r.clone()];
    while !reached(&r, target) {
        if steps.len() > MAX_STEPS {
            return Err(Error::IterationCap(MAX_STEPS));
        }
        let fa: Vec<Series> = s.residuals(&a, &cut)?.into_iter().map(|x| x.with_precision(Precision::Infinite)).collect();
        let j = s.jacobian_at(&a, cols.clone())?;
        let delta = series_solve(&j, &fa, &inner_target)?;
        for (k, col) in cols.clone().enumerate() {
            a[col] = a[col]
                .sub(&delta[k].with_precision(Precision::Infinite))?
                .truncate(&cut)
                .with_precision(Precision::Infinite);
        }
        let next = min_valuation(&s.residuals(&a, &cut)?);
        certify(&r, &next, alpha, target)?;
        steps.push(next.clone());
        r = next;
    }
    Ok((a, steps))
}

/// Multidimensional Hensel: the unique zero `a` with `v(aᵢ − bᵢ) > 0`.
pub fn newton_system(s: &SystemInstance, start: &[Series], target: &GroupElem) -> Result<SystemResult> {
    let n = s.polys.len();
    if s.num_vars() != n || start.len() != n {
        return Err(Error::Precondition(format!("need {n} variables and a start of length {n}")));
    }
    for f in &s.polys {
        f.check_precision(target)?;
    }
    let cut = Precision::Finite(target.clone());
    let a: Vec<Series> = start.iter().map(|b| b.truncate(&cut).with_precision(Precision::Infinite)).collect();
    for r in s.residuals(&a, &cut)? {
        if let ValuationResult::Exact(g) = r.valuation() {
            if !g.is_positive() {
                return Err(Error::Precondition(format!("residual value {g} is not positive")));
            }
        }
    }
    let det = series_det(&s.jacobian_at(&a, 0..n)?)?;
    match det.valuation() {
        ValuationResult::Exact(g) if g.is_zero() => {}
        _ => return Err(Error::SingularJacobian),
    }
    let zero = s.group().zero();
    let (sol, steps) = newton_block(s, a, 0..n, &zero, target)?;
    Ok(SystemResult { solution: sol.into_iter().map(|x| x.with_precision(cut.clone())).collect(), steps, alpha: zero })
}

/// Implicit function theorem: given a common zero `a` of `n` polynomials in
/// `ℓ` variables and new values for the first `ℓ − n` coordinates, solve for
/// the last `n`.
///
/// With `α = v(det J̃(a))` for the trailing `n×n` Jacobian block, the new
/// prefix must satisfy `v(aᵢ − a′ᵢ) > 2α`.
pub fn implicit_solve(s: &SystemInstance, a: &[Series], prefix: &[Series], target: &GroupElem) -> Result<SystemResult> {
    let l = s.num_vars();
    let n = s.polys.len();
    if n > l || a.len() != l || prefix.len() != l - n {
        return Err(Error::Precondition(format!("expected {l} coordinates with a prefix of length {}", l - n)));
    }
    for f in &s.polys {
        f.check_precision(target)?;
    }
    let cut = Precision::Finite(target.clone());
    for r in s.residuals(a, &cut)? {
        if !r.is_zero_to_precision() {
            return Err(Error::Precondition(format!("base point is not a zero: residual {r}")));
        }
    }
    let det = series_det(&s.jacobian_at(a, l - n..l)?)?;
    let alpha = match det.valuation() {
        ValuationResult::Exact(g) => g,
        other => {
            return Err(Error::SingularPoint(format!("trailing Jacobian determinant has value {other}")));
        }
    };
    let threshold = alpha.int_scale(2);
    let mut point: Vec<Series> = a.iter().map(|x| x.truncate(&cut).with_precision(Precision::Infinite)).collect();
    for (i, p) in prefix.iter().enumerate() {
        let diff = a[i].sub(p)?.truncate(&cut);
        match diff.valuation() {
            ValuationResult::Exact(g) if g <= threshold => {
                return Err(Error::PerturbationTooLarge { value: g.to_string(), threshold: threshold.to_string() });
            }
            _ => {}
        }
        point[i] = p.truncate(&cut).with_precision(Precision::Infinite);
    }
    let (sol, steps) = newton_block(s, point, l - n..l, &alpha, target)?;
    Ok(SystemResult {
        solution: sol[l - n..].iter().map(|x| x.with_precision(cut.clone())).collect(),
        steps,
        alpha,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{rat_int, GroupDesc};
    use crate::series::Stream;

    fn z(n: i128) -> GroupElem {
        GroupElem::Rat(rat_int(n))
    }

    fn poly(field: &FieldDesc, coeffs: &[&[(i128, i64)]]) -> SeriesPoly {
        let g = GroupDesc::integers();
        let cs = coeffs
            .iter()
            .map(|ts| {
                let terms = ts.iter().map(|(e, c)| (z(*e), field.from_int(*c))).collect();
                Series::new(field, &g, terms, Precision::Infinite).unwrap()
            })
            .collect();
        SeriesPoly::new(field, &g, cs).unwrap()
    }

    #[test]
    fn artin_schreier_root_char_two() {
        let f2 = FieldDesc::finite(2, 1).unwrap();
        // X² − X − t
        let f = poly(&f2, &[&[(1, -1)], &[(0, -1)], &[(0, 1)]]);
        let b = Series::zero(&f2, &GroupDesc::integers());
        let r = hensel_lift(&f, &b, &z(8)).unwrap();
        assert_eq!(r.root.to_string(), "t^(1) + t^(2) + t^(4) + O(t^(8))");
        let stream = Stream::FrobeniusRoot { p: 2 }.expand(&z(8)).unwrap();
        assert_eq!(r.root, stream);
    }

    #[test]
    fn square_root_matches_unit_root() {
        let f3 = FieldDesc::finite(3, 1).unwrap();
        // X² − (1 + t)
        let f = poly(&f3, &[&[(0, -1), (1, -1)], &[], &[(0, 1)]]);
        let b = Series::one(&f3, &GroupDesc::integers());
        let r = hensel_lift(&f, &b, &z(4)).unwrap();
        let u = poly(&f3, &[&[(0, 1), (1, 1)]]).coeffs()[0].clone();
        assert_eq!(r.root, u.unit_nth_root(2, Some(&z(4))).unwrap());
    }

    #[test]
    fn no_rational_root_of_y2_minus_8() {
        let q = FieldDesc::Rational;
        let f = poly(&q, &[&[(0, -8)], &[], &[(0, 1)]]);
        assert_eq!(lift_residue_roots(&f, &z(4)), Err(Error::NoResidueRoot));
    }

    #[test]
    fn precondition_reports_value() {
        let f2 = FieldDesc::finite(2, 1).unwrap();
        let f = poly(&f2, &[&[(0, 1)], &[(0, 1)], &[(0, 1)]]);
        let b = Series::zero(&f2, &GroupDesc::integers());
        assert!(matches!(hensel_lift(&f, &b, &z(4)), Err(Error::Precondition(_))));
    }
}
