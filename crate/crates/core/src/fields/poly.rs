//! Sparse multivariate polynomials and rational functions over a field.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::Signed;

use super::{FieldDesc, FieldElem};
use crate::error::{Error, Result};

/// Exponent vector, one entry per indeterminate.
pub type Monomial = Vec<u32>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MPoly {
    field: FieldDesc,
    vars: Vec<String>,
    terms: BTreeMap<Monomial, FieldElem>,
}

impl MPoly {
    pub fn zero(field: &FieldDesc, vars: &[String]) -> Self {
        MPoly { field: field.clone(), vars: vars.to_vec(), terms: BTreeMap::new() }
    }

    pub fn constant(field: &FieldDesc, vars: &[String], c: FieldElem) -> Self {
        let mut p = Self::zero(field, vars);
        if !c.is_zero() {
            p.terms.insert(vec![0; vars.len()], c);
        }
        p
    }

    pub fn var(field: &FieldDesc, vars: &[String], name: &str) -> Result<Self> {
        let i = vars.iter().position(|v| v == name).ok_or_else(|| Error::UnknownVariable(name.into()))?;
        let mut e = vec![0; vars.len()];
        e[i] = 1;
        Ok(Self::monomial(field, vars, e, field.one()))
    }

    pub fn monomial(field: &FieldDesc, vars: &[String], exps: Monomial, c: FieldElem) -> Self {
        let mut p = Self::zero(field, vars);
        if !c.is_zero() {
            p.terms.insert(exps, c);
        }
        p
    }

    /// Build from (exponents, coefficient) pairs, merging duplicates.
    pub fn from_terms(field: &FieldDesc, vars: &[String], terms: impl IntoIterator<Item = (Monomial, FieldElem)>) -> Self {
        let mut p = Self::zero(field, vars);
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p
    }

    fn add_term(&mut self, e: Monomial, c: FieldElem) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&e) {
            Some(old) => {
                let s = &*old + &c;
                if s.is_zero() {
                    self.terms.remove(&e);
                } else {
                    *old = s;
                }
            }
            None => {
                self.terms.insert(e, c);
            }
        }
    }

    pub fn field(&self) -> &FieldDesc {
        &self.field
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &FieldElem)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|e| e.iter().all(|x| *x == 0))
    }

    pub fn constant_term(&self) -> FieldElem {
        self.terms.get(&vec![0; self.vars.len()]).cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    pub fn degree_in(&self, i: usize) -> u32 {
        self.terms.keys().map(|e| e[i]).max().unwrap_or(0)
    }

    /// Whether variable `i` occurs.
    pub fn involves(&self, i: usize) -> bool {
        self.terms.keys().any(|e| e[i] > 0)
    }

    fn compat(&self, other: &MPoly) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch(self.field.to_string(), other.field.to_string()));
        }
        if self.vars != other.vars {
            return Err(Error::VariableMismatch(self.vars.join(","), other.vars.join(",")));
        }
        Ok(())
    }

    /// Re-embed into a larger list of indeterminates.
    pub fn extend_vars(&self, vars: &[String]) -> Result<MPoly> {
        let map: Vec<usize> = self
            .vars
            .iter()
            .map(|v| vars.iter().position(|w| w == v).ok_or_else(|| Error::UnknownVariable(v.clone())))
            .collect::<Result<_>>()?;
        let terms = self.terms.iter().map(|(e, c)| {
            let mut ne = vec![0; vars.len()];
            for (k, x) in e.iter().enumerate() {
                ne[map[k]] = *x;
            }
            (ne, c.clone())
        });
        Ok(MPoly::from_terms(&self.field, vars, terms))
    }

    pub fn try_add(&self, other: &MPoly) -> Result<MPoly> {
        self.compat(other)?;
        let mut r = self.clone();
        for (e, c) in &other.terms {
            r.add_term(e.clone(), c.clone());
        }
        Ok(r)
    }

    pub fn try_sub(&self, other: &MPoly) -> Result<MPoly> {
        self.try_add(&-other)
    }

    pub fn try_mul(&self, other: &MPoly) -> Result<MPoly> {
        self.compat(other)?;
        let mut r = MPoly::zero(&self.field, &self.vars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e: Monomial = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                r.add_term(e, c1 * c2);
            }
        }
        Ok(r)
    }

    pub fn scale(&self, k: &FieldElem) -> MPoly {
        MPoly::from_terms(&self.field, &self.vars, self.terms.iter().map(|(e, c)| (e.clone(), c * k)))
    }

    pub fn pow(&self, n: u32) -> MPoly {
        let mut r = MPoly::constant(&self.field, &self.vars, self.field.one());
        for _ in 0..n {
            r = &r * self;
        }
        r
    }

    /// Evaluate at a point given in variable order.
    pub fn eval(&self, point: &[FieldElem]) -> Result<FieldElem> {
        if point.len() != self.vars.len() {
            return Err(Error::Precondition(format!(
                "point has {} coordinates, polynomial has {} variables",
                point.len(),
                self.vars.len()
            )));
        }
        let mut acc = self.field.zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (x, k) in point.iter().zip(e) {
                if *k > 0 {
                    t = t.try_mul(&x.pow(*k as u128))?;
                }
            }
            acc = &acc + &t;
        }
        Ok(acc)
    }

    /// Formal partial derivative with respect to variable `i`.
    pub fn partial_derivative(&self, i: usize) -> MPoly {
        let terms = self.terms.iter().filter(|(e, _)| e[i] > 0).map(|(e, c)| {
            let mut ne = e.clone();
            ne[i] -= 1;
            (ne, c * &self.field.from_int(e[i] as i64))
        });
        MPoly::from_terms(&self.field, &self.vars, terms)
    }

    pub fn partial_by_name(&self, name: &str) -> Result<MPoly> {
        let i = self.vars.iter().position(|v| v == name).ok_or_else(|| Error::UnknownVariable(name.into()))?;
        Ok(self.partial_derivative(i))
    }
}

impl Add for &MPoly {
    type Output = MPoly;
    fn add(self, rhs: &MPoly) -> MPoly {
        self.try_add(rhs).expect("incompatible polynomials in +")
    }
}

impl Sub for &MPoly {
    type Output = MPoly;
    fn sub(self, rhs: &MPoly) -> MPoly {
        self.try_sub(rhs).expect("incompatible polynomials in -")
    }
}

impl Mul for &MPoly {
    type Output = MPoly;
    fn mul(self, rhs: &MPoly) -> MPoly {
        self.try_mul(rhs).expect("incompatible polynomials in *")
    }
}

impl Neg for &MPoly {
    type Output = MPoly;
    fn neg(self) -> MPoly {
        MPoly::from_terms(&self.field, &self.vars, self.terms.iter().map(|(e, c)| (e.clone(), -c)))
    }
}

fn monomial_string(vars: &[String], e: &[u32]) -> String {
    let parts: Vec<String> = vars
        .iter()
        .zip(e)
        .filter(|(_, k)| **k > 0)
        .map(|(v, k)| if *k == 1 { v.clone() } else { format!("{v}^{k}") })
        .collect();
    parts.join("*")
}

impl fmt::Display for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut out = String::new();
        for (k, (e, c)) in self.terms.iter().rev().enumerate() {
            let (neg, mag) = match c {
                FieldElem::Rat(q) if q.is_negative() => (true, FieldElem::Rat(-q)),
                _ => (false, c.clone()),
            };
            if k == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let m = monomial_string(&self.vars, e);
            let cs = mag.to_string();
            let cs = if cs.contains('+') { format!("({cs})") } else { cs };
            match (m.is_empty(), mag.is_one()) {
                (true, _) => out.push_str(&cs),
                (false, true) => out.push_str(&m),
                (false, false) => out.push_str(&format!("{cs}*{m}")),
            }
        }
        write!(f, "{out}")
    }
}

/// Quotient of two polynomials; never reduced, compared by cross-multiplication.
#[derive(Clone, Debug)]
pub struct RatFn {
    pub num: MPoly,
    pub den: MPoly,
}

impl RatFn {
    pub fn new(num: MPoly, den: MPoly) -> Result<Self> {
        num.compat(&den)?;
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(RatFn { num, den })
    }

    pub fn from_poly(p: MPoly) -> Self {
        let one = MPoly::constant(&p.field, &p.vars, p.field.one());
        RatFn { num: p, den: one }
    }

    pub fn field(&self) -> &FieldDesc {
        &self.num.field
    }

    pub fn vars(&self) -> &[String] {
        &self.num.vars
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_constant()
    }

    pub fn extend_vars(&self, vars: &[String]) -> Result<RatFn> {
        Ok(RatFn { num: self.num.extend_vars(vars)?, den: self.den.extend_vars(vars)? })
    }

    pub fn try_add(&self, o: &RatFn) -> Result<RatFn> {
        let num = self.num.try_mul(&o.den)?.try_add(&o.num.try_mul(&self.den)?)?;
        RatFn::new(num, self.den.try_mul(&o.den)?)
    }

    pub fn try_sub(&self, o: &RatFn) -> Result<RatFn> {
        self.try_add(&o.neg())
    }

    pub fn try_mul(&self, o: &RatFn) -> Result<RatFn> {
        RatFn::new(self.num.try_mul(&o.num)?, self.den.try_mul(&o.den)?)
    }

    pub fn inv(&self) -> Result<RatFn> {
        RatFn::new(self.den.clone(), self.num.clone())
    }

    pub fn try_div(&self, o: &RatFn) -> Result<RatFn> {
        self.try_mul(&o.inv()?)
    }

    pub fn neg(&self) -> RatFn {
        RatFn { num: -&self.num, den: self.den.clone() }
    }

    pub fn powi(&self, e: i64) -> Result<RatFn> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let k = e.unsigned_abs() as u32;
        Ok(RatFn { num: base.num.pow(k), den: base.den.pow(k) })
    }

    pub fn eval(&self, point: &[FieldElem]) -> Result<FieldElem> {
        let d = self.den.eval(point)?;
        if d.is_zero() {
            return Err(Error::Pole);
        }
        self.num.eval(point)?.div(&d)
    }

    pub fn partial_derivative(&self, i: usize) -> RatFn {
        let num = &(&self.num.partial_derivative(i) * &self.den) - &(&self.num * &self.den.partial_derivative(i));
        RatFn { num, den: &self.den * &self.den }
    }
}

impl PartialEq for RatFn {
    fn eq(&self, other: &Self) -> bool {
        match (self.num.try_mul(&other.den), other.num.try_mul(&self.den)) {
            (Ok(a), Ok(b)) => a == b,
            _ => false,
        }
    }
}

impl fmt::Display for RatFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_constant() && self.den.constant_term().is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

/// Rank of the Jacobian matrix of `polys` at `point`, over the coefficient field.
pub fn jacobian_rank(polys: &[MPoly], point: &[FieldElem]) -> Result<usize> {
    let Some(first) = polys.first() else { return Ok(0) };
    let n = first.vars.len();
    let mut m: Vec<Vec<FieldElem>> = polys
        .iter()
        .map(|f| (0..n).map(|j| f.partial_derivative(j).eval(point)).collect::<Result<_>>())
        .collect::<Result<_>>()?;
    Ok(matrix_rank(&mut m))
}

/// A point of the zero set of `polys` is simple iff the Jacobian has rank
/// `#vars − dim` there.
pub fn is_simple_point(polys: &[MPoly], point: &[FieldElem], dim: usize) -> Result<bool> {
    let n = polys.first().map_or(0, |f| f.vars.len());
    for f in polys {
        if !f.eval(point)?.is_zero() {
            return Err(Error::Precondition(format!("{f} does not vanish at the point")));
        }
    }
    Ok(jacobian_rank(polys, point)? == n.saturating_sub(dim))
}

pub(crate) fn matrix_rank(m: &mut [Vec<FieldElem>]) -> usize {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut r = 0;
    for c in 0..cols {
        let Some(piv) = (r..rows).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, piv);
        let inv = m[r][c].inv().expect("nonzero pivot");
        for i in r + 1..rows {
            if m[i][c].is_zero() {
                continue;
            }
            let k = &m[i][c] * &inv;
            for j in c..cols {
                let t = &k * &m[r][j];
                m[i][j] = &m[i][j] - &t;
            }
        }
        r += 1;
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vars(names: &[&str]) -> Vec<String> {
        names.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn derivative_of_cusp_equation() {
        let q = FieldDesc::Rational;
        let v = vars(&["X", "Y"]);
        let x = MPoly::var(&q, &v, "X").unwrap();
        let y = MPoly::var(&q, &v, "Y").unwrap();
        let f = &y.pow(2) - &x.pow(3);
        let two_y = y.scale(&q.from_int(2));
        assert_eq!(f.partial_by_name("Y").unwrap(), two_y);
        assert_eq!(f.to_string(), "-X^3 + Y^2");
    }

    #[test]
    fn cross_multiplied_equality() {
        let q = FieldDesc::Rational;
        let v = vars(&["X"]);
        let x = MPoly::var(&q, &v, "X").unwrap();
        let one = MPoly::constant(&q, &v, q.one());
        let lhs = RatFn::new(&x.pow(2) - &one, &x - &one).unwrap();
        let rhs = RatFn::from_poly(&x + &one);
        assert_eq!(lhs, rhs);
        assert_eq!(lhs.eval(&[q.from_int(2)]).unwrap(), q.from_int(3));
        assert_eq!(lhs.eval(&[q.from_int(1)]), Err(Error::Pole));
    }

    #[test]
    fn variable_mismatch_is_an_error() {
        let q = FieldDesc::Rational;
        let a = MPoly::var(&q, &vars(&["X"]), "X").unwrap();
        let b = MPoly::var(&q, &vars(&["Y"]), "Y").unwrap();
        assert!(matches!(a.try_add(&b), Err(Error::VariableMismatch(..))));
        let both = vars(&["X", "Y"]);
        let s = a.extend_vars(&both).unwrap().try_add(&b.extend_vars(&both).unwrap()).unwrap();
        assert_eq!(s.to_string(), "X + Y");
    }

    #[test]
    fn cusp_origin_is_singular() {
        let f7 = FieldDesc::finite(7, 1).unwrap();
        let v = vars(&["X", "Y"]);
        let x = MPoly::var(&f7, &v, "X").unwrap();
        let y = MPoly::var(&f7, &v, "Y").unwrap();
        let f = &y.pow(2) - &x.pow(3);
        let origin = [f7.zero(), f7.zero()];
        assert!(!is_simple_point(std::slice::from_ref(&f), &origin, 1).unwrap());
        let smooth = [f7.from_int(2), f7.from_int(1)];
        assert!(is_simple_point(&[f], &smooth, 1).unwrap());
    }
}
