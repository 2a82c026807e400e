//! Truncated generalized power series `Σ c_g t^g` over an ordered value group.
//!
//! A [`Series`] stores finitely many nonzero terms with strictly increasing
//! exponents and a precision bound: the series is known modulo terms of
//! exponent at least the bound. An infinite bound means the finite sum is
//! exact. Arithmetic tracks the bound so that every term reported is certified.

pub mod stream;

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::fields::{FieldDesc, FieldElem};
use crate::groups::{GroupDesc, GroupElem};

pub use stream::Stream;

/// Exponent cutoff of a truncated series.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Precision {
    Finite(GroupElem),
    Infinite,
}

impl Precision {
    pub fn is_infinite(&self) -> bool {
        matches!(self, Precision::Infinite)
    }

    pub fn finite(&self) -> Option<&GroupElem> {
        match self {
            Precision::Finite(g) => Some(g),
            Precision::Infinite => None,
        }
    }

    pub fn shift(&self, g: &GroupElem) -> Precision {
        match self {
            Precision::Finite(p) => Precision::Finite(p + g),
            Precision::Infinite => Precision::Infinite,
        }
    }

    pub fn plus(&self, other: &Precision) -> Precision {
        match (self, other) {
            (Precision::Finite(a), Precision::Finite(b)) => Precision::Finite(a + b),
            _ => Precision::Infinite,
        }
    }

    pub fn min(a: &Precision, b: &Precision) -> Precision {
        if a <= b {
            a.clone()
        } else {
            b.clone()
        }
    }

    /// Whether exponent `e` lies strictly below this bound.
    pub fn admits(&self, e: &GroupElem) -> bool {
        match self {
            Precision::Finite(p) => e < p,
            Precision::Infinite => true,
        }
    }
}

impl Ord for Precision {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Precision::Finite(a), Precision::Finite(b)) => a.cmp(b),
            (Precision::Finite(_), Precision::Infinite) => Ordering::Less,
            (Precision::Infinite, Precision::Finite(_)) => Ordering::Greater,
            (Precision::Infinite, Precision::Infinite) => Ordering::Equal,
        }
    }
}

impl PartialOrd for Precision {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl From<GroupElem> for Precision {
    fn from(g: GroupElem) -> Self {
        Precision::Finite(g)
    }
}

/// Minimum-support valuation of a truncated series.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ValuationResult {
    Exact(GroupElem),
    Infinity,
    AtLeast(GroupElem),
}

impl ValuationResult {
    pub fn exact(&self) -> Option<&GroupElem> {
        match self {
            ValuationResult::Exact(g) => Some(g),
            _ => None,
        }
    }

    /// Certified lower bound (`Infinite` for exact zero).
    pub fn lower_bound(&self) -> Precision {
        match self {
            ValuationResult::Exact(g) | ValuationResult::AtLeast(g) => Precision::Finite(g.clone()),
            ValuationResult::Infinity => Precision::Infinite,
        }
    }
}

impl fmt::Display for ValuationResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ValuationResult::Exact(g) => write!(f, "{g}"),
            ValuationResult::Infinity => write!(f, "inf"),
            ValuationResult::AtLeast(g) => write!(f, ">= {g}"),
        }
    }
}

/// Image under the residue map: a field element, or the pole signal ∞.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Residue {
    Value(FieldElem),
    Pole,
}

impl fmt::Display for Residue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Residue::Value(c) => write!(f, "{c}"),
            Residue::Pole => write!(f, "pole"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Series {
    field: FieldDesc,
    group: GroupDesc,
    terms: Vec<(GroupElem, FieldElem)>,
    prec: Precision,
}

type Terms = Vec<(GroupElem, FieldElem)>;

/// Product of two sorted term lists, dropping exponents not below `cutoff`.
fn mul_terms(a: &[(GroupElem, FieldElem)], b: &[(GroupElem, FieldElem)], cutoff: &Precision) -> Terms {
    let mut acc: BTreeMap<GroupElem, FieldElem> = BTreeMap::new();
    for (ea, ca) in a {
        for (eb, cb) in b {
            let e = ea + eb;
            if !cutoff.admits(&e) {
                break;
            }
            let c = ca * cb;
            match acc.get_mut(&e) {
                Some(old) => *old = &*old + &c,
                None => {
                    acc.insert(e, c);
                }
            }
        }
    }
    acc.into_iter().filter(|(_, c)| !c.is_zero()).collect()
}

fn add_terms(a: &[(GroupElem, FieldElem)], b: &[(GroupElem, FieldElem)], cutoff: &Precision, negate_b: bool) -> Terms {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    let take_b = |c: &FieldElem| if negate_b { -c } else { c.clone() };
    while i < a.len() || j < b.len() {
        let ord = match (a.get(i), b.get(j)) {
            (Some(x), Some(y)) => x.0.cmp(&y.0),
            (Some(_), None) => Ordering::Less,
            _ => Ordering::Greater,
        };
        let (e, c) = match ord {
            Ordering::Less => {
                i += 1;
                (a[i - 1].0.clone(), a[i - 1].1.clone())
            }
            Ordering::Greater => {
                j += 1;
                (b[j - 1].0.clone(), take_b(&b[j - 1].1))
            }
            Ordering::Equal => {
                i += 1;
                j += 1;
                (a[i - 1].0.clone(), &a[i - 1].1 + &take_b(&b[j - 1].1))
            }
        };
        if !cutoff.admits(&e) {
            break;
        }
        if !c.is_zero() {
            out.push((e, c));
        }
    }
    out
}

impl Series {
    /// Canonical series from arbitrary terms: merges duplicate exponents,
    /// drops zero coefficients and terms at or above the precision.
    pub fn new(field: &FieldDesc, group: &GroupDesc, terms: Vec<(GroupElem, FieldElem)>, prec: Precision) -> Result<Self> {
        if let Precision::Finite(p) = &prec {
            group.check(p)?;
        }
        let mut acc: BTreeMap<GroupElem, FieldElem> = BTreeMap::new();
        for (e, c) in terms {
            group.check(&e)?;
            if c.desc() != *field {
                return Err(Error::FieldMismatch(c.desc().to_string(), field.to_string()));
            }
            if !prec.admits(&e) {
                continue;
            }
            match acc.get_mut(&e) {
                Some(old) => *old = &*old + &c,
                None => {
                    acc.insert(e, c);
                }
            }
        }
        let terms = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        Ok(Series { field: field.clone(), group: group.clone(), terms, prec })
    }

    fn raw(&self, terms: Terms, prec: Precision) -> Series {
        Series { field: self.field.clone(), group: self.group.clone(), terms, prec }
    }

    pub fn zero(field: &FieldDesc, group: &GroupDesc) -> Self {
        Series { field: field.clone(), group: group.clone(), terms: Vec::new(), prec: Precision::Infinite }
    }

    /// `O(t^prec)`: zero to the given precision.
    pub fn zero_to(field: &FieldDesc, group: &GroupDesc, prec: GroupElem) -> Self {
        Series { field: field.clone(), group: group.clone(), terms: Vec::new(), prec: Precision::Finite(prec) }
    }

    pub fn constant(group: &GroupDesc, c: FieldElem) -> Self {
        Series::monomial(group, c, group.zero())
    }

    pub fn one(field: &FieldDesc, group: &GroupDesc) -> Self {
        Series::constant(group, field.one())
    }

    /// `c·t^e`, exact.
    pub fn monomial(group: &GroupDesc, c: FieldElem, e: GroupElem) -> Self {
        let field = c.desc();
        let terms = if c.is_zero() { Vec::new() } else { vec![(e, c)] };
        Series { field, group: group.clone(), terms, prec: Precision::Infinite }
    }

    pub fn field(&self) -> &FieldDesc {
        &self.field
    }

    pub fn group(&self) -> &GroupDesc {
        &self.group
    }

    pub fn terms(&self) -> &[(GroupElem, FieldElem)] {
        &self.terms
    }

    pub fn precision(&self) -> &Precision {
        &self.prec
    }

    pub fn is_exact(&self) -> bool {
        self.prec.is_infinite()
    }

    /// Coefficient of `t^e` (zero if absent); `None` if `e` is beyond the precision.
    pub fn coeff(&self, e: &GroupElem) -> Option<FieldElem> {
        if !self.prec.admits(e) {
            return None;
        }
        Some(
            self.terms
                .binary_search_by(|(x, _)| x.cmp(e))
                .map(|i| self.terms[i].1.clone())
                .unwrap_or_else(|_| self.field.zero()),
        )
    }

    pub fn valuation(&self) -> ValuationResult {
        match (self.terms.first(), &self.prec) {
            (Some((e, _)), _) => ValuationResult::Exact(e.clone()),
            (None, Precision::Infinite) => ValuationResult::Infinity,
            (None, Precision::Finite(p)) => ValuationResult::AtLeast(p.clone()),
        }
    }

    pub fn leading_coeff(&self) -> Option<&FieldElem> {
        self.terms.first().map(|(_, c)| c)
    }

    /// Residue: 0 for positive value, the constant coefficient for value 0,
    /// a pole for negative value.
    pub fn residue(&self) -> Result<Residue> {
        match self.valuation() {
            ValuationResult::Infinity => Ok(Residue::Value(self.field.zero())),
            ValuationResult::Exact(g) => Ok(match g.signum() {
                Ordering::Less => Residue::Pole,
                Ordering::Equal => Residue::Value(self.terms[0].1.clone()),
                Ordering::Greater => Residue::Value(self.field.zero()),
            }),
            ValuationResult::AtLeast(g) => {
                if g.is_positive() {
                    Ok(Residue::Value(self.field.zero()))
                } else {
                    Err(Error::Undecidable(format!("residue of O(t^({g}))")))
                }
            }
        }
    }

    pub fn compat(&self, other: &Series) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch(self.field.to_string(), other.field.to_string()));
        }
        if self.group != other.group {
            return Err(Error::FamilyMismatch(self.group.to_string(), other.group.to_string()));
        }
        Ok(())
    }

    pub fn add(&self, other: &Series) -> Result<Series> {
        self.compat(other)?;
        let prec = Precision::min(&self.prec, &other.prec);
        Ok(self.raw(add_terms(&self.terms, &other.terms, &prec, false), prec))
    }

    pub fn sub(&self, other: &Series) -> Result<Series> {
        self.compat(other)?;
        let prec = Precision::min(&self.prec, &other.prec);
        Ok(self.raw(add_terms(&self.terms, &other.terms, &prec, true), prec))
    }

    pub fn neg(&self) -> Series {
        self.raw(self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(), self.prec.clone())
    }

    /// Product with precision `min(prec_a + v(b), prec_b + v(a))`.
    pub fn mul(&self, other: &Series) -> Result<Series> {
        self.compat(other)?;
        let va = self.valuation();
        let vb = other.valuation();
        if matches!(va, ValuationResult::AtLeast(_)) && matches!(vb, ValuationResult::AtLeast(_)) {
            return Err(Error::UncertifiableProduct);
        }
        let p1 = match &self.prec {
            Precision::Infinite => Precision::Infinite,
            Precision::Finite(p) => vb.lower_bound().shift(p),
        };
        let p2 = match &other.prec {
            Precision::Infinite => Precision::Infinite,
            Precision::Finite(p) => va.lower_bound().shift(p),
        };
        let prec = Precision::min(&p1, &p2);
        Ok(self.raw(mul_terms(&self.terms, &other.terms, &prec), prec))
    }

    pub fn scale(&self, k: &FieldElem) -> Series {
        if k.is_zero() {
            return self.raw(Vec::new(), self.prec.clone());
        }
        self.raw(self.terms.iter().map(|(e, c)| (e.clone(), c * k)).collect(), self.prec.clone())
    }

    /// Multiply by `t^g`.
    pub fn shift(&self, g: &GroupElem) -> Series {
        self.raw(self.terms.iter().map(|(e, c)| (e + g, c.clone())).collect(), self.prec.shift(g))
    }

    pub fn pow(&self, n: u64) -> Result<Series> {
        let mut base = self.clone();
        let mut r = Series::one(&self.field, &self.group);
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                r = r.mul(&base)?;
            }
            n >>= 1;
            if n > 0 {
                base = base.mul(&base)?;
            }
        }
        Ok(r)
    }

    /// Lower the precision to `p` (never raises it).
    pub fn truncate(&self, p: &Precision) -> Series {
        let prec = Precision::min(&self.prec, p);
        let terms = self.terms.iter().take_while(|(e, _)| prec.admits(e)).cloned().collect();
        self.raw(terms, prec)
    }

    /// Same terms, declared known to precision `p`. Used for exact inputs.
    pub fn with_precision(&self, p: Precision) -> Series {
        let terms = self.terms.iter().take_while(|(e, _)| p.admits(e)).cloned().collect();
        self.raw(terms, p)
    }

    /// Whether both series have the same terms below the smaller precision.
    pub fn agrees_with(&self, other: &Series) -> bool {
        let p = Precision::min(&self.prec, &other.prec);
        self.truncate(&p).terms == other.truncate(&p).terms
    }

    pub fn is_zero_to_precision(&self) -> bool {
        self.terms.is_empty()
    }

    /// Inverse, certified to `min(target, prec − 2v)`.
    ///
    /// With `a = c·t^g·(1 + ε)`, `v(ε) > 0`, the unit part is inverted by
    /// Newton iteration `x ← x + x(1 − ux)`, doubling the relative precision
    /// per step.
    pub fn invert(&self, target: Option<&GroupElem>) -> Result<Series> {
        let g = match self.valuation() {
            ValuationResult::Exact(g) => g,
            ValuationResult::Infinity => return Err(Error::DivisionByZero),
            ValuationResult::AtLeast(p) => return Err(Error::ZeroToPrecision(p.to_string())),
        };
        let c_inv = self.terms[0].1.inv()?;
        let neg_g = -&g;
        let rel_prec = self.prec.shift(&neg_g);
        let rel_target = match target {
            Some(t) => Precision::Finite(t + &g),
            None => Precision::Infinite,
        };
        let rr = Precision::min(&rel_prec, &rel_target);
        // u = a / (c t^g), exact terms
        let u: Terms = self.terms.iter().map(|(e, c)| (e - &g, c * &c_inv)).collect();
        if u.len() == 1 && self.prec.is_infinite() {
            return Ok(self.raw(vec![(neg_g, c_inv)], Precision::Infinite));
        }
        let Precision::Finite(rr) = rr else {
            return Err(Error::Precondition("inverting an exact non-monomial series needs a target precision".into()));
        };
        let x = self.newton_unit_inverse(&u, &rr)?;
        let terms = x.into_iter().map(|(e, c)| (&e + &neg_g, &c * &c_inv)).collect();
        Ok(self.raw(terms, Precision::Finite(&rr + &neg_g)))
    }

    fn newton_unit_inverse(&self, u: &[(GroupElem, FieldElem)], rr: &GroupElem) -> Result<Terms> {
        let one: Terms = vec![(self.group.zero(), self.field.one())];
        if !rr.is_positive() {
            return Ok(Vec::new());
        }
        let Some(delta) = u.get(1).map(|(e, _)| e.clone()) else {
            return Ok(one);
        };
        if delta >= *rr {
            return Ok(one);
        }
        if GroupElem::multiple_reaching(&delta, rr).is_none() {
            return Err(Error::PrecisionUnreachable {
                target: rr.to_string(),
                reason: format!("no multiple of the step {delta} reaches it"),
            });
        }
        let mut x = one.clone();
        let mut cur = delta;
        while cur < *rr {
            cur = GroupElem::min_of(&cur.int_scale(2), rr);
            let cut = Precision::Finite(cur.clone());
            let ux = mul_terms(u, &x, &cut);
            let e = add_terms(&one, &ux, &cut, true);
            let xe = mul_terms(&x, &e, &cut);
            x = add_terms(&x, &xe, &cut, false);
        }
        Ok(x)
    }

    /// `Σ c^p t^{pg}` in characteristic `p`; precision scales by `p`.
    pub fn frobenius(&self) -> Result<Series> {
        let p = self.field.characteristic();
        if p == 0 {
            return Err(Error::CharacteristicZero);
        }
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| Ok((e.int_scale(p as i64), c.frobenius()?)))
            .collect::<Result<_>>()?;
        let prec = match &self.prec {
            Precision::Finite(g) => Precision::Finite(g.int_scale(p as i64)),
            Precision::Infinite => Precision::Infinite,
        };
        Ok(self.raw(terms, prec))
    }

    /// The unique 1-unit `a` with `a^n = self`, by Newton iteration on
    /// `X^n − u` from 1.
    pub fn unit_nth_root(&self, n: u64, target: Option<&GroupElem>) -> Result<Series> {
        if n == 0 {
            return Err(Error::Precondition("n must be positive".into()));
        }
        let ch = self.field.characteristic();
        if ch != 0 && n % ch == 0 {
            return Err(Error::Precondition(format!("characteristic {ch} divides {n}")));
        }
        let one = Series::one(&self.field, &self.group);
        let eps = self.sub(&one)?;
        match eps.valuation() {
            ValuationResult::Exact(g) if !g.is_positive() => {
                return Err(Error::Precondition(format!("{self} is not a 1-unit")));
            }
            ValuationResult::AtLeast(g) if !g.is_positive() => {
                return Err(Error::Undecidable("residue of the input".into()));
            }
            _ => {}
        }
        let tgt = match target {
            Some(t) => Precision::Finite(t.clone()),
            None => Precision::Infinite,
        };
        let r = Precision::min(&self.prec, &tgt);
        if n == 1 {
            return Ok(self.truncate(&r));
        }
        let delta = match eps.valuation() {
            ValuationResult::Exact(d) => d,
            _ => return Ok(one.with_precision(r)),
        };
        let Precision::Finite(r) = r else {
            return Err(Error::Precondition("root of an exact non-trivial 1-unit needs a target precision".into()));
        };
        if delta >= r {
            return Ok(one.with_precision(Precision::Finite(r)));
        }
        if GroupElem::multiple_reaching(&delta, &r).is_none() {
            return Err(Error::PrecisionUnreachable {
                target: r.to_string(),
                reason: format!("no multiple of the step {delta} reaches it"),
            });
        }
        let u = self.truncate(&Precision::Finite(r.clone())).with_precision(Precision::Infinite);
        let nn = self.field.from_int(n as i64);
        let mut x = one.clone();
        let mut cur = delta;
        while cur < r {
            cur = GroupElem::min_of(&cur.int_scale(2), &r);
            let cut = Precision::Finite(cur.clone());
            let xn1 = x.pow(n - 1)?.truncate(&cut);
            let resid = xn1.mul(&x)?.sub(&u)?.truncate(&cut);
            let deriv = xn1.scale(&nn).with_precision(Precision::Infinite);
            let step = resid.with_precision(Precision::Infinite).mul(&deriv.invert(Some(&cur))?)?;
            x = x.sub(&step)?.truncate(&cut).with_precision(Precision::Infinite);
        }
        Ok(x.with_precision(Precision::Finite(r)))
    }

    /// Apply a coefficient map (for example an embedding of fields).
    pub fn map_coeffs(&self, field: &FieldDesc, f: impl Fn(&FieldElem) -> FieldElem) -> Series {
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| (e.clone(), f(c)))
            .filter(|(_, c)| !c.is_zero())
            .collect();
        Series { field: field.clone(), group: self.group.clone(), terms, prec: self.prec.clone() }
    }

    /// Re-read the exponents in a larger group of the same family.
    pub fn regroup(&self, group: &GroupDesc) -> Result<Series> {
        for (e, _) in &self.terms {
            group.check(e)?;
        }
        if let Precision::Finite(p) = &self.prec {
            group.check(p)?;
        }
        Ok(Series { field: self.field.clone(), group: group.clone(), terms: self.terms.clone(), prec: self.prec.clone() })
    }
}

fn fmt_exp(e: &GroupElem) -> String {
    format!("t^({e})")
}

impl fmt::Display for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        for (e, c) in &self.terms {
            let cs = c.to_string();
            let cs = if cs.contains('+') { format!("({cs})") } else { cs };
            if e.is_zero() {
                parts.push(cs);
            } else if c.is_one() {
                parts.push(fmt_exp(e));
            } else {
                parts.push(format!("{cs}*{}", fmt_exp(e)));
            }
        }
        if let Precision::Finite(p) = &self.prec {
            parts.push(format!("O({})", fmt_exp(p)));
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}
