//! Ordered abelian value groups.
//!
//! Three concrete families are supported:
//!
//! * subgroups of ℚ with a denominator law (`ℚ`, `(1/m)ℤ`, `(1/p^∞)ℤ`),
//! * `ℤ^r` ordered lexicographically,
//! * the rank-one, rational-rank-two group of numbers `a + b√2` with `a, b`
//!   rational.
//!
//! All comparisons are exact. The sign of `a + b√2` is decided from the signs
//! of `a`, `b` and of `a² − 2b²`.

pub(crate) mod perron;

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub use perron::{perron_basis, PerronResult};

/// Exact rational used for exponents and group elements.
pub type Rat = Ratio<i128>;

/// Which subgroup of ℚ a `RatSub` group is.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum DenominatorLaw {
    /// All of ℚ.
    All,
    /// `(1/m)ℤ`.
    Bounded(u64),
    /// `(1/p^∞)ℤ = { a/p^k }`, the p-divisible hull of ℤ.
    PPower(u64),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum GroupDesc {
    RatSub(DenominatorLaw),
    LexZ(usize),
    QuadSqrt2,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum GroupElem {
    Rat(Rat),
    Lex(Vec<i64>),
    /// `a + b·√2`
    Quad(Rat, Rat),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GroupInvariants {
    pub rank: usize,
    pub rational_rank: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MembershipQuery {
    DivisibleBy(u64),
    /// Is the order of γ modulo `delta` finite and prime to `p`?
    PPrimeClosure { delta: GroupDesc, p: u64 },
    /// Is the order of γ modulo `delta` a power of `p`?
    PDivisibleHull { delta: GroupDesc, p: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Membership {
    pub member: bool,
    /// For `DivisibleBy(n)`: β with `n·β = γ`. For the closures: `order·γ ∈ Δ`.
    pub witness: Option<GroupElem>,
    /// Order of γ modulo Δ (closure queries only).
    pub order: Option<u64>,
    /// Set when divisibility holds because the ambient group is divisible
    /// (the `a + b√2` family is modelled over ℚ + ℚ√2).
    pub ambient_divisible: bool,
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

pub fn rat(n: i128, d: i128) -> Rat {
    Rat::new(n, d)
}

pub fn rat_int(n: i128) -> Rat {
    Rat::from_integer(n)
}

impl GroupDesc {
    pub fn integers() -> Self {
        GroupDesc::RatSub(DenominatorLaw::Bounded(1))
    }

    pub fn rationals() -> Self {
        GroupDesc::RatSub(DenominatorLaw::All)
    }

    pub fn one_over(m: u64) -> Result<Self> {
        let g = GroupDesc::RatSub(DenominatorLaw::Bounded(m));
        g.validate()?;
        Ok(g)
    }

    pub fn p_divisible_hull(p: u64) -> Result<Self> {
        let g = GroupDesc::RatSub(DenominatorLaw::PPower(p));
        g.validate()?;
        Ok(g)
    }

    pub fn lex(r: usize) -> Result<Self> {
        let g = GroupDesc::LexZ(r);
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            GroupDesc::RatSub(DenominatorLaw::Bounded(0)) => {
                Err(Error::InvalidGroup("(1/m)Z requires m >= 1".into()))
            }
            GroupDesc::RatSub(DenominatorLaw::PPower(p)) if !is_prime(*p) => {
                Err(Error::InvalidGroup(format!("(1/p^inf)Z requires p prime, got {p}")))
            }
            GroupDesc::LexZ(0) => Err(Error::InvalidGroup("Z^r lex requires r >= 1".into())),
            _ => Ok(()),
        }
    }

    pub fn zero(&self) -> GroupElem {
        match self {
            GroupDesc::RatSub(_) => GroupElem::Rat(Rat::zero()),
            GroupDesc::LexZ(r) => GroupElem::Lex(vec![0; *r]),
            GroupDesc::QuadSqrt2 => GroupElem::Quad(Rat::zero(), Rat::zero()),
        }
    }

    /// The element 1 of a `RatSub` group or the quadratic family; the first
    /// unit vector for `LexZ`.
    pub fn unit(&self) -> GroupElem {
        match self {
            GroupDesc::RatSub(_) => GroupElem::Rat(Rat::one()),
            GroupDesc::LexZ(r) => {
                let mut v = vec![0; *r];
                v[0] = 1;
                GroupElem::Lex(v)
            }
            GroupDesc::QuadSqrt2 => GroupElem::Quad(Rat::one(), Rat::zero()),
        }
    }

    /// Element of this group from an integer (scaled unit).
    pub fn from_int(&self, n: i64) -> GroupElem {
        self.unit().int_scale(n)
    }

    /// Element of this group from a rational; `None` for `LexZ` when the
    /// rational is not integral.
    pub fn from_rat(&self, q: Rat) -> Option<GroupElem> {
        match self {
            GroupDesc::RatSub(_) => Some(GroupElem::Rat(q)),
            GroupDesc::QuadSqrt2 => Some(GroupElem::Quad(q, Rat::zero())),
            GroupDesc::LexZ(r) => {
                if !q.is_integer() {
                    return None;
                }
                let mut v = vec![0; *r];
                v[0] = q.to_integer().to_i64()?;
                Some(GroupElem::Lex(v))
            }
        }
    }

    pub fn contains(&self, e: &GroupElem) -> bool {
        match (self, e) {
            (GroupDesc::RatSub(law), GroupElem::Rat(q)) => match law {
                DenominatorLaw::All => true,
                DenominatorLaw::Bounded(m) => (*q * rat_int(*m as i128)).is_integer(),
                DenominatorLaw::PPower(p) => strip_factor(*q.denom() as u128, *p as u128) == 1,
            },
            (GroupDesc::LexZ(r), GroupElem::Lex(v)) => v.len() == *r,
            (GroupDesc::QuadSqrt2, GroupElem::Quad(..)) => true,
            _ => false,
        }
    }

    pub fn check(&self, e: &GroupElem) -> Result<()> {
        if self.contains(e) {
            Ok(())
        } else {
            Err(Error::NotInGroup { elem: e.to_string(), group: self.to_string() })
        }
    }

    pub fn invariants(&self) -> GroupInvariants {
        match self {
            GroupDesc::RatSub(_) => GroupInvariants { rank: 1, rational_rank: 1 },
            GroupDesc::LexZ(r) => GroupInvariants { rank: *r, rational_rank: *r },
            GroupDesc::QuadSqrt2 => GroupInvariants { rank: 1, rational_rank: 2 },
        }
    }

    /// Divisibility and closure queries for `gamma`, which must lie in `self`.
    pub fn membership(&self, gamma: &GroupElem, query: &MembershipQuery) -> Result<Membership> {
        self.check(gamma)?;
        match query {
            MembershipQuery::DivisibleBy(n) => self.divisible_by(gamma, *n),
            MembershipQuery::PPrimeClosure { delta, p } => {
                let order = self.order_modulo(gamma, delta, *p)?;
                let member = order % *p != 0;
                Ok(Membership {
                    member,
                    witness: member.then(|| gamma.int_scale(order as i64)),
                    order: Some(order),
                    ambient_divisible: false,
                })
            }
            MembershipQuery::PDivisibleHull { delta, p } => {
                let order = self.order_modulo(gamma, delta, *p)?;
                let member = strip_factor(order as u128, *p as u128) == 1;
                Ok(Membership {
                    member,
                    witness: member.then(|| gamma.int_scale(order as i64)),
                    order: Some(order),
                    ambient_divisible: false,
                })
            }
        }
    }

    fn divisible_by(&self, gamma: &GroupElem, n: u64) -> Result<Membership> {
        if n == 0 {
            return Err(Error::Unsupported("divisibility by 0".into()));
        }
        let quad = matches!(self, GroupDesc::QuadSqrt2);
        let witness = gamma.div_int(n as i64).filter(|w| self.contains(w));
        Ok(Membership {
            member: witness.is_some(),
            witness,
            order: None,
            ambient_divisible: quad,
        })
    }

    /// Order of γ in the quotient `Q / delta` (γ is a rational).
    fn order_modulo(&self, gamma: &GroupElem, delta: &GroupDesc, p: u64) -> Result<u64> {
        if !is_prime(p) {
            return Err(Error::InvalidGroup(format!("{p} is not prime")));
        }
        delta.validate()?;
        let (GroupDesc::RatSub(_), GroupDesc::RatSub(law), GroupElem::Rat(q)) = (self, delta, gamma)
        else {
            return Err(Error::Unsupported(
                "closure queries are implemented for subgroups of Q only".into(),
            ));
        };
        let den = *q.denom() as u128;
        let order = match law {
            DenominatorLaw::All => 1,
            DenominatorLaw::Bounded(m) => *(*q * rat_int(*m as i128)).denom() as u128,
            DenominatorLaw::PPower(r) => strip_factor(den, *r as u128),
        };
        u64::try_from(order).map_err(|_| Error::Unsupported("order overflows u64".into()))
    }

    pub fn family_name(&self) -> &'static str {
        match self {
            GroupDesc::RatSub(_) => "RatSub",
            GroupDesc::LexZ(_) => "LexZ",
            GroupDesc::QuadSqrt2 => "QuadSqrt2",
        }
    }

    pub fn is_archimedean(&self) -> bool {
        !matches!(self, GroupDesc::LexZ(r) if *r > 1)
    }
}

fn strip_factor(mut n: u128, p: u128) -> u128 {
    if p < 2 {
        return n;
    }
    while n != 0 && n % p == 0 {
        n /= p;
    }
    n
}

impl fmt::Display for GroupDesc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupDesc::RatSub(DenominatorLaw::All) => write!(f, "Q"),
            GroupDesc::RatSub(DenominatorLaw::Bounded(1)) => write!(f, "Z"),
            GroupDesc::RatSub(DenominatorLaw::Bounded(m)) => write!(f, "(1/{m})Z"),
            GroupDesc::RatSub(DenominatorLaw::PPower(p)) => write!(f, "(1/{p}^inf)Z"),
            GroupDesc::LexZ(r) => write!(f, "Z^{r}lex"),
            GroupDesc::QuadSqrt2 => write!(f, "Z+sqrt2Z"),
        }
    }
}

/// Sign of `a + b√2`, decided by rational arithmetic only.
pub fn quad_sign(a: &Rat, b: &Rat) -> Ordering {
    let sa = a.cmp(&Rat::zero());
    let sb = b.cmp(&Rat::zero());
    match (sa, sb) {
        (Ordering::Equal, s) | (s, Ordering::Equal) => s,
        (x, y) if x == y => x,
        _ => {
            // opposite signs: the larger of a² and 2b² wins
            let a2 = a * a;
            let b2 = b * b * rat_int(2);
            if a2 > b2 {
                sa
            } else {
                sb
            }
        }
    }
}

impl GroupElem {
    pub fn family_name(&self) -> &'static str {
        match self {
            GroupElem::Rat(_) => "RatSub",
            GroupElem::Lex(_) => "LexZ",
            GroupElem::Quad(..) => "QuadSqrt2",
        }
    }

    fn same_family(&self, other: &GroupElem) -> Result<()> {
        let ok = match (self, other) {
            (GroupElem::Rat(_), GroupElem::Rat(_)) | (GroupElem::Quad(..), GroupElem::Quad(..)) => true,
            (GroupElem::Lex(a), GroupElem::Lex(b)) => a.len() == b.len(),
            _ => false,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::FamilyMismatch(self.to_string(), other.to_string()))
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            GroupElem::Rat(q) => q.is_zero(),
            GroupElem::Lex(v) => v.iter().all(|x| *x == 0),
            GroupElem::Quad(a, b) => a.is_zero() && b.is_zero(),
        }
    }

    pub fn signum(&self) -> Ordering {
        match self {
            GroupElem::Rat(q) => q.cmp(&Rat::zero()),
            GroupElem::Lex(v) => v.iter().find(|x| **x != 0).map_or(Ordering::Equal, |x| x.cmp(&0)),
            GroupElem::Quad(a, b) => quad_sign(a, b),
        }
    }

    pub fn is_positive(&self) -> bool {
        self.signum() == Ordering::Greater
    }

    pub fn is_negative(&self) -> bool {
        self.signum() == Ordering::Less
    }

    /// Exact comparison; errors on a family mismatch.
    pub fn cmp_checked(&self, other: &GroupElem) -> Result<Ordering> {
        self.same_family(other)?;
        Ok(self.cmp(other))
    }

    pub fn try_add(&self, other: &GroupElem) -> Result<GroupElem> {
        self.same_family(other)?;
        Ok(match (self, other) {
            (GroupElem::Rat(a), GroupElem::Rat(b)) => GroupElem::Rat(a + b),
            (GroupElem::Lex(a), GroupElem::Lex(b)) => {
                GroupElem::Lex(a.iter().zip(b).map(|(x, y)| x + y).collect())
            }
            (GroupElem::Quad(a, b), GroupElem::Quad(c, d)) => GroupElem::Quad(a + c, b + d),
            _ => unreachable!(),
        })
    }

    pub fn try_sub(&self, other: &GroupElem) -> Result<GroupElem> {
        self.try_add(&other.neg_ref())
    }

    fn neg_ref(&self) -> GroupElem {
        match self {
            GroupElem::Rat(a) => GroupElem::Rat(-a),
            GroupElem::Lex(v) => GroupElem::Lex(v.iter().map(|x| -x).collect()),
            GroupElem::Quad(a, b) => GroupElem::Quad(-a, -b),
        }
    }

    pub fn int_scale(&self, n: i64) -> GroupElem {
        match self {
            GroupElem::Rat(a) => GroupElem::Rat(a * rat_int(n as i128)),
            GroupElem::Lex(v) => GroupElem::Lex(v.iter().map(|x| x * n).collect()),
            GroupElem::Quad(a, b) => {
                let n = rat_int(n as i128);
                GroupElem::Quad(a * n, b * n)
            }
        }
    }

    /// `self / n` in the divisible hull; `None` for lex vectors not divisible
    /// componentwise.
    pub fn div_int(&self, n: i64) -> Option<GroupElem> {
        if n == 0 {
            return None;
        }
        match self {
            GroupElem::Rat(a) => Some(GroupElem::Rat(a / rat_int(n as i128))),
            GroupElem::Lex(v) => {
                if v.iter().all(|x| x % n == 0) {
                    Some(GroupElem::Lex(v.iter().map(|x| x / n).collect()))
                } else {
                    None
                }
            }
            GroupElem::Quad(a, b) => {
                let n = rat_int(n as i128);
                Some(GroupElem::Quad(a / n, b / n))
            }
        }
    }

    /// Rational value of a `Rat` element.
    pub fn as_rat(&self) -> Option<Rat> {
        match self {
            GroupElem::Rat(q) => Some(*q),
            _ => None,
        }
    }

    /// Integer lex coordinates of this element, treating an integral rational
    /// as a one-component vector. Used for lex products of place values.
    pub fn lex_components(&self) -> Option<Vec<i64>> {
        match self {
            GroupElem::Rat(q) if q.is_integer() => Some(vec![q.to_integer().to_i64()?]),
            GroupElem::Lex(v) => Some(v.clone()),
            _ => None,
        }
    }

    /// Smallest `n ≥ 0` with `n·step ≥ target`, for `step > 0`. `None` when no
    /// multiple of `step` ever reaches `target` (non-archimedean layers) or
    /// the families differ.
    pub fn multiple_reaching(step: &GroupElem, target: &GroupElem) -> Option<u64> {
        step.same_family(target).ok()?;
        if !step.is_positive() {
            return None;
        }
        if !target.is_positive() {
            return Some(0);
        }
        let candidate: u64 = match (step, target) {
            (GroupElem::Rat(s), GroupElem::Rat(t)) => (t / s).ceil().to_integer().to_u64()?,
            (GroupElem::Quad(a, b), GroupElem::Quad(c, d)) => {
                let approx = |x: &Rat, y: &Rat| {
                    x.to_f64().unwrap_or(0.0) + y.to_f64().unwrap_or(0.0) * std::f64::consts::SQRT_2
                };
                let ratio = approx(c, d) / approx(a, b);
                if !ratio.is_finite() || ratio > 1e15 {
                    return None;
                }
                (ratio.ceil().max(0.0) as u64).saturating_sub(2)
            }
            (GroupElem::Lex(s), GroupElem::Lex(t)) => {
                let is = s.iter().position(|x| *x != 0)?;
                let it = t.iter().position(|x| *x != 0)?;
                match is.cmp(&it) {
                    Ordering::Less => 1,
                    Ordering::Greater => return None,
                    Ordering::Equal => (t[it] / s[is]).max(0) as u64,
                }
            }
            _ => return None,
        };
        // exact adjustment upwards
        let mut n = candidate;
        for _ in 0..8 {
            if step.int_scale(n as i64) >= *target {
                return Some(n);
            }
            n += 1;
        }
        None
    }

    pub fn max_of(a: &GroupElem, b: &GroupElem) -> GroupElem {
        if a >= b {
            a.clone()
        } else {
            b.clone()
        }
    }

    pub fn min_of(a: &GroupElem, b: &GroupElem) -> GroupElem {
        if a <= b {
            a.clone()
        } else {
            b.clone()
        }
    }
}

impl Ord for GroupElem {
    /// Total order within a family. Elements of different families (which
    /// valid code never compares) are ordered by family tag.
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (GroupElem::Rat(a), GroupElem::Rat(b)) => a.cmp(b),
            (GroupElem::Lex(a), GroupElem::Lex(b)) => a.cmp(b),
            (GroupElem::Quad(a, b), GroupElem::Quad(c, d)) => quad_sign(&(a - c), &(b - d)),
            _ => family_tag(self).cmp(&family_tag(other)),
        }
    }
}

impl PartialOrd for GroupElem {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

fn family_tag(e: &GroupElem) -> u8 {
    match e {
        GroupElem::Rat(_) => 0,
        GroupElem::Lex(_) => 1,
        GroupElem::Quad(..) => 2,
    }
}

// Operator forms panic on a family mismatch; callers that cannot guarantee a
// common family use `try_add` / `try_sub`.
impl Add for &GroupElem {
    type Output = GroupElem;
    fn add(self, rhs: &GroupElem) -> GroupElem {
        self.try_add(rhs).expect("group family mismatch")
    }
}

impl Sub for &GroupElem {
    type Output = GroupElem;
    fn sub(self, rhs: &GroupElem) -> GroupElem {
        self.try_sub(rhs).expect("group family mismatch")
    }
}

impl Neg for &GroupElem {
    type Output = GroupElem;
    fn neg(self) -> GroupElem {
        self.neg_ref()
    }
}

impl Neg for GroupElem {
    type Output = GroupElem;
    fn neg(self) -> GroupElem {
        self.neg_ref()
    }
}

pub(crate) fn fmt_rat(q: &Rat) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

impl fmt::Display for GroupElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupElem::Rat(q) => write!(f, "{}", fmt_rat(q)),
            GroupElem::Lex(v) => {
                let parts: Vec<String> = v.iter().map(|x| x.to_string()).collect();
                write!(f, "({})", parts.join(","))
            }
            GroupElem::Quad(a, b) => {
                if b.is_negative() {
                    write!(f, "{}-{}*sqrt2", fmt_rat(a), fmt_rat(&-b))
                } else {
                    write!(f, "{}+{}*sqrt2", fmt_rat(a), fmt_rat(b))
                }
            }
        }
    }
}

/// Least common multiple of denominators, used for ramification tracking.
pub fn denominator_lcm<'a>(elems: impl IntoIterator<Item = &'a GroupElem>) -> i128 {
    elems
        .into_iter()
        .filter_map(|e| e.as_rat())
        .fold(1i128, |acc, q| acc.lcm(q.denom()))
}
