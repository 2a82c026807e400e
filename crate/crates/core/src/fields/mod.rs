//! Exact coefficient fields: ℚ and F_{p^n}.
//!
//! A finite field is represented as F_p[u]/(m(u)) where `m` is the least monic
//! irreducible polynomial of degree `n` (see [`FiniteField::new`]). Elements
//! carry a shared handle on their field, so arithmetic needs no context.

mod fp;
pub mod poly;
pub mod upoly;

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::Rng;
use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::groups::is_prime;

pub use poly::{jacobian_rank, MPoly, RatFn};

pub(crate) type Coeffs = SmallVec<[u64; 4]>;

/// F_p[u]/(modulus) with `modulus` monic irreducible of degree `n`.
#[derive(Debug, PartialEq, Eq, Hash)]
pub struct FiniteField {
    p: u64,
    n: usize,
    q: u64,
    modulus: Vec<u64>,
}

const MAX_ORDER: u128 = 1 << 62;

fn field_cache() -> &'static Mutex<HashMap<(u64, usize), Arc<FiniteField>>> {
    static CACHE: OnceLock<Mutex<HashMap<(u64, usize), Arc<FiniteField>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

impl FiniteField {
    /// The field with `p^n` elements under the canonical modulus.
    pub fn new(p: u64, n: usize) -> Result<Arc<FiniteField>> {
        if !is_prime(p) || p >= 1 << 31 {
            return Err(Error::InvalidField(format!("characteristic {p} is not a supported prime")));
        }
        if n == 0 {
            return Err(Error::InvalidField("extension degree must be at least 1".into()));
        }
        let q = (p as u128).checked_pow(n as u32).filter(|q| *q <= MAX_ORDER);
        let Some(q) = q else {
            return Err(Error::InvalidField(format!("{p}^{n} is too large")));
        };
        let mut cache = field_cache().lock().unwrap_or_else(|e| e.into_inner());
        if let Some(f) = cache.get(&(p, n)) {
            return Ok(f.clone());
        }
        let modulus = fp::least_irreducible(p, n);
        let f = Arc::new(FiniteField { p, n, q: q as u64, modulus });
        cache.insert((p, n), f.clone());
        Ok(f)
    }

    /// Build a field from an explicit modulus, checking irreducibility.
    pub fn with_modulus(p: u64, modulus: Vec<u64>) -> Result<Arc<FiniteField>> {
        if !is_prime(p) || p >= 1 << 31 {
            return Err(Error::InvalidField(format!("characteristic {p} is not a supported prime")));
        }
        let mut m: Vec<u64> = modulus.iter().map(|c| c % p).collect();
        fp::trim(&mut m);
        if m.len() < 2 || m[m.len() - 1] != 1 {
            return Err(Error::InvalidField("modulus must be monic of degree at least 1".into()));
        }
        if !fp::is_irreducible(&m, p) {
            return Err(Error::InvalidField(format!("modulus {m:?} is reducible over F_{p}")));
        }
        let n = m.len() - 1;
        let q = (p as u128).checked_pow(n as u32).filter(|q| *q <= MAX_ORDER);
        let Some(q) = q else {
            return Err(Error::InvalidField(format!("{p}^{n} is too large")));
        };
        Ok(Arc::new(FiniteField { p, n, q: q as u64, modulus: m }))
    }

    pub fn characteristic(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn order(&self) -> u64 {
        self.q
    }

    /// Coefficients of the modulus, low degree first.
    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    fn reduce_product(&self, prod: &mut [u64]) -> Coeffs {
        let (p, n) = (self.p, self.n);
        for k in (n..prod.len()).rev() {
            let c = prod[k] % p;
            if c == 0 {
                continue;
            }
            prod[k] = 0;
            for i in 0..n {
                let t = &mut prod[k - n + i];
                *t = (*t + (p - self.modulus[i]) * c) % p;
            }
        }
        prod[..n].iter().map(|c| c % p).collect()
    }
}

/// A coefficient field.
#[derive(Clone, Debug)]
pub enum FieldDesc {
    Rational,
    Finite(Arc<FiniteField>),
}

impl PartialEq for FieldDesc {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (FieldDesc::Rational, FieldDesc::Rational) => true,
            (FieldDesc::Finite(a), FieldDesc::Finite(b)) => Arc::ptr_eq(a, b) || a == b,
            _ => false,
        }
    }
}

impl Eq for FieldDesc {}

impl FieldDesc {
    pub fn finite(p: u64, n: usize) -> Result<Self> {
        Ok(FieldDesc::Finite(FiniteField::new(p, n)?))
    }

    /// F_q for a prime power `q`.
    pub fn of_order(q: u64) -> Result<Self> {
        let p = (2..=q).find(|d| q % d == 0).ok_or_else(|| Error::InvalidField(format!("F{q}")))?;
        let mut n = 0;
        let mut r = q;
        while r % p == 0 {
            r /= p;
            n += 1;
        }
        if r != 1 {
            return Err(Error::InvalidField(format!("{q} is not a prime power")));
        }
        Self::finite(p, n)
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            FieldDesc::Rational => 0,
            FieldDesc::Finite(f) => f.p,
        }
    }

    pub fn order(&self) -> Option<u64> {
        match self {
            FieldDesc::Rational => None,
            FieldDesc::Finite(f) => Some(f.q),
        }
    }

    pub fn zero(&self) -> FieldElem {
        match self {
            FieldDesc::Rational => FieldElem::Rat(BigRational::zero()),
            FieldDesc::Finite(f) => FieldElem::Fin(f.clone(), SmallVec::from_elem(0, f.n)),
        }
    }

    pub fn one(&self) -> FieldElem {
        self.from_int(1)
    }

    pub fn from_int(&self, k: i64) -> FieldElem {
        match self {
            FieldDesc::Rational => FieldElem::Rat(BigRational::from_integer(k.into())),
            FieldDesc::Finite(f) => {
                let mut c: Coeffs = SmallVec::from_elem(0, f.n);
                c[0] = k.rem_euclid(f.p as i64) as u64;
                FieldElem::Fin(f.clone(), c)
            }
        }
    }

    pub fn from_rational(&self, q: &BigRational) -> Result<FieldElem> {
        match self {
            FieldDesc::Rational => Ok(FieldElem::Rat(q.clone())),
            FieldDesc::Finite(f) => {
                let p = BigInt::from(f.p);
                let reduce = |x: &BigInt| {
                    let r = ((x % &p) + &p) % &p;
                    r.to_i64().unwrap_or(0)
                };
                let num = self.from_int(reduce(q.numer()));
                let den = self.from_int(reduce(q.denom()));
                num.div(&den)
            }
        }
    }

    /// The generator `u` of F_p[u]/(m); for ℚ and prime fields, 1.
    pub fn generator(&self) -> FieldElem {
        match self {
            FieldDesc::Finite(f) if f.n > 1 => {
                let mut c: Coeffs = SmallVec::from_elem(0, f.n);
                c[1] = 1;
                FieldElem::Fin(f.clone(), c)
            }
            _ => self.one(),
        }
    }

    /// Element `Σ cᵢ uⁱ` from F_p coordinates.
    pub fn from_coeffs(&self, coeffs: &[u64]) -> Result<FieldElem> {
        let FieldDesc::Finite(f) = self else { return Err(Error::CharacteristicZero) };
        let u = self.generator();
        let mut acc = self.zero();
        let mut upow = self.one();
        for x in coeffs {
            acc = &acc + &(&upow * &self.from_int((x % f.p) as i64));
            upow = &upow * &u;
        }
        Ok(acc)
    }

    /// All elements of a finite field in enumeration order.
    pub fn elements(&self) -> Result<Vec<FieldElem>> {
        match self {
            FieldDesc::Rational => Err(Error::Unsupported("enumeration of Q".into())),
            FieldDesc::Finite(f) => {
                if f.q > 1 << 20 {
                    return Err(Error::Unsupported(format!("enumerating F{} is too large", f.q)));
                }
                Ok((0..f.q).map(|k| self.element_by_index(k)).collect())
            }
        }
    }

    fn element_by_index(&self, mut k: u64) -> FieldElem {
        let FieldDesc::Finite(f) = self else { unreachable!() };
        let mut c: Coeffs = SmallVec::from_elem(0, f.n);
        for x in c.iter_mut() {
            *x = k % f.p;
            k /= f.p;
        }
        FieldElem::Fin(f.clone(), c)
    }

    /// Uniform element of a finite field; small-height rationals for ℚ.
    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> FieldElem {
        match self {
            FieldDesc::Rational => {
                let n: i64 = rng.gen_range(-9..=9);
                let d: i64 = rng.gen_range(1..=4);
                FieldElem::Rat(BigRational::new(n.into(), d.into()))
            }
            FieldDesc::Finite(f) => {
                let k = rng.gen_range(0..f.q);
                self.element_by_index(k)
            }
        }
    }

    /// Solve `b^p − b = r` over F_q by F_p-linear algebra.
    pub fn solve_artin_schreier(&self, r: &FieldElem) -> Result<Option<FieldElem>> {
        let FieldDesc::Finite(f) = self else { return Err(Error::CharacteristicZero) };
        let (p, n) = (f.p, f.n);
        let basis: Vec<FieldElem> = (0..n)
            .map(|i| {
                let mut c: Coeffs = SmallVec::from_elem(0, n);
                c[i] = 1;
                FieldElem::Fin(f.clone(), c)
            })
            .collect();
        // augmented matrix: columns are L(e_i) = e_i^p − e_i, last column r
        let mut m = vec![vec![0u64; n + 1]; n];
        for (i, e) in basis.iter().enumerate() {
            let img = &e.frobenius()? - e;
            for (row, v) in img.fin_coeffs().iter().enumerate() {
                m[row][i] = *v;
            }
        }
        for (row, v) in r.fin_coeffs().iter().enumerate() {
            m[row][n] = *v;
        }
        let mut pivots = Vec::new();
        let mut rr = 0;
        for c in 0..n {
            let Some(piv) = (rr..n).find(|&i| m[i][c] != 0) else { continue };
            m.swap(rr, piv);
            let inv = fp::inv_mod(m[rr][c], p);
            m[rr].iter_mut().for_each(|x| *x = *x * inv % p);
            for i in 0..n {
                if i != rr && m[i][c] != 0 {
                    let k = m[i][c];
                    for j in 0..=n {
                        m[i][j] = (m[i][j] + p - k * m[rr][j] % p) % p;
                    }
                }
            }
            pivots.push(c);
            rr += 1;
        }
        if (rr..n).any(|i| m[i][n] != 0) {
            return Ok(None);
        }
        let mut sol: Coeffs = SmallVec::from_elem(0, n);
        for (i, c) in pivots.iter().enumerate() {
            sol[*c] = m[i][n];
        }
        Ok(Some(FieldElem::Fin(f.clone(), sol)))
    }
}

impl fmt::Display for FieldDesc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldDesc::Rational => write!(f, "Q"),
            FieldDesc::Finite(ff) => write!(f, "F{}", ff.q),
        }
    }
}

/// An element of ℚ or of some F_{p^n}.
#[derive(Clone, Debug)]
pub enum FieldElem {
    Rat(BigRational),
    Fin(Arc<FiniteField>, Coeffs),
}

impl PartialEq for FieldElem {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (FieldElem::Rat(a), FieldElem::Rat(b)) => a == b,
            (FieldElem::Fin(f, a), FieldElem::Fin(g, b)) => a == b && (Arc::ptr_eq(f, g) || f == g),
            _ => false,
        }
    }
}

impl Eq for FieldElem {}

impl FieldElem {
    pub fn rational(n: i64, d: i64) -> FieldElem {
        FieldElem::Rat(BigRational::new(n.into(), d.into()))
    }

    pub fn desc(&self) -> FieldDesc {
        match self {
            FieldElem::Rat(_) => FieldDesc::Rational,
            FieldElem::Fin(f, _) => FieldDesc::Finite(f.clone()),
        }
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            FieldElem::Rat(_) => 0,
            FieldElem::Fin(f, _) => f.p,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            FieldElem::Rat(q) => q.is_zero(),
            FieldElem::Fin(_, c) => c.iter().all(|x| *x == 0),
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            FieldElem::Rat(q) => q.is_one(),
            FieldElem::Fin(_, c) => c[0] == 1 && c[1..].iter().all(|x| *x == 0),
        }
    }

    /// F_p coordinates (empty for ℚ).
    pub fn fin_coeffs(&self) -> &[u64] {
        match self {
            FieldElem::Rat(_) => &[],
            FieldElem::Fin(_, c) => c,
        }
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            FieldElem::Rat(q) => Some(q),
            FieldElem::Fin(..) => None,
        }
    }

    pub fn same_field(&self, other: &FieldElem) -> Result<()> {
        match (self, other) {
            (FieldElem::Rat(_), FieldElem::Rat(_)) => Ok(()),
            (FieldElem::Fin(f, _), FieldElem::Fin(g, _)) if Arc::ptr_eq(f, g) || f == g => Ok(()),
            _ => Err(Error::FieldMismatch(self.desc().to_string(), other.desc().to_string())),
        }
    }

    pub fn try_add(&self, other: &FieldElem) -> Result<FieldElem> {
        self.same_field(other)?;
        Ok(match (self, other) {
            (FieldElem::Rat(a), FieldElem::Rat(b)) => FieldElem::Rat(a + b),
            (FieldElem::Fin(f, a), FieldElem::Fin(_, b)) => {
                FieldElem::Fin(f.clone(), a.iter().zip(b).map(|(x, y)| (x + y) % f.p).collect())
            }
            _ => unreachable!(),
        })
    }

    pub fn try_sub(&self, other: &FieldElem) -> Result<FieldElem> {
        self.try_add(&other.neg_ref())
    }

    pub fn try_mul(&self, other: &FieldElem) -> Result<FieldElem> {
        self.same_field(other)?;
        Ok(match (self, other) {
            (FieldElem::Rat(a), FieldElem::Rat(b)) => FieldElem::Rat(a * b),
            (FieldElem::Fin(f, a), FieldElem::Fin(_, b)) => {
                if f.n == 1 {
                    return Ok(FieldElem::Fin(f.clone(), SmallVec::from_elem(a[0] * b[0] % f.p, 1)));
                }
                let mut prod: SmallVec<[u64; 8]> = SmallVec::from_elem(0, 2 * f.n - 1);
                for (i, x) in a.iter().enumerate() {
                    if *x == 0 {
                        continue;
                    }
                    for (j, y) in b.iter().enumerate() {
                        prod[i + j] = (prod[i + j] + x * y) % f.p;
                    }
                }
                FieldElem::Fin(f.clone(), f.reduce_product(&mut prod))
            }
            _ => unreachable!(),
        })
    }

    fn neg_ref(&self) -> FieldElem {
        match self {
            FieldElem::Rat(a) => FieldElem::Rat(-a),
            FieldElem::Fin(f, a) => FieldElem::Fin(f.clone(), a.iter().map(|x| (f.p - x) % f.p).collect()),
        }
    }

    /// Multiplicative inverse; extended Euclid against the modulus for F_{p^n}.
    pub fn inv(&self) -> Result<FieldElem> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(match self {
            FieldElem::Rat(a) => FieldElem::Rat(a.recip()),
            FieldElem::Fin(f, a) => {
                if f.n == 1 {
                    return Ok(FieldElem::Fin(f.clone(), SmallVec::from_elem(fp::inv_mod(a[0], f.p), 1)));
                }
                let mut v = a.to_vec();
                fp::trim(&mut v);
                let s = fp::inverse_mod_poly(&v, &f.modulus, f.p).ok_or(Error::DivisionByZero)?;
                let mut c: Coeffs = SmallVec::from_elem(0, f.n);
                c[..s.len()].copy_from_slice(&s);
                FieldElem::Fin(f.clone(), c)
            }
        })
    }

    pub fn div(&self, other: &FieldElem) -> Result<FieldElem> {
        self.same_field(other)?;
        self.try_mul(&other.inv()?)
    }

    pub fn pow(&self, mut e: u128) -> FieldElem {
        let mut base = self.clone();
        let mut r = self.desc().one();
        while e > 0 {
            if e & 1 == 1 {
                r = &r * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        r
    }

    /// Integer power, negative exponents allowed for nonzero elements.
    pub fn powi(&self, e: i64) -> Result<FieldElem> {
        if e >= 0 {
            Ok(self.pow(e as u128))
        } else {
            Ok(self.inv()?.pow(e.unsigned_abs() as u128))
        }
    }

    /// `a ↦ a^p`.
    pub fn frobenius(&self) -> Result<FieldElem> {
        match self {
            FieldElem::Rat(_) => Err(Error::CharacteristicZero),
            FieldElem::Fin(f, _) => Ok(self.pow(f.p as u128)),
        }
    }

    /// Absolute trace Σ_{i<n} a^{p^i}, returned as an element of F_p.
    pub fn trace_to_prime(&self) -> Result<u64> {
        let FieldElem::Fin(f, _) = self else { return Err(Error::CharacteristicZero) };
        let mut acc = self.clone();
        let mut cur = self.clone();
        for _ in 1..f.n {
            cur = cur.frobenius()?;
            acc = &acc + &cur;
        }
        debug_assert!(acc.fin_coeffs()[1..].iter().all(|x| *x == 0));
        Ok(acc.fin_coeffs()[0])
    }

    /// The unique p-th root, `a^{p^{n−1}}`.
    pub fn pth_root(&self) -> Result<FieldElem> {
        let FieldElem::Fin(f, _) = self else { return Err(Error::CharacteristicZero) };
        let mut cur = self.clone();
        for _ in 1..f.n {
            cur = cur.frobenius()?;
        }
        Ok(cur)
    }

    /// Total order used to pick canonical representatives: numeric on ℚ,
    /// coordinates from the highest power of `u` down on F_q.
    pub fn canonical_cmp(&self, other: &FieldElem) -> Ordering {
        match (self, other) {
            (FieldElem::Rat(a), FieldElem::Rat(b)) => a.cmp(b),
            (FieldElem::Fin(_, a), FieldElem::Fin(_, b)) => a.iter().rev().cmp(b.iter().rev()),
            (FieldElem::Rat(_), _) => Ordering::Less,
            _ => Ordering::Greater,
        }
    }

    /// Whether this element lies in the prime field.
    pub fn in_prime_field(&self) -> bool {
        match self {
            FieldElem::Rat(_) => true,
            FieldElem::Fin(_, c) => c[1..].iter().all(|x| *x == 0),
        }
    }
}

impl Add for &FieldElem {
    type Output = FieldElem;
    fn add(self, rhs: &FieldElem) -> FieldElem {
        self.try_add(rhs).expect("field mismatch in +")
    }
}

impl Sub for &FieldElem {
    type Output = FieldElem;
    fn sub(self, rhs: &FieldElem) -> FieldElem {
        self.try_sub(rhs).expect("field mismatch in -")
    }
}

impl Mul for &FieldElem {
    type Output = FieldElem;
    fn mul(self, rhs: &FieldElem) -> FieldElem {
        self.try_mul(rhs).expect("field mismatch in *")
    }
}

impl Neg for &FieldElem {
    type Output = FieldElem;
    fn neg(self) -> FieldElem {
        self.neg_ref()
    }
}

impl Neg for FieldElem {
    type Output = FieldElem;
    fn neg(self) -> FieldElem {
        self.neg_ref()
    }
}

pub(crate) fn fmt_bigrat(q: &BigRational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldElem::Rat(q) => write!(f, "{}", fmt_bigrat(q)),
            FieldElem::Fin(_, c) => {
                let mut parts = Vec::new();
                for (i, x) in c.iter().enumerate().rev() {
                    if *x == 0 {
                        continue;
                    }
                    let s = match (i, *x) {
                        (0, x) => x.to_string(),
                        (1, 1) => "u".to_string(),
                        (1, x) => format!("{x}*u"),
                        (i, 1) => format!("u^{i}"),
                        (i, x) => format!("{x}*u^{i}"),
                    };
                    parts.push(s);
                }
                if parts.is_empty() {
                    write!(f, "0")
                } else {
                    write!(f, "{}", parts.join("+"))
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn f4_product() {
        let f4 = FieldDesc::finite(2, 2).unwrap();
        let u = f4.generator();
        let u1 = &u + &f4.one();
        assert_eq!(&u * &u1, f4.one());
        assert_eq!(u.to_string(), "u");
        assert_eq!(u1.to_string(), "u+1");
    }

    #[test]
    fn rational_sum() {
        let a = FieldElem::rational(1, 3);
        let b = FieldElem::rational(1, 6);
        assert_eq!(&a + &b, FieldElem::rational(1, 2));
    }

    #[test]
    fn f3_division() {
        let f3 = FieldDesc::finite(3, 1).unwrap();
        let two = f3.from_int(2);
        assert_eq!(two.div(&two).unwrap(), f3.one());
        assert_eq!(f3.one().div(&f3.zero()), Err(Error::DivisionByZero));
    }

    #[test]
    fn frobenius_and_trace() {
        let f2 = FieldDesc::finite(2, 1).unwrap();
        assert_eq!(f2.one().frobenius().unwrap(), f2.one());
        let f4 = FieldDesc::finite(2, 2).unwrap();
        assert_eq!(f4.generator().trace_to_prime().unwrap(), 1);
        let f7 = FieldDesc::finite(7, 1).unwrap();
        for a in f7.elements().unwrap() {
            assert_eq!(a.frobenius().unwrap(), a);
        }
        assert!(FieldElem::rational(1, 2).frobenius().is_err());
    }

    #[test]
    fn pth_root_inverts_frobenius() {
        let f27 = FieldDesc::finite(3, 3).unwrap();
        for a in f27.elements().unwrap() {
            assert_eq!(a.frobenius().unwrap().pth_root().unwrap(), a);
        }
    }

    #[test]
    fn inverses_in_f81() {
        let f = FieldDesc::finite(3, 4).unwrap();
        for a in f.elements().unwrap().into_iter().skip(1) {
            assert!((&a * &a.inv().unwrap()).is_one());
        }
    }

    #[test]
    fn artin_schreier_solver() {
        let f4 = FieldDesc::finite(2, 2).unwrap();
        let b = f4.solve_artin_schreier(&f4.one()).unwrap().unwrap();
        assert_eq!(&b.frobenius().unwrap() - &b, f4.one());
        let f2 = FieldDesc::finite(2, 1).unwrap();
        assert_eq!(f2.solve_artin_schreier(&f2.one()).unwrap(), None);
    }

    #[test]
    fn order_parsing() {
        assert_eq!(FieldDesc::of_order(81).unwrap().to_string(), "F81");
        assert!(FieldDesc::of_order(12).is_err());
        assert!(FieldDesc::finite(4, 1).is_err());
    }

    #[test]
    fn from_rational_reduces() {
        let f5 = FieldDesc::finite(5, 1).unwrap();
        let half = BigRational::new(1.into(), 2.into());
        assert_eq!(f5.from_rational(&half).unwrap(), f5.from_int(3));
    }
}
