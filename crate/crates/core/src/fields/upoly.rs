//! Dense univariate polynomials over a coefficient field, with root finding.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{FieldDesc, FieldElem};
use crate::error::{Error, Result};

/// Coefficients low degree first, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UPoly {
    pub desc: FieldDesc,
    pub coeffs: Vec<FieldElem>,
}

impl UPoly {
    pub fn new(desc: FieldDesc, mut coeffs: Vec<FieldElem>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        UPoly { desc, coeffs }
    }

    pub fn zero(desc: &FieldDesc) -> Self {
        UPoly { desc: desc.clone(), coeffs: Vec::new() }
    }

    pub fn x(desc: &FieldDesc) -> Self {
        UPoly::new(desc.clone(), vec![desc.zero(), desc.one()])
    }

    pub fn constant(c: FieldElem) -> Self {
        UPoly::new(c.desc(), vec![c])
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lead(&self) -> Option<&FieldElem> {
        self.coeffs.last()
    }

    pub fn eval(&self, x: &FieldElem) -> FieldElem {
        let mut acc = self.desc.zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * x) + c;
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        let c = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c * &self.desc.from_int(i as i64))
            .collect();
        UPoly::new(self.desc.clone(), c)
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let z = self.desc.zero();
        let c = (0..n)
            .map(|i| self.coeffs.get(i).unwrap_or(&z) + other.coeffs.get(i).unwrap_or(&z))
            .collect();
        UPoly::new(self.desc.clone(), c)
    }

    pub fn neg(&self) -> Self {
        UPoly::new(self.desc.clone(), self.coeffs.iter().map(|c| -c).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return UPoly::zero(&self.desc);
        }
        let mut c = vec![self.desc.zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                c[i + j] = &c[i + j] + &(a * b);
            }
        }
        UPoly::new(self.desc.clone(), c)
    }

    pub fn scale(&self, k: &FieldElem) -> Self {
        UPoly::new(self.desc.clone(), self.coeffs.iter().map(|c| c * k).collect())
    }

    pub fn divrem(&self, d: &Self) -> Result<(Self, Self)> {
        let dl = d.lead().ok_or(Error::DivisionByZero)?.inv()?;
        let dd = d.coeffs.len() - 1;
        let mut r = self.coeffs.clone();
        let mut q = vec![self.desc.zero(); r.len().saturating_sub(dd).max(1)];
        while r.len() > dd && !r.is_empty() {
            let k = r.len() - 1 - dd;
            let c = &r[r.len() - 1] * &dl;
            for (i, x) in d.coeffs.iter().enumerate() {
                r[k + i] = &r[k + i] - &(&c * x);
            }
            q[k] = c;
            r.pop();
            while r.last().is_some_and(|x| x.is_zero()) {
                r.pop();
            }
        }
        Ok((UPoly::new(self.desc.clone(), q), UPoly::new(self.desc.clone(), r)))
    }

    pub fn rem(&self, d: &Self) -> Result<Self> {
        Ok(self.divrem(d)?.1)
    }

    pub fn monic(&self) -> Result<Self> {
        match self.lead() {
            None => Ok(self.clone()),
            Some(l) => Ok(self.scale(&l.inv()?)),
        }
    }

    pub fn gcd(&self, other: &Self) -> Result<Self> {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b)?;
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn powmod(&self, mut e: u128, m: &Self) -> Result<Self> {
        let mut base = self.rem(m)?;
        let mut r = UPoly::constant(self.desc.one()).rem(m)?;
        while e > 0 {
            if e & 1 == 1 {
                r = r.mul(&base).rem(m)?;
            }
            base = base.mul(&base).rem(m)?;
            e >>= 1;
        }
        Ok(r)
    }

    /// Distinct roots in the coefficient field, in canonical order.
    pub fn roots(&self) -> Result<Vec<FieldElem>> {
        if self.is_zero() {
            return Err(Error::Precondition("roots of the zero polynomial".into()));
        }
        let mut roots = match &self.desc {
            FieldDesc::Rational => rational_roots(self)?,
            FieldDesc::Finite(_) => finite_roots(self)?,
        };
        roots.sort_by(|a, b| a.canonical_cmp(b));
        roots.dedup();
        Ok(roots)
    }

    /// Roots that are simple (not roots of the derivative).
    pub fn simple_roots(&self) -> Result<Vec<FieldElem>> {
        let d = self.derivative();
        Ok(self.roots()?.into_iter().filter(|r| !d.eval(r).is_zero()).collect())
    }
}

fn finite_roots(f: &UPoly) -> Result<Vec<FieldElem>> {
    let q = f.desc.order().expect("finite field");
    let f = f.monic()?;
    if f.degree() == Some(0) {
        return Ok(Vec::new());
    }
    let x = UPoly::x(&f.desc);
    let xq = x.powmod(q as u128, &f)?;
    let g = f.gcd(&xq.sub(&x))?;
    let mut out = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    split_linear(&g, q, &mut rng, &mut out)?;
    Ok(out)
}

/// Equal-degree splitting of a squarefree product of distinct linear factors.
fn split_linear(g: &UPoly, q: u64, rng: &mut ChaCha8Rng, out: &mut Vec<FieldElem>) -> Result<()> {
    match g.degree() {
        None | Some(0) => return Ok(()),
        Some(1) => {
            out.push(-&g.coeffs[0]);
            return Ok(());
        }
        _ => {}
    }
    let p = g.desc.characteristic();
    let FieldDesc::Finite(ff) = &g.desc else { unreachable!() };
    let deg = g.degree().unwrap_or(0);
    loop {
        let a = UPoly::new(g.desc.clone(), (0..deg).map(|_| g.desc.random(rng)).collect());
        if a.degree().unwrap_or(0) < 1 {
            continue;
        }
        let h = if p == 2 {
            // absolute trace polynomial a + a² + … + a^{2^{n−1}}
            let mut acc = a.rem(g)?;
            let mut cur = acc.clone();
            for _ in 1..ff.degree() {
                cur = cur.mul(&cur).rem(g)?;
                acc = acc.add(&cur);
            }
            acc
        } else {
            a.powmod(((q - 1) / 2) as u128, g)?.sub(&UPoly::constant(g.desc.one()))
        };
        let d = g.gcd(&h)?;
        let dd = d.degree().unwrap_or(0);
        if dd > 0 && dd < deg {
            let (rest, _) = g.divrem(&d)?;
            split_linear(&d, q, rng, out)?;
            split_linear(&rest.monic()?, q, rng, out)?;
            return Ok(());
        }
        let _ = rng.gen::<u8>();
    }
}

fn divisors(n: &BigInt) -> Result<Vec<BigInt>> {
    let n = n.abs().to_u64().filter(|n| *n < 1 << 40).ok_or_else(|| {
        Error::Unsupported("rational root search with very large coefficients".into())
    })?;
    let mut out = Vec::new();
    let mut d = 1u64;
    while d * d <= n {
        if n % d == 0 {
            out.push(BigInt::from(d));
            if d * d != n {
                out.push(BigInt::from(n / d));
            }
        }
        d += 1;
    }
    Ok(out)
}

fn rational_roots(f: &UPoly) -> Result<Vec<FieldElem>> {
    let mut roots = Vec::new();
    let mut coeffs: Vec<BigRational> = f.coeffs.iter().map(|c| c.as_rational().cloned().unwrap_or_default()).collect();
    let mut shift = 0;
    while coeffs.first().is_some_and(|c| c.is_zero()) {
        coeffs.remove(0);
        shift += 1;
    }
    if shift > 0 {
        roots.push(FieldElem::Rat(BigRational::zero()));
    }
    if coeffs.len() <= 1 {
        return Ok(roots);
    }
    let den = coeffs.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<BigInt> = coeffs.iter().map(|c| (c * &den).to_integer()).collect();
    let g = UPoly::new(FieldDesc::Rational, coeffs.into_iter().map(FieldElem::Rat).collect());
    for a in divisors(&ints[0])? {
        for b in divisors(ints.last().expect("nonempty"))? {
            for s in [1, -1] {
                let r = FieldElem::Rat(BigRational::new(&a * s, b.clone()));
                if g.eval(&r).is_zero() {
                    roots.push(r);
                }
            }
        }
    }
    Ok(roots)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(desc: &FieldDesc, c: &[i64]) -> UPoly {
        UPoly::new(desc.clone(), c.iter().map(|x| desc.from_int(*x)).collect())
    }

    #[test]
    fn roots_match_enumeration() {
        for q in [2u64, 3, 4, 5, 8, 9, 16, 25, 27] {
            let desc = FieldDesc::of_order(q).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(q);
            for _ in 0..20 {
                let deg = rng.gen_range(1..6);
                let mut c: Vec<FieldElem> = (0..deg).map(|_| desc.random(&mut rng)).collect();
                c.push(desc.one());
                let f = UPoly::new(desc.clone(), c);
                let mut brute: Vec<FieldElem> =
                    desc.elements().unwrap().into_iter().filter(|x| f.eval(x).is_zero()).collect();
                brute.sort_by(|a, b| a.canonical_cmp(b));
                assert_eq!(f.roots().unwrap(), brute);
            }
        }
    }

    #[test]
    fn rational_root_theorem() {
        let q = FieldDesc::Rational;
        // (2x − 1)(x + 3) x = 2x³ + 5x² − 3x
        let f = poly(&q, &[0, -3, 5, 2]);
        let r = f.roots().unwrap();
        assert_eq!(r, vec![FieldElem::rational(-3, 1), FieldElem::rational(0, 1), FieldElem::rational(1, 2)]);
        // x² − 8 has no rational root
        assert!(poly(&q, &[-8, 0, 1]).roots().unwrap().is_empty());
    }

    #[test]
    fn simple_roots_skip_repeated() {
        let f3 = FieldDesc::finite(3, 1).unwrap();
        // x²(x − 1)
        let f = poly(&f3, &[0, 0, -1, 1]);
        assert_eq!(f.simple_roots().unwrap(), vec![f3.one()]);
    }
}
