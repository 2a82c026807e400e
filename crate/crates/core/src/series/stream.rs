//! Named infinite series that can be materialized to any truncation.

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use super::{Precision, Series};
use crate::error::{Error, Result};
use crate::fields::upoly::UPoly;
use crate::fields::{FieldDesc, FieldElem, FiniteField};
use crate::groups::{is_prime, rat, rat_int, GroupDesc, GroupElem, Rat};

/// Largest `p^i` used for exponent denominators of infinite streams.
const DENOMINATOR_CAP: i128 = 1 << 40;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "name")]
pub enum Stream {
    /// `Σ_{i≥1} t^(−1/pⁱ)`, a root of `X^p − X − 1/t`.
    ThetaDefect { p: u64 },
    /// `Σ_{i≥0} (−t)^(pⁱ)`, a root of `X^p − X − t`.
    FrobeniusRoot { p: u64 },
    /// `Σ_{n∈S} t^(−1/n)` for a finite set `S` of positive integers prime to `p`.
    BadValueGroup { p: u64, s: Vec<u64> },
    /// `Σ_{n≥1} aₙ tⁿ` with `aₙ` the canonical generator of F_{p^n}, for
    /// `n ≤ n_max`, inside F_{p^L}, `L = lcm(1..n_max)`.
    BadResidue { p: u64, n_max: usize },
    /// `Σ_{i≥1} t^(p^{νᵢ} − p^{−νᵢ})`, `νᵢ = 1 + 2 + … + i`.
    ZSeries { p: u64 },
    /// `Σ_{i≥1} t^(i²)`; its coefficient sequence is not p-automatic, so it is
    /// transcendental over F_p(t).
    Transcendental { p: u64 },
}

/// Declared invariants of the place obtained by embedding through a stream.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct StreamMeta {
    pub rational_rank: usize,
    pub value_group_finitely_generated: bool,
    pub residue_dim: usize,
    pub residue_finitely_generated: bool,
}

/// Minimal polynomial over F_p of the canonical generator of F_{p^n}
/// (coefficients low to high): `X − 1` for `n = 1`, the field modulus otherwise.
pub fn canonical_minimal_polynomial(p: u64, n: usize) -> Result<Vec<u64>> {
    if n == 1 {
        return Ok(vec![p - 1, 1]);
    }
    Ok(FiniteField::new(p, n)?.modulus().to_vec())
}

/// The common field F_{p^L}, `L = lcm(1..n_max)`, and `a_1..a_{n_max}` inside it.
pub fn bad_residue_coefficients(p: u64, n_max: usize) -> Result<(FieldDesc, Vec<FieldElem>)> {
    let l = (1..=n_max).fold(1usize, |acc, n| acc.lcm(&n));
    let big = FieldDesc::finite(p, l)?;
    let mut out = Vec::with_capacity(n_max);
    for n in 1..=n_max {
        let m = canonical_minimal_polynomial(p, n)?;
        let f = UPoly::new(big.clone(), m.iter().map(|c| big.from_int(*c as i64)).collect());
        let roots = f.roots()?;
        let a = roots
            .into_iter()
            .next()
            .ok_or_else(|| Error::Precondition(format!("F{} has no root of the degree-{n} modulus", big.order().unwrap_or(0))))?;
        out.push(a);
    }
    Ok((big, out))
}

fn q(e: Rat) -> GroupElem {
    GroupElem::Rat(e)
}

impl Stream {
    pub fn name(&self) -> String {
        match self {
            Stream::ThetaDefect { p } => format!("ThetaDefect({p})"),
            Stream::FrobeniusRoot { p } => format!("FrobeniusRoot({p})"),
            Stream::BadValueGroup { p, s } => {
                let s: Vec<String> = s.iter().map(|n| n.to_string()).collect();
                format!("BadValueGroup({p},{{{}}})", s.join(","))
            }
            Stream::BadResidue { p, n_max } => format!("BadResidue({p},{n_max})"),
            Stream::ZSeries { p } => format!("ZSeries({p})"),
            Stream::Transcendental { p } => format!("Transcendental({p})"),
        }
    }

    pub fn p(&self) -> u64 {
        match self {
            Stream::ThetaDefect { p }
            | Stream::FrobeniusRoot { p }
            | Stream::BadValueGroup { p, .. }
            | Stream::BadResidue { p, .. }
            | Stream::ZSeries { p }
            | Stream::Transcendental { p } => *p,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let p = self.p();
        if !is_prime(p) {
            return Err(Error::InvalidParams(format!("{p} is not prime")));
        }
        match self {
            Stream::BadValueGroup { s, .. } => {
                if s.is_empty() || s.iter().any(|n| *n == 0 || n % p == 0) {
                    return Err(Error::InvalidParams(format!("S must be nonempty and prime to {p}")));
                }
            }
            Stream::BadResidue { n_max, .. } if *n_max == 0 => {
                return Err(Error::InvalidParams("n_max must be at least 1".into()));
            }
            _ => {}
        }
        Ok(())
    }

    pub fn field(&self) -> Result<FieldDesc> {
        self.validate()?;
        match self {
            Stream::BadResidue { p, n_max } => {
                let l = (1..=*n_max).fold(1usize, |acc, n| acc.lcm(&n));
                FieldDesc::finite(*p, l)
            }
            _ => FieldDesc::finite(self.p(), 1),
        }
    }

    pub fn group(&self) -> Result<GroupDesc> {
        self.validate()?;
        match self {
            Stream::ThetaDefect { p } | Stream::ZSeries { p } => GroupDesc::p_divisible_hull(*p),
            Stream::BadValueGroup { s, .. } => GroupDesc::one_over(s.iter().fold(1u64, |a, n| a.lcm(n))),
            _ => Ok(GroupDesc::integers()),
        }
    }

    pub fn meta(&self) -> StreamMeta {
        let (vfg, rfg) = match self {
            Stream::ThetaDefect { .. } | Stream::ZSeries { .. } | Stream::BadValueGroup { .. } => (false, true),
            Stream::BadResidue { .. } => (true, false),
            Stream::FrobeniusRoot { .. } | Stream::Transcendental { .. } => (true, true),
        };
        StreamMeta {
            rational_rank: 1,
            value_group_finitely_generated: vfg,
            residue_dim: 0,
            residue_finitely_generated: rfg,
        }
    }

    /// The exact sum when the stream has finitely many terms.
    pub fn exact(&self) -> Result<Option<Series>> {
        match self {
            Stream::BadValueGroup { s, .. } => {
                let field = self.field()?;
                let group = self.group()?;
                let terms = s.iter().map(|n| (q(rat(-1, *n as i128)), field.one())).collect();
                Ok(Some(Series::new(&field, &group, terms, Precision::Infinite)?))
            }
            _ => Ok(None),
        }
    }

    /// Truncation modulo `t^prec`. Streams with infinitely many terms below
    /// `prec` are cut at a fixed depth and report the next exponent as their
    /// precision.
    pub fn expand(&self, prec: &GroupElem) -> Result<Series> {
        let field = self.field()?;
        let group = self.group()?;
        group.check(prec).map_err(|_| {
            Error::InvalidParams(format!("precision {prec} is not in the value group {group} of {}", self.name()))
        })?;
        let p = self.p() as i128;
        let one = field.one();
        let mut terms = Vec::new();
        let mut cut = Precision::Finite(prec.clone());
        match self {
            Stream::ThetaDefect { .. } => {
                let mut pi = p;
                loop {
                    let e = q(rat(-1, pi));
                    if !cut.admits(&e) {
                        break;
                    }
                    if pi * p > DENOMINATOR_CAP {
                        cut = Precision::min(&cut, &Precision::Finite(q(rat(-1, pi))));
                        break;
                    }
                    terms.push((e, one.clone()));
                    pi *= p;
                }
            }
            Stream::FrobeniusRoot { .. } => {
                let c = if p == 2 { one.clone() } else { -&one };
                let mut pi = 1i128;
                while cut.admits(&q(rat_int(pi))) {
                    terms.push((q(rat_int(pi)), c.clone()));
                    pi = pi.checked_mul(p).ok_or_else(|| Error::InvalidParams("precision too large".into()))?;
                }
            }
            Stream::BadValueGroup { .. } => {
                let exact = self.exact()?.expect("finite stream");
                return Ok(exact.truncate(&cut));
            }
            Stream::BadResidue { n_max, .. } => {
                let (_, coeffs) = bad_residue_coefficients(self.p(), *n_max)?;
                for (i, a) in coeffs.into_iter().enumerate() {
                    let e = q(rat_int(i as i128 + 1));
                    if !cut.admits(&e) {
                        break;
                    }
                    terms.push((e, a));
                }
                cut = Precision::min(&cut, &Precision::Finite(q(rat_int(*n_max as i128 + 1))));
            }
            Stream::ZSeries { .. } => {
                let mut nu = 0u32;
                for i in 1.. {
                    nu += i;
                    let big = p.checked_pow(nu).filter(|x| *x <= DENOMINATOR_CAP);
                    let Some(big) = big else {
                        cut = Precision::min(&cut, &Precision::Finite(q(rat_int(DENOMINATOR_CAP))));
                        break;
                    };
                    let e = q(rat_int(big) - rat(1, big));
                    if !cut.admits(&e) {
                        break;
                    }
                    terms.push((e, one.clone()));
                }
            }
            Stream::Transcendental { .. } => {
                for i in 1i128.. {
                    let e = q(rat_int(i * i));
                    if !cut.admits(&e) {
                        break;
                    }
                    terms.push((e, one.clone()));
                }
            }
        }
        Series::new(&field, &group, terms, cut)
    }

    /// The first `k` terms, with the exponent of the next term as precision.
    pub fn first_terms(&self, k: usize) -> Result<Series> {
        let next = self.term_exponent(k)?;
        let s = self.expand(&next)?;
        if s.terms().len() != k {
            return Err(Error::PrecisionUnreachable {
                target: format!("{k} terms"),
                reason: format!("{} stops at {} terms", self.name(), s.terms().len()),
            });
        }
        Ok(s)
    }

    /// Exponent of the term with index `k` (0-based).
    pub fn term_exponent(&self, k: usize) -> Result<GroupElem> {
        let p = self.p() as i128;
        let k32 = u32::try_from(k).map_err(|_| Error::InvalidParams("index too large".into()))?;
        let big = |e: u32| p.checked_pow(e).ok_or_else(|| Error::InvalidParams("exponent overflow".into()));
        Ok(match self {
            Stream::ThetaDefect { .. } => q(rat(-1, big(k32 + 1)?)),
            Stream::FrobeniusRoot { .. } => q(rat_int(big(k32)?)),
            Stream::BadValueGroup { s, .. } => {
                let mut s = s.clone();
                s.sort_unstable();
                match s.get(k) {
                    Some(n) => q(rat(-1, *n as i128)),
                    None => return Err(Error::InvalidParams("BadValueGroup has no further terms".into())),
                }
            }
            Stream::BadResidue { .. } => q(rat_int(k as i128 + 1)),
            Stream::ZSeries { .. } => {
                let nu = (k32 + 1) * (k32 + 2) / 2;
                let b = big(nu)?;
                q(rat_int(b) - rat(1, b))
            }
            Stream::Transcendental { .. } => q(rat_int((k as i128 + 1).pow(2))),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn theta_to_zero_is_capped_honestly() {
        let s = Stream::ThetaDefect { p: 2 }.expand(&q(rat_int(0))).unwrap();
        assert_eq!(s.terms()[0].0, q(rat(-1, 2)));
        assert_eq!(s.terms()[1].0, q(rat(-1, 4)));
        let last = &s.terms().last().unwrap().0;
        assert!(last < &q(rat_int(0)));
        assert!(s.precision() > &Precision::Finite(last.clone()));
        assert!(s.precision() < &Precision::Finite(q(rat_int(0))));
    }

    #[test]
    fn frobenius_root_char_two() {
        let s = Stream::FrobeniusRoot { p: 2 }.expand(&q(rat_int(5))).unwrap();
        assert_eq!(s.to_string(), "t^(1) + t^(2) + t^(4) + O(t^(5))");
    }

    #[test]
    fn z_series_first_terms() {
        let s = Stream::ZSeries { p: 2 }.first_terms(2).unwrap();
        let e: Vec<GroupElem> = s.terms().iter().map(|(e, _)| e.clone()).collect();
        assert_eq!(e, vec![q(rat(3, 2)), q(rat(63, 8))]);
    }

    #[test]
    fn refinement_agrees() {
        let st = Stream::ThetaDefect { p: 3 };
        let a = st.expand(&q(rat(-1, 27))).unwrap();
        let b = st.expand(&q(rat_int(0))).unwrap();
        assert!(a.agrees_with(&b));
    }

    #[test]
    fn bad_residue_coefficients_have_full_degree() {
        let (big, a) = bad_residue_coefficients(2, 4).unwrap();
        assert_eq!(big.order(), Some(4096));
        for (i, x) in a.iter().enumerate() {
            let n = i + 1;
            assert_eq!(x.pow(2u128.pow(n as u32)), *x);
            for d in 1..n {
                if n % d == 0 {
                    assert_ne!(x.pow(2u128.pow(d as u32)), *x, "a_{n} lies in F_2^{d}");
                }
            }
        }
    }

    #[test]
    fn precision_outside_group_is_rejected() {
        assert!(Stream::FrobeniusRoot { p: 2 }.expand(&q(rat(1, 2))).is_err());
    }
}
