//! Artin–Schreier polynomials `X^p − X − c` over series fields of
//! characteristic `p`.

use std::fmt;

use crate::error::{Error, Result};
use crate::fields::{FieldDesc, FieldElem, MPoly};
use crate::groups::GroupElem;
use crate::hensel::{hensel_lift, SeriesPoly};
use crate::series::{Precision, Residue, Series, ValuationResult};

/// The polynomial `X^p − X − c`.
#[derive(Clone, Debug, PartialEq)]
pub struct ASInstance {
    pub p: u64,
    pub c: Series,
}

impl ASInstance {
    pub fn new(c: Series) -> Result<Self> {
        let p = c.field().characteristic();
        if p == 0 {
            return Err(Error::CharacteristicZero);
        }
        Ok(ASInstance { p, c })
    }

    pub fn poly(&self) -> SeriesPoly {
        let (f, g) = (self.c.field(), self.c.group());
        let mut coeffs = vec![Series::zero(f, g); self.p as usize + 1];
        coeffs[0] = self.c.neg();
        coeffs[1] = Series::constant(g, f.from_int(-1));
        coeffs[self.p as usize] = Series::one(f, g);
        SeriesPoly::new(f, g, coeffs).expect("consistent coefficients")
    }

    /// `a^p − a − c`.
    pub fn eval(&self, a: &Series) -> Result<Series> {
        a.pow(self.p)?.sub(a)?.sub(&self.c)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ASCase {
    PositiveValue,
    ZeroValue,
    NegativeUnramified,
    NegativeRamified,
}

impl fmt::Display for ASCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ASCase::PositiveValue => "PositiveValue",
            ASCase::ZeroValue => "ZeroValue",
            ASCase::NegativeUnramified => "NegativeUnramified",
            ASCase::NegativeRamified => "NegativeRamified",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum ASOutcome {
    Split { roots: Vec<Series> },
    LiftedRoot { root: Series },
    NoResidueRoot { trace: FieldElem },
    Ramified { root_value: GroupElem, note: String },
    DefectSuspect { partial: Series, residual: Series, iterations: usize },
}

impl ASOutcome {
    pub fn variant_name(&self) -> &'static str {
        match self {
            ASOutcome::Split { .. } => "Split",
            ASOutcome::LiftedRoot { .. } => "LiftedRoot",
            ASOutcome::NoResidueRoot { .. } => "NoResidueRoot",
            ASOutcome::Ramified { .. } => "Ramified",
            ASOutcome::DefectSuspect { .. } => "DefectSuspect",
        }
    }
}

/// Whether `g ∈ pG`, returning `g/p` when it is.
fn p_divide(c: &Series, p: u64, g: &GroupElem) -> Option<GroupElem> {
    g.div_int(p as i64).filter(|q| c.group().contains(q))
}

pub fn classify(inst: &ASInstance) -> Result<ASCase> {
    match inst.c.valuation() {
        ValuationResult::Infinity => Ok(ASCase::PositiveValue),
        ValuationResult::AtLeast(g) if g.is_positive() => Ok(ASCase::PositiveValue),
        ValuationResult::AtLeast(g) => Err(Error::Undecidable(format!("v(c) >= {g} only"))),
        ValuationResult::Exact(g) => Ok(if g.is_positive() {
            ASCase::PositiveValue
        } else if g.is_zero() {
            ASCase::ZeroValue
        } else if p_divide(&inst.c, inst.p, &g).is_some() {
            ASCase::NegativeUnramified
        } else {
            ASCase::NegativeRamified
        }),
    }
}

/// The `p` roots `a, a+1, …, a+(p−1)` for `v(c) > 0`.
pub fn root_split(inst: &ASInstance, target: &GroupElem) -> Result<ASOutcome> {
    if classify(inst)? != ASCase::PositiveValue {
        return Err(Error::WrongCase("root_split needs v(c) > 0".into()));
    }
    let (f, g) = (inst.c.field(), inst.c.group());
    let a = hensel_lift(&inst.poly(), &Series::zero(f, g), target)?.root;
    let roots = (0..inst.p)
        .map(|i| a.add(&Series::constant(g, f.from_int(i as i64))))
        .collect::<Result<_>>()?;
    Ok(ASOutcome::Split { roots })
}

/// `v(c) = 0`: a root exists iff the residue has absolute trace 0.
pub fn residue_case(inst: &ASInstance, target: &GroupElem) -> Result<ASOutcome> {
    if classify(inst)? != ASCase::ZeroValue {
        return Err(Error::WrongCase("residue_case needs v(c) = 0".into()));
    }
    let Residue::Value(r) = inst.c.residue()? else {
        return Err(Error::WrongCase("residue_case needs v(c) = 0".into()));
    };
    let field = inst.c.field();
    let trace = r.trace_to_prime()?;
    let Some(b) = field.solve_artin_schreier(&r)? else {
        return Ok(ASOutcome::NoResidueRoot { trace: field.from_int(trace as i64) });
    };
    let root = hensel_lift(&inst.poly(), &Series::constant(inst.c.group(), b), target)?.root;
    Ok(ASOutcome::LiftedRoot { root })
}

/// `v(c) < 0` not divisible by `p`: every root has value `v(c)/p`.
pub fn ramified_root_value(inst: &ASInstance) -> Result<ASOutcome> {
    let ValuationResult::Exact(g) = inst.c.valuation() else {
        return Err(Error::WrongCase("value of c is not exact".into()));
    };
    if !g.is_negative() || p_divide(&inst.c, inst.p, &g).is_some() {
        return Err(Error::WrongCase(format!("v(c) = {g} is not a negative non-multiple of {}", inst.p)));
    }
    let root_value = g
        .div_int(inst.p as i64)
        .ok_or_else(|| Error::Unsupported(format!("{g}/{} in a lex group", inst.p)))?;
    let note = format!("{root_value} lies outside {}; ramification index at least {}", inst.c.group(), inst.p);
    Ok(ASOutcome::Ramified { root_value, note })
}

#[derive(Clone, Debug, PartialEq)]
pub struct SurgeryStep<T> {
    pub before: T,
    pub b: T,
    pub after: T,
}

#[derive(Clone, Debug, PartialEq)]
pub enum SurgeryVerdict {
    /// Leading value negative and not divisible by `p`.
    Ramified(GroupElem),
    /// No negative part remains.
    NonNegative,
    /// Polynomial mode: no monomial `x^{pℓ}`, `ℓ ≥ 1`, remains.
    NormalForm,
    DefectSuspect,
}

/// Trace of Artin–Schreier surgery on `c`.
#[derive(Clone, Debug, PartialEq)]
pub struct SurgeryReport<T> {
    pub steps: Vec<SurgeryStep<T>>,
    /// Accumulated translation `B = Σ b`.
    pub partial: T,
    /// The reduced constant `c − (B^p − B)`.
    pub reduced: T,
    pub verdict: SurgeryVerdict,
}

impl SurgeryReport<Series> {
    /// `B^p − B − c`, the residual of `B` in the original polynomial.
    pub fn residual(&self) -> Series {
        self.reduced.neg()
    }
}

/// Valuation-mode surgery: repeatedly remove the lowest term when its value
/// is negative and divisible by `p`.
pub fn surgery(c: &Series, max_iter: usize) -> Result<SurgeryReport<Series>> {
    let p = c.field().characteristic();
    if p == 0 {
        return Err(Error::CharacteristicZero);
    }
    let mut cur = c.clone();
    let mut partial = Series::zero(c.field(), c.group());
    let mut steps = Vec::new();
    loop {
        let verdict = match cur.valuation() {
            ValuationResult::Exact(g) if g.is_negative() => match p_divide(&cur, p, &g) {
                Some(h) => {
                    if steps.len() >= max_iter {
                        Some(SurgeryVerdict::DefectSuspect)
                    } else {
                        let coeff = cur.terms()[0].1.pth_root()?;
                        let b = Series::monomial(c.group(), coeff, h);
                        let after = cur.sub(&b.pow(p)?.sub(&b)?)?;
                        partial = partial.add(&b)?;
                        steps.push(SurgeryStep { before: cur.clone(), b, after: after.clone() });
                        cur = after;
                        None
                    }
                }
                None => Some(SurgeryVerdict::Ramified(g)),
            },
            ValuationResult::AtLeast(g) if !g.is_positive() && !g.is_zero() => {
                return Err(Error::Undecidable(format!("v(c) >= {g} only")));
            }
            _ => Some(SurgeryVerdict::NonNegative),
        };
        if let Some(verdict) = verdict {
            return Ok(SurgeryReport { steps, partial, reduced: cur, verdict });
        }
    }
}

/// Polynomial-mode surgery on `c ∈ F_q[x]`: remove monomials `x^{pℓ}`,
/// `ℓ ≥ 1`, highest degree first.
pub fn surgery_poly(c: &MPoly, max_iter: usize) -> Result<SurgeryReport<MPoly>> {
    if c.vars().len() != 1 {
        return Err(Error::Precondition("surgery on polynomials needs one variable".into()));
    }
    let field = c.field().clone();
    let p = field.characteristic();
    if p == 0 {
        return Err(Error::CharacteristicZero);
    }
    let vars = c.vars().to_vec();
    let mut cur = c.clone();
    let mut partial = MPoly::zero(&field, &vars);
    let mut steps = Vec::new();
    loop {
        let offending = cur
            .terms()
            .filter(|(e, _)| e[0] > 0 && e[0] as u64 % p == 0)
            .max_by_key(|(e, _)| e[0])
            .map(|(e, k)| (e[0], k.clone()));
        let Some((deg, coeff)) = offending else {
            return Ok(SurgeryReport { steps, partial, reduced: cur, verdict: SurgeryVerdict::NormalForm });
        };
        if steps.len() >= max_iter {
            return Ok(SurgeryReport { steps, partial, reduced: cur, verdict: SurgeryVerdict::DefectSuspect });
        }
        let b = MPoly::monomial(&field, &vars, vec![deg / p as u32], coeff.pth_root()?);
        let after = cur.try_sub(&b.pow(p as u32).try_sub(&b)?)?;
        partial = partial.try_add(&b)?;
        steps.push(SurgeryStep { before: cur.clone(), b, after: after.clone() });
        cur = after;
    }
}

/// Full analysis: classify, reduce by surgery if needed, then split, lift
/// or report.
pub fn analyze(inst: &ASInstance, target: &GroupElem, max_iter: usize) -> Result<ASOutcome> {
    match classify(inst)? {
        ASCase::PositiveValue => root_split(inst, target),
        ASCase::ZeroValue => residue_case(inst, target),
        ASCase::NegativeRamified => ramified_root_value(inst),
        ASCase::NegativeUnramified => {
            let rep = surgery(&inst.c, max_iter)?;
            let shifted = ASInstance { p: inst.p, c: rep.reduced.clone() };
            let translate = |a: Series| a.add(&rep.partial);
            match rep.verdict {
                SurgeryVerdict::DefectSuspect => Ok(ASOutcome::DefectSuspect {
                    residual: rep.residual(),
                    partial: rep.partial,
                    iterations: rep.steps.len(),
                }),
                SurgeryVerdict::Ramified(_) => ramified_root_value(&shifted),
                _ => match analyze(&shifted, target, max_iter)? {
                    ASOutcome::Split { roots } => Ok(ASOutcome::Split { roots: roots.into_iter().map(translate).collect::<Result<_>>()? }),
                    ASOutcome::LiftedRoot { root } => Ok(ASOutcome::LiftedRoot { root: translate(root)? }),
                    other => Ok(other),
                },
            }
        }
    }
}

/// The instance `Y^p − c₁Y − c₁` with `c₁ = c^{1−p}`, obtained by `X = cY`.
#[derive(Clone, Debug, PartialEq)]
pub struct ScaledInstance {
    pub c1: Series,
    pub value: GroupElem,
}

impl ScaledInstance {
    /// `y^p − c₁y − c₁`.
    pub fn eval(&self, y: &Series, p: u64) -> Result<Series> {
        y.pow(p)?.sub(&self.c1.mul(y)?)?.sub(&self.c1)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Transforms {
    /// `c − b^p + b`: the constant for the roots shifted by `−b`.
    pub translated: Series,
    pub scaled: Option<ScaledInstance>,
}

/// Translation by `b`, plus the scaling transform when `v(c) < 0`.
pub fn transforms(inst: &ASInstance, b: &Series, target: &GroupElem) -> Result<Transforms> {
    let translated = inst.c.sub(&b.pow(inst.p)?.sub(b)?)?;
    let scaled = match inst.c.valuation() {
        ValuationResult::Exact(g) if g.is_negative() => Some(scale(inst, target)?),
        _ => None,
    };
    Ok(Transforms { translated, scaled })
}

/// Abhyankar's substitution `X = cY`; needs `v(c) < 0`.
pub fn scale(inst: &ASInstance, target: &GroupElem) -> Result<ScaledInstance> {
    let g = match inst.c.valuation() {
        ValuationResult::Exact(g) if g.is_negative() => g,
        other => return Err(Error::WrongCase(format!("scaling needs v(c) < 0, got {other}"))),
    };
    let value = g.int_scale(1 - inst.p as i64);
    if *target <= value {
        return Err(Error::InsufficientPrecision(format!("target {target} does not exceed v(c^(1-p)) = {value}")));
    }
    let c1 = inst.c.pow(inst.p - 1)?.invert(Some(target))?;
    if c1.valuation() != ValuationResult::Exact(value.clone()) || !value.is_positive() {
        return Err(Error::Precondition(format!("scaled coefficient has value {}", c1.valuation())));
    }
    Ok(ScaledInstance { c1, value })
}

/// For `θ^p − θ = 1/t + f(t)`, the relation `X·f(X) − W·X + 1 = 0` satisfied
/// by `X = t`, `W = θ^p − θ`, as a polynomial in `X, W`.
pub fn inversion_polynomial(f: &MPoly) -> Result<MPoly> {
    if f.vars().len() != 1 {
        return Err(Error::Precondition("inversion needs a polynomial in one variable".into()));
    }
    let field: &FieldDesc = f.field();
    let vars = vec!["X".to_string(), "W".to_string()];
    let xf = MPoly::from_terms(field, &vars, f.terms().map(|(e, c)| (vec![e[0] + 1, 0], c.clone())));
    let wx = MPoly::monomial(field, &vars, vec![1, 1], field.one());
    let one = MPoly::constant(field, &vars, field.one());
    xf.try_sub(&wx)?.try_add(&one)
}

/// `a^p − a − c` truncated to the common precision.
pub fn residual(inst: &ASInstance, a: &Series) -> Result<Series> {
    let r = inst.eval(a)?;
    Ok(r.truncate(&Precision::min(inst.c.precision(), a.precision())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{rat, rat_int, GroupDesc};
    use crate::series::Stream;

    fn q(a: i128, b: i128) -> GroupElem {
        GroupElem::Rat(rat(a, b))
    }

    fn mono(p: u64, group: &GroupDesc, e: GroupElem) -> Series {
        let f = FieldDesc::finite(p, 1).unwrap();
        Series::monomial(group, f.one(), e)
    }

    #[test]
    fn classification() {
        let z = GroupDesc::integers();
        let hull = GroupDesc::p_divisible_hull(2).unwrap();
        let c = |g: &GroupDesc, e| ASInstance::new(mono(2, g, q(e, 1))).unwrap();
        assert_eq!(classify(&c(&z, 1)).unwrap(), ASCase::PositiveValue);
        assert_eq!(classify(&c(&z, 0)).unwrap(), ASCase::ZeroValue);
        assert_eq!(classify(&c(&z, -1)).unwrap(), ASCase::NegativeRamified);
        assert_eq!(classify(&c(&z, -2)).unwrap(), ASCase::NegativeUnramified);
        assert_eq!(classify(&c(&hull, -1)).unwrap(), ASCase::NegativeUnramified);
    }

    #[test]
    fn ramified_values() {
        let z = GroupDesc::integers();
        let r = ramified_root_value(&ASInstance::new(mono(2, &z, q(-1, 1))).unwrap()).unwrap();
        assert!(matches!(r, ASOutcome::Ramified { root_value, .. } if root_value == q(-1, 2)));
        let r = ramified_root_value(&ASInstance::new(mono(3, &z, q(-3, 1))).unwrap());
        assert!(matches!(r, Err(Error::WrongCase(_))));
        let half = GroupDesc::one_over(2).unwrap();
        let r = ramified_root_value(&ASInstance::new(mono(3, &half, q(-1, 2))).unwrap()).unwrap();
        assert!(matches!(r, ASOutcome::Ramified { root_value, .. } if root_value == q(-1, 6)));
    }

    #[test]
    fn surgery_on_theta() {
        for p in [2u64, 3, 5] {
            let hull = GroupDesc::p_divisible_hull(p).unwrap();
            let c = mono(p, &hull, q(-1, 1));
            let k = 4;
            let rep = surgery(&c, k).unwrap();
            assert_eq!(rep.verdict, SurgeryVerdict::DefectSuspect);
            let theta = Stream::ThetaDefect { p }.first_terms(k).unwrap();
            assert_eq!(rep.partial.terms(), theta.terms());
            let expect = mono(p, &hull, q(-1, (p as i128).pow(k as u32))).neg();
            assert_eq!(rep.residual(), expect);
            for s in &rep.steps {
                assert_eq!(s.before.sub(&s.after).unwrap(), s.b.pow(p).unwrap().sub(&s.b).unwrap());
            }
        }
    }

    #[test]
    fn polynomial_surgery() {
        let f2 = FieldDesc::finite(2, 1).unwrap();
        let vars = vec!["x".to_string()];
        let c = MPoly::from_terms(&f2, &vars, [(vec![2], f2.one()), (vec![3], f2.one())]);
        let rep = surgery_poly(&c, 10).unwrap();
        assert_eq!(rep.verdict, SurgeryVerdict::NormalForm);
        let expect = MPoly::from_terms(&f2, &vars, [(vec![1], f2.one()), (vec![3], f2.one())]);
        assert_eq!(rep.reduced, expect);
        assert_eq!(rep.steps.len(), 1);
    }

    #[test]
    fn scaling_example() {
        let z = GroupDesc::integers();
        let inst = ASInstance::new(mono(2, &z, q(-1, 1))).unwrap();
        let s = scale(&inst, &GroupElem::Rat(rat_int(10))).unwrap();
        assert_eq!(s.c1, mono(2, &z, q(1, 1)));
        assert_eq!(s.value, q(1, 1));
    }
}
