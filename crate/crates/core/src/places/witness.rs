//! The relative uniformization witness predicate (U1)–(U3).

use super::{PlaceDesc, PlaceResidue};
use crate::error::{Error, Result};
use crate::fields::{MPoly, RatFn};
use crate::series::ValuationResult;

/// Transcendence part `T`, algebraic generators `ηᵢ` named by the
/// indeterminates `Xᵢ`, and polynomials `fᵢ` over `O_K[T, X₁…Xₙ]`.
#[derive(Clone, Debug)]
pub struct UniformizationWitness {
    pub transcendence: Vec<String>,
    pub algebraic: Vec<(String, RatFn)>,
    pub polys: Vec<MPoly>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct WitnessCheck {
    pub u1: bool,
    pub u2: bool,
    pub u3: bool,
    pub smooth_center: bool,
}

/// Substitute rational functions for the variables of `f`. All images must
/// live in the same variable list.
pub fn substitute(f: &MPoly, images: &[(String, RatFn)]) -> Result<RatFn> {
    let Some((_, first)) = images.first() else {
        return Err(Error::Precondition("nothing to substitute".into()));
    };
    let vars = first.vars().to_vec();
    let field = first.field().clone();
    let mut cols = Vec::with_capacity(f.vars().len());
    for (i, v) in f.vars().iter().enumerate() {
        match images.iter().find(|(n, _)| n == v) {
            Some((_, r)) => cols.push(Some(r.extend_vars(&vars)?)),
            None if !f.involves(i) => cols.push(None),
            None => return Err(Error::UnknownVariable(v.clone())),
        }
    }
    let mut acc = RatFn::from_poly(MPoly::zero(&field, &vars));
    for (e, c) in f.terms() {
        let mut t = RatFn::from_poly(MPoly::constant(&field, &vars, c.clone()));
        for (i, k) in e.iter().enumerate() {
            if *k > 0 {
                let base = cols[i].as_ref().expect("occurring variable has an image");
                t = t.try_mul(&base.powi(*k as i64)?)?;
            }
        }
        acc = acc.try_add(&t)?;
    }
    Ok(acc)
}

fn ratfn_det(m: &[Vec<RatFn>]) -> Result<RatFn> {
    let n = m.len();
    if n == 1 {
        return Ok(m[0][0].clone());
    }
    let mut acc = RatFn::from_poly(MPoly::zero(m[0][0].field(), m[0][0].vars()));
    for j in 0..n {
        let minor: Vec<Vec<RatFn>> = m[1..]
            .iter()
            .map(|row| row.iter().enumerate().filter(|(k, _)| *k != j).map(|(_, x)| x.clone()).collect())
            .collect();
        let term = m[0][j].try_mul(&ratfn_det(&minor)?)?;
        acc = if j % 2 == 0 { acc.try_add(&term)? } else { acc.try_sub(&term)? };
    }
    Ok(acc)
}

/// Check (U1) triangularity, (U2) vanishing and (U3) a nonzero Jacobian
/// residue, each independently.
pub fn verify_uniformization_witness(w: &UniformizationWitness, place: &PlaceDesc) -> Result<WitnessCheck> {
    let n = w.algebraic.len();
    if w.polys.len() != n {
        return Err(Error::MalformedWitness(format!("{} polynomials for {n} generators", w.polys.len())));
    }
    if n == 0 {
        return Ok(WitnessCheck { u1: true, u2: true, u3: true, smooth_center: true });
    }
    let field = place.field()?;
    let pvars = place.vars();
    let mut images: Vec<(String, RatFn)> = Vec::new();
    for t in &w.transcendence {
        images.push((t.clone(), RatFn::from_poly(MPoly::var(&field, &pvars, t)?)));
    }
    for (x, eta) in &w.algebraic {
        images.push((x.clone(), eta.extend_vars(&pvars)?));
    }
    for (name, r) in &images {
        if r.is_zero() {
            continue;
        }
        if let ValuationResult::Exact(v) = place.value(r)? {
            if v.is_negative() {
                return Err(Error::MalformedWitness(format!("{name} has negative value {v}")));
            }
        }
    }
    let xs: Vec<&String> = w.algebraic.iter().map(|(x, _)| x).collect();
    let occurs = |f: &MPoly, x: &str| f.vars().iter().position(|v| v == x).is_some_and(|i| f.involves(i));

    let u1 = (0..n).all(|i| (i + 1..n).all(|j| !occurs(&w.polys[i], xs[j])));

    let mut u2 = true;
    for f in &w.polys {
        let r = substitute(f, &images)?;
        if !r.is_zero() && !matches!(place.value(&r)?, ValuationResult::Infinity | ValuationResult::AtLeast(_)) {
            u2 = false;
        }
    }

    let mut jac = Vec::with_capacity(n);
    for f in &w.polys {
        let mut row = Vec::with_capacity(n);
        for x in &xs {
            let d = if occurs(f, x) { f.partial_by_name(x)? } else { MPoly::zero(f.field(), f.vars()) };
            row.push(if d.is_zero() { RatFn::from_poly(MPoly::zero(&field, &pvars)) } else { substitute(&d, &images)? });
        }
        jac.push(row);
    }
    let det = ratfn_det(&jac)?;
    let u3 = if det.is_zero() {
        false
    } else {
        match place.residue(&det)? {
            PlaceResidue::Zero => false,
            PlaceResidue::Pole => return Err(Error::MalformedWitness("Jacobian determinant has a pole".into())),
            PlaceResidue::Value(c) => !c.is_zero(),
            PlaceResidue::Function(r) => !r.is_zero(),
        }
    };
    Ok(WitnessCheck { u1, u2, u3, smooth_center: u1 && u2 && u3 })
}
