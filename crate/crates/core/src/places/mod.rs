//! Places of rational function fields `K(x₁,…,xₙ)`: evaluation, monomial,
//! series embeddings and composites.

mod witness;

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::fields::{FieldDesc, FieldElem, MPoly, RatFn};
use crate::groups::{GroupDesc, GroupElem};
use crate::series::{Series, Stream, ValuationResult};

pub use witness::{substitute, verify_uniformization_witness, UniformizationWitness, WitnessCheck};

/// Image of a variable under a series embedding.
#[derive(Clone, Debug, PartialEq)]
pub enum Embedding {
    Series(Series),
    Stream(Stream),
}

impl Embedding {
    fn field(&self) -> Result<FieldDesc> {
        match self {
            Embedding::Series(s) => Ok(s.field().clone()),
            Embedding::Stream(s) => s.field(),
        }
    }

    fn group(&self) -> Result<GroupDesc> {
        match self {
            Embedding::Series(s) => Ok(s.group().clone()),
            Embedding::Stream(s) => s.group(),
        }
    }

    fn at(&self, prec: &GroupElem) -> Result<Series> {
        match self {
            Embedding::Series(s) => Ok(s.clone()),
            Embedding::Stream(st) => match st.exact()? {
                Some(s) => Ok(s),
                None => st.expand(prec),
            },
        }
    }

    fn refinable(&self) -> bool {
        matches!(self, Embedding::Stream(_))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum PlaceDesc {
    /// `xᵢ ↦ aᵢ`: the order of vanishing at the point.
    Eval { field: FieldDesc, point: Vec<(String, FieldElem)> },
    /// Values `v xᵢ` for value variables; residue variables `yⱼ ↦ zⱼ`.
    Monomial { field: FieldDesc, group: GroupDesc, values: Vec<(String, GroupElem)>, residues: Vec<(String, String)> },
    SeriesEmbed { assignments: Vec<(String, Embedding)>, declared_dim: Option<usize> },
    Compose(Box<PlaceDesc>, Box<PlaceDesc>),
}

/// Residue of a function under a place.
#[derive(Clone, Debug, PartialEq)]
pub enum PlaceResidue {
    Zero,
    Pole,
    Value(FieldElem),
    Function(RatFn),
}

impl fmt::Display for PlaceResidue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PlaceResidue::Zero => write!(f, "0"),
            PlaceResidue::Pole => write!(f, "inf"),
            PlaceResidue::Value(c) => write!(f, "{c}"),
            PlaceResidue::Function(r) => write!(f, "{r}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlaceInvariants {
    pub rank: usize,
    pub rational_rank: usize,
    pub dim: usize,
    pub ambient_trdeg: usize,
    pub is_abhyankar: bool,
    pub is_maximal_rank: bool,
    pub value_group_finitely_generated: bool,
    pub residue_field_finitely_generated: bool,
}

/// Value components, compared lexicographically.
type Val = Vec<GroupElem>;

/// Value of an element together with the residue of `f/u` for a fixed
/// element `u` of the same value.
#[derive(Clone, Debug)]
enum Lead {
    Zero,
    Bound(Val),
    Exact(Val, RatFn),
}

const SERIES_LEVELS: [i64; 6] = [8, 16, 32, 64, 128, 256];

fn distinct(names: impl IntoIterator<Item = String>) -> Result<()> {
    let mut seen = std::collections::BTreeSet::new();
    for n in names {
        if !seen.insert(n.clone()) {
            return Err(Error::InvalidParams(format!("variable {n} assigned twice")));
        }
    }
    Ok(())
}

/// Width of a group inside a lex product of copies of ℤ.
fn lex_width(g: &GroupDesc) -> Option<usize> {
    match g {
        GroupDesc::LexZ(r) => Some(*r),
        _ if *g == GroupDesc::integers() => Some(1),
        _ => None,
    }
}

fn val_sign(v: &Val) -> Ordering {
    v.iter().map(|g| g.signum()).find(|o| *o != Ordering::Equal).unwrap_or(Ordering::Equal)
}

fn val_sub(a: &Val, b: &Val) -> Result<Val> {
    a.iter().zip(b).map(|(x, y)| x.try_sub(y)).collect()
}

fn val_to_elem(v: &Val) -> Result<GroupElem> {
    if v.len() == 1 {
        return Ok(v[0].clone());
    }
    let mut out = Vec::new();
    for g in v {
        match g {
            GroupElem::Lex(c) => out.extend(c),
            GroupElem::Rat(q) if q.is_integer() => {
                out.push(i64::try_from(q.to_integer()).map_err(|_| Error::Unsupported("value overflows i64".into()))?)
            }
            other => return Err(Error::Unsupported(format!("composite value component {other} is not integral"))),
        }
    }
    Ok(GroupElem::Lex(out))
}

fn const_ratfn(c: FieldElem) -> RatFn {
    let f = c.desc();
    RatFn::from_poly(MPoly::constant(&f, &[], c))
}

/// The constant value of `r`, when `r` is constant.
fn constant_value(r: &RatFn) -> Option<FieldElem> {
    if r.num.is_zero() {
        return Some(r.field().zero());
    }
    let (e, d) = r.den.terms().last()?;
    let k = r.num.terms().find(|(m, _)| *m == e)?.1.div(d).ok()?;
    (r.den.scale(&k) == r.num).then_some(k)
}

/// Re-express `g` in the variable list `vars`, failing only on variables
/// that actually occur.
fn restrict(g: &MPoly, vars: &[String]) -> Result<MPoly> {
    let mut map = Vec::with_capacity(g.vars().len());
    for (i, v) in g.vars().iter().enumerate() {
        match vars.iter().position(|w| w == v) {
            Some(k) => map.push(Some(k)),
            None if !g.involves(i) => map.push(None),
            None => return Err(Error::UnknownVariable(v.clone())),
        }
    }
    let terms = g.terms().map(|(e, c)| {
        let mut ne = vec![0u32; vars.len()];
        for (i, x) in e.iter().enumerate() {
            if let Some(k) = map[i] {
                ne[k] = *x;
            }
        }
        (ne, c.clone())
    });
    Ok(MPoly::from_terms(g.field(), vars, terms))
}

/// Map a coefficient into `target`, allowing prime-field elements to move
/// into an extension.
fn embed_coeff(c: &FieldElem, target: &FieldDesc) -> Result<FieldElem> {
    if c.desc() == *target {
        return Ok(c.clone());
    }
    if c.characteristic() == target.characteristic() && c.in_prime_field() {
        return Ok(target.from_int(c.fin_coeffs().first().copied().unwrap_or(0) as i64));
    }
    Err(Error::FieldMismatch(c.desc().to_string(), target.to_string()))
}

impl PlaceDesc {
    pub fn eval(field: &FieldDesc, point: Vec<(String, FieldElem)>) -> Result<Self> {
        distinct(point.iter().map(|(n, _)| n.clone()))?;
        if point.is_empty() {
            return Err(Error::InvalidParams("evaluation place needs at least one variable".into()));
        }
        for (_, a) in &point {
            if a.desc() != *field {
                return Err(Error::FieldMismatch(a.desc().to_string(), field.to_string()));
            }
        }
        Ok(PlaceDesc::Eval { field: field.clone(), point })
    }

    pub fn monomial(
        field: &FieldDesc,
        group: &GroupDesc,
        values: Vec<(String, GroupElem)>,
        residues: Vec<(String, String)>,
    ) -> Result<Self> {
        distinct(values.iter().map(|(n, _)| n.clone()).chain(residues.iter().map(|(n, _)| n.clone())))?;
        distinct(residues.iter().map(|(_, z)| z.clone()))?;
        for (n, v) in &values {
            group.check(v)?;
            if !v.is_positive() {
                return Err(Error::InvalidParams(format!("value of {n} must be positive, got {v}")));
            }
        }
        let vs: Vec<GroupElem> = values.iter().map(|(_, v)| v.clone()).collect();
        if rational_rank_of(&vs) != vs.len() {
            return Err(Error::InvalidParams("assigned values are not rationally independent".into()));
        }
        Ok(PlaceDesc::Monomial { field: field.clone(), group: group.clone(), values, residues })
    }

    /// The trivial place on `K(vars)`: every nonzero element has value 0.
    pub fn trivial(field: &FieldDesc, vars: &[String]) -> Self {
        PlaceDesc::Monomial {
            field: field.clone(),
            group: GroupDesc::integers(),
            values: Vec::new(),
            residues: vars.iter().map(|v| (v.clone(), v.clone())).collect(),
        }
    }

    pub fn series_embed(assignments: Vec<(String, Embedding)>, declared_dim: Option<usize>) -> Result<Self> {
        distinct(assignments.iter().map(|(n, _)| n.clone()))?;
        let Some((_, first)) = assignments.first() else {
            return Err(Error::InvalidParams("series embedding needs at least one variable".into()));
        };
        let (f, g) = (first.field()?, first.group()?);
        for (_, e) in &assignments {
            if e.field()? != f {
                return Err(Error::FieldMismatch(e.field()?.to_string(), f.to_string()));
            }
            if e.group()? != g {
                return Err(Error::FamilyMismatch(e.group()?.to_string(), g.to_string()));
            }
        }
        Ok(PlaceDesc::SeriesEmbed { assignments, declared_dim })
    }

    /// `first` followed by `second` on the residue field of `first`.
    pub fn compose(first: PlaceDesc, second: PlaceDesc) -> Result<Self> {
        let mut a = first.residue_vars()?;
        let mut b = second.vars();
        a.sort();
        b.sort();
        if a != b {
            return Err(Error::InvalidParams(format!(
                "second place acts on [{}] but the residue field has indeterminates [{}]",
                b.join(","),
                a.join(",")
            )));
        }
        if lex_width(&first.group()?).is_none() || lex_width(&second.group()?).is_none() {
            return Err(Error::Unsupported("composites need integer or lex value groups".into()));
        }
        Ok(PlaceDesc::Compose(Box::new(first), Box::new(second)))
    }

    /// Variables of the function field the place acts on.
    pub fn vars(&self) -> Vec<String> {
        match self {
            PlaceDesc::Eval { point, .. } => point.iter().map(|(n, _)| n.clone()).collect(),
            PlaceDesc::Monomial { values, residues, .. } => {
                values.iter().map(|(n, _)| n.clone()).chain(residues.iter().map(|(n, _)| n.clone())).collect()
            }
            PlaceDesc::SeriesEmbed { assignments, .. } => assignments.iter().map(|(n, _)| n.clone()).collect(),
            PlaceDesc::Compose(a, _) => a.vars(),
        }
    }

    /// Indeterminates of the residue field description.
    pub fn residue_vars(&self) -> Result<Vec<String>> {
        Ok(match self {
            PlaceDesc::Eval { point, .. } if point.len() == 1 => Vec::new(),
            PlaceDesc::Eval { point, .. } => point.iter().map(|(n, _)| n.clone()).collect(),
            PlaceDesc::Monomial { residues, .. } => residues.iter().map(|(_, z)| z.clone()).collect(),
            PlaceDesc::SeriesEmbed { .. } => Vec::new(),
            PlaceDesc::Compose(_, b) => b.residue_vars()?,
        })
    }

    pub fn field(&self) -> Result<FieldDesc> {
        match self {
            PlaceDesc::Eval { field, .. } | PlaceDesc::Monomial { field, .. } => Ok(field.clone()),
            PlaceDesc::SeriesEmbed { assignments, .. } => assignments[0].1.field(),
            PlaceDesc::Compose(a, _) => a.field(),
        }
    }

    /// Ambient value group; lex product for composites.
    pub fn group(&self) -> Result<GroupDesc> {
        match self {
            PlaceDesc::Eval { .. } => Ok(GroupDesc::integers()),
            PlaceDesc::Monomial { group, .. } => Ok(group.clone()),
            PlaceDesc::SeriesEmbed { assignments, .. } => assignments[0].1.group(),
            PlaceDesc::Compose(a, b) => {
                let w = lex_width(&a.group()?).zip(lex_width(&b.group()?));
                let (x, y) = w.ok_or_else(|| Error::Unsupported("composite of non-integer groups".into()))?;
                GroupDesc::lex(x + y)
            }
        }
    }

    fn poly_lead(&self, g: &MPoly) -> Result<Lead> {
        if g.is_zero() {
            return Ok(Lead::Zero);
        }
        match self {
            PlaceDesc::Eval { field, point } => eval_lead(field, point, g),
            PlaceDesc::Monomial { field, group, values, residues } => monomial_lead(field, group, values, residues, g),
            PlaceDesc::SeriesEmbed { assignments, .. } => series_lead(assignments, g),
            PlaceDesc::Compose(a, b) => {
                let l = a.poly_lead(g)?;
                b.compose_lead(l)
            }
        }
    }

    fn compose_lead(&self, first: Lead) -> Result<Lead> {
        match first {
            Lead::Zero => Ok(Lead::Zero),
            Lead::Bound(_) => Err(Error::Undecidable("value under the first place is only bounded".into())),
            Lead::Exact(v1, r) => match self.ratfn_lead(&r)? {
                Lead::Exact(v2, r2) => {
                    let mut v = v1;
                    v.extend(v2);
                    Ok(Lead::Exact(v, r2))
                }
                _ => Err(Error::Precondition("residue of a nonzero element vanished".into())),
            },
        }
    }

    fn ratfn_lead(&self, f: &RatFn) -> Result<Lead> {
        let n = self.poly_lead(&f.num)?;
        let d = self.poly_lead(&f.den)?;
        match (n, d) {
            (_, Lead::Zero) => Err(Error::Pole),
            (_, Lead::Bound(b)) => Err(Error::Undecidable(format!("denominator value >= {}", val_to_elem(&b)?))),
            (Lead::Zero, _) => Ok(Lead::Zero),
            (Lead::Bound(a), Lead::Exact(b, _)) => Ok(Lead::Bound(val_sub(&a, &b)?)),
            (Lead::Exact(a, ra), Lead::Exact(b, rb)) => Ok(Lead::Exact(val_sub(&a, &b)?, ra.try_div(&rb)?)),
        }
    }

    /// The value `v_P(f)`.
    pub fn value(&self, f: &RatFn) -> Result<ValuationResult> {
        if f.is_zero() {
            return Err(Error::Precondition("value of the zero function".into()));
        }
        Ok(match self.ratfn_lead(f)? {
            Lead::Zero => ValuationResult::Infinity,
            Lead::Bound(v) => ValuationResult::AtLeast(val_to_elem(&v)?),
            Lead::Exact(v, _) => ValuationResult::Exact(val_to_elem(&v)?),
        })
    }

    /// The residue `fP`.
    pub fn residue(&self, f: &RatFn) -> Result<PlaceResidue> {
        match self.ratfn_lead(f)? {
            Lead::Zero => Ok(PlaceResidue::Zero),
            Lead::Bound(v) => match val_sign(&v) {
                Ordering::Greater => Ok(PlaceResidue::Zero),
                _ => Err(Error::Undecidable(format!("value >= {} only", val_to_elem(&v)?))),
            },
            Lead::Exact(v, r) => Ok(match val_sign(&v) {
                Ordering::Greater => PlaceResidue::Zero,
                Ordering::Less => PlaceResidue::Pole,
                Ordering::Equal => match constant_value(&r) {
                    Some(c) => PlaceResidue::Value(c),
                    None => PlaceResidue::Function(r),
                },
            }),
        }
    }

    pub fn invariants(&self, ambient_trdeg: usize) -> Result<PlaceInvariants> {
        let (rank, rr, dim, vfg, rfg) = self.raw_invariants()?;
        if ambient_trdeg < dim + rr {
            return Err(Error::AbhyankarViolated { ambient: ambient_trdeg, dim, rr });
        }
        Ok(PlaceInvariants {
            rank,
            rational_rank: rr,
            dim,
            ambient_trdeg,
            is_abhyankar: ambient_trdeg == dim + rr,
            is_maximal_rank: rank == ambient_trdeg,
            value_group_finitely_generated: vfg,
            residue_field_finitely_generated: rfg,
        })
    }

    fn raw_invariants(&self) -> Result<(usize, usize, usize, bool, bool)> {
        Ok(match self {
            PlaceDesc::Eval { point, .. } => (1, 1, point.len() - 1, true, true),
            PlaceDesc::Monomial { group, values, residues, .. } => {
                let rr = values.len();
                let rank = if matches!(group, GroupDesc::LexZ(_)) { rr } else { rr.min(1) };
                (rank, rr, residues.len(), true, true)
            }
            PlaceDesc::SeriesEmbed { assignments, declared_dim } => {
                let group = assignments[0].1.group()?;
                let gi = group.invariants();
                let (mut rr, mut dim, mut vfg, mut rfg) = (0usize, 0usize, true, true);
                let mut custom = false;
                for (_, e) in assignments {
                    match e {
                        Embedding::Stream(s) => {
                            let m = s.meta();
                            rr = rr.max(m.rational_rank);
                            dim = dim.max(m.residue_dim);
                            vfg &= m.value_group_finitely_generated;
                            rfg &= m.residue_finitely_generated;
                        }
                        Embedding::Series(_) => {
                            custom = true;
                            rr = rr.max(gi.rational_rank.min(1));
                        }
                    }
                }
                if custom {
                    let d = declared_dim.ok_or(Error::UndeclaredTranscendence)?;
                    dim = dim.max(d);
                }
                (gi.rank.min(rr.max(1)), rr, dim, vfg, rfg)
            }
            PlaceDesc::Compose(a, b) => {
                let (ra, rra, _, va, fa) = a.raw_invariants()?;
                let (rb, rrb, db, vb, fb) = b.raw_invariants()?;
                (ra + rb, rra + rrb, db, va && vb, fa && fb)
            }
        })
    }
}

/// Rational rank of a finite set of values.
fn rational_rank_of(vs: &[GroupElem]) -> usize {
    use crate::groups::Rat;
    use num_traits::Zero;
    let rows: Vec<Vec<Rat>> = vs
        .iter()
        .map(|v| match v {
            GroupElem::Rat(q) => vec![*q],
            GroupElem::Quad(a, b) => vec![*a, *b],
            GroupElem::Lex(c) => c.iter().map(|x| Rat::from_integer(*x as i128)).collect(),
        })
        .collect();
    let mut m = rows;
    let cols = m.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for c in 0..cols {
        let Some(piv) = (rank..m.len()).find(|&r| !m[r][c].is_zero()) else { continue };
        m.swap(rank, piv);
        for r in 0..m.len() {
            if r != rank && !m[r][c].is_zero() {
                let f = m[r][c] / m[rank][c];
                for k in 0..cols {
                    let d = f * m[rank][k];
                    m[r][k] -= d;
                }
            }
        }
        rank += 1;
    }
    rank
}

fn monomial_lead(
    field: &FieldDesc,
    group: &GroupDesc,
    values: &[(String, GroupElem)],
    residues: &[(String, String)],
    g: &MPoly,
) -> Result<Lead> {
    let names: Vec<String> = values.iter().map(|(n, _)| n.clone()).chain(residues.iter().map(|(n, _)| n.clone())).collect();
    let g = restrict(g, &names)?;
    let k = values.len();
    let mut best: Option<GroupElem> = None;
    let mut collect: BTreeMap<Vec<u32>, FieldElem> = BTreeMap::new();
    for (e, c) in g.terms() {
        let mut v = group.zero();
        for (i, (_, vi)) in values.iter().enumerate() {
            v = v.try_add(&vi.int_scale(e[i] as i64))?;
        }
        let better = match &best {
            None => true,
            Some(b) => match v.cmp_checked(b)? {
                Ordering::Less => true,
                Ordering::Equal => false,
                Ordering::Greater => continue,
            },
        };
        if better {
            best = Some(v);
            collect.clear();
        }
        let z = e[k..].to_vec();
        let entry = collect.entry(z).or_insert_with(|| field.zero());
        *entry = entry.try_add(c)?;
    }
    let zvars: Vec<String> = residues.iter().map(|(_, z)| z.clone()).collect();
    let r = MPoly::from_terms(field, &zvars, collect);
    if r.is_zero() {
        return Err(Error::Hypothesis("minimal-value monomials cancel in the residue".into()));
    }
    Ok(Lead::Exact(vec![best.expect("nonzero polynomial")], RatFn::from_poly(r)))
}

fn eval_lead(field: &FieldDesc, point: &[(String, FieldElem)], g: &MPoly) -> Result<Lead> {
    let names: Vec<String> = point.iter().map(|(n, _)| n.clone()).collect();
    let g = restrict(g, &names)?;
    // g(u + a), with uᵢ named like xᵢ
    let shifted: Vec<MPoly> = point
        .iter()
        .map(|(n, a)| Ok(MPoly::var(field, &names, n)?.try_add(&MPoly::constant(field, &names, a.clone()))?))
        .collect::<Result<_>>()?;
    let mut h = MPoly::zero(field, &names);
    for (e, c) in g.terms() {
        let mut t = MPoly::constant(field, &names, c.clone());
        for (i, k) in e.iter().enumerate() {
            if *k > 0 {
                t = t.try_mul(&shifted[i].pow(*k))?;
            }
        }
        h = h.try_add(&t)?;
    }
    if h.is_zero() {
        return Ok(Lead::Zero);
    }
    let d = h.terms().map(|(e, _)| e.iter().sum::<u32>()).min().expect("nonzero");
    let init = MPoly::from_terms(field, &names, h.terms().filter(|(e, _)| e.iter().sum::<u32>() == d).map(|(e, c)| (e.clone(), c.clone())));
    let residue = if names.len() == 1 {
        const_ratfn(init.terms().next().expect("nonzero").1.clone())
    } else {
        let mut e = vec![0u32; names.len()];
        e[0] = d;
        RatFn::new(init, MPoly::monomial(field, &names, e, field.one()))?
    };
    Ok(Lead::Exact(vec![GroupElem::Rat(crate::groups::rat_int(d as i128))], residue))
}

fn eval_series(g: &MPoly, point: &[(String, Series)], field: &FieldDesc, group: &GroupDesc) -> Result<Series> {
    let names: Vec<String> = point.iter().map(|(n, _)| n.clone()).collect();
    let g = restrict(g, &names)?;
    let mut powers: Vec<Vec<Series>> = point.iter().map(|(_, s)| vec![Series::one(field, group), s.clone()]).collect();
    let mut acc = Series::zero(field, group);
    for (e, c) in g.terms() {
        let mut t = Series::constant(group, embed_coeff(c, field)?);
        for (i, k) in e.iter().enumerate() {
            let k = *k as usize;
            if k == 0 {
                continue;
            }
            while powers[i].len() <= k {
                let next = powers[i].last().expect("nonempty").mul(&point[i].1)?;
                powers[i].push(next);
            }
            t = t.mul(&powers[i][k])?;
        }
        acc = acc.add(&t)?;
    }
    Ok(acc)
}

fn series_lead(assignments: &[(String, Embedding)], g: &MPoly) -> Result<Lead> {
    let field = assignments[0].1.field()?;
    let group = assignments[0].1.group()?;
    let refinable = assignments.iter().any(|(_, e)| e.refinable());
    let mut last = None;
    for level in SERIES_LEVELS {
        let prec = group.from_int(level);
        let point: Vec<(String, Series)> = assignments.iter().map(|(n, e)| Ok((n.clone(), e.at(&prec)?))).collect::<Result<_>>()?;
        let s = eval_series(g, &point, &field, &group)?;
        match s.valuation() {
            ValuationResult::Infinity => return Ok(Lead::Zero),
            ValuationResult::Exact(v) => {
                let c = s.leading_coeff().expect("exact value").clone();
                return Ok(Lead::Exact(vec![v], const_ratfn(c)));
            }
            ValuationResult::AtLeast(b) => last = Some(b),
        }
        if !refinable {
            break;
        }
    }
    Ok(Lead::Bound(vec![last.expect("at least one level")]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{rat, rat_int};

    fn names(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    fn var(f: &FieldDesc, vars: &[String], n: &str) -> RatFn {
        RatFn::from_poly(MPoly::var(f, vars, n).unwrap())
    }

    #[test]
    fn irrational_monomial_place() {
        let q = FieldDesc::Rational;
        let g = GroupDesc::QuadSqrt2;
        let p = PlaceDesc::monomial(
            &q,
            &g,
            vec![("x1".into(), GroupElem::Quad(rat_int(1), rat_int(0))), ("x2".into(), GroupElem::Quad(rat_int(0), rat_int(1)))],
            vec![],
        )
        .unwrap();
        let v = names(&["x1", "x2"]);
        let f = var(&q, &v, "x1").powi(3).unwrap().try_div(&var(&q, &v, "x2").powi(2).unwrap()).unwrap();
        assert_eq!(p.value(&f).unwrap(), ValuationResult::Exact(GroupElem::Quad(rat_int(3), rat_int(-2))));
        assert_eq!(p.residue(&f).unwrap(), PlaceResidue::Zero);
        let h = var(&q, &v, "x1").try_div(&var(&q, &v, "x2")).unwrap();
        assert_eq!(p.residue(&h).unwrap(), PlaceResidue::Pole);
        let inv = p.invariants(2).unwrap();
        assert_eq!((inv.rank, inv.rational_rank, inv.dim, inv.is_abhyankar), (1, 2, 0, true));
    }

    #[test]
    fn eval_place_residue() {
        let q = FieldDesc::Rational;
        let v = names(&["x"]);
        let p = PlaceDesc::eval(&q, vec![("x".into(), q.from_int(2))]).unwrap();
        let x = var(&q, &v, "x");
        let one = RatFn::from_poly(MPoly::constant(&q, &v, q.one()));
        let f = x.powi(2).unwrap().try_sub(&one).unwrap().try_div(&x.try_add(&one).unwrap()).unwrap();
        assert_eq!(p.residue(&f).unwrap(), PlaceResidue::Value(q.from_int(1)));
        let two = RatFn::from_poly(MPoly::constant(&q, &v, q.from_int(2)));
        let g = x.try_sub(&two).unwrap().powi(3).unwrap();
        assert_eq!(p.value(&g).unwrap(), ValuationResult::Exact(GroupElem::Rat(rat_int(3))));
    }

    #[test]
    fn residue_variable() {
        let q = FieldDesc::Rational;
        let p = PlaceDesc::monomial(&q, &GroupDesc::integers(), vec![("x1".into(), GroupElem::Rat(rat_int(1)))], vec![("y".into(), "z".into())]).unwrap();
        let v = names(&["x1", "y"]);
        let f = var(&q, &v, "y").powi(2).unwrap().try_add(&var(&q, &v, "x1")).unwrap();
        let PlaceResidue::Function(r) = p.residue(&f).unwrap() else { panic!() };
        assert_eq!(r.to_string(), "z^2");
    }

    #[test]
    fn lex_composite() {
        let q = FieldDesc::Rational;
        let z = GroupDesc::integers();
        let one = GroupElem::Rat(rat_int(1));
        let a = PlaceDesc::monomial(&q, &z, vec![("x1".into(), one.clone())], vec![("x2".into(), "x2".into())]).unwrap();
        let b = PlaceDesc::monomial(&q, &z, vec![("x2".into(), one)], vec![]).unwrap();
        let p = PlaceDesc::compose(a, b).unwrap();
        let v = names(&["x1", "x2"]);
        let f = var(&q, &v, "x1").try_div(&var(&q, &v, "x2").powi(5).unwrap()).unwrap();
        assert_eq!(p.value(&f).unwrap(), ValuationResult::Exact(GroupElem::Lex(vec![1, -5])));
        assert_eq!(p.value(&var(&q, &v, "x2")).unwrap(), ValuationResult::Exact(GroupElem::Lex(vec![0, 1])));
        let inv = p.invariants(2).unwrap();
        assert!(inv.is_maximal_rank);
        assert_eq!(inv.rank, 2);
    }

    #[test]
    fn cusp_value() {
        let q = FieldDesc::Rational;
        let half = GroupDesc::one_over(2).unwrap();
        let t = |e| Series::monomial(&half, q.one(), GroupElem::Rat(e));
        let p = PlaceDesc::series_embed(
            vec![("x".into(), Embedding::Series(t(rat_int(1)))), ("y".into(), Embedding::Series(t(rat(3, 2))))],
            Some(0),
        )
        .unwrap();
        let v = names(&["x", "y"]);
        assert_eq!(p.value(&var(&q, &v, "y")).unwrap(), ValuationResult::Exact(GroupElem::Rat(rat(3, 2))));
        let rel = var(&q, &v, "y").powi(2).unwrap().try_sub(&var(&q, &v, "x").powi(3).unwrap()).unwrap();
        assert_eq!(p.value(&rel).unwrap(), ValuationResult::Infinity);
    }

    #[test]
    fn dependent_values_rejected() {
        let q = FieldDesc::Rational;
        let z = GroupDesc::integers();
        let r = PlaceDesc::monomial(&q, &z, vec![("x1".into(), z.from_int(1)), ("x2".into(), z.from_int(2))], vec![]);
        assert!(matches!(r, Err(Error::InvalidParams(_))));
    }
}
