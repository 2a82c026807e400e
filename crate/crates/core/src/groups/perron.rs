//! Positive bases for finitely generated ordered groups.
//!
//! Given a finitely generated subgroup `G` of one of the supported families
//! and finitely many positive `α₁..α_ℓ ∈ G`, find a basis `γ₁..γ_ρ` of `G`
//! consisting of positive elements such that every `αᵢ` is a combination of
//! the `γⱼ` with non-negative integer coefficients.
//!
//! Elements are embedded into `ℤ^d` after clearing denominators, the span is
//! brought to row-echelon form, and the basis is then moved by unimodular
//! row operations:
//!
//! * rank one: the positive generator,
//! * lexicographic groups: one triangular shear per convex layer,
//! * `a + b√2`: subtractive Euclid (replace the larger basis element by its
//!   difference with the smaller one) until all targets have non-negative
//!   coordinates, with a bounded brute-force search as fallback.

use std::cmp::Ordering;

use num_integer::Integer;
use num_traits::ToPrimitive;

use super::{quad_sign, rat, GroupElem, Rat};
use crate::error::{Error, Result};

pub const SUBTRACTION_CAP: usize = 10_000;
pub const FALLBACK_ENTRY_BOUND: i64 = 10;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PerronResult {
    /// Positive basis `γ₁..γ_ρ`.
    pub basis: Vec<GroupElem>,
    /// `coeffs[i][j] = n_ij` with `αᵢ = Σⱼ n_ij γⱼ`.
    pub coeffs: Vec<Vec<u64>>,
    /// Unimodular `U` with `γ = U · lattice_basis`.
    pub change_of_basis: Vec<Vec<i64>>,
    /// Echelon basis of the span of the input generators.
    pub lattice_basis: Vec<GroupElem>,
    pub iterations: usize,
    pub used_fallback: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Family {
    Rat,
    Quad,
    Lex(usize),
}

struct Embedding {
    family: Family,
    scale: i128,
}

impl Embedding {
    fn new(elems: &[&GroupElem]) -> Result<Self> {
        let first = elems.first().ok_or_else(|| Error::NotInSpan("empty input".into()))?;
        let family = match first {
            GroupElem::Rat(_) => Family::Rat,
            GroupElem::Quad(..) => Family::Quad,
            GroupElem::Lex(v) => Family::Lex(v.len()),
        };
        let mut scale = 1i128;
        for e in elems {
            match (family, e) {
                (Family::Rat, GroupElem::Rat(q)) => scale = scale.lcm(q.denom()),
                (Family::Quad, GroupElem::Quad(a, b)) => scale = scale.lcm(a.denom()).lcm(b.denom()),
                (Family::Lex(r), GroupElem::Lex(v)) if v.len() == r => {}
                _ => return Err(Error::FamilyMismatch(first.to_string(), e.to_string())),
            }
        }
        Ok(Embedding { family, scale })
    }

    fn to_vec(&self, e: &GroupElem) -> Vec<i128> {
        let s = Rat::from_integer(self.scale);
        match e {
            GroupElem::Rat(q) => vec![(q * s).to_integer()],
            GroupElem::Quad(a, b) => vec![(a * s).to_integer(), (b * s).to_integer()],
            GroupElem::Lex(v) => v.iter().map(|x| *x as i128).collect(),
        }
    }

    fn to_elem(&self, v: &[i128]) -> GroupElem {
        match self.family {
            Family::Rat => GroupElem::Rat(rat(v[0], self.scale)),
            Family::Quad => GroupElem::Quad(rat(v[0], self.scale), rat(v[1], self.scale)),
            Family::Lex(_) => GroupElem::Lex(v.iter().map(|x| *x as i64).collect()),
        }
    }

    fn sign(&self, v: &[i128]) -> Ordering {
        match self.family {
            Family::Rat => v[0].cmp(&0),
            Family::Quad => quad_sign(&Rat::from_integer(v[0]), &Rat::from_integer(v[1])),
            Family::Lex(_) => v.iter().find(|x| **x != 0).map_or(Ordering::Equal, |x| x.cmp(&0)),
        }
    }
}

fn axpy(y: &mut [i128], k: i128, x: &[i128]) {
    for (a, b) in y.iter_mut().zip(x) {
        *a += k * b;
    }
}

/// Row-echelon basis of the integer span of `rows` (pivots strictly increasing,
/// pivot entries positive).
fn echelon(mut rows: Vec<Vec<i128>>, dim: usize) -> Vec<Vec<i128>> {
    let mut r = 0;
    for c in 0..dim {
        loop {
            let pivot = (r..rows.len())
                .filter(|&i| rows[i][c] != 0)
                .min_by_key(|&i| rows[i][c].abs());
            let Some(i0) = pivot else { break };
            rows.swap(r, i0);
            let mut done = true;
            for i in r + 1..rows.len() {
                if rows[i][c] != 0 {
                    let q = Integer::div_floor(&rows[i][c], &rows[r][c]);
                    let pr = rows[r].clone();
                    axpy(&mut rows[i], -q, &pr);
                    if rows[i][c] != 0 {
                        done = false;
                    }
                }
            }
            if done {
                if rows[r][c] < 0 {
                    rows[r].iter_mut().for_each(|x| *x = -*x);
                }
                r += 1;
                break;
            }
        }
        if r == rows.len() {
            break;
        }
    }
    rows.truncate(r);
    rows
}

/// Integer coordinates of `x` in an echelon basis.
fn echelon_coords(basis: &[Vec<i128>], x: &[i128]) -> Option<Vec<i128>> {
    let mut rest = x.to_vec();
    let mut coords = Vec::with_capacity(basis.len());
    for row in basis {
        let p = row.iter().position(|v| *v != 0)?;
        if rest[p] % row[p] != 0 {
            return None;
        }
        let k = rest[p] / row[p];
        axpy(&mut rest, -k, row);
        coords.push(k);
    }
    rest.iter().all(|v| *v == 0).then_some(coords)
}

fn leading_index(coords: &[i128]) -> Option<usize> {
    coords.iter().position(|v| *v != 0)
}

/// Integer determinant by fraction-free (Bareiss) elimination.
pub(crate) fn int_det(m: &[Vec<i64>]) -> i128 {
    let n = m.len();
    if n == 0 {
        return 1;
    }
    let mut a: Vec<Vec<i128>> = m.iter().map(|r| r.iter().map(|x| *x as i128).collect()).collect();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n - 1 {
        if a[k][k] == 0 {
            match (k + 1..n).find(|&i| a[i][k] != 0) {
                Some(i) => {
                    a.swap(k, i);
                    sign = -sign;
                }
                None => return 0,
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
        }
        prev = a[k][k];
    }
    sign * a[n - 1][n - 1]
}

/// Compute a positive basis for the group spanned by `generators` in which
/// every element of `positives` has non-negative integer coordinates.
///
/// The result is checked (unimodularity, positivity, non-negativity, exact
/// reconstruction) before it is returned.
pub fn perron_basis(generators: &[GroupElem], positives: &[GroupElem]) -> Result<PerronResult> {
    let all: Vec<&GroupElem> = generators.iter().chain(positives).collect();
    let emb = Embedding::new(&all)?;
    for a in positives {
        if !a.is_positive() {
            return Err(Error::NotPositive(a.to_string()));
        }
    }
    let dim = match emb.family {
        Family::Rat => 1,
        Family::Quad => 2,
        Family::Lex(r) => r,
    };
    let lattice = echelon(generators.iter().map(|g| emb.to_vec(g)).collect(), dim);
    let rho = lattice.len();

    let mut coords = Vec::with_capacity(positives.len());
    for a in positives {
        let c = echelon_coords(&lattice, &emb.to_vec(a)).ok_or_else(|| Error::NotInSpan(a.to_string()))?;
        coords.push(c);
    }

    let mut basis = lattice.clone();
    let mut u: Vec<Vec<i128>> = (0..rho).map(|i| (0..rho).map(|j| (i == j) as i128).collect()).collect();

    for i in 0..rho {
        if emb.sign(&basis[i]) == Ordering::Less {
            basis[i].iter_mut().for_each(|x| *x = -*x);
            u[i].iter_mut().for_each(|x| *x = -*x);
            coords.iter_mut().for_each(|c| c[i] = -c[i]);
        }
    }

    let mut iterations = 0;
    let mut used_fallback = false;
    match emb.family {
        _ if rho <= 1 => {}
        Family::Lex(_) => {
            for j in 1..rho {
                for f in (0..j).rev() {
                    let mut k = 0i128;
                    for c in coords.iter().filter(|c| leading_index(c) == Some(f)) {
                        if c[j] < 0 {
                            k = k.max(Integer::div_ceil(&(-c[j]), &c[f]));
                        }
                    }
                    if k > 0 {
                        let bj = basis[j].clone();
                        axpy(&mut basis[f], -k, &bj);
                        let uj = u[j].clone();
                        axpy(&mut u[f], -k, &uj);
                        for c in coords.iter_mut() {
                            c[j] += k * c[f];
                        }
                        iterations += 1;
                    }
                }
            }
        }
        Family::Quad | Family::Rat => loop {
            if coords.iter().all(|c| c.iter().all(|v| *v >= 0)) {
                break;
            }
            if iterations == SUBTRACTION_CAP {
                let (b, uu, cc) = brute_force(&emb, &lattice, &coords)?;
                basis = b;
                u = uu;
                coords = cc;
                used_fallback = true;
                break;
            }
            let diff: Vec<i128> = basis[0].iter().zip(&basis[1]).map(|(x, y)| x - y).collect();
            let (big, small) = if emb.sign(&diff) == Ordering::Greater { (0, 1) } else { (1, 0) };
            let bs = basis[small].clone();
            axpy(&mut basis[big], -1, &bs);
            let us = u[small].clone();
            axpy(&mut u[big], -1, &us);
            for c in coords.iter_mut() {
                c[small] += c[big];
            }
            iterations += 1;
        },
    }

    let to_i64 = |x: &i128| x.to_i64().ok_or_else(|| Error::Unsupported("coefficient overflow".into()));
    let result = PerronResult {
        basis: basis.iter().map(|v| emb.to_elem(v)).collect(),
        coeffs: coords
            .iter()
            .map(|c| c.iter().map(|x| x.to_u64().ok_or_else(|| Error::IterationCap(iterations))).collect())
            .collect::<Result<_>>()?,
        change_of_basis: u.iter().map(|r| r.iter().map(to_i64).collect()).collect::<Result<_>>()?,
        lattice_basis: lattice.iter().map(|v| emb.to_elem(v)).collect(),
        iterations,
        used_fallback,
    };
    result.verify(positives)?;
    Ok(result)
}

type Candidate = (Vec<Vec<i128>>, Vec<Vec<i128>>, Vec<Vec<i128>>);

fn brute_force(emb: &Embedding, lattice: &[Vec<i128>], coords: &[Vec<i128>]) -> Result<Candidate> {
    let bound = FALLBACK_ENTRY_BOUND as i128;
    for a in -bound..=bound {
        for b in -bound..=bound {
            for c in -bound..=bound {
                for d in -bound..=bound {
                    let det = a * d - b * c;
                    if det.abs() != 1 {
                        continue;
                    }
                    let rows = [[a, b], [c, d]];
                    let basis: Vec<Vec<i128>> = rows
                        .iter()
                        .map(|r| (0..lattice[0].len()).map(|k| r[0] * lattice[0][k] + r[1] * lattice[1][k]).collect())
                        .collect();
                    if basis.iter().any(|v| emb.sign(v) != Ordering::Greater) {
                        continue;
                    }
                    // new coords = old coords · M⁻¹, M⁻¹ = det·[[d,-b],[-c,a]]
                    let new: Vec<Vec<i128>> = coords
                        .iter()
                        .map(|x| vec![det * (x[0] * d - x[1] * c), det * (-x[0] * b + x[1] * a)])
                        .collect();
                    if new.iter().all(|x| x.iter().all(|v| *v >= 0)) {
                        let u = rows.iter().map(|r| r.to_vec()).collect();
                        return Ok((basis, u, new));
                    }
                }
            }
        }
    }
    Err(Error::IterationCap(SUBTRACTION_CAP))
}

impl PerronResult {
    /// Check every postcondition against the targets `positives`.
    pub fn verify(&self, positives: &[GroupElem]) -> Result<()> {
        let rho = self.basis.len();
        let fail = |msg: String| Err(Error::Precondition(format!("Perron postcondition: {msg}")));
        if self.change_of_basis.len() != rho || self.lattice_basis.len() != rho {
            return fail("dimension mismatch".into());
        }
        if int_det(&self.change_of_basis).abs() != 1 {
            return fail("change of basis is not unimodular".into());
        }
        for (i, g) in self.basis.iter().enumerate() {
            if !g.is_positive() {
                return fail(format!("basis element {g} is not positive"));
            }
            let mut acc = self.lattice_basis[0].int_scale(0);
            for (k, b) in self.lattice_basis.iter().enumerate() {
                acc = acc.try_add(&b.int_scale(self.change_of_basis[i][k]))?;
            }
            if acc != *g {
                return fail(format!("basis element {g} differs from U·lattice ({acc})"));
            }
        }
        if self.coeffs.len() != positives.len() {
            return fail("coefficient rows".into());
        }
        for (alpha, row) in positives.iter().zip(&self.coeffs) {
            let mut acc = alpha.int_scale(0);
            for (n, g) in row.iter().zip(&self.basis) {
                let n = i64::try_from(*n).map_err(|_| Error::Unsupported("coefficient overflow".into()))?;
                acc = acc.try_add(&g.int_scale(n))?;
            }
            if acc != *alpha {
                return fail(format!("{alpha} reconstructs to {acc}"));
            }
        }
        Ok(())
    }
}
