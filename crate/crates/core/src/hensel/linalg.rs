//! Determinants and linear solves over truncated series.

use crate::error::{Error, Result};
use crate::groups::GroupElem;
use crate::series::{Precision, Series, ValuationResult};

fn check_square(m: &[Vec<Series>]) -> Result<usize> {
    let n = m.len();
    if n == 0 || m.iter().any(|r| r.len() != n) {
        return Err(Error::Precondition("matrix must be square and nonempty".into()));
    }
    Ok(n)
}

/// Leibniz expansion for small matrices.
fn leibniz(m: &[Vec<Series>]) -> Result<Series> {
    let n = m.len();
    let (field, group) = (m[0][0].field(), m[0][0].group());
    let mut acc = Series::zero(field, group);
    let mut perm: Vec<usize> = (0..n).collect();
    let mut c = vec![0usize; n];
    let mut sign = 1i64;
    let term = |perm: &[usize], sign: i64, acc: &mut Series| -> Result<()> {
        let mut t = Series::constant(group, field.from_int(sign));
        for (i, &j) in perm.iter().enumerate() {
            t = t.mul(&m[i][j])?;
        }
        *acc = acc.add(&t)?;
        Ok(())
    };
    term(&perm, sign, &mut acc)?;
    // Heap's algorithm; each swap flips the sign
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                perm.swap(0, i);
            } else {
                perm.swap(c[i], i);
            }
            sign = -sign;
            term(&perm, sign, &mut acc)?;
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    Ok(acc)
}

/// Division-free determinant (Berkowitz) for larger matrices.
fn berkowitz(m: &[Vec<Series>]) -> Result<Series> {
    let n = m.len();
    let (field, group) = (m[0][0].field(), m[0][0].group());
    let one = Series::one(field, group);
    let mut v = vec![one.clone()];
    for r in 0..n {
        let mut t = vec![one.clone(), m[r][r].neg()];
        // column C = m[0..r][r], row R = m[r][0..r]
        let mut w: Vec<Series> = (0..r).map(|i| m[i][r].clone()).collect();
        for _ in 0..r {
            let mut rc = Series::zero(field, group);
            for (j, wj) in w.iter().enumerate() {
                rc = rc.add(&m[r][j].mul(wj)?)?;
            }
            t.push(rc.neg());
            let mut nw = Vec::with_capacity(r);
            for i in 0..r {
                let mut s = Series::zero(field, group);
                for (j, wj) in w.iter().enumerate() {
                    s = s.add(&m[i][j].mul(wj)?)?;
                }
                nw.push(s);
            }
            w = nw;
        }
        let mut nv = Vec::with_capacity(r + 2);
        for i in 0..r + 2 {
            let mut s = Series::zero(field, group);
            for (j, vj) in v.iter().enumerate() {
                if i >= j && i - j < t.len() {
                    s = s.add(&t[i - j].mul(vj)?)?;
                }
            }
            nv.push(s);
        }
        v = nv;
    }
    let det = v.pop().expect("nonempty");
    Ok(if n % 2 == 1 { det.neg() } else { det })
}

pub fn series_det(m: &[Vec<Series>]) -> Result<Series> {
    let n = check_square(m)?;
    if n <= 4 {
        leibniz(m)
    } else {
        berkowitz(m)
    }
}

/// Solve `m·x = b` to absolute precision `target`.
///
/// Cramer's rule for `n ≤ 4`, Gaussian elimination with minimal-value
/// pivots otherwise.
pub fn series_solve(m: &[Vec<Series>], b: &[Series], target: &GroupElem) -> Result<Vec<Series>> {
    let n = check_square(m)?;
    if b.len() != n {
        return Err(Error::Precondition("right-hand side dimension mismatch".into()));
    }
    if n <= 4 {
        let d = leibniz(m)?;
        if matches!(d.valuation(), ValuationResult::Infinity) {
            return Err(Error::SingularJacobian);
        }
        let dinv = d.invert(Some(target))?.with_precision(Precision::Infinite);
        let cut = Precision::Finite(target.clone());
        (0..n)
            .map(|i| {
                let mi: Vec<Vec<Series>> = m
                    .iter()
                    .zip(b)
                    .map(|(row, bi)| row.iter().enumerate().map(|(j, x)| if j == i { bi.clone() } else { x.clone() }).collect())
                    .collect();
                Ok(leibniz(&mi)?.mul(&dinv)?.truncate(&cut))
            })
            .collect()
    } else {
        eliminate(m, b, target)
    }
}

fn eliminate(m: &[Vec<Series>], b: &[Series], target: &GroupElem) -> Result<Vec<Series>> {
    let n = m.len();
    let cut = Precision::Finite(target.clone());
    let mut a: Vec<Vec<Series>> = m
        .iter()
        .zip(b)
        .map(|(row, bi)| row.iter().chain(std::iter::once(bi)).map(|x| x.with_precision(Precision::Infinite)).collect())
        .collect();
    for col in 0..n {
        let mut best: Option<(usize, GroupElem)> = None;
        for (r, row) in a.iter().enumerate().skip(col) {
            if let ValuationResult::Exact(g) = row[col].truncate(&cut).valuation() {
                if best.as_ref().is_none_or(|(_, bg)| g < *bg) {
                    best = Some((r, g));
                }
            }
        }
        let Some((piv, _)) = best else {
            return Err(Error::SingularJacobian);
        };
        a.swap(col, piv);
        let inv = a[col][col].invert(Some(target))?.with_precision(Precision::Infinite);
        let prow: Vec<Series> = a[col].iter().map(|x| x.mul(&inv).map(|y| y.truncate(&cut).with_precision(Precision::Infinite))).collect::<Result<_>>()?;
        for r in 0..n {
            if r == col {
                continue;
            }
            let f = a[r][col].clone();
            if f.terms().is_empty() {
                continue;
            }
            for c in col..=n {
                a[r][c] = a[r][c].sub(&f.mul(&prow[c])?)?.truncate(&cut).with_precision(Precision::Infinite);
            }
        }
        a[col] = prow;
    }
    Ok(a.into_iter().map(|row| row[n].truncate(&cut)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::FieldDesc;
    use crate::groups::{rat_int, GroupDesc};

    fn c(v: i64) -> Series {
        Series::constant(&GroupDesc::integers(), FieldDesc::Rational.from_int(v))
    }

    #[test]
    fn determinants_agree() {
        let vals = [[2, 0, 1, 3, 1], [1, 1, 0, 2, 0], [0, 4, 1, 1, 1], [1, 0, 0, 1, 5], [3, 1, 2, 0, 1]];
        for n in 1..=5 {
            let m: Vec<Vec<Series>> = (0..n).map(|i| (0..n).map(|j| c(vals[i][j])).collect()).collect();
            let b = berkowitz(&m).unwrap();
            if n <= 4 {
                assert_eq!(leibniz(&m).unwrap(), b, "n = {n}");
            }
            let ints: Vec<Vec<i64>> = (0..n).map(|i| vals[i][..n].to_vec()).collect();
            let d = crate::groups::perron::int_det(&ints);
            assert_eq!(b, c(d as i64), "n = {n}");
        }
    }

    #[test]
    fn elimination_matches_cramer() {
        let vals = [[2, 0, 1, 3, 1], [1, 1, 0, 2, 0], [0, 4, 1, 1, 1], [1, 0, 0, 1, 5], [3, 1, 2, 0, 1]];
        let m: Vec<Vec<Series>> = (0..5).map(|i| (0..5).map(|j| c(vals[i][j])).collect()).collect();
        let b: Vec<Series> = (0..5).map(|i| c(i as i64 + 1)).collect();
        let t = GroupElem::Rat(rat_int(3));
        let x = series_solve(&m, &b, &t).unwrap();
        for i in 0..5 {
            let mut s = c(0);
            for j in 0..5 {
                s = s.add(&m[i][j].mul(&x[j].with_precision(Precision::Infinite)).unwrap()).unwrap();
            }
            assert_eq!(s, b[i]);
        }
    }
}
