use num_integer::Integer;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{check_k_max, check_prime, Claim, Params, RamificationRow};
use crate::artinschreier::{classify, ramified_root_value, residue_case, surgery, ASCase, ASInstance, ASOutcome};
use crate::error::{Error, Result};
use crate::fields::upoly::UPoly;
use crate::fields::{FieldDesc, FieldElem, MPoly, RatFn};
use crate::groups::{rat, GroupDesc, GroupElem};
use crate::hensel::{hensel_lift, implicit_solve, SeriesMPoly, SeriesPoly, SystemInstance};
use crate::places::{verify_uniformization_witness, Embedding, PlaceDesc, PlaceResidue, UniformizationWitness};
use crate::series::stream::{bad_residue_coefficients, canonical_minimal_polynomial};
use crate::series::{Precision, Residue, Series, Stream, ValuationResult};
use crate::text::parse_group_elem;

pub(super) type Outcome = (Params, Vec<Claim>, Vec<RamificationRow>);

fn q(n: i128, d: i128) -> GroupElem {
    GroupElem::Rat(rat(n, d))
}

fn ipow(p: u64, e: u32) -> Result<i128> {
    (p as i128).checked_pow(e).ok_or_else(|| Error::InvalidParams(format!("{p}^{e} overflows")))
}

fn names(v: &[&str]) -> Vec<String> {
    v.iter().map(|s| s.to_string()).collect()
}

/// Positive precision parsed in `group`, or the default.
fn precision(params: &Params, group: &GroupDesc, default: GroupElem) -> Result<GroupElem> {
    let g = match &params.precision {
        Some(s) => parse_group_elem(s, group)?,
        None => default,
    };
    if !g.is_positive() {
        return Err(Error::InvalidParams(format!("precision {g} must be positive")));
    }
    Ok(g)
}

/// Claims whose computation ran out of precision become indeterminate.
fn or_indeterminate(description: &str, rhs: impl ToString, r: Result<Claim>) -> Result<Claim> {
    match r {
        Err(
            e @ (Error::PrecisionUnreachable { .. }
            | Error::Undecidable(_)
            | Error::InsufficientPrecision(_)
            | Error::ZeroToPrecision(_)),
        ) => Ok(Claim::indeterminate(description, e, rhs)),
        other => other,
    }
}

fn t_power(field: &FieldDesc, group: &GroupDesc, e: GroupElem) -> Series {
    Series::monomial(group, field.one(), e)
}

pub(super) fn frobenius_root(params: &Params) -> Result<Outcome> {
    let p = check_prime(params.p.unwrap_or(2))?;
    let z = GroupDesc::integers();
    let n = precision(params, &z, q(ipow(p, 4)?, 1))?;
    let f = FieldDesc::finite(p, 1)?;
    let inst = ASInstance::new(t_power(&f, &z, z.from_int(1)))?;
    let a = hensel_lift(&inst.poly(), &Series::zero(&f, &z), &n)?.root;
    let need = Precision::Finite(n.clone());
    let claims = vec![
        Claim::series("a^p − a − t ≡ 0 (mod t^N)", &inst.eval(&a)?, &Series::zero_to(&f, &z, n.clone()), Some(&need)),
        Claim::series("a = Σ (−t)^(p^i) (mod t^N)", &a, &Stream::FrobeniusRoot { p }.expand(&n)?, Some(&need)),
    ];
    let resolved = Params { p: Some(p), precision: Some(n.to_string()), ..Default::default() };
    Ok((resolved, claims, vec![]))
}

pub(super) fn defect_tower(params: &Params) -> Result<Outcome> {
    let p = check_prime(params.p.unwrap_or(2))?;
    let k_max = check_k_max(params.k_max.unwrap_or(3))?;
    if ipow(p, k_max as u32 + 1)? > 1 << 40 {
        return Err(Error::InvalidParams(format!("p^(k_max+1) exceeds 2^40 for p = {p}, k_max = {k_max}")));
    }
    let theta = Stream::ThetaDefect { p };
    let (f, g) = (theta.field()?, theta.group()?);
    let t_inv = t_power(&f, &g, q(-1, 1));
    let deep = theta.expand(&g.zero())?;
    let mut claims = Vec::new();
    let mut rows = Vec::new();
    for k in 1..=k_max {
        let pk = ipow(p, k as u32)?;
        let tk = theta.first_terms(k)?.with_precision(Precision::Infinite);
        let lhs = tk.pow(p)?.sub(&tk)?.sub(&t_inv)?;
        let rhs = Series::monomial(&g, -&f.one(), q(-1, pk));
        claims.push(Claim::series(format!("θ_{k}^p − θ_{k} − t^(−1) = −t^(−1/p^{k})"), &lhs, &rhs, None));
        claims.push(Claim::value(format!("v(θ − θ_{k}) = −1/p^{}", k + 1), &deep.sub(&tk)?.valuation(), &q(-1, pk * p as i128)));

        let rep = surgery(&t_inv, k)?;
        claims.push(Claim::series(format!("surgery on t^(−1) after {k} steps accumulates θ_{k}"), &rep.partial, &tk, None));
        let left = rep.reduced.valuation();
        let unfinished = matches!(&left, ValuationResult::Exact(v) if v.is_negative());
        claims.push(
            Claim::holds(format!("surgery on t^(−1) unfinished after {k} steps"), format!("v(reduced) = {left}"), "< 0", unfinished)
                .finite_level(),
        );

        // ϑ = θ − θ_k is a root of X^p − X − t^(−1/p^k) over L_k = F_p((t^(1/p^k)))
        let gk = GroupDesc::one_over(pk as u64)?;
        let inst = ASInstance::new(t_power(&f, &gk, q(-1, pk)))?;
        let case = classify(&inst)?;
        claims.push(Claim::equal(format!("X^p − X − t^(−1/p^{k}) over L_{k}"), &case, ASCase::NegativeRamified));
        let ASOutcome::Ramified { root_value, .. } = ramified_root_value(&inst)? else {
            unreachable!("ramified_root_value returns Ramified")
        };
        let den = root_value.as_rat().map_or(1, |r| *r.denom());
        let lcm = den.lcm(&pk);
        let e = (lcm / pk) as u64;
        claims.push(
            Claim::equal(
                format!("value group of L_{k}(θ)"),
                GroupDesc::one_over(lcm as u64)?,
                GroupDesc::one_over((pk * p as i128) as u64)?,
            )
            .finite_level(),
        );
        rows.push(RamificationRow::new(k, p, p, e, 1)?);
    }
    let resolved = Params { p: Some(p), k_max: Some(k_max), ..Default::default() };
    Ok((resolved, claims, rows))
}

pub(super) fn bad_value_group(params: &Params) -> Result<Outcome> {
    let p = check_prime(params.p.unwrap_or(3))?;
    let mut s = params.s.clone().unwrap_or_else(|| vec![2, 4, 5, 7, 8, 10]);
    s.sort_unstable();
    s.dedup();
    if s.is_empty() {
        return Err(Error::InvalidParams("S must be non-empty".into()));
    }
    if let Some(n) = s.iter().find(|n| **n == 0 || n.gcd(&p) != 1) {
        return Err(Error::InvalidParams(format!("n = {n} in S is not prime to p = {p}")));
    }
    let stream = Stream::BadValueGroup { p, s: s.clone() };
    stream.validate()?;
    let (f, g) = (stream.field()?, stream.group()?);
    let prec = precision(params, &g, g.from_int(3))?;
    let need = Precision::Finite(prec.clone());
    let x2 = stream.exact()?.expect("finite stream");
    let t = t_power(&f, &g, g.from_int(1));
    let mut claims = Vec::new();
    for &k in &s {
        let kk = k as i128;
        let terms = s.iter().filter(|n| **n < k).map(|n| (q(-1, *n as i128), f.one())).collect();
        let sk = Series::new(&f, &g, terms, Precision::Infinite)?;
        let y = x2.sub(&sk)?;
        claims.push(Claim::value(format!("v(x2 − s_{k}) = −1/{k}"), &y.valuation(), &q(-1, kk)));
        let w = y.pow(k)?.shift(&g.from_int(1));
        claims.push(Claim::equal(format!("t·(x2 − s_{k})^{k} has residue 1"), w.residue()?, f.one()));
        let desc = format!("(t^(1/{k}))^{k} = t, t^(1/{k}) = (1+c)·(x2 − s_{k})^(−1)");
        let claim = (|| {
            let u = w.unit_nth_root(k, Some(&prec))?;
            let yinv = y.invert(Some(&(&prec + &g.from_int(1))))?;
            let r = u.mul(&yinv)?;
            Ok((r.clone(), Claim::series(&desc, &r.pow(k)?, &t, Some(&need))))
        })();
        match claim {
            Ok((r, c)) => {
                claims.push(c);
                claims.push(Claim::series(format!("recovered root equals t^(1/{k})"), &r, &t_power(&f, &g, q(1, kk)), Some(&need)));
            }
            Err(e) => claims.push(or_indeterminate(&desc, "t", Err(e))?),
        }
    }
    let resolved = Params { p: Some(p), precision: Some(prec.to_string()), s: Some(s), ..Default::default() };
    Ok((resolved, claims, vec![]))
}

/// Least `j ≥ 1` with `a^(p^j) = a`.
fn frobenius_orbit(a: &FieldElem) -> Result<usize> {
    let mut b = a.frobenius()?;
    let mut j = 1;
    while &b != a {
        b = b.frobenius()?;
        j += 1;
    }
    Ok(j)
}

pub(super) fn bad_residue(params: &Params) -> Result<Outcome> {
    let p = check_prime(params.p.unwrap_or(2))?;
    let k_max = check_k_max(params.k_max.unwrap_or(4))?;
    let l = (1..=k_max).fold(1usize, |acc, n| acc.lcm(&n));
    if u32::try_from(l).ok().and_then(|l| p.checked_pow(l)).is_none() {
        return Err(Error::InvalidParams(format!("F_({p}^{l}) is too large for k_max = {k_max}")));
    }
    let z = GroupDesc::integers();
    let target = precision(params, &z, z.from_int(8))?;
    let need = Precision::Finite(target.clone());
    let x2 = Stream::BadResidue { p, n_max: k_max }.expand(&z.from_int(k_max as i64 + 1))?;
    let (big, a) = bad_residue_coefficients(p, k_max)?;
    let mut claims = Vec::new();
    for k in 1..=k_max {
        let ak = &a[k - 1];
        let terms = (1..k).map(|n| (z.from_int(n as i64), a[n - 1].clone())).collect();
        let sk = Series::new(&big, &z, terms, Precision::Infinite)?;
        let y = x2.sub(&sk)?.shift(&z.from_int(-(k as i64)));
        let res = y.residue()?;
        claims.push(Claim::holds(format!("residue of (x2 − s_{k})/t^{k} = a_{k}"), &res, ak, res == Residue::Value(ak.clone())));
        let m = canonical_minimal_polynomial(p, k)?;
        let m = UPoly::new(big.clone(), m.iter().map(|c| big.from_int(*c as i64)).collect());
        claims.push(Claim::equal(format!("m_{k}(a_{k}) = 0"), m.eval(ak), big.zero()));
        let desc = format!("Hensel lift of m_{k} from (x2 − s_{k})/t^{k} is a_{k}");
        let exact = Series::constant(&z, ak.clone()).with_precision(need.clone());
        let lifted = hensel_lift(&SeriesPoly::from_upoly(&m, &z), &y, &target).map(|r| Claim::series(&desc, &r.root, &exact, Some(&need)));
        claims.push(or_indeterminate(&desc, &exact, lifted)?);
        claims.push(Claim::equal(format!("[F_p(a_{k}) : F_p] = {k}"), frobenius_orbit(ak)?, k).finite_level());
    }
    let resolved = Params { p: Some(p), k_max: Some(k_max), precision: Some(target.to_string()), ..Default::default() };
    Ok((resolved, claims, vec![]))
}

fn nu(i: usize) -> u32 {
    (i * (i + 1) / 2) as u32
}

pub(super) fn z_series(params: &Params) -> Result<Outcome> {
    let p = check_prime(params.p.unwrap_or(2))?;
    let k_max = check_k_max(params.k_max.unwrap_or(4))?;
    if ipow(p, nu(k_max + 2))? > 1 << 40 || ipow(p, nu(k_max) + nu(k_max + 2))? > 1 << 62 {
        return Err(Error::InvalidParams(format!("exponents overflow for p = {p}, k_max = {k_max}")));
    }
    let z = Stream::ZSeries { p };
    let (f, g) = (z.field()?, z.group()?);
    let mut claims = Vec::new();
    for k in 1..=k_max {
        let desc = format!("v(t^(p^(ν_{k}+ν_{})) · (z^(p^ν_{k}) − Σ_(i≤{k}))^(−1)) = 1/p^{}", k + 1, k + 1);
        let expected = q(1, ipow(p, k as u32 + 1)?);
        let mut zf = z.first_terms(k + 1)?;
        for _ in 0..nu(k) {
            zf = zf.frobenius()?;
        }
        let terms = (1..=k)
            .map(|i| Ok((&q(ipow(p, nu(k) + nu(i))?, 1) - &q(ipow(p, nu(k))?, ipow(p, nu(i))?), f.one())))
            .collect::<Result<Vec<_>>>()?;
        let partial = Series::new(&f, &g, terms, Precision::Infinite)?;
        let diff = zf.sub(&partial)?;
        let ValuationResult::Exact(v) = diff.valuation() else {
            claims.push(Claim::indeterminate(desc, diff.valuation(), &expected));
            continue;
        };
        let lead = q(ipow(p, nu(k) + nu(k + 1))?, 1);
        let claim = diff
            .invert(Some(&(&(-&v) + &g.from_int(1))))
            .map(|inv| Claim::value(&desc, &inv.shift(&lead).valuation(), &expected));
        claims.push(or_indeterminate(&desc, &expected, claim)?);
    }
    let resolved = Params { p: Some(p), k_max: Some(k_max), ..Default::default() };
    Ok((resolved, claims, vec![]))
}

pub(super) fn non_iso_mie(params: &Params) -> Result<Outcome> {
    let p = check_prime(params.p.unwrap_or(2))?;
    let k_max = check_k_max(params.k_max.unwrap_or(3))?;
    if ipow(p, k_max as u32 + 1)? > 1 << 40 {
        return Err(Error::InvalidParams(format!("p^(k_max+1) exceeds 2^40 for p = {p}, k_max = {k_max}")));
    }
    let size = match params.field_size {
        Some(s) => s,
        None => u64::try_from(ipow(p, p as u32)?).map_err(|_| Error::InvalidParams("p^p too large".into()))?,
    };
    let fq = FieldDesc::of_order(size)?;
    let m = match &fq {
        FieldDesc::Finite(ff) if ff.characteristic() == p => ff.degree(),
        _ => return Err(Error::InvalidParams(format!("field size {size} is not a power of {p}"))),
    };
    if m % p as usize != 0 {
        return Err(Error::InvalidParams(format!("c = 1 has nonzero trace in F_{size}; need p | [F_{size} : F_{p}]")));
    }
    let g = GroupDesc::p_divisible_hull(p)?;
    let one = g.from_int(1);
    let mut claims = Vec::new();

    let fp = FieldDesc::finite(p, 1)?;
    let over_fp = residue_case(&ASInstance::new(Series::one(&fp, &g))?, &one)?;
    claims.push(match &over_fp {
        ASOutcome::NoResidueRoot { trace } => {
            Claim::holds("X^p − X − c has no root over F_p", format!("Tr(c) = {trace}"), "≠ 0", !trace.is_zero())
        }
        other => Claim::holds("X^p − X − c has no root over F_p", other.variant_name(), "NoResidueRoot", false),
    });

    let c = Series::one(&fq, &g);
    let ASOutcome::LiftedRoot { root } = residue_case(&ASInstance::new(c.clone())?, &one)? else {
        return Err(Error::Hypothesis(format!("no root of X^p − X − 1 in F_{size}")));
    };
    let Residue::Value(zeta) = root.residue()? else {
        return Err(Error::Hypothesis("root of X^p − X − 1 has a pole".into()));
    };
    claims.push(Claim::equal(format!("ζ^p − ζ = c in F_{size}"), &(&zeta.pow(p as u128) - &zeta), fq.one()));
    let zeta_s = Series::constant(&g, zeta.clone());

    let embed = |x: &FieldElem| fq.from_int(x.fin_coeffs().first().copied().unwrap_or(0) as i64);
    let theta = Stream::ThetaDefect { p };
    let t_inv = t_power(&fq, &g, q(-1, 1));
    let rhs_c = t_inv.add(&c)?;
    for k in 1..=k_max {
        let tk = theta.first_terms(k)?.with_precision(Precision::Infinite).map_coeffs(&fq, embed);
        let tck = tk.add(&zeta_s)?;
        let lhs = tck.pow(p)?.sub(&tck)?.sub(&rhs_c)?;
        let rhs = Series::monomial(&g, -&fq.one(), q(-1, ipow(p, k as u32)?));
        claims.push(Claim::series(format!("θ_(c,{k})^p − θ_(c,{k}) − (t^(−1) + c) = −t^(−1/p^{k})"), &lhs, &rhs, None));
    }

    // θ_c from surgery on t^(−1) + c, θ from the stream, both cut after k_max terms
    let rep = surgery(&rhs_c, k_max)?;
    let theta_c = rep.partial.add(&zeta_s)?;
    let theta_k = theta.first_terms(k_max)?.with_precision(Precision::Infinite).map_coeffs(&fq, embed);
    let d = theta_c.sub(&theta_k)?;
    claims.push(Claim::series("(θ_c − θ)^p − (θ_c − θ) = c", &d.pow(p)?.sub(&d)?, &c, None));
    claims.push(Claim::value("v(θ_c − θ) = 0", &d.valuation(), &g.zero()));
    let res = d.residue()?;
    let outside = matches!(&res, Residue::Value(r) if !r.in_prime_field());
    claims.push(Claim::holds("residue of θ_c − θ lies outside F_p", &res, "∉ F_p", outside));
    let resolved = Params { p: Some(p), k_max: Some(k_max), field_size: Some(size), ..Default::default() };
    Ok((resolved, claims, vec![]))
}

pub(super) fn puiseux(params: &Params) -> Result<Outcome> {
    let k_max = check_k_max(params.k_max.unwrap_or(6))?;
    if k_max > 40 {
        return Err(Error::InvalidParams("k_max must be at most 40".into()));
    }
    let f = FieldDesc::Rational;
    let g = GroupDesc::rationals();
    let t = t_power(&f, &g, g.from_int(1));
    let mut claims = Vec::new();
    let mut lcm = 1i128;
    for k in 1..=k_max {
        let kk = k as i128;
        let x = t_power(&f, &g, q(1, kk));
        let v = x.valuation();
        claims.push(Claim::value(format!("v(t^(1/{k})) = 1/{k}"), &v, &q(1, kk)));
        claims.push(Claim::series(format!("(t^(1/{k}))^{k} = t"), &x.pow(k as u64)?, &t, None));
        if let Some(r) = v.exact().and_then(|g| g.as_rat()) {
            lcm = lcm.lcm(r.denom());
        }
        // (2/3·t^(1/k) + k·t^(1/(k+1)))^k · t^(−k/(k+1)) has value 0 and residue k^k
        let base = Series::new(
            &f,
            &g,
            vec![(q(1, kk), FieldElem::rational(2, 3)), (q(1, kk + 1), f.from_int(k as i64))],
            Precision::Infinite,
        )?;
        let w = base.pow(k as u64)?.shift(&q(-kk, kk + 1));
        let res = w.residue()?;
        let in_q = matches!(&res, Residue::Value(c) if c.as_rational().is_some());
        let want = f.from_int(kk.pow(k as u32) as i64);
        claims.push(Claim::holds(
            format!("residue of a value-0 product at level {k} lies in Q"),
            &res,
            &want,
            in_q && res == Residue::Value(want.clone()),
        ));
    }
    let covered = (1..=k_max as i128).all(|k| lcm % k == 0);
    claims.push(
        Claim::holds(
            format!("value denominators cover 1..{k_max}"),
            format!("lcm = {lcm}"),
            format!("divisible by each k ≤ {k_max}"),
            covered,
        )
        .finite_level(),
    );
    let resolved = Params { k_max: Some(k_max), ..Default::default() };
    Ok((resolved, claims, vec![]))
}

const SCHMIDT_SAMPLES: usize = 24;

fn random_poly(rng: &mut ChaCha8Rng, field: &FieldDesc, vars: &[String], s_step: u32) -> MPoly {
    loop {
        let n = rng.gen_range(1..=4);
        let terms: Vec<_> = (0..n)
            .map(|_| {
                let c = field.from_int(rng.gen_range(1..field.characteristic() as i64 + 1));
                (vec![rng.gen_range(0..4), s_step * rng.gen_range(0..3)], c)
            })
            .collect();
        let poly = MPoly::from_terms(field, vars, terms);
        if !poly.is_zero() {
            return poly;
        }
    }
}

pub(super) fn schmidt_defect(params: &Params) -> Result<Outcome> {
    let p = check_prime(params.p.unwrap_or(2))?;
    let seed = params.seed.unwrap_or(0);
    let f = FieldDesc::finite(p, 1)?;
    let z = GroupDesc::integers();
    let place = PlaceDesc::series_embed(
        vec![
            ("x1".into(), Embedding::Series(t_power(&f, &z, z.from_int(1)))),
            ("x2".into(), Embedding::Stream(Stream::Transcendental { p })),
        ],
        Some(0),
    )?;
    let vars = names(&["x1", "x2"]);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut claims = Vec::new();
    for (label, step) in [("f(t, s)", 1), ("f(t, s^p)", p as u32)] {
        let (mut values_ok, mut residues_ok) = (0, 0);
        for _ in 0..SCHMIDT_SAMPLES {
            let num = random_poly(&mut rng, &f, &vars, step);
            let den = random_poly(&mut rng, &f, &vars, step);
            let r = RatFn::new(num, den)?;
            if let ValuationResult::Exact(v) = place.value(&r)? {
                if z.contains(&v) {
                    values_ok += 1;
                }
            }
            let in_fp = match place.residue(&r)? {
                PlaceResidue::Zero | PlaceResidue::Pole => true,
                PlaceResidue::Value(c) => c.in_prime_field(),
                PlaceResidue::Function(_) => false,
            };
            if in_fp {
                residues_ok += 1;
            }
        }
        let all = format!("{SCHMIDT_SAMPLES}/{SCHMIDT_SAMPLES}");
        claims.push(
            Claim::holds(format!("values of random {label} lie in Z"), format!("{values_ok}/{SCHMIDT_SAMPLES}"), &all, values_ok == SCHMIDT_SAMPLES)
                .finite_level(),
        );
        claims.push(
            Claim::holds(
                format!("residues of random {label} lie in F_p"),
                format!("{residues_ok}/{SCHMIDT_SAMPLES}"),
                &all,
                residues_ok == SCHMIDT_SAMPLES,
            )
            .finite_level(),
        );
    }
    // [K(t,s) : K(t,s^p)] = p with e = f = 1 on the samples
    let rows = vec![RamificationRow::new(1, p, p, 1, 1)?];
    let resolved = Params { p: Some(p), seed: Some(seed), ..Default::default() };
    Ok((resolved, claims, rows))
}

fn cusp_poly(field: &FieldDesc, vars: &[String]) -> MPoly {
    MPoly::from_terms(field, vars, [(vec![0, 2], field.one()), (vec![3, 0], field.from_int(-1))])
}

pub(super) fn cusp(params: &Params) -> Result<Outcome> {
    let z = GroupDesc::integers();
    let target = precision(params, &z, z.from_int(8))?;
    let need = Precision::Finite(target.clone());
    let mut claims = Vec::new();

    // x ↦ t, y ↦ t^(3/2) over Q
    let qf = FieldDesc::Rational;
    let half = GroupDesc::one_over(2)?;
    let xy = names(&["x", "y"]);
    let place = PlaceDesc::series_embed(
        vec![
            ("x".into(), Embedding::Series(t_power(&qf, &half, half.from_int(1)))),
            ("y".into(), Embedding::Series(t_power(&qf, &half, q(3, 2)))),
        ],
        Some(0),
    )?;
    let x = RatFn::from_poly(MPoly::var(&qf, &xy, "x")?);
    let y = RatFn::from_poly(MPoly::var(&qf, &xy, "y")?);
    let vy = place.value(&y)?;
    claims.push(Claim::value("v(y) = 3/2", &vy, &q(3, 2)));
    let curve = RatFn::from_poly(cusp_poly(&qf, &xy));
    claims.push(Claim::equal("y^2 − x^3 vanishes under the place", place.value(&curve)?, ValuationResult::Infinity));
    let half_vx3 = match place.value(&x.powi(3)?)? {
        ValuationResult::Exact(g) => g.div_int(2).map_or("undefined".to_string(), |h| h.to_string()),
        other => other.to_string(),
    };
    claims.push(Claim::equal("v(y) = v(x^3)/2", &vy, half_vx3));

    let grad: Vec<FieldElem> = (0..2)
        .map(|i| cusp_poly(&qf, &xy).partial_derivative(i).eval(&[qf.zero(), qf.zero()]))
        .collect::<Result<_>>()?;
    claims.push(Claim::holds(
        "(0, 0) is singular: both partials vanish",
        format!("({}, {})", grad[0], grad[1]),
        "(0, 0)",
        grad.iter().all(|g| g.is_zero()),
    ));

    // implicit function at the smooth F_7 point (2, 1)
    let f7 = FieldDesc::finite(7, 1)?;
    let big_xy = names(&["X", "Y"]);
    let sys = SystemInstance::new(vec![SeriesMPoly::from_mpoly(&cusp_poly(&f7, &big_xy), &z)])?;
    let c = |k: i64| Series::constant(&z, f7.from_int(k));
    let shifted = Series::new(&f7, &z, vec![(z.zero(), f7.from_int(2)), (z.from_int(1), f7.one())], Precision::Infinite)?;
    let desc = "Y(2 + s)^2 = (2 + s)^3 near (2, 1) over F_7";
    let solved = implicit_solve(&sys, &[c(2), c(1)], &[shifted.clone()], &target).and_then(|r| {
        let yy = r.solution.last().expect("one solved coordinate");
        Ok(Claim::series(desc, &yy.pow(2)?, &shifted.pow(3)?.truncate(&need), Some(&need)))
    });
    claims.push(or_indeterminate(desc, "(2 + s)^3", solved)?);

    // uniformization witness for X1 ↦ y over T = {x}
    let witness = |field: &FieldDesc| -> Result<UniformizationWitness> {
        Ok(UniformizationWitness {
            transcendence: names(&["x"]),
            algebraic: vec![("X1".into(), RatFn::from_poly(MPoly::var(field, &xy, "y")?))],
            polys: vec![cusp_poly(field, &names(&["x", "X1"]))],
        })
    };
    let y_smooth = shifted.pow(3)?.unit_nth_root(2, Some(&target))?;
    let smooth = PlaceDesc::series_embed(
        vec![("x".into(), Embedding::Series(shifted)), ("y".into(), Embedding::Series(y_smooth))],
        Some(0),
    )?;
    let w = verify_uniformization_witness(&witness(&f7)?, &smooth)?;
    let show = |u1: bool, u2: bool, u3: bool| format!("U1={u1} U2={u2} U3={u3}");
    claims.push(Claim::holds(
        "witness holds at the smooth center (2, 1) over F_7",
        show(w.u1, w.u2, w.u3),
        show(true, true, true),
        w.u1 && w.u2 && w.u3 && w.smooth_center,
    ));
    let origin = PlaceDesc::series_embed(
        vec![
            ("x".into(), Embedding::Series(t_power(&f7, &half, half.from_int(1)))),
            ("y".into(), Embedding::Series(t_power(&f7, &half, q(3, 2)))),
        ],
        Some(0),
    )?;
    let w = verify_uniformization_witness(&witness(&f7)?, &origin)?;
    claims.push(Claim::holds(
        "witness fails U3 at the origin",
        show(w.u1, w.u2, w.u3),
        show(true, true, false),
        w.u1 && w.u2 && !w.u3,
    ));
    let resolved = Params { precision: Some(target.to_string()), ..Default::default() };
    Ok((resolved, claims, vec![]))
}
