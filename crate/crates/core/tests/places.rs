use proptest::prelude::*;
use valfield::fields::{FieldDesc, MPoly, RatFn};
use valfield::groups::{rat, rat_int, GroupDesc, GroupElem};
use valfield::places::*;
use valfield::series::{Precision, Series, Stream, ValuationResult};
use valfield::Error;

fn names(v: &[&str]) -> Vec<String> {
    v.iter().map(|s| s.to_string()).collect()
}

fn zi(n: i128) -> GroupElem {
    GroupElem::Rat(rat_int(n))
}

fn poly(field: &FieldDesc, vars: &[String], terms: &[(Vec<u32>, i64)]) -> MPoly {
    MPoly::from_terms(field, vars, terms.iter().map(|(e, c)| (e.clone(), field.from_int(*c))))
}

fn quad_place() -> PlaceDesc {
    let q = FieldDesc::Rational;
    PlaceDesc::monomial(
        &q,
        &GroupDesc::QuadSqrt2,
        vec![("x1".into(), GroupElem::Quad(rat_int(1), rat_int(0))), ("x2".into(), GroupElem::Quad(rat_int(0), rat_int(1)))],
        vec![],
    )
    .unwrap()
}

/// Substitute `x1 ↦ t`, `x2 ↦ t^√2` and take the minimum support.
fn oracle_value(f: &MPoly) -> ValuationResult {
    let q = FieldDesc::Rational;
    let g = GroupDesc::QuadSqrt2;
    let x1 = Series::monomial(&g, q.one(), GroupElem::Quad(rat_int(1), rat_int(0)));
    let x2 = Series::monomial(&g, q.one(), GroupElem::Quad(rat_int(0), rat_int(1)));
    let mut acc = Series::zero(&q, &g);
    for (e, c) in f.terms() {
        let t = Series::constant(&g, c.clone()).mul(&x1.pow(e[0] as u64).unwrap()).unwrap().mul(&x2.pow(e[1] as u64).unwrap()).unwrap();
        acc = acc.add(&t).unwrap();
    }
    acc.valuation()
}

fn diff(a: ValuationResult, b: ValuationResult) -> GroupElem {
    a.exact().unwrap() - b.exact().unwrap()
}

fn terms_strategy(nvars: usize) -> impl Strategy<Value = Vec<(Vec<u32>, i64)>> {
    prop::collection::vec(
        (prop::collection::vec(0u32..5, nvars), prop_oneof![-5i64..=-1, 1i64..=5]),
        1..=6,
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn monomial_value_matches_series_substitution(n in terms_strategy(2), d in terms_strategy(2)) {
        let q = FieldDesc::Rational;
        let v = names(&["x1", "x2"]);
        let (num, den) = (poly(&q, &v, &n), poly(&q, &v, &d));
        prop_assume!(!num.is_zero() && !den.is_zero());
        let f = RatFn::new(num.clone(), den.clone()).unwrap();
        let got = quad_place().value(&f).unwrap();
        prop_assert_eq!(got, ValuationResult::Exact(diff(oracle_value(&num), oracle_value(&den))));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn ultrametric_laws(a in terms_strategy(2), b in terms_strategy(2)) {
        let q = FieldDesc::Rational;
        let v = names(&["x1", "x2"]);
        let (f, g) = (poly(&q, &v, &a), poly(&q, &v, &b));
        prop_assume!(!f.is_zero() && !g.is_zero());
        let p = quad_place();
        let val = |h: &MPoly| p.value(&RatFn::from_poly(h.clone())).unwrap().exact().unwrap().clone();
        prop_assert_eq!(val(&f.try_mul(&g).unwrap()), &val(&f) + &val(&g));
        let s = f.try_add(&g).unwrap();
        if !s.is_zero() {
            let m = GroupElem::min_of(&val(&f), &val(&g));
            prop_assert!(val(&s) >= m);
            if val(&f) != val(&g) {
                prop_assert_eq!(val(&s), m);
            }
        }
    }

    #[test]
    fn composite_matches_two_step_evaluation(a in terms_strategy(2)) {
        let q = FieldDesc::Rational;
        let z = GroupDesc::integers();
        let v = names(&["x1", "x2"]);
        let f = poly(&q, &v, &a);
        prop_assume!(!f.is_zero());
        let first = PlaceDesc::monomial(&q, &z, vec![("x1".into(), zi(1))], vec![("x2".into(), "x2".into())]).unwrap();
        let second = PlaceDesc::monomial(&q, &z, vec![("x2".into(), zi(1))], vec![]).unwrap();
        let comp = PlaceDesc::compose(first, second).unwrap();
        // manual: least x1-degree, then least x2-degree among those terms with nonzero sum
        let e1 = f.terms().map(|(e, _)| e[0]).min().unwrap();
        let e2 = f.terms().filter(|(e, _)| e[0] == e1).map(|(e, _)| e[1]).min().unwrap();
        prop_assert_eq!(comp.value(&RatFn::from_poly(f.clone())).unwrap(), ValuationResult::Exact(GroupElem::Lex(vec![e1 as i64, e2 as i64])));
        // residue at value zero: g(0, 0)
        let c = f.eval(&[q.zero(), q.zero()]).unwrap();
        if !c.is_zero() {
            prop_assert_eq!(comp.residue(&RatFn::from_poly(f)).unwrap(), PlaceResidue::Value(c));
        }
    }

    #[test]
    fn residue_is_multiplicative_at_value_zero(a in terms_strategy(2), b in terms_strategy(2)) {
        let q = FieldDesc::Rational;
        let z = GroupDesc::integers();
        let v = names(&["x1", "y"]);
        let p = PlaceDesc::monomial(&q, &z, vec![("x1".into(), zi(1))], vec![("y".into(), "z".into())]).unwrap();
        let (f, g) = (poly(&q, &v, &a), poly(&q, &v, &b));
        prop_assume!(!f.is_zero() && !g.is_zero());
        // divide out the x1-part to land at value 0
        let unit = |h: &MPoly| {
            let m = h.terms().map(|(e, _)| e[0]).min().unwrap();
            RatFn::new(h.clone(), MPoly::monomial(&q, &v, vec![m, 0], q.one())).unwrap()
        };
        let (uf, ug) = (unit(&f), unit(&g));
        let prod = uf.try_mul(&ug).unwrap();
        let as_fn = |r: PlaceResidue| match r {
            PlaceResidue::Value(c) => RatFn::from_poly(MPoly::constant(&q, &names(&["z"]), c)),
            PlaceResidue::Function(r) => r,
            other => panic!("unexpected {other:?}"),
        };
        let lhs = as_fn(p.residue(&prod).unwrap());
        let rhs = as_fn(p.residue(&uf).unwrap()).try_mul(&as_fn(p.residue(&ug).unwrap())).unwrap();
        prop_assert_eq!(lhs, rhs);
    }
}

fn layer(var: &str, rest: &[&str]) -> PlaceDesc {
    let q = FieldDesc::Rational;
    PlaceDesc::monomial(&q, &GroupDesc::integers(), vec![(var.into(), zi(1))], rest.iter().map(|r| (r.to_string(), r.to_string())).collect()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn composition_is_associative(n in terms_strategy(3), d in terms_strategy(3)) {
        let q = FieldDesc::Rational;
        let v = names(&["x1", "x2", "x3"]);
        let (num, den) = (poly(&q, &v, &n), poly(&q, &v, &d));
        prop_assume!(!num.is_zero() && !den.is_zero());
        let f = RatFn::new(num, den).unwrap();
        let left = PlaceDesc::compose(PlaceDesc::compose(layer("x1", &["x2", "x3"]), layer("x2", &["x3"])).unwrap(), layer("x3", &[])).unwrap();
        let right = PlaceDesc::compose(layer("x1", &["x2", "x3"]), PlaceDesc::compose(layer("x2", &["x3"]), layer("x3", &[])).unwrap()).unwrap();
        prop_assert_eq!(left.value(&f).unwrap(), right.value(&f).unwrap());
        prop_assert_eq!(left.residue(&f).unwrap(), right.residue(&f).unwrap());
    }
}

#[test]
fn trivial_second_place_embeds_as_pairs() {
    let q = FieldDesc::Rational;
    let v = names(&["x1", "x2"]);
    let comp = PlaceDesc::compose(layer("x1", &["x2"]), PlaceDesc::trivial(&q, &names(&["x2"]))).unwrap();
    let f = poly(&q, &v, &[(vec![2, 3], 1), (vec![3, 0], 1)]);
    assert_eq!(comp.value(&RatFn::from_poly(f)).unwrap(), ValuationResult::Exact(GroupElem::Lex(vec![2, 0])));
    let inv = comp.invariants(2).unwrap();
    assert_eq!((inv.rank, inv.rational_rank, inv.dim), (1, 1, 1));
}

#[test]
fn compose_rejects_mismatched_residue_field() {
    let r = PlaceDesc::compose(layer("x1", &["x2"]), layer("x3", &[]));
    assert!(matches!(r, Err(Error::InvalidParams(_))));
}

#[test]
fn bad_value_group_embedding_is_not_abhyankar() {
    let q = FieldDesc::finite(3, 1).unwrap();
    let st = Stream::BadValueGroup { p: 3, s: vec![1, 2, 4, 5, 7, 8, 10] };
    let g = st.group().unwrap();
    let p = PlaceDesc::series_embed(
        vec![("x1".into(), Embedding::Series(Series::monomial(&g, q.one(), g.from_int(1)))), ("x2".into(), Embedding::Stream(st))],
        Some(0),
    )
    .unwrap();
    let inv = p.invariants(2).unwrap();
    assert_eq!(inv.rational_rank, 1);
    assert!(!inv.value_group_finitely_generated);
    assert!(!inv.is_abhyankar);
}

#[test]
fn undeclared_transcendence() {
    let q = FieldDesc::Rational;
    let z = GroupDesc::integers();
    let p = PlaceDesc::series_embed(vec![("x".into(), Embedding::Series(Series::monomial(&z, q.one(), zi(1))))], None).unwrap();
    assert_eq!(p.invariants(1), Err(Error::UndeclaredTranscendence));
}

#[test]
fn theta_stream_value_refines() {
    // x ↦ θ = Σ t^(−1/2^i): x has value −1/2, x² − x has value −1
    let f2 = FieldDesc::finite(2, 1).unwrap();
    let p = PlaceDesc::series_embed(vec![("x".into(), Embedding::Stream(Stream::ThetaDefect { p: 2 }))], None).unwrap();
    let v = names(&["x"]);
    let x = poly(&f2, &v, &[(vec![1], 1)]);
    let rel = poly(&f2, &v, &[(vec![2], 1), (vec![1], -1)]);
    assert_eq!(p.value(&RatFn::from_poly(x)).unwrap(), ValuationResult::Exact(GroupElem::Rat(rat(-1, 2))));
    assert_eq!(p.value(&RatFn::from_poly(rel)).unwrap(), ValuationResult::Exact(zi(-1)));
}

fn cusp_witness(field: &FieldDesc) -> UniformizationWitness {
    let v = names(&["x", "X1"]);
    let pv = names(&["x", "y"]);
    UniformizationWitness {
        transcendence: names(&["x"]),
        algebraic: vec![("X1".into(), RatFn::from_poly(MPoly::var(field, &pv, "y").unwrap()))],
        polys: vec![poly(field, &v, &[(vec![0, 2], 1), (vec![3, 0], -1)])],
    }
}

#[test]
fn witness_at_smooth_and_singular_centers() {
    let f7 = FieldDesc::finite(7, 1).unwrap();
    let z = GroupDesc::integers();
    let target = zi(12);
    let x = Series::new(&f7, &z, vec![(zi(0), f7.from_int(2)), (zi(1), f7.one())], Precision::Infinite).unwrap();
    let y = x.pow(3).unwrap().unit_nth_root(2, Some(&target)).unwrap();
    let smooth = PlaceDesc::series_embed(vec![("x".into(), Embedding::Series(x)), ("y".into(), Embedding::Series(y))], Some(0)).unwrap();
    let w = cusp_witness(&f7);
    let c = verify_uniformization_witness(&w, &smooth).unwrap();
    assert_eq!(c, WitnessCheck { u1: true, u2: true, u3: true, smooth_center: true });

    let half = GroupDesc::one_over(2).unwrap();
    let origin = PlaceDesc::series_embed(
        vec![
            ("x".into(), Embedding::Series(Series::monomial(&half, f7.one(), zi(1)))),
            ("y".into(), Embedding::Series(Series::monomial(&half, f7.one(), GroupElem::Rat(rat(3, 2))))),
        ],
        Some(0),
    )
    .unwrap();
    let c = verify_uniformization_witness(&w, &origin).unwrap();
    assert!(c.u1 && c.u2 && !c.u3 && !c.smooth_center);
}

#[test]
fn empty_witness_is_vacuous() {
    let q = FieldDesc::Rational;
    let w = UniformizationWitness { transcendence: names(&["x"]), algebraic: vec![], polys: vec![] };
    let p = PlaceDesc::eval(&q, vec![("x".into(), q.zero())]).unwrap();
    assert!(verify_uniformization_witness(&w, &p).unwrap().smooth_center);
}

#[test]
fn negative_generator_is_malformed() {
    let q = FieldDesc::Rational;
    let pv = names(&["x", "y"]);
    let p = PlaceDesc::monomial(&q, &GroupDesc::integers(), vec![("x".into(), zi(1))], vec![("y".into(), "y".into())]).unwrap();
    let w = UniformizationWitness {
        transcendence: names(&["y"]),
        algebraic: vec![("X1".into(), RatFn::from_poly(MPoly::var(&q, &pv, "x").unwrap()).inv().unwrap())],
        polys: vec![poly(&q, &names(&["y", "X1"]), &[(vec![0, 1], 1)])],
    };
    assert!(matches!(verify_uniformization_witness(&w, &p), Err(Error::MalformedWitness(_))));
}
