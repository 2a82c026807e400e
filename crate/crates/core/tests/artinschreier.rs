use proptest::prelude::*;
use valfield::artinschreier::*;
use valfield::fields::{FieldDesc, MPoly, RatFn};
use valfield::groups::{rat, rat_int, GroupDesc, GroupElem};
use valfield::series::{Precision, Series, ValuationResult};

fn z(n: i128) -> GroupElem {
    GroupElem::Rat(rat_int(n))
}

fn ser(field: &FieldDesc, group: &GroupDesc, terms: &[(GroupElem, i64)]) -> Series {
    let t = terms.iter().map(|(e, c)| (e.clone(), field.from_int(*c))).collect();
    Series::new(field, group, t, Precision::Infinite).unwrap()
}

#[test]
fn split_in_char_two() {
    let f2 = FieldDesc::finite(2, 1).unwrap();
    let g = GroupDesc::integers();
    let inst = ASInstance::new(ser(&f2, &g, &[(z(1), 1)])).unwrap();
    let ASOutcome::Split { roots } = root_split(&inst, &z(8)).unwrap() else { panic!() };
    let shown: Vec<String> = roots.iter().map(|r| r.to_string()).collect();
    assert_eq!(shown, ["t^(1) + t^(2) + t^(4) + O(t^(8))", "1 + t^(1) + t^(2) + t^(4) + O(t^(8))"]);
}

#[test]
fn split_of_zero_is_the_prime_field() {
    let f5 = FieldDesc::finite(5, 1).unwrap();
    let g = GroupDesc::integers();
    let inst = ASInstance::new(Series::zero(&f5, &g)).unwrap();
    let ASOutcome::Split { roots } = root_split(&inst, &z(4)).unwrap() else { panic!() };
    for (i, r) in roots.iter().enumerate() {
        assert_eq!(r.terms().len(), usize::from(i > 0));
        assert_eq!(r.coeff(&z(0)).unwrap_or(f5.zero()), f5.from_int(i as i64));
    }
}

#[test]
fn split_char_three_to_27() {
    let f3 = FieldDesc::finite(3, 1).unwrap();
    let g = GroupDesc::integers();
    let inst = ASInstance::new(ser(&f3, &g, &[(z(1), 1)])).unwrap();
    let ASOutcome::Split { roots } = root_split(&inst, &z(27)).unwrap() else { panic!() };
    let a = &roots[0];
    assert_eq!(a.to_string(), "2*t^(1) + 2*t^(3) + 2*t^(9) + O(t^(27))");
    assert!(residual(&inst, a).unwrap().is_zero_to_precision());
}

#[test]
fn residue_case_over_f2_and_f4() {
    let g = GroupDesc::integers();
    let f2 = FieldDesc::finite(2, 1).unwrap();
    let inst = ASInstance::new(ser(&f2, &g, &[(z(0), 1), (z(1), 1)])).unwrap();
    assert!(matches!(residue_case(&inst, &z(6)).unwrap(), ASOutcome::NoResidueRoot { trace } if trace.is_one()));
    let f4 = FieldDesc::finite(2, 2).unwrap();
    let inst = ASInstance::new(ser(&f4, &g, &[(z(0), 1), (z(1), 1)])).unwrap();
    let ASOutcome::LiftedRoot { root } = residue_case(&inst, &z(6)).unwrap() else { panic!() };
    assert!(residual(&inst, &root).unwrap().is_zero_to_precision());
}

#[test]
fn analyze_reduces_unramified_negative_part() {
    // c = t^(-2) + t over F_2: surgery removes t^(-2) via b = t^(-1), leaving t^(-1) + t
    let f2 = FieldDesc::finite(2, 1).unwrap();
    let g = GroupDesc::integers();
    let inst = ASInstance::new(ser(&f2, &g, &[(z(-2), 1), (z(1), 1)])).unwrap();
    let out = analyze(&inst, &z(8), 10).unwrap();
    assert!(matches!(out, ASOutcome::Ramified { root_value, .. } if root_value == GroupElem::Rat(rat(-1, 2))));

    // c = t^(-4) + t^(-1) + t: b = t^(-2) then b = t^(-1) cancel everything negative in char 2
    let inst = ASInstance::new(ser(&f2, &g, &[(z(-4), 1), (z(-1), 1), (z(1), 1)])).unwrap();
    let rep = surgery(&inst.c, 10).unwrap();
    assert_eq!(rep.verdict, SurgeryVerdict::NonNegative);
    assert_eq!(rep.reduced, ser(&f2, &g, &[(z(1), 1)]));

    let inst = ASInstance::new(ser(&f2, &g, &[(z(-4), 1), (z(-3), 1)])).unwrap();
    let rep = surgery(&inst.c, 10).unwrap();
    assert_eq!(rep.verdict, SurgeryVerdict::Ramified(z(-3)));

    let inst = ASInstance::new(ser(&f2, &g, &[(z(-4), 1), (z(-2), 1), (z(1), 1)])).unwrap();
    let ASOutcome::Split { roots } = analyze(&inst, &z(8), 10).unwrap() else { panic!() };
    for r in &roots {
        assert!(residual(&inst, r).unwrap().is_zero_to_precision());
    }
}

#[test]
fn inversion_relation() {
    // θ^p − θ = 1/t + 1 + t²
    let f3 = FieldDesc::finite(3, 1).unwrap();
    let tv = vec!["t".to_string()];
    let f = MPoly::from_terms(&f3, &tv, [(vec![0], f3.one()), (vec![2], f3.one())]);
    let inv = inversion_polynomial(&f).unwrap();
    assert_eq!(inv.vars(), ["X", "W"]);
    // substitute X = t, W = 1/t + f(t) as rational functions in t
    let t = RatFn::from_poly(MPoly::var(&f3, &tv, "t").unwrap());
    let w = t.inv().unwrap().try_add(&RatFn::from_poly(f.clone())).unwrap();
    let mut acc = RatFn::from_poly(MPoly::zero(&f3, &tv));
    for (e, c) in inv.terms() {
        let m = t.powi(e[0] as i64).unwrap().try_mul(&w.powi(e[1] as i64).unwrap()).unwrap();
        let k = RatFn::from_poly(MPoly::constant(&f3, &tv, c.clone()));
        acc = acc.try_add(&m.try_mul(&k).unwrap()).unwrap();
    }
    assert!(acc.is_zero());
}

#[test]
fn translation_by_zero_is_identity() {
    let f2 = FieldDesc::finite(2, 1).unwrap();
    let g = GroupDesc::integers();
    let inst = ASInstance::new(ser(&f2, &g, &[(z(-1), 1), (z(2), 1)])).unwrap();
    let tr = transforms(&inst, &Series::zero(&f2, &g), &z(6)).unwrap();
    assert_eq!(tr.translated, inst.c);
    let s = tr.scaled.unwrap();
    assert_eq!(s.value, z(1));
}

#[test]
fn scaled_instance_matches_original() {
    // a root X of X^p − X − c gives the root X/c of Y^p − c^(1−p)Y − c^(1−p)
    let f2 = FieldDesc::finite(2, 1).unwrap();
    let g = GroupDesc::integers();
    let c = ser(&f2, &g, &[(z(-4), 1), (z(-2), 1), (z(1), 1)]);
    let inst = ASInstance::new(c.clone()).unwrap();
    let ASOutcome::Split { roots } = analyze(&inst, &z(8), 10).unwrap() else { panic!() };
    let s = scale(&inst, &z(12)).unwrap();
    assert_eq!(s.value, z(4));
    assert!(matches!(scale(&inst, &z(4)), Err(valfield::Error::InsufficientPrecision(_))));
    for x in &roots {
        let y = x.mul(&s.c1).unwrap();
        let r = s.eval(&y, 2).unwrap();
        assert!(r.is_zero_to_precision(), "{r}");
        assert!(r.precision().finite().unwrap() >= &z(10));
    }
}

#[test]
fn residue_case_matches_enumeration() {
    let g = GroupDesc::integers();
    for q in [2u64, 3, 4, 5, 7, 8, 9, 16, 25, 27, 32, 49, 64, 81] {
        let field = FieldDesc::of_order(q).unwrap();
        let p = field.characteristic();
        for r in field.elements().unwrap() {
            if r.is_zero() {
                continue;
            }
            let brute = field.elements().unwrap().iter().any(|x| (&(&x.pow(p as u128) - x) - &r).is_zero());
            let c = Series::new(&field, &g, vec![(z(0), r.clone()), (z(2), field.one())], Precision::Infinite).unwrap();
            let inst = ASInstance::new(c).unwrap();
            let out = residue_case(&inst, &z(3)).unwrap();
            assert_eq!(matches!(out, ASOutcome::LiftedRoot { .. }), brute, "q = {q}, r = {r}");
        }
    }
}

fn prime() -> impl Strategy<Value = u64> {
    prop::sample::select(vec![2u64, 3, 5])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn roots_differ_by_prime_field_constants(p in prime(), cs in prop::collection::vec(0i64..5, 1..5)) {
        let f = FieldDesc::finite(p, 1).unwrap();
        let g = GroupDesc::integers();
        let terms: Vec<(GroupElem, i64)> = cs.iter().enumerate().map(|(i, c)| (z(i as i128 + 1), *c)).collect();
        prop_assume!(cs.iter().any(|c| c % p as i64 != 0));
        let inst = ASInstance::new(ser(&f, &g, &terms)).unwrap();
        let ASOutcome::Split { roots } = root_split(&inst, &z(9)).unwrap() else { panic!() };
        prop_assert_eq!(roots.len(), p as usize);
        for a in &roots {
            prop_assert!(residual(&inst, a).unwrap().is_zero_to_precision());
            for b in &roots {
                let d = a.sub(b).unwrap();
                prop_assert!(d.terms().iter().all(|(e, _)| e.is_zero()));
            }
        }
    }

    #[test]
    fn surgery_steps_are_exact(p in prime(), cs in prop::collection::vec(0i64..5, 1..6)) {
        let f = FieldDesc::finite(p, 1).unwrap();
        let g = GroupDesc::integers();
        let terms: Vec<(GroupElem, i64)> = cs.iter().enumerate().map(|(i, c)| (z(-(p as i128) * (i as i128 + 1)), *c)).collect();
        let c = ser(&f, &g, &terms);
        let rep = surgery(&c, 20).unwrap();
        for s in &rep.steps {
            prop_assert_eq!(s.before.sub(&s.after).unwrap(), s.b.pow(p).unwrap().sub(&s.b).unwrap());
        }
        let bp = rep.partial.pow(p).unwrap().sub(&rep.partial).unwrap();
        prop_assert_eq!(c.sub(&bp).unwrap(), rep.reduced);
        prop_assert_ne!(rep.verdict, SurgeryVerdict::DefectSuspect);
    }

    #[test]
    fn classify_invariant_under_small_translation(p in prime(), e in 1i128..6, k in 1i128..4, c0 in 1i64..5) {
        prop_assume!(c0 % p as i64 != 0);
        let f = FieldDesc::finite(p, 1).unwrap();
        let g = GroupDesc::integers();
        let c = ser(&f, &g, &[(z(-e), c0), (z(1), 1)]);
        let inst = ASInstance::new(c.clone()).unwrap();
        // v(b) > v(c)/p keeps v(b^p − b) > v(c)
        let vb = -e / (p as i128) + k;
        let b = ser(&f, &g, &[(z(vb), 1)]);
        let bp = b.pow(p).unwrap().sub(&b).unwrap();
        if let ValuationResult::Exact(v) = bp.valuation() {
            prop_assume!(v > z(-e));
        }
        let moved = ASInstance::new(transforms(&inst, &b, &z(30)).unwrap().translated).unwrap();
        prop_assert_eq!(classify(&inst).unwrap(), classify(&moved).unwrap());
    }
}
