use std::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;
use valfield::groups::*;

fn quad(a: (i64, i64), b: (i64, i64)) -> GroupElem {
    GroupElem::Quad(rat(a.0 as i128, a.1 as i128), rat(b.0 as i128, b.1 as i128))
}

fn rational() -> impl Strategy<Value = (i64, i64)> {
    (-40i64..=40, 1i64..=12)
}

fn big(q: &Rat) -> BigRational {
    BigRational::new(BigInt::from(*q.numer()), BigInt::from(*q.denom()))
}

/// Sign of `a + b√2` from nested rational brackets of √2 (Pell convergents),
/// refined until the bracket decides it.
fn approx_sign(a: &Rat, b: &Rat) -> Ordering {
    let (a, b) = (big(a), big(b));
    if b == BigRational::from_integer(0.into()) {
        return a.cmp(&BigRational::from_integer(0.into()));
    }
    // p/q convergents of √2 alternate around it
    let (mut p, mut q) = (BigInt::from(1), BigInt::from(1));
    let mut prev: Option<BigRational> = None;
    for _ in 0..200 {
        let cur = BigRational::new(p.clone(), q.clone());
        if let Some(prev) = &prev {
            let (lo, hi) = if prev < &cur { (prev.clone(), cur.clone()) } else { (cur.clone(), prev.clone()) };
            let ends = [&a + &b * &lo, &a + &b * &hi];
            let zero = BigRational::from_integer(0.into());
            if ends.iter().all(|x| x > &zero) {
                return Ordering::Greater;
            }
            if ends.iter().all(|x| x < &zero) {
                return Ordering::Less;
            }
        }
        prev = Some(cur);
        let np = &p + BigInt::from(2) * &q;
        let nq = &p + &q;
        p = np;
        q = nq;
    }
    panic!("bracket never decided");
}

#[test]
fn comparison_examples() {
    assert_eq!(GroupElem::Lex(vec![1, -5]).cmp_checked(&GroupElem::Lex(vec![0, 0])).unwrap(), Ordering::Greater);
    assert_eq!(GroupElem::Rat(rat_int(0)).cmp(&GroupElem::Rat(rat_int(0))), Ordering::Equal);
    assert!(quad((3, 1), (-2, 1)).is_positive());
    assert!(GroupElem::Rat(rat_int(1)).cmp_checked(&quad((1, 1), (0, 1))).is_err());
}

#[test]
fn p_prime_closure_examples() {
    let ambient = GroupDesc::one_over(6).unwrap();
    let query = MembershipQuery::PPrimeClosure { delta: GroupDesc::integers(), p: 2 };
    let third = ambient.membership(&GroupElem::Rat(rat(1, 3)), &query).unwrap();
    assert!(third.member);
    assert_eq!(third.order, Some(3));
    assert!(!ambient.membership(&GroupElem::Rat(rat(1, 2)), &query).unwrap().member);
    let z = GroupDesc::integers().membership(&GroupElem::Rat(rat_int(0)), &MembershipQuery::DivisibleBy(7)).unwrap();
    assert_eq!(z.witness, Some(GroupElem::Rat(rat_int(0))));
}

#[test]
fn every_description_has_rank_at_most_rational_rank() {
    let descs = [
        GroupDesc::integers(),
        GroupDesc::rationals(),
        GroupDesc::one_over(12).unwrap(),
        GroupDesc::p_divisible_hull(3).unwrap(),
        GroupDesc::lex(1).unwrap(),
        GroupDesc::lex(4).unwrap(),
        GroupDesc::QuadSqrt2,
    ];
    for d in descs {
        let inv = d.invariants();
        assert!(inv.rank <= inv.rational_rank, "{d}");
    }
    assert_eq!(GroupDesc::lex(2).unwrap().invariants(), GroupInvariants { rank: 2, rational_rank: 2 });
    assert_eq!(GroupDesc::QuadSqrt2.invariants(), GroupInvariants { rank: 1, rational_rank: 2 });
    assert_eq!(GroupDesc::p_divisible_hull(5).unwrap().invariants(), GroupInvariants { rank: 1, rational_rank: 1 });
}

#[test]
fn perron_examples() {
    let lex = [GroupElem::Lex(vec![1, 0]), GroupElem::Lex(vec![0, 1])];
    let r = perron_basis(&lex, &lex).unwrap();
    assert_eq!(r.basis, lex.to_vec());
    assert_eq!(r.coeffs, vec![vec![1, 0], vec![0, 1]]);

    let alphas = [quad((1, 1), (0, 1)), quad((-1, 1), (1, 1))];
    let r = perron_basis(&alphas, &alphas).unwrap();
    r.verify(&alphas).unwrap();

    let five = [GroupElem::Rat(rat_int(5))];
    let r = perron_basis(&five, &five).unwrap();
    assert_eq!(r.basis, vec![GroupElem::Rat(rat_int(5))]);
    assert_eq!(r.coeffs, vec![vec![1]]);
    let r = perron_basis(&[GroupElem::Rat(rat_int(1))], &five).unwrap();
    assert_eq!(r.basis, vec![GroupElem::Rat(rat_int(1))]);
    assert_eq!(r.coeffs, vec![vec![5]]);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn quad_order_matches_rational_brackets(a in rational(), b in rational()) {
        let x = quad(a, b);
        let GroupElem::Quad(ra, rb) = &x else { unreachable!() };
        prop_assert_eq!(x.signum(), approx_sign(ra, rb));
    }
}

proptest! {
    #[test]
    fn order_is_translation_invariant(a in (rational(), rational()), b in (rational(), rational()), c in (rational(), rational())) {
        let (a, b, c) = (quad(a.0, a.1), quad(b.0, b.1), quad(c.0, c.1));
        prop_assert_eq!(a.cmp(&b), (&a + &c).cmp(&(&b + &c)));
    }

    #[test]
    fn lex_order_is_translation_invariant(a in prop::collection::vec(-9i64..9, 3), b in prop::collection::vec(-9i64..9, 3), c in prop::collection::vec(-9i64..9, 3)) {
        let (a, b, c) = (GroupElem::Lex(a), GroupElem::Lex(b), GroupElem::Lex(c));
        prop_assert_eq!(a.cmp(&b), (&a + &c).cmp(&(&b + &c)));
    }

    #[test]
    fn divisibility_witness_multiplies_back(a in rational(), n in 1u64..12, m in 1u64..30) {
        let g = GroupDesc::one_over(m).unwrap();
        let Some(gamma) = g.from_rat(rat(a.0 as i128, m as i128)) else { return Ok(()); };
        let r = g.membership(&gamma, &MembershipQuery::DivisibleBy(n)).unwrap();
        if r.member {
            let w = r.witness.unwrap();
            prop_assert!(g.contains(&w));
            prop_assert_eq!(w.int_scale(n as i64), gamma);
        } else {
            prop_assert!(gamma.div_int(n as i64).is_none_or(|w| !g.contains(&w)));
        }
    }

    #[test]
    fn perron_postconditions_hold(a in (1i64..20, -20i64..20), b in (1i64..20, -20i64..20)) {
        let x = GroupElem::Quad(rat_int(a.1 as i128), rat_int(a.0 as i128));
        let y = GroupElem::Quad(rat_int(b.1 as i128), rat_int(b.0 as i128));
        prop_assume!(x.is_positive() && y.is_positive());
        let r = perron_basis(&[x.clone(), y.clone()], &[x.clone(), y.clone()]).unwrap();
        r.verify(&[x, y]).unwrap();
        prop_assert!(r.basis.iter().all(|g| g.is_positive()));
    }
}
