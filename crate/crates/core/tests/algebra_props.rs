//! Property tests for the algebra substrate: decomposition round trips,
//! multilinearization laws, order totality and field axioms.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use proptest::prelude::*;

use ipslab_core::algebra::{
    FieldSpec, Monomial, MonomialOrder, SparsePoly, Value, VarId, VarTable,
};

const NVARS: usize = 5;

fn table() -> Arc<VarTable> {
    Arc::new(VarTable::from_names((1..=NVARS).map(|i| format!("x{i}"))).unwrap())
}

type RawPoly = Vec<(Vec<(usize, u32)>, i64)>;

fn arb_raw_poly(max_exp: u32) -> impl Strategy<Value = RawPoly> {
    prop::collection::vec(
        (
            prop::collection::vec((0..NVARS, 1..=max_exp), 0..=3),
            -9i64..=9,
        ),
        0..=6,
    )
}

fn build(field: &FieldSpec, vars: &Arc<VarTable>, raw: &RawPoly) -> SparsePoly {
    SparsePoly::from_terms(
        field.clone(),
        vars.clone(),
        raw.iter().map(|(pairs, c)| {
            (
                Monomial::from_pairs(pairs.iter().map(|&(v, e)| (v as VarId, e))),
                field.integer(*c),
            )
        }),
    )
    .unwrap()
}

proptest! {
    #[test]
    fn decompose_round_trip(raw in arb_raw_poly(3), svars in prop::collection::btree_set(0..NVARS, 0..=NVARS)) {
        let field = FieldSpec::rationals();
        let vars = table();
        let f = build(&field, &vars, &raw);
        let s: BTreeSet<VarId> = svars.into_iter().map(|v| v as VarId).collect();
        let mut back = SparsePoly::zero(field.clone(), vars.clone());
        for (m, part) in f.coeff_decompose(&s) {
            back = back.add(&part.mul_monomial(&m, &field.one()).unwrap()).unwrap();
        }
        prop_assert_eq!(back, f);
    }

    #[test]
    fn multilinearize_idempotent_and_linear(a in arb_raw_poly(3), b in arb_raw_poly(3), ca in -5i64..=5, cb in -5i64..=5) {
        let field = FieldSpec::rationals();
        let vars = table();
        let f = build(&field, &vars, &a);
        let g = build(&field, &vars, &b);
        let mf = f.multilinearize();
        prop_assert_eq!(mf.multilinearize(), mf.clone());
        prop_assert!(mf.is_multilinear());
        let lin = f
            .scale(&field.integer(ca)).unwrap()
            .add(&g.scale(&field.integer(cb)).unwrap()).unwrap()
            .multilinearize();
        let rhs = mf
            .scale(&field.integer(ca)).unwrap()
            .add(&g.multilinearize().scale(&field.integer(cb)).unwrap()).unwrap();
        prop_assert_eq!(lin, rhs);
    }

    #[test]
    fn multilinearize_preserves_cube_values(raw in arb_raw_poly(3), mask in 0usize..(1 << NVARS)) {
        let field = FieldSpec::rationals();
        let vars = table();
        let f = build(&field, &vars, &raw);
        let point: BTreeMap<VarId, Value> = (0..NVARS)
            .map(|i| (i as VarId, field.integer(((mask >> i) & 1) as i64)))
            .collect();
        prop_assert_eq!(
            f.eval(&point).unwrap(),
            f.multilinearize().eval(&point).unwrap()
        );
    }

    #[test]
    fn order_is_total(
        ma in prop::collection::vec((0..NVARS, 0u32..=3), 0..=4),
        mb in prop::collection::vec((0..NVARS, 0u32..=3), 0..=4),
        mc in prop::collection::vec((0..NVARS, 0u32..=3), 0..=4),
        partial in prop::bool::ANY,
    ) {
        let vars = table();
        // a priority list covering only part of the universe must still be total
        let ord = if partial {
            MonomialOrder::new(vec![1, 0]).unwrap()
        } else {
            MonomialOrder::parse("X", &vars).unwrap()
        };
        let conv = |pairs: &Vec<(usize, u32)>| {
            Monomial::from_pairs(pairs.iter().map(|&(v, e)| (v as VarId, e)))
        };
        let (a, b, c) = (conv(&ma), conv(&mb), conv(&mc));
        // antisymmetry and identity of the comparison
        prop_assert_eq!(ord.cmp(&a, &b), ord.cmp(&b, &a).reverse());
        prop_assert_eq!(ord.cmp(&a, &b) == std::cmp::Ordering::Equal, a == b);
        // graded: strictly larger degree sorts higher
        if a.degree() > b.degree() {
            prop_assert_eq!(ord.cmp(&a, &b), std::cmp::Ordering::Greater);
        }
        // transitivity
        use std::cmp::Ordering::Greater;
        if ord.cmp(&a, &b) == Greater && ord.cmp(&b, &c) == Greater {
            prop_assert_eq!(ord.cmp(&a, &c), Greater);
        }
    }
}

fn check_field_axioms(field: &FieldSpec, elems: &[Value]) {
    for a in elems {
        for b in elems {
            for c in elems {
                let ab_c = field
                    .add(&field.add(a, b).unwrap(), c)
                    .unwrap();
                let a_bc = field
                    .add(a, &field.add(b, c).unwrap())
                    .unwrap();
                assert_eq!(ab_c, a_bc);
                let m_ab_c = field
                    .mul(&field.mul(a, b).unwrap(), c)
                    .unwrap();
                let m_a_bc = field
                    .mul(a, &field.mul(b, c).unwrap())
                    .unwrap();
                assert_eq!(m_ab_c, m_a_bc);
                let dist = field
                    .mul(a, &field.add(b, c).unwrap())
                    .unwrap();
                let dist2 = field
                    .add(&field.mul(a, b).unwrap(), &field.mul(a, c).unwrap())
                    .unwrap();
                assert_eq!(dist, dist2);
            }
            if !field.is_zero(b) {
                let inv = field.inv(b).unwrap();
                assert_eq!(field.mul(b, &inv).unwrap(), field.one());
                let q = field.div(a, b).unwrap();
                assert_eq!(field.mul(&q, b).unwrap(), *a);
            }
        }
    }
}

#[test]
fn field_axioms_on_sampled_triples() {
    let q = FieldSpec::rationals();
    let qs: Vec<Value> = [(0, 1), (1, 1), (-1, 2), (5, 6), (7, 3)]
        .iter()
        .map(|&(n, d)| {
            Value::Rat(num::BigRational::new(n.into(), d.into()))
        })
        .collect();
    check_field_axioms(&q, &qs);

    let f7 = FieldSpec::prime(7).unwrap();
    let f7s: Vec<Value> = (0..7).map(Value::Fp).collect();
    check_field_axioms(&f7, &f7s);

    let f4 = FieldSpec::extension(2, 2).unwrap();
    let f4s: Vec<Value> = (0..4u64)
        .map(|i| Value::Ext(vec![i & 1, (i >> 1) & 1]))
        .collect();
    check_field_axioms(&f4, &f4s);
}
