//! Hypercube invariants: inverse correctness, oracle equivalence of targeted
//! and full coefficient extraction, uniqueness via the transform bijection.

use std::collections::BTreeSet;
use std::sync::Arc;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use ipslab_core::algebra::{FieldSpec, Monomial, SparsePoly, Value, VarId, VarTable};
use ipslab_core::hypercube::{
    boolean_inverse, coeff_on_support, cube_values, mobius_in_place, zeta_in_place,
};

fn table(n: usize) -> Arc<VarTable> {
    Arc::new(VarTable::from_names((1..=n).map(|i| format!("x{i}"))).unwrap())
}

/// Random integer polynomial shifted to be strictly positive on the cube.
fn random_unsat_poly(n: usize, terms: usize, rng: &mut ChaCha8Rng) -> SparsePoly {
    let field = FieldSpec::rationals();
    let vars = table(n);
    let mut term_list = Vec::with_capacity(terms);
    for _ in 0..terms {
        let mut pairs = Vec::new();
        for v in 0..n {
            if rng.gen_bool(0.4) {
                pairs.push((v as VarId, rng.gen_range(1..=3u32)));
            }
        }
        term_list.push((
            Monomial::from_pairs(pairs),
            field.integer(rng.gen_range(-9..=9)),
        ));
    }
    let mut f = SparsePoly::from_terms(field.clone(), vars.clone(), term_list).unwrap();
    let all: Vec<VarId> = vars.ids().collect();
    let vals = cube_values(&f, &all).unwrap();
    let min = vals
        .iter()
        .map(|v| match v {
            Value::Rat(r) => r.clone(),
            _ => unreachable!(),
        })
        .min()
        .unwrap();
    let shift = num::BigRational::from_integer(1.into()) - min;
    f = f.add_constant(&Value::Rat(shift)).unwrap();
    f
}

#[test]
fn inverse_inverts_on_every_cube_point() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for case in 0..30 {
        let n = 1 + (case % 8);
        let f = random_unsat_poly(n, 5, &mut rng);
        let inv = boolean_inverse(&f, 24).unwrap();
        let vars: Vec<VarId> = f.vars().ids().collect();
        let fv = cube_values(&f, &vars).unwrap();
        let gv = cube_values(inv.inverse(), &vars).unwrap();
        let field = f.field();
        for (a, b) in fv.iter().zip(&gv) {
            assert_eq!(field.mul(a, b).unwrap(), field.one());
        }
        assert!(inv.inverse().is_multilinear());
    }
}

#[test]
fn targeted_extraction_matches_full_interpolation() {
    let mut rng = ChaCha8Rng::seed_from_u64(55);
    for case in 0..20 {
        let n = 2 + (case % 5);
        let f = random_unsat_poly(n, 4, &mut rng);
        let inv = boolean_inverse(&f, 24).unwrap();
        // every support set
        for mask in 0..(1usize << n) {
            let s: BTreeSet<VarId> = (0..n)
                .filter(|i| (mask >> i) & 1 == 1)
                .map(|i| i as VarId)
                .collect();
            let targeted = coeff_on_support(&f, &s).unwrap();
            let m = Monomial::from_support(s.iter().copied());
            let full = inv
                .inverse()
                .coeff(&m)
                .cloned()
                .unwrap_or_else(|| f.field().zero());
            assert_eq!(targeted, full);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// The subset transform and its inverse are mutually inverse, which is
    /// exactly the uniqueness of multilinear interpolation on the cube.
    #[test]
    fn transform_bijection(coeffs in prop::collection::vec(-20i64..=20, 16)) {
        let field = FieldSpec::rationals();
        let mut table: Vec<Value> = coeffs.iter().map(|&c| field.integer(c)).collect();
        let orig = table.clone();
        zeta_in_place(&mut table, &field).unwrap();
        mobius_in_place(&mut table, &field).unwrap();
        prop_assert_eq!(table, orig);
    }

    /// Two multilinear polynomials agreeing on the whole cube are equal.
    #[test]
    fn multilinear_cube_agreement_forces_equality(
        a in prop::collection::vec(-9i64..=9, 16),
        b in prop::collection::vec(-9i64..=9, 16),
    ) {
        let field = FieldSpec::rationals();
        let vars = table(4);
        let mk = |cs: &Vec<i64>| {
            SparsePoly::from_terms(
                field.clone(),
                vars.clone(),
                cs.iter().enumerate().map(|(mask, &c)| {
                    (Monomial::from_mask(mask as u64), field.integer(c))
                }),
            )
            .unwrap()
        };
        let pa = mk(&a);
        let pb = mk(&b);
        let ids: Vec<VarId> = vars.ids().collect();
        let va = cube_values(&pa, &ids).unwrap();
        let vb = cube_values(&pb, &ids).unwrap();
        prop_assert_eq!(va == vb, pa == pb);
    }
}

#[test]
fn targeted_extraction_matches_at_larger_n_sampled() {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let f = random_unsat_poly(10, 6, &mut rng);
    let inv = boolean_inverse(&f, 24).unwrap();
    for _ in 0..100 {
        let mask: usize = rng.gen_range(0..(1usize << 10));
        let s: BTreeSet<VarId> = (0..10)
            .filter(|i| (mask >> i) & 1 == 1)
            .map(|i| i as VarId)
            .collect();
        let targeted = coeff_on_support(&f, &s).unwrap();
        let m = Monomial::from_support(s.iter().copied());
        let full = inv
            .inverse()
            .coeff(&m)
            .cloned()
            .unwrap_or_else(|| f.field().zero());
        assert_eq!(targeted, full);
    }
}

/// Degree profile of inverses of randomly scaled subset sums over an
/// extension field: with the shift taken outside the base field, the inverse
/// of `sum_{i in S'} a_i x_i - beta` attains full degree |S'| for every
/// nonempty S' on all sampled scalar vectors (zero scalars, which trivially
/// degrade the degree, are excluded from the sample).
#[test]
fn random_scaled_subset_sums_have_full_degree_inverses() {
    let p = 101u64;
    let field = FieldSpec::extension(p, 2).unwrap();
    let beta = Value::Ext(vec![0, 1]);
    assert!(!field.in_subfield(&beta, 1).unwrap());
    let n = 4usize;
    let mut rng = ChaCha8Rng::seed_from_u64(2025);
    for _ in 0..10 {
        let alphas: Vec<i64> = (0..n).map(|_| rng.gen_range(1..p as i64)).collect();
        for mask in 1usize..(1 << n) {
            let size = mask.count_ones() as usize;
            let names: Vec<String> = (0..n)
                .filter(|i| (mask >> i) & 1 == 1)
                .map(|i| format!("x{}", i + 1))
                .collect();
            let vars = Arc::new(VarTable::from_names(names).unwrap());
            let mut terms: Vec<(Monomial, Value)> = vars
                .ids()
                .enumerate()
                .map(|(j, v)| {
                    let orig = (0..n).filter(|i| (mask >> i) & 1 == 1).nth(j).unwrap();
                    (Monomial::var(v), field.integer(alphas[orig]))
                })
                .collect();
            terms.push((Monomial::one(), field.neg(&beta).unwrap()));
            let f = SparsePoly::from_terms(field.clone(), vars, terms).unwrap();
            let g = boolean_inverse(&f, 24).unwrap();
            assert_eq!(
                g.inverse().degree(),
                Some(size as u64),
                "degree collapse at mask {mask:b} with alphas {alphas:?}"
            );
        }
    }
}

/// The structural verdicts (axiom monomials nonzero in g, non-product
/// monomials zero) agree across characteristics on the blockwise instance.
#[test]
fn characteristic_independent_verdicts() {
    use ipslab_core::hypercube::{check_support_containment, is_product_support};
    use ipslab_core::instances::{gen_blockwise_binary, SubsetMode};

    let fields = [
        FieldSpec::rationals(),
        FieldSpec::extension(2, 2).unwrap(),
        FieldSpec::extension(3, 2).unwrap(),
    ];
    for field in &fields {
        let inst = gen_blockwise_binary(4, field, SubsetMode::Inclusive).unwrap();
        let rep = check_support_containment(&inst.poly).unwrap();
        assert!(rep.all_nonzero, "support containment fails over {field}");
        assert!(rep.all_match_closed_form);
        // sampled non-product monomials are forced to zero
        let g = boolean_inverse(&inst.poly, 24).unwrap();
        let nvars = inst.poly.vars().len();
        for mask in 0..(1usize << nvars) {
            let s: BTreeSet<VarId> = (0..nvars)
                .filter(|i| (mask >> i) & 1 == 1)
                .map(|i| i as VarId)
                .collect();
            if !is_product_support(&inst.poly, &s) {
                let m = Monomial::from_support(s.iter().copied());
                assert!(
                    g.inverse().coeff(&m).is_none(),
                    "forced-zero violated over {field} at {mask:b}"
                );
            }
        }
    }
}
