//! Deep dive on the blockwise instance at n = 4: coefficient values of the
//! cube inverse, the forced-zero classification over all 2^8 monomials, and
//! the trailing-monomial measure with its partition sum, over Q and over F_4.
//! Expected constants were computed independently by direct
//! inclusion-exclusion per coefficient.

use std::collections::BTreeSet;

use num::BigRational;

use ipslab_core::algebra::{FieldSpec, Monomial, MonomialOrder, Value, VarId};
use ipslab_core::hypercube::{boolean_inverse, is_product_support};
use ipslab_core::instances::{gen_blockwise_binary, SubsetMode};
use ipslab_core::measures::kalorkoti_bound;

fn rat(n: i64, d: i64) -> Value {
    Value::Rat(BigRational::new(n.into(), d.into()))
}

#[test]
fn inverse_coefficients_over_q() {
    let q = FieldSpec::rationals();
    let inst = gen_blockwise_binary(4, &q, SubsetMode::Inclusive).unwrap();
    let g = boolean_inverse(&inst.poly, 24).unwrap();
    let v = inst.poly.vars();
    let mono =
        |names: &[&str]| Monomial::from_support(names.iter().map(|n| v.id(n).unwrap()));

    assert_eq!(g.inverse().num_terms(), 72);
    assert_eq!(g.inverse().constant_term(), rat(1, 1));
    // closed form 1/(alpha - beta) + 1/beta with beta = -1
    assert_eq!(g.inverse().coeff(&mono(&["y0"])), Some(&rat(-2, 3)));
    for m in [
        mono(&["x1", "y1"]),
        mono(&["x2", "y2"]),
        mono(&["x1", "x2", "y3"]),
        mono(&["x3", "y1"]),
        mono(&["x4", "y2"]),
        mono(&["x3", "x4", "y3"]),
    ] {
        assert_eq!(g.inverse().coeff(&m), Some(&rat(-1, 2)));
    }
    // x1*y0*y1 is the multilinearized product of y0 and x1*y1
    let m = mono(&["x1", "y0", "y1"]);
    let s: BTreeSet<VarId> = m.support().into_iter().collect();
    assert!(is_product_support(&inst.poly, &s));
    assert_eq!(g.inverse().coeff(&m), Some(&rat(5, 12)));
}

#[test]
fn forced_zero_scan_over_all_monomials() {
    let q = FieldSpec::rationals();
    let inst = gen_blockwise_binary(4, &q, SubsetMode::Inclusive).unwrap();
    let g = boolean_inverse(&inst.poly, 24).unwrap();
    let nvars = inst.poly.vars().len();
    let mut non_product = 0;
    for mask in 0..(1usize << nvars) {
        let s: BTreeSet<VarId> = (0..nvars)
            .filter(|i| (mask >> i) & 1 == 1)
            .map(|i| i as VarId)
            .collect();
        let m = Monomial::from_support(s.iter().copied());
        if !is_product_support(&inst.poly, &s) {
            non_product += 1;
            assert!(g.inverse().coeff(&m).is_none());
        }
    }
    assert_eq!(non_product, 184);
    // here every product monomial in fact survives: 256 - 184 = 72 nonzero
    assert_eq!(g.inverse().num_terms(), 256 - 184);
}

fn tm_names(inst: &ipslab_core::instances::Instance, block: usize, g: &ipslab_core::algebra::SparsePoly) -> (Vec<String>, usize) {
    let order = MonomialOrder::parse("X>Y", inst.poly.vars()).unwrap();
    let (_, vars) = &inst.partition.blocks()[block];
    let s: BTreeSet<VarId> = vars.iter().copied().collect();
    let tm = ipslab_core::measures::alg_rank_lower_bound_via_tm(g, &s, &order).unwrap();
    let mut names: Vec<String> = tm
        .tm_set
        .iter()
        .map(|m| m.display(inst.poly.vars()))
        .collect();
    names.sort();
    (names, tm.bound)
}

#[test]
fn trailing_monomial_sets_and_partition_sum_over_q() {
    let q = FieldSpec::rationals();
    let inst = gen_blockwise_binary(4, &q, SubsetMode::Inclusive).unwrap();
    let g = boolean_inverse(&inst.poly, 24).unwrap();

    for block in 0..2 {
        let (names, bound) = tm_names(&inst, block, g.inverse());
        assert_eq!(names, vec!["y0", "y1", "y2", "y3"]);
        assert_eq!(bound, 4);
    }
    let order = MonomialOrder::parse("X>Y", inst.poly.vars()).unwrap();
    let report = kalorkoti_bound(g.inverse(), &inst.partition, &order).unwrap();
    assert_eq!(report.blocks[0].tm.bound, 4);
    assert_eq!(report.blocks[1].tm.bound, 4);
    assert_eq!(report.blocks[2].tm.bound, 2); // the Y block
    assert_eq!(report.sum, 10);
}

#[test]
fn verdicts_agree_over_f4() {
    let f4 = FieldSpec::extension(2, 2).unwrap();
    let inst = gen_blockwise_binary(4, &f4, SubsetMode::Inclusive).unwrap();
    let g = boolean_inverse(&inst.poly, 24).unwrap();
    // 2*y0 vanishes in characteristic 2, and the inverse is much sparser,
    // yet the per-block bounds and the partition sum match the rational run
    assert_eq!(g.inverse().num_terms(), 7);
    let order = MonomialOrder::parse("X>Y", inst.poly.vars()).unwrap();
    let report = kalorkoti_bound(g.inverse(), &inst.partition, &order).unwrap();
    assert_eq!(report.blocks[0].tm.bound, 4);
    assert_eq!(report.blocks[1].tm.bound, 4);
    assert_eq!(report.blocks[2].tm.bound, 2);
    assert_eq!(report.sum, 10);
}
