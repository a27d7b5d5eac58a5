//! Pipeline-level behavior beyond the acceptance criteria: targeted mode at
//! n = 16, the resource guard, and the constant-degree pipeline.

use ipslab::pipelines;
use ipslab_core::algebra::FieldSpec;
use ipslab_core::error::IpsError;

#[test]
fn theorem1_targeted_certifies_sixteen_per_block() {
    let q = FieldSpec::rationals();
    let rep = pipelines::theorem1(16, &q, 24, 7).unwrap();
    assert_eq!(rep.mode, "targeted");
    assert!(rep.support_ok && rep.zero_rule_ok);
    assert_eq!(rep.blocks.len(), 4);
    for b in &rep.blocks {
        assert_eq!(b.bound, 16);
        assert!(b.independent);
        assert_eq!(b.trailing_monomials.len(), 16);
    }
    assert_eq!(rep.kalorkoti_sum, 64);
}

#[test]
fn theorem1_rejects_other_sizes() {
    let q = FieldSpec::rationals();
    assert!(pipelines::theorem1(8, &q, 24, 7).is_err());
}

/// At n = 4 both modes are available, so the targeted structural
/// certification can be validated against the fully interpolated truth:
/// identical trailing-monomial names and identical per-block bounds.
#[test]
fn targeted_mode_agrees_with_full_interpolation_at_n4() {
    let q = FieldSpec::rationals();
    let full = pipelines::theorem1_with_mode(4, &q, 24, 7, pipelines::Theorem1Mode::Full).unwrap();
    let targeted =
        pipelines::theorem1_with_mode(4, &q, 24, 7, pipelines::Theorem1Mode::Targeted).unwrap();
    // the targeted report covers the X blocks only
    for (tb, fb) in targeted.blocks.iter().zip(&full.blocks) {
        assert_eq!(tb.name, fb.name);
        assert_eq!(tb.bound, fb.bound);
        assert_eq!(tb.trailing_monomials, fb.trailing_monomials);
        assert_eq!(tb.independent, fb.independent);
    }
    assert!(targeted.support_ok && targeted.zero_rule_ok);
}

#[test]
fn fstw_resource_guard() {
    let prime = ipslab_core::algebra::field::default_rank_prime();
    let err = pipelines::fstw(4, 3, prime, 7, 5, None, 24).unwrap_err();
    assert!(matches!(err, IpsError::SizeGuard(_)));
}

#[test]
fn constdeg_certifies_n_squared_per_block() {
    let q = FieldSpec::rationals();
    let rep = pipelines::constdeg(4, 4, &q, 7).unwrap();
    assert!(rep.support_ok && rep.zero_rule_ok);
    assert_eq!(rep.blocks.len(), 2);
    for b in &rep.blocks {
        assert_eq!(b.bound, 16); // n^2 set-multilinear monomials per block
        assert!(b.independent);
    }
    assert_eq!(rep.kalorkoti_sum, 32);
}

#[test]
fn fstw_n1_unique_partition() {
    let prime = ipslab_core::algebra::field::default_rank_prime();
    let rep = pipelines::fstw(1, 3, prime, 7, 0, None, 24).unwrap();
    assert_eq!(rep.partitions.len(), 1);
    assert_eq!(rep.min_rank, 2);
}
