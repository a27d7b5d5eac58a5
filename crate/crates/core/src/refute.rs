//! Linear refutation certificates `g*f + sum_j h_j (x_j^2 - x_j) = 1`:
//! exact and randomized verification, the explicit subset-sum construction,
//! lifting through monomial substitution, and functional checks against the
//! canonical cube inverse.
//!
//! Builders never return an unverified certificate: every construction ends
//! with an exact verification of the defining identity.

use std::collections::BTreeMap;

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::algebra::field::{mulmod, powmod, FieldSpec, Value};
use crate::algebra::json::{poly_from_json, poly_to_json, PolyJson};
use crate::algebra::monomial::Monomial;
use crate::algebra::poly::SparsePoly;
use crate::algebra::vars::VarId;
use crate::error::{IpsError, Result};
use crate::hypercube::{boolean_inverse, cube_values, DEFAULT_EXHAUSTIVE_LIMIT};
use crate::instances::elem_sym_all;

/// A certificate `(g, h_1..h_n)` for the unsatisfiability of
/// `{f = 0, X^2 - X = 0}`. Conceptually this is the proof polynomial
/// `P(X, y, z) = g*y + sum_j h_j z_j`: linear in the axiom placeholder and
/// vanishing at (0, 0), so it lies in the linear fragment by construction.
#[derive(Debug, Clone)]
pub struct LinRefutation {
    axiom: SparsePoly,
    g: SparsePoly,
    /// One Boolean-axiom coefficient per universe variable, by id.
    h: Vec<SparsePoly>,
}

impl LinRefutation {
    pub fn new(axiom: SparsePoly, g: SparsePoly, h: Vec<SparsePoly>) -> Result<LinRefutation> {
        if h.len() != axiom.vars().len() {
            return Err(IpsError::InvalidParameter(format!(
                "{} Boolean coefficients for {} variables",
                h.len(),
                axiom.vars().len()
            )));
        }
        let g = g.reindex(axiom.vars())?;
        let h = h
            .into_iter()
            .map(|p| p.reindex(axiom.vars()))
            .collect::<Result<Vec<_>>>()?;
        Ok(LinRefutation { axiom, g, h })
    }

    pub fn axiom(&self) -> &SparsePoly {
        &self.axiom
    }

    pub fn g(&self) -> &SparsePoly {
        &self.g
    }

    pub fn h(&self) -> &[SparsePoly] {
        &self.h
    }

    pub fn field(&self) -> &FieldSpec {
        self.axiom.field()
    }

    fn boolean_axiom(&self, v: VarId) -> Result<SparsePoly> {
        let field = self.field().clone();
        SparsePoly::from_terms(
            field.clone(),
            self.axiom.vars().clone(),
            [
                (Monomial::from_pairs([(v, 2)]), field.one()),
                (Monomial::var(v), field.integer(-1)),
            ],
        )
    }

    /// `g*f + sum h_j (x_j^2 - x_j) - 1`, which must vanish identically.
    pub fn residual(&self) -> Result<SparsePoly> {
        let mut acc = self.g.mul(&self.axiom)?;
        for (v, hj) in self.h.iter().enumerate() {
            if hj.is_zero() {
                continue;
            }
            acc = acc.add(&hj.mul(&self.boolean_axiom(v as VarId)?)?)?;
        }
        acc.add_constant(&self.field().integer(-1))
    }
}

#[derive(Debug, Clone)]
pub struct VerifyOutcome {
    pub ok: bool,
    /// The nonzero residual when verification fails.
    pub residual: Option<SparsePoly>,
}

/// Exact verification of the certificate identity.
pub fn verify_exact(r: &LinRefutation) -> Result<VerifyOutcome> {
    let res = r.residual()?;
    if res.is_zero() {
        Ok(VerifyOutcome {
            ok: true,
            residual: None,
        })
    } else {
        Ok(VerifyOutcome {
            ok: false,
            residual: Some(res),
        })
    }
}

fn eval_modp(p: &SparsePoly, point: &[u64], prime: u64) -> Result<u64> {
    let mut acc = 0u64;
    for (m, c) in p.terms() {
        let mut t = p.field().reduce_mod_p(c, prime)?;
        for (v, e) in m.pairs() {
            t = mulmod(t, powmod(point[v as usize], e as u128, prime), prime);
        }
        acc = (acc + t) % prime;
    }
    Ok(acc)
}

fn identity_degree_bound(r: &LinRefutation) -> u64 {
    let mut d = r.g.degree().unwrap_or(0) + r.axiom.degree().unwrap_or(0);
    for h in &r.h {
        if let Some(dh) = h.degree() {
            d = d.max(dh + 2);
        }
    }
    d
}

/// Probabilistic verification: evaluates the identity at uniform random
/// points. One-sided error at most `degree/p` per trial, so a prime below
/// the identity's total degree is rejected outright.
pub fn verify_randomized(r: &LinRefutation, trials: usize, prime: u64, seed: u64) -> Result<bool> {
    let deg = identity_degree_bound(r);
    match r.field() {
        FieldSpec::Rationals | FieldSpec::Prime(_) => {
            if prime <= deg {
                return Err(IpsError::InvalidParameter(format!(
                    "prime {prime} does not exceed the identity degree bound {deg}"
                )));
            }
            let n = r.axiom.vars().len();
            for t in 0..trials {
                let mut rng = ChaCha8Rng::seed_from_u64(crate::derive_seed(seed, t as u64));
                let point: Vec<u64> = (0..n).map(|_| rng.gen_range(0..prime)).collect();
                let mut acc = mulmod(
                    eval_modp(&r.g, &point, prime)?,
                    eval_modp(&r.axiom, &point, prime)?,
                    prime,
                );
                for (v, h) in r.h.iter().enumerate() {
                    if h.is_zero() {
                        continue;
                    }
                    let x = point[v];
                    let boolev = crate::algebra::field::submod(
                        mulmod(x, x, prime),
                        x,
                        prime,
                    );
                    acc = (acc + mulmod(eval_modp(h, &point, prime)?, boolev, prime)) % prime;
                }
                if acc != 1 % prime {
                    return Ok(false);
                }
            }
            Ok(true)
        }
        FieldSpec::Extension(e) => {
            let size = (e.p as u128).saturating_pow(e.k);
            if size <= deg as u128 {
                return Err(IpsError::InvalidParameter(format!(
                    "field size {size} does not exceed the identity degree bound {deg}"
                )));
            }
            let field = r.field().clone();
            let n = r.axiom.vars().len();
            for t in 0..trials {
                let mut rng = ChaCha8Rng::seed_from_u64(crate::derive_seed(seed, t as u64));
                let point: BTreeMap<VarId, Value> = (0..n as VarId)
                    .map(|v| {
                        let coeffs: Vec<u64> =
                            (0..e.k).map(|_| rng.gen_range(0..e.p)).collect();
                        (v, Value::Ext(coeffs))
                    })
                    .collect();
                let mut acc = field.mul(&r.g.eval(&point)?, &r.axiom.eval(&point)?)?;
                for (v, h) in r.h.iter().enumerate() {
                    if h.is_zero() {
                        continue;
                    }
                    let x = &point[&(v as VarId)];
                    let boolev = field.sub(&field.mul(x, x)?, x)?;
                    acc = field.add(&acc, &field.mul(&h.eval(&point)?, &boolev)?)?;
                }
                if acc != field.one() {
                    return Ok(false);
                }
            }
            Ok(true)
        }
    }
}

/// Divides `1 - g*f` by the Boolean axioms in ascending variable order.
/// The remainder must vanish whenever `g` inverts `f` on the whole cube.
fn recover_witnesses(axiom: &SparsePoly, g: &SparsePoly) -> Result<Vec<SparsePoly>> {
    let field = axiom.field().clone();
    let one = SparsePoly::constant(field.clone(), axiom.vars().clone(), field.one());
    let mut rem = one.sub(&g.mul(axiom)?)?;
    let mut hs = Vec::with_capacity(axiom.vars().len());
    for v in axiom.vars().ids() {
        let (q, r) = rem.divide_by_boolean(v)?;
        hs.push(q);
        rem = r;
    }
    if !rem.is_zero() {
        return Err(IpsError::Internal(
            "witness recovery left a nonzero remainder; g does not invert f on the cube".into(),
        ));
    }
    Ok(hs)
}

fn factorial_big(i: u64) -> BigInt {
    let mut f = BigInt::one();
    for k in 2..=i {
        f *= BigInt::from(k);
    }
    f
}

/// Closed-form coefficients of the subset-sum inverse:
/// `g = sum_{i=0}^n [-i! / prod_{j=0}^i (beta - j)] e_{n,i}`.
pub fn subset_sum_inverse_coeffs(n: u64, beta: &BigRational) -> Result<Vec<BigRational>> {
    let mut out = Vec::with_capacity(n as usize + 1);
    let mut denom = BigRational::one();
    for i in 0..=n {
        denom *= beta - BigRational::from_integer(BigInt::from(i));
        if denom.is_zero() {
            return Err(IpsError::InvalidParameter(format!(
                "beta = {beta} hits {{0..{n}}}; the coefficient formula has a pole"
            )));
        }
        out.push(-BigRational::from_integer(factorial_big(i)) / denom.clone());
    }
    Ok(out)
}

/// Explicit certificate for the subset-sum axiom `sum x_i - beta` over
/// characteristic zero, assembled from the elementary-symmetric closed form
/// and cross-checked against full interpolation at small n. Verified exactly
/// before return.
pub fn build_subset_sum_refutation(n: u64, beta: &BigRational) -> Result<LinRefutation> {
    let field = FieldSpec::rationals();
    let inst = crate::instances::gen_subset_sum(n, &Value::Rat(beta.clone()), &field)?;
    let axiom = inst.poly;
    let coeffs = subset_sum_inverse_coeffs(n, beta)?;
    let xs: Vec<VarId> = axiom.vars().ids().collect();
    let esyms = elem_sym_all(&xs, n, &field, axiom.vars())?;
    let mut g = SparsePoly::zero(field.clone(), axiom.vars().clone());
    for (i, e) in esyms.iter().enumerate() {
        g = g.add(&e.scale(&Value::Rat(coeffs[i].clone()))?)?;
    }
    if n <= 12 {
        let oracle = boolean_inverse(&axiom, DEFAULT_EXHAUSTIVE_LIMIT)?;
        if oracle.inverse() != &g {
            return Err(IpsError::Internal(
                "closed-form subset-sum inverse disagrees with interpolation".into(),
            ));
        }
    }
    let h = recover_witnesses(&axiom, &g)?;
    let cert = LinRefutation::new(axiom, g, h)?;
    if !verify_exact(&cert)?.ok {
        return Err(IpsError::Internal(
            "subset-sum certificate failed exact verification".into(),
        ));
    }
    Ok(cert)
}

/// Lifts the subset-sum certificate through monomial substitution: a sparse
/// axiom `sum_i c_i m_i + gamma` with positive integer coefficients is read
/// as `sum_{occurrences} m + gamma` (a coefficient of c repeats its monomial
/// c times), a subset-sum certificate on that many fresh variables is built
/// with `beta = -gamma`, and the monomials are substituted back. The
/// resulting non-multilinear certificate is re-divided by the original
/// Boolean axioms and verified exactly.
pub fn lift_sparse_refutation(f: &SparsePoly) -> Result<LinRefutation> {
    if *f.field() != FieldSpec::Rationals {
        return Err(IpsError::UnsupportedShape(
            "lifting is implemented over characteristic zero".into(),
        ));
    }
    let gamma = match f.constant_term() {
        Value::Rat(r) => r,
        _ => unreachable!(),
    };
    let mut occurrences: Vec<Monomial> = Vec::new();
    for (m, c) in f.terms() {
        if m.is_one() {
            continue;
        }
        let r = match c {
            Value::Rat(r) => r,
            _ => unreachable!(),
        };
        if !r.denom().is_one() || !r.numer().is_positive() {
            return Err(IpsError::UnsupportedShape(format!(
                "coefficient {} of {} is not a positive integer; only unit-coefficient \
                 expansions are lifted",
                f.field().value_to_string(c),
                m.display(f.vars())
            )));
        }
        let count: u64 = r.numer().try_into().map_err(|_| {
            IpsError::UnsupportedShape("coefficient too large to expand into occurrences".into())
        })?;
        for _ in 0..count {
            occurrences.push(m.clone());
        }
    }
    let s = occurrences.len() as u64;
    if s == 0 {
        return Err(IpsError::UnsupportedShape("axiom has no monomials".into()));
    }
    let beta_tilde = -gamma.clone();
    let base = build_subset_sum_refutation(s, &beta_tilde)?;
    // substitute z_i -> m_i into the subset-sum inverse
    let field = f.field().clone();
    let mut g = SparsePoly::zero(field.clone(), f.vars().clone());
    for (zm, c) in base.g().terms() {
        let mut image = Monomial::one();
        for zv in zm.support() {
            image = image.mul(&occurrences[zv as usize]);
        }
        let term = SparsePoly::from_terms(
            field.clone(),
            f.vars().clone(),
            [(image, c.clone())],
        )?;
        g = g.add(&term)?;
    }
    let h = recover_witnesses(f, &g)?;
    let cert = LinRefutation::new(f.clone(), g, h)?;
    if !verify_exact(&cert)?.ok {
        return Err(IpsError::Internal(
            "lifted certificate failed exact verification".into(),
        ));
    }
    Ok(cert)
}

/// Report of the functional check: the proof polynomial restricted as
/// `P(X, 1, 0) = g` must agree with `1/f` on the whole cube, and it is a
/// multilinear-fragment proof exactly when `g` is multilinear (in which case
/// it coincides coefficient-wise with the canonical inverse).
#[derive(Debug, Clone)]
pub struct FunctionalCheckReport {
    pub verified: bool,
    pub extracted: SparsePoly,
    pub g_multilinear: bool,
    pub cube_agreement: bool,
    pub matches_canonical: bool,
}

pub fn functional_check_mult_ips(r: &LinRefutation, limit: usize) -> Result<FunctionalCheckReport> {
    let verified = verify_exact(r)?.ok;
    if !verified {
        return Err(IpsError::Precondition(
            "functional check requires a verified certificate".into(),
        ));
    }
    let extracted = r.g().clone();
    let g_multilinear = extracted.is_multilinear();
    let canonical = boolean_inverse(r.axiom(), limit)?;
    let matches_canonical = &extracted == canonical.inverse();
    // literal cube agreement: g(b) * f(b) = 1 at every Boolean point
    let vars: Vec<VarId> = r.axiom().vars().ids().collect();
    let gv = cube_values(&extracted, &vars)?;
    let fv = cube_values(r.axiom(), &vars)?;
    let field = r.field().clone();
    let one = field.one();
    let cube_agreement = gv
        .iter()
        .zip(&fv)
        .all(|(a, b)| field.mul(a, b).map(|p| p == one).unwrap_or(false));
    Ok(FunctionalCheckReport {
        verified,
        extracted,
        g_multilinear,
        cube_agreement,
        matches_canonical,
    })
}

/// Structure of the inverse of the elementary-symmetric axiom
/// `e_{n,d} - beta`: the inverse is symmetric, so each degree layer carries a
/// single coefficient `alpha_i`; the expected pattern is `alpha_i = 0`
/// exactly for `1 <= i < d`, nonzero from `d` up, with a nonzero constant.
#[derive(Debug, Clone)]
pub struct ElemSymReport {
    /// `alphas[i]` is the common coefficient of the degree-i layer;
    /// `alphas[0]` is the constant `beta'`.
    pub alphas: Vec<Value>,
    pub beta_prime: Value,
    pub pattern_ok: bool,
}

pub fn elem_sym_inverse_structure(n: u64, d: u64, beta: &BigRational) -> Result<ElemSymReport> {
    if n > 16 {
        return Err(IpsError::SizeGuard("elementary-symmetric structure check guarded to n <= 16".into()));
    }
    let field = FieldSpec::rationals();
    let cnd = {
        let mut r = BigInt::one();
        for i in 0..d {
            r = r * BigInt::from(n - i) / BigInt::from(i + 1);
        }
        BigRational::from_integer(r)
    };
    if beta < &cnd {
        return Err(IpsError::InvalidParameter(format!(
            "beta = {beta} is below C({n},{d}) = {cnd}"
        )));
    }
    let inst = crate::instances::gen_elem_sym_axiom(n, d, &Value::Rat(beta.clone()), &field)?;
    let g = boolean_inverse(&inst.poly, DEFAULT_EXHAUSTIVE_LIMIT)?;
    // layer scan: a symmetric multilinear polynomial has one coefficient per
    // degree layer, present either in all C(n, i) monomials or in none
    let mut layer_vals: Vec<Option<Value>> = vec![None; n as usize + 1];
    let mut layer_counts = vec![0u64; n as usize + 1];
    for (m, c) in g.inverse().terms() {
        let deg = m.degree() as usize;
        layer_counts[deg] += 1;
        match &layer_vals[deg] {
            None => layer_vals[deg] = Some(c.clone()),
            Some(prev) => {
                if prev != c {
                    return Err(IpsError::Internal(
                        "inverse of a symmetric axiom is asymmetric".into(),
                    ));
                }
            }
        }
    }
    let mut alphas = Vec::with_capacity(n as usize + 1);
    for i in 0..=n as usize {
        let full = {
            let mut r = BigInt::one();
            for k in 0..i {
                r = r * BigInt::from(n as usize - k) / BigInt::from(k + 1);
            }
            r
        };
        if layer_counts[i] != 0 && BigInt::from(layer_counts[i]) != full {
            return Err(IpsError::Internal(
                "inverse of a symmetric axiom is asymmetric (partial layer)".into(),
            ));
        }
        alphas.push(layer_vals[i].clone().unwrap_or_else(|| field.zero()));
    }
    let beta_prime = alphas[0].clone();
    let mut pattern_ok = !field.is_zero(&beta_prime);
    for (i, a) in alphas.iter().enumerate().skip(1) {
        let should_be_zero = (i as u64) < d;
        if should_be_zero != field.is_zero(a) {
            pattern_ok = false;
        }
    }
    Ok(ElemSymReport {
        alphas,
        beta_prime,
        pattern_ok,
    })
}

// ------------------------------------------------------------------ JSON

/// Certificate wire format; `h` is positional, aligned with the axiom's
/// `vars` list.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CertificateJson {
    pub axiom: PolyJson,
    pub g: PolyJson,
    pub h: Vec<PolyJson>,
    pub field: String,
}

pub fn certificate_to_json(r: &LinRefutation) -> CertificateJson {
    CertificateJson {
        axiom: poly_to_json(r.axiom()),
        g: poly_to_json(r.g()),
        h: r.h().iter().map(poly_to_json).collect(),
        field: r.field().to_string(),
    }
}

pub fn certificate_from_json(j: &CertificateJson) -> Result<LinRefutation> {
    let axiom = poly_from_json(&j.axiom)?;
    if axiom.field().to_string() != j.field {
        return Err(IpsError::Parse(format!(
            "certificate field {} disagrees with axiom field {}",
            j.field,
            axiom.field()
        )));
    }
    let g = poly_from_json(&j.g)?.reindex(axiom.vars())?;
    let h = j
        .h
        .iter()
        .map(|p| poly_from_json(p).and_then(|p| p.reindex(axiom.vars())))
        .collect::<Result<Vec<_>>>()?;
    LinRefutation::new(axiom, g, h)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::poly::PolyBuilder;
    use crate::algebra::vars::VarTable;
    use std::sync::Arc;

    fn q() -> FieldSpec {
        FieldSpec::rationals()
    }

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn verify_handmade_certificate() {
        // f = x1 - 2, g = -1/2 - x1/2, h1 = 1/2
        let vars = Arc::new(VarTable::from_names(["x1"]).unwrap());
        let b = PolyBuilder::new(q(), vars.clone());
        let f = b.poly(&[("x1", 1), ("", -2)]);
        let g = SparsePoly::from_terms(
            q(),
            vars.clone(),
            [
                (Monomial::one(), Value::Rat(rat(-1, 2))),
                (Monomial::var(0), Value::Rat(rat(-1, 2))),
            ],
        )
        .unwrap();
        let h1 = SparsePoly::constant(q(), vars.clone(), Value::Rat(rat(1, 2)));
        let cert = LinRefutation::new(f.clone(), g.clone(), vec![h1]).unwrap();
        assert!(verify_exact(&cert).unwrap().ok);

        // dropping the witness breaks it, with an exact residual
        let broken = LinRefutation::new(
            f.clone(),
            g,
            vec![SparsePoly::zero(q(), vars.clone())],
        )
        .unwrap();
        let out = verify_exact(&broken).unwrap();
        assert!(!out.ok);
        let res = out.residual.unwrap();
        // residual = -1/2 (x1^2 - x1)
        assert_eq!(
            res.coeff(&Monomial::from_pairs([(0, 2)])),
            Some(&Value::Rat(rat(-1, 2)))
        );

        // trivial certificate: f = 1, g = 1
        let one = b.poly(&[("", 1)]);
        let cert = LinRefutation::new(
            one.clone(),
            SparsePoly::constant(q(), vars.clone(), q().one()),
            vec![SparsePoly::zero(q(), vars.clone())],
        )
        .unwrap();
        assert!(verify_exact(&cert).unwrap().ok);
    }

    #[test]
    fn randomized_matches_exact() {
        let p = crate::algebra::field::default_rank_prime();
        let cert = build_subset_sum_refutation(1, &rat(2, 1)).unwrap();
        assert!(verify_randomized(&cert, 5, p, 7).unwrap());

        let vars = cert.axiom().vars().clone();
        let broken = LinRefutation::new(
            cert.axiom().clone(),
            cert.g().clone(),
            vec![SparsePoly::zero(q(), vars.clone())],
        )
        .unwrap();
        assert!(!verify_randomized(&broken, 5, p, 7).unwrap());

        // g = 0: identity is -1 everywhere
        let zerog = LinRefutation::new(
            cert.axiom().clone(),
            SparsePoly::zero(q(), vars.clone()),
            vec![SparsePoly::zero(q(), vars)],
        )
        .unwrap();
        assert!(!verify_randomized(&zerog, 1, p, 7).unwrap());
    }

    #[test]
    fn randomized_rejects_small_prime() {
        let cert = build_subset_sum_refutation(2, &rat(3, 1)).unwrap();
        assert!(matches!(
            verify_randomized(&cert, 1, 3, 7).unwrap_err(),
            IpsError::InvalidParameter(_)
        ));
    }

    #[test]
    fn subset_sum_certificates_small() {
        // n=1, beta=2: g = -1/2 - x1/2
        let cert = build_subset_sum_refutation(1, &rat(2, 1)).unwrap();
        assert_eq!(
            cert.g().coeff(&Monomial::one()),
            Some(&Value::Rat(rat(-1, 2)))
        );
        assert_eq!(
            cert.g().coeff(&Monomial::var(0)),
            Some(&Value::Rat(rat(-1, 2)))
        );

        // n=2, beta=3: coefficients (-1/3, -1/6, -1/3) by degree layer
        let cert = build_subset_sum_refutation(2, &rat(3, 1)).unwrap();
        assert_eq!(
            cert.g().coeff(&Monomial::one()),
            Some(&Value::Rat(rat(-1, 3)))
        );
        assert_eq!(
            cert.g().coeff(&Monomial::var(0)),
            Some(&Value::Rat(rat(-1, 6)))
        );
        assert_eq!(
            cert.g().coeff(&Monomial::from_support([0, 1])),
            Some(&Value::Rat(rat(-1, 3)))
        );

        // constant term is always -1/beta
        let cert = build_subset_sum_refutation(5, &rat(7, 1)).unwrap();
        assert_eq!(
            cert.g().coeff(&Monomial::one()),
            Some(&Value::Rat(rat(-1, 7)))
        );
    }

    #[test]
    fn subset_sum_rejects_pole() {
        assert!(build_subset_sum_refutation(3, &rat(2, 1)).is_err());
    }

    #[test]
    fn lift_single_monomial() {
        // f = x1 x2 - 2, s = 1: g = -1/2 - x1x2/2
        let vars = Arc::new(VarTable::from_names(["x1", "x2"]).unwrap());
        let b = PolyBuilder::new(q(), vars.clone());
        let f = b.poly(&[("x1 x2", 1), ("", -2)]);
        let cert = lift_sparse_refutation(&f).unwrap();
        assert!(verify_exact(&cert).unwrap().ok);
        assert_eq!(
            cert.g().coeff(&Monomial::from_support([0, 1])),
            Some(&Value::Rat(rat(-1, 2)))
        );
        assert_eq!(
            cert.g().coeff(&Monomial::one()),
            Some(&Value::Rat(rat(-1, 2)))
        );
    }

    #[test]
    fn lift_identity_substitution_is_plain_subset_sum() {
        let vars = Arc::new(VarTable::from_names(["x1", "x2"]).unwrap());
        let b = PolyBuilder::new(q(), vars.clone());
        let f = b.poly(&[("x1", 1), ("x2", 1), ("", -3)]);
        let lifted = lift_sparse_refutation(&f).unwrap();
        let plain = build_subset_sum_refutation(2, &rat(3, 1)).unwrap();
        assert_eq!(
            crate::algebra::json::poly_to_json_string(lifted.g()),
            crate::algebra::json::poly_to_json_string(plain.g())
        );
    }

    #[test]
    fn lift_rejects_non_integer_coefficients() {
        let vars = Arc::new(VarTable::from_names(["x1"]).unwrap());
        let f = SparsePoly::from_terms(
            q(),
            vars,
            [
                (Monomial::var(0), Value::Rat(rat(1, 2))),
                (Monomial::one(), Value::Rat(rat(1, 1))),
            ],
        )
        .unwrap();
        assert!(matches!(
            lift_sparse_refutation(&f).unwrap_err(),
            IpsError::UnsupportedShape(_)
        ));
    }

    #[test]
    fn functional_check_subset_sum() {
        let cert = build_subset_sum_refutation(3, &rat(4, 1)).unwrap();
        let rep = functional_check_mult_ips(&cert, 24).unwrap();
        assert!(rep.verified && rep.g_multilinear && rep.cube_agreement && rep.matches_canonical);
    }

    #[test]
    fn functional_check_perturbed_by_boolean_axiom() {
        // g + (x1^2 - x1) agrees on the cube but is not multilinear
        let cert = build_subset_sum_refutation(2, &rat(3, 1)).unwrap();
        let vars = cert.axiom().vars().clone();
        let bump = SparsePoly::from_terms(
            q(),
            vars.clone(),
            [
                (Monomial::from_pairs([(0, 2)]), q().one()),
                (Monomial::var(0), q().integer(-1)),
            ],
        )
        .unwrap();
        let g2 = cert.g().add(&bump).unwrap();
        let h2 = recover_witnesses(cert.axiom(), &g2).unwrap();
        let cert2 = LinRefutation::new(cert.axiom().clone(), g2, h2).unwrap();
        assert!(verify_exact(&cert2).unwrap().ok);
        let rep = functional_check_mult_ips(&cert2, 24).unwrap();
        assert!(rep.cube_agreement);
        assert!(!rep.g_multilinear);
        assert!(!rep.matches_canonical);
    }

    #[test]
    fn elem_sym_structure_examples() {
        // d = 1 reduces to the subset-sum closed form
        let rep = elem_sym_inverse_structure(4, 1, &rat(5, 1)).unwrap();
        assert!(rep.pattern_ok);
        let b1 = subset_sum_inverse_coeffs(4, &rat(5, 1)).unwrap();
        for (i, c) in b1.iter().enumerate() {
            assert_eq!(rep.alphas[i], Value::Rat(c.clone()));
        }

        // n=4, d=2, beta=7: alpha_1 = 0, alphas 2..4 nonzero, beta' = -1/7
        let rep = elem_sym_inverse_structure(4, 2, &rat(7, 1)).unwrap();
        assert!(rep.pattern_ok);
        assert_eq!(rep.beta_prime, Value::Rat(rat(-1, 7)));
        assert_eq!(rep.alphas[1], Value::Rat(rat(0, 1)));
        assert_eq!(rep.alphas[2], Value::Rat(rat(-1, 42)));
        assert_eq!(rep.alphas[3], Value::Rat(rat(-1, 28)));
        assert_eq!(rep.alphas[4], Value::Rat(rat(-4, 7)));

        // d = n: only alpha_n beyond the constant
        let rep = elem_sym_inverse_structure(4, 4, &rat(2, 1)).unwrap();
        assert!(rep.pattern_ok);
        assert_eq!(rep.alphas[4], Value::Rat(rat(-1, 2)));
        for i in 1..4 {
            assert_eq!(rep.alphas[i], Value::Rat(rat(0, 1)));
        }
    }

    #[test]
    fn elem_sym_rejects_small_beta() {
        assert!(elem_sym_inverse_structure(4, 2, &rat(5, 1)).is_err());
    }

    #[test]
    fn certificate_json_roundtrip() {
        let cert = build_subset_sum_refutation(2, &rat(4, 1)).unwrap();
        let j = certificate_to_json(&cert);
        let s = serde_json::to_string_pretty(&j).unwrap();
        let back = certificate_from_json(&serde_json::from_str(&s).unwrap()).unwrap();
        assert!(verify_exact(&back).unwrap().ok);
        assert_eq!(
            crate::algebra::json::poly_to_json_string(back.g()),
            crate::algebra::json::poly_to_json_string(cert.g())
        );
    }
}
