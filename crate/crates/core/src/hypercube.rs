//! Everything about the Boolean cube: unsatisfiability checking, the unique
//! multilinear inverse `g = 1/f mod (X^2 - X)`, targeted coefficient
//! extraction, and the support-structure checks.
//!
//! Cube values of a polynomial are computed with the in-place subset (zeta)
//! transform on the support-collapsed coefficient table, O(n 2^n) field
//! operations; inverse coefficients come from the complementary Mobius
//! transform. The 2^n loops are pure and partition into independent chunks
//! (transform butterflies synchronize between stages), though the
//! implementation here is single-threaded.

use std::collections::{BTreeMap, BTreeSet};

use crate::algebra::field::{invmod, mulmod, submod, FieldSpec, Value};
use crate::algebra::monomial::Monomial;
use crate::algebra::poly::SparsePoly;
use crate::algebra::vars::VarId;
use crate::error::{IpsError, Result};

/// Default cap on exhaustive 2^n enumeration; override per call or through
/// the `IPSLAB_MAX_VARS` environment variable at the CLI layer.
pub const DEFAULT_EXHAUSTIVE_LIMIT: usize = 24;

/// Largest support size accepted by targeted coefficient extraction.
pub const MAX_TARGETED_SUPPORT: usize = 30;

/// The multilinear inverse of an axiom on the Boolean cube.
#[derive(Debug, Clone)]
pub struct CubeInverse {
    source: SparsePoly,
    inverse: SparsePoly,
    universe: Vec<VarId>,
}

impl CubeInverse {
    pub fn source(&self) -> &SparsePoly {
        &self.source
    }

    pub fn inverse(&self) -> &SparsePoly {
        &self.inverse
    }

    pub fn universe(&self) -> &[VarId] {
        &self.universe
    }
}

#[derive(Debug, Clone)]
pub struct UnsatReport {
    pub unsat: bool,
    /// A cube zero of `f` when one exists.
    pub witness: Option<BTreeMap<VarId, u8>>,
}

fn cube_vars(f: &SparsePoly, limit: usize) -> Result<Vec<VarId>> {
    let vars: Vec<VarId> = f.vars().ids().collect();
    if vars.len() > limit {
        return Err(IpsError::VarLimitExceeded(vars.len(), limit));
    }
    Ok(vars)
}

fn witness_point(vars: &[VarId], mask: usize) -> BTreeMap<VarId, u8> {
    vars.iter()
        .enumerate()
        .map(|(i, &v)| (v, ((mask >> i) & 1) as u8))
        .collect()
}

fn witness_string(f: &SparsePoly, vars: &[VarId], mask: usize) -> String {
    let parts: Vec<String> = vars
        .iter()
        .enumerate()
        .map(|(i, &v)| format!("{}={}", f.vars().name(v), (mask >> i) & 1))
        .collect();
    parts.join(",")
}

/// Cube evaluation table of `f`, indexed by subset mask over `vars`.
/// Built by scattering the multilinearized coefficients and running the
/// subset-sum (zeta) transform.
pub fn cube_values(f: &SparsePoly, vars: &[VarId]) -> Result<Vec<Value>> {
    let n = vars.len();
    let pos: BTreeMap<VarId, usize> = vars.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let field = f.field().clone();
    let mut table = vec![field.zero(); 1usize << n];
    for (m, c) in f.multilinearize().terms() {
        let mut mask = 0usize;
        for v in m.support() {
            let i = pos
                .get(&v)
                .ok_or_else(|| IpsError::Internal("cube variable list misses a support variable".into()))?;
            mask |= 1 << i;
        }
        table[mask] = field.add(&table[mask], c)?;
    }
    zeta_in_place(&mut table, &field)?;
    Ok(table)
}

/// Subset-sum transform: `out[T] = sum_{S subseteq T} in[S]`.
pub fn zeta_in_place(table: &mut [Value], field: &FieldSpec) -> Result<()> {
    let n = table.len();
    debug_assert!(n.is_power_of_two());
    let mut bit = 1usize;
    while bit < n {
        for lo in 0..n {
            if lo & bit == 0 {
                let s = field.add(&table[lo | bit], &table[lo])?;
                table[lo | bit] = s;
            }
        }
        bit <<= 1;
    }
    Ok(())
}

/// Inverse (Mobius) transform of `zeta_in_place`.
pub fn mobius_in_place(table: &mut [Value], field: &FieldSpec) -> Result<()> {
    let n = table.len();
    debug_assert!(n.is_power_of_two());
    let mut bit = 1usize;
    while bit < n {
        for lo in 0..n {
            if lo & bit == 0 {
                let s = field.sub(&table[lo | bit], &table[lo])?;
                table[lo | bit] = s;
            }
        }
        bit <<= 1;
    }
    Ok(())
}

/// True iff `f` has no zero on the Boolean cube of its variable universe;
/// returns a witness point otherwise.
pub fn is_unsat_on_cube(f: &SparsePoly, limit: usize) -> Result<UnsatReport> {
    let vars = cube_vars(f, limit)?;
    let table = cube_values(f, &vars)?;
    for (mask, v) in table.iter().enumerate() {
        if f.field().is_zero(v) {
            return Ok(UnsatReport {
                unsat: false,
                witness: Some(witness_point(&vars, mask)),
            });
        }
    }
    Ok(UnsatReport {
        unsat: true,
        witness: None,
    })
}

/// The unique multilinear `g` with `g(b) f(b) = 1` at every Boolean point,
/// computed by inverting all 2^n cube values and applying the Mobius
/// transform.
pub fn boolean_inverse(f: &SparsePoly, limit: usize) -> Result<CubeInverse> {
    let vars = cube_vars(f, limit)?;
    let field = f.field().clone();
    let mut table = cube_values(f, &vars)?;
    for (mask, v) in table.iter_mut().enumerate() {
        if field.is_zero(v) {
            return Err(IpsError::CubeZero(witness_string(f, &vars, mask)));
        }
        *v = field.inv(v)?;
    }
    mobius_in_place(&mut table, &field)?;
    let mut terms = Vec::new();
    for (mask, c) in table.into_iter().enumerate() {
        if field.is_zero(&c) {
            continue;
        }
        let support = vars
            .iter()
            .enumerate()
            .filter(|(i, _)| (mask >> i) & 1 == 1)
            .map(|(_, &v)| v);
        terms.push((Monomial::from_support(support), c));
    }
    let inverse = SparsePoly::from_terms(field, f.vars().clone(), terms)?;
    Ok(CubeInverse {
        source: f.clone(),
        inverse,
        universe: vars,
    })
}

/// Dense multilinear inverse over `F_p`, coefficients indexed by support mask.
/// This is the fast path for instances near the variable limit, where a sparse
/// map per coefficient would not fit in memory.
#[derive(Debug, Clone)]
pub struct DenseCube {
    pub vars: Vec<VarId>,
    pub p: u64,
    pub coeffs: Vec<u64>,
}

pub fn boolean_inverse_dense_modp(f: &SparsePoly, p: u64, limit: usize) -> Result<DenseCube> {
    let vars = cube_vars(f, limit)?;
    let n = vars.len();
    let pos: BTreeMap<VarId, usize> = vars.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let mut table = vec![0u64; 1usize << n];
    for (m, c) in f.multilinearize().terms() {
        let mut mask = 0usize;
        for v in m.support() {
            mask |= 1 << pos[&v];
        }
        let r = f.field().reduce_mod_p(c, p)?;
        table[mask] = (table[mask] + r) % p;
    }
    // zeta
    let mut bit = 1usize;
    while bit < table.len() {
        for lo in 0..table.len() {
            if lo & bit == 0 {
                table[lo | bit] = (table[lo | bit] + table[lo]) % p;
            }
        }
        bit <<= 1;
    }
    // batch inversion (Montgomery trick)
    for (mask, &v) in table.iter().enumerate() {
        if v == 0 {
            return Err(IpsError::CubeZero(format!(
                "{} (mod {p})",
                witness_string(f, &vars, mask)
            )));
        }
    }
    let mut prefix = vec![1u64; table.len() + 1];
    for i in 0..table.len() {
        prefix[i + 1] = mulmod(prefix[i], table[i], p);
    }
    let mut inv_all = invmod(prefix[table.len()], p);
    for i in (0..table.len()).rev() {
        let inv_i = mulmod(inv_all, prefix[i], p);
        inv_all = mulmod(inv_all, table[i], p);
        table[i] = inv_i;
    }
    // mobius
    let mut bit = 1usize;
    while bit < table.len() {
        for lo in 0..table.len() {
            if lo & bit == 0 {
                table[lo | bit] = submod(table[lo | bit], table[lo], p);
            }
        }
        bit <<= 1;
    }
    Ok(DenseCube {
        vars,
        p,
        coeffs: table,
    })
}

/// Coefficient in `g = 1/f mod (X^2-X)` of the multilinear monomial with
/// support `S`, using only 2^|S| evaluations of `f`:
/// `c = sum_{A subseteq S} (-1)^{|S \ A|} / f(1_A)`.
///
/// This is the scaling mechanism for instances too large for full
/// interpolation; cube-unsatisfiability of `f` is the caller's responsibility
/// at large n (a zero inside the queried sub-cube is still detected).
pub fn coeff_on_support(f: &SparsePoly, s: &BTreeSet<VarId>) -> Result<Value> {
    if s.len() > MAX_TARGETED_SUPPORT {
        return Err(IpsError::SizeGuard(format!(
            "support of size {} exceeds the targeted-extraction limit {}",
            s.len(),
            MAX_TARGETED_SUPPORT
        )));
    }
    let field = f.field().clone();
    let svars: Vec<VarId> = s.iter().copied().collect();
    let mut zero_point: BTreeMap<VarId, Value> = f
        .vars()
        .ids()
        .map(|v| (v, field.zero()))
        .collect();
    let mut acc = field.zero();
    for mask in 0..(1usize << svars.len()) {
        for (i, &v) in svars.iter().enumerate() {
            let bit = (mask >> i) & 1;
            zero_point.insert(v, field.integer(bit as i64));
        }
        let fa = f.eval(&zero_point)?;
        if field.is_zero(&fa) {
            let on: Vec<&str> = svars
                .iter()
                .enumerate()
                .filter(|(i, _)| (mask >> i) & 1 == 1)
                .map(|(_, &v)| f.vars().name(v))
                .collect();
            return Err(IpsError::CubeZero(format!(
                "axiom satisfiable on the sub-cube at 1_{{{}}}",
                on.join(",")
            )));
        }
        let inv = field.inv(&fa)?;
        let parity = (svars.len() - mask.count_ones() as usize) % 2;
        acc = if parity == 1 {
            field.sub(&acc, &inv)?
        } else {
            field.add(&acc, &inv)?
        };
    }
    Ok(acc)
}

/// One row of a support-containment report.
#[derive(Debug, Clone)]
pub struct SupportEntry {
    pub monomial: Monomial,
    pub alpha: Value,
    pub coeff_in_g: Value,
    pub closed_form: Value,
    pub matches: bool,
}

#[derive(Debug, Clone)]
pub struct SupportContainmentReport {
    pub beta: Value,
    pub entries: Vec<SupportEntry>,
    pub all_nonzero: bool,
    pub all_match_closed_form: bool,
}

/// Verifies that every (non-constant) monomial of `f` keeps a nonzero
/// coefficient in the cube inverse, equal to `1/(alpha - beta) + 1/beta`
/// where `alpha` is the monomial's coefficient and `-beta = f(0)`.
///
/// Requires `f` multilinear with pairwise support-incomparable monomials
/// (the constant term is exempt: it is the `-beta` of the closed form).
pub fn check_support_containment(f: &SparsePoly) -> Result<SupportContainmentReport> {
    if !f.is_multilinear() {
        return Err(IpsError::Precondition("axiom must be multilinear".into()));
    }
    let field = f.field().clone();
    let beta = field.neg(&f.constant_term())?;
    if field.is_zero(&beta) {
        return Err(IpsError::CubeZero("f(0) = 0".into()));
    }
    let monos: Vec<(Monomial, Value)> = f
        .terms()
        .filter(|(m, _)| !m.is_one())
        .map(|(m, c)| (m.clone(), c.clone()))
        .collect();
    for i in 0..monos.len() {
        for j in 0..monos.len() {
            if i == j {
                continue;
            }
            let si: BTreeSet<VarId> = monos[i].0.support().into_iter().collect();
            let sj: BTreeSet<VarId> = monos[j].0.support().into_iter().collect();
            if si.is_subset(&sj) {
                return Err(IpsError::Precondition(format!(
                    "supports are comparable: supp({}) is contained in supp({})",
                    monos[i].0.display(f.vars()),
                    monos[j].0.display(f.vars())
                )));
            }
        }
    }
    let mut entries = Vec::new();
    let mut all_nonzero = true;
    let mut all_match = true;
    for (m, alpha) in monos {
        let s: BTreeSet<VarId> = m.support().into_iter().collect();
        let coeff = coeff_on_support(f, &s)?;
        let closed = field.add(
            &field.inv(&field.sub(&alpha, &beta)?)?,
            &field.inv(&beta)?,
        )?;
        let matches = coeff == closed;
        all_nonzero &= !field.is_zero(&coeff);
        all_match &= matches;
        entries.push(SupportEntry {
            monomial: m,
            alpha,
            coeff_in_g: coeff,
            closed_form: closed,
            matches,
        });
    }
    Ok(SupportContainmentReport {
        beta,
        entries,
        all_nonzero,
        all_match_closed_form: all_match,
    })
}

/// Decides whether `target` (a support set) is a union of supports of `f`'s
/// monomials, i.e. whether the corresponding multilinear monomial is a
/// multilinearized product of axiom monomials. The union of all supports
/// contained in `target` is the largest reachable subset, so `target` is
/// reachable iff that union is all of it.
pub fn is_product_support(f: &SparsePoly, target: &BTreeSet<VarId>) -> bool {
    let mut un: BTreeSet<VarId> = BTreeSet::new();
    for (m, _) in f.terms() {
        let s: BTreeSet<VarId> = m.support().into_iter().collect();
        if s.is_subset(target) {
            un.extend(s);
        }
    }
    un == *target
}

#[derive(Debug, Clone)]
pub struct ZeroCoeffReport {
    /// True when the monomial is not a multilinearized product of axiom
    /// monomials, which forces its coefficient in `g` to vanish.
    pub is_forced_zero: bool,
    /// The actual coefficient, computed by targeted extraction.
    pub verified_value: Value,
}

/// Checks the forced-zero rule for one monomial `m`: if `m` is not a
/// multilinearized product of monomials of `f`, its coefficient in the cube
/// inverse must be 0. The computed coefficient is returned either way.
pub fn check_zero_coeff_rule(f: &SparsePoly, m: &Monomial) -> Result<ZeroCoeffReport> {
    if !f.is_multilinear() || !m.is_multilinear() {
        return Err(IpsError::Precondition(
            "zero-coefficient rule needs multilinear inputs".into(),
        ));
    }
    let target: BTreeSet<VarId> = m.support().into_iter().collect();
    let is_forced_zero = !is_product_support(f, &target);
    let verified_value = coeff_on_support(f, &target)?;
    if is_forced_zero && !f.field().is_zero(&verified_value) {
        return Err(IpsError::Internal(format!(
            "forced-zero monomial {} has nonzero coefficient",
            m.display(f.vars())
        )));
    }
    Ok(ZeroCoeffReport {
        is_forced_zero,
        verified_value,
    })
}
