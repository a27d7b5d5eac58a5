//! Complexity measures underlying the experiments: algebraic independence of
//! monomial sets, trailing-monomial rank bounds and their partition sum,
//! partial derivative matrices with exact rank, random-evaluation rank over a
//! function field, and evaluation dimension.
//!
//! Rank computations are exact: fraction-free (Bareiss) elimination over Q,
//! standard elimination over prime fields, generic Gaussian elimination over
//! extension fields. Randomized trials only ever certify lower bounds.

use std::collections::{BTreeMap, BTreeSet};

use num::bigint::BigInt;
use num::{Integer, One, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::field::{invmod, mulmod, submod, FieldSpec, Value};
use crate::algebra::monomial::Monomial;
use crate::algebra::order::{MonomialOrder, VarPartition};
use crate::algebra::poly::SparsePoly;
use crate::algebra::vars::{VarId, VarTable};
use crate::error::{IpsError, Result};
use crate::hypercube::DenseCube;

/// Size guard for partial derivative matrices (logical side length 2^14).
pub const PD_SIDE_LIMIT: usize = 14;

// ---------------------------------------------------------------- rank cores

/// Rank of an integer matrix by fraction-free Gaussian elimination.
fn rank_bigint(mut m: Vec<Vec<BigInt>>) -> usize {
    let rows = m.len();
    if rows == 0 {
        return 0;
    }
    let cols = m[0].len();
    let mut rank = 0;
    let mut prev = BigInt::one();
    let mut col = 0;
    while rank < rows && col < cols {
        let piv = match (rank..rows).find(|&r| !m[r][col].is_zero()) {
            Some(p) => p,
            None => {
                col += 1;
                continue;
            }
        };
        m.swap(rank, piv);
        for r in (rank + 1)..rows {
            for c in (col + 1)..cols {
                let num = &m[r][c] * &m[rank][col] - &m[r][col] * &m[rank][c];
                // exact by the Sylvester identity; entries are minors over
                // the pivot rows and columns
                debug_assert!((&num % &prev).is_zero());
                m[r][c] = num / &prev;
            }
            m[r][col] = BigInt::zero();
        }
        prev = m[rank][col].clone();
        rank += 1;
        col += 1;
    }
    rank
}

fn rank_rational(m: &[Vec<Value>]) -> Result<usize> {
    // clear denominators row by row; rank is unchanged
    let mut im: Vec<Vec<BigInt>> = Vec::with_capacity(m.len());
    for row in m {
        let mut lcm = BigInt::one();
        for v in row {
            if let Value::Rat(r) = v {
                lcm = lcm.lcm(r.denom());
            } else {
                return Err(IpsError::Internal("expected rational entries".into()));
            }
        }
        let mut irow = Vec::with_capacity(row.len());
        for v in row {
            if let Value::Rat(r) = v {
                irow.push(r.numer() * (&lcm / r.denom()));
            }
        }
        im.push(irow);
    }
    Ok(rank_bigint(im))
}

/// Rank over `F_p` by standard row reduction.
#[allow(clippy::needless_range_loop)]
pub fn rank_modp(mut m: Vec<Vec<u64>>, p: u64) -> usize {
    let rows = m.len();
    if rows == 0 {
        return 0;
    }
    let cols = m[0].len();
    let mut rank = 0;
    let mut col = 0;
    while rank < rows && col < cols {
        let piv = match (rank..rows).find(|&r| !m[r][col].is_multiple_of(p)) {
            Some(pv) => pv,
            None => {
                col += 1;
                continue;
            }
        };
        m.swap(rank, piv);
        let inv = invmod(m[rank][col], p);
        for r in (rank + 1)..rows {
            if m[r][col] == 0 {
                continue;
            }
            let f = mulmod(m[r][col], inv, p);
            for c in col..cols {
                let sub = mulmod(f, m[rank][c], p);
                m[r][c] = submod(m[r][c], sub, p);
            }
        }
        rank += 1;
        col += 1;
    }
    rank
}

/// Generic Gaussian elimination over any of the supported fields.
#[allow(clippy::needless_range_loop)]
fn rank_generic(m: &[Vec<Value>], field: &FieldSpec) -> Result<usize> {
    let mut m: Vec<Vec<Value>> = m.to_vec();
    let rows = m.len();
    if rows == 0 {
        return Ok(0);
    }
    let cols = m[0].len();
    let mut rank = 0;
    let mut col = 0;
    while rank < rows && col < cols {
        let piv = match (rank..rows).find(|&r| !field.is_zero(&m[r][col])) {
            Some(p) => p,
            None => {
                col += 1;
                continue;
            }
        };
        m.swap(rank, piv);
        let inv = field.inv(&m[rank][col])?;
        for r in (rank + 1)..rows {
            if field.is_zero(&m[r][col]) {
                continue;
            }
            let f = field.mul(&m[r][col], &inv)?;
            for c in col..cols {
                let sub = field.mul(&f, &m[rank][c])?;
                m[r][c] = field.sub(&m[r][c], &sub)?;
            }
        }
        rank += 1;
        col += 1;
    }
    Ok(rank)
}

// ------------------------------------------------- algebraic independence

/// Monomials are algebraically independent iff their exponent vectors are
/// linearly independent over the rationals.
pub fn monomials_alg_independent(ms: &[Monomial]) -> bool {
    if ms.is_empty() {
        return true;
    }
    exponent_rank(ms) == ms.len()
}

fn exponent_rows(ms: &[Monomial]) -> (Vec<VarId>, Vec<Vec<BigInt>>) {
    let mut vars: BTreeSet<VarId> = BTreeSet::new();
    for m in ms {
        vars.extend(m.support());
    }
    let vars: Vec<VarId> = vars.into_iter().collect();
    let rows = ms
        .iter()
        .map(|m| {
            vars.iter()
                .map(|&v| BigInt::from(m.exponent(v)))
                .collect()
        })
        .collect();
    (vars, rows)
}

fn exponent_rank(ms: &[Monomial]) -> usize {
    let (_, rows) = exponent_rows(ms);
    rank_bigint(rows)
}

/// Greedy maximum independent subset of a monomial list (by exponent rank);
/// returns the chosen indices.
pub fn greedy_independent_subset(ms: &[Monomial]) -> Vec<usize> {
    let mut chosen: Vec<usize> = Vec::new();
    let mut picked: Vec<Monomial> = Vec::new();
    for (i, m) in ms.iter().enumerate() {
        picked.push(m.clone());
        if exponent_rank(&picked) == picked.len() {
            chosen.push(i);
        } else {
            picked.pop();
        }
    }
    chosen
}

// ----------------------------------------------------- trailing-monomial bound

#[derive(Debug, Clone)]
pub struct TmBound {
    /// Trailing monomial of each surviving coefficient polynomial, in
    /// decomposition order.
    pub tm_set: Vec<Monomial>,
    /// Size of a maximum algebraically independent subset of `tm_set`: a
    /// certified lower bound on the algebraic rank of the coefficient set.
    pub bound: usize,
}

/// Certified lower bound on `alg-rank_S(f)` from the trailing monomials of
/// the decomposition `f = sum_m m * f_m` over monomials in `S`.
///
/// Each `f_m` is shifted by its constant term before the trailing monomial is
/// taken: algebraic rank is invariant under constant shifts, and the shifted
/// family never contributes the constant monomial (which is algebraically
/// dependent on its own). Purely constant coefficients drop out entirely.
pub fn alg_rank_lower_bound_via_tm(
    f: &SparsePoly,
    s: &BTreeSet<VarId>,
    order: &MonomialOrder,
) -> Result<TmBound> {
    let mut tms = Vec::new();
    for (_, part) in f.coeff_decompose(s) {
        let stripped = part.without_constant();
        if stripped.is_zero() {
            continue;
        }
        tms.push(stripped.trailing_monomial(order)?);
    }
    let bound = greedy_independent_subset(&tms).len();
    Ok(TmBound { tm_set: tms, bound })
}

#[derive(Debug, Clone)]
pub struct BlockMeasure {
    pub name: String,
    pub vars: Vec<VarId>,
    pub tm: TmBound,
}

/// Partition measure: per-block trailing-monomial rank bounds and their raw
/// sum. No asymptotic constants are applied; the sum is the artifact's number.
#[derive(Debug, Clone)]
pub struct MeasureReport {
    pub blocks: Vec<BlockMeasure>,
    pub sum: usize,
}

pub fn kalorkoti_bound(
    f: &SparsePoly,
    partition: &VarPartition,
    order: &MonomialOrder,
) -> Result<MeasureReport> {
    let mut blocks = Vec::new();
    let mut sum = 0;
    for (name, vars) in partition.blocks() {
        let s: BTreeSet<VarId> = vars.iter().copied().collect();
        let tm = alg_rank_lower_bound_via_tm(f, &s, order)?;
        sum += tm.bound;
        blocks.push(BlockMeasure {
            name: name.clone(),
            vars: vars.clone(),
            tm,
        });
    }
    Ok(MeasureReport { blocks, sum })
}

// ---------------------------------------------------- partial derivative matrix

/// Partial derivative matrix `M_{Y,Z}(f)`: entry (m_Y, m_Z) is the
/// coefficient of `m_Y * m_Z` in `f`. Rows and columns are materialized
/// sparsely (only those carrying a nonzero entry); the logical dimensions are
/// recorded separately. Absent rows and columns are zero and cannot affect
/// the rank.
#[derive(Debug, Clone)]
pub struct PDMatrix {
    pub row_monomials: Vec<Monomial>,
    pub col_monomials: Vec<Monomial>,
    pub entries: Vec<Vec<Value>>,
    pub logical_rows: u128,
    pub logical_cols: u128,
    pub field: FieldSpec,
    pub y_vars: Vec<VarId>,
    pub z_vars: Vec<VarId>,
}

pub fn pd_matrix(f: &SparsePoly, y: &[VarId], z: &[VarId]) -> Result<PDMatrix> {
    if y.len() > PD_SIDE_LIMIT || z.len() > PD_SIDE_LIMIT {
        return Err(IpsError::SizeGuard(format!(
            "partial derivative matrix sides {} x {} exceed 2^{PD_SIDE_LIMIT}",
            y.len(),
            z.len()
        )));
    }
    pd_matrix_pruned(f, y, z)
}

/// As `pd_matrix` but without the side guard; used internally where only the
/// materialized (pruned) dimensions matter.
pub(crate) fn pd_matrix_pruned(f: &SparsePoly, y: &[VarId], z: &[VarId]) -> Result<PDMatrix> {
    let yset: BTreeSet<VarId> = y.iter().copied().collect();
    let zset: BTreeSet<VarId> = z.iter().copied().collect();
    if !yset.is_disjoint(&zset) {
        return Err(IpsError::Precondition("Y and Z overlap".into()));
    }
    for v in f.support_vars() {
        if !yset.contains(&v) && !zset.contains(&v) {
            return Err(IpsError::Precondition(format!(
                "(Y, Z) does not cover variable {}",
                f.vars().name(v)
            )));
        }
    }
    let mut cells: BTreeMap<Monomial, BTreeMap<Monomial, Value>> = BTreeMap::new();
    for (m, c) in f.terms() {
        let (my, mz) = m.split(|v| yset.contains(&v));
        cells.entry(my).or_default().insert(mz, c.clone());
    }
    let row_monomials: Vec<Monomial> = cells.keys().cloned().collect();
    let mut col_set: BTreeSet<Monomial> = BTreeSet::new();
    for row in cells.values() {
        col_set.extend(row.keys().cloned());
    }
    let col_monomials: Vec<Monomial> = col_set.into_iter().collect();
    let col_index: BTreeMap<&Monomial, usize> = col_monomials
        .iter()
        .enumerate()
        .map(|(i, m)| (m, i))
        .collect();
    let field = f.field().clone();
    let mut entries = vec![vec![field.zero(); col_monomials.len()]; row_monomials.len()];
    for (i, my) in row_monomials.iter().enumerate() {
        for (mz, c) in &cells[my] {
            entries[i][col_index[mz]] = c.clone();
        }
    }
    Ok(PDMatrix {
        row_monomials,
        col_monomials,
        entries,
        logical_rows: 1u128 << y.len().min(127),
        logical_cols: 1u128 << z.len().min(127),
        field,
        y_vars: y.to_vec(),
        z_vars: z.to_vec(),
    })
}

/// Exact rank of the full logical matrix (equal to the rank of the pruned
/// materialization).
pub fn rank_exact(m: &PDMatrix) -> Result<usize> {
    match &m.field {
        FieldSpec::Rationals => rank_rational(&m.entries),
        FieldSpec::Prime(p) => {
            let rows: Vec<Vec<u64>> = m
                .entries
                .iter()
                .map(|row| {
                    row.iter()
                        .map(|v| match v {
                            Value::Fp(x) => *x,
                            _ => 0,
                        })
                        .collect()
                })
                .collect();
            Ok(rank_modp(rows, *p))
        }
        FieldSpec::Extension(_) => rank_generic(&m.entries, &m.field),
    }
}

// ------------------------------------------- rank over the function field F(T)

#[derive(Debug, Clone)]
pub struct RankTrialReport {
    /// Maximum rank across trials: a certified lower bound on the rank over
    /// the rational function field in the substituted variables.
    pub max_rank: usize,
    /// Rank per trial; `None` marks a discarded trial (a coefficient
    /// denominator vanished under the chosen prime).
    pub ranks: Vec<Option<usize>>,
    pub discarded: usize,
}

/// Lower-bounds `rank_{F(T)}(M_{Y,Z}(g))` by substituting uniformly random
/// values for the variables outside `Y` and `Z` over `F_p` and taking exact
/// ranks; substitution can only lower the rank, so the maximum across trials
/// is a sound lower bound.
pub fn rank_over_function_field(
    g: &SparsePoly,
    y: &[VarId],
    z: &[VarId],
    trials: usize,
    prime: u64,
    seed: u64,
) -> Result<RankTrialReport> {
    let yset: BTreeSet<VarId> = y.iter().copied().collect();
    let zset: BTreeSet<VarId> = z.iter().copied().collect();
    if !yset.is_disjoint(&zset) {
        return Err(IpsError::Precondition("Y and Z overlap".into()));
    }
    let tvars: Vec<VarId> = g
        .support_vars()
        .into_iter()
        .filter(|v| !yset.contains(v) && !zset.contains(v))
        .collect();
    let mut ranks = Vec::with_capacity(trials);
    let mut discarded = 0;
    let mut max_rank = 0;
    for t in 0..trials {
        let mut rng = ChaCha8Rng::seed_from_u64(crate::derive_seed(seed, t as u64));
        let tau: BTreeMap<VarId, u64> = tvars
            .iter()
            .map(|&v| (v, rng.gen_range(0..prime)))
            .collect();
        match rank_after_substitution(g, &yset, &zset, &tau, prime) {
            Ok(r) => {
                max_rank = max_rank.max(r);
                ranks.push(Some(r));
            }
            Err(IpsError::DivisionByZero) => {
                discarded += 1;
                ranks.push(None);
            }
            Err(e) => return Err(e),
        }
    }
    Ok(RankTrialReport {
        max_rank,
        ranks,
        discarded,
    })
}

fn rank_after_substitution(
    g: &SparsePoly,
    yset: &BTreeSet<VarId>,
    zset: &BTreeSet<VarId>,
    tau: &BTreeMap<VarId, u64>,
    p: u64,
) -> Result<usize> {
    let mut rows: BTreeMap<Monomial, BTreeMap<Monomial, u64>> = BTreeMap::new();
    for (m, c) in g.terms() {
        let mut cv = g.field().reduce_mod_p(c, p)?;
        let mut ypart = Vec::new();
        let mut zpart = Vec::new();
        for (v, e) in m.pairs() {
            if yset.contains(&v) {
                ypart.push((v, e));
            } else if zset.contains(&v) {
                zpart.push((v, e));
            } else {
                let x = tau[&v] % p;
                cv = mulmod(cv, crate::algebra::field::powmod(x, e as u128, p), p);
            }
        }
        let my = Monomial::from_pairs(ypart);
        let mz = Monomial::from_pairs(zpart);
        let cell = rows.entry(my).or_default().entry(mz).or_insert(0);
        *cell = (*cell + cv) % p;
    }
    let mut cols: BTreeSet<Monomial> = BTreeSet::new();
    for r in rows.values() {
        cols.extend(r.keys().cloned());
    }
    let cols: Vec<Monomial> = cols.into_iter().collect();
    let col_index: BTreeMap<&Monomial, usize> =
        cols.iter().enumerate().map(|(i, m)| (m, i)).collect();
    let mat: Vec<Vec<u64>> = rows
        .values()
        .map(|r| {
            let mut row = vec![0u64; cols.len()];
            for (mz, &v) in r {
                row[col_index[mz]] = v;
            }
            row
        })
        .collect();
    Ok(rank_modp(mat, p))
}

/// Multilinear fast path: rank of the partial derivative matrix over `F_p`,
/// with rows and columns addressed by support masks. Requires variable ids
/// below 64.
pub fn pd_rank_multilinear_modp(
    f: &SparsePoly,
    y: &[VarId],
    z: &[VarId],
    p: u64,
) -> Result<usize> {
    if !f.is_multilinear() {
        return Err(IpsError::Precondition("fast path needs a multilinear polynomial".into()));
    }
    if (y.len() + z.len()) > 26 || y.len() > 14 || z.len() > 14 {
        return Err(IpsError::SizeGuard("dense mask-indexed matrix too large".into()));
    }
    let mut ymask = 0usize;
    for &v in y {
        if v >= 64 {
            return Err(IpsError::SizeGuard("mask path needs variable ids below 64".into()));
        }
        ymask |= 1 << v;
    }
    let mut zmask = 0usize;
    for &v in z {
        if v >= 64 {
            return Err(IpsError::SizeGuard("mask path needs variable ids below 64".into()));
        }
        zmask |= 1 << v;
    }
    if ymask & zmask != 0 {
        return Err(IpsError::Precondition("Y and Z overlap".into()));
    }
    let mut mat = vec![vec![0u64; 1 << z.len()]; 1 << y.len()];
    for (m, c) in f.terms() {
        let mask = m.support_mask().ok_or_else(|| {
            IpsError::SizeGuard("mask path needs variable ids below 64".into())
        })? as usize;
        if mask & !(ymask | zmask) != 0 {
            return Err(IpsError::Precondition("(Y, Z) does not cover the support".into()));
        }
        let row = pext(mask, ymask);
        let col = pext(mask, zmask);
        let cv = f.field().reduce_mod_p(c, p)?;
        mat[row][col] = (mat[row][col] + cv) % p;
    }
    Ok(rank_modp(mat, p))
}

/// Software bit-extract: compacts the bits of `x` selected by `mask`.
fn pext(x: usize, mut mask: usize) -> usize {
    let mut out = 0usize;
    let mut bit = 0;
    while mask != 0 {
        let low = mask & mask.wrapping_neg();
        if x & low != 0 {
            out |= 1 << bit;
        }
        bit += 1;
        mask ^= low;
    }
    out
}

/// Dense-table variant of `rank_over_function_field` for inverses computed by
/// `boolean_inverse_dense_modp`. `y`/`z` partition a subset of the cube
/// variables; everything else is substituted.
pub fn rank_over_function_field_dense(
    cube: &DenseCube,
    y: &[VarId],
    z: &[VarId],
    trials: usize,
    seed: u64,
) -> Result<RankTrialReport> {
    let p = cube.p;
    let n = cube.vars.len();
    let pos: BTreeMap<VarId, usize> = cube.vars.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let mut ymask = 0usize;
    for v in y {
        ymask |= 1 << pos[v];
    }
    let mut zmask = 0usize;
    for v in z {
        zmask |= 1 << pos[v];
    }
    if ymask & zmask != 0 {
        return Err(IpsError::Precondition("Y and Z overlap".into()));
    }
    let tmask: usize = ((1usize << n) - 1) & !(ymask | zmask);
    let tbits = tmask.count_ones() as usize;
    let mut ranks = Vec::with_capacity(trials);
    let mut max_rank = 0;
    for t in 0..trials {
        let mut rng = ChaCha8Rng::seed_from_u64(crate::derive_seed(seed, t as u64));
        let tau: Vec<u64> = (0..tbits).map(|_| rng.gen_range(0..p)).collect();
        // subset products of tau, indexed by compacted t-mask
        let mut prod = vec![1u64; 1 << tbits];
        for s in 1usize..(1 << tbits) {
            let low = s.trailing_zeros() as usize;
            prod[s] = mulmod(prod[s & (s - 1)], tau[low], p);
        }
        let ybits = ymask.count_ones() as usize;
        let zbits = zmask.count_ones() as usize;
        let mut mat = vec![vec![0u64; 1 << zbits]; 1 << ybits];
        for (mask, &c) in cube.coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let row = pext(mask, ymask);
            let col = pext(mask, zmask);
            let tsel = pext(mask, tmask);
            let v = mulmod(c, prod[tsel], p);
            mat[row][col] = (mat[row][col] + v) % p;
        }
        let r = rank_modp(mat, p);
        max_rank = max_rank.max(r);
        ranks.push(Some(r));
    }
    Ok(RankTrialReport {
        max_rank,
        ranks,
        discarded: 0,
    })
}

// -------------------------------------------------------- evaluation dimension

#[derive(Debug, Clone, Copy)]
pub enum SampleSpec {
    /// All |S|^{|Y|} substitutions (guarded).
    Exhaustive,
    /// A seeded sample of the given size.
    Count(usize, u64),
}

/// `Eval-dim_{X,Y,S}(f)`: dimension of the span of the substituted
/// polynomials `f(X, beta)` over `beta in S^{|Y|}`, as coefficient vectors
/// over X-monomials. Monotone nondecreasing in the sample and a lower bound
/// on the coefficient-space dimension.
pub fn eval_dim_lower_bound(
    f: &SparsePoly,
    xvars: &[VarId],
    yvars: &[VarId],
    s_vals: &[Value],
    spec: SampleSpec,
) -> Result<usize> {
    let xset: BTreeSet<VarId> = xvars.iter().copied().collect();
    let yset: BTreeSet<VarId> = yvars.iter().copied().collect();
    if !xset.is_disjoint(&yset) {
        return Err(IpsError::Precondition("X and Y parts overlap".into()));
    }
    for v in f.support_vars() {
        if !xset.contains(&v) && !yset.contains(&v) {
            return Err(IpsError::Precondition(format!(
                "(X, Y) does not cover variable {}",
                f.vars().name(v)
            )));
        }
    }
    let field = f.field().clone();
    let base = s_vals.len();
    let substitutions: Vec<Vec<usize>> = match spec {
        SampleSpec::Exhaustive => {
            let total = (base as u128).checked_pow(yvars.len() as u32);
            match total {
                Some(t) if t <= 1 << 20 => {}
                _ => {
                    return Err(IpsError::SizeGuard(
                        "exhaustive evaluation-dimension enumeration too large".into(),
                    ))
                }
            }
            let total = base.pow(yvars.len() as u32);
            (0..total)
                .map(|mut idx| {
                    (0..yvars.len())
                        .map(|_| {
                            let d = idx % base;
                            idx /= base;
                            d
                        })
                        .collect()
                })
                .collect()
        }
        SampleSpec::Count(k, seed) => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..k)
                .map(|_| (0..yvars.len()).map(|_| rng.gen_range(0..base)).collect())
                .collect()
        }
    };
    let mut rows: Vec<BTreeMap<Monomial, Value>> = Vec::new();
    let mut columns: BTreeSet<Monomial> = BTreeSet::new();
    for digits in substitutions {
        let assignment: BTreeMap<VarId, Value> = yvars
            .iter()
            .zip(&digits)
            .map(|(&v, &d)| (v, s_vals[d].clone()))
            .collect();
        let sub = f.substitute(&assignment)?;
        let mut row = BTreeMap::new();
        for (m, c) in sub.terms() {
            columns.insert(m.clone());
            row.insert(m.clone(), c.clone());
        }
        rows.push(row);
    }
    let columns: Vec<Monomial> = columns.into_iter().collect();
    let col_index: BTreeMap<&Monomial, usize> =
        columns.iter().enumerate().map(|(i, m)| (m, i)).collect();
    let mat: Vec<Vec<Value>> = rows
        .into_iter()
        .map(|row| {
            let mut r = vec![field.zero(); columns.len()];
            for (m, c) in row {
                r[col_index[&m]] = c;
            }
            r
        })
        .collect();
    if columns.is_empty() {
        return Ok(0);
    }
    match &field {
        FieldSpec::Rationals => rank_rational(&mat),
        _ => rank_generic(&mat, &field),
    }
}

// ------------------------------------------------------------- partitions

/// Uniform over balanced bipartitions: seeded shuffle, split in half.
pub fn random_balanced_partition<R: Rng>(
    vars: &[VarId],
    rng: &mut R,
) -> Result<(Vec<VarId>, Vec<VarId>)> {
    if !vars.len().is_multiple_of(2) {
        return Err(IpsError::InvalidParameter(format!(
            "balanced partition needs an even variable count, got {}",
            vars.len()
        )));
    }
    let mut shuffled = vars.to_vec();
    shuffled.shuffle(rng);
    let half = shuffled.len() / 2;
    let mut y = shuffled[..half].to_vec();
    let mut z = shuffled[half..].to_vec();
    y.sort_unstable();
    z.sort_unstable();
    Ok((y, z))
}

/// Each variable lands in Y independently with probability 1/2.
pub fn random_partition<R: Rng>(vars: &[VarId], rng: &mut R) -> (Vec<VarId>, Vec<VarId>) {
    let mut y = Vec::new();
    let mut z = Vec::new();
    for &v in vars {
        if rng.gen_bool(0.5) {
            y.push(v);
        } else {
            z.push(v);
        }
    }
    (y, z)
}

/// All balanced bipartition shapes of an even-sized variable list, as
/// unordered {Y, Z} pairs listed lexicographically (Y contains the first
/// variable, removing the duplicate mirror images).
pub fn enumerate_balanced_partitions(vars: &[VarId]) -> Result<Vec<(Vec<VarId>, Vec<VarId>)>> {
    if !vars.len().is_multiple_of(2) {
        return Err(IpsError::InvalidParameter(
            "balanced partition needs an even variable count".into(),
        ));
    }
    let n = vars.len();
    let half = n / 2;
    let mut out = Vec::new();
    for mask in 0usize..(1 << n) {
        if mask.count_ones() as usize != half || mask & 1 == 0 {
            continue;
        }
        let y: Vec<VarId> = (0..n).filter(|i| (mask >> i) & 1 == 1).map(|i| vars[i]).collect();
        let z: Vec<VarId> = (0..n).filter(|i| (mask >> i) & 1 == 0).map(|i| vars[i]).collect();
        out.push((y, z));
    }
    Ok(out)
}

/// Helper for reporting: monomial list as display strings.
pub fn monomials_display(ms: &[Monomial], table: &VarTable) -> Vec<String> {
    ms.iter().map(|m| m.display(table)).collect()
}
