//! Deterministic generators for every axiom family in scope, parameterized
//! exactly as the constructions require. Same parameters (and seed, where one
//! applies) always produce byte-identical JSON.

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::algebra::field::{FieldSpec, Value};
use crate::algebra::monomial::Monomial;
use crate::algebra::order::VarPartition;
use crate::algebra::poly::SparsePoly;
use crate::algebra::vars::{VarId, VarTable};
use crate::error::{IpsError, Result};

/// Reproducibility record emitted as a sidecar next to each generated axiom.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct InstanceDescriptor {
    pub family: String,
    pub n: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub d: Option<u64>,
    pub field: String,
    pub beta: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k_rule: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub blocks: Vec<BlockNames>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pi: Option<BTreeMap<String, String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub subset_mode: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub warning: Option<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BlockNames {
    pub name: String,
    pub vars: Vec<String>,
}

impl InstanceDescriptor {
    fn new(family: &str, n: u64, field: &FieldSpec, beta: &Value) -> InstanceDescriptor {
        InstanceDescriptor {
            family: family.to_string(),
            n,
            c: None,
            d: None,
            field: field.to_string(),
            beta: field.value_to_string(beta),
            k_rule: None,
            seed: None,
            blocks: Vec::new(),
            pi: None,
            alpha: None,
            subset_mode: None,
            warning: None,
        }
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }
}

fn blocks_to_names(table: &VarTable, partition: &VarPartition) -> Vec<BlockNames> {
    partition
        .blocks()
        .iter()
        .map(|(name, vars)| BlockNames {
            name: name.clone(),
            vars: vars.iter().map(|&v| table.name(v).to_string()).collect(),
        })
        .collect()
}

/// The shift added so the axiom misses 0 on the cube: 1 over characteristic
/// zero, or an element of `F_{p^{k+1}} \ F_{p^k}` over characteristic p.
/// For an extension field the canonical choice is the class of `z`, verified
/// to lie outside the degree-`k` subfield intersection by a Frobenius test.
fn cube_shift_beta(field: &FieldSpec) -> Result<Value> {
    match field {
        FieldSpec::Rationals => Ok(field.one()),
        FieldSpec::Prime(_) => Err(IpsError::InvalidParameter(
            "positive characteristic needs an extension field to house beta outside the base"
                .into(),
        )),
        FieldSpec::Extension(e) => {
            let mut c = vec![0u64; e.k as usize];
            c[1] = 1;
            let beta = Value::Ext(c);
            let sub_deg = e.k - 1;
            if field.in_subfield(&beta, sub_deg)? {
                return Err(IpsError::Internal(
                    "canonical generator unexpectedly lies in the subfield".into(),
                ));
            }
            Ok(beta)
        }
    }
}

/// Which subsets of each block contribute a term: the inclusive reading
/// (default) takes every `S`, including the empty set and the full block.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SubsetMode {
    Inclusive,
    ProperNonempty,
}

impl SubsetMode {
    fn as_str(&self) -> &'static str {
        match self {
            SubsetMode::Inclusive => "inclusive",
            SubsetMode::ProperNonempty => "proper-nonempty",
        }
    }
}

pub struct Instance {
    pub poly: SparsePoly,
    pub partition: VarPartition,
    pub descriptor: InstanceDescriptor,
}

/// Blockwise binary indexing family: X is split into `n / log n` blocks of
/// size `log n`; each subset `S` of a block contributes the monomial
/// `prod_{j in S} x_j * y_{t(S)}` where `t(S)` reads the characteristic
/// vector of `S` as a binary number. The shift `beta` (1 over char 0) makes
/// the system unsatisfiable on the cube.
pub fn gen_blockwise_binary(
    n: u64,
    field: &FieldSpec,
    mode: SubsetMode,
) -> Result<Instance> {
    if n < 2 || !n.is_power_of_two() {
        return Err(IpsError::InvalidParameter(format!(
            "n = {n}: need a power of two whose log divides it (valid: 2, 4, 16, 256, ...)"
        )));
    }
    let logn = n.trailing_zeros() as u64;
    if !n.is_multiple_of(logn) {
        return Err(IpsError::InvalidParameter(format!(
            "n = {n}: log2(n) = {logn} does not divide n (valid: 2, 4, 16, 256, ...)"
        )));
    }
    let nblocks = n / logn;
    let mut table = VarTable::new();
    let mut xids = Vec::new();
    for i in 1..=n {
        xids.push(table.intern(&format!("x{i}"))?);
    }
    let mut yids = Vec::new();
    for t in 0..n {
        yids.push(table.intern(&format!("y{t}"))?);
    }
    let vars = Arc::new(table);
    let beta = cube_shift_beta(field)?;

    let mut terms: Vec<(Monomial, Value)> = Vec::new();
    let mut blocks = Vec::new();
    for i in 0..nblocks {
        let block: Vec<VarId> = (0..logn)
            .map(|j| xids[(i * logn + j) as usize])
            .collect();
        blocks.push((format!("X{}", i + 1), block.clone()));
        for mask in 0..(1u64 << logn) {
            match mode {
                SubsetMode::Inclusive => {}
                SubsetMode::ProperNonempty => {
                    if mask == 0 || mask == (1 << logn) - 1 {
                        continue;
                    }
                }
            }
            let t = mask; // t(S) = sum over chosen positions j of 2^{j-1}
            let mut support: Vec<VarId> = (0..logn)
                .filter(|&j| (mask >> j) & 1 == 1)
                .map(|j| block[j as usize])
                .collect();
            support.push(yids[t as usize]);
            terms.push((Monomial::from_support(support), field.one()));
        }
    }
    terms.push((Monomial::one(), beta.clone()));
    let poly = SparsePoly::from_terms(field.clone(), vars.clone(), terms)?;
    blocks.push(("Y".to_string(), yids.clone()));
    let partition = VarPartition::new(blocks)?;
    let mut descriptor = InstanceDescriptor::new("blockwise", n, field, &beta);
    descriptor.blocks = blocks_to_names(&vars, &partition);
    descriptor.subset_mode = Some(mode.as_str().to_string());
    Ok(Instance {
        poly,
        partition,
        descriptor,
    })
}

/// Choice of the bijections from set-multilinear monomials to Y variables.
#[derive(Debug, Clone, Copy)]
pub enum PiChoice {
    /// Lexicographic rank of the column tuple, mapped to Y in row-major order.
    Lex,
    /// Seeded uniformly random bijection per block.
    Seeded(u64),
}

/// Integer `c`-th root of `m` when it is exact.
fn exact_root(m: u64, c: u32) -> Option<u64> {
    let mut r = (m as f64).powf(1.0 / c as f64).round() as u64;
    while r.pow(c) > m && r > 0 {
        r -= 1;
    }
    while (r + 1).pow(c) <= m {
        r += 1;
    }
    if r.pow(c) == m {
        Some(r)
    } else {
        None
    }
}

/// Parameter probe: all (n, c) pairs with every required quantity integral.
pub fn list_valid_smconst(n_max: u64, c_range: std::ops::RangeInclusive<u64>) -> Vec<(u64, u64)> {
    let mut out = Vec::new();
    for c in c_range {
        if c <= 3 {
            continue;
        }
        for n in 2..=n_max {
            if smconst_params(n, c).is_ok() {
                out.push((n, c));
            }
        }
    }
    out.sort();
    out
}

struct SmParams {
    ell: u64,     // n^{2/c}, row-block width
    rows: u64,    // n^2/c, variables per row
    nblocks: u64, // n^{2(1-1/c)}/c
}

fn smconst_params(n: u64, c: u64) -> Result<SmParams> {
    if c <= 3 {
        return Err(IpsError::InvalidParameter(format!("c = {c}: need c > 3")));
    }
    let ell = exact_root(n * n, c as u32).ok_or_else(|| {
        IpsError::InvalidParameter(format!("n^(2/{c}) is not an integer for n = {n}"))
    })?;
    if !(n * n).is_multiple_of(c) {
        return Err(IpsError::InvalidParameter(format!(
            "n^2/c = {}^2/{c} is not an integer",
            n
        )));
    }
    let rows = n * n / c;
    if !rows.is_multiple_of(ell) {
        return Err(IpsError::InvalidParameter(format!(
            "n^(2(1-1/c))/c is not an integer for n = {n}, c = {c}"
        )));
    }
    let nblocks = rows / ell;
    Ok(SmParams { ell, rows, nblocks })
}

/// Constant-degree set-multilinear family: `c` rows of `n^2/c` variables,
/// carved into blocks of `n^{2/c}` columns; in each block every one of the
/// `n^2` set-multilinear monomials is paired with its own Y variable under a
/// bijection `pi_k`, and the results are summed and shifted by `beta`.
pub fn gen_setmultilinear_constdeg(
    n: u64,
    c: u64,
    field: &FieldSpec,
    pi: PiChoice,
) -> Result<Instance> {
    let params = smconst_params(n, c)?;
    let (ell, rows, nblocks) = (params.ell, params.rows, params.nblocks);
    let mut table = VarTable::new();
    let mut x = vec![vec![0 as VarId; rows as usize]; c as usize];
    for (i, row) in x.iter_mut().enumerate() {
        for (j, slot) in row.iter_mut().enumerate() {
            *slot = table.intern(&format!("x_{{{},{}}}", i + 1, j + 1))?;
        }
    }
    let mut y = Vec::with_capacity((n * n) as usize);
    for i in 1..=n {
        for j in 1..=n {
            y.push(table.intern(&format!("y_{{{i},{j}}}"))?);
        }
    }
    let vars = Arc::new(table);
    let beta = cube_shift_beta(field)?;

    let mut terms: Vec<(Monomial, Value)> = Vec::new();
    let mut blocks: Vec<(String, Vec<VarId>)> = Vec::new();
    let mut pi_table: BTreeMap<String, String> = BTreeMap::new();
    let seed = match pi {
        PiChoice::Lex => None,
        PiChoice::Seeded(s) => Some(s),
    };
    for k in 0..nblocks {
        let mut block_vars = Vec::new();
        for row in x.iter() {
            for j in 0..ell {
                block_vars.push(row[(k * ell + j) as usize]);
            }
        }
        blocks.push((format!("X({})", k + 1), block_vars));
        // ranks of column tuples, then the bijection onto Y
        let count = (n * n) as usize;
        let mut perm: Vec<usize> = (0..count).collect();
        if let Some(s) = seed {
            let mut rng = ChaCha8Rng::seed_from_u64(crate::derive_seed(s, k));
            for i in (1..count).rev() {
                let j = rng.gen_range(0..=i);
                perm.swap(i, j);
            }
        }
        for rank in 0..count {
            // decode rank -> column tuple (j_1, ..., j_c), row-major
            let mut tuple = vec![0u64; c as usize];
            let mut t = rank as u64;
            for i in (0..c as usize).rev() {
                tuple[i] = t % ell;
                t /= ell;
            }
            let mut support: Vec<VarId> = tuple
                .iter()
                .enumerate()
                .map(|(i, &j)| x[i][(k * ell + j) as usize])
                .collect();
            let yid = y[perm[rank]];
            support.push(yid);
            let mono = Monomial::from_support(support.clone());
            pi_table.insert(
                mono.display(&vars),
                vars.name(yid).to_string(),
            );
            terms.push((mono, field.one()));
        }
    }
    terms.push((Monomial::one(), beta.clone()));
    let poly = SparsePoly::from_terms(field.clone(), vars.clone(), terms)?;
    blocks.push(("Y".to_string(), y.clone()));
    let partition = VarPartition::new(blocks)?;
    let mut descriptor = InstanceDescriptor::new("smconst", n, field, &beta);
    descriptor.c = Some(c);
    descriptor.seed = seed;
    descriptor.blocks = blocks_to_names(&vars, &partition);
    descriptor.pi = Some(pi_table);
    Ok(Instance {
        poly,
        partition,
        descriptor,
    })
}

/// Subset-sum axiom `sum x_i - beta`. Over characteristic zero the system is
/// unsatisfiable iff `beta` avoids `{0, ..., n}`; a satisfiable choice is
/// still generated but flagged, and verification operations will reject it.
pub fn gen_subset_sum(n: u64, beta: &Value, field: &FieldSpec) -> Result<Instance> {
    if !field.contains(beta) {
        return Err(IpsError::NotAnElement(field.to_string()));
    }
    let mut table = VarTable::new();
    let mut xids = Vec::new();
    for i in 1..=n {
        xids.push(table.intern(&format!("x{i}"))?);
    }
    let vars = Arc::new(table);
    let mut terms: Vec<(Monomial, Value)> = xids
        .iter()
        .map(|&v| (Monomial::var(v), field.one()))
        .collect();
    terms.push((Monomial::one(), field.neg(beta)?));
    let poly = SparsePoly::from_terms(field.clone(), vars.clone(), terms)?;
    let mut descriptor = InstanceDescriptor::new("subset", n, field, beta);
    if *field == FieldSpec::Rationals {
        let sat = (0..=n).any(|i| *beta == field.integer(i as i64));
        if sat {
            descriptor.warning =
                Some(format!("beta = {} lies in {{0..{n}}}: satisfiable on the cube", field.value_to_string(beta)));
        }
    }
    let partition = VarPartition::new(vec![("X".into(), xids)])?;
    Ok(Instance {
        poly,
        partition,
        descriptor,
    })
}

fn binom(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let mut r = 1u64;
    for i in 0..k {
        r = r * (n - i) / (i + 1);
    }
    r
}

/// Quadratic subset-sum family over `X = {x_0..x_{2n-1}}` and placeholder
/// variables `t_{i,j}`: `sum t_{i,j} x_i x_j - beta` with the canonical
/// `beta = 2 * C(2n, 2)`, twice the largest cube value of the sum.
pub fn gen_quadratic_subset_sum(n: u64, field: &FieldSpec) -> Result<Instance> {
    if field.characteristic() != 0 {
        return Err(IpsError::InvalidParameter(
            "the canonical beta needs characteristic zero; use the scaled family instead".into(),
        ));
    }
    if n < 1 {
        return Err(IpsError::InvalidParameter("n must be at least 1".into()));
    }
    let m = 2 * n;
    let beta = field.integer((2 * binom(m, 2)) as i64);
    let mut table = VarTable::new();
    let mut xids = Vec::new();
    for i in 0..m {
        xids.push(table.intern(&format!("x{i}"))?);
    }
    let mut terms: Vec<(Monomial, Value)> = Vec::new();
    let mut tids = Vec::new();
    for i in 0..m {
        for j in (i + 1)..m {
            let t = table.intern(&format!("t_{{{i},{j}}}"))?;
            tids.push(t);
            terms.push((
                Monomial::from_support([xids[i as usize], xids[j as usize], t]),
                field.one(),
            ));
        }
    }
    let vars = Arc::new(table);
    terms.push((Monomial::one(), field.neg(&beta)?));
    let poly = SparsePoly::from_terms(field.clone(), vars.clone(), terms)?;
    let partition = VarPartition::new(vec![("X".into(), xids), ("T".into(), tids)])?;
    let mut descriptor = InstanceDescriptor::new("quadratic", n, field, &beta);
    descriptor.blocks = blocks_to_names(&vars, &partition);
    Ok(Instance {
        poly,
        partition,
        descriptor,
    })
}

/// Which rule picks the extension degree for the scaled quadratic family.
#[derive(Debug, Clone, Copy)]
pub enum KChoice {
    Explicit(u32),
    /// Smallest k with p^k > C(2n,2) * 2^{2n}.
    RulePairs,
    /// Smallest k with p^k > C(2n,n) * 2^{2n}.
    RuleCentral,
}

/// Scaled quadratic subset-sum over positive characteristic:
/// `sum alpha_{i,j} t_{i,j} x_i x_j - beta` with `beta` outside the base
/// field. The scalars are sampled from the prime field (canonically embedded
/// in the extension) or supplied directly.
pub fn gen_scaled_quadratic(
    n: u64,
    p: u64,
    k: KChoice,
    alphas: Option<Vec<i64>>,
    seed: u64,
) -> Result<Instance> {
    let m = 2 * n;
    let npairs = binom(m, 2);
    let (kval, rule) = match k {
        KChoice::Explicit(k) => (k, "explicit"),
        KChoice::RulePairs => {
            let bound = npairs as u128 * (1u128 << (2 * n));
            let mut kk = 1u32;
            while (p as u128).checked_pow(kk).is_none_or(|v| v <= bound) {
                kk += 1;
            }
            (kk, "p^k > C(2n,2)*2^(2n)")
        }
        KChoice::RuleCentral => {
            let bound = binom(m, n) as u128 * (1u128 << (2 * n));
            let mut kk = 1u32;
            while (p as u128).checked_pow(kk).is_none_or(|v| v <= bound) {
                kk += 1;
            }
            (kk, "p^k > C(2n,n)*2^(2n)")
        }
    };
    let field = FieldSpec::extension(p, kval + 1)?;
    let beta = cube_shift_beta(&field)?;
    let alpha_vals: Vec<Value> = match &alphas {
        Some(list) => {
            if list.len() != npairs as usize {
                return Err(IpsError::InvalidParameter(format!(
                    "expected {npairs} scalars, got {}",
                    list.len()
                )));
            }
            list.iter().map(|&a| field.integer(a)).collect()
        }
        None => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..npairs)
                .map(|_| field.integer(rng.gen_range(0..p) as i64))
                .collect()
        }
    };
    let mut table = VarTable::new();
    let mut xids = Vec::new();
    for i in 0..m {
        xids.push(table.intern(&format!("x{i}"))?);
    }
    let mut terms: Vec<(Monomial, Value)> = Vec::new();
    let mut tids = Vec::new();
    let mut idx = 0;
    for i in 0..m {
        for j in (i + 1)..m {
            let t = table.intern(&format!("t_{{{i},{j}}}"))?;
            tids.push(t);
            terms.push((
                Monomial::from_support([xids[i as usize], xids[j as usize], t]),
                alpha_vals[idx].clone(),
            ));
            idx += 1;
        }
    }
    let vars = Arc::new(table);
    terms.push((Monomial::one(), field.neg(&beta)?));
    let poly = SparsePoly::from_terms(field.clone(), vars.clone(), terms)?;
    let partition = VarPartition::new(vec![("X".into(), xids), ("T".into(), tids)])?;
    let mut descriptor = InstanceDescriptor::new("scaled", n, &field, &beta);
    descriptor.k_rule = Some(format!("k={kval} ({rule})"));
    descriptor.seed = if alphas.is_some() { None } else { Some(seed) };
    descriptor.alpha = Some(
        alpha_vals
            .iter()
            .map(|a| field.value_to_string(a))
            .collect(),
    );
    descriptor.blocks = blocks_to_names(&vars, &partition);
    Ok(Instance {
        poly,
        partition,
        descriptor,
    })
}

/// A product-form axiom kept factored: `prod factors + constant`. The
/// expanded sparsity is astronomically large even at tiny sizes, so all
/// downstream uses go through evaluation; expansion is guarded by an
/// estimated term count.
#[derive(Debug, Clone)]
pub struct FactoredPoly {
    pub factors: Vec<SparsePoly>,
    pub constant: Value,
    pub field: FieldSpec,
    pub vars: Arc<VarTable>,
}

impl FactoredPoly {
    pub fn eval(&self, point: &BTreeMap<VarId, Value>) -> Result<Value> {
        let mut acc = self.field.one();
        for f in &self.factors {
            acc = self.field.mul(&acc, &f.eval(point)?)?;
        }
        self.field.add(&acc, &self.constant)
    }

    /// Expands into a sparse polynomial when the estimated term count stays
    /// under `term_limit`.
    pub fn expand(&self, term_limit: usize) -> Result<SparsePoly> {
        let mut estimate: u128 = 1;
        for f in &self.factors {
            estimate = estimate.saturating_mul(f.num_terms() as u128);
            if estimate > term_limit as u128 {
                return Err(IpsError::SizeGuard(format!(
                    "expansion would exceed {term_limit} terms"
                )));
            }
        }
        let mut acc = SparsePoly::constant(self.field.clone(), self.vars.clone(), self.field.one());
        for f in &self.factors {
            acc = acc.mul(f)?;
            if acc.num_terms() > term_limit {
                return Err(IpsError::SizeGuard(format!(
                    "expansion exceeded {term_limit} terms"
                )));
            }
        }
        acc.add_constant(&self.constant)
    }

    /// Exhaustive cube check over the full variable universe.
    pub fn is_unsat_on_cube(&self, limit: usize) -> Result<crate::hypercube::UnsatReport> {
        let vars: Vec<VarId> = self.vars.ids().collect();
        if vars.len() > limit {
            return Err(IpsError::VarLimitExceeded(vars.len(), limit));
        }
        for mask in 0..(1usize << vars.len()) {
            let point: BTreeMap<VarId, Value> = vars
                .iter()
                .enumerate()
                .map(|(i, &v)| (v, self.field.integer(((mask >> i) & 1) as i64)))
                .collect();
            if self.field.is_zero(&self.eval(&point)?) {
                return Ok(crate::hypercube::UnsatReport {
                    unsat: false,
                    witness: Some(
                        vars.iter()
                            .enumerate()
                            .map(|(i, &v)| (v, ((mask >> i) & 1) as u8))
                            .collect(),
                    ),
                });
            }
        }
        Ok(crate::hypercube::UnsatReport {
            unsat: true,
            witness: None,
        })
    }
}

pub struct FactoredInstance {
    pub poly: FactoredPoly,
    pub descriptor: InstanceDescriptor,
}

/// Vector-invariant family over `4n` x-variables: one factor
/// `1 - t + t(x_i x_l - x_j x_k)` per quadruple `i<j<k<l`, shifted by `-beta`.
/// Every factor evaluates in `{-1, 0, 1}` on the cube, so unsatisfiability
/// needs only `beta` outside that set; characteristics 2 and 3 are rejected.
pub fn gen_vector_invariant(n: u64, beta: &Value, field: &FieldSpec) -> Result<FactoredInstance> {
    let ch = field.characteristic();
    if ch == 2 || ch == 3 {
        return Err(IpsError::InvalidParameter(
            "vector-invariant family needs characteristic 0 or at least 5".into(),
        ));
    }
    if !field.contains(beta) {
        return Err(IpsError::NotAnElement(field.to_string()));
    }
    for bad in [-1i64, 0, 1] {
        if *beta == field.integer(bad) {
            return Err(IpsError::InvalidParameter(format!(
                "beta = {bad} makes the system satisfiable on the cube"
            )));
        }
    }
    let m = 4 * n;
    let mut table = VarTable::new();
    let mut xids = Vec::new();
    for i in 1..=m {
        xids.push(table.intern(&format!("x{i}"))?);
    }
    let mut quads = Vec::new();
    for i in 0..m {
        for j in (i + 1)..m {
            for k in (j + 1)..m {
                for l in (k + 1)..m {
                    let t = table.intern(&format!("t_{{{},{},{},{}}}", i + 1, j + 1, k + 1, l + 1))?;
                    quads.push((i, j, k, l, t));
                }
            }
        }
    }
    let vars = Arc::new(table);
    let one = field.one();
    let minus_one = field.integer(-1);
    let mut factors = Vec::new();
    for &(i, j, k, l, t) in &quads {
        let f = SparsePoly::from_terms(
            field.clone(),
            vars.clone(),
            [
                (Monomial::one(), one.clone()),
                (Monomial::var(t), minus_one.clone()),
                (
                    Monomial::from_support([xids[i as usize], xids[l as usize], t]),
                    one.clone(),
                ),
                (
                    Monomial::from_support([xids[j as usize], xids[k as usize], t]),
                    minus_one.clone(),
                ),
            ],
        )?;
        factors.push(f);
    }
    let poly = FactoredPoly {
        factors,
        constant: field.neg(beta)?,
        field: field.clone(),
        vars,
    };
    let descriptor = InstanceDescriptor::new("vecinv", n, field, beta);
    Ok(FactoredInstance { poly, descriptor })
}

/// Elementary symmetric axiom `e_{n,d} - beta`, with `e_{n,d}` built by the
/// standard column dynamic program.
pub fn gen_elem_sym_axiom(n: u64, d: u64, beta: &Value, field: &FieldSpec) -> Result<Instance> {
    if d < 1 || d > n {
        return Err(IpsError::InvalidParameter(format!(
            "need 1 <= d <= n, got d = {d}, n = {n}"
        )));
    }
    if !field.contains(beta) {
        return Err(IpsError::NotAnElement(field.to_string()));
    }
    let mut table = VarTable::new();
    let mut xids = Vec::new();
    for i in 1..=n {
        xids.push(table.intern(&format!("x{i}"))?);
    }
    let vars = Arc::new(table);
    let esym = elem_sym_poly(&xids, d, field, &vars)?;
    let poly = esym.add_constant(&field.neg(beta)?)?;
    let partition = VarPartition::new(vec![("X".into(), xids)])?;
    let mut descriptor = InstanceDescriptor::new("esym", n, field, beta);
    descriptor.d = Some(d);
    Ok(Instance {
        poly,
        partition,
        descriptor,
    })
}

/// All of `e_{n,0}, ..., e_{n,d}` over the given variables via the column DP
/// `e[j] += e[j-1] * x_i`, one variable at a time.
pub fn elem_sym_all(
    xs: &[VarId],
    d: u64,
    field: &FieldSpec,
    vars: &Arc<VarTable>,
) -> Result<Vec<SparsePoly>> {
    let d = d as usize;
    let mut e: Vec<SparsePoly> = Vec::with_capacity(d + 1);
    e.push(SparsePoly::constant(
        field.clone(),
        vars.clone(),
        field.one(),
    ));
    for _ in 0..d {
        e.push(SparsePoly::zero(field.clone(), vars.clone()));
    }
    for &x in xs {
        for j in (1..=d).rev() {
            let shifted = e[j - 1].mul_monomial(&Monomial::var(x), &field.one())?;
            e[j] = e[j].add(&shifted)?;
        }
    }
    Ok(e)
}

pub fn elem_sym_poly(
    xs: &[VarId],
    d: u64,
    field: &FieldSpec,
    vars: &Arc<VarTable>,
) -> Result<SparsePoly> {
    Ok(elem_sym_all(xs, d, field, vars)?.pop().expect("nonempty"))
}
