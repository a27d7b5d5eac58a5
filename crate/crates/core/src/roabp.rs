//! Read-once oblivious branching programs and sums thereof: evaluation,
//! polynomial extraction, multilinearization with Boolean-axiom witnesses,
//! width lower bounds from prefix-cut ranks, and the rank-collapse experiment
//! over random balanced partitions.

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::algebra::field::{FieldSpec, Value};
use crate::algebra::monomial::Monomial;
use crate::algebra::poly::SparsePoly;
use crate::algebra::vars::{VarId, VarTable};
use crate::error::{IpsError, Result};
use crate::measures::{pd_matrix, rank_exact, random_balanced_partition};

/// Edge labels are dense univariate coefficient lists; all constructions in
/// scope use degree at most 2.
pub const MAX_LABEL_DEGREE: usize = 8;
/// Extraction guards.
pub const MAX_EXTRACT_VARS: usize = 24;
pub const MAX_EXTRACT_WIDTH: usize = 64;

/// Univariate edge label, little-endian coefficients `c0 + c1 x + ...`.
pub type UniPoly = Vec<Value>;

#[derive(Debug, Clone)]
pub struct Layer {
    pub rows: usize,
    pub cols: usize,
    /// `labels[r][c]` labels the edge from vertex `r` to vertex `c`.
    pub labels: Vec<Vec<UniPoly>>,
}

/// A layered read-once oblivious branching program. Layer `j` reads the
/// `j`-th variable of `order`; the source and terminal layers have width 1.
#[derive(Debug, Clone)]
pub struct Roabp {
    field: FieldSpec,
    vars: Arc<VarTable>,
    order: Vec<VarId>,
    layers: Vec<Layer>,
}

impl Roabp {
    pub fn new(
        field: FieldSpec,
        vars: Arc<VarTable>,
        order: Vec<VarId>,
        layers: Vec<Layer>,
    ) -> Result<Roabp> {
        if order.len() != layers.len() {
            return Err(IpsError::InvalidParameter(format!(
                "{} layers for {} variables",
                layers.len(),
                order.len()
            )));
        }
        let mut prev = 1usize;
        for (j, layer) in layers.iter().enumerate() {
            if layer.rows != prev {
                return Err(IpsError::InvalidParameter(format!(
                    "layer {j} has {} rows, expected {prev}",
                    layer.rows
                )));
            }
            if layer.labels.len() != layer.rows
                || layer.labels.iter().any(|r| r.len() != layer.cols)
            {
                return Err(IpsError::InvalidParameter(format!(
                    "layer {j} label matrix shape mismatch"
                )));
            }
            for row in &layer.labels {
                for label in row {
                    if label.len() > MAX_LABEL_DEGREE + 1 {
                        return Err(IpsError::SizeGuard(format!(
                            "edge label degree exceeds {MAX_LABEL_DEGREE}"
                        )));
                    }
                    for c in label {
                        if !field.contains(c) {
                            return Err(IpsError::NotAnElement(field.to_string()));
                        }
                    }
                }
            }
            prev = layer.cols;
        }
        if prev != 1 {
            return Err(IpsError::InvalidParameter(
                "terminal layer must have width 1".into(),
            ));
        }
        Ok(Roabp {
            field,
            vars,
            order,
            layers,
        })
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn vars(&self) -> &Arc<VarTable> {
        &self.vars
    }

    pub fn order(&self) -> &[VarId] {
        &self.order
    }

    pub fn num_vars(&self) -> usize {
        self.order.len()
    }

    pub fn width(&self) -> usize {
        self.layers
            .iter()
            .flat_map(|l| [l.rows, l.cols])
            .max()
            .unwrap_or(1)
    }

    /// True when every edge label is linear.
    pub fn is_multilinear(&self) -> bool {
        self.layers
            .iter()
            .all(|l| l.labels.iter().all(|r| r.iter().all(|p| p.len() <= 2)))
    }

    fn eval_label(&self, label: &UniPoly, x: &Value) -> Result<Value> {
        let mut acc = self.field.zero();
        for c in label.iter().rev() {
            acc = self.field.add(&self.field.mul(&acc, x)?, c)?;
        }
        Ok(acc)
    }

    /// Matrix-product fold of the label matrices at a point.
    pub fn eval(&self, point: &BTreeMap<VarId, Value>) -> Result<Value> {
        let mut vec = vec![self.field.one()];
        for (layer, &v) in self.layers.iter().zip(&self.order) {
            let x = point
                .get(&v)
                .ok_or_else(|| IpsError::MissingAssignment(self.vars.name(v).to_string()))?;
            let mut next = vec![self.field.zero(); layer.cols];
            for (r, row) in layer.labels.iter().enumerate() {
                if self.field.is_zero(&vec[r]) {
                    continue;
                }
                for (c, label) in row.iter().enumerate() {
                    let lv = self.eval_label(label, x)?;
                    let prod = self.field.mul(&vec[r], &lv)?;
                    next[c] = self.field.add(&next[c], &prod)?;
                }
            }
            vec = next;
        }
        Ok(vec.pop().expect("terminal width 1"))
    }

    /// The computed polynomial: the same fold with symbolic univariates,
    /// returned in canonical sparse form.
    pub fn extract(&self) -> Result<SparsePoly> {
        if self.num_vars() > MAX_EXTRACT_VARS || self.width() > MAX_EXTRACT_WIDTH {
            return Err(IpsError::SizeGuard(format!(
                "extraction guarded to {MAX_EXTRACT_VARS} variables and width {MAX_EXTRACT_WIDTH}"
            )));
        }
        let mut vec = vec![SparsePoly::constant(
            self.field.clone(),
            self.vars.clone(),
            self.field.one(),
        )];
        for (layer, &v) in self.layers.iter().zip(&self.order) {
            let mut next =
                vec![SparsePoly::zero(self.field.clone(), self.vars.clone()); layer.cols];
            for (r, row) in layer.labels.iter().enumerate() {
                if vec[r].is_zero() {
                    continue;
                }
                for (c, label) in row.iter().enumerate() {
                    for (k, coeff) in label.iter().enumerate() {
                        if self.field.is_zero(coeff) {
                            continue;
                        }
                        let m = Monomial::from_pairs([(v, k as u32)]);
                        let term = vec[r].mul_monomial(&m, coeff)?;
                        next[c] = next[c].add(&term)?;
                    }
                }
            }
            vec = next;
        }
        Ok(vec.pop().expect("terminal width 1"))
    }

    /// Replaces each label `c0 + sum_{k>=1} c_k x^k` by
    /// `c0 + (sum_{k>=1} c_k) x`; width and order are unchanged and the
    /// result computes `mult` of the original polynomial (x^k and x agree on
    /// the cube).
    pub fn multilinearize(&self) -> Result<Roabp> {
        let mut layers = Vec::with_capacity(self.layers.len());
        for layer in &self.layers {
            let mut labels = Vec::with_capacity(layer.rows);
            for row in &layer.labels {
                let mut new_row = Vec::with_capacity(layer.cols);
                for label in row {
                    let c0 = label.first().cloned().unwrap_or_else(|| self.field.zero());
                    let mut c1 = self.field.zero();
                    for c in label.iter().skip(1) {
                        c1 = self.field.add(&c1, c)?;
                    }
                    new_row.push(vec![c0, c1]);
                }
                labels.push(new_row);
            }
            layers.push(Layer {
                rows: layer.rows,
                cols: layer.cols,
                labels,
            });
        }
        Roabp::new(
            self.field.clone(),
            self.vars.clone(),
            self.order.clone(),
            layers,
        )
    }
}

/// Sum of ROABPs over a shared universe; member orders may differ. The total
/// width is the sum of member widths.
#[derive(Debug, Clone)]
pub struct SumRoabp {
    pub members: Vec<Roabp>,
}

impl SumRoabp {
    pub fn new(members: Vec<Roabp>) -> Result<SumRoabp> {
        if members.is_empty() {
            return Err(IpsError::InvalidParameter("empty sum".into()));
        }
        let f0 = members[0].field.clone();
        let v0 = members[0].vars.clone();
        for m in &members[1..] {
            if m.field != f0 {
                return Err(IpsError::MixedFields(f0.to_string(), m.field.to_string()));
            }
            if !Arc::ptr_eq(&m.vars, &v0) && m.vars != v0 {
                return Err(IpsError::UniverseMismatch);
            }
        }
        Ok(SumRoabp { members })
    }

    pub fn total_width(&self) -> usize {
        self.members.iter().map(|m| m.width()).sum()
    }

    pub fn field(&self) -> &FieldSpec {
        &self.members[0].field
    }

    pub fn vars(&self) -> &Arc<VarTable> {
        &self.members[0].vars
    }

    pub fn extract(&self) -> Result<SparsePoly> {
        let mut acc = self.members[0].extract()?;
        for m in &self.members[1..] {
            acc = acc.add(&m.extract()?)?;
        }
        Ok(acc)
    }
}

/// Result of multilinearizing a sum: the member-wise multilinearization and
/// the Boolean-axiom witnesses with
/// `extract(A) = extract(B) + sum_j h_j (x_j^2 - x_j)`, re-verified exactly
/// before return. Witnesses are indexed by variable id.
#[derive(Debug, Clone)]
pub struct MultilinearizedSum {
    pub b: SumRoabp,
    pub witnesses: Vec<(VarId, SparsePoly)>,
}

/// Divides `diff` by the Boolean axioms in ascending variable order; the
/// final remainder must vanish (the input is assumed zero on the cube).
fn boolean_witnesses(diff: &SparsePoly) -> Result<Vec<(VarId, SparsePoly)>> {
    let mut witnesses = Vec::new();
    let mut rem = diff.clone();
    let ids: Vec<VarId> = diff.vars().ids().collect();
    for v in ids {
        let (q, r) = rem.divide_by_boolean(v)?;
        witnesses.push((v, q));
        rem = r;
    }
    if !rem.is_zero() {
        return Err(IpsError::Internal(
            "nonzero remainder after dividing by all Boolean axioms".into(),
        ));
    }
    Ok(witnesses)
}

pub fn multilinearize_sum_with_witnesses(sum: &SumRoabp) -> Result<MultilinearizedSum> {
    let field = sum.field().clone();
    let vars = sum.vars().clone();
    let nvars = vars.len();
    let mut b_members = Vec::with_capacity(sum.members.len());
    let mut witness_acc: Vec<SparsePoly> =
        vec![SparsePoly::zero(field.clone(), vars.clone()); nvars];
    for member in &sum.members {
        let f = member.extract()?;
        let bm = member.multilinearize()?;
        let mult_f = bm.extract()?;
        if mult_f != f.multilinearize() {
            return Err(IpsError::Internal(
                "label multilinearization disagrees with polynomial multilinearization".into(),
            ));
        }
        let diff = f.sub(&mult_f)?;
        for (v, h) in boolean_witnesses(&diff)? {
            witness_acc[v as usize] = witness_acc[v as usize].add(&h)?;
        }
        b_members.push(bm);
    }
    let b = SumRoabp::new(b_members)?;
    // re-verify the identity exactly
    let mut rhs = b.extract()?;
    for (v, h) in witness_acc.iter().enumerate() {
        let ax = SparsePoly::from_terms(
            field.clone(),
            vars.clone(),
            [
                (Monomial::from_pairs([(v as VarId, 2)]), field.one()),
                (Monomial::var(v as VarId), field.integer(-1)),
            ],
        )?;
        rhs = rhs.add(&h.mul(&ax)?)?;
    }
    if rhs != sum.extract()? {
        return Err(IpsError::Internal(
            "witness identity failed verification".into(),
        ));
    }
    Ok(MultilinearizedSum {
        b,
        witnesses: witness_acc
            .into_iter()
            .enumerate()
            .map(|(v, h)| (v as VarId, h))
            .collect(),
    })
}

/// `max_i rank(M_{Y_i, Z_i}(f))` over the prefix cuts of the variable order:
/// a lower bound on the width of any ROABP computing multilinear `f` in that
/// order.
pub fn width_lower_bound(f: &SparsePoly, order: &[VarId]) -> Result<usize> {
    if !f.is_multilinear() {
        return Err(IpsError::Precondition(
            "width bound applies to multilinear polynomials".into(),
        ));
    }
    if order.len() > MAX_EXTRACT_VARS {
        return Err(IpsError::SizeGuard(format!(
            "width bound guarded to {MAX_EXTRACT_VARS} variables"
        )));
    }
    for v in f.support_vars() {
        if !order.contains(&v) {
            return Err(IpsError::Precondition(format!(
                "order misses variable {}",
                f.vars().name(v)
            )));
        }
    }
    let mut best = 0;
    for i in 1..=order.len() {
        let y = &order[..i];
        let z = &order[i..];
        let m = crate::measures::pd_matrix_pruned(f, y, z)?;
        best = best.max(rank_exact(&m)?);
    }
    Ok(best)
}

// ------------------------------------------------------------- weakness

#[derive(Debug, Clone, Serialize)]
pub struct MemberSegmentStats {
    /// `||Y_j| - |Z_j||` per sigma-contiguous segment of r variables.
    pub imbalances: Vec<u32>,
    /// Count of segments with imbalance/2 <= sqrt(r)/4.
    pub d_count: u32,
    /// `sum_j min(|Y_j|, |Z_j|)`: log2 of the per-term rank cap.
    pub per_term_cap_log2: u32,
}

#[derive(Debug, Clone, Serialize)]
pub struct WeaknessTrial {
    pub y: Vec<String>,
    pub z: Vec<String>,
    pub per_member: Vec<MemberSegmentStats>,
    /// `t * s^{q-1} * 2^{max_i per_term_cap_log2}` (members may have
    /// different orders; the weakest member exponent gives a sound cap).
    pub summand_cap: u128,
    pub measured_rank: usize,
    pub within_cap: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct WeaknessReport {
    pub n: usize,
    pub q: usize,
    pub r: usize,
    pub t: usize,
    pub s: usize,
    pub trials: Vec<WeaknessTrial>,
    pub cap_violations: usize,
    /// Exact per-segment balance probability
    /// `sum_{k : |k - r/2| <= sqrt(r)/4} C(r,k) / 2^r`.
    pub epsilon_exact: f64,
    /// Empirical mean of D/q across trials and members.
    pub mean_d_over_q: f64,
}

fn binom_u128(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let mut r: u128 = 1;
    for i in 0..k {
        r = r * (n - i) as u128 / (i + 1) as u128;
    }
    r
}

/// Rank-collapse experiment: for each trial, sample a balanced partition,
/// compute per-segment imbalances, the per-term and summand rank caps, and
/// the measured rank of the extracted sum. The cap inequality is a proved
/// statement given the per-term caps, so any violation is reported as such
/// (and would indicate a bug).
pub fn weakness_experiment(
    sum: &SumRoabp,
    q: usize,
    r: usize,
    trials: usize,
    seed: u64,
) -> Result<WeaknessReport> {
    let n = sum.vars().len();
    if q * r != n {
        return Err(IpsError::InvalidParameter(format!(
            "q*r = {} but the sum reads {n} variables",
            q * r
        )));
    }
    for m in &sum.members {
        if !m.is_multilinear() {
            return Err(IpsError::Precondition(
                "weakness experiment needs multilinear members".into(),
            ));
        }
    }
    let t = sum.members.len();
    let s = sum.members.iter().map(|m| m.width()).max().unwrap_or(1);
    let a = sum.extract()?;
    let all_vars: Vec<VarId> = sum.vars().ids().collect();

    // epsilon: per-segment balance probability at segment length r
    let sqrt_r_quarter = (r as f64).sqrt() / 4.0;
    let mut eps_num: u128 = 0;
    for k in 0..=r as u64 {
        let imbalance_half = ((2.0 * k as f64) - r as f64).abs() / 2.0;
        if imbalance_half <= sqrt_r_quarter {
            eps_num += binom_u128(r as u64, k);
        }
    }
    let epsilon_exact = eps_num as f64 / (1u128 << r) as f64;

    let mut out_trials = Vec::with_capacity(trials);
    let mut violations = 0;
    let mut d_sum = 0.0;
    let mut d_terms = 0usize;
    for trial in 0..trials {
        let mut rng = ChaCha8Rng::seed_from_u64(crate::derive_seed(seed, trial as u64));
        let (y, z) = random_balanced_partition(&all_vars, &mut rng)?;
        let yset: std::collections::BTreeSet<VarId> = y.iter().copied().collect();
        let mut per_member = Vec::with_capacity(t);
        let mut max_cap_log2 = 0u32;
        for member in &sum.members {
            let mut imbalances = Vec::with_capacity(q);
            let mut d_count = 0u32;
            let mut cap_log2 = 0u32;
            for j in 0..q {
                let seg = &member.order[j * r..(j + 1) * r];
                let ycount = seg.iter().filter(|v| yset.contains(v)).count() as u32;
                let zcount = r as u32 - ycount;
                let diff = ycount.abs_diff(zcount);
                imbalances.push(diff);
                if (diff as f64) / 2.0 <= sqrt_r_quarter {
                    d_count += 1;
                }
                cap_log2 += ycount.min(zcount);
            }
            d_sum += d_count as f64 / q as f64;
            d_terms += 1;
            max_cap_log2 = max_cap_log2.max(cap_log2);
            per_member.push(MemberSegmentStats {
                imbalances,
                d_count,
                per_term_cap_log2: cap_log2,
            });
        }
        let summand_cap = (t as u128)
            .saturating_mul((s as u128).saturating_pow(q as u32 - 1))
            .saturating_mul(1u128 << max_cap_log2);
        let measured_rank = match sum.field() {
            FieldSpec::Prime(p) if n <= 64 => {
                crate::measures::pd_rank_multilinear_modp(&a, &y, &z, *p)?
            }
            _ => rank_exact(&pd_matrix(&a, &y, &z)?)?,
        };
        let within_cap = (measured_rank as u128) <= summand_cap;
        if !within_cap {
            violations += 1;
        }
        out_trials.push(WeaknessTrial {
            y: y.iter().map(|&v| sum.vars().name(v).to_string()).collect(),
            z: z.iter().map(|&v| sum.vars().name(v).to_string()).collect(),
            per_member,
            summand_cap,
            measured_rank,
            within_cap,
        });
    }
    Ok(WeaknessReport {
        n,
        q,
        r,
        t,
        s,
        trials: out_trials,
        cap_violations: violations,
        epsilon_exact,
        mean_d_over_q: if d_terms == 0 {
            0.0
        } else {
            d_sum / d_terms as f64
        },
    })
}

// ---------------------------------------------------------- random programs

/// Seeded random ROABP with the given width cap and label degree, uniform
/// integer coefficients in `[-coeff_range, coeff_range]` (mapped into the
/// field).
pub fn random_roabp(
    field: &FieldSpec,
    vars: &Arc<VarTable>,
    width: usize,
    label_degree: usize,
    coeff_range: i64,
    rng: &mut ChaCha8Rng,
) -> Result<Roabp> {
    let n = vars.len();
    let mut order: Vec<VarId> = vars.ids().collect();
    order.shuffle(rng);
    let mut widths = vec![1usize];
    for _ in 1..n {
        widths.push(rng.gen_range(1..=width));
    }
    widths.push(1);
    let mut layers = Vec::with_capacity(n);
    for j in 0..n {
        let rows = widths[j];
        let cols = widths[j + 1];
        let labels: Vec<Vec<UniPoly>> = (0..rows)
            .map(|_| {
                (0..cols)
                    .map(|_| {
                        (0..=label_degree)
                            .map(|_| field.integer(rng.gen_range(-coeff_range..=coeff_range)))
                            .collect()
                    })
                    .collect()
            })
            .collect();
        layers.push(Layer { rows, cols, labels });
    }
    Roabp::new(field.clone(), vars.clone(), order, layers)
}

// ------------------------------------------------------------------ JSON

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LayerJson {
    pub rows: usize,
    pub cols: usize,
    pub labels: Vec<Vec<Vec<String>>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RoabpJson {
    pub field: String,
    pub order: Vec<String>,
    pub layers: Vec<LayerJson>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SumRoabpJson {
    pub field: String,
    pub members: Vec<RoabpJson>,
}

pub fn roabp_to_json(a: &Roabp) -> RoabpJson {
    RoabpJson {
        field: a.field.to_string(),
        order: a.order.iter().map(|&v| a.vars.name(v).to_string()).collect(),
        layers: a
            .layers
            .iter()
            .map(|l| LayerJson {
                rows: l.rows,
                cols: l.cols,
                labels: l
                    .labels
                    .iter()
                    .map(|row| {
                        row.iter()
                            .map(|lab| lab.iter().map(|c| a.field.value_to_string(c)).collect())
                            .collect()
                    })
                    .collect(),
            })
            .collect(),
    }
}

fn roabp_from_json_with(j: &RoabpJson, field: &FieldSpec, vars: &Arc<VarTable>) -> Result<Roabp> {
    let order: Vec<VarId> = j
        .order
        .iter()
        .map(|n| {
            vars.id(n)
                .ok_or_else(|| IpsError::Parse(format!("unknown variable {n}")))
        })
        .collect::<Result<_>>()?;
    let layers = j
        .layers
        .iter()
        .map(|l| {
            let labels = l
                .labels
                .iter()
                .map(|row| {
                    row.iter()
                        .map(|lab| {
                            lab.iter()
                                .map(|c| field.value_from_string(c))
                                .collect::<Result<Vec<_>>>()
                        })
                        .collect::<Result<Vec<_>>>()
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(Layer {
                rows: l.rows,
                cols: l.cols,
                labels,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Roabp::new(field.clone(), vars.clone(), order, layers)
}

pub fn roabp_from_json(j: &RoabpJson) -> Result<Roabp> {
    let field = FieldSpec::parse(&j.field)?;
    let vars = Arc::new(VarTable::from_names(j.order.iter().cloned())?);
    roabp_from_json_with(j, &field, &vars)
}

pub fn sum_to_json(s: &SumRoabp) -> SumRoabpJson {
    SumRoabpJson {
        field: s.field().to_string(),
        members: s.members.iter().map(roabp_to_json).collect(),
    }
}

pub fn sum_from_json(j: &SumRoabpJson) -> Result<SumRoabp> {
    let field = FieldSpec::parse(&j.field)?;
    let mut table = VarTable::new();
    for m in &j.members {
        for name in &m.order {
            table.intern(name)?;
        }
    }
    let vars = Arc::new(table);
    let members = j
        .members
        .iter()
        .map(|m| roabp_from_json_with(m, &field, &vars))
        .collect::<Result<Vec<_>>>()?;
    SumRoabp::new(members)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::poly::PolyBuilder;

    fn q() -> FieldSpec {
        FieldSpec::rationals()
    }

    fn chain(labels: Vec<UniPoly>, vars: &Arc<VarTable>) -> Roabp {
        let layers = labels
            .into_iter()
            .map(|l| Layer {
                rows: 1,
                cols: 1,
                labels: vec![vec![l]],
            })
            .collect();
        let order: Vec<VarId> = vars.ids().collect();
        Roabp::new(q(), vars.clone(), order, layers).unwrap()
    }

    #[test]
    fn width1_chain_extract_and_eval() {
        let vars = Arc::new(VarTable::from_names(["x1", "x2"]).unwrap());
        let one = q().one();
        let a = chain(
            vec![vec![one.clone(), one.clone()], vec![one.clone(), one.clone()]],
            &vars,
        );
        let b = PolyBuilder::new(q(), vars.clone());
        let f = a.extract().unwrap();
        assert_eq!(
            f,
            b.poly(&[("", 1), ("x1", 1), ("x2", 1), ("x1 x2", 1)])
        );
        let mut pt = BTreeMap::new();
        pt.insert(0, q().one());
        pt.insert(1, q().one());
        assert_eq!(a.eval(&pt).unwrap(), q().integer(4));
    }

    #[test]
    fn square_label_extract_and_multilinearize() {
        let vars = Arc::new(VarTable::from_names(["x1"]).unwrap());
        let a = chain(vec![vec![q().zero(), q().zero(), q().one()]], &vars);
        let b = PolyBuilder::new(q(), vars.clone());
        assert_eq!(a.extract().unwrap(), b.poly(&[("x1^2", 1)]));
        assert!(!a.is_multilinear());
        let am = a.multilinearize().unwrap();
        assert_eq!(am.extract().unwrap(), b.poly(&[("x1", 1)]));

        // label 2 + x + 3x^2 -> 2 + 4x
        let c = chain(
            vec![vec![q().integer(2), q().one(), q().integer(3)]],
            &vars,
        );
        let cm = c.multilinearize().unwrap();
        assert_eq!(cm.extract().unwrap(), b.poly(&[("", 2), ("x1", 4)]));
    }

    #[test]
    fn eval_agrees_with_extract_at_random_points() {
        let names: Vec<String> = (1..=5).map(|i| format!("x{i}")).collect();
        let vars = Arc::new(VarTable::from_names(names).unwrap());
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for _ in 0..10 {
            let a = random_roabp(&q(), &vars, 3, 2, 4, &mut rng).unwrap();
            let f = a.extract().unwrap();
            for _ in 0..5 {
                let pt: BTreeMap<VarId, Value> = vars
                    .ids()
                    .map(|v| (v, q().integer(rng.gen_range(-3..=3))))
                    .collect();
                assert_eq!(a.eval(&pt).unwrap(), f.eval(&pt).unwrap());
            }
        }
    }

    #[test]
    fn extract_commutes_with_multilinearize_random() {
        for seed in 0..10u64 {
            let names: Vec<String> = (1..=5).map(|i| format!("x{i}")).collect();
            let vars = Arc::new(VarTable::from_names(names).unwrap());
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let a = random_roabp(&q(), &vars, 3, 3, 4, &mut rng).unwrap();
            let lhs = a.multilinearize().unwrap().extract().unwrap();
            let rhs = a.extract().unwrap().multilinearize();
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn witnesses_for_single_member() {
        // (1 + x1^2)(1 + x2): mult part (1+x1)(1+x2), h1 = 1 + x2, h2 = 0
        let vars = Arc::new(VarTable::from_names(["x1", "x2"]).unwrap());
        let one = q().one();
        let a = chain(
            vec![
                vec![one.clone(), q().zero(), one.clone()],
                vec![one.clone(), one.clone()],
            ],
            &vars,
        );
        let sum = SumRoabp::new(vec![a]).unwrap();
        let mw = multilinearize_sum_with_witnesses(&sum).unwrap();
        let b = PolyBuilder::new(q(), vars.clone());
        assert_eq!(
            mw.b.extract().unwrap(),
            b.poly(&[("", 1), ("x1", 1), ("x2", 1), ("x1 x2", 1)])
        );
        assert_eq!(mw.witnesses[0].1, b.poly(&[("", 1), ("x2", 1)]));
        assert!(mw.witnesses[1].1.is_zero());
    }

    #[test]
    fn witnesses_cancel_across_members() {
        // x1^2 and -x1^2: B computes 0; member witnesses 1 and -1 sum to 0
        let vars = Arc::new(VarTable::from_names(["x1"]).unwrap());
        let plus = chain(vec![vec![q().zero(), q().zero(), q().one()]], &vars);
        let minus = chain(vec![vec![q().zero(), q().zero(), q().integer(-1)]], &vars);
        let sum = SumRoabp::new(vec![plus, minus]).unwrap();
        let mw = multilinearize_sum_with_witnesses(&sum).unwrap();
        assert!(mw.b.extract().unwrap().is_zero());
        assert!(mw.witnesses[0].1.is_zero());
    }

    #[test]
    fn already_multilinear_gives_zero_witnesses() {
        let names: Vec<String> = (1..=4).map(|i| format!("x{i}")).collect();
        let vars = Arc::new(VarTable::from_names(names).unwrap());
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let a = random_roabp(&q(), &vars, 3, 1, 4, &mut rng).unwrap();
        let sum = SumRoabp::new(vec![a]).unwrap();
        let mw = multilinearize_sum_with_witnesses(&sum).unwrap();
        assert!(mw.witnesses.iter().all(|(_, h)| h.is_zero()));
    }

    #[test]
    fn width_bound_examples() {
        let vars = Arc::new(VarTable::from_names(["x1", "x2", "x3", "x4"]).unwrap());
        let b = PolyBuilder::new(q(), vars.clone());
        let f = b.poly(&[("x1 x2", 1), ("x3 x4", 1)]);
        // order (x1, x3, x2, x4): the middle cut separates the two products
        assert_eq!(width_lower_bound(&f, &[0, 2, 1, 3]).unwrap(), 2);
        // natural order: every cut has rank <= 2
        assert_eq!(width_lower_bound(&f, &[0, 1, 2, 3]).unwrap(), 2);
        // linear polynomial: rank 2 at interior cuts
        let lin = b.poly(&[("x1", 1), ("x2", 1)]);
        assert_eq!(width_lower_bound(&lin, &[0, 1, 2, 3]).unwrap(), 2);
    }

    #[test]
    fn width_bound_sound_for_random_roabps() {
        for seed in 0..10u64 {
            let names: Vec<String> = (1..=6).map(|i| format!("x{i}")).collect();
            let vars = Arc::new(VarTable::from_names(names).unwrap());
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let a = random_roabp(&q(), &vars, 4, 1, 3, &mut rng).unwrap();
            let f = a.extract().unwrap();
            if f.is_zero() {
                continue;
            }
            let bound = width_lower_bound(&f, a.order()).unwrap();
            assert!(bound <= a.width(), "bound {bound} > width {}", a.width());
        }
    }

    #[test]
    fn weakness_smoke() {
        let names: Vec<String> = (1..=8).map(|i| format!("x{i}")).collect();
        let vars = Arc::new(VarTable::from_names(names).unwrap());
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let a = random_roabp(&q(), &vars, 2, 1, 2, &mut rng).unwrap();
        let b2 = random_roabp(&q(), &vars, 2, 1, 2, &mut rng).unwrap();
        let sum = SumRoabp::new(vec![a, b2]).unwrap();
        let rep = weakness_experiment(&sum, 2, 4, 10, 3).unwrap();
        assert_eq!(rep.cap_violations, 0);
        assert_eq!(rep.trials.len(), 10);
        // fully balanced segments: cap exponent is n/2 per member
        for tr in &rep.trials {
            for m in &tr.per_member {
                let diff_sum: u32 = m.imbalances.iter().sum();
                assert_eq!(m.per_term_cap_log2, (8 - diff_sum) / 2);
            }
        }
    }

    #[test]
    fn balance_frequency_matches_central_binomial() {
        // unconditioned sampler hits balance with frequency C(n, n/2)/2^n
        let n = 16;
        let vars: Vec<VarId> = (0..n as u32).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let samples = 10_000;
        let mut balanced = 0u32;
        for _ in 0..samples {
            let (y, _) = crate::measures::random_partition(&vars, &mut rng);
            if y.len() == n / 2 {
                balanced += 1;
            }
        }
        let p = binom_u128(n as u64, n as u64 / 2) as f64 / (1u128 << n) as f64;
        let freq = balanced as f64 / samples as f64;
        let se = (p * (1.0 - p) / samples as f64).sqrt();
        assert!(
            (freq - p).abs() <= 3.0 * se,
            "freq {freq} vs expected {p} (se {se})"
        );
    }

    #[test]
    fn rank_multiplicative_for_width1_segment_products() {
        // width-1 member: f is a product of per-segment polynomials, and
        // rank(M_{Y,Z}(prod_j g_j)) = prod_j rank(M_{Y_j,Z_j}(g_j)), each
        // segment rank capped by 2^min(|Y_j|, |Z_j|).
        let names: Vec<String> = (1..=6).map(|i| format!("x{i}")).collect();
        let vars = Arc::new(VarTable::from_names(names).unwrap());
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let a = random_roabp(&q(), &vars, 1, 1, 3, &mut rng).unwrap();
        let f = a.extract().unwrap();
        if f.is_zero() {
            return;
        }
        let all: Vec<VarId> = vars.ids().collect();
        let mut rng2 = ChaCha8Rng::seed_from_u64(4);
        let (y, z) = random_balanced_partition(&all, &mut rng2).unwrap();
        let yset: std::collections::BTreeSet<VarId> = y.iter().copied().collect();
        let total_rank = rank_exact(&pd_matrix(&f, &y, &z).unwrap()).unwrap();
        let r = 3;
        let mut seg_rank_product = 1usize;
        for j in 0..2 {
            let seg: Vec<VarId> = a.order()[j * r..(j + 1) * r].to_vec();
            // product of this segment's labels
            let mut g = SparsePoly::constant(q(), vars.clone(), q().one());
            for &v in &seg {
                let idx = a.order().iter().position(|&w| w == v).unwrap();
                let label = &a.layers[idx].labels[0][0];
                let lp = SparsePoly::from_terms(
                    q(),
                    vars.clone(),
                    label
                        .iter()
                        .enumerate()
                        .map(|(k, c)| (Monomial::from_pairs([(v, k as u32)]), c.clone())),
                )
                .unwrap();
                g = g.mul(&lp).unwrap();
            }
            let yj: Vec<VarId> = seg.iter().copied().filter(|v| yset.contains(v)).collect();
            let zj: Vec<VarId> = seg.iter().copied().filter(|v| !yset.contains(v)).collect();
            let rj = rank_exact(&pd_matrix(&g, &yj, &zj).unwrap()).unwrap();
            assert!(rj <= 1usize << yj.len().min(zj.len()));
            seg_rank_product *= rj;
        }
        assert_eq!(total_rank, seg_rank_product);
    }

    #[test]
    fn json_roundtrip() {
        let names: Vec<String> = (1..=4).map(|i| format!("x{i}")).collect();
        let vars = Arc::new(VarTable::from_names(names).unwrap());
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let a = random_roabp(&q(), &vars, 3, 2, 5, &mut rng).unwrap();
        let b = random_roabp(&q(), &vars, 2, 1, 5, &mut rng).unwrap();
        let sum = SumRoabp::new(vec![a, b]).unwrap();
        let j = sum_to_json(&sum);
        let s = serde_json::to_string(&j).unwrap();
        let back = sum_from_json(&serde_json::from_str(&s).unwrap()).unwrap();
        // ids may be assigned in a different order; compare by name
        let realigned = back.extract().unwrap().reindex(sum.vars()).unwrap();
        assert_eq!(realigned, sum.extract().unwrap());
    }
}
