//! Measure invariants: the trailing-monomial bound never exceeds the
//! decomposition size, modular trial ranks never exceed the symbolic rank
//! over the function field, rank subadditivity, and the evaluation-dimension
//! inequality.

use std::collections::BTreeSet;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use ipslab_core::algebra::{FieldSpec, Monomial, MonomialOrder, SparsePoly, VarId, VarTable};
use ipslab_core::measures::{
    alg_rank_lower_bound_via_tm, eval_dim_lower_bound, pd_matrix, rank_exact,
    rank_over_function_field, SampleSpec,
};

fn table(names: &[String]) -> Arc<VarTable> {
    Arc::new(VarTable::from_names(names.iter().cloned()).unwrap())
}

fn random_multilinear(
    vars: &Arc<VarTable>,
    terms: usize,
    rng: &mut ChaCha8Rng,
) -> SparsePoly {
    let field = FieldSpec::rationals();
    let n = vars.len();
    SparsePoly::from_terms(
        field.clone(),
        vars.clone(),
        (0..terms).map(|_| {
            let mono = Monomial::from_support(
                (0..n).filter(|_| rng.gen_bool(0.5)).map(|v| v as VarId),
            );
            (mono, field.integer(rng.gen_range(-9..=9)))
        }),
    )
    .unwrap()
}

#[test]
fn tm_bound_at_most_decomposition_size() {
    let names: Vec<String> = (1..=8).map(|i| format!("x{i}")).collect();
    let vars = table(&names);
    let order = MonomialOrder::parse("X", &vars).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    for _ in 0..50 {
        let f = random_multilinear(&vars, 6, &mut rng);
        let s: BTreeSet<VarId> = (0..8)
            .filter(|_| rng.gen_bool(0.5))
            .map(|v| v as VarId)
            .collect();
        let parts = f.coeff_decompose(&s).len();
        let tm = alg_rank_lower_bound_via_tm(&f, &s, &order).unwrap();
        assert!(tm.bound <= parts);
    }
}

// ----- symbolic rank over F(T) by fraction-free elimination on polynomial
// entries, used as the oracle for the random-substitution trials -----

fn exact_poly_div(num: &SparsePoly, den: &SparsePoly, order: &MonomialOrder) -> SparsePoly {
    let field = num.field().clone();
    let mut rem = num.clone();
    let mut quot = SparsePoly::zero(field.clone(), num.vars().clone());
    while !rem.is_zero() {
        let lm_r = rem.leading_monomial(order).unwrap();
        let lm_d = den.leading_monomial(order).unwrap();
        let m = lm_r
            .checked_div(&lm_d)
            .expect("exact division: leading monomial must divide");
        let c = field
            .div(rem.coeff(&lm_r).unwrap(), den.coeff(&lm_d).unwrap())
            .unwrap();
        let t = SparsePoly::from_terms(field.clone(), num.vars().clone(), [(m, c)]).unwrap();
        quot = quot.add(&t).unwrap();
        rem = rem.sub(&t.mul(den).unwrap()).unwrap();
    }
    quot
}

/// Rank over the fraction field of F[T] (= F(T)) by Bareiss elimination with
/// polynomial entries and exact division.
fn rank_symbolic(entries: Vec<Vec<SparsePoly>>, order: &MonomialOrder) -> usize {
    let rows = entries.len();
    if rows == 0 {
        return 0;
    }
    let cols = entries[0].len();
    let field = entries[0][0].field().clone();
    let vars = entries[0][0].vars().clone();
    let one = SparsePoly::constant(field.clone(), vars, field.one());
    let mut m = entries;
    let mut prev = one;
    let mut rank = 0;
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
                let num = m[r][c]
                    .mul(&m[rank][col])
                    .unwrap()
                    .sub(&m[r][col].mul(&m[rank][c]).unwrap())
                    .unwrap();
                m[r][c] = if num.is_zero() {
                    num
                } else {
                    exact_poly_div(&num, &prev, order)
                };
            }
            m[r][col] = SparsePoly::zero(m[r][col].field().clone(), m[r][col].vars().clone());
        }
        prev = m[rank][col].clone();
        rank += 1;
        col += 1;
    }
    rank
}

#[test]
fn trial_rank_never_exceeds_symbolic_rank() {
    // 4 X-variables, up to 3 T-variables
    let names: Vec<String> = (1..=4)
        .map(|i| format!("x{i}"))
        .chain((1..=3).map(|i| format!("t{i}")))
        .collect();
    let vars = table(&names);
    let order = MonomialOrder::parse("X>T", &vars).unwrap();
    let field = FieldSpec::rationals();
    let mut rng = ChaCha8Rng::seed_from_u64(47);
    let prime = ipslab_core::algebra::field::default_rank_prime();
    for case in 0..25 {
        // random multilinear g over X union T
        let g = SparsePoly::from_terms(
            field.clone(),
            vars.clone(),
            (0..8).map(|_| {
                let mono = Monomial::from_support(
                    (0..7).filter(|_| rng.gen_bool(0.4)).map(|v| v as VarId),
                );
                (mono, field.integer(rng.gen_range(-5..=5)))
            }),
        )
        .unwrap();
        let y = [0 as VarId, 1];
        let z = [2 as VarId, 3];
        let trials = rank_over_function_field(&g, &y, &z, 3, prime, case).unwrap();
        // symbolic matrix: entries are polynomials in T
        let yset: BTreeSet<VarId> = y.into_iter().collect();
        let zset: BTreeSet<VarId> = z.into_iter().collect();
        let mut cells: std::collections::BTreeMap<(Monomial, Monomial), SparsePoly> =
            Default::default();
        for (m, c) in g.terms() {
            let (my, rest) = m.split(|v| yset.contains(&v));
            let (mz, mt) = rest.split(|v| zset.contains(&v));
            let entry = cells.entry((my, mz)).or_insert_with(|| {
                SparsePoly::zero(field.clone(), vars.clone())
            });
            *entry = entry
                .add(&SparsePoly::from_terms(field.clone(), vars.clone(), [(mt, c.clone())]).unwrap())
                .unwrap();
        }
        let rows: BTreeSet<Monomial> = cells.keys().map(|(a, _)| a.clone()).collect();
        let cols: BTreeSet<Monomial> = cells.keys().map(|(_, b)| b.clone()).collect();
        let entries: Vec<Vec<SparsePoly>> = rows
            .iter()
            .map(|r| {
                cols.iter()
                    .map(|c| {
                        cells
                            .get(&(r.clone(), c.clone()))
                            .cloned()
                            .unwrap_or_else(|| SparsePoly::zero(field.clone(), vars.clone()))
                    })
                    .collect()
            })
            .collect();
        let symbolic = rank_symbolic(entries, &order);
        assert!(
            trials.max_rank <= symbolic,
            "trial rank {} exceeds symbolic rank {symbolic}",
            trials.max_rank
        );
    }
}

/// The quadratic-instance inverse at n = 2 has full symbolic rank over the
/// function field in the t-variables: the 4x4 matrix for a balanced
/// partition eliminates to rank 4 with polynomial entries, which also
/// certifies that the modular-trial value 4 is exact rather than a lower
/// bound.
#[test]
fn quadratic_inverse_has_full_symbolic_rank_at_n2() {
    use ipslab_core::hypercube::boolean_inverse;
    use ipslab_core::instances::gen_quadratic_subset_sum;

    let field = FieldSpec::rationals();
    let inst = gen_quadratic_subset_sum(2, &field).unwrap();
    let g = boolean_inverse(&inst.poly, 24).unwrap();
    let vars = inst.poly.vars();
    let xid = |n: &str| vars.id(n).unwrap();
    let y = [xid("x0"), xid("x1")];
    let z = [xid("x2"), xid("x3")];
    let yset: BTreeSet<VarId> = y.into_iter().collect();
    let zset: BTreeSet<VarId> = z.into_iter().collect();
    let order = MonomialOrder::parse("x>t", vars).unwrap();

    let mut cells: std::collections::BTreeMap<(Monomial, Monomial), SparsePoly> =
        Default::default();
    for (m, c) in g.inverse().terms() {
        let (my, rest) = m.split(|v| yset.contains(&v));
        let (mz, mt) = rest.split(|v| zset.contains(&v));
        let entry = cells
            .entry((my, mz))
            .or_insert_with(|| SparsePoly::zero(field.clone(), g.inverse().vars().clone()));
        *entry = entry
            .add(
                &SparsePoly::from_terms(
                    field.clone(),
                    g.inverse().vars().clone(),
                    [(mt, c.clone())],
                )
                .unwrap(),
            )
            .unwrap();
    }
    let rows: BTreeSet<Monomial> = cells.keys().map(|(a, _)| a.clone()).collect();
    let cols: BTreeSet<Monomial> = cells.keys().map(|(_, b)| b.clone()).collect();
    assert_eq!(rows.len(), 4);
    assert_eq!(cols.len(), 4);
    let entries: Vec<Vec<SparsePoly>> = rows
        .iter()
        .map(|r| {
            cols.iter()
                .map(|c| {
                    cells
                        .get(&(r.clone(), c.clone()))
                        .cloned()
                        .unwrap_or_else(|| {
                            SparsePoly::zero(field.clone(), g.inverse().vars().clone())
                        })
                })
                .collect()
        })
        .collect();
    assert_eq!(rank_symbolic(entries, &order), 4);
}

/// The dense mod-p interpolation path and the sparse rational path give the
/// same trial ranks on the same instance and partitions.
#[test]
fn dense_and_sparse_rank_paths_agree() {
    use ipslab_core::hypercube::{boolean_inverse, boolean_inverse_dense_modp};
    use ipslab_core::instances::gen_quadratic_subset_sum;
    use ipslab_core::measures::rank_over_function_field_dense;

    let field = FieldSpec::rationals();
    let p = ipslab_core::algebra::field::default_rank_prime();
    let inst = gen_quadratic_subset_sum(2, &field).unwrap();
    let g = boolean_inverse(&inst.poly, 24).unwrap();
    let dense = boolean_inverse_dense_modp(&inst.poly, p, 24).unwrap();
    let vars = inst.poly.vars();
    let xid = |n: &str| vars.id(n).unwrap();
    for (yn, zn) in [
        (["x0", "x1"], ["x2", "x3"]),
        (["x0", "x2"], ["x1", "x3"]),
        (["x0", "x3"], ["x1", "x2"]),
    ] {
        let y: Vec<VarId> = yn.iter().map(|n| xid(n)).collect();
        let z: Vec<VarId> = zn.iter().map(|n| xid(n)).collect();
        let sparse = rank_over_function_field(g.inverse(), &y, &z, 3, p, 99).unwrap();
        let dense_rep = rank_over_function_field_dense(&dense, &y, &z, 3, 99).unwrap();
        // same derived seeds, same substitutions, same ranks
        assert_eq!(sparse.ranks, dense_rep.ranks);
    }
}

#[test]
fn pd_rank_subadditive() {
    let names: Vec<String> = (1..=8).map(|i| format!("x{i}")).collect();
    let vars = table(&names);
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let y: Vec<VarId> = (0..4).collect();
    let z: Vec<VarId> = (4..8).collect();
    for _ in 0..20 {
        let f = random_multilinear(&vars, 8, &mut rng);
        let g = random_multilinear(&vars, 8, &mut rng);
        let rf = rank_exact(&pd_matrix(&f, &y, &z).unwrap()).unwrap();
        let rg = rank_exact(&pd_matrix(&g, &y, &z).unwrap()).unwrap();
        let rfg = rank_exact(&pd_matrix(&f.add(&g).unwrap(), &y, &z).unwrap()).unwrap();
        assert!(rfg <= rf + rg);
    }
}

#[test]
fn eval_dim_bounded_by_pd_rank() {
    let names: Vec<String> = (1..=8).map(|i| format!("x{i}")).collect();
    let vars = table(&names);
    let field = FieldSpec::rationals();
    let mut rng = ChaCha8Rng::seed_from_u64(123);
    let x: Vec<VarId> = (0..4).collect();
    let y: Vec<VarId> = (4..8).collect();
    let s01 = [field.integer(0), field.integer(1)];
    for _ in 0..20 {
        let f = random_multilinear(&vars, 8, &mut rng);
        let d = eval_dim_lower_bound(&f, &x, &y, &s01, SampleSpec::Exhaustive).unwrap();
        let r = rank_exact(&pd_matrix(&f, &x, &y).unwrap()).unwrap();
        assert!(d <= r, "eval-dim {d} > rank {r}");
    }
}
