//! Sparse multivariate polynomials with exact coefficients.
//!
//! A polynomial owns its [`FieldSpec`] and a shared variable universe. The
//! zero polynomial is the empty term map; no zero coefficient is ever stored,
//! so the representation is canonical and equality is structural. All values
//! are immutable after construction and every operation is a pure function,
//! safe to share read-only across threads.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use crate::algebra::field::{FieldSpec, Value};
use crate::algebra::monomial::Monomial;
use crate::algebra::order::MonomialOrder;
use crate::algebra::vars::{VarId, VarTable};
use crate::error::{IpsError, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparsePoly {
    field: FieldSpec,
    vars: Arc<VarTable>,
    terms: BTreeMap<Monomial, Value>,
}

impl SparsePoly {
    pub fn zero(field: FieldSpec, vars: Arc<VarTable>) -> SparsePoly {
        SparsePoly {
            field,
            vars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(field: FieldSpec, vars: Arc<VarTable>, c: Value) -> SparsePoly {
        let mut p = SparsePoly::zero(field, vars);
        if !p.field.is_zero(&c) {
            p.terms.insert(Monomial::one(), c);
        }
        p
    }

    /// Builds from (monomial, coefficient) terms, summing duplicates and
    /// dropping zeros.
    pub fn from_terms<I: IntoIterator<Item = (Monomial, Value)>>(
        field: FieldSpec,
        vars: Arc<VarTable>,
        terms: I,
    ) -> Result<SparsePoly> {
        let mut p = SparsePoly::zero(field, vars);
        for (m, c) in terms {
            p.add_term(m, c)?;
        }
        Ok(p)
    }

    fn add_term(&mut self, m: Monomial, c: Value) -> Result<()> {
        if !self.field.contains(&c) {
            return Err(IpsError::NotAnElement(self.field.to_string()));
        }
        if self.field.is_zero(&c) {
            return Ok(());
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = self.field.add(e.get(), &c)?;
                if self.field.is_zero(&s) {
                    e.remove();
                } else {
                    e.insert(s);
                }
            }
        }
        Ok(())
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn vars(&self) -> &Arc<VarTable> {
        &self.vars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Value)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &Monomial) -> Option<&Value> {
        self.terms.get(m)
    }

    pub fn constant_term(&self) -> Value {
        self.terms
            .get(&Monomial::one())
            .cloned()
            .unwrap_or_else(|| self.field.zero())
    }

    /// Total degree; undefined for the zero polynomial.
    pub fn degree(&self) -> Option<u64> {
        self.terms.keys().map(|m| m.degree()).max()
    }

    pub fn is_multilinear(&self) -> bool {
        self.terms.keys().all(|m| m.is_multilinear())
    }

    /// Variables that actually occur.
    pub fn support_vars(&self) -> BTreeSet<VarId> {
        let mut s = BTreeSet::new();
        for m in self.terms.keys() {
            s.extend(m.support());
        }
        s
    }

    fn compatible(&self, other: &SparsePoly) -> Result<()> {
        if self.field != other.field {
            return Err(IpsError::MixedFields(
                self.field.to_string(),
                other.field.to_string(),
            ));
        }
        if !Arc::ptr_eq(&self.vars, &other.vars) && self.vars != other.vars {
            return Err(IpsError::UniverseMismatch);
        }
        Ok(())
    }

    pub fn add(&self, other: &SparsePoly) -> Result<SparsePoly> {
        self.compatible(other)?;
        let mut out = self.clone();
        for (m, c) in other.terms.iter() {
            out.add_term(m.clone(), c.clone())?;
        }
        Ok(out)
    }

    pub fn sub(&self, other: &SparsePoly) -> Result<SparsePoly> {
        self.compatible(other)?;
        let mut out = self.clone();
        for (m, c) in other.terms.iter() {
            out.add_term(m.clone(), self.field.neg(c)?)?;
        }
        Ok(out)
    }

    pub fn neg(&self) -> Result<SparsePoly> {
        let mut out = SparsePoly::zero(self.field.clone(), self.vars.clone());
        for (m, c) in self.terms.iter() {
            out.terms.insert(m.clone(), self.field.neg(c)?);
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Value) -> Result<SparsePoly> {
        if !self.field.contains(c) {
            return Err(IpsError::NotAnElement(self.field.to_string()));
        }
        let mut out = SparsePoly::zero(self.field.clone(), self.vars.clone());
        if self.field.is_zero(c) {
            return Ok(out);
        }
        for (m, v) in self.terms.iter() {
            let s = self.field.mul(v, c)?;
            if !self.field.is_zero(&s) {
                out.terms.insert(m.clone(), s);
            }
        }
        Ok(out)
    }

    pub fn mul(&self, other: &SparsePoly) -> Result<SparsePoly> {
        self.compatible(other)?;
        let mut out = SparsePoly::zero(self.field.clone(), self.vars.clone());
        for (ma, ca) in self.terms.iter() {
            for (mb, cb) in other.terms.iter() {
                let c = self.field.mul(ca, cb)?;
                out.add_term(ma.mul(mb), c)?;
            }
        }
        Ok(out)
    }

    pub fn mul_monomial(&self, m: &Monomial, c: &Value) -> Result<SparsePoly> {
        let mut out = SparsePoly::zero(self.field.clone(), self.vars.clone());
        for (ma, ca) in self.terms.iter() {
            out.add_term(ma.mul(m), self.field.mul(ca, c)?)?;
        }
        Ok(out)
    }

    pub fn add_constant(&self, c: &Value) -> Result<SparsePoly> {
        let mut out = self.clone();
        out.add_term(Monomial::one(), c.clone())?;
        Ok(out)
    }

    /// Drops the constant term. Algebraic rank is invariant under constant
    /// shifts, which is what the trailing-monomial measure relies on.
    pub fn without_constant(&self) -> SparsePoly {
        let mut out = self.clone();
        out.terms.remove(&Monomial::one());
        out
    }

    /// Evaluates at a point given as variable -> value; every variable in the
    /// support must be assigned.
    pub fn eval(&self, point: &BTreeMap<VarId, Value>) -> Result<Value> {
        let mut acc = self.field.zero();
        for (m, c) in self.terms.iter() {
            let mut term = c.clone();
            for (v, e) in m.pairs() {
                let x = point.get(&v).ok_or_else(|| {
                    IpsError::MissingAssignment(self.vars.name(v).to_string())
                })?;
                let xe = self.field.pow(x, e as u128)?;
                term = self.field.mul(&term, &xe)?;
            }
            acc = self.field.add(&acc, &term)?;
        }
        Ok(acc)
    }

    /// Substitutes values for a subset of the variables, leaving the rest
    /// symbolic.
    pub fn substitute(&self, assignment: &BTreeMap<VarId, Value>) -> Result<SparsePoly> {
        let mut out = SparsePoly::zero(self.field.clone(), self.vars.clone());
        for (m, c) in self.terms.iter() {
            let mut coeff = c.clone();
            let mut rest = Vec::new();
            for (v, e) in m.pairs() {
                match assignment.get(&v) {
                    Some(x) => {
                        let xe = self.field.pow(x, e as u128)?;
                        coeff = self.field.mul(&coeff, &xe)?;
                    }
                    None => rest.push((v, e)),
                }
            }
            out.add_term(Monomial::from_pairs(rest), coeff)?;
        }
        Ok(out)
    }

    /// `mult(f)`: clamps every exponent to 1, summing colliding images.
    /// Linear in `f` and preserves all values on the Boolean cube.
    pub fn multilinearize(&self) -> SparsePoly {
        let mut out = SparsePoly::zero(self.field.clone(), self.vars.clone());
        for (m, c) in self.terms.iter() {
            out.add_term(m.multilinearized(), c.clone())
                .expect("same field");
        }
        out
    }

    pub fn leading_monomial(&self, order: &MonomialOrder) -> Result<Monomial> {
        self.extremal(order, true)
    }

    pub fn trailing_monomial(&self, order: &MonomialOrder) -> Result<Monomial> {
        self.extremal(order, false)
    }

    fn extremal(&self, order: &MonomialOrder, leading: bool) -> Result<Monomial> {
        let mut best: Option<&Monomial> = None;
        for m in self.terms.keys() {
            best = Some(match best {
                None => m,
                Some(b) => {
                    if leading {
                        order.max(b, m)
                    } else {
                        order.min(b, m)
                    }
                }
            });
        }
        best.cloned().ok_or(IpsError::ZeroPolynomial)
    }

    /// Writes `f = sum_m m * f_m` over monomials `m` in the variables `S`,
    /// returning exactly the nonzero `f_m` (polynomials in the remaining
    /// variables).
    pub fn coeff_decompose(&self, s: &BTreeSet<VarId>) -> BTreeMap<Monomial, SparsePoly> {
        let mut parts: BTreeMap<Monomial, SparsePoly> = BTreeMap::new();
        for (m, c) in self.terms.iter() {
            let (inside, outside) = m.split(|v| s.contains(&v));
            parts
                .entry(inside)
                .or_insert_with(|| SparsePoly::zero(self.field.clone(), self.vars.clone()))
                .add_term(outside, c.clone())
                .expect("same field");
        }
        parts.retain(|_, p| !p.is_zero());
        parts
    }

    /// Divides by the Boolean axiom `x^2 - x`, returning `(quotient, remainder)`
    /// with the remainder linear in `x`. Exact: `self = q*(x^2-x) + r`.
    pub fn divide_by_boolean(&self, x: VarId) -> Result<(SparsePoly, SparsePoly)> {
        let mut quot = SparsePoly::zero(self.field.clone(), self.vars.clone());
        let mut rem = SparsePoly::zero(self.field.clone(), self.vars.clone());
        for (m, c) in self.terms.iter() {
            let e = m.exponent(x);
            if e <= 1 {
                rem.add_term(m.clone(), c.clone())?;
                continue;
            }
            // x^e = (x^2 - x)(x^{e-2} + ... + x + 1) + x
            let rest: Vec<(VarId, u32)> =
                m.pairs().into_iter().filter(|&(v, _)| v != x).collect();
            for i in 0..=(e - 2) {
                let mut q = rest.clone();
                if i > 0 {
                    q.push((x, i));
                }
                quot.add_term(Monomial::from_pairs(q), c.clone())?;
            }
            let mut r = rest;
            r.push((x, 1));
            rem.add_term(Monomial::from_pairs(r), c.clone())?;
        }
        Ok((quot, rem))
    }

    /// Re-expresses the polynomial over another universe containing all of its
    /// variable names.
    pub fn reindex(&self, target: &Arc<VarTable>) -> Result<SparsePoly> {
        let mut map: BTreeMap<VarId, VarId> = BTreeMap::new();
        for v in self.support_vars() {
            let name = self.vars.name(v);
            let id = target.id(name).ok_or_else(|| {
                IpsError::InvalidParameter(format!("variable {name} missing from target universe"))
            })?;
            map.insert(v, id);
        }
        let mut out = SparsePoly::zero(self.field.clone(), target.clone());
        for (m, c) in self.terms.iter() {
            let remapped =
                Monomial::from_pairs(m.pairs().into_iter().map(|(v, e)| (map[&v], e)));
            out.add_term(remapped, c.clone())?;
        }
        Ok(out)
    }

    pub fn display(&self, table: &VarTable) -> String {
        if self.is_zero() {
            return "0".into();
        }
        self.terms
            .iter()
            .map(|(m, c)| {
                let cs = self.field.value_to_string(c);
                if m.is_one() {
                    cs
                } else if cs == "1" {
                    m.display(table)
                } else {
                    format!("{}*{}", cs, m.display(table))
                }
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

/// Convenience builder for tests and generators.
pub struct PolyBuilder {
    field: FieldSpec,
    vars: Arc<VarTable>,
}

impl PolyBuilder {
    pub fn new(field: FieldSpec, vars: Arc<VarTable>) -> PolyBuilder {
        PolyBuilder { field, vars }
    }

    pub fn vars(&self) -> &Arc<VarTable> {
        &self.vars
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    /// Parses terms like `("x1 x2", 3)` with whitespace-separated variable
    /// names carrying optional `^e` suffixes; the empty string is the constant.
    pub fn term(&self, mono: &str, coeff: i64) -> (Monomial, Value) {
        let mut pairs = Vec::new();
        for part in mono.split_whitespace() {
            let (name, exp) = match part.split_once('^') {
                Some((n, e)) => (n, e.parse().expect("exponent")),
                None => (part, 1),
            };
            let id = self.vars.id(name).expect("known variable");
            pairs.push((id, exp));
        }
        (Monomial::from_pairs(pairs), self.field.integer(coeff))
    }

    pub fn poly(&self, terms: &[(&str, i64)]) -> SparsePoly {
        SparsePoly::from_terms(
            self.field.clone(),
            self.vars.clone(),
            terms.iter().map(|&(m, c)| self.term(m, c)),
        )
        .expect("valid terms")
    }
}
