//! Wire format for polynomials:
//! `{"field": "...", "vars": [...], "terms": [{"coeff": "...", "mono": {"x1": 2}}]}`.
//!
//! Rational coefficients serialize as `num/den` (plain integers when the
//! denominator is 1); extension-field elements as `[c0,c1,...]`. For extension
//! fields the deterministically chosen modulus is echoed back in the output.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::algebra::field::FieldSpec;
use crate::algebra::monomial::Monomial;
use crate::algebra::poly::SparsePoly;
use crate::algebra::vars::VarTable;
use crate::error::{IpsError, Result};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PolyJson {
    pub field: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub modulus: Option<String>,
    pub vars: Vec<String>,
    pub terms: Vec<TermJson>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TermJson {
    pub coeff: String,
    pub mono: BTreeMap<String, u32>,
}

pub fn poly_to_json(p: &SparsePoly) -> PolyJson {
    let field = p.field();
    let modulus = field.ext_spec().map(|e| {
        let cs: Vec<String> = e.modulus.iter().map(|c| c.to_string()).collect();
        format!("[{}]", cs.join(","))
    });
    let terms = p
        .terms()
        .map(|(m, c)| {
            let mono: BTreeMap<String, u32> = m
                .pairs()
                .into_iter()
                .map(|(v, e)| (p.vars().name(v).to_string(), e))
                .collect();
            TermJson {
                coeff: field.value_to_string(c),
                mono,
            }
        })
        .collect();
    PolyJson {
        field: field.to_string(),
        modulus,
        vars: p.vars().names().to_vec(),
        terms,
    }
}

pub fn poly_from_json(j: &PolyJson) -> Result<SparsePoly> {
    let field = FieldSpec::parse(&j.field)?;
    if let (Some(m), Some(e)) = (&j.modulus, field.ext_spec()) {
        let expect: Vec<String> = e.modulus.iter().map(|c| c.to_string()).collect();
        let expect = format!("[{}]", expect.join(","));
        if m.split_whitespace().collect::<String>() != expect {
            return Err(IpsError::Parse(format!(
                "modulus {m} does not match the deterministic modulus {expect} for {}",
                j.field
            )));
        }
    }
    let vars = Arc::new(VarTable::from_names(j.vars.iter().cloned())?);
    let mut terms = Vec::with_capacity(j.terms.len());
    for t in &j.terms {
        let c = field.value_from_string(&t.coeff)?;
        let mut pairs = Vec::with_capacity(t.mono.len());
        for (name, &e) in &t.mono {
            let id = vars
                .id(name)
                .ok_or_else(|| IpsError::Parse(format!("variable {name} not in vars list")))?;
            pairs.push((id, e));
        }
        terms.push((Monomial::from_pairs(pairs), c));
    }
    SparsePoly::from_terms(field, vars, terms)
}

pub fn poly_to_json_string(p: &SparsePoly) -> String {
    serde_json::to_string_pretty(&poly_to_json(p)).expect("serializable")
}

pub fn poly_from_json_str(s: &str) -> Result<SparsePoly> {
    let j: PolyJson =
        serde_json::from_str(s).map_err(|e| IpsError::Parse(format!("bad polynomial JSON: {e}")))?;
    poly_from_json(&j)
}
