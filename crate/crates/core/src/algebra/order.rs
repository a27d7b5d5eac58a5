//! Graded lexicographic monomial orders over blocks of variables, and
//! variable partitions.

use std::cmp::Ordering;
use std::collections::BTreeSet;

use crate::algebra::monomial::Monomial;
use crate::algebra::vars::{VarId, VarTable};
use crate::error::{IpsError, Result};

/// Total order on monomials: total degree first, then lexicographic by a
/// variable priority list (earlier variables are greater).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonomialOrder {
    priority: Vec<VarId>,
    rank: Vec<Option<u32>>, // var id -> position in priority
}

impl MonomialOrder {
    pub fn new(priority: Vec<VarId>) -> Result<MonomialOrder> {
        let mut seen = BTreeSet::new();
        for &v in &priority {
            if !seen.insert(v) {
                return Err(IpsError::InvalidParameter(format!(
                    "variable {v} repeated in monomial order"
                )));
            }
        }
        let max = priority.iter().copied().max().map_or(0, |m| m as usize + 1);
        let mut rank = vec![None; max];
        for (i, &v) in priority.iter().enumerate() {
            rank[v as usize] = Some(i as u32);
        }
        Ok(MonomialOrder { priority, rank })
    }

    /// Order from variable blocks, earlier block greater; variables keep their
    /// in-block order.
    pub fn from_blocks(blocks: &[Vec<VarId>]) -> Result<MonomialOrder> {
        MonomialOrder::new(blocks.iter().flatten().copied().collect())
    }

    /// Parses a spec like `"X>Y"`: variables are grouped by their alphabetic
    /// name prefix and groups are ordered as listed (every X variable beats
    /// every Y variable). Within a group, ascending id means ascending order,
    /// so `y0` is the smallest Y monomial. Variables outside the listed
    /// groups sort below all of them.
    pub fn parse(spec: &str, table: &VarTable) -> Result<MonomialOrder> {
        let groups: Vec<&str> = spec.split('>').map(str::trim).collect();
        if groups.iter().any(|g| g.is_empty()) {
            return Err(IpsError::Parse(format!("bad order spec {spec:?}")));
        }
        let mut blocks: Vec<Vec<VarId>> = vec![Vec::new(); groups.len()];
        let mut leftover: Vec<VarId> = Vec::new();
        for id in table.ids() {
            let name = table.name(id);
            let prefix: String = name.chars().take_while(|c| c.is_alphabetic()).collect();
            match groups
                .iter()
                .position(|g| g.eq_ignore_ascii_case(&prefix))
            {
                Some(i) => blocks[i].push(id),
                None => leftover.push(id),
            }
        }
        blocks.push(leftover);
        for b in blocks.iter_mut() {
            b.reverse(); // priority lists are largest-first
        }
        MonomialOrder::from_blocks(&blocks)
    }

    pub fn priority(&self) -> &[VarId] {
        &self.priority
    }

    pub fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        match a.degree().cmp(&b.degree()) {
            Ordering::Equal => {}
            o => return o,
        }
        // lexicographic walk in priority order: first differing exponent
        // wins. Variables outside the priority list sort below every listed
        // one, higher ids first, so the order stays total on any universe.
        let key = |pairs: Vec<(VarId, u32)>| -> Vec<(u32, u32, u32)> {
            let mut v: Vec<(u32, u32, u32)> = pairs
                .into_iter()
                .map(|(var, e)| {
                    match self.rank.get(var as usize).copied().flatten() {
                        Some(r) => (r, 0, e),
                        None => (u32::MAX, u32::MAX - var, e),
                    }
                })
                .collect();
            v.sort_unstable();
            v
        };
        let ka = key(a.pairs());
        let kb = key(b.pairs());
        let mut ia = ka.iter();
        let mut ib = kb.iter();
        loop {
            match (ia.next(), ib.next()) {
                (None, None) => return Ordering::Equal,
                // the side that still has exponents on earlier variables is greater
                (Some(_), None) => return Ordering::Greater,
                (None, Some(_)) => return Ordering::Less,
                (Some(&(ra, ta, ea)), Some(&(rb, tb, eb))) => {
                    if (ra, ta) != (rb, tb) {
                        // earlier-priority variable with a positive exponent wins
                        return if (ra, ta) < (rb, tb) {
                            Ordering::Greater
                        } else {
                            Ordering::Less
                        };
                    }
                    if ea != eb {
                        return if ea > eb { Ordering::Greater } else { Ordering::Less };
                    }
                }
            }
        }
    }

    pub fn max<'a>(&self, a: &'a Monomial, b: &'a Monomial) -> &'a Monomial {
        if self.cmp(a, b) == Ordering::Less {
            b
        } else {
            a
        }
    }

    pub fn min<'a>(&self, a: &'a Monomial, b: &'a Monomial) -> &'a Monomial {
        if self.cmp(a, b) == Ordering::Greater {
            b
        } else {
            a
        }
    }
}

/// Disjoint variable blocks `X_1, ..., X_t` covering a declared variable set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VarPartition {
    blocks: Vec<(String, Vec<VarId>)>,
}

impl VarPartition {
    pub fn new(blocks: Vec<(String, Vec<VarId>)>) -> Result<VarPartition> {
        let mut seen = BTreeSet::new();
        for (name, vars) in &blocks {
            for &v in vars {
                if !seen.insert(v) {
                    return Err(IpsError::InvalidParameter(format!(
                        "variable {v} appears in two blocks (second: {name})"
                    )));
                }
            }
        }
        Ok(VarPartition { blocks })
    }

    pub fn blocks(&self) -> &[(String, Vec<VarId>)] {
        &self.blocks
    }

    pub fn declared(&self) -> BTreeSet<VarId> {
        self.blocks.iter().flat_map(|(_, vs)| vs.iter().copied()).collect()
    }
}
