//! Monomials with a bitmask fast path for the multilinear case.
//!
//! Nearly every polynomial in scope is multilinear, so a monomial whose
//! exponents are all 1 and whose variables have ids below 64 is stored as a
//! single `u64` support mask. The general representation is a sorted list of
//! `(variable, exponent)` pairs with no zero exponents. The representation is
//! canonical: a monomial that fits the mask form is never stored as pairs, so
//! structural equality and hashing are sound.

use std::fmt;

use crate::algebra::vars::{VarId, VarTable};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
enum Repr {
    Mask(u64),
    Pairs(Box<[(VarId, u32)]>),
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Monomial(Repr);

impl Monomial {
    /// The empty monomial (constant 1).
    pub fn one() -> Monomial {
        Monomial(Repr::Mask(0))
    }

    pub fn var(v: VarId) -> Monomial {
        Monomial::from_pairs([(v, 1)])
    }

    /// Builds a canonical monomial; duplicate variables have exponents summed,
    /// zero exponents are dropped.
    pub fn from_pairs<I: IntoIterator<Item = (VarId, u32)>>(pairs: I) -> Monomial {
        let mut v: Vec<(VarId, u32)> = Vec::new();
        for (var, exp) in pairs {
            if exp == 0 {
                continue;
            }
            v.push((var, exp));
        }
        v.sort_by_key(|&(var, _)| var);
        v.dedup_by(|b, a| {
            if a.0 == b.0 {
                a.1 += b.1;
                true
            } else {
                false
            }
        });
        Monomial::from_sorted(v)
    }

    /// Multilinear monomial with the given support.
    pub fn from_support<I: IntoIterator<Item = VarId>>(vars: I) -> Monomial {
        Monomial::from_pairs(vars.into_iter().map(|v| (v, 1)))
    }

    /// Multilinear monomial from a support bitmask over variable ids `0..64`.
    pub fn from_mask(mask: u64) -> Monomial {
        Monomial(Repr::Mask(mask))
    }

    fn from_sorted(v: Vec<(VarId, u32)>) -> Monomial {
        let maskable = v.iter().all(|&(var, exp)| exp == 1 && var < 64);
        if maskable {
            let mut m = 0u64;
            for &(var, _) in &v {
                m |= 1 << var;
            }
            Monomial(Repr::Mask(m))
        } else {
            Monomial(Repr::Pairs(v.into_boxed_slice()))
        }
    }

    pub fn is_one(&self) -> bool {
        match &self.0 {
            Repr::Mask(m) => *m == 0,
            Repr::Pairs(p) => p.is_empty(),
        }
    }

    pub fn is_multilinear(&self) -> bool {
        match &self.0 {
            Repr::Mask(_) => true,
            Repr::Pairs(p) => p.iter().all(|&(_, e)| e == 1),
        }
    }

    pub fn degree(&self) -> u64 {
        match &self.0 {
            Repr::Mask(m) => m.count_ones() as u64,
            Repr::Pairs(p) => p.iter().map(|&(_, e)| e as u64).sum(),
        }
    }

    pub fn exponent(&self, v: VarId) -> u32 {
        match &self.0 {
            Repr::Mask(m) => {
                if v < 64 && (m >> v) & 1 == 1 {
                    1
                } else {
                    0
                }
            }
            Repr::Pairs(p) => p
                .binary_search_by_key(&v, |&(var, _)| var)
                .map(|i| p[i].1)
                .unwrap_or(0),
        }
    }

    /// Sorted `(variable, exponent)` pairs.
    pub fn pairs(&self) -> Vec<(VarId, u32)> {
        match &self.0 {
            Repr::Mask(m) => {
                let mut out = Vec::with_capacity(m.count_ones() as usize);
                let mut rest = *m;
                while rest != 0 {
                    let v = rest.trailing_zeros();
                    out.push((v, 1));
                    rest &= rest - 1;
                }
                out
            }
            Repr::Pairs(p) => p.to_vec(),
        }
    }

    pub fn support(&self) -> Vec<VarId> {
        self.pairs().into_iter().map(|(v, _)| v).collect()
    }

    /// Support as a bitmask; `None` when some variable id is 64 or larger.
    pub fn support_mask(&self) -> Option<u64> {
        match &self.0 {
            Repr::Mask(m) => Some(*m),
            Repr::Pairs(p) => {
                let mut m = 0u64;
                for &(v, _) in p.iter() {
                    if v >= 64 {
                        return None;
                    }
                    m |= 1 << v;
                }
                Some(m)
            }
        }
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        if let (Repr::Mask(a), Repr::Mask(b)) = (&self.0, &other.0) {
            if a & b == 0 {
                return Monomial(Repr::Mask(a | b));
            }
        }
        let mut pairs = self.pairs();
        pairs.extend(other.pairs());
        Monomial::from_pairs(pairs)
    }

    /// Exact monomial quotient; `None` when some exponent would go negative.
    pub fn checked_div(&self, other: &Monomial) -> Option<Monomial> {
        let mut pairs = self.pairs();
        for (v, e) in other.pairs() {
            let slot = pairs.iter_mut().find(|(w, _)| *w == v)?;
            if slot.1 < e {
                return None;
            }
            slot.1 -= e;
        }
        Some(Monomial::from_pairs(pairs))
    }

    /// `mult`: clamps every exponent to 1.
    pub fn multilinearized(&self) -> Monomial {
        match &self.0 {
            Repr::Mask(_) => self.clone(),
            Repr::Pairs(p) => Monomial::from_pairs(p.iter().map(|&(v, _)| (v, 1))),
        }
    }

    /// Splits into the part supported on `in_set` and the rest.
    pub fn split(&self, in_set: impl Fn(VarId) -> bool) -> (Monomial, Monomial) {
        let mut inside = Vec::new();
        let mut outside = Vec::new();
        for (v, e) in self.pairs() {
            if in_set(v) {
                inside.push((v, e));
            } else {
                outside.push((v, e));
            }
        }
        (Monomial::from_pairs(inside), Monomial::from_pairs(outside))
    }

    pub fn display(&self, table: &VarTable) -> String {
        if self.is_one() {
            return "1".to_string();
        }
        self.pairs()
            .iter()
            .map(|&(v, e)| {
                if e == 1 {
                    table.name(v).to_string()
                } else {
                    format!("{}^{}", table.name(v), e)
                }
            })
            .collect::<Vec<_>>()
            .join("*")
    }
}

/// Storage ordering only (deterministic iteration); semantic comparisons go
/// through `MonomialOrder`.
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.pairs().cmp(&other.pairs())
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self
            .pairs()
            .iter()
            .map(|&(v, e)| {
                if e == 1 {
                    format!("v{v}")
                } else {
                    format!("v{v}^{e}")
                }
            })
            .collect();
        write!(f, "{}", parts.join("*"))
    }
}
