//! Exact field arithmetic: rationals, prime fields and small extension fields.
//!
//! A [`FieldSpec`] names the field and owns its arithmetic; a [`Value`] is a
//! bare element whose representation must match the spec. All operations are
//! exact; extension-field products reduce modulo a monic irreducible modulus
//! chosen by a deterministic rule so the same spec string always denotes the
//! same field.

use std::fmt;
use std::sync::Arc;

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{IpsError, Result};

/// Largest extension degree the exhaustive irreducibility check supports.
pub const MAX_EXT_DEGREE: u32 = 8;

/// An element of a field described by some [`FieldSpec`].
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Value {
    /// Reduced rational with positive denominator (enforced by `BigRational`).
    Rat(BigRational),
    /// Residue in `[0, p)`.
    Fp(u64),
    /// Coefficient vector `c0 + c1 z + ... + c_{k-1} z^{k-1}`, entries in `[0, p)`.
    Ext(Vec<u64>),
}

/// Description of an extension field `F_{p^k} = F_p[z] / (modulus)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ExtFieldSpec {
    pub p: u64,
    pub k: u32,
    /// Monic modulus, little-endian, length `k + 1`, leading coefficient 1.
    pub modulus: Vec<u64>,
}

/// The coefficient field of a polynomial.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum FieldSpec {
    Rationals,
    Prime(u64),
    Extension(Arc<ExtFieldSpec>),
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Rationals => write!(f, "Q"),
            FieldSpec::Prime(p) => write!(f, "Fp:{p}"),
            FieldSpec::Extension(e) => write!(f, "Fpk:p={},k={}", e.p, e.k),
        }
    }
}

impl FieldSpec {
    pub fn rationals() -> FieldSpec {
        FieldSpec::Rationals
    }

    pub fn prime(p: u64) -> Result<FieldSpec> {
        if !is_prime_u64(p) {
            return Err(IpsError::InvalidParameter(format!("{p} is not prime")));
        }
        if p >= 1 << 62 {
            return Err(IpsError::InvalidParameter(format!("prime {p} too large")));
        }
        Ok(FieldSpec::Prime(p))
    }

    /// `F_{p^k}` with the deterministic modulus: coefficient vectors of monic
    /// degree-`k` polynomials are enumerated in lexicographic order (constant
    /// coefficient fastest) and the first irreducible one wins.
    pub fn extension(p: u64, k: u32) -> Result<FieldSpec> {
        if !is_prime_u64(p) {
            return Err(IpsError::InvalidParameter(format!("{p} is not prime")));
        }
        if !(2..=MAX_EXT_DEGREE).contains(&k) {
            return Err(IpsError::InvalidParameter(format!(
                "extension degree k={k} outside supported range 2..={MAX_EXT_DEGREE}"
            )));
        }
        let modulus = deterministic_irreducible(p, k)?;
        Ok(FieldSpec::Extension(Arc::new(ExtFieldSpec { p, k, modulus })))
    }

    /// Extension field with a caller-supplied monic modulus, verified irreducible.
    pub fn extension_with_modulus(p: u64, modulus: Vec<u64>) -> Result<FieldSpec> {
        if !is_prime_u64(p) {
            return Err(IpsError::InvalidParameter(format!("{p} is not prime")));
        }
        let k = (modulus.len() - 1) as u32;
        if !(2..=MAX_EXT_DEGREE).contains(&k) {
            return Err(IpsError::InvalidParameter(format!(
                "modulus degree {k} outside supported range 2..={MAX_EXT_DEGREE}"
            )));
        }
        if modulus.last() != Some(&1) || modulus.iter().any(|&c| c >= p) {
            return Err(IpsError::InvalidParameter(
                "modulus must be monic with coefficients in [0, p)".into(),
            ));
        }
        if !is_irreducible(&modulus, p)? {
            return Err(IpsError::InvalidParameter(
                "modulus polynomial is reducible".into(),
            ));
        }
        Ok(FieldSpec::Extension(Arc::new(ExtFieldSpec { p, k, modulus })))
    }

    /// Parses "Q", "Fp:65537" or "Fpk:p=2,k=2".
    pub fn parse(s: &str) -> Result<FieldSpec> {
        let s = s.trim();
        if s == "Q" {
            return Ok(FieldSpec::Rationals);
        }
        if let Some(rest) = s.strip_prefix("Fp:") {
            let p: u64 = rest
                .parse()
                .map_err(|_| IpsError::Parse(format!("bad prime in field spec {s:?}")))?;
            return FieldSpec::prime(p);
        }
        if let Some(rest) = s.strip_prefix("Fpk:") {
            let mut p = None;
            let mut k = None;
            for part in rest.split(',') {
                if let Some(v) = part.strip_prefix("p=") {
                    p = v.parse::<u64>().ok();
                } else if let Some(v) = part.strip_prefix("k=") {
                    k = v.parse::<u32>().ok();
                } else {
                    return Err(IpsError::Parse(format!("bad field spec {s:?}")));
                }
            }
            match (p, k) {
                (Some(p), Some(k)) => return FieldSpec::extension(p, k),
                _ => return Err(IpsError::Parse(format!("bad field spec {s:?}"))),
            }
        }
        Err(IpsError::Parse(format!("unknown field spec {s:?}")))
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            FieldSpec::Rationals => 0,
            FieldSpec::Prime(p) => *p,
            FieldSpec::Extension(e) => e.p,
        }
    }

    pub fn ext_spec(&self) -> Option<&ExtFieldSpec> {
        match self {
            FieldSpec::Extension(e) => Some(e),
            _ => None,
        }
    }

    pub fn zero(&self) -> Value {
        match self {
            FieldSpec::Rationals => Value::Rat(BigRational::zero()),
            FieldSpec::Prime(_) => Value::Fp(0),
            FieldSpec::Extension(e) => Value::Ext(vec![0; e.k as usize]),
        }
    }

    pub fn one(&self) -> Value {
        self.integer(1)
    }

    /// The image of an integer in the field.
    pub fn integer(&self, v: i64) -> Value {
        match self {
            FieldSpec::Rationals => Value::Rat(BigRational::from_integer(BigInt::from(v))),
            FieldSpec::Prime(p) => Value::Fp(v.rem_euclid(*p as i64) as u64),
            FieldSpec::Extension(e) => {
                let mut c = vec![0; e.k as usize];
                c[0] = v.rem_euclid(e.p as i64) as u64;
                Value::Ext(c)
            }
        }
    }

    /// Checks that `v`'s representation matches this field.
    pub fn contains(&self, v: &Value) -> bool {
        match (self, v) {
            (FieldSpec::Rationals, Value::Rat(_)) => true,
            (FieldSpec::Prime(p), Value::Fp(x)) => x < p,
            (FieldSpec::Extension(e), Value::Ext(c)) => {
                c.len() == e.k as usize && c.iter().all(|&x| x < e.p)
            }
            _ => false,
        }
    }

    fn check(&self, v: &Value) -> Result<()> {
        if self.contains(v) {
            Ok(())
        } else {
            Err(IpsError::NotAnElement(self.to_string()))
        }
    }

    fn check2(&self, a: &Value, b: &Value) -> Result<()> {
        self.check(a)?;
        self.check(b)
    }

    pub fn is_zero(&self, v: &Value) -> bool {
        match v {
            Value::Rat(r) => r.is_zero(),
            Value::Fp(x) => *x == 0,
            Value::Ext(c) => c.iter().all(|&x| x == 0),
        }
    }

    pub fn add(&self, a: &Value, b: &Value) -> Result<Value> {
        self.check2(a, b)?;
        Ok(match (self, a, b) {
            (FieldSpec::Rationals, Value::Rat(x), Value::Rat(y)) => Value::Rat(x + y),
            (FieldSpec::Prime(p), Value::Fp(x), Value::Fp(y)) => Value::Fp(addmod(*x, *y, *p)),
            (FieldSpec::Extension(e), Value::Ext(x), Value::Ext(y)) => Value::Ext(
                x.iter()
                    .zip(y)
                    .map(|(&u, &v)| addmod(u, v, e.p))
                    .collect(),
            ),
            _ => unreachable!(),
        })
    }

    pub fn sub(&self, a: &Value, b: &Value) -> Result<Value> {
        let nb = self.neg(b)?;
        self.add(a, &nb)
    }

    pub fn neg(&self, a: &Value) -> Result<Value> {
        self.check(a)?;
        Ok(match (self, a) {
            (FieldSpec::Rationals, Value::Rat(x)) => Value::Rat(-x),
            (FieldSpec::Prime(p), Value::Fp(x)) => Value::Fp(if *x == 0 { 0 } else { p - x }),
            (FieldSpec::Extension(e), Value::Ext(x)) => Value::Ext(
                x.iter()
                    .map(|&u| if u == 0 { 0 } else { e.p - u })
                    .collect(),
            ),
            _ => unreachable!(),
        })
    }

    pub fn mul(&self, a: &Value, b: &Value) -> Result<Value> {
        self.check2(a, b)?;
        Ok(match (self, a, b) {
            (FieldSpec::Rationals, Value::Rat(x), Value::Rat(y)) => Value::Rat(x * y),
            (FieldSpec::Prime(p), Value::Fp(x), Value::Fp(y)) => Value::Fp(mulmod(*x, *y, *p)),
            (FieldSpec::Extension(e), Value::Ext(x), Value::Ext(y)) => {
                Value::Ext(ext_mul(x, y, e))
            }
            _ => unreachable!(),
        })
    }

    pub fn inv(&self, a: &Value) -> Result<Value> {
        self.check(a)?;
        if self.is_zero(a) {
            return Err(IpsError::DivisionByZero);
        }
        Ok(match (self, a) {
            (FieldSpec::Rationals, Value::Rat(x)) => Value::Rat(x.recip()),
            (FieldSpec::Prime(p), Value::Fp(x)) => Value::Fp(invmod(*x, *p)),
            (FieldSpec::Extension(e), Value::Ext(x)) => Value::Ext(ext_inv(x, e)),
            _ => unreachable!(),
        })
    }

    pub fn div(&self, a: &Value, b: &Value) -> Result<Value> {
        let ib = self.inv(b)?;
        self.mul(a, &ib)
    }

    pub fn pow(&self, a: &Value, mut e: u128) -> Result<Value> {
        self.check(a)?;
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base)?;
            }
            base = self.mul(&base, &base)?;
            e >>= 1;
        }
        Ok(acc)
    }

    /// Validates that both operands come from this field before combining.
    /// Mixed-representation operands are reported explicitly.
    pub fn field_ops(&self, op: FieldOp, a: &Value, b: &Value) -> Result<Value> {
        match op {
            FieldOp::Add => self.add(a, b),
            FieldOp::Sub => self.sub(a, b),
            FieldOp::Mul => self.mul(a, b),
            FieldOp::Div => self.div(a, b),
        }
    }

    /// Frobenius-style membership test: inside any finite field containing it,
    /// an element lies in (the intersection with) `F_{p^d}` iff `x^{p^d} = x`.
    pub fn in_subfield(&self, a: &Value, d: u32) -> Result<bool> {
        let e = self
            .ext_spec()
            .ok_or_else(|| IpsError::InvalidParameter("subfield test needs an extension field".into()))?;
        let q = (e.p as u128).pow(d);
        let ap = self.pow(a, q)?;
        Ok(ap == *a)
    }

    /// Renders a value in the wire format: rationals as `num/den` (plain
    /// integer when the denominator is 1), prime-field residues as decimal,
    /// extension elements as `[c0,c1,...]`.
    pub fn value_to_string(&self, v: &Value) -> String {
        match v {
            Value::Rat(r) => {
                if r.denom().is_one() {
                    r.numer().to_string()
                } else {
                    format!("{}/{}", r.numer(), r.denom())
                }
            }
            Value::Fp(x) => x.to_string(),
            Value::Ext(c) => {
                let inner: Vec<String> = c.iter().map(|x| x.to_string()).collect();
                format!("[{}]", inner.join(","))
            }
        }
    }

    pub fn value_from_string(&self, s: &str) -> Result<Value> {
        let s = s.trim();
        let v = match self {
            FieldSpec::Rationals => {
                let (num, den) = match s.split_once('/') {
                    Some((n, d)) => (n, d),
                    None => (s, "1"),
                };
                let n: BigInt = num
                    .trim()
                    .parse()
                    .map_err(|_| IpsError::Parse(format!("bad rational {s:?}")))?;
                let d: BigInt = den
                    .trim()
                    .parse()
                    .map_err(|_| IpsError::Parse(format!("bad rational {s:?}")))?;
                if d.is_zero() {
                    return Err(IpsError::Parse(format!("zero denominator in {s:?}")));
                }
                Value::Rat(BigRational::new(n, d))
            }
            FieldSpec::Prime(p) => {
                let x: i64 = s
                    .parse()
                    .map_err(|_| IpsError::Parse(format!("bad residue {s:?}")))?;
                Value::Fp(x.rem_euclid(*p as i64) as u64)
            }
            FieldSpec::Extension(e) => {
                let inner = s
                    .strip_prefix('[')
                    .and_then(|t| t.strip_suffix(']'))
                    .ok_or_else(|| IpsError::Parse(format!("bad extension element {s:?}")))?;
                let mut c = vec![0; e.k as usize];
                if !inner.trim().is_empty() {
                    for (i, part) in inner.split(',').enumerate() {
                        if i >= e.k as usize {
                            return Err(IpsError::Parse(format!("too many coefficients in {s:?}")));
                        }
                        let x: i64 = part
                            .trim()
                            .parse()
                            .map_err(|_| IpsError::Parse(format!("bad extension element {s:?}")))?;
                        c[i] = x.rem_euclid(e.p as i64) as u64;
                    }
                }
                Value::Ext(c)
            }
        };
        Ok(v)
    }

    /// Reduces a value of this field modulo `p`, for randomized verification
    /// over `F_p`. Fails if a rational denominator vanishes mod `p`.
    pub fn reduce_mod_p(&self, v: &Value, p: u64) -> Result<u64> {
        match v {
            Value::Rat(r) => {
                let num = bigint_mod_u64(r.numer(), p);
                let den = bigint_mod_u64(r.denom(), p);
                if den == 0 {
                    return Err(IpsError::DivisionByZero);
                }
                Ok(mulmod(num, invmod(den, p), p))
            }
            Value::Fp(x) => Ok(x % p),
            Value::Ext(_) => Err(IpsError::InvalidParameter(
                "cannot reduce an extension-field element modulo a prime".into(),
            )),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum FieldOp {
    Add,
    Sub,
    Mul,
    Div,
}

fn bigint_mod_u64(v: &BigInt, p: u64) -> u64 {
    let m = v % BigInt::from(p);
    let m = if m.is_negative() { m + BigInt::from(p) } else { m };
    let (_, digits) = m.to_u64_digits();
    digits.first().copied().unwrap_or(0)
}

pub fn addmod(a: u64, b: u64, p: u64) -> u64 {
    let s = a as u128 + b as u128;
    (s % p as u128) as u64
}

pub fn submod(a: u64, b: u64, p: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + p - b
    }
}

pub fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub fn powmod(mut a: u64, mut e: u128, p: u64) -> u64 {
    let mut acc = 1u64 % p;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(acc, a, p);
        }
        a = mulmod(a, a, p);
        e >>= 1;
    }
    acc
}

pub fn invmod(a: u64, p: u64) -> u64 {
    powmod(a, p as u128 - 2, p)
}

/// Deterministic Miller-Rabin, exact for all u64 inputs.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for q in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == q {
            return true;
        }
        if n.is_multiple_of(q) {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'outer: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powmod(a, d as u128, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 0..s - 1 {
            x = mulmod(x, x, n);
            if x == n - 1 {
                continue 'outer;
            }
        }
        return false;
    }
    true
}

pub fn smallest_prime_above(n: u64) -> u64 {
    let mut c = n + 1;
    while !is_prime_u64(c) {
        c += 1;
    }
    c
}

/// Default prime for modular rank experiments: the smallest prime above 2^31.
pub fn default_rank_prime() -> u64 {
    smallest_prime_above(1 << 31)
}

// ---- dense univariate arithmetic over F_p (little-endian, used for moduli) ----

fn poly_trim(v: &mut Vec<u64>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

fn poly_rem(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    let mut r: Vec<u64> = a.to_vec();
    poly_trim(&mut r);
    let dm = m.len() - 1;
    let lead_inv = invmod(m[dm], p);
    while r.len() > dm {
        let dr = r.len() - 1;
        let c = mulmod(r[dr], lead_inv, p);
        let shift = dr - dm;
        for i in 0..=dm {
            let sub = mulmod(c, m[i], p);
            r[shift + i] = submod(r[shift + i], sub, p);
        }
        poly_trim(&mut r);
        if r.is_empty() {
            break;
        }
    }
    r
}

fn poly_mulmod(a: &[u64], b: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut prod = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = addmod(prod[i + j], mulmod(x, y, p), p);
        }
    }
    poly_rem(&prod, m, p)
}

fn ext_mul(a: &[u64], b: &[u64], e: &ExtFieldSpec) -> Vec<u64> {
    let mut r = poly_mulmod(a, b, &e.modulus, e.p);
    r.resize(e.k as usize, 0);
    r
}

/// Inverse in `F_p[z]/(m)` by the extended Euclidean algorithm.
#[allow(clippy::needless_range_loop)]
fn ext_inv(a: &[u64], e: &ExtFieldSpec) -> Vec<u64> {
    let p = e.p;
    let mut r0: Vec<u64> = e.modulus.clone();
    let mut r1: Vec<u64> = a.to_vec();
    poly_trim(&mut r1);
    let mut s0: Vec<u64> = vec![];
    let mut s1: Vec<u64> = vec![1];
    while !r1.is_empty() {
        // divide r0 by r1
        let mut rem = r0.clone();
        let mut quot = vec![0u64; rem.len().saturating_sub(r1.len()) + 1];
        let lead_inv = invmod(*r1.last().unwrap(), p);
        while rem.len() >= r1.len() && !rem.is_empty() {
            let c = mulmod(*rem.last().unwrap(), lead_inv, p);
            let shift = rem.len() - r1.len();
            quot[shift] = c;
            for i in 0..r1.len() {
                let sub = mulmod(c, r1[i], p);
                rem[shift + i] = submod(rem[shift + i], sub, p);
            }
            poly_trim(&mut rem);
        }
        // s_next = s0 - quot * s1
        let mut qs = vec![0u64; quot.len() + s1.len()];
        for (i, &qc) in quot.iter().enumerate() {
            if qc == 0 {
                continue;
            }
            for (j, &sc) in s1.iter().enumerate() {
                qs[i + j] = addmod(qs[i + j], mulmod(qc, sc, p), p);
            }
        }
        let n = s0.len().max(qs.len());
        let mut s_next = vec![0u64; n];
        for i in 0..n {
            let a0 = s0.get(i).copied().unwrap_or(0);
            let b0 = qs.get(i).copied().unwrap_or(0);
            s_next[i] = submod(a0, b0, p);
        }
        poly_trim(&mut s_next);
        r0 = r1;
        r1 = rem;
        s0 = s1;
        s1 = s_next;
    }
    // r0 is gcd (a nonzero constant since the modulus is irreducible)
    let c_inv = invmod(r0[0], p);
    let mut out: Vec<u64> = s0.iter().map(|&c| mulmod(c, c_inv, p)).collect();
    out.resize(e.k as usize, 0);
    out
}

/// Irreducibility over `F_p` by trial division with every monic polynomial of
/// degree up to `deg/2`. Exhaustive and exact at desk scale.
fn is_irreducible(m: &[u64], p: u64) -> Result<bool> {
    let deg = m.len() - 1;
    if deg == 0 {
        return Ok(false);
    }
    if deg == 1 {
        return Ok(true);
    }
    let half = deg / 2;
    if (p as f64).powi(half as i32) > 2e6 {
        return Err(IpsError::SizeGuard(format!(
            "irreducibility check over F_{p} at degree {deg} is out of desk-scale range"
        )));
    }
    for d in 1..=half {
        let count = (p as u128).pow(d as u32);
        for idx in 0..count {
            let mut div = vec![0u64; d + 1];
            let mut t = idx;
            for c in div.iter_mut().take(d) {
                *c = (t % p as u128) as u64;
                t /= p as u128;
            }
            div[d] = 1;
            if poly_rem(m, &div, p).is_empty() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// First irreducible monic degree-`k` polynomial in the deterministic
/// enumeration (coefficient vectors read as base-`p` numbers, constant
/// coefficient least significant).
fn deterministic_irreducible(p: u64, k: u32) -> Result<Vec<u64>> {
    let count = (p as u128).pow(k);
    for idx in 0..count {
        let mut m = vec![0u64; k as usize + 1];
        let mut t = idx;
        for c in m.iter_mut().take(k as usize) {
            *c = (t % p as u128) as u64;
            t /= p as u128;
        }
        m[k as usize] = 1;
        if is_irreducible(&m, p)? {
            return Ok(m);
        }
    }
    Err(IpsError::Internal(format!(
        "no irreducible polynomial of degree {k} over F_{p}"
    )))
}
