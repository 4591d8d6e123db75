//! Exact ground fields: the rationals, prime fields and cyclotomic fields,
//! together with the Hecke parameter `q` and the residue embedding `I -> k`.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{HeckeError, Result};
use crate::univariate::{FieldLike, UniPoly};

/// Default search bound for the quantum characteristic of `q`.
pub const DEFAULT_E_BOUND: u64 = 1000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum FieldSpec {
    Rationals,
    PrimeField(u64),
    /// `Q[t]/Phi_m(t)`
    Cyclotomic(u32),
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d.saturating_mul(d) <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl FieldSpec {
    pub fn prime(p: u64) -> Result<Self> {
        if is_prime(p) {
            Ok(FieldSpec::PrimeField(p))
        } else {
            Err(HeckeError::InvalidField(format!("{p} is not prime")))
        }
    }

    pub fn cyclotomic(m: u32) -> Result<Self> {
        if m == 0 {
            return Err(HeckeError::InvalidField(
                "cyclotomic order must be at least 1".into(),
            ));
        }
        Ok(FieldSpec::Cyclotomic(m))
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            FieldSpec::PrimeField(p) => *p,
            _ => 0,
        }
    }

    pub fn zero(&self) -> FieldElem {
        let repr = match self {
            FieldSpec::Rationals => Repr::Rat(BigRational::zero()),
            FieldSpec::PrimeField(_) => Repr::Mod(0),
            FieldSpec::Cyclotomic(_) => Repr::Cyc(Vec::new()),
        };
        FieldElem { spec: *self, repr }
    }

    pub fn one(&self) -> FieldElem {
        self.from_int(1)
    }

    pub fn from_int(&self, n: i64) -> FieldElem {
        self.from_bigint(&BigInt::from(n))
    }

    pub fn from_bigint(&self, n: &BigInt) -> FieldElem {
        self.from_rational(&BigRational::from_integer(n.clone()))
            .expect("integers embed in every field")
    }

    /// Image of a rational number; fails in `F_p` when `p` divides the denominator.
    pub fn from_rational(&self, r: &BigRational) -> Result<FieldElem> {
        let repr = match self {
            FieldSpec::Rationals => Repr::Rat(r.clone()),
            FieldSpec::PrimeField(p) => {
                let pm = BigInt::from(*p);
                let num = r.numer().mod_floor(&pm).to_u64().unwrap();
                let den = r.denom().mod_floor(&pm).to_u64().unwrap();
                if den == 0 {
                    return Err(HeckeError::DivisionByZero);
                }
                Repr::Mod(mul_mod(num, inv_mod(den, *p), *p))
            }
            FieldSpec::Cyclotomic(m) => Repr::Cyc(cyc_normalize(vec![r.clone()], *m)),
        };
        Ok(FieldElem { spec: *self, repr })
    }

    /// The class of `t` in `Q[t]/Phi_m`; only defined for cyclotomic fields.
    pub fn zeta(&self) -> Result<FieldElem> {
        match self {
            FieldSpec::Cyclotomic(m) => Ok(FieldElem {
                spec: *self,
                repr: Repr::Cyc(cyc_normalize(
                    vec![BigRational::zero(), BigRational::one()],
                    *m,
                )),
            }),
            _ => Err(HeckeError::InvalidField(format!(
                "{self} has no distinguished root of unity"
            ))),
        }
    }

    /// Small pseudorandom element used by property tests and suites.
    pub fn sample<R: Rng>(&self, rng: &mut R) -> FieldElem {
        match self {
            FieldSpec::Rationals => {
                let num = rng.gen_range(-6i64..=6);
                let den = if rng.gen_bool(0.25) {
                    rng.gen_range(1i64..=4)
                } else {
                    1
                };
                self.from_rational(&BigRational::new(num.into(), den.into()))
                    .unwrap()
            }
            FieldSpec::PrimeField(p) => FieldElem {
                spec: *self,
                repr: Repr::Mod(rng.gen_range(0..*p)),
            },
            FieldSpec::Cyclotomic(m) => {
                let d = cyclotomic_modulus(*m).len() - 1;
                let coeffs = (0..d)
                    .map(|_| {
                        if rng.gen_bool(0.5) {
                            BigRational::from_integer(rng.gen_range(-4i64..=4).into())
                        } else {
                            BigRational::zero()
                        }
                    })
                    .collect();
                FieldElem {
                    spec: *self,
                    repr: Repr::Cyc(cyc_normalize(coeffs, *m)),
                }
            }
        }
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Rationals => write!(f, "rat"),
            FieldSpec::PrimeField(p) => write!(f, "fp:{p}"),
            FieldSpec::Cyclotomic(m) => write!(f, "cyclo:{m}"),
        }
    }
}

impl FromStr for FieldSpec {
    type Err = HeckeError;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "rat" {
            return Ok(FieldSpec::Rationals);
        }
        let bad = || HeckeError::InvalidField(format!("unrecognized field literal `{s}`"));
        if let Some(p) = s.strip_prefix("fp:") {
            return FieldSpec::prime(p.parse().map_err(|_| bad())?);
        }
        if let Some(m) = s.strip_prefix("cyclo:") {
            return FieldSpec::cyclotomic(m.parse().map_err(|_| bad())?);
        }
        Err(bad())
    }
}

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, p);
        }
        base = mul_mod(base, base, p);
        exp >>= 1;
    }
    acc
}

fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

/// `Phi_m` as integer coefficients, low degree first, by exact division of
/// `t^m - 1` by the `Phi_d` for the proper divisors `d` of `m`.
pub fn cyclotomic_polynomial(m: u32) -> Vec<BigInt> {
    assert!(m >= 1, "cyclotomic polynomial needs m >= 1");
    let mut num = vec![BigInt::zero(); m as usize + 1];
    num[0] = BigInt::from(-1);
    num[m as usize] = BigInt::one();
    for d in 1..m {
        if m.is_multiple_of(d) {
            num = exact_div_monic(&num, &cyclotomic_modulus(d));
        }
    }
    num
}

fn exact_div_monic(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let db = b.len() - 1;
    let mut rem = a.to_vec();
    let mut quot = vec![BigInt::zero(); a.len() - db];
    for k in (0..quot.len()).rev() {
        let c = rem[k + db].clone();
        for (j, bj) in b.iter().enumerate() {
            rem[k + j] -= &c * bj;
        }
        quot[k] = c;
    }
    debug_assert!(
        rem.iter().all(|c| c.is_zero()),
        "inexact cyclotomic division"
    );
    quot
}

/// Cached `Phi_m`.
pub fn cyclotomic_modulus(m: u32) -> Arc<Vec<BigInt>> {
    static CACHE: OnceLock<Mutex<HashMap<u32, Arc<Vec<BigInt>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(hit) = cache.lock().unwrap().get(&m) {
        return hit.clone();
    }
    let poly = Arc::new(cyclotomic_polynomial(m));
    cache.lock().unwrap().insert(m, poly.clone());
    poly
}

fn cyc_normalize(mut coeffs: Vec<BigRational>, m: u32) -> Vec<BigRational> {
    let modulus = cyclotomic_modulus(m);
    let d = modulus.len() - 1;
    while coeffs.len() > d {
        let top = coeffs.pop().unwrap();
        if top.is_zero() {
            continue;
        }
        let shift = coeffs.len() - d;
        for (j, mj) in modulus.iter().enumerate().take(d) {
            coeffs[shift + j] -= &top * BigRational::from_integer(mj.clone());
        }
    }
    while coeffs.last().is_some_and(|c| c.is_zero()) {
        coeffs.pop();
    }
    coeffs
}

fn cyc_mul(a: &[BigRational], b: &[BigRational], m: u32) -> Vec<BigRational> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    cyc_normalize(out, m)
}

fn cyc_inv(a: &[BigRational], m: u32) -> Vec<BigRational> {
    let zero = BigRational::zero();
    let modulus: Vec<BigRational> = cyclotomic_modulus(m)
        .iter()
        .map(|c| BigRational::from_integer(c.clone()))
        .collect();
    let pa = UniPoly::new(zero.clone(), a.to_vec());
    let pm = UniPoly::new(zero, modulus);
    let (g, s, _) = pa.ext_gcd(&pm);
    debug_assert_eq!(g.degree(), Some(0), "Phi_m is irreducible");
    cyc_normalize(s.coeffs().to_vec(), m)
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum Repr {
    Rat(BigRational),
    Mod(u64),
    /// Coefficients of `1, zeta, zeta^2, ...` below `deg Phi_m`, trimmed.
    Cyc(Vec<BigRational>),
}

/// An element of a `FieldSpec` in canonical form, so `==` is field equality.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FieldElem {
    spec: FieldSpec,
    repr: Repr,
}

impl FieldElem {
    pub fn spec(&self) -> FieldSpec {
        self.spec
    }

    pub fn is_zero(&self) -> bool {
        match &self.repr {
            Repr::Rat(r) => r.is_zero(),
            Repr::Mod(v) => *v == 0,
            Repr::Cyc(c) => c.is_empty(),
        }
    }

    pub fn is_one(&self) -> bool {
        *self == self.spec.one()
    }

    pub fn check_same(&self, other: &FieldElem) -> Result<()> {
        if self.spec == other.spec {
            Ok(())
        } else {
            Err(HeckeError::FieldMismatch(
                self.spec.to_string(),
                other.spec.to_string(),
            ))
        }
    }

    pub fn checked_add(&self, other: &FieldElem) -> Result<FieldElem> {
        self.check_same(other)?;
        Ok(self.add_unchecked(other))
    }

    pub fn checked_sub(&self, other: &FieldElem) -> Result<FieldElem> {
        self.check_same(other)?;
        Ok(self.add_unchecked(&other.neg_unchecked()))
    }

    pub fn checked_mul(&self, other: &FieldElem) -> Result<FieldElem> {
        self.check_same(other)?;
        Ok(self.mul_unchecked(other))
    }

    pub fn checked_div(&self, other: &FieldElem) -> Result<FieldElem> {
        self.check_same(other)?;
        Ok(self.mul_unchecked(&other.inv()?))
    }

    pub fn inv(&self) -> Result<FieldElem> {
        if self.is_zero() {
            return Err(HeckeError::DivisionByZero);
        }
        let repr = match &self.repr {
            Repr::Rat(r) => Repr::Rat(r.recip()),
            Repr::Mod(v) => {
                let FieldSpec::PrimeField(p) = self.spec else {
                    unreachable!()
                };
                Repr::Mod(inv_mod(*v, p))
            }
            Repr::Cyc(c) => {
                let FieldSpec::Cyclotomic(m) = self.spec else {
                    unreachable!()
                };
                Repr::Cyc(cyc_inv(c, m))
            }
        };
        Ok(FieldElem {
            spec: self.spec,
            repr,
        })
    }

    /// Integer power; negative exponents need a nonzero base.
    pub fn pow(&self, k: i64) -> Result<FieldElem> {
        let base = if k < 0 { self.inv()? } else { self.clone() };
        let mut exp = k.unsigned_abs();
        let mut acc = self.spec.one();
        let mut sq = base;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc.mul_unchecked(&sq);
            }
            sq = sq.mul_unchecked(&sq);
            exp >>= 1;
        }
        Ok(acc)
    }

    fn add_unchecked(&self, other: &FieldElem) -> FieldElem {
        let repr = match (&self.repr, &other.repr) {
            (Repr::Rat(a), Repr::Rat(b)) => Repr::Rat(a + b),
            (Repr::Mod(a), Repr::Mod(b)) => {
                let p = self.spec.characteristic();
                Repr::Mod(((*a as u128 + *b as u128) % p as u128) as u64)
            }
            (Repr::Cyc(a), Repr::Cyc(b)) => {
                let len = a.len().max(b.len());
                let mut out: Vec<BigRational> = (0..len)
                    .map(|k| {
                        let x = a.get(k).cloned().unwrap_or_else(BigRational::zero);
                        match b.get(k) {
                            Some(y) => x + y,
                            None => x,
                        }
                    })
                    .collect();
                while out.last().is_some_and(|c| c.is_zero()) {
                    out.pop();
                }
                Repr::Cyc(out)
            }
            _ => panic!("field mismatch: {} vs {}", self.spec, other.spec),
        };
        FieldElem {
            spec: self.spec,
            repr,
        }
    }

    fn neg_unchecked(&self) -> FieldElem {
        let repr = match &self.repr {
            Repr::Rat(a) => Repr::Rat(-a),
            Repr::Mod(a) => {
                let p = self.spec.characteristic();
                Repr::Mod(if *a == 0 { 0 } else { p - a })
            }
            Repr::Cyc(a) => Repr::Cyc(a.iter().map(|c| -c).collect()),
        };
        FieldElem {
            spec: self.spec,
            repr,
        }
    }

    fn mul_unchecked(&self, other: &FieldElem) -> FieldElem {
        let repr = match (&self.repr, &other.repr) {
            (Repr::Rat(a), Repr::Rat(b)) => Repr::Rat(a * b),
            (Repr::Mod(a), Repr::Mod(b)) => Repr::Mod(mul_mod(*a, *b, self.spec.characteristic())),
            (Repr::Cyc(a), Repr::Cyc(b)) => {
                let FieldSpec::Cyclotomic(m) = self.spec else {
                    unreachable!()
                };
                Repr::Cyc(cyc_mul(a, b, m))
            }
            _ => panic!("field mismatch: {} vs {}", self.spec, other.spec),
        };
        FieldElem {
            spec: self.spec,
            repr,
        }
    }

    /// True when the printed form needs parentheses to act as a coefficient.
    pub fn is_compound(&self) -> bool {
        match &self.repr {
            Repr::Cyc(c) => c.iter().filter(|x| !x.is_zero()).count() > 1,
            _ => false,
        }
    }

    /// Whether the printed form starts with a minus sign.
    pub fn is_negative_literal(&self) -> bool {
        match &self.repr {
            Repr::Rat(r) => r.is_negative(),
            Repr::Mod(_) => false,
            Repr::Cyc(c) => !self.is_compound() && c.iter().any(|x| x.is_negative()),
        }
    }

    /// The value as a rational number, when it is one.
    pub fn to_rational(&self) -> Option<BigRational> {
        match &self.repr {
            Repr::Rat(r) => Some(r.clone()),
            Repr::Mod(v) => Some(BigRational::from_integer((*v).into())),
            Repr::Cyc(c) => match c.len() {
                0 => Some(BigRational::zero()),
                1 => Some(c[0].clone()),
                _ => None,
            },
        }
    }
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.repr {
            Repr::Rat(r) => write!(f, "{r}"),
            Repr::Mod(v) => write!(f, "{v}"),
            Repr::Cyc(c) => {
                if c.is_empty() {
                    return write!(f, "0");
                }
                let mut first = true;
                for (k, a) in c.iter().enumerate().rev() {
                    if a.is_zero() {
                        continue;
                    }
                    let mag = a.abs();
                    if first {
                        if a.is_negative() {
                            write!(f, "-")?;
                        }
                    } else if a.is_negative() {
                        write!(f, " - ")?;
                    } else {
                        write!(f, " + ")?;
                    }
                    first = false;
                    match k {
                        0 => write!(f, "{mag}")?,
                        _ => {
                            if !mag.is_one() {
                                write!(f, "{mag}*")?;
                            }
                            if k == 1 {
                                write!(f, "zeta")?;
                            } else {
                                write!(f, "zeta^{k}")?;
                            }
                        }
                    }
                }
                Ok(())
            }
        }
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $body:expr) => {
        impl<'a, 'b> std::ops::$trait<&'b FieldElem> for &'a FieldElem {
            type Output = FieldElem;
            fn $method(self, rhs: &'b FieldElem) -> FieldElem {
                let f: fn(&FieldElem, &FieldElem) -> FieldElem = $body;
                f(self, rhs)
            }
        }
        impl std::ops::$trait<FieldElem> for FieldElem {
            type Output = FieldElem;
            fn $method(self, rhs: FieldElem) -> FieldElem {
                std::ops::$trait::$method(&self, &rhs)
            }
        }
    };
}

forward_binop!(Add, add, |a, b| a.add_unchecked(b));
forward_binop!(Sub, sub, |a, b| a.add_unchecked(&b.neg_unchecked()));
forward_binop!(Mul, mul, |a, b| a.mul_unchecked(b));
forward_binop!(Div, div, |a, b| a.checked_div(b).expect("division by zero"));

impl std::ops::Neg for &FieldElem {
    type Output = FieldElem;
    fn neg(self) -> FieldElem {
        self.neg_unchecked()
    }
}

impl std::ops::Neg for FieldElem {
    type Output = FieldElem;
    fn neg(self) -> FieldElem {
        self.neg_unchecked()
    }
}

impl FieldLike for FieldElem {
    fn zero_like(&self) -> Self {
        self.spec.zero()
    }
    fn one_like(&self) -> Self {
        self.spec.one()
    }
    fn is_zero_elem(&self) -> bool {
        self.is_zero()
    }
    fn add_ref(&self, other: &Self) -> Self {
        self.add_unchecked(other)
    }
    fn sub_ref(&self, other: &Self) -> Self {
        self.add_unchecked(&other.neg_unchecked())
    }
    fn mul_ref(&self, other: &Self) -> Self {
        self.mul_unchecked(other)
    }
    fn neg_ref(&self) -> Self {
        self.neg_unchecked()
    }
    fn inv_ref(&self) -> Self {
        self.inv().expect("inverse of zero")
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum FlavorKind {
    Degenerate,
    NonDegenerate { q: FieldElem },
}

/// Degenerate or `q`-deformed Hecke algebra over a field, with its quantum
/// characteristic `e`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HeckeFlavor {
    field: FieldSpec,
    kind: FlavorKind,
    e: u64,
}

/// Least `k >= 1` with `1 + q + ... + q^(k-1) = 0`, or 0 if none up to `bound`.
pub fn quantum_characteristic(q: &FieldElem, bound: u64) -> u64 {
    let mut sum = q.spec().zero();
    let mut power = q.spec().one();
    for k in 1..=bound {
        sum = &sum + &power;
        if sum.is_zero() {
            return k;
        }
        power = &power * q;
    }
    0
}

impl HeckeFlavor {
    pub fn degenerate(field: FieldSpec) -> Self {
        Self {
            field,
            kind: FlavorKind::Degenerate,
            e: field.characteristic(),
        }
    }

    pub fn nondegenerate(q: FieldElem) -> Result<Self> {
        Self::nondegenerate_with_bound(q, DEFAULT_E_BOUND)
    }

    pub fn nondegenerate_with_bound(q: FieldElem, bound: u64) -> Result<Self> {
        if q.is_zero() {
            return Err(HeckeError::InvalidFlavor("q must be nonzero".into()));
        }
        if q.is_one() {
            return Err(HeckeError::InvalidFlavor("q must differ from 1".into()));
        }
        let e = quantum_characteristic(&q, bound);
        Ok(Self {
            field: q.spec(),
            kind: FlavorKind::NonDegenerate { q },
            e,
        })
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn kind(&self) -> &FlavorKind {
        &self.kind
    }

    pub fn e(&self) -> u64 {
        self.e
    }

    pub fn is_degenerate(&self) -> bool {
        matches!(self.kind, FlavorKind::Degenerate)
    }

    pub fn q(&self) -> Option<&FieldElem> {
        match &self.kind {
            FlavorKind::Degenerate => None,
            FlavorKind::NonDegenerate { q } => Some(q),
        }
    }

    /// `q^k`; the degenerate flavor has no `q` and this panics there.
    pub fn q_pow(&self, k: i64) -> FieldElem {
        self.q()
            .expect("q^k requested in the degenerate flavor")
            .pow(k)
            .expect("q is nonzero")
    }

    /// Eigenvalue attached to the residue `i`: `i * 1` or `q^i`.
    pub fn residue_embed(&self, i: i64) -> FieldElem {
        let rep = if self.e > 0 {
            i.rem_euclid(self.e as i64)
        } else {
            i
        };
        match &self.kind {
            FlavorKind::Degenerate => self.field.from_int(rep),
            FlavorKind::NonDegenerate { q } => q.pow(rep).expect("q is nonzero"),
        }
    }

    pub fn describe(&self) -> String {
        match &self.kind {
            FlavorKind::Degenerate => format!("degenerate over {} (e={})", self.field, self.e),
            FlavorKind::NonDegenerate { q } => {
                format!(
                    "nondegenerate over {} with q={} (e={})",
                    self.field, q, self.e
                )
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn ints(cs: &[i64]) -> Vec<BigInt> {
        cs.iter().map(|&c| BigInt::from(c)).collect()
    }

    #[test]
    fn prime_field_inverse() {
        let f5 = FieldSpec::prime(5).unwrap();
        assert_eq!(f5.from_int(2).inv().unwrap(), f5.from_int(3));
    }

    #[test]
    fn rational_sum() {
        let q = FieldSpec::Rationals;
        let half = q
            .from_rational(&BigRational::new(1.into(), 2.into()))
            .unwrap();
        let third = q
            .from_rational(&BigRational::new(1.into(), 3.into()))
            .unwrap();
        let expect = q
            .from_rational(&BigRational::new(5.into(), 6.into()))
            .unwrap();
        assert_eq!(&half + &third, expect);
    }

    #[test]
    fn zeta_four_squares_to_minus_one() {
        assert_eq!(cyclotomic_polynomial(4), ints(&[1, 0, 1]));
        let k = FieldSpec::cyclotomic(4).unwrap();
        let z = k.zeta().unwrap();
        assert_eq!(&z * &z, k.from_int(-1));
    }

    #[test]
    fn small_cyclotomic_polynomials() {
        assert_eq!(cyclotomic_polynomial(1), ints(&[-1, 1]));
        assert_eq!(cyclotomic_polynomial(2), ints(&[1, 1]));
        assert_eq!(cyclotomic_polynomial(6), ints(&[1, -1, 1]));
        assert_eq!(cyclotomic_polynomial(12), ints(&[1, 0, -1, 0, 1]));
    }

    /// Brute-force oracle: Phi_m divides t^m - 1 and has degree phi(m).
    #[test]
    fn cyclotomic_divides_t_m_minus_one() {
        for m in 1..=30u32 {
            let phi = cyclotomic_polynomial(m);
            let totient = (1..=m).filter(|k| num_integer::gcd(*k, m) == 1).count();
            assert_eq!(phi.len() - 1, totient, "degree of Phi_{m}");
            assert_eq!(phi.last().unwrap(), &BigInt::one(), "Phi_{m} monic");
            let mut t_m = vec![BigInt::zero(); m as usize + 1];
            t_m[0] = BigInt::from(-1);
            t_m[m as usize] = BigInt::one();
            let q = exact_div_monic(&t_m, &phi);
            // multiply back
            let mut prod = vec![BigInt::zero(); q.len() + phi.len() - 1];
            for (i, a) in q.iter().enumerate() {
                for (j, b) in phi.iter().enumerate() {
                    prod[i + j] += a * b;
                }
            }
            assert_eq!(prod, t_m);
        }
    }

    #[test]
    fn field_literals() {
        assert_eq!("rat".parse::<FieldSpec>().unwrap(), FieldSpec::Rationals);
        assert_eq!(
            "fp:5".parse::<FieldSpec>().unwrap(),
            FieldSpec::PrimeField(5)
        );
        assert_eq!(
            "cyclo:3".parse::<FieldSpec>().unwrap(),
            FieldSpec::Cyclotomic(3)
        );
        let err = "fp:4".parse::<FieldSpec>().unwrap_err();
        assert!(err.to_string().contains("4 is not prime"));
        assert!("cyclo:0".parse::<FieldSpec>().is_err());
        assert!("real".parse::<FieldSpec>().is_err());
    }

    #[test]
    fn division_by_zero_and_mismatch() {
        let q = FieldSpec::Rationals;
        assert_eq!(q.zero().inv(), Err(HeckeError::DivisionByZero));
        let f3 = FieldSpec::PrimeField(3);
        assert!(matches!(
            q.one().checked_add(&f3.one()),
            Err(HeckeError::FieldMismatch(..))
        ));
        assert!(matches!(
            f3.one().checked_div(&f3.zero()),
            Err(HeckeError::DivisionByZero)
        ));
    }

    #[test]
    fn residue_embedding_examples() {
        let f3 = FieldSpec::PrimeField(3);
        assert!(HeckeFlavor::degenerate(f3).residue_embed(3).is_zero());
        let rat = FieldSpec::Rationals;
        let nd = HeckeFlavor::nondegenerate(rat.from_int(2)).unwrap();
        assert_eq!(nd.residue_embed(2), rat.from_int(4));
        assert_eq!(nd.e(), 0);
        let c3 = FieldSpec::Cyclotomic(3);
        let z = c3.zeta().unwrap();
        let nd3 = HeckeFlavor::nondegenerate(z.clone()).unwrap();
        assert_eq!(nd3.residue_embed(1), z);
        assert_eq!(nd3.e(), 3);
    }

    #[test]
    fn quantum_characteristic_brute_force() {
        let mut specs = vec![];
        for m in 2..=8u32 {
            specs.push(FieldSpec::Cyclotomic(m).zeta().unwrap());
        }
        let f7 = FieldSpec::PrimeField(7);
        for a in 2..7 {
            specs.push(f7.from_int(a));
        }
        specs.push(FieldSpec::Rationals.from_int(2));
        specs.push(FieldSpec::Rationals.from_int(-1));
        for q in specs {
            let flavor = HeckeFlavor::nondegenerate(q.clone()).unwrap();
            // independent oracle: sum each prefix from scratch
            let mut expect = 0;
            for k in 1..=50i64 {
                let mut s = q.spec().zero();
                for j in 0..k {
                    s = &s + &q.pow(j).unwrap();
                }
                if s.is_zero() {
                    expect = k as u64;
                    break;
                }
            }
            assert_eq!(flavor.e(), expect, "q = {q}");
        }
    }

    #[test]
    fn flavor_rejects_trivial_q() {
        let rat = FieldSpec::Rationals;
        assert!(HeckeFlavor::nondegenerate(rat.zero()).is_err());
        assert!(HeckeFlavor::nondegenerate(rat.one()).is_err());
        assert_eq!(HeckeFlavor::degenerate(FieldSpec::PrimeField(5)).e(), 5);
        assert_eq!(HeckeFlavor::degenerate(rat).e(), 0);
    }

    #[test]
    fn residue_embed_injective() {
        let flavors = vec![
            HeckeFlavor::degenerate(FieldSpec::PrimeField(5)),
            HeckeFlavor::nondegenerate(FieldSpec::Cyclotomic(5).zeta().unwrap()).unwrap(),
            HeckeFlavor::nondegenerate(FieldSpec::PrimeField(7).from_int(2)).unwrap(),
        ];
        for fl in flavors {
            let vals: Vec<_> = (0..fl.e() as i64).map(|i| fl.residue_embed(i)).collect();
            for a in 0..vals.len() {
                for b in a + 1..vals.len() {
                    assert_ne!(vals[a], vals[b]);
                }
            }
        }
    }

    fn check_axioms(spec: FieldSpec, seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..200 {
            let a = spec.sample(&mut rng);
            let b = spec.sample(&mut rng);
            let c = spec.sample(&mut rng);
            assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            assert_eq!(&a + &b, &b + &a);
            assert_eq!(&a * &b, &b * &a);
            assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            assert!((&(&a + &b) - &b) == a);
            if !a.is_zero() {
                assert!((&a * &a.inv().unwrap()).is_one());
            }
        }
    }

    #[test]
    fn field_axioms_hold() {
        check_axioms(FieldSpec::Rationals, 1);
        check_axioms(FieldSpec::PrimeField(5), 2);
        check_axioms(FieldSpec::PrimeField(101), 3);
        check_axioms(FieldSpec::Cyclotomic(3), 4);
        check_axioms(FieldSpec::Cyclotomic(5), 5);
        check_axioms(FieldSpec::Cyclotomic(12), 6);
    }

    #[test]
    fn display_forms() {
        let c3 = FieldSpec::Cyclotomic(3);
        let z = c3.zeta().unwrap();
        assert_eq!((&z * &z).to_string(), "-zeta - 1");
        assert_eq!(z.to_string(), "zeta");
        assert_eq!(FieldSpec::PrimeField(5).from_int(-1).to_string(), "4");
    }
}
