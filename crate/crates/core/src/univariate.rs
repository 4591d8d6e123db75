//! Dense univariate polynomials over an exact field.
//!
//! Used for cyclotomic moduli, minimal polynomials and CRT projectors. The
//! coefficient type only needs field operations plus a way to make zero and
//! one from an existing value, since `FieldElem` carries its field.

use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Zero};

pub trait FieldLike: Clone + PartialEq + fmt::Debug {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn is_zero_elem(&self) -> bool;
    fn add_ref(&self, other: &Self) -> Self;
    fn sub_ref(&self, other: &Self) -> Self;
    fn mul_ref(&self, other: &Self) -> Self;
    fn neg_ref(&self) -> Self;
    /// Multiplicative inverse; callers guarantee `self` is nonzero.
    fn inv_ref(&self) -> Self;
}

impl FieldLike for BigRational {
    fn zero_like(&self) -> Self {
        BigRational::zero()
    }
    fn one_like(&self) -> Self {
        BigRational::one()
    }
    fn is_zero_elem(&self) -> bool {
        self.is_zero()
    }
    fn add_ref(&self, other: &Self) -> Self {
        self + other
    }
    fn sub_ref(&self, other: &Self) -> Self {
        self - other
    }
    fn mul_ref(&self, other: &Self) -> Self {
        self * other
    }
    fn neg_ref(&self) -> Self {
        -self
    }
    fn inv_ref(&self) -> Self {
        self.recip()
    }
}

/// Coefficients stored low degree first, without trailing zeros.
#[derive(Clone, PartialEq, Debug)]
pub struct UniPoly<C: FieldLike> {
    zero: C,
    coeffs: Vec<C>,
}

impl<C: FieldLike> UniPoly<C> {
    pub fn new(zero: C, mut coeffs: Vec<C>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero_elem()) {
            coeffs.pop();
        }
        Self {
            zero: zero.zero_like(),
            coeffs,
        }
    }

    pub fn zero(proto: &C) -> Self {
        Self::new(proto.zero_like(), Vec::new())
    }

    pub fn constant(c: C) -> Self {
        Self::new(c.zero_like(), vec![c])
    }

    /// `t - root`
    pub fn linear(root: &C) -> Self {
        Self::new(root.zero_like(), vec![root.neg_ref(), root.one_like()])
    }

    pub fn coeffs(&self) -> &[C] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> C {
        self.coeffs
            .get(k)
            .cloned()
            .unwrap_or_else(|| self.zero.clone())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&C> {
        self.coeffs.last()
    }

    pub fn add(&self, other: &Self) -> Self {
        let len = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..len)
            .map(|k| self.coeff(k).add_ref(&other.coeff(k)))
            .collect();
        Self::new(self.zero.clone(), coeffs)
    }

    pub fn sub(&self, other: &Self) -> Self {
        let len = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..len)
            .map(|k| self.coeff(k).sub_ref(&other.coeff(k)))
            .collect();
        Self::new(self.zero.clone(), coeffs)
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero(&self.zero);
        }
        let mut out = vec![self.zero.clone(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero_elem() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].add_ref(&a.mul_ref(b));
            }
        }
        Self::new(self.zero.clone(), out)
    }

    pub fn scale(&self, c: &C) -> Self {
        Self::new(
            self.zero.clone(),
            self.coeffs.iter().map(|a| a.mul_ref(c)).collect(),
        )
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::constant(self.zero.one_like());
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn div_rem(&self, divisor: &Self) -> (Self, Self) {
        let dd = divisor.degree().expect("division by the zero polynomial");
        let lead_inv = divisor.coeffs[dd].inv_ref();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![self.zero.clone(); self.coeffs.len().saturating_sub(dd).max(1)];
        while rem.len() > dd && !rem.is_empty() {
            let top = rem.len() - 1;
            let c = rem[top].mul_ref(&lead_inv);
            let shift = top - dd;
            for (k, d) in divisor.coeffs.iter().enumerate() {
                rem[shift + k] = rem[shift + k].sub_ref(&c.mul_ref(d));
            }
            quot[shift] = c;
            while rem.last().is_some_and(|x| x.is_zero_elem()) {
                rem.pop();
            }
        }
        (
            Self::new(self.zero.clone(), quot),
            Self::new(self.zero.clone(), rem),
        )
    }

    pub fn rem(&self, divisor: &Self) -> Self {
        self.div_rem(divisor).1
    }

    pub fn monic(&self) -> Self {
        match self.leading() {
            None => self.clone(),
            Some(l) => self.scale(&l.inv_ref()),
        }
    }

    pub fn eval(&self, x: &C) -> C {
        let mut acc = self.zero.clone();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul_ref(x).add_ref(c);
        }
        acc
    }

    /// Extended Euclid: returns `(g, s, t)` with `s*self + t*other = g`, `g` monic.
    pub fn ext_gcd(&self, other: &Self) -> (Self, Self, Self) {
        let one = Self::constant(self.zero.one_like());
        let zero = Self::zero(&self.zero);
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (one.clone(), zero.clone());
        let (mut t0, mut t1) = (zero, one);
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1);
            let s2 = s0.sub(&q.mul(&s1));
            let t2 = t0.sub(&q.mul(&t1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s2);
            t0 = std::mem::replace(&mut t1, t2);
        }
        match r0.leading().cloned() {
            None => (r0, s0, t0),
            Some(l) => {
                let li = l.inv_ref();
                (r0.scale(&li), s0.scale(&li), t0.scale(&li))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }

    fn p(cs: &[i64]) -> UniPoly<BigRational> {
        UniPoly::new(q(0), cs.iter().map(|&c| q(c)).collect())
    }

    #[test]
    fn division_reconstructs() {
        let a = p(&[1, 0, -3, 2, 5]);
        let b = p(&[2, 1, 1]);
        let (quot, rem) = a.div_rem(&b);
        assert_eq!(quot.mul(&b).add(&rem), a);
        assert!(rem.degree().unwrap_or(0) < 2);
    }

    #[test]
    fn bezout_identity() {
        // (t-1)(t-2) and (t-2)(t+3) share t-2
        let a = p(&[2, -3, 1]);
        let b = p(&[-6, 1, 1]);
        let (g, s, t) = a.ext_gcd(&b);
        assert_eq!(g, p(&[-2, 1]));
        assert_eq!(s.mul(&a).add(&t.mul(&b)), g);
    }
}
