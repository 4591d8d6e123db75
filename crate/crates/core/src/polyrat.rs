//! Multivariate (Laurent) polynomials and reduced rational functions in
//! `X_1..X_n`, with the `S_n` action, evaluation and Demazure operators.
//!
//! Variable indices in the public API are 1-based to match `X_1..X_n`.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use rand::Rng;

use crate::error::{HeckeError, Result};
use crate::scalars::{FieldElem, FieldSpec, HeckeFlavor};
use crate::symgroup::Perm;

/// Exponent vector ordered graded-lexicographically.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial(pub Vec<i32>);

impl Monomial {
    pub fn one(n: usize) -> Self {
        Monomial(vec![0; n])
    }

    pub fn degree(&self) -> i64 {
        self.0.iter().map(|&e| e as i64).sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    fn div(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Sparse polynomial; no zero coefficients are stored.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MultiPoly {
    field: FieldSpec,
    n: usize,
    terms: BTreeMap<Monomial, FieldElem>,
}

impl MultiPoly {
    pub fn zero(field: FieldSpec, n: usize) -> Self {
        Self {
            field,
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(n: usize, c: FieldElem) -> Self {
        let mut p = Self::zero(c.spec(), n);
        if !c.is_zero() {
            p.terms.insert(Monomial::one(n), c);
        }
        p
    }

    pub fn one(field: FieldSpec, n: usize) -> Self {
        Self::constant(n, field.one())
    }

    /// `X_s`, 1-based.
    pub fn var(field: FieldSpec, n: usize, s: usize) -> Self {
        let mut exps = vec![0; n];
        exps[s - 1] = 1;
        Self::monomial(field.one(), Monomial(exps))
    }

    pub fn monomial(c: FieldElem, m: Monomial) -> Self {
        let n = m.0.len();
        let mut p = Self::zero(c.spec(), n);
        if !c.is_zero() {
            p.terms.insert(m, c);
        }
        p
    }

    pub fn from_terms(
        field: FieldSpec,
        n: usize,
        terms: impl IntoIterator<Item = (Monomial, FieldElem)>,
    ) -> Self {
        let mut p = Self::zero(field, n);
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    fn add_term(&mut self, m: Monomial, c: FieldElem) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = o.get() + &c;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn nvars(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &FieldElem)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.is_one())
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.iter().all(|(m, c)| m.is_one() && c.is_one())
    }

    pub fn constant_term(&self) -> FieldElem {
        self.terms
            .get(&Monomial::one(self.n))
            .cloned()
            .unwrap_or_else(|| self.field.zero())
    }

    pub fn has_negative_exponents(&self) -> bool {
        self.terms.keys().any(|m| m.0.iter().any(|&e| e < 0))
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &FieldElem)> {
        self.terms.iter().next_back()
    }

    pub fn total_degree(&self) -> Option<i64> {
        self.terms.keys().map(|m| m.degree()).max()
    }

    fn check(&self, other: &MultiPoly) {
        assert_eq!(
            self.field, other.field,
            "field mismatch in polynomial arithmetic"
        );
        assert_eq!(
            self.n, other.n,
            "variable count mismatch in polynomial arithmetic"
        );
    }

    pub fn add(&self, other: &MultiPoly) -> MultiPoly {
        self.check(other);
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &MultiPoly) -> MultiPoly {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> MultiPoly {
        MultiPoly {
            field: self.field,
            n: self.n,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn scale(&self, c: &FieldElem) -> MultiPoly {
        if c.is_zero() {
            return Self::zero(self.field, self.n);
        }
        MultiPoly {
            field: self.field,
            n: self.n,
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        }
    }

    pub fn mul(&self, other: &MultiPoly) -> MultiPoly {
        self.check(other);
        let mut out = Self::zero(self.field, self.n);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }

    pub fn mul_monomial(&self, m: &Monomial) -> MultiPoly {
        MultiPoly {
            field: self.field,
            n: self.n,
            terms: self
                .terms
                .iter()
                .map(|(k, c)| (k.mul(m), c.clone()))
                .collect(),
        }
    }

    pub fn pow(&self, k: u32) -> MultiPoly {
        let mut acc = Self::one(self.field, self.n);
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    /// Componentwise minimum exponent over all terms.
    pub fn min_exponents(&self) -> Monomial {
        let mut mins: Option<Vec<i32>> = None;
        for m in self.terms.keys() {
            mins = Some(match mins {
                None => m.0.clone(),
                Some(cur) => cur.iter().zip(&m.0).map(|(a, b)| *a.min(b)).collect(),
            });
        }
        Monomial(mins.unwrap_or_else(|| vec![0; self.n]))
    }

    /// Exponent of variable index `v` (0-based) in the highest-degree term.
    fn degree_in(&self, v: usize) -> i32 {
        self.terms.keys().map(|m| m.0[v]).max().unwrap_or(-1)
    }

    /// Coefficient of `X_v^k` as a polynomial in the remaining variables.
    fn coeff_in(&self, v: usize, k: i32) -> MultiPoly {
        let terms = self
            .terms
            .iter()
            .filter(|(m, _)| m.0[v] == k)
            .map(|(m, c)| {
                let mut e = m.0.clone();
                e[v] = 0;
                (Monomial(e), c.clone())
            })
            .collect();
        MultiPoly {
            field: self.field,
            n: self.n,
            terms,
        }
    }

    fn var_power(&self, v: usize, k: i32) -> Monomial {
        let mut e = vec![0; self.n];
        e[v] = k;
        Monomial(e)
    }

    /// Exact division; `None` if `divisor` does not divide `self`.
    /// Both operands must have nonnegative exponents.
    pub fn div_exact(&self, divisor: &MultiPoly) -> Option<MultiPoly> {
        self.check(divisor);
        let (lm, lc) = divisor
            .leading_term()
            .expect("division by the zero polynomial");
        let lc_inv = lc.inv().unwrap();
        let mut rem = self.clone();
        let mut quot = Self::zero(self.field, self.n);
        while let Some((rm, rc)) = rem.leading_term() {
            if !lm.divides(rm) {
                return None;
            }
            let qm = rm.div(lm);
            let qc = rc * &lc_inv;
            rem = rem.sub(&divisor.mul_monomial(&qm).scale(&qc));
            quot.add_term(qm, qc);
        }
        Some(quot)
    }

    /// Scale so the graded-lex leading coefficient is 1.
    pub fn monic(&self) -> MultiPoly {
        match self.leading_term() {
            None => self.clone(),
            Some((_, c)) => self.scale(&c.inv().unwrap()),
        }
    }

    /// Variables `X_s -> X_{w(s)}`.
    pub fn apply_perm(&self, w: &Perm) -> MultiPoly {
        assert_eq!(w.n(), self.n);
        let terms = self.terms.iter().map(|(m, c)| {
            let mut e = vec![0; self.n];
            for (s, &k) in m.0.iter().enumerate() {
                e[w.images()[s]] = k;
            }
            (Monomial(e), c.clone())
        });
        MultiPoly::from_terms(self.field, self.n, terms)
    }

    /// Swap `X_r` and `X_{r+1}`.
    pub fn swap_vars(&self, r: usize) -> MultiPoly {
        let terms = self.terms.iter().map(|(m, c)| {
            let mut e = m.0.clone();
            e.swap(r - 1, r);
            (Monomial(e), c.clone())
        });
        MultiPoly::from_terms(self.field, self.n, terms)
    }

    /// Divided difference `(s_r f - f)/(X_r - X_{r+1})`, exact on Laurent polynomials.
    pub fn demazure(&self, r: usize) -> Result<MultiPoly> {
        // multiply by a symmetric monomial to clear negative exponents
        let shift = -self
            .min_exponents()
            .0
            .iter()
            .copied()
            .min()
            .unwrap_or(0)
            .min(0);
        let sym = Monomial(vec![shift; self.n]);
        let g = self.mul_monomial(&sym);
        let diff = g.swap_vars(r).sub(&g);
        let lin =
            MultiPoly::var(self.field, self.n, r).sub(&MultiPoly::var(self.field, self.n, r + 1));
        let q = diff.div_exact(&lin).ok_or_else(|| {
            HeckeError::Internal(format!("divided difference of {self} is not a polynomial"))
        })?;
        Ok(q.mul_monomial(&Monomial(vec![-shift; self.n])))
    }

    /// Evaluate at a point; negative exponents need nonzero coordinates.
    pub fn eval(&self, point: &[FieldElem]) -> Result<FieldElem> {
        let mut acc = self.field.zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (x, &k) in point.iter().zip(&m.0) {
                if k != 0 {
                    t = &t * &x.pow(k as i64)?;
                }
            }
            acc = &acc + &t;
        }
        Ok(acc)
    }

    /// Substitute `X_s -> a_s X_s + b_s`; nonnegative exponents only.
    pub fn substitute_affine(&self, maps: &[(FieldElem, FieldElem)]) -> MultiPoly {
        assert!(
            !self.has_negative_exponents(),
            "affine substitution on a Laurent polynomial"
        );
        let images: Vec<MultiPoly> = maps
            .iter()
            .enumerate()
            .map(|(s, (a, b))| {
                MultiPoly::var(self.field, self.n, s + 1)
                    .scale(a)
                    .add(&MultiPoly::constant(self.n, b.clone()))
            })
            .collect();
        let mut cache: Vec<Vec<MultiPoly>> = images
            .iter()
            .map(|p| vec![Self::one(self.field, self.n), p.clone()])
            .collect();
        let mut out = Self::zero(self.field, self.n);
        for (m, c) in &self.terms {
            let mut t = Self::constant(self.n, c.clone());
            for (s, &k) in m.0.iter().enumerate() {
                let k = k as usize;
                while cache[s].len() <= k {
                    let next = cache[s].last().unwrap().mul(&images[s]);
                    cache[s].push(next);
                }
                if k > 0 {
                    t = t.mul(&cache[s][k]);
                }
            }
            out = out.add(&t);
        }
        out
    }

    /// Pseudorandom polynomial with nonnegative exponents of total degree <= `max_deg`.
    pub fn random<R: Rng>(
        field: FieldSpec,
        n: usize,
        max_deg: u32,
        nterms: usize,
        rng: &mut R,
    ) -> MultiPoly {
        let mut p = Self::zero(field, n);
        for _ in 0..nterms {
            let mut e = vec![0i32; n];
            let deg = rng.gen_range(0..=max_deg);
            for _ in 0..deg {
                e[rng.gen_range(0..n)] += 1;
            }
            p.add_term(Monomial(e), field.sample(rng));
        }
        p
    }
}

/// Greatest common divisor, normalized monic; nonnegative exponents.
pub fn multipoly_gcd(a: &MultiPoly, b: &MultiPoly) -> MultiPoly {
    a.check(b);
    gcd_inner(a, b).monic()
}

fn gcd_inner(a: &MultiPoly, b: &MultiPoly) -> MultiPoly {
    if a.is_zero() {
        return b.clone();
    }
    if b.is_zero() {
        return a.clone();
    }
    let one = MultiPoly::one(a.field, a.n);
    if a.is_constant() || b.is_constant() {
        return one;
    }
    if b.num_terms() <= a.num_terms() {
        if a.div_exact(b).is_some() {
            return b.clone();
        }
    } else if b.div_exact(a).is_some() {
        return a.clone();
    }
    // pull out the monomial content first
    let ma = a.min_exponents();
    let mb = b.min_exponents();
    let common = Monomial(ma.0.iter().zip(&mb.0).map(|(x, y)| *x.min(y)).collect());
    let a1 = a.mul_monomial(&Monomial(ma.0.iter().map(|x| -x).collect()));
    let b1 = b.mul_monomial(&Monomial(mb.0.iter().map(|x| -x).collect()));
    let g = if a1.is_constant() || b1.is_constant() {
        one
    } else {
        gcd_monomial_free(&a1, &b1)
    };
    g.mul_monomial(&common)
}

fn gcd_monomial_free(a: &MultiPoly, b: &MultiPoly) -> MultiPoly {
    let n = a.n;
    let shared = (0..n)
        .filter(|&v| a.degree_in(v) > 0 && b.degree_in(v) > 0)
        .min_by_key(|&v| a.degree_in(v).max(b.degree_in(v)));
    let Some(v) = shared else {
        // no common variable: the gcd lives in the content w.r.t. any variable of a
        let v = (0..n)
            .find(|&v| a.degree_in(v) > 0)
            .expect("nonconstant polynomial");
        return gcd_inner(&content_in(a, v), b);
    };
    let ca = content_in(a, v);
    let cb = content_in(b, v);
    let c = gcd_inner(&ca, &cb);
    let mut p = a.div_exact(&ca).expect("content divides");
    let mut q = b.div_exact(&cb).expect("content divides");
    if p.degree_in(v) < q.degree_in(v) {
        std::mem::swap(&mut p, &mut q);
    }
    let g = loop {
        let r = pseudo_rem(&p, &q, v);
        if r.is_zero() {
            break q;
        }
        if r.degree_in(v) == 0 {
            break MultiPoly::one(a.field, n);
        }
        p = q;
        q = primitive_part(&r, v);
    };
    c.mul(&primitive_part(&g, v))
}

fn content_in(p: &MultiPoly, v: usize) -> MultiPoly {
    let mut acc = MultiPoly::zero(p.field, p.n);
    for k in 0..=p.degree_in(v) {
        let c = p.coeff_in(v, k);
        if c.is_zero() {
            continue;
        }
        acc = gcd_inner(&acc, &c);
        if acc.is_constant() {
            return MultiPoly::one(p.field, p.n);
        }
    }
    acc.monic()
}

fn primitive_part(p: &MultiPoly, v: usize) -> MultiPoly {
    let c = content_in(p, v);
    p.div_exact(&c).expect("content divides").monic()
}

/// Pseudo-remainder of `a` by `b` in the variable `v`.
fn pseudo_rem(a: &MultiPoly, b: &MultiPoly, v: usize) -> MultiPoly {
    let db = b.degree_in(v);
    let lb = b.coeff_in(v, db);
    let mut r = a.clone();
    while !r.is_zero() && r.degree_in(v) >= db {
        let dr = r.degree_in(v);
        let lr = r.coeff_in(v, dr);
        r = r
            .mul(&lb)
            .sub(&b.mul(&lr).mul_monomial(&r.var_power(v, dr - db)));
    }
    r
}

/// Reduced fraction `num/den`: coprime polynomials with nonnegative
/// exponents and `den` monic, so equality of `(num, den)` is equality in
/// `k(X)`. The denominator is also kept as a product of pairwise coprime
/// monic factors, which makes cancellation a matter of trial division.
#[derive(Clone, Debug)]
pub struct RatFunc {
    num: MultiPoly,
    den: MultiPoly,
    factors: Vec<(MultiPoly, u32)>,
}

impl PartialEq for RatFunc {
    fn eq(&self, other: &Self) -> bool {
        self.num == other.num && self.den == other.den
    }
}

impl Eq for RatFunc {}

impl std::hash::Hash for RatFunc {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.num.hash(state);
        self.den.hash(state);
    }
}

type Factors = Vec<(MultiPoly, u32)>;

fn is_linear(p: &MultiPoly) -> bool {
    p.total_degree() == Some(1)
}

/// Splits off `X^a` and returns `(scalar, monomial factors, monic rest)`.
fn split_denominator(p: &MultiPoly) -> (FieldElem, Factors, MultiPoly) {
    let m = p.min_exponents();
    let rest = p.mul_monomial(&Monomial(m.0.iter().map(|e| -e).collect()));
    let lc = rest.leading_term().unwrap().1.clone();
    let mut factors = Vec::new();
    for (s, &k) in m.0.iter().enumerate() {
        if k > 0 {
            factors.push((MultiPoly::var(p.field, p.n, s + 1), k as u32));
        }
    }
    (lc.clone(), factors, rest.scale(&lc.inv().unwrap()))
}

/// Merges factor lists into pairwise coprime monic factors.
fn refine(mut list: Factors) -> Factors {
    list.retain(|(p, k)| *k > 0 && !p.is_constant());
    'outer: loop {
        for a in 0..list.len() {
            for b in a + 1..list.len() {
                if list[a].0 == list[b].0 {
                    let k = list[b].1;
                    list[a].1 += k;
                    list.remove(b);
                    continue 'outer;
                }
                let (pa, pb) = (&list[a].0, &list[b].0);
                if is_linear(pa) && is_linear(pb) {
                    continue;
                }
                let g = multipoly_gcd(pa, pb);
                if g.is_constant() {
                    continue;
                }
                let (ka, kb) = (list[a].1, list[b].1);
                let ra = pa.div_exact(&g).unwrap().monic();
                let rb = pb.div_exact(&g).unwrap().monic();
                list.remove(b);
                list.remove(a);
                list.push((g, ka + kb));
                list.push((ra, ka));
                list.push((rb, kb));
                list.retain(|(p, k)| *k > 0 && !p.is_constant());
                continue 'outer;
            }
        }
        return list;
    }
}

/// Exponent vector of `p` over the coprime base `base`.
fn decompose(p: &MultiPoly, base: &Factors) -> Vec<u32> {
    let mut rest = p.clone();
    let mut out = vec![0; base.len()];
    for (j, (b, _)) in base.iter().enumerate() {
        while let Some(q) = rest.div_exact(b) {
            rest = q;
            out[j] += 1;
        }
    }
    debug_assert!(rest.is_constant());
    out
}

/// Removes common factors of `num` and the listed factors; `only` masks
/// which factors may cancel.
fn cancel(
    mut num: MultiPoly,
    mut factors: Factors,
    only: Option<Vec<bool>>,
) -> (MultiPoly, Factors) {
    let mut mask = only.unwrap_or_else(|| vec![true; factors.len()]);
    let mut j = 0;
    while j < factors.len() {
        if !mask[j] {
            j += 1;
            continue;
        }
        let mut split = false;
        while factors[j].1 > 0 {
            if let Some(q) = num.div_exact(&factors[j].0) {
                num = q;
                factors[j].1 -= 1;
                continue;
            }
            if is_linear(&factors[j].0) {
                break;
            }
            let g = multipoly_gcd(&num, &factors[j].0);
            if g.is_constant() {
                break;
            }
            let (f, k) = factors.remove(j);
            mask.remove(j);
            let rest = f.div_exact(&g).unwrap().monic();
            factors = refine([factors, vec![(g, k), (rest, k)]].concat());
            mask = vec![true; factors.len()];
            j = 0;
            split = true;
            break;
        }
        if !split {
            j += 1;
        }
    }
    factors.retain(|(_, k)| *k > 0);
    (num, factors)
}

fn expand(field: FieldSpec, n: usize, factors: &Factors) -> MultiPoly {
    let mut den = MultiPoly::one(field, n);
    for (f, k) in factors {
        den = den.mul(&f.pow(*k));
    }
    den
}

impl RatFunc {
    pub fn new(num: MultiPoly, den: MultiPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(HeckeError::DivisionByZero);
        }
        num.check(&den);
        Ok(Self::reduce(num, den))
    }

    pub fn from_poly(p: MultiPoly) -> Self {
        if p.has_negative_exponents() {
            let one = MultiPoly::one(p.field, p.n);
            return Self::reduce(p, one);
        }
        Self {
            den: MultiPoly::one(p.field, p.n),
            num: p,
            factors: Vec::new(),
        }
    }

    pub fn zero(field: FieldSpec, n: usize) -> Self {
        Self {
            num: MultiPoly::zero(field, n),
            den: MultiPoly::one(field, n),
            factors: Vec::new(),
        }
    }

    pub fn one(field: FieldSpec, n: usize) -> Self {
        Self {
            num: MultiPoly::one(field, n),
            den: MultiPoly::one(field, n),
            factors: Vec::new(),
        }
    }

    pub fn constant(n: usize, c: FieldElem) -> Self {
        let field = c.spec();
        Self {
            num: MultiPoly::constant(n, c),
            den: MultiPoly::one(field, n),
            factors: Vec::new(),
        }
    }

    pub fn var(field: FieldSpec, n: usize, s: usize) -> Self {
        Self {
            num: MultiPoly::var(field, n, s),
            den: MultiPoly::one(field, n),
            factors: Vec::new(),
        }
    }

    fn from_parts(num: MultiPoly, factors: Factors) -> Self {
        if num.is_zero() {
            return Self::zero(num.field, num.n);
        }
        let den = expand(num.field, num.n, &factors);
        Self { num, den, factors }
    }

    fn reduce(num: MultiPoly, den: MultiPoly) -> Self {
        let n = num.n;
        if num.is_zero() {
            return Self::zero(num.field, n);
        }
        // clear negative exponents on both sides
        let mn = num.min_exponents();
        let md = den.min_exponents();
        let shift = Monomial(
            mn.0.iter()
                .zip(&md.0)
                .map(|(a, b)| -(*a.min(b)).min(0))
                .collect(),
        );
        let (num, den) = if shift.is_one() {
            (num, den)
        } else {
            (num.mul_monomial(&shift), den.mul_monomial(&shift))
        };
        let (lc, mut factors, rest) = split_denominator(&den);
        let num = num.scale(&lc.inv().unwrap());
        if !rest.is_one() {
            factors.push((rest, 1));
        }
        let (num, factors) = cancel(num, refine(factors), None);
        Self::from_parts(num, factors)
    }

    pub fn num(&self) -> &MultiPoly {
        &self.num
    }

    pub fn den(&self) -> &MultiPoly {
        &self.den
    }

    /// Pairwise coprime monic factors of the denominator with multiplicities.
    pub fn den_factors(&self) -> &[(MultiPoly, u32)] {
        &self.factors
    }

    pub fn field(&self) -> FieldSpec {
        self.num.field
    }

    pub fn nvars(&self) -> usize {
        self.num.n
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.factors.is_empty()
    }

    pub fn is_polynomial(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn add(&self, other: &RatFunc) -> RatFunc {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        if self.factors.is_empty() && other.factors.is_empty() {
            return Self::from_poly(self.num.add(&other.num));
        }
        let base = refine(
            self.factors
                .iter()
                .chain(&other.factors)
                .map(|(f, _)| (f.clone(), 1))
                .collect(),
        );
        let expo = |fs: &Factors| {
            let mut e = vec![0u32; base.len()];
            for (f, k) in fs {
                for (slot, d) in e.iter_mut().zip(decompose(f, &base)) {
                    *slot += d * k;
                }
            }
            e
        };
        let (ea, eb) = (expo(&self.factors), expo(&other.factors));
        let field = self.field();
        let n = self.nvars();
        let mut ca = MultiPoly::one(field, n);
        let mut cb = MultiPoly::one(field, n);
        let mut factors = Vec::new();
        let mut mask = Vec::new();
        for (j, (f, _)) in base.iter().enumerate() {
            let top = ea[j].max(eb[j]);
            if ea[j] < top {
                ca = ca.mul(&f.pow(top - ea[j]));
            }
            if eb[j] < top {
                cb = cb.mul(&f.pow(top - eb[j]));
            }
            factors.push((f.clone(), top));
            mask.push(ea[j] == eb[j]);
        }
        let num = self.num.mul(&ca).add(&other.num.mul(&cb));
        if num.is_zero() {
            return Self::zero(field, n);
        }
        let (num, factors) = cancel(num, factors, Some(mask));
        Self::from_parts(num, factors)
    }

    pub fn neg(&self) -> RatFunc {
        Self {
            num: self.num.neg(),
            den: self.den.clone(),
            factors: self.factors.clone(),
        }
    }

    pub fn sub(&self, other: &RatFunc) -> RatFunc {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &RatFunc) -> RatFunc {
        if self.is_zero() || other.is_zero() {
            return Self::zero(self.field(), self.nvars());
        }
        if self.factors.is_empty() && other.factors.is_empty() {
            return Self::from_poly(self.num.mul(&other.num));
        }
        let (a, fb) = cancel(self.num.clone(), other.factors.clone(), None);
        let (b, fa) = cancel(other.num.clone(), self.factors.clone(), None);
        Self::from_parts(a.mul(&b), refine([fa, fb].concat()))
    }

    pub fn scale(&self, c: &FieldElem) -> RatFunc {
        if c.is_zero() {
            return Self::zero(self.field(), self.nvars());
        }
        Self {
            num: self.num.scale(c),
            den: self.den.clone(),
            factors: self.factors.clone(),
        }
    }

    pub fn inv(&self) -> Result<RatFunc> {
        if self.is_zero() {
            return Err(HeckeError::DivisionByZero);
        }
        let (lc, mut factors, rest) = split_denominator(&self.num);
        if !rest.is_one() {
            factors.push((rest, 1));
        }
        Ok(Self::from_parts(
            self.den.scale(&lc.inv().unwrap()),
            factors,
        ))
    }

    pub fn div(&self, other: &RatFunc) -> Result<RatFunc> {
        Ok(self.mul(&other.inv()?))
    }

    pub fn pow(&self, k: u32) -> RatFunc {
        if k == 0 {
            return Self::one(self.field(), self.nvars());
        }
        let factors = self
            .factors
            .iter()
            .map(|(f, m)| (f.clone(), m * k))
            .collect();
        Self::from_parts(self.num.pow(k), factors)
    }

    /// Applies a ring automorphism factorwise, renormalizing to monic factors.
    fn map_auto(&self, phi: impl Fn(&MultiPoly) -> MultiPoly) -> RatFunc {
        let mut num = phi(&self.num);
        let mut factors = Vec::with_capacity(self.factors.len());
        for (f, k) in &self.factors {
            let g = phi(f);
            let lc = g.leading_term().unwrap().1.clone();
            num = num.scale(&lc.pow(-(*k as i64)).unwrap());
            factors.push((g.scale(&lc.inv().unwrap()), *k));
        }
        Self::from_parts(num, factors)
    }

    /// Field automorphism induced by `X_s -> X_{w(s)}`.
    pub fn apply_perm(&self, w: &Perm) -> RatFunc {
        self.map_auto(|p| p.apply_perm(w))
    }

    pub fn swap_vars(&self, r: usize) -> RatFunc {
        self.map_auto(|p| p.swap_vars(r))
    }

    /// Demazure operator; polynomial inputs go through exact polynomial division.
    pub fn demazure(&self, r: usize) -> Result<RatFunc> {
        if self.is_polynomial() {
            return Ok(RatFunc::from_poly(self.num.demazure(r)?));
        }
        let lin = RatFunc::var(self.field(), self.nvars(), r).sub(&RatFunc::var(
            self.field(),
            self.nvars(),
            r + 1,
        ));
        self.swap_vars(r).sub(self).div(&lin)
    }

    pub fn eval(&self, point: &[FieldElem]) -> Result<FieldElem> {
        let d = self.den.eval(point)?;
        if d.is_zero() {
            let shown: Vec<String> = point.iter().map(|x| x.to_string()).collect();
            return Err(HeckeError::PoleAtResidue(format!("({})", shown.join(","))));
        }
        Ok(&self.num.eval(point)? / &d)
    }

    /// Value at `X = i` (degenerate) or `X = q^i` (non-degenerate).
    pub fn eval_at_residues(&self, residues: &[i64], flavor: &HeckeFlavor) -> Result<FieldElem> {
        let point: Vec<FieldElem> = residues.iter().map(|&i| flavor.residue_embed(i)).collect();
        self.eval(&point).map_err(|e| match e {
            HeckeError::PoleAtResidue(_) => HeckeError::PoleAtResidue(format!("{residues:?}")),
            other => other,
        })
    }

    /// Substitute `X_s -> a_s X_s + b_s`.
    pub fn substitute_affine(&self, maps: &[(FieldElem, FieldElem)]) -> RatFunc {
        if maps.iter().all(|(a, _)| !a.is_zero()) {
            self.map_auto(|p| p.substitute_affine(maps))
        } else {
            Self::reduce(
                self.num.substitute_affine(maps),
                self.den.substitute_affine(maps),
            )
        }
    }

    pub fn parse(s: &str, field: FieldSpec, n: usize) -> Result<RatFunc> {
        Parser {
            toks: tokenize(s)?,
            pos: 0,
            field,
            n,
        }
        .parse_all()
    }
}

impl MultiPoly {
    pub fn parse(s: &str, field: FieldSpec, n: usize) -> Result<MultiPoly> {
        let f = RatFunc::parse(s, field, n)?;
        if f.den.is_one() {
            Ok(f.num)
        } else if f.den.num_terms() == 1 {
            // Laurent monomial denominators become negative exponents
            let (m, c) = f.den.leading_term().unwrap();
            let inv = Monomial(m.0.iter().map(|e| -e).collect());
            Ok(f.num.mul_monomial(&inv).scale(&c.inv()?))
        } else {
            Err(HeckeError::Parse(format!(
                "`{s}` is not a (Laurent) polynomial"
            )))
        }
    }
}

fn fmt_monomial(m: &Monomial) -> String {
    let mut parts = Vec::new();
    for (s, &k) in m.0.iter().enumerate() {
        match k {
            0 => {}
            1 => parts.push(format!("X{}", s + 1)),
            _ => parts.push(format!("X{}^{}", s + 1, k)),
        }
    }
    parts.join("*")
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in self.terms.iter().rev() {
            let neg = c.is_negative_literal();
            let mag = if neg { -c } else { c.clone() };
            let body = if m.is_one() {
                if mag.is_compound() {
                    format!("({mag})")
                } else {
                    mag.to_string()
                }
            } else if mag.is_one() {
                fmt_monomial(m)
            } else if mag.is_compound() {
                format!("({mag})*{}", fmt_monomial(m))
            } else {
                format!("{mag}*{}", fmt_monomial(m))
            };
            match (first, neg) {
                (true, true) => write!(f, "-{body}")?,
                (true, false) => write!(f, "{body}")?,
                (false, true) => write!(f, " - {body}")?,
                (false, false) => write!(f, " + {body}")?,
            }
            first = false;
        }
        Ok(())
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigInt),
    Var(usize),
    Zeta,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn tokenize(s: &str) -> Result<Vec<Tok>> {
    let chars: Vec<char> = s.chars().collect();
    let mut toks = Vec::new();
    let mut k = 0;
    while k < chars.len() {
        let c = chars[k];
        match c {
            ' ' | '\t' | '\n' => k += 1,
            '+' => {
                toks.push(Tok::Plus);
                k += 1;
            }
            '-' => {
                toks.push(Tok::Minus);
                k += 1;
            }
            '*' => {
                toks.push(Tok::Star);
                k += 1;
            }
            '/' => {
                toks.push(Tok::Slash);
                k += 1;
            }
            '^' => {
                toks.push(Tok::Caret);
                k += 1;
            }
            '(' => {
                toks.push(Tok::LParen);
                k += 1;
            }
            ')' => {
                toks.push(Tok::RParen);
                k += 1;
            }
            'X' | 'x' => {
                let start = k + 1;
                k = start;
                while k < chars.len() && chars[k].is_ascii_digit() {
                    k += 1;
                }
                let idx: usize = chars[start..k]
                    .iter()
                    .collect::<String>()
                    .parse()
                    .map_err(|_| HeckeError::Parse(format!("variable without index in `{s}`")))?;
                toks.push(Tok::Var(idx));
            }
            'z' if chars[k..].iter().take(4).collect::<String>() == "zeta" => {
                toks.push(Tok::Zeta);
                k += 4;
            }
            d if d.is_ascii_digit() => {
                let start = k;
                while k < chars.len() && chars[k].is_ascii_digit() {
                    k += 1;
                }
                let digits: String = chars[start..k].iter().collect();
                toks.push(Tok::Num(digits.parse().unwrap()));
            }
            other => {
                return Err(HeckeError::Parse(format!(
                    "unexpected character `{other}` in `{s}`"
                )))
            }
        }
    }
    Ok(toks)
}

struct Parser {
    toks: Vec<Tok>,
    pos: usize,
    field: FieldSpec,
    n: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn err(&self, msg: &str) -> HeckeError {
        HeckeError::Parse(format!("{msg} at token {}", self.pos))
    }

    fn parse_all(mut self) -> Result<RatFunc> {
        let v = self.expr()?;
        if self.pos != self.toks.len() {
            return Err(self.err("trailing input"));
        }
        Ok(v)
    }

    fn expr(&mut self) -> Result<RatFunc> {
        let mut negate = false;
        match self.peek() {
            Some(Tok::Minus) => {
                negate = true;
                self.pos += 1;
            }
            Some(Tok::Plus) => self.pos += 1,
            _ => {}
        }
        let mut acc = self.term()?;
        if negate {
            acc = acc.neg();
        }
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    acc = acc.add(&self.term()?);
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    acc = acc.sub(&self.term()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<RatFunc> {
        let mut acc = self.power()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.pos += 1;
                    acc = acc.mul(&self.power()?);
                }
                Some(Tok::Slash) => {
                    self.pos += 1;
                    acc = acc.div(&self.power()?)?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn power(&mut self) -> Result<RatFunc> {
        let base = self.atom()?;
        if self.peek() != Some(&Tok::Caret) {
            return Ok(base);
        }
        self.pos += 1;
        let neg = if self.peek() == Some(&Tok::Minus) {
            self.pos += 1;
            true
        } else {
            false
        };
        let Some(Tok::Num(k)) = self.next() else {
            return Err(self.err("expected exponent"));
        };
        let k: u32 = k.try_into().map_err(|_| self.err("exponent too large"))?;
        let p = base.pow(k);
        if neg {
            p.inv()
        } else {
            Ok(p)
        }
    }

    fn atom(&mut self) -> Result<RatFunc> {
        match self.next() {
            Some(Tok::Num(v)) => Ok(RatFunc::constant(self.n, self.field.from_bigint(&v))),
            Some(Tok::Var(s)) => {
                if s == 0 || s > self.n {
                    return Err(self.err(&format!("variable X{s} outside X1..X{}", self.n)));
                }
                Ok(RatFunc::var(self.field, self.n, s))
            }
            Some(Tok::Zeta) => Ok(RatFunc::constant(self.n, self.field.zeta()?)),
            Some(Tok::LParen) => {
                let v = self.expr()?;
                if self.next() != Some(Tok::RParen) {
                    return Err(self.err("expected `)`"));
                }
                Ok(v)
            }
            _ => Err(self.err("unexpected token")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    const FIELDS: [FieldSpec; 3] = [
        FieldSpec::Rationals,
        FieldSpec::PrimeField(5),
        FieldSpec::Cyclotomic(3),
    ];

    fn p(s: &str) -> MultiPoly {
        MultiPoly::parse(s, FieldSpec::Rationals, 3).unwrap()
    }

    fn r(s: &str) -> RatFunc {
        RatFunc::parse(s, FieldSpec::Rationals, 3).unwrap()
    }

    #[test]
    fn arithmetic_examples() {
        assert_eq!(p("(X1 - X2)*(X1 + X2)"), p("X1^2 - X2^2"));
        assert_eq!(r("(X1^2 - X2^2)/(X1 - X2)"), r("X1 + X2"));
        assert!(r("(X1^2 - X2^2)/(X1 - X2)").is_polynomial());
        assert!(r("1/(X1 - X2) + 1/(X2 - X1)").is_zero());
        assert_eq!(
            RatFunc::new(p("X1"), MultiPoly::zero(FieldSpec::Rationals, 3)),
            Err(HeckeError::DivisionByZero)
        );
    }

    #[test]
    fn permutation_examples() {
        let s1 = Perm::simple(3, 1);
        assert_eq!(r("X1").apply_perm(&s1), r("X2"));
        assert_eq!(r("1/(X1 - X2)").apply_perm(&s1), r("-1/(X1 - X2)"));
        for w in crate::symgroup::enumerate_group(3).unwrap() {
            assert_eq!(r("X1 + X2 + X3").apply_perm(&w), r("X1 + X2 + X3"));
        }
    }

    #[test]
    fn demazure_examples() {
        assert_eq!(r("X1").demazure(1).unwrap(), r("-1"));
        assert_eq!(r("X2").demazure(1).unwrap(), r("1"));
        assert!(r("X1*X2").demazure(1).unwrap().is_zero());
        assert_eq!(r("1/X1").demazure(1).unwrap(), r("1/(X1*X2)"));
        assert_eq!(p("X1^-1").demazure(1).unwrap(), p("X1^-1*X2^-1"));
    }

    #[test]
    fn evaluation_examples() {
        let f5 = FieldSpec::PrimeField(5);
        let deg = HeckeFlavor::degenerate(f5);
        let f = RatFunc::parse("X1 - X2", f5, 2).unwrap();
        assert_eq!(f.eval_at_residues(&[0, 1], &deg).unwrap(), f5.from_int(4));
        let nd = HeckeFlavor::nondegenerate(FieldSpec::Rationals.from_int(2)).unwrap();
        let g = RatFunc::parse("X1", FieldSpec::Rationals, 1).unwrap();
        assert_eq!(
            g.eval_at_residues(&[2], &nd).unwrap(),
            FieldSpec::Rationals.from_int(4)
        );
        let pole = RatFunc::parse("1/(X1 - X2)", f5, 2).unwrap();
        assert!(matches!(
            pole.eval_at_residues(&[0, 0], &deg),
            Err(HeckeError::PoleAtResidue(_))
        ));
    }

    #[test]
    fn gcd_examples() {
        assert_eq!(
            multipoly_gcd(&p("X1^2 - X2^2"), &p("X1 - X2")),
            p("X1 - X2")
        );
        assert!(multipoly_gcd(&p("X1^3 + 2*X2"), &p("1")).is_one());
        let a = p("(X1 - X2)^2*(X2 - X3)");
        let b = p("(X1 - X2)*(X2 - X3)^2");
        let g = multipoly_gcd(&a, &b);
        assert_eq!(g, p("(X1 - X2)*(X2 - X3)").monic());
        // oracle: both cofactors exist and are coprime
        let ca = a.div_exact(&g).unwrap();
        let cb = b.div_exact(&g).unwrap();
        assert_eq!(ca.mul(&g), a);
        assert_eq!(cb.mul(&g), b);
        assert!(multipoly_gcd(&ca, &cb).is_one());
    }

    #[test]
    fn gcd_random_products() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for field in FIELDS {
            for _ in 0..20 {
                let g = MultiPoly::random(field, 3, 2, 3, &mut rng);
                let a = MultiPoly::random(field, 3, 2, 3, &mut rng);
                let b = MultiPoly::random(field, 3, 2, 3, &mut rng);
                if g.is_zero() || a.is_zero() || b.is_zero() {
                    continue;
                }
                let h = multipoly_gcd(&a.mul(&g), &b.mul(&g));
                assert!(
                    h.div_exact(&g.monic()).is_some(),
                    "gcd misses common factor"
                );
                assert!(a.mul(&g).div_exact(&h).is_some());
                assert!(b.mul(&g).div_exact(&h).is_some());
            }
        }
    }

    #[test]
    fn print_parse_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for field in FIELDS {
            for _ in 0..30 {
                let a = MultiPoly::random(field, 3, 3, 4, &mut rng);
                let b = MultiPoly::random(field, 3, 2, 3, &mut rng);
                if b.is_zero() {
                    continue;
                }
                let f = RatFunc::new(a, b).unwrap();
                let text = f.to_string();
                let back = RatFunc::parse(&text, field, 3).unwrap();
                assert_eq!(back, f, "{text}");
                assert_eq!(back.to_string(), text);
            }
        }
        assert_eq!(
            p("3*X1^2*X2 - X3 + 1/2").to_string(),
            "3*X1^2*X2 - X3 + 1/2"
        );
        let c3 = FieldSpec::Cyclotomic(3);
        let z = RatFunc::parse("(zeta + 1)*X1 - zeta", c3, 2).unwrap();
        assert_eq!(z.to_string(), "(zeta + 1)*X1 - zeta");
        assert!(RatFunc::parse("X4", FieldSpec::Rationals, 3).is_err());
        assert!(RatFunc::parse("X1 +", FieldSpec::Rationals, 3).is_err());
    }

    fn random_polys(field: FieldSpec, seed: u64, count: usize) -> Vec<RatFunc> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..count)
            .map(|_| RatFunc::from_poly(MultiPoly::random(field, 3, 3, 4, &mut rng)))
            .collect()
    }

    #[test]
    fn demazure_identities_on_random_polynomials() {
        for field in FIELDS {
            let fs = random_polys(field, 3, 100);
            let gs = random_polys(field, 4, 100);
            for (f, g) in fs.iter().zip(&gs) {
                for rr in 1..3 {
                    let lhs = f.mul(g).demazure(rr).unwrap();
                    let rhs = f
                        .demazure(rr)
                        .unwrap()
                        .mul(g)
                        .add(&f.swap_vars(rr).mul(&g.demazure(rr).unwrap()));
                    assert_eq!(lhs, rhs, "Leibniz");
                    let d = f.demazure(rr).unwrap();
                    assert_eq!(d.swap_vars(rr), d);
                    assert_eq!(f.swap_vars(rr).demazure(rr).unwrap(), d.neg());
                    assert!(d.demazure(rr).unwrap().is_zero());
                }
            }
        }
    }

    #[test]
    fn group_action_and_reduction_idempotence() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let group = crate::symgroup::enumerate_group(3).unwrap();
        for _ in 0..30 {
            let a = MultiPoly::random(FieldSpec::Rationals, 3, 3, 3, &mut rng);
            let b = MultiPoly::random(FieldSpec::Rationals, 3, 2, 3, &mut rng);
            if b.is_zero() {
                continue;
            }
            let f = RatFunc::new(a, b).unwrap();
            let v = &group[rng.gen_range(0..6)];
            let w = &group[rng.gen_range(0..6)];
            assert_eq!(f.apply_perm(w).apply_perm(v), f.apply_perm(&v.compose(w)));
            let again = RatFunc::new(f.num().clone(), f.den().clone()).unwrap();
            assert_eq!(again, f);
            // cross-multiplied equality agrees with representation equality
            let g = RatFunc::new(f.num().mul(&p("X1 + 2")), f.den().mul(&p("X1 + 2"))).unwrap();
            assert_eq!(g, f);
            assert_eq!(f.num().mul(g.den()), g.num().mul(f.den()));
        }
    }

    #[test]
    fn affine_substitution_round_trip() {
        let q = FieldSpec::Rationals;
        let maps: Vec<_> = (0..3).map(|k| (q.from_int(2), q.from_int(k))).collect();
        let inverse: Vec<_> = (0..3)
            .map(|k| {
                (
                    q.from_int(1) / q.from_int(2),
                    -(q.from_int(k) / q.from_int(2)),
                )
            })
            .collect();
        let f = r("(X1^2 - X3)/(X1 - X2 + 1)");
        assert_eq!(f.substitute_affine(&maps).substitute_affine(&inverse), f);
    }

    fn random_ratfunc(field: FieldSpec, rng: &mut ChaCha8Rng) -> RatFunc {
        use rand::Rng;
        let num = MultiPoly::random(field, 3, 2, 3, rng);
        let mut den = MultiPoly::one(field, 3);
        for _ in 0..rng.gen_range(0..3) {
            let lin = if rng.gen_bool(0.7) {
                let (a, b) = (rng.gen_range(1..=3), rng.gen_range(1..=3));
                MultiPoly::var(field, 3, a)
                    .sub(&MultiPoly::var(field, 3, b).scale(&field.from_int(rng.gen_range(-2..3))))
            } else {
                MultiPoly::random(field, 3, 2, 2, rng)
            };
            if !lin.is_zero() {
                den = den.mul(&lin);
            }
        }
        RatFunc::new(num, den).unwrap()
    }

    fn canonical(f: &RatFunc) -> bool {
        let expanded = expand(f.field(), f.nvars(), &f.factors);
        let monic = f
            .den
            .leading_term()
            .map(|(_, c)| c.is_one())
            .unwrap_or(false);
        expanded == f.den && monic && (f.is_zero() || multipoly_gcd(&f.num, &f.den).is_one())
    }

    proptest::proptest! {
        #![proptest_config(proptest::prelude::ProptestConfig::with_cases(40))]
        #[test]
        fn factored_denominators_stay_canonical(seed in proptest::prelude::any::<u64>(), fi in 0usize..3) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let field = FIELDS[fi];
            let (f, g, h) = (random_ratfunc(field, &mut rng), random_ratfunc(field, &mut rng), random_ratfunc(field, &mut rng));
            let sum = f.add(&g);
            let prod = sum.mul(&h);
            for x in [&sum, &prod, &f.swap_vars(1), &f.sub(&g.swap_vars(2))] {
                proptest::prop_assert!(canonical(x), "{}", x);
            }
            proptest::prop_assert_eq!(prod.clone(), f.mul(&h).add(&g.mul(&h)));
            proptest::prop_assert_eq!(RatFunc::new(f.num().mul(g.den()).add(&g.num().mul(f.den())), f.den().mul(g.den())).unwrap(), sum);
            if !f.is_zero() {
                proptest::prop_assert!(f.mul(&f.inv().unwrap()).is_one());
            }
        }
    }
}
