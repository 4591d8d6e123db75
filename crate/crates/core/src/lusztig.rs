//! Elements of the Lusztig extension: finite sums `sum eps(i) f_{i,w}(X) T_w`
//! over an orbit of residue tuples, with rational coefficients written to
//! the left of `T_w`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{HeckeError, Result};
use crate::polyrat::RatFunc;
use crate::residues::{residue_gap, Gap, Orbit, ResidueTuple};
use crate::scalars::{FieldElem, FieldSpec, HeckeFlavor};
use crate::symgroup::Perm;

#[derive(Debug, PartialEq)]
pub struct LusztigContext {
    flavor: HeckeFlavor,
    orbit: Orbit,
    n: usize,
    corrections: Vec<RatFunc>,
}

impl LusztigContext {
    pub fn new(flavor: HeckeFlavor, orbit: Orbit) -> Result<Arc<Self>> {
        if orbit.e() != flavor.e() {
            return Err(HeckeError::OrbitMismatch);
        }
        let n = orbit.n();
        let field = flavor.field();
        let corrections = (1..n)
            .map(|r| {
                let diff = RatFunc::var(field, n, r).sub(&RatFunc::var(field, n, r + 1));
                let num = match flavor.q() {
                    None => RatFunc::one(field, n),
                    Some(q) => RatFunc::var(field, n, r + 1).scale(&(q - &field.one())),
                };
                num.div(&diff).expect("nonzero linear form")
            })
            .collect();
        Ok(Arc::new(Self {
            flavor,
            orbit,
            n,
            corrections,
        }))
    }

    /// Context over the singleton orbit `(0,...,0)`, where `eps` is the unit.
    pub fn trivial(flavor: HeckeFlavor, n: usize) -> Arc<Self> {
        let i = ResidueTuple::new(flavor.e(), vec![0; n]).unwrap();
        Self::new(flavor, crate::residues::orbit_of(&i)).unwrap()
    }

    pub fn flavor(&self) -> &HeckeFlavor {
        &self.flavor
    }

    pub fn orbit(&self) -> &Orbit {
        &self.orbit
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn field(&self) -> FieldSpec {
        self.flavor.field()
    }

    fn idx(&self, i: &ResidueTuple) -> Result<usize> {
        self.orbit.index_of(i).ok_or(HeckeError::OrbitMismatch)
    }

    fn member(&self, k: usize) -> &ResidueTuple {
        &self.orbit.members()[k]
    }

    fn swapped_idx(&self, k: usize, r: usize) -> usize {
        self.orbit
            .index_of(&self.member(k).swap(r))
            .expect("orbit is closed under place permutation")
    }

    /// The rational part of `kappa_r`.
    pub fn correction(&self, r: usize) -> &RatFunc {
        &self.corrections[r - 1]
    }

    /// `T_r f - s_r(f) T_r`.
    pub fn straighten(&self, f: &RatFunc, r: usize) -> Result<RatFunc> {
        let d = f.demazure(r)?;
        Ok(match self.flavor.q() {
            None => d,
            Some(q) => d
                .mul(&RatFunc::var(self.field(), self.n, r + 1))
                .scale(&(q - &self.field().one())),
        })
    }

    pub fn var(&self, s: usize) -> RatFunc {
        RatFunc::var(self.field(), self.n, s)
    }

    pub fn constant(&self, c: FieldElem) -> RatFunc {
        RatFunc::constant(self.n, c)
    }
}

type Key = (usize, Perm);

#[derive(Clone, Debug)]
pub struct LusztigElem {
    ctx: Arc<LusztigContext>,
    terms: BTreeMap<Key, RatFunc>,
}

impl PartialEq for LusztigElem {
    fn eq(&self, other: &Self) -> bool {
        (Arc::ptr_eq(&self.ctx, &other.ctx) || *self.ctx == *other.ctx) && self.terms == other.terms
    }
}

fn add_into(terms: &mut BTreeMap<Key, RatFunc>, key: Key, f: RatFunc) {
    if f.is_zero() {
        return;
    }
    match terms.entry(key) {
        std::collections::btree_map::Entry::Vacant(v) => {
            v.insert(f);
        }
        std::collections::btree_map::Entry::Occupied(mut o) => {
            let s = o.get().add(&f);
            if s.is_zero() {
                o.remove();
            } else {
                *o.get_mut() = s;
            }
        }
    }
}

impl LusztigElem {
    pub fn zero(ctx: &Arc<LusztigContext>) -> Self {
        Self {
            ctx: ctx.clone(),
            terms: BTreeMap::new(),
        }
    }

    /// `eps(i) f T_w`.
    pub fn term(ctx: &Arc<LusztigContext>, i: &ResidueTuple, f: RatFunc, w: Perm) -> Result<Self> {
        let mut out = Self::zero(ctx);
        add_into(&mut out.terms, (ctx.idx(i)?, w), f);
        Ok(out)
    }

    /// `sum_i eps(i) f_i`.
    pub fn diag(
        ctx: &Arc<LusztigContext>,
        mut f: impl FnMut(&ResidueTuple) -> Result<RatFunc>,
    ) -> Result<Self> {
        let mut out = Self::zero(ctx);
        let id = Perm::identity(ctx.n);
        for (k, i) in ctx.orbit.members().iter().enumerate() {
            add_into(&mut out.terms, (k, id.clone()), f(i)?);
        }
        Ok(out)
    }

    pub fn coeff(ctx: &Arc<LusztigContext>, f: &RatFunc) -> Self {
        Self::diag(ctx, |_| Ok(f.clone())).unwrap()
    }

    pub fn one(ctx: &Arc<LusztigContext>) -> Self {
        Self::coeff(ctx, &RatFunc::one(ctx.field(), ctx.n))
    }

    pub fn eps(ctx: &Arc<LusztigContext>, i: &ResidueTuple) -> Result<Self> {
        Self::term(
            ctx,
            i,
            RatFunc::one(ctx.field(), ctx.n),
            Perm::identity(ctx.n),
        )
    }

    pub fn t(ctx: &Arc<LusztigContext>, r: usize) -> Self {
        let mut out = Self::zero(ctx);
        let s = Perm::simple(ctx.n, r);
        for k in 0..ctx.orbit.len() {
            add_into(
                &mut out.terms,
                (k, s.clone()),
                RatFunc::one(ctx.field(), ctx.n),
            );
        }
        out
    }

    /// `T_w` along the canonical reduced word.
    pub fn t_w(ctx: &Arc<LusztigContext>, w: &Perm) -> Self {
        let mut out = Self::zero(ctx);
        for k in 0..ctx.orbit.len() {
            add_into(
                &mut out.terms,
                (k, w.clone()),
                RatFunc::one(ctx.field(), ctx.n),
            );
        }
        out
    }

    pub fn x(ctx: &Arc<LusztigContext>, s: usize) -> Self {
        Self::coeff(ctx, &ctx.var(s))
    }

    pub fn x_inv(ctx: &Arc<LusztigContext>, s: usize) -> Self {
        Self::coeff(ctx, &ctx.var(s).inv().unwrap())
    }

    pub fn kappa(ctx: &Arc<LusztigContext>, r: usize) -> Self {
        Self::t(ctx, r).add(&Self::coeff(ctx, ctx.correction(r)))
    }

    pub fn kappa_w(ctx: &Arc<LusztigContext>, w: &Perm) -> Self {
        let mut acc = Self::one(ctx);
        for r in w.reduced_word() {
            acc = acc.mul(&Self::kappa(ctx, r)).unwrap();
        }
        acc
    }

    pub fn y(ctx: &Arc<LusztigContext>, r: usize) -> Self {
        let flavor = ctx.flavor.clone();
        Self::diag(ctx, |i| Ok(y_to_x(&flavor, i, &ctx.var(r)))).unwrap()
    }

    pub fn y_inv(ctx: &Arc<LusztigContext>, r: usize) -> Self {
        let flavor = ctx.flavor.clone();
        Self::diag(ctx, |i| y_to_x(&flavor, i, &ctx.var(r)).inv()).unwrap()
    }

    pub fn theta(ctx: &Arc<LusztigContext>, r: usize) -> Self {
        let d = Self::diag(ctx, |i| q_factor_inv(&ctx.flavor, r, i)).unwrap();
        Self::kappa(ctx, r).mul(&d).unwrap()
    }

    pub fn psi(ctx: &Arc<LusztigContext>, r: usize) -> Self {
        let flavor = ctx.flavor.clone();
        let shift = Self::diag(ctx, |i| {
            if i.get(r) != i.get(r + 1) {
                return Ok(RatFunc::zero(flavor.field(), ctx.n));
            }
            y_to_x(&flavor, i, &ctx.var(r).sub(&ctx.var(r + 1))).inv()
        })
        .unwrap();
        Self::theta(ctx, r).sub(&shift)
    }

    pub fn psi_w(ctx: &Arc<LusztigContext>, w: &Perm) -> Self {
        let mut acc = Self::one(ctx);
        for r in w.reduced_word() {
            acc = acc.mul(&Self::psi(ctx, r)).unwrap();
        }
        acc
    }

    pub fn context(&self) -> &Arc<LusztigContext> {
        &self.ctx
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&ResidueTuple, &Perm, &RatFunc)> {
        self.terms
            .iter()
            .map(|((k, w), f)| (self.ctx.member(*k), w, f))
    }

    pub fn coefficient(&self, i: &ResidueTuple, w: &Perm) -> RatFunc {
        self.ctx
            .idx(i)
            .ok()
            .and_then(|k| self.terms.get(&(k, w.clone())).cloned())
            .unwrap_or_else(|| RatFunc::zero(self.ctx.field(), self.ctx.n))
    }

    fn check(&self, other: &LusztigElem) -> Result<()> {
        if Arc::ptr_eq(&self.ctx, &other.ctx) {
            return Ok(());
        }
        if self.ctx.flavor != other.ctx.flavor {
            return Err(HeckeError::FlavorMismatch);
        }
        if self.ctx.orbit != other.ctx.orbit {
            return Err(HeckeError::OrbitMismatch);
        }
        Ok(())
    }

    pub fn add(&self, other: &LusztigElem) -> LusztigElem {
        self.check(other)
            .expect("adding elements of different extensions");
        let mut out = self.clone();
        for (k, f) in &other.terms {
            add_into(&mut out.terms, k.clone(), f.clone());
        }
        out
    }

    pub fn neg(&self) -> LusztigElem {
        Self {
            ctx: self.ctx.clone(),
            terms: self
                .terms
                .iter()
                .map(|(k, f)| (k.clone(), f.neg()))
                .collect(),
        }
    }

    pub fn sub(&self, other: &LusztigElem) -> LusztigElem {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &FieldElem) -> LusztigElem {
        let mut out = Self::zero(&self.ctx);
        for (k, f) in &self.terms {
            add_into(&mut out.terms, k.clone(), f.scale(c));
        }
        out
    }

    /// Left multiplication by `T_r`.
    pub fn left_mul_t(&self, r: usize) -> Result<LusztigElem> {
        let ctx = &self.ctx;
        let q = ctx.flavor.q().cloned();
        let mut out = Self::zero(ctx);
        for ((j, u), h) in &self.terms {
            let sj = ctx.swapped_idx(*j, r);
            let sh = h.swap_vars(r);
            let su = u.left_mul_simple(r);
            match (&q, u.left_descent(r)) {
                (Some(q), true) => {
                    add_into(
                        &mut out.terms,
                        (sj, u.clone()),
                        sh.scale(&(q - &ctx.field().one())),
                    );
                    add_into(&mut out.terms, (sj, su), sh.scale(q));
                }
                _ => add_into(&mut out.terms, (sj, su), sh),
            }
            add_into(&mut out.terms, (sj, u.clone()), ctx.straighten(h, r)?);
            if sj != *j {
                let ch = ctx.correction(r).mul(h);
                add_into(&mut out.terms, (sj, u.clone()), ch.clone());
                add_into(&mut out.terms, (*j, u.clone()), ch.neg());
            }
        }
        Ok(out)
    }

    /// `T_w * self` along the canonical reduced word of `w`.
    pub fn left_mul_t_w(&self, w: &Perm) -> Result<LusztigElem> {
        let mut acc = self.clone();
        for r in w.reduced_word().into_iter().rev() {
            acc = acc.left_mul_t(r)?;
        }
        Ok(acc)
    }

    pub fn mul(&self, other: &LusztigElem) -> Result<LusztigElem> {
        self.check(other)?;
        let mut cache: HashMap<Perm, LusztigElem> = HashMap::new();
        let mut out = Self::zero(&self.ctx);
        for ((k, w), f) in &self.terms {
            if !cache.contains_key(w) {
                cache.insert(w.clone(), other.left_mul_t_w(w)?);
            }
            let tb = &cache[w];
            for ((k2, u), g) in tb.terms.range((*k, Perm::identity(0))..) {
                if k2 != k {
                    break;
                }
                add_into(&mut out.terms, (*k, u.clone()), f.mul(g));
            }
        }
        Ok(out)
    }

    /// Right multiplication by `T_r` through the quadratic relation.
    pub fn mul_right_t(&self, r: usize) -> LusztigElem {
        let q = self.ctx.flavor.q().cloned();
        let mut out = Self::zero(&self.ctx);
        for ((k, w), f) in &self.terms {
            let ws = w.right_mul_simple(r);
            match (&q, w.descent(r)) {
                (Some(q), true) => {
                    add_into(
                        &mut out.terms,
                        (*k, w.clone()),
                        f.scale(&(q - &self.ctx.field().one())),
                    );
                    add_into(&mut out.terms, (*k, ws), f.scale(q));
                }
                _ => add_into(&mut out.terms, (*k, ws), f.clone()),
            }
        }
        out
    }

    pub fn mul_right_poly(&self, f: &RatFunc) -> Result<LusztigElem> {
        self.mul(&Self::coeff(&self.ctx, f))
    }

    pub fn mul_right_eps(&self, i: &ResidueTuple) -> Result<LusztigElem> {
        self.mul(&Self::eps(&self.ctx, i)?)
    }

    /// `eps(i) * self`.
    pub fn project_left(&self, i: &ResidueTuple) -> Result<LusztigElem> {
        let k = self.ctx.idx(i)?;
        let terms = self
            .terms
            .iter()
            .filter(|((k2, _), _)| *k2 == k)
            .map(|(a, b)| (a.clone(), b.clone()))
            .collect();
        Ok(Self {
            ctx: self.ctx.clone(),
            terms,
        })
    }

    /// Coefficients rewritten per idempotent in `y`-coordinates.
    pub fn to_y_coordinates(&self) -> BTreeMap<(ResidueTuple, Perm), RatFunc> {
        self.terms
            .iter()
            .map(|((k, w), f)| {
                let i = self.ctx.member(*k);
                ((i.clone(), w.clone()), x_to_y(&self.ctx.flavor, i, f))
            })
            .collect()
    }

    pub fn from_y_coordinates(
        ctx: &Arc<LusztigContext>,
        coords: &BTreeMap<(ResidueTuple, Perm), RatFunc>,
    ) -> Result<Self> {
        let mut out = Self::zero(ctx);
        for ((i, w), f) in coords {
            add_into(
                &mut out.terms,
                (ctx.idx(i)?, w.clone()),
                y_to_x(&ctx.flavor, i, f),
            );
        }
        Ok(out)
    }

    /// Every denominator is nonzero at its residue point.
    pub fn in_semirationalization(&self) -> bool {
        self.terms.iter().all(|((k, _), f)| {
            let i = self.ctx.member(*k);
            f.den()
                .eval(&residue_point(&self.ctx.flavor, i))
                .map(|v| !v.is_zero())
                .unwrap_or(false)
        })
    }

    pub fn to_json(&self) -> Vec<ElemTermJson> {
        self.terms()
            .map(|(i, w, f)| ElemTermJson {
                idempotent: i.to_string(),
                perm: w.one_line(),
                num: f.num().to_string(),
                den: f.den().to_string(),
            })
            .collect()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ElemTermJson {
    pub idempotent: String,
    pub perm: Vec<usize>,
    pub num: String,
    pub den: String,
}

impl fmt::Display for LusztigElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms()
            .map(|(i, w, c)| format!("e({i})*({c})*T{w}"))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// `X = i` resp. `X = q^i`.
pub fn residue_point(flavor: &HeckeFlavor, i: &ResidueTuple) -> Vec<FieldElem> {
    i.entries()
        .iter()
        .map(|&x| flavor.residue_embed(x))
        .collect()
}

/// Substitute `y_s = X_s - i_s` resp. `y_s = 1 - q^{-i_s} X_s`.
pub fn y_to_x(flavor: &HeckeFlavor, i: &ResidueTuple, f: &RatFunc) -> RatFunc {
    let field = flavor.field();
    let maps: Vec<_> = i
        .entries()
        .iter()
        .map(|&x| match flavor.q() {
            None => (field.one(), -field.from_int(x)),
            Some(_) => (-flavor.q_pow(-x), field.one()),
        })
        .collect();
    f.substitute_affine(&maps)
}

/// Substitute `X_s = y_s + i_s` resp. `X_s = q^{i_s}(1 - y_s)`.
pub fn x_to_y(flavor: &HeckeFlavor, i: &ResidueTuple, f: &RatFunc) -> RatFunc {
    let field = flavor.field();
    let maps: Vec<_> = i
        .entries()
        .iter()
        .map(|&x| match flavor.q() {
            None => (field.one(), field.from_int(x)),
            Some(_) => (-flavor.q_pow(x), flavor.q_pow(x)),
        })
        .collect();
    f.substitute_affine(&maps)
}

/// Polynomial ring helpers in `y`-variables (stored as `X`-indexed variables).
struct YRing {
    field: FieldSpec,
    n: usize,
}

impl YRing {
    fn y(&self, s: usize) -> RatFunc {
        RatFunc::var(self.field, self.n, s)
    }
    fn c(&self, v: &FieldElem) -> RatFunc {
        RatFunc::constant(self.n, v.clone())
    }
    fn int(&self, v: i64) -> RatFunc {
        self.c(&self.field.from_int(v))
    }
    fn div(&self, a: &RatFunc, b: &RatFunc) -> RatFunc {
        a.div(b).expect("table denominators are nonzero")
    }
}

fn one_minus_q_plus(ring: &YRing, q: &FieldElem, a: usize, b: usize) -> RatFunc {
    // 1 - q + q y_a - y_b
    ring.int(1)
        .sub(&ring.c(q))
        .add(&ring.y(a).scale(q))
        .sub(&ring.y(b))
}

/// `Q_r(i)` in `y`-coordinates.
pub fn q_table_y(flavor: &HeckeFlavor, r: usize, i: &ResidueTuple) -> RatFunc {
    let ring = YRing {
        field: flavor.field(),
        n: i.n(),
    };
    let (yr, ys) = (ring.y(r), ring.y(r + 1));
    let d = i.get(r) - i.get(r + 1);
    match (flavor.q(), residue_gap(i, r)) {
        (None, Gap::Equal) => ring.int(1).add(&ys).sub(&yr),
        (None, Gap::PlusOne) => ring.int(1),
        (None, Gap::MinusOne) => {
            let a = ring.int(1).add(&ys).sub(&yr);
            ring.div(&ring.int(2).add(&ys).sub(&yr), &a.pow(2))
        }
        (None, Gap::PlusOneE2) => ring.div(&ring.int(1), &ring.int(1).add(&ys).sub(&yr)),
        (None, Gap::Generic) => ring
            .int(1)
            .sub(&ring.div(&ring.int(1), &yr.sub(&ys).add(&ring.int(d)))),
        (Some(q), Gap::Equal) => one_minus_q_plus(&ring, q, r + 1, r),
        (Some(_), Gap::PlusOne) => ring.c(&flavor.q_pow(i.get(r))),
        (Some(q), Gap::MinusOne) => {
            let q2 = q * q;
            let num = one_minus_q_plus(&ring, &q2, r + 1, r);
            let den = one_minus_q_plus(&ring, q, r + 1, r)
                .pow(2)
                .scale(&flavor.q_pow(i.get(r)));
            ring.div(&num, &den)
        }
        (Some(q), Gap::PlusOneE2) => ring.div(&ring.int(1), &one_minus_q_plus(&ring, q, r + 1, r)),
        (Some(q), Gap::Generic) => {
            let qd = flavor.q_pow(d);
            let a = ring.int(1).sub(&yr).scale(&qd);
            let b = ring.int(1).sub(&ys);
            ring.div(&a.sub(&b.scale(q)), &a.sub(&b))
        }
    }
}

/// Tabulated value of `s_r(Q_r(s_r i)) Q_r(i)` in `y`-coordinates.
pub fn qq_table_y(flavor: &HeckeFlavor, r: usize, i: &ResidueTuple) -> RatFunc {
    let ring = YRing {
        field: flavor.field(),
        n: i.n(),
    };
    let (yr, ys) = (ring.y(r), ring.y(r + 1));
    let d = i.get(r) - i.get(r + 1);
    match (flavor.q(), residue_gap(i, r)) {
        (None, Gap::Equal) => ring.int(1).sub(&ys.sub(&yr).pow(2)),
        (None, Gap::PlusOne) => ring.div(
            &ring.int(2).add(&yr).sub(&ys),
            &ring.int(1).add(&yr).sub(&ys).pow(2),
        ),
        (None, Gap::MinusOne) => ring.div(
            &ring.int(2).add(&ys).sub(&yr),
            &ring.int(1).add(&ys).sub(&yr).pow(2),
        ),
        (None, Gap::PlusOneE2) => ring.div(&ring.int(1), &ring.int(1).add(&ys).sub(&yr).pow(2)),
        (None, Gap::Generic) => ring
            .int(1)
            .sub(&ring.div(&ring.int(1), &yr.sub(&ys).add(&ring.int(d)).pow(2))),
        (Some(q), Gap::Equal) => {
            one_minus_q_plus(&ring, q, r + 1, r).mul(&one_minus_q_plus(&ring, q, r, r + 1))
        }
        (Some(q), Gap::PlusOne) => {
            let q2 = q * q;
            ring.div(
                &one_minus_q_plus(&ring, &q2, r, r + 1).scale(q),
                &one_minus_q_plus(&ring, q, r, r + 1).pow(2),
            )
        }
        (Some(q), Gap::MinusOne) => {
            let q2 = q * q;
            ring.div(
                &one_minus_q_plus(&ring, &q2, r + 1, r).scale(q),
                &one_minus_q_plus(&ring, q, r + 1, r).pow(2),
            )
        }
        (Some(q), Gap::PlusOneE2) => ring.div(
            &ring.int(1),
            &one_minus_q_plus(&ring, q, r, r + 1).mul(&one_minus_q_plus(&ring, q, r + 1, r)),
        ),
        (Some(q), Gap::Generic) => {
            let one_q = ring.field.one() - q.clone();
            let a = ring.int(1).sub(&yr);
            let b = ring.int(1).sub(&ys);
            let num = b
                .mul(&a)
                .scale(&(&(&one_q * &one_q) * &flavor.q_pow(i.get(r) + i.get(r + 1))));
            let den = b
                .scale(&flavor.q_pow(i.get(r + 1)))
                .sub(&a.scale(&flavor.q_pow(i.get(r))))
                .pow(2);
            ring.c(q).sub(&ring.div(&num, &den))
        }
    }
}

/// Tabulated `theta_r^2 eps(i)` coefficient.
pub fn theta_sq_table_y(flavor: &HeckeFlavor, r: usize, i: &ResidueTuple) -> RatFunc {
    let ring = YRing {
        field: flavor.field(),
        n: i.n(),
    };
    let (yr, ys) = (ring.y(r), ring.y(r + 1));
    match residue_gap(i, r) {
        Gap::Equal => ring.div(&ring.int(-1), &ys.sub(&yr).pow(2)),
        Gap::PlusOne => yr.sub(&ys),
        Gap::MinusOne => ys.sub(&yr),
        Gap::PlusOneE2 => yr.sub(&ys).mul(&ys.sub(&yr)),
        Gap::Generic => ring.int(1),
    }
}

/// Tabulated `psi_r^2 eps(i)` coefficient.
pub fn psi_sq_table_y(flavor: &HeckeFlavor, r: usize, i: &ResidueTuple) -> RatFunc {
    let ring = YRing {
        field: flavor.field(),
        n: i.n(),
    };
    let (yr, ys) = (ring.y(r), ring.y(r + 1));
    match residue_gap(i, r) {
        Gap::Equal => ring.int(0),
        Gap::PlusOne => yr.sub(&ys),
        Gap::MinusOne => ys.sub(&yr),
        Gap::PlusOneE2 => yr.sub(&ys).pow(2).neg(),
        Gap::Generic => ring.int(1),
    }
}

/// Branch label and tabulated value of the braid defect
/// `(psi_r psi_{r+1} psi_r - psi_{r+1} psi_r psi_{r+1}) eps(i)`.
pub fn braid_defect_table_y(
    flavor: &HeckeFlavor,
    r: usize,
    i: &ResidueTuple,
) -> (&'static str, RatFunc) {
    let ring = YRing {
        field: flavor.field(),
        n: i.n(),
    };
    if i.get(r + 2) != i.get(r) {
        return ("other", ring.int(0));
    }
    match residue_gap(i, r) {
        Gap::PlusOne => ("plus-one", ring.int(-1)),
        Gap::MinusOne => ("minus-one", ring.int(1)),
        Gap::PlusOneE2 => (
            "plus-one-e2",
            ring.y(r)
                .add(&ring.y(r + 2))
                .sub(&ring.y(r + 1).scale(&ring.field.from_int(2))),
        ),
        _ => ("other", ring.int(0)),
    }
}

/// `Q_r(i)` in `X`-coordinates.
pub fn q_factor(flavor: &HeckeFlavor, r: usize, i: &ResidueTuple) -> RatFunc {
    y_to_x(flavor, i, &q_table_y(flavor, r, i))
}

pub fn q_factor_inv(flavor: &HeckeFlavor, r: usize, i: &ResidueTuple) -> Result<RatFunc> {
    q_factor(flavor, r, i).inv()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyrat::MultiPoly;
    use crate::residues::orbit_of;

    fn deg(p: u64) -> HeckeFlavor {
        HeckeFlavor::degenerate(FieldSpec::prime(p).unwrap())
    }

    fn nd_rat(q: i64) -> HeckeFlavor {
        HeckeFlavor::nondegenerate(FieldSpec::Rationals.from_int(q)).unwrap()
    }

    fn rf(s: &str, flavor: &HeckeFlavor, n: usize) -> RatFunc {
        RatFunc::parse(s, flavor.field(), n).unwrap()
    }

    #[test]
    fn generator_products() {
        let fl = deg(5);
        let ctx = LusztigContext::trivial(fl.clone(), 2);
        // T1 X2 = X1 T1 + 1
        let lhs = LusztigElem::t(&ctx, 1)
            .mul(&LusztigElem::x(&ctx, 2))
            .unwrap();
        let rhs = LusztigElem::x(&ctx, 1)
            .mul(&LusztigElem::t(&ctx, 1))
            .unwrap()
            .add(&LusztigElem::one(&ctx));
        assert_eq!(lhs, rhs);
        let t2 = LusztigElem::t(&ctx, 1)
            .mul(&LusztigElem::t(&ctx, 1))
            .unwrap();
        assert_eq!(t2, LusztigElem::one(&ctx));

        let fl = nd_rat(2);
        let ctx = LusztigContext::trivial(fl.clone(), 2);
        let t = LusztigElem::t(&ctx, 1);
        let txt = t.mul(&LusztigElem::x(&ctx, 1)).unwrap().mul(&t).unwrap();
        assert_eq!(
            txt,
            LusztigElem::x(&ctx, 2).scale(&FieldSpec::Rationals.from_int(2))
        );
    }

    #[test]
    fn kappa_square_example() {
        let fl = HeckeFlavor::degenerate(FieldSpec::Rationals);
        let ctx = LusztigContext::trivial(fl.clone(), 2);
        let k = LusztigElem::kappa(&ctx, 1);
        let expected = LusztigElem::coeff(&ctx, &rf("1 - 1/(X1 - X2)^2", &fl, 2));
        assert_eq!(k.mul(&k).unwrap(), expected);
        let f = rf("X1^2", &fl, 2);
        let lhs = k.mul(&LusztigElem::coeff(&ctx, &f)).unwrap();
        let rhs = LusztigElem::coeff(&ctx, &f.swap_vars(1)).mul(&k).unwrap();
        assert_eq!(lhs, rhs);
        assert_eq!(
            LusztigElem::kappa_w(&ctx, &Perm::identity(2)),
            LusztigElem::one(&ctx)
        );
    }

    #[test]
    fn y_elements() {
        let fl = deg(5);
        let i0 = ResidueTuple::new(5, vec![0]).unwrap();
        let ctx = LusztigContext::new(fl.clone(), orbit_of(&i0)).unwrap();
        assert_eq!(LusztigElem::y(&ctx, 1), LusztigElem::x(&ctx, 1));
        let fl = nd_rat(2);
        let i1 = ResidueTuple::new(0, vec![1]).unwrap();
        let ctx = LusztigContext::new(fl.clone(), orbit_of(&i1)).unwrap();
        assert_eq!(
            LusztigElem::y(&ctx, 1),
            LusztigElem::coeff(&ctx, &rf("1 - X1/2", &fl, 1))
        );
        let i = ResidueTuple::new(0, vec![0, 1]).unwrap();
        let ctx = LusztigContext::new(fl, orbit_of(&i)).unwrap();
        let prod = LusztigElem::y(&ctx, 2)
            .mul(&LusztigElem::y_inv(&ctx, 2))
            .unwrap();
        assert_eq!(prod, LusztigElem::one(&ctx));
    }

    #[test]
    fn q_factor_examples() {
        let fl = deg(5);
        let eq = ResidueTuple::new(5, vec![2, 2]).unwrap();
        assert_eq!(q_factor(&fl, 1, &eq), rf("1 - X1 + X2", &fl, 2));
        let plus = ResidueTuple::new(5, vec![1, 0]).unwrap();
        assert!(q_factor(&fl, 1, &plus).is_one());
        // non-degenerate equal case, checked by substituting by hand
        let fl = nd_rat(3);
        let eq = ResidueTuple::new(0, vec![2, 2]).unwrap();
        assert_eq!(q_factor(&fl, 1, &eq), rf("(X1 - 3*X2)/9", &fl, 2));
    }

    #[test]
    fn coordinates_round_trip() {
        let fl = deg(5);
        let i = ResidueTuple::new(5, vec![0, 1]).unwrap();
        let ctx = LusztigContext::new(fl.clone(), orbit_of(&i)).unwrap();
        let x1 = LusztigElem::x(&ctx, 1);
        let ys = x1.to_y_coordinates();
        let key = (i.clone(), Perm::identity(2));
        assert_eq!(ys[&key], rf("X1", &fl, 2));
        let j = ResidueTuple::new(5, vec![1, 0]).unwrap();
        assert_eq!(ys[&(j, Perm::identity(2))], rf("X1 + 1", &fl, 2));
        let a = LusztigElem::term(&ctx, &i, rf("1/(X1 - X2)", &fl, 2), Perm::identity(2)).unwrap();
        assert_eq!(
            LusztigElem::from_y_coordinates(&ctx, &a.to_y_coordinates()).unwrap(),
            a
        );
        let y1 = LusztigElem::y(&ctx, 1);
        assert!(y1
            .to_y_coordinates()
            .values()
            .all(|f| *f == rf("X1", &fl, 2)));
    }

    #[test]
    fn semirationalization_examples() {
        let fl = deg(5);
        let i = ResidueTuple::new(5, vec![0, 0]).unwrap();
        let ctx = LusztigContext::new(fl.clone(), orbit_of(&i)).unwrap();
        let bad =
            LusztigElem::term(&ctx, &i, rf("1/(X1 - X2)", &fl, 2), Perm::identity(2)).unwrap();
        assert!(!bad.in_semirationalization());
        assert!(LusztigElem::psi(&ctx, 1).in_semirationalization());
        assert!(LusztigElem::x(&ctx, 2).in_semirationalization());
    }

    #[test]
    fn right_multiplication_routes_agree() {
        let fl = nd_rat(2);
        let i = ResidueTuple::new(0, vec![0, 1, 1]).unwrap();
        let ctx = LusztigContext::new(fl, orbit_of(&i)).unwrap();
        let a = LusztigElem::psi(&ctx, 1)
            .mul(&LusztigElem::x(&ctx, 3))
            .unwrap();
        for r in 1..3 {
            assert_eq!(a.mul(&LusztigElem::t(&ctx, r)).unwrap(), a.mul_right_t(r));
        }
    }

    #[test]
    fn context_mismatch_is_reported() {
        let a = LusztigContext::trivial(deg(5), 2);
        let b = LusztigContext::trivial(deg(3), 2);
        assert_eq!(
            LusztigElem::one(&a).mul(&LusztigElem::one(&b)),
            Err(HeckeError::FlavorMismatch)
        );
        let i = ResidueTuple::new(5, vec![0, 1]).unwrap();
        let c = LusztigContext::new(deg(5), orbit_of(&i)).unwrap();
        assert_eq!(
            LusztigElem::one(&a).mul(&LusztigElem::one(&c)),
            Err(HeckeError::OrbitMismatch)
        );
    }

    #[test]
    fn orthogonal_idempotents() {
        let fl = deg(3);
        let i = ResidueTuple::new(3, vec![0, 1]).unwrap();
        let j = ResidueTuple::new(3, vec![1, 0]).unwrap();
        let ctx = LusztigContext::new(fl, orbit_of(&i)).unwrap();
        let ei = LusztigElem::eps(&ctx, &i).unwrap();
        let ej = LusztigElem::eps(&ctx, &j).unwrap();
        assert!(ei.mul(&ej).unwrap().is_zero());
        assert_eq!(ei.mul(&ei).unwrap(), ei);
        let one = LusztigElem::one(&ctx);
        assert_eq!(one.mul(&ei).unwrap(), ei);
    }

    #[test]
    fn multivariate_laurent_coefficients() {
        let fl = nd_rat(2);
        let ctx = LusztigContext::trivial(fl.clone(), 2);
        let x = LusztigElem::x(&ctx, 1)
            .mul(&LusztigElem::x_inv(&ctx, 1))
            .unwrap();
        assert_eq!(x, LusztigElem::one(&ctx));
        let p = MultiPoly::parse("X1^-1*X2", fl.field(), 2).unwrap();
        assert_eq!(RatFunc::from_poly(p), rf("X2/X1", &fl, 2));
    }
}
