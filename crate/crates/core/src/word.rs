//! Words in the generators `T_r`, `X_r`, `X_r^{-1}`, `eps(i)`, polynomial
//! scalars and local inverses `f^{-1} eps(i)`.

use std::fmt;
use std::sync::Arc;

use crate::error::{HeckeError, Result};
use crate::lusztig::{LusztigContext, LusztigElem};
use crate::polyrat::{MultiPoly, RatFunc};
use crate::residues::ResidueTuple;
use crate::scalars::HeckeFlavor;

#[derive(Clone, Debug, PartialEq)]
pub enum Atom {
    T(usize),
    X(usize),
    XInv(usize),
    Eps(ResidueTuple),
    Coeff(MultiPoly),
    LocalInv(MultiPoly, ResidueTuple),
}

#[derive(Clone, Debug, PartialEq)]
pub struct GeneratorWord {
    n: usize,
    atoms: Vec<Atom>,
}

impl GeneratorWord {
    /// Validates indices, flavor restrictions and local-inverse witnesses.
    pub fn new(flavor: &HeckeFlavor, n: usize, atoms: Vec<Atom>) -> Result<Self> {
        for a in &atoms {
            match a {
                Atom::T(r) if *r == 0 || *r >= n => {
                    return Err(HeckeError::InvalidInput(format!("T{r} needs 1 <= r < {n}")))
                }
                Atom::X(r) if *r == 0 || *r > n => {
                    return Err(HeckeError::InvalidInput(format!(
                        "X{r} needs 1 <= r <= {n}"
                    )))
                }
                Atom::XInv(r) => {
                    if flavor.is_degenerate() {
                        return Err(HeckeError::InvalidFlavor(
                            "X^-1 needs the nondegenerate flavor".into(),
                        ));
                    }
                    if *r == 0 || *r > n {
                        return Err(HeckeError::InvalidInput(format!(
                            "X{r}^-1 needs 1 <= r <= {n}"
                        )));
                    }
                }
                Atom::Eps(i) if i.n() != n || i.e() != flavor.e() => {
                    return Err(HeckeError::InvalidInput(format!(
                        "e({i}) is not a tuple in I^{n}"
                    )))
                }
                Atom::Coeff(p)
                    if p.nvars() != n || p.has_negative_exponents() && flavor.is_degenerate() =>
                {
                    return Err(HeckeError::InvalidInput(format!("bad scalar {p}")))
                }
                Atom::LocalInv(p, i) => {
                    if i.n() != n || p.nvars() != n {
                        return Err(HeckeError::InvalidInput(format!(
                            "bad local inverse {p} at ({i})"
                        )));
                    }
                    let v = RatFunc::from_poly(p.clone()).eval_at_residues(i.entries(), flavor)?;
                    if v.is_zero() {
                        return Err(HeckeError::PoleAtResidue(format!("{p} vanishes at ({i})")));
                    }
                }
                _ => {}
            }
        }
        Ok(Self { n, atoms })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    /// Parses space- or `*`-separated atoms: `T1`, `X2`, `X2^-1`, `X1^3`,
    /// `e(0,1)`, `{X1-X2}`, `inv{X1-X2}@(0,1)`.
    pub fn parse(s: &str, flavor: &HeckeFlavor, n: usize) -> Result<Self> {
        let field = flavor.field();
        let mut atoms = Vec::new();
        for tok in tokenize(s)? {
            let bad = || HeckeError::Parse(format!("bad word atom `{tok}`"));
            if let Some(body) = tok.strip_prefix("inv{") {
                let (poly, at) = body.split_once("}@").ok_or_else(bad)?;
                let e = flavor.e();
                atoms.push(Atom::LocalInv(
                    MultiPoly::parse(poly, field, n)?,
                    ResidueTuple::parse(at, e)?,
                ));
            } else if let Some(body) = tok.strip_prefix('{') {
                let poly = body.strip_suffix('}').ok_or_else(bad)?;
                atoms.push(Atom::Coeff(MultiPoly::parse(poly, field, n)?));
            } else if let Some(body) = tok.strip_prefix("e(") {
                let t = body.strip_suffix(')').ok_or_else(bad)?;
                atoms.push(Atom::Eps(ResidueTuple::parse(t, flavor.e())?));
            } else if let Some(body) = tok.strip_prefix('T') {
                atoms.push(Atom::T(body.parse().map_err(|_| bad())?));
            } else if let Some(body) = tok.strip_prefix('X') {
                let (idx, exp) = match body.split_once('^') {
                    Some((a, b)) => (a, b.parse::<i64>().map_err(|_| bad())?),
                    None => (body, 1),
                };
                let r: usize = idx.parse().map_err(|_| bad())?;
                let atom = if exp < 0 { Atom::XInv(r) } else { Atom::X(r) };
                for _ in 0..exp.unsigned_abs() {
                    atoms.push(atom.clone());
                }
            } else {
                return Err(bad());
            }
        }
        Self::new(flavor, n, atoms)
    }

    /// Value in the Lusztig extension; local inverses become `eps(i) / f`.
    pub fn evaluate(&self, ctx: &Arc<LusztigContext>) -> Result<LusztigElem> {
        let mut acc = LusztigElem::one(ctx);
        for a in &self.atoms {
            let g = match a {
                Atom::T(r) => LusztigElem::t(ctx, *r),
                Atom::X(r) => LusztigElem::x(ctx, *r),
                Atom::XInv(r) => LusztigElem::x_inv(ctx, *r),
                Atom::Eps(i) => LusztigElem::eps(ctx, i)?,
                Atom::Coeff(p) => LusztigElem::coeff(ctx, &RatFunc::from_poly(p.clone())),
                Atom::LocalInv(p, i) => {
                    let f = RatFunc::from_poly(p.clone()).inv()?;
                    LusztigElem::eps(ctx, i)?.mul(&LusztigElem::coeff(ctx, &f))?
                }
            };
            acc = acc.mul(&g)?;
        }
        Ok(acc)
    }
}

fn tokenize(s: &str) -> Result<Vec<String>> {
    let mut out = Vec::new();
    let mut cur = String::new();
    let mut depth = 0i32;
    for ch in s.chars() {
        match ch {
            '{' | '(' => depth += 1,
            '}' | ')' => depth -= 1,
            _ => {}
        }
        if depth == 0 && (ch.is_whitespace() || ch == '*') {
            if !cur.is_empty() {
                out.push(std::mem::take(&mut cur));
            }
        } else {
            cur.push(ch);
        }
        if depth < 0 {
            return Err(HeckeError::Parse(format!("unbalanced brackets in `{s}`")));
        }
    }
    if depth != 0 {
        return Err(HeckeError::Parse(format!("unbalanced brackets in `{s}`")));
    }
    if !cur.is_empty() {
        out.push(cur);
    }
    Ok(out)
}

impl fmt::Display for GeneratorWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .atoms
            .iter()
            .map(|a| match a {
                Atom::T(r) => format!("T{r}"),
                Atom::X(r) => format!("X{r}"),
                Atom::XInv(r) => format!("X{r}^-1"),
                Atom::Eps(i) => format!("e({i})"),
                Atom::Coeff(p) => format!("{{{p}}}"),
                Atom::LocalInv(p, i) => format!("inv{{{p}}}@({i})"),
            })
            .collect();
        write!(f, "{}", parts.join(" "))
    }
}
