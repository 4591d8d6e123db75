//! Residue tuples in `I^n`, `I = Z/eZ` (or `Z` when `e = 0`), and their
//! `S_n`-orbits under place permutation.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{HeckeError, Result};
use crate::symgroup::Perm;

/// Entries allowed for `e = 0` tuples.
pub const DEFAULT_WINDOW: (i64, i64) = (-10, 10);

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ResidueTuple {
    e: u64,
    entries: Vec<i64>,
}

impl ResidueTuple {
    pub fn new(e: u64, entries: Vec<i64>) -> Result<Self> {
        Self::with_window(e, entries, DEFAULT_WINDOW)
    }

    pub fn with_window(e: u64, entries: Vec<i64>, window: (i64, i64)) -> Result<Self> {
        if e == 0 {
            if let Some(x) = entries.iter().find(|&&x| x < window.0 || x > window.1) {
                return Err(HeckeError::InvalidInput(format!(
                    "residue {x} outside the window {}..{}",
                    window.0, window.1
                )));
            }
            return Ok(Self { e, entries });
        }
        let m = e as i64;
        Ok(Self {
            e,
            entries: entries.into_iter().map(|x| x.rem_euclid(m)).collect(),
        })
    }

    pub fn e(&self) -> u64 {
        self.e
    }

    pub fn n(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[i64] {
        &self.entries
    }

    /// 1-based entry `i_r`.
    pub fn get(&self, r: usize) -> i64 {
        self.entries[r - 1]
    }

    /// Place permutation `w(i)_s = i_{w^{-1}(s)}`.
    pub fn act(&self, w: &Perm) -> ResidueTuple {
        Self {
            e: self.e,
            entries: w.act_on_tuple(&self.entries),
        }
    }

    /// Swap entries `r` and `r+1`.
    pub fn swap(&self, r: usize) -> ResidueTuple {
        let mut entries = self.entries.clone();
        entries.swap(r - 1, r);
        Self { e: self.e, entries }
    }

    /// `i_r - i_{r+1}` reduced into `0..e` (or exact when `e = 0`).
    pub fn difference(&self, r: usize) -> i64 {
        let d = self.get(r) - self.get(r + 1);
        if self.e == 0 {
            d
        } else {
            d.rem_euclid(self.e as i64)
        }
    }

    pub fn parse(s: &str, e: u64) -> Result<Self> {
        let entries = s
            .trim()
            .trim_start_matches('(')
            .trim_end_matches(')')
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<i64>()
                    .map_err(|_| HeckeError::Parse(format!("bad residue tuple `{s}`")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(e, entries)
    }
}

impl fmt::Display for ResidueTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.entries.iter().map(|x| x.to_string()).collect();
        write!(f, "{}", parts.join(","))
    }
}

impl FromStr for ResidueTuple {
    type Err = HeckeError;
    /// Parses with `e = 0`; use [`ResidueTuple::parse`] to reduce mod `e`.
    fn from_str(s: &str) -> Result<Self> {
        Self::parse(s, 0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Orbit {
    e: u64,
    n: usize,
    members: Vec<ResidueTuple>,
}

impl Orbit {
    pub fn e(&self) -> u64 {
        self.e
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn members(&self) -> &[ResidueTuple] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn index_of(&self, i: &ResidueTuple) -> Option<usize> {
        self.members.binary_search(i).ok()
    }

    pub fn contains(&self, i: &ResidueTuple) -> bool {
        self.index_of(i).is_some()
    }

    /// Sorted content multiset shared by all members.
    pub fn content(&self) -> Vec<i64> {
        let mut c = self.members[0].entries.clone();
        c.sort();
        c
    }
}

impl fmt::Display for Orbit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.members.iter().map(|m| format!("({m})")).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

/// All distinct rearrangements of `i`, lexicographically sorted.
pub fn orbit_of(i: &ResidueTuple) -> Orbit {
    let mut cur = i.entries.clone();
    cur.sort();
    let mut members = vec![ResidueTuple {
        e: i.e,
        entries: cur.clone(),
    }];
    while next_permutation(&mut cur) {
        members.push(ResidueTuple {
            e: i.e,
            entries: cur.clone(),
        });
    }
    Orbit {
        e: i.e,
        n: i.n(),
        members,
    }
}

fn next_permutation(v: &mut [i64]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut k = v.len() - 1;
    while k > 0 && v[k - 1] >= v[k] {
        k -= 1;
    }
    if k == 0 {
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[k - 1] {
        j -= 1;
    }
    v.swap(k - 1, j);
    v[k..].reverse();
    true
}

/// `n! / prod(m_k!)` for the multiplicities of `entries`.
pub fn multinomial(entries: &[i64]) -> u64 {
    let mut sorted = entries.to_vec();
    sorted.sort();
    let mut result: u64 = 1;
    let mut seen = 0u64;
    let mut run = 0u64;
    for (k, x) in sorted.iter().enumerate() {
        if k > 0 && sorted[k - 1] == *x {
            run += 1;
        } else {
            run = 1;
        }
        seen += 1;
        // result * seen / run stays integral at every step
        result = result * seen / run;
    }
    result
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Gap {
    Equal,
    PlusOne,
    MinusOne,
    PlusOneE2,
    Generic,
}

impl Gap {
    pub fn label(&self) -> &'static str {
        match self {
            Gap::Equal => "equal",
            Gap::PlusOne => "plus-one",
            Gap::MinusOne => "minus-one",
            Gap::PlusOneE2 => "plus-one-e2",
            Gap::Generic => "generic",
        }
    }

    pub const ALL: [Gap; 5] = [
        Gap::Equal,
        Gap::PlusOne,
        Gap::MinusOne,
        Gap::PlusOneE2,
        Gap::Generic,
    ];
}

impl fmt::Display for Gap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Five-way classification of `i_r - i_{r+1}`.
pub fn residue_gap(i: &ResidueTuple, r: usize) -> Gap {
    let d = i.get(r) - i.get(r + 1);
    let e = i.e as i64;
    let m = |x: i64| if e == 0 { x } else { x.rem_euclid(e) };
    if m(d) == 0 {
        Gap::Equal
    } else if e == 2 {
        Gap::PlusOneE2
    } else if m(d) == m(1) {
        Gap::PlusOne
    } else if m(d) == m(-1) {
        Gap::MinusOne
    } else {
        Gap::Generic
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symgroup::enumerate_group;
    use proptest::prelude::*;

    fn t(e: u64, v: &[i64]) -> ResidueTuple {
        ResidueTuple::new(e, v.to_vec()).unwrap()
    }

    #[test]
    fn orbit_examples() {
        let o = orbit_of(&t(3, &[0, 1]));
        assert_eq!(o.members(), &[t(3, &[0, 1]), t(3, &[1, 0])]);
        assert_eq!(orbit_of(&t(3, &[0, 0])).members(), &[t(3, &[0, 0])]);
        let o = orbit_of(&t(2, &[0, 0, 1]));
        assert_eq!(
            o.members(),
            &[t(2, &[0, 0, 1]), t(2, &[0, 1, 0]), t(2, &[1, 0, 0])]
        );
        assert_eq!(multinomial(&[0, 0, 1]), 3);
    }

    #[test]
    fn gap_examples() {
        assert_eq!(residue_gap(&t(0, &[3, 3]), 1), Gap::Equal);
        assert_eq!(residue_gap(&t(5, &[1, 0]), 1), Gap::PlusOne);
        assert_eq!(residue_gap(&t(5, &[0, 2]), 1), Gap::Generic);
        assert_eq!(residue_gap(&t(5, &[0, 1]), 1), Gap::MinusOne);
        assert_eq!(residue_gap(&t(3, &[0, 2]), 1), Gap::PlusOne);
        assert_eq!(residue_gap(&t(2, &[0, 1]), 1), Gap::PlusOneE2);
        assert_eq!(residue_gap(&t(2, &[1, 0]), 1), Gap::PlusOneE2);
        assert_eq!(residue_gap(&t(0, &[0, -1]), 1), Gap::PlusOne);
    }

    #[test]
    fn reduction_and_window() {
        assert_eq!(t(3, &[4, -1]).entries(), &[1, 2]);
        assert!(ResidueTuple::new(0, vec![11]).is_err());
        assert_eq!(
            ResidueTuple::parse("0,1,2", 3).unwrap().to_string(),
            "0,1,2"
        );
    }

    proptest! {
        #[test]
        fn orbit_invariants(e in prop_oneof![Just(0u64), 2u64..6], raw in prop::collection::vec(-3i64..4, 1..5)) {
            let i = t(e, &raw);
            let o = orbit_of(&i);
            prop_assert_eq!(o.len() as u64, multinomial(i.entries()));
            for w in enumerate_group(i.n()).unwrap() {
                let j = i.act(&w);
                prop_assert!(o.contains(&j));
                prop_assert_eq!(orbit_of(&j), o.clone());
            }
            for r in 1..i.n() {
                let g = residue_gap(&i, r);
                let mirrored = residue_gap(&i.swap(r), r);
                let expected = match g {
                    Gap::PlusOne => Gap::MinusOne,
                    Gap::MinusOne => Gap::PlusOne,
                    other => other,
                };
                prop_assert_eq!(mirrored, expected);
            }
        }
    }
}
