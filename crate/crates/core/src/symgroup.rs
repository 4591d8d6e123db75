//! Symmetric group combinatorics: composition, length, canonical reduced
//! words, descents and the place-permutation action on tuples.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{HeckeError, Result};

/// Largest `n` enumerated by default.
pub const DEFAULT_GROUP_BOUND: usize = 6;

/// A permutation of `{1..n}` stored 0-based: `images[s-1] = w(s) - 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Perm {
    images: Vec<usize>,
}

impl Perm {
    pub fn identity(n: usize) -> Self {
        Self {
            images: (0..n).collect(),
        }
    }

    /// The simple transposition `s_r = (r, r+1)`, with `1 <= r < n`.
    pub fn simple(n: usize, r: usize) -> Self {
        assert!(
            r >= 1 && r < n,
            "simple transposition s_{r} out of range for n = {n}"
        );
        let mut images: Vec<usize> = (0..n).collect();
        images.swap(r - 1, r);
        Self { images }
    }

    /// From one-line notation with values `1..=n`.
    pub fn from_one_line(values: &[usize]) -> Result<Self> {
        let n = values.len();
        let mut seen = vec![false; n];
        for &v in values {
            if v == 0 || v > n || seen[v - 1] {
                return Err(HeckeError::InvalidInput(format!(
                    "{values:?} is not a permutation"
                )));
            }
            seen[v - 1] = true;
        }
        Ok(Self {
            images: values.iter().map(|v| v - 1).collect(),
        })
    }

    /// Product `s_{r_1} s_{r_2} ... s_{r_m}` of simple transpositions.
    pub fn from_word(n: usize, word: &[usize]) -> Self {
        word.iter().fold(Self::identity(n), |acc, &r| {
            acc.compose(&Self::simple(n, r))
        })
    }

    pub fn n(&self) -> usize {
        self.images.len()
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(k, &v)| k == v)
    }

    /// `w(s)` for `1 <= s <= n`.
    pub fn apply(&self, s: usize) -> usize {
        self.images[s - 1] + 1
    }

    pub fn one_line(&self) -> Vec<usize> {
        self.images.iter().map(|v| v + 1).collect()
    }

    /// 0-based image table.
    pub fn images(&self) -> &[usize] {
        &self.images
    }

    /// `self ∘ other`, i.e. apply `other` first.
    pub fn compose(&self, other: &Perm) -> Perm {
        assert_eq!(
            self.n(),
            other.n(),
            "composing permutations of different degree"
        );
        Perm {
            images: other.images.iter().map(|&k| self.images[k]).collect(),
        }
    }

    pub fn inverse(&self) -> Perm {
        let mut images = vec![0; self.n()];
        for (k, &v) in self.images.iter().enumerate() {
            images[v] = k;
        }
        Perm { images }
    }

    /// Number of inversions.
    pub fn length(&self) -> usize {
        let n = self.n();
        let mut count = 0;
        for a in 0..n {
            for b in a + 1..n {
                if self.images[a] > self.images[b] {
                    count += 1;
                }
            }
        }
        count
    }

    /// Right descent: `l(w s_r) < l(w)`, i.e. `w(r) > w(r+1)`.
    pub fn descent(&self, r: usize) -> bool {
        self.images[r - 1] > self.images[r]
    }

    /// Left descent: `l(s_r w) < l(w)`, i.e. `w^{-1}(r) > w^{-1}(r+1)`.
    pub fn left_descent(&self, r: usize) -> bool {
        let pos_r = self.images.iter().position(|&v| v == r - 1).unwrap();
        let pos_r1 = self.images.iter().position(|&v| v == r).unwrap();
        pos_r > pos_r1
    }

    /// `s_r ∘ self`.
    pub fn left_mul_simple(&self, r: usize) -> Perm {
        let images = self
            .images
            .iter()
            .map(|&v| {
                if v == r - 1 {
                    r
                } else if v == r {
                    r - 1
                } else {
                    v
                }
            })
            .collect();
        Perm { images }
    }

    /// `self ∘ s_r`.
    pub fn right_mul_simple(&self, r: usize) -> Perm {
        let mut images = self.images.clone();
        images.swap(r - 1, r);
        Perm { images }
    }

    /// Lexicographically smallest reduced word. Greedy on the smallest left
    /// descent: every reduced word of `w` starts with a left descent, and any
    /// left descent starts some reduced word.
    pub fn reduced_word(&self) -> Vec<usize> {
        let mut word = Vec::with_capacity(self.length());
        let mut w = self.clone();
        while !w.is_identity() {
            let r = (1..w.n())
                .find(|&r| w.left_descent(r))
                .expect("non-identity has a descent");
            word.push(r);
            w = w.left_mul_simple(r);
        }
        word
    }

    /// Place permutation `w(i)_s = i_{w^{-1}(s)}`.
    pub fn act_on_tuple<T: Clone>(&self, tuple: &[T]) -> Vec<T> {
        assert_eq!(
            tuple.len(),
            self.n(),
            "tuple length differs from permutation degree"
        );
        let mut out = tuple.to_vec();
        for (k, &v) in self.images.iter().enumerate() {
            out[v] = tuple[k].clone();
        }
        out
    }
}

impl TryFrom<Vec<usize>> for Perm {
    type Error = HeckeError;
    fn try_from(values: Vec<usize>) -> Result<Self> {
        Perm::from_one_line(&values)
    }
}

impl From<Perm> for Vec<usize> {
    fn from(p: Perm) -> Vec<usize> {
        p.one_line()
    }
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.one_line().iter().map(|v| v.to_string()).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

impl FromStr for Perm {
    type Err = HeckeError;
    fn from_str(s: &str) -> Result<Self> {
        let inner = s
            .trim()
            .strip_prefix('[')
            .and_then(|t| t.strip_suffix(']'))
            .ok_or_else(|| HeckeError::Parse(format!("expected `[..]`, got `{s}`")))?;
        let values = inner
            .split(',')
            .filter(|t| !t.trim().is_empty())
            .map(|t| {
                t.trim()
                    .parse::<usize>()
                    .map_err(|e| HeckeError::Parse(e.to_string()))
            })
            .collect::<Result<Vec<_>>>()?;
        Perm::from_one_line(&values)
    }
}

/// `s1 s2 s1`; the identity prints as the empty string.
pub fn format_word(word: &[usize]) -> String {
    word.iter()
        .map(|r| format!("s{r}"))
        .collect::<Vec<_>>()
        .join(" ")
}

pub fn parse_word(s: &str) -> Result<Vec<usize>> {
    s.split_whitespace()
        .map(|tok| {
            tok.strip_prefix('s')
                .and_then(|d| d.parse::<usize>().ok())
                .filter(|&r| r >= 1)
                .ok_or_else(|| HeckeError::Parse(format!("bad generator `{tok}`")))
        })
        .collect()
}

/// All of `S_n` in lexicographic order of one-line notation.
pub fn enumerate_group(n: usize) -> Result<Vec<Perm>> {
    enumerate_group_bounded(n, DEFAULT_GROUP_BOUND)
}

pub fn enumerate_group_bounded(n: usize, bound: usize) -> Result<Vec<Perm>> {
    if n > bound {
        return Err(HeckeError::BoundExceeded(format!(
            "S_{n} exceeds the enumeration bound {bound}"
        )));
    }
    let mut out = Vec::new();
    let mut current: Vec<usize> = (0..n).collect();
    loop {
        out.push(Perm {
            images: current.clone(),
        });
        // next lexicographic permutation
        let Some(k) = (0..n.saturating_sub(1))
            .rev()
            .find(|&k| current[k] < current[k + 1])
        else {
            break;
        };
        let l = (k + 1..n).rev().find(|&l| current[k] < current[l]).unwrap();
        current.swap(k, l);
        current[k + 1..].reverse();
    }
    Ok(out)
}

pub fn longest_element(n: usize) -> Perm {
    Perm {
        images: (0..n).rev().collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn basic_lengths() {
        assert_eq!(Perm::identity(4).length(), 0);
        assert_eq!(longest_element(3).length(), 3);
        let s1 = Perm::simple(3, 1);
        assert!(s1.compose(&s1).is_identity());
    }

    #[test]
    fn reduced_words() {
        assert!(Perm::identity(3).reduced_word().is_empty());
        assert_eq!(Perm::simple(3, 1).reduced_word(), vec![1]);
        assert_eq!(longest_element(3).reduced_word(), vec![1, 2, 1]);
    }

    /// Oracle: enumerate every word of length l(w) and keep those that
    /// multiply to w; the minimum must match the greedy choice.
    #[test]
    fn reduced_word_is_lexicographic_minimum() {
        for n in 1..=4 {
            for w in enumerate_group(n).unwrap() {
                let len = w.length();
                let mut best: Option<Vec<usize>> = None;
                let total = (n.max(2) - 1).pow(len as u32);
                for code in 0..total {
                    let mut word = Vec::with_capacity(len);
                    let mut c = code;
                    for _ in 0..len {
                        word.push(c % (n - 1).max(1) + 1);
                        c /= (n - 1).max(1);
                    }
                    word.reverse();
                    if (n >= 2 && Perm::from_word(n, &word) == w || len == 0)
                        && best.as_ref().is_none_or(|b| word < *b)
                    {
                        best = Some(word);
                    }
                }
                assert_eq!(w.reduced_word(), best.unwrap_or_default(), "w = {w}");
            }
        }
    }

    #[test]
    fn place_permutation() {
        let s1 = Perm::simple(3, 1);
        assert_eq!(s1.act_on_tuple(&[0, 1, 2]), vec![1, 0, 2]);
        assert_eq!(Perm::identity(3).act_on_tuple(&[5, 6, 7]), vec![5, 6, 7]);
        // 1 -> 2 -> 3 -> 1: w(i)_s = i_{w^{-1}(s)} gives (c, a, b)
        let cycle = Perm::from_one_line(&[2, 3, 1]).unwrap();
        assert_eq!(cycle.act_on_tuple(&['a', 'b', 'c']), vec!['c', 'a', 'b']);
    }

    #[test]
    fn enumeration_and_descents() {
        assert_eq!(enumerate_group(3).unwrap().len(), 6);
        assert_eq!(enumerate_group(5).unwrap().len(), 120);
        assert!(matches!(
            enumerate_group(7),
            Err(HeckeError::BoundExceeded(_))
        ));
        assert!(Perm::simple(3, 1).descent(1));
        assert!(!Perm::identity(3).descent(1));
        assert!(!Perm::identity(3).descent(2));
    }

    #[test]
    fn every_element_reconstructs_from_its_word() {
        for n in 1..=5 {
            let all = enumerate_group(n).unwrap();
            let mut sorted = all.clone();
            sorted.dedup();
            assert_eq!(sorted.len(), all.len());
            for w in all {
                let word = w.reduced_word();
                assert_eq!(word.len(), w.length());
                assert_eq!(Perm::from_word(n, &word), w);
            }
        }
    }

    #[test]
    fn serialization_forms() {
        let w: Perm = "[2,1,3]".parse().unwrap();
        assert_eq!(w.to_string(), "[2,1,3]");
        assert_eq!(format_word(&[1, 2, 1]), "s1 s2 s1");
        assert_eq!(parse_word("s1 s2 s1").unwrap(), vec![1, 2, 1]);
        assert!("[1,1]".parse::<Perm>().is_err());
        assert_eq!(serde_json::to_string(&w).unwrap(), "[2,1,3]");
    }

    fn perm_strategy(n: usize) -> impl Strategy<Value = Perm> {
        Just((0..n).collect::<Vec<usize>>())
            .prop_shuffle()
            .prop_map(|images| Perm { images })
    }

    proptest! {
        #[test]
        fn length_subadditive(v in perm_strategy(5), w in perm_strategy(5)) {
            let vw = v.compose(&w);
            prop_assert!(vw.length() <= v.length() + w.length());
            let mut word = v.reduced_word();
            word.extend(w.reduced_word());
            let concatenated_is_reduced = Perm::from_word(5, &word).length() == word.len();
            prop_assert_eq!(vw.length() == v.length() + w.length(), concatenated_is_reduced);
        }

        #[test]
        fn tuple_action_is_left_action(v in perm_strategy(4), w in perm_strategy(4),
                                       i in proptest::collection::vec(-3i64..3, 4)) {
            let lhs = v.act_on_tuple(&w.act_on_tuple(&i));
            let rhs = v.compose(&w).act_on_tuple(&i);
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn inverse_and_descents(w in perm_strategy(5), r in 1usize..5) {
            prop_assert!(w.compose(&w.inverse()).is_identity());
            prop_assert_eq!(w.descent(r), w.right_mul_simple(r).length() < w.length());
            prop_assert_eq!(w.left_descent(r), w.left_mul_simple(r).length() < w.length());
            prop_assert_eq!(w.left_mul_simple(r), Perm::simple(5, r).compose(&w));
        }
    }
}
