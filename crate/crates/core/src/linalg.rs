//! Sparse exact vectors and incremental row echelon forms.

use std::collections::BTreeMap;

use crate::scalars::{FieldElem, FieldSpec};

pub type SparseVec = BTreeMap<usize, FieldElem>;

pub fn axpy(acc: &mut SparseVec, c: &FieldElem, v: &SparseVec) {
    if c.is_zero() {
        return;
    }
    for (k, x) in v {
        let t = c * x;
        match acc.get_mut(k) {
            Some(y) => {
                let s = &*y + &t;
                if s.is_zero() {
                    acc.remove(k);
                } else {
                    *y = s;
                }
            }
            None => {
                acc.insert(*k, t);
            }
        }
    }
}

pub fn scale_vec(v: &SparseVec, c: &FieldElem) -> SparseVec {
    if c.is_zero() {
        return SparseVec::new();
    }
    v.iter().map(|(k, x)| (*k, x * c)).collect()
}

/// Row echelon basis keyed by pivot; optionally tracks each row as a
/// combination of the inserted vectors.
#[derive(Clone, Debug)]
pub struct Echelon {
    field: FieldSpec,
    rows: BTreeMap<usize, (SparseVec, SparseVec)>,
    inserted: usize,
}

impl Echelon {
    pub fn new(field: FieldSpec) -> Self {
        Self {
            field,
            rows: BTreeMap::new(),
            inserted: 0,
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduces `v`; returns the remainder and the combination of inserted
    /// vectors subtracted from it.
    fn reduce_tracked(&self, v: &SparseVec) -> (SparseVec, SparseVec) {
        let mut rem = v.clone();
        let mut combo = SparseVec::new();
        loop {
            let pivot = rem.keys().find(|k| self.rows.contains_key(k)).copied();
            let Some(p) = pivot else { break };
            let (row, rc) = &self.rows[&p];
            let c = -&rem[&p];
            axpy(&mut rem, &c, row);
            axpy(&mut combo, &c, rc);
        }
        (rem, combo)
    }

    pub fn reduce(&self, v: &SparseVec) -> SparseVec {
        self.reduce_tracked(v).0
    }

    pub fn contains(&self, v: &SparseVec) -> bool {
        self.reduce(v).is_empty()
    }

    /// Inserts `v`. On dependence returns `Some(c)` with
    /// `v = sum_j c_j v_j` over previously inserted vectors.
    pub fn insert(&mut self, v: &SparseVec) -> Option<SparseVec> {
        let idx = self.inserted;
        self.inserted += 1;
        let (rem, combo) = self.reduce_tracked(v);
        if rem.is_empty() {
            return Some(combo.into_iter().map(|(k, c)| (k, -c)).collect());
        }
        let (&p, lead) = rem.iter().next().unwrap();
        let inv = lead.inv().unwrap();
        let mut combo = combo;
        combo.insert(idx, self.field.one());
        self.rows
            .insert(p, (scale_vec(&rem, &inv), scale_vec(&combo, &inv)));
        None
    }
}
