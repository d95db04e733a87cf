//! Finite posets of weights, stored together with a fixed increasing
//! enumeration.
//!
//! Labels are kept in enumeration order: index 0 is the smallest
//! enumeration position. Every verification and extraction loop processes
//! labels by descending index, which is guaranteed to visit a maximal
//! remaining element first.

use crate::error::Error;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poset {
    labels: Vec<String>,
    /// leq[i][j] ⟺ labels[i] ≤ labels[j]
    leq: Vec<Vec<bool>>,
}

impl Poset {
    /// Build from labels listed in enumeration order and strict relations
    /// `(i, j)` meaning `labels[i] < labels[j]`. Takes the reflexive
    /// transitive closure and validates that the enumeration is increasing.
    pub fn new(labels: Vec<String>, relations: &[(usize, usize)]) -> Result<Self, Error> {
        let n = labels.len();
        {
            let mut seen = std::collections::BTreeSet::new();
            for l in &labels {
                if !seen.insert(l.clone()) {
                    return Err(Error::InvalidInput(format!("duplicate poset label {l:?}")));
                }
            }
        }
        let mut leq = vec![vec![false; n]; n];
        for (i, row) in leq.iter_mut().enumerate() {
            row[i] = true;
        }
        for &(i, j) in relations {
            if i >= n || j >= n {
                return Err(Error::InvalidInput("poset relation index out of range".into()));
            }
            leq[i][j] = true;
        }
        for k in 0..n {
            for i in 0..n {
                if !leq[i][k] {
                    continue;
                }
                let row_k = leq[k].clone();
                for (j, &kj) in row_k.iter().enumerate() {
                    if kj {
                        leq[i][j] = true;
                    }
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                if i != j && leq[i][j] && leq[j][i] {
                    return Err(Error::InvalidInput(format!(
                        "poset is not antisymmetric: {} and {} are comparable both ways",
                        labels[i], labels[j]
                    )));
                }
                if i > j && leq[i][j] {
                    return Err(Error::InvalidInput(format!(
                        "enumeration is not increasing: {} < {} but listed later",
                        labels[i], labels[j]
                    )));
                }
            }
        }
        Ok(Poset { labels, leq })
    }

    pub fn antichain(labels: Vec<String>) -> Self {
        Poset::new(labels, &[]).expect("antichain is always valid")
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn leq(&self, i: usize, j: usize) -> bool {
        self.leq[i][j]
    }

    pub fn less(&self, i: usize, j: usize) -> bool {
        i != j && self.leq[i][j]
    }

    /// Strict relations `(i, j)` with `labels[i] < labels[j]`, transitively
    /// reduced (covering pairs only).
    pub fn covering_relations(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        let mut out = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if !self.less(i, j) {
                    continue;
                }
                let through = (0..n).any(|k| self.less(i, k) && self.less(k, j));
                if !through {
                    out.push((i, j));
                }
            }
        }
        out
    }

    /// The opposite poset. The enumeration is reversed so it is increasing
    /// again for the reversed order.
    pub fn reversed(&self) -> Poset {
        let n = self.len();
        let labels: Vec<String> = self.labels.iter().rev().cloned().collect();
        let mut relations = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if self.less(i, j) {
                    // labels[i] < labels[j] becomes rev: j' < i'
                    relations.push((n - 1 - j, n - 1 - i));
                }
            }
        }
        Poset::new(labels, &relations).expect("reversal preserves validity")
    }

    /// Product poset with componentwise order; the enumeration is the
    /// lexicographic linear extension.
    pub fn product(&self, other: &Poset) -> Poset {
        let mut labels = Vec::new();
        for i in 0..self.len() {
            for j in 0..other.len() {
                labels.push(format!("({},{})", self.labels[i], other.labels[j]));
            }
        }
        let idx = |i: usize, j: usize| i * other.len() + j;
        let mut relations = Vec::new();
        for i1 in 0..self.len() {
            for j1 in 0..other.len() {
                for i2 in 0..self.len() {
                    for j2 in 0..other.len() {
                        if self.leq(i1, i2) && other.leq(j1, j2) && (i1, j1) != (i2, j2) {
                            relations.push((idx(i1, j1), idx(i2, j2)));
                        }
                    }
                }
            }
        }
        Poset::new(labels, &relations).expect("product preserves validity")
    }
}
