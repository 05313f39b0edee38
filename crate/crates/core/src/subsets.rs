//! Column index subsets and lexicographic k-subset enumeration.

use crate::error::{CssError, Result};

/// An ordered selection of column indices of an `N x d` matrix.
///
/// Acts as the sampling matrix: selecting `S` from `X` is `X[:, S]`.
/// Multinomial samplers may legitimately repeat columns, which is recorded
/// by `allow_duplicates`; all fixed-cardinality selectors return distinct,
/// strictly increasing indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SubsetSelection {
    indices: Vec<usize>,
    allow_duplicates: bool,
}

impl SubsetSelection {
    /// A duplicate-free selection. Indices are sorted; duplicates or
    /// out-of-range entries are rejected.
    pub fn distinct(mut indices: Vec<usize>, n_cols: usize) -> Result<Self> {
        indices.sort_unstable();
        if indices.windows(2).any(|w| w[0] == w[1]) {
            return Err(CssError::InvalidInput(
                "duplicate index in a distinct selection".into(),
            ));
        }
        Self::check_range(&indices, n_cols)?;
        Ok(SubsetSelection {
            indices,
            allow_duplicates: false,
        })
    }

    /// A selection that may repeat columns (multinomial draws). Indices are
    /// stored sorted; multiplicity is preserved.
    pub fn with_duplicates(mut indices: Vec<usize>, n_cols: usize) -> Result<Self> {
        indices.sort_unstable();
        Self::check_range(&indices, n_cols)?;
        Ok(SubsetSelection {
            indices,
            allow_duplicates: true,
        })
    }

    fn check_range(indices: &[usize], n_cols: usize) -> Result<()> {
        if indices.is_empty() {
            return Err(CssError::InvalidInput("empty selection".into()));
        }
        if let Some(&i) = indices.iter().find(|&&i| i >= n_cols) {
            return Err(CssError::InvalidInput(format!(
                "column index {i} out of range for {n_cols} columns"
            )));
        }
        Ok(())
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn allow_duplicates(&self) -> bool {
        self.allow_duplicates
    }

    /// Distinct indices, in increasing order.
    pub fn distinct_indices(&self) -> Vec<usize> {
        let mut v = self.indices.clone();
        v.dedup();
        v
    }

    pub fn contains(&self, index: usize) -> bool {
        self.indices.binary_search(&index).is_ok()
    }
}

/// Binomial coefficient, saturating at `u64::MAX`.
pub fn binomial(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
        if acc > u64::MAX as u128 {
            return u64::MAX;
        }
    }
    acc as u64
}

/// Iterator over all k-subsets of `{0, .., n-1}` in lexicographic order.
pub struct KSubsets {
    n: usize,
    k: usize,
    current: Option<Vec<usize>>,
}

impl KSubsets {
    pub fn new(n: usize, k: usize) -> Self {
        let current = if k <= n { Some((0..k).collect()) } else { None };
        KSubsets { n, k, current }
    }
}

impl Iterator for KSubsets {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let out = self.current.clone()?;
        // advance to the lexicographic successor
        let cur = self.current.as_mut().unwrap();
        let mut i = self.k;
        loop {
            if i == 0 {
                self.current = None;
                break;
            }
            i -= 1;
            if cur[i] < self.n - self.k + i {
                cur[i] += 1;
                for j in i + 1..self.k {
                    cur[j] = cur[j - 1] + 1;
                }
                break;
            }
        }
        Some(out)
    }
}

/// The subset at a given lexicographic position (inverse of enumeration
/// order). Position must be `< binomial(n, k)`.
pub fn subset_at(n: usize, k: usize, mut position: u64) -> Vec<usize> {
    let mut out = Vec::with_capacity(k);
    let mut next = 0usize;
    for slot in 0..k {
        let remaining = k - slot - 1;
        loop {
            let with_next = binomial(n - next - 1, remaining);
            if position < with_next {
                out.push(next);
                next += 1;
                break;
            }
            position -= with_next;
            next += 1;
        }
    }
    out
}
