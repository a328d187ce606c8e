//! Weak majorization on real vectors.

use crate::error::{Error, Result};

/// Slack absorbed by every prefix-sum comparison.
pub const PREFIX_SLACK: f64 = 1e-12;

/// A vector sorted in descending order.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct SortedVector(Vec<f64>);

impl SortedVector {
    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }
}

pub fn sort_desc(x: &[f64]) -> SortedVector {
    let mut v = x.to_vec();
    v.sort_by(|a, b| b.total_cmp(a));
    SortedVector(v)
}

pub fn prefix_sums(x: &SortedVector) -> Vec<f64> {
    x.0.iter()
        .scan(0.0, |acc, &v| {
            *acc += v;
            Some(*acc)
        })
        .collect()
}

/// First prefix index `k` (0-based) where `x` fails to weakly majorize `y`.
///
/// Each comparison allows `tol + PREFIX_SLACK` of absolute slack.
pub fn first_majorization_failure(x: &[f64], y: &[f64], tol: f64) -> Result<Option<usize>> {
    if x.len() != y.len() {
        return Err(Error::domain(format!(
            "weak majorization needs equal lengths ({} vs {})",
            x.len(),
            y.len()
        )));
    }
    let px = prefix_sums(&sort_desc(x));
    let py = prefix_sums(&sort_desc(y));
    Ok(px
        .iter()
        .zip(&py)
        .position(|(a, b)| *a < *b - tol - PREFIX_SLACK))
}

/// `x` weakly majorizes `y`: every descending prefix sum of `x` dominates that of `y`.
pub fn weakly_majorizes(x: &[f64], y: &[f64]) -> Result<bool> {
    weakly_majorizes_tol(x, y, 0.0)
}

pub fn weakly_majorizes_tol(x: &[f64], y: &[f64], tol: f64) -> Result<bool> {
    Ok(first_majorization_failure(x, y, tol)?.is_none())
}

/// All index subsets of `0..n` with exactly `k` elements, in lexicographic order.
///
/// Used to spell out `max` over subsets of size `k` as one linear inequality per
/// subset. Panics above 20 elements, where the enumeration stops being cheap.
pub fn subsets_of_size(n: usize, k: usize) -> Vec<Vec<usize>> {
    assert!(n <= 20, "subset enumeration limited to 20 elements");
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(idx.clone());
        // rightmost position that can still advance
        let Some(i) = (0..k).rev().find(|&i| idx[i] < i + n - k) else {
            return out;
        };
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// `max` over size-`k` subsets of the subset sum, by explicit enumeration.
pub fn subset_max(values: &[f64], k: usize) -> f64 {
    subsets_of_size(values.len(), k)
        .iter()
        .map(|s| s.iter().map(|&i| values[i]).sum::<f64>())
        .fold(f64::NEG_INFINITY, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sorting() {
        assert_eq!(sort_desc(&[1.0, 3.0, 2.0]).values(), &[3.0, 2.0, 1.0]);
        assert!(sort_desc(&[]).is_empty());
        assert_eq!(sort_desc(&[-5.0, -5.0]).values(), &[-5.0, -5.0]);
    }

    #[test]
    fn prefix_sum_examples() {
        assert_eq!(prefix_sums(&sort_desc(&[3.0, 2.0, 1.0])), vec![3.0, 5.0, 6.0]);
        assert_eq!(prefix_sums(&sort_desc(&[0.0])), vec![0.0]);
        assert_eq!(prefix_sums(&sort_desc(&[5.0, -1.0])), vec![5.0, 4.0]);
    }

    #[test]
    fn majorization_examples() {
        assert!(weakly_majorizes(&[3.0, 2.0, 1.0], &[3.0, 2.0, 1.0]).unwrap());
        assert!(weakly_majorizes(&[4.0, 2.0], &[3.0, 3.0]).unwrap());
        assert!(!weakly_majorizes(&[3.0, 3.0], &[4.0, 1.0]).unwrap());
        assert_eq!(first_majorization_failure(&[3.0, 3.0], &[4.0, 1.0], 0.0).unwrap(), Some(0));
        assert!(weakly_majorizes(&[1.0], &[1.0, 2.0]).is_err());
    }

    #[test]
    fn subset_enumeration() {
        assert_eq!(subsets_of_size(4, 2).len(), 6);
        assert_eq!(subsets_of_size(3, 0), vec![Vec::<usize>::new()]);
        assert_eq!(subsets_of_size(3, 3), vec![vec![0, 1, 2]]);
        assert!(subsets_of_size(2, 3).is_empty());
        let v = [1.0, 5.0, 2.0, 4.0];
        for k in 0..=4 {
            let top: f64 = sort_desc(&v).values()[..k].iter().sum();
            assert_eq!(subset_max(&v, k).max(0.0), top.max(0.0));
        }
    }
}
