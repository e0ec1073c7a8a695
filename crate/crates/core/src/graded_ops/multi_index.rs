use std::fmt;

/// Exponent vector over axes `1..=n`, stored densely.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MultiIndex(Vec<u32>);

impl fmt::Debug for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

impl MultiIndex {
    pub fn unit(n: usize) -> Self {
        MultiIndex(vec![0; n])
    }

    pub fn from_exponents(exps: Vec<u32>) -> Self {
        MultiIndex(exps)
    }

    /// Single axis (1-based) with multiplicity `k`.
    pub fn axis(n: usize, i: usize, k: u32) -> Self {
        let mut v = vec![0; n];
        v[i - 1] = k;
        MultiIndex(v)
    }

    /// From `(axis, multiplicity)` pairs with 1-based axes; repeated axes accumulate.
    pub fn from_pairs(n: usize, pairs: &[(usize, u32)]) -> Option<Self> {
        let mut v = vec![0; n];
        for &(i, k) in pairs {
            if i == 0 || i > n {
                return None;
            }
            v[i - 1] += k;
        }
        Some(MultiIndex(v))
    }

    /// Sorted `(axis, multiplicity)` pairs, 1-based, zero multiplicities omitted.
    pub fn pairs(&self) -> Vec<(usize, u32)> {
        self.0
            .iter()
            .enumerate()
            .filter(|(_, &k)| k > 0)
            .map(|(i, &k)| (i + 1, k))
            .collect()
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn degree(&self) -> usize {
        self.0.iter().map(|&k| k as usize).sum()
    }

    pub fn is_unit(&self) -> bool {
        self.0.iter().all(|&k| k == 0)
    }

    pub fn plus(&self, other: &Self) -> Self {
        MultiIndex(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// `self - other`, `None` when some component would go negative.
    pub fn minus(&self, other: &Self) -> Option<Self> {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.checked_sub(*b))
            .collect::<Option<Vec<_>>>()
            .map(MultiIndex)
    }

    /// All `l` with `0 ≤ l ≤ bound` componentwise.
    pub fn sub_indices(bound: &Self) -> Vec<Self> {
        let mut out = vec![Vec::with_capacity(bound.dim())];
        for &b in &bound.0 {
            let mut next = Vec::with_capacity(out.len() * (b as usize + 1));
            for prefix in &out {
                for k in 0..=b {
                    let mut p = prefix.clone();
                    p.push(k);
                    next.push(p);
                }
            }
            out = next;
        }
        out.into_iter().map(MultiIndex).collect()
    }

    /// Evaluates `x^I` at a point.
    pub fn eval(&self, x: &[f64]) -> f64 {
        self.0
            .iter()
            .zip(x)
            .map(|(&k, &xi)| xi.powi(k as i32))
            .product()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pairs_roundtrip() {
        let m = MultiIndex::from_pairs(4, &[(1, 2), (3, 1)]).unwrap();
        assert_eq!(m.pairs(), vec![(1, 2), (3, 1)]);
        assert_eq!(m.degree(), 3);
        assert!(MultiIndex::from_pairs(2, &[(3, 1)]).is_none());
    }

    #[test]
    fn sub_indices_count() {
        let m = MultiIndex::from_exponents(vec![2, 0, 1]);
        assert_eq!(MultiIndex::sub_indices(&m).len(), 6);
    }
}
