//! Brute-force ground truth for small trees.
//!
//! Nothing here touches series or field code: height distributions are
//! built from the recursive decomposition of a tree into its root and an
//! ordered tuple of subtrees, using `H(t) = H(t₁) + … + H(t_i) + n − 1`.

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::family::FamilySpec;
use crate::series::TruncatedSeries;

pub const DEFAULT_CAP: usize = 25;

/// Total-height distribution over the trees with `n` vertices: `P_n(y)`
/// as a map from height to number of trees.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HeightPolynomial {
    pub n: usize,
    pub counts: BTreeMap<u64, BigUint>,
}

impl HeightPolynomial {
    /// `P_n(1)`, the number of trees.
    pub fn total(&self) -> BigUint {
        self.counts.values().sum()
    }

    /// Sorted `height:count` pairs separated by spaces.
    pub fn render(&self) -> String {
        self.counts
            .iter()
            .map(|(h, c)| format!("{h}:{c}"))
            .collect::<Vec<_>>()
            .join(" ")
    }
}

type Distribution = BTreeMap<u64, BigUint>;

fn convolve(a: &Distribution, b: &Distribution, shift: u64) -> Distribution {
    let mut out = Distribution::new();
    for (ha, ca) in a {
        for (hb, cb) in b {
            *out.entry(ha + hb + shift).or_insert_with(BigUint::zero) += ca * cb;
        }
    }
    out
}

fn accumulate(into: &mut Distribution, from: Distribution) {
    for (h, c) in from {
        *into.entry(h).or_insert_with(BigUint::zero) += c;
    }
}

/// Height distributions for every size up to `max_n`, built bottom-up.
///
/// `forests[i][m]` is the distribution of the summed heights of ordered
/// `i`-tuples of trees with `m` vertices in total.
pub struct HeightTable {
    spec: FamilySpec,
    trees: Vec<Distribution>,
}

impl HeightTable {
    pub fn build(spec: &FamilySpec, max_n: usize, cap: usize) -> Result<Self> {
        if max_n > cap {
            return Err(Error::CapExceeded { n: max_n, cap });
        }
        let d = spec.max_degree();
        let mut trees: Vec<Distribution> = vec![Distribution::new(); max_n + 1];
        // forests[i - 1][m] for i = 1..=d
        let mut forests: Vec<Vec<Distribution>> = vec![vec![Distribution::new(); max_n + 1]; d];
        for n in 1..=max_n {
            let mut dist = Distribution::new();
            if n == 1 {
                dist.insert(0, BigUint::one());
            }
            for &i in spec.degrees() {
                let forest = &forests[i as usize - 1][n - 1];
                let shifted: Distribution = forest.iter().map(|(h, c)| (h + (n as u64 - 1), c.clone())).collect();
                accumulate(&mut dist, shifted);
            }
            trees[n] = dist;
            // extend forests to total size n: a tuple's first tree has size a ≤ n
            forests[0][n] = trees[n].clone();
            for i in 1..d {
                let mut acc = Distribution::new();
                for a in 1..n {
                    if trees[a].is_empty() || forests[i - 1][n - a].is_empty() {
                        continue;
                    }
                    accumulate(&mut acc, convolve(&trees[a], &forests[i - 1][n - a], 0));
                }
                forests[i][n] = acc;
            }
        }
        Ok(HeightTable {
            spec: spec.clone(),
            trees,
        })
    }

    pub fn family(&self) -> &FamilySpec {
        &self.spec
    }

    pub fn max_n(&self) -> usize {
        self.trees.len() - 1
    }

    pub fn get(&self, n: usize) -> HeightPolynomial {
        HeightPolynomial {
            n,
            counts: self.trees[n].clone(),
        }
    }
}

/// `P_n(y)` for one family and size.
pub fn enumerate_height_poly(spec: &FamilySpec, n: usize, cap: usize) -> Result<HeightPolynomial> {
    if n > cap {
        return Err(Error::CapExceeded { n, cap });
    }
    Ok(HeightTable::build(spec, n, cap)?.get(n))
}

/// `F_r(n) = Σ_t H(t)·(H(t) − 1)⋯(H(t) − r + 1)` for `r = 0..=k`.
pub fn oracle_factorial_moments(hp: &HeightPolynomial, k: usize) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); k + 1];
    for (&h, c) in &hp.counts {
        let c = BigInt::from(c.clone());
        let mut falling = BigInt::one();
        for (r, slot) in out.iter_mut().enumerate() {
            if r > 0 {
                falling *= BigInt::from(h) - BigInt::from(r as u64 - 1);
            }
            *slot += &falling * &c;
        }
    }
    out
}

/// An explicit ordered tree, used only to cross-check the distribution tables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrderedTree {
    pub children: Vec<OrderedTree>,
}

impl OrderedTree {
    pub fn size(&self) -> usize {
        1 + self.children.iter().map(OrderedTree::size).sum::<usize>()
    }

    /// Sum of the depths of all vertices.
    pub fn total_height(&self) -> u64 {
        fn walk(t: &OrderedTree, depth: u64) -> u64 {
            depth + t.children.iter().map(|c| walk(c, depth + 1)).sum::<u64>()
        }
        walk(self, 0)
    }
}

/// Every tree of the family with exactly `n` vertices, without memoization.
pub fn enumerate_trees(spec: &FamilySpec, n: usize) -> Vec<OrderedTree> {
    if n == 0 {
        return Vec::new();
    }
    let mut out = Vec::new();
    if n == 1 {
        out.push(OrderedTree { children: Vec::new() });
    }
    for &i in spec.degrees() {
        for forest in enumerate_forests(spec, i as usize, n - 1) {
            out.push(OrderedTree { children: forest });
        }
    }
    out
}

fn enumerate_forests(spec: &FamilySpec, parts: usize, total: usize) -> Vec<Vec<OrderedTree>> {
    if parts == 0 {
        return if total == 0 { vec![Vec::new()] } else { Vec::new() };
    }
    let mut out = Vec::new();
    for first in 1..=total {
        let heads = enumerate_trees(spec, first);
        if heads.is_empty() {
            continue;
        }
        let tails = enumerate_forests(spec, parts - 1, total - first);
        for h in &heads {
            for t in &tails {
                let mut forest = vec![h.clone()];
                forest.extend(t.iter().cloned());
                out.push(forest);
            }
        }
    }
    out
}

/// Outcome of a successful pipeline check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckReport {
    pub family: FamilySpec,
    pub pipelines: Vec<String>,
    pub max_n: usize,
    pub k: usize,
    /// Number of `(n, r)` pairs compared, summed over pipelines.
    pub comparisons: usize,
}

/// Compares factorial-moment series against the oracle for every
/// supported `n ≤ n_max` and `r ≤ k`. `series[r]` must generate `F_r(n)`.
pub fn check_series(
    table: &HeightTable,
    pipeline: &str,
    series: &[TruncatedSeries],
    n_max: usize,
    k: usize,
) -> Result<usize> {
    let mut comparisons = 0;
    for n in 1..=n_max.min(table.max_n()) {
        let hp = table.get(n);
        if hp.counts.is_empty() {
            continue;
        }
        let expected = oracle_factorial_moments(&hp, k);
        for (r, want) in expected.iter().enumerate() {
            let got = series[r].coeff(n);
            if !got.is_integer() || got.numer() != want {
                return Err(Error::MismatchFound {
                    degrees: table.family().degrees().to_vec(),
                    pipeline: pipeline.to_string(),
                    n,
                    r,
                    expected: want.to_string(),
                    found: got.to_string(),
                });
            }
            comparisons += 1;
        }
    }
    Ok(comparisons)
}

/// Runs the numeric and symbolic pipelines and checks both against the
/// oracle. A symbolic failure other than a mismatch is propagated.
pub fn check_pipeline(spec: &FamilySpec, n_max: usize, k: usize, cap: usize) -> Result<CheckReport> {
    let table = HeightTable::build(spec, n_max, cap)?;

    let factor = |r: usize| -> BigInt { (1..=r).fold(BigInt::one(), |a, i| a * BigInt::from(i)) };
    let numeric: Vec<TruncatedSeries> = crate::series::solve_numeric_fe(spec, n_max, k)
        .into_iter()
        .enumerate()
        .map(|(r, c)| c.scale(&num_rational::BigRational::from_integer(factor(r))))
        .collect();
    let mut comparisons = check_series(&table, "numeric", &numeric, n_max, k)?;

    let bundle = crate::momentgf::derive_all(spec, k)?;
    let symbolic = bundle.series(n_max)?;
    comparisons += check_series(&table, "symbolic", &symbolic, n_max, k)?;

    Ok(CheckReport {
        family: spec.clone(),
        pipelines: vec!["numeric".into(), "symbolic".into()],
        max_n: n_max,
        k,
        comparisons,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(s: &[i64]) -> FamilySpec {
        FamilySpec::new(s.iter().copied()).unwrap()
    }

    fn counts(pairs: &[(u64, u32)]) -> BTreeMap<u64, BigUint> {
        pairs.iter().map(|&(h, c)| (h, BigUint::from(c))).collect()
    }

    #[test]
    fn binary_small_sizes() {
        let s = spec(&[2]);
        assert_eq!(enumerate_height_poly(&s, 5, DEFAULT_CAP).unwrap().counts, counts(&[(6, 2)]));
        assert_eq!(enumerate_height_poly(&s, 7, DEFAULT_CAP).unwrap().counts, counts(&[(10, 1), (12, 4)]));
        assert!(enumerate_height_poly(&s, 4, DEFAULT_CAP).unwrap().counts.is_empty());
    }

    #[test]
    fn factorial_moments_of_seven_vertex_binary_trees() {
        let hp = enumerate_height_poly(&spec(&[2]), 7, DEFAULT_CAP).unwrap();
        let f = oracle_factorial_moments(&hp, 2);
        assert_eq!(f, vec![BigInt::from(5), BigInt::from(58), BigInt::from(618)]);
    }

    #[test]
    fn cap_guard() {
        assert_eq!(
            enumerate_height_poly(&spec(&[2]), 40, DEFAULT_CAP),
            Err(Error::CapExceeded { n: 40, cap: 25 })
        );
        assert!(enumerate_height_poly(&spec(&[2]), 27, 30).is_ok());
    }

    #[test]
    fn path_family_single_height() {
        let table = HeightTable::build(&spec(&[1]), DEFAULT_CAP, DEFAULT_CAP).unwrap();
        for n in 1..=DEFAULT_CAP {
            let hp = table.get(n);
            assert_eq!(hp.counts, counts(&[((n * (n - 1) / 2) as u64, 1)]));
        }
    }

    #[test]
    fn memoized_matches_explicit_trees() {
        for s in [vec![2], vec![1, 2], vec![3], vec![1, 3], vec![2, 3]] {
            let s = spec(&s);
            let table = HeightTable::build(&s, 10, DEFAULT_CAP).unwrap();
            for n in 1..=10 {
                let mut direct = Distribution::new();
                for t in enumerate_trees(&s, n) {
                    assert_eq!(t.size(), n);
                    *direct.entry(t.total_height()).or_insert_with(BigUint::zero) += 1u32;
                }
                assert_eq!(table.get(n).counts, direct, "{s:?} n={n}");
            }
        }
    }

    #[test]
    fn heights_respect_star_bound() {
        let table = HeightTable::build(&spec(&[1, 2, 3]), 14, DEFAULT_CAP).unwrap();
        for n in 1..=14 {
            let hp = table.get(n);
            assert!(*hp.counts.keys().next().unwrap() >= (n - 1) as u64);
        }
    }

    #[test]
    fn detects_corrupted_series() {
        let s = spec(&[2]);
        let table = HeightTable::build(&s, 9, DEFAULT_CAP).unwrap();
        let mut series = crate::series::solve_numeric_fe(&s, 9, 1);
        assert!(check_series(&table, "numeric", &series, 9, 1).is_ok());
        series[1] = &series[1] + &TruncatedSeries::monomial(7, 9);
        match check_series(&table, "numeric", &series, 9, 1) {
            Err(Error::MismatchFound { n, r, expected, found, .. }) => {
                assert_eq!((n, r), (7, 1));
                assert_eq!((expected.as_str(), found.as_str()), ("58", "59"));
            }
            other => panic!("expected mismatch, got {other:?}"),
        }
    }

    #[test]
    fn pipelines_agree_with_oracle_small() {
        let report = check_pipeline(&spec(&[2]), 11, 3, DEFAULT_CAP).unwrap();
        assert!(report.comparisons > 0);
        check_pipeline(&spec(&[1, 2]), 9, 3, DEFAULT_CAP).unwrap();
    }
}
