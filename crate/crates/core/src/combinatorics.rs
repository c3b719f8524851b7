//! Partitions, compositions, dominance order, nilpotent orbit data, and
//! block anti-diagonal permutation matrices.
//!
//! These are the index objects everything else is built from: a partition σ
//! of n = k·c labels a nilpotent orbit, its weight data (Λ_σ, p_σ) drives the
//! coordinate sets of unipotent subgroups, and compositions β label standard
//! parabolic subgroups together with their Weyl representatives w_β.

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// A partition: weakly decreasing positive parts, stored without trailing
/// zeros. The empty partition is the unique partition of 0.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
#[serde(try_from = "Vec<u64>", into = "Vec<u64>")]
pub struct Partition {
    parts: Vec<u64>,
}

impl Partition {
    /// Builds a partition, stripping trailing zeros; parts must be weakly
    /// decreasing.
    pub fn new(parts: impl Into<Vec<u64>>) -> Result<Self> {
        let mut parts = parts.into();
        while parts.last() == Some(&0) {
            parts.pop();
        }
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidInput(format!(
                "partition parts must be weakly decreasing: {parts:?}"
            )));
        }
        if parts.contains(&0) {
            return Err(Error::InvalidInput(
                "partition parts must be positive".into(),
            ));
        }
        Ok(Partition { parts })
    }

    /// The rectangular partition with `count` copies of `part`.
    pub fn rectangle(part: u64, count: usize) -> Self {
        if part == 0 {
            return Partition { parts: Vec::new() };
        }
        Partition {
            parts: vec![part; count],
        }
    }

    pub fn parts(&self) -> &[u64] {
        &self.parts
    }

    /// Sum of the parts.
    pub fn total(&self) -> u64 {
        self.parts.iter().sum()
    }

    /// Number of (positive) parts.
    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// Compares `self` against `other` in the dominance order on partitions
    /// of the same total.
    pub fn dominance(&self, other: &Partition) -> Result<Dominance> {
        if self.total() != other.total() {
            return Err(Error::InvalidInput(format!(
                "dominance compares partitions of equal totals: {} vs {}",
                self.total(),
                other.total()
            )));
        }
        let n = self.parts.len().max(other.parts.len());
        let mut sum_a = 0u64;
        let mut sum_b = 0u64;
        let mut a_ahead = false;
        let mut b_ahead = false;
        for i in 0..n {
            sum_a += self.parts.get(i).copied().unwrap_or(0);
            sum_b += other.parts.get(i).copied().unwrap_or(0);
            if sum_a > sum_b {
                a_ahead = true;
            }
            if sum_b > sum_a {
                b_ahead = true;
            }
        }
        Ok(match (a_ahead, b_ahead) {
            (false, false) => Dominance::Equal,
            (true, false) => Dominance::Greater,
            (false, true) => Dominance::Less,
            (true, true) => Dominance::Incomparable,
        })
    }

    /// The weight data (Λ_σ, p_σ) attached to the nilpotent orbit labelled by
    /// this partition.
    pub fn orbit_data(&self) -> OrbitData {
        OrbitData::for_partition(self)
    }
}

impl TryFrom<Vec<u64>> for Partition {
    type Error = Error;

    fn try_from(v: Vec<u64>) -> Result<Self> {
        Partition::new(v)
    }
}

impl From<Partition> for Vec<u64> {
    fn from(p: Partition) -> Self {
        p.parts
    }
}

impl std::fmt::Display for Partition {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "(")?;
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, ")")
    }
}

/// Result of a dominance comparison.
#[derive(Copy, Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub enum Dominance {
    Greater,
    Less,
    Equal,
    Incomparable,
}

impl Dominance {
    /// The relation "greater than or non-comparable", which is how orbit
    /// attachment statements quantify over competing orbits.
    pub fn is_greater_or_incomparable(self) -> bool {
        matches!(self, Dominance::Greater | Dominance::Incomparable)
    }

    /// Swaps the roles of the two operands.
    pub fn flip(self) -> Self {
        match self {
            Dominance::Greater => Dominance::Less,
            Dominance::Less => Dominance::Greater,
            other => other,
        }
    }
}

/// A composition: an ordered tuple of positive parts.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
#[serde(try_from = "Vec<u64>", into = "Vec<u64>")]
pub struct Composition {
    parts: Vec<u64>,
}

impl Composition {
    pub fn new(parts: impl Into<Vec<u64>>) -> Result<Self> {
        let parts = parts.into();
        if parts.iter().any(|&p| p == 0) {
            return Err(Error::InvalidInput(
                "composition parts must be positive".into(),
            ));
        }
        Ok(Composition { parts })
    }

    /// The composition `(part, part, …, part)` with `count` entries.
    pub fn repeat(part: u64, count: usize) -> Result<Self> {
        Composition::new(vec![part; count])
    }

    pub fn parts(&self) -> &[u64] {
        &self.parts
    }

    pub fn total(&self) -> u64 {
        self.parts.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// Scales every part by `c`, turning a composition of n into a
    /// composition of n·c.
    pub fn scale(&self, c: u64) -> Result<Composition> {
        if c == 0 {
            return Err(Error::InvalidInput(
                "composition scale factor must be positive".into(),
            ));
        }
        Composition::new(self.parts.iter().map(|p| p * c).collect::<Vec<_>>())
    }

    /// Concatenates two compositions.
    pub fn concat(&self, other: &Composition) -> Composition {
        let mut parts = self.parts.clone();
        parts.extend_from_slice(&other.parts);
        Composition { parts }
    }

    /// The same parts in reverse order.
    pub fn reverse(&self) -> Composition {
        let mut parts = self.parts.clone();
        parts.reverse();
        Composition { parts }
    }

    /// All 2^(n−1) compositions of `n`, in lexicographic order of the part
    /// tuples.
    pub fn all_of(n: u64) -> Vec<Composition> {
        fn go(n: u64, prefix: &mut Vec<u64>, out: &mut Vec<Composition>) {
            if n == 0 {
                out.push(Composition {
                    parts: prefix.clone(),
                });
                return;
            }
            for first in 1..=n {
                prefix.push(first);
                go(n - first, prefix, out);
                prefix.pop();
            }
        }
        let mut out = Vec::new();
        go(n, &mut Vec::new(), &mut out);
        out
    }
}

impl TryFrom<Vec<u64>> for Composition {
    type Error = Error;

    fn try_from(v: Vec<u64>) -> Result<Self> {
        Composition::new(v)
    }
}

impl From<Composition> for Vec<u64> {
    fn from(c: Composition) -> Self {
        c.parts
    }
}

impl std::fmt::Display for Composition {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "(")?;
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, ")")
    }
}

/// The weight data of the nilpotent orbit attached to a partition σ of n:
/// the multiset Λ_σ = {a_i − 2j + 1 : 1 ≤ j ≤ a_i} over the parts a_i, and
/// the dominant tuple p_σ obtained by sorting Λ_σ decreasingly.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct OrbitData {
    sigma: Partition,
    /// Λ_σ in enumeration order: parts outermost, j = 1..a_i innermost.
    lambda: Vec<i64>,
    /// Λ_σ sorted weakly decreasing.
    p: Vec<i64>,
}

impl OrbitData {
    pub fn for_partition(sigma: &Partition) -> OrbitData {
        let mut lambda = Vec::with_capacity(sigma.total() as usize);
        for &a in sigma.parts() {
            let a = a as i64;
            for j in 1..=a {
                lambda.push(a - 2 * j + 1);
            }
        }
        let mut p = lambda.clone();
        p.sort_unstable_by(|x, y| y.cmp(x));
        OrbitData {
            sigma: sigma.clone(),
            lambda,
            p,
        }
    }

    pub fn sigma(&self) -> &Partition {
        &self.sigma
    }

    /// Λ_σ in enumeration order (by part, then by column within the part).
    pub fn lambda(&self) -> &[i64] {
        &self.lambda
    }

    /// p_σ: Λ_σ arranged weakly decreasing.
    pub fn p(&self) -> &[i64] {
        &self.p
    }
}

/// A permutation matrix on n points, stored as row images: `img[r] = c`
/// means the unique 1 of row r sits in column c (0-based internally;
/// serialized 1-based).
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct PermMatrix {
    img: Vec<usize>,
}

impl PermMatrix {
    pub fn identity(n: usize) -> Self {
        PermMatrix {
            img: (0..n).collect(),
        }
    }

    /// Builds from 0-based row images, validating that they form a
    /// permutation.
    pub fn from_images(img: Vec<usize>) -> Result<Self> {
        let n = img.len();
        let mut seen = vec![false; n];
        for &c in &img {
            if c >= n || seen[c] {
                return Err(Error::InvalidInput(format!(
                    "not a permutation of 0..{n}: {img:?}"
                )));
            }
            seen[c] = true;
        }
        Ok(PermMatrix { img })
    }

    /// The block anti-diagonal permutation matrix w_β: identity blocks
    /// I_{β_1}, …, I_{β_d} placed along the anti-diagonal, I_{β_1} at the
    /// top right.
    pub fn w_beta(beta: &Composition) -> Self {
        let n = beta.total() as usize;
        let mut img = vec![0usize; n];
        let mut row = 0usize;
        let mut col_end = n;
        for &b in beta.parts() {
            let b = b as usize;
            let col_start = col_end - b;
            for j in 0..b {
                img[row + j] = col_start + j;
            }
            row += b;
            col_end = col_start;
        }
        PermMatrix { img }
    }

    pub fn n(&self) -> usize {
        self.img.len()
    }

    /// 0-based column of the 1 in row `r`.
    pub fn image_of(&self, r: usize) -> usize {
        self.img[r]
    }

    pub fn images(&self) -> &[usize] {
        &self.img
    }

    /// Matrix entry (r, c): 1 or 0.
    pub fn entry(&self, r: usize, c: usize) -> i64 {
        i64::from(self.img[r] == c)
    }

    /// Dense integer matrix of the entries.
    pub fn entries(&self) -> Vec<Vec<i64>> {
        let n = self.n();
        (0..n)
            .map(|r| (0..n).map(|c| self.entry(r, c)).collect())
            .collect()
    }

    /// Matrix product `self · rhs` (both must have the same size).
    pub fn compose(&self, rhs: &PermMatrix) -> Result<PermMatrix> {
        if self.n() != rhs.n() {
            return Err(Error::InvalidInput(format!(
                "permutation sizes differ: {} vs {}",
                self.n(),
                rhs.n()
            )));
        }
        let img = self.img.iter().map(|&j| rhs.img[j]).collect();
        Ok(PermMatrix { img })
    }

    /// The transpose, which is also the inverse.
    pub fn inverse(&self) -> PermMatrix {
        let mut img = vec![0usize; self.n()];
        for (r, &c) in self.img.iter().enumerate() {
            img[c] = r;
        }
        PermMatrix { img }
    }

    /// Determinant: the sign of the permutation.
    pub fn det(&self) -> i64 {
        let mut inversions = 0usize;
        for i in 0..self.img.len() {
            for j in (i + 1)..self.img.len() {
                if self.img[i] > self.img[j] {
                    inversions += 1;
                }
            }
        }
        if inversions % 2 == 0 {
            1
        } else {
            -1
        }
    }

    pub fn is_identity(&self) -> bool {
        self.img.iter().enumerate().all(|(r, &c)| r == c)
    }
}

impl TryFrom<Vec<usize>> for PermMatrix {
    type Error = Error;

    /// Accepts 1-based row images (the serialized form).
    fn try_from(v: Vec<usize>) -> Result<Self> {
        if v.iter().any(|&c| c == 0) {
            return Err(Error::InvalidInput(
                "serialized permutation images are 1-based".into(),
            ));
        }
        PermMatrix::from_images(v.into_iter().map(|c| c - 1).collect())
    }
}

impl From<PermMatrix> for Vec<usize> {
    /// Emits 1-based row images.
    fn from(p: PermMatrix) -> Self {
        p.img.into_iter().map(|c| c + 1).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn part(parts: &[u64]) -> Partition {
        Partition::new(parts.to_vec()).unwrap()
    }

    fn comp(parts: &[u64]) -> Composition {
        Composition::new(parts.to_vec()).unwrap()
    }

    #[test]
    fn partition_validation() {
        assert_eq!(part(&[3, 1, 0, 0]).parts(), &[3, 1]);
        assert!(Partition::new(vec![1, 2]).is_err());
        assert!(Partition::new(vec![2, 0, 1]).is_err());
        let empty = Partition::new(vec![]).unwrap();
        assert_eq!(empty.total(), 0);
        assert!(empty.is_empty());
        assert_eq!(Partition::rectangle(3, 2).parts(), &[3, 3]);
        assert_eq!(Partition::rectangle(0, 5).total(), 0);
    }

    #[test]
    fn dominance_examples() {
        assert_eq!(
            part(&[3, 1]).dominance(&part(&[2, 2])).unwrap(),
            Dominance::Greater
        );
        let r = Partition::rectangle(4, 3);
        assert_eq!(r.dominance(&r).unwrap(), Dominance::Equal);
        assert_eq!(
            part(&[4, 1, 1]).dominance(&part(&[3, 3])).unwrap(),
            Dominance::Incomparable
        );
        assert_eq!(
            part(&[2, 2]).dominance(&part(&[3, 1])).unwrap(),
            Dominance::Less
        );
        assert!(part(&[2]).dominance(&part(&[3])).is_err());
        assert!(Dominance::Incomparable.is_greater_or_incomparable());
        assert!(!Dominance::Less.is_greater_or_incomparable());
    }

    #[test]
    fn orbit_data_examples() {
        let d = part(&[3, 1]).orbit_data();
        assert_eq!(d.lambda(), &[2, 0, -2, 0]);
        assert_eq!(d.p(), &[2, 0, 0, -2]);

        let d = part(&[2, 2]).orbit_data();
        assert_eq!(d.lambda(), &[1, -1, 1, -1]);
        assert_eq!(d.p(), &[1, 1, -1, -1]);

        let d = Partition::rectangle(1, 5).orbit_data();
        assert_eq!(d.p(), &[0, 0, 0, 0, 0]);
    }

    #[test]
    fn orbit_data_invariants() {
        for sigma in [part(&[4, 2, 1]), part(&[3, 3]), Partition::rectangle(2, 4)] {
            let d = sigma.orbit_data();
            assert_eq!(d.p().len() as u64, sigma.total());
            assert_eq!(d.p().iter().sum::<i64>(), 0);
            let mut sorted_lambda = d.lambda().to_vec();
            sorted_lambda.sort_unstable_by(|x, y| y.cmp(x));
            assert_eq!(sorted_lambda, d.p());
            let negated_reverse: Vec<i64> = d.p().iter().rev().map(|x| -x).collect();
            assert_eq!(negated_reverse, d.p());
        }
    }

    #[test]
    fn w_beta_shapes() {
        let w = PermMatrix::w_beta(&comp(&[1, 1]));
        assert_eq!(w.entries(), vec![vec![0, 1], vec![1, 0]]);
        assert!(PermMatrix::w_beta(&comp(&[5])).is_identity());
        let j3 = PermMatrix::w_beta(&Composition::repeat(1, 3).unwrap());
        assert_eq!(j3.images(), &[2, 1, 0]);
        assert_eq!(j3.det(), -1);
        assert_eq!(PermMatrix::w_beta(&Composition::repeat(1, 4).unwrap()).det(), 1);
        // Identity blocks survive inside w_beta.
        let w = PermMatrix::w_beta(&comp(&[2, 1]));
        assert_eq!(w.images(), &[1, 2, 0]);
    }

    #[test]
    fn w_beta_times_reverse_is_permutation() {
        for beta in [comp(&[2, 1]), comp(&[1, 3, 2]), comp(&[4])] {
            let prod = PermMatrix::w_beta(&beta)
                .compose(&PermMatrix::w_beta(&beta.reverse()))
                .unwrap();
            // Already a PermMatrix by construction; sanity-check inverse law.
            assert!(prod.compose(&prod.inverse()).unwrap().is_identity());
        }
    }

    #[test]
    fn composition_scaling() {
        assert_eq!(comp(&[2, 1]).scale(3).unwrap().parts(), &[6, 3]);
        let ones = Composition::repeat(1, 4).unwrap();
        assert_eq!(ones.scale(3).unwrap().parts(), &[3, 3, 3, 3]);
        assert_eq!(comp(&[5]).scale(2).unwrap().parts(), &[10]);
        assert!(comp(&[1]).scale(0).is_err());
        let a = comp(&[2, 1]);
        let b = comp(&[3]);
        assert_eq!(
            a.concat(&b).scale(2).unwrap(),
            a.scale(2).unwrap().concat(&b.scale(2).unwrap())
        );
    }

    #[test]
    fn composition_enumeration() {
        let all = Composition::all_of(4);
        assert_eq!(all.len(), 8);
        assert!(all.contains(&comp(&[1, 1, 1, 1])));
        assert!(all.contains(&comp(&[4])));
        assert!(all.iter().all(|c| c.total() == 4));
        assert_eq!(Composition::all_of(0), vec![Composition::new(vec![]).unwrap()]);
    }

    #[test]
    fn permutation_algebra() {
        assert!(PermMatrix::from_images(vec![0, 0]).is_err());
        assert!(PermMatrix::from_images(vec![0, 2]).is_err());
        let p = PermMatrix::from_images(vec![1, 2, 0]).unwrap();
        let q = PermMatrix::from_images(vec![2, 1, 0]).unwrap();
        let pq = p.compose(&q).unwrap();
        // Matrix product: row r of pq has its 1 at q.img[p.img[r]].
        assert_eq!(pq.images(), &[1, 0, 2]);
        assert!(p.compose(&p.inverse()).unwrap().is_identity());
        assert_eq!(p.det() * q.det(), pq.det());
    }

    #[test]
    fn json_round_trips() {
        let sigma = part(&[3, 1]);
        let js = serde_json::to_string(&sigma).unwrap();
        assert_eq!(js, "[3,1]");
        assert_eq!(serde_json::from_str::<Partition>(&js).unwrap(), sigma);
        assert!(serde_json::from_str::<Partition>("[1,2]").is_err());

        let w = PermMatrix::w_beta(&comp(&[2, 1]));
        let js = serde_json::to_string(&w).unwrap();
        assert_eq!(js, "[2,3,1]");
        assert_eq!(serde_json::from_str::<PermMatrix>(&js).unwrap(), w);
        assert!(serde_json::from_str::<PermMatrix>("[0,1]").is_err());
    }
}
