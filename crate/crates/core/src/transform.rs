//! Transformations of `{0, .., n-1}` acting on the right.
//!
//! Points are zero-based inside the library. The text literal `[i1,i2,...,in]`
//! used by the CLI, JSON payloads and the Python bindings is one-based.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{invalid, Error, Result};

/// A total map on `{0, .., n-1}` stored as its image tuple.
///
/// Composition is left to right: `(x)(f * g) = ((x)f)g`. The derived order is
/// lexicographic on image tuples and is used for every deterministic tie-break.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Transformation {
    images: Box<[u32]>,
}

impl Transformation {
    /// Builds a transformation from zero-based images.
    pub fn from_images(images: Vec<u32>) -> Result<Self> {
        let n = images.len();
        if n == 0 {
            return invalid("a transformation needs degree at least 1");
        }
        if let Some(&bad) = images.iter().find(|&&v| v as usize >= n) {
            return invalid(format!("image {bad} out of range for degree {n}"));
        }
        Ok(Self {
            images: images.into_boxed_slice(),
        })
    }

    /// Builds a transformation from one-based images, as written in literals.
    pub fn from_one_based(images: &[usize]) -> Result<Self> {
        let n = images.len();
        let mut zero = Vec::with_capacity(n);
        for &v in images {
            if v == 0 || v > n {
                return invalid(format!("image {v} out of range 1..={n}"));
            }
            zero.push((v - 1) as u32);
        }
        Self::from_images(zero)
    }

    pub(crate) fn from_images_unchecked(images: Vec<u32>) -> Self {
        debug_assert!(images.iter().all(|&v| (v as usize) < images.len()));
        Self {
            images: images.into_boxed_slice(),
        }
    }

    pub fn identity(degree: usize) -> Self {
        assert!(degree > 0, "degree must be positive");
        Self::from_images_unchecked((0..degree as u32).collect())
    }

    /// The constant map onto the zero-based point `value`.
    pub fn constant(degree: usize, value: usize) -> Result<Self> {
        if value >= degree {
            return invalid(format!("constant value {value} out of range for degree {degree}"));
        }
        Self::from_images(vec![value as u32; degree])
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    /// Zero-based image tuple.
    pub fn images(&self) -> &[u32] {
        &self.images
    }

    /// One-based image tuple.
    pub fn one_based(&self) -> Vec<usize> {
        self.images.iter().map(|&v| v as usize + 1).collect()
    }

    /// Image of a zero-based point.
    #[inline]
    pub fn apply(&self, point: usize) -> usize {
        self.images[point] as usize
    }

    /// `self` followed by `other`.
    pub fn compose(&self, other: &Transformation) -> Result<Transformation> {
        if self.degree() != other.degree() {
            return invalid(format!(
                "degree mismatch: {} vs {}",
                self.degree(),
                other.degree()
            ));
        }
        Ok(self.compose_unchecked(other))
    }

    #[inline]
    pub(crate) fn compose_unchecked(&self, other: &Transformation) -> Transformation {
        debug_assert_eq!(self.degree(), other.degree());
        Transformation {
            images: self
                .images
                .iter()
                .map(|&v| other.images[v as usize])
                .collect(),
        }
    }

    pub fn pow(&self, exponent: usize) -> Transformation {
        assert!(exponent > 0, "semigroups have no zeroth power");
        let mut acc = self.clone();
        for _ in 1..exponent {
            acc = acc.compose_unchecked(self);
        }
        acc
    }

    pub fn rank(&self) -> usize {
        let mut seen = vec![false; self.degree()];
        let mut count = 0;
        for &v in self.images.iter() {
            let slot = &mut seen[v as usize];
            if !*slot {
                *slot = true;
                count += 1;
            }
        }
        count
    }

    /// Sorted zero-based image set.
    pub fn image(&self) -> Vec<usize> {
        let mut seen = vec![false; self.degree()];
        for &v in self.images.iter() {
            seen[v as usize] = true;
        }
        (0..self.degree()).filter(|&p| seen[p]).collect()
    }

    /// Kernel blocks, each sorted, listed by least member.
    pub fn kernel(&self) -> Vec<Vec<usize>> {
        let n = self.degree();
        let mut block_of = vec![usize::MAX; n];
        let mut blocks: Vec<Vec<usize>> = Vec::new();
        for x in 0..n {
            let v = self.images[x] as usize;
            if block_of[v] == usize::MAX {
                block_of[v] = blocks.len();
                blocks.push(Vec::new());
            }
            blocks[block_of[v]].push(x);
        }
        blocks
    }

    /// The transversal made of the least preimage of each image point, sorted.
    pub fn transversal(&self) -> Vec<usize> {
        let mut out: Vec<usize> = self.kernel().into_iter().map(|b| b[0]).collect();
        out.sort_unstable();
        out
    }

    pub fn is_permutation(&self) -> bool {
        self.rank() == self.degree()
    }

    pub fn is_idempotent(&self) -> bool {
        self.images
            .iter()
            .all(|&v| self.images[v as usize] == v)
    }

    /// True iff the monogenic semigroup generated by `self` is a group, i.e.
    /// `self` permutes its own image.
    pub fn is_group_generator(&self) -> bool {
        let mut hit = vec![false; self.degree()];
        for p in self.image() {
            let q = self.images[p] as usize;
            if hit[q] {
                return false;
            }
            hit[q] = true;
        }
        true
    }

    /// Inverse of a permutation.
    pub fn inverse(&self) -> Result<Transformation> {
        if !self.is_permutation() {
            return invalid(format!("{self} is not a permutation"));
        }
        let mut inv = vec![0u32; self.degree()];
        for (x, &v) in self.images.iter().enumerate() {
            inv[v as usize] = x as u32;
        }
        Ok(Transformation::from_images_unchecked(inv))
    }

    /// `p⁻¹ * self * p`, so that `(x)p ↦ ((x)self)p` for every point `x`.
    pub fn conjugate(&self, p: &Transformation) -> Result<Transformation> {
        if p.degree() != self.degree() {
            return invalid("degree mismatch in conjugation");
        }
        let inv = p.inverse()?;
        Ok(inv.compose_unchecked(self).compose_unchecked(p))
    }

    /// Position of `self` in the lexicographic listing of `T_n`.
    pub fn lex_index(&self) -> usize {
        let n = self.degree();
        self.images
            .iter()
            .fold(0usize, |acc, &v| acc * n + v as usize)
    }
}

/// All `n^n` transformations of degree `n` in lexicographic order.
pub fn all_transformations(degree: usize) -> impl Iterator<Item = Transformation> {
    assert!(degree > 0, "degree must be positive");
    let mut current: Option<Vec<u32>> = Some(vec![0; degree]);
    std::iter::from_fn(move || {
        let out = current.clone()?;
        let mut next = out.clone();
        let mut pos = degree;
        loop {
            if pos == 0 {
                current = None;
                break;
            }
            pos -= 1;
            if (next[pos] as usize) + 1 < degree {
                next[pos] += 1;
                current = Some(next);
                break;
            }
            next[pos] = 0;
        }
        Some(Transformation::from_images_unchecked(out))
    })
}

/// All permutations of degree `n` in lexicographic order.
pub fn all_permutations(degree: usize) -> Vec<Transformation> {
    fn extend(prefix: &mut Vec<u32>, used: &mut [bool], out: &mut Vec<Transformation>) {
        let n = used.len();
        if prefix.len() == n {
            out.push(Transformation::from_images_unchecked(prefix.clone()));
            return;
        }
        for v in 0..n {
            if !used[v] {
                used[v] = true;
                prefix.push(v as u32);
                extend(prefix, used, out);
                prefix.pop();
                used[v] = false;
            }
        }
    }
    let mut out = Vec::new();
    extend(&mut Vec::new(), &mut vec![false; degree], &mut out);
    out
}

/// Checks that a nonempty list shares one degree and returns it.
pub fn common_degree(list: &[Transformation]) -> Result<usize> {
    let first = match list.first() {
        Some(f) => f.degree(),
        None => return invalid("empty list of transformations"),
    };
    if list.iter().any(|f| f.degree() != first) {
        return invalid("transformations of mixed degrees");
    }
    Ok(first)
}

/// Parses a whitespace-separated list of literals; `#` starts a comment.
pub fn parse_set(line: &str) -> Result<Vec<Transformation>> {
    let line = line.split('#').next().unwrap_or("");
    let mut out = Vec::new();
    let mut rest = line.trim_start();
    while !rest.is_empty() {
        if !rest.starts_with('[') {
            return Err(Error::Parse(format!("expected '[' at {rest:?}")));
        }
        let end = rest
            .find(']')
            .ok_or_else(|| Error::Parse(format!("unterminated literal {rest:?}")))?;
        out.push(rest[..=end].parse()?);
        rest = rest[end + 1..].trim_start_matches(|c: char| c.is_whitespace() || c == ',');
    }
    Ok(out)
}

impl FromStr for Transformation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let body = compact
            .strip_prefix('[')
            .and_then(|b| b.strip_suffix(']'))
            .ok_or_else(|| Error::Parse(format!("expected [i1,...,in], got {s:?}")))?;
        if body.is_empty() {
            return Err(Error::Parse("empty transformation literal".into()));
        }
        let images = body
            .split(',')
            .map(|t| {
                t.parse::<usize>()
                    .map_err(|e| Error::Parse(format!("bad point {t:?}: {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_one_based(&images).map_err(|e| match e {
            Error::InvalidInput(m) => Error::Parse(m),
            other => other,
        })
    }
}

impl fmt::Display for Transformation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, v) in self.images.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{}", v + 1)?;
        }
        f.write_str("]")
    }
}

impl fmt::Debug for Transformation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for Transformation {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Transformation {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

impl std::ops::Mul for &Transformation {
    type Output = Transformation;

    /// Panics on a degree mismatch; use [`Transformation::compose`] to get an error instead.
    fn mul(self, rhs: &Transformation) -> Transformation {
        assert_eq!(self.degree(), rhs.degree(), "degree mismatch");
        self.compose_unchecked(rhs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(s: &str) -> Transformation {
        s.parse().unwrap()
    }

    #[test]
    fn compose_examples() {
        assert_eq!(t("[2,3,1]").compose(&t("[1,1,2]")).unwrap(), t("[1,2,1]"));
        assert_eq!(t("[1,2,3]").compose(&t("[3,1,2]")).unwrap(), t("[3,1,2]"));
        assert_eq!(t("[1,1,1]").compose(&t("[2,3,1]")).unwrap(), t("[2,2,2]"));
    }

    #[test]
    fn compose_rejects_mixed_degrees() {
        assert!(matches!(
            t("[1,2]").compose(&t("[1,2,3]")),
            Err(Error::InvalidInput(_))
        ));
    }

    #[test]
    fn rank_image_kernel() {
        assert_eq!(t("[1,1,1]").rank(), 1);
        assert_eq!(t("[2,3,1]").rank(), 3);
        assert_eq!(t("[1,1,2]").rank(), 2);
        assert_eq!(t("[1,1,2]").image(), vec![0, 1]);
        assert_eq!(t("[1,1,2]").kernel(), vec![vec![0, 1], vec![2]]);
        assert_eq!(
            Transformation::identity(3).kernel(),
            vec![vec![0], vec![1], vec![2]]
        );
        assert_eq!(t("[2,2,2]").kernel(), vec![vec![0, 1, 2]]);
        assert_eq!(t("[3,1,3]").transversal(), vec![0, 1]);
    }

    #[test]
    fn group_generators() {
        assert!(t("[2,3,1]").is_group_generator());
        assert!(!t("[1,1,2]").is_group_generator());
        assert!(t("[1,1,3]").is_group_generator());
        for f in all_transformations(4) {
            assert_eq!(f.is_group_generator(), (&f * &f).rank() == f.rank());
        }
    }

    #[test]
    fn conjugation() {
        let p = t("[2,1,3]");
        assert_eq!(t("[1,1,2]").conjugate(&p).unwrap(), t("[2,2,1]"));
        let id = Transformation::identity(3);
        for f in all_transformations(3) {
            assert_eq!(f.conjugate(&id).unwrap(), f);
        }
        for p in all_permutations(3) {
            let c = t("[1,1,1]").conjugate(&p).unwrap();
            assert_eq!(c, Transformation::constant(3, p.apply(0)).unwrap());
        }
        assert!(t("[1,1,2]").conjugate(&t("[1,1,2]")).is_err());
    }

    #[test]
    fn conjugation_pointwise_oracle() {
        // (x)p ↦ ((x)f)p checked pointwise for every pair in T_3 × S_3.
        for p in all_permutations(3) {
            for f in all_transformations(3) {
                let c = f.conjugate(&p).unwrap();
                for x in 0..3 {
                    assert_eq!(c.apply(p.apply(x)), p.apply(f.apply(x)));
                }
            }
        }
    }

    #[test]
    fn literal_round_trip() {
        assert_eq!(t(" [ 2, 3 ,1 ] ").to_string(), "[2,3,1]");
        assert!("[0,1]".parse::<Transformation>().is_err());
        assert!("[1,3]".parse::<Transformation>().is_err());
        assert!("1,2".parse::<Transformation>().is_err());
        assert!("[]".parse::<Transformation>().is_err());
        let set = parse_set("[1,1,2] [2,2,3]  # comment").unwrap();
        assert_eq!(set, vec![t("[1,1,2]"), t("[2,2,3]")]);
        assert!(parse_set("# only a comment").unwrap().is_empty());
    }

    #[test]
    fn enumeration_is_lexicographic() {
        let all: Vec<_> = all_transformations(3).collect();
        assert_eq!(all.len(), 27);
        assert!(all.windows(2).all(|w| w[0] < w[1]));
        for (i, f) in all.iter().enumerate() {
            assert_eq!(f.lex_index(), i);
        }
        assert_eq!(all_permutations(4).len(), 24);
    }

    #[test]
    fn idempotent_counts_by_rank() {
        // C(n,r) * r^(n-r) idempotents of rank r, by brute-force filter.
        fn binom(n: u64, k: u64) -> u64 {
            (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
        }
        for n in 1..=6usize {
            let mut counts = vec![0u64; n + 1];
            for f in all_transformations(n) {
                if &f * &f == f {
                    assert!(f.is_idempotent());
                    counts[f.rank()] += 1;
                }
            }
            for r in 1..=n {
                let expected = binom(n as u64, r as u64) * (r as u64).pow((n - r) as u32);
                assert_eq!(counts[r], expected, "n={n} r={r}");
            }
        }
    }
}
