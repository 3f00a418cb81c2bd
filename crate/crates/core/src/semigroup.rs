//! Breadth-first enumeration of the semigroup generated by transformations.

use std::collections::{HashMap, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::subset::{BitSet, SmallSemigroup};
use crate::transform::{common_degree, Transformation};

/// 8^8: the full monoid of degree 8.
pub const DEFAULT_MAX_ELEMENTS: usize = 16_777_216;

const NO_PARENT: u32 = u32::MAX;

/// An enumerated transformation semigroup with both Cayley graphs.
///
/// Elements are kept in discovery order: breadth first by word length, and
/// within one length by generator index, then by the parent's position.
/// The adjoined identity of `S¹` is never stored; queries that need it treat
/// it as the empty word.
#[derive(Clone, Debug)]
pub struct SemigroupTable {
    degree: usize,
    generators: Vec<Transformation>,
    elements: Vec<Transformation>,
    index: HashMap<Transformation, u32>,
    right: Vec<u32>,
    left: Vec<u32>,
    parent: Vec<u32>,
    last_letter: Vec<u32>,
}

/// JSON form of a table.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TableExport {
    pub degree: usize,
    pub generators: Vec<Transformation>,
    pub elements: Vec<Transformation>,
    pub words: Vec<Vec<usize>>,
}

impl SemigroupTable {
    pub fn closure(generators: &[Transformation]) -> Result<Self> {
        Self::closure_with_limit(generators, DEFAULT_MAX_ELEMENTS)
    }

    pub fn closure_with_limit(generators: &[Transformation], max_elements: usize) -> Result<Self> {
        let degree = common_degree(generators)?;
        if degree > u32::MAX as usize {
            return invalid("degree too large");
        }
        let k = generators.len();
        let mut table = SemigroupTable {
            degree,
            generators: generators.to_vec(),
            elements: Vec::new(),
            index: HashMap::new(),
            right: Vec::new(),
            left: Vec::new(),
            parent: Vec::new(),
            last_letter: Vec::new(),
        };

        let mut level = Vec::new();
        for (j, g) in generators.iter().enumerate() {
            if !table.index.contains_key(g) {
                level.push(table.push(g.clone(), NO_PARENT, j as u32, max_elements)?);
            }
        }
        while !level.is_empty() {
            let mut next = Vec::new();
            for (j, g) in generators.iter().enumerate() {
                for &e in &level {
                    let p = table.elements[e].compose_unchecked(g);
                    let idx = match table.index.get(&p) {
                        Some(&i) => i as usize,
                        None => {
                            let i = table.push(p, e as u32, j as u32, max_elements)?;
                            next.push(i);
                            i
                        }
                    };
                    table.right[e * k + j] = idx as u32;
                }
            }
            level = next;
        }

        let n = table.elements.len();
        table.left = vec![0; n * k];
        for i in 0..n {
            for (j, g) in generators.iter().enumerate() {
                let p = g.compose_unchecked(&table.elements[i]);
                table.left[i * k + j] = table.index[&p];
            }
        }
        Ok(table)
    }

    fn push(
        &mut self,
        t: Transformation,
        parent: u32,
        letter: u32,
        max_elements: usize,
    ) -> Result<usize> {
        let i = self.elements.len();
        if i >= max_elements {
            return Err(Error::ResourceLimit(format!(
                "semigroup exceeds {max_elements} elements"
            )));
        }
        self.index.insert(t.clone(), i as u32);
        self.elements.push(t);
        self.parent.push(parent);
        self.last_letter.push(letter);
        self.right
            .extend(std::iter::repeat(0).take(self.generators.len()));
        Ok(i)
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Transformation] {
        &self.generators
    }

    pub fn elements(&self) -> &[Transformation] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn index_of(&self, f: &Transformation) -> Option<usize> {
        self.index.get(f).map(|&i| i as usize)
    }

    pub fn contains(&self, f: &Transformation) -> bool {
        f.degree() == self.degree && self.index.contains_key(f)
    }

    /// Index of `elements[i] * generators[j]`.
    pub fn right(&self, i: usize, j: usize) -> usize {
        self.right[i * self.generators.len() + j] as usize
    }

    /// Index of `generators[j] * elements[i]`.
    pub fn left(&self, i: usize, j: usize) -> usize {
        self.left[i * self.generators.len() + j] as usize
    }

    /// Generator indices whose left-to-right product is `elements[i]`.
    pub fn word(&self, i: usize) -> Vec<usize> {
        let mut out = Vec::new();
        let mut cur = i as u32;
        loop {
            out.push(self.last_letter[cur as usize] as usize);
            cur = self.parent[cur as usize];
            if cur == NO_PARENT {
                break;
            }
        }
        out.reverse();
        out
    }

    pub fn evaluate_word(&self, word: &[usize]) -> Result<Transformation> {
        let (first, rest) = word
            .split_first()
            .ok_or_else(|| Error::InvalidInput("empty word".into()))?;
        let gen = |j: usize| {
            self.generators
                .get(j)
                .ok_or_else(|| Error::InvalidInput(format!("no generator {j}")))
        };
        let mut acc = gen(*first)?.clone();
        for &j in rest {
            acc = acc.compose_unchecked(gen(j)?);
        }
        Ok(acc)
    }

    /// Index of `elements[a] * elements[b]`.
    pub fn product(&self, a: usize, b: usize) -> usize {
        let p = self.elements[a].compose_unchecked(&self.elements[b]);
        self.index[&p] as usize
    }

    /// True iff `elements[x] ∈ S¹ elements[y] S¹`, by search over both Cayley
    /// graphs starting at `y` (the empty path is the adjoined identity).
    pub fn is_below(&self, x: usize, y: usize) -> bool {
        if x == y {
            return true;
        }
        let k = self.generators.len();
        let mut seen = BitSet::new(self.len());
        seen.insert(y);
        let mut queue = VecDeque::from([y]);
        while let Some(v) = queue.pop_front() {
            for j in 0..k {
                for w in [self.right(v, j), self.left(v, j)] {
                    if w == x {
                        return true;
                    }
                    if seen.insert(w) {
                        queue.push_back(w);
                    }
                }
            }
        }
        false
    }

    /// `x ≤ y` in the J-preorder: `x = a y b` for some `a, b ∈ S¹`.
    pub fn principal_ideal_membership(&self, x: &Transformation, y: &Transformation) -> Result<bool> {
        let xi = self
            .index_of(x)
            .ok_or_else(|| Error::InvalidInput(format!("{x} is not an element")))?;
        let yi = self
            .index_of(y)
            .ok_or_else(|| Error::InvalidInput(format!("{y} is not an element")))?;
        Ok(self.is_below(xi, yi))
    }

    /// Full multiplication table in index space; quadratic in the size.
    pub fn multiplication_table(&self) -> Vec<u32> {
        let n = self.len();
        let mut out = Vec::with_capacity(n * n);
        for a in 0..n {
            for b in 0..n {
                out.push(self.product(a, b) as u32);
            }
        }
        out
    }

    pub(crate) fn small(&self, ceiling: usize) -> Result<SmallSemigroup> {
        if self.len() > ceiling {
            return Err(Error::ResourceLimit(format!(
                "semigroup has {} elements, exhaustive search ceiling is {ceiling}",
                self.len()
            )));
        }
        Ok(SmallSemigroup::new(self.len(), self.multiplication_table()))
    }

    pub fn export(&self) -> TableExport {
        TableExport {
            degree: self.degree,
            generators: self.generators.clone(),
            elements: self.elements.clone(),
            words: (0..self.len()).map(|i| self.word(i)).collect(),
        }
    }
}

/// Size of `⟨generators⟩` without recording Cayley edges.
pub fn generated_size(generators: &[Transformation]) -> Result<usize> {
    common_degree(generators)?;
    let mut seen: std::collections::HashSet<Transformation> = std::collections::HashSet::new();
    let mut queue: Vec<Transformation> = Vec::new();
    for g in generators {
        if seen.insert(g.clone()) {
            queue.push(g.clone());
        }
    }
    let mut pos = 0;
    while pos < queue.len() {
        for g in generators {
            let p = queue[pos].compose_unchecked(g);
            if !seen.contains(&p) {
                seen.insert(p.clone());
                queue.push(p);
            }
        }
        pos += 1;
    }
    Ok(queue.len())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::transform::all_transformations;

    fn t(s: &str) -> Transformation {
        s.parse().unwrap()
    }

    fn table(gens: &[&str]) -> SemigroupTable {
        SemigroupTable::closure(&gens.iter().map(|s| t(s)).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn closure_examples() {
        assert_eq!(table(&["[1,2,3]"]).len(), 1);
        assert_eq!(table(&["[2,3,1]"]).len(), 3);
        let full = table(&["[2,1,3]", "[2,3,1]", "[1,1,3]"]);
        assert_eq!(full.len(), 27);
        let mut got = full.elements().to_vec();
        got.sort();
        assert_eq!(got, all_transformations(3).collect::<Vec<_>>());
    }

    #[test]
    fn closure_errors() {
        assert!(matches!(SemigroupTable::closure(&[]), Err(Error::InvalidInput(_))));
        assert!(matches!(
            SemigroupTable::closure(&[t("[1,2]"), t("[1,1,1]")]),
            Err(Error::InvalidInput(_))
        ));
        let gens = [t("[2,1,3]"), t("[2,3,1]"), t("[1,1,3]")];
        assert!(matches!(
            SemigroupTable::closure_with_limit(&gens, 10),
            Err(Error::ResourceLimit(_))
        ));
    }

    #[test]
    fn discovery_order_is_level_then_generator_then_parent() {
        let s = table(&["[2,1,3]", "[2,3,1]"]);
        let words: Vec<_> = (0..s.len()).map(|i| s.word(i)).collect();
        for w in words.windows(2) {
            let key = |w: &Vec<usize>| (w.len(), *w.last().unwrap());
            assert!(key(&w[0]) <= key(&w[1]), "{words:?}");
        }
        assert_eq!(s.len(), 6);
    }

    #[test]
    fn membership() {
        let c3 = table(&["[2,3,1]"]);
        assert!(c3.contains(&t("[3,1,2]")));
        assert!(!c3.contains(&t("[1,1,1]")));
        assert!(!c3.contains(&t("[1,2]")));
        assert!(table(&["[1,1,3]"]).contains(&t("[1,1,3]")));
    }

    #[test]
    fn words_evaluate_to_elements() {
        let s = table(&["[2,1,3,4]", "[2,3,4,1]", "[1,1,3,4]"]);
        assert_eq!(s.len(), 256);
        for i in 0..s.len() {
            assert_eq!(s.evaluate_word(&s.word(i)).unwrap(), s.elements()[i]);
        }
    }

    #[test]
    fn cayley_edges() {
        let s = table(&["[2,1,3]", "[1,1,3]"]);
        for i in 0..s.len() {
            for (j, g) in s.generators().iter().enumerate() {
                assert_eq!(s.elements()[s.right(i, j)], &s.elements()[i] * g);
                assert_eq!(s.elements()[s.left(i, j)], g * &s.elements()[i]);
            }
        }
    }

    #[test]
    fn principal_ideals_in_t3() {
        let s = table(&["[2,1,3]", "[2,3,1]", "[1,1,3]"]);
        let id = Transformation::identity(3);
        let c = t("[1,1,1]");
        assert!(s.principal_ideal_membership(&c, &c).unwrap());
        assert!(s.principal_ideal_membership(&c, &id).unwrap());
        assert!(!s.principal_ideal_membership(&id, &c).unwrap());
        assert!(s.principal_ideal_membership(&t("[1,2]"), &c).is_err());
    }

    #[test]
    fn below_matches_exhaustive_products() {
        // x ≤ y iff x ∈ {y, ay, yb, ayb : a, b ∈ S}.
        let s = table(&["[1,1,2]", "[2,3,3]"]);
        let els = s.elements();
        for x in 0..s.len() {
            for y in 0..s.len() {
                let mut oracle = x == y;
                for a in els.iter() {
                    oracle |= &(a * &els[y]) == &els[x];
                    oracle |= &(&els[y] * a) == &els[x];
                    for b in els.iter() {
                        oracle |= &(&(a * &els[y]) * b) == &els[x];
                    }
                }
                assert_eq!(s.is_below(x, y), oracle);
            }
        }
    }

    #[test]
    fn generated_size_agrees() {
        let gens = [t("[2,1,3,4]"), t("[1,1,2,3]")];
        assert_eq!(generated_size(&gens).unwrap(), SemigroupTable::closure(&gens).unwrap().len());
    }

    #[test]
    fn export_has_words() {
        let s = table(&["[2,3,1]"]);
        let e = s.export();
        assert_eq!(e.elements.len(), 3);
        assert_eq!(e.words[0], vec![0]);
        let json = serde_json::to_string(&e).unwrap();
        assert!(json.contains("\"[2,3,1]\""));
    }
}
