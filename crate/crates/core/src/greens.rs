//! D-classes (equal to J-classes for finite semigroups) and the order on them.
//!
//! Classes are the strongly connected components of the graph whose edges are
//! `e -> e*g` and `e -> g*e` for every generator `g`; an edge always points
//! from a class to one that is below or equal to it in the J-order.

use std::cmp::Reverse;
use std::collections::BinaryHeap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::semigroup::SemigroupTable;
use crate::subset::BitSet;
use crate::transform::Transformation;

/// Which end of the J-order is listed first.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    /// Maximal classes first.
    #[default]
    Descending,
    Ascending,
}

impl FromStr for Direction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s.to_ascii_lowercase().as_str() {
            "desc" | "descending" => Ok(Direction::Descending),
            "asc" | "ascending" => Ok(Direction::Ascending),
            other => Err(Error::Parse(format!("unknown direction {other:?}"))),
        }
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Direction::Descending => "descending",
            Direction::Ascending => "ascending",
        })
    }
}

#[derive(Clone, Debug)]
pub struct DClassDecomposition {
    /// Element indices per class, sorted by transformation order.
    classes: Vec<Vec<usize>>,
    class_of: Vec<usize>,
    ranks: Vec<usize>,
    /// Classes reached by a single Cayley edge, strictly below; the transitive
    /// closure of this relation is the strict class order.
    covers_below: Vec<Vec<usize>>,
    /// Position of each element in the transformation order of the whole table.
    lex_position: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GreensExport {
    pub classes: Vec<Vec<usize>>,
    pub ranks: Vec<usize>,
    /// `(lower, upper)` pairs of the covering relation.
    pub hasse_edges: Vec<(usize, usize)>,
}

pub fn d_classes(table: &SemigroupTable) -> DClassDecomposition {
    let n = table.len();
    let k = table.generators().len();
    let neighbour = |v: usize, e: usize| {
        if e < k {
            table.right(v, e)
        } else {
            table.left(v, e - k)
        }
    };
    let component = tarjan(n, 2 * k, neighbour);

    // Renumber classes by their first element in discovery order.
    let mut renumber = vec![usize::MAX; n];
    let mut class_of = vec![0; n];
    let mut count = 0;
    for v in 0..n {
        let c = component[v];
        if renumber[c] == usize::MAX {
            renumber[c] = count;
            count += 1;
        }
        class_of[v] = renumber[c];
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| table.elements()[a].cmp(&table.elements()[b]));
    let mut lex_position = vec![0; n];
    for (pos, &v) in order.iter().enumerate() {
        lex_position[v] = pos;
    }
    let mut classes = vec![Vec::new(); count];
    for &v in &order {
        classes[class_of[v]].push(v);
    }
    let ranks = classes
        .iter()
        .map(|c| table.elements()[c[0]].rank())
        .collect();

    let mut covers_below = vec![Vec::new(); count];
    for v in 0..n {
        for e in 0..2 * k {
            let (a, b) = (class_of[v], class_of[neighbour(v, e)]);
            if a != b {
                covers_below[a].push(b);
            }
        }
    }
    for list in &mut covers_below {
        list.sort_unstable();
        list.dedup();
    }

    DClassDecomposition {
        classes,
        class_of,
        ranks,
        covers_below,
        lex_position,
    }
}

/// Iterative Tarjan; returns a component id per vertex.
fn tarjan<F: Fn(usize, usize) -> usize>(n: usize, degree: usize, neighbour: F) -> Vec<usize> {
    const UNSEEN: usize = usize::MAX;
    let mut index = vec![UNSEEN; n];
    let mut low = vec![0; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut component = vec![UNSEEN; n];
    let mut next_index = 0;
    let mut next_component = 0;
    let mut calls: Vec<(usize, usize)> = Vec::new();

    for root in 0..n {
        if index[root] != UNSEEN {
            continue;
        }
        index[root] = next_index;
        low[root] = next_index;
        next_index += 1;
        stack.push(root);
        on_stack[root] = true;
        calls.push((root, 0));

        while let Some(top) = calls.last_mut() {
            let v = top.0;
            if top.1 < degree {
                let w = neighbour(v, top.1);
                top.1 += 1;
                if index[w] == UNSEEN {
                    index[w] = next_index;
                    low[w] = next_index;
                    next_index += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    calls.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
                continue;
            }
            calls.pop();
            if low[v] == index[v] {
                loop {
                    let w = stack.pop().expect("tarjan stack underflow");
                    on_stack[w] = false;
                    component[w] = next_component;
                    if w == v {
                        break;
                    }
                }
                next_component += 1;
            }
            if let Some(&(parent, _)) = calls.last() {
                low[parent] = low[parent].min(low[v]);
            }
        }
    }
    component
}

impl DClassDecomposition {
    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn classes(&self) -> &[Vec<usize>] {
        &self.classes
    }

    pub fn class_of(&self, element: usize) -> usize {
        self.class_of[element]
    }

    pub fn rank_of_class(&self, class: usize) -> usize {
        self.ranks[class]
    }

    /// Classes one Cayley edge below `class`.
    pub fn covers_below(&self, class: usize) -> &[usize] {
        &self.covers_below[class]
    }

    /// Strict order: `lower < upper`.
    pub fn is_strictly_below(&self, lower: usize, upper: usize) -> bool {
        if lower == upper {
            return false;
        }
        let mut seen = BitSet::new(self.len());
        let mut stack = vec![upper];
        seen.insert(upper);
        while let Some(c) = stack.pop() {
            for &d in &self.covers_below[c] {
                if d == lower {
                    return true;
                }
                if seen.insert(d) {
                    stack.push(d);
                }
            }
        }
        false
    }

    /// Classes with nothing above them.
    pub fn maximal_classes(&self) -> Vec<usize> {
        let mut has_above = vec![false; self.len()];
        for list in &self.covers_below {
            for &d in list {
                has_above[d] = true;
            }
        }
        (0..self.len()).filter(|&c| !has_above[c]).collect()
    }

    /// Covering pairs `(lower, upper)` of the class order.
    pub fn hasse_edges(&self) -> Vec<(usize, usize)> {
        let m = self.len();
        // Strict down-sets, filled in an order where lower classes come first.
        let mut down: Vec<Option<BitSet>> = vec![None; m];
        let topo = self.topological_listing(Direction::Ascending);
        for &c in &topo {
            let mut set = BitSet::new(m);
            for &d in &self.covers_below[c] {
                set.insert(d);
                set.union_with(down[d].as_ref().expect("lower classes come first"));
            }
            down[c] = Some(set);
        }
        let mut edges = Vec::new();
        for c in 0..m {
            for &d in &self.covers_below[c] {
                let implied = self.covers_below[c]
                    .iter()
                    .any(|&e| e != d && down[e].as_ref().unwrap().contains(d));
                if !implied {
                    edges.push((d, c));
                }
            }
        }
        edges.sort_unstable();
        edges
    }

    /// Class indices as a linear extension of the J-order.
    ///
    /// Descending is a Kahn sort from the maximal classes in which, among the
    /// classes currently available, the one of higher rank and then with the
    /// lexicographically smallest member goes first. Ascending is its reverse.
    pub fn topological_listing(&self, direction: Direction) -> Vec<usize> {
        let m = self.len();
        let mut above_count = vec![0usize; m];
        for list in &self.covers_below {
            for &d in list {
                above_count[d] += 1;
            }
        }
        let key = |c: usize| (self.ranks[c], Reverse(self.lex_position[self.classes[c][0]]), c);
        let mut ready: BinaryHeap<_> = (0..m).filter(|&c| above_count[c] == 0).map(key).collect();
        let mut out = Vec::with_capacity(m);
        while let Some((_, _, c)) = ready.pop() {
            out.push(c);
            for &d in &self.covers_below[c] {
                above_count[d] -= 1;
                if above_count[d] == 0 {
                    ready.push(key(d));
                }
            }
        }
        debug_assert_eq!(out.len(), m, "class graph must be acyclic");
        if direction == Direction::Ascending {
            out.reverse();
        }
        out
    }

    /// Element indices: whole classes in [`Self::topological_listing`] order,
    /// each class in transformation order.
    pub fn ordered_indices(&self, direction: Direction) -> Vec<usize> {
        self.topological_listing(direction)
            .into_iter()
            .flat_map(|c| self.classes[c].iter().copied())
            .collect()
    }

    pub fn export(&self) -> GreensExport {
        GreensExport {
            classes: self.classes.clone(),
            ranks: self.ranks.clone(),
            hasse_edges: self.hasse_edges(),
        }
    }
}

pub fn ordered_elements(
    table: &SemigroupTable,
    decomposition: &DClassDecomposition,
    direction: Direction,
) -> Vec<Transformation> {
    decomposition
        .ordered_indices(direction)
        .into_iter()
        .map(|i| table.elements()[i].clone())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(s: &str) -> Transformation {
        s.parse().unwrap()
    }

    fn table(gens: &[&str]) -> SemigroupTable {
        SemigroupTable::closure(&gens.iter().map(|s| t(s)).collect::<Vec<_>>()).unwrap()
    }

    /// Pairwise ideal checks: the independent classification.
    fn oracle_classes(s: &SemigroupTable) -> Vec<Vec<usize>> {
        let n = s.len();
        let mut assigned = vec![false; n];
        let mut out = Vec::new();
        for x in 0..n {
            if assigned[x] {
                continue;
            }
            let class: Vec<usize> = (0..n)
                .filter(|&y| s.is_below(x, y) && s.is_below(y, x))
                .collect();
            for &y in &class {
                assigned[y] = true;
            }
            out.push(class);
        }
        out
    }

    fn same_partition(d: &DClassDecomposition, oracle: &[Vec<usize>]) -> bool {
        let mut a: Vec<Vec<usize>> = d
            .classes()
            .iter()
            .map(|c| {
                let mut c = c.clone();
                c.sort();
                c
            })
            .collect();
        let mut b = oracle.to_vec();
        a.sort();
        b.sort();
        a == b
    }

    #[test]
    fn full_t3_classes() {
        let s = table(&["[2,1,3]", "[2,3,1]", "[1,1,3]"]);
        let d = d_classes(&s);
        assert!(same_partition(&d, &oracle_classes(&s)));
        let mut sizes: Vec<(usize, usize)> =
            (0..d.len()).map(|c| (d.rank_of_class(c), d.classes()[c].len())).collect();
        sizes.sort();
        assert_eq!(sizes, vec![(1, 3), (2, 18), (3, 6)]);

        let desc = ordered_elements(&s, &d, Direction::Descending);
        let ranks: Vec<usize> = desc.iter().map(|f| f.rank()).collect();
        assert!(ranks[..6].iter().all(|&r| r == 3));
        assert!(ranks[6..24].iter().all(|&r| r == 2));
        assert!(ranks[24..].iter().all(|&r| r == 1));
        let asc = ordered_elements(&s, &d, Direction::Ascending);
        assert_eq!(asc[..3], desc[24..]);
        assert_eq!(asc[21..], desc[..6]);
        assert_eq!(d.hasse_edges().len(), 2);
    }

    #[test]
    fn group_is_one_class_in_lex_order() {
        let s = table(&["[2,3,1,4]", "[2,1,3,4]"]);
        let d = d_classes(&s);
        assert_eq!(d.len(), 1);
        let listed = ordered_elements(&s, &d, Direction::Descending);
        let mut sorted = s.elements().to_vec();
        sorted.sort();
        assert_eq!(listed, sorted);
    }

    #[test]
    fn two_constants() {
        let s = table(&["[1,1,1]", "[2,2,2]"]);
        let d = d_classes(&s);
        assert_eq!(s.len(), 2);
        assert!(same_partition(&d, &oracle_classes(&s)));
        assert_eq!(d.len(), 1);
    }

    #[test]
    fn mixed_table_against_oracle() {
        for gens in [
            vec!["[1,1,2,3]", "[2,3,4,4]"],
            vec!["[2,2,3,1]", "[1,3,3,2]"],
            vec!["[1,1,2]", "[2,3,3]", "[3,3,3]"],
        ] {
            let s = table(&gens);
            let d = d_classes(&s);
            assert!(same_partition(&d, &oracle_classes(&s)), "{gens:?}");
            for c in 0..d.len() {
                for &e in &d.classes()[c] {
                    assert_eq!(s.elements()[e].rank(), d.rank_of_class(c));
                }
            }
            // Strict order agrees with ideal membership between representatives.
            for a in 0..d.len() {
                for b in 0..d.len() {
                    let (x, y) = (d.classes()[a][0], d.classes()[b][0]);
                    assert_eq!(d.is_strictly_below(a, b), a != b && s.is_below(x, y));
                }
            }
            // Descending listing never puts a class after one strictly below it.
            let topo = d.topological_listing(Direction::Descending);
            for i in 0..topo.len() {
                for j in i + 1..topo.len() {
                    assert!(!d.is_strictly_below(topo[i], topo[j]));
                }
            }
        }
    }

    #[test]
    fn direction_parsing() {
        assert_eq!("desc".parse::<Direction>().unwrap(), Direction::Descending);
        assert_eq!("Ascending".parse::<Direction>().unwrap(), Direction::Ascending);
        assert!("up".parse::<Direction>().is_err());
    }
}
