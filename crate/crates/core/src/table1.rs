//! All subsemigroups of a small full transformation monoid up to conjugation,
//! and the rank versus SmallGeneratingSet output histogram over them.

use std::collections::{BTreeMap, HashSet};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::gensets::{semigroup_rank, small_generating_set, DEFAULT_RANK_CEILING};
use crate::greens::Direction;
use crate::semigroup::SemigroupTable;
use crate::transform::{all_permutations, all_transformations, Transformation};

/// Published counts for degree 3: row `r` is rank `r + 1`, column `c` is
/// output size `c + 1`.
pub const PUBLISHED_GRID: [[usize; 7]; 5] = [
    [7, 3, 1, 0, 0, 0, 0],
    [0, 32, 25, 11, 3, 1, 0],
    [0, 0, 38, 50, 23, 9, 2],
    [0, 0, 0, 23, 28, 6, 6],
    [0, 0, 0, 0, 5, 7, 2],
];

/// One conjugacy class of subsemigroups.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubsemigroupClass {
    /// Lexicographically least conjugate, elements sorted.
    pub representative: Vec<Transformation>,
    /// Number of distinct subsemigroups in the class.
    pub orbit_size: usize,
}

/// `T_n` in lexicographic order with its multiplication table.
struct FullMonoid {
    elements: Vec<Transformation>,
    table: Vec<u8>,
    /// `conjugation[p][i]`: index of the conjugate of element `i` by permutation `p`.
    conjugation: Vec<Vec<u8>>,
}

impl FullMonoid {
    fn new(degree: usize) -> Self {
        let elements: Vec<Transformation> = all_transformations(degree).collect();
        let m = elements.len();
        let mut table = Vec::with_capacity(m * m);
        for a in &elements {
            for b in &elements {
                table.push((a * b).lex_index() as u8);
            }
        }
        let conjugation = all_permutations(degree)
            .iter()
            .map(|p| {
                elements
                    .iter()
                    .map(|f| f.conjugate(p).expect("same degree").lex_index() as u8)
                    .collect()
            })
            .collect();
        Self {
            elements,
            table,
            conjugation,
        }
    }

    fn len(&self) -> usize {
        self.elements.len()
    }

    fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.len() + b] as usize
    }

    /// Closure of `mask ∪ {g}` where `mask` is already closed.
    fn extend(&self, mask: u32, g: usize) -> u32 {
        let mut members: Vec<usize> = (0..self.len()).filter(|&i| mask >> i & 1 == 1).collect();
        let mut mask = mask;
        let mut queue = vec![g];
        while let Some(x) = queue.pop() {
            if mask >> x & 1 == 1 {
                continue;
            }
            mask |= 1 << x;
            members.push(x);
            for &y in &members {
                for p in [self.mul(x, y), self.mul(y, x)] {
                    if mask >> p & 1 == 0 {
                        queue.push(p);
                    }
                }
            }
        }
        mask
    }

    fn conjugate_mask(&self, p: usize, mask: u32) -> u32 {
        (0..self.len())
            .filter(|&i| mask >> i & 1 == 1)
            .fold(0, |acc, i| acc | 1 << self.conjugation[p][i])
    }

    /// Lexicographically least sorted index list among the conjugates.
    fn canonical(&self, mask: u32) -> u32 {
        (0..self.conjugation.len())
            .map(|p| self.conjugate_mask(p, mask))
            .min_by_key(|&m| sorted_indices(m))
            .expect("at least the identity permutation")
    }

    fn orbit_size(&self, mask: u32) -> usize {
        (0..self.conjugation.len())
            .map(|p| self.conjugate_mask(p, mask))
            .collect::<HashSet<_>>()
            .len()
    }
}

fn sorted_indices(mask: u32) -> Vec<u32> {
    (0..32).filter(|&i| mask >> i & 1 == 1).collect()
}

/// Every nonempty subsemigroup of `T_degree` (degree ≤ 3), one per conjugacy
/// class, grown depth-first from singleton closures by adding one element at
/// a time. `iteration_order` fixes the order in which elements (by
/// lexicographic index) are tried; `None` means lexicographic.
pub fn enumerate_subsemigroups(
    degree: usize,
    iteration_order: Option<&[usize]>,
) -> Result<Vec<SubsemigroupClass>> {
    if !(1..=3).contains(&degree) {
        return invalid(format!("subsemigroup enumeration supports degree 1 to 3, got {degree}"));
    }
    let monoid = FullMonoid::new(degree);
    let m = monoid.len();
    let order: Vec<usize> = match iteration_order {
        Some(o) => {
            let mut check = o.to_vec();
            check.sort_unstable();
            if check != (0..m).collect::<Vec<_>>() {
                return invalid("iteration order must be a permutation of the element indices");
            }
            o.to_vec()
        }
        None => (0..m).collect(),
    };

    let mut seen: HashSet<u32> = HashSet::new();
    let mut canon: HashSet<u32> = HashSet::new();
    let mut stack: Vec<u32> = Vec::new();
    for &g in &order {
        let start = monoid.extend(0, g);
        if seen.insert(start) {
            stack.push(start);
        }
        while let Some(mask) = stack.pop() {
            canon.insert(monoid.canonical(mask));
            for &h in &order {
                if mask >> h & 1 == 0 {
                    let next = monoid.extend(mask, h);
                    if seen.insert(next) {
                        stack.push(next);
                    }
                }
            }
        }
    }

    let mut classes: Vec<u32> = canon.into_iter().collect();
    classes.sort_by_key(|&m| sorted_indices(m));
    Ok(classes
        .into_iter()
        .map(|mask| SubsemigroupClass {
            representative: sorted_indices(mask)
                .into_iter()
                .map(|i| monoid.elements[i as usize].clone())
                .collect(),
            orbit_size: monoid.orbit_size(mask),
        })
        .collect())
}

pub fn enumerate_subsemigroups_t3() -> Vec<SubsemigroupClass> {
    enumerate_subsemigroups(3, None).expect("degree 3 is supported")
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Table1Row {
    pub rank: usize,
    pub output_size_histogram: BTreeMap<usize, usize>,
    pub class_count: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassResult {
    pub representative: Vec<Transformation>,
    pub size: usize,
    pub rank: usize,
    pub output_size: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CellDiff {
    pub rank: usize,
    pub output_size: usize,
    pub computed: usize,
    pub published: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Table1 {
    pub direction: Direction,
    pub class_count: usize,
    pub rows: Vec<Table1Row>,
    pub classes: Vec<ClassResult>,
    pub mean_output_size: f64,
}

impl Table1 {
    /// Class count per rank, starting at rank 1.
    pub fn rank_distribution(&self) -> Vec<usize> {
        let max = self.rows.iter().map(|r| r.rank).max().unwrap_or(0);
        (1..=max)
            .map(|r| self.rows.iter().find(|row| row.rank == r).map_or(0, |row| row.class_count))
            .collect()
    }

    pub fn cell(&self, rank: usize, output_size: usize) -> usize {
        self.rows
            .iter()
            .find(|r| r.rank == rank)
            .and_then(|r| r.output_size_histogram.get(&output_size).copied())
            .unwrap_or(0)
    }

    /// Cells where the computed count differs from the published grid.
    pub fn diff_against_published(&self) -> Vec<CellDiff> {
        let max_rank = self.rows.iter().map(|r| r.rank).max().unwrap_or(0).max(PUBLISHED_GRID.len());
        let max_out = self
            .classes
            .iter()
            .map(|c| c.output_size)
            .max()
            .unwrap_or(0)
            .max(PUBLISHED_GRID[0].len());
        let mut out = Vec::new();
        for rank in 1..=max_rank {
            for output_size in 1..=max_out {
                let published = PUBLISHED_GRID
                    .get(rank - 1)
                    .and_then(|row| row.get(output_size - 1))
                    .copied()
                    .unwrap_or(0);
                let computed = self.cell(rank, output_size);
                if computed != published {
                    out.push(CellDiff {
                        rank,
                        output_size,
                        computed,
                        published,
                    });
                }
            }
        }
        out
    }
}

/// Rank and SmallGeneratingSet output size for every class of subsemigroups
/// of `T_3`. Classes are processed on `workers` threads; results keep class
/// order.
pub fn table1(direction: Direction, workers: usize) -> Result<Table1> {
    let classes = enumerate_subsemigroups_t3();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| Error::ResourceLimit(format!("thread pool: {e}")))?;
    let results: Vec<ClassResult> = pool.install(|| {
        classes
            .par_iter()
            .map(|class| -> Result<ClassResult> {
                let table = SemigroupTable::closure(&class.representative)?;
                Ok(ClassResult {
                    representative: class.representative.clone(),
                    size: table.len(),
                    rank: semigroup_rank(&table, DEFAULT_RANK_CEILING)?,
                    output_size: small_generating_set(&table, direction)?.size,
                })
            })
            .collect::<Result<Vec<_>>>()
    })?;

    let mut rows: BTreeMap<usize, Table1Row> = BTreeMap::new();
    for r in &results {
        let row = rows.entry(r.rank).or_insert_with(|| Table1Row {
            rank: r.rank,
            output_size_histogram: BTreeMap::new(),
            class_count: 0,
        });
        *row.output_size_histogram.entry(r.output_size).or_default() += 1;
        row.class_count += 1;
    }
    let mean_output_size =
        results.iter().map(|r| r.output_size as f64).sum::<f64>() / results.len() as f64;
    Ok(Table1 {
        direction,
        class_count: results.len(),
        rows: rows.into_values().collect(),
        classes: results,
        mean_output_size,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semigroup::generated_size;

    /// Subsemigroups of `T_2` by checking every nonempty subset for closure.
    fn brute_force_subsemigroups(degree: usize) -> HashSet<Vec<Transformation>> {
        let all: Vec<Transformation> = all_transformations(degree).collect();
        let mut out = HashSet::new();
        for mask in 1u32..(1 << all.len()) {
            let set: Vec<Transformation> =
                (0..all.len()).filter(|&i| mask >> i & 1 == 1).map(|i| all[i].clone()).collect();
            if set.iter().all(|a| set.iter().all(|b| set.contains(&(a * b)))) {
                out.insert(set);
            }
        }
        out
    }

    #[test]
    fn degree_two_matches_subset_oracle() {
        let subs = brute_force_subsemigroups(2);
        let classes = enumerate_subsemigroups(2, None).unwrap();
        assert_eq!(classes.iter().map(|c| c.orbit_size).sum::<usize>(), subs.len());
        for c in &classes {
            assert!(subs.contains(&c.representative));
        }
    }

    #[test]
    fn degree_three_counts() {
        let classes = enumerate_subsemigroups_t3();
        assert_eq!(classes.len(), 282);
        assert_eq!(classes.iter().map(|c| c.orbit_size).sum::<usize>(), 1298);
        for c in &classes {
            assert_eq!(generated_size(&c.representative).unwrap(), c.representative.len());
        }
    }

    #[test]
    fn iteration_order_does_not_matter() {
        let forward = enumerate_subsemigroups_t3();
        let reversed: Vec<usize> = (0..27).rev().collect();
        assert_eq!(enumerate_subsemigroups(3, Some(&reversed)).unwrap(), forward);
        assert!(enumerate_subsemigroups(3, Some(&[0, 1])).is_err());
        assert!(enumerate_subsemigroups(4, None).is_err());
    }

    #[test]
    fn table_rows_are_consistent() {
        let t = table1(Direction::Descending, 2).unwrap();
        assert_eq!(t.class_count, 282);
        assert_eq!(t.rank_distribution().iter().sum::<usize>(), 282);
        for row in &t.rows {
            assert_eq!(row.output_size_histogram.values().sum::<usize>(), row.class_count);
            assert!(row.output_size_histogram.keys().all(|&k| k >= row.rank));
        }
    }
}
