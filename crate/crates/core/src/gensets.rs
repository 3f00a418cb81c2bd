//! Greedy and SmallGeneratingSet, irredundancy, exact rank, and ubiquity.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::greens::{d_classes, ordered_elements, Direction};
use crate::semigroup::{generated_size, SemigroupTable};
use crate::subset::{IncrementalClosure, SmallSemigroup};
use crate::transform::{common_degree, Transformation};

pub const DEFAULT_RANK_CEILING: usize = 64;
pub const DEFAULT_IRREDUNDANT_CEILING: usize = 32;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    Greedy,
    Smallgen,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ElementOrder {
    Descending,
    Ascending,
    Given,
}

impl From<Direction> for ElementOrder {
    fn from(d: Direction) -> Self {
        match d {
            Direction::Descending => ElementOrder::Descending,
            Direction::Ascending => ElementOrder::Ascending,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GenSetReport {
    pub generating_set: Vec<Transformation>,
    pub size: usize,
    pub is_irredundant: bool,
    pub semigroup_size: usize,
    pub algorithm: Algorithm,
    pub element_order: ElementOrder,
}

/// Scans `elements` in order and keeps each one not generated by those kept
/// so far.
///
/// `elements` must be exactly the element set of a semigroup. A product that
/// leaves the list is reported as invalid input.
pub fn greedy(elements: &[Transformation]) -> Result<GenSetReport> {
    let generating_set = greedy_indices(elements)?
        .into_iter()
        .map(|i| elements[i].clone())
        .collect::<Vec<_>>();
    let mut distinct = elements.to_vec();
    distinct.sort();
    distinct.dedup();
    Ok(GenSetReport {
        size: generating_set.len(),
        is_irredundant: is_irredundant(&generating_set)?,
        semigroup_size: distinct.len(),
        generating_set,
        algorithm: Algorithm::Greedy,
        element_order: ElementOrder::Given,
    })
}

fn greedy_indices(elements: &[Transformation]) -> Result<Vec<usize>> {
    common_degree(elements)?;
    let mut index: HashMap<&Transformation, usize> = HashMap::with_capacity(elements.len());
    for (i, f) in elements.iter().enumerate() {
        index.entry(f).or_insert(i);
    }
    let mul = |a: usize, b: usize| index.get(&elements[a].compose_unchecked(&elements[b])).copied();
    let mut closure = IncrementalClosure::new(elements.len());
    for (i, f) in elements.iter().enumerate() {
        let canonical = index[f];
        if !closure.contains(canonical) {
            closure.add(canonical, mul).map_err(|e| {
                Error::InvalidInput(format!(
                    "list is not closed: {} * {} is missing",
                    elements[e.left], elements[e.right]
                ))
            })?;
            debug_assert_eq!(canonical, i);
        }
    }
    Ok(closure.generators().to_vec())
}

/// Greedy over the elements listed class by class along the J-order.
pub fn small_generating_set(table: &SemigroupTable, direction: Direction) -> Result<GenSetReport> {
    let decomposition = d_classes(table);
    let list = ordered_elements(table, &decomposition, direction);
    let mut report = greedy(&list)?;
    report.algorithm = Algorithm::Smallgen;
    report.element_order = direction.into();
    Ok(report)
}

/// True iff no member can be dropped without shrinking the generated semigroup.
pub fn is_irredundant(generators: &[Transformation]) -> Result<bool> {
    let full = generated_size(generators)?;
    for i in 0..generators.len() {
        let rest: Vec<Transformation> = generators
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .map(|(_, f)| f.clone())
            .collect();
        if !rest.is_empty() && generated_size(&rest)? == full {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Every triple `(x, y, z)` from the set, repetitions included, has
/// `rank(xyz) < rank(y)`.
pub fn satisfies_sufficient_condition(generators: &[Transformation]) -> Result<bool> {
    common_degree(generators)?;
    let ranks: Vec<usize> = generators.iter().map(Transformation::rank).collect();
    for x in generators {
        for (y, &rank_y) in generators.iter().zip(&ranks) {
            let xy = x.compose_unchecked(y);
            // rank(xyz) ≤ rank(xy) ≤ rank(y): nothing to check past this point.
            if xy.rank() < rank_y {
                continue;
            }
            for z in generators {
                if xy.compose_unchecked(z).rank() >= rank_y {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// Exact size of a smallest generating set.
///
/// Indecomposable elements belong to every generating set; the remaining
/// members are searched by increasing count, skipping any candidate already
/// generated by the members chosen before it.
pub fn semigroup_rank(table: &SemigroupTable, ceiling: usize) -> Result<usize> {
    let small = table.small(ceiling)?;
    Ok(smallest_generating_indices(&small).len())
}

pub fn smallest_generating_set(table: &SemigroupTable, ceiling: usize) -> Result<Vec<Transformation>> {
    let small = table.small(ceiling)?;
    Ok(smallest_generating_indices(&small)
        .into_iter()
        .map(|i| table.elements()[i].clone())
        .collect())
}

fn smallest_generating_indices(s: &SmallSemigroup) -> Vec<usize> {
    let forced = s.indecomposables();
    let base = s.closure_of(&forced);
    if base.len() == s.len() {
        return forced;
    }
    let candidates: Vec<usize> = (0..s.len()).filter(|&e| !base.contains(e)).collect();

    fn search(
        s: &SmallSemigroup,
        candidates: &[usize],
        start: usize,
        remaining: usize,
        closure: &IncrementalClosure,
        chosen: &mut Vec<usize>,
    ) -> bool {
        if remaining == 0 {
            return closure.len() == s.len();
        }
        for pos in start..candidates.len() {
            if candidates.len() - pos < remaining {
                break;
            }
            let c = candidates[pos];
            if closure.contains(c) {
                continue;
            }
            let mut next = closure.clone();
            s.extend(&mut next, c);
            chosen.push(c);
            if search(s, candidates, pos + 1, remaining - 1, &next, chosen) {
                return true;
            }
            chosen.pop();
        }
        false
    }

    for extra in 1..=candidates.len() {
        let mut chosen = Vec::new();
        if search(s, &candidates, 0, extra, &base, &mut chosen) {
            let mut out = forced.clone();
            out.extend(chosen);
            return out;
        }
    }
    unreachable!("the whole element set generates")
}

/// All irredundant generating sets, each sorted, listed in lexicographic order.
///
/// Depth-first over elements in transformation order. Subsets of an
/// irredundant set are independent (no member generated by the others), so
/// only independent partial sets are extended; a partial set that already
/// generates is recorded and not extended.
pub fn enumerate_irredundant_generating_sets(
    table: &SemigroupTable,
    ceiling: usize,
) -> Result<Vec<Vec<Transformation>>> {
    let small = table.small(ceiling)?;
    let mut lex: Vec<usize> = (0..small.len()).collect();
    lex.sort_by(|&a, &b| table.elements()[a].cmp(&table.elements()[b]));

    let forced = small.indecomposables();
    let base = small.closure_of(&forced);
    let candidates: Vec<usize> = lex.into_iter().filter(|e| !forced.contains(e)).collect();

    let mut found: Vec<Vec<usize>> = Vec::new();
    if base.len() == small.len() {
        found.push(forced.clone());
    } else {
        let mut chosen = forced.clone();
        irredundant_dfs(&small, &candidates, 0, &base, &mut chosen, &mut found);
    }

    let mut out: Vec<Vec<Transformation>> = found
        .into_iter()
        .map(|set| {
            let mut v: Vec<Transformation> =
                set.into_iter().map(|i| table.elements()[i].clone()).collect();
            v.sort();
            v
        })
        .collect();
    out.sort();
    out.dedup();
    for set in &out {
        debug_assert!(is_irredundant(set).unwrap_or(false));
    }
    Ok(out)
}

fn irredundant_dfs(
    s: &SmallSemigroup,
    candidates: &[usize],
    start: usize,
    closure: &IncrementalClosure,
    chosen: &mut Vec<usize>,
    found: &mut Vec<Vec<usize>>,
) {
    for pos in start..candidates.len() {
        let c = candidates[pos];
        if closure.contains(c) {
            continue;
        }
        chosen.push(c);
        let independent = (0..chosen.len() - 1).all(|i| {
            let others: Vec<usize> = chosen
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, &e)| e)
                .collect();
            !s.closure_of(&others).contains(chosen[i])
        });
        if independent {
            let mut next = closure.clone();
            s.extend(&mut next, c);
            if next.len() == s.len() {
                found.push(chosen.clone());
            } else {
                irredundant_dfs(s, candidates, pos + 1, &next, chosen, found);
            }
        }
        chosen.pop();
    }
}

/// All irredundant generating sets have the same size.
pub fn is_ubiquitous(table: &SemigroupTable, ceiling: usize) -> Result<bool> {
    let sets = enumerate_irredundant_generating_sets(table, ceiling)?;
    Ok(sets.windows(2).all(|w| w[0].len() == w[1].len()))
}

/// A generating set satisfying [`satisfies_sufficient_condition`], if any.
///
/// The condition passes to subsets, so it is enough to look among the
/// irredundant generating sets.
pub fn sufficient_generating_set(
    table: &SemigroupTable,
    ceiling: usize,
) -> Result<Option<Vec<Transformation>>> {
    for set in enumerate_irredundant_generating_sets(table, ceiling)? {
        if satisfies_sufficient_condition(&set)? {
            return Ok(Some(set));
        }
    }
    Ok(None)
}

/// Checks the inputs a generator list needs before it reaches a table.
pub fn validate_generators(generators: &[Transformation]) -> Result<usize> {
    if generators.is_empty() {
        return invalid("no generators given");
    }
    common_degree(generators)
}
