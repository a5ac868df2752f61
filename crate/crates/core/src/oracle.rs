//! Exhaustive backtracking search over all (partition-respecting) bijections.
//!
//! Ground truth for small instances: labels are assigned depth-first in an
//! order that completes target weights early, and a branch is pruned as soon
//! as a fully determined weight violates the requested kind. An exhausted
//! search is therefore a proof of nonexistence. Intended for universes of a
//! dozen elements or so; a node-expansion budget guards anything larger.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::graph::{Element, Graph};
use crate::labelling::{
    contributors, detect_progression, feasible_magic_interval, DomainSelector, Label, LabelKind,
    Labelling, LabellingError, TargetKind, Weight,
};

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum OracleMode {
    /// Stop at the first labelling found.
    First,
    /// Count every labelling of the requested kind.
    Count,
    /// Collect labellings up to a limit.
    Enumerate { limit: usize },
}

#[derive(Clone, Debug)]
pub struct OracleQuery {
    pub selector: DomainSelector,
    pub task: TargetKind,
    pub mode: OracleMode,
    /// Cap on label-placement attempts; `None` is unlimited.
    pub budget: Option<u64>,
}

#[derive(Clone, Debug)]
pub enum OracleOutcome {
    /// One or more labellings; `complete` is true when the whole space was
    /// explored (an enumeration that hit its limit is incomplete).
    Found {
        labellings: Vec<Labelling>,
        complete: bool,
    },
    Count(u64),
    /// The full space contains no labelling of the requested kind.
    ExhaustedNone,
}

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("node-expansion budget exhausted after {expanded} expansions")]
    BudgetExceeded { expanded: u64 },
    #[error(transparent)]
    Labelling(#[from] LabellingError),
}

/// Census key: the realizable parameter of a labelling family.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub enum CensusKey {
    Magic(Weight),
    Progression { a: Weight, d: Weight },
}

/// Kind-specific acceptance state for completed weights. `complete_weight`
/// must not mutate state when it rejects, so a rejected application can be
/// rolled back without touching the goal.
enum Goal {
    Magic { k: Weight },
    Antimagic { seen: BTreeMap<Weight, u32> },
    Progression { a: Weight, d: Weight, slots: Vec<bool> },
    /// Visit every bijection; no weight pruning.
    All,
}

impl Goal {
    fn complete_weight(&mut self, w: Weight) -> bool {
        match self {
            Goal::Magic { k } => w == *k,
            Goal::Antimagic { seen } => match seen.get(&w) {
                Some(_) => false,
                None => {
                    seen.insert(w, 1);
                    true
                }
            },
            Goal::Progression { a, d, slots } => {
                if w < *a {
                    return false;
                }
                if *d == 0 {
                    return w == *a;
                }
                let offset = w - *a;
                if offset % *d != 0 {
                    return false;
                }
                let slot = (offset / *d) as usize;
                if slot >= slots.len() || slots[slot] {
                    return false;
                }
                slots[slot] = true;
                true
            }
            Goal::All => true,
        }
    }

    fn uncomplete_weight(&mut self, w: Weight) {
        match self {
            Goal::Magic { .. } | Goal::All => {}
            Goal::Antimagic { seen } => {
                seen.remove(&w);
            }
            Goal::Progression { a, d, slots } => {
                if *d > 0 {
                    slots[((w - *a) / *d) as usize] = false;
                }
            }
        }
    }
}

struct Searcher<'g> {
    g: &'g Graph,
    selector: DomainSelector,
    super_labelling: bool,
    /// Universe indices in assignment order (most influential first).
    order: Vec<usize>,
    /// Whether the universe element at an index is a vertex.
    is_vertex: Vec<bool>,
    /// Target ids whose weight includes the label of each universe element.
    influences: Vec<Vec<usize>>,
    partial_weight: Vec<Weight>,
    remaining: Vec<usize>,
    labels: Vec<Label>,
    used: Vec<bool>,
    vertex_label_limit: Label,
    n: usize,
    expanded: u64,
    budget: Option<u64>,
}

impl<'g> Searcher<'g> {
    fn new(g: &'g Graph, q: &OracleQuery) -> Result<Searcher<'g>, OracleError> {
        if q.selector.is_empty() {
            return Err(LabellingError::EmptySelector.into());
        }
        if q.task.super_labelling && !q.selector.vertices {
            return Err(LabellingError::SuperWithoutVertices.into());
        }
        let target_count = g.class_count(q.task.target);
        if target_count == 0 {
            return Err(LabellingError::EmptyTargetClass(q.task.target).into());
        }

        let universe = q.selector.universe(g);
        let n = universe.len();
        let contributor_sets = contributors(g, q.selector, q.task.target);
        let mut influences = vec![Vec::new(); n];
        for (t, set) in contributor_sets.iter().enumerate() {
            for &u in set {
                influences[u].push(t);
            }
        }

        // Assign the most influential elements first so weights complete
        // early and pruning bites.
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&u| (std::cmp::Reverse(influences[u].len()), u));

        let is_vertex = universe
            .iter()
            .map(|el| matches!(el, Element::Vertex(_)))
            .collect();

        Ok(Searcher {
            g,
            selector: q.selector,
            super_labelling: q.task.super_labelling,
            order,
            is_vertex,
            influences,
            partial_weight: vec![0; target_count],
            remaining: contributor_sets.iter().map(Vec::len).collect(),
            labels: vec![0; n],
            used: vec![false; n + 1],
            vertex_label_limit: g.vertex_count() as Label,
            n,
            expanded: 0,
            budget: q.budget,
        })
    }

    fn label_range(&self, universe_index: usize) -> (Label, Label) {
        if !self.super_labelling {
            (1, self.n as Label)
        } else if self.is_vertex[universe_index] {
            (1, self.vertex_label_limit)
        } else {
            (self.vertex_label_limit + 1, self.n as Label)
        }
    }

    /// Adds `label` into the weights of every target influenced by `u` and
    /// checks each weight that becomes final. Rolls itself back and returns
    /// false when a final weight violates the goal.
    fn apply_label(&mut self, u: usize, label: Label, goal: &mut Goal) -> bool {
        for pos in 0..self.influences[u].len() {
            let t = self.influences[u][pos];
            self.partial_weight[t] += label;
            self.remaining[t] -= 1;
            if self.remaining[t] == 0 && !goal.complete_weight(self.partial_weight[t]) {
                // failed position: the goal was left unchanged
                self.remaining[t] += 1;
                self.partial_weight[t] -= label;
                for back in (0..pos).rev() {
                    let tb = self.influences[u][back];
                    if self.remaining[tb] == 0 {
                        goal.uncomplete_weight(self.partial_weight[tb]);
                    }
                    self.remaining[tb] += 1;
                    self.partial_weight[tb] -= label;
                }
                return false;
            }
        }
        true
    }

    fn unapply_label(&mut self, u: usize, label: Label, goal: &mut Goal) {
        for pos in (0..self.influences[u].len()).rev() {
            let t = self.influences[u][pos];
            if self.remaining[t] == 0 {
                goal.uncomplete_weight(self.partial_weight[t]);
            }
            self.remaining[t] += 1;
            self.partial_weight[t] -= label;
        }
    }

    /// Depth-first search over assignment positions. `on_leaf` returns false
    /// to stop the whole search; the return value mirrors that.
    fn dfs(
        &mut self,
        depth: usize,
        goal: &mut Goal,
        on_leaf: &mut dyn FnMut(&Searcher) -> bool,
    ) -> Result<bool, OracleError> {
        if depth == self.order.len() {
            return Ok(on_leaf(self));
        }
        let u = self.order[depth];
        let (lo, hi) = self.label_range(u);
        for label in lo..=hi {
            if self.used[label as usize] {
                continue;
            }
            self.expanded += 1;
            if let Some(budget) = self.budget {
                if self.expanded > budget {
                    return Err(OracleError::BudgetExceeded {
                        expanded: self.expanded,
                    });
                }
            }
            self.used[label as usize] = true;
            self.labels[u] = label;
            if self.apply_label(u, label, goal) {
                let keep_going = self.dfs(depth + 1, goal, on_leaf)?;
                self.unapply_label(u, label, goal);
                self.labels[u] = 0;
                self.used[label as usize] = false;
                if !keep_going {
                    return Ok(false);
                }
            } else {
                self.labels[u] = 0;
                self.used[label as usize] = false;
            }
        }
        Ok(true)
    }

    fn current_labelling(&self) -> Labelling {
        let assignment: Vec<_> = self
            .selector
            .universe(self.g)
            .into_iter()
            .enumerate()
            .map(|(i, el)| (el, self.labels[i]))
            .collect();
        Labelling::from_assignment(self.g, self.selector, &assignment)
            .expect("search state is a valid assignment")
    }
}

fn goal_for(kind: LabelKind, target_count: usize, magic_k: Option<Weight>) -> Goal {
    match kind {
        LabelKind::Magic => Goal::Magic {
            k: magic_k.expect("magic goal needs a constant"),
        },
        LabelKind::Antimagic => Goal::Antimagic {
            seen: BTreeMap::new(),
        },
        LabelKind::Progression { a, d } => Goal::Progression {
            a,
            d,
            slots: vec![false; target_count],
        },
    }
}

/// Exhaustive search for labellings of the requested kind.
///
/// For magic tasks the constant is swept over its crude feasible interval.
/// `ExhaustedNone` is a proof that no labelling of the kind exists for the
/// instance; running out of budget is an error, never a proof.
pub fn oracle_search(g: &Graph, q: &OracleQuery) -> Result<OracleOutcome, OracleError> {
    let limit = match q.mode {
        OracleMode::First => Some(1),
        OracleMode::Enumerate { limit } => Some(limit),
        OracleMode::Count => None,
    };

    let mut searcher = Searcher::new(g, q)?;
    let target_count = g.class_count(q.task.target);
    let mut found: Vec<Labelling> = Vec::new();
    let mut count = 0u64;
    let mut complete = true;

    let sweep: Vec<Option<Weight>> = match q.task.kind {
        LabelKind::Magic => match feasible_magic_interval(g, q.selector, q.task.target) {
            Some((lo, hi)) => (lo..=hi).map(Some).collect(),
            None => Vec::new(),
        },
        _ => vec![None],
    };

    for k in sweep {
        let mut goal = goal_for(q.task.kind, target_count, k);
        let mut hit_limit = false;
        searcher.dfs(0, &mut goal, &mut |s| {
            count += 1;
            if limit.is_some() {
                found.push(s.current_labelling());
            }
            match limit {
                Some(max) if found.len() >= max => {
                    hit_limit = true;
                    false
                }
                _ => true,
            }
        })?;
        if hit_limit {
            complete = false;
            break;
        }
    }

    match q.mode {
        OracleMode::Count => Ok(OracleOutcome::Count(count)),
        _ if found.is_empty() => Ok(OracleOutcome::ExhaustedNone),
        _ => Ok(OracleOutcome::Found {
            labellings: found,
            complete,
        }),
    }
}

/// Census of realizable parameters: which magic constants (or which (a,d)
/// progressions) are achieved, and by how many labellings.
///
/// Magic tasks are counted constant-by-constant with pruning. For the
/// antimagic and progression kinds every bijection is enumerated and
/// classified by its detected progression; an antimagic query censuses only
/// genuine progressions (d >= 1) while a progression query also includes the
/// degenerate d = 0 family.
pub fn achievable_values(
    g: &Graph,
    q: &OracleQuery,
) -> Result<BTreeMap<CensusKey, u64>, OracleError> {
    let mut census: BTreeMap<CensusKey, u64> = BTreeMap::new();
    let mut searcher = Searcher::new(g, q)?;
    match q.task.kind {
        LabelKind::Magic => {
            let Some((lo, hi)) = feasible_magic_interval(g, q.selector, q.task.target) else {
                return Ok(census);
            };
            for k in lo..=hi {
                let mut goal = goal_for(LabelKind::Magic, g.class_count(q.task.target), Some(k));
                let mut count = 0u64;
                searcher.dfs(0, &mut goal, &mut |_| {
                    count += 1;
                    true
                })?;
                if count > 0 {
                    census.insert(CensusKey::Magic(k), count);
                }
            }
        }
        LabelKind::Antimagic | LabelKind::Progression { .. } => {
            let min_step = match q.task.kind {
                LabelKind::Antimagic => 1,
                _ => 0,
            };
            let mut goal = Goal::All;
            let mut entries: Vec<(Weight, Weight)> = Vec::new();
            searcher.dfs(0, &mut goal, &mut |s| {
                if let Some((a, d)) = detect_progression(&s.partial_weight) {
                    if d >= min_step {
                        entries.push((a, d));
                    }
                }
                true
            })?;
            for (a, d) in entries {
                *census.entry(CensusKey::Progression { a, d }).or_insert(0) += 1;
            }
        }
    }
    Ok(census)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators;
    use crate::graph::ElementClass;
    use crate::labelling::verify;

    const TOTAL: DomainSelector = DomainSelector::new(true, true, false);
    const EDGES_ONLY: DomainSelector = DomainSelector::new(false, true, false);

    fn query(selector: DomainSelector, task: TargetKind, mode: OracleMode) -> OracleQuery {
        OracleQuery {
            selector,
            task,
            mode,
            budget: Some(50_000_000),
        }
    }

    #[test]
    fn k2_total_edge_magic_count_is_six() {
        let g = generators::complete_graph(2).unwrap();
        let task = TargetKind {
            target: ElementClass::Edge,
            kind: LabelKind::Magic,
            super_labelling: false,
        };
        let out = oracle_search(&g, &query(TOTAL, task, OracleMode::Count)).unwrap();
        assert!(matches!(out, OracleOutcome::Count(6)));

        let census = achievable_values(&g, &query(TOTAL, task, OracleMode::Count)).unwrap();
        assert_eq!(census.len(), 1);
        assert_eq!(census[&CensusKey::Magic(6)], 6);
    }

    #[test]
    fn k2_vertex_antimagic_from_edge_labels_is_impossible() {
        let g = generators::complete_graph(2).unwrap();
        let task = TargetKind {
            target: ElementClass::Vertex,
            kind: LabelKind::Antimagic,
            super_labelling: false,
        };
        let out = oracle_search(&g, &query(EDGES_ONLY, task, OracleMode::First)).unwrap();
        assert!(matches!(out, OracleOutcome::ExhaustedNone));
    }

    #[test]
    fn c3_total_edge_magic_census_regression() {
        // Frozen from brute force over all 720 bijections of C3's six
        // elements; recomputed independently in tests/brute_force.rs.
        let g = generators::cycle(3, false).unwrap();
        let task = TargetKind {
            target: ElementClass::Edge,
            kind: LabelKind::Magic,
            super_labelling: false,
        };
        let out = oracle_search(&g, &query(TOTAL, task, OracleMode::Count)).unwrap();
        assert!(matches!(out, OracleOutcome::Count(24)));

        let census = achievable_values(&g, &query(TOTAL, task, OracleMode::Count)).unwrap();
        let expected: BTreeMap<CensusKey, u64> = [
            (CensusKey::Magic(9), 6),
            (CensusKey::Magic(10), 6),
            (CensusKey::Magic(11), 6),
            (CensusKey::Magic(12), 6),
        ]
        .into_iter()
        .collect();
        assert_eq!(census, expected);
    }

    #[test]
    fn census_counts_sum_to_search_count() {
        let g = generators::wheel(3, false).unwrap(); // K4
        let task = TargetKind {
            target: ElementClass::Vertex,
            kind: LabelKind::Magic,
            super_labelling: false,
        };
        let q = query(TOTAL, task, OracleMode::Count);
        let total = match oracle_search(&g, &q).unwrap() {
            OracleOutcome::Count(c) => c,
            other => panic!("unexpected outcome {other:?}"),
        };
        let census = achievable_values(&g, &q).unwrap();
        assert_eq!(census.values().sum::<u64>(), total);
        // Frozen: K4 realizes exactly the vertex-magic constants 20, 21,
        // 23, 24 across 336 labellings.
        let keys: Vec<_> = census.keys().copied().collect();
        assert_eq!(
            keys,
            vec![
                CensusKey::Magic(20),
                CensusKey::Magic(21),
                CensusKey::Magic(23),
                CensusKey::Magic(24),
            ]
        );
        assert_eq!(total, 336);
    }

    #[test]
    fn found_labellings_pass_verification() {
        let g = generators::wheel(3, false).unwrap();
        let task = TargetKind {
            target: ElementClass::Vertex,
            kind: LabelKind::Magic,
            super_labelling: false,
        };
        let out =
            oracle_search(&g, &query(TOTAL, task, OracleMode::Enumerate { limit: 5 })).unwrap();
        let OracleOutcome::Found { labellings, complete } = out else {
            panic!("expected labellings");
        };
        assert_eq!(labellings.len(), 5);
        assert!(!complete);
        for l in &labellings {
            assert!(verify(&g, l, TOTAL, task).unwrap().accepted());
        }
    }

    #[test]
    fn budget_exceeded_is_an_error_not_a_proof() {
        let g = generators::complete_graph(4).unwrap();
        let task = TargetKind {
            target: ElementClass::Vertex,
            kind: LabelKind::Magic,
            super_labelling: false,
        };
        let q = OracleQuery {
            selector: TOTAL,
            task,
            mode: OracleMode::Count,
            budget: Some(10),
        };
        let err = oracle_search(&g, &q).unwrap_err();
        assert!(matches!(err, OracleError::BudgetExceeded { expanded } if expanded > 10));
    }

    #[test]
    fn progression_search_on_c3_edge_labels() {
        let g = generators::cycle(3, false).unwrap();
        let task = TargetKind {
            target: ElementClass::Vertex,
            kind: LabelKind::Progression { a: 3, d: 1 },
            super_labelling: false,
        };
        let out = oracle_search(&g, &query(EDGES_ONLY, task, OracleMode::Count)).unwrap();
        let OracleOutcome::Count(count) = out else { panic!() };
        // all six bijections of {1,2,3} give vertex weights {3,4,5}
        assert_eq!(count, 6);
    }

    #[test]
    fn super_search_finds_verified_labellings() {
        let g = generators::cycle(3, false).unwrap();
        let task = TargetKind {
            target: ElementClass::Edge,
            kind: LabelKind::Magic,
            super_labelling: true,
        };
        let out =
            oracle_search(&g, &query(TOTAL, task, OracleMode::Enumerate { limit: 100 })).unwrap();
        if let OracleOutcome::Found { labellings, .. } = out {
            assert!(!labellings.is_empty());
            for l in &labellings {
                assert!(verify(&g, l, TOTAL, task).unwrap().accepted());
            }
        }
    }

    #[test]
    fn antimagic_census_excludes_zero_step() {
        let g = generators::cycle(3, false).unwrap();
        let task = TargetKind {
            target: ElementClass::Vertex,
            kind: LabelKind::Antimagic,
            super_labelling: false,
        };
        let census = achievable_values(&g, &query(EDGES_ONLY, task, OracleMode::Count)).unwrap();
        assert!(census.keys().all(|k| matches!(k, CensusKey::Progression { d, .. } if *d >= 1)));
        // every C3 edge bijection yields the progression (3, 1)
        assert_eq!(census[&CensusKey::Progression { a: 3, d: 1 }], 6);
    }
}
