//! The three optimization functions the annealer minimizes, each zero exactly
//! when the corresponding labelling kind is reached, plus an incremental
//! evaluation path for label-swap proposals.
//!
//! All values are exact integers; nothing in the hot loop touches floating
//! point.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::graph::{Element, ElementClass, Graph};
use crate::labelling::{weights_of, Labelling, LabelKind, TargetKind, Weight};

/// Objective value. Wider than [`Weight`] so that sums of squared deviations
/// cannot overflow even on instances near the label-count ceiling.
pub type Value = u128;

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum ObjectiveError {
    #[error("target class {0} is empty")]
    EmptyTarget(ElementClass),
    #[error("progression objective requires a >= 1")]
    InvalidAnchor,
    #[error("cached state is stale: labelling generation {actual}, cache generation {expected}")]
    StaleCache { expected: u64, actual: u64 },
    #[error("a proposed swap is already pending; commit or roll back first")]
    PendingSwap,
    #[error("{0} is outside the labelled universe")]
    OutsideUniverse(Element),
}

/// Which objective family drives the search.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ObjectiveFamily {
    /// Sum of squared deviations from the ceiling-rounded mean weight;
    /// zero iff the labelling is magic on the target.
    MagicDeviation,
    /// Number of sort-adjacent equal weight pairs; zero iff antimagic.
    DuplicateCount,
    /// Squared anchor deviation plus squared sorted-gap deviations;
    /// zero iff the weights are exactly a, a+d, .., a+(|S|-1)d.
    ProgressionDeviation { a: Weight, d: Weight },
}

/// An objective family bound to a target class.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Objective {
    pub family: ObjectiveFamily,
    pub target: ElementClass,
}

impl Objective {
    pub fn magic(target: ElementClass) -> Objective {
        Objective {
            family: ObjectiveFamily::MagicDeviation,
            target,
        }
    }

    pub fn antimagic(target: ElementClass) -> Objective {
        Objective {
            family: ObjectiveFamily::DuplicateCount,
            target,
        }
    }

    pub fn progression(target: ElementClass, a: Weight, d: Weight) -> Result<Objective, ObjectiveError> {
        if a < 1 {
            return Err(ObjectiveError::InvalidAnchor);
        }
        Ok(Objective {
            family: ObjectiveFamily::ProgressionDeviation { a, d },
            target,
        })
    }

    /// The natural objective for a task: zero exactly when the task's kind
    /// check accepts.
    pub fn for_task(tk: TargetKind) -> Result<Objective, ObjectiveError> {
        match tk.kind {
            LabelKind::Magic => Ok(Objective::magic(tk.target)),
            LabelKind::Antimagic => Ok(Objective::antimagic(tk.target)),
            LabelKind::Progression { a, d } => Objective::progression(tk.target, a, d),
        }
    }

    /// Whether this objective searches for the same thing the task verifies.
    pub fn matches(&self, tk: TargetKind) -> bool {
        if self.target != tk.target {
            return false;
        }
        match (self.family, tk.kind) {
            (ObjectiveFamily::MagicDeviation, LabelKind::Magic) => true,
            (ObjectiveFamily::DuplicateCount, LabelKind::Antimagic) => true,
            (
                ObjectiveFamily::ProgressionDeviation { a, d },
                LabelKind::Progression { a: ta, d: td },
            ) => a == ta && d == td,
            _ => false,
        }
    }
}

fn ceil_mean(sum: u128, count: u128) -> u128 {
    (sum + count - 1) / count
}

fn sq_diff(x: Weight, y: Weight) -> Value {
    let d = x.abs_diff(y) as u128;
    d * d
}

/// Squared deviation of the weights from their ceiling-rounded mean.
pub fn magic_deviation_of(weights: &[Weight]) -> Value {
    let count = weights.len() as u128;
    let sum: u128 = weights.iter().map(|&w| w as u128).sum();
    let mean = ceil_mean(sum, count);
    weights
        .iter()
        .map(|&w| {
            let d = (w as u128).abs_diff(mean);
            d * d
        })
        .sum()
}

/// Number of sort-adjacent equal pairs, i.e. |S| minus the number of
/// distinct weights.
pub fn duplicate_count_of(weights: &[Weight]) -> Value {
    let mut sorted = weights.to_vec();
    sorted.sort_unstable();
    sorted
        .windows(2)
        .filter(|pair| pair[0] == pair[1])
        .count() as Value
}

/// Anchor deviation plus sorted-gap deviations against the target
/// progression.
pub fn progression_deviation_of(weights: &[Weight], a: Weight, d: Weight) -> Value {
    let mut sorted = weights.to_vec();
    sorted.sort_unstable();
    let mut total = sq_diff(sorted[0], a);
    for pair in sorted.windows(2) {
        let gap = pair[1] - pair[0];
        total += sq_diff(gap, d);
    }
    total
}

fn target_weights(
    g: &Graph,
    l: &Labelling,
    target: ElementClass,
) -> Result<Vec<Weight>, ObjectiveError> {
    if g.class_count(target) == 0 {
        return Err(ObjectiveError::EmptyTarget(target));
    }
    Ok(weights_of(g, l, target))
}

/// Magic objective over the target class of `g` under `l`.
pub fn eval_magic_deviation(
    g: &Graph,
    l: &Labelling,
    target: ElementClass,
) -> Result<Value, ObjectiveError> {
    Ok(magic_deviation_of(&target_weights(g, l, target)?))
}

/// Antimagic (duplicate-count) objective.
pub fn eval_duplicate_count(
    g: &Graph,
    l: &Labelling,
    target: ElementClass,
) -> Result<Value, ObjectiveError> {
    Ok(duplicate_count_of(&target_weights(g, l, target)?))
}

/// Arithmetic-progression objective with anchor `a` and step `d`.
pub fn eval_progression_deviation(
    g: &Graph,
    l: &Labelling,
    target: ElementClass,
    a: Weight,
    d: Weight,
) -> Result<Value, ObjectiveError> {
    if a < 1 {
        return Err(ObjectiveError::InvalidAnchor);
    }
    Ok(progression_deviation_of(&target_weights(g, l, target)?, a, d))
}

/// Full evaluation of an objective.
pub fn eval(g: &Graph, l: &Labelling, obj: Objective) -> Result<Value, ObjectiveError> {
    let weights = target_weights(g, l, obj.target)?;
    Ok(match obj.family {
        ObjectiveFamily::MagicDeviation => magic_deviation_of(&weights),
        ObjectiveFamily::DuplicateCount => duplicate_count_of(&weights),
        ObjectiveFamily::ProgressionDeviation { a, d } => {
            progression_deviation_of(&weights, a, d)
        }
    })
}

/// Incremental evaluator for label-swap proposals.
///
/// Holds the target weight vector plus running aggregates so that evaluating
/// a proposed swap only touches the weights of elements incident to the two
/// swapped labels. A proposal leaves the cache in a tentative state: `commit`
/// performs the swap on the labelling and adopts it, `rollback` restores the
/// pre-proposal state. A generation counter ties the cache to the labelling
/// it was built from; any out-of-band mutation is detected as staleness.
#[derive(Clone, Debug)]
pub struct SwapCache {
    objective: Objective,
    weights: Vec<Weight>,
    sum: u128,
    sum_sq: u128,
    counts: BTreeMap<Weight, u32>,
    generation: u64,
    pending: Option<Pending>,
}

#[derive(Clone, Debug)]
struct Pending {
    r: Element,
    s: Element,
    undo: Vec<(usize, Weight)>,
}

impl SwapCache {
    pub fn new(g: &Graph, l: &Labelling, objective: Objective) -> Result<SwapCache, ObjectiveError> {
        if let ObjectiveFamily::ProgressionDeviation { a, .. } = objective.family {
            if a < 1 {
                return Err(ObjectiveError::InvalidAnchor);
            }
        }
        let weights = target_weights(g, l, objective.target)?;
        let sum = weights.iter().map(|&w| w as u128).sum();
        let sum_sq = weights.iter().map(|&w| (w as u128) * (w as u128)).sum();
        let mut counts = BTreeMap::new();
        for &w in &weights {
            *counts.entry(w).or_insert(0u32) += 1;
        }
        Ok(SwapCache {
            objective,
            weights,
            sum,
            sum_sq,
            counts,
            generation: l.generation(),
            pending: None,
        })
    }

    pub fn objective(&self) -> Objective {
        self.objective
    }

    /// Current objective value (reflecting a pending proposal, if any).
    pub fn value(&self) -> Value {
        let count = self.weights.len() as u128;
        match self.objective.family {
            ObjectiveFamily::MagicDeviation => {
                let mean = ceil_mean(self.sum, count);
                // sum (w - mean)^2 expanded; the additions run first so the
                // u128 subtraction cannot wrap.
                self.sum_sq + count * mean * mean - 2 * mean * self.sum
            }
            ObjectiveFamily::DuplicateCount => count - self.counts.len() as u128,
            ObjectiveFamily::ProgressionDeviation { a, d } => {
                let mut total = 0u128;
                let mut prev: Option<Weight> = None;
                for (&w, &c) in &self.counts {
                    match prev {
                        None => total += sq_diff(w, a),
                        Some(p) => total += sq_diff(w - p, d),
                    }
                    // equal weights are zero gaps
                    total += (c as u128 - 1) * sq_diff(0, d);
                    prev = Some(w);
                }
                total
            }
        }
    }

    fn set_weight(&mut self, idx: usize, new: Weight, undo: &mut Vec<(usize, Weight)>) {
        let old = self.weights[idx];
        if old == new {
            return;
        }
        undo.push((idx, old));
        self.apply_weight(idx, new);
    }

    fn apply_weight(&mut self, idx: usize, new: Weight) {
        let old = self.weights[idx];
        self.weights[idx] = new;
        self.sum = self.sum - old as u128 + new as u128;
        self.sum_sq = self.sum_sq - (old as u128) * (old as u128) + (new as u128) * (new as u128);
        match self.counts.get_mut(&old) {
            Some(c) if *c > 1 => *c -= 1,
            _ => {
                self.counts.remove(&old);
            }
        }
        *self.counts.entry(new).or_insert(0) += 1;
    }

    /// Value of the objective after exchanging the labels of `r` and `s`,
    /// recomputing only the weights of target elements incident to either.
    /// The labelling itself is not modified; call `commit` to adopt the swap
    /// or `rollback` to discard it.
    pub fn eval_after_swap(
        &mut self,
        g: &Graph,
        l: &Labelling,
        r: Element,
        s: Element,
    ) -> Result<Value, ObjectiveError> {
        if self.pending.is_some() {
            return Err(ObjectiveError::PendingSwap);
        }
        if l.generation() != self.generation {
            return Err(ObjectiveError::StaleCache {
                expected: self.generation,
                actual: l.generation(),
            });
        }
        for el in [r, s] {
            if !l.selector().selects(el.class()) {
                return Err(ObjectiveError::OutsideUniverse(el));
            }
        }

        let label_r = l.label(r) as i128;
        let label_s = l.label(s) as i128;
        let mut deltas: Vec<(usize, i128)> = Vec::new();
        push_influence(g, self.objective.target, r, label_s - label_r, &mut deltas);
        push_influence(g, self.objective.target, s, label_r - label_s, &mut deltas);
        deltas.sort_unstable_by_key(|&(idx, _)| idx);

        let mut undo = Vec::new();
        let mut i = 0;
        while i < deltas.len() {
            let idx = deltas[i].0;
            let mut delta = 0i128;
            while i < deltas.len() && deltas[i].0 == idx {
                delta += deltas[i].1;
                i += 1;
            }
            if delta != 0 {
                let new = (self.weights[idx] as i128 + delta) as Weight;
                self.set_weight(idx, new, &mut undo);
            }
        }
        self.pending = Some(Pending { r, s, undo });
        Ok(self.value())
    }

    /// Adopts the pending swap: exchanges the labels in `l` and binds the
    /// cache to the mutated labelling.
    pub fn commit(&mut self, l: &mut Labelling) {
        let pending = self.pending.take().expect("commit without pending swap");
        l.swap_labels(pending.r, pending.s);
        self.generation = l.generation();
    }

    /// Discards the pending swap, restoring the cache to the state of the
    /// unmodified labelling.
    pub fn rollback(&mut self) {
        let pending = self.pending.take().expect("rollback without pending swap");
        for &(idx, old) in pending.undo.iter().rev() {
            self.apply_weight(idx, old);
        }
    }

    pub fn has_pending(&self) -> bool {
        self.pending.is_some()
    }
}

/// Records, for every target element whose weight includes the label of
/// `element`, a weight delta. Incidence tables are sets, so each affected
/// target receives the delta exactly once per endpoint of the swap.
fn push_influence(
    g: &Graph,
    target: ElementClass,
    element: Element,
    delta: i128,
    out: &mut Vec<(usize, i128)>,
) {
    match (element, target) {
        (Element::Vertex(v), ElementClass::Vertex) => out.push((v.0, delta)),
        (Element::Vertex(v), ElementClass::Edge) => {
            out.extend(g.edges_at(v).iter().map(|e| (e.0, delta)))
        }
        (Element::Vertex(v), ElementClass::Face) => {
            out.extend(g.faces_at(v).iter().map(|f| (f.0, delta)))
        }
        (Element::Edge(e), ElementClass::Vertex) => {
            let (u, v) = g.endpoints(e);
            out.push((u.0, delta));
            out.push((v.0, delta));
        }
        (Element::Edge(e), ElementClass::Edge) => out.push((e.0, delta)),
        (Element::Edge(e), ElementClass::Face) => {
            out.extend(g.faces_of_edge(e).iter().map(|f| (f.0, delta)))
        }
        (Element::Face(f), ElementClass::Vertex) => {
            out.extend(g.face_vertices(f).iter().map(|v| (v.0, delta)))
        }
        (Element::Face(f), ElementClass::Edge) => {
            out.extend(g.face_edges(f).iter().map(|e| (e.0, delta)))
        }
        (Element::Face(f), ElementClass::Face) => out.push((f.0, delta)),
    }
}

/// Functional form of the incremental path: returns the post-swap value and
/// the updated cache, leaving the labelling untouched (the pending proposal
/// is rolled back so the returned cache matches `l` again).
pub fn eval_after_swap(
    g: &Graph,
    l: &Labelling,
    obj: Objective,
    r: Element,
    s: Element,
    mut cache: SwapCache,
) -> Result<(Value, SwapCache), ObjectiveError> {
    debug_assert_eq!(cache.objective(), obj);
    let value = cache.eval_after_swap(g, l, r, s)?;
    cache.rollback();
    Ok((value, cache))
}
