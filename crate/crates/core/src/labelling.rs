//! Labelling assignments, weight functions, the labelling taxonomy, and the
//! exact verifier.
//!
//! A (v,e,f)-labelling is a bijection from the labelled universe U (the union
//! of the selected element classes) onto {1,..,n}. Elements outside U carry
//! label 0 so that weights can always sum over every incident element. A
//! super labelling additionally confines vertex labels to [1, |V|].

use rand::seq::SliceRandom;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::graph::{EdgeId, Element, ElementClass, FaceId, Graph, VertexId};

/// Label value. Wide enough that a weight (a label plus all incident labels)
/// cannot overflow for any instance with up to 10^6 labels.
pub type Label = u64;

/// Weight of an element: its own label plus all incident labelled elements.
pub type Weight = u64;

/// Which element classes carry labels.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash)]
pub struct DomainSelector {
    pub vertices: bool,
    pub edges: bool,
    pub faces: bool,
}

impl DomainSelector {
    pub const fn new(vertices: bool, edges: bool, faces: bool) -> Self {
        DomainSelector {
            vertices,
            edges,
            faces,
        }
    }

    pub fn is_empty(&self) -> bool {
        !(self.vertices || self.edges || self.faces)
    }

    pub fn selects(&self, class: ElementClass) -> bool {
        match class {
            ElementClass::Vertex => self.vertices,
            ElementClass::Edge => self.edges,
            ElementClass::Face => self.faces,
        }
    }

    /// The labelled universe, ordered vertices, then edges, then faces,
    /// each by ascending id. This order fixes the element indexing used by
    /// random labelling, the oracle, and the integer-program export.
    pub fn universe(&self, g: &Graph) -> Vec<Element> {
        let mut u = Vec::with_capacity(self.universe_size(g));
        if self.vertices {
            u.extend((0..g.vertex_count()).map(|i| Element::Vertex(VertexId(i))));
        }
        if self.edges {
            u.extend((0..g.edge_count()).map(|i| Element::Edge(EdgeId(i))));
        }
        if self.faces {
            u.extend((0..g.face_count()).map(|i| Element::Face(FaceId(i))));
        }
        u
    }

    pub fn universe_size(&self, g: &Graph) -> usize {
        let mut n = 0;
        if self.vertices {
            n += g.vertex_count();
        }
        if self.edges {
            n += g.edge_count();
        }
        if self.faces {
            n += g.face_count();
        }
        n
    }
}

/// The labelling kind being sought on the target class.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum LabelKind {
    /// All target weights equal one constant.
    Magic,
    /// All target weights pairwise distinct.
    Antimagic,
    /// Target weights are exactly a, a+d, .., a+(|S|-1)d. With d = 0 this
    /// coincides with magic at constant a.
    Progression { a: Weight, d: Weight },
}

/// What to verify or search for: the target class S, the kind, and whether
/// the labelling must be super (vertex labels within [1, |V|]).
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct TargetKind {
    pub target: ElementClass,
    pub kind: LabelKind,
    pub super_labelling: bool,
}

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum LabellingError {
    #[error("selector must label at least one element class")]
    EmptySelector,
    #[error("super labelling requires the vertex class to be labelled")]
    SuperWithoutVertices,
    #[error("target class {0} is empty in this graph")]
    EmptyTargetClass(ElementClass),
    #[error("labelling was built for selector {actual:?}, expected {expected:?}")]
    SelectorMismatch {
        expected: DomainSelector,
        actual: DomainSelector,
    },
    #[error("labelling sized for a different graph: {class} count {actual}, expected {expected}")]
    SizeMismatch {
        class: ElementClass,
        expected: usize,
        actual: usize,
    },
    #[error("{element} is outside the labelled universe")]
    OutsideUniverse { element: Element },
    #[error("{element} assigned more than once")]
    DuplicateAssignment { element: Element },
    #[error("{element} missing from the assignment")]
    MissingAssignment { element: Element },
    #[error("label {label} for {element} is outside [1, {n}]")]
    LabelOutOfRange {
        element: Element,
        label: Label,
        n: usize,
    },
}

/// A label assignment over all three element classes of one graph.
///
/// Labels of elements outside the selected universe are always 0. Labels
/// inside the universe are positive but not necessarily a bijection; the
/// verifier reports bijection violations rather than this type forbidding
/// them, so that hand-edited files can be loaded and diagnosed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Labelling {
    selector: DomainSelector,
    vertex_labels: Vec<Label>,
    edge_labels: Vec<Label>,
    face_labels: Vec<Label>,
    n: usize,
    generation: u64,
}

impl Labelling {
    /// Builds a labelling from explicit (element, label) pairs covering the
    /// universe exactly once. Labels must lie in [1, n]; bijectivity is not
    /// enforced here (the verifier reports it).
    pub fn from_assignment(
        g: &Graph,
        selector: DomainSelector,
        assignment: &[(Element, Label)],
    ) -> Result<Labelling, LabellingError> {
        if selector.is_empty() {
            return Err(LabellingError::EmptySelector);
        }
        let n = selector.universe_size(g);
        let mut l = Labelling {
            selector,
            vertex_labels: vec![0; g.vertex_count()],
            edge_labels: vec![0; g.edge_count()],
            face_labels: vec![0; g.face_count()],
            n,
            generation: 0,
        };
        let mut seen_count = 0usize;
        for &(element, label) in assignment {
            if !selector.selects(element.class()) {
                return Err(LabellingError::OutsideUniverse { element });
            }
            let slot = l
                .slot_mut(element)
                .ok_or(LabellingError::OutsideUniverse { element })?;
            if *slot != 0 {
                return Err(LabellingError::DuplicateAssignment { element });
            }
            if label < 1 || label > n as Label {
                return Err(LabellingError::LabelOutOfRange { element, label, n });
            }
            *slot = label;
            seen_count += 1;
        }
        if seen_count != n {
            for element in selector.universe(g) {
                if l.label(element) == 0 {
                    return Err(LabellingError::MissingAssignment { element });
                }
            }
        }
        Ok(l)
    }

    /// Uniform random bijection U -> {1..n}. In super mode the vertex labels
    /// are a uniform random permutation of {1..|V|} and the remaining labels
    /// a uniform random permutation of {|V|+1..n} over the non-vertex part
    /// of the universe.
    pub fn random(
        g: &Graph,
        selector: DomainSelector,
        super_labelling: bool,
        seed: u64,
    ) -> Result<Labelling, LabellingError> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Labelling::random_with(g, selector, super_labelling, &mut rng)
    }

    /// As [`Labelling::random`] but drawing from a caller-owned generator.
    pub fn random_with(
        g: &Graph,
        selector: DomainSelector,
        super_labelling: bool,
        rng: &mut impl Rng,
    ) -> Result<Labelling, LabellingError> {
        if selector.is_empty() {
            return Err(LabellingError::EmptySelector);
        }
        if super_labelling && !selector.vertices {
            return Err(LabellingError::SuperWithoutVertices);
        }
        let universe = selector.universe(g);
        let n = universe.len();
        let mut labels: Vec<Label> = (1..=n as Label).collect();
        if super_labelling {
            let nv = g.vertex_count();
            labels[..nv].shuffle(rng);
            labels[nv..].shuffle(rng);
        } else {
            labels.shuffle(rng);
        }
        let assignment: Vec<_> = universe.into_iter().zip(labels).collect();
        Labelling::from_assignment(g, selector, &assignment)
    }

    pub fn selector(&self) -> DomainSelector {
        self.selector
    }

    /// Size of the labelled universe.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Mutation counter; incremented by every label swap. Cached evaluators
    /// use it to detect staleness.
    pub fn generation(&self) -> u64 {
        self.generation
    }

    pub fn label(&self, element: Element) -> Label {
        match element {
            Element::Vertex(VertexId(i)) => self.vertex_labels[i],
            Element::Edge(EdgeId(i)) => self.edge_labels[i],
            Element::Face(FaceId(i)) => self.face_labels[i],
        }
    }

    fn slot_mut(&mut self, element: Element) -> Option<&mut Label> {
        match element {
            Element::Vertex(VertexId(i)) => self.vertex_labels.get_mut(i),
            Element::Edge(EdgeId(i)) => self.edge_labels.get_mut(i),
            Element::Face(FaceId(i)) => self.face_labels.get_mut(i),
        }
    }

    /// Exchanges the labels of two universe elements.
    pub fn swap_labels(&mut self, r: Element, s: Element) {
        let lr = self.label(r);
        let ls = self.label(s);
        *self.slot_mut(r).expect("element id in range") = ls;
        *self.slot_mut(s).expect("element id in range") = lr;
        self.generation += 1;
    }

    /// Checks that the labelling's class sizes match `g`.
    pub fn check_sizes(&self, g: &Graph) -> Result<(), LabellingError> {
        for (class, expected, actual) in [
            (ElementClass::Vertex, g.vertex_count(), self.vertex_labels.len()),
            (ElementClass::Edge, g.edge_count(), self.edge_labels.len()),
            (ElementClass::Face, g.face_count(), self.face_labels.len()),
        ] {
            if expected != actual {
                return Err(LabellingError::SizeMismatch {
                    class,
                    expected,
                    actual,
                });
            }
        }
        Ok(())
    }

    /// (element, label) pairs over the universe, in universe order.
    pub fn assignments(&self, g: &Graph) -> Vec<(Element, Label)> {
        self.selector
            .universe(g)
            .into_iter()
            .map(|el| (el, self.label(el)))
            .collect()
    }
}

/// Weight of a single element under the labelling: its own label plus the
/// labels of its incident elements (unlabelled classes contribute 0).
pub fn weight(g: &Graph, l: &Labelling, element: Element) -> Weight {
    match element {
        Element::Vertex(v) => {
            let mut w = l.vertex_labels[v.0];
            for &e in g.edges_at(v) {
                w += l.edge_labels[e.0];
            }
            for &f in g.faces_at(v) {
                w += l.face_labels[f.0];
            }
            w
        }
        Element::Edge(e) => {
            let (u, v) = g.endpoints(e);
            let mut w = l.edge_labels[e.0] + l.vertex_labels[u.0] + l.vertex_labels[v.0];
            for &f in g.faces_of_edge(e) {
                w += l.face_labels[f.0];
            }
            w
        }
        Element::Face(f) => {
            let mut w = l.face_labels[f.0];
            for &v in g.face_vertices(f) {
                w += l.vertex_labels[v.0];
            }
            for &e in g.face_edges(f) {
                w += l.edge_labels[e.0];
            }
            w
        }
    }
}

/// All weights of one element class, indexed by element id.
pub fn weights_of(g: &Graph, l: &Labelling, target: ElementClass) -> Vec<Weight> {
    let make = |i: usize| match target {
        ElementClass::Vertex => Element::Vertex(VertexId(i)),
        ElementClass::Edge => Element::Edge(EdgeId(i)),
        ElementClass::Face => Element::Face(FaceId(i)),
    };
    (0..g.class_count(target))
        .map(|i| weight(g, l, make(i)))
        .collect()
}

/// Bijection check outcome.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BijectionCheck {
    Ok,
    /// Two universe elements share a label.
    DuplicateLabel {
        label: Label,
        first: Element,
        second: Element,
    },
    /// A universe element's label is outside [1, n].
    OutOfRange { element: Element, label: Label },
}

/// Super-range check outcome (vertex labels within [1, |V|]).
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SuperCheck {
    Ok,
    VertexLabelOutOfRange { vertex: VertexId, label: Label },
}

/// Kind check outcome. Failures name the first offending weight pair so a
/// report can point at concrete elements.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum KindCheck {
    Magic {
        constant: Weight,
    },
    Antimagic,
    Progression {
        a: Weight,
        d: Weight,
    },
    NotMagic {
        first: (Element, Weight),
        second: (Element, Weight),
    },
    DuplicateWeight {
        first: (Element, Weight),
        second: (Element, Weight),
    },
    OffProgression {
        expected: Weight,
        found: Option<(Element, Weight)>,
    },
}

impl KindCheck {
    pub fn accepted(&self) -> bool {
        matches!(
            self,
            KindCheck::Magic { .. } | KindCheck::Antimagic | KindCheck::Progression { .. }
        )
    }
}

/// Structured verification result: every check is reported so the caller can
/// print constants and progression parameters without recomputation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerifyReport {
    pub bijection: BijectionCheck,
    pub super_check: Option<SuperCheck>,
    pub kind: KindCheck,
    /// If the sorted target weights form an arithmetic progression, its
    /// (first term, common difference); d = 0 for a single-element target.
    pub detected_progression: Option<(Weight, Weight)>,
    pub weights: Vec<Weight>,
}

impl VerifyReport {
    pub fn accepted(&self) -> bool {
        self.bijection == BijectionCheck::Ok
            && self.super_check.as_ref().map_or(true, |s| *s == SuperCheck::Ok)
            && self.kind.accepted()
    }
}

fn element_of(target: ElementClass, i: usize) -> Element {
    match target {
        ElementClass::Vertex => Element::Vertex(VertexId(i)),
        ElementClass::Edge => Element::Edge(EdgeId(i)),
        ElementClass::Face => Element::Face(FaceId(i)),
    }
}

fn check_bijection(g: &Graph, l: &Labelling) -> BijectionCheck {
    let n = l.n();
    let mut holder: Vec<Option<Element>> = vec![None; n + 1];
    for element in l.selector().universe(g) {
        let label = l.label(element);
        if label < 1 || label > n as Label {
            return BijectionCheck::OutOfRange { element, label };
        }
        match holder[label as usize] {
            Some(first) => {
                return BijectionCheck::DuplicateLabel {
                    label,
                    first,
                    second: element,
                }
            }
            None => holder[label as usize] = Some(element),
        }
    }
    BijectionCheck::Ok
}

fn check_super(g: &Graph, l: &Labelling) -> SuperCheck {
    let nv = g.vertex_count() as Label;
    for i in 0..g.vertex_count() {
        let label = l.label(Element::Vertex(VertexId(i)));
        if label < 1 || label > nv {
            return SuperCheck::VertexLabelOutOfRange {
                vertex: VertexId(i),
                label,
            };
        }
    }
    SuperCheck::Ok
}

/// Infers (a, d) when the sorted weights form an arithmetic progression.
pub fn detect_progression(weights: &[Weight]) -> Option<(Weight, Weight)> {
    if weights.is_empty() {
        return None;
    }
    let mut sorted = weights.to_vec();
    sorted.sort_unstable();
    if sorted.len() == 1 {
        return Some((sorted[0], 0));
    }
    let d = sorted[1] - sorted[0];
    for pair in sorted.windows(2) {
        if pair[1] - pair[0] != d {
            return None;
        }
    }
    Some((sorted[0], d))
}

/// Verifies a labelling against a task: bijection, super range when
/// requested, and the kind on the target class. A labelling built for a
/// different selector is a structural error, not a failed check.
pub fn verify(
    g: &Graph,
    l: &Labelling,
    selector: DomainSelector,
    tk: TargetKind,
) -> Result<VerifyReport, LabellingError> {
    if selector.is_empty() {
        return Err(LabellingError::EmptySelector);
    }
    if l.selector() != selector {
        return Err(LabellingError::SelectorMismatch {
            expected: selector,
            actual: l.selector(),
        });
    }
    l.check_sizes(g)?;
    if tk.super_labelling && !selector.vertices {
        return Err(LabellingError::SuperWithoutVertices);
    }
    if g.class_count(tk.target) == 0 {
        return Err(LabellingError::EmptyTargetClass(tk.target));
    }

    let bijection = check_bijection(g, l);
    let super_check = tk.super_labelling.then(|| check_super(g, l));
    let weights = weights_of(g, l, tk.target);

    let mut order: Vec<usize> = (0..weights.len()).collect();
    order.sort_by_key(|&i| (weights[i], i));

    let kind = match tk.kind {
        LabelKind::Magic => {
            let lo = order[0];
            let hi = order[order.len() - 1];
            if weights[lo] == weights[hi] {
                KindCheck::Magic {
                    constant: weights[lo],
                }
            } else {
                // Name the first element (in id order) deviating from the
                // weight of the lowest-id element.
                let w0 = weights[0];
                let j = (1..weights.len()).find(|&j| weights[j] != w0).unwrap();
                KindCheck::NotMagic {
                    first: (element_of(tk.target, 0), w0),
                    second: (element_of(tk.target, j), weights[j]),
                }
            }
        }
        LabelKind::Antimagic => match first_duplicate(&weights, &order, tk.target) {
            None => KindCheck::Antimagic,
            Some(pair) => pair,
        },
        LabelKind::Progression { a, d } => {
            if let Some(dup) = first_duplicate(&weights, &order, tk.target) {
                if d > 0 {
                    dup
                } else {
                    check_progression_exact(&weights, &order, tk.target, a, d)
                }
            } else {
                check_progression_exact(&weights, &order, tk.target, a, d)
            }
        }
    };

    Ok(VerifyReport {
        bijection,
        super_check,
        kind,
        detected_progression: detect_progression(&weights),
        weights,
    })
}

fn first_duplicate(
    weights: &[Weight],
    order: &[usize],
    target: ElementClass,
) -> Option<KindCheck> {
    for pair in order.windows(2) {
        let (i, j) = (pair[0], pair[1]);
        if weights[i] == weights[j] {
            return Some(KindCheck::DuplicateWeight {
                first: (element_of(target, i), weights[i]),
                second: (element_of(target, j), weights[j]),
            });
        }
    }
    None
}

/// For each target element, the universe elements whose labels feed its
/// weight: itself plus its incident elements, restricted to the selected
/// classes. Entries are indices into `selector.universe(g)`.
pub fn contributors(g: &Graph, selector: DomainSelector, target: ElementClass) -> Vec<Vec<usize>> {
    let nv = if selector.vertices { g.vertex_count() } else { 0 };
    let ne = if selector.edges { g.edge_count() } else { 0 };
    let vertex_index = |v: VertexId| v.0;
    let edge_index = |e: EdgeId| nv + e.0;
    let face_index = |f: FaceId| nv + ne + f.0;

    (0..g.class_count(target))
        .map(|i| {
            let mut c = Vec::new();
            match target {
                ElementClass::Vertex => {
                    let v = VertexId(i);
                    if selector.vertices {
                        c.push(vertex_index(v));
                    }
                    if selector.edges {
                        c.extend(g.edges_at(v).iter().map(|&e| edge_index(e)));
                    }
                    if selector.faces {
                        c.extend(g.faces_at(v).iter().map(|&f| face_index(f)));
                    }
                }
                ElementClass::Edge => {
                    let e = EdgeId(i);
                    if selector.edges {
                        c.push(edge_index(e));
                    }
                    if selector.vertices {
                        let (u, v) = g.endpoints(e);
                        c.push(vertex_index(u));
                        c.push(vertex_index(v));
                    }
                    if selector.faces {
                        c.extend(g.faces_of_edge(e).iter().map(|&f| face_index(f)));
                    }
                }
                ElementClass::Face => {
                    let f = FaceId(i);
                    if selector.faces {
                        c.push(face_index(f));
                    }
                    if selector.vertices {
                        c.extend(g.face_vertices(f).iter().map(|&v| vertex_index(v)));
                    }
                    if selector.edges {
                        c.extend(g.face_edges(f).iter().map(|&e| edge_index(e)));
                    }
                }
            }
            c
        })
        .collect()
}

/// Crude feasible interval for a magic constant: every target weight is a
/// sum of distinct labels from {1..n}, so the constant must be at least the
/// largest "smallest possible weight" and at most the smallest "largest
/// possible weight" over the targets. Returns `None` when the interval is
/// empty (no magic labelling can exist).
pub fn feasible_magic_interval(
    g: &Graph,
    selector: DomainSelector,
    target: ElementClass,
) -> Option<(Weight, Weight)> {
    let n = selector.universe_size(g) as Weight;
    let min_sum = |c: Weight| c * (c + 1) / 2;
    let max_sum = |c: Weight| c * (2 * n - c + 1) / 2;
    let mut lo: Weight = 0;
    let mut hi: Weight = Weight::MAX;
    for set in contributors(g, selector, target) {
        let c = set.len() as Weight;
        lo = lo.max(min_sum(c));
        hi = hi.min(max_sum(c));
    }
    (lo <= hi).then_some((lo, hi))
}

/// Feasible (a, d) candidates for a progression sweep, ordered by step and
/// then anchor.
///
/// Three sound prunes cut the grid: the anchor is at least the smallest
/// possible target weight, the last term is at most the largest possible
/// target weight, and the progression total |S|a + d|S|(|S|-1)/2 must fall
/// inside the rearrangement bounds of the weight sum (the sum over targets
/// is a fixed multiplicity profile paired with the label permutation).
pub fn progression_candidates(
    g: &Graph,
    selector: DomainSelector,
    target: ElementClass,
) -> Result<Vec<(Weight, Weight)>, LabellingError> {
    if selector.is_empty() {
        return Err(LabellingError::EmptySelector);
    }
    let target_count = g.class_count(target);
    if target_count == 0 {
        return Err(LabellingError::EmptyTargetClass(target));
    }
    let sets = contributors(g, selector, target);
    let n = selector.universe_size(g) as Weight;
    let min_sum = |c: Weight| c * (c + 1) / 2;
    let max_sum = |c: Weight| c * (2 * n - c + 1) / 2;
    let a_lo = sets
        .iter()
        .map(|s| min_sum(s.len() as Weight))
        .min()
        .unwrap()
        .max(1);
    let w_hi = sets
        .iter()
        .map(|s| max_sum(s.len() as Weight))
        .max()
        .unwrap();

    // multiplicity profile: how many target weights each universe element
    // feeds
    let mut multiplicity = vec![0u64; selector.universe_size(g)];
    for set in &sets {
        for &u in set {
            multiplicity[u] += 1;
        }
    }
    multiplicity.sort_unstable_by(|x, y| y.cmp(x));
    let sum_min: i128 = multiplicity
        .iter()
        .enumerate()
        .map(|(i, &m)| m as i128 * (i as i128 + 1))
        .sum();
    let sum_max: i128 = multiplicity
        .iter()
        .enumerate()
        .map(|(i, &m)| m as i128 * (n as i128 - i as i128))
        .sum();

    let s = target_count as i128;
    let gaps = s * (s - 1) / 2;
    let div_ceil = |num: i128, den: i128| num.div_euclid(den) + (num.rem_euclid(den) != 0) as i128;

    let mut candidates = Vec::new();
    let mut d: Weight = 0;
    loop {
        let span = (target_count as Weight - 1) * d;
        if a_lo + span > w_hi {
            break;
        }
        let a_hi = w_hi - span;
        // total = s*a + d*gaps must fit the rearrangement bounds
        let lo_by_sum = div_ceil(sum_min - d as i128 * gaps, s);
        let hi_by_sum = (sum_max - d as i128 * gaps).div_euclid(s);
        let lo = (a_lo as i128).max(lo_by_sum).max(1);
        let hi = (a_hi as i128).min(hi_by_sum);
        for a in lo..=hi {
            candidates.push((a as Weight, d));
        }
        if target_count == 1 {
            break;
        }
        d += 1;
    }
    Ok(candidates)
}

fn check_progression_exact(
    weights: &[Weight],
    order: &[usize],
    target: ElementClass,
    a: Weight,
    d: Weight,
) -> KindCheck {
    for (pos, &i) in order.iter().enumerate() {
        let expected = a + d * pos as Weight;
        if weights[i] != expected {
            return KindCheck::OffProgression {
                expected,
                found: Some((element_of(target, i), weights[i])),
            };
        }
    }
    KindCheck::Progression { a, d }
}
