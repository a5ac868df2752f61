//! Line-oriented text formats for graphs and labellings.
//!
//! Graph files:
//!
//! ```text
//! graph <|V|> <|E|> <|F|>
//! e <u> <v>
//! f <v1> <v2> ... <vk>
//! ```
//!
//! Ids are 1-based. Face walks may repeat the first vertex at the end; the
//! loader normalizes either way. Blank lines and `#` comments are skipped.
//! Writing a loaded file reproduces the normalized form byte for byte.
//!
//! Labelling files carry the selector, the task, the label lines
//! `<class> <id> <label>`, and an attestation produced by the verifier,
//! which a loader can re-verify exactly.

use std::io::{BufRead, Write};

use thiserror::Error;

use crate::graph::{ElementClass, Graph, GraphError};
use crate::labelling::{
    DomainSelector, Label, LabelKind, Labelling, LabellingError, TargetKind, VerifyReport, Weight,
};
use crate::objectives::Value;

#[derive(Error, Debug)]
pub enum FormatError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Labelling(#[from] LabellingError),
    #[error("i/o failure: {0}")]
    Io(#[from] std::io::Error),
}

fn parse_err(line: usize, message: impl Into<String>) -> FormatError {
    FormatError::Parse {
        line,
        message: message.into(),
    }
}

/// Writes a graph in the normalized text form.
pub fn write_graph(g: &Graph, out: &mut impl Write) -> std::io::Result<()> {
    writeln!(
        out,
        "graph {} {} {}",
        g.vertex_count(),
        g.edge_count(),
        g.face_count()
    )?;
    for &(u, v) in g.edges() {
        writeln!(out, "e {} {}", u.0 + 1, v.0 + 1)?;
    }
    for f in 0..g.face_count() {
        let walk: Vec<String> = g
            .face_walk(crate::graph::FaceId(f))
            .iter()
            .map(|v| (v.0 + 1).to_string())
            .collect();
        writeln!(out, "f {}", walk.join(" "))?;
    }
    Ok(())
}

pub fn graph_to_string(g: &Graph) -> String {
    let mut buf = Vec::new();
    write_graph(g, &mut buf).expect("writing to memory cannot fail");
    String::from_utf8(buf).expect("graph text is ascii")
}

/// Reads a graph, validating it through the normal construction path.
pub fn read_graph(reader: impl BufRead) -> Result<Graph, FormatError> {
    let mut header: Option<(usize, usize, usize)> = None;
    let mut edges: Vec<(usize, usize)> = Vec::new();
    let mut faces: Vec<Vec<usize>> = Vec::new();

    for (idx, line) in reader.lines().enumerate() {
        let line_no = idx + 1;
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let mut parts = trimmed.split_whitespace();
        let tag = parts.next().unwrap();
        let numbers: Result<Vec<usize>, _> = parts.map(str::parse).collect();
        let numbers =
            numbers.map_err(|e| parse_err(line_no, format!("bad integer: {e}")))?;
        match tag {
            "graph" => {
                if header.is_some() {
                    return Err(parse_err(line_no, "duplicate graph header"));
                }
                if numbers.len() != 3 {
                    return Err(parse_err(line_no, "header needs |V| |E| |F|"));
                }
                header = Some((numbers[0], numbers[1], numbers[2]));
            }
            "e" => {
                if numbers.len() != 2 {
                    return Err(parse_err(line_no, "edge line needs two vertex ids"));
                }
                let to_zero = |x: usize| {
                    x.checked_sub(1)
                        .ok_or_else(|| parse_err(line_no, "ids are 1-based"))
                };
                edges.push((to_zero(numbers[0])?, to_zero(numbers[1])?));
            }
            "f" => {
                if numbers.is_empty() {
                    return Err(parse_err(line_no, "face line needs a vertex walk"));
                }
                let mut walk = Vec::with_capacity(numbers.len() + 1);
                for x in numbers {
                    walk.push(
                        x.checked_sub(1)
                            .ok_or_else(|| parse_err(line_no, "ids are 1-based"))?,
                    );
                }
                // normalize: close the walk if the repeat is missing
                if walk.len() >= 2 && walk.first() == walk.last() {
                    // already closed
                } else {
                    walk.push(walk[0]);
                }
                faces.push(walk);
            }
            other => return Err(parse_err(line_no, format!("unknown line tag '{other}'"))),
        }
    }

    let (nv, ne, nf) = header.ok_or_else(|| parse_err(0, "missing graph header"))?;
    if ne != edges.len() || nf != faces.len() {
        return Err(parse_err(
            0,
            format!(
                "header declares {ne} edges and {nf} faces, found {} and {}",
                edges.len(),
                faces.len()
            ),
        ));
    }
    Ok(Graph::build(nv, &edges, &faces)?)
}

pub fn graph_from_str(text: &str) -> Result<Graph, FormatError> {
    read_graph(text.as_bytes())
}

/// The verification block a producer writes alongside a labelling.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Attestation {
    Magic { k: Weight },
    /// Antimagic: all weights distinct; the count is |S|.
    Distinct { count: usize },
    Progression { a: Weight, d: Weight },
    /// Best-effort output of an exhausted search.
    Unsolved { value: Value },
}

impl Attestation {
    /// Attestation matching an accepted verification report.
    pub fn from_report(report: &VerifyReport) -> Option<Attestation> {
        use crate::labelling::KindCheck;
        if !report.accepted() {
            return None;
        }
        Some(match report.kind {
            KindCheck::Magic { constant } => Attestation::Magic { k: constant },
            KindCheck::Antimagic => Attestation::Distinct {
                count: report.weights.len(),
            },
            KindCheck::Progression { a, d } => Attestation::Progression { a, d },
            _ => return None,
        })
    }
}

/// On-disk labelling record. Label lines use 0-based ids in memory and
/// 1-based ids in the file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabellingFile {
    pub selector: DomainSelector,
    pub task: TargetKind,
    pub n: usize,
    pub labels: Vec<(ElementClass, usize, Label)>,
    pub attestation: Attestation,
    /// Seed that produced the labelling, echoed for reproducibility.
    pub seed: Option<u64>,
}

impl LabellingFile {
    pub fn new(
        g: &Graph,
        l: &Labelling,
        task: TargetKind,
        attestation: Attestation,
        seed: Option<u64>,
    ) -> LabellingFile {
        let labels = l
            .assignments(g)
            .into_iter()
            .map(|(el, label)| (el.class(), el.index(), label))
            .collect();
        LabellingFile {
            selector: l.selector(),
            task,
            n: l.n(),
            labels,
            attestation,
            seed,
        }
    }

    /// Rebuilds the labelling against a graph, validating structure.
    pub fn to_labelling(&self, g: &Graph) -> Result<Labelling, FormatError> {
        use crate::graph::{EdgeId, Element, FaceId, VertexId};
        let assignment: Vec<_> = self
            .labels
            .iter()
            .map(|&(class, id, label)| {
                let el = match class {
                    ElementClass::Vertex => Element::Vertex(VertexId(id)),
                    ElementClass::Edge => Element::Edge(EdgeId(id)),
                    ElementClass::Face => Element::Face(FaceId(id)),
                };
                (el, label)
            })
            .collect();
        Ok(Labelling::from_assignment(g, self.selector, &assignment)?)
    }
}

fn class_tag(class: ElementClass) -> &'static str {
    match class {
        ElementClass::Vertex => "v",
        ElementClass::Edge => "e",
        ElementClass::Face => "f",
    }
}

fn parse_class(tag: &str, line: usize) -> Result<ElementClass, FormatError> {
    match tag {
        "v" => Ok(ElementClass::Vertex),
        "e" => Ok(ElementClass::Edge),
        "f" => Ok(ElementClass::Face),
        other => Err(parse_err(line, format!("unknown element class '{other}'"))),
    }
}

fn flag(b: bool) -> u8 {
    b as u8
}

pub fn write_labelling_file(file: &LabellingFile, out: &mut impl Write) -> std::io::Result<()> {
    let kind = match file.task.kind {
        LabelKind::Magic => "magic".to_string(),
        LabelKind::Antimagic => "antimagic".to_string(),
        LabelKind::Progression { a, d } => format!("ad a={a} d={d}"),
    };
    writeln!(
        out,
        "labelling v={} e={} f={} super={} target={} kind={} n={}",
        flag(file.selector.vertices),
        flag(file.selector.edges),
        flag(file.selector.faces),
        flag(file.task.super_labelling),
        class_tag(file.task.target),
        kind,
        file.n
    )?;
    if let Some(seed) = file.seed {
        writeln!(out, "# seed={seed} rng={}", crate::anneal::RNG_ALGORITHM)?;
    }
    for &(class, id, label) in &file.labels {
        writeln!(out, "{} {} {}", class_tag(class), id + 1, label)?;
    }
    match file.attestation {
        Attestation::Magic { k } => writeln!(out, "verified magic k={k}"),
        Attestation::Distinct { count } => writeln!(out, "verified antimagic distinct={count}"),
        Attestation::Progression { a, d } => writeln!(out, "verified ad a={a} d={d}"),
        Attestation::Unsolved { value } => writeln!(out, "unsolved value={value}"),
    }
}

pub fn labelling_file_to_string(file: &LabellingFile) -> String {
    let mut buf = Vec::new();
    write_labelling_file(file, &mut buf).expect("writing to memory cannot fail");
    String::from_utf8(buf).expect("labelling text is ascii")
}

fn kv<'a>(token: &'a str, key: &str, line: usize) -> Result<&'a str, FormatError> {
    token
        .strip_prefix(key)
        .and_then(|rest| rest.strip_prefix('='))
        .ok_or_else(|| parse_err(line, format!("expected {key}=<value>, got '{token}'")))
}

fn parse_u64(text: &str, line: usize) -> Result<u64, FormatError> {
    text.parse()
        .map_err(|e| parse_err(line, format!("bad integer '{text}': {e}")))
}

pub fn read_labelling_file(reader: impl BufRead) -> Result<LabellingFile, FormatError> {
    let mut header: Option<(DomainSelector, TargetKind, usize)> = None;
    let mut seed: Option<u64> = None;
    let mut labels: Vec<(ElementClass, usize, Label)> = Vec::new();
    let mut attestation: Option<Attestation> = None;

    for (idx, line) in reader.lines().enumerate() {
        let line_no = idx + 1;
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        if let Some(comment) = trimmed.strip_prefix('#') {
            for token in comment.split_whitespace() {
                if let Some(value) = token.strip_prefix("seed=") {
                    seed = Some(parse_u64(value, line_no)?);
                }
            }
            continue;
        }
        let tokens: Vec<&str> = trimmed.split_whitespace().collect();
        match tokens[0] {
            "labelling" => {
                if tokens.len() < 7 {
                    return Err(parse_err(line_no, "short labelling header"));
                }
                let v = kv(tokens[1], "v", line_no)? == "1";
                let e = kv(tokens[2], "e", line_no)? == "1";
                let f = kv(tokens[3], "f", line_no)? == "1";
                let super_labelling = kv(tokens[4], "super", line_no)? == "1";
                let target = parse_class(kv(tokens[5], "target", line_no)?, line_no)?;
                let kind_tag = kv(tokens[6], "kind", line_no)?;
                let (kind, n_token) = match kind_tag {
                    "magic" => (LabelKind::Magic, 7),
                    "antimagic" => (LabelKind::Antimagic, 7),
                    "ad" => {
                        if tokens.len() < 10 {
                            return Err(parse_err(line_no, "ad kind needs a= and d="));
                        }
                        let a = parse_u64(kv(tokens[7], "a", line_no)?, line_no)?;
                        let d = parse_u64(kv(tokens[8], "d", line_no)?, line_no)?;
                        (LabelKind::Progression { a, d }, 9)
                    }
                    other => {
                        return Err(parse_err(line_no, format!("unknown kind '{other}'")))
                    }
                };
                let n_tok = tokens
                    .get(n_token)
                    .ok_or_else(|| parse_err(line_no, "missing n="))?;
                let n = parse_u64(kv(n_tok, "n", line_no)?, line_no)? as usize;
                header = Some((
                    DomainSelector::new(v, e, f),
                    TargetKind {
                        target,
                        kind,
                        super_labelling,
                    },
                    n,
                ));
            }
            "v" | "e" | "f" => {
                if tokens.len() != 3 {
                    return Err(parse_err(line_no, "label line needs <class> <id> <label>"));
                }
                let class = parse_class(tokens[0], line_no)?;
                let id = parse_u64(tokens[1], line_no)? as usize;
                if id == 0 {
                    return Err(parse_err(line_no, "ids are 1-based"));
                }
                let label = parse_u64(tokens[2], line_no)?;
                labels.push((class, id - 1, label));
            }
            "verified" => {
                if tokens.len() < 3 || (tokens[1] == "ad" && tokens.len() < 4) {
                    return Err(parse_err(line_no, "short verification block"));
                }
                attestation = Some(match tokens[1] {
                    "magic" => Attestation::Magic {
                        k: parse_u64(kv(tokens[2], "k", line_no)?, line_no)?,
                    },
                    "antimagic" => Attestation::Distinct {
                        count: parse_u64(kv(tokens[2], "distinct", line_no)?, line_no)? as usize,
                    },
                    "ad" => Attestation::Progression {
                        a: parse_u64(kv(tokens[2], "a", line_no)?, line_no)?,
                        d: parse_u64(kv(tokens[3], "d", line_no)?, line_no)?,
                    },
                    other => {
                        return Err(parse_err(line_no, format!("unknown attestation '{other}'")))
                    }
                });
            }
            "unsolved" => {
                if tokens.len() != 2 {
                    return Err(parse_err(line_no, "unsolved block needs value=<v>"));
                }
                let value = kv(tokens[1], "value", line_no)?;
                let value: Value = value
                    .parse()
                    .map_err(|e| parse_err(line_no, format!("bad value: {e}")))?;
                attestation = Some(Attestation::Unsolved { value });
            }
            other => return Err(parse_err(line_no, format!("unknown line tag '{other}'"))),
        }
    }

    let (selector, task, n) = header.ok_or_else(|| parse_err(0, "missing labelling header"))?;
    let attestation = attestation.ok_or_else(|| parse_err(0, "missing verification block"))?;
    if labels.len() != n {
        return Err(parse_err(
            0,
            format!("header declares n={n}, found {} label lines", labels.len()),
        ));
    }
    Ok(LabellingFile {
        selector,
        task,
        n,
        labels,
        attestation,
        seed,
    })
}

pub fn labelling_file_from_str(text: &str) -> Result<LabellingFile, FormatError> {
    read_labelling_file(text.as_bytes())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators;
    use crate::labelling::verify;

    #[test]
    fn graph_round_trip_preserves_structure() {
        let g = generators::wheel(4, true).unwrap();
        let text = graph_to_string(&g);
        let back = graph_from_str(&text).unwrap();
        assert_eq!(back.vertex_count(), g.vertex_count());
        assert_eq!(back.edges(), g.edges());
        for f in 0..g.face_count() {
            let f = crate::graph::FaceId(f);
            assert_eq!(back.face_vertices(f), g.face_vertices(f));
            assert_eq!(back.face_edges(f), g.face_edges(f));
        }
        // normalized text is a fixed point
        assert_eq!(graph_to_string(&back), text);
    }

    #[test]
    fn reader_normalizes_open_walks() {
        let closed = "graph 3 3 1\ne 1 2\ne 2 3\ne 1 3\nf 1 2 3 1\n";
        let open = "graph 3 3 1\ne 1 2\ne 2 3\ne 1 3\nf 1 2 3\n";
        let a = graph_from_str(closed).unwrap();
        let b = graph_from_str(open).unwrap();
        assert_eq!(graph_to_string(&a), graph_to_string(&b));
    }

    #[test]
    fn reader_rejects_bad_input() {
        assert!(graph_from_str("e 1 2\n").is_err()); // no header
        assert!(graph_from_str("graph 2 1 0\ne 1 1\n").is_err()); // self-loop
        assert!(graph_from_str("graph 2 2 0\ne 1 2\n").is_err()); // count mismatch
        assert!(graph_from_str("graph 2 1 0\nq 1 2\n").is_err()); // bad tag
        assert!(graph_from_str("graph 2 1 0\ne 0 2\n").is_err()); // 0 id
    }

    #[test]
    fn labelling_file_round_trip() {
        let g = generators::cycle(3, false).unwrap();
        let selector = DomainSelector::new(true, true, false);
        let l = Labelling::random(&g, selector, false, 9).unwrap();
        let task = TargetKind {
            target: ElementClass::Edge,
            kind: LabelKind::Magic,
            super_labelling: false,
        };
        let report = verify(&g, &l, selector, task).unwrap();
        let attestation = Attestation::from_report(&report)
            .unwrap_or(Attestation::Unsolved { value: 1 });
        let file = LabellingFile::new(&g, &l, task, attestation, Some(9));
        let text = labelling_file_to_string(&file);
        let back = labelling_file_from_str(&text).unwrap();
        assert_eq!(back, file);
        assert_eq!(back.to_labelling(&g).unwrap(), l);
        // weights survive the round trip
        let l2 = back.to_labelling(&g).unwrap();
        assert_eq!(
            crate::labelling::weights_of(&g, &l2, ElementClass::Edge),
            crate::labelling::weights_of(&g, &l, ElementClass::Edge),
        );
    }

    #[test]
    fn progression_header_round_trips() {
        let g = generators::cycle(3, false).unwrap();
        let selector = DomainSelector::new(false, true, false);
        let l = Labelling::random(&g, selector, false, 2).unwrap();
        let task = TargetKind {
            target: ElementClass::Vertex,
            kind: LabelKind::Progression { a: 3, d: 1 },
            super_labelling: false,
        };
        let file = LabellingFile::new(&g, &l, task, Attestation::Progression { a: 3, d: 1 }, None);
        let text = labelling_file_to_string(&file);
        let back = labelling_file_from_str(&text).unwrap();
        assert_eq!(back.task.kind, LabelKind::Progression { a: 3, d: 1 });
        assert_eq!(back, file);
    }

    #[test]
    fn unsolved_attestation_round_trips() {
        let g = generators::complete_graph(2).unwrap();
        let selector = DomainSelector::new(false, true, false);
        let l = Labelling::random(&g, selector, false, 0).unwrap();
        let task = TargetKind {
            target: ElementClass::Vertex,
            kind: LabelKind::Antimagic,
            super_labelling: false,
        };
        let file = LabellingFile::new(&g, &l, task, Attestation::Unsolved { value: 1 }, Some(0));
        let back = labelling_file_from_str(&labelling_file_to_string(&file)).unwrap();
        assert_eq!(back.attestation, Attestation::Unsolved { value: 1 });
    }

    #[test]
    fn bad_labelling_lines_rejected() {
        assert!(labelling_file_from_str("v 1 2\n").is_err()); // no header
        let text = "labelling v=1 e=1 f=0 super=0 target=e kind=magic n=3\nv 1 1\nv 2 2\ne 1 3\n";
        assert!(labelling_file_from_str(text).is_err()); // no attestation
    }
}
