//! Graph-with-faces data model and incidence structure.
//!
//! A graph here is a triple (V, E, F): vertices, undirected edges, and faces.
//! A face is a closed walk whose consecutive vertex pairs are edges. Incidence
//! tables are precomputed at construction and use set semantics: an element
//! contributes at most once per table even if a face walk repeats it.

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

/// Dense 0-based vertex index.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct VertexId(pub usize);

/// Dense 0-based edge index.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct EdgeId(pub usize);

/// Dense 0-based face index.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct FaceId(pub usize);

/// One of the three element classes.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum ElementClass {
    Vertex,
    Edge,
    Face,
}

impl fmt::Display for ElementClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ElementClass::Vertex => write!(f, "vertex"),
            ElementClass::Edge => write!(f, "edge"),
            ElementClass::Face => write!(f, "face"),
        }
    }
}

/// A vertex, edge, or face reference.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Element {
    Vertex(VertexId),
    Edge(EdgeId),
    Face(FaceId),
}

impl Element {
    pub fn class(&self) -> ElementClass {
        match self {
            Element::Vertex(_) => ElementClass::Vertex,
            Element::Edge(_) => ElementClass::Edge,
            Element::Face(_) => ElementClass::Face,
        }
    }

    pub fn index(&self) -> usize {
        match self {
            Element::Vertex(VertexId(i)) | Element::Edge(EdgeId(i)) | Element::Face(FaceId(i)) => {
                *i
            }
        }
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Element::Vertex(VertexId(i)) => write!(f, "vertex {}", i),
            Element::Edge(EdgeId(i)) => write!(f, "edge {}", i),
            Element::Face(FaceId(i)) => write!(f, "face {}", i),
        }
    }
}

/// Construction and query errors for [`Graph`].
#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("edge {index} is a self-loop at vertex {vertex}")]
    SelfLoop { index: usize, vertex: usize },
    #[error("edge {index} duplicates edge {{{u}, {v}}}")]
    DuplicateEdge { index: usize, u: usize, v: usize },
    #[error("edge {index} references vertex {vertex}, but the graph has {vertex_count} vertices")]
    EdgeVertexOutOfRange {
        index: usize,
        vertex: usize,
        vertex_count: usize,
    },
    #[error("face {index} references vertex {vertex}, but the graph has {vertex_count} vertices")]
    FaceVertexOutOfRange {
        index: usize,
        vertex: usize,
        vertex_count: usize,
    },
    #[error("face {index} walk is not closed (first vertex {first}, last vertex {last})")]
    FaceWalkNotClosed {
        index: usize,
        first: usize,
        last: usize,
    },
    #[error("face {index} walk is empty")]
    FaceWalkEmpty { index: usize },
    #[error("face {index} uses non-edge {{{u}, {v}}}")]
    FaceUsesNonEdge { index: usize, u: usize, v: usize },
    #[error("{class} id {id} out of range (count {count})")]
    IdOutOfRange {
        class: ElementClass,
        id: usize,
        count: usize,
    },
    #[error("incidence from an edge to the edge class is not defined")]
    UndefinedIncidence,
}

/// An immutable graph with faces and precomputed incidence tables.
///
/// The tables cover every incidence the weight formulas consume: for a vertex
/// its adjacent vertices, incident edges and faces; for an edge its endpoints
/// and incident faces; for a face its vertices, edges, and the faces sharing
/// an edge with it. All tables are sorted, duplicate-free id lists.
#[derive(Clone, Debug)]
pub struct Graph {
    vertex_count: usize,
    /// Endpoints normalized so that `u < v`.
    edges: Vec<(VertexId, VertexId)>,
    /// Closed walks stored without the repeated final vertex.
    faces: Vec<Vec<VertexId>>,
    edge_lookup: HashMap<(usize, usize), EdgeId>,

    vertex_neighbors: Vec<Vec<VertexId>>,
    vertex_edges: Vec<Vec<EdgeId>>,
    vertex_faces: Vec<Vec<FaceId>>,
    edge_faces: Vec<Vec<FaceId>>,
    face_vertices: Vec<Vec<VertexId>>,
    face_edges: Vec<Vec<EdgeId>>,
    face_neighbors: Vec<Vec<FaceId>>,
}

fn sorted_dedup<T: Ord>(mut v: Vec<T>) -> Vec<T> {
    v.sort_unstable();
    v.dedup();
    v
}

impl Graph {
    /// Builds a graph from a vertex count, an edge list, and face walks.
    ///
    /// Face walks must be closed (first vertex repeated last) and every
    /// consecutive pair must be an edge. Self-loops and duplicate edges are
    /// rejected, as is any id out of range.
    pub fn build(
        vertex_count: usize,
        edges: &[(usize, usize)],
        faces: &[Vec<usize>],
    ) -> Result<Graph, GraphError> {
        let mut edge_lookup = HashMap::with_capacity(edges.len());
        let mut edge_list = Vec::with_capacity(edges.len());
        for (index, &(a, b)) in edges.iter().enumerate() {
            for &x in &[a, b] {
                if x >= vertex_count {
                    return Err(GraphError::EdgeVertexOutOfRange {
                        index,
                        vertex: x,
                        vertex_count,
                    });
                }
            }
            if a == b {
                return Err(GraphError::SelfLoop { index, vertex: a });
            }
            let key = (a.min(b), a.max(b));
            if edge_lookup.insert(key, EdgeId(index)).is_some() {
                return Err(GraphError::DuplicateEdge {
                    index,
                    u: key.0,
                    v: key.1,
                });
            }
            edge_list.push((VertexId(key.0), VertexId(key.1)));
        }

        let mut face_list = Vec::with_capacity(faces.len());
        for (index, walk) in faces.iter().enumerate() {
            if walk.is_empty() {
                return Err(GraphError::FaceWalkEmpty { index });
            }
            let (first, last) = (walk[0], *walk.last().unwrap());
            if walk.len() < 2 || first != last {
                return Err(GraphError::FaceWalkNotClosed { index, first, last });
            }
            let cycle = &walk[..walk.len() - 1];
            if cycle.is_empty() {
                return Err(GraphError::FaceWalkEmpty { index });
            }
            for &v in cycle {
                if v >= vertex_count {
                    return Err(GraphError::FaceVertexOutOfRange {
                        index,
                        vertex: v,
                        vertex_count,
                    });
                }
            }
            for i in 0..cycle.len() {
                let (u, v) = (cycle[i], cycle[(i + 1) % cycle.len()]);
                let key = (u.min(v), u.max(v));
                if u == v || !edge_lookup.contains_key(&key) {
                    return Err(GraphError::FaceUsesNonEdge {
                        index,
                        u: key.0,
                        v: key.1,
                    });
                }
            }
            face_list.push(cycle.iter().map(|&v| VertexId(v)).collect::<Vec<_>>());
        }

        let mut g = Graph {
            vertex_count,
            edges: edge_list,
            faces: face_list,
            edge_lookup,
            vertex_neighbors: vec![Vec::new(); vertex_count],
            vertex_edges: vec![Vec::new(); vertex_count],
            vertex_faces: vec![Vec::new(); vertex_count],
            edge_faces: vec![Vec::new(); edges.len()],
            face_vertices: Vec::new(),
            face_edges: Vec::new(),
            face_neighbors: Vec::new(),
        };
        g.populate_tables();
        Ok(g)
    }

    fn populate_tables(&mut self) {
        for (i, &(VertexId(u), VertexId(v))) in self.edges.iter().enumerate() {
            self.vertex_neighbors[u].push(VertexId(v));
            self.vertex_neighbors[v].push(VertexId(u));
            self.vertex_edges[u].push(EdgeId(i));
            self.vertex_edges[v].push(EdgeId(i));
        }

        let mut face_vertices = Vec::with_capacity(self.faces.len());
        let mut face_edges = Vec::with_capacity(self.faces.len());
        for (fi, cycle) in self.faces.iter().enumerate() {
            let mut vs = Vec::with_capacity(cycle.len());
            let mut es = Vec::with_capacity(cycle.len());
            for i in 0..cycle.len() {
                let (VertexId(u), VertexId(v)) = (cycle[i], cycle[(i + 1) % cycle.len()]);
                vs.push(VertexId(u));
                es.push(self.edge_lookup[&(u.min(v), u.max(v))]);
            }
            let vs = sorted_dedup(vs);
            let es = sorted_dedup(es);
            for &VertexId(v) in &vs {
                self.vertex_faces[v].push(FaceId(fi));
            }
            for &EdgeId(e) in &es {
                self.edge_faces[e].push(FaceId(fi));
            }
            face_vertices.push(vs);
            face_edges.push(es);
        }

        // Faces are adjacent when they share an edge.
        let mut face_neighbors = vec![Vec::new(); self.faces.len()];
        for fs in &self.edge_faces {
            for &FaceId(a) in fs {
                for &FaceId(b) in fs {
                    if a != b {
                        face_neighbors[a].push(FaceId(b));
                    }
                }
            }
        }

        for t in self.vertex_neighbors.iter_mut() {
            *t = sorted_dedup(std::mem::take(t));
        }
        for t in self.vertex_edges.iter_mut() {
            *t = sorted_dedup(std::mem::take(t));
        }
        self.face_vertices = face_vertices;
        self.face_edges = face_edges;
        self.face_neighbors = face_neighbors
            .into_iter()
            .map(sorted_dedup)
            .collect();
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn face_count(&self) -> usize {
        self.faces.len()
    }

    pub fn class_count(&self, class: ElementClass) -> usize {
        match class {
            ElementClass::Vertex => self.vertex_count,
            ElementClass::Edge => self.edges.len(),
            ElementClass::Face => self.faces.len(),
        }
    }

    /// Edge endpoints, normalized `u < v`.
    pub fn edges(&self) -> &[(VertexId, VertexId)] {
        &self.edges
    }

    /// Face walk without the repeated closing vertex.
    pub fn face_walk(&self, f: FaceId) -> &[VertexId] {
        &self.faces[f.0]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.edge_lookup.contains_key(&(u.min(v), u.max(v)))
    }

    pub fn neighbors(&self, v: VertexId) -> &[VertexId] {
        &self.vertex_neighbors[v.0]
    }

    pub fn edges_at(&self, v: VertexId) -> &[EdgeId] {
        &self.vertex_edges[v.0]
    }

    pub fn faces_at(&self, v: VertexId) -> &[FaceId] {
        &self.vertex_faces[v.0]
    }

    pub fn endpoints(&self, e: EdgeId) -> (VertexId, VertexId) {
        self.edges[e.0]
    }

    pub fn faces_of_edge(&self, e: EdgeId) -> &[FaceId] {
        &self.edge_faces[e.0]
    }

    pub fn face_vertices(&self, f: FaceId) -> &[VertexId] {
        &self.face_vertices[f.0]
    }

    pub fn face_edges(&self, f: FaceId) -> &[EdgeId] {
        &self.face_edges[f.0]
    }

    /// Faces sharing at least one edge with `f`.
    pub fn adjacent_faces(&self, f: FaceId) -> &[FaceId] {
        &self.face_neighbors[f.0]
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.vertex_edges[v.0].len()
    }

    fn check_id(&self, element: Element) -> Result<(), GraphError> {
        let (class, id, count) = match element {
            Element::Vertex(VertexId(i)) => (ElementClass::Vertex, i, self.vertex_count),
            Element::Edge(EdgeId(i)) => (ElementClass::Edge, i, self.edges.len()),
            Element::Face(FaceId(i)) => (ElementClass::Face, i, self.faces.len()),
        };
        if id >= count {
            return Err(GraphError::IdOutOfRange { class, id, count });
        }
        Ok(())
    }

    /// Generic incidence query over the precomputed tables.
    ///
    /// Edge-to-edge incidence has no defining table and is rejected.
    pub fn incident(
        &self,
        element: Element,
        target: ElementClass,
    ) -> Result<Vec<Element>, GraphError> {
        self.check_id(element)?;
        let out = match (element, target) {
            (Element::Vertex(v), ElementClass::Vertex) => {
                self.neighbors(v).iter().map(|&x| Element::Vertex(x)).collect()
            }
            (Element::Vertex(v), ElementClass::Edge) => {
                self.edges_at(v).iter().map(|&x| Element::Edge(x)).collect()
            }
            (Element::Vertex(v), ElementClass::Face) => {
                self.faces_at(v).iter().map(|&x| Element::Face(x)).collect()
            }
            (Element::Edge(e), ElementClass::Vertex) => {
                let (u, v) = self.endpoints(e);
                vec![Element::Vertex(u), Element::Vertex(v)]
            }
            (Element::Edge(_), ElementClass::Edge) => {
                return Err(GraphError::UndefinedIncidence)
            }
            (Element::Edge(e), ElementClass::Face) => self
                .faces_of_edge(e)
                .iter()
                .map(|&x| Element::Face(x))
                .collect(),
            (Element::Face(f), ElementClass::Vertex) => self
                .face_vertices(f)
                .iter()
                .map(|&x| Element::Vertex(x))
                .collect(),
            (Element::Face(f), ElementClass::Edge) => self
                .face_edges(f)
                .iter()
                .map(|&x| Element::Edge(x))
                .collect(),
            (Element::Face(f), ElementClass::Face) => self
                .adjacent_faces(f)
                .iter()
                .map(|&x| Element::Face(x))
                .collect(),
        };
        Ok(out)
    }
}
