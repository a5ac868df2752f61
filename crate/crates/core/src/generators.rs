//! Generators for the graph families used in the experiments: complete
//! graphs, paths, cycles, wheels, generalized Petersen graphs, Cartesian
//! products and powers, and uniformly random labelled trees.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::graph::{Graph, GraphError};

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum GeneratorError {
    #[error("{family} requires {requirement}, got {got}")]
    ParameterOutOfRange {
        family: &'static str,
        requirement: &'static str,
        got: String,
    },
    #[error("cartesian product inputs must be face-free")]
    ProductWithFaces,
    #[error(transparent)]
    Graph(#[from] GraphError),
}

fn check(
    ok: bool,
    family: &'static str,
    requirement: &'static str,
    got: impl ToString,
) -> Result<(), GeneratorError> {
    if ok {
        Ok(())
    } else {
        Err(GeneratorError::ParameterOutOfRange {
            family,
            requirement,
            got: got.to_string(),
        })
    }
}

/// Complete graph K_n on `n >= 1` vertices.
pub fn complete_graph(n: usize) -> Result<Graph, GeneratorError> {
    check(n >= 1, "complete", "n >= 1", n)?;
    let mut edges = Vec::with_capacity(n * (n - 1) / 2);
    for u in 0..n {
        for v in (u + 1)..n {
            edges.push((u, v));
        }
    }
    Ok(Graph::build(n, &edges, &[])?)
}

/// Path P_n on `n >= 2` vertices.
pub fn path(n: usize) -> Result<Graph, GeneratorError> {
    check(n >= 2, "path", "n >= 2", n)?;
    let edges: Vec<_> = (0..n - 1).map(|i| (i, i + 1)).collect();
    Ok(Graph::build(n, &edges, &[])?)
}

/// Cycle C_n on `n >= 3` vertices; `with_face` attaches the bounded face.
pub fn cycle(n: usize, with_face: bool) -> Result<Graph, GeneratorError> {
    check(n >= 3, "cycle", "n >= 3", n)?;
    let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
    let faces = if with_face {
        let mut walk: Vec<usize> = (0..n).collect();
        walk.push(0);
        vec![walk]
    } else {
        Vec::new()
    };
    Ok(Graph::build(n, &edges, &faces)?)
}

/// Wheel W_n: rim cycle of `n >= 3` vertices plus a hub (the last id, `n`)
/// joined to every rim vertex. `with_faces` attaches the n triangles
/// hub-i-(i+1).
pub fn wheel(n: usize, with_faces: bool) -> Result<Graph, GeneratorError> {
    check(n >= 3, "wheel", "rim size n >= 3", n)?;
    let hub = n;
    let mut edges = Vec::with_capacity(2 * n);
    for i in 0..n {
        edges.push((i, (i + 1) % n));
    }
    for i in 0..n {
        edges.push((i, hub));
    }
    let faces = if with_faces {
        (0..n)
            .map(|i| vec![hub, i, (i + 1) % n, hub])
            .collect()
    } else {
        Vec::new()
    };
    Ok(Graph::build(n + 1, &edges, &faces)?)
}

/// Generalized Petersen graph P(n, k) with `n >= 3` and `1 <= k < n/2`:
/// outer cycle 0..n-1, inner vertices n..2n-1 with steps of k, and spokes.
pub fn generalized_petersen(n: usize, k: usize) -> Result<Graph, GeneratorError> {
    check(n >= 3, "petersen", "n >= 3", n)?;
    check(
        k >= 1 && 2 * k < n,
        "petersen",
        "1 <= k < n/2",
        format!("k={k}, n={n}"),
    )?;
    let mut edges = Vec::with_capacity(3 * n);
    for i in 0..n {
        edges.push((i, (i + 1) % n));
    }
    for i in 0..n {
        edges.push((n + i, n + ((i + k) % n)));
    }
    for i in 0..n {
        edges.push((i, n + i));
    }
    Ok(Graph::build(2 * n, &edges, &[])?)
}

/// Cartesian product of two face-free graphs. Vertex `(a, b)` receives id
/// `a * |V2| + b`; `(a1,b1)` and `(a2,b2)` are adjacent when they agree in
/// one coordinate and are adjacent in the other.
pub fn cartesian_product(g1: &Graph, g2: &Graph) -> Result<Graph, GeneratorError> {
    if g1.face_count() > 0 || g2.face_count() > 0 {
        return Err(GeneratorError::ProductWithFaces);
    }
    let (n1, n2) = (g1.vertex_count(), g2.vertex_count());
    let mut edges = Vec::with_capacity(n1 * g2.edge_count() + n2 * g1.edge_count());
    for a in 0..n1 {
        for &(u2, v2) in g2.edges() {
            edges.push((a * n2 + u2.0, a * n2 + v2.0));
        }
    }
    for &(u1, v1) in g1.edges() {
        for b in 0..n2 {
            edges.push((u1.0 * n2 + b, v1.0 * n2 + b));
        }
    }
    Ok(Graph::build(n1 * n2, &edges, &[])?)
}

/// Left-associated r-fold Cartesian power: `power(g, 3) = (g x g) x g`.
pub fn power(g: &Graph, r: usize) -> Result<Graph, GeneratorError> {
    check(r >= 1, "power", "r >= 1", r)?;
    let mut acc = g.clone();
    for _ in 1..r {
        acc = cartesian_product(&acc, g)?;
    }
    Ok(acc)
}

/// Uniform random labelled tree on `n >= 2` vertices, sampled by drawing a
/// random length-(n-2) vertex sequence and decoding it through the Pruefer
/// correspondence.
pub fn random_labelled_tree(n: usize, seed: u64) -> Result<Graph, GeneratorError> {
    check(n >= 2, "tree", "n >= 2", n)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sequence: Vec<usize> = (0..n.saturating_sub(2))
        .map(|_| rng.gen_range(0..n))
        .collect();
    Ok(tree_from_pruefer(n, &sequence)?)
}

fn tree_from_pruefer(n: usize, sequence: &[usize]) -> Result<Graph, GraphError> {
    debug_assert_eq!(sequence.len(), n - 2);
    let mut degree = vec![1usize; n];
    for &v in sequence {
        degree[v] += 1;
    }
    let mut edges = Vec::with_capacity(n - 1);
    // Smallest-leaf scan: `ptr` never revisits ids below it except via `leaf`
    // dropping back when a sequence vertex becomes a leaf smaller than `ptr`.
    let mut ptr = 0;
    while degree[ptr] != 1 {
        ptr += 1;
    }
    let mut leaf = ptr;
    for &v in sequence {
        edges.push((leaf, v));
        degree[v] -= 1;
        if degree[v] == 1 && v < ptr {
            leaf = v;
        } else {
            ptr += 1;
            while degree[ptr] != 1 {
                ptr += 1;
            }
            leaf = ptr;
        }
    }
    edges.push((leaf, n - 1));
    Graph::build(n, &edges, &[])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::VertexId;

    fn is_connected(g: &Graph) -> bool {
        if g.vertex_count() == 0 {
            return true;
        }
        let mut seen = vec![false; g.vertex_count()];
        let mut stack = vec![VertexId(0)];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for &u in g.neighbors(v) {
                if !seen[u.0] {
                    seen[u.0] = true;
                    stack.push(u);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    #[test]
    fn complete_graph_counts() {
        assert_eq!(complete_graph(2).unwrap().edge_count(), 1);
        assert_eq!(complete_graph(6).unwrap().edge_count(), 15);
        let k10 = complete_graph(10).unwrap();
        assert_eq!(k10.edge_count(), 45);
        assert!((0..10).all(|v| k10.degree(VertexId(v)) == 9));
        assert!(complete_graph(0).is_err());
    }

    #[test]
    fn paths_and_cycles() {
        assert_eq!(path(3).unwrap().edge_count(), 2);
        assert_eq!(path(2).unwrap().edge_count(), 1);
        let c5 = cycle(5, true).unwrap();
        assert_eq!(c5.edge_count(), 5);
        assert_eq!(c5.face_count(), 1);
        assert_eq!(c5.face_edges(crate::graph::FaceId(0)).len(), 5);
        assert!(cycle(2, false).is_err());
        assert!(path(1).is_err());
    }

    #[test]
    fn wheels() {
        let w3 = wheel(3, false).unwrap();
        assert_eq!((w3.vertex_count(), w3.edge_count()), (4, 6));
        let w5 = wheel(5, false).unwrap();
        assert_eq!((w5.vertex_count(), w5.edge_count()), (6, 10));
        assert_eq!(w5.degree(VertexId(5)), 5); // hub is the last id
        let w4 = wheel(4, true).unwrap();
        assert_eq!(w4.face_count(), 4);
        for f in 0..4 {
            assert_eq!(w4.face_vertices(crate::graph::FaceId(f)).len(), 3);
        }
        assert!(wheel(2, false).is_err());
    }

    #[test]
    fn petersen_family() {
        let p = generalized_petersen(5, 2).unwrap();
        assert_eq!((p.vertex_count(), p.edge_count()), (10, 15));
        assert!((0..10).all(|v| p.degree(VertexId(v)) == 3));
        let prism = generalized_petersen(3, 1).unwrap();
        assert_eq!((prism.vertex_count(), prism.edge_count()), (6, 9));
        assert!(generalized_petersen(4, 2).is_err());
    }

    #[test]
    fn products() {
        let p2 = path(2).unwrap();
        let p3 = path(3).unwrap();
        let grid = cartesian_product(&p2, &p3).unwrap();
        assert_eq!((grid.vertex_count(), grid.edge_count()), (6, 7));

        let q3 = power(&p2, 3).unwrap();
        assert_eq!((q3.vertex_count(), q3.edge_count()), (8, 12));
        assert!((0..8).all(|v| q3.degree(VertexId(v)) == 3));

        let p3sq = power(&p3, 2).unwrap();
        assert_eq!((p3sq.vertex_count(), p3sq.edge_count()), (9, 12));

        let flagship = cartesian_product(&power(&p2, 3).unwrap(), &p3).unwrap();
        assert_eq!((flagship.vertex_count(), flagship.edge_count()), (24, 52));

        let c4 = cartesian_product(&p2, &p2).unwrap();
        assert_eq!((c4.vertex_count(), c4.edge_count()), (4, 4));
        assert!((0..4).all(|v| c4.degree(VertexId(v)) == 2));

        assert!(power(&p3, 0).is_err());
        let faced = cycle(3, true).unwrap();
        assert_eq!(
            cartesian_product(&faced, &p2).unwrap_err(),
            GeneratorError::ProductWithFaces
        );
    }

    #[test]
    fn power_identity() {
        let p3 = path(3).unwrap();
        let same = power(&p3, 1).unwrap();
        assert_eq!(same.vertex_count(), p3.vertex_count());
        assert_eq!(same.edges(), p3.edges());
    }

    #[test]
    fn random_trees() {
        let t2 = random_labelled_tree(2, 7).unwrap();
        assert_eq!(t2.edge_count(), 1);
        let t3 = random_labelled_tree(3, 123).unwrap();
        assert_eq!(t3.edge_count(), 2);
        let mut degrees: Vec<_> = (0..3).map(|v| t3.degree(VertexId(v))).collect();
        degrees.sort_unstable();
        assert_eq!(degrees, vec![1, 1, 2]);

        for seed in 0..50 {
            let t = random_labelled_tree(9, seed).unwrap();
            assert_eq!(t.edge_count(), 8);
            assert!(is_connected(&t));
        }
        assert!(random_labelled_tree(1, 0).is_err());
    }

    #[test]
    fn pruefer_decode_known_sequence() {
        // Sequence [3, 3, 3, 4] on 6 vertices: star-ish tree with known edges.
        let g = tree_from_pruefer(6, &[3, 3, 3, 4]).unwrap();
        let edges: Vec<_> = g.edges().iter().map(|&(u, v)| (u.0, v.0)).collect();
        assert_eq!(edges, vec![(0, 3), (1, 3), (2, 3), (3, 4), (4, 5)]);
    }
}
