//! Undirected simple graphs over dense vertex identifiers, plus the
//! structural operations the solvers need: graph powers, BFS layerings,
//! BFS-induced prefixes, components and degree statistics.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::error::{NaglError, Result};

pub type Vertex = usize;

/// Immutable undirected simple graph on vertices `0..n`.
///
/// Every adjacency list is strictly increasing and the relation is symmetric.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Graph {
    adj: Vec<Vec<Vertex>>,
    num_edges: usize,
}

/// Counts of input edges that were discarded while building a [`Graph`].
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct EdgeCleanup {
    pub self_loops: usize,
    pub duplicates: usize,
}

impl Graph {
    pub fn empty(n: usize) -> Self {
        Graph {
            adj: vec![Vec::new(); n],
            num_edges: 0,
        }
    }

    /// Builds a graph from an edge list, silently dropping self-loops and
    /// repeated edges. Use [`Graph::from_edges_counted`] to learn how many
    /// were dropped.
    pub fn from_edges(n: usize, edges: &[(Vertex, Vertex)]) -> Result<Self> {
        Self::from_edges_counted(n, edges).map(|(g, _)| g)
    }

    pub fn from_edges_counted(
        n: usize,
        edges: &[(Vertex, Vertex)],
    ) -> Result<(Self, EdgeCleanup)> {
        let mut adj = vec![Vec::new(); n];
        let mut cleanup = EdgeCleanup::default();
        for &(u, v) in edges {
            for w in [u, v] {
                if w >= n {
                    return Err(NaglError::VertexOutOfRange { vertex: w, n });
                }
            }
            if u == v {
                cleanup.self_loops += 1;
                continue;
            }
            adj[u].push(v);
            adj[v].push(u);
        }
        let mut directed = 0;
        for list in &mut adj {
            list.sort_unstable();
            let before = list.len();
            list.dedup();
            directed += before - list.len();
        }
        // each duplicate undirected edge was removed from both endpoints
        cleanup.duplicates = directed / 2;
        Ok((Self::from_sorted_adjacency(adj), cleanup))
    }

    /// Checks the graph invariants on a prebuilt adjacency structure.
    pub fn from_adjacency(adj: Vec<Vec<Vertex>>) -> Result<Self> {
        let n = adj.len();
        for (v, list) in adj.iter().enumerate() {
            for w in list.windows(2) {
                if w[0] >= w[1] {
                    return Err(NaglError::invalid(format!(
                        "adjacency of {v} is not strictly increasing"
                    )));
                }
            }
            for &u in list {
                if u >= n {
                    return Err(NaglError::VertexOutOfRange { vertex: u, n });
                }
                if u == v {
                    return Err(NaglError::invalid(format!("self-loop at {v}")));
                }
                if adj[u].binary_search(&v).is_err() {
                    return Err(NaglError::invalid(format!(
                        "asymmetric adjacency between {v} and {u}"
                    )));
                }
            }
        }
        Ok(Self::from_sorted_adjacency(adj))
    }

    fn from_sorted_adjacency(adj: Vec<Vec<Vertex>>) -> Self {
        let num_edges = adj.iter().map(Vec::len).sum::<usize>() / 2;
        Graph { adj, num_edges }
    }

    #[inline]
    pub fn num_vertices(&self) -> usize {
        self.adj.len()
    }

    #[inline]
    pub fn num_edges(&self) -> usize {
        self.num_edges
    }

    #[inline]
    pub fn neighbors(&self, v: Vertex) -> &[Vertex] {
        &self.adj[v]
    }

    #[inline]
    pub fn degree(&self, v: Vertex) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        self.adj[u].binary_search(&v).is_ok()
    }

    /// `N[v]` in ascending order.
    pub fn closed_neighborhood(&self, v: Vertex) -> Vec<Vertex> {
        let nb = &self.adj[v];
        let pos = self.self_position(v);
        let mut out = Vec::with_capacity(nb.len() + 1);
        out.extend_from_slice(&nb[..pos]);
        out.push(v);
        out.extend_from_slice(&nb[pos..]);
        out
    }

    /// Position of `v` inside its own sorted closed neighborhood.
    #[inline]
    pub fn self_position(&self, v: Vertex) -> usize {
        self.adj[v].partition_point(|&u| u < v)
    }

    /// Edges `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (Vertex, Vertex)> + '_ {
        self.adj.iter().enumerate().flat_map(|(u, list)| {
            list.iter()
                .copied()
                .filter(move |&v| v > u)
                .map(move |v| (u, v))
        })
    }

    pub fn check_vertex(&self, v: Vertex) -> Result<()> {
        if v >= self.num_vertices() {
            Err(NaglError::VertexOutOfRange {
                vertex: v,
                n: self.num_vertices(),
            })
        } else {
            Ok(())
        }
    }

    /// Subgraph induced by `vertices`; vertex `vertices[i]` becomes `i`.
    ///
    /// When `vertices` is ascending the renumbering is monotone, so sorted
    /// neighborhoods keep their relative order.
    pub fn induced_subgraph(&self, vertices: &[Vertex]) -> Graph {
        let mut index = vec![usize::MAX; self.num_vertices()];
        for (i, &v) in vertices.iter().enumerate() {
            index[v] = i;
        }
        let adj = vertices
            .iter()
            .map(|&v| {
                let mut list: Vec<Vertex> = self.adj[v]
                    .iter()
                    .filter_map(|&u| (index[u] != usize::MAX).then_some(index[u]))
                    .collect();
                list.sort_unstable();
                list
            })
            .collect();
        Graph::from_sorted_adjacency(adj)
    }

    /// Connected components, each sorted ascending, ordered by smallest member.
    pub fn connected_components(&self) -> Vec<Vec<Vertex>> {
        let n = self.num_vertices();
        let mut seen = vec![false; n];
        let mut comps = Vec::new();
        let mut queue = VecDeque::new();
        for s in 0..n {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            queue.push_back(s);
            let mut comp = Vec::new();
            while let Some(v) = queue.pop_front() {
                comp.push(v);
                for &u in &self.adj[v] {
                    if !seen[u] {
                        seen[u] = true;
                        queue.push_back(u);
                    }
                }
            }
            comp.sort_unstable();
            comps.push(comp);
        }
        comps
    }

    pub fn is_connected(&self) -> bool {
        self.num_vertices() <= 1 || self.connected_components().len() == 1
    }
}

/// Δ(g); 0 for edgeless graphs.
pub fn max_degree(g: &Graph) -> usize {
    (0..g.num_vertices()).map(|v| g.degree(v)).max().unwrap_or(0)
}

/// G²: `{u, v}` is an edge iff `1 <= dist(u, v) <= 2`.
pub fn square_graph(g: &Graph) -> Graph {
    let n = g.num_vertices();
    let mut adj = Vec::with_capacity(n);
    let mut scratch = Vec::new();
    for v in 0..n {
        scratch.clear();
        scratch.extend_from_slice(g.neighbors(v));
        for &u in g.neighbors(v) {
            merge_into(&mut scratch, g.neighbors(u));
        }
        let mut list = scratch.clone();
        if let Ok(pos) = list.binary_search(&v) {
            list.remove(pos);
        }
        adj.push(list);
    }
    Graph::from_sorted_adjacency(adj)
}

/// Sorted-merge union of `other` into the sorted, deduplicated `acc`.
fn merge_into(acc: &mut Vec<Vertex>, other: &[Vertex]) {
    if other.is_empty() {
        return;
    }
    let mut merged = Vec::with_capacity(acc.len() + other.len());
    let (mut i, mut j) = (0, 0);
    while i < acc.len() && j < other.len() {
        match acc[i].cmp(&other[j]) {
            std::cmp::Ordering::Less => {
                merged.push(acc[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                merged.push(other[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                merged.push(acc[i]);
                i += 1;
                j += 1;
            }
        }
    }
    merged.extend_from_slice(&acc[i..]);
    merged.extend_from_slice(&other[j..]);
    *acc = merged;
}

/// G^p: `{u, v}` is an edge iff `1 <= dist(u, v) <= p`.
pub fn graph_power(g: &Graph, p: usize) -> Result<Graph> {
    match p {
        0 => Err(NaglError::invalid("graph power exponent must be at least 1")),
        1 => Ok(g.clone()),
        2 => Ok(square_graph(g)),
        _ => {
            let n = g.num_vertices();
            let mut dist = vec![usize::MAX; n];
            let mut touched = Vec::new();
            let mut queue = VecDeque::new();
            let mut adj = Vec::with_capacity(n);
            for s in 0..n {
                dist[s] = 0;
                touched.push(s);
                queue.push_back(s);
                while let Some(v) = queue.pop_front() {
                    if dist[v] == p {
                        continue;
                    }
                    for &u in g.neighbors(v) {
                        if dist[u] == usize::MAX {
                            dist[u] = dist[v] + 1;
                            touched.push(u);
                            queue.push_back(u);
                        }
                    }
                }
                let mut list: Vec<Vertex> =
                    touched.iter().copied().filter(|&u| u != s).collect();
                list.sort_unstable();
                adj.push(list);
                for &u in &touched {
                    dist[u] = usize::MAX;
                }
                touched.clear();
            }
            Ok(Graph::from_sorted_adjacency(adj))
        }
    }
}

/// Breadth-first layering λ with layers `B_i = { v : λ(v) = i }`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BfsLayering {
    /// BFS sources. `roots[0]` is the requested root; further entries appear
    /// only for layerings that cover every component.
    pub roots: Vec<Vertex>,
    /// `None` for vertices the search never reached.
    pub layer: Vec<Option<usize>>,
    pub layers: Vec<Vec<Vertex>>,
    pub unreachable: Vec<Vertex>,
}

impl BfsLayering {
    pub fn root(&self) -> Vertex {
        self.roots[0]
    }

    pub fn depth(&self) -> usize {
        self.layers.len()
    }

    pub fn layer_sizes(&self) -> Vec<usize> {
        self.layers.iter().map(Vec::len).collect()
    }
}

/// Visit order of a FIFO BFS from `root`, neighbors enqueued in ascending order.
pub fn bfs_order(g: &Graph, root: Vertex) -> Result<Vec<Vertex>> {
    g.check_vertex(root)?;
    let mut seen = vec![false; g.num_vertices()];
    let mut order = Vec::new();
    let mut queue = VecDeque::from([root]);
    seen[root] = true;
    while let Some(v) = queue.pop_front() {
        order.push(v);
        for &u in g.neighbors(v) {
            if !seen[u] {
                seen[u] = true;
                queue.push_back(u);
            }
        }
    }
    Ok(order)
}

fn layer_from(g: &Graph, root: Vertex, layer: &mut [Option<usize>]) {
    let mut queue = VecDeque::from([root]);
    layer[root] = Some(0);
    while let Some(v) = queue.pop_front() {
        let d = layer[v].unwrap_or(0);
        for &u in g.neighbors(v) {
            if layer[u].is_none() {
                layer[u] = Some(d + 1);
                queue.push_back(u);
            }
        }
    }
}

fn group_layers(roots: Vec<Vertex>, layer: Vec<Option<usize>>) -> BfsLayering {
    let mut layers: Vec<Vec<Vertex>> = Vec::new();
    let mut unreachable = Vec::new();
    for (v, l) in layer.iter().enumerate() {
        match *l {
            Some(d) => {
                if layers.len() <= d {
                    layers.resize_with(d + 1, Vec::new);
                }
                layers[d].push(v);
            }
            None => unreachable.push(v),
        }
    }
    BfsLayering {
        roots,
        layer,
        layers,
        unreachable,
    }
}

/// BFS layering of the component containing `root`.
pub fn bfs_layering(g: &Graph, root: Vertex) -> Result<BfsLayering> {
    g.check_vertex(root)?;
    let mut layer = vec![None; g.num_vertices()];
    layer_from(g, root, &mut layer);
    Ok(group_layers(vec![root], layer))
}

/// Layering covering every component: `root` for its own component and the
/// smallest vertex of each other component.
pub fn bfs_layering_all(g: &Graph, root: Vertex) -> Result<BfsLayering> {
    g.check_vertex(root)?;
    let mut layer = vec![None; g.num_vertices()];
    layer_from(g, root, &mut layer);
    let mut roots = vec![root];
    for v in 0..g.num_vertices() {
        if layer[v].is_none() {
            layer_from(g, v, &mut layer);
            roots.push(v);
        }
    }
    Ok(group_layers(roots, layer))
}

/// Induced subgraph on the first `n_target` vertices of [`bfs_order`], with
/// `mapping[new] = old`.
pub fn bfs_induced_prefix(
    g: &Graph,
    root: Vertex,
    n_target: usize,
) -> Result<(Graph, Vec<Vertex>)> {
    let order = bfs_order(g, root)?;
    if n_target == 0 || n_target > order.len() {
        return Err(NaglError::invalid(format!(
            "prefix size {n_target} outside 1..={} (component of root {root})",
            order.len()
        )));
    }
    let mapping = order[..n_target].to_vec();
    Ok((g.induced_subgraph(&mapping), mapping))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators;

    fn brute_distances(g: &Graph) -> Vec<Vec<usize>> {
        let n = g.num_vertices();
        let mut d = vec![vec![usize::MAX / 4; n]; n];
        for v in 0..n {
            d[v][v] = 0;
            for &u in g.neighbors(v) {
                d[v][u] = 1;
            }
        }
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    if d[i][k] + d[k][j] < d[i][j] {
                        d[i][j] = d[i][k] + d[k][j];
                    }
                }
            }
        }
        d
    }

    fn power_by_distances(g: &Graph, p: usize) -> Graph {
        let d = brute_distances(g);
        let n = g.num_vertices();
        let mut edges = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                if d[u][v] <= p {
                    edges.push((u, v));
                }
            }
        }
        Graph::from_edges(n, &edges).unwrap()
    }

    #[test]
    fn path_squares_to_triangle() {
        let g = generators::path(3);
        let h = square_graph(&g);
        assert_eq!(h.num_edges(), 3);
        assert!(h.has_edge(0, 2));
    }

    #[test]
    fn star_squares_to_clique() {
        let g = generators::star(5);
        let h = square_graph(&g);
        assert_eq!(h, generators::complete(6));
    }

    #[test]
    fn edgeless_square_is_edgeless() {
        let h = square_graph(&Graph::empty(5));
        assert_eq!(h.num_vertices(), 5);
        assert_eq!(h.num_edges(), 0);
    }

    #[test]
    fn power_cases() {
        assert_eq!(graph_power(&generators::path(4), 3).unwrap(), generators::complete(4));
        let c = generators::cycle(7);
        assert_eq!(graph_power(&c, 1).unwrap(), c);
        assert!(graph_power(&c, 0).is_err());
        let ladder = generators::ladder(3);
        assert_eq!(graph_power(&ladder, 2).unwrap(), power_by_distances(&ladder, 2));
        assert_eq!(square_graph(&ladder), power_by_distances(&ladder, 2));
        let grid = generators::grid(3, 4);
        for p in 1..5 {
            assert_eq!(graph_power(&grid, p).unwrap(), power_by_distances(&grid, p));
        }
    }

    #[test]
    fn layering_examples() {
        let star = generators::star(4);
        let l = bfs_layering(&star, 0).unwrap();
        assert_eq!(l.layers, vec![vec![0], vec![1, 2, 3, 4]]);

        let p = generators::path(4);
        let l = bfs_layering(&p, 0).unwrap();
        assert_eq!(l.layer, vec![Some(0), Some(1), Some(2), Some(3)]);

        let ladder = generators::ladder(4);
        let l = bfs_layering(&ladder, 0).unwrap();
        assert_eq!(l.layer_sizes(), vec![1, 2, 2, 2, 1]);

        assert!(bfs_layering(&p, 9).is_err());
    }

    #[test]
    fn layering_reports_unreachable() {
        let g = Graph::from_edges(4, &[(0, 1)]).unwrap();
        let l = bfs_layering(&g, 0).unwrap();
        assert_eq!(l.unreachable, vec![2, 3]);
        let all = bfs_layering_all(&g, 1).unwrap();
        assert_eq!(all.roots, vec![1, 2, 3]);
        assert!(all.unreachable.is_empty());
        assert_eq!(all.layer, vec![Some(1), Some(0), Some(0), Some(0)]);
    }

    #[test]
    fn prefix_examples() {
        let ladder = generators::ladder(4);
        let (h, map) = bfs_induced_prefix(&ladder, 0, 4).unwrap();
        assert_eq!(map, vec![0, 1, 2, 3]);
        assert_eq!(h.num_edges(), 4);
        assert!((0..4).all(|v| h.degree(v) == 2));

        let (h, _) = bfs_induced_prefix(&ladder, 0, 1).unwrap();
        assert_eq!((h.num_vertices(), h.num_edges()), (1, 0));

        let (h, _) = bfs_induced_prefix(&ladder, 0, 8).unwrap();
        assert_eq!(h.num_edges(), ladder.num_edges());
        assert!(bfs_induced_prefix(&ladder, 0, 9).is_err());
        assert!(bfs_induced_prefix(&ladder, 0, 0).is_err());
    }

    #[test]
    fn degree_examples() {
        assert_eq!(max_degree(&generators::star(7)), 7);
        assert_eq!(max_degree(&generators::cycle(9)), 2);
        assert_eq!(max_degree(&Graph::empty(3)), 0);
    }

    #[test]
    fn from_edges_counts_cleanup() {
        let (g, c) = Graph::from_edges_counted(3, &[(0, 1), (1, 0), (2, 2), (1, 2)]).unwrap();
        assert_eq!(c, EdgeCleanup { self_loops: 1, duplicates: 1 });
        assert_eq!(g.num_edges(), 2);
        assert!(Graph::from_edges(2, &[(0, 5)]).is_err());
    }

    #[test]
    fn from_adjacency_rejects_asymmetry() {
        assert!(Graph::from_adjacency(vec![vec![1], vec![]]).is_err());
        assert!(Graph::from_adjacency(vec![vec![1], vec![0]]).is_ok());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn arb_graph() -> impl Strategy<Value = Graph> {
            (1usize..14).prop_flat_map(|n| {
                proptest::collection::vec((0..n, 0..n), 0..(2 * n))
                    .prop_map(move |edges| Graph::from_edges(n, &edges).unwrap())
            })
        }

        proptest! {
            #[test]
            fn square_contains_graph_and_neighborhood_cliques(g in arb_graph()) {
                let h = square_graph(&g);
                for (u, v) in g.edges() {
                    prop_assert!(h.has_edge(u, v));
                }
                for v in 0..g.num_vertices() {
                    let nb = g.closed_neighborhood(v);
                    for (i, &a) in nb.iter().enumerate() {
                        for &b in &nb[i + 1..] {
                            prop_assert!(h.has_edge(a, b));
                        }
                    }
                }
                let d = max_degree(&g);
                prop_assert!(max_degree(&h) <= d * d);
                prop_assert_eq!(h, power_by_distances(&g, 2));
            }

            #[test]
            fn layering_edges_span_adjacent_layers(g in arb_graph()) {
                let l = bfs_layering_all(&g, 0).unwrap();
                for (u, v) in g.edges() {
                    let (a, b) = (l.layer[u].unwrap(), l.layer[v].unwrap());
                    prop_assert!(a.abs_diff(b) <= 1);
                }
            }

            #[test]
            fn prefixes_are_nested(g in arb_graph()) {
                let order = bfs_order(&g, 0).unwrap();
                for n in 1..=order.len() {
                    let (_, map) = bfs_induced_prefix(&g, 0, n).unwrap();
                    prop_assert_eq!(&map[..], &order[..n]);
                }
            }
        }
    }
}
