//! Tree decompositions: validation, a min-fill construction, conversion to
//! nice form, and the assignment of reward terms to bags.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use crate::error::{NaglError, Result};
use crate::graph::{Graph, Vertex};

/// Bags (each sorted ascending) joined by tree edges over bag indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeDecomposition {
    pub num_vertices: usize,
    pub bags: Vec<Vec<Vertex>>,
    pub edges: Vec<(usize, usize)>,
}

impl TreeDecomposition {
    /// Sorts and deduplicates every bag.
    pub fn new(num_vertices: usize, mut bags: Vec<Vec<Vertex>>, edges: Vec<(usize, usize)>) -> Self {
        for bag in &mut bags {
            bag.sort_unstable();
            bag.dedup();
        }
        TreeDecomposition {
            num_vertices,
            bags,
            edges,
        }
    }

    /// One bag holding every vertex.
    pub fn trivial(num_vertices: usize) -> Self {
        TreeDecomposition {
            num_vertices,
            bags: vec![(0..num_vertices).collect()],
            edges: Vec::new(),
        }
    }

    pub fn max_bag_size(&self) -> usize {
        self.bags.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// max |X_i| − 1, clamped at 0.
    pub fn width(&self) -> usize {
        self.max_bag_size().saturating_sub(1)
    }

    fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.bags.len()];
        for &(a, b) in &self.edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        adj
    }
}

/// Violations of the tree-decomposition conditions.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub structure: Vec<String>,
    pub missing_vertices: Vec<Vertex>,
    pub uncovered_edges: Vec<(Vertex, Vertex)>,
    pub disconnected_vertices: Vec<Vertex>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.structure.is_empty()
            && self.missing_vertices.is_empty()
            && self.uncovered_edges.is_empty()
            && self.disconnected_vertices.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_valid() {
            return write!(f, "valid");
        }
        let mut parts = self.structure.clone();
        if !self.missing_vertices.is_empty() {
            parts.push(format!("vertices in no bag: {:?}", self.missing_vertices));
        }
        if !self.uncovered_edges.is_empty() {
            parts.push(format!("edges in no bag: {:?}", self.uncovered_edges));
        }
        if !self.disconnected_vertices.is_empty() {
            parts.push(format!(
                "vertices whose bags are not connected: {:?}",
                self.disconnected_vertices
            ));
        }
        write!(f, "{}", parts.join("; "))
    }
}

/// Checks that `td` is a tree and decomposes `h`.
pub fn validate(td: &TreeDecomposition, h: &Graph) -> ValidationReport {
    let mut report = ValidationReport::default();
    let nb = td.bags.len();
    if nb == 0 {
        report.structure.push("no bags".into());
        return report;
    }
    if td.num_vertices != h.num_vertices() {
        report.structure.push(format!(
            "decomposition is over {} vertices, graph has {}",
            td.num_vertices,
            h.num_vertices()
        ));
        return report;
    }
    for (i, bag) in td.bags.iter().enumerate() {
        if bag.windows(2).any(|w| w[0] >= w[1]) {
            report.structure.push(format!("bag {i} is not sorted and duplicate-free"));
        }
        if let Some(&v) = bag.iter().find(|&&v| v >= td.num_vertices) {
            report.structure.push(format!("bag {i} holds out-of-range vertex {v}"));
        }
    }
    if let Some(&(a, b)) = td.edges.iter().find(|&&(a, b)| a >= nb || b >= nb || a == b) {
        report.structure.push(format!("bad tree edge {a}-{b}"));
    }
    if td.edges.len() != nb - 1 {
        report
            .structure
            .push(format!("{} tree edges for {nb} bags", td.edges.len()));
    }
    if !report.structure.is_empty() {
        return report;
    }
    let adj = td.adjacency();
    let mut seen = vec![false; nb];
    let mut queue = VecDeque::from([0]);
    seen[0] = true;
    while let Some(i) = queue.pop_front() {
        for &j in &adj[i] {
            if !seen[j] {
                seen[j] = true;
                queue.push_back(j);
            }
        }
    }
    if seen.iter().any(|s| !s) {
        report.structure.push("bag tree is not connected".into());
        return report;
    }

    let n = td.num_vertices;
    let mut occurrences = vec![Vec::new(); n];
    for (i, bag) in td.bags.iter().enumerate() {
        for &v in bag {
            occurrences[v].push(i);
        }
    }
    for (v, occ) in occurrences.iter().enumerate() {
        if occ.is_empty() {
            report.missing_vertices.push(v);
        }
    }
    for (u, v) in h.edges() {
        let covered = occurrences[u]
            .iter()
            .any(|&i| td.bags[i].binary_search(&v).is_ok());
        if !covered {
            report.uncovered_edges.push((u, v));
        }
    }
    // In a tree, the bags holding v induce a connected subtree iff the tree
    // edges inside that set number one less than its size.
    let mut inner = vec![0usize; n];
    for &(a, b) in &td.edges {
        let (x, y) = (&td.bags[a], &td.bags[b]);
        let (mut i, mut j) = (0, 0);
        while i < x.len() && j < y.len() {
            match x[i].cmp(&y[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    inner[x[i]] += 1;
                    i += 1;
                    j += 1;
                }
            }
        }
    }
    for v in 0..n {
        if !occurrences[v].is_empty() && inner[v] + 1 != occurrences[v].len() {
            report.disconnected_vertices.push(v);
        }
    }
    report
}

fn edges_among(adj: &[Vec<Vertex>], nb: &[Vertex]) -> usize {
    let mut count = 0;
    for &a in nb {
        let la = &adj[a];
        let (mut i, mut j) = (0, 0);
        while i < la.len() && j < nb.len() {
            match la[i].cmp(&nb[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    count += 1;
                    i += 1;
                    j += 1;
                }
            }
        }
    }
    count / 2
}

fn fill_in(adj: &[Vec<Vertex>], v: Vertex) -> usize {
    let d = adj[v].len();
    d * d.saturating_sub(1) / 2 - edges_among(adj, &adj[v])
}

/// Elimination order chosen greedily by (fill edges, degree, identifier).
pub fn min_fill_order(h: &Graph) -> Vec<Vertex> {
    eliminate(h).0
}

/// Runs the min-fill elimination game, returning the order and each
/// vertex's bag (itself plus its neighbors at elimination time).
fn eliminate(h: &Graph) -> (Vec<Vertex>, Vec<Vec<Vertex>>) {
    let n = h.num_vertices();
    let mut adj: Vec<Vec<Vertex>> = (0..n).map(|v| h.neighbors(v).to_vec()).collect();
    let mut key: Vec<(usize, usize, Vertex)> = (0..n).map(|v| (fill_in(&adj, v), adj[v].len(), v)).collect();
    let mut queue: BTreeSet<(usize, usize, Vertex)> = key.iter().copied().collect();
    let mut eliminated = vec![false; n];
    let mut order = Vec::with_capacity(n);
    let mut bags = Vec::with_capacity(n);
    let mut affected = Vec::new();

    while let Some(first) = queue.pop_first() {
        let v = first.2;
        eliminated[v] = true;
        order.push(v);
        let nb = std::mem::take(&mut adj[v]);
        let mut bag = nb.clone();
        let pos = bag.partition_point(|&u| u < v);
        bag.insert(pos, v);
        bags.push(bag);

        affected.clear();
        affected.extend_from_slice(&nb);
        for &u in &nb {
            let list = &mut adj[u];
            if let Ok(p) = list.binary_search(&v) {
                list.remove(p);
            }
        }
        for (i, &a) in nb.iter().enumerate() {
            for &b in &nb[i + 1..] {
                if let Err(p) = adj[a].binary_search(&b) {
                    adj[a].insert(p, b);
                    let q = adj[b].binary_search(&a).unwrap_err();
                    adj[b].insert(q, a);
                }
            }
        }
        // fill counts can only change next to an endpoint of a new edge
        for &a in &nb {
            affected.extend_from_slice(&adj[a]);
        }
        affected.sort_unstable();
        affected.dedup();
        for &w in &affected {
            if eliminated[w] {
                continue;
            }
            let fresh = (fill_in(&adj, w), adj[w].len(), w);
            if fresh != key[w] {
                queue.remove(&key[w]);
                queue.insert(fresh);
                key[w] = fresh;
            }
        }
    }
    (order, bags)
}

/// Tree decomposition from a min-fill elimination ordering.
///
/// Bag `i` belongs to the `i`-th eliminated vertex; its parent is the bag of
/// the earliest-eliminated later neighbor. Roots of separate components hang
/// off the last bag, which is always a root.
pub fn min_fill_decomposition(h: &Graph) -> TreeDecomposition {
    let n = h.num_vertices();
    if n == 0 {
        return TreeDecomposition::trivial(0);
    }
    let (order, bags) = eliminate(h);
    let mut position = vec![0; n];
    for (i, &v) in order.iter().enumerate() {
        position[v] = i;
    }
    let last = n - 1;
    let mut edges = Vec::with_capacity(n - 1);
    for (i, bag) in bags.iter().enumerate().take(last) {
        let parent = bag
            .iter()
            .map(|&u| position[u])
            .filter(|&p| p > i)
            .min()
            .unwrap_or(last);
        edges.push((i, parent));
    }
    TreeDecomposition {
        num_vertices: n,
        bags,
        edges,
    }
}

/// Node of a nice decomposition. Child indices are always smaller than the
/// node's own index.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NiceNode {
    Leaf,
    Introduce { vertex: Vertex, child: usize },
    Forget { vertex: Vertex, child: usize },
    Join { left: usize, right: usize },
}

impl NiceNode {
    pub fn kind_name(&self) -> &'static str {
        match self {
            NiceNode::Leaf => "leaf",
            NiceNode::Introduce { .. } => "introduce",
            NiceNode::Forget { .. } => "forget",
            NiceNode::Join { .. } => "join",
        }
    }
}

/// Rooted nice tree decomposition with nodes stored in DFS post-order; the
/// root is the last node.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NiceTreeDecomposition {
    pub num_vertices: usize,
    pub nodes: Vec<NiceNode>,
    pub bags: Vec<Vec<Vertex>>,
    pub width: usize,
}

/// `|I| <= NODE_BOUND_FACTOR * max(n, 1) * (t + 1)` for outputs of [`make_nice`].
pub const NODE_BOUND_FACTOR: usize = 5;

impl NiceTreeDecomposition {
    pub fn root(&self) -> usize {
        self.nodes.len() - 1
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Number of edges on the longest root-to-leaf path.
    pub fn height(&self) -> usize {
        let mut depth = vec![0usize; self.nodes.len()];
        for i in (0..self.nodes.len()).rev() {
            let d = depth[i] + 1;
            match self.nodes[i] {
                NiceNode::Leaf => {}
                NiceNode::Introduce { child, .. } | NiceNode::Forget { child, .. } => depth[child] = d,
                NiceNode::Join { left, right } => {
                    depth[left] = d;
                    depth[right] = d;
                }
            }
        }
        depth.into_iter().max().unwrap_or(0)
    }

    /// Plain tree decomposition with the same bags and tree.
    pub fn to_tree_decomposition(&self) -> TreeDecomposition {
        let mut edges = Vec::new();
        for (i, node) in self.nodes.iter().enumerate() {
            match *node {
                NiceNode::Leaf => {}
                NiceNode::Introduce { child, .. } | NiceNode::Forget { child, .. } => edges.push((child, i)),
                NiceNode::Join { left, right } => {
                    edges.push((left, i));
                    edges.push((right, i));
                }
            }
        }
        TreeDecomposition {
            num_vertices: self.num_vertices,
            bags: self.bags.clone(),
            edges,
        }
    }

    /// Checks every node template, empty root and leaves, child ordering,
    /// and that each non-root node has exactly one parent.
    pub fn check_structure(&self) -> std::result::Result<(), String> {
        if self.nodes.is_empty() {
            return Err("no nodes".into());
        }
        if !self.bags[self.root()].is_empty() {
            return Err("root bag is not empty".into());
        }
        let mut parents = vec![0usize; self.nodes.len()];
        for (i, node) in self.nodes.iter().enumerate() {
            let bag = &self.bags[i];
            let ok = match *node {
                NiceNode::Leaf => bag.is_empty(),
                NiceNode::Introduce { vertex, child } => {
                    child < i && {
                        let cb = &self.bags[child];
                        cb.binary_search(&vertex).is_err() && with_vertex(cb, vertex) == *bag
                    }
                }
                NiceNode::Forget { vertex, child } => {
                    child < i && {
                        let cb = &self.bags[child];
                        cb.binary_search(&vertex).is_ok() && without_vertex(cb, vertex) == *bag
                    }
                }
                NiceNode::Join { left, right } => {
                    left < i && right < i && left != right && self.bags[left] == *bag && self.bags[right] == *bag
                }
            };
            if !ok {
                return Err(format!("node {i} ({}) violates its template", node.kind_name()));
            }
            match *node {
                NiceNode::Leaf => {}
                NiceNode::Introduce { child, .. } | NiceNode::Forget { child, .. } => parents[child] += 1,
                NiceNode::Join { left, right } => {
                    parents[left] += 1;
                    parents[right] += 1;
                }
            }
        }
        let root = self.root();
        for (i, &p) in parents.iter().enumerate() {
            let expected = usize::from(i != root);
            if p != expected {
                return Err(format!("node {i} has {p} parents"));
            }
        }
        let width = self.bags.iter().map(Vec::len).max().unwrap_or(0).saturating_sub(1);
        if width != self.width {
            return Err(format!("recorded width {} but bags give {width}", self.width));
        }
        Ok(())
    }
}

fn with_vertex(bag: &[Vertex], v: Vertex) -> Vec<Vertex> {
    let mut out = bag.to_vec();
    let pos = out.partition_point(|&u| u < v);
    out.insert(pos, v);
    out
}

fn without_vertex(bag: &[Vertex], v: Vertex) -> Vec<Vertex> {
    bag.iter().copied().filter(|&u| u != v).collect()
}

fn is_subset(small: &[Vertex], big: &[Vertex]) -> bool {
    let mut j = 0;
    for &x in small {
        while j < big.len() && big[j] < x {
            j += 1;
        }
        if j == big.len() || big[j] != x {
            return false;
        }
        j += 1;
    }
    true
}

/// Contracts every tree edge whose one bag is a subset of the other.
/// Surviving bags keep their relative order.
fn reduce(td: &TreeDecomposition) -> (Vec<Vec<Vertex>>, Vec<Vec<usize>>) {
    let nb = td.bags.len();
    let mut adj: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); nb];
    for &(a, b) in &td.edges {
        adj[a].insert(b);
        adj[b].insert(a);
    }
    let mut alive = vec![true; nb];
    let mut work: VecDeque<usize> = (0..nb).collect();
    while let Some(a) = work.pop_front() {
        if !alive[a] {
            continue;
        }
        let absorber = adj[a]
            .iter()
            .copied()
            .find(|&b| is_subset(&td.bags[a], &td.bags[b]));
        if let Some(b) = absorber {
            alive[a] = false;
            let others: Vec<usize> = adj[a].iter().copied().filter(|&c| c != b).collect();
            adj[b].remove(&a);
            for c in others {
                adj[c].remove(&a);
                adj[c].insert(b);
                adj[b].insert(c);
            }
            adj[a].clear();
            work.push_back(b);
        }
    }
    let mut index = vec![usize::MAX; nb];
    let mut bags = Vec::new();
    for i in 0..nb {
        if alive[i] {
            index[i] = bags.len();
            bags.push(td.bags[i].clone());
        }
    }
    let mut tree = vec![Vec::new(); bags.len()];
    for i in 0..nb {
        if alive[i] {
            tree[index[i]] = adj[i].iter().map(|&j| index[j]).collect();
        }
    }
    (bags, tree)
}

struct NiceBuilder {
    nodes: Vec<NiceNode>,
    bags: Vec<Vec<Vertex>>,
}

impl NiceBuilder {
    fn push(&mut self, node: NiceNode, bag: Vec<Vertex>) -> usize {
        self.nodes.push(node);
        self.bags.push(bag);
        self.nodes.len() - 1
    }

    /// Forgets `from \ to` (descending), then introduces `to \ from`
    /// (ascending), starting above node `top` whose bag is `from`.
    fn chain(&mut self, mut top: usize, from: &[Vertex], to: &[Vertex]) -> usize {
        let mut current = from.to_vec();
        for &v in from.iter().rev() {
            if to.binary_search(&v).is_err() {
                current = without_vertex(&current, v);
                top = self.push(NiceNode::Forget { vertex: v, child: top }, current.clone());
            }
        }
        for &v in to {
            if from.binary_search(&v).is_err() {
                current = with_vertex(&current, v);
                top = self.push(NiceNode::Introduce { vertex: v, child: top }, current.clone());
            }
        }
        top
    }
}

/// Converts a decomposition of `h` into nice form of the same width.
///
/// Bags that are subsets of a neighboring bag are contracted first, so at
/// most `max(n, 1)` bags remain. The tree is rooted at the last remaining
/// bag; children are visited in ascending bag order; joins are binarized
/// left-deep.
pub fn make_nice(td: &TreeDecomposition, h: &Graph) -> Result<NiceTreeDecomposition> {
    let report = validate(td, h);
    if !report.is_valid() {
        return Err(NaglError::InvalidDecomposition(report));
    }
    let (bags, tree) = reduce(td);
    let root = bags.len() - 1;

    let mut children = vec![Vec::new(); bags.len()];
    let mut seen = vec![false; bags.len()];
    let mut queue = VecDeque::from([root]);
    seen[root] = true;
    while let Some(i) = queue.pop_front() {
        for &j in &tree[i] {
            if !seen[j] {
                seen[j] = true;
                children[i].push(j);
                queue.push_back(j);
            }
        }
    }

    struct Frame {
        bag: usize,
        next: usize,
        acc: Option<usize>,
    }
    let mut b = NiceBuilder {
        nodes: Vec::new(),
        bags: Vec::new(),
    };
    let mut stack = vec![Frame { bag: root, next: 0, acc: None }];
    while let Some(frame) = stack.last_mut() {
        if frame.next < children[frame.bag].len() {
            let c = children[frame.bag][frame.next];
            frame.next += 1;
            stack.push(Frame { bag: c, next: 0, acc: None });
            continue;
        }
        let done = stack.pop().expect("non-empty stack");
        let own = &bags[done.bag];
        let top = match done.acc {
            Some(t) => t,
            None => {
                let leaf = b.push(NiceNode::Leaf, Vec::new());
                b.chain(leaf, &[], own)
            }
        };
        match stack.last_mut() {
            Some(parent) => {
                let up = b.chain(top, own, &bags[parent.bag]);
                parent.acc = Some(match parent.acc {
                    None => up,
                    Some(left) => {
                        let bag = bags[parent.bag].clone();
                        b.push(NiceNode::Join { left, right: up }, bag)
                    }
                });
            }
            None => {
                b.chain(top, own, &[]);
            }
        }
    }

    let width = td.width();
    let nice = NiceTreeDecomposition {
        num_vertices: td.num_vertices,
        nodes: b.nodes,
        bags: b.bags,
        width,
    };
    debug_assert_eq!(nice.check_structure(), Ok(()));
    Ok(nice)
}

/// Term-to-bag assignment β with the owned vertex lists `V_i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BagAssignment {
    pub beta: Vec<usize>,
    pub owned: Vec<Vec<Vertex>>,
}

/// β(v) is the first node in post-order whose bag contains `N_g[v]`, among
/// nodes whose parent is not an introduce node (bags that are not strictly
/// grown right above them).
pub fn assign_bags(ntd: &NiceTreeDecomposition, g: &Graph) -> Result<BagAssignment> {
    let n = g.num_vertices();
    if ntd.num_vertices != n {
        return Err(NaglError::invalid(format!(
            "decomposition over {} vertices, graph has {n}",
            ntd.num_vertices
        )));
    }
    let mut grown = vec![false; ntd.nodes.len()];
    for node in &ntd.nodes {
        if let NiceNode::Introduce { child, .. } = *node {
            grown[child] = true;
        }
    }
    let mut occurrences = vec![Vec::new(); n];
    for (i, bag) in ntd.bags.iter().enumerate() {
        if grown[i] {
            continue;
        }
        for &v in bag {
            occurrences[v].push(i);
        }
    }
    let mut beta = vec![0; n];
    let mut owned = vec![Vec::new(); ntd.nodes.len()];
    for v in 0..n {
        let nb = g.closed_neighborhood(v);
        let node = occurrences[v]
            .iter()
            .copied()
            .find(|&i| is_subset(&nb, &ntd.bags[i]))
            .ok_or(NaglError::NoContainingBag(v))?;
        beta[v] = node;
        owned[node].push(v);
    }
    Ok(BagAssignment { beta, owned })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators;
    use crate::graph::square_graph;

    #[test]
    fn validate_examples() {
        let g = generators::path(5);
        assert!(validate(&TreeDecomposition::trivial(5), &g).is_valid());
        assert_eq!(TreeDecomposition::trivial(5).width(), 4);

        let bags = (0..4).map(|i| vec![i, i + 1]).collect();
        let edges = (0..3).map(|i| (i, i + 1)).collect();
        let path_td = TreeDecomposition::new(5, bags, edges);
        assert!(validate(&path_td, &g).is_valid());
        assert_eq!(path_td.width(), 1);

        // v = 0 appears in two bags with a bag between them that lacks it
        let split = TreeDecomposition::new(2, vec![vec![0], vec![1], vec![0]], vec![(0, 1), (1, 2)]);
        let report = validate(&split, &Graph::empty(2));
        assert_eq!(report.disconnected_vertices, vec![0]);

        let missing = TreeDecomposition::new(3, vec![vec![0, 1]], vec![]);
        let report = validate(&missing, &generators::path(3));
        assert_eq!(report.missing_vertices, vec![2]);
        assert_eq!(report.uncovered_edges, vec![(1, 2)]);

        let not_tree = TreeDecomposition::new(2, vec![vec![0], vec![1]], vec![]);
        assert!(!validate(&not_tree, &Graph::empty(2)).structure.is_empty());
    }

    #[test]
    fn min_fill_examples() {
        let tree = generators::path(9);
        let td = min_fill_decomposition(&tree);
        assert!(validate(&td, &tree).is_valid());
        assert_eq!(td.width(), 1);

        let k5 = generators::complete(5);
        let td = min_fill_decomposition(&k5);
        assert!(validate(&td, &k5).is_valid());
        assert_eq!(td.width(), 4);

        for r in [5, 10, 20] {
            let h = square_graph(&generators::ladder(r));
            let td = min_fill_decomposition(&h);
            assert!(validate(&td, &h).is_valid());
            assert!(td.width() <= 6, "r={r} width={}", td.width());
        }

        let disconnected = Graph::from_edges(5, &[(0, 1), (3, 4)]).unwrap();
        let td = min_fill_decomposition(&disconnected);
        assert!(validate(&td, &disconnected).is_valid());
        assert!(validate(&min_fill_decomposition(&Graph::empty(0)), &Graph::empty(0)).is_valid());
    }

    #[test]
    fn nice_single_empty_bag() {
        let td = TreeDecomposition::trivial(0);
        let nice = make_nice(&td, &Graph::empty(0)).unwrap();
        assert_eq!(nice.nodes, vec![NiceNode::Leaf]);
        assert_eq!(nice.root(), 0);
    }

    #[test]
    fn nice_two_bags_sequence() {
        // vertices a = 0 and b = 1, no edges, bags {a} - {b}
        let td = TreeDecomposition::new(2, vec![vec![0], vec![1]], vec![(0, 1)]);
        let nice = make_nice(&td, &Graph::empty(2)).unwrap();
        assert_eq!(
            nice.nodes,
            vec![
                NiceNode::Leaf,
                NiceNode::Introduce { vertex: 0, child: 0 },
                NiceNode::Forget { vertex: 0, child: 1 },
                NiceNode::Introduce { vertex: 1, child: 2 },
                NiceNode::Forget { vertex: 1, child: 3 },
            ]
        );
        assert_eq!(nice.bags, vec![vec![], vec![0], vec![], vec![1], vec![]]);
    }

    #[test]
    fn nice_star_clique() {
        let t = 4;
        let h = square_graph(&generators::star(t));
        let nice = make_nice(&TreeDecomposition::trivial(t + 1), &h).unwrap();
        assert_eq!(nice.len(), 1 + 2 * (t + 1));
        for v in 0..=t {
            assert_eq!(nice.nodes[1 + v], NiceNode::Introduce { vertex: v, child: v });
            assert_eq!(nice.nodes[t + 2 + v], NiceNode::Forget { vertex: t - v, child: t + 1 + v });
        }
        assert_eq!(nice.width, t);
        assert_eq!(nice.height(), 2 * (t + 1));

        let ba = assign_bags(&nice, &generators::star(t)).unwrap();
        assert!(ba.beta.iter().all(|&b| b == t + 1));
        assert_eq!(ba.owned[t + 1], (0..=t).collect::<Vec<_>>());
    }

    #[test]
    fn nice_join_binarization() {
        // center bag {0,1,5} with three leaf bags hanging off it
        let td = TreeDecomposition::new(
            6,
            vec![vec![0, 1, 2], vec![0, 1, 3], vec![0, 1, 4], vec![0, 1, 5]],
            vec![(0, 3), (1, 3), (2, 3)],
        );
        let g = Graph::from_edges(6, &[(0, 1), (1, 2), (1, 3), (1, 4), (1, 5)]).unwrap();
        let nice = make_nice(&td, &g).unwrap();
        nice.check_structure().unwrap();
        let joins = nice.nodes.iter().filter(|n| matches!(n, NiceNode::Join { .. })).count();
        assert_eq!(joins, 2);
        assert!(validate(&nice.to_tree_decomposition(), &g).is_valid());
    }

    #[test]
    fn make_nice_rejects_invalid() {
        let td = TreeDecomposition::new(3, vec![vec![0, 1]], vec![]);
        assert!(matches!(
            make_nice(&td, &generators::path(3)),
            Err(NaglError::InvalidDecomposition(_))
        ));
    }

    #[test]
    fn assign_examples() {
        let empty = Graph::empty(3);
        let td = min_fill_decomposition(&empty);
        let nice = make_nice(&td, &empty).unwrap();
        let ba = assign_bags(&nice, &empty).unwrap();
        for v in 0..3 {
            assert!(matches!(nice.nodes[ba.beta[v]], NiceNode::Introduce { vertex, .. } if vertex == v));
        }

        let p3 = generators::path(3);
        let nice = make_nice(&TreeDecomposition::trivial(3), &square_graph(&p3)).unwrap();
        let ba = assign_bags(&nice, &p3).unwrap();
        assert!(ba.beta.iter().all(|&b| b == ba.beta[0]));

        // a path decomposition of P3 itself does not cover N[1] = {0,1,2}
        let td = TreeDecomposition::new(3, vec![vec![0, 1], vec![1, 2]], vec![(0, 1)]);
        let nice = make_nice(&td, &p3).unwrap();
        assert!(matches!(assign_bags(&nice, &p3), Err(NaglError::NoContainingBag(1))));
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn arb_graph() -> impl Strategy<Value = Graph> {
            (1usize..16).prop_flat_map(|n| {
                proptest::collection::vec((0..n, 0..n), 0..(2 * n))
                    .prop_map(move |edges| Graph::from_edges(n, &edges).unwrap())
            })
        }

        proptest! {
            #[test]
            fn pipeline_invariants(g in arb_graph()) {
                let h = square_graph(&g);
                let td = min_fill_decomposition(&h);
                prop_assert!(validate(&td, &h).is_valid());
                let nice = make_nice(&td, &h).unwrap();
                prop_assert_eq!(nice.check_structure(), Ok(()));
                prop_assert_eq!(nice.width, td.width());
                prop_assert!(validate(&nice.to_tree_decomposition(), &h).is_valid());
                let n = g.num_vertices();
                prop_assert!(nice.len() <= NODE_BOUND_FACTOR * n.max(1) * (nice.width + 1));
                let ba = assign_bags(&nice, &g).unwrap();
                let total: usize = ba.owned.iter().map(Vec::len).sum();
                prop_assert_eq!(total, n);
                for v in 0..n {
                    prop_assert!(is_subset(&g.closed_neighborhood(v), &nice.bags[ba.beta[v]]));
                }
            }
        }
    }
}
