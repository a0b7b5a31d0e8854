//! Deterministic graph families used by the benchmarks and test suites.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graph::{Graph, Vertex};

fn build(n: usize, edges: &[(Vertex, Vertex)]) -> Graph {
    Graph::from_edges(n, edges).expect("generator produced an out-of-range vertex")
}

pub fn path(n: usize) -> Graph {
    let edges: Vec<_> = (1..n).map(|v| (v - 1, v)).collect();
    build(n, &edges)
}

pub fn cycle(n: usize) -> Graph {
    let mut edges: Vec<_> = (1..n).map(|v| (v - 1, v)).collect();
    if n >= 3 {
        edges.push((n - 1, 0));
    }
    build(n, &edges)
}

/// Star with center 0 and leaves `1..=leaves`.
pub fn star(leaves: usize) -> Graph {
    let edges: Vec<_> = (1..=leaves).map(|v| (0, v)).collect();
    build(leaves + 1, &edges)
}

pub fn complete(n: usize) -> Graph {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            edges.push((u, v));
        }
    }
    build(n, &edges)
}

/// 2×r ladder. Rung `i` holds vertices `2i` and `2i + 1`.
pub fn ladder(rungs: usize) -> Graph {
    let mut edges = Vec::new();
    for i in 0..rungs {
        edges.push((2 * i, 2 * i + 1));
        if i + 1 < rungs {
            edges.push((2 * i, 2 * i + 2));
            edges.push((2 * i + 1, 2 * i + 3));
        }
    }
    build(2 * rungs, &edges)
}

/// `width × height` grid, vertex `y * width + x`.
pub fn grid(width: usize, height: usize) -> Graph {
    let mut edges = Vec::new();
    for y in 0..height {
        for x in 0..width {
            let v = y * width + x;
            if x + 1 < width {
                edges.push((v, v + 1));
            }
            if y + 1 < height {
                edges.push((v, v + width));
            }
        }
    }
    build(width * height, &edges)
}

pub fn erdos_renyi(n: usize, p: f64, seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.random_bool(p) {
                edges.push((u, v));
            }
        }
    }
    build(n, &edges)
}

/// Sparse planar "road-like" graph: a uniformly shuffled spanning tree of the
/// `width × height` grid plus each remaining grid edge with probability
/// `extra`. Connected, planar, maximum degree at most 4.
pub fn road_like(width: usize, height: usize, extra: f64, seed: u64) -> Graph {
    let full = grid(width, height);
    let mut candidates: Vec<_> = full.edges().collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    candidates.shuffle(&mut rng);

    let n = full.num_vertices();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    let mut edges = Vec::new();
    let mut rest = Vec::new();
    for (u, v) in candidates {
        let (a, b) = (find(&mut parent, u), find(&mut parent, v));
        if a != b {
            parent[a] = b;
            edges.push((u, v));
        } else {
            rest.push((u, v));
        }
    }
    for e in rest {
        if rng.random_bool(extra) {
            edges.push(e);
        }
    }
    build(n, &edges)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::max_degree;

    #[test]
    fn family_sizes() {
        let l = ladder(5);
        assert_eq!((l.num_vertices(), l.num_edges()), (10, 13));
        let g = grid(6, 6);
        assert_eq!((g.num_vertices(), g.num_edges()), (36, 60));
        assert_eq!(cycle(5).num_edges(), 5);
        assert_eq!(star(4).num_edges(), 4);
        assert_eq!(complete(5).num_edges(), 10);
        assert_eq!(path(1).num_edges(), 0);
    }

    #[test]
    fn road_like_is_connected_planar_degree() {
        let g = road_like(20, 20, 0.1, 3);
        assert!(g.is_connected());
        assert!(max_degree(&g) <= 4);
        assert!(g.num_edges() >= 399);
        assert_eq!(g, road_like(20, 20, 0.1, 3));
    }

    #[test]
    fn erdos_renyi_is_seeded() {
        assert_eq!(erdos_renyi(10, 0.3, 1), erdos_renyi(10, 0.3, 1));
        assert_eq!(erdos_renyi(10, 0.0, 1).num_edges(), 0);
        assert_eq!(erdos_renyi(6, 1.0, 1).num_edges(), 15);
    }
}
