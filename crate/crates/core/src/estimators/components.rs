//! Connected components and hop distances.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::graph::WeightedGraph;

/// Component labeling; each label is the smallest vertex index of its component.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Components {
    pub labels: Vec<usize>,
}

impl Components {
    pub fn count(&self) -> usize {
        self.labels.iter().enumerate().filter(|(i, &l)| *i == l).count()
    }

    /// Component sizes keyed by label, in label order.
    pub fn sizes(&self) -> Vec<(usize, usize)> {
        let mut size = vec![0usize; self.labels.len()];
        for &l in &self.labels {
            size[l] += 1;
        }
        size.into_iter().enumerate().filter(|&(_, s)| s > 0).collect()
    }

    pub fn largest(&self) -> usize {
        self.sizes().iter().map(|&(_, s)| s).max().unwrap_or(0)
    }
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    // the smaller root wins, so roots are component minima
    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[hi] = lo;
        }
    }
}

pub fn connected_components(g: &WeightedGraph) -> Components {
    let mut uf = UnionFind { parent: (0..g.len()).collect() };
    for (i, j) in g.edges() {
        uf.union(i, j);
    }
    let labels = (0..g.len()).map(|i| uf.find(i)).collect();
    Components { labels }
}

/// Hop count of a shortest path from `i` to `j`, `None` when unreachable.
pub fn bfs_distance(g: &WeightedGraph, i: usize, j: usize) -> Option<usize> {
    if i == j {
        return Some(0);
    }
    let mut dist = vec![usize::MAX; g.len()];
    dist[i] = 0;
    let mut queue = VecDeque::from([i]);
    while let Some(v) = queue.pop_front() {
        for &u in g.neighbors(v) {
            let u = u as usize;
            if dist[u] == usize::MAX {
                dist[u] = dist[v] + 1;
                if u == j {
                    return Some(dist[u]);
                }
                queue.push_back(u);
            }
        }
    }
    None
}

/// Labels by repeated breadth-first flood fill from the lowest unlabeled vertex.
pub fn flood_fill_labels(g: &WeightedGraph) -> Vec<usize> {
    let mut labels = vec![usize::MAX; g.len()];
    for s in 0..g.len() {
        if labels[s] != usize::MAX {
            continue;
        }
        labels[s] = s;
        let mut queue = VecDeque::from([s]);
        while let Some(v) = queue.pop_front() {
            for &u in g.neighbors(v) {
                if labels[u as usize] == usize::MAX {
                    labels[u as usize] = s;
                    queue.push_back(u as usize);
                }
            }
        }
    }
    labels
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng;
    use rand::Rng;

    #[test]
    fn small_cases() {
        let g = WeightedGraph::from_edges(5, &[]).unwrap();
        assert_eq!(connected_components(&g).labels, vec![0, 1, 2, 3, 4]);
        let t = WeightedGraph::from_edges(4, &[(1, 2), (2, 3), (1, 3)]).unwrap();
        let c = connected_components(&t);
        assert_eq!(c.count(), 2);
        assert_eq!(c.labels, vec![0, 1, 1, 1]);
        assert_eq!(c.sizes().iter().map(|s| s.1).sum::<usize>(), 4);
        assert_eq!(c.largest(), 3);
    }

    #[test]
    fn distances() {
        let p = WeightedGraph::from_edges(4, &[(0, 1), (1, 2)]).unwrap();
        assert_eq!(bfs_distance(&p, 1, 1), Some(0));
        assert_eq!(bfs_distance(&p, 0, 2), Some(2));
        assert_eq!(bfs_distance(&p, 0, 3), None);
    }

    #[test]
    fn union_find_matches_flood_fill() {
        let mut r = rng::stream(2);
        for case in 0..20 {
            let n = 50 + 7 * case;
            let edges: Vec<(usize, usize)> = (0..n)
                .map(|_| (r.random_range(0..n), r.random_range(0..n)))
                .filter(|(a, b)| a != b)
                .collect();
            let g = WeightedGraph::from_edges(n, &edges).unwrap();
            let c = connected_components(&g);
            assert_eq!(c.labels, flood_fill_labels(&g));
            assert_eq!(c.sizes().iter().map(|s| s.1).sum::<usize>(), n);
            for (a, b) in edges.iter().take(10) {
                assert!(bfs_distance(&g, *a, *b).is_some_and(|d| d <= 1));
            }
        }
    }
}
