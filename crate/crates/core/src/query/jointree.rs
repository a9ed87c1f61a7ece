use std::collections::VecDeque;

use super::{ConjunctiveQuery, QueryError, VarId};

/// A rooted tree over hyperedges (atoms). Children are kept in ascending
/// node order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JoinTree {
    pub parent: Vec<Option<usize>>,
    pub children: Vec<Vec<usize>>,
    pub root: usize,
}

impl JoinTree {
    /// Orients an undirected tree on `n` nodes away from `root`.
    pub fn from_edges(n: usize, edges: &[(usize, usize)], root: usize) -> JoinTree {
        let adj = adjacency(n, edges);
        let mut parent = vec![None; n];
        let mut children = vec![Vec::new(); n];
        let mut seen = vec![false; n];
        let mut queue = VecDeque::from([root]);
        seen[root] = true;
        while let Some(u) = queue.pop_front() {
            for &v in &adj[u] {
                if !seen[v] {
                    seen[v] = true;
                    parent[v] = Some(u);
                    children[u].push(v);
                    queue.push_back(v);
                }
            }
        }
        assert!(seen.iter().all(|&s| s), "join tree edges do not span all nodes");
        JoinTree {
            parent,
            children,
            root,
        }
    }

    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        (0..self.len())
            .filter_map(|v| self.parent[v].map(|p| (p, v)))
            .collect()
    }

    /// Breadth-first order from the root, children visited in ascending order.
    pub fn bfs_order(&self) -> Vec<usize> {
        self.levels().into_iter().flatten().collect()
    }

    pub fn levels(&self) -> Vec<Vec<usize>> {
        let mut levels = vec![vec![self.root]];
        loop {
            let next: Vec<usize> = levels
                .last()
                .unwrap()
                .iter()
                .flat_map(|&u| self.children[u].iter().copied())
                .collect();
            if next.is_empty() {
                break;
            }
            levels.push(next);
        }
        levels
    }

    /// Number of levels.
    pub fn depth(&self) -> usize {
        self.levels().len()
    }

    /// Every variable must induce a connected subtree.
    pub fn satisfies_running_intersection(&self, edges: &[Vec<VarId>]) -> bool {
        let nvars = edges.iter().flatten().map(|&v| v + 1).max().unwrap_or(0);
        for v in 0..nvars {
            let nodes = edges.iter().filter(|e| e.contains(&v)).count();
            if nodes == 0 {
                continue;
            }
            let links = (0..self.len())
                .filter(|&c| {
                    self.parent[c].is_some_and(|p| edges[c].contains(&v) && edges[p].contains(&v))
                })
                .count();
            if links + 1 != nodes {
                return false;
            }
        }
        true
    }
}

fn adjacency(n: usize, edges: &[(usize, usize)]) -> Vec<Vec<usize>> {
    let mut adj = vec![Vec::new(); n];
    for &(a, b) in edges {
        adj[a].push(b);
        adj[b].push(a);
    }
    for a in &mut adj {
        a.sort_unstable();
    }
    adj
}

fn height_from(adj: &[Vec<usize>], root: usize) -> usize {
    let mut dist = vec![usize::MAX; adj.len()];
    dist[root] = 0;
    let mut queue = VecDeque::from([root]);
    let mut best = 0;
    while let Some(u) = queue.pop_front() {
        best = best.max(dist[u]);
        for &v in &adj[u] {
            if dist[v] == usize::MAX {
                dist[v] = dist[u] + 1;
                queue.push_back(v);
            }
        }
    }
    best
}

/// The root that makes the tree deepest; ties go to the lowest index.
pub(crate) fn deepest_root(n: usize, edges: &[(usize, usize)], candidates: &[usize]) -> usize {
    let adj = adjacency(n, edges);
    let mut best = (0, candidates[0]);
    for &c in candidates {
        let h = height_from(&adj, c);
        if h > best.0 {
            best = (h, c);
        }
    }
    best.1
}

/// GYO reduction. Repeatedly removes the lowest-index ear, attaching it to
/// the lowest-index witness. On success returns the undirected tree edges
/// `(ear, witness)`; on failure returns the indices of the hyperedges left.
pub fn gyo_reduce(edges: &[Vec<VarId>]) -> Result<Vec<(usize, usize)>, Vec<usize>> {
    let mut alive: Vec<usize> = (0..edges.len()).collect();
    let mut tree = Vec::new();
    while alive.len() > 1 {
        let mut found = None;
        'ears: for &e in &alive {
            let shared: Vec<VarId> = edges[e]
                .iter()
                .copied()
                .filter(|v| alive.iter().any(|&f| f != e && edges[f].contains(v)))
                .collect();
            for &f in &alive {
                if f != e && shared.iter().all(|v| edges[f].contains(v)) {
                    found = Some((e, f));
                    break 'ears;
                }
            }
        }
        let Some((e, f)) = found else {
            return Err(alive);
        };
        tree.push((e, f));
        alive.retain(|&x| x != e);
    }
    Ok(tree)
}

/// Join tree of an acyclic query, rooted to maximize depth.
pub fn gyo_join_tree(q: &ConjunctiveQuery) -> Result<JoinTree, QueryError> {
    let edges = q.hyperedges();
    match gyo_reduce(&edges) {
        Ok(tree) => {
            let all: Vec<usize> = (0..edges.len()).collect();
            let root = deepest_root(edges.len(), &tree, &all);
            Ok(JoinTree::from_edges(edges.len(), &tree, root))
        }
        Err(residue) => Err(QueryError::Cyclic {
            residue: residue.iter().map(|&i| q.atoms[i].name.clone()).collect(),
        }),
    }
}

/// A sequence of groups of join-tree nodes such that every node's parent
/// lies in the same or the previous group and groups respect BFS order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SerialDecomposition {
    pub vertices: Vec<Vec<usize>>,
}

impl SerialDecomposition {
    pub fn width(&self) -> usize {
        self.vertices.iter().map(Vec::len).max().unwrap_or(0)
    }
}

/// Level-by-level decomposition: one group per BFS level.
pub fn serial_decomposition(tree: &JoinTree) -> SerialDecomposition {
    SerialDecomposition {
        vertices: tree.levels(),
    }
}
