use super::jointree::{deepest_root, gyo_reduce, JoinTree};
use super::{Atom, ConjunctiveQuery, QueryError, Term, VarId};

/// Join tree of a free-connex query in which the free variables are covered
/// by a connected top part `U`.
///
/// `query` is the input query with one projection atom appended per group of
/// atoms connected through existential variables. A projection atom
/// `<atom>__proj<i>` carries the free variables of the topmost atom of its
/// group and reads that atom's tuples, projected and deduplicated.
#[derive(Debug, Clone, PartialEq)]
pub struct FreeConnexTree {
    pub query: ConjunctiveQuery,
    pub tree: JoinTree,
    pub in_u: Vec<bool>,
}

fn find(uf: &mut [usize], x: usize) -> usize {
    let mut r = x;
    while uf[r] != r {
        r = uf[r];
    }
    let mut x = x;
    while uf[x] != r {
        let n = uf[x];
        uf[x] = r;
        x = n;
    }
    r
}

pub fn is_free_connex(q: &ConjunctiveQuery) -> Result<FreeConnexTree, QueryError> {
    let edges = q.hyperedges();
    let l = edges.len();
    if let Err(residue) = gyo_reduce(&edges) {
        return Err(QueryError::Cyclic {
            residue: residue.iter().map(|&i| q.atoms[i].name.clone()).collect(),
        });
    }

    let mut head_sorted = q.head.clone();
    head_sorted.sort_unstable();
    let mut extended = edges.clone();
    extended.push(head_sorted);
    let star = match gyo_reduce(&extended) {
        Ok(t) => JoinTree::from_edges(l + 1, &t, l),
        Err(residue) => {
            let head_label = format!(
                "{}({})",
                q.name,
                q.head_names().join(",")
            );
            return Err(QueryError::NotFreeConnex {
                residue: residue
                    .iter()
                    .map(|&i| if i == l { head_label.clone() } else { q.atoms[i].name.clone() })
                    .collect(),
            });
        }
    };
    let mut depth = vec![0usize; l + 1];
    for v in star.bfs_order() {
        if let Some(p) = star.parent[v] {
            depth[v] = depth[p] + 1;
        }
    }

    let free = |v: VarId| q.head.contains(&v);
    let mut uf: Vec<usize> = (0..l).collect();
    for v in 0..q.num_vars() {
        if free(v) {
            continue;
        }
        let holders: Vec<usize> = (0..l).filter(|&a| edges[a].contains(&v)).collect();
        for w in holders.windows(2) {
            let (a, b) = (find(&mut uf, w[0]), find(&mut uf, w[1]));
            uf[a] = b;
        }
    }
    let mut comps: Vec<Vec<usize>> = Vec::new();
    let mut comp_of_root = vec![usize::MAX; l];
    for a in 0..l {
        let r = find(&mut uf, a);
        if comp_of_root[r] == usize::MAX {
            comp_of_root[r] = comps.len();
            comps.push(Vec::new());
        }
        comps[comp_of_root[r]].push(a);
    }

    let mut out = q.clone();
    let mut in_u = vec![false; l];
    let mut u_nodes = Vec::new();
    // (projection node, top atom) for groups hanging below U; None when the
    // group shares no free variable and hangs below the U root instead.
    let mut hang: Vec<(Option<usize>, usize)> = Vec::new();
    let mut inner_edges = Vec::new();
    for comp in &comps {
        let all_free = comp.len() == 1 && edges[comp[0]].iter().all(|&v| free(v));
        if all_free {
            in_u[comp[0]] = true;
            u_nodes.push(comp[0]);
            continue;
        }
        let top = *comp
            .iter()
            .min_by_key(|&&a| (depth[a], a))
            .expect("components are non-empty");
        for &a in comp {
            if a != top {
                let p = star.parent[a].expect("only the head node is parentless");
                inner_edges.push((p, a));
            }
        }
        let iface: Vec<VarId> = q.atoms[top].vars.iter().copied().filter(|&v| free(v)).collect();
        if iface.is_empty() {
            hang.push((None, top));
            continue;
        }
        let src = &q.atoms[top];
        let mut p = Atom::new(
            format!("{}__proj{}", src.name, top),
            src.relation.clone(),
            iface.iter().map(|&v| Term::Var(v)).collect(),
            false,
        );
        p.projection_of = Some(top);
        let id = out.atoms.len();
        out.atoms.push(p);
        in_u.push(true);
        u_nodes.push(id);
        hang.push((Some(id), top));
    }

    u_nodes.sort_unstable();
    let u_edges: Vec<Vec<VarId>> = u_nodes.iter().map(|&a| out.atoms[a].vars.clone()).collect();
    let u_tree = gyo_reduce(&u_edges).map_err(|residue| QueryError::NotFreeConnex {
        residue: residue.iter().map(|&i| out.atoms[u_nodes[i]].name.clone()).collect(),
    })?;

    let n = out.atoms.len();
    let mut all_edges: Vec<(usize, usize)> =
        u_tree.iter().map(|&(a, b)| (u_nodes[a], u_nodes[b])).collect();
    all_edges.extend(inner_edges);
    for (p, top) in hang {
        all_edges.push((p.unwrap_or(u_nodes[0]), top));
    }
    let root = deepest_root(n, &all_edges, &u_nodes);
    let tree = JoinTree::from_edges(n, &all_edges, root);
    debug_assert!(tree.satisfies_running_intersection(&out.hyperedges()));
    Ok(FreeConnexTree {
        query: out,
        tree,
        in_u,
    })
}
