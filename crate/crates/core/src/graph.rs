//! Small directed-graph helpers shared by the model and the spectral code.
//!
//! Graphs are adjacency lists over `0..len`; parallel edges are allowed and
//! ignored by every routine here.

/// Strongly connected components in reverse topological order of the
/// condensation (sinks first), as produced by Tarjan's algorithm.
pub(crate) fn strongly_connected_components(adj: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let len = adj.len();
    let mut index = vec![usize::MAX; len];
    let mut low = vec![0usize; len];
    let mut on_stack = vec![false; len];
    let mut stack = Vec::new();
    let mut comps = Vec::new();
    let mut next_index = 0usize;
    // explicit call stack of (vertex, position in its adjacency list)
    let mut calls: Vec<(usize, usize)> = Vec::new();

    for root in 0..len {
        if index[root] != usize::MAX {
            continue;
        }
        calls.push((root, 0));
        index[root] = next_index;
        low[root] = next_index;
        next_index += 1;
        stack.push(root);
        on_stack[root] = true;

        while let Some(&mut (v, ref mut pos)) = calls.last_mut() {
            if *pos < adj[v].len() {
                let w = adj[v][*pos];
                *pos += 1;
                if index[w] == usize::MAX {
                    index[w] = next_index;
                    low[w] = next_index;
                    next_index += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    calls.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
                continue;
            }
            calls.pop();
            if let Some(&(parent, _)) = calls.last() {
                low[parent] = low[parent].min(low[v]);
            }
            if low[v] == index[v] {
                let mut comp = Vec::new();
                loop {
                    let w = stack.pop().expect("tarjan stack underflow");
                    on_stack[w] = false;
                    comp.push(w);
                    if w == v {
                        break;
                    }
                }
                comp.sort_unstable();
                comps.push(comp);
            }
        }
    }
    comps
}

/// Vertices reachable from `sources` by paths of length >= 0.
pub(crate) fn reachable_from(adj: &[Vec<usize>], sources: impl IntoIterator<Item = usize>) -> Vec<bool> {
    let mut seen = vec![false; adj.len()];
    let mut work: Vec<usize> = Vec::new();
    for s in sources {
        if !seen[s] {
            seen[s] = true;
            work.push(s);
        }
    }
    while let Some(v) = work.pop() {
        for &w in &adj[v] {
            if !seen[w] {
                seen[w] = true;
                work.push(w);
            }
        }
    }
    seen
}
