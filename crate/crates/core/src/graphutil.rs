//! Crate-private graph helpers shared by evaluators and solvers.

use alloc::vec;
use alloc::vec::Vec;

/// Strongly connected components of a digraph given by adjacency lists,
/// iterative Tarjan. Components are returned in the order Tarjan completes
/// them (reverse topological), each sorted ascending; fully deterministic.
pub(crate) fn strongly_connected_components(adj: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let n = adj.len();
    const UNSET: usize = usize::MAX;
    let mut index = vec![UNSET; n];
    let mut low = vec![0usize; n];
    let mut on_stack = vec![false; n];
    let mut stack: Vec<usize> = Vec::new();
    let mut components = Vec::new();
    let mut counter = 0usize;
    // Explicit DFS: (vertex, next child offset).
    let mut frames: Vec<(usize, usize)> = Vec::new();
    for root in 0..n {
        if index[root] != UNSET {
            continue;
        }
        frames.push((root, 0));
        index[root] = counter;
        low[root] = counter;
        counter += 1;
        stack.push(root);
        on_stack[root] = true;
        while let Some(&mut (v, ref mut child)) = frames.last_mut() {
            if *child < adj[v].len() {
                let w = adj[v][*child];
                *child += 1;
                if index[w] == UNSET {
                    index[w] = counter;
                    low[w] = counter;
                    counter += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    frames.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
            } else {
                frames.pop();
                if let Some(&mut (parent, _)) = frames.last_mut() {
                    low[parent] = low[parent].min(low[v]);
                }
                if low[v] == index[v] {
                    let mut component = Vec::new();
                    loop {
                        let w = stack.pop().expect("Tarjan stack underflow");
                        on_stack[w] = false;
                        component.push(w);
                        if w == v {
                            break;
                        }
                    }
                    component.sort_unstable();
                    components.push(component);
                }
            }
        }
    }
    components
}

/// True if the component can sustain an infinite walk: more than one vertex,
/// or a single vertex with a self-loop.
pub(crate) fn component_has_cycle(adj: &[Vec<usize>], component: &[usize]) -> bool {
    component.len() > 1 || adj[component[0]].contains(&component[0])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tarjan_on_mixed_graph() {
        // 0 -> 1 -> 2 -> 0 (one SCC), 3 -> 1 (singleton), 4 self-loop.
        let adj = vec![vec![1], vec![2], vec![0], vec![1], vec![4]];
        let comps = strongly_connected_components(&adj);
        assert_eq!(comps.len(), 3);
        assert!(comps.contains(&vec![0, 1, 2]));
        assert!(comps.contains(&vec![3]));
        assert!(comps.contains(&vec![4]));
        for comp in &comps {
            let cyclic = component_has_cycle(&adj, comp);
            match comp.len() {
                3 => assert!(cyclic),
                1 => assert_eq!(cyclic, comp[0] == 4),
                _ => unreachable!(),
            }
        }
    }

    #[test]
    fn reverse_topological_component_order() {
        // 0 -> 1 -> 2, all singletons: component for 2 completes first.
        let adj = vec![vec![1], vec![2], vec![]];
        let comps = strongly_connected_components(&adj);
        assert_eq!(comps, vec![vec![2], vec![1], vec![0]]);
    }
}
