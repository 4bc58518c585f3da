//! Precedence-graph structure: strongly connected components and the
//! condensation.
//!
//! G(A) has an arc i -> j exactly when A_ij is finite. The SCC partition
//! drives everything downstream: circuit means are maximized per class,
//! closures diverge exactly on walks through supercritical classes, and
//! cyclicities combine over classes by lcm.

use crate::matrix::TropMatrix;

/// Strongly connected components of a graph on nodes 0..n.
///
/// Classes are numbered so that `classes` is sorted by smallest member, and
/// each class lists its members in increasing order. `condensation` holds
/// the arcs between distinct classes (deduplicated, sorted).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SccPartition {
    pub class_of: Vec<usize>,
    pub classes: Vec<Vec<usize>>,
    pub condensation: Vec<(usize, usize)>,
}

impl SccPartition {
    pub fn num_classes(&self) -> usize {
        self.classes.len()
    }

    /// Irreducible means one class covering every node (so n >= 1 and the
    /// graph is strongly connected).
    pub fn is_irreducible(&self) -> bool {
        self.classes.len() == 1 && !self.classes[0].is_empty()
    }
}

/// SCCs of G(A) by Tarjan's algorithm, iterative to keep large graphs off
/// the call stack.
pub fn scc_partition(a: &TropMatrix) -> SccPartition {
    let n = a.n();
    const UNSET: usize = usize::MAX;
    let mut index = vec![UNSET; n];
    let mut lowlink = vec![0usize; n];
    let mut on_stack = vec![false; n];
    let mut stack: Vec<usize> = Vec::new();
    let mut next_index = 0usize;
    // raw class ids in Tarjan pop order (reverse topological); renumbered below
    let mut raw_class = vec![UNSET; n];
    let mut raw_count = 0usize;

    // Each frame is (node, position in its arc list).
    let mut call: Vec<(usize, usize)> = Vec::new();
    for root in 0..n {
        if index[root] != UNSET {
            continue;
        }
        call.push((root, 0));
        index[root] = next_index;
        lowlink[root] = next_index;
        next_index += 1;
        stack.push(root);
        on_stack[root] = true;

        while let Some(&mut (v, ref mut pos)) = call.last_mut() {
            if let Some(&(w, _)) = a.row(v).get(*pos) {
                *pos += 1;
                if index[w] == UNSET {
                    index[w] = next_index;
                    lowlink[w] = next_index;
                    next_index += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call.push((w, 0));
                } else if on_stack[w] && index[w] < lowlink[v] {
                    lowlink[v] = index[w];
                }
            } else {
                call.pop();
                if let Some(&(parent, _)) = call.last() {
                    if lowlink[v] < lowlink[parent] {
                        lowlink[parent] = lowlink[v];
                    }
                }
                if lowlink[v] == index[v] {
                    loop {
                        let w = stack.pop().expect("tarjan stack underflow");
                        on_stack[w] = false;
                        raw_class[w] = raw_count;
                        if w == v {
                            break;
                        }
                    }
                    raw_count += 1;
                }
            }
        }
    }

    // Renumber classes by smallest member so ids are stable and readable.
    let mut members: Vec<Vec<usize>> = vec![Vec::new(); raw_count];
    for v in 0..n {
        members[raw_class[v]].push(v);
    }
    let mut order: Vec<usize> = (0..raw_count).collect();
    order.sort_by_key(|&c| members[c][0]);
    let mut renumber = vec![0usize; raw_count];
    for (new_id, &old_id) in order.iter().enumerate() {
        renumber[old_id] = new_id;
    }
    let mut class_of = vec![0usize; n];
    for v in 0..n {
        class_of[v] = renumber[raw_class[v]];
    }
    let mut classes: Vec<Vec<usize>> = vec![Vec::new(); raw_count];
    for v in 0..n {
        classes[class_of[v]].push(v);
    }

    let mut condensation: Vec<(usize, usize)> = a
        .entries()
        .map(|(i, j, _)| (class_of[i], class_of[j]))
        .filter(|&(ci, cj)| ci != cj)
        .collect();
    condensation.sort_unstable();
    condensation.dedup();

    SccPartition {
        class_of,
        classes,
        condensation,
    }
}

/// Nodes reachable from `start` by walks of length >= 1, by BFS.
pub fn reachable_from(a: &TropMatrix, start: usize) -> Vec<bool> {
    let n = a.n();
    let mut seen = vec![false; n];
    let mut queue: Vec<usize> = a.row(start).iter().map(|&(j, _)| j).collect();
    for &j in &queue {
        seen[j] = true;
    }
    while let Some(v) = queue.pop() {
        for &(w, _) in a.row(v) {
            if !seen[w] {
                seen[w] = true;
                queue.push(w);
            }
        }
    }
    seen
}
