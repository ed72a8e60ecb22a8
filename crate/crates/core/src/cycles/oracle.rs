use std::collections::VecDeque;

use super::girth::Girth;
use crate::code_model::BinaryParityCheck;

/// Exact girth of the Tanner graph of `h` by breadth-first search from every
/// bit node.
///
/// Bit nodes are `0..cols`, check nodes `cols..cols + rows`. Every cycle
/// passes through a bit node, and the BFS rooted on a vertex of a shortest
/// cycle closes it at exactly its length, so the minimum over all roots is
/// the girth.
pub fn girth_oracle(h: &BinaryParityCheck) -> Girth {
    let bits = h.col_count();
    let total = bits + h.row_count();
    let neighbors = |v: usize| -> (&[usize], usize) {
        if v < bits {
            (h.col(v), bits)
        } else {
            (h.row(v - bits), 0)
        }
    };

    let mut best = usize::MAX;
    let mut dist = vec![usize::MAX; total];
    let mut parent = vec![usize::MAX; total];
    let mut touched = Vec::new();
    let mut queue = VecDeque::new();

    for root in 0..bits {
        for &v in &touched {
            dist[v] = usize::MAX;
            parent[v] = usize::MAX;
        }
        touched.clear();
        queue.clear();

        dist[root] = 0;
        touched.push(root);
        queue.push_back(root);
        'bfs: while let Some(u) = queue.pop_front() {
            // any cycle closed from here is at least 2 * dist[u] + 1 long
            if 2 * dist[u] + 1 >= best {
                break;
            }
            let (adjacent, offset) = neighbors(u);
            for w in adjacent.iter().map(|&x| x + offset) {
                if w == parent[u] {
                    continue;
                }
                if dist[w] == usize::MAX {
                    dist[w] = dist[u] + 1;
                    parent[w] = u;
                    touched.push(w);
                    queue.push_back(w);
                } else {
                    best = best.min(dist[u] + dist[w] + 1);
                    if best == 4 {
                        break 'bfs;
                    }
                }
            }
        }
        if best == 4 {
            break;
        }
    }

    if best == usize::MAX {
        Girth::Acyclic
    } else {
        Girth::Exact(best)
    }
}
