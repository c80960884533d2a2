//! Fill-reducing ordering by nested dissection with BFS level-set separators.

const LEAF_SIZE: usize = 48;

/// Returns an elimination order (new position -> old index) for the symmetric
/// graph `adj`. Separators are eliminated after the two parts they split.
pub fn nested_dissection(adj: &[Vec<usize>]) -> Vec<usize> {
    let n = adj.len();
    let mut ctx = Ctx {
        adj,
        stamp: vec![0; n],
        level: vec![usize::MAX; n],
        next_stamp: 1,
        order: Vec::with_capacity(n),
    };
    ctx.dissect((0..n).collect());
    debug_assert_eq!(ctx.order.len(), n);
    ctx.order
}

struct Ctx<'a> {
    adj: &'a [Vec<usize>],
    stamp: Vec<usize>,
    level: Vec<usize>,
    next_stamp: usize,
    order: Vec<usize>,
}

impl Ctx<'_> {
    fn dissect(&mut self, nodes: Vec<usize>) {
        if nodes.len() <= LEAF_SIZE {
            self.order.extend(nodes);
            return;
        }
        let s = self.next_stamp;
        self.next_stamp += 1;
        for &v in &nodes {
            self.stamp[v] = s;
        }

        let (mut levels, reached) = self.bfs(nodes[0], s);
        if reached < nodes.len() {
            // disconnected: split off the component containing nodes[0]
            let comp: Vec<usize> = levels.into_iter().flatten().collect();
            let mark = self.next_stamp;
            self.next_stamp += 1;
            for &v in &comp {
                self.stamp[v] = mark;
            }
            let rest: Vec<usize> = nodes.into_iter().filter(|&v| self.stamp[v] != mark).collect();
            self.dissect(comp);
            self.dissect(rest);
            return;
        }

        // pseudo-peripheral start node
        let mut ecc = levels.len();
        for _ in 0..4 {
            let last = levels.last().expect("bfs yields at least one level");
            let start = *last.iter().min_by_key(|&&v| self.adj[v].len()).expect("nonempty level");
            let (cand, _) = self.bfs(start, s);
            if cand.len() > ecc {
                ecc = cand.len();
                levels = cand;
            } else {
                break;
            }
        }

        if levels.len() < 3 {
            self.order.extend(nodes);
            return;
        }
        let half = nodes.len() / 2;
        let mut acc = 0;
        let mut split = 1;
        for (l, lev) in levels.iter().enumerate() {
            acc += lev.len();
            if acc >= half {
                split = l.clamp(1, levels.len() - 2);
                break;
            }
        }
        for (l, lev) in levels.iter().enumerate() {
            for &v in lev {
                self.level[v] = l;
            }
        }
        let mut part_a: Vec<usize> = levels[..split].iter().flatten().copied().collect();
        let part_b: Vec<usize> = levels[split + 1..].iter().flatten().copied().collect();
        let mut sep = Vec::with_capacity(levels[split].len());
        for &v in &levels[split] {
            // separator nodes with no neighbour beyond the separator can join part A
            if self.adj[v].iter().any(|&w| self.stamp[w] == s && self.level[w] > split) {
                sep.push(v);
            } else {
                part_a.push(v);
            }
        }
        self.dissect(part_a);
        self.dissect(part_b);
        self.order.extend(sep);
    }

    /// BFS restricted to nodes carrying stamp `s`; returns levels and reached count.
    fn bfs(&mut self, root: usize, s: usize) -> (Vec<Vec<usize>>, usize) {
        let visit = self.next_stamp;
        self.next_stamp += 1;
        // nodes carry stamp `s`; visited ones are temporarily re-stamped
        let mut levels = vec![vec![root]];
        self.stamp[root] = visit;
        let mut reached = 1;
        loop {
            let mut next = Vec::new();
            for &v in levels.last().unwrap() {
                for &w in &self.adj[v] {
                    if self.stamp[w] == s {
                        self.stamp[w] = visit;
                        next.push(w);
                    }
                }
            }
            if next.is_empty() {
                break;
            }
            reached += next.len();
            levels.push(next);
        }
        for lev in &levels {
            for &v in lev {
                self.stamp[v] = s;
            }
        }
        (levels, reached)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid(n: usize) -> Vec<Vec<usize>> {
        let id = |i: usize, j: usize| j * n + i;
        let mut adj = vec![Vec::new(); n * n];
        for j in 0..n {
            for i in 0..n {
                if i + 1 < n {
                    adj[id(i, j)].push(id(i + 1, j));
                    adj[id(i + 1, j)].push(id(i, j));
                }
                if j + 1 < n {
                    adj[id(i, j)].push(id(i, j + 1));
                    adj[id(i, j + 1)].push(id(i, j));
                }
            }
        }
        adj
    }

    #[test]
    fn permutation_is_complete() {
        let adj = grid(30);
        let mut order = nested_dissection(&adj);
        order.sort_unstable();
        assert_eq!(order, (0..900).collect::<Vec<_>>());
    }

    #[test]
    fn disconnected_graph() {
        let mut adj = grid(10);
        adj.extend(vec![Vec::new(); 70]);
        let mut order = nested_dissection(&adj);
        order.sort_unstable();
        assert_eq!(order, (0..170).collect::<Vec<_>>());
    }
}
