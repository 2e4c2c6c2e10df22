//! Dinic's algorithm on `i128` capacities. Edges may be added between runs;
//! each run continues from the current residual graph.

use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;

pub(crate) const INF: i128 = i128::MAX / 4;

#[derive(Debug, Clone, Default)]
pub(crate) struct MaxFlow {
    adj: Vec<Vec<usize>>,
    to: Vec<usize>,
    cap: Vec<i128>,
    orig: Vec<i128>,
    level: Vec<u32>,
    iter: Vec<usize>,
}

impl MaxFlow {
    pub fn new(nodes: usize) -> Self {
        MaxFlow { adj: vec![Vec::new(); nodes], ..Default::default() }
    }

    pub fn add_node(&mut self) -> usize {
        self.adj.push(Vec::new());
        self.adj.len() - 1
    }

    /// Returns the id of the forward arc.
    pub fn add_edge(&mut self, from: usize, to: usize, cap: i128) -> usize {
        let id = self.to.len();
        self.to.push(to);
        self.cap.push(cap);
        self.orig.push(cap);
        self.adj[from].push(id);
        self.to.push(from);
        self.cap.push(0);
        self.orig.push(0);
        self.adj[to].push(id + 1);
        id
    }

    /// Flow currently on a forward arc.
    pub fn flow(&self, arc: usize) -> i128 {
        self.orig[arc] - self.cap[arc]
    }

    fn bfs(&mut self, s: usize, t: usize) -> bool {
        self.level.clear();
        self.level.resize(self.adj.len(), u32::MAX);
        self.level[s] = 0;
        let mut queue = VecDeque::new();
        queue.push_back(s);
        while let Some(v) = queue.pop_front() {
            for &e in &self.adj[v] {
                let w = self.to[e];
                if self.cap[e] > 0 && self.level[w] == u32::MAX {
                    self.level[w] = self.level[v] + 1;
                    queue.push_back(w);
                }
            }
        }
        self.level[t] != u32::MAX
    }

    fn blocking(&mut self, s: usize, t: usize) -> i128 {
        self.iter.clear();
        self.iter.resize(self.adj.len(), 0);
        let mut total = 0i128;
        let mut stack: Vec<usize> = Vec::new();
        let mut v = s;
        loop {
            if v == t {
                let push = stack.iter().map(|&e| self.cap[e]).min().unwrap_or(0);
                for &e in &stack {
                    self.cap[e] -= push;
                    self.cap[e ^ 1] += push;
                }
                total += push;
                stack.clear();
                v = s;
                continue;
            }
            let mut advanced = false;
            while self.iter[v] < self.adj[v].len() {
                let e = self.adj[v][self.iter[v]];
                let w = self.to[e];
                if self.cap[e] > 0 && self.level[w] == self.level[v] + 1 {
                    stack.push(e);
                    v = w;
                    advanced = true;
                    break;
                }
                self.iter[v] += 1;
            }
            if !advanced {
                self.level[v] = u32::MAX;
                match stack.pop() {
                    None => return total,
                    Some(e) => {
                        v = self.to[e ^ 1];
                        self.iter[v] += 1;
                    }
                }
            }
        }
    }

    /// Augments until no `s`-`t` path remains; returns the added amount.
    pub fn run(&mut self, s: usize, t: usize) -> i128 {
        let mut total = 0;
        while self.bfs(s, t) {
            total += self.blocking(s, t);
        }
        total
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diamond() {
        let mut g = MaxFlow::new(4);
        let a = g.add_edge(0, 1, 3);
        g.add_edge(0, 2, 2);
        g.add_edge(1, 2, 5);
        g.add_edge(1, 3, 2);
        g.add_edge(2, 3, 3);
        assert_eq!(g.run(0, 3), 5);
        assert_eq!(g.flow(a), 3);
    }

    #[test]
    fn incremental_edges() {
        let mut g = MaxFlow::new(3);
        g.add_edge(0, 1, 4);
        assert_eq!(g.run(0, 2), 0);
        g.add_edge(1, 2, INF);
        assert_eq!(g.run(0, 2), 4);
        assert_eq!(g.run(0, 2), 0);
    }
}
