use serde::Serialize;

use crate::circle::{CircleModel, Footprint, LoopType};

use super::sampler::{LoopRecord, SoupSample};

/// Cluster structure of one soup sample. Edge e joins labels e+1 and e+2
/// (mod n); vertices are reported as labels 1..n.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClusterStats {
    pub n: usize,
    /// labels e+1 of open edges
    pub open_edges: Vec<usize>,
    pub partition: Vec<Vec<usize>>,
    pub k_n: usize,
    /// S^(n): sorted left endpoints of closed edges
    pub closed_left_endpoints: Vec<usize>,
    pub g: Option<usize>,
    pub d: Option<usize>,
    pub j: Option<usize>,
    pub k: Option<usize>,
    /// lifted extents of O3 loops (0 when there is none)
    pub a: u64,
    pub b: u64,
    pub type_counts: [u64; 4],
}

/// Streams loop footprints and produces the cluster statistics.
#[derive(Debug, Clone)]
pub struct ClusterAccumulator {
    n: usize,
    diff: Vec<i64>,
    all_open: bool,
    a: u64,
    b: u64,
    type_counts: [u64; 4],
}

fn type_index(t: LoopType) -> usize {
    match t {
        LoopType::O1 => 0,
        LoopType::O2 => 1,
        LoopType::O3 => 2,
        LoopType::O4 => 3,
    }
}

impl ClusterAccumulator {
    pub fn new(n: usize) -> Self {
        ClusterAccumulator { n, diff: vec![0; n + 1], all_open: false, a: 0, b: 0, type_counts: [0; 4] }
    }

    pub fn add(&mut self, fp: &Footprint) {
        let t = fp.loop_type();
        self.type_counts[type_index(t)] += 1;
        if let Some((a, b)) = fp.lift_extent() {
            self.a = self.a.max(a);
            self.b = self.b.max(b);
        }
        match fp.opened_edges() {
            None => self.all_open = true,
            Some((_, 0)) => {}
            Some((first, count)) => {
                let end = first + count;
                self.diff[first] += 1;
                if end <= self.n {
                    self.diff[end] -= 1;
                } else {
                    self.diff[self.n] -= 1;
                    self.diff[0] += 1;
                    self.diff[end - self.n] -= 1;
                }
            }
        }
    }

    /// Open flags per edge (0-based).
    pub fn open(&self) -> Vec<bool> {
        if self.all_open {
            return vec![true; self.n];
        }
        let mut acc = 0;
        (0..self.n)
            .map(|e| {
                acc += self.diff[e];
                acc > 0
            })
            .collect()
    }

    pub fn finish(&self) -> ClusterStats {
        let n = self.n;
        let open = self.open();
        let closed: Vec<usize> = (0..n).filter(|&e| !open[e]).collect();
        let k_n = if closed.len() >= 2 { closed.len() } else { 1 };
        let partition = if closed.len() < 2 {
            vec![(1..=n).collect()]
        } else {
            // cluster i runs from closed[i]+1 to closed[i+1] (cyclically)
            let mut parts = Vec::with_capacity(closed.len());
            for (i, &e) in closed.iter().enumerate() {
                let next = closed[(i + 1) % closed.len()];
                let mut part = Vec::new();
                let mut v = (e + 1) % n;
                loop {
                    part.push(v + 1);
                    if v == next {
                        break;
                    }
                    v = (v + 1) % n;
                }
                parts.push(part);
            }
            parts.sort_by_key(|p| p[0]);
            parts
        };
        let (g, d) = if k_n >= 2 { (Some(n - 1 - closed[closed.len() - 1]), Some(closed[0])) } else { (None, None) };
        let no_o1 = self.type_counts[0] == 0;
        let (j, k) = if no_o1 { (g, d) } else { (None, None) };
        ClusterStats {
            n,
            open_edges: (0..n).filter(|&e| open[e]).map(|e| e + 1).collect(),
            partition,
            k_n,
            closed_left_endpoints: closed.iter().map(|&e| e + 1).collect(),
            g,
            d,
            j,
            k,
            a: self.a,
            b: self.b,
            type_counts: self.type_counts,
        }
    }
}

pub fn cluster_stats(n: usize, loops: &[LoopRecord]) -> ClusterStats {
    let mut acc = ClusterAccumulator::new(n);
    for l in loops {
        acc.add(&l.footprint);
    }
    acc.finish()
}

pub fn extract_clusters(model: &CircleModel, sample: &SoupSample) -> ClusterStats {
    debug_assert_eq!(model.n(), sample.n);
    cluster_stats(model.n(), &sample.loops)
}

impl ClusterStats {
    pub fn single_partition(&self) -> bool {
        self.k_n == 1
    }

    /// Bitmask of open edges (bit e ↔ edge e), for n ≤ 64.
    pub fn open_mask(&self) -> u64 {
        self.open_edges.iter().fold(0, |m, &e| m | 1 << (e - 1))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circle::Loop;

    fn stats(n: usize, loops: &[&[usize]]) -> ClusterStats {
        let mut acc = ClusterAccumulator::new(n);
        for l in loops {
            acc.add(&Loop::new(l, n).unwrap().footprint());
        }
        acc.finish()
    }

    #[test]
    fn empty_soup() {
        let s = stats(5, &[]);
        assert_eq!(s.k_n, 5);
        assert_eq!(s.partition, vec![vec![1], vec![2], vec![3], vec![4], vec![5]]);
        assert_eq!(s.closed_left_endpoints, vec![1, 2, 3, 4, 5]);
        assert_eq!((s.g, s.d), (Some(0), Some(0)));
        assert_eq!((s.j, s.k), (Some(0), Some(0)));
    }

    #[test]
    fn covering_loop_single_partition() {
        let s = stats(5, &[&[1, 2, 3, 4, 5]]);
        assert!(s.single_partition());
        assert_eq!(s.partition, vec![vec![1, 2, 3, 4, 5]]);
        assert_eq!(s.g, None);
    }

    #[test]
    fn one_short_loop() {
        let s = stats(5, &[&[1, 2]]);
        assert_eq!(s.partition, vec![vec![1, 2], vec![3], vec![4], vec![5]]);
        assert_eq!((s.g, s.d), (Some(0), Some(1)));
        assert_eq!((s.a, s.b), (0, 1));
        assert_eq!(s.k_n, 4);
    }

    #[test]
    fn wrapping_and_single_closed_edge() {
        let s = stats(6, &[&[5, 6, 1, 2, 1, 6]]);
        assert_eq!(s.open_edges, vec![1, 5, 6]);
        assert_eq!((s.g, s.d), (Some(2), Some(1)));
        assert_eq!((s.a, s.b), (2, 1));
        assert!(s.partition.contains(&vec![5, 6, 1, 2]));
        // one closed edge leaves one cluster
        let s = stats(4, &[&[1, 2, 3, 2]]);
        let s2 = stats(4, &[&[1, 2, 3, 2], &[3, 4]]);
        assert_eq!(s.k_n, 2);
        assert_eq!(s2.closed_left_endpoints, vec![4]);
        assert_eq!(s2.k_n, 1);
        assert_eq!(s2.g, None);
    }

    #[test]
    fn o1_loops_hide_jk() {
        let s = stats(6, &[&[3, 4]]);
        assert_eq!((s.j, s.k), (None, None));
        assert_eq!((s.g, s.d), (Some(0), Some(0)));
    }
}
