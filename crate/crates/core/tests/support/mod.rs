//! Independent oracles on small circles: brute-force path sums over step
//! sequences, written without the library's closed forms or loop types.

#![allow(dead_code)]

use std::collections::HashMap;

/// Walk statistics that decide every predicate used below: the lifted
/// height range [lo, hi] of a closed walk and its net displacement.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Shape {
    pub lo: i64,
    pub hi: i64,
    pub disp: i64,
}

/// Σ over closed walks of length 2..=max_len of weight/length, grouped by
/// shape (start vertex 0; translate for other starts). Weight = cw^{#up} ccw^{#down}.
pub fn shape_sums(n: usize, cw: f64, ccw: f64, max_len: usize) -> HashMap<Shape, f64> {
    let l = max_len as i64;
    let side = (2 * l + 1) as usize;
    // state (h, lo, hi) → weight; dense over lo ∈ [−L, 0], hi ∈ [0, L], h ∈ [−L, L]
    let idx = |h: i64, lo: i64, hi: i64| (((lo + l) as usize * (l as usize + 1) + hi as usize) * side) + (h + l) as usize;
    let size = (l as usize + 1) * (l as usize + 1) * side;
    let mut cur = vec![0.0f64; size];
    cur[idx(0, 0, 0)] = 1.0;
    let mut out: HashMap<Shape, f64> = HashMap::new();
    for k in 1..=max_len {
        let mut next = vec![0.0f64; size];
        for lo in -l..=0 {
            for hi in 0..=l {
                for h in lo..=hi {
                    let w = cur[idx(h, lo, hi)];
                    if w == 0.0 {
                        continue;
                    }
                    if h < l {
                        next[idx(h + 1, lo, hi.max(h + 1))] += w * cw;
                    }
                    if h > -l {
                        next[idx(h - 1, lo.min(h - 1), hi)] += w * ccw;
                    }
                }
            }
        }
        for lo in -l..=0 {
            for hi in 0..=l {
                let mut h = lo.div_euclid(n as i64) * n as i64;
                while h <= hi {
                    if h >= lo {
                        let w = next[idx(h, lo, hi)];
                        if w != 0.0 {
                            *out.entry(Shape { lo, hi, disp: h }).or_default() += w / k as f64;
                        }
                    }
                    h += n as i64;
                }
            }
        }
        cur = next;
    }
    out
}

/// Vertices (0-based) a walk from `start` with this shape visits.
pub fn visited(n: usize, start: usize, s: Shape) -> Vec<usize> {
    let width = (s.hi - s.lo + 1) as usize;
    if width >= n {
        return (0..n).collect();
    }
    (s.lo..=s.hi).map(|h| (start as i64 + h).rem_euclid(n as i64) as usize).collect()
}

/// Edges (left endpoint, 0-based) the walk traverses.
pub fn traversed(n: usize, start: usize, s: Shape) -> Vec<usize> {
    let width = (s.hi - s.lo) as usize;
    if width >= n {
        return (0..n).collect();
    }
    (s.lo..s.hi).map(|h| (start as i64 + h).rem_euclid(n as i64) as usize).collect()
}

/// Copies of vertex 0 in the lifted range of a walk from `start`.
pub fn copies_of_zero(n: usize, start: usize, s: Shape) -> i64 {
    let n = n as i64;
    (s.lo..=s.hi).filter(|h| (start as i64 + h).rem_euclid(n) == 0).count() as i64
}

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Masses {
    /// avoids vertex 0
    pub avoid: f64,
    /// non-zero winding
    pub winding: f64,
    /// visits 0, no winding, one copy of 0 in the lift
    pub single: f64,
    /// visits 0, no winding, several copies of 0 in the lift
    pub covering: f64,
}

impl Masses {
    pub fn total(&self) -> f64 {
        self.avoid + self.winding + self.single + self.covering
    }
    pub fn through_zero(&self) -> f64 {
        self.winding + self.single + self.covering
    }
}

/// Type decomposition of the truncated loop measure.
pub fn type_masses(n: usize, sums: &HashMap<Shape, f64>) -> Masses {
    let mut m = Masses::default();
    for (s, &w) in sums {
        for start in 0..n {
            if s.disp != 0 {
                m.winding += w;
                continue;
            }
            match copies_of_zero(n, start, *s) {
                0 => m.avoid += w,
                1 => m.single += w,
                _ => m.covering += w,
            }
        }
    }
    m
}

/// Truncated mass of loops staying inside `set` (0-based vertices).
pub fn mass_inside(n: usize, sums: &HashMap<Shape, f64>, set: &[usize]) -> f64 {
    let mut total = 0.0;
    for (s, &w) in sums {
        for start in 0..n {
            if visited(n, start, *s).iter().all(|v| set.contains(v)) {
                total += w;
            }
        }
    }
    total
}

/// Truncated mass of loops traversing none of `edges` (left endpoints).
pub fn mass_avoiding(n: usize, sums: &HashMap<Shape, f64>, edges: &[usize]) -> f64 {
    let mut total = 0.0;
    for (s, &w) in sums {
        for start in 0..n {
            if !traversed(n, start, *s).iter().any(|e| edges.contains(e)) {
                total += w;
            }
        }
    }
    total
}

/// One loop class from the literal enumeration.
#[derive(Debug, Clone)]
pub struct ClassRecord {
    /// canonical (lexicographically least) rotation, 0-based vertices
    pub vertices: Vec<usize>,
    pub mass: f64,
    pub shape: Shape,
}

/// Every loop class with length 2..=max_len, by listing all closed walks
/// and merging rotations. Class mass = weight · period / length.
pub fn enumerate_classes(n: usize, cw: f64, ccw: f64, max_len: usize) -> Vec<ClassRecord> {
    let mut seen: HashMap<Vec<usize>, ClassRecord> = HashMap::new();
    for len in 2..=max_len {
        for bits in 0u64..(1 << len) {
            let ups = bits.count_ones() as i64;
            let disp = 2 * ups - len as i64;
            if disp.rem_euclid(n as i64) != 0 {
                continue;
            }
            for start in 0..n {
                let mut v = Vec::with_capacity(len);
                let mut h = 0i64;
                for i in 0..len {
                    v.push((start as i64 + h).rem_euclid(n as i64) as usize);
                    h += if bits >> i & 1 == 1 { 1 } else { -1 };
                }
                let rots: Vec<Vec<usize>> = (0..len).map(|r| [&v[r..], &v[..r]].concat()).collect();
                let canon = rots.iter().min().unwrap().clone();
                if seen.contains_key(&canon) {
                    continue;
                }
                let period = (1..=len).find(|&r| len % r == 0 && rots[r % len] == v).unwrap();
                let weight = cw.powi(ups as i32) * ccw.powi((len as i64 - ups) as i32);
                // shape as seen from the canonical start: shift heights
                let shift = rots.iter().position(|r| *r == canon).unwrap();
                let mut hh = 0i64;
                let mut heights = vec![0i64];
                for i in 0..len {
                    hh += if bits >> i & 1 == 1 { 1 } else { -1 };
                    heights.push(hh);
                }
                let base = heights[shift];
                let (lo, hi) = heights.iter().fold((i64::MAX, i64::MIN), |(a, b), &x| (a.min(x - base), b.max(x - base)));
                seen.insert(canon.clone(), ClassRecord { vertices: canon, mass: weight * period as f64 / len as f64, shape: Shape { lo, hi, disp } });
            }
        }
    }
    seen.into_values().collect()
}

/// Type masses from the literal class list (start vertex = canonical start).
pub fn class_type_masses(n: usize, classes: &[ClassRecord]) -> Masses {
    let mut m = Masses::default();
    for c in classes {
        let start = c.vertices[0];
        if c.shape.disp != 0 {
            m.winding += c.mass;
            continue;
        }
        match copies_of_zero(n, start, c.shape) {
            0 => m.avoid += c.mass,
            1 => m.single += c.mass,
            _ => m.covering += c.mass,
        }
    }
    m
}
