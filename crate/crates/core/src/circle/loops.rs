use serde::{Serialize, Serializer};

use super::model::CircleModel;
use crate::error::{Error, Result};

fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidLoop(msg.into())
}

/// A rooted nearest-neighbour cycle (x_1, …, x_k), k ≥ 2. Stored 0-based;
/// the public constructors take the 1-based labels 1..n.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PointedLoop {
    n: usize,
    vertices: Vec<u32>,
}

#[inline]
fn step(n: usize, x: u32, y: u32) -> Option<i64> {
    let (x, y) = (x as usize, y as usize);
    if y == (x + 1) % n {
        Some(1)
    } else if x == (y + 1) % n {
        Some(-1)
    } else {
        None
    }
}

impl PointedLoop {
    pub fn new(labels: &[usize], n: usize) -> Result<Self> {
        if labels.iter().any(|&l| l == 0 || l > n) {
            return Err(invalid(format!("labels must lie in 1..={n}")));
        }
        PointedLoop::from_internal(labels.iter().map(|&l| (l - 1) as u32).collect(), n)
    }

    pub fn from_internal(vertices: Vec<u32>, n: usize) -> Result<Self> {
        if n < 3 {
            return Err(invalid("the circle needs n >= 3"));
        }
        if vertices.len() < 2 {
            return Err(invalid("a non-trivial loop has at least 2 vertices"));
        }
        let k = vertices.len();
        for i in 0..k {
            let (x, y) = (vertices[i], vertices[(i + 1) % k]);
            if x as usize >= n || y as usize >= n {
                return Err(invalid(format!("vertex out of range for n={n}")));
            }
            if step(n, x, y).is_none() {
                return Err(invalid(format!("vertices {} and {} are not adjacent", x + 1, y + 1)));
            }
        }
        Ok(PointedLoop { n, vertices })
    }

    pub fn n(&self) -> usize {
        self.n
    }
    pub fn len(&self) -> usize {
        self.vertices.len()
    }
    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }
    pub fn internal(&self) -> &[u32] {
        &self.vertices
    }
    pub fn labels(&self) -> Vec<usize> {
        self.vertices.iter().map(|&v| v as usize + 1).collect()
    }

    /// Signed steps ±1, including the closing step x_k → x_1.
    pub fn steps(&self) -> impl Iterator<Item = i64> + '_ {
        let k = self.vertices.len();
        (0..k).map(move |i| step(self.n, self.vertices[i], self.vertices[(i + 1) % k]).unwrap())
    }

    pub fn rotated(&self, by: usize) -> PointedLoop {
        let mut v = self.vertices.clone();
        let k = v.len();
        v.rotate_left(by % k);
        PointedLoop { n: self.n, vertices: v }
    }

    pub fn rotation_number(&self) -> i64 {
        self.steps().sum::<i64>() / self.n as i64
    }
}

/// Start index of the lexicographically least rotation (two-pointer scan).
pub(crate) fn least_rotation<T: Ord>(s: &[T]) -> usize {
    let n = s.len();
    let (mut i, mut j, mut k) = (0usize, 1usize, 0usize);
    while i < n && j < n && k < n {
        let a = &s[(i + k) % n];
        let b = &s[(j + k) % n];
        if a == b {
            k += 1;
            continue;
        }
        if a > b {
            i += k + 1;
        } else {
            j += k + 1;
        }
        if i == j {
            j += 1;
        }
        k = 0;
    }
    i.min(j)
}

/// Smallest p dividing k with s rotated by p equal to s.
pub(crate) fn rotation_period<T: Eq>(s: &[T]) -> usize {
    let k = s.len();
    let mut pi = vec![0usize; k];
    for i in 1..k {
        let mut j = pi[i - 1];
        while j > 0 && s[i] != s[j] {
            j = pi[j - 1];
        }
        if s[i] == s[j] {
            j += 1;
        }
        pi[i] = j;
    }
    let per = k - pi[k - 1];
    if k % per == 0 {
        per
    } else {
        k
    }
}

/// A loop: the rotation class of a pointed loop, held as its canonical
/// (lexicographically least) rotation.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Loop {
    n: usize,
    canonical: Vec<u32>,
    period: usize,
    rot: i64,
}

impl Loop {
    pub fn from_pointed(p: &PointedLoop) -> Loop {
        let start = least_rotation(&p.vertices);
        let mut canonical = p.vertices.clone();
        canonical.rotate_left(start);
        let period = rotation_period(&canonical);
        Loop { n: p.n, rot: p.rotation_number(), canonical, period }
    }

    pub fn new(labels: &[usize], n: usize) -> Result<Loop> {
        PointedLoop::new(labels, n).map(|p| Loop::from_pointed(&p))
    }

    pub fn n(&self) -> usize {
        self.n
    }
    pub fn len(&self) -> usize {
        self.canonical.len()
    }
    pub fn is_empty(&self) -> bool {
        self.canonical.is_empty()
    }
    pub fn period(&self) -> usize {
        self.period
    }
    pub fn rot(&self) -> i64 {
        self.rot
    }
    pub fn internal(&self) -> &[u32] {
        &self.canonical
    }
    pub fn labels(&self) -> Vec<usize> {
        self.canonical.iter().map(|&v| v as usize + 1).collect()
    }
    pub fn representative(&self) -> PointedLoop {
        PointedLoop { n: self.n, vertices: self.canonical.clone() }
    }
    pub fn visits(&self, label: usize) -> bool {
        label >= 1 && self.canonical.contains(&((label - 1) as u32))
    }

    pub fn footprint(&self) -> Footprint {
        Footprint::of_walk(self.n, &self.canonical)
    }
}

impl Serialize for Loop {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.labels().serialize(s)
    }
}

impl std::fmt::Display for Loop {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.labels().iter().map(|l| l.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, serde::Deserialize)]
pub enum LoopType {
    /// Avoids vertex 1.
    O1,
    /// Through 1 with non-zero rotation number.
    O2,
    /// Through 1, zero rotation, lift confined to [1−n, n−1].
    O3,
    /// Through 1, zero rotation, lift too wide.
    O4,
}

/// Height profile of a loop read from a base vertex: the lift visits every
/// height in [start+lo, start+hi] and ends at start+disp.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Footprint {
    pub n: usize,
    pub start: u32,
    pub lo: i64,
    pub hi: i64,
    pub disp: i64,
}

impl Footprint {
    pub fn of_walk(n: usize, vertices: &[u32]) -> Footprint {
        let k = vertices.len();
        let (mut h, mut lo, mut hi) = (0i64, 0i64, 0i64);
        for i in 0..k {
            h += step(n, vertices[i], vertices[(i + 1) % k]).expect("nearest-neighbour walk");
            lo = lo.min(h);
            hi = hi.max(h);
        }
        Footprint { n, start: vertices[0], lo, hi, disp: h }
    }

    fn abs_range(&self) -> (i64, i64) {
        (self.start as i64 + self.lo, self.start as i64 + self.hi)
    }

    /// Number of lifted copies of vertex 1 (heights ≡ 0 mod n) in the range.
    pub fn copies_of_origin(&self) -> i64 {
        let n = self.n as i64;
        let (a, b) = self.abs_range();
        b.div_euclid(n) - (a + n - 1).div_euclid(n) + 1
    }

    pub fn rot(&self) -> i64 {
        self.disp / self.n as i64
    }

    pub fn loop_type(&self) -> LoopType {
        let copies = self.copies_of_origin();
        if copies == 0 {
            LoopType::O1
        } else if self.disp != 0 {
            LoopType::O2
        } else if copies == 1 {
            LoopType::O3
        } else {
            LoopType::O4
        }
    }

    /// (A, B) = (−min, max) of the lift normalised to pass through 0; O3 only.
    pub fn lift_extent(&self) -> Option<(u64, u64)> {
        if self.loop_type() != LoopType::O3 {
            return None;
        }
        let n = self.n as i64;
        let (a, b) = self.abs_range();
        let m = (a + n - 1).div_euclid(n) * n;
        Some(((m - a) as u64, (b - m) as u64))
    }

    /// Opened edges as (first edge, count); edge e joins e and e+1 (0-based).
    /// `None` means every edge is opened.
    pub fn opened_edges(&self) -> Option<(usize, usize)> {
        let width = self.hi - self.lo;
        if width >= self.n as i64 {
            return None;
        }
        let (a, _) = self.abs_range();
        Some((a.rem_euclid(self.n as i64) as usize, width as usize))
    }
}

pub fn rotation_number(l: &PointedLoop, n: usize) -> Result<i64> {
    if l.n != n {
        return Err(invalid(format!("loop lives on n={}, asked for n={n}", l.n)));
    }
    Ok(l.rotation_number())
}

fn ln_weight(model: &CircleModel, steps: impl Iterator<Item = i64>) -> f64 {
    let (lc, lcc) = (model.step_cw().ln(), model.step_ccw().ln());
    steps.map(|s| if s > 0 { lc } else { lcc }).sum()
}

fn check_n(model: &CircleModel, n: usize) -> Result<()> {
    if model.n() != n {
        return Err(invalid(format!("loop lives on n={n}, model has n={}", model.n())));
    }
    Ok(())
}

/// (1/k) ∏ Q over the k steps of a pointed loop.
pub fn pointed_loop_mass(model: &CircleModel, l: &PointedLoop) -> Result<f64> {
    check_n(model, l.n)?;
    Ok((ln_weight(model, l.steps()) - (l.len() as f64).ln()).exp())
}

/// period × pointed mass: the push-forward of the pointed loop measure.
pub fn loop_mass(model: &CircleModel, l: &Loop) -> Result<f64> {
    let p = l.representative();
    Ok(l.period as f64 * pointed_loop_mass(model, &p)?)
}

pub fn classify_loop(model: &CircleModel, l: &Loop) -> LoopType {
    debug_assert_eq!(model.n(), l.n);
    l.footprint().loop_type()
}

/// A loop on Z, held as the least rotation of its height sequence.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct LiftedLoop {
    pub heights: Vec<i64>,
}

impl LiftedLoop {
    pub fn period(&self) -> usize {
        rotation_period(&self.heights)
    }

    /// Mass under the Z-walk with the same step weights as `model`.
    pub fn mass(&self, model: &CircleModel) -> f64 {
        let k = self.heights.len();
        let steps = (0..k).map(|i| self.heights[(i + 1) % k] - self.heights[i]);
        self.period() as f64 * (ln_weight(model, steps) - (k as f64).ln()).exp()
    }

    pub fn extent(&self) -> (i64, i64) {
        (*self.heights.iter().min().unwrap(), *self.heights.iter().max().unwrap())
    }
}

/// Lift of a zero-winding loop through vertex 1; `None` when the lift cannot
/// be confined to [1−n, n−1] (type O4).
pub fn lift_loop(l: &Loop, n: usize) -> Result<Option<LiftedLoop>> {
    if l.n != n {
        return Err(invalid(format!("loop lives on n={}, asked for n={n}", l.n)));
    }
    if l.rot != 0 {
        return Err(Error::Precondition(format!("lift needs rotation number 0, got {}", l.rot)));
    }
    if !l.visits(1) {
        return Err(Error::Precondition("lift needs a loop through vertex 1".into()));
    }
    let fp = l.footprint();
    if fp.loop_type() != LoopType::O3 {
        return Ok(None);
    }
    let ni = n as i64;
    let k = l.canonical.len();
    let mut h = l.canonical[0] as i64;
    let mut heights = Vec::with_capacity(k);
    heights.push(h);
    for i in 0..k - 1 {
        h += step(n, l.canonical[i], l.canonical[i + 1]).unwrap();
        heights.push(h);
    }
    let lo = *heights.iter().min().unwrap();
    let shift = (lo + ni - 1).div_euclid(ni) * ni;
    for x in heights.iter_mut() {
        *x -= shift;
    }
    let start = least_rotation(&heights);
    heights.rotate_left(start);
    Ok(Some(LiftedLoop { heights }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn model(n: usize, p: f64, c: f64) -> CircleModel {
        CircleModel::new(n, p, c, 1.0).unwrap()
    }

    #[test]
    fn pointed_masses() {
        let m = model(5, 0.5, 0.0);
        let l = PointedLoop::new(&[1, 2], 5).unwrap();
        assert!((pointed_loop_mass(&m, &l).unwrap() - 0.125).abs() < 1e-15);
        let r = PointedLoop::new(&[2, 1], 5).unwrap();
        assert_eq!(pointed_loop_mass(&m, &l).unwrap(), pointed_loop_mass(&m, &r).unwrap());
        let m = model(6, 0.6, 0.1);
        let cw = PointedLoop::new(&[1, 2, 3, 4, 5, 6], 6).unwrap();
        let want = (0.6f64 / 1.1).powi(6) / 6.0;
        assert!((pointed_loop_mass(&m, &cw).unwrap() - want).abs() < 1e-15);
    }

    #[test]
    fn invalid_loops() {
        assert!(PointedLoop::new(&[1, 3], 5).is_err());
        assert!(PointedLoop::new(&[1], 5).is_err());
        assert!(PointedLoop::new(&[1, 2, 3], 5).is_err()); // 3 → 1 is not a step
        assert!(PointedLoop::new(&[0, 1], 5).is_err());
        assert!(PointedLoop::new(&[5, 1], 5).is_ok());
    }

    #[test]
    fn loop_masses_and_periods() {
        let m = model(5, 0.5, 0.0);
        let l = Loop::new(&[1, 2], 5).unwrap();
        assert_eq!(l.period(), 2);
        assert!((loop_mass(&m, &l).unwrap() - 0.25).abs() < 1e-15);
        let m = model(5, 0.7, 0.3);
        let l = Loop::new(&[1, 2, 1, 2], 5).unwrap();
        assert_eq!((l.period(), l.len()), (2, 4));
        let (a, b) = (m.jump(0, 1), m.jump(1, 0));
        let want = 2.0 * 0.25 * a * a * b * b;
        assert!((loop_mass(&m, &l).unwrap() - want).abs() < 1e-15);
        // Σ over distinct pointed representatives
        let l = Loop::new(&[2, 3, 4, 3, 2, 1], 5).unwrap();
        let p = l.representative();
        let reps: std::collections::HashSet<_> = (0..p.len()).map(|i| p.rotated(i)).collect();
        let sum: f64 = reps.iter().map(|r| pointed_loop_mass(&m, r).unwrap()).sum();
        assert!((sum - loop_mass(&m, &l).unwrap()).abs() < 1e-16);
    }

    #[test]
    fn rotation_numbers() {
        for n in 3..8 {
            let cw: Vec<usize> = (1..=n).collect();
            let ccw: Vec<usize> = std::iter::once(1).chain((2..=n).rev()).collect();
            assert_eq!(rotation_number(&PointedLoop::new(&[1, 2], n).unwrap(), n).unwrap(), 0);
            assert_eq!(rotation_number(&PointedLoop::new(&cw, n).unwrap(), n).unwrap(), 1);
            assert_eq!(rotation_number(&PointedLoop::new(&ccw, n).unwrap(), n).unwrap(), -1);
        }
        let l = PointedLoop::new(&[1, 2, 3, 4, 1, 2, 3, 4], 4).unwrap();
        for i in 0..8 {
            assert_eq!(l.rotated(i).rotation_number(), 2);
        }
    }

    #[test]
    fn canonical_form() {
        let a = Loop::new(&[3, 2, 1, 2], 5).unwrap();
        let b = Loop::new(&[1, 2, 3, 2], 5).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.labels(), vec![1, 2, 3, 2]);
        assert_eq!(a.period(), 4);
        assert_eq!(serde_json::to_string(&a).unwrap(), "[1,2,3,2]");
    }

    #[test]
    fn classification() {
        let m = model(5, 0.5, 0.1);
        assert_eq!(classify_loop(&m, &Loop::new(&[2, 3], 5).unwrap()), LoopType::O1);
        assert_eq!(classify_loop(&m, &Loop::new(&[1, 2, 3, 4, 5], 5).unwrap()), LoopType::O2);
        assert_eq!(classify_loop(&m, &Loop::new(&[1, 2], 5).unwrap()), LoopType::O3);
        // goes all the way round and back: 1,2,…,5,1 then retraces
        let wide = Loop::new(&[1, 2, 3, 4, 5, 1, 5, 4, 3, 2], 5).unwrap();
        assert_eq!(wide.rot(), 0);
        assert_eq!(classify_loop(&m, &wide), LoopType::O4);
        assert_eq!(lift_loop(&wide, 5).unwrap(), None);
        // covers the circle without the literal 1,2,…,n,1 but its lift is too wide
        let sneaky = Loop::new(&[1, 2, 3, 4, 5, 4, 5, 1, 5, 4, 3, 2], 5).unwrap();
        assert_eq!(classify_loop(&m, &sneaky), LoopType::O4);
        // wide but confined: heights from −4 to 4
        let confined = Loop::new(&[1, 2, 3, 4, 5, 4, 3, 2, 1, 5, 4, 3, 2, 3, 4, 5], 5).unwrap();
        assert_eq!(classify_loop(&m, &confined), LoopType::O3);
        assert_eq!(confined.footprint().lift_extent(), Some((4, 4)));
        assert_eq!(confined.footprint().opened_edges(), None);
    }

    #[test]
    fn lifts() {
        let l = Loop::new(&[1, 2], 5).unwrap();
        let lift = lift_loop(&l, 5).unwrap().unwrap();
        assert_eq!(lift.heights, vec![0, 1]);
        let l = Loop::new(&[5, 1], 5).unwrap();
        assert_eq!(lift_loop(&l, 5).unwrap().unwrap().heights, vec![-1, 0]);
        let cw = Loop::new(&[1, 2, 3, 4, 5], 5).unwrap();
        assert!(matches!(lift_loop(&cw, 5), Err(Error::Precondition(_))));
        assert!(matches!(lift_loop(&Loop::new(&[2, 3], 5).unwrap(), 5), Err(Error::Precondition(_))));
        let m = model(5, 0.3, 0.2);
        let l = Loop::new(&[4, 5, 1, 2, 1, 5], 5).unwrap();
        let lift = lift_loop(&l, 5).unwrap().unwrap();
        assert_eq!(lift.extent(), (-2, 1));
        assert!((lift.mass(&m) - loop_mass(&m, &l).unwrap()).abs() < 1e-16);
    }

    #[test]
    fn footprint_edges() {
        let f = Loop::new(&[2, 3, 4, 3], 6).unwrap().footprint();
        assert_eq!(f.opened_edges(), Some((1, 2)));
        let f = Loop::new(&[5, 6, 1, 6], 6).unwrap().footprint();
        assert_eq!(f.opened_edges(), Some((4, 2)));
        assert_eq!(f.loop_type(), LoopType::O3);
        assert_eq!(f.lift_extent(), Some((2, 0)));
    }

    #[test]
    fn least_rotation_brute() {
        let cases: [&[u32]; 5] = [&[3, 1, 2, 1, 2], &[1, 1, 1], &[2, 1, 2, 1], &[0, 1, 0, 0, 1], &[5, 4, 3, 4]];
        for s in cases {
            let k = least_rotation(s);
            let best = (0..s.len())
                .map(|i| {
                    let mut v = s.to_vec();
                    v.rotate_left(i);
                    v
                })
                .min()
                .unwrap();
            let mut got = s.to_vec();
            got.rotate_left(k);
            assert_eq!(got, best);
        }
        assert_eq!(rotation_period(&[1, 2, 1, 2]), 2);
        assert_eq!(rotation_period(&[1, 2, 1]), 3);
        assert_eq!(rotation_period(&[7, 7, 7]), 1);
    }
}
