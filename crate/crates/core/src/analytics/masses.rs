use serde::Serialize;

use crate::circle::CircleModel;
use crate::error::{param, Result};
use crate::numerics::special::{ln_cosh, ln_cosh_diff, ln_sinh, ln_sinh_scaled};
use crate::numerics::lu_log_det;

/// ln det(I − Q) on an arc of m consecutive vertices (m < n).
pub fn ln_det_arc(model: &CircleModel, m: usize) -> f64 {
    if m == 0 {
        return 0.0;
    }
    let r = model.r();
    // s̃^m · sinh((m+1)r)/sinh r, with the r → 0 limit (m+1)s̃^m
    m as f64 * model.root_scale().ln() + ln_sinh_scaled(r, (m + 1) as f64) - ln_sinh_scaled(r, 1.0)
}

/// ln det(I − Q) on the whole circle: 2s̃ⁿ(cosh nr − cosh nθ). `-inf` when
/// the determinant is not positive.
pub fn ln_det_circle(model: &CircleModel) -> f64 {
    let n = model.n() as f64;
    let lcd = ln_cosh_diff(n * model.r(), n * model.theta());
    std::f64::consts::LN_2 + n * model.root_scale().ln() + lcd
}

fn labels_to_mask(model: &CircleModel, f: &[usize]) -> Result<Vec<bool>> {
    let n = model.n();
    let mut mask = vec![false; n];
    for &x in f {
        if x == 0 || x > n {
            return Err(param(format!("vertex {x} outside 1..={n}")));
        }
        mask[x - 1] = true;
    }
    Ok(mask)
}

/// If the vertex set is a proper cyclic arc, its length.
fn arc_length(mask: &[bool]) -> Option<usize> {
    let n = mask.len();
    let size = mask.iter().filter(|&&b| b).count();
    // an arc has exactly one in→out boundary
    let boundaries = (0..n).filter(|&i| mask[i] && !mask[(i + 1) % n]).count();
    (boundaries == 1).then_some(size)
}

fn ln_det_dense(model: &CircleModel, vertices: &[usize], zero: impl Fn(usize, usize) -> bool) -> f64 {
    let k = vertices.len();
    let mut m = vec![0.0; k * k];
    for (i, &x) in vertices.iter().enumerate() {
        for (j, &y) in vertices.iter().enumerate() {
            let q = if zero(x, y) { 0.0 } else { model.jump(x, y) };
            m[i * k + j] = if i == j { 1.0 } else { -q };
        }
    }
    let (sign, ld) = lu_log_det(&mut m, k);
    if sign > 0.0 {
        ld
    } else {
        f64::NEG_INFINITY
    }
}

/// Mass of non-trivial loops staying inside the vertex set `f` (labels
/// 1..n): −ln det(I − Q_F). `+inf` when the restricted determinant is not
/// positive (c = 0 on the full circle).
pub fn mass_nontrivial_in(model: &CircleModel, f: &[usize]) -> Result<f64> {
    let mask = labels_to_mask(model, f)?;
    let size = mask.iter().filter(|&&b| b).count();
    if size <= 1 {
        return Ok(0.0);
    }
    let ld = if size == model.n() {
        ln_det_circle(model)
    } else if let Some(m) = arc_length(&mask) {
        ln_det_arc(model, m)
    } else {
        let vs: Vec<usize> = (0..model.n()).filter(|&i| mask[i]).collect();
        ln_det_dense(model, &vs, |_, _| false)
    };
    Ok(-ld)
}

pub fn total_mass(model: &CircleModel) -> f64 {
    -ln_det_circle(model)
}

/// Mass of loops using none of the directed edges in `edges` (label pairs).
pub fn mass_avoiding_edges(model: &CircleModel, edges: &[(usize, usize)]) -> Result<f64> {
    let n = model.n();
    let mut cut = vec![false; n * n];
    for &(x, y) in edges {
        if x == 0 || y == 0 || x > n || y > n || model.jump(x - 1, y - 1) == 0.0 {
            return Err(param(format!("({x},{y}) is not an edge of the {n}-circle")));
        }
        cut[(x - 1) * n + (y - 1)] = true;
    }
    let vs: Vec<usize> = (0..n).collect();
    Ok(-ln_det_dense(model, &vs, |x, y| cut[x * n + y]))
}

/// Mass of loops crossing the undirected edge {x, x+1} (label x) in either
/// direction. Cutting one edge leaves a path of n vertices.
pub fn mass_crossing_edge(model: &CircleModel, x: usize) -> Result<f64> {
    if x == 0 || x > model.n() {
        return Err(param(format!("edge label {x} outside 1..={}", model.n())));
    }
    Ok(total_mass(model) + ln_det_arc(model, model.n()))
}

/// μ(1 ∈ ℓ) = ln coth r + ln sinh nr − ln(cosh nr − cosh nθ).
pub fn mass_through_vertex1(model: &CircleModel) -> f64 {
    let (n, r) = (model.n() as f64, model.r());
    if r == 0.0 {
        return f64::INFINITY;
    }
    let lcd = ln_cosh_diff(n * r, n * model.theta());
    if lcd == f64::NEG_INFINITY {
        return f64::INFINITY;
    }
    ln_cosh(r) - ln_sinh(r) + ln_sinh(n * r) - lcd
}

/// Mass of zero-winding loops through 1 whose lift stays in [1−n, n−1]:
/// ln coth r + ln tanh nr (→ ln n as r → 0).
pub fn mass_o3(model: &CircleModel) -> f64 {
    let (n, r) = (model.n() as f64, model.r());
    ln_cosh(r) - ln_cosh(n * r) + ln_sinh_scaled(r, n) - ln_sinh_scaled(r, 1.0)
}

/// Mass of loops with non-zero rotation number (all pass through 1):
/// −ln(1 − e^{−n(r−θ)}) − ln(1 − e^{−n(r+θ)}).
pub fn mass_winding(model: &CircleModel) -> f64 {
    let (n, r, th) = (model.n() as f64, model.r(), model.theta());
    if r <= th.abs() {
        return f64::INFINITY;
    }
    let term = |x: f64| -(-(-x).exp()).ln_1p();
    term(n * (r - th)) + term(n * (r + th))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TypeMasses {
    pub o1: f64,
    pub o2: f64,
    pub o3: f64,
    pub o4: f64,
}

impl TypeMasses {
    pub fn total(&self) -> f64 {
        self.o1 + self.o2 + self.o3 + self.o4
    }
}

pub fn mass_by_type(model: &CircleModel) -> TypeMasses {
    let o1 = -ln_det_arc(model, model.n() - 1);
    let o2 = mass_winding(model);
    let o3 = mass_o3(model);
    let o4 = mass_through_vertex1(model) - o3 - o2;
    TypeMasses { o1, o2, o3, o4 }
}

/// P[edge {x, x+1} closed] = exp(−α · mass of loops crossing it).
pub fn prob_edge_closed(model: &CircleModel, x: usize) -> Result<f64> {
    Ok((-model.alpha() * mass_crossing_edge(model, x)?).exp())
}

/// Law of the set of open edges, indexed by bitmask (bit e ↔ edge between
/// labels e+1 and e+2 mod n). Inclusion–exclusion over closed sets.
pub fn edge_configuration_law(model: &CircleModel) -> Result<Vec<f64>> {
    let n = model.n();
    if n > 16 {
        return Err(param(format!("configuration law enumerates 2^n outcomes; n={n} too large")));
    }
    let full = (1usize << n) - 1;
    let total = total_mass(model);
    let alpha = model.alpha();
    // all_closed[C] = P[every edge of C closed]
    let mut all_closed = vec![0.0; 1 << n];
    for (set, slot) in all_closed.iter_mut().enumerate() {
        let mut edges = Vec::new();
        for e in 0..n {
            if set >> e & 1 == 1 {
                let (a, b) = (e + 1, (e + 1) % n + 1);
                edges.push((a, b));
                edges.push((b, a));
            }
        }
        let avoid = mass_avoiding_edges(model, &edges)?;
        *slot = if alpha == 0.0 { 1.0 } else { (-alpha * (total - avoid)).exp() };
    }
    // Möbius inversion over supersets: P[closed set = C exactly]
    let mut exact = all_closed;
    for e in 0..n {
        for set in 0..=full {
            if set >> e & 1 == 0 {
                exact[set] -= exact[set | 1 << e];
            }
        }
    }
    // reindex by open set = complement of closed set
    Ok((0..=full).map(|open| exact[full ^ open].max(0.0)).collect())
}

/// Symmetric model (p = ½) inducing the same loop measure on every arc: the
/// Doob h-transform with h(x) = (q/p)^{x/2} keeps √(pq)/(1+c).
pub fn doob_symmetric(model: &CircleModel) -> Result<CircleModel> {
    let c = 0.5 / model.root_scale() - 1.0;
    CircleModel::new(model.n(), 0.5, c, model.alpha())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(n: usize, p: f64, c: f64, alpha: f64) -> CircleModel {
        CircleModel::new(n, p, c, alpha).unwrap()
    }

    fn dense(model: &CircleModel, f: &[usize]) -> f64 {
        let vs: Vec<usize> = f.iter().map(|x| x - 1).collect();
        -ln_det_dense(model, &vs, |_, _| false)
    }

    #[test]
    fn closed_forms_match_lu() {
        for &(n, p, c) in &[(4, 0.5, 0.5), (5, 0.6, 0.1), (7, 0.3, 0.05), (9, 0.5, 0.0001)] {
            let model = m(n, p, c, 1.0);
            let all: Vec<usize> = (1..=n).collect();
            assert!((mass_nontrivial_in(&model, &all).unwrap() - dense(&model, &all)).abs() < 1e-11);
            for start in 1..=n {
                for len in 2..n {
                    let arc: Vec<usize> = (0..len).map(|i| (start - 1 + i) % n + 1).collect();
                    let want = dense(&model, &arc);
                    assert!((mass_nontrivial_in(&model, &arc).unwrap() - want).abs() < 1e-12, "{n} {arc:?}");
                }
            }
        }
    }

    #[test]
    fn small_sets() {
        let model = m(4, 0.5, 0.5, 1.0);
        assert_eq!(mass_nontrivial_in(&model, &[]).unwrap(), 0.0);
        assert_eq!(mass_nontrivial_in(&model, &[3]).unwrap(), 0.0);
        // {2,3}: det [[1, −1/3], [−1/3, 1]] = 8/9
        assert!((mass_nontrivial_in(&model, &[2, 3]).unwrap() - (9.0f64 / 8.0).ln()).abs() < 1e-14);
        // {1,3} has no edges
        assert!(mass_nontrivial_in(&model, &[1, 3]).unwrap().abs() < 1e-15);
        assert!(mass_nontrivial_in(&model, &[0]).is_err());
    }

    #[test]
    fn avoiding_edges() {
        let model = m(6, 0.55, 0.4, 0.7);
        let total = total_mass(&model);
        assert!((mass_avoiding_edges(&model, &[]).unwrap() - total).abs() < 1e-12);
        let mut all = Vec::new();
        for x in 1..=6 {
            all.push((x, x % 6 + 1));
            all.push((x % 6 + 1, x));
        }
        assert!(mass_avoiding_edges(&model, &all).unwrap().abs() < 1e-15);
        let both = mass_avoiding_edges(&model, &[(3, 4), (4, 3)]).unwrap();
        assert!((total - both - mass_crossing_edge(&model, 3).unwrap()).abs() < 1e-12);
        assert!(mass_avoiding_edges(&model, &[(1, 3)]).is_err());
    }

    #[test]
    fn type_decomposition() {
        for &(n, p, c) in &[(4, 0.5, 0.8), (5, 0.7, 0.2), (30, 0.45, 0.01), (200, 0.5, 1e-5)] {
            let model = m(n, p, c, 1.0);
            let t = mass_by_type(&model);
            let total = total_mass(&model);
            assert!((t.total() - total).abs() < 1e-10 * total.max(1.0), "{n}");
            assert!(t.o1 > 0.0 && t.o2 > 0.0 && t.o3 > 0.0 && t.o4 >= -1e-12);
            let all: Vec<usize> = (1..=n).collect();
            let rest: Vec<usize> = (2..=n).collect();
            let diff = mass_nontrivial_in(&model, &all).unwrap() - mass_nontrivial_in(&model, &rest).unwrap();
            assert!((mass_through_vertex1(&model) - diff).abs() < 1e-12 * diff.max(1.0));
        }
    }

    #[test]
    fn o3_limit_at_zero_rate() {
        let model = m(10, 0.5, 0.0, 1.0);
        assert_eq!(model.r(), 0.0);
        assert!((mass_o3(&model) - 10f64.ln()).abs() < 1e-14);
        assert_eq!(mass_through_vertex1(&model), f64::INFINITY);
        assert_eq!(total_mass(&model), f64::INFINITY);
    }

    #[test]
    fn configuration_law_sums_to_one() {
        let model = m(4, 0.5, 0.8, 0.6);
        let law = edge_configuration_law(&model).unwrap();
        assert!((law.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        // marginal of edge 0 being closed
        let closed0: f64 = law.iter().enumerate().filter(|(o, _)| o & 1 == 0).map(|(_, p)| p).sum();
        assert!((closed0 - prob_edge_closed(&model, 1).unwrap()).abs() < 1e-12);
        // one open edge alone is impossible only if... it is possible: a back-and-forth loop
        assert!(law[1] > 0.0);
        let none = edge_configuration_law(&model.with_alpha(0.0).unwrap()).unwrap();
        assert_eq!(none[0], 1.0);
    }

    #[test]
    fn doob_invariance_on_arcs() {
        for &(n, p, c) in &[(6, 0.7, 0.1), (8, 0.2, 0.5)] {
            let model = m(n, p, c, 1.0);
            let sym = doob_symmetric(&model).unwrap();
            assert!((sym.r() - model.r()).abs() < 1e-13);
            for len in 2..n {
                let arc: Vec<usize> = (2..2 + len).collect();
                assert!((dense(&model, &arc) - dense(&sym, &arc)).abs() < 1e-12);
            }
        }
    }
}
