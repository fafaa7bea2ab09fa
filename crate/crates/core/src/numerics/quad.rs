//! Adaptive Gauss–Kronrod (7/15) quadrature with global bisection.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct QuadratureSpec {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_subdivisions: usize,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec { abs_tol: 1e-12, rel_tol: 1e-12, max_subdivisions: 20_000 }
    }
}

impl QuadratureSpec {
    pub fn tol(abs_tol: f64) -> Self {
        QuadratureSpec { abs_tol, rel_tol: 0.0, ..Default::default() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Domain {
    Finite(f64, f64),
    /// [a, ∞), mapped through x = a + t/(1−t).
    SemiInfinite(f64),
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct QuadResult {
    pub value: f64,
    pub error: f64,
    pub converged: bool,
    pub evaluations: usize,
}

impl QuadResult {
    pub fn into_result(self) -> Result<f64> {
        if self.converged {
            Ok(self.value)
        } else {
            Err(Error::Quadrature { value: self.value, error: self.error })
        }
    }
}

struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn gk15<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kron = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let dx = h * XGK[j];
        let s = f(c - dx) + f(c + dx);
        kron += WGK[j] * s;
        if j % 2 == 1 {
            gauss += WG[j / 2] * s;
        }
    }
    let value = kron * h;
    let mut error = ((kron - gauss) * h).abs();
    if !value.is_finite() {
        error = f64::INFINITY;
    }
    (value, error)
}

fn adaptive<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, spec: &QuadratureSpec) -> QuadResult {
    if a == b {
        return QuadResult { value: 0.0, error: 0.0, converged: true, evaluations: 0 };
    }
    let (value, error) = gk15(&mut f, a, b);
    let mut heap = BinaryHeap::new();
    heap.push(Segment { a, b, value, error });
    let mut total = value;
    let mut total_err = error;
    let mut evaluations = 15;
    let mut pieces = 1;
    loop {
        let target = spec.abs_tol.max(spec.rel_tol * total.abs());
        if total_err <= target {
            break;
        }
        if pieces >= spec.max_subdivisions {
            break;
        }
        let seg = heap.pop().expect("non-empty");
        let mid = 0.5 * (seg.a + seg.b);
        if !(mid > seg.a && mid < seg.b) {
            heap.push(seg);
            break;
        }
        let (v1, e1) = gk15(&mut f, seg.a, mid);
        let (v2, e2) = gk15(&mut f, mid, seg.b);
        evaluations += 30;
        pieces += 1;
        total += v1 + v2 - seg.value;
        total_err += e1 + e2 - seg.error;
        heap.push(Segment { a: seg.a, b: mid, value: v1, error: e1 });
        heap.push(Segment { a: mid, b: seg.b, value: v2, error: e2 });
        // re-sum periodically to avoid drift in the running totals
        if pieces % 256 == 0 {
            total = heap.iter().map(|s| s.value).sum();
            total_err = heap.iter().map(|s| s.error).sum();
        }
    }
    total = heap.iter().map(|s| s.value).sum();
    total_err = heap.iter().map(|s| s.error).sum();
    let target = spec.abs_tol.max(spec.rel_tol * total.abs());
    QuadResult {
        value: total,
        error: total_err,
        converged: total.is_finite() && total_err <= target,
        evaluations,
    }
}

/// Integrates `f` over `domain`; non-convergence is reported in the result.
pub fn integrate<F: FnMut(f64) -> f64>(mut f: F, domain: Domain, spec: &QuadratureSpec) -> QuadResult {
    match domain {
        Domain::Finite(a, b) => {
            if a <= b {
                adaptive(f, a, b, spec)
            } else {
                let mut r = adaptive(f, b, a, spec);
                r.value = -r.value;
                r
            }
        }
        Domain::SemiInfinite(a) => adaptive(
            |t| {
                let u = 1.0 - t;
                let v = f(a + t / u) / (u * u);
                if v.is_finite() { v } else { 0.0 }
            },
            0.0,
            1.0,
            spec,
        ),
    }
}

/// ∫_a^b f for an integrand behaving like (x−a)^{λa−1} near a and
/// (b−x)^{λb−1} near b (λ > 0; λ = 1 means regular). Each half is mapped by
/// a power substitution that makes the integrand bounded.
pub fn integrate_singular<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, lam_a: f64, lam_b: f64, spec: &QuadratureSpec) -> QuadResult {
    let mid = 0.5 * (a + b);
    let half = mid - a;
    let half_spec = QuadratureSpec { abs_tol: 0.5 * spec.abs_tol, ..*spec };
    let left = integrate(
        |t| {
            if t <= 0.0 {
                return 0.0;
            }
            let s = t.powf(1.0 / lam_a);
            let v = f(a + half * s) * half * s / (lam_a * t);
            if v.is_finite() { v } else { 0.0 }
        },
        Domain::Finite(0.0, 1.0),
        &half_spec,
    );
    let right = integrate(
        |t| {
            if t <= 0.0 {
                return 0.0;
            }
            let s = t.powf(1.0 / lam_b);
            let v = f(b - half * s) * half * s / (lam_b * t);
            if v.is_finite() { v } else { 0.0 }
        },
        Domain::Finite(0.0, 1.0),
        &half_spec,
    );
    QuadResult {
        value: left.value + right.value,
        error: left.error + right.error,
        converged: left.converged && right.converged,
        evaluations: left.evaluations + right.evaluations,
    }
}

/// ∫∫ over the simplex {x, y > 0, x + y < 1} in coordinates u = x + y,
/// v = x/u. `lam_0`, `lam_1` give the power behaviour of the u-marginal
/// (including the Jacobian u) at u = 0 and u = 1; `lam_v` that of the inner
/// integrand at v = 0 and v = 1.
pub fn integrate_simplex<F: Fn(f64, f64) -> f64>(f: F, lam_0: f64, lam_1: f64, lam_v: f64, spec: &QuadratureSpec) -> QuadResult {
    // the inner integral blows up as u → 0, so it needs a relative target
    let inner_spec = QuadratureSpec { abs_tol: spec.abs_tol * 0.1, rel_tol: (spec.rel_tol * 0.1).max(1e-12), ..*spec };
    let converged = std::cell::Cell::new(true);
    let evaluations = std::cell::Cell::new(0);
    let mut outer = integrate_singular(
        |u| {
            let r = integrate_singular(|v| f(u * v, u * (1.0 - v)), 0.0, 1.0, lam_v, lam_v, &inner_spec);
            // within 1e-6 of the far edge, 1 − x − y carries rounding noise
            // of relative size 1e-16/(1−u); trust the outer error estimate there
            if 1.0 - u > 1e-6 {
                converged.set(converged.get() && r.converged);
            }
            evaluations.set(evaluations.get() + r.evaluations);
            u * r.value
        },
        0.0,
        1.0,
        lam_0,
        lam_1,
        spec,
    );
    outer.converged &= converged.get();
    outer.evaluations += evaluations.get();
    outer
}

/// ∫_a^b ∫_{lo(x)}^{hi(x)} f(x, y) dy dx by nested adaptive quadrature.
pub fn integrate_nested<F, L>(f: F, a: f64, b: f64, limits: L, spec: &QuadratureSpec) -> QuadResult
where
    F: Fn(f64, f64) -> f64,
    L: Fn(f64) -> (f64, f64),
{
    let inner_spec = QuadratureSpec {
        abs_tol: spec.abs_tol * 0.1,
        rel_tol: spec.rel_tol * 0.1,
        max_subdivisions: spec.max_subdivisions,
    };
    let mut all_converged = true;
    let mut evaluations = 0;
    let mut outer = integrate(
        |x| {
            let (lo, hi) = limits(x);
            let r = integrate(|y| f(x, y), Domain::Finite(lo, hi), &inner_spec);
            all_converged &= r.converged;
            evaluations += r.evaluations;
            r.value
        },
        Domain::Finite(a, b),
        spec,
    );
    outer.converged &= all_converged;
    outer.evaluations += evaluations;
    outer
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_and_exponential() {
        let spec = QuadratureSpec::default();
        let r = integrate(|x| x * x, Domain::Finite(0.0, 1.0), &spec);
        assert!(r.converged && (r.value - 1.0 / 3.0).abs() < 1e-12);
        let r = integrate(|x| (-x).exp(), Domain::SemiInfinite(0.0), &spec);
        assert!(r.converged && (r.value - 1.0).abs() < 1e-10);
        let r = integrate(|x| x, Domain::Finite(1.0, 0.0), &spec);
        assert!((r.value + 0.5).abs() < 1e-14);
    }

    #[test]
    fn endpoint_singularity() {
        let r = integrate(|x| 1.0 / x.sqrt(), Domain::Finite(0.0, 1.0), &QuadratureSpec::tol(1e-10));
        assert!(r.converged && (r.value - 2.0).abs() < 1e-9, "{r:?}");
    }

    #[test]
    fn power_substitution() {
        // ∫₀¹ x^{−0.7}(1−x)^{−0.4} dx = B(0.3, 0.6)
        let spec = QuadratureSpec::tol(1e-12);
        let r = integrate_singular(|x| x.powf(-0.7) * (1.0 - x).powf(-0.4), 0.0, 1.0, 0.3, 0.6, &spec);
        let want = crate::numerics::beta(0.3, 0.6).unwrap();
        assert!(r.converged && (r.value - want).abs() < 1e-10, "{r:?} {want}");
    }

    #[test]
    fn simplex_area() {
        let r = integrate_simplex(|_, _| 1.0, 1.0, 1.0, 1.0, &QuadratureSpec::tol(1e-12));
        assert!(r.converged && (r.value - 0.5).abs() < 1e-12);
        let r = integrate_simplex(|x, y| x * y, 1.0, 1.0, 1.0, &QuadratureSpec::tol(1e-12));
        assert!((r.value - 1.0 / 24.0).abs() < 1e-12);
    }

    #[test]
    fn non_convergence_is_flagged() {
        let spec = QuadratureSpec { abs_tol: 1e-14, rel_tol: 0.0, max_subdivisions: 3 };
        let r = integrate(|x| (50.0 * x).sin() / x.sqrt(), Domain::Finite(0.0, 1.0), &spec);
        assert!(!r.converged);
        assert!(r.into_result().is_err());
    }

    #[test]
    fn nested_triangle() {
        // ∫∫_{x+y<1} 1 = 1/2
        let r = integrate_nested(|_, _| 1.0, 0.0, 1.0, |x| (0.0, 1.0 - x), &QuadratureSpec::default());
        assert!((r.value - 0.5).abs() < 1e-12);
    }
}
