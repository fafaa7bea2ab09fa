use rand::{Rng, RngCore};
use rand_distr::{Distribution, Poisson};
use serde::{Deserialize, Serialize};

use crate::analytics::mass_through_vertex1;
use crate::circle::{CircleModel, Footprint, Loop, PointedLoop};
use crate::error::{param, Result};
use crate::numerics::special::ln_sinh_scaled;
use crate::rng::SeedRecord;

/// Which independent sub-soups are sampled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Condition {
    Unconditioned,
    /// No loop avoiding vertex 1: only loops through 1.
    NoO1,
    /// No loop through vertex 1: only the soup on {2..n}.
    NoO2O3O4,
}

impl Condition {
    fn components(self, n: usize) -> std::ops::Range<usize> {
        match self {
            Condition::Unconditioned => 0..n,
            Condition::NoO1 => 0..1,
            Condition::NoO2O3O4 => 1..n,
        }
    }
}

impl std::str::FromStr for Condition {
    type Err = crate::Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "unconditioned" | "none" => Ok(Condition::Unconditioned),
            "no-o1" => Ok(Condition::NoO1),
            "no-o2o3o4" | "no-through-1" => Ok(Condition::NoO2O3O4),
            _ => Err(param(format!("unknown condition {s:?} (expected unconditioned, no-o1, no-o2o3o4)"))),
        }
    }
}

/// A sampled loop. `vertices` is kept only in full mode.
#[derive(Debug, Clone, PartialEq)]
pub struct LoopRecord {
    pub footprint: Footprint,
    pub len: u64,
    pub vertices: Option<Vec<u32>>,
}

impl LoopRecord {
    pub fn to_loop(&self) -> Option<Loop> {
        let n = self.footprint.n;
        self.vertices.as_ref().map(|v| Loop::from_pointed(&PointedLoop::from_internal(v.clone(), n).expect("sampled loops are valid")))
    }
}

#[derive(Debug, Clone)]
pub struct SoupSample {
    pub n: usize,
    pub seed: SeedRecord,
    pub condition: Condition,
    pub loops: Vec<LoopRecord>,
}

impl SoupSample {
    pub fn len(&self) -> usize {
        self.loops.len()
    }
    pub fn is_empty(&self) -> bool {
        self.loops.is_empty()
    }
    /// Loops as classes; `None` for a summary-mode sample.
    pub fn classes(&self) -> Option<Vec<Loop>> {
        self.loops.iter().map(|l| l.to_loop()).collect()
    }
}

#[derive(Debug, Clone, Copy)]
struct Component {
    /// Poisson mean α·m_x
    intensity: f64,
    /// return probability ρ_x = 1 − e^{−m_x}
    rho: f64,
}

/// Exact sampler of the loop soup by minimal-vertex decomposition.
///
/// Loops whose smallest vertex is x live on F_x = {x, …, n−1} and visit x;
/// their mass is m_x = ln G_{F_x}(x, x). Each such loop is j ~ LogSeries(ρ_x)
/// excursions from x inside F_x, glued cyclically.
#[derive(Debug, Clone)]
pub struct SoupSampler {
    model: CircleModel,
    components: Vec<Component>,
    cw: u64,
    stay: u64,
}

const TWO64: f64 = 18_446_744_073_709_551_616.0;

impl SoupSampler {
    pub fn new(model: &CircleModel) -> Result<Self> {
        if model.c() <= 0.0 {
            return Err(param("sampling needs c > 0: the soup on the full circle has infinite mass at c = 0"));
        }
        let n = model.n();
        let (r, ln_s) = (model.r(), model.root_scale().ln());
        let alpha = model.alpha();
        let components = (0..n)
            .map(|x| {
                let m = if x == 0 {
                    mass_through_vertex1(model)
                } else {
                    let l = (n - x) as f64;
                    (-ln_s + ln_sinh_scaled(r, l) - ln_sinh_scaled(r, l + 1.0)).max(0.0)
                };
                Component { intensity: alpha * m, rho: -(-m).exp_m1() }
            })
            .collect();
        Ok(SoupSampler {
            model: *model,
            components,
            cw: (model.step_cw() * TWO64) as u64,
            stay: ((model.step_cw() + model.step_ccw()) * TWO64) as u64,
        })
    }

    pub fn model(&self) -> &CircleModel {
        &self.model
    }

    /// Expected number of loops on component x (0-based).
    pub fn component_intensity(&self, x: usize) -> f64 {
        self.components[x].intensity
    }

    pub fn sample<R: RngCore>(&self, rng: &mut R, condition: Condition, keep_vertices: bool) -> Vec<LoopRecord> {
        let n = self.model.n();
        let mut out = Vec::new();
        for x in condition.components(n) {
            let comp = self.components[x];
            if comp.intensity <= 0.0 || comp.rho <= 0.0 {
                continue;
            }
            let count = Poisson::new(comp.intensity).expect("positive intensity").sample(rng) as u64;
            for _ in 0..count {
                let j = log_series(rng, comp.rho);
                out.push(self.loop_at(rng, x, j, keep_vertices));
            }
        }
        out
    }

    fn loop_at<R: RngCore>(&self, rng: &mut R, x: usize, j: u64, keep: bool) -> LoopRecord {
        let n = self.model.n();
        let mut vertices = keep.then(Vec::new);
        let (mut disp, mut lo, mut hi, mut len) = (0i64, 0i64, 0i64, 0u64);
        for _ in 0..j {
            let exc = loop {
                let attempt = if x == 0 {
                    self.circle_excursion(rng, vertices.as_mut())
                } else {
                    self.arc_excursion(rng, x, n - x, vertices.as_mut())
                };
                if let Some(e) = attempt {
                    break e;
                }
            };
            lo = lo.min(disp + exc.lo);
            hi = hi.max(disp + exc.hi);
            disp += exc.disp;
            len += exc.len;
        }
        LoopRecord { footprint: Footprint { n, start: x as u32, lo, hi, disp }, len, vertices }
    }

    /// One attempt at an excursion from x inside the arc {x, …, x+L−1};
    /// `None` if the walk is killed or leaves the arc first.
    fn arc_excursion<R: RngCore>(&self, rng: &mut R, x: usize, l: usize, mut vs: Option<&mut Vec<u32>>) -> Option<Excursion> {
        let mark = vs.as_ref().map_or(0, |v| v.len());
        let u = rng.next_u64();
        if u >= self.cw {
            return None;
        }
        let l = l as i64;
        let (mut h, mut hi, mut len) = (1i64, 1i64, 1u64);
        if let Some(v) = vs.as_mut() {
            v.push(x as u32);
        }
        if h == l {
            if let Some(v) = vs {
                v.truncate(mark);
            }
            return None;
        }
        loop {
            if let Some(v) = vs.as_mut() {
                v.push((x as i64 + h) as u32);
            }
            let u = rng.next_u64();
            len += 1;
            if u < self.cw {
                h += 1;
                if h == l {
                    break;
                }
                hi = hi.max(h);
            } else if u < self.stay {
                h -= 1;
                if h == 0 {
                    return Some(Excursion { lo: 0, hi, disp: 0, len });
                }
            } else {
                break;
            }
        }
        if let Some(v) = vs {
            v.truncate(mark);
        }
        None
    }

    /// One attempt at an excursion from 0 around the full circle.
    fn circle_excursion<R: RngCore>(&self, rng: &mut R, mut vs: Option<&mut Vec<u32>>) -> Option<Excursion> {
        let n = self.model.n() as i64;
        let mark = vs.as_ref().map_or(0, |v| v.len());
        let (mut h, mut lo, mut hi, mut len) = (0i64, 0i64, 0i64, 0u64);
        let mut pos = 0i64;
        loop {
            if let Some(v) = vs.as_mut() {
                v.push(pos as u32);
            }
            let u = rng.next_u64();
            len += 1;
            if u < self.cw {
                h += 1;
                hi = hi.max(h);
                pos += 1;
                if pos == n {
                    pos = 0;
                }
            } else if u < self.stay {
                h -= 1;
                lo = lo.min(h);
                pos -= 1;
                if pos < 0 {
                    pos = n - 1;
                }
            } else {
                if let Some(v) = vs {
                    v.truncate(mark);
                }
                return None;
            }
            if pos == 0 {
                return Some(Excursion { lo, hi, disp: h, len });
            }
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct Excursion {
    lo: i64,
    hi: i64,
    disp: i64,
    len: u64,
}

/// Draw from P(j) = ρ^j / (j·(−ln(1−ρ))), j ≥ 1 (Kemp's LK algorithm).
pub fn log_series<R: RngCore>(rng: &mut R, rho: f64) -> u64 {
    let r = (-rho).ln_1p();
    loop {
        let v: f64 = rng.random();
        if v >= rho {
            return 1;
        }
        let u: f64 = rng.random();
        let q = -(r * u).exp_m1();
        if v <= q * q {
            let j = (1.0 + v.ln() / q.ln()).floor();
            if j < 1.0 || v == 0.0 || !j.is_finite() {
                continue;
            }
            return j as u64;
        }
        if v >= q {
            return 1;
        }
        return 2;
    }
}

/// One exact draw of the full soup, vertex sequences included.
pub fn sample_soup(model: &CircleModel, seed: SeedRecord) -> Result<SoupSample> {
    sample_soup_conditioned(model, seed, Condition::Unconditioned, true)
}

pub fn sample_soup_conditioned(model: &CircleModel, seed: SeedRecord, condition: Condition, keep_vertices: bool) -> Result<SoupSample> {
    let sampler = SoupSampler::new(model)?;
    let mut rng = seed.rng();
    let loops = sampler.sample(&mut rng, condition, keep_vertices);
    Ok(SoupSample { n: model.n(), seed, condition, loops })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circle::{classify_loop, LoopType};
    use rand::SeedableRng;

    #[test]
    fn log_series_pmf() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        let rho: f64 = 0.9;
        let norm = -(-rho).ln_1p();
        let reps = 200_000;
        let mut counts = [0u64; 4];
        for _ in 0..reps {
            let j = log_series(&mut rng, rho) as usize;
            if j <= 3 {
                counts[j] += 1;
            }
        }
        for j in 1..=3 {
            let p = rho.powi(j as i32) / (j as f64 * norm);
            let z = crate::numerics::stats::binomial_z(counts[j], reps, p);
            assert!(z.abs() < 4.0, "j={j} z={z}");
        }
    }

    #[test]
    fn refuses_zero_killing() {
        let m = CircleModel::new(5, 0.5, 0.0, 1.0).unwrap();
        assert!(sample_soup(&m, SeedRecord::new(1)).is_err());
    }

    #[test]
    fn alpha_zero_is_empty() {
        let m = CircleModel::new(6, 0.5, 0.3, 0.0).unwrap();
        for r in 0..20 {
            assert!(sample_soup(&m, SeedRecord::new(9).replicate(r)).unwrap().is_empty());
        }
    }

    #[test]
    fn deterministic_and_valid() {
        let m = CircleModel::new(7, 0.6, 0.2, 1.5).unwrap();
        let a = sample_soup(&m, SeedRecord::new(3).replicate(4)).unwrap();
        let b = sample_soup(&m, SeedRecord::new(3).replicate(4)).unwrap();
        assert_eq!(a.loops, b.loops);
        assert!(!a.is_empty());
        for rec in &a.loops {
            let l = rec.to_loop().unwrap();
            assert_eq!(l.len() as u64, rec.len);
            let fp = l.footprint();
            assert_eq!(fp.loop_type(), rec.footprint.loop_type());
            assert_eq!(fp.opened_edges(), rec.footprint.opened_edges());
            assert_eq!(fp.rot(), rec.footprint.rot());
            // min vertex is the component
            assert_eq!(*l.internal().iter().min().unwrap(), rec.footprint.start);
            let _ = classify_loop(&m, &l);
        }
    }

    #[test]
    fn conditions_select_components() {
        let m = CircleModel::new(8, 0.5, 0.1, 2.0).unwrap();
        for r in 0..20 {
            let s = sample_soup_conditioned(&m, SeedRecord::new(1).replicate(r), Condition::NoO1, false).unwrap();
            assert!(s.loops.iter().all(|l| l.footprint.loop_type() != LoopType::O1));
            let s = sample_soup_conditioned(&m, SeedRecord::new(1).replicate(r), Condition::NoO2O3O4, false).unwrap();
            assert!(s.loops.iter().all(|l| l.footprint.loop_type() == LoopType::O1));
        }
    }
}
