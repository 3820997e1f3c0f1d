//! Numerical estimate of the graphical modulus relative to `dom S`:
//! the supremum over neighboring combinations `(I1, I2, I3)` and
//! `u ∈ U(I1, I2, I3)` of
//! `d(u, N(I1, I2, I3)) / ‖(M^T_{I2} u, (-M^T_{I3} u)_+)‖`.
//!
//! The ratio is 0-homogeneous, so each combination is searched on the unit
//! sphere of `U` by multi-start projected ascent in floating point. Every
//! local maximizer is then rounded to a rational point and re-evaluated
//! exactly, so the reported value is attained at a recorded point.

use num::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::certificate::LipschitzCertificate;
use super::{classify, domain_normal_cone, neighboring_combinations, IndexCombination, Part};
use crate::error::{Error, Result};
use crate::geometry::ConeProjector;
use crate::linalg::{to_f64, RMatrix, RVector, Rational};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModulusOptions {
    pub starts: usize,
    pub tol: f64,
    pub seed: u64,
}

impl Default for ModulusOptions {
    fn default() -> Self {
        Self { starts: 64, tol: 1e-6, seed: 0 }
    }
}

/// Best value found for one combination.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CombinationMax {
    pub combination: IndexCombination,
    #[serde(with = "crate::report::modulus_value")]
    pub value: f64,
    #[serde(with = "crate::report::opt_rational_vec")]
    pub maximizer: Option<RVector>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModulusDiagnostics {
    pub per_combination: Vec<CombinationMax>,
}

/// Estimate of the relative graphical modulus at a certified point.
pub fn modulus(
    m: &RMatrix,
    q_bar: &[Rational],
    x_bar: &[Rational],
    cert: &LipschitzCertificate,
    opts: &ModulusOptions,
) -> Result<(f64, ModulusDiagnostics)> {
    let combo = classify(m, q_bar, x_bar)?;
    if combo != cert.combination {
        return Err(Error::Internal(format!(
            "certificate was issued for {} but the point lies on {combo}",
            cert.combination
        )));
    }
    if !cert.verdict {
        return Err(Error::NotCertified("false"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut per_combination = Vec::new();
    for c in neighboring_combinations(&combo) {
        let starts = start_points(&c, opts.starts, &mut rng);
        per_combination.push(maximize(m, &c, &starts, opts.tol));
    }
    let best = per_combination.iter().map(|c| c.value).fold(0.0, f64::max);
    Ok((best, ModulusDiagnostics { per_combination }))
}

/// Coordinate starts `±e_i` admissible for `U`, followed by random points.
fn start_points(c: &IndexCombination, count: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<f64>> {
    let n = c.len();
    let mut out = Vec::new();
    for i in 0..n {
        for sign in [1.0, -1.0] {
            let allowed = match c.part(i) {
                Part::I1 => false,
                Part::I2 => true,
                Part::I3 => sign < 0.0,
            };
            if allowed {
                let mut e = vec![0.0; n];
                e[i] = sign;
                out.push(e);
            }
        }
    }
    out.truncate(count);
    while out.len() < count {
        let u: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
        out.push(u);
    }
    out
}

struct Objective<'a> {
    combo: &'a IndexCombination,
    mt_rows: Vec<Vec<f64>>,
    normal: ConeProjector,
    m: &'a RMatrix,
}

impl Objective<'_> {
    fn project_to_u(&self, u: &mut [f64]) -> bool {
        for (i, ui) in u.iter_mut().enumerate() {
            match self.combo.part(i) {
                Part::I1 => *ui = 0.0,
                Part::I2 => {}
                Part::I3 => *ui = ui.min(0.0),
            }
        }
        let norm = u.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm < 1e-300 {
            return false;
        }
        u.iter_mut().for_each(|x| *x /= norm);
        true
    }

    fn denominator(&self, u: &[f64]) -> f64 {
        let mut s = 0.0;
        for (i, row) in self.mt_rows.iter().enumerate() {
            let y: f64 = row.iter().zip(u).map(|(a, b)| a * b).sum();
            match self.combo.part(i) {
                Part::I1 => {}
                Part::I2 => s += y * y,
                Part::I3 => s += (-y).max(0.0).powi(2),
            }
        }
        s.sqrt()
    }

    fn ratio(&self, u: &[f64]) -> f64 {
        let num = self.normal.distance_f64(u);
        let den = self.denominator(u);
        if den <= 1e-14 {
            return if num <= 1e-12 { 0.0 } else { f64::INFINITY };
        }
        num / den
    }

    fn exact(&self, u: &[Rational]) -> f64 {
        let (_, num_sq) = self.normal.project(u);
        let y = self.m.transpose().mul_vec(u);
        let mut den_sq = Rational::zero();
        for (i, yi) in y.iter().enumerate() {
            match self.combo.part(i) {
                Part::I1 => {}
                Part::I2 => den_sq += yi * yi,
                Part::I3 => {
                    if yi.is_negative() {
                        den_sq += yi * yi;
                    }
                }
            }
        }
        if den_sq.is_zero() {
            return if num_sq.is_zero() { 0.0 } else { f64::INFINITY };
        }
        (to_f64(&num_sq) / to_f64(&den_sq)).sqrt()
    }

    /// Rounds to a dyadic rational and projects exactly onto `U`.
    fn rationalize(&self, u: &[f64]) -> RVector {
        let scale = (1u64 << 30) as f64;
        u.iter()
            .enumerate()
            .map(|(i, &x)| {
                let r = Rational::new(((x * scale).round() as i64).into(), (1i64 << 30).into());
                match self.combo.part(i) {
                    Part::I1 => Rational::zero(),
                    Part::I3 if r.is_positive() => Rational::zero(),
                    _ => r,
                }
            })
            .collect()
    }

    fn ascend(&self, start: &[f64], tol: f64) -> Option<Vec<f64>> {
        let mut u = start.to_vec();
        if !self.project_to_u(&mut u) {
            return None;
        }
        let mut f = self.ratio(&u);
        let mut step = 0.1;
        for _ in 0..500 {
            if !f.is_finite() {
                break;
            }
            let g = self.gradient(&u, f);
            let gnorm = g.iter().map(|x| x * x).sum::<f64>().sqrt();
            if gnorm < 1e-12 {
                break;
            }
            let mut improved = false;
            while step > 1e-12 {
                let mut cand: Vec<f64> = u.iter().zip(&g).map(|(a, b)| a + step * b / gnorm).collect();
                if self.project_to_u(&mut cand) {
                    let fc = self.ratio(&cand);
                    if fc > f {
                        let gain = fc - f;
                        u = cand;
                        f = fc;
                        step *= 1.5;
                        improved = gain > tol * f.max(1.0);
                        break;
                    }
                }
                step *= 0.5;
            }
            if !improved {
                break;
            }
        }
        Some(u)
    }

    fn gradient(&self, u: &[f64], f: f64) -> Vec<f64> {
        let h = 1e-7;
        (0..u.len())
            .map(|i| {
                if self.combo.part(i) == Part::I1 {
                    return 0.0;
                }
                let mut up = u.to_vec();
                up[i] += h;
                let mut down = u.to_vec();
                down[i] -= h;
                let (a, b) = (self.ratio(&up), self.ratio(&down));
                if a.is_finite() && b.is_finite() {
                    (a - b) / (2.0 * h)
                } else if a.is_finite() {
                    (a - f) / h
                } else {
                    0.0
                }
            })
            .collect()
    }
}

fn maximize(m: &RMatrix, combo: &IndexCombination, starts: &[Vec<f64>], tol: f64) -> CombinationMax {
    if combo.i2().is_empty() && combo.i3().is_empty() {
        return CombinationMax { combination: combo.clone(), value: 0.0, maximizer: None };
    }
    let obj = Objective {
        combo,
        mt_rows: m.transpose().to_f64_rows(),
        normal: ConeProjector::new(&domain_normal_cone(m, combo)),
        m,
    };
    let evaluated: Vec<(f64, RVector)> = starts
        .par_iter()
        .filter_map(|s| {
            let u = obj.ascend(s, tol)?;
            let r = obj.rationalize(&u);
            if r.iter().all(Zero::is_zero) {
                return None;
            }
            Some((obj.exact(&r), r))
        })
        .collect();
    let mut best: Option<(f64, RVector)> = None;
    for (v, r) in evaluated {
        if best.as_ref().is_none_or(|(bv, _)| v > *bv) {
            best = Some((v, r));
        }
    }
    match best {
        Some((value, r)) => CombinationMax { combination: combo.clone(), value, maximizer: Some(r) },
        None => CombinationMax { combination: combo.clone(), value: 0.0, maximizer: None },
    }
}
