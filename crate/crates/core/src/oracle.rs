//! Brute-force and sampling oracles used to cross-check the exact
//! certificates. Nothing here calls into `lcp` or `avi`: solutions come from
//! a separate sign-pattern search with its own elimination, and the
//! Lipschitz-like and isc estimates sample the graph directly.
//!
//! All sampled parameters are rationals with small denominators, so every
//! membership and solution test is exact; only the ratios are floats.

use num::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{Cone, PolyhedronH};
use crate::lcp::{SolutionPiece, SolutionSet};
use crate::linalg::{canonical_span, norm_sq, sub, to_f64, unit, RMatrix, RVector, Rational};

/// Number of halvings of the pair separation.
pub const REFINEMENTS: usize = 4;
/// Growth of the sampled modulus across all refinements that counts as divergence.
pub const GROWTH_THRESHOLD: f64 = 2.0;

const DENOM: i64 = 64;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SamplingPlan {
    #[serde(with = "crate::report::rational")]
    pub radius: Rational,
    pub pair_count: usize,
    #[serde(with = "crate::report::rational")]
    pub window_radius: Rational,
    pub seed: u64,
}

impl SamplingPlan {
    pub fn new(radius: Rational, pair_count: usize, window_radius: Rational, seed: u64) -> Result<Self> {
        let plan = Self { radius, pair_count, window_radius, seed };
        plan.validate()?;
        Ok(plan)
    }

    pub fn validate(&self) -> Result<()> {
        if !self.radius.is_positive() || !self.window_radius.is_positive() || self.pair_count == 0 {
            return Err(Error::Dimension(
                "sampling plan needs radius > 0, window_radius > 0 and pair_count >= 1".into(),
            ));
        }
        Ok(())
    }
}

impl Default for SamplingPlan {
    fn default() -> Self {
        Self {
            radius: Rational::new(1.into(), 10.into()),
            pair_count: 200,
            window_radius: Rational::new(1.into(), 4.into()),
            seed: 0,
        }
    }
}

/// The parameter set the property is taken relative to.
#[derive(Clone, Debug)]
pub enum Region {
    Cone(Cone),
    Polyhedron(PolyhedronH),
}

impl Region {
    pub fn contains(&self, q: &[Rational]) -> bool {
        match self {
            Region::Cone(c) => c.contains_point(q),
            Region::Polyhedron(p) => p.contains(q),
        }
    }

    fn dim(&self) -> usize {
        match self {
            Region::Cone(c) => c.dim(),
            Region::Polyhedron(p) => p.dim(),
        }
    }

    /// Basis of the linear span of the tangent cone at `q`.
    fn tangent_span(&self, q: &[Rational]) -> Result<Vec<RVector>> {
        let t = match self {
            Region::Cone(c) => PolyhedronH::from_cone(c).tangent_cone(q)?,
            Region::Polyhedron(p) => p.tangent_cone(q)?,
        };
        Ok(canonical_span(&t.conic_generators(), self.dim()))
    }
}

/// Solves `B z = rhs` by Gauss-Jordan elimination; `None` when `B` is singular.
fn gauss_solve(b: &[RVector], rhs: &[Rational]) -> Option<RVector> {
    let n = rhs.len();
    let mut a: Vec<RVector> = b
        .iter()
        .zip(rhs)
        .map(|(row, r)| {
            let mut v = row.clone();
            v.push(r.clone());
            v
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, piv);
        let p = a[col][col].clone();
        for v in a[col].iter_mut() {
            *v /= &p;
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                let pivot_row = a[col].clone();
                for (v, pv) in a[r].iter_mut().zip(&pivot_row) {
                    *v -= &f * pv;
                }
            }
        }
    }
    Some(a.into_iter().map(|row| row[n].clone()).collect())
}

/// Solutions of the LCP by trying every complementary basis: columns
/// `-M_{·i}` for `x_i` basic and `e_i` for `w_i` basic in `w - Mx = q`.
pub fn brute_solutions(m: &RMatrix, q: &[Rational]) -> SolutionSet {
    let n = q.len();
    let mut points: Vec<RVector> = Vec::new();
    let mut pieces: Vec<SolutionPiece> = Vec::new();
    for mask in 0u64..(1 << n) {
        let basic_x = |i: usize| mask >> i & 1 == 1;
        let rows: Vec<RVector> = (0..n)
            .map(|r| {
                (0..n)
                    .map(|c| if basic_x(c) { -m[(r, c)].clone() } else if r == c { Rational::one() } else { Rational::zero() })
                    .collect()
            })
            .collect();
        match gauss_solve(&rows, q) {
            Some(z) => {
                if z.iter().all(|v| !v.is_negative()) {
                    let x: RVector = (0..n).map(|i| if basic_x(i) { z[i].clone() } else { Rational::zero() }).collect();
                    if !points.contains(&x) {
                        points.push(x);
                    }
                }
            }
            None => {
                if let Some(p) = degenerate_piece(m, q, &basic_x) {
                    pieces.push(p);
                }
            }
        }
    }
    points.sort();
    let mut out: Vec<SolutionPiece> = points.into_iter().map(SolutionPiece::Point).collect();
    out.extend(pieces);
    SolutionSet { pieces: out }
}

/// The feasible set of a singular basis, written in `x`.
fn degenerate_piece(m: &RMatrix, q: &[Rational], basic_x: &dyn Fn(usize) -> bool) -> Option<SolutionPiece> {
    let n = q.len();
    let (mut le, mut ble, mut eq, mut beq) = (Vec::new(), Vec::new(), Vec::new(), Vec::new());
    for i in 0..n {
        let mrow: RVector = m.row(i).to_vec();
        if basic_x(i) {
            le.push(unit(n, i).into_iter().map(|v| -v).collect());
            ble.push(Rational::zero());
            eq.push(mrow);
            beq.push(-q[i].clone());
        } else {
            eq.push(unit(n, i));
            beq.push(Rational::zero());
            le.push(mrow.into_iter().map(|v| -v).collect());
            ble.push(q[i].clone());
        }
    }
    let poly = PolyhedronH::new(RMatrix::from_rows(le).ok()?, ble, RMatrix::from_rows(eq).ok()?, beq).ok()?;
    let x = poly.find_point()?;
    if poly.tangent_cone(&x).ok()?.is_trivial() {
        Some(SolutionPiece::Point(x))
    } else {
        Some(SolutionPiece::Polyhedron(poly))
    }
}

/// Setwise equality of two solution sets whose polyhedral pieces come from
/// the same support family: every point and every polyhedral piece of one
/// lies in the other.
pub fn same_solutions(a: &SolutionSet, b: &SolutionSet) -> bool {
    let covered = |s: &SolutionSet, t: &SolutionSet| {
        s.pieces.iter().all(|p| match p {
            SolutionPiece::Point(x) => t.contains(x),
            SolutionPiece::Polyhedron(poly) => {
                let h = poly.homogenization();
                t.pieces.iter().any(|piece| match piece {
                    SolutionPiece::Polyhedron(other) => other.homogenization().contains_cone(&h),
                    SolutionPiece::Point(_) => false,
                })
            }
        })
    };
    covered(a, b) && covered(b, a)
}

/// Squared distance from `x` to `S`, `None` if `S` is empty.
fn dist_sq(set: &SolutionSet, x: &[Rational]) -> Option<Rational> {
    set.pieces
        .iter()
        .filter_map(|p| match p {
            SolutionPiece::Point(y) => Some(norm_sq(&sub(x, y))),
            SolutionPiece::Polyhedron(poly) => poly.project(x).map(|(_, d)| d),
        })
        .min()
}

/// Representatives of `S` near `x_bar`: the points, plus the point of each
/// polyhedral piece nearest to `x_bar`.
fn representatives(set: &SolutionSet, x_bar: &[Rational], window_sq: &Rational) -> Vec<RVector> {
    set.pieces
        .iter()
        .filter_map(|p| match p {
            SolutionPiece::Point(y) => Some(y.clone()),
            SolutionPiece::Polyhedron(poly) => poly.project(x_bar).map(|(y, _)| y),
        })
        .filter(|y| norm_sq(&sub(y, x_bar)) <= *window_sq)
        .collect()
}

/// A sampled `q` in the region where `S(q)` is empty next to a nonempty `S(q')`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    #[serde(with = "crate::report::rational_vec")]
    pub q: RVector,
    #[serde(with = "crate::report::rational_vec")]
    pub q_prime: RVector,
    #[serde(with = "crate::report::rational_vec")]
    pub x_prime: RVector,
}

/// Sampled moduli for shrinking pair separations.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RefinementProfile {
    /// `kappas[k]` uses separation `radius / 2^k`.
    pub kappas: Vec<f64>,
    pub pairs_used: Vec<usize>,
    pub violation: Option<Violation>,
    pub divergent: bool,
}

struct GraphSample {
    q: RVector,
    x: RVector,
    dir: RVector,
}

struct Sampler<'a> {
    m: &'a RMatrix,
    region: &'a Region,
    q_bar: &'a [Rational],
    x_bar: &'a [Rational],
    w_bar: RVector,
    plan: &'a SamplingPlan,
    span: Vec<RVector>,
    step: Rational,
}

fn small_rational(rng: &mut ChaCha8Rng, scale: &Rational, signed: bool) -> Rational {
    let k: i64 = if signed { rng.random_range(-DENOM..=DENOM) } else { rng.random_range(1..=DENOM) };
    let halvings: u32 = rng.random_range(0..=REFINEMENTS as u32);
    scale * Rational::new(k.into(), (DENOM << halvings).into())
}

impl<'a> Sampler<'a> {
    fn new(
        m: &'a RMatrix,
        region: &'a Region,
        q_bar: &'a [Rational],
        x_bar: &'a [Rational],
        plan: &'a SamplingPlan,
    ) -> Result<Self> {
        plan.validate()?;
        let n = q_bar.len();
        if m.rows() != n || m.cols() != n || x_bar.len() != n || region.dim() != n {
            return Err(Error::Dimension("oracle inputs have inconsistent dimensions".into()));
        }
        if !region.contains(q_bar) {
            return Err(Error::EmptyRegion("q_bar is not in the region".into()));
        }
        let w_bar: RVector = (0..n)
            .map(|i| (0..n).fold(q_bar[i].clone(), |acc, j| acc + &m[(i, j)] * &x_bar[j]))
            .collect();
        let max_entry = (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .map(|(i, j)| m[(i, j)].abs())
            .max()
            .unwrap_or_else(Rational::zero);
        let step = &plan.radius / (Rational::one() + Rational::from_integer((n as i64).into()) * max_entry);
        let span = region.tangent_span(q_bar)?;
        Ok(Self { m, region, q_bar, x_bar, w_bar, plan, span, step })
    }

    /// A point of `gph S` near `(q_bar, x_bar)` with `q` in the region, built
    /// from a random complementarity pattern compatible with `(x_bar, w_bar)`.
    fn graph_point(&self, rng: &mut ChaCha8Rng) -> Option<(RVector, RVector)> {
        let n = self.q_bar.len();
        let mut x = vec![Rational::zero(); n];
        let mut w = vec![Rational::zero(); n];
        for i in 0..n {
            if self.x_bar[i].is_positive() {
                x[i] = &self.x_bar[i] + small_rational(rng, &self.step, true);
                if !x[i].is_positive() {
                    return None;
                }
            } else if self.w_bar[i].is_positive() {
                w[i] = &self.w_bar[i] + small_rational(rng, &self.step, true);
                if !w[i].is_positive() {
                    return None;
                }
            } else {
                match rng.random_range(0..3) {
                    0 => x[i] = small_rational(rng, &self.step, false),
                    1 => w[i] = small_rational(rng, &self.step, false),
                    _ => {}
                }
            }
        }
        let q: RVector = (0..n)
            .map(|i| (0..n).fold(w[i].clone(), |acc, j| acc - &self.m[(i, j)] * &x[j]))
            .collect();
        let ok = norm_sq(&sub(&q, self.q_bar)) <= &self.plan.radius * &self.plan.radius
            && norm_sq(&sub(&x, self.x_bar)) <= &self.plan.window_radius * &self.plan.window_radius
            && self.region.contains(&q);
        ok.then_some((q, x))
    }

    /// Direction in the span of the region with l1 norm `radius`.
    fn direction(&self, rng: &mut ChaCha8Rng) -> Option<RVector> {
        let n = self.q_bar.len();
        let mut d = vec![Rational::zero(); n];
        for b in &self.span {
            let c = Rational::new(rng.random_range(-DENOM..=DENOM).into(), DENOM.into());
            for (di, bi) in d.iter_mut().zip(b) {
                *di += &c * bi;
            }
        }
        let l1: Rational = d.iter().map(|v| v.abs()).sum();
        if l1.is_zero() {
            return None;
        }
        let s = &self.plan.radius / l1;
        Some(d.into_iter().map(|v| v * &s).collect())
    }

    fn samples(&self) -> Vec<GraphSample> {
        let mut rng = ChaCha8Rng::seed_from_u64(self.plan.seed);
        let mut out = Vec::with_capacity(self.plan.pair_count);
        let mut attempts = 0;
        while out.len() < self.plan.pair_count && attempts < 50 * self.plan.pair_count {
            attempts += 1;
            let Some((q, x)) = self.graph_point(&mut rng) else { continue };
            let Some(dir) = self.direction(&mut rng) else { continue };
            out.push(GraphSample { q, x, dir });
        }
        out
    }
}

fn shifted(q: &[Rational], dir: &[Rational], level: usize) -> RVector {
    let f = Rational::new(1.into(), (1i64 << level).into());
    q.iter().zip(dir).map(|(a, d)| a + d * &f).collect()
}

enum PairOutcome {
    Skipped,
    Ratio(f64),
    Empty(Violation),
}

fn pair_ratio(sampler: &Sampler, s: &GraphSample, level: usize) -> PairOutcome {
    let q = shifted(&s.q, &s.dir, level);
    if !sampler.region.contains(&q) {
        return PairOutcome::Skipped;
    }
    let sep = norm_sq(&sub(&q, &s.q));
    let sep = to_f64(&sep).sqrt();
    let at_q = brute_solutions(sampler.m, &q);
    let Some(d) = dist_sq(&at_q, &s.x) else {
        return PairOutcome::Empty(Violation { q, q_prime: s.q.clone(), x_prime: s.x.clone() });
    };
    let mut worst = to_f64(&d).sqrt();
    // the reverse inclusion: solutions at q near x_bar against S(q')
    let window = &sampler.plan.window_radius * &sampler.plan.window_radius;
    let at_qp = brute_solutions(sampler.m, &s.q);
    for y in representatives(&at_q, sampler.x_bar, &window) {
        if let Some(d) = dist_sq(&at_qp, &y) {
            worst = worst.max(to_f64(&d).sqrt());
        }
    }
    PairOutcome::Ratio(worst / sep)
}

fn profile(sampler: &Sampler, samples: &[GraphSample], levels: usize) -> RefinementProfile {
    let mut kappas = Vec::with_capacity(levels + 1);
    let mut pairs_used = Vec::with_capacity(levels + 1);
    let mut violation = None;
    for level in 0..=levels {
        let outcomes: Vec<PairOutcome> = samples.par_iter().map(|s| pair_ratio(sampler, s, level)).collect();
        let mut kappa: f64 = 0.0;
        let mut used = 0;
        for o in outcomes {
            match o {
                PairOutcome::Skipped => {}
                PairOutcome::Ratio(r) => {
                    used += 1;
                    kappa = kappa.max(r);
                }
                PairOutcome::Empty(v) => {
                    used += 1;
                    if violation.is_none() {
                        violation = Some(v);
                    }
                }
            }
        }
        kappas.push(kappa);
        pairs_used.push(used);
    }
    let (first, last) = (kappas[0], kappas[levels]);
    let divergent = violation.is_some() || (last > 1e-9 && last >= GROWTH_THRESHOLD * first);
    RefinementProfile { kappas, pairs_used, violation, divergent }
}

/// Largest observed `d(x', S(q)) / ‖q' - q‖` over sampled pairs in the
/// region at separation up to `plan.radius`, with `x'` a solution at `q'`
/// inside the window around `x_bar`.
pub fn sample_lipschitz_estimate(
    m: &RMatrix,
    region: &Region,
    q_bar: &[Rational],
    x_bar: &[Rational],
    plan: &SamplingPlan,
) -> Result<(f64, Option<Violation>)> {
    let p = refine(m, region, q_bar, x_bar, plan, 0)?;
    Ok((p.kappas[0], p.violation))
}

/// Sampled modulus at separations `radius / 2^k`, `k = 0..=levels`, over
/// the same graph points and directions. Divergent when the last estimate
/// is at least [`GROWTH_THRESHOLD`] times the first, or a region point
/// without solutions was hit.
pub fn refine(
    m: &RMatrix,
    region: &Region,
    q_bar: &[Rational],
    x_bar: &[Rational],
    plan: &SamplingPlan,
    levels: usize,
) -> Result<RefinementProfile> {
    let sampler = Sampler::new(m, region, q_bar, x_bar, plan)?;
    let samples = sampler.samples();
    if samples.is_empty() {
        return Err(Error::EmptyRegion("no graph points found in the region near q_bar".into()));
    }
    Ok(profile(&sampler, &samples, levels))
}

/// Halvings used by [`sample_isc`]; far below the sampling granularity, so
/// the distance is in its linear regime at the last two steps.
pub const ISC_HALVINGS: usize = 20;

/// Empirical inner semicontinuity relative to the region: for each sampled
/// `(q', x')` in the graph, moves `q` towards `q'` along a region segment
/// and asks whether `S(q)` closes in on `x'`. Near `q'` the distance is
/// linear in the step for reachable targets, so a target counts as
/// unreachable when the last halving shrinks a positive distance by less
/// than a quarter.
pub fn sample_isc(
    m: &RMatrix,
    region: &Region,
    q_bar: &[Rational],
    x_bar: &[Rational],
    plan: &SamplingPlan,
) -> Result<bool> {
    let sampler = Sampler::new(m, region, q_bar, x_bar, plan)?;
    let samples = sampler.samples();
    if samples.is_empty() {
        return Err(Error::EmptyRegion("no graph points found in the region near q_bar".into()));
    }
    let unreachable = samples.par_iter().any(|s| {
        let dist_at = |level: usize| -> Option<f64> {
            let q = shifted(&s.q, &s.dir, level);
            if !region.contains(&q) {
                return None;
            }
            Some(dist_sq(&brute_solutions(m, &q), &s.x).map_or(f64::INFINITY, |d| to_f64(&d).sqrt()))
        };
        match (dist_at(ISC_HALVINGS - 1), dist_at(ISC_HALVINGS)) {
            (Some(before), Some(last)) => last > 0.0 && last >= 0.75 * before,
            _ => false,
        }
    });
    Ok(!unreachable)
}
