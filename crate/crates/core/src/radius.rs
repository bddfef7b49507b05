//! Numerical radius `w(A) = max |<Ax, x>|` with a certified enclosure.
//!
//! The support function of the numerical range,
//! `g(theta) = lambda_max((e^{i theta} A + e^{-i theta} A*)/2)`, is sampled on
//! an angle grid. Its maximum is `w(A)`. Every sampled angle yields a witness
//! vector whose Rayleigh value is a lower bound, and sublinearity of support
//! functions bounds `g` between neighbouring samples from above, which gives
//! the certificate. Intervals that still could hold the maximum are bisected
//! until the enclosure meets the requested width.

use std::collections::{BTreeMap, HashSet};
use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::{map_indexed, Execution};
use crate::linalg::{cartesian_decomp, eigh, eigvalsh, operator_norm, ComplexMatrix};
use crate::rng;

/// Grid resolution cap.
pub const MAX_GRID_POINTS: usize = 1 << 20;

const ORACLE_SALT: u64 = 0x6f72_6163_6c65;
const ORACLE_CHUNK: usize = 4096;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RadiusConfig {
    /// Initial uniform grid over `[0, 2pi)`.
    pub grid_points: usize,
    /// Requested enclosure width; `None` means `1e-9 * max(1, ||A||)`.
    pub target_width: Option<f64>,
    pub max_refinement_iters: usize,
    /// Random unit vectors drawn by the sampling cross-check (0 disables it).
    pub oracle_samples: usize,
    pub seed: u64,
    pub execution: Execution,
}

impl Default for RadiusConfig {
    fn default() -> Self {
        Self {
            grid_points: 1024,
            target_width: None,
            max_refinement_iters: 200,
            oracle_samples: 0,
            seed: 0,
            execution: Execution::default(),
        }
    }
}

impl RadiusConfig {
    pub fn validate(&self) -> Result<()> {
        if self.grid_points < 8 {
            return Err(Error::InvalidParameter(format!(
                "grid_points must be at least 8, got {}",
                self.grid_points
            )));
        }
        if let Some(w) = self.target_width {
            if !(w > 0.0) {
                return Err(Error::InvalidParameter(format!(
                    "target_width must be positive, got {w}"
                )));
            }
        }
        Ok(())
    }

    pub fn target_for(&self, norm: f64) -> f64 {
        self.target_width.unwrap_or(1e-9 * norm.max(1.0))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RadiusEstimate {
    /// Attained by `witness`; the reported point value of `w(A)`.
    pub lower: f64,
    /// Certified upper bound.
    pub upper: f64,
    pub theta_star: f64,
    pub witness: Vec<Complex64>,
    /// Effective uniform resolution of the finest grid level reached.
    pub grid_points: usize,
    pub refinement_iters: usize,
    /// Angles at which the envelope was actually diagonalized.
    pub evaluations: usize,
    /// Best value of the sampling cross-check, when it ran.
    pub oracle: Option<f64>,
    pub seed: u64,
}

impl RadiusEstimate {
    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }

    pub fn value(&self) -> f64 {
        self.lower
    }
}

/// `H(theta) = (e^{i theta} A + e^{-i theta} A*)/2`.
pub fn herm_envelope(a: &ComplexMatrix, theta: f64) -> Result<ComplexMatrix> {
    Ok(Envelope::new(a)?.at(theta))
}

/// Precomputed Cartesian parts: `H(theta) = cos(theta) B - sin(theta) C`.
struct Envelope<'a> {
    a: &'a ComplexMatrix,
    b: ComplexMatrix,
    c: ComplexMatrix,
}

impl<'a> Envelope<'a> {
    fn new(a: &'a ComplexMatrix) -> Result<Self> {
        let (b, c) = cartesian_decomp(a)?;
        Ok(Self { a, b, c })
    }

    fn at(&self, theta: f64) -> ComplexMatrix {
        let (s, c) = theta.sin_cos();
        let n = self.b.rows();
        let data = self
            .b
            .as_slice()
            .iter()
            .zip(self.c.as_slice())
            .map(|(&bij, &cij)| bij * c - cij * s)
            .collect();
        ComplexMatrix::from_vec_unchecked(n, n, data)
    }

    /// `(g(theta), g(theta + pi)) = (lambda_max, -lambda_min)`.
    fn extremes(&self, theta: f64) -> Result<(f64, f64)> {
        let vals = eigvalsh(&self.at(theta))?;
        Ok((vals[vals.len() - 1], -vals[0]))
    }

    /// Top eigenvector of `H(theta)` and its Rayleigh value `|<Ax, x>|`.
    fn witness(&self, theta: f64) -> Result<(Vec<Complex64>, f64)> {
        let eig = eigh(&self.at(theta))?;
        let x = eig.vector(eig.dim() - 1);
        let value = self.a.quadratic_form(&x).norm();
        Ok((x, value))
    }
}

fn normalize_angle(theta: f64) -> f64 {
    let t = theta.rem_euclid(TAU);
    if t >= TAU {
        0.0
    } else {
        t
    }
}

/// Upper bound of a support function on `[theta_0, theta_0 + delta]` from its
/// endpoint values, `delta < pi`. Combines the sublinearity bound with the
/// Lipschitz bound `|g'| <= ||A||`.
fn interval_upper(g0: f64, g1: f64, delta: f64, lipschitz: f64) -> f64 {
    let (sd, cd) = delta.sin_cos();
    let p = g0;
    let q = (g1 - g0 * cd) / sd;
    let t_star = q.atan2(p);
    let support = if (0.0..=delta).contains(&t_star) {
        p.hypot(q)
    } else {
        g0.max(g1)
    };
    let lipschitz_bound = 0.5 * (g0 + g1 + lipschitz * delta);
    support.min(lipschitz_bound)
}

/// Sampled support function on a dyadic refinement of a uniform grid.
/// Keys are angle numerators over `resolution`.
struct Samples {
    resolution: u64,
    values: BTreeMap<u64, f64>,
}

impl Samples {
    fn angle(&self, key: u64) -> f64 {
        TAU * key as f64 / self.resolution as f64
    }

    /// Intervals `(left key, length, bound)` in angle order, wrapping around.
    fn interval_bounds(&self, lipschitz: f64) -> Vec<(u64, u64, f64)> {
        let keys: Vec<(u64, f64)> = self.values.iter().map(|(&k, &v)| (k, v)).collect();
        let mut out = Vec::with_capacity(keys.len());
        for (i, &(k0, g0)) in keys.iter().enumerate() {
            let (k1, g1) = if i + 1 < keys.len() {
                keys[i + 1]
            } else {
                (keys[0].0 + self.resolution, keys[0].1)
            };
            let len = k1 - k0;
            let delta = TAU * len as f64 / self.resolution as f64;
            out.push((k0, len, interval_upper(g0, g1, delta, lipschitz)));
        }
        out
    }

    fn argmax(&self) -> (u64, f64) {
        let mut best = (0, f64::NEG_INFINITY);
        for (&k, &v) in &self.values {
            if v > best.1 {
                best = (k, v);
            }
        }
        best
    }

    /// Evaluates `g` at `keys`, pairing antipodal keys into one eigenvalue call.
    fn evaluate(&mut self, env: &Envelope<'_>, keys: &[u64], exec: Execution) -> Result<usize> {
        let half = self.resolution.is_multiple_of(2).then_some(self.resolution / 2);
        let wanted: HashSet<u64> = keys.iter().copied().collect();
        let mut jobs: Vec<(u64, Option<u64>)> = Vec::new();
        let mut taken: HashSet<u64> = HashSet::new();
        let mut sorted: Vec<u64> = wanted.iter().copied().collect();
        sorted.sort_unstable();
        for k in sorted {
            if taken.contains(&k) {
                continue;
            }
            taken.insert(k);
            let partner = half
                .map(|h| (k + h) % self.resolution)
                .filter(|p| wanted.contains(p) && !taken.contains(p));
            if let Some(p) = partner {
                taken.insert(p);
            }
            jobs.push((k, partner));
        }
        let results = map_indexed(exec, jobs.len(), 8, |j| env.extremes(self.angle(jobs[j].0)));
        for ((k, partner), res) in jobs.iter().zip(results) {
            let (top, antipodal) = res?;
            self.values.insert(*k, top);
            if let Some(p) = partner {
                self.values.insert(*p, antipodal);
            }
        }
        Ok(jobs.len())
    }
}

/// Rounding allowance added to the certificate for eigenvalue errors.
fn rounding_margin(n: usize, norm: f64) -> f64 {
    16.0 * n as f64 * f64::EPSILON * norm
}

struct Context<'a> {
    env: Envelope<'a>,
    n: usize,
    norm: f64,
    target: f64,
}

impl<'a> Context<'a> {
    fn new(a: &'a ComplexMatrix, cfg: &RadiusConfig) -> Result<Self> {
        cfg.validate()?;
        let n = a.ensure_square()?;
        let norm = operator_norm(a)?;
        Ok(Self {
            env: Envelope::new(a)?,
            n,
            norm,
            target: cfg.target_for(norm),
        })
    }

    fn levels_allowed(grid: usize) -> u32 {
        let mut levels = 0;
        while grid << (levels + 1) <= MAX_GRID_POINTS {
            levels += 1;
        }
        levels
    }

    fn initial_samples(&self, cfg: &RadiusConfig) -> Result<(Samples, usize)> {
        let levels = Self::levels_allowed(cfg.grid_points);
        let stride = 1u64 << levels;
        let mut samples = Samples {
            resolution: cfg.grid_points as u64 * stride,
            values: BTreeMap::new(),
        };
        let keys: Vec<u64> = (0..cfg.grid_points as u64).map(|k| k * stride).collect();
        let evals = samples.evaluate(&self.env, &keys, cfg.execution)?;
        Ok((samples, evals))
    }

    fn upper(&self, samples: &Samples) -> f64 {
        samples
            .interval_bounds(self.norm)
            .iter()
            .fold(f64::NEG_INFINITY, |m, &(_, _, b)| m.max(b))
            + rounding_margin(self.n, self.norm)
    }

    fn estimate_at(
        &self,
        samples: &Samples,
        key: u64,
        grid_points: usize,
        cfg: &RadiusConfig,
    ) -> Result<RadiusEstimate> {
        let theta = samples.angle(key);
        let (witness, lower) = self.env.witness(theta)?;
        let upper = self.upper(samples).max(lower);
        Ok(RadiusEstimate {
            lower,
            upper,
            theta_star: theta,
            witness,
            grid_points,
            refinement_iters: 0,
            evaluations: samples.values.len(),
            oracle: None,
            seed: cfg.seed,
        })
    }

    fn refine(&self, est: &mut RadiusEstimate, cfg: &RadiusConfig) -> Result<()> {
        let stop = 0.01 * self.target;
        for _ in 0..cfg.max_refinement_iters {
            let z = self.env.a.quadratic_form(&est.witness);
            let theta = if z.norm() == 0.0 { 0.0 } else { -z.arg() };
            let (x, value) = self.env.witness(theta)?;
            est.refinement_iters += 1;
            if value <= est.lower {
                break;
            }
            let gain = value - est.lower;
            est.lower = value;
            est.witness = x;
            est.theta_star = normalize_angle(theta);
            if gain <= stop {
                break;
            }
        }
        est.upper = est.upper.max(est.lower);
        Ok(())
    }
}

/// Evaluates the envelope on the uniform grid of `cfg.grid_points` angles.
///
/// `lower` is the Rayleigh value of the top eigenvector at the best grid angle
/// and `upper` is the certificate from the grid samples alone.
pub fn radius_sweep(a: &ComplexMatrix, cfg: &RadiusConfig) -> Result<RadiusEstimate> {
    let ctx = Context::new(a, cfg)?;
    let (samples, _) = ctx.initial_samples(cfg)?;
    let (key, _) = samples.argmax();
    ctx.estimate_at(&samples, key, cfg.grid_points, cfg)
}

/// Alternating ascent from `est.witness`: rotate so the Rayleigh value is
/// real, then move to the top eigenvector of the rotated envelope. `lower`
/// never decreases; `upper` is left untouched.
pub fn radius_refine(
    a: &ComplexMatrix,
    est: &RadiusEstimate,
    cfg: &RadiusConfig,
) -> Result<RadiusEstimate> {
    let ctx = Context::new(a, cfg)?;
    if est.witness.len() != ctx.n {
        return Err(Error::DimensionMismatch(format!(
            "witness of length {} for a {}x{} matrix",
            est.witness.len(),
            ctx.n,
            ctx.n
        )));
    }
    let mut out = est.clone();
    ctx.refine(&mut out, cfg)?;
    Ok(out)
}

/// Maximum of `|<Ax, x>|` over `samples` Haar-random unit vectors.
pub fn radius_sample_oracle(a: &ComplexMatrix, samples: usize, seed: u64) -> Result<f64> {
    radius_sample_oracle_with(a, samples, seed, Execution::default())
}

pub fn radius_sample_oracle_with(
    a: &ComplexMatrix,
    samples: usize,
    seed: u64,
    exec: Execution,
) -> Result<f64> {
    let n = a.ensure_square()?;
    if samples == 0 {
        return Err(Error::InvalidParameter(
            "oracle needs at least one sample".into(),
        ));
    }
    let chunks = samples.div_ceil(ORACLE_CHUNK);
    let best = map_indexed(exec, chunks, 1, |c| {
        let mut rng = rng::stream(seed, c as u64, ORACLE_SALT);
        let count = ORACLE_CHUNK.min(samples - c * ORACLE_CHUNK);
        (0..count)
            .map(|_| a.quadratic_form(&rng::haar_unit_vector(&mut rng, n)).norm())
            .fold(0.0f64, f64::max)
    });
    Ok(best.into_iter().fold(0.0, f64::max))
}

/// Certified numerical radius: sweep, refine, then bisect the angle intervals
/// whose bound still exceeds `lower + target` until the enclosure is narrow
/// enough or the grid cap is reached.
pub fn numerical_radius(a: &ComplexMatrix, cfg: &RadiusConfig) -> Result<RadiusEstimate> {
    let ctx = Context::new(a, cfg)?;
    let est = if ctx.norm == 0.0 {
        let mut witness = vec![Complex64::new(0.0, 0.0); ctx.n];
        witness[0] = Complex64::new(1.0, 0.0);
        RadiusEstimate {
            lower: 0.0,
            upper: 0.0,
            theta_star: 0.0,
            witness,
            grid_points: cfg.grid_points,
            refinement_iters: 0,
            evaluations: 0,
            oracle: None,
            seed: cfg.seed,
        }
    } else {
        certify(&ctx, cfg)?
    };
    let mut est = est;
    if cfg.oracle_samples > 0 {
        est.oracle = Some(radius_sample_oracle_with(
            a,
            cfg.oracle_samples,
            cfg.seed,
            cfg.execution,
        )?);
    }
    if est.width() > ctx.target {
        return Err(Error::EnclosureNotReached {
            width: est.width(),
            target: ctx.target,
            best: Box::new(est),
        });
    }
    Ok(est)
}

fn certify(ctx: &Context<'_>, cfg: &RadiusConfig) -> Result<RadiusEstimate> {
    let (mut samples, mut evaluations) = ctx.initial_samples(cfg)?;
    let levels = Context::levels_allowed(cfg.grid_points);
    let (key, _) = samples.argmax();
    let mut est = ctx.estimate_at(&samples, key, cfg.grid_points, cfg)?;
    ctx.refine(&mut est, cfg)?;

    let margin = rounding_margin(ctx.n, ctx.norm);
    let mut level = 0;
    loop {
        let bounds = samples.interval_bounds(ctx.norm);
        let upper = bounds
            .iter()
            .fold(f64::NEG_INFINITY, |m, &(_, _, b)| m.max(b))
            + margin;
        est.upper = upper.max(est.lower);
        est.grid_points = cfg.grid_points << level;
        est.evaluations = evaluations;
        if est.width() <= ctx.target || level == levels {
            return Ok(est);
        }
        let threshold = est.lower + ctx.target - margin;
        let midpoints: Vec<u64> = bounds
            .iter()
            .filter(|&&(_, len, b)| b > threshold && len >= 2)
            .map(|&(k, len, _)| (k + len / 2) % samples.resolution)
            .collect();
        level += 1;
        if midpoints.is_empty() {
            continue;
        }
        let best_before = samples.argmax().1;
        evaluations += samples.evaluate(&ctx.env, &midpoints, cfg.execution)?;
        let (key, best) = samples.argmax();
        if best > best_before.max(est.lower) {
            let (witness, value) = ctx.env.witness(samples.angle(key))?;
            if value > est.lower {
                est.lower = value;
                est.witness = witness;
                est.theta_star = samples.angle(key);
            }
            ctx.refine(&mut est, cfg)?;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn jordan() -> ComplexMatrix {
        ComplexMatrix::from_real(2, 2, &[0.0, 1.0, 0.0, 0.0]).unwrap()
    }

    #[test]
    fn envelope_closed_forms() {
        let j = jordan();
        let h0 = herm_envelope(&j, 0.0).unwrap();
        assert_eq!(
            h0,
            ComplexMatrix::from_real(2, 2, &[0.0, 0.5, 0.5, 0.0]).unwrap()
        );
        let h = ComplexMatrix::from_real(2, 2, &[1.0, 2.0, 2.0, -3.0]).unwrap();
        let hp = herm_envelope(&h, PI / 2.0).unwrap();
        assert!(hp.max_abs() < 1e-15);
    }

    #[test]
    fn support_interval_bound_on_a_disk() {
        // constant support function of a disk of radius 1
        let delta = 0.1;
        let b = interval_upper(1.0, 1.0, delta, 1.0);
        assert!((b - 1.0 / (delta / 2.0).cos()).abs() < 1e-15);
        // endpoint maximum when the sinusoid peaks outside the interval
        let b = interval_upper(1.0, 1.0f64.min(0.5), delta, 100.0);
        assert!((1.0..=1.0 + 1e-12).contains(&b));
    }

    #[test]
    fn zero_matrix_has_zero_radius() {
        let z = ComplexMatrix::zeros(3, 3);
        let est = numerical_radius(&z, &RadiusConfig::default()).unwrap();
        assert_eq!((est.lower, est.upper), (0.0, 0.0));
        let sweep = radius_sweep(&z, &RadiusConfig::default()).unwrap();
        assert_eq!((sweep.lower, sweep.upper), (0.0, 0.0));
    }

    #[test]
    fn jordan_sweep_is_flat() {
        let est = radius_sweep(&jordan(), &RadiusConfig::default()).unwrap();
        assert!(est.lower >= 0.5 - 1e-12 && est.lower <= 0.5 + 1e-15);
        assert!(est.upper - est.lower <= PI / 1024.0);
    }

    #[test]
    fn hermitian_radius_hits_theta_zero() {
        let d = ComplexMatrix::from_diag_real(&[1.0, -1.0]);
        let est = radius_sweep(&d, &RadiusConfig::default()).unwrap();
        assert!((est.lower - 1.0).abs() < 1e-15);
        assert_eq!(est.theta_star, 0.0);
    }

    #[test]
    fn refinement_from_coarse_grid() {
        let cfg = RadiusConfig {
            grid_points: 8,
            ..Default::default()
        };
        let sweep = radius_sweep(&jordan(), &cfg).unwrap();
        let refined = radius_refine(&jordan(), &sweep, &cfg).unwrap();
        assert!((refined.lower - 0.5).abs() < 1e-12);
        assert!(refined.lower >= sweep.lower);
        // fixed point: a second pass does not move lower
        let again = radius_refine(&jordan(), &refined, &cfg).unwrap();
        assert_eq!(again.lower, refined.lower);
    }

    #[test]
    fn jordan_and_shift_radius() {
        let est = numerical_radius(&jordan(), &RadiusConfig::default()).unwrap();
        assert!((est.lower - 0.5).abs() < 1e-9);
        assert!(est.width() <= 1e-9);
        let shift =
            ComplexMatrix::from_real(3, 3, &[0.0, 1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0]).unwrap();
        let est = numerical_radius(&shift, &RadiusConfig::default()).unwrap();
        assert!((est.lower - (PI / 4.0).cos()).abs() < 1e-9, "{}", est.lower);
        assert!(est.upper >= (PI / 4.0).cos());
    }

    #[test]
    fn oracle_simple_cases() {
        let i = ComplexMatrix::identity(3);
        assert!((radius_sample_oracle(&i, 10, 1).unwrap() - 1.0).abs() < 1e-14);
        assert_eq!(
            radius_sample_oracle(&ComplexMatrix::zeros(2, 2), 10, 1).unwrap(),
            0.0
        );
        let a = radius_sample_oracle(&jordan(), 5000, 9).unwrap();
        assert_eq!(a, radius_sample_oracle(&jordan(), 5000, 9).unwrap());
        assert!(matches!(
            radius_sample_oracle(&jordan(), 0, 9),
            Err(Error::InvalidParameter(_))
        ));
    }

    #[test]
    fn config_validation() {
        let bad = RadiusConfig {
            grid_points: 4,
            ..Default::default()
        };
        assert!(numerical_radius(&jordan(), &bad).is_err());
        let bad = RadiusConfig {
            target_width: Some(0.0),
            ..Default::default()
        };
        assert!(numerical_radius(&jordan(), &bad).is_err());
        let rect = ComplexMatrix::from_real(1, 2, &[0.0, 1.0]).unwrap();
        assert!(matches!(
            numerical_radius(&rect, &RadiusConfig::default()),
            Err(Error::NotSquare { .. })
        ));
    }

    #[test]
    fn unreachable_width_reports_best_estimate() {
        let cfg = RadiusConfig {
            grid_points: MAX_GRID_POINTS / 2,
            target_width: Some(1e-30),
            ..Default::default()
        };
        let d = ComplexMatrix::from_real(2, 2, &[0.3, 1.0, 0.0, -0.2]).unwrap();
        match numerical_radius(&d, &cfg) {
            Err(Error::EnclosureNotReached { best, .. }) => assert!(best.lower <= best.upper),
            other => panic!("expected EnclosureNotReached, got {other:?}"),
        }
    }
}
