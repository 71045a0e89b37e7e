//! Synthetic recovery of line eigenvalues and plane weights from
//! band-function samples at a large radius: deterministic sample-point
//! geometry, the per-level linear system and its determinant scale, error
//! scaling across a radius sweep, inverse-power expansion solvers, and the
//! conversion of expansion coefficients into the nonlinear invariants.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::hill::{HillProblem, SpectralData};
use crate::lattice::{coeff_sub, orthogonal_decompose, plane_modes, GammaVector, ModeSet, Vec3};
use crate::potential::PotentialCoefficients;

/// Base exponent unit of the sample geometry.
pub const ALPHA: f64 = 1.0 / 432.0;
/// Secondary exponent entering the remainder bound.
pub const ALPHA1: f64 = 3.0 * ALPHA;
/// Exponent of the small inner products: samples sit at distance
/// `rho^A_EXP` from their own direction's orthogonal plane.
pub const A_EXP: f64 = 406.0 * ALPHA;

/// Decay exponent of the injected remainder and of the recovered
/// line-eigenvalue error.
pub fn mu_error_exponent() -> f64 {
    -(3.0 * A_EXP - 2.0 * ALPHA1)
}

/// Decay exponent of the recovered plane-weight error.
pub fn j_error_exponent() -> f64 {
    -(A_EXP - 2.0 * ALPHA1)
}

/// Decay exponent of the sample-system determinant for `m` directions.
pub fn det_exponent(m: usize) -> f64 {
    -2.0 * m as f64 * A_EXP
}

/// Minimal cosine between the generic sample direction and every
/// projected direction.
const GENERIC_DIRECTION_FLOOR: f64 = 0.25;
/// Minimal cross-regime inner product, in units of the radius.
const CROSS_REGIME_FLOOR: f64 = 0.05;
/// Determinant guard relative to the predicted diagonal product.
const DET_GUARD: f64 = 1e-3;

/// One projected direction, with the dual-lattice witness that spans its
/// plane together with the distinguished direction.
#[derive(Debug, Clone)]
pub struct DirectionEntry {
    /// Shortest projected lattice vector on the direction's line.
    pub beta: Vec3,
    /// Representative whose projection generated the direction.
    pub witness: GammaVector,
}

/// Sample points and projected directions for one radius.
#[derive(Debug, Clone)]
pub struct ExtractionGeometry {
    rho: f64,
    delta_rep: usize,
    delta: GammaVector,
    directions: Vec<DirectionEntry>,
    /// Sample points; index 0 is the generic direction, index `k >= 1`
    /// sits close to the orthogonal plane of direction `k`.
    samples: Vec<Vec3>,
    /// Observed bounds of the cross-regime inner products, in radius units.
    cross_bounds: (f64, f64),
}

impl ExtractionGeometry {
    /// Builds the geometry over the mode set's plane directions relative
    /// to representative `delta_rep`, keeping the first `m` distinct
    /// direction lines in representative order.
    pub fn new(modes: &ModeSet, delta_rep: usize, m: usize, rho: f64) -> Result<Self> {
        if !(1..=13).contains(&delta_rep) {
            return Err(Error::Config(format!("direction index {delta_rep} out of range")));
        }
        if m < 1 {
            return Err(Error::Config("need at least one projected direction".into()));
        }
        if !(rho.is_finite() && rho >= 10.0) {
            return Err(Error::Config("radius must be at least 10".into()));
        }
        let delta = modes.rep(delta_rep).clone();
        let delta_hat = delta.cart() / delta.cart().norm();

        let mut directions: Vec<DirectionEntry> = Vec::new();
        for k in 1..=13 {
            if k == delta_rep {
                continue;
            }
            let rep = modes.rep(k);
            let cross = delta.cart().cross(rep.cart()).norm();
            if cross <= 1e-10 * delta.cart().norm() * rep.cart().norm() {
                continue;
            }
            let dec = orthogonal_decompose(modes.basis().lattice(), &delta, rep)?;
            let hat = dec.beta / dec.beta.norm();
            let duplicate = directions
                .iter()
                .any(|d| d.beta.cross(&hat).norm() <= 1e-10 * d.beta.norm());
            if !duplicate {
                directions.push(DirectionEntry { beta: dec.beta, witness: rep.clone() });
            }
            if directions.len() == m {
                break;
            }
        }
        if directions.len() < m {
            return Err(Error::Config(format!(
                "only {} distinct projected directions available, {m} requested",
                directions.len()
            )));
        }

        // Orthonormal frame of the plane orthogonal to the direction.
        let e1 = directions[0].beta / directions[0].beta.norm();
        let e2 = delta_hat.cross(&e1);
        let small = rho.powf(A_EXP);

        // Generic sample: the candidate angle keeping every projected
        // direction at a healthy inclination.
        let mut best: Option<(f64, Vec3)> = None;
        for t in 0..24 {
            let theta = std::f64::consts::PI * t as f64 / 24.0;
            let u = e1 * theta.cos() + e2 * theta.sin();
            let score = directions
                .iter()
                .map(|d| (u.dot(&d.beta) / d.beta.norm()).abs())
                .fold(f64::INFINITY, f64::min);
            if best.as_ref().is_none_or(|(s, _)| score > *s) {
                best = Some((score, u));
            }
        }
        let (score, u0) = best.expect("candidate list is nonempty");
        if score < GENERIC_DIRECTION_FLOOR {
            return Err(Error::Config(format!(
                "no sample direction clears all projected directions: best cosine {score:.3}"
            )));
        }

        let mut samples = vec![u0 * rho];
        for (s, dir) in directions.iter().enumerate().take(m) {
            let b_hat = dir.beta / dir.beta.norm();
            let n_hat = delta_hat.cross(&b_hat);
            let x = small * (1.0 + 0.1 * (s + 1) as f64) / dir.beta.norm();
            if x >= 0.99 * rho {
                return Err(Error::Config(format!(
                    "radius {rho} too small for the sample regime along direction {}",
                    s + 1
                )));
            }
            let y = (rho * rho - x * x).sqrt();
            samples.push(b_hat * x + n_hat * y);
        }

        let mut cross_lo = f64::INFINITY;
        let mut cross_hi = 0.0f64;
        for (s, p) in samples.iter().enumerate() {
            for (k, dir) in directions.iter().enumerate() {
                let ip = p.dot(&dir.beta).abs();
                if s == k + 1 {
                    let lo = small / 3.0;
                    let hi = 3.0 * small;
                    if !(ip > lo && ip < hi) {
                        return Err(Error::Config(format!(
                            "inner product {ip:.3e} outside the near regime ({lo:.3e}, {hi:.3e})"
                        )));
                    }
                } else {
                    cross_lo = cross_lo.min(ip / rho);
                    cross_hi = cross_hi.max(ip / rho);
                }
            }
        }
        if cross_lo < CROSS_REGIME_FLOOR {
            return Err(Error::Config(format!(
                "cross-regime inner product ratio {cross_lo:.3} under the floor"
            )));
        }
        Ok(ExtractionGeometry {
            rho,
            delta_rep,
            delta,
            directions,
            samples,
            cross_bounds: (cross_lo, cross_hi),
        })
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    pub fn delta_rep(&self) -> usize {
        self.delta_rep
    }

    pub fn delta(&self) -> &GammaVector {
        &self.delta
    }

    pub fn directions(&self) -> &[DirectionEntry] {
        &self.directions
    }

    pub fn sample(&self, s: usize) -> Vec3 {
        self.samples[s]
    }

    pub fn sample_count(&self) -> usize {
        self.samples.len()
    }

    pub fn cross_bounds(&self) -> (f64, f64) {
        self.cross_bounds
    }

    /// Coefficient of the `k`-th plane weight in sample `s`'s equation.
    pub fn weight(&self, s: usize, k: usize) -> f64 {
        let b = &self.directions[k].beta;
        let ip = self.samples[s].dot(b);
        0.25 * b.norm().powi(4) / (ip * ip)
    }

    /// Product of the dominant diagonal coefficients: the expected
    /// determinant scale of the sample system.
    pub fn predicted_det_scale(&self) -> f64 {
        (0..self.directions.len()).map(|k| self.weight(k + 1, k)).product()
    }
}

/// Synthetic band samples for a list of levels over one geometry.
///
/// Samples are stored as the excess over the exactly known symbol
/// `|sample|^2`, which keeps the stored payload at unit scale across the
/// whole radius range.
#[derive(Debug, Clone)]
pub struct SyntheticBandData {
    geometry: ExtractionGeometry,
    v: f64,
    j_list: Vec<i64>,
    noise_amp: f64,
    excess: Vec<Vec<f64>>,
    truth_mu: Vec<f64>,
    truth_j: Vec<Vec<f64>>,
}

impl SyntheticBandData {
    pub fn geometry(&self) -> &ExtractionGeometry {
        &self.geometry
    }

    pub fn v(&self) -> f64 {
        self.v
    }

    pub fn levels(&self) -> &[i64] {
        &self.j_list
    }

    pub fn noise_amp(&self) -> f64 {
        self.noise_amp
    }

    /// Stored sample: the band value minus the symbol `|sample|^2`.
    pub fn lambda_excess(&self, level_idx: usize, s: usize) -> f64 {
        self.excess[level_idx][s]
    }

    /// Full band value at sample `s`.
    pub fn lambda_full(&self, level_idx: usize, s: usize) -> f64 {
        self.excess[level_idx][s] + self.geometry.sample(s).norm_squared()
    }

    /// Ground-truth line eigenvalue retained for scoring.
    pub fn truth_mu(&self, level_idx: usize) -> f64 {
        self.truth_mu[level_idx]
    }

    /// Ground-truth plane weights retained for scoring.
    pub fn truth_j(&self, level_idx: usize) -> &[f64] {
        &self.truth_j[level_idx]
    }
}

fn integer_multiple(d: [i64; 3], base: [i64; 3]) -> Option<i64> {
    let axis = (0..3).find(|&i| base[i] != 0)?;
    if d[axis] % base[axis] != 0 {
        return None;
    }
    let n = d[axis] / base[axis];
    if (0..3).all(|i| d[i] == n * base[i]) {
        Some(n)
    } else {
        None
    }
}

fn plane_weight_from_modes(
    q: &PotentialCoefficients,
    delta: &GammaVector,
    witness: &GammaVector,
    data: &SpectralData,
    col: usize,
) -> Result<f64> {
    let plane = plane_modes(q.modes(), delta, witness)?;
    let dc = delta.coeffs();
    let mut acc = Complex64::new(0.0, 0.0);
    for c in &plane {
        for c2 in &plane {
            let d = coeff_sub(c.coeffs(), c2.coeffs());
            if let Some(n) = integer_multiple(d, dc) {
                let w = data.density_harmonic(col, n);
                acc += q.z_at(c.coeffs()) * q.z_at(c2.coeffs()).conj() * w.conj();
            }
        }
    }
    Ok(acc.re)
}

/// Plane weight of level `j` computed from the mode pairs of the
/// `(delta, witness)` plane and one truncated eigensolve.
pub fn plane_weight(
    q: &PotentialCoefficients,
    delta_rep: usize,
    witness_rep: usize,
    j: i64,
    v: f64,
    truncation: usize,
) -> Result<f64> {
    let modes = q.modes();
    let delta = modes.rep(delta_rep);
    let line = [(1, q.z(delta_rep))];
    let problem = HillProblem::new(delta.cart().norm(), v, truncation, &line)?;
    let data = problem.solve();
    let (_, col) = problem.eigenvalue_near(&data, j)?;
    plane_weight_from_modes(q, delta, modes.rep(witness_rep), &data, col)
}

/// Mean square of the plane component: the zeroth expansion coefficient.
pub fn plane_square_mass(
    q: &PotentialCoefficients,
    delta_rep: usize,
    witness_rep: usize,
) -> Result<f64> {
    let modes = q.modes();
    let plane = plane_modes(modes, modes.rep(delta_rep), modes.rep(witness_rep))?;
    Ok(plane.iter().map(|c| q.z_at(c.coeffs()).norm_sqr()).sum())
}

/// Mean of the squared plane component against the line profile: the
/// quantity behind the quadratic expansion coefficient.
pub fn plane_cubic_mass(
    q: &PotentialCoefficients,
    delta_rep: usize,
    witness_rep: usize,
) -> Result<f64> {
    let modes = q.modes();
    let delta = modes.rep(delta_rep);
    let plane = plane_modes(modes, delta, modes.rep(witness_rep))?;
    let mut s1 = Complex64::new(0.0, 0.0);
    for c in &plane {
        let shifted = [
            c.coeffs()[0] + delta.coeffs()[0],
            c.coeffs()[1] + delta.coeffs()[1],
            c.coeffs()[2] + delta.coeffs()[2],
        ];
        if plane.iter().any(|p| p.coeffs() == shifted) {
            s1 += q.z_at(c.coeffs()) * q.z_at(shifted).conj() * q.z(delta_rep);
        }
    }
    Ok(2.0 * s1.re)
}

/// Generates synthetic band samples from the asymptotic sample model: the
/// symbol plus the line eigenvalue plus direction-weighted plane terms,
/// with a seeded uniform remainder at the stated bound.
pub fn generate_synthetic(
    q: &PotentialCoefficients,
    geometry: ExtractionGeometry,
    j_list: &[i64],
    v: f64,
    noise_amp: f64,
    truncation: usize,
    seed: u64,
) -> Result<SyntheticBandData> {
    if j_list.is_empty() {
        return Err(Error::Config("need at least one level".into()));
    }
    if !(noise_amp.is_finite() && noise_amp >= 0.0) {
        return Err(Error::Config("noise amplitude must be nonnegative".into()));
    }
    let modes = q.modes();
    let delta = modes.rep(geometry.delta_rep()).clone();
    let line = [(1, q.z(geometry.delta_rep()))];
    let problem = HillProblem::new(delta.cart().norm(), v, truncation, &line)?;
    let data = problem.solve();

    let rho = geometry.rho();
    let bound = noise_amp * rho.powf(mu_error_exponent()) * rho.ln();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let mut excess = Vec::with_capacity(j_list.len());
    let mut truth_mu = Vec::with_capacity(j_list.len());
    let mut truth_j = Vec::with_capacity(j_list.len());
    for &j in j_list {
        let (mu, col) = problem.eigenvalue_near(&data, j)?;
        let mut js = Vec::with_capacity(geometry.directions().len());
        for dir in geometry.directions() {
            js.push(plane_weight_from_modes(q, &delta, &dir.witness, &data, col)?);
        }
        let mut row = Vec::with_capacity(geometry.sample_count());
        for s in 0..geometry.sample_count() {
            let mut value = mu;
            for (k, &jv) in js.iter().enumerate() {
                value += geometry.weight(s, k) * jv;
            }
            if noise_amp > 0.0 {
                value += bound * rng.gen_range(-1.0..1.0);
            }
            row.push(value);
        }
        excess.push(row);
        truth_mu.push(mu);
        truth_j.push(js);
    }
    Ok(SyntheticBandData {
        geometry,
        v,
        j_list: j_list.to_vec(),
        noise_amp,
        excess,
        truth_mu,
        truth_j,
    })
}

/// Solution of the sample system for one level.
#[derive(Debug, Clone, PartialEq)]
pub struct LevelSolution {
    pub mu: f64,
    pub j_values: Vec<f64>,
    pub det: f64,
}

/// Solves the per-level sample system: one unknown line eigenvalue plus
/// one plane weight per direction, one equation per sample point.
pub fn solve_mu_j(data: &SyntheticBandData) -> Result<Vec<LevelSolution>> {
    let geom = data.geometry();
    let m = geom.directions().len();
    let dim = m + 1;
    if geom.sample_count() != dim {
        return Err(Error::Config("sample count must be one more than the directions".into()));
    }
    let mut a = DMatrix::<f64>::zeros(dim, dim);
    for s in 0..dim {
        a[(s, 0)] = 1.0;
        for k in 0..m {
            a[(s, k + 1)] = geom.weight(s, k);
        }
    }
    let lu = a.lu();
    let det = lu.determinant();
    let scale = geom.predicted_det_scale();
    if det.abs() < DET_GUARD * scale {
        return Err(Error::IllConditioned(format!(
            "sample system determinant {det:.3e} under the expected scale {scale:.3e}"
        )));
    }
    let mut out = Vec::with_capacity(data.levels().len());
    for idx in 0..data.levels().len() {
        let rhs = DVector::from_fn(dim, |s, _| data.lambda_excess(idx, s));
        let sol = lu
            .solve(&rhs)
            .ok_or_else(|| Error::IllConditioned("sample system solve failed".into()))?;
        out.push(LevelSolution {
            mu: sol[0],
            j_values: (0..m).map(|k| sol[k + 1]).collect(),
            det,
        });
    }
    Ok(out)
}

/// Configuration of a radius sweep.
#[derive(Debug, Clone)]
pub struct SweepConfig {
    pub delta_rep: usize,
    pub m: usize,
    pub j: i64,
    pub v: f64,
    pub truncation: usize,
    pub noise_amp: f64,
    pub trials: usize,
    pub seed: u64,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            delta_rep: 1,
            m: 2,
            j: 2,
            v: 0.3,
            truncation: 32,
            noise_amp: 1e3,
            trials: 20,
            seed: 0,
        }
    }
}

/// Recovery errors and determinant at one radius.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepPoint {
    pub rho: f64,
    pub mu_err: f64,
    pub j_err: f64,
    pub det: f64,
}

/// Radius sweep with fitted log-log slopes.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepReport {
    pub points: Vec<SweepPoint>,
    pub mu_slope: f64,
    pub j_slope: f64,
    pub det_slope: f64,
}

fn median(values: &mut [f64]) -> f64 {
    values.sort_by(f64::total_cmp);
    let n = values.len();
    if n % 2 == 1 {
        values[n / 2]
    } else {
        0.5 * (values[n / 2 - 1] + values[n / 2])
    }
}

fn loglog_slope(points: &[(f64, f64)]) -> f64 {
    let pts: Vec<(f64, f64)> =
        points.iter().filter(|p| p.0 > 0.0 && p.1 > 0.0).map(|p| (p.0.ln(), p.1.ln())).collect();
    if pts.len() < 2 {
        return f64::NAN;
    }
    let n = pts.len() as f64;
    let sx: f64 = pts.iter().map(|p| p.0).sum();
    let sy: f64 = pts.iter().map(|p| p.1).sum();
    let sxx: f64 = pts.iter().map(|p| p.0 * p.0).sum();
    let sxy: f64 = pts.iter().map(|p| p.0 * p.1).sum();
    (n * sxy - sx * sy) / (n * sxx - sx * sx)
}

/// Runs the recovery over a radius list, scoring median errors against the
/// retained ground truth over seeded noise trials.
pub fn rho_sweep(
    q: &PotentialCoefficients,
    cfg: &SweepConfig,
    rhos: &[f64],
) -> Result<SweepReport> {
    if rhos.len() < 2 {
        return Err(Error::Config("need at least two radii for slope fits".into()));
    }
    if cfg.trials < 1 {
        return Err(Error::Config("need at least one trial".into()));
    }
    let mut points = Vec::with_capacity(rhos.len());
    for &rho in rhos {
        let mut mu_errs = Vec::with_capacity(cfg.trials);
        let mut j_errs = Vec::with_capacity(cfg.trials);
        let mut det = 0.0;
        for t in 0..cfg.trials {
            let geometry = ExtractionGeometry::new(q.modes(), cfg.delta_rep, cfg.m, rho)?;
            let data = generate_synthetic(
                q,
                geometry,
                &[cfg.j],
                cfg.v,
                cfg.noise_amp,
                cfg.truncation,
                cfg.seed.wrapping_add(t as u64),
            )?;
            let sol = &solve_mu_j(&data)?[0];
            det = sol.det;
            mu_errs.push((sol.mu - data.truth_mu(0)).abs());
            let je = sol
                .j_values
                .iter()
                .zip(data.truth_j(0))
                .map(|(a, b)| (a - b).abs())
                .fold(0.0f64, f64::max);
            j_errs.push(je);
        }
        points.push(SweepPoint {
            rho,
            mu_err: median(&mut mu_errs),
            j_err: median(&mut j_errs),
            det: det.abs(),
        });
    }
    let mu_slope = loglog_slope(&points.iter().map(|p| (p.rho, p.mu_err)).collect::<Vec<_>>());
    let j_slope = loglog_slope(&points.iter().map(|p| (p.rho, p.j_err)).collect::<Vec<_>>());
    let det_slope = loglog_slope(&points.iter().map(|p| (p.rho, p.det)).collect::<Vec<_>>());
    Ok(SweepReport { points, mu_slope, j_slope, det_slope })
}

/// Cap on the residual expansion order: beyond this the clustered
/// inverse-level nodes make the system numerically useless.
pub const C_EXPANSION_MAX: usize = 6;
/// Cap on the weight expansion order.
pub const J_EXPANSION_MAX: usize = 5;

fn inverse_power_matrix(j: i64, rows: usize, powers: std::ops::RangeInclusive<u32>) -> DMatrix<f64> {
    let cols = powers.clone().count();
    DMatrix::from_fn(rows, cols, |k, p| {
        let node = (j * (k as i64 + 1)) as f64;
        node.powi(-((*powers.start() + p as u32) as i32))
    })
}

/// Solves the inverse-power system for the residual expansion
/// coefficients `c_1..c_n` from samples at levels `j, 2j, .., nj`.
///
/// Samples are the residuals of the line eigenvalues over the symbol.
pub fn solve_c_expansion(samples: &[f64], j: i64, n: usize) -> Result<Vec<f64>> {
    if n < 1 || samples.len() != n {
        return Err(Error::Config(format!("expected {n} samples, got {}", samples.len())));
    }
    if j < 1 {
        return Err(Error::Config("base level must be positive".into()));
    }
    if n > C_EXPANSION_MAX {
        return Err(Error::IllConditioned(format!(
            "residual expansion order {n} beyond the supported {C_EXPANSION_MAX}"
        )));
    }
    let a = inverse_power_matrix(j, n, 1..=n as u32);
    let rhs = DVector::from_column_slice(samples);
    let sol = a
        .lu()
        .solve(&rhs)
        .ok_or_else(|| Error::IllConditioned("residual expansion system".into()))?;
    Ok(sol.iter().copied().collect())
}

/// Worst-case propagation of a per-sample perturbation `eta` into the
/// `target`-th (1-based) recovered expansion coefficient.
pub fn c_noise_bound(j: i64, n: usize, target: usize, eta: f64) -> Result<f64> {
    if target < 1 || target > n {
        return Err(Error::Config(format!("target {target} out of range 1..={n}")));
    }
    if n > C_EXPANSION_MAX {
        return Err(Error::IllConditioned(format!(
            "residual expansion order {n} beyond the supported {C_EXPANSION_MAX}"
        )));
    }
    let a = inverse_power_matrix(j, n, 1..=n as u32);
    let inv = a
        .try_inverse()
        .ok_or_else(|| Error::IllConditioned("residual expansion system".into()))?;
    let row_l1: f64 = (0..n).map(|k| inv[(target - 1, k)].abs()).sum();
    Ok(row_l1 * eta)
}

/// Solves for the weight expansion coefficients `J_0..J_n` from samples at
/// levels `j, 2j, .., (n+1)j`.
pub fn solve_j_expansion(samples: &[f64], j: i64, n: usize) -> Result<Vec<f64>> {
    if samples.len() != n + 1 {
        return Err(Error::Config(format!("expected {} samples, got {}", n + 1, samples.len())));
    }
    if j < 1 {
        return Err(Error::Config("base level must be positive".into()));
    }
    if n > J_EXPANSION_MAX {
        return Err(Error::IllConditioned(format!(
            "weight expansion order {n} beyond the supported {J_EXPANSION_MAX}"
        )));
    }
    let a = inverse_power_matrix(j, n + 1, 0..=n as u32);
    let rhs = DVector::from_column_slice(samples);
    let sol = a
        .lu()
        .solve(&rhs)
        .ok_or_else(|| Error::IllConditioned("weight expansion system".into()))?;
    Ok(sol.iter().copied().collect())
}

/// Constants of the weight expansion's known-coefficient layer, supplied
/// by configuration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExpansionConstants {
    pub a1: f64,
    pub a2: f64,
    pub a3: f64,
    pub a4: f64,
    pub a5: f64,
    pub a6: f64,
}

impl Default for ExpansionConstants {
    fn default() -> Self {
        ExpansionConstants { a1: 0.0, a2: 0.0, a3: 0.0, a4: 0.0, a5: 1.0, a6: 0.0 }
    }
}

/// Converts recovered weight expansion coefficients into the two
/// nonlinear invariants of the direction's plane, parametrically in the
/// configured constants.
pub fn invariants_from_j(
    j_coeffs: &[f64],
    z_delta_norm_sq: f64,
    consts: &ExpansionConstants,
) -> Result<(f64, f64)> {
    if j_coeffs.len() < 5 {
        return Err(Error::Config("need expansion coefficients up to order four".into()));
    }
    let i1 = 2.0 * (j_coeffs[2] - consts.a1 * z_delta_norm_sq * j_coeffs[0]);
    if consts.a5 == 0.0 {
        return Err(Error::Config("quartic conversion constant must be nonzero".into()));
    }
    let i2 = (j_coeffs[4] - consts.a4 * i1 - consts.a6 * j_coeffs[0]) / consts.a5;
    Ok((i1, i2))
}
