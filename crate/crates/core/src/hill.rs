//! One-dimensional band-spectrum tools: the truncated Fourier matrix of a
//! quasimomentum family, periodic/antiperiodic band edges and gap lengths,
//! density harmonics of normalized eigenfunctions, eigenvalue asymptotics
//! probes, and second-order perturbation references.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Extra rows required beyond twice the top harmonic.
const TRUNCATION_MARGIN: usize = 10;
/// Gaps below this floor are treated as numerically unresolved.
pub const GAP_FLOOR: f64 = 1e-13;
/// Relative tolerance for the band-edge ordering assertion.
const INTERLACING_REL_TOL: f64 = 1e-9;

/// Quasimomentum eigenvalue problem for one frequency line: the operator
/// acts on exponentials `exp(i (n + v) s)` with symbol `d^2 (n + v)^2`
/// plus convolution by the line profile.
#[derive(Debug, Clone)]
pub struct HillProblem {
    delta_norm: f64,
    v: f64,
    truncation: usize,
    /// Positive-harmonic coefficients `(h, z_h)`, `h >= 1`, sorted by `h`.
    harmonics: Vec<(i64, Complex64)>,
}

impl HillProblem {
    pub fn new(
        delta_norm: f64,
        v: f64,
        truncation: usize,
        harmonics: &[(i64, Complex64)],
    ) -> Result<Self> {
        if !(delta_norm.is_finite() && delta_norm > 0.0) {
            return Err(Error::Config("frequency norm must be positive".into()));
        }
        if !v.is_finite() {
            return Err(Error::Config("quasimomentum must be finite".into()));
        }
        let mut hs: Vec<(i64, Complex64)> = Vec::new();
        for &(h, z) in harmonics {
            if h < 1 {
                return Err(Error::Config(format!("harmonic index {h} must be positive")));
            }
            if hs.iter().any(|&(h0, _)| h0 == h) {
                return Err(Error::Config(format!("duplicate harmonic index {h}")));
            }
            hs.push((h, z));
        }
        hs.sort_by_key(|&(h, _)| h);
        let max_h = hs.last().map_or(0, |&(h, _)| h) as usize;
        let needed = 2 * max_h + TRUNCATION_MARGIN;
        if truncation < needed {
            return Err(Error::TruncationTooSmall { needed, got: truncation });
        }
        Ok(HillProblem { delta_norm, v, truncation, harmonics: hs })
    }

    pub fn delta_norm(&self) -> f64 {
        self.delta_norm
    }

    pub fn v(&self) -> f64 {
        self.v
    }

    pub fn truncation(&self) -> usize {
        self.truncation
    }

    pub fn harmonics(&self) -> &[(i64, Complex64)] {
        &self.harmonics
    }

    fn max_harmonic(&self) -> i64 {
        self.harmonics.last().map_or(0, |&(h, _)| h)
    }

    /// Unperturbed eigenvalue at index `n`.
    pub fn free_eigenvalue(&self, n: i64) -> f64 {
        let u = n as f64 + self.v;
        self.delta_norm * self.delta_norm * u * u
    }

    /// The truncated matrix over indices `n = -N..=N`.
    pub fn matrix(&self) -> DMatrix<Complex64> {
        let n = self.truncation as i64;
        let dim = 2 * self.truncation + 1;
        let mut m = DMatrix::from_element(dim, dim, Complex64::new(0.0, 0.0));
        for p in 0..dim {
            let np = p as i64 - n;
            m[(p, p)] = Complex64::new(self.free_eigenvalue(np), 0.0);
        }
        for &(h, z) in &self.harmonics {
            for p in 0..dim {
                let q = p as i64 + h;
                if q < dim as i64 {
                    // Row index minus column index equals +h here.
                    m[(q as usize, p)] = z;
                    m[(p, q as usize)] = z.conj();
                }
            }
        }
        m
    }

    /// Full sorted eigensolve of the truncated matrix.
    pub fn solve(&self) -> SpectralData {
        let (values, vectors) = hermitian_eig_sorted(self.matrix());
        SpectralData { values, vectors, offset: self.truncation as i64 }
    }

    /// Eigenvalue nearest the unperturbed level `j`, with its sorted index.
    /// Requires the truncation to dominate `j` with room for the harmonics.
    pub fn eigenvalue_near(&self, data: &SpectralData, j: i64) -> Result<(f64, usize)> {
        let needed = j.unsigned_abs() as usize + self.max_harmonic() as usize + 5;
        if self.truncation < needed {
            return Err(Error::TruncationTooSmall { needed, got: self.truncation });
        }
        let (idx, val) = data.nearest(self.free_eigenvalue(j));
        Ok((val, idx))
    }

    /// Second-order shift reference for a single unit-step harmonic pair
    /// with coefficient modulus `mu` at level `n`.
    pub fn second_order_shift(delta_norm: f64, v: f64, mu: f64, n: i64) -> f64 {
        let u = n as f64 + v;
        2.0 * mu * mu / (delta_norm * delta_norm * (4.0 * u * u - 1.0))
    }
}

/// Sorted eigenvalues and matching eigenvectors of one truncated solve.
#[derive(Debug, Clone)]
pub struct SpectralData {
    pub values: Vec<f64>,
    pub vectors: DMatrix<Complex64>,
    /// Basis index of matrix row zero is `-offset`.
    pub offset: i64,
}

impl SpectralData {
    /// Index and value of the eigenvalue closest to `target`.
    pub fn nearest(&self, target: f64) -> (usize, f64) {
        let mut best = 0;
        for (k, &v) in self.values.iter().enumerate() {
            if (v - target).abs() < (self.values[best] - target).abs() {
                best = k;
            }
        }
        (best, self.values[best])
    }

    /// Fourier coefficient of the squared modulus of the normalized
    /// eigenfunction in column `col`, at harmonic `h`.
    pub fn density_harmonic(&self, col: usize, h: i64) -> Complex64 {
        let u = self.vectors.column(col);
        let dim = u.len() as i64;
        let mut acc = Complex64::new(0.0, 0.0);
        if h >= 0 {
            for p in 0..(dim - h) {
                acc += u[(p + h) as usize] * u[p as usize].conj();
            }
        } else {
            for p in (-h)..dim {
                acc += u[(p + h) as usize] * u[p as usize].conj();
            }
        }
        acc
    }
}

fn hermitian_eig_sorted(m: DMatrix<Complex64>) -> (Vec<f64>, DMatrix<Complex64>) {
    let dim = m.nrows();
    let se = m.symmetric_eigen();
    let mut order: Vec<usize> = (0..dim).collect();
    order.sort_by(|&a, &b| se.eigenvalues[a].total_cmp(&se.eigenvalues[b]));
    let values: Vec<f64> = order.iter().map(|&k| se.eigenvalues[k]).collect();
    let mut vectors = DMatrix::from_element(dim, dim, Complex64::new(0.0, 0.0));
    for (dst, &src) in order.iter().enumerate() {
        vectors.set_column(dst, &se.eigenvectors.column(src));
    }
    (values, vectors)
}

/// One band row: edges and gap length at band index `n`.
#[derive(Debug, Clone, PartialEq)]
pub struct GapRow {
    pub n: usize,
    pub lower: f64,
    pub upper: f64,
    pub gap: f64,
}

/// Band edges and gap lengths of an even-frequency line potential.
#[derive(Debug, Clone, PartialEq)]
pub struct GapReport {
    pub rows: Vec<GapRow>,
    /// First requested band index whose gap fell under the resolvable
    /// floor, if the report stopped early.
    pub truncated_at: Option<usize>,
}

/// Computes band edges of `p(x) = sum_s (p_s exp(2 i s x) + conj)` from the
/// periodic and antiperiodic problems on the half period.
///
/// `half_bandwidth` controls both truncated matrices; gaps under the
/// resolvable floor truncate the report.
pub fn band_gaps(
    harmonics: &[(i64, Complex64)],
    n_max: usize,
    half_bandwidth: usize,
) -> Result<GapReport> {
    let mut max_h = 0usize;
    for &(h, _) in harmonics {
        if h < 1 {
            return Err(Error::Config(format!("harmonic index {h} must be positive")));
        }
        max_h = max_h.max(h as usize);
    }
    let needed = n_max / 2 + max_h + TRUNCATION_MARGIN;
    if half_bandwidth < needed {
        return Err(Error::TruncationTooSmall { needed, got: half_bandwidth });
    }
    let k = half_bandwidth as i64;
    let z_at = |d: i64| -> Complex64 {
        for &(h, z) in harmonics {
            if d == h {
                return z;
            }
            if d == -h {
                return z.conj();
            }
        }
        Complex64::new(0.0, 0.0)
    };

    // Periodic problem: frequencies 2n, n in [-K, K].
    let dim_p = (2 * k + 1) as usize;
    let mut mp = DMatrix::from_element(dim_p, dim_p, Complex64::new(0.0, 0.0));
    for r in 0..dim_p {
        let nr = r as i64 - k;
        let f = 2.0 * nr as f64;
        mp[(r, r)] = Complex64::new(f * f, 0.0);
        for c in 0..dim_p {
            if r != c {
                let nc = c as i64 - k;
                let z = z_at(nr - nc);
                if z != Complex64::new(0.0, 0.0) {
                    mp[(r, c)] = z;
                }
            }
        }
    }
    // Antiperiodic problem: frequencies 2n+1, n in [-K, K-1].
    let dim_a = (2 * k) as usize;
    let mut ma = DMatrix::from_element(dim_a, dim_a, Complex64::new(0.0, 0.0));
    for r in 0..dim_a {
        let nr = r as i64 - k;
        let f = (2 * nr + 1) as f64;
        ma[(r, r)] = Complex64::new(f * f, 0.0);
        for c in 0..dim_a {
            if r != c {
                let nc = c as i64 - k;
                let z = z_at(nr - nc);
                if z != Complex64::new(0.0, 0.0) {
                    ma[(r, c)] = z;
                }
            }
        }
    }
    let (pv, _) = hermitian_eig_sorted(mp);
    let (av, _) = hermitian_eig_sorted(ma);

    let mut rows = Vec::with_capacity(n_max + 1);
    let mut truncated_at = None;
    for n in 0..=n_max {
        let (lower, upper) = if n == 0 {
            (pv[0], pv[0])
        } else if n % 2 == 1 {
            (av[n - 1], av[n])
        } else {
            (pv[n - 1], pv[n])
        };
        let tol = INTERLACING_REL_TOL * lower.abs().max(upper.abs()).max(1.0);
        if upper < lower - tol {
            return Err(Error::InterlacingViolation { index: n, amount: lower - upper });
        }
        if let Some(prev) = rows.last() {
            let prev: &GapRow = prev;
            if lower < prev.upper - tol {
                return Err(Error::InterlacingViolation { index: n, amount: prev.upper - lower });
            }
        }
        let gap = (upper - lower).max(0.0);
        if n >= 1 && gap < GAP_FLOOR {
            truncated_at = Some(n);
            break;
        }
        rows.push(GapRow { n, lower, upper, gap });
    }
    Ok(GapReport { rows, truncated_at })
}

/// Gap-length comparison row for two potentials at one band index.
#[derive(Debug, Clone, PartialEq)]
pub struct DecayRow {
    pub n: usize,
    pub gap_low: f64,
    pub gap_high: f64,
}

/// Comparison of gap decay between a lower-degree and a higher-degree line
/// potential over a band range.
#[derive(Debug, Clone, PartialEq)]
pub struct DecayReport {
    pub rows: Vec<DecayRow>,
    /// Fitted slopes of `ln gap` against `n ln n`.
    pub slope_low: f64,
    pub slope_high: f64,
    /// Whether the higher-degree potential kept strictly larger gaps on
    /// every compared row with both gaps already small.
    pub dominance: bool,
}

/// Threshold under which both gaps count as asymptotically small for the
/// dominance comparison.
pub const DECAY_SMALL_GAP: f64 = 1e-2;

/// Compares gap decay rates of two line potentials on `n_lo..=n_hi`.
pub fn gap_decay_compare(
    low: &[(i64, Complex64)],
    high: &[(i64, Complex64)],
    n_lo: usize,
    n_hi: usize,
    half_bandwidth: usize,
) -> Result<DecayReport> {
    let rl = band_gaps(low, n_hi, half_bandwidth)?;
    let rh = band_gaps(high, n_hi, half_bandwidth)?;
    let mut rows = Vec::new();
    for n in n_lo..=n_hi {
        let gl = rl.rows.iter().find(|r| r.n == n);
        let gh = rh.rows.iter().find(|r| r.n == n);
        if let (Some(gl), Some(gh)) = (gl, gh) {
            rows.push(DecayRow { n, gap_low: gl.gap, gap_high: gh.gap });
        }
    }
    if rows.is_empty() {
        return Err(Error::GapUnderflow { index: n_lo });
    }
    let fit = |sel: &dyn Fn(&DecayRow) -> f64| -> f64 {
        // Least-squares slope of ln(gap) against n ln n.
        let pts: Vec<(f64, f64)> = rows
            .iter()
            .filter(|r| sel(r) > 0.0)
            .map(|r| {
                let x = r.n as f64 * (r.n as f64).ln();
                (x, sel(r).ln())
            })
            .collect();
        if pts.len() < 2 {
            return f64::NAN;
        }
        let n = pts.len() as f64;
        let sx: f64 = pts.iter().map(|p| p.0).sum();
        let sy: f64 = pts.iter().map(|p| p.1).sum();
        let sxx: f64 = pts.iter().map(|p| p.0 * p.0).sum();
        let sxy: f64 = pts.iter().map(|p| p.0 * p.1).sum();
        (n * sxy - sx * sy) / (n * sxx - sx * sx)
    };
    let slope_low = fit(&|r: &DecayRow| r.gap_low);
    let slope_high = fit(&|r: &DecayRow| r.gap_high);
    let dominance = rows
        .iter()
        .filter(|r| r.gap_low < DECAY_SMALL_GAP && r.gap_high < DECAY_SMALL_GAP)
        .all(|r| r.gap_high > r.gap_low);
    Ok(DecayReport { rows, slope_low, slope_high, dominance })
}

/// Asymptotic residual probe of one quasimomentum family.
#[derive(Debug, Clone, PartialEq)]
pub struct AsymptoticProbe {
    /// Coefficients fitted to the residuals against `1/j .. 1/j^4`.
    pub fitted: [f64; 4],
    /// Root-mean-square misfit of the fitted model.
    pub fit_residual: f64,
    /// Mean-square conversion of the line profile into the cubic
    /// asymptotic coefficient.
    pub c3_profile: f64,
    /// Direct second-order prediction for the quadratic coefficient.
    pub c2_second_order: f64,
}

/// Fits inverse powers of the level index to the eigenvalue residuals
/// `mu_j - d^2 (j+v)^2` and reports the model-based references.
pub fn asymptotic_probe(problem: &HillProblem, j_lo: i64, j_hi: i64) -> Result<AsymptoticProbe> {
    if j_lo < 1 || j_hi < j_lo + 3 {
        return Err(Error::Config(
            "need at least four positive levels to fit four coefficients".into(),
        ));
    }
    let data = problem.solve();
    let mut xs: Vec<[f64; 4]> = Vec::new();
    let mut ys: Vec<f64> = Vec::new();
    for j in j_lo..=j_hi {
        let (mu, _) = problem.eigenvalue_near(&data, j)?;
        let e = mu - problem.free_eigenvalue(j);
        let jf = j as f64;
        xs.push([1.0 / jf, 1.0 / (jf * jf), 1.0 / jf.powi(3), 1.0 / jf.powi(4)]);
        ys.push(e);
    }
    // Normal equations for the four-parameter least squares.
    let mut ata = nalgebra::Matrix4::<f64>::zeros();
    let mut atb = nalgebra::Vector4::<f64>::zeros();
    for (row, &y) in xs.iter().zip(&ys) {
        for p in 0..4 {
            atb[p] += row[p] * y;
            for q in 0..4 {
                ata[(p, q)] += row[p] * row[q];
            }
        }
    }
    let sol = ata
        .lu()
        .solve(&atb)
        .ok_or_else(|| Error::IllConditioned("inverse-power fit matrix".into()))?;
    let mut ss = 0.0;
    for (row, &y) in xs.iter().zip(&ys) {
        let model: f64 = (0..4).map(|p| sol[p] * row[p]).sum();
        ss += (y - model) * (y - model);
    }
    let fit_residual = (ss / ys.len() as f64).sqrt();

    let d = problem.delta_norm();
    let sq_sum: f64 = problem.harmonics().iter().map(|&(_, z)| z.norm_sqr()).sum();
    // Mean square of the profile is twice the harmonic square sum; the
    // cubic conversion divides the period integral by 16 pi d^3.
    let c3_profile = sq_sum / (4.0 * d.powi(3));
    let c2_second_order = sq_sum / (2.0 * d * d);
    Ok(AsymptoticProbe {
        fitted: [sol[0], sol[1], sol[2], sol[3]],
        fit_residual,
        c3_profile,
        c2_second_order,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use nalgebra::DVector;

    #[test]
    fn free_spectrum_matches_the_symbol() {
        let p = HillProblem::new(1.0, 0.3, 25, &[]).unwrap();
        let data = p.solve();
        let mut expect: Vec<f64> = (-25i64..=25).map(|n| p.free_eigenvalue(n)).collect();
        expect.sort_by(f64::total_cmp);
        for (got, want) in data.values.iter().zip(&expect) {
            assert!((got - want).abs() <= 1e-12 * want.abs().max(1.0));
        }
    }

    #[test]
    fn eigenpairs_satisfy_the_matrix() {
        let z = [
            (1, Complex64::new(0.21, -0.4)),
            (2, Complex64::new(-0.13, 0.05)),
        ];
        let p = HillProblem::new(1.7, 0.41, 20, &z).unwrap();
        let m = p.matrix();
        let data = p.solve();
        for col in [0usize, 7, 19] {
            let u = DVector::from_column_slice(data.vectors.column(col).as_slice());
            let lhs = &m * &u;
            let rhs = &u * Complex64::new(data.values[col], 0.0);
            assert!((lhs - rhs).norm() < 1e-10);
            assert_relative_eq!(u.norm(), 1.0, max_relative = 1e-12);
        }
        for w in data.values.windows(2) {
            assert!(w[0] <= w[1]);
        }
    }

    #[test]
    fn truncation_is_gated_by_the_top_harmonic() {
        let z = [(3, Complex64::new(0.1, 0.0))];
        assert!(matches!(
            HillProblem::new(1.0, 0.2, 15, &z),
            Err(Error::TruncationTooSmall { needed: 16, got: 15 })
        ));
        assert!(HillProblem::new(1.0, 0.2, 16, &z).is_ok());
    }

    #[test]
    fn self_convergence_of_low_eigenvalues() {
        let z = [(1, Complex64::new(0.3, 0.22)), (2, Complex64::new(0.12, -0.07))];
        let coarse = HillProblem::new(1.0, 0.37, 40, &z).unwrap().solve();
        let fine = HillProblem::new(1.0, 0.37, 80, &z).unwrap().solve();
        for k in 0..10 {
            assert!((coarse.values[k] - fine.values[k]).abs() < 1e-10);
        }
    }

    #[test]
    fn second_order_shift_tracks_small_coupling() {
        let mu = 0.01;
        let v = 0.3;
        let p = HillProblem::new(1.0, v, 40, &[(1, Complex64::new(mu, 0.0))]).unwrap();
        let data = p.solve();
        for n in 2..=5i64 {
            let (got, _) = p.eigenvalue_near(&data, n).unwrap();
            let predict = p.free_eigenvalue(n) + HillProblem::second_order_shift(1.0, v, mu, n);
            assert!(
                (got - predict).abs() < 5.0 * mu.powi(4),
                "n={n}: off by {:e}",
                (got - predict).abs()
            );
        }
    }

    #[test]
    fn density_harmonics_normalize_and_decay() {
        let p = HillProblem::new(1.0, 0.3, 30, &[]).unwrap();
        let data = p.solve();
        let (_, idx) = p.eigenvalue_near(&data, 4).unwrap();
        assert_relative_eq!(data.density_harmonic(idx, 0).re, 1.0, max_relative = 1e-12);
        assert!(data.density_harmonic(idx, 2).norm() < 1e-12);

        let mu = 0.05;
        let p = HillProblem::new(1.0, 0.3, 40, &[(1, Complex64::new(mu, 0.0))]).unwrap();
        let data = p.solve();
        let spread = |j: i64| -> f64 {
            let (_, idx) = p.eigenvalue_near(&data, j).unwrap();
            (1..=4).map(|h| data.density_harmonic(idx, h).norm()).sum()
        };
        let s5 = spread(5);
        let s10 = spread(10);
        assert!(s5 > 0.0 && s10 > 0.0);
        assert!(s10 < s5, "density spread should shrink with the level");
        let (_, idx) = p.eigenvalue_near(&data, 5).unwrap();
        assert_relative_eq!(data.density_harmonic(idx, 0).re, 1.0, max_relative = 1e-12);
        assert!(data.density_harmonic(idx, -1).norm() > 1e-4);
    }

    #[test]
    fn first_gap_of_a_cosine_line_is_twice_the_amplitude() {
        let mu = 1e-3;
        let report = band_gaps(&[(1, Complex64::new(mu, 0.0))], 4, 20).unwrap();
        assert_eq!(report.rows[0].n, 0);
        assert_relative_eq!(report.rows[0].lower, report.rows[0].upper);
        let g1 = report.rows[1].gap;
        assert!((g1 / mu - 2.0).abs() < 0.02, "gap ratio {}", g1 / mu);
    }

    #[test]
    fn pure_second_harmonic_kills_odd_gaps() {
        let report = band_gaps(&[(2, Complex64::new(0.4, 0.0))], 6, 25).unwrap();
        for row in &report.rows {
            if row.n % 2 == 1 {
                assert!(row.gap < 1e-10, "band {}: gap {:e}", row.n, row.gap);
            }
        }
        assert!(report.rows.iter().any(|r| r.n == 2 && r.gap > 1e-3));
    }

    #[test]
    fn tiny_tail_gaps_truncate_the_report() {
        let report = band_gaps(&[(1, Complex64::new(1e-4, 0.0))], 12, 30).unwrap();
        let t = report.truncated_at.expect("distant gaps fall under the floor");
        assert!(t >= 3, "truncated at {t}");
        assert!(report.rows.iter().all(|r| r.n < t));
    }

    #[test]
    fn richer_line_potential_keeps_larger_gaps() {
        let low = [(1, Complex64::new(0.05, 0.0))];
        let high = [(1, Complex64::new(0.05, 0.0)), (2, Complex64::new(0.05, 0.0))];
        let report = gap_decay_compare(&low, &high, 2, 5, 25).unwrap();
        assert_eq!(report.rows.len(), 4);
        assert!(report.dominance);
        assert!(report.slope_low < report.slope_high);
        assert!(report.slope_low < 0.0);
    }

    #[test]
    fn asymptotic_probe_recovers_the_quadratic_coefficient() {
        let mu = 0.2;
        let p = HillProblem::new(1.0, 0.3, 90, &[(1, Complex64::new(mu, 0.0))]).unwrap();
        let probe = asymptotic_probe(&p, 8, 40).unwrap();
        assert_relative_eq!(probe.c3_profile, mu * mu / 4.0, max_relative = 1e-12);
        assert_relative_eq!(probe.c2_second_order, mu * mu / 2.0, max_relative = 1e-12);
        // The residuals start at the second inverse power.
        assert!(
            (probe.fitted[1] - probe.c2_second_order).abs() < 0.3 * probe.c2_second_order,
            "fitted {:?}",
            probe.fitted
        );
        assert!(probe.fitted[0].abs() < 0.05 * probe.c2_second_order.abs() * 10.0);
        assert!(probe.fit_residual < 1e-6);
    }
}
