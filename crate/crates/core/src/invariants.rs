//! The invariant set of a potential: the quadratic line invariants and two
//! families of cubic plane invariants, computed by three independent routes
//! (closed coefficient products, lattice mode sums, and dense-grid
//! quadrature), plus seeded perturbation of a stored set.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::lattice::{
    coeff_add, coeff_scale, coeff_sub, orthogonal_decompose, plane_modes, GammaVector, ModeSet,
    Vec3,
};
use crate::potential::PotentialCoefficients;

/// Ordered generator index pairs used by the pair-indexed entries.
pub const PAIRS: [(usize, usize); 6] = [(1, 2), (1, 3), (2, 1), (2, 3), (3, 1), (3, 2)];

/// Grid resolution used by the quadrature route in the acceptance suite.
pub const QUADRATURE_DEFAULT_GRID: usize = 48;

/// Number of stored invariant entries.
pub const ENTRY_COUNT: usize = 40;

/// The stored invariant entries of one potential.
///
/// Pair-indexed arrays follow [`PAIRS`]; the `sum` and `diff` families are
/// symmetric in the pair (both orders denote the same integral and are kept
/// for uniform serialization), while the second cubic family is genuinely
/// order-dependent.
#[derive(Debug, Clone, PartialEq)]
pub struct InvariantSet {
    /// Line invariants `I(g_k)`, `k = 1..=13`.
    pub i: [f64; 13],
    /// First cubic family on the plane of `(g_i + g_j, g_i)`.
    pub i1_sum: [f64; 6],
    /// First cubic family on the plane of `(g_i - g_j, g_i)`.
    pub i1_diff: [f64; 6],
    /// First cubic family on the plane of `(gsum, g_i)`, `i = 1..=3`.
    pub i1_gamma: [f64; 3],
    /// First cubic family on the plane of `(2 g_i - gsum, g_i)`.
    pub i1_refl: [f64; 3],
    /// Second cubic family for the ordered pair `(g_i, g_j)`.
    pub i2_pair: [f64; 6],
    /// Second cubic family for `(g_i, gsum - g_i)`.
    pub i2_gamma: [f64; 3],
}

impl InvariantSet {
    pub fn zeroed() -> Self {
        InvariantSet {
            i: [0.0; 13],
            i1_sum: [0.0; 6],
            i1_diff: [0.0; 6],
            i1_gamma: [0.0; 3],
            i1_refl: [0.0; 3],
            i2_pair: [0.0; 6],
            i2_gamma: [0.0; 3],
        }
    }

    /// Entries flattened in canonical order: `i`, `i1_sum`, `i1_diff`,
    /// `i1_gamma`, `i1_refl`, `i2_pair`, `i2_gamma`.
    pub fn to_flat(&self) -> [f64; ENTRY_COUNT] {
        let mut out = [0.0; ENTRY_COUNT];
        let mut at = 0;
        for src in [
            &self.i[..],
            &self.i1_sum[..],
            &self.i1_diff[..],
            &self.i1_gamma[..],
            &self.i1_refl[..],
            &self.i2_pair[..],
            &self.i2_gamma[..],
        ] {
            out[at..at + src.len()].copy_from_slice(src);
            at += src.len();
        }
        out
    }

    /// Inverse of [`InvariantSet::to_flat`].
    pub fn from_flat(flat: &[f64; ENTRY_COUNT]) -> Self {
        let mut s = InvariantSet::zeroed();
        let mut at = 0;
        for dst in [
            &mut s.i[..],
            &mut s.i1_sum[..],
            &mut s.i1_diff[..],
            &mut s.i1_gamma[..],
            &mut s.i1_refl[..],
            &mut s.i2_pair[..],
            &mut s.i2_gamma[..],
        ] {
            let n = dst.len();
            dst.copy_from_slice(&flat[at..at + n]);
            at += n;
        }
        s
    }

    /// Pair-indexed entry accessors, 1-based generator indices.
    pub fn i1_sum_at(&self, i: usize, j: usize) -> f64 {
        self.i1_sum[pair_slot(i, j)]
    }

    pub fn i1_diff_at(&self, i: usize, j: usize) -> f64 {
        self.i1_diff[pair_slot(i, j)]
    }

    pub fn i2_pair_at(&self, i: usize, j: usize) -> f64 {
        self.i2_pair[pair_slot(i, j)]
    }
}

fn pair_slot(i: usize, j: usize) -> usize {
    PAIRS
        .iter()
        .position(|&p| p == (i, j))
        .expect("generator indices must be distinct and within 1..=3")
}

/// Largest entrywise difference between two sets, relative to
/// `max(1, |x|, |y|)` per entry.
pub fn max_rel_diff(a: &InvariantSet, b: &InvariantSet) -> f64 {
    let fa = a.to_flat();
    let fb = b.to_flat();
    fa.iter()
        .zip(&fb)
        .map(|(&x, &y)| (x - y).abs() / x.abs().max(y.abs()).max(1.0))
        .fold(0.0, f64::max)
}

/// First cubic closed-form constant for the plane of `(a, b)`:
/// `2 (<b,beta>^-2 + <a-b,beta>^-2) <a-b, b>`.
pub fn coeff_a1(q_modes: &ModeSet, a: &GammaVector, b: &GammaVector) -> Result<f64> {
    let d = orthogonal_decompose(q_modes.basis().lattice(), a, b)?;
    let bb = b.cart().dot(&d.beta);
    let ab = (a.cart() - b.cart()).dot(&d.beta);
    let inner = (a.cart() - b.cart()).dot(b.cart());
    Ok(2.0 * (bb.powi(-2) + ab.powi(-2)) * inner)
}

/// Second cubic closed-form constant for the ordered pair `(a, b)`:
/// `2 <a-b, a+b> <b,beta>^-2`.
pub fn coeff_a2(q_modes: &ModeSet, a: &GammaVector, b: &GammaVector) -> Result<f64> {
    let d = orthogonal_decompose(q_modes.basis().lattice(), a, b)?;
    let bb = b.cart().dot(&d.beta);
    Ok(2.0 * (a.cart() - b.cart()).dot(&(a.cart() + b.cart())) / (bb * bb))
}

/// First cubic invariant on the plane of `(a, b)`, evaluated as a lattice
/// mode sum. `a` must belong to the frequency set for a nonzero result.
pub fn invariant_i1_sum(
    q: &PotentialCoefficients,
    a: &GammaVector,
    b: &GammaVector,
) -> Result<f64> {
    let modes = q.modes();
    let d = orthogonal_decompose(modes.basis().lattice(), a, b)?;
    let cs = plane_modes(modes, a, b)?;
    let mut acc = Complex64::new(0.0, 0.0);
    for c in &cs {
        let zc = q.z_at(c.coeffs());
        let zac = q.z_at(coeff_sub(a.coeffs(), c.coeffs()));
        let prod = zc * zac;
        if prod == Complex64::new(0.0, 0.0) {
            continue;
        }
        let w = c.cart().dot(&(c.cart() - a.cart())) / c.cart().dot(&d.beta).powi(2);
        acc += prod * w;
    }
    let za_conj = q.z_at(coeff_scale(a.coeffs(), -1));
    Ok(2.0 * (za_conj * acc).re)
}

/// Second cubic invariant for the ordered pair `(a, b)`, evaluated as a
/// lattice mode sum.
pub fn invariant_i2_sum(
    q: &PotentialCoefficients,
    a: &GammaVector,
    b: &GammaVector,
) -> Result<f64> {
    let modes = q.modes();
    let d = orthogonal_decompose(modes.basis().lattice(), a, b)?;
    let cs = plane_modes(modes, a, b)?;
    let mut acc = Complex64::new(0.0, 0.0);
    for c in &cs {
        let zp = q.z_at(coeff_add(a.coeffs(), c.coeffs()));
        let zm = q.z_at(coeff_sub(a.coeffs(), c.coeffs()));
        let prod = zp * zm;
        if prod == Complex64::new(0.0, 0.0) {
            continue;
        }
        let w = (a.cart() + c.cart()).dot(&(a.cart() - c.cart())) / c.cart().dot(&d.beta).powi(2);
        acc += prod * w;
    }
    let za_conj = q.z_at(coeff_scale(a.coeffs(), -1));
    Ok(-2.0 * (za_conj * za_conj * acc).re)
}

/// Closed-form value of the first cubic invariant: the mode sum collapses
/// to a single coefficient product scaled by the plane constant.
fn closed_i1(q: &PotentialCoefficients, a: &GammaVector, b: &GammaVector) -> Result<f64> {
    let k1 = -coeff_a1(q.modes(), a, b)?;
    let z_na = q.z_at(coeff_scale(a.coeffs(), -1));
    let z_ab = q.z_at(coeff_sub(a.coeffs(), b.coeffs()));
    let z_b = q.z_at(b.coeffs());
    Ok(k1 * (z_na * z_ab * z_b).re)
}

/// Closed-form value of the second cubic invariant.
fn closed_i2(q: &PotentialCoefficients, a: &GammaVector, b: &GammaVector) -> Result<f64> {
    let k2 = -2.0 * coeff_a2(q.modes(), a, b)?;
    let z_na = q.z_at(coeff_scale(a.coeffs(), -1));
    let z_sum = q.z_at(coeff_add(a.coeffs(), b.coeffs()));
    let z_diff = q.z_at(coeff_sub(a.coeffs(), b.coeffs()));
    Ok(k2 * (z_na * z_na * z_sum * z_diff).re)
}

/// Plane arguments `(a, b)` of every stored entry, in storage order.
pub(crate) struct EntryArgs {
    pub(crate) i1_sum: Vec<(GammaVector, GammaVector)>,
    pub(crate) i1_diff: Vec<(GammaVector, GammaVector)>,
    pub(crate) i1_gamma: Vec<(GammaVector, GammaVector)>,
    pub(crate) i1_refl: Vec<(GammaVector, GammaVector)>,
    pub(crate) i2_pair: Vec<(GammaVector, GammaVector)>,
    pub(crate) i2_gamma: Vec<(GammaVector, GammaVector)>,
}

pub(crate) fn entry_args(modes: &ModeSet) -> EntryArgs {
    let rep = |k: usize| modes.rep(k).clone();
    let gsum = rep(7);
    let mut args = EntryArgs {
        i1_sum: Vec::with_capacity(6),
        i1_diff: Vec::with_capacity(6),
        i1_gamma: Vec::with_capacity(3),
        i1_refl: Vec::with_capacity(3),
        i2_pair: Vec::with_capacity(6),
        i2_gamma: Vec::with_capacity(3),
    };
    for &(i, j) in &PAIRS {
        let sum = modes.vector(coeff_add(modes.rep(i).coeffs(), modes.rep(j).coeffs()));
        let diff = modes.vector(coeff_sub(modes.rep(i).coeffs(), modes.rep(j).coeffs()));
        args.i1_sum.push((sum, rep(i)));
        args.i1_diff.push((diff, rep(i)));
        args.i2_pair.push((rep(i), rep(j)));
    }
    for i in 1..=3 {
        let refl = modes.vector(coeff_sub(
            coeff_scale(modes.rep(i).coeffs(), 2),
            gsum.coeffs(),
        ));
        let tail = modes.vector(coeff_sub(gsum.coeffs(), modes.rep(i).coeffs()));
        args.i1_gamma.push((gsum.clone(), rep(i)));
        args.i1_refl.push((refl, rep(i)));
        args.i2_gamma.push((rep(i), tail));
    }
    args
}

/// Computes every stored entry from closed coefficient products.
pub fn closed_forms(q: &PotentialCoefficients) -> Result<InvariantSet> {
    let args = entry_args(q.modes());
    let mut s = InvariantSet::zeroed();
    for k in 1..=13 {
        s.i[k - 1] = 2.0 * q.z(k).norm_sqr();
    }
    for e in 0..6 {
        s.i1_sum[e] = closed_i1(q, &args.i1_sum[e].0, &args.i1_sum[e].1)?;
        s.i1_diff[e] = closed_i1(q, &args.i1_diff[e].0, &args.i1_diff[e].1)?;
        s.i2_pair[e] = closed_i2(q, &args.i2_pair[e].0, &args.i2_pair[e].1)?;
    }
    for e in 0..3 {
        s.i1_gamma[e] = closed_i1(q, &args.i1_gamma[e].0, &args.i1_gamma[e].1)?;
        s.i1_refl[e] = closed_i1(q, &args.i1_refl[e].0, &args.i1_refl[e].1)?;
        s.i2_gamma[e] = closed_i2(q, &args.i2_gamma[e].0, &args.i2_gamma[e].1)?;
    }
    Ok(s)
}

/// Computes every stored entry as a lattice mode sum over plane frequencies.
pub fn sum_route(q: &PotentialCoefficients) -> Result<InvariantSet> {
    let args = entry_args(q.modes());
    let mut s = InvariantSet::zeroed();
    for k in 1..=13 {
        // The line mean square has one term per signed coefficient.
        s.i[k - 1] = q.z(k).norm_sqr() + q.z(k).conj().norm_sqr();
    }
    for e in 0..6 {
        s.i1_sum[e] = invariant_i1_sum(q, &args.i1_sum[e].0, &args.i1_sum[e].1)?;
        s.i1_diff[e] = invariant_i1_sum(q, &args.i1_diff[e].0, &args.i1_diff[e].1)?;
        s.i2_pair[e] = invariant_i2_sum(q, &args.i2_pair[e].0, &args.i2_pair[e].1)?;
    }
    for e in 0..3 {
        s.i1_gamma[e] = invariant_i1_sum(q, &args.i1_gamma[e].0, &args.i1_gamma[e].1)?;
        s.i1_refl[e] = invariant_i1_sum(q, &args.i1_refl[e].0, &args.i1_refl[e].1)?;
        s.i2_gamma[e] = invariant_i2_sum(q, &args.i2_gamma[e].0, &args.i2_gamma[e].1)?;
    }
    Ok(s)
}

/// One distinct plane integral evaluated by the quadrature route.
struct PlaneDescriptor {
    /// 0-based representative index supplying the line weight.
    a_rep: usize,
    /// 0-based representative indices of the plane lines off the axis.
    line_reps: Vec<usize>,
    /// Packed quadratic-form coefficients over the line amplitudes
    /// (upper triangle, off-diagonal entries doubled).
    gram: Vec<f64>,
}

fn plane_descriptor(
    modes: &ModeSet,
    a: &GammaVector,
    b: &GammaVector,
) -> Result<PlaneDescriptor> {
    let d = orthogonal_decompose(modes.basis().lattice(), a, b)?;
    let cs = plane_modes(modes, a, b)?;
    let mut line_reps = Vec::new();
    let mut dirs: Vec<Vec3> = Vec::new();
    for c in &cs {
        if let Some((k, 1)) = modes.lookup(c.coeffs()) {
            line_reps.push(k - 1);
            dirs.push(c.cart() / c.cart().dot(&d.beta));
        }
    }
    let (a_rep, _) = modes
        .lookup(a.coeffs())
        .ok_or_else(|| Error::Config("plane axis outside the frequency set".into()))?;
    let mut gram = Vec::new();
    for p in 0..dirs.len() {
        for qq in p..dirs.len() {
            let g = dirs[p].dot(&dirs[qq]);
            gram.push(if p == qq { g } else { 2.0 * g });
        }
    }
    Ok(PlaneDescriptor { a_rep: a_rep - 1, line_reps, gram })
}

impl PlaneDescriptor {
    /// Squared norm of the plane field given all line amplitudes.
    #[inline]
    fn quad_form(&self, t: &[f64; 13]) -> f64 {
        let mut f = 0.0;
        let mut at = 0;
        for p in 0..self.line_reps.len() {
            let tp = t[self.line_reps[p]];
            for qq in p..self.line_reps.len() {
                f += self.gram[at] * tp * t[self.line_reps[qq]];
                at += 1;
            }
        }
        f
    }
}

/// Computes every stored entry by averaging the defining integrands over a
/// uniform grid on the periodicity cell.
///
/// The integrands are trigonometric polynomials with coefficient sums
/// bounded by three per axis, so any `grid >= 8` integrates them exactly up
/// to rounding.
pub fn quadrature_route(q: &PotentialCoefficients, grid: usize) -> Result<InvariantSet> {
    if grid < 8 {
        return Err(Error::Config(
            "quadrature grid must be at least 8 to resolve cubic frequency sums".into(),
        ));
    }
    let modes = q.modes();
    let args = entry_args(modes);

    // Distinct integrals: symmetric pair families collapse to the i < j
    // representative.
    let low_pairs = [(1usize, 2usize), (1, 3), (2, 3)];
    let mut d1: Vec<PlaneDescriptor> = Vec::with_capacity(12);
    for &(i, j) in &low_pairs {
        let slot = pair_slot(i, j);
        d1.push(plane_descriptor(modes, &args.i1_sum[slot].0, &args.i1_sum[slot].1)?);
    }
    for &(i, j) in &low_pairs {
        let slot = pair_slot(i, j);
        d1.push(plane_descriptor(modes, &args.i1_diff[slot].0, &args.i1_diff[slot].1)?);
    }
    for e in 0..3 {
        d1.push(plane_descriptor(modes, &args.i1_gamma[e].0, &args.i1_gamma[e].1)?);
    }
    for e in 0..3 {
        d1.push(plane_descriptor(modes, &args.i1_refl[e].0, &args.i1_refl[e].1)?);
    }
    let mut d2: Vec<PlaneDescriptor> = Vec::with_capacity(9);
    for e in 0..6 {
        d2.push(plane_descriptor(modes, &args.i2_pair[e].0, &args.i2_pair[e].1)?);
    }
    for e in 0..3 {
        d2.push(plane_descriptor(modes, &args.i2_gamma[e].0, &args.i2_gamma[e].1)?);
    }

    // Roots of unity and per-axis phase steps (congruence classes mod grid).
    let g = grid;
    let w: Vec<Complex64> = (0..g)
        .map(|t| Complex64::from_polar(1.0, std::f64::consts::TAU * t as f64 / g as f64))
        .collect();
    let mut steps = [[0usize; 3]; 13];
    for k in 0..13 {
        let c = modes.rep(k + 1).coeffs();
        for ax in 0..3 {
            steps[k][ax] = (c[ax].rem_euclid(g as i64)) as usize;
        }
    }
    let z: Vec<Complex64> = (1..=13).map(|k| q.z(k)).collect();
    let z2: Vec<Complex64> = (1..=3).map(|k| q.z(k) * q.z(k)).collect();

    let mut acc_i = [0.0f64; 13];
    let mut acc1 = vec![0.0f64; d1.len()];
    let mut acc2 = vec![0.0f64; d2.len()];

    for i in 0..g {
        for j in 0..g {
            let mut idx = [0usize; 13];
            for k in 0..13 {
                idx[k] = (steps[k][0] * i + steps[k][1] * j) % g;
            }
            for _ in 0..g {
                let mut t = [0.0f64; 13];
                for k in 0..13 {
                    let e = w[idx[k]];
                    t[k] = 2.0 * (z[k].re * e.re - z[k].im * e.im);
                }
                let mut dd = [0.0f64; 3];
                for k in 0..3 {
                    let e = w[(2 * idx[k]) % g];
                    dd[k] = 2.0 * (z2[k].re * e.re - z2[k].im * e.im);
                }
                for k in 0..13 {
                    acc_i[k] += t[k] * t[k];
                }
                for (slot, d) in d1.iter().enumerate() {
                    acc1[slot] += d.quad_form(&t) * t[d.a_rep];
                }
                for (slot, d) in d2.iter().enumerate() {
                    acc2[slot] += d.quad_form(&t) * dd[d.a_rep];
                }
                for k in 0..13 {
                    idx[k] += steps[k][2];
                    if idx[k] >= g {
                        idx[k] -= g;
                    }
                }
            }
        }
    }

    let vol = (g * g * g) as f64;
    let mut s = InvariantSet::zeroed();
    for k in 0..13 {
        s.i[k] = acc_i[k] / vol;
    }
    let fill_pair = |dst: &mut [f64; 6], src: &[f64]| {
        for (slot, &(i, j)) in PAIRS.iter().enumerate() {
            let low = low_pairs
                .iter()
                .position(|&(a, b)| (a, b) == (i.min(j), i.max(j)))
                .expect("pair families cover all ordered pairs");
            dst[slot] = src[low] / vol;
        }
    };
    fill_pair(&mut s.i1_sum, &acc1[0..3]);
    fill_pair(&mut s.i1_diff, &acc1[3..6]);
    for e in 0..3 {
        s.i1_gamma[e] = acc1[6 + e] / vol;
        s.i1_refl[e] = acc1[9 + e] / vol;
    }
    for e in 0..6 {
        s.i2_pair[e] = acc2[e] / vol;
    }
    for e in 0..3 {
        s.i2_gamma[e] = acc2[6 + e] / vol;
    }
    Ok(s)
}

/// Adds seeded uniform noise `eps * u * max(1, |v|)` to every entry in
/// canonical order, `u ~ U[-1, 1]`.
pub fn perturb_invariants(set: &InvariantSet, eps: f64, seed: u64) -> InvariantSet {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut flat = set.to_flat();
    for v in flat.iter_mut() {
        let u: f64 = rng.gen_range(-1.0..1.0);
        *v += eps * u * v.abs().max(1.0);
    }
    InvariantSet::from_flat(&flat)
}
