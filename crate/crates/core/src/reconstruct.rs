//! Recovery of potential coefficients from a stored invariant set, gauge
//! canonicalization of coefficient sets, and the perturbation trial
//! harness.
//!
//! The recovered potential is normalized so the three generator
//! coefficients are real and positive and the top corner coefficient has
//! positive imaginary part; the input is determined only up to translation
//! and inversion, so comparisons go through the same normal form.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::invariants::{
    closed_forms, coeff_a1, coeff_a2, entry_args, perturb_invariants, InvariantSet,
};
use crate::lattice::{AdmissibleBasis, ModeSet, Vec3};
use crate::potential::{phase_zeroed, PotentialCoefficients};

/// Residual threshold (relative to the data scale) below which a sign
/// candidate counts as strictly consistent.
pub const STRICT_RESIDUAL_REL_TOL: f64 = 1e-9;
/// A second-best candidate within this factor of the best residual makes
/// the sign choice ambiguous.
pub const SIGN_TIE_FACTOR: f64 = 1.1;
/// Relative floor under which a solve determinant counts as degenerate.
pub const DET_REL_FLOOR: f64 = 1e-9;
/// Slack for squared moduli that dip below zero through rounding.
pub const MODULUS_SLACK: f64 = 1e-9;
/// Relative floor for the inversion decision in gauge fixing.
pub const GAUGE_IM_REL_TOL: f64 = 1e-12;

/// Outcome of a reconstruction.
#[derive(Debug, Clone)]
pub struct ReconstructionResult {
    /// Recovered coefficients in normal form.
    pub q: PotentialCoefficients,
    /// Chosen imaginary-sign pattern for the three mixed coefficients.
    pub sign_triple: [i8; 3],
    /// Number of sign candidates that were strictly consistent.
    pub survivors: usize,
    /// Absolute equation residuals: three top-coefficient equations, twelve
    /// two-by-two system residuals, then seven modulus consistency gaps
    /// between recovered corner coefficients and the line invariants.
    pub residuals: Vec<f64>,
    /// Smallest absolute determinant met across the linear solves.
    pub condition_floor: f64,
}

struct SignCandidate {
    t: [f64; 3],
    a7: f64,
    b7: f64,
    residual: f64,
    min_den: f64,
    feasible: bool,
}

/// Reconstructs coefficients over `basis` from the invariant set.
pub fn reconstruct(basis: &AdmissibleBasis, inv: &InvariantSet) -> Result<ReconstructionResult> {
    let modes = ModeSet::new(basis.clone());
    let args = entry_args(&modes);

    // Line moduli.
    let mut r = [0.0f64; 13];
    for k in 0..13 {
        if inv.i[k] < -MODULUS_SLACK {
            return Err(Error::BadModulus { context: "line invariant", value: inv.i[k] });
        }
        r[k] = (inv.i[k].max(0.0) / 2.0).sqrt();
    }

    let mut condition_floor = f64::INFINITY;
    let mut track = |d: f64| {
        condition_floor = condition_floor.min(d.abs());
    };

    // Normalized pair-plane entries give the real parts of the three mixed
    // coefficients; the line moduli bound their imaginary parts.
    let pair_of = |m: usize| match m {
        4 => (2usize, 3usize),
        5 => (1, 3),
        _ => (1, 2),
    };
    let slot_of = |i: usize, j: usize| {
        crate::invariants::PAIRS
            .iter()
            .position(|&p| p == (i, j))
            .expect("ordered pair")
    };
    let mut a = [0.0f64; 3]; // a_4, a_5, a_6
    let mut babs = [0.0f64; 3];
    for m in 4..=6 {
        let (i, j) = pair_of(m);
        let slot = slot_of(i, j);
        let (pa, pb) = &args.i1_sum[slot];
        let k1 = -coeff_a1(&modes, pa, pb)?;
        let rr = r[i - 1] * r[j - 1];
        if rr <= DET_REL_FLOOR {
            return Err(Error::NonGeneric(format!(
                "vanishing generator moduli block the pair-plane entry for index {m}"
            )));
        }
        let am = inv.i1_sum[slot] / (k1 * rr);
        let disc = r[m - 1] * r[m - 1] - am * am;
        if disc < -MODULUS_SLACK {
            return Err(Error::BadModulus { context: "mixed coefficient modulus", value: disc });
        }
        a[m - 4] = am;
        babs[m - 4] = disc.max(0.0).sqrt();
    }

    let mut c = [0.0f64; 3];
    for i in 1..=3 {
        let (pa, pb) = &args.i1_gamma[i - 1];
        let k1 = -coeff_a1(&modes, pa, pb)?;
        if r[i - 1] <= DET_REL_FLOOR {
            return Err(Error::NonGeneric(format!(
                "vanishing generator modulus blocks the corner entry for index {i}"
            )));
        }
        c[i - 1] = inv.i1_gamma[i - 1] / (k1 * r[i - 1]);
    }

    // Resolve the imaginary signs of the mixed coefficients against the
    // three top-coefficient equations.
    let cscale = 1.0 + c[0].abs() + c[1].abs() + c[2].abs();
    let mut candidates: Vec<SignCandidate> = Vec::with_capacity(8);
    for bits in 0..8u32 {
        let t = [
            if bits & 1 == 0 { 1.0 } else { -1.0 },
            if bits & 2 == 0 { 1.0 } else { -1.0 },
            if bits & 4 == 0 { 1.0 } else { -1.0 },
        ];
        let tb = [t[0] * babs[0], t[1] * babs[1], t[2] * babs[2]];

        // Pairwise eliminations must agree on a positive top imaginary
        // part; their denominators also feed the degeneracy floor.
        let mut feasible = true;
        let mut min_den = f64::INFINITY;
        for (p, qd) in [(0usize, 1usize), (0, 2), (1, 2)] {
            let den = tb[qd] * a[p] - tb[p] * a[qd];
            let den_scale = (babs[qd] * a[p]).abs() + (babs[p] * a[qd]).abs();
            if den.abs() <= DET_REL_FLOOR * den_scale {
                return Err(Error::NonGeneric(format!(
                    "mixed coefficients {} and {} are phase-proportional",
                    p + 4,
                    qd + 4
                )));
            }
            min_den = min_den.min(den.abs());
            let num = a[p] * c[qd] - a[qd] * c[p];
            if num / den <= 0.0 {
                feasible = false;
            }
        }

        // Least-squares top coefficient over the three equations.
        let s11: f64 = a.iter().map(|x| x * x).sum();
        let s12: f64 = a.iter().zip(&tb).map(|(x, y)| x * y).sum();
        let s22: f64 = tb.iter().map(|y| y * y).sum();
        let e1: f64 = a.iter().zip(&c).map(|(x, v)| x * v).sum();
        let e2: f64 = tb.iter().zip(&c).map(|(y, v)| y * v).sum();
        let det = s11 * s22 - s12 * s12;
        if det.abs() <= DET_REL_FLOOR * s11 * s22 {
            return Err(Error::NonGeneric(
                "top-coefficient equations are degenerate across sign choices".into(),
            ));
        }
        let a7 = (e1 * s22 - e2 * s12) / det;
        let b7 = (e2 * s11 - e1 * s12) / det;
        if b7 <= 0.0 {
            feasible = false;
        }
        let residual = (0..3)
            .map(|p| {
                let e = a[p] * a7 + tb[p] * b7 - c[p];
                e * e
            })
            .sum::<f64>()
            .sqrt();
        candidates.push(SignCandidate { t, a7, b7, residual, min_den, feasible });
    }

    let mut feasible: Vec<&SignCandidate> = candidates.iter().filter(|x| x.feasible).collect();
    if feasible.is_empty() {
        return Err(Error::AmbiguousSigns { survivors: 0 });
    }
    feasible.sort_by(|x, y| x.residual.total_cmp(&y.residual));
    let survivors = feasible
        .iter()
        .filter(|x| x.residual <= STRICT_RESIDUAL_REL_TOL * cscale)
        .count();
    if survivors >= 2 {
        return Err(Error::AmbiguousSigns { survivors });
    }
    if feasible.len() >= 2 && feasible[1].residual < SIGN_TIE_FACTOR * feasible[0].residual {
        return Err(Error::AmbiguousSigns { survivors: 2 });
    }
    let best = feasible[0];
    track(best.min_den);
    let z7 = Complex64::new(best.a7, best.b7);
    let r7_est = z7.norm();

    let mut residuals: Vec<f64> = (0..3)
        .map(|p| (a[p] * best.a7 + best.t[p] * babs[p] * best.b7 - c[p]).abs())
        .collect();

    let zmix: [Complex64; 3] = [
        Complex64::new(a[0], best.t[0] * babs[0]),
        Complex64::new(a[1], best.t[1] * babs[1]),
        Complex64::new(a[2], best.t[2] * babs[2]),
    ];

    // Difference coefficients from the ordered second-family pairs.
    let mut z_diff = [Complex64::new(0.0, 0.0); 3]; // g1-g2, g1-g3, g2-g3
    for (slot_d, (i, j, m)) in [(0usize, (1usize, 2usize, 6usize)), (1, (1, 3, 5)), (2, (2, 3, 4))]
        .into_iter()
    {
        let fwd = slot_of(i, j);
        let rev = slot_of(j, i);
        let (fa, fb) = &args.i2_pair[fwd];
        let (ra, rb) = &args.i2_pair[rev];
        let k2f = -2.0 * coeff_a2(&modes, fa, fb)?;
        let k2r = -2.0 * coeff_a2(&modes, ra, rb)?;
        let ri2 = r[i - 1] * r[i - 1];
        let rj2 = r[j - 1] * r[j - 1];
        if ri2 <= DET_REL_FLOOR || rj2 <= DET_REL_FLOOR {
            return Err(Error::NonGeneric(
                "vanishing generator moduli block the ordered pair entries".into(),
            ));
        }
        let c4 = inv.i2_pair[fwd] / (k2f * ri2);
        let c5 = inv.i2_pair[rev] / (k2r * rj2);
        let zm = zmix[m - 4];
        let det = 2.0 * zm.re * zm.im;
        let rm = r[m - 1];
        if det.abs() <= DET_REL_FLOOR * rm * rm {
            return Err(Error::NonGeneric(format!(
                "mixed coefficient {m} has a vanishing real or imaginary part"
            )));
        }
        track(det);
        let x = (c4 + c5) / (2.0 * zm.re);
        let y = (c5 - c4) / (2.0 * zm.im);
        z_diff[slot_d] = Complex64::new(x, y);
        residuals.push((zm.re * x - zm.im * y - c4).abs());
        residuals.push((zm.re * x + zm.im * y - c5).abs());
    }

    // Reflected corner coefficients from the reflected plane and the
    // ordered corner entries.
    let mut z_refl = [Complex64::new(0.0, 0.0); 3]; // indices 11, 12, 13
    for i in 1..=3usize {
        let m = 3 + i;
        let (pa, pb) = &args.i1_refl[i - 1];
        let k1 = -coeff_a1(&modes, pa, pb)?;
        let (qa, qb) = &args.i2_gamma[i - 1];
        let k2 = -2.0 * coeff_a2(&modes, qa, qb)?;
        let ri = r[i - 1];
        let c8 = inv.i1_refl[i - 1] / (k1 * ri);
        let c9 = inv.i2_gamma[i - 1] / (k2 * ri * ri);
        let zm = zmix[m - 4];
        let det = zm.re * z7.im - zm.im * z7.re;
        if det.abs() <= DET_REL_FLOOR * r[m - 1] * r7_est {
            return Err(Error::NonGeneric(format!(
                "mixed coefficient {m} is phase-proportional to the top coefficient"
            )));
        }
        track(det);
        let x = (c8 * z7.im - zm.im * c9) / det;
        let y = (zm.re * c9 - z7.re * c8) / det;
        z_refl[i - 1] = Complex64::new(x, y);
        residuals.push((zm.re * x + zm.im * y - c8).abs());
        residuals.push((z7.re * x + z7.im * y - c9).abs());
    }

    let z = [
        Complex64::new(r[0], 0.0),
        Complex64::new(r[1], 0.0),
        Complex64::new(r[2], 0.0),
        zmix[0],
        zmix[1],
        zmix[2],
        z7,
        z_diff[0],
        z_diff[1],
        z_diff[2],
        z_refl[0],
        z_refl[1],
        z_refl[2],
    ];
    // Modulus consistency of the corner coefficients against the unused
    // line invariants.
    for k in 7..=13 {
        residuals.push((z[k - 1].norm() - r[k - 1]).abs());
    }

    let q = PotentialCoefficients::new(modes, z);
    let sign_triple = [best.t[0] as i8, best.t[1] as i8, best.t[2] as i8];
    Ok(ReconstructionResult { q, sign_triple, survivors, residuals, condition_floor })
}

/// A coefficient set in normal form together with the gauge move that
/// produced it.
#[derive(Debug, Clone)]
pub struct GaugeResult {
    pub q: PotentialCoefficients,
    pub tau: Vec3,
    pub inverted: bool,
}

/// Canonicalizes the gauge: translates the generator phases to zero, then
/// inverts if the top corner coefficient has negative imaginary part.
pub fn gauge_fix(q: &PotentialCoefficients) -> Result<GaugeResult> {
    for k in 1..=3 {
        if q.z(k).norm() < 1e-300 {
            return Err(Error::NonGeneric(format!(
                "generator coefficient {k} vanishes; phases cannot be normalized"
            )));
        }
    }
    let basis = q.basis();
    let mut tau = Vec3::zeros();
    for k in 1..=3 {
        tau += basis.omega(k) * (q.z(k).arg() / std::f64::consts::TAU);
    }
    let shifted = phase_zeroed(q);
    let z7 = shifted.z(7);
    if z7.im.abs() <= GAUGE_IM_REL_TOL * z7.norm() {
        return Err(Error::NonGeneric(
            "top corner coefficient is reflection-symmetric; inversion is undetermined".into(),
        ));
    }
    let inverted = z7.im < 0.0;
    let canon = if inverted { shifted.invert() } else { shifted };
    Ok(GaugeResult { q: canon, tau, inverted })
}

/// Largest coefficient distance between the normal forms of two potentials.
pub fn compare_mod_gauge(
    q1: &PotentialCoefficients,
    q2: &PotentialCoefficients,
) -> Result<f64> {
    let f1 = gauge_fix(q1)?;
    let f2 = gauge_fix(q2)?;
    let mut worst = 0.0f64;
    for k in 1..=13 {
        worst = worst.max((f1.q.z(k) - f2.q.z(k)).norm());
    }
    Ok(worst)
}

/// One perturbation trial: computes the invariants of `q`, adds seeded
/// relative noise of size `eps`, reconstructs, and returns the coefficient
/// distance modulo gauge.
pub fn stability_trial(q: &PotentialCoefficients, eps: f64, seed: u64) -> Result<f64> {
    let inv = closed_forms(q)?;
    let noisy = perturb_invariants(&inv, eps, seed);
    let rec = reconstruct(q.basis(), &noisy)?;
    compare_mod_gauge(q, &rec.q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::standard_basis;
    use crate::potential::{check_genericity, random_generic};
    use approx::assert_relative_eq;

    #[test]
    fn exact_invariants_round_trip() {
        let basis = standard_basis();
        for seed in 0..20u64 {
            let q = random_generic(&basis, seed).unwrap();
            let inv = closed_forms(&q).unwrap();
            let rec = reconstruct(&basis, &inv).unwrap();
            assert_eq!(rec.survivors, 1, "seed {seed}");
            let dist = compare_mod_gauge(&q, &rec.q).unwrap();
            assert!(dist < 1e-10, "seed {seed}: distance {dist:e}");
            let worst = rec.residuals.iter().cloned().fold(0.0, f64::max);
            assert!(worst < 1e-9, "seed {seed}: residual {worst:e}");
            assert!(rec.condition_floor > 1e-6, "seed {seed}");
            assert!(check_genericity(&rec.q).ok, "seed {seed}");
        }
    }

    #[test]
    fn reconstruction_is_deterministic() {
        let basis = standard_basis();
        let q = random_generic(&basis, 5).unwrap();
        let inv = closed_forms(&q).unwrap();
        let r1 = reconstruct(&basis, &inv).unwrap();
        let r2 = reconstruct(&basis, &inv).unwrap();
        assert_eq!(r1.q.z_all(), r2.q.z_all());
        assert_eq!(r1.sign_triple, r2.sign_triple);
    }

    #[test]
    fn recovered_signs_match_the_normal_form() {
        let basis = standard_basis();
        for seed in [3u64, 11, 29] {
            let q = random_generic(&basis, seed).unwrap();
            let canon = gauge_fix(&q).unwrap().q;
            let rec = reconstruct(&basis, &closed_forms(&q).unwrap()).unwrap();
            for (slot, m) in (4..=6).enumerate() {
                assert_eq!(
                    rec.sign_triple[slot] as f64,
                    canon.z(m).im.signum(),
                    "seed {seed}, coefficient {m}"
                );
            }
        }
    }

    #[test]
    fn negative_line_invariant_is_rejected() {
        let basis = standard_basis();
        let q = random_generic(&basis, 1).unwrap();
        let mut inv = closed_forms(&q).unwrap();
        inv.i[2] = -1.0;
        assert!(matches!(
            reconstruct(&basis, &inv),
            Err(Error::BadModulus { context: "line invariant", .. })
        ));
    }

    #[test]
    fn oversized_pair_entry_is_rejected() {
        let basis = standard_basis();
        let q = random_generic(&basis, 2).unwrap();
        let mut inv = closed_forms(&q).unwrap();
        for v in inv.i1_sum.iter_mut() {
            *v *= 10.0;
        }
        assert!(matches!(
            reconstruct(&basis, &inv),
            Err(Error::BadModulus { context: "mixed coefficient modulus", .. })
        ));
    }

    #[test]
    fn real_mixed_coefficient_duplicates_survivors() {
        // A real z4 makes both imaginary signs exactly consistent.
        let basis = standard_basis();
        let template = random_generic(&basis, 4).unwrap();
        let mut z = *template.z_all();
        for k in [0, 1, 2] {
            z[k] = Complex64::new(z[k].norm(), 0.0);
        }
        z[3] = Complex64::new(0.8, 0.0);
        let q = PotentialCoefficients::new(template.modes().clone(), z);
        let inv = closed_forms(&q).unwrap();
        match reconstruct(&basis, &inv) {
            Err(Error::AmbiguousSigns { survivors }) => assert!(survivors >= 2),
            other => panic!("expected ambiguous signs, got {other:?}"),
        }
    }

    #[test]
    fn fully_real_potential_is_non_generic() {
        let basis = standard_basis();
        let template = random_generic(&basis, 6).unwrap();
        let mut z = *template.z_all();
        for zk in z.iter_mut() {
            *zk = Complex64::new(zk.norm(), 0.0);
        }
        let q = PotentialCoefficients::new(template.modes().clone(), z);
        let inv = closed_forms(&q).unwrap();
        assert!(reconstruct(&basis, &inv).is_err());
    }

    #[test]
    fn gauge_fix_normalizes_and_is_idempotent() {
        let q = random_generic(&standard_basis(), 7).unwrap();
        let fixed = gauge_fix(&q).unwrap();
        for k in 1..=3 {
            let zk = fixed.q.z(k);
            assert!(zk.re > 0.0);
            assert!(zk.im.abs() <= 1e-12 * zk.re);
        }
        assert!(fixed.q.z(7).im > 0.0);
        let again = gauge_fix(&fixed.q).unwrap();
        assert!(!again.inverted);
        assert!(again.tau.norm() < 1e-9);
        for k in 1..=13 {
            assert!((again.q.z(k) - fixed.q.z(k)).norm() < 1e-12);
        }
    }

    #[test]
    fn gauge_distance_ignores_gauge_moves() {
        let q = random_generic(&standard_basis(), 8).unwrap();
        let tau = Vec3::new(0.21, -1.7, 0.64);
        let moved = q.translate(&tau).invert();
        assert!(compare_mod_gauge(&q, &moved).unwrap() < 1e-10);
        let other = random_generic(&standard_basis(), 9).unwrap();
        assert!(compare_mod_gauge(&q, &other).unwrap() > 1e-2);
    }

    #[test]
    fn stability_trial_scales_with_noise() {
        let q = random_generic(&standard_basis(), 17).unwrap();
        let clean = stability_trial(&q, 0.0, 1).unwrap();
        assert!(clean < 1e-10);
        let d1 = stability_trial(&q, 1e-6, 1).unwrap();
        let d2 = stability_trial(&q, 1e-6, 1).unwrap();
        assert_relative_eq!(d1, d2);
        assert!(d1 > 0.0 && d1 < 1e-3);
    }
}
