//! Lattice geometry: basis validation, the dual basis, admissibility checks,
//! visible elements, the 26-element frequency set, orthogonal decompositions
//! along a lattice direction, and coplanar mode selection.

use nalgebra::{Matrix3, Vector3};

use crate::error::{Error, Result};

/// Cartesian vector in three dimensions.
pub type Vec3 = Vector3<f64>;

/// Relative tolerance for the admissibility inequalities.
pub const ADMISSIBILITY_REL_TOL: f64 = 1e-9;
/// Relative tolerance below which a 3x3 determinant counts as singular.
pub const SINGULAR_REL_TOL: f64 = 1e-12;
/// Relative tolerance for parallelism / coplanarity decisions.
const DIRECTION_REL_TOL: f64 = 1e-10;
/// Coefficient range scanned for the shortest projected lattice generator.
const PROJECTION_SEARCH_BOUND: i64 = 4;

/// Integer coefficient triples of the thirteen representative frequencies;
/// the full frequency set consists of these vectors and their negatives.
pub const REP_COEFFS: [[i64; 3]; 13] = [
    [1, 0, 0],
    [0, 1, 0],
    [0, 0, 1],
    [0, 1, 1],
    [1, 0, 1],
    [1, 1, 0],
    [1, 1, 1],
    [1, -1, 0],
    [1, 0, -1],
    [0, 1, -1],
    [-1, 1, 1],
    [1, -1, 1],
    [1, 1, -1],
];

/// A basis of three linearly independent vectors generating the lattice.
#[derive(Debug, Clone, PartialEq)]
pub struct LatticeBasis {
    gamma: [Vec3; 3],
}

impl LatticeBasis {
    /// Validates linear independence and builds the basis.
    pub fn new(gamma: [Vec3; 3]) -> Result<Self> {
        let det = det3(&gamma);
        let scale = gamma[0].norm() * gamma[1].norm() * gamma[2].norm();
        if det.abs() <= SINGULAR_REL_TOL * scale {
            return Err(Error::SingularBasis { det });
        }
        Ok(LatticeBasis { gamma })
    }

    /// Basis vector, 1-based.
    pub fn gamma(&self, i: usize) -> &Vec3 {
        &self.gamma[i - 1]
    }

    /// All three basis vectors.
    pub fn vectors(&self) -> &[Vec3; 3] {
        &self.gamma
    }

    /// Cartesian vector of an integer coefficient triple.
    pub fn vector(&self, coeffs: [i64; 3]) -> Vec3 {
        self.gamma[0] * coeffs[0] as f64
            + self.gamma[1] * coeffs[1] as f64
            + self.gamma[2] * coeffs[2] as f64
    }

    /// The dual basis: `omega[j]` satisfies `<gamma_i, omega_j> = 2 pi delta_ij`.
    pub fn dual(&self) -> Result<[Vec3; 3]> {
        let m = Matrix3::from_rows(&[
            self.gamma[0].transpose(),
            self.gamma[1].transpose(),
            self.gamma[2].transpose(),
        ]);
        let det = m.determinant();
        let scale = self.gamma[0].norm() * self.gamma[1].norm() * self.gamma[2].norm();
        if det.abs() <= SINGULAR_REL_TOL * scale {
            return Err(Error::SingularBasis { det });
        }
        let inv = m.try_inverse().ok_or(Error::SingularBasis { det })?;
        let two_pi = std::f64::consts::TAU;
        Ok([
            inv.column(0) * two_pi,
            inv.column(1) * two_pi,
            inv.column(2) * two_pi,
        ])
    }

    /// Evaluates the twelve admissibility inequalities.
    ///
    /// Each check records the evaluated quantity and a scale built from the
    /// norms entering it; the check passes when the quantity exceeds the
    /// scale by the relative tolerance.
    pub fn check_admissibility(&self) -> AdmissibilityReport {
        let g = &self.gamma;
        let mut checks = Vec::with_capacity(12);
        let mut push = |label: String, value: f64, scale: f64| {
            let ok = value.abs() > ADMISSIBILITY_REL_TOL * scale;
            checks.push(AdmissibilityCheck { label, value, scale, ok });
        };

        for (i, j) in [(0usize, 1usize), (0, 2), (1, 2)] {
            push(
                format!("dot(g{},g{})", i + 1, j + 1),
                g[i].dot(&g[j]),
                g[i].norm() * g[j].norm(),
            );
        }
        for (i, j, k) in [(0usize, 1usize, 2usize), (0, 2, 1), (1, 2, 0)] {
            let s = g[i] + g[j];
            push(
                format!("dot(g{}+g{},g{})", i + 1, j + 1, k + 1),
                s.dot(&g[k]),
                s.norm() * g[k].norm(),
            );
        }
        for (i, j) in [(0usize, 1usize), (0, 2), (1, 2)] {
            push(
                format!("norm2(g{})-norm2(g{})", i + 1, j + 1),
                g[i].norm_squared() - g[j].norm_squared(),
                g[i].norm() * g[j].norm(),
            );
        }
        let gsum = g[0] + g[1] + g[2];
        for (i, j, k) in [(0usize, 1usize, 2usize), (1, 0, 2), (2, 0, 1)] {
            let d = g[i] - g[j] - g[k];
            push(
                format!("dot(gsum,g{}-g{}-g{})", i + 1, j + 1, k + 1),
                gsum.dot(&d),
                gsum.norm() * d.norm(),
            );
        }

        let admissible = checks.iter().all(|c| c.ok);
        AdmissibilityReport { checks, admissible }
    }
}

/// One admissibility inequality instance.
#[derive(Debug, Clone, PartialEq)]
pub struct AdmissibilityCheck {
    pub label: String,
    pub value: f64,
    pub scale: f64,
    pub ok: bool,
}

/// Outcome of all twelve admissibility checks.
#[derive(Debug, Clone, PartialEq)]
pub struct AdmissibilityReport {
    pub checks: Vec<AdmissibilityCheck>,
    pub admissible: bool,
}

impl AdmissibilityReport {
    /// Labels of the failed checks.
    pub fn violations(&self) -> Vec<String> {
        self.checks.iter().filter(|c| !c.ok).map(|c| c.label.clone()).collect()
    }
}

/// A lattice basis that passed the admissibility checks, with its dual cached.
#[derive(Debug, Clone, PartialEq)]
pub struct AdmissibleBasis {
    basis: LatticeBasis,
    dual: [Vec3; 3],
    report: AdmissibilityReport,
}

impl AdmissibleBasis {
    /// Gates on the admissibility checks and caches the dual basis.
    pub fn new(basis: LatticeBasis) -> Result<Self> {
        let report = basis.check_admissibility();
        if !report.admissible {
            return Err(Error::NotAdmissible { violations: report.violations() });
        }
        let dual = basis.dual()?;
        Ok(AdmissibleBasis { basis, dual, report })
    }

    pub fn lattice(&self) -> &LatticeBasis {
        &self.basis
    }

    /// Basis vector, 1-based.
    pub fn gamma(&self, i: usize) -> &Vec3 {
        self.basis.gamma(i)
    }

    /// Dual basis vector, 1-based: `<gamma_i, omega_j> = 2 pi delta_ij`.
    pub fn omega(&self, j: usize) -> &Vec3 {
        &self.dual[j - 1]
    }

    pub fn report(&self) -> &AdmissibilityReport {
        &self.report
    }
}

/// The scaled row-echelon generator family `s*{(1,0,0),(1,1,0),(1,1,2)}`.
///
/// Integer triples of this shape are admissible for every positive scale.
pub fn standard_basis_scaled(scale: f64) -> AdmissibleBasis {
    let basis = LatticeBasis::new([
        Vec3::new(scale, 0.0, 0.0),
        Vec3::new(scale, scale, 0.0),
        Vec3::new(scale, scale, 2.0 * scale),
    ])
    .expect("standard generators are independent");
    AdmissibleBasis::new(basis).expect("standard generators are admissible")
}

/// The default basis used by the command-line tools: scale `2 pi`.
pub fn standard_basis() -> AdmissibleBasis {
    standard_basis_scaled(std::f64::consts::TAU)
}

/// A lattice element carried together with its integer coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct GammaVector {
    coeffs: [i64; 3],
    cart: Vec3,
}

impl GammaVector {
    pub fn from_coeffs(basis: &LatticeBasis, coeffs: [i64; 3]) -> Self {
        GammaVector { coeffs, cart: basis.vector(coeffs) }
    }

    pub fn coeffs(&self) -> [i64; 3] {
        self.coeffs
    }

    pub fn cart(&self) -> &Vec3 {
        &self.cart
    }

    pub fn negated(&self) -> Self {
        GammaVector {
            coeffs: [-self.coeffs[0], -self.coeffs[1], -self.coeffs[2]],
            cart: -self.cart,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs == [0, 0, 0]
    }
}

/// Coefficient-wise sum.
pub fn coeff_add(a: [i64; 3], b: [i64; 3]) -> [i64; 3] {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

/// Coefficient-wise difference.
pub fn coeff_sub(a: [i64; 3], b: [i64; 3]) -> [i64; 3] {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

/// Coefficient-wise scaling.
pub fn coeff_scale(a: [i64; 3], s: i64) -> [i64; 3] {
    [a[0] * s, a[1] * s, a[2] * s]
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Whether the integer triple has coprime entries (no smaller collinear
/// lattice element exists). Errors on the zero triple.
pub fn is_visible(coeffs: [i64; 3]) -> Result<bool> {
    if coeffs == [0, 0, 0] {
        return Err(Error::ZeroVector);
    }
    let g = coeffs
        .iter()
        .map(|&x| x.unsigned_abs())
        .fold(0u64, gcd);
    Ok(g == 1)
}

/// The thirteen representative frequencies over a fixed admissible basis.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeSet {
    basis: AdmissibleBasis,
    reps: Vec<GammaVector>,
}

impl ModeSet {
    pub fn new(basis: AdmissibleBasis) -> Self {
        let reps = REP_COEFFS
            .iter()
            .map(|&c| GammaVector::from_coeffs(basis.lattice(), c))
            .collect();
        ModeSet { basis, reps }
    }

    pub fn basis(&self) -> &AdmissibleBasis {
        &self.basis
    }

    /// Representative frequency, 1-based index `k = 1..=13`.
    pub fn rep(&self, k: usize) -> &GammaVector {
        &self.reps[k - 1]
    }

    /// Builds the lattice element for arbitrary integer coefficients.
    pub fn vector(&self, coeffs: [i64; 3]) -> GammaVector {
        GammaVector::from_coeffs(self.basis.lattice(), coeffs)
    }

    /// All 26 signed frequencies, representatives first.
    pub fn all_signed(&self) -> Vec<GammaVector> {
        let mut v: Vec<GammaVector> = self.reps.clone();
        v.extend(self.reps.iter().map(GammaVector::negated));
        v
    }

    /// Finds `coeffs` among the signed frequencies: returns the 1-based
    /// representative index and the sign, or `None` if outside the set.
    pub fn lookup(&self, coeffs: [i64; 3]) -> Option<(usize, i8)> {
        for (idx, rep) in self.reps.iter().enumerate() {
            if rep.coeffs == coeffs {
                return Some((idx + 1, 1));
            }
            if rep.negated().coeffs == coeffs {
                return Some((idx + 1, -1));
            }
        }
        None
    }
}

/// Result of splitting `b` orthogonally along the direction of `a`:
/// `b = s * beta + mu * a` with `beta` the shortest projected lattice
/// generator on the projected line of `b` and `s` a positive integer.
#[derive(Debug, Clone, PartialEq)]
pub struct Decomposition {
    pub s: i64,
    pub beta: Vec3,
    pub mu: f64,
}

/// Splits `b` into its component along `a` and an integer multiple of the
/// shortest projected lattice vector on the line of the orthogonal part.
pub fn orthogonal_decompose(
    basis: &LatticeBasis,
    a: &GammaVector,
    b: &GammaVector,
) -> Result<Decomposition> {
    if a.is_zero() {
        return Err(Error::ZeroVector);
    }
    let a_cart = a.cart;
    let nrm2 = a_cart.norm_squared();
    let project = |v: &Vec3| -> Vec3 { v - a_cart * (v.dot(&a_cart) / nrm2) };

    let b_perp = project(&b.cart);
    if b_perp.norm() <= DIRECTION_REL_TOL * b.cart.norm() {
        return Err(Error::CollinearInput);
    }
    let mu = b.cart.dot(&a_cart) / nrm2;

    // Scan a bounded coefficient box for the shortest projected lattice
    // vector on the line of b_perp, oriented positively along it.
    let mut beta: Option<Vec3> = None;
    let r = PROJECTION_SEARCH_BOUND;
    for n in -r..=r {
        for m in -r..=r {
            for s in -r..=r {
                if (n, m, s) == (0, 0, 0) {
                    continue;
                }
                let v = basis.vector([n, m, s]);
                let p = project(&v);
                if p.norm() <= DIRECTION_REL_TOL * v.norm() {
                    continue; // collinear with a
                }
                if p.cross(&b_perp).norm() > DIRECTION_REL_TOL * p.norm() * b_perp.norm() {
                    continue; // off the line
                }
                let q = if p.dot(&b_perp) > 0.0 { p } else { -p };
                match &beta {
                    Some(cur) if cur.norm() <= q.norm() => {}
                    _ => beta = Some(q),
                }
            }
        }
    }
    let beta = beta.ok_or_else(|| {
        Error::Config("projected generator not found within search bound".into())
    })?;

    let ratio = b_perp.dot(&beta) / beta.norm_squared();
    let s = ratio.round();
    if s < 1.0 || (b_perp - beta * s).norm() > 1e-9 * b_perp.norm() {
        return Err(Error::Config(
            "orthogonal part is not an integer multiple of the projected generator".into(),
        ));
    }
    Ok(Decomposition { s: s as i64, beta, mu })
}

/// Frequencies lying in the plane spanned by `a` and `b` but off the line
/// of `a`. Returned in representative order, `+rep` before `-rep`.
pub fn plane_modes(modes: &ModeSet, a: &GammaVector, b: &GammaVector) -> Result<Vec<GammaVector>> {
    let an = a.cart.norm();
    let bn = b.cart.norm();
    if an == 0.0 || bn == 0.0 {
        return Err(Error::ZeroVector);
    }
    if a.cart.cross(&b.cart).norm() <= DIRECTION_REL_TOL * an * bn {
        return Err(Error::CollinearInput);
    }
    let mut out = Vec::new();
    for k in 1..=13 {
        let rep = modes.rep(k);
        let cn = rep.cart.norm();
        let coplanar =
            a.cart.cross(&rep.cart).dot(&b.cart).abs() <= DIRECTION_REL_TOL * an * bn * cn;
        let off_line = a.cart.cross(&rep.cart).norm() > DIRECTION_REL_TOL * an * cn;
        if coplanar && off_line {
            out.push(rep.clone());
            out.push(rep.negated());
        }
    }
    Ok(out)
}

fn det3(g: &[Vec3; 3]) -> f64 {
    g[0].cross(&g[1]).dot(&g[2])
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;
    use std::f64::consts::{PI, TAU};

    /// Companion fixture: the echelon family at unit steps, scale 2 pi.
    pub(crate) fn cascade_basis() -> AdmissibleBasis {
        let b = LatticeBasis::new([
            Vec3::new(TAU, 0.0, 0.0),
            Vec3::new(TAU, TAU, 0.0),
            Vec3::new(TAU, TAU, TAU),
        ])
        .unwrap();
        AdmissibleBasis::new(b).unwrap()
    }

    #[test]
    fn rejects_dependent_basis() {
        let r = LatticeBasis::new([
            Vec3::new(1.0, 0.0, 0.0),
            Vec3::new(0.0, 1.0, 0.0),
            Vec3::new(1.0, 1.0, 0.0),
        ]);
        assert!(matches!(r, Err(Error::SingularBasis { .. })));
    }

    #[test]
    fn dual_basis_is_biorthogonal() {
        let b = cascade_basis();
        for i in 1..=3 {
            for j in 1..=3 {
                let expect = if i == j { TAU } else { 0.0 };
                assert_relative_eq!(
                    b.gamma(i).dot(b.omega(j)),
                    expect,
                    epsilon = 1e-12,
                    max_relative = 1e-12
                );
            }
        }
        // Frozen dual of the cascade basis.
        assert_relative_eq!(b.omega(1), &Vec3::new(1.0, -1.0, 0.0), epsilon = 1e-12);
        assert_relative_eq!(b.omega(2), &Vec3::new(0.0, 1.0, -1.0), epsilon = 1e-12);
        assert_relative_eq!(b.omega(3), &Vec3::new(0.0, 0.0, 1.0), epsilon = 1e-12);
    }

    #[test]
    fn dual_basis_of_standard_fixture() {
        let b = standard_basis();
        for i in 1..=3 {
            for j in 1..=3 {
                let expect = if i == j { TAU } else { 0.0 };
                assert_relative_eq!(b.gamma(i).dot(b.omega(j)), expect, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn cascade_basis_admissibility_values() {
        let rep = cascade_basis().lattice().check_admissibility();
        assert!(rep.admissible);
        assert_eq!(rep.checks.len(), 12);
        // Frozen fourth-family values.
        let tail: Vec<f64> = rep.checks[9..].iter().map(|c| c.value).collect();
        assert_relative_eq!(tail[0], -32.0 * PI * PI, max_relative = 1e-12);
        assert_relative_eq!(tail[1], -16.0 * PI * PI, max_relative = 1e-12);
        assert_relative_eq!(tail[2], -8.0 * PI * PI, max_relative = 1e-12);
    }

    #[test]
    fn orthogonal_pair_is_rejected() {
        let b = LatticeBasis::new([
            Vec3::new(1.0, 0.0, 0.0),
            Vec3::new(0.0, 1.0, 0.0),
            Vec3::new(1.0, 1.0, 1.0),
        ])
        .unwrap();
        let rep = b.check_admissibility();
        assert!(!rep.admissible);
        assert!(rep.violations().contains(&"dot(g1,g2)".to_string()));
        assert!(matches!(AdmissibleBasis::new(b), Err(Error::NotAdmissible { .. })));
    }

    #[test]
    fn resonant_echelon_basis_is_rejected() {
        // c^2 = 3 a^2 defeats exactly the last fourth-family check.
        let b = LatticeBasis::new([
            Vec3::new(1.0, 0.0, 0.0),
            Vec3::new(1.0, 1.0, 0.0),
            Vec3::new(1.0, 1.0, 3.0_f64.sqrt()),
        ])
        .unwrap();
        let rep = b.check_admissibility();
        assert!(!rep.admissible);
        assert_eq!(rep.violations(), vec!["dot(gsum,g3-g1-g2)".to_string()]);
    }

    proptest! {
        /// Echelon triples (a,0,0),(a,b,0),(a,b,c) with integer entries are
        /// always admissible: no integer satisfies c^2 = 3 a^2.
        #[test]
        fn integer_echelon_bases_admissible(a in 1i64..=6, b in 1i64..=6, c in 1i64..=6) {
            let basis = LatticeBasis::new([
                Vec3::new(a as f64, 0.0, 0.0),
                Vec3::new(a as f64, b as f64, 0.0),
                Vec3::new(a as f64, b as f64, c as f64),
            ]).unwrap();
            prop_assert!(basis.check_admissibility().admissible);
        }

        #[test]
        fn visibility_matches_divisor_oracle(
            n in -6i64..=6, m in -6i64..=6, s in -6i64..=6
        ) {
            prop_assume!((n, m, s) != (0, 0, 0));
            let coeffs = [n, m, s];
            let mx = coeffs.iter().map(|x| x.abs()).max().unwrap();
            let oracle = !(2..=mx).any(|d| coeffs.iter().all(|x| x % d == 0));
            prop_assert_eq!(is_visible(coeffs).unwrap(), oracle);
        }
    }

    #[test]
    fn visibility_examples() {
        assert!(is_visible([1, 0, 0]).unwrap());
        assert!(is_visible([0, 0, 1]).unwrap());
        assert!(is_visible([2, 3, 0]).unwrap());
        assert!(!is_visible([2, 4, 6]).unwrap());
        assert!(!is_visible([0, 0, 5]).unwrap());
        assert!(matches!(is_visible([0, 0, 0]), Err(Error::ZeroVector)));
    }

    #[test]
    fn mode_set_round_trips_lookup() {
        let modes = ModeSet::new(standard_basis());
        for k in 1..=13 {
            let rep = modes.rep(k);
            assert!(is_visible(rep.coeffs()).unwrap());
            assert_eq!(modes.lookup(rep.coeffs()), Some((k, 1)));
            assert_eq!(modes.lookup(rep.negated().coeffs()), Some((k, -1)));
        }
        assert_eq!(modes.lookup([2, 0, 0]), None);
        assert_eq!(modes.all_signed().len(), 26);
    }

    #[test]
    fn decomposition_cascade_fixture() {
        // a = g1+g2, b = g1 over the cascade basis.
        let basis = cascade_basis();
        let modes = ModeSet::new(basis.clone());
        let a = modes.rep(6);
        let b = modes.rep(1);
        let d = orthogonal_decompose(basis.lattice(), a, b).unwrap();
        assert_eq!(d.s, 1);
        assert_relative_eq!(d.mu, 0.4, max_relative = 1e-12);
        assert_relative_eq!(
            d.beta,
            &Vec3::new(TAU / 5.0, -2.0 * TAU / 5.0, 0.0),
            epsilon = 1e-12
        );
    }

    #[test]
    fn decomposition_rebuilds_b_for_all_frequency_pairs() {
        for basis in [standard_basis(), cascade_basis()] {
            let modes = ModeSet::new(basis.clone());
            let all = modes.all_signed();
            for a in &all {
                for b in &all {
                    let parallel = a.cart().cross(b.cart()).norm()
                        <= 1e-12 * a.cart().norm() * b.cart().norm();
                    let got = orthogonal_decompose(basis.lattice(), a, b);
                    if parallel {
                        assert!(matches!(got, Err(Error::CollinearInput)));
                        continue;
                    }
                    let d = got.unwrap();
                    assert!(d.s >= 1);
                    assert_relative_eq!(d.beta.dot(a.cart()), 0.0, epsilon = 1e-9);
                    let rebuilt = d.beta * d.s as f64 + a.cart() * d.mu;
                    assert_relative_eq!(&rebuilt, b.cart(), epsilon = 1e-9);
                }
            }
        }
    }

    #[test]
    fn plane_modes_fixtures() {
        let modes = ModeSet::new(standard_basis());
        let keys = |v: &[GammaVector]| -> Vec<[i64; 3]> { v.iter().map(|g| g.coeffs()).collect() };

        // Plane of (g1+g2, g1): the two generators and their difference.
        let got = plane_modes(&modes, modes.rep(6), modes.rep(1)).unwrap();
        assert_eq!(
            keys(&got),
            vec![
                [1, 0, 0], [-1, 0, 0],
                [0, 1, 0], [0, -1, 0],
                [1, -1, 0], [-1, 1, 0],
            ]
        );

        // Plane of (g1, g2): b itself, the sum, and the difference.
        let got = plane_modes(&modes, modes.rep(1), modes.rep(2)).unwrap();
        assert_eq!(
            keys(&got),
            vec![
                [0, 1, 0], [0, -1, 0],
                [1, 1, 0], [-1, -1, 0],
                [1, -1, 0], [-1, 1, 0],
            ]
        );

        // Plane of (g1+g2+g3, g1) also contains the eleventh representative.
        let got = plane_modes(&modes, modes.rep(7), modes.rep(1)).unwrap();
        assert_eq!(
            keys(&got),
            vec![
                [1, 0, 0], [-1, 0, 0],
                [0, 1, 1], [0, -1, -1],
                [-1, 1, 1], [1, -1, -1],
            ]
        );

        assert!(matches!(
            plane_modes(&modes, modes.rep(1), &modes.rep(1).negated()),
            Err(Error::CollinearInput)
        ));
    }

    #[test]
    fn plane_mode_cardinality_over_all_pairs() {
        let modes = ModeSet::new(standard_basis());
        for i in 1..=13 {
            for j in 1..=13 {
                if i == j {
                    continue;
                }
                let got = plane_modes(&modes, modes.rep(i), modes.rep(j)).unwrap();
                // Frequencies come in full +/- lines, so counts are even;
                // the second generator's line is always present.
                assert!(
                    got.len() % 2 == 0 && (2..=6).contains(&got.len()),
                    "pair ({i},{j}): {}",
                    got.len()
                );
                assert!(got.iter().any(|g| g.coeffs() == modes.rep(j).coeffs()));
            }
        }
    }
}
