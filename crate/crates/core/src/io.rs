//! Plain-text readers and writers for potentials, invariant sets, line
//! problems, and the report tables. All values are written with enough
//! digits to round-trip doubles exactly; readers are strict about tags,
//! duplicates, and completeness.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::extraction::SweepReport;
use crate::hill::{GapReport, HillProblem};
use crate::invariants::{InvariantSet, ENTRY_COUNT, PAIRS};
use crate::lattice::{AdmissibleBasis, LatticeBasis, ModeSet, Vec3};
use crate::potential::PotentialCoefficients;

fn fmt(value: f64) -> String {
    format!("{value:.17e}")
}

fn parse_f64(token: &str, line_no: usize) -> Result<f64> {
    token
        .parse::<f64>()
        .map_err(|_| Error::Parse(format!("line {line_no}: bad number {token:?}")))
}

fn parse_index(token: &str, line_no: usize) -> Result<usize> {
    token
        .parse::<usize>()
        .map_err(|_| Error::Parse(format!("line {line_no}: bad index {token:?}")))
}

fn numbered_lines(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| {
            let payload = l.split('#').next().unwrap_or("");
            (i + 1, payload.split_whitespace().collect::<Vec<_>>())
        })
        .filter(|(_, t)| !t.is_empty())
}

/// Serializes a potential: the three basis rows followed by the thirteen
/// coefficient rows.
pub fn write_potential(q: &PotentialCoefficients) -> String {
    let mut out = String::new();
    for g in q.basis().lattice().vectors() {
        out.push_str(&format!("lattice {} {} {}\n", fmt(g.x), fmt(g.y), fmt(g.z)));
    }
    for (k, z) in q.z_all().iter().enumerate() {
        out.push_str(&format!("coef {} {} {}\n", k + 1, fmt(z.re), fmt(z.im)));
    }
    out
}

/// Parses a potential file, checking the basis and the coefficient list.
pub fn parse_potential(text: &str) -> Result<PotentialCoefficients> {
    let mut gammas: Vec<Vec3> = Vec::new();
    let mut coefs: [Option<Complex64>; 13] = [None; 13];
    for (no, tokens) in numbered_lines(text) {
        match tokens[0] {
            "lattice" => {
                if tokens.len() != 4 {
                    return Err(Error::Parse(format!("line {no}: lattice row needs 3 numbers")));
                }
                if gammas.len() == 3 {
                    return Err(Error::Parse(format!("line {no}: more than 3 lattice rows")));
                }
                gammas.push(Vec3::new(
                    parse_f64(tokens[1], no)?,
                    parse_f64(tokens[2], no)?,
                    parse_f64(tokens[3], no)?,
                ));
            }
            "coef" => {
                if tokens.len() != 4 {
                    return Err(Error::Parse(format!("line {no}: coef row needs 3 numbers")));
                }
                let k = parse_index(tokens[1], no)?;
                if !(1..=13).contains(&k) {
                    return Err(Error::Parse(format!("line {no}: coefficient index {k}")));
                }
                if coefs[k - 1].is_some() {
                    return Err(Error::Parse(format!("line {no}: duplicate coefficient {k}")));
                }
                let z = Complex64::new(parse_f64(tokens[2], no)?, parse_f64(tokens[3], no)?);
                if z == Complex64::new(0.0, 0.0) {
                    return Err(Error::Parse(format!("line {no}: zero coefficient {k}")));
                }
                coefs[k - 1] = Some(z);
            }
            tag => return Err(Error::Parse(format!("line {no}: unknown tag {tag:?}"))),
        }
    }
    if gammas.len() != 3 {
        return Err(Error::Parse(format!("expected 3 lattice rows, got {}", gammas.len())));
    }
    let mut z = [Complex64::new(0.0, 0.0); 13];
    for (k, c) in coefs.iter().enumerate() {
        z[k] = c.ok_or_else(|| Error::Parse(format!("missing coefficient {}", k + 1)))?;
    }
    let basis = AdmissibleBasis::new(LatticeBasis::new([gammas[0], gammas[1], gammas[2]])?)?;
    Ok(PotentialCoefficients::new(ModeSet::new(basis), z))
}

/// Serializes an invariant set in canonical entry order.
pub fn write_invariants(set: &InvariantSet) -> String {
    let mut out = String::new();
    for (k, v) in set.i.iter().enumerate() {
        out.push_str(&format!("I {} {}\n", k + 1, fmt(*v)));
    }
    for (p, (i, j)) in PAIRS.iter().enumerate() {
        out.push_str(&format!("I1 sum {i} {j} {}\n", fmt(set.i1_sum[p])));
    }
    for (p, (i, j)) in PAIRS.iter().enumerate() {
        out.push_str(&format!("I1 diff {i} {j} {}\n", fmt(set.i1_diff[p])));
    }
    for (i, v) in set.i1_gamma.iter().enumerate() {
        out.push_str(&format!("I1 gamma {} {}\n", i + 1, fmt(*v)));
    }
    for (i, v) in set.i1_refl.iter().enumerate() {
        out.push_str(&format!("I1 refl {} {}\n", i + 1, fmt(*v)));
    }
    for (p, (i, j)) in PAIRS.iter().enumerate() {
        out.push_str(&format!("I2 pair {i} {j} {}\n", fmt(set.i2_pair[p])));
    }
    for (i, v) in set.i2_gamma.iter().enumerate() {
        out.push_str(&format!("I2 gamma {} {}\n", i + 1, fmt(*v)));
    }
    out
}

fn pair_slot(i: usize, j: usize, line_no: usize) -> Result<usize> {
    PAIRS
        .iter()
        .position(|&(a, b)| (a, b) == (i, j))
        .ok_or_else(|| Error::Parse(format!("line {line_no}: bad pair ({i}, {j})")))
}

fn generator_slot(i: usize, line_no: usize) -> Result<usize> {
    if (1..=3).contains(&i) {
        Ok(i - 1)
    } else {
        Err(Error::Parse(format!("line {line_no}: generator index {i}")))
    }
}

/// Parses an invariant file: any line order, but every canonical entry
/// must appear exactly once.
pub fn parse_invariants(text: &str) -> Result<InvariantSet> {
    let mut flat: [Option<f64>; ENTRY_COUNT] = [None; ENTRY_COUNT];
    let mut put = |slot: usize, value: f64, line_no: usize| -> Result<()> {
        if flat[slot].is_some() {
            return Err(Error::Parse(format!("line {line_no}: duplicate entry")));
        }
        flat[slot] = Some(value);
        Ok(())
    };
    for (no, tokens) in numbered_lines(text) {
        match tokens[0] {
            "I" => {
                if tokens.len() != 3 {
                    return Err(Error::Parse(format!("line {no}: I row needs index and value")));
                }
                let k = parse_index(tokens[1], no)?;
                if !(1..=13).contains(&k) {
                    return Err(Error::Parse(format!("line {no}: line-invariant index {k}")));
                }
                put(k - 1, parse_f64(tokens[2], no)?, no)?;
            }
            "I1" | "I2" => {
                let family = tokens[0];
                let kind = *tokens
                    .get(1)
                    .ok_or_else(|| Error::Parse(format!("line {no}: missing entry kind")))?;
                match (family, kind) {
                    ("I1", "sum") | ("I1", "diff") | ("I2", "pair") => {
                        if tokens.len() != 5 {
                            return Err(Error::Parse(format!(
                                "line {no}: {family} {kind} row needs two indices and a value"
                            )));
                        }
                        let i = parse_index(tokens[2], no)?;
                        let j = parse_index(tokens[3], no)?;
                        let p = pair_slot(i, j, no)?;
                        let base = match (family, kind) {
                            ("I1", "sum") => 13,
                            ("I1", "diff") => 19,
                            _ => 31,
                        };
                        put(base + p, parse_f64(tokens[4], no)?, no)?;
                    }
                    ("I1", "gamma") | ("I1", "refl") | ("I2", "gamma") => {
                        if tokens.len() != 4 {
                            return Err(Error::Parse(format!(
                                "line {no}: {family} {kind} row needs one index and a value"
                            )));
                        }
                        let i = generator_slot(parse_index(tokens[2], no)?, no)?;
                        let base = match (family, kind) {
                            ("I1", "gamma") => 25,
                            ("I1", "refl") => 28,
                            _ => 37,
                        };
                        put(base + i, parse_f64(tokens[3], no)?, no)?;
                    }
                    _ => {
                        return Err(Error::Parse(format!(
                            "line {no}: unknown entry kind {kind:?}"
                        )))
                    }
                }
            }
            tag => return Err(Error::Parse(format!("line {no}: unknown tag {tag:?}"))),
        }
    }
    let mut values = [0.0; ENTRY_COUNT];
    for (slot, v) in flat.iter().enumerate() {
        values[slot] = v.ok_or_else(|| Error::Parse(format!("missing entry at slot {slot}")))?;
    }
    Ok(InvariantSet::from_flat(&values))
}

/// Serializes a line problem: the header row and one row per harmonic.
pub fn write_hill_problem(p: &HillProblem) -> String {
    let mut out = format!("hill {} {} {}\n", fmt(p.delta_norm()), fmt(p.v()), p.truncation());
    for &(h, z) in p.harmonics() {
        out.push_str(&format!("hcoef {h} {} {}\n", fmt(z.re), fmt(z.im)));
    }
    out
}

/// Parses a line-problem block; an empty harmonic list is the free case.
pub fn parse_hill_problem(text: &str) -> Result<HillProblem> {
    let mut header: Option<(f64, f64, usize)> = None;
    let mut harmonics: Vec<(i64, Complex64)> = Vec::new();
    for (no, tokens) in numbered_lines(text) {
        match tokens[0] {
            "hill" => {
                if tokens.len() != 4 {
                    return Err(Error::Parse(format!(
                        "line {no}: hill row needs norm, quasimomentum, truncation"
                    )));
                }
                if header.is_some() {
                    return Err(Error::Parse(format!("line {no}: duplicate hill row")));
                }
                header = Some((
                    parse_f64(tokens[1], no)?,
                    parse_f64(tokens[2], no)?,
                    parse_index(tokens[3], no)?,
                ));
            }
            "hcoef" => {
                if tokens.len() != 4 {
                    return Err(Error::Parse(format!("line {no}: hcoef row needs 3 numbers")));
                }
                if header.is_none() {
                    return Err(Error::Parse(format!("line {no}: hcoef before hill row")));
                }
                let h = tokens[1].parse::<i64>().map_err(|_| {
                    Error::Parse(format!("line {no}: bad harmonic index {:?}", tokens[1]))
                })?;
                if h < 1 {
                    return Err(Error::Parse(format!("line {no}: harmonic index {h}")));
                }
                if harmonics.iter().any(|&(h0, _)| h0 == h) {
                    return Err(Error::Parse(format!("line {no}: duplicate harmonic {h}")));
                }
                let z = Complex64::new(parse_f64(tokens[2], no)?, parse_f64(tokens[3], no)?);
                if z == Complex64::new(0.0, 0.0) {
                    return Err(Error::Parse(format!("line {no}: zero harmonic {h}")));
                }
                harmonics.push((h, z));
            }
            tag => return Err(Error::Parse(format!("line {no}: unknown tag {tag:?}"))),
        }
    }
    let (norm, v, truncation) =
        header.ok_or_else(|| Error::Parse("missing hill header row".into()))?;
    HillProblem::new(norm, v, truncation, &harmonics)
}

/// Serializes a gap report: one row per band with both edges and the gap.
pub fn write_gap_report(report: &GapReport) -> String {
    let mut out = String::new();
    for row in &report.rows {
        out.push_str(&format!(
            "{} {} {} {}\n",
            row.n,
            fmt(row.lower),
            fmt(row.upper),
            fmt(row.gap)
        ));
    }
    out
}

/// Serializes a radius sweep: one row per radius plus the fitted slopes.
pub fn write_sweep_report(report: &SweepReport) -> String {
    let mut out = String::new();
    for p in &report.points {
        out.push_str(&format!(
            "{} {} {} {}\n",
            fmt(p.rho),
            fmt(p.mu_err),
            fmt(p.j_err),
            fmt(p.det)
        ));
    }
    out.push_str(&format!(
        "slopes {} {} {}\n",
        fmt(report.mu_slope),
        fmt(report.j_slope),
        fmt(report.det_slope)
    ));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hill::band_gaps;
    use crate::lattice::standard_basis;
    use crate::potential::random_generic;

    fn fixture() -> PotentialCoefficients {
        random_generic(&standard_basis(), 3).unwrap()
    }

    #[test]
    fn potential_round_trip_is_exact_and_stable() {
        let q = fixture();
        let text = write_potential(&q);
        let back = parse_potential(&text).unwrap();
        assert_eq!(q.z_all(), back.z_all());
        assert_eq!(
            q.basis().lattice().vectors(),
            back.basis().lattice().vectors()
        );
        assert_eq!(text, write_potential(&back));

        let annotated = format!("# header note\n\n{}\n  # trailing note\n", text);
        let commented = parse_potential(&annotated).unwrap();
        assert_eq!(q.z_all(), commented.z_all());
    }

    #[test]
    fn potential_parser_rejects_malformed_input() {
        let q = fixture();
        let good = write_potential(&q);

        let unknown = good.replace("coef 5", "zcoef 5");
        assert!(matches!(parse_potential(&unknown), Err(Error::Parse(_))));

        let duplicated = format!("{good}coef 13 1.0 2.0\n");
        assert!(matches!(parse_potential(&duplicated), Err(Error::Parse(_))));

        let missing: String =
            good.lines().filter(|l| !l.starts_with("coef 7 ")).map(|l| format!("{l}\n")).collect();
        assert!(matches!(parse_potential(&missing), Err(Error::Parse(_))));

        let zeroed: String = good
            .lines()
            .map(|l| {
                if l.starts_with("coef 2 ") {
                    "coef 2 0.0 0.0\n".to_string()
                } else {
                    format!("{l}\n")
                }
            })
            .collect();
        assert!(matches!(parse_potential(&zeroed), Err(Error::Parse(_))));

        let bad_number = good.replace("coef 1 ", "coef 1 oops ");
        assert!(matches!(parse_potential(&bad_number), Err(Error::Parse(_))));
    }

    #[test]
    fn potential_parser_runs_the_basis_checks() {
        let coefs: String =
            (1..=13).map(|k| format!("coef {k} 1.0 {}.5\n", k)).collect();
        let singular = format!(
            "lattice 1 0 0\nlattice 2 0 0\nlattice 0 0 1\n{coefs}"
        );
        assert!(matches!(parse_potential(&singular), Err(Error::SingularBasis { .. })));

        // Echelon basis with the third diagonal at sqrt(3) times the
        // first: a genuinely inadmissible real basis.
        let s3 = 3f64.sqrt();
        let inadmissible = format!(
            "lattice 1 0 0\nlattice 1 1 0\nlattice 1 1 {s3:.17}\n{coefs}"
        );
        assert!(matches!(parse_potential(&inadmissible), Err(Error::NotAdmissible { .. })));
    }

    #[test]
    fn invariant_round_trip_in_any_line_order() {
        let set = crate::invariants::closed_forms(&fixture()).unwrap();
        let text = write_invariants(&set);
        assert_eq!(text.lines().count(), ENTRY_COUNT);
        let back = parse_invariants(&text).unwrap();
        assert_eq!(set.to_flat(), back.to_flat());

        let mut lines: Vec<&str> = text.lines().collect();
        lines.reverse();
        let shuffled: String = lines.iter().map(|l| format!("{l}\n")).collect();
        let back = parse_invariants(&shuffled).unwrap();
        assert_eq!(set.to_flat(), back.to_flat());
    }

    #[test]
    fn invariant_parser_demands_exactly_the_canonical_entries() {
        let set = crate::invariants::closed_forms(&fixture()).unwrap();
        let text = write_invariants(&set);

        let missing: String =
            text.lines().skip(1).map(|l| format!("{l}\n")).collect();
        assert!(matches!(parse_invariants(&missing), Err(Error::Parse(_))));

        let duplicated = format!("{text}I 1 0.5\n");
        assert!(matches!(parse_invariants(&duplicated), Err(Error::Parse(_))));

        let unknown = format!("{text}I1 cross 1 2 0.5\n");
        assert!(matches!(parse_invariants(&unknown), Err(Error::Parse(_))));

        let bad_pair = text.replace("I2 pair 1 2 ", "I2 pair 1 1 ");
        assert!(matches!(parse_invariants(&bad_pair), Err(Error::Parse(_))));
    }

    #[test]
    fn hill_problem_round_trip_and_validation() {
        let p = HillProblem::new(
            2.5,
            0.41,
            30,
            &[(1, Complex64::new(0.3, -0.2)), (4, Complex64::new(0.0, 1.0))],
        )
        .unwrap();
        let text = write_hill_problem(&p);
        let back = parse_hill_problem(&text).unwrap();
        assert_eq!(text, write_hill_problem(&back));
        assert_eq!(p.harmonics(), back.harmonics());

        let free = parse_hill_problem("hill 1.0 0.3 12\n").unwrap();
        assert!(free.harmonics().is_empty());

        assert!(matches!(
            parse_hill_problem("hill 1.0 0.3 30\nhcoef 2 0.0 0.0\n"),
            Err(Error::Parse(_))
        ));
        assert!(matches!(
            parse_hill_problem("hill 1.0 0.3 30\nhcoef 2 1 0\nhcoef 2 2 0\n"),
            Err(Error::Parse(_))
        ));
        assert!(matches!(parse_hill_problem("hcoef 2 1 0\n"), Err(Error::Parse(_))));
        // Construction rules still apply after a clean parse.
        assert!(matches!(
            parse_hill_problem("hill 1.0 0.3 5\nhcoef 1 1 0\n"),
            Err(Error::TruncationTooSmall { .. })
        ));
    }

    #[test]
    fn report_writers_emit_fixed_columns() {
        let gaps = band_gaps(&[(1, Complex64::new(0.2, 0.0))], 3, 20).unwrap();
        let text = write_gap_report(&gaps);
        for line in text.lines() {
            let toks: Vec<&str> = line.split_whitespace().collect();
            assert_eq!(toks.len(), 4);
            toks[0].parse::<usize>().unwrap();
            for t in &toks[1..] {
                t.parse::<f64>().unwrap();
            }
        }
        assert_eq!(text.lines().count(), 4);
    }
}
