//! Orbit classifiers for lines and planes of `PG(5, q)` under the conic
//! action of `PGL(3, q)`, together with representative generators for every
//! orbit label.
//!
//! Labels follow the established catalogue: `o5 … o17` for the 15 line
//! orbits and `Σ1 … Σ15` (rendered `Sigma1 … Sigma15`, with the
//! characteristic-3 variant `Sigma14'`) for the 15 orbits of planes meeting
//! the Veronese surface. The classifiers are driven by point-orbit
//! distributions first — those already separate most labels — and fall back
//! to determinant-cubic invariants (factor structure, residual conics,
//! rational inflexion counts, special line configurations) for the colliding
//! rows.

use crate::cubics::{
    binary_factor_type, cubic_profile, det_binary_cubic, det_cubic, BinaryFactorType,
    CubicProfile, InflexionCount, TernaryCubic,
};
use crate::field::{is_cube_in_sqrt_minus3, Elt, Fq, LegendreClass, QElt, QuadExt, SqrtM3Elt};
use crate::geometry::{nullspace, sym3_rank, Subspace, Sym3};
use crate::veronese::{distribution, Net, OrbitDistribution};
use std::fmt;
use std::str::FromStr;
use thiserror::Error;

/// Errors from classification and representative generation.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClassifyError {
    /// The input subspace is not a line.
    #[error("input subspace is not a line")]
    NotALine,
    /// The input subspace is not a plane.
    #[error("input subspace is not a plane")]
    NotAPlane,
    /// A net's three forms are linearly dependent.
    #[error("the three quadratic forms are linearly dependent")]
    DependentForms,
    /// The net is not of rank one: no member is a repeated line, so its
    /// plane misses the Veronese surface and is outside the classification.
    #[error("the net is not of rank one (no member conic is a repeated line)")]
    NotRankOne,
    /// The requested label does not exist in this characteristic.
    #[error("label {0} is unavailable in this characteristic")]
    LabelUnavailableForCharacteristic(String),
    /// No admissible parameter for the two-secant plane family exists.
    /// Unreachable away from characteristic 3.
    #[error("no admissible parameter c exists")]
    NoAdmissibleC,
    /// A representative parameter search exhausted the field. Unreachable.
    #[error("representative parameter search failed")]
    ParameterSearchFailed,
    /// A label string could not be parsed.
    #[error("unknown orbit label {0:?}")]
    UnknownLabel(String),
    /// The decision tree reached a state the classification theorems rule
    /// out — an implementation bug, never a property of the input.
    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),
}

// ---------------------------------------------------------------------------
// Labels
// ---------------------------------------------------------------------------

/// The 15 orbit labels of lines of `PG(5, q)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LineOrbitLabel {
    O5,
    O6,
    O8_1,
    O8_2,
    O9,
    O10,
    O12,
    O13_1,
    O13_2,
    O14_1,
    O14_2,
    O15_1,
    O15_2,
    O16,
    O17,
}

pub const ALL_LINE_LABELS: [LineOrbitLabel; 15] = [
    LineOrbitLabel::O5,
    LineOrbitLabel::O6,
    LineOrbitLabel::O8_1,
    LineOrbitLabel::O8_2,
    LineOrbitLabel::O9,
    LineOrbitLabel::O10,
    LineOrbitLabel::O12,
    LineOrbitLabel::O13_1,
    LineOrbitLabel::O13_2,
    LineOrbitLabel::O14_1,
    LineOrbitLabel::O14_2,
    LineOrbitLabel::O15_1,
    LineOrbitLabel::O15_2,
    LineOrbitLabel::O16,
    LineOrbitLabel::O17,
];

impl LineOrbitLabel {
    /// Line orbit labels exist for every odd q.
    pub fn available_for(self, _q: u16) -> bool {
        true
    }
}

impl fmt::Display for LineOrbitLabel {
    fn fmt(&self, w: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            LineOrbitLabel::O5 => "o5",
            LineOrbitLabel::O6 => "o6",
            LineOrbitLabel::O8_1 => "o8,1",
            LineOrbitLabel::O8_2 => "o8,2",
            LineOrbitLabel::O9 => "o9",
            LineOrbitLabel::O10 => "o10",
            LineOrbitLabel::O12 => "o12",
            LineOrbitLabel::O13_1 => "o13,1",
            LineOrbitLabel::O13_2 => "o13,2",
            LineOrbitLabel::O14_1 => "o14,1",
            LineOrbitLabel::O14_2 => "o14,2",
            LineOrbitLabel::O15_1 => "o15,1",
            LineOrbitLabel::O15_2 => "o15,2",
            LineOrbitLabel::O16 => "o16",
            LineOrbitLabel::O17 => "o17",
        };
        w.write_str(s)
    }
}

/// The 15 orbit labels of planes meeting the Veronese surface. `Sigma14`
/// exists only away from characteristic 3; `Sigma14Prime` (displayed
/// `Sigma14'`) only in characteristic 3 — exactly 15 labels per field.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PlaneOrbitLabel {
    Sigma1,
    Sigma2,
    Sigma3,
    Sigma4,
    Sigma5,
    Sigma6,
    Sigma7,
    Sigma8,
    Sigma9,
    Sigma10,
    Sigma11,
    Sigma12,
    Sigma13,
    Sigma14,
    Sigma14Prime,
    Sigma15,
}

pub const ALL_PLANE_LABELS: [PlaneOrbitLabel; 16] = [
    PlaneOrbitLabel::Sigma1,
    PlaneOrbitLabel::Sigma2,
    PlaneOrbitLabel::Sigma3,
    PlaneOrbitLabel::Sigma4,
    PlaneOrbitLabel::Sigma5,
    PlaneOrbitLabel::Sigma6,
    PlaneOrbitLabel::Sigma7,
    PlaneOrbitLabel::Sigma8,
    PlaneOrbitLabel::Sigma9,
    PlaneOrbitLabel::Sigma10,
    PlaneOrbitLabel::Sigma11,
    PlaneOrbitLabel::Sigma12,
    PlaneOrbitLabel::Sigma13,
    PlaneOrbitLabel::Sigma14,
    PlaneOrbitLabel::Sigma14Prime,
    PlaneOrbitLabel::Sigma15,
];

impl PlaneOrbitLabel {
    /// Whether the label names an orbit over `F_q`.
    pub fn available_for(self, q: u16) -> bool {
        match self {
            PlaneOrbitLabel::Sigma14 => q % 3 != 0,
            PlaneOrbitLabel::Sigma14Prime => q % 3 == 0,
            _ => true,
        }
    }
}

impl fmt::Display for PlaneOrbitLabel {
    fn fmt(&self, w: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            PlaneOrbitLabel::Sigma1 => "Sigma1",
            PlaneOrbitLabel::Sigma2 => "Sigma2",
            PlaneOrbitLabel::Sigma3 => "Sigma3",
            PlaneOrbitLabel::Sigma4 => "Sigma4",
            PlaneOrbitLabel::Sigma5 => "Sigma5",
            PlaneOrbitLabel::Sigma6 => "Sigma6",
            PlaneOrbitLabel::Sigma7 => "Sigma7",
            PlaneOrbitLabel::Sigma8 => "Sigma8",
            PlaneOrbitLabel::Sigma9 => "Sigma9",
            PlaneOrbitLabel::Sigma10 => "Sigma10",
            PlaneOrbitLabel::Sigma11 => "Sigma11",
            PlaneOrbitLabel::Sigma12 => "Sigma12",
            PlaneOrbitLabel::Sigma13 => "Sigma13",
            PlaneOrbitLabel::Sigma14 => "Sigma14",
            PlaneOrbitLabel::Sigma14Prime => "Sigma14'",
            PlaneOrbitLabel::Sigma15 => "Sigma15",
        };
        w.write_str(s)
    }
}

fn canonicalize_label(s: &str) -> String {
    let mut c: String = s
        .trim()
        .to_lowercase()
        .replace(['_', '.'], ",")
        .replace(' ', "")
        .replace('σ', "sigma");
    if let Some(stripped) = c.strip_suffix("prime") {
        c = format!("{stripped}'");
    }
    c
}

impl FromStr for LineOrbitLabel {
    type Err = ClassifyError;

    fn from_str(s: &str) -> Result<LineOrbitLabel, ClassifyError> {
        let c = canonicalize_label(s);
        ALL_LINE_LABELS
            .into_iter()
            .find(|l| canonicalize_label(&l.to_string()) == c)
            .ok_or_else(|| ClassifyError::UnknownLabel(s.to_string()))
    }
}

impl FromStr for PlaneOrbitLabel {
    type Err = ClassifyError;

    fn from_str(s: &str) -> Result<PlaneOrbitLabel, ClassifyError> {
        let c = canonicalize_label(s);
        ALL_PLANE_LABELS
            .into_iter()
            .find(|l| canonicalize_label(&l.to_string()) == c)
            .ok_or_else(|| ClassifyError::UnknownLabel(s.to_string()))
    }
}

/// Outcome of plane classification: an orbit label, or a plane disjoint from
/// the Veronese surface (outside the classified family).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PlaneOutcome {
    Orbit(PlaneOrbitLabel),
    NotMeetingVeronesean,
}

impl fmt::Display for PlaneOutcome {
    fn fmt(&self, w: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PlaneOutcome::Orbit(l) => l.fmt(w),
            PlaneOutcome::NotMeetingVeronesean => w.write_str("NotMeetingVeronesean"),
        }
    }
}

/// A classification with its evidence: the label, the point-orbit
/// distribution, a summary of the determinant-cubic analysis when one was
/// needed, and the ordered decision trace.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassifyReport {
    pub label: String,
    pub distribution: OrbitDistribution,
    pub cubic_summary: Option<String>,
    pub trace: Vec<String>,
}

// ---------------------------------------------------------------------------
// Expected distributions (reference tables)
// ---------------------------------------------------------------------------

/// The point-orbit distribution of a line orbit as a function of q.
pub fn expected_line_distribution(label: LineOrbitLabel, q: u16) -> OrbitDistribution {
    let q = q as u32;
    let d = |n1, n2, n3, n4| OrbitDistribution { n1, n2, n3, n4 };
    match label {
        LineOrbitLabel::O5 => d(2, (q - 1) / 2, (q - 1) / 2, 0),
        LineOrbitLabel::O6 => d(1, q, 0, 0),
        LineOrbitLabel::O8_1 => d(1, 1, 0, q - 1),
        LineOrbitLabel::O8_2 => d(1, 0, 1, q - 1),
        LineOrbitLabel::O9 => d(1, 0, 0, q),
        LineOrbitLabel::O10 => d(0, (q + 1) / 2, (q + 1) / 2, 0),
        LineOrbitLabel::O12 => d(0, q + 1, 0, 0),
        LineOrbitLabel::O13_1 => d(0, 2, 0, q - 1),
        LineOrbitLabel::O13_2 => d(0, 1, 1, q - 1),
        LineOrbitLabel::O14_1 => d(0, 3, 0, q - 2),
        LineOrbitLabel::O14_2 => d(0, 1, 2, q - 2),
        LineOrbitLabel::O15_1 => d(0, 1, 0, q),
        LineOrbitLabel::O15_2 => d(0, 0, 1, q),
        LineOrbitLabel::O16 => d(0, 1, 0, q),
        LineOrbitLabel::O17 => d(0, 0, 0, q + 1),
    }
}

/// The point-orbit distribution of a plane orbit as a function of q. Errors
/// when the label does not exist in the characteristic of `F_q`.
pub fn expected_plane_distribution(
    label: PlaneOrbitLabel,
    q: u16,
) -> Result<OrbitDistribution, ClassifyError> {
    if !label.available_for(q) {
        return Err(ClassifyError::LabelUnavailableForCharacteristic(
            label.to_string(),
        ));
    }
    let q = q as u32;
    let d = |n1, n2, n3, n4| OrbitDistribution { n1, n2, n3, n4 };
    Ok(match label {
        PlaneOrbitLabel::Sigma1 => d(q + 1, q * (q + 1) / 2, q * (q - 1) / 2, 0),
        PlaneOrbitLabel::Sigma2 => d(3, 3 * (q - 1) / 2, 3 * (q - 1) / 2, (q - 1) * (q - 1)),
        PlaneOrbitLabel::Sigma3 | PlaneOrbitLabel::Sigma4 => {
            d(2, (3 * q - 1) / 2, (q - 1) / 2, q * q - q)
        }
        PlaneOrbitLabel::Sigma5 => d(2, q - 1, q - 1, q * q - q + 1),
        PlaneOrbitLabel::Sigma6 => d(1, (q + 1) / 2, (q + 1) / 2, q * q - 1),
        PlaneOrbitLabel::Sigma7 => d(1, q * q + q, 0, 0),
        PlaneOrbitLabel::Sigma8 | PlaneOrbitLabel::Sigma9 => d(1, 2 * q, 0, q * q - q),
        PlaneOrbitLabel::Sigma10 => d(1, q, q, q * q - q),
        PlaneOrbitLabel::Sigma11 => d(1, q, 0, q * q),
        PlaneOrbitLabel::Sigma12 => d(1, (q - 1) / 2, (q - 1) / 2, q * q + 1),
        PlaneOrbitLabel::Sigma13 => d(1, (q + 1) / 2, (q + 1) / 2, q * q - 1),
        PlaneOrbitLabel::Sigma14 => {
            if q % 3 == 1 {
                d(1, (q - 1) / 2, (q - 1) / 2, q * q + 1)
            } else {
                d(1, (q + 1) / 2, (q + 1) / 2, q * q - 1)
            }
        }
        PlaneOrbitLabel::Sigma14Prime | PlaneOrbitLabel::Sigma15 => d(1, q, 0, q * q),
    })
}

// ---------------------------------------------------------------------------
// Line classification
// ---------------------------------------------------------------------------

/// Classifies a line of `PG(5, q)` into one of the 15 orbits.
pub fn classify_line(f: &Fq, line: &Subspace<6>) -> Result<LineOrbitLabel, ClassifyError> {
    classify_line_report(f, line).map(|(l, _)| l)
}

/// As [`classify_line`], but returns the evidence report as well.
pub fn classify_line_report(
    f: &Fq,
    line: &Subspace<6>,
) -> Result<(LineOrbitLabel, ClassifyReport), ClassifyError> {
    if line.dim() != 1 {
        return Err(ClassifyError::NotALine);
    }
    let dist = distribution(f, line);
    classify_line_with_distribution_report(f, line, dist)
}

/// Fast path for audits: the caller supplies the (already computed)
/// point-orbit distribution of this line.
pub fn classify_line_with_distribution(
    f: &Fq,
    line: &Subspace<6>,
    dist: OrbitDistribution,
) -> Result<LineOrbitLabel, ClassifyError> {
    classify_line_with_distribution_report(f, line, dist).map(|(l, _)| l)
}

fn classify_line_with_distribution_report(
    f: &Fq,
    line: &Subspace<6>,
    dist: OrbitDistribution,
) -> Result<(LineOrbitLabel, ClassifyReport), ClassifyError> {
    let q = f.order();
    let mut trace = vec![format!("distribution = {dist}")];
    let mut cubic_summary = None;
    let matches: Vec<LineOrbitLabel> = ALL_LINE_LABELS
        .into_iter()
        .filter(|&l| expected_line_distribution(l, q) == dist)
        .collect();
    let label = match matches.as_slice() {
        [l] => {
            trace.push(format!("unique distribution row -> {l}"));
            *l
        }
        [LineOrbitLabel::O15_1, LineOrbitLabel::O16] => {
            let rows = line.rows();
            let cubic = det_binary_cubic(f, &rows[0], &rows[1]);
            let ftype = binary_factor_type(f, &cubic);
            cubic_summary = Some(format!(
                "binary determinant cubic {:?}, factor type {ftype:?}",
                cubic.coeffs
            ));
            match ftype {
                BinaryFactorType::OneRationalPlusIrreducibleQuadratic => {
                    trace.push(format!(
                        "distribution collision o15,1/o16; factor type {ftype:?} -> o15,1"
                    ));
                    LineOrbitLabel::O15_1
                }
                BinaryFactorType::TripleRoot => {
                    trace.push(format!(
                        "distribution collision o15,1/o16; factor type {ftype:?} -> o16"
                    ));
                    LineOrbitLabel::O16
                }
                other => {
                    return Err(ClassifyError::InternalInconsistency(format!(
                        "line with distribution {dist} has factor type {other:?}, \
                         expected a simple root with irreducible quadratic or a triple root"
                    )));
                }
            }
        }
        [] => {
            return Err(ClassifyError::InternalInconsistency(format!(
                "line distribution {dist} matches no orbit row at q = {q}"
            )));
        }
        many => {
            return Err(ClassifyError::InternalInconsistency(format!(
                "line distribution {dist} matches several rows {many:?} at q = {q}"
            )));
        }
    };
    let report = ClassifyReport {
        label: label.to_string(),
        distribution: dist,
        cubic_summary,
        trace,
    };
    Ok((label, report))
}

// ---------------------------------------------------------------------------
// Plane classification
// ---------------------------------------------------------------------------

/// Classifies a plane of `PG(5, q)`: an orbit label when it meets the
/// Veronese surface, `NotMeetingVeronesean` otherwise.
pub fn classify_plane(f: &Fq, plane: &Subspace<6>) -> Result<PlaneOutcome, ClassifyError> {
    classify_plane_report(f, plane).map(|(o, _)| o)
}

/// As [`classify_plane`], but returns the evidence report as well.
pub fn classify_plane_report(
    f: &Fq,
    plane: &Subspace<6>,
) -> Result<(PlaneOutcome, ClassifyReport), ClassifyError> {
    if plane.dim() != 2 {
        return Err(ClassifyError::NotAPlane);
    }
    let dist = distribution(f, plane);
    classify_plane_with_distribution_report(f, plane, dist)
}

/// Fast path for audits: the caller supplies the plane's distribution.
pub fn classify_plane_with_distribution(
    f: &Fq,
    plane: &Subspace<6>,
    dist: OrbitDistribution,
) -> Result<PlaneOutcome, ClassifyError> {
    classify_plane_with_distribution_report(f, plane, dist).map(|(o, _)| o)
}

fn classify_plane_with_distribution_report(
    f: &Fq,
    plane: &Subspace<6>,
    dist: OrbitDistribution,
) -> Result<(PlaneOutcome, ClassifyReport), ClassifyError> {
    let q = f.order() as u32;
    let mut trace = vec![format!("distribution = {dist}")];
    let mut cubic_summary = None;

    let outcome = 'tree: {
        if dist.n1 == 0 {
            trace.push("no rank-1 point -> plane misses the Veronese surface".into());
            break 'tree PlaneOutcome::NotMeetingVeronesean;
        }
        if dist.n1 == q + 1 {
            expect_row(f, dist, PlaneOrbitLabel::Sigma1, &mut trace)?;
            break 'tree PlaneOutcome::Orbit(PlaneOrbitLabel::Sigma1);
        }
        if dist.n1 == 3 {
            expect_row(f, dist, PlaneOrbitLabel::Sigma2, &mut trace)?;
            break 'tree PlaneOutcome::Orbit(PlaneOrbitLabel::Sigma2);
        }
        if dist.n1 == 2 {
            if dist == expected_plane_distribution(PlaneOrbitLabel::Sigma5, f.order()).unwrap() {
                trace.push("two rank-1 points with balanced rank-2 row -> Sigma5".into());
                break 'tree PlaneOutcome::Orbit(PlaneOrbitLabel::Sigma5);
            }
            if dist != expected_plane_distribution(PlaneOrbitLabel::Sigma3, f.order()).unwrap() {
                return Err(ClassifyError::InternalInconsistency(format!(
                    "plane distribution {dist} has two rank-1 points but matches no row"
                )));
            }
            // Sigma3 vs Sigma4: their determinant cubic is a simple line
            // plus a double line; the simple component spans a line of
            // PG(5,q) through a rank-1 point exactly in the Sigma3 case.
            let (profile, _) = plane_profile(f, plane)?;
            cubic_summary = Some(profile_summary(&profile));
            let simple: Vec<&([Elt; 3], u32)> = profile
                .linear_components
                .iter()
                .filter(|&&(_, m)| m == 1)
                .collect();
            let [(l, _)] = simple.as_slice() else {
                return Err(ClassifyError::InternalInconsistency(format!(
                    "two-point plane with components {:?}; expected simple + double line",
                    profile.linear_components
                )));
            };
            let label = if param_line_contains_rank1(f, plane, l) {
                trace.push(
                    "simple cubic component spans a line through a rank-1 point -> Sigma3".into(),
                );
                PlaneOrbitLabel::Sigma3
            } else {
                trace.push(
                    "simple cubic component spans a line avoiding rank-1 points -> Sigma4".into(),
                );
                PlaneOrbitLabel::Sigma4
            };
            break 'tree PlaneOutcome::Orbit(label);
        }
        if dist.n1 != 1 {
            return Err(ClassifyError::InternalInconsistency(format!(
                "plane distribution {dist} has n1 = {}, outside {{0,1,2,3,q+1}}",
                dist.n1
            )));
        }

        // n1 = 1 families, by the remaining three counts
        let row = |label| expected_plane_distribution(label, f.order()).unwrap();
        if dist == row(PlaneOrbitLabel::Sigma7) {
            trace.push("all other points rank 2 -> Sigma7 (tangent plane)".into());
            break 'tree PlaneOutcome::Orbit(PlaneOrbitLabel::Sigma7);
        }
        if dist == row(PlaneOrbitLabel::Sigma10) {
            trace.push("rank-2 row [q, q] -> Sigma10".into());
            break 'tree PlaneOutcome::Orbit(PlaneOrbitLabel::Sigma10);
        }
        if dist == row(PlaneOrbitLabel::Sigma8) {
            // Sigma8 vs Sigma9: union of lines vs line + nondegenerate conic
            let (profile, _) = plane_profile(f, plane)?;
            cubic_summary = Some(profile_summary(&profile));
            if profile.linear_components.is_empty() {
                return Err(ClassifyError::InternalInconsistency(
                    "plane in the Sigma8/Sigma9 row has an irreducible determinant cubic".into(),
                ));
            }
            let label = match &profile.residual {
                Some(r) if r.nondegenerate => {
                    trace.push("cubic = line + nondegenerate conic -> Sigma9".into());
                    PlaneOrbitLabel::Sigma9
                }
                _ => {
                    trace.push("determinant cubic is a union of lines -> Sigma8".into());
                    PlaneOrbitLabel::Sigma8
                }
            };
            break 'tree PlaneOutcome::Orbit(label);
        }
        if dist == row(PlaneOrbitLabel::Sigma13) {
            // Sigma6 (cubic has a linear component) vs Sigma13 vs Sigma14
            let (profile, _) = plane_profile(f, plane)?;
            cubic_summary = Some(profile_summary(&profile));
            if !profile.linear_components.is_empty() {
                trace.push("determinant cubic has a linear component -> Sigma6".into());
                break 'tree PlaneOutcome::Orbit(PlaneOrbitLabel::Sigma6);
            }
            if q % 3 != 2 {
                // Sigma14 occupies this row only when q ≡ 2 mod 3
                trace.push("irreducible cubic, q !≡ 2 mod 3 -> Sigma13".into());
                break 'tree PlaneOutcome::Orbit(PlaneOrbitLabel::Sigma13);
            }
            let label = match profile.inflexions {
                InflexionCount::Count(3) => PlaneOrbitLabel::Sigma13,
                InflexionCount::Count(0) => PlaneOrbitLabel::Sigma14,
                other => {
                    return Err(ClassifyError::InternalInconsistency(format!(
                        "irreducible cubic in the Sigma13/Sigma14 row has inflexions \
                         {other:?}; expected 3 or 0"
                    )));
                }
            };
            trace.push(format!("rational inflexion count -> {label}"));
            break 'tree PlaneOutcome::Orbit(label);
        }
        if dist == row(PlaneOrbitLabel::Sigma12) {
            if q % 3 != 1 {
                trace.push("rank-2 row [(q-1)/2, (q-1)/2], q !≡ 1 mod 3 -> Sigma12".into());
                break 'tree PlaneOutcome::Orbit(PlaneOrbitLabel::Sigma12);
            }
            let (profile, _) = plane_profile(f, plane)?;
            cubic_summary = Some(profile_summary(&profile));
            let label = match profile.inflexions {
                InflexionCount::Count(3) => PlaneOrbitLabel::Sigma12,
                InflexionCount::Count(0) => PlaneOrbitLabel::Sigma14,
                other => {
                    return Err(ClassifyError::InternalInconsistency(format!(
                        "cubic in the Sigma12/Sigma14 row has inflexions {other:?}; \
                         expected 3 or 0"
                    )));
                }
            };
            trace.push(format!("rational inflexion count -> {label}"));
            break 'tree PlaneOutcome::Orbit(label);
        }
        if dist == row(PlaneOrbitLabel::Sigma15) {
            // Sigma15 (triple line) vs Sigma11 vs, in characteristic 3, Sigma14'
            let (profile, _) = plane_profile(f, plane)?;
            cubic_summary = Some(profile_summary(&profile));
            if profile.linear_components.iter().any(|&(_, m)| m == 3) {
                trace.push("determinant cubic is a triple line -> Sigma15".into());
                break 'tree PlaneOutcome::Orbit(PlaneOrbitLabel::Sigma15);
            }
            if f.characteristic() != 3 {
                trace.push("cubic not a triple line, p != 3 -> Sigma11".into());
                break 'tree PlaneOutcome::Orbit(PlaneOrbitLabel::Sigma11);
            }
            let label = if has_two_point_secant(f, plane) {
                trace.push(
                    "some line on two rank-2 points avoiding the rank-1 point carries \
                     exactly two low-rank points -> Sigma11"
                        .into(),
                );
                PlaneOrbitLabel::Sigma11
            } else {
                trace.push(
                    "every line on two rank-2 points avoiding the rank-1 point carries \
                     three low-rank points -> Sigma14'"
                        .into(),
                );
                PlaneOrbitLabel::Sigma14Prime
            };
            break 'tree PlaneOutcome::Orbit(label);
        }
        return Err(ClassifyError::InternalInconsistency(format!(
            "plane distribution {dist} with a single rank-1 point matches no row at q = {q}"
        )));
    };

    let report = ClassifyReport {
        label: outcome.to_string(),
        distribution: dist,
        cubic_summary,
        trace,
    };
    Ok((outcome, report))
}

/// Guards branches that are forced by a single count: the full distribution
/// must still agree with the table row.
fn expect_row(
    f: &Fq,
    dist: OrbitDistribution,
    label: PlaneOrbitLabel,
    trace: &mut Vec<String>,
) -> Result<(), ClassifyError> {
    let expected = expected_plane_distribution(label, f.order()).unwrap();
    if dist != expected {
        return Err(ClassifyError::InternalInconsistency(format!(
            "distribution {dist} was routed to {label} but the table row is {expected}"
        )));
    }
    trace.push(format!("distribution row -> {label}"));
    Ok(())
}

fn plane_profile(
    f: &Fq,
    plane: &Subspace<6>,
) -> Result<(CubicProfile, TernaryCubic), ClassifyError> {
    let rows = plane.rows();
    let cubic = det_cubic(f, &rows[0], &rows[1], &rows[2])
        .expect("an echelonized plane basis is independent");
    let profile = cubic_profile(f, &cubic).map_err(|e| {
        ClassifyError::InternalInconsistency(format!(
            "determinant cubic of a plane meeting the Veronese surface in finitely many \
             points cannot be zero: {e}"
        ))
    })?;
    Ok((profile, cubic))
}

fn profile_summary(p: &CubicProfile) -> String {
    format!(
        "components {:?}; residual nondegenerate: {:?}; singular points {}; inflexions {:?}",
        p.linear_components,
        p.residual.as_ref().map(|r| r.nondegenerate),
        p.singular_points.len(),
        p.inflexions
    )
}

/// Maps a linear component of the determinant cubic (a line of the parameter
/// plane) to the corresponding line of the plane in `PG(5, q)` and reports
/// whether it passes through a rank-1 point.
fn param_line_contains_rank1(f: &Fq, plane: &Subspace<6>, l: &[Elt; 3]) -> bool {
    let rows = plane.rows();
    let params = nullspace::<3>(f, &[*l]);
    debug_assert_eq!(params.len(), 2);
    let image = |t: &[Elt; 3]| -> Sym3 {
        let mut m = [0; 6];
        for (i, mi) in m.iter_mut().enumerate() {
            *mi = f.add(
                f.mul(t[0], rows[0][i]),
                f.add(f.mul(t[1], rows[1][i]), f.mul(t[2], rows[2][i])),
            );
        }
        m
    };
    let line = Subspace::span(f, &[image(&params[0]), image(&params[1])])
        .expect("nullspace basis is nonzero");
    line.points(f).iter().any(|p| sym3_rank(f, p) == 1)
}

/// The characteristic-3 separator for the `[1, q, 0, q²]` row: does some
/// line spanned by two rank-2 points of the plane, not passing through its
/// rank-1 point, carry exactly two points of rank ≤ 2?
fn has_two_point_secant(f: &Fq, plane: &Subspace<6>) -> bool {
    let pts = plane.points(f);
    let mut rank1 = None;
    let mut rank2 = Vec::new();
    for p in &pts {
        match sym3_rank(f, p) {
            1 => rank1 = Some(*p),
            2 => rank2.push(*p),
            _ => {}
        }
    }
    let rank1 = rank1.expect("branch requires n1 = 1");
    for (i, y) in rank2.iter().enumerate() {
        for z in &rank2[i + 1..] {
            let line = Subspace::span(f, &[*y, *z]).expect("distinct points");
            if line.contains(f, &rank1) {
                continue;
            }
            let low = line
                .points(f)
                .iter()
                .filter(|p| sym3_rank(f, p) <= 2)
                .count();
            if low == 2 {
                return true;
            }
        }
    }
    false
}

/// Classifies a net of conics via its plane of half-Gram matrices.
pub fn classify_net(f: &Fq, net: &Net) -> Result<PlaneOrbitLabel, ClassifyError> {
    classify_net_report(f, net).map(|(l, _)| l)
}

/// As [`classify_net`], but returns the evidence report as well.
pub fn classify_net_report(
    f: &Fq,
    net: &Net,
) -> Result<(PlaneOrbitLabel, ClassifyReport), ClassifyError> {
    let plane =
        crate::veronese::net_to_plane(f, net).map_err(|_| ClassifyError::DependentForms)?;
    let (outcome, report) = classify_plane_report(f, &plane)?;
    match outcome {
        PlaneOutcome::Orbit(label) => Ok((label, report)),
        PlaneOutcome::NotMeetingVeronesean => Err(ClassifyError::NotRankOne),
    }
}

// ---------------------------------------------------------------------------
// Representatives
// ---------------------------------------------------------------------------

/// Does `c` define a two-secant plane of the exceptional kind: `c ∉ {0, 1}`,
/// `−3c` a nonzero square, and `(√c + 1)/(√c − 1)` not a cube in `F_q(√−3)`?
/// Always false in characteristic 3. The two sign choices of `√c` give
/// reciprocal ratios and cube-ness is inversion-invariant, so the test is
/// well defined.
pub fn sigma14_condition_holds(f: &Fq, c: Elt) -> bool {
    if f.characteristic() == 3 || c == 0 || c == 1 {
        return false;
    }
    let minus3 = f.from_int(-3);
    if f.legendre_class(f.mul(minus3, c)) != LegendreClass::Square {
        return false;
    }
    let ratio = match f.sqrt(c) {
        Some(r) => {
            // √c rational; the ratio lives in the base field
            SqrtM3Elt::Base(f.div(f.add(r, 1), f.sub(r, 1)))
        }
        None => {
            // c a non-square with −3c a square forces −3 a non-square, and
            // √c = t·√−3 for rational t with t² = c/(−3)
            let t = f
                .sqrt(f.div(c, minus3))
                .expect("c/(−3) is a ratio of non-squares");
            let ext = QuadExt::new(f, minus3);
            let num = QElt { a: 1, b: t };
            let den = QElt { a: f.neg(1), b: t };
            let r = ext.mul(num, ext.checked_inv(den).expect("den has nonzero norm"));
            SqrtM3Elt::Ext(r.a, r.b)
        }
    };
    !is_cube_in_sqrt_minus3(f, ratio).expect("ratio is nonzero")
}

/// The least `c` (in element order) satisfying the two-secant-plane
/// condition. Errors in characteristic 3, where no `c` qualifies.
pub fn sigma14_admissible_c(f: &Fq) -> Result<Elt, ClassifyError> {
    if f.characteristic() == 3 {
        return Err(ClassifyError::LabelUnavailableForCharacteristic(
            PlaneOrbitLabel::Sigma14.to_string(),
        ));
    }
    f.elements()
        .find(|&c| sigma14_condition_holds(f, c))
        .ok_or(ClassifyError::NoAdmissibleC)
}

/// Condition on the pencil parameters `(u, v)`: `vλ² + uvλ − 1` has no root.
fn pencil_condition_holds(f: &Fq, u: Elt, v: Elt) -> bool {
    let uv = f.mul(u, v);
    f.elements().all(|lam| {
        let val = f.sub(f.add(f.mul(v, f.mul(lam, lam)), f.mul(uv, lam)), 1);
        val != 0
    })
}

/// Least `(u, v)` (u-major order) with `v ≠ 0` whose pencil quadratic
/// `vλ² + uvλ − 1` is root-free.
pub fn o10_parameters(f: &Fq) -> Result<(Elt, Elt), ClassifyError> {
    for u in f.elements() {
        for v in f.elements() {
            if v != 0 && pencil_condition_holds(f, u, v) {
                return Ok((u, v));
            }
        }
    }
    Err(ClassifyError::ParameterSearchFailed)
}

/// Least `(u, v)` with `−v` a square (`minus_v_square`) or non-square and a
/// root-free pencil quadratic.
pub fn o15_parameters(f: &Fq, minus_v_square: bool) -> Result<(Elt, Elt), ClassifyError> {
    let want = if minus_v_square {
        LegendreClass::Square
    } else {
        LegendreClass::NonSquare
    };
    for u in f.elements() {
        for v in f.elements() {
            if f.legendre_class(f.neg(v)) == want && pencil_condition_holds(f, u, v) {
                return Ok((u, v));
            }
        }
    }
    Err(ClassifyError::ParameterSearchFailed)
}

/// Least `(u, v, w)` making `λ³ + wλ² − uλ + v` root-free over `F_q`.
pub fn o17_parameters(f: &Fq) -> Result<(Elt, Elt, Elt), ClassifyError> {
    for u in f.elements() {
        for v in f.elements() {
            for w in f.elements() {
                let root_free = f.elements().all(|lam| {
                    let l2 = f.mul(lam, lam);
                    let val = f.add(
                        f.add(f.mul(lam, l2), f.mul(w, l2)),
                        f.add(f.neg(f.mul(u, lam)), v),
                    );
                    val != 0
                });
                if root_free {
                    return Ok((u, v, w));
                }
            }
        }
    }
    Err(ClassifyError::ParameterSearchFailed)
}

/// The reference plane of an orbit, with `ε` the canonical non-square and,
/// for `Sigma14`, the least admissible `c`.
pub fn plane_representative(
    f: &Fq,
    label: PlaneOrbitLabel,
) -> Result<Subspace<6>, ClassifyError> {
    if !label.available_for(f.order()) {
        return Err(ClassifyError::LabelUnavailableForCharacteristic(
            label.to_string(),
        ));
    }
    let e = f.canonical_nonsquare();
    let n1 = f.neg(1);
    let rows: [Sym3; 3] = match label {
        PlaneOrbitLabel::Sigma1 => [
            [1, 0, 0, 0, 0, 0],
            [0, 0, 0, 1, 0, 0],
            [0, 1, 0, 0, 0, 0],
        ],
        PlaneOrbitLabel::Sigma2 => [
            [1, 0, 0, 0, 0, 0],
            [0, 0, 0, 1, 0, 0],
            [0, 0, 0, 0, 0, 1],
        ],
        PlaneOrbitLabel::Sigma3 => [
            [1, 0, 0, 0, 0, 0],
            [0, 0, 0, 1, 0, 0],
            [0, 0, 1, 0, 0, 0],
        ],
        PlaneOrbitLabel::Sigma4 => [
            [1, 0, 0, 0, 0, 0],
            [0, 0, 0, 1, 0, 0],
            [0, 0, 1, 0, 1, 0],
        ],
        PlaneOrbitLabel::Sigma5 => [
            [1, 0, 0, 0, 0, 0],
            [0, 0, 0, 1, 0, 0],
            [0, 0, 1, 0, 1, 1],
        ],
        PlaneOrbitLabel::Sigma6 => [
            [1, 0, 0, e, 0, 0],
            [0, 1, 0, 0, 0, 0],
            [0, 0, 0, 0, 0, 1],
        ],
        PlaneOrbitLabel::Sigma7 => [
            [1, 0, 0, 0, 0, 0],
            [0, 1, 0, 0, 0, 0],
            [0, 0, 1, 0, 0, 0],
        ],
        PlaneOrbitLabel::Sigma8 => [
            [1, 0, 0, 0, 0, 0],
            [0, 1, 0, 0, 0, 0],
            [0, 0, 0, 0, 1, 0],
        ],
        PlaneOrbitLabel::Sigma9 => [
            [1, 0, 0, 0, 0, 0],
            [0, 1, 0, 0, 0, 0],
            [0, 0, 0, 1, 0, n1],
        ],
        PlaneOrbitLabel::Sigma10 => [
            [1, 0, 0, 0, 0, 0],
            [0, 1, 0, 0, 0, 0],
            [0, 0, 0, 1, 0, f.neg(e)],
        ],
        PlaneOrbitLabel::Sigma11 => [
            [0, 0, 0, 1, 1, 1],
            [0, 1, 0, 0, 0, 0],
            [0, 0, 1, 0, 0, 1],
        ],
        PlaneOrbitLabel::Sigma12 => [
            [1, 0, 0, 0, 0, 0],
            [0, 1, 0, 0, 1, 0],
            [0, 0, 0, 1, 0, 1],
        ],
        PlaneOrbitLabel::Sigma13 => [
            [1, 0, 0, 0, 0, 0],
            [0, 1, 0, 0, 1, 0],
            [0, 0, 0, 1, 0, e],
        ],
        PlaneOrbitLabel::Sigma14 => {
            let c = sigma14_admissible_c(f)?;
            [
                [1, 0, 0, 0, 0, 0],
                [0, 1, 0, 0, 1, 0],
                [0, 0, 0, c, n1, 1],
            ]
        }
        PlaneOrbitLabel::Sigma14Prime => [
            [1, 0, 0, 0, 0, 0],
            [0, 0, 0, 1, 0, n1],
            [1, 1, 1, 1, 1, 0],
        ],
        PlaneOrbitLabel::Sigma15 => [
            [1, 0, 0, 0, 0, 0],
            [0, 1, 0, 0, 0, 0],
            [0, 0, 1, 1, 0, 0],
        ],
    };
    let s = Subspace::span(f, &rows).expect("representative rows are nonzero");
    debug_assert_eq!(s.dim(), 2, "representative rows are independent");
    Ok(s)
}

/// The reference line of an orbit, with `ε` the canonical non-square and
/// searched parameters where the table requires them.
pub fn line_representative(
    f: &Fq,
    label: LineOrbitLabel,
) -> Result<Subspace<6>, ClassifyError> {
    let e = f.canonical_nonsquare();
    let n1 = f.neg(1);
    let rows: [Sym3; 2] = match label {
        LineOrbitLabel::O5 => [[1, 0, 0, 0, 0, 0], [0, 0, 0, 1, 0, 0]],
        LineOrbitLabel::O6 => [[1, 0, 0, 0, 0, 0], [0, 1, 0, 0, 0, 0]],
        LineOrbitLabel::O8_1 => [[1, 0, 0, 0, 0, 0], [0, 0, 0, 1, 0, n1]],
        LineOrbitLabel::O8_2 => [[1, 0, 0, 0, 0, 0], [0, 0, 0, 1, 0, f.neg(e)]],
        LineOrbitLabel::O9 => [[1, 0, 0, 0, 0, 0], [0, 0, 1, 1, 0, 0]],
        LineOrbitLabel::O10 => {
            let (u, v) = o10_parameters(f)?;
            [[v, 0, 0, 1, 0, 0], [0, 1, 0, u, 0, 0]]
        }
        LineOrbitLabel::O12 => [[0, 1, 0, 0, 0, 0], [0, 0, 0, 0, 1, 0]],
        LineOrbitLabel::O13_1 => [[0, 1, 0, 0, 0, 0], [0, 0, 0, 1, 0, n1]],
        LineOrbitLabel::O13_2 => [[0, 1, 0, 0, 0, 0], [0, 0, 0, 1, 0, f.neg(e)]],
        LineOrbitLabel::O14_1 => [[1, 0, 0, n1, 0, 0], [0, 0, 0, n1, 0, 1]],
        LineOrbitLabel::O14_2 => {
            let ne = f.neg(e);
            [[1, 0, 0, ne, 0, 0], [0, 0, 0, ne, 0, 1]]
        }
        LineOrbitLabel::O15_1 => {
            let (u, v) = o15_parameters(f, true)?;
            [[0, 1, 0, u, 0, 1], [v, 0, 0, 1, 0, 0]]
        }
        LineOrbitLabel::O15_2 => {
            let (u, v) = o15_parameters(f, false)?;
            [[0, 1, 0, u, 0, 1], [v, 0, 0, 1, 0, 0]]
        }
        LineOrbitLabel::O16 => [[0, 0, 1, 1, 0, 0], [0, 0, 0, 0, 1, 0]],
        LineOrbitLabel::O17 => {
            let (u, v, w) = o17_parameters(f)?;
            [[f.inv(v), 0, 0, f.neg(w), 1, 0], [0, 1, 0, u, 0, 1]]
        }
    };
    let s = Subspace::span(f, &rows).expect("representative rows are nonzero");
    debug_assert_eq!(s.dim(), 1, "representative rows are independent");
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::veronese::{act_subspace_unchecked, classify_point, veronese, Mat3, PointClass};
    use rand::rngs::SmallRng;
    use rand::{Rng, SeedableRng};
    use std::collections::HashSet;

    #[test]
    fn labels_render_and_parse() {
        for l in ALL_LINE_LABELS {
            assert_eq!(l.to_string().parse::<LineOrbitLabel>().unwrap(), l);
        }
        for l in ALL_PLANE_LABELS {
            assert_eq!(l.to_string().parse::<PlaneOrbitLabel>().unwrap(), l);
        }
        assert_eq!("o8_1".parse::<LineOrbitLabel>().unwrap(), LineOrbitLabel::O8_1);
        assert_eq!("O13.2".parse::<LineOrbitLabel>().unwrap(), LineOrbitLabel::O13_2);
        assert_eq!(
            "sigma14prime".parse::<PlaneOrbitLabel>().unwrap(),
            PlaneOrbitLabel::Sigma14Prime
        );
        assert_eq!(
            "Σ14'".parse::<PlaneOrbitLabel>().unwrap(),
            PlaneOrbitLabel::Sigma14Prime
        );
        assert_eq!("σ3".parse::<PlaneOrbitLabel>().unwrap(), PlaneOrbitLabel::Sigma3);
        assert!("o7".parse::<LineOrbitLabel>().is_err());
        assert!("Sigma16".parse::<PlaneOrbitLabel>().is_err());
    }

    #[test]
    fn distribution_rows_sum_to_the_point_counts() {
        for q in [3u16, 5, 7, 9, 11, 13, 25, 27, 169] {
            for l in ALL_LINE_LABELS {
                assert_eq!(expected_line_distribution(l, q).total(), q as u32 + 1);
            }
            for l in ALL_PLANE_LABELS {
                if !l.available_for(q) {
                    continue;
                }
                let d = expected_plane_distribution(l, q).unwrap();
                let q = q as u32;
                assert_eq!(d.total(), q * q + q + 1, "{l} at q = {q}");
            }
        }
    }

    #[test]
    fn representatives_round_trip_all_labels() {
        for (p, e) in [(3u32, 1u32), (5, 1), (7, 1), (3, 2), (11, 1), (13, 1)] {
            let f = Fq::new(p, e).unwrap();
            let q = f.order();
            for label in ALL_LINE_LABELS {
                let rep = line_representative(&f, label).unwrap();
                assert_eq!(
                    distribution(&f, &rep),
                    expected_line_distribution(label, q),
                    "{label} at q = {q}"
                );
                assert_eq!(classify_line(&f, &rep).unwrap(), label, "q = {q}");
            }
            for label in ALL_PLANE_LABELS {
                if !label.available_for(q) {
                    assert!(matches!(
                        plane_representative(&f, label),
                        Err(ClassifyError::LabelUnavailableForCharacteristic(_))
                    ));
                    continue;
                }
                let rep = plane_representative(&f, label).unwrap();
                assert_eq!(
                    distribution(&f, &rep),
                    expected_plane_distribution(label, q).unwrap(),
                    "{label} at q = {q}"
                );
                assert_eq!(
                    classify_plane(&f, &rep).unwrap(),
                    PlaneOutcome::Orbit(label),
                    "q = {q}"
                );
            }
        }
    }

    /// Larger extension fields: a cheap sweep at q = 25, 27 and a smoke test
    /// at the maximum supported order.
    #[test]
    fn representatives_round_trip_extension_fields() {
        for (p, e) in [(5u32, 2u32), (3, 3)] {
            let f = Fq::new(p, e).unwrap();
            let q = f.order();
            for label in ALL_PLANE_LABELS {
                if !label.available_for(q) {
                    continue;
                }
                let rep = plane_representative(&f, label).unwrap();
                assert_eq!(
                    classify_plane(&f, &rep).unwrap(),
                    PlaneOutcome::Orbit(label),
                    "{label} at q = {q}"
                );
            }
            for label in [LineOrbitLabel::O5, LineOrbitLabel::O10, LineOrbitLabel::O17] {
                let rep = line_representative(&f, label).unwrap();
                assert_eq!(classify_line(&f, &rep).unwrap(), label, "q = {q}");
            }
        }
        let f = Fq::new(13, 2).unwrap();
        for label in [
            PlaneOrbitLabel::Sigma1,
            PlaneOrbitLabel::Sigma2,
            PlaneOrbitLabel::Sigma7,
        ] {
            let rep = plane_representative(&f, label).unwrap();
            assert_eq!(
                distribution(&f, &rep),
                expected_plane_distribution(label, 169).unwrap()
            );
        }
        let rep = line_representative(&f, LineOrbitLabel::O9).unwrap();
        assert_eq!(classify_line(&f, &rep).unwrap(), LineOrbitLabel::O9);
    }

    #[test]
    fn frozen_search_parameters() {
        let f5 = Fq::new(5, 1).unwrap();
        let f7 = Fq::new(7, 1).unwrap();
        let f3 = Fq::new(3, 1).unwrap();
        assert_eq!(sigma14_admissible_c(&f7).unwrap(), 2);
        assert_eq!(sigma14_admissible_c(&f5).unwrap(), 2);
        assert_eq!(o10_parameters(&f5).unwrap(), (0, 2));
        assert_eq!(o15_parameters(&f5, true).unwrap(), (1, 4));
        assert_eq!(o17_parameters(&f3).unwrap(), (0, 1, 2));
        assert!(matches!(
            sigma14_admissible_c(&f3),
            Err(ClassifyError::LabelUnavailableForCharacteristic(_))
        ));
        assert!(matches!(
            sigma14_admissible_c(&Fq::new(3, 2).unwrap()),
            Err(ClassifyError::LabelUnavailableForCharacteristic(_))
        ));
        // no element satisfies the condition in characteristic 3
        let f9 = Fq::new(3, 2).unwrap();
        assert!(f9.elements().all(|c| !sigma14_condition_holds(&f9, c)));
    }

    #[test]
    fn net_classification_and_rank_one_scope() {
        let f = Fq::new(5, 1).unwrap();
        // X₀², X₁², X₂² — the diagonal net
        let net = Net {
            forms: [
                [1, 0, 0, 0, 0, 0],
                [0, 0, 0, 1, 0, 0],
                [0, 0, 0, 0, 0, 1],
            ],
        };
        assert_eq!(classify_net(&f, &net).unwrap(), PlaneOrbitLabel::Sigma2);
        // X₀², X₀X₁, X₀X₂ — half-Gram span is the plane tangent to the surface
        let net = Net {
            forms: [
                [1, 0, 0, 0, 0, 0],
                [0, 1, 0, 0, 0, 0],
                [0, 0, 1, 0, 0, 0],
            ],
        };
        assert_eq!(classify_net(&f, &net).unwrap(), PlaneOrbitLabel::Sigma7);
        // dependent forms
        let net = Net {
            forms: [
                [1, 0, 0, 0, 0, 0],
                [2, 0, 0, 0, 0, 0],
                [0, 0, 1, 0, 0, 0],
            ],
        };
        assert_eq!(
            classify_net(&f, &net).unwrap_err(),
            ClassifyError::DependentForms
        );
        // the net (X₀X₁, X₀X₂, X₁X₂): its Gram span is the zero-diagonal
        // plane, and a rank-1 symmetric matrix with zero diagonal is zero —
        // so the net has no repeated line and sits outside the classification
        let net = Net {
            forms: [
                [0, 1, 0, 0, 0, 0],
                [0, 0, 1, 0, 0, 0],
                [0, 0, 0, 0, 1, 0],
            ],
        };
        assert_eq!(classify_net(&f, &net).unwrap_err(), ClassifyError::NotRankOne);
        let plane = crate::veronese::net_to_plane(
            &f,
            &Net {
                forms: [
                    [0, 1, 0, 0, 0, 0],
                    [0, 0, 1, 0, 0, 0],
                    [0, 0, 0, 0, 1, 0],
                ],
            },
        )
        .unwrap();
        assert_eq!(
            classify_plane(&f, &plane).unwrap(),
            PlaneOutcome::NotMeetingVeronesean
        );
    }

    #[test]
    fn reports_carry_traces() {
        let f = Fq::new(5, 1).unwrap();
        let rep = plane_representative(&f, PlaneOrbitLabel::Sigma9).unwrap();
        let (outcome, report) = classify_plane_report(&f, &rep).unwrap();
        assert_eq!(outcome, PlaneOutcome::Orbit(PlaneOrbitLabel::Sigma9));
        assert_eq!(report.label, "Sigma9");
        assert!(report.trace.len() >= 2);
        assert!(report.cubic_summary.is_some());

        let rep = line_representative(&f, LineOrbitLabel::O16).unwrap();
        let (label, report) = classify_line_report(&f, &rep).unwrap();
        assert_eq!(label, LineOrbitLabel::O16);
        assert!(report.cubic_summary.unwrap().contains("TripleRoot"));

        // dimension guards
        let line = line_representative(&f, LineOrbitLabel::O5).unwrap();
        assert_eq!(
            classify_plane(&f, &line).unwrap_err(),
            ClassifyError::NotAPlane
        );
        let plane = plane_representative(&f, PlaneOrbitLabel::Sigma1).unwrap();
        assert_eq!(
            classify_line(&f, &plane).unwrap_err(),
            ClassifyError::NotALine
        );
    }

    #[test]
    fn classification_is_action_invariant_sampled() {
        let mut rng = SmallRng::seed_from_u64(0x1D107);
        for p in [5u32, 7] {
            let f = Fq::new(p, 1).unwrap();
            for label in ALL_PLANE_LABELS {
                if !label.available_for(f.order()) {
                    continue;
                }
                let rep = plane_representative(&f, label).unwrap();
                for _ in 0..25 {
                    let a = random_invertible(&f, &mut rng);
                    let image = act_subspace_unchecked(&f, &a, &rep);
                    assert_eq!(
                        classify_plane(&f, &image).unwrap(),
                        PlaneOutcome::Orbit(label),
                        "{label} at q = {p}"
                    );
                }
            }
            for label in ALL_LINE_LABELS {
                let rep = line_representative(&f, label).unwrap();
                for _ in 0..25 {
                    let a = random_invertible(&f, &mut rng);
                    let image = act_subspace_unchecked(&f, &a, &rep);
                    assert_eq!(classify_line(&f, &image).unwrap(), label, "q = {p}");
                }
            }
        }
    }

    /// Lines through the rank-1 point of a two-secant-family plane: all are
    /// rank-1-tangent pencil lines, except that a square parameter `c`
    /// produces exactly two lines meeting the surface in one further point.
    #[test]
    fn pencil_planes_have_the_expected_lines_through_their_rank1_point() {
        for (p, c, expected_o9) in [(7u32, 2 as Elt, 2usize), (5, 2, 0), (5, 4, 2)] {
            let f = Fq::new(p, 1).unwrap();
            let rows: [Sym3; 3] = [
                [1, 0, 0, 0, 0, 0],
                [0, 1, 0, 0, 1, 0],
                [0, 0, 0, c, f.neg(1), 1],
            ];
            let plane = Subspace::span(&f, &rows).unwrap();
            let pts = plane.points(&f);
            let rank1: Vec<_> = pts
                .iter()
                .filter(|m| crate::geometry::sym3_rank(&f, m) == 1)
                .collect();
            assert_eq!(rank1.len(), 1);
            let x = *rank1[0];
            let mut lines = HashSet::new();
            for ptest in &pts {
                if *ptest == x {
                    continue;
                }
                lines.insert(Subspace::span(&f, &[x, *ptest]).unwrap());
            }
            assert_eq!(lines.len(), p as usize + 1);
            let mut o9 = 0;
            for line in &lines {
                match classify_line(&f, line).unwrap() {
                    LineOrbitLabel::O8_1 | LineOrbitLabel::O8_2 => {}
                    LineOrbitLabel::O9 => o9 += 1,
                    other => panic!("line through the rank-1 point classified {other}"),
                }
            }
            assert_eq!(o9, expected_o9, "q = {p}, c = {c}");
        }
    }

    /// Exhaustive at q = 3: every line spanned by two rank-2 points with
    /// distinct kernels is a conic-pair line (o12, o13,*, o14,*), and its
    /// subtype is read off tangent membership at the common surface point.
    #[test]
    fn conic_pair_lines_match_tangent_membership_q3() {
        let f = Fq::new(3, 1).unwrap();
        let mut seen = [0usize; 3];
        for line in crate::geometry::SubspaceIter::<6>::new(&f, 1) {
            let pts = line.points(&f);
            let mut pairs: Vec<(Sym3, [Elt; 3])> = Vec::new();
            for m in &pts {
                if crate::geometry::sym3_rank(&f, m) == 2 {
                    let kernel = nullspace::<3>(&f, &crate::veronese::sym3_unpack(m))[0];
                    pairs.push((*m, kernel));
                }
            }
            // keep lines with at least two rank-2 points of distinct kernels
            let distinct = pairs
                .iter()
                .any(|(_, k)| pairs.iter().any(|(_, k2)| k2 != k));
            if !distinct {
                continue;
            }
            let label = classify_line(&f, &line).unwrap();
            let class = match label {
                LineOrbitLabel::O12 => 0,
                LineOrbitLabel::O13_1 | LineOrbitLabel::O13_2 => 1,
                LineOrbitLabel::O14_1 | LineOrbitLabel::O14_2 => 2,
                other => panic!("conic-pair line classified {other}"),
            };
            seen[class] += 1;
            for (i, (y, ky)) in pairs.iter().enumerate() {
                for (z, kz) in &pairs[i + 1..] {
                    if ky == kz {
                        continue;
                    }
                    // the two conics meet at the image of the intersection
                    // of the kernel lines of the parameter plane
                    let common = nullspace::<3>(&f, &[*ky, *kz]);
                    assert_eq!(common.len(), 1);
                    let w = veronese(&f, &common[0]);
                    let on_tangent = |pt: &Sym3| {
                        let l = Subspace::span(&f, &[w, *pt]).unwrap();
                        let r1 = l
                            .points(&f)
                            .iter()
                            .filter(|m| crate::geometry::sym3_rank(&f, m) == 1)
                            .count();
                        r1 == 1
                    };
                    let on = (on_tangent(y), on_tangent(z));
                    match class {
                        0 => assert_eq!(on, (true, true), "{label}"),
                        1 => assert!(on.0 != on.1, "{label}"),
                        _ => assert_eq!(on, (false, false), "{label}"),
                    }
                }
            }
            // extra structure of three-point lines: at least one of the
            // rank-2 points sees the conic from outside
            if class == 2 {
                assert!(pairs
                    .iter()
                    .any(|(m, _)| classify_point(&f, m) == PointClass::P2e));
            }
        }
        assert!(seen.iter().all(|&c| c > 0), "all three families occur");
    }

    fn random_invertible(f: &Fq, rng: &mut SmallRng) -> Mat3 {
        loop {
            let mut a: Mat3 = [[0; 3]; 3];
            for row in a.iter_mut() {
                for x in row.iter_mut() {
                    *x = rng.random_range(0..f.order());
                }
            }
            if crate::veronese::mat3_det(f, &a) != 0 {
                return a;
            }
        }
    }
}
