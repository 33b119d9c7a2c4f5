//! Group machinery for the congruence action on the conic space: streaming
//! enumeration of the projectivity group, orbit closures under a fixed
//! generating set, stabilizer orders, conjugating-witness search, and
//! exhaustive census audits over points, lines, planes, solids, and a conic.
//!
//! Everything here is exact and exhaustive, which is only tractable at small
//! field orders; the audits are capped accordingly and the heavy scans accept
//! a worker count for data-parallel sharding.

use std::collections::{HashMap, HashSet, VecDeque};
use std::thread;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::classify::{
    classify_line_with_distribution, classify_plane_with_distribution, line_representative,
    plane_representative, PlaneOutcome, ALL_LINE_LABELS, ALL_PLANE_LABELS,
};
use crate::field::{Elt, Fq};
use crate::geometry::{
    all_points, conic_point_class, line_points, normalize_point, nullspace, point_count,
    polar_line, subspace_count, sym3_rank, ConicPointClass, Subspace, SubspaceIter, Sym3,
};
use crate::veronese::{
    act_subspace_unchecked, act_unchecked, apply_point, distribution, mat3_det, sym3_unpack, Mat3,
    PointClass, PointClassTable,
};

/// Failures of orbit computations and audits.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OrbitError {
    /// An orbit closure grew past the configured bound (see [`orbit_of`] for
    /// how the bound is chosen).
    #[error("orbit closure exceeded the configured bound of {0} elements")]
    MemoryBoundExceeded(usize),
    /// The request needs an exhaustive scan that is out of budget at this
    /// field order.
    #[error("exhaustive search is out of budget at q = {0}")]
    SearchBudgetExceeded(u16),
    /// An audit found a discrepancy with the expected census.
    #[error("consistency violation: {0}")]
    ConsistencyViolation(String),
    /// The two operands live in different projective dimensions.
    #[error("operands have different projective dimensions")]
    DimensionMismatch,
}

/// The number of projectivities of the base plane over `F_q`:
/// `(q² + q + 1)(q³ − q)(q³ − q²)`.
pub fn group_order(q: u16) -> u64 {
    let q = q as u64;
    (q * q + q + 1) * (q * q * q - q) * (q * q * q - q * q)
}

/// A projectivity of the base plane, stored as the unique scalar multiple of
/// its matrix whose first nonzero entry in row-major order equals 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GroupElement {
    matrix: Mat3,
}

impl GroupElement {
    /// Canonicalizes an invertible matrix modulo scalars; `None` if singular.
    pub fn new(f: &Fq, matrix: &Mat3) -> Option<GroupElement> {
        if mat3_det(f, matrix) == 0 {
            return None;
        }
        let mut m = *matrix;
        let lead = (0..9)
            .map(|k| m[k / 3][k % 3])
            .find(|&e| e != 0)
            .expect("an invertible matrix has a nonzero entry");
        let s = f.inv(lead);
        for row in m.iter_mut() {
            for e in row.iter_mut() {
                *e = f.mul(s, *e);
            }
        }
        Some(GroupElement { matrix: m })
    }

    /// The identity projectivity.
    pub fn identity() -> GroupElement {
        GroupElement {
            matrix: [[1, 0, 0], [0, 1, 0], [0, 0, 1]],
        }
    }

    /// The canonical matrix representative.
    pub fn matrix(&self) -> &Mat3 {
        &self.matrix
    }
}

fn decode_vec(q: u64, code: u64) -> [Elt; 3] {
    [
        ((code / (q * q)) % q) as Elt,
        ((code / q) % q) as Elt,
        (code % q) as Elt,
    ]
}

fn cross3(f: &Fq, a: &[Elt; 3], b: &[Elt; 3]) -> [Elt; 3] {
    [
        f.sub(f.mul(a[1], b[2]), f.mul(a[2], b[1])),
        f.sub(f.mul(a[2], b[0]), f.mul(a[0], b[2])),
        f.sub(f.mul(a[0], b[1]), f.mul(a[1], b[0])),
    ]
}

fn dot3(f: &Fq, a: &[Elt; 3], b: &[Elt; 3]) -> Elt {
    let mut s = 0;
    for k in 0..3 {
        s = f.add(s, f.mul(a[k], b[k]));
    }
    s
}

/// Streams every projectivity exactly once, as canonical matrices.
///
/// The first row ranges over the `q² + q + 1` normalized points of the base
/// plane (so scalar multiples never repeat); the second row over the `q³ − q`
/// vectors off the first row's span; the third over the `q³ − q²` vectors off
/// the span of the first two. The product is exactly [`group_order`].
pub struct GroupElements<'f> {
    f: &'f Fq,
    first_rows: Vec<[Elt; 3]>,
    q3: u64,
    i1: usize,
    r2_code: u64,
    r3_code: u64,
    r2: [Elt; 3],
    cross: [Elt; 3],
    r2_ready: bool,
}

/// Iterator over the whole projectivity group; see [`GroupElements`].
pub fn group_elements(f: &Fq) -> GroupElements<'_> {
    GroupElements {
        f,
        first_rows: all_points::<3>(f),
        q3: (f.order() as u64).pow(3),
        i1: 0,
        r2_code: 0,
        r3_code: 0,
        r2: [0; 3],
        cross: [0; 3],
        r2_ready: false,
    }
}

impl Iterator for GroupElements<'_> {
    type Item = GroupElement;

    fn next(&mut self) -> Option<GroupElement> {
        let f = self.f;
        let q = f.order() as u64;
        loop {
            if self.i1 >= self.first_rows.len() {
                return None;
            }
            if !self.r2_ready {
                if self.r2_code == self.q3 {
                    self.i1 += 1;
                    self.r2_code = 0;
                    continue;
                }
                let r2 = decode_vec(q, self.r2_code);
                self.r2_code += 1;
                let c = cross3(f, &self.first_rows[self.i1], &r2);
                if c == [0, 0, 0] {
                    continue;
                }
                self.r2 = r2;
                self.cross = c;
                self.r3_code = 0;
                self.r2_ready = true;
            }
            while self.r3_code < self.q3 {
                let r3 = decode_vec(q, self.r3_code);
                self.r3_code += 1;
                // The triple product det(r1, r2, r3) must not vanish.
                if dot3(f, &self.cross, &r3) != 0 {
                    return Some(GroupElement {
                        matrix: [self.first_rows[self.i1], self.r2, r3],
                    });
                }
            }
            self.r2_ready = false;
        }
    }
}

/// A fixed generating set of the projectivity group: the six elementary
/// transvections `I + E_ij` (`i ≠ j`) together with `diag(g, 1, 1)` for a
/// primitive `g`. The transvections generate every determinant-1 class and
/// the diagonal element supplies the remaining determinant cosets.
pub fn generators(f: &Fq) -> Vec<GroupElement> {
    let mut out = Vec::new();
    for i in 0..3 {
        for j in 0..3 {
            if i == j {
                continue;
            }
            let mut m = [[0 as Elt; 3]; 3];
            for (k, row) in m.iter_mut().enumerate() {
                row[k] = 1;
            }
            m[i][j] = 1;
            out.push(GroupElement::new(f, &m).expect("transvections are invertible"));
        }
    }
    let g = f.primitive_element();
    let diag = [[g, 0, 0], [0, 1, 0], [0, 0, 1]];
    out.push(GroupElement::new(f, &diag).expect("the diagonal generator is invertible"));
    out
}

/// Default bound on the size of an orbit closure; override it with the
/// `CONIC_NETS_ORBIT_LIMIT` environment variable.
pub const DEFAULT_ORBIT_LIMIT: usize = 10_000_000;

fn orbit_limit() -> usize {
    std::env::var("CONIC_NETS_ORBIT_LIMIT")
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or(DEFAULT_ORBIT_LIMIT)
}

/// Orbit of a flat under the congruence action, as the set of canonical
/// echelon forms, by breadth-first closure under [`generators`]. The set size
/// is capped by `CONIC_NETS_ORBIT_LIMIT` (default [`DEFAULT_ORBIT_LIMIT`]).
pub fn orbit_of(f: &Fq, s: &Subspace<6>) -> Result<HashSet<Subspace<6>>, OrbitError> {
    orbit_of_with_limit(f, s, orbit_limit())
}

/// As [`orbit_of`] with an explicit bound on the orbit-set size.
pub fn orbit_of_with_limit(
    f: &Fq,
    s: &Subspace<6>,
    limit: usize,
) -> Result<HashSet<Subspace<6>>, OrbitError> {
    if limit == 0 {
        return Err(OrbitError::MemoryBoundExceeded(limit));
    }
    let gens = generators(f);
    let mut seen = HashSet::new();
    seen.insert(s.clone());
    let mut queue = VecDeque::new();
    queue.push_back(s.clone());
    while let Some(cur) = queue.pop_front() {
        for g in &gens {
            let img = act_subspace_unchecked(f, g.matrix(), &cur);
            if !seen.contains(&img) {
                if seen.len() == limit {
                    return Err(OrbitError::MemoryBoundExceeded(limit));
                }
                seen.insert(img.clone());
                queue.push_back(img);
            }
        }
    }
    Ok(seen)
}

/// Orbit of a single point of the conic space (normalized coordinates) under
/// the congruence action.
pub fn orbit_of_point(f: &Fq, m: &Sym3) -> Result<HashSet<Sym3>, OrbitError> {
    orbit_of_point_with_limit(f, m, orbit_limit())
}

/// As [`orbit_of_point`] with an explicit bound.
pub fn orbit_of_point_with_limit(
    f: &Fq,
    m: &Sym3,
    limit: usize,
) -> Result<HashSet<Sym3>, OrbitError> {
    if limit == 0 {
        return Err(OrbitError::MemoryBoundExceeded(limit));
    }
    let mut start = *m;
    let ok = normalize_point(f, &mut start);
    assert!(ok, "the zero vector is not a projective point");
    let gens = generators(f);
    let mut seen = HashSet::new();
    seen.insert(start);
    let mut queue = VecDeque::new();
    queue.push_back(start);
    while let Some(cur) = queue.pop_front() {
        for g in &gens {
            let img = act_unchecked(f, g.matrix(), &cur);
            if !seen.contains(&img) {
                if seen.len() == limit {
                    return Err(OrbitError::MemoryBoundExceeded(limit));
                }
                seen.insert(img);
                queue.push_back(img);
            }
        }
    }
    Ok(seen)
}

/// Order of the setwise stabilizer of a flat, by a full group scan. Intended
/// for `q ≤ 7`.
pub fn stabilizer_order(f: &Fq, s: &Subspace<6>) -> u64 {
    let mut n = 0;
    for a in group_elements(f) {
        if act_subspace_unchecked(f, a.matrix(), s) == *s {
            n += 1;
        }
    }
    n
}

/// Largest field order at which [`find_witness`] runs an exhaustive search.
pub const MAX_WITNESS_ORDER: u16 = 7;

/// Recovers the base-plane points whose quadric image spans each rank-1
/// point of the flat.
fn rank_one_preimages(f: &Fq, s: &Subspace<6>) -> Vec<[Elt; 3]> {
    let mut out = Vec::new();
    for p in s.points(f) {
        if sym3_rank(f, &p) != 1 {
            continue;
        }
        let m = sym3_unpack(&p);
        // Every nonzero row of a rank-1 symmetric matrix is a multiple of
        // the spanning vector.
        let mut x = *m
            .iter()
            .find(|row| row.iter().any(|&e| e != 0))
            .expect("a rank-1 matrix is nonzero");
        let ok = normalize_point(f, &mut x);
        debug_assert!(ok);
        out.push(x);
    }
    out
}

/// Searches for a projectivity carrying `left` onto `right`.
///
/// `Ok(None)` means the two flats are provably in different orbits: either an
/// invariant separates them, or the exhaustive scan found no witness. The
/// scan first discards elements that fail to carry a rank-1 point of `left`
/// onto one of `right`, which prunes the bulk of the group whenever the flats
/// meet the quadric surface.
pub fn find_witness(
    f: &Fq,
    left: &Subspace<6>,
    right: &Subspace<6>,
) -> Result<Option<GroupElement>, OrbitError> {
    if left.dim() != right.dim() {
        return Err(OrbitError::DimensionMismatch);
    }
    if distribution(f, left) != distribution(f, right) {
        return Ok(None);
    }
    if f.order() > MAX_WITNESS_ORDER {
        return Err(OrbitError::SearchBudgetExceeded(f.order()));
    }
    let anchor = rank_one_preimages(f, left).first().copied();
    let targets: HashSet<[Elt; 3]> = rank_one_preimages(f, right).into_iter().collect();
    for a in group_elements(f) {
        if let Some(x) = anchor {
            if !targets.contains(&apply_point(f, a.matrix(), &x)) {
                continue;
            }
        }
        if act_subspace_unchecked(f, a.matrix(), left) == *right {
            return Ok(Some(a));
        }
    }
    Ok(None)
}

/// One row of an audit census: an observed tally against the predicted orbit
/// size.
#[derive(Debug, Clone, Serialize)]
pub struct AuditRow {
    pub label: String,
    pub tally: u64,
    /// Orbit size this tally must equal (from a closed form or an
    /// orbit-stabilizer computation); `None` when no prediction applies.
    pub expected_orbit_size: Option<u64>,
    /// Stabilizer order used to derive the prediction, when one was scanned.
    pub stabilizer_order: Option<u64>,
    pub consistent: bool,
}

/// Outcome of an exhaustive census audit.
///
/// Serialization deliberately omits timing and worker counts so that reports
/// are byte-identical across runs and parallelism settings.
#[derive(Debug, Clone, Serialize)]
pub struct AuditReport {
    pub q: u16,
    /// What was scanned: `planes`, `lines`, `points`, `conic`, or `solids`.
    pub kind: String,
    pub rows: Vec<AuditRow>,
    pub violations: Vec<String>,
    pub total_scanned: u64,
    /// Scanned objects outside the audited family (for planes: those meeting
    /// the quadric surface in no point).
    pub outside_family: u64,
    #[serde(skip_serializing)]
    pub workers: usize,
    #[serde(skip_serializing)]
    pub elapsed_ms: u64,
}

/// Escapes one CSV field: labels such as `o8,1` contain commas and must be
/// quoted per RFC 4180.
pub fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

impl AuditReport {
    /// Renders the census as CSV with a fixed header.
    pub fn to_csv(&self) -> String {
        let mut out =
            String::from("label,tally,expected_orbit_size,stabilizer_order,consistent\n");
        for r in &self.rows {
            let expected = r
                .expected_orbit_size
                .map(|v| v.to_string())
                .unwrap_or_default();
            let stab = r.stabilizer_order.map(|v| v.to_string()).unwrap_or_default();
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                csv_field(&r.label),
                r.tally,
                expected,
                stab,
                r.consistent
            ));
        }
        out
    }

    /// The row for `label`, if present.
    pub fn row(&self, label: &str) -> Option<&AuditRow> {
        self.rows.iter().find(|r| r.label == label)
    }

    /// Errs with a summary unless every row is consistent and no violations
    /// were recorded.
    pub fn ensure_consistent(&self) -> Result<(), OrbitError> {
        let bad: Vec<&str> = self
            .rows
            .iter()
            .filter(|r| !r.consistent)
            .map(|r| r.label.as_str())
            .collect();
        if bad.is_empty() && self.violations.is_empty() {
            return Ok(());
        }
        let mut msg = format!("{} audit at q = {}", self.kind, self.q);
        if !bad.is_empty() {
            msg.push_str(&format!("; inconsistent rows: {}", bad.join(", ")));
        }
        if !self.violations.is_empty() {
            msg.push_str(&format!(
                "; {} violation(s), first: {}",
                self.violations.len(),
                self.violations[0]
            ));
        }
        Err(OrbitError::ConsistencyViolation(msg))
    }
}

/// Resumable position of a flat-enumeration shard, in the
/// `(pivot pattern, offset within pattern)` coordinates of
/// [`SubspaceIter::from_checkpoint`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShardCheckpoint {
    pub pattern: usize,
    pub offset: u64,
}

impl ShardCheckpoint {
    /// Captures the current position of an enumeration.
    pub fn capture<const N: usize>(it: &SubspaceIter<'_, N>) -> ShardCheckpoint {
        let (pattern, offset) = it.checkpoint();
        ShardCheckpoint { pattern, offset }
    }

    /// Resumes an enumeration of `k`-flats from this checkpoint, yielding at
    /// most `limit` flats.
    pub fn resume<'f, const N: usize>(
        &self,
        f: &'f Fq,
        k: usize,
        limit: u64,
    ) -> SubspaceIter<'f, N> {
        SubspaceIter::from_checkpoint(f, k, self.pattern, self.offset, limit)
    }
}

const WORKER_VIOLATION_CAP: usize = 16;

struct ScanPartial {
    tallies: HashMap<String, u64>,
    outside: u64,
    violations: Vec<String>,
    truncated: bool,
}

impl ScanPartial {
    fn new() -> ScanPartial {
        ScanPartial {
            tallies: HashMap::new(),
            outside: 0,
            violations: Vec::new(),
            truncated: false,
        }
    }

    fn violation(&mut self, msg: String) {
        if self.violations.len() < WORKER_VIOLATION_CAP {
            self.violations.push(msg);
        } else {
            self.truncated = true;
        }
    }
}

fn shard_bounds(total: u64, workers: usize) -> Vec<(u64, u64)> {
    let w = workers.max(1) as u64;
    let chunk = ((total + w - 1) / w).max(1);
    (0..w)
        .map(|i| ((i * chunk).min(total), ((i + 1) * chunk).min(total)))
        .filter(|(lo, hi)| lo < hi)
        .collect()
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum FlatAudit {
    Planes,
    Lines,
    Solids,
}

impl FlatAudit {
    fn flat_dim(self) -> usize {
        match self {
            FlatAudit::Planes => 2,
            FlatAudit::Lines => 1,
            FlatAudit::Solids => 3,
        }
    }

    fn kind(self) -> &'static str {
        match self {
            FlatAudit::Planes => "planes",
            FlatAudit::Lines => "lines",
            FlatAudit::Solids => "solids",
        }
    }

    fn max_order(self) -> u16 {
        match self {
            FlatAudit::Planes | FlatAudit::Lines => 7,
            FlatAudit::Solids => 5,
        }
    }
}

/// Trace-form weights for the packed coordinates: `tr(A·B)` of symmetric
/// matrices doubles the off-diagonal products.
fn trace_form_weights(f: &Fq) -> [Elt; 6] {
    let two = f.add(1, 1);
    [1, two, two, 1, two, 1]
}

fn scan_one_flat(
    f: &Fq,
    table: &PointClassTable,
    mode: FlatAudit,
    flat: &Subspace<6>,
    weights: &[Elt; 6],
    part: &mut ScanPartial,
) {
    match mode {
        FlatAudit::Planes => {
            let dist = table.distribution(f, flat.rows());
            let [n1, n2, n3, _] = dist.as_array();
            let q = f.order() as u32;
            if n1 == 2 && n2 + n3 < q {
                part.violation(format!(
                    "plane with two rank-1 points and only {} rank-2 points: {:?}",
                    n2 + n3,
                    flat.rows()
                ));
            }
            if n1 == 0 {
                part.outside += 1;
                return;
            }
            if n1 != 1 && n1 != 2 && n1 != 3 && n1 != q + 1 {
                part.violation(format!(
                    "plane with rank-1 count {n1} outside {{1, 2, 3, q+1}}: {:?}",
                    flat.rows()
                ));
                return;
            }
            match classify_plane_with_distribution(f, flat, dist) {
                Ok(PlaneOutcome::Orbit(label)) => {
                    *part.tallies.entry(label.to_string()).or_insert(0) += 1;
                }
                Ok(PlaneOutcome::NotMeetingVeronesean) => part.violation(format!(
                    "meeting plane classified as not meeting: {:?}",
                    flat.rows()
                )),
                Err(e) => part.violation(format!(
                    "plane classification failed ({e}): {:?}",
                    flat.rows()
                )),
            }
        }
        FlatAudit::Lines => {
            let dist = table.distribution(f, flat.rows());
            match classify_line_with_distribution(f, flat, dist) {
                Ok(label) => *part.tallies.entry(label.to_string()).or_insert(0) += 1,
                Err(e) => part.violation(format!(
                    "line classification failed ({e}): {:?}",
                    flat.rows()
                )),
            }
        }
        FlatAudit::Solids => {
            let constraints: Vec<[Elt; 6]> = flat
                .rows()
                .iter()
                .map(|r| {
                    let mut c = *r;
                    for (i, e) in c.iter_mut().enumerate() {
                        *e = f.mul(*e, weights[i]);
                    }
                    c
                })
                .collect();
            let basis = nullspace(f, &constraints);
            if basis.len() != 2 {
                part.violation(format!(
                    "orthocomplement of a solid is not a line: {:?}",
                    flat.rows()
                ));
                return;
            }
            let line = Subspace::span(f, &basis).expect("nullspace basis is independent");
            let dist = table.distribution(f, line.rows());
            match classify_line_with_distribution(f, &line, dist) {
                Ok(label) => *part.tallies.entry(label.to_string()).or_insert(0) += 1,
                Err(e) => part.violation(format!(
                    "dual line classification failed ({e}): {:?}",
                    flat.rows()
                )),
            }
        }
    }
}

fn stabilizer_orders(f: &Fq, reps: &[(String, Subspace<6>)], workers: usize) -> Vec<u64> {
    let workers = workers.clamp(1, reps.len().max(1));
    thread::scope(|scope| {
        let mut handles = Vec::new();
        for w in 0..workers {
            handles.push(scope.spawn(move || {
                let mut out = Vec::new();
                let mut i = w;
                while i < reps.len() {
                    out.push((i, stabilizer_order(f, &reps[i].1)));
                    i += workers;
                }
                out
            }));
        }
        let mut stabs = vec![0u64; reps.len()];
        for h in handles {
            for (i, s) in h.join().expect("stabilizer worker panicked") {
                stabs[i] = s;
            }
        }
        stabs
    })
}

/// Builds census rows for the given orbit representatives: scans stabilizer
/// orders in parallel, derives the expected orbit sizes, and matches the
/// observed tallies against them.
fn census_rows(
    f: &Fq,
    reps: Vec<(String, Subspace<6>)>,
    tallies: &mut HashMap<String, u64>,
    violations: &mut Vec<String>,
    workers: usize,
) -> Vec<AuditRow> {
    let order = group_order(f.order());
    let stabs = stabilizer_orders(f, &reps, workers);
    let mut rows = Vec::new();
    for ((label, _), stab) in reps.into_iter().zip(stabs) {
        let expected = order / stab;
        let tally = tallies.remove(&label).unwrap_or(0);
        let consistent = order % stab == 0 && tally == expected;
        if !consistent {
            violations.push(format!(
                "label {label}: tally {tally} differs from expected orbit size {expected} (stabilizer order {stab})"
            ));
        }
        rows.push(AuditRow {
            label,
            tally,
            expected_orbit_size: Some(expected),
            stabilizer_order: Some(stab),
            consistent,
        });
    }
    for (label, tally) in tallies.drain() {
        violations.push(format!("unexpected label {label} with {tally} member(s)"));
    }
    rows
}

fn audit_flats(f: &Fq, workers: usize, mode: FlatAudit) -> Result<AuditReport, OrbitError> {
    let q = f.order();
    if q > mode.max_order() {
        return Err(OrbitError::SearchBudgetExceeded(q));
    }
    let start = Instant::now();
    let workers = workers.max(1);
    let table = PointClassTable::new(f);
    let weights = trace_form_weights(f);
    let k = mode.flat_dim();
    let total = subspace_count(6, k, q);
    let bounds = shard_bounds(total, workers);
    let partials: Vec<ScanPartial> = thread::scope(|scope| {
        let table = &table;
        let weights = &weights;
        let mut handles = Vec::new();
        for &(lo, hi) in &bounds {
            handles.push(scope.spawn(move || {
                let mut part = ScanPartial::new();
                for flat in SubspaceIter::<6>::with_range(f, k, lo, hi) {
                    scan_one_flat(f, table, mode, &flat, weights, &mut part);
                }
                part
            }));
        }
        handles
            .into_iter()
            .map(|h| h.join().expect("audit worker panicked"))
            .collect()
    });
    let mut tallies: HashMap<String, u64> = HashMap::new();
    let mut violations: Vec<String> = Vec::new();
    let mut outside = 0u64;
    let mut truncated = false;
    for part in partials {
        for (label, n) in part.tallies {
            *tallies.entry(label).or_insert(0) += n;
        }
        outside += part.outside;
        violations.extend(part.violations);
        truncated |= part.truncated;
    }
    let classified: u64 = tallies.values().sum();
    if classified + outside != total {
        violations.push(format!(
            "scanned {total} flats but accounted for {}",
            classified + outside
        ));
    }
    let reps: Vec<(String, Subspace<6>)> = match mode {
        FlatAudit::Planes => ALL_PLANE_LABELS
            .iter()
            .filter(|l| l.available_for(q))
            .map(|l| {
                let rep = plane_representative(f, *l)
                    .expect("every available plane label has a representative");
                (l.to_string(), rep)
            })
            .collect(),
        FlatAudit::Lines | FlatAudit::Solids => ALL_LINE_LABELS
            .iter()
            .map(|l| {
                let rep =
                    line_representative(f, *l).expect("every line label has a representative");
                (l.to_string(), rep)
            })
            .collect(),
    };
    let rows = census_rows(f, reps, &mut tallies, &mut violations, workers);
    if rows.len() != 15 {
        violations.push(format!("expected 15 orbit labels, found {}", rows.len()));
    }
    violations.sort();
    violations.dedup();
    if truncated {
        violations.push("additional violations suppressed".to_string());
    }
    Ok(AuditReport {
        q,
        kind: mode.kind().to_string(),
        rows,
        violations,
        total_scanned: total,
        outside_family: outside,
        workers,
        elapsed_ms: start.elapsed().as_millis() as u64,
    })
}

/// Exhaustively classifies every plane of the conic space and checks the
/// census against orbit-stabilizer predictions.
///
/// Recorded violations: classification failures or unexpected labels; a
/// label tally differing from the group order divided by the stabilizer
/// order; any plane with two rank-1 points but fewer than `q` points of rank
/// 2; any meeting plane whose rank-1 count lies outside `{1, 2, 3, q+1}`.
pub fn audit_planes(f: &Fq, workers: usize) -> Result<AuditReport, OrbitError> {
    audit_flats(f, workers, FlatAudit::Planes)
}

/// Exhaustively classifies every line of the conic space; census checks as
/// in [`audit_planes`].
pub fn audit_lines(f: &Fq, workers: usize) -> Result<AuditReport, OrbitError> {
    audit_flats(f, workers, FlatAudit::Lines)
}

/// Dual census at small `q`: pairs every solid with its orthocomplement line
/// under the trace form on symmetric matrices and tallies the induced line
/// labels. The pairing is equivariant, so the solid orbits mirror the line
/// orbits and the tallies must equal the line orbit sizes.
pub fn audit_solids(f: &Fq, workers: usize) -> Result<AuditReport, OrbitError> {
    audit_flats(f, workers, FlatAudit::Solids)
}

/// Exhaustively classifies every point of the conic space against the
/// closed-form census: `q² + q + 1` rank-1 points, `(q² + q + 1)·q(q + 1)/2`
/// rank-2 points of exterior type, `(q² + q + 1)·q(q − 1)/2` of interior
/// type, and `q⁵ − q²` points of rank 3.
pub fn audit_points(f: &Fq) -> Result<AuditReport, OrbitError> {
    let q = f.order();
    if q > 13 {
        return Err(OrbitError::SearchBudgetExceeded(q));
    }
    let start = Instant::now();
    let table = PointClassTable::new(f);
    let mut counts = [0u64; 4];
    for p in all_points::<6>(f) {
        let idx = match table.classify(&p) {
            PointClass::P1 => 0,
            PointClass::P2e => 1,
            PointClass::P2i => 2,
            PointClass::P3 => 3,
        };
        counts[idx] += 1;
    }
    let qq = q as u64;
    let n = qq * qq + qq + 1;
    let expected = [
        n,
        n * qq * (qq + 1) / 2,
        n * qq * (qq - 1) / 2,
        qq.pow(5) - qq * qq,
    ];
    let labels = ["P1", "P2e", "P2i", "P3"];
    let mut rows = Vec::new();
    let mut violations = Vec::new();
    for i in 0..4 {
        let consistent = counts[i] == expected[i];
        if !consistent {
            violations.push(format!(
                "point class {}: tally {} differs from the closed form {}",
                labels[i], counts[i], expected[i]
            ));
        }
        rows.push(AuditRow {
            label: labels[i].to_string(),
            tally: counts[i],
            expected_orbit_size: Some(expected[i]),
            stabilizer_order: None,
            consistent,
        });
    }
    let total = point_count(6, q);
    if counts.iter().sum::<u64>() != total {
        violations.push(format!(
            "point tallies sum to {} instead of {total}",
            counts.iter().sum::<u64>()
        ));
    }
    Ok(AuditReport {
        q,
        kind: "points".to_string(),
        rows,
        violations,
        total_scanned: total,
        outside_family: 0,
        workers: 1,
        elapsed_ms: start.elapsed().as_millis() as u64,
    })
}

/// Orbit partition of the base plane under the subgroup fixing the conic and
/// the point `w = (1 : 0 : 0)` on it: the five orbits are `{w}`, the rest of
/// the conic, the rest of the tangent at `w`, the exterior points off that
/// tangent, and the interior points.
fn conic_point_stabilizer_rows(
    f: &Fq,
    gram: &Sym3,
    pts: &[[Elt; 3]],
    conic_set: &[[Elt; 3]],
    rows: &mut Vec<AuditRow>,
    violations: &mut Vec<String>,
) {
    let q = f.order() as u64;
    let w: [Elt; 3] = [1, 0, 0];
    let on: HashSet<[Elt; 3]> = conic_set.iter().copied().collect();
    debug_assert!(on.contains(&w));
    let mut gw: Vec<Mat3> = Vec::new();
    'outer: for a in group_elements(f) {
        let m = *a.matrix();
        // Fixing w = (1 : 0 : 0) means the first column is a multiple of it.
        if m[1][0] != 0 || m[2][0] != 0 {
            continue;
        }
        for p in conic_set {
            if !on.contains(&apply_point(f, &m, p)) {
                continue 'outer;
            }
        }
        gw.push(m);
    }
    if gw.len() as u64 != q * (q - 1) {
        violations.push(format!(
            "conic point stabilizer has order {} instead of q(q-1) = {}",
            gw.len(),
            q * (q - 1)
        ));
    }
    let mut seen: HashSet<[Elt; 3]> = HashSet::new();
    let mut orbits: Vec<HashSet<[Elt; 3]>> = Vec::new();
    for p in pts {
        if seen.contains(p) {
            continue;
        }
        let mut orbit = HashSet::new();
        orbit.insert(*p);
        let mut queue = VecDeque::from([*p]);
        while let Some(cur) = queue.pop_front() {
            for m in &gw {
                let img = apply_point(f, m, &cur);
                if orbit.insert(img) {
                    queue.push_back(img);
                }
            }
        }
        seen.extend(orbit.iter().copied());
        orbits.push(orbit);
    }
    let tangent = polar_line(f, gram, &w);
    let tangent_pts: HashSet<[Elt; 3]> = line_points(f, &tangent).into_iter().collect();
    debug_assert!(tangent_pts.contains(&w));
    let mut external_off = HashSet::new();
    let mut internal = HashSet::new();
    for p in pts {
        match conic_point_class(f, gram, p).expect("the standard conic is nondegenerate") {
            ConicPointClass::External if !tangent_pts.contains(p) => {
                external_off.insert(*p);
            }
            ConicPointClass::Internal => {
                internal.insert(*p);
            }
            _ => {}
        }
    }
    let expected: Vec<(&str, u64, HashSet<[Elt; 3]>)> = vec![
        ("fixed-point", 1, HashSet::from([w])),
        (
            "conic-minus-fixed",
            q,
            on.iter().copied().filter(|p| *p != w).collect(),
        ),
        (
            "tangent-minus-fixed",
            q,
            tangent_pts.iter().copied().filter(|p| *p != w).collect(),
        ),
        ("external-off-tangent", q * (q - 1) / 2, external_off),
        ("internal", q * (q - 1) / 2, internal),
    ];
    if orbits.len() != expected.len() {
        violations.push(format!(
            "conic point stabilizer has {} plane orbits instead of {}",
            orbits.len(),
            expected.len()
        ));
    }
    for (label, size, set) in expected {
        let matched = orbits.iter().any(|o| *o == set);
        let consistent = matched && set.len() as u64 == size;
        if !consistent {
            violations.push(format!(
                "stabilizer orbit {label} does not match its predicted point set"
            ));
        }
        rows.push(AuditRow {
            label: label.to_string(),
            tally: set.len() as u64,
            expected_orbit_size: Some(size),
            stabilizer_order: Some(gw.len() as u64),
            consistent,
        });
    }
}

/// Census of the standard conic `xz = y²` in the base plane: `q + 1` points
/// on the conic, `q(q + 1)/2` exterior points, `q(q − 1)/2` interior points.
/// For `q ≤ 7` this also verifies the five-orbit partition of the plane
/// under the stabilizer of the conic and one of its points.
pub fn audit_conic(f: &Fq) -> Result<AuditReport, OrbitError> {
    let q = f.order();
    if q > 13 {
        return Err(OrbitError::SearchBudgetExceeded(q));
    }
    let start = Instant::now();
    // Gram matrix of xz − y² (the image of the quadratic embedding of the
    // projective line is exactly its zero set).
    let gram: Sym3 = [0, 0, f.inv(2), f.neg(1), 0, 0];
    let pts = all_points::<3>(f);
    let mut on_pts: Vec<[Elt; 3]> = Vec::new();
    let mut counts = [0u64; 3];
    for p in &pts {
        match conic_point_class(f, &gram, p).expect("the standard conic is nondegenerate") {
            ConicPointClass::On => {
                counts[0] += 1;
                on_pts.push(*p);
            }
            ConicPointClass::External => counts[1] += 1,
            ConicPointClass::Internal => counts[2] += 1,
        }
    }
    let qq = q as u64;
    let expected = [qq + 1, qq * (qq + 1) / 2, qq * (qq - 1) / 2];
    let labels = ["on-conic", "external", "internal"];
    let mut rows = Vec::new();
    let mut violations = Vec::new();
    for i in 0..3 {
        let consistent = counts[i] == expected[i];
        if !consistent {
            violations.push(format!(
                "conic census {}: tally {} differs from {}",
                labels[i], counts[i], expected[i]
            ));
        }
        rows.push(AuditRow {
            label: labels[i].to_string(),
            tally: counts[i],
            expected_orbit_size: Some(expected[i]),
            stabilizer_order: None,
            consistent,
        });
    }
    if q <= 7 {
        conic_point_stabilizer_rows(f, &gram, &pts, &on_pts, &mut rows, &mut violations);
    }
    Ok(AuditReport {
        q,
        kind: "conic".to_string(),
        rows,
        violations,
        total_scanned: point_count(3, q),
        outside_family: 0,
        workers: 1,
        elapsed_ms: start.elapsed().as_millis() as u64,
    })
}
