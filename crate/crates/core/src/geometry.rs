//! Projective geometry over `F_q`: points, canonical subspaces, shardable
//! enumeration, and the conic geometry of `PG(2, q)`.
//!
//! A point of `PG(n, q)` is a coordinate vector normalized so its first
//! nonzero coordinate is 1. A `k`-flat is stored as the unique reduced
//! row-echelon basis of its underlying `(k+1)`-dimensional row space, which
//! makes subspace equality (and hashing, for orbit sets) plain coordinate
//! comparison.
//!
//! Subspace enumeration is organized by pivot-column pattern: for each choice
//! of pivot columns the echelon bases are exactly the assignments of the free
//! entries, so the full stream is a concatenation of `q^(#free)`-sized blocks.
//! Workers audit disjoint global index ranges with no shared state.
//!
//! The conic section of the module classifies points and lines of `PG(2, q)`
//! against a nondegenerate conic. Symmetric 3×3 matrices are packed as
//! 6-vectors `(m₀₀, m₀₁, m₀₂, m₁₁, m₁₂, m₂₂)` — the same packing the Veronese
//! machinery uses for points of `PG(5, q)`.

use crate::field::{Elt, Fq, LegendreClass};
use thiserror::Error;

/// Errors from subspace construction and conic classification.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeometryError {
    /// `span` needs at least one nonzero vector.
    #[error("span of an empty (or all-zero) point list")]
    EmptyInput,
    /// The conic operations require a nondegenerate conic.
    #[error("degenerate conic (Gram determinant is zero)")]
    DegenerateConic,
}

// ---------------------------------------------------------------------------
// Points
// ---------------------------------------------------------------------------

/// Scales a vector so its first nonzero coordinate is 1. Returns `false` for
/// the zero vector (which represents no projective point).
pub fn normalize_point<const N: usize>(f: &Fq, v: &mut [Elt; N]) -> bool {
    match v.iter().position(|&x| x != 0) {
        None => false,
        Some(i) => {
            if v[i] != 1 {
                let s = f.inv(v[i]);
                for x in v.iter_mut() {
                    *x = f.mul(*x, s);
                }
            }
            true
        }
    }
}

/// Number of points of `PG(n, q)` with `n + 1 = N` coordinates.
pub fn point_count(n_coords: usize, q: u16) -> u64 {
    let q = q as u128;
    ((q.pow(n_coords as u32) - 1) / (q - 1)) as u64
}

/// All points of the projective space with `N` coordinates, in a fixed order:
/// grouped by position of the leading 1, later coordinates varying
/// odometer-style (most significant first).
pub fn all_points<const N: usize>(f: &Fq) -> Vec<[Elt; N]> {
    let q = f.order();
    let mut out = Vec::with_capacity(point_count(N, q) as usize);
    for lead in 0..N {
        let tail = N - lead - 1;
        let total = (q as u64).pow(tail as u32);
        for mut code in 0..total {
            let mut v = [0 as Elt; N];
            v[lead] = 1;
            for j in (lead + 1..N).rev() {
                v[j] = (code % q as u64) as Elt;
                code /= q as u64;
            }
            out.push(v);
        }
    }
    out
}

// ---------------------------------------------------------------------------
// Subspaces in canonical echelon form
// ---------------------------------------------------------------------------

/// A `k`-flat of the projective space with `N` coordinates, held as the
/// reduced row-echelon basis of its `(k+1)`-dimensional row space.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Subspace<const N: usize> {
    rows: Vec<[Elt; N]>,
}

/// Reduced row echelon form in place; zero rows are dropped.
pub fn echelonize<const N: usize>(f: &Fq, rows: &mut Vec<[Elt; N]>) {
    let mut pivot = 0;
    for col in 0..N {
        let Some(r) = (pivot..rows.len()).find(|&r| rows[r][col] != 0) else {
            continue;
        };
        rows.swap(pivot, r);
        if rows[pivot][col] != 1 {
            let s = f.inv(rows[pivot][col]);
            for x in rows[pivot].iter_mut() {
                *x = f.mul(*x, s);
            }
        }
        for r2 in 0..rows.len() {
            if r2 != pivot && rows[r2][col] != 0 {
                let c = rows[r2][col];
                for j in 0..N {
                    let t = f.mul(c, rows[pivot][j]);
                    rows[r2][j] = f.sub(rows[r2][j], t);
                }
            }
        }
        pivot += 1;
        if pivot == rows.len() {
            break;
        }
    }
    rows.truncate(pivot);
}

impl<const N: usize> Subspace<N> {
    /// Canonical span of the given vectors. Errors if no vector is nonzero.
    pub fn span(f: &Fq, vectors: &[[Elt; N]]) -> Result<Subspace<N>, GeometryError> {
        let mut rows: Vec<[Elt; N]> = vectors.to_vec();
        echelonize(f, &mut rows);
        if rows.is_empty() {
            return Err(GeometryError::EmptyInput);
        }
        Ok(Subspace { rows })
    }

    /// Wraps rows already known to be in reduced echelon form (enumeration
    /// output); debug-checked.
    pub(crate) fn from_echelon_rows(rows: Vec<[Elt; N]>) -> Subspace<N> {
        debug_assert!(!rows.is_empty());
        Subspace { rows }
    }

    /// Projective dimension `k` (a line has `dim() == 1`).
    pub fn dim(&self) -> usize {
        self.rows.len() - 1
    }

    /// The canonical echelon basis.
    pub fn rows(&self) -> &[[Elt; N]] {
        &self.rows
    }

    /// Whether the subspace contains a point: reduce the vector against the
    /// echelon basis and see if it vanishes.
    pub fn contains(&self, f: &Fq, point: &[Elt; N]) -> bool {
        let mut v = *point;
        for row in &self.rows {
            // echelon rows lead with a 1, so eliminating at the pivot column
            // is a single scaled subtraction
            let c = row.iter().position(|&x| x != 0).expect("echelon rows nonzero");
            if v[c] != 0 {
                let s = v[c];
                for j in 0..N {
                    let t = f.mul(s, row[j]);
                    v[j] = f.sub(v[j], t);
                }
            }
        }
        v.iter().all(|&x| x == 0)
    }

    /// All `(q^(k+1) − 1)/(q − 1)` points, normalized, in a fixed order
    /// (coefficient tuples with leading 1, odometer on the tail).
    pub fn points(&self, f: &Fq) -> Vec<[Elt; N]> {
        let q = f.order();
        let k1 = self.rows.len();
        let mut out = Vec::with_capacity(point_count(k1, q) as usize);
        for lead in 0..k1 {
            let tail = k1 - lead - 1;
            let total = (q as u64).pow(tail as u32);
            for mut code in 0..total {
                let mut lambda = vec![0 as Elt; k1];
                lambda[lead] = 1;
                for j in (lead + 1..k1).rev() {
                    lambda[j] = (code % q as u64) as Elt;
                    code /= q as u64;
                }
                let mut v = [0 as Elt; N];
                for (l, row) in lambda.iter().zip(&self.rows) {
                    if *l != 0 {
                        for j in 0..N {
                            v[j] = f.add(v[j], f.mul(*l, row[j]));
                        }
                    }
                }
                let ok = normalize_point(f, &mut v);
                debug_assert!(ok, "independent rows cannot combine to zero");
                out.push(v);
            }
        }
        out
    }
}

/// Basis (canonical echelon form) of `{ x : C·xᵀ = 0 }` for a list of
/// constraint rows `C`. Empty result means only the zero solution.
pub fn nullspace<const N: usize>(f: &Fq, constraints: &[[Elt; N]]) -> Vec<[Elt; N]> {
    let mut rows: Vec<[Elt; N]> = constraints.to_vec();
    echelonize(f, &mut rows);
    let mut pivot_cols = Vec::with_capacity(rows.len());
    for row in &rows {
        let c = row.iter().position(|&x| x != 0).expect("echelon rows nonzero");
        pivot_cols.push(c);
    }
    let mut basis = Vec::new();
    for free in 0..N {
        if pivot_cols.contains(&free) {
            continue;
        }
        let mut v = [0 as Elt; N];
        v[free] = 1;
        for (row, &pc) in rows.iter().zip(&pivot_cols) {
            v[pc] = f.neg(row[free]);
        }
        basis.push(v);
    }
    echelonize(f, &mut basis);
    basis
}

// ---------------------------------------------------------------------------
// Subspace enumeration by pivot pattern
// ---------------------------------------------------------------------------

/// One echelon shape: a choice of pivot columns together with the positions
/// of the free entries (row-major) and the block size `q^(#free)`.
#[derive(Debug, Clone)]
pub struct PivotPattern {
    pub pivots: Vec<usize>,
    pub free: Vec<(usize, usize)>,
    pub count: u64,
}

/// All pivot-column patterns for `(k+1)`-row echelon bases in `N` columns, in
/// lexicographic order of the pivot tuple. Concatenating the blocks gives the
/// global enumeration order.
pub fn pivot_patterns(n_coords: usize, rows: usize, q: u16) -> Vec<PivotPattern> {
    assert!(rows >= 1 && rows <= n_coords);
    let mut patterns = Vec::new();
    let mut idx: Vec<usize> = (0..rows).collect();
    loop {
        let pivots = idx.clone();
        let mut free = Vec::new();
        for (r, &p) in pivots.iter().enumerate() {
            for c in p + 1..n_coords {
                if !pivots.contains(&c) {
                    free.push((r, c));
                }
            }
        }
        let count = (q as u64).pow(free.len() as u32);
        patterns.push(PivotPattern { pivots, free, count });

        // next lexicographic combination
        let mut i = rows;
        loop {
            if i == 0 {
                return patterns;
            }
            i -= 1;
            if idx[i] != i + n_coords - rows {
                break;
            }
        }
        idx[i] += 1;
        for j in i + 1..rows {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Number of `k`-flats of the projective space with `n_coords = n + 1`
/// coordinates (the Gaussian binomial `[n+1 choose k+1]_q`).
pub fn subspace_count(n_coords: usize, k: usize, q: u16) -> u64 {
    let rows = k + 1;
    let q = q as u128;
    let mut num: u128 = 1;
    let mut den: u128 = 1;
    for i in 0..rows {
        num *= q.pow((n_coords - i) as u32) - 1;
        den *= q.pow((rows - i) as u32) - 1;
    }
    (num / den) as u64
}

/// Streaming enumeration of all `k`-flats, or of a contiguous index range of
/// them, in pattern-major order with lexicographic free entries.
pub struct SubspaceIter<'f, const N: usize> {
    f: &'f Fq,
    patterns: Vec<PivotPattern>,
    pattern_idx: usize,
    /// Current free entries, most significant first.
    digits: Vec<Elt>,
    remaining: u64,
}

impl<'f, const N: usize> SubspaceIter<'f, N> {
    /// Enumerates every `k`-flat exactly once.
    pub fn new(f: &'f Fq, k: usize) -> SubspaceIter<'f, N> {
        let total = subspace_count(N, k, f.order());
        Self::with_range(f, k, 0, total)
    }

    /// Enumerates the global index range `start..end` of the full stream.
    pub fn with_range(f: &'f Fq, k: usize, start: u64, end: u64) -> SubspaceIter<'f, N> {
        let patterns = pivot_patterns(N, k + 1, f.order());
        let total: u64 = patterns.iter().map(|p| p.count).sum();
        assert!(start <= end && end <= total, "index range out of bounds");
        let mut pattern_idx = 0;
        let mut offset = start;
        while pattern_idx < patterns.len() && offset >= patterns[pattern_idx].count {
            offset -= patterns[pattern_idx].count;
            pattern_idx += 1;
        }
        let digits = if pattern_idx < patterns.len() {
            let n = patterns[pattern_idx].free.len();
            let q = f.order() as u64;
            let mut d = vec![0 as Elt; n];
            let mut o = offset;
            for j in (0..n).rev() {
                d[j] = (o % q) as Elt;
                o /= q;
            }
            d
        } else {
            Vec::new()
        };
        SubspaceIter {
            f,
            patterns,
            pattern_idx,
            digits,
            remaining: end - start,
        }
    }

    /// Resumes from a shard checkpoint `(pattern index, offset in pattern)`,
    /// yielding at most `limit` subspaces.
    pub fn from_checkpoint(
        f: &'f Fq,
        k: usize,
        pattern_idx: usize,
        offset: u64,
        limit: u64,
    ) -> SubspaceIter<'f, N> {
        let patterns = pivot_patterns(N, k + 1, f.order());
        let before: u64 = patterns[..pattern_idx].iter().map(|p| p.count).sum();
        let total: u64 = patterns.iter().map(|p| p.count).sum();
        let start = before + offset;
        Self::with_range(f, k, start, (start + limit).min(total))
    }

    /// Current position as a `(pattern index, offset in pattern)` checkpoint.
    pub fn checkpoint(&self) -> (usize, u64) {
        let q = self.f.order() as u64;
        let mut offset = 0u64;
        for &d in &self.digits {
            offset = offset * q + d as u64;
        }
        (self.pattern_idx, offset)
    }

    fn build(&self) -> Subspace<N> {
        let pat = &self.patterns[self.pattern_idx];
        let mut rows = vec![[0 as Elt; N]; pat.pivots.len()];
        for (r, &p) in pat.pivots.iter().enumerate() {
            rows[r][p] = 1;
        }
        for (&(r, c), &d) in pat.free.iter().zip(&self.digits) {
            rows[r][c] = d;
        }
        Subspace::from_echelon_rows(rows)
    }
}

impl<const N: usize> Iterator for SubspaceIter<'_, N> {
    type Item = Subspace<N>;

    fn next(&mut self) -> Option<Subspace<N>> {
        if self.remaining == 0 {
            return None;
        }
        let out = self.build();
        self.remaining -= 1;
        // advance the odometer, least significant digit last
        let q = self.f.order() as Elt;
        let mut j = self.digits.len();
        loop {
            if j == 0 {
                self.pattern_idx += 1;
                if self.pattern_idx < self.patterns.len() {
                    self.digits = vec![0; self.patterns[self.pattern_idx].free.len()];
                }
                break;
            }
            j -= 1;
            self.digits[j] += 1;
            if self.digits[j] == q {
                self.digits[j] = 0;
            } else {
                break;
            }
        }
        Some(out)
    }
}

// ---------------------------------------------------------------------------
// Symmetric 3×3 matrices packed as 6-vectors
// ---------------------------------------------------------------------------

/// Symmetric 3×3 matrix `[[m₀, m₁, m₂], [m₁, m₃, m₄], [m₂, m₄, m₅]]` packed as
/// `(m₀, …, m₅)`; doubles as a point of `PG(5, q)` and as the half-Gram matrix
/// of a ternary quadratic form.
pub type Sym3 = [Elt; 6];

/// Quadratic form value `xᵀ M x`.
pub fn sym3_eval(f: &Fq, m: &Sym3, x: &[Elt; 3]) -> Elt {
    let mut acc = 0;
    acc = f.add(acc, f.mul(m[0], f.mul(x[0], x[0])));
    acc = f.add(acc, f.mul(m[3], f.mul(x[1], x[1])));
    acc = f.add(acc, f.mul(m[5], f.mul(x[2], x[2])));
    let mut cross = 0;
    cross = f.add(cross, f.mul(m[1], f.mul(x[0], x[1])));
    cross = f.add(cross, f.mul(m[2], f.mul(x[0], x[2])));
    cross = f.add(cross, f.mul(m[4], f.mul(x[1], x[2])));
    f.add(acc, f.add(cross, cross))
}

/// Bilinear form value `xᵀ M y`.
pub fn sym3_bilinear(f: &Fq, m: &Sym3, x: &[Elt; 3], y: &[Elt; 3]) -> Elt {
    let mv = sym3_mul_vec(f, m, y);
    let mut acc = 0;
    for i in 0..3 {
        acc = f.add(acc, f.mul(x[i], mv[i]));
    }
    acc
}

/// Matrix–vector product `M x`.
pub fn sym3_mul_vec(f: &Fq, m: &Sym3, x: &[Elt; 3]) -> [Elt; 3] {
    [
        f.add(f.mul(m[0], x[0]), f.add(f.mul(m[1], x[1]), f.mul(m[2], x[2]))),
        f.add(f.mul(m[1], x[0]), f.add(f.mul(m[3], x[1]), f.mul(m[4], x[2]))),
        f.add(f.mul(m[2], x[0]), f.add(f.mul(m[4], x[1]), f.mul(m[5], x[2]))),
    ]
}

/// Determinant of the packed symmetric matrix.
pub fn sym3_det(f: &Fq, m: &Sym3) -> Elt {
    // m0(m3 m5 − m4²) − m1(m1 m5 − m4 m2) + m2(m1 m4 − m3 m2)
    let t0 = f.sub(f.mul(m[3], m[5]), f.mul(m[4], m[4]));
    let t1 = f.sub(f.mul(m[1], m[5]), f.mul(m[4], m[2]));
    let t2 = f.sub(f.mul(m[1], m[4]), f.mul(m[3], m[2]));
    f.add(
        f.sub(f.mul(m[0], t0), f.mul(m[1], t1)),
        f.mul(m[2], t2),
    )
}

/// Adjugate, again symmetric and packed. Zero iff the matrix has rank ≤ 1.
pub fn sym3_adj(f: &Fq, m: &Sym3) -> Sym3 {
    [
        f.sub(f.mul(m[3], m[5]), f.mul(m[4], m[4])), // cofactor (0,0)
        f.neg(f.sub(f.mul(m[1], m[5]), f.mul(m[4], m[2]))), // (0,1)
        f.sub(f.mul(m[1], m[4]), f.mul(m[3], m[2])), // (0,2)
        f.sub(f.mul(m[0], m[5]), f.mul(m[2], m[2])), // (1,1)
        f.neg(f.sub(f.mul(m[0], m[4]), f.mul(m[1], m[2]))), // (1,2)
        f.sub(f.mul(m[0], m[3]), f.mul(m[1], m[1])), // (2,2)
    ]
}

/// Rank of the packed symmetric matrix (0 to 3).
pub fn sym3_rank(f: &Fq, m: &Sym3) -> usize {
    if sym3_det(f, m) != 0 {
        3
    } else if sym3_adj(f, m).iter().any(|&x| x != 0) {
        2
    } else if m.iter().any(|&x| x != 0) {
        1
    } else {
        0
    }
}

// ---------------------------------------------------------------------------
// Conic geometry of PG(2, q)
// ---------------------------------------------------------------------------

/// Position of a point relative to a nondegenerate conic.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ConicPointClass {
    On,
    /// Lies on a tangent line (equivalently: its polar is a secant).
    External,
    /// Lies on no tangent line.
    Internal,
}

/// Intersection type of a line with a nondegenerate conic.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ConicLineClass {
    Tangent,
    Secant,
    ExternalLine,
}

/// Polar line of a point with respect to a conic, as dual coordinates
/// (for a point on the conic this is the tangent there).
pub fn polar_line(f: &Fq, conic: &Sym3, p: &[Elt; 3]) -> [Elt; 3] {
    sym3_mul_vec(f, conic, p)
}

/// The `q + 1` points of the line with dual coordinates `ℓ` (the solutions of
/// `ℓ·x = 0`).
pub fn line_points(f: &Fq, line: &[Elt; 3]) -> Vec<[Elt; 3]> {
    let basis = nullspace(f, &[*line]);
    debug_assert_eq!(basis.len(), 2, "dual coordinates must be nonzero");
    Subspace::from_echelon_rows(basis).points(f)
}

/// Intersection class of a line (dual coordinates) with a nondegenerate
/// conic, decided by the discriminant of the restricted binary quadratic.
pub fn conic_line_class(
    f: &Fq,
    conic: &Sym3,
    line: &[Elt; 3],
) -> Result<ConicLineClass, GeometryError> {
    if sym3_det(f, conic) == 0 {
        return Err(GeometryError::DegenerateConic);
    }
    let basis = nullspace(f, &[*line]);
    assert_eq!(basis.len(), 2, "line dual coordinates must be nonzero");
    let (u, v) = (basis[0], basis[1]);
    let a = sym3_eval(f, conic, &u);
    let b = sym3_bilinear(f, conic, &u, &v);
    let c = sym3_eval(f, conic, &v);
    // Restriction is a·s² + 2b·st + c·t²; root count in PG(1,q) is decided by
    // the discriminant b² − ac. All three vanishing would put the whole line
    // on the conic, impossible when it is nondegenerate.
    debug_assert!(a != 0 || b != 0 || c != 0);
    let disc = f.sub(f.mul(b, b), f.mul(a, c));
    Ok(match f.legendre_class(disc) {
        LegendreClass::Square => ConicLineClass::Secant,
        LegendreClass::Zero => ConicLineClass::Tangent,
        LegendreClass::NonSquare => ConicLineClass::ExternalLine,
    })
}

/// Position of a point relative to a nondegenerate conic: `On` if the form
/// vanishes, otherwise external iff the point's polar line is a secant.
pub fn conic_point_class(
    f: &Fq,
    conic: &Sym3,
    p: &[Elt; 3],
) -> Result<ConicPointClass, GeometryError> {
    if sym3_det(f, conic) == 0 {
        return Err(GeometryError::DegenerateConic);
    }
    if sym3_eval(f, conic, p) == 0 {
        return Ok(ConicPointClass::On);
    }
    let polar = polar_line(f, conic, p);
    Ok(match conic_line_class(f, conic, &polar)? {
        ConicLineClass::Secant => ConicPointClass::External,
        ConicLineClass::ExternalLine => ConicPointClass::Internal,
        // The polar of p is tangent iff p lies on the conic, excluded above.
        ConicLineClass::Tangent => unreachable!("polar of an off-conic point is never tangent"),
    })
}
