//! The Veronese surface of `PG(5, q)`, the congruence action of `PGL(3, q)`,
//! and the dictionary between nets of conics and planes.
//!
//! Points `y = (y₀, …, y₅)` of `PG(5, q)` are identified with nonzero
//! symmetric 3×3 matrices
//!
//! ```text
//!         [ y₀ y₁ y₂ ]
//!   M_y = [ y₁ y₃ y₄ ]
//!         [ y₂ y₄ y₅ ]
//! ```
//!
//! The Veronese map ν sends a point `x` of `PG(2, q)` to `x·xᵀ`; its image V
//! is exactly the set of rank-1 points. `PGL(3, q)` acts by congruence
//! `M ↦ A·M·Aᵀ`, preserving matrix rank, and splits the rank-2 points into an
//! "external" and an "internal" orbit according to the square classes of the
//! negated principal 2×2 minors.
//!
//! A net of conics — three independent ternary quadratic forms — corresponds
//! to the plane spanned by the *half-Gram* matrices of its forms (diagonal
//! coefficients kept, mixed coefficients halved; `q` odd makes 2 invertible).
//! With that convention a repeated-line conic of the net is precisely a
//! rank-1 point of the plane, so net classification and plane classification
//! coincide. The hyperplane coordinates `δ` use the literal coefficient list
//! instead, which is the correct dual-coordinate convention for incidence:
//! `x ∈ C ⟺ ν(x) ∈ δ(C)`.

use crate::field::{Elt, Fq, LegendreClass};
use crate::geometry::{
    all_points, normalize_point, nullspace, sym3_adj, sym3_det, Subspace, Sym3,
};
use thiserror::Error;

/// Errors from the Veronese-layer operations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VeroneseError {
    /// The congruence action requires an invertible matrix.
    #[error("congruence action by a singular matrix")]
    SingularMatrix,
    /// `conic_plane_of` is only defined for rank-2 points.
    #[error("operation requires a rank-2 point, got rank {0}")]
    WrongRank(usize),
    /// `delta` of the zero form is undefined.
    #[error("zero quadratic form has no dual hyperplane")]
    ZeroForm,
    /// The three forms of a net must be linearly independent.
    #[error("forms are linearly dependent; not a net")]
    DependentForms,
    /// `classify_hyperplane` expects a 4-flat.
    #[error("subspace of projective dimension {0} is not a hyperplane of PG(5,q)")]
    NotHyperplane(usize),
}

/// Rank/orbit class of a point of `PG(5, q)` under the congruence action.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize)]
pub enum PointClass {
    /// Rank 1: a point of the Veronese surface.
    P1,
    /// Rank 2, external: the negated principal 2×2 minors are all squares.
    P2e,
    /// Rank 2, internal.
    P2i,
    /// Rank 3.
    P3,
}

/// Orbit class of a hyperplane, by its intersection with the Veronese surface.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum HyperplaneClass {
    /// Meets V in a conic (the preimage is a repeated line).
    H1,
    /// Meets V in two conics (preimage: two distinct lines), `2q + 1` points.
    H2e,
    /// Meets V in a single point (preimage: a conjugate line pair).
    H2i,
    /// Meets V in a normal rational curve (preimage: a nondegenerate conic).
    H3,
}

/// Point-orbit distribution `[n₁, n₂, n₃, n₄]` of a subspace: how many of its
/// points lie in P1, P2e, P2i, P3 respectively.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize)]
pub struct OrbitDistribution {
    pub n1: u32,
    pub n2: u32,
    pub n3: u32,
    pub n4: u32,
}

impl OrbitDistribution {
    pub fn as_array(&self) -> [u32; 4] {
        [self.n1, self.n2, self.n3, self.n4]
    }

    pub fn total(&self) -> u32 {
        self.n1 + self.n2 + self.n3 + self.n4
    }
}

impl std::fmt::Display for OrbitDistribution {
    fn fmt(&self, w: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(w, "[{}, {}, {}, {}]", self.n1, self.n2, self.n3, self.n4)
    }
}

/// A net of conics: three ternary quadratic forms, each as a coefficient list
/// `(a₀₀, a₀₁, a₀₂, a₁₁, a₁₂, a₂₂)` for
/// `a₀₀X₀² + a₀₁X₀X₁ + a₀₂X₀X₂ + a₁₁X₁² + a₁₂X₁X₂ + a₂₂X₂²`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Net {
    pub forms: [[Elt; 6]; 3],
}

/// An element of `GL(3, q)` (rows of row vectors); the congruence action
/// quotients out scalars implicitly.
pub type Mat3 = [[Elt; 3]; 3];

pub fn mat3_det(f: &Fq, a: &Mat3) -> Elt {
    let t0 = f.sub(f.mul(a[1][1], a[2][2]), f.mul(a[1][2], a[2][1]));
    let t1 = f.sub(f.mul(a[1][0], a[2][2]), f.mul(a[1][2], a[2][0]));
    let t2 = f.sub(f.mul(a[1][0], a[2][1]), f.mul(a[1][1], a[2][0]));
    f.add(
        f.sub(f.mul(a[0][0], t0), f.mul(a[0][1], t1)),
        f.mul(a[0][2], t2),
    )
}

pub fn mat3_mul(f: &Fq, a: &Mat3, b: &Mat3) -> Mat3 {
    let mut c = [[0 as Elt; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            let mut s = 0;
            for (k, bk) in b.iter().enumerate() {
                s = f.add(s, f.mul(a[i][k], bk[j]));
            }
            c[i][j] = s;
        }
    }
    c
}

/// Image `A·x` of a point of `PG(2, q)` (column-vector convention), normalized.
pub fn apply_point(f: &Fq, a: &Mat3, x: &[Elt; 3]) -> [Elt; 3] {
    let mut y = [0 as Elt; 3];
    for i in 0..3 {
        for k in 0..3 {
            y[i] = f.add(y[i], f.mul(a[i][k], x[k]));
        }
    }
    let ok = normalize_point(f, &mut y);
    debug_assert!(ok, "invertible matrices map points to points");
    y
}

/// Unpacks a 6-vector into the full symmetric matrix.
pub fn sym3_unpack(v: &Sym3) -> Mat3 {
    [
        [v[0], v[1], v[2]],
        [v[1], v[3], v[4]],
        [v[2], v[4], v[5]],
    ]
}

/// Packs a symmetric matrix into a 6-vector (symmetry debug-checked).
pub fn sym3_pack(m: &Mat3) -> Sym3 {
    debug_assert!(m[0][1] == m[1][0] && m[0][2] == m[2][0] && m[1][2] == m[2][1]);
    [m[0][0], m[0][1], m[0][2], m[1][1], m[1][2], m[2][2]]
}

/// The Veronese image `ν(x) = x·xᵀ` of a point of `PG(2, q)`.
///
/// For a normalized input the result is already canonical (its first nonzero
/// coordinate in the order `y₀, …, y₅` is the square of the leading 1).
pub fn veronese(f: &Fq, x: &[Elt; 3]) -> Sym3 {
    let mut v = [
        f.mul(x[0], x[0]),
        f.mul(x[0], x[1]),
        f.mul(x[0], x[2]),
        f.mul(x[1], x[1]),
        f.mul(x[1], x[2]),
        f.mul(x[2], x[2]),
    ];
    let ok = normalize_point(f, &mut v);
    debug_assert!(ok);
    v
}

/// Rank/orbit class of a nonzero packed symmetric matrix.
///
/// Rank 3 and rank 1 are immediate from the determinant and adjugate. For
/// rank 2 the class is external iff the negated principal 2×2 minors
/// `−|M₁₁|, −|M₂₂|, −|M₃₃|` are all squares (zero allowed, not all three —
/// that would force rank ≤ 1).
pub fn classify_point(f: &Fq, m: &Sym3) -> PointClass {
    debug_assert!(m.iter().any(|&x| x != 0), "zero matrix is not a point");
    if sym3_det(f, m) != 0 {
        return PointClass::P3;
    }
    let adj = sym3_adj(f, m);
    if adj.iter().all(|&x| x == 0) {
        return PointClass::P1;
    }
    // Principal 2×2 minors sit on the adjugate diagonal: adj = (|M₁₁|, ·, ·,
    // |M₂₂|, ·, |M₃₃|) up to the cofactor signs, which are + on the diagonal.
    let minors = [f.neg(adj[0]), f.neg(adj[3]), f.neg(adj[5])];
    let mut any_nonzero = false;
    for &v in &minors {
        match f.legendre_class(v) {
            LegendreClass::NonSquare => return PointClass::P2i,
            LegendreClass::Square => any_nonzero = true,
            LegendreClass::Zero => {}
        }
    }
    debug_assert!(any_nonzero, "all principal minors zero at rank 2 is impossible");
    PointClass::P2e
}

/// Congruence image `A·M·Aᵀ`, canonicalized. Errors on singular `A`.
pub fn act(f: &Fq, a: &Mat3, m: &Sym3) -> Result<Sym3, VeroneseError> {
    if mat3_det(f, a) == 0 {
        return Err(VeroneseError::SingularMatrix);
    }
    Ok(act_unchecked(f, a, m))
}

/// Congruence image without the invertibility check — the hot path for orbit
/// enumeration, where `A` comes from a validated group element.
#[inline]
pub fn act_unchecked(f: &Fq, a: &Mat3, m: &Sym3) -> Sym3 {
    let mf = sym3_unpack(m);
    // t = A·M
    let t = mat3_mul(f, a, &mf);
    // r = t·Aᵀ; only the upper triangle is needed
    let entry = |i: usize, j: usize| {
        let mut s = 0;
        for k in 0..3 {
            s = f.add(s, f.mul(t[i][k], a[j][k]));
        }
        s
    };
    let mut v = [
        entry(0, 0),
        entry(0, 1),
        entry(0, 2),
        entry(1, 1),
        entry(1, 2),
        entry(2, 2),
    ];
    let ok = normalize_point(f, &mut v);
    debug_assert!(ok, "congruence by an invertible matrix preserves nonzeroness");
    v
}

/// Congruence image of a subspace: act on the basis rows and re-echelonize.
pub fn act_subspace(f: &Fq, a: &Mat3, s: &Subspace<6>) -> Result<Subspace<6>, VeroneseError> {
    if mat3_det(f, a) == 0 {
        return Err(VeroneseError::SingularMatrix);
    }
    Ok(act_subspace_unchecked(f, a, s))
}

#[inline]
pub fn act_subspace_unchecked(f: &Fq, a: &Mat3, s: &Subspace<6>) -> Subspace<6> {
    let rows: Vec<Sym3> = s.rows().iter().map(|r| act_unchecked(f, a, r)).collect();
    Subspace::span(f, &rows).expect("action of an invertible matrix preserves dimension")
}

/// The unique conic plane through a rank-2 point: for kernel vector `w` of
/// `M_z`, the plane of all symmetric `M` with `M·w = 0`. It meets the
/// Veronese surface in the conic `ν(w^⊥)` of `q + 1` points.
pub fn conic_plane_of(f: &Fq, z: &Sym3) -> Result<Subspace<6>, VeroneseError> {
    let rank = crate::geometry::sym3_rank(f, z);
    if rank != 2 {
        return Err(VeroneseError::WrongRank(rank));
    }
    let m = sym3_unpack(z);
    let kernel = nullspace::<3>(f, &m);
    debug_assert_eq!(kernel.len(), 1, "rank-2 symmetric matrix has a line kernel");
    let w = kernel[0];
    // (M·w)_i = 0, written as linear constraints on the packed coordinates.
    let constraints: [[Elt; 6]; 3] = [
        [w[0], w[1], w[2], 0, 0, 0],
        [0, w[0], 0, w[1], w[2], 0],
        [0, 0, w[0], 0, w[1], w[2]],
    ];
    let basis = nullspace::<6>(f, &constraints);
    debug_assert_eq!(basis.len(), 3);
    Ok(Subspace::from_echelon_rows(basis))
}

/// Dual hyperplane `δ(C)` of a nonzero quadratic form, with the literal
/// coefficient list as dual coordinates — the convention that makes the
/// incidence `x ∈ C ⟺ ν(x) ∈ δ(C)` hold on the nose.
pub fn delta(f: &Fq, form: &[Elt; 6]) -> Result<Subspace<6>, VeroneseError> {
    if form.iter().all(|&c| c == 0) {
        return Err(VeroneseError::ZeroForm);
    }
    let basis = nullspace::<6>(f, &[*form]);
    debug_assert_eq!(basis.len(), 5);
    Ok(Subspace::from_echelon_rows(basis))
}

/// Half-Gram matrix of a quadratic form: diagonal coefficients kept, mixed
/// coefficients halved. This is the matrix of the associated bilinear form,
/// the congruence-equivariant representative of the conic.
pub fn half_gram(f: &Fq, form: &[Elt; 6]) -> Sym3 {
    let h = f.inv(2);
    [
        form[0],
        f.mul(h, form[1]),
        f.mul(h, form[2]),
        form[3],
        f.mul(h, form[4]),
        form[5],
    ]
}

/// The plane of `PG(5, q)` spanned by the half-Gram matrices of a net's three
/// forms. Errors if the forms are dependent (not a net).
pub fn net_to_plane(f: &Fq, net: &Net) -> Result<Subspace<6>, VeroneseError> {
    let rows: Vec<Sym3> = net.forms.iter().map(|fm| half_gram(f, fm)).collect();
    let s = Subspace::span(f, &rows).map_err(|_| VeroneseError::DependentForms)?;
    if s.dim() != 2 {
        return Err(VeroneseError::DependentForms);
    }
    Ok(s)
}

/// Discriminant cubic `Δ_N(x, y, z) = det(x·G₁ + y·G₂ + z·G₃)` of a net, the
/// locus of parameters where the corresponding conic is singular.
pub fn net_discriminant(
    f: &Fq,
    net: &Net,
) -> Result<crate::cubics::TernaryCubic, VeroneseError> {
    let grams: Vec<Sym3> = net.forms.iter().map(|fm| half_gram(f, fm)).collect();
    crate::cubics::det_cubic(f, &grams[0], &grams[1], &grams[2])
        .map_err(|_| VeroneseError::DependentForms)
}

/// Class of a hyperplane (4-flat) by its Veronesean section.
pub fn classify_hyperplane(
    f: &Fq,
    h: &Subspace<6>,
) -> Result<HyperplaneClass, VeroneseError> {
    if h.dim() != 4 {
        return Err(VeroneseError::NotHyperplane(h.dim()));
    }
    let q = f.order() as usize;
    let mut preimages: Vec<[Elt; 3]> = Vec::new();
    for x in all_points::<3>(f) {
        if h.contains(f, &veronese(f, &x)) {
            preimages.push(x);
        }
    }
    match preimages.len() {
        1 => Ok(HyperplaneClass::H2i),
        n if n == 2 * q + 1 => Ok(HyperplaneClass::H2e),
        n if n == q + 1 => {
            // Repeated line (all preimages collinear) vs nondegenerate conic
            // (no three collinear): one line through the first two points
            // decides it.
            let line = Subspace::<3>::span(f, &preimages[0..2])
                .expect("distinct points span a line");
            let all_on = preimages.iter().all(|p| line.contains(f, p));
            if all_on {
                Ok(HyperplaneClass::H1)
            } else {
                debug_assert!(no_three_collinear(f, &preimages));
                Ok(HyperplaneClass::H3)
            }
        }
        n => unreachable!(
            "a ternary quadratic form over F_q (q odd) has 1, q+1 or 2q+1 zeros, got {n}"
        ),
    }
}

fn no_three_collinear(f: &Fq, pts: &[[Elt; 3]]) -> bool {
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            let line = Subspace::<3>::span(f, &[pts[i], pts[j]]).unwrap();
            for (k, p) in pts.iter().enumerate() {
                if k != i && k != j && line.contains(f, p) {
                    return false;
                }
            }
        }
    }
    true
}

/// Point-orbit distribution of a subspace of `PG(5, q)`.
pub fn distribution(f: &Fq, s: &Subspace<6>) -> OrbitDistribution {
    let mut d = OrbitDistribution {
        n1: 0,
        n2: 0,
        n3: 0,
        n4: 0,
    };
    for p in s.points(f) {
        match classify_point(f, &p) {
            PointClass::P1 => d.n1 += 1,
            PointClass::P2e => d.n2 += 1,
            PointClass::P2i => d.n3 += 1,
            PointClass::P3 => d.n4 += 1,
        }
    }
    d
}

// ---------------------------------------------------------------------------
// Bulk classification table
// ---------------------------------------------------------------------------

/// Precomputed class of every nonzero vector of `F_q⁶`, for the audit hot
/// loops where a plane's 31+ points are classified by table lookup.
pub struct PointClassTable {
    q: u16,
    classes: Vec<u8>,
}

impl PointClassTable {
    const ENCODE: [u8; 4] = [0, 1, 2, 3];

    pub fn new(f: &Fq) -> PointClassTable {
        let q = f.order();
        let size = (q as usize).pow(6);
        let mut classes = vec![u8::MAX; size];
        // classify each normalized point once, then fill its scalar multiples
        for p in all_points::<6>(f) {
            let class = classify_point(f, &p) as u8;
            debug_assert!(class <= 3);
            let mut v = p;
            for s in 1..q {
                if s > 1 {
                    for (vi, pi) in v.iter_mut().zip(&p) {
                        *vi = f.mul(s, *pi);
                    }
                }
                classes[Self::index(q, &v)] = Self::ENCODE[class as usize];
            }
        }
        PointClassTable { q, classes }
    }

    #[inline(always)]
    pub fn index(q: u16, v: &Sym3) -> usize {
        let q = q as usize;
        (((((v[0] as usize * q + v[1] as usize) * q + v[2] as usize) * q + v[3] as usize)
            * q
            + v[4] as usize)
            * q)
            + v[5] as usize
    }

    /// Class of a nonzero vector (any scalar multiple of a point).
    #[inline(always)]
    pub fn classify(&self, v: &Sym3) -> PointClass {
        match self.classes[Self::index(self.q, v)] {
            0 => PointClass::P1,
            1 => PointClass::P2e,
            2 => PointClass::P2i,
            3 => PointClass::P3,
            _ => panic!("zero vector passed to PointClassTable::classify"),
        }
    }

    /// Distribution of a subspace using table lookups: iterates the
    /// normalized coefficient combinations of the basis rows directly.
    pub fn distribution(&self, f: &Fq, rows: &[Sym3]) -> OrbitDistribution {
        let q = f.order();
        let mut counts = [0u32; 4];
        match rows.len() {
            2 => {
                self.tally_combo(f, rows[0], rows[1], &mut counts);
                counts[self.classify(&rows[1]) as usize] += 1;
            }
            3 => {
                // λ = (1, a, b): r0 + a·r1 + b·r2
                let mut r2_mults: Vec<Sym3> = Vec::with_capacity(q as usize);
                for s in 0..q {
                    let mut m = rows[2];
                    for x in m.iter_mut() {
                        *x = f.mul(s, *x);
                    }
                    r2_mults.push(m);
                }
                for a in 0..q {
                    let mut base = rows[0];
                    for (bi, r1i) in base.iter_mut().zip(&rows[1]) {
                        *bi = f.add(*bi, f.mul(a, *r1i));
                    }
                    for bm in &r2_mults {
                        let mut v = base;
                        for (vi, mi) in v.iter_mut().zip(bm) {
                            *vi = f.add(*vi, *mi);
                        }
                        counts[self.classify(&v) as usize] += 1;
                    }
                }
                // λ = (0, 1, b) and (0, 0, 1)
                self.tally_combo(f, rows[1], rows[2], &mut counts);
                counts[self.classify(&rows[2]) as usize] += 1;
            }
            _ => {
                let s = Subspace::from_echelon_rows(rows.to_vec());
                return distribution(f, &s);
            }
        }
        OrbitDistribution {
            n1: counts[0],
            n2: counts[1],
            n3: counts[2],
            n4: counts[3],
        }
    }

    /// Tallies `u + t·v` for all `t` (the λ = (1, t) combinations).
    fn tally_combo(&self, f: &Fq, u: Sym3, v: Sym3, counts: &mut [u32; 4]) {
        for t in 0..f.order() {
            let mut w = u;
            for (wi, vi) in w.iter_mut().zip(&v) {
                *wi = f.add(*wi, f.mul(t, *vi));
            }
            counts[self.classify(&w) as usize] += 1;
        }
    }
}
