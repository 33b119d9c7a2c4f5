//! Ternary and binary cubic forms over `F_q` — the determinantal cubics cut
//! out on planes and lines of `PG(5, q)` — together with the invariants that
//! tell the colliding orbit classes apart: linear components, residual
//! conics, singular points, Hessians, and rational inflexion counts.
//!
//! Conventions: a ternary cubic in the parameters `(α, β, γ)` is stored as
//! ten coefficients in the degree-lexicographic monomial order
//!
//! ```text
//!   α³, α²β, α²γ, αβ², αβγ, αγ², β³, β²γ, βγ², γ³
//! ```
//!
//! and a binary cubic in `(α, β)` as `(α³, α²β, αβ², β³)`. Lines of the
//! parameter plane are dual coordinate vectors normalized like points.
//! Formal derivatives are used throughout; they are valid in every odd
//! characteristic, but inflexion counting is refused in characteristic 3,
//! where the Hessian criterion breaks down (the classifier never needs it
//! there).

use crate::field::{Elt, Fq};
use crate::geometry::{all_points, echelonize, line_points, normalize_point, Sym3};
use crate::veronese::{sym3_unpack, Mat3};
use thiserror::Error;

/// Errors from cubic-form computations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CubicsError {
    /// `det_cubic` requires three independent matrices.
    #[error("the three matrices do not span a plane")]
    DependentBasis,
    /// Component/singularity/inflexion analysis of the zero form is undefined.
    #[error("cubic form is identically zero")]
    IdenticallyZero,
    /// Inflexion counting is not meaningful in characteristic 3.
    #[error("rational inflexion counting is unsupported in characteristic 3")]
    CharThreeUnsupported,
}

/// Exponent triples of the ten cubic monomials, in the stored order.
pub const MONO_EXPS: [[u8; 3]; 10] = [
    [3, 0, 0],
    [2, 1, 0],
    [2, 0, 1],
    [1, 2, 0],
    [1, 1, 1],
    [1, 0, 2],
    [0, 3, 0],
    [0, 2, 1],
    [0, 1, 2],
    [0, 0, 3],
];

/// Index of the `αβγ` monomial in [`MONO_EXPS`].
pub const MONO_XYZ: usize = 4;

/// Exponent triples of the six quadratic monomials: `α², αβ, αγ, β², βγ, γ²`.
/// This is the same layout as the coefficient lists of ternary quadratic
/// forms used elsewhere in the crate.
pub const QUAD_EXPS: [[u8; 3]; 6] = [
    [2, 0, 0],
    [1, 1, 0],
    [1, 0, 1],
    [0, 2, 0],
    [0, 1, 1],
    [0, 0, 2],
];

/// A ternary cubic form, projective class; may be identically zero (planes
/// inside the rank-≤2 locus produce the zero determinant).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct TernaryCubic {
    coeffs: [Elt; 10],
}

impl TernaryCubic {
    pub fn new(coeffs: [Elt; 10]) -> TernaryCubic {
        TernaryCubic { coeffs }
    }

    pub fn coeffs(&self) -> &[Elt; 10] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    pub fn eval(&self, f: &Fq, p: &[Elt; 3]) -> Elt {
        let mut acc = 0;
        for (c, e) in self.coeffs.iter().zip(&MONO_EXPS) {
            if *c == 0 {
                continue;
            }
            let mut term = *c;
            for (v, &k) in p.iter().zip(e) {
                for _ in 0..k {
                    term = f.mul(term, *v);
                }
            }
            acc = f.add(acc, term);
        }
        acc
    }

    /// Formal partial derivative with respect to variable `var` (0, 1 or 2),
    /// as a quadratic in the [`QUAD_EXPS`] layout.
    pub fn derivative(&self, f: &Fq, var: usize) -> [Elt; 6] {
        let mut out = [0; 6];
        for (c, e) in self.coeffs.iter().zip(&MONO_EXPS) {
            if *c == 0 || e[var] == 0 {
                continue;
            }
            let mut de = *e;
            de[var] -= 1;
            let idx = QUAD_EXPS.iter().position(|q| *q == de).unwrap();
            out[idx] = f.add(out[idx], f.mul(f.from_int(e[var] as i64), *c));
        }
        out
    }
}

/// A binary cubic form `c₀α³ + c₁α²β + c₂αβ² + c₃β³`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BinaryCubic {
    pub coeffs: [Elt; 4],
}

/// Factorization type of a binary cubic over `F_q`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BinaryFactorType {
    Zero,
    TripleRoot,
    DoublePlusSimple,
    ThreeDistinctRational,
    OneRationalPlusIrreducibleQuadratic,
    Irreducible,
}

/// Number of rational inflexion points, or `Unavailable` in characteristic 3.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum InflexionCount {
    Count(u32),
    Unavailable,
}

/// The degree-2 factor left after dividing out all linear components.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ConicResidual {
    /// Coefficients in the [`QUAD_EXPS`] layout.
    pub coeffs: [Elt; 6],
    /// Whether the residual conic is nondegenerate (rank-3 Gram matrix).
    /// A degenerate irreducible residual is a conjugate line pair.
    pub nondegenerate: bool,
}

/// The projective-substitution-invariant shape of a cubic: its linear
/// components with multiplicity, the residual conic (if the linear part has
/// degree exactly 1), singular points, and the rational inflexion count.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CubicProfile {
    /// `(dual coordinates, multiplicity)`, in point-enumeration order.
    pub linear_components: Vec<([Elt; 3], u32)>,
    /// True iff the cubic is `line × (F_q-irreducible conic)`.
    pub has_irreducible_conic_factor: bool,
    pub residual: Option<ConicResidual>,
    pub singular_points: Vec<[Elt; 3]>,
    pub inflexions: InflexionCount,
}

// ---------------------------------------------------------------------------
// Small polynomial arithmetic (linear × linear × linear expansions)
// ---------------------------------------------------------------------------

type Lin = [Elt; 3];

fn lin_mul(f: &Fq, a: &Lin, b: &Lin) -> [Elt; 6] {
    [
        f.mul(a[0], b[0]),
        f.add(f.mul(a[0], b[1]), f.mul(a[1], b[0])),
        f.add(f.mul(a[0], b[2]), f.mul(a[2], b[0])),
        f.mul(a[1], b[1]),
        f.add(f.mul(a[1], b[2]), f.mul(a[2], b[1])),
        f.mul(a[2], b[2]),
    ]
}

fn quad_lin_mul(f: &Fq, q: &[Elt; 6], l: &Lin) -> [Elt; 10] {
    let mut out = [0; 10];
    for (qc, qe) in q.iter().zip(&QUAD_EXPS) {
        if *qc == 0 {
            continue;
        }
        for (v, lc) in l.iter().enumerate() {
            if *lc == 0 {
                continue;
            }
            let mut e = *qe;
            e[v] += 1;
            let idx = MONO_EXPS.iter().position(|m| *m == e).unwrap();
            out[idx] = f.add(out[idx], f.mul(*qc, *lc));
        }
    }
    out
}

/// Determinant of a 3×3 matrix whose entries are linear forms in `(α,β,γ)`,
/// by signed permutation expansion.
fn det3_linear(f: &Fq, m: &[[Lin; 3]; 3]) -> [Elt; 10] {
    const PERMS: [([usize; 3], bool); 6] = [
        ([0, 1, 2], false),
        ([1, 2, 0], false),
        ([2, 0, 1], false),
        ([0, 2, 1], true),
        ([2, 1, 0], true),
        ([1, 0, 2], true),
    ];
    let mut acc = [0; 10];
    for (perm, negate) in PERMS {
        let q = lin_mul(f, &m[0][perm[0]], &m[1][perm[1]]);
        let term = quad_lin_mul(f, &q, &m[2][perm[2]]);
        for (a, t) in acc.iter_mut().zip(term) {
            *a = if negate { f.sub(*a, t) } else { f.add(*a, t) };
        }
    }
    acc
}

// ---------------------------------------------------------------------------
// Determinantal cubics
// ---------------------------------------------------------------------------

/// The cubic `det(αA + βB + γC)` of a plane basis. Its zero set is exactly
/// the set of parameters where the combined matrix has rank ≤ 2.
pub fn det_cubic(f: &Fq, a: &Sym3, b: &Sym3, c: &Sym3) -> Result<TernaryCubic, CubicsError> {
    let mut rows = vec![*a, *b, *c];
    echelonize(f, &mut rows);
    if rows.len() != 3 {
        return Err(CubicsError::DependentBasis);
    }
    let (am, bm, cm) = (sym3_unpack(a), sym3_unpack(b), sym3_unpack(c));
    let mut entries = [[[0 as Elt; 3]; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            entries[i][j] = [am[i][j], bm[i][j], cm[i][j]];
        }
    }
    Ok(TernaryCubic::new(det3_linear(f, &entries)))
}

/// The binary cubic `det(αA + βB)` of a line basis.
pub fn det_binary_cubic(f: &Fq, a: &Sym3, b: &Sym3) -> BinaryCubic {
    let (am, bm) = (sym3_unpack(a), sym3_unpack(b));
    let mut entries = [[[0 as Elt; 3]; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            entries[i][j] = [am[i][j], bm[i][j], 0];
        }
    }
    let full = det3_linear(f, &entries);
    // only the γ-free monomials survive: α³, α²β, αβ², β³
    BinaryCubic {
        coeffs: [full[0], full[1], full[3], full[6]],
    }
}

/// Substitution `F(A·v)` — the transform of a cubic under a projectivity of
/// the parameter plane.
pub fn substitute(f: &Fq, cubic: &TernaryCubic, a: &Mat3) -> TernaryCubic {
    let mut acc = [0; 10];
    for (c, e) in cubic.coeffs().iter().zip(&MONO_EXPS) {
        if *c == 0 {
            continue;
        }
        // (A·v)_i = row_i(A) · v, so the monomial becomes a product of rows
        let mut factors: Vec<&[Elt; 3]> = Vec::with_capacity(3);
        for (i, &k) in e.iter().enumerate() {
            for _ in 0..k {
                factors.push(&a[i]);
            }
        }
        let q = lin_mul(f, factors[0], factors[1]);
        let term = quad_lin_mul(f, &q, factors[2]);
        for (dst, t) in acc.iter_mut().zip(term) {
            *dst = f.add(*dst, f.mul(*c, t));
        }
    }
    TernaryCubic::new(acc)
}

// ---------------------------------------------------------------------------
// Division by linear forms
// ---------------------------------------------------------------------------

fn permute3<T: Copy>(v: &[T; 3], perm: &[usize; 3]) -> [T; 3] {
    [v[perm[0]], v[perm[1]], v[perm[2]]]
}

fn permute_cubic(f: &Fq, c: &[Elt; 10], perm: &[usize; 3]) -> [Elt; 10] {
    let _ = f;
    let mut out = [0; 10];
    for (coef, e) in c.iter().zip(&MONO_EXPS) {
        // the monomial x_{perm[i]} picks up exponent e[i] — i.e. the new
        // exponent vector at position perm[i] is e[i]
        let mut ne = [0u8; 3];
        for i in 0..3 {
            ne[perm[i]] = e[i];
        }
        let idx = MONO_EXPS.iter().position(|m| *m == ne).unwrap();
        out[idx] = *coef;
    }
    out
}

fn permute_quad(q: &[Elt; 6], perm: &[usize; 3]) -> [Elt; 6] {
    let mut out = [0; 6];
    for (coef, e) in q.iter().zip(&QUAD_EXPS) {
        let mut ne = [0u8; 3];
        for i in 0..3 {
            ne[perm[i]] = e[i];
        }
        let idx = QUAD_EXPS.iter().position(|m| *m == ne).unwrap();
        out[idx] = *coef;
    }
    out
}

/// Exact division of a cubic by a linear form; returns the quadratic
/// quotient, or `None` when the form is not a factor.
pub fn divide_by_linear(f: &Fq, cubic: &TernaryCubic, l: &Lin) -> Option<[Elt; 6]> {
    let pivot = l.iter().position(|&c| c != 0)?;
    // move the pivot variable into position 0 (the permutation is an
    // involution, so it maps back the same way)
    let perm: [usize; 3] = match pivot {
        0 => [0, 1, 2],
        1 => [1, 0, 2],
        _ => [2, 1, 0],
    };
    let c = permute_cubic(f, cubic.coeffs(), &perm);
    let lp = permute3(l, &perm);
    let l0inv = f.inv(lp[0]);
    let (m1, m2) = (lp[1], lp[2]); // l = l0·α + m1·β + m2·γ

    // Horner layers in α: c = f3·α³ + f2(β,γ)·α² + f1(β,γ)·α + f0(β,γ)
    let f3 = c[0];
    let f2 = [c[1], c[2]]; // β, γ
    let f1 = [c[3], c[4], c[5]]; // β², βγ, γ²
    let f0 = [c[6], c[7], c[8], c[9]]; // β³, β²γ, βγ², γ³

    let q2 = f.mul(f3, l0inv);
    let q1 = [
        f.mul(f.sub(f2[0], f.mul(q2, m1)), l0inv),
        f.mul(f.sub(f2[1], f.mul(q2, m2)), l0inv),
    ];
    let q0 = [
        f.mul(f.sub(f1[0], f.mul(q1[0], m1)), l0inv),
        f.mul(
            f.sub(f1[1], f.add(f.mul(q1[0], m2), f.mul(q1[1], m1))),
            l0inv,
        ),
        f.mul(f.sub(f1[2], f.mul(q1[1], m2)), l0inv),
    ];
    let rem = [
        f.sub(f0[0], f.mul(q0[0], m1)),
        f.sub(f0[1], f.add(f.mul(q0[0], m2), f.mul(q0[1], m1))),
        f.sub(f0[2], f.add(f.mul(q0[1], m2), f.mul(q0[2], m1))),
        f.sub(f0[3], f.mul(q0[2], m2)),
    ];
    if rem.iter().any(|&r| r != 0) {
        return None;
    }
    let quotient = [q2, q1[0], q1[1], q0[0], q0[1], q0[2]];
    Some(permute_quad(&quotient, &perm))
}

/// Exact division of a quadratic by a linear form; returns the linear
/// quotient if divisible.
pub fn divide_quad_by_linear(f: &Fq, quad: &[Elt; 6], l: &Lin) -> Option<Lin> {
    let pivot = l.iter().position(|&c| c != 0)?;
    let perm: [usize; 3] = match pivot {
        0 => [0, 1, 2],
        1 => [1, 0, 2],
        _ => [2, 1, 0],
    };
    let q = permute_quad(quad, &perm);
    let lp = permute3(l, &perm);
    let l0inv = f.inv(lp[0]);
    let (m1, m2) = (lp[1], lp[2]);
    // q = g2·α² + g1(β,γ)·α + g0(β,γ)
    let g2 = q[0];
    let g1 = [q[1], q[2]];
    let g0 = [q[3], q[4], q[5]];
    let q1 = f.mul(g2, l0inv);
    let q0 = [
        f.mul(f.sub(g1[0], f.mul(q1, m1)), l0inv),
        f.mul(f.sub(g1[1], f.mul(q1, m2)), l0inv),
    ];
    let rem = [
        f.sub(g0[0], f.mul(q0[0], m1)),
        f.sub(g0[1], f.add(f.mul(q0[0], m2), f.mul(q0[1], m1))),
        f.sub(g0[2], f.mul(q0[1], m2)),
    ];
    if rem.iter().any(|&r| r != 0) {
        return None;
    }
    Some(permute3(&[q1, q0[0], q0[1]], &perm))
}

// ---------------------------------------------------------------------------
// Component structure
// ---------------------------------------------------------------------------

/// All lines of the parameter plane dividing the cubic, with multiplicity.
/// Candidate lines are screened by point containment (a nonzero binary cubic
/// has at most 3 roots, so vanishing on all `q + 1 ≥ 4` points of a line
/// certifies divisibility) and multiplicities confirmed by exact division.
pub fn linear_components(
    f: &Fq,
    cubic: &TernaryCubic,
) -> Result<Vec<(Lin, u32)>, CubicsError> {
    if cubic.is_zero() {
        return Err(CubicsError::IdenticallyZero);
    }
    let mut out = Vec::new();
    for l in all_points::<3>(f) {
        if !line_points(f, &l).iter().all(|p| cubic.eval(f, p) == 0) {
            continue;
        }
        let q1 = divide_by_linear(f, cubic, &l)
            .expect("containment on q+1 > 3 points implies divisibility");
        let mut mult = 1;
        if let Some(q2) = divide_quad_by_linear(f, &q1, &l) {
            mult = 2;
            // triple factor iff the final linear quotient is l itself
            let mut q2n = q2;
            let ok = normalize_point(f, &mut q2n);
            if ok && q2n == l {
                mult = 3;
            }
        }
        out.push((l, mult));
    }
    Ok(out)
}

/// Points where the cubic and all three formal partials vanish.
pub fn singular_points(f: &Fq, cubic: &TernaryCubic) -> Result<Vec<[Elt; 3]>, CubicsError> {
    if cubic.is_zero() {
        return Err(CubicsError::IdenticallyZero);
    }
    let partials = [
        cubic.derivative(f, 0),
        cubic.derivative(f, 1),
        cubic.derivative(f, 2),
    ];
    let mut out = Vec::new();
    for p in all_points::<3>(f) {
        if cubic.eval(f, &p) == 0 && partials.iter().all(|d| eval_quad(f, d, &p) == 0) {
            out.push(p);
        }
    }
    Ok(out)
}

/// Evaluates a quadratic in the [`QUAD_EXPS`] layout.
pub fn eval_quad(f: &Fq, q: &[Elt; 6], p: &[Elt; 3]) -> Elt {
    let mut acc = 0;
    for (c, e) in q.iter().zip(&QUAD_EXPS) {
        if *c == 0 {
            continue;
        }
        let mut term = *c;
        for (v, &k) in p.iter().zip(e) {
            for _ in 0..k {
                term = f.mul(term, *v);
            }
        }
        acc = f.add(acc, term);
    }
    acc
}

/// The Hessian determinant of the matrix of formal second partials. Defined
/// in every odd characteristic, but only used as an inflexion criterion when
/// the characteristic is not 3.
pub fn hessian(f: &Fq, cubic: &TernaryCubic) -> TernaryCubic {
    let mut second = [[[0 as Elt; 3]; 3]; 3];
    for (i, row) in second.iter_mut().enumerate() {
        let first = cubic.derivative(f, i);
        for (j, entry) in row.iter_mut().enumerate() {
            // derivative of a quadratic w.r.t. variable j, as a linear form
            let mut lin = [0 as Elt; 3];
            for (c, e) in first.iter().zip(&QUAD_EXPS) {
                if *c == 0 || e[j] == 0 {
                    continue;
                }
                let mut de = *e;
                de[j] -= 1;
                let var = de.iter().position(|&x| x == 1).unwrap_or(usize::MAX);
                let coef = f.mul(f.from_int(e[j] as i64), *c);
                if var == usize::MAX {
                    // de == (0,0,0) never happens for a homogeneous quadratic
                    unreachable!();
                }
                lin[var] = f.add(lin[var], coef);
            }
            *entry = lin;
        }
    }
    TernaryCubic::new(det3_linear(f, &second))
}

/// Rational inflexion points: nonsingular points of the cubic where the
/// Hessian also vanishes. Singular points are excluded explicitly — the
/// Hessian vanishes at a node too, and the count-0 characterizations used by
/// the plane classifier depend on the exclusion.
pub fn rational_inflexion_points(
    f: &Fq,
    cubic: &TernaryCubic,
) -> Result<Vec<[Elt; 3]>, CubicsError> {
    if f.characteristic() == 3 {
        return Err(CubicsError::CharThreeUnsupported);
    }
    if cubic.is_zero() {
        return Err(CubicsError::IdenticallyZero);
    }
    let h = hessian(f, cubic);
    let partials = [
        cubic.derivative(f, 0),
        cubic.derivative(f, 1),
        cubic.derivative(f, 2),
    ];
    let mut out = Vec::new();
    for p in all_points::<3>(f) {
        if cubic.eval(f, &p) != 0 || h.eval(f, &p) != 0 {
            continue;
        }
        if partials.iter().any(|d| eval_quad(f, d, &p) != 0) {
            out.push(p);
        }
    }
    Ok(out)
}

pub fn rational_inflexion_count(f: &Fq, cubic: &TernaryCubic) -> Result<u32, CubicsError> {
    Ok(rational_inflexion_points(f, cubic)?.len() as u32)
}

/// The full substitution-invariant profile of a nonzero cubic.
pub fn cubic_profile(f: &Fq, cubic: &TernaryCubic) -> Result<CubicProfile, CubicsError> {
    let components = linear_components(f, cubic)?;
    let linear_degree: u32 = components.iter().map(|&(_, m)| m).sum();
    debug_assert!(
        matches!(linear_degree, 0 | 1 | 3),
        "a degree-1 or degree-2 residual with a rational linear factor is impossible"
    );
    let residual = if linear_degree == 1 {
        let (l, _) = components[0];
        let r = divide_by_linear(f, cubic, &l).expect("component divides");
        let nondegenerate = {
            // Gram rank of the residual: diagonal kept, mixed halved
            let h = f.inv(2);
            let gram: Sym3 = [
                r[0],
                f.mul(h, r[1]),
                f.mul(h, r[2]),
                r[3],
                f.mul(h, r[4]),
                r[5],
            ];
            crate::geometry::sym3_rank(f, &gram) == 3
        };
        Some(ConicResidual {
            coeffs: r,
            nondegenerate,
        })
    } else {
        None
    };
    let singular = singular_points(f, cubic)?;
    let inflexions = if f.characteristic() == 3 {
        InflexionCount::Unavailable
    } else {
        InflexionCount::Count(rational_inflexion_count(f, cubic)?)
    };
    Ok(CubicProfile {
        has_irreducible_conic_factor: linear_degree == 1,
        linear_components: components,
        residual,
        singular_points: singular,
        inflexions,
    })
}

// ---------------------------------------------------------------------------
// Binary cubics
// ---------------------------------------------------------------------------

impl BinaryCubic {
    pub fn eval(&self, f: &Fq, p: &[Elt; 2]) -> Elt {
        let c = &self.coeffs;
        let (a, b) = (p[0], p[1]);
        let mut acc = f.mul(c[0], f.mul(a, f.mul(a, a)));
        acc = f.add(acc, f.mul(c[1], f.mul(a, f.mul(a, b))));
        acc = f.add(acc, f.mul(c[2], f.mul(a, f.mul(b, b))));
        f.add(acc, f.mul(c[3], f.mul(b, f.mul(b, b))))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }
}

/// Divides a binary cubic by `l₀α + l₁β`, if exact.
fn divide_binary(f: &Fq, c: &[Elt; 4], l: &[Elt; 2]) -> Option<[Elt; 3]> {
    if l[0] != 0 {
        let inv = f.inv(l[0]);
        let d0 = f.mul(c[0], inv);
        let d1 = f.mul(f.sub(c[1], f.mul(l[1], d0)), inv);
        let d2 = f.mul(f.sub(c[2], f.mul(l[1], d1)), inv);
        (f.mul(l[1], d2) == c[3]).then_some([d0, d1, d2])
    } else {
        // dividing by β
        (c[0] == 0).then_some([c[1], c[2], c[3]])
    }
}

fn divide_binary_quad(f: &Fq, c: &[Elt; 3], l: &[Elt; 2]) -> Option<[Elt; 2]> {
    if l[0] != 0 {
        let inv = f.inv(l[0]);
        let d0 = f.mul(c[0], inv);
        let d1 = f.mul(f.sub(c[1], f.mul(l[1], d0)), inv);
        (f.mul(l[1], d1) == c[2]).then_some([d0, d1])
    } else {
        (c[0] == 0).then_some([c[1], c[2]])
    }
}

/// Factorization type over `F_q`, by root enumeration over `PG(1, q)` with
/// multiplicities confirmed by exact division.
pub fn binary_factor_type(f: &Fq, cubic: &BinaryCubic) -> BinaryFactorType {
    if cubic.is_zero() {
        return BinaryFactorType::Zero;
    }
    let mut mults: Vec<u32> = Vec::new();
    // points (1, t) for all t, then (0, 1)
    let mut points: Vec<[Elt; 2]> = f.elements().map(|t| [1, t]).collect();
    points.push([0, 1]);
    for p in points {
        if cubic.eval(f, &p) != 0 {
            continue;
        }
        // the linear factor vanishing at (a, b) is b·α − a·β
        let l = [p[1], f.neg(p[0])];
        let q = divide_binary(f, &cubic.coeffs, &l).expect("root of a binary form divides");
        let mut m = 1;
        if let Some(r) = divide_binary_quad(f, &q, &l) {
            m = 2;
            // normalize both linear forms and compare for the triple case
            let scale = |v: [Elt; 2]| {
                let lead = if v[0] != 0 { v[0] } else { v[1] };
                [f.div(v[0], lead), f.div(v[1], lead)]
            };
            if r != [0, 0] && scale(r) == scale(l) {
                m = 3;
            }
        }
        mults.push(m);
    }
    mults.sort_unstable();
    match mults.as_slice() {
        [] => BinaryFactorType::Irreducible,
        [1] => BinaryFactorType::OneRationalPlusIrreducibleQuadratic,
        [3] => BinaryFactorType::TripleRoot,
        [1, 2] => BinaryFactorType::DoublePlusSimple,
        [1, 1, 1] => BinaryFactorType::ThreeDistinctRational,
        other => unreachable!("impossible multiplicity pattern {other:?}"),
    }
}
