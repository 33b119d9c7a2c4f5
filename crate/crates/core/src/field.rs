//! Arithmetic in small finite fields `F_q` of odd order `q = p^e`.
//!
//! Everything downstream (projective geometry over `F_q`, rank classification
//! of symmetric matrices, orbit audits) funnels through this module, so the
//! representation is chosen for speed of bulk evaluation rather than
//! generality: a field element is an index `0..q` into precomputed addition,
//! multiplication, negation and inversion tables.
//!
//! An element with coordinates `(a_0, …, a_{e-1})` over `F_p` — meaning
//! `a_0 + a_1·t + … + a_{e-1}·t^{e-1}` for a root `t` of the reduction
//! modulus — is stored as the base-`p` numeral `a_0 + a_1·p + … + a_{e-1}·p^{e-1}`.
//! The numeric index order is therefore a fixed lexicographic order on
//! coordinate tuples (most significant coordinate last); "least" below always
//! refers to this order. The prime subfield occupies indices `0..p`, so small
//! integer literals embed the obvious way.
//!
//! The reduction modulus for `e > 1` is itself chosen deterministically: the
//! least monic irreducible polynomial of degree `e`, comparing coefficient
//! tuples `(c_0, …, c_{e-1})` in the same numeral order. Fields of equal order
//! are consequently identical across runs and platforms.

use thiserror::Error;

/// Largest supported field order. `13² = 169` covers every audit order `q ≤ 13`
/// together with the quadratic extensions used by the cube-class tests.
pub const MAX_ORDER: u32 = 169;

/// A field element, as an index `0..q` into the owning [`Fq`]'s tables.
///
/// Elements are meaningful only relative to the field that produced them;
/// mixing indices between fields of different order is a logic error.
pub type Elt = u16;

/// Errors arising from field construction and arithmetic.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    /// The requested characteristic is not an odd prime.
    #[error("characteristic {0} is not an odd prime")]
    NonOddPrime(u32),
    /// The requested extension degree or field order is out of range.
    #[error("unsupported extension: degree {degree} with characteristic {characteristic} (need 1 <= e <= 3 and p^e <= {MAX_ORDER})")]
    DegreeOutOfRange { characteristic: u32, degree: u32 },
    /// Division (or inversion) by zero.
    #[error("division by zero")]
    DivisionByZero,
    /// An operation that needs a nonzero input received zero.
    #[error("zero input where a nonzero element is required")]
    ZeroInput,
}

/// Square class of a field element: zero, a nonzero square, or a non-square.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LegendreClass {
    Zero,
    Square,
    NonSquare,
}

/// The field `F_q`, `q = p^e` odd, with all arithmetic precomputed.
///
/// Construction cost is `O(q²)` time and memory, which tops out well under a
/// megabyte at the supported orders; every arithmetic operation afterwards is
/// a table lookup.
#[derive(Debug, Clone)]
pub struct Fq {
    p: u16,
    e: u8,
    q: u16,
    /// Little-endian coefficients of the reduction modulus, length `e + 1`
    /// with leading coefficient 1. Empty for prime fields.
    modulus: Vec<u16>,
    add_t: Vec<Elt>,
    mul_t: Vec<Elt>,
    neg_t: Vec<Elt>,
    inv_t: Vec<Elt>,
    leg_t: Vec<LegendreClass>,
    /// `sqrt_t[a]` is the lexicographically least root of `x² = a`, or the
    /// sentinel `q` when `a` is a non-square.
    sqrt_t: Vec<Elt>,
    nonsquare: Elt,
}

fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

impl Fq {
    /// Constructs `F_{p^e}` for an odd prime `p` and degree `1 <= e <= 3`.
    ///
    /// Degrees up to 3 keep the irreducibility test elementary (a cubic or
    /// quadratic is irreducible over `F_p` iff it has no root) and already
    /// exceed every order the orbit machinery enumerates.
    pub fn new(p: u32, e: u32) -> Result<Fq, FieldError> {
        if p % 2 == 0 || !is_prime(p) {
            return Err(FieldError::NonOddPrime(p));
        }
        if e == 0 || e > 3 {
            return Err(FieldError::DegreeOutOfRange {
                characteristic: p,
                degree: e,
            });
        }
        let q: u32 = p.pow(e);
        if q > MAX_ORDER {
            return Err(FieldError::DegreeOutOfRange {
                characteristic: p,
                degree: e,
            });
        }
        let (p, e, q) = (p as u16, e as u8, q as u16);

        let modulus = if e == 1 {
            Vec::new()
        } else {
            least_irreducible_monic(p, e)
        };

        let qq = q as usize;
        let mut f = Fq {
            p,
            e,
            q,
            modulus,
            add_t: vec![0; qq * qq],
            mul_t: vec![0; qq * qq],
            neg_t: vec![0; qq],
            inv_t: vec![0; qq],
            leg_t: vec![LegendreClass::Zero; qq],
            sqrt_t: vec![q; qq],
            nonsquare: 0,
        };
        f.build_tables();
        Ok(f)
    }

    fn build_tables(&mut self) {
        let q = self.q as usize;
        for a in 0..q as Elt {
            let ca = self.decode(a);
            for b in 0..q as Elt {
                let cb = self.decode(b);
                self.add_t[a as usize * q + b as usize] = self.encode_sum(&ca, &cb);
                self.mul_t[a as usize * q + b as usize] = self.encode_product(&ca, &cb);
            }
        }
        for a in 0..q as Elt {
            // p - a_i coordinatewise; scan is cheap and reuses the add table.
            let mut neg = 0;
            for b in 0..q as Elt {
                if self.add_t[a as usize * q + b as usize] == 0 {
                    neg = b;
                    break;
                }
            }
            self.neg_t[a as usize] = neg;
        }
        for a in 1..q as Elt {
            for b in 1..q as Elt {
                if self.mul_t[a as usize * q + b as usize] == 1 {
                    self.inv_t[a as usize] = b;
                    break;
                }
            }
        }
        // Square classes via Euler's criterion, with the squaring scan filling
        // in canonical square roots as a byproduct.
        let half = (self.q as u64 - 1) / 2;
        for a in 1..q as Elt {
            let s = self.pow(a, half);
            self.leg_t[a as usize] = if s == 1 {
                LegendreClass::Square
            } else {
                debug_assert_eq!(s, self.neg_t[1]);
                LegendreClass::NonSquare
            };
        }
        for y in 0..q as Elt {
            let s = self.mul_t[y as usize * q + y as usize];
            if y < self.sqrt_t[s as usize] {
                self.sqrt_t[s as usize] = y;
            }
        }
        self.nonsquare = (1..q as Elt)
            .find(|&a| self.leg_t[a as usize] == LegendreClass::NonSquare)
            .expect("odd fields always contain a non-square");
    }

    /// Coordinates `(a_0, …, a_{e-1})` of an element, little-endian base-`p`.
    fn decode(&self, a: Elt) -> [u16; 3] {
        let mut c = [0u16; 3];
        let mut v = a;
        for ci in c.iter_mut().take(self.e as usize) {
            *ci = v % self.p;
            v /= self.p;
        }
        c
    }

    fn encode(&self, c: &[u16; 3]) -> Elt {
        let mut v = 0u32;
        for i in (0..self.e as usize).rev() {
            v = v * self.p as u32 + c[i] as u32;
        }
        v as Elt
    }

    fn encode_sum(&self, a: &[u16; 3], b: &[u16; 3]) -> Elt {
        let mut c = [0u16; 3];
        for i in 0..self.e as usize {
            c[i] = (a[i] + b[i]) % self.p;
        }
        self.encode(&c)
    }

    fn encode_product(&self, a: &[u16; 3], b: &[u16; 3]) -> Elt {
        let e = self.e as usize;
        let p = self.p as u32;
        // Schoolbook product, degree <= 2e - 2 <= 4.
        let mut prod = [0u32; 5];
        for i in 0..e {
            for j in 0..e {
                prod[i + j] += a[i] as u32 * b[j] as u32;
            }
        }
        // Reduce modulo the monic modulus m(t): subtract c·t^k·m(t) from the top.
        for k in (e..2 * e - 1).rev() {
            let c = prod[k] % p;
            if c != 0 {
                for (i, &mi) in self.modulus.iter().enumerate() {
                    // prod[k - e + i] -= c * m_i  (mod p), kept non-negative.
                    let idx = k - e + i;
                    let sub = (c * mi as u32) % p;
                    prod[idx] = (prod[idx] + p * p - sub) % p;
                }
            }
            prod[k] = 0;
        }
        let mut c = [0u16; 3];
        for i in 0..e {
            c[i] = (prod[i] % p) as u16;
        }
        self.encode(&c)
    }

    /// Characteristic `p`.
    pub fn characteristic(&self) -> u16 {
        self.p
    }

    /// Extension degree `e`.
    pub fn degree(&self) -> u8 {
        self.e
    }

    /// Field order `q = p^e`.
    pub fn order(&self) -> u16 {
        self.q
    }

    /// Little-endian coefficients of the reduction modulus (empty for prime fields).
    pub fn modulus(&self) -> &[u16] {
        &self.modulus
    }

    /// All elements in canonical order.
    pub fn elements(&self) -> impl Iterator<Item = Elt> {
        0..self.q
    }

    #[inline(always)]
    pub fn add(&self, a: Elt, b: Elt) -> Elt {
        self.add_t[a as usize * self.q as usize + b as usize]
    }

    #[inline(always)]
    pub fn sub(&self, a: Elt, b: Elt) -> Elt {
        self.add(a, self.neg_t[b as usize])
    }

    #[inline(always)]
    pub fn mul(&self, a: Elt, b: Elt) -> Elt {
        self.mul_t[a as usize * self.q as usize + b as usize]
    }

    #[inline(always)]
    pub fn neg(&self, a: Elt) -> Elt {
        self.neg_t[a as usize]
    }

    /// Multiplicative inverse of a nonzero element. Panics on zero; use
    /// [`Fq::checked_inv`] where zero can reach this from input data.
    #[inline(always)]
    pub fn inv(&self, a: Elt) -> Elt {
        assert!(a != 0, "inverse of zero");
        self.inv_t[a as usize]
    }

    pub fn checked_inv(&self, a: Elt) -> Result<Elt, FieldError> {
        if a == 0 {
            Err(FieldError::DivisionByZero)
        } else {
            Ok(self.inv_t[a as usize])
        }
    }

    /// `a / b` for nonzero `b`. Panics on zero divisor; see [`Fq::checked_div`].
    #[inline(always)]
    pub fn div(&self, a: Elt, b: Elt) -> Elt {
        self.mul(a, self.inv(b))
    }

    pub fn checked_div(&self, a: Elt, b: Elt) -> Result<Elt, FieldError> {
        Ok(self.mul(a, self.checked_inv(b)?))
    }

    /// `a^k` by square-and-multiply (`0^0 = 1`).
    pub fn pow(&self, a: Elt, mut k: u64) -> Elt {
        let mut base = a;
        let mut acc: Elt = 1;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            k >>= 1;
        }
        acc
    }

    /// Embeds an integer via the prime subfield (reduction mod `p`).
    pub fn from_int(&self, n: i64) -> Elt {
        let p = self.p as i64;
        (n.rem_euclid(p)) as Elt
    }

    /// Element with the given coordinates over `F_p` (length must equal `e`);
    /// entries are reduced mod `p`.
    pub fn from_coeffs(&self, coeffs: &[i64]) -> Result<Elt, FieldError> {
        if coeffs.len() != self.e as usize {
            return Err(FieldError::DegreeOutOfRange {
                characteristic: self.p as u32,
                degree: coeffs.len() as u32,
            });
        }
        let mut c = [0u16; 3];
        for (i, &x) in coeffs.iter().enumerate() {
            c[i] = self.from_int(x);
        }
        Ok(self.encode(&c))
    }

    /// Coordinates `(a_0, …, a_{e-1})` of an element over the prime subfield.
    pub fn coeffs(&self, a: Elt) -> Vec<u16> {
        self.decode(a)[..self.e as usize].to_vec()
    }

    /// Square class of `a`, by Euler's criterion `a^{(q-1)/2}` (precomputed).
    #[inline(always)]
    pub fn legendre_class(&self, a: Elt) -> LegendreClass {
        self.leg_t[a as usize]
    }

    /// Canonical square root: the lexicographically least `r` with `r² = a`,
    /// or `None` when `a` is a non-square.
    pub fn sqrt(&self, a: Elt) -> Option<Elt> {
        let r = self.sqrt_t[a as usize];
        (r < self.q).then_some(r)
    }

    /// The least non-square in element order; the canonical `ε` used by orbit
    /// representatives.
    pub fn canonical_nonsquare(&self) -> Elt {
        self.nonsquare
    }

    /// The least element of multiplicative order `q - 1`.
    pub fn primitive_element(&self) -> Elt {
        'cand: for g in 2..self.q {
            let mut x = g;
            let mut ord = 1u32;
            while x != 1 {
                x = self.mul(x, g);
                ord += 1;
                if ord as u32 > self.q as u32 {
                    break 'cand; // unreachable; guards against table corruption
                }
            }
            if ord == self.q as u32 - 1 {
                return g;
            }
        }
        // q = 3: the loop above starts at 2 and finds it; q > 3 always has one.
        unreachable!("every finite field has a primitive element")
    }
}

/// Least monic irreducible polynomial of degree `e` over `F_p`, little-endian
/// coefficients including the leading 1. For `e ∈ {2, 3}` irreducibility is
/// equivalent to having no root in `F_p`.
fn least_irreducible_monic(p: u16, e: u8) -> Vec<u16> {
    let pe = (p as u32).pow(e as u32);
    for m in 0..pe {
        let mut coeffs = vec![0u16; e as usize + 1];
        let mut v = m;
        for c in coeffs.iter_mut().take(e as usize) {
            *c = (v % p as u32) as u16;
            v /= p as u32;
        }
        coeffs[e as usize] = 1;
        let has_root = (0..p).any(|x| {
            let mut acc: u32 = 0;
            for &c in coeffs.iter().rev() {
                acc = (acc * x as u32 + c as u32) % p as u32;
            }
            acc == 0
        });
        if !has_root {
            return coeffs;
        }
    }
    unreachable!("irreducible polynomials of degree {e} exist over F_{p}")
}

/// The quadratic extension `F_q(√d)` of a base field, for a non-square `d`.
///
/// Elements are pairs `(a, b)` representing `a + b√d`. This stays cheap for
/// any supported base order because arithmetic delegates to the base tables;
/// no `q²`-sized tables are built.
#[derive(Debug, Clone, Copy)]
pub struct QuadExt<'f> {
    base: &'f Fq,
    d: Elt,
}

/// An element `a + b√d` of a [`QuadExt`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct QElt {
    pub a: Elt,
    pub b: Elt,
}

impl QElt {
    pub const ZERO: QElt = QElt { a: 0, b: 0 };
    pub const ONE: QElt = QElt { a: 1, b: 0 };
}

impl<'f> QuadExt<'f> {
    /// Adjoins `√d` for a non-square `d` (checked: a square `d` would make
    /// the pair representation degenerate).
    pub fn new(base: &'f Fq, d: Elt) -> QuadExt<'f> {
        assert_eq!(
            base.legendre_class(d),
            LegendreClass::NonSquare,
            "quadratic extension requires a non-square"
        );
        QuadExt { base, d }
    }

    pub fn base(&self) -> &Fq {
        self.base
    }

    pub fn adjoined_nonsquare(&self) -> Elt {
        self.d
    }

    /// Order `q²` of the extension.
    pub fn order(&self) -> u32 {
        (self.base.q as u32) * (self.base.q as u32)
    }

    pub fn embed(&self, a: Elt) -> QElt {
        QElt { a, b: 0 }
    }

    pub fn add(&self, x: QElt, y: QElt) -> QElt {
        QElt {
            a: self.base.add(x.a, y.a),
            b: self.base.add(x.b, y.b),
        }
    }

    pub fn sub(&self, x: QElt, y: QElt) -> QElt {
        QElt {
            a: self.base.sub(x.a, y.a),
            b: self.base.sub(x.b, y.b),
        }
    }

    pub fn mul(&self, x: QElt, y: QElt) -> QElt {
        let f = self.base;
        // (a₁ + b₁√d)(a₂ + b₂√d) = (a₁a₂ + d·b₁b₂) + (a₁b₂ + a₂b₁)√d
        QElt {
            a: f.add(f.mul(x.a, y.a), f.mul(self.d, f.mul(x.b, y.b))),
            b: f.add(f.mul(x.a, y.b), f.mul(x.b, y.a)),
        }
    }

    pub fn neg(&self, x: QElt) -> QElt {
        QElt {
            a: self.base.neg(x.a),
            b: self.base.neg(x.b),
        }
    }

    /// Galois conjugate `a - b√d`.
    pub fn conj(&self, x: QElt) -> QElt {
        QElt {
            a: x.a,
            b: self.base.neg(x.b),
        }
    }

    /// Norm `x · x̄ = a² - d·b²`, an element of the base field.
    pub fn norm(&self, x: QElt) -> Elt {
        let f = self.base;
        f.sub(f.mul(x.a, x.a), f.mul(self.d, f.mul(x.b, x.b)))
    }

    pub fn checked_inv(&self, x: QElt) -> Result<QElt, FieldError> {
        let n = self.norm(x);
        if n == 0 {
            // d is a non-square, so the norm form a² - d·b² is anisotropic:
            // norm zero happens only at x = 0.
            return Err(FieldError::DivisionByZero);
        }
        let ninv = self.base.inv(n);
        let c = self.conj(x);
        Ok(QElt {
            a: self.base.mul(c.a, ninv),
            b: self.base.mul(c.b, ninv),
        })
    }

    pub fn pow(&self, x: QElt, mut k: u64) -> QElt {
        let mut base = x;
        let mut acc = QElt::ONE;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            k >>= 1;
        }
        acc
    }
}

/// An element of `F_q(√−3)`: the base field itself when `−3` is a square (or
/// the characteristic is 3), otherwise the quadratic extension.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SqrtM3Elt {
    /// An element of `F_q`.
    Base(Elt),
    /// `a + b√−3` in the quadratic extension, valid only when `−3` is a
    /// non-square in `F_q`.
    Ext(Elt, Elt),
}

/// Whether a nonzero `x ∈ F_q(√−3)` is a cube there.
///
/// Three regimes, matching the structure of the multiplicative group:
/// - characteristic 3: `x ↦ x³` is the Frobenius, a bijection, so every
///   nonzero element is a cube;
/// - `−3` a square in `F_q` (equivalently `q ≡ 1 mod 3` for `p ≠ 3`):
///   `F_q(√−3) = F_q` and `x` is a cube iff `x^{(q-1)/3} = 1`;
/// - `−3` a non-square (`q ≡ 2 mod 3`): `x` is a cube in the quadratic
///   extension iff `x^{(q²-1)/3} = 1`.
///
/// Errors with [`FieldError::ZeroInput`] on zero. Passing an `Ext` element
/// when `−3` is a square is a caller bug and panics.
pub fn is_cube_in_sqrt_minus3(f: &Fq, x: SqrtM3Elt) -> Result<bool, FieldError> {
    let is_zero = match x {
        SqrtM3Elt::Base(a) => a == 0,
        SqrtM3Elt::Ext(a, b) => a == 0 && b == 0,
    };
    if is_zero {
        return Err(FieldError::ZeroInput);
    }
    if f.characteristic() == 3 {
        return Ok(true);
    }
    let q = f.order() as u64;
    let m3 = f.from_int(-3);
    match f.legendre_class(m3) {
        LegendreClass::Square => {
            let SqrtM3Elt::Base(a) = x else {
                panic!("−3 is a square in F_{q}; F_q(√−3) has no extension elements");
            };
            debug_assert_eq!(q % 3, 1);
            Ok(f.pow(a, (q - 1) / 3) == 1)
        }
        LegendreClass::NonSquare => {
            let ext = QuadExt::new(f, m3);
            let xe = match x {
                SqrtM3Elt::Base(a) => ext.embed(a),
                SqrtM3Elt::Ext(a, b) => QElt { a, b },
            };
            debug_assert_eq!((q * q) % 3, 1);
            Ok(ext.pow(xe, (q * q - 1) / 3) == QElt::ONE)
        }
        LegendreClass::Zero => unreachable!("−3 = 0 only in characteristic 3"),
    }
}
