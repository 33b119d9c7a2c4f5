//! Orbit classification of nets of conics over small odd-order fields.
//!
//! A net of conics over `F_q` is a 3-dimensional linear system of ternary
//! quadratic forms; equivalently, via Gram matrices, a plane in the projective
//! space `PG(5, q)` of symmetric 3×3 matrices. The group `PGL(3, q)` acts on
//! that space by congruence, preserving the Veronese surface of rank-1 points,
//! and this crate computes with that action:
//!
//! - [`field`]: table-backed arithmetic in `F_q` (`q = p^e` odd), square
//!   classes, and cube classes in `F_q(√−3)`;
//! - [`geometry`]: projective points and subspaces in canonical echelon form,
//!   shardable subspace enumeration, and conic point/line classes in `PG(2, q)`;
//! - [`veronese`]: the Veronese embedding, rank classes of symmetric matrices,
//!   the congruence action, hyperplane classes, and the net ↔ plane dictionary;
//! - [`cubics`]: ternary and binary cubic forms — determinantal cubics, linear
//!   components, singular points, Hessians and rational inflexions;
//! - [`classify`]: the 15 line-orbit and 15 plane-orbit labels, deterministic
//!   classifiers, and canonical orbit representatives;
//! - [`orbits`]: explicit group enumeration, orbit closures, stabilizers,
//!   conjugating-witness search, and exhaustive audits with machine-readable
//!   reports.
//!
//! Everything is deterministic: fields, representatives, enumeration orders
//! and reports are identical across runs and platforms.

pub mod classify;
pub mod cubics;
pub mod field;
pub mod geometry;
pub mod orbits;
pub mod veronese;
