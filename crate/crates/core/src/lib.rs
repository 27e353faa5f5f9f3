//! Exact-arithmetic machinery for integral points on the quartic surfaces
//! `x^4 + y^4 - w^2 = n`.
//!
//! The surfaces compactify to del Pezzo surfaces of degree 2, and for
//! `n ∈ {m^2, ±2m^2, m^4, -4m^4}` they carry explicit conic bundle
//! fibrations. Every integer solution lies on a fiber conic, and fibers
//! whose boundary points are real quadratic carry whole Pell orbits of
//! further solutions. This crate implements:
//!
//! * [`exact`] — big-integer square roots, perfect-power tests, primitive
//!   projective pairs;
//! * [`pell`] — continued fractions of `√D`, fundamental units, class
//!   representatives and unit orbits for `U² − D·V² = N`;
//! * [`conic`] — integer conics, boundary classification, reduction of an
//!   affine conic to a Pell system, and integral-point orbit generation;
//! * [`surface`] — the case classification, the fibration maps and fiber
//!   conics, the Geiser involution, and the per-case goodness tests;
//! * [`engine`] — the double-fibration generation loop with a
//!   deduplicated, provenance-tagged solution ledger;
//! * [`search`] — bounded brute-force seed search and the Fauquembergue
//!   quartic identity for `n = 1`;
//! * [`cubes`] — the analogous conic-bundle demonstrator on the cubic
//!   surface `x³ + y³ + z³ + w³ = 0`.
//!
//! All arithmetic is exact; no floating point is used anywhere.

pub mod conic;
pub mod cubes;
pub mod engine;
pub mod exact;
pub mod pell;
pub mod search;
pub mod surface;

pub use conic::{AffineConic, BinaryForm, BoundaryType, PellSystem, TernaryForm};
pub use engine::{GenConfig, GenOutcome, LedgerEntry, Provenance};
pub use exact::{Int, Rat};
pub use pell::{PellSolution, PellUnit};
pub use surface::{CaseKind, Fiber, GoodnessReport, Solution};
