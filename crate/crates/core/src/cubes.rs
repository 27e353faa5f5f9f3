//! Conic-bundle demonstrator on the Fermat cubic surface
//! `x³ + y³ + z³ + w³ = 0`.
//!
//! In the coordinates `(x₀, x₁, x₂, x₃) = (x+y, x−y, z+w, z−w)` the
//! surface becomes `x₀(x₀² + 3x₁²) + x₂(x₂² + 3x₃²) = 0` and the planes
//! through the line `x₀ = x₂ = 0` cut out a conic bundle
//!
//! ```text
//! π₁(x₀, x₁, x₂, x₃) = (x₀ : x₂),
//! C_{s,t}: (s³ + t³)·y₀² + 3s·y₁² + 3t·y₂² = 0,
//! ```
//!
//! whose fiber over `(s : t)` meets the boundary plane `w = 0` in a real
//! quadratic point iff `−s(s³ + 4t³)` is positive and not a square. On
//! the `w = 1` chart this gives an engine for `x³ + y³ + z³ = −1`; the
//! published solutions negate all coordinates and solve `x³+y³+z³ = 1`.
//!
//! Only fibers with `s = 1` get Pell-orbit generation: there the plane
//! substitution `z = t(x+y) − 1` is integral on the nose, and the fiber
//! conic in `(x, y)` is
//!
//! ```text
//! (1+t³)x² + (2t³−1)xy + (1+t³)y² − 3t²x − 3t²y + 3t = 0.
//! ```

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use std::collections::BTreeSet;
use thiserror::Error;

use crate::conic::{pell_reduce, AffineConic, ConicError};
use crate::exact::{is_square, primitive_pair};
use crate::pell::{self, Direction};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CubeError {
    #[error("({0}, {1}, {2}) does not satisfy x³ + y³ + z³ = −1")]
    NotASolution(BigInt, BigInt, BigInt),
    #[error("point ({0}, {1}) does not lie on the fiber conic")]
    PointOffConic(BigInt, BigInt),
    #[error("both fibration charts vanish; impossible for a surface point")]
    NoFiber,
}

/// Solution of `x³ + y³ + z³ = −1` (the `w = 1` chart of the cubic).
/// [`CubeSolution::public`] negates into a solution of `x³+y³+z³ = 1`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CubeSolution {
    pub x: BigInt,
    pub y: BigInt,
    pub z: BigInt,
}

impl CubeSolution {
    pub fn new(x: BigInt, y: BigInt, z: BigInt) -> Result<CubeSolution, CubeError> {
        let sol = CubeSolution { x, y, z };
        if !sol.verify() {
            return Err(CubeError::NotASolution(sol.x, sol.y, sol.z));
        }
        Ok(sol)
    }

    pub fn verify(&self) -> bool {
        let cube = |v: &BigInt| v * v * v;
        cube(&self.x) + cube(&self.y) + cube(&self.z) + BigInt::one() == BigInt::zero()
    }

    /// The negated triple, solving `x³ + y³ + z³ = 1`.
    pub fn public(&self) -> (BigInt, BigInt, BigInt) {
        (-&self.x, -&self.y, -&self.z)
    }

    /// Coordinates sorted ascending; the six permutations act on
    /// solutions, so this is a canonical orbit representative.
    pub fn canonical_key(&self) -> (BigInt, BigInt, BigInt) {
        let mut v = [self.x.clone(), self.y.clone(), self.z.clone()];
        v.sort();
        let [a, b, c] = v;
        (a, b, c)
    }

    pub fn max_bits(&self) -> u64 {
        self.x.bits().max(self.y.bits()).max(self.z.bits())
    }
}

impl std::fmt::Display for CubeSolution {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, {}, {})", self.x, self.y, self.z)
    }
}

/// Primitive fiber label of the cubic's conic bundle.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CubeFiber {
    pub s: BigInt,
    pub t: BigInt,
}

impl std::fmt::Display for CubeFiber {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({} : {})", self.s, self.t)
    }
}

/// The fiber through a solution: chart `(x₀ : x₂) = (x+y : z+1)`, with
/// the second chart `(−x₂² − 3x₃² : x₀² + 3x₁²)` taking over when the
/// first vanishes.
pub fn cube_pi1(sol: &CubeSolution) -> Result<CubeFiber, CubeError> {
    let x0 = &sol.x + &sol.y;
    let x2: BigInt = &sol.z + 1;
    let (s, t) = if !x0.is_zero() || !x2.is_zero() {
        (x0, x2)
    } else {
        let x1 = &sol.x - &sol.y;
        let x3 = &sol.z - 1;
        let s: BigInt = -(&x2 * &x2) - 3 * &x3 * &x3;
        let t: BigInt = &x0 * &x0 + 3 * &x1 * &x1;
        if s.is_zero() && t.is_zero() {
            return Err(CubeError::NoFiber);
        }
        (s, t)
    };
    let (s, t) = primitive_pair(&s, &t).expect("nonzero pair");
    Ok(CubeFiber { s, t })
}

/// The affine fiber conic over `(1 : t)` in the plane coordinates
/// `(x, y)` with `z = t(x+y) − 1`, content-reduced.
pub fn cube_fiber_conic(t: &BigInt) -> AffineConic {
    let t2 = t * t;
    let t3 = &t2 * t;
    AffineConic::new(
        1 + &t3,
        2 * &t3 - 1,
        1 + &t3,
        -3 * &t2,
        -3 * &t2,
        3 * t,
    )
    .expect("cube fiber conic never vanishes identically")
}

/// The real-quadratic boundary test for the fiber over `(s : t)`:
/// `−s(s³ + 4t³) > 0` and not a perfect square.
pub fn cube_boundary_real(s: &BigInt, t: &BigInt) -> bool {
    let val: BigInt = -s * (s * s * s + 4 * t * t * t);
    val.is_positive() && is_square(&val).is_none()
}

/// Lift a point of the fiber conic over `(1 : t)` back to the surface:
/// `(x, y, t(x+y) − 1)`.
pub fn cube_recover(t: &BigInt, point: (&BigInt, &BigInt)) -> Result<CubeSolution, CubeError> {
    let conic = cube_fiber_conic(t);
    let (x, y) = point;
    if !conic.contains(x, y) {
        return Err(CubeError::PointOffConic(x.clone(), y.clone()));
    }
    let z = t * (x + y) - 1;
    CubeSolution::new(x.clone(), y.clone(), z)
}

/// The coordinate swap `(x, y, z) ↦ (x, z, y)`; composing with `π₁`
/// reads off the second fibration's fiber label.
pub fn cube_swap(sol: &CubeSolution) -> CubeSolution {
    CubeSolution { x: sol.x.clone(), y: sol.z.clone(), z: sol.y.clone() }
}

/// Pell-orbit solutions on the fiber over `(1 : t)` seeded at a known
/// solution, both directions, at most `per_direction` points each.
pub fn cube_orbit(
    t: &BigInt,
    seed: &CubeSolution,
    per_direction: usize,
    max_bits: u64,
) -> Result<Vec<CubeSolution>, CubeError> {
    let conic = cube_fiber_conic(t);
    let sys = match pell_reduce(&conic) {
        Ok(sys) => sys,
        Err(ConicError::NotPellType(_)) | Err(ConicError::Degenerate) => return Ok(Vec::new()),
        Err(e) => panic!("unexpected reduction failure: {e}"),
    };
    let Ok(Some(unit)) = pell::fundamental_unit_budgeted(&sys.d, max_bits) else {
        return Ok(Vec::new());
    };
    let mut out = Vec::new();
    for dir in [Direction::Forward, Direction::Backward] {
        let pts = crate::conic::integral_orbit_with(
            &conic,
            &sys,
            &unit,
            (&seed.x, &seed.y),
            per_direction,
            dir,
            max_bits,
        )
        .map_err(|_| CubeError::PointOffConic(seed.x.clone(), seed.y.clone()))?;
        for (x, y) in pts {
            let sol = cube_recover(t, (&x, &y))?;
            if sol.max_bits() <= max_bits {
                out.push(sol);
            }
        }
    }
    Ok(out)
}

/// Alternate Pell orbits on the `s = 1` fibers with the coordinate
/// permutations for `rounds` rounds, collecting distinct solutions
/// (up to permutation) of `x³ + y³ + z³ = −1`.
pub fn cube_generate(
    seed: &CubeSolution,
    rounds: u32,
    per_direction: usize,
    max_bits: u64,
) -> Result<Vec<CubeSolution>, CubeError> {
    if !seed.verify() {
        return Err(CubeError::NotASolution(seed.x.clone(), seed.y.clone(), seed.z.clone()));
    }
    let mut known: BTreeSet<(BigInt, BigInt, BigInt)> = BTreeSet::new();
    let mut ledger = vec![seed.clone()];
    known.insert(seed.canonical_key());
    let mut frontier = vec![seed.clone()];
    for _ in 0..rounds {
        let mut next = Vec::new();
        for sol in &frontier {
            for variant in permutations(sol) {
                let fiber = cube_pi1(&variant)?;
                if !fiber.s.is_one() {
                    continue;
                }
                for new_sol in cube_orbit(&fiber.t, &variant, per_direction, max_bits)? {
                    if known.insert(new_sol.canonical_key()) {
                        ledger.push(new_sol.clone());
                        next.push(new_sol);
                    }
                }
            }
        }
        frontier = next;
    }
    Ok(ledger)
}

fn permutations(sol: &CubeSolution) -> Vec<CubeSolution> {
    let (x, y, z) = (&sol.x, &sol.y, &sol.z);
    let mut out = Vec::with_capacity(6);
    for (a, b, c) in [
        (x, y, z),
        (x, z, y),
        (y, x, z),
        (y, z, x),
        (z, x, y),
        (z, y, x),
    ] {
        let cand = CubeSolution { x: a.clone(), y: b.clone(), z: c.clone() };
        if !out.contains(&cand) {
            out.push(cand);
        }
    }
    out
}
