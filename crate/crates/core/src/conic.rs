//! Integer conics: boundary classification, reduction to Pell normal
//! form, and integral-point generation.
//!
//! An affine conic `a·x² + b·xy + c·y² + d·x + e·y + f = 0` with binary
//! discriminant `D = b² − 4ac` positive and nonsquare reduces, by
//! completing the square twice, to the Pell equation `U² − D·V² = N`
//! where
//!
//! ```text
//! U = D·y − (2ae − bd),   V = 2a·x + b·y + d,
//! N = (2ae − bd)² + D·(4af − d²),
//! ```
//!
//! and in fact `U² − D·V² = N − 4aD·(a·x² + ... + f)` identically, so the
//! correspondence is exact on the conic. The unit orbit on `(U, V)`
//! then produces integral points `(x, y)` exactly when the inverse maps
//! `y = (U + (2ae−bd))/D` and `x = (V − b·y − d)/(2a)` land on integers;
//! the orbit map is periodic modulo `lcm(D, 2a)`, so a valid seed recurs
//! and the congruence filter is sound and complete along the orbit.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::exact::{is_square, Rat};
use crate::pell::{self, Direction, PellUnit};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConicError {
    #[error("identically zero form")]
    ZeroForm,
    #[error("conic has no quadratic part in x or y")]
    Degenerate,
    #[error("binary discriminant {0} is not positive nonsquare; no Pell reduction")]
    NotPellType(BigInt),
    #[error("seed ({0}, {1}) does not lie on the conic")]
    SeedOffConic(BigInt, BigInt),
    #[error(transparent)]
    Pell(#[from] pell::PellError),
}

/// Boundary behaviour of a conic at infinity, read off the discriminant
/// of its degree-2 part. Over ℤ (one archimedean place) only a real
/// quadratic boundary point allows infinitely many integral points.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BoundaryType {
    /// Δ > 0 and not a perfect square: irreducible real point.
    RealQuadratic,
    /// Δ < 0: no real boundary point.
    ImaginaryQuadratic,
    /// Δ > 0 a perfect square: two rational points at infinity.
    TwoRational,
    /// Δ = 0: one doubled rational point.
    DoubleRational,
}

/// Binary quadratic form `A·x₀² + B·x₀x₁ + C·x₁²`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BinaryForm {
    pub a: BigInt,
    pub b: BigInt,
    pub c: BigInt,
}

impl BinaryForm {
    pub fn new(a: BigInt, b: BigInt, c: BigInt) -> Self {
        BinaryForm { a, b, c }
    }

    pub fn discriminant(&self) -> BigInt {
        &self.b * &self.b - 4 * &self.a * &self.c
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero() && self.c.is_zero()
    }
}

impl std::fmt::Display for BinaryForm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write_poly(f, &[(&self.a, "x0^2"), (&self.b, "x0*x1"), (&self.c, "x1^2")])
    }
}

/// Classify the boundary scheme cut out by a binary form.
pub fn boundary_classify(form: &BinaryForm) -> Result<BoundaryType, ConicError> {
    if form.is_zero() {
        return Err(ConicError::ZeroForm);
    }
    let disc = form.discriminant();
    Ok(if disc.is_zero() {
        BoundaryType::DoubleRational
    } else if disc.is_negative() {
        BoundaryType::ImaginaryQuadratic
    } else if is_square(&disc).is_some() {
        BoundaryType::TwoRational
    } else {
        BoundaryType::RealQuadratic
    })
}

/// Affine conic `a·x² + b·xy + c·y² + d·x + e·y + f = 0`, stored with
/// content divided out and the first nonzero coefficient positive.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AffineConic {
    pub a: BigInt,
    pub b: BigInt,
    pub c: BigInt,
    pub d: BigInt,
    pub e: BigInt,
    pub f: BigInt,
}

impl AffineConic {
    pub fn new(
        a: BigInt,
        b: BigInt,
        c: BigInt,
        d: BigInt,
        e: BigInt,
        f: BigInt,
    ) -> Result<Self, ConicError> {
        let mut coeffs = [a, b, c, d, e, f];
        let mut g = BigInt::zero();
        for co in &coeffs {
            g = g.gcd(co);
        }
        if g.is_zero() {
            return Err(ConicError::ZeroForm);
        }
        for co in &mut coeffs {
            *co = &*co / &g;
        }
        if coeffs.iter().find(|co| !co.is_zero()).unwrap().is_negative() {
            for co in &mut coeffs {
                *co = -&*co;
            }
        }
        let [a, b, c, d, e, f] = coeffs;
        Ok(AffineConic { a, b, c, d, e, f })
    }

    pub fn eval(&self, x: &BigInt, y: &BigInt) -> BigInt {
        &self.a * x * x
            + &self.b * x * y
            + &self.c * y * y
            + &self.d * x
            + &self.e * y
            + &self.f
    }

    pub fn contains(&self, x: &BigInt, y: &BigInt) -> bool {
        self.eval(x, y).is_zero()
    }

    /// Degree-2 part, i.e. the restriction of the homogenized conic to
    /// the line at infinity.
    pub fn top_form(&self) -> BinaryForm {
        BinaryForm::new(self.a.clone(), self.b.clone(), self.c.clone())
    }

    pub fn binary_discriminant(&self) -> BigInt {
        self.top_form().discriminant()
    }

    fn swapped_xy(&self) -> AffineConic {
        AffineConic {
            a: self.c.clone(),
            b: self.b.clone(),
            c: self.a.clone(),
            d: self.e.clone(),
            e: self.d.clone(),
            f: self.f.clone(),
        }
    }
}

impl std::fmt::Display for AffineConic {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write_poly(
            f,
            &[
                (&self.a, "x^2"),
                (&self.b, "x*y"),
                (&self.c, "y^2"),
                (&self.d, "x"),
                (&self.e, "y"),
                (&self.f, ""),
            ],
        )?;
        write!(f, " = 0")
    }
}

fn write_poly(f: &mut std::fmt::Formatter<'_>, terms: &[(&BigInt, &str)]) -> std::fmt::Result {
    let mut first = true;
    for (coeff, mono) in terms {
        if coeff.is_zero() {
            continue;
        }
        let mag = coeff.abs();
        if first {
            if coeff.is_negative() {
                write!(f, "-")?;
            }
            first = false;
        } else if coeff.is_negative() {
            write!(f, " - ")?;
        } else {
            write!(f, " + ")?;
        }
        if mono.is_empty() {
            write!(f, "{mag}")?;
        } else if mag == 1u32.into() {
            write!(f, "{mono}")?;
        } else {
            write!(f, "{mag}*{mono}")?;
        }
    }
    if first {
        write!(f, "0")?;
    }
    Ok(())
}

/// Ternary quadratic form, stored by its six integer polynomial
/// coefficients. The Gram matrix has half-integer off-diagonal entries,
/// so its determinant is an exact rational with denominator dividing 4.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TernaryForm {
    /// Coefficients of `x₀², x₀x₁, x₁², x₀x₂, x₁x₂, x₂²`.
    pub c200: BigInt,
    pub c110: BigInt,
    pub c020: BigInt,
    pub c101: BigInt,
    pub c011: BigInt,
    pub c002: BigInt,
}

impl TernaryForm {
    pub fn new(
        c200: BigInt,
        c110: BigInt,
        c020: BigInt,
        c101: BigInt,
        c011: BigInt,
        c002: BigInt,
    ) -> Self {
        TernaryForm { c200, c110, c020, c101, c011, c002 }
    }

    pub fn eval(&self, x0: &BigInt, x1: &BigInt, x2: &BigInt) -> BigInt {
        &self.c200 * x0 * x0
            + &self.c110 * x0 * x1
            + &self.c020 * x1 * x1
            + &self.c101 * x0 * x2
            + &self.c011 * x1 * x2
            + &self.c002 * x2 * x2
    }

    /// Symmetric Gram matrix with `Q(v) = vᵀ·Gram·v`.
    pub fn gram(&self) -> [[Rat; 3]; 3] {
        let whole = |c: &BigInt| Rat::from_integer(c.clone());
        let half = |c: &BigInt| Rat::new(c.clone(), BigInt::from(2));
        [
            [whole(&self.c200), half(&self.c110), half(&self.c101)],
            [half(&self.c110), whole(&self.c020), half(&self.c011)],
            [half(&self.c101), half(&self.c011), whole(&self.c002)],
        ]
    }

    /// Restriction to the line `x₂ = 0`.
    pub fn boundary(&self) -> BinaryForm {
        BinaryForm::new(self.c200.clone(), self.c110.clone(), self.c020.clone())
    }

    /// The chart `x₂ = 1`, content-reduced.
    pub fn affine_chart(&self) -> Result<AffineConic, ConicError> {
        AffineConic::new(
            self.c200.clone(),
            self.c110.clone(),
            self.c020.clone(),
            self.c101.clone(),
            self.c011.clone(),
            self.c002.clone(),
        )
    }
}

/// Exact determinant of the Gram matrix of a ternary form.
pub fn ternary_det(form: &TernaryForm) -> Rat {
    let TernaryForm { c200: a, c110: b, c020: c, c101: d, c011: e, c002: f } = form;
    // det [[a, b/2, d/2], [b/2, c, e/2], [d/2, e/2, f]]
    let num = 4 * a * c * f + b * d * e - a * e * e - b * b * f - c * d * d;
    Rat::new(num, BigInt::from(4))
}

/// Pell normal form of an affine conic of real quadratic type, with the
/// exact coordinate maps in both directions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PellSystem {
    /// `b² − 4ac` of the (possibly swapped) conic.
    pub d: BigInt,
    /// `(2ae − bd)² + D·(4af − d²)`.
    pub n: BigInt,
    /// `2ae − bd`, the shift in the `U` map.
    sigma: BigInt,
    conic: AffineConic,
    /// Whether x and y were exchanged to make `a ≠ 0`.
    swapped: bool,
}

impl PellSystem {
    /// Forward map `(x, y) ↦ (U, V)`.
    pub fn to_uv(&self, x: &BigInt, y: &BigInt) -> pell::PellSolution {
        let (x, y) = if self.swapped { (y, x) } else { (x, y) };
        let k = &self.conic;
        pell::PellSolution {
            u: &self.d * y - &self.sigma,
            v: 2 * &k.a * x + &k.b * y + &k.d,
        }
    }

    /// Inverse map; `None` when the congruences fail, i.e. the orbit
    /// point does not correspond to an integral point of the conic.
    pub fn from_uv(&self, sol: &pell::PellSolution) -> Option<(BigInt, BigInt)> {
        let k = &self.conic;
        let (ynum, yrem) = (&sol.u + &self.sigma).div_rem(&self.d);
        if !yrem.is_zero() {
            return None;
        }
        let two_a = 2 * &k.a;
        let (xnum, xrem) = (&sol.v - &k.b * &ynum - &k.d).div_rem(&two_a);
        if !xrem.is_zero() {
            return None;
        }
        Some(if self.swapped { (ynum, xnum) } else { (xnum, ynum) })
    }
}

/// Reduce an affine conic to its Pell system. Requires `b² − 4ac > 0`
/// and nonsquare; when `a = 0` but `c ≠ 0` the coordinates are swapped
/// internally and swapped back in the maps.
pub fn pell_reduce(conic: &AffineConic) -> Result<PellSystem, ConicError> {
    if conic.a.is_zero() && conic.c.is_zero() {
        return Err(ConicError::Degenerate);
    }
    let (k, swapped) = if conic.a.is_zero() {
        (conic.swapped_xy(), true)
    } else {
        (conic.clone(), false)
    };
    let disc = k.binary_discriminant();
    if !disc.is_positive() || is_square(&disc).is_some() {
        return Err(ConicError::NotPellType(disc));
    }
    let sigma = 2 * &k.a * &k.e - &k.b * &k.d;
    let n = &sigma * &sigma + &disc * (4 * &k.a * &k.f - &k.d * &k.d);
    let sys = PellSystem { d: disc, n, sigma, conic: k, swapped };
    // U² − D·V² − N = −4aD·K(x, y) identically; six generic points pin a
    // two-variable quadratic, so this checks the identity exactly.
    for (x, y) in [(0i32, 0i32), (1, 0), (0, 1), (1, 1), (2, 1), (1, 2)] {
        let (x, y) = (BigInt::from(x), BigInt::from(y));
        let uv = sys.to_uv(&x, &y);
        let lhs = &uv.u * &uv.u - &sys.d * &uv.v * &uv.v - &sys.n;
        let kxy = if sys.swapped {
            sys.conic.eval(&y, &x)
        } else {
            sys.conic.eval(&x, &y)
        };
        let rhs = -4 * &sys.conic.a * &sys.d * kxy;
        assert_eq!(lhs, rhs, "Pell reduction identity failed for {conic}");
    }
    Ok(sys)
}

/// Integral points obtained from the unit orbit through `seed`.
///
/// Maps the seed to `(U, V)`, iterates the unit action in the given
/// direction, and keeps exactly those iterates whose inverse maps give
/// integers, stopping after `count` points. Every returned point
/// satisfies the conic exactly.
pub fn integral_orbit(
    conic: &AffineConic,
    seed: (&BigInt, &BigInt),
    count: usize,
    dir: Direction,
) -> Result<Vec<(BigInt, BigInt)>, ConicError> {
    let sys = pell_reduce(conic)?;
    let unit = pell::fundamental_unit(&sys.d)?;
    integral_orbit_with(conic, &sys, &unit, seed, count, dir, 1 << 20)
}

/// Orbit generation with caller-supplied Pell data and a bit bound on
/// the orbit coordinates, for callers that cache units across fibers.
pub fn integral_orbit_with(
    conic: &AffineConic,
    sys: &PellSystem,
    unit: &PellUnit,
    seed: (&BigInt, &BigInt),
    count: usize,
    dir: Direction,
    max_bits: u64,
) -> Result<Vec<(BigInt, BigInt)>, ConicError> {
    if !conic.contains(seed.0, seed.1) {
        return Err(ConicError::SeedOffConic(seed.0.clone(), seed.1.clone()));
    }
    let mut cur = sys.to_uv(seed.0, seed.1);
    let mut out = Vec::new();
    while out.len() < count {
        cur = pell::orbit_step(unit, &cur, dir);
        if cur.u.bits().max(cur.v.bits()) > max_bits {
            break;
        }
        if let Some((x, y)) = sys.from_uv(&cur) {
            debug_assert!(conic.contains(&x, &y));
            out.push((x, y));
        }
    }
    Ok(out)
}

/// All integral points with `|x|, |y| ≤ bound`, by exhaustive scan over
/// `x`, solving the resulting quadratic in `y` exactly. Independent of
/// the Pell route; used as an oracle against it.
pub fn bounded_points(conic: &AffineConic, bound: u64) -> Vec<(BigInt, BigInt)> {
    let bound = BigInt::from(bound);
    let mut out = Vec::new();
    let mut x = -&bound;
    while x <= bound {
        // c·y² + (b·x + e)·y + (a·x² + d·x + f) = 0
        let lin = &conic.b * &x + &conic.e;
        let cst = &conic.a * &x * &x + &conic.d * &x + &conic.f;
        if conic.c.is_zero() {
            if !lin.is_zero() {
                let (y, r) = (-&cst).div_rem(&lin);
                if r.is_zero() && y.abs() <= bound {
                    out.push((x.clone(), y));
                }
            } else if cst.is_zero() {
                let mut y = -&bound;
                while y <= bound {
                    out.push((x.clone(), y.clone()));
                    y += 1u32;
                }
            }
        } else {
            let disc: BigInt = &lin * &lin - 4 * &conic.c * &cst;
            if !disc.is_negative() {
                if let Some(root) = is_square(&disc) {
                    let two_c = 2 * &conic.c;
                    for r in [&root, &(-&root)] {
                        let (y, rem) = (-&lin + r).div_rem(&two_c);
                        if rem.is_zero() && y.abs() <= bound && !out.contains(&(x.clone(), y.clone())) {
                            out.push((x.clone(), y));
                        }
                    }
                }
            }
        }
        x += 1u32;
    }
    out.sort();
    out
}
