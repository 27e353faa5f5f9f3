//! Continued-fraction Pell machinery.
//!
//! The continued fraction of `√D` for nonsquare `D > 0` is periodic:
//! `√D = [a0; a1, a2, ..., al]` with `al = 2·a0`. The convergent just
//! before the period closes gives the fundamental solution of
//! `u² − D·v² = (−1)^l`, and from it the fundamental unit (norm `+1`)
//! and, when `l` is odd, the minimal norm `−1` solution.
//!
//! Solutions of the general equation `U² − D·V² = N` fall into finitely
//! many orbits under the unit action `(U, V) ↦ (u·U + D·v·V, v·U + u·V)`;
//! the classical bounds on the fundamental representative of each orbit
//! make an exhaustive search over `V` complete.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::exact::{is_square, isqrt};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PellError {
    #[error("D must be positive, got {0}")]
    NotPositive(BigInt),
    #[error("D = {0} is a perfect square")]
    Square(BigInt),
    #[error("N = 0 is a degenerate conic; callers must handle it separately")]
    ZeroNorm,
}

/// Continued fraction expansion of `√D`: the integer part and the
/// periodic tail (whose last element is `2·a0`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CfExpansion {
    pub a0: BigInt,
    pub period: Vec<BigInt>,
}

/// Fundamental solution of `u² − D·v² = 1` with `u, v > 0` minimal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PellUnit {
    pub d: BigInt,
    pub u: BigInt,
    pub v: BigInt,
}

/// A solution `(U, V)` of `U² − D·V² = N` for some fixed `(D, N)`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PellSolution {
    pub u: BigInt,
    pub v: BigInt,
}

/// Orbit direction: `Forward` multiplies by the fundamental unit,
/// `Backward` by its inverse.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Forward,
    Backward,
}

fn check_d(d: &BigInt) -> Result<BigInt, PellError> {
    if !d.is_positive() {
        return Err(PellError::NotPositive(d.clone()));
    }
    let a0 = isqrt(d).expect("positive");
    if &a0 * &a0 == *d {
        return Err(PellError::Square(d.clone()));
    }
    Ok(a0)
}

/// Continued fraction of `√D` for positive nonsquare `D`.
pub fn cf_sqrt(d: &BigInt) -> Result<CfExpansion, PellError> {
    let a0 = check_d(d)?;
    let mut period = Vec::new();
    let mut p = BigInt::zero();
    let mut q = BigInt::one();
    let mut a = a0.clone();
    loop {
        p = &a * &q - &p;
        q = (d - &p * &p) / &q;
        a = (a0.clone() + &p) / &q;
        period.push(a.clone());
        if q.is_one() {
            return Ok(CfExpansion { a0, period });
        }
    }
}

/// Shared convergent accumulation: runs the continued fraction of `√D`
/// and returns `(p, q, l)` where `p/q` is the convergent just before the
/// period closes and `l` the period length, so `p² − D·q² = (−1)^l`.
/// Stops and returns `None` if the convergents exceed `cap_bits` bits.
fn half_period_convergent(
    d: &BigInt,
    a0: &BigInt,
    cap_bits: Option<u64>,
) -> Option<(BigInt, BigInt, usize)> {
    let mut p = BigInt::zero();
    let mut q = BigInt::one();
    let mut a = a0.clone();
    let (mut h0, mut h1) = (BigInt::one(), a0.clone());
    let (mut k0, mut k1) = (BigInt::zero(), BigInt::one());
    let mut len = 0usize;
    loop {
        p = &a * &q - &p;
        q = (d - &p * &p) / &q;
        a = (a0 + &p) / &q;
        len += 1;
        if q.is_one() {
            return Some((h1, k1, len));
        }
        let h2 = &a * &h1 + &h0;
        let k2 = &a * &k1 + &k0;
        h0 = h1;
        h1 = h2;
        k0 = k1;
        k1 = k2;
        if let Some(cap) = cap_bits {
            if h1.bits() > cap {
                return None;
            }
        }
    }
}

/// Minimal positive solution of `u² − D·v² = 1`.
///
/// When the period length is odd the half-period convergent solves
/// `p² − D·q² = −1` and the unit is its square `(p² + D·q², 2pq)`.
pub fn fundamental_unit(d: &BigInt) -> Result<PellUnit, PellError> {
    Ok(fundamental_unit_capped(d, None)?.expect("no cap"))
}

/// As [`fundamental_unit`], but gives up (returning `Ok(None)`) once the
/// convergents exceed `cap_bits` bits. Lets callers bound the work spent
/// on discriminants whose unit is too large to be useful to them.
pub fn fundamental_unit_capped(
    d: &BigInt,
    cap_bits: Option<u64>,
) -> Result<Option<PellUnit>, PellError> {
    let a0 = check_d(d)?;
    let Some((p, q, len)) = half_period_convergent(d, &a0, cap_bits) else {
        return Ok(None);
    };
    let unit = if len % 2 == 1 {
        PellUnit {
            d: d.clone(),
            u: &p * &p + d * &q * &q,
            v: BigInt::from(2) * &p * &q,
        }
    } else {
        PellUnit { d: d.clone(), u: p, v: q }
    };
    debug_assert!((&unit.u * &unit.u - d * &unit.v * &unit.v).is_one());
    Ok(Some(unit))
}

/// As [`fundamental_unit_capped`], but avoids carrying big convergents
/// while deciding hopeless cases: a first pass scans the period with
/// only the small `P, Q, a` values, accumulating a lower bound on the
/// convergent size (`bits(a) − 1` per step, and `2k/3` after `k` steps
/// from Fibonacci growth), and gives up once that bound exceeds
/// `cap_bits`. Only promising discriminants get the exact second pass.
pub fn fundamental_unit_budgeted(
    d: &BigInt,
    cap_bits: u64,
) -> Result<Option<PellUnit>, PellError> {
    let a0 = check_d(d)?;
    let mut p = BigInt::zero();
    let mut q = BigInt::one();
    let mut a = a0.clone();
    let mut lower_bits: u64 = 0;
    let mut steps: u64 = 0;
    loop {
        p = &a * &q - &p;
        q = (d - &p * &p) / &q;
        a = (&a0 + &p) / &q;
        steps += 1;
        if q.is_one() {
            break;
        }
        lower_bits += a.bits() - 1;
        if lower_bits.max(2 * steps / 3) > cap_bits {
            return Ok(None);
        }
    }
    match fundamental_unit_capped(d, Some(cap_bits + 64))? {
        Some(unit) if unit.u.bits() <= cap_bits => Ok(Some(unit)),
        _ => Ok(None),
    }
}

/// Minimal positive solution of `u² − D·v² = −1`, present exactly when
/// the period length of `√D` is odd.
pub fn negative_fundamental(d: &BigInt) -> Result<Option<(BigInt, BigInt)>, PellError> {
    let a0 = check_d(d)?;
    let (p, q, len) = half_period_convergent(d, &a0, None).expect("no cap");
    if len % 2 == 1 {
        debug_assert_eq!(&p * &p - d * &q * &q, BigInt::from(-1));
        Ok(Some((p, q)))
    } else {
        Ok(None)
    }
}

/// Orbit representatives of `U² − D·V² = N` under the unit action,
/// closed under `(U, V) ↦ (±U, ±V)`.
///
/// Found by exhaustive search over `0 ≤ V ≤ Vmax` with the classical
/// bound `Vmax = √(|N|(u+1)/(2D))` (rounded up), which every orbit's
/// fundamental representative satisfies. The list may contain more than
/// one member of an orbit; it never misses an orbit. Empty when the
/// equation has no solution.
pub fn general_reps(d: &BigInt, n: &BigInt) -> Result<Vec<PellSolution>, PellError> {
    if n.is_zero() {
        return Err(PellError::ZeroNorm);
    }
    let unit = fundamental_unit(d)?;
    // ceil(|N|(u+1)/(2D))
    let num = n.abs() * (&unit.u + 1u32);
    let den = BigInt::from(2) * d;
    let bound = (&num + &den - 1u32) / &den;
    let vmax = isqrt(&bound).expect("nonnegative");
    let mut out = Vec::new();
    let mut v = BigInt::zero();
    while v <= vmax {
        let rhs = n + d * &v * &v;
        if !rhs.is_negative() {
            if let Some(u) = is_square(&rhs) {
                for (su, sv) in [(1, 1), (1, -1), (-1, 1), (-1, -1)] {
                    let cand = PellSolution { u: su * &u, v: sv * &v };
                    if !out.contains(&cand) {
                        out.push(cand);
                    }
                }
            }
        }
        v += 1u32;
    }
    out.sort();
    Ok(out)
}

/// One step of the unit action on a solution of `U² − D·V² = N`.
/// The norm is preserved exactly in both directions.
pub fn orbit_step(unit: &PellUnit, sol: &PellSolution, dir: Direction) -> PellSolution {
    let PellUnit { d, u, v } = unit;
    match dir {
        Direction::Forward => PellSolution {
            u: u * &sol.u + d * v * &sol.v,
            v: v * &sol.u + u * &sol.v,
        },
        Direction::Backward => PellSolution {
            u: u * &sol.u - d * v * &sol.v,
            v: u * &sol.v - v * &sol.u,
        },
    }
}

/// `U² − D·V²` for a candidate solution.
pub fn norm(d: &BigInt, sol: &PellSolution) -> BigInt {
    &sol.u * &sol.u - d * &sol.v * &sol.v
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn big(n: i64) -> BigInt {
        BigInt::from(n)
    }

    fn sol(u: i64, v: i64) -> PellSolution {
        PellSolution { u: big(u), v: big(v) }
    }

    #[test]
    fn cf_sqrt_examples() {
        let cf = cf_sqrt(&big(2)).unwrap();
        assert_eq!((cf.a0, cf.period), (big(1), vec![big(2)]));
        let cf = cf_sqrt(&big(48)).unwrap();
        assert_eq!((cf.a0, cf.period), (big(6), vec![big(1), big(12)]));
        let cf = cf_sqrt(&big(17)).unwrap();
        assert_eq!((cf.a0, cf.period), (big(4), vec![big(8)]));
        assert!(matches!(cf_sqrt(&big(49)), Err(PellError::Square(_))));
        assert!(matches!(cf_sqrt(&big(0)), Err(PellError::NotPositive(_))));
    }

    #[test]
    fn fundamental_unit_examples() {
        for (d, u, v) in [(2, 3, 2), (48, 7, 1), (17, 33, 8)] {
            let unit = fundamental_unit(&big(d)).unwrap();
            assert_eq!((unit.u, unit.v), (big(u), big(v)));
        }
    }

    /// Brute force over v = 1, 2, ... agrees with the continued fraction
    /// for every nonsquare D ≤ 100 (the acceptance suite extends this to
    /// D ≤ 500 with a capped scan).
    #[test]
    fn fundamental_unit_vs_brute_force() {
        for d in 2i64..=100 {
            let bd = big(d);
            if is_square(&bd).is_some() {
                continue;
            }
            let unit = fundamental_unit(&bd).unwrap();
            let mut v = BigInt::one();
            loop {
                if let Some(u) = is_square(&(1 + &bd * &v * &v)) {
                    assert_eq!((u, v), (unit.u.clone(), unit.v.clone()), "D = {d}");
                    break;
                }
                v += 1u32;
            }
        }
    }

    #[test]
    fn negative_fundamental_examples() {
        assert_eq!(
            negative_fundamental(&big(17)).unwrap(),
            Some((big(4), big(1)))
        );
        assert_eq!(negative_fundamental(&big(3)).unwrap(), None);
        assert_eq!(
            negative_fundamental(&big(2)).unwrap(),
            Some((big(1), big(1)))
        );
    }

    #[test]
    fn general_reps_examples() {
        let reps = general_reps(&big(48), &big(14400)).unwrap();
        assert!(reps.contains(&sol(120, 0)));
        assert!(reps.contains(&sol(240, 30)));
        let reps = general_reps(&big(48), &big(1)).unwrap();
        assert!(reps.contains(&sol(7, 1)));
        // x² − 5y² = 3 has no solution: 3 is a non-residue mod 5
        assert!(general_reps(&big(5), &big(3)).unwrap().is_empty());
        assert!(matches!(
            general_reps(&big(48), &BigInt::zero()),
            Err(PellError::ZeroNorm)
        ));
    }

    #[test]
    fn orbit_step_examples() {
        let unit = fundamental_unit(&big(48)).unwrap();
        let next = orbit_step(&unit, &sol(240, 30), Direction::Forward);
        assert_eq!(next, sol(3120, 450));
        assert_eq!(norm(&big(48), &next), big(14400));
        let back = orbit_step(&unit, &next, Direction::Backward);
        assert_eq!(back, sol(240, 30));
        assert_eq!(
            orbit_step(&unit, &sol(120, 0), Direction::Forward),
            sol(840, 120)
        );
    }

    /// general_reps followed by orbit closure reproduces the brute-force
    /// solution set over |V| ≤ 10^4, on Pell systems arising from fiber
    /// conics (D, N) of the quartic surfaces.
    #[test]
    fn reps_plus_orbit_closure_match_brute_force() {
        // (48, 14400): n = 25 fiber (2:1); (113, -51302): n = 8 fiber (1:-4),
        // N = (2ae-bd)² + D(4af-d²) for 4x²+7xy-4y²-18; (240, 114240): n = -4 fiber (5:1)
        for (d, n) in [(48i64, 14400i64), (113, -51302), (240, 114240), (48, -19200)] {
            let (bd, bn) = (big(d), big(n));
            let vmax = big(10_000);
            let mut brute = std::collections::BTreeSet::new();
            let mut v = -&vmax;
            while v <= vmax {
                let rhs = &bn + &bd * &v * &v;
                if !rhs.is_negative() {
                    if let Some(u) = is_square(&rhs) {
                        brute.insert((u.clone(), v.clone()));
                        brute.insert((-u, v.clone()));
                    }
                }
                v += 1u32;
            }
            let unit = fundamental_unit(&bd).unwrap();
            let mut closed = std::collections::BTreeSet::new();
            for rep in general_reps(&bd, &bn).unwrap() {
                for dir in [Direction::Forward, Direction::Backward] {
                    let mut cur = rep.clone();
                    while cur.v.abs() <= vmax {
                        closed.insert((cur.u.clone(), cur.v.clone()));
                        cur = orbit_step(&unit, &cur, dir);
                    }
                }
            }
            let closed: std::collections::BTreeSet<_> = closed
                .into_iter()
                .filter(|(_, v)| v.abs() <= vmax)
                .collect();
            assert_eq!(closed, brute, "D = {d}, N = {n}");
        }
    }

    proptest! {
        /// Orbit steps preserve the norm form exactly, and from an orbit
        /// representative |U| and |V| are strictly increasing after at
        /// most one forward step.
        #[test]
        fn orbit_preserves_norm_and_grows(
            d in 2i64..50, u0 in -50i64..50, v0 in -50i64..50,
        ) {
            let bd = big(d);
            prop_assume!(is_square(&bd).is_none());
            let n = norm(&bd, &sol(u0, v0));
            prop_assume!(!n.is_zero());
            let unit = fundamental_unit(&bd).unwrap();
            for rep in general_reps(&bd, &n).unwrap() {
                let mut cur = rep;
                for step in 0..5 {
                    let next = orbit_step(&unit, &cur, Direction::Forward);
                    prop_assert_eq!(norm(&bd, &next), n.clone());
                    if step >= 1 {
                        prop_assert!(next.u.abs() > cur.u.abs());
                        prop_assert!(next.v.abs() > cur.v.abs());
                    }
                    cur = next;
                }
            }
        }
    }
}
