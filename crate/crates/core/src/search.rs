//! Seed search: bounded brute force over the surface equation, and the
//! classical Fauquembergue parametrization
//!
//! ```text
//! (17p² − 12pq − 13q²)⁴ + (17p² + 12pq − 13q²)⁴
//!     = (289p⁴ + 14p²q² − 239q⁴)² + (17p² − q²)⁴
//! ```
//!
//! which, driven by the negative Pell equation `q² − 17p² = −1`, yields
//! an infinite stream of solutions for `n = 1`.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use std::collections::BTreeMap;

use crate::exact::is_square;
use crate::pell::{self, Direction, PellSolution};
use crate::surface::Solution;

/// All solutions with `0 ≤ x ≤ y ≤ bound` and `w ≥ 0`, ordered by
/// `(y, x)`. Full orbits are recoverable via the 16-element symmetry
/// group.
pub fn brute_search(n: &BigInt, bound: u64) -> Vec<Solution> {
    brute_search_jobs(n, bound, 1)
}

/// As [`brute_search`], with the `y` range partitioned across `jobs`
/// worker threads and the per-chunk results concatenated in order, so
/// the output is identical for every job count.
pub fn brute_search_jobs(n: &BigInt, bound: u64, jobs: usize) -> Vec<Solution> {
    let jobs = jobs.max(1);
    if jobs == 1 {
        return scan_y_range(n, 0, bound, bound);
    }
    let chunk = (bound + jobs as u64) / jobs as u64;
    let mut ranges = Vec::new();
    let mut lo = 0u64;
    while lo <= bound {
        let hi = bound.min(lo.saturating_add(chunk.max(1) - 1));
        ranges.push((lo, hi));
        if hi == bound {
            break;
        }
        lo = hi + 1;
    }
    let mut results: Vec<Vec<Solution>> = Vec::with_capacity(ranges.len());
    std::thread::scope(|scope| {
        let handles: Vec<_> = ranges
            .iter()
            .map(|&(lo, hi)| scope.spawn(move || scan_y_range(n, lo, hi, bound)))
            .collect();
        for h in handles {
            results.push(h.join().expect("search worker panicked"));
        }
    });
    results.concat()
}

/// Scan `lo ≤ y ≤ hi`, `0 ≤ x ≤ y`, testing `x⁴ + y⁴ − n` for squareness.
fn scan_y_range(n: &BigInt, lo: u64, hi: u64, bound: u64) -> Vec<Solution> {
    debug_assert!(hi <= bound);
    let mut out = Vec::new();
    // u128 fast path: bound⁴ must fit with room for |n|
    if bound <= 100_000 {
        if let Some(n128) = to_i128(n) {
            for y in lo..=hi {
                let y4 = (y as u128).pow(4);
                for x in 0..=y {
                    let x4 = (x as u128).pow(4);
                    let r = x4 as i128 + y4 as i128 - n128;
                    if r < 0 {
                        continue;
                    }
                    let w = isqrt_u128(r as u128);
                    if w * w == r as u128 {
                        out.push(Solution::new(
                            n.clone(),
                            BigInt::from(x),
                            BigInt::from(y),
                            BigInt::from(w),
                        ));
                    }
                }
            }
            return out;
        }
    }
    for y in lo..=hi {
        let by = BigInt::from(y);
        let y4 = &by * &by * &by * &by;
        for x in 0..=y {
            let bx = BigInt::from(x);
            let r = &bx * &bx * &bx * &bx + &y4 - n;
            if r.is_negative() {
                continue;
            }
            if let Some(w) = is_square(&r) {
                out.push(Solution::new(n.clone(), bx, by.clone(), w));
            }
        }
    }
    out
}

fn to_i128(n: &BigInt) -> Option<i128> {
    // keep x⁴ + y⁴ − n well inside i128
    let v: i128 = n.try_into().ok()?;
    if v.unsigned_abs() < 1 << 100 {
        Some(v)
    } else {
        None
    }
}

fn isqrt_u128(a: u128) -> u128 {
    if a == 0 {
        return 0;
    }
    let mut x = 1u128 << (a.ilog2() / 2 + 1);
    loop {
        let next = (x + a / x) / 2;
        if next >= x {
            return x;
        }
        x = next;
    }
}

/// The Fauquembergue solution for parameters `(p, q)`: a solution of the
/// surface equation with `n = (17p² − q²)⁴`, coordinates normalized to
/// nonnegative representatives of the symmetry orbit.
pub fn fauquembergue(p: &BigInt, q: &BigInt) -> Solution {
    let p2 = p * p;
    let q2 = q * q;
    let x: BigInt = 17 * &p2 - 12 * p * q - 13 * &q2;
    let y: BigInt = 17 * &p2 + 12 * p * q - 13 * &q2;
    let w: BigInt = 289 * &p2 * &p2 + 14 * &p2 * &q2 - 239 * &q2 * &q2;
    let n4: BigInt = 17 * &p2 - &q2;
    let n = (&n4 * &n4) * (&n4 * &n4);
    let sol = Solution::new(n, x.abs(), y.abs(), w.abs());
    debug_assert!(sol.verify());
    sol
}

/// Solutions for `n = 1` from the negative Pell orbit `q² − 17p² = −1`:
/// `(q, p) = (4, 1)` times powers of the unit `(33, 8)`, mapped through
/// the Fauquembergue identity.
pub fn n1_stream(count: usize) -> Vec<Solution> {
    let d = BigInt::from(17);
    let unit = pell::fundamental_unit(&d).expect("17 is nonsquare");
    let (q0, p0) = pell::negative_fundamental(&d)
        .expect("17 is nonsquare")
        .expect("period of √17 is odd");
    let mut cur = PellSolution { u: q0, v: p0 };
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let sol = fauquembergue(&cur.v, &cur.u);
        debug_assert!(sol.n == BigInt::from(1));
        out.push(sol);
        cur = pell::orbit_step(&unit, &cur, Direction::Forward);
    }
    out
}

/// Dense bivariate polynomial over ℤ with exact coefficients, just
/// enough to expand and compare both sides of quartic identities.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Poly2 {
    /// (degree in p, degree in q) → coefficient; zero coefficients absent.
    coeffs: BTreeMap<(u32, u32), BigInt>,
}

impl Poly2 {
    pub fn constant(c: i64) -> Poly2 {
        Poly2::term(c, 0, 0)
    }

    /// The monomial `c·p^i·q^j`.
    pub fn term(c: i64, i: u32, j: u32) -> Poly2 {
        let mut p = Poly2::default();
        if c != 0 {
            p.coeffs.insert((i, j), BigInt::from(c));
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn add(&self, other: &Poly2) -> Poly2 {
        let mut out = self.clone();
        for (k, v) in &other.coeffs {
            let entry = out.coeffs.entry(*k).or_insert_with(BigInt::zero);
            *entry += v;
            if entry.is_zero() {
                out.coeffs.remove(k);
            }
        }
        out
    }

    pub fn sub(&self, other: &Poly2) -> Poly2 {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Poly2 {
        Poly2 { coeffs: self.coeffs.iter().map(|(k, v)| (*k, -v)).collect() }
    }

    pub fn mul(&self, other: &Poly2) -> Poly2 {
        let mut out = Poly2::default();
        for ((i1, j1), c1) in &self.coeffs {
            for ((i2, j2), c2) in &other.coeffs {
                let k = (i1 + i2, j1 + j2);
                let entry = out.coeffs.entry(k).or_insert_with(BigInt::zero);
                *entry += c1 * c2;
                if entry.is_zero() {
                    out.coeffs.remove(&k);
                }
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> Poly2 {
        let mut out = Poly2::constant(1);
        for _ in 0..e {
            out = out.mul(self);
        }
        out
    }

    pub fn eval(&self, p: &BigInt, q: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        for ((i, j), c) in &self.coeffs {
            acc += c * p.pow(*i) * q.pow(*j);
        }
        acc
    }
}

/// The difference `LHS − RHS` of the Fauquembergue identity as an exact
/// polynomial in `(p, q)`; the identity holds iff this is zero.
pub fn fauquembergue_identity_difference() -> Poly2 {
    let x = Poly2::term(17, 2, 0)
        .add(&Poly2::term(-12, 1, 1))
        .add(&Poly2::term(-13, 0, 2));
    let y = Poly2::term(17, 2, 0)
        .add(&Poly2::term(12, 1, 1))
        .add(&Poly2::term(-13, 0, 2));
    let w = Poly2::term(289, 4, 0)
        .add(&Poly2::term(14, 2, 2))
        .add(&Poly2::term(-239, 0, 4));
    let n4 = Poly2::term(17, 2, 0).add(&Poly2::term(-1, 0, 2));
    x.pow(4).add(&y.pow(4)).sub(&w.pow(2)).sub(&n4.pow(4))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;
    use rand::{Rng, SeedableRng};

    fn big(n: i64) -> BigInt {
        BigInt::from(n)
    }

    fn sol(n: i64, x: i64, y: i64, w: i64) -> Solution {
        Solution::new(big(n), big(x), big(y), big(w))
    }

    #[test]
    fn brute_search_examples() {
        // n = 8 also has the trivial solution (1, 2, 3) with w = y² − x²
        assert_eq!(brute_search(&big(8), 10), vec![sol(8, 1, 2, 3), sol(8, 3, 6, 37)]);
        // n = 1 contains the whole trivial family (1, y, y²) alongside
        // the good solution (5, 7, 55)
        let got = brute_search(&big(1), 8);
        let mut expect = vec![sol(1, 0, 1, 0), sol(1, 1, 1, 1), sol(1, 5, 7, 55)];
        for y in 2..=8 {
            expect.push(sol(1, 1, y, y * y));
        }
        expect.sort_by_key(|s| (s.y.clone(), s.x.clone()));
        assert_eq!(got, expect);
        assert_eq!(brute_search(&big(-4), 3), vec![sol(-4, 0, 0, 2), sol(-4, 2, 2, 6)]);
    }

    /// Independent double-loop oracle over the same box, pure BigInt.
    fn oracle(n: &BigInt, bound: u64) -> Vec<Solution> {
        let mut out = Vec::new();
        for y in 0..=bound {
            for x in 0..=y {
                let (bx, by) = (big(x as i64), big(y as i64));
                let r = &bx * &bx * &bx * &bx + &by * &by * &by * &by - n;
                if !r.is_negative() {
                    if let Some(w) = is_square(&r) {
                        out.push(Solution::new(n.clone(), bx, by, w));
                    }
                }
            }
        }
        out
    }

    #[test]
    fn brute_search_matches_oracle() {
        for n in -50i64..=50 {
            let bn = big(n);
            assert_eq!(brute_search(&bn, 50), oracle(&bn, 50), "n = {n}");
        }
    }

    #[test]
    fn brute_search_jobs_deterministic() {
        let bn = big(8);
        let one = brute_search_jobs(&bn, 120, 1);
        for jobs in [2, 3, 7] {
            assert_eq!(brute_search_jobs(&bn, 120, jobs), one);
        }
    }

    #[test]
    fn fauquembergue_examples() {
        let s = fauquembergue(&big(1), &big(4));
        assert_eq!(s, sol(1, 239, 143, 60671));
        assert!(s.verify());
        let s = fauquembergue(&big(1), &big(0));
        assert_eq!(s.n, big(17).pow(4));
        assert_eq!((s.x, s.y, s.w), (big(17), big(17), big(289)));
    }

    #[test]
    fn fauquembergue_identity_on_random_parameters() {
        let diff = fauquembergue_identity_difference();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(17);
        for _ in 0..100 {
            let p = big(rng.gen_range(-1000..=1000));
            let q = big(rng.gen_range(-1000..=1000));
            assert!(diff.eval(&p, &q).is_zero());
            if p.is_zero() && q.is_zero() {
                continue;
            }
            assert!(fauquembergue(&p, &q).verify());
        }
    }

    #[test]
    fn fauquembergue_identity_symbolic() {
        assert!(fauquembergue_identity_difference().is_zero());
    }

    #[test]
    fn n1_stream_examples() {
        let sols = n1_stream(3);
        assert_eq!(sols[0], sol(1, 239, 143, 60671));
        // second parameter pair is the next odd power of 4 + √17,
        // i.e. (q, p) = (268, 65)
        assert_eq!(sols[1], fauquembergue(&big(65), &big(268)));
        let mut prev = BigInt::zero();
        for s in &sols {
            assert!(s.verify());
            assert!(s.n.is_one());
            let height = s.x.clone().max(s.y.clone());
            assert!(height > prev, "heights must strictly increase");
            prev = height;
        }
    }
}
