//! Arbitrary-precision integer primitives shared by every other module.
//!
//! Everything here is exact: the integer square root is a pure-integer
//! Newton iteration with a correction step, and rationals are always kept
//! in lowest terms with positive denominator.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

/// Signed integer of unbounded magnitude.
pub type Int = BigInt;

/// Exact rational; always in lowest terms with positive denominator.
pub type Rat = num_rational::BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExactError {
    #[error("isqrt of negative integer {0}")]
    NegativeSqrt(BigInt),
    #[error("primitive_pair of (0, 0)")]
    ZeroPair,
}

/// Floor of the square root of a nonnegative integer.
///
/// Newton iteration on integers only: the iteration `x ← (x + a/x)/2`
/// from an over-estimate converges monotonically to `⌊√a⌋`. The result
/// `r` satisfies `r² ≤ a < (r+1)²`.
pub fn isqrt(a: &BigInt) -> Result<BigInt, ExactError> {
    if a.is_negative() {
        return Err(ExactError::NegativeSqrt(a.clone()));
    }
    if a.is_zero() {
        return Ok(BigInt::zero());
    }
    // Initial over-estimate: 2^ceil(bits/2) ≥ √a.
    let bits = a.bits();
    let mut x = BigInt::one() << ((bits + 1) / 2);
    loop {
        let next = (&x + a / &x) >> 1;
        if next >= x {
            break;
        }
        x = next;
    }
    debug_assert!(&x * &x <= *a && *a < (&x + 1u32) * (&x + 1u32));
    Ok(x)
}

/// Returns the nonnegative root if `a` is a perfect square.
pub fn is_square(a: &BigInt) -> Option<BigInt> {
    if a.is_negative() {
        return None;
    }
    let r = isqrt(a).expect("nonnegative");
    if &r * &r == *a {
        Some(r)
    } else {
        None
    }
}

/// Returns the nonnegative root if `a` is a perfect fourth power.
pub fn fourth_root(a: &BigInt) -> Option<BigInt> {
    let r = is_square(a)?;
    is_square(&r)
}

/// Canonical representative of a projective pair `(s : t)` over the
/// integers: divided by the gcd, with the first nonzero entry positive.
///
/// The sign convention makes fiber labels unique map keys.
pub fn primitive_pair(s: &BigInt, t: &BigInt) -> Result<(BigInt, BigInt), ExactError> {
    if s.is_zero() && t.is_zero() {
        return Err(ExactError::ZeroPair);
    }
    let g = s.gcd(t);
    let mut s = s / &g;
    let mut t = t / &g;
    let flip = if s.is_zero() { t.is_negative() } else { s.is_negative() };
    if flip {
        s = -s;
        t = -t;
    }
    Ok((s, t))
}

/// Bit length of the absolute value; 0 for 0.
pub fn bit_len(a: &BigInt) -> u64 {
    a.bits()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::Sign;
    use proptest::prelude::*;
    use rand::{RngCore, SeedableRng};

    #[test]
    fn isqrt_small_values() {
        assert_eq!(isqrt(&BigInt::from(0)).unwrap(), BigInt::from(0));
        assert_eq!(isqrt(&BigInt::from(48)).unwrap(), BigInt::from(6));
        // 7035^2 = 49491225, checked by direct multiplication
        assert_eq!(
            BigInt::from(7035) * BigInt::from(7035),
            BigInt::from(49491225)
        );
        assert_eq!(isqrt(&BigInt::from(49491225)).unwrap(), BigInt::from(7035));
        assert!(isqrt(&BigInt::from(-1)).is_err());
    }

    #[test]
    fn isqrt_bracket_on_random_inputs() {
        // 10^4 random values up to 2^256
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0x5eed);
        let mut bytes = [0u8; 32];
        for _ in 0..10_000 {
            rng.fill_bytes(&mut bytes);
            let a = BigInt::from_bytes_le(Sign::Plus, &bytes);
            let r = isqrt(&a).unwrap();
            assert!(&r * &r <= a);
            assert!((&r + 1) * (&r + 1) > a);
        }
    }

    #[test]
    fn is_square_examples() {
        assert_eq!(is_square(&BigInt::from(1369)), Some(BigInt::from(37)));
        // 37^2 = 1369 < 1371 < 1444 = 38^2
        assert_eq!(is_square(&BigInt::from(1371)), None);
        assert_eq!(is_square(&BigInt::from(-4)), None);
    }

    #[test]
    fn fourth_root_examples() {
        assert_eq!(fourth_root(&BigInt::from(16)), Some(BigInt::from(2)));
        assert_eq!(fourth_root(&BigInt::from(8)), None);
        assert_eq!(fourth_root(&BigInt::from(0)), Some(BigInt::from(0)));
    }

    #[test]
    fn primitive_pair_examples() {
        let pp = |s: i64, t: i64| primitive_pair(&BigInt::from(s), &BigInt::from(t)).unwrap();
        assert_eq!(pp(20, 10), (BigInt::from(2), BigInt::from(1)));
        assert_eq!(pp(-1, 7), (BigInt::from(1), BigInt::from(-7)));
        assert_eq!(pp(0, -4), (BigInt::from(0), BigInt::from(1)));
        assert!(primitive_pair(&BigInt::zero(), &BigInt::zero()).is_err());
    }

    proptest! {
        #[test]
        fn is_square_of_square_roundtrip(a in 0u64..1 << 31) {
            let a = BigInt::from(a);
            prop_assert_eq!(is_square(&(&a * &a)), Some(a.clone()));
            if a >= BigInt::one() {
                prop_assert_eq!(is_square(&(&a * &a + 1)), None);
            }
        }

        #[test]
        fn primitive_pair_scale_invariant(
            s in -1000i64..1000, t in -1000i64..1000, k in 1i64..50, neg in proptest::bool::ANY,
        ) {
            prop_assume!(s != 0 || t != 0);
            let k = if neg { -k } else { k };
            let (s, t) = (BigInt::from(s), BigInt::from(t));
            let p = primitive_pair(&s, &t).unwrap();
            let q = primitive_pair(&(&s * k), &(&t * k)).unwrap();
            prop_assert_eq!(&p, &q);
            // idempotent
            let r = primitive_pair(&p.0, &p.1).unwrap();
            prop_assert_eq!(r, p);
        }
    }

    #[test]
    fn rat_is_normalized() {
        let r = Rat::new(BigInt::from(4), BigInt::from(-6));
        assert_eq!(r.numer(), &BigInt::from(-2));
        assert_eq!(r.denom(), &BigInt::from(3));
        assert_eq!(r.denom().sign(), Sign::Plus);
    }
}
