//! Scalar abstraction for the geometric parts of the crate.
//!
//! Pitch coordinates, skeletal translations and quaternions are generic over
//! [`Scalar`] so the same transforms run on `f32` and `f64` data. Decoded
//! documents store `f64`; see the aliases at the crate root.

use std::fmt::{Debug, Display};
use std::str::FromStr;

use num_traits::{Float, FromPrimitive};

/// Floating point type usable for CDF geometry: `f32` or `f64`.
pub trait Scalar:
    Float + FromPrimitive + Display + Debug + FromStr + Default + Send + Sync + 'static
{
    fn lit(v: f64) -> Self {
        Self::from_f64(v).expect("every finite f64 literal converts")
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}

/// Decimal places kept for measurement floats on output.
pub const CDF_DECIMALS: u32 = 3;

/// Binary shortcut for [`round_half_even`], `None` near a tie or when the
/// scaled value is too large to be exact. Away from ties the rounding of the
/// binary value and of its shortest decimal text agree, and dividing an
/// exact integer by an exact power of ten is correctly rounded, so the
/// result equals parsing the rounded decimal text.
fn round_fast<T: Scalar>(value: T, decimals: u32) -> Option<T> {
    if decimals > 9 {
        return None;
    }
    let scale = T::lit(10f64.powi(decimals as i32));
    let k = value * scale;
    let exact_limit = T::epsilon().recip();
    if k.abs() >= exact_limit {
        return None;
    }
    let r = k.round();
    let back = r / scale;
    let out = if back == value {
        value
    } else {
        let frac = (k - k.floor() - T::lit(0.5)).abs();
        if frac <= (k.abs() + T::one()) * T::epsilon() * T::lit(8.0) {
            return None;
        }
        back
    };
    Some(if out.is_zero() { T::zero() } else { out })
}

/// Rounds `value` to `decimals` places using round-half-to-even on the
/// shortest decimal representation of the value.
///
/// Operating on the decimal text (rather than the binary expansion) makes
/// `0.0005` a tie that resolves to `0.0`, and makes the operation
/// idempotent: a value that already has at most `decimals` places is
/// returned unchanged. Non-finite values are returned as-is. A zero result
/// is always positive zero.
pub fn round_half_even<T: Scalar>(value: T, decimals: u32) -> T {
    if !value.is_finite() {
        return value;
    }
    round_fast(value, decimals).unwrap_or_else(|| round_text(value, decimals))
}

fn round_text<T: Scalar>(value: T, decimals: u32) -> T {
    let text = value.to_string();
    let (negative, magnitude) = match text.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, text.as_str()),
    };
    let (int_part, frac_part) = magnitude.split_once('.').unwrap_or((magnitude, ""));
    let decimals = decimals as usize;
    if frac_part.len() <= decimals {
        return if value.is_zero() { T::zero() } else { value };
    }

    let (kept, dropped) = frac_part.split_at(decimals);
    let mut digits: Vec<u8> = int_part.bytes().chain(kept.bytes()).map(|b| b - b'0').collect();
    let first = dropped.as_bytes()[0] - b'0';
    let tail_nonzero = dropped.bytes().skip(1).any(|b| b != b'0');
    let last_odd = digits.last().is_some_and(|d| d % 2 == 1);
    let round_up = first > 5 || (first == 5 && (tail_nonzero || last_odd));

    if round_up {
        let mut i = digits.len();
        loop {
            if i == 0 {
                digits.insert(0, 1);
                break;
            }
            i -= 1;
            if digits[i] == 9 {
                digits[i] = 0;
            } else {
                digits[i] += 1;
                break;
            }
        }
    }

    let split = digits.len() - decimals;
    let mut out = String::with_capacity(digits.len() + 2);
    if negative {
        out.push('-');
    }
    out.extend(digits[..split].iter().map(|d| char::from(b'0' + d)));
    if decimals > 0 {
        out.push('.');
        out.extend(digits[split..].iter().map(|d| char::from(b'0' + d)));
    }
    let rounded: T = out.parse().ok().unwrap_or(value);
    if rounded.is_zero() {
        T::zero()
    } else {
        rounded
    }
}

/// Number of fractional digits in the shortest decimal form of `value`.
pub fn decimal_places<T: Scalar>(value: T) -> usize {
    let text = value.to_string();
    text.split_once('.').map_or(0, |(_, frac)| frac.len())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rounds_to_three_places() {
        assert_eq!(round_half_even(0.123456_f64, 3), 0.123);
        assert_eq!(round_half_even(23.1049_f64, 3), 23.105);
        assert_eq!(round_half_even(23.105_f64, 3), 23.105);
    }

    #[test]
    fn ties_go_to_even() {
        assert_eq!(round_half_even(0.0005_f64, 3), 0.0);
        assert_eq!(round_half_even(0.0015_f64, 3), 0.002);
        assert_eq!(round_half_even(0.0025_f64, 3), 0.002);
        assert_eq!(round_half_even(-0.0025_f64, 3), -0.002);
        assert_eq!(round_half_even(2.5_f64, 0), 2.0);
        assert_eq!(round_half_even(3.5_f64, 0), 4.0);
    }

    #[test]
    fn carries_propagate() {
        assert_eq!(round_half_even(9.9996_f64, 3), 10.0);
        assert_eq!(round_half_even(-59.9999_f64, 3), -60.0);
    }

    #[test]
    fn negative_zero_is_normalized() {
        let r = round_half_even(-0.0004_f64, 3);
        assert_eq!(r, 0.0);
        assert!(r.is_sign_positive());
        assert!(round_half_even(-0.0_f64, 3).is_sign_positive());
    }

    #[test]
    fn works_for_f32() {
        assert_eq!(round_half_even(0.123456_f32, 3), 0.123_f32);
        assert_eq!(round_half_even(1.0005_f32, 3), 1.0_f32);
    }

    #[test]
    fn non_finite_passes_through() {
        assert!(round_half_even(f64::NAN, 3).is_nan());
        assert_eq!(round_half_even(f64::INFINITY, 3), f64::INFINITY);
    }

    #[test]
    fn tiny_and_huge_values() {
        assert_eq!(round_half_even(1e-7_f64, 3), 0.0);
        assert_eq!(round_half_even(1e21_f64, 3), 1e21);
    }

    proptest::proptest! {
        #[test]
        fn shortcut_agrees_with_text(v in -1.0e6_f64..1.0e6, d in 0_u32..6) {
            if let Some(fast) = round_fast(v, d) {
                proptest::prop_assert_eq!(fast.to_bits(), round_text(v, d).to_bits());
            }
        }

        #[test]
        fn shortcut_agrees_on_decimal_grid(n in -600_000_i64..600_000, d in 2_u32..5) {
            let v = n as f64 / 10f64.powi(d as i32 + 1);
            if let Some(fast) = round_fast(v, d) {
                proptest::prop_assert_eq!(fast.to_bits(), round_text(v, d).to_bits());
            }
        }

        #[test]
        fn shortcut_agrees_for_f32(v in -1.0e4_f32..1.0e4, d in 0_u32..4) {
            if let Some(fast) = round_fast(v, d) {
                proptest::prop_assert_eq!(fast.to_bits(), round_text(v, d).to_bits());
            }
        }
    }
}
