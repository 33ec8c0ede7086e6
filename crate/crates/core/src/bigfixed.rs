//! 60-digit fixed-point arithmetic for the certificate cosines.
//!
//! Values are `BigInt`s scaled by `10^60`. The only transcendental entry
//! point is `cos_two_pi(n, d) = cos(2*pi*n/d)`, computed by range reduction
//! and a Taylor series whose truncation and rounding error stays below a few
//! hundred units in the last place. Certificates budget a far coarser
//! [`COS_ERROR_BOUND`], so the slack is many orders of magnitude.

use alloc::string::String;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

/// Decimal digits after the point.
pub const SCALE_DIGITS: u32 = 60;

/// Guaranteed bound on `|stored/10^60 - cos(2*pi*n/d)|`, deliberately
/// conservative.
pub const COS_ERROR_BOUND: f64 = 1e-50;

/// `10^60`.
pub fn scale() -> BigInt {
    BigInt::from(10u32).pow(SCALE_DIGITS)
}

/// `pi * 10^60`, rounded to nearest.
fn pi_scaled() -> BigInt {
    "3141592653589793238462643383279502884197169399375105820974945"
        .parse()
        .expect("literal")
}

/// Round-to-nearest division, `d > 0`.
fn round_div(n: &BigInt, d: &BigInt) -> BigInt {
    let two_n_plus_d: BigInt = n * 2 + d;
    two_n_plus_d.div_floor(&(d * 2))
}

/// Fixed-point product `(a*b) / 10^60`, rounded.
fn mul_scaled(a: &BigInt, b: &BigInt) -> BigInt {
    round_div(&(a * b), &scale())
}

/// `cos(2*pi*num/den) * 10^60`, rounded to within a few hundred ulps.
pub fn cos_two_pi(num: i64, den: u64) -> BigInt {
    assert!(den > 0);
    let den = den as i64;
    // reduce num/den mod 1 into [0, 1), then fold onto [0, 1/2]
    let mut n = num.rem_euclid(den);
    if 2 * n > den {
        n = den - n;
    }
    // theta = 2*pi*n/den in fixed point
    let theta = round_div(&(pi_scaled() * (2 * n)), &BigInt::from(den));
    let theta_sq = mul_scaled(&theta, &theta);
    let mut term = scale(); // k = 0 term
    let mut sum = term.clone();
    let mut k: u64 = 0;
    while !term.is_zero() {
        k += 1;
        let denom = BigInt::from((2 * k - 1) * (2 * k));
        term = -round_div(&mul_scaled(&term, &theta_sq), &denom);
        sum += &term;
        if k > 200 {
            unreachable!("Taylor series for |theta| <= pi converges long before this");
        }
    }
    sum
}

/// Scaled value as `f64`.
pub fn to_f64(scaled: &BigInt) -> f64 {
    scaled.to_f64().expect("fixed-point values are tiny") / 1e60
}

/// Decimal rendering with the requested number of fractional digits
/// (truncated), e.g. `-0.642857142857...`.
pub fn to_decimal_string(scaled: &BigInt, digits: u32) -> String {
    let s = scale();
    let neg = scaled.is_negative();
    let abs = scaled.abs();
    let int_part = &abs / &s;
    let mut frac = abs - &int_part * &s;
    // render all 60 digits, then cut
    let mut frac_digits = Vec::with_capacity(SCALE_DIGITS as usize);
    let ten = BigInt::from(10u32);
    let mut unit = s / &ten;
    for _ in 0..SCALE_DIGITS {
        let d = (&frac / &unit).to_u8().unwrap();
        frac_digits.push(b'0' + d);
        frac -= BigInt::from(d) * &unit;
        unit /= &ten;
    }
    frac_digits.truncate(digits as usize);
    let mut out = String::new();
    if neg {
        out.push('-');
    }
    out.push_str(&int_part.to_str_radix(10));
    out.push('.');
    out.push_str(core::str::from_utf8(&frac_digits).unwrap());
    out
}
