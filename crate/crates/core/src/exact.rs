//! Exact-number helpers: conversions and decimal rendering of rationals.

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

/// Default number of significant digits in decimal output.
pub const DEFAULT_PRECISION: usize = 12;

pub fn int(v: &BigUint) -> BigRational {
    BigRational::from_integer(BigInt::from_biguint(Sign::Plus, v.clone()))
}

pub fn ratio(num: &BigUint, den: &BigUint) -> BigRational {
    int(num) / int(den)
}

pub fn small(num: i64, den: i64) -> BigRational {
    BigRational::new(num.into(), den.into())
}

/// `"num/den"`, or just `"num"` for integers.
pub fn exact_string(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses `"num/den"` or `"num"`.
pub fn parse_exact(s: &str) -> Option<BigRational> {
    match s.split_once('/') {
        Some((n, d)) => {
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                return None;
            }
            Some(BigRational::new(n.trim().parse().ok()?, d))
        }
        None => Some(BigRational::from_integer(s.trim().parse().ok()?)),
    }
}

/// Positional decimal with `sig` significant digits, rounded half away from
/// zero, trailing zeros trimmed. Never uses exponent notation.
pub fn to_decimal(r: &BigRational, sig: usize) -> String {
    let sig = sig.max(1);
    if r.is_zero() {
        return "0".to_string();
    }
    let negative = r.is_negative();
    let num = r.numer().abs();
    let den = r.denom().clone();
    let ten = BigInt::from(10);

    // exponent e with 10^e <= |r| < 10^(e+1)
    let mut e = num.to_string().len() as i64 - den.to_string().len() as i64;
    let scaled_cmp = |e: i64| -> std::cmp::Ordering {
        if e >= 0 {
            num.cmp(&(&den * ten.pow(e as u32)))
        } else {
            (&num * ten.pow((-e) as u32)).cmp(&den)
        }
    };
    if scaled_cmp(e) == std::cmp::Ordering::Less {
        e -= 1;
    }

    // digits = round(|r| * 10^(sig - 1 - e))
    let shift = sig as i64 - 1 - e;
    let (n2, d2) = if shift >= 0 {
        (&num * ten.pow(shift as u32), den.clone())
    } else {
        (num.clone(), &den * ten.pow((-shift) as u32))
    };
    let (q, rem) = n2.div_rem(&d2);
    let mut digits = if rem * 2 >= d2 { q + 1 } else { q };
    if digits == ten.pow(sig as u32) {
        digits /= 10;
        e += 1;
    }
    let digits = digits.to_string();
    debug_assert_eq!(digits.len(), sig);

    let mut out = String::new();
    if negative {
        out.push('-');
    }
    if e >= sig as i64 - 1 {
        out.push_str(&digits);
        out.extend(std::iter::repeat_n('0', (e - sig as i64 + 1) as usize));
        return out;
    }
    let (int_part, frac_part) = if e >= 0 {
        let split = (e + 1) as usize;
        (digits[..split].to_string(), digits[split..].to_string())
    } else {
        let zeros = "0".repeat((-e - 1) as usize);
        ("0".to_string(), format!("{zeros}{digits}"))
    };
    let frac = frac_part.trim_end_matches('0');
    out.push_str(&int_part);
    if !frac.is_empty() {
        out.push('.');
        out.push_str(frac);
    }
    out
}
