//! Deterministic decimal rendering: 12 significant digits, round-half-even,
//! trailing zeros trimmed. Shared by the CLI so identical runs print
//! identical bytes.

use crate::palette::Rational;

/// Significant digits used by the command-line printers.
pub const SIGNIFICANT_DIGITS: usize = 12;

/// Nearest float to an exact rational.
pub fn rational_to_f64(value: &Rational) -> f64 {
    *value.numer() as f64 / *value.denom() as f64
}

/// Renders an exact rational as a plain decimal with
/// [`SIGNIFICANT_DIGITS`] significant digits.
pub fn rational_decimal(value: &Rational) -> String {
    let numer = *value.numer();
    let denom = *value.denom();
    if numer == 0 {
        return "0".to_string();
    }
    match rational_digits(numer, denom, SIGNIFICANT_DIGITS) {
        Some((digits, exponent)) => place_decimal_point(&digits, exponent),
        None => f64_decimal(rational_to_f64(value)),
    }
}

/// First `sig` significant digits of `numer/denom` (round-half-even) and
/// the base-10 exponent of the leading digit. `None` on u128 overflow.
fn rational_digits(numer: u128, denom: u128, sig: usize) -> Option<(Vec<u8>, i32)> {
    // Exponent: largest e with 10^e <= numer/denom.
    let mut exponent = 0i32;
    let mut scaled_numer = numer;
    let mut scaled_denom = denom;
    while scaled_numer / scaled_denom >= 10 {
        scaled_denom = scaled_denom.checked_mul(10)?;
        exponent += 1;
    }
    while scaled_numer < scaled_denom {
        scaled_numer = scaled_numer.checked_mul(10)?;
        exponent -= 1;
    }
    // Now 1 <= scaled_numer/scaled_denom < 10; extract sig digits.
    let mut digits = Vec::with_capacity(sig + 1);
    let mut remainder = scaled_numer;
    for _ in 0..sig {
        let d = remainder / scaled_denom;
        digits.push(d as u8);
        remainder = (remainder - d * scaled_denom).checked_mul(10)?;
    }
    // remainder/10 vs scaled_denom decides rounding of the last digit.
    let rest = remainder / 10;
    let double = rest.checked_mul(2)?;
    let round_up = match double.cmp(&scaled_denom) {
        std::cmp::Ordering::Greater => true,
        std::cmp::Ordering::Less => false,
        std::cmp::Ordering::Equal => digits.last().copied().unwrap_or(0) % 2 == 1,
    };
    if round_up {
        let mut i = digits.len();
        loop {
            if i == 0 {
                digits.insert(0, 1);
                digits.pop();
                exponent += 1;
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
    Some((digits, exponent))
}

/// Renders a nonnegative float as a plain decimal with
/// [`SIGNIFICANT_DIGITS`] significant digits.
pub fn f64_decimal(value: f64) -> String {
    if value == 0.0 {
        return "0".to_string();
    }
    debug_assert!(value.is_finite() && value > 0.0);
    // The standard formatter performs correct rounding at the requested
    // precision; parse its scientific form and re-place the point.
    let formatted = format!("{:.*e}", SIGNIFICANT_DIGITS - 1, value);
    let (mantissa, exp) = formatted.split_once('e').expect("scientific notation");
    let exponent: i32 = exp.parse().expect("integer exponent");
    let digits: Vec<u8> = mantissa
        .bytes()
        .filter(|b| b.is_ascii_digit())
        .map(|b| b - b'0')
        .collect();
    place_decimal_point(&digits, exponent)
}

/// Builds the plain decimal string for `0.d₀d₁… × 10^(exponent+1)` given
/// the significant digits, trimming trailing fractional zeros.
fn place_decimal_point(digits: &[u8], exponent: i32) -> String {
    let digit_chars: Vec<char> = digits.iter().map(|d| (d + b'0') as char).collect();
    let mut out = String::new();
    if exponent >= 0 {
        let int_len = exponent as usize + 1;
        if int_len >= digit_chars.len() {
            out.extend(&digit_chars);
            out.extend(std::iter::repeat_n('0', int_len - digit_chars.len()));
        } else {
            out.extend(&digit_chars[..int_len]);
            out.push('.');
            out.extend(&digit_chars[int_len..]);
        }
    } else {
        out.push_str("0.");
        out.extend(std::iter::repeat_n('0', (-exponent - 1) as usize));
        out.extend(&digit_chars);
    }
    if out.contains('.') {
        while out.ends_with('0') {
            out.pop();
        }
        if out.ends_with('.') {
            out.pop();
        }
    }
    out
}

/// `"n/d = decimal"`, the canonical density rendering.
pub fn rational_with_decimal(value: &Rational) -> String {
    format!("{} = {}", value, rational_decimal(value))
}
