//! Answer formatting shared by the tools and the answer scorer.

/// Format a real value with two decimals, rounding halves away from zero
/// in decimal (so 0.125 → "0.13" although its binary value is 0.12499…).
///
/// The value is first written with ten decimals, which absorbs binary
/// representation error, and that decimal string is rounded. Negative
/// zero prints as "0.00". Non-finite values print as Rust formats them.
pub fn format_2dp(x: f64) -> String {
    if !x.is_finite() {
        return format!("{x}");
    }
    let text = format!("{:.10}", x.abs());
    let (int_part, frac) = text.split_once('.').expect("fixed-point output has a decimal point");
    let digits = frac.as_bytes();
    let round_up = digits[2] >= b'5';
    let mut cents: u128 = match int_part.parse::<u128>() {
        Ok(i) => i * 100 + u128::from(digits[0] - b'0') * 10 + u128::from(digits[1] - b'0'),
        // Beyond u128: two-decimal precision is meaningless anyway.
        Err(_) => return format!("{x:.2}"),
    };
    if round_up {
        cents += 1;
    }
    let sign = if x < 0.0 && cents > 0 { "-" } else { "" };
    format!("{sign}{}.{:02}", cents / 100, cents % 100)
}

/// Parse a two-decimal answer back to its value.
pub fn parse_2dp(text: &str) -> Option<f64> {
    text.trim().parse::<f64>().ok().filter(|v| v.is_finite())
}
