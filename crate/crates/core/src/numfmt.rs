//! Decimal output with 17 significant digits, which round-trips any `f64`.

/// Formats `value` with 17 significant digits, in positional notation when
/// the decimal exponent is in `-5..17` and scientific notation otherwise.
/// Non-finite values are written as Rust prints them.
pub fn sig17(value: f64) -> String {
    if !value.is_finite() {
        return value.to_string();
    }
    if value == 0.0 {
        return "0".to_string();
    }
    let sci = format!("{value:.16e}");
    let exponent: i32 = sci
        .rsplit_once('e')
        .and_then(|(_, e)| e.parse().ok())
        .expect("scientific formatting always carries an exponent");
    if (-5..17).contains(&exponent) {
        let decimals = (16 - exponent) as usize;
        format!("{value:.decimals$}")
    } else {
        sci
    }
}

/// `Some(x)` as [`sig17`], `None` as an empty cell.
pub fn sig17_opt(value: Option<f64>) -> String {
    value.map(sig17).unwrap_or_default()
}
