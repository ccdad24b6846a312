//! Deterministic number formatting for the CSV outputs.

/// Format a float with 12 significant digits in scientific notation.
///
/// Rust's float formatter rounds correctly, so the output is a pure
/// function of the bits; `-0.0` canonicalizes to `0.0` first.
pub fn sig12(x: f64) -> String {
    let x = if x == 0.0 { 0.0 } else { x };
    format!("{x:.11e}")
}
