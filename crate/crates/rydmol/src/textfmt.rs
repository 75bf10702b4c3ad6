//! Byte-stable numeric formatting for primary outputs.

/// Fixed scientific notation with 9 significant digits. Rust's float
/// formatting is deterministic across platforms, so identical inputs always
/// produce identical bytes.
pub fn sci9(x: f64) -> String {
    if x.is_nan() {
        return "nan".to_string();
    }
    format!("{x:.8e}")
}

/// "NA" for absent values, sci9 otherwise.
pub fn sci9_opt(x: Option<f64>) -> String {
    match x {
        Some(v) => sci9(v),
        None => "NA".to_string(),
    }
}
