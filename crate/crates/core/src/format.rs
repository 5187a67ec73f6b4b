//! Number formatting shared by the CSV and JSON writers.

/// 17 significant digits, scientific notation; lossless for `f64`.
/// Non-finite values become `null` so JSON output stays valid.
pub(crate) fn real(x: f64) -> String {
    if x.is_finite() {
        format!("{:.16e}", x)
    } else {
        "null".to_string()
    }
}

/// Same as [`real`] but empty for non-finite values (CSV "absent" field).
pub(crate) fn csv_real(x: Option<f64>) -> String {
    match x {
        Some(v) if v.is_finite() => format!("{:.16e}", v),
        _ => String::new(),
    }
}

pub(crate) fn json_str(s: &str) -> String {
    serde_json::to_string(s).expect("string serialization cannot fail")
}

pub(crate) fn json_array(xs: &[f64]) -> String {
    let items: Vec<String> = xs.iter().map(|&x| real(x)).collect();
    format!("[{}]", items.join(","))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn real_round_trips_bitwise() {
        for &x in &[0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23, f64::MIN_POSITIVE] {
            let back: f64 = real(x).parse().unwrap();
            assert_eq!(back.to_bits(), x.to_bits());
        }
        assert_eq!(real(f64::NAN), "null");
        assert_eq!(csv_real(None), "");
    }
}
