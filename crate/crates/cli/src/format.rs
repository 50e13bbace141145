//! Fixed numeric formatting so identical runs give byte-identical output.

/// Rounds to 12 significant digits.
pub fn round12(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    format!("{x:.11e}").parse().expect("formatted float parses")
}

/// `x` rounded to 12 significant digits, printed in plain notation for
/// moderate magnitudes and in exponent notation otherwise.
pub fn sig12(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let r = round12(x);
    if r == 0.0 {
        return "0".into();
    }
    let a = r.abs();
    if (1e-5..1e15).contains(&a) {
        format!("{r}")
    } else {
        format!("{r:e}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn formatting() {
        assert_eq!(sig12(0.0), "0");
        assert_eq!(sig12(-16.25), "-16.25");
        assert_eq!(sig12(1.0 / 3.0), "0.333333333333");
        assert_eq!(sig12(2.0f64.sqrt() * 1e20), "1.41421356237e20");
        assert_eq!(sig12(-3e-9), "-3e-9");
        assert_eq!(sig12(123456789012345.0), "123456789012000");
        assert_eq!(sig12(f64::NAN), "nan");
    }
}
