//! Locale-free number formatting and CSV emission.

use std::io::Write;

/// Shortest form with `digits` significant digits, like C's `%.{digits}g`.
///
/// Negative zero prints as `0` so identical runs stay byte-identical.
pub fn sig(x: f64, digits: usize) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let digits = digits.max(1);
    let sci = format!("{:.*e}", digits - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -4 || exp >= digits as i32 {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{sign}{:02}", trim_zeros(mantissa), exp.abs())
    } else {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{:.*}", decimals, x)).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// Twelve significant digits, the precision of every numeric CSV field.
pub fn num(x: f64) -> String {
    sig(x, 12)
}

/// Writes a header and rows, comma separated with LF endings.
pub fn write_csv<W: Write>(mut w: W, header: &[&str], rows: &[Vec<String>]) -> std::io::Result<()> {
    writeln!(w, "{}", header.join(","))?;
    for r in rows {
        writeln!(w, "{}", r.join(","))?;
    }
    w.flush()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matches_printf_g() {
        let cases = [
            (0.994409, "0.994409"),
            (1.0, "1"),
            (-2.5, "-2.5"),
            (1e-7, "1e-07"),
            (123456789012345.0, "1.23456789012e+14"),
            (0.0001, "0.0001"),
            (0.1 + 0.2, "0.3"),
            (-0.0, "0"),
            (f64::NEG_INFINITY, "-inf"),
            (999999999999.6, "1e+12"),
        ];
        for (x, s) in cases {
            assert_eq!(num(x), s, "{x}");
        }
        assert_eq!(sig(std::f64::consts::PI, 4), "3.142");
    }

    #[test]
    fn csv_layout() {
        let mut out = Vec::new();
        write_csv(&mut out, &["a", "b"], &[vec!["1".into(), "2".into()]]).unwrap();
        assert_eq!(out, b"a,b\n1,2\n");
    }
}
