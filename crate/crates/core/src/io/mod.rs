//! Text emitters: OBJ meshes, SVG crease patterns and JSON reports.
//!
//! Every `render_*` function is a pure function of its inputs; the `write_*`
//! wrappers only add the file write.

mod obj;
mod report;
mod svg;

pub use obj::{render_mesh, write_mesh};
pub use report::{render_report, write_report};
pub use svg::{render_pattern, write_pattern, PatternStyle};

/// `x` with `digits` significant digits, trailing zeros trimmed, `%g` style.
pub fn format_significant(x: f64, digits: usize) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf" } else { "-inf" }.into();
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{:.*e}", digits - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -5 || exp >= digits as i32 {
        let mantissa = trim_zeros(mantissa);
        return format!("{mantissa}e{exp}");
    }
    let decimals = (digits as i32 - 1 - exp).max(0) as usize;
    let fixed = format!("{x:.decimals$}");
    let fixed = trim_zeros(&fixed);
    if fixed == "-0" {
        "0".into()
    } else {
        fixed
    }
}

fn trim_zeros(s: &str) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::format_significant as f;

    #[test]
    fn significant_digits() {
        assert_eq!(f(0.0, 12), "0");
        assert_eq!(f(-0.0, 12), "0");
        assert_eq!(f(1.0, 12), "1");
        assert_eq!(f(std::f64::consts::PI, 12), "3.14159265359");
        assert_eq!(f(-2.5e-9, 12), "-2.5e-9");
        assert_eq!(f(123456.789, 12), "123456.789");
        assert_eq!(f(1e15, 12), "1e15");
        assert_eq!(f(-1e-17, 12), "-1e-17");
        let x = 0.1234567890123456;
        assert!((f(x, 12).parse::<f64>().unwrap() - x).abs() < 1e-12);
    }
}
