use std::fmt;

use crate::scalar::{format_rational_short, is_integer, Rational, Scalar};

use super::Series;

fn power(e: &Rational) -> String {
    if *e == Rational::ONE {
        "q".to_string()
    } else if is_integer(e) && *e > Rational::ZERO {
        format!("q^{}", format_rational_short(e))
    } else {
        format!("q^({})", format_rational_short(e))
    }
}

/// `O(q^T)` with the same exponent conventions as the terms.
pub(crate) fn big_o(e: &Rational) -> String {
    if *e == Rational::ZERO {
        "O(1)".to_string()
    } else {
        format!("O({})", power(e))
    }
}

impl<C: Scalar> fmt::Display for Series<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (e, c) in self.terms() {
            // Exact coefficients print their sign as the joining operator.
            let (negative, body) = match c.to_rational() {
                Some(r) if r < Rational::ZERO => (true, format_rational_short(&-r)),
                Some(r) => (false, format_rational_short(&r)),
                None => {
                    let text = format!("{c}");
                    match text.strip_prefix('-') {
                        Some(rest) => (true, rest.to_string()),
                        None => (false, text),
                    }
                }
            };
            let sep = match (first, negative) {
                (true, true) => "-",
                (true, false) => "",
                (false, true) => " - ",
                (false, false) => " + ",
            };
            f.write_str(sep)?;
            if e == Rational::ZERO {
                f.write_str(&body)?;
            } else if body == "1" {
                f.write_str(&power(&e))?;
            } else {
                write!(f, "{body} {}", power(&e))?;
            }
            first = false;
        }
        if !first {
            f.write_str(" + ")?;
        }
        f.write_str(&big_o(&self.truncation()))
    }
}
