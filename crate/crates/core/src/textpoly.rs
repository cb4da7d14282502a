//! Parsing and printing of one-variable integer polynomials such as `2*t^2-t+1`.

use std::fmt::Write;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("cannot parse polynomial {text:?}: {reason}")]
pub struct PolyParseError {
    pub text: String,
    pub reason: String,
}

/// Parses a polynomial in `var` with integer coefficients into little-endian
/// coefficients (index k holds the coefficient of `var^k`). Trailing zeros are trimmed.
pub fn parse(text: &str, var: char) -> Result<Vec<i64>, PolyParseError> {
    let err = |reason: &str| PolyParseError { text: text.to_string(), reason: reason.to_string() };
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return Err(err("empty"));
    }
    let mut coeffs: Vec<i64> = Vec::new();
    let bytes: Vec<char> = s.chars().collect();
    let mut i = 0;
    while i < bytes.len() {
        let mut sign = 1i64;
        let mut saw_sign = false;
        while i < bytes.len() && (bytes[i] == '+' || bytes[i] == '-') {
            if bytes[i] == '-' {
                sign = -sign;
            }
            saw_sign = true;
            i += 1;
        }
        if !saw_sign && i != 0 {
            return Err(err("missing operator between terms"));
        }
        let start = i;
        while i < bytes.len() && bytes[i].is_ascii_digit() {
            i += 1;
        }
        let number: Option<i64> = if i > start {
            let digits: String = bytes[start..i].iter().collect();
            Some(digits.parse().map_err(|_| err("coefficient out of range"))?)
        } else {
            None
        };
        let mut power = 0usize;
        let has_star = i < bytes.len() && bytes[i] == '*';
        if has_star {
            if number.is_none() {
                return Err(err("dangling '*'"));
            }
            i += 1;
        }
        if i < bytes.len() && bytes[i] == var {
            i += 1;
            power = 1;
            if i < bytes.len() && bytes[i] == '^' {
                i += 1;
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                if i == start {
                    return Err(err("missing exponent"));
                }
                let digits: String = bytes[start..i].iter().collect();
                power = digits.parse().map_err(|_| err("exponent out of range"))?;
                if power > 4096 {
                    return Err(err("exponent too large"));
                }
            }
        } else if has_star || number.is_none() {
            return Err(err(&format!("expected a term in '{var}'")));
        }
        let c = sign * number.unwrap_or(1);
        if coeffs.len() <= power {
            coeffs.resize(power + 1, 0);
        }
        coeffs[power] = coeffs[power].checked_add(c).ok_or_else(|| err("coefficient overflow"))?;
    }
    while coeffs.len() > 1 && *coeffs.last().unwrap() == 0 {
        coeffs.pop();
    }
    Ok(coeffs)
}

/// Formats little-endian coefficients, highest power first, omitting zero terms.
pub fn format(coeffs: &[i64], var: char) -> String {
    let mut out = String::new();
    for (k, &c) in coeffs.iter().enumerate().rev() {
        if c == 0 {
            continue;
        }
        let abs = c.unsigned_abs();
        if out.is_empty() {
            if c < 0 {
                out.push('-');
            }
        } else {
            out.push(if c < 0 { '-' } else { '+' });
        }
        match (k, abs) {
            (0, a) => write!(out, "{a}").unwrap(),
            (_, 1) => {}
            (_, a) => write!(out, "{a}*").unwrap(),
        }
        match k {
            0 => {}
            1 => out.push(var),
            _ => write!(out, "{var}^{k}").unwrap(),
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_common_forms() {
        assert_eq!(parse("2*t+1", 't').unwrap(), vec![1, 2]);
        assert_eq!(parse("t^2+1", 't').unwrap(), vec![1, 0, 1]);
        assert_eq!(parse("-1", 't').unwrap(), vec![-1]);
        assert_eq!(parse("T^3 + T - 1", 'T').unwrap(), vec![-1, 1, 0, 1]);
        assert_eq!(parse("t-t", 't').unwrap(), vec![0]);
        assert_eq!(parse("3t", 't').unwrap(), vec![0, 3]);
    }

    #[test]
    fn rejects_garbage() {
        assert!(parse("", 't').is_err());
        assert!(parse("t^", 't').is_err());
        assert!(parse("2*", 't').is_err());
        assert!(parse("x+1", 't').is_err());
        assert!(parse("t t", 't').is_err());
    }

    #[test]
    fn format_round_trips() {
        for s in ["2*t+1", "t^2+1", "-t^3+2", "0", "t", "-1"] {
            assert_eq!(format(&parse(s, 't').unwrap(), 't'), s);
        }
    }
}
