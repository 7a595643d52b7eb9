//! Angles on the command line: plain numbers or multiples of `pi`.

/// Parse `1.0472`, `pi`, `-pi/2`, `2pi/3`, `2*pi/3` or `0.25pi`.
pub fn parse_angle(text: &str) -> Result<f64, String> {
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect::<String>().to_lowercase();
    if let Ok(v) = s.parse::<f64>() {
        return finite(v, text);
    }
    let Some(at) = s.find("pi") else {
        return Err(format!("`{text}` is neither a number nor a multiple of pi"));
    };
    let (head, tail) = (&s[..at], &s[at + 2..]);
    let head = head.strip_suffix('*').unwrap_or(head);
    let coefficient = match head {
        "" | "+" => 1.0,
        "-" => -1.0,
        h => h
            .parse::<f64>()
            .map_err(|_| format!("bad coefficient `{h}` in `{text}`"))?,
    };
    let divisor = match tail {
        "" => 1.0,
        t => {
            let d = t
                .strip_prefix('/')
                .and_then(|d| d.parse::<f64>().ok())
                .ok_or_else(|| format!("bad divisor `{t}` in `{text}`"))?;
            if d == 0.0 {
                return Err(format!("division by zero in `{text}`"));
            }
            d
        }
    };
    finite(coefficient * std::f64::consts::PI / divisor, text)
}

fn finite(v: f64, text: &str) -> Result<f64, String> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(format!("`{text}` is not finite"))
    }
}

/// Parse a comma-separated list of reals.
pub fn parse_reals(text: &str) -> Result<Vec<f64>, String> {
    text.split(',')
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| format!("`{}` is not a finite number", t.trim()))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn accepts_numbers_and_multiples_of_pi() {
        assert_eq!(parse_angle("1.5").unwrap(), 1.5);
        assert_eq!(parse_angle("pi").unwrap(), PI);
        assert_eq!(parse_angle("-pi/2").unwrap(), -PI / 2.0);
        assert_eq!(parse_angle("2pi/3").unwrap(), 2.0 * PI / 3.0);
        assert_eq!(parse_angle("2*pi/3").unwrap(), 2.0 * PI / 3.0);
        assert_eq!(parse_angle("0.25 PI").unwrap(), 0.25 * PI);
    }

    #[test]
    fn rejects_garbage() {
        for bad in ["", "tau", "pi/0", "xpi", "pi/", "inf", "1e400"] {
            assert!(parse_angle(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn reals_list() {
        assert_eq!(parse_reals("1, 0,-0.5").unwrap(), vec![1.0, 0.0, -0.5]);
        assert!(parse_reals("1,,2").is_err());
        assert!(parse_reals("nan").is_err());
    }
}
