//! Angle literals: decimal radians or rational multiples of π.

use std::f64::consts::PI;

/// Parses `0.6283`, `pi`, `pi/5`, `2pi/7`, `2*pi/7` and `3π/16`.
pub fn parse_angle(text: &str) -> Result<f64, String> {
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let lower = s.to_ascii_lowercase().replace('π', "pi");
    let Some(pos) = lower.find("pi") else {
        return lower
            .parse::<f64>()
            .ok()
            .filter(|v| v.is_finite())
            .ok_or_else(|| format!("cannot parse angle {text:?}"));
    };
    let (head, tail) = (&lower[..pos], &lower[pos + 2..]);
    let head = head.strip_suffix('*').unwrap_or(head);
    let numerator = match head {
        "" => 1.0,
        "-" => -1.0,
        h => h
            .parse::<f64>()
            .map_err(|_| format!("cannot parse multiplier {h:?} in angle {text:?}"))?,
    };
    let denominator = match tail {
        "" => 1.0,
        t => t
            .strip_prefix('/')
            .and_then(|d| d.parse::<f64>().ok())
            .ok_or_else(|| format!("cannot parse divisor {t:?} in angle {text:?}"))?,
    };
    if denominator == 0.0 {
        return Err(format!("zero divisor in angle {text:?}"));
    }
    Ok(numerator * PI / denominator)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn literals() {
        assert_eq!(parse_angle("pi/5").unwrap(), PI / 5.0);
        assert_eq!(parse_angle("PI / 8").unwrap(), PI / 8.0);
        assert_eq!(parse_angle("2pi/7").unwrap(), 2.0 * PI / 7.0);
        assert_eq!(parse_angle("2*pi/7").unwrap(), 2.0 * PI / 7.0);
        assert_eq!(parse_angle("3π/16").unwrap(), 3.0 * PI / 16.0);
        assert_eq!(parse_angle("pi").unwrap(), PI);
        assert_eq!(parse_angle("0.25").unwrap(), 0.25);
        assert!(parse_angle("pi/0").is_err());
        assert!(parse_angle("pi*5").is_err());
        assert!(parse_angle("abc").is_err());
        assert!(parse_angle("inf").is_err());
    }
}
