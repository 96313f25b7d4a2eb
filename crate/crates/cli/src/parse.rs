//! Flag-value parsers: complex literals "a+bi", rectangles, rho lists.

use num_complex::Complex64;

/// Parse "a+bi" / "a-bi" / "a" / "bi" with optional spaces.
pub fn complex(s: &str) -> Result<Complex64, String> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if t.is_empty() {
        return Err("empty complex literal".into());
    }
    if let Ok(re) = t.parse::<f64>() {
        return Ok(Complex64::new(re, 0.0));
    }
    let body = t.strip_suffix(['i', 'I']).ok_or_else(|| bad(s))?;
    // pure imaginary: "bi", "i", "-i"
    if let Ok(im) = parse_signed_or_unit(body) {
        // make sure it was not "a+bi" with the split missed
        if split_point(body).is_none() {
            return Ok(Complex64::new(0.0, im));
        }
    }
    let pos = split_point(body).ok_or_else(|| bad(s))?;
    let re: f64 = body[..pos].parse().map_err(|_| bad(s))?;
    let im = parse_signed_or_unit(&body[pos..]).map_err(|_| bad(s))?;
    Ok(Complex64::new(re, im))
}

fn bad(s: &str) -> String {
    format!("cannot parse '{s}' as a complex literal (expected a+bi)")
}

/// Index of the sign that splits real from imaginary part, skipping a
/// leading sign and exponent signs.
fn split_point(body: &str) -> Option<usize> {
    let bytes = body.as_bytes();
    for i in (1..bytes.len()).rev() {
        let c = bytes[i];
        if (c == b'+' || c == b'-') && !matches!(bytes[i - 1], b'e' | b'E') {
            return Some(i);
        }
    }
    None
}

fn parse_signed_or_unit(s: &str) -> Result<f64, ()> {
    match s {
        "" | "+" => Ok(1.0),
        "-" => Ok(-1.0),
        _ => s.parse().map_err(|_| ()),
    }
}

/// "x0,y0,x1,y1"
pub fn rect(s: &str) -> Result<(Complex64, Complex64), String> {
    let parts: Vec<f64> = s
        .split(',')
        .map(|p| p.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|_| format!("cannot parse rectangle '{s}' (expected x0,y0,x1,y1)"))?;
    if parts.len() != 4 || parts[0] >= parts[2] || parts[1] >= parts[3] {
        return Err(format!("bad rectangle '{s}'"));
    }
    Ok((
        Complex64::new(parts[0], parts[1]),
        Complex64::new(parts[2], parts[3]),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_literals() {
        assert_eq!(complex("1+0i").unwrap(), Complex64::new(1.0, 0.0));
        assert_eq!(complex("0.5").unwrap(), Complex64::new(0.5, 0.0));
        assert_eq!(complex("-2.5i").unwrap(), Complex64::new(0.0, -2.5));
        assert_eq!(complex("i").unwrap(), Complex64::new(0.0, 1.0));
        assert_eq!(complex("1 - 2i").unwrap(), Complex64::new(1.0, -2.0));
        assert_eq!(complex("1e-3+2e2i").unwrap(), Complex64::new(1e-3, 200.0));
        assert_eq!(complex("0.3-i").unwrap(), Complex64::new(0.3, -1.0));
        assert!(complex("xyz").is_err());
    }

    #[test]
    fn rects() {
        let (lo, hi) = rect("-1.2,-1.2,1.2,1.2").unwrap();
        assert_eq!(lo, Complex64::new(-1.2, -1.2));
        assert_eq!(hi, Complex64::new(1.2, 1.2));
        assert!(rect("1,1,0,0").is_err());
    }
}
