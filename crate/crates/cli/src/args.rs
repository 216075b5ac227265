//! Parsers for the numeric flag formats.

use num_complex::Complex64;

/// Parses `re,im` (a single comma, no whitespace).
pub fn parse_complex(s: &str) -> Result<Complex64, String> {
    if s.chars().any(char::is_whitespace) {
        return Err(format!("complex value `{s}` must not contain whitespace (expected `re,im`)"));
    }
    let (re, im) = s
        .split_once(',')
        .ok_or_else(|| format!("complex value `{s}` must have the form `re,im`"))?;
    let re = parse_real(re)?;
    let im = parse_real(im)?;
    Ok(Complex64::new(re, im))
}

/// Inverse of [`parse_complex`]; shortest round-trip decimals.
pub fn format_complex(z: Complex64) -> String {
    format!("{},{}", z.re, z.im)
}

pub fn parse_real(s: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|_| format!("`{s}` is not a number"))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(format!("`{s}` is not finite"))
    }
}

/// Comma-separated list of reals.
pub fn parse_real_list(s: &str) -> Result<Vec<f64>, String> {
    if s.is_empty() {
        return Err("empty list".into());
    }
    s.split(',').map(parse_real).collect()
}

/// Evenly spaced grid `start:stop:count`, both ends included.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridAxis {
    pub start: f64,
    pub stop: f64,
    pub count: usize,
}

impl GridAxis {
    pub fn single(v: f64) -> Self {
        Self {
            start: v,
            stop: v,
            count: 1,
        }
    }

    pub fn points(&self) -> Vec<f64> {
        if self.count == 1 {
            return vec![self.start];
        }
        let step = (self.stop - self.start) / (self.count - 1) as f64;
        (0..self.count)
            .map(|i| if i + 1 == self.count { self.stop } else { self.start + step * i as f64 })
            .collect()
    }
}

pub fn parse_grid_axis(s: &str) -> Result<GridAxis, String> {
    let parts: Vec<&str> = s.split(':').collect();
    match parts.as_slice() {
        [v] => Ok(GridAxis::single(parse_real(v)?)),
        [start, stop, count] => {
            let start = parse_real(start)?;
            let stop = parse_real(stop)?;
            let count: usize = count
                .parse()
                .map_err(|_| format!("grid count `{count}` is not a positive integer"))?;
            if count == 0 {
                return Err("grid count must be at least 1".into());
            }
            if count == 1 && start != stop {
                return Err("a single-point grid needs start == stop".into());
            }
            if stop < start {
                return Err(format!("grid `{s}` has stop < start"));
            }
            Ok(GridAxis { start, stop, count })
        }
        _ => Err(format!("grid `{s}` must be `value` or `start:stop:count`")),
    }
}
