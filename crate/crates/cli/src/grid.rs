use crate::{CliError, Result};

/// `n` log-spaced integers from `lo` to `hi` inclusive, deduplicated.
pub fn log_grid(lo: i64, hi: i64, n: usize) -> Vec<i64> {
    if n <= 1 || lo >= hi {
        return vec![lo];
    }
    let (a, b) = ((lo as f64).ln(), (hi as f64).ln());
    let mut v: Vec<i64> = (0..n)
        .map(|k| (a + (b - a) * k as f64 / (n - 1) as f64).exp().round() as i64)
        .collect();
    v[0] = lo;
    v[n - 1] = hi;
    v.dedup();
    v
}

fn parse_int(s: &str) -> Result<i64> {
    let s = s.trim();
    if let Ok(n) = s.parse::<i64>() {
        return Ok(n);
    }
    // scientific notation such as 1e6
    let x: f64 = s
        .parse()
        .map_err(|_| CliError::Config(format!("not an integer: {s:?}")))?;
    if x.fract() != 0.0 || x.abs() > 9.0e15 {
        return Err(CliError::Config(format!("not an integer: {s:?}")));
    }
    Ok(x as i64)
}

/// Either `lo:hi:n` for a log-spaced grid or a comma-separated list.
pub fn parse_grid(text: &str) -> Result<Vec<i64>> {
    let parts: Vec<&str> = text.split(':').collect();
    let grid = match parts.as_slice() {
        [lo, hi, n] => {
            let (lo, hi) = (parse_int(lo)?, parse_int(hi)?);
            let n = parse_int(n)?;
            if lo < 1 || hi < lo || n < 1 {
                return Err(CliError::Config(format!("bad grid range {text:?}")));
            }
            log_grid(lo, hi, n as usize)
        }
        [list] => list
            .split(',')
            .filter(|s| !s.trim().is_empty())
            .map(parse_int)
            .collect::<Result<Vec<_>>>()?,
        _ => return Err(CliError::Config(format!("bad grid {text:?}"))),
    };
    if grid.is_empty() {
        return Err(CliError::Config("empty grid".into()));
    }
    Ok(grid)
}
