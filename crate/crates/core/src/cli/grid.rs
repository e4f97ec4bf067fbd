//! Parameter grids: `start:stop:count` (endpoints included), a comma
//! list, or a single value.

use super::CliError;

pub fn parse_grid(name: &str, text: &str) -> Result<Vec<f64>, CliError> {
    let bad = |why: &str| CliError::parameter(name, format!("invalid grid `{text}`: {why}"));
    let number = |s: &str| s.trim().parse::<f64>().map_err(|_| bad("not a number"));
    let text_trim = text.trim();
    if text_trim.is_empty() {
        return Err(bad("empty"));
    }
    let values = if text_trim.contains(':') {
        let parts: Vec<&str> = text_trim.split(':').collect();
        if parts.len() != 3 {
            return Err(bad("expected start:stop:count"));
        }
        let (start, stop) = (number(parts[0])?, number(parts[1])?);
        let count: usize = parts[2]
            .trim()
            .parse()
            .map_err(|_| bad("count must be a positive integer"))?;
        match count {
            0 => return Err(bad("count must be a positive integer")),
            1 => vec![start],
            _ => (0..count)
                .map(|k| {
                    if k == count - 1 {
                        stop
                    } else {
                        start + (stop - start) * k as f64 / (count - 1) as f64
                    }
                })
                .collect(),
        }
    } else {
        text_trim.split(',').map(number).collect::<Result<_, _>>()?
    };
    if values.iter().any(|v: &f64| !v.is_finite()) {
        return Err(bad("values must be finite"));
    }
    Ok(values)
}

pub fn parse_int_list(name: &str, text: &str) -> Result<Vec<u32>, CliError> {
    text.split(',')
        .map(|s| {
            s.trim().parse::<u32>().map_err(|_| {
                CliError::parameter(name, format!("`{s}` is not a non-negative integer"))
            })
        })
        .collect()
}
