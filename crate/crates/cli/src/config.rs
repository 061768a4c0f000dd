//! Config-file merging and the small parsers shared by subcommands.

use std::fmt;

use serde::Deserialize;

/// Error carrying the process exit code.
#[derive(Debug)]
pub enum CliError {
    /// invalid configuration (exit 2)
    Config(String),
    /// a numerical routine failed to converge (exit 3)
    NonConvergence(String),
    /// I/O problem writing output (exit 2)
    Io(std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> std::process::ExitCode {
        let code: u8 = match self {
            CliError::Config(_) | CliError::Io(_) => 2,
            CliError::NonConvergence(_) => 3,
        };
        std::process::ExitCode::from(code)
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(msg) => write!(f, "invalid configuration: {msg}"),
            CliError::NonConvergence(msg) => write!(f, "numerical non-convergence: {msg}"),
            CliError::Io(e) => write!(f, "i/o: {e}"),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

impl From<cvbench::specfun::QuadError> for CliError {
    fn from(e: cvbench::specfun::QuadError) -> Self {
        CliError::NonConvergence(e.to_string())
    }
}

impl From<cvbench::specfun::SpecFunError> for CliError {
    fn from(e: cvbench::specfun::SpecFunError) -> Self {
        CliError::NonConvergence(e.to_string())
    }
}

/// Width parameter accepting the literal token "inf".
pub fn parse_width(s: &str) -> Result<f64, String> {
    if s.eq_ignore_ascii_case("inf") || s.eq_ignore_ascii_case("infinity") {
        return Ok(f64::INFINITY);
    }
    let v: f64 = s.parse().map_err(|_| format!("expected a number or 'inf', got '{s}'"))?;
    if v < 0.0 || v.is_nan() {
        return Err(format!("width parameters must be non-negative, got {v}"));
    }
    Ok(v)
}

/// Grid specification `start:stop:linN` or `start:stop:logN`.
pub fn parse_grid(s: &str) -> Result<Vec<f64>, String> {
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() != 3 {
        return Err(format!("grid must be start:stop:linN or start:stop:logN, got '{s}'"));
    }
    let start: f64 = parts[0].parse().map_err(|_| format!("bad grid start '{}'", parts[0]))?;
    let stop: f64 = parts[1].parse().map_err(|_| format!("bad grid stop '{}'", parts[1]))?;
    let (log, n_str) = if let Some(rest) = parts[2].strip_prefix("log") {
        (true, rest)
    } else if let Some(rest) = parts[2].strip_prefix("lin") {
        (false, rest)
    } else {
        return Err(format!("grid kind must be 'lin' or 'log', got '{}'", parts[2]));
    };
    let n: usize = n_str.parse().map_err(|_| format!("bad grid count '{n_str}'"))?;
    if n < 1 {
        return Err("grid needs at least one point".into());
    }
    if log && (start <= 0.0 || stop <= 0.0) {
        return Err("log grids need positive endpoints".into());
    }
    if n == 1 {
        return Ok(vec![start]);
    }
    let pts = (0..n)
        .map(|i| {
            let f = i as f64 / (n - 1) as f64;
            if log {
                (start.ln() + (stop.ln() - start.ln()) * f).exp()
            } else {
                start + (stop - start) * f
            }
        })
        .collect();
    Ok(pts)
}

/// Subset of settings accepted from a TOML file; flags override these.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub seed: Option<u64>,
    pub workers: Option<usize>,
    pub out: Option<std::path::PathBuf>,
    pub format: Option<String>,
    pub lambda: Option<toml::Value>,
    pub beta: Option<toml::Value>,
    pub n_cut: Option<usize>,
    pub k_max: Option<usize>,
    pub quad_tol: Option<f64>,
    pub tol: Option<f64>,
    pub samples: Option<usize>,
    pub beta_grid: Option<String>,
    pub r_grid: Option<String>,
}

impl FileConfig {
    pub fn load(path: &std::path::Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        toml::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
    }

    /// Width fields accept numbers or the string "inf" in the file.
    pub fn width(value: &Option<toml::Value>) -> Result<Option<f64>, CliError> {
        match value {
            None => Ok(None),
            Some(toml::Value::Float(f)) => Ok(Some(*f)),
            Some(toml::Value::Integer(i)) => Ok(Some(*i as f64)),
            Some(toml::Value::String(s)) => {
                parse_width(s).map(Some).map_err(CliError::Config)
            }
            Some(other) => Err(CliError::Config(format!("bad width value {other}"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn widths() {
        assert_eq!(parse_width("inf").unwrap(), f64::INFINITY);
        assert_eq!(parse_width("2.5").unwrap(), 2.5);
        assert!(parse_width("-1").is_err());
        assert!(parse_width("abc").is_err());
    }

    #[test]
    fn grids() {
        let g = parse_grid("1:30:log20").unwrap();
        assert_eq!(g.len(), 20);
        assert!((g[0] - 1.0).abs() < 1e-12 && (g[19] - 30.0).abs() < 1e-9);
        let g = parse_grid("0:2.5:lin26").unwrap();
        assert_eq!(g.len(), 26);
        assert!((g[1] - 0.1).abs() < 1e-12);
        assert!(parse_grid("1:2").is_err());
        assert!(parse_grid("0:2:log5").is_err());
    }
}
