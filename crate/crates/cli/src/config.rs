//! Run configuration: optional `key=value` file, overridden by command-line flags.

use std::fs;
use std::path::Path;

use qes_core::expr::ParameterBindings;

use crate::CliError;

/// Interval used for custom seeds when none is given.
pub const CUSTOM_INTERVAL: (f64, f64) = (-8.0, 8.0);
/// Grid size used for custom seeds when none is given.
pub const CUSTOM_POINTS: usize = 4001;
pub const MIN_POINTS: usize = 101;

#[derive(Debug, Clone, PartialEq)]
pub enum SeedSource {
    Builtin(String),
    Custom(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ReportFormat {
    #[default]
    Text,
    Records,
}

impl std::str::FromStr for ReportFormat {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        match s {
            "text" => Ok(ReportFormat::Text),
            "records" => Ok(ReportFormat::Records),
            other => Err(CliError::Config(format!(
                "unknown format `{other}` (expected text or records)"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub source: SeedSource,
    pub params: ParameterBindings,
    /// `None` means the seed's default.
    pub interval: Option<(f64, f64)>,
    /// `None` means the seed's default.
    pub points: Option<usize>,
    /// Allowed `|E_numeric − E_analytic|`.
    pub eigen_tol: f64,
    /// Allowed relative Schrödinger residual of the analytic states.
    pub residual_tol: f64,
    pub format: ReportFormat,
}

/// Values that may come from a file or from flags; flags win.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Settings {
    pub seed: Option<String>,
    pub wplus: Option<String>,
    pub params: ParameterBindings,
    pub interval: Option<(f64, f64)>,
    pub points: Option<usize>,
    pub eigen_tol: Option<f64>,
    pub residual_tol: Option<f64>,
    pub format: Option<ReportFormat>,
}

impl Settings {
    /// Parses `key=value` lines; blank lines and `#` comments are skipped.
    ///
    /// Keys: `seed`, `wplus`, `interval` (`a,b`), `points`, `eigen_tol`, `residual_tol`,
    /// `format`, `params` (`name=value;name=value`) and `param.<name>`.
    pub fn parse(text: &str) -> Result<Settings, CliError> {
        let mut s = Settings::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let bad = |msg: String| CliError::Config(format!("line {}: {msg}", lineno + 1));
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| bad(format!("expected key=value, got `{line}`")))?;
            let (key, value) = (key.trim(), value.trim());
            match key {
                "seed" => s.seed = Some(value.to_string()),
                "wplus" => s.wplus = Some(value.to_string()),
                "interval" => s.interval = Some(parse_interval(value).map_err(|e| bad(e.to_string()))?),
                "points" => s.points = Some(parse_number(key, value).map_err(|e| bad(e.to_string()))?),
                "eigen_tol" => s.eigen_tol = Some(parse_number(key, value).map_err(|e| bad(e.to_string()))?),
                "residual_tol" => {
                    s.residual_tol = Some(parse_number(key, value).map_err(|e| bad(e.to_string()))?)
                }
                "format" => s.format = Some(value.parse().map_err(|e: CliError| bad(e.to_string()))?),
                "params" => {
                    for item in value.split(';').filter(|t| !t.trim().is_empty()) {
                        let (name, v) = ParameterBindings::parse_assignment(item).map_err(bad)?;
                        s.params.insert(&name, v);
                    }
                }
                _ => match key.strip_prefix("param.") {
                    Some(name) => {
                        let (name, v) = ParameterBindings::parse_assignment(&format!("{name}={value}"))
                            .map_err(bad)?;
                        s.params.insert(&name, v);
                    }
                    None => return Err(bad(format!("unknown key `{key}`"))),
                },
            }
        }
        Ok(s)
    }

    pub fn load(path: &Path) -> Result<Settings, CliError> {
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        Settings::parse(&text)
    }

    /// `self` overridden by every value set in `flags`. Parameters merge by name.
    pub fn overridden_by(self, flags: Settings) -> Settings {
        // a seed chosen on the command line replaces a file's custom expression and vice versa
        let (seed, wplus) = if flags.seed.is_some() || flags.wplus.is_some() {
            (flags.seed, flags.wplus)
        } else {
            (self.seed, self.wplus)
        };
        Settings {
            seed,
            wplus,
            params: self.params.merged(&flags.params),
            interval: flags.interval.or(self.interval),
            points: flags.points.or(self.points),
            eigen_tol: flags.eigen_tol.or(self.eigen_tol),
            residual_tol: flags.residual_tol.or(self.residual_tol),
            format: flags.format.or(self.format),
        }
    }

    pub fn into_config(self) -> Result<RunConfig, CliError> {
        let source = match (self.seed, self.wplus) {
            (Some(name), None) => SeedSource::Builtin(name),
            (None, Some(text)) => SeedSource::Custom(text),
            (Some(_), Some(_)) => {
                return Err(CliError::Config("give either a seed name or --wplus, not both".into()))
            }
            (None, None) => return Err(CliError::Config("no seed: use --seed <name> or --wplus <expr>".into())),
        };
        if let Some(n) = self.points {
            if n < MIN_POINTS {
                return Err(CliError::Config(format!("points must be at least {MIN_POINTS}, got {n}")));
            }
        }
        let eigen_tol = self.eigen_tol.unwrap_or(1e-4);
        let residual_tol = self.residual_tol.unwrap_or(5e-6);
        for (name, v) in [("eigen_tol", eigen_tol), ("residual_tol", residual_tol)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(CliError::Config(format!("{name} must be positive, got {v}")));
            }
        }
        Ok(RunConfig {
            source,
            params: self.params,
            interval: self.interval,
            points: self.points,
            eigen_tol,
            residual_tol,
            format: self.format.unwrap_or_default(),
        })
    }
}

/// `a,b` with finite `a < b`.
pub fn parse_interval(text: &str) -> Result<(f64, f64), CliError> {
    let bad = || CliError::Config(format!("invalid interval `{text}` (expected a,b with a < b)"));
    let (a, b) = text.split_once(',').ok_or_else(bad)?;
    let a: f64 = a.trim().parse().map_err(|_| bad())?;
    let b: f64 = b.trim().parse().map_err(|_| bad())?;
    if a.is_finite() && b.is_finite() && a < b {
        Ok((a, b))
    } else {
        Err(bad())
    }
}

fn parse_number<T: std::str::FromStr>(key: &str, value: &str) -> Result<T, CliError> {
    value
        .parse()
        .map_err(|_| CliError::Config(format!("invalid value `{value}` for {key}")))
}
