//! Layered run settings: compiled-in defaults, then a `key=value` config
//! file, then command-line flags, each layer overriding the one below.
//!
//! The config file is flat INI-style text: one `key=value` per line, `#`
//! starts a comment (full-line or trailing), blank lines are ignored.
//! Keys match the long flag names with underscores, e.g.
//!
//! ```text
//! example = example1
//! method = cdg
//! epsilon = 1e-6
//! region = [0,0.96875)x[0,0.96875)
//! sweep_epsilons = 1e-1,1e-2,1e-3
//! ```
//!
//! Regions are semicolon-separated rectangles written as two intervals
//! joined by `x`; each interval uses `[`/`]` for a closed endpoint and
//! `(`/`)` for an open one, so `[0,0.5)x[0,1]` is half-open in x and
//! closed in y. An empty region string means "no continuous elements".

use cdg_core::{ExampleKind, MethodKind, Point2, RectRegion, RegionSpec, RunConfig};
use std::path::{Path, PathBuf};
use std::str::FromStr;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read config file {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{location}: {message}")]
    Parse { location: String, message: String },
}

impl ConfigError {
    pub fn parse(location: impl Into<String>, message: impl Into<String>) -> ConfigError {
        ConfigError::Parse {
            location: location.into(),
            message: message.into(),
        }
    }
}

/// One layer of settings; `None` means "not set at this layer".
#[derive(Clone, Debug, Default)]
pub struct Settings {
    pub example: Option<ExampleKind>,
    pub method: Option<MethodKind>,
    pub epsilon: Option<f64>,
    pub nx: Option<usize>,
    pub ny: Option<usize>,
    pub degree: Option<usize>,
    pub sigma_c: Option<f64>,
    pub sigma_d: Option<f64>,
    pub theta: Option<f64>,
    pub region: Option<RegionSpec>,
    pub sweep_epsilons: Option<Vec<f64>>,
    pub sweep_sigmas: Option<Vec<f64>>,
    pub sweep_meshes: Option<Vec<usize>>,
    pub out_csv: Option<PathBuf>,
    pub out_vtk: Option<PathBuf>,
}

impl Settings {
    /// Apply `over` on top of `self`: set values in `over` win.
    pub fn overlay(mut self, over: Settings) -> Settings {
        macro_rules! take {
            ($($field:ident),*) => {
                $(if over.$field.is_some() { self.$field = over.$field; })*
            };
        }
        take!(
            example,
            method,
            epsilon,
            nx,
            ny,
            degree,
            sigma_c,
            sigma_d,
            theta,
            region,
            sweep_epsilons,
            sweep_sigmas,
            sweep_meshes,
            out_csv,
            out_vtk
        );
        self
    }

    pub fn from_file(path: &Path) -> Result<Settings, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        let mut settings = Settings::default();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let location = format!("{}:{}", path.display(), idx + 1);
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| ConfigError::parse(&location, "expected key = value"))?;
            settings.set(key.trim(), value.trim(), &location)?;
        }
        Ok(settings)
    }

    fn set(&mut self, key: &str, value: &str, location: &str) -> Result<(), ConfigError> {
        match key {
            "example" => self.example = Some(parse_as(value, location, "example name")?),
            "method" => self.method = Some(parse_as(value, location, "method name")?),
            "epsilon" => self.epsilon = Some(parse_as(value, location, "number")?),
            "nx" => self.nx = Some(parse_as(value, location, "count")?),
            "ny" => self.ny = Some(parse_as(value, location, "count")?),
            "degree" => self.degree = Some(parse_as(value, location, "degree")?),
            "sigma_c" => self.sigma_c = Some(parse_as(value, location, "number")?),
            "sigma_d" => self.sigma_d = Some(parse_as(value, location, "number")?),
            "theta" => self.theta = Some(parse_as(value, location, "number")?),
            "region" => {
                self.region =
                    Some(parse_region(value).map_err(|m| ConfigError::parse(location, m))?)
            }
            "sweep_epsilons" => {
                self.sweep_epsilons = Some(parse_list(value, location, "number")?)
            }
            "sweep_sigmas" => self.sweep_sigmas = Some(parse_list(value, location, "number")?),
            "sweep_meshes" => self.sweep_meshes = Some(parse_list(value, location, "count")?),
            "out_csv" => self.out_csv = Some(PathBuf::from(value)),
            "out_vtk" => self.out_vtk = Some(PathBuf::from(value)),
            _ => {
                return Err(ConfigError::parse(
                    location,
                    format!("unknown key `{key}`"),
                ))
            }
        }
        Ok(())
    }

    /// Final run configuration: set values over the compiled-in defaults.
    pub fn run_config(&self) -> RunConfig {
        let defaults = RunConfig::default();
        let mut config = RunConfig {
            example: self.example.unwrap_or(defaults.example),
            method: self.method.unwrap_or(defaults.method),
            degree: self.degree.unwrap_or(defaults.degree),
            nx: self.nx.unwrap_or(defaults.nx),
            ny: self.ny.unwrap_or(defaults.ny),
            epsilon: self.epsilon.unwrap_or(defaults.epsilon),
            theta: self.theta.unwrap_or(defaults.theta),
            sigma: self.sigma_d,
            sigma_continuous: self.sigma_c,
            region: self.region.clone(),
            ..defaults
        };
        if let Some(list) = &self.sweep_epsilons {
            config.epsilons = list.clone();
        }
        if let Some(list) = &self.sweep_sigmas {
            config.sigma_sweep = list.clone();
        }
        if let Some(list) = &self.sweep_meshes {
            config.sweep_meshes = list.clone();
        }
        config
    }
}

fn parse_as<T: FromStr>(value: &str, location: &str, what: &str) -> Result<T, ConfigError>
where
    T::Err: std::fmt::Display,
{
    value
        .parse()
        .map_err(|e| ConfigError::parse(location, format!("invalid {what} `{value}`: {e}")))
}

fn parse_list<T: FromStr>(value: &str, location: &str, what: &str) -> Result<Vec<T>, ConfigError>
where
    T::Err: std::fmt::Display,
{
    let items: Result<Vec<T>, _> = value
        .split(',')
        .map(|item| parse_as(item.trim(), location, what))
        .collect();
    let items = items?;
    if items.is_empty() {
        return Err(ConfigError::parse(location, "empty list"));
    }
    Ok(items)
}

/// Parse the rectangle-list region grammar, e.g.
/// `[0,0.5)x[0,0.5); (0.75,1]x[0,1]`. Empty input is the empty region.
pub fn parse_region(text: &str) -> Result<RegionSpec, String> {
    let text = text.trim();
    if text.is_empty() {
        return Ok(RegionSpec::empty());
    }
    let rectangles: Result<Vec<RectRegion>, String> =
        text.split(';').map(|item| parse_rect(item.trim())).collect();
    Ok(RegionSpec::new(rectangles?))
}

fn parse_rect(item: &str) -> Result<RectRegion, String> {
    let (x_interval, rest) = parse_interval(item)?;
    let rest = rest.trim_start();
    let rest = rest
        .strip_prefix(['x', 'X'])
        .ok_or_else(|| format!("expected `x` between intervals in `{item}`"))?;
    let (y_interval, tail) = parse_interval(rest.trim_start())?;
    if !tail.trim().is_empty() {
        return Err(format!("trailing input `{}` after rectangle", tail.trim()));
    }
    let (x0, x1, xl, xu) = x_interval;
    let (y0, y1, yl, yu) = y_interval;
    if !(x0 < x1 && y0 < y1) {
        return Err(format!("degenerate rectangle in `{item}`"));
    }
    Ok(RectRegion {
        lower: Point2::new(x0, y0),
        upper: Point2::new(x1, y1),
        lower_closed: [xl, yl],
        upper_closed: [xu, yu],
    })
}

/// Parse one `[a,b)`-style interval from the front of `s`; returns
/// `(lower, upper, lower_closed, upper_closed)` and the unconsumed rest.
fn parse_interval(s: &str) -> Result<((f64, f64, bool, bool), &str), String> {
    let mut chars = s.chars();
    let lower_closed = match chars.next() {
        Some('[') => true,
        Some('(') => false,
        other => {
            return Err(format!(
                "expected `[` or `(` at `{}`",
                other.map(String::from).unwrap_or_default()
            ))
        }
    };
    let body = chars.as_str();
    let close = body
        .find([']', ')'])
        .ok_or_else(|| format!("unterminated interval in `{s}`"))?;
    let upper_closed = body[close..].starts_with(']');
    let inner = &body[..close];
    let (lo, hi) = inner
        .split_once(',')
        .ok_or_else(|| format!("expected `lower,upper` in `{inner}`"))?;
    let lo: f64 = lo
        .trim()
        .parse()
        .map_err(|e| format!("invalid number `{}`: {e}", lo.trim()))?;
    let hi: f64 = hi
        .trim()
        .parse()
        .map_err(|e| format!("invalid number `{}`: {e}", hi.trim()))?;
    Ok(((lo, hi, lower_closed, upper_closed), &body[close + 1..]))
}
