//! Line-oriented configuration: `[section]` headers and `key = value` pairs.
//!
//! ```text
//! [sweep]
//! hubble = linspace(0.01, 5, 100)
//! alpha = -inf, -5, -4, -1
//!
//! [cavity]
//! mode = 3
//! ```
//!
//! `#` starts a comment. Unknown sections or keys, duplicates and values that
//! fail validation are reported with their line number.

use std::path::{Path, PathBuf};

use desitter_core::Alpha;

use crate::error::CliError;

#[derive(Clone, Debug, PartialEq)]
pub struct SweepConfig {
    /// Hubble rates, strictly increasing.
    pub hubble: Vec<f64>,
    /// Fixed comoving momentum.
    pub k: f64,
    /// Vacuum parameters, sorted ascending with Bunch-Davies first.
    pub alphas: Vec<Alpha>,
    /// Fock cutoff override; `None` derives it from `tolerance`.
    pub n_max: Option<u32>,
    /// Truncation tolerance in (0, 1).
    pub tolerance: f64,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            hubble: linspace(0.01, 5.0, 100),
            k: 1.0,
            alphas: vec![
                Alpha::BunchDavies,
                Alpha::Finite(-5.0),
                Alpha::Finite(-4.0),
                Alpha::Finite(-1.0),
            ],
            n_max: None,
            tolerance: 1e-12,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CavityConfig {
    pub hubble: Vec<f64>,
    pub z1: f64,
    pub length: f64,
    pub mode: u32,
    pub alpha: Alpha,
    pub norm_a: f64,
    pub norm_b: f64,
    pub omega: f64,
    pub eps: f64,
    pub width: f64,
    pub eta_a: f64,
    /// Cavity-B switching; unset fields fall back to the cavity-A values and
    /// the transit time through the middle of the static cavity.
    pub eps_b: Option<f64>,
    pub width_b: Option<f64>,
    pub eta_b: Option<f64>,
    /// Integration half-window in switching widths.
    pub window: f64,
    /// Size of the Bloch-sphere sample set.
    pub samples: usize,
}

impl Default for CavityConfig {
    fn default() -> Self {
        CavityConfig {
            hubble: linspace(0.02, 0.3, 15),
            z1: 0.5,
            length: 1.0,
            mode: 1,
            alpha: Alpha::Finite(-4.0),
            norm_a: 1.0,
            norm_b: 1.0,
            omega: std::f64::consts::PI,
            eps: 1.0,
            width: 0.5,
            eta_a: -10.0,
            eps_b: None,
            width_b: None,
            eta_b: None,
            window: 8.0,
            samples: 200,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Config {
    pub sweep: SweepConfig,
    pub cavity: CavityConfig,
    pub output: Option<PathBuf>,
}

/// `n` evenly spaced points from `a` to `b` inclusive.
pub fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![a],
        _ => {
            let step = (b - a) / (n - 1) as f64;
            (0..n)
                .map(|i| if i == n - 1 { b } else { a + step * i as f64 })
                .collect()
        }
    }
}

fn err(line: usize, message: impl Into<String>) -> CliError {
    CliError::Config {
        line: Some(line),
        message: message.into(),
    }
}

fn parse_f64(s: &str) -> Result<f64, String> {
    let v: f64 = s.trim().parse().map_err(|_| format!("not a number: {:?}", s.trim()))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(format!("not a finite number: {:?}", s.trim()))
    }
}

/// `linspace(a, b, n)` or a comma-separated list.
fn parse_grid(s: &str) -> Result<Vec<f64>, String> {
    let s = s.trim();
    if let Some(inner) = s.strip_prefix("linspace(").and_then(|r| r.strip_suffix(')')) {
        let parts: Vec<&str> = inner.split(',').collect();
        if parts.len() != 3 {
            return Err("linspace takes (start, stop, count)".into());
        }
        let n: usize = parts[2]
            .trim()
            .parse()
            .map_err(|_| format!("bad point count {:?}", parts[2].trim()))?;
        return Ok(linspace(parse_f64(parts[0])?, parse_f64(parts[1])?, n));
    }
    s.split(',').map(parse_f64).collect()
}

fn check_increasing(v: &[f64]) -> Result<(), String> {
    if v.is_empty() {
        return Err("grid is empty".into());
    }
    if v.windows(2).any(|w| w[1] <= w[0]) {
        return Err("grid must be strictly increasing".into());
    }
    Ok(())
}

fn parse_alpha(s: &str) -> Result<Alpha, String> {
    s.trim().parse::<Alpha>().map_err(|e| e.to_string())
}

fn parse_alphas(s: &str) -> Result<Vec<Alpha>, String> {
    let mut v: Vec<Alpha> = s.split(',').map(parse_alpha).collect::<Result<_, _>>()?;
    v.sort_by(|a, b| a.value().total_cmp(&b.value()));
    if v.is_empty() {
        return Err("alpha list is empty".into());
    }
    if v.windows(2).any(|w| w[0] == w[1]) {
        return Err("alpha list has duplicates".into());
    }
    Ok(v)
}

fn positive(v: f64) -> Result<f64, String> {
    if v > 0.0 {
        Ok(v)
    } else {
        Err(format!("must be positive, got {v}"))
    }
}

fn parse_count<T: std::str::FromStr>(s: &str) -> Result<T, String> {
    s.trim().parse().map_err(|_| format!("not a non-negative integer: {:?}", s.trim()))
}

impl SweepConfig {
    fn set(&mut self, key: &str, value: &str) -> Result<(), String> {
        match key {
            "hubble" => {
                let g = parse_grid(value)?;
                check_increasing(&g)?;
                if g[0] <= 0.0 {
                    return Err("Hubble rates must be positive".into());
                }
                self.hubble = g;
            }
            "k" => self.k = positive(parse_f64(value)?)?,
            "alpha" => self.alphas = parse_alphas(value)?,
            "n_max" => self.n_max = Some(positive(parse_count::<u32>(value)? as f64)? as u32),
            "tolerance" => self.tolerance = parse_f64(value)?,
            _ => return Err(format!("unknown key {key:?} in [sweep]")),
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if !(self.tolerance > 0.0 && self.tolerance < 1.0) {
            return Err(CliError::config(format!(
                "tolerance must lie in (0, 1), got {}",
                self.tolerance
            )));
        }
        check_increasing(&self.hubble).map_err(CliError::config)?;
        Ok(())
    }
}

impl CavityConfig {
    fn set(&mut self, key: &str, value: &str) -> Result<(), String> {
        match key {
            "hubble" => {
                let g = parse_grid(value)?;
                check_increasing(&g)?;
                if g[0] <= 0.0 {
                    return Err("Hubble rates must be positive".into());
                }
                self.hubble = g;
            }
            "z1" => self.z1 = parse_f64(value)?,
            "length" => self.length = positive(parse_f64(value)?)?,
            "mode" => {
                self.mode = parse_count(value)?;
                if self.mode == 0 {
                    return Err("mode index must be positive".into());
                }
            }
            "alpha" => self.alpha = parse_alpha(value)?,
            "norm_a" => self.norm_a = parse_f64(value)?,
            "norm_b" => self.norm_b = parse_f64(value)?,
            "omega" => self.omega = parse_f64(value)?,
            "eps" => self.eps = parse_f64(value)?,
            "width" => self.width = positive(parse_f64(value)?)?,
            "eta_a" => self.eta_a = parse_f64(value)?,
            "eps_b" => self.eps_b = Some(parse_f64(value)?),
            "width_b" => self.width_b = Some(positive(parse_f64(value)?)?),
            "eta_b" => self.eta_b = Some(parse_f64(value)?),
            "window" => self.window = positive(parse_f64(value)?)?,
            "samples" => {
                self.samples = parse_count(value)?;
                if self.samples == 0 {
                    return Err("samples must be positive".into());
                }
            }
            _ => return Err(format!("unknown key {key:?} in [cavity]")),
        }
        Ok(())
    }
}

#[derive(Clone, Copy, PartialEq)]
enum Section {
    Sweep,
    Cavity,
    Output,
}

impl Config {
    pub fn parse(text: &str) -> Result<Config, CliError> {
        let mut cfg = Config::default();
        let mut section = None;
        let mut seen = std::collections::HashSet::new();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            if let Some(name) = line.strip_prefix('[').and_then(|l| l.strip_suffix(']')) {
                section = Some(match name.trim() {
                    "sweep" => Section::Sweep,
                    "cavity" => Section::Cavity,
                    "output" => Section::Output,
                    other => return Err(err(line_no, format!("unknown section [{other}]"))),
                });
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| err(line_no, format!("expected key = value, got {line:?}")))?;
            let key = key.trim();
            let value = value.trim();
            let sec = section.ok_or_else(|| err(line_no, format!("key {key:?} outside any section")))?;
            if !seen.insert((sec as u8, key.to_string())) {
                return Err(err(line_no, format!("duplicate key {key:?}")));
            }
            let res = match sec {
                Section::Sweep => cfg.sweep.set(key, value),
                Section::Cavity => cfg.cavity.set(key, value),
                Section::Output => match key {
                    "path" if !value.is_empty() => {
                        cfg.output = Some(PathBuf::from(value));
                        Ok(())
                    }
                    "path" => Err("empty output path".into()),
                    _ => Err(format!("unknown key {key:?} in [output]")),
                },
            };
            res.map_err(|m| err(line_no, m))?;
        }
        cfg.sweep.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Config, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Config {
            line: None,
            message: format!("cannot read {}: {e}", path.display()),
        })?;
        Config::parse(&text)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_valid() {
        let c = Config::parse("").unwrap();
        assert_eq!(c.sweep.hubble.len(), 100);
        assert_eq!(c.sweep.hubble[99], 5.0);
        assert_eq!(c.sweep.alphas[0], Alpha::BunchDavies);
    }

    #[test]
    fn parses_sections() {
        let c = Config::parse(
            "# comment\n[sweep]\nhubble = 0.1, 0.2 ,0.5\nalpha = -1, -inf\nn_max = 30\n\n[cavity]\nmode = 3 # odd\n[output]\npath = out.csv\n",
        )
        .unwrap();
        assert_eq!(c.sweep.hubble, vec![0.1, 0.2, 0.5]);
        assert_eq!(c.sweep.alphas, vec![Alpha::BunchDavies, Alpha::Finite(-1.0)]);
        assert_eq!(c.sweep.n_max, Some(30));
        assert_eq!(c.cavity.mode, 3);
        assert_eq!(c.output, Some(PathBuf::from("out.csv")));
    }

    #[test]
    fn rejects_bad_input() {
        let bad = [
            "[sweep]\nhubbel = 1",
            "hubble = 1",
            "[nope]",
            "[sweep]\nhubble = 0.2, 0.1",
            "[sweep]\nhubble = linspace(1, 2)",
            "[sweep]\ntolerance = 0",
            "[sweep]\ntolerance = 1.5",
            "[sweep]\nk = 1\nk = 2",
            "[sweep]\nalpha = 0.5",
            "[cavity]\nmode = 0",
            "[sweep]\njust text",
        ];
        for text in bad {
            assert!(matches!(Config::parse(text), Err(CliError::Config { .. })), "{text:?}");
        }
        match Config::parse("[sweep]\n\nk = x") {
            Err(CliError::Config { line, .. }) => assert_eq!(line, Some(3)),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn linspace_endpoints() {
        assert_eq!(linspace(0.0, 1.0, 5), vec![0.0, 0.25, 0.5, 0.75, 1.0]);
        assert_eq!(linspace(2.0, 3.0, 1), vec![2.0]);
    }
}
