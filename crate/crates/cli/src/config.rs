//! Flat `key = value` configuration with command-line overrides.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;
use std::ops::RangeInclusive;
use std::path::{Path, PathBuf};

use gradfem::benchmark::{ProblemKind, StudyConfig};
use gradfem::Exec;

pub const KEYS: [&str; 11] = [
    "omega",
    "mu",
    "radius",
    "levels",
    "problem",
    "quad_degree_vol",
    "quad_degree_edge",
    "cg_tol",
    "newton_tol",
    "output",
    "parallel",
];

#[derive(Debug)]
pub struct ConfigError {
    pub key: String,
    pub message: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "config error: {}: {}", self.key, self.message)
    }
}

fn err(key: &str, message: impl Into<String>) -> ConfigError {
    ConfigError {
        key: key.into(),
        message: message.into(),
    }
}

/// Raw values by key; later insertions win.
#[derive(Debug, Default, Clone)]
pub struct RawConfig(BTreeMap<String, String>);

impl RawConfig {
    pub fn parse(text: &str, origin: &str) -> Result<Self, ConfigError> {
        let mut map = BTreeMap::new();
        for (n, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                err(
                    &format!("{origin}:{}", n + 1),
                    format!("expected key = value, got `{line}`"),
                )
            })?;
            let key = key.trim();
            if !KEYS.contains(&key) {
                return Err(err(key, format!("unknown key ({origin} line {})", n + 1)));
            }
            map.insert(key.to_owned(), value.trim().to_owned());
        }
        Ok(RawConfig(map))
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| err("config", format!("{}: {e}", path.display())))?;
        Self::parse(&text, &path.display().to_string())
    }

    pub fn set(&mut self, key: &str, value: Option<&String>) {
        if let Some(v) = value {
            self.0.insert(key.to_owned(), v.clone());
        }
    }

    fn get(&self, key: &str) -> Option<&str> {
        self.0.get(key).map(String::as_str)
    }

    fn number<T: std::str::FromStr>(&self, key: &str, default: T) -> Result<T, ConfigError> {
        match self.get(key) {
            None => Ok(default),
            Some(v) => v
                .parse()
                .map_err(|_| err(key, format!("`{v}` is not a valid number"))),
        }
    }

    pub fn resolve(&self) -> Result<Settings, ConfigError> {
        let omega = match self.get("omega") {
            None => 1.5 * PI,
            Some(v) => {
                parse_angle(v).ok_or_else(|| err("omega", format!("`{v}` is not an angle")))?
            }
        };
        if !(omega > 0.0 && omega < 2.0 * PI) {
            return Err(err("omega", format!("{omega} must lie in (0, 2pi)")));
        }
        let mu = self.number("mu", 1.0)?;
        if !(mu > 0.0 && mu <= 1.0) {
            return Err(err("mu", format!("{mu} must lie in (0, 1]")));
        }
        let radius = self.number("radius", 1.0)?;
        if !(radius > 0.0 && radius <= 1.0) {
            return Err(err("radius", format!("{radius} must lie in (0, 1]")));
        }
        let levels = match self.get("levels") {
            None => 4..=7,
            Some(v) => parse_levels(v)
                .ok_or_else(|| err("levels", format!("`{v}` is not `n` or `a..b`")))?,
        };
        if *levels.start() < 1 || levels.is_empty() {
            return Err(err(
                "levels",
                format!("{levels:?} must be a non-empty range of levels >= 1"),
            ));
        }
        let problem = match self.get("problem").unwrap_or("linear") {
            "linear" => ProblemKind::Linear,
            "cubic" | "semilinear" => ProblemKind::SemilinearCubic,
            other => {
                return Err(err(
                    "problem",
                    format!("`{other}` is not `linear` or `cubic`"),
                ))
            }
        };
        let quad_degree_vol = self.number("quad_degree_vol", 5usize)?;
        let quad_degree_edge = self.number("quad_degree_edge", 5usize)?;
        if quad_degree_vol < 1 {
            return Err(err("quad_degree_vol", "must be at least 1"));
        }
        let cg_tol = self.number("cg_tol", 1e-12)?;
        let newton_tol = self.number("newton_tol", 1e-11)?;
        for (key, v) in [("cg_tol", cg_tol), ("newton_tol", newton_tol)] {
            if !(v > 0.0 && v < 1.0) {
                return Err(err(key, format!("{v} must lie in (0, 1)")));
            }
        }
        let parallel = match self.get("parallel").unwrap_or("true") {
            "true" | "1" | "yes" => true,
            "false" | "0" | "no" => false,
            other => return Err(err("parallel", format!("`{other}` is not a boolean"))),
        };
        Ok(Settings {
            omega,
            mu,
            radius,
            levels,
            problem,
            quad_degree_vol,
            quad_degree_edge,
            cg_tol,
            newton_tol,
            output: self.get("output").map(PathBuf::from),
            exec: if parallel {
                Exec::Parallel
            } else {
                Exec::Sequential
            },
        })
    }
}

#[derive(Debug, Clone)]
pub struct Settings {
    pub omega: f64,
    pub mu: f64,
    pub radius: f64,
    pub levels: RangeInclusive<usize>,
    pub problem: ProblemKind,
    pub quad_degree_vol: usize,
    pub quad_degree_edge: usize,
    pub cg_tol: f64,
    pub newton_tol: f64,
    pub output: Option<PathBuf>,
    pub exec: Exec,
}

impl Settings {
    pub fn study_config(&self) -> StudyConfig {
        let mut c = StudyConfig::new(self.omega, self.mu);
        c.radius = self.radius;
        c.levels = self.levels.clone();
        c.problem = self.problem;
        c.solve.vol_degree = self.quad_degree_vol;
        c.solve.edge_degree = self.quad_degree_edge;
        c.solve.cg.tol = self.cg_tol;
        c.solve.newton.increment_tol = self.newton_tol;
        c.solve.exec = self.exec;
        c.exec = self.exec;
        c
    }
}

/// `2.356`, `pi`, `1.5pi`, `3pi/4`, `0.75*pi`.
pub fn parse_angle(s: &str) -> Option<f64> {
    let s: String = s
        .chars()
        .filter(|c| !c.is_whitespace())
        .collect::<String>()
        .to_lowercase();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.to_owned(), d.parse::<f64>().ok()?),
        None => (s, 1.0),
    };
    let value = match num.strip_suffix("pi").or_else(|| num.strip_suffix('π')) {
        Some(coef) => {
            let coef = coef.strip_suffix('*').unwrap_or(coef);
            let c = if coef.is_empty() {
                1.0
            } else {
                coef.parse::<f64>().ok()?
            };
            c * PI
        }
        None => num.parse::<f64>().ok()?,
    };
    (den != 0.0 && value.is_finite()).then(|| value / den)
}

/// `n` or `a..b` (inclusive).
pub fn parse_levels(s: &str) -> Option<RangeInclusive<usize>> {
    match s.split_once("..") {
        Some((a, b)) => {
            let b = b.strip_prefix('=').unwrap_or(b);
            Some(a.trim().parse().ok()?..=b.trim().parse().ok()?)
        }
        None => {
            let n = s.trim().parse().ok()?;
            Some(n..=n)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn angles() {
        assert_eq!(parse_angle("1.5pi"), Some(1.5 * PI));
        assert_eq!(parse_angle("3pi/4"), Some(0.75 * PI));
        assert_eq!(parse_angle("0.75 * pi"), Some(0.75 * PI));
        assert_eq!(parse_angle("pi"), Some(PI));
        assert_eq!(parse_angle("2.5"), Some(2.5));
        assert_eq!(parse_angle("pie"), None);
        assert_eq!(parse_angle("1/0"), None);
    }

    #[test]
    fn levels() {
        assert_eq!(parse_levels("3..6"), Some(3..=6));
        assert_eq!(parse_levels("3..=6"), Some(3..=6));
        assert_eq!(parse_levels("2"), Some(2..=2));
        assert_eq!(parse_levels("a..b"), None);
    }

    #[test]
    fn file_then_override() {
        let mut raw = RawConfig::parse(
            "# study\nomega = 0.75pi\nmu = 0.6 # graded\n\nlevels = 2..3\n",
            "f",
        )
        .unwrap();
        raw.set("mu", Some(&"1".to_owned()));
        let s = raw.resolve().unwrap();
        assert_eq!(s.omega, 0.75 * PI);
        assert_eq!(s.mu, 1.0);
        assert_eq!(s.levels, 2..=3);
    }

    #[test]
    fn errors_name_the_key() {
        let bad = |text: &str| {
            RawConfig::parse(text, "f")
                .and_then(|r| r.resolve())
                .unwrap_err()
                .key
        };
        assert_eq!(bad("omega = 3pi"), "omega");
        assert_eq!(bad("mu = 0"), "mu");
        assert_eq!(bad("mu = abc"), "mu");
        assert_eq!(bad("levels = 0..2"), "levels");
        assert_eq!(bad("levels = 3..2"), "levels");
        assert_eq!(bad("radius = 2"), "radius");
        assert_eq!(bad("colour = red"), "colour");
        assert_eq!(bad("problem = quartic"), "problem");
    }
}
