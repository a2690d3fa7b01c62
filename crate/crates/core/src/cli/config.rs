//! Run configuration: a sectioned `key = value` text format.
//!
//! ```text
//! # comment
//! [section]
//! key = value          # trailing comments allowed
//! list = 1.0, 0.5, 0.25
//! ```
//!
//! Sections and keys are case-sensitive. Unknown sections or keys and
//! repeated keys are errors reported with their line number.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::geometry::CavitySpec;
use crate::metric::{MetricModel, Polynomial, ZDomain};
use crate::thermal::SeriesControl;

pub const DEFAULT_POINTS: usize = 60;
pub const DEFAULT_PRECISION: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TemperatureMode {
    /// Coordinate temperature `T`, constant through the cavity.
    Coordinate,
    /// Proper temperature `T_p = T/√g00(0)`.
    Proper,
    /// `1/β̃ = 2 T_p L_p`.
    Reduced,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Spacing {
    Linear,
    Log,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ThermalRange {
    Single(f64),
    Sweep { from: f64, to: f64, points: usize, spacing: Spacing },
}

impl ThermalRange {
    /// Sample values in increasing order. A zero-width sweep yields one value.
    pub fn values(&self) -> Vec<f64> {
        match *self {
            ThermalRange::Single(v) => vec![v],
            ThermalRange::Sweep { from, to, points, spacing } => {
                if from == to || points == 1 {
                    return vec![from];
                }
                let last = (points - 1) as f64;
                (0..points)
                    .map(|i| {
                        let f = i as f64 / last;
                        match spacing {
                            Spacing::Linear => from + (to - from) * f,
                            Spacing::Log => from * (to / from).powf(f),
                        }
                    })
                    .collect()
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThermalConfig {
    pub mode: TemperatureMode,
    pub range: ThermalRange,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OutputConfig {
    pub csv: Option<PathBuf>,
    /// Significant digits of printed numbers.
    pub precision: usize,
}

impl Default for OutputConfig {
    fn default() -> Self {
        OutputConfig { csv: None, precision: DEFAULT_PRECISION }
    }
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub path: PathBuf,
    pub metric: MetricModel,
    pub cavity: CavitySpec,
    pub thermal: Option<ThermalConfig>,
    pub series: SeriesControl,
    pub output: OutputConfig,
}

#[derive(Debug, Clone)]
struct Entry {
    value: String,
    line: usize,
}

#[derive(Debug, Clone, Default)]
struct Section {
    line: usize,
    entries: BTreeMap<String, Entry>,
}

const SECTIONS: [(&str, &[&str]); 5] = [
    ("metric", &["kind", "name", "param", "g00", "g11", "g22", "g33", "g03", "z_min", "z_max"]),
    ("cavity", &["L", "x_range", "y_range", "observer_z"]),
    ("thermal", &["mode", "value", "from", "to", "points", "spacing"]),
    ("series", &["max_terms", "tolerance"]),
    ("output", &["csv", "precision"]),
];

/// Parsed sections with the file path, for error reporting.
struct Document {
    path: PathBuf,
    sections: BTreeMap<String, Section>,
}

impl Document {
    fn err(&self, line: usize, msg: impl Into<String>) -> Error {
        Error::Config { path: self.path.clone(), line, msg: msg.into() }
    }

    fn parse(path: &Path, text: &str) -> Result<Self> {
        let mut doc = Document { path: path.to_path_buf(), sections: BTreeMap::new() };
        let mut current: Option<String> = None;
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            if let Some(rest) = content.strip_prefix('[') {
                let name = rest.strip_suffix(']').ok_or_else(|| doc.err(line, "unterminated section header"))?.trim();
                if !SECTIONS.iter().any(|(s, _)| *s == name) {
                    return Err(doc.err(line, format!("unknown section [{name}]")));
                }
                if doc.sections.contains_key(name) {
                    return Err(doc.err(line, format!("section [{name}] appears twice")));
                }
                doc.sections.insert(name.to_string(), Section { line, entries: BTreeMap::new() });
                current = Some(name.to_string());
                continue;
            }
            let (key, value) = content
                .split_once('=')
                .ok_or_else(|| doc.err(line, format!("expected 'key = value', got '{content}'")))?;
            let (key, value) = (key.trim(), value.trim());
            let section_name = current
                .clone()
                .ok_or_else(|| doc.err(line, format!("key '{key}' appears before any section header")))?;
            let allowed = SECTIONS.iter().find(|(s, _)| *s == section_name).map(|(_, k)| *k).unwrap_or(&[]);
            if !allowed.contains(&key) {
                return Err(doc.err(line, format!("unknown key '{key}' in [{section_name}]")));
            }
            if value.is_empty() {
                return Err(doc.err(line, format!("key '{key}' has no value")));
            }
            let section = doc.sections.get_mut(&section_name).expect("section was inserted");
            if section.entries.contains_key(key) {
                return Err(doc.err(line, format!("key '{key}' repeated in [{section_name}]")));
            }
            section.entries.insert(key.to_string(), Entry { value: value.to_string(), line });
        }
        Ok(doc)
    }

    fn section(&self, name: &str) -> Option<&Section> {
        self.sections.get(name)
    }

    fn require(&self, name: &str) -> Result<&Section> {
        self.section(name).ok_or_else(|| self.err(0, format!("missing [{name}] section")))
    }

    fn number(&self, e: &Entry, key: &str) -> Result<f64> {
        let v: f64 =
            e.value.parse().map_err(|_| self.err(e.line, format!("'{key}' expects a number, got '{}'", e.value)))?;
        if !v.is_finite() {
            return Err(self.err(e.line, format!("'{key}' must be finite")));
        }
        Ok(v)
    }

    fn list(&self, e: &Entry, key: &str) -> Result<Vec<f64>> {
        e.value
            .split(',')
            .map(|part| self.number(&Entry { value: part.trim().to_string(), line: e.line }, key))
            .collect()
    }

    fn integer(&self, e: &Entry, key: &str) -> Result<usize> {
        e.value
            .parse()
            .map_err(|_| self.err(e.line, format!("'{key}' expects a non-negative integer, got '{}'", e.value)))
    }

    fn pair(&self, e: &Entry, key: &str) -> Result<(f64, f64)> {
        match self.list(e, key)?.as_slice() {
            [a, b] => Ok((*a, *b)),
            _ => Err(self.err(e.line, format!("'{key}' expects two comma-separated numbers"))),
        }
    }

    fn metric(&self) -> Result<MetricModel> {
        let s = self.require("metric")?;
        let get = |k: &str| s.entries.get(k);
        let kind = get("kind").map(|e| (e.value.as_str(), e.line)).unwrap_or(("catalog", s.line));
        let component_keys = ["g00", "g11", "g22", "g33", "g03"];
        match kind.0 {
            "catalog" => {
                let name = get("name").ok_or_else(|| self.err(s.line, "catalog metric needs 'name'"))?;
                if let Some(k) = component_keys.iter().chain(&["z_min", "z_max"]).find(|k| get(k).is_some()) {
                    return Err(
                        self.err(get(k).expect("present").line, format!("'{k}' is not used by catalog metrics"))
                    );
                }
                let param = get("param").map(|e| self.number(e, "param")).transpose()?;
                let line = get("param").map_or(name.line, |e| e.line);
                MetricModel::from_catalog(&name.value, param).map_err(|e| self.err(line, e.to_string()))
            }
            "constant" | "polynomial" => {
                if let Some(e) = get("param") {
                    return Err(self.err(e.line, "'param' is only used by catalog metrics"));
                }
                let mut parts = Vec::with_capacity(5);
                for key in component_keys {
                    let values = match get(key) {
                        Some(e) => {
                            let v = self.list(e, key)?;
                            if kind.0 == "constant" && v.len() != 1 {
                                return Err(self.err(e.line, format!("constant metric expects one value for '{key}'")));
                            }
                            v
                        }
                        None if key == "g03" => vec![0.0],
                        None => return Err(self.err(s.line, format!("metric needs '{key}'"))),
                    };
                    parts.push(Polynomial::new(values));
                }
                let name = get("name").map_or(kind.0.to_string(), |e| e.value.clone());
                let components: [Polynomial; 5] = parts.try_into().expect("five components");
                let bounds = (get("z_min"), get("z_max"));
                let domain = match bounds {
                    (Some(lo), Some(hi)) => {
                        let (a, b) = (self.number(lo, "z_min")?, self.number(hi, "z_max")?);
                        ZDomain::new(a, b).map_err(|e| self.err(lo.line, e.to_string()))?
                    }
                    (None, None) => ZDomain::UNBOUNDED,
                    (Some(e), None) | (None, Some(e)) => {
                        return Err(self.err(e.line, "z_min and z_max must be given together"))
                    }
                };
                MetricModel::polynomial(name, components, domain).map_err(|e| self.err(kind.1, e.to_string()))
            }
            other => Err(self.err(kind.1, format!("unknown metric kind '{other}' (catalog, constant, polynomial)"))),
        }
    }

    fn cavity(&self) -> Result<CavitySpec> {
        let s = self.require("cavity")?;
        let l = s.entries.get("L").ok_or_else(|| self.err(s.line, "cavity needs 'L'"))?;
        let separation = self.number(l, "L")?;
        let range =
            |key: &str| -> Result<(f64, f64)> { s.entries.get(key).map_or(Ok((0.0, 1.0)), |e| self.pair(e, key)) };
        let (x, y) = (range("x_range")?, range("y_range")?);
        let cavity = CavitySpec::new(separation, x, y).map_err(|e| self.err(l.line, e.to_string()))?;
        let observer = s.entries.get("observer_z").map(|e| self.number(e, "observer_z")).transpose()?;
        Ok(cavity.with_observer(observer.unwrap_or(0.0)))
    }

    fn thermal(&self) -> Result<Option<ThermalConfig>> {
        let Some(s) = self.section("thermal") else { return Ok(None) };
        let get = |k: &str| s.entries.get(k);
        let mode = match get("mode") {
            None => TemperatureMode::Reduced,
            Some(e) => match e.value.as_str() {
                "coordinate" => TemperatureMode::Coordinate,
                "proper" => TemperatureMode::Proper,
                "reduced" => TemperatureMode::Reduced,
                other => {
                    return Err(
                        self.err(e.line, format!("unknown temperature mode '{other}' (coordinate, proper, reduced)"))
                    )
                }
            },
        };
        let positive = |e: &Entry, key: &str| -> Result<f64> {
            let v = self.number(e, key)?;
            if v <= 0.0 {
                return Err(self.err(e.line, format!("'{key}' must be positive")));
            }
            Ok(v)
        };
        let range = match (get("value"), get("from"), get("to")) {
            (Some(v), None, None) => {
                if let Some(e) = get("points").or(get("spacing")) {
                    return Err(self.err(e.line, "'points' and 'spacing' apply to sweeps (from/to)"));
                }
                ThermalRange::Single(positive(v, "value")?)
            }
            (None, Some(a), Some(b)) => {
                let (from, to) = (positive(a, "from")?, positive(b, "to")?);
                if from > to {
                    return Err(self.err(b.line, "sweep range must satisfy from <= to"));
                }
                let points = get("points").map_or(Ok(DEFAULT_POINTS), |e| self.integer(e, "points"))?;
                if points == 0 {
                    return Err(self.err(get("points").map_or(s.line, |e| e.line), "'points' must be at least 1"));
                }
                let spacing = match get("spacing") {
                    None => Spacing::Linear,
                    Some(e) => match e.value.as_str() {
                        "linear" => Spacing::Linear,
                        "log" => Spacing::Log,
                        other => return Err(self.err(e.line, format!("unknown spacing '{other}' (linear, log)"))),
                    },
                };
                ThermalRange::Sweep { from, to, points, spacing }
            }
            _ => return Err(self.err(s.line, "thermal needs either 'value' or both 'from' and 'to'")),
        };
        Ok(Some(ThermalConfig { mode, range }))
    }

    fn series(&self) -> Result<SeriesControl> {
        let Some(s) = self.section("series") else { return Ok(SeriesControl::default()) };
        let d = SeriesControl::default();
        let terms = s.entries.get("max_terms").map_or(Ok(d.max_terms), |e| self.integer(e, "max_terms"))?;
        let tol = s.entries.get("tolerance").map_or(Ok(d.term_tolerance), |e| self.number(e, "tolerance"))?;
        SeriesControl::new(terms, tol).map_err(|e| self.err(s.line, e.to_string()))
    }

    fn output(&self) -> Result<OutputConfig> {
        let Some(s) = self.section("output") else { return Ok(OutputConfig::default()) };
        let precision = match s.entries.get("precision") {
            None => DEFAULT_PRECISION,
            Some(e) => {
                let p = self.integer(e, "precision")?;
                if !(1..=17).contains(&p) {
                    return Err(self.err(e.line, "'precision' must lie in 1..=17"));
                }
                p
            }
        };
        Ok(OutputConfig { csv: s.entries.get("csv").map(|e| PathBuf::from(&e.value)), precision })
    }
}

impl RunConfig {
    pub fn parse(path: &Path, text: &str) -> Result<Self> {
        let doc = Document::parse(path, text)?;
        Ok(RunConfig {
            path: path.to_path_buf(),
            metric: doc.metric()?,
            cavity: doc.cavity()?,
            thermal: doc.thermal()?,
            series: doc.series()?,
            output: doc.output()?,
        })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::parse(path, &text)
    }
}

/// Only the `[metric]` section of a file; other sections are still checked
/// for syntax.
pub fn load_metric(path: &Path) -> Result<MetricModel> {
    let text = std::fs::read_to_string(path)?;
    Document::parse(path, &text)?.metric()
}

/// The `[cavity]` separation of a file, if it has a cavity block.
pub fn load_separation(path: &Path) -> Result<Option<f64>> {
    let text = std::fs::read_to_string(path)?;
    let doc = Document::parse(path, &text)?;
    if doc.section("cavity").is_none() {
        return Ok(None);
    }
    Ok(Some(doc.cavity()?.separation))
}
