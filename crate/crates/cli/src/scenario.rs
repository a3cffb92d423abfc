//! Scenario files: flat `key = value` lines grouped by `[name]` sections.
//!
//! ```text
//! [cyl-f-r]
//! f = r-cyl
//! domain = cyl-shell
//! rho = log-r
//! res = 16, 32
//! checks = quartet, factorization, triplet
//! tol_k = 2
//! tol_k.triplet = 4
//! ```
//!
//! Keys before the first section belong to a scenario named after the file.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use vekua::symmetric::HarmonicFunctionSpec;
use vekua::{Error, Result};

use crate::profile::{parse_floats, DomainSpec, Profile};

pub const DEFAULT_TOL_K: f64 = 2.0;
pub const DEFAULT_RATIO: (f64, f64) = (3.5, 4.5);
pub const DEFAULT_QUADRATURE_BOUND: f64 = 0.05;
pub const DEFAULT_RES: [usize; 2] = [16, 32];

const BUILTIN: &str = include_str!("../scenarios/builtin.scn");

#[derive(Clone, Debug, PartialEq)]
pub enum GaugeSpec {
    Zero,
    File(PathBuf),
}

#[derive(Clone, Debug)]
pub struct Scenario {
    pub name: String,
    pub domain: DomainSpec,
    pub f: Profile,
    pub rho: Option<HarmonicFunctionSpec>,
    pub gauge: GaugeSpec,
    /// Base point of the path integrals; the domain origin when absent.
    pub base: Option<[f64; 3]>,
    pub tol_k: f64,
    pub tol_k_overrides: BTreeMap<String, f64>,
    pub ratio: (f64, f64),
    pub quadrature_bound: f64,
    pub res: Vec<usize>,
    pub checks: Vec<String>,
}

impl Scenario {
    pub fn new(name: impl Into<String>, f: Profile) -> Self {
        Scenario {
            name: name.into(),
            domain: f.default_domain(),
            f,
            rho: None,
            gauge: GaugeSpec::Zero,
            base: None,
            tol_k: DEFAULT_TOL_K,
            tol_k_overrides: BTreeMap::new(),
            ratio: DEFAULT_RATIO,
            quadrature_bound: DEFAULT_QUADRATURE_BOUND,
            res: DEFAULT_RES.to_vec(),
            checks: Vec::new(),
        }
    }

    pub fn tol_k_for(&self, check: &str) -> f64 {
        self.tol_k_overrides.get(check).copied().unwrap_or(self.tol_k)
    }

    fn set(&mut self, key: &str, value: &str, dir: &Path) -> Result<()> {
        let resolve = |p: &str| {
            let p = Path::new(p.trim());
            if p.is_relative() {
                dir.join(p)
            } else {
                p.to_path_buf()
            }
        };
        match key {
            "domain" => self.domain = DomainSpec::parse(value)?,
            "f" => {
                self.f = match value.trim().strip_prefix("file:") {
                    Some(p) => Profile::File(resolve(p)),
                    None => Profile::parse(value)?,
                };
            }
            "rho" => self.rho = Some(HarmonicFunctionSpec::parse(value.trim())?),
            "gauge" => {
                self.gauge = match value.trim() {
                    "zero" => GaugeSpec::Zero,
                    v => match v.strip_prefix("file:") {
                        Some(p) => GaugeSpec::File(resolve(p)),
                        None => return Err(Error::Scenario(format!("bad gauge `{v}`"))),
                    },
                }
            }
            "base" => {
                let v = parse_floats(value)?;
                let b: [f64; 3] = v
                    .try_into()
                    .map_err(|_| Error::Scenario("base needs three coordinates".into()))?;
                self.base = Some(b);
            }
            "tol_k" => self.tol_k = parse_positive(value)?,
            "ratio" => {
                let v = parse_floats(value)?;
                if v.len() != 2 || !(v[0] < v[1]) {
                    return Err(Error::Scenario(format!("bad ratio window `{value}`")));
                }
                self.ratio = (v[0], v[1]);
            }
            "quadrature_bound" => self.quadrature_bound = parse_positive(value)?,
            "res" => self.res = parse_res(value)?,
            "checks" => {
                self.checks = value
                    .split(',')
                    .map(|s| s.trim().to_string())
                    .filter(|s| !s.is_empty())
                    .collect()
            }
            _ => match key.strip_prefix("tol_k.") {
                Some(check) => {
                    self.tol_k_overrides.insert(check.to_string(), parse_positive(value)?);
                }
                None => return Err(Error::Scenario(format!("unknown key `{key}`"))),
            },
        }
        Ok(())
    }

    /// Referenced files exist and resolutions are strictly increasing.
    pub fn validate(&self) -> Result<()> {
        if self.res.is_empty() || self.res.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Scenario(format!("{}: resolutions must be strictly increasing", self.name)));
        }
        let mut files = Vec::new();
        if let Profile::File(p) = &self.f {
            files.push(p);
        }
        if let GaugeSpec::File(p) = &self.gauge {
            files.push(p);
        }
        for p in files {
            if !p.exists() {
                return Err(Error::Io {
                    path: p.clone(),
                    source: std::io::Error::new(std::io::ErrorKind::NotFound, "referenced file does not exist"),
                });
            }
        }
        Ok(())
    }
}

fn parse_positive(s: &str) -> Result<f64> {
    match s.trim().parse::<f64>() {
        Ok(v) if v > 0.0 && v.is_finite() => Ok(v),
        _ => Err(Error::Scenario(format!("expected a positive number, got `{}`", s.trim()))),
    }
}

pub fn parse_res(s: &str) -> Result<Vec<usize>> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<usize>()
                .map_err(|_| Error::Scenario(format!("bad resolution `{}`", t.trim())))
        })
        .collect()
}

/// Parse every scenario in `text`; relative paths resolve against `dir`.
pub fn parse_scenarios(text: &str, default_name: &str, dir: &Path) -> Result<Vec<Scenario>> {
    let mut sections: Vec<(String, Vec<(usize, String, String)>)> = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if let Some(name) = line.strip_prefix('[').and_then(|l| l.strip_suffix(']')) {
            sections.push((name.trim().to_string(), Vec::new()));
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| Error::Scenario(format!("line {}: expected `key = value`", lineno + 1)))?;
        if sections.is_empty() {
            sections.push((default_name.to_string(), Vec::new()));
        }
        sections.last_mut().unwrap().1.push((lineno + 1, k.trim().to_string(), v.trim().to_string()));
    }
    sections
        .into_iter()
        .map(|(name, entries)| {
            let f = entries
                .iter()
                .find(|(_, k, _)| k == "f")
                .ok_or_else(|| Error::Scenario(format!("{name}: missing `f`")))?;
            let mut sc = Scenario::new(name.clone(), Profile::One);
            sc.set("f", &f.2, dir)?;
            sc.domain = sc.f.default_domain();
            for (lineno, k, v) in &entries {
                sc.set(k, v, dir)
                    .map_err(|e| Error::Scenario(format!("{name}, line {lineno}: {e}")))?;
            }
            Ok(sc)
        })
        .collect()
}

pub fn load_file(path: &Path) -> Result<Vec<Scenario>> {
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io { path: path.to_path_buf(), source })?;
    let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("scenario");
    let dir = path.parent().unwrap_or(Path::new("."));
    parse_scenarios(&text, stem, dir)
}

pub fn builtin() -> Vec<Scenario> {
    parse_scenarios(BUILTIN, "builtin", Path::new(".")).expect("built-in scenarios parse")
}

pub fn builtin_named(name: &str) -> Result<Scenario> {
    builtin()
        .into_iter()
        .find(|s| s.name == name)
        .ok_or_else(|| Error::Unknown { kind: "scenario", name: name.into() })
}
