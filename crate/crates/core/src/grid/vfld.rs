//! VFLD v1 text field files.
//!
//! ```text
//! vfld 1
//! rank scalar|vector|biquat|complex2d
//! origin x y z        (two numbers for complex2d)
//! extent x y z
//! res n1 n2 n3
//! <one line per node, x fastest: re im per component>
//! ```
//!
//! Floats are written with Rust's shortest round-trip formatting, so
//! `read(write(F)) == F` bit for bit.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use num_complex::Complex64;

use super::domain::GridDomain;
use super::field::Field;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Rank {
    Scalar,
    Vector,
    Biquat,
    Complex2d,
}

impl Rank {
    pub fn components(self) -> usize {
        match self {
            Rank::Scalar | Rank::Complex2d => 1,
            Rank::Vector => 3,
            Rank::Biquat => 4,
        }
    }

    pub fn dims(self) -> usize {
        match self {
            Rank::Complex2d => 2,
            _ => 3,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Rank::Scalar => "scalar",
            Rank::Vector => "vector",
            Rank::Biquat => "biquat",
            Rank::Complex2d => "complex2d",
        }
    }

    fn for_components(n: usize) -> Rank {
        match n {
            1 => Rank::Scalar,
            3 => Rank::Vector,
            4 => Rank::Biquat,
            _ => unreachable!("no VFLD rank with {n} components"),
        }
    }
}

impl FromStr for Rank {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "scalar" => Ok(Rank::Scalar),
            "vector" => Ok(Rank::Vector),
            "biquat" => Ok(Rank::Biquat),
            "complex2d" => Ok(Rank::Complex2d),
            other => Err(format!("unknown rank `{other}`")),
        }
    }
}

/// Untyped contents of a VFLD file.
#[derive(Clone, Debug, PartialEq)]
pub struct RawField {
    pub rank: Rank,
    pub origin: Vec<f64>,
    pub extent: Vec<f64>,
    pub res: Vec<usize>,
    pub comps: Vec<Vec<Complex64>>,
}

impl RawField {
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let join = |v: &[f64]| v.iter().map(|x| format!("{x:?}")).collect::<Vec<_>>().join(" ");
        let _ = writeln!(s, "vfld 1");
        let _ = writeln!(s, "rank {}", self.rank.name());
        let _ = writeln!(s, "origin {}", join(&self.origin));
        let _ = writeln!(s, "extent {}", join(&self.extent));
        let _ = writeln!(
            s,
            "res {}",
            self.res.iter().map(|n| n.to_string()).collect::<Vec<_>>().join(" ")
        );
        let nodes = self.comps.first().map_or(0, |c| c.len());
        for i in 0..nodes {
            let line = self
                .comps
                .iter()
                .map(|c| format!("{:?} {:?}", c[i].re, c[i].im))
                .collect::<Vec<_>>()
                .join(" ");
            s.push_str(&line);
            s.push('\n');
        }
        s
    }

    pub fn parse(text: &str, path: &Path) -> Result<RawField> {
        let bad = |msg: String| Error::Format { path: path.to_path_buf(), msg };
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let mut header = |key: &str| -> Result<Vec<String>> {
            let (n, line) = lines
                .next()
                .ok_or_else(|| bad(format!("missing `{key}` header line")))?;
            let mut words = line.split_whitespace();
            if words.next() != Some(key) {
                return Err(bad(format!("line {}: expected `{key}`", n + 1)));
            }
            Ok(words.map(str::to_owned).collect())
        };
        let version = header("vfld")?;
        if version != ["1"] {
            return Err(bad(format!("unsupported version {version:?}")));
        }
        let rank_words = header("rank")?;
        let rank: Rank = rank_words
            .first()
            .ok_or_else(|| bad("empty rank".into()))?
            .parse()
            .map_err(bad)?;
        let dims = rank.dims();
        let floats = |words: Vec<String>, key: &str| -> Result<Vec<f64>> {
            if words.len() != dims {
                return Err(bad(format!("`{key}` needs {dims} numbers")));
            }
            words
                .iter()
                .map(|w| w.parse::<f64>().map_err(|e| bad(format!("`{key}`: {e}"))))
                .collect()
        };
        let origin = floats(header("origin")?, "origin")?;
        let extent = floats(header("extent")?, "extent")?;
        let res_words = header("res")?;
        if res_words.len() != dims {
            return Err(bad(format!("`res` needs {dims} integers")));
        }
        let res: Vec<usize> = res_words
            .iter()
            .map(|w| w.parse::<usize>().map_err(|e| bad(format!("`res`: {e}"))))
            .collect::<Result<_>>()?;
        let nodes: usize = res.iter().product();
        let ncomp = rank.components();
        let mut comps = vec![Vec::with_capacity(nodes); ncomp];
        let mut count = 0usize;
        for (n, line) in lines {
            if count == nodes {
                return Err(bad(format!("line {}: more node lines than {nodes}", n + 1)));
            }
            let vals: Vec<f64> = line
                .split_whitespace()
                .map(|w| w.parse::<f64>().map_err(|e| bad(format!("line {}: {e}", n + 1))))
                .collect::<Result<_>>()?;
            if vals.len() != 2 * ncomp {
                return Err(bad(format!(
                    "line {}: expected {} numbers, found {}",
                    n + 1,
                    2 * ncomp,
                    vals.len()
                )));
            }
            for c in 0..ncomp {
                comps[c].push(Complex64::new(vals[2 * c], vals[2 * c + 1]));
            }
            count += 1;
        }
        if count != nodes {
            return Err(bad(format!("expected {nodes} node lines, found {count}")));
        }
        Ok(RawField { rank, origin, extent, res, comps })
    }

    pub fn read(path: &Path) -> Result<RawField> {
        let text = fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        RawField::parse(&text, path)
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        fs::write(path, self.to_text()).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })
    }

    /// Convert to a typed 3D field with `N` components.
    pub fn into_field<const N: usize>(self, path: &Path) -> Result<Field<N>> {
        let bad = |msg: String| Error::Format { path: PathBuf::from(path), msg };
        if self.rank == Rank::Complex2d || self.rank.components() != N {
            return Err(bad(format!(
                "expected a {} field, found {}",
                Rank::for_components(N).name(),
                self.rank.name()
            )));
        }
        let domain = GridDomain::new(
            [self.origin[0], self.origin[1], self.origin[2]],
            [self.extent[0], self.extent[1], self.extent[2]],
            [self.res[0], self.res[1], self.res[2]],
        )
        .map_err(|e| bad(e.to_string()))?;
        let comps: [Vec<Complex64>; N] = self
            .comps
            .try_into()
            .map_err(|_| bad("component count".into()))?;
        Field::from_components(domain, comps).map_err(|e| bad(e.to_string()))
    }
}

impl<const N: usize> Field<N> {
    pub fn to_raw(&self) -> RawField {
        let d = self.domain();
        RawField {
            rank: Rank::for_components(N),
            origin: d.origin().to_vec(),
            extent: d.extent().to_vec(),
            res: d.res().to_vec(),
            comps: self.components().to_vec(),
        }
    }

    pub fn write_vfld(&self, path: &Path) -> Result<()> {
        self.to_raw().write(path)
    }

    pub fn read_vfld(path: &Path) -> Result<Self> {
        RawField::read(path)?.into_field(path)
    }
}
