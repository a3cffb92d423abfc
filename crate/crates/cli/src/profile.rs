//! Factorizing-function profiles and domain templates addressable by name.

use std::path::PathBuf;

use vekua::grid::{GridDomain, RawField, ScalarField};
use vekua::symmetric::{cylindrical_shell_box, spherical_shell_box};
use vekua::{Error, Result};

/// Box on which a scenario is sampled.
#[derive(Clone, Debug, PartialEq)]
pub enum DomainSpec {
    Cube { lo: f64, hi: f64 },
    Box { lo: [f64; 3], hi: [f64; 3] },
    /// `[1,2]×[1,2]×[0,1]`, free of the axis `r = 0`.
    CylShell,
    /// `[1,2]³`, free of the origin.
    SphShell,
}

impl DomainSpec {
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        match s {
            "cyl-shell" => return Ok(DomainSpec::CylShell),
            "sph-shell" => return Ok(DomainSpec::SphShell),
            _ => {}
        }
        let (kind, args) = s
            .split_once(':')
            .ok_or_else(|| Error::Scenario(format!("unknown domain `{s}`")))?;
        let nums = parse_floats(args)?;
        match (kind, nums.len()) {
            ("cube", 2) => Ok(DomainSpec::Cube { lo: nums[0], hi: nums[1] }),
            ("box", 6) => Ok(DomainSpec::Box {
                lo: [nums[0], nums[1], nums[2]],
                hi: [nums[3], nums[4], nums[5]],
            }),
            _ => Err(Error::Scenario(format!("bad domain `{s}`"))),
        }
    }

    pub fn name(&self) -> String {
        match self {
            DomainSpec::Cube { lo, hi } => format!("cube:{lo},{hi}"),
            DomainSpec::Box { lo, hi } => {
                format!("box:{},{},{},{},{},{}", lo[0], lo[1], lo[2], hi[0], hi[1], hi[2])
            }
            DomainSpec::CylShell => "cyl-shell".into(),
            DomainSpec::SphShell => "sph-shell".into(),
        }
    }

    pub fn build(&self, n: usize) -> Result<GridDomain> {
        match self {
            DomainSpec::Cube { lo, hi } => GridDomain::cube(*lo, *hi, n),
            DomainSpec::Box { lo, hi } => GridDomain::from_bounds(*lo, *hi, n),
            DomainSpec::CylShell => cylindrical_shell_box(n),
            DomainSpec::SphShell => spherical_shell_box(n),
        }
    }
}

pub(crate) fn parse_floats(s: &str) -> Result<Vec<f64>> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| Error::Scenario(format!("not a number: `{}`", t.trim())))
        })
        .collect()
}

/// A factorizing function `f`.
#[derive(Clone, Debug, PartialEq)]
pub enum Profile {
    One,
    /// `e^{x1}`, `q = 1`.
    ExpX1,
    /// Cylindrical `r`, `q = 1/r²`.
    RCyl,
    /// Spherical `1/r`, `q = 0`.
    InvRSph,
    /// `x1 - c` with `c` the middle of the x1 range; vanishes on the mid plane.
    LinearX1,
    /// A scalar VFLD file; fixes the grid.
    File(PathBuf),
}

impl Profile {
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        Ok(match s {
            "one" => Profile::One,
            "exp-x1" => Profile::ExpX1,
            "r-cyl" => Profile::RCyl,
            "inv-r-sph" => Profile::InvRSph,
            "linear-x1" => Profile::LinearX1,
            _ => match s.strip_prefix("file:") {
                Some(p) => Profile::File(PathBuf::from(p.trim())),
                None => return Err(Error::Unknown { kind: "profile", name: s.into() }),
            },
        })
    }

    pub fn name(&self) -> String {
        match self {
            Profile::One => "one".into(),
            Profile::ExpX1 => "exp-x1".into(),
            Profile::RCyl => "r-cyl".into(),
            Profile::InvRSph => "inv-r-sph".into(),
            Profile::LinearX1 => "linear-x1".into(),
            Profile::File(p) => format!("file:{}", p.display()),
        }
    }

    pub fn builtin_names() -> &'static [&'static str] {
        &["one", "exp-x1", "r-cyl", "inv-r-sph", "linear-x1"]
    }

    pub fn default_domain(&self) -> DomainSpec {
        match self {
            Profile::RCyl => DomainSpec::CylShell,
            Profile::InvRSph => DomainSpec::SphShell,
            _ => DomainSpec::Cube { lo: 0.0, hi: 1.0 },
        }
    }

    /// Grid stored in a file profile.
    pub fn file_domain(&self) -> Result<Option<GridDomain>> {
        match self {
            Profile::File(p) => Ok(Some(*read_scalar(p)?.domain())),
            _ => Ok(None),
        }
    }

    pub fn sample(&self, d: &GridDomain) -> Result<ScalarField> {
        let mid = d.origin()[0] + 0.5 * d.extent()[0];
        match self {
            Profile::One => ScalarField::from_real_fn(d, |_| 1.0),
            Profile::ExpX1 => ScalarField::from_real_fn(d, |p| p[0].exp()),
            Profile::RCyl => ScalarField::from_real_fn(d, |p| p[0].hypot(p[1])),
            Profile::InvRSph => ScalarField::from_real_fn(d, |p| 1.0 / (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]).sqrt()),
            Profile::LinearX1 => ScalarField::from_real_fn(d, |p| p[0] - mid),
            Profile::File(path) => {
                let f = read_scalar(path)?;
                if !f.domain().same_grid(d) {
                    return Err(Error::FieldMismatch(format!("{} is not on the scenario grid", path.display())));
                }
                Ok(f)
            }
        }
    }
}

pub fn read_scalar(path: &std::path::Path) -> Result<ScalarField> {
    RawField::read(path)?.into_field(path)
}
