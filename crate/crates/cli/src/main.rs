use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use vekua::antiderivative::{HarmonicGauge, Reconstructor};
use vekua::grid::{BiquaternionField, RawField, VectorField, DEFAULT_LAYER};
use vekua::potential::{curl_inverse, curl_inverses, PotentialPath, DEFAULT_CURL_INVERSE};
use vekua::symmetric::schrodinger_from_symmetry;
use vekua::vekua_ops::{bers_derivative, schrodinger_residual, v_residual, FactorizingFunction};
use vekua::{Error, Result};
use vekua_cli::checks::{checks, PRECONDITION_TOL};
use vekua_cli::profile::{read_scalar, Profile};
use vekua_cli::report::{is_usage_error, verify, VerifyOptions, NEWTON_RES_LIMIT};
use vekua_cli::scenario::{self, parse_res, Scenario};

#[derive(Parser)]
#[command(name = "vekua", version, about = "Biquaternionic Vekua equations on uniform grids")]
struct Cli {
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Args, Clone)]
struct Common {
    /// Interior layers excluded from residual norms.
    #[arg(long, default_value_t = DEFAULT_LAYER)]
    exclude_boundary: usize,
    /// Relative tolerance for input checks.
    #[arg(long, default_value_t = PRECONDITION_TOL)]
    tol: f64,
    /// Right inverse of rot used by reconstructions.
    #[arg(long, default_value = DEFAULT_CURL_INVERSE)]
    curl_inverse: String,
    /// Run Newton-potential commands above 32³.
    #[arg(long)]
    force: bool,
}

#[derive(Copy, Clone, ValueEnum)]
enum GaugeKind {
    Zero,
    File,
}

#[derive(Args, Clone)]
struct GaugeArgs {
    #[arg(long, value_enum, default_value = "zero")]
    gauge: GaugeKind,
    /// Harmonic `h` for `--gauge file`.
    #[arg(long)]
    gauge_file: Option<PathBuf>,
}

#[derive(Copy, Clone, ValueEnum)]
enum Direction {
    ScalarToVector,
    VectorToScalar,
}

#[derive(Subcommand)]
enum Command {
    /// Run verification scenarios.
    Verify {
        /// Scenario names; all built-in ones when empty.
        names: Vec<String>,
        /// Extra scenario file; its scenarios are added to the built-in ones.
        #[arg(long)]
        scenario_file: Option<PathBuf>,
        /// Resolution list, e.g. 16,32.
        #[arg(long)]
        res: Option<String>,
        /// Constant K in the bound K h².
        #[arg(long)]
        tol_k: Option<f64>,
        /// Base point x,y,z of path integrals.
        #[arg(long)]
        base: Option<String>,
        #[arg(long)]
        json: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Bers derivative of a biquaternion field.
    Derive {
        input: PathBuf,
        #[arg(long)]
        f: PathBuf,
        #[arg(long, short)]
        out: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Solution of V W = 0 with a given Bers derivative.
    Antiderive {
        input: PathBuf,
        #[arg(long)]
        f: PathBuf,
        #[arg(long, short)]
        out: PathBuf,
        #[arg(long)]
        base: Option<String>,
        #[command(flatten)]
        gauge: GaugeArgs,
        #[command(flatten)]
        common: Common,
    },
    /// Complete a scalar or vector part to a solution of V W = 0.
    Conjugate {
        input: PathBuf,
        #[arg(long)]
        f: PathBuf,
        #[arg(long, value_enum)]
        direction: Direction,
        #[arg(long, short)]
        out: PathBuf,
        #[arg(long)]
        base: Option<String>,
        #[command(flatten)]
        gauge: GaugeArgs,
        #[command(flatten)]
        common: Common,
    },
    /// Schrödinger solution ψ = f 𝒜[Dρ/f²] for a scenario.
    Generate {
        scenario: String,
        #[arg(long)]
        scenario_file: Option<PathBuf>,
        #[arg(long, default_value_t = 17)]
        res: usize,
        #[arg(long, default_value_t = scenario::DEFAULT_TOL_K)]
        tol_k: f64,
        #[arg(long)]
        base: Option<String>,
        #[arg(long, short)]
        out: PathBuf,
        /// Also write the sampled f.
        #[arg(long)]
        f_out: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// List scenarios, checks, profiles and curl inverses.
    List {
        #[arg(long)]
        scenario_file: Option<PathBuf>,
    },
}

/// Outcome of a command apart from hard errors.
enum Outcome {
    Pass,
    CheckFailed,
}

fn parse_base(s: &Option<String>) -> Result<Option<[f64; 3]>> {
    let Some(s) = s else { return Ok(None) };
    let v: Vec<f64> = s
        .split(',')
        .map(|t| t.trim().parse::<f64>().map_err(|_| Error::Scenario(format!("bad base `{s}`"))))
        .collect::<Result<_>>()?;
    let b: [f64; 3] = v.try_into().map_err(|_| Error::Scenario("base needs three coordinates".into()))?;
    Ok(Some(b))
}

fn path_for(base: &Option<String>, d: &vekua::grid::GridDomain) -> Result<PotentialPath> {
    Ok(match parse_base(base)? {
        Some(b) => PotentialPath::new(b),
        None => PotentialPath::at_origin(d),
    })
}

fn scenarios(file: &Option<PathBuf>) -> Result<Vec<Scenario>> {
    let mut all = scenario::builtin();
    if let Some(p) = file {
        all.extend(scenario::load_file(p)?);
    }
    Ok(all)
}

fn load_f(path: &Path) -> Result<FactorizingFunction> {
    FactorizingFunction::new(read_scalar(path)?)
}

fn gauge(g: &GaugeArgs, common: &Common) -> Result<HarmonicGauge> {
    match (g.gauge, &g.gauge_file) {
        (GaugeKind::Zero, _) => Ok(HarmonicGauge::Zero),
        (GaugeKind::File, Some(p)) => HarmonicGauge::field(read_scalar(p)?, common.tol, common.exclude_boundary),
        (GaugeKind::File, None) => Err(Error::Scenario("--gauge file needs --gauge-file".into())),
    }
}

fn reconstructor(common: &Common, f: &FactorizingFunction) -> Result<Reconstructor> {
    let n = f.domain().res().into_iter().max().unwrap_or(0);
    if n > NEWTON_RES_LIMIT {
        if !common.force {
            return Err(Error::Scenario(format!(
                "grid {n} exceeds {NEWTON_RES_LIMIT} nodes per axis; the Newton potential costs O(N²), rerun with --force"
            )));
        }
        eprintln!("warning: Newton potential on {n}³ nodes, this is slow");
    }
    Ok(Reconstructor::new(curl_inverse(&common.curl_inverse)?, common.tol, common.exclude_boundary))
}

fn run(cli: Cli) -> Result<Outcome> {
    match cli.cmd {
        Command::Verify { names, scenario_file, res, tol_k, base, json, common } => {
            let all = scenarios(&scenario_file)?;
            let selected: Vec<Scenario> = if names.is_empty() {
                all
            } else {
                names
                    .iter()
                    .map(|n| {
                        all.iter()
                            .find(|s| &s.name == n)
                            .cloned()
                            .ok_or_else(|| Error::Unknown { kind: "scenario", name: n.clone() })
                    })
                    .collect::<Result<_>>()?
            };
            let opts = VerifyOptions {
                layer: common.exclude_boundary,
                curl_inverse: common.curl_inverse.clone(),
                force: common.force,
            };
            let base = parse_base(&base)?;
            let mut reports = Vec::new();
            for mut sc in selected {
                if let Some(r) = &res {
                    sc.res = parse_res(r)?;
                }
                if let Some(k) = tol_k {
                    sc.tol_k = k;
                    sc.tol_k_overrides.clear();
                }
                if base.is_some() {
                    sc.base = base;
                }
                let report = verify(&sc, &opts);
                print!("{}", report.to_text());
                reports.push(report);
            }
            if let Some(p) = json {
                let body = if reports.len() == 1 {
                    serde_json::to_string_pretty(&reports[0])
                } else {
                    serde_json::to_string_pretty(&reports)
                }
                .expect("reports serialize");
                std::fs::write(&p, body).map_err(|source| Error::Io { path: p.clone(), source })?;
            }
            if let Some(r) = reports.iter().find(|r| r.usage_error) {
                return Err(Error::Scenario(format!("scenario {} could not be set up", r.scenario)));
            }
            Ok(if reports.iter().all(|r| r.passed()) { Outcome::Pass } else { Outcome::CheckFailed })
        }
        Command::Derive { input, f, out, common } => {
            let f = load_f(&f)?;
            let w: BiquaternionField = RawField::read(&input)?.into_field(&input)?;
            let layer = common.exclude_boundary;
            println!("V residual {:.3e}", v_residual(&w, &f, layer));
            let wd = bers_derivative(&w, &f, common.tol, layer)?;
            wd.write_vfld(&out)?;
            Ok(Outcome::Pass)
        }
        Command::Antiderive { input, f, out, base, gauge: g, common } => {
            let f = load_f(&f)?;
            let w: VectorField = RawField::read(&input)?.into_field(&input)?;
            let r = reconstructor(&common, &f)?;
            let big_w = r.antiderivative(&w, &f, &gauge(&g, &common)?, &path_for(&base, f.domain())?)?;
            println!("V residual {:.3e}", v_residual(&big_w, &f, common.exclude_boundary));
            big_w.write_vfld(&out)?;
            Ok(Outcome::Pass)
        }
        Command::Conjugate { input, f, direction, out, base, gauge: g, common } => {
            let f = load_f(&f)?;
            let r = reconstructor(&common, &f)?;
            let layer = common.exclude_boundary;
            let w = match direction {
                Direction::ScalarToVector => {
                    let w0 = read_scalar(&input)?;
                    let vec = r.conjugate_vector(&w0, &f, &gauge(&g, &common)?)?;
                    vec.write_vfld(&out)?;
                    BiquaternionField::from_parts(&w0, &vec)
                }
                Direction::VectorToScalar => {
                    let vec: VectorField = RawField::read(&input)?.into_field(&input)?;
                    let w0 = r.conjugate_scalar(&vec, &f, &path_for(&base, f.domain())?)?;
                    w0.write_vfld(&out)?;
                    BiquaternionField::from_parts(&w0, &vec)
                }
            };
            println!("V residual {:.3e}", v_residual(&w, &f, layer));
            Ok(Outcome::Pass)
        }
        Command::Generate { scenario: name, scenario_file, res, tol_k, base, out, f_out, common } => {
            let sc = scenarios(&scenario_file)?
                .into_iter()
                .find(|s| s.name == name)
                .ok_or_else(|| Error::Unknown { kind: "scenario", name: name.clone() })?;
            let rho = sc.rho.clone().ok_or_else(|| Error::Scenario(format!("{name} has no `rho`")))?;
            let d = match sc.f.file_domain()? {
                Some(d) => d,
                None => sc.domain.build(res)?,
            };
            let fs = sc.f.sample(&d)?;
            let f = FactorizingFunction::new(fs.clone())?;
            let layer = common.exclude_boundary;
            let path = match parse_base(&base)?.or(sc.base) {
                Some(b) => PotentialPath::new(b),
                None => PotentialPath::at_origin(&d),
            };
            let psi = schrodinger_from_symmetry(&f, &rho, &path, common.tol, layer)?;
            psi.write_vfld(&out)?;
            if let Some(p) = f_out {
                fs.write_vfld(&p)?;
            }
            let residual = schrodinger_residual(&psi, f.q(), layer);
            let bound = tol_k * d.h() * d.h();
            let pass = residual <= bound || residual <= vekua_cli::report::ROUNDOFF_FLOOR;
            println!(
                "{} schrodinger residual {residual:.3e}  bound {bound:.3e}",
                if pass { "PASS" } else { "FAIL" }
            );
            Ok(if pass { Outcome::Pass } else { Outcome::CheckFailed })
        }
        Command::List { scenario_file } => {
            println!("scenarios:");
            for s in scenarios(&scenario_file)? {
                println!("  {:<14} f = {}, domain = {}, checks = {}", s.name, s.f.name(), s.domain.name(), s.checks.join(","));
            }
            println!("checks:");
            for (name, c) in checks().iter() {
                println!("  {name:<22} {}", c.description());
            }
            println!("profiles:");
            for p in Profile::builtin_names() {
                println!("  {p}");
            }
            println!("  file:PATH");
            println!("curl inverses:");
            for (name, c) in curl_inverses().iter() {
                let mark = if name == DEFAULT_CURL_INVERSE { " (default)" } else { "" };
                println!("  {name:<18} {}{mark}", c.description());
            }
            Ok(Outcome::Pass)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(Outcome::Pass) => ExitCode::SUCCESS,
        Ok(Outcome::CheckFailed) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            if is_usage_error(&e) {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}
