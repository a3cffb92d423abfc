//! Acceptance suite: one line per criterion, exit status 1 if any fails.
//!
//! Runs without the libtest harness so the lines are printed by
//! `cargo test` as well as by `cargo test --test acceptance`.

use std::path::Path;
use std::process::Command;
use std::time::Instant;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use vekua::antiderivative::{div_relative, HarmonicGauge, Reconstructor};
use vekua::grid::{self, interior_rms, relative, BiquaternionField, GridDomain, ScalarField, VectorField};
use vekua::potential::{curl_inverse, newton_potential_b, rot_relative, PotentialPath};
use vekua::symmetric::{
    cylindrical_shell_box, cylindrical_triplet, d_plus_m_residual, parallel_solution, schrodinger_from_symmetry,
    spherical_shell_box, triplet_vekua_residual, HarmonicFunctionSpec,
};
use vekua::vekua2d::{self, ComplexField2D, PlaneDomain, PlaneFactorizer, PlanePath, Staircase};
use vekua::vekua_ops::{
    bers_derivative, derivative_scalar_part, op_v, op_v1bar, schrodinger_operator, schrodinger_residual,
    v1_residual, v1bar_residual, v_residual, vbar_residual, FactorizingFunction, GeneratingQuartet,
};
use vekua::Biquaternion;

const LAYER: usize = 2;

// criterion 1
const ALGEBRA_SAMPLES: usize = 10_000;
const ALGEBRA_TOL: f64 = 1e-12;
const ALGEBRA_SECONDS: f64 = 1.0;
// criteria 2, 3: refinement ratio window for halving h
const RATIO_LO: f64 = 3.5;
const RATIO_HI: f64 = 4.5;
const D2_SECONDS: f64 = 5.0;
// K in K h² for stencil-limited residuals (largest observed constant is about 1)
const K_STENCIL: f64 = 2.0;
// criterion 5
const PIPELINE_N: usize = 24;
const PIPELINE_BOUND: f64 = 1e-2;
const SCALAR_PART_BOUND: f64 = 1e-10;
const PIPELINE_SECONDS: f64 = 120.0;
// criteria 6, 7
const QUADRATURE_RELATIVE: f64 = 0.05;
// criterion 8
const FACTORY_SECONDS: f64 = 10.0;
// criterion 9
const MIN_DET: f64 = 1e-2;
// criterion 10
const CONJ_N: usize = 64;
const CONJ_TOL: f64 = 1e-10;
// V₁Ẇ chains three derivatives through the conjugate, so layer-2 nodes still
// see the one-sided boundary stencils; one layer per chained derivative
const COMPOSITE_LAYER: usize = 4;
// criterion 11
const SUITE_SECONDS: f64 = 300.0;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn c(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

fn in_window(r: f64) -> bool {
    (RATIO_LO..=RATIO_HI).contains(&r)
}

fn random_bq(rng: &mut ChaCha8Rng) -> Biquaternion {
    let mut z = || Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
    Biquaternion::new(z(), z(), z(), z())
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let mut exact = true;
    for j in 1..4 {
        for k in 1..4 {
            let (ej, ek) = (Biquaternion::unit(j), Biquaternion::unit(k));
            let expect = if j == k { Biquaternion::from_real(-2.0, 0.0, 0.0, 0.0) } else { Biquaternion::ZERO };
            exact &= ej * ek + ek * ej == expect;
        }
    }
    exact &= Biquaternion::unit(1) * Biquaternion::unit(2) == Biquaternion::unit(3);
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut worst = 0.0f64;
    for _ in 0..ALGEBRA_SAMPLES {
        let (a, b, d) = (random_bq(&mut rng), random_bq(&mut rng), random_bq(&mut rng));
        let scale = a.norm() * b.norm() * d.norm();
        worst = worst.max(((a * b) * d - a * (b * d)).norm() / scale);
        let sab = a.norm() * b.norm();
        worst = worst.max(((a * b).quat_conj() - b.quat_conj() * a.quat_conj()).norm() / sab);
        worst = worst.max(((a * b).sc() - (b * a).sc()).norm() / sab);
    }
    let t = start.elapsed().as_secs_f64();
    outcome(
        exact && worst <= ALGEBRA_TOL && t < ALGEBRA_SECONDS,
        format!("units exact {exact}, worst relative {worst:.2e} (≤ {ALGEBRA_TOL:e}), {t:.3} s"),
    )
}

fn d_squared_residual(n: usize) -> f64 {
    let d = GridDomain::cube(0.0, 1.0, n).unwrap();
    let phi = ScalarField::from_real_fn(&d, |p| p[0].sin() * p[1].cos() * p[2].exp()).unwrap().to_biquaternion();
    let dd = grid::dirac_left(&grid::dirac_left(&phi));
    let lap = grid::laplacian(&phi);
    relative(interior_rms(&dd.add(&lap), LAYER), &[interior_rms(&lap, LAYER)])
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    let (r16, r32) = (d_squared_residual(16), d_squared_residual(32));
    let ratio = r16 / r32;
    let t = start.elapsed().as_secs_f64();
    outcome(
        in_window(ratio) && t < D2_SECONDS,
        format!("residual {r16:.3e} → {r32:.3e}, ratio {ratio:.2} in [{RATIO_LO}, {RATIO_HI}], {t:.2} s"),
    )
}

fn factorization_3d(n: usize) -> (f64, f64) {
    let d = GridDomain::cube(0.0, 1.0, n).unwrap();
    let f = FactorizingFunction::new(ScalarField::from_real_fn(&d, |p| p[0].exp()).unwrap()).unwrap();
    let phi =
        ScalarField::from_real_fn(&d, |p| (1.3 * p[0]).sin() * (0.7 * p[1]).cos() * (0.5 * p[2]).exp()).unwrap();
    let lhs = op_v1bar(&op_v(&phi.to_biquaternion(), &f), &f);
    let rhs = schrodinger_operator(&phi, f.q()).to_biquaternion();
    (relative(interior_rms(&lhs.sub(&rhs), LAYER), &[interior_rms(&rhs, LAYER)]), d.h())
}

fn factorization_2d(n: usize) -> (f64, f64) {
    let d = PlaneDomain::square(0.0, 1.0, n).unwrap();
    let f = PlaneFactorizer::new(ComplexField2D::from_real_fn(&d, |p| p[0].exp()).unwrap(), 1e-10).unwrap();
    let phi = ComplexField2D::from_real_fn(&d, |p| (1.3 * p[0]).sin() * (0.7 * p[1]).cos()).unwrap();
    let (a, b) = vekua2d::factorization_residuals(&phi, &f, LAYER);
    (a.max(b), d.h())
}

fn criterion_3() -> Outcome {
    let ((a, _), (b, h)) = (factorization_3d(16), factorization_3d(32));
    let ((a2, _), (b2, h2)) = (factorization_2d(33), factorization_2d(65));
    let (r3, r2) = (a / b, a2 / b2);
    let pass = in_window(r3) && in_window(r2) && b <= K_STENCIL * h * h && b2 <= K_STENCIL * h2 * h2;
    outcome(
        pass,
        format!(
            "3D {a:.3e} → {b:.3e} (ratio {r3:.2}, bound {:.2e}); 2D {a2:.3e} → {b2:.3e} (ratio {r2:.2}, bound {:.2e})",
            K_STENCIL * h * h,
            K_STENCIL * h2 * h2
        ),
    )
}

fn quartet_worst(f: &FactorizingFunction) -> f64 {
    GeneratingQuartet::new(f)
        .iter()
        .map(|fa| v_residual(fa, f, LAYER).max(vbar_residual(fa, f, LAYER)))
        .fold(0.0, f64::max)
}

fn criterion_4() -> Outcome {
    let mut pass = true;
    let mut parts = Vec::new();
    for (label, n) in [("e^x1", 16usize), ("e^x1", 32), ("r", 16), ("r", 32)] {
        let (d, fv) = if label == "r" {
            let d = cylindrical_shell_box(n).unwrap();
            (d, ScalarField::from_real_fn(&d, |p| p[0].hypot(p[1])).unwrap())
        } else {
            let d = GridDomain::cube(0.0, 1.0, n).unwrap();
            (d, ScalarField::from_real_fn(&d, |p| p[0].exp()).unwrap())
        };
        let worst = quartet_worst(&FactorizingFunction::new(fv).unwrap());
        let bound = K_STENCIL * d.h() * d.h();
        pass &= worst <= bound;
        parts.push(format!("{label}@{n} {worst:.2e}≤{bound:.1e}"));
    }
    outcome(pass, parts.join(", "))
}

fn cyl_f(d: &GridDomain) -> FactorizingFunction {
    FactorizingFunction::new(ScalarField::from_real_fn(d, |p| p[0].hypot(p[1])).unwrap()).unwrap()
}

struct Pipeline {
    a: f64,
    b: f64,
    c: f64,
    d: f64,
    e: f64,
}

fn pipeline(n: usize, curl: &str) -> Pipeline {
    let d = cylindrical_shell_box(n).unwrap();
    let f = cyl_f(&d);
    let w0 = ScalarField::from_real_fn(&d, |p| -0.5 / p[0].hypot(p[1])).unwrap();
    let r = Reconstructor::new(curl_inverse(curl).unwrap(), 0.1, LAYER);
    let vec = r.conjugate_vector(&w0, &f, &HarmonicGauge::Zero).unwrap();
    let w = BiquaternionField::from_parts(&w0, &vec);
    let a = v_residual(&w, &f, LAYER);
    let b = derivative_scalar_part(&w, &f, LAYER);
    let wd = grid::dirac_right(&w).sub(&f.conj_times_g(&w)).vec();
    let wdq = wd.to_biquaternion();
    Pipeline {
        a,
        b,
        c: v1_residual(&wdq, &f, LAYER).max(v1bar_residual(&wdq, &f, LAYER)),
        d: div_relative(&wd.mul_scalar(f.f()), LAYER),
        e: rot_relative(&wd.div_scalar(f.f()), LAYER),
    }
}

fn criterion_5() -> Outcome {
    let start = Instant::now();
    let p = pipeline(PIPELINE_N, "axis-path");
    let t = start.elapsed().as_secs_f64();
    let newton = pipeline(PIPELINE_N, "newton").a;
    let pass = p.a <= PIPELINE_BOUND
        && p.b <= SCALAR_PART_BOUND
        && p.c <= PIPELINE_BOUND
        && p.d <= PIPELINE_BOUND
        && p.e <= PIPELINE_BOUND
        && t < PIPELINE_SECONDS;
    outcome(
        pass,
        format!(
            "{PIPELINE_N}³: (a) {:.2e} (b) {:.1e} (c) {:.2e} (d) {:.2e} (e) {:.2e}, bound {PIPELINE_BOUND:e}, {t:.1} s; newton (a) {newton:.2e}",
            p.a, p.b, p.c, p.d, p.e
        ),
    )
}

fn antiderivative_study(n: usize, curl: &str) -> (f64, f64) {
    let d = cylindrical_shell_box(n).unwrap();
    let f = cyl_f(&d);
    let w = parallel_solution(&f, &HarmonicFunctionSpec::LogRCyl, 0.1, LAYER).unwrap().f_sol;
    let r = Reconstructor::new(curl_inverse(curl).unwrap(), 0.1, LAYER);
    let big_w = r.antiderivative(&w, &f, &HarmonicGauge::Zero, &PotentialPath::at_origin(&d)).unwrap();
    let vres = v_residual(&big_w, &f, LAYER);
    let back = bers_derivative(&big_w, &f, 1.0, LAYER).unwrap();
    let trip = relative(interior_rms(&back.sub(&w), LAYER), &[interior_rms(&w, LAYER)]);
    (vres, trip)
}

fn criterion_6() -> Outcome {
    let levels = [12usize, 16, 24];
    let rows: Vec<(f64, f64)> = levels.iter().map(|&n| antiderivative_study(n, "axis-path")).collect();
    let monotone = rows.windows(2).all(|w| w[1].0 < w[0].0 && w[1].1 < w[0].1);
    let last = rows[rows.len() - 1];
    let newton = antiderivative_study(24, "newton");
    let table: Vec<String> =
        levels.iter().zip(&rows).map(|(n, (v, t))| format!("{n}: {v:.2e}/{t:.2e}")).collect();
    outcome(
        monotone && last.0 <= QUADRATURE_RELATIVE && last.1 <= QUADRATURE_RELATIVE,
        format!(
            "V-res/round trip {}; monotone {monotone}; newton at 24: {:.2e}/{:.2e}",
            table.join(", "),
            newton.0,
            newton.1
        ),
    )
}

fn criterion_7() -> Outcome {
    let d = GridDomain::cube(0.0, 1.0, 24).unwrap();
    let radius2: f64 = 0.35 * 0.35;
    // Q = rot(b e3) for a C³ bump b, divergence free and supported inside
    let grad_b = |p: [f64; 3]| -> [f64; 3] {
        let x = [p[0] - 0.5, p[1] - 0.5, p[2] - 0.5];
        let s = (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]) / radius2;
        if s >= 1.0 {
            return [0.0; 3];
        }
        let g = -8.0 * (1.0 - s).powi(3) / radius2;
        [g * x[0], g * x[1], g * x[2]]
    };
    let q = VectorField::from_real_fn(&d, |p| {
        let g = grad_b(p);
        [g[1], -g[0], 0.0]
    })
    .unwrap();
    let rr = grid::rot_rot(&newton_potential_b(&q));
    let err = relative(interior_rms(&rr.sub(&q), LAYER), &[interior_rms(&q, LAYER)]);
    outcome(err <= QUADRATURE_RELATIVE, format!("24³ relative error {err:.2e} (≤ {QUADRATURE_RELATIVE})"))
}

/// Max relative misfit of `ψ` against `a u + c v` with `c` fitted at two nodes.
fn two_point_fit(psi: &ScalarField, u: impl Fn([f64; 3]) -> f64, v: impl Fn([f64; 3]) -> f64) -> f64 {
    let d = *psi.domain();
    let (i, j) = (0, d.len() - 1);
    let (pi, pj) = (d.node_coords(i), d.node_coords(j));
    let ci = (psi.at(i).re - u(pi)) / v(pi);
    let cj = (psi.at(j).re - u(pj)) / v(pj);
    let cfit = 0.5 * (ci + cj);
    let mut num = 0.0f64;
    let mut den = 0.0f64;
    for k in 0..d.len() {
        let p = d.node_coords(k);
        let exact = u(p) + cfit * v(p);
        num = num.max((psi.at(k) - exact).norm());
        den = den.max(exact.abs());
    }
    num / den
}

fn criterion_8() -> Outcome {
    let start = Instant::now();
    let mut pass = true;
    let mut parts = Vec::new();
    for n in [16usize, 32] {
        let d = cylindrical_shell_box(n).unwrap();
        let f = cyl_f(&d);
        let psi =
            schrodinger_from_symmetry(&f, &HarmonicFunctionSpec::LogRCyl, &PotentialPath::at_origin(&d), 0.1, LAYER)
                .unwrap();
        let fit = two_point_fit(&psi, |p| -0.5 / p[0].hypot(p[1]), |p| p[0].hypot(p[1]));
        let res = schrodinger_residual(&psi, f.q(), LAYER);
        let bound = K_STENCIL * d.h() * d.h();
        pass &= fit <= bound && res <= bound;
        parts.push(format!("cyl@{n} fit {fit:.2e} res {res:.2e} ≤ {bound:.1e}"));

        let d = spherical_shell_box(n).unwrap();
        let inv_r = |p: [f64; 3]| 1.0 / (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]).sqrt();
        let f = FactorizingFunction::new(ScalarField::from_real_fn(&d, inv_r).unwrap()).unwrap();
        let psi =
            schrodinger_from_symmetry(&f, &HarmonicFunctionSpec::InvRSph, &PotentialPath::at_origin(&d), 0.1, LAYER)
                .unwrap();
        let fit = two_point_fit(&psi, |_| -1.0, inv_r);
        let res = schrodinger_residual(&psi, f.q(), LAYER);
        pass &= fit <= bound && res <= bound;
        parts.push(format!("sph@{n} fit {fit:.2e} res {res:.2e}"));
    }
    let t = start.elapsed().as_secs_f64();
    pass &= t < FACTORY_SECONDS;
    parts.push(format!("{t:.2} s"));
    outcome(pass, parts.join(", "))
}

fn criterion_9() -> Outcome {
    let n = 24;
    let d = cylindrical_shell_box(n).unwrap();
    let f = cyl_f(&d);
    let t = cylindrical_triplet(&f, 0.1, LAYER).unwrap();
    let bound = K_STENCIL * d.h() * d.h();
    let worst = t.iter().map(|fk| d_plus_m_residual(fk, &f, LAYER)).fold(0.0, f64::max);
    let det = t.min_abs_determinant();
    // random smooth coefficients
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let phi: [ScalarField; 3] = std::array::from_fn(|_| {
        let k: [f64; 4] = std::array::from_fn(|_| rng.gen_range(-1.0..1.0));
        ScalarField::from_real_fn(&d, |p| k[0] * (k[1] * p[0] + k[2] * p[1]).sin() + k[3] * p[2] * p[0]).unwrap()
    });
    let w = t.recompose(&phi);
    let direct = op_v1bar(&w.to_biquaternion(), &f);
    let mut via = BiquaternionField::zeros(&d);
    for (p, fk) in phi.iter().zip(t.iter()) {
        via = via.add(&grid::grad(p).to_biquaternion().mul(&fk.to_biquaternion()));
    }
    let gap = relative(interior_rms(&direct.sub(&via), LAYER), &[interior_rms(&via, LAYER)]);
    let tres = triplet_vekua_residual(&phi, &t, LAYER);
    outcome(
        worst <= bound && det >= MIN_DET && gap <= bound,
        format!(
            "(D+M)F_k {worst:.2e} ≤ {bound:.1e}, min|det| {det:.3} ≥ {MIN_DET}, direct vs triplet gap {gap:.2e} (triplet residual {tres:.2e})"
        ),
    )
}

fn criterion_10() -> Outcome {
    let mut parts = Vec::new();
    // conjugate harmonic with f = 1
    let d = PlaneDomain::square(-1.0, 1.0, CONJ_N).unwrap();
    let one = PlaneFactorizer::new(ComplexField2D::constant(&d, c(1.0)), 1e-10).unwrap();
    let w1 = ComplexField2D::from_real_fn(&d, |p| p[0] * p[0] - p[1] * p[1]).unwrap();
    let base = d.node_coords(0);
    let w2 = vekua2d::conjugate_2d(&w1, &one, &PlanePath::new(base), 1e-8, LAYER).unwrap();
    let konst = w2.at(0).re - 2.0 * base[0] * base[1];
    let harm = (0..d.len())
        .map(|i| {
            let p = d.node_coords(i);
            (w2.at(i).re - 2.0 * p[0] * p[1] - konst).abs()
        })
        .fold(0.0, f64::max);
    let mut pass = harm <= CONJ_TOL;
    parts.push(format!("2xy misfit {harm:.1e}"));

    // f = e^x with W1 = e^{0.6x + 0.8y}
    let mut prev: Option<[f64; 3]> = None;
    for n in [33usize, 65] {
        let d = PlaneDomain::square(0.0, 1.0, n).unwrap();
        let f = PlaneFactorizer::new(ComplexField2D::from_real_fn(&d, |p| p[0].exp()).unwrap(), 1e-10).unwrap();
        let w1 = ComplexField2D::from_real_fn(&d, |p| (0.6 * p[0] + 0.8 * p[1]).exp()).unwrap();
        let path = PlanePath::at_origin(&d);
        let w2 = vekua2d::conjugate_2d(&w1, &f, &path, 1e-2, LAYER).unwrap();
        let w = &w1 + &w2.scale(Complex64::new(0.0, 1.0));
        let main = vekua2d::main_vekua_residual(&w, &f, LAYER);
        let wd = vekua2d::bers_derivative_2d(&w, &f, 1e-2, LAYER).unwrap();
        let v1 = vekua2d::v1_residual(&wd, &f, COMPOSITE_LAYER);
        let v1_edge = vekua2d::v1_residual(&wd, &f, LAYER);
        let pair = f.generating_pair().unwrap();
        let a = pair.fg_integral(&wd, d.origin(), Staircase::XThenY).unwrap();
        let b = pair.fg_integral(&wd, d.origin(), Staircase::YThenX).unwrap();
        let path_gap = (&a - &b).interior_rms(LAYER) / w.interior_rms(LAYER);
        let bound = K_STENCIL * d.h() * d.h();
        pass &= main <= bound && v1 <= bound && path_gap <= bound;
        if let Some(p) = prev {
            pass &= in_window(p[0] / main) && in_window(p[1] / v1);
        }
        prev = Some([main, v1, path_gap]);
        parts.push(format!(
            "e^x@{n} main {main:.2e} V1 {v1:.2e} (layer {LAYER}: {v1_edge:.2e}) paths {path_gap:.2e} ≤ {bound:.1e}"
        ));
    }
    outcome(pass, parts.join(", "))
}

fn criterion_11(suite_start: Instant) -> Outcome {
    let exe = env!("CARGO_BIN_EXE_vekua");
    let root = Path::new(env!("CARGO_MANIFEST_DIR"));
    let status = |args: &[&str]| Command::new(exe).args(args).output().expect("binary runs").status.code();
    let verify = status(&["verify"]);
    let tmp = tempfile::tempdir().unwrap();
    let bad = tmp.path().join("bad.vfld");
    std::fs::write(&bad, "vfld 1\nrank biquat\norigin 0 0 0\nextent 1 1 1\nres 5 5 5\n1 2 3\n").unwrap();
    let bad = bad.to_str().unwrap();
    let corrupted = status(&["derive", bad, "--f", bad, "-o", "/dev/null"]);
    let injected_file = root.join("scenarios/injected/vanishing-f.scn");
    let injected = status(&["verify", "vanishing-f", "--scenario-file", injected_file.to_str().unwrap()]);
    let t = suite_start.elapsed().as_secs_f64();
    outcome(
        verify == Some(0) && corrupted == Some(2) && injected == Some(1) && t < SUITE_SECONDS,
        format!("verify {verify:?}, corrupted VFLD {corrupted:?}, vanishing f {injected:?}; suite {t:.1} s"),
    )
}

fn main() {
    // libtest flags such as --list or filters arrive here too
    if std::env::args().any(|a| a == "--list") {
        return;
    }
    let start = Instant::now();
    let criteria: Vec<(&str, Box<dyn Fn() -> Outcome>)> = vec![
        ("algebra", Box::new(criterion_1)),
        ("D² = -Δ", Box::new(criterion_2)),
        ("factorization", Box::new(criterion_3)),
        ("quartet annihilation", Box::new(criterion_4)),
        ("derivative pipeline", Box::new(criterion_5)),
        ("antiderivative", Box::new(criterion_6)),
        ("Newton right inverse", Box::new(criterion_7)),
        ("solution factory", Box::new(criterion_8)),
        ("cylindrical triplet", Box::new(criterion_9)),
        ("2D cross-check", Box::new(criterion_10)),
        ("CLI contract", Box::new(move || criterion_11(start))),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let o = run();
        if !o.pass {
            failed += 1;
        }
        println!("criterion {:>2} {:<22} {}  {}", i + 1, name, if o.pass { "PASS" } else { "FAIL" }, o.detail);
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
