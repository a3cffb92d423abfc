use vekua::antiderivative::{HarmonicGauge, Reconstructor};
use vekua::grid::{self, interior_rms, relative, BiquaternionField, GridDomain, ScalarField, DEFAULT_LAYER};
use vekua::potential::{curl_inverse, newton_potential, PotentialPath};
use vekua::symmetric::{
    cylindrical_shell_box, parallel_solution, schrodinger_from_symmetry, spherical_shell_box, HarmonicFunctionSpec,
};
use vekua::vekua_ops::{
    bers_derivative, op_v, op_v1bar, schrodinger_operator, schrodinger_residual, v_residual, FactorizingFunction,
    GeneratingQuartet,
};
use vekua::Error;

const L: usize = DEFAULT_LAYER;

fn exp_f(d: &GridDomain) -> FactorizingFunction {
    FactorizingFunction::new(ScalarField::from_real_fn(d, |p| p[0].exp()).unwrap()).unwrap()
}

fn cyl_f(d: &GridDomain) -> FactorizingFunction {
    FactorizingFunction::new(ScalarField::from_real_fn(d, |p| p[0].hypot(p[1])).unwrap()).unwrap()
}

#[test]
fn exponential_f_has_unit_potential() {
    let d = GridDomain::cube(0.0, 1.0, 24).unwrap();
    let f = exp_f(&d);
    let one = ScalarField::constant(&d, 1.0.into());
    assert!(relative(interior_rms(&f.q().sub(&one), L), &[1.0]) < 2.0 * d.h() * d.h());
}

#[test]
fn factorization_converges_at_second_order() {
    let err = |n| {
        let d = GridDomain::cube(0.0, 1.0, n).unwrap();
        let f = exp_f(&d);
        let phi = ScalarField::from_real_fn(&d, |p| (1.3 * p[0]).sin() * (0.7 * p[1]).cos() * (0.5 * p[2]).exp()).unwrap();
        let lhs = op_v1bar(&op_v(&phi.to_biquaternion(), &f), &f);
        let rhs = schrodinger_operator(&phi, f.q()).to_biquaternion();
        relative(interior_rms(&lhs.sub(&rhs), L), &[interior_rms(&rhs, L)])
    };
    let (a, b) = (err(16), err(32));
    assert!((3.5..4.5).contains(&(a / b)), "ratio {}", a / b);
}

#[test]
fn quartet_solves_the_vekua_equation() {
    for n in [16, 32] {
        let d = cylindrical_shell_box(n).unwrap();
        let f = cyl_f(&d);
        let worst = GeneratingQuartet::new(&f).iter().map(|w| v_residual(w, &f, L)).fold(0.0, f64::max);
        assert!(worst <= 2.0 * d.h() * d.h(), "n = {n}: {worst}");
    }
}

#[test]
fn cylindrical_factory_matches_closed_form() {
    // f = r, ρ = log r gives ψ = -1/(2r) + c r
    let d = cylindrical_shell_box(24).unwrap();
    let f = cyl_f(&d);
    let path = PotentialPath::at_origin(&d);
    let psi = schrodinger_from_symmetry(&f, &HarmonicFunctionSpec::LogRCyl, &path, 0.1, L).unwrap();
    let p0 = d.node_coords(0);
    let r0 = p0[0].hypot(p0[1]);
    let c = (psi.at(0).re + 0.5 / r0) / r0;
    let exact = ScalarField::from_real_fn(&d, |p| {
        let r = p[0].hypot(p[1]);
        -0.5 / r + c * r
    })
    .unwrap();
    assert!(relative(interior_rms(&psi.sub(&exact), 0), &[interior_rms(&exact, 0)]) < 1e-2);
    assert!(schrodinger_residual(&psi, f.q(), L) < 2.0 * d.h() * d.h());
}

#[test]
fn spherical_factory_solves_schrodinger() {
    let d = spherical_shell_box(24).unwrap();
    let f = FactorizingFunction::new(
        ScalarField::from_real_fn(&d, |p| 1.0 / (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]).sqrt()).unwrap(),
    )
    .unwrap();
    let psi =
        schrodinger_from_symmetry(&f, &HarmonicFunctionSpec::InvRSph, &PotentialPath::at_origin(&d), 0.1, L).unwrap();
    assert!(schrodinger_residual(&psi, f.q(), L) < 2.0 * d.h() * d.h());
}

#[test]
fn antiderivative_round_trip() {
    let rows: Vec<(f64, f64)> = [12, 16]
        .iter()
        .map(|&n| {
            let d = cylindrical_shell_box(n).unwrap();
            let f = cyl_f(&d);
            let w = parallel_solution(&f, &HarmonicFunctionSpec::LogRCyl, 0.1, L).unwrap().f_sol;
            let r = Reconstructor::with_tolerance(0.1, L);
            let big_w = r.antiderivative(&w, &f, &HarmonicGauge::Zero, &PotentialPath::at_origin(&d)).unwrap();
            let back = bers_derivative(&big_w, &f, 1.0, L).unwrap();
            (v_residual(&big_w, &f, L), relative(interior_rms(&back.sub(&w), L), &[interior_rms(&w, L)]))
        })
        .collect();
    assert!(rows[1].0 < rows[0].0 && rows[1].1 < rows[0].1, "{rows:?}");
    assert!(rows[1].0 < 0.05 && rows[1].1 < 0.05, "{rows:?}");
}

#[test]
fn conjugate_vector_then_scalar_recovers_w0() {
    let d = cylindrical_shell_box(16).unwrap();
    let f = cyl_f(&d);
    let w0 = ScalarField::from_real_fn(&d, |p| -0.5 / p[0].hypot(p[1])).unwrap();
    let r = Reconstructor::with_tolerance(0.1, L);
    let vec = r.conjugate_vector(&w0, &f, &HarmonicGauge::Zero).unwrap();
    let w = BiquaternionField::from_parts(&w0, &vec);
    assert!(v_residual(&w, &f, L) < 0.05);
    // W0 is fixed up to a multiple of f; pin it at the base node
    let path = PotentialPath::at_origin(&d).with_constant(-w0.at(0) / f.f().at(0));
    let back = r.conjugate_scalar(&vec, &f, &path).unwrap();
    assert!(relative(interior_rms(&back.sub(&w0), L), &[interior_rms(&w0, L)]) < 0.05);
}

#[test]
fn schrodinger_precondition_is_enforced() {
    let d = GridDomain::cube(0.0, 1.0, 12).unwrap();
    let f = exp_f(&d);
    let not_a_solution = ScalarField::from_real_fn(&d, |p| p[1] * p[1]).unwrap();
    let r = Reconstructor::with_tolerance(0.1, L);
    assert!(matches!(
        r.conjugate_vector(&not_a_solution, &f, &HarmonicGauge::Zero),
        Err(Error::NotASchrodingerSolution { .. })
    ));
}

#[test]
fn newton_potential_of_a_uniform_ball() {
    // density 1 on |x| < R: N = (3R² - |x|²)/6 inside, R³/(3|x|) outside
    let radius: f64 = 0.3;
    let d = GridDomain::cube(-0.5, 0.5, 21).unwrap();
    let g = ScalarField::from_real_fn(&d, |p| {
        let r2 = p[0] * p[0] + p[1] * p[1] + p[2] * p[2];
        if r2 < radius * radius { 1.0 } else { 0.0 }
    })
    .unwrap();
    let u = newton_potential(&g);
    let centre = d.index(d.center_node());
    let exact = radius * radius / 2.0;
    assert!((u.at(centre).re - exact).abs() < 0.05 * exact, "{} vs {exact}", u.at(centre).re);
    let corner = d.node_coords(0);
    let rc = (corner[0] * corner[0] + corner[1] * corner[1] + corner[2] * corner[2]).sqrt();
    let far = radius.powi(3) / (3.0 * rc);
    assert!((u.at(0).re - far).abs() < 0.05 * far, "{} vs {far}", u.at(0).re);
}

#[test]
fn curl_inverse_strategies_are_registered() {
    for name in ["axis-path", "newton"] {
        assert!(curl_inverse(name).is_ok());
    }
    assert!(matches!(curl_inverse("nope"), Err(Error::Unknown { .. })));
    // the strategies agree on rot of their output for a divergence-free field
    let d = GridDomain::cube(0.0, 1.0, 12).unwrap();
    let q = vekua::grid::VectorField::from_real_fn(&d, |p| [p[1], p[2], p[0]]).unwrap();
    let phi = curl_inverse("axis-path").unwrap().apply(&q);
    assert!(interior_rms(&grid::rot(&phi).sub(&q), L) < 1e-10);
}
