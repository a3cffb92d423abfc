use proptest::prelude::*;
use vekua::grid::{self, interior_rms, relative, GridDomain, ScalarField, VectorField, DEFAULT_LAYER};

const L: usize = DEFAULT_LAYER;

fn smooth(p: [f64; 3]) -> f64 {
    p[0].sin() * p[1].cos() * p[2].exp()
}

fn grad_error(n: usize) -> f64 {
    let d = GridDomain::cube(0.0, 1.0, n).unwrap();
    let g = grid::grad(&ScalarField::from_real_fn(&d, smooth).unwrap());
    let exact = VectorField::from_real_fn(&d, |p| {
        let (s, c, e) = (p[0].sin(), p[1].cos(), p[2].exp());
        [p[0].cos() * c * e, -s * p[1].sin() * e, s * c * e]
    })
    .unwrap();
    relative(interior_rms(&g.sub(&exact), L), &[interior_rms(&exact, L)])
}

#[test]
fn gradient_is_second_order() {
    let (a, b) = (grad_error(16), grad_error(32));
    assert!((3.5..4.5).contains(&(a / b)), "ratio {}", a / b);
}

#[test]
fn laplacian_is_second_order() {
    let err = |n| {
        let d = GridDomain::cube(0.0, 1.0, n).unwrap();
        let u = ScalarField::from_real_fn(&d, smooth).unwrap();
        // Δ(sin x cos y e^z) = -u
        relative(interior_rms(&grid::laplacian(&u).add(&u), L), &[interior_rms(&u, L)])
    };
    let (a, b) = (err(16), err(32));
    assert!((3.5..4.5).contains(&(a / b)), "ratio {}", a / b);
}

#[test]
fn discrete_rot_grad_and_div_rot_vanish() {
    let d = GridDomain::from_bounds([0.0, -1.0, 0.5], [1.0, 1.0, 1.5], 13).unwrap();
    let u = ScalarField::from_real_fn(&d, |p| smooth(p) + p[0] * p[1] * p[2]).unwrap();
    let g = grid::grad(&u);
    // central differences commute, so only the boundary-adjacent rows differ
    assert!(interior_rms(&grid::rot(&g), L) <= 1e-10 * interior_rms(&g, L));
    let q = VectorField::from_real_fn(&d, |p| [p[1].sin(), p[2] * p[0], (p[0] + p[1]).cos()]).unwrap();
    let r = grid::rot(&q);
    assert!(interior_rms(&grid::div(&r), L) <= 1e-10 * interior_rms(&r, L));
}

#[test]
fn rot_rot_matches_grad_div_minus_laplacian() {
    let err = |n| {
        let d = GridDomain::cube(0.0, 1.0, n).unwrap();
        let q = VectorField::from_real_fn(&d, |p| [p[1].sin() * p[2], (p[0] * p[2]).cos(), p[0] * p[1].exp()]).unwrap();
        let compact = grid::rot_rot(&q);
        let composed = grid::rot(&grid::rot(&q));
        relative(interior_rms(&compact.sub(&composed), L), &[interior_rms(&compact, L)])
    };
    // both approximate the same operator, so their gap shrinks at second order
    let (a, b) = (err(16), err(32));
    assert!((3.5..4.5).contains(&(a / b)), "ratio {}", a / b);
}

#[test]
fn dirac_squared_is_minus_laplacian() {
    let err = |n| {
        let d = GridDomain::cube(0.0, 1.0, n).unwrap();
        let phi = ScalarField::from_real_fn(&d, smooth).unwrap().to_biquaternion();
        let dd = grid::dirac_left(&grid::dirac_left(&phi));
        let lap = grid::laplacian(&phi);
        relative(interior_rms(&dd.add(&lap), L), &[interior_rms(&lap, L)])
    };
    let (a, b) = (err(16), err(32));
    assert!((3.5..4.5).contains(&(a / b)), "ratio {}", a / b);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn quadratics_are_differentiated_exactly(k in proptest::array::uniform10(-2.0f64..2.0)) {
        let d = GridDomain::cube(-1.0, 1.0, 7).unwrap();
        let u = ScalarField::from_real_fn(&d, |p| {
            k[0] + k[1] * p[0] + k[2] * p[1] + k[3] * p[2]
                + k[4] * p[0] * p[0] + k[5] * p[1] * p[1] + k[6] * p[2] * p[2]
                + k[7] * p[0] * p[1] + k[8] * p[1] * p[2] + k[9] * p[0] * p[2]
        }).unwrap();
        let lap = grid::laplacian(&u);
        let expect = 2.0 * (k[4] + k[5] + k[6]);
        for i in 0..d.len() {
            prop_assert!((lap.at(i).re - expect).abs() < 1e-9);
        }
        let g = grid::grad(&u);
        for i in 0..d.len() {
            let p = d.node_coords(i);
            let gx = k[1] + 2.0 * k[4] * p[0] + k[7] * p[1] + k[9] * p[2];
            prop_assert!((g.at(i)[0].re - gx).abs() < 1e-9);
        }
    }

    #[test]
    fn dirac_obeys_the_product_rule_on_scalars(a in -1.0f64..1.0, b in -1.0f64..1.0) {
        // D(u v) = (Du) v + u (Dv) for scalars, exact for linear u, v
        let d = GridDomain::cube(0.0, 1.0, 6).unwrap();
        let u = ScalarField::from_real_fn(&d, |p| 1.0 + a * p[0] + b * p[2]).unwrap();
        let v = ScalarField::from_real_fn(&d, |p| b - a * p[1]).unwrap();
        let lhs = grid::dirac_left(&u.mul(&v).to_biquaternion());
        let rhs = grid::dirac_left(&u.to_biquaternion())
            .mul(&v.to_biquaternion())
            .add(&u.to_biquaternion().mul(&grid::dirac_left(&v.to_biquaternion())));
        prop_assert!(interior_rms(&lhs.sub(&rhs), 1) < 1e-12);
    }
}
