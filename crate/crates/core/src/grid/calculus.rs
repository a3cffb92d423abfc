//! Differential operators assembled from the second-order stencils.

use num_complex::Complex64;

use super::field::{assert_same_grid, BiquaternionField, Field, ScalarField, VectorField};
use super::stencil;
use crate::biquaternion::Biquaternion;

/// `∂_axis` applied to every component.
pub fn partial<const N: usize>(field: &Field<N>, axis: usize) -> Field<N> {
    let d = *field.domain();
    let h = d.spacing()[axis];
    field.map_planes(|p| stencil::first_derivative(p, d.res(), axis, h))
}

/// `Σ_k ∂_k²` with the compact three-point second-difference stencil.
pub fn laplacian<const N: usize>(field: &Field<N>) -> Field<N> {
    let d = *field.domain();
    let h = d.spacing();
    field.map_planes(|p| {
        let mut acc = stencil::second_derivative(p, d.res(), 0, h[0]);
        for axis in 1..3 {
            let dd = stencil::second_derivative(p, d.res(), axis, h[axis]);
            for (a, b) in acc.iter_mut().zip(dd) {
                *a += b;
            }
        }
        acc
    })
}

pub fn grad(phi: &ScalarField) -> VectorField {
    let parts = [0, 1, 2].map(|k| partial(phi, k));
    VectorField::from_scalars(&parts[0], &parts[1], &parts[2])
}

pub fn div(q: &VectorField) -> ScalarField {
    let mut acc = partial(&q.scalar_component(0), 0);
    for k in 1..3 {
        acc = acc.add(&partial(&q.scalar_component(k), k));
    }
    acc
}

pub fn rot(q: &VectorField) -> VectorField {
    let d = |c: usize, axis: usize| partial(&q.scalar_component(c), axis);
    let x = d(2, 1).sub(&d(1, 2));
    let y = d(0, 2).sub(&d(2, 0));
    let z = d(1, 0).sub(&d(0, 1));
    VectorField::from_scalars(&x, &y, &z)
}

/// `∂_axis²` with the compact stencil.
pub fn second_partial<const N: usize>(field: &Field<N>, axis: usize) -> Field<N> {
    let d = *field.domain();
    let h = d.spacing()[axis];
    field.map_planes(|p| stencil::second_derivative(p, d.res(), axis, h))
}

/// `rot rot Q = Σ_{j≠i} (∂_i∂_j Q_j - ∂_j² Q_i)`.
///
/// The `∂_i² Q_i` terms cancel exactly, so every pure second derivative
/// uses the compact stencil instead of two composed first differences.
pub fn rot_rot(q: &VectorField) -> VectorField {
    let comps: Vec<ScalarField> = (0..3)
        .map(|i| {
            let mut acc = ScalarField::zeros(q.domain());
            for j in (0..3).filter(|&j| j != i) {
                let mixed = partial(&partial(&q.scalar_component(j), j), i);
                acc = acc.add(&mixed).sub(&second_partial(&q.scalar_component(i), j));
            }
            acc
        })
        .collect();
    VectorField::from_scalars(&comps[0], &comps[1], &comps[2])
}

/// Left Dirac (Moisil–Theodorescu) operator `DQ = Σ_k e_k ∂_k Q`.
pub fn dirac_left(q: &BiquaternionField) -> BiquaternionField {
    let mut acc = BiquaternionField::zeros(q.domain());
    for k in 1..4 {
        let e = Biquaternion::unit(k);
        let dk = partial(q, k - 1);
        acc = acc.zip_map(&dk, |a, b| a + e * b);
    }
    acc
}

/// Right Dirac operator `D_r Q = Σ_k (∂_k Q) e_k`.
pub fn dirac_right(q: &BiquaternionField) -> BiquaternionField {
    let mut acc = BiquaternionField::zeros(q.domain());
    for k in 1..4 {
        let e = Biquaternion::unit(k);
        let dk = partial(q, k - 1);
        acc = acc.zip_map(&dk, |a, b| a + b * e);
    }
    acc
}

/// `-div Q + ∇Q0 + rot Q`: the vector form of `D`.
pub fn dirac_left_decomposed(q: &BiquaternionField) -> BiquaternionField {
    let v = q.vec();
    let s = div(&v).neg();
    let vp = grad(&q.sc()).add(&rot(&v));
    BiquaternionField::from_parts(&s, &vp)
}

/// `-div Q + ∇Q0 - rot Q`: the vector form of `D_r`.
pub fn dirac_right_decomposed(q: &BiquaternionField) -> BiquaternionField {
    let v = q.vec();
    let s = div(&v).neg();
    let vp = grad(&q.sc()).sub(&rot(&v));
    BiquaternionField::from_parts(&s, &vp)
}

/// Node-wise norm of `D[PQ] - D[P]Q - conj(P) D[Q] - 2 Sc(PD)[Q]` where
/// `Sc(PD)[Q] = -Σ_k P_k ∂_k Q`. Vanishes up to stencil error.
pub fn leibniz_residual(p: &BiquaternionField, q: &BiquaternionField) -> ScalarField {
    assert_same_grid(p.domain(), q.domain());
    let lhs = dirac_left(&p.mul(q));
    let dp_q = dirac_left(p).mul(q);
    let pbar_dq = p.quat_conj().mul(&dirac_left(q));
    let dq: Vec<BiquaternionField> = (0..3).map(|k| partial(q, k)).collect();
    let values = (0..p.len())
        .map(|i| {
            let pi = p.at(i);
            let mut sc_pd = Biquaternion::ZERO;
            for k in 0..3 {
                sc_pd -= dq[k].at(i) * pi.q[k + 1];
            }
            let r = lhs.at(i) - dp_q.at(i) - pbar_dq.at(i) - sc_pd * 2.0;
            Complex64::new(r.norm(), 0.0)
        })
        .collect();
    Field::from_raw(*p.domain(), [values])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::GridDomain;

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn linear_fields_exact() {
        let d = GridDomain::cube(0.0, 1.0, 7).unwrap();
        let x1 = ScalarField::from_real_fn(&d, |p| p[0]).unwrap();
        let one = partial(&x1, 0);
        assert!(one.values().iter().all(|v| (v - c(1.0)).norm() < 1e-13));
        let zero = partial(&ScalarField::constant(&d, c(3.0)), 1);
        assert!(zero.max_abs() < 1e-13);
        let pos = VectorField::from_real_fn(&d, |p| p).unwrap();
        assert!(div(&pos).values().iter().all(|v| (v - c(3.0)).norm() < 1e-12));
    }

    #[test]
    fn dirac_of_simple_fields() {
        let d = GridDomain::cube(0.0, 1.0, 6).unwrap();
        let x1 = ScalarField::from_real_fn(&d, |p| p[0]).unwrap().to_biquaternion();
        let dx = dirac_left(&x1);
        for i in 0..d.len() {
            assert!((dx.at(i) - Biquaternion::unit(1)).norm() < 1e-12);
        }
        let k = BiquaternionField::constant(&d, Biquaternion::from_real(1.0, 2.0, 3.0, 4.0));
        assert!(dirac_left(&k).max_abs() < 1e-12);
        // D_r(x2 e1) = e1 e2 = e3
        let w = BiquaternionField::from_fn(&d, |p| Biquaternion::from_real(0.0, p[1], 0.0, 0.0))
            .unwrap();
        let dr = dirac_right(&w);
        for i in 0..d.len() {
            assert!((dr.at(i) - Biquaternion::unit(3)).norm() < 1e-12);
        }
    }

    #[test]
    fn dirac_matches_vector_form() {
        let d = GridDomain::cube(0.0, 1.0, 8).unwrap();
        let q = BiquaternionField::from_fn(&d, |p| {
            Biquaternion::new(
                Complex64::new(p[0].sin(), p[1]),
                c(p[1] * p[2]),
                Complex64::new(p[0] * p[0], -p[2]),
                c((p[0] + p[1]).cos()),
            )
        })
        .unwrap();
        let scale = q.max_abs();
        let l = dirac_left(&q).sub(&dirac_left_decomposed(&q)).max_abs();
        let r = dirac_right(&q).sub(&dirac_right_decomposed(&q)).max_abs();
        assert!(l <= 1e-14 * scale.max(1.0) * 10.0, "left {l}");
        assert!(r <= 1e-14 * scale.max(1.0) * 10.0, "right {r}");
    }

    #[test]
    fn right_dirac_on_scalars_equals_left() {
        let d = GridDomain::cube(0.0, 1.0, 6).unwrap();
        let s = ScalarField::from_real_fn(&d, |p| p[0] * p[1] + p[2].exp())
            .unwrap()
            .to_biquaternion();
        assert!(dirac_left(&s).sub(&dirac_right(&s)).max_abs() < 1e-13);
    }
}
