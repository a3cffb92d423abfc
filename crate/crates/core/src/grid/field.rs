//! Complex-valued fields on a [`GridDomain`].
//!
//! A field stores `N` component planes (structure of arrays). `N = 1`, `3`
//! and `4` give scalar, vector and biquaternion fields. Fields are immutable
//! values: every operation returns a new field.

use num_complex::Complex64;

use super::domain::GridDomain;
use crate::biquaternion::Biquaternion;
use crate::error::{Error, Result};

const CZERO: Complex64 = Complex64::new(0.0, 0.0);

#[derive(Clone, Debug, PartialEq)]
pub struct Field<const N: usize> {
    domain: GridDomain,
    comps: [Vec<Complex64>; N],
}

pub type ScalarField = Field<1>;
pub type VectorField = Field<3>;
pub type BiquaternionField = Field<4>;

impl<const N: usize> Field<N> {
    /// Validated constructor: checks lengths and rejects NaN/Inf.
    pub fn from_components(domain: GridDomain, comps: [Vec<Complex64>; N]) -> Result<Self> {
        for (c, plane) in comps.iter().enumerate() {
            if plane.len() != domain.len() {
                return Err(Error::FieldMismatch(format!(
                    "component {c} has {} values, grid has {} nodes",
                    plane.len(),
                    domain.len()
                )));
            }
            if let Some(node) = plane.iter().position(|v| !(v.re.is_finite() && v.im.is_finite())) {
                return Err(Error::NonFinite { node });
            }
        }
        Ok(Field { domain, comps })
    }

    /// Operator outputs: lengths are correct by construction, finiteness unchecked.
    pub(crate) fn from_raw(domain: GridDomain, comps: [Vec<Complex64>; N]) -> Self {
        debug_assert!(comps.iter().all(|p| p.len() == domain.len()));
        Field { domain, comps }
    }

    pub fn zeros(domain: &GridDomain) -> Self {
        Field::from_raw(*domain, std::array::from_fn(|_| vec![CZERO; domain.len()]))
    }

    pub fn domain(&self) -> &GridDomain {
        &self.domain
    }

    pub fn len(&self) -> usize {
        self.domain.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn component(&self, c: usize) -> &[Complex64] {
        &self.comps[c]
    }

    pub fn components(&self) -> &[Vec<Complex64>; N] {
        &self.comps
    }

    pub fn into_components(self) -> [Vec<Complex64>; N] {
        self.comps
    }

    pub fn is_finite(&self) -> bool {
        self.comps
            .iter()
            .all(|p| p.iter().all(|v| v.re.is_finite() && v.im.is_finite()))
    }

    pub fn check_finite(&self) -> Result<()> {
        for plane in &self.comps {
            if let Some(node) = plane.iter().position(|v| !(v.re.is_finite() && v.im.is_finite())) {
                return Err(Error::NonFinite { node });
            }
        }
        Ok(())
    }

    /// Apply `f` to each component plane.
    pub fn map_planes(&self, f: impl Fn(&[Complex64]) -> Vec<Complex64>) -> Self {
        Field::from_raw(self.domain, std::array::from_fn(|c| f(&self.comps[c])))
    }

    /// Apply `f` to every complex value.
    pub fn map_values(&self, f: impl Fn(Complex64) -> Complex64) -> Self {
        self.map_planes(|p| p.iter().map(|&v| f(v)).collect())
    }

    fn zip_planes(&self, other: &Self, f: impl Fn(Complex64, Complex64) -> Complex64) -> Self {
        assert_same_grid(&self.domain, &other.domain);
        Field::from_raw(
            self.domain,
            std::array::from_fn(|c| {
                self.comps[c]
                    .iter()
                    .zip(&other.comps[c])
                    .map(|(&a, &b)| f(a, b))
                    .collect()
            }),
        )
    }

    pub fn add(&self, other: &Self) -> Self {
        self.zip_planes(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.zip_planes(other, |a, b| a - b)
    }

    pub fn scale(&self, s: Complex64) -> Self {
        self.map_values(|v| v * s)
    }

    pub fn scale_real(&self, s: f64) -> Self {
        self.map_values(|v| v * s)
    }

    pub fn neg(&self) -> Self {
        self.map_values(|v| -v)
    }

    /// Node-wise product with a scalar field.
    pub fn mul_scalar(&self, s: &ScalarField) -> Self {
        assert_same_grid(&self.domain, &s.domain);
        let sv = &s.comps[0];
        self.map_planes(|p| p.iter().zip(sv).map(|(&a, &b)| a * b).collect())
    }

    /// Node-wise quotient by a scalar field.
    pub fn div_scalar(&self, s: &ScalarField) -> Self {
        assert_same_grid(&self.domain, &s.domain);
        let sv = &s.comps[0];
        self.map_planes(|p| p.iter().zip(sv).map(|(&a, &b)| a / b).collect())
    }

    /// The same values on a translated grid.
    pub fn translated(&self, shift: [f64; 3]) -> Self {
        Field::from_raw(self.domain.translated(shift), self.comps.clone())
    }

    /// Largest absolute component value.
    pub fn max_abs(&self) -> f64 {
        self.comps
            .iter()
            .flat_map(|p| p.iter().map(|v| v.norm()))
            .fold(0.0, f64::max)
    }
}

pub(crate) fn assert_same_grid(a: &GridDomain, b: &GridDomain) {
    assert!(a.same_grid(b), "fields live on different grids: {a:?} vs {b:?}");
}

impl ScalarField {
    pub fn new(domain: GridDomain, values: Vec<Complex64>) -> Result<Self> {
        Field::from_components(domain, [values])
    }

    /// Sample `f` at every node.
    pub fn from_fn(domain: &GridDomain, f: impl Fn([f64; 3]) -> Complex64) -> Result<Self> {
        let values = (0..domain.len()).map(|i| f(domain.node_coords(i))).collect();
        ScalarField::new(*domain, values)
    }

    /// Sample a real function at every node.
    pub fn from_real_fn(domain: &GridDomain, f: impl Fn([f64; 3]) -> f64) -> Result<Self> {
        ScalarField::from_fn(domain, |p| Complex64::new(f(p), 0.0))
    }

    pub fn constant(domain: &GridDomain, c: Complex64) -> Self {
        Field::from_raw(*domain, [vec![c; domain.len()]])
    }

    /// Unvalidated construction from values computed out of finite fields.
    pub(crate) fn from_raw_values(domain: &GridDomain, values: Vec<Complex64>) -> Self {
        Field::from_raw(*domain, [values])
    }

    pub fn values(&self) -> &[Complex64] {
        &self.comps[0]
    }

    pub fn at(&self, idx: usize) -> Complex64 {
        self.comps[0][idx]
    }

    pub fn mul(&self, other: &ScalarField) -> ScalarField {
        self.mul_scalar(other)
    }

    pub fn recip(&self) -> ScalarField {
        self.map_values(|v| v.inv())
    }

    pub fn to_biquaternion(&self) -> BiquaternionField {
        let z = vec![CZERO; self.len()];
        Field::from_raw(self.domain, [self.comps[0].clone(), z.clone(), z.clone(), z])
    }
}

impl VectorField {
    pub fn from_fn(domain: &GridDomain, f: impl Fn([f64; 3]) -> [Complex64; 3]) -> Result<Self> {
        let vals: Vec<[Complex64; 3]> = (0..domain.len()).map(|i| f(domain.node_coords(i))).collect();
        Field::from_components(
            *domain,
            std::array::from_fn(|c| vals.iter().map(|v| v[c]).collect()),
        )
    }

    pub fn from_real_fn(domain: &GridDomain, f: impl Fn([f64; 3]) -> [f64; 3]) -> Result<Self> {
        VectorField::from_fn(domain, |p| f(p).map(|x| Complex64::new(x, 0.0)))
    }

    pub fn from_scalars(x: &ScalarField, y: &ScalarField, z: &ScalarField) -> Self {
        assert_same_grid(&x.domain, &y.domain);
        assert_same_grid(&x.domain, &z.domain);
        Field::from_raw(
            x.domain,
            [x.comps[0].clone(), y.comps[0].clone(), z.comps[0].clone()],
        )
    }

    pub fn scalar_component(&self, c: usize) -> ScalarField {
        Field::from_raw(self.domain, [self.comps[c].clone()])
    }

    pub fn at(&self, idx: usize) -> [Complex64; 3] {
        [self.comps[0][idx], self.comps[1][idx], self.comps[2][idx]]
    }

    /// Rebuild a vector field from per-node values.
    pub fn from_nodes(domain: &GridDomain, nodes: &[[Complex64; 3]]) -> Self {
        assert_eq!(nodes.len(), domain.len());
        Field::from_raw(
            *domain,
            std::array::from_fn(|c| nodes.iter().map(|v| v[c]).collect()),
        )
    }

    pub fn to_biquaternion(&self) -> BiquaternionField {
        Field::from_raw(
            self.domain,
            [
                vec![CZERO; self.len()],
                self.comps[0].clone(),
                self.comps[1].clone(),
                self.comps[2].clone(),
            ],
        )
    }

    /// Node-wise `<a, b>` (bilinear, no complex conjugation).
    pub fn dot(&self, other: &VectorField) -> ScalarField {
        assert_same_grid(&self.domain, &other.domain);
        let v = (0..self.len())
            .map(|i| {
                let (a, b) = (self.at(i), other.at(i));
                a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
            })
            .collect();
        Field::from_raw(self.domain, [v])
    }

    /// Node-wise cross product.
    pub fn cross(&self, other: &VectorField) -> VectorField {
        assert_same_grid(&self.domain, &other.domain);
        let nodes: Vec<_> = (0..self.len())
            .map(|i| {
                let (a, b) = (self.at(i), other.at(i));
                [
                    a[1] * b[2] - a[2] * b[1],
                    a[2] * b[0] - a[0] * b[2],
                    a[0] * b[1] - a[1] * b[0],
                ]
            })
            .collect();
        VectorField::from_nodes(&self.domain, &nodes)
    }
}

impl BiquaternionField {
    pub fn from_fn(domain: &GridDomain, f: impl Fn([f64; 3]) -> Biquaternion) -> Result<Self> {
        let nodes: Vec<Biquaternion> = (0..domain.len()).map(|i| f(domain.node_coords(i))).collect();
        Field::from_components(
            *domain,
            std::array::from_fn(|c| nodes.iter().map(|q| q.q[c]).collect()),
        )
    }

    /// `W = W0 + W` from a scalar and a vector part.
    pub fn from_parts(scalar: &ScalarField, vector: &VectorField) -> Self {
        assert_same_grid(&scalar.domain, &vector.domain);
        Field::from_raw(
            scalar.domain,
            [
                scalar.comps[0].clone(),
                vector.comps[0].clone(),
                vector.comps[1].clone(),
                vector.comps[2].clone(),
            ],
        )
    }

    pub fn from_nodes(domain: &GridDomain, nodes: &[Biquaternion]) -> Self {
        assert_eq!(nodes.len(), domain.len());
        Field::from_raw(
            *domain,
            std::array::from_fn(|c| nodes.iter().map(|q| q.q[c]).collect()),
        )
    }

    /// A constant biquaternion on every node.
    pub fn constant(domain: &GridDomain, q: Biquaternion) -> Self {
        Field::from_raw(*domain, std::array::from_fn(|c| vec![q.q[c]; domain.len()]))
    }

    pub fn at(&self, idx: usize) -> Biquaternion {
        Biquaternion::new(
            self.comps[0][idx],
            self.comps[1][idx],
            self.comps[2][idx],
            self.comps[3][idx],
        )
    }

    pub fn nodes(&self) -> Vec<Biquaternion> {
        (0..self.len()).map(|i| self.at(i)).collect()
    }

    pub fn sc(&self) -> ScalarField {
        Field::from_raw(self.domain, [self.comps[0].clone()])
    }

    pub fn vec(&self) -> VectorField {
        Field::from_raw(
            self.domain,
            [self.comps[1].clone(), self.comps[2].clone(), self.comps[3].clone()],
        )
    }

    /// Node-wise map through biquaternion arithmetic.
    pub fn map(&self, f: impl Fn(Biquaternion) -> Biquaternion) -> Self {
        let nodes: Vec<_> = (0..self.len()).map(|i| f(self.at(i))).collect();
        BiquaternionField::from_nodes(&self.domain, &nodes)
    }

    pub fn zip_map(
        &self,
        other: &BiquaternionField,
        f: impl Fn(Biquaternion, Biquaternion) -> Biquaternion,
    ) -> Self {
        assert_same_grid(&self.domain, &other.domain);
        let nodes: Vec<_> = (0..self.len()).map(|i| f(self.at(i), other.at(i))).collect();
        BiquaternionField::from_nodes(&self.domain, &nodes)
    }

    /// Node-wise product `self · other`.
    pub fn mul(&self, other: &BiquaternionField) -> Self {
        self.zip_map(other, |p, q| p * q)
    }

    pub fn quat_conj(&self) -> Self {
        Field::from_raw(
            self.domain,
            [
                self.comps[0].clone(),
                self.comps[1].iter().map(|v| -v).collect(),
                self.comps[2].iter().map(|v| -v).collect(),
                self.comps[3].iter().map(|v| -v).collect(),
            ],
        )
    }

    pub fn complex_conj(&self) -> Self {
        self.map_values(|v| v.conj())
    }
}
