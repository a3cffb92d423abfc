//! Second-order finite-difference stencils on x-fastest tensor grids.
//!
//! These work on a bare value slice plus its shape so that the planar
//! (2D) fields reuse exactly the same code with a unit third axis.

use num_complex::Complex64;

fn strides(shape: [usize; 3]) -> [usize; 3] {
    [1, shape[0], shape[0] * shape[1]]
}

/// Visit every grid line parallel to `axis`: calls `f(start, stride, len)`.
fn for_each_line(shape: [usize; 3], axis: usize, mut f: impl FnMut(usize, usize, usize)) {
    let st = strides(shape);
    let (a, b) = match axis {
        0 => (1, 2),
        1 => (0, 2),
        _ => (0, 1),
    };
    for ib in 0..shape[b] {
        for ia in 0..shape[a] {
            f(ia * st[a] + ib * st[b], st[axis], shape[axis]);
        }
    }
}

/// First derivative along `axis`: central differences inside, second-order
/// one-sided differences on the two end nodes of every line.
pub fn first_derivative(
    values: &[Complex64],
    shape: [usize; 3],
    axis: usize,
    h: f64,
) -> Vec<Complex64> {
    debug_assert_eq!(values.len(), shape.iter().product::<usize>());
    debug_assert!(shape[axis] >= 3);
    let mut out = vec![Complex64::new(0.0, 0.0); values.len()];
    let inv2h = 0.5 / h;
    for_each_line(shape, axis, |start, s, n| {
        let at = |i: usize| values[start + i * s];
        out[start] = (at(0) * -3.0 + at(1) * 4.0 - at(2)) * inv2h;
        for i in 1..n - 1 {
            out[start + i * s] = (at(i + 1) - at(i - 1)) * inv2h;
        }
        let l = n - 1;
        out[start + l * s] = (at(l) * 3.0 - at(l - 1) * 4.0 + at(l - 2)) * inv2h;
    });
    out
}

/// Second derivative along `axis`: the compact three-point stencil inside
/// and the second-order four-point one-sided stencil on the end nodes.
pub fn second_derivative(
    values: &[Complex64],
    shape: [usize; 3],
    axis: usize,
    h: f64,
) -> Vec<Complex64> {
    debug_assert!(shape[axis] >= 4);
    let mut out = vec![Complex64::new(0.0, 0.0); values.len()];
    let inv_h2 = 1.0 / (h * h);
    for_each_line(shape, axis, |start, s, n| {
        let at = |i: usize| values[start + i * s];
        out[start] = (at(0) * 2.0 - at(1) * 5.0 + at(2) * 4.0 - at(3)) * inv_h2;
        for i in 1..n - 1 {
            out[start + i * s] = (at(i + 1) - at(i) * 2.0 + at(i - 1)) * inv_h2;
        }
        let l = n - 1;
        out[start + l * s] =
            (at(l) * 2.0 - at(l - 1) * 5.0 + at(l - 2) * 4.0 - at(l - 3)) * inv_h2;
    });
    out
}

/// Signed cumulative trapezoid integral along one grid line, starting at
/// index `from` (where the integral is zero). Returns one value per line node.
pub fn cumulative_trapezoid(line: &[Complex64], from: usize, h: f64) -> Vec<Complex64> {
    let n = line.len();
    let mut out = vec![Complex64::new(0.0, 0.0); n];
    for i in from + 1..n {
        out[i] = out[i - 1] + (line[i] + line[i - 1]) * (0.5 * h);
    }
    for i in (0..from).rev() {
        out[i] = out[i + 1] - (line[i] + line[i + 1]) * (0.5 * h);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn quadratic_is_exact() {
        let n = 7;
        let h = 0.3;
        let vals: Vec<_> = (0..n).map(|i| {
            let x = i as f64 * h;
            c(2.0 * x * x - x + 1.0)
        }).collect();
        let d = first_derivative(&vals, [n, 1, 1], 0, h);
        let dd = second_derivative(&vals, [n, 1, 1], 0, h);
        for i in 0..n {
            let x = i as f64 * h;
            assert!((d[i] - c(4.0 * x - 1.0)).norm() < 1e-12, "d at {i}");
            assert!((dd[i] - c(4.0)).norm() < 1e-11, "dd at {i}");
        }
    }

    #[test]
    fn trapezoid_both_directions() {
        let line: Vec<_> = (0..5).map(|i| c(i as f64)).collect();
        let h = 1.0;
        // integral of x from 2
        let out = cumulative_trapezoid(&line, 2, h);
        for (i, v) in out.iter().enumerate() {
            let x = i as f64;
            assert!((v.re - (x * x - 4.0) / 2.0).abs() < 1e-14);
        }
    }

    #[test]
    fn lines_along_each_axis() {
        let shape = [5, 6, 7];
        let len = 5 * 6 * 7;
        let vals: Vec<_> = (0..len)
            .map(|idx| {
                let i = idx % 5;
                let j = (idx / 5) % 6;
                let k = idx / 30;
                c(i as f64 + 2.0 * j as f64 + 3.0 * k as f64)
            })
            .collect();
        for (axis, slope) in [(0, 1.0), (1, 2.0), (2, 3.0)] {
            let d = first_derivative(&vals, shape, axis, 1.0);
            assert!(d.iter().all(|v| (v.re - slope).abs() < 1e-12));
        }
    }
}
