//! Uniform periodic grids on `[-L, L)` and their differentiation matrices.

use faer::Mat;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
#[derive(Default)]
pub enum Scheme {
    /// Trigonometric interpolation; exact for band-limited functions.
    #[default]
    FourierPeriodic,
    /// Second-order central differences. The Wilson parameter `r` is only
    /// used by the Dirac assembly, where it adds `−(r·h/2)·D₂·β` to the
    /// kinetic term to lift the doubler at the edge of the Brillouin zone.
    Fd2Wilson { r: f64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Grid1D {
    pub half_width: f64,
    pub n_points: usize,
    #[serde(default)]
    pub scheme: Scheme,
}

impl Grid1D {
    pub fn new(half_width: f64, n_points: usize, scheme: Scheme) -> Result<Self> {
        if !(half_width.is_finite() && half_width > 0.0) {
            return Err(Error::InvalidGrid(format!("half-width L = {half_width} must be positive")));
        }
        if n_points < 4 || !n_points.is_multiple_of(2) {
            return Err(Error::InvalidGrid(format!("N = {n_points} must be even and ≥ 4")));
        }
        if let Scheme::Fd2Wilson { r } = scheme {
            if !(r.is_finite() && r >= 0.0) {
                return Err(Error::InvalidGrid(format!("Wilson parameter r = {r} must be ≥ 0")));
            }
        }
        Ok(Self { half_width, n_points, scheme })
    }

    pub fn fourier(half_width: f64, n_points: usize) -> Result<Self> {
        Self::new(half_width, n_points, Scheme::FourierPeriodic)
    }

    /// Half-width of `e_folds` decay lengths, never below `min_half_width`.
    pub fn half_width_for(decay_rate: f64, e_folds: f64, min_half_width: f64) -> f64 {
        (e_folds / decay_rate).max(min_half_width)
    }

    pub fn spacing(&self) -> f64 {
        2.0 * self.half_width / self.n_points as f64
    }

    pub fn len(&self) -> usize {
        self.n_points
    }

    pub fn is_empty(&self) -> bool {
        self.n_points == 0
    }

    pub fn node(&self, j: usize) -> f64 {
        -self.half_width + j as f64 * self.spacing()
    }

    pub fn nodes(&self) -> Vec<f64> {
        (0..self.n_points).map(|j| self.node(j)).collect()
    }

    /// Index of the node at `−x_j` under the periodic identification.
    pub fn reflect(&self, j: usize) -> usize {
        (self.n_points - j) % self.n_points
    }

    /// Uniform quadrature weight; the trapezoid rule on a periodic grid.
    pub fn weight(&self) -> f64 {
        self.spacing()
    }

    pub fn integrate(&self, f: &[f64]) -> f64 {
        self.spacing() * f.iter().sum::<f64>()
    }

    pub fn first_derivative_matrix(&self) -> Mat<f64> {
        let n = self.n_points;
        match self.scheme {
            Scheme::FourierPeriodic => {
                let scale = std::f64::consts::PI / self.half_width;
                let half_step = std::f64::consts::PI / n as f64;
                let column: Vec<f64> = (0..n)
                    .map(|k| {
                        if k == 0 || 2 * k == n {
                            0.0
                        } else if 2 * k > n {
                            f64::NAN
                        } else {
                            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
                            0.5 * sign * scale / (k as f64 * half_step).tan()
                        }
                    })
                    .collect();
                // fill the upper half from the lower one so D₁ᵀ = −D₁ bitwise
                let column: Vec<f64> = (0..n).map(|k| if 2 * k > n { -column[n - k] } else { column[k] }).collect();
                Mat::from_fn(n, n, |i, j| column[(i + n - j) % n])
            }
            Scheme::Fd2Wilson { .. } => {
                let c = 0.5 / self.spacing();
                Mat::from_fn(n, n, |i, j| {
                    if j == (i + 1) % n {
                        c
                    } else if j == (i + n - 1) % n {
                        -c
                    } else {
                        0.0
                    }
                })
            }
        }
    }

    pub fn second_derivative_matrix(&self) -> Mat<f64> {
        let n = self.n_points;
        match self.scheme {
            Scheme::FourierPeriodic => {
                let scale = (std::f64::consts::PI / self.half_width).powi(2);
                let step = 2.0 * std::f64::consts::PI / n as f64;
                let column: Vec<f64> = (0..n)
                    .map(|k| {
                        if k == 0 {
                            scale * (-std::f64::consts::PI.powi(2) / (3.0 * step * step) - 1.0 / 6.0)
                        } else {
                            let k = k.min(n - k);
                            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
                            let s = (0.5 * k as f64 * step).sin();
                            -0.5 * sign * scale / (s * s)
                        }
                    })
                    .collect();
                Mat::from_fn(n, n, |i, j| column[(i + n - j) % n])
            }
            Scheme::Fd2Wilson { .. } => {
                let c = 1.0 / (self.spacing() * self.spacing());
                Mat::from_fn(n, n, |i, j| {
                    if i == j {
                        -2.0 * c
                    } else if j == (i + 1) % n || j == (i + n - 1) % n {
                        c
                    } else {
                        0.0
                    }
                })
            }
        }
    }
}

/// Grid request resolved per frequency. Without an explicit half-width the
/// domain spans `e_folds` decay lengths and at least `min_half_width`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    #[serde(rename = "L", default)]
    pub half_width: Option<f64>,
    #[serde(rename = "N")]
    pub n_points: usize,
    #[serde(default)]
    pub scheme: Scheme,
    #[serde(default = "GridSpec::default_e_folds")]
    pub e_folds: f64,
    #[serde(default = "GridSpec::default_min_half_width")]
    pub min_half_width: f64,
}

impl GridSpec {
    fn default_e_folds() -> f64 {
        24.0
    }

    fn default_min_half_width() -> f64 {
        20.0
    }

    pub fn new(half_width: Option<f64>, n_points: usize, scheme: Scheme) -> Self {
        Self {
            half_width,
            n_points,
            scheme,
            e_folds: Self::default_e_folds(),
            min_half_width: Self::default_min_half_width(),
        }
    }

    pub fn resolve(&self, decay_rate: f64) -> Result<Grid1D> {
        let l = match self.half_width {
            Some(l) => l,
            None => Grid1D::half_width_for(decay_rate, self.e_folds, self.min_half_width),
        };
        Grid1D::new(l, self.n_points, self.scheme)
    }
}

pub(crate) fn matvec(a: &Mat<f64>, x: &[f64]) -> Vec<f64> {
    debug_assert_eq!(a.ncols(), x.len());
    let col = faer::ColRef::from_slice(x);
    let y = a * col;
    y.iter().copied().collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn max_abs(v: &[f64]) -> f64 {
        v.iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    #[test]
    fn annihilates_constants() {
        for scheme in [Scheme::FourierPeriodic, Scheme::Fd2Wilson { r: 1.0 }] {
            let g = Grid1D::new(7.5, 64, scheme).unwrap();
            let ones = vec![1.0; 64];
            assert!(max_abs(&matvec(&g.first_derivative_matrix(), &ones)) <= 1e-12);
            assert!(max_abs(&matvec(&g.second_derivative_matrix(), &ones)) <= 1e-12);
        }
    }

    #[test]
    fn fourier_exact_on_trig() {
        let l = 5.0;
        let g = Grid1D::fourier(l, 64).unwrap();
        let x = g.nodes();
        let d1 = g.first_derivative_matrix();
        let d2 = g.second_derivative_matrix();
        for k in 1..5 {
            let w = k as f64 * PI / l;
            let s: Vec<f64> = x.iter().map(|x| (w * x).sin()).collect();
            let c: Vec<f64> = x.iter().map(|x| (w * x).cos()).collect();
            let ds = matvec(&d1, &s);
            let dds = matvec(&d2, &c);
            for j in 0..64 {
                assert!((ds[j] - w * c[j]).abs() <= 1e-10);
                assert!((dds[j] + w * w * c[j]).abs() <= 1e-10);
            }
        }
    }

    #[test]
    fn fd2_quadratic_interior() {
        let g = Grid1D::new(4.0, 200, Scheme::Fd2Wilson { r: 1.0 }).unwrap();
        let x = g.nodes();
        let f: Vec<f64> = x.iter().map(|x| x * x).collect();
        let df = matvec(&g.first_derivative_matrix(), &f);
        // central differences are exact on quadratics away from the wrap
        for j in 1..199 {
            assert!((df[j] - 2.0 * x[j]).abs() <= 1e-10);
        }
        let d2f = matvec(&g.second_derivative_matrix(), &f);
        assert!(d2f[1..199].iter().all(|v| (v - 2.0).abs() <= 1e-9));
    }

    #[test]
    fn structure_of_fourier_matrices() {
        let g = Grid1D::fourier(3.0, 48).unwrap();
        let d1 = g.first_derivative_matrix();
        let d2 = g.second_derivative_matrix();
        for i in 0..48 {
            for j in 0..48 {
                assert!((d1[(i, j)] + d1[(j, i)]).abs() <= 1e-12);
                assert!((d2[(i, j)] - d2[(j, i)]).abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn reflection_maps_nodes() {
        let g = Grid1D::fourier(2.0, 16).unwrap();
        for j in 1..16 {
            assert!((g.node(g.reflect(j)) + g.node(j)).abs() < 1e-14);
        }
        assert_eq!(g.reflect(0), 0);
        assert_eq!(g.reflect(8), 8);
    }

    #[test]
    fn spec_resolution() {
        let spec = GridSpec::new(None, 64, Scheme::FourierPeriodic);
        assert_eq!(spec.resolve(2.0).unwrap().half_width, 20.0);
        assert_eq!(spec.resolve(0.5).unwrap().half_width, 48.0);
        let fixed = GridSpec::new(Some(30.0), 64, Scheme::FourierPeriodic);
        assert_eq!(fixed.resolve(0.01).unwrap().half_width, 30.0);
        let parsed: GridSpec = serde_json::from_str(r#"{"L": 12.5, "N": 32}"#).unwrap();
        assert_eq!(parsed.half_width, Some(12.5));
        assert!(serde_json::from_str::<GridSpec>(r#"{"N": 32, "M": 1}"#).is_err());
    }

    #[test]
    fn invalid_grids() {
        assert!(Grid1D::fourier(-1.0, 16).is_err());
        assert!(Grid1D::fourier(1.0, 15).is_err());
        assert!(Grid1D::new(1.0, 16, Scheme::Fd2Wilson { r: -1.0 }).is_err());
    }
}
