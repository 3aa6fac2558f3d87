//! Seminorms on `R^k` and their Jacobians
//! `J(s) = H^{k-1}(S^{k-1}) · (∫_{S^{k-1}} s(u)^{-k} dH^{k-1})^{-1}`.

use std::f64::consts::PI;
use std::fmt;
use std::num::NonZeroUsize;
use std::sync::Arc;

use gauss_quad::GaussLegendre;
use nalgebra::{DMatrix, DVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{MassError, Result};

pub type Evaluator = Arc<dyn Fn(&DVector<f64>) -> f64 + Send + Sync>;

#[derive(Clone)]
pub enum Seminorm {
    /// `s(u) = |A u|`.
    Matrix(DMatrix<f64>),
    BlackBox { dim: usize, eval: Evaluator },
}

impl fmt::Debug for Seminorm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Seminorm::Matrix(a) => write!(f, "Seminorm::Matrix({}x{})", a.nrows(), a.ncols()),
            Seminorm::BlackBox { dim, .. } => write!(f, "Seminorm::BlackBox(dim {dim})"),
        }
    }
}

impl Seminorm {
    pub fn black_box(dim: usize, f: impl Fn(&DVector<f64>) -> f64 + Send + Sync + 'static) -> Seminorm {
        Seminorm::BlackBox { dim, eval: Arc::new(f) }
    }

    pub fn dim(&self) -> usize {
        match self {
            Seminorm::Matrix(a) => a.ncols(),
            Seminorm::BlackBox { dim, .. } => *dim,
        }
    }

    pub fn eval(&self, u: &DVector<f64>) -> f64 {
        match self {
            Seminorm::Matrix(a) => (a * u).norm(),
            Seminorm::BlackBox { eval, .. } => eval(u),
        }
    }

    /// Spot-checks `s(λu) = |λ| s(u)` and `s ≥ 0` on seeded random directions.
    pub fn check_homogeneous(&self, seed: u64) -> Result<()> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let k = self.dim();
        for _ in 0..16 {
            let u: DVector<f64> = DVector::from_fn(k, |_, _| StandardNormal.sample(&mut rng));
            let su = self.eval(&u);
            if !(su >= 0.0) {
                return Err(MassError::NotHomogeneous(format!("s(u) = {su}")));
            }
            for lambda in [2.0, -0.5, 3.75] {
                let sl = self.eval(&(&u * lambda));
                let want = lambda.abs() * su;
                if (sl - want).abs() > 1e-9 * (1.0 + want) {
                    return Err(MassError::NotHomogeneous(format!(
                        "s({lambda}u) = {sl} but |{lambda}| s(u) = {want}"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Whether the matrix form has a nontrivial kernel.
    pub fn is_degenerate(&self) -> Option<bool> {
        match self {
            Seminorm::Matrix(a) => Some(rank_deficient(a)),
            Seminorm::BlackBox { .. } => None,
        }
    }
}

pub(crate) fn rank_deficient(a: &DMatrix<f64>) -> bool {
    if a.ncols() == 0 {
        return false;
    }
    if a.nrows() < a.ncols() {
        return true;
    }
    let sv = a.clone().svd(false, false).singular_values;
    let max = sv.max();
    sv.min() <= 1e-12 * max.max(1e-300)
}

/// `sqrt(det(AᵀA))`.
pub fn analytic_jacobian(a: &DMatrix<f64>) -> f64 {
    if rank_deficient(a) {
        return 0.0;
    }
    (a.transpose() * a).determinant().max(0.0).sqrt()
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Quadrature {
    /// Uniform nodes on the circle (`k = 2`).
    pub circle_nodes: usize,
    /// Gauss–Legendre nodes in the height coordinate (`k = 3`).
    pub polar_nodes: usize,
    /// Uniform azimuthal nodes (`k = 3`).
    pub azimuth_nodes: usize,
    /// Monte-Carlo sample size (`k ≥ 4`).
    pub samples: usize,
    pub seed: u64,
}

impl Default for Quadrature {
    fn default() -> Self {
        Quadrature {
            circle_nodes: 4096,
            polar_nodes: 64,
            azimuth_nodes: 128,
            samples: 200_000,
            seed: 0,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum JacobianMethod {
    Analytic,
    Quadrature(Quadrature),
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct JacobianEstimate {
    pub value: f64,
    /// Standard error of a Monte-Carlo estimate; `None` for deterministic rules.
    pub std_error: Option<f64>,
}

pub fn seminorm_jacobian(s: &Seminorm, k: usize, method: JacobianMethod) -> Result<f64> {
    Ok(jacobian_estimate(s, k, method)?.value)
}

pub fn jacobian_estimate(s: &Seminorm, k: usize, method: JacobianMethod) -> Result<JacobianEstimate> {
    if k == 0 || s.dim() != k {
        return Err(MassError::Dimension(format!("seminorm on R^{} used in degree {k}", s.dim())));
    }
    if s.is_degenerate() == Some(true) {
        return Ok(JacobianEstimate {
            value: 0.0,
            std_error: None,
        });
    }
    match method {
        JacobianMethod::Analytic => match s {
            Seminorm::Matrix(a) => Ok(JacobianEstimate {
                value: analytic_jacobian(a),
                std_error: None,
            }),
            Seminorm::BlackBox { .. } => Err(MassError::AnalyticNeedsMatrix),
        },
        JacobianMethod::Quadrature(q) => {
            if let Seminorm::BlackBox { .. } = s {
                s.check_homogeneous(q.seed)?;
            }
            quadrature(s, k, &q)
        }
    }
}

/// `J = 1 / mean(s^{-k})` over the uniform measure on the sphere.
fn quadrature(s: &Seminorm, k: usize, q: &Quadrature) -> Result<JacobianEstimate> {
    let weight = |u: DVector<f64>| -> Option<f64> {
        let v = s.eval(&u);
        (v > 0.0 && v.is_finite()).then(|| v.powi(-(k as i32)))
    };
    let exact = |mean: Option<f64>| JacobianEstimate {
        value: mean.map_or(0.0, |m| 1.0 / m),
        std_error: None,
    };
    match k {
        1 => {
            let a = weight(DVector::from_element(1, 1.0));
            let b = weight(DVector::from_element(1, -1.0));
            Ok(exact(a.zip(b).map(|(a, b)| (a + b) / 2.0)))
        }
        2 => {
            let n = q.circle_nodes.max(8);
            let mut sum = 0.0;
            for i in 0..n {
                let t = 2.0 * PI * i as f64 / n as f64;
                match weight(DVector::from_vec(vec![t.cos(), t.sin()])) {
                    Some(w) => sum += w,
                    None => return Ok(exact(None)),
                }
            }
            Ok(exact(Some(sum / n as f64)))
        }
        3 => {
            let gl = GaussLegendre::new(NonZeroUsize::new(q.polar_nodes.max(2)).unwrap());
            let m = q.azimuth_nodes.max(8);
            let mut degenerate = false;
            let integral = gl.integrate(-1.0, 1.0, |z| {
                let r = (1.0 - z * z).max(0.0).sqrt();
                let mut acc = 0.0;
                for j in 0..m {
                    let phi = 2.0 * PI * j as f64 / m as f64;
                    match weight(DVector::from_vec(vec![r * phi.cos(), r * phi.sin(), z])) {
                        Some(w) => acc += w,
                        None => degenerate = true,
                    }
                }
                acc * 2.0 * PI / m as f64
            });
            if degenerate {
                return Ok(exact(None));
            }
            Ok(exact(Some(integral / (4.0 * PI))))
        }
        _ => {
            let mut rng = ChaCha8Rng::seed_from_u64(q.seed);
            let n = q.samples.max(2);
            let (mut sum, mut sq) = (0.0, 0.0);
            for _ in 0..n {
                let g: DVector<f64> = DVector::from_fn(k, |_, _| StandardNormal.sample(&mut rng));
                let u = &g / g.norm();
                match weight(u) {
                    Some(w) => {
                        sum += w;
                        sq += w * w;
                    }
                    None => return Ok(exact(None)),
                }
            }
            let mean = sum / n as f64;
            let var = (sq / n as f64 - mean * mean).max(0.0);
            let se_mean = (var / n as f64).sqrt();
            Ok(JacobianEstimate {
                value: 1.0 / mean,
                std_error: Some(se_mean / (mean * mean)),
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn diag(v: &[f64]) -> Seminorm {
        Seminorm::Matrix(DMatrix::from_diagonal(&DVector::from_row_slice(v)))
    }

    #[test]
    fn one_dimensional() {
        let s = Seminorm::black_box(1, |u| 3.0 * u.norm());
        let q = JacobianMethod::Quadrature(Quadrature::default());
        assert!((seminorm_jacobian(&s, 1, q).unwrap() - 3.0).abs() < 1e-15);
        assert_eq!(seminorm_jacobian(&s, 1, JacobianMethod::Analytic), Err(MassError::AnalyticNeedsMatrix));
    }

    #[test]
    fn diag_one_two() {
        let s = diag(&[1.0, 2.0]);
        let a = seminorm_jacobian(&s, 2, JacobianMethod::Analytic).unwrap();
        let q = seminorm_jacobian(&s, 2, JacobianMethod::Quadrature(Quadrature::default())).unwrap();
        assert!((a - 2.0).abs() < 1e-12);
        assert!((q - 2.0).abs() < 1e-6);
    }

    #[test]
    fn degenerate_is_zero() {
        let s = diag(&[1.0, 0.0]);
        assert_eq!(seminorm_jacobian(&s, 2, JacobianMethod::Quadrature(Quadrature::default())).unwrap(), 0.0);
        assert_eq!(seminorm_jacobian(&s, 2, JacobianMethod::Analytic).unwrap(), 0.0);
    }

    #[test]
    fn three_and_four() {
        let s = diag(&[1.0, 1.5, 0.7]);
        let q = seminorm_jacobian(&s, 3, JacobianMethod::Quadrature(Quadrature::default())).unwrap();
        assert!((q - 1.05).abs() < 1e-9, "{q}");
        let s4 = diag(&[1.0, 1.1, 0.9, 1.2]);
        let e = jacobian_estimate(&s4, 4, JacobianMethod::Quadrature(Quadrature::default())).unwrap();
        let exact = 1.1 * 0.9 * 1.2;
        assert!((e.value - exact).abs() < 5.0 * e.std_error.unwrap() + 1e-9);
    }

    #[test]
    fn inhomogeneous_black_box_rejected() {
        let s = Seminorm::black_box(2, |u| u.norm_squared());
        assert!(matches!(
            seminorm_jacobian(&s, 2, JacobianMethod::Quadrature(Quadrature::default())),
            Err(MassError::NotHomogeneous(_))
        ));
    }
}
