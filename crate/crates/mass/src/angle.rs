//! Comparison angles in the model planes of constant curvature `κ`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{MassError, Result};

/// The angle at `a` of the model triangle with sides `d(a,b)`, `d(a,c)`, `d(b,c)`.
pub fn comparison_angle(d_ab: f64, d_ac: f64, d_bc: f64, kappa: f64) -> Result<f64> {
    let sides = [d_ab, d_ac, d_bc];
    if sides.iter().any(|s| !(s.is_finite() && *s > 0.0)) {
        return Err(MassError::TriangleInequality(sides));
    }
    let slack = 1e-12 * (d_ab + d_ac + d_bc);
    if d_bc > d_ab + d_ac + slack || d_ab > d_ac + d_bc + slack || d_ac > d_ab + d_bc + slack {
        return Err(MassError::TriangleInequality(sides));
    }
    let cos = if kappa > 0.0 {
        let r = kappa.sqrt();
        let perimeter = d_ab + d_ac + d_bc;
        let bound = 2.0 * PI / r;
        if perimeter >= bound {
            return Err(MassError::Perimeter { perimeter, bound });
        }
        let (a, b, c) = (r * d_ab, r * d_ac, r * d_bc);
        (c.cos() - a.cos() * b.cos()) / (a.sin() * b.sin())
    } else if kappa < 0.0 {
        let r = (-kappa).sqrt();
        let (a, b, c) = (r * d_ab, r * d_ac, r * d_bc);
        (a.cosh() * b.cosh() - c.cosh()) / (a.sinh() * b.sinh())
    } else {
        (d_ab * d_ab + d_ac * d_ac - d_bc * d_bc) / (2.0 * d_ab * d_ac)
    };
    Ok(cos.clamp(-1.0, 1.0).acos())
}

/// Pairwise distances of four labeled points `a, b, c, d`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Quadruple {
    pub ab: f64,
    pub ac: f64,
    pub ad: f64,
    pub bc: f64,
    pub bd: f64,
    pub cd: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuadrupleCheck {
    /// `∠bac + ∠cad + ∠dab` in the `κ`-plane.
    pub sum: f64,
    pub holds: bool,
}

pub fn quadruple_condition(q: &Quadruple, kappa: f64) -> Result<QuadrupleCheck> {
    let sum = comparison_angle(q.ab, q.ac, q.bc, kappa)?
        + comparison_angle(q.ac, q.ad, q.cd, kappa)?
        + comparison_angle(q.ad, q.ab, q.bd, kappa)?;
    Ok(QuadrupleCheck {
        sum,
        holds: sum <= 2.0 * PI + 1e-9,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn model_triangles() {
        assert!((comparison_angle(1.0, 1.0, 1.0, 0.0).unwrap() - PI / 3.0).abs() < 1e-12);
        let h = PI / 2.0;
        assert!((comparison_angle(h, h, h, 1.0).unwrap() - h).abs() < 1e-12);
        assert!(comparison_angle(1.0, 1.0, 1.0, -1.0).unwrap() < PI / 3.0);
        assert!(comparison_angle(1.0, 1.0, 1.0, 1.0).unwrap() > PI / 3.0);
    }

    #[test]
    fn errors() {
        assert!(matches!(comparison_angle(1.0, 1.0, 3.0, 0.0), Err(MassError::TriangleInequality(_))));
        assert!(matches!(comparison_angle(2.2, 2.2, 2.2, 1.0), Err(MassError::Perimeter { .. })));
    }

    #[test]
    fn planar_quadruple() {
        let p: [[f64; 2]; 4] = [[0.2, 0.3], [0.0, 0.0], [2.0, 0.1], [0.4, 1.9]];
        let d = |i: usize, j: usize| ((p[i][0] - p[j][0]).powi(2) + (p[i][1] - p[j][1]).powi(2)).sqrt();
        let q = Quadruple {
            ab: d(0, 1),
            ac: d(0, 2),
            ad: d(0, 3),
            bc: d(1, 2),
            bd: d(1, 3),
            cd: d(2, 3),
        };
        let r = quadruple_condition(&q, 0.0).unwrap();
        assert!((r.sum - 2.0 * PI).abs() < 1e-9);
        assert!(r.holds);
    }
}
