use nalgebra::{DMatrix, DVector};
use nborient_mass::geometry::point_simplex_volume;
use nborient_mass::mass::{map_mass, tilde_mass};
use nborient_mass::*;
use proptest::prelude::*;

fn well_conditioned(k: usize) -> impl Strategy<Value = DMatrix<f64>> {
    prop::collection::vec(-0.4f64..0.4, k * k).prop_map(move |v| DMatrix::identity(k, k) + DMatrix::from_vec(k, k, v) * (1.0 / k as f64))
}

fn points(n: usize, d: usize) -> impl Strategy<Value = Vec<Vec<f64>>> {
    prop::collection::vec(prop::collection::vec(-2.0f64..2.0, d), n)
}

fn standard(k: usize) -> Vec<Vec<f64>> {
    let mut out = vec![vec![0.0; k]];
    for i in 0..k {
        let mut e = vec![0.0; k];
        e[i] = 1.0;
        out.push(e);
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn quadrature_matches_analytic((k, a) in (1usize..=3).prop_flat_map(|k| well_conditioned(k).prop_map(move |a| (k, a)))) {
        let s = Seminorm::Matrix(a);
        let q = seminorm_jacobian(&s, k, JacobianMethod::Quadrature(Quadrature::default())).unwrap();
        let exact = seminorm_jacobian(&s, k, JacobianMethod::Analytic).unwrap();
        prop_assert!((q - exact).abs() <= 1e-4, "{q} vs {exact}");
    }

    #[test]
    fn mass_scales_and_survives_subdivision(img in points(3, 3), lambda in 0.1f64..5.0) {
        let f = PLMap::simplex(standard(2), img).unwrap();
        let m = map_mass(&f, JacobianMethod::Analytic).unwrap();
        let scaled = map_mass(&f.scaled(lambda), JacobianMethod::Analytic).unwrap();
        prop_assert!((scaled - lambda * lambda * m).abs() <= 1e-9 * (1.0 + scaled));
        let sd = map_mass(&f.subdivided_n(2), JacobianMethod::Analytic).unwrap();
        prop_assert!((sd - m).abs() <= 1e-9 * (1.0 + m));
    }

    #[test]
    fn injective_mass_is_image_measure(dom in points(3, 2), img in points(3, 4)) {
        let f = PLMap::simplex(dom.clone(), img.clone()).unwrap();
        let dv: Vec<DVector<f64>> = dom.iter().map(|p| DVector::from_row_slice(p)).collect();
        let iv: Vec<DVector<f64>> = img.iter().map(|p| DVector::from_row_slice(p)).collect();
        prop_assume!(point_simplex_volume(&dv) > 1e-3 && point_simplex_volume(&iv) > 1e-3);
        let m = map_mass(&f, JacobianMethod::Analytic).unwrap();
        let h = point_simplex_volume(&iv);
        prop_assert!((m - h).abs() <= 1e-9 * h);
    }

    #[test]
    fn mass_dominates_current_mass(k in 1usize..=2, simplices in prop::collection::vec((points(3, 2), -3i64..=3), 1..5)) {
        let mut c = PLChain::zero(k);
        for (pts, a) in simplices {
            let img: Vec<Vec<f64>> = pts.into_iter().take(k + 1).collect();
            c.push(a, PLMap::simplex(standard(k), img).unwrap()).unwrap();
        }
        let r = mass_lip_check(&c);
        prop_assert!(r.holds, "{r:?}");
        prop_assert!(r.current_mass <= r.factor * r.mass + 1e-12);
    }

    #[test]
    fn tilde_mass_is_monotone(img in points(4, 2)) {
        let pts = vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 1.0], vec![0.4, 0.3]];
        let f = PLMap::new(pts, vec![vec![0, 1, 3], vec![1, 2, 3], vec![2, 0, 3]], img, Some(standard(2))).unwrap();
        let values: Vec<f64> = (0..=2).map(|r| tilde_mass(&f, r).unwrap()).collect();
        let m = map_mass(&f, JacobianMethod::Analytic).unwrap();
        for w in values.windows(2) {
            prop_assert!(w[1] >= w[0] - 1e-9, "{values:?}");
        }
        prop_assert!(values[2] <= m + 1e-9);
    }

    #[test]
    fn angle_monotone_in_curvature(a in 0.1f64..1.0, b in 0.1f64..1.0, t in 0.05f64..0.95) {
        let c = (a - b).abs() + t * (a + b - (a - b).abs());
        let mut last = 0.0;
        for i in 0..20 {
            let kappa = -2.0 + 4.0 * i as f64 / 19.0;
            let angle = comparison_angle(a, b, c, kappa).unwrap();
            prop_assert!(angle >= last - 1e-12);
            last = angle;
        }
    }
}
