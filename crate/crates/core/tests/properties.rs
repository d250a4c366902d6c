use approx::assert_relative_eq;
use octoplane::geometry::{bracket, ni_dist, phi_form, psi_form, psi_form_bracket, OctPair, SpherePoint};
use octoplane::jordan::{jordan_embed, jordan_product};
use octoplane::octonion::Octonion;
use octoplane::special::{hc_c_function, spherical_fn, KTypeIndex, SpectralParam};
use proptest::prelude::*;

fn oct() -> impl Strategy<Value = Octonion> {
    prop::array::uniform8(-3.0..3.0f64).prop_map(|c| Octonion::new(c).unwrap())
}

fn pair() -> impl Strategy<Value = OctPair> {
    (oct(), oct()).prop_map(|(a, b)| OctPair::new(a, b))
}

fn sphere() -> impl Strategy<Value = SpherePoint> {
    pair().prop_filter_map("nonzero", |p| SpherePoint::normalize(p).ok())
}

fn ball() -> impl Strategy<Value = OctPair> {
    (sphere(), 0.0..0.98f64).prop_map(|(s, r)| s.point().scale(r))
}

proptest! {
    #[test]
    fn norm_is_multiplicative(a in oct(), b in oct()) {
        assert_relative_eq!((a * b).norm(), a.norm() * b.norm(), max_relative = 1e-12, epsilon = 1e-300);
    }

    #[test]
    fn alternative_laws(a in oct(), b in oct()) {
        let scale = 1.0 + a.norm().powi(2) * b.norm() + a.norm() * b.norm().powi(2);
        prop_assert!((a * (a * b) - (a * a) * b).norm() <= 1e-12 * scale);
        prop_assert!(((b * a) * a - b * (a * a)).norm() <= 1e-12 * scale);
    }

    #[test]
    fn moufang(a in oct(), b in oct(), c in oct()) {
        let lhs = a * (b * (a * c));
        let rhs = ((a * b) * a) * c;
        prop_assert!((lhs - rhs).norm() <= 1e-12 * (1.0 + a.norm_sqr() * b.norm() * c.norm()));
    }

    #[test]
    fn conjugation_reverses_products(a in oct(), b in oct()) {
        let d = (a * b).conj() - b.conj() * a.conj();
        prop_assert!(d.norm() <= 1e-12 * (1.0 + a.norm() * b.norm()));
    }

    #[test]
    fn inverse(a in oct()) {
        prop_assume!(a.norm() > 1e-3);
        let e = a * a.inv().unwrap() - Octonion::ONE;
        prop_assert!(e.norm() <= 1e-12);
    }

    #[test]
    fn forms_agree(x in pair(), y in pair()) {
        let s = 1.0 + x.norm_sqr() * y.norm_sqr();
        prop_assert!((phi_form(&x, &y) - bracket(&x, &y).norm_sqr()).abs() <= 1e-12 * s);
        prop_assert!((psi_form(&x, &y) - psi_form_bracket(&x, &y)).abs() <= 1e-12 * (1.0 + x.norm() * y.norm()).powi(2));
    }

    #[test]
    fn distance_is_symmetric_on_the_sphere(a in sphere(), b in sphere()) {
        assert_relative_eq!(a.dist(&b), b.dist(&a), max_relative = 1e-10, epsilon = 1e-12);
        assert_relative_eq!(a.dist(&b), ni_dist(a.point(), b.point()), max_relative = 1e-8, epsilon = 1e-7);
        prop_assert_eq!(a.dist(&a), 0.0);
    }

    #[test]
    fn triangle_inequality(a in ball(), b in ball(), c in ball()) {
        prop_assert!(ni_dist(&a, &c) <= ni_dist(&a, &b) + ni_dist(&b, &c) + 1e-12);
    }

    #[test]
    fn jordan_embedding_is_idempotent(x in ball()) {
        let m = jordan_embed(&x).unwrap();
        let sq = jordan_product(&m, &m).unwrap();
        prop_assert!(sq.max_abs_diff(&m) <= 1e-10 * m.max_abs().max(1.0));
        assert_relative_eq!(m.trace(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn c_function_modulus_is_even(l in 0.05..8.0f64) {
        let p = SpectralParam::new(l).unwrap();
        assert_relative_eq!(hc_c_function(p).unwrap().norm(), hc_c_function(p.negated()).unwrap().norm(), max_relative = 1e-12);
    }

    #[test]
    fn spherical_function_is_even_in_lambda(l in 0.05..6.0f64, r in 0.0..0.99f64) {
        let p = SpectralParam::new(l).unwrap();
        let a = spherical_fn(p, KTypeIndex::ZERO, r).unwrap();
        let b = spherical_fn(p.negated(), KTypeIndex::ZERO, r).unwrap();
        prop_assert!((a - b).norm() <= 1e-9 * (1.0 + a.norm()));
    }
}
