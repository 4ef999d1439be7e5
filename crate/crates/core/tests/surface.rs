mod common;

use bscroll_core::surface::{
    bscroll_jacobian, bscroll_point, gauss_map_from_g, linspace, nil3_jacobian, nil3_point,
};
use bscroll_core::{
    box_residual, fundamental_forms, gauss_map_l, normal_gauss_map, BScroll, FrameSource, GeneratorFrames,
    IntegratorConfig, Vec3L,
};
use common::*;
use proptest::prelude::*;

fn scroll(h: &str, hh: f64, range: (f64, f64)) -> BScroll<GeneratorFrames> {
    BScroll::new(
        GeneratorFrames::new(h, hh).unwrap(),
        0.0,
        range,
        &IntegratorConfig::default(),
    )
    .unwrap()
}

#[test]
fn tanh_surfaces_match_closed_forms() {
    let sc = scroll("tanh(s)", 1.0, (-1.0, 1.0));
    let offset = Vec3L::new(0.0, 0.0, -1.0);
    let f0 = sc.frame_at(0.0).unwrap();
    let c_nil = tanh_f_nil(0.0, 0.0)[2] - nil3_point(&f0, &sc.path, 0.0).unwrap()[2];
    for s in linspace(-1.0, 1.0, 101) {
        let f = sc.frame_at(s).unwrap();
        for t in linspace(-2.0, 2.0, 11) {
            let fl = bscroll_point(&f, &sc.path, t).unwrap() + offset;
            let want = tanh_f_l(s, t);
            assert!(
                close(&fl, &want, 1e-8 * (1.0 + want.max_abs())),
                "f_L at ({s},{t})"
            );
            let p = nil3_point(&f, &sc.path, t).unwrap();
            let q = tanh_f_nil(s, t);
            assert_eq!([p[0], p[1]], [fl[0], fl[1]]);
            assert!((p[0] - q[0]).abs() < 1e-8 * (1.0 + q[0].abs()));
            assert!((p[1] - q[1]).abs() < 1e-8 * (1.0 + q[1].abs()));
            assert!(
                (p[2] + c_nil - q[2]).abs() < 1e-8 * (1.0 + q[2].abs()),
                "f at ({s},{t})"
            );
        }
    }
}

#[test]
fn jacobians_match_finite_differences() {
    for (h, range) in GENERATORS {
        let sc = scroll(h, 1.0, range);
        let d = 1e-5;
        for s in [-0.7, -0.1, 0.35, 0.8] {
            let (fm, f, fp) = (
                sc.frame_at(s - d).unwrap(),
                sc.frame_at(s).unwrap(),
                sc.frame_at(s + d).unwrap(),
            );
            for t in [-1.5, 0.0, 0.9] {
                let [ls, lt] = bscroll_jacobian(&f, t);
                let fd_s = (bscroll_point(&fp, &sc.path, t).unwrap()
                    - bscroll_point(&fm, &sc.path, t).unwrap())
                    * (0.5 / d);
                let fd_t = (bscroll_point(&f, &sc.path, t + d).unwrap()
                    - bscroll_point(&f, &sc.path, t - d).unwrap())
                    * (0.5 / d);
                assert!(close(&ls, &fd_s, 1e-6 * (1.0 + ls.max_abs())), "{h} f_L,s");
                assert!(close(&lt, &fd_t, 1e-6 * (1.0 + lt.max_abs())), "{h} f_L,t");

                let [ns, nt] = nil3_jacobian(&f, &sc.path, t).unwrap();
                let fd_s = (nil3_point(&fp, &sc.path, t).unwrap() - nil3_point(&fm, &sc.path, t).unwrap())
                    * (0.5 / d);
                let fd_t = (nil3_point(&f, &sc.path, t + d).unwrap()
                    - nil3_point(&f, &sc.path, t - d).unwrap())
                    * (0.5 / d);
                assert!(close(&ns, &fd_s, 1e-6 * (1.0 + ns.max_abs())), "{h} f,s");
                assert!(close(&nt, &fd_t, 1e-6 * (1.0 + nt.max_abs())), "{h} f,t");
            }
        }
    }
}

#[test]
fn first_form_entries() {
    let hh = -0.5;
    for (h, range) in GENERATORS {
        let src = GeneratorFrames::new(h, hh).unwrap();
        for s in linspace(range.0, range.1, 9) {
            let f = src.frame_at(s).unwrap();
            for t in [-2.0, 0.0, 1.3] {
                let ff = fundamental_forms(&f, t);
                let scale = 1.0 + f.a.value().max_abs().powi(2);
                assert!((ff.first[0][0] - t * t * hh * hh).abs() < 1e-9 * scale);
                assert!((ff.first[0][1] + 1.0).abs() < 1e-9 * scale);
                assert!(ff.first[1][1].abs() < 1e-9 * scale);
                assert!(ff.first[0][0] * ff.first[1][1] - ff.first[0][1].powi(2) < 0.0);
                // II = (t²H³ − κ₂)ds² − 2H ds dt
                let k2 = f.kappa2.value();
                assert!((ff.second[0][0] - (t * t * hh.powi(3) - k2)).abs() < 1e-9 * scale);
                assert!((ff.second[0][1] + hh).abs() < 1e-9 * scale);
            }
        }
    }
}

#[test]
fn gauss_map_examples() {
    let src = GeneratorFrames::new("tanh(s)", 1.0).unwrap();
    let f = src.frame_at(0.3).unwrap();
    assert!(close(&gauss_map_l(&f, 0.0), &-f.c.value(), 0.0));
    let n = gauss_map_l(&f, 0.0);
    assert!(close(
        &n,
        &Vec3L::new(-0.636_653_582_1, 0.0, 1.185_465_218_1),
        1e-9
    ));
    let t = -f.c.value()[2] / f.b.value()[2];
    assert!(gauss_map_l(&f, t)[2].abs() < 1e-12);
    let g = normal_gauss_map(&gauss_map_l(&f, t)).unwrap();
    assert!((g.sqmod() - 1.0).abs() < 1e-12);
}

#[test]
fn box_residual_examples() {
    let src = GeneratorFrames::new("tanh(s)", 1.0).unwrap();
    for t in [0.0, 0.2] {
        let r = box_residual(&src, 0.5, t, 1e-3).unwrap();
        assert!(r.residual < 1e-4, "{r:?}");
        assert_eq!(r.sign, -1);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn mean_and_gauss_curvature(which in 0usize..3, s in -1.0f64..1.0, t in -3.0f64..3.0,
                                hh in prop::sample::select(vec![1.0, -1.0, 0.5, 3.0])) {
        let (h, _) = GENERATORS[which];
        let f = GeneratorFrames::new(h, hh).unwrap().frame_at(s).unwrap();
        let ff = fundamental_forms(&f, t);
        prop_assert!((ff.mean_curvature - hh).abs() < 1e-10 * (1.0 + hh.abs()));
        prop_assert!((ff.gauss_curvature - hh * hh).abs() < 1e-10 * (1.0 + hh * hh));
    }

    #[test]
    fn gauss_map_is_unit_normal(which in 0usize..3, s in -1.0f64..1.0, t in -3.0f64..3.0) {
        let (h, _) = GENERATORS[which];
        let f = GeneratorFrames::new(h, 1.0).unwrap().frame_at(s).unwrap();
        let n = gauss_map_l(&f, t);
        let [fs, ft] = bscroll_jacobian(&f, t);
        let scale = 1.0 + n.max_abs() * fs.max_abs().max(ft.max_abs());
        prop_assert!((n.mdot(&n) - 1.0).abs() < 1e-10 * (1.0 + n.max_abs().powi(2)));
        prop_assert!(n.mdot(&fs).abs() < 1e-9 * scale);
        prop_assert!(n.mdot(&ft).abs() < 1e-9 * scale);
        if let Ok(g) = normal_gauss_map(&n) {
            let back = gauss_map_from_g(g).unwrap();
            prop_assert!((back - n).max_abs() < 1e-10 * (1.0 + n.max_abs().powi(2)));
        }
    }
}
