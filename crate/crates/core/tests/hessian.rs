use flatstrata_core::hessian::{complex_hessian_fd, convexity_check, HessianOptions};
use flatstrata_core::sweep::{family_sweep, Family};
use flatstrata_core::{Builtin, FunctionalKind, PeriodChart, C64};

#[test]
fn report_invariants() {
    let s = Builtin::RegularOctagon { side: 1.0 }.build().unwrap();
    let opts = HessianOptions::default();
    let r = complex_hessian_fd(&s, &FunctionalKind::Area, &opts).unwrap();
    let sig = r.signature;
    assert_eq!(sig.n_plus + sig.n_minus + sig.n_zero, r.dimension);
    assert!(r.residual <= 10.0 * r.tol_eig);
    assert!(r.eigenvalues.windows(2).all(|w| w[0] <= w[1]));
    assert!(r.half_step.as_ref().unwrap().relative_difference < 1e-6);
}

#[test]
fn area_gradient_matches_hermitian_form() {
    let s = Builtin::SlitTori { t: 0.3 }.build().unwrap();
    let ch = PeriodChart::compute(&s).unwrap();
    let h = complex_hessian_fd(&s, &FunctionalKind::Area, &HessianOptions::default()).unwrap().matrix();
    let p = &ch.period_vector;
    let dirs = [
        vec![C64::new(1.0, 0.0), C64::new(0.0, -0.5), C64::new(0.3, 0.3), C64::new(-0.2, 0.1), C64::new(0.0, 0.7)],
        vec![C64::new(0.0, 1.0), C64::new(0.4, 0.0), C64::new(-0.1, 0.6), C64::new(0.5, -0.5), C64::new(0.2, 0.0)],
    ];
    let eps = 1e-5;
    for dir in dirs {
        let plus: Vec<C64> = dir.iter().map(|z| z * eps).collect();
        let minus: Vec<C64> = dir.iter().map(|z| -z * eps).collect();
        let fd = (ch.deform(&s, &plus).unwrap().area() - ch.deform(&s, &minus).unwrap().area()) / (2.0 * eps);
        let mut form = C64::new(0.0, 0.0);
        for a in 0..p.len() {
            for b in 0..p.len() {
                form += h[(a, b)] * dir[a] * p[b].conj();
            }
        }
        assert!((fd - 2.0 * form.re).abs() < 1e-7, "{fd} vs {}", 2.0 * form.re);
    }
}

#[test]
fn convexity_contracts() {
    let s = Builtin::RegularOctagon { side: 1.0 }.build().unwrap();
    let opts = HessianOptions::default();
    let c = convexity_check(&s, &FunctionalKind::ExhM, 3, &opts).unwrap();
    assert!(c.passes && c.nonpositive <= 2);
    assert_eq!(c.scaling_ok, Some(true));

    let ch = PeriodChart::compute(&s).unwrap();
    let delta = [C64::new(0.02, -0.01), C64::new(-0.015, 0.01), C64::new(0.01, 0.02), C64::new(-0.01, -0.02)];
    let generic = ch.deform(&s, &delta).unwrap();
    let r = complex_hessian_fd(&generic, &FunctionalKind::EllInv2, &opts).unwrap();
    assert_eq!(r.signature.n_plus, r.dimension);

    let r = complex_hessian_fd(&s, &FunctionalKind::LogArea, &opts).unwrap();
    assert!(r.scaling_residual < 1e-4);
    assert_eq!(r.projective.unwrap().signature.as_tuple(), (1, 2, 0));
}

#[test]
fn sweeps() {
    let slit = family_sweep(Family::Slit, 1e-4, 1e-1, 7, &FunctionalKind::EllInv2, 5_000_000, 1e-8).unwrap();
    assert!((slit.fit.unwrap().slope - 2.0).abs() < 0.05);
    let st = family_sweep(Family::Stretch, 1.0, 50.0, 6, &FunctionalKind::Area, 5_000_000, 1e-8).unwrap();
    assert!((st.fit.unwrap().slope - 1.0).abs() < 1e-6);
    let rect = family_sweep(Family::Rect, 1.0, 20.0, 8, &FunctionalKind::ExhM, 5_000_000, 1e-8).unwrap();
    for r in &rect.rows {
        assert!((r.value.unwrap() - (r.param + 1.0 / r.param).ln()).abs() < 1e-9);
    }
    assert!(family_sweep(Family::Rect, 2.0, 1.0, 3, &FunctionalKind::Area, 1_000_000, 1e-8).is_err());
}
