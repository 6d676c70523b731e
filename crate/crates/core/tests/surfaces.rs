use flatstrata_core::{Builtin, Error, Surface, SurfaceDescription, C64};

fn square_json(gluings: &str) -> String {
    format!(
        r#"{{"polygons": [[[0,0],[1,0],[1,1],[0,1]]], "gluings": {gluings},
            "marked": [{{"vertex": [0,0], "order": 0, "free": true}}], "n": 1}}"#
    )
}

#[test]
fn square_torus_from_file_format() {
    let d = SurfaceDescription::from_json(&square_json("[[[0,0],[0,2]],[[0,1],[0,3]]]")).unwrap();
    let s = Surface::validate(&d).unwrap();
    assert_eq!(s.vertex_classes().len(), 1);
    assert!((s.cone_angle(0) - 2.0 * std::f64::consts::PI).abs() < 1e-12);
    let t = s.topology();
    assert_eq!((t.g, t.n, t.m.clone(), t.eps_n), (1, 1, vec![0], 1));
    assert!((s.area() - 1.0).abs() < 1e-15);
}

#[test]
fn top_glued_to_left_is_not_a_translation() {
    let d = SurfaceDescription::from_json(&square_json("[[[0,2],[0,3]],[[0,0],[0,1]]]")).unwrap();
    let e = Surface::validate(&d).unwrap_err();
    assert!(matches!(e, Error::NonTranslationGluing { .. }));
    assert!(e.is_validation());
    assert!(e.to_string().starts_with("NonTranslationGluing"));
}

#[test]
fn malformed_json_is_a_validation_error() {
    let e = SurfaceDescription::from_json("{\"polygons\": 3}").unwrap_err();
    assert!(e.is_validation());
}

#[test]
fn builtin_strata_and_areas() {
    let oct = Builtin::RegularOctagon { side: 1.0 }.build().unwrap();
    assert_eq!(oct.vertex_classes().len(), 1);
    assert!((oct.cone_angle(0) - 6.0 * std::f64::consts::PI).abs() < 1e-9);
    assert_eq!((oct.genus(), oct.topology().m), (2, vec![2]));
    assert!((oct.area() - 2.0 * (1.0 + 2f64.sqrt())).abs() < 1e-12);

    let slit = Builtin::SlitTori { t: 0.3 }.build().unwrap();
    assert_eq!((slit.genus(), slit.topology().m), (2, vec![1, 1]));
    assert!((slit.area() - 2.0).abs() < 1e-12);
    assert_eq!(slit.euler_characteristic(), -2);

    let sq = Builtin::SquareTorus.build().unwrap();
    assert_eq!((sq.genus(), sq.area()), (1, 1.0));
}

#[test]
fn rescaling() {
    let s = Builtin::SlitTori { t: 0.3 }.build().unwrap();
    assert!((s.rescale(C64::new(3.0, 0.0)).unwrap().area() - 9.0 * s.area()).abs() < 1e-12);
    assert_eq!(s.rescale(C64::new(1.0, 0.0)).unwrap().to_description(), s.to_description());
    assert!(matches!(s.rescale(C64::new(0.0, 0.0)), Err(Error::ZeroScalar)));

    // A quarter turn of the square torus is again the square torus.
    let sq = Builtin::SquareTorus.build().unwrap();
    let r = sq.rescale(C64::new(0.0, 1.0)).unwrap();
    let mut hol: Vec<(i64, i64)> = r
        .edge_class_holonomies()
        .iter()
        .map(|z| (z.re.round() as i64, z.im.round() as i64))
        .collect();
    hol.sort();
    assert_eq!(hol.len(), 2);
    assert!(hol.iter().all(|&(x, y)| x.abs() + y.abs() == 1));
}

#[test]
fn builtins_parse_and_reject_bad_parameters() {
    assert_eq!(Builtin::parse("slit_tori(0.3)").unwrap(), Builtin::SlitTori { t: 0.3 });
    assert!(matches!(Builtin::parse("slit_tori(1.5)"), Err(Error::ParamOutOfRange(_))));
    assert!(matches!(Builtin::parse("pretzel"), Err(Error::UnknownFamily(_))));
}

#[test]
fn description_survives_validation_round_trip() {
    for b in [Builtin::RegularOctagon { side: 1.0 }, Builtin::MarkedSlitTori { t: 0.1, s: 0.2 }] {
        let s = b.build().unwrap();
        let d = SurfaceDescription::from_json(&s.to_description().to_json()).unwrap();
        let t = Surface::validate(&d).unwrap();
        assert_eq!(t.topology(), s.topology());
        assert_eq!(t.to_description(), s.to_description());
    }
}
