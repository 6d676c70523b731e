use flatstrata_core::acceptance::lattice_oracle;
use flatstrata_core::loops::{distance, min_distance, shortest_loop, systole};
use flatstrata_core::matroid::{greedy_max_basis, Item, DEFAULT_EPS_RANK};
use flatstrata_core::saddle::{enumerate_saddles, SaddleCache};
use flatstrata_core::{Builtin, Error, PeriodChart, C64};

#[test]
fn square_torus_counts_match_lattice() {
    let s = Builtin::SquareTorus.build().unwrap();
    for (l, want) in [(1.0, 4), (1.5, 8), (2.3, 16)] {
        assert_eq!(enumerate_saddles(&s, l, 1_000_000).unwrap().len(), want);
    }
    for l in [3.0, 4.2, 6.0] {
        assert_eq!(enumerate_saddles(&s, l, 10_000_000).unwrap().len(), lattice_oracle(l));
    }
    // +-2 and +-2i run through the marked point.
    let list = enumerate_saddles(&s, 2.3, 1_000_000).unwrap();
    assert!(list.iter().all(|sc| sc.length < 2.0 - 1e-9 || sc.length > 2.0 + 1e-9));
}

#[test]
fn saddle_connection_invariants() {
    for b in [Builtin::RegularOctagon { side: 1.0 }, Builtin::SlitTori { t: 0.3 }] {
        let s = b.build().unwrap();
        let ch = PeriodChart::compute(&s).unwrap();
        let list = enumerate_saddles(&s, 3.0, 5_000_000).unwrap();
        assert!(!list.is_empty());
        for w in list.windows(2) {
            assert!(w[0].length <= w[1].length + 1e-12);
        }
        for sc in &list {
            assert!(sc.length > 0.0);
            assert_eq!(sc.length, sc.holonomy.norm());
            let p = ch.period_of_class(&ch.class_of(&sc.chain).unwrap());
            assert!((p - sc.holonomy).norm() < 1e-9, "{b}: {p} vs {}", sc.holonomy);
        }
    }
}

#[test]
fn budget_is_enforced() {
    let s = Builtin::RegularOctagon { side: 1.0 }.build().unwrap();
    let e = enumerate_saddles(&s, 50.0, 1000).unwrap_err();
    assert!(matches!(e, Error::BudgetExceeded { budget: 1000 }));
    assert!(e.is_budget());
}

#[test]
fn systoles_and_distances() {
    let cases = [
        (Builtin::SquareTorus, 1.0),
        (Builtin::RegularOctagon { side: 1.0 }, 1.0),
        (Builtin::SlitTori { t: 0.1 }, 0.1),
    ];
    for (b, want) in cases {
        let s = b.build().unwrap();
        let c = SaddleCache::new(&s, 5_000_000);
        assert!((systole(&c).unwrap().0 - want).abs() < 1e-12, "{b}");
    }
    let s = Builtin::SlitTori { t: 0.1 }.build().unwrap();
    let c = SaddleCache::new(&s, 5_000_000);
    assert_eq!(distance(&c, 0, 0).unwrap(), 0.0);
    assert!((distance(&c, 0, 1).unwrap() - 0.1).abs() < 1e-12);
    assert!((min_distance(&c, &[(0, 1)]).unwrap().unwrap() - 0.1).abs() < 1e-12);

    let s = Builtin::TwoPointTorus { a: 0.25 }.build().unwrap();
    let c = SaddleCache::new(&s, 5_000_000);
    assert!((distance(&c, 0, 1).unwrap() - 0.25).abs() < 1e-12);
}

#[test]
fn shortest_loops() {
    for (b, want) in [
        (Builtin::SquareTorus, 1.0),
        (Builtin::RectTorus { w: 1.0, h: 5.0 }, 1.0),
        (Builtin::RegularOctagon { side: 1.0 }, 1.0),
    ] {
        let s = b.build().unwrap();
        let c = SaddleCache::new(&s, 5_000_000);
        assert!((shortest_loop(&c).unwrap().length - want).abs() < 1e-9, "{b}");
    }
}

#[test]
fn greedy_on_square_torus_pool() {
    let s = Builtin::SquareTorus.build().unwrap();
    let ch = PeriodChart::compute(&s).unwrap();
    let pool = enumerate_saddles(&s, 1.5, 100_000).unwrap();
    let classes: Vec<Vec<f64>> = pool
        .iter()
        .map(|sc| ch.class_of(&sc.chain).unwrap().iter().map(|&x| x as f64).collect())
        .collect();
    let items: Vec<Item<'_>> = pool
        .iter()
        .zip(&classes)
        .map(|(sc, c)| Item {
            class: c,
            weight: sc.length.powi(-2),
            length: sc.length,
            angle: sc.angle(),
        })
        .collect();
    let r = greedy_max_basis(&items, &[], 2, DEFAULT_EPS_RANK).unwrap();
    assert!((r.total_weight - 2.0).abs() < 1e-12);
    let mut hol: Vec<C64> = r.basis.iter().map(|&i| pool[i].holonomy).collect();
    hol.sort_by(|a, b| a.re.total_cmp(&b.re));
    assert!(hol.iter().all(|z| (z.norm() - 1.0).abs() < 1e-12));
    assert!((hol[0].re * hol[1].im - hol[0].im * hol[1].re).abs() > 0.5);
}

#[test]
fn greedy_prefers_heavier_duplicate() {
    let a = vec![1.0, 0.0];
    let b = vec![1.0, 0.0];
    let c = vec![0.0, 1.0];
    let items = [
        Item { class: &a, weight: 1.0, length: 1.0, angle: 0.0 },
        Item { class: &b, weight: 3.0, length: 0.5, angle: 0.0 },
        Item { class: &c, weight: 0.5, length: 2.0, angle: 0.0 },
    ];
    let r = greedy_max_basis(&items, &[], 2, DEFAULT_EPS_RANK).unwrap();
    assert_eq!(r.basis, vec![1, 2]);
    assert_eq!(r.total_weight, 3.5);
    assert!(matches!(
        greedy_max_basis(&items[..2], &[], 2, DEFAULT_EPS_RANK),
        Err(Error::RankDeficient { needed: 2, found: 1 })
    ));
}
