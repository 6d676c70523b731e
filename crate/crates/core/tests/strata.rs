use flatstrata_core::strata::{aut_order, cohdim_bounds, enumerate_lex, stirling2, stratification_table};
use flatstrata_core::{Error, Surjection};

#[test]
fn pushforward_examples() {
    let col = Surjection::full_collapse(0, 2);
    assert_eq!(col.pushforward(&[1, 1]).unwrap(), vec![2]);
    let id = Surjection::identity(1, 3);
    assert_eq!(id.pushforward(&[0, 1, 1, 2]).unwrap(), vec![0, 1, 1, 2]);
    let merge = Surjection::parse(1, "1,2,3,3").unwrap();
    assert_eq!(merge.pushforward(&[0, 1, 1, 2]).unwrap(), vec![0, 1, 3]);
}

#[test]
fn order_examples() {
    let a = Surjection::parse(0, "1,1,2,3").unwrap();
    let b = Surjection::parse(0, "1,2,2,3").unwrap();
    assert!(a.leq(&a).unwrap());
    assert!(!a.leq(&b).unwrap() && !b.leq(&a).unwrap());
    let all = Surjection::full_collapse(0, 4);
    assert!(all.leq(&a).unwrap() && all.leq(&b).unwrap());
    assert_eq!(a.depth(), 1);
    assert_eq!(a.to_string(), "1,1,2,3");
    assert!(matches!(Surjection::parse(1, "2,1"), Err(Error::InvalidSurjection(_))));
}

#[test]
fn lexicographic_counts() {
    assert_eq!(enumerate_lex(0, 2, 1).len(), 1);
    assert_eq!(enumerate_lex(0, 3, 2).len(), 3);
    for k in 1..=6 {
        for l in 1..=k {
            assert_eq!(enumerate_lex(0, k, l).len() as u128, stirling2(k, l));
            assert!(enumerate_lex(1, k, l).iter().all(|s| s.is_lexicographic()));
        }
    }
}

#[test]
fn automorphisms() {
    assert_eq!(aut_order(0, &[1, 1]), 2);
    assert_eq!(aut_order(0, &[2]), 1);
    assert_eq!(aut_order(2, &[0, 0, 1, 1]), 2);
}

#[test]
fn bounds_examples() {
    let b = cohdim_bounds(2, 0).unwrap();
    assert_eq!(
        (b.moduli_bound, b.hodge_bound, b.strata_bound, b.depth, b.harer, b.looijenga_conjecture),
        (2, 3, 2, 1, 3, 0)
    );
    let b = cohdim_bounds(3, 1).unwrap();
    assert_eq!(
        (b.moduli_bound, b.hodge_bound, b.strata_bound, b.depth, b.harer, b.looijenga_conjecture),
        (5, 7, 3, 4, 9, 2)
    );
    assert!(matches!(cohdim_bounds(1, 3), Err(Error::GenusTooSmall(1))));
}

#[test]
fn genus_two_and_three_tables() {
    let t = stratification_table(2, 0).unwrap();
    let sigs: Vec<(usize, Vec<u32>)> = t.iter().map(|r| (r.depth, r.signature.clone())).collect();
    assert_eq!(sigs, vec![(0, vec![1, 1]), (1, vec![2])]);
    // Projectivized dimension 2g - 2 + n + k.
    assert_eq!(t[0].proj_dimension, 4);

    let t = stratification_table(3, 0).unwrap();
    let sigs: Vec<(usize, Vec<u32>)> = t.iter().map(|r| (r.depth, r.signature.clone())).collect();
    assert_eq!(
        sigs,
        vec![
            (0, vec![1, 1, 1, 1]),
            (1, vec![2, 1, 1]),
            (2, vec![3, 1]),
            (2, vec![2, 2]),
            (3, vec![4]),
        ]
    );
}
