//! Regression guard for the edge-labeling convention of the moment graph.
//!
//! Both readings of the transposition edges produce the same undirected
//! graph, but only the value-pair labeling (the left convention, where the
//! edge from `w` swaps the values at `w(p)` and `w(q)`) makes the
//! coordinate classes satisfy the divisibility condition. The naive
//! position-pair labeling fails on a pinned witness and must keep failing;
//! a silent pass here would mean the weights were quietly relabeled.

use quatflag::flagcomb::EdgeConvention;
use quatflag::gkmring::canonical_class;
use quatflag::{DegreeScale, GkmContext, GkmError, Permutation};

#[test]
fn canonical_classes_exist_under_the_value_pair_labeling() {
    for n in 1..=4usize {
        let ctx = GkmContext::new(n, DegreeScale::Four).unwrap();
        for nu in 1..=n {
            let class = canonical_class(nu, &ctx)
                .unwrap_or_else(|e| panic!("class {nu} at n = {n} rejected: {e}"));
            assert_eq!(class.degree(), Some(1));
        }
    }
}

#[test]
fn position_pair_labeling_rejects_the_coordinate_classes() {
    let ctx = GkmContext::with_convention(3, DegreeScale::Four, EdgeConvention::Right).unwrap();
    let err = canonical_class(1, &ctx).expect_err("naive labeling must fail divisibility");
    let GkmError::NotGkm { violations, .. } = err else {
        panic!("expected a membership failure, got {err}");
    };

    // pinned witness: the edge between [2,3,1] and its position swap
    // [3,2,1] carries weight u1 - u2, but the class difference is u2 - u3
    let a = Permutation::from_one_line(&[2, 3, 1]).unwrap();
    let b = Permutation::from_one_line(&[3, 2, 1]).unwrap();
    let hit = violations.iter().any(|viol| {
        let pair = (&viol.v, &viol.w);
        pair == (&a, &b) || pair == (&b, &a)
    });
    assert!(
        hit,
        "witness edge missing from the violation list: {violations:?}"
    );
}

#[test]
fn conventions_disagree_only_in_labels() {
    // same undirected vertex pairs, different weight pairs somewhere
    let left = GkmContext::with_convention(3, DegreeScale::Four, EdgeConvention::Left).unwrap();
    let right = GkmContext::with_convention(3, DegreeScale::Four, EdgeConvention::Right).unwrap();

    let undirected = |ctx: &GkmContext| {
        let mut pairs: Vec<(usize, usize)> = ctx
            .edges()
            .iter()
            .map(|e| (e.v.min(e.w), e.v.max(e.w)))
            .collect();
        pairs.sort_unstable();
        pairs
    };
    assert_eq!(undirected(&left), undirected(&right));

    let labeled = |ctx: &GkmContext| {
        let mut pairs: Vec<(usize, usize, usize, usize)> = ctx
            .edges()
            .iter()
            .map(|e| (e.v.min(e.w), e.v.max(e.w), e.p, e.q))
            .collect();
        pairs.sort_unstable();
        pairs
    };
    assert_ne!(labeled(&left), labeled(&right));
}
