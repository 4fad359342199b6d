mod common;

use common::*;
use linkforge::compose::{close, hashizume_sum, ClosurePattern};
use linkforge::invariants::{conway, jones};
use linkforge::laurent::{ConwayPoly, HalfLaurent};
use linkforge::Diagram;

fn braid_words() -> Vec<(usize, Vec<i32>)> {
    vec![
        (2, vec![1, 1, 1]),
        (2, vec![1, 1, 1, 1, 1]),
        (2, vec![-1, -1, -1]),
        (3, vec![1, -2, 1, -2]),
        (3, vec![1, 1, 2, -1, 2]),
        (3, vec![1, 2, 1, 2, -1, -2, 2]),
        (3, vec![1, 1, 1, 2, -1, 2]),
        (4, vec![1, -2, 3, -2, 1, 3]),
        (4, vec![1, 2, 3, -1, 2, -3, 2]),
        (3, vec![1, 2]),
        (2, vec![1, 1]),
        (3, vec![1, 1, 2, 2]),
    ]
}

fn sample_diagrams() -> Vec<Diagram> {
    let mut v: Vec<Diagram> = knot_fixtures().into_iter().map(|(_, d)| d).collect();
    v.extend(braid_words().into_iter().map(|(m, w)| braid_closure(m, &w)));
    v.push(Diagram::unlink(3));
    v
}

#[test]
fn bracket_state_sum_agrees() {
    for d in sample_diagrams() {
        assert_eq!(jones(&d).unwrap(), oracle_jones(&d), "{}", d.to_pd_text());
    }
}

#[test]
fn jones_skein_relation() {
    // t^-1 V(L+) - t V(L-) = (t^1/2 - t^-1/2) V(L0)
    let s = hl("t^1/2 - t^-1/2");
    for d in sample_diagrams() {
        for k in 0..d.crossing_count() {
            let x = d.crossings()[k];
            let switched = with_switched(&d, k);
            let (plus, minus) = if x.positive { (&d, &switched) } else { (&switched, &d) };
            let lhs = &(&HalfLaurent::monomial(-2, 1) * &jones(plus).unwrap())
                - &(&HalfLaurent::monomial(2, 1) * &jones(minus).unwrap());
            let rhs = &s * &jones(&with_smoothed(&d, k)).unwrap();
            assert_eq!(lhs, rhs, "{} at {k}", d.to_pd_text());
        }
    }
}

#[test]
fn conway_skein_relation() {
    let z = ConwayPoly::from_terms([(1, 1)]);
    for d in sample_diagrams() {
        for k in 0..d.crossing_count() {
            let x = d.crossings()[k];
            let switched = with_switched(&d, k);
            let (plus, minus) = if x.positive { (&d, &switched) } else { (&switched, &d) };
            let lhs = &conway(plus).unwrap().0 - &conway(minus).unwrap().0;
            let rhs = &z.0 * &conway(&with_smoothed(&d, k)).unwrap().0;
            assert_eq!(lhs, rhs, "{} at {k}", d.to_pd_text());
        }
    }
}

#[test]
fn fox_calculus_agrees_with_conway_on_knots() {
    let mut knots: Vec<Diagram> = sample_diagrams().into_iter().filter(|d| d.component_count() == 1).collect();
    let t = pd(TREFOIL);
    let f = pd(FIGURE_EIGHT);
    knots.push(hashizume_sum(&t, 0, &f, 0, None, None).unwrap());
    knots.push(hashizume_sum(&t, 0, &t.mirror(), 0, None, None).unwrap());
    assert!(knots.len() >= 8);
    for d in knots {
        let fox = normalize(&oracle_alexander(&d));
        let ours = normalize(&conway_to_alexander(&conway(&d).unwrap()));
        assert_eq!(fox, ours, "{}", d.to_pd_text());
    }
    assert_eq!(normalize(&oracle_alexander(&pd(TREFOIL))), linkforge::Laurent::from_terms([(0, 1), (1, -1), (2, 1)]));
}

#[test]
fn braid_closure_matches_library_closure() {
    // pure braids can be closed through the tangle API as well
    for (m, w) in [(2, vec![1, 1]), (3, vec![1, 1, 2, 2]), (3, vec![1, 2, 1, 1, 2, 1]), (2, vec![1, -1, 1, 1])] {
        let t = linkforge::compose::braid(m, &w).unwrap();
        let d = close(&t, &ClosurePattern::identity()).unwrap();
        assert_eq!(jones(&d).unwrap(), jones(&braid_closure(m, &w)).unwrap(), "{w:?}");
    }
}
