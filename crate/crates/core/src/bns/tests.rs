use proptest::prelude::*;

use super::*;
use crate::data::G_PHI_2GEN;

fn example() -> (TwoGenPresentation, Trace, SlopeSet) {
    let p = parse_two_gen(G_PHI_2GEN).unwrap();
    let t = trace_polygon(&p).unwrap();
    let s = excluded_directions(&t);
    (p, t, s)
}

fn sorted(mut v: Vec<Vec2>) -> Vec<Vec2> {
    v.sort_unstable();
    v
}

#[test]
fn parses_the_bundled_presentation() {
    let (p, _, _) = example();
    assert_eq!(p.gens, ["b".to_string(), "r".to_string()]);
    assert_eq!(p.render(), "rrrBRbRbrBRbRB");
    assert_eq!(p.reduced_by, 0);
}

#[test]
fn example_polygon() {
    let (_, t, _) = example();
    assert_eq!(t.hull, vec![(0, 0), (1, 0), (1, 2), (0, 3), (-1, 3), (-1, 2)]);
    assert!(t.visits.iter().all(|&v| v == 1));
    // Exactly two unit segments are traversed more than once.
    assert_eq!(t.repeated_segments, vec![((0, 1), (0, 2), 3), ((0, 1), (1, 1), 2)]);
}

#[test]
fn example_excluded_rays() {
    let (_, _, s) = example();
    let want = vec![(1, 0), (-1, 0), (2, 1), (-2, -1), (1, 1), (-1, -1)];
    assert_eq!(sorted(s.rays()), sorted(want));
    assert!(s.indeterminate.is_empty());
    // Sorted counterclockwise.
    assert_eq!(s.rays(), vec![(1, 0), (2, 1), (1, 1), (-1, 0), (-2, -1), (-1, -1)]);
}

#[test]
fn component_of_r_star() {
    let (_, _, s) = example();
    let c = component_containing(&s, (0, 1)).unwrap();
    assert_eq!((c.from, c.to), ((1, 1), (-1, 0)));
    // tb* + r* for t < 1 and nothing else on that line.
    for n in -32..=16 {
        let inside = c.contains((n, 8));
        assert_eq!(inside, n < 8, "t = {n}/8");
    }
    assert!(!c.contains((-1, 0)));
    assert!(!c.contains((0, -1)));
}

#[test]
fn antipodal_component() {
    let (_, _, s) = example();
    let c = component_containing(&s, (0, -1)).unwrap();
    assert_eq!((c.from, c.to), ((-1, -1), (1, 0)));
    assert!(c.contains((-3, -4)));
}

#[test]
fn excluded_covector_is_rejected() {
    let (_, _, s) = example();
    assert_eq!(component_containing(&s, (2, 2)), Err(BnsError::Excluded(2, 2)));
    assert_eq!(component_containing(&s, (0, 0)), Err(BnsError::Zero));
}

#[test]
fn the_lone_axis_line() {
    let (_, _, s) = example();
    let c = component_containing(&s, (0, 1)).unwrap();
    // The skew loop is r − b in the (b, r) basis.
    let line = lone_axis_line(&c, (-1, 1), 6);
    let want: Vec<Vec2> = (0..=5).map(|k| (k, k + 1)).collect();
    assert_eq!(line.classes, want);
    assert_eq!(line.classes[0], (0, 1));
    assert!(line.empty_reason.is_none());
}

#[test]
fn doubled_loop_has_no_solutions() {
    let (_, _, s) = example();
    let c = component_containing(&s, (0, 1)).unwrap();
    let line = lone_axis_line(&c, (-2, 2), 6);
    assert!(line.classes.is_empty());
    assert!(line.empty_reason.is_some());
}

#[test]
fn commutator_excludes_nothing() {
    let p = parse_two_gen("generators: a b\nrelator: abAB").unwrap();
    let t = trace_polygon(&p).unwrap();
    assert_eq!(t.hull, vec![(0, 0), (1, 0), (1, 1), (0, 1)]);
    let s = excluded_directions(&t);
    assert!(s.excluded.is_empty());
    let c = component_containing(&s, (3, -1)).unwrap();
    assert!(c.full && c.contains((-5, 2)));
}

#[test]
fn long_horizontal_edge_is_excluded() {
    let p = parse_two_gen("generators: a b\nrelator: aaabAAAB").unwrap();
    let s = excluded_directions(&trace_polygon(&p).unwrap());
    assert!(s.is_excluded((0, -1)) && s.is_excluded((0, 1)));
    assert!(!s.is_excluded((1, 0)));
    assert!(s.excluded.iter().any(|&(v, why)| v == (0, -1) && why == Exclusion::LongAxisEdge));
}

#[test]
fn doubly_visited_corner_is_indeterminate() {
    // The commutator read twice visits every corner twice.
    let p = parse_two_gen("generators: a b\nrelator: abABabAB").unwrap();
    let t = trace_polygon(&p).unwrap();
    let s = excluded_directions(&t);
    assert!(!s.indeterminate.is_empty());
    assert!(s.indeterminate.iter().all(|i| i.visits == 2));
}

#[test]
fn non_relators_are_rejected() {
    let p = parse_two_gen("generators: a b\nrelator: aaa").unwrap();
    assert_eq!(trace_polygon(&p), Err(BnsError::NotClosed(3, 0)));
    assert_eq!(parse_two_gen("generators: a b\nrelator: abBA").unwrap_err(), BnsError::Trivial);
    assert!(matches!(parse_two_gen("generators: a b\nrelator: abc"), Err(BnsError::Parse { .. })));
    assert!(matches!(parse_two_gen("relator: ab"), Err(BnsError::Parse { .. })));
}

#[test]
fn cyclic_reduction_is_recorded() {
    let p = parse_two_gen("generators: a b\nrelator: b abAB B").unwrap();
    assert_eq!(p.render(), "abAB");
    assert_eq!(p.reduced_by, 2);
}

#[test]
fn tikz_shows_every_ray() {
    let (_, t, s) = example();
    let tikz = trace_tikz(&t, &s);
    assert_eq!(tikz.matches("red, dashed").count(), 6);
}

/// Random balanced words: each generator appears as often inverted as not.
fn balanced_word() -> impl Strategy<Value = Vec<(usize, bool)>> {
    (1usize..6, 1usize..6).prop_flat_map(|(m, n)| {
        let mut letters = Vec::new();
        letters.extend(std::iter::repeat_n((0, false), m));
        letters.extend(std::iter::repeat_n((0, true), m));
        letters.extend(std::iter::repeat_n((1, false), n));
        letters.extend(std::iter::repeat_n((1, true), n));
        Just(letters).prop_shuffle()
    })
}

fn hull_is_convex_and_contains(t: &Trace) -> bool {
    let h = &t.hull;
    let n = h.len();
    if n < 3 {
        return true;
    }
    (0..n).all(|i| {
        let (a, b) = (h[i], h[(i + 1) % n]);
        t.path.iter().all(|&p| cross(a, b, p) >= 0) && cross(a, b, h[(i + 2) % n]) > 0
    })
}

proptest! {
    #[test]
    fn traces_close_and_hulls_are_convex(w in balanced_word()) {
        let gens = ["a".to_string(), "b".to_string()];
        if let Ok(p) = TwoGenPresentation::new(gens, w) {
            let t = trace_polygon(&p).unwrap();
            prop_assert_eq!(t.path.last(), Some(&(0, 0)));
            prop_assert!(hull_is_convex_and_contains(&t));
        }
    }

    #[test]
    fn exclusions_survive_inversion_and_rotation(w in balanced_word(), k in 0usize..20) {
        let gens = ["a".to_string(), "b".to_string()];
        if let Ok(p) = TwoGenPresentation::new(gens, w) {
            let base = sorted(excluded_directions(&trace_polygon(&p).unwrap()).rays());
            let inv = sorted(excluded_directions(&trace_polygon(&p.inverse()).unwrap()).rays());
            let rot = sorted(excluded_directions(&trace_polygon(&p.rotate(k)).unwrap()).rays());
            prop_assert_eq!(&base, &inv);
            prop_assert_eq!(&base, &rot);
            for &(x, y) in &base {
                prop_assert!(base.contains(&(-x, -y)));
            }
        }
    }
}
