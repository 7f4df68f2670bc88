//! Property tests over generated train track maps, random edge paths and
//! random coboundary shifts.

mod common;

use proptest::prelude::*;

use common::*;
use loneaxis::cohomology::{cone_membership, evaluate, CohomClass};
use loneaxis::exact::qi;
use loneaxis::folding::{aux_graph, check_acyclic, decompose, verify};
use loneaxis::graphcore::{compose, EdgePath};
use loneaxis::torus::build_torus;
use loneaxis::traintrack::{direction_map, eigen_metric, illegal_turns, mat_mul, transition_matrix, EIGEN_TOLERANCE};

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, max_global_rejects: 4096, ..ProptestConfig::default() })]

    #[test]
    fn decompose_then_verify_round_trips(f in tt_map()) {
        let s = decompose(&f).unwrap();
        prop_assert!(verify(&s, &f));
        prop_assert_eq!(s.num_folds(), s.levels[0].graph.num_edges() - f.domain().num_edges());
        for fold in &s.folds {
            prop_assert_eq!(fold.quotient.domain().num_edges(), fold.quotient.codomain().num_edges() + 1);
        }
    }

    #[test]
    fn aux_graph_is_acyclic(f in tt_map()) {
        prop_assert!(check_acyclic(&aux_graph(&f)).is_acyclic());
    }

    #[test]
    fn skew_cells_count_the_folds(f in tt_map()) {
        let s = decompose(&f).unwrap();
        let x = build_torus(&s).unwrap();
        prop_assert_eq!(x.skew_cells().len(), s.num_folds());
        prop_assert_eq!(x.euler_characteristic(), 0);
    }

    #[test]
    fn transition_matrix_is_multiplicative((f, g) in tt_pair()) {
        let fg = compose(&f, &g).unwrap();
        prop_assert_eq!(transition_matrix(&fg), mat_mul(&transition_matrix(&g), &transition_matrix(&f)));
    }

    #[test]
    fn transition_matrix_of_powers(f in tt_map(), n in 1usize..=5) {
        let a = transition_matrix(&f);
        let mut fn_ = f.clone();
        let mut an = a.clone();
        for _ in 1..n {
            fn_ = compose(&f, &fn_).unwrap();
            an = mat_mul(&an, &a);
        }
        prop_assert_eq!(transition_matrix(&fn_), an);
    }

    #[test]
    fn eigen_metric_is_certified(f in tt_map()) {
        let m = eigen_metric(&f).unwrap();
        prop_assert!(m.residual <= EIGEN_TOLERANCE);
        prop_assert!(m.lambda > 1.0);
        prop_assert!(m.lengths.iter().all(|&l| l > 0.0));
        prop_assert!((m.lengths.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn illegal_turns_are_closed_under_df(f in tt_map()) {
        let df = direction_map(&f);
        let ill = illegal_turns(&f);
        for t in &ill {
            let im = t.image(&df);
            prop_assert!(im.is_degenerate() || ill.contains(&im));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 2000, ..ProptestConfig::default() })]

    #[test]
    fn tighten_laws((p, r) in walk_pair(phi_map().domain().clone())) {
        let t = p.tighten();
        prop_assert!(t.is_tight());
        prop_assert_eq!(t.tighten(), t.clone());
        prop_assert!(t.len() <= p.len());
        prop_assert_eq!((t.start(), t.end()), (p.start(), p.end()));
        prop_assert_eq!(p.reversed().reversed(), p.clone());
        prop_assert_eq!(p.reversed().tighten(), t.reversed());
        let pr = p.concat(&r).unwrap();
        prop_assert_eq!(pr.tighten(), t.concat(&r.tighten()).unwrap().tighten());
        prop_assert_eq!(p.concat(&p.reversed()).unwrap().tighten(), EdgePath::trivial(p.start()));
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, ..ProptestConfig::default() })]

    #[test]
    fn coboundary_shifts_keep_the_class(num in -8i64..8, phi in zero_cochain(phi_torus().0.zero_cells.len())) {
        let (x, h) = phi_torus();
        let z = example_cocycle(&x, num, 8);
        let w = z.shift(&x, &phi);
        prop_assert!(w.is_cocycle(&h.complex));
        let c = h.class_of(&z);
        prop_assert_eq!(h.class_of(&w), c.clone());
        for cyc in &h.cycles {
            prop_assert_eq!(w.eval(cyc), z.eval(cyc));
            prop_assert_eq!(evaluate(&h, &c, cyc).unwrap(), z.eval(cyc));
        }
    }

    #[test]
    fn cone_membership_is_projective(b in -6i64..=6, r in -6i64..=6, k in 1i64..=9) {
        let (x, h) = phi_torus();
        let c = CohomClass::integral(&[b, r]);
        prop_assume!(!c.is_zero());
        let one = cone_membership(&x, &h, &c).unwrap();
        let scaled = cone_membership(&x, &h, &c.scale(&qi(k))).unwrap();
        prop_assert_eq!(one.is_inside(), scaled.is_inside());
        if let loneaxis::cohomology::ConeResult::Inside(w) = one {
            let z = w.cocycle.scale(&qi(k));
            prop_assert!(z.is_positive() && z.is_cocycle(&h.complex));
            prop_assert_eq!(h.class_of(&z), c.scale(&qi(k)));
        }
    }
}
