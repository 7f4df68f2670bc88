use super::*;
use crate::data::{PHI_BASIS, PHI_F3_MAP};
use crate::exact::q;
use crate::folding::decompose;
use crate::graphcore::text::parse_map_file;
use crate::graphcore::{Graph, GraphMap, OEdge};
use crate::torus::{build_torus, skew_loop, SkewLoop};
use crate::traintrack::Turn;

fn fig1() -> TrapComplex {
    let mf = parse_map_file(PHI_F3_MAP).unwrap();
    build_torus(&decompose(&mf.map).unwrap()).unwrap()
}

fn fig1_h(x: &TrapComplex) -> Homology {
    h1(x).with_named_basis(x, &PHI_BASIS).unwrap()
}

fn fib() -> TrapComplex {
    let g = Graph::rose(&["a".to_string(), "b".to_string()]);
    let f =
        GraphMap::new(g.clone(), g, vec![0], vec![vec![OEdge::fwd(0), OEdge::fwd(1)], vec![OEdge::fwd(0)]]).unwrap();
    build_torus(&decompose(&f).unwrap()).unwrap()
}

/// `z_t` with `δ = 1 − t − 3ε`.
fn z_t(x: &TrapComplex, t: &Q, eps: &Q) -> Cocycle {
    let two = qi(2);
    let delta = qi(1) - t - qi(3) * eps;
    Cocycle::from_named(
        x,
        &[
            ("R_2", &two * eps),
            ("d1", eps.clone()),
            ("d3", eps.clone()),
            ("B_1", &two * eps),
            ("B_2", qi(1) - &two * eps),
            ("R_1", eps.clone()),
            ("R_3", delta.clone()),
            ("K_1", qi(1)),
            ("d4", delta),
            ("d2", eps.clone()),
        ],
    )
    .unwrap()
}

/// Rank over ℚ by plain elimination.
fn rational_rank(m: &[Vec<i64>]) -> usize {
    let mut a: Vec<Vec<Q>> = m.iter().map(|r| r.iter().map(|&v| qi(v)).collect()).collect();
    let cols = a.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..a.len()).find(|&r| !a[r][c].is_zero()) else { continue };
        a.swap(p, rank);
        for r in 0..a.len() {
            if r != rank && !a[r][c].is_zero() {
                let f = &a[r][c] / &a[rank][c];
                for k in 0..cols {
                    let t = &f * &a[rank][k];
                    a[r][k] -= t;
                }
            }
        }
        rank += 1;
    }
    rank
}

#[test]
fn example_homology_has_rank_two() {
    let x = fig1();
    let auto = h1(&x);
    assert!(auto.complex.is_complex());
    assert_eq!(auto.rank, 2);
    assert!(auto.torsion.is_empty());
    let cc = &auto.complex;
    assert_eq!(cc.n1 - rational_rank(&cc.d1) - rational_rank(&cc.d2), 2);
    for z in &auto.cocycles {
        assert!(z.is_cocycle(cc));
    }
    // The time class is dual to the last cycle.
    assert_eq!(auto.class_of(&time_cocycle(&x)), CohomClass::integral(&[0, 1]));
}

#[test]
fn bundled_cycles_form_a_basis() {
    let x = fig1();
    let h = fig1_h(&x);
    assert_eq!(h.names, vec!["b", "r"]);
    for c in &h.cycles {
        assert!(h.complex.is_cycle(c));
    }
    assert_eq!(h.class_of(&time_cocycle(&x)), CohomClass::integral(&[0, 1]));
    for (i, z) in h.cocycles.iter().enumerate() {
        assert!(z.is_cocycle(&h.complex));
        for (j, c) in h.cycles.iter().enumerate() {
            assert_eq!(z.eval(c), qi(i64::from(i == j)));
        }
    }
    // Doubling b is not a basis.
    let mut bad = h.cycles.clone();
    bad[0] = bad[0].iter().map(|v| 2 * v).collect();
    assert!(matches!(h.with_basis(bad, h.names.clone()), Err(CohomologyError::NotABasis { .. })));
}

#[test]
fn skew_loop_is_r_minus_b() {
    let x = fig1();
    let h = fig1_h(&x);
    let SkewLoop::Loop { chain, .. } = skew_loop(&x) else { panic!("skew loop") };
    assert_eq!(h.coordinates(&chain).unwrap(), vec![qi(-1), qi(1)]);
    let r = h.dual(1);
    let b = h.dual(0);
    assert_eq!(evaluate(&h, &r, &chain).unwrap(), qi(1));
    assert_eq!(evaluate(&h, &b, &chain).unwrap(), qi(-1));
    for k in 0..6 {
        let c = CohomClass::integral(&[k, k + 1]);
        assert_eq!(evaluate(&h, &c, &chain).unwrap(), qi(1));
    }
    assert_eq!(evaluate(&h, &r, &vec![0; x.one_cells.len()]).unwrap(), qi(0));
}

#[test]
fn evaluation_ignores_boundaries() {
    let x = fig1();
    let h = fig1_h(&x);
    let c = CohomClass::new(vec![q(3, 2), qi(-2)]);
    for cyc in &h.cycles {
        let base = evaluate(&h, &c, cyc).unwrap();
        for j in 0..h.complex.n2 {
            let moved: Vec<i64> = cyc.iter().zip(h.complex.boundary_of(j)).map(|(a, b)| a + 3 * b).collect();
            assert_eq!(evaluate(&h, &c, &moved).unwrap(), base);
        }
    }
    let mut not_cycle = vec![0; x.one_cells.len()];
    not_cycle[0] = 1;
    assert_eq!(evaluate(&h, &c, &not_cycle), Err(CohomologyError::NotACycle));
}

#[test]
fn positive_cocycles_from_the_family() {
    let x = fig1();
    let h = fig1_h(&x);
    let eps = q(1, 100);
    for t in [qi(-1), q(-1, 2), qi(0), q(1, 2), q(3, 4)] {
        let z = z_t(&x, &t, &eps);
        assert!(z.is_cocycle(&h.complex));
        assert!(z.is_positive(), "t = {t}");
        assert_eq!(h.class_of(&z), CohomClass::new(vec![t.clone(), qi(1)]));
    }
}

#[test]
fn cone_along_the_line_through_r() {
    let x = fig1();
    let h = fig1_h(&x);
    for t in [qi(-1), q(-1, 2), qi(0), q(1, 2), q(3, 4)] {
        let c = CohomClass::new(vec![t.clone(), qi(1)]);
        match cone_membership(&x, &h, &c).unwrap() {
            ConeResult::Inside(w) => {
                assert!(w.cocycle.is_positive());
                assert!(w.cocycle.is_cocycle(&h.complex));
                assert_eq!(h.class_of(&w.cocycle), c);
                // Scaling the class scales the witness.
                let scaled = w.cocycle.scale(&qi(7));
                assert!(scaled.is_positive());
                assert_eq!(h.class_of(&scaled), c.scale(&qi(7)));
            }
            ConeResult::Outside(cert) => panic!("t = {t}: {:?}", cert.cells),
        }
    }
    for t in [1, 2] {
        let c = CohomClass::integral(&[t, 1]);
        let ConeResult::Outside(cert) = cone_membership(&x, &h, &c).unwrap() else { panic!("t = {t} inside") };
        assert!(cert.value <= qi(0));
        let chain =
            (0..x.one_cells.len()).map(|e| cert.cycle.iter().filter(|&&c| c == e).count() as i64).collect::<Vec<_>>();
        assert!(h.complex.is_cycle(&chain));
        for w in cert.cycle.windows(2) {
            assert_eq!(x.one_cells[w[0]].to, x.one_cells[w[1]].from);
        }
        assert_eq!(evaluate(&h, &c, &chain).unwrap(), cert.value);
    }
    let zero = CohomClass::integral(&[0, 0]);
    assert!(!cone_membership(&x, &h, &zero).unwrap().is_inside());
}

#[test]
fn discreteness_cone_of_the_example() {
    let x = fig1();
    let h = fig1_h(&x);
    let eps = q(1, 100);
    let z_r = z_t(&x, &qi(0), &eps);
    let z_b = z_t(&x, &qi(1), &eps).add(&z_r.scale(&qi(-1)));
    assert_eq!(h.class_of(&z_b), CohomClass::integral(&[1, 0]));
    let basis = vec![z_b, z_r];
    let cone = discreteness_cone(&x, 1, &basis, 1, None).unwrap();
    assert_eq!((cone.m, cone.m0, cone.skew_name.as_str()), (5, 2, "d4"));
    assert!(cone.verify(&x).is_empty());
    assert_eq!(cone.generators(), vec![vec![1, 5], vec![-1, 5]]);
    let c = CohomClass::integral(&[1, 6]);
    assert!(cone.contains(&c));
    let z = cone.cocycle_for(&c);
    assert!(z.is_positive());
    assert!(z.values[cone.skew_cell] > qi(3));
    assert!(!cone.contains(&CohomClass::integral(&[1, 5])));
    let m0 = discreteness_cone(&x, 0, &basis, 1, None).unwrap().m;
    let m5 = discreteness_cone(&x, 5, &basis, 1, None).unwrap().m;
    assert!(m0 <= cone.m && cone.m <= m5);
    let bad = vec![basis[1].clone(), basis[0].clone()];
    assert!(matches!(discreteness_cone(&x, 1, &bad, 1, None), Err(CohomologyError::NotPositive { .. })));
}

#[test]
fn fibonacci_torus_has_rank_one() {
    let x = fib();
    let h = h1(&x);
    assert_eq!(h.rank, 1);
    assert_eq!(h.names, vec!["r"]);
    assert_eq!(h.class_of(&time_cocycle(&x)), CohomClass::integral(&[1]));
    let cc = &h.complex;
    assert_eq!(cc.n1 - rational_rank(&cc.d1) - rational_rank(&cc.d2), 1);
}

#[test]
fn time_section_crosses_one_skew_cell() {
    let x = fig1();
    let tau = time_cocycle(&x);
    let b = axis_dim_lower_bound(&x, &tau, &q(1, 8)).unwrap();
    assert_eq!(b.n, 1);
    assert_eq!(b.bound, 0);
    assert!(matches!(axis_dim_lower_bound(&x, &tau, &qi(0)), Err(CohomologyError::DegeneratePhase { .. })));
    let half = tau.scale(&q(1, 2));
    assert_eq!(crossing_counts(&x, &half, &q(1, 8)), Err(CohomologyError::NonIntegralPeriods));
}

#[test]
fn skew_crossings_grow_with_the_discreteness_cone() {
    let x = fig1();
    let eps = q(1, 100);
    let z_r = z_t(&x, &qi(0), &eps);
    let z_b = z_t(&x, &qi(1), &eps).add(&z_r.scale(&qi(-1)));
    let cone = discreteness_cone(&x, 1, &[z_b, z_r], 1, None).unwrap();
    let z = cone.cocycle_for(&CohomClass::integral(&[1, 6]));
    let b = axis_dim_lower_bound(&x, &z, &q(1, 1000)).unwrap();
    assert!(b.bound >= 1, "{b:?}");
}

fn theta() -> (Graph, Vec<f64>) {
    // Two valence-3 vertices joined by three edges.
    let g = Graph::new(vec!["u".into(), "v".into()], vec![("a".into(), 0, 1), ("b".into(), 0, 1), ("c".into(), 0, 1)])
        .unwrap();
    (g, vec![0.5, 0.3, 0.2])
}

#[test]
fn delta_lengths_cases() {
    let (g, l) = theta();
    let at_u = Turn::new(OEdge::fwd(0), OEdge::fwd(1));
    let at_v = Turn::new(OEdge::bwd(1), OEdge::bwd(2));
    assert_eq!(delta_lengths(&g, &l, &[at_u], &[0.0]).unwrap(), l);
    let out = delta_lengths(&g, &l, &[at_u, at_v], &[0.1, 0.2]).unwrap();
    let expect = [(0.5 - 0.1 + 0.2) / 0.7, (0.3 - 0.1 - 0.2) / 0.7, (0.2 + 0.1 - 0.2) / 0.7];
    for (a, b) in out.iter().zip(expect) {
        assert!((a - b).abs() < 1e-12);
    }
    assert!((out.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    assert!(matches!(
        delta_lengths(&g, &l, &[at_u, Turn::new(OEdge::fwd(1), OEdge::fwd(2))], &[0.1, 0.1]),
        Err(CohomologyError::RepeatedVertex { .. })
    ));
    assert_eq!(delta_lengths(&g, &l, &[at_u], &[1.0]), Err(CohomologyError::BadParameters));
}

#[test]
fn delta_lengths_skip_loops() {
    // A loop at u plus an edge to a valence-1 vertex.
    let g = Graph::new(vec!["u".into(), "v".into()], vec![("a".into(), 0, 0), ("e".into(), 0, 1)]).unwrap();
    let l = vec![0.6, 0.4];
    let turn = Turn::new(OEdge::fwd(0), OEdge::fwd(1));
    let out = delta_lengths(&g, &l, &[turn], &[0.2]).unwrap();
    assert!((out[0] - 0.6 / 0.8).abs() < 1e-12);
    assert!((out[1] - 0.2 / 0.8).abs() < 1e-12);
}
