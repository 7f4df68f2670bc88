use super::*;
use crate::cohomology::time_cocycle;
use crate::data::PHI_F3_MAP;
use crate::exact::q;
use crate::folding::decompose;
use crate::graphcore::text::parse_map_file;
use crate::graphcore::{map_to_automorphism, FreeGroupMap, FreeWord, OEdge, SpanningTree};
use crate::torus::build_torus;

fn fig1() -> TrapComplex {
    let mf = parse_map_file(PHI_F3_MAP).unwrap();
    build_torus(&decompose(&mf.map).unwrap()).unwrap()
}

/// `(k+1) z_t` at `t = k/(k+1)`.
fn theta_cocycle(x: &TrapComplex, k: i64, eps: &Q) -> Cocycle {
    crate::data::phi_cocycle(x, &q(k, k + 1), eps).unwrap().scale(&qi(k + 1))
}

fn word(s: &str, names: &[&str]) -> FreeWord {
    let letters: Vec<OEdge> = s
        .split_whitespace()
        .map(|t| {
            let (name, rev) = match t.strip_suffix('\'') {
                Some(n) => (n, true),
                None => (t, false),
            };
            let g = names.iter().position(|&n| n == name).expect("generator");
            OEdge { edge: g, rev }
        })
        .collect();
    FreeWord::new(&letters)
}

/// The automorphism read off the edge table by hand.
fn expected_theta_k(k: usize) -> FreeGroupMap {
    let n = k + 1;
    let mut gens = vec!["s1".to_string(), "s2".to_string()];
    gens.extend((1..=n).map(|i| format!("t{i}")));
    let names: Vec<&str> = gens.iter().map(String::as_str).collect();
    let mut images = vec![word("t1", &names), word("s2 t1", &names)];
    for i in 1..=k {
        images.push(word(&format!("t{}", i + 1), &names));
    }
    images.push(word("s2 s1 t1 s2'", &names));
    FreeGroupMap::endo(gens.clone(), images)
}

fn phi() -> FreeGroupMap {
    let names = ["a", "b", "c"];
    let gens: Vec<String> = names.iter().map(|s| s.to_string()).collect();
    FreeGroupMap::endo(gens, vec![word("c a", &names), word("a b", &names), word("b' a b", &names)])
}

fn theta_section(x: &TrapComplex, k: i64) -> (SectionGraph, FirstReturn) {
    let z = theta_cocycle(x, k, &q(1, 100));
    let y = midpoint_phase(x, &z, x.find_cell("d1").unwrap()).unwrap();
    let s = build_section(x, &z, Some(y)).unwrap();
    let fr = first_return(x, &s).unwrap();
    (s, fr)
}

#[test]
fn map_file_marking_gives_phi() {
    let mf = parse_map_file(PHI_F3_MAP).unwrap();
    let got = map_to_automorphism(mf.marking.as_ref().unwrap(), &mf.map).unwrap();
    assert!(got.map.same_outer_class(&phi(), 20), "{}", got.map);
    assert!(got.invertibility_verified);
}

#[test]
fn theta_sections_match_the_edge_tables() {
    let x = fig1();
    for k in 1..=5usize {
        let (s, fr) = theta_section(&x, k as i64);
        assert_eq!(s.num_components(), 1);
        assert_eq!(s.rank(), k + 3);
        assert_eq!(s.graph.num_edges(), 4 * k + 7);
        assert_eq!(s.graph.num_vertices(), 3 * k + 5);
        let r = theta_k_reference(k);
        let m = match_reference(&s, &fr, &r).unwrap();
        let mono = monodromy_with(&m, &r).unwrap();
        assert!(mono.verified_invertible);
        assert_eq!(mono.automorphism, expected_theta_k(k), "k = {k}");
        let audit = section_audit(&x, &s, &fr);
        assert_eq!(audit.skew_crossings, 1);
        assert!(audit.train_track && audit.irreducible && audit.expanding);
    }
}

#[test]
fn collapsed_table_of_theta_two() {
    let x = fig1();
    let (s, fr) = theta_section(&x, 2);
    let r = theta_k_reference(2);
    let m = match_reference(&s, &fr, &r).unwrap();
    let tree = SpanningTree::from_edges(&m.graph, m.marking.basepoint, r.tree.as_ref().unwrap()).unwrap();
    let rows = first_return_table(&m.map, &tree).unwrap();
    let get = |e: &str| rows.iter().find(|row| row.edge == e).unwrap();
    assert_eq!(get("e1").image, "e3_1");
    assert_eq!(get("e2_3").image, "e4_1'");
    assert_eq!(get("e3_3").collapsed, "t1");
    assert_eq!(get("e4_3").collapsed, "s2");
    assert_eq!(get("s1").collapsed, "t1");
    assert_eq!(get("t2").collapsed, "t3");
    assert_eq!(get("t3").collapsed, "s1");
    assert_eq!(get("e2_1").collapsed, "1");
}

#[test]
fn r_star_section_recovers_phi() {
    let x = fig1();
    let (s, fr) = theta_section(&x, 0);
    assert_eq!((s.num_components(), s.rank()), (1, 3));
    let r = theta_k_reference(0);
    let m = match_reference(&s, &fr, &r).unwrap();
    let mono = monodromy_with(&m, &r).unwrap();
    // s1, s2, t1 play the roles of c, b, a.
    let to_abc = [2, 1, 0];
    let images: Vec<FreeWord> = [2, 1, 0]
        .iter()
        .map(|&g| {
            let w = &mono.automorphism.images[g];
            let letters: Vec<OEdge> = w.letters().iter().map(|l| OEdge { edge: to_abc[l.edge], rev: l.rev }).collect();
            FreeWord::new(&letters)
        })
        .collect();
    let psi = FreeGroupMap::endo(vec!["a".into(), "b".into(), "c".into()], images);
    assert!(psi.same_outer_class(&phi(), 20), "{psi}");
}

#[test]
fn time_cocycle_section_is_the_r_star_section() {
    let x = fig1();
    let z = time_cocycle(&x);
    let s = build_section(&x, &z, None).unwrap();
    let fr = first_return(&x, &s).unwrap();
    let m = match_reference(&s, &fr, &theta_k_reference(0)).unwrap();
    assert_eq!(m.graph.num_edges(), 7);
}

#[test]
fn doubled_class_gives_two_components() {
    let x = fig1();
    let z = theta_cocycle(&x, 0, &q(1, 100)).scale(&qi(2));
    let s = build_section(&x, &z, None).unwrap();
    assert_eq!(s.num_components(), 2);
    let fr = first_return(&x, &s).unwrap();
    assert_eq!(s.rank(), 6);
    assert_eq!(fr.map.domain().num_edges(), s.graph.num_edges());
    assert!(matches!(monodromy(&s, &fr), Err(SectionError::Disconnected(2))));
}

#[test]
fn fibonacci_section_is_a_rose() {
    let g = Graph::rose(&["a".to_string(), "b".to_string()]);
    let f =
        GraphMap::new(g.clone(), g, vec![0], vec![vec![OEdge::fwd(0), OEdge::fwd(1)], vec![OEdge::fwd(0)]]).unwrap();
    let x = build_torus(&decompose(&f).unwrap()).unwrap();
    let s = build_section(&x, &time_cocycle(&x), None).unwrap();
    let fr = first_return(&x, &s).unwrap();
    assert_eq!(s.rank(), 2);
    let mono = monodromy(&s, &fr).unwrap();
    assert_eq!(mono.automorphism.rank(), 2);
}

#[test]
fn non_positive_cocycles_are_refused() {
    let x = fig1();
    let z = Cocycle::zero(x.one_cells.len());
    assert!(matches!(build_section(&x, &z, None), Err(SectionError::NotPositive(_))));
}

#[test]
fn dot_output_marks_the_basepoint() {
    let x = fig1();
    let (s, _) = theta_section(&x, 1);
    let dot = section_dot(&x, &s);
    assert!(dot.contains("penwidth=3"));
    assert_eq!(dot.matches(" -> ").count(), 11);
}

#[test]
fn germ_audit_agrees_with_the_first_return() {
    let x = fig1();
    for k in 0..=3 {
        let (s, fr) = theta_section(&x, k);
        let germs = skew_germ_audit(&x, &s).unwrap();
        let full = section_audit(&x, &s, &fr);
        assert_eq!(germs.skew_crossings, full.skew_crossings);
        assert_eq!(germs.illegal_valence3, full.skew_valence3_illegal);
    }
}

#[test]
fn discreteness_cone_classes_fold_every_skew_crossing() {
    use crate::cohomology::{discreteness_cone, CohomClass};
    let x = fig1();
    let eps = q(1, 100);
    let z_r = theta_cocycle(&x, 0, &eps);
    let z_b = theta_cocycle(&x, 1, &eps).add(&z_r.scale(&qi(-2)));
    let cone = discreteness_cone(&x, 1, &[z_b, z_r], 1, None).unwrap();
    for (p, r) in [(1, 6), (-1, 6), (2, 11), (-3, 16), (7, 36)] {
        let c = CohomClass::integral(&[p, r]);
        assert!(cone.contains(&c));
        let s = build_coarse_section(&x, &cone.cocycle_for(&c), None).unwrap();
        assert_eq!(s.num_components(), 1);
        let a = skew_germ_audit(&x, &s).unwrap();
        assert!(a.skew_crossings >= 3, "({p}, {r}): {a:?}");
        assert_eq!(a.illegal_valence3, a.skew_crossings);
        assert!(a.bound >= 1);
    }
}
