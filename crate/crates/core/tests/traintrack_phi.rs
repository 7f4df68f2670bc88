use loneaxis::data::PHI_F3_MAP;
use loneaxis::graphcore::text::{parse_map_file, parse_word};
use loneaxis::graphcore::{map_to_automorphism, FreeGroupMap, FreeWord};
use loneaxis::traintrack::*;
use num_rational::Rational64;

fn phi_outer() -> FreeGroupMap {
    let gens: Vec<String> = ["a", "b", "c"].iter().map(|s| s.to_string()).collect();
    let images = ["ca", "ab", "Bab"].iter().map(|w| FreeWord::new(&parse_word(w, &gens).unwrap())).collect();
    FreeGroupMap::endo(gens, images)
}

#[test]
fn structure_of_the_example_map() {
    let mf = parse_map_file(PHI_F3_MAP).unwrap();
    let f = &mf.map;
    assert!(is_train_track(f).is_ok());
    assert!(is_irreducible(f));
    assert!(is_expanding(f));
    let g = f.domain();
    let ill: Vec<(String, String)> = illegal_turns(f).iter().map(|t| (g.oedge_name(t.a), g.oedge_name(t.b))).collect();
    assert_eq!(ill, vec![("B".to_string(), "C".to_string())]);
    assert_eq!(periodic_directions(f).len(), 9);
    let iw = ideal_whitehead(f, true).unwrap();
    assert_eq!(iw.sizes(), vec![3, 3, 3]);
    assert!(iw.all_triangles());
    assert_eq!(rotationless_index(&iw), Rational64::new(-3, 2));
}

#[test]
fn verdict_is_yes_with_recorded_assumptions() {
    let f = parse_map_file(PHI_F3_MAP).unwrap().map;
    let r = lone_axis_check(&f, &LoneAxisOptions::default()).unwrap();
    assert_eq!(r.verdict, Verdict::Yes);
    assert_eq!(r.nielsen, NielsenReport::NoneUpTo { max_len: 10, max_period: 6 });
    assert_eq!(r.assumptions.len(), 2);
    assert_eq!(r.index.as_deref(), Some("-3/2"));
}

#[test]
fn verdict_is_inconclusive_without_ageometric_assumption() {
    let f = parse_map_file(PHI_F3_MAP).unwrap().map;
    let opts = LoneAxisOptions { assume_ageometric_fully_irreducible: false, ..Default::default() };
    assert!(matches!(lone_axis_check(&f, &opts).unwrap().verdict, Verdict::Inconclusive(_)));
}

#[test]
fn marking_induces_the_outer_class() {
    let mf = parse_map_file(PHI_F3_MAP).unwrap();
    let auto = map_to_automorphism(mf.marking.as_ref().unwrap(), &mf.map).unwrap();
    assert!(auto.invertibility_verified);
    assert!(auto.map.same_outer_class(&phi_outer(), 20));
}

#[test]
fn eigenmetric_matches_word_growth() {
    let f = parse_map_file(PHI_F3_MAP).unwrap().map;
    let m = eigen_metric(&f).unwrap();
    assert!(m.residual <= EIGEN_TOLERANCE);
    let phi = phi_outer();
    let mut w = FreeWord::generator(0);
    let mut prev = 1;
    for _ in 0..21 {
        prev = w.len();
        w = phi.apply(&w);
    }
    let ratio = w.len() as f64 / prev as f64;
    assert!((m.lambda - ratio).abs() < 1e-3, "{} vs {}", m.lambda, ratio);
}

#[test]
fn fold_sequence_of_the_example_map() {
    use loneaxis::folding::{aux_graph, check_acyclic, decompose, verify};
    let f = parse_map_file(PHI_F3_MAP).unwrap().map;
    let s = decompose(&f).unwrap();
    assert_eq!(s.labels(), vec!["a", "e", "a", "d"]);
    let trace: Vec<(String, String, String, String)> = s.describe();
    let expect =
        [("B", "B", "c_2'", "a"), ("R", "a_4'", "c_1'", "e"), ("B", "a_3'", "B", "a"), ("R", "a_2'", "e", "d")];
    for (got, want) in trace.iter().zip(expect) {
        assert_eq!((got.0.as_str(), got.1.as_str(), got.2.as_str(), got.3.as_str()), want);
    }
    let h: Vec<(String, String)> = s.h.describe();
    let h: Vec<(&str, &str)> = h.iter().map(|(x, y)| (x.as_str(), y.as_str())).collect();
    assert_eq!(h, vec![("a_1", "c"), ("a_2", "d"), ("a_3", "a"), ("a_4", "e"), ("d", "b")]);
    assert!(verify(&s, &f));
    assert!(check_acyclic(&aux_graph(&f)).is_acyclic());
    assert_eq!(s.levels[0].graph.num_edges() - f.domain().num_edges(), 4);
}
