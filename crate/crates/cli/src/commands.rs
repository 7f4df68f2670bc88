//! Subcommand implementations. Each returns the process exit code or a
//! [`CliError`] carrying one.

use std::fs;
use std::io::Write;
use std::path::Path;

use serde_json::{json, Value};

use loneaxis::bns::{
    component_containing, excluded_directions, lone_axis_line, parse_two_gen, trace_polygon, trace_tikz,
    TwoGenPresentation, Vec2,
};
use loneaxis::cohomology::{cone_membership, h1, Cocycle, CohomClass, ConeResult, Homology};
use loneaxis::data::{phi_cocycle, phi_epsilon, G_PHI_2GEN, PHI_BASIS, PHI_F3_MAP};
use loneaxis::exact::{parse, qi, render, Q};
use loneaxis::folding::{decompose, FoldSequence};
use loneaxis::graphcore::text::{parse_map_file, MapFile};
use loneaxis::graphcore::SpanningTree;
use loneaxis::section::{
    build_coarse_section, build_section, first_return, first_return_table, match_reference,
    monodromy as section_monodromy, monodromy_with, section_audit, section_dot, skew_germ_audit, theta_k_reference,
    FirstReturn, Monodromy, SectionGraph, TableRow,
};
use loneaxis::torus::{build_torus, skew_loop, SkewLoop, TrapComplex};
use loneaxis::traintrack::{
    eigen_metric, ideal_whitehead, illegal_turns, is_expanding, is_irreducible, is_train_track, lone_axis_check,
    LoneAxisOptions, Verdict,
};

use crate::{Common, Format, NielsenArgs};

pub const EXIT_YES: u8 = 0;
pub const EXIT_NO: u8 = 1;
pub const EXIT_INCONCLUSIVE: u8 = 2;
pub const EXIT_PARSE: u8 = 64;
pub const EXIT_INVARIANT: u8 = 65;

#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

fn parse_error(msg: impl Into<String>) -> CliError {
    CliError { code: EXIT_PARSE, message: msg.into() }
}

fn invariant(msg: impl Into<String>) -> CliError {
    CliError { code: EXIT_INVARIANT, message: msg.into() }
}

type Result<T> = std::result::Result<T, CliError>;

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| parse_error(format!("cannot read {}: {e}", path.display())))
}

/// Write to `DIR/stem.ext`, or print.
fn emit(common: &Common, stem: &str, text: &str) -> Result<()> {
    let ext = match common.format {
        Format::Json => "json",
        Format::Dot => "dot",
        Format::Tikz => "tex",
    };
    match &common.out {
        Some(dir) => {
            fs::create_dir_all(dir).map_err(|e| invariant(format!("cannot create {}: {e}", dir.display())))?;
            let path = dir.join(format!("{stem}.{ext}"));
            fs::write(&path, text).map_err(|e| invariant(format!("cannot write {}: {e}", path.display())))
        }
        None => {
            let mut out = std::io::stdout().lock();
            let nl = if text.ends_with('\n') { "" } else { "\n" };
            match write!(out, "{text}{nl}") {
                Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(invariant(e.to_string())),
                _ => Ok(()),
            }
        }
    }
}

fn emit_json(common: &Common, stem: &str, v: &Value) -> Result<()> {
    let text = serde_json::to_string_pretty(v).map_err(|e| invariant(e.to_string()))?;
    emit(common, stem, &text)
}

fn unsupported(what: &str, f: Format) -> CliError {
    parse_error(format!("{what} has no {f:?} output"))
}

struct Input {
    map: MapFile,
    bundled: bool,
}

fn load_map(common: &Common) -> Result<Input> {
    let (text, bundled) = match &common.input {
        Some(p) => {
            let t = read(p)?;
            let same = t.trim() == PHI_F3_MAP.trim();
            (t, same)
        }
        None => (PHI_F3_MAP.to_string(), true),
    };
    let map = parse_map_file(&text).map_err(|e| parse_error(e.to_string()))?;
    Ok(Input { map, bundled })
}

/// The folded mapping torus of the input with its cohomology basis.
struct Setup {
    input: Input,
    seq: FoldSequence,
    x: TrapComplex,
    h: Homology,
}

fn setup(common: &Common) -> Result<Setup> {
    let input = load_map(common)?;
    let seq = decompose(&input.map.map).map_err(|e| invariant(format!("fold decomposition failed: {e}")))?;
    let x = build_torus(&seq).map_err(|e| invariant(format!("mapping torus failed: {e}")))?;
    let mut h = h1(&x);
    if input.bundled {
        h = h.with_named_basis(&x, &PHI_BASIS).map_err(|e| invariant(e.to_string()))?;
    }
    Ok(Setup { input, seq, x, h })
}

fn parse_ints(s: &str) -> Result<Vec<i64>> {
    s.split(',')
        .map(|t| t.trim().parse::<i64>().map_err(|_| parse_error(format!("bad integer '{t}' in '{s}'"))))
        .collect()
}

fn parse_pair(s: &str) -> Result<Vec2> {
    match parse_ints(s)?.as_slice() {
        &[a, b] => Ok((a, b)),
        _ => Err(parse_error(format!("expected two coordinates, got '{s}'"))),
    }
}

fn parse_class(s: &str, h: &Homology) -> Result<CohomClass> {
    let v = parse_ints(s)?;
    if v.len() != h.rank {
        return Err(parse_error(format!(
            "class needs {} coordinates ({}), got {}",
            h.rank,
            h.names.join(","),
            v.len()
        )));
    }
    Ok(CohomClass::integral(&v))
}

fn parse_phase(s: Option<&str>) -> Result<Option<Q>> {
    s.map(|t| parse(t).ok_or_else(|| parse_error(format!("bad phase '{t}'")))).transpose()
}

fn class_json(c: &CohomClass, h: &Homology) -> Value {
    json!({
        "coords": c.coords.iter().map(render).collect::<Vec<_>>(),
        "rendered": c.render(&h.names),
    })
}

/// The example's cocycle family when it is positive for the class, and a
/// cone witness otherwise.
fn cocycle_for(s: &Setup, c: &CohomClass) -> Result<Cocycle> {
    if s.input.bundled {
        let eps = phi_epsilon();
        let z0 = phi_cocycle(&s.x, &qi(0), &eps).ok_or_else(|| invariant("example cells missing"))?;
        let z1 = phi_cocycle(&s.x, &qi(1), &eps).ok_or_else(|| invariant("example cells missing"))?;
        let zb = z1.add(&z0.scale(&qi(-1)));
        let (b, r) = (&c.coords[0], &c.coords[1]);
        let z = zb.scale(b).add(&z0.scale(r));
        if z.is_positive() {
            return Ok(z);
        }
    }
    match cone_membership(&s.x, &s.h, c).map_err(|e| invariant(e.to_string()))? {
        ConeResult::Inside(w) => Ok(w.cocycle),
        ConeResult::Outside(cert) => Err(invariant(format!(
            "class is outside the positive cone: it takes value {} on the directed cycle {}",
            render(&cert.value),
            cert.cells.join(" ")
        ))),
    }
}

pub fn traintrack(common: &Common, nielsen: &NielsenArgs) -> Result<u8> {
    let input = load_map(common)?;
    let f = &input.map.map;
    let tt = is_train_track(f);
    let irreducible = is_irreducible(f);
    let expanding = is_expanding(f);
    let certified = tt.is_ok() && irreducible && expanding;
    let g = f.domain();
    let mut report = json!({
        "train_track": tt.is_ok(),
        "irreducible": irreducible,
        "expanding": expanding,
        "illegal_turns": illegal_turns(f).iter().map(|t| [g.oedge_name(t.a), g.oedge_name(t.b)]).collect::<Vec<_>>(),
    });
    if let Err(w) = &tt {
        report["train_track_witness"] = json!(format!("{w:?}"));
    }
    if !certified {
        if common.format == Format::Json {
            emit_json(common, "traintrack", &report)?;
        }
        return Err(invariant("input is not an expanding irreducible train track map"));
    }
    let eig = eigen_metric(f).map_err(|e| invariant(e.to_string()))?;
    report["lambda"] = json!(eig.lambda);
    report["eigen_residual"] = json!(eig.residual);
    report["lengths"] = json!(eig.lengths);
    let seq = decompose(f).map_err(|e| invariant(format!("fold decomposition failed: {e}")))?;
    report["folds"] = json!(seq.labels());
    let opts = LoneAxisOptions {
        nielsen_len: nielsen.nielsen_len,
        nielsen_period: nielsen.nielsen_period,
        ..LoneAxisOptions::default()
    };
    let lone = lone_axis_check(f, &opts).map_err(|e| invariant(e.to_string()))?;
    let code = match &lone.verdict {
        Verdict::Yes => EXIT_YES,
        Verdict::No(_) => EXIT_NO,
        Verdict::Inconclusive(_) => EXIT_INCONCLUSIVE,
    };
    match common.format {
        Format::Json => {
            report["lone_axis"] = serde_json::to_value(&lone).map_err(|e| invariant(e.to_string()))?;
            emit_json(common, "traintrack", &report)?;
        }
        Format::Dot => {
            let iw = ideal_whitehead(f, lone.nielsen.none_found()).map_err(|e| invariant(e.to_string()))?;
            emit(common, "iw", &iw.to_dot())?;
        }
        Format::Tikz => {
            let x = build_torus(&seq).map_err(|e| invariant(e.to_string()))?;
            emit(common, "torus", &x.to_tikz())?;
        }
    }
    Ok(code)
}

/// A section matched to the bundled edge table when the class lies on the
/// example's lone-axis line.
struct Traced {
    s: SectionGraph,
    fr: FirstReturn,
    table: Vec<TableRow>,
    reference: Option<String>,
    mono: Option<Monodromy>,
}

fn line_index(s: &Setup, c: &CohomClass) -> Option<usize> {
    if !s.input.bundled || !c.is_integral() {
        return None;
    }
    let (b, r) = (c.coords[0].to_integer(), c.coords[1].to_integer());
    let k = usize::try_from(b.clone()).ok()?;
    (r == b + 1).then_some(k)
}

fn trace(s: &Setup, c: &CohomClass, phase: Option<Q>) -> Result<Traced> {
    let z = cocycle_for(s, c)?;
    let sec = build_section(&s.x, &z, phase).map_err(|e| invariant(e.to_string()))?;
    let fr = first_return(&s.x, &sec).map_err(|e| invariant(e.to_string()))?;
    if sec.num_components() != 1 {
        return Ok(Traced { s: sec, fr, table: Vec::new(), reference: None, mono: None });
    }
    if let Some(k) = line_index(s, c) {
        let r = theta_k_reference(k);
        if let Ok(m) = match_reference(&sec, &fr, &r) {
            let edges = r.tree.as_ref().expect("the table fixes its tree");
            let tree =
                SpanningTree::from_edges(&m.graph, m.marking.basepoint, edges).map_err(|e| invariant(e.to_string()))?;
            let table = first_return_table(&m.map, &tree).map_err(|e| invariant(e.to_string()))?;
            let mono = monodromy_with(&m, &r).map_err(|e| invariant(e.to_string()))?;
            return Ok(Traced { s: sec, fr, table, reference: Some(format!("theta_{k}")), mono: Some(mono) });
        }
    }
    let tree = SpanningTree::bfs_from(&sec.graph, sec.basepoint).map_err(|e| invariant(e.to_string()))?;
    let table = first_return_table(&fr.map, &tree).map_err(|e| invariant(e.to_string()))?;
    let mono = section_monodromy(&sec, &fr).map_err(|e| invariant(e.to_string()))?;
    Ok(Traced { s: sec, fr, table, reference: None, mono: Some(mono) })
}

fn disconnected(common: &Common, stem: &str, c: &CohomClass, h: &Homology, n: usize) -> Result<u8> {
    let report = json!({
        "class": class_json(c, h),
        "components": n,
        "primitive": c.is_primitive(),
        "message": format!("section has {n} components; the class is not primitive"),
    });
    if common.format == Format::Json {
        emit_json(common, stem, &report)?;
    }
    eprintln!("section has {n} components; the class is not primitive");
    Ok(EXIT_NO)
}

pub fn section(common: &Common, class: &str, phase: Option<&str>) -> Result<u8> {
    let s = setup(common)?;
    let c = parse_class(class, &s.h)?;
    let t = trace(&s, &c, parse_phase(phase)?)?;
    let n = t.s.num_components();
    if n != 1 {
        return disconnected(common, "section", &c, &s.h, n);
    }
    match common.format {
        Format::Json => {
            let audit = section_audit(&s.x, &t.s, &t.fr);
            let report = json!({
                "class": class_json(&c, &s.h),
                "phase": render(&t.s.phase),
                "cocycle": s.x.one_cells.iter().zip(&t.s.cocycle.values).map(|(cell, v)| (cell.name.clone(), Value::from(render(v)))).collect::<serde_json::Map<_, _>>(),
                "vertices": t.s.vertices.iter().map(|v| json!({"name": v.name, "kind": v.kind, "host": v.host})).collect::<Vec<_>>(),
                "edges": t.s.edges.iter().map(|e| json!({
                    "name": e.name,
                    "from": t.s.vertices[e.from].name,
                    "to": t.s.vertices[e.to].name,
                    "two_cell": s.x.two_cells[e.two_cell].name,
                })).collect::<Vec<_>>(),
                "rank": t.s.rank(),
                "reference": t.reference,
                "first_return": t.table,
                "audit": audit,
            });
            emit_json(common, "section", &report)?;
        }
        Format::Dot => emit(common, "section", &section_dot(&s.x, &t.s))?,
        Format::Tikz => return Err(unsupported("section", common.format)),
    }
    Ok(EXIT_YES)
}

fn monodromy_json(c: &CohomClass, h: &Homology, t: &Traced) -> Value {
    let m = t.mono.as_ref().expect("connected sections have a monodromy");
    json!({
        "class": class_json(c, h),
        "reference": t.reference,
        "rank": m.automorphism.rank(),
        "automorphism": m.automorphism.render().into_iter().map(|(g, w)| json!([g, w])).collect::<Vec<_>>(),
        "basepoint": m.basepoint,
        "tree_edges": m.tree_edges,
        "invertibility_verified": m.verified_invertible,
    })
}

pub fn monodromy(common: &Common, class: &str, phase: Option<&str>) -> Result<u8> {
    let s = setup(common)?;
    let c = parse_class(class, &s.h)?;
    let t = trace(&s, &c, parse_phase(phase)?)?;
    let n = t.s.num_components();
    if n != 1 {
        return disconnected(common, "monodromy", &c, &s.h, n);
    }
    if common.format != Format::Json {
        return Err(unsupported("monodromy", common.format));
    }
    emit_json(common, "monodromy", &monodromy_json(&c, &s.h, &t))?;
    Ok(EXIT_YES)
}

fn load_presentation(path: Option<&Path>, bundled: bool) -> Result<Option<TwoGenPresentation>> {
    let text = match (path, bundled) {
        (Some(p), _) => read(p)?,
        (None, true) => G_PHI_2GEN.to_string(),
        (None, false) => return Ok(None),
    };
    parse_two_gen(&text).map(Some).map_err(|e| parse_error(e.to_string()))
}

/// Coordinates of the skew loop in the homology basis, when the skew cells
/// close up and the coordinates are integral.
fn skew_loop_class(s: &Setup) -> Option<Vec<i64>> {
    let SkewLoop::Loop { chain, .. } = skew_loop(&s.x) else { return None };
    let coords = s.h.coordinates(&chain).ok()?;
    coords.iter().map(|q| q.is_integer().then(|| i64::try_from(q.to_integer()).ok()).flatten()).collect()
}

fn all_classes(rank: usize, height: i64) -> Vec<Vec<i64>> {
    let mut out = vec![Vec::new()];
    for _ in 0..rank {
        out = out
            .into_iter()
            .flat_map(|v| {
                (-height..=height).map(move |a| {
                    let mut w = v.clone();
                    w.push(a);
                    w
                })
            })
            .collect();
    }
    out.retain(|v| v.iter().any(|&a| a != 0));
    out
}

pub fn survey(
    common: &Common,
    nielsen: &NielsenArgs,
    presentation: Option<&Path>,
    height_max: i64,
    k_max: usize,
) -> Result<u8> {
    if common.format != Format::Json {
        return Err(unsupported("survey", common.format));
    }
    let s = setup(common)?;
    let pres = load_presentation(presentation, s.input.bundled)?;
    let slopes = match &pres {
        Some(p) if s.h.rank == 2 => {
            Some(excluded_directions(&trace_polygon(p).map_err(|e| parse_error(e.to_string()))?))
        }
        _ => None,
    };
    // The component containing the time class.
    let time = s.h.class_of(&loneaxis::cohomology::time_cocycle(&s.x));
    let cs = match (&slopes, time.is_integral()) {
        (Some(sl), true) => {
            let t = (
                i64::try_from(time.coords[0].to_integer()).unwrap_or(0),
                i64::try_from(time.coords[1].to_integer()).unwrap_or(0),
            );
            component_containing(sl, t).ok()
        }
        _ => None,
    };
    let sloop = skew_loop_class(&s);
    let mut rows = Vec::new();
    for v in all_classes(s.h.rank, height_max) {
        let c = CohomClass::integral(&v);
        let primitive = c.is_primitive();
        let inside = cone_membership(&s.x, &s.h, &c).map_err(|e| invariant(e.to_string()))?.is_inside();
        let in_cs = cs.as_ref().map(|comp| comp.contains((v[0], v[1])));
        let pairing = sloop.as_ref().map(|l| l.iter().zip(&v).map(|(a, b)| a * b).sum::<i64>());
        let mut row = json!({
            "class": v,
            "rendered": class_json(&c, &s.h)["rendered"],
            "primitive": primitive,
            "in_cone": inside,
            "in_cs": in_cs,
            "loop_pairing": pairing,
            "on_lone_axis_line": primitive && inside && pairing == Some(1),
        });
        if primitive && inside {
            let z = cocycle_for(&s, &c)?;
            let sec = build_coarse_section(&s.x, &z, None).map_err(|e| invariant(e.to_string()))?;
            let audit = skew_germ_audit(&s.x, &sec).map_err(|e| invariant(e.to_string()))?;
            row["skew_crossings"] = json!(audit.skew_crossings);
            row["illegal_turns_valence3"] = json!(audit.illegal_valence3);
            row["dim_lower_bound"] = json!(audit.bound);
            row["monodromy_rank"] = json!(sec.rank());
        }
        rows.push(row);
    }
    let mut family = Vec::new();
    let mut line = Value::Null;
    if let (Some(comp), Some(l)) = (&cs, &sloop) {
        if l.len() == 2 {
            let ln = lone_axis_line(comp, (l[0], l[1]), height_max);
            for (k, &(b, r)) in ln.classes.iter().enumerate().take(k_max + 1) {
                let c = CohomClass::integral(&[b, r]);
                let t = trace(&s, &c, None)?;
                let opts = LoneAxisOptions {
                    nielsen_len: nielsen.nielsen_len,
                    nielsen_period: nielsen.nielsen_period,
                    ..LoneAxisOptions::default()
                };
                let lone = lone_axis_check(&t.fr.map, &opts).map_err(|e| invariant(e.to_string()))?;
                family.push(json!({
                    "k": k,
                    "class": [b, r],
                    "rank": t.s.rank(),
                    "reference": t.reference,
                    "iw_sizes": lone.iw_sizes,
                    "index": lone.index,
                    "verdict": lone.verdict,
                }));
            }
            line = serde_json::to_value(&ln).map_err(|e| invariant(e.to_string()))?;
        }
    }
    let report = json!({
        "basis": s.h.names,
        "folds": s.seq.labels(),
        "skew_loop": sloop,
        "cs_component": cs.as_ref().map(|c| c.to_string()),
        "classes": rows,
        "lone_axis_line": line,
        "family": family,
    });
    emit_json(common, "survey", &report)?;
    Ok(EXIT_YES)
}

pub fn bns(common: &Common, class: &str, loop_class: Option<&str>, height_max: i64) -> Result<u8> {
    let (text, bundled) = match &common.input {
        Some(p) => {
            let t = read(p)?;
            let same = t.trim() == G_PHI_2GEN.trim();
            (t, same)
        }
        None => (G_PHI_2GEN.to_string(), true),
    };
    let p = parse_two_gen(&text).map_err(|e| parse_error(e.to_string()))?;
    let t = trace_polygon(&p).map_err(|e| parse_error(e.to_string()))?;
    let sl = excluded_directions(&t);
    if common.format == Format::Tikz {
        emit(common, "bns", &trace_tikz(&t, &sl))?;
        return Ok(EXIT_YES);
    }
    if common.format == Format::Dot {
        return Err(unsupported("bns", common.format));
    }
    let c = parse_pair(class)?;
    let comp = component_containing(&sl, c).map_err(|e| invariant(e.to_string()))?;
    let lp = match (loop_class, bundled) {
        (Some(s), _) => Some(parse_pair(s)?),
        (None, true) => Some((-1, 1)),
        (None, false) => None,
    };
    let line = lp.map(|l| lone_axis_line(&comp, l, height_max));
    let report = json!({
        "generators": p.gens,
        "relator": p.render(),
        "reduced_by": p.reduced_by,
        "trace": t,
        "excluded": sl.excluded,
        "indeterminate": sl.indeterminate,
        "manual_check_required": !sl.indeterminate.is_empty(),
        "component": { "contains": c, "from": comp.from, "to": comp.to, "full": comp.full, "description": comp.to_string() },
        "lone_axis_line": line,
    });
    emit_json(common, "bns", &report)?;
    Ok(EXIT_YES)
}
