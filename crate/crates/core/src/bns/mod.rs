//! Brown's algorithm for two-generator one-relator presentations: the traced
//! relator polygon, directions excluded from the symmetrized BNS invariant,
//! cone components, and integral classes pairing to one with a given loop.
//!
//! Covectors are pairs `(p, q)` meaning `p g₁* + q g₂*`; lattice points are
//! pairs `(x, y)` of exponent sums in `g₁` and `g₂`.

use std::collections::BTreeMap;
use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graphcore::text::tokenize_word;

pub type Vec2 = (i64, i64);

#[derive(Debug, Error, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum BnsError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("relator does not close: displacement ({0}, {1})")]
    NotClosed(i64, i64),
    #[error("relator is trivial after cyclic reduction")]
    Trivial,
    #[error("covector ({0}, {1}) lies on an excluded ray")]
    Excluded(i64, i64),
    #[error("covector is zero")]
    Zero,
}

/// A presentation `⟨g₁, g₂ | w⟩` with `w` cyclically reduced.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TwoGenPresentation {
    pub gens: [String; 2],
    /// Letters `(generator, inverted)`.
    pub relator: Vec<(usize, bool)>,
    /// Letters removed by free and cyclic reduction of the input word.
    pub reduced_by: usize,
}

impl TwoGenPresentation {
    pub fn new(gens: [String; 2], word: Vec<(usize, bool)>) -> Result<Self, BnsError> {
        let n = word.len();
        let mut w: Vec<(usize, bool)> = Vec::with_capacity(n);
        for l in word {
            match w.last() {
                Some(&(g, inv)) if g == l.0 && inv != l.1 => {
                    w.pop();
                }
                _ => w.push(l),
            }
        }
        while w.len() >= 2 {
            let (a, b) = (w[0], w[w.len() - 1]);
            if a.0 == b.0 && a.1 != b.1 {
                w.pop();
                w.remove(0);
            } else {
                break;
            }
        }
        if w.is_empty() {
            return Err(BnsError::Trivial);
        }
        Ok(TwoGenPresentation { gens, reduced_by: n - w.len(), relator: w })
    }

    pub fn render(&self) -> String {
        self.relator
            .iter()
            .map(|&(g, inv)| if inv { self.gens[g].to_uppercase() } else { self.gens[g].clone() })
            .collect()
    }

    /// The presentation with the relator inverted.
    pub fn inverse(&self) -> Self {
        let relator = self.relator.iter().rev().map(|&(g, inv)| (g, !inv)).collect();
        TwoGenPresentation { gens: self.gens.clone(), relator, reduced_by: self.reduced_by }
    }

    /// The presentation with the relator rotated left by `k` letters.
    pub fn rotate(&self, k: usize) -> Self {
        let mut relator = self.relator.clone();
        let n = relator.len();
        relator.rotate_left(k % n);
        TwoGenPresentation { gens: self.gens.clone(), relator, reduced_by: self.reduced_by }
    }
}

/// Parse the two-generator format:
///
/// ```text
/// generators: b r
/// relator: rrrBRbRbrBRbRB
/// ```
pub fn parse_two_gen(src: &str) -> Result<TwoGenPresentation, BnsError> {
    let mut gens: Option<[String; 2]> = None;
    let mut relator: Option<(usize, String)> = None;
    for (i, raw) in src.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |msg: String| BnsError::Parse { line: i + 1, msg };
        let (key, value) = line.split_once(':').ok_or_else(|| err(format!("expected 'key: value', got '{line}'")))?;
        match key.trim() {
            "generators" => {
                let names: Vec<&str> = value.split_whitespace().collect();
                let valid = names.len() == 2
                    && names[0] != names[1]
                    && names.iter().all(|n| n.len() == 1 && n.chars().all(|c| c.is_ascii_lowercase()));
                if !valid {
                    return Err(err("expected two distinct single-letter generators".into()));
                }
                gens = Some([names[0].to_string(), names[1].to_string()]);
            }
            "relator" => relator = Some((i + 1, value.trim().to_string())),
            other => return Err(err(format!("unknown key '{other}'"))),
        }
    }
    let gens = gens.ok_or(BnsError::Parse { line: 0, msg: "missing 'generators'".into() })?;
    let (line, text) = relator.ok_or(BnsError::Parse { line: 0, msg: "missing 'relator'".into() })?;
    let tokens = tokenize_word(&text).map_err(|e| BnsError::Parse { line, msg: e.to_string() })?;
    let word = tokens
        .into_iter()
        .map(|(name, inv)| {
            gens.iter()
                .position(|g| *g == name)
                .map(|g| (g, inv))
                .ok_or_else(|| BnsError::Parse { line, msg: format!("unknown generator '{name}'") })
        })
        .collect::<Result<Vec<_>, _>>()?;
    TwoGenPresentation::new(gens, word)
}

/// The lattice path of a relator and its convex hull.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Trace {
    /// Closed path, starting and ending at the origin.
    pub path: Vec<Vec2>,
    /// Hull vertices in counterclockwise order, starting from the lowest
    /// then leftmost point; collinear points are dropped.
    pub hull: Vec<Vec2>,
    /// Times the closed path visits each hull vertex.
    pub visits: Vec<usize>,
    /// Unit segments traversed more than once, with their counts.
    pub repeated_segments: Vec<(Vec2, Vec2, usize)>,
}

fn cross(o: Vec2, a: Vec2, b: Vec2) -> i64 {
    (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0)
}

/// Convex hull by the monotone chain, counterclockwise without collinear
/// points.
fn convex_hull(points: &[Vec2]) -> Vec<Vec2> {
    let mut pts = points.to_vec();
    pts.sort_unstable();
    pts.dedup();
    if pts.len() <= 2 {
        return pts;
    }
    let mut lower: Vec<Vec2> = Vec::new();
    for &p in &pts {
        while lower.len() >= 2 && cross(lower[lower.len() - 2], lower[lower.len() - 1], p) <= 0 {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<Vec2> = Vec::new();
    for &p in pts.iter().rev() {
        while upper.len() >= 2 && cross(upper[upper.len() - 2], upper[upper.len() - 1], p) <= 0 {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    // Start from the lowest, then leftmost, point.
    let start = (0..lower.len()).min_by_key(|&i| (lower[i].1, lower[i].0)).unwrap_or(0);
    lower.rotate_left(start);
    lower
}

/// Trace the relator: a unit step in `±g₁` or `±g₂` per letter.
pub fn trace_polygon(p: &TwoGenPresentation) -> Result<Trace, BnsError> {
    let mut path = vec![(0, 0)];
    let mut cur = (0i64, 0i64);
    for &(g, inv) in &p.relator {
        let s = if inv { -1 } else { 1 };
        if g == 0 {
            cur.0 += s;
        } else {
            cur.1 += s;
        }
        path.push(cur);
    }
    if cur != (0, 0) {
        return Err(BnsError::NotClosed(cur.0, cur.1));
    }
    let hull = convex_hull(&path);
    let cyclic = &path[..path.len() - 1];
    let visits = hull.iter().map(|h| cyclic.iter().filter(|&&q| q == *h).count()).collect();
    let mut seg: BTreeMap<(Vec2, Vec2), usize> = BTreeMap::new();
    for w in path.windows(2) {
        let key = if w[0] <= w[1] { (w[0], w[1]) } else { (w[1], w[0]) };
        *seg.entry(key).or_insert(0) += 1;
    }
    let repeated_segments = seg.into_iter().filter(|&(_, n)| n > 1).map(|((a, b), n)| (a, b, n)).collect();
    Ok(Trace { path, hull, visits, repeated_segments })
}

fn primitive(v: Vec2) -> Vec2 {
    let g = v.0.gcd(&v.1);
    if g == 0 {
        v
    } else {
        (v.0 / g, v.1 / g)
    }
}

/// Exact angular order of nonzero vectors, counterclockwise from the
/// positive first axis.
fn angle_cmp(a: Vec2, b: Vec2) -> std::cmp::Ordering {
    let half = |v: Vec2| u8::from(!(v.1 > 0 || (v.1 == 0 && v.0 > 0)));
    half(a).cmp(&half(b)).then_with(|| 0.cmp(&cross((0, 0), a, b)))
}

/// Why a direction is excluded.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Exclusion {
    DiagonalEdge,
    LongAxisEdge,
    /// The negative of an excluded direction.
    Negation,
}

/// A hull vertex visited more than once; its exclusions need a manual check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Indeterminate {
    pub vertex: Vec2,
    pub visits: usize,
    /// Outward normals of the two hull edges at the vertex.
    pub normals: (Vec2, Vec2),
}

/// Directions excluded from `Σ_s`, sorted by angle and closed under
/// negation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SlopeSet {
    pub excluded: Vec<(Vec2, Exclusion)>,
    pub indeterminate: Vec<Indeterminate>,
}

impl SlopeSet {
    pub fn rays(&self) -> Vec<Vec2> {
        self.excluded.iter().map(|&(v, _)| v).collect()
    }

    pub fn is_excluded(&self, c: Vec2) -> bool {
        let c = primitive(c);
        self.excluded.iter().any(|&(v, _)| v == c)
    }

    fn insert(&mut self, v: Vec2, why: Exclusion) {
        if !self.is_excluded(v) {
            self.excluded.push((v, why));
        }
    }
}

/// Outward normals of diagonal hull edges and of axis-parallel hull edges of
/// length at least two, with their negatives; hull vertices visited twice
/// are reported as indeterminate.
pub fn excluded_directions(t: &Trace) -> SlopeSet {
    let mut out = SlopeSet { excluded: Vec::new(), indeterminate: Vec::new() };
    let h = &t.hull;
    let n = h.len();
    if n < 2 {
        return out;
    }
    let normal = |i: usize| {
        let (a, b) = (h[i], h[(i + 1) % n]);
        primitive((b.1 - a.1, a.0 - b.0))
    };
    for i in 0..n {
        let (a, b) = (h[i], h[(i + 1) % n]);
        let (dx, dy) = (b.0 - a.0, b.1 - a.1);
        if dx != 0 && dy != 0 {
            out.insert(normal(i), Exclusion::DiagonalEdge);
        } else if dx.abs() + dy.abs() >= 2 {
            out.insert(normal(i), Exclusion::LongAxisEdge);
        }
    }
    for (v, _) in out.excluded.clone() {
        out.insert((-v.0, -v.1), Exclusion::Negation);
    }
    out.excluded.sort_by(|a, b| angle_cmp(a.0, b.0));
    for i in 0..n {
        if t.visits[i] > 1 {
            out.indeterminate.push(Indeterminate {
                vertex: h[i],
                visits: t.visits[i],
                normals: (normal((i + n - 1) % n), normal(i)),
            });
        }
    }
    out
}

/// An open angular sector, counterclockwise from `from` to `to`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConeComponent {
    pub from: Vec2,
    pub to: Vec2,
    /// Set when no directions are excluded: the component is everything
    /// but the origin.
    pub full: bool,
}

impl ConeComponent {
    /// Strict containment in the open sector.
    pub fn contains(&self, c: Vec2) -> bool {
        use std::cmp::Ordering::Less;
        if c == (0, 0) {
            return false;
        }
        if self.full {
            return true;
        }
        let after_from = angle_cmp(self.from, c) == Less;
        let before_to = angle_cmp(c, self.to) == Less;
        if angle_cmp(self.from, self.to) == Less {
            after_from && before_to
        } else {
            after_from || before_to
        }
    }
}

impl fmt::Display for ConeComponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.full {
            write!(f, "all nonzero covectors")
        } else {
            write!(f, "open sector from ({}, {}) to ({}, {})", self.from.0, self.from.1, self.to.0, self.to.1)
        }
    }
}

/// The component of the complement of the excluded rays that contains `c`.
pub fn component_containing(s: &SlopeSet, c: Vec2) -> Result<ConeComponent, BnsError> {
    if c == (0, 0) {
        return Err(BnsError::Zero);
    }
    if s.is_excluded(c) {
        return Err(BnsError::Excluded(c.0, c.1));
    }
    let rays = s.rays();
    if rays.is_empty() {
        return Ok(ConeComponent { from: c, to: c, full: true });
    }
    let n = rays.len();
    let next = rays.iter().position(|&r| angle_cmp(c, r) == std::cmp::Ordering::Less).unwrap_or(0);
    let prev = (next + n - 1) % n;
    Ok(ConeComponent { from: rays[prev], to: rays[next], full: false })
}

/// Primitive integral classes `α` in a component with `α(s) = 1`, where `s`
/// is given by its coordinates in the basis dual to the covector basis.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LoneAxisLine {
    pub loop_class: Vec2,
    pub height_max: i64,
    pub classes: Vec<Vec2>,
    /// Why the enumeration is empty, when it is.
    pub empty_reason: Option<String>,
}

/// Enumerate `α = (p, q)` with `p s₁ + q s₂ = 1`, `α` in `comp` and
/// `max(|p|, |q|) ≤ height_max`, ordered along the line away from the
/// component boundary nearest the origin.
pub fn lone_axis_line(comp: &ConeComponent, s: Vec2, height_max: i64) -> LoneAxisLine {
    let empty = |why: &str| LoneAxisLine {
        loop_class: s,
        height_max,
        classes: Vec::new(),
        empty_reason: Some(why.to_string()),
    };
    let g = s.0.extended_gcd(&s.1);
    if g.gcd != 1 && g.gcd != -1 {
        return empty("the loop class is not primitive, so no integral class pairs to one with it");
    }
    // Particular solution and direction of the solution line.
    let (x0, y0) = (g.x * g.gcd, g.y * g.gcd);
    let d = (-s.1, s.0);
    let mut classes = Vec::new();
    let span = 2 * height_max + 2;
    for m in -span..=span {
        let a = (x0 + m * d.0, y0 + m * d.1);
        if a.0.abs().max(a.1.abs()) > height_max || !comp.contains(a) {
            continue;
        }
        if primitive(a) == a {
            classes.push(a);
        }
    }
    classes.sort_by_key(|a| (a.0.abs().max(a.1.abs()), *a));
    if classes.is_empty() {
        return empty("the line of classes pairing to one with the loop misses the component");
    }
    LoneAxisLine { loop_class: s, height_max, classes, empty_reason: None }
}

/// TikZ picture of the traced path, its hull and the excluded rays.
pub fn trace_tikz(t: &Trace, s: &SlopeSet) -> String {
    let pt = |p: Vec2| format!("({},{})", p.0, p.1);
    let mut out = String::from("\\begin{tikzpicture}\n");
    let hull: Vec<String> = t.hull.iter().map(|&p| pt(p)).collect();
    out.push_str(&format!("  \\draw[gray, fill=gray!15] {} -- cycle;\n", hull.join(" -- ")));
    let path: Vec<String> = t.path.iter().map(|&p| pt(p)).collect();
    out.push_str(&format!("  \\draw[->, thin] {};\n", path.join(" -- ")));
    for (a, b, _) in &t.repeated_segments {
        out.push_str(&format!("  \\draw[very thick] {} -- {};\n", pt(*a), pt(*b)));
    }
    for (v, _) in &s.excluded {
        out.push_str(&format!("  \\draw[red, dashed] (0,0) -- {};\n", pt(*v)));
    }
    out.push_str("\\end{tikzpicture}\n");
    out
}

#[cfg(test)]
mod tests;
