//! Reduced words in free groups and homomorphisms between free groups.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::graph::oriented_name;
use super::path::{reduce, reverse};
use super::OEdge;

/// A freely reduced word; each letter is a generator index with an
/// inversion bit.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FreeWord {
    letters: Vec<OEdge>,
}

impl FreeWord {
    /// Reduce and wrap a letter sequence.
    pub fn new(letters: &[OEdge]) -> Self {
        FreeWord { letters: reduce(letters) }
    }

    pub fn identity() -> Self {
        FreeWord::default()
    }

    /// The word consisting of one generator.
    pub fn generator(g: usize) -> Self {
        FreeWord { letters: vec![OEdge::fwd(g)] }
    }

    pub fn letters(&self) -> &[OEdge] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn mul(&self, other: &FreeWord) -> FreeWord {
        let mut v = self.letters.clone();
        v.extend_from_slice(&other.letters);
        FreeWord::new(&v)
    }

    pub fn inverse(&self) -> FreeWord {
        FreeWord { letters: reverse(&self.letters) }
    }

    /// `w^n` for any integer `n`.
    pub fn pow(&self, n: i64) -> FreeWord {
        let base = if n < 0 { self.inverse() } else { self.clone() };
        let mut out = FreeWord::identity();
        for _ in 0..n.unsigned_abs() {
            out = out.mul(&base);
        }
        out
    }

    /// `c · self · c⁻¹`.
    pub fn conjugate_by(&self, c: &FreeWord) -> FreeWord {
        c.mul(self).mul(&c.inverse())
    }

    /// Split `self = u · core · u⁻¹` with `core` cyclically reduced.
    pub fn cyclic_split(&self) -> (FreeWord, FreeWord) {
        let l = &self.letters;
        let mut k = 0;
        while 2 * k + 1 < l.len() && l[k] == l[l.len() - 1 - k].inv() {
            k += 1;
        }
        (FreeWord { letters: l[..k].to_vec() }, FreeWord { letters: l[k..l.len() - k].to_vec() })
    }

    /// Cyclic rotation by `k` letters of a cyclically reduced word.
    pub fn rotate(&self, k: usize) -> FreeWord {
        let mut v = self.letters[k..].to_vec();
        v.extend_from_slice(&self.letters[..k]);
        FreeWord { letters: v }
    }

    /// The primitive root `r` with `self = r^m`, for a cyclically reduced
    /// nonempty word.
    pub fn root(&self) -> FreeWord {
        let n = self.letters.len();
        for d in 1..=n {
            if n.is_multiple_of(d) && (0..n).all(|i| self.letters[i] == self.letters[i % d]) {
                return FreeWord { letters: self.letters[..d].to_vec() };
            }
        }
        self.clone()
    }

    /// Exponent sum of each generator (abelianization).
    pub fn exponent_sums(&self, rank: usize) -> Vec<i64> {
        let mut out = vec![0i64; rank];
        for l in &self.letters {
            out[l.edge] += if l.rev { -1 } else { 1 };
        }
        out
    }

    /// Render with the given generator names.
    pub fn render(&self, names: &[String]) -> String {
        if self.letters.is_empty() {
            return "1".to_string();
        }
        let parts: Vec<String> = self.letters.iter().map(|l| oriented_name(&names[l.edge], l.rev)).collect();
        if parts.iter().all(|p| p.chars().count() == 1) {
            parts.concat()
        } else {
            parts.join(" ")
        }
    }
}

/// A homomorphism `F(src) → F(dst)` given by generator images.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FreeGroupMap {
    pub src: Vec<String>,
    pub dst: Vec<String>,
    pub images: Vec<FreeWord>,
}

/// Outcome of the invertibility check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Invertibility {
    /// A verified two-sided inverse.
    Verified(FreeGroupMap),
    /// Greedy Nielsen reduction stalled; the map may still be invertible.
    Unverified,
}

impl FreeGroupMap {
    pub fn new(src: Vec<String>, dst: Vec<String>, images: Vec<FreeWord>) -> Self {
        assert_eq!(src.len(), images.len(), "one image per generator");
        FreeGroupMap { src, dst, images }
    }

    /// Endomorphism of `F(gens)`.
    pub fn endo(gens: Vec<String>, images: Vec<FreeWord>) -> Self {
        FreeGroupMap::new(gens.clone(), gens, images)
    }

    pub fn identity(gens: Vec<String>) -> Self {
        let images = (0..gens.len()).map(FreeWord::generator).collect();
        FreeGroupMap::endo(gens, images)
    }

    pub fn rank(&self) -> usize {
        self.src.len()
    }

    pub fn is_endomorphism(&self) -> bool {
        self.src == self.dst
    }

    pub fn apply(&self, w: &FreeWord) -> FreeWord {
        let mut out = Vec::new();
        for l in w.letters() {
            let img = &self.images[l.edge];
            if l.rev {
                out.extend(reverse(img.letters()));
            } else {
                out.extend_from_slice(img.letters());
            }
        }
        FreeWord::new(&out)
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &FreeGroupMap) -> FreeGroupMap {
        assert_eq!(other.dst, self.src, "composable free group maps");
        let images = other.images.iter().map(|w| self.apply(w)).collect();
        FreeGroupMap::new(other.src.clone(), self.dst.clone(), images)
    }

    pub fn is_identity(&self) -> bool {
        self.is_endomorphism() && self.images.iter().enumerate().all(|(i, w)| *w == FreeWord::generator(i))
    }

    /// Try to invert by greedy Nielsen reduction: apply length-reducing
    /// moves `wᵢ ← wᵢ wⱼ^±1` or `wⱼ^±1 wᵢ` to the image tuple until every
    /// image is a single distinct letter.
    pub fn invert(&self) -> Invertibility {
        let n = self.rank();
        if self.dst.len() != n {
            return Invertibility::Unverified;
        }
        let mut u: Vec<FreeWord> = (0..n).map(FreeWord::generator).collect();
        let mut w = self.images.clone();
        loop {
            if w.iter().any(FreeWord::is_empty) {
                return Invertibility::Unverified;
            }
            let mut improved = false;
            'search: for i in 0..n {
                for j in 0..n {
                    if i == j {
                        continue;
                    }
                    for inv in [false, true] {
                        let wj = if inv { w[j].inverse() } else { w[j].clone() };
                        let uj = if inv { u[j].inverse() } else { u[j].clone() };
                        let right = w[i].mul(&wj);
                        if right.len() < w[i].len() {
                            w[i] = right;
                            u[i] = u[i].mul(&uj);
                            improved = true;
                            break 'search;
                        }
                        let left = wj.mul(&w[i]);
                        if left.len() < w[i].len() {
                            w[i] = left;
                            u[i] = uj.mul(&u[i]);
                            improved = true;
                            break 'search;
                        }
                    }
                }
            }
            if !improved {
                break;
            }
        }
        let mut inv_images = vec![None; n];
        for i in 0..n {
            if w[i].len() != 1 {
                return Invertibility::Unverified;
            }
            let l = w[i].letters()[0];
            if inv_images[l.edge].is_some() {
                return Invertibility::Unverified;
            }
            inv_images[l.edge] = Some(if l.rev { u[i].inverse() } else { u[i].clone() });
        }
        let images: Vec<FreeWord> = inv_images.into_iter().map(|x| x.expect("permutation")).collect();
        let inv = FreeGroupMap::new(self.dst.clone(), self.src.clone(), images);
        debug_assert!(inv.compose(self).images.iter().enumerate().all(|(i, x)| *x == FreeWord::generator(i)));
        Invertibility::Verified(inv)
    }

    /// Search for `c` with `other(x) = c · self(x) · c⁻¹` for every generator,
    /// with `|c| ≤ max_len`. Returns the shortest such `c` found.
    pub fn outer_conjugator(&self, other: &FreeGroupMap, max_len: usize) -> Option<FreeWord> {
        if self.src.len() != other.src.len() || self.dst.len() != other.dst.len() {
            return None;
        }
        let check = |c: &FreeWord| {
            c.len() <= max_len && self.images.iter().zip(&other.images).all(|(a, b)| a.conjugate_by(c) == *b)
        };
        let pivot = match self.images.iter().position(|w| !w.is_empty()) {
            Some(p) => p,
            None => return if self.images == other.images { Some(FreeWord::identity()) } else { None },
        };
        let (u, core) = self.images[pivot].cyclic_split();
        let (v, core2) = other.images[pivot].cyclic_split();
        if core.len() != core2.len() {
            return None;
        }
        let root = core.root();
        let big_root = root.conjugate_by(&u);
        let mut best: Option<FreeWord> = None;
        for k in 0..root.len() {
            if core.rotate(k) != core2 {
                continue;
            }
            let p = FreeWord { letters: core.letters()[..k].to_vec() };
            let w0 = v.mul(&p.inverse()).mul(&u.inverse());
            let span = (max_len + w0.len()) as i64 + 1;
            for m in -span..=span {
                let c = w0.mul(&big_root.pow(m));
                if check(&c) && best.as_ref().is_none_or(|b| c.len() < b.len()) {
                    best = Some(c);
                }
            }
        }
        best
    }

    /// Outer-class equality up to conjugators of length `max_len`.
    pub fn same_outer_class(&self, other: &FreeGroupMap, max_len: usize) -> bool {
        self.outer_conjugator(other, max_len).is_some()
    }

    /// Render each image with the target names.
    pub fn render(&self) -> Vec<(String, String)> {
        self.src.iter().cloned().zip(self.images.iter().map(|w| w.render(&self.dst))).collect()
    }

    /// Integer abelianization matrix: row `i` holds the exponent sums of the
    /// image of generator `i`.
    pub fn abelianization(&self) -> Vec<Vec<i64>> {
        self.images.iter().map(|w| w.exponent_sums(self.dst.len())).collect()
    }
}

impl fmt::Display for FreeGroupMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.render().into_iter().map(|(a, b)| format!("{a}↦{b}")).collect();
        write!(f, "{}", parts.join(", "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> FreeWord {
        let letters: Vec<OEdge> = s
            .chars()
            .map(|c| {
                let g = (c.to_ascii_lowercase() as u8 - b'a') as usize;
                if c.is_uppercase() {
                    OEdge::bwd(g)
                } else {
                    OEdge::fwd(g)
                }
            })
            .collect();
        FreeWord::new(&letters)
    }

    fn gens(n: usize) -> Vec<String> {
        (0..n).map(|i| ((b'a' + i as u8) as char).to_string()).collect()
    }

    fn phi() -> FreeGroupMap {
        FreeGroupMap::endo(gens(3), vec![w("ca"), w("ab"), w("Bab")])
    }

    #[test]
    fn reduction_and_inverse() {
        assert!(w("aA").is_empty());
        assert_eq!(w("ab").mul(&w("Ba")), w("aa"));
        assert_eq!(w("abC").inverse(), w("cBA"));
    }

    #[test]
    fn cyclic_split_and_root() {
        let (u, c) = w("abcA").cyclic_split();
        assert_eq!(u, w("a"));
        assert_eq!(c, w("bc"));
        assert_eq!(w("abab").root(), w("ab"));
    }

    #[test]
    fn phi_is_invertible() {
        match phi().invert() {
            Invertibility::Verified(inv) => {
                assert!(inv.compose(&phi()).is_identity());
                assert!(phi().compose(&inv).is_identity());
            }
            Invertibility::Unverified => panic!("phi should invert"),
        }
    }

    #[test]
    fn non_surjective_is_unverified() {
        let m = FreeGroupMap::endo(gens(2), vec![w("aa"), w("b")]);
        assert_eq!(m.invert(), Invertibility::Unverified);
    }

    #[test]
    fn conjugate_maps_share_outer_class() {
        let c = w("bcA");
        let images = phi().images.iter().map(|x| x.conjugate_by(&c)).collect();
        let psi = FreeGroupMap::endo(gens(3), images);
        let found = phi().outer_conjugator(&psi, 20).unwrap();
        assert_eq!(found, c);
        assert!(!phi().same_outer_class(&FreeGroupMap::identity(gens(3)), 20));
    }
}
