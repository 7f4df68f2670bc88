//! Shared generators for the integration tests.
#![allow(dead_code)]

use proptest::prelude::*;

use loneaxis::cohomology::{h1, Cocycle, Homology};
use loneaxis::data::{phi_cocycle, PHI_BASIS, PHI_F3_MAP};
use loneaxis::exact::{q, Q};
use loneaxis::folding::decompose;
use loneaxis::graphcore::text::parse_map_file;
use loneaxis::graphcore::{EdgePath, Graph, GraphMap, OEdge};
use loneaxis::torus::{build_torus, TrapComplex};
use loneaxis::traintrack::{is_expanding, is_irreducible, is_train_track};

pub fn phi_map() -> GraphMap {
    parse_map_file(PHI_F3_MAP).unwrap().map
}

pub fn phi_torus() -> (TrapComplex, Homology) {
    let x = build_torus(&decompose(&phi_map()).unwrap()).unwrap();
    let h = h1(&x).with_named_basis(&x, &PHI_BASIS).unwrap();
    (x, h)
}

pub fn rose(rank: usize) -> Graph {
    let gens: Vec<String> = (0..rank).map(|i| ((b'a' + i as u8) as char).to_string()).collect();
    Graph::rose(&gens)
}

/// One elementary positive move on the images of a rose map.
#[derive(Clone, Debug)]
pub enum Move {
    /// `x_i ↦ x_i x_j`.
    Right(usize, usize),
    /// `x_i ↦ x_j x_i`.
    Left(usize, usize),
    Swap(usize, usize),
}

/// Precompose the automorphism with each move. Images stay positive words,
/// so the result is a train track map on the rose.
pub fn positive_rose_map(rank: usize, moves: &[Move]) -> GraphMap {
    let mut images: Vec<Vec<OEdge>> = (0..rank).map(|i| vec![OEdge::fwd(i)]).collect();
    for m in moves {
        match *m {
            Move::Right(i, j) if i != j => {
                let tail = images[j].clone();
                images[i].extend(tail);
            }
            Move::Left(i, j) if i != j => {
                let mut head = images[j].clone();
                head.extend(images[i].iter().copied());
                images[i] = head;
            }
            Move::Swap(i, j) => images.swap(i, j),
            _ => {}
        }
    }
    let g = rose(rank);
    GraphMap::new(g.clone(), g, vec![0], images).unwrap()
}

fn moves(rank: usize) -> impl Strategy<Value = Vec<Move>> {
    let one = (0..3u8, 0..rank, 0..rank).prop_map(|(k, i, j)| match k {
        0 => Move::Right(i, j),
        1 => Move::Left(i, j),
        _ => Move::Swap(i, j),
    });
    prop::collection::vec(one, 2 * rank..5 * rank)
}

/// Expanding irreducible train track maps on roses of rank 2 to 4.
pub fn tt_map() -> impl Strategy<Value = GraphMap> {
    (2usize..=4)
        .prop_flat_map(|rank| moves(rank).prop_map(move |ms| positive_rose_map(rank, &ms)))
        .prop_filter("expanding irreducible train track", |f| {
            is_train_track(f).is_ok() && is_irreducible(f) && is_expanding(f)
        })
}

/// Two maps on the same rose.
pub fn tt_pair() -> impl Strategy<Value = (GraphMap, GraphMap)> {
    (2usize..=4)
        .prop_flat_map(|rank| {
            (moves(rank), moves(rank))
                .prop_map(move |(a, b)| (positive_rose_map(rank, &a), positive_rose_map(rank, &b)))
        })
        .prop_filter("irreducible", |(f, g)| is_irreducible(f) && is_irreducible(g))
}

/// A random walk with backtracking allowed, split into two composable
/// halves.
pub fn walk_pair(g: Graph) -> impl Strategy<Value = (EdgePath, EdgePath)> {
    let n = g.num_vertices();
    (0..n, prop::collection::vec(any::<prop::sample::Index>(), 0..40), any::<prop::sample::Index>()).prop_map(
        move |(start, picks, cut)| {
            let mut at = start;
            let mut edges = Vec::new();
            for p in picks {
                let dirs = g.directions_at(at);
                let e = dirs[p.index(dirs.len())];
                edges.push(e);
                at = g.term(e);
            }
            let k = cut.index(edges.len() + 1);
            let first = EdgePath::new(&g, start, edges[..k].to_vec()).unwrap();
            let second = EdgePath::new(&g, first.end(), edges[k..].to_vec()).unwrap();
            (first, second)
        },
    )
}

/// A positive cocycle `z_t`, `t < 1`, on the example's torus.
pub fn example_cocycle(x: &TrapComplex, num: i64, den: i64) -> Cocycle {
    phi_cocycle(x, &q(num, den), &q(1, 100)).unwrap()
}

/// Small rational 0-cochains.
pub fn zero_cochain(n: usize) -> impl Strategy<Value = Vec<Q>> {
    prop::collection::vec((-20i64..=20, 1i64..=7).prop_map(|(a, b)| q(a, b)), n)
}
