//! Computational tools for free-by-cyclic groups: train track maps, Stallings
//! fold decompositions, folded mapping tori, cohomology and positive cones,
//! cross sections with their monodromy, and Brown's algorithm for
//! two-generator one-relator presentations.

pub mod bns;
pub mod cohomology;
pub mod exact;
pub mod folding;
pub mod graphcore;
pub mod section;
pub mod torus;
pub mod traintrack;

/// Bundled example inputs.
pub mod data {
    /// Train track representative of `a ↦ ca, b ↦ ab, c ↦ Bab` on a
    /// three-vertex rank-three graph, with its marking.
    pub const PHI_F3_MAP: &str = include_str!("../data/phi_f3.map");
    /// Two-generator one-relator presentation of the associated
    /// free-by-cyclic group.
    pub const G_PHI_2GEN: &str = include_str!("../data/g_phi.2gen");
    /// The `H₁` basis `(b, r)` of the example's folded mapping torus, as
    /// integer combinations of its 1-cells.
    pub const PHI_BASIS: [(&str, &[(&str, i64)]); 2] = [
        ("b", &[("K_1", 1), ("R_2", -1), ("R_3", 1), ("d1", -1), ("d4", -2)]),
        ("r", &[("R_1", 1), ("d2", 1), ("B_2", 1)]),
    ];

    /// The positive cocycle `z_t` on the example's folded mapping torus,
    /// representing `t b* + r*`; positive when `0 < ε` and `t + 3ε < 1`.
    pub fn phi_cocycle(
        x: &crate::torus::TrapComplex,
        t: &crate::exact::Q,
        eps: &crate::exact::Q,
    ) -> Option<crate::cohomology::Cocycle> {
        use crate::exact::qi;
        let two = qi(2);
        let delta = qi(1) - t - qi(3) * eps;
        crate::cohomology::Cocycle::from_named(
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
    }

    /// The `ε` used for the example's cocycles.
    pub fn phi_epsilon() -> crate::exact::Q {
        crate::exact::q(1, 100)
    }
}
