//! Concrete dynamics over a line of vertices: a reversible particle gas
//! whose movers hop one step per tick and bounce on walls, a per-vertex
//! rotation that puts movers into superpositions of directions, and the
//! color-flip operator that is local without preserving consistency.
//!
//! Occupancy lives inside the state alphabet (`empty` is a state), so the
//! gas never changes vertex sets and stays name-preserving. On graphs that
//! occupy only part of the line, absent vertices act as walls exactly like
//! the two ends do; that keeps the update radius-1 in both directions,
//! which the causality deciders require.

use crate::error::{Error, Result};
use crate::graph::{Graph, System, Universe};
use crate::ket::Ket;
use crate::operator::OperatorMatrix;
use crate::restriction::Restriction;
use num_complex::Complex64;

/// State alphabet of the gas.
pub const STATE_RIGHT: &str = "right";
pub const STATE_LEFT: &str = "left";
pub const STATE_EMPTY: &str = "empty";
pub const STATE_BOTH: &str = "both";

/// A finite line of vertices `v1 < v2 < … < vn` carrying the four-symbol
/// gas alphabet.
#[derive(Debug, Clone)]
pub struct LineConfig {
    length: usize,
}

impl LineConfig {
    pub fn new(length: usize) -> Result<Self> {
        if length < 2 {
            return Err(Error::Input(format!(
                "line length must be at least 2, got {length}"
            )));
        }
        if length > 9 {
            // single-digit names keep the lexicographic vertex order equal
            // to the line order
            return Err(Error::Input(format!(
                "line length must be at most 9, got {length}"
            )));
        }
        Ok(Self { length })
    }

    pub fn length(&self) -> usize {
        self.length
    }

    pub fn vertex(&self, i: usize) -> String {
        format!("v{}", i + 1)
    }

    pub fn vertices(&self) -> Vec<String> {
        (0..self.length).map(|i| self.vertex(i)).collect()
    }

    pub fn universe(&self) -> Universe {
        Universe::new(
            self.vertices(),
            [STATE_RIGHT, STATE_LEFT, STATE_EMPTY, STATE_BOTH],
        )
        .expect("line universe construction cannot fail")
    }

    /// The single-vertex selector at position `i`.
    pub fn at(&self, i: usize) -> Restriction {
        Restriction::by_vertex(self.vertex(i))
    }

    /// The radius-1 neighborhood selector around position `i`, clamped at
    /// the borders.
    pub fn neighborhood(&self, i: usize) -> Restriction {
        let mut parts: Vec<Restriction> = Vec::new();
        if i > 0 {
            parts.push(self.at(i - 1));
        }
        parts.push(self.at(i));
        if i + 1 < self.length {
            parts.push(self.at(i + 1));
        }
        let mut iter = parts.into_iter();
        let first = iter.next().expect("neighborhood has at least one part");
        iter.fold(first, |acc, next| acc.union_unchecked(&next))
            .with_label(format!("ball({})", self.vertex(i)))
    }

    /// The radius-`r` neighborhood selector, clamped at the borders.
    pub fn neighborhood_radius(&self, i: usize, r: usize) -> Restriction {
        let lo = i.saturating_sub(r);
        let hi = (i + r).min(self.length - 1);
        let mut acc: Option<Restriction> = None;
        for j in lo..=hi {
            acc = Some(match acc {
                None => self.at(j),
                Some(prev) => prev.union_unchecked(&self.at(j)),
            });
        }
        acc.expect("radius neighborhood has at least one part")
            .with_label(format!("ball{}({})", r, self.vertex(i)))
    }
}

/// Mover content of one cell as (right-mover, left-mover) bits.
fn state_bits(state: &str) -> (bool, bool) {
    match state {
        STATE_RIGHT => (true, false),
        STATE_LEFT => (false, true),
        STATE_BOTH => (true, true),
        _ => (false, false),
    }
}

fn bits_state(right: bool, left: bool) -> &'static str {
    match (right, left) {
        (true, false) => STATE_RIGHT,
        (false, true) => STATE_LEFT,
        (true, true) => STATE_BOTH,
        (false, false) => STATE_EMPTY,
    }
}

/// One synchronous step of the gas on a single classical configuration.
/// Right-movers hop right, left-movers hop left; a mover whose target cell
/// is absent (off the line or unoccupied in this graph) reverses direction
/// in place. Each output bit has exactly one possible source, so the step
/// is a permutation of every support sector.
fn gas_step(line: &LineConfig, g: &Graph) -> Graph {
    let n = line.length;
    let names: Vec<String> = line.vertices();
    let occupied: Vec<Option<(bool, bool)>> = (0..n)
        .map(|i| g.state_at(&names[i]).map(state_bits))
        .collect();
    let mut out: Vec<(bool, bool)> = vec![(false, false); n];
    for i in 0..n {
        let Some((right, left)) = occupied[i] else {
            continue;
        };
        if right {
            if i + 1 < n && occupied[i + 1].is_some() {
                out[i + 1].0 = true;
            } else {
                out[i].1 = true; // bounce: becomes a left-mover here
            }
        }
        if left {
            if i > 0 && occupied[i - 1].is_some() {
                out[i - 1].1 = true;
            } else {
                out[i].0 = true; // bounce: becomes a right-mover here
            }
        }
    }
    let systems: Vec<System> = (0..n)
        .filter(|&i| occupied[i].is_some())
        .map(|i| System::new(bits_state(out[i].0, out[i].1), names[i].clone()))
        .collect();
    Graph::from_sorted_unchecked(systems)
}

/// The propagation unitary: the permutation matrix of [`gas_step`] over the
/// whole enumerated basis.
pub fn build_propagation(line: &LineConfig) -> Result<OperatorMatrix> {
    let universe = line.universe();
    let mut op = OperatorMatrix::zero();
    for g in universe.enumerate_graphs()? {
        let image = gas_step(line, &g);
        op.add_entry(image, g, Complex64::new(1.0, 0.0));
    }
    Ok(op)
}

/// The per-vertex direction rotation: on each occupied cell,
/// `right ↦ cosθ·right + sinθ·left` and `left ↦ cosθ·left − sinθ·right`;
/// `empty` and `both` are untouched. The whole operator is the product of
/// the strictly single-vertex-local factors.
pub fn build_rotation(line: &LineConfig, theta: f64) -> Result<OperatorMatrix> {
    let universe = line.universe();
    let (c, s) = (theta.cos(), theta.sin());
    let mut op = OperatorMatrix::identity(&universe)?;
    for i in 0..line.length() {
        let v = line.vertex(i);
        let mut factor = OperatorMatrix::zero();
        for g in universe.enumerate_graphs()? {
            match g.state_at(&v) {
                Some(STATE_RIGHT) => {
                    let to_left = replace_state(&g, &v, STATE_LEFT);
                    factor.add_entry(g.clone(), g.clone(), Complex64::new(c, 0.0));
                    factor.add_entry(to_left, g.clone(), Complex64::new(s, 0.0));
                }
                Some(STATE_LEFT) => {
                    let to_right = replace_state(&g, &v, STATE_RIGHT);
                    factor.add_entry(g.clone(), g.clone(), Complex64::new(c, 0.0));
                    factor.add_entry(to_right, g.clone(), Complex64::new(-s, 0.0));
                }
                _ => {
                    factor.add_entry(g.clone(), g.clone(), Complex64::new(1.0, 0.0));
                }
            }
        }
        op = factor.compose(&op);
    }
    Ok(op)
}

fn replace_state(g: &Graph, vertex: &str, state: &str) -> Graph {
    Graph::from_sorted_unchecked(
        g.systems()
            .iter()
            .map(|s| {
                if s.vertex == vertex {
                    System::new(state, vertex)
                } else {
                    s.clone()
                }
            })
            .collect(),
    )
}

/// The color-flip operator over a two-state universe: kills any graph
/// containing a black system, and recolors all-white graphs black. Local
/// under the white selector, but not consistency-preserving.
pub fn build_flip(universe: &Universe) -> Result<OperatorMatrix> {
    let states = universe.states();
    if states.len() != 2 {
        return Err(Error::Input(format!(
            "flip needs a two-state universe, got {} states",
            states.len()
        )));
    }
    // canonical order puts "b" before "w", so the first state plays black
    let black = states[0].clone();
    let mut op = OperatorMatrix::zero();
    for g in universe.enumerate_graphs()? {
        if g.systems().iter().any(|s| s.state == black) {
            continue; // A|G⟩ = 0 when G has any black system
        }
        let flipped = Graph::from_sorted_unchecked(
            g.systems()
                .iter()
                .map(|s| System::new(black.clone(), s.vertex.clone()))
                .collect(),
        );
        op.add_entry(flipped, g, Complex64::new(1.0, 0.0));
    }
    Ok(op)
}

/// Repeatedly applies the given operators — in sequence order, once each
/// per step — recording the state after every step. The returned
/// trajectory starts with the initial state, so it has `steps + 1` entries.
pub fn evolve(psi: &Ket, ops: &[OperatorMatrix], steps: usize) -> Vec<Ket> {
    let mut trajectory = Vec::with_capacity(steps + 1);
    trajectory.push(psi.clone());
    let mut current = psi.clone();
    for _ in 0..steps {
        for op in ops {
            current = op.apply(&current);
        }
        trajectory.push(current.clone());
    }
    trajectory
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::BasisIndex;
    use crate::ket::CMP_TOL;

    /// Test-side oracle: the same bounce rule written against plain symbol
    /// vectors on the full-support sector, independently of graph codes.
    fn oracle_step(cells: &[&str]) -> Vec<&'static str> {
        let n = cells.len();
        let mut out = vec![(false, false); n];
        for (i, cell) in cells.iter().enumerate() {
            let (r, l) = state_bits(cell);
            if r {
                if i + 1 < n {
                    out[i + 1].0 = true;
                } else {
                    out[i].1 = true;
                }
            }
            if l {
                if i > 0 {
                    out[i - 1].1 = true;
                } else {
                    out[i].0 = true;
                }
            }
        }
        out.into_iter().map(|(r, l)| bits_state(r, l)).collect()
    }

    fn full_graph(line: &LineConfig, cells: &[&str]) -> Graph {
        Graph::new(
            cells
                .iter()
                .enumerate()
                .map(|(i, s)| System::new(*s, line.vertex(i))),
        )
        .unwrap()
    }

    #[test]
    fn single_mover_hops_right() {
        let line = LineConfig::new(3).unwrap();
        let m = build_propagation(&line).unwrap();
        let start = full_graph(&line, &["right", "empty", "empty"]);
        let expect = full_graph(&line, &["empty", "right", "empty"]);
        assert!(m.apply(&Ket::basis(start)).approx_eq(&Ket::basis(expect), CMP_TOL));
    }

    #[test]
    fn mover_bounces_at_right_border() {
        let line = LineConfig::new(2).unwrap();
        let m = build_propagation(&line).unwrap();
        let start = full_graph(&line, &["empty", "right"]);
        let expect = full_graph(&line, &["empty", "left"]);
        assert!(m.apply(&Ket::basis(start)).approx_eq(&Ket::basis(expect), CMP_TOL));
    }

    #[test]
    fn all_empty_line_is_fixed() {
        let line = LineConfig::new(3).unwrap();
        let m = build_propagation(&line).unwrap();
        let still = full_graph(&line, &["empty", "empty", "empty"]);
        assert!(m
            .apply(&Ket::basis(still.clone()))
            .approx_eq(&Ket::basis(still), CMP_TOL));
    }

    #[test]
    fn propagation_is_a_name_preserving_permutation_unitary() {
        let line = LineConfig::new(3).unwrap();
        let universe = line.universe();
        let m = build_propagation(&line).unwrap();
        assert!(m.is_unitary(&universe, CMP_TOL).unwrap());
        assert!(m.is_name_preserving(CMP_TOL));
        // permutation on the full-support sector: one unit entry per column
        let full: Vec<Graph> = universe
            .enumerate_graphs()
            .unwrap()
            .into_iter()
            .filter(|g| g.len() == 3)
            .collect();
        assert_eq!(full.len(), 64);
        for g in &full {
            let image = m.apply(&Ket::basis(g.clone()));
            assert_eq!(image.support_len(), 1);
            let (target, amp) = image.iter().next().map(|(t, a)| (t.clone(), *a)).unwrap();
            assert_eq!(target.len(), 3);
            assert!((amp - Complex64::new(1.0, 0.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn gas_matches_symbol_oracle_on_every_full_configuration() {
        let line = LineConfig::new(3).unwrap();
        let symbols = [STATE_RIGHT, STATE_LEFT, STATE_EMPTY, STATE_BOTH];
        for a in symbols {
            for b in symbols {
                for c in symbols {
                    let cells = [a, b, c];
                    let expected: Vec<&str> = oracle_step(&cells);
                    let stepped = gas_step(&line, &full_graph(&line, &cells));
                    assert_eq!(stepped, full_graph(&line, &expected), "cells {cells:?}");
                }
            }
        }
    }

    #[test]
    fn particle_count_is_conserved() {
        fn movers(g: &Graph) -> usize {
            g.systems()
                .iter()
                .map(|s| {
                    let (r, l) = state_bits(&s.state);
                    usize::from(r) + usize::from(l)
                })
                .sum()
        }
        let line = LineConfig::new(3).unwrap();
        let m = build_propagation(&line).unwrap();
        for ((image, source), _) in m.iter() {
            assert_eq!(movers(image), movers(source));
        }
    }

    #[test]
    fn rotation_at_zero_is_identity_and_quarter_turn_reverses() {
        let line = LineConfig::new(2).unwrap();
        let universe = line.universe();
        let id = OperatorMatrix::identity(&universe).unwrap();
        let c0 = build_rotation(&line, 0.0).unwrap();
        assert!(c0.approx_eq(&id, CMP_TOL));
        let c90 = build_rotation(&line, std::f64::consts::FRAC_PI_2).unwrap();
        let start = full_graph(&line, &["right", "empty"]);
        let expect = full_graph(&line, &["left", "empty"]);
        assert!(c90
            .apply(&Ket::basis(start))
            .approx_eq(&Ket::basis(expect), CMP_TOL));
    }

    #[test]
    fn rotation_is_unitary_for_odd_angles() {
        let line = LineConfig::new(2).unwrap();
        let universe = line.universe();
        for theta in [0.37, std::f64::consts::FRAC_PI_4, 2.1] {
            let c = build_rotation(&line, theta).unwrap();
            assert!(c.is_unitary(&universe, CMP_TOL).unwrap(), "theta={theta}");
        }
    }

    #[test]
    fn rotation_factors_are_strictly_vertex_local() {
        let line = LineConfig::new(2).unwrap();
        let basis = BasisIndex::new(&line.universe()).unwrap();
        let c = build_rotation(&line, 0.7).unwrap();
        // the product is causal per vertex; each single-vertex factor is
        // checked through the strict-locality decider in the harness. Here:
        // the full rotation leaves each vertex's reduction dependent only
        // on that vertex, i.e. it is causal from each vertex to itself.
        for i in 0..2 {
            let zeta = line.at(i);
            let verdict = crate::causality::is_causal(&c, &zeta, &zeta, &basis).unwrap();
            assert!(verdict.primal && verdict.dual);
        }
    }

    #[test]
    fn flip_recolors_all_white_and_kills_black() {
        let universe = Universe::new(["u", "v"], ["b", "w"]).unwrap();
        let flip = build_flip(&universe).unwrap();
        let wu = Graph::from_tokens(&["w.u"]).unwrap();
        let bu = Graph::from_tokens(&["b.u"]).unwrap();
        assert!(flip
            .apply(&Ket::basis(wu))
            .approx_eq(&Ket::basis(bu.clone()), CMP_TOL));
        assert!(flip.apply(&Ket::basis(bu)).is_zero());
        assert!(flip
            .apply(&Ket::basis(Graph::empty()))
            .approx_eq(&Ket::basis(Graph::empty()), CMP_TOL));
    }

    #[test]
    fn double_flip_is_identity_on_all_white_graphs() {
        let universe = Universe::new(["u", "v"], ["b", "w"]).unwrap();
        let flip = build_flip(&universe).unwrap();
        // flip∘flip maps an all-white graph to zero (the first flip makes it
        // all black)… composing flip with its adjoint restricted to whites
        // is the identity there instead; spell out the involution the
        // operator actually satisfies:
        let flip2 = flip.adjoint().compose(&flip);
        for g in universe.enumerate_graphs().unwrap() {
            let all_white = g.systems().iter().all(|s| s.state == "w");
            let out = flip2.apply(&Ket::basis(g.clone()));
            if all_white {
                assert!(out.approx_eq(&Ket::basis(g), CMP_TOL));
            } else {
                assert!(out.is_zero());
            }
        }
    }

    #[test]
    fn evolution_under_identity_is_constant() {
        let line = LineConfig::new(3).unwrap();
        let id = OperatorMatrix::identity(&line.universe()).unwrap();
        let psi = Ket::basis(full_graph(&line, &["right", "empty", "empty"]));
        let traj = evolve(&psi, &[id], 4);
        assert_eq!(traj.len(), 5);
        for state in &traj {
            assert!(state.approx_eq(&psi, CMP_TOL));
        }
    }

    #[test]
    fn bounce_trajectory_matches_oracle() {
        let line = LineConfig::new(3).unwrap();
        let m = build_propagation(&line).unwrap();
        let start = ["right", "empty", "empty"];
        // oracle-computed four steps: hop, hop, bounce, hop back
        let mut cells: Vec<&str> = start.to_vec();
        let mut expected = vec![full_graph(&line, &cells)];
        for _ in 0..4 {
            cells = oracle_step(&cells);
            expected.push(full_graph(&line, &cells));
        }
        assert_eq!(expected[4], full_graph(&line, &["empty", "left", "empty"]));

        let traj = evolve(&Ket::basis(expected[0].clone()), std::slice::from_ref(&m), 4);
        for (state, want) in traj.iter().zip(&expected) {
            assert!(state.approx_eq(&Ket::basis(want.clone()), CMP_TOL));
        }
    }

    #[test]
    fn norm_is_preserved_along_rotated_evolution() {
        let line = LineConfig::new(3).unwrap();
        let m = build_propagation(&line).unwrap();
        let c = build_rotation(&line, std::f64::consts::FRAC_PI_4).unwrap();
        let psi = Ket::basis(full_graph(&line, &["right", "empty", "left"]));
        // one step applies the rotation, then the propagation
        let traj = evolve(&psi, &[c, m], 5);
        for state in &traj {
            assert!((state.norm() - 1.0).abs() < 1e-10);
        }
    }
}
