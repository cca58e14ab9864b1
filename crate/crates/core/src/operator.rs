//! Sparse operators over the graph basis.
//!
//! An operator is a finite map `(bra graph, ket graph) → amplitude`; the
//! entry at `(G, H)` is `⟨G|A|H⟩`. Trace-class and bounded operators share
//! the representation; the role tag is carried for documentation since the
//! distinction is vacuous at finite dimension.

use crate::error::{Error, Result};
use crate::graph::{Graph, Universe};
use crate::ket::{Ket, ZERO_TOL};
use num_complex::Complex64;
use std::collections::BTreeMap;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OpRole {
    /// States and density-like operators.
    TraceClass,
    /// Transformations and observables.
    #[default]
    Bounded,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct OperatorMatrix {
    entries: BTreeMap<(Graph, Graph), Complex64>,
    role: OpRole,
}

impl OperatorMatrix {
    pub fn zero() -> Self {
        Self::default()
    }

    /// The rank-one operator `|bra_side⟩⟨ket_side|`... more precisely
    /// `|g⟩⟨h|`: maps `|h⟩` to `|g⟩`.
    pub fn ket_bra(g: Graph, h: Graph) -> Self {
        let mut op = Self::zero();
        op.add_entry(g, h, Complex64::new(1.0, 0.0));
        op
    }

    /// Identity over the enumerated basis of `universe`.
    pub fn identity(universe: &Universe) -> Result<Self> {
        let mut op = Self::zero();
        for g in universe.enumerate_graphs()? {
            op.add_entry(g.clone(), g, Complex64::new(1.0, 0.0));
        }
        Ok(op)
    }

    /// Identity on the span of the given basis graphs.
    pub fn identity_on(graphs: impl IntoIterator<Item = Graph>) -> Self {
        let mut op = Self::zero();
        for g in graphs {
            op.add_entry(g.clone(), g, Complex64::new(1.0, 0.0));
        }
        op
    }

    pub fn from_entries(entries: impl IntoIterator<Item = (Graph, Graph, Complex64)>) -> Self {
        let mut op = Self::zero();
        for (g, h, a) in entries {
            op.add_entry(g, h, a);
        }
        op
    }

    pub fn role(&self) -> OpRole {
        self.role
    }

    pub fn with_role(mut self, role: OpRole) -> Self {
        self.role = role;
        self
    }

    pub fn add_entry(&mut self, bra: Graph, ket: Graph, amp: Complex64) {
        match self.entries.entry((bra, ket)) {
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let v = *o.get() + amp;
                if v.norm() <= ZERO_TOL {
                    o.remove();
                } else {
                    *o.get_mut() = v;
                }
            }
            std::collections::btree_map::Entry::Vacant(v) => {
                if amp.norm() > ZERO_TOL {
                    v.insert(amp);
                }
            }
        }
    }

    /// `⟨bra|A|ket⟩`.
    pub fn entry(&self, bra: &Graph, ket: &Graph) -> Complex64 {
        // avoids cloning: BTreeMap can't be queried with a borrowed pair, so
        // key construction is the price of the map representation
        self.entries
            .get(&(bra.clone(), ket.clone()))
            .copied()
            .unwrap_or_default()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&(Graph, Graph), &Complex64)> {
        self.entries.iter()
    }

    pub fn entry_count(&self) -> usize {
        self.entries.len()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    /// `(Aψ)(H) = Σ_G ⟨H|A|G⟩ ψ(G)`.
    pub fn apply(&self, psi: &Ket) -> Ket {
        let mut out = Ket::zero();
        for ((bra, ket), amp) in &self.entries {
            let a = psi.amplitude(ket);
            if a.norm() > 0.0 {
                out.add_amplitude(bra.clone(), amp * a);
            }
        }
        out
    }

    /// Matrix product `self · other`.
    pub fn compose(&self, other: &OperatorMatrix) -> OperatorMatrix {
        // group other's entries by bra (row) so each of our entries joins
        // only the matching rows
        let mut rows: BTreeMap<&Graph, Vec<(&Graph, Complex64)>> = BTreeMap::new();
        for ((bra, ket), amp) in &other.entries {
            rows.entry(bra).or_default().push((ket, *amp));
        }
        let mut out = OperatorMatrix::zero();
        for ((bra, mid), a) in &self.entries {
            if let Some(row) = rows.get(mid) {
                for (ket, b) in row {
                    out.add_entry(bra.clone(), (*ket).clone(), a * b);
                }
            }
        }
        if self.role == OpRole::TraceClass || other.role == OpRole::TraceClass {
            out.role = OpRole::TraceClass;
        }
        out
    }

    /// Conjugate transpose. Exact: `adjoint(adjoint(A)) == A`.
    pub fn adjoint(&self) -> OperatorMatrix {
        let mut out = OperatorMatrix::zero();
        out.role = self.role;
        for ((bra, ket), amp) in &self.entries {
            out.entries.insert((ket.clone(), bra.clone()), amp.conj());
        }
        out
    }

    pub fn scale(&self, factor: Complex64) -> OperatorMatrix {
        let mut out = OperatorMatrix::zero();
        out.role = self.role;
        for ((bra, ket), amp) in &self.entries {
            out.add_entry(bra.clone(), ket.clone(), amp * factor);
        }
        out
    }

    pub fn add(&self, other: &OperatorMatrix) -> OperatorMatrix {
        let mut out = self.clone();
        for ((bra, ket), amp) in &other.entries {
            out.add_entry(bra.clone(), ket.clone(), *amp);
        }
        out
    }

    pub fn sub(&self, other: &OperatorMatrix) -> OperatorMatrix {
        self.add(&other.scale(Complex64::new(-1.0, 0.0)))
    }

    /// `Σ_G ⟨G|A|G⟩`.
    pub fn full_trace(&self) -> Complex64 {
        self.entries
            .iter()
            .filter(|((bra, ket), _)| bra == ket)
            .map(|(_, amp)| amp)
            .sum()
    }

    /// Largest entrywise modulus.
    pub fn max_norm(&self) -> f64 {
        self.entries.values().map(|a| a.norm()).fold(0.0, f64::max)
    }

    /// Largest entrywise deviation between two operators.
    pub fn max_abs_diff(&self, other: &OperatorMatrix) -> f64 {
        let mut dev: f64 = 0.0;
        for (key, a) in &self.entries {
            dev = dev.max((a - other.entries.get(key).copied().unwrap_or_default()).norm());
        }
        for (key, b) in &other.entries {
            if !self.entries.contains_key(key) {
                dev = dev.max(b.norm());
            }
        }
        dev
    }

    pub fn approx_eq(&self, other: &OperatorMatrix, tol: f64) -> bool {
        self.max_abs_diff(other) <= tol
    }

    /// True iff `‖A†A − I‖_max ≤ tol` and `‖AA† − I‖_max ≤ tol` over the
    /// enumerated basis of `universe`.
    pub fn is_unitary(&self, universe: &Universe, tol: f64) -> Result<bool> {
        let id = OperatorMatrix::identity(universe)?;
        let adj = self.adjoint();
        Ok(adj.compose(self).max_abs_diff(&id) <= tol
            && self.compose(&adj).max_abs_diff(&id) <= tol)
    }

    /// True iff every stored entry relating graphs with different vertex
    /// supports is below tolerance.
    pub fn is_name_preserving(&self, tol: f64) -> bool {
        self.entries
            .iter()
            .all(|((bra, ket), amp)| bra.support() == ket.support() || amp.norm() <= tol)
    }
}

/// Unitarity deviation: how far `A` is from satisfying `A†A = AA† = I`.
pub fn unitarity_deviation(a: &OperatorMatrix, universe: &Universe) -> Result<f64> {
    let id = OperatorMatrix::identity(universe)?;
    let adj = a.adjoint();
    Ok(adj
        .compose(a)
        .max_abs_diff(&id)
        .max(a.compose(&adj).max_abs_diff(&id)))
}

/// Requires `a` to be unitary within `tol`, for deciders whose statements
/// presuppose unitarity.
pub fn require_unitary(a: &OperatorMatrix, universe: &Universe, tol: f64) -> Result<()> {
    let dev = unitarity_deviation(a, universe)?;
    if dev > tol {
        return Err(Error::NotUnitary { max_deviation: dev });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::System;
    use crate::ket::CMP_TOL;

    fn g(tokens: &[&str]) -> Graph {
        Graph::new(tokens.iter().map(|t| System::parse_token(t).unwrap())).unwrap()
    }

    fn u2s2() -> Universe {
        Universe::new(["u", "v"], ["b", "w"]).unwrap()
    }

    #[test]
    fn identity_applies_as_identity() {
        let id = OperatorMatrix::identity(&u2s2()).unwrap();
        let psi = Ket::from_amplitudes([
            (g(&["w.u"]), Complex64::new(0.6, 0.0)),
            (g(&["b.v"]), Complex64::new(0.0, 0.8)),
        ]);
        assert!(id.apply(&psi).approx_eq(&psi, CMP_TOL));
    }

    #[test]
    fn ket_bra_maps_source_to_target() {
        let a = OperatorMatrix::ket_bra(g(&["b.u"]), g(&["w.u"]));
        let out = a.apply(&Ket::basis(g(&["w.u"])));
        assert!(out.approx_eq(&Ket::basis(g(&["b.u"])), CMP_TOL));
        assert!(a.apply(&Ket::basis(g(&["b.u"]))).is_zero());
    }

    #[test]
    fn adjoint_swaps_ket_bra_and_is_involutive() {
        let a = OperatorMatrix::ket_bra(g(&["b.u"]), g(&["w.u"]));
        assert_eq!(a.adjoint(), OperatorMatrix::ket_bra(g(&["w.u"]), g(&["b.u"])));
        let mixed = OperatorMatrix::from_entries([
            (g(&["b.u"]), g(&["w.u"]), Complex64::new(0.3, 0.4)),
            (Graph::empty(), g(&["b.v"]), Complex64::new(-1.0, 2.0)),
        ]);
        assert_eq!(mixed.adjoint().adjoint(), mixed);
    }

    #[test]
    fn compose_with_identity_is_identity_map() {
        let u = u2s2();
        let id = OperatorMatrix::identity(&u).unwrap();
        let a = OperatorMatrix::from_entries([
            (g(&["b.u"]), g(&["w.u"]), Complex64::new(0.3, 0.4)),
            (g(&["w.v"]), g(&["b.v"]), Complex64::new(1.5, 0.0)),
        ]);
        assert!(a.compose(&id).approx_eq(&a, CMP_TOL));
        assert!(id.compose(&a).approx_eq(&a, CMP_TOL));
    }

    #[test]
    fn full_trace_of_projectors_and_coherences() {
        let p = OperatorMatrix::ket_bra(g(&["w.u"]), g(&["w.u"]));
        assert!((p.full_trace() - Complex64::new(1.0, 0.0)).norm() < 1e-12);
        let c = OperatorMatrix::ket_bra(g(&["w.u"]), g(&["b.u"]));
        assert!(c.full_trace().norm() < 1e-12);
    }

    #[test]
    fn identity_is_unitary_rank_one_is_not() {
        let u = u2s2();
        let id = OperatorMatrix::identity(&u).unwrap();
        assert!(id.is_unitary(&u, CMP_TOL).unwrap());
        let a = OperatorMatrix::ket_bra(g(&["b.u"]), g(&["w.u"]));
        assert!(!a.is_unitary(&u, CMP_TOL).unwrap());
    }

    #[test]
    fn name_preservation_checks_vertex_supports() {
        let id = OperatorMatrix::identity(&u2s2()).unwrap();
        assert!(id.is_name_preserving(CMP_TOL));
        let drop = OperatorMatrix::ket_bra(Graph::empty(), g(&["w.u"]));
        assert!(!drop.is_name_preserving(CMP_TOL));
        // same vertex set, different states: still name-preserving
        let recolor = OperatorMatrix::ket_bra(g(&["b.u"]), g(&["w.u"]));
        assert!(recolor.is_name_preserving(CMP_TOL));
    }

    #[test]
    fn adjoint_correctness_against_inner_products() {
        // ⟨φ|Aψ⟩ = ⟨A†φ|ψ⟩ on a handful of assembled vectors
        let a = OperatorMatrix::from_entries([
            (g(&["b.u"]), g(&["w.u"]), Complex64::new(0.3, 0.4)),
            (g(&["w.v"]), g(&["b.v"]), Complex64::new(-0.2, 1.1)),
            (Graph::empty(), Graph::empty(), Complex64::new(0.0, -0.5)),
        ]);
        let phi = Ket::from_amplitudes([
            (g(&["b.u"]), Complex64::new(0.5, 0.1)),
            (Graph::empty(), Complex64::new(-0.3, 0.2)),
        ]);
        let psi = Ket::from_amplitudes([
            (g(&["w.u"]), Complex64::new(0.9, -0.4)),
            (Graph::empty(), Complex64::new(0.2, 0.2)),
        ]);
        let lhs = phi.inner(&a.apply(&psi));
        let rhs = a.adjoint().apply(&phi).inner(&psi);
        assert!((lhs - rhs).norm() < 1e-12);
    }
}
