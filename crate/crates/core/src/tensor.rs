//! Generalised traceout and tensor product induced by a restriction, the
//! consistency predicates that govern when tensors vanish, and entanglement
//! entropy across a restriction.
//!
//! The traceout extends `|G⟩⟨H| ↦ |G_χ⟩⟨H_χ|·⟨H_χ̄|G_χ̄⟩` linearly. The
//! tensor weaves a selected part and a complement part back into one graph:
//! `|L⟩ ⊗ |R⟩` is `|G⟩` when `L = G_χ` and `R = G_χ̄` for some `G`, and zero
//! otherwise — any reconstituting `G` must equal `L ∪ R`, so the basis case
//! is computed union-first and then verified against both restriction
//! equations.

use crate::basis::BasisIndex;
use crate::eigen::hermitian_eigenvalues;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::ket::{Ket, CMP_TOL, ZERO_TOL};
use crate::operator::OperatorMatrix;
use crate::restriction::Restriction;
use num_complex::Complex64;

/// `ρ|χ`: sums `ρ_{GH} |G_χ⟩⟨H_χ|` over entries whose complement parts
/// coincide. Tracing out through the empty selector yields the full trace
/// times `|∅⟩⟨∅|`.
pub fn traceout(rho: &OperatorMatrix, chi: &Restriction) -> Result<OperatorMatrix> {
    let mut out = OperatorMatrix::zero().with_role(rho.role());
    for ((g, h), amp) in rho.iter() {
        let g_co = chi.complement_part(g)?;
        let h_co = chi.complement_part(h)?;
        if g_co == h_co {
            out.add_entry(chi.restrict(g)?, chi.restrict(h)?, *amp);
        }
    }
    Ok(out)
}

/// Basis case of the tensor: `|left⟩ ⊗ |right⟩` as a graph, or `None` when
/// no graph decomposes into exactly these two parts under `chi`.
pub fn tensor_basis(left: &Graph, right: &Graph, chi: &Restriction) -> Result<Option<Graph>> {
    let candidate = match left.union(right) {
        Ok(g) => g,
        Err(_) => return Ok(None),
    };
    if &chi.restrict(&candidate)? == left && &chi.complement_part(&candidate)? == right {
        Ok(Some(candidate))
    } else {
        Ok(None)
    }
}

/// `|φ⟩ ⊗ |ψ⟩` by bilinear extension of the basis case. The zero ket is a
/// legitimate result.
pub fn tensor_kets(phi: &Ket, psi: &Ket, chi: &Restriction) -> Result<Ket> {
    let mut out = Ket::zero();
    for (l, a) in phi.iter() {
        for (r, b) in psi.iter() {
            if let Some(g) = tensor_basis(l, r, chi)? {
                out.add_amplitude(g, a * b);
            }
        }
    }
    Ok(out)
}

/// `A ⊗ B` by bilinear extension of the rank-one case
/// `|G⟩⟨H| ⊗ |G'⟩⟨H'| = (|G⟩ ⊗ |G'⟩)(⟨H| ⊗ ⟨H'|)`.
pub fn tensor_ops(
    a: &OperatorMatrix,
    b: &OperatorMatrix,
    chi: &Restriction,
) -> Result<OperatorMatrix> {
    let mut out = OperatorMatrix::zero();
    for ((ga, ha), amp_a) in a.iter() {
        for ((gb, hb), amp_b) in b.iter() {
            let ket_side = tensor_basis(ga, gb, chi)?;
            let bra_side = tensor_basis(ha, hb, chi)?;
            if let (Some(g), Some(h)) = (ket_side, bra_side) {
                out.add_entry(g, h, amp_a * amp_b);
            }
        }
    }
    Ok(out)
}

/// The closed-form route to `A ⊗ B`: sum `A_{G_χ H_χ} B_{G_χ̄ H_χ̄} |G⟩⟨H|`
/// over every basis pair of an enumerated universe. Used by the harness to
/// cross-check [`tensor_ops`].
pub fn tensor_ops_closed_form(
    a: &OperatorMatrix,
    b: &OperatorMatrix,
    chi: &Restriction,
    basis: &BasisIndex,
) -> Result<OperatorMatrix> {
    let table = basis.tabulate(chi)?;
    let mut out = OperatorMatrix::zero();
    for g in 0..basis.len() as u32 {
        for h in 0..basis.len() as u32 {
            let amp_a = a.entry(
                basis.graph(table.part[g as usize]),
                basis.graph(table.part[h as usize]),
            );
            if amp_a.norm() <= ZERO_TOL {
                continue;
            }
            let amp_b = b.entry(
                basis.graph(table.co_part[g as usize]),
                basis.graph(table.co_part[h as usize]),
            );
            if amp_b.norm() <= ZERO_TOL {
                continue;
            }
            out.add_entry(basis.graph(g).clone(), basis.graph(h).clone(), amp_a * amp_b);
        }
    }
    Ok(out)
}

/// Parameters of the lifted channel `ρ ↦ ((.)|χ ⊗_ζ I)(ρ)`: trace out
/// through `inner` within the part selected by `outer`, leaving the
/// `outer`-complement untouched. `outer = None` (or the whole-graph
/// selector) degrades to a plain traceout.
#[derive(Debug, Clone)]
pub struct TraceChannelSpec {
    pub inner: Restriction,
    pub outer: Option<Restriction>,
}

impl TraceChannelSpec {
    pub fn plain(inner: Restriction) -> Self {
        Self { inner, outer: None }
    }

    pub fn lifted(inner: Restriction, outer: Restriction) -> Self {
        Self {
            inner,
            outer: Some(outer),
        }
    }
}

/// Applies the lifted trace channel by linear extension of its basis rule:
/// the `outer` part of each graph is traced through `inner`, then woven
/// back against the untouched `outer`-complement.
pub fn lifted_trace_channel(
    rho: &OperatorMatrix,
    spec: &TraceChannelSpec,
) -> Result<OperatorMatrix> {
    let outer = match &spec.outer {
        Some(z) => z.clone(),
        None => Restriction::whole(),
    };
    let chi = &spec.inner;
    let mut out = OperatorMatrix::zero().with_role(rho.role());
    for ((g, h), amp) in rho.iter() {
        let g_sel = outer.restrict(g)?;
        let g_rest = g.difference(&g_sel);
        let h_sel = outer.restrict(h)?;
        let h_rest = h.difference(&h_sel);

        let g_inner = chi.restrict(&g_sel)?;
        let g_inner_co = g_sel.difference(&g_inner);
        let h_inner = chi.restrict(&h_sel)?;
        let h_inner_co = h_sel.difference(&h_inner);
        if g_inner_co != h_inner_co {
            continue;
        }
        let ket_side = tensor_basis(&g_inner, &g_rest, &outer)?;
        let bra_side = tensor_basis(&h_inner, &h_rest, &outer)?;
        if let (Some(gk), Some(hk)) = (ket_side, bra_side) {
            out.add_entry(gk, hk, *amp);
        }
    }
    Ok(out)
}

/// Kets are consistent when every support pair weaves to a nonzero tensor.
pub fn is_consistent_kets(phi: &Ket, psi: &Ket, chi: &Restriction) -> Result<bool> {
    for (l, _) in phi.iter() {
        for (r, _) in psi.iter() {
            if tensor_basis(l, r, chi)?.is_none() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Operators are consistent when every pair of stored entries weaves to
/// nonzero tensors on both the ket and the bra side.
pub fn is_consistent_ops(
    rho: &OperatorMatrix,
    sigma: &OperatorMatrix,
    chi: &Restriction,
) -> Result<bool> {
    for ((g, h), _) in rho.iter() {
        for ((gp, hp), _) in sigma.iter() {
            if tensor_basis(g, gp, chi)?.is_none() || tensor_basis(h, hp, chi)?.is_none() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// An operator preserves consistency when acting on a selected part never
/// produces a state that fails to weave against the untouched complement —
/// for the operator and for its adjoint, over every basis graph of the
/// universe.
pub fn is_consistency_preserving(
    a: &OperatorMatrix,
    chi: &Restriction,
    basis: &BasisIndex,
) -> Result<bool> {
    let table = basis.tabulate(chi)?;
    let idx = basis.index_op(a)?;
    for g in 0..basis.len() as u32 {
        let part = table.part[g as usize];
        let co = table.co_part[g as usize];
        // ⟨H|A|G_χ⟩ ≠ 0 must imply |H⟩ ⊗ |G_χ̄⟩ ≠ 0
        for &(h, _) in &idx.cols[part as usize] {
            if table.tensor_nonzero(h, co).is_none() {
                return Ok(false);
            }
        }
        // same for the adjoint: ⟨H|A†|G_χ⟩ = conj ⟨G_χ|A|H⟩, so walk the row
        for &(h, _) in &idx.rows[part as usize] {
            if table.tensor_nonzero(h, co).is_none() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Von Neumann entropy, in bits, of the reduced state of `psi` across
/// `chi`: eigenvalues of `traceout(|ψ⟩⟨ψ|, χ)` fed through `−Σ λ log₂ λ`.
pub fn entanglement_entropy(psi: &Ket, chi: &Restriction) -> Result<f64> {
    let norm = psi.norm();
    if (norm - 1.0).abs() > CMP_TOL {
        return Err(Error::NotNormalized { norm });
    }
    let mut projector = OperatorMatrix::zero();
    for (g, a) in psi.iter() {
        for (h, b) in psi.iter() {
            projector.add_entry(g.clone(), h.clone(), a * b.conj());
        }
    }
    let reduced = traceout(&projector, chi)?;
    // the reduced state lives on the range of chi; index only that subspace
    let mut support: Vec<&Graph> = Vec::new();
    for ((g, h), _) in reduced.iter() {
        support.push(g);
        support.push(h);
    }
    support.sort();
    support.dedup();
    let n = support.len();
    let mut dense = vec![Complex64::default(); n * n];
    for ((g, h), amp) in reduced.iter() {
        let r = support.binary_search(&g).unwrap();
        let c = support.binary_search(&h).unwrap();
        dense[r * n + c] = *amp;
    }
    let eigs = hermitian_eigenvalues(&dense, n);
    let mut entropy = 0.0;
    for lambda in eigs {
        if lambda > ZERO_TOL {
            entropy -= lambda * lambda.log2();
        }
    }
    Ok(entropy)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Universe;

    fn g(tokens: &[&str]) -> Graph {
        Graph::from_tokens(tokens).unwrap()
    }

    fn u2s2() -> Universe {
        Universe::new(["u", "v"], ["b", "w"]).unwrap()
    }

    fn one() -> Complex64 {
        Complex64::new(1.0, 0.0)
    }

    #[test]
    fn traceout_keeps_diagonal_and_zeroes_mismatched_complements() {
        let chi = Restriction::by_vertex("u");
        // (|G⟩⟨G|)|χ = |G_χ⟩⟨G_χ|
        let rho = OperatorMatrix::ket_bra(g(&["w.u", "b.v"]), g(&["w.u", "b.v"]));
        let out = traceout(&rho, &chi).unwrap();
        assert!(out.approx_eq(&OperatorMatrix::ket_bra(g(&["w.u"]), g(&["w.u"])), CMP_TOL));
        // complement parts differ → zero
        let coh = OperatorMatrix::ket_bra(g(&["w.u", "b.v"]), g(&["w.u", "w.v"]));
        assert!(traceout(&coh, &chi).unwrap().is_zero());
    }

    #[test]
    fn traceout_through_empty_selector_is_full_trace() {
        let rho = OperatorMatrix::from_entries([
            (g(&["w.u"]), g(&["w.u"]), Complex64::new(0.25, 0.0)),
            (g(&["b.v"]), g(&["b.v"]), Complex64::new(0.75, 0.0)),
            (g(&["w.u"]), g(&["b.v"]), Complex64::new(0.1, 0.2)),
        ]);
        let out = traceout(&rho, &Restriction::none()).unwrap();
        assert_eq!(out.entry_count(), 1);
        let scalar = out.entry(&Graph::empty(), &Graph::empty());
        assert!((scalar - rho.full_trace()).norm() < 1e-12);
    }

    #[test]
    fn tensor_reconstitutes_restricted_parts() {
        let chi = Restriction::white_selector("w", "b");
        // |{w.u}⟩ ⊗ |{b.v}⟩ = |{w.u, b.v}⟩
        let woven = tensor_kets(
            &Ket::basis(g(&["w.u"])),
            &Ket::basis(g(&["b.v"])),
            &chi,
        )
        .unwrap();
        assert!(woven.approx_eq(&Ket::basis(g(&["w.u", "b.v"])), CMP_TOL));
        // all-black pair: the union keeps both blacks, so the left part is
        // wrong and the product vanishes
        let zero = tensor_kets(&Ket::basis(g(&["b.u"])), &Ket::basis(g(&["b.v"])), &chi).unwrap();
        assert!(zero.is_zero());
    }

    #[test]
    fn tensor_reconstitution_splits_any_graph() {
        let u = u2s2();
        let chi = Restriction::by_vertex("u");
        for graph in u.enumerate_graphs().unwrap() {
            let left = chi.restrict(&graph).unwrap();
            let right = chi.complement_part(&graph).unwrap();
            let woven = tensor_kets(&Ket::basis(left), &Ket::basis(right), &chi).unwrap();
            assert!(woven.approx_eq(&Ket::basis(graph), CMP_TOL));
        }
    }

    #[test]
    fn overlapping_parts_never_weave() {
        // disjoint nonempty G, M, H with G∪M∪H defined:
        // |G∪M⟩ ⊗ |M∪H⟩ = 0 whatever the selector
        let gm = g(&["w.u", "b.v"]);
        let mh = g(&["b.v", "w.x"]);
        for chi in [
            Restriction::by_vertex("u"),
            Restriction::by_vertex("v"),
            Restriction::by_state("w"),
            Restriction::white_selector("w", "b"),
            Restriction::whole(),
            Restriction::none(),
        ] {
            assert!(
                tensor_basis(&gm, &mh, &chi).unwrap().is_none(),
                "selector {} wove overlapping parts",
                chi.label()
            );
        }
    }

    #[test]
    fn tensor_ops_identity_times_identity() {
        let u = u2s2();
        let basis = BasisIndex::new(&u).unwrap();
        let id = OperatorMatrix::identity(&u).unwrap();
        let chi = Restriction::by_vertex("u");
        let woven = tensor_ops(&id, &id, &chi).unwrap();
        assert!(woven.approx_eq(&id, CMP_TOL));
        let closed = tensor_ops_closed_form(&id, &id, &chi, &basis).unwrap();
        assert!(closed.approx_eq(&id, CMP_TOL));
    }

    #[test]
    fn rank_one_tensor_basis_case() {
        let chi = Restriction::by_vertex("u");
        let a = OperatorMatrix::ket_bra(g(&["w.u"]), g(&["b.u"]));
        let b = OperatorMatrix::ket_bra(g(&["b.v"]), g(&["w.v"]));
        let woven = tensor_ops(&a, &b, &chi).unwrap();
        let expected = OperatorMatrix::ket_bra(g(&["w.u", "b.v"]), g(&["b.u", "w.v"]));
        assert!(woven.approx_eq(&expected, CMP_TOL));
    }

    #[test]
    fn lifted_channel_with_whole_outer_is_traceout() {
        let chi = Restriction::by_vertex("u");
        let rho = OperatorMatrix::from_entries([
            (g(&["w.u", "b.v"]), g(&["w.u", "b.v"]), one() * 0.5),
            (g(&["w.u", "b.v"]), g(&["b.u", "b.v"]), Complex64::new(0.0, 0.5)),
            (g(&["b.v"]), g(&["b.v"]), one() * 0.5),
        ]);
        let spec = TraceChannelSpec::lifted(chi.clone(), Restriction::whole());
        let lifted = lifted_trace_channel(&rho, &spec).unwrap();
        let plain = traceout(&rho, &chi).unwrap();
        assert!(lifted.approx_eq(&plain, CMP_TOL));
        let none_spec = TraceChannelSpec::plain(chi);
        assert!(lifted_trace_channel(&rho, &none_spec).unwrap().approx_eq(&plain, CMP_TOL));
    }

    #[test]
    fn lifted_channel_keeps_reweaving_diagonals_whole() {
        // diagonal case: the selected part is traced through the inner
        // selector and woven back against the untouched complement
        let spec = TraceChannelSpec::lifted(
            Restriction::white_selector("w", "b"),
            Restriction::by_vertex("u"),
        );
        let graph = g(&["w.u", "b.v"]);
        let rho = OperatorMatrix::ket_bra(graph.clone(), graph.clone());
        let out = lifted_trace_channel(&rho, &spec).unwrap();
        // inner part of {w.u} is {w.u} itself, so the diagonal survives whole
        assert!(out.approx_eq(&rho, CMP_TOL));
    }

    #[test]
    fn consistency_of_kets_under_white_selector() {
        let chi = Restriction::white_selector("w", "b");
        let wu = Ket::basis(g(&["w.u"]));
        let bv = Ket::basis(g(&["b.v"]));
        let bu = Ket::basis(g(&["b.u"]));
        assert!(is_consistent_kets(&wu, &bv, &chi).unwrap());
        // the relevant union is {b.u, b.v}, which is all black and selects
        // itself, not {b.u}
        assert!(!is_consistent_kets(&bu, &bv, &chi).unwrap());
        assert!(is_consistent_kets(&Ket::zero(), &bv, &chi).unwrap());
    }

    #[test]
    fn consistency_of_ops_under_white_selector() {
        let chi = Restriction::white_selector("w", "b");
        let rho = OperatorMatrix::ket_bra(g(&["b.u"]), g(&["b.u"]));
        let sigma = OperatorMatrix::ket_bra(g(&["b.v"]), g(&["b.v"]));
        assert!(!is_consistent_ops(&rho, &sigma, &chi).unwrap());
        assert!(is_consistent_ops(&OperatorMatrix::zero(), &sigma, &chi).unwrap());
        // a split of one graph is always consistent
        let zeta = Restriction::by_vertex("u");
        let left = OperatorMatrix::ket_bra(g(&["w.u"]), g(&["w.u"]));
        let right = OperatorMatrix::ket_bra(g(&["b.v"]), g(&["b.v"]));
        assert!(is_consistent_ops(&left, &right, &zeta).unwrap());
    }

    #[test]
    fn identity_preserves_consistency() {
        let u = u2s2();
        let basis = BasisIndex::new(&u).unwrap();
        let id = OperatorMatrix::identity(&u).unwrap();
        let chi = Restriction::white_selector("w", "b");
        assert!(is_consistency_preserving(&id, &chi, &basis).unwrap());
    }

    #[test]
    fn entropy_of_basis_graph_is_zero() {
        let chi = Restriction::by_vertex("u");
        let e = entanglement_entropy(&Ket::basis(g(&["w.u", "b.v"])), &chi).unwrap();
        assert!(e.abs() < 1e-10);
    }

    #[test]
    fn entropy_distinguishes_product_from_entangled_superpositions() {
        let chi = Restriction::by_vertex("u");
        let inv = one() / 2.0_f64.sqrt();

        // same complement, different selected parts: reduced state is pure.
        // oracle: reduced = |φ⟩⟨φ| with φ = (|w.u⟩+|b.u⟩)/√2, eigenvalues {1, 0}
        let pure = Ket::from_amplitudes([
            (g(&["w.u", "b.v"]), inv),
            (g(&["b.u", "b.v"]), inv),
        ]);
        let e_pure = entanglement_entropy(&pure, &chi).unwrap();
        assert!(e_pure.abs() < 1e-10);

        // different complements and different parts: reduced state is
        // diag(1/2, 1/2), entropy = 1 bit by direct eigenvalue computation
        let mixed = Ket::from_amplitudes([
            (g(&["w.u", "b.v"]), inv),
            (g(&["b.u", "w.v"]), inv),
        ]);
        let e_mixed = entanglement_entropy(&mixed, &chi).unwrap();
        assert!((e_mixed - 1.0).abs() < 1e-10);
    }

    #[test]
    fn entropy_requires_normalization() {
        let chi = Restriction::by_vertex("u");
        let unnormalized = Ket::basis(g(&["w.u"])).scale(Complex64::new(2.0, 0.0));
        assert!(matches!(
            entanglement_entropy(&unnormalized, &chi),
            Err(Error::NotNormalized { .. })
        ));
    }
}
