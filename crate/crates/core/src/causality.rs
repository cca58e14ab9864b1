//! Causality deciders.
//!
//! A unitary is causal between two restrictions when the selected part of
//! its output depends on the input only through the input's selected part:
//! `(UρU†)|ζ = (Uρ|χU†)|ζ` for every state. The dual characterization pulls
//! every ζ-local observable back to a χ-local one; the decider evaluates
//! both and errors if they ever disagree.

use crate::basis::{BasisIndex, RestrictionTable};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::ket::CMP_TOL;
use crate::locality::{dual_observables, fast_is_strictly_local, schrodinger_picture};
use crate::operator::{require_unitary, OperatorMatrix};
use crate::restriction::Restriction;
use num_complex::Complex64;

/// Verdict of the causality decider. `primal` and `dual` are computed
/// independently and always agree (the decider errors otherwise).
#[derive(Debug, Clone)]
pub struct CausalityVerdict {
    /// State picture: output reductions depend only on input reductions.
    pub primal: bool,
    /// Observable picture: conjugation pulls local observables back to
    /// local observables.
    pub dual: bool,
    /// When causal: do the strictly-local members of the observable family
    /// pull back to strictly local operators? `None` when not causal.
    pub strict_transfer: Option<bool>,
    /// First violating `(bra, ket)` basis pair in index order.
    pub counterexample: Option<(Graph, Graph)>,
}

impl CausalityVerdict {
    pub fn is_causal(&self) -> bool {
        self.primal
    }
}

/// Small sorted sparse accumulator for one traced outer product.
fn traced_outer(
    col_g: &[(u32, Complex64)],
    col_h: &[(u32, Complex64)],
    table: &RestrictionTable,
    factor: Complex64,
) -> Vec<((u32, u32), Complex64)> {
    let mut acc: Vec<((u32, u32), Complex64)> = Vec::with_capacity(col_g.len() * col_h.len());
    for &(x, a) in col_g {
        for &(y, b) in col_h {
            if table.co_part[x as usize] == table.co_part[y as usize] {
                let key = (table.part[x as usize], table.part[y as usize]);
                let amp = factor * a * b.conj();
                match acc.binary_search_by_key(&key, |(k, _)| *k) {
                    Ok(i) => acc[i].1 += amp,
                    Err(i) => acc.insert(i, (key, amp)),
                }
            }
        }
    }
    acc
}

fn sparse_max_diff(
    lhs: &[((u32, u32), Complex64)],
    rhs: &[((u32, u32), Complex64)],
) -> f64 {
    let mut dev: f64 = 0.0;
    let (mut i, mut j) = (0, 0);
    while i < lhs.len() || j < rhs.len() {
        if j >= rhs.len() || (i < lhs.len() && lhs[i].0 < rhs[j].0) {
            dev = dev.max(lhs[i].1.norm());
            i += 1;
        } else if i >= lhs.len() || rhs[j].0 < lhs[i].0 {
            dev = dev.max(rhs[j].1.norm());
            j += 1;
        } else {
            dev = dev.max((lhs[i].1 - rhs[j].1).norm());
            i += 1;
            j += 1;
        }
    }
    dev
}

type PrimalOutcome = (bool, f64, Option<(u32, u32)>);

/// State-picture check on the spanning set `ρ = |G⟩⟨H|`, over the given
/// basis pairs.
fn primal_check(
    u_op: &OperatorMatrix,
    chi_table: &RestrictionTable,
    zeta_table: &RestrictionTable,
    basis: &BasisIndex,
    pairs: &[(u32, u32)],
    tol: f64,
) -> Result<PrimalOutcome> {
    let idx = basis.index_op(u_op)?;
    let mut ok = true;
    let mut max_dev: f64 = 0.0;
    let mut counterexample = None;
    for &(g, h) in pairs {
        // (U|G⟩⟨H|U†)|ζ
        let lhs = traced_outer(
            &idx.cols[g as usize],
            &idx.cols[h as usize],
            zeta_table,
            Complex64::new(1.0, 0.0),
        );
        // (U(|G⟩⟨H|)|χ U†)|ζ = δ(G_χ̄, H_χ̄) · (U|G_χ⟩⟨H_χ|U†)|ζ
        let rhs = if chi_table.co_part[g as usize] == chi_table.co_part[h as usize] {
            traced_outer(
                &idx.cols[chi_table.part[g as usize] as usize],
                &idx.cols[chi_table.part[h as usize] as usize],
                zeta_table,
                Complex64::new(1.0, 0.0),
            )
        } else {
            Vec::new()
        };
        let dev = sparse_max_diff(&lhs, &rhs);
        if dev > max_dev {
            max_dev = dev;
        }
        if dev > tol {
            ok = false;
            let cand = (g, h);
            if counterexample.is_none_or(|c| cand < c) {
                counterexample = Some(cand);
            }
        }
    }
    Ok((ok, max_dev, counterexample))
}

/// Observable-picture check: every member of the ζ observable family must
/// conjugate back to a χ-local operator.
fn dual_check(
    u_op: &OperatorMatrix,
    chi_table: &RestrictionTable,
    zeta_table: &RestrictionTable,
    basis: &BasisIndex,
    tol: f64,
) -> Result<(bool, Option<(u32, u32)>)> {
    let adj = u_op.adjoint();
    let mut ok = true;
    let mut counterexample = None;
    for member in dual_observables(zeta_table, basis)? {
        let pulled = adj.compose(&member).compose(u_op);
        let outcome = schrodinger_picture(&basis.index_op(&pulled)?, chi_table, tol);
        if !outcome.ok {
            ok = false;
            if counterexample.is_none() {
                counterexample = outcome.counterexample;
            }
        }
    }
    Ok((ok, counterexample))
}

/// Full causality verdict for a unitary between two validated restrictions.
pub fn is_causal(
    u_op: &OperatorMatrix,
    chi: &Restriction,
    zeta: &Restriction,
    basis: &BasisIndex,
) -> Result<CausalityVerdict> {
    require_unitary(u_op, basis.universe(), CMP_TOL)?;
    let pairs: Vec<(u32, u32)> = (0..basis.len() as u32)
        .flat_map(|g| (0..basis.len() as u32).map(move |h| (g, h)))
        .collect();
    is_causal_on(u_op, chi, zeta, basis, &pairs)
}

/// Causality restricted to a spanning set over a subspace: only the given
/// `(ket, bra)` basis pairs are quantified. Unitarity is the caller's
/// obligation here (the operator may only be unitary on the subspace).
pub fn is_causal_on(
    u_op: &OperatorMatrix,
    chi: &Restriction,
    zeta: &Restriction,
    basis: &BasisIndex,
    pairs: &[(u32, u32)],
) -> Result<CausalityVerdict> {
    let chi_table = basis.tabulate(chi)?;
    let zeta_table = basis.tabulate(zeta)?;

    let (primal, _dev, primal_ce) =
        primal_check(u_op, &chi_table, &zeta_table, basis, pairs, CMP_TOL)?;
    let full_span = pairs.len() == basis.len() * basis.len();
    let (dual, dual_ce) = if full_span {
        dual_check(u_op, &chi_table, &zeta_table, basis, CMP_TOL)?
    } else {
        // the observable picture quantifies over all states; on a proper
        // subspace the primal verdict is the only meaningful one
        (primal, None)
    };
    if primal != dual {
        return Err(Error::EquivalenceViolation {
            what: "causality pictures".into(),
            detail: format!(
                "primal={primal} dual={dual} under (`{}`, `{}`)",
                chi.label(),
                zeta.label()
            ),
        });
    }

    let strict_transfer = if primal && full_span {
        let adj = u_op.adjoint();
        let mut all = true;
        for member in dual_observables(&zeta_table, basis)? {
            if !fast_is_strictly_local(&member, zeta, &zeta_table, basis)? {
                continue;
            }
            let pulled = adj.compose(&member).compose(u_op);
            if !fast_is_strictly_local(&pulled, chi, &chi_table, basis)? {
                all = false;
                break;
            }
        }
        Some(all)
    } else {
        None
    };

    let counterexample = primal_ce
        .or(dual_ce)
        .map(|(g, h)| (basis.graph(h).clone(), basis.graph(g).clone()));
    Ok(CausalityVerdict {
        primal,
        dual,
        strict_transfer,
        counterexample,
    })
}

/// State-picture causality alone, quantified over every basis pair. The
/// cheap route when the intermediate selector has a large range and the
/// full observable-family check would be disproportionate.
pub fn is_causal_primal(
    u_op: &OperatorMatrix,
    chi: &Restriction,
    zeta: &Restriction,
    basis: &BasisIndex,
) -> Result<bool> {
    require_unitary(u_op, basis.universe(), CMP_TOL)?;
    let chi_table = basis.tabulate(chi)?;
    let zeta_table = basis.tabulate(zeta)?;
    let pairs: Vec<(u32, u32)> = (0..basis.len() as u32)
        .flat_map(|g| (0..basis.len() as u32).map(move |h| (g, h)))
        .collect();
    let (ok, _, _) = primal_check(u_op, &chi_table, &zeta_table, basis, &pairs, CMP_TOL)?;
    Ok(ok)
}

/// Composability: `u` causal from `chi` to `zeta` and `v` causal from
/// `zeta` to `eta` must make `v·u` causal from `chi` to `eta`. The two
/// hypotheses are verified in the state picture; the conclusion runs the
/// full two-picture decider. Returns the conjunction; a `false` is a law
/// failure, not an error.
pub fn causal_compose_check(
    u_op: &OperatorMatrix,
    v_op: &OperatorMatrix,
    chi: &Restriction,
    zeta: &Restriction,
    eta: &Restriction,
    basis: &BasisIndex,
) -> Result<bool> {
    let first = is_causal_primal(u_op, chi, zeta, basis)?;
    let second = is_causal_primal(v_op, zeta, eta, basis)?;
    let composed = is_causal(&v_op.compose(u_op), chi, eta, basis)?;
    Ok(first && second && composed.primal && composed.dual)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Universe;

    fn u2s2_basis() -> BasisIndex {
        BasisIndex::new(&Universe::new(["u", "v"], ["b", "w"]).unwrap()).unwrap()
    }

    #[test]
    fn identity_is_causal_between_any_selector_and_itself() {
        let basis = u2s2_basis();
        let id = OperatorMatrix::identity(basis.universe()).unwrap();
        for chi in [
            Restriction::by_vertex("u"),
            Restriction::white_selector("w", "b"),
            Restriction::whole(),
        ] {
            let verdict = is_causal(&id, &chi, &chi, &basis).unwrap();
            assert!(verdict.primal && verdict.dual, "under {}", chi.label());
            assert_eq!(verdict.strict_transfer, Some(true));
        }
    }

    #[test]
    fn any_unitary_is_causal_between_whole_and_whole() {
        let basis = u2s2_basis();
        // a permutation unitary: swap the states at vertex u
        let mut swap = OperatorMatrix::zero();
        for g in basis.graphs() {
            let mut target = Vec::new();
            for s in g.systems() {
                let flipped = if s.vertex == "u" {
                    let other = if s.state == "w" { "b" } else { "w" };
                    crate::graph::System::new(other, s.vertex.clone())
                } else {
                    s.clone()
                };
                target.push(flipped);
            }
            let image = Graph::new(target).unwrap();
            swap.add_entry(image, g.clone(), Complex64::new(1.0, 0.0));
        }
        let whole = Restriction::whole();
        let verdict = is_causal(&swap, &whole, &whole, &basis).unwrap();
        assert!(verdict.primal && verdict.dual);
    }

    #[test]
    fn rejects_non_unitary_input() {
        let basis = u2s2_basis();
        let proj = OperatorMatrix::ket_bra(Graph::empty(), Graph::empty());
        let chi = Restriction::by_vertex("u");
        assert!(matches!(
            is_causal(&proj, &chi, &chi, &basis),
            Err(Error::NotUnitary { .. })
        ));
    }

    #[test]
    fn compose_check_with_identities() {
        let basis = u2s2_basis();
        let id = OperatorMatrix::identity(basis.universe()).unwrap();
        let chi = Restriction::by_vertex("u");
        assert!(causal_compose_check(&id, &id, &chi, &chi, &chi, &basis).unwrap());
    }
}
