//! Locality deciders.
//!
//! An operator is local on a restriction when it acts only on the selected
//! part of every graph, leaving the complement untouched. Three equivalent
//! characterizations exist — the entrywise identity
//! `⟨H|A|G⟩ = ⟨H_χ|A|G_χ⟩⟨H_χ̄|G_χ̄⟩`, the operational form `A = A ⊗ I`,
//! and the observable form `Tr(Aρ) = Tr(Aρ|χ)` — and the decider evaluates
//! all three independently, erroring out if they ever disagree.

use crate::basis::{BasisIndex, IndexedOp, RestrictionTable};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::ket::{CMP_TOL, ZERO_TOL};
use crate::operator::OperatorMatrix;
use crate::restriction::Restriction;
use crate::tensor::{is_consistency_preserving, traceout};
use num_complex::Complex64;

/// Verdict of the locality decider. The three picture fields are computed
/// independently and always agree (the decider errors otherwise); `strict`
/// additionally demands consistency preservation.
#[derive(Debug, Clone)]
pub struct LocalityVerdict {
    pub schrodinger: bool,
    pub operational: bool,
    pub heisenberg: bool,
    pub strict: bool,
    /// First violating `(bra, ket)` pair in basis order, when non-local.
    pub counterexample: Option<(Graph, Graph)>,
}

impl LocalityVerdict {
    pub fn is_local(&self) -> bool {
        self.schrodinger
    }
}

/// `B ⊗ I` over the enumerated basis: the canonical way to manufacture a
/// local operator from an arbitrary one.
pub fn localize(
    b: &OperatorMatrix,
    chi: &Restriction,
    basis: &BasisIndex,
) -> Result<OperatorMatrix> {
    let table = basis.tabulate(chi)?;
    localize_with_table(b, &table, basis)
}

pub(crate) fn localize_with_table(
    b: &OperatorMatrix,
    table: &RestrictionTable,
    basis: &BasisIndex,
) -> Result<OperatorMatrix> {
    let mut out = OperatorMatrix::zero();
    for ((bra, ket), amp) in b.iter() {
        let (Some(x), Some(y)) = (basis.index_of(bra), basis.index_of(ket)) else {
            return Err(Error::Input(format!(
                "operator entry ({bra}, {ket}) is outside the universe"
            )));
        };
        for (co, _) in &table.groups_by_co_part {
            let bra_whole = table.tensor_nonzero(x, *co);
            let ket_whole = table.tensor_nonzero(y, *co);
            if let (Some(g), Some(h)) = (bra_whole, ket_whole) {
                out.add_entry(basis.graph(g).clone(), basis.graph(h).clone(), *amp);
            }
        }
    }
    Ok(out)
}

/// Pairs that can carry a nonzero side in the locality identity: every
/// stored entry of `a`, plus every pair within a shared-complement group.
/// Outside these, both sides of the identity are zero by construction.
fn candidate_pairs<'a>(
    idx: &'a IndexedOp,
    table: &'a RestrictionTable,
) -> impl Iterator<Item = (u32, u32)> + 'a {
    let stored = idx
        .entries
        .keys()
        .copied()
        .collect::<std::collections::BTreeSet<_>>();
    let grouped = table
        .groups_by_co_part
        .iter()
        .flat_map(|(_, members)| {
            members
                .iter()
                .flat_map(move |&h| members.iter().map(move |&g| (h, g)))
        });
    stored.into_iter().chain(grouped)
}

/// `(entrywise, operational, observable, counterexample)`.
pub type PictureVerdicts = (bool, bool, bool, Option<(Graph, Graph)>);

pub(crate) struct PictureOutcome {
    pub(crate) ok: bool,
    pub(crate) max_deviation: f64,
    pub(crate) counterexample: Option<(u32, u32)>,
}

fn record(outcome: &mut PictureOutcome, bra: u32, ket: u32, dev: f64, tol: f64) {
    if dev > outcome.max_deviation {
        outcome.max_deviation = dev;
    }
    if dev > tol {
        outcome.ok = false;
        let cand = (bra, ket);
        if outcome.counterexample.is_none_or(|c| cand < c) {
            outcome.counterexample = Some(cand);
        }
    }
}

/// Entrywise identity `⟨H|A|G⟩ = ⟨H_χ|A|G_χ⟩⟨H_χ̄|G_χ̄⟩` over all pairs.
/// Also the workhorse the causality decider uses on conjugated observables.
pub(crate) fn schrodinger_picture(
    idx: &IndexedOp,
    table: &RestrictionTable,
    tol: f64,
) -> PictureOutcome {
    let mut outcome = PictureOutcome {
        ok: true,
        max_deviation: 0.0,
        counterexample: None,
    };
    for (bra, ket) in candidate_pairs(idx, table) {
        let lhs = idx.entry(bra, ket);
        let delta = table.co_part[bra as usize] == table.co_part[ket as usize];
        let rhs = if delta {
            idx.entry(table.part[bra as usize], table.part[ket as usize])
        } else {
            Complex64::default()
        };
        record(&mut outcome, bra, ket, (lhs - rhs).norm(), tol);
    }
    outcome
}

/// Operational identity `A = A ⊗ I`, by materializing the localization.
fn operational_picture(
    a: &OperatorMatrix,
    basis: &BasisIndex,
    idx: &IndexedOp,
    table: &RestrictionTable,
    tol: f64,
) -> Result<PictureOutcome> {
    let localized = localize_with_table(a, table, basis)?;
    let mut outcome = PictureOutcome {
        ok: true,
        max_deviation: 0.0,
        counterexample: None,
    };
    // the localization only carries entries within shared-complement
    // groups, so the candidate pairs cover every entry of both sides
    let loc_idx = basis.index_op(&localized)?;
    for (bra, ket) in candidate_pairs(idx, table) {
        let dev = (idx.entry(bra, ket) - loc_idx.entry(bra, ket)).norm();
        record(&mut outcome, bra, ket, dev, tol);
    }
    Ok(outcome)
}

/// Observable identity `(Aρ)|∅ = (Aρ|χ)|∅` on the spanning set
/// `ρ = |G⟩⟨H|`, with the right-hand side computed through the traceout.
fn heisenberg_picture(
    idx: &IndexedOp,
    table: &RestrictionTable,
    basis: &BasisIndex,
    chi: &Restriction,
    tol: f64,
) -> Result<PictureOutcome> {
    let mut outcome = PictureOutcome {
        ok: true,
        max_deviation: 0.0,
        counterexample: None,
    };
    for (bra, ket) in candidate_pairs(idx, table) {
        // ρ = |ket⟩⟨bra| ⇒ Tr(Aρ) picks A's (bra, ket) coefficient out of
        // the column at `ket`
        let lhs: Complex64 = idx.cols[ket as usize]
            .iter()
            .filter(|(x, _)| *x == bra)
            .map(|(_, amp)| *amp)
            .sum();
        let rho = OperatorMatrix::ket_bra(basis.graph(ket).clone(), basis.graph(bra).clone());
        let reduced = traceout(&rho, chi)?;
        let mut rhs = Complex64::default();
        for ((g, h), amp) in reduced.iter() {
            // Tr(A·|g⟩⟨h|) = ⟨h|A|g⟩
            let (Some(gi), Some(hi)) = (basis.index_of(g), basis.index_of(h)) else {
                continue;
            };
            rhs += amp * idx.entry(hi, gi);
        }
        record(&mut outcome, bra, ket, (lhs - rhs).norm(), tol);
    }
    Ok(outcome)
}

/// Internal: the three locality pictures with agreement enforcement.
fn three_pictures(
    a: &OperatorMatrix,
    chi: &Restriction,
    basis: &BasisIndex,
    tol: f64,
) -> Result<PictureVerdicts> {
    let table = basis.tabulate(chi)?;
    let idx = basis.index_op(a)?;
    let s = schrodinger_picture(&idx, &table, tol);
    let o = operational_picture(a, basis, &idx, &table, tol)?;
    let h = heisenberg_picture(&idx, &table, basis, chi, tol)?;
    if s.ok != o.ok || s.ok != h.ok {
        return Err(Error::EquivalenceViolation {
            what: "locality pictures".into(),
            detail: format!(
                "entrywise={} operational={} observable={} under `{}`",
                s.ok,
                o.ok,
                h.ok,
                chi.label()
            ),
        });
    }
    let counterexample = [s.counterexample, o.counterexample, h.counterexample]
        .into_iter()
        .flatten()
        .min()
        .map(|(b, k)| (basis.graph(b).clone(), basis.graph(k).clone()));
    Ok((s.ok, o.ok, h.ok, counterexample))
}

/// The three locality pictures alone, skipping the strictness pass:
/// `(entrywise, operational, observable, counterexample)`. Cheaper than
/// [`is_local`] when strictness is not needed; agreement is still enforced.
pub fn pictures_only(
    a: &OperatorMatrix,
    chi: &Restriction,
    basis: &BasisIndex,
) -> Result<PictureVerdicts> {
    three_pictures(a, chi, basis, CMP_TOL)
}

/// Strict locality: local and consistency-preserving. Decided through the
/// definition and through the `A†A`/`AA†` characterization, which must
/// agree.
pub fn is_strictly_local(
    a: &OperatorMatrix,
    chi: &Restriction,
    basis: &BasisIndex,
) -> Result<bool> {
    let (local, _, _, _) = three_pictures(a, chi, basis, CMP_TOL)?;
    let by_definition = local && is_consistency_preserving(a, chi, basis)?;

    let adj = a.adjoint();
    let gram = adj.compose(a);
    let co_gram = a.compose(&adj);
    let (gram_local, _, _, _) = three_pictures(&gram, chi, basis, CMP_TOL)?;
    let (co_gram_local, _, _, _) = three_pictures(&co_gram, chi, basis, CMP_TOL)?;
    let by_characterization = local && gram_local && co_gram_local;

    if by_definition != by_characterization {
        return Err(Error::EquivalenceViolation {
            what: "strict locality".into(),
            detail: format!(
                "definition={by_definition} characterization={by_characterization} under `{}`",
                chi.label()
            ),
        });
    }
    Ok(by_definition)
}

/// Full locality verdict: the three pictures plus strictness.
pub fn is_local(
    a: &OperatorMatrix,
    chi: &Restriction,
    basis: &BasisIndex,
) -> Result<LocalityVerdict> {
    let (s, o, h, counterexample) = three_pictures(a, chi, basis, CMP_TOL)?;
    let strict = is_strictly_local(a, chi, basis)?;
    Ok(LocalityVerdict {
        schrodinger: s,
        operational: o,
        heisenberg: h,
        strict,
        counterexample,
    })
}

/// The spanning family of local observables for a tabulated restriction:
/// one `|x⟩⟨y| ⊗ I` per ordered pair of range graphs, built directly from
/// the reconstitution groups.
pub(crate) fn dual_observables(
    table: &RestrictionTable,
    basis: &BasisIndex,
) -> Result<Vec<OperatorMatrix>> {
    let mut family = Vec::with_capacity(table.range.len() * table.range.len());
    for &x in &table.range {
        for &y in &table.range {
            let mut op = OperatorMatrix::zero();
            for (co, _) in &table.groups_by_co_part {
                let bra_whole = table.tensor_nonzero(x, *co);
                let ket_whole = table.tensor_nonzero(y, *co);
                if let (Some(g), Some(h)) = (bra_whole, ket_whole) {
                    op.add_entry(
                        basis.graph(g).clone(),
                        basis.graph(h).clone(),
                        Complex64::new(1.0, 0.0),
                    );
                }
            }
            family.push(op);
        }
    }
    Ok(family)
}

/// Definition-level strictness without the cross-characterization pass:
/// entrywise locality plus consistency preservation. The heavy deciders use
/// this on large observable families; the equivalences it skips are
/// enforced by [`is_strictly_local`] wherever verdicts are reported.
pub(crate) fn fast_is_strictly_local(
    a: &OperatorMatrix,
    chi: &Restriction,
    table: &RestrictionTable,
    basis: &BasisIndex,
) -> Result<bool> {
    let idx = basis.index_op(a)?;
    if !schrodinger_picture(&idx, table, CMP_TOL).ok {
        return Ok(false);
    }
    is_consistency_preserving(a, chi, basis)
}

/// One tomography operator per ordered pair of range graphs.
#[derive(Debug, Clone)]
pub struct TomographyOp {
    /// Selected-part graph on the bra side of the probed coefficient.
    pub bra_part: Graph,
    /// Selected-part graph on the ket side of the probed coefficient.
    pub ket_part: Graph,
    pub op: OperatorMatrix,
}

/// The family `{ |H_χ⟩⟨G_χ| ⊗ I }` over ordered pairs of range graphs.
/// Each member is local by construction, and its expectation against `ρ`
/// recovers one coefficient of `ρ|χ`.
pub fn tomography_operators(
    chi: &Restriction,
    basis: &BasisIndex,
) -> Result<Vec<TomographyOp>> {
    let table = basis.tabulate(chi)?;
    let mut family = Vec::with_capacity(table.range.len() * table.range.len());
    for &h in &table.range {
        for &g in &table.range {
            let probe = OperatorMatrix::ket_bra(basis.graph(h).clone(), basis.graph(g).clone());
            family.push(TomographyOp {
                bra_part: basis.graph(g).clone(),
                ket_part: basis.graph(h).clone(),
                op: localize(&probe, chi, basis)?,
            });
        }
    }
    Ok(family)
}

/// True iff every tomography expectation agrees on `rho` and `sigma`. The
/// result is cross-checked against direct equality of the traceouts
/// whenever the family is complete for the inputs (always for the full
/// family; for the name-preserving family only when both inputs are
/// name-preserving).
pub fn tomography_equal(
    rho: &OperatorMatrix,
    sigma: &OperatorMatrix,
    chi: &Restriction,
    basis: &BasisIndex,
    name_preserving_only: bool,
) -> Result<bool> {
    let family = tomography_operators(chi, basis)?;
    let mut expectations_agree = true;
    for member in &family {
        if name_preserving_only && !member.op.is_name_preserving(ZERO_TOL) {
            continue;
        }
        let lhs = member.op.compose(rho).full_trace();
        let rhs = member.op.compose(sigma).full_trace();
        if (lhs - rhs).norm() > CMP_TOL {
            expectations_agree = false;
            break;
        }
    }
    let reductions_agree =
        traceout(rho, chi)?.approx_eq(&traceout(sigma, chi)?, CMP_TOL);
    let family_complete = !name_preserving_only
        || (rho.is_name_preserving(ZERO_TOL) && sigma.is_name_preserving(ZERO_TOL));
    if family_complete && expectations_agree != reductions_agree {
        return Err(Error::EquivalenceViolation {
            what: "tomography".into(),
            detail: format!(
                "expectations_agree={expectations_agree} reductions_agree={reductions_agree} under `{}`",
                chi.label()
            ),
        });
    }
    Ok(expectations_agree)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Universe;

    fn g(tokens: &[&str]) -> Graph {
        Graph::from_tokens(tokens).unwrap()
    }

    fn u2s2_basis() -> BasisIndex {
        BasisIndex::new(&Universe::new(["u", "v"], ["b", "w"]).unwrap()).unwrap()
    }

    fn build_flip_op(basis: &BasisIndex) -> OperatorMatrix {
        crate::dynamics::build_flip(basis.universe()).unwrap()
    }

    #[test]
    fn identity_is_local_and_strict_under_any_selector() {
        let basis = u2s2_basis();
        let id = OperatorMatrix::identity(basis.universe()).unwrap();
        for chi in [
            Restriction::by_vertex("u"),
            Restriction::by_state("w"),
            Restriction::white_selector("w", "b"),
            Restriction::whole(),
            Restriction::none(),
        ] {
            let verdict = is_local(&id, &chi, &basis).unwrap();
            assert!(verdict.schrodinger && verdict.operational && verdict.heisenberg);
            assert!(verdict.strict, "identity must be strict under {}", chi.label());
        }
    }

    #[test]
    fn flip_is_local_but_not_strict_under_white_selector() {
        let basis = u2s2_basis();
        let chi = Restriction::white_selector("w", "b");
        let flip = build_flip_op(&basis);
        let verdict = is_local(&flip, &chi, &basis).unwrap();
        assert!(verdict.schrodinger);
        assert!(!verdict.strict);
    }

    #[test]
    fn localized_operators_are_local_and_localization_is_idempotent() {
        let basis = u2s2_basis();
        let zeta = Restriction::by_vertex("v");
        let b = OperatorMatrix::ket_bra(g(&["w.v"]), g(&["b.v"]));
        let local = localize(&b, &zeta, &basis).unwrap();
        let verdict = is_local(&local, &zeta, &basis).unwrap();
        assert!(verdict.schrodinger);
        let twice = localize(&local, &zeta, &basis).unwrap();
        assert!(twice.approx_eq(&local, CMP_TOL));
        // a fixed point: flip is already local under the white selector
        let chi = Restriction::white_selector("w", "b");
        let flip = build_flip_op(&basis);
        assert!(localize(&flip, &chi, &basis).unwrap().approx_eq(&flip, CMP_TOL));
    }

    #[test]
    fn localize_identity_is_identity() {
        let basis = u2s2_basis();
        let id = OperatorMatrix::identity(basis.universe()).unwrap();
        for chi in [Restriction::by_vertex("u"), Restriction::white_selector("w", "b")] {
            assert!(localize(&id, &chi, &basis).unwrap().approx_eq(&id, CMP_TOL));
        }
    }

    #[test]
    fn name_dropping_rank_one_is_not_local() {
        let basis = u2s2_basis();
        let zeta = Restriction::by_vertex("u");
        let drop = OperatorMatrix::ket_bra(Graph::empty(), g(&["w.u"]));
        let localized = localize(&drop, &zeta, &basis).unwrap();
        // the localization zeroes name-incompatible columns: it matches the
        // rank-one construction through the closed form
        let direct = crate::tensor::tensor_ops_closed_form(
            &drop,
            &OperatorMatrix::identity(basis.universe()).unwrap(),
            &zeta,
            &basis,
        )
        .unwrap();
        assert!(localized.approx_eq(&direct, CMP_TOL));
        let verdict = is_local(&localized, &zeta, &basis).unwrap();
        assert!(verdict.schrodinger);
    }

    #[test]
    fn tomography_family_size_and_recovery() {
        let basis = u2s2_basis();
        let zeta = Restriction::by_vertex("u");
        let table = basis.tabulate(&zeta).unwrap();
        let family = tomography_operators(&zeta, &basis).unwrap();
        assert_eq!(family.len(), table.range.len() * table.range.len());
        // each expectation recovers the matching coefficient of ρ|χ
        let rho = OperatorMatrix::from_entries([
            (g(&["w.u", "b.v"]), g(&["w.u", "b.v"]), Complex64::new(0.5, 0.0)),
            (g(&["b.u", "b.v"]), g(&["w.u", "b.v"]), Complex64::new(0.1, 0.3)),
            (g(&["b.v"]), g(&["b.v"]), Complex64::new(0.5, 0.0)),
        ]);
        let reduced = traceout(&rho, &zeta).unwrap();
        for member in &family {
            let expectation = member.op.compose(&rho).full_trace();
            let coefficient = reduced.entry(&member.bra_part, &member.ket_part);
            assert!(
                (expectation - coefficient).norm() < CMP_TOL,
                "probe ({}, {}) missed",
                member.bra_part,
                member.ket_part
            );
        }
    }

    #[test]
    fn tomography_equality_matches_reduction_equality() {
        let basis = u2s2_basis();
        let zeta = Restriction::by_vertex("u");
        let rho = OperatorMatrix::ket_bra(g(&["w.u", "b.v"]), g(&["w.u", "b.v"]));
        assert!(tomography_equal(&rho, &rho, &zeta, &basis, false).unwrap());
        // differ only through complement-diagonal data invisible to the
        // reduction: add |G⟩⟨H| with equal selected parts, different
        // complements
        let bump = OperatorMatrix::ket_bra(g(&["w.u", "b.v"]), g(&["w.u", "w.v"]));
        let sigma = rho.add(&bump);
        assert!(!sigma.approx_eq(&rho, CMP_TOL));
        assert!(tomography_equal(&rho, &sigma, &zeta, &basis, false).unwrap());
        // visibly different selected parts
        let visibly_different = OperatorMatrix::ket_bra(g(&["b.u", "b.v"]), g(&["b.u", "b.v"]));
        assert!(!tomography_equal(&rho, &visibly_different, &zeta, &basis, false).unwrap());
    }
}
