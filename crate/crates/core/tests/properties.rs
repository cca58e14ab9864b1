//! Property tests for the algebraic skeleton: graph union laws, adjoint
//! correctness, trace linearity, and the strictness of the tensor.

use logicaltensor::graph::{Graph, System, Universe};
use logicaltensor::ket::Ket;
use logicaltensor::operator::OperatorMatrix;
use logicaltensor::restriction::Restriction;
use logicaltensor::tensor::{tensor_basis, traceout};
use num_complex::Complex64;
use proptest::prelude::*;

const VERTICES: [&str; 3] = ["u", "v", "x"];
const STATES: [&str; 2] = ["b", "w"];

fn universe() -> Universe {
    Universe::new(VERTICES, STATES).unwrap()
}

/// A graph over the 3-vertex, 2-state universe: each vertex absent or
/// carrying one of the two states.
fn arb_graph() -> impl Strategy<Value = Graph> {
    proptest::collection::vec(0usize..3, 3).prop_map(|choices| {
        Graph::new(
            choices
                .iter()
                .enumerate()
                .filter(|(_, &c)| c > 0)
                .map(|(i, &c)| System::new(STATES[c - 1], VERTICES[i])),
        )
        .unwrap()
    })
}

fn arb_amp() -> impl Strategy<Value = Complex64> {
    (-1.0f64..1.0, -1.0f64..1.0).prop_map(|(re, im)| Complex64::new(re, im))
}

fn arb_ket() -> impl Strategy<Value = Ket> {
    proptest::collection::vec((arb_graph(), arb_amp()), 0..5).prop_map(Ket::from_amplitudes)
}

fn arb_op() -> impl Strategy<Value = OperatorMatrix> {
    proptest::collection::vec((arb_graph(), arb_graph(), arb_amp()), 0..6)
        .prop_map(OperatorMatrix::from_entries)
}

fn arb_restriction() -> impl Strategy<Value = Restriction> {
    prop_oneof![
        (0usize..3).prop_map(|i| Restriction::by_vertex(VERTICES[i])),
        (0usize..2).prop_map(|i| Restriction::by_state(STATES[i])),
        Just(Restriction::white_selector("w", "b")),
        Just(Restriction::whole()),
        Just(Restriction::none()),
        (0usize..3, 0usize..3).prop_map(|(i, j)| {
            Restriction::by_vertex(VERTICES[i]).union_unchecked(&Restriction::by_vertex(VERTICES[j]))
        }),
    ]
}

proptest! {
    #[test]
    fn union_is_commutative_when_defined(g in arb_graph(), h in arb_graph()) {
        match (g.union(&h), h.union(&g)) {
            (Ok(a), Ok(b)) => prop_assert_eq!(a, b),
            (Err(_), Err(_)) => {}
            _ => prop_assert!(false, "union defined in one order only"),
        }
    }

    #[test]
    fn union_is_associative_when_defined(
        g in arb_graph(),
        h in arb_graph(),
        k in arb_graph(),
    ) {
        let left = g.union(&h).and_then(|gh| gh.union(&k));
        let right = h.union(&k).and_then(|hk| g.union(&hk));
        match (left, right) {
            (Ok(a), Ok(b)) => prop_assert_eq!(a, b),
            // one association may fail earlier than the other, but a
            // successful result on both sides must agree
            _ => {}
        }
    }

    #[test]
    fn empty_graph_is_union_identity(g in arb_graph()) {
        prop_assert_eq!(g.union(&Graph::empty()).unwrap(), g.clone());
        prop_assert_eq!(Graph::empty().union(&g).unwrap(), g);
    }

    #[test]
    fn support_distributes_over_union(g in arb_graph(), h in arb_graph()) {
        if let Ok(u) = g.union(&h) {
            let mut expected: Vec<&str> = g.support();
            expected.extend(h.support());
            expected.sort();
            expected.dedup();
            prop_assert_eq!(u.support(), expected);
        }
    }

    #[test]
    fn adjoint_moves_across_inner_product(
        a in arb_op(),
        phi in arb_ket(),
        psi in arb_ket(),
    ) {
        let lhs = phi.inner(&a.apply(&psi));
        let rhs = a.adjoint().apply(&phi).inner(&psi);
        prop_assert!((lhs - rhs).norm() < 1e-9);
    }

    #[test]
    fn trace_of_product_recovers_matrix_element(
        rho in arb_op(),
        g in arb_graph(),
        h in arb_graph(),
    ) {
        // (ρ·|G⟩⟨H|)|∅ = ⟨H|ρ|G⟩
        let probe = OperatorMatrix::ket_bra(g.clone(), h.clone());
        let lhs = rho.compose(&probe).full_trace();
        let rhs = rho.entry(&h, &g);
        prop_assert!((lhs - rhs).norm() < 1e-9);
    }

    #[test]
    fn traceout_is_linear(
        rho in arb_op(),
        sigma in arb_op(),
        chi in arb_restriction(),
        alpha in arb_amp(),
    ) {
        let combined = rho.scale(alpha).add(&sigma);
        let lhs = traceout(&combined, &chi).unwrap();
        let rhs = traceout(&rho, &chi).unwrap().scale(alpha)
            .add(&traceout(&sigma, &chi).unwrap());
        prop_assert!(lhs.max_abs_diff(&rhs) < 1e-9);
    }

    #[test]
    fn overlapping_parts_never_weave(
        chi in arb_restriction(),
        states in proptest::collection::vec(0usize..2, 3),
    ) {
        // disjoint nonempty G, M, H on the three vertices: the tensor of
        // |G ∪ M⟩ against |M ∪ H⟩ vanishes for every selector
        let g = Graph::new([System::new(STATES[states[0]], VERTICES[0])]).unwrap();
        let m = Graph::new([System::new(STATES[states[1]], VERTICES[1])]).unwrap();
        let h = Graph::new([System::new(STATES[states[2]], VERTICES[2])]).unwrap();
        let gm = g.union(&m).unwrap();
        let mh = m.union(&h).unwrap();
        prop_assert!(tensor_basis(&gm, &mh, &chi).unwrap().is_none());
    }

    #[test]
    fn name_preservation_survives_composition_and_adjoint(
        a in arb_op(),
        b in arb_op(),
    ) {
        fn name_preserving_part(op: &OperatorMatrix) -> OperatorMatrix {
            OperatorMatrix::from_entries(
                op.iter()
                    .filter(|((g, h), _)| g.support() == h.support())
                    .map(|((g, h), amp)| (g.clone(), h.clone(), *amp)),
            )
        }
        let a = name_preserving_part(&a);
        let b = name_preserving_part(&b);
        prop_assert!(a.compose(&b).is_name_preserving(1e-12));
        prop_assert!(a.adjoint().is_name_preserving(1e-12));
    }

    #[test]
    fn restriction_outputs_are_subgraphs(g in arb_graph(), chi in arb_restriction()) {
        let selected = chi.restrict(&g).unwrap();
        prop_assert!(selected.is_subgraph_of(&g));
        let co = chi.complement_part(&g).unwrap();
        prop_assert!(co.is_subgraph_of(&g));
        prop_assert_eq!(selected.union(&co).unwrap(), g);
    }

    #[test]
    fn serialization_round_trips(ket in arb_ket(), op in arb_op()) {
        let u = universe();
        let ket_json = logicaltensor::io::ket_to_json(&ket);
        let ket_back = logicaltensor::io::parse_ket(&ket_json, &u).unwrap();
        prop_assert!(ket.approx_eq(&ket_back, 1e-12));
        let op_json = logicaltensor::io::operator_to_json(&op);
        let op_back = logicaltensor::io::parse_operator(&op_json, &u).unwrap();
        prop_assert!(op.approx_eq(&op_back, 1e-12));
    }
}
