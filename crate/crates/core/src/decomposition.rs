//! Block decomposition of causal unitaries into commuting local gates.
//!
//! The construction doubles the state alphabet with a flag bit, extends the
//! dynamics to the flagged space as `U ⊗ I` across the flag-zero selector,
//! and conjugates per-vertex flag toggles through the extension. The
//! resulting toggle gates and kernel gates commute within each family, are
//! strictly local on per-vertex restrictions, and their product reproduces
//! the original unitary on the flag-zero sector.

use crate::basis::BasisIndex;
use crate::causality::{is_causal, is_causal_on};
use crate::error::{Error, Result};
use crate::graph::{Graph, System, Universe};
use crate::ket::{Ket, CMP_TOL};
use crate::locality::{is_strictly_local, localize_with_table};
use crate::operator::OperatorMatrix;
use crate::restriction::Restriction;
use crate::tensor::is_consistency_preserving;
use num_complex::Complex64;
use std::collections::BTreeMap;

/// A base universe together with its flag-doubled extension: every state
/// `σ` becomes `0.σ` and `1.σ`, vertices unchanged. Base graphs embed as
/// all-flag-zero graphs.
#[derive(Debug, Clone)]
pub struct ExtendedUniverse {
    base: Universe,
    extended: Universe,
}

impl ExtendedUniverse {
    pub fn new(base: &Universe) -> Result<Self> {
        let mut states = Vec::with_capacity(base.states().len() * 2);
        for s in base.states() {
            states.push(format!("0.{s}"));
            states.push(format!("1.{s}"));
        }
        let extended = Universe::new(base.vertices().to_vec(), states)?;
        // reject oversize extensions eagerly
        let _ = extended.enumerate_graphs()?;
        Ok(Self {
            base: base.clone(),
            extended,
        })
    }

    pub fn base(&self) -> &Universe {
        &self.base
    }

    pub fn extended(&self) -> &Universe {
        &self.extended
    }

    /// The flag-zero selector over the extended universe.
    pub fn flag_restriction(&self) -> Restriction {
        Restriction::flag_zero()
    }

    pub fn embed_graph(&self, g: &Graph) -> Graph {
        Graph::from_sorted_unchecked(
            g.systems()
                .iter()
                .map(|s| System::new(format!("0.{}", s.state), s.vertex.clone()))
                .collect(),
        )
    }

    pub fn unembed_graph(&self, g: &Graph) -> Result<Graph> {
        let mut systems = Vec::with_capacity(g.len());
        for s in g.systems() {
            match s.state.strip_prefix("0.") {
                Some(state) => systems.push(System::new(state, s.vertex.clone())),
                None => {
                    return Err(Error::Input(format!(
                        "graph {g} carries a raised flag and does not unembed"
                    )))
                }
            }
        }
        Ok(Graph::from_sorted_unchecked(systems))
    }

    pub fn embed_ket(&self, psi: &Ket) -> Ket {
        Ket::from_amplitudes(psi.iter().map(|(g, a)| (self.embed_graph(g), *a)))
    }

    pub fn embed_op(&self, a: &OperatorMatrix) -> Result<OperatorMatrix> {
        for ((bra, ket), _) in a.iter() {
            if !self.base.contains_graph(bra) || !self.base.contains_graph(ket) {
                return Err(Error::Input(format!(
                    "operator entry ({bra}, {ket}) is outside the base universe"
                )));
            }
        }
        Ok(OperatorMatrix::from_entries(a.iter().map(
            |((bra, ket), amp)| (self.embed_graph(bra), self.embed_graph(ket), *amp),
        )))
    }
}

fn toggle_graph(g: &Graph) -> Graph {
    Graph::from_sorted_unchecked(
        g.systems()
            .iter()
            .map(|s| {
                let state = if let Some(rest) = s.state.strip_prefix("0.") {
                    format!("1.{rest}")
                } else if let Some(rest) = s.state.strip_prefix("1.") {
                    format!("0.{rest}")
                } else {
                    s.state.clone()
                };
                System::new(state, s.vertex.clone())
            })
            .collect(),
    )
}

/// The involutive flag flip on every system, extended linearly: a
/// name-preserving permutation unitary of the extended basis.
pub fn toggle_unitary(eu: &ExtendedUniverse) -> Result<OperatorMatrix> {
    let mut op = OperatorMatrix::zero();
    for g in eu.extended.enumerate_graphs()? {
        op.add_entry(toggle_graph(&g), g, Complex64::new(1.0, 0.0));
    }
    Ok(op)
}

/// The single-vertex flag toggle `τ ⊗ I` across the vertex selector: flips
/// the flag of the system at `vertex` and nothing else.
pub fn toggle_at(vertex: &str, basis: &BasisIndex) -> Result<OperatorMatrix> {
    let zeta = Restriction::by_vertex(vertex);
    let table = basis.tabulate(&zeta)?;
    // the toggle restricted to the selector's range: ∅ and the
    // single-system graphs at this vertex
    let mut small = OperatorMatrix::zero();
    for &k in &table.range {
        let g = basis.graph(k).clone();
        small.add_entry(toggle_graph(&g), g, Complex64::new(1.0, 0.0));
    }
    localize_with_table(&small, &table, basis)
}

/// Unitary extension `U ⊗ I` across a pointwise selector: checks the
/// hypotheses (pointwise selector, name-preserving input, unitary on the
/// selector's range subspace), then extends and certifies the conclusions
/// (the input preserves consistency, the extension is unitary with the
/// extended adjoint).
pub fn unitary_extension(
    u_on_range: &OperatorMatrix,
    mu: &Restriction,
    basis: &BasisIndex,
) -> Result<OperatorMatrix> {
    if !mu.is_pointwise(basis.universe())? {
        return Err(Error::NotPointwise {
            label: mu.label().to_string(),
        });
    }
    if !u_on_range.is_name_preserving(CMP_TOL) {
        return Err(Error::NotNamePreserving);
    }
    let table = basis.tabulate(mu)?;
    let mut range_graphs: Vec<Graph> = table
        .range
        .iter()
        .map(|&i| basis.graph(i).clone())
        .collect();
    range_graphs.sort();
    for ((bra, ket), _) in u_on_range.iter() {
        let inside = |g: &Graph| range_graphs.binary_search(g).is_ok();
        if !inside(bra) || !inside(ket) {
            return Err(Error::NotUnitaryOnRange { max_deviation: 1.0 });
        }
    }
    let sub_id = OperatorMatrix::identity_on(range_graphs);
    let adj = u_on_range.adjoint();
    let dev = adj
        .compose(u_on_range)
        .max_abs_diff(&sub_id)
        .max(u_on_range.compose(&adj).max_abs_diff(&sub_id));
    if dev > CMP_TOL {
        return Err(Error::NotUnitaryOnRange { max_deviation: dev });
    }

    // a name-preserving operator over a pointwise selector's range always
    // preserves consistency; certify rather than assume
    if !is_consistency_preserving(u_on_range, mu, basis)? {
        return Err(Error::InternalContractViolation {
            what: format!(
                "name-preserving operator over range of `{}` is not consistency-preserving",
                mu.label()
            ),
        });
    }

    let extended = localize_with_table(u_on_range, &table, basis)?;
    let extended_adjoint = localize_with_table(&adj, &table, basis)?;
    if extended.adjoint().max_abs_diff(&extended_adjoint) > CMP_TOL {
        return Err(Error::InternalContractViolation {
            what: "adjoint of the extension differs from the extension of the adjoint".into(),
        });
    }
    if !extended.is_unitary(basis.universe(), CMP_TOL)? {
        return Err(Error::InternalContractViolation {
            what: "extension of a range-unitary is not unitary".into(),
        });
    }
    Ok(extended)
}

/// The mixed selector used by the kernel gates: applies `chi` on the
/// flag-zero part and `zeta` on the raised-flag part. Validated against the
/// extended universe before being returned.
pub fn mixed_flag_restriction(
    mu: &Restriction,
    chi: &Restriction,
    zeta: &Restriction,
    universe: &Universe,
) -> Result<Restriction> {
    let mixed = Restriction::piecewise(mu, chi, zeta);
    let report = mixed.validate(universe)?;
    if !report.passed {
        return Err(Error::InternalContractViolation {
            what: format!(
                "mixed selector `{}` failed validation ({})",
                mixed.label(),
                report.describe()
            ),
        });
    }
    Ok(mixed)
}

/// Certifies the causal-extension statement for one vertex: under the
/// hypotheses (pointwise flag selector, four-way commutation with the
/// output selector, name-preserving unitary causal on the flag-zero
/// sector), the extension is causal from the mixed selector to the output
/// selector.
pub fn causal_extension_check(
    u_on_range: &OperatorMatrix,
    mu: &Restriction,
    chi: &Restriction,
    zeta: &Restriction,
    basis: &BasisIndex,
) -> Result<bool> {
    if !mu.is_pointwise(basis.universe())? {
        return Err(Error::PrerequisiteViolation {
            hypothesis: format!("selector `{}` is pointwise", mu.label()),
        });
    }
    let commutation = mu.commute(zeta, basis.universe())?;
    if !commutation.all_four() {
        return Err(Error::PrerequisiteViolation {
            hypothesis: format!(
                "four-way commutation of `{}` with `{}`",
                mu.label(),
                zeta.label()
            ),
        });
    }
    if !u_on_range.is_name_preserving(CMP_TOL) {
        return Err(Error::PrerequisiteViolation {
            hypothesis: "operator is name-preserving".into(),
        });
    }
    // causal on the flag-zero sector, quantified over its basis pairs
    let table = basis.tabulate(mu)?;
    let pairs: Vec<(u32, u32)> = table
        .range
        .iter()
        .flat_map(|&g| table.range.iter().map(move |&h| (g, h)))
        .collect();
    let sector = is_causal_on(u_on_range, chi, zeta, basis, &pairs)?;
    if !sector.primal {
        return Err(Error::PrerequisiteViolation {
            hypothesis: format!(
                "operator is causal from `{}` to `{}` on the flag-zero sector",
                chi.label(),
                zeta.label()
            ),
        });
    }

    let u_ext = unitary_extension(u_on_range, mu, basis)?;
    let mixed = mixed_flag_restriction(mu, chi, zeta, basis.universe())?;
    let verdict = is_causal(&u_ext, &mixed, zeta, basis)?;
    Ok(verdict.primal && verdict.dual)
}

/// The commuting-gate factorization of a causal unitary.
#[derive(Debug, Clone)]
pub struct BlockDecomposition {
    pub extended: ExtendedUniverse,
    /// Per-vertex flag toggles, strictly local at their vertex.
    pub toggle_gates: BTreeMap<String, OperatorMatrix>,
    /// Per-vertex kernels, strictly local on the mixed selector.
    pub kernel_gates: BTreeMap<String, OperatorMatrix>,
    /// Per-vertex mixed selectors the kernels are local on.
    pub mixed_selectors: BTreeMap<String, Restriction>,
    /// Largest reconstruction deviation over the flag-zero basis.
    pub max_reconstruction_deviation: f64,
    /// Largest deviation between the two gate application orders.
    pub order_independence_deviation: f64,
    /// Largest pairwise commutator norm within the two gate families.
    pub max_commutator_deviation: f64,
}

/// Decomposes a name-preserving causal unitary into per-vertex toggle and
/// kernel gates over the flag-extended universe.
///
/// `chi` maps each vertex to the input selector the operator is causal
/// from. `zeta` maps each vertex to its output selector, which must select
/// exactly that vertex's system (any encoding of that selector is
/// accepted). `zeta_prime` optionally names wider output selectors to run
/// the causality prerequisite against, with the vertex selector
/// comprehended inside; when absent it defaults to `zeta` itself, which
/// loses no generality here since comprehension is reflexive.
pub fn block_decompose(
    u: &OperatorMatrix,
    chi: &BTreeMap<String, Restriction>,
    zeta: &BTreeMap<String, Restriction>,
    zeta_prime: Option<&BTreeMap<String, Restriction>>,
    universe: &Universe,
) -> Result<BlockDecomposition> {
    let base_basis = BasisIndex::new(universe)?;

    if !u.is_name_preserving(CMP_TOL) {
        return Err(Error::PrerequisiteViolation {
            hypothesis: "operator is name-preserving".into(),
        });
    }
    if !u.is_unitary(universe, CMP_TOL)? {
        return Err(Error::PrerequisiteViolation {
            hypothesis: "operator is unitary".into(),
        });
    }

    for vertex in universe.vertices() {
        let chi_v = chi.get(vertex).ok_or_else(|| {
            Error::Input(format!("no input selector configured for vertex `{vertex}`"))
        })?;
        let zeta_v = zeta.get(vertex).ok_or_else(|| {
            Error::Input(format!("no output selector configured for vertex `{vertex}`"))
        })?;
        // the toggle gates are strictly local exactly on the single-vertex
        // selector, so the per-vertex output selector must be that one
        // (any encoding of it is fine)
        if !zeta_v.pointwise_eq(&Restriction::by_vertex(vertex.clone()), universe)? {
            return Err(Error::PrerequisiteViolation {
                hypothesis: format!(
                    "output selector at `{vertex}` selects exactly that vertex's system"
                ),
            });
        }
        let zeta_prime_v = zeta_prime.and_then(|m| m.get(vertex)).unwrap_or(zeta_v);
        if !zeta_v.is_comprehended_in(zeta_prime_v, universe)? {
            return Err(Error::PrerequisiteViolation {
                hypothesis: format!(
                    "`{}` is comprehended in `{}`",
                    zeta_v.label(),
                    zeta_prime_v.label()
                ),
            });
        }
        let verdict = is_causal(u, chi_v, zeta_prime_v, &base_basis)?;
        if !verdict.primal {
            return Err(Error::PrerequisiteViolation {
                hypothesis: format!(
                    "operator is causal from `{}` to `{}`",
                    chi_v.label(),
                    zeta_prime_v.label()
                ),
            });
        }
    }

    let eu = ExtendedUniverse::new(universe)?;
    let ext_basis = BasisIndex::new(eu.extended())?;
    let mu = eu.flag_restriction();
    let u_emb = eu.embed_op(u)?;
    let u_ext = unitary_extension(&u_emb, &mu, &ext_basis)?;
    let u_ext_adj = u_ext.adjoint();

    let mut toggle_gates = BTreeMap::new();
    let mut kernel_gates = BTreeMap::new();
    let mut mixed_selectors = BTreeMap::new();
    for vertex in universe.vertices() {
        let toggle_v = toggle_at(vertex, &ext_basis)?;
        let kernel_v = u_ext_adj.compose(&toggle_v).compose(&u_ext);
        let mixed_v = mixed_flag_restriction(&mu, &chi[vertex], &zeta[vertex], eu.extended())?;
        toggle_gates.insert(vertex.clone(), toggle_v);
        kernel_gates.insert(vertex.clone(), kernel_v);
        mixed_selectors.insert(vertex.clone(), mixed_v);
    }

    // the toggles multiply to the global flag flip
    let full_toggle = toggle_unitary(&eu)?;
    let toggle_product = product_in_order(universe.vertices(), &toggle_gates, false);
    if toggle_product.max_abs_diff(&full_toggle) > CMP_TOL {
        return Err(Error::InternalContractViolation {
            what: "per-vertex toggles do not multiply to the global flag flip".into(),
        });
    }

    // strict locality of every gate on its selector
    for vertex in universe.vertices() {
        let zeta_v = Restriction::by_vertex(vertex.clone());
        if !is_strictly_local(&toggle_gates[vertex], &zeta_v, &ext_basis)? {
            return Err(Error::InternalContractViolation {
                what: format!("toggle gate at `{vertex}` is not strictly local"),
            });
        }
        if !is_strictly_local(&kernel_gates[vertex], &mixed_selectors[vertex], &ext_basis)? {
            return Err(Error::InternalContractViolation {
                what: format!("kernel gate at `{vertex}` is not strictly local"),
            });
        }
    }

    // pairwise commutation within each family
    let mut max_commutator: f64 = 0.0;
    let vertices = universe.vertices();
    for family in [&toggle_gates, &kernel_gates] {
        for (i, x) in vertices.iter().enumerate() {
            for y in vertices.iter().skip(i + 1) {
                let fwd = family[x].compose(&family[y]);
                let bwd = family[y].compose(&family[x]);
                max_commutator = max_commutator.max(fwd.max_abs_diff(&bwd));
            }
        }
    }
    if max_commutator > CMP_TOL {
        return Err(Error::InternalContractViolation {
            what: format!("gate families do not commute (deviation {max_commutator:e})"),
        });
    }

    // reconstruction on every flag-zero basis vector, in two gate orders
    let mut max_reconstruction: f64 = 0.0;
    let mut order_dev: f64 = 0.0;
    let mut witness: Option<Graph> = None;
    for g in base_basis.graphs() {
        let embedded = eu.embed_graph(g);
        let psi = Ket::basis(embedded.clone());
        let after_k = apply_in_order(vertices, &kernel_gates, &psi, false);
        let lhs = apply_in_order(vertices, &toggle_gates, &after_k, false);
        let after_k_rev = apply_in_order(vertices, &kernel_gates, &psi, true);
        let lhs_rev = apply_in_order(vertices, &toggle_gates, &after_k_rev, true);
        let rhs = eu.embed_ket(&u.apply(&Ket::basis(g.clone())));
        let dev = lhs.max_abs_diff(&rhs);
        order_dev = order_dev.max(lhs.max_abs_diff(&lhs_rev));
        if dev > max_reconstruction {
            max_reconstruction = dev;
            witness = Some(embedded);
        }
    }
    if max_reconstruction > CMP_TOL {
        return Err(Error::ReconstructionFailure {
            max_deviation: max_reconstruction,
            witness: witness.unwrap_or_default(),
        });
    }

    Ok(BlockDecomposition {
        extended: eu,
        toggle_gates,
        kernel_gates,
        mixed_selectors,
        max_reconstruction_deviation: max_reconstruction,
        order_independence_deviation: order_dev,
        max_commutator_deviation: max_commutator,
    })
}

fn product_in_order(
    vertices: &[String],
    gates: &BTreeMap<String, OperatorMatrix>,
    reverse: bool,
) -> OperatorMatrix {
    let mut order: Vec<&String> = vertices.iter().collect();
    if reverse {
        order.reverse();
    }
    let mut product: Option<OperatorMatrix> = None;
    for v in order {
        product = Some(match product {
            None => gates[v].clone(),
            Some(p) => p.compose(&gates[v]),
        });
    }
    product.expect("at least one vertex")
}

fn apply_in_order(
    vertices: &[String],
    gates: &BTreeMap<String, OperatorMatrix>,
    psi: &Ket,
    reverse: bool,
) -> Ket {
    let mut order: Vec<&String> = vertices.iter().collect();
    if reverse {
        order.reverse();
    }
    let mut current = psi.clone();
    for v in order {
        current = gates[v].apply(&current);
    }
    current
}
