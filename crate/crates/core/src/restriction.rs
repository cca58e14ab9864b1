//! Restrictions: validated subgraph selectors and their algebra.
//!
//! A restriction maps every graph `G` to a subgraph `G_χ ⊆ G` such that any
//! graph `H` squeezed between the selection and the whole (`G_χ ⊆ H ⊆ G`)
//! selects the same part: `H_χ = G_χ`. That axiom is what makes the induced
//! traceout and tensor well behaved, so selectors are validated exhaustively
//! against a configured universe before use.
//!
//! The complement `G ↦ G \ G_χ` is deliberately exposed only as a
//! graph-level operation (`complement_part`): it is not a restriction in
//! general and must not be registered as one.

use crate::error::{Error, Result};
use crate::graph::{Graph, System, Universe};
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

type Selector = Arc<dyn Fn(&Graph) -> Graph + Send + Sync>;

#[derive(Clone)]
enum Kind {
    /// `G ↦ G`.
    Whole,
    /// `G ↦ ∅`.
    None,
    /// Keeps the system at one vertex, if present.
    ByVertex(String),
    /// Keeps every system carrying one particular state.
    ByState(String),
    /// All-black graphs pass through whole; otherwise keeps the white part.
    WhiteSelector { white: String, black: String },
    /// Keeps systems whose state carries the `0.` flag prefix.
    FlagZero,
    /// `G ↦ G_a ∪ G_b`.
    Union(Box<Restriction>, Box<Restriction>),
    /// `G ↦ (G_first)_then`. Not guaranteed to satisfy the axiom.
    Composition(Box<Restriction>, Box<Restriction>),
    /// Applies `inside` within the splitter's part and `outside` within the
    /// splitter's complement part, then unions the two selections.
    Piecewise {
        splitter: Box<Restriction>,
        inside: Box<Restriction>,
        outside: Box<Restriction>,
    },
    /// Explicit per-graph listing.
    Table(BTreeMap<Graph, Graph>),
    /// Arbitrary user selector.
    Custom(Selector),
}

/// A subgraph selector with an identifying label. Whether the selector
/// satisfies the restriction axiom is a per-universe property; call
/// [`Restriction::validate`] (or [`Restriction::validated`]) before feeding
/// one to any decider.
#[derive(Clone)]
pub struct Restriction {
    label: String,
    kind: Kind,
    pointwise_hint: Option<bool>,
}

impl fmt::Debug for Restriction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Restriction({})", self.label)
    }
}

impl Restriction {
    /// The identity selector `G ↦ G`.
    pub fn whole() -> Self {
        Self {
            label: "whole".into(),
            kind: Kind::Whole,
            pointwise_hint: Some(true),
        }
    }

    /// The constant-empty selector `G ↦ ∅`. Tracing it out is the full trace.
    pub fn none() -> Self {
        Self {
            label: "none".into(),
            kind: Kind::None,
            pointwise_hint: Some(true),
        }
    }

    /// Keeps the system supported at `vertex`, when present.
    pub fn by_vertex(vertex: impl Into<String>) -> Self {
        let vertex = vertex.into();
        Self {
            label: format!("at({vertex})"),
            kind: Kind::ByVertex(vertex),
            pointwise_hint: Some(true),
        }
    }

    /// Keeps every system whose internal state equals `state`.
    pub fn by_state(state: impl Into<String>) -> Self {
        let state = state.into();
        Self {
            label: format!("state({state})"),
            kind: Kind::ByState(state),
            pointwise_hint: Some(true),
        }
    }

    /// All-black graphs (including the empty one) pass through whole; any
    /// other graph maps to its white subgraph. The standard example of a
    /// selector that is a valid restriction without being pointwise.
    pub fn white_selector(white: impl Into<String>, black: impl Into<String>) -> Self {
        let white = white.into();
        let black = black.into();
        Self {
            label: format!("whites({white}|{black})"),
            kind: Kind::WhiteSelector { white, black },
            pointwise_hint: Some(false),
        }
    }

    /// Keeps systems whose state starts with the `0.` flag prefix. States of
    /// a flag-extended universe are `0.σ` / `1.σ`; on such universes this
    /// selects the flag-zero part.
    pub fn flag_zero() -> Self {
        Self {
            label: "flag0".into(),
            kind: Kind::FlagZero,
            pointwise_hint: Some(true),
        }
    }

    /// `G ↦ (G_s)_inside ∪ (G \ G_s)_outside`: one selector on the part a
    /// splitter picks, another on what it leaves behind. Validity as a
    /// restriction is not automatic; callers validate.
    pub fn piecewise(splitter: &Restriction, inside: &Restriction, outside: &Restriction) -> Self {
        let pointwise_hint = match (
            splitter.pointwise_hint,
            inside.pointwise_hint,
            outside.pointwise_hint,
        ) {
            (Some(true), Some(true), Some(true)) => Some(true),
            _ => None,
        };
        Restriction {
            label: format!(
                "piecewise({};{},{})",
                splitter.label, inside.label, outside.label
            ),
            kind: Kind::Piecewise {
                splitter: Box::new(splitter.clone()),
                inside: Box::new(inside.clone()),
                outside: Box::new(outside.clone()),
            },
            pointwise_hint,
        }
    }

    /// Explicit per-graph table. Graphs absent from the table are rejected
    /// at application time.
    pub fn table(label: impl Into<String>, entries: BTreeMap<Graph, Graph>) -> Self {
        Self {
            label: label.into(),
            kind: Kind::Table(entries),
            pointwise_hint: None,
        }
    }

    /// Arbitrary selector; must pass [`Restriction::validate`] before use.
    pub fn custom(
        label: impl Into<String>,
        selector: impl Fn(&Graph) -> Graph + Send + Sync + 'static,
    ) -> Self {
        Self {
            label: label.into(),
            kind: Kind::Custom(Arc::new(selector)),
            pointwise_hint: None,
        }
    }

    /// The union selector `G ↦ G_self ∪ G_other`. The union of two valid
    /// restrictions is again a restriction; this constructor validates the
    /// result against `universe` and treats failure as a broken input.
    pub fn union(&self, other: &Restriction, universe: &Universe) -> Result<Restriction> {
        let joined = self.union_unchecked(other);
        let report = joined.validate(universe)?;
        if !report.passed {
            return Err(Error::InternalContractViolation {
                what: format!(
                    "union `{}` of two restrictions failed validation ({})",
                    joined.label,
                    report.describe()
                ),
            });
        }
        Ok(joined)
    }

    /// The union selector without the validation pass.
    pub fn union_unchecked(&self, other: &Restriction) -> Restriction {
        let pointwise_hint = match (self.pointwise_hint, other.pointwise_hint) {
            (Some(true), Some(true)) => Some(true),
            _ => None,
        };
        Restriction {
            label: format!("union({},{})", self.label, other.label),
            kind: Kind::Union(Box::new(self.clone()), Box::new(other.clone())),
            pointwise_hint,
        }
    }

    /// The composed selector `G ↦ (G_self)_other`: apply `self`, then
    /// `other`. The result is a candidate only — composition of two valid
    /// restrictions need not satisfy the axiom, so callers revalidate.
    pub fn compose(&self, other: &Restriction) -> Restriction {
        Restriction {
            label: format!("compose({},{})", self.label, other.label),
            kind: Kind::Composition(Box::new(self.clone()), Box::new(other.clone())),
            pointwise_hint: None,
        }
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn pointwise_hint(&self) -> Option<bool> {
        self.pointwise_hint
    }

    /// Applies the selector: `G ↦ G_χ`. Fails with `SubsetViolation` if a
    /// table/custom selector returns systems not contained in `G`.
    pub fn restrict(&self, g: &Graph) -> Result<Graph> {
        let out = match &self.kind {
            Kind::Whole => g.clone(),
            Kind::None => Graph::empty(),
            Kind::ByVertex(v) => match g.state_at(v) {
                Some(state) => Graph::new([System::new(state, v.clone())])?,
                None => Graph::empty(),
            },
            Kind::ByState(state) => keep_systems(g, |s| &s.state == state),
            Kind::WhiteSelector { white, black } => {
                if g.systems().iter().all(|s| &s.state == black) {
                    g.clone()
                } else {
                    keep_systems(g, |s| &s.state == white)
                }
            }
            Kind::FlagZero => keep_systems(g, |s| s.state.starts_with("0.")),
            Kind::Union(a, b) => {
                let ga = a.restrict(g)?;
                let gb = b.restrict(g)?;
                // both parts are subgraphs of g, so the union cannot conflict
                ga.union(&gb)?
            }
            Kind::Composition(first, then) => then.restrict(&first.restrict(g)?)?,
            Kind::Piecewise {
                splitter,
                inside,
                outside,
            } => {
                let split = splitter.restrict(g)?;
                let rest = g.difference(&split);
                inside.restrict(&split)?.union(&outside.restrict(&rest)?)?
            }
            Kind::Table(entries) => entries
                .get(g)
                .cloned()
                .ok_or_else(|| Error::Input(format!("table `{}` has no row for {g}", self.label)))?,
            Kind::Custom(f) => f(g),
        };
        if !out.is_subgraph_of(g) {
            return Err(Error::SubsetViolation {
                label: self.label.clone(),
                graph: g.clone(),
            });
        }
        Ok(out)
    }

    /// The complement part `G ↦ G \ G_χ`.
    pub fn complement_part(&self, g: &Graph) -> Result<Graph> {
        Ok(g.difference(&self.restrict(g)?))
    }

    /// Exhaustively checks the restriction axiom over `universe`: for every
    /// `G` and every `H` with `G_χ ⊆ H ⊆ G`, `H_χ = G_χ`. The first failing
    /// pair (in enumeration order) is reported.
    pub fn validate(&self, universe: &Universe) -> Result<ValidationReport> {
        let graphs = universe.enumerate_graphs()?;
        let mut pairs_checked = 0usize;
        for g in &graphs {
            let selected = match self.restrict(g) {
                Ok(s) => s,
                Err(Error::SubsetViolation { label, graph }) => {
                    return Ok(ValidationReport {
                        label: self.label.clone(),
                        passed: false,
                        counterexample: Some((graph.clone(), graph)),
                        detail: Some(format!("selector `{label}` returned a non-subgraph")),
                        graphs_checked: pairs_checked,
                        pairs_checked,
                    })
                }
                Err(e) => return Err(e),
            };
            for h in between(&selected, g) {
                pairs_checked += 1;
                let h_sel = self.restrict(&h)?;
                if h_sel != selected {
                    return Ok(ValidationReport {
                        label: self.label.clone(),
                        passed: false,
                        counterexample: Some((g.clone(), h)),
                        detail: None,
                        graphs_checked: graphs.len(),
                        pairs_checked,
                    });
                }
            }
        }
        Ok(ValidationReport {
            label: self.label.clone(),
            passed: true,
            counterexample: None,
            detail: None,
            graphs_checked: graphs.len(),
            pairs_checked,
        })
    }

    /// Validates against `universe` and returns `self` on success, for
    /// registration-style call sites.
    pub fn validated(self, universe: &Universe) -> Result<Self> {
        let report = self.validate(universe)?;
        if !report.passed {
            return Err(Error::InternalContractViolation {
                what: format!("restriction `{}` failed validation ({})", self.label, report.describe()),
            });
        }
        Ok(self)
    }

    /// True iff the selector is computable system-by-system on `universe`:
    /// `G_χ = ⋃_{σ.v ∈ G} {σ.v}_χ` for every basis graph.
    pub fn is_pointwise(&self, universe: &Universe) -> Result<bool> {
        for g in universe.enumerate_graphs()? {
            let direct = self.restrict(&g)?;
            let mut assembled = Graph::empty();
            for s in g.systems() {
                let single = Graph::from_sorted_unchecked(vec![s.clone()]);
                assembled = assembled.union(&self.restrict(&single)?)?;
            }
            if assembled != direct {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Checks the four commutation conditions between `self` and `other`
    /// pointwise over the universe, where the barred versions act through
    /// the complement part.
    pub fn commute(&self, other: &Restriction, universe: &Universe) -> Result<CommutationReport> {
        let mut report = CommutationReport {
            left: self.label.clone(),
            right: other.label.clone(),
            plain: true,
            left_bar: true,
            right_bar: true,
            both_bar: true,
        };
        for g in universe.enumerate_graphs()? {
            let chi = self.restrict(&g)?;
            let chibar = g.difference(&chi);
            let zeta = other.restrict(&g)?;
            let zetabar = g.difference(&zeta);
            // [χ,ζ]: (G_χ)_ζ = (G_ζ)_χ
            if other.restrict(&chi)? != self.restrict(&zeta)? {
                report.plain = false;
            }
            // [χ̄,ζ]: (G_χ̄)_ζ = (G_ζ) \ (G_ζ)_χ
            if other.restrict(&chibar)? != zeta.difference(&self.restrict(&zeta)?) {
                report.left_bar = false;
            }
            // [χ,ζ̄]: (G_χ) \ (G_χ)_ζ = (G_ζ̄)_χ
            if chi.difference(&other.restrict(&chi)?) != self.restrict(&zetabar)? {
                report.right_bar = false;
            }
            // [χ̄,ζ̄]: (G_χ̄) \ (G_χ̄)_ζ = (G_ζ̄) \ (G_ζ̄)_χ
            if chibar.difference(&other.restrict(&chibar)?)
                != zetabar.difference(&self.restrict(&zetabar)?)
            {
                report.both_bar = false;
            }
            if !(report.plain || report.left_bar || report.right_bar || report.both_bar) {
                break;
            }
        }
        Ok(report)
    }

    /// True iff `self` is comprehended within `outer`: (a) restricting
    /// through `outer` first does not change what `self` selects, and (b)
    /// the complement inner products factor accordingly, as a 0/1 indicator
    /// identity over all basis pairs.
    pub fn is_comprehended_in(&self, outer: &Restriction, universe: &Universe) -> Result<bool> {
        let graphs = universe.enumerate_graphs()?;
        // (a) G_{χζ} = G_ζ for all G
        for g in &graphs {
            if self.restrict(&outer.restrict(g)?)? != self.restrict(g)? {
                return Ok(false);
            }
        }
        // (b) ⟨H_ζ̄|G_ζ̄⟩ = ⟨H_χζ̄|G_χζ̄⟩⟨H_χ̄|G_χ̄⟩ for all pairs, as indicators
        #[derive(Clone)]
        struct Parts {
            zetabar: Graph,
            chi_zetabar: Graph,
            chibar: Graph,
        }
        let mut parts = Vec::with_capacity(graphs.len());
        for g in &graphs {
            let zeta = self.restrict(g)?;
            let chi = outer.restrict(g)?;
            let chi_zeta = self.restrict(&chi)?;
            parts.push(Parts {
                zetabar: g.difference(&zeta),
                chi_zetabar: chi.difference(&chi_zeta),
                chibar: g.difference(&chi),
            });
        }
        for pg in &parts {
            for ph in &parts {
                let lhs = pg.zetabar == ph.zetabar;
                let rhs = pg.chi_zetabar == ph.chi_zetabar && pg.chibar == ph.chibar;
                if lhs != rhs {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// Pointwise equality of two selectors over a universe.
    pub fn pointwise_eq(&self, other: &Restriction, universe: &Universe) -> Result<bool> {
        for g in universe.enumerate_graphs()? {
            if self.restrict(&g)? != other.restrict(&g)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Serializable description of the selector, when it has one. Table and
    /// custom selectors can be exported with [`Restriction::to_table`].
    pub(crate) fn kind_view(&self) -> KindView<'_> {
        match &self.kind {
            Kind::Whole => KindView::Whole,
            Kind::None => KindView::None,
            Kind::ByVertex(v) => KindView::ByVertex(v),
            Kind::ByState(s) => KindView::ByState(s),
            Kind::WhiteSelector { white, black } => KindView::WhiteSelector { white, black },
            Kind::FlagZero => KindView::FlagZero,
            Kind::Union(a, b) => KindView::Union(a, b),
            Kind::Composition(a, b) => KindView::Composition(a, b),
            Kind::Piecewise { .. } => KindView::Piecewise,
            Kind::Table(t) => KindView::Table(t),
            Kind::Custom(_) => KindView::Custom,
        }
    }

    /// Materializes the selector as an explicit table over `universe`.
    pub fn to_table(&self, universe: &Universe) -> Result<BTreeMap<Graph, Graph>> {
        let mut table = BTreeMap::new();
        for g in universe.enumerate_graphs()? {
            let sel = self.restrict(&g)?;
            table.insert(g, sel);
        }
        Ok(table)
    }
}

pub(crate) enum KindView<'a> {
    Whole,
    None,
    ByVertex(&'a str),
    ByState(&'a str),
    WhiteSelector { white: &'a str, black: &'a str },
    FlagZero,
    Union(&'a Restriction, &'a Restriction),
    Composition(&'a Restriction, &'a Restriction),
    Piecewise,
    Table(&'a BTreeMap<Graph, Graph>),
    Custom,
}

fn keep_systems(g: &Graph, keep: impl Fn(&System) -> bool) -> Graph {
    Graph::from_sorted_unchecked(g.systems().iter().filter(|s| keep(s)).cloned().collect())
}

/// All graphs `H` with `low ⊆ H ⊆ high`, in a deterministic order.
fn between(low: &Graph, high: &Graph) -> Vec<Graph> {
    let free: Vec<&System> = high.systems().iter().filter(|s| !low.contains(s)).collect();
    let mut out = Vec::with_capacity(1 << free.len());
    for mask in 0u32..(1 << free.len()) {
        let mut systems: Vec<System> = low.systems().to_vec();
        for (i, s) in free.iter().enumerate() {
            if mask & (1 << i) != 0 {
                systems.push((*s).clone());
            }
        }
        systems.sort();
        out.push(Graph::from_sorted_unchecked(systems));
    }
    out
}

/// Outcome of the exhaustive restriction-axiom check.
#[derive(Debug, Clone)]
pub struct ValidationReport {
    pub label: String,
    pub passed: bool,
    /// `(G, H)` with `G_χ ⊆ H ⊆ G` but `H_χ ≠ G_χ`, when the axiom fails.
    pub counterexample: Option<(Graph, Graph)>,
    pub detail: Option<String>,
    pub graphs_checked: usize,
    pub pairs_checked: usize,
}

impl ValidationReport {
    pub fn describe(&self) -> String {
        if self.passed {
            format!(
                "pass: {} graphs, {} nested pairs",
                self.graphs_checked, self.pairs_checked
            )
        } else if let Some((g, h)) = &self.counterexample {
            match &self.detail {
                Some(d) => format!("fail on G={g}: {d}"),
                None => format!("fail: G={g}, H={h} select different parts"),
            }
        } else {
            "fail".into()
        }
    }
}

/// The four commutation verdicts between two selectors and their
/// complement-part versions.
#[derive(Debug, Clone)]
pub struct CommutationReport {
    pub left: String,
    pub right: String,
    pub plain: bool,
    pub left_bar: bool,
    pub right_bar: bool,
    pub both_bar: bool,
}

impl CommutationReport {
    pub fn all_four(&self) -> bool {
        self.plain && self.left_bar && self.right_bar && self.both_bar
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(tokens: &[&str]) -> Graph {
        Graph::from_tokens(tokens).unwrap()
    }

    fn u2s2() -> Universe {
        Universe::new(["u", "v"], ["b", "w"]).unwrap()
    }

    fn u3s2() -> Universe {
        Universe::new(["u", "v", "x"], ["b", "w"]).unwrap()
    }

    #[test]
    fn white_selector_keeps_whites_unless_all_black() {
        let chi = Restriction::white_selector("w", "b");
        assert_eq!(chi.restrict(&g(&["w.u", "b.v"])).unwrap(), g(&["w.u"]));
        assert_eq!(chi.restrict(&g(&["b.u", "b.v"])).unwrap(), g(&["b.u", "b.v"]));
        assert_eq!(chi.restrict(&Graph::empty()).unwrap(), Graph::empty());
    }

    #[test]
    fn complement_part_is_set_difference() {
        let chi = Restriction::white_selector("w", "b");
        assert_eq!(chi.complement_part(&g(&["w.u", "b.v"])).unwrap(), g(&["b.v"]));
        assert_eq!(chi.complement_part(&Graph::empty()).unwrap(), Graph::empty());
        let zeta_v = Restriction::by_vertex("v");
        assert_eq!(zeta_v.complement_part(&g(&["w.u", "b.v"])).unwrap(), g(&["w.u"]));
    }

    #[test]
    fn by_vertex_and_white_selector_validate() {
        let u = u3s2();
        assert!(Restriction::by_vertex("v").validate(&u).unwrap().passed);
        assert!(Restriction::white_selector("w", "b").validate(&u).unwrap().passed);
        assert!(Restriction::by_state("w").validate(&u).unwrap().passed);
        assert!(Restriction::whole().validate(&u).unwrap().passed);
        assert!(Restriction::none().validate(&u).unwrap().passed);
    }

    #[test]
    fn even_size_selector_fails_validation_with_counterexample() {
        // selects everything iff the graph has an even number of systems;
        // on a 3-vertex universe a 3-system graph selects ∅ while its
        // 2-system subgraphs select themselves
        let chi = Restriction::custom("even-size", |g: &Graph| {
            if g.len() % 2 == 0 {
                g.clone()
            } else {
                Graph::empty()
            }
        });
        let report = chi.validate(&u3s2()).unwrap();
        assert!(!report.passed);
        let (big, h) = report.counterexample.unwrap();
        assert_eq!(big.len() % 2, 1);
        assert!(h.is_subgraph_of(&big));
        assert_eq!(chi.restrict(&h).unwrap(), h);
    }

    #[test]
    fn any_restriction_maps_empty_to_empty() {
        for chi in [
            Restriction::by_vertex("u"),
            Restriction::by_state("w"),
            Restriction::white_selector("w", "b"),
            Restriction::whole(),
            Restriction::none(),
        ] {
            assert_eq!(chi.restrict(&Graph::empty()).unwrap(), Graph::empty());
        }
    }

    #[test]
    fn pointwise_verdicts() {
        let u = u3s2();
        assert!(Restriction::by_vertex("v").is_pointwise(&u).unwrap());
        assert!(Restriction::by_state("w").is_pointwise(&u).unwrap());
        // whites-unless-all-black: {b.u} alone keeps itself, but inside
        // {w.v, b.u} the black system is dropped
        let chi = Restriction::white_selector("w", "b");
        assert!(!chi.is_pointwise(&u).unwrap());
        assert_eq!(chi.restrict(&g(&["b.u"])).unwrap(), g(&["b.u"]));
        assert_eq!(chi.restrict(&g(&["w.v", "b.u"])).unwrap(), g(&["w.v"]));
    }

    #[test]
    fn composition_identities() {
        let u = u2s2();
        let chi = Restriction::white_selector("w", "b");
        // χχ = χ
        let chichi = chi.compose(&chi);
        assert!(chichi.pointwise_eq(&chi, &u).unwrap());
        // χ then complement of χ = nothing, on every graph
        for graph in u.enumerate_graphs().unwrap() {
            let inner = chi.restrict(&graph).unwrap();
            assert_eq!(chi.complement_part(&inner).unwrap(), Graph::empty());
        }
        // disjoint vertex picks compose to the empty selector
        let zu = Restriction::by_vertex("u");
        let zv = Restriction::by_vertex("v");
        assert!(zu.compose(&zv).pointwise_eq(&Restriction::none(), &u).unwrap());
    }

    #[test]
    fn union_of_vertex_picks() {
        let u = u3s2();
        let zu = Restriction::by_vertex("u");
        let zv = Restriction::by_vertex("v");
        let both = zu.union(&zv, &u).unwrap();
        assert_eq!(
            both.restrict(&g(&["w.u", "b.v", "w.x"])).unwrap(),
            g(&["w.u", "b.v"])
        );
        // idempotent union
        let zz = zu.union(&zu, &u).unwrap();
        assert!(zz.pointwise_eq(&zu, &u).unwrap());
    }

    #[test]
    fn commutation_of_disjoint_vertex_picks() {
        let u = u3s2();
        let r = Restriction::by_vertex("u")
            .commute(&Restriction::by_vertex("v"), &u)
            .unwrap();
        assert!(r.all_four());
    }

    #[test]
    fn self_commutation_holds() {
        let u = u2s2();
        let chi = Restriction::white_selector("w", "b");
        let r = chi.commute(&chi, &u).unwrap();
        assert!(r.plain);
    }

    #[test]
    fn comprehension_examples() {
        let u = u3s2();
        let zv = Restriction::by_vertex("v");
        assert!(zv.is_comprehended_in(&zv, &u).unwrap());
        let zu = Restriction::by_vertex("u");
        let zuv = zu.union(&zv, &u).unwrap();
        assert!(zv.is_comprehended_in(&zuv, &u).unwrap());
    }

    #[test]
    fn vertex_pick_is_not_comprehended_in_white_selector() {
        // enumeration verdict: on G = {w.u, b.v} the white selector keeps
        // only {w.u}, so re-selecting the vertex inside it loses the black
        // system the plain vertex pick would keep
        let u = u2s2();
        let zv = Restriction::by_vertex("v");
        let whites = Restriction::white_selector("w", "b");
        assert!(!zv.is_comprehended_in(&whites, &u).unwrap());
        let witness = g(&["w.u", "b.v"]);
        let through = zv.restrict(&whites.restrict(&witness).unwrap()).unwrap();
        assert_eq!(through, Graph::empty());
        assert_eq!(zv.restrict(&witness).unwrap(), g(&["b.v"]));
    }

    #[test]
    fn flag_zero_selects_zero_flagged_systems() {
        let mu = Restriction::flag_zero();
        let graph = g(&["0.w.u", "1.b.v"]);
        assert_eq!(mu.restrict(&graph).unwrap(), g(&["0.w.u"]));
        assert_eq!(mu.complement_part(&graph).unwrap(), g(&["1.b.v"]));
    }

    #[test]
    fn table_restriction_round_trips_builtin() {
        let u = u2s2();
        let chi = Restriction::white_selector("w", "b");
        let table = Restriction::table("tabled", chi.to_table(&u).unwrap());
        assert!(table.pointwise_eq(&chi, &u).unwrap());
        assert!(table.validate(&u).unwrap().passed);
    }
}
