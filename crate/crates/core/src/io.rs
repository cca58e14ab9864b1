//! File formats: universes, restrictions, kets, operators.
//!
//! Graphs travel as sorted lists of `state.vertex` tokens. Restriction
//! files carry a `kind` tag; selectors without a native wire form (custom
//! closures, mixed-flag selectors) can always be exported as explicit
//! tables over a universe.

use crate::error::{Error, Result};
use crate::graph::{Graph, Universe};
use crate::ket::Ket;
use crate::operator::OperatorMatrix;
use crate::restriction::{KindView, Restriction};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// Wire form of a universe file.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct UniverseSpec {
    pub vertices: Vec<String>,
    pub states: Vec<String>,
}

pub fn parse_universe(json: &str) -> Result<Universe> {
    let spec: UniverseSpec =
        serde_json::from_str(json).map_err(|e| Error::Input(format!("universe file: {e}")))?;
    Universe::new(spec.vertices, spec.states)
}

pub fn universe_to_json(universe: &Universe) -> String {
    let spec = UniverseSpec {
        vertices: universe.vertices().to_vec(),
        states: universe.states().to_vec(),
    };
    serde_json::to_string_pretty(&spec).expect("universe serialization cannot fail")
}

/// One amplitude of a ket file.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AmplitudeEntry {
    pub re: f64,
    pub im: f64,
    pub graph: Vec<String>,
}

pub fn parse_ket(json: &str, universe: &Universe) -> Result<Ket> {
    let entries: Vec<AmplitudeEntry> =
        serde_json::from_str(json).map_err(|e| Error::Input(format!("ket file: {e}")))?;
    ket_from_entries(&entries, universe)
}

pub fn ket_from_entries(entries: &[AmplitudeEntry], universe: &Universe) -> Result<Ket> {
    let mut ket = Ket::zero();
    for e in entries {
        let graph = Graph::from_tokens(&e.graph)?;
        if !universe.contains_graph(&graph) {
            return Err(Error::Input(format!("graph {graph} is outside the universe")));
        }
        ket.add_amplitude(graph, Complex64::new(e.re, e.im));
    }
    Ok(ket)
}

pub fn ket_to_entries(ket: &Ket) -> Vec<AmplitudeEntry> {
    ket.iter()
        .map(|(g, a)| AmplitudeEntry {
            re: a.re,
            im: a.im,
            graph: g.tokens(),
        })
        .collect()
}

pub fn ket_to_json(ket: &Ket) -> String {
    serde_json::to_string_pretty(&ket_to_entries(ket)).expect("ket serialization cannot fail")
}

/// One matrix element of an operator file.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OperatorEntry {
    pub re: f64,
    pub im: f64,
    pub bra: Vec<String>,
    pub ket: Vec<String>,
}

pub fn parse_operator(json: &str, universe: &Universe) -> Result<OperatorMatrix> {
    let entries: Vec<OperatorEntry> =
        serde_json::from_str(json).map_err(|e| Error::Input(format!("operator file: {e}")))?;
    let mut op = OperatorMatrix::zero();
    for e in entries {
        let bra = Graph::from_tokens(&e.bra)?;
        let ket = Graph::from_tokens(&e.ket)?;
        for g in [&bra, &ket] {
            if !universe.contains_graph(g) {
                return Err(Error::Input(format!("graph {g} is outside the universe")));
            }
        }
        op.add_entry(bra, ket, Complex64::new(e.re, e.im));
    }
    Ok(op)
}

pub fn operator_to_entries(op: &OperatorMatrix) -> Vec<OperatorEntry> {
    op.iter()
        .map(|((bra, ket), a)| OperatorEntry {
            re: a.re,
            im: a.im,
            bra: bra.tokens(),
            ket: ket.tokens(),
        })
        .collect()
}

pub fn operator_to_json(op: &OperatorMatrix) -> String {
    serde_json::to_string_pretty(&operator_to_entries(op))
        .expect("operator serialization cannot fail")
}

/// Wire form of a restriction file.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum RestrictionSpec {
    ByVertex {
        vertex: String,
    },
    ByState {
        state: String,
    },
    /// All-black passthrough, otherwise the white subgraph.
    #[serde(rename = "fig5")]
    WhiteSelector {
        #[serde(default = "default_white")]
        white: String,
        #[serde(default = "default_black")]
        black: String,
    },
    /// Flag-zero selector over a flag-extended state alphabet.
    Mu {},
    Union {
        left: Box<RestrictionSpec>,
        right: Box<RestrictionSpec>,
    },
    /// Apply `first`, then `then`. A candidate: revalidated before use.
    Compose {
        first: Box<RestrictionSpec>,
        then: Box<RestrictionSpec>,
    },
    Table {
        #[serde(default)]
        label: Option<String>,
        entries: Vec<TableRow>,
    },
    Full {},
    Empty {},
}

fn default_white() -> String {
    "w".into()
}

fn default_black() -> String {
    "b".into()
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TableRow {
    pub graph: Vec<String>,
    pub selected: Vec<String>,
}

impl RestrictionSpec {
    pub fn to_restriction(&self) -> Result<Restriction> {
        Ok(match self {
            RestrictionSpec::ByVertex { vertex } => Restriction::by_vertex(vertex.clone()),
            RestrictionSpec::ByState { state } => Restriction::by_state(state.clone()),
            RestrictionSpec::WhiteSelector { white, black } => {
                Restriction::white_selector(white.clone(), black.clone())
            }
            RestrictionSpec::Mu {} => Restriction::flag_zero(),
            RestrictionSpec::Union { left, right } => left
                .to_restriction()?
                .union_unchecked(&right.to_restriction()?),
            RestrictionSpec::Compose { first, then } => {
                first.to_restriction()?.compose(&then.to_restriction()?)
            }
            RestrictionSpec::Table { label, entries } => {
                let mut table = BTreeMap::new();
                for row in entries {
                    let graph = Graph::from_tokens(&row.graph)?;
                    let selected = Graph::from_tokens(&row.selected)?;
                    table.insert(graph, selected);
                }
                Restriction::table(label.clone().unwrap_or_else(|| "table".into()), table)
            }
            RestrictionSpec::Full {} => Restriction::whole(),
            RestrictionSpec::Empty {} => Restriction::none(),
        })
    }

    /// The wire form of a restriction, when its selector has one. Mixed and
    /// custom selectors need [`restriction_to_table_spec`].
    pub fn from_restriction(r: &Restriction) -> Result<Self> {
        Ok(match r.kind_view() {
            KindView::Whole => RestrictionSpec::Full {},
            KindView::None => RestrictionSpec::Empty {},
            KindView::ByVertex(v) => RestrictionSpec::ByVertex { vertex: v.into() },
            KindView::ByState(s) => RestrictionSpec::ByState { state: s.into() },
            KindView::WhiteSelector { white, black } => RestrictionSpec::WhiteSelector {
                white: white.into(),
                black: black.into(),
            },
            KindView::FlagZero => RestrictionSpec::Mu {},
            KindView::Union(a, b) => RestrictionSpec::Union {
                left: Box::new(Self::from_restriction(a)?),
                right: Box::new(Self::from_restriction(b)?),
            },
            KindView::Composition(a, b) => RestrictionSpec::Compose {
                first: Box::new(Self::from_restriction(a)?),
                then: Box::new(Self::from_restriction(b)?),
            },
            KindView::Table(t) => RestrictionSpec::Table {
                label: Some(r.label().to_string()),
                entries: t
                    .iter()
                    .map(|(g, sel)| TableRow {
                        graph: g.tokens(),
                        selected: sel.tokens(),
                    })
                    .collect(),
            },
            KindView::Piecewise | KindView::Custom => {
                return Err(Error::Input(format!(
                    "selector `{}` has no native wire form; export it as a table",
                    r.label()
                )))
            }
        })
    }
}

/// Exports any selector as an explicit table over a universe.
pub fn restriction_to_table_spec(r: &Restriction, universe: &Universe) -> Result<RestrictionSpec> {
    let entries = r
        .to_table(universe)?
        .into_iter()
        .map(|(g, sel)| TableRow {
            graph: g.tokens(),
            selected: sel.tokens(),
        })
        .collect();
    Ok(RestrictionSpec::Table {
        label: Some(r.label().to_string()),
        entries,
    })
}

pub fn parse_restriction(json: &str) -> Result<Restriction> {
    let spec: RestrictionSpec =
        serde_json::from_str(json).map_err(|e| Error::Input(format!("restriction file: {e}")))?;
    spec.to_restriction()
}

pub fn restriction_to_json(r: &Restriction) -> Result<String> {
    let spec = RestrictionSpec::from_restriction(r)?;
    Ok(serde_json::to_string_pretty(&spec).expect("restriction serialization cannot fail"))
}

/// Formats a float with the given number of significant digits, the way
/// numeric results are printed everywhere in this crate's textual output.
pub fn fmt_significant(x: f64, digits: usize) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let magnitude = x.abs().log10().floor() as i32;
    if magnitude < -4 || magnitude >= digits as i32 {
        format!("{:.*e}", digits.saturating_sub(1), x)
    } else {
        let decimals = (digits as i32 - 1 - magnitude).max(0) as usize;
        format!("{x:.decimals$}")
    }
}
