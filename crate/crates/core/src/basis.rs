//! Indexed views of an enumerated universe.
//!
//! Deciders and law suites quantify over every basis graph (or pair); doing
//! that through string-keyed maps is needlessly slow. A [`BasisIndex`]
//! enumerates the universe once and hands out integer-indexed tables for
//! restrictions and operators.

use crate::error::{Error, Result};
use crate::graph::{Graph, Universe};
use crate::operator::OperatorMatrix;
use crate::restriction::Restriction;
use num_complex::Complex64;
use std::collections::HashMap;

#[derive(Debug, Clone)]
pub struct BasisIndex {
    universe: Universe,
    graphs: Vec<Graph>,
    index: HashMap<Graph, u32>,
}

impl BasisIndex {
    pub fn new(universe: &Universe) -> Result<Self> {
        let graphs = universe.enumerate_graphs()?;
        let index = graphs
            .iter()
            .enumerate()
            .map(|(i, g)| (g.clone(), i as u32))
            .collect();
        Ok(Self {
            universe: universe.clone(),
            graphs,
            index,
        })
    }

    pub fn universe(&self) -> &Universe {
        &self.universe
    }

    pub fn len(&self) -> usize {
        self.graphs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.graphs.is_empty()
    }

    pub fn graphs(&self) -> &[Graph] {
        &self.graphs
    }

    pub fn graph(&self, i: u32) -> &Graph {
        &self.graphs[i as usize]
    }

    pub fn index_of(&self, g: &Graph) -> Option<u32> {
        self.index.get(g).copied()
    }

    /// Index of the union graph, or `None` when the union is undefined
    /// (conflicting states on a shared vertex).
    pub fn union_index(&self, i: u32, j: u32) -> Option<u32> {
        match self.graph(i).union(self.graph(j)) {
            Ok(g) => self.index_of(&g),
            Err(_) => None,
        }
    }

    /// Tabulates a restriction over the whole basis.
    pub fn tabulate(&self, chi: &Restriction) -> Result<RestrictionTable> {
        let n = self.len();
        let mut part = Vec::with_capacity(n);
        let mut co_part = Vec::with_capacity(n);
        for g in &self.graphs {
            let sel = chi.restrict(g)?;
            let co = g.difference(&sel);
            let sel_idx = self.index_of(&sel).ok_or_else(|| {
                Error::InternalContractViolation {
                    what: format!("selected part {sel} escapes the universe"),
                }
            })?;
            let co_idx = self.index_of(&co).ok_or_else(|| {
                Error::InternalContractViolation {
                    what: format!("complement part {co} escapes the universe"),
                }
            })?;
            part.push(sel_idx);
            co_part.push(co_idx);
        }
        let mut range: Vec<u32> = part.clone();
        range.sort_unstable();
        range.dedup();
        // graphs sharing a complement part, keyed by that part
        let mut groups: HashMap<u32, Vec<u32>> = HashMap::new();
        for (g_idx, &co) in co_part.iter().enumerate() {
            groups.entry(co).or_default().push(g_idx as u32);
        }
        let mut groups_by_co_part: Vec<(u32, Vec<u32>)> = groups.into_iter().collect();
        groups_by_co_part.sort_unstable_by_key(|(co, _)| *co);
        // every basis graph is the unique reconstitution of its own parts,
        // so the weave table is just the inverse of (part, co_part)
        let weave = part
            .iter()
            .zip(&co_part)
            .enumerate()
            .map(|(g, (&p, &c))| ((p, c), g as u32))
            .collect();
        Ok(RestrictionTable {
            label: chi.label().to_string(),
            part,
            co_part,
            range,
            groups_by_co_part,
            weave,
        })
    }

    /// Converts an operator into integer-indexed form. Entries on graphs
    /// outside the universe are rejected.
    pub fn index_op(&self, a: &OperatorMatrix) -> Result<IndexedOp> {
        let mut entries = HashMap::with_capacity(a.entry_count());
        let mut cols: Vec<Vec<(u32, Complex64)>> = vec![Vec::new(); self.len()];
        let mut rows: Vec<Vec<(u32, Complex64)>> = vec![Vec::new(); self.len()];
        for ((bra, ket), amp) in a.iter() {
            let b = self
                .index_of(bra)
                .ok_or_else(|| Error::Input(format!("operator entry bra {bra} is outside the universe")))?;
            let k = self
                .index_of(ket)
                .ok_or_else(|| Error::Input(format!("operator entry ket {ket} is outside the universe")))?;
            entries.insert((b, k), *amp);
            cols[k as usize].push((b, *amp));
            rows[b as usize].push((k, *amp));
        }
        Ok(IndexedOp { entries, cols, rows })
    }

    /// Dense row-major materialization, for eigenvalue work.
    pub fn to_dense(&self, a: &OperatorMatrix) -> Result<Vec<Complex64>> {
        let n = self.len();
        let mut out = vec![Complex64::default(); n * n];
        for ((bra, ket), amp) in a.iter() {
            let b = self
                .index_of(bra)
                .ok_or_else(|| Error::Input(format!("operator entry bra {bra} is outside the universe")))?;
            let k = self
                .index_of(ket)
                .ok_or_else(|| Error::Input(format!("operator entry ket {ket} is outside the universe")))?;
            out[b as usize * n + k as usize] = *amp;
        }
        Ok(out)
    }
}

/// A restriction evaluated over every basis graph.
#[derive(Debug, Clone)]
pub struct RestrictionTable {
    pub label: String,
    /// `part[G]` = index of `G_χ`.
    pub part: Vec<u32>,
    /// `co_part[G]` = index of `G \ G_χ`.
    pub co_part: Vec<u32>,
    /// Sorted distinct values of `part`: the range of the selector.
    pub range: Vec<u32>,
    /// Basis indices grouped by shared complement part, sorted by that part.
    pub groups_by_co_part: Vec<(u32, Vec<u32>)>,
    /// `(part, co_part) → whole`: the reconstitution relation.
    weave: HashMap<(u32, u32), u32>,
}

impl RestrictionTable {
    /// Whether `|left⟩ ⊗ |right⟩` reconstitutes a basis graph under this
    /// restriction: some graph must split into exactly these two parts.
    pub fn tensor_nonzero(&self, left: u32, right: u32) -> Option<u32> {
        self.weave.get(&(left, right)).copied()
    }
}

/// Integer-indexed sparse operator with row and column adjacency.
#[derive(Debug, Clone, Default)]
pub struct IndexedOp {
    pub entries: HashMap<(u32, u32), Complex64>,
    /// `cols[ket]` = list of `(bra, amplitude)`.
    pub cols: Vec<Vec<(u32, Complex64)>>,
    /// `rows[bra]` = list of `(ket, amplitude)`.
    pub rows: Vec<Vec<(u32, Complex64)>>,
}

impl IndexedOp {
    pub fn entry(&self, bra: u32, ket: u32) -> Complex64 {
        self.entries.get(&(bra, ket)).copied().unwrap_or_default()
    }
}
