//! Systems, graphs, and finite universes.
//!
//! A *system* is an internal state attached to a named vertex. A *graph* is a
//! finite set of systems in which no vertex appears twice; graphs label the
//! canonical basis of the Hilbert space everything else acts on. A *universe*
//! fixes the finite vertex and state alphabets and therefore the enumerable
//! set of basis graphs.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::fmt;

/// Enumeration cap: a universe with more basis graphs than this is rejected.
pub const UNIVERSE_CAP: u128 = 1 << 20;

/// One internal state attached to one named vertex.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct System {
    /// Vertex name. Must not contain `.`.
    pub vertex: String,
    /// Internal state symbol. May contain `.` (flag-extended states do).
    pub state: String,
}

impl System {
    pub fn new(state: impl Into<String>, vertex: impl Into<String>) -> Self {
        Self {
            vertex: vertex.into(),
            state: state.into(),
        }
    }

    /// `state.vertex` token, the serialization form.
    pub fn token(&self) -> String {
        format!("{}.{}", self.state, self.vertex)
    }

    /// Parses a `state.vertex` token. The vertex is everything after the
    /// last `.`, so state symbols may themselves contain dots.
    pub fn parse_token(token: &str) -> Result<Self> {
        match token.rsplit_once('.') {
            Some((state, vertex)) if !state.is_empty() && !vertex.is_empty() => {
                Ok(Self::new(state, vertex))
            }
            _ => Err(Error::Input(format!("malformed system token `{token}`"))),
        }
    }
}

impl fmt::Display for System {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.token())
    }
}

/// A finite set of systems with pairwise distinct vertices, stored in
/// canonical order (sorted by vertex). Two graphs are equal iff their
/// canonical encodings are identical, so derived `Eq`/`Ord`/`Hash` agree
/// with set equality.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Graph {
    systems: Vec<System>,
}

impl Graph {
    /// The empty graph.
    pub fn empty() -> Self {
        Self::default()
    }

    /// Builds the canonical graph carrying the given systems. Input order is
    /// irrelevant; identical duplicates are deduplicated silently; two
    /// systems on one vertex with different states are rejected.
    pub fn new(systems: impl IntoIterator<Item = System>) -> Result<Self> {
        let mut systems: Vec<System> = systems.into_iter().collect();
        systems.sort();
        systems.dedup();
        for pair in systems.windows(2) {
            if pair[0].vertex == pair[1].vertex {
                return Err(Error::WellNamednessViolation {
                    vertex: pair[0].vertex.clone(),
                    first: pair[0].state.clone(),
                    second: pair[1].state.clone(),
                });
            }
        }
        Ok(Self { systems })
    }

    /// Builds a graph from a slice of already-canonical systems without
    /// re-validating. Callers must uphold canonical order and well-namedness.
    pub(crate) fn from_sorted_unchecked(systems: Vec<System>) -> Self {
        debug_assert!(systems.windows(2).all(|p| p[0].vertex < p[1].vertex));
        Self { systems }
    }

    pub fn systems(&self) -> &[System] {
        &self.systems
    }

    pub fn len(&self) -> usize {
        self.systems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.systems.is_empty()
    }

    /// The set of vertex names occupied by this graph, in canonical order.
    pub fn support(&self) -> Vec<&str> {
        self.systems.iter().map(|s| s.vertex.as_str()).collect()
    }

    /// The state carried at `vertex`, if the vertex is occupied.
    pub fn state_at(&self, vertex: &str) -> Option<&str> {
        self.systems
            .binary_search_by(|s| s.vertex.as_str().cmp(vertex))
            .ok()
            .map(|i| self.systems[i].state.as_str())
    }

    pub fn contains_vertex(&self, vertex: &str) -> bool {
        self.state_at(vertex).is_some()
    }

    pub fn contains(&self, system: &System) -> bool {
        self.state_at(&system.vertex) == Some(system.state.as_str())
    }

    /// True iff every system of `self` also belongs to `other`.
    pub fn is_subgraph_of(&self, other: &Graph) -> bool {
        self.systems.iter().all(|s| other.contains(s))
    }

    /// Set union. Fails with `IncompatibleUnion` if some vertex carries
    /// different states on the two sides.
    pub fn union(&self, other: &Graph) -> Result<Graph> {
        let mut merged = Vec::with_capacity(self.len() + other.len());
        let (mut i, mut j) = (0, 0);
        while i < self.systems.len() && j < other.systems.len() {
            let (a, b) = (&self.systems[i], &other.systems[j]);
            match a.vertex.cmp(&b.vertex) {
                std::cmp::Ordering::Less => {
                    merged.push(a.clone());
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    merged.push(b.clone());
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    if a.state != b.state {
                        return Err(Error::IncompatibleUnion {
                            vertex: a.vertex.clone(),
                            left: a.state.clone(),
                            right: b.state.clone(),
                        });
                    }
                    merged.push(a.clone());
                    i += 1;
                    j += 1;
                }
            }
        }
        merged.extend_from_slice(&self.systems[i..]);
        merged.extend_from_slice(&other.systems[j..]);
        Ok(Graph::from_sorted_unchecked(merged))
    }

    /// Set difference `self \ other` (by whole systems, not by vertex).
    pub fn difference(&self, other: &Graph) -> Graph {
        Graph::from_sorted_unchecked(
            self.systems
                .iter()
                .filter(|s| !other.contains(s))
                .cloned()
                .collect(),
        )
    }

    /// Sorted `state.vertex` tokens (the serialization form).
    pub fn tokens(&self) -> Vec<String> {
        self.systems.iter().map(|s| s.token()).collect()
    }

    pub fn from_tokens<S: AsRef<str>>(tokens: &[S]) -> Result<Self> {
        Graph::new(
            tokens
                .iter()
                .map(|t| System::parse_token(t.as_ref()))
                .collect::<Result<Vec<_>>>()?,
        )
    }
}

impl fmt::Display for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.systems.is_empty() {
            return write!(f, "{{}}");
        }
        write!(f, "{{")?;
        for (i, s) in self.systems.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{s}")?;
        }
        write!(f, "}}")
    }
}

/// Finite vertex and state alphabets. Fixes the enumerable basis: each vertex
/// is either absent or carries exactly one state, so there are
/// `(|states|+1)^|vertices|` basis graphs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Universe {
    vertices: Vec<String>,
    states: Vec<String>,
}

impl Universe {
    /// Builds a universe; both alphabets are sorted and deduplicated so the
    /// canonical order is the lexicographic one.
    pub fn new(
        vertices: impl IntoIterator<Item = impl Into<String>>,
        states: impl IntoIterator<Item = impl Into<String>>,
    ) -> Result<Self> {
        let mut vertices: Vec<String> = vertices.into_iter().map(Into::into).collect();
        let mut states: Vec<String> = states.into_iter().map(Into::into).collect();
        vertices.sort();
        vertices.dedup();
        states.sort();
        states.dedup();
        for v in &vertices {
            if v.contains('.') || v.is_empty() {
                return Err(Error::Input(format!("invalid vertex name `{v}`")));
            }
        }
        for s in &states {
            if s.is_empty() {
                return Err(Error::Input("empty state symbol".into()));
            }
        }
        Ok(Self { vertices, states })
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    /// Number of basis graphs, `(|states|+1)^|vertices|`.
    pub fn graph_count(&self) -> u128 {
        (self.states.len() as u128 + 1).pow(self.vertices.len() as u32)
    }

    pub fn contains_graph(&self, graph: &Graph) -> bool {
        graph.systems().iter().all(|s| {
            self.vertices.binary_search(&s.vertex).is_ok()
                && self.states.binary_search(&s.state).is_ok()
        })
    }

    /// Enumerates every basis graph exactly once, in a deterministic order:
    /// an odometer over vertices (in canonical order), each position running
    /// through absent-then-each-state.
    pub fn enumerate_graphs(&self) -> Result<Vec<Graph>> {
        let count = self.graph_count();
        if count > UNIVERSE_CAP {
            return Err(Error::UniverseTooLarge {
                count,
                cap: UNIVERSE_CAP,
            });
        }
        let mut out = Vec::with_capacity(count as usize);
        // digit i ranges over 0 = absent, 1..=|states| = state index + 1
        let base = self.states.len() + 1;
        let n = self.vertices.len();
        let mut digits = vec![0usize; n];
        loop {
            let systems: Vec<System> = digits
                .iter()
                .enumerate()
                .filter(|(_, &d)| d > 0)
                .map(|(i, &d)| System::new(self.states[d - 1].clone(), self.vertices[i].clone()))
                .collect();
            out.push(Graph::from_sorted_unchecked(systems));
            // increment odometer, most significant digit last
            let mut pos = n;
            loop {
                if pos == 0 {
                    return Ok(out);
                }
                pos -= 1;
                digits[pos] += 1;
                if digits[pos] < base {
                    break;
                }
                digits[pos] = 0;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sys(state: &str, vertex: &str) -> System {
        System::new(state, vertex)
    }

    #[test]
    fn empty_set_is_a_graph() {
        let g = Graph::new([]).unwrap();
        assert!(g.is_empty());
        assert_eq!(g, Graph::empty());
    }

    #[test]
    fn make_graph_canonicalizes_input_order() {
        let a = Graph::new([sys("w", "u"), sys("b", "v")]).unwrap();
        let b = Graph::new([sys("b", "v"), sys("w", "u")]).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.tokens(), vec!["w.u", "b.v"]);
    }

    #[test]
    fn make_graph_rejects_conflicting_states_on_one_vertex() {
        let err = Graph::new([sys("w", "u"), sys("b", "u")]).unwrap_err();
        assert!(matches!(err, Error::WellNamednessViolation { .. }));
    }

    #[test]
    fn make_graph_dedups_identical_systems() {
        let g = Graph::new([sys("w", "u"), sys("w", "u")]).unwrap();
        assert_eq!(g.len(), 1);
    }

    #[test]
    fn support_reads_off_vertices() {
        assert!(Graph::empty().support().is_empty());
        let g = Graph::new([sys("w", "u"), sys("b", "v")]).unwrap();
        assert_eq!(g.support(), vec!["u", "v"]);
        let h = Graph::new([sys("b", "u")]).unwrap();
        assert_eq!(h.support(), vec!["u"]);
    }

    #[test]
    fn union_merges_compatible_graphs() {
        let g = Graph::new([sys("w", "u")]).unwrap();
        let h = Graph::new([sys("b", "v")]).unwrap();
        let u = g.union(&h).unwrap();
        assert_eq!(u, Graph::new([sys("w", "u"), sys("b", "v")]).unwrap());
    }

    #[test]
    fn union_with_empty_is_identity() {
        let g = Graph::new([sys("w", "u"), sys("b", "v")]).unwrap();
        assert_eq!(g.union(&Graph::empty()).unwrap(), g);
        assert_eq!(Graph::empty().union(&g).unwrap(), g);
    }

    #[test]
    fn union_rejects_conflicting_vertex() {
        let g = Graph::new([sys("w", "u")]).unwrap();
        let h = Graph::new([sys("b", "u")]).unwrap();
        assert!(matches!(
            g.union(&h).unwrap_err(),
            Error::IncompatibleUnion { .. }
        ));
    }

    #[test]
    fn difference_removes_whole_systems() {
        let g = Graph::new([sys("w", "u"), sys("b", "v")]).unwrap();
        let h = Graph::new([sys("w", "u")]).unwrap();
        assert_eq!(g.difference(&h), Graph::new([sys("b", "v")]).unwrap());
        // same vertex, different state: not the same system, nothing removed
        let k = Graph::new([sys("b", "u")]).unwrap();
        assert_eq!(g.difference(&k), g);
    }

    #[test]
    fn single_vertex_single_state_universe_has_two_graphs() {
        let u = Universe::new(["u"], ["w"]).unwrap();
        let graphs = u.enumerate_graphs().unwrap();
        assert_eq!(graphs, vec![Graph::empty(), Graph::new([sys("w", "u")]).unwrap()]);
    }

    #[test]
    fn enumeration_counts_match_direct_product_oracle() {
        // oracle: every vertex independently absent or carrying one of |Σ|
        // states, counted by brute force over the token space
        fn oracle_count(n_vertices: u32, n_states: u128) -> u128 {
            (n_states + 1).pow(n_vertices)
        }
        let u2 = Universe::new(["u", "v"], ["b", "w"]).unwrap();
        assert_eq!(oracle_count(2, 2), 9);
        assert_eq!(u2.enumerate_graphs().unwrap().len(), 9);

        let u3 = Universe::new(["u", "v", "x"], ["b", "w"]).unwrap();
        assert_eq!(oracle_count(3, 2), 27);
        assert_eq!(u3.enumerate_graphs().unwrap().len(), 27);
    }

    #[test]
    fn enumeration_yields_pairwise_distinct_encodings() {
        let u = Universe::new(["u", "v", "x"], ["b", "w"]).unwrap();
        let graphs = u.enumerate_graphs().unwrap();
        let mut tokens: Vec<Vec<String>> = graphs.iter().map(|g| g.tokens()).collect();
        tokens.sort();
        let before = tokens.len();
        tokens.dedup();
        assert_eq!(tokens.len(), before);
    }

    #[test]
    fn oversized_universe_is_rejected() {
        // 21 vertices, 1 state → 2^21 > 2^20
        let vertices: Vec<String> = (0..21).map(|i| format!("v{i:02}")).collect();
        let u = Universe::new(vertices, ["w"]).unwrap();
        assert!(matches!(
            u.enumerate_graphs().unwrap_err(),
            Error::UniverseTooLarge { .. }
        ));
    }

    #[test]
    fn token_round_trip() {
        let s = System::new("0.w", "u");
        assert_eq!(s.token(), "0.w.u");
        assert_eq!(System::parse_token("0.w.u").unwrap(), s);
        assert!(System::parse_token("plainword").is_err());
    }
}
