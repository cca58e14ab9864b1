//! State vectors over the graph basis.

use crate::graph::Graph;
use num_complex::Complex64;
use std::collections::BTreeMap;

/// Amplitudes with modulus at or below this are dropped from storage.
pub const ZERO_TOL: f64 = 1e-12;

/// Default comparison tolerance for numerical equality assertions.
pub const CMP_TOL: f64 = 1e-10;

/// A finite complex-amplitude combination of basis graphs. Entries below
/// [`ZERO_TOL`] are absent, so the zero ket has an empty map.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Ket {
    amps: BTreeMap<Graph, Complex64>,
}

impl Ket {
    pub fn zero() -> Self {
        Self::default()
    }

    /// The basis ket `|G⟩`.
    pub fn basis(graph: Graph) -> Self {
        let mut amps = BTreeMap::new();
        amps.insert(graph, Complex64::new(1.0, 0.0));
        Self { amps }
    }

    pub fn from_amplitudes(entries: impl IntoIterator<Item = (Graph, Complex64)>) -> Self {
        let mut ket = Self::zero();
        for (g, a) in entries {
            ket.add_amplitude(g, a);
        }
        ket
    }

    pub fn add_amplitude(&mut self, graph: Graph, amp: Complex64) {
        let entry = self.amps.entry(graph);
        match entry {
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

    pub fn amplitude(&self, graph: &Graph) -> Complex64 {
        self.amps.get(graph).copied().unwrap_or_default()
    }

    /// Basis graphs with nonzero amplitude, in canonical order.
    pub fn iter(&self) -> impl Iterator<Item = (&Graph, &Complex64)> {
        self.amps.iter()
    }

    pub fn support_len(&self) -> usize {
        self.amps.len()
    }

    pub fn is_zero(&self) -> bool {
        self.amps.is_empty()
    }

    /// `⟨self|other⟩`: conjugate-linear in `self`, linear in `other`.
    pub fn inner(&self, other: &Ket) -> Complex64 {
        // iterate the smaller support
        let (small, big, conj_small) = if self.amps.len() <= other.amps.len() {
            (&self.amps, &other.amps, true)
        } else {
            (&other.amps, &self.amps, false)
        };
        let mut acc = Complex64::default();
        for (g, a) in small {
            if let Some(b) = big.get(g) {
                acc += if conj_small { a.conj() * b } else { b.conj() * a };
            }
        }
        acc
    }

    pub fn norm(&self) -> f64 {
        self.amps.values().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn scale(&self, factor: Complex64) -> Ket {
        Ket::from_amplitudes(self.amps.iter().map(|(g, a)| (g.clone(), a * factor)))
    }

    pub fn add(&self, other: &Ket) -> Ket {
        let mut out = self.clone();
        for (g, a) in &other.amps {
            out.add_amplitude(g.clone(), *a);
        }
        out
    }

    pub fn sub(&self, other: &Ket) -> Ket {
        self.add(&other.scale(Complex64::new(-1.0, 0.0)))
    }

    /// Largest entrywise deviation between two kets.
    pub fn max_abs_diff(&self, other: &Ket) -> f64 {
        let mut dev: f64 = 0.0;
        for (g, a) in &self.amps {
            dev = dev.max((a - other.amplitude(g)).norm());
        }
        for (g, b) in &other.amps {
            if !self.amps.contains_key(g) {
                dev = dev.max(b.norm());
            }
        }
        dev
    }

    pub fn approx_eq(&self, other: &Ket, tol: f64) -> bool {
        self.max_abs_diff(other) <= tol
    }
}
