//! Petri nets with place capacities, firing, and the symbolic pre operators.

use alloc::collections::BTreeSet;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::svs::{SymbolicVectorSet, DEFAULT_UNION_STEP_LIMIT};
use crate::symbolic_vector::SymbolicVector;
use crate::vector::{Marking, Vector};

/// A place/transition net with optional per-place capacities.
///
/// Places and transitions are sorted by id, so marking components follow
/// the lexicographic order of place ids.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PetriNet {
    places: Vec<String>,
    transitions: Vec<String>,
    /// `w(p, t)`, indexed `[t][p]`.
    weight_in: Vec<Vec<u32>>,
    /// `w(t, p)`, indexed `[t][p]`.
    weight_out: Vec<Vec<u32>>,
    capacity: Vec<Option<u32>>,
    initial: Vector,
}

/// Incremental construction of a [`PetriNet`].
#[derive(Clone, Debug, Default)]
pub struct PetriNetBuilder {
    places: Vec<(String, u32, Option<u32>)>,
    transitions: Vec<String>,
    arcs_in: Vec<(String, String, u32)>,
    arcs_out: Vec<(String, String, u32)>,
}

impl PetriNetBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn place(&mut self, id: &str, initial: u32) -> &mut Self {
        self.places.push((id.to_string(), initial, None));
        self
    }

    pub fn place_with_capacity(&mut self, id: &str, initial: u32, capacity: u32) -> &mut Self {
        self.places.push((id.to_string(), initial, Some(capacity)));
        self
    }

    pub fn transition(&mut self, id: &str) -> &mut Self {
        self.transitions.push(id.to_string());
        self
    }

    /// Arc from place `p` to transition `t`.
    pub fn arc_in(&mut self, p: &str, t: &str, w: u32) -> &mut Self {
        self.arcs_in.push((p.to_string(), t.to_string(), w));
        self
    }

    /// Arc from transition `t` to place `p`.
    pub fn arc_out(&mut self, t: &str, p: &str, w: u32) -> &mut Self {
        self.arcs_out.push((t.to_string(), p.to_string(), w));
        self
    }

    pub fn build(&self) -> Result<PetriNet> {
        let mut places = self.places.clone();
        places.sort_by(|a, b| a.0.cmp(&b.0));
        let mut transitions = self.transitions.clone();
        transitions.sort();
        let mut seen = BTreeSet::new();
        for id in places.iter().map(|p| &p.0).chain(&transitions) {
            if !seen.insert(id.clone()) {
                return Err(Error::DuplicateId(id.clone()));
            }
        }
        if places.is_empty() {
            return Err(Error::ZeroDimension);
        }
        let pidx = |id: &str| {
            places
                .binary_search_by(|p| p.0.as_str().cmp(id))
                .map_err(|_| Error::UnknownPlace(id.to_string()))
        };
        let tidx = |id: &str| {
            transitions
                .binary_search_by(|t| t.as_str().cmp(id))
                .map_err(|_| Error::UnknownTransition(id.to_string()))
        };
        let np = places.len();
        let mut weight_in = alloc::vec![alloc::vec![0u32; np]; transitions.len()];
        let mut weight_out = weight_in.clone();
        for (p, t, w) in &self.arcs_in {
            weight_in[tidx(t)?][pidx(p)?] += w;
        }
        for (t, p, w) in &self.arcs_out {
            weight_out[tidx(t)?][pidx(p)?] += w;
        }
        for (id, m, k) in &places {
            if matches!(k, Some(k) if m > k) {
                return Err(Error::InitialAboveCapacity { place: id.clone() });
            }
        }
        Ok(PetriNet {
            initial: Vector::new(places.iter().map(|p| p.1).collect())?,
            capacity: places.iter().map(|p| p.2).collect(),
            places: places.into_iter().map(|p| p.0).collect(),
            transitions,
            weight_in,
            weight_out,
        })
    }
}

impl PetriNet {
    pub fn builder() -> PetriNetBuilder {
        PetriNetBuilder::new()
    }

    pub fn dim(&self) -> usize {
        self.places.len()
    }

    pub fn places(&self) -> &[String] {
        &self.places
    }

    pub fn transitions(&self) -> &[String] {
        &self.transitions
    }

    pub fn initial(&self) -> &Marking {
        &self.initial
    }

    pub fn capacities(&self) -> &[Option<u32>] {
        &self.capacity
    }

    pub fn place_index(&self, id: &str) -> Result<usize> {
        self.places
            .binary_search_by(|p| p.as_str().cmp(id))
            .map_err(|_| Error::UnknownPlace(id.to_string()))
    }

    pub fn transition_index(&self, id: &str) -> Result<usize> {
        self.transitions
            .binary_search_by(|t| t.as_str().cmp(id))
            .map_err(|_| Error::UnknownTransition(id.to_string()))
    }

    fn check_t(&self, t: usize) -> Result<()> {
        if t >= self.transitions.len() {
            return Err(Error::UnknownTransition(t.to_string()));
        }
        Ok(())
    }

    fn check_m(&self, m: &Vector) -> Result<()> {
        if m.dim() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: m.dim() });
        }
        Ok(())
    }

    pub fn weight_in(&self, p: usize, t: usize) -> u32 {
        self.weight_in[t][p]
    }

    pub fn weight_out(&self, t: usize, p: usize) -> u32 {
        self.weight_out[t][p]
    }

    /// Number of arcs with a positive weight.
    pub fn arc_count(&self) -> usize {
        self.weight_in.iter().chain(&self.weight_out).flatten().filter(|w| **w > 0).count()
    }

    /// Distinct arc weights, ascending.
    pub fn arc_weights(&self) -> Vec<u32> {
        let s: BTreeSet<u32> =
            self.weight_in.iter().chain(&self.weight_out).flatten().copied().filter(|w| *w > 0).collect();
        s.into_iter().collect()
    }

    /// Sets a capacity on every place that has none.
    pub fn with_uniform_capacity(&self, k: Option<u32>) -> Result<PetriNet> {
        let mut net = self.clone();
        if let Some(k) = k {
            for (p, c) in net.capacity.iter_mut().enumerate() {
                if c.is_none() {
                    if self.initial.get(p) > k {
                        return Err(Error::InitialAboveCapacity { place: self.places[p].clone() });
                    }
                    *c = Some(k);
                }
            }
        }
        Ok(net)
    }

    /// Overrides the capacity of one place.
    pub fn set_capacity(&mut self, p: usize, k: Option<u32>) -> Result<()> {
        if p >= self.dim() {
            return Err(Error::UnknownPlace(p.to_string()));
        }
        if matches!(k, Some(k) if self.initial.get(p) > k) {
            return Err(Error::InitialAboveCapacity { place: self.places[p].clone() });
        }
        self.capacity[p] = k;
        Ok(())
    }

    /// Finite capacities of every place, if all are bounded.
    pub fn finite_capacities(&self) -> Result<Vec<u32>> {
        self.capacity
            .iter()
            .zip(&self.places)
            .map(|(c, p)| c.ok_or_else(|| Error::UnboundedPlace(p.clone())))
            .collect()
    }

    /// `λ_in(t)`: the marking holding exactly the input weights of `t`.
    pub fn input_marking(&self, t: usize) -> Result<Marking> {
        self.check_t(t)?;
        Vector::new(self.weight_in[t].clone())
    }

    pub fn enabled(&self, m: &Marking, t: usize) -> Result<bool> {
        self.check_t(t)?;
        self.check_m(m)?;
        Ok(self.enabled_unchecked(m, t))
    }

    pub(crate) fn enabled_unchecked(&self, m: &Marking, t: usize) -> bool {
        (0..self.dim()).all(|p| {
            let v = m.get(p);
            self.weight_in[t][p] <= v
                && match self.capacity[p] {
                    Some(k) => v.saturating_add(self.weight_out[t][p]) <= k,
                    None => true,
                }
        })
    }

    pub fn fire(&self, m: &Marking, t: usize) -> Result<Marking> {
        if !self.enabled(m, t)? {
            return Err(Error::NotEnabled { transition: self.transitions[t].clone() });
        }
        Ok(self.fire_unchecked(m, t))
    }

    pub(crate) fn fire_unchecked(&self, m: &Marking, t: usize) -> Marking {
        let v = (0..self.dim()).map(|p| m.get(p) - self.weight_in[t][p] + self.weight_out[t][p]).collect();
        Vector::new(v).expect("dim > 0")
    }

    /// `∀p: m(p) ≤ k(p) − w(p, t)`.
    pub fn reversible(&self, t: usize, m: &Marking) -> Result<bool> {
        self.check_t(t)?;
        self.check_m(m)?;
        Ok((0..self.dim()).all(|p| match self.capacity[p] {
            Some(k) => m.get(p).saturating_add(self.weight_in[t][p]) <= k,
            None => true,
        }))
    }

    /// Smallest marking that enables `t` and reaches at least `m` by firing it.
    pub fn pre_t(&self, m: &Marking, t: usize) -> Result<Marking> {
        if !self.reversible(t, m)? {
            return Err(Error::NotReversible { transition: self.transitions[t].clone() });
        }
        Ok(self.pre_t_unchecked(m, t))
    }

    fn pre_t_unchecked(&self, m: &Marking, t: usize) -> Marking {
        let v = (0..self.dim())
            .map(|p| {
                let (i, o, x) = (self.weight_in[t][p], self.weight_out[t][p], m.get(p));
                if x <= o { i } else { x + i - o }
            })
            .collect();
        Vector::new(v).expect("dim > 0")
    }

    /// Exclude bounds `(k(p) + 1)·e_p` of every bounded place.
    fn capacity_excludes(&self, headroom: impl Fn(usize) -> u32) -> Option<Vec<Vector>> {
        let mut out = Vec::new();
        for (p, c) in self.capacity.iter().enumerate() {
            if let Some(k) = c {
                let h = headroom(p);
                if *k < h {
                    return None;
                }
                out.push(Vector::unit(self.dim(), p, k - h + 1).expect("p < dim"));
            }
        }
        Some(out)
    }

    /// All markings within the capacities.
    pub fn universe(&self) -> SymbolicVector {
        let excl = self.capacity_excludes(|_| 0).expect("headroom 0 always fits");
        SymbolicVector::canonical_from(Vector::zero(self.dim()).expect("dim > 0"), excl)
    }

    /// Markings at which `t` is enabled, as a canonical symbolic vector.
    pub fn fireable_sv(&self, t: usize) -> Result<SymbolicVector> {
        let q = self.input_marking(t)?;
        Ok(match self.capacity_excludes(|p| self.weight_out[t][p]) {
            Some(excl) => SymbolicVector::canonical_from(q, excl),
            None => SymbolicVector::empty(self.dim())?,
        })
    }

    /// Predecessors through `t` of a canonical, non-empty symbolic vector.
    fn pre_transition(&self, sv: &SymbolicVector, t: usize) -> Option<SymbolicVector> {
        let cap = self.capacity_excludes(|p| self.weight_out[t][p])?;
        let q = self.pre_t_unchecked(sv.qa(), t);
        let excl = sv.exclude().iter().map(|b| self.pre_t_unchecked(b, t)).chain(cap);
        let r = SymbolicVector::canonical_from(q, excl);
        (!r.is_empty()).then_some(r)
    }

    /// Per-transition predecessor sets of `sv`, not merged.
    pub fn pre_sv(&self, sv: &SymbolicVector) -> Result<SymbolicVectorSet> {
        self.check_m(&Vector::zero(sv.dim())?)?;
        let c = sv.canonicalize();
        let mut out = Vec::new();
        if !c.is_empty() {
            for t in 0..self.transitions.len() {
                out.extend(self.pre_transition(&c, t));
            }
        }
        SymbolicVectorSet::from_members(self.dim(), out)
    }

    /// Canonical predecessor set. With `cap_bound = Some(n)`, symbolic vectors
    /// whose include bound exceeds `n` on some place are discarded.
    pub fn pre_svs(&self, svs: &SymbolicVectorSet, cap_bound: Option<u32>) -> Result<SymbolicVectorSet> {
        self.pre_svs_bounded(svs, cap_bound, DEFAULT_UNION_STEP_LIMIT)
    }

    pub(crate) fn pre_svs_bounded(
        &self,
        svs: &SymbolicVectorSet,
        cap_bound: Option<u32>,
        limit: usize,
    ) -> Result<SymbolicVectorSet> {
        let pieces = self.pre_pieces(svs, cap_bound)?;
        SymbolicVectorSet::normalize_pieces(self.dim(), pieces, limit)
    }

    /// Canonical, non-empty predecessor pieces, one per member and
    /// transition, before any merging.
    /// Predecessor pieces of `svs` through `t` alone, not merged.
    pub(crate) fn pre_pieces_via(&self, svs: &SymbolicVectorSet, t: usize) -> Vec<SymbolicVector> {
        svs.members()
            .map(SymbolicVector::canonicalize)
            .filter(|c| !c.is_empty())
            .filter_map(|c| self.pre_transition(&c, t))
            .collect()
    }

    pub(crate) fn pre_pieces(&self, svs: &SymbolicVectorSet, cap_bound: Option<u32>) -> Result<Vec<SymbolicVector>> {
        self.check_m(&Vector::zero(svs.dim())?)?;
        let mut pieces = Vec::new();
        for sv in svs.members() {
            let c = sv.canonicalize();
            if c.is_empty() {
                continue;
            }
            for t in 0..self.transitions.len() {
                if let Some(r) = self.pre_transition(&c, t) {
                    if cap_bound.is_none_or(|n| r.qa().max_component() <= n) {
                        pieces.push(r);
                    }
                }
            }
        }
        Ok(pieces)
    }
}

#[cfg(test)]
pub(crate) mod fixtures {
    use super::*;

    /// Mutual exclusion: t0, t1 take the shared token p2; t3, t4 give it back.
    pub fn mutex() -> PetriNet {
        let mut b = PetriNet::builder();
        for p in ["p0", "p1", "p2", "p3", "p4"] {
            b.place(p, 0);
        }
        for t in ["t0", "t1", "t3", "t4"] {
            b.transition(t);
        }
        b.arc_in("p0", "t0", 1).arc_in("p2", "t0", 1).arc_out("t0", "p3", 1);
        b.arc_in("p1", "t1", 1).arc_in("p2", "t1", 1).arc_out("t1", "p4", 1);
        b.arc_in("p3", "t3", 1).arc_out("t3", "p2", 1).arc_out("t3", "p0", 1);
        b.arc_in("p4", "t4", 1).arc_out("t4", "p2", 1).arc_out("t4", "p1", 1);
        b.build().unwrap()
    }

    /// p0 --2--> t0 --1--> p1, marked (3,1).
    pub fn two_place() -> PetriNet {
        let mut b = PetriNet::builder();
        b.place("p0", 3).place("p1", 1).transition("t0");
        b.arc_in("p0", "t0", 2).arc_out("t0", "p1", 1);
        b.build().unwrap()
    }
}
