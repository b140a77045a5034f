//! Global CTL evaluation over symbolic vector sets.

use alloc::boxed::Box;
use alloc::vec::Vec;
use core::cell::OnceCell;

use crate::ctl::Formula;
use crate::error::{Error, Result};
use crate::petrinet::PetriNet;
use crate::svs::{SymbolicVectorSet, DEFAULT_UNION_STEP_LIMIT};
use crate::symbolic_vector::SymbolicVector;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EvalOptions {
    /// Uniform capacity for places without their own; `None` leaves them unbounded.
    pub capacity: Option<u32>,
    /// Grow least fixpoints one capacity level at a time.
    pub saturation: bool,
    /// Per-fixpoint iteration budget.
    pub max_iterations: usize,
    /// Keep every fixpoint iterate in [`FixpointTrace::iterates`].
    pub record_iterates: bool,
    pub union_step_limit: usize,
}

impl Default for EvalOptions {
    fn default() -> Self {
        EvalOptions {
            capacity: None,
            saturation: true,
            max_iterations: 10_000,
            record_iterates: false,
            union_step_limit: DEFAULT_UNION_STEP_LIMIT,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FixpointKind {
    Eu,
    Eg,
    SaturatedEu,
    /// Least fixpoint of the complement of `EG`.
    SaturatedEgComplement,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FixpointTrace {
    pub kind: FixpointKind,
    pub iterations: usize,
    /// Distinct iterates, in order, when recording is on.
    pub iterates: Vec<SymbolicVectorSet>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct EvalStats {
    /// Sum of iterations over all fixpoints.
    pub iterations: usize,
    /// Largest member count of any subformula result or fixpoint iterate.
    pub peak: usize,
    /// Member count of the final result.
    pub final_count: usize,
    pub fixpoints: Vec<FixpointTrace>,
}

/// Per transition, the markings where it is not enabled, and the markings where none is.
struct Deadlock {
    disabled: Vec<SymbolicVectorSet>,
    dead: SymbolicVectorSet,
}

/// Evaluates core formulas against one net. Capacities are fixed at construction.
pub struct Evaluator {
    net: PetriNet,
    opts: EvalOptions,
    universe: SymbolicVectorSet,
    /// Largest finite capacity, or `None` if some place is unbounded.
    max_cap: Option<u32>,
    /// Built on first use by the `EG` and `AX` machinery.
    deadlock: OnceCell<Deadlock>,
    stats: EvalStats,
}

impl Evaluator {
    pub fn new(net: &PetriNet, opts: EvalOptions) -> Result<Self> {
        if opts.max_iterations == 0 {
            return Err(Error::InvalidOption("max_iterations must be positive"));
        }
        let net = net.with_uniform_capacity(opts.capacity)?;
        let universe = SymbolicVectorSet::singleton(net.universe());
        let max_cap = net.capacities().iter().try_fold(0u32, |m, c| c.map(|c| m.max(c)));
        Ok(Evaluator { net, opts, universe, max_cap, deadlock: OnceCell::new(), stats: EvalStats::default() })
    }

    /// The net with the uniform capacity applied.
    pub fn net(&self) -> &PetriNet {
        &self.net
    }

    pub fn universe(&self) -> &SymbolicVectorSet {
        &self.universe
    }

    pub fn stats(&self) -> &EvalStats {
        &self.stats
    }

    pub fn take_stats(&mut self) -> EvalStats {
        core::mem::take(&mut self.stats)
    }

    /// Evaluates a core formula to the canonical set of satisfying markings.
    pub fn eval(&mut self, f: &Formula) -> Result<SymbolicVectorSet> {
        if !f.is_core() {
            return Err(Error::NotCore);
        }
        for t in f.transitions() {
            self.net.transition_index(&t)?;
        }
        let r = self.eval_core(f)?;
        self.stats.final_count = r.len();
        Ok(r)
    }

    fn observe(&mut self, s: &SymbolicVectorSet) {
        self.stats.peak = self.stats.peak.max(s.len());
    }

    fn eval_core(&mut self, f: &Formula) -> Result<SymbolicVectorSet> {
        let r = match f {
            Formula::True => self.universe.clone(),
            Formula::Fireable(t) => {
                let t = self.net.transition_index(t)?;
                SymbolicVectorSet::singleton(self.net.fireable_sv(t)?).rm_empty()
            }
            Formula::Not(a) => {
                let x = self.eval_core(a)?;
                self.negate(&x)?
            }
            Formula::Or(a, b) => {
                let x = self.eval_core(a)?;
                let y = self.eval_core(b)?;
                self.union(&x, &y)?
            }
            Formula::Ex(a) => {
                let x = self.eval_core(a)?;
                self.pre(&x)?
            }
            Formula::Eu(a, b) => {
                let x = self.eval_core(a)?;
                let y = self.eval_core(b)?;
                if self.opts.saturation {
                    self.saturated_eu(&x, &y)?
                } else {
                    self.eu(&x, &y)?
                }
            }
            Formula::Eg(a) => {
                let x = self.eval_core(a)?;
                if self.opts.saturation {
                    self.saturated_eg(&x)?
                } else {
                    self.eg(&x)?
                }
            }
            _ => return Err(Error::NotCore),
        };
        self.observe(&r);
        Ok(r)
    }

    fn limit(&self) -> usize {
        self.opts.union_step_limit
    }

    fn union(&self, x: &SymbolicVectorSet, y: &SymbolicVectorSet) -> Result<SymbolicVectorSet> {
        x.union_canonical_unchecked(y, self.limit())
    }

    fn intersect(&self, x: &SymbolicVectorSet, y: &SymbolicVectorSet) -> Result<SymbolicVectorSet> {
        x.intersect_canonical_unchecked(y, self.limit())
    }

    /// Complement within the capacity universe.
    pub fn negate(&self, x: &SymbolicVectorSet) -> Result<SymbolicVectorSet> {
        self.universe.subtract_canonical_unchecked(x, self.limit())
    }

    /// Markings with a successor in `x`.
    pub fn pre(&self, x: &SymbolicVectorSet) -> Result<SymbolicVectorSet> {
        self.net.pre_svs_bounded(x, None, self.limit())
    }

    fn deadlock(&self) -> Result<&Deadlock> {
        if let Some(d) = self.deadlock.get() {
            return Ok(d);
        }
        let mut disabled = Vec::with_capacity(self.net.transitions().len());
        let mut dead = self.universe.clone();
        for t in 0..self.net.transitions().len() {
            let on = SymbolicVectorSet::singleton(self.net.fireable_sv(t)?).rm_empty();
            let off = self.negate(&on)?;
            dead = self.intersect(&dead, &off)?;
            disabled.push(off);
        }
        Ok(self.deadlock.get_or_init(|| Deadlock { disabled, dead }))
    }

    /// Markings all of whose successors lie in `x`, including dead markings.
    pub fn weak_pre(&self, x: &SymbolicVectorSet) -> Result<SymbolicVectorSet> {
        let pieces = self.weak_pre_pieces(self.universe.members().cloned().collect(), x)?;
        SymbolicVectorSet::normalize_pieces(x.dim(), pieces, self.limit())
    }

    /// `⋃ within ∩ weak_pre(x)` as unmerged pieces, one canonical piece of `within` at a time.
    fn weak_pre_pieces(&self, within: Vec<SymbolicVector>, x: &SymbolicVectorSet) -> Result<Vec<SymbolicVector>> {
        // Each transition is either disabled or leads into `x`.
        // Overlapping pieces are fine here; each intersection is renormalized.
        let mut vias = Vec::new();
        for (t, off) in self.deadlock()?.disabled.iter().enumerate() {
            let mut via = self.net.pre_pieces_via(x, t);
            via.extend(off.members().cloned());
            vias.push(via);
        }
        let mut out = Vec::new();
        for c in within {
            let mut acc = SymbolicVectorSet::singleton(c);
            for via in &vias {
                let pieces = acc
                    .members()
                    .flat_map(|a| via.iter().filter(|v| a.meets(v)).map(move |v| a.intersect_canonical(v)))
                    .collect();
                acc = SymbolicVectorSet::normalize_pieces(x.dim(), pieces, self.limit())?;
                if acc.is_empty() {
                    break;
                }
            }
            out.extend(acc.members().cloned());
        }
        Ok(out)
    }

    fn start(&mut self, kind: FixpointKind) -> usize {
        self.stats.fixpoints.push(FixpointTrace { kind, iterations: 0, iterates: Vec::new() });
        self.stats.fixpoints.len() - 1
    }

    /// Records a new iterate; fails once the per-fixpoint budget is spent.
    fn step(&mut self, id: usize, y: &SymbolicVectorSet) -> Result<()> {
        self.observe(y);
        let tr = &mut self.stats.fixpoints[id];
        if tr.iterations >= self.opts.max_iterations {
            return Err(Error::NonConvergence { iterations: tr.iterations, last: Box::new(y.clone()) });
        }
        tr.iterations += 1;
        self.stats.iterations += 1;
        if self.opts.record_iterates {
            tr.iterates.push(y.clone());
        }
        Ok(())
    }

    /// `Y ∪ (φ ∩ pre(Y))`, with predecessors limited to include bounds `≤ n`.
    ///
    /// Predecessor pieces go straight into `Y`: the canonical form of
    /// `pre(Y)` alone can be far larger than that of the union.
    /// `y ∪ (φ ∩ pre(frontier))`, where `frontier` covers what `y` gained last.
    fn grow_eu(
        &self,
        phi: &SymbolicVectorSet,
        y: &SymbolicVectorSet,
        frontier: &SymbolicVectorSet,
        n: Option<u32>,
    ) -> Result<SymbolicVectorSet> {
        let mut pieces = self.net.pre_pieces(frontier, n)?;
        if *phi != self.universe {
            pieces = pieces
                .iter()
                .flat_map(|p| phi.members().filter(|f| p.meets(f)).map(move |f| p.intersect_canonical(f)))
                .collect();
        }
        y.union_pieces(pieces, self.limit())
    }

    /// `μY. ψ ∪ (φ ∩ pre(Y))`, iterated from the empty set. Iterates only
    /// grow, so each step adds `φ ∩ pre(Y)` to `Y`.
    pub fn eu(&mut self, phi: &SymbolicVectorSet, psi: &SymbolicVectorSet) -> Result<SymbolicVectorSet> {
        let id = self.start(FixpointKind::Eu);
        let mut y = psi.clone();
        let mut frontier = y.clone();
        self.step(id, &y)?;
        loop {
            let next = self.grow_eu(phi, &y, &frontier, None)?;
            if next == y {
                return Ok(y);
            }
            frontier = next.members_not_in(&y);
            y = next;
            self.step(id, &y)?;
        }
    }

    /// `νY. φ ∩ (pre(Y) ∪ weak_pre(Y))`, iterated from `φ`.
    pub fn eg(&mut self, phi: &SymbolicVectorSet) -> Result<SymbolicVectorSet> {
        let id = self.start(FixpointKind::Eg);
        let mut y = phi.clone();
        self.step(id, &y)?;
        loop {
            // A successor in `y`, or none at all.
            let step = self.union(&self.pre(&y)?, &self.deadlock()?.dead)?;
            let next = self.intersect(phi, &step)?;
            if next == y {
                return Ok(y);
            }
            y = next;
            self.step(id, &y)?;
        }
    }

    /// `EU` computed by saturation over the capacity level.
    pub fn saturated_eu(&mut self, phi: &SymbolicVectorSet, psi: &SymbolicVectorSet) -> Result<SymbolicVectorSet> {
        let id = self.start(FixpointKind::SaturatedEu);
        let phi = phi.clone();
        self.saturate(id, psi.clone(), |ev, y, frontier, n| ev.grow_eu(&phi, y, frontier, n))
    }

    /// `EG φ` as the complement of `μZ. ¬φ ∪ (live ∩ weak_pre(Z))`, saturated.
    pub fn saturated_eg(&mut self, phi: &SymbolicVectorSet) -> Result<SymbolicVectorSet> {
        let id = self.start(FixpointKind::SaturatedEgComplement);
        let seed = self.negate(phi)?;
        let z = self.saturate(id, seed, |ev, z, frontier, n| {
            // Only markings with a successor among the newest members can join.
            let mut cands = ev.net.pre_pieces(frontier, None)?;
            cands.sort_unstable();
            cands.dedup();
            let mut kept = ev.weak_pre_pieces(cands, z)?;
            kept.retain(|m| n.is_none_or(|n| m.max_bound_component() <= n));
            z.union_pieces(kept, ev.limit())
        })?;
        self.negate(&z)
    }

    /// Iterates `grow(Y, frontier, n)`, which must contain `Y`, for capacity levels `n = 1, 2, ...`,
    /// jumping past levels that add nothing to the next larger arc weight,
    /// then closes with an unbounded pass.
    fn saturate<F>(&mut self, id: usize, seed: SymbolicVectorSet, grow: F) -> Result<SymbolicVectorSet>
    where
        F: Fn(&Self, &SymbolicVectorSet, &SymbolicVectorSet, Option<u32>) -> Result<SymbolicVectorSet>,
    {
        let weights = self.net.arc_weights();
        let mut res = seed;
        self.step(id, &res)?;
        let mut n = 1u32;
        while self.max_cap.is_none_or(|k| n <= k) {
            let before = res.clone();
            self.close(id, &mut res, &grow, Some(n))?;
            if res == before {
                match weights.iter().find(|w| **w > n) {
                    Some(w) => n = *w,
                    None => break,
                }
            } else {
                n += 1;
            }
        }
        self.close(id, &mut res, &grow, None)?;
        Ok(res)
    }

    /// Each level starts from the whole of `res` as frontier.
    fn close<F>(&mut self, id: usize, res: &mut SymbolicVectorSet, grow: &F, n: Option<u32>) -> Result<()>
    where
        F: Fn(&Self, &SymbolicVectorSet, &SymbolicVectorSet, Option<u32>) -> Result<SymbolicVectorSet>,
    {
        let mut frontier = res.clone();
        loop {
            let next = grow(self, res, &frontier, n)?;
            if next == *res {
                return Ok(());
            }
            frontier = next.members_not_in(res);
            *res = next;
            self.step(id, res)?;
        }
    }
}

/// Evaluates any formula: reduce, desugar, reduce, then evaluate the core form.
pub fn check(net: &PetriNet, f: &Formula, opts: EvalOptions) -> Result<(SymbolicVectorSet, EvalStats)> {
    let core = f.reduce().desugar().reduce();
    let mut ev = Evaluator::new(net, opts)?;
    let r = ev.eval(&core)?;
    Ok((r, ev.take_stats()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::petrinet::fixtures;
    use crate::symbolic_vector::SymbolicVector;
    use crate::vector::Vector;
    use crate::vector;
    use alloc::vec;

    fn sv(include: Vec<Vector>, exclude: Vec<Vector>) -> SymbolicVector {
        SymbolicVector::new(include[0].dim(), include, exclude).unwrap()
    }

    fn opts(capacity: Option<u32>, saturation: bool) -> EvalOptions {
        EvalOptions { capacity, saturation, record_iterates: true, ..EvalOptions::default() }
    }

    fn parse(s: &str) -> Formula {
        Formula::parse(s).unwrap()
    }

    #[test]
    fn mutex_ef_fixpoint_iterates() {
        let net = fixtures::mutex();
        let mut ev = Evaluator::new(&net, opts(None, false)).unwrap();
        let psi = ev.eval(&parse("!(!fireable(t3) || !fireable(t4))")).unwrap();
        let full = ev.universe().clone();
        let y = ev.eu(&full, &psi).unwrap();
        let tr = &ev.stats().fixpoints[0];
        assert_eq!(tr.iterations, 3);
        assert_eq!(tr.iterates.len(), 3);
        assert_eq!(tr.iterates[0], psi);
        assert_eq!(psi, SymbolicVectorSet::singleton(SymbolicVector::up(vector![0, 0, 0, 1, 1])));
        assert_eq!(y.len(), 6);
        assert!(y.is_canonical());
        let b = 2;
        let d = |s: &SymbolicVectorSet| s.enumerate(b).unwrap();
        assert!(d(&tr.iterates[0]).is_subset(&d(&tr.iterates[1])));
        assert!(d(&tr.iterates[1]).is_subset(&d(&tr.iterates[2])));
        assert!(y.contains(&vector![1, 1, 2, 0, 0]).unwrap());
        assert!(!y.contains(&vector![1, 1, 1, 0, 0]).unwrap());
    }

    #[test]
    fn eu_examples() {
        let net = fixtures::mutex();
        let mut ev = Evaluator::new(&net, opts(None, false)).unwrap();
        let full = ev.universe().clone();
        let empty = SymbolicVectorSet::empty(5).unwrap();
        assert_eq!(ev.eu(&full, &full).unwrap(), full);
        assert_eq!(ev.stats().fixpoints[0].iterations, 1);
        assert_eq!(ev.eu(&full, &empty).unwrap(), empty);
        assert_eq!(ev.eu(&empty, &full).unwrap(), full);
    }

    #[test]
    fn eg_examples() {
        let net = fixtures::two_place();
        let mut ev = Evaluator::new(&net, opts(Some(5), false)).unwrap();
        let full = ev.universe().clone();
        assert_eq!(ev.eg(&full).unwrap(), full);
        let empty = SymbolicVectorSet::empty(2).unwrap();
        assert_eq!(ev.eg(&empty).unwrap(), empty);
        // p0 < 2 forever: no transition leaves it and every path stays put.
        let low = SymbolicVectorSet::singleton(sv(vec![vector![0, 0]], vec![vector![2, 0], vector![0, 6]]));
        assert_eq!(ev.eg(&low).unwrap(), low);
        // p0 >= 2 forever only where t0 jams on the capacity of p1.
        let high = SymbolicVectorSet::singleton(sv(vec![vector![2, 0]], vec![vector![6, 0], vector![2, 6]]));
        let stuck = SymbolicVectorSet::from_members(
            2,
            [sv(vec![vector![2, 5]], vec![vector![2, 6], vector![6, 5]]), sv(vec![vector![4, 4]], vec![vector![4, 5], vector![6, 4]])],
        )
        .unwrap()
        .canonicalize()
        .unwrap();
        assert_eq!(ev.eg(&high).unwrap(), stuck);
        // Unbounded, the descent through ever larger markings never stops.
        let mut ev = Evaluator::new(&net, EvalOptions { max_iterations: 50, ..opts(None, false) }).unwrap();
        let up = SymbolicVectorSet::singleton(SymbolicVector::up(vector![2, 0]));
        assert!(matches!(ev.eg(&up), Err(Error::NonConvergence { iterations: 50, .. })));
    }

    #[test]
    fn ex_and_weak_pre() {
        let net = fixtures::two_place();
        let mut ev = Evaluator::new(&net, opts(Some(3), false)).unwrap();
        let x = ev.eval(&parse("EX true")).unwrap();
        assert_eq!(x, SymbolicVectorSet::singleton(sv(vec![vector![2, 0]], vec![vector![2, 3], vector![4, 0]])));
        let dead = ev.eval(&parse("!EX true")).unwrap();
        let wp = ev.weak_pre(&SymbolicVectorSet::empty(2).unwrap()).unwrap();
        assert_eq!(wp, dead);
    }

    #[test]
    fn saturation_agrees_on_mutex() {
        let net = fixtures::mutex();
        for f in [
            "EF (fireable(t3) || fireable(t4))",
            "EF (fireable(t3) && fireable(t4))",
            "AG (fireable(t0) || fireable(t1) || fireable(t3) || fireable(t4))",
            "EG fireable(t0)",
            "AF fireable(t3)",
            "A[!fireable(t4) U fireable(t3)]",
        ] {
            for cap in [None, Some(1), Some(2)] {
                let (a, _) = check(&net, &parse(f), opts(cap, false)).unwrap();
                let (b, _) = check(&net, &parse(f), opts(cap, true)).unwrap();
                assert_eq!(a, b, "{f} at {cap:?}");
            }
        }
    }

    #[test]
    fn mutual_exclusion_holds() {
        let net = fixtures::mutex();
        let (bad, _) = check(&net, &parse("EF (fireable(t3) && fireable(t4))"), opts(None, true)).unwrap();
        assert!(!bad.contains(&vector![1, 1, 1, 0, 0]).unwrap());
        let (both, _) = check(&net, &parse("fireable(t3) && fireable(t4)"), opts(None, true)).unwrap();
        assert!(!both.is_empty());
    }

    #[test]
    fn non_convergence_reports_last_iterate() {
        let net = fixtures::mutex();
        let o = EvalOptions { max_iterations: 2, saturation: false, ..EvalOptions::default() };
        let e = check(&net, &parse("EF (fireable(t3) && fireable(t4))"), o).unwrap_err();
        match e {
            Error::NonConvergence { iterations, last } => {
                assert_eq!(iterations, 2);
                assert!(last.is_canonical());
            }
            e => panic!("{e:?}"),
        }
        let o = EvalOptions { max_iterations: 0, ..EvalOptions::default() };
        assert!(Evaluator::new(&net, o).is_err());
    }

    #[test]
    fn rejects_bad_input() {
        let net = fixtures::mutex();
        let mut ev = Evaluator::new(&net, EvalOptions::default()).unwrap();
        assert_eq!(ev.eval(&parse("AG true")), Err(Error::NotCore));
        assert!(matches!(ev.eval(&parse("fireable(nope)")), Err(Error::UnknownTransition(_))));
    }

    #[test]
    fn stats_are_tracked() {
        let net = fixtures::mutex();
        let (r, st) = check(&net, &parse("EF fireable(t3)"), opts(None, false)).unwrap();
        assert_eq!(st.final_count, r.len());
        assert!(st.peak >= r.len());
        assert_eq!(st.iterations, st.fixpoints.iter().map(|f| f.iterations).sum::<usize>());
    }
}
