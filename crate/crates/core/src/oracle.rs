//! Brute-force reference: the full bounded marking graph and CTL labelling
//! over it. Slow, simple, and independent of the symbolic machinery.

use alloc::collections::{BTreeSet, VecDeque};
use alloc::vec;
use alloc::string::String;
use alloc::vec::Vec;

use crate::ctl::Formula;
use crate::error::{Error, Result};
use crate::evaluator::{check, EvalOptions};
use crate::petrinet::PetriNet;
use crate::svs::SymbolicVectorSet;
use crate::vector::{Marking, Vector};

pub const DEFAULT_BUDGET: u128 = 1_000_000;

/// Every marking within the capacities, with its firing graph.
///
/// States are numbered in mixed radix with place 0 most significant, so
/// index order is lexicographic order on markings.
pub struct ExplicitSpace {
    caps: Vec<u32>,
    transitions: Vec<String>,
    in_w: Vec<Vec<u32>>,
    out_w: Vec<Vec<u32>>,
    size: usize,
    succ_off: Vec<usize>,
    succ: Vec<u32>,
    pred_off: Vec<usize>,
    pred: Vec<u32>,
}

impl ExplicitSpace {
    /// Enumerates the marking graph. Every place needs a finite capacity.
    pub fn build(net: &PetriNet, budget: u128) -> Result<Self> {
        let caps = net.finite_capacities()?;
        let size = caps.iter().try_fold(1u128, |acc, k| acc.checked_mul(*k as u128 + 1)).unwrap_or(u128::MAX);
        if size > budget || size > u32::MAX as u128 {
            return Err(Error::BudgetExceeded { size, budget });
        }
        let size = size as usize;
        let (dim, nt) = (net.dim(), net.transitions().len());
        let in_w: Vec<Vec<u32>> = (0..nt).map(|t| (0..dim).map(|p| net.weight_in(p, t)).collect()).collect();
        let out_w: Vec<Vec<u32>> = (0..nt).map(|t| (0..dim).map(|p| net.weight_out(t, p)).collect()).collect();
        let mut space = ExplicitSpace {
            caps,
            transitions: net.transitions().to_vec(),
            in_w,
            out_w,
            size,
            succ_off: Vec::with_capacity(size + 1),
            succ: Vec::new(),
            pred_off: Vec::new(),
            pred: Vec::new(),
        };
        let mut m = vec![0u32; dim];
        space.succ_off.push(0);
        for i in 0..size {
            space.decode_into(i, &mut m);
            for t in 0..nt {
                if space.enabled(&m, t) {
                    let next: Vec<u32> = (0..dim).map(|p| m[p] - space.in_w[t][p] + space.out_w[t][p]).collect();
                    space.succ.push(space.encode(&next) as u32);
                }
            }
            space.succ_off.push(space.succ.len());
        }
        space.build_pred();
        Ok(space)
    }

    fn build_pred(&mut self) {
        let mut count = vec![0usize; self.size + 1];
        for &s in &self.succ {
            count[s as usize + 1] += 1;
        }
        for i in 0..self.size {
            count[i + 1] += count[i];
        }
        let mut fill = count.clone();
        let mut pred = vec![0u32; self.succ.len()];
        for i in 0..self.size {
            for &s in self.successors(i) {
                pred[fill[s as usize]] = i as u32;
                fill[s as usize] += 1;
            }
        }
        self.pred_off = count;
        self.pred = pred;
    }

    /// `w(p,t) ≤ m(p) ≤ k(p) − w(t,p)` on every place.
    fn enabled(&self, m: &[u32], t: usize) -> bool {
        m.iter().enumerate().all(|(p, v)| self.in_w[t][p] <= *v && *v as u64 + self.out_w[t][p] as u64 <= self.caps[p] as u64)
    }

    fn encode(&self, m: &[u32]) -> usize {
        m.iter().zip(&self.caps).fold(0usize, |acc, (v, k)| acc * (*k as usize + 1) + *v as usize)
    }

    fn decode_into(&self, mut i: usize, m: &mut [u32]) {
        for p in (0..self.caps.len()).rev() {
            let r = self.caps[p] as usize + 1;
            m[p] = (i % r) as u32;
            i /= r;
        }
    }

    pub fn len(&self) -> usize {
        self.size
    }

    pub fn is_empty(&self) -> bool {
        self.size == 0
    }

    pub fn marking(&self, i: usize) -> Marking {
        let mut m = vec![0; self.caps.len()];
        self.decode_into(i, &mut m);
        Vector::new(m).expect("dim > 0")
    }

    pub fn index(&self, m: &Marking) -> Option<usize> {
        let ok = m.dim() == self.caps.len() && m.values().iter().zip(&self.caps).all(|(v, k)| v <= k);
        ok.then(|| self.encode(m.values()))
    }

    pub fn successors(&self, i: usize) -> &[u32] {
        &self.succ[self.succ_off[i]..self.succ_off[i + 1]]
    }

    pub fn predecessors(&self, i: usize) -> &[u32] {
        &self.pred[self.pred_off[i]..self.pred_off[i + 1]]
    }

    pub fn is_sink(&self, i: usize) -> bool {
        self.successors(i).is_empty()
    }

    /// States with at least one successor in `x`.
    pub fn ex(&self, x: &[bool]) -> Vec<bool> {
        (0..self.size).map(|i| self.successors(i).iter().any(|s| x[*s as usize])).collect()
    }

    /// Labels every state with the truth of `f`. Derived operators are
    /// evaluated directly rather than through desugaring.
    pub fn eval(&self, f: &Formula) -> Result<Vec<bool>> {
        use Formula::*;
        Ok(match f {
            True => vec![true; self.size],
            Fireable(id) => {
                let t = self
                    .transitions
                    .iter()
                    .position(|x| x == id)
                    .ok_or_else(|| Error::UnknownTransition(id.clone()))?;
                let mut m = vec![0; self.caps.len()];
                (0..self.size)
                    .map(|i| {
                        self.decode_into(i, &mut m);
                        self.enabled(&m, t)
                    })
                    .collect()
            }
            Not(a) => self.eval(a)?.into_iter().map(|b| !b).collect(),
            Or(a, b) => zip(self.eval(a)?, self.eval(b)?, |x, y| x || y),
            And(a, b) => zip(self.eval(a)?, self.eval(b)?, |x, y| x && y),
            Ex(a) => self.ex(&self.eval(a)?),
            Ax(a) => {
                let x = self.eval(a)?;
                (0..self.size).map(|i| self.successors(i).iter().all(|s| x[*s as usize])).collect()
            }
            Ef(a) => self.eu(&vec![true; self.size], &self.eval(a)?),
            Ag(a) => {
                let neg: Vec<bool> = self.eval(a)?.into_iter().map(|b| !b).collect();
                self.eu(&vec![true; self.size], &neg).into_iter().map(|b| !b).collect()
            }
            Eu(a, b) => self.eu(&self.eval(a)?, &self.eval(b)?),
            Eg(a) => self.eg(&self.eval(a)?),
            Af(a) => self.au(&vec![true; self.size], &self.eval(a)?),
            Au(a, b) => self.au(&self.eval(a)?, &self.eval(b)?),
        })
    }

    /// Backward search from `psi` through `phi` states.
    fn eu(&self, phi: &[bool], psi: &[bool]) -> Vec<bool> {
        let mut sat = psi.to_vec();
        let mut queue: VecDeque<usize> = (0..self.size).filter(|i| psi[*i]).collect();
        while let Some(i) = queue.pop_front() {
            for &p in self.predecessors(i) {
                let p = p as usize;
                if !sat[p] && phi[p] {
                    sat[p] = true;
                    queue.push_back(p);
                }
            }
        }
        sat
    }

    /// `phi` states on some maximal path that stays in `phi`: either an
    /// infinite one or one that ends in a sink.
    fn eg(&self, phi: &[bool]) -> Vec<bool> {
        let mut sat = phi.to_vec();
        let mut live: Vec<usize> =
            (0..self.size).map(|i| self.successors(i).iter().filter(|s| phi[**s as usize]).count()).collect();
        let mut queue: VecDeque<usize> =
            (0..self.size).filter(|i| sat[*i] && !self.is_sink(*i) && live[*i] == 0).collect();
        for &i in &queue {
            sat[i] = false;
        }
        while let Some(i) = queue.pop_front() {
            for &p in self.predecessors(i) {
                let p = p as usize;
                live[p] -= 1;
                if sat[p] && live[p] == 0 {
                    sat[p] = false;
                    queue.push_back(p);
                }
            }
        }
        sat
    }

    /// States where every maximal path reaches `psi` through `phi` states.
    /// A sink outside `psi` fails.
    fn au(&self, phi: &[bool], psi: &[bool]) -> Vec<bool> {
        let mut sat = psi.to_vec();
        let mut pending: Vec<usize> = (0..self.size).map(|i| self.successors(i).len()).collect();
        let mut queue: VecDeque<usize> = (0..self.size).filter(|i| psi[*i]).collect();
        while let Some(i) = queue.pop_front() {
            for &p in self.predecessors(i) {
                let p = p as usize;
                pending[p] -= 1;
                if !sat[p] && phi[p] && pending[p] == 0 {
                    sat[p] = true;
                    queue.push_back(p);
                }
            }
        }
        sat
    }

    pub fn satisfying(&self, f: &Formula) -> Result<BTreeSet<Marking>> {
        let sat = self.eval(f)?;
        Ok((0..self.size).filter(|i| sat[*i]).map(|i| self.marking(i)).collect())
    }

    /// First marking, in lexicographic order, on which `labels` and `svs` disagree.
    pub fn first_difference(&self, labels: &[bool], svs: &SymbolicVectorSet) -> Result<Option<Mismatch>> {
        for (i, expected) in labels.iter().enumerate() {
            let m = self.marking(i);
            let symbolic = svs.contains(&m)?;
            if symbolic != *expected {
                return Ok(Some(Mismatch { marking: m, expected: *expected, symbolic }));
            }
        }
        Ok(None)
    }
}

fn zip(a: Vec<bool>, b: Vec<bool>, f: impl Fn(bool, bool) -> bool) -> Vec<bool> {
    a.into_iter().zip(b).map(|(x, y)| f(x, y)).collect()
}

/// A marking the oracle and the symbolic result classify differently.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mismatch {
    pub marking: Marking,
    /// Oracle verdict.
    pub expected: bool,
    pub symbolic: bool,
}

/// Evaluates `f` symbolically under uniform capacity `k` and compares it
/// with the oracle on every marking. `None` means they agree.
pub fn check_equiv(net: &PetriNet, f: &Formula, k: u32, opts: EvalOptions) -> Result<Option<Mismatch>> {
    let opts = EvalOptions { capacity: Some(k), ..opts };
    let bounded = net.with_uniform_capacity(Some(k))?;
    let space = ExplicitSpace::build(&bounded, DEFAULT_BUDGET)?;
    let labels = space.eval(f)?;
    let (svs, _) = check(net, f, opts)?;
    space.first_difference(&labels, &svs)
}
