//! Random nets and formulas for differential testing.
//!
//! Randomness comes from a caller-supplied `below(n)` returning a uniform
//! value in `0..n`, so any seeded generator can drive it.

use alloc::format;
use alloc::vec::Vec;

use crate::ctl::Formula;
use crate::error::Result;
use crate::petrinet::PetriNet;

#[derive(Clone, Copy, Debug)]
pub struct NetShape {
    pub max_places: u32,
    pub max_transitions: u32,
    pub max_weight: u32,
    /// Probability, in percent, that a given arc exists.
    pub arc_percent: u32,
}

impl Default for NetShape {
    fn default() -> Self {
        NetShape { max_places: 4, max_transitions: 4, max_weight: 2, arc_percent: 40 }
    }
}

/// A net with places `p0..` and transitions `t0..`, all initially empty
/// and without capacities.
pub fn random_net(below: &mut dyn FnMut(u32) -> u32, shape: NetShape) -> Result<PetriNet> {
    let np = 1 + below(shape.max_places);
    let nt = 1 + below(shape.max_transitions);
    let mut b = PetriNet::builder();
    for p in 0..np {
        b.place(&format!("p{p}"), 0);
    }
    for t in 0..nt {
        let t = format!("t{t}");
        b.transition(&t);
        for p in 0..np {
            let p = format!("p{p}");
            if below(100) < shape.arc_percent {
                b.arc_in(&p, &t, 1 + below(shape.max_weight));
            }
            if below(100) < shape.arc_percent {
                b.arc_out(&t, &p, 1 + below(shape.max_weight));
            }
        }
    }
    b.build()
}

/// A formula of nesting depth at most `depth` over the given transitions,
/// using every operator.
pub fn random_formula(below: &mut dyn FnMut(u32) -> u32, transitions: &[&str], depth: u32) -> Formula {
    if depth == 0 || below(5) == 0 {
        return match below(4) {
            0 => Formula::True,
            _ => Formula::fireable(transitions[below(transitions.len() as u32) as usize]),
        };
    }
    let sub = |below: &mut dyn FnMut(u32) -> u32| random_formula(below, transitions, depth - 1);
    match below(12) {
        0 => Formula::not(sub(below)),
        1 => Formula::or(sub(below), sub(below)),
        2 => Formula::and(sub(below), sub(below)),
        3 => Formula::eu(sub(below), sub(below)),
        4 => Formula::au(sub(below), sub(below)),
        n => {
            let op = ["EX", "EF", "EG", "AX", "AF", "AG", "EX"][n as usize - 5];
            Formula::unary(op, sub(below)).expect("known operator")
        }
    }
}

/// Transition ids of `net`, borrowed.
pub fn transition_ids(net: &PetriNet) -> Vec<&str> {
    net.transitions().iter().map(|s| s.as_str()).collect()
}
