use std::path::PathBuf;

use symvec_cli::config::Sidecar;
use symvec_cli::pnml::{parse_pnml, read_pnml, to_pnml};

fn fixture(name: &str) -> PathBuf {
    [env!("CARGO_MANIFEST_DIR"), "fixtures", name].iter().collect()
}

#[test]
fn mutex_shape() {
    let net = read_pnml(&fixture("mutex.pnml")).unwrap();
    assert_eq!(net.places(), ["p0", "p1", "p2", "p3", "p4"]);
    assert_eq!(net.transitions(), ["t0", "t1", "t3", "t4"]);
    assert_eq!(net.initial().values(), &[1, 1, 1, 0, 0]);
    assert_eq!(net.arc_count(), 12);
}

#[test]
fn circadian_shape() {
    for (name, n) in [("circadian_clock_n1.pnml", 1), ("circadian_clock_n2.pnml", 2)] {
        let net = read_pnml(&fixture(name)).unwrap();
        assert_eq!(net.dim(), 14);
        assert_eq!(net.transitions().len(), 16);
        assert_eq!(net.arc_count(), 58, "{name}");
        for (p, v) in net.places().iter().zip(net.initial().values()) {
            let want = match p.as_str() {
                "da" | "dr" => 1,
                p if p.ends_with("_cap") => n,
                _ => 0,
            };
            assert_eq!(*v, want, "{name} {p}");
        }
    }
}

#[test]
fn parsing_is_deterministic_and_round_trips() {
    let text = std::fs::read_to_string(fixture("circadian_clock_n2.pnml")).unwrap();
    let a = parse_pnml(&text).unwrap();
    assert_eq!(a, parse_pnml(&text).unwrap());
    assert_eq!(a, parse_pnml(&to_pnml(&a, "copy")).unwrap());
}

#[test]
fn caps_sidecar_fixture() {
    let mut net = read_pnml(&fixture("circadian_clock_n2.pnml")).unwrap();
    Sidecar::read(&fixture("circadian_clock_n2_caps.json")).unwrap().apply(&mut net).unwrap();
    let bounded = net.with_uniform_capacity(Some(2)).unwrap();
    let caps = bounded.finite_capacities().unwrap();
    let states: u64 = caps.iter().map(|k| *k as u64 + 1).product();
    assert_eq!(states, 944_784);
}
