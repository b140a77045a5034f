//! Place/transition PNML: the subset used by the Model Checking Contest.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::path::Path;

use symvec::PetriNet;

use crate::error::{CliError, Result};

#[derive(Clone, Copy, PartialEq, Eq)]
enum Kind {
    Place,
    Transition,
}

fn child_text<'a>(node: roxmltree::Node<'a, '_>, tag: &str) -> Option<&'a str> {
    node.children()
        .find(|c| c.has_tag_name(tag))?
        .children()
        .find(|c| c.has_tag_name("text"))?
        .text()
        .map(str::trim)
}

fn number(node: roxmltree::Node<'_, '_>, tag: &str, default: u32) -> Result<u32> {
    match child_text(node, tag) {
        None => Ok(default),
        Some(t) => t.parse().map_err(|_| CliError::Pnml(format!("bad {tag} `{t}`"))),
    }
}

fn id<'a>(node: roxmltree::Node<'a, '_>) -> Result<&'a str> {
    node.attribute("id").ok_or_else(|| CliError::Pnml(format!("<{}> without id", node.tag_name().name())))
}

/// Parses a P/T net. Places are ordered by id; weights default to 1 and
/// capacities to unbounded.
pub fn parse_pnml(text: &str) -> Result<PetriNet> {
    let doc = roxmltree::Document::parse(text)?;
    let net = doc
        .descendants()
        .find(|n| n.has_tag_name("net"))
        .ok_or_else(|| CliError::Pnml("no <net> element".into()))?;
    let mut b = PetriNet::builder();
    let mut kinds: HashMap<&str, Kind> = HashMap::new();
    let elements: Vec<_> = net.descendants().filter(|n| n.is_element()).collect();
    for n in &elements {
        let kind = if n.has_tag_name("place") {
            Kind::Place
        } else if n.has_tag_name("transition") {
            Kind::Transition
        } else {
            continue;
        };
        let x = id(*n)?;
        if kinds.insert(x, kind).is_some() {
            return Err(CliError::Core(symvec::Error::DuplicateId(x.to_string())));
        }
        match kind {
            Kind::Place => b.place(x, number(*n, "initialMarking", 0)?),
            Kind::Transition => b.transition(x),
        };
    }
    for n in elements.iter().filter(|n| n.has_tag_name("arc")) {
        let end = |attr: &str| {
            let v = n.attribute(attr).ok_or_else(|| CliError::Pnml(format!("arc without {attr}")))?;
            let k = kinds.get(v).ok_or_else(|| CliError::Pnml(format!("arc endpoint `{v}` is not declared")))?;
            Ok::<_, CliError>((v, *k))
        };
        let (src, ks) = end("source")?;
        let (dst, kd) = end("target")?;
        let w = number(*n, "inscription", 1)?;
        match (ks, kd) {
            (Kind::Place, Kind::Transition) => b.arc_in(src, dst, w),
            (Kind::Transition, Kind::Place) => b.arc_out(src, dst, w),
            _ => return Err(CliError::Pnml(format!("arc {src} -> {dst} joins two nodes of the same kind"))),
        };
    }
    Ok(b.build()?)
}

pub fn read_pnml(path: &Path) -> Result<PetriNet> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.into(), source })?;
    parse_pnml(&text)
}

/// Writes `net` as a single-page PNML document. Capacities are not part of
/// the format and are dropped.
pub fn to_pnml(net: &PetriNet, name: &str) -> String {
    let mut s = String::new();
    s.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    s.push_str("<pnml xmlns=\"http://www.pnml.org/version-2009/grammar/pnml\">\n");
    let _ = writeln!(s, "  <net id=\"{name}\" type=\"http://www.pnml.org/version-2009/grammar/ptnet\">");
    s.push_str("    <page id=\"page0\">\n");
    for (p, id) in net.places().iter().enumerate() {
        let m = net.initial().get(p);
        if m == 0 {
            let _ = writeln!(s, "      <place id=\"{id}\"/>");
        } else {
            let _ = writeln!(
                s,
                "      <place id=\"{id}\"><initialMarking><text>{m}</text></initialMarking></place>"
            );
        }
    }
    for id in net.transitions() {
        let _ = writeln!(s, "      <transition id=\"{id}\"/>");
    }
    let arc = |s: &mut String, src: &str, dst: &str, w: u32| {
        let _ = write!(s, "      <arc id=\"{src}-{dst}\" source=\"{src}\" target=\"{dst}\"");
        if w == 1 {
            s.push_str("/>\n");
        } else {
            let _ = writeln!(s, "><inscription><text>{w}</text></inscription></arc>");
        }
    };
    for (t, tid) in net.transitions().iter().enumerate() {
        for (p, pid) in net.places().iter().enumerate() {
            let w = net.weight_in(p, t);
            if w > 0 {
                arc(&mut s, pid, tid, w);
            }
            let w = net.weight_out(t, p);
            if w > 0 {
                arc(&mut s, tid, pid, w);
            }
        }
    }
    s.push_str("    </page>\n  </net>\n</pnml>\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"<pnml><net id="n" type="ptnet"><page id="g">
        <place id="p"><initialMarking><text>2</text></initialMarking></place>
        <transition id="t"/>
        <arc id="a" source="p" target="t"><inscription><text>3</text></inscription></arc>
    </page></net></pnml>"#;

    #[test]
    fn minimal_document() {
        let net = parse_pnml(MINIMAL).unwrap();
        assert_eq!(net.dim(), 1);
        assert_eq!(net.initial().values(), &[2]);
        assert_eq!(net.weight_in(0, 0), 3);
        assert_eq!(net.capacities(), &[None]);
    }

    #[test]
    fn rejects_bad_documents() {
        assert!(matches!(parse_pnml("<pnml><net"), Err(CliError::Xml(_))));
        assert!(matches!(parse_pnml("<pnml/>"), Err(CliError::Pnml(_))));
        let same_kind = MINIMAL.replace(r#"target="t""#, r#"target="p""#);
        assert!(matches!(parse_pnml(&same_kind), Err(CliError::Pnml(_))));
        let unknown = MINIMAL.replace(r#"target="t""#, r#"target="x""#);
        assert!(matches!(parse_pnml(&unknown), Err(CliError::Pnml(_))));
        let dup = MINIMAL.replace(r#"<transition id="t"/>"#, r#"<transition id="p"/>"#);
        assert!(matches!(parse_pnml(&dup), Err(CliError::Core(symvec::Error::DuplicateId(_)))));
        let bad_w = MINIMAL.replace("<text>3</text>", "<text>-1</text>");
        assert!(matches!(parse_pnml(&bad_w), Err(CliError::Pnml(_))));
    }

    #[test]
    fn write_then_read() {
        let net = parse_pnml(MINIMAL).unwrap();
        assert_eq!(parse_pnml(&to_pnml(&net, "n")).unwrap(), net);
    }
}
