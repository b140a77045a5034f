//! CTL formulas over transition fireability: syntax, parsing, desugaring,
//! and a small set of local rewrites.

use alloc::boxed::Box;
use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::{String, ToString};
use core::fmt;

use crate::error::{Error, Result};

/// CTL abstract syntax. The core fragment is `True`, `Fireable`, `Not`,
/// `Or`, `Ex`, `Eg` and `Eu`; the other nodes are derived.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    True,
    Fireable(String),
    Not(Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Ex(Box<Formula>),
    Ef(Box<Formula>),
    Eg(Box<Formula>),
    Ax(Box<Formula>),
    Af(Box<Formula>),
    Ag(Box<Formula>),
    Eu(Box<Formula>, Box<Formula>),
    Au(Box<Formula>, Box<Formula>),
}

use Formula::*;

fn bx(f: Formula) -> Box<Formula> {
    Box::new(f)
}

impl Formula {
    pub fn fireable(t: &str) -> Formula {
        Fireable(t.to_string())
    }

    pub fn falsity() -> Formula {
        Not(bx(True))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Formula {
        Not(bx(f))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Or(bx(a), bx(b))
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        And(bx(a), bx(b))
    }

    pub fn eu(a: Formula, b: Formula) -> Formula {
        Eu(bx(a), bx(b))
    }

    pub fn au(a: Formula, b: Formula) -> Formula {
        Au(bx(a), bx(b))
    }

    /// Wraps `f` in a unary temporal operator named `op` (`EX`, `EF`, ...).
    pub fn unary(op: &str, f: Formula) -> Option<Formula> {
        let f = bx(f);
        Some(match op {
            "EX" => Ex(f),
            "EF" => Ef(f),
            "EG" => Eg(f),
            "AX" => Ax(f),
            "AF" => Af(f),
            "AG" => Ag(f),
            _ => return None,
        })
    }

    pub fn parse(text: &str) -> Result<Formula> {
        let mut p = Parser { src: text, pos: 0 };
        let f = p.or()?;
        p.ws();
        if p.pos < text.len() {
            return Err(p.err("unexpected trailing input"));
        }
        Ok(f)
    }

    pub fn is_false(&self) -> bool {
        matches!(self, Not(x) if **x == True)
    }

    /// True iff only core nodes occur.
    pub fn is_core(&self) -> bool {
        match self {
            True | Fireable(_) => true,
            Not(a) | Ex(a) | Eg(a) => a.is_core(),
            Or(a, b) | Eu(a, b) => a.is_core() && b.is_core(),
            And(..) | Ef(_) | Ax(_) | Af(_) | Ag(_) | Au(..) => false,
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            True | Fireable(_) => 0,
            Not(a) | Ex(a) | Ef(a) | Eg(a) | Ax(a) | Af(a) | Ag(a) => 1 + a.depth(),
            Or(a, b) | And(a, b) | Eu(a, b) | Au(a, b) => 1 + a.depth().max(b.depth()),
        }
    }

    /// Transition ids referenced by `Fireable` atoms.
    pub fn transitions(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect(&mut out);
        out
    }

    fn collect(&self, out: &mut BTreeSet<String>) {
        match self {
            True => {}
            Fireable(t) => {
                out.insert(t.clone());
            }
            Not(a) | Ex(a) | Ef(a) | Eg(a) | Ax(a) | Af(a) | Ag(a) => a.collect(out),
            Or(a, b) | And(a, b) | Eu(a, b) | Au(a, b) => {
                a.collect(out);
                b.collect(out);
            }
        }
    }

    /// Rewrites derived operators into the core fragment.
    pub fn desugar(&self) -> Formula {
        let n = |f: Formula| Not(bx(f));
        match self {
            True => True,
            Fireable(t) => Fireable(t.clone()),
            Not(a) => n(a.desugar()),
            Or(a, b) => Or(bx(a.desugar()), bx(b.desugar())),
            And(a, b) => n(Or(bx(n(a.desugar())), bx(n(b.desugar())))),
            Ex(a) => Ex(bx(a.desugar())),
            Ef(a) => Eu(bx(True), bx(a.desugar())),
            Eg(a) => Eg(bx(a.desugar())),
            Ax(a) => n(Ex(bx(n(a.desugar())))),
            Af(a) => n(Eg(bx(n(a.desugar())))),
            Ag(a) => n(Eu(bx(True), bx(n(a.desugar())))),
            Eu(a, b) => Eu(bx(a.desugar()), bx(b.desugar())),
            Au(a, b) => {
                let (a, b) = (a.desugar(), b.desugar());
                let both = n(Or(bx(n(n(a))), bx(n(n(b.clone())))));
                n(Or(bx(Eu(bx(n(b.clone())), bx(both))), bx(Eg(bx(n(b))))))
            }
        }
    }

    /// Applies the local rewrite rules until nothing changes.
    pub fn reduce(&self) -> Formula {
        let mut cur = self.clone();
        loop {
            let next = cur.reduce_once();
            if next == cur {
                return cur;
            }
            cur = next;
        }
    }

    fn reduce_once(&self) -> Formula {
        let r = match self {
            True | Fireable(_) => return self.clone(),
            Not(a) => Not(bx(a.reduce_once())),
            Or(a, b) => Or(bx(a.reduce_once()), bx(b.reduce_once())),
            And(a, b) => And(bx(a.reduce_once()), bx(b.reduce_once())),
            Ex(a) => Ex(bx(a.reduce_once())),
            Ef(a) => Ef(bx(a.reduce_once())),
            Eg(a) => Eg(bx(a.reduce_once())),
            Ax(a) => Ax(bx(a.reduce_once())),
            Af(a) => Af(bx(a.reduce_once())),
            Ag(a) => Ag(bx(a.reduce_once())),
            Eu(a, b) => Eu(bx(a.reduce_once()), bx(b.reduce_once())),
            Au(a, b) => Au(bx(a.reduce_once()), bx(b.reduce_once())),
        };
        match r {
            Not(a) => match *a {
                Not(x) => *x,
                a => Not(bx(a)),
            },
            Or(a, b) if a == b => *a,
            Or(a, b) if *a == True || *b == True => True,
            Or(a, b) if a.is_false() => *b,
            Or(a, b) if b.is_false() => *a,
            Ef(a) if matches!(*a, Ef(_)) => *a,
            Eg(a) if matches!(*a, Eg(_)) => *a,
            Ag(a) if matches!(*a, Ag(_)) => *a,
            Ex(a) if a.is_false() => *a,
            other => other,
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            True => f.write_str("true"),
            Fireable(t) => write!(f, "fireable({t})"),
            Not(a) => write!(f, "!{a}"),
            Or(a, b) => write!(f, "({a} || {b})"),
            And(a, b) => write!(f, "({a} && {b})"),
            Ex(a) => write!(f, "EX {a}"),
            Ef(a) => write!(f, "EF {a}"),
            Eg(a) => write!(f, "EG {a}"),
            Ax(a) => write!(f, "AX {a}"),
            Af(a) => write!(f, "AF {a}"),
            Ag(a) => write!(f, "AG {a}"),
            Eu(a, b) => write!(f, "E[{a} U {b}]"),
            Au(a, b) => write!(f, "A[{a} U {b}]"),
        }
    }
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

fn is_word(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_'
}

impl<'a> Parser<'a> {
    fn err(&self, msg: &str) -> Error {
        Error::Parse { pos: self.pos, msg: msg.to_string() }
    }

    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn ws(&mut self) {
        let r = self.rest();
        self.pos += r.len() - r.trim_start().len();
    }

    fn eat(&mut self, tok: &str) -> bool {
        self.ws();
        if self.rest().starts_with(tok) {
            self.pos += tok.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, tok: &str) -> Result<()> {
        if self.eat(tok) {
            Ok(())
        } else {
            Err(self.err(&format!("expected `{tok}`")))
        }
    }

    fn peek_word(&mut self) -> &'a str {
        self.ws();
        let r = self.rest();
        let end = r.find(|c: char| !is_word(c)).unwrap_or(r.len());
        &r[..end]
    }

    fn or(&mut self) -> Result<Formula> {
        let mut f = self.and()?;
        while self.eat("||") {
            f = Or(bx(f), bx(self.and()?));
        }
        Ok(f)
    }

    fn and(&mut self) -> Result<Formula> {
        let mut f = self.unary()?;
        while self.eat("&&") {
            f = And(bx(f), bx(self.unary()?));
        }
        Ok(f)
    }

    fn unary(&mut self) -> Result<Formula> {
        if self.eat("!") {
            return Ok(Not(bx(self.unary()?)));
        }
        let w = self.peek_word();
        if w.len() == 2 && matches!(w, "EX" | "EF" | "EG" | "AX" | "AF" | "AG") {
            self.pos += 2;
            let inner = self.unary()?;
            return Ok(Formula::unary(w, inner).expect("operator matched above"));
        }
        if w == "E" || w == "A" {
            self.pos += 1;
            self.expect("[")?;
            let a = self.or()?;
            if self.peek_word() != "U" {
                return Err(self.err("expected `U`"));
            }
            self.pos += 1;
            let b = self.or()?;
            self.expect("]")?;
            return Ok(if w == "E" { Eu(bx(a), bx(b)) } else { Au(bx(a), bx(b)) });
        }
        self.atom()
    }

    fn atom(&mut self) -> Result<Formula> {
        if self.eat("(") {
            let f = self.or()?;
            self.expect(")")?;
            return Ok(f);
        }
        match self.peek_word() {
            "true" => {
                self.pos += 4;
                Ok(True)
            }
            "false" => {
                self.pos += 5;
                Ok(Formula::falsity())
            }
            "fireable" => {
                self.pos += 8;
                self.expect("(")?;
                let r = self.rest();
                let end = r.find(')').ok_or_else(|| self.err("unclosed `fireable(`"))?;
                let ids = &r[..end];
                let start = self.pos;
                let mut f: Option<Formula> = None;
                for id in ids.split(',') {
                    let id = id.trim();
                    if id.is_empty() || id.contains(|c: char| c.is_whitespace() || "()[]!&|".contains(c)) {
                        return Err(Error::Parse { pos: start, msg: format!("invalid transition id `{id}`") });
                    }
                    let atom = Fireable(id.to_string());
                    f = Some(match f {
                        None => atom,
                        Some(g) => Or(bx(g), bx(atom)),
                    });
                }
                self.pos += end + 1;
                f.ok_or_else(|| self.err("empty transition list"))
            }
            "" => Err(self.err(if self.rest().is_empty() { "unexpected end of input" } else { "unknown token" })),
            w => Err(self.err(&format!("unknown token `{w}`"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    fn fa(t: &str) -> Formula {
        Formula::fireable(t)
    }

    #[test]
    fn parse_examples() {
        assert_eq!(
            Formula::parse("EF (fireable(t3) && fireable(t4))").unwrap(),
            Ef(bx(Formula::and(fa("t3"), fa("t4"))))
        );
        assert_eq!(Formula::parse("!!true").unwrap(), Not(bx(Not(bx(True)))));
        assert_eq!(Formula::parse("E[true U fireable(t0)]").unwrap(), Formula::eu(True, fa("t0")));
        assert_eq!(Formula::parse("false").unwrap(), Formula::falsity());
    }

    #[test]
    fn precedence() {
        let f = Formula::parse("!fireable(a) || fireable(b) && fireable(c)").unwrap();
        assert_eq!(f, Formula::or(Formula::not(fa("a")), Formula::and(fa("b"), fa("c"))));
        let g = Formula::parse("EF fireable(a) && fireable(b)").unwrap();
        assert_eq!(g, Formula::and(Ef(bx(fa("a"))), fa("b")));
        let h = Formula::parse("A[EX true U AG !fireable(x.y-1)]").unwrap();
        assert_eq!(h, Formula::au(Ex(bx(True)), Ag(bx(Formula::not(fa("x.y-1"))))));
        assert_eq!(Formula::parse("fireable(a, b)").unwrap(), Formula::or(fa("a"), fa("b")));
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(Formula::parse("EF"), Err(Error::Parse { pos: 2, .. })));
        assert!(matches!(Formula::parse("true &&"), Err(Error::Parse { .. })));
        assert!(matches!(Formula::parse("E[true fireable(a)]"), Err(Error::Parse { .. })));
        assert!(matches!(Formula::parse("maybe"), Err(Error::Parse { pos: 0, .. })));
        assert!(matches!(Formula::parse("(true"), Err(Error::Parse { .. })));
        assert!(matches!(Formula::parse("true true"), Err(Error::Parse { pos: 5, .. })));
        assert!(matches!(Formula::parse("fireable()"), Err(Error::Parse { .. })));
    }

    #[test]
    fn display_round_trip() {
        for s in [
            "AG !(fireable(a) && EX fireable(b))",
            "A[true U E[fireable(a) U !fireable(b)]] || false",
            "AF AX EG EF fireable(t_1)",
        ] {
            let f = Formula::parse(s).unwrap();
            assert_eq!(Formula::parse(&f.to_string()).unwrap(), f);
        }
    }

    #[test]
    fn desugar_examples() {
        assert_eq!(
            Formula::parse("AG true").unwrap().desugar(),
            Not(bx(Formula::eu(True, Formula::not(True))))
        );
        assert_eq!(Ef(bx(fa("x"))).desugar(), Formula::eu(True, fa("x")));
        let core = Formula::parse("EX !E[fireable(a) U EG true] || true").unwrap();
        assert!(core.is_core());
        assert_eq!(core.desugar(), core);
        let all = Formula::parse("AX AF A[fireable(a) && EF true U AG fireable(b)]").unwrap();
        assert!(all.desugar().is_core());
    }

    #[test]
    fn reduce_examples() {
        assert_eq!(Formula::not(Formula::not(fa("t0"))).reduce(), fa("t0"));
        assert_eq!(Ef(bx(Ef(bx(fa("p"))))).reduce(), Ef(bx(fa("p"))));
        assert_eq!(Formula::or(fa("p"), True).reduce(), True);
        assert_eq!(Formula::or(True, fa("p")).reduce(), True);
        assert_eq!(Formula::or(fa("p"), Formula::falsity()).reduce(), fa("p"));
        assert_eq!(Formula::or(fa("p"), fa("p")).reduce(), fa("p"));
        assert_eq!(Eg(bx(Eg(bx(fa("p"))))).reduce(), Eg(bx(fa("p"))));
        assert_eq!(Ag(bx(Ag(bx(Ag(bx(fa("p"))))))).reduce(), Ag(bx(fa("p"))));
        assert_eq!(Ex(bx(Formula::falsity())).reduce(), Formula::falsity());
        assert_eq!(Formula::parse("!!!!EX false").unwrap().reduce(), Formula::falsity());
    }

    #[test]
    fn transitions_and_depth() {
        let f = Formula::parse("E[fireable(a) U EX fireable(b)]").unwrap();
        assert_eq!(f.transitions().into_iter().collect::<alloc::vec::Vec<_>>(), ["a", "b"]);
        assert_eq!(f.depth(), 2);
        assert_eq!(True.to_string(), "true");
    }
}
