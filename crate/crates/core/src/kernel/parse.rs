//! The line-oriented `.est` structure format.
//!
//! ```text
//! # comment
//! structure sigma_xi : SES
//! events a b c
//! cause a -> b
//! drop [a -> b] by c
//! ```
//!
//! Comments are whole lines whose first non-blank character is `#`; a `#`
//! elsewhere is the conflict operator.

use std::collections::HashSet;
use std::fmt::Write as _;

use super::{validate, Alphabet, EventSet, Family, Structure};
use crate::error::{Error, Position, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Punct(&'static str),
}

const PUNCTS: [&str; 10] = ["->", "~>", "|-", ":", "#", "[", "]", "{", "}", ","];

struct Lexer<'a> {
    line: usize,
    toks: Vec<(Tok, usize)>,
    pos: usize,
    end_col: usize,
    _src: &'a str,
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str, line: usize) -> Result<Self> {
        let mut toks = Vec::new();
        let bytes = src.as_bytes();
        let mut i = 0;
        'outer: while i < bytes.len() {
            let b = bytes[i];
            if b.is_ascii_whitespace() {
                i += 1;
                continue;
            }
            if b.is_ascii_alphanumeric() || b == b'_' {
                let start = i;
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                toks.push((Tok::Ident(src[start..i].to_string()), start + 1));
                continue;
            }
            for p in PUNCTS {
                if src[i..].starts_with(p) {
                    toks.push((Tok::Punct(p), i + 1));
                    i += p.len();
                    continue 'outer;
                }
            }
            let ch = src[i..].chars().next().unwrap_or('?');
            return Err(Error::Syntax {
                pos: Position {
                    line,
                    column: src[..i].chars().count() + 1,
                },
                message: format!("unexpected character `{ch}`"),
            });
        }
        Ok(Lexer {
            line,
            toks,
            pos: 0,
            end_col: src.chars().count() + 1,
            _src: src,
        })
    }

    fn here(&self) -> Position {
        let column = self.toks.get(self.pos).map(|t| t.1).unwrap_or(self.end_col);
        Position {
            line: self.line,
            column,
        }
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T> {
        Err(Error::Syntax {
            pos: self.here(),
            message: message.into(),
        })
    }

    fn ident(&mut self, what: &str) -> Result<(String, Position)> {
        let pos = self.here();
        match self.toks.get(self.pos) {
            Some((Tok::Ident(s), _)) => {
                let s = s.clone();
                self.pos += 1;
                Ok((s, pos))
            }
            _ => self.err(format!("expected {what}")),
        }
    }

    fn punct(&mut self, p: &'static str) -> Result<()> {
        match self.toks.get(self.pos) {
            Some((Tok::Punct(q), _)) if *q == p => {
                self.pos += 1;
                Ok(())
            }
            _ => self.err(format!("expected `{p}`")),
        }
    }

    fn keyword(&mut self, kw: &str) -> Result<()> {
        match self.toks.get(self.pos) {
            Some((Tok::Ident(s), _)) if s == kw => {
                self.pos += 1;
                Ok(())
            }
            _ => self.err(format!("expected `{kw}`")),
        }
    }

    fn peek_punct(&self, p: &str) -> bool {
        matches!(self.toks.get(self.pos), Some((Tok::Punct(q), _)) if *q == p)
    }

    fn at_end(&self) -> bool {
        self.pos >= self.toks.len()
    }

    fn finish(&self) -> Result<()> {
        if self.at_end() {
            Ok(())
        } else {
            self.err("unexpected trailing input")
        }
    }

    /// `{}` or `{a, b, ...}`.
    fn set(&mut self) -> Result<Vec<(String, Position)>> {
        self.punct("{")?;
        let mut out = Vec::new();
        if self.peek_punct("}") {
            self.pos += 1;
            return Ok(out);
        }
        loop {
            out.push(self.ident("event name")?);
            if self.peek_punct(",") {
                self.pos += 1;
                continue;
            }
            self.punct("}")?;
            return Ok(out);
        }
    }
}

type Name = (String, Position);

enum Clause {
    Conflict(Name, Name),
    Cause(Name, Name),
    Drop(Name, Name, Name),
    Add(Name, Name, Name),
    Bundle(Vec<Name>, Name),
    Disabling(Name, Name),
    Enable(Vec<Name>, Vec<Name>),
}

impl Clause {
    fn keyword(&self) -> &'static str {
        match self {
            Clause::Conflict(..) => "conflict",
            Clause::Cause(..) => "cause",
            Clause::Drop(..) => "drop",
            Clause::Add(..) => "add",
            Clause::Bundle(..) => "bundle",
            Clause::Disabling(..) => "disabling",
            Clause::Enable(..) => "enable",
        }
    }

    fn allowed_in(&self, f: Family) -> bool {
        use Family::*;
        match self {
            Clause::Conflict(..) => matches!(f, Ses | Ges | Dces | Des | Bes),
            Clause::Cause(..) => matches!(f, Ses | Ges | Dces),
            Clause::Drop(..) => matches!(f, Ses | Dces),
            Clause::Add(..) => matches!(f, Ges | Dces),
            Clause::Bundle(..) => matches!(f, Des | Bes | Ebes),
            Clause::Disabling(..) => f == Ebes,
            Clause::Enable(..) => f == Rces,
        }
    }

    fn names(&self) -> Vec<&Name> {
        match self {
            Clause::Conflict(a, b) | Clause::Cause(a, b) | Clause::Disabling(a, b) => vec![a, b],
            Clause::Drop(a, b, c) | Clause::Add(a, b, c) => vec![a, b, c],
            Clause::Bundle(m, t) => m.iter().chain(std::iter::once(t)).collect(),
            Clause::Enable(w, z) => w.iter().chain(z.iter()).collect(),
        }
    }
}

/// Parses and validates a structure; a violated invariant is reported at the
/// line of the offending clause.
pub fn parse_structure(text: &str) -> Result<Structure> {
    let (s, lines) = parse_inner(text)?;
    let report = validate(&s);
    if report.ok {
        return Ok(s);
    }
    let line = report.violations.iter().find_map(|v| {
        lines
            .iter()
            .find(|(clause, elems, _)| *clause == v.clause && *elems == v.elements)
            .map(|l| l.2)
    });
    Err(Error::Invalid {
        line,
        violations: report.violations,
    })
}

/// Parses without checking the family's invariants.
pub fn parse_structure_unchecked(text: &str) -> Result<Structure> {
    parse_inner(text).map(|(s, _)| s)
}

type ClauseLines = Vec<(&'static str, Vec<String>, usize)>;

fn parse_inner(text: &str) -> Result<(Structure, ClauseLines)> {
    let mut header: Option<(String, Family)> = None;
    let mut declared: Vec<String> = Vec::new();
    let mut seen: HashSet<String> = HashSet::new();
    let mut clauses: Vec<(Clause, usize)> = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let trimmed = raw.trim_start();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let mut lx = Lexer::new(raw, line)?;
        let (kw, kw_pos) = lx.ident("a clause keyword")?;
        if header.is_none() && kw != "structure" {
            return Err(Error::Syntax {
                pos: kw_pos,
                message: "expected `structure NAME : FAMILY` first".into(),
            });
        }
        let clause = match kw.as_str() {
            "structure" => {
                if header.is_some() {
                    return Err(Error::Syntax {
                        pos: kw_pos,
                        message: "duplicate `structure` header".into(),
                    });
                }
                let (name, _) = lx.ident("structure name")?;
                lx.punct(":")?;
                let (fam, fam_pos) = lx.ident("family")?;
                lx.finish()?;
                let family = fam.parse::<Family>().map_err(|_| Error::Syntax {
                    pos: fam_pos,
                    message: format!("unknown family `{fam}`"),
                })?;
                header = Some((name, family));
                continue;
            }
            "events" => {
                while !lx.at_end() {
                    let (name, pos) = lx.ident("event name")?;
                    if !seen.insert(name.clone()) {
                        return Err(Error::Syntax {
                            pos,
                            message: format!("event `{name}` declared twice"),
                        });
                    }
                    declared.push(name);
                }
                continue;
            }
            "conflict" => {
                let a = lx.ident("event name")?;
                lx.punct("#")?;
                let b = lx.ident("event name")?;
                Clause::Conflict(a, b)
            }
            "cause" => {
                let a = lx.ident("event name")?;
                lx.punct("->")?;
                let b = lx.ident("event name")?;
                Clause::Cause(a, b)
            }
            "drop" | "add" => {
                lx.punct("[")?;
                let c = lx.ident("event name")?;
                lx.punct("->")?;
                let t = lx.ident("event name")?;
                lx.punct("]")?;
                lx.keyword("by")?;
                let m = lx.ident("event name")?;
                if kw == "drop" {
                    Clause::Drop(c, m, t)
                } else {
                    Clause::Add(c, m, t)
                }
            }
            "bundle" => {
                let members = lx.set()?;
                lx.punct("->")?;
                let t = lx.ident("event name")?;
                Clause::Bundle(members, t)
            }
            "disabling" => {
                let a = lx.ident("event name")?;
                lx.punct("~>")?;
                let b = lx.ident("event name")?;
                Clause::Disabling(a, b)
            }
            "enable" => {
                let w = lx.set()?;
                lx.punct("|-")?;
                let z = lx.set()?;
                Clause::Enable(w, z)
            }
            other => {
                return Err(Error::Syntax {
                    pos: kw_pos,
                    message: format!("unknown clause `{other}`"),
                })
            }
        };
        lx.finish()?;
        let family = header.as_ref().map(|h| h.1).expect("header checked above");
        if !clause.allowed_in(family) {
            return Err(Error::ClauseNotAllowed {
                pos: kw_pos,
                clause: clause.keyword().to_string(),
                family,
            });
        }
        for (name, pos) in clause.names() {
            if !seen.contains(name) {
                return Err(Error::UnknownEventAt {
                    pos: pos.clone(),
                    name: name.clone(),
                });
            }
        }
        clauses.push((clause, line));
    }

    let (name, family) = header.ok_or_else(|| Error::Syntax {
        pos: Position { line: 1, column: 1 },
        message: "missing `structure NAME : FAMILY` header".into(),
    })?;
    let events = Alphabet::new(declared).map_err(|e| Error::Syntax {
        pos: Position { line: 1, column: 1 },
        message: e.to_string(),
    })?;
    let mut s = Structure::empty(family, name, events.clone());
    let mut lines = ClauseLines::new();
    let ix = |n: &Name| {
        events
            .index(&n.0)
            .expect("declared events are in the alphabet")
    };
    let set = |ns: &[Name]| ns.iter().map(ix).collect::<EventSet>();

    for (clause, line) in clauses {
        let elems: Vec<String> = match &clause {
            Clause::Bundle(m, t) => vec![events.show_set(set(m)), t.0.clone()],
            Clause::Drop(c, m, t) | Clause::Add(c, m, t) => {
                vec![c.0.clone(), t.0.clone(), m.0.clone()]
            }
            other => other.names().into_iter().map(|n| n.0.clone()).collect(),
        };
        lines.push((clause.keyword(), elems, line));
        match (&mut s, &clause) {
            (Structure::Ses(x), Clause::Conflict(a, b)) => x.conflict.insert(ix(a), ix(b)),
            (Structure::Ges(x), Clause::Conflict(a, b)) => x.conflict.insert(ix(a), ix(b)),
            (Structure::Dces(x), Clause::Conflict(a, b)) => x.conflict.insert(ix(a), ix(b)),
            (Structure::Des(x), Clause::Conflict(a, b)) => x.conflict.insert(ix(a), ix(b)),
            (Structure::Bes(x), Clause::Conflict(a, b)) => x.conflict.insert(ix(a), ix(b)),
            (Structure::Ses(x), Clause::Cause(a, b)) => x.causes.insert(ix(a), ix(b)),
            (Structure::Ges(x), Clause::Cause(a, b)) => x.causes.insert(ix(a), ix(b)),
            (Structure::Dces(x), Clause::Cause(a, b)) => x.causes.insert(ix(a), ix(b)),
            (Structure::Ses(x), Clause::Drop(c, m, t)) => x.drops.insert(ix(c), ix(m), ix(t)),
            (Structure::Dces(x), Clause::Drop(c, m, t)) => x.drops.insert(ix(c), ix(m), ix(t)),
            (Structure::Ges(x), Clause::Add(c, m, t)) => x.adds.insert(ix(c), ix(m), ix(t)),
            (Structure::Dces(x), Clause::Add(c, m, t)) => x.adds.insert(ix(c), ix(m), ix(t)),
            (Structure::Des(x), Clause::Bundle(m, t)) => x.bundles.insert(set(m), ix(t)),
            (Structure::Bes(x), Clause::Bundle(m, t)) => x.bundles.insert(set(m), ix(t)),
            (Structure::Ebes(x), Clause::Bundle(m, t)) => x.bundles.insert(set(m), ix(t)),
            (Structure::Ebes(x), Clause::Disabling(a, b)) => x.disabling.insert(ix(a), ix(b)),
            (Structure::Rces(x), Clause::Enable(w, z)) => x.enablings.insert(set(w), set(z)),
            _ => unreachable!("clause legality checked while parsing"),
        }
    }
    Ok((s, lines))
}

fn set_text(ev: &Alphabet, s: EventSet) -> String {
    format!("{{{}}}", ev.set_names(s).join(", "))
}

/// Canonical text of a structure. Clauses appear in a fixed order, each
/// sorted by event index.
pub fn serialize(s: &Structure) -> String {
    let ev = s.events();
    let n = |e| ev.name(e);
    let mut out = String::new();
    let _ = writeln!(out, "structure {} : {}", s.name(), s.family());
    let mut line = String::from("events");
    for name in ev.names() {
        line.push(' ');
        line.push_str(name);
    }
    let _ = writeln!(out, "{line}");

    let conflict = match s {
        Structure::Ses(x) => Some(&x.conflict),
        Structure::Ges(x) => Some(&x.conflict),
        Structure::Dces(x) => Some(&x.conflict),
        Structure::Des(x) => Some(&x.conflict),
        Structure::Bes(x) => Some(&x.conflict),
        _ => None,
    };
    if let Some(c) = conflict {
        for (a, b) in c.pairs() {
            let _ = writeln!(out, "conflict {} # {}", n(a), n(b));
        }
    }
    let causes = match s {
        Structure::Ses(x) => Some(&x.causes),
        Structure::Ges(x) => Some(&x.causes),
        Structure::Dces(x) => Some(&x.causes),
        _ => None,
    };
    if let Some(c) = causes {
        for (a, b) in c.pairs() {
            let _ = writeln!(out, "cause {} -> {}", n(a), n(b));
        }
    }
    let drops = match s {
        Structure::Ses(x) => Some(&x.drops),
        Structure::Dces(x) => Some(&x.drops),
        _ => None,
    };
    if let Some(d) = drops {
        for (c, m, t) in d.triples() {
            let _ = writeln!(out, "drop [{} -> {}] by {}", n(c), n(t), n(m));
        }
    }
    let adds = match s {
        Structure::Ges(x) => Some(&x.adds),
        Structure::Dces(x) => Some(&x.adds),
        _ => None,
    };
    if let Some(d) = adds {
        for (c, m, t) in d.triples() {
            let _ = writeln!(out, "add [{} -> {}] by {}", n(c), n(t), n(m));
        }
    }
    if let Structure::Ebes(x) = s {
        for (a, b) in x.disabling.pairs() {
            let _ = writeln!(out, "disabling {} ~> {}", n(a), n(b));
        }
    }
    let bundles = match s {
        Structure::Des(x) => Some(&x.bundles),
        Structure::Bes(x) => Some(&x.bundles),
        Structure::Ebes(x) => Some(&x.bundles),
        _ => None,
    };
    if let Some(b) = bundles {
        for (m, t) in b.all() {
            let _ = writeln!(out, "bundle {} -> {}", set_text(ev, m), n(t));
        }
    }
    if let Structure::Rces(x) = s {
        for &(w, z) in x.enablings.iter() {
            let _ = writeln!(out, "enable {} |- {}", set_text(ev, w), set_text(ev, z));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_file() {
        let s = parse_structure("structure X : SES\nevents a").unwrap();
        assert_eq!(s.family(), Family::Ses);
        assert_eq!(s.events().len(), 1);
        let ses = s.as_ses().unwrap();
        assert!(ses.conflict.is_empty() && ses.causes.is_empty() && ses.drops.is_empty());
    }

    #[test]
    fn round_trip_every_family() {
        let texts = [
            "structure s : SES\nevents a b c\nconflict a # c\ncause a -> b\ndrop [a -> b] by c\n",
            "structure g : GES\nevents a b c\nadd [b -> c] by a\n",
            "structure d : DCES\nevents a b c d\ndrop [c -> d] by b\nadd [c -> d] by a\n",
            "structure d : DES\nevents a b c\nbundle {a, b} -> c\n",
            "structure b : BES\nevents a b c\nconflict a # b\nbundle {a, b} -> c\n",
            "structure x : EBES\nevents e f\ndisabling e ~> f\n",
            "structure r : RCES\nevents e f\nenable {} |- {}\nenable {f} |- {e, f}\n",
        ];
        for t in texts {
            let s = parse_structure(t).unwrap();
            let again = parse_structure(&serialize(&s)).unwrap();
            assert_eq!(s, again, "{t}");
        }
    }

    #[test]
    fn hash_inside_conflict_is_not_a_comment() {
        let s = parse_structure(
            "# header\n  # indented\nstructure s : DES\nevents a b\nconflict a # b\n",
        )
        .unwrap();
        assert!(s.as_des().unwrap().conflict.contains(0, 1));
    }

    #[test]
    fn target_in_bundle_rejected_with_line() {
        let err = parse_structure("structure x : DES\nevents a\nbundle {a} -> a\n").unwrap_err();
        match err {
            Error::Invalid { line, violations } => {
                assert_eq!(line, Some(3));
                assert_eq!(violations[0].rule, "target-in-bundle");
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn errors_carry_positions() {
        let e = parse_structure("structure x : SES\nevents a\ncause a -> b\n").unwrap_err();
        assert!(
            matches!(e, Error::UnknownEventAt { ref pos, .. } if pos.line == 3 && pos.column == 12),
            "{e}"
        );
        let e = parse_structure("structure x : SES\nevents a\nbundle {a} -> a\n").unwrap_err();
        assert!(matches!(e, Error::ClauseNotAllowed { .. }), "{e}");
        let e = parse_structure("structure x : SES\nevents a\ncause a => a\n").unwrap_err();
        assert!(
            matches!(e, Error::Syntax { ref pos, .. } if pos.line == 3 && pos.column == 9),
            "{e}"
        );
        let e = parse_structure("events a\n").unwrap_err();
        assert!(matches!(e, Error::Syntax { .. }));
    }
}
