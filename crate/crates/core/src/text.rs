//! Text formats: group and element literals, sequence files, witness lines.
//!
//! ```text
//! group metacyclic n=15 s=11
//! seq y^1 * 29, y^2 * 14, x*y^7 * 1
//! ```
//!
//! Whitespace is insignificant and `#` starts a comment. Exponents are read
//! modulo `n`, so `y^-1` and `y^14` are the same element of `C_15`.

use crate::error::{Error, Result};
use crate::group::{Element, GroupSpec};
use crate::sequence::Sequence;

/// A parsed `witness` line. Nothing here has been checked against a group
/// beyond element membership; see `product::verify_witness`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WitnessLine {
    pub k: usize,
    pub target: Element,
    pub elements: Vec<Element>,
}

struct Cursor {
    chars: Vec<char>,
    pos: usize,
    line: usize,
}

impl Cursor {
    fn new(src: &str, line: usize) -> Self {
        Cursor {
            chars: src.chars().collect(),
            pos: 0,
            line,
        }
    }

    fn err(&self, msg: impl Into<String>) -> Error {
        Error::parse(self.line, self.pos + 1, msg)
    }

    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn at_end(&mut self) -> bool {
        self.peek().is_none()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.err(format!("expected '{c}'{}", self.found())))
        }
    }

    fn found(&self) -> String {
        let next = self.chars[self.pos.min(self.chars.len())..]
            .iter()
            .find(|c| !c.is_whitespace());
        match next {
            Some(c) => format!(", found '{c}'"),
            None => ", found end of line".into(),
        }
    }

    fn word(&mut self) -> String {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.chars.len() && self.chars[self.pos].is_ascii_alphabetic() {
            self.pos += 1;
        }
        self.chars[start..self.pos].iter().collect()
    }

    fn keyword(&mut self, kw: &str) -> Result<()> {
        let start = self.pos;
        let w = self.word();
        if w == kw {
            Ok(())
        } else {
            self.pos = start;
            self.skip_ws();
            Err(self.err(format!("expected '{kw}'{}", self.found())))
        }
    }

    fn int(&mut self) -> Result<i64> {
        self.skip_ws();
        let start = self.pos;
        if matches!(self.chars.get(self.pos), Some('-') | Some('+')) {
            self.pos += 1;
        }
        let digits = self.pos;
        while self.pos < self.chars.len() && self.chars[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if self.pos == digits {
            self.pos = start;
            return Err(self.err(format!("expected an integer{}", self.found())));
        }
        let text: String = self.chars[start..self.pos].iter().collect();
        match text.parse::<i64>() {
            Ok(v) => Ok(v),
            Err(_) => {
                self.pos = start;
                Err(self.err(format!("integer '{text}' out of range")))
            }
        }
    }

    fn uint(&mut self, what: &str) -> Result<u64> {
        self.skip_ws();
        let start = self.pos;
        let v = self.int()?;
        if v < 0 {
            self.pos = start;
            return Err(self.err(format!("{what} must be non-negative")));
        }
        Ok(v as u64)
    }

    /// `key = <int>`
    fn assignment(&mut self, key: &str) -> Result<i64> {
        self.keyword(key)?;
        self.expect('=')?;
        self.int()
    }

    fn finish(&mut self) -> Result<()> {
        if self.at_end() {
            Ok(())
        } else {
            Err(self.err(format!("unexpected trailing input{}", self.found())))
        }
    }
}

fn group_body(c: &mut Cursor) -> Result<GroupSpec> {
    let start = c.pos;
    let kind = c.word();
    let at = |c: &Cursor, e: Error| match e {
        Error::InvalidGroup(m) => Error::parse(c.line, start + 1, m),
        other => other,
    };
    match kind.as_str() {
        "cyclic" => {
            let n = c.assignment("n")?;
            let n = u32::try_from(n).map_err(|_| c.err("n out of range"))?;
            GroupSpec::cyclic(n).map_err(|e| at(c, e))
        }
        "metacyclic" => {
            let n = c.assignment("n")?;
            let n = u32::try_from(n).map_err(|_| c.err("n out of range"))?;
            let s = c.assignment("s")?;
            GroupSpec::metacyclic(n, s).map_err(|e| at(c, e))
        }
        _ => {
            c.pos = start;
            c.skip_ws();
            Err(c.err(format!("expected 'cyclic' or 'metacyclic'{}", c.found())))
        }
    }
}

fn exponent(c: &mut Cursor, g: &GroupSpec) -> Result<u32> {
    if c.eat('^') {
        let e = c.int()?;
        Ok(e.rem_euclid(g.n() as i64) as u32)
    } else {
        Ok(1 % g.n())
    }
}

/// Parses one element; `*` following `x` is only consumed when a `y` factor
/// follows, so `x * 3` in a sequence line reads as three copies of `x`.
fn element_body(c: &mut Cursor, g: &GroupSpec) -> Result<Element> {
    c.skip_ws();
    let start = c.pos;
    match c.peek() {
        Some('1') => {
            c.pos += 1;
            if c.chars.get(c.pos).is_some_and(|ch| ch.is_ascii_digit()) {
                c.pos = start;
                return Err(c.err("expected an element"));
            }
            Ok(Element::IDENTITY)
        }
        Some('y') => {
            c.pos += 1;
            Ok(Element::rotation(exponent(c, g)?))
        }
        Some('x') => {
            c.pos += 1;
            if g.is_cyclic_kind() {
                c.pos = start;
                return Err(c.err(format!("no reflection x in {g}")));
            }
            let save = c.pos;
            if c.eat('*') && c.peek() == Some('y') {
                c.pos += 1;
                Ok(Element::reflection(exponent(c, g)?))
            } else {
                c.pos = save;
                Ok(Element::reflection(0))
            }
        }
        _ => Err(c.err(format!("expected an element{}", c.found()))),
    }
}

pub fn parse_group(text: &str) -> Result<GroupSpec> {
    let mut c = Cursor::new(text, 1);
    let g = group_body(&mut c)?;
    c.finish()?;
    Ok(g)
}

pub fn parse_element(g: &GroupSpec, text: &str) -> Result<Element> {
    let mut c = Cursor::new(text, 1);
    let u = element_body(&mut c, g)?;
    c.finish()?;
    Ok(u)
}

/// Parses the terms of a `seq` line after the keyword: `<elem> * <mult>, ...`.
fn seq_terms(c: &mut Cursor, g: &GroupSpec) -> Result<Sequence> {
    let mut s = Sequence::empty(g);
    if c.at_end() {
        return Ok(s);
    }
    loop {
        let u = element_body(c, g)?;
        let mult = if c.eat('*') {
            let m = c.uint("multiplicity")?;
            u32::try_from(m).map_err(|_| c.err("multiplicity out of range"))?
        } else {
            1
        };
        s.push(u, mult)?;
        if c.at_end() {
            return Ok(s);
        }
        c.expect(',')?;
    }
}

/// Parses the body of a sequence line (everything after `seq`) over `g`.
pub fn parse_seq_terms(g: &GroupSpec, text: &str) -> Result<Sequence> {
    let mut c = Cursor::new(text, 1);
    let s = seq_terms(&mut c, g)?;
    c.finish()?;
    Ok(s)
}

fn strip_comment(line: &str) -> &str {
    line.split('#').next().unwrap_or("")
}

/// Parses a sequence file: one `group` line followed by one `seq` line.
pub fn parse_sequence_file(text: &str) -> Result<Sequence> {
    let mut group: Option<GroupSpec> = None;
    let mut seq: Option<Sequence> = None;
    let mut last_line = 1;
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        last_line = line_no;
        let body = strip_comment(raw);
        let mut c = Cursor::new(body, line_no);
        if c.at_end() {
            continue;
        }
        let kw_start = c.pos;
        match c.word().as_str() {
            "group" => {
                if group.is_some() {
                    return Err(Error::parse(line_no, kw_start + 1, "duplicate group line"));
                }
                let g = group_body(&mut c)?;
                c.finish()?;
                group = Some(g);
            }
            "seq" => {
                let Some(g) = group else {
                    return Err(Error::parse(line_no, kw_start + 1, "seq line before group line"));
                };
                if seq.is_some() {
                    return Err(Error::parse(line_no, kw_start + 1, "duplicate seq line"));
                }
                let s = seq_terms(&mut c, &g)?;
                c.finish()?;
                seq = Some(s);
            }
            _ => {
                return Err(Error::parse(
                    line_no,
                    kw_start + 1,
                    "expected 'group' or 'seq'",
                ))
            }
        }
    }
    match (group, seq) {
        (Some(_), Some(s)) => Ok(s),
        (None, _) => Err(Error::parse(last_line, 1, "missing group line")),
        (Some(_), None) => Err(Error::parse(last_line, 1, "missing seq line")),
    }
}

/// Parses `witness k=<int> target=<element> : <element> ...`.
pub fn parse_witness_line(g: &GroupSpec, text: &str) -> Result<WitnessLine> {
    let body = strip_comment(text);
    let mut c = Cursor::new(body, 1);
    c.keyword("witness")?;
    let k = c.assignment("k")?;
    if k < 0 {
        return Err(c.err("k must be non-negative"));
    }
    c.keyword("target")?;
    c.expect('=')?;
    let target = element_body(&mut c, g)?;
    c.expect(':')?;
    let mut elements = Vec::new();
    while !c.at_end() {
        elements.push(element_body(&mut c, g)?);
    }
    Ok(WitnessLine {
        k: k as usize,
        target,
        elements,
    })
}

pub fn format_witness_line(target: Element, elements: &[Element]) -> String {
    let mut out = format!("witness k={} target={target} :", elements.len());
    for u in elements {
        out.push(' ');
        out.push_str(&u.to_string());
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn g15() -> GroupSpec {
        GroupSpec::metacyclic(15, 11).unwrap()
    }

    #[test]
    fn group_literals() {
        assert_eq!(parse_group("metacyclic n=15 s=11").unwrap(), g15());
        assert_eq!(parse_group("  metacyclic  n = 15   s=-4 ").unwrap(), g15());
        assert_eq!(parse_group("cyclic n=5").unwrap(), GroupSpec::cyclic(5).unwrap());
        assert!(matches!(
            parse_group("metacyclic n=15 s=2"),
            Err(Error::Parse { line: 1, column: 1, .. })
        ));
        assert!(matches!(parse_group("abelian n=5"), Err(Error::Parse { column: 1, .. })));
        assert!(matches!(parse_group("cyclic n=5 s=1"), Err(Error::Parse { column: 12, .. })));
    }

    #[test]
    fn element_literals() {
        let g = g15();
        assert_eq!(parse_element(&g, "1").unwrap(), Element::IDENTITY);
        assert_eq!(parse_element(&g, "x").unwrap(), Element::reflection(0));
        assert_eq!(parse_element(&g, "y").unwrap(), Element::rotation(1));
        assert_eq!(parse_element(&g, "y^16").unwrap(), Element::rotation(1));
        assert_eq!(parse_element(&g, "y^-1").unwrap(), Element::rotation(14));
        assert_eq!(parse_element(&g, "x*y^7").unwrap(), Element::reflection(7));
        assert_eq!(parse_element(&g, "x * y ^ 7").unwrap(), Element::reflection(7));
        assert!(parse_element(&GroupSpec::cyclic(5).unwrap(), "x").is_err());
        assert!(parse_element(&g, "z").is_err());
        assert!(parse_element(&g, "12").is_err());
    }

    #[test]
    fn sequence_file() {
        let text = "# extremal\ngroup metacyclic n=15 s=11\n\nseq y^1 * 29, y^2*14, x*y^7 * 1 # tail\n";
        let s = parse_sequence_file(text).unwrap();
        assert_eq!(s.len(), 44);
        assert_eq!(s.multiplicity(Element::reflection(7)), 1);
        assert_eq!(parse_sequence_file(&s.to_file_string()).unwrap(), s);

        let bare = parse_sequence_file("group metacyclic n=3 s=2\nseq x * 2, x*y, y").unwrap();
        assert_eq!(bare.multiplicity(Element::reflection(0)), 2);
        assert_eq!(bare.len(), 4);

        let empty = parse_sequence_file("group cyclic n=4\nseq\n").unwrap();
        assert!(empty.is_empty());
    }

    #[test]
    fn sequence_file_errors() {
        let e = parse_sequence_file("seq y * 2\n").unwrap_err();
        assert_eq!(e, Error::parse(1, 1, "seq line before group line"));
        let e = parse_sequence_file("group cyclic n=4\nseq y * 2,, y\n").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 2, column: 11, .. }), "{e:?}");
        let e = parse_sequence_file("group cyclic n=4\nseq y * -2\n").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 2, .. }), "{e:?}");
        let e = parse_sequence_file("group cyclic n=4\n").unwrap_err();
        assert!(matches!(e, Error::Parse { .. }));
        let e = parse_sequence_file("group cyclic n=4\ngroup cyclic n=4\nseq\n").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 2, column: 1, .. }));
    }

    #[test]
    fn witness_lines() {
        let g = GroupSpec::metacyclic(3, 2).unwrap();
        let w = parse_witness_line(&g, "witness k=3 target=y^2 : x y x").unwrap();
        assert_eq!(w.k, 3);
        assert_eq!(w.target, Element::rotation(2));
        assert_eq!(w.elements, vec![Element::reflection(0), Element::rotation(1), Element::reflection(0)]);
        let text = format_witness_line(w.target, &w.elements);
        assert_eq!(text, "witness k=3 target=y^2 : x y^1 x");
        assert_eq!(parse_witness_line(&g, &text).unwrap(), w);
        let w = parse_witness_line(&g, "witness k=2 target=1 : x*y^1 x*y^1").unwrap();
        assert_eq!(w.elements.len(), 2);
        assert!(parse_witness_line(&g, "witness k=2 target=1 x x").is_err());
    }

    proptest! {
        #[test]
        fn element_roundtrip(eps in 0u8..2, a in 0u32..15) {
            let g = g15();
            let u = Element { eps, a };
            prop_assert_eq!(parse_element(&g, &u.to_string()).unwrap(), u);
        }

        #[test]
        fn garbage_never_panics(text in "[ a-z0-9=*^,#:\\-\n]{0,40}") {
            let _ = parse_sequence_file(&text);
            let _ = parse_witness_line(&g15(), &text);
        }
    }
}
