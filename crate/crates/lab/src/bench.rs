//! Text format for optical benches.
//!
//! Statements end at a newline or `;`, `#` starts a comment:
//!
//! ```text
//! bench "fig1"
//! input state=gaussian_h
//! pre: HWP id=HWP1 angle=22.5
//! split PBS
//! arm A: MIRROR id=M1 / QWP id=QWP4 angle=45
//! arm B: QWP id=QWP1 angle=45 / HWP id=HWP3 angle=0 / VL id=VL1 chirality=R flipped=false
//! combine NPBS reflect=B
//! sweep name=phase element=HWP3 from=0 to=180 step=10 record=skyrmion_sphere,stokes_field
//! ```
//!
//! Angles are degrees. A state that is not in the named catalog must be a
//! quoted or bare path ending in `.json`.

use std::collections::HashSet;
use std::fmt::{self, Write as _};

use photon_su6::optics::{
    BenchDescription, Chirality, ElementKind, InputSpec, OpticalElement, Record, Reflect, SweepSpec,
};
use photon_su6::state::NAMED_STATES;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ParseErrorKind {
    #[error("expected {expected}, found {found}")]
    Expected { expected: String, found: String },
    #[error("unterminated string")]
    UnterminatedString,
    #[error("unknown statement '{0}'")]
    UnknownStatement(String),
    #[error("unknown element kind '{0}'")]
    UnknownElement(String),
    #[error("{element} is missing '{attribute}='")]
    MissingAttribute { element: String, attribute: String },
    #[error("{element} has no attribute '{attribute}'")]
    UnknownAttribute { element: String, attribute: String },
    #[error("attribute '{attribute}' given twice")]
    RepeatedAttribute { attribute: String },
    #[error("invalid value '{value}' for '{attribute}'")]
    InvalidValue { attribute: String, value: String },
    #[error("{0} is a beam splitter and cannot sit inside an arm")]
    SplitterInArm(String),
    #[error("duplicate splitter")]
    DuplicateSplitter,
    #[error("duplicate combiner")]
    DuplicateCombiner,
    #[error("duplicate '{0}' statement")]
    DuplicateStatement(String),
    #[error("missing '{0}' statement")]
    MissingStatement(String),
    #[error("element id '{0}' used twice")]
    DuplicateId(String),
    #[error("sweep refers to unknown element '{0}'")]
    DanglingSweep(String),
    #[error("invalid sweep: {0}")]
    InvalidSweep(String),
    #[error("unknown state '{name}' (named states: {catalog}; files must end in .json)")]
    UnknownState { name: String, catalog: String },
    #[error("unknown record '{0}'")]
    UnknownRecord(String),
}

impl ParseErrorKind {
    /// Stable short code for each diagnostic.
    pub fn code(&self) -> &'static str {
        use ParseErrorKind::*;
        match self {
            Expected { .. } => "expected-token",
            UnterminatedString => "unterminated-string",
            UnknownStatement(_) => "unknown-statement",
            UnknownElement(_) => "unknown-element",
            MissingAttribute { .. } => "missing-attribute",
            UnknownAttribute { .. } => "unknown-attribute",
            RepeatedAttribute { .. } => "repeated-attribute",
            InvalidValue { .. } => "invalid-value",
            SplitterInArm(_) => "splitter-in-arm",
            DuplicateSplitter => "duplicate-splitter",
            DuplicateCombiner => "duplicate-combiner",
            DuplicateStatement(_) => "duplicate-statement",
            MissingStatement(_) => "missing-statement",
            DuplicateId(_) => "duplicate-id",
            DanglingSweep(_) => "dangling-sweep",
            InvalidSweep(_) => "invalid-sweep",
            UnknownState { .. } => "unknown-state",
            UnknownRecord(_) => "unknown-record",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub kind: ParseErrorKind,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: error[{}]: {}", self.line, self.column, self.kind.code(), self.kind)
    }
}

impl std::error::Error for ParseError {}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Word(String),
    Str(String),
    Eq,
    Comma,
    Slash,
    Colon,
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Word(w) => format!("'{w}'"),
            Tok::Str(s) => format!("\"{s}\""),
            Tok::Eq => "'='".into(),
            Tok::Comma => "','".into(),
            Tok::Slash => "'/'".into(),
            Tok::Colon => "':'".into(),
            Tok::End => "end of statement".into(),
        }
    }
}

#[derive(Debug, Clone)]
struct Spanned {
    tok: Tok,
    line: usize,
    column: usize,
}

/// Split the text into statements of tokens.
fn lex(text: &str) -> Result<Vec<Vec<Spanned>>, ParseError> {
    let mut statements = Vec::new();
    for (ln, line) in text.lines().enumerate() {
        let line_no = ln + 1;
        let chars: Vec<char> = line.chars().collect();
        let mut current = Vec::new();
        let mut k = 0;
        let flush = |current: &mut Vec<Spanned>, statements: &mut Vec<Vec<Spanned>>, column: usize| {
            if !current.is_empty() {
                current.push(Spanned { tok: Tok::End, line: line_no, column });
                statements.push(std::mem::take(current));
            }
        };
        while k < chars.len() {
            let column = k + 1;
            let ch = chars[k];
            let single = match ch {
                '=' => Some(Tok::Eq),
                ',' => Some(Tok::Comma),
                '/' => Some(Tok::Slash),
                ':' => Some(Tok::Colon),
                _ => None,
            };
            if let Some(tok) = single {
                current.push(Spanned { tok, line: line_no, column });
                k += 1;
            } else if ch == '#' {
                break;
            } else if ch == ';' {
                flush(&mut current, &mut statements, column);
                k += 1;
            } else if ch.is_whitespace() {
                k += 1;
            } else if ch == '"' {
                let start = k;
                k += 1;
                let mut s = String::new();
                loop {
                    match chars.get(k) {
                        None => {
                            return Err(ParseError {
                                line: line_no,
                                column: start + 1,
                                kind: ParseErrorKind::UnterminatedString,
                            })
                        }
                        Some('"') => break,
                        Some('\\') if matches!(chars.get(k + 1), Some('"') | Some('\\')) => {
                            s.push(chars[k + 1]);
                            k += 2;
                        }
                        Some(&c) => {
                            s.push(c);
                            k += 1;
                        }
                    }
                }
                k += 1;
                current.push(Spanned { tok: Tok::Str(s), line: line_no, column });
            } else {
                let start = k;
                while k < chars.len() && !is_delimiter(chars[k]) {
                    k += 1;
                }
                let word: String = chars[start..k].iter().collect();
                current.push(Spanned { tok: Tok::Word(word), line: line_no, column });
            }
        }
        flush(&mut current, &mut statements, chars.len() + 1);
    }
    Ok(statements)
}

fn is_delimiter(c: char) -> bool {
    c.is_whitespace() || matches!(c, '=' | ',' | '/' | ':' | ';' | '#' | '"')
}

struct Cursor<'a> {
    toks: &'a [Spanned],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn peek(&self) -> &'a Spanned {
        &self.toks[self.pos.min(self.toks.len() - 1)]
    }

    fn next(&mut self) -> &'a Spanned {
        let t = self.peek();
        if self.pos < self.toks.len() - 1 {
            self.pos += 1;
        }
        t
    }

    fn error(&self, at: &Spanned, kind: ParseErrorKind) -> ParseError {
        ParseError { line: at.line, column: at.column, kind }
    }

    fn expected(&self, at: &Spanned, what: &str) -> ParseError {
        self.error(at, ParseErrorKind::Expected { expected: what.into(), found: at.tok.describe() })
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<&'a Spanned, ParseError> {
        let t = self.next();
        if t.tok == tok {
            Ok(t)
        } else {
            Err(self.expected(t, what))
        }
    }

    fn word(&mut self, what: &str) -> Result<(&'a str, &'a Spanned), ParseError> {
        let t = self.next();
        match &t.tok {
            Tok::Word(w) => Ok((w.as_str(), t)),
            _ => Err(self.expected(t, what)),
        }
    }

    fn value(&mut self, what: &str) -> Result<(&'a str, &'a Spanned), ParseError> {
        let t = self.next();
        match &t.tok {
            Tok::Word(w) | Tok::Str(w) => Ok((w.as_str(), t)),
            _ => Err(self.expected(t, what)),
        }
    }

    fn at_end(&self) -> bool {
        self.peek().tok == Tok::End
    }

    fn end(&mut self) -> Result<(), ParseError> {
        let t = self.peek();
        if t.tok == Tok::End {
            Ok(())
        } else {
            Err(self.expected(t, "end of statement"))
        }
    }
}

/// `key=value` pairs up to the next `/` or end of statement.
struct Attr<'a> {
    key: &'a str,
    key_at: &'a Spanned,
    value: &'a str,
    value_at: &'a Spanned,
    /// Extra comma-separated values (only `record=` uses them).
    list: Vec<(&'a str, &'a Spanned)>,
}

fn attrs<'a>(c: &mut Cursor<'a>, allow_list: bool) -> Result<Vec<Attr<'a>>, ParseError> {
    let mut out: Vec<Attr<'a>> = Vec::new();
    while !matches!(c.peek().tok, Tok::End | Tok::Slash) {
        let (key, key_at) = c.word("attribute name")?;
        c.expect(Tok::Eq, &format!("'=' after '{key}'"))?;
        let (value, value_at) = c.value(&format!("value for '{key}'"))?;
        let mut list = Vec::new();
        if allow_list {
            while c.peek().tok == Tok::Comma {
                c.next();
                list.push(c.value("list item")?);
            }
        }
        if out.iter().any(|a| a.key == key) {
            return Err(c.error(key_at, ParseErrorKind::RepeatedAttribute { attribute: key.into() }));
        }
        out.push(Attr { key, key_at, value, value_at, list });
    }
    Ok(out)
}

fn number(a: &Attr<'_>) -> Result<f64, ParseError> {
    match a.value.parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(v),
        _ => Err(ParseError {
            line: a.value_at.line,
            column: a.value_at.column,
            kind: ParseErrorKind::InvalidValue { attribute: a.key.into(), value: a.value.into() },
        }),
    }
}

fn invalid(a: &Attr<'_>) -> ParseError {
    ParseError {
        line: a.value_at.line,
        column: a.value_at.column,
        kind: ParseErrorKind::InvalidValue { attribute: a.key.into(), value: a.value.into() },
    }
}

fn take<'a, 'b>(list: &'b [Attr<'a>], key: &str) -> Option<&'b Attr<'a>> {
    list.iter().find(|a| a.key == key)
}

fn check_known(list: &[Attr<'_>], element: &str, known: &[&str]) -> Result<(), ParseError> {
    match list.iter().find(|a| !known.contains(&a.key)) {
        Some(a) => Err(ParseError {
            line: a.key_at.line,
            column: a.key_at.column,
            kind: ParseErrorKind::UnknownAttribute { element: element.into(), attribute: a.key.into() },
        }),
        None => Ok(()),
    }
}

fn require<'a, 'b>(list: &'b [Attr<'a>], key: &str, element: &str, at: &Spanned) -> Result<&'b Attr<'a>, ParseError> {
    take(list, key).ok_or_else(|| ParseError {
        line: at.line,
        column: at.column,
        kind: ParseErrorKind::MissingAttribute { element: element.into(), attribute: key.into() },
    })
}

/// One element, positioned for later diagnostics.
struct Placed {
    element: OpticalElement,
    line: usize,
    column: usize,
}

fn element(c: &mut Cursor<'_>) -> Result<Placed, ParseError> {
    let (kind_word, at) = c.word("element kind")?;
    let list = attrs(c, false)?;
    let angle = |key: &str| -> Result<f64, ParseError> { number(require(&list, key, kind_word, at)?) };
    let kind = match kind_word {
        "HWP" | "QWP" | "POLARIZER" => {
            check_known(&list, kind_word, &["id", "angle"])?;
            let angle = angle("angle")?;
            match kind_word {
                "HWP" => ElementKind::Hwp { angle },
                "QWP" => ElementKind::Qwp { angle },
                _ => ElementKind::Polarizer { angle },
            }
        }
        "PHASE" => {
            check_known(&list, kind_word, &["id", "phase"])?;
            ElementKind::Phase { phase: angle("phase")? }
        }
        "MIRROR" => {
            check_known(&list, kind_word, &["id"])?;
            ElementKind::Mirror
        }
        "VL" | "VORTEX_LENS" => {
            check_known(&list, kind_word, &["id", "chirality", "flipped"])?;
            let ch = require(&list, "chirality", kind_word, at)?;
            let chirality = match ch.value {
                "L" => Chirality::L,
                "R" => Chirality::R,
                _ => return Err(invalid(ch)),
            };
            let flipped = match take(&list, "flipped") {
                None => false,
                Some(a) => match a.value {
                    "true" => true,
                    "false" => false,
                    _ => return Err(invalid(a)),
                },
            };
            ElementKind::VortexLens { chirality, flipped }
        }
        "PBS" | "NPBS" => {
            return Err(c.error(at, ParseErrorKind::SplitterInArm(kind_word.into())));
        }
        other => return Err(c.error(at, ParseErrorKind::UnknownElement(other.into()))),
    };
    let id = take(&list, "id").map(|a| a.value.to_string());
    Ok(Placed { element: OpticalElement { id, kind }, line: at.line, column: at.column })
}

fn element_list(c: &mut Cursor<'_>) -> Result<Vec<Placed>, ParseError> {
    let mut out = Vec::new();
    if c.at_end() {
        return Ok(out);
    }
    loop {
        out.push(element(c)?);
        match c.peek().tok {
            Tok::Slash => {
                c.next();
            }
            _ => break,
        }
    }
    c.end()?;
    Ok(out)
}

struct PlacedSweep {
    spec: SweepSpec,
    element_at: (usize, usize),
    at: (usize, usize),
}

fn sweep_statement(c: &mut Cursor<'_>, at: &Spanned) -> Result<PlacedSweep, ParseError> {
    let list = attrs(c, true)?;
    c.end()?;
    check_known(&list, "sweep", &["name", "element", "from", "to", "step", "record"])?;
    for a in &list {
        if a.key != "record" && !a.list.is_empty() {
            return Err(invalid(a));
        }
    }
    let element = require(&list, "element", "sweep", at)?;
    let mut record = Vec::new();
    if let Some(r) = take(&list, "record") {
        for (word, word_at) in std::iter::once((r.value, r.value_at)).chain(r.list.iter().copied()) {
            let rec = Record::from_keyword(word).ok_or(ParseError {
                line: word_at.line,
                column: word_at.column,
                kind: ParseErrorKind::UnknownRecord(word.into()),
            })?;
            record.push(rec);
        }
    }
    Ok(PlacedSweep {
        spec: SweepSpec {
            name: take(&list, "name").map(|a| a.value.to_string()),
            element: element.value.to_string(),
            from: number(require(&list, "from", "sweep", at)?)?,
            to: number(require(&list, "to", "sweep", at)?)?,
            step: number(require(&list, "step", "sweep", at)?)?,
            record,
        },
        element_at: (element.value_at.line, element.value_at.column),
        at: (at.line, at.column),
    })
}

/// Parse bench text.
pub fn parse_bench(text: &str) -> Result<BenchDescription, ParseError> {
    let statements = lex(text)?;
    let mut name = None;
    let mut input = None;
    let mut pre: Option<Vec<Placed>> = None;
    let mut arms: [Option<Vec<Placed>>; 2] = [None, None];
    let mut split = false;
    let mut reflect = None;
    let mut sweeps = Vec::new();

    for toks in &statements {
        let mut c = Cursor { toks, pos: 0 };
        let (keyword, at) = c.word("statement keyword")?;
        let duplicate = |c: &Cursor<'_>| c.error(at, ParseErrorKind::DuplicateStatement(keyword.into()));
        match keyword {
            "bench" => {
                if name.is_some() {
                    return Err(duplicate(&c));
                }
                name = Some(c.value("bench name")?.0.to_string());
                c.end()?;
            }
            "input" => {
                if input.is_some() {
                    return Err(duplicate(&c));
                }
                let list = attrs(&mut c, false)?;
                c.end()?;
                check_known(&list, "input", &["state"])?;
                let s = require(&list, "state", "input", at)?;
                input = Some(if NAMED_STATES.contains(&s.value) {
                    InputSpec::Named(s.value.into())
                } else if s.value.ends_with(".json") {
                    InputSpec::File(s.value.into())
                } else {
                    return Err(ParseError {
                        line: s.value_at.line,
                        column: s.value_at.column,
                        kind: ParseErrorKind::UnknownState { name: s.value.into(), catalog: NAMED_STATES.join(", ") },
                    });
                });
            }
            "pre" => {
                if pre.is_some() {
                    return Err(duplicate(&c));
                }
                c.expect(Tok::Colon, "':' after 'pre'")?;
                pre = Some(element_list(&mut c)?);
            }
            "arm" => {
                let (which, which_at) = c.word("arm name A or B")?;
                let slot = match which {
                    "A" => 0,
                    "B" => 1,
                    _ => return Err(c.expected(which_at, "arm name A or B")),
                };
                if arms[slot].is_some() {
                    return Err(c.error(at, ParseErrorKind::DuplicateStatement(format!("arm {which}"))));
                }
                c.expect(Tok::Colon, &format!("':' after 'arm {which}'"))?;
                arms[slot] = Some(element_list(&mut c)?);
            }
            "split" => {
                if split {
                    return Err(c.error(at, ParseErrorKind::DuplicateSplitter));
                }
                let (kind, kind_at) = c.word("PBS")?;
                if kind != "PBS" {
                    return Err(c.expected(kind_at, "PBS"));
                }
                c.end()?;
                split = true;
            }
            "combine" => {
                if reflect.is_some() {
                    return Err(c.error(at, ParseErrorKind::DuplicateCombiner));
                }
                let (kind, kind_at) = c.word("NPBS")?;
                if kind != "NPBS" {
                    return Err(c.expected(kind_at, "NPBS"));
                }
                let list = attrs(&mut c, false)?;
                c.end()?;
                check_known(&list, "NPBS", &["reflect"])?;
                let r = require(&list, "reflect", "NPBS", kind_at)?;
                reflect = Some(match r.value {
                    "A" => Reflect::A,
                    "B" => Reflect::B,
                    "none" => Reflect::None,
                    _ => return Err(invalid(r)),
                });
            }
            "sweep" => sweeps.push(sweep_statement(&mut c, at)?),
            other => return Err(c.error(at, ParseErrorKind::UnknownStatement(other.into()))),
        }
    }

    let eof = ParseError {
        line: text.lines().count().max(1),
        column: 1,
        kind: ParseErrorKind::MissingStatement(String::new()),
    };
    let missing = |what: &str| ParseError { kind: ParseErrorKind::MissingStatement(what.into()), ..eof.clone() };
    let name = name.ok_or_else(|| missing("bench"))?;
    let input = input.ok_or_else(|| missing("input"))?;
    if !split {
        return Err(missing("split"));
    }
    let reflect = reflect.ok_or_else(|| missing("combine"))?;
    let [arm_a, arm_b] = arms;
    let arm_a = arm_a.ok_or_else(|| missing("arm A"))?;
    let arm_b = arm_b.ok_or_else(|| missing("arm B"))?;
    let pre = pre.unwrap_or_default();

    let mut seen = HashSet::new();
    for p in pre.iter().chain(&arm_a).chain(&arm_b) {
        if let Some(id) = &p.element.id {
            if !seen.insert(id.clone()) {
                return Err(ParseError {
                    line: p.line,
                    column: p.column,
                    kind: ParseErrorKind::DuplicateId(id.clone()),
                });
            }
        }
    }

    let strip = |v: Vec<Placed>| v.into_iter().map(|p| p.element).collect::<Vec<_>>();
    let bench = BenchDescription {
        name,
        input,
        pre: strip(pre),
        arm_a: strip(arm_a),
        arm_b: strip(arm_b),
        reflect,
        sweeps: sweeps.iter().map(|s| s.spec.clone()).collect(),
    };
    for s in &sweeps {
        let Some(target) = bench.find(&s.spec.element) else {
            return Err(ParseError {
                line: s.element_at.0,
                column: s.element_at.1,
                kind: ParseErrorKind::DanglingSweep(s.spec.element.clone()),
            });
        };
        let problem = if target.parameter().is_none() {
            Some(format!("element '{}' has no angle to sweep", s.spec.element))
        } else {
            s.spec.frame_count().err().map(|e| match e {
                photon_su6::Error::InvalidSweep(m) => m,
                other => other.to_string(),
            })
        };
        if let Some(msg) = problem {
            return Err(ParseError { line: s.at.0, column: s.at.1, kind: ParseErrorKind::InvalidSweep(msg) });
        }
    }
    let mut names = HashSet::new();
    for s in &sweeps {
        if let Some(n) = &s.spec.name {
            if !names.insert(n.clone()) {
                return Err(ParseError {
                    line: s.at.0,
                    column: s.at.1,
                    kind: ParseErrorKind::DuplicateStatement(format!("sweep name={n}")),
                });
            }
        }
    }
    Ok(bench)
}

fn needs_quotes(s: &str) -> bool {
    s.is_empty() || s.chars().any(is_delimiter)
}

fn quoted(s: &str) -> String {
    let mut out = String::from("\"");
    for ch in s.chars() {
        if ch == '"' || ch == '\\' {
            out.push('\\');
        }
        out.push(ch);
    }
    out.push('"');
    out
}

fn bare_or_quoted(s: &str) -> String {
    if needs_quotes(s) {
        quoted(s)
    } else {
        s.to_string()
    }
}

fn write_element(out: &mut String, e: &OpticalElement) {
    out.push_str(e.kind.keyword());
    if let Some(id) = &e.id {
        let _ = write!(out, " id={}", bare_or_quoted(id));
    }
    match e.kind {
        ElementKind::Hwp { angle } | ElementKind::Qwp { angle } | ElementKind::Polarizer { angle } => {
            let _ = write!(out, " angle={angle}");
        }
        ElementKind::Phase { phase } => {
            let _ = write!(out, " phase={phase}");
        }
        ElementKind::VortexLens { chirality, flipped } => {
            let ch = match chirality {
                Chirality::L => "L",
                Chirality::R => "R",
            };
            let _ = write!(out, " chirality={ch} flipped={flipped}");
        }
        ElementKind::Mirror | ElementKind::Pbs | ElementKind::Npbs => {}
    }
}

fn write_list(out: &mut String, head: &str, list: &[OpticalElement]) {
    out.push_str(head);
    out.push(':');
    for (k, e) in list.iter().enumerate() {
        out.push_str(if k == 0 { " " } else { " / " });
        write_element(out, e);
    }
    out.push('\n');
}

/// Canonical text form; `parse_bench(&serialize_bench(b)) == b`.
pub fn serialize_bench(b: &BenchDescription) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "bench {}", quoted(&b.name));
    match &b.input {
        InputSpec::Named(n) => {
            let _ = writeln!(out, "input state={n}");
        }
        InputSpec::File(p) => {
            let _ = writeln!(out, "input state={}", quoted(p));
        }
    }
    if !b.pre.is_empty() {
        write_list(&mut out, "pre", &b.pre);
    }
    out.push_str("split PBS\n");
    write_list(&mut out, "arm A", &b.arm_a);
    write_list(&mut out, "arm B", &b.arm_b);
    let reflect = match b.reflect {
        Reflect::A => "A",
        Reflect::B => "B",
        Reflect::None => "none",
    };
    let _ = writeln!(out, "combine NPBS reflect={reflect}");
    for s in &b.sweeps {
        out.push_str("sweep");
        if let Some(n) = &s.name {
            let _ = write!(out, " name={}", bare_or_quoted(n));
        }
        let _ = write!(out, " element={} from={} to={} step={}", bare_or_quoted(&s.element), s.from, s.to, s.step);
        if !s.record.is_empty() {
            let names: Vec<&str> = s.record.iter().map(|r| r.keyword()).collect();
            let _ = write!(out, " record={}", names.join(","));
        }
        out.push('\n');
    }
    out
}
