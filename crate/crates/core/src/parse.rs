//! Text formats for problems and instances.
//!
//! ```text
//! problem 2-coloring
//! inputs: u
//! outputs: W B
//! allow: (u,u | W,B)
//! allow: (u,u | B,W)
//! ```
//!
//! A `radius: r` clause switches to general form with `window:` lines.

use std::fmt::Write as _;

use crate::gen::{BlockFamily, GenError};
use crate::model::{
    Alphabet, GeneralLcl, LabeledInstance, Lcl, ModelError, NormalLcl, Topology, Window,
};

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok<'a> {
    Open,
    Close,
    Comma,
    Bar,
    Label(&'a str),
}

fn is_label_char(c: char) -> bool {
    !c.is_whitespace() && !"(),|#:".contains(c)
}

/// Tokenizes `s`, reporting 1-based columns relative to `col0`.
fn tokenize(s: &str, line: usize, col0: usize) -> Result<Vec<(Tok<'_>, usize)>, ModelError> {
    let mut out = Vec::new();
    let mut it = s.char_indices().peekable();
    while let Some(&(i, c)) = it.peek() {
        let col = col0 + s[..i].chars().count();
        match c {
            c if c.is_whitespace() => {
                it.next();
            }
            '(' | ')' | ',' | '|' => {
                it.next();
                out.push((
                    match c {
                        '(' => Tok::Open,
                        ')' => Tok::Close,
                        ',' => Tok::Comma,
                        _ => Tok::Bar,
                    },
                    col,
                ));
            }
            c if is_label_char(c) => {
                let start = i;
                let mut end = i;
                while let Some(&(j, d)) = it.peek() {
                    if is_label_char(d) {
                        end = j + d.len_utf8();
                        it.next();
                    } else {
                        break;
                    }
                }
                out.push((Tok::Label(&s[start..end]), col));
            }
            other => {
                return Err(ModelError::Syntax {
                    line,
                    column: col,
                    message: format!("unexpected character `{other}`"),
                })
            }
        }
    }
    Ok(out)
}

struct Line<'a> {
    no: usize,
    key: &'a str,
    rest: &'a str,
    rest_col: usize,
}

fn strip_comment(raw: &str) -> &str {
    match raw.find('#') {
        Some(i) => &raw[..i],
        None => raw,
    }
}

/// Splits into non-empty lines of the form `key rest` or `key: rest`.
fn lines(text: &str) -> Vec<Line<'_>> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let body = strip_comment(raw);
        let trimmed = body.trim_start();
        if trimmed.trim().is_empty() {
            continue;
        }
        let lead = body.len() - trimmed.len();
        let key_end = trimmed
            .find(|c: char| c == ':' || c.is_whitespace())
            .unwrap_or(trimmed.len());
        let key = &trimmed[..key_end];
        let mut rest_start = key_end;
        if trimmed[rest_start..].starts_with(':') {
            rest_start += 1;
        }
        let rest = &trimmed[rest_start..];
        out.push(Line {
            no: i + 1,
            key,
            rest,
            rest_col: body[..lead + rest_start].chars().count() + 1,
        });
    }
    out
}

fn syntax(line: usize, column: usize, message: impl Into<String>) -> ModelError {
    ModelError::Syntax {
        line,
        column,
        message: message.into(),
    }
}

fn parse_alphabet(l: &Line<'_>) -> Result<Alphabet, ModelError> {
    let toks = tokenize(l.rest, l.no, l.rest_col)?;
    let mut labels = Vec::new();
    for (t, col) in toks {
        match t {
            Tok::Label(s) => {
                if labels.contains(&s) {
                    return Err(ModelError::DuplicateLabel(s.to_string()));
                }
                labels.push(s);
            }
            _ => return Err(syntax(l.no, col, "expected a label")),
        }
    }
    if labels.is_empty() {
        return Err(syntax(l.no, l.rest_col, "alphabet must be non-empty"));
    }
    Alphabet::new(labels)
}

fn lookup(alpha: &Alphabet, s: &str, line: usize, column: usize) -> Result<usize, ModelError> {
    alpha.index(s).ok_or_else(|| ModelError::UnknownLabel {
        line,
        column,
        label: s.to_string(),
    })
}

struct Cursor<'a, 'b> {
    toks: &'b [(Tok<'a>, usize)],
    pos: usize,
    line: usize,
    end_col: usize,
}

impl<'a, 'b> Cursor<'a, 'b> {
    fn col(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end_col, |t| t.1)
    }

    fn expect(&mut self, want: Tok<'static>, what: &str) -> Result<(), ModelError> {
        match self.toks.get(self.pos) {
            Some((t, _)) if *t == want => {
                self.pos += 1;
                Ok(())
            }
            _ => Err(syntax(self.line, self.col(), format!("expected `{what}`"))),
        }
    }

    fn label(&mut self) -> Result<(&'a str, usize), ModelError> {
        match self.toks.get(self.pos) {
            Some((Tok::Label(s), c)) => {
                self.pos += 1;
                Ok((s, *c))
            }
            _ => Err(syntax(self.line, self.col(), "expected a label")),
        }
    }

    fn done(&self) -> bool {
        self.pos >= self.toks.len()
    }
}

pub fn parse_problem(text: &str) -> Result<Lcl, ModelError> {
    let ls = lines(text);
    let Some(head) = ls.first() else {
        return Err(syntax(1, 1, "expected `problem <name>`"));
    };
    if head.key != "problem" {
        return Err(syntax(head.no, 1, "expected `problem <name>`"));
    }
    let name = head.rest.trim();
    if name.is_empty() {
        return Err(syntax(head.no, head.rest_col, "missing problem name"));
    }

    let mut inputs: Option<Alphabet> = None;
    let mut outputs: Option<Alphabet> = None;
    let mut radius: Option<usize> = None;
    let mut allows: Vec<&Line<'_>> = Vec::new();
    let mut windows: Vec<&Line<'_>> = Vec::new();

    for l in &ls[1..] {
        match l.key {
            "inputs" | "outputs" => {
                let slot = if l.key == "inputs" { &mut inputs } else { &mut outputs };
                if slot.is_some() {
                    return Err(syntax(l.no, 1, format!("duplicate `{}` clause", l.key)));
                }
                *slot = Some(parse_alphabet(l)?);
            }
            "radius" => {
                if radius.is_some() {
                    return Err(syntax(l.no, 1, "duplicate `radius` clause"));
                }
                let v = l.rest.trim();
                radius = Some(
                    v.parse()
                        .map_err(|_| syntax(l.no, l.rest_col, "radius must be a non-negative integer"))?,
                );
            }
            "allow" => allows.push(l),
            "window" => windows.push(l),
            other => return Err(syntax(l.no, 1, format!("unknown clause `{other}`"))),
        }
    }
    let inputs = inputs.ok_or_else(|| syntax(head.no, 1, "missing `inputs:` clause"))?;
    let outputs = outputs.ok_or_else(|| syntax(head.no, 1, "missing `outputs:` clause"))?;

    match radius {
        None => {
            if let Some(l) = windows.first() {
                return Err(syntax(l.no, 1, "`window:` requires a `radius:` clause"));
            }
            let mut p = NormalLcl::new(name, inputs, outputs);
            for l in allows {
                let (a, b, x, y) = parse_quad(l, &p.sigma_in, &p.sigma_out)?;
                p.allow(a, b, x, y);
            }
            Ok(Lcl::Normal(p))
        }
        Some(r) => {
            if let Some(l) = allows.first() {
                return Err(syntax(l.no, 1, "`allow:` lines are for normal form (drop `radius:`)"));
            }
            let mut p = GeneralLcl::new(name, inputs, outputs, r, Vec::new())?;
            for l in windows {
                let w = parse_window(l, &p.sigma_in, &p.sigma_out)?;
                if w.len() != 2 * r + 1 {
                    return Err(syntax(
                        l.no,
                        l.rest_col,
                        format!("window has {} positions, expected {}", w.len(), 2 * r + 1),
                    ));
                }
                p.add_window(w)?;
            }
            Ok(Lcl::General(p))
        }
    }
}

fn parse_quad(
    l: &Line<'_>,
    sin: &Alphabet,
    sout: &Alphabet,
) -> Result<(usize, usize, usize, usize), ModelError> {
    let toks = tokenize(l.rest, l.no, l.rest_col)?;
    let mut c = Cursor {
        toks: &toks,
        pos: 0,
        line: l.no,
        end_col: l.rest_col + l.rest.chars().count(),
    };
    c.expect(Tok::Open, "(")?;
    let (a, ca) = c.label()?;
    c.expect(Tok::Comma, ",")?;
    let (b, cb) = c.label()?;
    c.expect(Tok::Bar, "|")?;
    let (x, cx) = c.label()?;
    c.expect(Tok::Comma, ",")?;
    let (y, cy) = c.label()?;
    c.expect(Tok::Close, ")")?;
    if !c.done() {
        return Err(syntax(l.no, c.col(), "trailing input"));
    }
    Ok((
        lookup(sin, a, l.no, ca)?,
        lookup(sin, b, l.no, cb)?,
        lookup(sout, x, l.no, cx)?,
        lookup(sout, y, l.no, cy)?,
    ))
}

fn parse_window(l: &Line<'_>, sin: &Alphabet, sout: &Alphabet) -> Result<Window, ModelError> {
    let toks = tokenize(l.rest, l.no, l.rest_col)?;
    let mut c = Cursor {
        toks: &toks,
        pos: 0,
        line: l.no,
        end_col: l.rest_col + l.rest.chars().count(),
    };
    let mut w = Vec::new();
    while !c.done() {
        c.expect(Tok::Open, "(")?;
        let (i, ci) = c.label()?;
        c.expect(Tok::Comma, ",")?;
        let (o, co) = c.label()?;
        c.expect(Tok::Close, ")")?;
        w.push((lookup(sin, i, l.no, ci)?, lookup(sout, o, l.no, co)?));
    }
    if w.is_empty() {
        return Err(syntax(l.no, l.rest_col, "empty window"));
    }
    Ok(w)
}

pub fn serialize_problem(p: &Lcl) -> String {
    match p {
        Lcl::Normal(p) => serialize_normal(p),
        Lcl::General(p) => serialize_general(p),
    }
}

fn header(s: &mut String, name: &str, sin: &Alphabet, sout: &Alphabet) {
    let _ = writeln!(s, "problem {name}");
    let _ = writeln!(s, "inputs: {}", sin.labels().join(" "));
    let _ = writeln!(s, "outputs: {}", sout.labels().join(" "));
}

pub fn serialize_normal(p: &NormalLcl) -> String {
    let mut s = String::new();
    header(&mut s, &p.name, &p.sigma_in, &p.sigma_out);
    for (a, b, x, y) in p.quadruples() {
        let _ = writeln!(
            s,
            "allow: ({},{} | {},{})",
            p.sigma_in.label(a),
            p.sigma_in.label(b),
            p.sigma_out.label(x),
            p.sigma_out.label(y)
        );
    }
    s
}

pub fn serialize_general(p: &GeneralLcl) -> String {
    let mut s = String::new();
    header(&mut s, &p.name, &p.sigma_in, &p.sigma_out);
    let _ = writeln!(s, "radius: {}", p.radius);
    for w in p.windows() {
        let parts: Vec<String> = w
            .iter()
            .map(|&(i, o)| format!("({},{})", p.sigma_in.label(i), p.sigma_out.label(o)))
            .collect();
        let _ = writeln!(s, "window: {}", parts.join(" "));
    }
    s
}

pub fn parse_instance(text: &str, sigma_in: &Alphabet) -> Result<LabeledInstance, ModelError> {
    let ls = lines(text);
    let Some(head) = ls.first() else {
        return Err(syntax(1, 1, "expected `instance <cycle|path> <n>`"));
    };
    if head.key != "instance" {
        return Err(syntax(head.no, 1, "expected `instance <cycle|path> <n>`"));
    }
    let mut parts = head.rest.split_whitespace();
    let topology = match parts.next() {
        Some("cycle") => Topology::Cycle,
        Some("path") => Topology::Path,
        _ => return Err(syntax(head.no, head.rest_col, "expected `cycle` or `path`")),
    };
    let n: usize = parts
        .next()
        .and_then(|t| t.parse().ok())
        .ok_or_else(|| syntax(head.no, head.rest_col, "expected node count"))?;
    if parts.next().is_some() {
        return Err(syntax(head.no, head.rest_col, "trailing input"));
    }

    let mut inputs: Option<Vec<usize>> = None;
    let mut ids: Option<Vec<u64>> = None;
    let mut seed: Option<u64> = None;
    for l in &ls[1..] {
        match l.key {
            "inputs" => {
                let toks = tokenize(l.rest, l.no, l.rest_col)?;
                let mut v = Vec::with_capacity(n);
                for (t, col) in toks {
                    match t {
                        Tok::Label(s) => {
                            // compact form: a run of one-character labels
                            if let Some(i) = sigma_in.index(s) {
                                v.push(i);
                            } else if let Some(w) = sigma_in.parse_word(s) {
                                v.extend(w);
                            } else {
                                return Err(lookup(sigma_in, s, l.no, col).unwrap_err());
                            }
                        }
                        _ => return Err(syntax(l.no, col, "expected a label")),
                    }
                }
                inputs = Some(v);
            }
            "ids" => {
                let mut v = Vec::new();
                for t in l.rest.split_whitespace() {
                    v.push(t.parse().map_err(|_| syntax(l.no, l.rest_col, "ids must be integers"))?);
                }
                ids = Some(v);
            }
            "seed" => {
                seed = Some(
                    l.rest
                        .trim()
                        .parse()
                        .map_err(|_| syntax(l.no, l.rest_col, "seed must be a u64"))?,
                );
            }
            other => return Err(syntax(l.no, 1, format!("unknown clause `{other}`"))),
        }
    }
    let inputs = inputs.ok_or_else(|| syntax(head.no, 1, "missing `inputs:` clause"))?;
    if inputs.len() != n {
        return Err(ModelError::LengthMismatch {
            expected: n,
            got: inputs.len(),
        });
    }
    let inst = LabeledInstance {
        topology,
        inputs,
        ids,
        seed,
    };
    inst.check(sigma_in.len())?;
    Ok(inst)
}

pub fn serialize_instance(inst: &LabeledInstance, sigma_in: &Alphabet) -> String {
    let mut s = String::new();
    let topo = match inst.topology {
        Topology::Cycle => "cycle",
        Topology::Path => "path",
    };
    let _ = writeln!(s, "instance {topo} {}", inst.n());
    let labels: Vec<&str> = inst.inputs.iter().map(|&i| sigma_in.label(i)).collect();
    let _ = writeln!(s, "inputs: {}", labels.join(" "));
    if let Some(ids) = &inst.ids {
        let v: Vec<String> = ids.iter().map(u64::to_string).collect();
        let _ = writeln!(s, "ids: {}", v.join(" "));
    }
    if let Some(seed) = inst.seed {
        let _ = writeln!(s, "seed: {seed}");
    }
    s
}

/// Block family files:
///
/// ```text
/// family chain3
/// inputs: i s
/// anchor: i
/// block: ii
/// block: isi
/// ```
pub fn parse_family(text: &str) -> Result<BlockFamily, GenError> {
    let ls = lines(text);
    let Some(head) = ls.first() else {
        return Err(syntax(1, 1, "expected `family <name>`").into());
    };
    if head.key != "family" || head.rest.trim().is_empty() {
        return Err(syntax(head.no, 1, "expected `family <name>`").into());
    }
    let mut sigma: Option<Alphabet> = None;
    let mut anchor: Option<usize> = None;
    let mut blocks = Vec::new();
    for l in &ls[1..] {
        match l.key {
            "inputs" => sigma = Some(parse_alphabet(l)?),
            "anchor" | "block" => {
                let Some(alpha) = &sigma else {
                    return Err(syntax(l.no, 1, "`inputs:` must come first").into());
                };
                let word = l.rest.trim();
                let w = alpha.parse_word(word).ok_or_else(|| ModelError::UnknownLabel {
                    line: l.no,
                    column: l.rest_col + (l.rest.len() - l.rest.trim_start().len()),
                    label: word.to_string(),
                })?;
                if l.key == "anchor" {
                    if w.len() != 1 {
                        return Err(syntax(l.no, l.rest_col, "anchor is a single letter").into());
                    }
                    anchor = Some(w[0]);
                } else {
                    blocks.push(w);
                }
            }
            other => return Err(syntax(l.no, 1, format!("unknown clause `{other}`")).into()),
        }
    }
    let sigma = sigma.ok_or_else(|| syntax(head.no, 1, "missing `inputs:` clause"))?;
    let anchor = anchor.ok_or_else(|| syntax(head.no, 1, "missing `anchor:` clause"))?;
    BlockFamily::new(head.rest.trim(), sigma, anchor, blocks)
}

pub fn serialize_family(f: &BlockFamily) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "family {}", f.name);
    let _ = writeln!(s, "inputs: {}", f.sigma_in.labels().join(" "));
    let _ = writeln!(s, "anchor: {}", f.sigma_in.label(f.anchor));
    for b in &f.blocks {
        let _ = writeln!(s, "block: {}", f.sigma_in.render(b));
    }
    s
}
