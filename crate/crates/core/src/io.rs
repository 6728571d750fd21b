//! Line-oriented text formats: cobordisms (`.occ`), sew plans, Frobenius
//! models, embeddings and generator assignments. `#` starts a comment.
//! Errors carry 1-based line and column.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;
use thiserror::Error;

use crate::frobenius::linalg::{basis_vec, Matrix, Vector};
use crate::frobenius::{BasisElement, EmbeddingData, FrobeniusModel};
use crate::sewing::{ArcRef, SewPlan};
use crate::surface::{Arc, BoundaryCircle, BraneLabel, BraneTable, Cobordism, Component};
use crate::tqft::{Generator, TableAssignment};
use crate::Q;

#[derive(Debug, Clone, PartialEq, Eq, Error, Serialize)]
#[error("{line}:{column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

#[derive(Debug, Clone, Copy)]
struct Token<'a> {
    text: &'a str,
    line: usize,
    column: usize,
}

impl Token<'_> {
    fn error(&self, message: impl Into<String>) -> ParseError {
        ParseError {
            line: self.line,
            column: self.column,
            message: message.into(),
        }
    }

    fn int<T: std::str::FromStr>(&self, what: &str) -> Result<T, ParseError> {
        self.text
            .parse()
            .map_err(|_| self.error(format!("expected {what}, found `{}`", self.text)))
    }

    fn rational(&self) -> Result<Q, ParseError> {
        parse_rational(self.text).ok_or_else(|| self.error(format!("expected a rational number, found `{}`", self.text)))
    }
}

fn parse_rational(s: &str) -> Option<Q> {
    match s.split_once('/') {
        Some((n, d)) => {
            let n: i64 = n.parse().ok()?;
            let d: i64 = d.parse().ok()?;
            (d != 0).then(|| Q::new(n, d))
        }
        None => Some(Q::from_integer(s.parse().ok()?)),
    }
}

/// A logical line: its tokens, split at whitespace and at `,` `=` `+`
/// `->` (which become tokens themselves).
struct Line<'a> {
    number: usize,
    end_column: usize,
    tokens: Vec<Token<'a>>,
}

impl<'a> Line<'a> {
    fn at(&self, k: usize, expected: &str) -> Result<Token<'a>, ParseError> {
        self.tokens.get(k).copied().ok_or_else(|| ParseError {
            line: self.number,
            column: self.end_column,
            message: format!("expected {expected}"),
        })
    }

    fn expect(&self, k: usize, word: &str) -> Result<Token<'a>, ParseError> {
        let t = self.at(k, &format!("`{word}`"))?;
        if t.text != word {
            return Err(t.error(format!("expected `{word}`, found `{}`", t.text)));
        }
        Ok(t)
    }

    fn finish(&self, k: usize) -> Result<(), ParseError> {
        match self.tokens.get(k) {
            Some(t) => Err(t.error(format!("unexpected `{}`", t.text))),
            None => Ok(()),
        }
    }
}

fn push_token<'a>(tokens: &mut Vec<Token<'a>>, content: &'a str, line: usize, s: usize, e: usize) {
    tokens.push(Token {
        text: &content[s..e],
        line,
        column: content[..s].chars().count() + 1,
    })
}

fn lines<'a>(text: &'a str) -> Vec<Line<'a>> {
    let mut out = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let content = raw.split('#').next().unwrap_or("");
        let mut tokens: Vec<Token<'a>> = Vec::new();
        let mut start: Option<usize> = None;
        let bytes = content.as_bytes();
        let mut i = 0;
        let push = |tokens: &mut Vec<Token<'a>>, s: usize, e: usize| push_token(tokens, content, n + 1, s, e);
        while i < bytes.len() {
            let c = bytes[i];
            let single = matches!(c, b',' | b'=' | b'+');
            let arrow = c == b'-' && bytes.get(i + 1) == Some(&b'>');
            if c.is_ascii_whitespace() || single || arrow {
                if let Some(s) = start.take() {
                    push(&mut tokens, s, i);
                }
                if single {
                    push(&mut tokens, i, i + 1);
                } else if arrow {
                    push(&mut tokens, i, i + 2);
                    i += 1;
                }
            } else if start.is_none() {
                start = Some(i);
            }
            i += 1;
        }
        if let Some(s) = start {
            push(&mut tokens, s, bytes.len());
        }
        if !tokens.is_empty() {
            out.push(Line {
                number: n + 1,
                end_column: content.chars().count() + 1,
                tokens,
            });
        }
    }
    out
}

fn eof(text: &str, message: &str) -> ParseError {
    ParseError {
        line: text.lines().count().max(1),
        column: 1,
        message: message.into(),
    }
}

// ---------------------------------------------------------------- cobordisms

/// Parse a `.occ` cobordism. Semantic checks are left to
/// [`crate::surface::validate`].
pub fn parse_occ(text: &str) -> Result<Cobordism, ParseError> {
    let mut branes = BraneTable::new();
    let mut components: Vec<Component> = Vec::new();
    for line in lines(text) {
        let head = line.tokens[0];
        match head.text {
            "brane" => {
                let name = line.at(1, "brane name")?;
                line.expect(2, "dim")?;
                let dim = line.at(3, "dimension")?.int("a dimension")?;
                line.expect(4, "chi")?;
                let chi = line.at(5, "Euler characteristic")?.int("an Euler characteristic")?;
                line.finish(6)?;
                if branes.contains(name.text) {
                    return Err(name.error(format!("brane {} declared twice", name.text)));
                }
                branes.push(BraneLabel::new(name.text, dim, chi));
            }
            "component" => {
                line.expect(1, "genus")?;
                let genus = line.at(2, "genus")?.int("a genus")?;
                line.finish(3)?;
                components.push(Component::new(genus, []));
            }
            "circle" => {
                let Some(comp) = components.last_mut() else {
                    return Err(head.error("circle before any `component` line"));
                };
                comp.circles.push(parse_circle(&line)?);
            }
            other => return Err(head.error(format!("unknown directive `{other}`"))),
        }
    }
    if components.is_empty() {
        return Err(eof(text, "no component declared"));
    }
    Ok(Cobordism::new(branes, components))
}

fn parse_circle(line: &Line<'_>) -> Result<BoundaryCircle, ParseError> {
    let kind = line.at(1, "`closed`, `window` or `arcs`")?;
    match kind.text {
        "closed" => {
            let dir = line.at(2, "`in` or `out`")?;
            line.finish(3)?;
            match dir.text {
                "in" => Ok(BoundaryCircle::ClosedIn),
                "out" => Ok(BoundaryCircle::ClosedOut),
                other => Err(dir.error(format!("expected `in` or `out`, found `{other}`"))),
            }
        }
        "window" => {
            let label = line.tokens.get(2).map(|t| t.text.to_string());
            line.finish(3)?;
            Ok(BoundaryCircle::Window(label))
        }
        "arcs" => {
            let mut arcs = Vec::new();
            let mut k = 2;
            loop {
                let word = line.at(k, "`free` or `open`")?;
                let arg = line.at(k + 1, "an arc argument")?;
                arcs.push(match (word.text, arg.text) {
                    ("free", label) => Arc::free(label),
                    ("open", "in") => Arc::OpenIn,
                    ("open", "out") => Arc::OpenOut,
                    ("open", other) => return Err(arg.error(format!("expected `in` or `out`, found `{other}`"))),
                    (other, _) => return Err(word.error(format!("expected `free` or `open`, found `{other}`"))),
                });
                k += 2;
                match line.tokens.get(k) {
                    None => break,
                    Some(t) if t.text == "," => k += 1,
                    Some(t) => return Err(t.error(format!("expected `,`, found `{}`", t.text))),
                }
            }
            Ok(BoundaryCircle::Mixed(arcs))
        }
        other => Err(kind.error(format!("expected `closed`, `window` or `arcs`, found `{other}`"))),
    }
}

/// Print in `.occ` syntax; [`parse_occ`] inverts this exactly.
pub fn print_occ(c: &Cobordism) -> String {
    let mut out = String::new();
    for b in c.branes.iter() {
        let _ = writeln!(out, "brane {} dim {} chi {}", b.name, b.dim, b.chi);
    }
    for comp in &c.components {
        let _ = writeln!(out, "component genus {}", comp.genus);
        for circle in &comp.circles {
            match circle {
                BoundaryCircle::ClosedIn => out.push_str("circle closed in\n"),
                BoundaryCircle::ClosedOut => out.push_str("circle closed out\n"),
                BoundaryCircle::Window(None) => out.push_str("circle window\n"),
                BoundaryCircle::Window(Some(l)) => {
                    let _ = writeln!(out, "circle window {l}");
                }
                BoundaryCircle::Mixed(arcs) => {
                    let words: Vec<String> = arcs
                        .iter()
                        .map(|a| match a {
                            Arc::Free(l) => format!("free {l}"),
                            Arc::OpenIn => "open in".into(),
                            Arc::OpenOut => "open out".into(),
                        })
                        .collect();
                    let _ = writeln!(out, "circle arcs {}", words.join(", "));
                }
            }
        }
    }
    out
}

// --------------------------------------------------------------- sew plans

fn arc_ref(t: Token<'_>) -> Result<ArcRef, ParseError> {
    let (c, a) = t
        .text
        .split_once('.')
        .ok_or_else(|| t.error(format!("expected <circle>.<arc>, found `{}`", t.text)))?;
    let bad = || t.error(format!("expected <circle>.<arc>, found `{}`", t.text));
    Ok(ArcRef {
        circle: c.parse().map_err(|_| bad())?,
        arc: a.parse().map_err(|_| bad())?,
    })
}

pub fn parse_plan(text: &str) -> Result<SewPlan, ParseError> {
    let mut plan = SewPlan::default();
    for line in lines(text) {
        let head = line.tokens[0];
        match head.text {
            "closed" => {
                let a = line.at(1, "a circle index")?.int("a circle index")?;
                line.expect(2, "->")?;
                let b = line.at(3, "a circle index")?.int("a circle index")?;
                line.finish(4)?;
                plan.closed_pairs.push((a, b));
            }
            "open" => {
                let a = arc_ref(line.at(1, "<circle>.<arc>")?)?;
                line.expect(2, "->")?;
                let b = arc_ref(line.at(3, "<circle>.<arc>")?)?;
                line.finish(4)?;
                plan.open_pairs.push((a, b));
            }
            other => return Err(head.error(format!("expected `closed` or `open`, found `{other}`"))),
        }
    }
    if plan.is_empty() {
        return Err(eof(text, "empty plan"));
    }
    Ok(plan)
}

pub fn print_plan(plan: &SewPlan) -> String {
    let mut out = String::new();
    for (a, b) in &plan.closed_pairs {
        let _ = writeln!(out, "closed {a} -> {b}");
    }
    for (a, b) in &plan.open_pairs {
        let _ = writeln!(out, "open {a} -> {b}");
    }
    out
}

// ------------------------------------------------------------------ models

/// `[coeff[*]]name (('+'|'-') ...)*` or `0`, over the given basis names.
fn parse_combination(line: &Line<'_>, mut k: usize, names: &[String]) -> Result<(Vector, usize), ParseError> {
    let mut v = vec![Q::default(); names.len()];
    let first = line.at(k, "a linear combination")?;
    if first.text == "0" {
        return Ok((v, k + 1));
    }
    loop {
        let t = line.at(k, "a term")?;
        let (neg, body) = match t.text.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, t.text),
        };
        let (coeff, name) = match body.split_once('*') {
            Some((c, n)) => (parse_rational(c).ok_or_else(|| t.error(format!("bad coefficient in `{}`", t.text)))?, n),
            None => (Q::from_integer(1), body),
        };
        let idx = names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| t.error(format!("unknown basis element `{name}`")))?;
        v[idx] += if neg { -coeff } else { coeff };
        k += 1;
        match line.tokens.get(k) {
            Some(p) if p.text == "+" => k += 1,
            _ => return Ok((v, k)),
        }
    }
}

/// Model file:
///
/// ```text
/// model T2
/// dim 2
/// basis 1 0          # name and degree, in order
/// basis a 1
/// unit 1
/// orientation ab     # one top class per component
/// product a b = ab   # right side: 0 or terms like -ab, 2*x, 1/2*y + z
/// ```
///
/// When the unit is a single basis element, its products with every basis
/// element are filled in and need not be listed.
pub fn parse_model(text: &str) -> Result<FrobeniusModel, ParseError> {
    let all = lines(text);
    let mut name = None;
    let mut dim = None;
    let mut basis: Vec<BasisElement> = Vec::new();
    for line in &all {
        match line.tokens[0].text {
            "model" => {
                name = Some(line.at(1, "a model name")?.text.to_string());
                line.finish(2)?;
            }
            "dim" => {
                dim = Some(line.at(1, "a dimension")?.int::<u32>("a dimension")?);
                line.finish(2)?;
            }
            "basis" => {
                let n = line.at(1, "a basis name")?;
                let degree = line.at(2, "a degree")?.int("a degree")?;
                line.finish(3)?;
                basis.push(BasisElement {
                    name: n.text.to_string(),
                    degree,
                });
            }
            _ => {}
        }
    }
    let name = name.ok_or_else(|| eof(text, "missing `model` line"))?;
    let dim = dim.ok_or_else(|| eof(text, "missing `dim` line"))?;
    let names: Vec<String> = basis.iter().map(|b| b.name.clone()).collect();
    let index = |t: Token<'_>| {
        names
            .iter()
            .position(|n| n == t.text)
            .ok_or_else(|| t.error(format!("unknown basis element `{}`", t.text)))
    };
    let mut unit = None;
    let mut orientation = Vec::new();
    let mut products: BTreeMap<(usize, usize), Vector> = BTreeMap::new();
    let mut last = all.first().map(|l| l.tokens[0]);
    for line in &all {
        let head = line.tokens[0];
        last = Some(head);
        match head.text {
            "model" | "dim" | "basis" => {}
            "unit" => {
                let (v, k) = parse_combination(line, 1, &names)?;
                line.finish(k)?;
                unit = Some(v);
            }
            "orientation" => {
                for t in &line.tokens[1..] {
                    orientation.push(index(*t)?);
                }
            }
            "product" => {
                let i = index(line.at(1, "a basis element")?)?;
                let j = index(line.at(2, "a basis element")?)?;
                line.expect(3, "=")?;
                let (v, k) = parse_combination(line, 4, &names)?;
                line.finish(k)?;
                if products.insert((i, j), v).is_some() {
                    return Err(head.error("product listed twice"));
                }
            }
            other => return Err(head.error(format!("unknown directive `{other}`"))),
        }
    }
    let unit = unit.ok_or_else(|| eof(text, "missing `unit` line"))?;
    let singles: Vec<usize> = (0..names.len()).filter(|&i| unit[i] != Q::default()).collect();
    if let [u] = singles[..] {
        if unit[u] == Q::from_integer(1) {
            for j in 0..names.len() {
                let e = basis_vec(names.len(), j);
                products.entry((u, j)).or_insert_with(|| e.clone());
                products.entry((j, u)).or_insert(e);
            }
        }
    }
    let products = products.into_iter().map(|((i, j), v)| (i, j, v)).collect();
    FrobeniusModel::new(name, dim, basis, products, unit, orientation).map_err(|e| {
        let t = last.expect("nonempty file");
        ParseError {
            line: t.line,
            column: 1,
            message: format!("invalid model: {e}"),
        }
    })
}

/// Embedding file:
///
/// ```text
/// embedding S1-in-T2
/// source S1        # a built-in model name or a model file path
/// target T2
/// restrict a = x
/// restrict 1 = 1   # ι* of a target basis element; unlisted ones map to 0
/// ```
///
/// `resolve` turns a `source`/`target` argument into a model.
pub fn parse_embedding(
    text: &str,
    resolve: &dyn Fn(&str) -> Result<FrobeniusModel, String>,
) -> Result<EmbeddingData, ParseError> {
    let all = lines(text);
    let mut name = None;
    let mut source = None;
    let mut target = None;
    for line in &all {
        let head = line.tokens[0];
        match head.text {
            "embedding" => {
                name = Some(line.at(1, "a name")?.text.to_string());
                line.finish(2)?;
            }
            "source" | "target" => {
                let t = line.at(1, "a model")?;
                line.finish(2)?;
                let m = resolve(t.text).map_err(|e| t.error(e))?;
                if head.text == "source" {
                    source = Some(m);
                } else {
                    target = Some(m);
                }
            }
            "restrict" => {}
            other => return Err(head.error(format!("unknown directive `{other}`"))),
        }
    }
    let name = name.ok_or_else(|| eof(text, "missing `embedding` line"))?;
    let source = source.ok_or_else(|| eof(text, "missing `source` line"))?;
    let target = target.ok_or_else(|| eof(text, "missing `target` line"))?;
    let src_names: Vec<String> = source.basis().iter().map(|b| b.name.clone()).collect();
    let mut r = Matrix::zeros(source.rank(), target.rank());
    for line in all.iter().filter(|l| l.tokens[0].text == "restrict") {
        let t = line.at(1, "a target basis element")?;
        let j = target
            .index_of(t.text)
            .ok_or_else(|| t.error(format!("unknown target basis element `{}`", t.text)))?;
        line.expect(2, "=")?;
        let (v, k) = parse_combination(line, 3, &src_names)?;
        line.finish(k)?;
        for (i, x) in v.into_iter().enumerate() {
            r[(i, j)] = x;
        }
    }
    EmbeddingData::new(name, source, target, r).map_err(|e| eof(text, &format!("invalid embedding: {e}")))
}

// ------------------------------------------------------------- assignments

/// Assignment file:
///
/// ```text
/// sector closed u:0 c:-2       # basis names with degrees
/// sector open K L o:0
/// entry unit 0 0 1             # generator row column value
/// entry phi 3 0 2
/// ```
///
/// Generator names follow [`Generator::name`]; matrices use mixed-radix
/// indices, first strand most significant.
pub fn parse_assignment(text: &str) -> Result<TableAssignment, ParseError> {
    let mut table = TableAssignment::default();
    let mut closed_seen = false;
    let basis = |line: &Line<'_>, from: usize| -> Result<Vec<(String, i64)>, ParseError> {
        line.tokens[from..]
            .iter()
            .map(|t| {
                let (n, d) = t
                    .text
                    .split_once(':')
                    .ok_or_else(|| t.error(format!("expected name:degree, found `{}`", t.text)))?;
                let d = d.parse().map_err(|_| t.error(format!("bad degree in `{}`", t.text)))?;
                Ok((n.to_string(), d))
            })
            .collect()
    };
    for line in lines(text) {
        let head = line.tokens[0];
        match head.text {
            "sector" => {
                let kind = line.at(1, "`closed` or `open`")?;
                match kind.text {
                    "closed" => {
                        if closed_seen {
                            return Err(kind.error("closed sector declared twice"));
                        }
                        closed_seen = true;
                        table.closed = basis(&line, 2)?;
                    }
                    "open" => {
                        let i = line.at(2, "a brane")?.text.to_string();
                        let j = line.at(3, "a brane")?.text.to_string();
                        let b = basis(&line, 4)?;
                        if table.open.insert((i.clone(), j.clone()), b).is_some() {
                            return Err(kind.error(format!("open sector {i},{j} declared twice")));
                        }
                    }
                    other => return Err(kind.error(format!("expected `closed` or `open`, found `{other}`"))),
                }
            }
            "entry" => {
                let g = line.at(1, "a generator name")?;
                let row = line.at(2, "a row index")?.int("a row index")?;
                let col = line.at(3, "a column index")?.int("a column index")?;
                let value = line.at(4, "a value")?.rational()?;
                line.finish(5)?;
                table.maps.entry(g.text.to_string()).or_default().push((row, col, value));
            }
            other => return Err(head.error(format!("unknown directive `{other}`"))),
        }
    }
    if !closed_seen {
        return Err(eof(text, "missing `sector closed` line"));
    }
    Ok(table)
}

/// Generator names accepted in assignment files for the given branes.
pub fn generator_names(branes: &[String]) -> Vec<String> {
    use Generator::*;
    let n = branes.len() as u16;
    let mut gens = vec![ClosedUnit, ClosedMult, ClosedComult];
    for i in 0..n {
        gens.extend([OpenUnit(i), Zipper(i), Cozipper(i), WindowCup(i)]);
        for j in 0..n {
            gens.push(Comodule(i, j));
            for k in 0..n {
                gens.extend([OpenMult(i, j, k), OpenComult(i, j, k)]);
                for l in 0..n {
                    gens.push(Saddle(i, j, k, l));
                }
            }
        }
    }
    gens.iter().map(|g| g.name(branes)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frobenius::builtins;

    const ANNULUS: &str = "\
# an open window
brane I dim 0 chi 1
brane J dim 1 chi 0
brane K dim 0 chi 1
component genus 0
circle arcs free I, open in, free K, open out
circle window J
";

    #[test]
    fn occ_round_trip() {
        let c = parse_occ(ANNULUS).unwrap();
        assert_eq!(c.components[0].circles.len(), 2);
        assert_eq!(c.branes.len(), 3);
        assert_eq!(parse_occ(&print_occ(&c)).unwrap(), c);
        assert!(crate::surface::validate(&c).is_empty());
    }

    #[test]
    fn occ_errors_carry_positions() {
        assert_eq!(parse_occ("").unwrap_err().message, "no component declared");
        let e = parse_occ("component genus 0\ncircle closed sideways\n").unwrap_err();
        assert_eq!((e.line, e.column), (2, 15));
        let e = parse_occ("circle closed in\n").unwrap_err();
        assert_eq!((e.line, e.column), (1, 1));
        let e = parse_occ("component genus 0\ncircle arcs free K open in\n").unwrap_err();
        assert_eq!((e.line, e.column), (2, 20));
        let e = parse_occ("brane K dim x chi 1\ncomponent genus 0\n").unwrap_err();
        assert_eq!((e.line, e.column), (1, 13));
    }

    #[test]
    fn plan_round_trip() {
        let plan = parse_plan("closed 1 -> 0\nopen 0.3->2.1 # trailing\n").unwrap();
        assert_eq!(plan.closed_pairs, vec![(1, 0)]);
        assert_eq!(plan.open_pairs[0].1, ArcRef { circle: 2, arc: 1 });
        assert_eq!(parse_plan(&print_plan(&plan)).unwrap(), plan);
        assert!(parse_plan("open 0 -> 1.1").is_err());
    }

    #[test]
    fn model_file_matches_builtin_torus() {
        let text = "\
model T2
dim 2
basis 1 0
basis a 1
basis b 1
basis ab 2
unit 1
orientation ab
product a b = ab
product b a = -ab
";
        let m = parse_model(text).unwrap();
        let t = builtins::torus();
        assert_eq!(m.rank(), t.rank());
        assert_eq!(m.euler_char(), 0);
        for i in 0..4 {
            for j in 0..4 {
                assert_eq!(m.product(i, j), t.product(i, j));
            }
        }
        let bad = parse_model(&text.replace("product b a = -ab", "product b a = ab")).unwrap_err();
        assert!(bad.message.contains("graded commutative"), "{bad}");
    }

    #[test]
    fn embedding_file() {
        let text = "embedding S1-in-T2\nsource S1\ntarget T2\nrestrict 1 = 1\nrestrict a = x\n";
        let resolve = |n: &str| builtins::model(n).ok_or_else(|| format!("no model {n}"));
        let e = parse_embedding(text, &resolve).unwrap();
        assert_eq!(e.restriction(), builtins::circle_in_torus().restriction());
        let e = parse_embedding("embedding x\nsource Q9\n", &resolve).unwrap_err();
        assert_eq!((e.line, e.column), (2, 8));
    }

    #[test]
    fn assignment_file() {
        let t = parse_assignment("sector closed u:0 c:-2\nsector open K K o:0\nentry phi 3 0 2\nentry unit 0 0 1/2\n").unwrap();
        assert_eq!(t.closed.len(), 2);
        assert_eq!(t.maps["unit"], vec![(0, 0, Q::new(1, 2))]);
        assert!(parse_assignment("entry mu 0 0 1\n").is_err());
        assert_eq!(generator_names(&["K".into()]).len(), 3 + 4 + 1 + 2 + 1);
    }
}
