//! Plain-text formats.
//!
//! Quiver files: `#` starts a comment, blank lines are skipped, the first
//! remaining line is `n <count>`, every further line is `<src> -> <dst>`.
//! Labels are 0-based. Several quivers in one stream are separated by lines
//! holding `---`.
//!
//! Mutation scripts: a `start <path>` line followed by `mutate <v>` lines.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::quiver::{MutationSequence, Quiver};

fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(i) => &line[..i],
        None => line,
    }
}

fn syntax(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Syntax {
        line,
        column,
        message: message.into(),
    }
}

/// Column (1-based) of `token` inside `line`; `token` must be a subslice.
fn column_of(line: &str, token: &str) -> usize {
    token.as_ptr() as usize - line.as_ptr() as usize + 1
}

fn parse_label(raw: &str, token: &str, line_no: usize, n: usize) -> Result<usize> {
    let col = column_of(raw, token);
    let v: usize = token
        .parse()
        .map_err(|_| syntax(line_no, col, format!("expected a vertex label, found `{token}`")))?;
    if v >= n {
        let hint = if v == n { " (labels are 0-based)" } else { "" };
        return Err(syntax(line_no, col, format!("vertex {v} out of range for n = {n}{hint}")));
    }
    Ok(v)
}

/// Parses one quiver from numbered lines.
fn parse_lines<'a>(lines: impl Iterator<Item = (usize, &'a str)>) -> Result<Quiver> {
    let mut n: Option<usize> = None;
    let mut arrows: Vec<(usize, usize)> = Vec::new();
    let mut last_line = 0;
    for (line_no, raw) in lines {
        last_line = line_no;
        let body = strip_comment(raw);
        let tokens: Vec<&str> = body.split_whitespace().collect();
        if tokens.is_empty() {
            continue;
        }
        let Some(count) = n else {
            if tokens.len() != 2 || tokens[0] != "n" {
                return Err(syntax(line_no, column_of(raw, tokens[0]), "expected `n <count>`"));
            }
            let count = tokens[1].parse().map_err(|_| {
                syntax(line_no, column_of(raw, tokens[1]), "vertex count must be a non-negative integer")
            })?;
            n = Some(count);
            continue;
        };
        if tokens.len() != 3 || tokens[1] != "->" {
            return Err(syntax(line_no, column_of(raw, tokens[0]), "expected `<src> -> <dst>`"));
        }
        let u = parse_label(raw, tokens[0], line_no, count)?;
        let v = parse_label(raw, tokens[2], line_no, count)?;
        let at = |inner| Error::AtLine {
            line: line_no,
            inner: Box::new(inner),
        };
        if u == v {
            return Err(at(Error::LoopArrow(u)));
        }
        if arrows.contains(&(v, u)) {
            return Err(at(Error::TwoCycle(u, v)));
        }
        arrows.push((u, v));
    }
    let n = n.ok_or_else(|| syntax(last_line.max(1), 1, "missing `n <count>` header"))?;
    Quiver::new(n, &arrows)
}

pub fn parse_quiver(text: &str) -> Result<Quiver> {
    parse_lines(text.lines().enumerate().map(|(i, l)| (i + 1, l)))
}

/// Parses a `---`-separated stream of quivers.
pub fn parse_quiver_stream(text: &str) -> Result<Vec<Quiver>> {
    let lines: Vec<(usize, &str)> = text.lines().enumerate().map(|(i, l)| (i + 1, l)).collect();
    let mut out = Vec::new();
    for chunk in lines.split(|(_, l)| strip_comment(l).trim() == "---") {
        if chunk.iter().all(|(_, l)| strip_comment(l).trim().is_empty()) {
            continue;
        }
        out.push(parse_lines(chunk.iter().copied())?);
    }
    Ok(out)
}

/// Arrows are listed sorted by `(src, dst)`, one line per copy.
pub fn serialize_quiver(q: &Quiver) -> String {
    let mut s = format!("n {}\n", q.vertex_count());
    for (u, v) in q.arrows() {
        let _ = writeln!(s, "{u} -> {v}");
    }
    s
}

pub fn serialize_quiver_stream<'a>(qs: impl IntoIterator<Item = &'a Quiver>) -> String {
    let parts: Vec<String> = qs.into_iter().map(serialize_quiver).collect();
    parts.join("---\n")
}

/// Graphviz rendering with every vertex listed, arrows in sorted order.
pub fn export_dot(q: &Quiver) -> String {
    let mut s = String::from("digraph Q {\n");
    for v in 0..q.vertex_count() {
        let _ = writeln!(s, "  {v};");
    }
    for (u, v) in q.arrows() {
        let _ = writeln!(s, "  {u} -> {v};");
    }
    s.push_str("}\n");
    s
}

/// One `mutate` line: the vertex, its line number, and any trailing comment.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScriptStep {
    pub vertex: usize,
    pub line: usize,
    pub note: Option<String>,
}

/// A parsed mutation script: the start file as written and the steps.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MutationScript {
    pub start: String,
    pub steps: Vec<ScriptStep>,
}

impl MutationScript {
    pub fn vertex_list(&self) -> Vec<usize> {
        self.steps.iter().map(|s| s.vertex).collect()
    }
}

pub fn parse_mutation_script(text: &str) -> Result<MutationScript> {
    let mut start: Option<String> = None;
    let mut steps = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let body = strip_comment(raw);
        let tokens: Vec<&str> = body.split_whitespace().collect();
        match tokens.as_slice() {
            [] => {}
            ["start", path] if start.is_none() => start = Some((*path).to_string()),
            ["start", _] => return Err(syntax(line_no, column_of(raw, tokens[0]), "duplicate `start` line")),
            ["mutate", v] => {
                if start.is_none() {
                    return Err(syntax(line_no, column_of(raw, tokens[0]), "`mutate` before `start`"));
                }
                let v = v
                    .parse()
                    .map_err(|_| syntax(line_no, column_of(raw, tokens[1]), "expected a vertex label"))?;
                let note = raw
                    .find('#')
                    .map(|i| raw[i + 1..].trim().to_string())
                    .filter(|c| !c.is_empty());
                steps.push(ScriptStep {
                    vertex: v,
                    line: line_no,
                    note,
                });
            }
            _ => {
                return Err(syntax(
                    line_no,
                    column_of(raw, tokens[0]),
                    "expected `start <path>` or `mutate <v>`",
                ))
            }
        }
    }
    let start = start.ok_or_else(|| syntax(1, 1, "missing `start <path>` line"))?;
    Ok(MutationScript { start, steps })
}

/// Writes a script; `annotate` supplies an optional trailing comment for
/// each intermediate quiver.
pub fn serialize_mutation_script(
    start_path: &str,
    seq: &MutationSequence,
    annotate: impl Fn(&Quiver) -> Option<String>,
) -> String {
    let mut s = format!("start {start_path}\n");
    for (v, q) in seq.steps() {
        match annotate(q) {
            Some(c) => {
                let _ = writeln!(s, "mutate {v}  # {c}");
            }
            None => {
                let _ = writeln!(s, "mutate {v}");
            }
        }
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let q = Quiver::new(4, &[(2, 0), (0, 1), (1, 2), (3, 2), (3, 2)]).unwrap();
        let text = serialize_quiver(&q);
        assert_eq!(text, "n 4\n0 -> 1\n1 -> 2\n2 -> 0\n3 -> 2\n3 -> 2\n");
        assert_eq!(parse_quiver(&text).unwrap(), q);
    }

    #[test]
    fn comments_and_blanks() {
        let q = parse_quiver("# a path\n\nn 3  # three\n0 -> 1\n\n1 -> 2 # end\n").unwrap();
        assert_eq!(q, Quiver::linear_a(3));
    }

    #[test]
    fn errors_carry_positions() {
        match parse_quiver("n 3\n0 -> 1\n1 => 2\n") {
            Err(Error::Syntax { line, column, .. }) => assert_eq!((line, column), (3, 1)),
            other => panic!("{other:?}"),
        }
        match parse_quiver("n 3\n1 -> 2\n2 -> 3\n") {
            Err(Error::Syntax { line, column, message }) => {
                assert_eq!((line, column), (3, 6));
                assert!(message.contains("0-based"));
            }
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            parse_quiver("n 2\n0 -> 1\n1 -> 0\n"),
            Err(Error::AtLine { line: 3, .. })
        ));
        assert!(matches!(parse_quiver("n 2\n1 -> 1\n"), Err(Error::AtLine { line: 2, .. })));
        assert!(parse_quiver("# nothing\n").is_err());
    }

    #[test]
    fn streams() {
        let qs = vec![Quiver::linear_a(2), Quiver::linear_a(3)];
        let text = serialize_quiver_stream(&qs);
        assert_eq!(parse_quiver_stream(&text).unwrap(), qs);
    }

    #[test]
    fn dot_is_stable() {
        let dot = export_dot(&Quiver::linear_a(2));
        assert_eq!(dot, "digraph Q {\n  0;\n  1;\n  0 -> 1;\n}\n");
    }

    #[test]
    fn scripts() {
        let seq = MutationSequence::replay(Quiver::linear_a(3), &[0, 2]).unwrap();
        let text = serialize_mutation_script("a3.txt", &seq, |_| None);
        assert_eq!(text, "start a3.txt\nmutate 0\nmutate 2\n");
        let parsed = parse_mutation_script(&text).unwrap();
        assert_eq!(parsed.start, "a3.txt");
        assert_eq!(parsed.vertex_list(), vec![0, 2]);
        assert_eq!(parsed.steps[1].line, 3);
        let noted = parse_mutation_script("start a\nmutate 1  # abc\n").unwrap();
        assert_eq!(noted.steps[0].note.as_deref(), Some("abc"));
        assert!(parse_mutation_script("mutate 1\n").is_err());
    }
}
