//! Text formats for arrays, trees and query streams.
//!
//! Array file: the first line holds `n`, followed by `n` whitespace-separated element
//! tokens on any number of lines. Tree file: line 1 is `n root`, line 2 holds `n`
//! parent ids with `0` in the root's slot, line 3 holds `n` element tokens. Vertex ids
//! and array positions in files are 1-based. Query streams hold one `a b` pair per line;
//! blank lines and lines starting with `#` are skipped everywhere.

use crate::semigroup::NamedSemigroup;
use crate::tree::RootedTree;
use crate::Error;

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

/// Non-blank, non-comment lines with their 1-based line numbers.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().map(|(i, l)| (i + 1, l.trim())).filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn parse_count(line: usize, token: &str, what: &str) -> Result<usize, Error> {
    token.parse().map_err(|_| parse_err(line, format!("expected {what}, found `{token}`")))
}

pub fn parse_array<S: NamedSemigroup>(sg: &S, text: &str) -> Result<Vec<S::Elem>, Error> {
    let mut lines = content_lines(text);
    let (first, header) = lines.next().ok_or_else(|| parse_err(1, "missing length line"))?;
    let mut header_tokens = header.split_whitespace();
    let n = parse_count(first, header_tokens.next().unwrap_or(""), "the array length")?;
    if let Some(extra) = header_tokens.next() {
        return Err(parse_err(first, format!("unexpected token `{extra}` after the length")));
    }
    let mut values = Vec::with_capacity(n);
    let mut last = first;
    for (line, body) in lines {
        last = line;
        for token in body.split_whitespace() {
            if values.len() == n {
                return Err(parse_err(line, format!("more than {n} values")));
            }
            values.push(sg.parse(token).map_err(|m| parse_err(line, m))?);
        }
    }
    if values.len() != n {
        return Err(parse_err(last, format!("expected {n} values, found {}", values.len())));
    }
    if n == 0 {
        return Err(Error::EmptyInput);
    }
    Ok(values)
}

/// Reads a tree file; the returned tree uses 0-based ids (file id minus one).
pub fn parse_tree<S: NamedSemigroup>(sg: &S, text: &str) -> Result<RootedTree<S::Elem>, Error> {
    let mut lines = content_lines(text);
    let (l1, header) = lines.next().ok_or_else(|| parse_err(1, "missing `n root` line"))?;
    let head: Vec<&str> = header.split_whitespace().collect();
    if head.len() != 2 {
        return Err(parse_err(l1, "expected `n root`"));
    }
    let n = parse_count(l1, head[0], "the vertex count")?;
    let root = parse_count(l1, head[1], "the root id")?;
    if n == 0 {
        return Err(Error::EmptyInput);
    }
    if root == 0 || root > n {
        return Err(parse_err(l1, format!("root {root} outside 1..={n}")));
    }
    let (l2, parent_line) = lines.next().ok_or_else(|| parse_err(l1 + 1, "missing parent line"))?;
    let raw: Vec<&str> = parent_line.split_whitespace().collect();
    if raw.len() != n {
        return Err(parse_err(l2, format!("expected {n} parent ids, found {}", raw.len())));
    }
    let mut parents = Vec::with_capacity(n);
    for (v, token) in raw.iter().enumerate() {
        let p = parse_count(l2, token, "a parent id")?;
        let is_root = v + 1 == root;
        match (is_root, p) {
            (true, 0) => parents.push(None),
            (true, _) => return Err(parse_err(l2, format!("root {root} must have parent 0"))),
            (false, 0) => return Err(parse_err(l2, format!("vertex {} has parent 0 but is not the root", v + 1))),
            (false, p) if p > n => return Err(parse_err(l2, format!("parent id {p} outside 1..={n}"))),
            (false, p) => parents.push(Some(p - 1)),
        }
    }
    let (l3, value_line) = lines.next().ok_or_else(|| parse_err(l2 + 1, "missing value line"))?;
    let tokens: Vec<&str> = value_line.split_whitespace().collect();
    if tokens.len() != n {
        return Err(parse_err(l3, format!("expected {n} values, found {}", tokens.len())));
    }
    let values = tokens.iter().map(|t| sg.parse(t).map_err(|m| parse_err(l3, m))).collect::<Result<Vec<_>, _>>()?;
    if let Some((line, _)) = lines.next() {
        return Err(parse_err(line, "unexpected content after the value line"));
    }
    RootedTree::from_parents(&parents, values).map_err(|e| match e {
        Error::InvalidTree(msg) => parse_err(l2, msg),
        other => other,
    })
}

/// `(line, a, b)` for every query line, as written (1-based).
pub fn parse_queries(text: &str) -> Result<Vec<(usize, usize, usize)>, Error> {
    content_lines(text)
        .map(|(line, body)| {
            let parts: Vec<&str> = body.split_whitespace().collect();
            if parts.len() != 2 {
                return Err(parse_err(line, format!("expected two ids, found `{body}`")));
            }
            Ok((line, parse_count(line, parts[0], "an id")?, parse_count(line, parts[1], "an id")?))
        })
        .collect()
}

pub fn format_array<S: NamedSemigroup>(sg: &S, values: &[S::Elem]) -> String {
    let tokens: Vec<String> = values.iter().map(|v| sg.format(v)).collect();
    format!("{}\n{}\n", values.len(), tokens.join(" "))
}

pub fn format_tree<S: NamedSemigroup>(sg: &S, tree: &RootedTree<S::Elem>) -> String {
    let parents: Vec<String> = (0..tree.len()).map(|v| tree.parent(v).map_or(0, |p| p + 1).to_string()).collect();
    let values: Vec<String> = tree.values().iter().map(|v| sg.format(v)).collect();
    format!("{} {}\n{}\n{}\n", tree.len(), tree.root() + 1, parents.join(" "), values.join(" "))
}
