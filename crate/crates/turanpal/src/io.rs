//! Line-oriented file formats for palettes and hypergraphs.
//!
//! Palette files:
//! ```text
//! palette <name>
//! colors <name1> <name2> ...
//! triple <left> <middle> <right>
//! ```
//!
//! Hypergraph files:
//! ```text
//! hypergraph <name> <vertexCount>
//! order <v1> <v2> ...        # optional; its presence makes the hypergraph ordered
//! edge <a> <b> <c>
//! ```
//!
//! `#` starts a comment, blank lines are skipped, and parsing is strict:
//! unknown directives, undeclared color names, out-of-range indices and
//! duplicate triples or edges are errors carrying their line number.

use std::collections::HashSet;
use std::fmt::Write as _;

use thiserror::Error;

use crate::colorability::{Hypergraph, OrderedHypergraph, PairColoring};
use crate::palette::{Palette, Violation};

/// A parsed palette file: the declared name plus the palette itself.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PaletteDoc {
    pub name: String,
    pub palette: Palette,
}

/// A parsed hypergraph file; `order` is present exactly when the file
/// declared one.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct HypergraphDoc {
    pub name: String,
    pub hypergraph: Hypergraph,
    pub order: Option<Vec<usize>>,
}

impl HypergraphDoc {
    /// The ordered view, if the file declared an order.
    pub fn to_ordered(&self) -> Option<OrderedHypergraph> {
        self.order.as_ref().map(|order| {
            OrderedHypergraph::new(self.hypergraph.clone(), order.clone())
                .expect("order validated at parse time")
        })
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Error)]
#[error("line {line}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

fn err(line: usize, message: impl Into<String>) -> ParseError {
    ParseError {
        line,
        message: message.into(),
    }
}

/// Strips the comment suffix and splits into tokens; `None` for blank
/// lines.
fn tokens(raw: &str) -> Option<Vec<&str>> {
    let body = match raw.find('#') {
        Some(at) => &raw[..at],
        None => raw,
    };
    let tokens: Vec<&str> = body.split_whitespace().collect();
    if tokens.is_empty() {
        None
    } else {
        Some(tokens)
    }
}

pub fn parse_palette(text: &str) -> Result<PaletteDoc, ParseError> {
    let mut name: Option<String> = None;
    let mut colors: Option<Vec<String>> = None;
    let mut triples: Vec<(usize, usize, usize)> = Vec::new();
    let mut seen: HashSet<(usize, usize, usize)> = HashSet::new();
    let mut line_count = 0;

    for (index, raw) in text.lines().enumerate() {
        let line = index + 1;
        line_count = line;
        let Some(tokens) = tokens(raw) else { continue };
        match tokens[0] {
            "palette" => {
                if name.is_some() {
                    return Err(err(line, "duplicate `palette` directive"));
                }
                if tokens.len() != 2 {
                    return Err(err(line, "`palette` takes exactly one name"));
                }
                name = Some(tokens[1].to_string());
            }
            "colors" => {
                if name.is_none() {
                    return Err(err(line, "`colors` must follow the `palette` directive"));
                }
                if colors.is_some() {
                    return Err(err(line, "duplicate `colors` directive"));
                }
                if tokens.len() < 2 {
                    return Err(err(line, "`colors` needs at least one color name"));
                }
                let declared: Vec<String> = tokens[1..].iter().map(|s| s.to_string()).collect();
                let mut unique = HashSet::new();
                for color in &declared {
                    if !unique.insert(color.as_str()) {
                        return Err(err(line, format!("duplicate color name `{color}`")));
                    }
                }
                colors = Some(declared);
            }
            "triple" => {
                let Some(declared) = &colors else {
                    return Err(err(line, "`triple` before the `colors` directive"));
                };
                if tokens.len() != 4 {
                    return Err(err(line, "`triple` takes exactly three color names"));
                }
                let mut resolved = [0usize; 3];
                for (slot, token) in tokens[1..].iter().enumerate() {
                    match declared.iter().position(|c| c == token) {
                        Some(i) => resolved[slot] = i,
                        None => {
                            return Err(err(line, format!("undeclared color name `{token}`")));
                        }
                    }
                }
                let triple = (resolved[0], resolved[1], resolved[2]);
                if !seen.insert(triple) {
                    return Err(err(
                        line,
                        format!(
                            "duplicate triple `{} {} {}`",
                            tokens[1], tokens[2], tokens[3]
                        ),
                    ));
                }
                triples.push(triple);
            }
            other => return Err(err(line, format!("unknown directive `{other}`"))),
        }
    }

    let name = name.ok_or_else(|| err(line_count, "missing `palette` directive"))?;
    let colors = colors.ok_or_else(|| err(line_count, "missing `colors` directive"))?;
    let palette = Palette::new(colors, triples).map_err(|invalid| {
        // Whitespace in names is impossible after tokenization; surface
        // whatever else slipped through with the file's last line.
        let message = invalid
            .violations
            .first()
            .map_or_else(|| "invalid palette".to_string(), Violation::to_string);
        err(line_count, message)
    })?;
    Ok(PaletteDoc { name, palette })
}

pub fn parse_hypergraph(text: &str) -> Result<HypergraphDoc, ParseError> {
    let mut header: Option<(String, usize)> = None;
    let mut order: Option<(usize, Vec<usize>)> = None;
    let mut edges: Vec<(usize, usize, usize)> = Vec::new();
    let mut seen: HashSet<[usize; 3]> = HashSet::new();
    let mut line_count = 0;

    for (index, raw) in text.lines().enumerate() {
        let line = index + 1;
        line_count = line;
        let Some(tokens) = tokens(raw) else { continue };
        match tokens[0] {
            "hypergraph" => {
                if header.is_some() {
                    return Err(err(line, "duplicate `hypergraph` directive"));
                }
                if tokens.len() != 3 {
                    return Err(err(line, "`hypergraph` takes a name and a vertex count"));
                }
                let count: usize = tokens[2]
                    .parse()
                    .map_err(|_| err(line, format!("invalid vertex count `{}`", tokens[2])))?;
                header = Some((tokens[1].to_string(), count));
            }
            "order" => {
                let Some((_, vertex_count)) = &header else {
                    return Err(err(line, "`order` before the `hypergraph` directive"));
                };
                if order.is_some() {
                    return Err(err(line, "duplicate `order` directive"));
                }
                let mut declared = Vec::with_capacity(tokens.len() - 1);
                for token in &tokens[1..] {
                    let v: usize = token
                        .parse()
                        .map_err(|_| err(line, format!("invalid vertex index `{token}`")))?;
                    declared.push(v);
                }
                let n = *vertex_count;
                let mut seen_vertices = vec![false; n];
                if declared.len() != n {
                    return Err(err(line, format!("`order` must list all {n} vertices")));
                }
                for &v in &declared {
                    if v >= n || seen_vertices[v] {
                        return Err(err(line, "`order` is not a permutation of the vertices"));
                    }
                    seen_vertices[v] = true;
                }
                order = Some((line, declared));
            }
            "edge" => {
                let Some((_, vertex_count)) = &header else {
                    return Err(err(line, "`edge` before the `hypergraph` directive"));
                };
                if tokens.len() != 4 {
                    return Err(err(line, "`edge` takes exactly three vertex indices"));
                }
                let mut vertices = [0usize; 3];
                for (slot, token) in tokens[1..].iter().enumerate() {
                    let v: usize = token
                        .parse()
                        .map_err(|_| err(line, format!("invalid vertex index `{token}`")))?;
                    if v >= *vertex_count {
                        return Err(err(
                            line,
                            format!("vertex {v} out of range for {vertex_count} vertices"),
                        ));
                    }
                    vertices[slot] = v;
                }
                let (a, b, c) = (vertices[0], vertices[1], vertices[2]);
                if a == b || a == c || b == c {
                    return Err(err(line, "edge has repeated vertices"));
                }
                let mut key = [a, b, c];
                key.sort_unstable();
                if !seen.insert(key) {
                    return Err(err(line, format!("duplicate edge `{a} {b} {c}`")));
                }
                edges.push((a, b, c));
            }
            other => return Err(err(line, format!("unknown directive `{other}`"))),
        }
    }

    let (name, vertex_count) =
        header.ok_or_else(|| err(line_count, "missing `hypergraph` directive"))?;
    let hypergraph =
        Hypergraph::new(vertex_count, edges).map_err(|e| err(line_count, e.to_string()))?;
    Ok(HypergraphDoc {
        name,
        hypergraph,
        order: order.map(|(_, o)| o),
    })
}

pub fn serialize_palette(doc: &PaletteDoc) -> String {
    let mut out = String::new();
    let p = &doc.palette;
    writeln!(out, "palette {}", doc.name).unwrap();
    writeln!(out, "colors {}", p.names().join(" ")).unwrap();
    for t in p.triples() {
        writeln!(
            out,
            "triple {} {} {}",
            p.name(t.left),
            p.name(t.middle),
            p.name(t.right)
        )
        .unwrap();
    }
    out
}

pub fn serialize_hypergraph(doc: &HypergraphDoc) -> String {
    let mut out = String::new();
    writeln!(
        out,
        "hypergraph {} {}",
        doc.name,
        doc.hypergraph.vertex_count()
    )
    .unwrap();
    if let Some(order) = &doc.order {
        let rendered: Vec<String> = order.iter().map(ToString::to_string).collect();
        writeln!(out, "order {}", rendered.join(" ")).unwrap();
    }
    for [a, b, c] in doc.hypergraph.edges() {
        writeln!(out, "edge {a} {b} {c}").unwrap();
    }
    out
}

/// Serialization used by `random-hg`: the hypergraph file plus the pair
/// coloring as comments, so the certificate survives in the output without
/// affecting reparsing.
pub fn serialize_hypergraph_with_coloring(
    doc: &HypergraphDoc,
    palette: &Palette,
    coloring: &PairColoring,
) -> String {
    let mut out = serialize_hypergraph(doc);
    let n = doc.hypergraph.vertex_count();
    for u in 0..n {
        for v in (u + 1)..n {
            writeln!(out, "# pair {u} {v} {}", palette.name(coloring.get(u, v))).unwrap();
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtins;

    #[test]
    fn builtin_round_trips() {
        for name in builtins::NAMES {
            let doc = PaletteDoc {
                name: name.to_string(),
                palette: builtins::lookup(name).unwrap(),
            };
            let text = serialize_palette(&doc);
            let reparsed = parse_palette(&text).unwrap();
            assert_eq!(reparsed, doc, "{name}");
        }
    }

    #[test]
    fn triple_arity_error_carries_line_number() {
        let text = "palette P\ncolors a b\ntriple a b\n";
        let e = parse_palette(text).unwrap_err();
        assert_eq!(e.line, 3);
        assert!(e.message.contains("three color names"), "{}", e.message);
    }

    #[test]
    fn undeclared_color_is_rejected() {
        let text = "palette P\ncolors a b\ntriple a b z\n";
        let e = parse_palette(text).unwrap_err();
        assert_eq!(e.line, 3);
        assert!(e.message.contains("undeclared"), "{}", e.message);
    }

    #[test]
    fn duplicate_triple_is_rejected() {
        let text = "palette P\ncolors a b\ntriple a b a\ntriple a b a\n";
        let e = parse_palette(text).unwrap_err();
        assert_eq!(e.line, 4);
    }

    #[test]
    fn unknown_directive_is_rejected() {
        let text = "palette P\ncolors a\nedge 0 1 2\n";
        let e = parse_palette(text).unwrap_err();
        assert_eq!(e.line, 3);
        assert!(e.message.contains("unknown directive"), "{}", e.message);
    }

    #[test]
    fn comments_and_blank_lines_are_skipped() {
        let text = "# a fixture\npalette P # the name\n\ncolors a b  # two colors\ntriple a b a\n";
        let doc = parse_palette(text).unwrap();
        assert_eq!(doc.name, "P");
        assert_eq!(doc.palette.color_count(), 2);
        assert_eq!(doc.palette.triple_count(), 1);
    }

    #[test]
    fn k4_minus_fixture_parses() {
        let text = "hypergraph K4minus 4\nedge 0 1 2\nedge 0 1 3\nedge 0 2 3\n";
        let doc = parse_hypergraph(text).unwrap();
        assert_eq!(doc.hypergraph, Hypergraph::k4_minus());
        assert!(doc.order.is_none());
    }

    #[test]
    fn order_line_makes_the_hypergraph_ordered() {
        let text = "hypergraph H 3\norder 2 0 1\nedge 0 1 2\n";
        let doc = parse_hypergraph(text).unwrap();
        let ordered = doc.to_ordered().expect("ordered");
        assert_eq!(ordered.order(), &[2, 0, 1]);
    }

    #[test]
    fn bad_order_and_edges_are_rejected_with_lines() {
        let cases = [
            ("hypergraph H 3\norder 0 1\n", 2),
            ("hypergraph H 3\norder 0 1 1\n", 2),
            ("hypergraph H 3\nedge 0 1 3\n", 2),
            ("hypergraph H 3\nedge 0 1 1\n", 2),
            ("hypergraph H 4\nedge 0 1 2\nedge 2 1 0\n", 3),
        ];
        for (text, line) in cases {
            let e = parse_hypergraph(text).unwrap_err();
            assert_eq!(e.line, line, "{text:?}: {}", e.message);
        }
    }

    #[test]
    fn hypergraph_round_trips_with_order() {
        let doc = HypergraphDoc {
            name: "H".to_string(),
            hypergraph: Hypergraph::k4_minus(),
            order: Some(vec![1, 2, 3, 0]),
        };
        let text = serialize_hypergraph(&doc);
        assert_eq!(parse_hypergraph(&text).unwrap(), doc);
    }
}
