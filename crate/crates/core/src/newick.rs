//! Extended Newick text form with interior labels.
//!
//! ```text
//! file     := { blank | "#" comment } [ flavor NEWLINE ] tree ";"
//! flavor   := "rooted" | "unrooted"
//! tree     := "(" tree { "," tree } ")" [ label ] | leaf-name
//! ```
//!
//! Leaf names and labels are runs of characters other than whitespace and
//! `(),;`. Rooted is the default flavor. An unrooted tree is written rooted
//! at an interior vertex, which must then have at least three children.
//! Writers emit children ordered by their smallest leaf name, so the output
//! for a given tree is deterministic.

use crate::error::{parse_err, Result};
use crate::symbols::{is_symbol_name, SymbolTable};
use crate::tree::{Flavor, LabelledTree, PhyloTree, TreeBuilder, VertexId};

struct Parsed {
    flavor: Flavor,
    builder: TreeBuilder,
    labels: Vec<Option<String>>,
}

fn is_delim(c: char) -> bool {
    c.is_whitespace() || matches!(c, '(' | ')' | ',' | ';')
}

fn parse_raw(text: &str) -> Result<Parsed> {
    let mut flavor = None;
    let mut body = String::new();
    let mut body_line = 0;
    for (i, line) in text.lines().enumerate() {
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        if body.is_empty() && flavor.is_none() {
            match trimmed {
                "rooted" => {
                    flavor = Some(Flavor::Rooted);
                    continue;
                }
                "unrooted" => {
                    flavor = Some(Flavor::Unrooted);
                    continue;
                }
                _ => {}
            }
        }
        if body.is_empty() {
            body_line = i + 1;
        }
        body.push_str(trimmed);
        body.push(' ');
    }
    let flavor = flavor.unwrap_or(Flavor::Rooted);
    let chars: Vec<char> = body.chars().collect();
    let mut pos = 0;
    let mut builder = TreeBuilder::new();
    let mut labels: Vec<Option<String>> = Vec::new();
    let err = |msg: &str| parse_err(body_line, msg.to_string());

    let skip_ws = |pos: &mut usize| {
        while *pos < chars.len() && chars[*pos].is_whitespace() {
            *pos += 1;
        }
    };
    let read_token = |pos: &mut usize| -> String {
        let start = *pos;
        while *pos < chars.len() && !is_delim(chars[*pos]) {
            *pos += 1;
        }
        chars[start..*pos].iter().collect()
    };

    // Explicit stack of open interior vertices.
    let mut open: Vec<VertexId> = Vec::new();
    skip_ws(&mut pos);
    if pos >= chars.len() {
        return Err(err("empty tree"));
    }
    let mut expect_subtree = true;
    loop {
        skip_ws(&mut pos);
        if pos >= chars.len() {
            return Err(err("missing `;`"));
        }
        let c = chars[pos];
        if expect_subtree {
            if c == '(' {
                let v = builder.add_interior(open.last().copied(), None);
                labels.push(None);
                open.push(v);
                pos += 1;
                continue;
            }
            let name = read_token(&mut pos);
            if name.is_empty() {
                return Err(err(&format!("expected leaf name at `{c}`")));
            }
            builder.add_leaf(open.last().copied(), name);
            labels.push(None);
            if open.is_empty() {
                return Err(err("tree must have an interior vertex"));
            }
            expect_subtree = false;
            continue;
        }
        match c {
            ',' => {
                if open.is_empty() {
                    return Err(err("unexpected `,`"));
                }
                pos += 1;
                expect_subtree = true;
            }
            ')' => {
                let v = open.pop().ok_or_else(|| err("unbalanced `)`"))?;
                pos += 1;
                skip_ws(&mut pos);
                let label = read_token(&mut pos);
                if !label.is_empty() {
                    labels[v] = Some(label);
                }
                if open.is_empty() {
                    skip_ws(&mut pos);
                    if pos >= chars.len() || chars[pos] != ';' {
                        return Err(err("missing `;` after root"));
                    }
                    pos += 1;
                    skip_ws(&mut pos);
                    if pos != chars.len() {
                        return Err(err("trailing text after `;`"));
                    }
                    break;
                }
            }
            _ => return Err(err(&format!("unexpected `{c}`"))),
        }
    }
    Ok(Parsed {
        flavor,
        builder,
        labels,
    })
}

/// Parses a tree whose interior vertices all carry labels.
pub fn parse_labelled(text: &str, table: &mut SymbolTable) -> Result<LabelledTree> {
    let Parsed {
        flavor,
        mut builder,
        labels,
    } = parse_raw(text)?;
    for (v, label) in labels.iter().enumerate() {
        if let Some(label) = label {
            if !is_symbol_name(label) {
                return Err(parse_err(0, format!("invalid label `{label}`")));
            }
            builder.set_label(v, table.intern(label));
        }
    }
    builder.finish(flavor)
}

/// Parses a tree shape, ignoring any interior labels.
pub fn parse_shape(text: &str) -> Result<PhyloTree> {
    let parsed = parse_raw(text)?;
    parsed.builder.finish_shape(parsed.flavor)
}

/// Reads only the flavor header of a tree file.
pub fn detect_flavor(text: &str) -> Result<Flavor> {
    Ok(parse_raw(text)?.flavor)
}

fn write_with(
    tree: &PhyloTree,
    label: &dyn Fn(VertexId) -> String,
    order: &[VertexId],
) -> String {
    // `order` is a preorder with sorted children; rebuild child lists from it.
    let mut pos = vec![0usize; tree.vertex_count()];
    for (i, &v) in order.iter().enumerate() {
        pos[v] = i;
    }
    let root = order[0];
    let parent_of = |v: VertexId| -> Option<VertexId> {
        // In the normalized preorder, the parent is the unique neighbour
        // that appears earlier.
        tree.neighbours(v).into_iter().find(|&w| pos[w] < pos[v])
    };
    let mut kids: Vec<Vec<VertexId>> = vec![Vec::new(); tree.vertex_count()];
    for &v in &order[1..] {
        kids[parent_of(v).expect("non-root has parent")].push(v);
    }
    fn rec(
        v: VertexId,
        tree: &PhyloTree,
        kids: &[Vec<VertexId>],
        label: &dyn Fn(VertexId) -> String,
        out: &mut String,
    ) {
        if let Some(name) = tree.leaf_name(v) {
            out.push_str(name);
            return;
        }
        out.push('(');
        for (i, &c) in kids[v].iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            rec(c, tree, kids, label, out);
        }
        out.push(')');
        out.push_str(&label(v));
    }
    let mut out = String::new();
    if tree.flavor() == Flavor::Unrooted {
        out.push_str("unrooted\n");
    }
    rec(root, tree, &kids, label, &mut out);
    out.push(';');
    out
}

pub fn write_labelled(tree: &LabelledTree, table: &SymbolTable) -> String {
    let order = tree.tree().normalized_order();
    write_with(
        tree.tree(),
        &|v| table.name(tree.interior_label(v)).to_string(),
        &order,
    )
}

pub fn write_shape(tree: &PhyloTree) -> String {
    let order = tree.normalized_order();
    write_with(tree, &|_| String::new(), &order)
}
