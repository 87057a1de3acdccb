//! Text format for systems.
//!
//! ```text
//! # comments run to the end of the line
//! q=5^1
//! 2 4
//! 1 3 1 0
//! 0 1 3 1
//! ```
//!
//! The first line is the field config, the second `m k`, followed by m rows
//! of k element codes. Rows need not be reduced; they must be independent.

use crate::error::{Error, Result};
use crate::gf::{Elem, FieldSpec};
use crate::linsys::LinearSystem;

/// A token with its 1-based line and column.
struct Token<'a> {
    text: &'a str,
    column: usize,
}

fn content_lines(text: &str) -> Vec<(usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("")))
        .filter(|(_, l)| !l.trim().is_empty())
        .collect()
}

fn tokens(line: &str) -> Vec<Token<'_>> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, ch) in line.char_indices() {
        match (ch.is_whitespace(), start) {
            (true, Some(s)) => {
                out.push(Token {
                    text: &line[s..i],
                    column: line[..s].chars().count() + 1,
                });
                start = None;
            }
            (false, None) => start = Some(i),
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push(Token {
            text: &line[s..],
            column: line[..s].chars().count() + 1,
        });
    }
    out
}

fn number(tok: &Token<'_>, line: usize, what: &str) -> Result<u64> {
    tok.text.parse().map_err(|_| {
        Error::parse(
            line,
            tok.column,
            format!("expected {what}, found `{}`", tok.text),
        )
    })
}

/// Parses a system file; errors carry the line and column of the offending
/// token.
pub fn parse_system(text: &str) -> Result<LinearSystem> {
    let lines = content_lines(text);
    let end_line = text.lines().count().max(1);
    let (field_line, field_text) = *lines
        .first()
        .ok_or_else(|| Error::parse(1, 1, "empty system file"))?;
    let field = FieldSpec::parse_config(field_text).map_err(|e| match e {
        Error::Parse {
            column, message, ..
        } => Error::parse(field_line, column, message),
        other => other,
    })?;

    let (shape_line, shape_text) = *lines
        .get(1)
        .ok_or_else(|| Error::parse(end_line, 1, "missing `m k` line"))?;
    let shape = tokens(shape_text);
    if shape.len() != 2 {
        let column = shape.get(2).map_or(1, |t| t.column);
        return Err(Error::parse(
            shape_line,
            column,
            "expected exactly two numbers `m k`",
        ));
    }
    let m = number(&shape[0], shape_line, "row count m")? as usize;
    let k = number(&shape[1], shape_line, "variable count k")? as usize;
    if m == 0 || k == 0 {
        return Err(Error::parse(shape_line, 1, "m and k must be positive"));
    }
    if m > k {
        return Err(Error::parse(
            shape_line,
            shape[0].column,
            format!("m = {m} exceeds k = {k}"),
        ));
    }

    let body = &lines[2..];
    if body.len() < m {
        return Err(Error::parse(
            end_line,
            1,
            format!("expected {m} rows, found {}", body.len()),
        ));
    }
    if let Some(&(extra, _)) = body.get(m) {
        return Err(Error::parse(
            extra,
            1,
            format!("unexpected content after {m} rows"),
        ));
    }
    let mut rows = Vec::with_capacity(m);
    for &(line, row_text) in body {
        let toks = tokens(row_text);
        if toks.len() != k {
            let column = toks.get(k).map_or(row_text.len() + 1, |t| t.column);
            return Err(Error::parse(
                line,
                column,
                format!("expected {k} coefficients, found {}", toks.len()),
            ));
        }
        let mut row = Vec::with_capacity(k);
        for t in &toks {
            let code = number(t, line, "an element code")?;
            if code >= field.q() as u64 {
                return Err(Error::parse(
                    line,
                    t.column,
                    format!("element code {code} is not below q = {}", field.q()),
                ));
            }
            row.push(field.elem(code as u32)?);
        }
        rows.push(row);
    }
    LinearSystem::new(&field, rows)
}

/// Writes a system in canonical form; [`parse_system`] reads it back.
pub fn format_system(l: &LinearSystem) -> String {
    let mut out = format!("{}\n{} {}\n", l.field().config_line(), l.m(), l.k());
    for row in l.rows() {
        let codes: Vec<String> = row.iter().map(|e: &Elem| e.code().to_string()).collect();
        out.push_str(&codes.join(" "));
        out.push('\n');
    }
    out
}
