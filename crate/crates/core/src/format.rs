//! Line-oriented text format for box sets.
//!
//! ```text
//! # two (3,4,5) boxes
//! box A dims 3 4 5 expand 1
//! box B dims 3 4 5 expand 1
//! arrangement AB order A B
//! arrangement BA order B A
//! show AB A closed
//! show AB B expanded 6
//! show BA B closed
//! show BA A expanded 6
//! ```
//!
//! Numbers are integers, `p/q` or exact decimals. A box without `show` line
//! in some arrangement is closed there. [`render`] writes the canonical form:
//! boxes, then arrangements, then every show line grouped by arrangement,
//! innermost first.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use thiserror::Error;

use crate::model::{BoxDesign, Dims, Presentation};
use crate::nesting::{Arrangement, TrickInstance};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormatError {
    #[error("line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("line {line}: duplicate label {label}")]
    DuplicateLabel { line: usize, label: String },
    #[error("line {line}: unknown label {label}")]
    UnknownLabel { line: usize, label: String },
}

#[derive(Clone, Copy)]
struct Token<'a> {
    text: &'a str,
    column: usize,
}

fn tokenize(line: &str) -> Vec<Token<'_>> {
    let content = line.split('#').next().unwrap_or("");
    let mut tokens = Vec::new();
    let mut start = None;
    for (i, c) in content.char_indices() {
        match (c.is_whitespace(), start) {
            (true, Some(s)) => {
                tokens.push(Token {
                    text: &content[s..i],
                    column: content[..s].chars().count() + 1,
                });
                start = None;
            }
            (false, None) => start = Some(i),
            _ => {}
        }
    }
    if let Some(s) = start {
        tokens.push(Token {
            text: &content[s..],
            column: content[..s].chars().count() + 1,
        });
    }
    tokens
}

struct Cursor<'a> {
    tokens: Vec<Token<'a>>,
    pos: usize,
    line: usize,
    end_column: usize,
}

impl<'a> Cursor<'a> {
    fn error(&self, column: usize, message: impl Into<String>) -> FormatError {
        FormatError::Parse {
            line: self.line,
            column,
            message: message.into(),
        }
    }

    fn here(&self) -> usize {
        self.tokens.get(self.pos).map_or(self.end_column, |t| t.column)
    }

    fn next(&mut self, what: &str) -> Result<Token<'a>, FormatError> {
        let column = self.here();
        let token = *self
            .tokens
            .get(self.pos)
            .ok_or_else(|| self.error(column, format!("expected {what}")))?;
        self.pos += 1;
        Ok(token)
    }

    fn keyword(&mut self, word: &str) -> Result<(), FormatError> {
        let t = self.next(&format!("`{word}`"))?;
        if t.text == word {
            Ok(())
        } else {
            Err(self.error(t.column, format!("expected `{word}`, found `{}`", t.text)))
        }
    }

    fn number(&mut self) -> Result<Scalar, FormatError> {
        let t = self.next("a number")?;
        t.text.parse().map_err(|e| self.error(t.column, format!("{e}")))
    }

    fn peek(&self) -> Option<Token<'a>> {
        self.tokens.get(self.pos).copied()
    }

    fn done(&self) -> bool {
        self.pos == self.tokens.len()
    }
}

/// Parses the text format. Structural problems (duplicate or unknown
/// labels, orders that are not permutations) are errors; whether the boxes
/// actually nest is left to verification.
pub fn parse(text: &str) -> Result<TrickInstance, FormatError> {
    let mut boxes: Vec<BoxDesign> = Vec::new();
    let mut arrangements: Vec<Arrangement> = Vec::new();
    let mut shown: BTreeSet<(String, String)> = BTreeSet::new();

    for (index, raw) in text.lines().enumerate() {
        let line = index + 1;
        let tokens = tokenize(raw);
        if tokens.is_empty() {
            continue;
        }
        let end_column = raw.chars().count() + 1;
        let mut cur = Cursor {
            tokens,
            pos: 0,
            line,
            end_column,
        };
        let head = cur.next("a keyword")?;
        match head.text {
            "box" => {
                let label = cur.next("a box label")?;
                if boxes.iter().any(|b| b.label == label.text) {
                    return Err(FormatError::DuplicateLabel {
                        line,
                        label: label.text.to_string(),
                    });
                }
                cur.keyword("dims")?;
                let dims_column = cur.here();
                let mut values = Vec::new();
                while cur.peek().is_some_and(|t| t.text != "expand") {
                    values.push(cur.number()?);
                }
                if values.is_empty() {
                    return Err(cur.error(dims_column, "expected at least one side"));
                }
                let dims = Dims::new(values).map_err(|e| cur.error(dims_column, e.to_string()))?;
                let mut expand_side = None;
                if !cur.done() {
                    cur.keyword("expand")?;
                    let t = cur.next("a side index")?;
                    let side: usize = t
                        .text
                        .parse()
                        .map_err(|_| cur.error(t.column, format!("`{}` is not a side index", t.text)))?;
                    if side == 0 || side > dims.len() {
                        return Err(
                            cur.error(t.column, format!("side index {side} outside 1..={}", dims.len()))
                        );
                    }
                    expand_side = Some(side);
                }
                boxes.push(BoxDesign {
                    label: label.text.to_string(),
                    dims,
                    expand_side,
                });
            }
            "arrangement" => {
                let name = cur.next("an arrangement name")?;
                if arrangements.iter().any(|a| a.name == name.text) {
                    return Err(FormatError::DuplicateLabel {
                        line,
                        label: name.text.to_string(),
                    });
                }
                cur.keyword("order")?;
                let mut order: Vec<String> = Vec::new();
                while let Some(t) = cur.peek() {
                    cur.pos += 1;
                    if !boxes.iter().any(|b| b.label == t.text) {
                        return Err(FormatError::UnknownLabel {
                            line,
                            label: t.text.to_string(),
                        });
                    }
                    if order.iter().any(|l| l == t.text) {
                        return Err(FormatError::DuplicateLabel {
                            line,
                            label: t.text.to_string(),
                        });
                    }
                    order.push(t.text.to_string());
                }
                if order.len() != boxes.len() {
                    return Err(cur.error(
                        end_column,
                        format!("order lists {} of {} boxes", order.len(), boxes.len()),
                    ));
                }
                arrangements.push(Arrangement::new(name.text, order));
            }
            "show" => {
                let name = cur.next("an arrangement name")?;
                let arr = arrangements
                    .iter_mut()
                    .find(|a| a.name == name.text)
                    .ok_or_else(|| FormatError::UnknownLabel {
                        line,
                        label: name.text.to_string(),
                    })?;
                let label = cur.next("a box label")?;
                if !arr.order.iter().any(|l| l == label.text) {
                    return Err(FormatError::UnknownLabel {
                        line,
                        label: label.text.to_string(),
                    });
                }
                if !shown.insert((name.text.to_string(), label.text.to_string())) {
                    return Err(FormatError::DuplicateLabel {
                        line,
                        label: format!("{} in {}", label.text, name.text),
                    });
                }
                let state = cur.next("`closed` or `expanded`")?;
                let presentation = match state.text {
                    "closed" => Presentation::Closed,
                    "expanded" => Presentation::Expanded(cur.number()?),
                    other => {
                        return Err(cur.error(
                            state.column,
                            format!("expected `closed` or `expanded`, found `{other}`"),
                        ))
                    }
                };
                arr.presentation.insert(label.text.to_string(), presentation);
            }
            other => {
                return Err(cur.error(head.column, format!("unknown keyword `{other}`")));
            }
        }
        if let Some(t) = cur.peek() {
            return Err(cur.error(t.column, format!("unexpected `{}`", t.text)));
        }
    }
    Ok(TrickInstance::new(boxes, arrangements))
}

/// Canonical text of an instance. The bound flag is not part of the format.
pub fn render(instance: &TrickInstance) -> String {
    let mut out = String::new();
    for b in &instance.boxes {
        let _ = write!(out, "box {} dims", b.label);
        for s in b.dims.sides() {
            let _ = write!(out, " {s}");
        }
        if let Some(side) = b.expand_side {
            let _ = write!(out, " expand {side}");
        }
        out.push('\n');
    }
    for arr in &instance.arrangements {
        let _ = writeln!(out, "arrangement {} order {}", arr.name, arr.order.join(" "));
    }
    for arr in &instance.arrangements {
        for label in &arr.order {
            match arr.presentation.get(label) {
                Some(Presentation::Expanded(e)) => {
                    let _ = writeln!(out, "show {} {label} expanded {e}", arr.name);
                }
                _ => {
                    let _ = writeln!(out, "show {} {label} closed", arr.name);
                }
            }
        }
    }
    out
}
