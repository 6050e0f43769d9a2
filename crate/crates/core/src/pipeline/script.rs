//! Line-oriented pipeline scripts.
//!
//! ```text
//! # comment
//! blur radius=150 as blurred
//! autocontrast low=1 high=1 as enhanced
//! sobel
//! levels black=0 white=max gamma=0.5 as edges
//! invert
//! autocontrast low=1 high=1 as inverted_edges
//! overlay opacity=0.09 with enhanced
//! ```
//!
//! One step per line: an operation name, `key=value` parameters, an
//! optional `as <label>` and, for `overlay`, a mandatory `with <label>`
//! naming the base layer. Lines and columns in errors are 1-based.

use std::collections::{HashMap, HashSet};

use crate::error::{Error, Result};

use super::{BlurSize, Operation, PipelineSpec, Step, WhitePoint, OPERATIONS};

struct Token<'a> {
    text: &'a str,
    column: usize,
}

fn tokenize(line: &str) -> Vec<Token<'_>> {
    let body = line.split('#').next().unwrap_or("");
    let mut tokens = Vec::new();
    let mut start = None;
    for (i, c) in body.char_indices() {
        match (c.is_whitespace(), start) {
            (true, Some(s)) => {
                tokens.push(Token {
                    text: &body[s..i],
                    column: s + 1,
                });
                start = None;
            }
            (false, None) => start = Some(i),
            _ => {}
        }
    }
    if let Some(s) = start {
        tokens.push(Token {
            text: &body[s..],
            column: s + 1,
        });
    }
    tokens
}

fn valid_label(name: &str) -> bool {
    !name.is_empty()
        && name
            .chars()
            .all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-')
}

struct Param<'a> {
    value: &'a str,
    key_column: usize,
    column: usize,
}

struct LineCtx<'a> {
    line: usize,
    op: &'a str,
    op_column: usize,
    params: HashMap<&'a str, Param<'a>>,
}

impl<'a> LineCtx<'a> {
    fn err(&self, column: usize, reason: impl Into<String>) -> Error {
        Error::Validation {
            line: self.line,
            column,
            reason: reason.into(),
        }
    }

    fn take(&mut self, key: &str) -> Option<Param<'a>> {
        self.params.remove(key)
    }

    fn real(&mut self, key: &str, default: Option<f64>) -> Result<f64> {
        match self.take(key) {
            Some(p) => p
                .value
                .parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| {
                    self.err(
                        p.column,
                        format!(
                            "bad value for '{key}': '{}' is not a finite number",
                            p.value
                        ),
                    )
                }),
            None => default.ok_or_else(|| {
                self.err(
                    self.op_column,
                    format!("'{}' requires parameter '{key}'", self.op),
                )
            }),
        }
    }

    fn count(&mut self, key: &str, default: Option<usize>) -> Result<usize> {
        match self.take(key) {
            Some(p) => p.value.parse::<usize>().map_err(|_| {
                self.err(
                    p.column,
                    format!(
                        "bad value for '{key}': '{}' is not a non-negative integer",
                        p.value
                    ),
                )
            }),
            None => default.ok_or_else(|| {
                self.err(
                    self.op_column,
                    format!("'{}' requires parameter '{key}'", self.op),
                )
            }),
        }
    }

    fn finish(self) -> Result<()> {
        match self.params.iter().min_by_key(|(_, p)| p.key_column) {
            Some((key, p)) => Err(self.err(
                p.key_column,
                format!("unknown parameter '{key}' for '{}'", self.op),
            )),
            None => Ok(()),
        }
    }
}

/// Parses and validates a pipeline script.
pub fn parse_pipeline_script(text: &str) -> Result<PipelineSpec> {
    let mut steps = Vec::new();
    let mut labels: HashSet<String> = HashSet::new();

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let tokens = tokenize(raw);
        let Some((head, rest)) = tokens.split_first() else {
            continue;
        };
        let err = |column: usize, reason: String| Error::Validation {
            line,
            column,
            reason,
        };
        if !OPERATIONS.contains(&head.text) {
            return Err(err(head.column, format!("unknown op '{}'", head.text)));
        }

        let mut ctx = LineCtx {
            line,
            op: head.text,
            op_column: head.column,
            params: HashMap::new(),
        };
        let mut label = None;
        let mut base: Option<(&str, usize)> = None;
        let mut iter = rest.iter();
        while let Some(tok) = iter.next() {
            match tok.text {
                kw @ ("as" | "with") => {
                    let name = iter.next().ok_or_else(|| {
                        err(tok.column, format!("'{kw}' must be followed by a label"))
                    })?;
                    if !valid_label(name.text) {
                        return Err(err(
                            name.column,
                            format!(
                                "invalid label '{}': use letters, digits, '_' or '-'",
                                name.text
                            ),
                        ));
                    }
                    let slot = if kw == "as" { &mut label } else { &mut base };
                    if slot.is_some() {
                        return Err(err(tok.column, format!("'{kw}' given twice")));
                    }
                    *slot = Some((name.text, name.column));
                }
                t => {
                    let Some((key, value)) = t.split_once('=') else {
                        return Err(err(tok.column, format!("expected key=value, found '{t}'")));
                    };
                    if key.is_empty() || value.is_empty() {
                        return Err(err(tok.column, format!("expected key=value, found '{t}'")));
                    }
                    let value_column = tok.column + key.len() + 1;
                    if ctx
                        .params
                        .insert(
                            key,
                            Param {
                                value,
                                key_column: tok.column,
                                column: value_column,
                            },
                        )
                        .is_some()
                    {
                        return Err(err(tok.column, format!("duplicate parameter '{key}'")));
                    }
                }
            }
        }

        if let Some((_, column)) = base.filter(|_| head.text != "overlay") {
            return Err(err(
                column,
                format!("'with' is only valid on overlay, not '{}'", head.text),
            ));
        }

        let op = match head.text {
            "blur" => {
                let radius = ctx.take("radius");
                let sigma = ctx.take("sigma");
                match (radius, sigma) {
                    (Some(r), None) => {
                        ctx.params.insert("radius", r);
                        Operation::Blur(BlurSize::Radius(ctx.count("radius", None)?))
                    }
                    (None, Some(s)) => {
                        ctx.params.insert("sigma", s);
                        Operation::Blur(BlurSize::Sigma(ctx.real("sigma", None)?))
                    }
                    (Some(_), Some(s)) => {
                        return Err(err(
                            s.key_column,
                            "blur takes either 'radius' or 'sigma', not both".into(),
                        ))
                    }
                    (None, None) => {
                        return Err(err(
                            head.column,
                            "'blur' requires parameter 'radius' or 'sigma'".into(),
                        ))
                    }
                }
            }
            "levels" => {
                let black = ctx.real("black", Some(0.0))?;
                let white = match ctx.take("white") {
                    Some(p) if p.value == "max" => WhitePoint::Peak,
                    Some(p) => {
                        ctx.params.insert("white", p);
                        WhitePoint::Fixed(ctx.real("white", None)?)
                    }
                    None => WhitePoint::Fixed(1.0),
                };
                let gamma = ctx.real("gamma", Some(1.0))?;
                Operation::Levels {
                    black,
                    white,
                    gamma,
                }
            }
            "autocontrast" => Operation::Autocontrast {
                low: ctx.real("low", Some(1.0))?,
                high: ctx.real("high", Some(1.0))?,
            },
            "sobel" => Operation::Sobel,
            "invert" => Operation::Invert,
            "clamp" => Operation::Clamp,
            "unsharp" => Operation::Unsharp {
                radius: ctx.count("radius", None)?,
                amount: ctx.real("amount", Some(1.0))?,
            },
            "overlay" => {
                let opacity = ctx.real("opacity", Some(0.09))?;
                let Some((name, column)) = base else {
                    return Err(err(head.column, "overlay requires 'with <label>'".into()));
                };
                if !labels.contains(name) {
                    return Err(err(
                        column,
                        format!("overlay references unknown label '{name}'"),
                    ));
                }
                Operation::Overlay {
                    opacity,
                    base: name.to_string(),
                }
            }
            _ => unreachable!("checked against OPERATIONS"),
        };
        ctx.finish()?;

        if let Some((name, _)) = label {
            labels.insert(name.to_string());
        }
        steps.push(Step {
            op,
            label: label.map(|(n, _)| n.to_string()),
            line,
            column: head.column,
        });
    }
    PipelineSpec::new(steps)
}
