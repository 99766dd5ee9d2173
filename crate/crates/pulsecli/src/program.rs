//! Line-oriented pulse-program text format.
//!
//! ```text
//! # comment
//! pulse X 2 3 angle=pi
//! pulse Y 0 2 angle=pi/2 phase=-pi/4
//! grad
//! delay 0.001
//! ```
//!
//! Keywords, axis letters and `pi` are case-insensitive. LF and CRLF are
//! accepted; output always uses LF.

use std::fmt;

use num_rational::Rational64;
use vspin::{Angle, Axis, PulseSequence, PulseSpec, SequenceEvent, Transition};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("line {line}, column {column}: {message}")]
pub struct ParseError {
    /// 1-based.
    pub line: usize,
    /// 1-based character column.
    pub column: usize,
    pub message: String,
}

/// A token with its 1-based character column.
#[derive(Clone, Copy)]
struct Token<'a> {
    text: &'a str,
    column: usize,
}

fn tokenize(line: &str) -> Vec<Token<'_>> {
    let mut out = Vec::new();
    let mut start: Option<(usize, usize)> = None;
    for (col, (byte, ch)) in line.char_indices().enumerate() {
        match (ch.is_whitespace(), start) {
            (true, Some((b, c))) => {
                out.push(Token { text: &line[b..byte], column: c + 1 });
                start = None;
            }
            (false, None) => start = Some((byte, col)),
            _ => {}
        }
    }
    if let Some((b, c)) = start {
        out.push(Token { text: &line[b..], column: c + 1 });
    }
    out
}

/// Parses an angle literal: `pi`, `-pi`, `pi/2`, `2pi`, `-3pi/4`, or decimal radians.
pub fn parse_angle(s: &str) -> Result<Angle, String> {
    let lower = s.to_ascii_lowercase();
    if let Some(idx) = lower.find("pi") {
        let (head, tail) = (&lower[..idx], &lower[idx + 2..]);
        let num: i64 = match head {
            "" | "+" => 1,
            "-" => -1,
            h => h.parse().map_err(|_| format!("malformed angle '{s}'"))?,
        };
        let den: i64 = match tail {
            "" => 1,
            t => t
                .strip_prefix('/')
                .and_then(|d| d.parse().ok())
                .ok_or_else(|| format!("malformed angle '{s}'"))?,
        };
        if den <= 0 {
            return Err(format!("angle denominator must be positive in '{s}'"));
        }
        return Ok(Angle::PiMultiple(Rational64::new(num, den)));
    }
    match s.parse::<f64>() {
        Ok(x) if x.is_finite() => Ok(Angle::Radians(x)),
        _ => Err(format!("malformed angle '{s}'")),
    }
}

fn parse_level(tok: Token<'_>, line: usize) -> Result<usize, ParseError> {
    match tok.text.parse::<usize>() {
        Ok(k) if k <= 3 => Ok(k),
        _ => Err(ParseError {
            line,
            column: tok.column,
            message: format!("level index must be 0..=3, got '{}'", tok.text),
        }),
    }
}

fn parse_pulse(tokens: &[Token<'_>], line: usize) -> Result<PulseSpec, ParseError> {
    let err = |column: usize, message: String| ParseError { line, column, message };
    let head = tokens[0];
    if tokens.len() < 5 {
        return Err(err(head.column, "expected 'pulse <X|Y> <m> <n> angle=<angle> [phase=<angle>]'".into()));
    }
    let axis = match tokens[1].text.to_ascii_uppercase().as_str() {
        "X" => Axis::X,
        "Y" => Axis::Y,
        other => return Err(err(tokens[1].column, format!("axis must be X or Y, got '{other}'"))),
    };
    let m = parse_level(tokens[2], line)?;
    let n = parse_level(tokens[3], line)?;
    if m >= n {
        return Err(err(tokens[2].column, format!("transition needs m < n, got {m} {n}")));
    }
    let transition = Transition::new(m, n).map_err(|e| err(tokens[2].column, e.to_string()))?;
    let (mut angle, mut phase) = (None, None);
    for tok in &tokens[4..] {
        let Some((key, value)) = tok.text.split_once('=') else {
            return Err(err(tok.column, format!("expected key=value, got '{}'", tok.text)));
        };
        let value_column = tok.column + key.chars().count() + 1;
        let slot = match key.to_ascii_lowercase().as_str() {
            "angle" => &mut angle,
            "phase" => &mut phase,
            other => return Err(err(tok.column, format!("unknown argument '{other}'"))),
        };
        if slot.is_some() {
            return Err(err(tok.column, format!("duplicate argument '{key}'")));
        }
        *slot = Some(parse_angle(value).map_err(|m| err(value_column, m))?);
    }
    let angle = angle.ok_or_else(|| err(head.column, "missing angle=".into()))?;
    Ok(PulseSpec { axis, transition, angle, phase: phase.unwrap_or(Angle::ZERO) })
}

/// Parses a whole program into a chronological sequence.
pub fn parse(text: &str) -> Result<PulseSequence, ParseError> {
    let mut events = Vec::new();
    for (idx, raw) in text.split('\n').enumerate() {
        let line = idx + 1;
        let raw = raw.strip_suffix('\r').unwrap_or(raw);
        let code = raw.split_once('#').map_or(raw, |(c, _)| c);
        let tokens = tokenize(code);
        let Some(&head) = tokens.first() else { continue };
        let err = |column: usize, message: String| ParseError { line, column, message };
        let event = match head.text.to_ascii_lowercase().as_str() {
            "pulse" => SequenceEvent::Pulse(parse_pulse(&tokens, line)?),
            "grad" => {
                if let Some(extra) = tokens.get(1) {
                    return Err(err(extra.column, format!("unexpected '{}' after grad", extra.text)));
                }
                SequenceEvent::Gradient
            }
            "delay" => {
                let Some(arg) = tokens.get(1) else {
                    return Err(err(head.column, "expected 'delay <seconds>'".into()));
                };
                if let Some(extra) = tokens.get(2) {
                    return Err(err(extra.column, format!("unexpected '{}' after delay", extra.text)));
                }
                match arg.text.parse::<f64>() {
                    Ok(t) if t.is_finite() && t >= 0.0 => SequenceEvent::Delay(t),
                    _ => return Err(err(arg.column, format!("delay must be a non-negative number, got '{}'", arg.text))),
                }
            }
            other => return Err(err(head.column, format!("unknown keyword '{other}'"))),
        };
        events.push(event);
    }
    Ok(PulseSequence::from_events(events).expect("delays validated while parsing"))
}

/// One event in canonical form.
pub struct EventLine<'a>(pub &'a SequenceEvent);

impl fmt::Display for EventLine<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            SequenceEvent::Pulse(p) => {
                let t = p.transition;
                write!(f, "pulse {} {} {} angle={}", p.axis, t.lower(), t.upper(), p.angle)?;
                if p.phase != Angle::ZERO {
                    write!(f, " phase={}", p.phase)?;
                }
                Ok(())
            }
            SequenceEvent::Gradient => f.write_str("grad"),
            SequenceEvent::Delay(t) => write!(f, "delay {t}"),
        }
    }
}

/// Canonical text, one event per line, LF-terminated.
pub fn serialize(seq: &PulseSequence) -> String {
    seq.events().iter().map(|e| format!("{}\n", EventLine(e))).collect()
}
