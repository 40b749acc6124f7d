//! Text form of patterns.
//!
//! Commands are whitespace-separated and applied right to left (the
//! rightmost command runs first), matching the product notation patterns are
//! usually written in:
//!
//! ```text
//! N[q]                         preparation
//! E[q,r]                       controlled-Z
//! M[q;XY;0.5]{x:sa}{z:sb,1}    measurement, plane and angle, signal sets
//! M[q;X]                       Pauli measurement (angle implied)
//! X[q]^{sa,sb}   Z[q]^{sc}     dependent corrections
//! X[q]                         unconditioned correction
//! ```
//!
//! A signal token is `s` followed by the qubit whose outcome it reads; the
//! literal `1` flips a signal unconditionally. Angles are decimal literals,
//! `pi`, or symbol names, optionally negated and optionally `+pi`.

use std::collections::BTreeMap;

use super::{Angle, Command, MeasureCmd, Pattern, PatternError, Signals};
use crate::graph::MeasLabel;
use crate::graph::VertexSet;

struct Cursor<'a> {
    text: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn err<T>(&self, message: impl Into<String>) -> Result<T, PatternError> {
        Err(PatternError::Parse {
            offset: self.pos,
            message: message.into(),
        })
    }

    fn peek(&self) -> Option<char> {
        self.text[self.pos..].chars().next()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += c.len_utf8();
        Some(c)
    }

    fn expect(&mut self, c: char) -> Result<(), PatternError> {
        if self.peek() == Some(c) {
            self.bump();
            Ok(())
        } else {
            self.err(format!("expected `{}`", c))
        }
    }

    fn ident(&mut self) -> Result<&'a str, PatternError> {
        let start = self.pos;
        while let Some(c) = self.peek() {
            if c.is_alphanumeric() || c == '_' {
                self.bump();
            } else {
                break;
            }
        }
        if self.pos == start {
            self.err("expected an identifier")
        } else {
            Ok(&self.text[start..self.pos])
        }
    }

    fn take_until(&mut self, stop: &[char]) -> &'a str {
        let start = self.pos;
        while let Some(c) = self.peek() {
            if stop.contains(&c) {
                break;
            }
            self.bump();
        }
        &self.text[start..self.pos]
    }
}

/// Commands with qubit names not yet resolved to indices.
enum RawCommand {
    Prepare(String),
    Entangle(String, String),
    Measure {
        qubit: String,
        label: MeasLabel,
        angle: Angle,
        x_signals: (Vec<String>, bool),
        z_signals: (Vec<String>, bool),
    },
    Correct {
        x: bool,
        qubit: String,
        signals: (Vec<String>, bool),
    },
}

fn parse_angle(text: &str, offset: usize) -> Result<Angle, PatternError> {
    let err = |message: String| PatternError::Parse { offset, message };
    let mut s = text.trim();
    if s.is_empty() {
        return Err(err("empty angle".into()));
    }
    let negated = s.starts_with('-');
    if negated {
        s = &s[1..];
    }
    let (base, plus_pi) = match s.strip_suffix("+pi") {
        Some(rest) => (rest, true),
        None => (s, false),
    };
    if base.is_empty() {
        return Err(err(format!("bad angle `{}`", text)));
    }
    if base == "pi" {
        let v = std::f64::consts::PI + if plus_pi { std::f64::consts::PI } else { 0.0 };
        return Ok(Angle::Num(if negated { -v } else { v }));
    }
    if base.starts_with(|c: char| c.is_ascii_digit() || c == '.') {
        let v: f64 = base
            .parse()
            .map_err(|_| err(format!("bad numeric angle `{}`", base)))?;
        let v = if negated { -v } else { v };
        return Ok(Angle::Num(v + if plus_pi { std::f64::consts::PI } else { 0.0 }));
    }
    if !base.chars().all(|c| c.is_alphanumeric() || c == '_') {
        return Err(err(format!("bad angle symbol `{}`", base)));
    }
    Ok(Angle::Sym {
        name: base.to_string(),
        negated,
        plus_pi,
    })
}

fn parse_signal_items(cur: &mut Cursor) -> Result<(Vec<String>, bool), PatternError> {
    let mut names = Vec::new();
    let mut plus_one = false;
    loop {
        match cur.peek() {
            Some('}') => break,
            Some('1') => {
                cur.bump();
                plus_one ^= true;
            }
            Some('0') => {
                cur.bump();
            }
            Some('s') => {
                cur.bump();
                names.push(cur.ident()?.to_string());
            }
            _ => return cur.err("expected a signal item (`s<qubit>`, `1` or `0`)"),
        }
        if cur.peek() == Some(',') {
            cur.bump();
        } else {
            break;
        }
    }
    Ok((names, plus_one))
}

fn parse_token(cur: &mut Cursor) -> Result<RawCommand, PatternError> {
    let head = cur.ident()?;
    match head {
        "N" => {
            cur.expect('[')?;
            let q = cur.ident()?.to_string();
            cur.expect(']')?;
            Ok(RawCommand::Prepare(q))
        }
        "E" => {
            cur.expect('[')?;
            let a = cur.ident()?.to_string();
            cur.expect(',')?;
            let b = cur.ident()?.to_string();
            cur.expect(']')?;
            if a == b {
                return cur.err("entangler endpoints must differ");
            }
            Ok(RawCommand::Entangle(a, b))
        }
        "M" => {
            cur.expect('[')?;
            let q = cur.ident()?.to_string();
            cur.expect(';')?;
            let label_text = cur.take_until(&[';', ']']).to_string();
            let label = MeasLabel::parse(&label_text)
                .ok_or_else(|| PatternError::Parse {
                    offset: cur.pos,
                    message: format!("unknown measurement label `{}`", label_text),
                })?;
            let angle = if cur.peek() == Some(';') {
                cur.bump();
                let at = cur.pos;
                let angle_text = cur.take_until(&[']']).to_string();
                if label.is_pauli() {
                    return cur.err("Pauli measurements take no angle");
                }
                parse_angle(&angle_text, at)?
            } else {
                if !label.is_pauli() {
                    return cur.err("plane measurements need an angle");
                }
                Angle::Num(label.plane_angle(0.0).1)
            };
            cur.expect(']')?;
            let mut x_signals = (Vec::new(), false);
            let mut z_signals = (Vec::new(), false);
            while cur.peek() == Some('{') {
                cur.bump();
                let kind = cur.ident()?.to_string();
                cur.expect(':')?;
                let items = parse_signal_items(cur)?;
                cur.expect('}')?;
                match kind.as_str() {
                    "x" => x_signals = items,
                    "z" => z_signals = items,
                    other => {
                        return cur.err(format!("expected `x` or `z` signal block, got `{}`", other))
                    }
                }
            }
            Ok(RawCommand::Measure {
                qubit: q,
                label,
                angle,
                x_signals,
                z_signals,
            })
        }
        "X" | "Z" => {
            let x = head == "X";
            cur.expect('[')?;
            let q = cur.ident()?.to_string();
            cur.expect(']')?;
            let signals = if cur.peek() == Some('^') {
                cur.bump();
                cur.expect('{')?;
                let items = parse_signal_items(cur)?;
                cur.expect('}')?;
                items
            } else {
                (Vec::new(), true) // bare correction: unconditioned
            };
            Ok(RawCommand::Correct {
                x,
                qubit: q,
                signals,
            })
        }
        other => cur.err(format!("unknown command `{}`", other)),
    }
}

/// Parse the text form. Qubits are indexed in order of first appearance in
/// execution order; inputs/outputs derive from which qubits are prepared
/// and measured.
pub fn parse_pattern(text: &str) -> Result<Pattern, PatternError> {
    let mut raw = Vec::new();
    let mut offset = 0;
    for chunk in text.split_whitespace() {
        // recover the true byte offset for error reporting
        offset = text[offset..].find(chunk).map(|p| p + offset).unwrap_or(offset);
        let mut cur = Cursor { text, pos: offset };
        let cmd = parse_token(&mut cur)?;
        if cur.pos != offset + chunk.len() {
            return Err(PatternError::Parse {
                offset: cur.pos,
                message: "trailing characters in command".into(),
            });
        }
        raw.push(cmd);
        offset += chunk.len();
    }
    raw.reverse(); // text is right-to-left; store execution order

    let mut names: Vec<String> = Vec::new();
    let mut index: BTreeMap<String, usize> = BTreeMap::new();
    let mut intern = |name: &String, names: &mut Vec<String>, index: &mut BTreeMap<String, usize>| {
        if let Some(&i) = index.get(name) {
            i
        } else {
            let i = names.len();
            names.push(name.clone());
            index.insert(name.clone(), i);
            i
        }
    };
    // first pass interns in execution order
    let mut commands = Vec::with_capacity(raw.len());
    for cmd in &raw {
        match cmd {
            RawCommand::Prepare(q) => {
                intern(q, &mut names, &mut index);
            }
            RawCommand::Entangle(a, b) => {
                intern(a, &mut names, &mut index);
                intern(b, &mut names, &mut index);
            }
            RawCommand::Measure { qubit, x_signals, z_signals, .. } => {
                intern(qubit, &mut names, &mut index);
                for s in x_signals.0.iter().chain(&z_signals.0) {
                    intern(s, &mut names, &mut index);
                }
            }
            RawCommand::Correct { qubit, signals, .. } => {
                intern(qubit, &mut names, &mut index);
                for s in &signals.0 {
                    intern(s, &mut names, &mut index);
                }
            }
        }
    }
    if names.len() > 64 {
        return Err(PatternError::TooManyQubits);
    }
    let resolve_signals = |items: &(Vec<String>, bool)| -> Signals {
        let mut mask = VertexSet::EMPTY;
        for s in &items.0 {
            mask.insert(index[s]);
        }
        Signals {
            mask,
            plus_one: items.1,
        }
    };
    for cmd in &raw {
        commands.push(match cmd {
            RawCommand::Prepare(q) => Command::Prepare(index[q]),
            RawCommand::Entangle(a, b) => Command::Entangle(index[a], index[b]),
            RawCommand::Measure {
                qubit,
                label,
                angle,
                x_signals,
                z_signals,
            } => Command::Measure(MeasureCmd {
                qubit: index[qubit],
                label: *label,
                angle: angle.clone(),
                x_signals: resolve_signals(x_signals),
                z_signals: resolve_signals(z_signals),
            }),
            RawCommand::Correct { x, qubit, signals } => {
                let qubit = index[qubit];
                let signals = resolve_signals(signals);
                if *x {
                    Command::CorrectX { qubit, signals }
                } else {
                    Command::CorrectZ { qubit, signals }
                }
            }
        });
    }
    Pattern::new(names, commands)
}

fn fmt_angle(a: &Angle) -> String {
    match a {
        Angle::Num(x) => format!("{:?}", x),
        Angle::Sym {
            name,
            negated,
            plus_pi,
        } => format!(
            "{}{}{}",
            if *negated { "-" } else { "" },
            name,
            if *plus_pi { "+pi" } else { "" }
        ),
    }
}

fn fmt_signal_items(p: &Pattern, s: &Signals) -> String {
    let mut items = Vec::new();
    if s.plus_one {
        items.push("1".to_string());
    }
    for q in s.mask.iter() {
        items.push(format!("s{}", p.name(q)));
    }
    if items.is_empty() {
        items.push("0".to_string());
    }
    items.join(",")
}

/// Canonical text form: single spaces, rightmost command first.
pub fn print_pattern(p: &Pattern) -> String {
    let mut parts: Vec<String> = Vec::with_capacity(p.commands().len());
    for c in p.commands().iter().rev() {
        parts.push(match c {
            Command::Prepare(q) => format!("N[{}]", p.name(*q)),
            Command::Entangle(a, b) => format!("E[{},{}]", p.name(*a), p.name(*b)),
            Command::Measure(m) => {
                let mut s = if m.label.is_pauli() {
                    format!("M[{};{}]", p.name(m.qubit), m.label)
                } else {
                    format!("M[{};{};{}]", p.name(m.qubit), m.label, fmt_angle(&m.angle))
                };
                if !m.x_signals.is_trivial() {
                    s.push_str(&format!("{{x:{}}}", fmt_signal_items(p, &m.x_signals)));
                }
                if !m.z_signals.is_trivial() {
                    s.push_str(&format!("{{z:{}}}", fmt_signal_items(p, &m.z_signals)));
                }
                s
            }
            Command::CorrectX { qubit, signals } | Command::CorrectZ { qubit, signals } => {
                let kind = if matches!(c, Command::CorrectX { .. }) { "X" } else { "Z" };
                if *signals == Signals::ALWAYS {
                    format!("{}[{}]", kind, p.name(*qubit))
                } else {
                    format!("{}[{}]^{{{}}}", kind, p.name(*qubit), fmt_signal_items(p, signals))
                }
            }
        });
    }
    parts.join(" ")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_minimal_pattern() {
        let p = parse_pattern("M[a;XY;0.0] E[a,b] N[b]").unwrap();
        assert_eq!(p.commands().len(), 3);
        assert_eq!(p.inputs(), VertexSet::singleton(p.lookup("a").unwrap()));
        assert_eq!(p.outputs(), VertexSet::singleton(p.lookup("b").unwrap()));
        assert!(p.check_runnable().runnable);
    }

    /// The displayed pattern for the three-wire path example, as printed in
    /// the source text (17 commands including the stray X[d]^{sc}).
    const PATH_PATTERN_TEXT: &str = "X[f]^{sc} X[d]^{sc} M[c;XY;γ] X[e]^{sb} Z[c]^{sb} M[b;XY;β] X[d]^{sa} Z[b]^{sa} M[a;XY;α] E[a,d] E[d,b] E[b,e] E[e,c] E[c,f] N[d] N[e] N[f]";

    #[test]
    fn parses_path_pattern_with_17_commands() {
        let p = parse_pattern(PATH_PATTERN_TEXT).unwrap();
        assert_eq!(p.commands().len(), 17);
        assert!(p.check_runnable().runnable);
        assert_eq!(p.measured_set().len(), 3);
        assert_eq!(p.outputs().len(), 3);
    }

    #[test]
    fn round_trips_canonically() {
        for text in [
            "M[a;XY;0.5] E[a,b] N[b]",
            PATH_PATTERN_TEXT,
            "M[q;X] N[q]",
            "M[q;XZ;-1.25]{x:sa,1}{z:sb} M[b;XY;alpha+pi] M[a;YZ;-th+pi] X[o] Z[o]^{sq} E[o,q] N[o] N[q] N[a] N[b]",
        ] {
            let p = parse_pattern(text).unwrap();
            let printed = print_pattern(&p);
            assert_eq!(printed, text);
            let p2 = parse_pattern(&printed).unwrap();
            assert_eq!(print_pattern(&p2), printed);
        }
    }

    #[test]
    fn correction_executing_before_its_signal_is_not_runnable() {
        // text right-to-left: the correction runs before b is measured
        let p = parse_pattern("M[b;XY;0] Z[a]^{sb}").unwrap();
        let r = p.check_runnable();
        assert!(!r.runnable);
    }

    #[test]
    fn parse_errors_carry_positions() {
        for bad in ["Q[a]", "M[a;QQ;0]", "E[a,a]", "M[a;XY]", "M[a;X;0.5]", "X[a]^{b}"] {
            assert!(matches!(
                parse_pattern(bad),
                Err(PatternError::Parse { .. })
            ), "should fail: {}", bad);
        }
    }

    #[test]
    fn double_preparation_flagged() {
        let p = parse_pattern("N[b] N[b]").unwrap();
        assert!(!p.check_runnable().runnable);
    }
}
