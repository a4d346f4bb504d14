//! Text format for set automata.
//!
//! ```text
//! ; Per_1
//! input: 0 #
//! work: 0
//! endmarker: yes
//! start: c0
//! accept: f
//! c0 0 write 0 c0
//! c0 # in p
//! p end write - f
//! ```
//!
//! Rules are `SRC SYM write WORD DST`, `SRC SYM in DST`, `SRC SYM out DST`
//! and `SRC SYM test DST+ DST-`, where SYM is an input symbol, `eps` or
//! `end`, and WORD is a work word or `-`. States are declared by first use;
//! an optional `states:` line fixes their order up front.

use std::collections::HashMap;
use std::fmt::Write as _;

use crate::alphabet::Alphabet;
use crate::error::{Error, Result};
use crate::sa::{Action, InputLabel, Rule, SetAutomaton};

struct Builder {
    sa: SetAutomaton,
    index: HashMap<String, usize>,
}

impl Builder {
    fn state(&mut self, name: &str) -> usize {
        if let Some(&q) = self.index.get(name) {
            return q;
        }
        let q = self.sa.add_state(name);
        self.index.insert(name.to_string(), q);
        q
    }
}

pub fn parse_sa(text: &str) -> Result<SetAutomaton> {
    let mut input: Option<Alphabet> = None;
    let mut work: Option<Alphabet> = None;
    let mut endmarker: Option<bool> = None;
    let mut builder: Option<Builder> = None;
    let mut start: Option<(usize, String)> = None;
    let mut accept: Vec<(usize, String)> = Vec::new();

    for (i, raw) in text.lines().enumerate() {
        let n = i + 1;
        let line = raw.split(';').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if let Some((key, value)) = line.split_once(':') {
            let key = key.trim();
            if !key.contains(char::is_whitespace) {
                let args: Vec<&str> = value.split_whitespace().collect();
                let al =
                    |args: &[&str]| Alphabet::new(args.iter().copied()).map_err(|e| Error::parse(n, e.to_string()));
                match key {
                    "input" | "work" | "endmarker" if builder.is_some() => {
                        return Err(Error::parse(n, format!("`{key}:` must precede states and rules")));
                    }
                    "input" => input = Some(al(&args)?),
                    "work" => work = Some(al(&args)?),
                    "endmarker" => {
                        endmarker = Some(match args[..] {
                            ["yes"] => true,
                            ["no"] => false,
                            _ => return Err(Error::parse(n, "expected `endmarker: yes|no`")),
                        })
                    }
                    "start" => {
                        let [name] = args[..] else {
                            return Err(Error::parse(n, "expected exactly one start state"));
                        };
                        start = Some((n, name.to_string()));
                    }
                    "accept" => accept.extend(args.iter().map(|a| (n, a.to_string()))),
                    "states" => {
                        let b = ensure_builder(&mut builder, &input, &work, endmarker, n)?;
                        for a in args {
                            if b.index.contains_key(a) {
                                return Err(Error::parse(n, format!("duplicate state `{a}`")));
                            }
                            b.state(a);
                        }
                    }
                    other => return Err(Error::parse(n, format!("unknown header `{other}:`"))),
                }
                continue;
            }
        }
        let b = ensure_builder(&mut builder, &input, &work, endmarker, n)?;
        let tokens: Vec<&str> = line.split_whitespace().collect();
        if tokens.len() < 4 {
            return Err(Error::parse(n, "rule needs at least `SRC SYM OP DST`"));
        }
        let label = match tokens[1] {
            "eps" => InputLabel::Eps,
            "end" => InputLabel::End,
            s => InputLabel::Sym(
                b.sa.input_alphabet()
                    .symbol(s)
                    .ok_or_else(|| Error::parse(n, format!("unknown input symbol `{s}`")))?,
            ),
        };
        let src = b.state(tokens[0]);
        let action = match (tokens[2], &tokens[3..]) {
            ("write", [word, dst]) => {
                let w =
                    b.sa.work_alphabet()
                        .parse_word(word)
                        .map_err(|e| Error::parse(n, e.to_string()))?;
                Action::Write(w, b.state(dst))
            }
            ("in", [dst]) => Action::In(b.state(dst)),
            ("out", [dst]) => Action::Out(b.state(dst)),
            ("test", [p, m]) => Action::Test {
                pos: b.state(p),
                neg: b.state(m),
            },
            (op, _) => return Err(Error::parse(n, format!("malformed `{op}` rule"))),
        };
        b.sa.add_rule(src, label, action)
            .map_err(|e| Error::parse(n, e.to_string()))?;
    }

    let b = ensure_builder(&mut builder, &input, &work, endmarker, 0)?;
    let Some((_, start)) = start else {
        return Err(Error::parse(0, "missing `start:` line"));
    };
    let s = b.state(&start);
    b.sa.set_start(s);
    for (_, a) in accept {
        let q = b.state(&a);
        b.sa.set_accepting(q, true);
    }
    Ok(builder.unwrap().sa)
}

fn ensure_builder<'a>(
    builder: &'a mut Option<Builder>,
    input: &Option<Alphabet>,
    work: &Option<Alphabet>,
    endmarker: Option<bool>,
    line: usize,
) -> Result<&'a mut Builder> {
    if builder.is_none() {
        let (Some(i), Some(w)) = (input, work) else {
            return Err(Error::parse(line, "`input:` and `work:` must come first"));
        };
        *builder = Some(Builder {
            sa: SetAutomaton::new(i.clone(), w.clone(), endmarker.unwrap_or(false)),
            index: HashMap::new(),
        });
    }
    Ok(builder.as_mut().unwrap())
}

/// One rule in the line syntax of the text format.
pub fn format_rule(sa: &SetAutomaton, r: &Rule) -> String {
    let src = sa.state_name(r.src);
    let label = sa.label_name(r.label);
    let body = match &r.action {
        Action::Write(w, d) => format!("write {} {}", sa.work_alphabet().format_word(w), sa.state_name(*d)),
        Action::In(d) => format!("in {}", sa.state_name(*d)),
        Action::Out(d) => format!("out {}", sa.state_name(*d)),
        Action::Test { pos, neg } => format!("test {} {}", sa.state_name(*pos), sa.state_name(*neg)),
    };
    format!("{src} {label} {body}")
}

pub fn write_sa(sa: &SetAutomaton) -> String {
    let mut out = String::new();
    writeln!(out, "input: {}", sa.input_alphabet().names().join(" ")).unwrap();
    writeln!(out, "work: {}", sa.work_alphabet().names().join(" ")).unwrap();
    writeln!(out, "endmarker: {}", if sa.uses_endmarker() { "yes" } else { "no" }).unwrap();
    if sa.num_states() > 0 {
        writeln!(out, "states: {}", sa.state_names().join(" ")).unwrap();
        writeln!(out, "start: {}", sa.state_name(sa.start())).unwrap();
    }
    let acc: Vec<&str> = sa.accepting_states().map(|q| sa.state_name(q)).collect();
    writeln!(out, "accept: {}", acc.join(" ")).unwrap();
    for r in sa.rules() {
        writeln!(out, "{}", format_rule(sa, r)).unwrap();
    }
    out
}
