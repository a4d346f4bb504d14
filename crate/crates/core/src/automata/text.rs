//! Line-oriented text formats for NFAs and transducers.
//!
//! ```text
//! ; comments start with a semicolon
//! alphabet: a b
//! state q0 q1
//! initial q0
//! accept q1
//! trans q0 a q1
//! trans q1 eps q0
//! ```
//!
//! Transducers declare `input:` and `output:` alphabets instead and write
//! transitions as `trans SRC READ / WRITE DST`, with `-` for the empty word.
//! READ is at most one symbol; longer WRITE words are split through fresh
//! states on load.

use std::collections::HashMap;
use std::fmt::Write as _;

use crate::alphabet::Alphabet;
use crate::automata::fst::Fst;
use crate::automata::nfa::Nfa;
use crate::error::{Error, Result};

struct Line<'a> {
    number: usize,
    keyword: &'a str,
    args: Vec<&'a str>,
}

fn lines(text: &str) -> impl Iterator<Item = Line<'_>> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let content = raw.split(';').next().unwrap_or("").trim();
        if content.is_empty() {
            return None;
        }
        let mut parts = content.split_whitespace();
        let keyword = parts.next()?.trim_end_matches(':');
        Some(Line {
            number: i + 1,
            keyword,
            args: parts.collect(),
        })
    })
}

#[derive(Default)]
struct States {
    index: HashMap<String, usize>,
}

impl States {
    fn lookup(&self, line: usize, name: &str) -> Result<usize> {
        self.index
            .get(name)
            .copied()
            .ok_or_else(|| Error::parse(line, format!("undeclared state `{name}`")))
    }
}

pub fn parse_nfa(text: &str) -> Result<Nfa> {
    let mut alphabet: Option<Alphabet> = None;
    let mut nfa: Option<Nfa> = None;
    let mut states = States::default();
    for line in lines(text) {
        let n = line.number;
        match line.keyword {
            "alphabet" => {
                if alphabet.is_some() {
                    return Err(Error::parse(n, "duplicate alphabet line"));
                }
                let al = Alphabet::new(line.args.iter().copied()).map_err(|e| Error::parse(n, e.to_string()))?;
                nfa = Some(Nfa::new(al.clone()));
                alphabet = Some(al);
            }
            kw => {
                let nfa = nfa
                    .as_mut()
                    .ok_or_else(|| Error::parse(n, "`alphabet:` must come first"))?;
                match kw {
                    "state" => {
                        for &name in &line.args {
                            if states.index.contains_key(name) {
                                return Err(Error::parse(n, format!("duplicate state `{name}`")));
                            }
                            let id = nfa.add_named_state(name);
                            states.index.insert(name.to_string(), id);
                        }
                    }
                    "initial" => {
                        for &name in &line.args {
                            nfa.add_initial(states.lookup(n, name)?);
                        }
                    }
                    "accept" => {
                        for &name in &line.args {
                            nfa.set_accepting(states.lookup(n, name)?, true);
                        }
                    }
                    "trans" => {
                        let [src, label, dst] = line.args[..] else {
                            return Err(Error::parse(n, "expected `trans SRC LABEL DST`"));
                        };
                        let src = states.lookup(n, src)?;
                        let dst = states.lookup(n, dst)?;
                        let label = if label == "eps" {
                            None
                        } else {
                            Some(
                                nfa.alphabet()
                                    .symbol(label)
                                    .ok_or_else(|| Error::parse(n, format!("symbol `{label}` not in alphabet")))?,
                            )
                        };
                        nfa.add_transition(src, label, dst);
                    }
                    other => return Err(Error::parse(n, format!("unknown keyword `{other}`"))),
                }
            }
        }
    }
    nfa.ok_or_else(|| Error::parse(0, "missing `alphabet:` line"))
}

pub fn write_nfa(nfa: &Nfa) -> String {
    let mut out = String::new();
    writeln!(out, "alphabet: {}", nfa.alphabet().names().join(" ")).unwrap();
    if nfa.num_states() > 0 {
        writeln!(out, "state {}", nfa.state_names().join(" ")).unwrap();
    }
    let init: Vec<&str> = nfa.initial().iter().map(|&q| nfa.state_name(q)).collect();
    if !init.is_empty() {
        writeln!(out, "initial {}", init.join(" ")).unwrap();
    }
    let acc: Vec<&str> = nfa.accepting_states().map(|q| nfa.state_name(q)).collect();
    if !acc.is_empty() {
        writeln!(out, "accept {}", acc.join(" ")).unwrap();
    }
    for (q, l, d) in nfa.transitions() {
        let label = l.map_or("eps", |s| nfa.alphabet().name(s));
        writeln!(out, "trans {} {} {}", nfa.state_name(q), label, nfa.state_name(d)).unwrap();
    }
    out
}

pub fn parse_fst(text: &str) -> Result<Fst> {
    let mut input: Option<Alphabet> = None;
    let mut output: Option<Alphabet> = None;
    let mut fst: Option<Fst> = None;
    let mut states = States::default();
    let mut initial_set = false;
    for line in lines(text) {
        let n = line.number;
        match line.keyword {
            "input" | "output" => {
                let al = Alphabet::new(line.args.iter().copied()).map_err(|e| Error::parse(n, e.to_string()))?;
                let slot = if line.keyword == "input" {
                    &mut input
                } else {
                    &mut output
                };
                if slot.is_some() || fst.is_some() {
                    return Err(Error::parse(n, "alphabets must be declared once, before states"));
                }
                *slot = Some(al);
            }
            kw => {
                if fst.is_none() {
                    let (Some(i), Some(o)) = (&input, &output) else {
                        return Err(Error::parse(n, "`input:` and `output:` must come first"));
                    };
                    fst = Some(Fst::new(i.clone(), o.clone()));
                }
                let t = fst.as_mut().unwrap();
                match kw {
                    "state" => {
                        for &name in &line.args {
                            if states.index.contains_key(name) {
                                return Err(Error::parse(n, format!("duplicate state `{name}`")));
                            }
                            // the constructor's placeholder state is reused for the first name
                            let id = if states.index.is_empty() {
                                t.rename_state(0, name);
                                0
                            } else {
                                t.add_named_state(name)
                            };
                            states.index.insert(name.to_string(), id);
                        }
                    }
                    "initial" => {
                        let [name] = line.args[..] else {
                            return Err(Error::parse(n, "a transducer has exactly one initial state"));
                        };
                        if initial_set {
                            return Err(Error::parse(n, "duplicate initial state"));
                        }
                        initial_set = true;
                        t.set_initial(states.lookup(n, name)?);
                    }
                    "accept" => {
                        for &name in &line.args {
                            t.set_accepting(states.lookup(n, name)?, true);
                        }
                    }
                    "trans" => {
                        let [src, read, "/", write, dst] = line.args[..] else {
                            return Err(Error::parse(n, "expected `trans SRC READ / WRITE DST`"));
                        };
                        let src = states.lookup(n, src)?;
                        let dst = states.lookup(n, dst)?;
                        let read = t
                            .input_alphabet()
                            .parse_word(read)
                            .map_err(|e| Error::parse(n, e.to_string()))?;
                        if read.len() > 1 {
                            return Err(Error::parse(n, "a transition reads at most one symbol"));
                        }
                        let write = t
                            .output_alphabet()
                            .parse_word(write)
                            .map_err(|e| Error::parse(n, e.to_string()))?;
                        t.add_transition(src, &read, &write, dst);
                    }
                    other => return Err(Error::parse(n, format!("unknown keyword `{other}`"))),
                }
            }
        }
    }
    if states.index.is_empty() {
        return Err(Error::parse(0, "transducer declares no states"));
    }
    if !initial_set {
        return Err(Error::parse(0, "missing `initial` line"));
    }
    Ok(fst.unwrap())
}

pub fn write_fst(t: &Fst) -> String {
    let mut out = String::new();
    writeln!(out, "input: {}", t.input_alphabet().names().join(" ")).unwrap();
    writeln!(out, "output: {}", t.output_alphabet().names().join(" ")).unwrap();
    let names: Vec<&str> = (0..t.num_states()).map(|q| t.state_name(q)).collect();
    writeln!(out, "state {}", names.join(" ")).unwrap();
    writeln!(out, "initial {}", t.state_name(t.initial())).unwrap();
    let acc: Vec<&str> = (0..t.num_states())
        .filter(|&q| t.is_accepting(q))
        .map(|q| t.state_name(q))
        .collect();
    if !acc.is_empty() {
        writeln!(out, "accept {}", acc.join(" ")).unwrap();
    }
    for (q, tr) in t.transitions() {
        let read = tr
            .read
            .map_or("-".to_string(), |s| t.input_alphabet().format_word(&[s]));
        let write = tr
            .write
            .map_or("-".to_string(), |s| t.output_alphabet().format_word(&[s]));
        writeln!(
            out,
            "trans {} {} / {} {}",
            t.state_name(q),
            read,
            write,
            t.state_name(tr.dst)
        )
        .unwrap();
    }
    out
}
