use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};
use std::fmt::Write as _;

use crate::alphabet::{Alphabet, Symbol};
use crate::error::{Error, Result};
use crate::sa::{Action, InputLabel, SetAutomaton};

/// One line of the transition function.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct TmMove {
    pub write: bool,
    pub next: usize,
    /// -1, 0 or +1.
    pub shift: i8,
}

/// Deterministic machine over the tape alphabet {0, 1}; 0 is the blank.
/// Accepting states halt. A missing line halts without accepting.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TmDescription {
    pub states: Vec<String>,
    pub start: usize,
    pub accepting: Vec<bool>,
    /// Keyed by (read bit, state).
    pub delta: BTreeMap<(bool, usize), TmMove>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TmOutcome {
    Accept,
    Reject,
    Loops,
}

impl TmDescription {
    /// Text format, `;` starts a comment:
    ///
    /// ```text
    /// states: q0 q1 acc
    /// start: q0
    /// accept: acc
    /// 0 q0 1 q1 +1      ; read, state, write, next state, move (-1|0|+1|L|S|R)
    /// ```
    pub fn parse(text: &str) -> Result<TmDescription> {
        let mut states: Option<Vec<String>> = None;
        let mut start: Option<String> = None;
        let mut accept: Vec<String> = Vec::new();
        let mut lines = Vec::new();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split(';').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix("states:") {
                states = Some(rest.split_whitespace().map(str::to_string).collect());
            } else if let Some(rest) = line.strip_prefix("start:") {
                start = Some(rest.trim().to_string());
            } else if let Some(rest) = line.strip_prefix("accept:") {
                accept.extend(rest.split_whitespace().map(str::to_string));
            } else {
                lines.push((n + 1, line));
            }
        }
        let states = states.ok_or_else(|| Error::parse(0, "missing `states:` line"))?;
        let find = |name: &str, n: usize| {
            states
                .iter()
                .position(|s| s == name)
                .ok_or_else(|| Error::parse(n, format!("unknown state `{name}`")))
        };
        let start = find(
            start
                .as_deref()
                .ok_or_else(|| Error::parse(0, "missing `start:` line"))?,
            0,
        )?;
        let mut accepting = vec![false; states.len()];
        for a in &accept {
            accepting[find(a, 0)?] = true;
        }
        let bit = |t: &str, n: usize| match t {
            "0" => Ok(false),
            "1" => Ok(true),
            _ => Err(Error::parse(n, format!("expected a tape bit, got `{t}`"))),
        };
        let mut delta = BTreeMap::new();
        for (n, line) in lines {
            let f: Vec<&str> = line.split_whitespace().collect();
            if f.len() != 5 {
                return Err(Error::parse(n, "expected `SYM STATE NEWSYM NEWSTATE MOVE`"));
            }
            let shift = match f[4] {
                "-1" | "L" => -1,
                "0" | "S" => 0,
                "+1" | "1" | "R" => 1,
                m => return Err(Error::parse(n, format!("bad move `{m}`"))),
            };
            let key = (bit(f[0], n)?, find(f[1], n)?);
            let mv = TmMove {
                write: bit(f[2], n)?,
                next: find(f[3], n)?,
                shift,
            };
            if delta.insert(key, mv).is_some() {
                return Err(Error::parse(n, "duplicate transition"));
            }
        }
        Ok(TmDescription {
            states,
            start,
            accepting,
            delta,
        })
    }

    pub fn to_text(&self) -> String {
        let mut out = format!(
            "states: {}\nstart: {}\naccept:",
            self.states.join(" "),
            self.states[self.start]
        );
        for (q, _) in self.accepting.iter().enumerate().filter(|(_, &a)| a) {
            out.push(' ');
            out.push_str(&self.states[q]);
        }
        out.push('\n');
        for (&(a, q), m) in &self.delta {
            let shift = match m.shift {
                -1 => "-1",
                0 => "0",
                _ => "+1",
            };
            let _ = writeln!(
                out,
                "{} {} {} {} {}",
                a as u8, self.states[q], m.write as u8, self.states[m.next], shift
            );
        }
        out
    }
}

/// Direct simulation on cells `1..=2n`, head on cell `n`, blank tape.
/// Leaving the tape rejects.
pub fn simulate_tm(tm: &TmDescription, n: usize) -> TmOutcome {
    let cells = 2 * n;
    let mut tape = vec![false; cells + 1];
    let mut head = n;
    let mut q = tm.start;
    let mut seen = HashSet::new();
    loop {
        if tm.accepting[q] {
            return TmOutcome::Accept;
        }
        if !seen.insert((head, q, tape.clone())) {
            return TmOutcome::Loops;
        }
        let Some(m) = tm.delta.get(&(tape[head], q)) else {
            return TmOutcome::Reject;
        };
        tape[head] = m.write;
        q = m.next;
        let h = head as i64 + m.shift as i64;
        if h < 1 || h > cells as i64 {
            return TmOutcome::Reject;
        }
        head = h as usize;
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum Phase {
    // writing the current cell's code, then in/out
    Store,
    // applying the head move
    Move,
    // writing the new cell's code, then test
    Probe,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
struct Node {
    head: usize,
    read: bool,
    state: usize,
    count: usize,
    phase: Phase,
}

/// Deterministic automaton with only ε-rules that accepts the empty word iff
/// `tm` accepts from a blank tape of `2n` cells with the head on cell `n`.
///
/// Cell `i` holds 1 iff `#^i` is in the set. A step writes the head cell's
/// code and stores the new bit by `in` or `out`, moves the head, writes the
/// new cell's code and reads it back with `test`.
pub fn tm_to_unary_dsa(tm: &TmDescription, n: usize) -> Result<SetAutomaton> {
    if n == 0 {
        return Err(Error::Invalid("the cell budget must be at least 1".into()));
    }
    let cells = 2 * n;
    let input = Alphabet::new(["x"])?;
    let work = Alphabet::new(["#"])?;
    let hash = Symbol(0);
    let mut sa = SetAutomaton::new(input, work, false);
    let mut index: HashMap<Node, usize> = HashMap::new();
    let mut queue = VecDeque::new();
    let mut intern = |sa: &mut SetAutomaton, queue: &mut VecDeque<Node>, v: Node| {
        *index.entry(v).or_insert_with(|| {
            let phase = match v.phase {
                Phase::Store => "s",
                Phase::Move => "m",
                Phase::Probe => "p",
            };
            let id = sa.add_state(format!(
                "{}/{}{}/{}/{phase}",
                v.head, v.read as u8, tm.states[v.state], v.count
            ));
            let start_of_step = v.phase == Phase::Store && v.count == 0;
            sa.set_accepting(id, start_of_step && tm.accepting[v.state]);
            queue.push_back(v);
            id
        })
    };
    let first = Node {
        head: n,
        read: false,
        state: tm.start,
        count: 0,
        phase: Phase::Store,
    };
    let s = intern(&mut sa, &mut queue, first);
    sa.set_start(s);
    while let Some(v) = queue.pop_front() {
        let id = intern(&mut sa, &mut queue, v);
        if sa.is_accepting(id) {
            continue;
        }
        let Some(&m) = tm.delta.get(&(v.read, v.state)) else {
            continue;
        };
        let action = match v.phase {
            Phase::Store | Phase::Probe if v.count < v.head => Action::Write(
                vec![hash],
                intern(
                    &mut sa,
                    &mut queue,
                    Node {
                        count: v.count + 1,
                        ..v
                    },
                ),
            ),
            Phase::Store => {
                let next = intern(
                    &mut sa,
                    &mut queue,
                    Node {
                        count: 0,
                        phase: Phase::Move,
                        ..v
                    },
                );
                if m.write {
                    Action::In(next)
                } else {
                    Action::Out(next)
                }
            }
            Phase::Move => {
                let h = v.head as i64 + m.shift as i64;
                if h < 1 || h > cells as i64 {
                    continue;
                }
                let probe = Node {
                    head: h as usize,
                    phase: Phase::Probe,
                    ..v
                };
                Action::Write(vec![], intern(&mut sa, &mut queue, probe))
            }
            Phase::Probe => {
                let after = |read: bool| Node {
                    head: v.head,
                    read,
                    state: m.next,
                    count: 0,
                    phase: Phase::Store,
                };
                Action::Test {
                    pos: intern(&mut sa, &mut queue, after(true)),
                    neg: intern(&mut sa, &mut queue, after(false)),
                }
            }
        };
        sa.add_rule(id, InputLabel::Eps, action)?;
    }
    Ok(sa)
}
