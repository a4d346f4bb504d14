use std::collections::{BTreeSet, HashSet, VecDeque};

use crate::alphabet::{Alphabet, Symbol, Word};
use crate::error::{Error, Result};
use crate::protocol::{Op, Protocol};
use crate::sa::config::{step, Configuration};
use crate::sa::{Action, SetAutomaton};

/// One executed rule of a run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceStep {
    pub rule: usize,
    pub test_result: Option<bool>,
    /// The query word and operation, for query rules.
    pub query: Option<(Word, Op)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trace {
    pub work: Alphabet,
    pub steps: Vec<TraceStep>,
    pub accepted: bool,
}

impl Trace {
    fn new(work: Alphabet) -> Self {
        Trace {
            work,
            steps: Vec::new(),
            accepted: false,
        }
    }

    fn record(&mut self, sa: &SetAutomaton, before: &Configuration, rule: usize, test_result: Option<bool>) {
        let op = match (&sa.rule(rule).action, test_result) {
            (Action::Write(..), _) => None,
            (Action::In(_), _) => Some(Op::In),
            (Action::Out(_), _) => Some(Op::Out),
            (Action::Test { .. }, Some(true)) => Some(Op::TestPos),
            (Action::Test { .. }, _) => Some(Op::TestNeg),
        };
        self.steps.push(TraceStep {
            rule,
            test_result,
            query: op.map(|op| (before.tape.clone(), op)),
        });
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DsaOutcome {
    Accept,
    Reject,
    BudgetExceeded,
}

#[derive(Debug, Clone)]
pub struct DsaRun {
    pub outcome: DsaOutcome,
    pub trace: Trace,
    pub final_config: Configuration,
}

/// Step budget under which a DSA without ε-loops always halts on `w`.
pub fn halting_budget(sa: &SetAutomaton, w_len: usize) -> usize {
    let n = sa.num_states();
    (w_len + 1) * sa.max_write_len().max(1) * n + n
}

/// Simulates the unique run of a deterministic automaton.
///
/// The run accepts as soon as it reaches an accepting configuration. It
/// rejects when stuck or when a configuration repeats. Repetition is
/// detected exactly without storing every configuration: a cycle either
/// contains a query, and then the configuration right after that query
/// repeats with an empty tape, or it is query-free, and then a state repeats
/// at the same input position with no query in between.
pub fn run_dsa(sa: &SetAutomaton, w: &[Symbol], budget: usize) -> Result<DsaRun> {
    sa.check_deterministic()?;
    let mut c = Configuration::initial(sa, w)?;
    let mut trace = Trace::new(sa.work_alphabet().clone());
    let mut after_query: HashSet<(usize, BTreeSet<Word>)> = HashSet::new();
    let mut segment: HashSet<usize> = HashSet::new();
    let mut steps = 0usize;
    let outcome = loop {
        if c.is_accepting(sa) {
            trace.accepted = true;
            break DsaOutcome::Accept;
        }
        if !segment.insert(c.state) {
            break DsaOutcome::Reject;
        }
        let Some(rule) = c.enabled_rules(sa).next() else {
            break DsaOutcome::Reject;
        };
        if steps >= budget {
            break DsaOutcome::BudgetExceeded;
        }
        steps += 1;
        let out = step(sa, &c, rule)?;
        trace.record(sa, &c, rule, out.test_result);
        let consumed = out.config.pos != c.pos;
        c = out.config;
        if consumed {
            after_query.clear();
            segment.clear();
        }
        if sa.rule(rule).action.is_query() {
            segment.clear();
            if !after_query.insert((c.state, c.set.clone())) {
                break DsaOutcome::Reject;
            }
        }
    };
    Ok(DsaRun {
        outcome,
        trace,
        final_config: c,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CertStep {
    pub rule: usize,
    /// Claimed test result; present exactly for test rules.
    pub branch: Option<bool>,
}

/// A run written as the sequence of rules it applies.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct RunCertificate {
    pub steps: Vec<CertStep>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NsaOutcome {
    AcceptFound(RunCertificate),
    NotFoundWithinBudget,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NsaSearch {
    pub outcome: NsaOutcome,
    /// True when the whole reachable configuration space was explored, so
    /// that a negative outcome is a definite rejection.
    pub exhaustive: bool,
}

const NODE_LIMIT: usize = 1 << 21;

/// Breadth-first search over runs of at most `budget` steps. The certificate
/// of a found run is a shortest one.
pub fn run_nsa_bounded(sa: &SetAutomaton, w: &[Symbol], budget: usize) -> Result<NsaSearch> {
    let start = Configuration::initial(sa, w)?;
    type Key = (usize, usize, Word, BTreeSet<Word>);
    let key = |c: &Configuration| -> Key { (c.state, c.pos, c.tape.clone(), c.set.clone()) };
    // node: configuration, parent, step taken from the parent, depth
    let mut nodes: Vec<(Configuration, usize, Option<CertStep>, usize)> = vec![(start.clone(), 0, None, 0)];
    let mut seen: HashSet<Key> = HashSet::from([key(&start)]);
    let mut queue = VecDeque::from([0usize]);
    let mut truncated = false;
    while let Some(id) = queue.pop_front() {
        let (c, _, _, depth) = nodes[id].clone();
        if c.is_accepting(sa) {
            let mut steps = Vec::new();
            let mut cur = id;
            while let Some(s) = nodes[cur].2 {
                steps.push(s);
                cur = nodes[cur].1;
            }
            steps.reverse();
            return Ok(NsaSearch {
                outcome: NsaOutcome::AcceptFound(RunCertificate { steps }),
                exhaustive: false,
            });
        }
        let enabled: Vec<usize> = c.enabled_rules(sa).collect();
        if depth >= budget {
            truncated |= !enabled.is_empty();
            continue;
        }
        for rule in enabled {
            let out = step(sa, &c, rule)?;
            if !seen.insert(key(&out.config)) {
                continue;
            }
            if nodes.len() >= NODE_LIMIT {
                truncated = true;
                continue;
            }
            let s = CertStep {
                rule,
                branch: out.test_result,
            };
            nodes.push((out.config, id, Some(s), depth + 1));
            queue.push_back(nodes.len() - 1);
        }
    }
    Ok(NsaSearch {
        outcome: NsaOutcome::NotFoundWithinBudget,
        exhaustive: !truncated,
    })
}

/// Replays a certificate from `(s0, w, ε, ∅)`. Fails when a rule is not
/// enabled or a claimed test result does not match the set.
pub fn replay_certificate(sa: &SetAutomaton, w: &[Symbol], cert: &RunCertificate) -> Result<Trace> {
    let mut c = Configuration::initial(sa, w)?;
    let mut trace = Trace::new(sa.work_alphabet().clone());
    for s in &cert.steps {
        let out = step(sa, &c, s.rule)?;
        if out.test_result != s.branch {
            return Err(Error::RuleNotEnabled { rule: s.rule });
        }
        trace.record(sa, &c, s.rule, out.test_result);
        c = out.config;
    }
    trace.accepted = c.is_accepting(sa);
    Ok(trace)
}

pub fn verify_certificate(sa: &SetAutomaton, w: &[Symbol], cert: &RunCertificate) -> bool {
    matches!(replay_certificate(sa, w, cert), Ok(t) if t.accepted)
}

/// The protocol of an accepting run.
pub fn extract_run_protocol(trace: &Trace) -> Result<Protocol> {
    if !trace.accepted {
        return Err(Error::NotAccepting);
    }
    let blocks = trace.steps.iter().filter_map(|s| s.query.clone());
    Ok(Protocol::from_pairs(trace.work.clone(), blocks))
}
