//! Generators and independent oracles shared by the integration tests.
#![allow(dead_code)]

use std::collections::{BTreeSet, HashMap, VecDeque};

use rand::seq::SliceRandom;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use sakit::automata::Nfa;
use sakit::emptiness::{QueryLanguageFamily, TypedProtocol};
use sakit::gallery::{Assignment, Cnf, CvpProgram, Gate, Literal, TmDescription};
use sakit::protocol::{binary_gamma, protocol_alphabet, Op, Protocol};
use sakit::sa::text::parse_sa;
use sakit::sa::{Action, InputLabel};
use sakit::{Alphabet, SetAutomaton, Symbol, Word};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn is_prime(n: usize) -> bool {
    n >= 2 && (2..n).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
}

/// `w = (u#)^n` for some `u` without `#` and `n >= 1`.
pub fn is_repetition(w: &[Symbol], hash: Symbol) -> bool {
    if w.last() != Some(&hash) {
        return false;
    }
    let blocks: Vec<&[Symbol]> = w[..w.len() - 1].split(|&s| s == hash).collect();
    blocks.iter().all(|b| *b == blocks[0])
}

/// Every word over `alphabet` of length at most `n`, shortest first.
pub fn all_words(alphabet: &Alphabet, n: usize) -> Vec<Word> {
    let mut out = vec![Vec::new()];
    let mut layer = vec![Vec::new()];
    for _ in 0..n {
        let mut next = Vec::new();
        for w in &layer {
            for s in alphabet.symbols() {
                let mut v: Word = w.clone();
                v.push(s);
                next.push(v);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

/// Correctness by keeping the set explicitly.
pub fn naive_correct(p: &Protocol) -> bool {
    let mut set: BTreeSet<Word> = BTreeSet::new();
    for (w, op) in p.pairs() {
        match op {
            Op::In => {
                set.insert(w.clone());
            }
            Op::Out => {
                set.remove(w);
            }
            Op::TestPos if !set.contains(w) => return false,
            Op::TestNeg if set.contains(w) => return false,
            _ => {}
        }
    }
    true
}

/// A random NFA with `n` states over `alphabet`; each labelled edge is
/// present with probability `density`, ε-edges with a tenth of it.
pub fn random_nfa(r: &mut ChaCha8Rng, alphabet: &Alphabet, n: usize, density: f64) -> Nfa {
    let mut a = Nfa::new(alphabet.clone());
    for _ in 0..n {
        a.add_state();
    }
    a.add_initial(0);
    for q in 0..n {
        if r.gen_bool(0.4) {
            a.set_accepting(q, true);
        }
        for d in 0..n {
            for s in alphabet.symbols() {
                if r.gen_bool(density) {
                    a.add_transition(q, Some(s), d);
                }
            }
            if q != d && r.gen_bool(density / 10.0) {
                a.add_transition(q, None, d);
            }
        }
    }
    a
}

pub fn protocol_nfa(r: &mut ChaCha8Rng, n: usize) -> Nfa {
    let al = protocol_alphabet(&binary_gamma()).unwrap();
    random_nfa(r, &al, n, 0.3)
}

/// Whether `L(n1) ∩ ... ∩ L(nm)` has at least two words, by exploring the
/// subset automaton of the product and counting accepted paths (a useful
/// cycle counts as infinitely many).
pub fn intersection_has_two(sigma: &Alphabet, nfas: &[Nfa]) -> bool {
    type Node = Vec<Vec<usize>>;
    let start: Node = nfas.iter().map(|a| a.closure_of(a.initial().iter().copied())).collect();
    let mut index: HashMap<Node, usize> = HashMap::new();
    let mut nodes: Vec<Node> = Vec::new();
    let mut succ: Vec<Vec<usize>> = Vec::new();
    let mut queue = VecDeque::new();
    index.insert(start.clone(), 0);
    nodes.push(start);
    succ.push(Vec::new());
    queue.push_back(0);
    while let Some(i) = queue.pop_front() {
        for s in sigma.symbols() {
            let next: Node = nodes[i].iter().zip(nfas).map(|(set, a)| a.step(set, s)).collect();
            if next.iter().any(|set| set.is_empty()) && !nfas.is_empty() {
                continue;
            }
            let j = *index.entry(next.clone()).or_insert_with(|| {
                nodes.push(next);
                succ.push(Vec::new());
                queue.push_back(nodes.len() - 1);
                nodes.len() - 1
            });
            succ[i].push(j);
        }
    }
    let accepting: Vec<bool> = nodes
        .iter()
        .map(|n| {
            n.iter()
                .zip(nfas)
                .all(|(set, a)| set.iter().any(|&q| a.is_accepting(q)))
        })
        .collect();
    let m = nodes.len();
    // useful = reachable (all are) and co-reachable
    let mut useful = accepting.clone();
    loop {
        let mut changed = false;
        for i in 0..m {
            if !useful[i] && succ[i].iter().any(|&j| useful[j]) {
                useful[i] = true;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    if !useful[0] {
        return false;
    }
    // cycle among useful nodes => infinitely many words
    let mut color = vec![0u8; m];
    fn cyclic(i: usize, succ: &[Vec<usize>], useful: &[bool], color: &mut [u8]) -> bool {
        color[i] = 1;
        for &j in &succ[i] {
            if !useful[j] {
                continue;
            }
            if color[j] == 1 || (color[j] == 0 && cyclic(j, succ, useful, color)) {
                return true;
            }
        }
        color[i] = 2;
        false
    }
    if cyclic(0, &succ, &useful, &mut color) {
        return true;
    }
    // acyclic: count accepted paths, capped at 2
    let mut memo: Vec<Option<usize>> = vec![None; m];
    fn count(i: usize, succ: &[Vec<usize>], useful: &[bool], acc: &[bool], memo: &mut [Option<usize>]) -> usize {
        if let Some(c) = memo[i] {
            return c;
        }
        let mut c = acc[i] as usize;
        for &j in &succ[i] {
            if useful[j] {
                c += count(j, succ, useful, acc, memo);
            }
        }
        let c = c.min(2);
        memo[i] = Some(c);
        c
    }
    count(0, &succ, &useful, &accepting, &mut memo) >= 2
}

/// A family of `n` languages over `{a, b}`: random NFAs mixed with small
/// finite languages so that both small and large languages occur.
pub fn random_family(r: &mut ChaCha8Rng, n: usize) -> QueryLanguageFamily {
    let g = binary_gamma();
    let words = all_words(&g, 3);
    let langs = (0..n)
        .map(|_| {
            if r.gen_bool(0.4) {
                let k = r.gen_range(1..=4);
                let chosen: Vec<Word> = words.choose_multiple(r, k).cloned().collect();
                Nfa::from_words(g.clone(), &chosen)
            } else {
                let states = r.gen_range(1..=3);
                let mut a = random_nfa(r, &g, states, 0.45);
                a.set_accepting(r.gen_range(0..states), true);
                a
            }
        })
        .collect();
    QueryLanguageFamily::new(g, langs).unwrap()
}

/// A random correct protocol whose block `k` uses a word of language
/// `types[k]`, drawn from words of length at most 4.
pub fn random_typed_protocol(
    r: &mut ChaCha8Rng,
    fam: &QueryLanguageFamily,
    max_blocks: usize,
) -> Option<TypedProtocol> {
    let g = fam.gamma().clone();
    let pool = all_words(&g, 4);
    let members: Vec<Vec<Word>> = (0..fam.len())
        .map(|i| pool.iter().filter(|w| fam.language(i).accepts(w)).cloned().collect())
        .collect();
    let usable: Vec<usize> = (0..fam.len()).filter(|&i| !members[i].is_empty()).collect();
    if usable.is_empty() {
        return None;
    }
    let mut set: BTreeSet<Word> = BTreeSet::new();
    let mut pairs = Vec::new();
    let mut types = Vec::new();
    let len = r.gen_range(1..=max_blocks);
    while pairs.len() < len {
        let i = *usable.choose(r).unwrap();
        let op = Op::ALL[r.gen_range(0..4)];
        let candidates: Vec<&Word> = members[i]
            .iter()
            .filter(|w| match op {
                Op::TestPos => set.contains(*w),
                Op::TestNeg => !set.contains(*w),
                _ => true,
            })
            .collect();
        // prefer words already in play so that sets grow and shrink
        let Some(&w) = candidates.choose(r) else { continue };
        match op {
            Op::In => {
                set.insert(w.clone());
            }
            Op::Out => {
                set.remove(w);
            }
            _ => {}
        }
        pairs.push((w.clone(), op));
        types.push(i);
    }
    Some(TypedProtocol {
        protocol: Protocol::from_pairs(g, pairs),
        types,
    })
}

/// A standard straight-line program with up to `max_len` assignments over
/// variables `P1..P{max_vars}`; each operand is assigned before use.
pub fn random_cvp(r: &mut ChaCha8Rng, max_len: usize, max_vars: usize) -> CvpProgram {
    let len = r.gen_range(1..=max_len);
    let mut assigned: Vec<usize> = Vec::new();
    let mut assignments = Vec::new();
    for _ in 0..len {
        let target = r.gen_range(1..=max_vars);
        let gate = if assigned.is_empty() {
            if r.gen_bool(0.5) {
                Gate::One
            } else {
                Gate::Zero
            }
        } else {
            let pick = |r: &mut ChaCha8Rng| *assigned.choose(r).unwrap();
            match r.gen_range(0..5) {
                0 => Gate::And(pick(r), pick(r)),
                1 => Gate::Or(pick(r), pick(r)),
                2 => Gate::Not(pick(r)),
                3 => Gate::One,
                _ => Gate::Zero,
            }
        };
        if !assigned.contains(&target) {
            assigned.push(target);
        }
        assignments.push(Assignment { target, gate });
    }
    CvpProgram { assignments }
}

/// Direct evaluation with an explicit variable table.
pub fn eval_cvp(p: &CvpProgram) -> bool {
    let mut value: HashMap<usize, bool> = HashMap::new();
    let get = |v: &HashMap<usize, bool>, i: usize| v.get(&i).copied().unwrap_or(false);
    let mut last = false;
    for a in &p.assignments {
        last = match a.gate {
            Gate::And(j, k) => get(&value, j) && get(&value, k),
            Gate::Or(j, k) => get(&value, j) || get(&value, k),
            Gate::Not(j) => !get(&value, j),
            Gate::One => true,
            Gate::Zero => false,
        };
        value.insert(a.target, last);
    }
    last
}

/// A 3-CNF over variables `1..=vars` and a variable list that may repeat or
/// omit variables.
pub fn random_sat(r: &mut ChaCha8Rng, vars: usize, clauses: usize) -> (Vec<usize>, Cnf) {
    let lit = |r: &mut ChaCha8Rng| Literal {
        var: r.gen_range(1..=vars),
        positive: r.gen_bool(0.5),
    };
    // half of the clauses repeat one literal, which makes conflicts likely
    let cnf = Cnf {
        clauses: (0..clauses)
            .map(|_| {
                let l = lit(r);
                if r.gen_bool(0.5) {
                    [l, l, l]
                } else {
                    [l, lit(r), lit(r)]
                }
            })
            .collect(),
    };
    let mut list = Vec::new();
    for v in 1..=vars {
        match r.gen_range(0..6) {
            0 => {}
            1 => {
                list.push(v);
                list.push(v);
            }
            _ => list.push(v),
        }
    }
    list.shuffle(r);
    (list, cnf)
}

/// Satisfiability of the derived formula by enumerating every assignment of
/// all variables and forcing the constraints.
pub fn derived_sat(list: &[usize], cnf: &Cnf) -> bool {
    let vars: BTreeSet<usize> = cnf
        .clauses
        .iter()
        .flatten()
        .map(|l| l.var)
        .chain(list.iter().copied())
        .collect();
    let vars: Vec<usize> = vars.into_iter().collect();
    let times = |v: usize| list.iter().filter(|&&x| x == v).count();
    (0u32..1 << vars.len()).any(|bits| {
        let val = |v: usize| bits >> vars.iter().position(|&x| x == v).unwrap() & 1 == 1;
        if vars.iter().any(|&v| times(v) == 0 && val(v)) {
            return false;
        }
        cnf.clauses
            .iter()
            .filter(|c| c.iter().all(|l| times(l.var) <= 1))
            .all(|c| c.iter().any(|l| val(l.var) == l.positive))
    })
}

/// The three machines of the reduction check.
pub fn sample_tms() -> Vec<(&'static str, TmDescription)> {
    let parse = |t: &str| TmDescription::parse(t).unwrap();
    vec![
        ("immediate accept", parse("states: q\nstart: q\naccept: q\n")),
        (
            "read back written bit",
            parse("states: a b c acc\nstart: a\naccept: acc\n0 a 1 b +1\n0 b 0 c -1\n1 c 1 acc 0\n"),
        ),
        (
            "infinite loop",
            parse("states: l r acc\nstart: l\naccept: acc\n0 l 0 r R\n0 r 0 l L\n"),
        ),
        (
            "walk right until the edge",
            parse("states: w acc\nstart: w\naccept: acc\n0 w 1 w R\n"),
        ),
        (
            "bounce between two marks",
            parse(
                "states: a b c d acc\nstart: a\naccept: acc\n\
                 0 a 1 b L\n0 b 1 c R\n1 c 1 d R\n0 d 0 c L\n1 d 1 acc 0\n",
            ),
        ),
    ]
}

/// Direct simulation with an explicit tape: `Some(true)` accept,
/// `Some(false)` reject, `None` loop.
pub fn run_tm(tm: &TmDescription, n: usize) -> Option<bool> {
    let mut tape = vec![0u8; 2 * n + 2];
    let (mut head, mut q) = (n, tm.start);
    let mut seen = BTreeSet::new();
    loop {
        if tm.accepting[q] {
            return Some(true);
        }
        if !seen.insert((head, q, tape.clone())) {
            return None;
        }
        let Some(m) = tm.delta.get(&(tape[head] == 1, q)) else {
            return Some(false);
        };
        tape[head] = m.write as u8;
        q = m.next;
        let h = head as i64 + m.shift as i64;
        if !(1..=2 * n as i64).contains(&h) {
            return Some(false);
        }
        head = h as usize;
    }
}

/// Hand-made deterministic automata that combine write-only ε-loops with
/// ε-loops carrying queries.
pub fn crafted_eps_dsas() -> Vec<(&'static str, SetAutomaton)> {
    let texts = [
        (
            "write loop after b, query loop after a",
            "input: a b\nwork: x y\nendmarker: no\nstart: s\naccept: s f\n\
             s a write x t\nt eps test f u\nu eps in t\n\
             s b write - w\nw eps write y w\nf a write y s\nf b write - s\n",
        ),
        (
            "insert then test loop ending in acceptance",
            "input: a b\nwork: x\nendmarker: no\nstart: s\naccept: f\n\
             s a write x p\np eps in q\nq eps write x r\nr eps test f p\n\
             f b write x s\nf a write - w\nw eps write x w\n",
        ),
        (
            "toggle loop that never ends",
            "input: a b\nwork: x\nendmarker: no\nstart: s\naccept: s acc\n\
             s a write x t\nt eps test o i\ni eps write x j\nj eps in t\no eps write x k\nk eps out t\n\
             s b write - acc\nacc b write x t\n",
        ),
        (
            "endmarker with loops on both sides",
            "input: a b\nwork: x y\nendmarker: yes\nstart: s\naccept: f g\n\
             s a write x s\ns b in t\nt end write y u\nu eps test f v\nv eps write y v2\nv2 eps in u\n\
             t a write - l\nl eps write x l\nt b test s g\ng a write - s\n",
        ),
        (
            "accepting state inside a query loop",
            "input: a b\nwork: x y\nendmarker: no\nstart: s\naccept: m\n\
             s a write xy m\nm eps out n\nn eps write xy o\no eps test m s\n\
             s b write y z\nz eps write - z2\nz2 eps write x z\n",
        ),
        (
            "nested loops of different words",
            "input: a\nwork: x y\nendmarker: no\nstart: s\naccept: d\n\
             s a write - p\np eps write x q\nq eps test r t\nt eps in p\nr eps write y u\nu eps test d v\nv eps in p\n\
             d a write - s\n",
        ),
    ];
    texts.iter().map(|(n, t)| (*n, parse_sa(t).unwrap())).collect()
}

/// A random deterministic automaton over input `{a, b}` and work `{x, y}`.
/// A state has either one ε-rule or rules on some input symbols.
pub fn random_dsa(r: &mut ChaCha8Rng, n: usize, endmarker: bool) -> SetAutomaton {
    let input = Alphabet::new(["a", "b"]).unwrap();
    let work = Alphabet::new(["x", "y"]).unwrap();
    let mut sa = SetAutomaton::new(input.clone(), work.clone(), endmarker);
    for q in 0..n {
        sa.add_state(format!("q{q}"));
    }
    sa.set_start(0);
    for q in 0..n {
        sa.set_accepting(q, r.gen_bool(0.35));
    }
    let action = |r: &mut ChaCha8Rng| {
        let d = r.gen_range(0..n);
        match r.gen_range(0..5) {
            0 | 1 => {
                let len = r.gen_range(0..=2);
                Action::Write((0..len).map(|_| Symbol(r.gen_range(0..2))).collect(), d)
            }
            2 => Action::In(d),
            3 => Action::Out(d),
            _ => Action::Test {
                pos: d,
                neg: r.gen_range(0..n),
            },
        }
    };
    for q in 0..n {
        if r.gen_bool(0.35) {
            let a = action(r);
            sa.add_rule(q, InputLabel::Eps, a).unwrap();
            continue;
        }
        let mut labels: Vec<InputLabel> = input.symbols().map(InputLabel::Sym).collect();
        if endmarker {
            labels.push(InputLabel::End);
        }
        for l in labels {
            if r.gen_bool(0.7) {
                let a = action(r);
                sa.add_rule(q, l, a).unwrap();
            }
        }
    }
    sa
}

/// NFA acceptance by explicit search over (state, position) pairs.
pub fn nfa_accepts_naive(a: &Nfa, w: &[Symbol]) -> bool {
    let mut seen = BTreeSet::new();
    let mut stack: Vec<(usize, usize)> = a.initial().iter().map(|&q| (q, 0)).collect();
    while let Some((q, i)) = stack.pop() {
        if !seen.insert((q, i)) {
            continue;
        }
        if i == w.len() && a.is_accepting(q) {
            return true;
        }
        for &(label, d) in a.transitions_from(q) {
            match label {
                None => stack.push((d, i)),
                Some(s) if i < w.len() && w[i] == s => stack.push((d, i + 1)),
                Some(_) => {}
            }
        }
    }
    false
}

/// A random transducer with reads and writes of at most one symbol.
pub fn random_fst(r: &mut ChaCha8Rng, input: &Alphabet, output: &Alphabet, n: usize) -> sakit::Fst {
    let mut t = sakit::Fst::new(input.clone(), output.clone());
    for _ in 0..n {
        t.add_state();
    }
    t.set_initial(0);
    for q in 0..n {
        t.set_accepting(q, r.gen_bool(0.4));
        for _ in 0..r.gen_range(1..=4) {
            let read: Vec<Symbol> = if r.gen_bool(0.8) {
                vec![Symbol(r.gen_range(0..input.len() as u32))]
            } else {
                vec![]
            };
            let write: Vec<Symbol> = (0..r.gen_range(0..=2))
                .map(|_| Symbol(r.gen_range(0..output.len() as u32)))
                .collect();
            t.add_transition(q, &read, &write, r.gen_range(0..n));
        }
    }
    t
}
