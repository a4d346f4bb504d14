use std::collections::{HashMap, VecDeque};

use crate::automata::Fst;
use crate::error::{Error, Result};
use crate::protocol::{build_mprot, gamma_of};
use crate::sa::{Action, InputLabel, SetAutomaton};

/// Set automaton recognizing `T(L)` where `L` is the set of correct
/// protocols over the output alphabet of `t`.
///
/// The inverse of `t` reads protocol symbols and writes input symbols. The
/// result runs it together with the protocol automaton: the written side
/// becomes the input of the result, the read side is fed to the protocol
/// automaton one symbol at a time. Only reachable pairs are built.
pub fn cone_generate(t: &Fst) -> Result<SetAutomaton> {
    let gamma = gamma_of(t.output_alphabet())?;
    let mprot = build_mprot(&gamma)?;
    let inv = t.inverse();
    let mut sa = SetAutomaton::new(t.input_alphabet().clone(), gamma, false);
    let mut index: HashMap<(usize, usize), usize> = HashMap::new();
    let mut queue = VecDeque::new();
    let mut intern = |sa: &mut SetAutomaton, queue: &mut VecDeque<(usize, usize)>, key: (usize, usize)| -> usize {
        *index.entry(key).or_insert_with(|| {
            let id = sa.add_state(format!("{}|{}", inv.state_name(key.0), mprot.state_name(key.1)));
            sa.set_accepting(id, inv.is_accepting(key.0) && mprot.is_accepting(key.1));
            queue.push_back(key);
            id
        })
    };
    let start = intern(&mut sa, &mut queue, (inv.initial(), mprot.start()));
    sa.set_start(start);
    while let Some((p, m)) = queue.pop_front() {
        let src = intern(&mut sa, &mut queue, (p, m));
        for tr in inv.transitions_from(p) {
            let label = tr.write.map_or(InputLabel::Eps, InputLabel::Sym);
            let Some(fed) = tr.read else {
                let dst = intern(&mut sa, &mut queue, (tr.dst, m));
                sa.add_rule(src, label, Action::Write(vec![], dst))?;
                continue;
            };
            for &ri in mprot.rules_from(m) {
                let rule = mprot.rule(ri);
                if rule.label != InputLabel::Sym(fed) {
                    continue;
                }
                let action = match &rule.action {
                    Action::Write(w, d) => Action::Write(w.clone(), intern(&mut sa, &mut queue, (tr.dst, *d))),
                    Action::In(d) => Action::In(intern(&mut sa, &mut queue, (tr.dst, *d))),
                    Action::Out(d) => Action::Out(intern(&mut sa, &mut queue, (tr.dst, *d))),
                    Action::Test { pos, neg } => Action::Test {
                        pos: intern(&mut sa, &mut queue, (tr.dst, *pos)),
                        neg: intern(&mut sa, &mut queue, (tr.dst, *neg)),
                    },
                };
                sa.add_rule(src, label, action)?;
            }
        }
    }
    if sa.num_states() == 0 {
        return Err(Error::Invalid("empty composition".into()));
    }
    Ok(sa)
}
