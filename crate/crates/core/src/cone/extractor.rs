use crate::automata::Fst;
use crate::error::Result;
use crate::normalform::check_requirements;
use crate::protocol::{protocol_alphabet, Op, ProtocolSymbols};
use crate::sa::{Action, InputLabel, SetAutomaton};

fn fresh(sa: &SetAutomaton, base: &str) -> String {
    let mut name = base.to_string();
    while sa.state_index(&name).is_some() {
        name.push('\'');
    }
    name
}

/// Transducer mapping each input to the protocols of the runs of `sa` that
/// end in an accepting state right after a query.
///
/// States are the states of `sa`, a fresh initial state that writes the
/// leading `#`, and a fresh accepting sink. Every query rule writes
/// `#op#`; a query rule entering an accepting state has a second copy that
/// writes `#op` and enters the sink instead, which closes the protocol.
pub fn build_extractor(sa: &SetAutomaton) -> Result<Fst> {
    check_requirements(sa)?;
    let gamma = sa.work_alphabet().clone();
    let out = protocol_alphabet(&gamma)?;
    let ps = ProtocolSymbols::new(&gamma);
    // work symbols keep their index in the protocol alphabet
    let mut t = Fst::new(sa.input_alphabet().clone(), out);
    t.rename_state(0, fresh(sa, "init"));
    let base = t.num_states();
    for q in 0..sa.num_states() {
        t.add_named_state(sa.state_name(q));
    }
    let sink = t.add_named_state(fresh(sa, "fin"));
    t.set_accepting(sink, true);
    t.add_transition(0, &[], &[ps.hash()], base + sa.start());

    for r in sa.rules() {
        let read: Vec<_> = match r.label {
            InputLabel::Sym(s) => vec![s],
            InputLabel::Eps => vec![],
            InputLabel::End => unreachable!("requirements exclude the endmarker"),
        };
        let src = base + r.src;
        let mut query = |op: Op, dst: usize| {
            t.add_transition(src, &read, &[ps.hash(), ps.op(op), ps.hash()], base + dst);
            if sa.is_accepting(dst) {
                t.add_transition(src, &read, &[ps.hash(), ps.op(op)], sink);
            }
        };
        match &r.action {
            Action::Write(w, dst) => {
                let src = base + r.src;
                t.add_transition(src, &read, w, base + dst);
            }
            Action::In(dst) => query(Op::In, *dst),
            Action::Out(dst) => query(Op::Out, *dst),
            Action::Test { pos, neg } => {
                query(Op::TestPos, *pos);
                query(Op::TestNeg, *neg);
            }
        }
    }
    Ok(t)
}
