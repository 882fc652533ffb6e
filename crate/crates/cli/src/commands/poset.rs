use serde_json::{json, Value};

use ordtop::constructions::{verify_chain_facts, verify_cone_facts, verify_poset_axioms, ConeMismatch};
use ordtop::poset::find_isomorphism;

use super::set_names;
use crate::args::PosetCmd;
use crate::{load_poset, parse_value, read_file, CliError, Ctx, Report, Verdict};

pub fn run(ctx: &mut Ctx<'_>, cmd: PosetCmd) -> Result<Report, CliError> {
    let mut inputs = ctx.inputs();
    let p = ctx.poset()?;
    let report = match cmd {
        PosetCmd::Components => {
            let comps: Vec<Value> = p
                .order_components()
                .blocks
                .iter()
                .map(|b| set_names(&p, b))
                .collect();
            Report::new(
                "poset components",
                inputs,
                Verdict::Info,
                json!({"count": comps.len(), "components": comps}),
            )
        }
        PosetCmd::Downset { set } => {
            let s = p.set_of(&set)?;
            inputs.insert("set".into(), json!(set));
            Report::new(
                "poset downset",
                inputs,
                Verdict::Info,
                json!({"down_set": set_names(&p, &p.down_set(&s))}),
            )
        }
        PosetCmd::Upset { set } => {
            let s = p.set_of(&set)?;
            inputs.insert("set".into(), json!(set));
            Report::new(
                "poset upset",
                inputs,
                Verdict::Info,
                json!({"up_set": set_names(&p, &p.up_set(&s))}),
            )
        }
        PosetCmd::Interval { lo, hi } => {
            let (x, y) = (p.index_of(&lo)?, p.index_of(&hi)?);
            inputs.insert("lo".into(), json!(lo));
            inputs.insert("hi".into(), json!(hi));
            Report::new(
                "poset interval",
                inputs,
                Verdict::Info,
                json!({"interval": set_names(&p, &p.interval(x, y)), "lo_le_hi": p.le(x, y)}),
            )
        }
        PosetCmd::Iso { other } => {
            let q = load_poset(&parse_value(&read_file(&other)?)?)?;
            inputs.insert("other".into(), json!(other.display().to_string()));
            let map = find_isomorphism(&p, &q);
            let details = json!({
                "isomorphic": map.is_some(),
                "sizes": [p.len(), q.len()],
                "relation_sizes": [p.relation_size(), q.relation_size()],
            });
            let witnesses = match &map {
                Some(m) => json!({"mapping": m
                    .iter()
                    .enumerate()
                    .map(|(a, &b)| [p.name(a), q.name(b)])
                    .collect::<Vec<_>>()}),
                None => json!({}),
            };
            Report::new("poset iso", inputs, Verdict::from_check(map.is_some()), details)
                .with_witnesses(witnesses)
        }
        PosetCmd::VerifyP => {
            let axioms = verify_poset_axioms(&p)?;
            let chains = verify_chain_facts(&p)?;
            let cones = verify_cone_facts(&p)?;
            let ok = axioms.passes() && chains.passes() && cones.passes();
            let details = json!({
                "elements": axioms.elements,
                "axioms": {
                    "passes": axioms.passes(),
                    "components": axioms.components,
                    "antisymmetry_violations": axioms.antisymmetry_violations,
                    "transitivity_violations": axioms.transitivity_violations,
                    "layer_violations": axioms.layer_violations,
                },
                "chains": {
                    "passes": chains.passes(),
                    "checked": chains.checked,
                    "counterexamples": chains.counterexamples,
                },
                "cones": {
                    "passes": cones.passes(),
                    "checked": cones.checked,
                    "root_ok": cones.root_ok,
                    "closed_form_mismatches": mismatches(&cones.closed_form_mismatches),
                    "layered_cone_mismatches": cones.layered_cone_mismatches,
                    "max_layer0_cone": cones.max_layer0_cone,
                    "by_length": {
                        "passes": cones.passes_by_length(),
                        "mismatches": mismatches(&cones.by_length_mismatches),
                    },
                },
            });
            Report::new("poset verify-P", inputs, Verdict::from_check(ok), details)
        }
    };
    Ok(report)
}

fn mismatches(list: &[ConeMismatch]) -> Value {
    json!(list
        .iter()
        .map(|m| json!({"element": m.element, "expected": m.expected, "actual": m.actual}))
        .collect::<Vec<_>>())
}
