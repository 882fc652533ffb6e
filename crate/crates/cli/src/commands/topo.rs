use serde_json::{json, Value};

use ordtop::topology::{
    certify_subbasic_cover, check_priestley, interval_subbase, union_subbase, CoverKind,
    FiniteSpace, DEFAULT_OPEN_CAP,
};

use super::{pair_names, set_names};
use crate::args::TopoCmd;
use crate::{load_poset, load_space, CliError, Ctx, Report, Verdict};

pub fn run(ctx: &mut Ctx<'_>, cmd: TopoCmd) -> Result<Report, CliError> {
    let mut inputs = ctx.inputs();
    let cap = ctx.cap_or(DEFAULT_OPEN_CAP);
    let value = ctx.read_value()?;
    let report = match cmd {
        TopoCmd::Subbase => {
            let p = load_poset(&value)?;
            let t = FiniteSpace::new(p.names().to_vec(), interval_subbase(&p))?;
            Report::new(
                "topo subbase",
                inputs,
                Verdict::Info,
                json!({"poset": p.to_json(), "space": t.to_json()}),
            )
        }
        TopoCmd::Generate => {
            let t = load_space(&value)?;
            let opens: Vec<Vec<String>> = t.opens(cap)?.iter().map(|o| t.names_of(o)).collect();
            Report::new(
                "topo generate",
                inputs,
                Verdict::Info,
                json!({"count": opens.len(), "opens": opens, "space": t.to_json()}),
            )
        }
        TopoCmd::CoverCertify { a, b } => {
            let p = load_poset(&value)?;
            let (aset, bset) = (p.set_of(&a)?, p.set_of(&b)?);
            inputs.insert("a".into(), json!(a));
            inputs.insert("b".into(), json!(b));
            let cert = certify_subbasic_cover(&p, &aset, &bset);
            let details = json!({
                "covers": cert.kind != CoverKind::NotACover,
                "kind": cert.kind,
                "witness_size": cert.witness.len(),
            });
            Report::new("topo cover-certify", inputs, Verdict::Info, details)
                .with_witnesses(json!({"certificate": cert.to_json(&p)}))
        }
        TopoCmd::Priestley => {
            let p = load_poset(&value)?;
            let (t, topology) = match value.get("space") {
                Some(_) => (load_space(&value)?, "given"),
                None => (FiniteSpace::discrete(p.names().to_vec()), "discrete"),
            };
            let r = check_priestley(&p, &t)?;
            let minimal: serde_json::Map<String, Value> = (0..p.len())
                .map(|x| (p.name(x).to_string(), set_names(&p, &r.minimal_sets[x])))
                .collect();
            let details = json!({
                "topology": topology,
                "compact": r.compact,
                "checked_pairs": r.checked_pairs,
                "failures": pair_names(&p, &r.failures),
            });
            Report::new("topo priestley", inputs, Verdict::from_check(r.passes()), details)
                .with_witnesses(json!({"minimal_clopen_decreasing": minimal}))
        }
        TopoCmd::UnionSubbase { part, point } => {
            let list = value
                .get("parts")
                .and_then(Value::as_array)
                .ok_or_else(|| CliError::Input("expected an object with a `parts` array".into()))?;
            let mut parts = Vec::with_capacity(list.len());
            for item in list {
                let p = load_poset(item)?;
                let t = match item.get("space") {
                    Some(_) => load_space(item)?,
                    None => FiniteSpace::discrete(p.names().to_vec()),
                };
                parts.push((p, t));
            }
            let x = parts
                .get(part)
                .ok_or(ordtop::Error::PartOutOfRange(part))?
                .0
                .index_of(&point)?;
            inputs.insert("part".into(), json!(part));
            inputs.insert("point".into(), json!(point));
            let u = union_subbase(&parts, part, x, cap)?;
            let space = u.space();
            let check = check_priestley(&u.poset, &space)?;
            let family = |sets: &[ordtop::poset::ElemSet]| {
                json!(sets.iter().map(|s| u.poset.names_of(s)).collect::<Vec<_>>())
            };
            let details = json!({
                "poset": u.poset.to_json(),
                "space": space.to_json(),
                "offsets": u.offsets,
                "priestley": {
                    "checked_pairs": check.checked_pairs,
                    "failures": pair_names(&u.poset, &check.failures),
                },
            });
            Report::new("topo union-subbase", inputs, Verdict::from_check(check.passes()), details)
                .with_witnesses(json!({"s1": family(&u.s1), "s2": family(&u.s2), "s3": family(&u.s3)}))
        }
    };
    Ok(report)
}
