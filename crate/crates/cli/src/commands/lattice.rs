use serde_json::{json, Map, Value};

use ordtop::lattice::{
    check_bounded_distributive, prime_ideals, prime_spectrum_poset, round_trip_lattice,
    round_trip_poset, DEFAULT_DOWNSET_CAP,
};
use ordtop::{Error, FiniteLattice};

use super::pair_names;
use crate::args::LatticeCmd;
use crate::{load_poset, CliError, Ctx, Report, Verdict};

pub fn run(ctx: &mut Ctx<'_>, cmd: LatticeCmd) -> Result<Report, CliError> {
    let inputs = ctx.inputs();
    let cap = ctx.cap_or(DEFAULT_DOWNSET_CAP);
    let value = ctx.read_value()?;
    let p = load_poset(&value)?;
    let name = match cmd {
        LatticeCmd::Check => "lattice check",
        LatticeCmd::Ideals => "lattice ideals",
        LatticeCmd::Spectrum => "lattice spectrum",
        LatticeCmd::Roundtrip => "lattice roundtrip",
    };

    // A bare poset (top-level `elements`) round-trips through its down-sets;
    // anything wrapped in `poset` is read as a lattice.
    if matches!(cmd, LatticeCmd::Roundtrip) && value.get("elements").is_some_and(Value::is_array) {
        return match round_trip_poset(&p, cap) {
            Ok(rt) => {
                let details = json!({
                    "direction": "poset",
                    "elements": p.len(),
                    "lattice_size": rt.lattice.len(),
                    "spectrum": rt.spectrum.to_json(),
                });
                let mapping: Vec<_> =
                    rt.mapping.iter().enumerate().map(|(x, &s)| [p.name(x), rt.spectrum.name(s)]).collect();
                Ok(Report::new(name, inputs, Verdict::Pass, details)
                    .with_witnesses(json!({"mapping": mapping})))
            }
            Err(e) => failure(name, inputs, e),
        };
    }

    let l = match FiniteLattice::from_poset(p) {
        Ok(l) => l,
        Err(e) => return failure(name, inputs, e),
    };
    let lp = l.poset();
    let report = match cmd {
        LatticeCmd::Check => {
            let r = check_bounded_distributive(&l);
            let triples: Vec<_> = r
                .distributivity_violations
                .iter()
                .map(|&(x, y, z)| [lp.name(x), lp.name(y), lp.name(z)])
                .collect();
            let details = json!({
                "elements": l.len(),
                "bottom": lp.name(l.bottom()),
                "top": lp.name(l.top()),
                "meet_violations": pair_names(lp, &r.meet_violations),
                "join_violations": pair_names(lp, &r.join_violations),
                "bound_violations": r.bound_violations.iter().map(|&a| lp.name(a)).collect::<Vec<_>>(),
                "distributivity_violations": triples,
            });
            Report::new(name, inputs, Verdict::from_check(r.passes()), details)
        }
        LatticeCmd::Ideals => match prime_ideals(&l) {
            Ok(ideals) => {
                let list: Vec<Value> = ideals.iter().map(|i| json!(lp.names_of(&i.members))).collect();
                Report::new(
                    name,
                    inputs,
                    Verdict::Pass,
                    json!({"count": list.len(), "prime_ideals": list}),
                )
            }
            Err(e) => return failure(name, inputs, e),
        },
        LatticeCmd::Spectrum => match prime_spectrum_poset(&l) {
            Ok(s) => Report::new(
                name,
                inputs,
                Verdict::Pass,
                json!({"count": s.len(), "poset": s.to_json()}),
            ),
            Err(e) => return failure(name, inputs, e),
        },
        LatticeCmd::Roundtrip => match round_trip_lattice(&l, cap) {
            Ok(rt) => {
                let details = json!({
                    "direction": "lattice",
                    "elements": l.len(),
                    "spectrum": rt.spectrum.to_json(),
                    "lattice": rt.lattice.to_json(),
                });
                let rp = rt.lattice.poset();
                let mapping: Vec<_> =
                    rt.mapping.iter().enumerate().map(|(a, &b)| [lp.name(a), rp.name(b)]).collect();
                Report::new(name, inputs, Verdict::Pass, details)
                    .with_witnesses(json!({"mapping": mapping}))
            }
            Err(e) => return failure(name, inputs, e),
        },
    };
    Ok(report)
}

/// Structural answers (not a lattice, not distributive, round trip broke)
/// are check failures; everything else is an input error.
fn failure(name: &str, inputs: Map<String, Value>, e: Error) -> Result<Report, CliError> {
    let details = match &e {
        Error::NotALattice(_) | Error::RoundTripFailure(_) => json!({"error": e.to_string()}),
        Error::NotDistributive { x, y, z } => {
            json!({"error": e.to_string(), "violating_triple": [x, y, z]})
        }
        _ => return Err(e.into()),
    };
    Ok(Report::new(name, inputs, Verdict::Fail, details))
}
