use serde_json::json;

use ordtop::cutspace::{
    build_fragment, parse_rational_list, separation_witness, stern_brocot, sweep, verify_witness,
    Fragment,
};
use ordtop::Error;

use crate::args::CutspaceCmd;
use crate::{load_fragment, CliError, Ctx, Report, Verdict};

pub fn run(ctx: &mut Ctx<'_>, cmd: CutspaceCmd) -> Result<Report, CliError> {
    let mut inputs = ctx.inputs();
    let from_flags = matches!(cmd, CutspaceCmd::Build)
        || (ctx.common.input.is_none() && ctx.common.depth.is_some());
    let f = if from_flags {
        build(ctx)?
    } else {
        load_fragment(&ctx.read_value()?)?
    };
    let report = match cmd {
        CutspaceCmd::Build => {
            let inv = f.check_invariants();
            let details = json!({
                "points": f.len(),
                "invariants": inv,
                "fragment": f.to_json(),
            });
            Report::new("cutspace build", inputs, Verdict::from_check(inv.passes()), details)
        }
        CutspaceCmd::Iso => match f.order_iso_check() {
            Ok(iso) => Report::new(
                "cutspace iso",
                inputs,
                Verdict::Pass,
                json!({
                    "points": f.len(),
                    "components": iso.components,
                    "nontrivial_components": iso.nontrivial_components,
                }),
            )
            .with_witnesses(json!({"mapping": iso.mapping})),
            Err(e @ Error::IsoFailure(_)) => Report::new(
                "cutspace iso",
                inputs,
                Verdict::Fail,
                json!({"error": e.to_string()}),
            ),
            Err(e) => return Err(e.into()),
        },
        CutspaceCmd::Separate { u, v } => {
            inputs.insert("u".into(), json!(u));
            inputs.insert("v".into(), json!(v));
            let (pu, pv) = (f.resolve(&u)?, f.resolve(&v)?);
            match separation_witness(&f, &pu, &pv) {
                Ok(w) => {
                    let check = verify_witness(&f, &pu, &pv, &w.set)?;
                    let details = json!({"case": w.case, "check": check});
                    Report::new("cutspace separate", inputs, Verdict::from_check(check.passes()), details)
                        .with_witnesses(json!({"blocks": w.set.to_json()}))
                }
                Err(e @ (Error::NotSeparablePrecondition { .. } | Error::SeparationFailure(_))) => {
                    Report::new(
                        "cutspace separate",
                        inputs,
                        Verdict::Fail,
                        json!({"error": e.to_string()}),
                    )
                }
                Err(e) => return Err(e.into()),
            }
        }
        CutspaceCmd::Sweep => {
            let r = sweep(&f)?;
            Report::new("cutspace sweep", inputs, Verdict::from_check(r.passes()), json!(r))
        }
    };
    Ok(report)
}

/// Builds from `--depth`, `--width`, `--rationals` and `--seed`; the
/// enumeration prefix defaults to the Stern-Brocot order.
fn build(ctx: &Ctx<'_>) -> Result<Fragment, CliError> {
    let c = &ctx.common;
    let depth = c
        .depth
        .ok_or_else(|| CliError::Usage("building a fragment needs --depth".into()))?;
    let width = c
        .width
        .ok_or_else(|| CliError::Usage("building a fragment needs --width".into()))?;
    let rationals = match &c.rationals {
        Some(s) => parse_rational_list(s)?,
        None => stern_brocot(depth + 1),
    };
    Ok(build_fragment(depth, width, &rationals, c.seed)?)
}
