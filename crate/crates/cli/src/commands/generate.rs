use serde_json::json;

use ordtop::constructions::generate_p;
use ordtop::poset::DEFAULT_ELEMENT_CAP;

use crate::args::GenCmd;
use crate::{CliError, Ctx, Report, Verdict};

pub fn run(ctx: &mut Ctx<'_>, cmd: GenCmd) -> Result<Report, CliError> {
    match cmd {
        GenCmd::P => {
            let depth = ctx.common.depth.ok_or_else(|| CliError::Usage("gen P needs --depth".into()))?;
            let width = ctx.common.width.ok_or_else(|| CliError::Usage("gen P needs --width".into()))?;
            let p = generate_p(depth, width, ctx.cap_or(DEFAULT_ELEMENT_CAP))?;
            Ok(Report::new(
                "gen P",
                ctx.inputs(),
                Verdict::Info,
                json!({"elements": p.len(), "poset": p.to_json()}),
            ))
        }
    }
}
