//! A finite-depth fragment of the cut space of the rationals in `(0,1)`,
//! ordered by `⪯`, with exact clopen arithmetic and separation witnesses.

pub mod clopen;
pub mod fragment;
pub mod point;
pub mod rational;
pub mod separation;

pub use clopen::{Block, ClopenJson, ClopenSet};
pub use fragment::{build_fragment, Fragment, FragmentJson, InvariantReport, IsoReport};
pub use point::{CutPoint, GapPoint, Position};
pub use rational::{format_rational, parse_rational, parse_rational_list, stern_brocot, Rational, Surd};
pub use separation::{separation_witness, sweep, verify_witness, SeparationCase, SweepReport, Witness, WitnessCheck};
