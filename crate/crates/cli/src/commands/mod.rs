pub mod cutspace;
pub mod generate;
pub mod lattice;
pub mod poset;
pub mod topo;

use serde_json::{json, Value};

use ordtop::poset::ElemSet;
use ordtop::FinitePoset;

pub(crate) fn set_names(p: &FinitePoset, s: &ElemSet) -> Value {
    json!(p.names_of(s))
}

pub(crate) fn pair_names(p: &FinitePoset, pairs: &[(usize, usize)]) -> Value {
    json!(pairs
        .iter()
        .map(|&(a, b)| [p.name(a), p.name(b)])
        .collect::<Vec<_>>())
}
