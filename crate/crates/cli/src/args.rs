use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(
    name = "ordtop",
    version,
    about = "Finite order theory, duality and order-topology checks with JSON reports"
)]
pub struct Cli {
    #[command(flatten)]
    pub common: Common,

    #[command(subcommand)]
    pub group: Group,
}

/// Flags shared by every subcommand.
#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Read the input JSON from this file instead of standard input.
    #[arg(long = "in", value_name = "FILE", global = true)]
    pub input: Option<PathBuf>,

    /// Write the report to this file instead of standard output.
    #[arg(long, value_name = "FILE", global = true)]
    pub out: Option<PathBuf>,

    /// Human-readable report instead of JSON.
    #[arg(long, global = true)]
    pub pretty: bool,

    #[arg(long, default_value_t = 0, global = true)]
    pub seed: u64,

    #[arg(long, global = true)]
    pub depth: Option<usize>,

    #[arg(long, global = true)]
    pub width: Option<usize>,

    /// Size cap for enumerations (elements, down-sets or open-set universes).
    #[arg(long, global = true)]
    pub cap: Option<usize>,

    /// Enumeration prefix s0,s1,... as fractions in (0,1).
    #[arg(long, value_name = "S0,S1,...", global = true)]
    pub rationals: Option<String>,
}

#[derive(Debug, Subcommand)]
pub enum Group {
    /// Finite posets.
    Poset {
        #[command(subcommand)]
        cmd: PosetCmd,
    },
    /// Bounded distributive lattices and their prime spectra.
    Lattice {
        #[command(subcommand)]
        cmd: LatticeCmd,
    },
    /// Finite topologies on posets.
    Topo {
        #[command(subcommand)]
        cmd: TopoCmd,
    },
    /// Generators for the layered posets.
    Gen {
        #[command(subcommand)]
        cmd: GenCmd,
    },
    /// Finite fragments of the cut space of the rationals in (0,1).
    Cutspace {
        #[command(subcommand)]
        cmd: CutspaceCmd,
    },
}

#[derive(Debug, Subcommand)]
pub enum PosetCmd {
    /// Connected components of the comparability graph.
    Components,
    /// Down-closure of a set of elements.
    Downset {
        #[arg(long, value_delimiter = ',', required = true)]
        set: Vec<String>,
    },
    /// Up-closure of a set of elements.
    Upset {
        #[arg(long, value_delimiter = ',', required = true)]
        set: Vec<String>,
    },
    /// Closed interval [lo, hi].
    Interval {
        #[arg(long)]
        lo: String,
        #[arg(long)]
        hi: String,
    },
    /// Order isomorphism against a second poset.
    Iso {
        #[arg(long, value_name = "FILE")]
        other: PathBuf,
    },
    /// Axioms, chain facts and cone facts of a layered poset.
    #[command(name = "verify-P")]
    VerifyP,
}

#[derive(Debug, Subcommand)]
pub enum LatticeCmd {
    /// Bounds and distributivity.
    Check,
    /// Prime ideals.
    Ideals,
    /// Prime spectrum ordered by inclusion.
    Spectrum,
    /// Duality round trip of a poset or a lattice.
    Roundtrip,
}

#[derive(Debug, Subcommand)]
pub enum TopoCmd {
    /// Interval subbase of a poset.
    Subbase,
    /// Open sets generated by a subbase.
    Generate,
    /// Finite subcover of complements of principal cones.
    CoverCertify {
        /// Elements g contributing X minus the down-cone of g.
        #[arg(long, value_delimiter = ',')]
        a: Vec<String>,
        /// Elements g contributing X minus the up-cone of g.
        #[arg(long, value_delimiter = ',')]
        b: Vec<String>,
    },
    /// Compactness and separation by clopen decreasing sets.
    Priestley,
    /// Subbase for a disjoint union of Priestley spaces.
    UnionSubbase {
        /// Index of the distinguished part.
        #[arg(long)]
        part: usize,
        /// Name of the distinguished point inside that part.
        #[arg(long)]
        point: String,
    },
}

#[derive(Debug, Subcommand)]
pub enum GenCmd {
    /// Truncation of the layered poset at the given depth and width.
    #[command(name = "P")]
    P,
}

#[derive(Debug, Subcommand)]
pub enum CutspaceCmd {
    /// Place a fragment and check its interval invariants.
    Build,
    /// Isomorphism of the fragment order onto the layered poset.
    Iso,
    /// Clopen decreasing set containing u and missing v.
    Separate {
        #[arg(long)]
        u: String,
        #[arg(long)]
        v: String,
    },
    /// Separation witnesses for all pairs of points and probes.
    Sweep,
}
