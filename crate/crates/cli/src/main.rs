//! `fatmod`: enumerate fatgraph censuses and verify intersection numbers.
//!
//! Exit codes: 0 success, 1 cache or input error, 2 resource limit (or bad
//! usage), 3 a report whose two evaluations disagree.

mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use fatmod::enumeration::{Caps, OrbifoldCensus, ValenceFilter};
use fatmod::integrals::{sweep, Identity, IntegralReport};
use fatmod::store::CensusStore;
use fatmod::trees::{enumerate_trees, Rooting, TreeProfile};
use fatmod::Error;

use output::{render_census, render_reports, CensusSummary};

#[derive(Parser, Debug)]
#[command(name = "fatmod", version, about = "Fatgraph censuses and exact intersection numbers")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    global: Global,
}

#[derive(Args, Debug)]
struct Global {
    /// Directory for census cache files.
    #[arg(long, global = true, env = "FATMOD_CACHE")]
    cache: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Human)]
    format: Format,
    /// Largest trivalent edge count to enumerate.
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    cap_edges: Option<u64>,
    /// Fail instead of enumerating when a census is not cached.
    #[arg(long, global = true)]
    no_build: bool,
    /// Seed for the choice of eliminated edge in volume computations.
    #[arg(long, global = true)]
    seed: Option<u64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Human,
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Enumerate censuses, refreshing the cache, and print class counts and masses.
    Enumerate(EnumerateArgs),
    /// Evaluate one identity over a range and check both evaluations agree.
    Verify(VerifyArgs),
    /// Evaluate every identity over a range.
    Report(ReportArgs),
}

#[derive(Args, Debug)]
struct EnumerateArgs {
    /// A single type `g,n`.
    #[arg(long = "type", value_parser = parse_type, conflicts_with_all = ["g", "trees", "hyperelliptic"])]
    graph_type: Option<(usize, usize)>,
    /// Genus range `A..B` (inclusive) or a single genus.
    #[arg(long, value_parser = parse_range)]
    g: Option<(usize, usize)>,
    /// Boundary count used with `--g`.
    #[arg(long, default_value_t = 1)]
    n: usize,
    /// Only trivalent graphs.
    #[arg(long, conflicts_with = "one_vertex")]
    trivalent: bool,
    /// Exactly one vertex of this valence, the rest trivalent.
    #[arg(long)]
    one_vertex: Option<usize>,
    /// Planar trees instead of fatgraphs.
    #[arg(long, requires = "leaves", conflicts_with = "hyperelliptic")]
    trees: bool,
    #[arg(long)]
    leaves: Option<usize>,
    #[arg(long, value_enum, default_value_t = Profile::Trivalent)]
    profile: Profile,
    #[arg(long)]
    rooted: bool,
    /// Doubled-tree censuses of the hyperelliptic locus for `--g`.
    #[arg(long, requires = "g")]
    hyperelliptic: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Profile {
    Trivalent,
    OneFiveValent,
    MarkedTrivalent,
    OddValence,
}

impl From<Profile> for TreeProfile {
    fn from(p: Profile) -> Self {
        match p {
            Profile::Trivalent => TreeProfile::Trivalent,
            Profile::OneFiveValent => TreeProfile::OneFiveValent,
            Profile::MarkedTrivalent => TreeProfile::MarkedTrivalent,
            Profile::OddValence => TreeProfile::OddValence,
        }
    }
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(long, value_parser = parse_identity)]
    identity: Identity,
    /// Genus range `A..B` (inclusive) or a single genus.
    #[arg(long, value_parser = parse_range)]
    g: Option<(usize, usize)>,
    /// Marked-point range for the genus-zero identity.
    #[arg(long, value_parser = parse_range)]
    n: Option<(usize, usize)>,
}

#[derive(Args, Debug)]
struct ReportArgs {
    #[arg(long, value_parser = parse_range, default_value = "1..3")]
    g: (usize, usize),
    #[arg(long, value_parser = parse_range, default_value = "3..9")]
    n: (usize, usize),
}

fn parse_range(s: &str) -> Result<(usize, usize), String> {
    let (a, b) = match s.split_once("..") {
        Some((a, b)) => (a, b.strip_prefix('=').unwrap_or(b)),
        None => (s, s),
    };
    let a: usize = a.trim().parse().map_err(|_| format!("bad range start {a:?}"))?;
    let b: usize = b.trim().parse().map_err(|_| format!("bad range end {b:?}"))?;
    if a > b {
        return Err(format!("empty range {s:?}"));
    }
    Ok((a, b))
}

fn parse_type(s: &str) -> Result<(usize, usize), String> {
    let (g, n) = s.split_once(',').ok_or_else(|| format!("type must be `g,n`, got {s:?}"))?;
    Ok((g.trim().parse().map_err(|_| format!("bad genus {g:?}"))?, n.trim().parse().map_err(|_| format!("bad n {n:?}"))?))
}

fn parse_identity(s: &str) -> Result<Identity, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::ResourceLimit(_) => 2,
        _ => 1,
    }
}

fn store(global: &Global) -> CensusStore {
    let mut caps = Caps::default();
    if let Some(e) = global.cap_edges {
        caps = caps.with_max_edges(e as usize);
    }
    let s = match &global.cache {
        Some(dir) => CensusStore::with_dir(caps, dir, !global.no_build),
        None => CensusStore::in_memory(caps),
    };
    match global.seed {
        Some(seed) => s.with_seed(seed),
        None => s,
    }
}

fn enumerate(args: &EnumerateArgs, global: &Global) -> Result<Vec<CensusSummary>, Error> {
    let s = store(global);
    let filter = if args.trivalent {
        ValenceFilter::Trivalent
    } else if let Some(k) = args.one_vertex {
        ValenceFilter::OneVertex(k)
    } else {
        ValenceFilter::All
    };
    let mut out = Vec::new();
    let mut push = |c: &OrbifoldCensus| out.push(CensusSummary::of(c));
    if args.trees {
        let leaves = args.leaves.expect("clap requires --leaves");
        let profile = args.profile.into();
        if args.rooted {
            push(&enumerate_trees(leaves, profile, Rooting::Rooted, s.caps())?);
        } else {
            push(&*s.trees(leaves, profile)?);
        }
        return Ok(out);
    }
    if let Some((g, n)) = args.graph_type {
        push(&*s.fatgraphs(g, n, filter)?);
        return Ok(out);
    }
    let (a, b) = args.g.unwrap_or((1, 1));
    for g in a..=b {
        if args.hyperelliptic {
            push(&*s.hyperelliptic(g)?);
            if g >= 2 {
                let (x, y) = s.w1h(g)?;
                push(&x);
                push(&y);
            }
        } else {
            push(&*s.fatgraphs(g, args.n, filter)?);
        }
    }
    Ok(out)
}

fn indices(identity: Identity, g: Option<(usize, usize)>, n: Option<(usize, usize)>) -> Vec<usize> {
    let (a, b) = match identity {
        Identity::Genus0 => n.or(g).unwrap_or((3, 9)),
        _ => g.unwrap_or((identity.min_index(), identity.min_index())),
    };
    (a.max(identity.min_index())..=b).collect()
}

fn verify(args: &VerifyArgs, global: &Global) -> Result<Vec<IntegralReport>, Error> {
    let s = store(global);
    sweep(args.identity, &indices(args.identity, args.g, args.n), &s)
}

fn report(args: &ReportArgs, global: &Global) -> Result<Vec<IntegralReport>, Error> {
    let s = store(global);
    let mut out = Vec::new();
    for id in Identity::ALL {
        out.extend(sweep(id, &indices(id, Some(args.g), Some(args.n)), &s)?);
    }
    Ok(out)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let g = &cli.global;
    let result = match &cli.command {
        Command::Enumerate(a) => enumerate(a, g).map(|c| (render_census(&c, g.format), true)),
        Command::Verify(a) => verify(a, g).map(|r| (render_reports(&r, g.format), r.iter().all(|x| x.matched))),
        Command::Report(a) => report(a, g).map(|r| (render_reports(&r, g.format), r.iter().all(|x| x.matched))),
    };
    match result {
        Ok((text, ok)) => {
            print!("{text}");
            if ok {
                ExitCode::SUCCESS
            } else {
                eprintln!("fatmod: at least one report does not match");
                ExitCode::from(3)
            }
        }
        Err(e) => {
            eprintln!("fatmod: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
