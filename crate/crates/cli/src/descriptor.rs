use clap::{Args, ValueEnum};
use impartial::blocking::{BlockingMechanism, DEFAULT_MAX_RETRIES, MIN_RANDOM_N};
use impartial::mechanism::Structure;
use impartial::perms::{Permutation, RankingProfile, MAX_RANK_N};
use impartial::tricolor::WeakUnanimityMechanism;
use impartial::RankingMechanism;
use serde::Serialize;

use crate::error::{CliError, CliResult, CAPACITY};
use crate::json::{read_json, CuttingFamilyJson, MultigraphJson};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Kind {
    /// Picks blocking-n4, blocking-fixture or blocking-random from `--n`.
    Blocking,
    BlockingN4,
    BlockingFixture,
    BlockingRandom,
    WeakUnanimity,
}

#[derive(Clone, Debug, Args)]
pub struct MechanismArgs {
    /// Mechanism kind.
    #[arg(long = "mechanism", value_enum)]
    pub kind: Kind,
    /// Number of agents.
    #[arg(long)]
    pub n: Option<usize>,
    /// Seed of the random multigraph search (blocking-random only).
    #[arg(long)]
    pub seed: Option<u64>,
    /// Retry limit of the random multigraph search.
    #[arg(long, default_value_t = DEFAULT_MAX_RETRIES)]
    pub max_retries: u32,
    /// Multigraph JSON to build a blocking mechanism from.
    #[arg(long, conflicts_with = "family")]
    pub graph: Option<String>,
    /// Cutting-family JSON for the weak-unanimity mechanism.
    #[arg(long)]
    pub family: Option<String>,
}

/// A validated, serializable name for a mechanism instance.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MechanismDescriptor {
    pub kind: Kind,
    pub n: usize,
    pub seed: Option<u64>,
    /// Source file when the instance was loaded rather than built in.
    pub fixture: Option<String>,
}

impl MechanismArgs {
    pub fn descriptor(&self) -> CliResult<MechanismDescriptor> {
        let n = match (self.kind, self.n) {
            (Kind::BlockingN4, None) => 4,
            (_, Some(n)) => n,
            (kind, None) => return Err(CliError::mismatch(format!("--mechanism {} needs --n", kind_name(kind)))),
        };
        if n > MAX_RANK_N {
            return Err(CliError::new(CAPACITY, format!("n = {n} exceeds the supported maximum of {MAX_RANK_N}")));
        }
        let kind = match self.kind {
            Kind::Blocking if n == 4 && self.graph.is_none() => Kind::BlockingN4,
            Kind::Blocking if n >= MIN_RANDOM_N && self.graph.is_none() => Kind::BlockingRandom,
            Kind::Blocking => Kind::BlockingFixture,
            k => k,
        };
        let fixture = self.graph.clone().or_else(|| self.family.clone());
        let d = MechanismDescriptor { kind, n, seed: self.seed, fixture };
        let fail = |why: &str| Err(CliError::mismatch(format!("--mechanism {} with n = {n}: {why}", kind_name(kind))));
        if kind != Kind::BlockingRandom && self.seed.is_some() {
            return fail("--seed applies to blocking-random only");
        }
        if kind != Kind::WeakUnanimity && self.family.is_some() {
            return fail("--family applies to weak-unanimity only");
        }
        match kind {
            Kind::BlockingN4 if n != 4 => fail("needs n = 4"),
            Kind::BlockingN4 if self.graph.is_some() => fail("--graph is not accepted"),
            Kind::BlockingFixture if self.graph.is_none() && !(5..=10).contains(&n) => {
                fail("built-in fixtures exist for n = 5..10; pass --graph for others")
            }
            Kind::BlockingRandom if self.graph.is_some() => fail("--graph is not accepted"),
            Kind::BlockingRandom if n < MIN_RANDOM_N => fail("needs n >= 11"),
            Kind::BlockingRandom if self.seed.is_none() => fail("needs --seed"),
            Kind::WeakUnanimity if n < 5 => fail("needs n >= 5"),
            _ => Ok(d),
        }
    }

    pub fn build(&self) -> CliResult<(MechanismDescriptor, Mechanism)> {
        let d = self.descriptor()?;
        let n = d.n;
        let mech = match d.kind {
            Kind::BlockingN4 => Mechanism::Blocking(BlockingMechanism::n4()),
            Kind::BlockingFixture => match &self.graph {
                Some(path) => {
                    let (rho, g) = read_json::<MultigraphJson>(path)?.to_graph(path)?;
                    if g.n() != n {
                        return Err(CliError::mismatch(format!("{path}: graph has n = {}, --n is {n}", g.n())));
                    }
                    let m = BlockingMechanism::from_multigraph(rho, &g)
                        .map_err(|e| CliError::input(format!("{path}: {e}")))?;
                    Mechanism::Blocking(m)
                }
                None => Mechanism::Blocking(BlockingMechanism::fixture(n)?),
            },
            Kind::BlockingRandom => {
                let seed = d.seed.expect("validated");
                let (m, _, report) = BlockingMechanism::random(n, seed, self.max_retries)?;
                eprintln!("multigraph found after {} attempts", report.attempts);
                Mechanism::Blocking(m)
            }
            Kind::WeakUnanimity => match &self.family {
                Some(path) => {
                    let f = read_json::<CuttingFamilyJson>(path)?.to_family(path)?;
                    if f.n() != n {
                        return Err(CliError::mismatch(format!("{path}: family has n = {}, --n is {n}", f.n())));
                    }
                    let w =
                        WeakUnanimityMechanism::with_family(f).map_err(|e| CliError::input(format!("{path}: {e}")))?;
                    Mechanism::WeakUnanimity(w)
                }
                None => Mechanism::WeakUnanimity(WeakUnanimityMechanism::new(n)?),
            },
            Kind::Blocking => unreachable!("resolved by descriptor()"),
        };
        Ok((d, mech))
    }
}

pub fn kind_name(k: Kind) -> &'static str {
    match k {
        Kind::Blocking => "blocking",
        Kind::BlockingN4 => "blocking-n4",
        Kind::BlockingFixture => "blocking-fixture",
        Kind::BlockingRandom => "blocking-random",
        Kind::WeakUnanimity => "weak-unanimity",
    }
}

pub enum Mechanism {
    Blocking(BlockingMechanism),
    WeakUnanimity(WeakUnanimityMechanism),
}

impl RankingMechanism for Mechanism {
    fn n(&self) -> usize {
        match self {
            Mechanism::Blocking(m) => m.n(),
            Mechanism::WeakUnanimity(m) => m.n(),
        }
    }

    fn rank(&self, profile: &RankingProfile) -> impartial::Result<Permutation> {
        match self {
            Mechanism::Blocking(m) => m.rank(profile),
            Mechanism::WeakUnanimity(m) => m.rank(profile),
        }
    }

    fn structure(&self) -> Structure<'_> {
        match self {
            Mechanism::Blocking(m) => m.structure(),
            Mechanism::WeakUnanimity(m) => m.structure(),
        }
    }
}
