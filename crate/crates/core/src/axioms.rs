//! Verifiers for impartiality, monotonicity, individual full rank, weak
//! unanimity and unanimity on any [`RankingMechanism`].
//!
//! Three modes are available. `Full` enumerates every profile and is limited
//! to [`FULL_PROFILE_LIMIT`] profiles. `Reduced` uses the mechanism's
//! [`Structure`]: message mechanisms are enumerated per message vector,
//! decisive mechanisms per triple of decisive rankings. `Sampled` draws
//! seeded random profiles and never reports that an axiom holds.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::blocking::{BlockingMechanism, MessageVector};
use crate::exec::{Executor, Sequential};
use crate::impossibility::unanimity_chain_audit;
use crate::mechanism::{RankingMechanism, Structure};
use crate::perms::{factorial, Permutation, RankingProfile};
use crate::set::PositionSet;
use crate::tricolor::{MatrixTriple, WeakUnanimityMechanism};
use crate::{Error, Result};

/// Largest number of full profiles `Full` mode will enumerate.
pub const FULL_PROFILE_LIMIT: u64 = 10_000_000;

/// Largest `n!` enumerated when checking unanimous profiles.
pub const UNANIMOUS_LIMIT: u64 = 10_000_000;

pub const DEFAULT_TRIALS: u64 = 10_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Axiom {
    Impartiality,
    Monotonicity,
    IndividualFullRank,
    WeakUnanimity,
    Unanimity,
}

impl Axiom {
    pub const ALL: [Axiom; 5] =
        [Axiom::Impartiality, Axiom::Monotonicity, Axiom::IndividualFullRank, Axiom::WeakUnanimity, Axiom::Unanimity];

    pub fn name(self) -> &'static str {
        match self {
            Axiom::Impartiality => "impartiality",
            Axiom::Monotonicity => "monotonicity",
            Axiom::IndividualFullRank => "individual-full-rank",
            Axiom::WeakUnanimity => "weak-unanimity",
            Axiom::Unanimity => "unanimity",
        }
    }
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Axiom {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Axiom::ALL
            .into_iter()
            .find(|a| a.name() == s || (s == "ifr" && *a == Axiom::IndividualFullRank))
            .ok_or_else(|| Error::InvalidParameter(format!("unknown axiom `{s}`")))
    }
}

/// What the caller asks for.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    /// Every profile in `P_n^n`.
    Full,
    /// Structure-aware enumeration; falls back to `Full` for opaque
    /// mechanisms.
    Reduced,
    Sampled {
        trials: u64,
        seed: u64,
    },
}

/// What a report was actually based on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Coverage {
    Exhaustive,
    ReducedExhaustive,
    Sampled { trials: u64, seed: u64 },
}

impl Coverage {
    pub fn name(self) -> &'static str {
        match self {
            Coverage::Exhaustive => "exhaustive",
            Coverage::ReducedExhaustive => "reduced-exhaustive",
            Coverage::Sampled { .. } => "sampled",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Holds,
    Violated,
    InconclusiveSampled,
}

impl Verdict {
    pub fn name(self) -> &'static str {
        match self {
            Verdict::Holds => "holds",
            Verdict::Violated => "violated",
            Verdict::InconclusiveSampled => "inconclusive-sampled",
        }
    }
}

/// A concrete counterexample that can be re-evaluated.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Witness {
    /// `agent` lands elsewhere when it submits `deviation` instead.
    Impartiality { profile: RankingProfile, agent: usize, deviation: Permutation },
    /// `raised` moves up in `agent`'s ranking (giving `deviation`) and drops
    /// in the output.
    Monotonicity { profile: RankingProfile, agent: usize, raised: usize, deviation: Permutation },
    /// All agents submit `ranking` and the output differs.
    WeakUnanimity { ranking: Permutation },
    /// Every agent ranks `above` over `below`; the output does not.
    Unanimity { profile: RankingProfile, above: usize, below: usize },
    /// No profile in the enumerated space places `agent` at `position`.
    Unreachable { agent: usize, position: usize },
}

impl Witness {
    pub fn axiom(&self) -> Axiom {
        match self {
            Witness::Impartiality { .. } => Axiom::Impartiality,
            Witness::Monotonicity { .. } => Axiom::Monotonicity,
            Witness::WeakUnanimity { .. } => Axiom::WeakUnanimity,
            Witness::Unanimity { .. } => Axiom::Unanimity,
            Witness::Unreachable { .. } => Axiom::IndividualFullRank,
        }
    }

    /// Re-evaluates the mechanism and reports whether the violation is still
    /// there.
    pub fn replay<M: RankingMechanism + Sync + ?Sized>(&self, mech: &M) -> Result<bool> {
        match self {
            Witness::Impartiality { profile, agent, deviation } => {
                let before = mech.rank(profile)?.position_of(*agent);
                let after = mech.rank(&profile.replace(*agent, deviation.clone())?)?;
                Ok(before != after.position_of(*agent))
            }
            Witness::Monotonicity { profile, agent, raised, deviation } => {
                if !is_raise_of(profile.ranking(*agent), deviation, *raised) {
                    return Ok(false);
                }
                let before = mech.rank(profile)?.position_of(*raised);
                let after = mech.rank(&profile.replace(*agent, deviation.clone())?)?;
                Ok(after.position_of(*raised) > before)
            }
            Witness::WeakUnanimity { ranking } => Ok(mech.rank(&RankingProfile::unanimous(ranking))? != *ranking),
            Witness::Unanimity { profile, above, below } => {
                let agreed = profile.rankings().iter().all(|p| p.prefers(*above, *below));
                Ok(agreed && !mech.rank(profile)?.prefers(*above, *below))
            }
            Witness::Unreachable { agent, position } => {
                let reached = reachable(mech, &Sequential)?;
                Ok(!reached.1[*agent].contains(*position))
            }
        }
    }
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Witness::Impartiality { agent, deviation, .. } => {
                write!(f, "agent {agent} moves by submitting {deviation}")
            }
            Witness::Monotonicity { agent, raised, deviation, .. } => {
                write!(f, "agent {raised} drops when agent {agent} raises it (new ranking {deviation})")
            }
            Witness::WeakUnanimity { ranking } => write!(f, "unanimous {ranking} is not reproduced"),
            Witness::Unanimity { above, below, .. } => {
                write!(f, "all agents rank {above} over {below} but the output does not")
            }
            Witness::Unreachable { agent, position } => {
                write!(f, "agent {agent} never reaches position {position}")
            }
        }
    }
}

/// True if `after` is `before` with `agent` moved up and every other pair in
/// the same relative order.
pub fn is_raise_of(before: &Permutation, after: &Permutation, agent: usize) -> bool {
    if before.n() != after.n() || after.position_of(agent) > before.position_of(agent) {
        return false;
    }
    let strip = |p: &Permutation| p.image().iter().copied().filter(|&a| a != agent).collect::<Vec<_>>();
    strip(before) == strip(after)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AxiomReport {
    pub axiom: Axiom,
    pub coverage: Coverage,
    pub verdict: Verdict,
    pub witness: Option<Witness>,
    /// Number of elementary comparisons or evaluations performed.
    pub checked: u64,
    pub note: Option<String>,
}

impl AxiomReport {
    fn new(axiom: Axiom, coverage: Coverage, witness: Option<Witness>, checked: u64) -> Self {
        let verdict = match (&witness, coverage) {
            (Some(_), _) => Verdict::Violated,
            (None, Coverage::Sampled { .. }) => Verdict::InconclusiveSampled,
            (None, _) => Verdict::Holds,
        };
        AxiomReport { axiom, coverage, verdict, witness, checked, note: None }
    }

    fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }
}

/// Runs one axiom check on the calling thread.
pub fn check<M: RankingMechanism + Sync + ?Sized>(axiom: Axiom, mech: &M, mode: Mode) -> Result<AxiomReport> {
    check_with(axiom, mech, mode, &Sequential)
}

/// Runs one axiom check, splitting large sweeps with `exec`.
pub fn check_with<M, E>(axiom: Axiom, mech: &M, mode: Mode, exec: &E) -> Result<AxiomReport>
where
    M: RankingMechanism + Sync + ?Sized,
    E: Executor,
{
    match mode {
        Mode::Sampled { trials, seed } => sampled(axiom, mech, trials, seed),
        Mode::Full => full(axiom, mech, exec),
        Mode::Reduced => match (axiom, mech.structure()) {
            (Axiom::WeakUnanimity, _) => weak_unanimity_exhaustive(mech),
            (Axiom::Unanimity, _) => unanimity_reduced(mech, exec),
            (_, Structure::Messages(b)) => messages_reduced(axiom, mech, b),
            (Axiom::Impartiality, Structure::Decisive(w)) => decisive_impartiality(w, exec),
            (Axiom::IndividualFullRank, Structure::Decisive(w)) => decisive_ifr(mech, w, exec),
            (Axiom::Monotonicity, Structure::Decisive(_)) => {
                if full_profile_count(mech.n()).is_some() {
                    full(axiom, mech, exec)
                } else {
                    Err(Error::ModeInfeasible(format!(
                        "no reduced monotonicity check for decisive mechanisms with n = {}",
                        mech.n()
                    )))
                }
            }
            (_, Structure::Opaque) => full(axiom, mech, exec),
        },
    }
}

pub fn check_impartiality<M: RankingMechanism + Sync + ?Sized>(mech: &M, mode: Mode) -> Result<AxiomReport> {
    check(Axiom::Impartiality, mech, mode)
}

pub fn check_monotonicity<M: RankingMechanism + Sync + ?Sized>(mech: &M, mode: Mode) -> Result<AxiomReport> {
    check(Axiom::Monotonicity, mech, mode)
}

/// Looks for a witness for every agent/position pair, using the mechanism's
/// structure when available.
pub fn check_individual_full_rank<M: RankingMechanism + Sync + ?Sized>(mech: &M) -> Result<AxiomReport> {
    check(Axiom::IndividualFullRank, mech, Mode::Reduced)
}

pub fn check_weak_unanimity<M: RankingMechanism + Sync + ?Sized>(mech: &M, mode: Mode) -> Result<AxiomReport> {
    check(Axiom::WeakUnanimity, mech, mode)
}

pub fn check_unanimity<M: RankingMechanism + Sync + ?Sized>(mech: &M, mode: Mode) -> Result<AxiomReport> {
    check(Axiom::Unanimity, mech, mode)
}

// ---------------------------------------------------------------------------
// Full enumeration

/// `(n!)^n` if it is within [`FULL_PROFILE_LIMIT`].
pub fn full_profile_count(n: usize) -> Option<u64> {
    let m = factorial(n).ok()?;
    let mut total: u64 = 1;
    for _ in 0..n {
        total = total.checked_mul(m)?;
    }
    (total <= FULL_PROFILE_LIMIT && n <= 8).then_some(total)
}

/// Output positions of every profile. Profile `x` has agent `i` submitting
/// the permutation with lex index `(x / m^i) % m`.
struct ProfileTable {
    n: usize,
    m: u64,
    total: u64,
    perms: Vec<Permutation>,
    pos: Vec<u8>,
}

impl ProfileTable {
    fn build<M, E>(mech: &M, exec: &E) -> Result<Self>
    where
        M: RankingMechanism + Sync + ?Sized,
        E: Executor,
    {
        let n = mech.n();
        let total = full_profile_count(n).ok_or_else(|| {
            Error::ModeInfeasible(format!("full enumeration of (n!)^n profiles is too large for n = {n}"))
        })?;
        let m = factorial(n)?;
        let perms: Vec<Permutation> = (0..m).map(|p| Permutation::lex_unrank(n, p)).collect::<Result<_>>()?;
        let chunks = exec.run(total, &|range| -> Result<Vec<u8>> {
            let mut out = Vec::with_capacity((range.end - range.start) as usize * n);
            for x in range {
                let profile = profile_at(&perms, n, m, x);
                let r = mech.rank(&profile)?;
                out.extend(r.positions().iter().map(|&k| k as u8));
            }
            Ok(out)
        });
        let mut pos = Vec::with_capacity(total as usize * n);
        for c in chunks {
            pos.extend(c?);
        }
        Ok(ProfileTable { n, m, total, perms, pos })
    }

    fn at(&self, x: u64, agent: usize) -> usize {
        self.pos[x as usize * self.n + agent] as usize
    }

    fn profile(&self, x: u64) -> RankingProfile {
        profile_at(&self.perms, self.n, self.m, x)
    }
}

fn profile_at(perms: &[Permutation], n: usize, m: u64, mut x: u64) -> RankingProfile {
    let mut rankings = Vec::with_capacity(n);
    for _ in 0..n {
        rankings.push(perms[(x % m) as usize].clone());
        x /= m;
    }
    RankingProfile::new(rankings).expect("square profile")
}

fn full<M, E>(axiom: Axiom, mech: &M, exec: &E) -> Result<AxiomReport>
where
    M: RankingMechanism + Sync + ?Sized,
    E: Executor,
{
    if axiom == Axiom::WeakUnanimity {
        return weak_unanimity_exhaustive(mech);
    }
    let t = ProfileTable::build(mech, exec)?;
    let (n, m) = (t.n, t.m);
    let stride: Vec<u64> = (0..n).map(|i| m.pow(i as u32)).collect();
    let digit = |x: u64, i: usize| (x / stride[i]) % m;
    let mut checked = 0u64;
    let witness = match axiom {
        Axiom::Impartiality => {
            let mut found = None;
            'outer: for x in 0..t.total {
                for (i, &s) in stride.iter().enumerate() {
                    if digit(x, i) != 0 {
                        continue;
                    }
                    for d in 1..m {
                        checked += 1;
                        if t.at(x + d * s, i) != t.at(x, i) {
                            found = Some(Witness::Impartiality {
                                profile: t.profile(x),
                                agent: i,
                                deviation: t.perms[d as usize].clone(),
                            });
                            break 'outer;
                        }
                    }
                }
            }
            found
        }
        Axiom::Monotonicity => {
            let raise = raise_table(&t.perms)?;
            let mut found = None;
            'outer: for x in 0..t.total {
                for (i, &s) in stride.iter().enumerate() {
                    let d = digit(x, i);
                    for a in 0..n {
                        let Some(d2) = raise[d as usize * n + a] else { continue };
                        checked += 1;
                        let y = x - d * s + d2 * s;
                        if t.at(y, a) > t.at(x, a) {
                            found = Some(Witness::Monotonicity {
                                profile: t.profile(x),
                                agent: i,
                                raised: a,
                                deviation: t.perms[d2 as usize].clone(),
                            });
                            break 'outer;
                        }
                    }
                }
            }
            found
        }
        Axiom::IndividualFullRank => {
            let mut reached = alloc::vec![PositionSet::EMPTY; n];
            for x in 0..t.total {
                for (j, r) in reached.iter_mut().enumerate() {
                    r.insert(t.at(x, j));
                }
            }
            checked = t.total;
            first_unreached(&reached)
        }
        Axiom::Unanimity => {
            let pairs: Vec<u64> = t.perms.iter().map(pair_mask).collect();
            let mut found = None;
            'outer: for x in 0..t.total {
                let mut agreed = u64::MAX;
                for i in 0..n {
                    agreed &= pairs[digit(x, i) as usize];
                }
                while agreed != 0 {
                    let bit = agreed.trailing_zeros() as usize;
                    agreed &= agreed - 1;
                    let (a, b) = (bit / n, bit % n);
                    checked += 1;
                    if t.at(x, a) > t.at(x, b) {
                        found = Some(Witness::Unanimity { profile: t.profile(x), above: a, below: b });
                        break 'outer;
                    }
                }
            }
            found
        }
        Axiom::WeakUnanimity => unreachable!(),
    };
    Ok(AxiomReport::new(axiom, Coverage::Exhaustive, witness, checked))
}

/// Bit `a * n + b` is set when `a` is ranked above `b`.
fn pair_mask(p: &Permutation) -> u64 {
    let n = p.n();
    let img = p.image();
    let mut mask = 0;
    for x in 0..n {
        for y in x + 1..n {
            mask |= 1 << (img[x] * n + img[y]);
        }
    }
    mask
}

/// `raise[p * n + a]` is the lex index of permutation `p` with agent `a`
/// moved up one position.
fn raise_table(perms: &[Permutation]) -> Result<Vec<Option<u64>>> {
    let n = perms.first().map_or(0, |p| p.n());
    let mut out = Vec::with_capacity(perms.len() * n);
    for p in perms {
        for a in 0..n {
            let mut q = p.clone();
            out.push(if q.raise(a) { Some(q.lex_rank()?) } else { None });
        }
    }
    Ok(out)
}

fn first_unreached(reached: &[PositionSet]) -> Option<Witness> {
    let n = reached.len();
    reached.iter().enumerate().find_map(|(j, r)| {
        PositionSet::full(n).difference(*r).min().map(|k| Witness::Unreachable { agent: j, position: k })
    })
}

/// Positions reached by each agent, over the smallest complete enumeration
/// the mechanism's structure allows.
fn reachable<M, E>(mech: &M, exec: &E) -> Result<(Coverage, Vec<PositionSet>)>
where
    M: RankingMechanism + Sync + ?Sized,
    E: Executor,
{
    let n = mech.n();
    let mut reached = alloc::vec![PositionSet::EMPTY; n];
    match mech.structure() {
        Structure::Messages(b) if n <= crate::blocking::sets::EXHAUSTIVE_LIMIT => {
            for mask in 0..1u64 << n {
                let out = mech.rank(&b.realize(MessageVector::from_mask(n, mask)))?;
                for (j, r) in reached.iter_mut().enumerate() {
                    r.insert(out.position_of(j));
                }
            }
            Ok((Coverage::ReducedExhaustive, reached))
        }
        Structure::Decisive(w) if full_profile_count(n).is_none() => {
            let m = w.triple().m();
            let parts = exec.run(m, &|range| {
                let mut reached = alloc::vec![PositionSet::EMPTY; n];
                for p in range {
                    for q in 0..m {
                        for r in 0..m {
                            for (j, k) in w.positions(p, q, r).into_iter().enumerate() {
                                reached[j].insert(k);
                            }
                        }
                    }
                }
                reached
            });
            for part in parts {
                for (a, b) in reached.iter_mut().zip(part) {
                    *a = a.union(b);
                }
            }
            Ok((Coverage::ReducedExhaustive, reached))
        }
        _ => {
            let t = ProfileTable::build(mech, exec)?;
            for x in 0..t.total {
                for (j, r) in reached.iter_mut().enumerate() {
                    r.insert(t.at(x, j));
                }
            }
            Ok((Coverage::Exhaustive, reached))
        }
    }
}

// ---------------------------------------------------------------------------
// Weak unanimity

fn weak_unanimity_exhaustive<M: RankingMechanism + ?Sized>(mech: &M) -> Result<AxiomReport> {
    let n = mech.n();
    let m = factorial(n)?;
    if m > UNANIMOUS_LIMIT {
        return Err(Error::ModeInfeasible(format!("{n}! unanimous profiles are too many")));
    }
    for p in 0..m {
        let ranking = Permutation::lex_unrank(n, p)?;
        if mech.rank(&RankingProfile::unanimous(&ranking))? != ranking {
            return Ok(AxiomReport::new(
                Axiom::WeakUnanimity,
                Coverage::Exhaustive,
                Some(Witness::WeakUnanimity { ranking }),
                p + 1,
            ));
        }
    }
    Ok(AxiomReport::new(Axiom::WeakUnanimity, Coverage::Exhaustive, None, m))
}

// ---------------------------------------------------------------------------
// Unanimity

fn unanimity_reduced<M, E>(mech: &M, exec: &E) -> Result<AxiomReport>
where
    M: RankingMechanism + Sync + ?Sized,
    E: Executor,
{
    let finding = unanimity_chain_audit(mech)?;
    if let w @ Witness::Unanimity { .. } = finding.witness {
        return Ok(AxiomReport::new(Axiom::Unanimity, Coverage::ReducedExhaustive, Some(w), finding.evaluations)
            .with_note(format!("found by the unanimity chain at step {}", finding.step)));
    }
    if full_profile_count(mech.n()).is_some() {
        return full(Axiom::Unanimity, mech, exec)
            .map(|r| r.with_note("chain audit found an impartiality violation; fell back to full enumeration"));
    }
    Err(Error::ModeInfeasible(format!(
        "unanimity chain found no unanimity violation and full enumeration is infeasible for n = {}",
        mech.n()
    )))
}

// ---------------------------------------------------------------------------
// Message mechanisms

fn messages_reduced<M: RankingMechanism + Sync + ?Sized>(
    axiom: Axiom,
    mech: &M,
    b: &BlockingMechanism,
) -> Result<AxiomReport> {
    let n = b.n();
    if n > crate::blocking::sets::EXHAUSTIVE_LIMIT {
        return Err(Error::ModeInfeasible(format!("2^{n} message vectors are too many")));
    }
    let cov = Coverage::ReducedExhaustive;
    let mut checked = 0u64;
    match axiom {
        Axiom::Impartiality => {
            // Both realizations of each agent's bit, for every message vector.
            for mask in 0..1u64 << n {
                let v = MessageVector::from_mask(n, mask);
                let profile = b.realize(v);
                let out = mech.rank(&profile)?;
                for i in (0..n).filter(|&i| !v.bit(i)) {
                    let deviation = b.realize(v.with(i, true)).ranking(i).clone();
                    let alt = mech.rank(&profile.replace(i, deviation.clone())?)?;
                    checked += 1;
                    if alt.position_of(i) != out.position_of(i) {
                        let w = Witness::Impartiality { profile, agent: i, deviation };
                        return Ok(AxiomReport::new(axiom, cov, Some(w), checked));
                    }
                }
            }
            Ok(AxiomReport::new(axiom, cov, None, checked))
        }
        Axiom::Monotonicity => {
            // A raise changes the output only if it flips the raising agent's
            // bit, i.e. rho_i overtakes i. Raising i itself is covered by
            // impartiality.
            for mask in 0..1u64 << n {
                let v = MessageVector::from_mask(n, mask);
                let profile = b.realize(v);
                let out = mech.rank(&profile)?;
                for i in (0..n).filter(|&i| !v.bit(i)) {
                    let r = b.rho().get(i);
                    let deviation = move_above(profile.ranking(i), r, i);
                    let alt = mech.rank(&profile.replace(i, deviation.clone())?)?;
                    checked += 1;
                    if alt.position_of(r) > out.position_of(r) {
                        let w = Witness::Monotonicity { profile, agent: i, raised: r, deviation };
                        return Ok(AxiomReport::new(axiom, cov, Some(w), checked));
                    }
                }
            }
            Ok(AxiomReport::new(axiom, cov, None, checked))
        }
        Axiom::IndividualFullRank => {
            let mut missing = false;
            for j in 0..n {
                for k in 0..n {
                    let profile = b.ifr_witness(j, k)?;
                    checked += 1;
                    if mech.rank(&profile)?.agent_at(k) != j {
                        missing = true;
                    }
                }
            }
            if !missing {
                return Ok(AxiomReport::new(axiom, cov, None, checked)
                    .with_note("constructive witness found for every agent and position"));
            }
            let (cov, reached) = reachable(mech, &Sequential)?;
            Ok(AxiomReport::new(axiom, cov, first_unreached(&reached), checked + (1 << n)))
        }
        Axiom::WeakUnanimity | Axiom::Unanimity => unreachable!("dispatched elsewhere"),
    }
}

/// `p` with `agent` moved to the position directly above `target`.
fn move_above(p: &Permutation, agent: usize, target: usize) -> Permutation {
    let mut image: Vec<usize> = p.image().iter().copied().filter(|&a| a != agent).collect();
    let k = image.iter().position(|&a| a == target).expect("target present");
    image.insert(k, agent);
    Permutation::new(image).expect("reordering keeps a permutation")
}

// ---------------------------------------------------------------------------
// Decisive mechanisms

/// Per-range result of the decisive-triple sweep.
#[derive(Clone, Debug, Default)]
pub struct TripleSweep {
    pub triples: u64,
    pub witness: Option<(u64, u64, u64, TripleFailure)>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TripleFailure {
    /// Two agents share a position.
    NotPermutation,
    /// Decisive agent's position changed with its own index.
    Moves { agent: usize },
}

/// Evaluates every triple with first index in `p_range`, checking that the
/// output is a permutation and that each decisive agent's position does not
/// depend on its own index.
pub fn sweep_decisive_triples(w: &WeakUnanimityMechanism, p_range: core::ops::Range<u64>) -> TripleSweep {
    let n = w.n();
    let m = w.triple().m();
    let data = w.triple().index_table();
    let at = |p: u64, q: u64, r: u64, out: &mut [usize]| {
        w.positions_from((p, &data[p as usize]), (q, &data[q as usize]), (r, &data[r as usize]), out)
    };
    // Reference positions with the agent's own index fixed to 0.
    let mut ref0 = alloc::vec![0u8; (m * m) as usize];
    let mut buf = alloc::vec![0usize; n];
    for q in 0..m {
        for r in 0..m {
            at(0, q, r, &mut buf);
            ref0[(q * m + r) as usize] = buf[0] as u8;
        }
    }
    let mut sweep = TripleSweep::default();
    for p in p_range {
        let mut ref1 = alloc::vec![0u8; m as usize];
        for r in 0..m {
            at(p, 0, r, &mut buf);
            ref1[r as usize] = buf[1] as u8;
        }
        for q in 0..m {
            at(p, q, 0, &mut buf);
            let ref2 = buf[2];
            for r in 0..m {
                at(p, q, r, &mut buf);
                sweep.triples += 1;
                let mut seen = 0u64;
                for &k in &buf {
                    seen |= 1 << k;
                }
                let failure = if seen.count_ones() as usize != n {
                    Some(TripleFailure::NotPermutation)
                } else if buf[0] != ref0[(q * m + r) as usize] as usize {
                    Some(TripleFailure::Moves { agent: 0 })
                } else if buf[1] != ref1[r as usize] as usize {
                    Some(TripleFailure::Moves { agent: 1 })
                } else if buf[2] != ref2 {
                    Some(TripleFailure::Moves { agent: 2 })
                } else {
                    None
                };
                if let Some(f) = failure {
                    sweep.witness = Some((p, q, r, f));
                    return sweep;
                }
            }
        }
    }
    sweep
}

fn decisive_impartiality<E: Executor>(w: &WeakUnanimityMechanism, exec: &E) -> Result<AxiomReport> {
    let n = w.n();
    let m = w.triple().m();
    if m.checked_pow(3).map_or(true, |c| c > 100 * FULL_PROFILE_LIMIT) {
        return Err(Error::ModeInfeasible(format!("(n!)^3 decisive triples are too many for n = {n}")));
    }
    let parts = exec.run(m, &|range| sweep_decisive_triples(w, range));
    let mut triples = 0;
    for part in parts {
        triples += part.triples;
        if let Some((p, q, r, failure)) = part.witness {
            let perm = |x: u64| Permutation::lex_unrank(n, x);
            let mut profile = RankingProfile::unanimous(&Permutation::identity(n));
            profile.set(0, perm(p)?)?;
            profile.set(1, perm(q)?)?;
            profile.set(2, perm(r)?)?;
            return match failure {
                TripleFailure::NotPermutation => {
                    Err(Error::Inconsistent(format!("decisive triple ({p}, {q}, {r}) does not give a permutation")))
                }
                TripleFailure::Moves { agent } => {
                    let deviation = perm(0)?;
                    let w = Witness::Impartiality { profile, agent, deviation };
                    Ok(AxiomReport::new(Axiom::Impartiality, Coverage::ReducedExhaustive, Some(w), triples))
                }
            };
        }
    }
    Ok(AxiomReport::new(Axiom::Impartiality, Coverage::ReducedExhaustive, None, triples)
        .with_note("non-decisive agents do not influence the output"))
}

fn decisive_ifr<M, E>(mech: &M, w: &WeakUnanimityMechanism, exec: &E) -> Result<AxiomReport>
where
    M: RankingMechanism + Sync + ?Sized,
    E: Executor,
{
    let n = w.n();
    let mut checked = 0;
    let mut missing = false;
    for j in 0..n {
        for k in 0..n {
            let mut p = Permutation::identity(n);
            p.swap_positions(j, k);
            checked += 1;
            if mech.rank(&RankingProfile::unanimous(&p))?.agent_at(k) != j {
                missing = true;
            }
        }
    }
    if !missing {
        return Ok(AxiomReport::new(Axiom::IndividualFullRank, Coverage::ReducedExhaustive, None, checked)
            .with_note("unanimous witness found for every agent and position"));
    }
    let (cov, reached) = reachable(mech, exec)?;
    Ok(AxiomReport::new(Axiom::IndividualFullRank, cov, first_unreached(&reached), checked))
}

// ---------------------------------------------------------------------------
// Sampling

fn random_perm(n: usize, rng: &mut ChaCha8Rng) -> Permutation {
    let mut image: Vec<usize> = (0..n).collect();
    image.shuffle(rng);
    Permutation::new(image).expect("shuffle keeps a permutation")
}

fn random_profile(n: usize, rng: &mut ChaCha8Rng) -> RankingProfile {
    RankingProfile::new((0..n).map(|_| random_perm(n, rng)).collect()).expect("square profile")
}

/// A common ranking perturbed by a few adjacent swaps per agent, so that many
/// pairs stay unanimous.
fn near_unanimous_profile(n: usize, rng: &mut ChaCha8Rng) -> RankingProfile {
    let base = random_perm(n, rng);
    let rankings = (0..n)
        .map(|_| {
            let mut p = base.clone();
            for _ in 0..rng.random_range(0..=n / 2) {
                let k = rng.random_range(0..n - 1);
                p.swap_positions(k, k + 1);
            }
            p
        })
        .collect();
    RankingProfile::new(rankings).expect("square profile")
}

fn sampled<M: RankingMechanism + ?Sized>(axiom: Axiom, mech: &M, trials: u64, seed: u64) -> Result<AxiomReport> {
    let n = mech.n();
    let cov = Coverage::Sampled { trials, seed };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut reached = alloc::vec![PositionSet::EMPTY; n];
    for t in 0..trials {
        let witness = match axiom {
            Axiom::Impartiality => {
                let profile = random_profile(n, &mut rng);
                let i = rng.random_range(0..n);
                let deviation = random_perm(n, &mut rng);
                let before = mech.rank(&profile)?.position_of(i);
                let after = mech.rank(&profile.replace(i, deviation.clone())?)?.position_of(i);
                (before != after).then_some(Witness::Impartiality { profile, agent: i, deviation })
            }
            Axiom::Monotonicity => {
                let profile = random_profile(n, &mut rng);
                let i = rng.random_range(0..n);
                let a = rng.random_range(0..n);
                let mut deviation = profile.ranking(i).clone();
                if deviation.raise(a) {
                    let before = mech.rank(&profile)?.position_of(a);
                    let after = mech.rank(&profile.replace(i, deviation.clone())?)?.position_of(a);
                    (after > before).then_some(Witness::Monotonicity { profile, agent: i, raised: a, deviation })
                } else {
                    None
                }
            }
            Axiom::IndividualFullRank => {
                let out = mech.rank(&random_profile(n, &mut rng))?;
                for (j, r) in reached.iter_mut().enumerate() {
                    r.insert(out.position_of(j));
                }
                None
            }
            Axiom::WeakUnanimity => {
                let ranking = random_perm(n, &mut rng);
                (mech.rank(&RankingProfile::unanimous(&ranking))? != ranking)
                    .then_some(Witness::WeakUnanimity { ranking })
            }
            Axiom::Unanimity => {
                let profile =
                    if t % 2 == 0 { near_unanimous_profile(n, &mut rng) } else { random_profile(n, &mut rng) };
                let out = mech.rank(&profile)?;
                let mut agreed = u64::MAX;
                for p in profile.rankings() {
                    agreed &= pair_mask(p);
                }
                let mut found = None;
                while agreed != 0 && found.is_none() {
                    let bit = agreed.trailing_zeros() as usize;
                    agreed &= agreed - 1;
                    let (a, b) = (bit / n, bit % n);
                    if !out.prefers(a, b) {
                        found = Some(Witness::Unanimity { profile: profile.clone(), above: a, below: b });
                    }
                }
                found
            }
        };
        if let Some(w) = witness {
            return Ok(AxiomReport::new(axiom, cov, Some(w), t + 1));
        }
    }
    let report = AxiomReport::new(axiom, cov, None, trials);
    if axiom == Axiom::IndividualFullRank {
        let covered = reached.iter().all(|r| r.len() == n);
        return Ok(report.with_note(if covered {
            "every agent/position pair was observed in the sample"
        } else {
            "some agent/position pairs were not observed in the sample"
        }));
    }
    Ok(report)
}

// ---------------------------------------------------------------------------
// Implications between axioms

/// A stronger axiom holds while a weaker one it implies is violated.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LatticeInconsistency {
    pub stronger: Axiom,
    pub weaker: Axiom,
}

impl fmt::Display for LatticeInconsistency {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} holds but {} is violated", self.stronger, self.weaker)
    }
}

/// Checks unanimity => weak unanimity => individual full rank across reports
/// for one mechanism. Only `Holds` against `Violated` counts.
pub fn implication_meta_check(reports: &[AxiomReport]) -> core::result::Result<(), LatticeInconsistency> {
    const CHAIN: [(Axiom, Axiom); 3] = [
        (Axiom::Unanimity, Axiom::WeakUnanimity),
        (Axiom::WeakUnanimity, Axiom::IndividualFullRank),
        (Axiom::Unanimity, Axiom::IndividualFullRank),
    ];
    let verdict = |a: Axiom| reports.iter().filter(move |r| r.axiom == a).map(|r| r.verdict);
    for (stronger, weaker) in CHAIN {
        let holds = verdict(stronger).any(|v| v == Verdict::Holds);
        let violated = verdict(weaker).any(|v| v == Verdict::Violated);
        if holds && violated {
            return Err(LatticeInconsistency { stronger, weaker });
        }
    }
    Ok(())
}
