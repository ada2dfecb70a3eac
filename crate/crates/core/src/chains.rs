//! Ascending chains of k-generated subgroups, in `G` and in the free group.
//!
//! A chain starts from random generators and repeatedly asks a proposal
//! strategy for a larger k-generated subgroup. A proposal is accepted only
//! when containment is verified in both directions (`H ≤ H′`, `H′ ≰ H`).
//! A chain has stabilized once a full round of proposals yields no strict
//! ascent; this is relative to the strategy, which the report names.

use alloc::boxed::Box;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use rand::Rng;

use crate::agraph::{
    canonical_form, fold_all, free_membership, spanning_tree_basis, stallings_graph, AGraph, Edge,
};
use crate::cancel::{dehn_unchecked, Presentation};
use crate::generic::{
    lmk_condition_holds, sample_few_relator, validate_params, GenericityParams, LengthMode,
    DEFAULT_NODE_CAP,
};
use crate::minimize::{membership, minimize, MinimizeOptions, SubgroupRep};
use crate::rng::stream;
use crate::words::{cyclic_reduce, is_proper_power, sample_reduced, Word};
use crate::{Error, Result};

/// Random proposals per strategy and generator in each round.
pub const PROPOSALS_PER_ROUND: usize = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Strategy {
    /// Replace a generator `g` by a word `u` (a subword of `g`, or `g` with a
    /// letter dropped), keeping the new set only if it still contains `g`.
    Replace,
    /// `{u} ∪ {u·h·u⁻¹}` truncated to k generators.
    Absorb,
    /// Replace a generator by a square root or a proper root.
    Root,
    /// All of the above, in the order root, replace, absorb.
    All,
}

impl Strategy {
    pub fn name(self) -> &'static str {
        match self {
            Strategy::Replace => "replace",
            Strategy::Absorb => "absorb",
            Strategy::Root => "root",
            Strategy::All => "all",
        }
    }

    pub fn parse(s: &str) -> Option<Strategy> {
        [
            Strategy::Replace,
            Strategy::Absorb,
            Strategy::Root,
            Strategy::All,
        ]
        .into_iter()
        .find(|x| x.name() == s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainStep {
    pub index: usize,
    pub generators: Vec<Word>,
    pub canonical: String,
    /// Strictly larger than the previous step (false for the first step).
    pub strict: bool,
    /// The subgroup has finite index and is stored as a coset graph.
    pub finite_index: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome {
    Stabilized,
    BudgetExhausted,
    Indeterminate(String),
}

impl Outcome {
    pub fn name(&self) -> &'static str {
        match self {
            Outcome::Stabilized => "stabilized",
            Outcome::BudgetExhausted => "budget-exhausted",
            Outcome::Indeterminate(_) => "indeterminate",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainReport {
    pub m: usize,
    pub k: usize,
    /// Empty for the free-group baseline.
    pub relators: Vec<Word>,
    pub strategy: Strategy,
    pub seed: u64,
    pub budget: usize,
    pub steps: Vec<ChainStep>,
    /// Number of steps when the chain stabilized.
    pub stabilization_index: Option<usize>,
    pub outcome: Outcome,
    pub word_cap: usize,
}

/// Subgroup arithmetic used by the chain driver.
trait Backend {
    type Rep: Clone;
    fn rank(&self) -> usize;
    /// `None` when the subgroup could not be represented reliably.
    fn build(&self, gens: &[Word]) -> Result<Option<Self::Rep>>;
    fn member(&self, rep: &Self::Rep, w: &Word) -> Result<bool>;
    fn graph<'a>(&self, rep: &'a Self::Rep) -> &'a AGraph;
    fn finite_index(&self, rep: &Self::Rep) -> bool;
    fn roots(&self, g: &Word) -> Result<Vec<Word>>;

    fn leq(&self, a: &Self::Rep, b: &Self::Rep) -> Result<bool> {
        for w in spanning_tree_basis(self.graph(a)) {
            if !self.member(b, &w)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// `c·x^{e/q}·c⁻¹` for `g = c·x^e·c⁻¹`, with `q` the smallest prime factor
/// of `e`.
fn free_root(g: &Word) -> Result<Option<Word>> {
    if g.is_empty() {
        return Ok(None);
    }
    let (cyc, conj) = cyclic_reduce(g);
    let Some((root, e)) = is_proper_power(&cyc)? else {
        return Ok(None);
    };
    let q = (2..=e).find(|q| e % q == 0).unwrap_or(e);
    Ok(Some(conj.mul(&root.pow(e / q)).mul(&conj.inverse())))
}

struct FreeBackend {
    m: usize,
}

impl Backend for FreeBackend {
    type Rep = AGraph;

    fn rank(&self) -> usize {
        self.m
    }

    fn build(&self, gens: &[Word]) -> Result<Option<AGraph>> {
        stallings_graph(gens, self.m).map(Some)
    }

    fn member(&self, rep: &AGraph, w: &Word) -> Result<bool> {
        Ok(free_membership(rep, w))
    }

    fn graph<'a>(&self, rep: &'a AGraph) -> &'a AGraph {
        rep
    }

    fn finite_index(&self, rep: &AGraph) -> bool {
        is_complete(rep)
    }

    fn roots(&self, g: &Word) -> Result<Vec<Word>> {
        Ok(free_root(g)?.into_iter().collect())
    }
}

fn is_complete(g: &AGraph) -> bool {
    g.degrees().iter().all(|&d| d == 2 * g.rank())
}

/// Coset graph of `⟨H, N⟩` from a complete folded graph of `H ≤ F`: every
/// relator must read a closed loop at every vertex.
fn close_under_relators(g: &AGraph, p: &Presentation) -> Result<AGraph> {
    let mut cur = g.clone();
    'outer: loop {
        let tr = cur.transitions()?;
        for v in 0..cur.vertex_count() {
            for r in p.relators() {
                let mut end = v;
                for &l in r.representative().letters() {
                    end = tr.next(end, l).ok_or(Error::NotFolded)?;
                }
                if end != v {
                    let (keep, drop) = (v.min(end), v.max(end));
                    let relabel = |x: usize| if x == drop { keep } else { x };
                    let edges: Vec<Edge> = cur
                        .edges()
                        .iter()
                        .map(|e| Edge {
                            from: relabel(e.from),
                            to: relabel(e.to),
                            gen: e.gen,
                        })
                        .collect();
                    let merged = AGraph::from_edges(
                        cur.rank(),
                        cur.vertex_count(),
                        without_vertex(edges, drop),
                        relabel(cur.base()),
                    )?;
                    cur = fold_all(&merged).0;
                    continue 'outer;
                }
            }
        }
        return Ok(cur);
    }
}

/// Renumbers vertices above `drop` down by one.
fn without_vertex(edges: Vec<Edge>, drop: usize) -> Vec<Edge> {
    let shift = |x: usize| if x > drop { x - 1 } else { x };
    edges
        .into_iter()
        .map(|e| Edge {
            from: shift(e.from),
            to: shift(e.to),
            gen: e.gen,
        })
        .collect()
}

#[derive(Clone, Debug)]
enum GroupRep {
    Certified(Box<SubgroupRep>),
    FiniteIndex(AGraph),
}

struct GroupBackend<'a> {
    p: &'a Presentation,
    gp: &'a GenericityParams,
}

impl Backend for GroupBackend<'_> {
    type Rep = GroupRep;

    fn rank(&self) -> usize {
        self.p.rank()
    }

    fn build(&self, gens: &[Word]) -> Result<Option<GroupRep>> {
        let free = stallings_graph(gens, self.p.rank())?;
        if is_complete(&free) {
            let closed = close_under_relators(&free, self.p)?;
            return Ok(Some(GroupRep::FiniteIndex(closed)));
        }
        let opts = MinimizeOptions {
            skip_condition_check: true,
            ..MinimizeOptions::default()
        };
        match minimize(self.p, self.gp, gens, opts) {
            Ok(out) => Ok(Some(GroupRep::Certified(Box::new(out.rep)))),
            Err(Error::ReadableHalfRelator(_)) => Ok(None),
            Err(e) => Err(e),
        }
    }

    fn member(&self, rep: &GroupRep, w: &Word) -> Result<bool> {
        match rep {
            GroupRep::Certified(r) => membership(r, w),
            GroupRep::FiniteIndex(g) => Ok(free_membership(g, w)),
        }
    }

    fn graph<'a>(&self, rep: &'a GroupRep) -> &'a AGraph {
        match rep {
            GroupRep::Certified(r) => &r.graph,
            GroupRep::FiniteIndex(g) => g,
        }
    }

    fn finite_index(&self, rep: &GroupRep) -> bool {
        matches!(rep, GroupRep::FiniteIndex(_))
    }

    /// Free roots of the Dehn-reduced generator, and `v` with `v² =_G g`
    /// among halves of its rotations.
    fn roots(&self, g: &Word) -> Result<Vec<Word>> {
        let u = dehn_unchecked(g, self.p);
        let mut out: Vec<Word> = free_root(&u)?.into_iter().collect();
        if u.len() >= 2 && u.len().is_multiple_of(2) {
            let half = u.slice(0, u.len() / 2);
            if dehn_unchecked(&half.mul(&half).mul(&g.inverse()), self.p).is_empty()
                && !out.contains(&half)
            {
                out.push(half);
            }
        }
        Ok(out)
    }
}

fn proposals<B: Backend, R: Rng + ?Sized>(
    b: &B,
    strategy: Strategy,
    gens: &[Word],
    k: usize,
    rng: &mut R,
) -> Result<Vec<Vec<Word>>> {
    let mut out = Vec::new();
    let replace_at = |j: usize, u: Word| {
        let mut c = gens.to_vec();
        c[j] = u;
        c
    };
    if matches!(strategy, Strategy::Root | Strategy::All) {
        for (j, g) in gens.iter().enumerate() {
            for v in b.roots(g)? {
                out.push(replace_at(j, v));
            }
        }
    }
    if matches!(strategy, Strategy::Replace | Strategy::All) {
        for (j, g) in gens.iter().enumerate() {
            for _ in 0..PROPOSALS_PER_ROUND {
                if g.len() < 2 {
                    break;
                }
                let u = if rng.gen_bool(0.5) {
                    let len = rng.gen_range(1..g.len());
                    let start = rng.gen_range(0..=g.len() - len);
                    g.slice(start, start + len)
                } else {
                    let drop = rng.gen_range(0..g.len());
                    g.slice(0, drop).mul(&g.slice(drop + 1, g.len()))
                };
                if !u.is_empty() {
                    out.push(replace_at(j, u));
                }
            }
        }
    }
    if matches!(strategy, Strategy::Absorb | Strategy::All) {
        for _ in 0..PROPOSALS_PER_ROUND {
            let len = rng.gen_range(1..=2);
            let u = sample_reduced(len, b.rank(), rng);
            let mut c = alloc::vec![u.clone()];
            c.extend(gens.iter().map(|h| u.mul(h).mul(&u.inverse())));
            c.truncate(k);
            out.push(c);
        }
    }
    Ok(out)
}

fn random_generators<R: Rng + ?Sized>(m: usize, k: usize, rng: &mut R) -> Vec<Word> {
    (0..k)
        .map(|_| sample_reduced(rng.gen_range(2..=8), m, rng))
        .collect()
}

fn step_of<B: Backend>(
    b: &B,
    rep: &B::Rep,
    gens: &[Word],
    index: usize,
    strict: bool,
) -> Result<ChainStep> {
    Ok(ChainStep {
        index,
        generators: gens.to_vec(),
        canonical: canonical_form(b.graph(rep))?,
        strict,
        finite_index: b.finite_index(rep),
    })
}

struct Run {
    steps: Vec<ChainStep>,
    stabilization_index: Option<usize>,
    outcome: Outcome,
}

fn run_chain<B: Backend, R: Rng + ?Sized>(
    b: &B,
    start: Vec<Word>,
    k: usize,
    strategy: Strategy,
    budget: usize,
    word_cap: usize,
    rng: &mut R,
) -> Result<Run> {
    if budget == 0 {
        return Err(Error::ZeroBudget);
    }
    let start: Vec<Word> = start.into_iter().filter(|w| !w.is_empty()).collect();
    let Some(mut rep) = b.build(&start)? else {
        return Ok(Run {
            steps: Vec::new(),
            stabilization_index: None,
            outcome: Outcome::Indeterminate(
                "initial subgroup has a readable relator fragment".to_string(),
            ),
        });
    };
    let mut gens = start;
    let mut steps = alloc::vec![step_of(b, &rep, &gens, 1, false)?];
    loop {
        let mut accepted = None;
        for cand in proposals(b, strategy, &gens, k, rng)? {
            if cand.iter().any(|w| w.len() > word_cap || w.is_empty()) {
                continue;
            }
            let Some(next) = b.build(&cand)? else {
                return Ok(Run {
                    steps,
                    stabilization_index: None,
                    outcome: Outcome::Indeterminate(alloc::format!(
                        "could not certify proposal {cand:?}"
                    )),
                });
            };
            if b.leq(&rep, &next)? && !b.leq(&next, &rep)? {
                accepted = Some((cand, next));
                break;
            }
        }
        match accepted {
            None => {
                let n = steps.len();
                return Ok(Run {
                    steps,
                    stabilization_index: Some(n),
                    outcome: Outcome::Stabilized,
                });
            }
            Some(_) if steps.len() == budget => {
                return Ok(Run {
                    steps,
                    stabilization_index: None,
                    outcome: Outcome::BudgetExhausted,
                });
            }
            Some((cand, next)) => {
                steps.push(step_of(b, &next, &cand, steps.len() + 1, true)?);
                gens = cand;
                rep = next;
            }
        }
    }
}

/// Chain in `G` from explicit starting generators.
pub fn build_chain_from<R: Rng + ?Sized>(
    p: &Presentation,
    gp: &GenericityParams,
    start: Vec<Word>,
    strategy: Strategy,
    budget: usize,
    seed: u64,
    rng: &mut R,
) -> Result<ChainReport> {
    if start.len() > gp.k {
        return Err(Error::TooManyGenerators {
            got: start.len(),
            k: gp.k,
        });
    }
    if !lmk_condition_holds(p, gp, DEFAULT_NODE_CAP)? {
        return Err(Error::BadParameter(
            "presentation fails the (λ,μ,k)-condition".into(),
        ));
    }
    group_chain(p, gp, start, strategy, budget, seed, rng)
}

fn group_chain<R: Rng + ?Sized>(
    p: &Presentation,
    gp: &GenericityParams,
    start: Vec<Word>,
    strategy: Strategy,
    budget: usize,
    seed: u64,
    rng: &mut R,
) -> Result<ChainReport> {
    let b = GroupBackend { p, gp };
    let word_cap = 4 * p.max_relator_len();
    let run = run_chain(&b, start, gp.k, strategy, budget, word_cap, rng)?;
    Ok(ChainReport {
        m: p.rank(),
        k: gp.k,
        relators: p
            .relators()
            .iter()
            .map(|r| r.representative().clone())
            .collect(),
        strategy,
        seed,
        budget,
        steps: run.steps,
        stabilization_index: run.stabilization_index,
        outcome: run.outcome,
        word_cap,
    })
}

/// Chain in `G` from `k` random generators drawn from the stream for `seed`.
pub fn build_chain(
    p: &Presentation,
    gp: &GenericityParams,
    strategy: Strategy,
    budget: usize,
    seed: u64,
) -> Result<ChainReport> {
    let mut rng = stream(seed, &[]);
    let start = random_generators(p.rank(), gp.k, &mut rng);
    build_chain_from(p, gp, start, strategy, budget, seed, &mut rng)
}

/// Free-group chain from explicit starting generators.
pub fn free_chain_from<R: Rng + ?Sized>(
    m: usize,
    k: usize,
    start: Vec<Word>,
    strategy: Strategy,
    budget: usize,
    seed: u64,
    rng: &mut R,
) -> Result<ChainReport> {
    if start.len() > k {
        return Err(Error::TooManyGenerators {
            got: start.len(),
            k,
        });
    }
    let word_cap = 64;
    let run = run_chain(
        &FreeBackend { m },
        start,
        k,
        strategy,
        budget,
        word_cap,
        rng,
    )?;
    Ok(ChainReport {
        m,
        k,
        relators: Vec::new(),
        strategy,
        seed,
        budget,
        steps: run.steps,
        stabilization_index: run.stabilization_index,
        outcome: run.outcome,
        word_cap,
    })
}

/// Free-group chain from `k` random generators.
pub fn free_group_chain_baseline(
    m: usize,
    k: usize,
    strategy: Strategy,
    budget: usize,
    seed: u64,
) -> Result<ChainReport> {
    crate::words::check_rank(m)?;
    let mut rng = stream(seed, &[]);
    let start = random_generators(m, k, &mut rng);
    free_chain_from(m, k, start, strategy, budget, seed, &mut rng)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AccReport {
    pub requested: usize,
    /// Presentations that passed the condition.
    pub accepted: Vec<Presentation>,
    pub sampled: u64,
    pub chains: Vec<ChainReport>,
}

impl AccReport {
    pub fn rejection_rate(&self) -> f64 {
        if self.sampled == 0 {
            0.0
        } else {
            1.0 - self.accepted.len() as f64 / self.sampled as f64
        }
    }

    pub fn count(&self, name: &str) -> usize {
        self.chains
            .iter()
            .filter(|c| c.outcome.name() == name)
            .count()
    }

    /// Chains that ran out of budget with every step verified strict.
    pub fn counterexample_candidates(&self) -> Vec<&ChainReport> {
        self.chains
            .iter()
            .filter(|c| c.outcome == Outcome::BudgetExhausted)
            .collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AccOptions {
    pub presentations: usize,
    pub chains_per_presentation: usize,
    pub relator_len: usize,
    pub budget: usize,
    pub strategy: Strategy,
    /// Samples drawn per requested presentation before giving up.
    pub attempts_per_presentation: u64,
    pub node_cap: u64,
}

/// Samples presentations satisfying the (λ,μ,k)-condition and runs chains
/// on each. Sample `a` comes from the stream keyed by `(seed, 0, a)`, chain
/// `j` on presentation `i` from [`experiment_chain`].
pub fn acc_experiment(gp: &GenericityParams, opts: &AccOptions, seed: u64) -> Result<AccReport> {
    let (accepted, sampled) = sample_q_presentations(gp, opts, seed)?;
    let mut chains = Vec::new();
    for (i, p) in accepted.iter().enumerate() {
        for j in 0..opts.chains_per_presentation {
            chains.push(experiment_chain(p, gp, opts, seed, i, j)?);
        }
    }
    Ok(AccReport {
        requested: opts.presentations,
        accepted,
        sampled,
        chains,
    })
}

/// The sampling half of [`acc_experiment`]: accepted presentations and the
/// number of samples drawn.
pub fn sample_q_presentations(
    gp: &GenericityParams,
    opts: &AccOptions,
    seed: u64,
) -> Result<(Vec<Presentation>, u64)> {
    let report = validate_params(gp);
    if !report.valid() {
        return Err(Error::BadParameter(alloc::format!(
            "parameters fail {:?}",
            report.failures()
        )));
    }
    let mut accepted = Vec::new();
    let mut sampled = 0u64;
    let max = opts
        .attempts_per_presentation
        .saturating_mul(opts.presentations as u64);
    while accepted.len() < opts.presentations && sampled < max {
        let mut rng = stream(seed, &[0, sampled]);
        sampled += 1;
        let p = sample_few_relator(gp.m, gp.t, opts.relator_len, LengthMode::Exact, &mut rng)?;
        if lmk_condition_holds(&p, gp, opts.node_cap)? {
            accepted.push(p);
        }
    }
    Ok((accepted, sampled))
}

/// Chain `j` on accepted presentation `i`; `p` must satisfy the condition.
pub fn experiment_chain(
    p: &Presentation,
    gp: &GenericityParams,
    opts: &AccOptions,
    seed: u64,
    i: usize,
    j: usize,
) -> Result<ChainReport> {
    let chain_seed = crate::rng::derive_seed(seed, &[1, i as u64, j as u64]);
    let mut rng = stream(chain_seed, &[]);
    let start = random_generators(p.rank(), gp.k, &mut rng);
    group_chain(
        p,
        gp,
        start,
        opts.strategy,
        opts.budget,
        chain_seed,
        &mut rng,
    )
}
