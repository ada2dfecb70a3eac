//! Readability, the (λ, μ, k)-condition, random presentations and Monte Carlo
//! estimates of how often the condition holds.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::vec::Vec;

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use rand::Rng;

use crate::agraph::{AGraph, Edge};
use crate::cancel::{check_c_prime, CPrimeViolation, Presentation};
use crate::rng::stream;
use crate::words::{
    check_rank, is_proper_power, sample_cyclically_reduced, sample_cyclically_reduced_at_most, Word,
};
use crate::{Error, Rational, Result};

/// Default cap on relators drawn in the density model.
pub const DEFAULT_DENSITY_CAP: u64 = 100_000;

/// Default search-node cap for a single readability query.
pub const DEFAULT_NODE_CAP: u64 = 200_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenericityParams {
    pub m: usize,
    pub t: usize,
    pub k: usize,
    pub lambda: Rational,
    pub mu: Rational,
    pub density: Option<Rational>,
}

/// Outcome of each parameter inequality.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParamReport {
    pub checks: Vec<(&'static str, bool)>,
}

impl ParamReport {
    pub fn valid(&self) -> bool {
        self.checks.iter().all(|&(_, ok)| ok)
    }

    pub fn failures(&self) -> Vec<&'static str> {
        self.checks
            .iter()
            .filter(|&&(_, ok)| !ok)
            .map(|&(n, _)| n)
            .collect()
    }
}

pub fn validate_params(gp: &GenericityParams) -> ParamReport {
    let zero = Rational::from_integer(0);
    let one = Rational::from_integer(1);
    let (l, mu) = (gp.lambda, gp.mu);
    let k = Rational::from_integer(gp.k as i64);
    let mut checks = Vec::new();
    checks.push(("0 < λ ≤ 1/6", l > zero && l <= Rational::new(1, 6)));
    checks.push(("0 < μ < 1", mu > zero && mu < one));
    checks.push(("k ≥ m", gp.k >= gp.m));
    if l > zero && l * 3 < one {
        let mid = mu / (k * 15 + l * 3);
        checks.push(("λ < μ/(15k+3λ)", l < mid));
        checks.push(("μ/(15k+3λ) < 1/6", mid < Rational::new(1, 6)));
        let lhs = l / (one - l * 3);
        checks.push(("λ/(1−3λ) < μ/(15k+5)", lhs < mu / (k * 15 + 5)));
        checks.push(("(15k+5)λ ≤ μ(1−3λ)", (k * 15 + 5) * l <= mu * (one - l * 3)));
    } else {
        checks.push(("λ < μ/(15k+3λ)", false));
    }
    if let Some(d) = gp.density {
        checks.push(("0 < d < 1", d > zero && d < one));
    }
    ParamReport { checks }
}

/// Proof that a word is (μ,k)-readable.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReadabilityCertificate {
    pub graph: AGraph,
    /// Vertex sequence of the path spelling the word, starting at the base.
    pub path: Vec<usize>,
    pub edge_count: usize,
    pub betti: usize,
    /// Always present when the degree clause is enforced.
    pub low_degree_vertex: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Readability {
    Readable(ReadabilityCertificate),
    NotReadable,
    /// The node cap was hit before the search finished.
    Indeterminate,
}

impl Readability {
    pub fn is_readable(&self) -> bool {
        matches!(self, Readability::Readable(_))
    }
}

struct Search<'a> {
    w: &'a [crate::words::Letter],
    m: usize,
    budget: usize,
    k: usize,
    degree_clause: bool,
    // out[v][code] = target of the edge leaving v with that label
    out: Vec<Vec<Option<usize>>>,
    edges: Vec<Edge>,
    path: Vec<usize>,
    nodes: u64,
    cap: u64,
}

impl Search<'_> {
    fn add_edge(&mut self, from: usize, l: crate::words::Letter, to: usize) {
        self.out[from][l.code()] = Some(to);
        self.out[to][l.inverse().code()] = Some(from);
        let e = if l.is_inverse() {
            Edge {
                from: to,
                to: from,
                gen: l.generator(),
            }
        } else {
            Edge {
                from,
                to,
                gen: l.generator(),
            }
        };
        self.edges.push(e);
    }

    fn remove_edge(&mut self, from: usize, l: crate::words::Letter, to: usize) {
        self.out[from][l.code()] = None;
        self.out[to][l.inverse().code()] = None;
        self.edges.pop();
    }

    fn low_degree_vertex(&self) -> Option<usize> {
        self.out
            .iter()
            .position(|slots| slots.iter().filter(|s| s.is_some()).count() < 2 * self.m)
    }

    /// `Ok(true)` once a certificate is in place, `Err` on the node cap.
    fn go(&mut self, i: usize) -> core::result::Result<bool, ()> {
        self.nodes += 1;
        if self.nodes > self.cap {
            return Err(());
        }
        if i == self.w.len() {
            return Ok(!self.degree_clause || self.low_degree_vertex().is_some());
        }
        let cur = *self.path.last().unwrap();
        let l = self.w[i];
        if let Some(next) = self.out[cur][l.code()] {
            self.path.push(next);
            if self.go(i + 1)? {
                return Ok(true);
            }
            self.path.pop();
            return Ok(false);
        }
        if self.edges.len() + 1 > self.budget {
            return Ok(false);
        }
        let v = self.out.len();
        let betti = self.edges.len() + 1 - v;
        // close up onto an existing vertex (raises the Betti number)
        if betti < self.k {
            for target in 0..v {
                if self.out[target][l.inverse().code()].is_some() {
                    continue;
                }
                self.add_edge(cur, l, target);
                self.path.push(target);
                if self.go(i + 1)? {
                    return Ok(true);
                }
                self.path.pop();
                self.remove_edge(cur, l, target);
            }
        }
        self.out.push(alloc::vec![None; 2 * self.m]);
        self.add_edge(cur, l, v);
        self.path.push(v);
        if self.go(i + 1)? {
            return Ok(true);
        }
        self.path.pop();
        self.remove_edge(cur, l, v);
        self.out.pop();
        Ok(false)
    }
}

/// Decides (μ,k)-readability by exact search over folded quotients of the
/// path graph spelling `w`.
///
/// Vertices of the path are identified left to right; an edge that already
/// exists is followed, otherwise the next vertex is either fresh or an
/// existing vertex without an incoming edge of that label. Branches stop as
/// soon as the edge count exceeds `⌊μ|w|⌋` or the Betti number exceeds `k`.
pub fn is_readable(
    w: &Word,
    mu: Rational,
    k: usize,
    m: usize,
    node_cap: u64,
) -> Result<Readability> {
    readable_search(w, mu, k, m, true, node_cap)
}

/// As [`is_readable`], optionally skipping the low-degree-vertex clause.
pub fn readable_search(
    w: &Word,
    mu: Rational,
    k: usize,
    m: usize,
    degree_clause: bool,
    node_cap: u64,
) -> Result<Readability> {
    check_rank(m)?;
    if w.is_empty() {
        return Err(Error::EmptyWord);
    }
    if w.rank_used() > m {
        return Err(Error::BadParameter(format!(
            "word {w} uses more than {m} generators"
        )));
    }
    if mu <= Rational::from_integer(0) {
        return Err(Error::BadParameter(format!("μ = {mu} must be positive")));
    }
    let budget = (mu * Rational::from_integer(w.len() as i64))
        .floor()
        .to_integer();
    if budget < 1 {
        return Ok(Readability::NotReadable);
    }
    let mut s = Search {
        w: w.letters(),
        m,
        budget: budget as usize,
        k,
        degree_clause,
        out: alloc::vec![alloc::vec![None; 2 * m]],
        edges: Vec::new(),
        path: alloc::vec![0],
        nodes: 0,
        cap: node_cap,
    };
    match s.go(0) {
        Err(()) => Ok(Readability::Indeterminate),
        Ok(false) => Ok(Readability::NotReadable),
        Ok(true) => {
            let low = s.low_degree_vertex();
            let n = s.out.len();
            let graph = AGraph::from_edges(m, n, s.edges.clone(), 0)?;
            Ok(Readability::Readable(ReadabilityCertificate {
                betti: graph.betti(),
                edge_count: s.edges.len(),
                graph,
                path: s.path,
                low_degree_vertex: low,
            }))
        }
    }
}

/// Which clauses of the (λ,μ,k)-condition to evaluate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Clauses {
    pub proper_power: bool,
    pub c_prime: bool,
    pub readable: bool,
}

impl Clauses {
    pub const ALL: Clauses = Clauses {
        proper_power: true,
        c_prime: true,
        readable: true,
    };
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ClauseVerdict<W> {
    Pass,
    Fail(W),
    Indeterminate,
    Skipped,
}

impl<W> ClauseVerdict<W> {
    pub fn passed(&self) -> bool {
        matches!(self, ClauseVerdict::Pass)
    }

    /// `None` when the clause was skipped.
    pub fn evaluated(&self) -> Option<bool> {
        (!matches!(self, ClauseVerdict::Skipped)).then(|| self.passed())
    }
}

/// A relator that is a proper power `root^exp`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PowerWitness {
    pub relator: usize,
    pub root: Word,
    pub exponent: usize,
}

/// A long relator subword that is readable.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReadableWitness {
    pub relator: usize,
    pub subword: Word,
    pub certificate: ReadabilityCertificate,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LmkVerdict {
    pub proper_power: ClauseVerdict<PowerWitness>,
    pub c_prime: ClauseVerdict<CPrimeViolation>,
    pub readable: ClauseVerdict<ReadableWitness>,
}

impl LmkVerdict {
    /// Every evaluated clause passed and none was indeterminate.
    pub fn holds(&self) -> bool {
        [
            self.proper_power.evaluated(),
            self.c_prime.evaluated(),
            self.readable.evaluated(),
        ]
        .iter()
        .all(|c| *c != Some(false))
    }

    pub fn indeterminate(&self) -> bool {
        self.readable == ClauseVerdict::Indeterminate
    }
}

fn check_condition_params(gp: &GenericityParams, p: &Presentation) -> Result<()> {
    let zero = Rational::from_integer(0);
    if gp.lambda <= zero || gp.lambda > Rational::new(1, 6) {
        return Err(Error::BadParameter(format!(
            "λ = {} must lie in (0, 1/6]",
            gp.lambda
        )));
    }
    if gp.mu <= zero || gp.mu >= Rational::from_integer(1) {
        return Err(Error::BadParameter(format!(
            "μ = {} must lie in (0, 1)",
            gp.mu
        )));
    }
    if p.rank() != gp.m {
        return Err(Error::BadParameter(format!(
            "presentation has rank {}, parameters say {}",
            p.rank(),
            gp.m
        )));
    }
    Ok(())
}

/// Long subwords of the relator to test: subwords of cyclic permutations
/// with `|w| ≥ |r|/2`, keeping for each start only the shortest length in
/// each class of equal edge budget `⌊μ|w|⌋` (a longer word with the same
/// budget is readable only if its prefix is).
fn half_subwords(r: &Word, mu: Rational) -> BTreeSet<Word> {
    let n = r.len();
    let doubled: Vec<_> = r.letters().iter().chain(r.letters()).copied().collect();
    let mut out = BTreeSet::new();
    for start in 0..n {
        let mut last_budget = None;
        for len in n.div_ceil(2)..=n {
            let budget = (mu * Rational::from_integer(len as i64)).floor();
            if last_budget == Some(budget) {
                continue;
            }
            last_budget = Some(budget);
            out.insert(Word::reduce_from(
                doubled[start..start + len].iter().copied(),
            ));
        }
    }
    out
}

/// Evaluates the (λ,μ,k)-condition clause by clause.
pub fn check_lmk_condition(
    p: &Presentation,
    gp: &GenericityParams,
    node_cap: u64,
) -> Result<LmkVerdict> {
    check_clauses(p, gp, Clauses::ALL, node_cap)
}

/// [`check_lmk_condition`] reduced to a yes/no answer, stopping at the first
/// clause that does not pass. Indeterminate counts as not holding.
pub fn lmk_condition_holds(p: &Presentation, gp: &GenericityParams, node_cap: u64) -> Result<bool> {
    let only = |proper_power, c_prime, readable| Clauses {
        proper_power,
        c_prime,
        readable,
    };
    for clauses in [
        only(true, false, false),
        only(false, true, false),
        only(false, false, true),
    ] {
        if !check_clauses(p, gp, clauses, node_cap)?.holds() {
            return Ok(false);
        }
    }
    Ok(true)
}

pub fn check_clauses(
    p: &Presentation,
    gp: &GenericityParams,
    clauses: Clauses,
    node_cap: u64,
) -> Result<LmkVerdict> {
    check_condition_params(gp, p)?;
    let proper_power = if clauses.proper_power {
        let mut verdict = ClauseVerdict::Pass;
        for (i, r) in p.relators().iter().enumerate() {
            if let Some((root, exponent)) = is_proper_power(r)? {
                verdict = ClauseVerdict::Fail(PowerWitness {
                    relator: i,
                    root,
                    exponent,
                });
                break;
            }
        }
        verdict
    } else {
        ClauseVerdict::Skipped
    };
    let c_prime = if clauses.c_prime {
        let v = check_c_prime(p, gp.lambda)?;
        match v.violation {
            None => ClauseVerdict::Pass,
            Some(x) => ClauseVerdict::Fail(x),
        }
    } else {
        ClauseVerdict::Skipped
    };
    let readable = if clauses.readable {
        let mut verdict = ClauseVerdict::Pass;
        let mut seen = BTreeSet::new();
        'outer: for (i, r) in p.relators().iter().enumerate() {
            // readability is invariant under inversion, so r⁻¹ adds nothing
            for w in half_subwords(r.representative(), gp.mu) {
                if !seen.insert(w.clone()) {
                    continue;
                }
                match is_readable(&w, gp.mu, gp.k, gp.m, node_cap)? {
                    Readability::NotReadable => {}
                    Readability::Indeterminate => verdict = ClauseVerdict::Indeterminate,
                    Readability::Readable(certificate) => {
                        verdict = ClauseVerdict::Fail(ReadableWitness {
                            relator: i,
                            subword: w,
                            certificate,
                        });
                        break 'outer;
                    }
                }
            }
        }
        verdict
    } else {
        ClauseVerdict::Skipped
    };
    Ok(LmkVerdict {
        proper_power,
        c_prime,
        readable,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LengthMode {
    /// Every relator has length exactly `n`.
    Exact,
    /// Lengths up to `n`, weighted by the number of words of each length.
    AtMost,
}

/// `t` independent uniformly random cyclically reduced relators.
pub fn sample_few_relator<R: Rng + ?Sized>(
    m: usize,
    t: usize,
    n: usize,
    mode: LengthMode,
    rng: &mut R,
) -> Result<Presentation> {
    let mut rels = Vec::with_capacity(t);
    for _ in 0..t {
        let r = match mode {
            LengthMode::Exact => sample_cyclically_reduced(n, m, rng)?,
            LengthMode::AtMost => sample_cyclically_reduced_at_most(n, m, rng)?,
        };
        rels.push(r.representative().clone());
    }
    Presentation::new(m, rels)
}

/// `⌊(2m−1)^{d·n}⌋`, exactly.
pub fn density_relator_count(m: usize, d: Rational, n: usize) -> Result<BigUint> {
    check_rank(m)?;
    if d <= Rational::from_integer(0) || d >= Rational::from_integer(1) {
        return Err(Error::BadParameter(format!(
            "density {d} must lie in (0, 1)"
        )));
    }
    let (p, q) = (*d.numer() as u32, *d.denom() as u32);
    let exp = p.checked_mul(n as u32).ok_or(Error::Overflow)?;
    let power = BigUint::from(2 * m as u64 - 1).pow(exp);
    Ok(power.nth_root(q))
}

/// Density-model presentation with `⌊(2m−1)^{d·n}⌋` relators of length `n`.
pub fn sample_density<R: Rng + ?Sized>(
    m: usize,
    d: Rational,
    n: usize,
    cap: u64,
    rng: &mut R,
) -> Result<Presentation> {
    let t = density_relator_count(m, d, n)?;
    let t = match t.to_u64() {
        Some(t) if t <= cap => t as usize,
        other => {
            return Err(Error::CapExceeded {
                required: other.unwrap_or(u64::MAX),
                cap,
            })
        }
    };
    sample_few_relator(m, t, n, LengthMode::Exact, rng)
}

/// Counts for one relator length.
#[derive(Clone, Debug, PartialEq)]
pub struct LengthStats {
    pub n: usize,
    pub samples: u64,
    pub pass1: Option<u64>,
    pub pass2: Option<u64>,
    pub pass3: Option<u64>,
    pub pass_all: u64,
    pub indeterminate: u64,
    pub ci_lo: f64,
    pub ci_hi: f64,
}

impl LengthStats {
    pub fn fraction(&self) -> f64 {
        if self.samples == 0 {
            0.0
        } else {
            self.pass_all as f64 / self.samples as f64
        }
    }
}

#[derive(Clone, Debug, PartialEq, Default)]
pub struct GenericityStats {
    pub rows: Vec<LengthStats>,
}

/// 95% Wilson score interval for `k` successes out of `n`.
pub fn wilson_interval(k: u64, n: u64) -> (f64, f64) {
    if n == 0 {
        return (0.0, 1.0);
    }
    let z = 1.959_963_984_540_054_f64;
    let (n, p) = (n as f64, k as f64 / n as f64);
    let denom = 1.0 + z * z / n;
    let centre = (p + z * z / (2.0 * n)) / denom;
    let half = z * libm::sqrt(p * (1.0 - p) / n + z * z / (4.0 * n * n)) / denom;
    ((centre - half).max(0.0), (centre + half).min(1.0))
}

/// Verdict for one sampled presentation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SampleOutcome {
    pub clause1: Option<bool>,
    pub clause2: Option<bool>,
    pub clause3: Option<bool>,
    pub all: bool,
    pub indeterminate: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EstimateOptions {
    pub clauses: Clauses,
    pub node_cap: u64,
    pub mode: LengthMode,
}

impl Default for EstimateOptions {
    fn default() -> Self {
        EstimateOptions {
            clauses: Clauses::ALL,
            node_cap: DEFAULT_NODE_CAP,
            mode: LengthMode::Exact,
        }
    }
}

/// Draws and checks sample `idx` at length `n`, from the stream keyed by
/// `(seed, n, idx)`.
pub fn sample_outcome(
    gp: &GenericityParams,
    n: usize,
    idx: u64,
    seed: u64,
    opts: &EstimateOptions,
) -> Result<SampleOutcome> {
    let mut rng = stream(seed, &[n as u64, idx]);
    let p = sample_few_relator(gp.m, gp.t, n, opts.mode, &mut rng)?;
    let v = check_clauses(&p, gp, opts.clauses, opts.node_cap)?;
    Ok(SampleOutcome {
        clause1: v.proper_power.evaluated(),
        clause2: v.c_prime.evaluated(),
        clause3: v.readable.evaluated(),
        all: v.holds(),
        indeterminate: v.indeterminate(),
    })
}

/// Tallies outcomes for one length.
pub fn aggregate(n: usize, outcomes: &[SampleOutcome], clauses: Clauses) -> LengthStats {
    let count = |f: fn(&SampleOutcome) -> Option<bool>| {
        outcomes.iter().filter(|o| f(o) == Some(true)).count() as u64
    };
    let pass_all = outcomes.iter().filter(|o| o.all).count() as u64;
    let samples = outcomes.len() as u64;
    let (ci_lo, ci_hi) = wilson_interval(pass_all, samples);
    LengthStats {
        n,
        samples,
        pass1: clauses.proper_power.then(|| count(|o| o.clause1)),
        pass2: clauses.c_prime.then(|| count(|o| o.clause2)),
        pass3: clauses.readable.then(|| count(|o| o.clause3)),
        pass_all,
        indeterminate: outcomes.iter().filter(|o| o.indeterminate).count() as u64,
        ci_lo,
        ci_hi,
    }
}

/// Monte Carlo pass fractions of the selected clauses at each length.
pub fn estimate_genericity(
    gp: &GenericityParams,
    lengths: &[usize],
    samples: u64,
    seed: u64,
    opts: &EstimateOptions,
) -> Result<GenericityStats> {
    let mut rows = Vec::with_capacity(lengths.len());
    for &n in lengths {
        let outcomes = (0..samples)
            .map(|i| sample_outcome(gp, n, i, seed, opts))
            .collect::<Result<Vec<_>>>()?;
        rows.push(aggregate(n, &outcomes, opts.clauses));
    }
    Ok(GenericityStats { rows })
}
