//! Greedy minimization of subgroup graphs over a small-cancellation
//! presentation, and the membership and containment tests it enables.
//!
//! A graph is *certified* once no reduced path in it reads a relator
//! fragment longer than `(1−3λ)|r|`. On certified graphs every reduced loop
//! label is λ-reduced, so membership reduces to a ladder search along the
//! graph.

use alloc::boxed::Box;
use alloc::collections::BTreeSet;
use alloc::format;
use alloc::vec::Vec;
use core::ops::Range;

use rand::Rng;

use crate::agraph::{
    core, fold_all, maximal_arcs, spanning_tree_basis, wedge_from_words, AGraph, Edge, FoldTrace,
    HalfEdge, Transitions,
};
use crate::cancel::{
    check_c_prime, dehn_unchecked, ladder_search, Occurrence, Presentation, TopTrack,
};
use crate::generic::{check_lmk_condition, GenericityParams, DEFAULT_NODE_CAP};
use crate::words::{Letter, Word};
use crate::{Error, Rational, Result};

/// Record of one AO-move.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AOMoveRecord {
    /// Label of the whole path `p₁·p′·p₂` from `x` to `y`.
    pub path_label: Word,
    /// Label of the removed arc `p′`.
    pub removed: Word,
    /// Label of the new arc from `x` to `y`.
    pub added: Word,
    pub x: usize,
    pub y: usize,
    pub singular: bool,
    pub edge_delta: i64,
    pub betti_delta: i64,
}

/// Replaces the arc `path[arc]` by a new arc labelled `z` from the start
/// of `path` to its end.
///
/// The arc must consist of edges used once along `path`, and its interior
/// vertices must have degree 2 and differ from the basepoint. The caller
/// guarantees that the label of `path` equals `z` in the group. The result
/// is not folded.
pub fn ao_move(
    g: &AGraph,
    path: &[HalfEdge],
    arc: Range<usize>,
    z: &Word,
) -> Result<(AGraph, AOMoveRecord)> {
    if arc.is_empty() || arc.end > path.len() {
        return Err(Error::BadArc(format!(
            "range {arc:?} on a path of length {}",
            path.len()
        )));
    }
    for w in path.windows(2) {
        if g.terminus(w[0]) != g.origin(w[1]) {
            return Err(Error::BadArc("edges do not form a path".into()));
        }
    }
    let deg = g.degrees();
    for h in &path[arc.start..arc.end - 1] {
        let v = g.terminus(*h);
        if v == g.base() || deg[v] != 2 {
            return Err(Error::BadArc(format!("vertex {v} is interior to the arc")));
        }
    }
    let removed_ids: BTreeSet<usize> = path[arc.clone()].iter().map(|h| h.edge).collect();
    if removed_ids.len() != arc.len() {
        return Err(Error::BadArc("arc repeats an edge".into()));
    }
    for (i, h) in path.iter().enumerate() {
        if !arc.contains(&i) && removed_ids.contains(&h.edge) {
            return Err(Error::BadArc("arc overlaps the rest of the path".into()));
        }
    }
    let x = g.origin(path[0]);
    let y = g.terminus(path[path.len() - 1]);
    let mut n = g.vertex_count();
    let mut edges: Vec<Edge> = g
        .edges()
        .iter()
        .enumerate()
        .filter(|(i, _)| !removed_ids.contains(i))
        .map(|(_, e)| *e)
        .collect();
    let mut base = g.base();
    let singular = z.is_empty() && x == y;
    if z.is_empty() {
        if x != y {
            // identify y with x
            let (keep, drop) = (x.min(y), x.max(y));
            let relabel = |v: usize| if v == drop { keep } else { v };
            for e in &mut edges {
                e.from = relabel(e.from);
                e.to = relabel(e.to);
            }
            base = relabel(base);
        }
    } else {
        let mut cur = x;
        for (i, &l) in z.letters().iter().enumerate() {
            let next = if i + 1 == z.len() {
                y
            } else {
                n += 1;
                n - 1
            };
            edges.push(if l.is_inverse() {
                Edge {
                    from: next,
                    to: cur,
                    gen: l.generator(),
                }
            } else {
                Edge {
                    from: cur,
                    to: next,
                    gen: l.generator(),
                }
            });
            cur = next;
        }
    }
    let out = AGraph::from_parts_unchecked(g.rank(), n, edges, base).compacted();
    let record = AOMoveRecord {
        path_label: g.path_label(path),
        removed: g.path_label(&path[arc]),
        added: z.clone(),
        x,
        y,
        singular,
        edge_delta: out.edge_count() as i64 - g.edge_count() as i64,
        betti_delta: out.betti() as i64 - g.betti() as i64,
    };
    Ok((out, record))
}

/// How the violating path splits against the maximal arcs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OverlapCase {
    /// Segment `segment` is longer than `5λ|r|`; `run` is its longest
    /// stretch of edges not used elsewhere on the path.
    LongSegment { segment: usize, run: Range<usize> },
    /// Every segment has length at most `5λ|r|`; `witness` is the subgraph
    /// spanned by the path (a readability witness when the parameters satisfy
    /// the ACC inequalities).
    ShortSegments { witness: AGraph },
}

/// A reduced path whose label is a long relator fragment.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OverlapReport {
    pub path: Vec<HalfEdge>,
    pub label: Word,
    pub occurrence: Occurrence,
    pub relator_len: usize,
    /// Ranges of `path` lying inside single maximal arcs.
    pub segments: Vec<Range<usize>>,
    pub case: OverlapCase,
}

impl OverlapReport {
    /// `z` with `label =_G z`: the inverse of the rest of the relator.
    pub fn complement(&self, p: &Presentation) -> Word {
        let idx = p.index();
        let s = 2 * self.occurrence.relator + self.occurrence.inverse as usize;
        let n = self.relator_len;
        let l = self.label.len();
        Word::reduce_from(idx.segment(s, self.occurrence.offset + l, n - l)).inverse()
    }
}

struct Violation {
    start: usize,
    string: usize,
    offset: usize,
    len: usize,
}

/// All maximal relator readings from every vertex that exceed `(1−3λ)|r|`.
fn violations(g: &AGraph, tr: &Transitions, p: &Presentation, lambda: Rational) -> Vec<Violation> {
    let idx = p.index();
    let mut out = Vec::new();
    let (num, den) = (*lambda.numer(), *lambda.denom());
    for start in 0..g.vertex_count() {
        for s in 0..idx.string_count() {
            let n = idx.string_len(s);
            for offset in 0..n {
                let mut cur = start;
                let mut len = 0;
                while len < n {
                    match tr.next(cur, idx.at(s, offset + len)) {
                        Some(t) => cur = t,
                        None => break,
                    }
                    len += 1;
                }
                if len as i64 * den > (den - 3 * num) * n as i64 {
                    out.push(Violation {
                        start,
                        string: s,
                        offset,
                        len,
                    });
                }
            }
        }
    }
    out
}

fn report(
    g: &AGraph,
    tr: &Transitions,
    p: &Presentation,
    lambda: Rational,
    v: &Violation,
) -> OverlapReport {
    let idx = p.index();
    let mut path = Vec::with_capacity(v.len);
    let mut cur = v.start;
    for i in 0..v.len {
        let (h, t) = tr
            .half_edge(cur, idx.at(v.string, v.offset + i))
            .expect("violation path exists");
        path.push(h);
        cur = t;
    }
    let deg = g.degrees();
    let mut segments = Vec::new();
    let mut seg_start = 0;
    for i in 1..path.len() {
        let mid = g.terminus(path[i - 1]);
        if deg[mid] != 2 || mid == g.base() {
            segments.push(seg_start..i);
            seg_start = i;
        }
    }
    segments.push(seg_start..path.len());
    let relator_len = idx.string_len(v.string);
    let uses = edge_uses(&path);
    let (num, den) = (*lambda.numer(), *lambda.denom());
    let long = segments
        .iter()
        .enumerate()
        .filter(|(_, s)| s.len() as i64 * den > 5 * num * relator_len as i64)
        .map(|(i, s)| (i, single_use_run(&path, &uses, s)))
        .max_by_key(|(i, r)| (r.len(), core::cmp::Reverse(*i)));
    let case = match long {
        Some((segment, run)) => OverlapCase::LongSegment { segment, run },
        None => {
            let ids = path.iter().map(|h| h.edge).collect();
            OverlapCase::ShortSegments {
                witness: g.spanned_subgraph(&ids, v.start),
            }
        }
    };
    OverlapReport {
        label: g.path_label(&path),
        path,
        occurrence: idx.occurrence(v.string, v.offset),
        relator_len,
        segments,
        case,
    }
}

/// First reduced path (by start vertex, relator, sign, offset) whose label
/// is a relator fragment longer than `(1−3λ)|r|`.
pub fn find_long_relator_overlap(
    g: &AGraph,
    p: &Presentation,
    lambda: Rational,
) -> Result<Option<OverlapReport>> {
    let tr = g.transitions()?;
    Ok(violations(g, &tr, p, lambda)
        .first()
        .map(|v| report(g, &tr, p, lambda, v)))
}

fn edge_uses(path: &[HalfEdge]) -> alloc::collections::BTreeMap<usize, usize> {
    let mut uses = alloc::collections::BTreeMap::new();
    for h in path {
        *uses.entry(h.edge).or_insert(0) += 1;
    }
    uses
}

/// Longest stretch of `seg` whose edges occur only once on `path`.
fn single_use_run(
    path: &[HalfEdge],
    uses: &alloc::collections::BTreeMap<usize, usize>,
    seg: &Range<usize>,
) -> Range<usize> {
    let mut best = seg.start..seg.start;
    let mut run_start = seg.start;
    for i in seg.clone() {
        if uses[&path[i].edge] > 1 {
            run_start = i + 1;
        } else if i + 1 - run_start > best.len() {
            best = run_start..i + 1;
        }
    }
    best
}

/// Longest single-use stretch over all segments.
fn best_run(r: &OverlapReport) -> Range<usize> {
    let uses = edge_uses(&r.path);
    r.segments
        .iter()
        .map(|seg| single_use_run(&r.path, &uses, seg))
        .fold(
            0..0,
            |best, run| if run.len() > best.len() { run } else { best },
        )
}

/// A subgroup `H ≤ G` given by a folded core graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubgroupRep {
    pub presentation: Presentation,
    pub params: GenericityParams,
    pub graph: AGraph,
    /// No reduced path reads a relator fragment longer than `(1−3λ)|r|`.
    pub minimal_certified: bool,
    /// Some vertex has degree `< 2m` (expected when `[G:H] = ∞`).
    pub has_low_degree_vertex: bool,
}

/// One step of a minimization trace.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MinimizeStep {
    Fold {
        trace: FoldTrace,
        edges_before: usize,
        edges_after: usize,
    },
    Prune {
        edges_before: usize,
        edges_after: usize,
    },
    AoMove(AOMoveRecord),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Minimized {
    pub rep: SubgroupRep,
    pub steps: Vec<MinimizeStep>,
}

impl Minimized {
    pub fn moves(&self) -> impl Iterator<Item = &AOMoveRecord> {
        self.steps.iter().filter_map(|s| match s {
            MinimizeStep::AoMove(r) => Some(r),
            _ => None,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MinimizeOptions {
    /// Skip the (λ,μ,k)-condition check on the presentation.
    pub skip_condition_check: bool,
    pub node_cap: u64,
}

impl Default for MinimizeOptions {
    fn default() -> Self {
        MinimizeOptions {
            skip_condition_check: false,
            node_cap: DEFAULT_NODE_CAP,
        }
    }
}

fn fold_and_prune(g: &AGraph, steps: &mut Vec<MinimizeStep>) -> AGraph {
    let before = g.edge_count();
    let (folded, trace) = fold_all(g);
    if !trace.records.is_empty() {
        steps.push(MinimizeStep::Fold {
            trace,
            edges_before: before,
            edges_after: folded.edge_count(),
        });
    }
    let pruned = core(&folded);
    if pruned.edge_count() < folded.edge_count() {
        steps.push(MinimizeStep::Prune {
            edges_before: folded.edge_count(),
            edges_after: pruned.edge_count(),
        });
    }
    pruned
}

/// Fold, prune and apply edge-reducing AO-moves until no reduced path reads
/// a long relator fragment.
///
/// Fails with [`Error::ReadableHalfRelator`] when a violating path exists
/// but no AO-move along any violating path removes edges.
pub fn minimize(
    p: &Presentation,
    gp: &GenericityParams,
    generators: &[Word],
    opts: MinimizeOptions,
) -> Result<Minimized> {
    if generators.len() > gp.k {
        return Err(Error::TooManyGenerators {
            got: generators.len(),
            k: gp.k,
        });
    }
    if gp.lambda <= Rational::from_integer(0) || gp.lambda > Rational::new(1, 6) {
        return Err(Error::BadParameter(format!(
            "λ = {} must lie in (0, 1/6]",
            gp.lambda
        )));
    }
    if !check_c_prime(p, gp.lambda)?.holds {
        return Err(Error::NotSmallCancellation(format!("{}", gp.lambda)));
    }
    if !opts.skip_condition_check && !check_lmk_condition(p, gp, opts.node_cap)?.holds() {
        return Err(Error::BadParameter(
            "presentation fails the (λ,μ,k)-condition".into(),
        ));
    }
    let mut steps = Vec::new();
    let mut g = fold_and_prune(&wedge_from_words(generators, p.rank())?, &mut steps);
    loop {
        let tr = g.transitions()?;
        let found = violations(&g, &tr, p, gp.lambda);
        if found.is_empty() {
            break;
        }
        let mut applied = false;
        for v in &found {
            let rep = report(&g, &tr, p, gp.lambda, v);
            let z = rep.complement(p);
            let run = match &rep.case {
                OverlapCase::LongSegment { run, .. } if run.len() > z.len() => run.clone(),
                _ => best_run(&rep),
            };
            if run.len() > z.len() {
                let (next, record) = ao_move(&g, &rep.path, run, &z)?;
                steps.push(MinimizeStep::AoMove(record));
                g = fold_and_prune(&next, &mut steps);
                applied = true;
                break;
            }
        }
        if !applied {
            let first = report(&g, &tr, p, gp.lambda, &found[0]);
            return Err(Error::ReadableHalfRelator(Box::new(first)));
        }
    }
    let deg = g.degrees();
    let has_low_degree_vertex = deg.iter().any(|&d| d < 2 * p.rank());
    Ok(Minimized {
        rep: SubgroupRep {
            presentation: p.clone(),
            params: gp.clone(),
            graph: g,
            minimal_certified: true,
            has_low_degree_vertex,
        },
        steps,
    })
}

/// Closed paths at the basepoint as the upper boundary of a ladder.
struct GraphTrack<'a> {
    tr: &'a Transitions,
    base: usize,
}

impl TopTrack for GraphTrack<'_> {
    type State = usize;

    fn start(&self) -> usize {
        self.base
    }

    fn step(&self, &v: &usize, l: Letter) -> Option<usize> {
        self.tr.next(v, l)
    }

    fn accepts(&self, &v: &usize) -> bool {
        v == self.base
    }
}

/// `w ∈ H`, for a certified representation.
pub fn membership(rep: &SubgroupRep, w: &Word) -> Result<bool> {
    if !rep.minimal_certified {
        return Err(Error::NotCertified);
    }
    let p = &rep.presentation;
    let u = dehn_unchecked(w, p);
    if u.is_empty() {
        return Ok(true);
    }
    let tr = rep.graph.transitions()?;
    let track = GraphTrack {
        tr: &tr,
        base: rep.graph.base(),
    };
    Ok(
        ladder_search(&track, u.letters(), p, rep.params.lambda, None)
            .flatten()
            .is_some(),
    )
}

/// `H₁ ≤ H₂`, by testing a free basis of `H₁` for membership in `H₂`.
pub fn subgroup_leq(r1: &SubgroupRep, r2: &SubgroupRep) -> Result<bool> {
    if r1.presentation != r2.presentation || r1.params != r2.params {
        return Err(Error::MismatchedPresentations);
    }
    if !r1.minimal_certified {
        return Err(Error::NotCertified);
    }
    for b in spanning_tree_basis(&r1.graph) {
        if !membership(r2, &b)? {
            return Ok(false);
        }
    }
    Ok(true)
}

pub fn subgroup_eq(r1: &SubgroupRep, r2: &SubgroupRep) -> Result<bool> {
    Ok(subgroup_leq(r1, r2)? && subgroup_leq(r2, r1)?)
}

/// Uniform-ish random reduced path from a random vertex: each step picks
/// one of the edges that do not backtrack.
pub fn sample_reduced_path<R: Rng + ?Sized>(g: &AGraph, max_len: usize, rng: &mut R) -> Word {
    if g.edge_count() == 0 {
        return Word::empty();
    }
    let adj = g.adjacency();
    let len = rng.gen_range(1..=max_len.max(1));
    let mut cur = rng.gen_range(0..g.vertex_count());
    let mut letters: Vec<Letter> = Vec::with_capacity(len);
    for _ in 0..len {
        let choices: Vec<HalfEdge> = adj[cur]
            .iter()
            .copied()
            .filter(|&h| letters.last().is_none_or(|&l| g.label(h) != l.inverse()))
            .collect();
        if choices.is_empty() {
            break;
        }
        let h = choices[rng.gen_range(0..choices.len())];
        letters.push(g.label(h));
        cur = g.terminus(h);
    }
    Word::reduce_from(letters)
}

/// Labels of all maximal arcs.
pub fn arc_labels(g: &AGraph) -> Vec<Word> {
    maximal_arcs(g).iter().map(|a| a.label(g)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::agraph::{canonical_form, read_path};
    use crate::cancel::{check_c_prime, is_lambda_reduced};
    use crate::oracles::MembershipOracle;
    use crate::rng::stream;
    use crate::words::{sample_cyclically_reduced, sample_reduced};
    use proptest::prelude::*;
    use rand::Rng;

    fn w(s: &str, m: usize) -> Word {
        Word::parse(s, m).unwrap()
    }

    fn small_cancellation(m: usize, n: usize, seed: u64) -> Presentation {
        let mut rng = stream(seed, &[m as u64, n as u64]);
        loop {
            let r = sample_cyclically_reduced(n, m, &mut rng).unwrap();
            let p = Presentation::new(m, alloc::vec![r.representative().clone()]).unwrap();
            if check_c_prime(&p, Rational::new(1, 6)).unwrap().holds {
                return p;
            }
        }
    }

    fn params(m: usize, k: usize) -> GenericityParams {
        GenericityParams {
            m,
            t: 1,
            k,
            lambda: Rational::new(1, 6),
            mu: Rational::new(1, 10),
            density: None,
        }
    }

    const SKIP: MinimizeOptions = MinimizeOptions {
        skip_condition_check: true,
        node_cap: DEFAULT_NODE_CAP,
    };

    #[test]
    fn relator_loop_collapses() {
        let p = small_cancellation(2, 36, 1);
        let r = p.relators()[0].representative().clone();
        let out = minimize(&p, &params(2, 2), std::slice::from_ref(&r), SKIP).unwrap();
        assert_eq!(out.rep.graph.edge_count(), 0);
        let moves: Vec<_> = out.moves().collect();
        assert_eq!(moves.len(), 1);
        assert!(moves[0].singular && moves[0].betti_delta == -1);
        assert!(membership(&out.rep, &r).unwrap());
        assert!(!membership(&out.rep, &w("a", 2)).unwrap());
    }

    #[test]
    fn short_generator_is_already_minimal() {
        let p = small_cancellation(2, 36, 2);
        let out = minimize(&p, &params(2, 2), &[w("a", 2)], SKIP).unwrap();
        assert_eq!(out.moves().count(), 0);
        assert_eq!(
            canonical_form(&out.rep.graph).unwrap(),
            "agraph v1 m=2 base=0\n0 0 a\n"
        );
        assert!(out.rep.has_low_degree_vertex);
        assert!(membership(&out.rep, &w("aaa", 2)).unwrap());
        assert!(membership(&out.rep, &Word::empty()).unwrap());
        assert!(!membership(&out.rep, &w("b", 2)).unwrap());
    }

    #[test]
    fn relator_prefix_becomes_one_letter() {
        let p = small_cancellation(2, 36, 3);
        let r = p.relators()[0].representative().clone();
        let u = r.slice(0, 35);
        let out = minimize(&p, &params(2, 2), std::slice::from_ref(&u), SKIP).unwrap();
        assert_eq!(out.rep.graph.edge_count(), 1);
        let last = r.slice(35, 36).inverse();
        assert!(membership(&out.rep, &u).unwrap());
        assert!(membership(&out.rep, &last).unwrap());
    }

    #[test]
    fn containment_examples() {
        let p = small_cancellation(2, 36, 4);
        let gp = params(2, 2);
        let h = minimize(&p, &gp, &[w("a", 2)], SKIP).unwrap().rep;
        let k = minimize(&p, &gp, &[w("a", 2), w("bb", 2)], SKIP)
            .unwrap()
            .rep;
        let one = minimize(&p, &gp, &[], SKIP).unwrap().rep;
        assert!(subgroup_eq(&h, &h).unwrap());
        assert!(subgroup_leq(&h, &k).unwrap());
        assert!(!subgroup_leq(&k, &h).unwrap());
        assert!(subgroup_leq(&one, &h).unwrap());
        let other = minimize(&small_cancellation(2, 36, 5), &gp, &[w("a", 2)], SKIP)
            .unwrap()
            .rep;
        assert_eq!(
            subgroup_leq(&h, &other),
            Err(Error::MismatchedPresentations)
        );
        let mut uncertified = h.clone();
        uncertified.minimal_certified = false;
        assert_eq!(
            membership(&uncertified, &w("a", 2)),
            Err(Error::NotCertified)
        );
    }

    #[test]
    fn whole_group_is_reported_not_minimized() {
        let p = small_cancellation(2, 36, 4);
        let err = minimize(&p, &params(2, 2), &[w("a", 2), w("b", 2)], SKIP).unwrap_err();
        let Error::ReadableHalfRelator(report) = err else {
            panic!("expected a readable fragment, got {err:?}");
        };
        let OverlapCase::ShortSegments { witness } = report.case else {
            panic!("rose has only one-edge arcs");
        };
        assert_eq!((witness.edge_count(), witness.vertex_count()), (2, 1));
    }

    #[test]
    fn ao_move_cases() {
        // theta graph: base 0 and vertex 1 joined by arcs "ab", "ba" and "AAB"
        let edges = [
            (0, 2, 0),
            (2, 1, 1),
            (0, 3, 1),
            (3, 1, 0),
            (4, 0, 0),
            (5, 4, 0),
            (1, 5, 1),
        ]
        .map(|(from, to, gen)| Edge { from, to, gen })
        .to_vec();
        let g = AGraph::from_edges(2, 6, edges, 0).unwrap();
        assert!(g.is_folded());
        let arcs = maximal_arcs(&g);
        assert_eq!(arcs.len(), 3);
        let arc = arcs
            .iter()
            .find(|a| a.label(&g) == w("ab", 2))
            .unwrap()
            .clone();
        let label = arc.label(&g);
        let (same, rec) = ao_move(&g, &arc.path, 0..arc.len(), &label).unwrap();
        assert_eq!(
            canonical_form(&fold_all(&same).0).unwrap(),
            canonical_form(&g).unwrap()
        );
        assert_eq!(
            (rec.edge_delta, rec.betti_delta, rec.singular),
            (0, 0, false)
        );
        let (merged, rec) = ao_move(&g, &arc.path, 0..arc.len(), &Word::empty()).unwrap();
        assert_eq!(rec.edge_delta, -(arc.len() as i64));
        assert_eq!((rec.betti_delta, rec.singular), (0, false));
        assert_eq!(merged.betti(), g.betti());
        let loop_graph = wedge_from_words(&[w("abb", 2)], 2).unwrap();
        let path = read_path(&loop_graph, 0, &w("abb", 2)).unwrap();
        let (gone, rec) = ao_move(&loop_graph, &path, 0..3, &Word::empty()).unwrap();
        assert_eq!(
            (rec.betti_delta, rec.singular, gone.edge_count()),
            (-1, true, 0)
        );
        let rotated: Vec<HalfEdge> = path[1..].iter().chain(&path[..1]).copied().collect();
        assert!(matches!(
            ao_move(&loop_graph, &rotated, 0..3, &Word::empty()),
            Err(Error::BadArc(_))
        ));
    }

    fn all_words(m: usize, max_len: usize) -> Vec<Word> {
        let mut out = alloc::vec![Word::empty()];
        let mut frontier = out.clone();
        for _ in 0..max_len {
            let mut next = Vec::new();
            for x in &frontier {
                for code in 0..2 * m {
                    let l = Letter::from_code(code);
                    if x.letters().last() != Some(&l.inverse()) {
                        next.push(x.mul(&Word::reduce_from([l])));
                    }
                }
            }
            out.extend(next.iter().cloned());
            frontier = next;
        }
        out
    }

    #[test]
    fn membership_matches_search_oracle() {
        let p = small_cancellation(4, 12, 8);
        let r = p.relators()[0].representative().clone();
        let gp = params(4, 4);
        let fixtures = [
            alloc::vec![w("abc", 4), w("bdA", 4)],
            alloc::vec![w("aabd", 4)],
            alloc::vec![r.slice(0, 8), w("cd", 4)],
        ];
        for gens in fixtures {
            let out = minimize(&p, &gp, &gens, SKIP).unwrap();
            let free = crate::agraph::stallings_graph(&gens, 4).unwrap();
            let oracle = MembershipOracle::new(&free, &p, 2);
            let mut words = all_words(4, 4);
            words.extend(gens.iter().cloned());
            words.push(gens[0].mul(&r.rotate(5)).mul(&gens[0]));
            for x in words {
                assert_eq!(
                    membership(&out.rep, &x).unwrap(),
                    oracle.member(&x),
                    "{x} in {gens:?}"
                );
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn minimize_trace_invariants(seed in any::<u64>(), k in 1usize..3) {
            let p = small_cancellation(2, 36, seed % 4);
            let r = p.relators()[0].representative().clone();
            let mut rng = stream(seed, &[]);
            let gens: Vec<Word> = (0..k)
                .map(|_| {
                    if rng.gen_bool(0.5) {
                        let start = rng.gen_range(0..36);
                        let len = rng.gen_range(12..=36);
                        let core = r.rotate(start).slice(0, len);
                        sample_reduced(rng.gen_range(0..3), 2, &mut rng).mul(&core)
                    } else {
                        sample_reduced(rng.gen_range(1..12), 2, &mut rng)
                    }
                })
                .collect();
            let out = match minimize(&p, &params(2, 2), &gens, SKIP) {
                Ok(out) => out,
                Err(Error::ReadableHalfRelator(_)) => return Ok(()),
                Err(e) => panic!("{e}"),
            };
            let initial = wedge_from_words(&gens, 2).unwrap();
            let mut betti = initial.betti() as i64;
            for step in &out.steps {
                match step {
                    MinimizeStep::Fold { trace, edges_before, edges_after } => {
                        prop_assert_eq!(*edges_before - *edges_after, trace.records.len());
                        betti += trace.betti_delta();
                    }
                    MinimizeStep::Prune { edges_before, edges_after } => prop_assert!(edges_after < edges_before),
                    MinimizeStep::AoMove(rec) => {
                        prop_assert!(rec.edge_delta < 0);
                        prop_assert_eq!(rec.betti_delta, if rec.singular { -1 } else { 0 });
                        betti += rec.betti_delta;
                    }
                }
            }
            prop_assert_eq!(betti, out.rep.graph.betti() as i64);
            prop_assert!(out.rep.graph.betti() <= k);
            for g in &gens {
                prop_assert!(membership(&out.rep, g).unwrap());
            }
            for label in arc_labels(&out.rep.graph) {
                prop_assert!(is_lambda_reduced(&label, &p, Rational::new(1, 6)).unwrap().reduced);
            }
            for _ in 0..50 {
                let x = sample_reduced_path(&out.rep.graph, 72, &mut rng);
                prop_assert!(is_lambda_reduced(&x, &p, Rational::new(1, 6)).unwrap().reduced);
            }
        }
    }
}
