//! Basepointed A-graphs and Stallings folding.
//!
//! Each topological edge is stored once, oriented so that its label is a
//! positive generator; the reverse edge (label inverted) is implicit.

use alloc::collections::{BTreeSet, VecDeque};
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt::Write as _;

use rand::Rng;

use crate::words::{check_rank, Letter, Word};
use crate::{Error, Result};

/// A topological edge `from --a_gen--> to`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge {
    pub from: usize,
    pub to: usize,
    pub gen: usize,
}

/// An oriented edge: a topological edge plus a direction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HalfEdge {
    pub edge: usize,
    pub forward: bool,
}

impl HalfEdge {
    pub fn reverse(self) -> HalfEdge {
        HalfEdge {
            edge: self.edge,
            forward: !self.forward,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AGraph {
    m: usize,
    n_vertices: usize,
    edges: Vec<Edge>,
    base: usize,
}

/// Outgoing-edge table of a folded graph: at most one edge per label.
#[derive(Clone, Debug)]
pub struct Transitions {
    table: Vec<Option<(HalfEdge, usize)>>,
    width: usize,
}

impl Transitions {
    /// Target of the `l`-edge leaving `v`.
    pub fn next(&self, v: usize, l: Letter) -> Option<usize> {
        self.table[v * self.width + l.code()].map(|(_, t)| t)
    }

    pub fn half_edge(&self, v: usize, l: Letter) -> Option<(HalfEdge, usize)> {
        self.table[v * self.width + l.code()]
    }
}

impl AGraph {
    /// The one-vertex graph with no edges (the trivial subgroup).
    pub fn trivial(m: usize) -> AGraph {
        AGraph {
            m,
            n_vertices: 1,
            edges: Vec::new(),
            base: 0,
        }
    }

    /// Validating constructor: vertex bounds, labels and connectivity.
    pub fn from_edges(
        m: usize,
        n_vertices: usize,
        edges: Vec<Edge>,
        base: usize,
    ) -> Result<AGraph> {
        check_rank(m)?;
        if base >= n_vertices {
            return Err(Error::BadVertex(base));
        }
        for e in &edges {
            if e.from >= n_vertices || e.to >= n_vertices {
                return Err(Error::BadVertex(e.from.max(e.to)));
            }
            if e.gen >= m {
                return Err(Error::LetterOutOfRange {
                    letter: Letter::new(e.gen, false).to_char(),
                    rank: m,
                });
            }
        }
        let g = AGraph {
            m,
            n_vertices,
            edges,
            base,
        };
        if !g.is_connected() {
            return Err(Error::Disconnected);
        }
        Ok(g)
    }

    pub(crate) fn from_parts_unchecked(
        m: usize,
        n_vertices: usize,
        edges: Vec<Edge>,
        base: usize,
    ) -> AGraph {
        AGraph {
            m,
            n_vertices,
            edges,
            base,
        }
    }

    pub fn rank(&self) -> usize {
        self.m
    }

    pub fn vertex_count(&self) -> usize {
        self.n_vertices
    }

    /// Number of topological edges.
    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn base(&self) -> usize {
        self.base
    }

    pub fn origin(&self, h: HalfEdge) -> usize {
        let e = self.edges[h.edge];
        if h.forward {
            e.from
        } else {
            e.to
        }
    }

    pub fn terminus(&self, h: HalfEdge) -> usize {
        self.origin(h.reverse())
    }

    pub fn label(&self, h: HalfEdge) -> Letter {
        Letter::new(self.edges[h.edge].gen, !h.forward)
    }

    pub fn path_label(&self, path: &[HalfEdge]) -> Word {
        Word::reduce_from(path.iter().map(|&h| self.label(h)))
    }

    /// Oriented edges leaving each vertex, sorted by label.
    pub fn adjacency(&self) -> Vec<Vec<HalfEdge>> {
        let mut adj = vec![Vec::new(); self.n_vertices];
        for (i, e) in self.edges.iter().enumerate() {
            adj[e.from].push(HalfEdge {
                edge: i,
                forward: true,
            });
            adj[e.to].push(HalfEdge {
                edge: i,
                forward: false,
            });
        }
        for list in &mut adj {
            list.sort_by_key(|&h| (self.label(h), h));
        }
        adj
    }

    /// Number of oriented edges leaving `v` (a loop counts twice).
    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.n_vertices];
        for e in &self.edges {
            deg[e.from] += 1;
            deg[e.to] += 1;
        }
        deg
    }

    fn is_connected(&self) -> bool {
        let adj = self.adjacency();
        let mut seen = vec![false; self.n_vertices];
        let mut stack = vec![self.base];
        seen[self.base] = true;
        let mut count = 1;
        while let Some(v) = stack.pop() {
            for &h in &adj[v] {
                let t = self.terminus(h);
                if !seen[t] {
                    seen[t] = true;
                    count += 1;
                    stack.push(t);
                }
            }
        }
        count == self.n_vertices
    }

    pub fn is_folded(&self) -> bool {
        self.adjacency().iter().all(|list| {
            list.windows(2)
                .all(|p| self.label(p[0]) != self.label(p[1]))
        })
    }

    /// First Betti number `E − V + 1`.
    pub fn betti(&self) -> usize {
        self.edges.len() + 1 - self.n_vertices
    }

    /// Transition table; errors if the graph is not folded.
    pub fn transitions(&self) -> Result<Transitions> {
        let width = 2 * self.m;
        let mut table = vec![None; self.n_vertices * width];
        for (v, list) in self.adjacency().into_iter().enumerate() {
            for h in list {
                let slot = &mut table[v * width + self.label(h).code()];
                if slot.is_some() {
                    return Err(Error::NotFolded);
                }
                *slot = Some((h, self.terminus(h)));
            }
        }
        Ok(Transitions { table, width })
    }

    /// Drops vertices that are neither endpoints of an edge nor the base and
    /// renumbers the rest in increasing order.
    pub(crate) fn compacted(mut self) -> AGraph {
        let mut used = vec![false; self.n_vertices];
        used[self.base] = true;
        for e in &self.edges {
            used[e.from] = true;
            used[e.to] = true;
        }
        let mut id = vec![usize::MAX; self.n_vertices];
        let mut next = 0;
        for v in 0..self.n_vertices {
            if used[v] {
                id[v] = next;
                next += 1;
            }
        }
        for e in &mut self.edges {
            e.from = id[e.from];
            e.to = id[e.to];
        }
        self.base = id[self.base];
        self.n_vertices = next;
        self
    }

    /// The subgraph spanned by a set of edges, based at `base`.
    pub fn spanned_subgraph(&self, edge_ids: &BTreeSet<usize>, base: usize) -> AGraph {
        let edges = edge_ids.iter().map(|&i| self.edges[i]).collect();
        AGraph::from_parts_unchecked(self.m, self.n_vertices, edges, base).compacted()
    }
}

/// Wedge of loops at the basepoint, one loop per nonempty word.
pub fn wedge_from_words(words: &[Word], m: usize) -> Result<AGraph> {
    check_rank(m)?;
    let mut n = 1;
    let mut edges = Vec::new();
    for w in words {
        if let Some(l) = w.letters().iter().find(|l| l.generator() >= m) {
            return Err(Error::LetterOutOfRange {
                letter: l.to_char(),
                rank: m,
            });
        }
        let len = w.len();
        for (i, &l) in w.letters().iter().enumerate() {
            let a = if i == 0 { 0 } else { n + i - 1 };
            let b = if i + 1 == len { 0 } else { n + i };
            edges.push(if l.is_inverse() {
                Edge {
                    from: b,
                    to: a,
                    gen: l.generator(),
                }
            } else {
                Edge {
                    from: a,
                    to: b,
                    gen: l.generator(),
                }
            });
        }
        n += len.saturating_sub(1);
    }
    Ok(AGraph::from_parts_unchecked(m, n, edges, 0))
}

/// One identification of two equally labeled edges.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FoldRecord {
    pub label: Letter,
    /// Termini already coincided: the Betti number drops by one.
    pub singular: bool,
}

impl FoldRecord {
    pub fn betti_delta(&self) -> i64 {
        if self.singular {
            -1
        } else {
            0
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FoldTrace {
    pub records: Vec<FoldRecord>,
}

impl FoldTrace {
    pub fn singular_count(&self) -> usize {
        self.records.iter().filter(|r| r.singular).count()
    }

    pub fn betti_delta(&self) -> i64 {
        self.records.iter().map(FoldRecord::betti_delta).sum()
    }
}

/// Chooses among pending alternatives during folding.
pub trait FoldSchedule {
    /// Index in `0..n`, `n ≥ 1`.
    fn pick(&mut self, n: usize) -> usize;
}

/// Work queue in FIFO order, smallest label first.
pub struct Fifo;

impl FoldSchedule for Fifo {
    fn pick(&mut self, _n: usize) -> usize {
        0
    }
}

/// Uniformly random choices, for confluence experiments.
pub struct RandomOrder<'a, R: Rng + ?Sized>(pub &'a mut R);

impl<R: Rng + ?Sized> FoldSchedule for RandomOrder<'_, R> {
    fn pick(&mut self, n: usize) -> usize {
        self.0.gen_range(0..n)
    }
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        let mut root = x;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        while self.parent[x] != root {
            let next = self.parent[x];
            self.parent[x] = root;
            x = next;
        }
        root
    }
}

/// Folds until no vertex has two outgoing edges with the same label.
pub fn fold_all(g: &AGraph) -> (AGraph, FoldTrace) {
    fold_with(g, &mut Fifo)
}

/// Folding driven by an explicit schedule.
///
/// Vertices are merged through a union-find; each fold removes exactly one
/// topological edge.
pub fn fold_with<S: FoldSchedule + ?Sized>(g: &AGraph, schedule: &mut S) -> (AGraph, FoldTrace) {
    let mut uf = UnionFind::new(g.n_vertices);
    let mut adj: Vec<Vec<HalfEdge>> = vec![Vec::new(); g.n_vertices];
    for (i, e) in g.edges.iter().enumerate() {
        adj[e.from].push(HalfEdge {
            edge: i,
            forward: true,
        });
        adj[e.to].push(HalfEdge {
            edge: i,
            forward: false,
        });
    }
    let mut alive = vec![true; g.edges.len()];
    let mut queue: VecDeque<usize> = (0..g.n_vertices).collect();
    let mut trace = FoldTrace::default();

    while !queue.is_empty() {
        let at = schedule.pick(queue.len());
        let v = queue.swap_remove_back(at).expect("index in range");
        let v = uf.find(v);
        adj[v].retain(|h| alive[h.edge]);
        let mut list = adj[v].clone();
        list.sort_by_key(|&h| (g.label(h), h));
        let clashes: Vec<usize> = (1..list.len())
            .filter(|&i| {
                g.label(list[i]) == g.label(list[i - 1])
                    && (i < 2 || g.label(list[i - 2]) != g.label(list[i]))
            })
            .collect();
        if clashes.is_empty() {
            continue;
        }
        let start = clashes[schedule.pick(clashes.len())] - 1;
        let label = g.label(list[start]);
        let group: Vec<HalfEdge> = list[start..]
            .iter()
            .copied()
            .take_while(|&h| g.label(h) == label)
            .collect();
        let i = schedule.pick(group.len());
        let mut j = schedule.pick(group.len() - 1);
        if j >= i {
            j += 1;
        }
        let (keep, drop) = (group[i], group[j]);
        let t1 = uf.find(g.terminus(keep));
        let t2 = uf.find(g.terminus(drop));
        alive[drop.edge] = false;
        let singular = t1 == t2;
        trace.records.push(FoldRecord { label, singular });
        if !singular {
            let (root, other) = if t1 < t2 { (t1, t2) } else { (t2, t1) };
            uf.parent[other] = root;
            let moved = core::mem::take(&mut adj[other]);
            adj[root].extend(moved);
            queue.push_back(root);
        }
        queue.push_back(uf.find(v));
    }

    let edges = g
        .edges
        .iter()
        .zip(&alive)
        .filter(|(_, &a)| a)
        .map(|(e, _)| Edge {
            from: uf.find(e.from),
            to: uf.find(e.to),
            gen: e.gen,
        })
        .collect();
    let base = uf.find(g.base);
    (
        AGraph::from_parts_unchecked(g.m, g.n_vertices, edges, base).compacted(),
        trace,
    )
}

/// Repeatedly deletes degree-1 vertices other than the basepoint.
pub fn core(g: &AGraph) -> AGraph {
    let mut deg = g.degrees();
    let adj = g.adjacency();
    let mut alive = vec![true; g.edges.len()];
    let mut stack: Vec<usize> = (0..g.n_vertices)
        .filter(|&v| deg[v] == 1 && v != g.base)
        .collect();
    while let Some(v) = stack.pop() {
        if deg[v] != 1 {
            continue;
        }
        let Some(&h) = adj[v].iter().find(|h| alive[h.edge]) else {
            continue;
        };
        alive[h.edge] = false;
        deg[v] = 0;
        let t = g.terminus(h);
        deg[t] -= 1;
        if deg[t] == 1 && t != g.base {
            stack.push(t);
        }
    }
    let edges = g
        .edges
        .iter()
        .zip(&alive)
        .filter(|(_, &a)| a)
        .map(|(e, _)| *e)
        .collect();
    AGraph::from_parts_unchecked(g.m, g.n_vertices, edges, g.base).compacted()
}

/// Fold then take the core: the Stallings graph of the generated subgroup.
pub fn stallings_graph(words: &[Word], m: usize) -> Result<AGraph> {
    Ok(core(&fold_all(&wedge_from_words(words, m)?).0))
}

/// A maximal edge-path whose interior vertices have degree 2 and are not the
/// basepoint.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Arc {
    pub start: usize,
    pub end: usize,
    pub path: Vec<HalfEdge>,
}

impl Arc {
    pub fn len(&self) -> usize {
        self.path.len()
    }

    pub fn is_empty(&self) -> bool {
        self.path.is_empty()
    }

    pub fn label(&self, g: &AGraph) -> Word {
        g.path_label(&self.path)
    }
}

/// Partition of the topological edges into maximal arcs.
pub fn maximal_arcs(g: &AGraph) -> Vec<Arc> {
    let deg = g.degrees();
    let adj = g.adjacency();
    let is_break = |v: usize| deg[v] != 2 || v == g.base;
    let mut used = vec![false; g.edges.len()];
    let mut arcs = Vec::new();
    let mut starts: Vec<usize> = (0..g.n_vertices).filter(|&v| is_break(v)).collect();
    // a cycle of degree-2 vertices can only be reached from the basepoint,
    // which is always a break vertex, so `starts` is never empty here.
    starts.sort_by_key(|&v| (v != g.base, v));
    for v in starts {
        for &h in &adj[v] {
            if used[h.edge] {
                continue;
            }
            let mut path = vec![h];
            used[h.edge] = true;
            let mut cur = g.terminus(h);
            let mut last = h;
            while !is_break(cur) {
                let next = adj[cur]
                    .iter()
                    .copied()
                    .find(|&x| x != last.reverse())
                    .expect("degree-2 vertex has a second edge");
                used[next.edge] = true;
                path.push(next);
                last = next;
                cur = g.terminus(next);
            }
            arcs.push(Arc {
                start: v,
                end: cur,
                path,
            });
        }
    }
    arcs
}

/// The unique path from `start` spelling `w` in a folded graph.
pub fn read_path(g: &AGraph, start: usize, w: &Word) -> Option<Vec<HalfEdge>> {
    let adj = g.adjacency();
    let mut cur = start;
    let mut path = Vec::with_capacity(w.len());
    for &l in w.letters() {
        let h = *adj[cur].iter().find(|&&h| g.label(h) == l)?;
        path.push(h);
        cur = g.terminus(h);
    }
    Some(path)
}

/// `w ∈ H` for the subgroup represented by a folded graph.
pub fn free_membership(g: &AGraph, w: &Word) -> bool {
    match read_path(g, g.base, w) {
        Some(p) => p.last().is_none_or(|&h| g.terminus(h) == g.base),
        None => false,
    }
}

/// BFS tree from the basepoint (labels in order `a < A < b < …`): for each
/// vertex, the tree path from the base.
fn bfs_tree(g: &AGraph) -> (Vec<Option<HalfEdge>>, Vec<usize>) {
    let adj = g.adjacency();
    let mut parent = vec![None; g.n_vertices];
    let mut seen = vec![false; g.n_vertices];
    let mut order = vec![g.base];
    seen[g.base] = true;
    let mut i = 0;
    while i < order.len() {
        let v = order[i];
        i += 1;
        for &h in &adj[v] {
            let t = g.terminus(h);
            if !seen[t] {
                seen[t] = true;
                parent[t] = Some(h);
                order.push(t);
            }
        }
    }
    (parent, order)
}

/// Free basis of `π₁(Γ, base)`: one word per edge outside a BFS spanning tree.
pub fn spanning_tree_basis(g: &AGraph) -> Vec<Word> {
    let (parent, _) = bfs_tree(g);
    let tree_edges: BTreeSet<usize> = parent.iter().flatten().map(|h| h.edge).collect();
    let to_vertex = |mut v: usize| {
        let mut letters = Vec::new();
        while let Some(h) = parent[v] {
            letters.push(g.label(h));
            v = g.origin(h);
        }
        letters.reverse();
        Word::reduce_from(letters)
    };
    (0..g.edges.len())
        .filter(|i| !tree_edges.contains(i))
        .map(|i| {
            let e = g.edges[i];
            to_vertex(e.from)
                .mul(&Word::reduce_from([Letter::new(e.gen, false)]))
                .mul(&to_vertex(e.to).inverse())
        })
        .collect()
}

/// Canonical text serialization (`agraph v1`) of a folded graph.
///
/// Vertices are renumbered in BFS discovery order from the basepoint with
/// labels tried in the order `a < A < b < B < …`, so two folded basepointed
/// graphs are label-isomorphic exactly when their forms are equal.
pub fn canonical_form(g: &AGraph) -> Result<String> {
    let tr = g.transitions()?;
    let mut id = vec![usize::MAX; g.n_vertices];
    let mut order = vec![g.base];
    id[g.base] = 0;
    let mut i = 0;
    while i < order.len() {
        let v = order[i];
        i += 1;
        for code in 0..2 * g.m {
            if let Some(t) = tr.next(v, Letter::from_code(code)) {
                if id[t] == usize::MAX {
                    id[t] = order.len();
                    order.push(t);
                }
            }
        }
    }
    if order.len() != g.n_vertices {
        return Err(Error::Disconnected);
    }
    let mut lines: Vec<(usize, usize, usize)> = g
        .edges
        .iter()
        .map(|e| (id[e.from], id[e.to], e.gen))
        .collect();
    lines.sort_unstable();
    let mut out = format!("agraph v1 m={} base=0\n", g.m);
    for (a, b, gen) in lines {
        let _ = writeln!(out, "{a} {b} {}", Letter::new(gen, false).to_char());
    }
    Ok(out)
}

/// The graph with vertices renumbered as in [`canonical_form`].
pub fn canonical_graph(g: &AGraph) -> Result<AGraph> {
    let text = canonical_form(g)?;
    let mut edges = Vec::new();
    let mut n = 1;
    for line in text.lines().skip(1) {
        let mut it = line.split(' ');
        let a: usize = it.next().and_then(|s| s.parse().ok()).unwrap_or(0);
        let b: usize = it.next().and_then(|s| s.parse().ok()).unwrap_or(0);
        let c = it.next().and_then(|s| s.chars().next()).unwrap_or('a');
        n = n.max(a + 1).max(b + 1);
        edges.push(Edge {
            from: a,
            to: b,
            gen: Letter::from_char(c)?.generator(),
        });
    }
    Ok(AGraph::from_parts_unchecked(g.m, n, edges, 0))
}
