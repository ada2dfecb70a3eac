//! Brute-force reference procedures for tests.
//!
//! These are deliberately naive and share no search code with the library
//! proper; they only rely on words, free reduction and A-graph basics.

use alloc::collections::{BTreeMap, BTreeSet, VecDeque};
use alloc::vec::Vec;

use crate::agraph::{fold_all, AGraph, Edge, Transitions};
use crate::cancel::Presentation;
use crate::words::{Letter, Word};
use crate::Rational;

/// Per relator, the longest word occurring at two distinct positions of the
/// cyclic words `r_i^{±1}`, found by listing every cyclic subword.
pub fn max_piece_by_subwords(p: &Presentation) -> Vec<usize> {
    let mut strings = Vec::new();
    for (i, r) in p.relators().iter().enumerate() {
        strings.push((i, r.representative().letters().to_vec()));
        strings.push((i, r.representative().inverse().letters().to_vec()));
    }
    let mut positions: BTreeMap<Vec<Letter>, BTreeSet<(usize, usize)>> = BTreeMap::new();
    for (s, (_, letters)) in strings.iter().enumerate() {
        let n = letters.len();
        for off in 0..n {
            for len in 1..=n {
                let sub: Vec<Letter> = (0..len).map(|i| letters[(off + i) % n]).collect();
                positions.entry(sub).or_default().insert((s, off));
            }
        }
    }
    let mut best = alloc::vec![0; p.relators().len()];
    for (sub, pos) in positions {
        if pos.len() < 2 {
            continue;
        }
        for &(s, _) in &pos {
            let r = strings[s].0;
            best[r] = best[r].max(sub.len());
        }
    }
    best
}

/// `|u| < λ|r|` for every piece, from [`max_piece_by_subwords`].
pub fn c_prime_by_subwords(p: &Presentation, lambda: Rational) -> bool {
    max_piece_by_subwords(p)
        .iter()
        .zip(p.relators())
        .all(|(&piece, r)| {
            Rational::from_integer(piece as i64) < lambda * Rational::from_integer(r.len() as i64)
        })
}

fn symmetrized_words(p: &Presentation) -> BTreeSet<Word> {
    let mut out = BTreeSet::new();
    for r in p.relators() {
        let n = r.len();
        for k in 0..n {
            let rot = r.representative().rotate(k);
            out.insert(rot.inverse());
            out.insert(rot);
        }
    }
    out
}

/// Triviality by exhaustive breadth-first search over every shortening
/// substitution `v ↦ u⁻¹` where `v·u` is a relator rotation and `|v| > |u|`.
/// Equivalently, `w` is trivial when it can be built from the empty word by
/// relator insertions that never pass through a longer intermediate word.
pub fn trivial_by_substitution(w: &Word, p: &Presentation) -> bool {
    SubstitutionOracle::new(p).trivial(w)
}

pub fn equal_by_substitution(a: &Word, b: &Word, p: &Presentation) -> bool {
    trivial_by_substitution(&a.mul(&b.inverse()), p)
}

/// [`trivial_by_substitution`] with the relator rotations precomputed.
pub struct SubstitutionOracle {
    sym: Vec<Word>,
}

impl SubstitutionOracle {
    pub fn new(p: &Presentation) -> SubstitutionOracle {
        SubstitutionOracle {
            sym: symmetrized_words(p).into_iter().collect(),
        }
    }

    pub fn trivial(&self, w: &Word) -> bool {
        let mut seen = BTreeSet::new();
        let mut queue = VecDeque::new();
        seen.insert(w.clone());
        queue.push_back(w.clone());
        while let Some(x) = queue.pop_front() {
            if x.is_empty() {
                return true;
            }
            let l = x.letters();
            for rel in &self.sym {
                let n = rel.len();
                for vlen in n / 2 + 1..=n.min(l.len()) {
                    let v = &rel.letters()[..vlen];
                    let u_inv = rel.slice(vlen, n).inverse();
                    for s in 0..=l.len() - vlen {
                        if &l[s..s + vlen] != v {
                            continue;
                        }
                        let y = Word::reduce_from(
                            l[..s]
                                .iter()
                                .chain(u_inv.letters())
                                .chain(&l[s + vlen..])
                                .copied(),
                        );
                        if seen.insert(y.clone()) {
                            queue.push_back(y);
                        }
                    }
                }
            }
        }
        false
    }
}

/// Labels of all reduced closed paths at the base of a folded graph with at
/// most `max_len` edges.
pub fn closed_path_labels(g: &AGraph, max_len: usize) -> BTreeSet<Word> {
    let adj = g.adjacency();
    let mut out = BTreeSet::new();
    let mut stack: Vec<(usize, Vec<Letter>)> = alloc::vec![(g.base(), Vec::new())];
    while let Some((v, label)) = stack.pop() {
        if v == g.base() {
            out.insert(Word::reduce_from(label.iter().copied()));
        }
        if label.len() == max_len {
            continue;
        }
        for &h in &adj[v] {
            let l = g.label(h);
            if label.last() == Some(&l.inverse()) {
                continue;
            }
            let mut next = label.clone();
            next.push(l);
            stack.push((g.terminus(h), next));
        }
    }
    out
}

/// Membership by sewing relators onto the subgroup graph.
///
/// Each round attaches, at every vertex, a closed loop for every rotation
/// of every relator and folds. Every closed loop of the result reads an
/// element of `H`, and `w ∈ H` becomes visible once the rounds cover a
/// diagram for `w` against a loop of the original graph.
pub struct MembershipOracle {
    sewn: AGraph,
    table: Transitions,
}

impl MembershipOracle {
    pub fn new(g: &AGraph, p: &Presentation, rounds: usize) -> MembershipOracle {
        let m = g.rank();
        let mut cur = fold_all(g).0;
        for _ in 0..rounds {
            let mut n = cur.vertex_count();
            let mut edges = cur.edges().to_vec();
            for v in 0..cur.vertex_count() {
                for r in p.relators() {
                    for k in 0..r.len() {
                        let rot = r.representative().rotate(k);
                        let mut at = v;
                        for (i, &l) in rot.letters().iter().enumerate() {
                            let next = if i + 1 == rot.len() {
                                v
                            } else {
                                n += 1;
                                n - 1
                            };
                            edges.push(if l.is_inverse() {
                                Edge {
                                    from: next,
                                    to: at,
                                    gen: l.generator(),
                                }
                            } else {
                                Edge {
                                    from: at,
                                    to: next,
                                    gen: l.generator(),
                                }
                            });
                            at = next;
                        }
                    }
                }
            }
            let grown =
                AGraph::from_edges(m, n, edges, cur.base()).expect("sewn graph is connected");
            cur = fold_all(&grown).0;
        }
        let table = cur.transitions().expect("folded");
        MembershipOracle { sewn: cur, table }
    }

    /// `w` reads a closed loop at the base of the sewn graph.
    pub fn member(&self, w: &Word) -> bool {
        let mut v = self.sewn.base();
        for &l in w.letters() {
            match self.table.next(v, l) {
                Some(t) => v = t,
                None => return false,
            }
        }
        v == self.sewn.base()
    }

    pub fn graph(&self) -> &AGraph {
        &self.sewn
    }
}

/// Readability by enumerating every assignment of path vertices as a
/// restricted growth string, rejecting only assignments that violate
/// folding, then checking the four clauses on the resulting graph.
pub fn readable_by_partitions(
    w: &Word,
    mu: Rational,
    k: usize,
    m: usize,
    degree_clause: bool,
) -> bool {
    let letters = w.letters();
    let budget = (mu * Rational::from_integer(letters.len() as i64))
        .floor()
        .to_integer();
    let mut assign = alloc::vec![0usize];
    budget >= 1
        && rgs(letters, &mut assign, 0, &mut |assign: &[usize]| {
            let mut edges = BTreeSet::new();
            for (i, l) in letters.iter().enumerate() {
                let (u, v) = (assign[i], assign[i + 1]);
                edges.insert(if l.is_inverse() {
                    (v, l.generator(), u)
                } else {
                    (u, l.generator(), v)
                });
            }
            let verts = assign.iter().max().unwrap() + 1;
            let e = edges.len();
            let b = e + 1 - verts;
            let mut deg = alloc::vec![0usize; verts];
            for &(u, _, v) in &edges {
                deg[u] += 1;
                deg[v] += 1;
            }
            (e as i64) <= budget && b <= k && (!degree_clause || deg.iter().any(|&d| d < 2 * m))
        })
}

fn folds_ok(letters: &[Letter], assign: &[usize]) -> bool {
    let mut out: BTreeMap<(usize, Letter), usize> = BTreeMap::new();
    for (i, l) in letters.iter().take(assign.len() - 1).enumerate() {
        let (u, v) = (assign[i], assign[i + 1]);
        for (key, target) in [((u, *l), v), ((v, l.inverse()), u)] {
            if *out.entry(key).or_insert(target) != target {
                return false;
            }
        }
    }
    true
}

fn rgs(
    letters: &[Letter],
    assign: &mut Vec<usize>,
    max: usize,
    accept: &mut dyn FnMut(&[usize]) -> bool,
) -> bool {
    if assign.len() == letters.len() + 1 {
        return accept(assign);
    }
    for v in 0..=max + 1 {
        assign.push(v);
        if folds_ok(letters, assign) && rgs(letters, assign, max.max(v), accept) {
            return true;
        }
        assign.pop();
    }
    false
}
