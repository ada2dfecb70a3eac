//! Metric small cancellation over a finite presentation.
//!
//! All thresholds (`λ|r|`, `(1−3λ)|r|`, `|r|/2`) are compared as exact
//! integer inequalities against the rational λ.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::ToString;
use alloc::vec::Vec;

use crate::words::{check_rank, cyclic_permutations_and_inverses, CyclicWord, Letter, Word};
use crate::{Error, Rational, Result};

/// A position in the cyclic word `r_i` (or `r_i⁻¹`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Occurrence {
    pub relator: usize,
    pub inverse: bool,
    pub offset: usize,
}

/// Cyclic strings `r_i^{±1}` with a first-letter index.
#[derive(Clone, Debug)]
pub struct RelatorIndex {
    strings: Vec<(usize, bool, Vec<Letter>)>,
    by_first: Vec<Vec<(usize, usize)>>,
}

impl RelatorIndex {
    fn new(m: usize, relators: &[CyclicWord]) -> RelatorIndex {
        let mut strings = Vec::new();
        for (i, r) in relators.iter().enumerate() {
            strings.push((i, false, r.representative().letters().to_vec()));
            strings.push((i, true, r.representative().inverse().letters().to_vec()));
        }
        let mut by_first = alloc::vec![Vec::new(); 2 * m];
        for (s, (_, _, letters)) in strings.iter().enumerate() {
            for (off, l) in letters.iter().enumerate() {
                by_first[l.code()].push((s, off));
            }
        }
        RelatorIndex { strings, by_first }
    }

    /// Number of cyclic strings (twice the relator count).
    pub fn string_count(&self) -> usize {
        self.strings.len()
    }

    pub fn string_len(&self, s: usize) -> usize {
        self.strings[s].2.len()
    }

    /// Letter at cyclic position `i` of string `s`.
    pub fn at(&self, s: usize, i: usize) -> Letter {
        let v = &self.strings[s].2;
        v[i % v.len()]
    }

    pub fn occurrence(&self, s: usize, offset: usize) -> Occurrence {
        let (relator, inverse, _) = self.strings[s];
        Occurrence {
            relator,
            inverse,
            offset,
        }
    }

    /// Cyclic subword of string `s` starting at `start` with `len` letters.
    pub fn segment(&self, s: usize, start: usize, len: usize) -> Vec<Letter> {
        (0..len).map(|i| self.at(s, start + i)).collect()
    }

    /// Starting positions `(string, offset)` whose first letter is `l`.
    pub fn starting_with(&self, l: Letter) -> &[(usize, usize)] {
        self.by_first.get(l.code()).map_or(&[], |v| v.as_slice())
    }

    /// Length of the longest common prefix of `w` and the cyclic reading of
    /// string `s` from `offset`, capped at the string length.
    pub fn match_len(&self, s: usize, offset: usize, w: &[Letter]) -> usize {
        let n = self.string_len(s);
        w.iter()
            .take(n)
            .enumerate()
            .take_while(|&(i, &l)| self.at(s, offset + i) == l)
            .count()
    }
}

/// Longest piece found inside one relator, with its two occurrences.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PieceWitness {
    pub piece: Word,
    pub first: Occurrence,
    pub second: Occurrence,
}

/// Per-relator maximum piece length.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PieceIndex {
    pub max_piece: Vec<usize>,
    pub witnesses: Vec<Option<PieceWitness>>,
}

impl PieceIndex {
    pub fn overall(&self) -> usize {
        self.max_piece.iter().copied().max().unwrap_or(0)
    }
}

/// `⟨a_1..a_m | r_1..r_t⟩` with cyclically reduced relators.
#[derive(Clone, Debug)]
pub struct Presentation {
    m: usize,
    relators: Vec<CyclicWord>,
    index: RelatorIndex,
    pieces: PieceIndex,
}

impl PartialEq for Presentation {
    fn eq(&self, other: &Self) -> bool {
        self.m == other.m
            && self.relators.len() == other.relators.len()
            && self
                .relators
                .iter()
                .zip(&other.relators)
                .all(|(a, b)| a.representative() == b.representative())
    }
}

impl Eq for Presentation {}

impl Presentation {
    pub fn new(m: usize, relators: Vec<Word>) -> Result<Presentation> {
        check_rank(m)?;
        let mut cyc = Vec::with_capacity(relators.len());
        for (i, r) in relators.into_iter().enumerate() {
            if r.is_empty() || !r.is_cyclically_reduced() || r.rank_used() > m {
                return Err(Error::BadRelator(i));
            }
            cyc.push(CyclicWord::new(r)?);
        }
        let index = RelatorIndex::new(m, &cyc);
        let pieces = pieces_sorted(&index, cyc.len());
        Ok(Presentation {
            m,
            relators: cyc,
            index,
            pieces,
        })
    }

    pub fn rank(&self) -> usize {
        self.m
    }

    pub fn relators(&self) -> &[CyclicWord] {
        &self.relators
    }

    pub fn index(&self) -> &RelatorIndex {
        &self.index
    }

    pub fn max_relator_len(&self) -> usize {
        self.relators.iter().map(CyclicWord::len).max().unwrap_or(0)
    }

    pub fn min_relator_len(&self) -> usize {
        self.relators.iter().map(CyclicWord::len).min().unwrap_or(0)
    }

    pub fn pieces(&self) -> &PieceIndex {
        &self.pieces
    }
}

/// All rotations of all `r_i^{±1}`, with the index of the source relator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymmetrizedSet {
    pub words: Vec<(Word, usize)>,
}

impl SymmetrizedSet {
    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn contains(&self, w: &Word) -> bool {
        self.words.binary_search_by(|(x, _)| x.cmp(w)).is_ok()
    }
}

pub fn symmetrize(p: &Presentation) -> SymmetrizedSet {
    let mut map = BTreeMap::new();
    for (i, r) in p.relators.iter().enumerate() {
        for w in cyclic_permutations_and_inverses(r) {
            map.entry(w).or_insert(i);
        }
    }
    SymmetrizedSet {
        words: map.into_iter().collect(),
    }
}

fn record_piece(
    idx: &RelatorIndex,
    best: &mut [usize],
    wit: &mut [Option<PieceWitness>],
    a: (usize, usize),
    b: (usize, usize),
    len: usize,
) {
    for (x, y) in [(a, b), (b, a)] {
        let r = idx.strings[x.0].0;
        if len > best[r] || (len > 0 && wit[r].is_none()) {
            best[r] = len;
            wit[r] = Some(PieceWitness {
                piece: Word::reduce_from(idx.segment(x.0, x.1, len)),
                first: idx.occurrence(x.0, x.1),
                second: idx.occurrence(y.0, y.1),
            });
        }
    }
}

/// Sorted-rotation piece search: lexicographically neighbouring rotations
/// realise every maximal common prefix.
fn pieces_sorted(idx: &RelatorIndex, t: usize) -> PieceIndex {
    let mut occ: Vec<(usize, usize)> = (0..idx.string_count())
        .flat_map(|s| (0..idx.string_len(s)).map(move |o| (s, o)))
        .collect();
    let key = |&(s, o): &(usize, usize)| (0..idx.string_len(s)).map(move |i| idx.at(s, o + i));
    occ.sort_by(|a, b| key(a).cmp(key(b)).then(a.cmp(b)));
    let mut best = alloc::vec![0; t];
    let mut wit = alloc::vec![None; t];
    for pair in occ.windows(2) {
        let (a, b) = (pair[0], pair[1]);
        let cap = idx.string_len(a.0).min(idx.string_len(b.0));
        let len = (0..cap)
            .take_while(|&i| idx.at(a.0, a.1 + i) == idx.at(b.0, b.1 + i))
            .count();
        record_piece(idx, &mut best, &mut wit, a, b, len);
    }
    PieceIndex {
        max_piece: best,
        witnesses: wit,
    }
}

/// Maximum piece length per relator (sorted-rotation search).
pub fn max_piece_length(p: &Presentation) -> PieceIndex {
    p.pieces.clone()
}

/// Reference implementation: longest common extension over all pairs of
/// distinct cyclic positions.
pub fn max_piece_length_brute(p: &Presentation) -> PieceIndex {
    let idx = &p.index;
    let occ: Vec<(usize, usize)> = (0..idx.string_count())
        .flat_map(|s| (0..idx.string_len(s)).map(move |o| (s, o)))
        .collect();
    let t = p.relators.len();
    let mut best = alloc::vec![0; t];
    let mut wit = alloc::vec![None; t];
    for (i, &a) in occ.iter().enumerate() {
        for &b in &occ[i + 1..] {
            let cap = idx.string_len(a.0).min(idx.string_len(b.0));
            let len = (0..cap)
                .take_while(|&k| idx.at(a.0, a.1 + k) == idx.at(b.0, b.1 + k))
                .count();
            record_piece(idx, &mut best, &mut wit, a, b, len);
        }
    }
    PieceIndex {
        max_piece: best,
        witnesses: wit,
    }
}

/// `|u| < λ·n`
fn below_lambda(len: usize, n: usize, lambda: Rational) -> bool {
    (len as i64) * lambda.denom() < lambda.numer() * n as i64
}

/// `|v| > (1−3λ)·n`
fn above_complement(len: usize, n: usize, lambda: Rational) -> bool {
    (len as i64) * lambda.denom() > (lambda.denom() - 3 * lambda.numer()) * n as i64
}

/// Smallest `a` with `a ≥ λ·n`.
fn ceil_lambda(n: usize, lambda: Rational) -> usize {
    let num = lambda.numer() * n as i64;
    let den = *lambda.denom();
    ((num + den - 1) / den) as usize
}

/// Largest `a` with `a ≤ (1−3λ)·n` (0 if negative).
fn floor_complement(n: usize, lambda: Rational) -> usize {
    let num = (lambda.denom() - 3 * lambda.numer()) * n as i64;
    if num < 0 {
        0
    } else {
        (num / lambda.denom()) as usize
    }
}

/// Largest `g` with `g < λ·n`, if any.
fn max_piece_below(n: usize, lambda: Rational) -> Option<usize> {
    let g = ceil_lambda(n, lambda);
    g.checked_sub(1)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CPrimeViolation {
    pub relator: usize,
    pub relator_len: usize,
    pub witness: PieceWitness,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CPrimeVerdict {
    pub holds: bool,
    pub violation: Option<CPrimeViolation>,
}

fn check_lambda(lambda: Rational) -> Result<()> {
    if lambda <= Rational::from_integer(0) || lambda > Rational::from_integer(1) {
        return Err(Error::BadParameter(format!(
            "λ = {lambda} must lie in (0, 1]"
        )));
    }
    Ok(())
}

/// Every piece `u` inside a relator `r` satisfies `|u| < λ|r|`.
pub fn check_c_prime(p: &Presentation, lambda: Rational) -> Result<CPrimeVerdict> {
    check_lambda(lambda)?;
    for (i, r) in p.relators.iter().enumerate() {
        let len = p.pieces.max_piece[i];
        if !below_lambda(len, r.len(), lambda) {
            let witness = p.pieces.witnesses[i].clone().unwrap_or(PieceWitness {
                piece: Word::empty(),
                first: Occurrence {
                    relator: i,
                    inverse: false,
                    offset: 0,
                },
                second: Occurrence {
                    relator: i,
                    inverse: false,
                    offset: 0,
                },
            });
            return Ok(CPrimeVerdict {
                holds: false,
                violation: Some(CPrimeViolation {
                    relator: i,
                    relator_len: r.len(),
                    witness,
                }),
            });
        }
    }
    Ok(CPrimeVerdict {
        holds: true,
        violation: None,
    })
}

fn require_c_prime(p: &Presentation, lambda: Rational) -> Result<()> {
    if check_c_prime(p, lambda)?.holds {
        Ok(())
    } else {
        Err(Error::NotSmallCancellation(lambda.to_string()))
    }
}

fn sixth() -> Rational {
    Rational::new(1, 6)
}

fn check_small_lambda(lambda: Rational) -> Result<()> {
    if lambda <= Rational::from_integer(0) || lambda > sixth() {
        return Err(Error::BadParameter(format!(
            "λ = {lambda} must lie in (0, 1/6]"
        )));
    }
    Ok(())
}

/// A relator fragment `v` inside a word.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fragment {
    pub start: usize,
    pub len: usize,
    pub occurrence: Occurrence,
    pub relator_len: usize,
}

/// Longest relator match starting at each position, reporting the leftmost
/// position whose match satisfies `qualifies(len, n)`; ties prefer the longest
/// match, then the lowest relator index, `r` before `r⁻¹`, lowest offset.
fn leftmost_fragment(
    idx: &RelatorIndex,
    w: &[Letter],
    qualifies: impl Fn(usize, usize) -> bool,
) -> Option<Fragment> {
    for start in 0..w.len() {
        let mut best: Option<Fragment> = None;
        for &(s, off) in idx.starting_with(w[start]) {
            let n = idx.string_len(s);
            let len = idx.match_len(s, off, &w[start..]);
            if !qualifies(len, n) {
                continue;
            }
            let occ = idx.occurrence(s, off);
            let better = match &best {
                None => true,
                Some(b) => {
                    (len, core::cmp::Reverse(occ)) > (b.len, core::cmp::Reverse(b.occurrence))
                }
            };
            if better {
                best = Some(Fragment {
                    start,
                    len,
                    occurrence: occ,
                    relator_len: n,
                });
            }
        }
        if best.is_some() {
            return best;
        }
    }
    None
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LambdaVerdict {
    pub reduced: bool,
    pub witness: Option<Fragment>,
}

/// No subword `v` of `w` is a relator fragment with `|v| > (1−3λ)|r|`.
pub fn is_lambda_reduced(w: &Word, p: &Presentation, lambda: Rational) -> Result<LambdaVerdict> {
    require_c_prime(p, lambda)?;
    Ok(lambda_reduced_unchecked(w, p, lambda))
}

pub(crate) fn lambda_reduced_unchecked(
    w: &Word,
    p: &Presentation,
    lambda: Rational,
) -> LambdaVerdict {
    let witness = leftmost_fragment(&p.index, w.letters(), |len, n| {
        above_complement(len, n, lambda)
    });
    LambdaVerdict {
        reduced: witness.is_none(),
        witness,
    }
}

/// Dehn's algorithm: replace any `v` with `r = v·u`, `|v| > |r|/2`, by `u⁻¹`.
pub fn dehn_reduce(w: &Word, p: &Presentation) -> Result<Word> {
    require_c_prime(p, sixth())?;
    Ok(dehn_unchecked(w, p))
}

pub(crate) fn dehn_unchecked(w: &Word, p: &Presentation) -> Word {
    let idx = &p.index;
    let mut cur = w.clone();
    while let Some(f) = leftmost_fragment(idx, cur.letters(), |len, n| 2 * len > n) {
        let s = 2 * f.occurrence.relator + f.occurrence.inverse as usize;
        let n = f.relator_len;
        // r = v·u with v the matched fragment; v = u⁻¹ in G
        let replacement: Vec<Letter> = (0..n - f.len)
            .map(|i| idx.at(s, f.occurrence.offset + n - 1 - i).inverse())
            .collect();
        let l = cur.letters();
        cur = Word::reduce_from(
            l[..f.start]
                .iter()
                .chain(replacement.iter())
                .chain(l[f.start + f.len..].iter())
                .copied(),
        );
    }
    cur
}

/// Word problem for `C'(1/6)` presentations.
pub fn is_trivial(w: &Word, p: &Presentation) -> Result<bool> {
    Ok(dehn_reduce(w, p)?.is_empty())
}

/// `C = (1−3λ)/λ`.
pub fn quasigeodesic_constant(lambda: Rational) -> Result<Rational> {
    check_small_lambda(lambda)?;
    Ok((Rational::from_integer(1) - lambda * 3) / lambda)
}

/// One cell of a ladder diagram.
///
/// Reading its boundary clockwise from the top-left corner gives
/// `top · right · bottom⁻¹ · left⁻¹`, a rotation of `r^{±1}`; the sides are
/// read from the upper boundary down to the lower one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LadderRegion {
    pub occurrence: Occurrence,
    pub top: Word,
    pub right: Word,
    pub bottom: Word,
    pub left: Word,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LadderStep {
    /// Upper and lower boundaries share this letter.
    Common(Letter),
    Region(LadderRegion),
}

/// Left-to-right sequence of shared letters and relator cells.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LadderDiagram {
    pub steps: Vec<LadderStep>,
}

impl LadderDiagram {
    pub fn regions(&self) -> impl Iterator<Item = &LadderRegion> {
        self.steps.iter().filter_map(|s| match s {
            LadderStep::Region(r) => Some(r),
            LadderStep::Common(_) => None,
        })
    }

    pub fn region_count(&self) -> usize {
        self.regions().count()
    }

    /// Upper boundary word, letter for letter.
    pub fn top_letters(&self) -> Vec<Letter> {
        let mut out = Vec::new();
        for s in &self.steps {
            match s {
                LadderStep::Common(l) => out.push(*l),
                LadderStep::Region(r) => out.extend_from_slice(r.top.letters()),
            }
        }
        out
    }

    pub fn bottom_letters(&self) -> Vec<Letter> {
        let mut out = Vec::new();
        for s in &self.steps {
            match s {
                LadderStep::Common(l) => out.push(*l),
                LadderStep::Region(r) => out.extend_from_slice(r.bottom.letters()),
            }
        }
        out
    }

    /// Structural check: boundaries, cell labels, shared sides and the
    /// length bounds on every segment.
    pub fn verify(
        &self,
        top: &[Letter],
        bottom: &[Letter],
        p: &Presentation,
        lambda: Rational,
    ) -> bool {
        if self.top_letters() != top || self.bottom_letters() != bottom {
            return false;
        }
        let mut side = Word::empty();
        for s in &self.steps {
            match s {
                LadderStep::Common(_) => {
                    if !side.is_empty() {
                        return false;
                    }
                }
                LadderStep::Region(r) => {
                    let Some(rel) = p.relators.get(r.occurrence.relator) else {
                        return false;
                    };
                    let n = rel.len();
                    let boundary: Vec<Letter> = r
                        .top
                        .letters()
                        .iter()
                        .chain(r.right.letters())
                        .chain(r.bottom.inverse().letters())
                        .chain(r.left.inverse().letters())
                        .copied()
                        .collect();
                    let s_idx = 2 * r.occurrence.relator + r.occurrence.inverse as usize;
                    let expected = p.index.segment(s_idx, r.occurrence.offset, n);
                    if r.left != side
                        || boundary != expected
                        || !below_lambda(r.left.len(), n, lambda)
                        || !below_lambda(r.right.len(), n, lambda)
                    {
                        return false;
                    }
                    for seg in [r.top.len(), r.bottom.len()] {
                        if seg < ceil_lambda(n, lambda) || seg > floor_complement(n, lambda) {
                            return false;
                        }
                    }
                    side = r.right.clone();
                }
            }
        }
        side.is_empty()
    }
}

/// Something that can be read along as the upper boundary of a ladder.
pub trait TopTrack {
    type State: Ord + Clone;
    fn start(&self) -> Self::State;
    fn step(&self, s: &Self::State, l: Letter) -> Option<Self::State>;
    fn accepts(&self, s: &Self::State) -> bool;
}

/// A fixed word as the upper boundary.
pub struct WordTrack<'a>(pub &'a [Letter]);

impl TopTrack for WordTrack<'_> {
    type State = usize;

    fn start(&self) -> usize {
        0
    }

    fn step(&self, &i: &usize, l: Letter) -> Option<usize> {
        (self.0.get(i) == Some(&l)).then_some(i + 1)
    }

    fn accepts(&self, &i: &usize) -> bool {
        i == self.0.len()
    }
}

type Key<S> = (S, usize, Vec<Letter>);

/// Exact search over ladder diagrams between a top track and a bottom word.
///
/// A state is (top position, bottom position, current shared side). Every
/// step advances the bottom position, so the state space is finite.
/// `node_cap` bounds the number of expanded states (`None` when exhausted).
pub fn ladder_search<T: TopTrack>(
    top: &T,
    bottom: &[Letter],
    p: &Presentation,
    lambda: Rational,
    node_cap: Option<usize>,
) -> Option<Option<LadderDiagram>> {
    let idx = &p.index;
    let start: Key<T::State> = (top.start(), 0, Vec::new());
    type Parents<S> = BTreeMap<Key<S>, Option<(Key<S>, LadderStep)>>;
    let mut parent: Parents<T::State> = BTreeMap::new();
    parent.insert(start.clone(), None);
    let mut stack = alloc::vec![start];
    let mut expanded = 0usize;
    while let Some(key) = stack.pop() {
        let (state, j, gamma) = key.clone();
        if j == bottom.len() && gamma.is_empty() && top.accepts(&state) {
            let mut steps = Vec::new();
            let mut cur = key;
            while let Some(Some((prev, step))) = parent.get(&cur).cloned() {
                steps.push(step);
                cur = prev;
            }
            steps.reverse();
            return Some(Some(LadderDiagram { steps }));
        }
        expanded += 1;
        if node_cap.is_some_and(|cap| expanded > cap) {
            return None;
        }
        let mut push = |next: Key<T::State>, step: LadderStep, stack: &mut Vec<Key<T::State>>| {
            if !parent.contains_key(&next) {
                parent.insert(next.clone(), Some((key.clone(), step)));
                stack.push(next);
            }
        };
        if gamma.is_empty() && j < bottom.len() {
            if let Some(next) = top.step(&state, bottom[j]) {
                push(
                    (next, j + 1, Vec::new()),
                    LadderStep::Common(bottom[j]),
                    &mut stack,
                );
            }
        }
        let g = gamma.len();
        let gamma_inv: Vec<Letter> = gamma.iter().rev().map(|l| l.inverse()).collect();
        for s in 0..idx.string_count() {
            let n = idx.string_len(s);
            if !below_lambda(g, n, lambda) {
                continue;
            }
            let (amin, amax) = (ceil_lambda(n, lambda).max(1), floor_complement(n, lambda));
            let Some(gmax) = max_piece_below(n, lambda) else {
                continue;
            };
            if amin > amax {
                continue;
            }
            for p0 in 0..n {
                // the left side γ is read upwards just before the top segment
                if (0..g).any(|i| idx.at(s, p0 + n - g + i) != gamma_inv[i]) {
                    continue;
                }
                let mut cur = state.clone();
                for a in 1..=amax.min(n - g) {
                    match top.step(&cur, idx.at(s, p0 + a - 1)) {
                        Some(nx) => cur = nx,
                        None => break,
                    }
                    if a < amin {
                        continue;
                    }
                    for g2 in 0..=gmax {
                        let Some(b) = n.checked_sub(a + g2 + g) else {
                            break;
                        };
                        if b < amin || b > amax || j + b > bottom.len() {
                            continue;
                        }
                        let from = p0 + a + g2;
                        let fits =
                            (0..b).all(|k| bottom[j + k] == idx.at(s, from + b - 1 - k).inverse());
                        if !fits {
                            continue;
                        }
                        let right = idx.segment(s, p0 + a, g2);
                        let region = LadderRegion {
                            occurrence: idx.occurrence(s, p0),
                            top: Word::reduce_from(idx.segment(s, p0, a)),
                            right: Word::reduce_from(right.iter().copied()),
                            bottom: Word::reduce_from(bottom[j..j + b].iter().copied()),
                            left: Word::reduce_from(gamma.iter().copied()),
                        };
                        push(
                            (cur.clone(), j + b, right),
                            LadderStep::Region(region),
                            &mut stack,
                        );
                    }
                }
            }
        }
    }
    Some(None)
}

/// Decides `w1 =_G w2` for λ-reduced words via ladder diagrams.
pub fn equal_lambda_reduced(
    w1: &Word,
    w2: &Word,
    p: &Presentation,
    lambda: Rational,
) -> Result<Option<LadderDiagram>> {
    check_small_lambda(lambda)?;
    require_c_prime(p, lambda)?;
    for w in [w1, w2] {
        if !lambda_reduced_unchecked(w, p, lambda).reduced {
            return Err(Error::NotLambdaReduced(w.to_string()));
        }
    }
    Ok(ladder_search(&WordTrack(w1.letters()), w2.letters(), p, lambda, None).flatten())
}

/// Distinct relator fragments of `w` (used by tests and reports).
pub fn fragments(w: &Word, p: &Presentation) -> BTreeSet<(usize, usize)> {
    let idx = &p.index;
    let l = w.letters();
    let mut out = BTreeSet::new();
    for start in 0..l.len() {
        for &(s, off) in idx.starting_with(l[start]) {
            out.insert((start, idx.match_len(s, off, &l[start..])));
        }
    }
    out
}
