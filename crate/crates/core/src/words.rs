//! Free-group words over `A = {a_1, …, a_m}`.
//!
//! Text format: generators are `a..z`, their inverses `A..Z`, the identity is
//! the empty string. Whitespace between letters is ignored when parsing.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigUint;
use rand::Rng;

use crate::{Error, Result};

/// Largest supported rank (one lowercase letter per generator).
pub const MAX_RANK: usize = 26;

/// A signed generator `a_i^{±1}`.
///
/// Encoded as `2 * i + inv`, so the natural order is `a < A < b < B < …`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Letter(u8);

impl Letter {
    /// `gen` is 0-based.
    pub fn new(gen: usize, inverse: bool) -> Letter {
        debug_assert!(gen < MAX_RANK);
        Letter((2 * gen + inverse as usize) as u8)
    }

    pub fn from_code(code: usize) -> Letter {
        Letter(code as u8)
    }

    /// Position in the order `a, A, b, B, …`; ranges over `0..2m`.
    pub fn code(self) -> usize {
        self.0 as usize
    }

    pub fn generator(self) -> usize {
        (self.0 >> 1) as usize
    }

    pub fn is_inverse(self) -> bool {
        self.0 & 1 == 1
    }

    pub fn inverse(self) -> Letter {
        Letter(self.0 ^ 1)
    }

    pub fn to_char(self) -> char {
        let c = (b'a' + self.generator() as u8) as char;
        if self.is_inverse() {
            c.to_ascii_uppercase()
        } else {
            c
        }
    }

    pub fn from_char(c: char) -> Result<Letter> {
        match c {
            'a'..='z' => Ok(Letter::new(c as usize - 'a' as usize, false)),
            'A'..='Z' => Ok(Letter::new(c as usize - 'A' as usize, true)),
            _ => Err(Error::BadChar(c)),
        }
    }
}

impl fmt::Debug for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_char())
    }
}

/// A freely reduced word. The empty word is the identity.
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word(Vec<Letter>);

pub fn check_rank(m: usize) -> Result<()> {
    if (2..=MAX_RANK).contains(&m) {
        Ok(())
    } else {
        Err(Error::BadRank(m))
    }
}

/// Freely reduces a letter sequence, rejecting letters outside rank `m`.
pub fn free_reduce(seq: &[Letter], m: usize) -> Result<Word> {
    if let Some(&bad) = seq.iter().find(|l| l.generator() >= m) {
        return Err(Error::LetterOutOfRange {
            letter: bad.to_char(),
            rank: m,
        });
    }
    Ok(Word::reduce_from(seq.iter().copied()))
}

impl Word {
    pub fn empty() -> Word {
        Word(Vec::new())
    }

    /// Stack-based free reduction; never fails.
    pub fn reduce_from(letters: impl IntoIterator<Item = Letter>) -> Word {
        let mut out: Vec<Letter> = Vec::new();
        for l in letters {
            if out.last() == Some(&l.inverse()) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        Word(out)
    }

    /// Parses the text format and freely reduces.
    pub fn parse(s: &str, m: usize) -> Result<Word> {
        let letters = s
            .chars()
            .filter(|c| !c.is_whitespace())
            .map(Letter::from_char)
            .collect::<Result<Vec<_>>>()?;
        free_reduce(&letters, m)
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|l| l.inverse()).collect())
    }

    /// Product in the free group.
    pub fn mul(&self, other: &Word) -> Word {
        Word::reduce_from(self.0.iter().chain(other.0.iter()).copied())
    }

    pub fn pow(&self, e: usize) -> Word {
        Word::reduce_from(core::iter::repeat_n(self.0.iter().copied(), e).flatten())
    }

    /// Subword `[start, end)`.
    pub fn slice(&self, start: usize, end: usize) -> Word {
        Word(self.0[start..end].to_vec())
    }

    /// Largest generator index used plus one (0 for ε).
    pub fn rank_used(&self) -> usize {
        self.0.iter().map(|l| l.generator() + 1).max().unwrap_or(0)
    }

    pub fn is_cyclically_reduced(&self) -> bool {
        match (self.0.first(), self.0.last()) {
            (Some(&f), Some(&l)) => self.0.len() == 1 || f != l.inverse(),
            _ => true,
        }
    }

    /// Left rotation by `k` (only meaningful for cyclically reduced words).
    pub fn rotate(&self, k: usize) -> Word {
        let mut v = self.0.clone();
        if !v.is_empty() {
            let k = k % v.len();
            v.rotate_left(k);
        }
        Word(v)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.0 {
            write!(f, "{}", l.to_char())?;
        }
        Ok(())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "\"{self}\"")
    }
}

/// A cyclically reduced word considered up to rotation.
#[derive(Clone)]
pub struct CyclicWord {
    rep: Word,
}

impl CyclicWord {
    pub fn new(w: Word) -> Result<CyclicWord> {
        if !w.is_cyclically_reduced() {
            return Err(Error::BadRelator(0));
        }
        Ok(CyclicWord { rep: w })
    }

    pub fn representative(&self) -> &Word {
        &self.rep
    }

    pub fn len(&self) -> usize {
        self.rep.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rep.is_empty()
    }

    pub fn inverse(&self) -> CyclicWord {
        CyclicWord {
            rep: self.rep.inverse(),
        }
    }

    /// Letter at cyclic position `i`.
    pub fn at(&self, i: usize) -> Letter {
        self.rep.0[i % self.rep.len()]
    }
}

impl PartialEq for CyclicWord {
    fn eq(&self, other: &Self) -> bool {
        let n = self.len();
        n == other.len()
            && (n == 0 || (0..n).any(|k| (0..n).all(|i| self.at(i + k) == other.at(i))))
    }
}

impl Eq for CyclicWord {}

impl fmt::Display for CyclicWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.rep.fmt(f)
    }
}

impl fmt::Debug for CyclicWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({self})")
    }
}

/// Splits `w = c · core · c⁻¹` with `core` cyclically reduced.
pub fn cyclic_reduce(w: &Word) -> (CyclicWord, Word) {
    let l = w.letters();
    let (mut i, mut j) = (0, l.len());
    while j - i >= 2 && l[i] == l[j - 1].inverse() {
        i += 1;
        j -= 1;
    }
    let core = Word(l[i..j].to_vec());
    (CyclicWord { rep: core }, Word(l[..i].to_vec()))
}

/// Primitive root and exponent when `w` is a proper power.
pub fn is_proper_power(w: &CyclicWord) -> Result<Option<(Word, usize)>> {
    let n = w.len();
    if n == 0 {
        return Err(Error::EmptyWord);
    }
    let l = w.representative().letters();
    // The smallest period dividing n gives the primitive root.
    for p in 1..n {
        if n.is_multiple_of(p) && (p..n).all(|i| l[i] == l[i - p]) {
            return Ok(Some((Word(l[..p].to_vec()), n / p)));
        }
    }
    Ok(None)
}

/// All rotations of `w` and of `w⁻¹`, deduplicated and sorted.
pub fn cyclic_permutations_and_inverses(w: &CyclicWord) -> BTreeSet<Word> {
    let inv = w.representative().inverse();
    (0..w.len())
        .flat_map(|k| [w.representative().rotate(k), inv.rotate(k)])
        .collect()
}

/// Exact number of cyclically reduced words of length `n` over `m` generators.
///
/// Equals the trace of `M^n` for the `2m × 2m` no-backtrack transfer matrix.
/// Computed by a dynamic program over (first letter, last letter) classes.
pub fn count_cyclically_reduced(n: usize, m: usize) -> Result<BigUint> {
    check_rank(m)?;
    if n == 0 {
        return Err(Error::ZeroLength);
    }
    // By symmetry fix the first letter to `a`; track the last letter's class:
    // equal to `a`, equal to `A`, or one of the other 2m-2 letters (per letter).
    let others = BigUint::from(2 * m as u64 - 2);
    let (mut same, mut inv, mut other) = (
        BigUint::from(1u32),
        BigUint::from(0u32),
        BigUint::from(0u32),
    );
    for _ in 1..n {
        let via_others = &other * &others;
        let new_same = &same + &via_others;
        let new_inv = &inv + &via_others;
        // a specific other letter z is reachable from anything except z⁻¹
        let new_other = &same + &inv + &via_others - &other;
        same = new_same;
        inv = new_inv;
        other = new_other;
    }
    // the closing letter may not be A
    let per_first = same + other * others;
    Ok(per_first * BigUint::from(2 * m as u64))
}

/// Same count as a `u128`, erroring on overflow.
pub fn count_cyclically_reduced_u128(n: usize, m: usize) -> Result<u128> {
    u128::try_from(count_cyclically_reduced(n, m)?).map_err(|_| Error::Overflow)
}

fn random_letter<R: Rng + ?Sized>(rng: &mut R, m: usize) -> Letter {
    Letter::from_code(rng.gen_range(0..2 * m))
}

/// Uniform cyclically reduced word of length exactly `n`.
///
/// Forward no-backtrack walk with rejection on the closing letter.
pub fn sample_cyclically_reduced<R: Rng + ?Sized>(
    n: usize,
    m: usize,
    rng: &mut R,
) -> Result<CyclicWord> {
    check_rank(m)?;
    if n == 0 {
        return Err(Error::ZeroLength);
    }
    loop {
        let mut v = Vec::with_capacity(n);
        v.push(random_letter(rng, m));
        while v.len() < n {
            // uniform over the 2m-1 letters that do not backtrack
            let prev = *v.last().unwrap();
            let mut c = rng.gen_range(0..2 * m - 1);
            if c >= prev.inverse().code() {
                c += 1;
            }
            v.push(Letter::from_code(c));
        }
        if n == 1 || v[0] != v[n - 1].inverse() {
            return Ok(CyclicWord { rep: Word(v) });
        }
    }
}

/// Uniform cyclically reduced word of length at most `n`.
///
/// The length is drawn with probability proportional to the exact counts.
pub fn sample_cyclically_reduced_at_most<R: Rng + ?Sized>(
    n: usize,
    m: usize,
    rng: &mut R,
) -> Result<CyclicWord> {
    check_rank(m)?;
    if n == 0 {
        return Err(Error::ZeroLength);
    }
    let weights = (1..=n)
        .map(|l| count_cyclically_reduced_u128(l, m))
        .collect::<Result<Vec<_>>>()?;
    let total = weights
        .iter()
        .try_fold(0u128, |a, &w| a.checked_add(w))
        .ok_or(Error::Overflow)?;
    let mut x = rng.gen_range(0..total);
    let mut len = n;
    for (i, &w) in weights.iter().enumerate() {
        if x < w {
            len = i + 1;
            break;
        }
        x -= w;
    }
    sample_cyclically_reduced(len, m, rng)
}

/// Uniform freely reduced word of length exactly `n` (`n` may be 0).
pub fn sample_reduced<R: Rng + ?Sized>(n: usize, m: usize, rng: &mut R) -> Word {
    let mut v: Vec<Letter> = Vec::with_capacity(n);
    while v.len() < n {
        let l = random_letter(rng, m);
        if v.last() != Some(&l.inverse()) {
            v.push(l);
        }
    }
    Word(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::stream;
    use alloc::collections::BTreeMap;
    use alloc::string::ToString;
    use proptest::prelude::*;
    use rand::Rng;

    fn w(s: &str) -> Word {
        Word::parse(s, 4).unwrap()
    }

    fn cyc(s: &str) -> CyclicWord {
        CyclicWord::new(w(s)).unwrap()
    }

    /// Every freely reduced word of length `n` over rank `m`.
    fn all_reduced(n: usize, m: usize) -> Vec<Word> {
        let mut out = vec![Word::empty()];
        for _ in 0..n {
            out = out
                .into_iter()
                .flat_map(|v| {
                    (0..2 * m).filter_map(move |c| {
                        let l = Letter::from_code(c);
                        (v.letters().last() != Some(&l.inverse())).then(|| {
                            let mut x = v.letters().to_vec();
                            x.push(l);
                            Word(x)
                        })
                    })
                })
                .collect();
        }
        out
    }

    #[test]
    fn free_reduce_examples() {
        assert_eq!(w("aAb").to_string(), "b");
        assert_eq!(w(""), Word::empty());
        assert_eq!(w("abBA"), Word::empty());
        assert!(matches!(
            Word::parse("ac", 2),
            Err(Error::LetterOutOfRange { letter: 'c', .. })
        ));
        assert!(matches!(Word::parse("a1", 2), Err(Error::BadChar('1'))));
    }

    #[test]
    fn cyclic_reduce_examples() {
        let (core, c) = cyclic_reduce(&w("baB"));
        assert_eq!((core.to_string(), c.to_string()), ("a".into(), "b".into()));
        let (core, c) = cyclic_reduce(&w("ab"));
        assert_eq!((core.to_string(), c.to_string()), ("ab".into(), "".into()));
        let (core, c) = cyclic_reduce(&w("abA"));
        assert_eq!((core.to_string(), c.to_string()), ("b".into(), "a".into()));
    }

    #[test]
    fn proper_power_examples() {
        assert_eq!(is_proper_power(&cyc("abab")).unwrap(), Some((w("ab"), 2)));
        assert_eq!(is_proper_power(&cyc("ab")).unwrap(), None);
        assert_eq!(is_proper_power(&cyc("aaa")).unwrap(), Some((w("a"), 3)));
        assert_eq!(is_proper_power(&cyc("")), Err(Error::EmptyWord));
    }

    #[test]
    fn proper_power_matches_divisor_rotation_oracle() {
        for n in 1..=12 {
            for v in all_reduced(n, 2)
                .into_iter()
                .filter(|v| v.is_cyclically_reduced())
            {
                // oracle: some divisor d < n with v = (v[..d])^(n/d) letterwise
                let oracle = (1..n)
                    .filter(|d| n % d == 0)
                    .find(|&d| v.slice(0, d).pow(n / d) == v);
                let got = is_proper_power(&CyclicWord::new(v.clone()).unwrap()).unwrap();
                assert_eq!(got.map(|(r, _)| r.len()), oracle, "{v}");
            }
        }
    }

    #[test]
    fn rotations_and_inverses() {
        let names = |s: &str| {
            cyclic_permutations_and_inverses(&cyc(s))
                .into_iter()
                .map(|x| x.to_string())
                .collect::<BTreeSet<_>>()
        };
        assert_eq!(
            names("ab"),
            ["ab", "ba", "BA", "AB"]
                .iter()
                .map(|s| s.to_string())
                .collect()
        );
        assert_eq!(
            names("a"),
            ["a", "A"].iter().map(|s| s.to_string()).collect()
        );
        assert_eq!(names("abAB").len(), 8);
    }

    #[test]
    fn counts_match_enumeration() {
        assert_eq!(count_cyclically_reduced_u128(1, 2).unwrap(), 4);
        assert_eq!(count_cyclically_reduced_u128(2, 2).unwrap(), 12);
        // exhaustive enumeration of the 36 reduced triples leaves 28
        assert_eq!(count_cyclically_reduced_u128(3, 2).unwrap(), 28);
        for m in 2..=3 {
            for n in 1..=6 {
                let brute = all_reduced(n, m)
                    .iter()
                    .filter(|v| v.is_cyclically_reduced())
                    .count() as u128;
                let exact = count_cyclically_reduced_u128(n, m).unwrap();
                assert_eq!(exact, brute, "n={n} m={m}");
                assert!(exact <= 2 * m as u128 * (2 * m as u128 - 1).pow(n as u32 - 1));
            }
        }
        assert_eq!(count_cyclically_reduced(0, 2), Err(Error::ZeroLength));
        assert!(count_cyclically_reduced_u128(200, 2).is_err());
    }

    fn chi_square(counts: &BTreeMap<Word, usize>, cells: usize, draws: usize) -> f64 {
        let expected = draws as f64 / cells as f64;
        let mut chi = (cells - counts.len()) as f64 * expected;
        for &c in counts.values() {
            chi += (c as f64 - expected).powi(2) / expected;
        }
        chi
    }

    #[test]
    fn sampler_is_uniform() {
        // 99.9% chi-square quantiles for 3, 11 and 27 degrees of freedom
        for (n, cells, limit) in [(1, 4, 16.27), (2, 12, 31.26), (3, 28, 55.48)] {
            let mut rng = stream(11, &[n as u64]);
            let draws = 10_000;
            let mut counts = BTreeMap::new();
            for _ in 0..draws {
                let c = sample_cyclically_reduced(n, 2, &mut rng).unwrap();
                assert!(c.representative().is_cyclically_reduced());
                *counts.entry(c.representative().clone()).or_insert(0) += 1;
            }
            assert_eq!(counts.len(), cells);
            assert!(chi_square(&counts, cells, draws) < limit, "n={n}");
        }
    }

    #[test]
    fn at_most_sampler_length_distribution() {
        let mut rng = stream(5, &[]);
        let draws = 16_000;
        let ones = (0..draws)
            .filter(|_| {
                sample_cyclically_reduced_at_most(2, 2, &mut rng)
                    .unwrap()
                    .len()
                    == 1
            })
            .count();
        // expected 4/16 of draws; 3σ ≈ 164
        assert!((ones as i64 - 4000).abs() < 165, "{ones}");
    }

    #[test]
    fn sampler_is_deterministic() {
        let a = sample_cyclically_reduced(30, 3, &mut stream(9, &[1])).unwrap();
        let b = sample_cyclically_reduced(30, 3, &mut stream(9, &[1])).unwrap();
        assert_eq!(a.representative(), b.representative());
    }

    proptest! {
        #[test]
        fn free_reduce_idempotent(codes in proptest::collection::vec(0usize..4, 0..30)) {
            let seq: Vec<Letter> = codes.into_iter().map(Letter::from_code).collect();
            let once = free_reduce(&seq, 2).unwrap();
            prop_assert!(once.len() <= seq.len());
            prop_assert_eq!(free_reduce(once.letters(), 2).unwrap(), once);
        }

        #[test]
        fn cyclic_reduce_recomposes(seed in 0u64..1000) {
            let mut rng = stream(seed, &[]);
            let v = sample_reduced(rng.gen_range(0..20), 3, &mut rng);
            let (core, c) = cyclic_reduce(&v);
            prop_assert!(core.representative().is_cyclically_reduced());
            prop_assert_eq!(c.mul(core.representative()).mul(&c.inverse()), v);
        }
    }
}
