//! Mixed moments of free random variables from their marginal moment sequences.
//!
//! `τ(T_{i_1} ⋯ T_{i_n})` is the sum, over non-crossing partitions of the letters whose blocks
//! are monochromatic in the variable index, of the product of the block free cumulants.
//! The sum is organized by the block containing the leftmost letter: the gaps between that
//! block's consecutive elements are independent sub-intervals, so the partition tree is walked
//! with interval memoization instead of being materialized.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::measures::MomentSequence;
use crate::nc::enumerate_nc;
use crate::rational::{self, Rational};
use crate::transforms::{free_from_moments, FreeCumulants};

/// A noncommutative monomial in `T_1, T_2, …`, stored letter by letter (exponent one each).
/// Variable indices are zero-based internally and one-based in text.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word {
    letters: Vec<usize>,
}

impl Word {
    pub fn new(letters: Vec<usize>) -> Result<Self> {
        if letters.is_empty() {
            return Err(Error::Domain("word must have at least one letter".into()));
        }
        Ok(Self { letters })
    }

    /// `T_{k_1}^{n_1} ⋯ T_{k_s}^{n_s}` from `(k, n)` pairs (zero-based `k`).
    pub fn from_powers(powers: &[(usize, usize)]) -> Result<Self> {
        Self::new(powers.iter().flat_map(|&(k, n)| std::iter::repeat_n(k, n)).collect())
    }

    /// `(T_a T_b)^k`.
    pub fn alternating_pair(a: usize, b: usize, k: usize) -> Result<Self> {
        Self::new((0..k).flat_map(|_| [a, b]).collect())
    }

    pub fn letters(&self) -> &[usize] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn variable_count(&self) -> usize {
        self.letters.iter().max().map_or(0, |m| m + 1)
    }

    /// Multiplicity of each variable index.
    pub fn multiplicities(&self) -> Vec<usize> {
        let mut counts = vec![0; self.variable_count()];
        for &l in &self.letters {
            counts[l] += 1;
        }
        counts
    }

    /// Cyclic shift by `k` letters.
    pub fn rotate(&self, k: usize) -> Self {
        let mut letters = self.letters.clone();
        letters.rotate_left(k % self.len().max(1));
        Self { letters }
    }

    /// Run-length form `[(k, n), …]`.
    pub fn powers(&self) -> Vec<(usize, usize)> {
        let mut out: Vec<(usize, usize)> = Vec::new();
        for &l in &self.letters {
            match out.last_mut() {
                Some((k, n)) if *k == l => *n += 1,
                _ => out.push((l, 1)),
            }
        }
        out
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .powers()
            .into_iter()
            .map(|(k, n)| if n == 1 { format!("T{}", k + 1) } else { format!("T{}^{}", k + 1, n) })
            .collect();
        f.write_str(&parts.join(" "))
    }
}

impl FromStr for Word {
    type Err = Error;

    /// Parses `"T1^2 T2 T1 T3^3"`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = |tok: &str| Error::Parse(format!("invalid word token {tok:?}"));
        let mut powers = Vec::new();
        for tok in s.split_whitespace() {
            let body = tok.strip_prefix('T').ok_or_else(|| bad(tok))?;
            let (idx, exp) = match body.split_once('^') {
                Some((i, e)) => (i, e.parse::<usize>().map_err(|_| bad(tok))?),
                None => (body, 1),
            };
            let idx: usize = idx.parse().map_err(|_| bad(tok))?;
            if idx == 0 || exp == 0 {
                return Err(bad(tok));
            }
            powers.push((idx - 1, exp));
        }
        Self::from_powers(&powers).map_err(|_| Error::Parse("empty word".into()))
    }
}

/// One factor `T_var^power + shift · 1` of a product evaluated by [`FreeFamily::evaluate`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factor {
    pub var: usize,
    pub power: usize,
    pub shift: Rational,
}

impl Factor {
    pub fn power(var: usize, power: usize) -> Self {
        Self { var, power, shift: Rational::zero() }
    }
}

/// A family of mutually free variables, described by their marginal moment sequences.
#[derive(Debug, Clone)]
pub struct FreeFamily {
    marginals: Vec<MomentSequence>,
    cumulants: Vec<FreeCumulants>,
}

impl FreeFamily {
    pub fn new(marginals: Vec<MomentSequence>) -> Self {
        let cumulants = marginals.iter().map(free_from_moments).collect();
        Self { marginals, cumulants }
    }

    pub fn len(&self) -> usize {
        self.marginals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.marginals.is_empty()
    }

    pub fn marginal(&self, var: usize) -> &MomentSequence {
        &self.marginals[var]
    }

    /// `τ(w)`.
    pub fn mixed_moment(&self, w: &Word) -> Result<Rational> {
        let factors: Vec<Factor> = w.powers().into_iter().map(|(k, n)| Factor::power(k, n)).collect();
        self.evaluate(&factors)
    }

    /// `τ(Π_l (T_{var_l}^{power_l} + shift_l))`.
    ///
    /// Expanding the shifts is folded into the partition sum: a factor with a nonzero shift may
    /// be dropped as a whole (contributing `shift`) whenever it lies entirely inside the
    /// interval being summed.
    pub fn evaluate(&self, factors: &[Factor]) -> Result<Rational> {
        let mut colors = Vec::new();
        let mut owner = Vec::new();
        let mut spans = Vec::with_capacity(factors.len());
        let mut multiplicity = vec![0usize; self.len()];
        // T^0 + shift is a scalar.
        let scalar =
            factors.iter().filter(|f| f.power == 0).fold(Rational::one(), |acc, f| acc * (Rational::one() + &f.shift));
        let factors: Vec<Factor> = factors.iter().filter(|f| f.power > 0).cloned().collect();
        for (l, f) in factors.iter().enumerate() {
            if f.var >= self.len() {
                return Err(Error::Domain(format!(
                    "word uses T{} but only {} marginals were given",
                    f.var + 1,
                    self.len()
                )));
            }
            let start = colors.len();
            for _ in 0..f.power {
                colors.push(f.var);
                owner.push(l);
            }
            spans.push((start, colors.len()));
            multiplicity[f.var] += f.power;
        }
        for (var, &needed) in multiplicity.iter().enumerate() {
            self.marginals[var].require_order(needed)?;
        }
        if colors.is_empty() {
            return Ok(scalar);
        }
        let max_block = multiplicity.iter().copied().max().unwrap_or(0);
        let mut sum = IntervalSum {
            colors: &colors,
            owner: &owner,
            spans: &spans,
            factors: &factors,
            cumulants: &self.cumulants,
            n: colors.len(),
            max_block,
            gap: vec![None; (colors.len() + 1) * (colors.len() + 1)],
            chain: HashMap::new(),
        };
        Ok(scalar * sum.interval(0, colors.len()))
    }
}

/// Memoized block-monochromatic NC sum over intervals of the flattened word.
struct IntervalSum<'a> {
    colors: &'a [usize],
    owner: &'a [usize],
    spans: &'a [(usize, usize)],
    factors: &'a [Factor],
    cumulants: &'a [FreeCumulants],
    n: usize,
    max_block: usize,
    gap: Vec<Option<Rational>>,
    chain: HashMap<(usize, usize, usize), Rational>,
}

impl IntervalSum<'_> {
    /// Sum over positions `i..j`.
    fn interval(&mut self, i: usize, j: usize) -> Rational {
        if i >= j {
            return Rational::one();
        }
        let key = i * (self.n + 1) + j;
        if let Some(v) = &self.gap[key] {
            return v.clone();
        }
        let mut total = Rational::zero();
        let l = self.owner[i];
        let (start, end) = self.spans[l];
        let shift = &self.factors[l].shift;
        if start == i && end <= j && !shift.is_zero() {
            total += shift * self.interval(end, j);
        }
        total += self.block_from(i, j, 1);
        self.gap[key] = Some(total.clone());
        total
    }

    /// Position `a` is the `s`-th element of the current block; the block's remaining elements
    /// and everything after `a` lie in `a+1..j`.
    fn block_from(&mut self, a: usize, j: usize, s: usize) -> Rational {
        if let Some(v) = self.chain.get(&(a, j, s)) {
            return v.clone();
        }
        let color = self.colors[a];
        let kappa = self.cumulants[color].get(s).clone();
        let mut total = if kappa.is_zero() { Rational::zero() } else { kappa * self.interval(a + 1, j) };
        if s < self.max_block {
            for b in a + 1..j {
                if self.colors[b] != color {
                    continue;
                }
                let left = self.interval(a + 1, b);
                if left.is_zero() {
                    continue;
                }
                let right = self.block_from(b, j, s + 1);
                total += left * right;
            }
        }
        self.chain.insert((a, j, s), total.clone());
        total
    }
}

/// `τ(w)` for free variables with the given marginals.
pub fn mixed_moment(marginals: &[MomentSequence], w: &Word) -> Result<Rational> {
    if w.variable_count() > marginals.len() {
        return Err(Error::Domain(format!(
            "word uses {} variables but only {} marginals were given",
            w.variable_count(),
            marginals.len()
        )));
    }
    FreeFamily::new(marginals.to_vec()).mixed_moment(w)
}

/// Reference evaluation of `τ(w)` by explicit enumeration of `NC(|w|)`; `|w| ≤ 14`.
pub fn mixed_moment_bruteforce(marginals: &[MomentSequence], w: &Word) -> Result<Rational> {
    let kappas: Vec<FreeCumulants> = marginals.iter().map(free_from_moments).collect();
    for (var, &m) in w.multiplicities().iter().enumerate() {
        marginals
            .get(var)
            .ok_or_else(|| Error::Domain("word uses more variables than marginals".into()))?
            .require_order(m)?;
    }
    let letters = w.letters();
    let mut total = Rational::zero();
    for p in enumerate_nc(letters.len())? {
        let blocks = p.blocks();
        if blocks.iter().any(|b| b.iter().any(|&i| letters[i] != letters[b[0]])) {
            continue;
        }
        let term = blocks.iter().fold(Rational::one(), |acc, b| acc * kappas[letters[b[0]]].get(b.len()));
        total += term;
    }
    Ok(total)
}

/// How exponents are attached to the letters of an alternating index word.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ExponentScheme {
    /// Every letter gets the same exponent.
    Fixed(usize),
    /// Letter `l` gets `choices[(l + shift) % len]`, for every shift.
    Cyclic(Vec<usize>),
    /// Every assignment of `choices` to the letters.
    Exhaustive(Vec<usize>),
}

impl ExponentScheme {
    fn assignments(&self, n: usize) -> Vec<Vec<usize>> {
        match self {
            ExponentScheme::Fixed(p) => vec![vec![*p; n]],
            ExponentScheme::Cyclic(c) => {
                let mut out: Vec<Vec<usize>> =
                    (0..c.len()).map(|shift| (0..n).map(|l| c[(l + shift) % c.len()]).collect()).collect();
                out.sort();
                out.dedup();
                out
            }
            ExponentScheme::Exhaustive(c) => {
                let mut out = vec![Vec::new()];
                for _ in 0..n {
                    out = out
                        .into_iter()
                        .flat_map(|prefix: Vec<usize>| {
                            c.iter().map(move |&p| {
                                let mut v = prefix.clone();
                                v.push(p);
                                v
                            })
                        })
                        .collect();
                }
                out
            }
        }
    }

    fn max_exponent(&self) -> usize {
        match self {
            ExponentScheme::Fixed(p) => *p,
            ExponentScheme::Cyclic(c) | ExponentScheme::Exhaustive(c) => c.iter().copied().max().unwrap_or(1),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckedWord {
    /// One-based variable indices, consecutive entries distinct.
    pub indices: Vec<usize>,
    pub exponents: Vec<usize>,
    #[serde(with = "rational::serde_rational")]
    pub value: Rational,
}

impl CheckedWord {
    /// `"(T1^2 - m) (T2 - m) …"`-style label.
    pub fn label(&self) -> String {
        self.indices
            .iter()
            .zip(&self.exponents)
            .map(|(k, p)| if *p == 1 { format!("(T{k})°") } else { format!("(T{k}^{p})°") })
            .collect::<Vec<_>>()
            .join(" ")
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VanishingReport {
    pub max_len: usize,
    pub words: Vec<CheckedWord>,
}

impl VanishingReport {
    pub fn all_zero(&self) -> bool {
        self.words.iter().all(|w| w.value.is_zero())
    }

    pub fn nonzero(&self) -> impl Iterator<Item = &CheckedWord> {
        self.words.iter().filter(|w| !w.value.is_zero())
    }
}

/// Alternating index sequences `j_1 ≠ j_2 ≠ … ≠ j_n` over `vars` variables, `2 ≤ n ≤ max_len`.
pub fn alternating_index_words(vars: usize, max_len: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut frontier: Vec<Vec<usize>> = (0..vars).map(|v| vec![v]).collect();
    for _ in 2..=max_len {
        frontier = frontier
            .into_iter()
            .flat_map(|w| {
                let last = *w.last().unwrap();
                (0..vars).filter(move |&v| v != last).map(move |v| {
                    let mut next = w.clone();
                    next.push(v);
                    next
                })
            })
            .collect();
        out.extend(frontier.iter().cloned());
    }
    out
}

/// Evaluates `τ(Π_l (T_{j_l}^{p_l} − m_{p_l}(T_{j_l})))` exactly for every alternating index
/// word of length `2..=max_len` and every exponent assignment of `scheme`.
pub fn alternating_centered_check(
    marginals: &[MomentSequence],
    max_len: usize,
    scheme: &ExponentScheme,
) -> Result<VanishingReport> {
    let family = FreeFamily::new(marginals.to_vec());
    let needed = max_len.div_ceil(2) * scheme.max_exponent();
    for m in marginals {
        m.require_order(needed)?;
    }
    let mut words = Vec::new();
    for indices in alternating_index_words(marginals.len(), max_len) {
        for exponents in scheme.assignments(indices.len()) {
            let factors: Vec<Factor> = indices
                .iter()
                .zip(&exponents)
                .map(|(&var, &p)| Factor { var, power: p, shift: -family.marginal(var).moment(p) })
                .collect();
            let value = family.evaluate(&factors)?;
            words.push(CheckedWord { indices: indices.iter().map(|v| v + 1).collect(), exponents, value });
        }
    }
    Ok(VanishingReport { max_len, words })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    fn seq(v: &[Rational]) -> MomentSequence {
        MomentSequence::new(v.to_vec()).unwrap()
    }

    fn bernoulli(order: usize) -> MomentSequence {
        seq(&vec![ratio(1, 2); order])
    }

    fn semicircle() -> MomentSequence {
        seq(&[int(0), int(1), int(0), int(2), int(0), int(5), int(0), int(14)])
    }

    #[test]
    fn word_text_format() {
        let w: Word = "T1^2 T2 T1 T3^3".parse().unwrap();
        assert_eq!(w.letters(), &[0, 0, 1, 0, 2, 2, 2]);
        assert_eq!(w.to_string(), "T1^2 T2 T1 T3^3");
        assert!("T0".parse::<Word>().is_err());
        assert!("X1".parse::<Word>().is_err());
        assert!("".parse::<Word>().is_err());
        assert!("T1^0".parse::<Word>().is_err());
    }

    #[test]
    fn product_of_means() {
        let a = seq(&[ratio(2, 3)]);
        let b = seq(&[ratio(-5, 7)]);
        let w: Word = "T1 T2".parse().unwrap();
        assert_eq!(mixed_moment(&[a, b], &w).unwrap(), ratio(-10, 21));
    }

    #[test]
    fn bernoulli_abab() {
        let w: Word = "T1 T2 T1 T2".parse().unwrap();
        let m = [bernoulli(2), bernoulli(2)];
        assert_eq!(mixed_moment(&m, &w).unwrap(), ratio(3, 16));
        assert_eq!(mixed_moment_bruteforce(&m, &w).unwrap(), ratio(3, 16));
    }

    #[test]
    fn centered_abab_vanishes() {
        let w: Word = "T1 T2 T1 T2".parse().unwrap();
        assert_eq!(mixed_moment(&[semicircle(), semicircle()], &w).unwrap(), int(0));
    }

    #[test]
    fn single_variable_recovers_marginal() {
        let m = seq(&[ratio(1, 3), ratio(2, 5), int(1), ratio(-7, 2), int(4), ratio(9, 4)]);
        for k in 1..=6 {
            let w = Word::from_powers(&[(0, k)]).unwrap();
            assert_eq!(mixed_moment(std::slice::from_ref(&m), &w).unwrap(), m.moment(k));
        }
    }

    #[test]
    fn order_shortfall_is_an_error() {
        let w: Word = "T1^3 T2".parse().unwrap();
        let r = mixed_moment(&[bernoulli(2), bernoulli(2)], &w);
        assert!(matches!(r, Err(Error::InsufficientOrder { needed: 3, available: 2 })));
        assert!(mixed_moment(&[bernoulli(2)], &w).is_err());
    }

    #[test]
    fn shifted_factors_match_expansion() {
        // τ((A − 1/2)(B − 1/2)) = τ(AB) − τ(A)/2 − τ(B)/2 + 1/4 = 0 for free A, B of mean 1/2.
        let fam = FreeFamily::new(vec![bernoulli(4), bernoulli(4)]);
        let f = |var, power, shift| Factor { var, power, shift };
        assert_eq!(fam.evaluate(&[f(0, 1, ratio(-1, 2)), f(1, 1, ratio(-1, 2))]).unwrap(), int(0));
        // Non-alternating: τ((A − 1/2)(A − 1/2)) = var(A) = 1/4.
        assert_eq!(fam.evaluate(&[f(0, 1, ratio(-1, 2)), f(0, 1, ratio(-1, 2))]).unwrap(), ratio(1, 4));
        // Constant-only factors.
        assert_eq!(fam.evaluate(&[f(0, 0, int(2))]).unwrap(), int(3));
        assert_eq!(fam.evaluate(&[f(1, 0, int(1)), f(0, 2, int(0))]).unwrap(), int(1));
    }

    #[test]
    fn alternating_checks_vanish() {
        let m = [semicircle(), bernoulli(8)];
        assert!(alternating_centered_check(&m, 4, &ExponentScheme::Fixed(1)).unwrap().all_zero());
        assert!(alternating_centered_check(&m, 4, &ExponentScheme::Fixed(2)).unwrap().all_zero());
        let m3 = [semicircle(), bernoulli(8), seq(&[int(1), int(3), int(2), int(9), int(5), int(30)])];
        let rep = alternating_centered_check(&m3, 5, &ExponentScheme::Exhaustive(vec![1, 2])).unwrap();
        assert!(rep.all_zero());
        assert_eq!(rep.words.len(), (3 * 2 * 4 + 3 * 4 * 8 + 3 * 8 * 16 + 3 * 16 * 32) as usize);
    }

    #[test]
    fn index_word_count() {
        // 3 · 2^{n−1} alternating words of each length n.
        assert_eq!(alternating_index_words(3, 4).len(), 6 + 12 + 24);
    }
}
