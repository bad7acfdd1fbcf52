//! Two-qubit gate traces.
//!
//! A circuit's two-qubit gates become a string of integer symbols, one per
//! gate, `control * width + target`. On that string we count pair usage and
//! look for the longest substring that repeats without overlapping itself.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::circuit::Circuit;

pub type Symbol = u32;

/// Largest device width whose squared alphabet still fits a [`Symbol`].
pub const MAX_WIDTH: usize = 1 << 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TraceError {
    #[error("pair ({control}, {target}) does not fit width {width}")]
    PairOutOfRange {
        control: usize,
        target: usize,
        width: usize,
    },
    #[error("pair ({0}, {0}) has identical operands")]
    SelfPair(usize),
    #[error("width {0} is too large to encode")]
    WidthTooLarge(usize),
    #[error("invalid substring match: {0}")]
    InvalidMatch(String),
}

/// Ordered operand pair of a two-qubit gate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QubitPair {
    pub control: usize,
    pub target: usize,
}

impl QubitPair {
    pub fn new(control: usize, target: usize) -> Self {
        Self { control, target }
    }
}

/// Operand pairs of every two-qubit gate, in gate order, with the index of
/// the originating gate. Measure, reset and barrier never contribute.
pub fn extract_pairs_with_gates(circuit: &Circuit) -> Vec<(usize, QubitPair)> {
    circuit
        .gates
        .iter()
        .zip(circuit.flat_gates())
        .enumerate()
        .filter(|(_, (g, _))| g.is_two_qubit())
        .map(|(k, (_, q))| (k, QubitPair::new(q[0], q[1])))
        .collect()
}

pub fn extract_pairs(circuit: &Circuit) -> Vec<QubitPair> {
    extract_pairs_with_gates(circuit).into_iter().map(|(_, p)| p).collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearizedTrace {
    symbols: Vec<Symbol>,
    width: usize,
    /// For each symbol, the index of the gate it came from.
    pair_positions: Vec<usize>,
}

/// Encodes pairs as `control * width + target`. Positions are the pair
/// indices; use [`linearize_circuit`] to keep gate indices instead.
pub fn linearize(pairs: &[QubitPair], width: usize) -> Result<LinearizedTrace, TraceError> {
    let positions = (0..pairs.len()).collect();
    LinearizedTrace::encode(pairs.iter().copied(), positions, width)
}

pub fn linearize_circuit(circuit: &Circuit, width: usize) -> Result<LinearizedTrace, TraceError> {
    let (positions, pairs): (Vec<_>, Vec<_>) = extract_pairs_with_gates(circuit).into_iter().unzip();
    LinearizedTrace::encode(pairs.into_iter(), positions, width)
}

impl LinearizedTrace {
    fn encode(
        pairs: impl Iterator<Item = QubitPair>,
        pair_positions: Vec<usize>,
        width: usize,
    ) -> Result<Self, TraceError> {
        if width > MAX_WIDTH {
            return Err(TraceError::WidthTooLarge(width));
        }
        let symbols = pairs
            .map(|p| {
                if p.control >= width || p.target >= width {
                    Err(TraceError::PairOutOfRange {
                        control: p.control,
                        target: p.target,
                        width,
                    })
                } else if p.control == p.target {
                    Err(TraceError::SelfPair(p.control))
                } else {
                    Ok((p.control * width + p.target) as Symbol)
                }
            })
            .collect::<Result<_, _>>()?;
        Ok(Self {
            symbols,
            width,
            pair_positions,
        })
    }

    /// Raw symbols with explicit width; positions default to `0..len`.
    pub fn from_symbols(symbols: Vec<Symbol>, width: usize) -> Self {
        let pair_positions = (0..symbols.len()).collect();
        Self {
            symbols,
            width,
            pair_positions,
        }
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.symbols
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn pair_positions(&self) -> &[usize] {
        &self.pair_positions
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn decode(&self, symbol: Symbol) -> QubitPair {
        let s = symbol as usize;
        QubitPair::new(s / self.width, s % self.width)
    }

    pub fn pairs(&self) -> impl Iterator<Item = QubitPair> + '_ {
        self.symbols.iter().map(|&s| self.decode(s))
    }

    pub fn distinct_symbols(&self) -> usize {
        self.symbols.iter().collect::<BTreeSet<_>>().len()
    }
}

/// Pair usage counts over some scope of a trace.
///
/// Per-qubit frequency counts a qubit only when it is the *first* operand:
/// `freq(q) = Σ_j count(q, j)`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct EdgeHistogram {
    pair_counts: BTreeMap<QubitPair, usize>,
    qubit_freq: BTreeMap<usize, usize>,
}

pub fn build_histogram(pairs: &[QubitPair]) -> EdgeHistogram {
    EdgeHistogram::from_pairs(pairs.iter().copied())
}

impl EdgeHistogram {
    pub fn from_pairs(pairs: impl IntoIterator<Item = QubitPair>) -> Self {
        let mut h = Self::default();
        for p in pairs {
            h.add(p, 1);
        }
        h
    }

    fn add(&mut self, p: QubitPair, n: usize) {
        *self.pair_counts.entry(p).or_default() += n;
        *self.qubit_freq.entry(p.control).or_default() += n;
    }

    /// Keeps only the listed pairs, with the counts they have here.
    pub fn restricted_to(&self, pairs: &BTreeSet<QubitPair>) -> Self {
        let mut h = Self::default();
        for p in pairs {
            if let Some(&n) = self.pair_counts.get(p) {
                h.add(*p, n);
            }
        }
        h
    }

    pub fn is_empty(&self) -> bool {
        self.pair_counts.is_empty()
    }

    pub fn count(&self, pair: QubitPair) -> usize {
        self.pair_counts.get(&pair).copied().unwrap_or(0)
    }

    pub fn freq(&self, q: usize) -> usize {
        self.qubit_freq.get(&q).copied().unwrap_or(0)
    }

    pub fn pair_counts(&self) -> &BTreeMap<QubitPair, usize> {
        &self.pair_counts
    }

    /// First-operand frequency of each qubit that has one.
    pub fn qubit_freq(&self) -> &BTreeMap<usize, usize> {
        &self.qubit_freq
    }

    pub fn distinct_pairs(&self) -> usize {
        self.pair_counts.len()
    }

    pub fn total(&self) -> usize {
        self.pair_counts.values().sum()
    }

    /// `(partner, count)` for pairs `(q, partner)`, most used first, ties by
    /// lower partner index.
    pub fn partners(&self, q: usize) -> Vec<(usize, usize)> {
        let lo = QubitPair::new(q, 0);
        let hi = QubitPair::new(q, usize::MAX);
        let mut v: Vec<_> = self.pair_counts.range(lo..=hi).map(|(p, &n)| (p.target, n)).collect();
        v.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));
        v
    }

    /// Number of distinct targets paired with `q` as control.
    pub fn distinct_neighbors(&self, q: usize) -> usize {
        self.partners(q).len()
    }

    /// Summed counts of the `k` most used pairs with `q` as control.
    pub fn top_k_mass(&self, q: usize, k: usize) -> usize {
        self.partners(q).iter().take(k).map(|&(_, n)| n).sum()
    }

    pub fn mean_pair_count(&self) -> f64 {
        if self.pair_counts.is_empty() {
            return 0.0;
        }
        self.total() as f64 / self.pair_counts.len() as f64
    }

    /// Standard deviation of pair counts; `sample` selects the n-1 divisor.
    pub fn pair_count_std_dev(&self, sample: bool) -> f64 {
        let n = self.pair_counts.len();
        if n == 0 || (sample && n == 1) {
            return 0.0;
        }
        let mean = self.mean_pair_count();
        let ss: f64 = self.pair_counts.values().map(|&c| (c as f64 - mean).powi(2)).sum();
        (ss / if sample { n - 1 } else { n } as f64).sqrt()
    }

    /// Mean first-operand frequency over qubits that have one.
    pub fn mean_qubit_freq(&self) -> f64 {
        if self.qubit_freq.is_empty() {
            return 0.0;
        }
        self.qubit_freq.values().sum::<usize>() as f64 / self.qubit_freq.len() as f64
    }
}

/// A repeated substring and its non-overlapping occurrences.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SubstringMatch {
    /// Ascending; consecutive starts differ by at least `length`.
    pub start_positions: Vec<usize>,
    pub length: usize,
    /// The repeated symbols themselves.
    pub symbols: Vec<Symbol>,
}

impl SubstringMatch {
    pub fn occurrences(&self) -> usize {
        self.start_positions.len()
    }

    /// Distinct pairs that appear in the substring.
    pub fn pairs(&self, trace: &LinearizedTrace) -> BTreeSet<QubitPair> {
        self.symbols.iter().map(|&s| trace.decode(s)).collect()
    }
}

pub fn find_lrnos(trace: &LinearizedTrace) -> SubstringMatch {
    find_lrnos_symbols(trace.symbols())
}

/// Longest repeating non-overlapping substring.
///
/// `T[i][j]` is the length of the match ending at `s[i]` and `s[j]` (1-based,
/// `j > i`); it grows only while the two copies stay disjoint,
/// `T[i-1][j-1] < j - i`. Only rows `i-1` and `i` are held, so auxiliary
/// memory is two `n + 1` rows.
///
/// Among substrings of the winning length, the one whose first occurrence
/// starts earliest is reported, together with every occurrence found by a
/// greedy left-to-right scan.
pub fn find_lrnos_symbols(s: &[Symbol]) -> SubstringMatch {
    let length = lrnos_length(s);
    if length == 0 {
        return SubstringMatch::default();
    }
    let first = earliest_repeat_start(s, length).expect("a repeat of the DP length exists");
    let symbols = s[first..first + length].to_vec();
    let start_positions = greedy_occurrences(s, &symbols, first);
    debug_assert!(start_positions.len() >= 2);
    SubstringMatch {
        start_positions,
        length,
        symbols,
    }
}

/// Length reported by the two-row DP.
pub fn lrnos_length(s: &[Symbol]) -> usize {
    lrnos_dp(s).0
}

/// Returns `(best_length, best_i, best_j)`, 1-based row/column of the first
/// cell (row-major) that reached the maximum.
pub(crate) fn lrnos_dp(s: &[Symbol]) -> (usize, usize, usize) {
    let n = s.len();
    let mut prev = vec![0u32; n + 1];
    let mut cur = vec![0u32; n + 1];
    let (mut best, mut best_i, mut best_j) = (0u32, 0usize, 0usize);
    for i in 1..n {
        let si = s[i - 1];
        let mut row_max = 0u32;
        // columns j = i+1..=n; gap = j - i
        let rhs = &s[i..n];
        let diag = &prev[i..n];
        let out = &mut cur[i + 1..=n];
        for (gap, ((&sj, &d), c)) in (1u32..).zip(rhs.iter().zip(diag).zip(out.iter_mut())) {
            let v = if sj == si && d < gap { d + 1 } else { 0 };
            *c = v;
            row_max = row_max.max(v);
        }
        if row_max > best {
            best = row_max;
            best_i = i;
            best_j = i + 1 + cur[i + 1..=n].iter().position(|&v| v == row_max).unwrap_or(0);
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    (best as usize, best_i, best_j)
}

/// Smallest `p` such that `s[p..p+len]` reappears at some `q >= p + len`.
fn earliest_repeat_start(s: &[Symbol], len: usize) -> Option<usize> {
    let n = s.len();
    if len == 0 || 2 * len > n {
        return None;
    }
    let mut best: Option<usize> = None;
    for d in len..=n - len {
        let mut run = 0usize;
        for p in 0..n - d {
            // a hit ending at p starts at p + 1 - len
            if best.is_some_and(|b| p + 1 >= b + len) {
                break;
            }
            if s[p] == s[p + d] {
                run += 1;
                if run >= len {
                    best = Some(p + 1 - len);
                    break;
                }
            } else {
                run = 0;
            }
        }
    }
    best
}

/// Same result as [`find_lrnos`], computed from a suffix array instead of
/// the quadratic DP. The mapper calls this once per round, where the DP
/// would dominate the runtime on long traces.
pub fn find_lrnos_indexed(trace: &LinearizedTrace) -> SubstringMatch {
    find_lrnos_indexed_symbols(trace.symbols())
}

pub fn find_lrnos_indexed_symbols(s: &[Symbol]) -> SubstringMatch {
    let n = s.len();
    if n < 2 {
        return SubstringMatch::default();
    }
    let sa = suffix_array(s);
    let lcp = lcp_array(s, &sa);
    // A non-overlapping repeat of length L implies one of length L - 1, so
    // the longest one can be found by bisection.
    let (mut lo, mut hi) = (0usize, n / 2);
    while lo < hi {
        let mid = (lo + hi).div_ceil(2);
        if earliest_repeat_in_groups(&sa, &lcp, mid).is_some() {
            lo = mid;
        } else {
            hi = mid - 1;
        }
    }
    let length = lo;
    if length == 0 {
        return SubstringMatch::default();
    }
    let first = earliest_repeat_in_groups(&sa, &lcp, length).expect("bisection found this length");
    let symbols = s[first..first + length].to_vec();
    let start_positions = greedy_occurrences(s, &symbols, first);
    SubstringMatch {
        start_positions,
        length,
        symbols,
    }
}

/// Suffix start positions in lexicographic order, by prefix doubling.
fn suffix_array(s: &[Symbol]) -> Vec<usize> {
    let n = s.len();
    let mut sa: Vec<usize> = (0..n).collect();
    let mut rank: Vec<usize> = s.iter().map(|&x| x as usize).collect();
    let mut next = vec![0usize; n];
    let mut k = 1;
    loop {
        {
            let key = |i: usize| (rank[i], if i + k < n { rank[i + k] + 1 } else { 0 });
            sa.sort_unstable_by_key(|&i| key(i));
            next[sa[0]] = 0;
            for w in 1..n {
                next[sa[w]] = next[sa[w - 1]] + usize::from(key(sa[w - 1]) < key(sa[w]));
            }
        }
        std::mem::swap(&mut rank, &mut next);
        if rank[sa[n - 1]] == n - 1 || k >= n {
            return sa;
        }
        k *= 2;
    }
}

/// `lcp[w]` = common prefix length of suffixes `sa[w - 1]` and `sa[w]` (Kasai).
fn lcp_array(s: &[Symbol], sa: &[usize]) -> Vec<usize> {
    let n = s.len();
    let mut rank = vec![0usize; n];
    for (w, &p) in sa.iter().enumerate() {
        rank[p] = w;
    }
    let mut lcp = vec![0usize; n];
    let mut h = 0usize;
    for p in 0..n {
        if rank[p] == 0 {
            h = 0;
            continue;
        }
        let q = sa[rank[p] - 1];
        while p + h < n && q + h < n && s[p + h] == s[q + h] {
            h += 1;
        }
        lcp[rank[p]] = h;
        h = h.saturating_sub(1);
    }
    lcp
}

/// Suffixes sharing their first `len` symbols are contiguous in the suffix
/// array. A group holds a non-overlapping repeat when its extreme positions
/// are at least `len` apart; the answer is the smallest group minimum.
fn earliest_repeat_in_groups(sa: &[usize], lcp: &[usize], len: usize) -> Option<usize> {
    let mut best: Option<usize> = None;
    let (mut lo, mut hi) = (sa[0], sa[0]);
    for w in 1..=sa.len() {
        if w < sa.len() && lcp[w] >= len {
            lo = lo.min(sa[w]);
            hi = hi.max(sa[w]);
            continue;
        }
        if hi - lo >= len && best.is_none_or(|b| lo < b) {
            best = Some(lo);
        }
        if w < sa.len() {
            lo = sa[w];
            hi = sa[w];
        }
    }
    best
}

fn greedy_occurrences(s: &[Symbol], pat: &[Symbol], first: usize) -> Vec<usize> {
    let mut out = vec![first];
    let mut p = first + pat.len();
    while p + pat.len() <= s.len() {
        if s[p..p + pat.len()] == *pat {
            out.push(p);
            p += pat.len();
        } else {
            p += 1;
        }
    }
    out
}

/// Deletes every occurrence in `m` from the trace. Surviving symbols keep
/// their order and their gate positions.
pub fn remove_occurrences(trace: &LinearizedTrace, m: &SubstringMatch) -> Result<LinearizedTrace, TraceError> {
    if m.length == 0 || m.start_positions.is_empty() {
        return Ok(trace.clone());
    }
    let n = trace.len();
    let s = trace.symbols();
    let pat = &s.get(m.start_positions[0]..m.start_positions[0] + m.length).ok_or_else(|| {
        TraceError::InvalidMatch(format!("occurrence at {} overruns trace of {n}", m.start_positions[0]))
    })?;
    let mut covered = vec![false; n];
    let mut last_end = 0;
    for (k, &p) in m.start_positions.iter().enumerate() {
        if k > 0 && p < last_end {
            return Err(TraceError::InvalidMatch(format!("occurrence at {p} overlaps the previous one")));
        }
        let occ = s
            .get(p..p + m.length)
            .ok_or_else(|| TraceError::InvalidMatch(format!("occurrence at {p} overruns trace of {n}")))?;
        if occ != *pat {
            return Err(TraceError::InvalidMatch(format!("occurrence at {p} differs from the first")));
        }
        covered[p..p + m.length].fill(true);
        last_end = p + m.length;
    }
    let (symbols, pair_positions) = s
        .iter()
        .zip(&trace.pair_positions)
        .zip(&covered)
        .filter(|(_, &c)| !c)
        .map(|((&sym, &pos), _)| (sym, pos))
        .unzip();
    Ok(LinearizedTrace {
        symbols,
        width: trace.width,
        pair_positions,
    })
}
