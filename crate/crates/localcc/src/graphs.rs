//! Edge-labeled complete and complete-bipartite graphs.
//!
//! Every unordered pair of distinct vertices (for bipartite graphs: every
//! cross pair) carries exactly one sign, `+` or `-`. Graphs are immutable
//! after construction and store their labels in a flat bit array, so sign
//! lookups are O(1).
//!
//! The module also provides the instance families used throughout the test
//! suites (a negative perfect matching inside an otherwise positive clique,
//! and a positive star inside an otherwise negative clique), seeded random
//! generators, and a line-based text format with a canonical serialization.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

/// Edge label: similar (`+`) or dissimilar (`-`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn is_positive(self) -> bool {
        matches!(self, Sign::Plus)
    }

    fn symbol(self) -> char {
        match self {
            Sign::Plus => '+',
            Sign::Minus => '-',
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.symbol())
    }
}

/// Index of the pair {u, v} (u < v) in lexicographic pair order over n vertices.
///
/// Pairs are ordered (0,1), (0,2), ..., (0,n-1), (1,2), ... This ordering is
/// shared by the LP variable layout and the fractional-clustering storage.
#[inline]
pub fn pair_index(n: usize, u: usize, v: usize) -> usize {
    debug_assert!(u < v && v < n);
    u * (2 * n - u - 1) / 2 + (v - u - 1)
}

/// Number of unordered pairs over n vertices.
#[inline]
pub fn pair_count(n: usize) -> usize {
    n * (n - 1) / 2
}

fn word_index(bit: usize) -> (usize, u64) {
    (bit / 64, 1u64 << (bit % 64))
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct BitPairs {
    words: Vec<u64>,
}

impl BitPairs {
    fn new(len: usize) -> Self {
        BitPairs {
            words: vec![0; len.div_ceil(64)],
        }
    }

    fn get(&self, bit: usize) -> bool {
        let (w, mask) = word_index(bit);
        self.words[w] & mask != 0
    }

    fn set(&mut self, bit: usize, value: bool) {
        let (w, mask) = word_index(bit);
        if value {
            self.words[w] |= mask;
        } else {
            self.words[w] &= !mask;
        }
    }
}

/// Errors from instance generators.
#[derive(Clone, Debug, Error, PartialEq)]
pub enum GenError {
    #[error("parameter {name} must be at least 1, got 0")]
    ZeroSize { name: &'static str },
    #[error("edge probability must lie in [0, 1], got {value}")]
    BadProbability { value: f64 },
}

/// A complete graph on `n` vertices with a sign on every unordered pair.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignedCompleteGraph {
    n: usize,
    positive: BitPairs,
}

impl SignedCompleteGraph {
    /// Builds a graph by evaluating `sign` on every pair u < v.
    pub fn from_fn(n: usize, mut sign: impl FnMut(usize, usize) -> Sign) -> Self {
        assert!(n >= 1, "a signed complete graph needs at least one vertex");
        let mut positive = BitPairs::new(pair_count(n));
        for u in 0..n {
            for v in (u + 1)..n {
                positive.set(pair_index(n, u, v), sign(u, v).is_positive());
            }
        }
        SignedCompleteGraph { n, positive }
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    /// Sign of the pair {u, v}; panics on a self-pair or out-of-range vertex.
    pub fn edge_sign(&self, u: usize, v: usize) -> Sign {
        assert!(u != v && u < self.n && v < self.n, "invalid pair ({u}, {v})");
        let (a, b) = if u < v { (u, v) } else { (v, u) };
        if self.positive.get(pair_index(self.n, a, b)) {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }

    pub fn positive_degree(&self, v: usize) -> usize {
        (0..self.n)
            .filter(|&w| w != v && self.edge_sign(v, w).is_positive())
            .count()
    }

    pub fn negative_degree(&self, v: usize) -> usize {
        self.n - 1 - self.positive_degree(v)
    }

    pub fn positive_edge_count(&self) -> usize {
        self.edges().filter(|&(_, _, s)| s.is_positive()).count()
    }

    pub fn negative_edge_count(&self) -> usize {
        pair_count(self.n) - self.positive_edge_count()
    }

    /// All labeled pairs (u, v, sign) with u < v in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, Sign)> + '_ {
        let n = self.n;
        (0..n).flat_map(move |u| ((u + 1)..n).map(move |v| (u, v, self.edge_sign(u, v))))
    }

    /// Canonical text form; see [`Instance::parse`] for the format.
    pub fn to_text(&self) -> String {
        let positive = self.positive_edge_count();
        let negative = pair_count(self.n) - positive;
        let default = if positive >= negative { Sign::Plus } else { Sign::Minus };
        let mut out = format!("graph complete {}\ndefault {}\n", self.n, default);
        for (u, v, s) in self.edges() {
            if s != default {
                out.push_str(&format!("{s} {u} {v}\n"));
            }
        }
        out
    }
}

/// A complete bipartite graph with partite sets V1 (size `n1`) and V2 (size
/// `n2`) and a sign on every cross pair.
///
/// Vertices carry global indices: V1 occupies 0..n1 and V2 occupies
/// n1..n1+n2. Within-side pairs are not edges.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignedBipartiteGraph {
    n1: usize,
    n2: usize,
    positive: BitPairs,
}

impl SignedBipartiteGraph {
    /// Builds a graph by evaluating `sign` on every cross pair (i, j) with
    /// i indexing V1 and j indexing V2, both side-local.
    pub fn from_fn(n1: usize, n2: usize, mut sign: impl FnMut(usize, usize) -> Sign) -> Self {
        assert!(n1 >= 1 && n2 >= 1, "both partite sets must be nonempty");
        let mut positive = BitPairs::new(n1 * n2);
        for i in 0..n1 {
            for j in 0..n2 {
                positive.set(i * n2 + j, sign(i, j).is_positive());
            }
        }
        SignedBipartiteGraph { n1, n2, positive }
    }

    pub fn side_sizes(&self) -> (usize, usize) {
        (self.n1, self.n2)
    }

    pub fn vertex_count(&self) -> usize {
        self.n1 + self.n2
    }

    /// True when the global vertex index lies in V1.
    pub fn in_left_side(&self, v: usize) -> bool {
        v < self.n1
    }

    /// Sign of the cross pair given side-local indices (i in V1, j in V2).
    pub fn cross_sign(&self, i: usize, j: usize) -> Sign {
        assert!(i < self.n1 && j < self.n2, "invalid cross pair ({i}, {j})");
        if self.positive.get(i * self.n2 + j) {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }

    /// Sign of the pair of global vertex indices, or None for within-side pairs.
    pub fn edge_sign_global(&self, u: usize, v: usize) -> Option<Sign> {
        assert!(u != v && u < self.vertex_count() && v < self.vertex_count());
        match (self.in_left_side(u), self.in_left_side(v)) {
            (true, false) => Some(self.cross_sign(u, v - self.n1)),
            (false, true) => Some(self.cross_sign(v, u - self.n1)),
            _ => None,
        }
    }

    pub fn positive_degree(&self, v: usize) -> usize {
        if self.in_left_side(v) {
            (0..self.n2).filter(|&j| self.cross_sign(v, j).is_positive()).count()
        } else {
            (0..self.n1).filter(|&i| self.cross_sign(i, v - self.n1).is_positive()).count()
        }
    }

    pub fn negative_degree(&self, v: usize) -> usize {
        let opposite = if self.in_left_side(v) { self.n2 } else { self.n1 };
        opposite - self.positive_degree(v)
    }

    /// All cross pairs as (global u, global v, sign) with u in V1.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, Sign)> + '_ {
        let (n1, n2) = (self.n1, self.n2);
        (0..n1).flat_map(move |i| (0..n2).map(move |j| (i, n1 + j, self.cross_sign(i, j))))
    }

    /// Canonical text form; see [`Instance::parse`] for the format.
    pub fn to_text(&self) -> String {
        let positive = self.edges().filter(|&(_, _, s)| s.is_positive()).count();
        let negative = self.n1 * self.n2 - positive;
        let default = if positive >= negative { Sign::Plus } else { Sign::Minus };
        let mut out = format!("graph bipartite {} {}\ndefault {}\n", self.n1, self.n2, default);
        for i in 0..self.n1 {
            for j in 0..self.n2 {
                let s = self.cross_sign(i, j);
                if s != default {
                    out.push_str(&format!("{s} {i} {j}\n"));
                }
            }
        }
        out
    }
}

/// Common view over both graph kinds.
///
/// `guaranteed_vertices` is the side the per-vertex rounding guarantee covers:
/// every vertex for complete graphs, V1 for bipartite graphs.
pub trait SignedGraph {
    fn total_vertices(&self) -> usize;
    fn guaranteed_vertices(&self) -> usize;
    /// Sign of the pair of global indices, or None when the pair is not an edge.
    fn pair_sign(&self, u: usize, v: usize) -> Option<Sign>;
    fn labeled_pairs(&self) -> Box<dyn Iterator<Item = (usize, usize, Sign)> + '_>;
    fn negative_deg(&self, v: usize) -> usize;
}

impl SignedGraph for SignedCompleteGraph {
    fn total_vertices(&self) -> usize {
        self.n
    }

    fn guaranteed_vertices(&self) -> usize {
        self.n
    }

    fn pair_sign(&self, u: usize, v: usize) -> Option<Sign> {
        Some(self.edge_sign(u, v))
    }

    fn labeled_pairs(&self) -> Box<dyn Iterator<Item = (usize, usize, Sign)> + '_> {
        Box::new(self.edges())
    }

    fn negative_deg(&self, v: usize) -> usize {
        self.negative_degree(v)
    }
}

impl SignedGraph for SignedBipartiteGraph {
    fn total_vertices(&self) -> usize {
        self.vertex_count()
    }

    fn guaranteed_vertices(&self) -> usize {
        self.n1
    }

    fn pair_sign(&self, u: usize, v: usize) -> Option<Sign> {
        self.edge_sign_global(u, v)
    }

    fn labeled_pairs(&self) -> Box<dyn Iterator<Item = (usize, usize, Sign)> + '_> {
        Box::new(self.edges())
    }

    fn negative_deg(&self, v: usize) -> usize {
        self.negative_degree(v)
    }
}

/// The matching family: 2t vertices where the pairs {2i, 2i+1} are negative
/// and every other pair is positive. Each vertex has exactly one negative
/// neighbor, so the single-cluster partition has exactly one error per vertex.
pub fn matching_instance(t: usize) -> Result<SignedCompleteGraph, GenError> {
    if t == 0 {
        return Err(GenError::ZeroSize { name: "t" });
    }
    Ok(SignedCompleteGraph::from_fn(2 * t, |u, v| {
        if u / 2 == v / 2 {
            Sign::Minus
        } else {
            Sign::Plus
        }
    }))
}

/// The star family: n+1 vertices where vertex 0 is the hub; all pairs
/// incident to the hub are positive and all other pairs are negative.
pub fn star_instance(n: usize) -> Result<SignedCompleteGraph, GenError> {
    if n == 0 {
        return Err(GenError::ZeroSize { name: "n" });
    }
    Ok(SignedCompleteGraph::from_fn(n + 1, |u, _| {
        if u == 0 {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }))
}

fn bernoulli_sign<R: Rng>(rng: &mut R, p_plus: f64) -> Sign {
    if rng.random_bool(p_plus) {
        Sign::Plus
    } else {
        Sign::Minus
    }
}

/// Seeded random complete instance: each pair is independently positive with
/// probability `p_plus`. Pure function of its arguments.
pub fn random_complete(n: usize, p_plus: f64, seed: u64) -> Result<SignedCompleteGraph, GenError> {
    if n == 0 {
        return Err(GenError::ZeroSize { name: "n" });
    }
    if !(0.0..=1.0).contains(&p_plus) {
        return Err(GenError::BadProbability { value: p_plus });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok(SignedCompleteGraph::from_fn(n, |_, _| bernoulli_sign(&mut rng, p_plus)))
}

/// Seeded random bipartite instance; see [`random_complete`].
pub fn random_bipartite(
    n1: usize,
    n2: usize,
    p_plus: f64,
    seed: u64,
) -> Result<SignedBipartiteGraph, GenError> {
    if n1 == 0 {
        return Err(GenError::ZeroSize { name: "n1" });
    }
    if n2 == 0 {
        return Err(GenError::ZeroSize { name: "n2" });
    }
    if !(0.0..=1.0).contains(&p_plus) {
        return Err(GenError::BadProbability { value: p_plus });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok(SignedBipartiteGraph::from_fn(n1, n2, |_, _| bernoulli_sign(&mut rng, p_plus)))
}

/// Parse failures for the instance text format.
#[derive(Clone, Debug, Error, PartialEq)]
pub enum ParseError {
    #[error("line {line}: expected `graph complete <n>` or `graph bipartite <n1> <n2>`")]
    BadHeader { line: usize },
    #[error("line {line}: expected `default <+|->`")]
    BadDefault { line: usize },
    #[error("line {line}: malformed exception line (want `<+|-> <u> <v>`)")]
    BadException { line: usize },
    #[error("line {line}: vertex index out of range")]
    IndexOutOfRange { line: usize },
    #[error("line {line}: self-loop {v} {v}")]
    SelfLoop { line: usize, v: usize },
    #[error("line {line}: pair listed with u >= v")]
    UnorderedPair { line: usize },
    #[error("line {line}: duplicate pair line for ({u}, {v})")]
    DuplicatePair { line: usize, u: usize, v: usize },
    #[error("missing header line")]
    MissingHeader,
    #[error("missing default line")]
    MissingDefault,
    #[error("vertex counts must be at least 1")]
    EmptyGraph,
}

/// A parsed instance of either kind.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Instance {
    Complete(SignedCompleteGraph),
    Bipartite(SignedBipartiteGraph),
}

impl Instance {
    /// Parses the line-based instance format.
    ///
    /// ```text
    /// graph complete <n>          # or: graph bipartite <n1> <n2>
    /// default <+|->
    /// <+|-> <u> <v>               # exceptions to the default sign
    /// ```
    ///
    /// `#` starts a comment. For complete graphs exception pairs satisfy
    /// 0 <= u < v < n; for bipartite graphs u indexes V1 and v indexes V2.
    /// Listing the same pair twice is an error even when consistent.
    pub fn parse(text: &str) -> Result<Instance, ParseError> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, raw)| {
                let stripped = raw.split('#').next().unwrap_or("").trim();
                (i + 1, stripped)
            })
            .filter(|(_, s)| !s.is_empty());

        let (hline, header) = lines.next().ok_or(ParseError::MissingHeader)?;
        let tokens: Vec<&str> = header.split_whitespace().collect();
        let shape = match tokens.as_slice() {
            ["graph", "complete", n] => {
                let n: usize = n.parse().map_err(|_| ParseError::BadHeader { line: hline })?;
                (n, None)
            }
            ["graph", "bipartite", n1, n2] => {
                let n1: usize = n1.parse().map_err(|_| ParseError::BadHeader { line: hline })?;
                let n2: usize = n2.parse().map_err(|_| ParseError::BadHeader { line: hline })?;
                (n1, Some(n2))
            }
            _ => return Err(ParseError::BadHeader { line: hline }),
        };

        let (dline, default) = lines.next().ok_or(ParseError::MissingDefault)?;
        let default = match default.split_whitespace().collect::<Vec<_>>().as_slice() {
            ["default", "+"] => Sign::Plus,
            ["default", "-"] => Sign::Minus,
            _ => return Err(ParseError::BadDefault { line: dline }),
        };

        let mut exceptions: Vec<(usize, usize, Sign)> = Vec::new();
        let mut seen = std::collections::HashSet::new();
        for (lno, line) in lines {
            let toks: Vec<&str> = line.split_whitespace().collect();
            let [sign, u, v] = toks.as_slice() else {
                return Err(ParseError::BadException { line: lno });
            };
            let sign = match *sign {
                "+" => Sign::Plus,
                "-" => Sign::Minus,
                _ => return Err(ParseError::BadException { line: lno }),
            };
            let u: usize = u.parse().map_err(|_| ParseError::BadException { line: lno })?;
            let v: usize = v.parse().map_err(|_| ParseError::BadException { line: lno })?;
            match shape {
                (n, None) => {
                    if u >= n || v >= n {
                        return Err(ParseError::IndexOutOfRange { line: lno });
                    }
                    if u == v {
                        return Err(ParseError::SelfLoop { line: lno, v: u });
                    }
                    if u > v {
                        return Err(ParseError::UnorderedPair { line: lno });
                    }
                }
                (n1, Some(n2)) => {
                    if u >= n1 || v >= n2 {
                        return Err(ParseError::IndexOutOfRange { line: lno });
                    }
                }
            }
            if !seen.insert((u, v)) {
                return Err(ParseError::DuplicatePair { line: lno, u, v });
            }
            exceptions.push((u, v, sign));
        }

        match shape {
            (n, None) => {
                if n == 0 {
                    return Err(ParseError::EmptyGraph);
                }
                let mut g = SignedCompleteGraph::from_fn(n, |_, _| default);
                for (u, v, s) in exceptions {
                    g.positive.set(pair_index(n, u, v), s.is_positive());
                }
                Ok(Instance::Complete(g))
            }
            (n1, Some(n2)) => {
                if n1 == 0 || n2 == 0 {
                    return Err(ParseError::EmptyGraph);
                }
                let mut g = SignedBipartiteGraph::from_fn(n1, n2, |_, _| default);
                for (u, v, s) in exceptions {
                    g.positive.set(u * n2 + v, s.is_positive());
                }
                Ok(Instance::Bipartite(g))
            }
        }
    }

    /// Canonical text form: the default sign is the majority sign (ties go
    /// to `+`) and exception lines are sorted by (u, v).
    pub fn to_text(&self) -> String {
        match self {
            Instance::Complete(g) => g.to_text(),
            Instance::Bipartite(g) => g.to_text(),
        }
    }

    pub fn total_vertices(&self) -> usize {
        match self {
            Instance::Complete(g) => g.vertex_count(),
            Instance::Bipartite(g) => g.vertex_count(),
        }
    }
}
