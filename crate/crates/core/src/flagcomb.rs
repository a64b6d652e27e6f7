//! Permutation combinatorics for the flag manifold: vertices, edges, height
//! functions, and Morse data.
//!
//! The fixed-point set of the torus action is indexed by permutations.
//! Edges of the moment graph join `w` to `s_pq * w` (transposition acting on
//! the left, swapping the values `p` and `q`); that edge carries the weight
//! `u_p - u_q`. Equivalently the pair `{w, w * s_ab}` carries
//! `u_{w(a)} - u_{w(b)}`. The naive right reading, `{w, w * s_pq}` with
//! weight `u_p - u_q`, pairs the wrong endpoints with the weight and is kept
//! only as an explicitly labelled alternative so its failure stays pinned by
//! a regression test.
//!
//! Indices are 0-based internally. One-line notation in JSON, display, and
//! constructors is 1-based to match the usual convention.

use std::fmt;

use itertools::Itertools;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::exactpoly::{IntPolynomial, Monomial};

/// Default cap on the flag manifold size; `8!` vertices would already put
/// the per-degree matrices far past any sensible budget.
pub const DEFAULT_PERMUTATION_CAP: usize = 7;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FlagError {
    #[error("{0:?} is not one-line notation for a permutation of 1..=n")]
    InvalidOneLine(Vec<usize>),
    #[error("n = {n} exceeds the cap {cap}")]
    TooLarge { n: usize, cap: usize },
    #[error("height parameters need matching lengths, got {a} and {r}")]
    ParamLengthMismatch { a: usize, r: usize },
    #[error("height parameter sequence `{0}` must be strictly increasing")]
    ParamNotIncreasing(&'static str),
    #[error("height parameter sequence `{0}` must sum to zero")]
    ParamNotZeroSum(&'static str),
    #[error("height parameters must be nonempty")]
    ParamEmpty,
    #[error("height tie across the edge with pair ({p},{q}): parameters are not generic")]
    NonGenericHeights { p: usize, q: usize },
}

/// A permutation of `{0, .., n-1}` in one-line notation.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Permutation {
    map: Vec<usize>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation {
            map: (0..n).collect(),
        }
    }

    /// Longest element: `k -> n-1-k`.
    pub fn reversal(n: usize) -> Self {
        Permutation {
            map: (0..n).rev().collect(),
        }
    }

    /// Parses 1-based one-line notation, e.g. `[2, 3, 1]`.
    pub fn from_one_line(values: &[usize]) -> Result<Self, FlagError> {
        let n = values.len();
        let mut seen = vec![false; n];
        for &v in values {
            if v == 0 || v > n || seen[v - 1] {
                return Err(FlagError::InvalidOneLine(values.to_vec()));
            }
            seen[v - 1] = true;
        }
        Ok(Permutation {
            map: values.iter().map(|&v| v - 1).collect(),
        })
    }

    pub fn n(&self) -> usize {
        self.map.len()
    }

    /// Value at position `i` (both 0-based).
    pub fn apply(&self, i: usize) -> usize {
        self.map[i]
    }

    /// One-line notation, 1-based.
    pub fn one_line(&self) -> Vec<usize> {
        self.map.iter().map(|&v| v + 1).collect()
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.map.len()];
        for (i, &v) in self.map.iter().enumerate() {
            inv[v] = i;
        }
        Permutation { map: inv }
    }

    /// `self` after `other`: `(self.compose(other))(i) = self(other(i))`.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        assert_eq!(self.n(), other.n(), "size mismatch in composition");
        Permutation {
            map: other.map.iter().map(|&i| self.map[i]).collect(),
        }
    }

    /// Left action of the transposition `(p q)`: swaps the values `p` and
    /// `q` wherever they occur in one-line notation.
    pub fn swap_values(&self, p: usize, q: usize) -> Permutation {
        assert!(p < self.n() && q < self.n() && p != q);
        let mut map = self.map.clone();
        for v in &mut map {
            if *v == p {
                *v = q;
            } else if *v == q {
                *v = p;
            }
        }
        Permutation { map }
    }

    /// Right action of `(p q)`: swaps the entries at positions `p` and `q`.
    pub fn swap_positions(&self, p: usize, q: usize) -> Permutation {
        assert!(p < self.n() && q < self.n() && p != q);
        let mut map = self.map.clone();
        map.swap(p, q);
        Permutation { map }
    }

    pub fn inversions(&self) -> usize {
        let n = self.n();
        (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .filter(|&(i, j)| self.map[i] > self.map[j])
            .count()
    }

    pub fn coinversions(&self) -> usize {
        self.n() * (self.n().saturating_sub(1)) / 2 - self.inversions()
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}]",
            self.one_line().iter().map(usize::to_string).join(",")
        )
    }
}

impl Serialize for Permutation {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.one_line().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Permutation {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let values = Vec::<usize>::deserialize(deserializer)?;
        Permutation::from_one_line(&values).map_err(D::Error::custom)
    }
}

/// All of `S_n` in lexicographic one-line order (identity first, reversal
/// last), capped at `cap`.
pub fn all_permutations_with_cap(n: usize, cap: usize) -> Result<Vec<Permutation>, FlagError> {
    if n > cap {
        return Err(FlagError::TooLarge { n, cap });
    }
    Ok((0..n)
        .permutations(n)
        .map(|map| Permutation { map })
        .collect())
}

pub fn all_permutations(n: usize) -> Result<Vec<Permutation>, FlagError> {
    all_permutations_with_cap(n, DEFAULT_PERMUTATION_CAP)
}

/// Which side the transposition acts on when pairing edges with weights.
///
/// `Left` is the convention under which the edge `{w, s_pq w}` carries the
/// weight `u_p - u_q`; it is the one all verification routines use. `Right`
/// pairs `{w, w s_pq}` with that same weight and fails divisibility already
/// for `n = 3`; it exists so that the failure stays pinned by a test.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EdgeConvention {
    Left,
    Right,
}

/// One edge incident to a fixed vertex: the neighbor plus the index pair
/// `(p, q)`, `p < q`, naming the weight `u_p - u_q` (0-based indices).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexEdge {
    pub p: usize,
    pub q: usize,
    pub neighbor: Permutation,
}

/// The `n(n-1)/2` edges incident to `w` under the given convention, ordered
/// by `(p, q)`.
pub fn vertex_edges(w: &Permutation, convention: EdgeConvention) -> Vec<VertexEdge> {
    let n = w.n();
    let mut edges = Vec::with_capacity(n * n.saturating_sub(1) / 2);
    for p in 0..n {
        for q in p + 1..n {
            let neighbor = match convention {
                EdgeConvention::Left => w.swap_values(p, q),
                EdgeConvention::Right => w.swap_positions(p, q),
            };
            edges.push(VertexEdge { p, q, neighbor });
        }
    }
    edges
}

/// An edge of the whole moment graph: an unordered endpoint pair (stored
/// with `v < w` lexicographically) and the weight pair `(p, q)`, `p < q`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct GkmEdge {
    pub v: Permutation,
    pub w: Permutation,
    pub p: usize,
    pub q: usize,
}

/// All `n! * C(n,2) / 2` edges of the moment graph on `S_n`, each unordered
/// pair listed once, sorted by `(v, p, q)`.
pub fn gkm_edges(n: usize, convention: EdgeConvention) -> Result<Vec<GkmEdge>, FlagError> {
    let vertices = all_permutations(n)?;
    let mut edges = Vec::new();
    for w in &vertices {
        for e in vertex_edges(w, convention) {
            // keep each unordered pair once
            if *w < e.neighbor {
                edges.push(GkmEdge {
                    v: w.clone(),
                    w: e.neighbor,
                    p: e.p,
                    q: e.q,
                });
            }
        }
    }
    edges.sort();
    Ok(edges)
}

/// Strictly increasing, zero-sum spectra `a` (the ambient diagonal) and `r`
/// (the orbit diagonal) defining the height function
/// `w -> sum_k a_k r_{w(k)}`.
///
/// Strict monotonicity of both sequences is exactly what keeps every edge
/// of the moment graph non-level; global injectivity of the height is not
/// required and indeed fails for the standard choice once `n >= 3`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HeightParams {
    a: Vec<BigRational>,
    r: Vec<BigRational>,
}

impl HeightParams {
    pub fn new(a: Vec<BigRational>, r: Vec<BigRational>) -> Result<Self, FlagError> {
        if a.is_empty() {
            return Err(FlagError::ParamEmpty);
        }
        if a.len() != r.len() {
            return Err(FlagError::ParamLengthMismatch {
                a: a.len(),
                r: r.len(),
            });
        }
        for (name, seq) in [("a", &a), ("r", &r)] {
            if !seq.windows(2).all(|w| w[0] < w[1]) {
                return Err(FlagError::ParamNotIncreasing(name));
            }
            if !seq.iter().sum::<BigRational>().is_zero() {
                return Err(FlagError::ParamNotZeroSum(name));
            }
        }
        Ok(HeightParams { a, r })
    }

    /// The symmetric integer spectrum `2k - n - 1`, `k = 1..=n`, used for
    /// both sequences: `(-1, 1)` for `n = 2`, `(-2, 0, 2)` for `n = 3`, ...
    /// (the sequence `1..n` shifted to zero sum and doubled to stay
    /// integral).
    pub fn standard(n: usize) -> Result<Self, FlagError> {
        let seq: Vec<BigRational> = (1..=n as i64)
            .map(|k| BigRational::from_integer(BigInt::from(2 * k - n as i64 - 1)))
            .collect();
        HeightParams::new(seq.clone(), seq)
    }

    pub fn from_integers(a: &[i64], r: &[i64]) -> Result<Self, FlagError> {
        let lift = |xs: &[i64]| {
            xs.iter()
                .map(|&x| BigRational::from_integer(BigInt::from(x)))
                .collect()
        };
        HeightParams::new(lift(a), lift(r))
    }

    pub fn n(&self) -> usize {
        self.a.len()
    }

    pub fn a(&self) -> &[BigRational] {
        &self.a
    }

    pub fn r(&self) -> &[BigRational] {
        &self.r
    }
}

/// `h(w) = sum_k a_k r_{w(k)}`.
pub fn height(w: &Permutation, params: &HeightParams) -> BigRational {
    assert_eq!(w.n(), params.n(), "size mismatch between w and parameters");
    (0..w.n())
        .map(|k| &params.a[k] * &params.r[w.apply(k)])
        .sum()
}

/// `h(w) - h(s_pq w)` in closed form:
/// `(a_i - a_j)(r_p - r_q)` where `i = w^{-1}(p)`, `j = w^{-1}(q)`.
/// Nonzero whenever `p != q`, so no edge of the moment graph is level.
pub fn edge_height_drop(
    w: &Permutation,
    p: usize,
    q: usize,
    params: &HeightParams,
) -> BigRational {
    assert_eq!(w.n(), params.n(), "size mismatch between w and parameters");
    assert!(p != q && p < w.n() && q < w.n());
    let inv = w.inverse();
    let (i, j) = (inv.apply(p), inv.apply(q));
    (&params.a[i] - &params.a[j]) * (&params.r[p] - &params.r[q])
}

/// The pairs `(p, q)`, `p < q`, whose edge at `w` descends (the neighbor
/// `s_pq w` sits strictly lower). Combinatorially these are the pairs with
/// `w^{-1}(p) < w^{-1}(q)`, independent of the (strictly increasing)
/// parameter choice; their count is the coinversion count of `w`.
pub fn descent_pairs(w: &Permutation) -> Vec<(usize, usize)> {
    let inv = w.inverse();
    let n = w.n();
    let mut pairs = Vec::new();
    for p in 0..n {
        for q in p + 1..n {
            if inv.apply(p) < inv.apply(q) {
                pairs.push((p, q));
            }
        }
    }
    pairs
}

/// The descending pairs read off the height function itself: `(p, q)` with
/// `h(s_pq w) < h(w)`. Rejects parameters that put any edge level instead
/// of breaking the tie arbitrarily. Agrees with `descent_pairs` for every
/// admissible parameter choice.
pub fn descent_pairs_from_heights(
    w: &Permutation,
    params: &HeightParams,
) -> Result<Vec<(usize, usize)>, FlagError> {
    let n = w.n();
    let mut pairs = Vec::new();
    for p in 0..n {
        for q in p + 1..n {
            let drop = edge_height_drop(w, p, q, params);
            if drop.is_zero() {
                return Err(FlagError::NonGenericHeights { p: p + 1, q: q + 1 });
            }
            if drop.is_positive() {
                pairs.push((p, q));
            }
        }
    }
    Ok(pairs)
}

/// Morse index of the critical point `w`: four real dimensions per
/// descending edge, so `4 * coinv(w)`. The reversal is the unique minimum
/// (index 0), the identity the unique maximum (index `4 * n(n-1)/2`).
pub fn morse_index(w: &Permutation) -> usize {
    4 * w.coinversions()
}

/// Morse index computed from the height function (counting edges that
/// descend); the second route of the dual-route check against the
/// combinatorial `morse_index`.
pub fn morse_index_from_heights(
    w: &Permutation,
    params: &HeightParams,
) -> Result<usize, FlagError> {
    Ok(4 * descent_pairs_from_heights(w, params)?.len())
}

/// `[n]!_t = prod_{v=1}^{n} (1 + t + ... + t^{v-1})` as a univariate
/// polynomial in `t`. This is the rank generating series of the cohomology
/// with `t` tracking one degree-4 step; its coefficient sum is `n!`.
pub fn q_factorial(n: usize) -> IntPolynomial {
    let mut result = IntPolynomial::one(1);
    for v in 2..=n {
        let factor = IntPolynomial::from_terms(
            1,
            (0..v as u32).map(|e| (Monomial::new(vec![e]), BigInt::from(1))),
        );
        result = result.mul(&factor);
    }
    result
}

/// Coefficient of `t^k` in `q`, for rank formulas.
pub fn coefficient_of_power(q: &IntPolynomial, k: u32) -> BigInt {
    assert_eq!(q.nvars(), 1, "expected a univariate polynomial");
    q.coefficient(&Monomial::new(vec![k]))
}
