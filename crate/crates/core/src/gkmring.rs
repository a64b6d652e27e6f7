//! The vertex model of the equivariant cohomology ring: tuples of integer
//! polynomials indexed by permutations, with `u_p - u_q` dividing the
//! difference across every moment-graph edge.
//!
//! A [`GkmContext`] fixes the graph (vertices, edges, weight convention)
//! and the degree scale: each polynomial degree is worth 4 cohomological
//! degrees over the quaternionic flags and 2 over the complex ones. The
//! graph and all constraints are identical for both scales; only the
//! degree labelling changes, and a test pins that.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use serde::de::Error as _;
use serde::ser::SerializeMap;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::exactpoly::{monomials_of_degree, IntPolynomial, Monomial};
use crate::flagcomb::{
    all_permutations, descent_pairs, descent_pairs_from_heights, gkm_edges, EdgeConvention,
    FlagError, HeightParams, Permutation,
};
use crate::intlinalg::IntMatrix;

/// Default ceiling on constraint-matrix size (rows times columns).
pub const DEFAULT_BUDGET_CELLS: u64 = 50_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GkmError {
    #[error(transparent)]
    Flag(#[from] FlagError),
    #[error("no restriction supplied for vertex {0}")]
    MissingVertex(String),
    #[error("restriction key {0} is not a vertex of this context")]
    UnknownVertex(String),
    #[error("restriction at {vertex} uses {got} variables, expected {expected}")]
    WrongArity {
        vertex: String,
        got: usize,
        expected: usize,
    },
    #[error("restrictions are not homogeneous of one common degree")]
    Inhomogeneous,
    #[error("divisibility fails on {} edge(s), first at {first}", violations.len())]
    NotGkm {
        violations: Vec<EdgeViolation>,
        first: String,
    },
    #[error("class index {index} out of range 1..={n}")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("operands come from different contexts")]
    ContextMismatch,
    #[error("cannot add classes of polynomial degrees {left} and {right}")]
    DegreeMismatch { left: u32, right: u32 },
    #[error("size mismatch: context has n = {expected}, argument has n = {got}")]
    SizeMismatch { expected: usize, got: usize },
    #[error("weight vector at position {position} is zero (a fixed vector exists)")]
    ZeroWeight { position: usize },
    #[error("weight vector at position {position} has {got} entries, expected {expected}")]
    WeightLength {
        position: usize,
        got: usize,
        expected: usize,
    },
    #[error("constraint matrix of {rows} x {cols} cells exceeds the budget of {budget}")]
    BudgetExceeded { rows: u64, cols: u64, budget: u64 },
    #[error("n must be at least 1")]
    EmptyContext,
}

/// Cohomological degrees carried by one polynomial degree: 4 for the
/// quaternionic flag manifold, 2 for the complex one. The constraint
/// systems agree; only degree labels differ.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "u8", try_from = "u8")]
pub enum DegreeScale {
    Four,
    Two,
}

impl DegreeScale {
    pub fn per_polynomial_degree(self) -> u32 {
        match self {
            DegreeScale::Four => 4,
            DegreeScale::Two => 2,
        }
    }
}

impl From<DegreeScale> for u8 {
    fn from(s: DegreeScale) -> u8 {
        s.per_polynomial_degree() as u8
    }
}

impl TryFrom<u8> for DegreeScale {
    type Error = String;
    fn try_from(v: u8) -> Result<Self, String> {
        match v {
            4 => Ok(DegreeScale::Four),
            2 => Ok(DegreeScale::Two),
            other => Err(format!("degree scale must be 2 or 4, got {other}")),
        }
    }
}

/// An edge with endpoints resolved to vertex indices; `v < w` in the
/// context's vertex order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IndexedEdge {
    pub v: usize,
    pub w: usize,
    pub p: usize,
    pub q: usize,
}

/// An edge on which the divisibility condition failed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeViolation {
    pub v: Permutation,
    pub w: Permutation,
    pub p: usize,
    pub q: usize,
}

impl fmt::Display for EdgeViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{{{}, {}}} with weight u{} - u{}",
            self.v,
            self.w,
            self.p + 1,
            self.q + 1
        )
    }
}

/// The moment graph with a fixed degree scale and weight convention;
/// immutable after construction and shared by the classes built over it.
#[derive(Debug)]
pub struct GkmContext {
    n: usize,
    scale: DegreeScale,
    convention: EdgeConvention,
    vertices: Vec<Permutation>,
    index: BTreeMap<Permutation, usize>,
    edges: Vec<IndexedEdge>,
    budget_cells: u64,
}

impl GkmContext {
    pub fn new(n: usize, scale: DegreeScale) -> Result<Arc<Self>, GkmError> {
        GkmContext::with_convention(n, scale, EdgeConvention::Left)
    }

    pub fn with_convention(
        n: usize,
        scale: DegreeScale,
        convention: EdgeConvention,
    ) -> Result<Arc<Self>, GkmError> {
        if n == 0 {
            return Err(GkmError::EmptyContext);
        }
        let vertices = all_permutations(n)?;
        let index: BTreeMap<Permutation, usize> = vertices
            .iter()
            .enumerate()
            .map(|(i, w)| (w.clone(), i))
            .collect();
        let edges = gkm_edges(n, convention)?
            .into_iter()
            .map(|e| IndexedEdge {
                v: index[&e.v],
                w: index[&e.w],
                p: e.p,
                q: e.q,
            })
            .collect();
        Ok(Arc::new(GkmContext {
            n,
            scale,
            convention,
            vertices,
            index,
            edges,
            budget_cells: DEFAULT_BUDGET_CELLS,
        }))
    }

    pub fn with_budget(self: &Arc<Self>, budget_cells: u64) -> Arc<Self> {
        Arc::new(GkmContext {
            n: self.n,
            scale: self.scale,
            convention: self.convention,
            vertices: self.vertices.clone(),
            index: self.index.clone(),
            edges: self.edges.clone(),
            budget_cells,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn scale(&self) -> DegreeScale {
        self.scale
    }

    pub fn convention(&self) -> EdgeConvention {
        self.convention
    }

    pub fn vertices(&self) -> &[Permutation] {
        &self.vertices
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn edges(&self) -> &[IndexedEdge] {
        &self.edges
    }

    pub fn vertex_index(&self, w: &Permutation) -> Option<usize> {
        self.index.get(w).copied()
    }

    pub fn budget_cells(&self) -> u64 {
        self.budget_cells
    }

    fn same_graph(&self, other: &GkmContext) -> bool {
        self.n == other.n && self.scale == other.scale && self.convention == other.convention
    }
}

/// Checks every edge of the context against a full tuple of restrictions.
/// Empty result means the tuple is a class.
fn edge_violations(ctx: &GkmContext, restrictions: &[IntPolynomial]) -> Vec<EdgeViolation> {
    let mut violations = Vec::new();
    for e in &ctx.edges {
        let diff = restrictions[e.v].sub(&restrictions[e.w]);
        let divisible = diff
            .div_by_var_difference(e.p, e.q)
            .expect("edge indices are valid for the context")
            .is_some();
        if !divisible {
            violations.push(EdgeViolation {
                v: ctx.vertices[e.v].clone(),
                w: ctx.vertices[e.w].clone(),
                p: e.p,
                q: e.q,
            });
        }
    }
    violations
}

/// Resolves a candidate map to the context's vertex order and finds the
/// common homogeneous degree (`None` for the all-zero tuple).
fn resolve_candidate(
    candidate: &BTreeMap<Permutation, IntPolynomial>,
    ctx: &GkmContext,
) -> Result<(Vec<IntPolynomial>, Option<u32>), GkmError> {
    for key in candidate.keys() {
        if ctx.vertex_index(key).is_none() {
            return Err(GkmError::UnknownVertex(key.to_string()));
        }
    }
    let mut restrictions = Vec::with_capacity(ctx.num_vertices());
    let mut degree: Option<u32> = None;
    for w in &ctx.vertices {
        let f = candidate
            .get(w)
            .ok_or_else(|| GkmError::MissingVertex(w.to_string()))?;
        if f.nvars() != ctx.n {
            return Err(GkmError::WrongArity {
                vertex: w.to_string(),
                got: f.nvars(),
                expected: ctx.n,
            });
        }
        if !f.is_zero() {
            let d = f.homogeneous_degree().ok_or(GkmError::Inhomogeneous)?;
            match degree {
                None => degree = Some(d),
                Some(existing) if existing != d => return Err(GkmError::Inhomogeneous),
                Some(_) => {}
            }
        }
        restrictions.push(f.clone());
    }
    Ok((restrictions, degree))
}

/// Membership test: errors on malformed input (missing vertex, wrong
/// arity, inhomogeneous), otherwise returns the violated edges; empty
/// means the candidate is a class.
pub fn is_gkm_class(
    candidate: &BTreeMap<Permutation, IntPolynomial>,
    ctx: &GkmContext,
) -> Result<Vec<EdgeViolation>, GkmError> {
    let (restrictions, _) = resolve_candidate(candidate, ctx)?;
    Ok(edge_violations(ctx, &restrictions))
}

/// A validated element of the vertex model: one homogeneous polynomial per
/// vertex, differences divisible along every edge.
#[derive(Debug, Clone)]
pub struct GkmClass {
    ctx: Arc<GkmContext>,
    /// `None` exactly for the zero class.
    degree: Option<u32>,
    /// Indexed by the context's vertex order.
    restrictions: Vec<IntPolynomial>,
}

impl PartialEq for GkmClass {
    fn eq(&self, other: &Self) -> bool {
        self.ctx.same_graph(&other.ctx) && self.restrictions == other.restrictions
    }
}

impl Eq for GkmClass {}

impl GkmClass {
    /// Validating constructor from a full vertex map.
    pub fn new(
        ctx: Arc<GkmContext>,
        candidate: &BTreeMap<Permutation, IntPolynomial>,
    ) -> Result<Self, GkmError> {
        let (restrictions, degree) = resolve_candidate(candidate, &ctx)?;
        let violations = edge_violations(&ctx, &restrictions);
        if !violations.is_empty() {
            let first = violations[0].to_string();
            return Err(GkmError::NotGkm { violations, first });
        }
        Ok(GkmClass {
            ctx,
            degree,
            restrictions,
        })
    }

    /// Internal constructor for results of operations that preserve
    /// membership by construction; re-validated in debug builds.
    fn from_closed_parts(
        ctx: Arc<GkmContext>,
        degree: Option<u32>,
        restrictions: Vec<IntPolynomial>,
    ) -> Self {
        debug_assert!(
            edge_violations(&ctx, &restrictions).is_empty(),
            "operation left the ring: convention drift between modules"
        );
        GkmClass {
            ctx,
            degree,
            restrictions,
        }
    }

    pub fn zero(ctx: Arc<GkmContext>) -> Self {
        let n = ctx.n();
        let restrictions = vec![IntPolynomial::zero(n); ctx.num_vertices()];
        GkmClass {
            ctx,
            degree: None,
            restrictions,
        }
    }

    /// The class with the same polynomial at every vertex. Must be
    /// homogeneous; differences vanish, so membership is automatic.
    pub fn constant(ctx: Arc<GkmContext>, value: IntPolynomial) -> Result<Self, GkmError> {
        if value.nvars() != ctx.n() {
            return Err(GkmError::WrongArity {
                vertex: "all".to_string(),
                got: value.nvars(),
                expected: ctx.n(),
            });
        }
        if value.is_zero() {
            return Ok(GkmClass::zero(ctx));
        }
        let degree = value.homogeneous_degree().ok_or(GkmError::Inhomogeneous)?;
        let restrictions = vec![value; ctx.num_vertices()];
        Ok(GkmClass::from_closed_parts(ctx, Some(degree), restrictions))
    }

    pub fn context(&self) -> &Arc<GkmContext> {
        &self.ctx
    }

    /// Common polynomial degree; `None` for the zero class.
    pub fn degree(&self) -> Option<u32> {
        self.degree
    }

    pub fn cohomological_degree(&self) -> Option<u32> {
        self.degree
            .map(|d| d * self.ctx.scale().per_polynomial_degree())
    }

    pub fn is_zero(&self) -> bool {
        self.degree.is_none()
    }

    pub fn restriction(&self, w: &Permutation) -> Option<&IntPolynomial> {
        self.ctx.vertex_index(w).map(|i| &self.restrictions[i])
    }

    pub fn restriction_at(&self, vertex_index: usize) -> &IntPolynomial {
        &self.restrictions[vertex_index]
    }

    pub fn restrictions(&self) -> &[IntPolynomial] {
        &self.restrictions
    }

    /// Vertex-wise sum. The degrees must agree (the zero class is neutral).
    pub fn pointwise_add(&self, other: &GkmClass) -> Result<GkmClass, GkmError> {
        if !self.ctx.same_graph(&other.ctx) {
            return Err(GkmError::ContextMismatch);
        }
        let degree = match (self.degree, other.degree) {
            (Some(a), Some(b)) if a != b => {
                return Err(GkmError::DegreeMismatch { left: a, right: b })
            }
            (a, b) => a.or(b),
        };
        let restrictions: Vec<IntPolynomial> = self
            .restrictions
            .iter()
            .zip(&other.restrictions)
            .map(|(a, b)| a.add(b))
            .collect();
        // cancellation can produce the zero class regardless of inputs
        let degree = if restrictions.iter().all(IntPolynomial::is_zero) {
            None
        } else {
            degree
        };
        Ok(GkmClass::from_closed_parts(
            self.ctx.clone(),
            degree,
            restrictions,
        ))
    }

    /// Vertex-wise product; degrees add.
    pub fn pointwise_mul(&self, other: &GkmClass) -> Result<GkmClass, GkmError> {
        if !self.ctx.same_graph(&other.ctx) {
            return Err(GkmError::ContextMismatch);
        }
        let degree = match (self.degree, other.degree) {
            (Some(a), Some(b)) => Some(a + b),
            _ => None,
        };
        let restrictions: Vec<IntPolynomial> = self
            .restrictions
            .iter()
            .zip(&other.restrictions)
            .map(|(a, b)| a.mul(b))
            .collect();
        Ok(GkmClass::from_closed_parts(
            self.ctx.clone(),
            degree,
            restrictions,
        ))
    }

    /// Coefficients of all restrictions against a fixed monomial list, in
    /// the layout `vertex_index * monomials.len() + monomial_index` shared
    /// with [`graded_component`].
    pub fn coefficient_vector(&self, monomials: &[Monomial]) -> Vec<BigInt> {
        let mut out = Vec::with_capacity(self.restrictions.len() * monomials.len());
        for f in &self.restrictions {
            for m in monomials {
                out.push(f.coefficient(m));
            }
        }
        out
    }
}

impl Serialize for GkmClass {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(3))?;
        map.serialize_entry("n", &self.ctx.n())?;
        map.serialize_entry("scale", &self.ctx.scale())?;
        let restrictions: BTreeMap<String, &IntPolynomial> = self
            .ctx
            .vertices()
            .iter()
            .zip(&self.restrictions)
            .map(|(w, f)| (w.to_string(), f))
            .collect();
        map.serialize_entry("restrictions", &restrictions)?;
        map.end()
    }
}

impl<'de> Deserialize<'de> for GkmClass {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Repr {
            n: usize,
            scale: DegreeScale,
            restrictions: BTreeMap<String, serde_json::Value>,
        }
        let repr = Repr::deserialize(deserializer)?;
        let ctx = GkmContext::new(repr.n, repr.scale).map_err(D::Error::custom)?;
        let mut candidate = BTreeMap::new();
        for (key, value) in repr.restrictions {
            let one_line: Vec<usize> = serde_json::from_str(&key)
                .map_err(|e| D::Error::custom(format!("bad vertex key {key}: {e}")))?;
            let w = Permutation::from_one_line(&one_line).map_err(D::Error::custom)?;
            // an empty term array cannot carry its arity; supply it
            let poly = if value.as_array().is_some_and(Vec::is_empty) {
                IntPolynomial::zero(repr.n)
            } else {
                serde_json::from_value(value).map_err(D::Error::custom)?
            };
            candidate.insert(w, poly);
        }
        GkmClass::new(ctx, &candidate).map_err(D::Error::custom)
    }
}

/// The class restricting to `u_{w(nu)}` at each vertex `w` (`nu` is
/// 1-based). These generate the ring over the constants; membership is
/// what singles out the left weight convention.
pub fn canonical_class(nu: usize, ctx: &Arc<GkmContext>) -> Result<GkmClass, GkmError> {
    let n = ctx.n();
    if nu == 0 || nu > n {
        return Err(GkmError::IndexOutOfRange { index: nu, n });
    }
    let candidate: BTreeMap<Permutation, IntPolynomial> = ctx
        .vertices()
        .iter()
        .map(|w| {
            let poly = IntPolynomial::variable(n, w.apply(nu - 1))
                .expect("vertex values are in range");
            (w.clone(), poly)
        })
        .collect();
    GkmClass::new(ctx.clone(), &candidate)
}

/// Euler class of the descending directions at the critical point `w`:
/// the product of `u_p - u_q` over the descending pairs read off the
/// height function. Polynomial degree equals the number of descending
/// edges (a quarter of the Morse index); never zero, and the factors are
/// pairwise coprime because the pairs are distinct.
pub fn negative_euler_class(
    w: &Permutation,
    params: &HeightParams,
    ctx: &GkmContext,
) -> Result<IntPolynomial, GkmError> {
    if w.n() != ctx.n() || params.n() != ctx.n() {
        return Err(GkmError::SizeMismatch {
            expected: ctx.n(),
            got: if w.n() != ctx.n() { w.n() } else { params.n() },
        });
    }
    let pairs = descent_pairs_from_heights(w, params)?;
    debug_assert_eq!(pairs, descent_pairs(w), "height route disagrees");
    let n = ctx.n();
    let mut product = IntPolynomial::one(n);
    for (p, q) in pairs {
        let factor = IntPolynomial::variable(n, p)
            .expect("index in range")
            .sub(&IntPolynomial::variable(n, q).expect("index in range"));
        product = product.mul(&factor);
    }
    Ok(product)
}

/// Product of the linear forms `sum_i weight_i * u_i`, one per listed
/// weight. A zero weight vector is rejected: it flags a fixed vector, and
/// the product would degenerate. Nonzero weights always give a nonzero
/// product (the polynomial ring is a domain).
pub fn weight_product_euler(
    nvars: usize,
    weights: &[Vec<i64>],
) -> Result<IntPolynomial, GkmError> {
    let mut product = IntPolynomial::one(nvars);
    for (position, weight) in weights.iter().enumerate() {
        if weight.len() != nvars {
            return Err(GkmError::WeightLength {
                position,
                got: weight.len(),
                expected: nvars,
            });
        }
        if weight.iter().all(|&c| c == 0) {
            return Err(GkmError::ZeroWeight { position });
        }
        let form = IntPolynomial::from_terms(
            nvars,
            weight.iter().enumerate().filter(|(_, &c)| c != 0).map(|(i, &c)| {
                (Monomial::variable(nvars, i), BigInt::from(c))
            }),
        );
        product = product.mul(&form);
    }
    Ok(product)
}

/// A graded piece of the vertex model, computed as an integer kernel.
#[derive(Debug, Clone)]
pub struct GradedComponent {
    pub degree: u32,
    /// Degree-`d` monomials in graded-lex order; fixes the column layout
    /// `vertex_index * monomials.len() + monomial_index`.
    pub monomials: Vec<Monomial>,
    /// Rows form a saturated lattice basis of the component inside the
    /// coefficient space of all tuples.
    pub basis: IntMatrix,
    pub rank: usize,
}

/// Computes the degree-`d` component by linearizing each edge condition:
/// substituting `u_p -> u_q` into `f_v - f_w` must give zero, which is one
/// linear constraint per substituted monomial. The returned basis is the
/// saturated kernel lattice of the stacked constraints.
pub fn graded_component(d: u32, ctx: &GkmContext) -> Result<GradedComponent, GkmError> {
    let n = ctx.n();
    let monomials = monomials_of_degree(d, n);
    let num_mono = monomials.len();
    let cols = ctx.num_vertices() * num_mono;

    // Substituting u_p -> u_q maps degree-d monomials onto those with zero
    // exponent at p; count them once for the budget bound (independent of
    // which pair (p,q) an edge carries).
    let rows_per_edge = monomials.iter().filter(|m| m.exp(0) == 0).count();
    let rows = ctx.edges().len() * rows_per_edge;
    let cells = rows as u64 * cols as u64;
    if cells > ctx.budget_cells() {
        return Err(GkmError::BudgetExceeded {
            rows: rows as u64,
            cols: cols as u64,
            budget: ctx.budget_cells(),
        });
    }

    let mono_index: BTreeMap<&Monomial, usize> =
        monomials.iter().enumerate().map(|(i, m)| (m, i)).collect();

    let mut constraints = IntMatrix::zeros(rows, cols);
    let mut row = 0;
    for e in ctx.edges() {
        // rows of this edge, grouped by substituted monomial
        let mut by_target: BTreeMap<Monomial, Vec<(usize, i64)>> = BTreeMap::new();
        for (m_idx, m) in monomials.iter().enumerate() {
            let mut exps = m.exps().to_vec();
            exps[e.q] += exps[e.p];
            exps[e.p] = 0;
            let target = Monomial::new(exps);
            let entry = by_target.entry(target).or_default();
            entry.push((e.v * num_mono + m_idx, 1));
            entry.push((e.w * num_mono + m_idx, -1));
        }
        for (_, entries) in by_target {
            for (col, sign) in entries {
                constraints[(row, col)] += BigInt::from(sign);
            }
            row += 1;
        }
    }
    debug_assert_eq!(row, rows);

    let basis = constraints.kernel_basis();
    let rank = basis.nrows();
    let _ = mono_index; // layout documented via monomials; map kept for clarity of intent
    Ok(GradedComponent {
        degree: d,
        monomials,
        basis,
        rank,
    })
}
