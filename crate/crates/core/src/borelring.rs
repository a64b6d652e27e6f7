//! The quotient model of the ring: integer polynomials in `x_1..x_n` and
//! `u_1..u_n` modulo the relation `(1+x_1)...(1+x_n) = (1+u_1)...(1+u_n)`,
//! together with the evaluation onto the vertex model and a per-degree
//! integer isomorphism verification.
//!
//! Variable layout: a `BorelElement` over `n` lives in `2n` variables with
//! `x_nu` at index `nu - 1` and `u_j` at index `n + j - 1`. Evaluation at a
//! vertex `w` renames `x_nu -> u_{w(nu)}` and keeps every `u_j`; that this
//! is well defined on the quotient is exactly what the ideal-to-zero check
//! verifies.
//!
//! Equality in the quotient is decided through the evaluation map. That is
//! justified per degree, not assumed: `verify_isomorphism_degree` checks
//! over the integers that the Artin monomials inject onto a saturated
//! sublattice equal to the full graded component of the vertex model.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::binomial;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactpoly::{monomials_of_degree, IntPolynomial, Monomial};
use crate::flagcomb::{coefficient_of_power, q_factorial, Permutation};
use crate::gkmring::{graded_component, DegreeScale, GkmClass, GkmContext, GkmError};
use crate::intlinalg::IntMatrix;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BorelError {
    #[error(transparent)]
    Gkm(#[from] GkmError),
    #[error("element uses {got} variables, expected {expected} (x1..xn then u1..un)")]
    WrongArity { got: usize, expected: usize },
    #[error("representative is not homogeneous; split into components first")]
    Inhomogeneous,
    #[error("index {index} out of range 1..={n}")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("size mismatch: context has n = {expected}, element has n = {got}")]
    SizeMismatch { expected: usize, got: usize },
    #[error(
        "no integer coordinates: the evaluation of the element escapes the \
         Artin image in degree {degree}, an isomorphism verification gap"
    )]
    InconsistentSystem { degree: u32 },
}

/// An element of the quotient model, carried by a concrete representative
/// polynomial in the `2n` ambient variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BorelElement {
    n: usize,
    poly: IntPolynomial,
}

impl BorelElement {
    pub fn from_polynomial(n: usize, poly: IntPolynomial) -> Result<Self, BorelError> {
        if poly.nvars() != 2 * n {
            return Err(BorelError::WrongArity {
                got: poly.nvars(),
                expected: 2 * n,
            });
        }
        Ok(BorelElement { n, poly })
    }

    pub fn zero(n: usize) -> Self {
        BorelElement {
            n,
            poly: IntPolynomial::zero(2 * n),
        }
    }

    pub fn one(n: usize) -> Self {
        BorelElement {
            n,
            poly: IntPolynomial::one(2 * n),
        }
    }

    /// The generator `x_nu` (1-based).
    pub fn x(n: usize, nu: usize) -> Result<Self, BorelError> {
        if nu == 0 || nu > n {
            return Err(BorelError::IndexOutOfRange { index: nu, n });
        }
        Ok(BorelElement {
            n,
            poly: IntPolynomial::variable(2 * n, nu - 1).expect("index in range"),
        })
    }

    /// The coefficient variable `u_j` (1-based).
    pub fn u(n: usize, j: usize) -> Result<Self, BorelError> {
        if j == 0 || j > n {
            return Err(BorelError::IndexOutOfRange { index: j, n });
        }
        Ok(BorelElement {
            n,
            poly: IntPolynomial::variable(2 * n, n + j - 1).expect("index in range"),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn representative(&self) -> &IntPolynomial {
        &self.poly
    }

    pub fn is_zero(&self) -> bool {
        self.poly.is_zero()
    }

    pub fn homogeneous_degree(&self) -> Option<u32> {
        self.poly.homogeneous_degree()
    }

    fn assert_same_n(&self, other: &BorelElement) {
        assert_eq!(self.n, other.n, "mixing elements over different n");
    }

    pub fn add(&self, other: &BorelElement) -> BorelElement {
        self.assert_same_n(other);
        BorelElement {
            n: self.n,
            poly: self.poly.add(&other.poly),
        }
    }

    pub fn sub(&self, other: &BorelElement) -> BorelElement {
        self.assert_same_n(other);
        BorelElement {
            n: self.n,
            poly: self.poly.sub(&other.poly),
        }
    }

    pub fn mul(&self, other: &BorelElement) -> BorelElement {
        self.assert_same_n(other);
        BorelElement {
            n: self.n,
            poly: self.poly.mul(&other.poly),
        }
    }

    pub fn scale(&self, k: &BigInt) -> BorelElement {
        BorelElement {
            n: self.n,
            poly: self.poly.scale(k),
        }
    }

    /// Homogeneous pieces as elements, ascending in degree.
    pub fn homogeneous_components(&self) -> Vec<(u32, BorelElement)> {
        self.poly
            .homogeneous_components()
            .into_iter()
            .map(|(d, poly)| (d, BorelElement { n: self.n, poly }))
            .collect()
    }
}

impl fmt::Display for BorelElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.n;
        let name = move |i: usize| {
            if i < n {
                format!("x{}", i + 1)
            } else {
                format!("u{}", i - n + 1)
            }
        };
        write!(f, "{}", self.poly.to_string_with(&name))
    }
}

/// The `i`-th defining relation `e_i(x) - e_i(u)` (1-based), a graded piece
/// of `(1+x_1)...(1+x_n) = (1+u_1)...(1+u_n)`.
pub fn relation_generator(i: usize, n: usize) -> Result<BorelElement, BorelError> {
    if i == 0 || i > n {
        return Err(BorelError::IndexOutOfRange { index: i, n });
    }
    let x_vars: Vec<usize> = (0..n).collect();
    let u_vars: Vec<usize> = (n..2 * n).collect();
    let ex = IntPolynomial::elementary_symmetric(i, &x_vars, 2 * n).expect("indices in range");
    let eu = IntPolynomial::elementary_symmetric(i, &u_vars, 2 * n).expect("indices in range");
    Ok(BorelElement {
        n,
        poly: ex.sub(&eu),
    })
}

/// Evaluation onto the vertex model: at each vertex `w` substitute
/// `x_nu -> u_{w(nu)}` and keep the `u_j`. A ring homomorphism; the result
/// is validated as a class rather than trusted.
pub fn evaluate_to_gkm(e: &BorelElement, ctx: &Arc<GkmContext>) -> Result<GkmClass, BorelError> {
    let n = ctx.n();
    if e.n != n {
        return Err(BorelError::SizeMismatch {
            expected: n,
            got: e.n,
        });
    }
    if !e.poly.is_homogeneous() {
        return Err(BorelError::Inhomogeneous);
    }
    let candidate = ctx
        .vertices()
        .iter()
        .map(|w| {
            let mut map = Vec::with_capacity(2 * n);
            for nu in 0..n {
                map.push(w.apply(nu));
            }
            for j in 0..n {
                map.push(j);
            }
            (w.clone(), e.poly.rename_variables(n, &map))
        })
        .collect();
    Ok(GkmClass::new(ctx.clone(), &candidate)?)
}

/// Evaluation of an arbitrary element, one class per homogeneous piece.
pub fn evaluate_components(
    e: &BorelElement,
    ctx: &Arc<GkmContext>,
) -> Result<Vec<(u32, GkmClass)>, BorelError> {
    e.homogeneous_components()
        .into_iter()
        .map(|(d, piece)| Ok((d, evaluate_to_gkm(&piece, ctx)?)))
        .collect()
}

/// A basis monomial of the quotient: `x^a u^b` with `a_nu <= n - nu`
/// (1-based), any `b`. The bounded x-parts of weight `k` are counted by
/// the coefficient `c_k` of the q-factorial, which is where the rank
/// prediction comes from.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct ArtinMonomial {
    x_exp: Vec<u32>,
    u_exp: Vec<u32>,
}

impl ArtinMonomial {
    pub fn x_exp(&self) -> &[u32] {
        &self.x_exp
    }

    pub fn u_exp(&self) -> &[u32] {
        &self.u_exp
    }

    pub fn degree(&self) -> u32 {
        self.x_exp.iter().sum::<u32>() + self.u_exp.iter().sum::<u32>()
    }

    /// The underlying monomial in the `2n`-variable ambient ring.
    pub fn to_monomial(&self) -> Monomial {
        let mut exps = self.x_exp.clone();
        exps.extend_from_slice(&self.u_exp);
        Monomial::new(exps)
    }

    pub fn to_element(&self) -> BorelElement {
        let n = self.x_exp.len();
        BorelElement {
            n,
            poly: IntPolynomial::from_terms(2 * n, [(self.to_monomial(), BigInt::one())]),
        }
    }
}

impl fmt::Display for ArtinMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (i, &e) in self.x_exp.iter().enumerate() {
            match e {
                0 => {}
                1 => parts.push(format!("x{}", i + 1)),
                _ => parts.push(format!("x{}^{}", i + 1, e)),
            }
        }
        for (j, &e) in self.u_exp.iter().enumerate() {
            match e {
                0 => {}
                1 => parts.push(format!("u{}", j + 1)),
                _ => parts.push(format!("u{}^{}", j + 1, e)),
            }
        }
        if parts.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", parts.join("*"))
        }
    }
}

/// All bounded x-exponent vectors (`a_nu <= n - nu`, 1-based) of total
/// weight `k`.
fn bounded_x_parts(k: u32, n: usize) -> Vec<Vec<u32>> {
    fn rec(bounds: &[u32], remaining: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        match bounds.split_first() {
            None => {
                if remaining == 0 {
                    out.push(prefix.clone());
                }
            }
            Some((&b, rest)) => {
                for e in (0..=b.min(remaining)).rev() {
                    prefix.push(e);
                    rec(rest, remaining - e, prefix, out);
                    prefix.pop();
                }
            }
        }
    }
    let bounds: Vec<u32> = (0..n).map(|i| (n - 1 - i) as u32).collect();
    let mut out = Vec::new();
    rec(&bounds, k, &mut Vec::with_capacity(n), &mut out);
    out
}

/// All Artin monomials of total degree `d`, ordered by the graded-lex
/// order of their ambient `2n`-variable monomials.
pub fn artin_basis(d: u32, n: usize) -> Vec<ArtinMonomial> {
    let mut basis = Vec::new();
    for k in 0..=d {
        for x_exp in bounded_x_parts(k, n) {
            for u_mono in monomials_of_degree(d - k, n) {
                basis.push(ArtinMonomial {
                    x_exp: x_exp.clone(),
                    u_exp: u_mono.exps().to_vec(),
                });
            }
        }
    }
    basis.sort_by_key(ArtinMonomial::to_monomial);
    basis
}

/// Free-module prediction for both the Artin count and the vertex-model
/// graded rank: `sum_k c_k * C(d - k + n - 1, n - 1)` with `c_k` the
/// q-factorial coefficients.
pub fn predicted_graded_rank(n: usize, d: u32) -> BigInt {
    let q = q_factorial(n);
    let mut total = BigInt::zero();
    for k in 0..=d {
        let c = coefficient_of_power(&q, k);
        if c.is_zero() {
            continue;
        }
        total += c * binomial(BigInt::from(d - k + n as u32 - 1), BigInt::from(n - 1));
    }
    total
}

/// Per-degree verification result; `passed` is the conjunction the
/// isomorphism claim needs at this degree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct DegreeReport {
    pub n: usize,
    pub scale: DegreeScale,
    pub degree: u32,
    pub artin_rank: usize,
    pub gkm_rank: usize,
    pub injective: bool,
    pub surjective: bool,
    /// Smith invariant factors of the evaluation-image matrix, as decimal
    /// strings (all "1" exactly when the image is a saturated direct
    /// summand).
    pub invariant_factors: Vec<String>,
}

impl DegreeReport {
    pub fn passed(&self) -> bool {
        self.injective && self.surjective && self.invariant_factors.iter().all(|f| f == "1")
    }
}

/// The evaluation images of the degree-`d` Artin basis, as rows in the
/// vertex x monomial coordinate layout of [`graded_component`].
fn artin_image_matrix(
    basis: &[ArtinMonomial],
    monomials: &[Monomial],
    ctx: &Arc<GkmContext>,
) -> Result<IntMatrix, BorelError> {
    let cols = ctx.num_vertices() * monomials.len();
    let cells = basis.len() as u64 * cols as u64;
    if cells > ctx.budget_cells() {
        return Err(BorelError::Gkm(GkmError::BudgetExceeded {
            rows: basis.len() as u64,
            cols: cols as u64,
            budget: ctx.budget_cells(),
        }));
    }
    let rows: Vec<Vec<BigInt>> = basis
        .iter()
        .map(|b| {
            let class = evaluate_to_gkm(&b.to_element(), ctx)?;
            Ok(class.coefficient_vector(monomials))
        })
        .collect::<Result<_, BorelError>>()?;
    Ok(if rows.is_empty() {
        IntMatrix::zeros(0, cols)
    } else {
        IntMatrix::from_rows(rows)
    })
}

/// Checks, over the integers, that evaluation maps the degree-`d` slice of
/// the quotient isomorphically onto the degree-`d` component of the vertex
/// model: the Artin images must be linearly independent (injective), span
/// the same lattice as the component basis (surjective), and have all
/// Smith invariant factors equal to 1 (no torsion cokernel inside the
/// coefficient space).
pub fn verify_isomorphism_degree(d: u32, ctx: &Arc<GkmContext>) -> Result<DegreeReport, BorelError> {
    let n = ctx.n();
    let basis = artin_basis(d, n);
    let component = graded_component(d, ctx)?;
    let image = artin_image_matrix(&basis, &component.monomials, ctx)?;

    let injective = image.rank() == basis.len();
    let surjective = image.same_row_lattice(&component.basis);
    let invariant_factors = image
        .smith_invariants()
        .iter()
        .map(BigInt::to_string)
        .collect();

    Ok(DegreeReport {
        n,
        scale: ctx.scale(),
        degree: d,
        artin_rank: basis.len(),
        gkm_rank: component.rank,
        injective,
        surjective,
        invariant_factors,
    })
}

/// Integer coordinates of a homogeneous element in the Artin basis of its
/// degree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArtinExpansion {
    pub degree: u32,
    /// Nonzero coordinates only, in basis order.
    pub coordinates: Vec<(ArtinMonomial, BigInt)>,
}

impl ArtinExpansion {
    /// Re-expands the coordinates into an ambient representative.
    pub fn to_element(&self, n: usize) -> BorelElement {
        let mut sum = BorelElement::zero(n);
        for (mono, coeff) in &self.coordinates {
            sum = sum.add(&mono.to_element().scale(coeff));
        }
        sum
    }
}

/// Expresses a homogeneous element in the Artin basis by solving the
/// integer system `y * image = evaluation(e)` through the Hermite
/// transform. Solvability is exactly what the per-degree verification
/// guarantees; an inconsistency therefore reports a verification gap
/// instead of being papered over.
pub fn reduce_to_artin(e: &BorelElement, ctx: &Arc<GkmContext>) -> Result<ArtinExpansion, BorelError> {
    let n = ctx.n();
    if e.n != n {
        return Err(BorelError::SizeMismatch {
            expected: n,
            got: e.n,
        });
    }
    if e.is_zero() {
        return Ok(ArtinExpansion {
            degree: 0,
            coordinates: Vec::new(),
        });
    }
    let degree = e.poly.homogeneous_degree().ok_or(BorelError::Inhomogeneous)?;

    let basis = artin_basis(degree, n);
    let monomials = monomials_of_degree(degree, n);
    let image = artin_image_matrix(&basis, &monomials, ctx)?;
    let target = evaluate_to_gkm(e, ctx)?.coefficient_vector(&monomials);

    let y = solve_left(&image, &target).ok_or(BorelError::InconsistentSystem { degree })?;
    let coordinates = basis
        .into_iter()
        .zip(y)
        .filter(|(_, c)| !c.is_zero())
        .collect();
    Ok(ArtinExpansion {
        degree,
        coordinates,
    })
}

/// Solves `y * m = target` over the integers, if solvable: substitute
/// through the Hermite form (`t * m = h`, solve `z * h = target` down the
/// pivot staircase, then `y = z * t`).
fn solve_left(m: &IntMatrix, target: &[BigInt]) -> Option<Vec<BigInt>> {
    assert_eq!(m.ncols(), target.len(), "target length mismatch");
    let (h, t) = m.hermite_normal_form();
    let mut z = vec![BigInt::zero(); h.nrows()];
    let mut residual: Vec<BigInt> = target.to_vec();
    for i in 0..h.nrows() {
        let Some(lead) = (0..h.ncols()).find(|&j| !h[(i, j)].is_zero()) else {
            break; // zero rows are at the bottom
        };
        let (quot, rem) = num_integer::Integer::div_rem(&residual[lead], &h[(i, lead)]);
        if !rem.is_zero() {
            return None;
        }
        if quot.is_zero() {
            continue;
        }
        for j in 0..h.ncols() {
            let sub = &quot * &h[(i, j)];
            residual[j] -= sub;
        }
        z[i] = quot;
    }
    if residual.iter().any(|r| !r.is_zero()) {
        return None;
    }
    // y = z * t
    let mut y = vec![BigInt::zero(); t.ncols()];
    for (i, zi) in z.iter().enumerate() {
        if zi.is_zero() {
            continue;
        }
        for (j, yj) in y.iter_mut().enumerate() {
            *yj += zi * &t[(i, j)];
        }
    }
    // full re-check against the original matrix
    let mut check = vec![BigInt::zero(); m.ncols()];
    for (i, yi) in y.iter().enumerate() {
        if yi.is_zero() {
            continue;
        }
        for (j, cj) in check.iter_mut().enumerate() {
            *cj += yi * &m[(i, j)];
        }
    }
    if check != target {
        return None;
    }
    Some(y)
}

/// Convenience for tests and reports: the canonical image of a vertex's
/// restriction pattern, `x_nu` evaluated at `w`, is `u_{w(nu)}`.
pub fn canonical_restriction(w: &Permutation, nu: usize) -> Result<usize, BorelError> {
    if nu == 0 || nu > w.n() {
        return Err(BorelError::IndexOutOfRange { index: nu, n: w.n() });
    }
    Ok(w.apply(nu - 1) + 1)
}
