//! Double-precision quaternionic matrix geometry on the isospectral orbit
//! `Sp(n) . Diag(r_1, ..., r_n)` inside the traceless hermitian matrices.
//!
//! Everything here is a numeric counterpart to the exact combinatorics:
//! permutation diagonals are the critical points of the height function
//! `h_A(X) = <A, X>`, the Hessian index at a diagonal is four times its
//! coinversion count, the curvature spheres along the moment-graph edges
//! are round 4-spheres whose meridians are gradient lines, and the fixed
//! lines of the diagonal torus have one-coordinate support. The checks
//! compute each statement with floating-point matrices and report
//! residuals against pinned tolerances.
//!
//! Position convention: spheres and rotation blocks are indexed by matrix
//! position pairs `(p, q)` (0-based). The antipodal pole of `w` across the
//! `(p, q)` sphere is `w` with the values at positions `p` and `q`
//! swapped; the corresponding height drop is `edge_height_drop` at the
//! value pair `(w(p), w(q))`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::DMatrix;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::flagcomb::{
    all_permutations, edge_height_drop, morse_index, HeightParams, Permutation,
};

/// Gradient norms at exact critical points must vanish to this tolerance.
pub const TOL_CRITICAL_GRADIENT: f64 = 1e-9;
/// Gradient components orthogonal to a sphere must vanish to this tolerance.
pub const TOL_TANGENCY: f64 = 1e-8;
/// Hessian eigenvalues closer to zero than this are treated as a
/// non-genericity signal rather than silently sign-classified.
pub const TOL_EIGEN_SEPARATION: f64 = 1e-6;
/// Products and adjoints of symplectic samples must close to this tolerance.
pub const TOL_SYMPLECTIC: f64 = 1e-12;
/// Spectra computed through the real embedding match to this tolerance.
pub const TOL_SPECTRUM: f64 = 1e-8;
/// Away from the poles (polar angle in `[0.2, pi - 0.2]`) the gradient of
/// the standard height stays above this floor; used to confirm that the
/// critical set is exactly the permutation diagonals.
pub const GRADIENT_FLOOR: f64 = 1e-3;

/// Relative threshold below which a Gram-Schmidt residual counts as zero.
const FRAME_DROP_RATIO: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum QuatError {
    #[error("shape mismatch: {left}x{left} vs {right}x{right}")]
    ShapeMismatch { left: usize, right: usize },
    #[error("axis quaternion has norm {norm}, expected a unit quaternion")]
    NonUnitAxis { norm: f64 },
    #[error("positions ({p}, {q}) invalid for n = {n}")]
    InvalidPair { p: usize, q: usize, n: usize },
    #[error("size mismatch: expected {expected}, got {got}")]
    SizeMismatch { expected: usize, got: usize },
    #[error("spectrum entries {i} and {j} coincide; the orbit needs distinct eigenvalues")]
    DuplicateEigenvalue { i: usize, j: usize },
    #[error("spectrum sums to {sum}, expected a traceless point")]
    NotTraceless { sum: f64 },
    #[error("zero vector has no line to test")]
    ZeroVector,
    #[error("tangent frame has rank {found}, expected {expected}; spectrum too degenerate")]
    DegenerateFrame { expected: usize, found: usize },
    #[error("Hessian eigenvalue {value} within {tol} of zero; parameters not generic enough")]
    NearZeroEigenvalue { value: f64, tol: f64 },
    #[error("pole is not the upper end of the ({p}, {q}) sphere; its meridians flow in")]
    PoleNotUpper { p: usize, q: usize },
    #[error("height parameter does not fit in double precision")]
    NonFiniteParameter,
}

// --- quaternions ---------------------------------------------------------

/// `a + b i + c j + d k` with `i^2 = j^2 = k^2 = ijk = -1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quaternion {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

impl Quaternion {
    pub const fn new(a: f64, b: f64, c: f64, d: f64) -> Self {
        Quaternion { a, b, c, d }
    }

    pub const fn zero() -> Self {
        Quaternion::new(0.0, 0.0, 0.0, 0.0)
    }

    pub const fn one() -> Self {
        Quaternion::new(1.0, 0.0, 0.0, 0.0)
    }

    pub const fn i() -> Self {
        Quaternion::new(0.0, 1.0, 0.0, 0.0)
    }

    pub const fn j() -> Self {
        Quaternion::new(0.0, 0.0, 1.0, 0.0)
    }

    pub const fn k() -> Self {
        Quaternion::new(0.0, 0.0, 0.0, 1.0)
    }

    pub const fn real(a: f64) -> Self {
        Quaternion::new(a, 0.0, 0.0, 0.0)
    }

    pub fn conj(self) -> Self {
        Quaternion::new(self.a, -self.b, -self.c, -self.d)
    }

    pub fn norm_sq(self) -> f64 {
        self.a * self.a + self.b * self.b + self.c * self.c + self.d * self.d
    }

    pub fn norm(self) -> f64 {
        self.norm_sq().sqrt()
    }

    pub fn scale(self, t: f64) -> Self {
        Quaternion::new(self.a * t, self.b * t, self.c * t, self.d * t)
    }

    /// `q^{-1} = conj(q) / |q|^2`; caller guarantees `q != 0`.
    pub fn inverse(self) -> Self {
        let n = self.norm_sq();
        assert!(n > 0.0, "inverse of the zero quaternion");
        self.conj().scale(1.0 / n)
    }

    pub fn is_zero(self) -> bool {
        self.a == 0.0 && self.b == 0.0 && self.c == 0.0 && self.d == 0.0
    }

    /// The left-regular representation on `(a, b, c, d)` coordinates;
    /// multiplication-compatible and transposes to the conjugate.
    pub fn real_block(self) -> [[f64; 4]; 4] {
        let Quaternion { a, b, c, d } = self;
        [
            [a, -b, -c, -d],
            [b, a, -d, c],
            [c, d, a, -b],
            [d, -c, b, a],
        ]
    }
}

impl Add for Quaternion {
    type Output = Quaternion;
    fn add(self, o: Quaternion) -> Quaternion {
        Quaternion::new(self.a + o.a, self.b + o.b, self.c + o.c, self.d + o.d)
    }
}

impl Sub for Quaternion {
    type Output = Quaternion;
    fn sub(self, o: Quaternion) -> Quaternion {
        Quaternion::new(self.a - o.a, self.b - o.b, self.c - o.c, self.d - o.d)
    }
}

impl Neg for Quaternion {
    type Output = Quaternion;
    fn neg(self) -> Quaternion {
        Quaternion::new(-self.a, -self.b, -self.c, -self.d)
    }
}

impl Mul for Quaternion {
    type Output = Quaternion;
    fn mul(self, o: Quaternion) -> Quaternion {
        Quaternion::new(
            self.a * o.a - self.b * o.b - self.c * o.c - self.d * o.d,
            self.a * o.b + self.b * o.a + self.c * o.d - self.d * o.c,
            self.a * o.c - self.b * o.d + self.c * o.a + self.d * o.b,
            self.a * o.d + self.b * o.c - self.c * o.b + self.d * o.a,
        )
    }
}

impl fmt::Display for Quaternion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + {}i + {}j + {}k", self.a, self.b, self.c, self.d)
    }
}

// --- quaternion matrices --------------------------------------------------

/// Square quaternion matrix, row-major. Hermitian/symplectic properties are
/// checked per use through the defect helpers, not carried by the type.
#[derive(Debug, Clone, PartialEq)]
pub struct QuatMatrix {
    n: usize,
    entries: Vec<Quaternion>,
}

impl QuatMatrix {
    pub fn zeros(n: usize) -> Self {
        QuatMatrix {
            n,
            entries: vec![Quaternion::zero(); n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = QuatMatrix::zeros(n);
        for p in 0..n {
            m[(p, p)] = Quaternion::one();
        }
        m
    }

    pub fn diagonal(values: &[f64]) -> Self {
        let mut m = QuatMatrix::zeros(values.len());
        for (p, &v) in values.iter().enumerate() {
            m[(p, p)] = Quaternion::real(v);
        }
        m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn add(&self, o: &QuatMatrix) -> QuatMatrix {
        assert_eq!(self.n, o.n, "shape mismatch");
        QuatMatrix {
            n: self.n,
            entries: self
                .entries
                .iter()
                .zip(&o.entries)
                .map(|(&a, &b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, o: &QuatMatrix) -> QuatMatrix {
        assert_eq!(self.n, o.n, "shape mismatch");
        QuatMatrix {
            n: self.n,
            entries: self
                .entries
                .iter()
                .zip(&o.entries)
                .map(|(&a, &b)| a - b)
                .collect(),
        }
    }

    pub fn scale(&self, t: f64) -> QuatMatrix {
        QuatMatrix {
            n: self.n,
            entries: self.entries.iter().map(|&a| a.scale(t)).collect(),
        }
    }

    pub fn mul(&self, o: &QuatMatrix) -> QuatMatrix {
        assert_eq!(self.n, o.n, "shape mismatch");
        let n = self.n;
        let mut out = QuatMatrix::zeros(n);
        for p in 0..n {
            for c in 0..n {
                let x = self[(p, c)];
                if x.is_zero() {
                    continue;
                }
                for q in 0..n {
                    out[(p, q)] = out[(p, q)] + x * o[(c, q)];
                }
            }
        }
        out
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> QuatMatrix {
        let n = self.n;
        let mut out = QuatMatrix::zeros(n);
        for p in 0..n {
            for q in 0..n {
                out[(q, p)] = self[(p, q)].conj();
            }
        }
        out
    }

    pub fn trace(&self) -> Quaternion {
        (0..self.n).fold(Quaternion::zero(), |acc, p| acc + self[(p, p)])
    }

    pub fn commutator(&self, o: &QuatMatrix) -> QuatMatrix {
        self.mul(o).sub(&o.mul(self))
    }

    /// `U X U*`.
    pub fn conjugate_by(&self, u: &QuatMatrix) -> QuatMatrix {
        u.mul(self).mul(&u.adjoint())
    }

    /// Largest entry norm of `X - X*`; zero exactly for hermitian matrices.
    pub fn hermitian_defect(&self) -> f64 {
        let mut worst = 0.0f64;
        for p in 0..self.n {
            for q in 0..self.n {
                worst = worst.max((self[(p, q)] - self[(q, p)].conj()).norm());
            }
        }
        worst
    }

    /// Frobenius distance of `A A*` from the identity; zero exactly on
    /// symplectic matrices.
    pub fn symplectic_defect(&self) -> f64 {
        let prod = self.mul(&self.adjoint());
        prod.sub(&QuatMatrix::identity(self.n)).frobenius_norm()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.entries
            .iter()
            .map(|e| e.norm_sq())
            .sum::<f64>()
            .sqrt()
    }

    /// The real `4n x 4n` matrix acting on `H^n` read as `R^{4n}`. Hermitian
    /// input gives a symmetric output whose eigenvalues are the right
    /// eigenvalues of the quaternion matrix, each with multiplicity four.
    pub fn real_embedding(&self) -> DMatrix<f64> {
        let n = self.n;
        let mut m = DMatrix::<f64>::zeros(4 * n, 4 * n);
        for p in 0..n {
            for q in 0..n {
                let block = self[(p, q)].real_block();
                for (bi, row) in block.iter().enumerate() {
                    for (bj, &v) in row.iter().enumerate() {
                        m[(4 * p + bi, 4 * q + bj)] = v;
                    }
                }
            }
        }
        m
    }

    /// Ascending real spectrum through the embedding, one value per
    /// four-fold eigenvalue; caller must pass a hermitian matrix.
    pub fn hermitian_spectrum(&self) -> Vec<f64> {
        let eigen = nalgebra::linalg::SymmetricEigen::new(self.real_embedding());
        let mut all: Vec<f64> = eigen.eigenvalues.iter().copied().collect();
        all.sort_by(|x, y| x.partial_cmp(y).expect("finite eigenvalues"));
        // collapse the four-fold multiplicity by striding
        (0..self.n).map(|p| all[4 * p]).collect()
    }
}

impl std::ops::Index<(usize, usize)> for QuatMatrix {
    type Output = Quaternion;
    fn index(&self, (p, q): (usize, usize)) -> &Quaternion {
        &self.entries[p * self.n + q]
    }
}

impl std::ops::IndexMut<(usize, usize)> for QuatMatrix {
    fn index_mut(&mut self, (p, q): (usize, usize)) -> &mut Quaternion {
        &mut self.entries[p * self.n + q]
    }
}

/// `<X, Y> = Re Trace(X Y)`: the real inner product under which hermitian
/// and skew-hermitian matrices are orthogonal complements.
pub fn inner(x: &QuatMatrix, y: &QuatMatrix) -> Result<f64, QuatError> {
    if x.n != y.n {
        return Err(QuatError::ShapeMismatch { left: x.n, right: y.n });
    }
    let mut total = 0.0;
    for p in 0..x.n {
        for q in 0..x.n {
            // Re(ab) accumulated entrywise; full products are not needed.
            let u = x[(p, q)];
            let v = y[(q, p)];
            total += u.a * v.a - u.b * v.b - u.c * v.c - u.d * v.d;
        }
    }
    Ok(total)
}

// --- symplectic generators -------------------------------------------------

fn check_pair(n: usize, p: usize, q: usize) -> Result<(), QuatError> {
    if p == q || p >= n || q >= n {
        return Err(QuatError::InvalidPair { p, q, n });
    }
    Ok(())
}

fn check_unit_axis(axis: Quaternion) -> Result<(), QuatError> {
    let norm = axis.norm();
    if (norm - 1.0).abs() > 1e-12 {
        return Err(QuatError::NonUnitAxis { norm });
    }
    Ok(())
}

/// `Omega_s = s E_pq - conj(s) E_qp`, the infinitesimal rotation of the
/// `(p, q)` plane with axis `s`; squares to `-(E_pp + E_qq)` for unit `s`.
pub fn block_generator(n: usize, p: usize, q: usize, axis: Quaternion) -> QuatMatrix {
    let mut m = QuatMatrix::zeros(n);
    m[(p, q)] = axis;
    m[(q, p)] = -axis.conj();
    m
}

/// The rotation `exp(phi Omega_s)`: identity off the `(p, q)` block,
/// `cos(phi)` on its diagonal, `sin(phi)` times the axis off it. Symplectic
/// for unit axes.
pub fn block_rotation(
    n: usize,
    p: usize,
    q: usize,
    phi: f64,
    axis: Quaternion,
) -> Result<QuatMatrix, QuatError> {
    check_pair(n, p, q)?;
    check_unit_axis(axis)?;
    let mut u = QuatMatrix::identity(n);
    u[(p, p)] = Quaternion::real(phi.cos());
    u[(q, q)] = Quaternion::real(phi.cos());
    u[(p, q)] = axis.scale(phi.sin());
    u[(q, p)] = -axis.conj().scale(phi.sin());
    Ok(u)
}

/// The standard basis of the skew-hermitian matrices (the symplectic Lie
/// algebra): per pair `p < q` the four rotations with axes `1, i, j, k`,
/// plus the three imaginary units on each diagonal entry. Size `2n^2 + n`.
pub fn sp_basis(n: usize) -> Vec<QuatMatrix> {
    let mut basis = Vec::with_capacity(2 * n * n + n);
    for p in 0..n {
        for q in p + 1..n {
            for axis in [
                Quaternion::one(),
                Quaternion::i(),
                Quaternion::j(),
                Quaternion::k(),
            ] {
                basis.push(block_generator(n, p, q, axis));
            }
        }
    }
    for p in 0..n {
        for unit in [Quaternion::i(), Quaternion::j(), Quaternion::k()] {
            let mut m = QuatMatrix::zeros(n);
            m[(p, p)] = unit;
            basis.push(m);
        }
    }
    basis
}

/// The ten generators moving only the `(p, q)` block: four rotation axes
/// and the imaginary units on the two diagonal entries. Their commutators
/// with an orbit point span the tangent space of the `(p, q)` sphere.
pub fn block_sp_basis(n: usize, p: usize, q: usize) -> Result<Vec<QuatMatrix>, QuatError> {
    check_pair(n, p, q)?;
    let mut basis = Vec::with_capacity(10);
    for axis in [
        Quaternion::one(),
        Quaternion::i(),
        Quaternion::j(),
        Quaternion::k(),
    ] {
        basis.push(block_generator(n, p, q, axis));
    }
    for pos in [p, q] {
        for unit in [Quaternion::i(), Quaternion::j(), Quaternion::k()] {
            let mut m = QuatMatrix::zeros(n);
            m[(pos, pos)] = unit;
            basis.push(m);
        }
    }
    Ok(basis)
}

// --- orbit points -----------------------------------------------------------

/// A point of the isospectral orbit together with the group element that
/// produced it: `matrix = conjugator . Diag(spectrum at pole order) .
/// conjugator*`.
#[derive(Debug, Clone, PartialEq)]
pub struct OrbitPoint {
    matrix: QuatMatrix,
    conjugator: QuatMatrix,
    /// Ascending eigenvalue list, shared by every point of the orbit.
    spectrum: Vec<f64>,
}

impl OrbitPoint {
    pub fn matrix(&self) -> &QuatMatrix {
        &self.matrix
    }

    pub fn conjugator(&self) -> &QuatMatrix {
        &self.conjugator
    }

    pub fn spectrum(&self) -> &[f64] {
        &self.spectrum
    }

    pub fn n(&self) -> usize {
        self.matrix.n
    }

    /// Largest deviation of the computed spectrum from the declared one.
    pub fn spectrum_residual(&self) -> f64 {
        self.matrix
            .hermitian_spectrum()
            .iter()
            .zip(&self.spectrum)
            .map(|(got, want)| (got - want).abs())
            .fold(0.0, f64::max)
    }
}

fn validated_spectrum(r: &[f64]) -> Result<Vec<f64>, QuatError> {
    for i in 0..r.len() {
        for j in i + 1..r.len() {
            if (r[i] - r[j]).abs() <= 1e-9 {
                return Err(QuatError::DuplicateEigenvalue { i, j });
            }
        }
    }
    let sum: f64 = r.iter().sum();
    if sum.abs() > 1e-9 {
        return Err(QuatError::NotTraceless { sum });
    }
    let mut sorted = r.to_vec();
    sorted.sort_by(|x, y| x.partial_cmp(y).expect("finite spectrum"));
    Ok(sorted)
}

/// The critical diagonal of `w`: entry `r_{w(p)}` at position `p`, exactly.
pub fn orbit_point(w: &Permutation, r: &[f64]) -> Result<OrbitPoint, QuatError> {
    if w.n() != r.len() {
        return Err(QuatError::SizeMismatch {
            expected: w.n(),
            got: r.len(),
        });
    }
    let spectrum = validated_spectrum(r)?;
    let values: Vec<f64> = (0..w.n()).map(|p| r[w.apply(p)]).collect();
    Ok(OrbitPoint {
        matrix: QuatMatrix::diagonal(&values),
        conjugator: QuatMatrix::identity(w.n()),
        spectrum,
    })
}

/// The point of the `(p, q)` sphere through the pole `w` at polar angle
/// `theta` along the meridian with the given unit axis: conjugation of the
/// pole by the half-angle rotation. `theta = 0` is the pole itself,
/// `theta = pi` the antipodal pole with the `(p, q)` diagonal entries
/// swapped; the full circle closes at `2 pi`.
pub fn sphere_point(
    w: &Permutation,
    p: usize,
    q: usize,
    theta: f64,
    axis: Quaternion,
    r: &[f64],
) -> Result<OrbitPoint, QuatError> {
    check_pair(r.len(), p, q)?;
    let pole = orbit_point(w, r)?;
    let u = block_rotation(r.len(), p, q, theta / 2.0, axis)?;
    Ok(OrbitPoint {
        matrix: pole.matrix.conjugate_by(&u),
        conjugator: u,
        spectrum: pole.spectrum,
    })
}

// --- tangent frames and gradients -------------------------------------------

/// Orthonormalizes the given matrices under `<,>`, dropping directions
/// whose residual falls below `FRAME_DROP_RATIO` of the largest input norm.
pub fn orthonormal_frame(vectors: &[QuatMatrix]) -> Vec<QuatMatrix> {
    let mut scale = 0.0f64;
    for v in vectors {
        scale = scale.max(v.frobenius_norm());
    }
    if scale == 0.0 {
        return Vec::new();
    }
    let threshold = FRAME_DROP_RATIO * scale;
    let mut frame: Vec<QuatMatrix> = Vec::new();
    for v in vectors {
        let mut w = v.clone();
        for e in &frame {
            let c = inner(&w, e).expect("same shape");
            w = w.sub(&e.scale(c));
        }
        // second pass for numerical orthogonality
        for e in &frame {
            let c = inner(&w, e).expect("same shape");
            w = w.sub(&e.scale(c));
        }
        let norm = w.frobenius_norm();
        if norm > threshold {
            frame.push(w.scale(1.0 / norm));
        }
    }
    frame
}

/// Commutator tangent frame of the full orbit at `x`: orthonormalized
/// `[Omega, x]` over the symplectic basis. Rank `2 n (n - 1)` at every
/// point with distinct eigenvalues.
pub fn orbit_tangent_frame(x: &QuatMatrix) -> Result<Vec<QuatMatrix>, QuatError> {
    let n = x.n();
    let generators: Vec<QuatMatrix> = sp_basis(n).iter().map(|o| o.commutator(x)).collect();
    let frame = orthonormal_frame(&generators);
    let expected = 2 * n * (n - 1);
    if frame.len() != expected {
        return Err(QuatError::DegenerateFrame {
            expected,
            found: frame.len(),
        });
    }
    Ok(frame)
}

fn project_onto(frame: &[QuatMatrix], v: &QuatMatrix) -> QuatMatrix {
    let mut out = QuatMatrix::zeros(v.n());
    for e in frame {
        let c = inner(v, e).expect("same shape");
        out = out.add(&e.scale(c));
    }
    out
}

/// A computed gradient: the tangential part of the height direction and
/// its norm.
#[derive(Debug, Clone, PartialEq)]
pub struct Gradient {
    pub tangent: QuatMatrix,
    pub norm: f64,
}

/// The gradient of `h_A`, `A = Diag(a)`, at an orbit point: the orthogonal
/// projection of `A` onto the commutator tangent space.
pub fn numeric_gradient(x: &OrbitPoint, a: &[f64]) -> Result<Gradient, QuatError> {
    if a.len() != x.n() {
        return Err(QuatError::SizeMismatch {
            expected: x.n(),
            got: a.len(),
        });
    }
    let frame = orbit_tangent_frame(x.matrix())?;
    let tangent = project_onto(&frame, &QuatMatrix::diagonal(a));
    let norm = tangent.frobenius_norm();
    Ok(Gradient { tangent, norm })
}

fn params_as_f64(hp: &HeightParams) -> Result<(Vec<f64>, Vec<f64>), QuatError> {
    let lower = |xs: &[num_rational::BigRational]| -> Result<Vec<f64>, QuatError> {
        xs.iter()
            .map(|x| {
                x.to_f64()
                    .filter(|v| v.is_finite())
                    .ok_or(QuatError::NonFiniteParameter)
            })
            .collect()
    };
    Ok((lower(hp.a())?, lower(hp.r())?))
}

// --- Hessian ------------------------------------------------------------------

/// Second derivative of the height along the conjugation curve of a block
/// generator, from the closed commutator form `<A, [Omega, [Omega, X]]>`
/// at the critical diagonal of `w`. Expands by hand to
/// `2 |s|^2 (r_{w(q)} - r_{w(p)}) (a_p - a_q)`.
pub fn hessian_quadratic_form(
    w: &Permutation,
    hp: &HeightParams,
    p: usize,
    q: usize,
    axis: Quaternion,
) -> Result<f64, QuatError> {
    check_pair(w.n(), p, q)?;
    check_unit_axis(axis)?;
    if w.n() != hp.n() {
        return Err(QuatError::SizeMismatch {
            expected: hp.n(),
            got: w.n(),
        });
    }
    let (a, r) = params_as_f64(hp)?;
    let x = orbit_point(w, &r)?;
    let omega = block_generator(w.n(), p, q, axis);
    let inner_comm = omega.commutator(x.matrix());
    inner(&QuatMatrix::diagonal(&a), &omega.commutator(&inner_comm))
}

/// The same quadratic form by central finite differences along the actual
/// conjugation curve; cross-check mode for the closed commutator form.
pub fn hessian_quadratic_form_fd(
    w: &Permutation,
    hp: &HeightParams,
    p: usize,
    q: usize,
    axis: Quaternion,
    step: f64,
) -> Result<f64, QuatError> {
    check_pair(w.n(), p, q)?;
    if w.n() != hp.n() {
        return Err(QuatError::SizeMismatch {
            expected: hp.n(),
            got: w.n(),
        });
    }
    let (a, r) = params_as_f64(hp)?;
    let x = orbit_point(w, &r)?;
    let a_mat = QuatMatrix::diagonal(&a);
    let h_at = |t: f64| -> Result<f64, QuatError> {
        let u = block_rotation(w.n(), p, q, t, axis)?;
        inner(&a_mat, &x.matrix().conjugate_by(&u))
    };
    Ok((h_at(step)? + h_at(-step)? - 2.0 * h_at(0.0)?) / (step * step))
}

/// Number of negative eigenvalues of the Hessian of `h_A` at the critical
/// diagonal of `w`, computed on the off-diagonal symplectic directions via
/// the symmetrized commutator form. Must equal the combinatorial Morse
/// index; eigenvalues inside the separation tolerance are rejected as
/// non-generic rather than classified.
pub fn numeric_hessian_index(w: &Permutation, hp: &HeightParams) -> Result<usize, QuatError> {
    if w.n() != hp.n() {
        return Err(QuatError::SizeMismatch {
            expected: hp.n(),
            got: w.n(),
        });
    }
    let n = w.n();
    let (a, r) = params_as_f64(hp)?;
    let x = orbit_point(w, &r)?;
    let a_mat = QuatMatrix::diagonal(&a);

    let mut omegas = Vec::with_capacity(2 * n * (n - 1));
    for p in 0..n {
        for q in p + 1..n {
            for axis in [
                Quaternion::one(),
                Quaternion::i(),
                Quaternion::j(),
                Quaternion::k(),
            ] {
                omegas.push(block_generator(n, p, q, axis));
            }
        }
    }

    let dim = omegas.len();
    if dim == 0 {
        return Ok(0); // one-point orbit
    }
    let mut form = DMatrix::<f64>::zeros(dim, dim);
    let first_comms: Vec<QuatMatrix> = omegas.iter().map(|o| o.commutator(x.matrix())).collect();
    for i in 0..dim {
        for j in i..dim {
            let ij = inner(&a_mat, &omegas[i].commutator(&first_comms[j])).expect("same shape");
            let ji = inner(&a_mat, &omegas[j].commutator(&first_comms[i])).expect("same shape");
            let value = 0.5 * (ij + ji);
            form[(i, j)] = value;
            form[(j, i)] = value;
        }
    }

    let eigen = nalgebra::linalg::SymmetricEigen::new(form);
    let mut negatives = 0;
    for &lambda in eigen.eigenvalues.iter() {
        if lambda.abs() < TOL_EIGEN_SEPARATION {
            return Err(QuatError::NearZeroEigenvalue {
                value: lambda,
                tol: TOL_EIGEN_SEPARATION,
            });
        }
        if lambda < 0.0 {
            negatives += 1;
        }
    }
    Ok(negatives)
}

// --- meridians -----------------------------------------------------------------

fn random_unit_quaternion(rng: &mut ChaCha12Rng) -> Quaternion {
    loop {
        let q = Quaternion::new(
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
        );
        let norm = q.norm();
        if norm > 0.1 && norm <= 1.0 {
            return q.scale(1.0 / norm);
        }
    }
}

/// Samples the `(p, q)` sphere through the pole `w` and measures how far
/// the gradient leaves the sphere's tangent space; the returned maximum
/// residual is the numeric content of "meridians are gradient lines".
/// Requires the pole to be the upper end (`h` drops towards the antipode).
pub fn meridian_tangency_check(
    w: &Permutation,
    p: usize,
    q: usize,
    samples: usize,
    hp: &HeightParams,
    seed: u64,
) -> Result<f64, QuatError> {
    check_pair(w.n(), p, q)?;
    if w.n() != hp.n() {
        return Err(QuatError::SizeMismatch {
            expected: hp.n(),
            got: w.n(),
        });
    }
    let drop = edge_height_drop(w, w.apply(p), w.apply(q), hp);
    if !num_traits::Signed::is_positive(&drop) {
        return Err(QuatError::PoleNotUpper { p, q });
    }
    let (a, r) = params_as_f64(hp)?;
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let sphere_generators = block_sp_basis(w.n(), p, q)?;
    let mut worst = 0.0f64;
    for _ in 0..samples {
        let theta = rng.gen_range(0.0..std::f64::consts::PI);
        let axis = random_unit_quaternion(&mut rng);
        let z = sphere_point(w, p, q, theta, axis, &r)?;
        let gradient = numeric_gradient(&z, &a)?;
        let tangent_vectors: Vec<QuatMatrix> = sphere_generators
            .iter()
            .map(|o| o.commutator(z.matrix()))
            .collect();
        let sphere_frame = orthonormal_frame(&tangent_vectors);
        let residual = gradient
            .tangent
            .sub(&project_onto(&sphere_frame, &gradient.tangent))
            .frobenius_norm();
        worst = worst.max(residual);
    }
    Ok(worst)
}

// --- torus fixed lines ------------------------------------------------------------

/// Whether the quaternionic line through `h` is fixed by every diagonal of
/// unit complex numbers: true exactly when only one coordinate of `h` is
/// nonzero. The support verdict is cross-checked against the invariance
/// equation `h_mu conj(z_mu) = lambda h_mu` with the witness assignment
/// `z = (1, ..., -1, ...)` on the first two support coordinates.
pub fn t_fixed_point_check(h: &[Quaternion]) -> Result<bool, QuatError> {
    let max_norm = h.iter().map(|q| q.norm()).fold(0.0, f64::max);
    if max_norm == 0.0 {
        return Err(QuatError::ZeroVector);
    }
    let support: Vec<usize> = h
        .iter()
        .enumerate()
        .filter(|(_, q)| q.norm() > 1e-12 * max_norm)
        .map(|(idx, _)| idx)
        .collect();
    let verdict = support.len() == 1;

    if verdict {
        // any unit complex diagonal solves the invariance equation; verify
        // with z_idx = i everywhere
        let mu = support[0];
        let z = Quaternion::i();
        let lambda = h[mu] * z.conj() * h[mu].inverse();
        let residual = (h[mu] * z.conj() - lambda * h[mu]).norm();
        debug_assert!(residual < 1e-9 * max_norm);
    } else {
        // witness: z = 1 on the first support coordinate, -1 on the second,
        // forcing incompatible lambdas
        let (mu, nu) = (support[0], support[1]);
        let lambda_mu = h[mu] * Quaternion::real(1.0).conj() * h[mu].inverse();
        let lambda_nu = h[nu] * Quaternion::real(-1.0).conj() * h[nu].inverse();
        debug_assert!((lambda_mu - lambda_nu).norm() > 1.0);
    }
    Ok(verdict)
}

// --- sampling and the check battery --------------------------------------------------

/// A seeded symplectic sample: a product of block rotations and a unit
/// quaternion diagonal.
pub fn sample_symplectic(n: usize, rng: &mut ChaCha12Rng) -> QuatMatrix {
    let mut u = QuatMatrix::zeros(n);
    for p in 0..n {
        u[(p, p)] = random_unit_quaternion(rng);
    }
    for _ in 0..2 * n {
        if n < 2 {
            break;
        }
        let p = rng.gen_range(0..n);
        let mut q = rng.gen_range(0..n - 1);
        if q >= p {
            q += 1;
        }
        let phi = rng.gen_range(0.0..std::f64::consts::TAU);
        let axis = random_unit_quaternion(rng);
        let rotation = block_rotation(n, p, q, phi, axis).expect("valid rotation");
        u = rotation.mul(&u);
    }
    u
}

/// One line of a numeric report. For floor-style checks (where small is
/// bad) `max_residual` carries the shortfall below the floor, so zero is
/// healthy across all checks.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct CheckOutcome {
    pub name: String,
    pub max_residual: f64,
    pub pass: bool,
}

fn stream(seed: u64, index: u64) -> ChaCha12Rng {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

const ALGEBRA_SAMPLES: usize = 64;
const SYMPLECTIC_SAMPLES: usize = 8;
const CONJUGATION_SAMPLES: usize = 6;
const SPHERE_SAMPLES: usize = 24;
const MERIDIAN_SAMPLES: usize = 50;
const MERIDIAN_COMBOS_CAP: usize = 12;
const FD_SAMPLES: usize = 6;
const FD_STEP: f64 = 1e-4;
const FD_TOL: f64 = 1e-5;
const FIXED_LINE_SAMPLES: usize = 32;

/// Runs the full deterministic battery for one `n` and one parameter
/// choice. Every check draws from its own stream of the seed, so the
/// outcome list is reproducible byte for byte.
pub fn standard_check_battery(
    n: usize,
    hp: &HeightParams,
    seed: u64,
) -> Result<Vec<CheckOutcome>, QuatError> {
    if hp.n() != n {
        return Err(QuatError::SizeMismatch {
            expected: n,
            got: hp.n(),
        });
    }
    let (a, r) = params_as_f64(hp)?;
    let perms = all_permutations(n).map_err(|_| QuatError::SizeMismatch {
        expected: crate::flagcomb::DEFAULT_PERMUTATION_CAP,
        got: n,
    })?;
    let mut checks = Vec::new();

    // 0: quaternion algebra identities on random samples
    {
        let mut rng = stream(seed, 0);
        let mut worst = {
            let (i, j, k) = (Quaternion::i(), Quaternion::j(), Quaternion::k());
            [
                (i * i + Quaternion::one()).norm(),
                (j * j + Quaternion::one()).norm(),
                (k * k + Quaternion::one()).norm(),
                (i * j - k).norm(),
                (j * k - i).norm(),
                (k * i - j).norm(),
                (i * j * k + Quaternion::one()).norm(),
            ]
            .into_iter()
            .fold(0.0, f64::max)
        };
        for _ in 0..ALGEBRA_SAMPLES {
            let p = random_unit_quaternion(&mut rng).scale(rng.gen_range(0.5..2.0));
            let q = random_unit_quaternion(&mut rng).scale(rng.gen_range(0.5..2.0));
            let s = random_unit_quaternion(&mut rng).scale(rng.gen_range(0.5..2.0));
            worst = worst.max(((p * q).conj() - q.conj() * p.conj()).norm());
            worst = worst.max(((p * q) * s - p * (q * s)).norm());
            worst = worst.max(((p * q).norm() - p.norm() * q.norm()).abs());
        }
        checks.push(CheckOutcome {
            name: "quaternion_algebra".into(),
            max_residual: worst,
            pass: worst < TOL_SYMPLECTIC,
        });
    }

    // 1: symplectic closure under products and adjoints
    {
        let mut rng = stream(seed, 1);
        let mut worst = 0.0f64;
        for _ in 0..SYMPLECTIC_SAMPLES {
            let u = sample_symplectic(n, &mut rng);
            let v = sample_symplectic(n, &mut rng);
            worst = worst.max(u.symplectic_defect());
            worst = worst.max(u.mul(&v).symplectic_defect());
            worst = worst.max(u.adjoint().symplectic_defect());
        }
        checks.push(CheckOutcome {
            name: "symplectic_closure".into(),
            max_residual: worst,
            pass: worst < TOL_SYMPLECTIC,
        });
    }

    // 2: conjugation preserves hermitian structure, spectrum, and inner
    // products
    {
        let mut rng = stream(seed, 2);
        let mut worst = 0.0f64;
        for _ in 0..CONJUGATION_SAMPLES {
            let w = &perms[rng.gen_range(0..perms.len())];
            let x = orbit_point(w, &r)?;
            let u = sample_symplectic(n, &mut rng);
            let moved = x.matrix().conjugate_by(&u);
            worst = worst.max(moved.hermitian_defect());
            let spectrum = moved.hermitian_spectrum();
            for (got, want) in spectrum.iter().zip(x.spectrum()) {
                worst = worst.max((got - want).abs());
            }
            let y = QuatMatrix::diagonal(&a);
            let moved_y = y.conjugate_by(&u);
            let before = inner(x.matrix(), &y)?;
            let after = inner(&moved, &moved_y)?;
            worst = worst.max((before - after).abs());
        }
        checks.push(CheckOutcome {
            name: "conjugation_invariance".into(),
            max_residual: worst,
            pass: worst < TOL_SPECTRUM,
        });
    }

    // 3: permutation diagonals are critical
    {
        let mut worst = 0.0f64;
        for w in &perms {
            let x = orbit_point(w, &r)?;
            worst = worst.max(numeric_gradient(&x, &a)?.norm);
        }
        checks.push(CheckOutcome {
            name: "critical_gradient".into(),
            max_residual: worst,
            pass: worst < TOL_CRITICAL_GRADIENT,
        });
    }

    // 4: away from the poles the gradient stays above the floor (shortfall
    // reported, zero when healthy); vacuous for n = 1 where the orbit is a
    // single point
    {
        let mut rng = stream(seed, 4);
        let mut min_norm = f64::INFINITY;
        if n >= 2 {
            for _ in 0..SPHERE_SAMPLES {
                let w = &perms[rng.gen_range(0..perms.len())];
                let p = rng.gen_range(0..n);
                let mut q = rng.gen_range(0..n - 1);
                if q >= p {
                    q += 1;
                }
                let theta = rng.gen_range(0.2..std::f64::consts::PI - 0.2);
                let axis = random_unit_quaternion(&mut rng);
                let z = sphere_point(w, p, q, theta, axis, &r)?;
                min_norm = min_norm.min(numeric_gradient(&z, &a)?.norm);
            }
        }
        let shortfall = if n >= 2 {
            (GRADIENT_FLOOR - min_norm).max(0.0)
        } else {
            0.0
        };
        checks.push(CheckOutcome {
            name: "midsphere_gradient_floor".into(),
            max_residual: shortfall,
            pass: shortfall == 0.0,
        });
    }

    // 5: Hessian indices agree with the combinatorial Morse indices
    {
        let mut worst = 0.0f64;
        for w in &perms {
            if n < 2 {
                break;
            }
            let numeric = numeric_hessian_index(w, hp)?;
            let combinatorial = morse_index(w);
            worst = worst.max((numeric as f64 - combinatorial as f64).abs());
        }
        checks.push(CheckOutcome {
            name: "hessian_index_agreement".into(),
            max_residual: worst,
            pass: worst == 0.0,
        });
    }

    // 6: gradients along sphere samples stay tangent to their sphere
    {
        let mut rng = stream(seed, 6);
        let mut combos = Vec::new();
        for w in &perms {
            for p in 0..n {
                for q in p + 1..n {
                    if w.apply(p) < w.apply(q) {
                        combos.push((w.clone(), p, q));
                    }
                }
            }
        }
        if combos.len() > MERIDIAN_COMBOS_CAP {
            let mut picked = Vec::with_capacity(MERIDIAN_COMBOS_CAP);
            for _ in 0..MERIDIAN_COMBOS_CAP {
                picked.push(combos[rng.gen_range(0..combos.len())].clone());
            }
            combos = picked;
        }
        let mut worst = 0.0f64;
        for (index, (w, p, q)) in combos.iter().enumerate() {
            let residual =
                meridian_tangency_check(w, *p, *q, MERIDIAN_SAMPLES, hp, seed ^ (index as u64))?;
            worst = worst.max(residual);
        }
        checks.push(CheckOutcome {
            name: "meridian_tangency".into(),
            max_residual: worst,
            pass: worst < TOL_TANGENCY,
        });
    }

    // 7: spheres are round with four-dimensional tangent spaces
    {
        let mut rng = stream(seed, 7);
        let mut worst = 0.0f64;
        let mut ranks_ok = true;
        if n >= 2 {
            for _ in 0..SPHERE_SAMPLES {
                let w = &perms[rng.gen_range(0..perms.len())];
                let p = rng.gen_range(0..n);
                let mut q = rng.gen_range(0..n - 1);
                if q >= p {
                    q += 1;
                }
                let (lo, hi) = (p.min(q), p.max(q));
                let pole = orbit_point(w, &r)?;
                let antipode = {
                    let swapped = w.swap_positions(lo, hi);
                    orbit_point(&swapped, &r)?
                };
                let center = pole.matrix().add(antipode.matrix()).scale(0.5);
                let delta = r[w.apply(lo)] - r[w.apply(hi)];
                let radius = delta.abs() / std::f64::consts::SQRT_2;

                let theta = rng.gen_range(0.0..std::f64::consts::TAU);
                let axis = random_unit_quaternion(&mut rng);
                let z = sphere_point(w, lo, hi, theta, axis, &r)?;
                let distance = z.matrix().sub(&center).frobenius_norm();
                worst = worst.max((distance - radius).abs());
                worst = worst.max(z.spectrum_residual());

                let tangent_vectors: Vec<QuatMatrix> = block_sp_basis(n, lo, hi)?
                    .iter()
                    .map(|o| o.commutator(z.matrix()))
                    .collect();
                let rank = orthonormal_frame(&tangent_vectors).len();
                ranks_ok &= rank == 4;
            }
        }
        checks.push(CheckOutcome {
            name: "sphere_roundness".into(),
            max_residual: worst,
            pass: ranks_ok && worst < TOL_SPECTRUM,
        });
    }

    // 8: closed commutator Hessian agrees with finite differences
    {
        let mut rng = stream(seed, 8);
        let mut worst = 0.0f64;
        if n >= 2 {
            for _ in 0..FD_SAMPLES {
                let w = &perms[rng.gen_range(0..perms.len())];
                let p = rng.gen_range(0..n);
                let mut q = rng.gen_range(0..n - 1);
                if q >= p {
                    q += 1;
                }
                let axis = random_unit_quaternion(&mut rng);
                let closed = hessian_quadratic_form(w, hp, p, q, axis)?;
                let fd = hessian_quadratic_form_fd(w, hp, p, q, axis, FD_STEP)?;
                worst = worst.max((closed - fd).abs());
            }
        }
        checks.push(CheckOutcome {
            name: "hessian_finite_difference".into(),
            max_residual: worst,
            pass: worst < FD_TOL,
        });
    }

    // 9: torus-fixed lines are exactly the coordinate lines
    {
        let mut rng = stream(seed, 9);
        let mut mismatches = 0.0f64;
        for _ in 0..FIXED_LINE_SAMPLES {
            let single = rng.gen_bool(0.5);
            let mut h = vec![Quaternion::zero(); n];
            if single {
                let idx = rng.gen_range(0..n);
                h[idx] = random_unit_quaternion(&mut rng).scale(rng.gen_range(0.5..3.0));
            } else if n >= 2 {
                let count = rng.gen_range(2..=n);
                let mut indices: Vec<usize> = (0..n).collect();
                for step in 0..count {
                    let pick = rng.gen_range(step..n);
                    indices.swap(step, pick);
                }
                for &idx in &indices[..count] {
                    h[idx] = random_unit_quaternion(&mut rng).scale(rng.gen_range(0.5..3.0));
                }
            } else {
                h[0] = random_unit_quaternion(&mut rng);
            }
            let expected = h.iter().filter(|q| !q.is_zero()).count() == 1;
            if t_fixed_point_check(&h)? != expected {
                mismatches += 1.0;
            }
        }
        checks.push(CheckOutcome {
            name: "torus_fixed_lines".into(),
            max_residual: mismatches,
            pass: mismatches == 0.0,
        });
    }

    Ok(checks)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use num_rational::BigRational;

    fn standard(n: usize) -> HeightParams {
        HeightParams::standard(n).unwrap()
    }

    fn perm(one_line: &[usize]) -> Permutation {
        Permutation::from_one_line(one_line).unwrap()
    }

    fn assert_close(got: f64, want: f64, tol: f64) {
        assert!(
            (got - want).abs() <= tol,
            "expected {want}, got {got} (tol {tol})"
        );
    }

    #[test]
    fn quaternion_multiplication_table() {
        let (i, j, k) = (Quaternion::i(), Quaternion::j(), Quaternion::k());
        let minus_one = -Quaternion::one();
        assert_eq!(i * i, minus_one);
        assert_eq!(j * j, minus_one);
        assert_eq!(k * k, minus_one);
        assert_eq!(i * j, k);
        assert_eq!(j * k, i);
        assert_eq!(k * i, j);
        assert_eq!(j * i, -k);
        assert_eq!(i * j * k, minus_one);
    }

    #[test]
    fn conjugation_reverses_products() {
        let mut rng = ChaCha12Rng::seed_from_u64(12);
        for _ in 0..50 {
            let p = random_unit_quaternion(&mut rng).scale(rng.gen_range(0.1..3.0));
            let q = random_unit_quaternion(&mut rng).scale(rng.gen_range(0.1..3.0));
            assert!(((p * q).conj() - q.conj() * p.conj()).norm() < 1e-13);
            assert_close((p * q).norm(), p.norm() * q.norm(), 1e-12);
            let r = p * p.inverse();
            assert!((r - Quaternion::one()).norm() < 1e-13);
        }
    }

    #[test]
    fn real_embedding_is_multiplicative() {
        let mut rng = ChaCha12Rng::seed_from_u64(9);
        for _ in 0..20 {
            let p = random_unit_quaternion(&mut rng).scale(rng.gen_range(0.1..3.0));
            let q = random_unit_quaternion(&mut rng).scale(rng.gen_range(0.1..3.0));
            let lp = DMatrix::from_fn(4, 4, |r, c| p.real_block()[r][c]);
            let lq = DMatrix::from_fn(4, 4, |r, c| q.real_block()[r][c]);
            let lpq = DMatrix::from_fn(4, 4, |r, c| (p * q).real_block()[r][c]);
            assert!((lp.clone() * lq.clone() - lpq).norm() < 1e-12);
            let lconj = DMatrix::from_fn(4, 4, |r, c| p.conj().real_block()[r][c]);
            assert!((lp.transpose() - lconj).norm() < 1e-15);
        }
    }

    #[test]
    fn inner_product_examples() {
        // <Diag(1,-1), Diag(1,-1)> = 2
        let d = QuatMatrix::diagonal(&[1.0, -1.0]);
        assert_close(inner(&d, &d).unwrap(), 2.0, 1e-15);

        // diagonal real against zero-diagonal: orthogonal
        let mut off = QuatMatrix::zeros(2);
        off[(0, 1)] = Quaternion::new(0.3, 0.7, -0.2, 0.5);
        off[(1, 0)] = off[(0, 1)].conj();
        assert_close(inner(&d, &off).unwrap(), 0.0, 1e-15);

        // hermitian [[0, j], [-j, 0]] pairs with itself to 2
        let mut x = QuatMatrix::zeros(2);
        x[(0, 1)] = Quaternion::j();
        x[(1, 0)] = -Quaternion::j();
        assert_eq!(x.hermitian_defect(), 0.0);
        assert_close(inner(&x, &x).unwrap(), 2.0, 1e-15);

        // shape mismatch is an error
        assert!(matches!(
            inner(&d, &QuatMatrix::zeros(3)),
            Err(QuatError::ShapeMismatch { .. })
        ));
    }

    #[test]
    fn embedding_spectrum_of_diagonal() {
        let x = QuatMatrix::diagonal(&[-2.0, 0.0, 2.0]);
        let spectrum = x.hermitian_spectrum();
        assert_eq!(spectrum.len(), 3);
        for (got, want) in spectrum.iter().zip([-2.0, 0.0, 2.0]) {
            assert_close(*got, want, 1e-12);
        }
    }

    #[test]
    fn block_rotation_is_symplectic_and_quarter_turn_swaps() {
        let axis = Quaternion::j();
        let u = block_rotation(3, 0, 2, 0.7, axis).unwrap();
        assert!(u.symplectic_defect() < 1e-15);

        // the quarter turn conjugates the (p, q) diagonal entries into each
        // other
        let quarter = block_rotation(3, 0, 2, std::f64::consts::FRAC_PI_2, axis).unwrap();
        let x = QuatMatrix::diagonal(&[-2.0, 0.0, 2.0]);
        let swapped = x.conjugate_by(&quarter);
        let expected = QuatMatrix::diagonal(&[2.0, 0.0, -2.0]);
        assert!(swapped.sub(&expected).frobenius_norm() < 1e-14);

        // a non-unit axis is rejected
        assert!(matches!(
            block_rotation(3, 0, 2, 0.7, Quaternion::j().scale(2.0)),
            Err(QuatError::NonUnitAxis { .. })
        ));
        assert!(matches!(
            block_rotation(3, 2, 2, 0.7, axis),
            Err(QuatError::InvalidPair { .. })
        ));
    }

    #[test]
    fn orbit_point_examples() {
        // one-line [2,1] places r_2 first
        let x = orbit_point(&perm(&[2, 1]), &[-1.0, 1.0]).unwrap();
        let expected = QuatMatrix::diagonal(&[1.0, -1.0]);
        assert_eq!(x.matrix(), &expected);
        assert_eq!(x.spectrum(), &[-1.0, 1.0]);
        assert!(x.spectrum_residual() < 1e-12);

        assert!(matches!(
            orbit_point(&perm(&[1, 2]), &[1.0, 1.0]),
            Err(QuatError::DuplicateEigenvalue { .. })
        ));
        assert!(matches!(
            orbit_point(&perm(&[1, 2]), &[0.0, 1.0]),
            Err(QuatError::NotTraceless { .. })
        ));
        assert!(matches!(
            orbit_point(&perm(&[1, 2]), &[-1.0, 0.0, 1.0]),
            Err(QuatError::SizeMismatch { .. })
        ));
    }

    #[test]
    fn sphere_point_poles() {
        let r = [-2.0, 0.0, 2.0];
        let w = perm(&[2, 3, 1]);
        let pole = orbit_point(&w, &r).unwrap();

        let at_zero = sphere_point(&w, 0, 2, 0.0, Quaternion::i(), &r).unwrap();
        assert!(at_zero.matrix().sub(pole.matrix()).frobenius_norm() < 1e-15);

        // theta = pi swaps the diagonal entries at positions 0 and 2
        let at_pi = sphere_point(&w, 0, 2, std::f64::consts::PI, Quaternion::i(), &r).unwrap();
        let antipode = orbit_point(&w.swap_positions(0, 2), &r).unwrap();
        assert!(at_pi.matrix().sub(antipode.matrix()).frobenius_norm() < 1e-14);

        // intermediate points stay hermitian with the same spectrum
        let mid = sphere_point(&w, 0, 2, 1.1, Quaternion::k(), &r).unwrap();
        assert!(mid.matrix().hermitian_defect() < 1e-14);
        assert!(mid.spectrum_residual() < 1e-10);

        assert!(matches!(
            sphere_point(&w, 0, 2, 1.0, Quaternion::i().scale(0.5), &r),
            Err(QuatError::NonUnitAxis { .. })
        ));
    }

    #[test]
    fn gradient_vanishes_exactly_at_poles() {
        let hp = standard(3);
        let (a, r) = params_as_f64(&hp).unwrap();
        for w in all_permutations(3).unwrap() {
            let x = orbit_point(&w, &r).unwrap();
            let gradient = numeric_gradient(&x, &a).unwrap();
            assert!(
                gradient.norm < TOL_CRITICAL_GRADIENT,
                "pole {w} is not critical: {}",
                gradient.norm
            );
        }
    }

    #[test]
    fn gradient_on_the_two_point_orbit_matches_the_analytic_circle() {
        // n = 2 with a = r = (-1, 1): on the meridian X(theta) the height is
        // 2 cos(theta) along a circle of radius sqrt(2), so the gradient
        // norm is sqrt(2) |sin(theta)| and the direction is the descending
        // meridian tangent.
        let hp = standard(2);
        let (a, r) = params_as_f64(&hp).unwrap();
        let w = perm(&[1, 2]);
        let theta = 0.3;
        let z = sphere_point(&w, 0, 1, theta, Quaternion::i(), &r).unwrap();
        let gradient = numeric_gradient(&z, &a).unwrap();
        assert_close(gradient.norm, std::f64::consts::SQRT_2 * theta.sin(), 1e-10);

        // direction check: the meridian tangent at z is [Omega, X]/|.|, and
        // h decreases along increasing theta from the identity pole
        let omega = block_generator(2, 0, 1, Quaternion::i());
        let meridian = omega.commutator(z.matrix());
        let unit = meridian.scale(1.0 / meridian.frobenius_norm());
        let along = inner(&gradient.tangent, &unit).unwrap();
        assert_close(along, -gradient.norm, 1e-10);
        let off = gradient.tangent.sub(&unit.scale(along)).frobenius_norm();
        assert!(off < 1e-10, "gradient leaves the meridian by {off}");
    }

    #[test]
    fn gradient_scales_linearly_in_the_height_direction() {
        let hp = standard(3);
        let (a, r) = params_as_f64(&hp).unwrap();
        let z = sphere_point(&perm(&[2, 3, 1]), 0, 1, 0.9, Quaternion::j(), &r).unwrap();
        let g1 = numeric_gradient(&z, &a).unwrap();
        let scaled: Vec<f64> = a.iter().map(|v| 2.5 * v).collect();
        let g2 = numeric_gradient(&z, &scaled).unwrap();
        assert_close(g2.norm, 2.5 * g1.norm, 1e-10);
        assert!(
            g2.tangent.sub(&g1.tangent.scale(2.5)).frobenius_norm() < 1e-10,
            "projection is not linear"
        );
    }

    #[test]
    fn hessian_unit_block_oracle_is_minus_eight() {
        // n = 2, identity pole (the maximum), a = r = (-1, 1): the form on
        // every unit axis is 2 (r_2 - r_1)(a_1 - a_2) = -8.
        let hp = standard(2);
        let w = perm(&[1, 2]);
        for axis in [
            Quaternion::one(),
            Quaternion::i(),
            Quaternion::j(),
            Quaternion::k(),
        ] {
            let value = hessian_quadratic_form(&w, &hp, 0, 1, axis).unwrap();
            assert_close(value, -8.0, 1e-10);
            let fd = hessian_quadratic_form_fd(&w, &hp, 0, 1, axis, FD_STEP).unwrap();
            assert_close(fd, -8.0, 1e-5);
        }
        assert_eq!(numeric_hessian_index(&w, &hp).unwrap(), 4);
        assert_eq!(numeric_hessian_index(&perm(&[2, 1]), &hp).unwrap(), 0);
    }

    #[test]
    fn hessian_matches_closed_scalar_form_randomized() {
        let mut rng = ChaCha12Rng::seed_from_u64(77);
        let hp = standard(4);
        let (a, r) = params_as_f64(&hp).unwrap();
        let perms = all_permutations(4).unwrap();
        for _ in 0..40 {
            let w = &perms[rng.gen_range(0..perms.len())];
            let p = rng.gen_range(0..4);
            let mut q = rng.gen_range(0..3);
            if q >= p {
                q += 1;
            }
            let axis = random_unit_quaternion(&mut rng);
            let value = hessian_quadratic_form(w, &hp, p, q, axis).unwrap();
            let expected = 2.0 * (r[w.apply(q)] - r[w.apply(p)]) * (a[p] - a[q]);
            assert_close(value, expected, 1e-9);
        }
    }

    #[test]
    fn hessian_indices_match_morse_indices() {
        for n in 1..=4usize {
            let hp = standard(n);
            for w in all_permutations(n).unwrap() {
                if n < 2 {
                    continue;
                }
                let numeric = numeric_hessian_index(&w, &hp).unwrap();
                assert_eq!(numeric, morse_index(&w), "index mismatch at {w}");
            }
        }
    }

    #[test]
    fn hessian_rejects_parameters_near_degeneracy() {
        // valid (increasing, zero-sum) but so small that every eigenvalue
        // sits inside the separation tolerance
        let tiny = |k: i64| BigRational::new(BigInt::from(k), BigInt::from(10_000));
        let hp = HeightParams::new(vec![tiny(-1), tiny(1)], vec![tiny(-1), tiny(1)]).unwrap();
        assert!(matches!(
            numeric_hessian_index(&perm(&[1, 2]), &hp),
            Err(QuatError::NearZeroEigenvalue { .. })
        ));
    }

    #[test]
    fn meridian_gradients_stay_tangent() {
        // n = 2: the sphere is the whole orbit, so the residual is pure
        // float noise
        let residual =
            meridian_tangency_check(&perm(&[1, 2]), 0, 1, 20, &standard(2), 11).unwrap();
        assert!(residual < 1e-12, "n = 2 residual {residual}");

        // n = 3 at the identity pole
        let residual =
            meridian_tangency_check(&perm(&[1, 2, 3]), 0, 1, 50, &standard(3), 42).unwrap();
        assert!(residual < TOL_TANGENCY, "n = 3 residual {residual}");

        // the reversal is the minimum; no sphere has it as upper pole
        assert!(matches!(
            meridian_tangency_check(&perm(&[3, 2, 1]), 0, 1, 5, &standard(3), 1),
            Err(QuatError::PoleNotUpper { .. })
        ));
    }

    #[test]
    fn gradient_is_substantial_away_from_poles() {
        let hp = standard(3);
        let (a, r) = params_as_f64(&hp).unwrap();
        let mut rng = ChaCha12Rng::seed_from_u64(5);
        for _ in 0..20 {
            let theta = rng.gen_range(0.2..std::f64::consts::PI - 0.2);
            let axis = random_unit_quaternion(&mut rng);
            let z = sphere_point(&perm(&[1, 2, 3]), 1, 2, theta, axis, &r).unwrap();
            let norm = numeric_gradient(&z, &a).unwrap().norm;
            assert!(norm >= GRADIENT_FLOOR, "gradient {norm} below floor");
        }
    }

    #[test]
    fn fixed_line_support_test() {
        let e2 = [Quaternion::zero(), Quaternion::one()];
        assert!(t_fixed_point_check(&e2).unwrap());

        let diagonal_line = [Quaternion::one(), Quaternion::one()];
        assert!(!t_fixed_point_check(&diagonal_line).unwrap());

        let scaled = [
            Quaternion::zero(),
            Quaternion::zero(),
            Quaternion::real(5.0),
        ];
        assert!(t_fixed_point_check(&scaled).unwrap());

        let mixed = [Quaternion::j().scale(0.3), Quaternion::zero(), Quaternion::k()];
        assert!(!t_fixed_point_check(&mixed).unwrap());

        assert!(matches!(
            t_fixed_point_check(&[Quaternion::zero(); 3]),
            Err(QuatError::ZeroVector)
        ));
    }

    #[test]
    fn symplectic_samples_close() {
        let mut rng = ChaCha12Rng::seed_from_u64(31);
        for n in 1..=4usize {
            for _ in 0..5 {
                let u = sample_symplectic(n, &mut rng);
                let v = sample_symplectic(n, &mut rng);
                assert!(u.symplectic_defect() < TOL_SYMPLECTIC);
                assert!(u.mul(&v).symplectic_defect() < TOL_SYMPLECTIC);
                assert!(u.adjoint().symplectic_defect() < TOL_SYMPLECTIC);
            }
        }
    }

    #[test]
    fn spheres_are_round_with_rank_four_tangents() {
        let hp = standard(3);
        let (_, r) = params_as_f64(&hp).unwrap();
        let w = perm(&[3, 1, 2]);
        let pole = orbit_point(&w, &r).unwrap();
        let antipode = orbit_point(&w.swap_positions(0, 1), &r).unwrap();
        let center = pole.matrix().add(antipode.matrix()).scale(0.5);
        let radius = (r[w.apply(0)] - r[w.apply(1)]).abs() / std::f64::consts::SQRT_2;

        let mut rng = ChaCha12Rng::seed_from_u64(8);
        for _ in 0..15 {
            let theta = rng.gen_range(0.0..std::f64::consts::TAU);
            let axis = random_unit_quaternion(&mut rng);
            let z = sphere_point(&w, 0, 1, theta, axis, &r).unwrap();
            let distance = z.matrix().sub(&center).frobenius_norm();
            assert_close(distance, radius, 1e-12);

            let tangents: Vec<QuatMatrix> = block_sp_basis(3, 0, 1)
                .unwrap()
                .iter()
                .map(|o| o.commutator(z.matrix()))
                .collect();
            assert_eq!(orthonormal_frame(&tangents).len(), 4);
        }
    }

    #[test]
    fn battery_passes_and_is_deterministic() {
        for n in [2usize, 3] {
            let hp = standard(n);
            let first = standard_check_battery(n, &hp, 42).unwrap();
            assert_eq!(first.len(), 10);
            for check in &first {
                assert!(check.pass, "{} failed: {}", check.name, check.max_residual);
            }
            let second = standard_check_battery(n, &hp, 42).unwrap();
            assert_eq!(
                serde_json::to_string(&first).unwrap(),
                serde_json::to_string(&second).unwrap()
            );
        }
    }

    #[test]
    fn battery_handles_the_one_point_orbit() {
        let outcomes = standard_check_battery(1, &standard(1), 3).unwrap();
        for check in &outcomes {
            assert!(check.pass, "{} failed on n = 1", check.name);
        }
    }
}
