//! Exact multivariate polynomial arithmetic over unbounded integers.
//!
//! Polynomials are sparse maps from exponent vectors to `BigInt`
//! coefficients, with the variable count fixed per value. The term order is
//! graded lexicographic everywhere: lower total degree first, and within a
//! degree the monomial with the larger exponent on the earliest variable
//! first. All matrix layouts and JSON outputs index monomials in this order.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::de::Error as _;
use serde::ser::SerializeSeq;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyError {
    #[error("variable index {index} out of range for {nvars} variables")]
    IndexOutOfRange { index: usize, nvars: usize },
    #[error("symmetric polynomial index {index} exceeds variable set size {nvars}")]
    SymmetricIndexOutOfRange { index: usize, nvars: usize },
    #[error("variable count mismatch: {left} vs {right}")]
    VarCountMismatch { left: usize, right: usize },
    #[error("divisor indices must differ, got {0}")]
    EqualIndices(usize),
}

/// Exponent vector of a monomial; one entry per ambient variable.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial {
    exps: Vec<u32>,
}

impl Monomial {
    pub fn new(exps: Vec<u32>) -> Self {
        Monomial { exps }
    }

    /// Constant monomial in `nvars` variables.
    pub fn one(nvars: usize) -> Self {
        Monomial {
            exps: vec![0; nvars],
        }
    }

    /// The monomial `u_i` (exponent 1 on variable `i`).
    pub fn variable(nvars: usize, i: usize) -> Self {
        assert!(i < nvars, "variable index out of range");
        let mut exps = vec![0; nvars];
        exps[i] = 1;
        Monomial { exps }
    }

    pub fn nvars(&self) -> usize {
        self.exps.len()
    }

    pub fn exp(&self, i: usize) -> u32 {
        self.exps[i]
    }

    pub fn exps(&self) -> &[u32] {
        &self.exps
    }

    pub fn degree(&self) -> u32 {
        self.exps.iter().sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        debug_assert_eq!(self.nvars(), other.nvars());
        Monomial {
            exps: self
                .exps
                .iter()
                .zip(&other.exps)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Monomial {
    /// Graded lexicographic: by total degree, then `u_1`-heavy monomials
    /// first within a degree.
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| other.exps.cmp(&self.exps))
    }
}

/// All exponent vectors of total degree `d` in `nvars` variables, in the
/// global graded-lex order. The count is `C(d + nvars - 1, nvars - 1)`.
pub fn monomials_of_degree(d: u32, nvars: usize) -> Vec<Monomial> {
    fn rec(remaining: u32, slots: usize, prefix: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        if slots == 1 {
            prefix.push(remaining);
            out.push(Monomial::new(prefix.clone()));
            prefix.pop();
            return;
        }
        for e in (0..=remaining).rev() {
            prefix.push(e);
            rec(remaining - e, slots - 1, prefix, out);
            prefix.pop();
        }
    }
    if nvars == 0 {
        return if d == 0 {
            vec![Monomial::one(0)]
        } else {
            vec![]
        };
    }
    let mut out = Vec::new();
    rec(d, nvars, &mut Vec::with_capacity(nvars), &mut out);
    out
}

/// Sparse polynomial with unbounded integer coefficients.
///
/// Invariant: no stored zero coefficients, so equality of term maps is
/// equality of polynomials.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntPolynomial {
    nvars: usize,
    terms: BTreeMap<Monomial, BigInt>,
}

impl IntPolynomial {
    pub fn zero(nvars: usize) -> Self {
        IntPolynomial {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, value: impl Into<BigInt>) -> Self {
        let mut p = IntPolynomial::zero(nvars);
        let v: BigInt = value.into();
        if !v.is_zero() {
            p.terms.insert(Monomial::one(nvars), v);
        }
        p
    }

    pub fn one(nvars: usize) -> Self {
        IntPolynomial::constant(nvars, 1)
    }

    /// The polynomial `u_i`.
    pub fn variable(nvars: usize, i: usize) -> Result<Self, PolyError> {
        if i >= nvars {
            return Err(PolyError::IndexOutOfRange { index: i, nvars });
        }
        let mut p = IntPolynomial::zero(nvars);
        p.terms.insert(Monomial::variable(nvars, i), BigInt::one());
        Ok(p)
    }

    pub fn from_terms(
        nvars: usize,
        terms: impl IntoIterator<Item = (Monomial, BigInt)>,
    ) -> Self {
        let mut p = IntPolynomial::zero(nvars);
        for (m, c) in terms {
            assert_eq!(m.nvars(), nvars, "monomial arity mismatch");
            p.add_term(m, c);
        }
        p
    }

    fn add_term(&mut self, m: Monomial, c: BigInt) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in graded-lex order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigInt)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> BigInt {
        self.terms.get(m).cloned().unwrap_or_else(BigInt::zero)
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    /// `Some(d)` if every term has total degree `d`. The zero polynomial is
    /// homogeneous of every degree and reports `None` here; callers that
    /// need a degree for it must supply one from context.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let mut degs = self.terms.keys().map(Monomial::degree);
        let first = degs.next()?;
        degs.all(|d| d == first).then_some(first)
    }

    pub fn is_homogeneous(&self) -> bool {
        self.is_zero() || self.homogeneous_degree().is_some()
    }

    /// Splits into `(degree, component)` pairs, ascending in degree.
    pub fn homogeneous_components(&self) -> Vec<(u32, IntPolynomial)> {
        let mut by_degree: BTreeMap<u32, IntPolynomial> = BTreeMap::new();
        for (m, c) in &self.terms {
            by_degree
                .entry(m.degree())
                .or_insert_with(|| IntPolynomial::zero(self.nvars))
                .add_term(m.clone(), c.clone());
        }
        by_degree.into_iter().collect()
    }

    /// The component of total degree `d`.
    pub fn homogeneous_component(&self, d: u32) -> IntPolynomial {
        let mut out = IntPolynomial::zero(self.nvars);
        for (m, c) in &self.terms {
            if m.degree() == d {
                out.add_term(m.clone(), c.clone());
            }
        }
        out
    }

    fn assert_same_arity(&self, other: &IntPolynomial) {
        assert_eq!(
            self.nvars, other.nvars,
            "variable count mismatch: {} vs {}",
            self.nvars, other.nvars
        );
    }

    pub fn add(&self, other: &IntPolynomial) -> IntPolynomial {
        self.assert_same_arity(other);
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &IntPolynomial) -> IntPolynomial {
        self.assert_same_arity(other);
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }

    pub fn neg(&self) -> IntPolynomial {
        let mut out = IntPolynomial::zero(self.nvars);
        for (m, c) in &self.terms {
            out.terms.insert(m.clone(), -c.clone());
        }
        out
    }

    pub fn mul(&self, other: &IntPolynomial) -> IntPolynomial {
        self.assert_same_arity(other);
        let mut out = IntPolynomial::zero(self.nvars);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }

    pub fn scale(&self, k: &BigInt) -> IntPolynomial {
        let mut out = IntPolynomial::zero(self.nvars);
        if k.is_zero() {
            return out;
        }
        for (m, c) in &self.terms {
            out.terms.insert(m.clone(), c * k);
        }
        out
    }

    pub fn pow(&self, e: u32) -> IntPolynomial {
        let mut out = IntPolynomial::one(self.nvars);
        for _ in 0..e {
            out = out.mul(self);
        }
        out
    }

    /// Image under the evaluation homomorphism `u_var -> replacement`,
    /// identity on the other variables.
    pub fn substitute(
        &self,
        var: usize,
        replacement: &IntPolynomial,
    ) -> Result<IntPolynomial, PolyError> {
        if var >= self.nvars {
            return Err(PolyError::IndexOutOfRange {
                index: var,
                nvars: self.nvars,
            });
        }
        if replacement.nvars() != self.nvars {
            return Err(PolyError::VarCountMismatch {
                left: self.nvars,
                right: replacement.nvars(),
            });
        }
        let max_pow = self
            .terms
            .keys()
            .map(|m| m.exp(var))
            .max()
            .unwrap_or(0) as usize;
        let mut powers: Vec<IntPolynomial> = Vec::with_capacity(max_pow + 1);
        powers.push(IntPolynomial::one(self.nvars));
        for k in 1..=max_pow {
            powers.push(powers[k - 1].mul(replacement));
        }
        let mut out = IntPolynomial::zero(self.nvars);
        for (m, c) in &self.terms {
            let mut rest = m.exps.clone();
            let e = rest[var];
            rest[var] = 0;
            let base = IntPolynomial::from_terms(self.nvars, [(Monomial::new(rest), c.clone())]);
            out = out.add(&base.mul(&powers[e as usize]));
        }
        Ok(out)
    }

    /// Ring homomorphism determined by `u_i -> v_{map[i]}` into a polynomial
    /// ring with `target_nvars` variables. Exponents of variables mapped to
    /// the same target accumulate.
    pub fn rename_variables(&self, target_nvars: usize, map: &[usize]) -> IntPolynomial {
        assert_eq!(map.len(), self.nvars, "rename map arity mismatch");
        assert!(
            map.iter().all(|&t| t < target_nvars),
            "rename target out of range"
        );
        let mut out = IntPolynomial::zero(target_nvars);
        for (m, c) in &self.terms {
            let mut exps = vec![0u32; target_nvars];
            for (i, &e) in m.exps.iter().enumerate() {
                exps[map[i]] += e;
            }
            out.add_term(Monomial::new(exps), c.clone());
        }
        out
    }

    /// Exact quotient by `u_p - u_q` when it divides, computed by
    /// eliminating the highest power of `u_p` (the polynomial is treated as
    /// univariate in `u_p` with coefficients in the remaining variables).
    ///
    /// Returns `Some(quotient)` with `quotient * (u_p - u_q) == self`
    /// exactly when `u_p - u_q` divides, `None` otherwise. Divisibility is
    /// equivalent to the substitution `u_p -> u_q` sending the polynomial
    /// to zero.
    pub fn div_by_var_difference(
        &self,
        p: usize,
        q: usize,
    ) -> Result<Option<IntPolynomial>, PolyError> {
        if p >= self.nvars {
            return Err(PolyError::IndexOutOfRange {
                index: p,
                nvars: self.nvars,
            });
        }
        if q >= self.nvars {
            return Err(PolyError::IndexOutOfRange {
                index: q,
                nvars: self.nvars,
            });
        }
        if p == q {
            return Err(PolyError::EqualIndices(p));
        }
        let mut rem = self.clone();
        let mut quotient = IntPolynomial::zero(self.nvars);
        loop {
            // leading term in u_p
            let lead = rem
                .terms
                .iter()
                .filter(|(m, _)| m.exp(p) > 0)
                .max_by_key(|(m, _)| m.exp(p))
                .map(|(m, c)| (m.clone(), c.clone()));
            let Some((m, c)) = lead else { break };
            let mut exps = m.exps().to_vec();
            exps[p] -= 1;
            let qterm =
                IntPolynomial::from_terms(self.nvars, [(Monomial::new(exps.clone()), c.clone())]);
            quotient = quotient.add(&qterm);
            // rem -= qterm * (u_p - u_q)
            rem.add_term(m, -c.clone());
            let mut shifted = exps;
            shifted[q] += 1;
            rem.add_term(Monomial::new(shifted), c);
        }
        if rem.is_zero() {
            Ok(Some(quotient))
        } else {
            Ok(None)
        }
    }

    /// The `i`-th elementary symmetric polynomial in the listed variables,
    /// inside the ambient ring with `nvars` variables. `e_0 = 1`.
    pub fn elementary_symmetric(
        i: usize,
        vars: &[usize],
        nvars: usize,
    ) -> Result<IntPolynomial, PolyError> {
        if i > vars.len() {
            return Err(PolyError::SymmetricIndexOutOfRange {
                index: i,
                nvars: vars.len(),
            });
        }
        for &v in vars {
            if v >= nvars {
                return Err(PolyError::IndexOutOfRange { index: v, nvars });
            }
        }
        // Row i of the Pascal-style recurrence over prefixes of `vars`.
        let mut rows: Vec<IntPolynomial> = (0..=i)
            .map(|k| {
                if k == 0 {
                    IntPolynomial::one(nvars)
                } else {
                    IntPolynomial::zero(nvars)
                }
            })
            .collect();
        for &v in vars {
            let x = IntPolynomial::variable(nvars, v)?;
            for k in (1..=i).rev() {
                let bumped = rows[k - 1].mul(&x);
                rows[k] = rows[k].add(&bumped);
            }
        }
        Ok(rows.pop().expect("rows nonempty"))
    }

    /// Renders with the given variable namer, for reports and errors.
    pub fn to_string_with(&self, name: &dyn Fn(usize) -> String) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (idx, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if idx == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let vars: Vec<String> = (0..self.nvars)
                .filter(|&i| m.exp(i) > 0)
                .map(|i| {
                    if m.exp(i) == 1 {
                        name(i)
                    } else {
                        format!("{}^{}", name(i), m.exp(i))
                    }
                })
                .collect();
            if vars.is_empty() {
                out.push_str(&abs.to_string());
            } else {
                if !abs.is_one() {
                    out.push_str(&abs.to_string());
                    out.push('*');
                }
                out.push_str(&vars.join("*"));
            }
        }
        out
    }
}

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_string_with(&|i| format!("u{}", i + 1)))
    }
}

impl std::ops::Add for &IntPolynomial {
    type Output = IntPolynomial;
    fn add(self, rhs: &IntPolynomial) -> IntPolynomial {
        IntPolynomial::add(self, rhs)
    }
}

impl std::ops::Sub for &IntPolynomial {
    type Output = IntPolynomial;
    fn sub(self, rhs: &IntPolynomial) -> IntPolynomial {
        IntPolynomial::sub(self, rhs)
    }
}

impl std::ops::Mul for &IntPolynomial {
    type Output = IntPolynomial;
    fn mul(self, rhs: &IntPolynomial) -> IntPolynomial {
        IntPolynomial::mul(self, rhs)
    }
}

impl std::ops::Neg for &IntPolynomial {
    type Output = IntPolynomial;
    fn neg(self) -> IntPolynomial {
        IntPolynomial::neg(self)
    }
}

// JSON form: an array of {"exp": [e1,...,en], "coeff": "<decimal>"} in
// graded-lex order. Coefficients are decimal strings since they routinely
// exceed 64 bits.
#[derive(Serialize, Deserialize)]
struct TermRepr {
    exp: Vec<u32>,
    coeff: String,
}

impl Serialize for IntPolynomial {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.terms.len()))?;
        for (m, c) in &self.terms {
            seq.serialize_element(&TermRepr {
                exp: m.exps().to_vec(),
                coeff: c.to_string(),
            })?;
        }
        seq.end()
    }
}

impl<'de> Deserialize<'de> for IntPolynomial {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let terms = Vec::<TermRepr>::deserialize(deserializer)?;
        let nvars = terms
            .first()
            .map(|t| t.exp.len())
            .ok_or_else(|| D::Error::custom("cannot infer arity of an empty term list"))?;
        let mut poly = IntPolynomial::zero(nvars);
        for t in terms {
            if t.exp.len() != nvars {
                return Err(D::Error::custom("inconsistent exponent vector lengths"));
            }
            let c: BigInt = t
                .coeff
                .parse()
                .map_err(|e| D::Error::custom(format!("bad coefficient: {e}")))?;
            poly.add_term(Monomial::new(t.exp), c);
        }
        Ok(poly)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha12Rng;

    fn var(n: usize, i: usize) -> IntPolynomial {
        IntPolynomial::variable(n, i).unwrap()
    }

    /// Independent schoolbook oracle: the coefficient of `m` in `a*b` is the
    /// sum over exponentwise splittings `m = e + (m - e)`.
    fn mul_coeff_oracle(a: &IntPolynomial, b: &IntPolynomial, m: &Monomial) -> BigInt {
        let mut total = BigInt::zero();
        for (ma, ca) in a.terms() {
            if (0..m.nvars()).all(|i| ma.exp(i) <= m.exp(i)) {
                let rest = Monomial::new(
                    (0..m.nvars()).map(|i| m.exp(i) - ma.exp(i)).collect(),
                );
                total += ca * b.coefficient(&rest);
            }
        }
        total
    }

    fn random_poly(rng: &mut ChaCha12Rng, nvars: usize, max_deg: u32, terms: usize) -> IntPolynomial {
        let mut p = IntPolynomial::zero(nvars);
        for _ in 0..terms {
            let mut exps = vec![0u32; nvars];
            let deg = rng.gen_range(0..=max_deg);
            for _ in 0..deg {
                exps[rng.gen_range(0..nvars)] += 1;
            }
            let c = rng.gen_range(-9i64..=9);
            p = p.add(&IntPolynomial::from_terms(
                nvars,
                [(Monomial::new(exps), BigInt::from(c))],
            ));
        }
        p
    }

    #[test]
    fn difference_of_squares() {
        let u1 = var(2, 0);
        let u2 = var(2, 1);
        let lhs = (&u1 - &u2).mul(&u1.add(&u2));
        let expected = &u1.pow(2) - &u2.pow(2);
        assert_eq!(lhs, expected);
    }

    #[test]
    fn additive_identity() {
        let p = IntPolynomial::from_terms(
            3,
            [
                (Monomial::new(vec![1, 0, 2]), BigInt::from(5)),
                (Monomial::new(vec![0, 1, 0]), BigInt::from(-2)),
            ],
        );
        assert_eq!(p.add(&IntPolynomial::zero(3)), p);
    }

    #[test]
    fn square_of_sum_matches_schoolbook_oracle() {
        let u1 = var(2, 0);
        let u2 = var(2, 1);
        let s = u1.add(&u2);
        let sq = s.mul(&s);
        // u1^2 + 2 u1 u2 + u2^2
        assert_eq!(sq.coefficient(&Monomial::new(vec![2, 0])), BigInt::from(1));
        assert_eq!(sq.coefficient(&Monomial::new(vec![1, 1])), BigInt::from(2));
        assert_eq!(sq.coefficient(&Monomial::new(vec![0, 2])), BigInt::from(1));
        assert_eq!(sq.num_terms(), 3);
        for (m, c) in sq.terms() {
            assert_eq!(c, &mul_coeff_oracle(&s, &s, m));
        }
    }

    #[test]
    #[should_panic(expected = "variable count mismatch")]
    fn arity_mismatch_panics() {
        let _ = IntPolynomial::one(2).add(&IntPolynomial::one(3));
    }

    #[test]
    fn substitute_examples() {
        let u1 = var(3, 0);
        let u2 = var(3, 1);
        let u3 = var(3, 2);
        // root of the factor u1 - u2
        let p = &u1.pow(2) - &u2.pow(2);
        assert!(p.substitute(0, &u2).unwrap().is_zero());
        // renaming
        assert_eq!(u1.add(&u3).substitute(0, &u2).unwrap(), u2.add(&u3));
        // direct expansion: u1*u2 with u2 -> u1+u2
        let prod = u1.mul(&u2);
        let expect = &u1.pow(2) + &u1.mul(&u2);
        assert_eq!(prod.substitute(1, &u1.add(&u2)).unwrap(), expect);
        // identity substitution
        let q = IntPolynomial::from_terms(
            3,
            [
                (Monomial::new(vec![2, 1, 0]), BigInt::from(7)),
                (Monomial::new(vec![0, 0, 3]), BigInt::from(-4)),
            ],
        );
        for i in 0..3 {
            assert_eq!(q.substitute(i, &var(3, i)).unwrap(), q);
        }
        assert!(q.substitute(9, &u1).is_err());
    }

    #[test]
    fn divide_by_variable_difference() {
        let u1 = var(3, 0);
        let u2 = var(3, 1);
        let u3 = var(3, 2);
        let p = &u1.pow(2) - &u2.pow(2);
        let q = p.div_by_var_difference(0, 1).unwrap().unwrap();
        assert_eq!(q, u1.add(&u2));
        assert_eq!(q.mul(&(&u1 - &u2)), p);

        // substitution leaves u2 - u3, not divisible
        assert!((&u1 - &u3).div_by_var_difference(0, 1).unwrap().is_none());

        // multiply-then-divide round trip
        let factor = u1.mul(&u2).add(&u3.pow(2));
        let prod = (&u1 - &u2).mul(&factor);
        assert_eq!(prod.div_by_var_difference(0, 1).unwrap().unwrap(), factor);

        assert_eq!(
            p.div_by_var_difference(0, 0),
            Err(PolyError::EqualIndices(0))
        );
    }

    #[test]
    fn divrem_round_trip_randomized() {
        let mut rng = ChaCha12Rng::seed_from_u64(7);
        for _ in 0..60 {
            let n = rng.gen_range(2..=4);
            let q = random_poly(&mut rng, n, 4, 5);
            let p = rng.gen_range(0..n);
            let mut qi = rng.gen_range(0..n - 1);
            if qi >= p {
                qi += 1;
            }
            let diff = &var(n, p) - &var(n, qi);
            let prod = q.mul(&diff);
            let recovered = prod.div_by_var_difference(p, qi).unwrap();
            assert_eq!(recovered, Some(q));
        }
    }

    #[test]
    fn elementary_symmetric_examples() {
        let e1 = IntPolynomial::elementary_symmetric(1, &[0, 1], 2).unwrap();
        assert_eq!(e1, var(2, 0).add(&var(2, 1)));

        let e2 = IntPolynomial::elementary_symmetric(2, &[0, 1, 2], 3).unwrap();
        let expect = var(3, 0)
            .mul(&var(3, 1))
            .add(&var(3, 0).mul(&var(3, 2)))
            .add(&var(3, 1).mul(&var(3, 2)));
        assert_eq!(e2, expect);

        assert_eq!(
            IntPolynomial::elementary_symmetric(0, &[0, 1], 2).unwrap(),
            IntPolynomial::one(2)
        );
        assert!(IntPolynomial::elementary_symmetric(3, &[0, 1], 2).is_err());
    }

    #[test]
    fn monomial_listing() {
        let d1 = monomials_of_degree(1, 2);
        assert_eq!(
            d1,
            vec![Monomial::new(vec![1, 0]), Monomial::new(vec![0, 1])]
        );
        assert_eq!(monomials_of_degree(2, 2).len(), 3);
        assert_eq!(monomials_of_degree(3, 3).len(), 10);
        // listing agrees with the global term order
        let listed = monomials_of_degree(3, 3);
        let mut sorted = listed.clone();
        sorted.sort();
        assert_eq!(listed, sorted);
    }

    #[test]
    fn ring_axioms_randomized() {
        let mut rng = ChaCha12Rng::seed_from_u64(42);
        for _ in 0..40 {
            let n = rng.gen_range(1..=4);
            let a = random_poly(&mut rng, n, 6, 4);
            let b = random_poly(&mut rng, n, 6, 4);
            let c = random_poly(&mut rng, n, 6, 4);
            assert_eq!(a.add(&b), b.add(&a));
            assert_eq!(a.mul(&b), b.mul(&a));
            assert_eq!(a.add(&b).add(&c), a.add(&b.add(&c)));
            assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
            assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
            assert_eq!(a.sub(&a), IntPolynomial::zero(n));
        }
    }

    #[test]
    fn random_products_match_schoolbook_oracle() {
        let mut rng = ChaCha12Rng::seed_from_u64(3);
        for _ in 0..25 {
            let n = rng.gen_range(1..=3);
            let a = random_poly(&mut rng, n, 4, 4);
            let b = random_poly(&mut rng, n, 4, 4);
            let prod = a.mul(&b);
            for (m, c) in prod.terms() {
                assert_eq!(c, &mul_coeff_oracle(&a, &b, m));
            }
            // and no spurious zero entries are stored
            assert!(prod.terms().all(|(_, c)| !c.is_zero()));
        }
    }

    #[test]
    fn homogeneous_split() {
        let u1 = var(2, 0);
        let u2 = var(2, 1);
        let p = u1.pow(3).add(&u1.mul(&u2)).add(&IntPolynomial::one(2));
        let comps = p.homogeneous_components();
        assert_eq!(comps.len(), 3);
        let resummed = comps
            .iter()
            .fold(IntPolynomial::zero(2), |acc, (_, c)| acc.add(c));
        assert_eq!(resummed, p);
        assert!(!p.is_homogeneous());
        assert_eq!(p.homogeneous_component(2), u1.mul(&u2));
    }

    #[test]
    fn json_round_trip() {
        let p = IntPolynomial::from_terms(
            2,
            [
                (Monomial::new(vec![2, 0]), BigInt::from(1)),
                (Monomial::new(vec![0, 2]), BigInt::from(-1)),
            ],
        );
        let json = serde_json::to_string(&p).unwrap();
        assert_eq!(json, r#"[{"exp":[2,0],"coeff":"1"},{"exp":[0,2],"coeff":"-1"}]"#);
        let back: IntPolynomial = serde_json::from_str(&json).unwrap();
        assert_eq!(back, p);
    }
}
