//! The Weyl algebra of polynomial-coefficient differential operators in `n`
//! variables, with exact Gaussian-rational coefficients.
//!
//! Elements are kept in normal form `sum_alpha p_alpha(z) d^alpha` with all
//! derivatives on the right. On top of the plain algebra the module provides
//! the two ideal tests that present the algebra of differential operators on
//! the cone `{Q = 0}` as restrictable operators modulo the left ideal
//! `I*D(V)`:
//!
//! * `in_left_ideal` — every normal-form coefficient is divisible by `Q`;
//! * `preserves_ideal` — `d` composed with multiplication by `Q` lies in the
//!   left ideal.
//!
//! The second test is the module's one nontrivial correctness lemma. An
//! operator `sum p_alpha d^alpha` whose image is contained in the principal
//! ideal `(Q)` must have every `p_alpha` divisible by `Q`: apply the operator
//! to monomials in increasing degree; at each step the contribution of the
//! coefficients of lower derivative order is already known to lie in `(Q)`,
//! and the new coefficient appears with an invertible factorial factor. Hence
//! `d(I) ⊆ I` iff `d ∘ M_Q ∈ I*D(V)`, which reduces restrictability to the
//! coefficient divisibility test.

use crate::scalar::Scalar;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum WeylError {
    #[error("ambient dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("quadratic form must be symmetric")]
    NotSymmetric,
    #[error("quadratic form is degenerate")]
    Degenerate,
    #[error("ambient dimension must exceed 2, got {0}")]
    DimensionTooSmall(usize),
}

/// Exponent vector of a monomial `z^alpha` or a derivative `d^alpha`.
///
/// The ordering is graded lexicographic: total degree first, then
/// lexicographic on the exponents.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct MultiIndex(pub Vec<u32>);

impl MultiIndex {
    pub fn zero(n: usize) -> Self {
        MultiIndex(vec![0; n])
    }

    pub fn unit(n: usize, i: usize) -> Self {
        let mut v = vec![0; n];
        v[i] = 1;
        MultiIndex(v)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Total degree `|alpha|`.
    pub fn total(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn add(&self, other: &MultiIndex) -> MultiIndex {
        MultiIndex(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// Componentwise subtraction; `None` if any entry would go negative.
    pub fn checked_sub(&self, other: &MultiIndex) -> Option<MultiIndex> {
        let mut v = Vec::with_capacity(self.0.len());
        for (a, b) in self.0.iter().zip(&other.0) {
            if a < b {
                return None;
            }
            v.push(a - b);
        }
        Some(MultiIndex(v))
    }

    pub fn divides(&self, other: &MultiIndex) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// All multi-indices `gamma <= alpha` componentwise.
    pub fn sub_indices(&self) -> Vec<MultiIndex> {
        let mut out = vec![MultiIndex(vec![])];
        for &a in &self.0 {
            let mut next = Vec::with_capacity(out.len() * (a as usize + 1));
            for prefix in &out {
                for g in 0..=a {
                    let mut v = prefix.0.clone();
                    v.push(g);
                    next.push(MultiIndex(v));
                }
            }
            out = next;
        }
        out
    }
}

impl PartialOrd for MultiIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for MultiIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        self.total()
            .cmp(&other.total())
            .then_with(|| self.0.cmp(&other.0))
    }
}

/// Monomial orders supported by the division routine. The left ideal is
/// principal, so divisibility does not depend on the order; tests cross-check
/// the two.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum MonomialOrder {
    GradedLex,
    Lex,
}

fn cmp_in_order(a: &MultiIndex, b: &MultiIndex, order: MonomialOrder) -> Ordering {
    match order {
        MonomialOrder::GradedLex => a.cmp(b),
        MonomialOrder::Lex => a.0.cmp(&b.0),
    }
}

/// Sparse multivariate polynomial over Q(i). Zero coefficients are never
/// stored.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Polynomial {
    n: usize,
    terms: BTreeMap<MultiIndex, Scalar>,
}

impl Polynomial {
    pub fn zero(n: usize) -> Self {
        Polynomial {
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(n: usize, c: Scalar) -> Self {
        let mut p = Polynomial::zero(n);
        p.add_term(MultiIndex::zero(n), c);
        p
    }

    pub fn one(n: usize) -> Self {
        Polynomial::constant(n, Scalar::one())
    }

    pub fn variable(n: usize, i: usize) -> Self {
        let mut p = Polynomial::zero(n);
        p.add_term(MultiIndex::unit(n, i), Scalar::one());
        p
    }

    pub fn monomial(n: usize, idx: MultiIndex, c: Scalar) -> Self {
        let mut p = Polynomial::zero(n);
        p.add_term(idx, c);
        p
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &Scalar)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.total()).max()
    }

    pub fn add_term(&mut self, idx: MultiIndex, c: Scalar) {
        debug_assert_eq!(idx.len(), self.n);
        if c.is_zero() {
            return;
        }
        match self.terms.entry(idx) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += &c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }

    pub fn neg(&self) -> Polynomial {
        let mut out = Polynomial::zero(self.n);
        for (m, c) in &self.terms {
            out.terms.insert(m.clone(), -c.clone());
        }
        out
    }

    pub fn scale(&self, c: &Scalar) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(self.n);
        }
        let mut out = Polynomial::zero(self.n);
        for (m, a) in &self.terms {
            out.terms.insert(m.clone(), a * c);
        }
        out
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        let mut out = Polynomial::zero(self.n);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.add(mb), ca * cb);
            }
        }
        out
    }

    /// Exact iterated partial derivative `d^gamma p`, including the falling
    /// factorial factors.
    pub fn partial_multi(&self, gamma: &MultiIndex) -> Polynomial {
        let mut out = Polynomial::zero(self.n);
        'terms: for (m, c) in &self.terms {
            let mut coeff = BigInt::one();
            let mut idx = Vec::with_capacity(self.n);
            for ((&mi, &gi), _) in m.0.iter().zip(&gamma.0).zip(0..) {
                if mi < gi {
                    continue 'terms;
                }
                for j in 0..gi {
                    coeff *= BigInt::from(mi - j);
                }
                idx.push(mi - gi);
            }
            let factor = Scalar::from_rational(BigRational::from_integer(coeff));
            out.add_term(MultiIndex(idx), c * &factor);
        }
        out
    }

    fn leading_term(&self, order: MonomialOrder) -> Option<(&MultiIndex, &Scalar)> {
        match order {
            MonomialOrder::GradedLex => self.terms.iter().next_back(),
            MonomialOrder::Lex => self
                .terms
                .iter()
                .max_by(|a, b| cmp_in_order(a.0, b.0, MonomialOrder::Lex)),
        }
    }

    /// Division with remainder by a single divisor. Since the ideal generated
    /// by the divisor is principal, `rem == 0` iff the divisor divides
    /// `self`, independent of the monomial order.
    pub fn div_rem(&self, divisor: &Polynomial, order: MonomialOrder) -> (Polynomial, Polynomial) {
        assert_eq!(self.n, divisor.n);
        let (lt_m, lt_c) = divisor
            .leading_term(order)
            .expect("division by the zero polynomial");
        let lt_c_inv = lt_c.inv();
        let mut p = self.clone();
        let mut quot = Polynomial::zero(self.n);
        let mut rem = Polynomial::zero(self.n);
        while let Some((m, c)) = p.leading_term(order).map(|(m, c)| (m.clone(), c.clone())) {
            if let Some(q_idx) = m.checked_sub(lt_m) {
                let q_c = &c * &lt_c_inv;
                quot.add_term(q_idx.clone(), q_c.clone());
                let piece = divisor.mul(&Polynomial::monomial(self.n, q_idx, q_c));
                p = p.sub(&piece);
            } else {
                rem.add_term(m.clone(), c.clone());
                p.terms.remove(&m);
            }
        }
        (quot, rem)
    }

    pub fn is_divisible_by(&self, divisor: &Polynomial, order: MonomialOrder) -> bool {
        self.div_rem(divisor, order).1.is_zero()
    }
}

/// Nondegenerate symmetric bilinear form on n > 2 variables, given by a
/// rational symmetric matrix `B`; the quadratic polynomial is
/// `Q(z) = sum B_ij z_i z_j`.
#[derive(Clone, PartialEq, Debug)]
pub struct QuadraticForm {
    n: usize,
    b: Vec<Vec<BigRational>>,
    b_inv: Vec<Vec<BigRational>>,
}

impl QuadraticForm {
    pub fn new(b: Vec<Vec<BigRational>>) -> Result<Self, WeylError> {
        let n = b.len();
        if n <= 2 {
            return Err(WeylError::DimensionTooSmall(n));
        }
        for row in &b {
            if row.len() != n {
                return Err(WeylError::NotSymmetric);
            }
        }
        for i in 0..n {
            for j in 0..i {
                if b[i][j] != b[j][i] {
                    return Err(WeylError::NotSymmetric);
                }
            }
        }
        let b_inv = crate::qlinalg::invert_rational(&b).ok_or(WeylError::Degenerate)?;
        Ok(QuadraticForm { n, b, b_inv })
    }

    /// The standard Lorentzian form diag(1, ..., 1, -1).
    pub fn standard(n: usize) -> Self {
        let mut b = vec![vec![BigRational::zero(); n]; n];
        for (i, row) in b.iter_mut().enumerate() {
            row[i] = if i + 1 == n {
                -BigRational::one()
            } else {
                BigRational::one()
            };
        }
        QuadraticForm::new(b).expect("standard form is valid")
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn matrix(&self) -> &Vec<Vec<BigRational>> {
        &self.b
    }

    pub fn matrix_inv(&self) -> &Vec<Vec<BigRational>> {
        &self.b_inv
    }

    /// `B(u, v) = u^T B v` for rational vectors.
    pub fn bilinear(&self, u: &[BigRational], v: &[BigRational]) -> BigRational {
        let mut acc = BigRational::zero();
        for i in 0..self.n {
            for j in 0..self.n {
                acc += &u[i] * &self.b[i][j] * &v[j];
            }
        }
        acc
    }

    /// The quadratic polynomial `Q(z)`.
    pub fn polynomial(&self) -> Polynomial {
        let mut p = Polynomial::zero(self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                let mut idx = vec![0u32; self.n];
                idx[i] += 1;
                idx[j] += 1;
                p.add_term(MultiIndex(idx), Scalar::from_rational(self.b[i][j].clone()));
            }
        }
        p
    }

    /// The second-order operator `box_Q = sum (B^-1)_ij d_i d_j` attached to
    /// the form.
    pub fn box_operator(&self) -> WeylElement {
        let mut d = WeylElement::zero(self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                if self.b_inv[i][j].is_zero() {
                    continue;
                }
                let mut idx = vec![0u32; self.n];
                idx[i] += 1;
                idx[j] += 1;
                d.add_term(
                    MultiIndex(idx),
                    Polynomial::constant(self.n, Scalar::from_rational(self.b_inv[i][j].clone())),
                );
            }
        }
        d
    }

    /// Signature (positives, negatives) computed exactly by congruence
    /// diagonalization over Q.
    pub fn signature(&self) -> (usize, usize) {
        crate::qlinalg::signature(&self.b)
    }
}

/// A differential operator in normal form `sum_alpha p_alpha(z) d^alpha`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct WeylElement {
    n: usize,
    terms: BTreeMap<MultiIndex, Polynomial>,
}

impl WeylElement {
    pub fn zero(n: usize) -> Self {
        WeylElement {
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(n: usize) -> Self {
        WeylElement::from_polynomial(Polynomial::one(n))
    }

    pub fn constant(n: usize, c: Scalar) -> Self {
        WeylElement::from_polynomial(Polynomial::constant(n, c))
    }

    /// Multiplication operator by a polynomial.
    pub fn from_polynomial(p: Polynomial) -> Self {
        let n = p.dim();
        let mut d = WeylElement::zero(n);
        d.add_term(MultiIndex::zero(n), p);
        d
    }

    /// The partial derivative `d_i`.
    pub fn partial(n: usize, i: usize) -> Self {
        let mut d = WeylElement::zero(n);
        d.add_term(MultiIndex::unit(n, i), Polynomial::one(n));
        d
    }

    /// The coordinate multiplication operator `z_i`.
    pub fn coordinate(n: usize, i: usize) -> Self {
        WeylElement::from_polynomial(Polynomial::variable(n, i))
    }

    /// Directional derivative along a rational vector.
    pub fn directional(n: usize, v: &[BigRational]) -> Self {
        let mut d = WeylElement::zero(n);
        for (i, vi) in v.iter().enumerate() {
            if vi.is_zero() {
                continue;
            }
            d.add_term(
                MultiIndex::unit(n, i),
                Polynomial::constant(n, Scalar::from_rational(vi.clone())),
            );
        }
        d
    }

    /// The Euler operator `chi = sum z_i d_i`.
    pub fn euler(n: usize) -> Self {
        let mut d = WeylElement::zero(n);
        for i in 0..n {
            d.add_term(MultiIndex::unit(n, i), Polynomial::variable(n, i));
        }
        d
    }

    /// The shifted Euler operator `h = 2 chi + (n - 2)`.
    pub fn shifted_euler(n: usize) -> Self {
        let mut d = WeylElement::euler(n).scale(&Scalar::from_int(2));
        d.add_term(
            MultiIndex::zero(n),
            Polynomial::constant(n, Scalar::from_int(n as i64 - 2)),
        );
        d
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Operator order: the maximal derivative multi-degree.
    pub fn order(&self) -> u32 {
        self.terms.keys().map(|a| a.total()).max().unwrap_or(0)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &Polynomial)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, alpha: &MultiIndex) -> Option<&Polynomial> {
        self.terms.get(alpha)
    }

    pub fn add_term(&mut self, alpha: MultiIndex, p: Polynomial) {
        debug_assert_eq!(alpha.len(), self.n);
        if p.is_zero() {
            return;
        }
        match self.terms.entry(alpha) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(p);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get().add(&p);
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn add(&self, other: &WeylElement) -> WeylElement {
        let mut out = self.clone();
        for (a, p) in &other.terms {
            out.add_term(a.clone(), p.clone());
        }
        out
    }

    pub fn sub(&self, other: &WeylElement) -> WeylElement {
        let mut out = self.clone();
        for (a, p) in &other.terms {
            out.add_term(a.clone(), p.neg());
        }
        out
    }

    pub fn neg(&self) -> WeylElement {
        self.scale(&Scalar::from_int(-1))
    }

    pub fn scale(&self, c: &Scalar) -> WeylElement {
        let mut out = WeylElement::zero(self.n);
        if c.is_zero() {
            return out;
        }
        for (a, p) in &self.terms {
            out.terms.insert(a.clone(), p.scale(c));
        }
        out
    }

    fn check_dim(&self, other: &WeylElement) -> Result<(), WeylError> {
        if self.n != other.n {
            Err(WeylError::DimensionMismatch(self.n, other.n))
        } else {
            Ok(())
        }
    }

    /// Normal-ordered product via the iterated Leibniz rule:
    /// `(p d^a)(q d^b) = sum_{g <= a} C(a, g) p d^g(q) d^(a - g + b)`.
    pub fn normal_mul(&self, other: &WeylElement) -> Result<WeylElement, WeylError> {
        self.check_dim(other)?;
        let mut out = WeylElement::zero(self.n);
        for (alpha, p) in &self.terms {
            for (gamma, beta, q_der_coeff) in leibniz_splits(alpha) {
                for (b_idx, q) in &other.terms {
                    let dq = q.partial_multi(&gamma);
                    if dq.is_zero() {
                        continue;
                    }
                    let coeff =
                        Scalar::from_rational(BigRational::from_integer(q_der_coeff.clone()));
                    out.add_term(beta.add(b_idx), p.mul(&dq).scale(&coeff));
                }
            }
        }
        Ok(out)
    }

    /// `[a, b] = ab - ba` in normal form.
    pub fn commutator(&self, other: &WeylElement) -> Result<WeylElement, WeylError> {
        Ok(self.normal_mul(other)?.sub(&other.normal_mul(self)?))
    }

    /// The action on polynomials.
    pub fn apply(&self, f: &Polynomial) -> Result<Polynomial, WeylError> {
        if self.n != f.dim() {
            return Err(WeylError::DimensionMismatch(self.n, f.dim()));
        }
        let mut out = Polynomial::zero(self.n);
        for (alpha, p) in &self.terms {
            let df = f.partial_multi(alpha);
            if !df.is_zero() {
                out = out.add(&p.mul(&df));
            }
        }
        Ok(out)
    }

    /// Decomposition by rescaling weight. A monomial `z^m d^alpha` has weight
    /// `|m| - |alpha|`; the component collecting all terms of weight `l` is
    /// reported with its filtration degree `k` (its maximal derivative
    /// order), so e.g. the shifted Euler operator is a single `(1, 0)`
    /// component, constant shift included.
    pub fn bigrade(&self) -> Vec<((u32, i64), WeylElement)> {
        let mut by_weight: BTreeMap<i64, WeylElement> = BTreeMap::new();
        for (alpha, p) in &self.terms {
            for (m, c) in p.terms() {
                let weight = m.total() as i64 - alpha.total() as i64;
                by_weight
                    .entry(weight)
                    .or_insert_with(|| WeylElement::zero(self.n))
                    .add_term(
                        alpha.clone(),
                        Polynomial::monomial(self.n, m.clone(), c.clone()),
                    );
            }
        }
        by_weight
            .into_iter()
            .map(|(l, d)| ((d.order(), l), d))
            .collect()
    }

    /// True iff the element is homogeneous of the given rescaling weight.
    pub fn is_homogeneous_of_weight(&self, l: i64) -> bool {
        let parts = self.bigrade();
        parts.is_empty() || (parts.len() == 1 && parts[0].0 .1 == l)
    }

    /// Membership in the left ideal `I*D(V)`: every normal-form coefficient
    /// is divisible by `Q`.
    pub fn in_left_ideal(&self, q: &QuadraticForm) -> bool {
        self.in_left_ideal_with_order(q, MonomialOrder::GradedLex)
    }

    pub fn in_left_ideal_with_order(&self, q: &QuadraticForm, order: MonomialOrder) -> bool {
        let qp = q.polynomial();
        self.terms.values().all(|p| p.is_divisible_by(&qp, order))
    }

    /// Restrictability to the cone: `d(I) ⊆ I`, tested as
    /// `d ∘ M_Q ∈ I*D(V)` (see the module docs for why these agree).
    pub fn preserves_ideal(&self, q: &QuadraticForm) -> bool {
        let m_q = WeylElement::from_polynomial(q.polynomial());
        self.normal_mul(&m_q)
            .expect("same ambient dimension")
            .in_left_ideal(q)
    }

    /// Equality as operators on the cone.
    pub fn cone_equal(&self, other: &WeylElement, q: &QuadraticForm) -> bool {
        self.sub(other).in_left_ideal(q)
    }

    /// Reduce every coefficient modulo `Q`; the result is the canonical
    /// representative of the class in `D(V)/I*D(V)`.
    pub fn reduce_mod_ideal(&self, q: &QuadraticForm) -> WeylElement {
        let qp = q.polynomial();
        let mut out = WeylElement::zero(self.n);
        for (alpha, p) in &self.terms {
            let (_, rem) = p.div_rem(&qp, MonomialOrder::GradedLex);
            out.add_term(alpha.clone(), rem);
        }
        out
    }
}

/// All Leibniz splittings of a derivative multi-index `alpha`: triples
/// `(gamma, alpha - gamma, C(alpha, gamma))`.
fn leibniz_splits(alpha: &MultiIndex) -> Vec<(MultiIndex, MultiIndex, BigInt)> {
    alpha
        .sub_indices()
        .into_iter()
        .map(|gamma| {
            let rest = alpha.checked_sub(&gamma).expect("gamma <= alpha");
            let mut binom = BigInt::one();
            for (&a, &g) in alpha.0.iter().zip(&gamma.0) {
                binom *= binomial(a, g);
            }
            (gamma, rest, binom)
        })
        .collect()
}

fn binomial(n: u32, k: u32) -> BigInt {
    let mut acc = BigInt::one();
    for j in 0..k {
        acc = acc * BigInt::from(n - j) / BigInt::from(j + 1);
    }
    acc
}

impl fmt::Display for WeylElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", crate::dsl::format_weyl(self))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(n: usize, i: usize) -> WeylElement {
        WeylElement::partial(n, i)
    }

    fn z(n: usize, i: usize) -> WeylElement {
        WeylElement::coordinate(n, i)
    }

    #[test]
    fn leibniz_base_case() {
        // d1 * z1 = z1 d1 + 1
        let n = 4;
        let prod = d(n, 0).normal_mul(&z(n, 0)).unwrap();
        let expected = z(n, 0)
            .normal_mul(&d(n, 0))
            .unwrap()
            .add(&WeylElement::one(n));
        assert_eq!(prod, expected);
        // z1 * d1 is already normal ordered
        let prod2 = z(n, 0).normal_mul(&d(n, 0)).unwrap();
        assert_eq!(prod2.order(), 1);
        assert_eq!(prod2.terms().count(), 1);
    }

    #[test]
    fn box_q_bracket_with_q_gives_shifted_euler() {
        // [box_Q, Q] = 4*chi + 2n = 2h + 4 (the metaplectic sl2 relation
        // [Q/2, -box/2] = chi + n/2), checked for the standard n=4 form.
        let n = 4;
        let q = QuadraticForm::standard(n);
        let box_q = q.box_operator();
        let m_q = WeylElement::from_polynomial(q.polynomial());
        let bracket = box_q.commutator(&m_q).unwrap();
        let expected = WeylElement::shifted_euler(n)
            .scale(&Scalar::from_int(2))
            .add(&WeylElement::constant(n, Scalar::from_int(4)));
        assert_eq!(bracket, expected);
    }

    #[test]
    fn canonical_commutator() {
        let n = 3;
        assert_eq!(d(n, 0).commutator(&z(n, 0)).unwrap(), WeylElement::one(n));
        assert!(d(n, 0).commutator(&z(n, 1)).unwrap().is_zero());
    }

    #[test]
    fn rotation_commutator() {
        // [z1 d2, z2 d1] = z1 d1 - z2 d2
        let n = 4;
        let a = z(n, 0).normal_mul(&d(n, 1)).unwrap();
        let b = z(n, 1).normal_mul(&d(n, 0)).unwrap();
        let lhs = a.commutator(&b).unwrap();
        let rhs = z(n, 0)
            .normal_mul(&d(n, 0))
            .unwrap()
            .sub(&z(n, 1).normal_mul(&d(n, 1)).unwrap());
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn h_bracket_with_coordinate() {
        // [h, z3] = 2 z3 in n=4
        let n = 4;
        let h = WeylElement::shifted_euler(n);
        let lhs = h.commutator(&z(n, 2)).unwrap();
        assert_eq!(lhs, z(n, 2).scale(&Scalar::from_int(2)));
    }

    #[test]
    fn apply_examples() {
        let n = 4;
        let q = QuadraticForm::standard(n);
        let h = WeylElement::shifted_euler(n);
        let z1z2 = Polynomial::variable(n, 0).mul(&Polynomial::variable(n, 1));
        // Euler weight of a degree-2 monomial under h is 2*2 + (n-2) = 6.
        assert_eq!(h.apply(&z1z2).unwrap(), z1z2.scale(&Scalar::from_int(6)));
        // box_Q(Q) = 2n = 8
        let box_q = q.box_operator();
        assert_eq!(
            box_q.apply(&q.polynomial()).unwrap(),
            Polynomial::constant(n, Scalar::from_int(8))
        );
        // d1(Q) = 2 z1
        assert_eq!(
            d(n, 0).apply(&q.polynomial()).unwrap(),
            Polynomial::variable(n, 0).scale(&Scalar::from_int(2))
        );
    }

    #[test]
    fn dimension_mismatch_errors() {
        let a = WeylElement::partial(3, 0);
        let b = WeylElement::partial(4, 0);
        assert_eq!(
            a.normal_mul(&b).unwrap_err(),
            WeylError::DimensionMismatch(3, 4)
        );
        let f = Polynomial::one(4);
        assert!(a.apply(&f).is_err());
    }

    #[test]
    fn bigrade_examples() {
        let n = 4;
        // z3 sits in the (0, 1) component.
        let parts = z(n, 2).bigrade();
        assert_eq!(parts.len(), 1);
        assert_eq!(parts[0].0, (0, 1));
        // h is a single (1, 0) component, constant included.
        let h = WeylElement::shifted_euler(n);
        let parts = h.bigrade();
        assert_eq!(parts.len(), 1);
        assert_eq!(parts[0].0, (1, 0));
        assert_eq!(parts[0].1, h);
        // z1 d2^2 + d1 is homogeneous of weight -1, filtration degree 2.
        let mut e = WeylElement::zero(n);
        let mut a = vec![0u32; n];
        a[1] = 2;
        e.add_term(MultiIndex(a), Polynomial::variable(n, 0));
        let e = e.add(&d(n, 0));
        let parts = e.bigrade();
        assert_eq!(parts.len(), 1);
        assert_eq!(parts[0].0, (2, -1));
        // Components sum back to the original element.
        let mixed = h.add(&z(n, 0)).add(&d(n, 3));
        let total = mixed
            .bigrade()
            .into_iter()
            .fold(WeylElement::zero(n), |acc, (_, c)| acc.add(&c));
        assert_eq!(total, mixed);
    }

    #[test]
    fn left_ideal_membership() {
        let n = 4;
        let q = QuadraticForm::standard(n);
        let m_q = WeylElement::from_polynomial(q.polynomial());
        // Q * d1 is in the ideal.
        let qd1 = m_q.normal_mul(&d(n, 0)).unwrap();
        assert!(qd1.in_left_ideal(&q));
        // z1 d1 is not.
        let zd = z(n, 0).normal_mul(&d(n, 0)).unwrap();
        assert!(!zd.in_left_ideal(&q));
        // Q*h + z1 leaves remainder z1.
        let h = WeylElement::shifted_euler(n);
        let e = m_q.normal_mul(&h).unwrap().add(&z(n, 0));
        assert!(!e.in_left_ideal(&q));
        let reduced = e.reduce_mod_ideal(&q);
        assert_eq!(reduced, z(n, 0));
    }

    #[test]
    fn preserves_ideal_examples() {
        let n = 4;
        let q = QuadraticForm::standard(n);
        // d1 does not restrict: d1(Q f) = 2 z1 f + Q d1 f.
        assert!(!d(n, 0).preserves_ideal(&q));
        // Rotations restrict: L = z1 d2 - z2 d1.
        let l = z(n, 0)
            .normal_mul(&d(n, 1))
            .unwrap()
            .sub(&z(n, 1).normal_mul(&d(n, 0)).unwrap());
        assert!(l.preserves_ideal(&q));
        // h restricts.
        assert!(WeylElement::shifted_euler(n).preserves_ideal(&q));
    }

    #[test]
    fn preserves_ideal_matches_brute_force() {
        // Cross-check the coefficient test against the action on all
        // monomials of bounded degree.
        let n = 3;
        let q = QuadraticForm::new(vec![
            vec![
                BigRational::from_integer(1.into()),
                BigRational::zero(),
                BigRational::zero(),
            ],
            vec![
                BigRational::zero(),
                BigRational::from_integer(2.into()),
                BigRational::zero(),
            ],
            vec![
                BigRational::zero(),
                BigRational::zero(),
                BigRational::from_integer((-1).into()),
            ],
        ])
        .unwrap();
        let candidates = vec![
            WeylElement::shifted_euler(n),
            d(n, 0),
            z(n, 0).normal_mul(&d(n, 1)).unwrap(),
            WeylElement::from_polynomial(q.polynomial()),
        ];
        let qp = q.polynomial();
        for cand in candidates {
            let coeff_test = cand.preserves_ideal(&q);
            let m_q = WeylElement::from_polynomial(qp.clone());
            let comp = cand.normal_mul(&m_q).unwrap();
            let max_deg = cand.order() + 2;
            let mut brute = true;
            for m in monomials_up_to(n, max_deg) {
                let img = comp
                    .apply(&Polynomial::monomial(n, m, Scalar::one()))
                    .unwrap();
                if !img.is_divisible_by(&qp, MonomialOrder::GradedLex) {
                    brute = false;
                    break;
                }
            }
            assert_eq!(coeff_test, brute, "disagreement for {cand}");
        }
    }

    #[test]
    fn division_order_independence() {
        let n = 4;
        let q = QuadraticForm::standard(n);
        let m_q = WeylElement::from_polynomial(q.polynomial());
        let h = WeylElement::shifted_euler(n);
        let inside = m_q.normal_mul(&h).unwrap();
        let outside = inside.add(&z(n, 0));
        for order in [MonomialOrder::GradedLex, MonomialOrder::Lex] {
            assert!(inside.in_left_ideal_with_order(&q, order));
            assert!(!outside.in_left_ideal_with_order(&q, order));
        }
    }

    fn monomials_up_to(n: usize, deg: u32) -> Vec<MultiIndex> {
        let mut out = vec![];
        fn rec(n: usize, deg: u32, prefix: &mut Vec<u32>, out: &mut Vec<MultiIndex>) {
            if prefix.len() == n {
                out.push(MultiIndex(prefix.clone()));
                return;
            }
            let used: u32 = prefix.iter().sum();
            for e in 0..=(deg - used) {
                prefix.push(e);
                rec(n, deg, prefix, out);
                prefix.pop();
            }
        }
        rec(n, deg, &mut vec![], &mut out);
        out
    }
}
