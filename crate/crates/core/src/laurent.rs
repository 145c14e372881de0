//! Laurent polynomials in one variable `v` with exact integer coefficients.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_integer::Integer;
use num_traits::{FromPrimitive, Signed, ToPrimitive};
use serde::ser::{SerializeSeq, Serializer};
use serde::Serialize;

use crate::error::{Error, Result};

/// Coefficient ring for [`LaurentPoly`].
pub trait Coeff:
    Clone
    + Ord
    + fmt::Debug
    + fmt::Display
    + Signed
    + Integer
    + FromPrimitive
    + ToPrimitive
    + Send
    + Sync
    + 'static
{
}

impl<T> Coeff for T where
    T: Clone
        + Ord
        + fmt::Debug
        + fmt::Display
        + Signed
        + Integer
        + FromPrimitive
        + ToPrimitive
        + Send
        + Sync
        + 'static
{
}

/// Sparse Laurent polynomial, exponent -> nonzero coefficient.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct LaurentPoly<C> {
    terms: BTreeMap<i64, C>,
}

impl<C: Coeff> LaurentPoly<C> {
    pub fn zero() -> Self {
        LaurentPoly { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Self::monomial(0, C::one())
    }

    /// The variable `v`.
    pub fn v() -> Self {
        Self::monomial(1, C::one())
    }

    /// `c * v^exp`
    pub fn monomial(exp: i64, c: C) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exp, c);
        }
        LaurentPoly { terms }
    }

    /// `v^exp`
    pub fn v_pow(exp: i64) -> Self {
        Self::monomial(exp, C::one())
    }

    pub fn constant(c: C) -> Self {
        Self::monomial(0, c)
    }

    pub fn from_terms<I: IntoIterator<Item = (i64, C)>>(it: I) -> Self {
        let mut p = Self::zero();
        for (e, c) in it {
            p.add_term(e, c);
        }
        p
    }

    /// Builds from small integer pairs, handy in tests.
    pub fn from_i64_terms(pairs: &[(i64, i64)]) -> Self {
        Self::from_terms(pairs.iter().map(|&(e, c)| (e, C::from_i64(c).expect("coefficient fits"))))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&0).is_some_and(|c| c.is_one())
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &C)> + '_ {
        self.terms.iter().map(|(e, c)| (*e, c))
    }

    pub fn coeff(&self, exp: i64) -> C {
        self.terms.get(&exp).cloned().unwrap_or_else(C::zero)
    }

    pub fn min_exp(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn max_exp(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    fn add_term(&mut self, exp: i64, c: C) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&exp) {
            Some(old) => {
                *old = old.clone() + c;
                if old.is_zero() {
                    self.terms.remove(&exp);
                }
            }
            None => {
                self.terms.insert(exp, c);
            }
        }
    }

    /// Multiplication by `v^k`.
    pub fn shift(&self, k: i64) -> Self {
        LaurentPoly { terms: self.terms.iter().map(|(e, c)| (e + k, c.clone())).collect() }
    }

    pub fn scale(&self, c: &C) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        LaurentPoly { terms: self.terms.iter().map(|(e, x)| (*e, x.clone() * c.clone())).collect() }
    }

    /// Substitutes `v -> v^{-1}`.
    pub fn bar(&self) -> Self {
        LaurentPoly { terms: self.terms.iter().map(|(e, c)| (-e, c.clone())).collect() }
    }

    /// Sum of coefficients, i.e. the value at `v = 1`.
    pub fn eval_one(&self) -> C {
        self.terms.values().fold(C::zero(), |acc, c| acc + c.clone())
    }

    pub fn has_nonnegative_coeffs(&self) -> bool {
        self.terms.values().all(|c| !c.is_negative())
    }

    /// Exact quotient `self / b`, by elimination from the lowest exponent upward.
    pub fn div_exact(&self, b: &Self) -> Result<Self> {
        let (b_lo, b_hi) = match (b.min_exp(), b.max_exp()) {
            (Some(lo), Some(hi)) => (lo, hi),
            _ => return Err(Error::DivisionByZero),
        };
        if self.is_zero() {
            return Ok(Self::zero());
        }
        let lead = b.terms[&b_lo].clone();
        let q_hi = self.max_exp().unwrap() - b_hi;
        let mut rem = self.clone();
        let mut q = Self::zero();
        while let Some(e) = rem.min_exp() {
            let qe = e - b_lo;
            if qe > q_hi {
                return Err(Error::NotDivisible);
            }
            let (quot, r) = rem.terms[&e].div_rem(&lead);
            if !r.is_zero() {
                return Err(Error::NotDivisible);
            }
            for (be, bc) in b.terms.iter() {
                rem.add_term(be + qe, -(bc.clone() * quot.clone()));
            }
            q.add_term(qe, quot);
        }
        Ok(q)
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Converts coefficients into another ring, failing if one does not fit.
    pub fn convert<D: Coeff>(&self) -> Option<LaurentPoly<D>> {
        let mut out = LaurentPoly::<D>::zero();
        for (e, c) in self.terms.iter() {
            let d = match c.to_i64() {
                Some(x) => D::from_i64(x)?,
                None => D::from_i128(c.to_i128()?)?,
            };
            out.add_term(*e, d);
        }
        Some(out)
    }
}

/// `[n]_v = (v^n - v^-n) / (v - v^-1)`
pub fn quantum_int<C: Coeff>(n: u32) -> LaurentPoly<C> {
    let n = n as i64;
    let num = LaurentPoly::from_terms([(n, C::one()), (-n, -C::one())]);
    num.div_exact(&v_minus_v_inv()).expect("quantum integer is a Laurent polynomial")
}

/// `[n]_v! = [1]_v [2]_v ... [n]_v`
pub fn quantum_factorial<C: Coeff>(n: u32) -> LaurentPoly<C> {
    (1..=n).fold(LaurentPoly::one(), |acc, k| &acc * &quantum_int::<C>(k))
}

/// Quantum binomial `[k over n]_v` from the product formula
/// `prod_{m=1}^n (v^{k+1-m} - v^{-(k+1-m)}) / (v^m - v^{-m})`.
pub fn quantum_binomial<C: Coeff>(k: i64, n: u32) -> LaurentPoly<C> {
    let mut num = LaurentPoly::<C>::one();
    let mut den = LaurentPoly::<C>::one();
    for m in 1..=(n as i64) {
        let a = k + 1 - m;
        num = &num * &LaurentPoly::from_terms([(a, C::one()), (-a, -C::one())]);
        den = &den * &LaurentPoly::from_terms([(m, C::one()), (-m, -C::one())]);
    }
    num.div_exact(&den).expect("quantum binomial is a Laurent polynomial")
}

/// `v - v^{-1}`
pub fn v_minus_v_inv<C: Coeff>() -> LaurentPoly<C> {
    LaurentPoly::from_terms([(1, C::one()), (-1, -C::one())])
}

impl<C: Coeff> Add for &LaurentPoly<C> {
    type Output = LaurentPoly<C>;
    fn add(self, rhs: &LaurentPoly<C>) -> LaurentPoly<C> {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl<C: Coeff> Add for LaurentPoly<C> {
    type Output = LaurentPoly<C>;
    fn add(mut self, rhs: LaurentPoly<C>) -> LaurentPoly<C> {
        self += &rhs;
        self
    }
}

impl<C: Coeff> AddAssign<&LaurentPoly<C>> for LaurentPoly<C> {
    fn add_assign(&mut self, rhs: &LaurentPoly<C>) {
        for (e, c) in rhs.terms.iter() {
            self.add_term(*e, c.clone());
        }
    }
}

impl<C: Coeff> Neg for &LaurentPoly<C> {
    type Output = LaurentPoly<C>;
    fn neg(self) -> LaurentPoly<C> {
        LaurentPoly { terms: self.terms.iter().map(|(e, c)| (*e, -c.clone())).collect() }
    }
}

impl<C: Coeff> Neg for LaurentPoly<C> {
    type Output = LaurentPoly<C>;
    fn neg(self) -> LaurentPoly<C> {
        -&self
    }
}

impl<C: Coeff> Sub for &LaurentPoly<C> {
    type Output = LaurentPoly<C>;
    fn sub(self, rhs: &LaurentPoly<C>) -> LaurentPoly<C> {
        let mut out = self.clone();
        for (e, c) in rhs.terms.iter() {
            out.add_term(*e, -c.clone());
        }
        out
    }
}

impl<C: Coeff> Sub for LaurentPoly<C> {
    type Output = LaurentPoly<C>;
    fn sub(self, rhs: LaurentPoly<C>) -> LaurentPoly<C> {
        &self - &rhs
    }
}

impl<C: Coeff> Mul for &LaurentPoly<C> {
    type Output = LaurentPoly<C>;
    fn mul(self, rhs: &LaurentPoly<C>) -> LaurentPoly<C> {
        let mut out = LaurentPoly::zero();
        for (ea, ca) in self.terms.iter() {
            for (eb, cb) in rhs.terms.iter() {
                out.add_term(ea + eb, ca.clone() * cb.clone());
            }
        }
        out
    }
}

impl<C: Coeff> Mul for LaurentPoly<C> {
    type Output = LaurentPoly<C>;
    fn mul(self, rhs: LaurentPoly<C>) -> LaurentPoly<C> {
        &self * &rhs
    }
}

impl<C: Coeff> fmt::Display for LaurentPoly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in self.terms.iter().rev() {
            let neg = c.is_negative();
            let abs = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            let unit = abs.is_one();
            match *e {
                0 => write!(f, "{abs}")?,
                1 if unit => write!(f, "v")?,
                1 => write!(f, "{abs}v")?,
                _ if unit => write!(f, "v^{e}")?,
                _ => write!(f, "{abs}v^{e}")?,
            }
        }
        Ok(())
    }
}

impl<C: Coeff> fmt::Debug for LaurentPoly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LaurentPoly({self})")
    }
}

struct CoeffJson<'a, C>(&'a C);

impl<C: Coeff> Serialize for CoeffJson<'_, C> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self.0.to_i64() {
            Some(x) => s.serialize_i64(x),
            None => s.serialize_str(&self.0.to_string()),
        }
    }
}

/// Serialized as `[[exp, coeff], ...]` sorted by exponent; coefficients that
/// do not fit in `i64` become decimal strings.
impl<C: Coeff> Serialize for LaurentPoly<C> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.terms.len()))?;
        for (e, c) in self.terms.iter() {
            seq.serialize_element(&(e, CoeffJson(c)))?;
        }
        seq.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    type P = LaurentPoly<BigInt>;

    fn p(pairs: &[(i64, i64)]) -> P {
        P::from_i64_terms(pairs)
    }

    #[test]
    fn add_cancels_and_merges() {
        assert_eq!(&p(&[(1, 1), (0, 1)]) + &p(&[(0, -1)]), p(&[(1, 1)]));
        assert_eq!(&P::zero() + &P::zero(), P::zero());
        assert_eq!(&p(&[(-1, 1)]) + &p(&[(-1, 1)]), p(&[(-1, 2)]));
    }

    #[test]
    fn mul_examples() {
        assert_eq!(&p(&[(1, 1), (-1, -1)]) * &p(&[(1, 1), (-1, 1)]), p(&[(2, 1), (-2, -1)]));
        assert_eq!(&p(&[(3, 1)]) * &p(&[(-3, 1)]), P::one());
        assert!((&p(&[(1, 1), (0, 1)]) * &P::zero()).is_zero());
    }

    #[test]
    fn div_examples() {
        let d = v_minus_v_inv::<BigInt>();
        assert_eq!(p(&[(2, 1), (-2, -1)]).div_exact(&d).unwrap(), p(&[(1, 1), (-1, 1)]));
        assert_eq!(P::zero().div_exact(&d).unwrap(), P::zero());
        assert_eq!(p(&[(3, 1), (-3, -1)]).div_exact(&d).unwrap(), p(&[(2, 1), (0, 1), (-2, 1)]));
        assert_eq!(p(&[(1, 1)]).div_exact(&P::zero()), Err(Error::DivisionByZero));
        assert_eq!(p(&[(2, 1), (0, 1)]).div_exact(&d), Err(Error::NotDivisible));
        assert_eq!(p(&[(0, 1)]).div_exact(&p(&[(0, 2)])), Err(Error::NotDivisible));
    }

    #[test]
    fn eval_examples() {
        assert_eq!(p(&[(1, 1), (-1, 1)]).eval_one(), BigInt::from(2));
        assert_eq!(P::zero().eval_one(), BigInt::from(0));
        assert_eq!(p(&[(4, 1), (2, 1), (0, 2), (-2, 1), (-4, 1)]).eval_one(), BigInt::from(6));
    }

    #[test]
    fn quantum_numbers() {
        assert_eq!(quantum_int::<BigInt>(2), p(&[(1, 1), (-1, 1)]));
        assert!(quantum_int::<BigInt>(0).is_zero());
        assert_eq!(quantum_factorial::<BigInt>(0), P::one());
        assert_eq!(quantum_binomial::<BigInt>(4, 2), p(&[(4, 1), (2, 1), (0, 2), (-2, 1), (-4, 1)]));
        assert_eq!(quantum_factorial::<BigInt>(3), p(&[(3, 1), (1, 2), (-1, 2), (-3, 1)]));
    }

    #[test]
    fn i64_coefficients_work_too() {
        let q = quantum_binomial::<i64>(5, 2);
        assert_eq!(q.eval_one(), 10);
        assert_eq!(q.convert::<BigInt>().unwrap(), quantum_binomial::<BigInt>(5, 2));
    }

    #[test]
    fn display_and_json() {
        assert_eq!(p(&[(1, 1), (-1, 1)]).to_string(), "v + v^-1");
        assert_eq!(p(&[(0, -2), (2, 3)]).to_string(), "3v^2 - 2");
        assert_eq!(serde_json::to_string(&p(&[(1, 1), (-1, 1)])).unwrap(), "[[-1,1],[1,1]]");
        let big = P::constant(BigInt::from(i64::MAX) * 4);
        assert_eq!(serde_json::to_string(&big).unwrap(), "[[0,\"36893488147419103228\"]]");
    }
}
