//! Sparse Laurent polynomials in one and two variables.
//!
//! Exponents are signed: intermediate constructions routinely pass through
//! genuine Laurent territory (division by x or y, operator coefficients with
//! poles at the origin) before landing back on polynomials. `assert_polynomial`
//! is the checkpoint that certifies the landing.
//!
//! Coefficients are generic over [`Coeff`] so the same machinery serves the
//! exact rational layer and the double-precision q-series layer. Maps never
//! store zero coefficients; `BTreeMap` keeps term order deterministic.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::exact::{Coeff, ExactScalar};

/// Laurent polynomial in one variable.
#[derive(Clone, PartialEq)]
pub struct LaurentPoly1<C: Coeff> {
    terms: BTreeMap<i64, C>,
}

/// Laurent polynomial in two variables; keys are (x exponent, y exponent).
#[derive(Clone, PartialEq)]
pub struct LaurentPoly2<C: Coeff> {
    terms: BTreeMap<(i64, i64), C>,
}

pub type RatPoly1 = LaurentPoly1<ExactScalar>;
pub type RatPoly2 = LaurentPoly2<ExactScalar>;
pub type NumPoly1 = LaurentPoly1<f64>;
pub type NumPoly2 = LaurentPoly2<f64>;

impl<C: Coeff> LaurentPoly1<C> {
    pub fn zero() -> Self {
        LaurentPoly1 { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Self::monomial(0, C::c_one())
    }

    pub fn constant(c: C) -> Self {
        Self::monomial(0, c)
    }

    pub fn monomial(exp: i64, c: C) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_c_zero() {
            terms.insert(exp, c);
        }
        LaurentPoly1 { terms }
    }

    /// Polynomial from ascending coefficients c0 + c1 x + ...
    pub fn from_coeffs(coeffs: &[C]) -> Self {
        let mut p = Self::zero();
        for (i, c) in coeffs.iter().enumerate() {
            p.add_term(i as i64, c.clone());
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &C)> {
        self.terms.iter().map(|(e, c)| (*e, c))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coefficient(&self, exp: i64) -> C {
        self.terms.get(&exp).cloned().unwrap_or_else(C::c_zero)
    }

    /// Largest exponent, None for the zero polynomial.
    pub fn degree(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    /// Smallest exponent, None for the zero polynomial.
    pub fn valuation(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn leading_coefficient(&self) -> Option<&C> {
        self.terms.values().next_back()
    }

    pub fn add_term(&mut self, exp: i64, c: C) {
        if c.is_c_zero() {
            return;
        }
        match self.terms.entry(exp) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = o.get().c_add(&c);
                if s.is_c_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in rhs.terms() {
            out.add_term(e, c.clone());
        }
        out
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in rhs.terms() {
            out.add_term(e, c.c_neg());
        }
        out
    }

    pub fn neg(&self) -> Self {
        LaurentPoly1 { terms: self.terms.iter().map(|(e, c)| (*e, c.c_neg())).collect() }
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let mut out = Self::zero();
        for (e1, c1) in self.terms() {
            for (e2, c2) in rhs.terms() {
                out.add_term(e1 + e2, c1.c_mul(c2));
            }
        }
        out
    }

    pub fn scale(&self, s: &C) -> Self {
        if s.is_c_zero() {
            return Self::zero();
        }
        LaurentPoly1 { terms: self.terms.iter().map(|(e, c)| (*e, c.c_mul(s))).collect() }
    }

    /// Multiplication by x^d.
    pub fn shift(&self, d: i64) -> Self {
        LaurentPoly1 { terms: self.terms.iter().map(|(e, c)| (e + d, c.clone())).collect() }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut out = Self::one();
        for _ in 0..n {
            out = out.mul(self);
        }
        out
    }

    /// x -> -x.
    pub fn reflect(&self) -> Self {
        LaurentPoly1 {
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (*e, if e.rem_euclid(2) == 1 { c.c_neg() } else { c.clone() }))
                .collect(),
        }
    }

    /// d/dx, termwise; x^e -> e x^(e-1) including negative e.
    pub fn differentiate(&self) -> Self {
        let mut out = Self::zero();
        for (e, c) in self.terms() {
            if e != 0 {
                out.add_term(e - 1, c.c_mul(&C::from_int(e)));
            }
        }
        out
    }

    /// Certifies that no negative exponent carries a nonzero coefficient.
    pub fn assert_polynomial(self, context: &'static str) -> Result<Self> {
        if let Some((e, c)) = self.terms.iter().next() {
            if *e < 0 {
                return Err(Error::NegativeExponentResidue {
                    exponent: (*e, 0),
                    coefficient: format!("{:?}", c.to_f64()),
                    context,
                });
            }
        }
        Ok(self)
    }

    /// Substitution z -> inner(x). Requires self to be a polynomial in z.
    pub fn compose(&self, inner: &Self) -> Self {
        let mut out = Self::zero();
        for (e, c) in self.terms() {
            assert!(e >= 0, "compose requires nonnegative exponents");
            out = out.add(&inner.pow(e as u32).scale(c));
        }
        out
    }

    /// Substitution u -> x^ex * y^ey, mapping into two variables. Requires
    /// self to be a polynomial in u.
    pub fn subst_monomial2(&self, ex: i64, ey: i64) -> LaurentPoly2<C> {
        let mut out = LaurentPoly2::zero();
        for (e, c) in self.terms() {
            assert!(e >= 0, "subst requires nonnegative exponents");
            out.add_term((e * ex, e * ey), c.clone());
        }
        out
    }

    pub fn evaluate(&self, x: f64) -> Result<f64> {
        let val = self.valuation().unwrap_or(0);
        if val < 0 && x == 0.0 {
            return Err(Error::PoleAtZero { min_exponents: (val, 0) });
        }
        let mut acc = 0.0;
        for (e, c) in self.terms() {
            acc += c.to_f64() * x.powi(e as i32);
        }
        Ok(acc)
    }

    pub fn to_num(&self) -> NumPoly1 {
        let mut out = NumPoly1::zero();
        for (e, c) in self.terms() {
            out.add_term(e, c.to_f64());
        }
        out
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.terms.values().map(|c| c.to_f64().abs()).fold(0.0, f64::max)
    }
}

impl RatPoly1 {
    /// Exact evaluation at a rational point (nonzero if any exponent is
    /// negative).
    pub fn evaluate_exact(&self, x: &ExactScalar) -> ExactScalar {
        let mut acc = ExactScalar::zero();
        for (e, c) in self.terms() {
            if e < 0 {
                assert!(!x.is_zero(), "exact evaluation at a pole");
            }
            acc = acc + c.c_mul(&x.powi(e as i32));
        }
        acc
    }

    /// Exact division by (x - root); errors if the remainder is nonzero.
    pub fn divide_by_linear(&self, root: &ExactScalar) -> Result<RatPoly1> {
        let deg = match self.degree() {
            None => return Ok(RatPoly1::zero()),
            Some(d) => d,
        };
        assert!(self.valuation().unwrap_or(0) >= 0, "division expects a polynomial");
        let mut quotient = RatPoly1::zero();
        let mut carry = ExactScalar::zero();
        for e in (0..=deg).rev() {
            let c = self.coefficient(e).c_add(&carry.c_mul(root));
            if e == 0 {
                if !c.is_zero() {
                    return Err(Error::NonzeroRemainder {
                        remainder: c.to_string(),
                        root: root.to_string(),
                    });
                }
            } else {
                quotient.add_term(e - 1, c.clone());
                carry = c;
            }
        }
        Ok(quotient)
    }
}

impl<C: Coeff> LaurentPoly2<C> {
    pub fn zero() -> Self {
        LaurentPoly2 { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Self::monomial(0, 0, C::c_one())
    }

    pub fn constant(c: C) -> Self {
        Self::monomial(0, 0, c)
    }

    pub fn monomial(ex: i64, ey: i64, c: C) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_c_zero() {
            terms.insert((ex, ey), c);
        }
        LaurentPoly2 { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = ((i64, i64), &C)> {
        self.terms.iter().map(|(e, c)| (*e, c))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coefficient(&self, ex: i64, ey: i64) -> C {
        self.terms.get(&(ex, ey)).cloned().unwrap_or_else(C::c_zero)
    }

    pub fn x_degree(&self) -> Option<i64> {
        self.terms.keys().map(|(ex, _)| *ex).max()
    }

    pub fn y_degree(&self) -> Option<i64> {
        self.terms.keys().map(|(_, ey)| *ey).max()
    }

    pub fn total_degree(&self) -> Option<i64> {
        self.terms.keys().map(|(ex, ey)| ex + ey).max()
    }

    pub fn min_x_exponent(&self) -> Option<i64> {
        self.terms.keys().map(|(ex, _)| *ex).min()
    }

    pub fn min_y_exponent(&self) -> Option<i64> {
        self.terms.keys().map(|(_, ey)| *ey).min()
    }

    pub fn add_term(&mut self, exp: (i64, i64), c: C) {
        if c.is_c_zero() {
            return;
        }
        match self.terms.entry(exp) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = o.get().c_add(&c);
                if s.is_c_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in rhs.terms() {
            out.add_term(e, c.clone());
        }
        out
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in rhs.terms() {
            out.add_term(e, c.c_neg());
        }
        out
    }

    pub fn neg(&self) -> Self {
        LaurentPoly2 { terms: self.terms.iter().map(|(e, c)| (*e, c.c_neg())).collect() }
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let mut out = Self::zero();
        for ((x1, y1), c1) in self.terms() {
            for ((x2, y2), c2) in rhs.terms() {
                out.add_term((x1 + x2, y1 + y2), c1.c_mul(c2));
            }
        }
        out
    }

    pub fn scale(&self, s: &C) -> Self {
        if s.is_c_zero() {
            return Self::zero();
        }
        LaurentPoly2 { terms: self.terms.iter().map(|(e, c)| (*e, c.c_mul(s))).collect() }
    }

    /// Multiplication by x^dx * y^dy.
    pub fn shift(&self, dx: i64, dy: i64) -> Self {
        LaurentPoly2 {
            terms: self.terms.iter().map(|((ex, ey), c)| ((ex + dx, ey + dy), c.clone())).collect(),
        }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut out = Self::one();
        for _ in 0..n {
            out = out.mul(self);
        }
        out
    }

    /// x -> -x.
    pub fn reflect_x(&self) -> Self {
        LaurentPoly2 {
            terms: self
                .terms
                .iter()
                .map(|((ex, ey), c)| {
                    let c = if ex.rem_euclid(2) == 1 { c.c_neg() } else { c.clone() };
                    ((*ex, *ey), c)
                })
                .collect(),
        }
    }

    /// y -> -y.
    pub fn reflect_y(&self) -> Self {
        LaurentPoly2 {
            terms: self
                .terms
                .iter()
                .map(|((ex, ey), c)| {
                    let c = if ey.rem_euclid(2) == 1 { c.c_neg() } else { c.clone() };
                    ((*ex, *ey), c)
                })
                .collect(),
        }
    }

    /// (x, y) -> (-x, -y).
    pub fn reflect_both(&self) -> Self {
        self.reflect_x().reflect_y()
    }

    pub fn differentiate_x(&self) -> Self {
        let mut out = Self::zero();
        for ((ex, ey), c) in self.terms() {
            if ex != 0 {
                out.add_term((ex - 1, ey), c.c_mul(&C::from_int(ex)));
            }
        }
        out
    }

    pub fn differentiate_y(&self) -> Self {
        let mut out = Self::zero();
        for ((ex, ey), c) in self.terms() {
            if ey != 0 {
                out.add_term((ex, ey - 1), c.c_mul(&C::from_int(ey)));
            }
        }
        out
    }

    pub fn assert_polynomial(self, context: &'static str) -> Result<Self> {
        for (e, c) in self.terms() {
            if e.0 < 0 || e.1 < 0 {
                return Err(Error::NegativeExponentResidue {
                    exponent: e,
                    coefficient: format!("{:?}", c.to_f64()),
                    context,
                });
            }
        }
        Ok(self)
    }

    pub fn evaluate(&self, x: f64, y: f64) -> Result<f64> {
        let mx = self.min_x_exponent().unwrap_or(0);
        let my = self.min_y_exponent().unwrap_or(0);
        if (mx < 0 && x == 0.0) || (my < 0 && y == 0.0) {
            return Err(Error::PoleAtZero { min_exponents: (mx, my) });
        }
        let mut acc = 0.0;
        for ((ex, ey), c) in self.terms() {
            acc += c.to_f64() * x.powi(ex as i32) * y.powi(ey as i32);
        }
        Ok(acc)
    }

    pub fn to_num(&self) -> NumPoly2 {
        let mut out = NumPoly2::zero();
        for (e, c) in self.terms() {
            out.add_term(e, c.to_f64());
        }
        out
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.terms.values().map(|c| c.to_f64().abs()).fold(0.0, f64::max)
    }
}

impl RatPoly2 {
    /// Exact evaluation at a rational point (nonzero coordinates are required
    /// wherever a negative exponent is present).
    pub fn evaluate_exact(&self, x: &ExactScalar, y: &ExactScalar) -> Result<ExactScalar> {
        let mx = self.min_x_exponent().unwrap_or(0);
        let my = self.min_y_exponent().unwrap_or(0);
        if (mx < 0 && x.is_zero()) || (my < 0 && y.is_zero()) {
            return Err(Error::PoleAtZero { min_exponents: (mx, my) });
        }
        let mut acc = ExactScalar::zero();
        for ((ex, ey), c) in self.terms() {
            acc = acc + c * x.powi(ex as i32) * y.powi(ey as i32);
        }
        Ok(acc)
    }
}

impl NumPoly2 {
    /// Flattened view for fast repeated evaluation inside quadrature loops.
    pub fn eval_table(&self) -> EvalTable {
        EvalTable { terms: self.terms().map(|((ex, ey), c)| (ex as i32, ey as i32, *c)).collect() }
    }
}

/// Precomputed term list for tight evaluation loops.
pub struct EvalTable {
    terms: Vec<(i32, i32, f64)>,
}

impl EvalTable {
    pub fn eval(&self, x: f64, y: f64) -> f64 {
        let mut acc = 0.0;
        for &(ex, ey, c) in &self.terms {
            acc += c * x.powi(ex) * y.powi(ey);
        }
        acc
    }
}

fn fmt_terms1<C: Coeff>(p: &LaurentPoly1<C>, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if p.is_zero() {
        return write!(f, "0");
    }
    let mut first = true;
    for (e, c) in p.terms() {
        if !first {
            write!(f, " + ")?;
        }
        first = false;
        write!(f, "({:?})", c.to_f64())?;
        if e != 0 {
            write!(f, "*x^{e}")?;
        }
    }
    Ok(())
}

impl<C: Coeff> fmt::Debug for LaurentPoly1<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_terms1(self, f)
    }
}

impl<C: Coeff> fmt::Debug for LaurentPoly2<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for ((ex, ey), c) in self.terms() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({:?})", c.to_f64())?;
            if ex != 0 {
                write!(f, "*x^{ex}")?;
            }
            if ey != 0 {
                write!(f, "*y^{ey}")?;
            }
        }
        Ok(())
    }
}
