//! Big q-Jacobi polynomials in one and two variables.
//!
//! The two-variable family couples a big q-Jacobi polynomial in y with one in
//! x/y, glued by a q-Pochhammer factor in 1/y; regrouping the series makes
//! the product manifestly polynomial. The family diagonalizes a second-order
//! q-difference operator and satisfies a three-term recurrence in y plus a
//! nine-point recurrence in x. Everything here is numeric (f64): the base q
//! ranges over transcendental values on the approach to -1, where this family
//! degenerates into the -1 family of [`crate::bivariate`].

use crate::bigm1::{bigm1_coeffs, UniParams};
use crate::bivariate::{biv_coeffs, BivIndex, BivParams};
use crate::error::{Error, Result};
use crate::laurent::{NumPoly1, NumPoly2};

/// Parameters (a, b, c, d) and base q of the two-variable family.
#[derive(Clone, Copy, Debug)]
pub struct QParams {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
    pub q: f64,
}

impl QParams {
    pub fn new(a: f64, b: f64, c: f64, d: f64, q: f64) -> Result<Self> {
        if q == 0.0 || q.abs() == 1.0 || !q.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "base q = {q} must be finite with |q| not 0 or 1"
            )));
        }
        Ok(QParams { a, b, c, d, q })
    }
}

/// q-bracket (q^i - 1)/(q - 1); the termwise action of the q-derivative on
/// x^i, up to the shift of exponent.
fn qnum(i: i64, q: f64) -> f64 {
    (q.powi(i as i32) - 1.0) / (q - 1.0)
}

/// (x; q)_2.
fn qp2(x: f64, q: f64) -> f64 {
    (1.0 - x) * (1.0 - x * q)
}

fn guard(v: f64, what: &str) -> Result<f64> {
    if v.abs() < 1e-13 || !v.is_finite() {
        return Err(Error::DegenerateDenominator { context: what.into() });
    }
    Ok(v)
}

fn num_xy(terms: &[(i64, i64, f64)]) -> NumPoly2 {
    let mut p = NumPoly2::zero();
    for &(ex, ey, c) in terms {
        p.add_term((ex, ey), c);
    }
    p
}

/// Univariate big q-Jacobi polynomial P_n(x; a, b, c; q), normalized to 1 at
/// x = 1: the terminating basic series with upper parameters q^-n, abq^(n+1)
/// and x, lower parameters aq and cq, argument q.
pub fn bigq_uni_coeffs(n: u32, a: f64, b: f64, c: f64, q: f64) -> Result<NumPoly1> {
    let mut acc = NumPoly1::zero();
    let mut basis = NumPoly1::one();
    let mut term = 1.0f64;
    let mut qj = 1.0f64;
    let qmn = q.powi(-(n as i32));
    for j in 0..=n {
        if j > 0 {
            let d1 = 1.0 - a * q * qj;
            let d2 = 1.0 - c * q * qj;
            let d3 = 1.0 - q * qj;
            for (dv, base) in [(d1, a * q), (d2, c * q), (d3, q)] {
                if dv.abs() < 1e-300 {
                    return Err(Error::QPochhammerPole { base, index: j });
                }
            }
            term *=
                (1.0 - qmn * qj) * (1.0 - a * b * q.powi(n as i32 + 1) * qj) * q / (d1 * d2 * d3);
            qj *= q;
            // (x; q)_j grows by the factor (1 - q^(j-1) x).
            let lin = NumPoly1::from_coeffs(&[1.0, -qj / q]);
            basis = basis.mul(&lin);
        }
        acc = acc.add(&basis.scale(&term));
    }
    Ok(acc)
}

/// Two-variable big q-Jacobi polynomial. The defining product
/// P_(n-k)(y) y^k (dq/y; q)_k P_k(x/y; c, b, d/y; q) is regrouped so each
/// summand of the x-factor is the polynomial
/// prod_i (y - x q^i) prod_i (y - d q^(j+1+i)).
pub fn bigq_biv_coeffs(idx: BivIndex, p: &QParams) -> Result<NumPoly2> {
    let (n, k) = (idx.n, idx.k);
    let q = p.q;
    let y_part = bigq_uni_coeffs(
        n - k,
        p.a,
        p.b * p.c * q.powi(2 * k as i32 + 1),
        p.d * q.powi(k as i32),
        q,
    )?
    .subst_monomial2(0, 1);

    let mut section = NumPoly2::zero();
    let mut coeff = 1.0f64;
    let mut qj = 1.0f64;
    let qmk = q.powi(-(k as i32));
    let mut left = NumPoly2::one();
    for j in 0..=k {
        if j > 0 {
            let d1 = 1.0 - p.c * q * qj;
            let d2 = 1.0 - q * qj;
            for (dv, base) in [(d1, p.c * q), (d2, q)] {
                if dv.abs() < 1e-300 {
                    return Err(Error::QPochhammerPole { base, index: j });
                }
            }
            coeff *=
                (1.0 - qmk * qj) * (1.0 - p.c * p.b * q.powi(k as i32 + 1) * qj) * q / (d1 * d2);
            left = left.mul(&num_xy(&[(0, 1, 1.0), (1, 0, -qj)]));
            qj *= q;
        }
        let mut right = NumPoly2::one();
        for i in 0..(k - j) {
            let root = p.d * q.powi(j as i32 + 1 + i as i32);
            right = right.mul(&num_xy(&[(0, 1, 1.0), (0, 0, -root)]));
        }
        section = section.add(&left.mul(&right).scale(&coeff));
    }
    Ok(y_part.mul(&section))
}

/// Termwise q-derivative in x: x^i y^j maps to [i]_q x^(i-1) y^j.
fn dq_x(f: &NumPoly2, q: f64) -> NumPoly2 {
    let mut out = NumPoly2::zero();
    for ((ex, ey), c) in f.terms() {
        if ex != 0 {
            out.add_term((ex - 1, ey), c * qnum(ex, q));
        }
    }
    out
}

fn dq_y(f: &NumPoly2, q: f64) -> NumPoly2 {
    let mut out = NumPoly2::zero();
    for ((ex, ey), c) in f.terms() {
        if ey != 0 {
            out.add_term((ex, ey - 1), c * qnum(ey, q));
        }
    }
    out
}

/// Applies the q-difference operator diagonalized by the family. Operator
/// products act rightmost first; for the mixed-base same-variable product
/// that order matters and is preserved here.
pub fn omega_apply(p: &QParams, f: &NumPoly2) -> NumPoly2 {
    let (a, b, c, d, q) = (p.a, p.b, p.c, p.d, p.q);
    let qi = 1.0 / q;

    let coeff_xx =
        num_xy(&[(1, 0, 1.0), (0, 0, -d * q)]).mul(&num_xy(&[(1, 0, 1.0), (0, 0, -a * c * q * q)]));
    let coeff_yy =
        num_xy(&[(0, 1, 1.0), (0, 0, -a * q)]).mul(&num_xy(&[(0, 1, 1.0), (0, 0, -d * q)]));
    let coeff_xy_down = num_xy(&[(1, 0, 1.0), (0, 0, -d * q)])
        .mul(&num_xy(&[(0, 1, 1.0), (0, 0, -a * q)]))
        .scale(&qi);
    let coeff_xy_up = num_xy(&[(1, 0, b), (0, 0, -d)])
        .mul(&num_xy(&[(0, 1, 1.0), (0, 0, -1.0)]))
        .scale(&(a * c * q.powi(3)));
    let abc3 = a * b * c * q.powi(3) - 1.0;
    let coeff_x = num_xy(&[
        (1, 0, abc3 / (q - 1.0)),
        (0, 0, (-abc3 - (a * c * q * q - 1.0) * (d * q - 1.0)) / (q - 1.0)),
    ]);
    let coeff_y = num_xy(&[
        (0, 1, abc3 / (q - 1.0)),
        (0, 0, (-abc3 - (a * q - 1.0) * (d * q - 1.0)) / (q - 1.0)),
    ]);

    let mut out = coeff_xx.mul(&dq_x(&dq_inv_x(f, q), q));
    out = out.add(&coeff_yy.mul(&dq_y(&dq_inv_y(f, q), q)));
    out = out.add(&coeff_xy_down.mul(&dq_inv_x(&dq_inv_y(f, q), q)));
    out = out.add(&coeff_xy_up.mul(&dq_x(&dq_y(f, q), q)));
    out = out.add(&coeff_x.mul(&dq_x(f, q)));
    out = out.add(&coeff_y.mul(&dq_y(f, q)));
    out
}

fn dq_inv_x(f: &NumPoly2, q: f64) -> NumPoly2 {
    dq_x(f, 1.0 / q)
}

fn dq_inv_y(f: &NumPoly2, q: f64) -> NumPoly2 {
    dq_y(f, 1.0 / q)
}

/// Eigenvalue of the q-difference operator on total degree n.
pub fn omega_eigenvalue(n: u32, p: &QParams) -> f64 {
    let q = p.q;
    q.powi(1 - n as i32) * (q.powi(n as i32) - 1.0) * (p.a * p.b * p.c * q.powi(n as i32 + 2) - 1.0)
        / ((q - 1.0) * (q - 1.0))
}

fn sigma_q(k: u32, p: &QParams) -> Result<f64> {
    let (b, c, q) = (p.b, p.c, p.q);
    let den = guard(qp2(b * c * q.powi(2 * k as i32 + 1), q), "sigma denominator")?;
    Ok((1.0 - c * q.powi(k as i32 + 1)) * (1.0 - b * c * q.powi(k as i32 + 1)) / den)
}

fn tau_q(k: u32, p: &QParams) -> Result<f64> {
    if k == 0 {
        // The (1 - q^k) factor vanishes identically.
        return Ok(0.0);
    }
    let (b, c, q) = (p.b, p.c, p.q);
    let den = guard(qp2(b * c * q.powi(2 * k as i32), q), "tau denominator")?;
    Ok(-c * q.powi(k as i32 + 1) * (1.0 - q.powi(k as i32)) * (1.0 - b * q.powi(k as i32)) / den)
}

fn z_q(n: u32, p: &QParams) -> Result<f64> {
    let (a, b, c, d, q) = (p.a, p.b, p.c, p.d, p.q);
    let abc = a * b * c;
    let d1 = guard(1.0 - abc * q.powi(2 * n as i32 + 1), "z denominator")?;
    let d2 = guard(1.0 - abc * q.powi(2 * n as i32 + 3), "z denominator")?;
    Ok((abc * q.powi(n as i32 + 1) * (1.0 + q - d * q.powi(n as i32 + 1)) - d) / (d1 * d2))
}

fn a_q(n: u32, k: u32, p: &QParams) -> Result<f64> {
    let (a, b, c, d, q) = (p.a, p.b, p.c, p.d, p.q);
    let (ni, ki) = (n as i32, k as i32);
    let den = guard(qp2(a * b * c * q.powi(2 * ni + 2), q), "lift denominator")?;
    Ok((1.0 - a * q.powi(ni - ki + 1))
        * (1.0 - a * b * c * q.powi(ni + ki + 2))
        * (1.0 - d * q.powi(ni + 1))
        / den)
}

fn c_q(n: u32, k: u32, p: &QParams) -> Result<f64> {
    if n == k {
        // The (q^(n-k) - 1) factor vanishes identically.
        return Ok(0.0);
    }
    let (a, b, c, d, q) = (p.a, p.b, p.c, p.d, p.q);
    let (ni, ki) = (n as i32, k as i32);
    let den = guard(qp2(a * b * c * q.powi(2 * ni + 1), q), "lower denominator")?;
    // The displayed a d (1 - abc d^-1 q^(n+1)) is regrouped as
    // a (d - abc q^(n+1)) so d = 0 stays admissible.
    Ok(a * q.powi(ni + 1)
        * (q.powi(ni - ki) - 1.0)
        * (1.0 - b * c * q.powi(ni + ki + 1))
        * (d - a * b * c * q.powi(ni + 1))
        / den)
}

/// Coefficients of y P_(n,k) over {P_(n+1,k), P_(n,k), P_(n-1,k)}, in that
/// order as (dn, dk, value).
pub fn q_y_recurrence_coeffs(idx: BivIndex, p: &QParams) -> Result<Vec<(i32, i32, f64)>> {
    let av = a_q(idx.n, idx.k, p)?;
    let cv = c_q(idx.n, idx.k, p)?;
    Ok(vec![(1, 0, av), (0, 0, 1.0 - av - cv), (-1, 0, cv)])
}

/// Coefficients of x P_(n,k) over the nine neighbours, ordered by
/// (dn, dk) = (1,-1), (1,0), (1,1), (0,-1), (0,0), (0,1), (-1,-1), (-1,0),
/// (-1,1). Coefficients aimed below k = 0, above k = n or below n = 0 carry
/// vanishing factors and come out as exact zeros.
pub fn q_x_recurrence_coeffs(idx: BivIndex, p: &QParams) -> Result<Vec<(i32, i32, f64)>> {
    let (n, k) = (idx.n, idx.k);
    let (a, b, c, d, q) = (p.a, p.b, p.c, p.d, p.q);
    let (ni, ki) = (n as i32, k as i32);
    let abc = a * b * c;
    let sigma = sigma_q(k, p)?;
    let tau = tau_q(k, p)?;

    let e = if tau == 0.0 {
        0.0
    } else {
        let den = guard(qp2(abc * q.powi(2 * ni + 2), q), "raise denominator")?;
        tau * b
            * c
            * q.powi(ki)
            * (d * q.powi(ki) - 1.0)
            * (1.0 - d * q.powi(ni + 1))
            * qp2(a * q.powi(ni - ki + 1), q)
            / den
    };

    let g = {
        let den1 = guard(1.0 - d * q.powi(ki + 1), "raise denominator")?;
        let den2 = guard(qp2(abc * q.powi(2 * ni + 2), q), "raise denominator")?;
        sigma * (1.0 - d * q.powi(ni + 1)) * qp2(abc * q.powi(ni + ki + 2), q) / (den1 * den2)
    };

    let r = if tau == 0.0 {
        0.0
    } else {
        tau * z_q(n, p)?
            * (d * q.powi(ki) - 1.0)
            * (1.0 - a * q.powi(ni - ki + 1))
            * (1.0 - b * c * q.powi(ni + ki + 1))
    };

    let t = if n == k {
        0.0
    } else {
        let den = guard(1.0 - d * q.powi(ki + 1), "middle denominator")?;
        q.powi(ki + 1)
            * sigma
            * z_q(n, p)?
            * (1.0 - q.powi(ni - ki))
            * (1.0 - abc * q.powi(ni + ki + 2))
            / den
    };

    let u = if tau == 0.0 {
        0.0
    } else {
        let den = guard(qp2(abc * q.powi(2 * ni + 1), q), "lower denominator")?;
        tau * a
            * q.powi(ni - ki + 1)
            * (d * q.powi(ki) - 1.0)
            * (abc * q.powi(ni + 1) - d)
            * qp2(b * c * q.powi(ni + ki), q)
            / den
    };

    let w = if n <= k + 1 {
        // (q^(n-k-1); q)_2 vanishes identically for n - k in {0, 1}.
        0.0
    } else {
        let den1 = guard(1.0 - d * q.powi(ki + 1), "lower denominator")?;
        let den2 = guard(qp2(abc * q.powi(2 * ni + 1), q), "lower denominator")?;
        abc * sigma
            * q.powi(ni + 2 * ki + 3)
            * (abc * q.powi(ni + 1) - d)
            * qp2(q.powi(ni - ki - 1), q)
            / (den1 * den2)
    };

    let av = a_q(n, k, p)?;
    let cv = c_q(n, k, p)?;
    let bv = 1.0 - av - cv;
    let mix = b * c * q.powi(ki) * tau - sigma + 1.0;
    let f = av * mix;
    let v = cv * mix;
    let s = bv * mix + d * (q.powi(ki + 1) * sigma - tau);

    Ok(vec![
        (1, -1, e),
        (1, 0, f),
        (1, 1, g),
        (0, -1, r),
        (0, 0, s),
        (0, 1, t),
        (-1, -1, u),
        (-1, 0, v),
        (-1, 1, w),
    ])
}

/// q-parameters on the path along which the two-variable family degenerates
/// into the -1 family: (a, b, c, d, q) =
/// (-exp(eps alpha), -exp(eps beta), -exp(eps gamma), delta, -exp(eps)).
pub fn limit_qparams(p: &BivParams, eps: f64) -> QParams {
    QParams {
        a: -(eps * p.alpha.to_f64()).exp(),
        b: -(eps * p.beta.to_f64()).exp(),
        c: -(eps * p.gamma.to_f64()).exp(),
        d: p.delta.to_f64(),
        q: -eps.exp(),
    }
}

/// Univariate version of the same path: P_n(x; -exp(eps a), -exp(eps b), c)
/// at base -exp(eps) degenerates into the univariate -1 polynomial.
pub fn uni_limit_qargs(p: &UniParams, eps: f64) -> (f64, f64, f64, f64) {
    (-(eps * p.a.to_f64()).exp(), -(eps * p.b.to_f64()).exp(), p.c.to_f64(), -eps.exp())
}

/// Largest coefficient deviation between the univariate q-polynomial on the
/// degeneration path and its -1 target.
pub fn uni_limit_deviation(n: u32, p: &UniParams, eps: f64) -> Result<f64> {
    let (a, b, c, q) = uni_limit_qargs(p, eps);
    let qpoly = bigq_uni_coeffs(n, a, b, c, q)?;
    let diff = qpoly.sub(&bigm1_coeffs(n, p)?.to_num());
    Ok(diff.terms().map(|(_, c)| c.abs()).fold(0.0, f64::max))
}

/// Largest coefficient deviation between the two-variable q-polynomial on
/// the degeneration path and its -1 target.
pub fn biv_limit_deviation(idx: BivIndex, p: &BivParams, eps: f64) -> Result<f64> {
    let qpoly = bigq_biv_coeffs(idx, &limit_qparams(p, eps))?;
    let diff = qpoly.sub(&biv_coeffs(idx, p)?.to_num());
    Ok(diff.terms().map(|(_, c)| c.abs()).fold(0.0, f64::max))
}

/// The rescaled operator eigenvalue on the degeneration path; its limit is
/// the eigenvalue of the principal -1 operator.
pub fn eigen_limit_value(n: u32, p: &BivParams, eps: f64) -> f64 {
    let qp = limit_qparams(p, eps);
    omega_eigenvalue(n, &qp) / (1.0 + qp.q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bivariate::eigenvalue_mu;
    use crate::exact::ExactScalar;
    use crate::hyper::phi32_terminating;

    fn classical() -> QParams {
        QParams::new(0.5, 0.6, 0.4, 0.3, 0.7).unwrap()
    }

    fn m1_params() -> BivParams {
        BivParams::from_ratios((1, 2), (3, 4), (1, 4), (1, 5)).unwrap()
    }

    fn max_coeff(f: &NumPoly2) -> f64 {
        f.terms().map(|(_, c)| c.abs()).fold(0.0, f64::max)
    }

    #[test]
    fn uni_value_at_one_is_unity() {
        let p = classical();
        for n in 0..=6u32 {
            let poly = bigq_uni_coeffs(n, p.a, p.b, p.c, p.q).unwrap();
            assert!((poly.evaluate(1.0).unwrap() - 1.0).abs() < 1e-12, "n = {n}");
        }
    }

    #[test]
    fn uni_matches_basic_series() {
        let p = classical();
        for n in 0..=6u32 {
            let poly = bigq_uni_coeffs(n, p.a, p.b, p.c, p.q).unwrap();
            for x0 in [-0.8, -0.2, 0.3, 0.9, 1.4] {
                let series = phi32_terminating(
                    n,
                    p.a * p.b * p.q.powi(n as i32 + 1),
                    x0,
                    p.a * p.q,
                    p.c * p.q,
                    p.q,
                )
                .unwrap();
                let expect = series.evaluate(p.q).unwrap();
                let got = poly.evaluate(x0).unwrap();
                assert!((got - expect).abs() <= 1e-10 * expect.abs().max(1.0), "n = {n}, x = {x0}");
            }
        }
    }

    #[test]
    fn q_derivative_helpers() {
        let q = 0.7;
        let f = num_xy(&[(3, 0, 1.0)]);
        // Mixed-base composition on x^3: apply base 1/q first, then base q.
        let lhs = dq_x(&dq_inv_x(&f, q), q);
        let expect = qnum(3, 1.0 / q) * qnum(2, q);
        assert!((lhs.coefficient(1, 0) - expect).abs() < 1e-14);
        // Opposite order differs: composition order is significant.
        let rhs = dq_inv_x(&dq_x(&f, q), q);
        assert!((rhs.coefficient(1, 0) - qnum(3, q) * qnum(2, 1.0 / q)).abs() < 1e-14);
        assert!((lhs.coefficient(1, 0) - rhs.coefficient(1, 0)).abs() > 1e-3);
        // The termwise rule agrees with the defining difference quotient.
        let g = num_xy(&[(2, 1, 1.5), (0, 3, -0.7), (1, 0, 2.0)]);
        let (x, y) = (0.83, -0.41);
        let quotient =
            (g.evaluate(q * x, y).unwrap() - g.evaluate(x, y).unwrap()) / (x * (q - 1.0));
        assert!((dq_x(&g, q).evaluate(x, y).unwrap() - quotient).abs() < 1e-12);
    }

    #[test]
    fn biv_assembly_matches_factored_form() {
        let p = classical();
        let points = [(0.45, 0.85), (-0.3, 0.6), (0.7, -0.9), (-0.5, -0.75)];
        for n in 0..=4u32 {
            for k in 0..=n {
                let poly = bigq_biv_coeffs(BivIndex { n, k }, &p).unwrap();
                for &(x, y) in &points {
                    let outer = bigq_uni_coeffs(
                        n - k,
                        p.a,
                        p.b * p.c * p.q.powi(2 * k as i32 + 1),
                        p.d * p.q.powi(k as i32),
                        p.q,
                    )
                    .unwrap()
                    .evaluate(y)
                    .unwrap();
                    let glue = y.powi(k as i32) * crate::hyper::qpochhammer(p.d * p.q / y, p.q, k);
                    let inner = bigq_uni_coeffs(k, p.c, p.b, p.d / y, p.q)
                        .unwrap()
                        .evaluate(x / y)
                        .unwrap();
                    let expect = outer * glue * inner;
                    let got = poly.evaluate(x, y).unwrap();
                    assert!(
                        (got - expect).abs() <= 1e-10 * expect.abs().max(1.0),
                        "n = {n}, k = {k}, ({x}, {y}): {got} vs {expect}"
                    );
                }
            }
        }
    }

    #[test]
    fn omega_diagonalizes_family() {
        let p = classical();
        for n in 0..=4u32 {
            let lambda = omega_eigenvalue(n, &p);
            for k in 0..=n {
                let poly = bigq_biv_coeffs(BivIndex { n, k }, &p).unwrap();
                let residual = omega_apply(&p, &poly).sub(&poly.scale(&lambda));
                let scale = max_coeff(&poly) * lambda.abs().max(1.0);
                assert!(
                    max_coeff(&residual) <= 1e-9 * scale.max(1.0),
                    "n = {n}, k = {k}: residual {}",
                    max_coeff(&residual)
                );
            }
        }
    }

    #[test]
    fn recurrences_hold_as_polynomial_identities() {
        for p in [classical(), QParams::new(0.5, 0.6, 0.4, -0.3, 0.7).unwrap()] {
            for n in 0..=4u32 {
                for k in 0..=n {
                    let idx = BivIndex { n, k };
                    let base = bigq_biv_coeffs(idx, &p).unwrap();
                    let scale = max_coeff(&base).max(1.0);
                    for (coeffs, mult) in [
                        (q_y_recurrence_coeffs(idx, &p).unwrap(), (0i64, 1i64)),
                        (q_x_recurrence_coeffs(idx, &p).unwrap(), (1, 0)),
                    ] {
                        let mut acc = NumPoly2::zero();
                        for &(dn, dk, value) in &coeffs {
                            let sn = n as i64 + dn as i64;
                            let sk = k as i64 + dk as i64;
                            if sn < 0 || sk < 0 || sk > sn {
                                assert!(
                                    value.abs() <= 1e-12 * scale,
                                    "phantom coefficient {value} at n = {n}, k = {k}, \
                                     shift ({dn}, {dk})"
                                );
                                continue;
                            }
                            let member =
                                bigq_biv_coeffs(BivIndex { n: sn as u32, k: sk as u32 }, &p)
                                    .unwrap();
                            acc = acc.add(&member.scale(&value));
                        }
                        let residual = acc.sub(&base.shift(mult.0, mult.1));
                        assert!(
                            max_coeff(&residual) <= 1e-9 * scale,
                            "n = {n}, k = {k}, multiplier {mult:?}: residual {}",
                            max_coeff(&residual)
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn univariate_limit_approaches_minus_one_family() {
        let p = UniParams::new(
            ExactScalar::ratio(1, 2),
            ExactScalar::ratio(3, 4),
            ExactScalar::ratio(1, 5),
        )
        .unwrap();
        for n in 1..=5u32 {
            let devs: Vec<f64> = [1e-2, 1e-3, 1e-4]
                .iter()
                .map(|&eps| uni_limit_deviation(n, &p, eps).unwrap())
                .collect();
            assert!(devs[2] <= 5e-2, "n = {n}: deviation {} too large", devs[2]);
            // Linear decay in eps: each tenfold step shrinks the deviation
            // about tenfold.
            for w in devs.windows(2) {
                let ratio = w[0] / w[1];
                assert!((5.0..20.0).contains(&ratio), "n = {n}: decay ratio {ratio}");
            }
        }
    }

    #[test]
    fn bivariate_limit_approaches_minus_one_family() {
        let p = m1_params();
        for n in 1..=3u32 {
            for k in 0..=n {
                let idx = BivIndex { n, k };
                let devs: Vec<f64> = [1e-2, 1e-3, 1e-4]
                    .iter()
                    .map(|&eps| biv_limit_deviation(idx, &p, eps).unwrap())
                    .collect();
                assert!(devs[2] <= 5e-2, "n = {n}, k = {k}: deviation {}", devs[2]);
                for w in devs.windows(2) {
                    let ratio = w[0] / w[1];
                    assert!((5.0..20.0).contains(&ratio), "n = {n}, k = {k}: decay ratio {ratio}");
                }
            }
        }
    }

    #[test]
    fn eigenvalue_limit_matches_principal_operator() {
        let p = m1_params();
        for n in 0..=5u32 {
            let target = eigenvalue_mu(n, &p).to_f64();
            let got = eigen_limit_value(n, &p, 1e-5);
            assert!((got - target).abs() <= 1e-3, "n = {n}: {got} vs {target}");
        }
    }

    #[test]
    fn q_recurrence_coefficients_approach_minus_one_tables() {
        use crate::bivariate::{x_recurrence_coeffs, y_recurrence_coeffs, CoeffSource};
        let p = m1_params();
        let qp = limit_qparams(&p, 1e-5);
        for n in 0..=4u32 {
            for k in 0..=n {
                let idx = BivIndex { n, k };
                let qy = q_y_recurrence_coeffs(idx, &qp).unwrap();
                let my = y_recurrence_coeffs(idx, &p, CoeffSource::ClosedForm).unwrap();
                for (qc, mc) in qy.iter().zip(my.iter()) {
                    let target = mc.value.to_f64();
                    assert!(
                        (qc.2 - target).abs() <= 1e-3 * target.abs().max(1.0),
                        "y, n = {n}, k = {k}, shift ({}, {}): {} vs {target}",
                        qc.0,
                        qc.1,
                        qc.2
                    );
                }
                let qx = q_x_recurrence_coeffs(idx, &qp).unwrap();
                let mx = x_recurrence_coeffs(idx, &p, CoeffSource::ClosedForm).unwrap();
                for (qc, mc) in qx.iter().zip(mx.iter()) {
                    let target = mc.value.to_f64();
                    assert!(
                        (qc.2 - target).abs() <= 1e-3 * target.abs().max(1.0),
                        "x, n = {n}, k = {k}, shift ({}, {}): {} vs {target}",
                        qc.0,
                        qc.1,
                        qc.2
                    );
                }
            }
        }
    }
}
