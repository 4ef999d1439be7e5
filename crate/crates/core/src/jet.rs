//! Truncated Taylor jets in one variable.
//!
//! A [`Jet`] of order `K` carries the value and the first `K` derivatives of a
//! scalar function at a fixed base point. Arithmetic and the elementary
//! functions propagate all coefficients exactly (up to rounding), so derivative
//! information of a composite expression is obtained without finite
//! differences. Internally the coefficients are stored in normalized Taylor
//! form `c_k = f^(k)(s0) / k!`; [`Jet::derivative`] converts back.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use crate::error::{Error, Result};

/// Order used throughout the crate unless a caller asks for more.
///
/// Classification needs `S(h)'`, which uses four derivatives of `h`, and the
/// second derivative of the singular curve, which needs `B'''` and hence `h`
/// to fifth order.
pub const DEFAULT_ORDER: usize = 5;

/// Largest supported order.
pub const MAX_ORDER: usize = 24;

#[derive(Clone, PartialEq)]
pub struct Jet {
    base: f64,
    coeffs: Vec<f64>,
}

impl fmt::Debug for Jet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Jet")
            .field("base", &self.base)
            .field("derivatives", &self.derivatives())
            .finish()
    }
}

fn factorial(k: usize) -> f64 {
    (1..=k).fold(1.0, |acc, i| acc * i as f64)
}

impl Jet {
    pub fn constant(base: f64, value: f64, order: usize) -> Jet {
        let mut coeffs = vec![0.0; order + 1];
        coeffs[0] = value;
        Jet { base, coeffs }
    }

    /// The identity function `s` expanded at `base`.
    pub fn variable(base: f64, order: usize) -> Jet {
        let mut j = Jet::constant(base, base, order);
        if order > 0 {
            j.coeffs[1] = 1.0;
        }
        j
    }

    /// Builds a jet from `[f, f', f'', ...]` at `base`.
    pub fn from_derivatives(base: f64, derivs: &[f64]) -> Jet {
        assert!(!derivs.is_empty(), "a jet needs at least a value");
        let coeffs = derivs.iter().enumerate().map(|(k, d)| d / factorial(k)).collect();
        Jet { base, coeffs }
    }

    /// Builds a jet directly from normalized Taylor coefficients.
    pub fn from_taylor(base: f64, coeffs: Vec<f64>) -> Jet {
        assert!(!coeffs.is_empty(), "a jet needs at least a value");
        Jet { base, coeffs }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn base_point(&self) -> f64 {
        self.base
    }

    pub fn value(&self) -> f64 {
        self.coeffs[0]
    }

    /// Normalized Taylor coefficient `f^(k)/k!`.
    pub fn taylor(&self, k: usize) -> f64 {
        self.coeffs[k]
    }

    pub fn taylor_coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// The `k`-th derivative at the base point.
    pub fn derivative(&self, k: usize) -> f64 {
        self.coeffs[k] * factorial(k)
    }

    pub fn derivatives(&self) -> Vec<f64> {
        (0..self.coeffs.len()).map(|k| self.derivative(k)).collect()
    }

    /// d/ds, losing one order. An order-0 jet differentiates to the zero jet.
    pub fn differentiate(&self) -> Jet {
        if self.coeffs.len() == 1 {
            return Jet::constant(self.base, 0.0, 0);
        }
        let coeffs = (1..self.coeffs.len())
            .map(|k| k as f64 * self.coeffs[k])
            .collect();
        Jet {
            base: self.base,
            coeffs,
        }
    }

    pub fn truncate(&self, order: usize) -> Jet {
        let n = (order + 1).min(self.coeffs.len());
        Jet {
            base: self.base,
            coeffs: self.coeffs[..n].to_vec(),
        }
    }

    /// Evaluates the truncated Taylor polynomial at `base + ds`.
    pub fn eval_offset(&self, ds: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * ds + c)
    }

    pub fn is_finite(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_finite())
    }

    fn zeros_like(&self, n: usize) -> Jet {
        Jet {
            base: self.base,
            coeffs: vec![0.0; n],
        }
    }

    fn map(&self, f: impl Fn(f64) -> f64) -> Jet {
        Jet {
            base: self.base,
            coeffs: self.coeffs.iter().map(|&c| f(c)).collect(),
        }
    }

    fn checked(self, func: &'static str) -> Result<Jet> {
        if self.is_finite() {
            Ok(self)
        } else {
            Err(Error::Domain { func, at: self.base })
        }
    }

    pub fn scale(&self, k: f64) -> Jet {
        self.map(|c| c * k)
    }

    pub fn recip(&self) -> Result<Jet> {
        Jet::constant(self.base, 1.0, self.order()).checked_div(self)
    }

    /// Division with a domain check on the divisor's value.
    pub fn checked_div(&self, rhs: &Jet) -> Result<Jet> {
        debug_assert_eq!(self.base, rhs.base);
        let b0 = rhs.coeffs[0];
        if b0 == 0.0 || !b0.is_finite() {
            return Err(Error::Domain {
                func: "div",
                at: self.base,
            });
        }
        let n = self.coeffs.len().min(rhs.coeffs.len());
        let mut q = vec![0.0; n];
        for k in 0..n {
            let mut acc = self.coeffs[k];
            for j in 1..=k {
                acc -= rhs.coeffs[j] * q[k - j];
            }
            q[k] = acc / b0;
        }
        Jet {
            base: self.base,
            coeffs: q,
        }
        .checked("div")
    }

    pub fn exp(&self) -> Jet {
        let n = self.coeffs.len();
        let a = &self.coeffs;
        let mut b = vec![0.0; n];
        b[0] = a[0].exp();
        for k in 1..n {
            let mut acc = 0.0;
            for j in 1..=k {
                acc += j as f64 * a[j] * b[k - j];
            }
            b[k] = acc / k as f64;
        }
        Jet {
            base: self.base,
            coeffs: b,
        }
    }

    pub fn ln(&self) -> Result<Jet> {
        let a = &self.coeffs;
        if !(a[0] > 0.0) {
            return Err(Error::Domain {
                func: "log",
                at: self.base,
            });
        }
        let n = a.len();
        let mut b = vec![0.0; n];
        b[0] = a[0].ln();
        for k in 1..n {
            let mut acc = 0.0;
            for j in 1..k {
                acc += j as f64 * b[j] * a[k - j];
            }
            b[k] = (a[k] - acc / k as f64) / a[0];
        }
        Jet {
            base: self.base,
            coeffs: b,
        }
        .checked("log")
    }

    /// `(sin, cos)` computed by the coupled recurrence.
    pub fn sin_cos(&self) -> (Jet, Jet) {
        let n = self.coeffs.len();
        let a = &self.coeffs;
        let mut s = vec![0.0; n];
        let mut c = vec![0.0; n];
        s[0] = a[0].sin();
        c[0] = a[0].cos();
        for k in 1..n {
            let (mut ss, mut cc) = (0.0, 0.0);
            for j in 1..=k {
                let ja = j as f64 * a[j];
                ss += ja * c[k - j];
                cc -= ja * s[k - j];
            }
            s[k] = ss / k as f64;
            c[k] = cc / k as f64;
        }
        (
            Jet {
                base: self.base,
                coeffs: s,
            },
            Jet {
                base: self.base,
                coeffs: c,
            },
        )
    }

    /// `(sinh, cosh)` computed by the coupled recurrence.
    pub fn sinh_cosh(&self) -> (Jet, Jet) {
        let n = self.coeffs.len();
        let a = &self.coeffs;
        let mut s = vec![0.0; n];
        let mut c = vec![0.0; n];
        s[0] = a[0].sinh();
        c[0] = a[0].cosh();
        for k in 1..n {
            let (mut ss, mut cc) = (0.0, 0.0);
            for j in 1..=k {
                let ja = j as f64 * a[j];
                ss += ja * c[k - j];
                cc += ja * s[k - j];
            }
            s[k] = ss / k as f64;
            c[k] = cc / k as f64;
        }
        (
            Jet {
                base: self.base,
                coeffs: s,
            },
            Jet {
                base: self.base,
                coeffs: c,
            },
        )
    }

    pub fn sin(&self) -> Jet {
        self.sin_cos().0
    }

    pub fn cos(&self) -> Jet {
        self.sin_cos().1
    }

    pub fn tan(&self) -> Result<Jet> {
        let (s, c) = self.sin_cos();
        s.checked_div(&c).map_err(|_| Error::Domain {
            func: "tan",
            at: self.base,
        })
    }

    pub fn cot(&self) -> Result<Jet> {
        let (s, c) = self.sin_cos();
        c.checked_div(&s).map_err(|_| Error::Domain {
            func: "cot",
            at: self.base,
        })
    }

    pub fn sinh(&self) -> Jet {
        self.sinh_cosh().0
    }

    pub fn cosh(&self) -> Jet {
        self.sinh_cosh().1
    }

    pub fn tanh(&self) -> Jet {
        let (s, c) = self.sinh_cosh();
        // cosh never vanishes
        s.checked_div(&c).expect("cosh > 0")
    }

    pub fn sqrt(&self) -> Result<Jet> {
        let a = &self.coeffs;
        if a[0] < 0.0 || (a[0] == 0.0 && a.len() > 1) || !a[0].is_finite() {
            return Err(Error::Domain {
                func: "sqrt",
                at: self.base,
            });
        }
        let n = a.len();
        let mut b = vec![0.0; n];
        b[0] = a[0].sqrt();
        for k in 1..n {
            let mut acc = a[k];
            for j in 1..k {
                acc -= b[j] * b[k - j];
            }
            b[k] = acc / (2.0 * b[0]);
        }
        Jet {
            base: self.base,
            coeffs: b,
        }
        .checked("sqrt")
    }

    /// Integer power by repeated squaring; negative exponents need a non-zero value.
    pub fn powi(&self, n: i32) -> Result<Jet> {
        let mut result = Jet::constant(self.base, 1.0, self.order());
        let mut base = self.clone();
        let mut e = n.unsigned_abs();
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        if n < 0 {
            result.recip().map_err(|_| Error::Domain {
                func: "pow",
                at: self.base,
            })
        } else {
            Ok(result)
        }
    }

    /// Real constant power. Integral exponents dispatch to [`Jet::powi`];
    /// other exponents need a positive value.
    pub fn powf(&self, r: f64) -> Result<Jet> {
        if r.fract() == 0.0 && r.abs() <= i32::MAX as f64 {
            return self.powi(r as i32);
        }
        let a = &self.coeffs;
        if !(a[0] > 0.0) {
            return Err(Error::Domain {
                func: "pow",
                at: self.base,
            });
        }
        let n = a.len();
        let mut b = vec![0.0; n];
        b[0] = a[0].powf(r);
        for k in 1..n {
            let mut acc = 0.0;
            for j in 1..=k {
                acc += (r * j as f64 - (k - j) as f64) * a[j] * b[k - j];
            }
            b[k] = acc / (k as f64 * a[0]);
        }
        Jet {
            base: self.base,
            coeffs: b,
        }
        .checked("pow")
    }

    /// General power `self^rhs = exp(rhs * ln self)`.
    pub fn pow(&self, rhs: &Jet) -> Result<Jet> {
        if rhs.coeffs[1..].iter().all(|&c| c == 0.0) {
            return self.powf(rhs.value()).map(|j| j.truncate(rhs.order()));
        }
        let l = self.ln().map_err(|_| Error::Domain {
            func: "pow",
            at: self.base,
        })?;
        Ok((rhs * &l).exp())
    }
}

/// Schwarzian derivative `h'''/h' - 3/2 (h''/h')^2` of an order-`K` jet,
/// returned as a jet of order `K - 3`.
pub fn schwarzian(h: &Jet) -> Result<Jet> {
    assert!(h.order() >= 3, "schwarzian needs a jet of order >= 3");
    let d1 = h.differentiate();
    let d2 = d1.differentiate();
    let d3 = d2.differentiate();
    if d1.value() == 0.0 {
        return Err(Error::Domain {
            func: "schwarzian",
            at: h.base,
        });
    }
    let ratio2 = d2.checked_div(&d1)?;
    let ratio3 = d3.checked_div(&d1)?;
    Ok(&ratio3 - &(&ratio2 * &ratio2).scale(1.5))
}

/// Elementary functions available to expressions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Func {
    Exp,
    Log,
    Sin,
    Cos,
    Tan,
    Cot,
    Sinh,
    Cosh,
    Tanh,
    Sqrt,
}

impl Func {
    pub const ALL: [Func; 10] = [
        Func::Exp,
        Func::Log,
        Func::Sin,
        Func::Cos,
        Func::Tan,
        Func::Cot,
        Func::Sinh,
        Func::Cosh,
        Func::Tanh,
        Func::Sqrt,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Func::Exp => "exp",
            Func::Log => "log",
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Tan => "tan",
            Func::Cot => "cot",
            Func::Sinh => "sinh",
            Func::Cosh => "cosh",
            Func::Tanh => "tanh",
            Func::Sqrt => "sqrt",
        }
    }

    pub fn from_name(name: &str) -> Option<Func> {
        Func::ALL.into_iter().find(|f| f.name() == name)
    }

    pub fn apply(self, x: &Jet) -> Result<Jet> {
        match self {
            Func::Exp => Ok(x.exp()),
            Func::Log => x.ln(),
            Func::Sin => Ok(x.sin()),
            Func::Cos => Ok(x.cos()),
            Func::Tan => x.tan(),
            Func::Cot => x.cot(),
            Func::Sinh => Ok(x.sinh()),
            Func::Cosh => Ok(x.cosh()),
            Func::Tanh => Ok(x.tanh()),
            Func::Sqrt => x.sqrt(),
        }
    }

    /// Plain `f64` evaluation; `None` outside the domain.
    pub fn apply_real(self, x: f64) -> Option<f64> {
        let y = match self {
            Func::Exp => x.exp(),
            Func::Log if x > 0.0 => x.ln(),
            Func::Log => return None,
            Func::Sin => x.sin(),
            Func::Cos => x.cos(),
            Func::Tan => x.tan(),
            Func::Cot => x.cos() / x.sin(),
            Func::Sinh => x.sinh(),
            Func::Cosh => x.cosh(),
            Func::Tanh => x.tanh(),
            Func::Sqrt if x >= 0.0 => x.sqrt(),
            Func::Sqrt => return None,
        };
        y.is_finite().then_some(y)
    }
}

impl fmt::Display for Func {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

// ---- operators -------------------------------------------------------------

impl Add for &Jet {
    type Output = Jet;
    fn add(self, rhs: &Jet) -> Jet {
        debug_assert_eq!(self.base, rhs.base);
        let n = self.coeffs.len().min(rhs.coeffs.len());
        let mut out = self.zeros_like(n);
        for k in 0..n {
            out.coeffs[k] = self.coeffs[k] + rhs.coeffs[k];
        }
        out
    }
}

impl Sub for &Jet {
    type Output = Jet;
    fn sub(self, rhs: &Jet) -> Jet {
        debug_assert_eq!(self.base, rhs.base);
        let n = self.coeffs.len().min(rhs.coeffs.len());
        let mut out = self.zeros_like(n);
        for k in 0..n {
            out.coeffs[k] = self.coeffs[k] - rhs.coeffs[k];
        }
        out
    }
}

impl Mul for &Jet {
    type Output = Jet;
    fn mul(self, rhs: &Jet) -> Jet {
        debug_assert_eq!(self.base, rhs.base);
        let n = self.coeffs.len().min(rhs.coeffs.len());
        let mut out = self.zeros_like(n);
        for k in 0..n {
            let mut acc = 0.0;
            for j in 0..=k {
                acc += self.coeffs[j] * rhs.coeffs[k - j];
            }
            out.coeffs[k] = acc;
        }
        out
    }
}

impl Neg for &Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        self.map(|c| -c)
    }
}

impl Add<f64> for &Jet {
    type Output = Jet;
    fn add(self, rhs: f64) -> Jet {
        let mut out = self.clone();
        out.coeffs[0] += rhs;
        out
    }
}

impl Sub<f64> for &Jet {
    type Output = Jet;
    fn sub(self, rhs: f64) -> Jet {
        self + (-rhs)
    }
}

impl Mul<f64> for &Jet {
    type Output = Jet;
    fn mul(self, rhs: f64) -> Jet {
        self.scale(rhs)
    }
}

impl Div<f64> for &Jet {
    type Output = Jet;
    fn div(self, rhs: f64) -> Jet {
        self.map(|c| c / rhs)
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr<Jet> for Jet {
            type Output = Jet;
            fn $m(self, rhs: Jet) -> Jet { (&self).$m(&rhs) }
        }
        impl $tr<&Jet> for Jet {
            type Output = Jet;
            fn $m(self, rhs: &Jet) -> Jet { (&self).$m(rhs) }
        }
        impl $tr<Jet> for &Jet {
            type Output = Jet;
            fn $m(self, rhs: Jet) -> Jet { self.$m(&rhs) }
        }
        impl $tr<f64> for Jet {
            type Output = Jet;
            fn $m(self, rhs: f64) -> Jet { (&self).$m(rhs) }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul);

impl Div<f64> for Jet {
    type Output = Jet;
    fn div(self, rhs: f64) -> Jet {
        (&self) / rhs
    }
}

impl Neg for Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        -&self
    }
}

impl Mul<Jet> for f64 {
    type Output = Jet;
    fn mul(self, rhs: Jet) -> Jet {
        rhs.scale(self)
    }
}

impl Mul<&Jet> for f64 {
    type Output = Jet;
    fn mul(self, rhs: &Jet) -> Jet {
        rhs.scale(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn square_of_variable() {
        let s = Jet::variable(1.0, 5);
        let sq = &s * &s;
        assert_eq!(sq.derivatives()[..4], [1.0, 2.0, 2.0, 0.0]);
    }

    #[test]
    fn tanh_at_zero() {
        // d^k tanh at 0: 0, 1, 0, -2, 0, 16
        let t = Jet::variable(0.0, 5).tanh();
        let d = t.derivatives();
        let want = [0.0, 1.0, 0.0, -2.0, 0.0, 16.0];
        for (got, want) in d.iter().zip(want) {
            assert!(close(*got, want, 1e-13), "{d:?}");
        }
    }

    #[test]
    fn cot_of_exp_half() {
        let s = Jet::variable(0.0, 5);
        let v = (s.exp() / 2.0).cot().unwrap();
        assert!(close(v.value(), 0.5f64.cos() / 0.5f64.sin(), 1e-15));
        assert!(close(v.value(), 1.830_487_721_712_452, 1e-12));
    }

    #[test]
    fn domain_errors_name_the_function() {
        let s = Jet::variable(-1.0, 3);
        assert!(matches!(s.ln(), Err(Error::Domain { func: "log", .. })));
        assert!(matches!(s.sqrt(), Err(Error::Domain { func: "sqrt", .. })));
        let z = Jet::variable(0.0, 3);
        assert!(matches!(z.cot(), Err(Error::Domain { func: "cot", .. })));
        assert!(matches!(z.recip(), Err(Error::Domain { func: "div", .. })));
        assert!(matches!(z.powf(0.5), Err(Error::Domain { func: "pow", .. })));
    }

    #[test]
    fn orders_take_the_minimum() {
        let a = Jet::variable(0.3, 5);
        let b = Jet::variable(0.3, 2);
        assert_eq!((&a * &b).order(), 2);
        assert_eq!(a.checked_div(&(&b + 1.0)).unwrap().order(), 2);
        assert_eq!(a.differentiate().order(), 4);
    }

    #[test]
    fn powers_match_repeated_products() {
        let s = Jet::variable(0.7, 5);
        let cube = &(&s * &s) * &s;
        let p = s.powi(3).unwrap();
        let q = s.powf(3.0).unwrap();
        for k in 0..=5 {
            assert!(close(p.taylor(k), cube.taylor(k), 1e-14));
            assert!(close(q.taylor(k), cube.taylor(k), 1e-14));
        }
        // x^(1/2) agrees with sqrt
        let r = s.powf(0.5).unwrap();
        let t = s.sqrt().unwrap();
        for k in 0..=5 {
            assert!(close(r.taylor(k), t.taylor(k), 1e-13));
        }
        let inv = s.powi(-2).unwrap();
        let one = &inv * &(&s * &s);
        assert!(close(one.value(), 1.0, 1e-15));
        for k in 1..=5 {
            assert!(one.taylor(k).abs() < 1e-13);
        }
    }

    #[test]
    fn eval_offset_is_taylor_polynomial() {
        let e = Jet::variable(0.0, 12).exp();
        assert!(close(e.eval_offset(0.1), 0.1f64.exp(), 1e-15));
    }

    #[test]
    fn func_names_roundtrip() {
        for f in Func::ALL {
            assert_eq!(Func::from_name(f.name()), Some(f));
        }
        assert_eq!(Func::from_name("sec"), None);
    }
    #[test]
    fn schwarzian_of_examples() {
        let t = schwarzian(&Jet::variable(0.4, 5).tanh()).unwrap();
        assert!(close(t.value(), -2.0, 1e-12));
        assert!(t.derivative(1).abs() < 1e-11);

        let s = Jet::variable(0.0, 5);
        let cubic = &s + &s.powi(3).unwrap();
        let sc = schwarzian(&cubic).unwrap();
        assert!(close(sc.value(), 6.0, 1e-14));
        assert_eq!(sc.order(), 2);

        let h = (s.exp() / 2.0).cot().unwrap();
        let sh = schwarzian(&h).unwrap();
        assert!(sh.value().abs() < 1e-12);
        assert!(close(sh.derivative(1), 1.0, 1e-12));
    }

    #[test]
    fn schwarzian_rejects_flat_generator() {
        let s = Jet::variable(0.0, 5);
        let h = &s * &s;
        assert!(matches!(
            schwarzian(&h),
            Err(Error::Domain {
                func: "schwarzian",
                ..
            })
        ));
    }
}
