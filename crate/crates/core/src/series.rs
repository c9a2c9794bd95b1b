//! Truncated formal power series with exact coefficients, and residuals of
//! linear differential operators applied to them.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::kernel::{factorial, format_rational, rat_from_int};
use crate::poly::RatPoly;

/// `c_0 + c_1 x + ... + c_N x^N`, known only through degree `N`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncatedPS {
    coeffs: Vec<BigRational>,
}

impl TruncatedPS {
    /// Series of order `coeffs.len() - 1`.
    pub fn new(coeffs: Vec<BigRational>) -> Self {
        assert!(!coeffs.is_empty(), "a truncated series keeps at least c_0");
        TruncatedPS { coeffs }
    }

    pub fn zero(order: usize) -> Self {
        TruncatedPS {
            coeffs: vec![BigRational::zero(); order + 1],
        }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> &BigRational {
        &self.coeffs[i]
    }

    pub fn set_coeff(&mut self, i: usize, c: BigRational) {
        self.coeffs[i] = c;
    }

    /// Reads the truncation as an exact polynomial and pads it with zeros up
    /// to `order`.
    pub fn pad_to(&self, order: usize) -> TruncatedPS {
        let mut coeffs = self.coeffs.clone();
        coeffs.resize(order.max(self.order()) + 1, BigRational::zero());
        TruncatedPS { coeffs }
    }

    pub fn truncate(&self, order: usize) -> TruncatedPS {
        TruncatedPS {
            coeffs: self.coeffs[..=order.min(self.order())].to_vec(),
        }
    }

    /// Term-wise derivative; the order drops by one.
    pub fn diff(&self) -> TruncatedPS {
        if self.order() == 0 {
            return TruncatedPS::zero(0);
        }
        TruncatedPS {
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * rat_from_int(i as i64))
                .collect(),
        }
    }

    /// Product with a polynomial, truncated at this series' order.
    pub fn mul_poly(&self, p: &RatPoly) -> TruncatedPS {
        let n = self.order();
        let mut out = vec![BigRational::zero(); n + 1];
        for (i, a) in p.coeffs().iter().enumerate().take(n + 1) {
            if a.is_zero() {
                continue;
            }
            for (j, c) in self.coeffs.iter().enumerate().take(n + 1 - i) {
                out[i + j] += a * c;
            }
        }
        TruncatedPS { coeffs: out }
    }

    /// Sum truncated at the smaller order.
    pub fn add(&self, other: &TruncatedPS) -> TruncatedPS {
        let n = self.order().min(other.order());
        TruncatedPS {
            coeffs: (0..=n).map(|i| &self.coeffs[i] + &other.coeffs[i]).collect(),
        }
    }

    pub fn scale(&self, c: &BigRational) -> TruncatedPS {
        TruncatedPS {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    pub fn sub(&self, other: &TruncatedPS) -> TruncatedPS {
        self.add(&other.scale(&rat_from_int(-1)))
    }
}

/// `F(x) = sum_{n=0}^{N} n! P(n) x^n`.
pub fn build_f(p: &RatPoly, order: usize) -> TruncatedPS {
    TruncatedPS {
        coeffs: (0..=order)
            .map(|n| BigRational::from_integer(factorial(n as u64)) * p.eval_int(&BigInt::from(n)))
            .collect(),
    }
}

/// `sum_i coeffs[i](x) F^{(i)}(x) + constant(x)`, applied to a truncation
/// that is read as an exact polynomial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearOde {
    /// `coeffs[i]` multiplies the `i`-th derivative.
    pub coeffs: Vec<RatPoly>,
    /// Moved to the left-hand side: the equation is `L F + constant = 0`.
    pub constant: RatPoly,
}

impl LinearOde {
    /// `x^2 F' + (x-1) F = -1`.
    pub fn first_order_factorial() -> Self {
        LinearOde {
            coeffs: vec![RatPoly::from_ints(&[-1, 1]), RatPoly::from_ints(&[0, 0, 1])],
            constant: RatPoly::one(),
        }
    }

    /// `x^2 F'' + (3x-1) F' + F = 0`.
    pub fn second_order_factorial() -> Self {
        LinearOde {
            coeffs: vec![
                RatPoly::one(),
                RatPoly::from_ints(&[-1, 3]),
                RatPoly::from_ints(&[0, 0, 1]),
            ],
            constant: RatPoly::zero(),
        }
    }

    /// Largest amount by which a coefficient raises the degree.
    fn degree_lift(&self) -> usize {
        self.coeffs
            .iter()
            .enumerate()
            .filter_map(|(i, c)| c.degree().map(|d| d.saturating_sub(i)))
            .max()
            .unwrap_or(0)
    }

    /// Residual of the operator on `f`, exact through degree
    /// `f.order() + degree_lift`.
    pub fn apply(&self, f: &TruncatedPS) -> TruncatedPS {
        let out_order = f.order() + self.degree_lift();
        let mut g = f.pad_to(out_order + self.coeffs.len());
        let mut acc = TruncatedPS::zero(out_order);
        for c in &self.coeffs {
            acc = acc.add(&g.truncate(out_order).mul_poly(c));
            g = g.diff();
        }
        let mut constant = self.constant.coeffs().to_vec();
        constant.resize(out_order + 1, BigRational::zero());
        constant.truncate(out_order + 1);
        acc.add(&TruncatedPS::new(constant))
    }
}

/// Residual report in the shared verdict schema.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OdeResidual {
    pub order: usize,
    pub residual: TruncatedPS,
    /// Degrees where truncation may leave a nonzero coefficient.
    pub allowed: Vec<usize>,
}

impl OdeResidual {
    /// First degree outside the whitelist with a nonzero coefficient.
    pub fn first_violation(&self) -> Option<usize> {
        self.residual
            .coeffs()
            .iter()
            .enumerate()
            .find(|(d, c)| !c.is_zero() && !self.allowed.contains(d))
            .map(|(d, _)| d)
    }

    pub fn passed(&self) -> bool {
        self.first_violation().is_none()
    }

    pub fn artifacts(&self) -> Vec<(usize, String)> {
        self.allowed
            .iter()
            .filter(|&&d| d <= self.residual.order())
            .map(|&d| (d, format_rational(self.residual.coeff(d))))
            .collect()
    }
}

#[derive(Serialize)]
struct Artifact {
    degree: usize,
    value: String,
}

impl OdeResidual {
    pub fn artifacts_json(&self) -> serde_json::Value {
        let list: Vec<Artifact> = self
            .artifacts()
            .into_iter()
            .map(|(degree, value)| Artifact { degree, value })
            .collect();
        serde_json::to_value(list).expect("artifacts serialize")
    }
}

fn require_order(order: usize, min: usize) -> Result<()> {
    if order < min {
        return Err(Error::InvalidParameters(format!(
            "truncation order must be at least {min}, got {order}"
        )));
    }
    Ok(())
}

/// `x^2 F' + (x-1) F + 1` on a given truncation; degree `N+1` is the only
/// permitted artifact.
pub fn first_order_residual(f: &TruncatedPS) -> OdeResidual {
    let residual = LinearOde::first_order_factorial().apply(f);
    OdeResidual {
        order: f.order(),
        residual,
        allowed: vec![f.order() + 1],
    }
}

/// `x^2 F'' + (3x-1) F' + F` on a given truncation; degrees `N` and `N+1`
/// are permitted artifacts.
pub fn second_order_residual(f: &TruncatedPS) -> OdeResidual {
    let residual = LinearOde::second_order_factorial().apply(f);
    OdeResidual {
        order: f.order(),
        residual,
        allowed: vec![f.order(), f.order() + 1],
    }
}

/// First-order residual for `F_0 = sum n! x^n` truncated at `N >= 2`.
pub fn ode_residual_first(order: usize) -> Result<OdeResidual> {
    require_order(order, 2)?;
    Ok(first_order_residual(&build_f(&RatPoly::one(), order)))
}

/// Second-order residual for `F_0` truncated at `N >= 3`.
pub fn ode_residual_second(order: usize) -> Result<OdeResidual> {
    require_order(order, 3)?;
    Ok(second_order_residual(&build_f(&RatPoly::one(), order)))
}
