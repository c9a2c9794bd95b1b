//! Dense polynomials over the rationals and the two-level (x over n)
//! polynomials that house the generating family.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernel::{binomial, format_rational, parse_rational, rat_from_int};

/// The sign parameter `eps = ±1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub const BOTH: [Sign; 2] = [Sign::Plus, Sign::Minus];

    pub fn value(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn to_bigint(self) -> BigInt {
        BigInt::from(self.value())
    }

    pub fn to_rational(self) -> BigRational {
        rat_from_int(self.value())
    }

    /// `eps^e`.
    pub fn pow(self, e: u64) -> Sign {
        if self == Sign::Minus && e % 2 == 1 {
            Sign::Minus
        } else {
            Sign::Plus
        }
    }

    pub fn is_plus(self) -> bool {
        self == Sign::Plus
    }

    pub fn symbol(self) -> char {
        match self {
            Sign::Plus => '+',
            Sign::Minus => '-',
        }
    }
}

impl Neg for Sign {
    type Output = Sign;
    fn neg(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
}

impl Mul for Sign {
    type Output = Sign;
    fn mul(self, rhs: Sign) -> Sign {
        if self == rhs {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value())
    }
}

impl std::str::FromStr for Sign {
    type Err = Error;

    fn from_str(s: &str) -> Result<Sign> {
        match s.trim() {
            "1" | "+1" | "+" | "plus" => Ok(Sign::Plus),
            "-1" | "-" | "minus" => Ok(Sign::Minus),
            other => Err(Error::InvalidParameters(format!(
                "eps must be +1 or -1, got {other:?}"
            ))),
        }
    }
}

impl Serialize for Sign {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_i64(self.value())
    }
}

impl<'de> Deserialize<'de> for Sign {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Sign, D::Error> {
        match i64::deserialize(d)? {
            1 => Ok(Sign::Plus),
            -1 => Ok(Sign::Minus),
            other => Err(serde::de::Error::custom(format!("eps must be ±1, got {other}"))),
        }
    }
}

/// Polynomial in one variable, coefficients lowest degree first, no trailing zeros.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct RatPoly {
    coeffs: Vec<BigRational>,
}

impl RatPoly {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        RatPoly { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| rat_from_int(c)).collect())
    }

    pub fn from_bigints(coeffs: impl IntoIterator<Item = BigInt>) -> Self {
        Self::new(coeffs.into_iter().map(BigRational::from_integer).collect())
    }

    pub fn zero() -> Self {
        RatPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        Self::new(vec![c])
    }

    /// The polynomial `t` itself.
    pub fn var() -> Self {
        Self::monomial(BigRational::one(), 1)
    }

    pub fn monomial(c: BigRational, degree: usize) -> Self {
        let mut coeffs = vec![BigRational::zero(); degree];
        coeffs.push(c);
        Self::new(coeffs)
    }

    /// `a*t + b`.
    pub fn linear(a: BigRational, b: BigRational) -> Self {
        Self::new(vec![b, a])
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> BigRational {
        self.coeffs.get(i).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&BigRational> {
        self.coeffs.last()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn has_integer_coeffs(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_integer())
    }

    /// Horner evaluation.
    pub fn eval(&self, t: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * t + c;
        }
        acc
    }

    pub fn eval_int(&self, t: &BigInt) -> BigRational {
        self.eval(&BigRational::from_integer(t.clone()))
    }

    /// `q(t) = p(t + 1)`, by binomial expansion.
    pub fn shift_one(&self) -> RatPoly {
        let mut out = vec![BigRational::zero(); self.coeffs.len()];
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (j, slot) in out.iter_mut().enumerate().take(i + 1) {
                *slot += c * BigRational::from_integer(binomial(i as u64, j as u64));
            }
        }
        RatPoly::new(out)
    }

    pub fn scale(&self, c: &BigRational) -> RatPoly {
        if c.is_zero() {
            return RatPoly::zero();
        }
        RatPoly::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    /// Multiplies by `t^m`.
    pub fn mul_var_pow(&self, m: usize) -> RatPoly {
        if self.is_zero() {
            return RatPoly::zero();
        }
        let mut coeffs = vec![BigRational::zero(); m];
        coeffs.extend(self.coeffs.iter().cloned());
        RatPoly { coeffs }
    }

    pub fn pow(&self, e: u32) -> RatPoly {
        let mut acc = RatPoly::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Renders with `var` as the variable, e.g. `n^2-3n+3`.
    pub fn render(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (d, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if c.is_negative() {
                out.push('-');
            } else if !out.is_empty() {
                out.push('+');
            }
            let mag = c.abs();
            let var_part = match d {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{d}"),
            };
            if d == 0 {
                out.push_str(&format_rational(&mag));
            } else if mag.is_one() {
                out.push_str(&var_part);
            } else if mag.is_integer() {
                out.push_str(&format!("{}{var_part}", format_rational(&mag)));
            } else {
                out.push_str(&format!("({}){var_part}", format_rational(&mag)));
            }
        }
        out
    }

    /// Coefficients as exact string literals, lowest degree first.
    pub fn to_literals(&self) -> Vec<String> {
        self.coeffs.iter().map(format_rational).collect()
    }

    pub fn from_literals<S: AsRef<str>>(literals: &[S]) -> Result<RatPoly> {
        let coeffs = literals
            .iter()
            .map(|s| parse_rational(s.as_ref()))
            .collect::<Result<Vec<_>>>()?;
        Ok(RatPoly::new(coeffs))
    }
}

impl<'a> Add<&'a RatPoly> for &RatPoly {
    type Output = RatPoly;
    fn add(self, rhs: &'a RatPoly) -> RatPoly {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        RatPoly::new((0..len).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl<'a> Sub<&'a RatPoly> for &RatPoly {
    type Output = RatPoly;
    fn sub(self, rhs: &'a RatPoly) -> RatPoly {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        RatPoly::new((0..len).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl<'a> Mul<&'a RatPoly> for &RatPoly {
    type Output = RatPoly;
    fn mul(self, rhs: &'a RatPoly) -> RatPoly {
        if self.is_zero() || rhs.is_zero() {
            return RatPoly::zero();
        }
        let mut out = vec![BigRational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        RatPoly::new(out)
    }
}

impl Neg for &RatPoly {
    type Output = RatPoly;
    fn neg(self) -> RatPoly {
        RatPoly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($ty:ty, $($tr:ident $method:ident),*) => {$(
        impl $tr<$ty> for $ty {
            type Output = $ty;
            fn $method(self, rhs: $ty) -> $ty {
                $tr::$method(&self, &rhs)
            }
        }
        impl<'a> $tr<&'a $ty> for $ty {
            type Output = $ty;
            fn $method(self, rhs: &'a $ty) -> $ty {
                $tr::$method(&self, rhs)
            }
        }
    )*};
}

forward_owned!(RatPoly, Add add, Sub sub, Mul mul);
forward_owned!(GenPoly, Add add, Sub sub, Mul mul);

impl Neg for RatPoly {
    type Output = RatPoly;
    fn neg(self) -> RatPoly {
        -&self
    }
}

/// Polynomial in `x` whose coefficients are polynomials in `n`, for a fixed
/// sign `eps`. `coeffs[j]` is the coefficient of `x^j`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GenPoly {
    eps: Sign,
    coeffs: Vec<RatPoly>,
}

impl GenPoly {
    pub fn new(eps: Sign, mut coeffs: Vec<RatPoly>) -> Self {
        while coeffs.last().is_some_and(RatPoly::is_zero) {
            coeffs.pop();
        }
        GenPoly { eps, coeffs }
    }

    pub fn zero(eps: Sign) -> Self {
        GenPoly { eps, coeffs: Vec::new() }
    }

    pub fn one(eps: Sign) -> Self {
        Self::new(eps, vec![RatPoly::one()])
    }

    /// `c(n) * x^j`.
    pub fn term(eps: Sign, c: RatPoly, j: usize) -> Self {
        let mut coeffs = vec![RatPoly::zero(); j];
        coeffs.push(c);
        Self::new(eps, coeffs)
    }

    pub fn eps(&self) -> Sign {
        self.eps
    }

    pub fn coeffs(&self) -> &[RatPoly] {
        &self.coeffs
    }

    /// `A_{kj}(n)`, the coefficient of `x^j`.
    pub fn coeff(&self, j: usize) -> RatPoly {
        self.coeffs.get(j).cloned().unwrap_or_default()
    }

    pub fn degree_x(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn eval(&self, n: &BigRational, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c.eval(n);
        }
        acc
    }

    pub fn eval_int(&self, n: &BigInt, x: &BigRational) -> BigRational {
        self.eval(&BigRational::from_integer(n.clone()), x)
    }

    /// Substitutes `n`, leaving a polynomial in `x`.
    pub fn at_n(&self, n: &BigRational) -> RatPoly {
        RatPoly::new(self.coeffs.iter().map(|c| c.eval(n)).collect())
    }

    /// Substitutes `x`, leaving a polynomial in `n`.
    pub fn at_x(&self, x: &BigRational) -> RatPoly {
        let mut acc = RatPoly::zero();
        for c in self.coeffs.iter().rev() {
            acc = &acc.scale(x) + c;
        }
        acc
    }

    /// `n -> n + 1` in every coefficient.
    pub fn shift_n(&self) -> GenPoly {
        GenPoly::new(self.eps, self.coeffs.iter().map(RatPoly::shift_one).collect())
    }

    pub fn mul_x_pow(&self, m: usize) -> GenPoly {
        if self.is_zero() {
            return self.clone();
        }
        let mut coeffs = vec![RatPoly::zero(); m];
        coeffs.extend(self.coeffs.iter().cloned());
        GenPoly { eps: self.eps, coeffs }
    }

    pub fn scale(&self, c: &BigRational) -> GenPoly {
        GenPoly::new(self.eps, self.coeffs.iter().map(|p| p.scale(c)).collect())
    }

    /// Multiplies every coefficient by a polynomial in `n`.
    pub fn mul_n_poly(&self, p: &RatPoly) -> GenPoly {
        GenPoly::new(self.eps, self.coeffs.iter().map(|c| c * p).collect())
    }

    /// Nested coefficient arrays `[[a_{kj,i}]]` as exact literals.
    pub fn to_literals(&self) -> Vec<Vec<String>> {
        self.coeffs.iter().map(RatPoly::to_literals).collect()
    }

    pub fn from_literals(eps: Sign, literals: &[Vec<String>]) -> Result<GenPoly> {
        let coeffs = literals
            .iter()
            .map(|c| RatPoly::from_literals(c))
            .collect::<Result<Vec<_>>>()?;
        Ok(GenPoly::new(eps, coeffs))
    }

    fn check_eps(&self, other: &GenPoly) {
        assert_eq!(self.eps, other.eps, "GenPoly operands built for different eps");
    }
}

impl<'a> Add<&'a GenPoly> for &GenPoly {
    type Output = GenPoly;
    fn add(self, rhs: &'a GenPoly) -> GenPoly {
        self.check_eps(rhs);
        let len = self.coeffs.len().max(rhs.coeffs.len());
        GenPoly::new(self.eps, (0..len).map(|j| &self.coeff(j) + &rhs.coeff(j)).collect())
    }
}

impl<'a> Sub<&'a GenPoly> for &GenPoly {
    type Output = GenPoly;
    fn sub(self, rhs: &'a GenPoly) -> GenPoly {
        self.check_eps(rhs);
        let len = self.coeffs.len().max(rhs.coeffs.len());
        GenPoly::new(self.eps, (0..len).map(|j| &self.coeff(j) - &rhs.coeff(j)).collect())
    }
}

impl<'a> Mul<&'a GenPoly> for &GenPoly {
    type Output = GenPoly;
    fn mul(self, rhs: &'a GenPoly) -> GenPoly {
        self.check_eps(rhs);
        if self.is_zero() || rhs.is_zero() {
            return GenPoly::zero(self.eps);
        }
        let mut out = vec![RatPoly::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = &out[i + j] + &(a * b);
            }
        }
        GenPoly::new(self.eps, out)
    }
}

impl Neg for &GenPoly {
    type Output = GenPoly;
    fn neg(self) -> GenPoly {
        GenPoly::new(self.eps, self.coeffs.iter().map(|c| -c).collect())
    }
}

impl fmt::Display for GenPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let zero = vec![RatPoly::zero(); self.coeffs.len()];
        f.write_str(&render_two_level(&self.coeffs, &zero))
    }
}

/// A two-level polynomial written as `even + eps * odd`, reconstructed from
/// the two concrete sign runs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymbolicGenPoly {
    pub even: Vec<RatPoly>,
    pub odd: Vec<RatPoly>,
}

impl SymbolicGenPoly {
    /// `even = (A+ + A-)/2`, `odd = (A+ - A-)/2`.
    pub fn from_pair(plus: &GenPoly, minus: &GenPoly) -> Result<Self> {
        if plus.eps() != Sign::Plus || minus.eps() != Sign::Minus {
            return Err(Error::InvalidParameters(
                "symbolic reconstruction needs the eps=+1 and eps=-1 runs in that order".into(),
            ));
        }
        let half = BigRational::new(1.into(), 2.into());
        let len = plus.coeffs.len().max(minus.coeffs.len());
        let mut even = Vec::with_capacity(len);
        let mut odd = Vec::with_capacity(len);
        for j in 0..len {
            let (p, m) = (plus.coeff(j), minus.coeff(j));
            even.push((&p + &m).scale(&half));
            odd.push((&p - &m).scale(&half));
        }
        Ok(SymbolicGenPoly { even, odd })
    }

    /// The concrete polynomial for one sign.
    pub fn specialize(&self, eps: Sign) -> GenPoly {
        let e = eps.to_rational();
        let coeffs = self
            .even
            .iter()
            .zip(&self.odd)
            .map(|(a, b)| a + &b.scale(&e))
            .collect();
        GenPoly::new(eps, coeffs)
    }
}

impl fmt::Display for SymbolicGenPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render_two_level(&self.even, &self.odd))
    }
}

/// A rational written as `even + eps * odd`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymbolicValue {
    pub even: BigRational,
    pub odd: BigRational,
}

impl SymbolicValue {
    pub fn from_pair(plus: &BigRational, minus: &BigRational) -> Self {
        let half = BigRational::new(1.into(), 2.into());
        SymbolicValue {
            even: (plus + minus) * &half,
            odd: (plus - minus) * half,
        }
    }

    pub fn from_ints(even: i64, odd: i64) -> Self {
        SymbolicValue {
            even: rat_from_int(even),
            odd: rat_from_int(odd),
        }
    }
}

impl fmt::Display for SymbolicValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let even = RatPoly::constant(self.even.clone());
        let odd = RatPoly::constant(self.odd.clone());
        f.write_str(&render_two_level(&[even], &[odd]))
    }
}

fn render_two_level(even: &[RatPoly], odd: &[RatPoly]) -> String {
    let mut pieces: Vec<(bool, String)> = Vec::new();
    for j in (0..even.len().max(odd.len())).rev() {
        let e = even.get(j).cloned().unwrap_or_default();
        let o = odd.get(j).cloned().unwrap_or_default();
        let x_part = match j {
            0 => String::new(),
            1 => "x".to_string(),
            _ => format!("x^{j}"),
        };
        for (c, marker) in [(&e, ""), (&o, "e")] {
            if c.is_zero() {
                continue;
            }
            let (negative, coef) = coefficient_text(c, j > 0 || !marker.is_empty());
            let mut body = format!("{coef}{marker}");
            if !x_part.is_empty() {
                if !marker.is_empty() {
                    body.push(' ');
                }
                body.push_str(&x_part);
            }
            pieces.push((negative, body));
        }
    }
    if pieces.is_empty() {
        return "0".into();
    }
    let mut out = String::new();
    for (i, (negative, body)) in pieces.into_iter().enumerate() {
        match (i, negative) {
            (0, true) => out.push('-'),
            (0, false) => {}
            (_, true) => out.push_str(" - "),
            (_, false) => out.push_str(" + "),
        }
        out.push_str(&body);
    }
    out
}

/// Sign and text of a coefficient; a unit constant is elided when followed by
/// a variable or marker.
fn coefficient_text(c: &RatPoly, elide_unit: bool) -> (bool, String) {
    if c.is_constant() {
        let v = c.coeff(0);
        let mag = v.abs();
        let text = if elide_unit && mag.is_one() {
            String::new()
        } else {
            format_rational(&mag)
        };
        (v.is_negative(), text)
    } else if c.leading().is_some_and(|l| l.is_negative()) {
        (true, format!("({})", (-c).render("n")))
    } else {
        (false, format!("({})", c.render("n")))
    }
}
