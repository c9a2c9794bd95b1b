//! p-adic valuations, truncated expansions and convergence domains.

use std::cmp::Ordering;
use std::fmt;
use std::ops::Add;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::kernel::{digit_sum, factorial, rat_pow};
use crate::poly::RatPoly;

/// Default number of stored digits for [`expand`].
pub const DEFAULT_PRECISION: usize = 64;

/// A prime number, checked by trial division at construction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct Prime(u64);

impl Prime {
    pub fn new(p: u64) -> Result<Self> {
        if p < 2 {
            return Err(Error::NotPrime(p));
        }
        let mut d = 2u64;
        while d * d <= p {
            if p.is_multiple_of(d) {
                return Err(Error::NotPrime(p));
            }
            d += 1;
        }
        Ok(Prime(p))
    }

    pub fn get(self) -> u64 {
        self.0
    }

    pub fn as_bigint(self) -> BigInt {
        BigInt::from(self.0)
    }
}

impl fmt::Display for Prime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A p-adic valuation. Zero has the distinct valuation [`Valuation::Infinite`],
/// which compares above every finite value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Valuation {
    Finite(i64),
    Infinite,
}

impl Valuation {
    pub fn finite(self) -> Option<i64> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinite => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, Valuation::Infinite)
    }
}

impl Add for Valuation {
    type Output = Valuation;

    fn add(self, rhs: Valuation) -> Valuation {
        match (self, rhs) {
            (Valuation::Finite(a), Valuation::Finite(b)) => Valuation::Finite(a + b),
            _ => Valuation::Infinite,
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinite => f.write_str("inf"),
        }
    }
}

impl Serialize for Valuation {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Valuation::Finite(v) => s.serialize_i64(*v),
            Valuation::Infinite => s.serialize_str("inf"),
        }
    }
}

/// Largest `e` with `p^e | n`; infinite for zero.
pub fn val_int(n: &BigInt, p: Prime) -> Valuation {
    if n.is_zero() {
        return Valuation::Infinite;
    }
    let mut n = n.magnitude().clone();
    if p.get() == 2 {
        return Valuation::Finite(n.trailing_zeros().unwrap_or(0) as i64);
    }
    let p = p.get();
    let mut e = 0i64;
    while (&n % p).is_zero() {
        n /= p;
        e += 1;
    }
    Valuation::Finite(e)
}

/// `v_p(n!) = (n - s_n) / (p - 1)` where `s_n` is the base-`p` digit sum.
pub fn val_factorial(n: u64, p: Prime) -> Valuation {
    Valuation::Finite(((n - digit_sum(n, p)) / (p.get() - 1)) as i64)
}

pub fn val_rat(q: &BigRational, p: Prime) -> Valuation {
    match (val_int(q.numer(), p), val_int(q.denom(), p)) {
        (Valuation::Finite(a), Valuation::Finite(b)) => Valuation::Finite(a - b),
        _ => Valuation::Infinite,
    }
}

/// `|q|_p = p^(-v_p(q))`, zero for `q = 0`.
pub fn norm(q: &BigRational, p: Prime) -> BigRational {
    match val_rat(q, p) {
        Valuation::Infinite => BigRational::zero(),
        Valuation::Finite(v) => {
            let base = BigRational::from_integer(p.as_bigint());
            if v >= 0 {
                rat_pow(&base, v as u64).recip()
            } else {
                rat_pow(&base, v.unsigned_abs())
            }
        }
    }
}

/// Truncated base-`p` expansion `p^offset * sum(digits[i] * p^i)`, exact
/// modulo `p^(offset + precision)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PadicApprox {
    #[serde(rename = "p")]
    pub prime: Prime,
    #[serde(rename = "val")]
    pub valuation_offset: i64,
    pub digits: Vec<u64>,
    pub precision: usize,
}

impl PadicApprox {
    pub fn is_zero(&self) -> bool {
        self.digits.iter().all(|&d| d == 0)
    }

    /// The rational `p^offset * sum(digits[i] * p^i)`.
    pub fn reconstruct(&self) -> BigRational {
        let p = self.prime.as_bigint();
        let mut acc = BigInt::zero();
        for d in self.digits.iter().rev() {
            acc = acc * &p + BigInt::from(*d);
        }
        let scale = rat_pow(&BigRational::from_integer(p), self.valuation_offset.unsigned_abs());
        let acc = BigRational::from_integer(acc);
        if self.valuation_offset >= 0 {
            acc * scale
        } else {
            acc / scale
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("expansion serializes")
    }
}

impl fmt::Display for PadicApprox {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits: Vec<String> = self.digits.iter().map(u64::to_string).collect();
        if self.is_zero() {
            write!(f, "p={} val=inf digits=[{}]", self.prime, digits.join(","))
        } else {
            write!(
                f,
                "p={} val={} digits=[{}]",
                self.prime,
                self.valuation_offset,
                digits.join(",")
            )
        }
    }
}

/// Expands `q` to `m` base-`p` digits starting at its valuation.
pub fn expand(q: &BigRational, p: Prime, m: usize) -> PadicApprox {
    assert!(m >= 1, "expansion precision must be positive");
    let offset = match val_rat(q, p) {
        Valuation::Infinite => {
            return PadicApprox {
                prime: p,
                valuation_offset: 0,
                digits: vec![0; m],
                precision: m,
            }
        }
        Valuation::Finite(v) => v,
    };
    let pb = p.as_bigint();
    let shift = rat_pow(&BigRational::from_integer(pb.clone()), offset.unsigned_abs());
    let unit = if offset >= 0 { q / shift } else { q * shift };
    let modulus = num_traits::pow(pb.clone(), m);
    let inverse = mod_inverse(unit.denom(), &modulus)
        .expect("unit denominator is coprime to p");
    let mut residue = (unit.numer() * inverse).mod_floor(&modulus);
    let mut digits = Vec::with_capacity(m);
    for _ in 0..m {
        let (quot, digit) = residue.div_rem(&pb);
        digits.push(u64::try_from(digit).expect("digit below p"));
        residue = quot;
    }
    PadicApprox {
        prime: p,
        valuation_offset: offset,
        digits,
        precision: m,
    }
}

fn mod_inverse(a: &BigInt, modulus: &BigInt) -> Option<BigInt> {
    let egcd = a.extended_gcd(modulus);
    if !egcd.gcd.is_one() {
        return None;
    }
    Some(egcd.x.mod_floor(modulus))
}

/// Parameters of the factorial series domain: `alpha` and `sum(mu_i * lambda_i)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ConvergenceParams {
    alpha: u32,
    mu_lambda_sum: u64,
}

impl ConvergenceParams {
    pub fn new(alpha: u32, mu_lambda_sum: u64) -> Result<Self> {
        if alpha == 0 {
            return Err(Error::InvalidParameters("alpha must be at least 1".into()));
        }
        Ok(ConvergenceParams {
            alpha,
            mu_lambda_sum,
        })
    }

    pub fn alpha(&self) -> u32 {
        self.alpha
    }

    pub fn mu_lambda_sum(&self) -> u64 {
        self.mu_lambda_sum
    }
}

/// The open domain `v_p(x) > exclusive_min` on which a factorial series converges.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DomainBound {
    pub prime: Prime,
    pub exclusive_min: BigRational,
}

impl DomainBound {
    pub fn accepts(&self, x: &BigRational) -> bool {
        match val_rat(x, self.prime) {
            Valuation::Infinite => true,
            Valuation::Finite(v) => BigRational::from_integer(v.into()) > self.exclusive_min,
        }
    }

    /// Smallest integer valuation inside the domain.
    pub fn min_valuation(&self) -> i64 {
        let floor = self.exclusive_min.floor().to_integer();
        i64::try_from(floor).expect("bound fits in i64") + 1
    }
}

/// `|x|_p < p^(sum(mu*lambda) / ((p-1) * alpha))`, i.e.
/// `v_p(x) > -sum(mu*lambda) / ((p-1) * alpha)`.
pub fn convergence_bound(params: ConvergenceParams, p: Prime) -> DomainBound {
    let num = -BigInt::from(params.mu_lambda_sum);
    let den = BigInt::from(p.get() - 1) * BigInt::from(params.alpha);
    DomainBound {
        prime: p,
        exclusive_min: BigRational::new(num, den),
    }
}

/// A series given by its general term, indexed from 1.
pub trait TermSeries {
    fn term(&self, n: u64) -> BigRational;

    fn terms(&self, n_max: u64) -> Vec<BigRational> {
        (1..=n_max).map(|n| self.term(n)).collect()
    }
}

/// `sum (n!)^e * P(n) * x^n`; `e = 0` gives a plain power series.
#[derive(Clone, Debug)]
pub struct FactorialPowerSeries {
    pub factorial_exponent: u32,
    pub poly: RatPoly,
    pub x: BigRational,
}

impl TermSeries for FactorialPowerSeries {
    fn term(&self, n: u64) -> BigRational {
        let fact = BigRational::from_integer(num_traits::pow(factorial(n), self.factorial_exponent as usize));
        fact * self.poly.eval(&BigRational::from_integer(n.into())) * rat_pow(&self.x, n)
    }

    fn terms(&self, n_max: u64) -> Vec<BigRational> {
        let mut out = Vec::with_capacity(n_max as usize);
        let mut fact = BigInt::one();
        let mut xn = BigRational::one();
        for n in 1..=n_max {
            fact *= BigInt::from(n);
            xn *= &self.x;
            let f = BigRational::from_integer(num_traits::pow(fact.clone(), self.factorial_exponent as usize));
            out.push(f * self.poly.eval(&BigRational::from_integer(n.into())) * &xn);
        }
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TermVerdict {
    /// Term valuations grow across the sampled range.
    Converges,
    /// Term valuations do not grow; the terms do not tend to zero.
    Diverges,
    /// Every sampled term is exactly zero.
    Vanishes,
    /// Too few samples to judge.
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TermProfile {
    pub prime: Prime,
    pub valuations: Vec<Valuation>,
    pub verdict: TermVerdict,
}

/// Valuations of the terms `n = 1..=n_max` and an empirical convergence verdict:
/// the series is judged convergent when the smallest valuation in the second
/// half of the window exceeds the smallest in the first half.
pub fn term_val_profile<S: TermSeries + ?Sized>(series: &S, p: Prime, n_max: u64) -> TermProfile {
    let valuations: Vec<Valuation> = series
        .terms(n_max)
        .iter()
        .map(|t| val_rat(t, p))
        .collect();
    let verdict = judge_growth(&valuations);
    TermProfile {
        prime: p,
        valuations,
        verdict,
    }
}

fn judge_growth(valuations: &[Valuation]) -> TermVerdict {
    if valuations.iter().all(|v| v.is_infinite()) {
        return TermVerdict::Vanishes;
    }
    if valuations.len() < 2 {
        return TermVerdict::Inconclusive;
    }
    let (head, tail) = valuations.split_at(valuations.len() / 2);
    let head_min = head.iter().min().copied().unwrap_or(Valuation::Infinite);
    let tail_min = tail.iter().min().copied().unwrap_or(Valuation::Infinite);
    match tail_min.cmp(&head_min) {
        Ordering::Greater => TermVerdict::Converges,
        _ => TermVerdict::Diverges,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::rat_from_int;

    fn p(n: u64) -> Prime {
        Prime::new(n).unwrap()
    }

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    /// Legendre: count multiples of p, p^2, ... below n.
    fn legendre(n: u64, p: u64) -> i64 {
        let mut total = 0;
        let mut pk = p;
        while pk <= n {
            total += n / pk;
            pk *= p;
        }
        total as i64
    }

    #[test]
    fn primes() {
        assert!(Prime::new(2).is_ok());
        assert!(Prime::new(9973).is_ok());
        assert!(matches!(Prime::new(1), Err(Error::NotPrime(1))));
        assert!(Prime::new(0).is_err());
        assert!(Prime::new(91).is_err());
    }

    #[test]
    fn integer_valuations() {
        assert_eq!(val_int(&12.into(), p(2)), Valuation::Finite(2));
        assert_eq!(val_int(&0.into(), p(5)), Valuation::Infinite);
        assert_eq!(val_int(&7.into(), p(5)), Valuation::Finite(0));
        assert_eq!(val_int(&(-48).into(), p(2)), Valuation::Finite(4));
        assert!(Valuation::Infinite > Valuation::Finite(i64::MAX));
    }

    #[test]
    fn factorial_valuations() {
        // 10! = 3628800 = 2^8 * 3^4 * 5^2 * 7
        assert_eq!(val_factorial(10, p(2)), Valuation::Finite(8));
        assert_eq!(val_factorial(25, p(5)), Valuation::Finite(6));
        assert_eq!(val_factorial(0, p(3)), Valuation::Finite(0));
        for prime in [2, 3, 5, 7] {
            for n in 0..200 {
                assert_eq!(val_factorial(n, p(prime)), Valuation::Finite(legendre(n, prime)));
            }
        }
    }

    #[test]
    fn rational_valuations() {
        assert_eq!(val_rat(&q(1, 4), p(2)), Valuation::Finite(-2));
        assert_eq!(val_rat(&q(9, 2), p(3)), Valuation::Finite(2));
        assert_eq!(val_rat(&q(0, 1), p(3)), Valuation::Infinite);
        assert_eq!(norm(&q(1, 4), p(2)), rat_from_int(4));
        assert_eq!(norm(&q(9, 2), p(3)), q(1, 9));
    }

    #[test]
    fn expansions() {
        let e = expand(&rat_from_int(-1), p(5), 3);
        assert_eq!(e.digits, vec![4, 4, 4]);
        assert_eq!(e.valuation_offset, 0);

        // 1/3 = 17 mod 25 since 3 * 17 = 51
        let e = expand(&q(1, 3), p(5), 2);
        assert_eq!(e.digits, vec![2, 3]);
        assert_eq!(e.to_string(), "p=5 val=0 digits=[2,3]");

        let z = expand(&rat_from_int(0), p(7), 4);
        assert!(z.is_zero());
        assert_eq!(z.reconstruct(), rat_from_int(0));

        let e = expand(&q(5, 50), p(5), 3);
        assert_eq!(e.valuation_offset, -1);
        assert_ne!(e.digits[0], 0);

        let json = expand(&q(1, 3), p(5), 2).to_json();
        assert_eq!(json["p"], 5);
        assert_eq!(json["val"], 0);
        assert_eq!(json["digits"], serde_json::json!([2, 3]));
    }

    #[test]
    fn convergence_domains() {
        let two = convergence_bound(ConvergenceParams::new(1, 1).unwrap(), p(2));
        assert_eq!(two.exclusive_min, rat_from_int(-1));
        assert_eq!(two.min_valuation(), 0);
        assert!(two.accepts(&rat_from_int(7)));
        assert!(!two.accepts(&q(1, 2)));

        let none = convergence_bound(ConvergenceParams::new(1, 0).unwrap(), p(3));
        assert_eq!(none.exclusive_min, rat_from_int(0));
        assert!(!none.accepts(&rat_from_int(1)));
        assert!(none.accepts(&rat_from_int(3)));

        let wide = convergence_bound(ConvergenceParams::new(1, 4).unwrap(), p(3));
        assert_eq!(wide.exclusive_min, rat_from_int(-2));
        assert!(wide.accepts(&q(1, 3)));
        assert!(!wide.accepts(&q(1, 9)));

        for prime in [2, 3, 5, 7, 11] {
            for s in 1..5 {
                let b = convergence_bound(ConvergenceParams::new(2, s).unwrap(), p(prime));
                assert!(b.accepts(&rat_from_int(7)));
                assert!(b.accepts(&rat_from_int(-12)));
            }
        }
        assert!(ConvergenceParams::new(0, 1).is_err());
    }

    #[test]
    fn term_profiles() {
        let factorials = FactorialPowerSeries {
            factorial_exponent: 1,
            poly: RatPoly::one(),
            x: rat_from_int(1),
        };
        let profile = term_val_profile(&factorials, p(2), 40);
        let expected: Vec<Valuation> = (1..=40).map(|n| Valuation::Finite(legendre(n, 2))).collect();
        assert_eq!(profile.valuations, expected);
        assert!(profile.valuations.windows(2).all(|w| w[0] <= w[1]));
        assert_eq!(profile.verdict, TermVerdict::Converges);

        let geometric = FactorialPowerSeries {
            factorial_exponent: 0,
            poly: RatPoly::one(),
            x: q(1, 5),
        };
        let profile = term_val_profile(&geometric, p(5), 20);
        assert_eq!(profile.valuations[3], Valuation::Finite(-4));
        assert_eq!(profile.verdict, TermVerdict::Diverges);

        let zero = FactorialPowerSeries {
            factorial_exponent: 1,
            poly: RatPoly::zero(),
            x: rat_from_int(3),
        };
        let profile = term_val_profile(&zero, p(3), 10);
        assert!(profile.valuations.iter().all(|v| v.is_infinite()));
        assert_eq!(profile.verdict, TermVerdict::Vanishes);
    }
}
