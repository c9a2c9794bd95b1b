//! Exact integer and rational primitives shared by every other module.
//!
//! Integers are [`BigInt`] and rationals are [`BigRational`]; the latter is
//! always kept reduced with a positive denominator.

use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Pow, Signed, Zero};

use crate::error::{Error, Result};
use crate::padic::Prime;

/// Shared memo of `0!, 1!, ..., m!` for the largest `m` requested so far.
fn memo() -> &'static Mutex<Vec<BigInt>> {
    static MEMO: OnceLock<Mutex<Vec<BigInt>>> = OnceLock::new();
    MEMO.get_or_init(|| Mutex::new(vec![BigInt::one()]))
}

/// `n!`, memoized across calls.
pub fn factorial(n: u64) -> BigInt {
    let n = usize::try_from(n).expect("factorial index exceeds usize");
    let mut table = memo().lock().unwrap_or_else(|e| e.into_inner());
    while table.len() <= n {
        let next = table.len();
        let value = &table[next - 1] * BigInt::from(next);
        table.push(value);
    }
    table[n].clone()
}

/// Binomial coefficient `C(n, k)`; zero when `k > n`.
pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        // exact at every step: acc * (n - i) is divisible by (i + 1)
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// `[(base+1)(base+2)...(base+width)]^power`.
///
/// With `base = mu*n + nu`, `width = mu`, `power = lambda` this is the ratio
/// `((mu*(n+1)+nu)!)^lambda / ((mu*n+nu)!)^lambda`.
pub fn rising_block(base: &BigInt, width: u32, power: u32) -> BigInt {
    assert!(width >= 1, "rising block width must be positive");
    let mut block = BigInt::one();
    for j in 1..=width {
        block *= base + BigInt::from(j);
    }
    Pow::pow(block, power)
}

/// Sum of the base-`p` digits of `n`.
pub fn digit_sum(n: u64, p: Prime) -> u64 {
    let p = p.get();
    let mut n = n;
    let mut sum = 0;
    while n > 0 {
        sum += n % p;
        n /= p;
    }
    sum
}

/// `sign^e` for `sign = ±1`.
pub fn sign_pow(negative: bool, e: u64) -> BigInt {
    if negative && e % 2 == 1 {
        -BigInt::one()
    } else {
        BigInt::one()
    }
}

/// `t^e` with the convention `0^0 = 1`.
pub fn rat_pow(t: &BigRational, e: u64) -> BigRational {
    if e == 0 {
        return BigRational::one();
    }
    Pow::pow(t, e)
}

/// `t^e` for integers with `0^0 = 1`.
pub fn int_pow(t: &BigInt, e: u64) -> BigInt {
    if e == 0 {
        return BigInt::one();
    }
    Pow::pow(t, e)
}

pub fn rat_from_int(n: impl Into<BigInt>) -> BigRational {
    BigRational::from_integer(n.into())
}

/// Builds `num/den`, rejecting a zero denominator.
pub fn checked_ratio(num: BigInt, den: BigInt) -> Result<BigRational> {
    if den.is_zero() {
        return Err(Error::DivisionByZero);
    }
    Ok(BigRational::new(num, den))
}

/// Parses an exact rational literal: an integer `"-3"` or a fraction `"2/7"`.
///
/// Decimal points and exponents are rejected.
pub fn parse_rational(literal: &str) -> Result<BigRational> {
    let fail = |reason: &str| Error::ParseRational {
        literal: literal.to_string(),
        reason: reason.to_string(),
    };
    let s = literal.trim();
    if s.is_empty() {
        return Err(fail("empty literal"));
    }
    let parse_int = |part: &str| -> Result<BigInt> {
        let digits = part.strip_prefix(['+', '-']).unwrap_or(part);
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(fail("expected an integer or p/q"));
        }
        part.parse::<BigInt>()
            .map_err(|_| fail("expected an integer or p/q"))
    };
    match s.split_once('/') {
        None => Ok(BigRational::from_integer(parse_int(s)?)),
        Some((num, den)) => {
            let num = parse_int(num.trim())?;
            let den = parse_int(den.trim())?;
            checked_ratio(num, den).map_err(|_| fail("zero denominator"))
        }
    }
}

/// Renders a rational exactly as `"n"` or `"p/q"`.
pub fn format_rational(q: &BigRational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// True when `q` is reduced with a positive denominator.
pub fn is_canonical(q: &BigRational) -> bool {
    q.denom().is_positive() && q.numer().gcd(q.denom()).is_one()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(n: u64) -> Prime {
        Prime::new(n).unwrap()
    }

    #[test]
    fn factorial_values() {
        assert_eq!(factorial(0), BigInt::from(1));
        assert_eq!(factorial(1), BigInt::from(1));
        assert_eq!(factorial(5), BigInt::from(120));
        for n in 1..60u64 {
            assert_eq!(factorial(n), factorial(n - 1) * BigInt::from(n));
        }
    }

    #[test]
    fn binomial_values() {
        assert_eq!(binomial(4, 2), BigInt::from(6));
        for k in 0..10 {
            assert_eq!(binomial(k, 0), BigInt::from(1));
        }
        assert_eq!(binomial(3, 5), BigInt::zero());
        for n in 2..40u64 {
            for k in 1..n {
                assert_eq!(binomial(n, k), binomial(n - 1, k - 1) + binomial(n - 1, k));
            }
        }
    }

    #[test]
    fn rising_block_values() {
        assert_eq!(rising_block(&BigInt::from(2), 3, 1), BigInt::from(60));
        assert_eq!(rising_block(&BigInt::from(17), 4, 0), BigInt::one());
        // (1+1)^2 by direct product
        let direct: BigInt = (2..=2).map(BigInt::from).product::<BigInt>().pow(2u32);
        assert_eq!(rising_block(&BigInt::from(1), 1, 2), direct);
    }

    #[test]
    fn digit_sum_values() {
        assert_eq!(digit_sum(10, p(2)), 2);
        assert_eq!(digit_sum(0, p(7)), 0);
        assert_eq!(digit_sum(6, p(7)), 6);
        for prime in [3, 5, 7, 11] {
            for n in 0..500 {
                assert_eq!(digit_sum(n, p(prime)) % (prime - 1), n % (prime - 1));
            }
        }
    }

    #[test]
    fn zero_to_the_zero_is_one() {
        assert_eq!(rat_pow(&BigRational::zero(), 0), BigRational::one());
        assert_eq!(int_pow(&BigInt::zero(), 0), BigInt::one());
        assert_eq!(int_pow(&BigInt::zero(), 3), BigInt::zero());
    }

    #[test]
    fn rational_literals() {
        let q = parse_rational("-2/3").unwrap();
        assert_eq!(q, BigRational::new((-2).into(), 3.into()));
        assert_eq!(parse_rational("4/-6").unwrap(), BigRational::new((-2).into(), 3.into()));
        assert_eq!(parse_rational("7").unwrap(), rat_from_int(7));
        assert!(parse_rational("0.5").is_err());
        assert!(parse_rational("1e3").is_err());
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("").is_err());
        assert!(parse_rational("/3").is_err());
        assert!(matches!(
            checked_ratio(1.into(), 0.into()),
            Err(Error::DivisionByZero)
        ));
        assert_eq!(format_rational(&q), "-2/3");
    }
}
