//! Exact partial sums of `sum eps^i i! P(i;x) x^i` and of the general
//! factorial-product telescoping family, each checked against its closed
//! right-hand side, plus the p-adic check of the infinite sums.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::generators::GeneratedTables;
use crate::kernel::{binomial, factorial, format_rational, int_pow, rat_from_int, rat_pow, rising_block};
use crate::padic::{convergence_bound, val_factorial, val_rat, ConvergenceParams, Prime, TermSeries, Valuation};
use crate::poly::{RatPoly, Sign};

/// `S_k(n; x) = sum_{i<n} eps^i i! i^k x^i`, with `0^0 = 1`.
pub fn power_sum(k: u64, eps: Sign, x: &BigRational, n: u64) -> BigRational {
    let mut sum = BigRational::zero();
    // eps^i i! x^i
    let mut running = BigRational::one();
    for i in 0..n {
        if i > 0 {
            running = running * BigRational::from_integer(BigInt::from(i)) * x;
            if eps == Sign::Minus {
                running = -running;
            }
        }
        sum += &running * BigRational::from_integer(int_pow(&BigInt::from(i), k));
    }
    sum
}

/// Solves the power-sum recurrence
/// `S_k = [k=0] + eps x S_0 + eps x sum_{l=1}^{k+1} C(k+1,l) S_l - eps^n n! n^k x^n`
/// for `S_{k+1}`, taking `S_0..S_k` from direct summation.
///
/// The recurrence carries `S_{k+1}` with the factor `eps x`, so `x = 0` is rejected.
pub fn power_sum_via_recurrence(k: u64, eps: Sign, x: &BigRational, n: u64) -> Result<BigRational> {
    if x.is_zero() {
        return Err(Error::InvalidParameters(
            "the power-sum recurrence cannot be solved for S_{k+1} at x = 0".into(),
        ));
    }
    let lower: Vec<BigRational> = (0..=k).map(|j| power_sum(j, eps, x, n)).collect();
    let ex = eps.to_rational() * x;
    let mut acc = lower[k as usize].clone();
    if k == 0 {
        acc -= BigRational::one();
    }
    acc -= &ex * &lower[0];
    for l in 1..=k {
        acc -= &ex * BigRational::from_integer(binomial(k + 1, l)) * &lower[l as usize];
    }
    let tail = eps.pow(n).to_rational()
        * BigRational::from_integer(factorial(n) * int_pow(&BigInt::from(n), k))
        * rat_pow(x, n);
    acc += tail;
    Ok(acc / ex)
}

/// A series `sum eps^i i! P(i;x) x^i` with `P = sum_{j=1}^{k} C_j [i^j x^j + U_j(x)]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeriesSpec {
    eps: Sign,
    x: BigRational,
    /// `C_1..C_k`.
    coeffs: Vec<BigRational>,
}

impl SeriesSpec {
    /// The single-power series `i^k x^k + U_k(x)`.
    pub fn single(k: usize, eps: Sign, x: BigRational) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidParameters("series degree k must be at least 1".into()));
        }
        let mut coeffs = vec![BigRational::zero(); k];
        coeffs[k - 1] = BigRational::one();
        Ok(SeriesSpec { eps, x, coeffs })
    }

    pub fn with_coeffs(coeffs: Vec<BigRational>, eps: Sign, x: BigRational) -> Result<Self> {
        match coeffs.last() {
            Some(c) if !c.is_zero() => Ok(SeriesSpec { eps, x, coeffs }),
            _ => Err(Error::InvalidParameters(
                "the highest coefficient C_k must be nonzero".into(),
            )),
        }
    }

    pub fn eps(&self) -> Sign {
        self.eps
    }

    pub fn x(&self) -> &BigRational {
        &self.x
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn with_x(&self, x: BigRational) -> Self {
        SeriesSpec { x, ..self.clone() }
    }

    fn check_tables(&self, tables: &GeneratedTables) -> Result<()> {
        if tables.eps() != self.eps {
            return Err(Error::InvalidParameters(format!(
                "tables built for eps={} but series has eps={}",
                tables.eps(),
                self.eps
            )));
        }
        tables.require(self.degree())
    }

    fn weighted<'a>(&'a self) -> impl Iterator<Item = (usize, &'a BigRational)> + 'a {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (i + 1, c))
    }

    /// `sum C_j U_j(x)`, the part of `P` independent of `i`.
    pub fn offset(&self, tables: &GeneratedTables) -> BigRational {
        self.weighted()
            .map(|(j, c)| c * tables.uv.u(j).eval(&self.x))
            .sum()
    }

    /// `Q = sum C_j V_j(x)`, the claimed infinite sum.
    pub fn claimed_sum(&self, tables: &GeneratedTables) -> BigRational {
        self.weighted()
            .map(|(j, c)| c * tables.uv.v(j).eval(&self.x))
            .sum()
    }

    /// `sum C_j A_{j-1}(n; x)`.
    pub fn remainder_poly_value(&self, n: u64, tables: &GeneratedTables) -> BigRational {
        let n = rat_from_int(n as i64);
        self.weighted()
            .map(|(j, c)| c * tables.a.entries()[j - 1].eval(&n, &self.x))
            .sum()
    }

    /// `eps^{n-1} n! x^n sum C_j A_{j-1}(n; x)`.
    pub fn boundary(&self, n: u64, tables: &GeneratedTables) -> BigRational {
        let sign = if n == 0 { self.eps } else { self.eps.pow(n - 1) };
        sign.to_rational()
            * BigRational::from_integer(factorial(n))
            * rat_pow(&self.x, n)
            * self.remainder_poly_value(n, tables)
    }

    /// `P(i; x)`.
    pub fn poly_value(&self, i: u64, offset: &BigRational) -> BigRational {
        let ix = rat_from_int(i as i64) * &self.x;
        let mut acc = offset.clone();
        for (j, c) in self.weighted() {
            acc += c * rat_pow(&ix, j as u64);
        }
        acc
    }

    pub fn terms<'a>(&'a self, tables: &'a GeneratedTables) -> SeriesTerms<'a> {
        SeriesTerms { spec: self, tables }
    }

    fn describe(&self) -> String {
        let coeffs: Vec<String> = self.coeffs.iter().map(format_rational).collect();
        format!(
            "eps={}, x={}, C=[{}]",
            self.eps,
            format_rational(&self.x),
            coeffs.join(",")
        )
    }
}

/// General term `eps^i i! P(i;x) x^i` of a [`SeriesSpec`], indexed from `i = 1`.
pub struct SeriesTerms<'a> {
    spec: &'a SeriesSpec,
    tables: &'a GeneratedTables,
}

impl TermSeries for SeriesTerms<'_> {
    fn term(&self, n: u64) -> BigRational {
        let offset = self.spec.offset(self.tables);
        self.spec.eps.pow(n).to_rational()
            * BigRational::from_integer(factorial(n))
            * self.spec.poly_value(n, &offset)
            * rat_pow(&self.spec.x, n)
    }
}

/// A partial sum split as `value = rhs_constant + boundary`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartialSumResult {
    pub n_terms: u64,
    pub value: BigRational,
    pub boundary: BigRational,
    pub rhs_constant: BigRational,
}

impl PartialSumResult {
    pub fn residual(&self) -> BigRational {
        &self.value - &self.rhs_constant - &self.boundary
    }

    pub fn holds(&self) -> bool {
        self.residual().is_zero()
    }

    fn into_checked(self, check: &str, params: String) -> Result<Self> {
        if self.holds() {
            Ok(self)
        } else {
            Err(Error::NonzeroResidual {
                check: check.into(),
                params: format!(
                    "{params}, n={}, value={}, rhs={}, boundary={}",
                    self.n_terms,
                    format_rational(&self.value),
                    format_rational(&self.rhs_constant),
                    format_rational(&self.boundary)
                ),
                residual: format_rational(&self.residual()),
            })
        }
    }
}

/// Partial sums for `n = 1..=n_max` computed incrementally, each split into
/// constant and boundary parts. Residuals are not checked here.
pub fn partial_sums(spec: &SeriesSpec, n_max: u64, tables: &GeneratedTables) -> Result<Vec<PartialSumResult>> {
    spec.check_tables(tables)?;
    let offset = spec.offset(tables);
    let rhs = spec.claimed_sum(tables);
    let mut out = Vec::with_capacity(n_max as usize);
    let mut running = BigRational::one();
    let mut value = BigRational::zero();
    for i in 0..n_max {
        if i > 0 {
            running = running * rat_from_int(i as i64) * &spec.x;
            if spec.eps == Sign::Minus {
                running = -running;
            }
        }
        value += &running * spec.poly_value(i, &offset);
        out.push(PartialSumResult {
            n_terms: i + 1,
            value: value.clone(),
            boundary: spec.boundary(i + 1, tables),
            rhs_constant: rhs.clone(),
        });
    }
    Ok(out)
}

/// Checks `sum_{i<n} eps^i i! P(i;x) x^i = Q(x) + eps^{n-1} n! x^n sum C_j A_{j-1}(n;x)`.
pub fn general_sum_check(spec: &SeriesSpec, n: u64, tables: &GeneratedTables) -> Result<PartialSumResult> {
    if n == 0 {
        return Err(Error::InvalidParameters("n must be at least 1".into()));
    }
    let last = partial_sums(spec, n, tables)?
        .pop()
        .expect("n >= 1 gives one partial sum");
    last.into_checked("general-sum", spec.describe())
}

/// Checks `sum_{i<n} eps^i i! [i^k x^k + U_k(x)] x^i = V_k(x) + eps^{n-1} n! A_{k-1}(n;x) x^n`.
pub fn finite_identity_check(
    k: usize,
    eps: Sign,
    x: &BigRational,
    n: u64,
    tables: &GeneratedTables,
) -> Result<PartialSumResult> {
    let spec = SeriesSpec::single(k, eps, x.clone())?;
    general_sum_check(&spec, n, tables).map_err(|e| match e {
        Error::NonzeroResidual { params, residual, .. } => Error::NonzeroResidual {
            check: "finite-identity".into(),
            params: format!("k={k}, {params}"),
            residual,
        },
        other => other,
    })
}

/// Checks every prefix `n = 1..=n_max` of one series.
pub fn finite_identity_sweep(spec: &SeriesSpec, n_max: u64, tables: &GeneratedTables) -> Result<Vec<PartialSumResult>> {
    partial_sums(spec, n_max, tables)?
        .into_iter()
        .map(|r| r.into_checked("finite-identity", spec.describe()))
        .collect()
}

/// One factor `((mu n + nu)!)^lambda`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct FactorialFactor {
    pub mu: u32,
    pub nu: i64,
    pub lambda: u32,
}

impl FactorialFactor {
    fn base(&self, n: u64) -> BigInt {
        BigInt::from(self.mu) * BigInt::from(n) + BigInt::from(self.nu)
    }
}

/// Parameters of
/// `sum_{n>=1} eps^n prod((mu_i n+nu_i)!)^lambda_i [prod R_i(n) A(n+1) x^alpha - eps A(n)] x^{alpha n + beta}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TelescopeSpec {
    factors: Vec<FactorialFactor>,
    alpha: u32,
    beta: u32,
    eps: Sign,
    x: BigRational,
    aux: RatPoly,
}

impl TelescopeSpec {
    pub fn new(
        factors: Vec<FactorialFactor>,
        alpha: u32,
        beta: u32,
        eps: Sign,
        x: BigRational,
        aux: RatPoly,
    ) -> Result<Self> {
        let invalid = |m: &str| Err(Error::InvalidParameters(m.into()));
        if factors.is_empty() {
            return invalid("at least one factorial factor is required");
        }
        if factors.iter().any(|f| f.mu == 0) {
            return invalid("every mu_i must be at least 1");
        }
        if factors.iter().any(|f| i64::from(f.mu) + f.nu < 1) {
            return invalid("every mu_i + nu_i must be at least 1");
        }
        if factors.iter().all(|f| f.lambda == 0) {
            return invalid("at least one lambda_i must be at least 1");
        }
        if alpha == 0 {
            return invalid("alpha must be at least 1");
        }
        if !aux.has_integer_coeffs() {
            return invalid("the auxiliary polynomial must have integer coefficients");
        }
        Ok(TelescopeSpec {
            factors,
            alpha,
            beta,
            eps,
            x,
            aux,
        })
    }

    /// `sum (n!)^k {(n+1)^k [(n+1)^l + w]^m x - (n^l + w)^m} x^n = -(1+w)^m x`,
    /// the single-factorial family with `A(n) = (n^l + w)^m`.
    pub fn shifted_power_family(k: u32, l: usize, w: i64, m: u32, x: BigRational) -> Result<Self> {
        let base = &RatPoly::monomial(BigRational::one(), l) + &RatPoly::constant(rat_from_int(w));
        Self::new(
            vec![FactorialFactor { mu: 1, nu: 0, lambda: k }],
            1,
            0,
            Sign::Plus,
            x,
            base.pow(m),
        )
    }

    pub fn factors(&self) -> &[FactorialFactor] {
        &self.factors
    }

    pub fn eps(&self) -> Sign {
        self.eps
    }

    pub fn x(&self) -> &BigRational {
        &self.x
    }

    pub fn aux(&self) -> &RatPoly {
        &self.aux
    }

    pub fn alpha(&self) -> u32 {
        self.alpha
    }

    pub fn beta(&self) -> u32 {
        self.beta
    }

    pub fn mu_lambda_sum(&self) -> u64 {
        self.factors
            .iter()
            .map(|f| u64::from(f.mu) * u64::from(f.lambda))
            .sum()
    }

    pub fn convergence_params(&self) -> ConvergenceParams {
        ConvergenceParams::new(self.alpha, self.mu_lambda_sum()).expect("alpha validated at construction")
    }

    /// `prod ((mu_i n + nu_i)!)^lambda_i` from direct factorials.
    pub fn factorial_product(&self, n: u64) -> BigInt {
        self.factors
            .iter()
            .map(|f| {
                let base = u64::try_from(f.base(n)).expect("mu n + nu >= 1 for n >= 1");
                num_traits::pow(factorial(base), f.lambda as usize)
            })
            .product()
    }

    /// `prod_i [(mu_i n + nu_i + 1) ... (mu_i n + nu_i + mu_i)]^lambda_i`.
    pub fn rising_product(&self, n: u64) -> BigInt {
        self.factors
            .iter()
            .map(|f| rising_block(&f.base(n), f.mu, f.lambda))
            .product()
    }

    /// The same product as a polynomial in `n`.
    pub fn rising_poly(&self) -> RatPoly {
        let mut acc = RatPoly::one();
        for f in &self.factors {
            for j in 1..=f.mu {
                let lin = RatPoly::linear(rat_from_int(i64::from(f.mu)), rat_from_int(f.nu + i64::from(j)));
                acc = &acc * &lin.pow(f.lambda);
            }
        }
        acc
    }

    /// `eps^{n-1} prod((mu_i n+nu_i)!)^lambda_i A(n) x^{alpha n + beta}`.
    pub fn boundary(&self, n: u64) -> BigRational {
        self.eps.pow(n + 1).to_rational()
            * BigRational::from_integer(self.factorial_product(n))
            * self.aux.eval_int(&BigInt::from(n))
            * rat_pow(&self.x, u64::from(self.alpha) * n + u64::from(self.beta))
    }

    /// `-prod((mu_i+nu_i)!)^lambda_i A(1) x^{alpha + beta}`.
    pub fn rhs_constant(&self) -> BigRational {
        -BigRational::from_integer(self.factorial_product(1))
            * self.aux.eval_int(&BigInt::one())
            * rat_pow(&self.x, u64::from(self.alpha + self.beta))
    }

    fn bracket(&self, n: u64, rising: &BigInt) -> BigRational {
        let next = self.aux.eval_int(&BigInt::from(n + 1));
        let here = self.aux.eval_int(&BigInt::from(n));
        BigRational::from_integer(rising.clone()) * next * rat_pow(&self.x, u64::from(self.alpha))
            - self.eps.to_rational() * here
    }

    fn describe(&self) -> String {
        let factors: Vec<String> = self
            .factors
            .iter()
            .map(|f| format!("(mu={},nu={},lambda={})", f.mu, f.nu, f.lambda))
            .collect();
        format!(
            "factors=[{}], alpha={}, beta={}, eps={}, x={}, A={}",
            factors.join(","),
            self.alpha,
            self.beta,
            self.eps,
            format_rational(&self.x),
            self.aux.render("n")
        )
    }
}

impl TermSeries for TelescopeSpec {
    fn term(&self, n: u64) -> BigRational {
        self.eps.pow(n).to_rational()
            * BigRational::from_integer(self.factorial_product(n))
            * self.bracket(n, &self.rising_product(n))
            * rat_pow(&self.x, u64::from(self.alpha) * n + u64::from(self.beta))
    }
}

/// Sums the first `N - 1` terms with a running factorial product advanced by
/// rising blocks, and compares with `rhs_constant + G(N)` where `G` uses
/// direct factorials.
pub fn telescope_check(spec: &TelescopeSpec, n_terms: u64) -> Result<PartialSumResult> {
    if n_terms == 0 {
        return Err(Error::InvalidParameters("N must be at least 1".into()));
    }
    let mut product = spec.factorial_product(1);
    let mut xpow = rat_pow(&spec.x, u64::from(spec.alpha + spec.beta));
    let step = rat_pow(&spec.x, u64::from(spec.alpha));
    let mut value = BigRational::zero();
    for n in 1..n_terms {
        let rising = spec.rising_product(n);
        let term = spec.eps.pow(n).to_rational()
            * BigRational::from_integer(product.clone())
            * spec.bracket(n, &rising)
            * &xpow;
        value += term;
        product *= rising;
        xpow *= &step;
    }
    PartialSumResult {
        n_terms,
        value,
        boundary: spec.boundary(n_terms),
        rhs_constant: spec.rhs_constant(),
    }
    .into_checked("telescope", spec.describe())
}

/// `P_k(n; t) = prod R_i(n) A(n+1) t^alpha - eps A(n)`, after checking that
/// `t` lies in the convergence domain for every supplied prime.
pub fn construct_pk(spec: &TelescopeSpec, t: &BigRational, primes: &[Prime]) -> Result<RatPoly> {
    let params = spec.convergence_params();
    for &p in primes {
        if !convergence_bound(params, p).accepts(t) {
            return Err(Error::OutsideDomain {
                value: format_rational(t),
                prime: p.get(),
            });
        }
    }
    let shifted = spec.aux.shift_one();
    let lead = (&spec.rising_poly() * &shifted).scale(&rat_pow(t, u64::from(spec.alpha)));
    Ok(&lead - &spec.aux.scale(&spec.eps.to_rational()))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PadicSample {
    pub n: u64,
    #[serde(serialize_with = "ser_rational")]
    pub partial: BigRational,
    pub error_valuation: Valuation,
    pub bound: Valuation,
}

fn ser_rational<S: serde::Serializer>(q: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&format_rational(q))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum PadicOutcome {
    Pass,
    /// The error valuation fell below the remainder bound at `n`.
    BoundViolated { n: u64 },
    /// The bound held but the error valuations did not grow across the window.
    NoGrowth,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PadicVerdict {
    pub prime: Prime,
    #[serde(serialize_with = "ser_rational")]
    pub claimed: BigRational,
    pub samples: Vec<PadicSample>,
    pub outcome: PadicOutcome,
}

impl PadicVerdict {
    pub fn passed(&self) -> bool {
        self.outcome == PadicOutcome::Pass
    }

    /// CSV with columns `N,partial,valuation`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("N,partial,valuation\n");
        for s in &self.samples {
            out.push_str(&format!("{},{},{}\n", s.n, format_rational(&s.partial), s.error_valuation));
        }
        out
    }
}

/// For `N = 1..=n_max`, compares `v_p(partial(N) - claimed)` with the exact
/// remainder bound `v_p(N!) + N v_p(x) + v_p(sum C_j A_{j-1}(N;x))`.
pub fn padic_sum_verify(
    spec: &SeriesSpec,
    claimed: &BigRational,
    p: Prime,
    n_max: u64,
    tables: &GeneratedTables,
) -> Result<PadicVerdict> {
    if !convergence_bound(ConvergenceParams::new(1, 1)?, p).accepts(spec.x()) {
        return Err(Error::OutsideDomain {
            value: format_rational(spec.x()),
            prime: p.get(),
        });
    }
    spec.check_tables(tables)?;
    let offset = spec.offset(tables);
    let vx = val_rat(spec.x(), p);
    let mut samples = Vec::with_capacity(n_max as usize);
    let mut violation = None;
    let mut running = BigRational::one();
    let mut value = BigRational::zero();
    for i in 0..n_max {
        if i > 0 {
            running = running * rat_from_int(i as i64) * &spec.x;
            if spec.eps == Sign::Minus {
                running = -running;
            }
        }
        value += &running * spec.poly_value(i, &offset);
        let n = i + 1;
        let error_valuation = val_rat(&(&value - claimed), p);
        let x_part = match vx {
            Valuation::Finite(v) => Valuation::Finite(v * n as i64),
            Valuation::Infinite => Valuation::Infinite,
        };
        let bound = val_factorial(n, p) + x_part + val_rat(&spec.remainder_poly_value(n, tables), p);
        if error_valuation < bound && violation.is_none() {
            violation = Some(n);
        }
        samples.push(PadicSample {
            n,
            partial: value.clone(),
            error_valuation,
            bound,
        });
    }
    let outcome = match violation {
        Some(n) => PadicOutcome::BoundViolated { n },
        None if grows(&samples) => PadicOutcome::Pass,
        None => PadicOutcome::NoGrowth,
    };
    Ok(PadicVerdict {
        prime: p,
        claimed: claimed.clone(),
        samples,
        outcome,
    })
}

fn grows(samples: &[PadicSample]) -> bool {
    if samples.iter().all(|s| s.error_valuation.is_infinite()) {
        return true;
    }
    if samples.len() < 2 {
        return false;
    }
    let (head, tail) = samples.split_at(samples.len() / 2);
    let min = |s: &[PadicSample]| s.iter().map(|x| x.error_valuation).min();
    min(tail) > min(head)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::parse_rational;

    fn r(n: i64) -> BigRational {
        rat_from_int(n)
    }

    fn tables(k: usize, eps: Sign) -> GeneratedTables {
        GeneratedTables::build(k, eps).unwrap()
    }

    #[test]
    fn direct_power_sums() {
        assert_eq!(power_sum(1, Sign::Plus, &r(1), 4), r(23));
        assert_eq!(power_sum(1, Sign::Plus, &r(1), 4), rat_from_int(24 - 1));
        for eps in Sign::BOTH {
            assert_eq!(power_sum(0, eps, &parse_rational("-2/3").unwrap(), 1), r(1));
        }
        // 0 + 1*1 + 2*4
        assert_eq!(power_sum(2, Sign::Plus, &r(1), 3), r(9));
        assert_eq!(power_sum(3, Sign::Minus, &r(2), 0), r(0));
    }

    #[test]
    fn recurrence_power_sums() {
        assert_eq!(power_sum_via_recurrence(0, Sign::Plus, &r(1), 4).unwrap(), r(23));
        assert_eq!(power_sum_via_recurrence(1, Sign::Plus, &r(1), 3).unwrap(), r(9));
        for k in 0..4 {
            assert_eq!(power_sum_via_recurrence(k, Sign::Minus, &r(3), 0).unwrap(), r(0));
        }
        assert!(power_sum_via_recurrence(1, Sign::Plus, &r(0), 3).is_err());
    }

    #[test]
    fn finite_identity_examples() {
        let t = tables(3, Sign::Plus);
        for n in 1..10 {
            let res = finite_identity_check(1, Sign::Plus, &r(1), n, &t).unwrap();
            assert_eq!(res.rhs_constant, r(-1));
            assert_eq!(res.value, BigRational::from_integer(factorial(n)) - r(1));
        }
        let t = tables(3, Sign::Minus);
        let res = finite_identity_check(1, Sign::Minus, &r(1), 2, &t).unwrap();
        assert_eq!(res.value, r(-1));
        assert_eq!(res.rhs_constant, r(1));
        assert_eq!(res.boundary, r(-2));

        let t = tables(3, Sign::Plus);
        let res = finite_identity_check(2, Sign::Plus, &r(1), 5, &t).unwrap();
        // sum_{i<5} i! (i^2 + 1) by enumeration: 1 + 2 + 10 + 60 + 408
        assert_eq!(res.value, r(481));
        assert_eq!(res.boundary, r(120 * 4));
    }

    #[test]
    fn finite_identity_reports_short_tables() {
        let t = tables(2, Sign::Plus);
        assert!(matches!(
            finite_identity_check(5, Sign::Plus, &r(1), 3, &t),
            Err(Error::TableTooShort { .. })
        ));
        assert!(finite_identity_check(2, Sign::Minus, &r(1), 3, &t).is_err());
    }

    #[test]
    fn general_sum_examples() {
        let t = tables(3, Sign::Plus);
        let single = SeriesSpec::with_coeffs(vec![r(1)], Sign::Plus, r(1)).unwrap();
        assert_eq!(
            general_sum_check(&single, 6, &t).unwrap(),
            finite_identity_check(1, Sign::Plus, &r(1), 6, &t).unwrap()
        );

        let sq = SeriesSpec::with_coeffs(vec![r(0), r(1)], Sign::Plus, r(1)).unwrap();
        let res = general_sum_check(&sq, 4, &t).unwrap();
        assert_eq!(res.value, r(73));
        assert_eq!(res.rhs_constant, r(1));
        assert_eq!(res.boundary, r(24 * 3));

        let half = BigRational::new(1.into(), 2.into());
        let mix = SeriesSpec::with_coeffs(vec![half.clone(), half.clone()], Sign::Plus, r(1)).unwrap();
        let res = general_sum_check(&mix, 7, &t).unwrap();
        let a = finite_identity_check(1, Sign::Plus, &r(1), 7, &t).unwrap();
        let b = finite_identity_check(2, Sign::Plus, &r(1), 7, &t).unwrap();
        assert_eq!(res.value, (a.value + b.value) * half);

        assert!(SeriesSpec::with_coeffs(vec![r(1), r(0)], Sign::Plus, r(1)).is_err());
        assert!(SeriesSpec::single(0, Sign::Plus, r(1)).is_err());
    }

    #[test]
    fn corrupted_tables_leave_a_residual() {
        let good = tables(3, Sign::Plus);
        let mut u = good.uv.u_all().to_vec();
        u[1] = &u[1] + &RatPoly::one();
        let bad = GeneratedTables {
            a: good.a.clone(),
            uv: crate::generators::UVPolyTable::from_parts(Sign::Plus, u, good.uv.v_all().to_vec()),
        };
        let err = finite_identity_check(2, Sign::Plus, &r(1), 4, &bad).unwrap_err();
        assert!(matches!(err, Error::NonzeroResidual { .. }));
    }

    fn simple() -> TelescopeSpec {
        TelescopeSpec::new(
            vec![FactorialFactor { mu: 1, nu: 0, lambda: 1 }],
            1,
            0,
            Sign::Plus,
            r(1),
            RatPoly::one(),
        )
        .unwrap()
    }

    #[test]
    fn telescope_examples() {
        let res = telescope_check(&simple(), 5).unwrap();
        // 1 + 4 + 18 + 96
        assert_eq!(res.value, r(119));
        assert_eq!(res.boundary, r(120));
        assert_eq!(res.rhs_constant, r(-1));

        let family = TelescopeSpec::shifted_power_family(1, 1, 0, 1, r(1)).unwrap();
        let res = telescope_check(&family, 4).unwrap();
        // 3 + 14 + 78
        assert_eq!(res.value, r(95));
        assert_eq!(res.boundary, r(96));

        let res = telescope_check(&family, 1).unwrap();
        assert_eq!(res.value, r(0));
        assert_eq!(res.boundary, -res.rhs_constant.clone());
    }

    #[test]
    fn telescope_validation() {
        let f = |mu, nu, lambda| FactorialFactor { mu, nu, lambda };
        let ok = |factors: Vec<FactorialFactor>, alpha, aux: RatPoly| {
            TelescopeSpec::new(factors, alpha, 0, Sign::Plus, r(1), aux)
        };
        assert!(ok(vec![], 1, RatPoly::one()).is_err());
        assert!(ok(vec![f(0, 1, 1)], 1, RatPoly::one()).is_err());
        assert!(ok(vec![f(1, -1, 1)], 1, RatPoly::one()).is_err());
        assert!(ok(vec![f(1, 0, 0)], 1, RatPoly::one()).is_err());
        assert!(ok(vec![f(1, 0, 1)], 0, RatPoly::one()).is_err());
        assert!(ok(vec![f(1, 0, 1)], 1, RatPoly::constant(BigRational::new(1.into(), 2.into()))).is_err());
        // zero-lambda factors are allowed next to a nonzero one
        assert!(ok(vec![f(2, -1, 0), f(1, 0, 1)], 1, RatPoly::one()).is_ok());
    }

    #[test]
    fn constructed_polynomials() {
        let p = construct_pk(&simple(), &r(1), &[Prime::new(2).unwrap()]).unwrap();
        assert_eq!(p, RatPoly::var());

        let eps_minus = TelescopeSpec::new(
            vec![FactorialFactor { mu: 1, nu: 0, lambda: 1 }],
            1,
            0,
            Sign::Minus,
            r(1),
            RatPoly::one(),
        )
        .unwrap();
        assert_eq!(construct_pk(&eps_minus, &r(0), &[]).unwrap(), RatPoly::one());
        assert_eq!(construct_pk(&simple(), &r(0), &[]).unwrap(), RatPoly::from_ints(&[-1]));

        let two_factors = TelescopeSpec::new(
            vec![FactorialFactor { mu: 1, nu: 0, lambda: 1 }, FactorialFactor { mu: 2, nu: 0, lambda: 1 }],
            1,
            0,
            Sign::Plus,
            r(1),
            RatPoly::from_ints(&[1, 1]),
        )
        .unwrap();
        assert_eq!(construct_pk(&two_factors, &r(3), &[]).unwrap().degree(), Some(4));

        let err = construct_pk(&simple(), &BigRational::new(1.into(), 2.into()), &[Prime::new(3).unwrap(), Prime::new(2).unwrap()]);
        assert!(matches!(err, Err(Error::OutsideDomain { prime: 2, .. })));
    }

    #[test]
    fn constructed_polynomial_matches_the_bracket() {
        let spec = TelescopeSpec::new(
            vec![FactorialFactor { mu: 2, nu: -1, lambda: 1 }, FactorialFactor { mu: 1, nu: 1, lambda: 2 }],
            2,
            1,
            Sign::Minus,
            r(-2),
            RatPoly::from_ints(&[3, 0, -1]),
        )
        .unwrap();
        let pk = construct_pk(&spec, spec.x(), &[]).unwrap();
        for n in 1..8u64 {
            let direct = spec.bracket(n, &spec.rising_product(n));
            assert_eq!(pk.eval_int(&BigInt::from(n)), direct);
            assert_eq!(spec.rising_poly().eval_int(&BigInt::from(n)), BigRational::from_integer(spec.rising_product(n)));
        }
    }

    #[test]
    fn padic_verdicts() {
        let t = tables(3, Sign::Plus);
        let spec = SeriesSpec::single(1, Sign::Plus, r(1)).unwrap();
        let two = Prime::new(2).unwrap();
        let v = padic_sum_verify(&spec, &r(-1), two, 60, &t).unwrap();
        assert!(v.passed());
        for s in &v.samples {
            // error = N!, exactly
            assert_eq!(s.error_valuation, val_factorial(s.n, two));
        }

        let wrong = padic_sum_verify(&spec, &r(0), two, 60, &t).unwrap();
        // N! - 1 is odd from N = 2 on
        assert_eq!(wrong.outcome, PadicOutcome::BoundViolated { n: 2 });

        let sq = SeriesSpec::single(2, Sign::Plus, r(1)).unwrap();
        for p in [3, 5] {
            let v = padic_sum_verify(&sq, &r(1), Prime::new(p).unwrap(), 80, &t).unwrap();
            assert!(v.passed());
        }

        let csv = v.to_csv();
        assert!(csv.starts_with("N,partial,valuation\n1,0,0\n"));

        let outside = spec.with_x(BigRational::new(1.into(), 2.into()));
        assert!(matches!(
            padic_sum_verify(&outside, &r(0), two, 10, &t),
            Err(Error::OutsideDomain { .. })
        ));
    }
}
