//! Verification grids. Every cell is a pure computation; cells fan out via
//! [`map_cells`] and results come back in input order.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::error::Result;
use crate::exec::{map_cells, Execution};
use crate::generators::{aux_poly, bell, gen_a, uv_by_recurrence, uv_from_a, uv_recurrence, GeneratedTables};
use crate::kernel::{factorial, format_rational, parse_rational, rat_from_int};
use crate::padic::{val_factorial, val_int, Prime};
use crate::poly::{RatPoly, Sign};
use crate::report::{CheckReport, SuiteReport, Verdict};
use crate::series::{ode_residual_first, ode_residual_second};
use crate::summation::{
    finite_identity_sweep, padic_sum_verify, power_sum, power_sum_via_recurrence, telescope_check,
    FactorialFactor, PadicOutcome, SeriesSpec, TelescopeSpec,
};

fn lit(q: &BigRational) -> String {
    format_rational(q)
}

fn check(check: &str, params: serde_json::Value, residual: String, boundary: String, ok: bool, detail: Option<String>) -> CheckReport {
    CheckReport {
        check: check.into(),
        params,
        residual,
        boundary,
        verdict: Verdict::from_bool(ok),
        detail,
    }
}

/// Tables for both signs covering `k <= kmax`.
pub fn tables_for(kmax: usize, signs: &[Sign]) -> Result<Vec<GeneratedTables>> {
    signs
        .iter()
        .map(|&eps| GeneratedTables::build(kmax.saturating_sub(1), eps))
        .collect()
}

fn table_for(tables: &[GeneratedTables], eps: Sign) -> &GeneratedTables {
    tables.iter().find(|t| t.eps() == eps).expect("tables built for every sign")
}

#[derive(Clone, Debug)]
pub struct FiniteGrid {
    pub kmax: usize,
    pub signs: Vec<Sign>,
    pub xs: Vec<BigRational>,
    pub n_max: u64,
    /// Largest `k` for the two-route power-sum comparison.
    pub power_kmax: u64,
}

impl Default for FiniteGrid {
    fn default() -> Self {
        let xs = ["-3", "-2", "-1", "1", "2", "3", "1/2", "-2/3"]
            .iter()
            .map(|s| parse_rational(s).expect("literal"))
            .collect();
        FiniteGrid {
            kmax: 15,
            signs: Sign::BOTH.to_vec(),
            xs,
            n_max: 25,
            power_kmax: 10,
        }
    }
}

/// Zero-residual sweep of the finite identity over `(k, eps, x)` cells, each
/// covering `n = 1..=n_max`, plus the two-route power-sum comparison.
pub fn finite_suite(grid: &FiniteGrid, mode: Execution) -> Result<SuiteReport> {
    let tables = tables_for(grid.kmax, &grid.signs)?;
    let mut cells = Vec::new();
    for k in 1..=grid.kmax {
        for &eps in &grid.signs {
            for x in &grid.xs {
                cells.push((k, eps, x.clone()));
            }
        }
    }
    let mut checks = map_cells(mode, &cells, |(k, eps, x)| {
        let params = json!({"k": k, "eps": eps.value(), "x": lit(x), "n": format!("1..={}", grid.n_max)});
        let spec = SeriesSpec::single(*k, *eps, x.clone()).expect("k >= 1");
        match finite_identity_sweep(&spec, grid.n_max, table_for(&tables, *eps)) {
            Ok(results) => {
                let boundary = results.last().map(|r| lit(&r.boundary)).unwrap_or_default();
                check("finite-identity", params, "0".into(), boundary, true, None)
            }
            Err(e) => check("finite-identity", params, "nonzero".into(), String::new(), false, Some(e.to_string())),
        }
    });

    let mut power_cells = Vec::new();
    for k in 0..grid.power_kmax {
        for &eps in &grid.signs {
            for x in grid.xs.iter().filter(|x| !x.is_zero()) {
                power_cells.push((k, eps, x.clone()));
            }
        }
    }
    checks.extend(map_cells(mode, &power_cells, |(k, eps, x)| {
        let params = json!({"k": k + 1, "eps": eps.value(), "x": lit(x), "n": format!("0..={}", grid.n_max)});
        let mismatch = (0..=grid.n_max).find(|&n| {
            let direct = power_sum(k + 1, *eps, x, n);
            power_sum_via_recurrence(*k, *eps, x, n).map_or(true, |r| r != direct)
        });
        let detail = mismatch.map(|n| format!("routes disagree at n={n}"));
        check("power-sum-routes", params, if mismatch.is_none() { "0" } else { "nonzero" }.into(), String::new(), mismatch.is_none(), detail)
    }));
    Ok(SuiteReport::new("finite", checks))
}

/// Draws a valid telescoping parameter set: `I <= 2`, `mu <= 3`, `|nu| <= 2`,
/// `lambda <= 2`, `alpha <= 2`, `beta <= 1`, `deg A <= 2`, `|x| <= 2`.
pub fn random_telescope_spec(rng: &mut impl Rng) -> TelescopeSpec {
    loop {
        let count = rng.gen_range(1..=2);
        let factors: Vec<FactorialFactor> = (0..count)
            .map(|_| {
                let mu = rng.gen_range(1..=3u32);
                let nu = rng.gen_range((1 - i64::from(mu)).max(-2)..=2);
                FactorialFactor {
                    mu,
                    nu,
                    lambda: rng.gen_range(0..=2),
                }
            })
            .collect();
        let degree = rng.gen_range(0..=2usize);
        let aux = RatPoly::from_ints(&(0..=degree).map(|_| rng.gen_range(-3..=3i64)).collect::<Vec<_>>());
        let den = rng.gen_range(1..=2i64);
        let num = rng.gen_range(-2 * den..=2 * den);
        let x = BigRational::new(num.into(), den.into());
        let eps = if rng.gen_bool(0.5) { Sign::Plus } else { Sign::Minus };
        let alpha = rng.gen_range(1..=2);
        let beta = rng.gen_range(0..=1);
        if let Ok(spec) = TelescopeSpec::new(factors, alpha, beta, eps, x, aux) {
            return spec;
        }
    }
}

#[derive(Clone, Debug)]
pub struct TelescopeGrid {
    pub random_specs: usize,
    pub seed: u64,
    pub n_max: u64,
}

impl Default for TelescopeGrid {
    fn default() -> Self {
        TelescopeGrid {
            random_specs: 20,
            seed: 2024,
            n_max: 15,
        }
    }
}

/// The simplest family `sum n! n = -1`, the shifted-power instance with
/// `k = l = m = 1`, `w = 0`, and seeded random parameter sets; every
/// `N = 1..=n_max` is checked for each.
pub fn telescope_suite(grid: &TelescopeGrid, mode: Execution) -> Result<SuiteReport> {
    let mut specs = vec![
        (
            "sum n! n".to_string(),
            TelescopeSpec::new(
                vec![FactorialFactor { mu: 1, nu: 0, lambda: 1 }],
                1,
                0,
                Sign::Plus,
                BigRational::one(),
                RatPoly::one(),
            )?,
        ),
        (
            "shifted power k=l=m=1 w=0".to_string(),
            TelescopeSpec::shifted_power_family(1, 1, 0, 1, BigRational::one())?,
        ),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(grid.seed);
    for i in 0..grid.random_specs {
        specs.push((format!("random #{i}"), random_telescope_spec(&mut rng)));
    }
    let checks = map_cells(mode, &specs, |(name, spec)| {
        let params = telescope_params(name, spec, grid.n_max);
        let mut last = None;
        for n in 1..=grid.n_max {
            match telescope_check(spec, n) {
                Ok(r) => last = Some(r),
                Err(e) => {
                    return check("telescope", params, "nonzero".into(), String::new(), false, Some(e.to_string()));
                }
            }
        }
        let boundary = last.map(|r| lit(&r.boundary)).unwrap_or_default();
        check("telescope", params, "0".into(), boundary, true, None)
    });
    Ok(SuiteReport::new("telescope", checks))
}

fn telescope_params(name: &str, spec: &TelescopeSpec, n_max: u64) -> serde_json::Value {
    json!({
        "name": name,
        "factors": spec.factors(),
        "alpha": spec.alpha(),
        "beta": spec.beta(),
        "eps": spec.eps().value(),
        "x": lit(spec.x()),
        "A": spec.aux().render("n"),
        "N": format!("1..={n_max}"),
    })
}

#[derive(Clone, Debug)]
pub struct PadicGrid {
    pub kmax: usize,
    pub signs: Vec<Sign>,
    pub xs: Vec<BigRational>,
    pub primes: Vec<Prime>,
    pub n_max: u64,
}

impl Default for PadicGrid {
    fn default() -> Self {
        PadicGrid {
            kmax: 8,
            signs: Sign::BOTH.to_vec(),
            xs: [1, -1, 2].iter().map(|&x| rat_from_int(x)).collect(),
            primes: [2, 3, 5, 7, 11].iter().map(|&p| Prime::new(p).expect("prime")).collect(),
            n_max: 200,
        }
    }
}

/// For every `(k, eps, x, p)`: the claim `V_k(x)` must pass the remainder
/// bound at every `N`, and `V_k(x) + 1` must fail it.
pub fn padic_suite(grid: &PadicGrid, mode: Execution) -> Result<SuiteReport> {
    let tables = tables_for(grid.kmax, &grid.signs)?;
    let mut cells = Vec::new();
    for k in 1..=grid.kmax {
        for &eps in &grid.signs {
            for x in &grid.xs {
                for &p in &grid.primes {
                    cells.push((k, eps, x.clone(), p));
                }
            }
        }
    }
    let checks = map_cells(mode, &cells, |(k, eps, x, p)| {
        let params = json!({"k": k, "eps": eps.value(), "x": lit(x), "p": p.get(), "N": format!("1..={}", grid.n_max)});
        let tables = table_for(&tables, *eps);
        let spec = SeriesSpec::single(*k, *eps, x.clone()).expect("k >= 1");
        let claimed = spec.claimed_sum(tables);
        let outcome = padic_sum_verify(&spec, &claimed, *p, grid.n_max, tables).and_then(|good| {
            let bad = padic_sum_verify(&spec, &(&claimed + BigRational::one()), *p, grid.n_max, tables)?;
            Ok((good, bad))
        });
        match outcome {
            Ok((good, bad)) => {
                let rejected = matches!(bad.outcome, PadicOutcome::BoundViolated { .. });
                let last = good.samples.last().map(|s| s.error_valuation.to_string()).unwrap_or_default();
                let detail = format!(
                    "claim {}: {:?}, final valuation {last}; claim+1: {:?}",
                    lit(&claimed),
                    good.outcome,
                    bad.outcome
                );
                check("padic-sum", params, "0".into(), String::new(), good.passed() && rejected, Some(detail))
            }
            Err(e) => check("padic-sum", params, String::new(), String::new(), false, Some(e.to_string())),
        }
    });
    Ok(SuiteReport::new("padic", checks))
}

/// Verifies one user-supplied claim against every prime.
pub fn padic_claim(spec: &SeriesSpec, claimed: &BigRational, primes: &[Prime], n_max: u64, mode: Execution) -> Result<SuiteReport> {
    let tables = GeneratedTables::build(spec.degree().saturating_sub(1), spec.eps())?;
    let results = map_cells(mode, primes, |&p| padic_sum_verify(spec, claimed, p, n_max, &tables));
    let mut checks = Vec::new();
    for (p, result) in primes.iter().zip(results) {
        let verdict = result?;
        let params = json!({
            "C": spec.coeffs().iter().map(lit).collect::<Vec<_>>(),
            "eps": spec.eps().value(),
            "x": lit(spec.x()),
            "p": p.get(),
            "claimed": lit(claimed),
            "N": format!("1..={n_max}"),
        });
        let detail = match verdict.outcome {
            PadicOutcome::Pass => "error valuations meet the remainder bound".to_string(),
            PadicOutcome::BoundViolated { n } => format!("first violating N = {n}"),
            PadicOutcome::NoGrowth => "error valuations do not grow".to_string(),
        };
        checks.push(check("padic-sum", params, String::new(), String::new(), verdict.passed(), Some(detail)));
    }
    Ok(SuiteReport::new("padic", checks))
}

/// Both differential-equation residuals for every truncation order in `orders`.
pub fn ode_suite(orders: std::ops::RangeInclusive<usize>, mode: Execution) -> Result<SuiteReport> {
    let orders: Vec<usize> = orders.collect();
    let results = map_cells(mode, &orders, |&n| -> Result<Vec<CheckReport>> {
        let first = ode_residual_first(n)?;
        let artifact_ok = first.residual.coeff(n + 1) == &BigRational::from_integer(factorial(n as u64 + 1));
        let second = ode_residual_second(n)?;
        let mut out = Vec::new();
        for (name, res, extra_ok) in [("ode-first", first, artifact_ok), ("ode-second", second, true)] {
            let violation = res.first_violation();
            let residual = violation.map_or("0".to_string(), |d| lit(res.residual.coeff(d)));
            let detail = match violation {
                Some(d) => format!("nonzero coefficient at degree {d}"),
                None => format!("artifacts {}", res.artifacts_json()),
            };
            out.push(check(name, json!({"N": n}), residual, String::new(), violation.is_none() && extra_ok, Some(detail)));
        }
        Ok(out)
    });
    let mut checks = Vec::new();
    for r in results {
        checks.extend(r?);
    }
    Ok(SuiteReport::new("ode", checks))
}

/// Four routes to U, V, u, v for `k <= kmax`: A-table substitution, the U/V
/// polynomial recurrences, the integer recurrences at `x = 1, eps = +1`, and
/// the auxiliary linear systems.
pub fn routes_suite(kmax: usize, mode: Execution) -> Result<SuiteReport> {
    let mut checks = Vec::new();
    for eps in Sign::BOTH {
        let derived = uv_from_a(&gen_a(kmax.saturating_sub(1), eps));
        let (u_rec, v_rec) = uv_by_recurrence(kmax, eps);
        let mismatch = (1..=kmax).find(|&k| derived.u(k) != &u_rec[k - 1] || derived.v(k) != &v_rec[k - 1]);
        checks.push(check(
            "uv-poly-routes",
            json!({"eps": eps.value(), "k": format!("1..={kmax}")}),
            if mismatch.is_none() { "0" } else { "nonzero" }.into(),
            String::new(),
            mismatch.is_none(),
            mismatch.map(|k| format!("first mismatch at k={k}")),
        ));
    }
    let plus = uv_from_a(&gen_a(kmax.saturating_sub(1), Sign::Plus));
    let ints = uv_recurrence(kmax);
    let a_plus = gen_a(kmax.saturating_sub(1), Sign::Plus);
    let ks: Vec<usize> = (1..=kmax).collect();
    let aux = map_cells(mode, &ks, |&k| aux_poly(k));
    let one = BigRational::one();
    for (k, solution) in ks.iter().copied().zip(aux) {
        let solution = solution?;
        let u = rat_from_int(ints.u(k).clone());
        let v = rat_from_int(ints.v(k).clone());
        let agree = plus.u(k).eval(&one) == u
            && plus.v(k).eval(&one) == v
            && solution.u == u
            && solution.v == v
            && solution.poly == a_plus.entries()[k - 1].at_x(&one);
        checks.push(check(
            "uv-int-routes",
            json!({"k": k, "u": ints.u(k).to_string(), "v": ints.v(k).to_string()}),
            if agree { "0" } else { "nonzero" }.into(),
            String::new(),
            agree,
            None,
        ));
    }
    Ok(SuiteReport::new("routes", checks))
}

/// `-U_k^+(-1) = B_{k+1}` for `k = 1..=kmax`, Bell numbers from their own recurrence.
pub fn bell_suite(kmax: usize) -> SuiteReport {
    let b = bell(kmax + 1);
    let uv = uv_from_a(&gen_a(kmax.saturating_sub(1), Sign::Plus));
    let minus_one = rat_from_int(-1);
    let checks = (1..=kmax)
        .map(|k| {
            let lhs = -uv.u(k).eval(&minus_one);
            let rhs = rat_from_int(b.get(k + 1).clone());
            let ok = lhs == rhs;
            check("bell-identity", json!({"k": k, "B": b.get(k + 1).to_string()}), lit(&(lhs - rhs)), String::new(), ok, None)
        })
        .collect();
    SuiteReport::new("bell", checks)
}

/// Indices `2 <= k <= kmax` with `u_k = 0`.
pub fn vanishing_u(kmax: usize) -> Vec<usize> {
    let t = uv_recurrence(kmax);
    (2..=kmax).filter(|&k| t.u(k).is_zero()).collect()
}

/// Digit-sum valuation of `n!` against repeated division of `n!` itself.
pub fn legendre_suite(n_max: u64, primes: &[Prime], mode: Execution) -> SuiteReport {
    let checks = map_cells(mode, primes, |&p| {
        let mismatch = (0..=n_max).find(|&n| val_factorial(n, p) != val_int(&factorial(n), p));
        check(
            "legendre",
            json!({"p": p.get(), "n": format!("0..={n_max}")}),
            if mismatch.is_none() { "0" } else { "nonzero" }.into(),
            String::new(),
            mismatch.is_none(),
            mismatch.map(|n| format!("mismatch at n={n}")),
        )
    });
    SuiteReport::new("legendre", checks)
}

/// Exact integer `t` as a rational, for tests and callers building grids.
pub fn int(t: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(t))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_finite_grid_passes_in_both_modes() {
        let grid = FiniteGrid {
            kmax: 4,
            n_max: 8,
            power_kmax: 3,
            ..FiniteGrid::default()
        };
        let seq = finite_suite(&grid, Execution::Sequential).unwrap();
        let par = finite_suite(&grid, Execution::Parallel).unwrap();
        assert!(seq.passed(), "{}", seq.to_text());
        assert_eq!(seq, par);
    }

    #[test]
    fn random_specs_are_valid_and_seeded() {
        let mut a = ChaCha8Rng::seed_from_u64(7);
        let mut b = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let s = random_telescope_spec(&mut a);
            assert_eq!(s, random_telescope_spec(&mut b));
            assert!(s.factors().len() <= 2);
            assert!(s.factors().iter().all(|f| f.mu <= 3 && f.nu.abs() <= 2 && f.lambda <= 2));
            assert!(s.alpha() <= 2 && s.beta() <= 1);
            assert!(s.aux().degree().is_none_or(|d| d <= 2));
        }
    }

    #[test]
    fn small_padic_grid() {
        let grid = PadicGrid {
            kmax: 2,
            n_max: 40,
            primes: vec![Prime::new(2).unwrap(), Prime::new(3).unwrap()],
            ..PadicGrid::default()
        };
        let report = padic_suite(&grid, Execution::Parallel).unwrap();
        assert!(report.passed(), "{}", report.to_text());
    }

    #[test]
    fn wrong_claim_reports_first_violation() {
        let spec = SeriesSpec::single(1, Sign::Plus, int(1)).unwrap();
        let report = padic_claim(&spec, &int(-2), &[Prime::new(2).unwrap()], 50, Execution::Sequential).unwrap();
        assert!(!report.passed());
        assert!(report.checks[0].detail.as_deref().unwrap().contains("first violating N"));
    }

    #[test]
    fn small_suites() {
        assert!(routes_suite(6, Execution::Parallel).unwrap().passed());
        assert!(bell_suite(8).passed());
        assert!(ode_suite(3..=8, Execution::Parallel).unwrap().passed());
        assert!(legendre_suite(60, &[Prime::new(3).unwrap()], Execution::Sequential).passed());
        assert!(vanishing_u(30).is_empty());
    }
}
