//! The generating polynomials `A_k(n;x)`, the derived `U_k(x)`, `V_k(x)`,
//! the integer pairs `(u_k, v_k)`, Bell numbers and the integer sequences
//! obtained by evaluating the family at `n ∈ {0,1}`, `x = ±1`.
//!
//! The A-table is the single source of truth. Every other family is derived
//! from it and then compared against an independent recurrence.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernel::{binomial, format_rational, rat_from_int};
use crate::poly::{GenPoly, RatPoly, Sign};

fn binom_q(n: usize, k: usize) -> BigRational {
    BigRational::from_integer(binomial(n as u64, k as u64))
}

/// `A_0, ..., A_kmax` for one sign.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ATable {
    eps: Sign,
    entries: Vec<GenPoly>,
}

impl ATable {
    /// Wraps externally supplied entries without checking them; pair with
    /// [`verify_a_recurrence`].
    pub fn from_entries(eps: Sign, entries: Vec<GenPoly>) -> Self {
        ATable { eps, entries }
    }

    pub fn eps(&self) -> Sign {
        self.eps
    }

    pub fn kmax(&self) -> usize {
        self.entries.len() - 1
    }

    pub fn entries(&self) -> &[GenPoly] {
        &self.entries
    }

    pub fn get(&self, k: usize) -> Option<&GenPoly> {
        self.entries.get(k)
    }
}

/// Solves for `A_{kj}(n)` column by column: for `j < k`
/// `sum_{m=0}^{j} C(k+1, k+1-m) A_{k-m, j-m} = eps * A_{k-1, j}`,
/// and for `j = k` the right side is `n^k`.
pub fn gen_a(kmax: usize, eps: Sign) -> ATable {
    let e = eps.to_rational();
    let mut entries = vec![GenPoly::one(eps)];
    for k in 1..=kmax {
        let mut coeffs = Vec::with_capacity(k + 1);
        for j in 0..=k {
            let mut rhs = if j < k {
                entries[k - 1].coeff(j).scale(&e)
            } else {
                RatPoly::monomial(BigRational::one(), k)
            };
            for m in 1..=j {
                let prev = entries[k - m].coeff(j - m);
                rhs = &rhs - &prev.scale(&binom_q(k + 1, k + 1 - m));
            }
            coeffs.push(rhs);
        }
        entries.push(GenPoly::new(eps, coeffs));
    }
    ATable { eps, entries }
}

/// Per-`k` residuals of the two-variable identity
/// `sum_{l=1}^{k+1} C(k+1,l) x^{k-l+1} A_{l-1} - eps A_{k-1} - n^k x^k = 0`.
#[derive(Clone, Debug)]
pub struct RecurrenceReport {
    pub eps: Sign,
    /// `residuals[k-1]` is the residual at `k`.
    pub residuals: Vec<GenPoly>,
}

impl RecurrenceReport {
    pub fn first_failure(&self) -> Option<usize> {
        self.residuals.iter().position(|r| !r.is_zero()).map(|i| i + 1)
    }

    pub fn is_clean(&self) -> bool {
        self.first_failure().is_none()
    }

    pub fn into_result(self) -> Result<()> {
        match self.first_failure() {
            None => Ok(()),
            Some(k) => Err(Error::NonzeroResidual {
                check: "A-recurrence".into(),
                params: format!("eps={}, k={k}", self.eps),
                residual: self.residuals[k - 1].to_string(),
            }),
        }
    }
}

/// Substitutes the whole table into the recurrence using polynomial
/// arithmetic, independently of the column solver in [`gen_a`].
pub fn verify_a_recurrence(table: &ATable) -> RecurrenceReport {
    let eps = table.eps;
    let mut residuals = Vec::with_capacity(table.kmax());
    for k in 1..=table.kmax() {
        let mut acc = GenPoly::zero(eps);
        for l in 1..=k + 1 {
            let shifted = table.entries[l - 1].mul_x_pow(k + 1 - l).scale(&binom_q(k + 1, l));
            acc = &acc + &shifted;
        }
        acc = &acc - &table.entries[k - 1].scale(&eps.to_rational());
        acc = &acc - &GenPoly::term(eps, RatPoly::monomial(BigRational::one(), k), k);
        residuals.push(acc);
    }
    RecurrenceReport { eps, residuals }
}

/// `U_k(x)` and `V_k(x)` for `k = 1..=kmax`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UVPolyTable {
    eps: Sign,
    u: Vec<RatPoly>,
    v: Vec<RatPoly>,
}

impl UVPolyTable {
    pub fn from_parts(eps: Sign, u: Vec<RatPoly>, v: Vec<RatPoly>) -> Self {
        assert_eq!(u.len(), v.len());
        UVPolyTable { eps, u, v }
    }

    pub fn eps(&self) -> Sign {
        self.eps
    }

    pub fn kmax(&self) -> usize {
        self.u.len()
    }

    /// `U_k`, `k >= 1`.
    pub fn u(&self, k: usize) -> &RatPoly {
        &self.u[k - 1]
    }

    /// `V_k`, `k >= 1`.
    pub fn v(&self, k: usize) -> &RatPoly {
        &self.v[k - 1]
    }

    pub fn u_all(&self) -> &[RatPoly] {
        &self.u
    }

    pub fn v_all(&self) -> &[RatPoly] {
        &self.v
    }
}

/// `U_k = x A_{k-1}(1;x) - eps A_{k-1}(0;x)` and `V_k = -eps A_{k-1}(0;x)`
/// for `k = 1..=kmax+1`, cross-checked against [`uv_by_recurrence`].
pub fn derive_uv(table: &ATable) -> Result<UVPolyTable> {
    let derived = uv_from_a(table);
    let (u_rec, v_rec) = uv_by_recurrence(table.kmax() + 1, table.eps);
    for k in 1..=derived.kmax() {
        if derived.u(k) != &u_rec[k - 1] {
            return Err(Error::CrossCheck(format!(
                "U_{k} (eps={}): from A-table {} but recurrence gives {}",
                table.eps,
                derived.u(k).render("x"),
                u_rec[k - 1].render("x")
            )));
        }
        if derived.v(k) != &v_rec[k - 1] {
            return Err(Error::CrossCheck(format!(
                "V_{k} (eps={}): from A-table {} but recurrence gives {}",
                table.eps,
                derived.v(k).render("x"),
                v_rec[k - 1].render("x")
            )));
        }
    }
    Ok(derived)
}

/// The A-table route alone, without the recurrence cross-check.
pub fn uv_from_a(table: &ATable) -> UVPolyTable {
    let eps = table.eps.to_rational();
    let zero = BigRational::zero();
    let one = BigRational::one();
    let mut u = Vec::with_capacity(table.entries.len());
    let mut v = Vec::with_capacity(table.entries.len());
    for a in &table.entries {
        let at0 = a.at_n(&zero).scale(&eps);
        let at1 = a.at_n(&one).mul_var_pow(1);
        u.push(&at1 - &at0);
        v.push(-&at0);
    }
    UVPolyTable {
        eps: table.eps,
        u,
        v,
    }
}

/// `U_1..U_kmax` and `V_1..V_kmax` straight from their own recurrences:
/// `U_{k+1} = x^{k+1} + eps U_k - sum_{l=1}^{k} C(k+1,l) x^{k+1-l} U_l`, `U_1 = x - eps`;
/// `V_{k+1} = eps V_k - sum_{l=1}^{k} C(k+1,l) x^{k+1-l} V_l`, `V_1 = -eps`.
///
/// The V recurrence is the `k >= 1` part of the printed one with its index
/// shifted by one; its `k = 0` instance would contradict the seed and is not used.
pub fn uv_by_recurrence(kmax: usize, eps: Sign) -> (Vec<RatPoly>, Vec<RatPoly>) {
    let e = eps.to_rational();
    let mut u: Vec<RatPoly> = Vec::with_capacity(kmax);
    let mut v: Vec<RatPoly> = Vec::with_capacity(kmax);
    if kmax == 0 {
        return (u, v);
    }
    u.push(RatPoly::linear(BigRational::one(), -e.clone()));
    v.push(RatPoly::constant(-e.clone()));
    for k in 1..kmax {
        let mut next_u = &RatPoly::monomial(BigRational::one(), k + 1) + &u[k - 1].scale(&e);
        let mut next_v = v[k - 1].scale(&e);
        for l in 1..=k {
            let c = binom_q(k + 1, l);
            next_u = &next_u - &u[l - 1].mul_var_pow(k + 1 - l).scale(&c);
            next_v = &next_v - &v[l - 1].mul_var_pow(k + 1 - l).scale(&c);
        }
        u.push(next_u);
        v.push(next_v);
    }
    (u, v)
}

/// The integer pairs `(u_k, v_k)`, `k = 1..=kmax`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct UVIntTable {
    pub u: Vec<BigInt>,
    pub v: Vec<BigInt>,
}

impl UVIntTable {
    pub fn kmax(&self) -> usize {
        self.u.len()
    }

    pub fn u(&self, k: usize) -> &BigInt {
        &self.u[k - 1]
    }

    pub fn v(&self, k: usize) -> &BigInt {
        &self.v[k - 1]
    }
}

/// Integer recurrences only:
/// `u_{k+1} = -k u_k - sum_{l=1}^{k-1} C(k+1,l) u_l + 1`, `u_1 = 0`;
/// `v_{k+1} = -k v_k - sum_{l=1}^{k-1} C(k+1,l) v_l - [k = 0]`.
pub fn uv_recurrence(kmax: usize) -> UVIntTable {
    let mut u: Vec<BigInt> = Vec::with_capacity(kmax);
    let mut v: Vec<BigInt> = Vec::with_capacity(kmax);
    if kmax == 0 {
        return UVIntTable { u, v };
    }
    u.push(BigInt::zero());
    // k = 0 step: v_1 = -0 * v_0 - 1
    v.push(-BigInt::one());
    for k in 1..kmax {
        let kk = BigInt::from(k);
        let mut next_u = -&kk * &u[k - 1] + BigInt::one();
        let mut next_v = -&kk * &v[k - 1];
        for l in 1..k {
            let c = binomial((k + 1) as u64, l as u64);
            next_u -= &c * &u[l - 1];
            next_v -= &c * &v[l - 1];
        }
        u.push(next_u);
        v.push(next_v);
    }
    UVIntTable { u, v }
}

/// [`uv_recurrence`] cross-checked against `U_k^+(1)`, `V_k^+(1)` from the
/// A-table route.
pub fn gen_uv(kmax: usize) -> Result<UVIntTable> {
    let ints = uv_recurrence(kmax);
    if kmax == 0 {
        return Ok(ints);
    }
    let polys = derive_uv(&gen_a(kmax - 1, Sign::Plus))?;
    let one = BigRational::one();
    for k in 1..=kmax {
        let (u, v) = (polys.u(k).eval(&one), polys.v(k).eval(&one));
        if u != rat_from_int(ints.u(k).clone()) || v != rat_from_int(ints.v(k).clone()) {
            return Err(Error::CrossCheck(format!(
                "(u_{k}, v_{k}) = ({}, {}) from the integer recurrence but ({}, {}) from U_{k}(1), V_{k}(1)",
                ints.u(k),
                ints.v(k),
                format_rational(&u),
                format_rational(&v)
            )));
        }
    }
    Ok(ints)
}

/// Solution of `(n+1) A(n+1) - A(n) = n^k + u_k` for `A` of degree `k-1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AuxSolution {
    pub k: usize,
    /// `A_{k-1}(n)`.
    pub poly: RatPoly,
    pub u: BigRational,
    /// `-A_{k-1}(0)`.
    pub v: BigRational,
}

/// Builds and solves the `(k+1) x (k+1)` linear system in the unknowns
/// `(a_0, ..., a_{k-1}, u_k)` by matching coefficients of `n^0..n^k`.
pub fn aux_poly(k: usize) -> Result<AuxSolution> {
    if k == 0 {
        return Err(Error::InvalidParameters("aux_poly needs k >= 1".into()));
    }
    let size = k + 1;
    let mut matrix = vec![vec![BigRational::zero(); size]; size];
    // column i < k: (n+1)^{i+1} - n^i
    for i in 0..k {
        for (d, row) in matrix.iter_mut().enumerate() {
            let mut c = binom_q(i + 1, d);
            if d == i {
                c -= BigRational::one();
            }
            row[i] = c;
        }
    }
    matrix[0][k] = -BigRational::one();
    let mut rhs = vec![BigRational::zero(); size];
    rhs[k] = BigRational::one();
    let solution = solve_linear(matrix, rhs).ok_or(Error::SingularSystem(k))?;
    let poly = RatPoly::new(solution[..k].to_vec());
    let v = -poly.eval(&BigRational::zero());
    Ok(AuxSolution {
        k,
        poly,
        u: solution[k].clone(),
        v,
    })
}

/// Gauss-Jordan elimination over the rationals; `None` if singular.
pub fn solve_linear(mut a: Vec<Vec<BigRational>>, mut b: Vec<BigRational>) -> Option<Vec<BigRational>> {
    let n = b.len();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, pivot);
        b.swap(col, pivot);
        let inv = a[col][col].recip();
        for v in &mut a[col][col..] {
            *v *= &inv;
        }
        b[col] *= &inv;
        for r in 0..n {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let factor = a[r][col].clone();
            let pivot_row = a[col].clone();
            for (v, q) in a[r][col..].iter_mut().zip(&pivot_row[col..]) {
                *v -= &factor * q;
            }
            let delta = &factor * &b[col];
            b[r] -= delta;
        }
    }
    Some(b)
}

/// Bell numbers `B_0..B_kmax` by `B_{k+1} = sum_l C(k,l) B_l`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BellTable {
    pub values: Vec<BigInt>,
}

impl BellTable {
    pub fn get(&self, k: usize) -> &BigInt {
        &self.values[k]
    }
}

pub fn bell(kmax: usize) -> BellTable {
    let mut values = vec![BigInt::one()];
    for k in 0..kmax {
        let next = (0..=k)
            .map(|l| binomial(k as u64, l as u64) * &values[l])
            .sum::<BigInt>();
        values.push(next);
    }
    BellTable { values }
}

/// Closed forms of the top and linear coefficients of `A_k`:
/// `A_kk(n) = sum_i (-1)^{k+i} C(k+1, i+1) n^i` and
/// `A_k1(n) = (n - k(k+3)/2) eps^{k+1}`.
pub fn closed_forms(k: usize, eps: Sign) -> (RatPoly, RatPoly) {
    let top = RatPoly::new(
        (0..=k)
            .map(|i| {
                let c = binom_q(k + 1, i + 1);
                if (k + i) % 2 == 1 {
                    -c
                } else {
                    c
                }
            })
            .collect(),
    );
    let s = eps.pow(k as u64 + 1).to_rational();
    let constant = rat_from_int((k * (k + 3) / 2) as i64);
    let linear = RatPoly::linear(s.clone(), -(constant * s));
    (top, linear)
}

/// Compares [`closed_forms`] and the leading-coefficient property
/// `a_{kj,j} = eps^{k+j}`, `deg_n A_kj = j` against a generated table.
pub fn check_structure(table: &ATable) -> Result<()> {
    let eps = table.eps;
    for (k, a) in table.entries.iter().enumerate() {
        if a.degree_x() != Some(k) {
            return Err(Error::CrossCheck(format!("A_{k} has x-degree {:?}", a.degree_x())));
        }
        for j in 0..=k {
            let c = a.coeff(j);
            if c.degree() != Some(j) {
                return Err(Error::CrossCheck(format!("deg_n A_{k}{j} = {:?}, expected {j}", c.degree())));
            }
            if c.leading() != Some(&eps.pow((k + j) as u64).to_rational()) {
                return Err(Error::CrossCheck(format!("leading coefficient of A_{k}{j} is not eps^{}", k + j)));
            }
        }
        if k >= 1 {
            let (top, linear) = closed_forms(k, eps);
            if a.coeff(k) != top {
                return Err(Error::CrossCheck(format!(
                    "A_{k}{k} = {} but closed form gives {}",
                    a.coeff(k).render("n"),
                    top.render("n")
                )));
            }
            if a.coeff(1) != linear {
                return Err(Error::CrossCheck(format!(
                    "A_{k}1 = {} but closed form gives {}",
                    a.coeff(1).render("n"),
                    linear.render("n")
                )));
            }
        }
    }
    Ok(())
}

/// An A-table together with its derived U/V polynomials, for one sign.
/// Covers `A_0..A_kmax` and `U_k, V_k` for `k = 1..=kmax+1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratedTables {
    pub a: ATable,
    pub uv: UVPolyTable,
}

impl GeneratedTables {
    /// Generates, substitutes back into the recurrence, derives U/V with their
    /// cross-check, and checks the structural closed forms.
    pub fn build(kmax: usize, eps: Sign) -> Result<Self> {
        let a = gen_a(kmax, eps);
        Self::from_a_table(a)
    }

    pub fn from_a_table(a: ATable) -> Result<Self> {
        verify_a_recurrence(&a).into_result()?;
        check_structure(&a)?;
        let uv = derive_uv(&a)?;
        Ok(GeneratedTables { a, uv })
    }

    pub fn eps(&self) -> Sign {
        self.a.eps()
    }

    pub fn kmax(&self) -> usize {
        self.a.kmax()
    }

    /// Largest `k` for which `U_k`, `V_k` and `A_{k-1}` are all available.
    pub fn max_k(&self) -> usize {
        self.uv.kmax()
    }

    pub fn require(&self, k: usize) -> Result<()> {
        if k == 0 || k > self.max_k() {
            return Err(Error::TableTooShort {
                covered: self.max_k(),
                requested: k,
            });
        }
        Ok(())
    }

    pub fn to_file(&self) -> TableFile {
        let one = BigRational::one();
        TableFile {
            eps: self.eps(),
            kmax: self.kmax(),
            a: self.a.entries.iter().map(GenPoly::to_literals).collect(),
            u_poly: self.uv.u.iter().map(RatPoly::to_literals).collect(),
            v_poly: self.uv.v.iter().map(RatPoly::to_literals).collect(),
            u: self.uv.u.iter().map(|p| format_rational(&p.eval(&one))).collect(),
            v: self.uv.v.iter().map(|p| format_rational(&p.eval(&one))).collect(),
        }
    }

    /// Rebuilds from the file form and re-runs every check.
    pub fn from_file(file: &TableFile) -> Result<Self> {
        if file.a.len() != file.kmax + 1 {
            return Err(Error::TableFormat(format!(
                "kmax = {} but {} A entries",
                file.kmax,
                file.a.len()
            )));
        }
        let entries = file
            .a
            .iter()
            .map(|lits| GenPoly::from_literals(file.eps, lits))
            .collect::<Result<Vec<_>>>()?;
        let tables = Self::from_a_table(ATable::from_entries(file.eps, entries))?;
        if tables.to_file() != *file {
            return Err(Error::TableFormat("stored U/V do not match the A-table".into()));
        }
        Ok(tables)
    }
}

/// On-disk JSON form:
/// `{ "eps": ±1, "kmax": K, "A": [[[a_{kj,i}]]], "U": [[..]], "V": [[..]], "u": [..], "v": [..] }`.
/// `U`, `V` list `k = 1..=K+1`; `u`, `v` are their values at `x = 1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableFile {
    pub eps: Sign,
    pub kmax: usize,
    #[serde(rename = "A")]
    pub a: Vec<Vec<Vec<String>>>,
    #[serde(rename = "U")]
    pub u_poly: Vec<Vec<String>>,
    #[serde(rename = "V")]
    pub v_poly: Vec<Vec<String>>,
    pub u: Vec<String>,
    pub v: Vec<String>,
}

/// Named integer sequences: `A^eps(n; x)` over `k >= 0` and `U^eps(x)` over `k >= 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SequenceId {
    A { eps: Sign, n: u8, x: Sign },
    U { eps: Sign, x: Sign },
}

impl SequenceId {
    pub fn eps(self) -> Sign {
        match self {
            SequenceId::A { eps, .. } | SequenceId::U { eps, .. } => eps,
        }
    }

    /// Index of the first term.
    pub fn first_index(self) -> u64 {
        match self {
            SequenceId::A { .. } => 0,
            SequenceId::U { .. } => 1,
        }
    }

    /// All twelve families.
    pub fn all() -> Vec<SequenceId> {
        let mut out = Vec::new();
        for eps in Sign::BOTH {
            for n in [0, 1] {
                for x in Sign::BOTH {
                    out.push(SequenceId::A { eps, n, x });
                }
            }
        }
        for eps in Sign::BOTH {
            for x in Sign::BOTH {
                out.push(SequenceId::U { eps, x });
            }
        }
        out
    }
}

impl fmt::Display for SequenceId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SequenceId::A { eps, n, x } => write!(f, "A{}({n};{})", eps.symbol(), x.value()),
            SequenceId::U { eps, x } => write!(f, "U{}({})", eps.symbol(), x.value()),
        }
    }
}

impl FromStr for SequenceId {
    type Err = Error;

    /// Accepts `A+0,1`, `A-(1;-1)`, `U+1`, `U-(-1)`, `U--1`.
    fn from_str(s: &str) -> Result<Self> {
        let unknown = || Error::UnknownSequence(s.to_string());
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let mut chars = compact.chars();
        let family = chars.next().ok_or_else(unknown)?;
        let eps = match chars.next() {
            Some('+') => Sign::Plus,
            Some('-') => Sign::Minus,
            _ => return Err(unknown()),
        };
        let rest: String = chars.collect();
        let rest = rest
            .strip_prefix('(')
            .and_then(|r| r.strip_suffix(')'))
            .unwrap_or(&rest)
            .to_string();
        let parse_x = |t: &str| match t {
            "1" | "+1" => Ok(Sign::Plus),
            "-1" => Ok(Sign::Minus),
            _ => Err(unknown()),
        };
        match family.to_ascii_uppercase() {
            'A' => {
                let (n, x) = rest.split_once([',', ';']).ok_or_else(unknown)?;
                let n = match n {
                    "0" => 0,
                    "1" => 1,
                    _ => return Err(unknown()),
                };
                Ok(SequenceId::A { eps, n, x: parse_x(x)? })
            }
            'U' => Ok(SequenceId::U { eps, x: parse_x(&rest)? }),
            _ => Err(unknown()),
        }
    }
}

/// Evaluates the named family for `k = 0..=kmax` (A) or `k = 1..=kmax` (U).
pub fn sequence_slice(id: SequenceId, kmax: usize) -> Vec<BigInt> {
    let to_int = |q: BigRational| {
        assert!(q.is_integer(), "sequence term {q} is not an integer");
        q.to_integer()
    };
    match id {
        SequenceId::A { eps, n, x } => {
            let table = gen_a(kmax, eps);
            let (n, x) = (rat_from_int(n as i64), x.to_rational());
            table.entries.iter().map(|a| to_int(a.eval(&n, &x))).collect()
        }
        SequenceId::U { eps, x } => {
            if kmax == 0 {
                return Vec::new();
            }
            let uv = uv_from_a(&gen_a(kmax - 1, eps));
            let x = x.to_rational();
            uv.u.iter().map(|p| to_int(p.eval(&x))).collect()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn n_poly(c: &[i64]) -> RatPoly {
        RatPoly::from_ints(c)
    }

    #[test]
    fn first_generating_polynomials() {
        for eps in Sign::BOTH {
            let e = eps.value();
            let t = gen_a(3, eps);
            assert_eq!(t.entries()[0], GenPoly::one(eps));
            assert_eq!(t.entries()[1], GenPoly::new(eps, vec![n_poly(&[e]), n_poly(&[-2, 1])]));
            assert_eq!(
                t.entries()[3],
                GenPoly::new(
                    eps,
                    vec![n_poly(&[e]), n_poly(&[-9, 1]), n_poly(&[17 * e, -7 * e, e]), n_poly(&[-4, 6, -4, 1])]
                )
            );
        }
        assert_eq!(gen_a(0, Sign::Plus).kmax(), 0);
    }

    #[test]
    fn recurrence_residuals() {
        for eps in Sign::BOTH {
            assert!(verify_a_recurrence(&gen_a(8, eps)).is_clean());
        }
        assert!(verify_a_recurrence(&gen_a(0, Sign::Plus)).residuals.is_empty());

        let mut entries = gen_a(5, Sign::Plus).entries().to_vec();
        entries[1] = GenPoly::new(Sign::Plus, vec![n_poly(&[1]), n_poly(&[-1, 1])]);
        let report = verify_a_recurrence(&ATable::from_entries(Sign::Plus, entries));
        assert_eq!(report.first_failure(), Some(1));
        assert!(report.into_result().is_err());
    }

    #[test]
    fn uv_polynomials() {
        let plus = derive_uv(&gen_a(4, Sign::Plus)).unwrap();
        assert_eq!(plus.kmax(), 5);
        assert_eq!(plus.u(1), &n_poly(&[-1, 1]));
        assert_eq!(plus.u(2), &n_poly(&[-1, 3, -1]));
        assert_eq!(plus.u(2).eval(&rat_from_int(1)), rat_from_int(1));
        assert_eq!(plus.v(1), &n_poly(&[-1]));

        let minus = derive_uv(&gen_a(4, Sign::Minus)).unwrap();
        assert_eq!(minus.u(1), &n_poly(&[1, 1]));
        assert_eq!(minus.v(1), &n_poly(&[1]));
    }

    #[test]
    fn uv_cross_check_detects_corruption() {
        let mut entries = gen_a(3, Sign::Plus).entries().to_vec();
        entries[2] = &entries[2] + &GenPoly::one(Sign::Plus);
        let err = derive_uv(&ATable::from_entries(Sign::Plus, entries)).unwrap_err();
        assert!(matches!(err, Error::CrossCheck(_)));
    }

    #[test]
    fn integer_pairs() {
        let t = gen_uv(5).unwrap();
        assert_eq!(t.u, ints(&[0, 1, -1, -2, 9]));
        assert_eq!(t.v, ints(&[-1, 1, 1, -5, 5]));
        // u_4 = -3 u_3 - (C(4,1) u_1 + C(4,2) u_2) + 1
        assert_eq!(t.u(4), &BigInt::from(3 - 6 + 1));
        assert_eq!(uv_recurrence(0).kmax(), 0);
    }

    #[test]
    fn auxiliary_systems() {
        let s1 = aux_poly(1).unwrap();
        assert_eq!(s1.poly, RatPoly::one());
        assert_eq!(s1.u, rat_from_int(0));
        assert_eq!(s1.v, rat_from_int(-1));

        // k = 2 by hand: (n+1)(a1 (n+1) + a0) - (a1 n + a0) = a1 n^2 + (a1 + a0) n + a1,
        // so a1 = 1, a0 = -1, u = 1.
        let s2 = aux_poly(2).unwrap();
        assert_eq!(s2.poly, n_poly(&[-1, 1]));
        assert_eq!(s2.u, rat_from_int(1));
        assert_eq!(s2.v, rat_from_int(1));
        assert!(aux_poly(0).is_err());
    }

    #[test]
    fn linear_solver() {
        let m = vec![
            vec![rat_from_int(0), rat_from_int(2)],
            vec![rat_from_int(3), rat_from_int(1)],
        ];
        let x = solve_linear(m, vec![rat_from_int(4), rat_from_int(5)]).unwrap();
        assert_eq!(x, vec![rat_from_int(1), rat_from_int(2)]);
        let singular = vec![vec![rat_from_int(1), rat_from_int(2)], vec![rat_from_int(2), rat_from_int(4)]];
        assert!(solve_linear(singular, vec![rat_from_int(1), rat_from_int(1)]).is_none());
    }

    #[test]
    fn bell_numbers() {
        let b = bell(7);
        assert_eq!(b.values[..4], ints(&[1, 1, 2, 5])[..]);
        assert_eq!(b.get(7), &BigInt::from(877));
        assert!(b.values[1..].windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn closed_form_examples() {
        assert_eq!(closed_forms(1, Sign::Plus).0, n_poly(&[-2, 1]));
        assert_eq!(closed_forms(5, Sign::Minus).1, n_poly(&[-20, 1]));
        assert_eq!(closed_forms(4, Sign::Plus).0, n_poly(&[5, -10, 10, -5, 1]));
        assert_eq!(closed_forms(2, Sign::Minus).1, n_poly(&[5, -1]));
        for eps in Sign::BOTH {
            check_structure(&gen_a(10, eps)).unwrap();
        }
    }

    #[test]
    fn sequence_ids() {
        let id: SequenceId = "A+0,1".parse().unwrap();
        assert_eq!(id, SequenceId::A { eps: Sign::Plus, n: 0, x: Sign::Plus });
        assert_eq!("A-(1;-1)".parse::<SequenceId>().unwrap(), SequenceId::A { eps: Sign::Minus, n: 1, x: Sign::Minus });
        assert_eq!("U--1".parse::<SequenceId>().unwrap(), SequenceId::U { eps: Sign::Minus, x: Sign::Minus });
        assert_eq!("U+(-1)".parse::<SequenceId>().unwrap(), SequenceId::U { eps: Sign::Plus, x: Sign::Minus });
        for id in SequenceId::all() {
            assert_eq!(id.to_string().parse::<SequenceId>().unwrap(), id);
        }
        assert!("B+1".parse::<SequenceId>().is_err());
        assert!("A+2,1".parse::<SequenceId>().is_err());
        assert!("U+2".parse::<SequenceId>().is_err());
    }

    #[test]
    fn sequence_examples() {
        let a = |s: &str, k| sequence_slice(s.parse().unwrap(), k);
        assert_eq!(a("A+0,1", 5), ints(&[1, -1, -1, 5, -5, -21]));
        assert_eq!(a("A-1,-1", 5), ints(&[1, 0, -2, -3, 4, 30]));
        assert_eq!(a("U-1", 6), ints(&[2, -5, 15, -52, 203, -877]));
        assert!(a("U+1", 0).is_empty());
    }

    #[test]
    fn table_file_round_trip() {
        let t = GeneratedTables::build(4, Sign::Minus).unwrap();
        let file = t.to_file();
        let json = serde_json::to_string(&file).unwrap();
        let back: TableFile = serde_json::from_str(&json).unwrap();
        assert_eq!(GeneratedTables::from_file(&back).unwrap(), t);

        let mut bad = file.clone();
        bad.v[0] = "7".into();
        assert!(GeneratedTables::from_file(&bad).is_err());
        let mut bad = file;
        bad.a[2][1][0] = "3".into();
        assert!(GeneratedTables::from_file(&bad).is_err());
    }
}
