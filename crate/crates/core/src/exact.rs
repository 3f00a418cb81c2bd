//! Exact rational values of the probabilities that a random transformation
//! generates a group (`G`), that `rank(xyx) = rank(y)` (`T`), and that
//! `rank(xyz) = rank(y)` (`V`), with brute-force counterparts.
//!
//! Everything stays in integers until one final division.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{invalid, Error, Result};
use crate::transform::{all_transformations, Transformation};

/// Default brute-force budgets: `7^7`, `4^8` and `3^9` tuples.
pub const DEFAULT_G_BUDGET: u64 = 823_543;
pub const DEFAULT_T_BUDGET: u64 = 65_536;
pub const DEFAULT_V_BUDGET: u64 = 19_683;

/// Binomials, Stirling numbers of the second kind and factorials up to `n`.
pub struct Combinatorics {
    n: usize,
    binom: Vec<Vec<BigUint>>,
    stirling: Vec<Vec<BigUint>>,
    factorial: Vec<BigUint>,
}

impl Combinatorics {
    pub fn new(n: usize) -> Self {
        let mut binom = vec![vec![BigUint::zero(); n + 1]; n + 1];
        let mut stirling = vec![vec![BigUint::zero(); n + 1]; n + 1];
        binom[0][0] = BigUint::one();
        stirling[0][0] = BigUint::one();
        for i in 1..=n {
            binom[i][0] = BigUint::one();
            for j in 1..=i {
                binom[i][j] = &binom[i - 1][j - 1] + &binom[i - 1][j];
                stirling[i][j] = &stirling[i - 1][j] * BigUint::from(j) + &stirling[i - 1][j - 1];
            }
        }
        let mut factorial = vec![BigUint::one(); n + 1];
        for i in 1..=n {
            factorial[i] = &factorial[i - 1] * BigUint::from(i);
        }
        Self {
            n,
            binom,
            stirling,
            factorial,
        }
    }

    /// Zero outside `0 ≤ k ≤ n`.
    pub fn binom(&self, n: usize, k: usize) -> &BigUint {
        static ZERO: std::sync::OnceLock<BigUint> = std::sync::OnceLock::new();
        if k > n || n > self.n {
            assert!(n <= self.n, "table too small");
            return ZERO.get_or_init(BigUint::zero);
        }
        &self.binom[n][k]
    }

    /// Zero when `k > n`.
    pub fn stirling2(&self, n: usize, k: usize) -> &BigUint {
        assert!(n <= self.n, "table too small");
        static ZERO: std::sync::OnceLock<BigUint> = std::sync::OnceLock::new();
        if k > n {
            return ZERO.get_or_init(BigUint::zero);
        }
        &self.stirling[n][k]
    }

    pub fn factorial(&self, n: usize) -> &BigUint {
        &self.factorial[n]
    }
}

fn pow(base: usize, exp: usize) -> BigUint {
    BigUint::from(base).pow(exp as u32)
}

fn ratio(num: BigUint, den: BigUint) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Number of partitions of an `n`-set into `k` nonempty blocks.
pub fn stirling2(n: i64, k: i64) -> Result<BigUint> {
    if n < 0 || k < 0 || k > n {
        return invalid(format!("stirling2 needs 0 ≤ k ≤ n, got n={n}, k={k}"));
    }
    Ok(Combinatorics::new(n as usize).stirling2(n as usize, k as usize).clone())
}

/// `C(n, k)`, zero when `k` is out of range.
pub fn binomial(n: i64, k: i64) -> BigUint {
    if n < 0 || k < 0 || k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k) as u64;
    let n = n as u64;
    (0..k).fold(BigUint::one(), |acc, i| acc * (n - i) / (i + 1))
}

fn check_degree(n: usize) -> Result<()> {
    if n < 1 {
        return invalid("degree must be at least 1");
    }
    Ok(())
}

/// `G_n = (n!/n^n) Σ_{k<n} (n-k)^k / k!`, evaluated as
/// `n^{-n} Σ_{r=1}^{n} C(n,r) r! r^{n-r}`.
pub fn exact_g(n: usize) -> Result<BigRational> {
    check_degree(n)?;
    let c = Combinatorics::new(n);
    let count: BigUint = (1..=n)
        .map(|r| c.binom(n, r) * c.factorial(r) * pow(r, n - r))
        .sum();
    Ok(ratio(count, pow(n, n)))
}

/// `T_n = n^{-2n} Σ_r C(n,r) r! Σ_k S(r,k) k! k^{n-r} Σ_s C(n,s) S(n-s,r-k) C(s,k) k^{s-k}`
/// with `x` of rank `r`, `y` of rank `k` and `s` the size of the union of
/// the kernel classes of `x` meeting `im(y)`.
pub fn exact_t(n: usize) -> Result<BigRational> {
    check_degree(n)?;
    let c = Combinatorics::new(n);
    let mut total = BigUint::zero();
    for r in 1..=n {
        let outer = c.binom(n, r) * c.factorial(r);
        let mut by_k = BigUint::zero();
        for k in 1..=r {
            let inner: BigUint = (k..=n + k - r)
                .map(|s| c.binom(n, s) * c.stirling2(n - s, r - k) * c.binom(s, k) * pow(k, s - k))
                .sum();
            by_k += c.stirling2(r, k) * c.factorial(k) * pow(k, n - r) * inner;
        }
        total += outer * by_k;
    }
    Ok(ratio(total, pow(n, 2 * n)))
}

/// `V_n`, the probability that `rank(xyz) = rank(y)`:
///
/// `n^{-3n} Σ_{r=1}^{n} Σ_{k=1}^{n} Σ_{t=1}^{min(r,k)} S(n,r) C(n,r) r! C(n,k) k! S(r,t) t! t^{n-r}
///  Σ_{s=t}^{n+t-k} C(n,s) S(n-s,k-t) C(s,t) t^{s-t}`
///
/// where `x` has rank `r`, `z` has rank `k` and `y` has rank `t`. The inner
/// sum counts pairs (kernel of `z`, image of `y` meeting `t` distinct kernel
/// classes of `z`).
pub fn exact_v(n: usize) -> Result<BigRational> {
    check_degree(n)?;
    let c = Combinatorics::new(n);
    let mut total = BigUint::zero();
    for r in 1..=n {
        let x_count = c.stirling2(n, r) * c.binom(n, r) * c.factorial(r);
        for k in 1..=n {
            let z_count = c.binom(n, k) * c.factorial(k);
            let mut by_t = BigUint::zero();
            for t in 1..=r.min(k) {
                let inner: BigUint = (t..=n + t - k)
                    .map(|s| {
                        c.binom(n, s) * c.stirling2(n - s, k - t) * c.binom(s, t) * pow(t, s - t)
                    })
                    .sum();
                by_t += c.stirling2(r, t) * c.factorial(t) * pow(t, n - r) * inner;
            }
            total += &x_count * z_count * by_t;
        }
    }
    Ok(ratio(total, pow(n, 3 * n)))
}

/// `1 - k G_n - k(k-1) T_n - k(k-1)(k-2) V_n`; may be negative.
pub fn bound_p(n: usize, k: usize) -> Result<BigRational> {
    check_degree(n)?;
    if k < 1 {
        return invalid("k must be at least 1");
    }
    let kk = |v: usize| BigRational::from_integer(BigInt::from(v));
    let mut out = BigRational::one() - kk(k) * exact_g(n)?;
    if k >= 2 {
        out -= kk(k * (k - 1)) * exact_t(n)?;
    }
    if k >= 3 {
        out -= kk(k * (k - 1) * (k - 2)) * exact_v(n)?;
    }
    Ok(out)
}

fn check_budget(n: usize, arity: usize, budget: u64) -> Result<u64> {
    check_degree(n)?;
    let total = (n as u64)
        .checked_pow((arity * n) as u32)
        .filter(|&t| t <= budget)
        .ok_or_else(|| {
            Error::ResourceLimit(format!(
                "{n}^{} tuples exceed the brute-force budget of {budget}",
                arity * n
            ))
        })?;
    Ok(total)
}

/// Counts `x ∈ T_n` with `⟨x⟩` a group.
pub fn brute_force_g(n: usize, budget: u64) -> Result<BigRational> {
    let total = check_budget(n, 1, budget)?;
    let hits = all_transformations(n)
        .filter(Transformation::is_group_generator)
        .count();
    Ok(ratio(BigUint::from(hits), BigUint::from(total)))
}

/// Counts pairs with `rank(xyx) = rank(y)`.
pub fn brute_force_t(n: usize, budget: u64) -> Result<BigRational> {
    let total = check_budget(n, 2, budget)?;
    let all: Vec<Transformation> = all_transformations(n).collect();
    let mut hits = 0u64;
    for x in &all {
        for y in &all {
            if (&(x * y) * x).rank() == y.rank() {
                hits += 1;
            }
        }
    }
    Ok(ratio(BigUint::from(hits), BigUint::from(total)))
}

/// Counts triples with `rank(xyz) = rank(y)`.
pub fn brute_force_v(n: usize, budget: u64) -> Result<BigRational> {
    let total = check_budget(n, 3, budget)?;
    let all: Vec<Transformation> = all_transformations(n).collect();
    let mut hits = 0u64;
    for x in &all {
        for y in &all {
            let xy = x * y;
            let rank_y = y.rank();
            if xy.rank() < rank_y {
                continue;
            }
            hits += all.iter().filter(|z| (&xy * z).rank() == rank_y).count() as u64;
        }
    }
    Ok(ratio(BigUint::from(hits), BigUint::from(total)))
}

/// Decimal expansion rounded half away from zero to `digits` places.
pub fn to_decimal(value: &BigRational, digits: usize) -> String {
    let scale = BigInt::from(10u32).pow(digits as u32);
    let scaled = value.numer().abs() * &scale;
    let (q, r) = scaled.div_rem(value.denom());
    let rounded = if r * BigInt::from(2) >= *value.denom() { q + 1 } else { q };
    let (int_part, frac_part) = rounded.div_rem(&scale);
    let sign = if value.is_negative() && !rounded_is_zero(&int_part, &frac_part) { "-" } else { "" };
    if digits == 0 {
        return format!("{sign}{int_part}");
    }
    format!("{sign}{int_part}.{:0>width$}", frac_part.to_string(), width = digits)
}

fn rounded_is_zero(a: &BigInt, b: &BigInt) -> bool {
    a.is_zero() && b.is_zero()
}

/// Natural logarithm of a positive big integer, without overflowing `f64`.
pub fn ln_biguint(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits <= 1000 {
        return x.to_f64().unwrap_or(f64::INFINITY).ln();
    }
    let shift = bits - 64;
    let top = (x >> shift).to_f64().expect("64-bit prefix fits");
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

/// Natural logarithm of a positive rational.
pub fn ln_ratio(value: &BigRational) -> Result<f64> {
    if !value.is_positive() {
        return Err(Error::Domain("logarithm of a non-positive value".into()));
    }
    let num = value.numer().magnitude();
    let den = value.denom().magnitude();
    Ok(ln_biguint(num) - ln_biguint(den))
}

pub fn to_f64(value: &BigRational) -> f64 {
    value.to_f64().unwrap_or(f64::NAN)
}
