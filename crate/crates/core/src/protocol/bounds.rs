//! The a-priori constants `beta`, `r` and the termination round `t_end`.
//!
//! `t_end` is the smallest positive `t` with
//! `(1 - beta^{rn})^{floor(t / rn)} < epsilon / (n * max(|U|, |mu|))`.
//! With `beta = 1/B` and block length `m = rn`, the contraction factor per
//! block is `1 - B^{-m}`, which is far too close to 1 to iterate on. The
//! block count is therefore obtained from interval bounds on
//! `ln(1/rhs) / -ln(1 - B^{-m})`, and by exact exponentiation only when the
//! numbers involved are small.

use num::{BigInt, BigUint, Integer, One, Signed, ToPrimitive, Zero};

use crate::graph::{binomial, count_reduced_graphs_max, Digraph};
use crate::{Error, Rational, Result};

/// Largest `log2(B^m)` for which the analytic route is attempted.
const MAX_ANALYTIC_BITS: u64 = 1 << 16;
/// Largest bit size allowed for exact powers in the search route.
const MAX_EXACT_POWER_BITS: u64 = 1 << 24;

/// `beta`: `1/n` without faults, otherwise `1 / (n^2 (1 + C(n, (d+1)f+1)))`.
pub fn compute_beta(n: usize, d: usize, f: usize) -> Result<Rational> {
    beta_denominator(n, d, f).map(|b| Rational::new(BigInt::one(), b.into()))
}

fn beta_denominator(n: usize, d: usize, f: usize) -> Result<BigUint> {
    if n < 2 {
        return Err(Error::usage(format!("beta needs n >= 2, got {n}")));
    }
    if f == 0 {
        return Ok(BigUint::from(n));
    }
    let n_big = BigUint::from(n);
    Ok(&n_big * &n_big * (BigUint::one() + binomial(n, (d + 1) * f + 1)))
}

/// Smallest positive `t` with `factor^{floor(t / block_len)} < rhs`, found by
/// exact exponentiation (galloping, then bisection on the block count).
pub fn block_bound_search(factor: &Rational, block_len: &BigUint, rhs: &Rational) -> Result<BigUint> {
    if block_len.is_zero() {
        return Err(Error::usage("block length must be positive"));
    }
    if factor.is_negative() {
        return Err(Error::usage("contraction factor must be non-negative"));
    }
    let blocks = smallest_block_count(factor, rhs)?;
    Ok((block_len * blocks).max(BigUint::one()))
}

/// Smallest `k >= 0` with `factor^k < rhs`.
fn smallest_block_count(factor: &Rational, rhs: &Rational) -> Result<BigUint> {
    if *rhs > Rational::one() {
        return Ok(BigUint::zero());
    }
    if *factor >= Rational::one() || !rhs.is_positive() {
        return Err(Error::Domain(
            "the bound never drops below the threshold".into(),
        ));
    }
    let below = |k: u64| -> Result<bool> {
        let bits = (factor.numer().bits() + factor.denom().bits()).saturating_mul(k);
        if bits > MAX_EXACT_POWER_BITS {
            return Err(Error::Budget(format!(
                "exact power with ~{bits} bits exceeds the search budget"
            )));
        }
        Ok(num::pow(factor.clone(), k as usize) < *rhs)
    };
    let mut hi = 1u64;
    while !below(hi)? {
        hi = hi.checked_mul(2).ok_or_else(|| Error::Budget("block count overflow".into()))?;
    }
    let mut lo = hi / 2; // factor^lo >= rhs, or lo == 0
    if lo == 0 && below(0)? {
        return Ok(BigUint::zero());
    }
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if below(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(BigUint::from(hi))
}

/// Constants entering `t_end` for one graph and parameter set.
#[derive(Clone, Debug)]
pub struct PaperBounds {
    pub beta: Rational,
    /// `r = max_F |R_F|`.
    pub reduced_graphs: BigUint,
    /// `rn`, the number of rounds per contraction block.
    pub block_len: BigUint,
    /// Exact `t_end`, or why it could not be computed.
    pub t_end: std::result::Result<BigUint, String>,
    /// `log10(t_end)` estimate (useful when the exact value is out of reach).
    pub t_end_log10: f64,
}

pub fn paper_bounds(
    g: &Digraph,
    d: usize,
    f: usize,
    mu: &Rational,
    upper: &Rational,
    epsilon: &Rational,
) -> Result<PaperBounds> {
    let n = g.n();
    let beta = compute_beta(n, d, f)?;
    let r = count_reduced_graphs_max(g, d, f);
    let block_len = &r * BigUint::from(n);
    let t_end = compute_t_end(g, d, f, mu, upper, epsilon).map_err(|e| e.to_string());
    let t_end_log10 = t_end_log10_estimate(n, d, f, &block_len, mu, upper, epsilon)?;
    Ok(PaperBounds {
        beta,
        reduced_graphs: r,
        block_len,
        t_end,
        t_end_log10,
    })
}

/// The exact termination round `t_end`.
pub fn compute_t_end(
    g: &Digraph,
    d: usize,
    f: usize,
    mu: &Rational,
    upper: &Rational,
    epsilon: &Rational,
) -> Result<BigUint> {
    if !epsilon.is_positive() {
        return Err(Error::usage("epsilon must be positive"));
    }
    let magnitude = mu.abs().max(upper.abs());
    if magnitude.is_zero() {
        return Ok(BigUint::one());
    }
    let n = g.n();
    let rhs = epsilon / (Rational::from_integer(n.into()) * magnitude);
    let base = beta_denominator(n, d, f)?;
    let block_len = count_reduced_graphs_max(g, d, f) * BigUint::from(n);
    let blocks = block_count_for_power(&base, &block_len, &rhs)?;
    Ok((block_len * blocks).max(BigUint::one()))
}

/// Smallest `k >= 0` with `(1 - base^{-m})^k < rhs`.
pub(crate) fn block_count_for_power(base: &BigUint, m: &BigUint, rhs: &Rational) -> Result<BigUint> {
    if *rhs > Rational::one() {
        return Ok(BigUint::zero());
    }
    if *rhs == Rational::one() {
        return Ok(BigUint::one());
    }
    let m_u64 = m
        .to_u64()
        .ok_or_else(|| Error::Budget(format!("block length {m} is too large")))?;
    let power_bits = log10_biguint(base) / std::f64::consts::LOG10_2 * m_u64 as f64;
    if power_bits > MAX_ANALYTIC_BITS as f64 {
        return Err(Error::Budget(format!(
            "beta^(rn) has about {power_bits:.0} bits; t_end is beyond exact computation"
        )));
    }
    let power = num::pow(base.clone(), m_u64 as usize);
    if let Some(k) = analytic_block_count(&power, rhs) {
        return Ok(k);
    }
    let factor = Rational::one() - Rational::new(BigInt::one(), power.into());
    smallest_block_count(&factor, rhs)
}

/// Block count from interval bounds, or `None` if the bounds cannot separate
/// adjacent integers (only happens when `gamma = 1/power` is not tiny).
///
/// With `gamma = 1/power` and `L = ln(1/rhs) > 0`, the count is
/// `floor(L / -ln(1 - gamma)) + 1`. For `0 < gamma <= 1`,
/// `1/gamma - 1/2 - gamma/2 <= 1 / -ln(1 - gamma) <= 1/gamma - 1/2`
/// (the Gregory coefficients after the first two are negative and sum to -1/2).
fn analytic_block_count(power: &BigUint, rhs: &Rational) -> Option<BigUint> {
    if power <= &BigUint::one() {
        return None;
    }
    let inv_rhs = rhs.recip();
    let power_int = BigInt::from(power.clone());
    let mut precision = power.bits() + 64;
    for _ in 0..4 {
        let (l_lo, l_hi) = ln_bounds(&inv_rhs, precision);
        let scale = BigInt::one() << (precision + 1);
        let twice_minus_one: BigInt = (&power_int << 1u32) - 1;
        // upper: L_hi (2P - 1) / 2
        let q_hi = (&l_hi * &twice_minus_one).div_floor(&scale);
        // lower: L_lo (2P - 1) / 2 - L_hi / (2P)
        let q_lo = (&l_lo * &twice_minus_one * &power_int - &l_hi)
            .div_floor(&(&scale * &power_int));
        if q_lo == q_hi && !q_lo.is_negative() {
            return (q_lo + BigInt::one()).to_biguint();
        }
        precision *= 2;
    }
    None
}

/// `(lo, hi)` with `lo <= ln(x) * 2^precision <= hi`, for rational `x > 1`.
pub(crate) fn ln_bounds(x: &Rational, precision: u64) -> (BigInt, BigInt) {
    assert!(*x > Rational::one(), "ln_bounds needs x > 1");
    let guard = 32 + 64 - (precision.leading_zeros() as u64);
    let work = precision + guard;

    // x = 2^e * y with y in [1, 2)
    let mut e = x.numer().bits() as i64 - x.denom().bits() as i64;
    let two = Rational::from_integer(2.into());
    let mut y = x / num::pow(two.clone(), e.max(0) as usize) * num::pow(two.clone(), (-e).max(0) as usize);
    while y < Rational::one() {
        y *= &two;
        e -= 1;
    }
    while y >= two {
        y /= &two;
        e += 1;
    }
    debug_assert!(e >= 0);

    let third = Rational::new(1.into(), 3.into());
    let (ln2_lo, ln2_hi) = atanh_bounds(&third, work);
    let z = (&y - Rational::one()) / (&y + Rational::one());
    let (az_lo, az_hi) = atanh_bounds(&z, work);

    let e = BigInt::from(e);
    let lo = (&e * ln2_lo + az_lo) << 1u32;
    let hi = (&e * ln2_hi + az_hi) << 1u32;
    let unit: BigInt = BigInt::one() << guard;
    (lo.div_floor(&unit), (hi + &unit - BigInt::one()).div_floor(&unit))
}

/// `(lo, hi)` bracketing `atanh(z) * 2^work` for rational `0 <= z <= 1/3`.
fn atanh_bounds(z: &Rational, work: u64) -> (BigInt, BigInt) {
    let (a, b) = (z.numer().clone(), z.denom().clone());
    let a2 = &a * &a;
    let b2 = &b * &b;
    // power_k is a floor-rounded lower bound of z^(2k+1) 2^work; its error
    // stays below 1/(1 - z^2) < 2, so each term is low by less than 3.
    let mut power = (a << work).div_floor(&b);
    let mut sum = BigInt::zero();
    let mut k: u64 = 0;
    while !power.is_zero() {
        sum += power.div_floor(&BigInt::from(2 * k + 1));
        power = (power * &a2).div_floor(&b2);
        k += 1;
    }
    // tail below 2 / (1 - z^2) < 3
    let slack = BigInt::from(3 * (k + 1) + 3);
    (sum.clone(), sum + slack)
}

fn t_end_log10_estimate(
    n: usize,
    d: usize,
    f: usize,
    block_len: &BigUint,
    mu: &Rational,
    upper: &Rational,
    epsilon: &Rational,
) -> Result<f64> {
    let magnitude = mu.abs().max(upper.abs());
    if magnitude.is_zero() || !epsilon.is_positive() {
        return Ok(0.0);
    }
    let inv_rhs = Rational::from_integer(n.into()) * magnitude / epsilon;
    let ln_inv = log10_rational(&inv_rhs) * std::f64::consts::LN_10;
    if ln_inv <= 0.0 {
        return Ok(0.0);
    }
    let base = beta_denominator(n, d, f)?;
    let m = log10_biguint(block_len);
    // t ~ rn * ln(1/rhs) * B^(rn)
    Ok(m + ln_inv.log10() + 10f64.powf(m) * log10_biguint(&base))
}

fn log10_biguint(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits <= 1000 {
        x.to_f64().unwrap_or(f64::INFINITY).log10()
    } else {
        let shift = bits - 64;
        (x >> shift).to_f64().unwrap().log10() + shift as f64 * std::f64::consts::LOG10_2
    }
}

fn log10_rational(q: &Rational) -> f64 {
    log10_biguint(&q.numer().magnitude().clone()) - log10_biguint(&q.denom().magnitude().clone())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn beta_values() {
        assert_eq!(compute_beta(5, 1, 1).unwrap(), q(1, 275));
        assert_eq!(compute_beta(4, 1, 0).unwrap(), q(1, 4));
        assert_eq!(compute_beta(6, 2, 1).unwrap(), q(1, 576));
        assert!(compute_beta(1, 1, 1).is_err());
    }

    #[test]
    fn synthetic_search_instance() {
        // (3/4)^8 = 6561/65536 > 1/10 and (3/4)^9 < 1/10
        assert!(num::pow(q(3, 4), 8) > q(1, 10));
        assert!(num::pow(q(3, 4), 9) < q(1, 10));
        let t = block_bound_search(&q(3, 4), &BigUint::from(2u32), &q(1, 10)).unwrap();
        assert_eq!(t, BigUint::from(18u32));
    }

    #[test]
    fn search_edge_cases() {
        let two = BigUint::from(2u32);
        assert_eq!(block_bound_search(&q(3, 4), &two, &q(2, 1)).unwrap(), BigUint::one());
        // rhs = 1: one block needed
        assert_eq!(block_bound_search(&q(3, 4), &two, &q(1, 1)).unwrap(), two);
        assert!(block_bound_search(&q(1, 1), &two, &q(1, 2)).is_err());
        assert!(block_bound_search(&q(1, 2), &BigUint::zero(), &q(1, 2)).is_err());
    }

    #[test]
    fn zero_magnitude_bound() {
        let k4 = Digraph::complete(4).unwrap();
        let t = compute_t_end(&k4, 1, 1, &q(0, 1), &q(0, 1), &q(1, 100)).unwrap();
        assert_eq!(t, BigUint::one());
    }

    #[test]
    fn ln_bounds_bracket_f64() {
        for (n, d) in [(2, 1), (10, 1), (3, 2), (1_000_001, 1000), (7, 3)] {
            let x = q(n, d);
            let (lo, hi) = ln_bounds(&x, 80);
            let scale = 2f64.powi(80);
            let truth = (n as f64 / d as f64).ln();
            assert!(lo.to_f64().unwrap() / scale <= truth + 1e-12);
            assert!(hi.to_f64().unwrap() / scale >= truth - 1e-12);
            assert!(&hi - &lo < BigInt::from(1u64 << 20));
        }
    }

    #[test]
    fn analytic_route_matches_exact_search() {
        // gamma = 2^-10: both routes are feasible.
        let base = BigUint::from(2u32);
        let m = BigUint::from(10u32);
        let factor = Rational::one() - q(1, 1024);
        for rhs in [q(1, 10), q(1, 3), q(1, 1000), q(99, 100), q(7, 1_000_000)] {
            let exact = smallest_block_count(&factor, &rhs).unwrap();
            let power = num::pow(base.clone(), 10);
            if let Some(k) = analytic_block_count(&power, &rhs) {
                assert_eq!(k, exact, "rhs = {rhs}");
            }
            assert_eq!(block_count_for_power(&base, &m, &rhs).unwrap(), exact);
        }
    }

    #[test]
    fn k4_t_end_is_exact_and_monotone() {
        let k4 = Digraph::complete(4).unwrap();
        let mut last = None;
        for eps in [q(1, 10), q(1, 20), q(1, 40), q(1, 80), q(1, 160)] {
            let t = compute_t_end(&k4, 1, 1, &q(0, 1), &q(2, 1), &eps).unwrap();
            // t is a whole number of 1024-round blocks
            assert!((&t % BigUint::from(1024u32)).is_zero());
            if let Some(prev) = last {
                assert!(t >= prev);
            }
            last = Some(t);
        }
    }
}
