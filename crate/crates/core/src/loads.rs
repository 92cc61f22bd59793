//! Closed-form storage and communication loads, evaluated exactly.
//!
//! Everything here is exact rational arithmetic over big integers except the
//! file-complexity constants `A_q`, `B_q` and `beta` in [`Prop1Report`],
//! which involve irrational powers and are plain `f64`.

use std::f64::consts::{E, PI};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::combinatorics::binomial;
use crate::constructions::{p1_pda, p2_pda, ConstructionError};
use crate::pda::Pda;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LoadError {
    #[error("minimum storage number {tau} is below K - Q + 1 = {required}")]
    InsufficientTau { tau: usize, required: usize },
    #[error("array is not a Comp-PDA (some row has no star)")]
    NotComp,
    #[error("{0}")]
    OutOfRange(String),
    #[error("no grid family matches K = {k}, r = {r}: need r | K or (K - r) | K with quotient in [2, K-1]")]
    NoMatchingFamily { k: usize, r: usize },
    #[error(transparent)]
    Construction(#[from] ConstructionError),
}

fn rat(n: impl Into<BigInt>, d: impl Into<BigInt>) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn c(n: usize, k: usize) -> BigInt {
    binomial(n as i64, k as i64)
}

/// Binomial with signed arguments, zero outside the usual range.
fn cs(n: i64, k: i64) -> BigInt {
    binomial(n, k)
}

fn check_kq(k_nodes: usize, q_active: usize) -> Result<(), LoadError> {
    if k_nodes == 0 || q_active == 0 || q_active > k_nodes {
        return Err(LoadError::OutOfRange(format!(
            "need 1 <= Q <= K, got K = {k_nodes}, Q = {q_active}"
        )));
    }
    Ok(())
}

/// A storage/communication load pair.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LoadPair {
    /// Storage load: stored files per library file.
    pub r: BigRational,
    /// Communication load: expected shuffled bits over `N * D * V`.
    pub l: BigRational,
}

/// Loads achieved by the coded scheme built from `pda` when `q_active` of
/// the `K` nodes survive the map phase.
///
/// `L = (1 - T/(FK)) / C(K-1, Q-1) * sum_t theta_t * U(t)` with `U` as in
/// [`u_value`]. For a `g`-regular array this is the single term `t = g`.
pub fn achieved_load(pda: &Pda, q_active: usize) -> Result<LoadPair, LoadError> {
    let k = pda.k();
    check_kq(k, q_active)?;
    let stats = pda.stats();
    if !stats.is_comp {
        return Err(LoadError::NotComp);
    }
    let required = k - q_active + 1;
    if stats.tau < required {
        return Err(LoadError::InsufficientTau {
            tau: stats.tau,
            required,
        });
    }
    let kf = BigInt::from(k * pda.f());
    let factor = BigRational::one() - rat(pda.t(), kf);
    let mut sum = BigRational::zero();
    for (&t, theta) in &stats.theta {
        sum += theta * u_value(k, q_active, t)?;
    }
    let l = factor * sum / BigRational::from_integer(c(k - 1, q_active - 1));
    Ok(LoadPair {
        r: stats.storage_load,
        l,
    })
}

/// Optimal communication load at an integer storage load `r` in
/// `[K-Q+1, K]`.
pub fn optimal_load_int(
    k_nodes: usize,
    q_active: usize,
    r: usize,
) -> Result<BigRational, LoadError> {
    check_kq(k_nodes, q_active)?;
    let lo = k_nodes - q_active + 1;
    if r < lo || r > k_nodes {
        return Err(LoadError::OutOfRange(format!(
            "storage load {r} outside [{lo}, {k_nodes}]"
        )));
    }
    let (k, q, r) = (k_nodes as i64, q_active as i64, r as i64);
    let mut sum = BigRational::zero();
    for l in (r + q - k).max(1)..=r.min(q - 1) {
        sum += rat(cs(r, l) * cs(k - r - 1, q - l - 1), l);
    }
    let scale = BigRational::one() - rat(r, k);
    Ok(scale * sum / BigRational::from_integer(cs(k - 1, q - 1)))
}

/// The fundamental tradeoff at any rational `r` in `[K-Q+1, K]`: exact at
/// integers, linear between neighbouring integers otherwise.
pub fn optimal_load(
    k_nodes: usize,
    q_active: usize,
    r: &BigRational,
) -> Result<BigRational, LoadError> {
    check_kq(k_nodes, q_active)?;
    let lo = BigRational::from_integer((k_nodes - q_active + 1).into());
    let hi = BigRational::from_integer(k_nodes.into());
    if r < &lo || r > &hi {
        return Err(LoadError::OutOfRange(format!(
            "storage load {r} outside [{lo}, {hi}]"
        )));
    }
    if r.is_integer() {
        let ri = r.to_integer().to_usize().expect("in range");
        return optimal_load_int(k_nodes, q_active, ri);
    }
    let floor = r.floor();
    let below = floor.to_integer().to_usize().expect("in range");
    let frac = r - &floor;
    let a = optimal_load_int(k_nodes, q_active, below)?;
    let b = optimal_load_int(k_nodes, q_active, below + 1)?;
    Ok(&a + (b - &a) * frac)
}

/// The converse sequence
/// `Z(u) = sum_l (Q-l)/(Q l) C(u,l) C(K-u,Q-l)` for `u` in `[K-Q+1, K]`.
/// `Z(u) / C(K,Q)` equals the optimal load at `r = u`.
pub fn z_value(k_nodes: usize, q_active: usize, u: usize) -> Result<BigRational, LoadError> {
    check_kq(k_nodes, q_active)?;
    let lo = k_nodes - q_active + 1;
    if u < lo || u > k_nodes {
        return Err(LoadError::OutOfRange(format!(
            "u = {u} outside [{lo}, {k_nodes}]"
        )));
    }
    let (k, q, u) = (k_nodes as i64, q_active as i64, u as i64);
    let mut sum = BigRational::zero();
    for l in (u + q - k).max(1)..=u.min(q) {
        sum += rat((q - l) * cs(u, l) * cs(k - u, q - l), q * l);
    }
    Ok(sum)
}

/// `U(u) = C(K-u, Q-1) + sum_l C(u-1, l) C(K-u, Q-l-1) / l` for `u` in
/// `[1, K]`, with `l` from `max(1, u-K+Q-1)` to `min(u, Q) - 1`.
pub fn u_value(k_nodes: usize, q_active: usize, u: usize) -> Result<BigRational, LoadError> {
    check_kq(k_nodes, q_active)?;
    if u == 0 || u > k_nodes {
        return Err(LoadError::OutOfRange(format!(
            "u = {u} outside [1, {k_nodes}]"
        )));
    }
    let (k, q, u) = (k_nodes as i64, q_active as i64, u as i64);
    let mut sum = BigRational::from_integer(cs(k - u, q - 1));
    for l in 1.max(u - k + q - 1)..u.min(q) {
        sum += rat(cs(u - 1, l) * cs(k - u, q - l - 1), l);
    }
    Ok(sum)
}

/// `(u, Z(u))` for every `u` in `[K-Q+1, K]`.
pub fn z_sequence(k_nodes: usize, q_active: usize) -> Result<Vec<(usize, BigRational)>, LoadError> {
    check_kq(k_nodes, q_active)?;
    (k_nodes - q_active + 1..=k_nodes)
        .map(|u| Ok((u, z_value(k_nodes, q_active, u)?)))
        .collect()
}

/// Minimum row count for a Comp-PDA scheme at an optimal point: `C(K, r)`.
pub fn optimal_file_complexity(k_nodes: usize, r: usize) -> Result<BigInt, LoadError> {
    if r == 0 || r > k_nodes {
        return Err(LoadError::OutOfRange(format!(
            "r = {r} outside [1, {k_nodes}]"
        )));
    }
    Ok(c(k_nodes, r))
}

/// Row count of the grid-family scheme at storage load `r`:
/// `(r/K) * (K / min(r, K-r))^min(r, K-r)`.
pub fn grid_family_file_complexity(k_nodes: usize, r: usize) -> Result<BigRational, LoadError> {
    if r == 0 || r >= k_nodes {
        return Err(LoadError::OutOfRange(format!(
            "r = {r} outside [1, {}]",
            k_nodes.saturating_sub(1)
        )));
    }
    let mn = r.min(k_nodes - r);
    let base = rat(k_nodes, mn);
    let mut pow = BigRational::one();
    for _ in 0..mn {
        pow *= &base;
    }
    Ok(rat(r, k_nodes) * pow)
}

/// Optimal tradeoff at the integer storage loads of a `(K, Q)` system.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TradeoffCurve {
    pub k_nodes: usize,
    pub q_active: usize,
    /// `(r, L*(r))` for `r` in `[K-Q+1, K]`, ascending in `r`.
    pub points: Vec<(usize, BigRational)>,
}

impl TradeoffCurve {
    pub fn new(k_nodes: usize, q_active: usize) -> Result<Self, LoadError> {
        check_kq(k_nodes, q_active)?;
        let points = (k_nodes - q_active + 1..=k_nodes)
            .map(|r| Ok((r, optimal_load_int(k_nodes, q_active, r)?)))
            .collect::<Result<_, LoadError>>()?;
        Ok(TradeoffCurve {
            k_nodes,
            q_active,
            points,
        })
    }

    /// Piecewise-linear evaluation between the integer points.
    pub fn eval(&self, r: &BigRational) -> Result<BigRational, LoadError> {
        let lo = BigRational::from_integer(self.points[0].0.into());
        let hi = BigRational::from_integer(self.k_nodes.into());
        if r < &lo || r > &hi {
            return Err(LoadError::OutOfRange(format!(
                "storage load {r} outside [{lo}, {hi}]"
            )));
        }
        let floor = r.floor().to_integer().to_usize().expect("in range");
        let idx = floor - self.points[0].0;
        let frac = r - r.floor();
        if frac.is_zero() {
            return Ok(self.points[idx].1.clone());
        }
        let (a, b) = (&self.points[idx].1, &self.points[idx + 1].1);
        Ok(a + (b - a) * frac)
    }
}

/// Which grid family realizes a given `(K, r)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GridFamily {
    /// `r | K`: first family with `q = K / r`, `m = r`.
    P1,
    /// `(K - r) | K`: second family with `q = K / (K - r)`, `m = K - r`.
    P2,
}

/// Family choice for storage load `r`: `(family, q, m)`. The first family
/// wins when both apply.
pub fn grid_family_for(k_nodes: usize, r: usize) -> Result<(GridFamily, usize, usize), LoadError> {
    let none = LoadError::NoMatchingFamily { k: k_nodes, r };
    if r == 0 || r >= k_nodes {
        return Err(none);
    }
    let ok_q = |q: usize| q >= 2 && q < k_nodes;
    if k_nodes.is_multiple_of(r) && ok_q(k_nodes / r) {
        return Ok((GridFamily::P1, k_nodes / r, r));
    }
    let rest = k_nodes - r;
    if k_nodes.is_multiple_of(rest) && ok_q(k_nodes / rest) {
        return Ok((GridFamily::P2, k_nodes / rest, rest));
    }
    Err(none)
}

/// Build the grid-family array for `(K, r)`.
pub fn grid_family_pda(k_nodes: usize, r: usize) -> Result<Pda, LoadError> {
    let (family, q, m) = grid_family_for(k_nodes, r)?;
    Ok(match family {
        GridFamily::P1 => p1_pda(q, m)?,
        GridFamily::P2 => p2_pda(q, m)?,
    })
}

/// How close a grid-family scheme is to the optimum, in load and file
/// complexity.
#[derive(Clone, Debug, PartialEq)]
pub struct Prop1Report {
    pub k_nodes: usize,
    pub r: usize,
    pub q_active: usize,
    pub family: GridFamily,
    /// The family's `q`; `r / K = c` is `1/q` or `(q-1)/q`.
    pub q_family: usize,
    pub c: BigRational,
    pub l_achieved: BigRational,
    pub l_optimal: BigRational,
    pub l_ratio: BigRational,
    /// `r * (l_ratio - 1)`.
    pub alpha: BigRational,
    pub f_construction: BigInt,
    pub f_optimal: BigInt,
    pub f_ratio: BigRational,
    /// `sqrt(q-1) / (c q)`.
    pub a_q: f64,
    /// `(q / (q-1))^((q-1)/q)`.
    pub b_q: f64,
    /// `f_ratio / (a_q * sqrt(K) * b_q^-K)`.
    pub beta: f64,
    pub alpha_in_range: bool,
    pub beta_in_range: bool,
}

/// Upper end of the `beta` range: `sqrt(2 pi) e^2`.
pub fn beta_bound() -> f64 {
    (2.0 * PI).sqrt() * E * E
}

/// Compare the grid-family scheme for `(K, r)` against the optimum for a
/// `(K, Q)` system. Builds the family's array.
pub fn prop1_check(k_nodes: usize, r: usize, q_active: usize) -> Result<Prop1Report, LoadError> {
    prop1_precheck(k_nodes, r, q_active)?;
    let pda = grid_family_pda(k_nodes, r)?;
    prop1_report(&pda, r, q_active)
}

fn prop1_precheck(k_nodes: usize, r: usize, q_active: usize) -> Result<(), LoadError> {
    check_kq(k_nodes, q_active)?;
    if r + q_active < k_nodes + 1 || r + 1 > k_nodes {
        return Err(LoadError::OutOfRange(format!(
            "need K - Q + 1 <= r <= K - 1, got K = {k_nodes}, Q = {q_active}, r = {r}"
        )));
    }
    Ok(())
}

/// [`prop1_check`] with a prebuilt family array (from [`grid_family_pda`]).
pub fn prop1_report(pda: &Pda, r: usize, q_active: usize) -> Result<Prop1Report, LoadError> {
    let k_nodes = pda.k();
    prop1_precheck(k_nodes, r, q_active)?;
    let (family, q_family, _) = grid_family_for(k_nodes, r)?;
    let c = rat(r, k_nodes);
    let achieved = achieved_load(pda, q_active)?;
    if achieved.r != BigRational::from_integer(r.into()) {
        return Err(LoadError::OutOfRange(format!(
            "array has storage load {}, expected {r}",
            achieved.r
        )));
    }
    let l_optimal = optimal_load_int(k_nodes, q_active, r)?;
    let l_ratio = &achieved.l / &l_optimal;
    let alpha = (&l_ratio - BigRational::one()) * BigRational::from_integer(r.into());
    let f_construction = BigInt::from(pda.f());
    let f_optimal = binomial(k_nodes as i64, r as i64);
    let f_ratio = BigRational::new(f_construction.clone(), f_optimal.clone());

    let qf = q_family as f64;
    let cf = c.to_f64().expect("finite");
    let a_q = (qf - 1.0).sqrt() / (cf * qf);
    let b_q = (qf / (qf - 1.0)).powf((qf - 1.0) / qf);
    let scale = a_q * (k_nodes as f64).sqrt() * b_q.powi(-(k_nodes as i32));
    let beta = f_ratio.to_f64().expect("finite") / scale;

    let alpha_in_range = !alpha.is_negative() && alpha <= BigRational::from_integer(2.into());
    let beta_in_range = (0.0..=beta_bound()).contains(&beta);
    Ok(Prop1Report {
        k_nodes,
        r,
        q_active,
        family,
        q_family,
        c,
        l_achieved: achieved.l,
        l_optimal,
        l_ratio,
        alpha,
        f_construction,
        f_optimal,
        f_ratio,
        a_q,
        b_q,
        beta,
        alpha_in_range,
        beta_in_range,
    })
}
