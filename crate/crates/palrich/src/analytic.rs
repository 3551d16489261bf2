//! The analytic model for distinct palindromic factors of random words.
//!
//! Everything here is a closed form or a one-dimensional numeric procedure:
//! palindrome counts and expected occurrence counts per length, the even/odd
//! crossover points `p_e` and `p_o` where the palindrome-count cap meets the
//! expected occurrences, the upper-bound coefficient, the oscillation kernel
//! `f(x) = x(1 - e^{-1/x²})` with its lattice sum `F(k, ε)`, per-length
//! main-term predictions, the predicted `E(n,k)/√n` ratio, and its
//! liminf/limsup constants over one period of the oscillation.
//!
//! Conventions: `ε(n, k)` is the signed distance from `p_o(n, k)` up to the
//! nearest integer, i.e. `p_o + ε ∈ ℤ` with `ε ∈ [-1/2, 1/2)`, so growing
//! `n` at a fixed target length decreases ε. Per-length offsets are
//! `ε_m = m/2 - p_e` for even `m` and `ε_m = (m-1)/2 - p_o` for odd `m`.

use num_bigint::BigUint;

use crate::error::{Error, Result};

/// Number of distinct k-ary palindromes of length m: `k^⌈m/2⌉`.
pub fn pal_count(k: usize, m: usize) -> BigUint {
    BigUint::from(k).pow(m.div_ceil(2) as u32)
}

/// `k^⌈m/2⌉` as a float (∞ if it overflows the exponent range).
pub fn pal_count_f64(k: usize, m: usize) -> f64 {
    (k as f64).powi(m.div_ceil(2) as i32)
}

/// Expected number of palindromic factor occurrences (not necessarily
/// distinct) of length m in a random word of length n: `(n-m+1)/k^⌊m/2⌋`.
pub fn expected_occurrences(n: u64, k: usize, m: usize) -> Result<f64> {
    if m == 0 || m as u64 > n {
        return Err(Error::invalid(format!(
            "occurrence expectation needs 1 <= m <= n, got m = {m}, n = {n}"
        )));
    }
    Ok((n - m as u64 + 1) as f64 * (k as f64).powi(-((m / 2) as i32)))
}

/// Closed form of the tail sum `Σ_{i=c}^∞ (i+1)/k^i = ((c+1)k - c) / (k^{c-1}(k-1)²)`.
pub fn tail_sum(c: u32, k: usize) -> f64 {
    let kf = k as f64;
    ((c as f64 + 1.0) * kf - c as f64) / (kf.powi(c as i32 - 1) * (kf - 1.0).powi(2))
}

fn solve_crossover(n: f64, k: usize, odd: bool) -> Result<f64> {
    if k < 2 {
        return Err(Error::AlphabetTooSmall { min: 2, got: k });
    }
    if !(n >= k as f64) {
        return Err(Error::invalid(format!(
            "crossover point requires n >= k, got n = {n}, k = {k}"
        )));
    }
    let ln_k = (k as f64).ln();
    // even: 2p·ln k = ln(n - 2p + 1);  odd: (2p+1)·ln k = ln(n - 2p)
    let shift = if odd { 1.0 } else { 0.0 };
    let offset = if odd { 0.0 } else { 1.0 };
    let g = |p: f64| (2.0 * p + shift) * ln_k - (n - 2.0 * p + offset).ln();
    let dg = |p: f64| 2.0 * ln_k + 2.0 / (n - 2.0 * p + offset);

    let mut lo = 0.0f64;
    let mut hi = (n.ln() / ln_k / 2.0 + 1.0).min((n + offset) / 2.0 - 1e-9);
    if g(lo) > 0.0 {
        return Err(Error::invalid(format!(
            "no positive crossover root for n = {n}, k = {k}"
        )));
    }
    let mut p = n.ln() / ln_k / 2.0;
    for _ in 0..200 {
        let gp = g(p);
        if gp > 0.0 {
            hi = p;
        } else {
            lo = p;
        }
        let step = gp / dg(p);
        let mut next = p - step;
        if !(next > lo && next < hi) {
            next = 0.5 * (lo + hi); // damped fallback: bisect the bracket
        }
        if (next - p).abs() < 1e-13 {
            p = next;
            break;
        }
        p = next;
    }
    Ok(p)
}

/// Even crossover point: the root of `k^{2p} = n - 2p + 1`.
pub fn intersection_pe(n: f64, k: usize) -> Result<f64> {
    solve_crossover(n, k, false)
}

/// Odd crossover point: the root of `k^{2p+1} = n - 2p`; always `p_e - 1/2`.
pub fn intersection_po(n: f64, k: usize) -> Result<f64> {
    solve_crossover(n, k, true)
}

/// The √n coefficient of the min-of-caps upper bound on `E(n,k)`:
/// `(√k(k^{1-{p_o}} + k^{{p_o}}) + k^{1-{p_e}} + k^{{p_e}}) / (k-1)`.
pub fn upper_bound_ratio(n: f64, k: usize) -> Result<f64> {
    let pe = intersection_pe(n, k)?;
    let po = intersection_po(n, k)?;
    let kf = k as f64;
    let fe = pe.fract();
    let fo = po.fract();
    Ok((kf.sqrt() * (kf.powf(1.0 - fo) + kf.powf(fo)) + kf.powf(1.0 - fe) + kf.powf(fe))
        / (kf - 1.0))
}

/// The oscillation kernel `f(x) = x(1 - e^{-1/x²})`, stable at both ends:
/// `expm1` keeps full precision where the naive form would cancel (for
/// x ≥ 10³ it agrees with the alternating expansion `1/x - 1/(2x³) + ...`
/// within the expansion's own remainder bracket).
pub fn f_osc(x: f64) -> Result<f64> {
    if !(x > 0.0) {
        return Err(Error::invalid(format!("f(x) needs x > 0, got {x}")));
    }
    Ok(f_osc_raw(x))
}

#[inline]
fn f_osc_raw(x: f64) -> f64 {
    -x * (-1.0 / (x * x)).exp_m1()
}

/// Golden-section maximization of a unimodal function, to an argument
/// tolerance.
fn golden_max(g: impl Fn(f64) -> f64, mut a: f64, mut b: f64, xtol: f64) -> (f64, f64) {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut gc = g(c);
    let mut gd = g(d);
    while b - a > xtol {
        if gc > gd {
            b = d;
            d = c;
            gd = gc;
            c = b - inv_phi * (b - a);
            gc = g(c);
        } else {
            a = c;
            c = d;
            gc = gd;
            d = a + inv_phi * (b - a);
            gd = g(d);
        }
    }
    let x = 0.5 * (a + b);
    (g(x), x)
}

/// Maximum of the kernel and where it sits: `(χ, x₀) ≈ (0.6382, 0.8921)`.
pub fn chi_x0() -> (f64, f64) {
    golden_max(f_osc_raw, 0.3, 1.6, 1e-10)
}

/// The period-1 lattice sum `F(k, ε) = Σ_{i=-∞}^{∞} f(k^{ε+i})`, truncated
/// once both geometric tails drop below 1e-15, accumulated with compensated
/// summation (the binary-alphabet extrema differ by only ~1.3e-3).
pub fn f_series(k: usize, eps: f64) -> f64 {
    debug_assert!(k >= 2);
    let ln_k = (k as f64).ln();
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    let mut add = |t: f64| {
        let y = t - comp;
        let s = sum + y;
        comp = (s - sum) - y;
        sum = s;
    };
    let mut i = 0i64;
    loop {
        let t = f_osc_raw(((eps + i as f64) * ln_k).exp());
        add(t);
        if t < 1e-15 && i > 0 {
            break;
        }
        i += 1;
    }
    let mut i = -1i64;
    loop {
        let t = f_osc_raw(((eps + i as f64) * ln_k).exp());
        add(t);
        if t < 1e-15 {
            break;
        }
        i -= 1;
    }
    sum
}

/// Extremum report for a period-1 function of ε.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Extrema {
    pub max: f64,
    pub argmax: f64,
    pub min: f64,
    pub argmin: f64,
}

fn wrap_eps(eps: f64) -> f64 {
    let mut e = eps - eps.round();
    if e >= 0.5 {
        e -= 1.0;
    }
    if e < -0.5 {
        e += 1.0;
    }
    e
}

/// Dense grid over one period plus golden-section refinement. The grid step
/// is 1e-4 and refinement runs to 1e-10 in the argument; fine enough for the
/// narrow limsup peaks of large alphabets and the tiny binary oscillation.
fn periodic_extrema(g: impl Fn(f64) -> f64 + Copy) -> Extrema {
    const STEP: f64 = 1e-4;
    let steps = (1.0 / STEP) as usize;
    let mut best_max = (f64::NEG_INFINITY, 0.0);
    let mut best_min = (f64::INFINITY, 0.0);
    for j in 0..steps {
        let e = -0.5 + j as f64 * STEP;
        let v = g(e);
        if v > best_max.0 {
            best_max = (v, e);
        }
        if v < best_min.0 {
            best_min = (v, e);
        }
    }
    let (max, argmax) = golden_max(g, best_max.1 - STEP, best_max.1 + STEP, 1e-10);
    let (neg_min, argmin) = golden_max(|e| -g(e), best_min.1 - STEP, best_min.1 + STEP, 1e-10);
    Extrema {
        max,
        argmax: wrap_eps(argmax),
        min: -neg_min,
        argmin: wrap_eps(argmin),
    }
}

/// Extrema of `F(k, ·)` over one period.
pub fn f_series_extrema(k: usize) -> Extrema {
    periodic_extrema(move |e| f_series(k, e))
}

/// The signed distance from `p_o(n,k)` up to the nearest integer:
/// `p_o + ε ∈ ℤ`, `ε ∈ [-1/2, 1/2)`.
pub fn epsilon(n: f64, k: usize) -> Result<f64> {
    let po = intersection_po(n, k)?;
    Ok(wrap_eps(-po))
}

/// Which parity regime a palindrome length falls in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
}

/// Main-term prediction for the expected number of distinct palindromic
/// factors of one length.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PredictionPoint {
    pub m: usize,
    pub parity: Parity,
    /// Offset of m from the crossover: `m = 2(p_e + ε)` or `2(p_o + ε) + 1`.
    pub epsilon: f64,
    /// Main term of `E(n, k, m)`: `f(k^ε)·√n` (even) or `f(k^ε)·√(kn)` (odd).
    pub expected_distinct: f64,
    /// `(n - m + 1)/k^⌊m/2⌋`.
    pub expected_occurrences: f64,
    /// `Pal(k, m) = k^⌈m/2⌉`.
    pub cap: f64,
}

/// Offsets beyond this window are reported as a flat 0 prediction: that far
/// from the crossover the expected count is o(√n) and the main term is
/// meaningless noise.
pub const EPSILON_WINDOW: f64 = 6.0;

/// Per-length main-term prediction of the expected number of distinct
/// palindromic factors of length `m` in a random k-ary word of length `n`.
pub fn expected_distinct(n: u64, k: usize, m: usize) -> Result<PredictionPoint> {
    if m == 0 || m as u64 > n {
        return Err(Error::invalid(format!(
            "per-length prediction needs 1 <= m <= n, got m = {m}, n = {n}"
        )));
    }
    let nf = n as f64;
    let kf = k as f64;
    let (parity, eps) = if m % 2 == 0 {
        (Parity::Even, m as f64 / 2.0 - intersection_pe(nf, k)?)
    } else {
        (Parity::Odd, (m as f64 - 1.0) / 2.0 - intersection_po(nf, k)?)
    };
    let scale = match parity {
        Parity::Even => nf.sqrt(),
        Parity::Odd => (kf * nf).sqrt(),
    };
    let value = if eps.abs() > EPSILON_WINDOW {
        0.0
    } else {
        f_osc_raw((eps * kf.ln()).exp()) * scale
    };
    Ok(PredictionPoint {
        m,
        parity,
        epsilon: eps,
        expected_distinct: value,
        expected_occurrences: expected_occurrences(n, k, m)?,
        cap: pal_count_f64(k, m),
    })
}

/// The guaranteed lower-bound coefficient derived from avoiding `a^m`:
/// `g(k, ε) = k^ε (1 - e^{-(k-1)/k^{1+2ε}})`.
pub fn lower_bound_coefficient(k: usize, eps: f64) -> f64 {
    let kf = k as f64;
    let x = (eps * kf.ln()).exp();
    -x * (-(kf - 1.0) * kf.powf(-(1.0 + 2.0 * eps))).exp_m1()
}

fn ratio_at(k: usize, eps: f64) -> f64 {
    f_series(k, eps) * (k as f64).sqrt() + f_series(k, eps + 0.5)
}

/// The model's prediction for `E(n,k)/√n`:
/// `F(k, ε)√k + F(k, ε + 1/2)` at `ε = ε(n, k)`.
///
/// ```
/// let ratio = palrich::analytic::predicted_ratio(1238545800.0, 2).unwrap();
/// assert!((ratio - 6.1737).abs() < 5e-4);
/// ```
pub fn predicted_ratio(n: f64, k: usize) -> Result<f64> {
    let eps = epsilon(n, k)?;
    Ok(ratio_at(k, eps))
}

/// liminf/limsup of `E(n,k)/√n` and the ε offsets where they are attained.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RatioConstants {
    pub c_low: f64,
    pub eps_low: f64,
    pub c_high: f64,
    pub eps_high: f64,
}

/// Extremizes the predicted ratio over one period of ε.
pub fn ratio_constants(k: usize) -> RatioConstants {
    let ex = periodic_extrema(move |e| ratio_at(k, e));
    RatioConstants {
        c_low: ex.min,
        eps_low: ex.argmin,
        c_high: ex.max,
        eps_high: ex.argmax,
    }
}

/// One row of the large-alphabet trend check.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LimitPoint {
    pub k: usize,
    pub c_low: f64,
    pub c_high: f64,
    pub c_high_over_sqrt_k: f64,
}

/// Evaluates the liminf/limsup constants at k = 10², 10³, 10⁴. As k grows,
/// `c_low → 3 - 1/e` and `c_high/√k → χ`.
pub fn limit_constants() -> Vec<LimitPoint> {
    [100usize, 1_000, 10_000]
        .iter()
        .map(|&k| {
            let c = ratio_constants(k);
            LimitPoint {
                k,
                c_low: c.c_low,
                c_high: c.c_high,
                c_high_over_sqrt_k: c.c_high / (k as f64).sqrt(),
            }
        })
        .collect()
}

/// `F(k, 0) - F(k, 1/2)` and, for `k ≥ 4`, the closed-form lower bound that
/// certifies the difference positive (so `F(k, ·)` has no period 1/2).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Separation {
    pub difference: f64,
    pub lower_bound: Option<f64>,
}

pub fn separation_check(k: usize) -> Separation {
    let difference = f_series(k, 0.0) - f_series(k, 0.5);
    let lower_bound = (k >= 4).then(|| {
        let kf = k as f64;
        1.0 - (-1.0f64).exp() + 2.0 * (1.0 - kf.sqrt()) / (kf - 1.0)
            + (kf.powf(1.5) - 1.0) / (2.0 * (kf.powi(3) - 1.0))
            - kf.powf(2.5) / (6.0 * (kf.powi(5) - 1.0))
            + 1.0 / (kf.sqrt() * kf.exp())
    });
    Separation {
        difference,
        lower_bound,
    }
}
