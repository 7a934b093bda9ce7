//! Totally positive windows of finite type.
//!
//! A window is given by the factorization of the reciprocal of its two-sided
//! Laplace transform,
//!
//! ```text
//! 1 / L[g](s) = C e^{δs} Π_{ν=1}^{M} (1 + δ_ν s),       C > 0, δ_ν ≠ 0,
//! ```
//!
//! so that `g` is the (scaled, shifted) M-fold convolution of normalized
//! one-sided exponentials: `δ_ν > 0` contributes a factor supported on
//! `t ≥ 0`, `δ_ν < 0` one supported on `t < 0`. Evaluation expands
//! `1/Π(s − p_ν)` into (confluent, for repeated `δ_ν`) partial fractions, so
//! each pole contributes a one-sided `u^l e^{pu}` term. With `m` positive and
//! `n` negative factors, `g` vanishes on `t < δ` when `n = 0` and on `t > δ`
//! when `m = 0`.
//!
//! Named examples: `C = 1/2, deltas = [1, −1]` is the two-sided exponential
//! `e^{−|t|}`; `C = 1, deltas = [1]` is the one-sided exponential
//! `e^{−t} χ_{t≥0}`; repeated entries such as `[1, 1]` yield truncated power
//! windows `t e^{−t} χ_{t≥0}`.

use num_complex::Complex64;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Values at or below this threshold are treated as exactly zero by
/// [`TpWindow::evaluate`], so downstream bandedness decisions are crisp.
pub const EVAL_CUTOFF: f64 = 1e-300;

/// One partial-fraction term `coeff · u^power · e^{pole·u}`, supported on
/// `u ≥ 0` (`right = false`) or `u < 0` (`right = true`).
#[derive(Debug, Clone, PartialEq)]
struct PoleTerm {
    pole: f64,
    power: i32,
    coeff: f64,
    right: bool,
}

/// A totally positive window of finite type, held as its Laplace
/// factorization parameters plus the precomputed partial-fraction expansion.
#[derive(Debug, Clone, PartialEq)]
pub struct TpWindow {
    scale_c: f64,
    shift: f64,
    deltas: Vec<f64>,
    m: usize,
    n: usize,
    terms: Vec<PoleTerm>,
}

impl TpWindow {
    /// Builds a window from the factorization parameters `(C, δ, δ_1..δ_M)`.
    pub fn new(scale_c: f64, shift: f64, deltas: &[f64]) -> Result<Self> {
        if !scale_c.is_finite() || scale_c <= 0.0 {
            return Err(Error::NonpositiveScale(scale_c));
        }
        if !shift.is_finite() {
            return Err(Error::NonFiniteParam(shift));
        }
        if deltas.is_empty() {
            return Err(Error::EmptyFactorList);
        }
        for &d in deltas {
            if !d.is_finite() {
                return Err(Error::NonFiniteParam(d));
            }
            if d == 0.0 {
                return Err(Error::ZeroDelta);
            }
        }
        let m = deltas.iter().filter(|&&d| d > 0.0).count();
        let n = deltas.len() - m;
        let terms = partial_fraction_terms(scale_c, deltas);
        Ok(TpWindow {
            scale_c,
            shift,
            deltas: deltas.to_vec(),
            m,
            n,
            terms,
        })
    }

    pub fn scale_c(&self) -> f64 {
        self.scale_c
    }

    pub fn shift(&self) -> f64 {
        self.shift
    }

    pub fn deltas(&self) -> &[f64] {
        &self.deltas
    }

    /// Number of factors `M = m + n`.
    pub fn order(&self) -> usize {
        self.deltas.len()
    }

    /// Counts `(m, n)` of positive and negative factors.
    pub fn type_counts(&self) -> (usize, usize) {
        (self.m, self.n)
    }

    /// Evaluates `g(t)` from the partial-fraction expansion.
    ///
    /// Values at or below [`EVAL_CUTOFF`] (including rounding-noise
    /// negatives) collapse to exactly `0.0`, and the support half-lines of
    /// one-sided windows are structural zeros.
    pub fn evaluate(&self, t: f64) -> f64 {
        let u = t - self.shift;
        if self.n == 0 && u < 0.0 {
            return 0.0;
        }
        if self.m == 0 && u > 0.0 {
            return 0.0;
        }
        let mut v = 0.0;
        for term in &self.terms {
            let live = if term.right { u < 0.0 } else { u >= 0.0 };
            if live {
                v += term.coeff * u.powi(term.power) * (term.pole * u).exp();
            }
        }
        if v <= EVAL_CUTOFF {
            0.0
        } else {
            v
        }
    }

    /// Fourier transform `ĝ(ξ) = e^{−2πiδξ} / (C Π_ν (1 + 2πi δ_ν ξ))`.
    pub fn fourier(&self, xi: f64) -> Complex64 {
        let mut den = Complex64::new(self.scale_c, 0.0);
        for &d in &self.deltas {
            den *= Complex64::new(1.0, 2.0 * std::f64::consts::PI * d * xi);
        }
        let num = Complex64::from_polar(1.0, -2.0 * std::f64::consts::PI * self.shift * xi);
        num / den
    }

    /// Interval `[lo, hi]` outside which `g(t) ≤ tol` is guaranteed, from the
    /// per-side envelope `Σ |coeff| u^power e^{pole·u}` of the one-sided
    /// terms. One-sided windows get their exact support edge on the
    /// vanishing side.
    pub fn support_radius(&self, tol: f64) -> (f64, f64) {
        let hi = if self.m == 0 {
            self.shift
        } else {
            self.shift + envelope_extent(&self.terms, false, tol)
        };
        let lo = if self.n == 0 {
            self.shift
        } else {
            self.shift - envelope_extent(&self.terms, true, tol)
        };
        (lo, hi)
    }

    /// The reflected window `g(−t)`: negated factors and shift, so `m` and
    /// `n` swap roles.
    pub fn reflect(&self) -> TpWindow {
        let deltas: Vec<f64> = self.deltas.iter().map(|d| -d).collect();
        TpWindow::new(self.scale_c, -self.shift, &deltas)
            .expect("reflection preserves validity")
    }

    /// The autocorrelation `(g ⋆ g)(τ) = ∫ g(t) g(t−τ) dt`, again totally
    /// positive of finite type: scale `C²`, zero shift, factors
    /// `deltas ∪ (−deltas)`. Gives inner products
    /// `⟨g(·−y_k), g(·−y_l)⟩ = (g ⋆ g)(y_k − y_l)` in closed form.
    pub fn autocorrelation(&self) -> TpWindow {
        let mut deltas = self.deltas.clone();
        deltas.extend(self.deltas.iter().map(|d| -d));
        TpWindow::new(self.scale_c * self.scale_c, 0.0, &deltas)
            .expect("autocorrelation preserves validity")
    }

    /// Crude uniform bound: the maximum of `g` over a dense grid on its
    /// effective support.
    pub fn sup_norm_estimate(&self) -> f64 {
        let (lo, hi) = self.support_radius(1e-12);
        let steps = 4096;
        let mut best = 0.0f64;
        for i in 0..=steps {
            let t = lo + (hi - lo) * i as f64 / steps as f64;
            best = best.max(self.evaluate(t));
        }
        best
    }
}

/// Smallest `u ≥ u0` with envelope `≤ tol`, by doubling then bisection. The
/// envelope is monotone decreasing past `u0 = max power/|pole|`.
fn envelope_extent(terms: &[PoleTerm], right: bool, tol: f64) -> f64 {
    let side: Vec<&PoleTerm> = terms.iter().filter(|t| t.right == right).collect();
    if side.is_empty() {
        return 0.0;
    }
    // For the right-side (u < 0) terms evaluate the envelope at −u.
    let env = |u: f64| -> f64 {
        side.iter()
            .map(|t| {
                let uu = if right { -u } else { u };
                t.coeff.abs() * uu.abs().powi(t.power) * (t.pole * uu).exp()
            })
            .sum()
    };
    let mut u0 = 0.0f64;
    for t in &side {
        u0 = u0.max(t.power as f64 / t.pole.abs());
    }
    let mut hi = u0 + 1.0;
    while env(hi) > tol {
        hi *= 2.0;
        if hi > 1e12 {
            return hi;
        }
    }
    let mut lo = u0;
    if env(lo) <= tol {
        return lo;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if env(mid) > tol {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    hi
}

/// Expands `(1/C) Π_ν 1/(1 + δ_ν s)` into one-sided time-domain terms.
///
/// Poles are `p = −1/δ` with multiplicity the number of equal `δ`s; the
/// coefficient of `1/(s−p)^l` is the `(μ_p − l)`-th Taylor coefficient of
/// `Π_{q≠p} (s−q)^{−μ_q}` at `p`, computed by the logarithmic-derivative
/// recursion. Left poles (δ > 0) invert to `u^{l−1}e^{pu}/(l−1)! · χ_{u≥0}`,
/// right poles to `−u^{l−1}e^{pu}/(l−1)! · χ_{u<0}`.
fn partial_fraction_terms(scale_c: f64, deltas: &[f64]) -> Vec<PoleTerm> {
    let mut prefactor = 1.0 / scale_c;
    for &d in deltas {
        prefactor /= d;
    }

    // Group exactly equal deltas into poles with multiplicity.
    let mut sorted = deltas.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut groups: Vec<(f64, usize)> = Vec::new();
    for &d in &sorted {
        match groups.last_mut() {
            Some((v, mult)) if *v == d => *mult += 1,
            _ => groups.push((d, 1)),
        }
    }
    let poles: Vec<(f64, usize, bool)> = groups
        .iter()
        .map(|&(d, mult)| (-1.0 / d, mult, d < 0.0))
        .collect();

    let mut terms = Vec::new();
    for (i, &(p, mult, right)) in poles.iter().enumerate() {
        // derivs[k] = d^k/ds^k Π_{q≠p} (s−q)^{−μ_q} at s = p.
        let mut derivs = vec![0.0f64; mult];
        let mut f0 = 1.0;
        for (j, &(q, mq, _)) in poles.iter().enumerate() {
            if j != i {
                f0 /= (p - q).powi(mq as i32);
            }
        }
        derivs[0] = f0;
        let mut g1: Vec<f64> = Vec::with_capacity(mult.saturating_sub(1));
        for ord in 0..mult.saturating_sub(1) {
            let mut s = 0.0;
            for (j, &(q, mq, _)) in poles.iter().enumerate() {
                if j != i {
                    let sign = if ord % 2 == 0 { 1.0 } else { -1.0 };
                    s -= mq as f64 * sign * factorial(ord) / (p - q).powi(ord as i32 + 1);
                }
            }
            g1.push(s);
        }
        for k in 1..mult {
            let mut acc = 0.0;
            for i2 in 0..k {
                acc += binomial(k - 1, i2) * g1[i2] * derivs[k - 1 - i2];
            }
            derivs[k] = acc;
        }
        for l in 1..=mult {
            let a = derivs[mult - l] / factorial(mult - l);
            if a == 0.0 {
                continue;
            }
            let sign = if right { -1.0 } else { 1.0 };
            terms.push(PoleTerm {
                pole: p,
                power: (l - 1) as i32,
                coeff: sign * prefactor * a / factorial(l - 1),
                right,
            });
        }
    }
    terms
}

fn factorial(k: usize) -> f64 {
    (1..=k).map(|i| i as f64).product()
}

fn binomial(n: usize, k: usize) -> f64 {
    factorial(n) / (factorial(k) * factorial(n - k))
}

#[derive(Serialize, Deserialize)]
struct TpWindowRepr {
    #[serde(rename = "C")]
    c: f64,
    delta: f64,
    deltas: Vec<f64>,
}

impl Serialize for TpWindow {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        TpWindowRepr {
            c: self.scale_c,
            delta: self.shift,
            deltas: self.deltas.clone(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for TpWindow {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let repr = TpWindowRepr::deserialize(deserializer)?;
        TpWindow::new(repr.c, repr.delta, &repr.deltas).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn two_sided_exp() -> TpWindow {
        TpWindow::new(0.5, 0.0, &[1.0, -1.0]).unwrap()
    }

    #[test]
    fn constructor_validates() {
        assert_eq!(
            TpWindow::new(0.5, 0.0, &[1.0, 0.0]).unwrap_err(),
            Error::ZeroDelta
        );
        assert_eq!(
            TpWindow::new(-1.0, 0.0, &[1.0]).unwrap_err(),
            Error::NonpositiveScale(-1.0)
        );
        assert_eq!(TpWindow::new(1.0, 0.0, &[]).unwrap_err(), Error::EmptyFactorList);
    }

    #[test]
    fn type_counts_follow_signs() {
        assert_eq!(two_sided_exp().type_counts(), (1, 1));
        assert_eq!(TpWindow::new(1.0, 0.0, &[1.0, 0.5]).unwrap().type_counts(), (2, 0));
        assert_eq!(TpWindow::new(1.0, 0.0, &[-2.0]).unwrap().type_counts(), (0, 1));
    }

    #[test]
    fn two_sided_exponential_values() {
        let g = two_sided_exp();
        assert_relative_eq!(g.evaluate(0.0), 1.0, max_relative = 1e-14);
        for &t in &[-3.0, -0.7, 0.2, 1.9, 4.5] {
            assert_relative_eq!(g.evaluate(t), (-t.abs()).exp(), max_relative = 1e-13);
        }
    }

    #[test]
    fn one_sided_difference_of_exponentials() {
        // 1/((1+s)(1+s/2)) inverts to 2(e^{-t} - e^{-2t}) on t >= 0.
        let g = TpWindow::new(1.0, 0.0, &[1.0, 0.5]).unwrap();
        assert_relative_eq!(g.evaluate(std::f64::consts::LN_2), 0.5, max_relative = 1e-13);
        assert_eq!(g.evaluate(-0.25), 0.0);
        assert_eq!(g.evaluate(0.0), 0.0); // continuous: 2(1-1)
    }

    #[test]
    fn repeated_factor_is_truncated_power() {
        let g = TpWindow::new(1.0, 0.0, &[1.0, 1.0]).unwrap();
        for &t in &[0.0, 0.5, 1.0, 3.2] {
            assert_relative_eq!(g.evaluate(t), t * (-t).exp(), max_relative = 1e-13);
        }
        assert_eq!(g.evaluate(-0.1), 0.0);
    }

    #[test]
    fn one_sided_exponential_m1() {
        let g = TpWindow::new(1.0, 0.0, &[1.0]).unwrap();
        assert_relative_eq!(g.evaluate(0.0), 1.0, max_relative = 1e-15);
        assert_relative_eq!(g.evaluate(2.0), (-2.0f64).exp(), max_relative = 1e-14);
        assert_eq!(g.evaluate(-1e-9), 0.0);
    }

    #[test]
    fn shift_is_pure_translation() {
        let g0 = two_sided_exp();
        let g = TpWindow::new(0.5, 0.7, &[1.0, -1.0]).unwrap();
        for &t in &[-2.0, 0.0, 0.7, 1.3] {
            assert_relative_eq!(g.evaluate(t), g0.evaluate(t - 0.7), max_relative = 1e-14);
        }
    }

    #[test]
    fn fourier_at_zero_is_inverse_scale() {
        let g = TpWindow::new(1.0, 0.0, &[1.0, 0.5]).unwrap();
        let v = g.fourier(0.0);
        assert_relative_eq!(v.re, 1.0, max_relative = 1e-15);
        assert_relative_eq!(v.im, 0.0, epsilon = 1e-15);
        let v2 = two_sided_exp().fourier(0.0);
        assert_relative_eq!(v2.re, 2.0, max_relative = 1e-15);
    }

    #[test]
    fn fourier_closed_form_two_sided_exp() {
        // e^{-|t|} has transform 2/(1 + 4 pi^2 xi^2).
        let g = two_sided_exp();
        for &xi in &[0.1, 0.5, 1.7] {
            let expect = 2.0 / (1.0 + 4.0 * std::f64::consts::PI.powi(2) * xi * xi);
            let v = g.fourier(xi);
            assert_relative_eq!(v.re, expect, max_relative = 1e-13);
            assert_relative_eq!(v.im, 0.0, epsilon = 1e-15);
        }
    }

    #[test]
    fn symmetric_deltas_give_even_window() {
        let g = TpWindow::new(1.0, 0.0, &[0.8, -0.8]).unwrap();
        for i in 0..200 {
            let t = -5.0 + 0.05 * i as f64;
            assert_relative_eq!(g.evaluate(t), g.evaluate(-t), max_relative = 1e-12, epsilon = 1e-300);
        }
    }

    #[test]
    fn nonnegative_on_grid() {
        for g in [
            two_sided_exp(),
            TpWindow::new(1.0, 0.0, &[1.0, 1.0]).unwrap(),
            TpWindow::new(2.0, 0.3, &[0.6, 0.3, -0.4]).unwrap(),
        ] {
            for i in 0..=2000 {
                let t = -20.0 + 0.02 * i as f64;
                assert!(g.evaluate(t) >= 0.0, "negative value at t = {t}");
            }
        }
    }

    #[test]
    fn exponential_decay_envelope() {
        // Fit A on |t| <= 5, then g(t) <= A e^{-c|t|} must keep holding out
        // to |t| = 30 with c just under the slowest pole rate.
        for g in [
            two_sided_exp(),
            TpWindow::new(1.0, 0.0, &[1.0, 0.5]).unwrap(),
            TpWindow::new(2.0, 0.0, &[0.6, 0.3, -0.4]).unwrap(),
        ] {
            let rate = g
                .deltas()
                .iter()
                .map(|d| 1.0 / d.abs())
                .fold(f64::INFINITY, f64::min);
            let c = 0.8 * rate;
            let mut a = 0.0f64;
            for i in 0..=500 {
                let t = -5.0 + 0.02 * i as f64;
                a = a.max(g.evaluate(t) * (c * t.abs()).exp());
            }
            assert!(a.is_finite() && a > 0.0);
            for i in 0..=3000 {
                let t = -30.0 + 0.02 * i as f64;
                assert!(
                    g.evaluate(t) <= a * (-c * t.abs()).exp() * (1.0 + 1e-12),
                    "envelope fails at t = {t}"
                );
            }
        }
    }

    #[test]
    fn support_radius_brackets_mass() {
        let g = two_sided_exp();
        let (lo, hi) = g.support_radius(1e-12);
        assert!(g.evaluate(lo - 0.5) <= 1e-12);
        assert!(g.evaluate(hi + 0.5) <= 1e-12);
        assert!(g.evaluate(0.0) > 1e-12);
        let one_sided = TpWindow::new(1.0, 0.0, &[1.0, 0.5]).unwrap();
        let (lo1, _) = one_sided.support_radius(1e-12);
        assert_eq!(lo1, 0.0);
    }

    #[test]
    fn reflect_mirrors_values() {
        let g = TpWindow::new(1.0, 0.2, &[1.0, 0.5]).unwrap();
        let r = g.reflect();
        assert_eq!(r.type_counts(), (0, 2));
        for &t in &[-3.0, -0.2, 0.0, 0.4, 2.0] {
            assert_relative_eq!(r.evaluate(t), g.evaluate(-t), max_relative = 1e-13, epsilon = 1e-300);
        }
    }

    #[test]
    fn autocorrelation_of_two_sided_exp() {
        // e^{-|t|} * e^{-|t|} correlation is (1+|tau|) e^{-|tau|}.
        let acf = two_sided_exp().autocorrelation();
        assert_eq!(acf.type_counts(), (2, 2));
        for &tau in &[0.0f64, 0.5, 1.0, 2.5] {
            let expect = (1.0 + tau.abs()) * (-tau.abs()).exp();
            assert_relative_eq!(acf.evaluate(tau), expect, max_relative = 1e-12);
        }
    }

    #[test]
    fn json_round_trip_is_bit_faithful() {
        let g = TpWindow::new(0.5, 0.125, &[1.0, -0.3, 0.7]).unwrap();
        let s = serde_json::to_string(&g).unwrap();
        let back: TpWindow = serde_json::from_str(&s).unwrap();
        assert_eq!(back.scale_c().to_bits(), g.scale_c().to_bits());
        assert_eq!(back.shift().to_bits(), g.shift().to_bits());
        for (a, b) in back.deltas().iter().zip(g.deltas()) {
            assert_eq!(a.to_bits(), b.to_bits());
        }
    }

    #[test]
    fn json_rejects_invalid() {
        let bad = r#"{"C": 1.0, "delta": 0.0, "deltas": [1.0, 0.0]}"#;
        assert!(serde_json::from_str::<TpWindow>(bad).is_err());
    }
}
