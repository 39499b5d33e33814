//! Normal and binomial helpers for the fixed-sample-size reference tests.
//!
//! The standard-normal quantile uses Wichura's PPND16 rational approximation
//! (algorithm AS 241), accurate to well below 1e-9 over the full open unit
//! interval, so no external statistics dependency is needed.

use crate::num::{erfc, exp, ln, ln_gamma, sqrt};
use crate::{Error, Result};

/// Standard normal CDF `Φ(x)`.
pub fn normal_cdf(x: f64) -> f64 {
    0.5 * erfc(-x / core::f64::consts::SQRT_2)
}

/// Standard normal survival function `1 - Φ(x)`, computed without cancellation.
pub fn normal_sf(x: f64) -> f64 {
    0.5 * erfc(x / core::f64::consts::SQRT_2)
}

/// Standard normal quantile `Φ⁻¹(p)` for `p ∈ (0, 1)` (PPND16 / AS 241).
pub fn normal_quantile(p: f64) -> Result<f64> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::InvalidParam {
            what: "quantile probability",
            value: p,
        });
    }
    let q = p - 0.5;
    if q.abs() <= 0.425 {
        let r = 0.180625 - q * q;
        let num = (((((((2.509_080_928_730_122_7e3 * r + 3.343_057_558_358_812_8e4) * r
            + 6.726_577_092_700_870_1e4)
            * r
            + 4.592_195_393_154_987_1e4)
            * r
            + 1.373_169_376_550_946_1e4)
            * r
            + 1.971_590_950_306_551_3e3)
            * r
            + 1.331_416_678_917_843_8e2)
            * r
            + 3.387_132_872_796_366_608)
            * q;
        let den = ((((((5.226_495_278_852_545_5e3 * r + 2.872_908_573_572_194_3e4) * r
            + 3.930_789_580_009_271e4)
            * r
            + 2.121_379_430_158_659_7e4)
            * r
            + 5.394_196_021_424_751e3)
            * r
            + 6.871_870_074_920_579e2)
            * r
            + 4.231_333_070_160_091e1)
            * r
            + 1.0;
        return Ok(num / den);
    }
    let r = if q < 0.0 { p } else { 1.0 - p };
    let mut r = sqrt(-ln(r));
    let val = if r <= 5.0 {
        r -= 1.6;
        let num = ((((((7.745_450_142_783_414e-4 * r + 2.272_384_498_926_918_4e-2) * r
            + 2.417_807_251_774_506e-1)
            * r
            + 1.270_458_252_452_368_4)
            * r
            + 3.647_848_324_763_204_5)
            * r
            + 5.769_497_221_460_691)
            * r
            + 4.630_337_846_156_546)
            * r
            + 1.423_437_110_749_683_5;
        let den = ((((((1.050_750_071_644_416_9e-9 * r + 5.475_938_084_995_345e-4) * r
            + 1.519_866_656_361_645_7e-2)
            * r
            + 1.481_039_764_274_800_8e-1)
            * r
            + 6.897_673_349_851e-1)
            * r
            + 1.676_384_830_183_803_8)
            * r
            + 2.053_191_626_637_759)
            * r
            + 1.0;
        num / den
    } else {
        r -= 5.0;
        let num = ((((((2.010_334_399_292_288_1e-7 * r + 2.711_555_568_743_487_6e-5) * r
            + 1.242_660_947_388_078_4e-3)
            * r
            + 2.653_218_952_657_612_4e-2)
            * r
            + 2.965_605_718_285_048_9e-1)
            * r
            + 1.784_826_539_917_291_3)
            * r
            + 5.463_784_911_164_114)
            * r
            + 6.657_904_643_501_103;
        let den = ((((((2.044_263_103_389_939_8e-15 * r + 1.421_511_758_316_446e-7) * r
            + 1.846_318_317_510_054_8e-5)
            * r
            + 7.868_691_311_456_133e-4)
            * r
            + 1.487_536_129_085_061_5e-2)
            * r
            + 1.369_298_809_227_358)
            * r
            + 5.998_322_065_558_88e-1)
            * r
            + 1.0;
        num / den
    };
    Ok(if q < 0.0 { -val } else { val })
}

/// `log P(S = k)` for `S ~ Binomial(n, p)`.
pub fn binom_log_pmf(k: u64, n: u64, p: f64) -> f64 {
    debug_assert!(k <= n && p > 0.0 && p < 1.0);
    let (nf, kf) = (n as f64, k as f64);
    ln_gamma(nf + 1.0) - ln_gamma(kf + 1.0) - ln_gamma(nf - kf + 1.0)
        + kf * ln(p)
        + (nf - kf) * ln(1.0 - p)
}

/// Upper tail `P(S ≥ k)` for `S ~ Binomial(n, p)`.
///
/// The sum is anchored at the log of the first term, with the rest
/// accumulated through the pmf ratio recurrence, so deep tails keep full
/// relative accuracy instead of underflowing term by term.
pub fn binom_sf(k: u64, n: u64, p: f64) -> f64 {
    if k == 0 {
        return 1.0;
    }
    if k > n {
        return 0.0;
    }
    let log_first = binom_log_pmf(k, n, p);
    let odds = p / (1.0 - p);
    let mut rel = 1.0;
    let mut sum = 1.0;
    let mut i = k;
    while i < n {
        rel *= (n - i) as f64 / (i + 1) as f64 * odds;
        sum += rel;
        if rel < 1e-18 * sum {
            break;
        }
        i += 1;
    }
    (exp(log_first) * sum).min(1.0)
}

/// Smallest integer `k` with `P_{p}(S ≥ k) ≤ alpha` for `S ~ Binomial(n, p)`.
///
/// This is the exact one-sided binomial rejection cutoff; `k = n + 1` means
/// no attainable outcome rejects at level `alpha`.
pub fn binom_rejection_cutoff(n: u64, p: f64, alpha: f64) -> u64 {
    let mut lo = 0u64;
    let mut hi = n + 1;
    // binom_sf is nonincreasing in k; invariant: sf(lo) > alpha >= sf(hi)
    if binom_sf(lo, n, p) <= alpha {
        return 0;
    }
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if binom_sf(mid, n, p) <= alpha {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quantile_reference_values() {
        // Classical two-sided/one-sided z-values.
        assert!((normal_quantile(0.9).unwrap() - 1.281_551_565_544_600_4).abs() < 1e-9);
        assert!((normal_quantile(0.975).unwrap() - 1.959_963_984_540_054).abs() < 1e-9);
        assert!((normal_quantile(0.5).unwrap()).abs() < 1e-15);
        assert!((normal_quantile(1e-12).unwrap() + normal_quantile(1.0 - 1e-12).unwrap()).abs() < 1e-6);
    }

    #[test]
    fn quantile_cdf_round_trip() {
        for &p in &[1e-9, 1e-4, 0.01, 0.1, 0.3, 0.5, 0.77, 0.95, 0.999, 1.0 - 1e-9] {
            let x = normal_quantile(p).unwrap();
            assert!(
                (normal_cdf(x) - p).abs() < 1e-12,
                "round trip failed at p={p}"
            );
        }
    }

    #[test]
    fn binom_tail_small_case_exact() {
        // n = 4, p = 0.5: P(S >= 3) = (4 + 1) / 16
        let sf = binom_sf(3, 4, 0.5);
        assert!((sf - 5.0 / 16.0).abs() < 1e-14);
        assert_eq!(binom_sf(0, 4, 0.5), 1.0);
        assert_eq!(binom_sf(5, 4, 0.5), 0.0);
    }

    #[test]
    fn binom_tail_matches_direct_sum() {
        let (n, p) = (250u64, 0.1);
        for k in [1u64, 10, 25, 40, 80] {
            let direct: f64 = (k..=n).map(|i| exp(binom_log_pmf(i, n, p))).sum();
            let sf = binom_sf(k, n, p);
            assert!((sf - direct).abs() <= 1e-12 * direct.max(1e-300));
        }
    }

    #[test]
    fn cutoff_is_minimal() {
        let (n, p, alpha) = (100u64, 0.3, 0.05);
        let k = binom_rejection_cutoff(n, p, alpha);
        assert!(binom_sf(k, n, p) <= alpha);
        assert!(binom_sf(k - 1, n, p) > alpha);
    }
}
