//! Numeric evaluation of the two feasibility inequalities behind the
//! permutation + swap construction, in log space for the counting bound and
//! in exact dyadic rationals for the linear margin.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};

use crate::error::Error;

/// Largest exponent the evaluators accept.
pub const MAX_SCAN_T: u32 = 64;

/// The five constants of the construction, held exactly.
///
/// Every finite f64 is a dyadic rational, so `from_f64` is lossless; the
/// published constants are available via `paper`.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundsParams {
    pub alpha: BigRational,
    pub gamma: BigRational,
    pub kappa: BigRational,
    pub epsilon: BigRational,
    pub theta: BigRational,
}

fn dyadic(num: i64, exp: u32) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::one() << exp)
}

impl BoundsParams {
    /// alpha = 1 - 38/2^25, gamma = 2^-25, kappa = 6/2^25, epsilon = 2^-6,
    /// theta = 2^-12.
    pub fn paper() -> Self {
        BoundsParams {
            alpha: dyadic((1i64 << 25) - 38, 25),
            gamma: dyadic(1, 25),
            kappa: dyadic(6, 25),
            epsilon: dyadic(1, 6),
            theta: dyadic(1, 12),
        }
    }

    pub fn from_f64(
        alpha: f64,
        gamma: f64,
        kappa: f64,
        epsilon: f64,
        theta: f64,
    ) -> Result<Self, Error> {
        let conv = |name: &str, v: f64| -> Result<BigRational, Error> {
            BigRational::from_float(v).ok_or_else(|| Error::InvalidBoundsParams {
                reason: format!("{name} = {v} is not finite"),
            })
        };
        let params = BoundsParams {
            alpha: conv("alpha", alpha)?,
            gamma: conv("gamma", gamma)?,
            kappa: conv("kappa", kappa)?,
            epsilon: conv("epsilon", epsilon)?,
            theta: conv("theta", theta)?,
        };
        params.validate()?;
        Ok(params)
    }

    /// All five in (0, 1), and alpha + 2 gamma < 1 so the factorial argument
    /// (1 - alpha - 2 gamma) n / 3 stays positive.
    pub fn validate(&self) -> Result<(), Error> {
        let one = BigRational::one();
        for (name, v) in [
            ("alpha", &self.alpha),
            ("gamma", &self.gamma),
            ("kappa", &self.kappa),
            ("epsilon", &self.epsilon),
            ("theta", &self.theta),
        ] {
            if !v.is_positive() || *v >= one {
                return Err(Error::InvalidBoundsParams {
                    reason: format!("{name} must lie strictly between 0 and 1"),
                });
            }
        }
        if self.alpha.clone() + BigRational::from_integer(2.into()) * self.gamma.clone() >= one {
            return Err(Error::InvalidBoundsParams {
                reason: "alpha + 2*gamma must be below 1".into(),
            });
        }
        Ok(())
    }
}

/// ln Gamma(x) for x > 0, by the six-term Lanczos series (g = 5).
pub fn log_gamma(x: f64) -> f64 {
    const COEFFICIENTS: [f64; 6] = [
        76.18009172947146,
        -86.50532032941677,
        24.01409824083091,
        -1.231739572450155,
        0.1208650973866179e-2,
        -0.5395239384953e-5,
    ];
    // Reflect small arguments through Gamma(x) = Gamma(x+1)/x.
    if x < 0.5 {
        return log_gamma(x + 1.0) - x.ln();
    }
    let z = x - 1.0;
    let tmp = z + 5.5;
    let log = (z + 0.5) * tmp.ln() - tmp;
    let mut series = 1.000000000190015;
    let mut denom = z;
    for c in &COEFFICIENTS {
        denom += 1.0;
        series += c / denom;
    }
    log + (2.5066282746310005 * series).ln()
}

/// Natural log of a positive rational, stable for values far outside the
/// f64 range (numerator and denominator are scaled by their bit length).
fn ln_rational(r: &BigRational) -> f64 {
    fn ln_bigint(x: &BigInt) -> f64 {
        let bits = x.bits();
        if bits <= 52 {
            x.to_f64().expect("small BigInt fits f64").ln()
        } else {
            let shift = bits - 52;
            let mantissa = (x >> shift).to_f64().expect("shifted BigInt fits f64");
            mantissa.ln() + shift as f64 * std::f64::consts::LN_2
        }
    }
    debug_assert!(r.is_positive());
    ln_bigint(r.numer()) - ln_bigint(r.denom())
}

fn pow2_rational(t: u32) -> BigRational {
    BigRational::from_integer(BigInt::one() << t)
}

fn check_t(t: u32) -> Result<(), Error> {
    if t == 0 || t > MAX_SCAN_T {
        return Err(Error::ExponentOutOfRange { t, max: MAX_SCAN_T });
    }
    Ok(())
}

/// Natural log of
/// `7 n^2 (gamma n)^(kappa n) / (kappa n)!
///  + 3 n^3 (2 gamma n)^((1-alpha-2gamma)n/3) / ((1-alpha-2gamma)n/3)!`
/// at n = 2^t. The counting inequality holds iff the result is negative.
///
/// Non-integer factorial arguments are evaluated as ln Gamma(x + 1) at the
/// exact real argument; arguments must be positive.
pub fn lemma1_lhs_log(params: &BoundsParams, t: u32) -> Result<f64, Error> {
    check_t(t)?;
    params.validate()?;
    let n = pow2_rational(t);
    let kappa_n = params.kappa.clone() * n.clone();
    let one = BigRational::one();
    let two = BigRational::from_integer(2.into());
    let spare = (one - params.alpha.clone() - two.clone() * params.gamma.clone()) * n.clone()
        / BigRational::from_integer(3.into());
    for arg in [&kappa_n, &spare] {
        if !arg.is_positive() {
            return Err(Error::DegenerateBounds {
                value: arg.to_f64().unwrap_or(f64::NAN),
            });
        }
    }
    let ln_n = t as f64 * std::f64::consts::LN_2;
    let gamma_n = params.gamma.clone() * n.clone();
    let a1 = kappa_n.to_f64().expect("kappa*n fits f64");
    let a2 = spare.to_f64().expect("(1-alpha-2gamma)n/3 fits f64");
    let term1 = 7f64.ln() + 2.0 * ln_n + a1 * ln_rational(&gamma_n) - log_gamma(a1 + 1.0);
    let term2 =
        3f64.ln() + 3.0 * ln_n + a2 * ln_rational(&(two * gamma_n)) - log_gamma(a2 + 1.0);
    // log-sum-exp of the two terms.
    let (hi, lo) = if term1 >= term2 {
        (term1, term2)
    } else {
        (term2, term1)
    };
    Ok(hi + (lo - hi).exp().ln_1p())
}

/// Exact value of
/// `alpha n - 21 kappa n - 7 epsilon n - (84 kappa / epsilon) n
///  - (21 theta / epsilon) n - (80 kappa / theta) n - 28`
/// at n = 2^t. The swap-phase hypothesis holds iff this is positive.
pub fn lemma2_margin(params: &BoundsParams, t: u32) -> Result<BigRational, Error> {
    check_t(t)?;
    params.validate()?;
    let n = pow2_rational(t);
    let big = |v: i64| BigRational::from_integer(v.into());
    let coeff = params.alpha.clone()
        - big(21) * params.kappa.clone()
        - big(7) * params.epsilon.clone()
        - big(84) * params.kappa.clone() / params.epsilon.clone()
        - big(21) * params.theta.clone() / params.epsilon.clone()
        - big(80) * params.kappa.clone() / params.theta.clone();
    Ok(coeff * n - big(28))
}

/// Same margin evaluated purely in floating point; the exact and float paths
/// agree to ~1e-12 relative for t <= 40.
pub fn lemma2_margin_f64(params: &BoundsParams, t: u32) -> f64 {
    let n = (t as f64).exp2();
    let alpha = params.alpha.to_f64().unwrap_or(f64::NAN);
    let kappa = params.kappa.to_f64().unwrap_or(f64::NAN);
    let epsilon = params.epsilon.to_f64().unwrap_or(f64::NAN);
    let theta = params.theta.to_f64().unwrap_or(f64::NAN);
    alpha * n
        - 21.0 * kappa * n
        - 7.0 * epsilon * n
        - 84.0 * kappa / epsilon * n
        - 21.0 * theta / epsilon * n
        - 80.0 * kappa / theta * n
        - 28.0
}

/// Joint feasibility at order n = 2^t.
#[derive(Debug, Clone)]
pub struct Feasibility {
    /// Counting inequality holds (lemma1_log < 0).
    pub lemma1_ok: bool,
    /// Margin positive and epsilon n >= 3.
    pub lemma2_ok: bool,
    pub lemma1_log: f64,
    pub lemma2_margin: f64,
    pub epsilon_n_ok: bool,
}

impl Feasibility {
    pub fn both(&self) -> bool {
        self.lemma1_ok && self.lemma2_ok
    }
}

pub fn feasible(params: &BoundsParams, t: u32) -> Result<Feasibility, Error> {
    let lemma1_log = lemma1_lhs_log(params, t)?;
    let margin = lemma2_margin(params, t)?;
    let epsilon_n_ok =
        params.epsilon.clone() * pow2_rational(t) >= BigRational::from_integer(3.into());
    Ok(Feasibility {
        lemma1_ok: lemma1_log < 0.0,
        lemma2_ok: margin.is_positive() && epsilon_n_ok,
        lemma1_log,
        lemma2_margin: margin.to_f64().unwrap_or(f64::NAN),
        epsilon_n_ok,
    })
}

#[derive(Debug, Clone)]
pub struct ScanRow {
    pub t: u32,
    pub lemma1_log: f64,
    pub lemma2_margin: f64,
    pub feasible: bool,
}

#[derive(Debug, Clone)]
pub struct ScanOutcome {
    /// Smallest scanned t with both inequalities satisfied.
    pub min_feasible_t: Option<u32>,
    pub rows: Vec<ScanRow>,
}

/// Scans t = 1..=t_max and reports per-exponent margins.
pub fn scan_min_t(params: &BoundsParams, t_max: u32) -> Result<ScanOutcome, Error> {
    check_t(t_max)?;
    let mut rows = Vec::with_capacity(t_max as usize);
    let mut min_feasible_t = None;
    for t in 1..=t_max {
        let f = feasible(params, t)?;
        if f.both() && min_feasible_t.is_none() {
            min_feasible_t = Some(t);
        }
        rows.push(ScanRow {
            t,
            lemma1_log: f.lemma1_log,
            lemma2_margin: f.lemma2_margin,
            feasible: f.both(),
        });
    }
    Ok(ScanOutcome {
        min_feasible_t,
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn log_gamma_matches_log_factorial_sums() {
        // ln Gamma(k+1) = sum of ln over 1..=k.
        let mut acc = 0.0f64;
        for k in 1..=200u32 {
            acc += (k as f64).ln();
            let lg = log_gamma(k as f64 + 1.0);
            assert!(
                (lg - acc).abs() <= 1e-9 * acc.abs().max(1.0),
                "k={k}: {lg} vs {acc}"
            );
        }
        // A few non-integer spot values against known Gamma identities:
        // Gamma(1/2) = sqrt(pi), Gamma(3/2) = sqrt(pi)/2.
        let sqrt_pi_ln = std::f64::consts::PI.sqrt().ln();
        assert!((log_gamma(0.5) - sqrt_pi_ln).abs() < 1e-10);
        assert!((log_gamma(1.5) - (sqrt_pi_ln - std::f64::consts::LN_2)).abs() < 1e-10);
    }

    #[test]
    fn ln_rational_handles_extreme_magnitudes() {
        let tiny = BigRational::new(BigInt::one(), BigInt::one() << 2400);
        let expect = -2400.0 * std::f64::consts::LN_2;
        assert!((ln_rational(&tiny) - expect).abs() < 1e-6);
        let big = BigRational::from_integer(BigInt::one() << 300);
        assert!((ln_rational(&big) - 300.0 * std::f64::consts::LN_2).abs() < 1e-9);
    }

    #[test]
    fn paper_constants_feasible_at_30_not_25() {
        let p = BoundsParams::paper();
        let at30 = feasible(&p, 30).unwrap();
        assert!(at30.lemma1_ok && at30.lemma2_ok);
        let at25 = feasible(&p, 25).unwrap();
        assert!(!at25.lemma1_ok);
        assert!(at25.lemma1_log > 0.0);
        // Independent evaluation at t=25: kappa n = 6, gamma n = 1 and
        // (1-alpha-2gamma)n/3 = 12, so both factorials have integer
        // arguments and ln of each term reduces to log-factorial sums.
        let ln2 = std::f64::consts::LN_2;
        let ln_fact = |k: u32| (1..=k).map(|v| (v as f64).ln()).sum::<f64>();
        let term1 = 7f64.ln() + 50.0 * ln2 + 6.0 * 1f64.ln() - ln_fact(6);
        let term2 = 3f64.ln() + 75.0 * ln2 + 12.0 * ln2 - ln_fact(12);
        let expect = term2 + (term1 - term2).exp().ln_1p();
        assert!(
            (at25.lemma1_log - expect).abs() < 1e-9 * expect.abs(),
            "{} vs {expect}",
            at25.lemma1_log
        );
    }

    #[test]
    fn margin_signs_at_small_and_paper_scale() {
        let p = BoundsParams::paper();
        assert!(lemma2_margin(&p, 5).unwrap().is_negative()); // n = 32
        assert!(lemma2_margin(&p, 30).unwrap().is_positive());
        // Coefficient of n is about 0.5029.
        let coeff = (lemma2_margin(&p, 30).unwrap()
            + BigRational::from_integer(28.into()))
            / pow2_rational(30);
        let c = coeff.to_f64().unwrap();
        assert!((c - 0.5029).abs() < 1e-3, "coefficient {c}");
    }

    #[test]
    fn margin_is_linear_in_n() {
        let p = BoundsParams::paper();
        let big28 = BigRational::from_integer(28.into());
        for t in 1..=39u32 {
            let m1 = lemma2_margin(&p, t).unwrap();
            let m2 = lemma2_margin(&p, t + 1).unwrap();
            assert_eq!(
                m2 + big28.clone(),
                BigRational::from_integer(2.into()) * (m1 + big28.clone())
            );
        }
    }

    #[test]
    fn exact_and_float_margins_agree() {
        let p = BoundsParams::paper();
        for t in 1..=40u32 {
            let exact = lemma2_margin(&p, t).unwrap().to_f64().unwrap();
            let float = lemma2_margin_f64(&p, t);
            let scale = exact.abs().max(1.0);
            assert!(
                (exact - float).abs() <= 1e-9 * scale,
                "t={t}: {exact} vs {float}"
            );
        }
    }

    #[test]
    fn lemma1_decreases_over_the_transition_window() {
        let p = BoundsParams::paper();
        let mut prev = f64::INFINITY;
        for t in 26..=34u32 {
            let v = lemma1_lhs_log(&p, t).unwrap();
            assert!(v < prev, "t={t}: {v} not below {prev}");
            prev = v;
        }
    }

    #[test]
    fn gamma_to_zero_drives_lemma1_down() {
        // Shrinking gamma with everything else fixed sends the bound toward
        // -infinity (the (gamma n)^(kappa n) factor vanishes).
        let mut prev = f64::INFINITY;
        for exp in [10u32, 20, 40, 80, 160] {
            let p = BoundsParams {
                alpha: dyadic(1 << 20, 21), // 1/2
                gamma: BigRational::new(BigInt::one(), BigInt::one() << exp),
                kappa: dyadic(1, 4),
                epsilon: dyadic(1, 4),
                theta: dyadic(1, 8),
            };
            let v = lemma1_lhs_log(&p, 6).unwrap();
            assert!(v < prev);
            prev = v;
        }
        assert!(prev < -100.0);
    }

    #[test]
    fn scan_reports_first_feasible_exponent() {
        let p = BoundsParams::paper();
        let outcome = scan_min_t(&p, 30).unwrap();
        let min_t = outcome.min_feasible_t.expect("a feasible t at or below 30");
        assert!(min_t <= 30);
        assert_eq!(outcome.rows.len(), 30);
        for row in &outcome.rows {
            assert_eq!(row.feasible, row.t >= min_t);
        }
        // Regression: with the published constants the continuous-factorial
        // evaluation first goes feasible at t = 28.
        assert_eq!(min_t, 28);

        // A scan that tops out below every feasible exponent finds nothing.
        let short = scan_min_t(&p, 10).unwrap();
        assert_eq!(short.min_feasible_t, None);
    }

    #[test]
    fn small_t_feasible_with_extreme_gamma() {
        // Small-exponent feasibility needs gamma far below the f64 range,
        // which only the exact-rational parameters can express: kappa n is
        // then tiny but kappa n * ln(gamma n) still overwhelms ln(7 n^2).
        let p = BoundsParams {
            alpha: BigRational::from_float(0.9).unwrap(),
            gamma: BigRational::new(BigInt::one(), BigInt::one() << 24000),
            kappa: dyadic(1, 19),
            epsilon: dyadic(1, 5),
            theta: dyadic(1, 11),
        };
        p.validate().unwrap();
        let f = feasible(&p, 10).unwrap();
        assert!(f.lemma1_ok, "lemma1 log = {}", f.lemma1_log);
        assert!(f.lemma2_ok, "lemma2 margin = {}", f.lemma2_margin);
        let scan = scan_min_t(&p, 10).unwrap();
        assert_eq!(scan.min_feasible_t, Some(10));
    }

    #[test]
    fn degenerate_and_invalid_parameters_error() {
        assert!(BoundsParams::from_f64(0.5, 0.0, 0.1, 0.1, 0.1).is_err());
        assert!(BoundsParams::from_f64(1.0, 0.1, 0.1, 0.1, 0.1).is_err());
        // alpha + 2 gamma >= 1.
        assert!(BoundsParams::from_f64(0.9, 0.2, 0.1, 0.1, 0.1).is_err());
        let p = BoundsParams::paper();
        assert!(lemma1_lhs_log(&p, 0).is_err());
        assert!(lemma1_lhs_log(&p, 65).is_err());
    }
}
