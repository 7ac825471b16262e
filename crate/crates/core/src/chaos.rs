//! Lyapunov exponents and bifurcation-diagram sweeps over one-parameter
//! families `b = g(a)`.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::map_core::{check_point, Branch, MapParams};
use crate::scalar::{half, Scalar};

pub const DEFAULT_BURN: usize = 10_000;
pub const DEFAULT_LYAPUNOV_N: usize = 100_000;
pub const DEFAULT_KEEP: usize = 500;
pub const DEFAULT_X0: f64 = 0.3;
pub const DEFAULT_GAP: f64 = 0.01;
pub const MIN_LYAPUNOV_N: usize = 1_000;
pub const MIN_KEEP: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LyapunovEstimate<T> {
    /// Nats per iteration.
    pub lambda: T,
    pub n_used: usize,
    /// Iterates that landed exactly on 1/2 and were left out of the average.
    pub n_skipped: usize,
    pub x0: T,
}

/// Average of `ln f'(x_i)` over `n` iterates following `burn` transient steps.
pub fn lyapunov<T: Scalar>(
    p: &MapParams<T>,
    x0: T,
    burn: usize,
    n: usize,
) -> Result<LyapunovEstimate<T>> {
    let x0 = check_point(x0)?;
    if x0 <= T::zero() || x0 >= T::one() || x0 == half() {
        return Err(Error::Precondition(format!(
            "Lyapunov start point {x0} must lie in (0, 1) \\ {{1/2}}"
        )));
    }
    if n < MIN_LYAPUNOV_N {
        return Err(Error::Precondition(format!(
            "need at least {MIN_LYAPUNOV_N} iterates, got {n}"
        )));
    }
    let mut x = x0;
    for _ in 0..burn {
        x = p.apply(x);
    }
    let mut sum = T::zero();
    let mut n_used = 0;
    let mut n_skipped = 0;
    for _ in 0..n {
        if x == half() {
            n_skipped += 1;
        } else {
            sum = sum + p.branch_derivative(Branch::of(x), x).abs().ln();
            n_used += 1;
        }
        x = p.apply(x);
    }
    let lambda = if n_used == 0 {
        T::zero()
    } else {
        sum / T::lit(n_used as f64)
    };
    Ok(LyapunovEstimate {
        lambda,
        n_used,
        n_skipped,
        x0,
    })
}

/// How `b` follows `a` in a one-parameter sweep.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum BRule {
    /// `b = a`
    Equal,
    /// `b = a/2`
    Half,
    /// `b = 2a/3`
    TwoThirds,
    /// `b = 3a/4`
    ThreeQuarters,
    /// `b = 4a/5`
    FourFifths,
    /// `b = 5a/6`
    FiveSixths,
    /// `b = a/(4 - a²)`
    Rational1,
    /// `b = 5a/(4 - a²)`
    Rational5,
    /// `b = 4a/(4 - a²)`, the odd-cycle threshold
    Critical,
    /// `b = v`
    Const(f64),
    /// `b = r·a`
    Ratio(f64),
}

impl BRule {
    pub fn eval<T: Scalar>(&self, a: T) -> T {
        let four = T::lit(4.0);
        let rational = |k: f64| T::lit(k) * a / (four - a * a);
        match *self {
            BRule::Equal => a,
            BRule::Half => a / T::lit(2.0),
            BRule::TwoThirds => T::lit(2.0) * a / T::lit(3.0),
            BRule::ThreeQuarters => T::lit(3.0) * a / four,
            BRule::FourFifths => four * a / T::lit(5.0),
            BRule::FiveSixths => T::lit(5.0) * a / T::lit(6.0),
            BRule::Rational1 => rational(1.0),
            BRule::Rational5 => rational(5.0),
            BRule::Critical => rational(4.0),
            BRule::Const(v) => T::lit(v),
            BRule::Ratio(r) => T::lit(r) * a,
        }
    }

    /// Parameters at `a`, or a range error when `g(a)` leaves `[0, 1]`.
    pub fn params<T: Scalar>(&self, a: T) -> Result<MapParams<T>> {
        let b = self.eval(a);
        if !(b >= T::zero() && b <= T::one()) {
            return Err(Error::RuleRange {
                rule: self.to_string(),
                a: a.to_f64_lossy(),
                b: b.to_f64_lossy(),
            });
        }
        MapParams::new(a, b)
    }
}

impl fmt::Display for BRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BRule::Equal => f.write_str("b=a"),
            BRule::Half => f.write_str("b=a/2"),
            BRule::TwoThirds => f.write_str("b=2a/3"),
            BRule::ThreeQuarters => f.write_str("b=3a/4"),
            BRule::FourFifths => f.write_str("b=4a/5"),
            BRule::FiveSixths => f.write_str("b=5a/6"),
            BRule::Rational1 => f.write_str("b=a/(4-a^2)"),
            BRule::Rational5 => f.write_str("b=5a/(4-a^2)"),
            BRule::Critical => f.write_str("b=4a/(4-a^2)"),
            BRule::Const(v) => write!(f, "b={v}"),
            BRule::Ratio(r) => write!(f, "b={r}a"),
        }
    }
}

impl FromStr for BRule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let body = compact.strip_prefix("b=").unwrap_or(&compact);
        let rule = match body.replace('²', "^2").as_str() {
            "a" => BRule::Equal,
            "a/2" => BRule::Half,
            "2a/3" => BRule::TwoThirds,
            "3a/4" => BRule::ThreeQuarters,
            "4a/5" => BRule::FourFifths,
            "5a/6" => BRule::FiveSixths,
            "a/(4-a^2)" => BRule::Rational1,
            "5a/(4-a^2)" => BRule::Rational5,
            "4a/(4-a^2)" => BRule::Critical,
            other => {
                if let Some(r) = other.strip_suffix('a').or_else(|| other.strip_suffix("*a")) {
                    let r = r.strip_suffix('*').unwrap_or(r);
                    BRule::Ratio(r.parse().map_err(|_| Error::RuleParse(s.to_string()))?)
                } else {
                    BRule::Const(other.parse().map_err(|_| Error::RuleParse(s.to_string()))?)
                }
            }
        };
        Ok(rule)
    }
}

/// `steps` evenly spaced values from `a_min` to `a_max` inclusive.
pub fn parameter_grid<T: Scalar>(a_min: T, a_max: T, steps: usize) -> Vec<T> {
    match steps {
        0 => vec![],
        1 => vec![a_min],
        _ => {
            let last = T::lit((steps - 1) as f64);
            (0..steps)
                .map(|i| {
                    if i + 1 == steps {
                        a_max
                    } else {
                        a_min + (a_max - a_min) * (T::lit(i as f64) / last)
                    }
                })
                .collect()
        }
    }
}

fn sweep_params<T: Scalar>(
    rule: BRule,
    a_min: T,
    a_max: T,
    steps: usize,
) -> Result<Vec<MapParams<T>>> {
    if !(a_min > T::zero() && a_min <= a_max && a_max <= T::one()) {
        return Err(Error::Precondition(format!(
            "sweep range [{a_min}, {a_max}] must lie in (0, 1]"
        )));
    }
    parameter_grid(a_min, a_max, steps)
        .into_iter()
        .map(|a| rule.params(a))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LyapunovRow<T> {
    pub a: T,
    pub b: T,
    pub lambda: T,
    /// `a = 0` or `b = 0`: positivity is not expected here.
    pub degenerate: bool,
}

pub fn lyapunov_sweep<T: Scalar>(
    rule: BRule,
    a_min: T,
    a_max: T,
    steps: usize,
    x0: T,
    burn: usize,
    n: usize,
) -> Result<Vec<LyapunovRow<T>>> {
    let params = sweep_params(rule, a_min, a_max, steps)?;
    params
        .par_iter()
        .map(|p| {
            let est = lyapunov(p, x0, burn, n)?;
            Ok(LyapunovRow {
                a: p.a(),
                b: p.b(),
                lambda: est.lambda,
                degenerate: !p.is_nondegenerate(),
            })
        })
        .collect()
}

/// Post-transient orbit values at one parameter point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BifurcationSample<T> {
    pub a: T,
    pub b: T,
    pub retained: Vec<T>,
}

impl<T: Scalar> BifurcationSample<T> {
    pub fn band_count(&self, gap: T) -> usize {
        band_count(&self.retained, gap)
    }
}

/// Iterates `burn` steps from `x0` and keeps the next `keep` values.
pub fn bifurcation_point<T: Scalar>(
    p: &MapParams<T>,
    x0: T,
    burn: usize,
    keep: usize,
) -> Result<BifurcationSample<T>> {
    let mut x = check_point(x0)?;
    for _ in 0..burn {
        x = p.apply(x);
    }
    let retained = (0..keep)
        .map(|_| {
            x = p.apply(x);
            x
        })
        .collect();
    Ok(BifurcationSample {
        a: p.a(),
        b: p.b(),
        retained,
    })
}

/// One [`BifurcationSample`] per grid value of `a`, in grid order.
pub fn bifurcation_sweep<T: Scalar>(
    rule: BRule,
    a_min: T,
    a_max: T,
    steps: usize,
    x0: T,
    burn: usize,
    keep: usize,
) -> Result<Vec<BifurcationSample<T>>> {
    if keep < MIN_KEEP {
        return Err(Error::Precondition(format!("keep {keep} below {MIN_KEEP}")));
    }
    let params = sweep_params(rule, a_min, a_max, steps)?;
    params
        .par_iter()
        .map(|p| bifurcation_point(p, x0, burn, keep))
        .collect()
}

/// Number of maximal runs of sorted `values` whose consecutive gaps are at
/// most `gap`.
pub fn band_count<T: Scalar>(values: &[T], gap: T) -> usize {
    if values.is_empty() {
        return 0;
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(|x, y| x.partial_cmp(y).unwrap());
    1 + sorted.windows(2).filter(|w| w[1] - w[0] > gap).count()
}

/// Runs `f` on a dedicated rayon pool; `threads = 0` picks the default size.
pub fn run_with_threads<R: Send>(threads: usize, f: impl FnOnce() -> R + Send) -> R {
    match rayon::ThreadPoolBuilder::new().num_threads(threads).build() {
        Ok(pool) => pool.install(f),
        Err(_) => f(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(a: f64, b: f64) -> MapParams<f64> {
        MapParams::new(a, b).unwrap()
    }

    #[test]
    fn identity_map_has_zero_exponent() {
        let e = lyapunov(&p(0.0, 0.0), 0.37, 100, 1_000).unwrap();
        assert_eq!(e.lambda, 0.0);
        assert_eq!(e.n_used + e.n_skipped, 1_000);
    }

    #[test]
    fn exponent_bounds() {
        let e = lyapunov(&p(0.5, 0.5), 0.3, 1_000, 100_000).unwrap();
        assert!(e.lambda > 0.0 && e.lambda <= 1.5f64.ln());
        let e = lyapunov(&p(1.0, 1.0), 0.3, 1_000, 100_000).unwrap();
        assert!(e.lambda > 0.0 && e.lambda <= 2f64.ln());
    }

    #[test]
    fn doubling_iterations_is_stable() {
        for &(a, b) in &[(0.5, 0.5), (1.0, 1.0)] {
            let base = lyapunov(&p(a, b), 0.3, DEFAULT_BURN, DEFAULT_LYAPUNOV_N).unwrap();
            let twice = lyapunov(&p(a, b), 0.3, 2 * DEFAULT_BURN, 2 * DEFAULT_LYAPUNOV_N).unwrap();
            assert!((base.lambda - twice.lambda).abs() < 1e-3);
        }
    }

    #[test]
    fn exponent_preconditions() {
        let m = p(0.5, 0.5);
        assert!(lyapunov(&m, 0.5, 10, 1_000).is_err());
        assert!(lyapunov(&m, 0.0, 10, 1_000).is_err());
        assert!(lyapunov(&m, 0.3, 10, 999).is_err());
    }

    #[test]
    fn skipped_iterates_are_counted() {
        // a = 0: start on a preimage of 1/2 so the orbit parks exactly on the jump
        let m = p(0.0, 0.25);
        let mut start = m.preimage(Branch::Right, 0.5).unwrap();
        // nudge by ulps until the image is exactly 1/2
        let ulp = f64::EPSILON / 2.0;
        for k in -6..=6 {
            let cand = start + k as f64 * ulp;
            if m.eval(cand).unwrap() == 0.5 {
                start = cand;
                break;
            }
        }
        assert_eq!(m.eval(start).unwrap(), 0.5);
        let e = lyapunov(&m, start, 0, 1_000).unwrap();
        assert_eq!(e.n_used, 1);
        assert_eq!(e.n_skipped, 999);
    }

    #[test]
    fn rule_parsing_round_trips() {
        for rule in [
            BRule::Equal,
            BRule::Half,
            BRule::TwoThirds,
            BRule::ThreeQuarters,
            BRule::FourFifths,
            BRule::FiveSixths,
            BRule::Rational1,
            BRule::Rational5,
            BRule::Critical,
            BRule::Const(0.25),
            BRule::Ratio(0.7),
        ] {
            assert_eq!(rule.to_string().parse::<BRule>().unwrap(), rule);
        }
        assert_eq!("b = a/(4-a²)".parse::<BRule>().unwrap(), BRule::Rational1);
        assert!("b=sin(a)".parse::<BRule>().is_err());
    }

    #[test]
    fn rule_range_is_enforced() {
        assert!(BRule::Rational5.params(0.9).is_err());
        assert!(BRule::Rational5.params(0.5).is_ok());
        let err = lyapunov_sweep(BRule::Rational5, 0.1, 1.0, 10, 0.3, 100, 1_000).unwrap_err();
        assert!(matches!(err, Error::RuleRange { .. }));
    }

    #[test]
    fn sweeps_are_non_negative() {
        for rule in [BRule::Equal, BRule::Rational1] {
            let rows = lyapunov_sweep(rule, 0.01, 1.0, 100, 0.3, 1_000, 1_000).unwrap();
            assert_eq!(rows.len(), 100);
            assert!(rows.iter().all(|r| r.lambda >= -1e-9));
        }
    }

    #[test]
    fn constant_zero_rule_is_flagged() {
        let rows = lyapunov_sweep(BRule::Const(0.0), 0.1, 1.0, 5, 0.3, 100, 1_000).unwrap();
        assert_eq!(rows.len(), 5);
        assert!(rows.iter().all(|r| r.degenerate));
    }

    #[test]
    fn grid_endpoints_are_exact() {
        let g = parameter_grid(0.05, 1.0, 400);
        assert_eq!(g.len(), 400);
        assert_eq!(g[0], 0.05);
        assert_eq!(g[399], 1.0);
        assert_eq!(parameter_grid(0.3, 0.3, 1), vec![0.3]);
    }

    #[test]
    fn bifurcation_preconditions() {
        assert!(bifurcation_sweep(BRule::Equal, 0.0, 1.0, 10, 0.3, 100, 500).is_err());
        assert!(bifurcation_sweep(BRule::Equal, 0.1, 1.0, 10, 0.3, 100, 50).is_err());
    }

    #[test]
    fn band_count_on_constructed_input() {
        assert_eq!(band_count(&[0.1, 0.11, 0.5, 0.51], 0.1), 2);
        assert_eq!(band_count::<f64>(&[], 0.1), 0);
        assert_eq!(band_count(&[0.4], 0.1), 1);
    }

    #[test]
    fn three_bands_on_the_diagonal() {
        let s = bifurcation_point(&p(0.8, 0.8), 0.3, DEFAULT_BURN, DEFAULT_KEEP).unwrap();
        assert_eq!(s.band_count(DEFAULT_GAP), 3);
    }

    #[test]
    fn thread_count_does_not_change_sweeps() {
        let run = |t| {
            run_with_threads(t, || {
                bifurcation_sweep(BRule::Half, 0.05, 1.0, 64, 0.3, 1_000, 100).unwrap()
            })
        };
        assert_eq!(run(1), run(4));
    }
}
