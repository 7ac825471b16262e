//! Self-check suites over parameter grids and sampled points, shared by the
//! `verify` command and the test suites.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::chaos::{lyapunov, DEFAULT_BURN, DEFAULT_LYAPUNOV_N};
use crate::error::{Error, Result};
use crate::map_core::{Branch, MapParams};
use crate::orbits::{
    entry_time, orbit, preimage_step, simplex_orbit, simplex_piecewise_orbit, InvariantInterval,
    OrbitPolicy, SimplexState, DEFAULT_ENTRY_CAP,
};
use crate::periodic::{
    find_cycles, interleaved_regime, odd_period_scan, two_cycle_closed_form, two_cycle_conditions,
    two_cycle_region_oracle, CYCLE_TOL,
};

type P = MapParams<f64>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    All,
    Map,
    InvariantSet,
    Periodic,
    OddPeriods,
    Lyapunov,
    Conjugacy,
    OracleVsTheorem,
}

impl Suite {
    pub const EACH: [Suite; 7] = [
        Suite::Map,
        Suite::Conjugacy,
        Suite::InvariantSet,
        Suite::Periodic,
        Suite::OddPeriods,
        Suite::Lyapunov,
        Suite::OracleVsTheorem,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Suite::All => "all",
            Suite::Map => "map",
            Suite::InvariantSet => "invariant-set",
            Suite::Periodic => "periodic",
            Suite::OddPeriods => "odd-periods",
            Suite::Lyapunov => "lyapunov",
            Suite::Conjugacy => "conjugacy",
            Suite::OracleVsTheorem => "oracle-vs-theorem",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        std::iter::once(Suite::All)
            .chain(Suite::EACH)
            .find(|suite| suite.name() == s)
            .ok_or_else(|| Error::Precondition(format!("unknown suite `{s}`")))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: String,
    pub passed: bool,
    pub checks: Vec<CheckResult>,
}

impl SuiteReport {
    fn new(suite: Suite, checks: Vec<CheckResult>) -> Self {
        Self {
            suite: suite.name().to_string(),
            passed: checks.iter().all(|c| c.passed),
            checks,
        }
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "[{}] {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.suite
        )?;
        for c in &self.checks {
            writeln!(
                f,
                "  {} {}: {}",
                if c.passed { "ok  " } else { "FAIL" },
                c.name,
                c.detail
            )?;
        }
        Ok(())
    }
}

fn check(name: &str, passed: bool, detail: impl Into<String>) -> CheckResult {
    CheckResult {
        name: name.to_string(),
        passed,
        detail: detail.into(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VerifyConfig {
    pub seed: u64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self { seed: 20_240_601 }
    }
}

pub fn run(suite: Suite, cfg: &VerifyConfig) -> Vec<SuiteReport> {
    match suite {
        Suite::All => Suite::EACH.iter().map(|&s| run_one(s, cfg)).collect(),
        s => vec![run_one(s, cfg)],
    }
}

fn run_one(suite: Suite, cfg: &VerifyConfig) -> SuiteReport {
    let checks = match suite {
        Suite::Map => map_suite(cfg),
        Suite::Conjugacy => vec![conjugacy_check(cfg.seed, 10, 100_000)],
        Suite::InvariantSet => invariant_set_suite(cfg),
        Suite::Periodic => periodic_suite(),
        Suite::OddPeriods => vec![odd_period_check(&interleaved_regime_grid(20), 7, 100_000)],
        Suite::Lyapunov => vec![lyapunov_check(
            cfg.seed,
            20,
            5,
            DEFAULT_BURN,
            DEFAULT_LYAPUNOV_N,
        )],
        Suite::OracleVsTheorem => vec![oracle_vs_theorem(50, 2_000).into_check()],
        Suite::All => unreachable!("expanded by run"),
    };
    SuiteReport::new(suite, checks)
}

/// `(i/n, j/n)` for `i, j = 1..=n`, optionally offset into `(lo, 1]`.
pub fn square_grid(n: usize, lo: f64) -> Vec<P> {
    let at = move |i: usize| {
        if i == n {
            1.0
        } else {
            lo + (1.0 - lo) * i as f64 / n as f64
        }
    };
    (1..=n)
        .flat_map(|i| (1..=n).map(move |j| (at(i), at(j))))
        .map(|(a, b)| P::new(a, b).unwrap())
        .collect()
}

/// `count` parameter points with `a ≤ b ≤ min(1, 4a/(4 - a²))`.
pub fn interleaved_regime_grid(count: usize) -> Vec<P> {
    let per_a = 4;
    let rows = count.div_ceil(per_a);
    let mut out = Vec::with_capacity(count);
    'outer: for i in 0..rows {
        let a = 0.05 + 0.95 * i as f64 / (rows - 1).max(1) as f64;
        let top = (4.0 * a / (4.0 - a * a)).min(1.0);
        for j in 0..per_a {
            if out.len() == count {
                break 'outer;
            }
            let b = a + (top - a) * j as f64 / (per_a - 1) as f64;
            let p = P::new(a, b.min(1.0)).unwrap();
            debug_assert!(interleaved_regime(&p));
            out.push(p);
        }
    }
    out
}

fn random_params(rng: &mut ChaCha8Rng, count: usize) -> Vec<P> {
    (0..count)
        .map(|_| P::new(rng.gen_range(0.01..=1.0), rng.gen_range(0.01..=1.0)).unwrap())
        .collect()
}

fn map_suite(cfg: &VerifyConfig) -> Vec<CheckResult> {
    let params = square_grid(10, 0.0);
    let xs: Vec<f64> = (0..=10_000).map(|i| i as f64 / 10_000.0).collect();

    let mut range_bad = 0;
    let mut mono_bad = 0;
    let mut deriv_bad = 0;
    for p in &params {
        let top = 1.0 + p.a().max(p.b()) + 4.0 * f64::EPSILON;
        let mut prev: Option<(Branch, f64)> = None;
        for &x in &xs {
            let y = match p.eval(x) {
                Ok(y) => y,
                Err(_) => {
                    range_bad += 1;
                    continue;
                }
            };
            if !(0.0..=1.0).contains(&y) {
                range_bad += 1;
            }
            let br = Branch::of(x);
            if let Some((pb, py)) = prev {
                if pb == br && y <= py {
                    mono_bad += 1;
                }
            }
            prev = Some((br, y));
            if let Ok(Some(d)) = p.derivative(x) {
                if !(d > 1.0 && d <= top) {
                    deriv_bad += 1;
                }
            }
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut compose_bad = 0;
    for p in random_params(&mut rng, 20) {
        for _ in 0..50 {
            let x: f64 = rng.gen_range(0.0..=1.0);
            let (m, k) = (rng.gen_range(0..20), rng.gen_range(0..20));
            let split = p.iterate(p.iterate(x, m).unwrap(), k).unwrap();
            if split != p.iterate(x, m + k).unwrap() {
                compose_bad += 1;
            }
        }
    }

    let limits_ok = params.iter().all(|p| {
        let (l, r) = p.derivative_limits_at_half();
        (l - 1.0).abs() <= 4.0 * f64::EPSILON && (r - 1.0).abs() <= 4.0 * f64::EPSILON
    });
    vec![
        check(
            "range",
            range_bad == 0,
            format!("{range_bad} points left [0,1]"),
        ),
        check(
            "branch monotonicity",
            mono_bad == 0,
            format!("{mono_bad} non-increasing pairs"),
        ),
        check(
            "derivative bound 1 < f' ≤ 1 + max(a,b)",
            deriv_bad == 0,
            format!("{deriv_bad} violations"),
        ),
        check(
            "f^(m+k) = f^k ∘ f^m",
            compose_bad == 0,
            format!("{compose_bad} mismatches"),
        ),
        check(
            "branch derivative limits at 1/2",
            limits_ok,
            "both one-sided limits equal 1",
        ),
    ]
}

/// Largest `|h(f_{a,b}(x)) - f_{b,a}(h(x))|` over `points` grid points of
/// `[0, 1] \ {1/2}` for `pairs` random parameter pairs.
pub fn conjugacy_gap(seed: u64, pairs: usize, points: usize) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_params(&mut rng, pairs)
        .par_iter()
        .map(|p| {
            (0..=points)
                .map(|i| i as f64 / points as f64)
                .filter(|&x| x != 0.5)
                .map(|x| p.conjugacy_check(x).unwrap().gap())
                .fold(0.0, f64::max)
        })
        .reduce(|| 0.0, f64::max)
}

fn conjugacy_check(seed: u64, pairs: usize, points: usize) -> CheckResult {
    let gap = conjugacy_gap(seed, pairs, points);
    check(
        "h∘f_{a,b} = f_{b,a}∘h",
        gap < 1e-14,
        format!("max gap {gap:e} over {pairs} pairs × {points} points"),
    )
}

/// Counts of `(forward-invariance violations, surjectivity failures,
/// points that never entered A)` at one parameter point.
pub fn invariant_set_violations(
    p: &P,
    seed: u64,
    forward: usize,
    surj: usize,
    absorb: usize,
) -> (usize, usize, usize) {
    let set = InvariantInterval::of(p).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sample_a = |rng: &mut ChaCha8Rng| loop {
        let x = rng.gen_range(set.lo..=set.hi);
        if set.contains(x) {
            break x;
        }
    };

    let forward_bad = (0..forward)
        .filter(|_| {
            let x = sample_a(&mut rng);
            let y = p.eval(x).unwrap();
            !(y > set.lo - 1e-12 && y <= set.hi + 1e-12)
        })
        .count();

    let surj_bad = (0..surj)
        .filter(|_| {
            let y = sample_a(&mut rng);
            match set.preimage_within(p, y) {
                Some(x) => (p.eval(x).unwrap() - y).abs() >= 1e-10,
                None => true,
            }
        })
        .count();

    let absorb_bad = (0..absorb)
        .filter(|_| {
            let x = loop {
                let x: f64 = rng.gen_range(0.0..1.0);
                if x > 0.0 && !set.contains(x) {
                    break x;
                }
            };
            entry_time(p, x, DEFAULT_ENTRY_CAP).unwrap().is_none()
        })
        .count();

    (forward_bad, surj_bad, absorb_bad)
}

fn invariant_set_suite(cfg: &VerifyConfig) -> Vec<CheckResult> {
    let params = square_grid(5, 0.0);
    let totals = params
        .par_iter()
        .enumerate()
        .map(|(i, p)| invariant_set_violations(p, cfg.seed ^ i as u64, 10_000, 1_000, 1_000))
        .reduce(|| (0, 0, 0), |x, y| (x.0 + y.0, x.1 + y.1, x.2 + y.2));

    let mut checks = vec![
        check(
            "f(A) ⊆ A",
            totals.0 == 0,
            format!("{} violations", totals.0),
        ),
        check(
            "A ⊆ f(A)",
            totals.1 == 0,
            format!("{} points without preimage in A", totals.1),
        ),
        check(
            "absorption into A",
            totals.2 == 0,
            format!("{} points not absorbed", totals.2),
        ),
    ];

    // a = 0: points above 1/2 settle on a fixed point in (1/2 - b/4, 1/2]
    let mut settle_bad = 0;
    for &b in &[0.25, 0.5, 0.75, 1.0] {
        let p = P::new(0.0, b).unwrap();
        for i in 1..200 {
            let x0 = 0.5 + 0.5 * i as f64 / 200.0;
            let r = orbit(
                &p,
                x0,
                10_000,
                OrbitPolicy {
                    stop_on_entry: false,
                    stop_on_fixed_point: true,
                },
            )
            .unwrap();
            let last = *r.iterates.last().unwrap();
            if !(last <= 0.5 && last > 0.5 - b / 4.0) {
                settle_bad += 1;
            }
        }
    }
    checks.push(check(
        "a = 0 absorption",
        settle_bad == 0,
        format!("{settle_bad} bad terminals"),
    ));

    let backward = backward_recurrence_error(cfg.seed, 1_000);
    checks.push(check(
        "f(preimage_step(b, x)) = x",
        backward < 1e-10,
        format!("max error {backward:e}"),
    ));

    let (up, down) = simplex_limits(10_000);
    checks.push(check(
        "V_a extinction dichotomy",
        up < 1e-6 && down < 1e-6,
        format!("distance to (1,0) for a=0.5: {up:e}; to (0,1) for a=-0.5: {down:e}"),
    ));
    let reduction = simplex_reduction_gap(cfg.seed, 1_000);
    checks.push(check(
        "V_{a,b} x-component = f orbit",
        reduction <= 1e-12,
        format!("max gap {reduction:e}"),
    ));
    checks
}

/// Worst `|f_{0,b}(preimage_step(b, x)) - x|` over `samples` points per `b`.
pub fn backward_recurrence_error(seed: u64, samples: usize) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0.0f64;
    for &b in &[0.25, 0.5, 0.75, 1.0] {
        let p = P::new(0.0, b).unwrap();
        for _ in 0..samples {
            let x = rng.gen_range(0.5 - b / 4.0..=0.5);
            let back = preimage_step(b, x).unwrap();
            worst = worst.max((p.eval(back).unwrap() - x).abs());
        }
    }
    worst
}

/// Distances of `V_{±0.5}^n(0.3, 0.7)` from their predicted limits.
pub fn simplex_limits(n: usize) -> (f64, f64) {
    let z0 = SimplexState::new(0.3, 0.7).unwrap();
    let up: SimplexState<f64> = *simplex_orbit(0.5, z0, n).unwrap().last().unwrap();
    let down: SimplexState<f64> = *simplex_orbit(-0.5, z0, n).unwrap().last().unwrap();
    (
        (up.x - 1.0).abs().max(up.y.abs()),
        down.x.abs().max((down.y - 1.0).abs()),
    )
}

/// Largest per-step gap between the piecewise simplex orbit and the interval
/// orbit over `steps` steps for a handful of parameter points.
pub fn simplex_reduction_gap(seed: u64, steps: usize) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0.0f64;
    for p in random_params(&mut rng, 10) {
        let x0: f64 = rng.gen_range(0.01..0.99);
        let z = simplex_piecewise_orbit(&p, SimplexState::from_x(x0).unwrap(), steps).unwrap();
        let mut x = x0;
        for (k, state) in z.iter().enumerate() {
            if k > 0 {
                x = p.eval(x).unwrap();
            }
            worst = worst.max((state.x - x).abs());
            worst = worst.max((state.x + state.y - 1.0).abs());
        }
    }
    worst
}

/// Cycles with `|multiplier| ≤ 1` or failing forward verification, summed
/// over `params`.
pub fn non_repelling_cycles(params: &[P], max_period: usize, grid: usize) -> (usize, usize) {
    params
        .par_iter()
        .map(|p| {
            let scan = find_cycles(p, max_period, grid).unwrap();
            let bad = scan
                .cycles
                .iter()
                .filter(|c| !c.verify(p, CYCLE_TOL) || c.multiplier.is_some_and(|m| m.abs() <= 1.0))
                .count();
            (scan.cycles.len(), bad)
        })
        .reduce(|| (0, 0), |x, y| (x.0 + y.0, x.1 + y.1))
}

fn periodic_suite() -> Vec<CheckResult> {
    let mut checks = Vec::new();

    let p = P::new(0.5, 1.0).unwrap();
    let scan = find_cycles(&p, 3, 100_000).unwrap();
    let want = [0.47556611, 0.60026760, 0.36032119];
    let found = scan.cycles.iter().find(|c| {
        c.prime_period == 3
            && want
                .iter()
                .all(|w| c.points.iter().any(|x| (x - w).abs() < 1e-6))
    });
    checks.push(check(
        "3-cycle at (1/2, 1)",
        found.is_some_and(|c| c.multiplier.is_some_and(|m| m > 1.0)),
        format!("{:?}", found.map(|c| &c.points)),
    ));

    let p = P::new(0.8, 0.8).unwrap();
    let closed = two_cycle_closed_form(&p).unwrap();
    let residual = closed
        .as_ref()
        .map(|c| (p.iterate(c.points[0], 2).unwrap() - c.points[0]).abs());
    checks.push(check(
        "closed-form 2-cycle at (0.8, 0.8)",
        residual.is_some_and(|r| r < 1e-10),
        format!("|f²(x₂) - x₂| = {residual:?}"),
    ));

    let scan = find_cycles(&p, 2, 10_000).unwrap();
    let two: Vec<_> = scan.cycles.iter().filter(|c| c.prime_period == 2).collect();
    let same = closed.as_ref().is_some_and(|c| {
        two.len() == 1
            && c.points
                .iter()
                .zip(&two[0].points)
                .all(|(x, y)| (x - y).abs() < 1e-9)
    });
    checks.push(check(
        "find_cycles period 2 = closed form",
        same,
        format!("{} found", two.len()),
    ));

    let cmp = oracle_vs_theorem(50, 2_000);
    checks.push(check(
        "closed form agrees with oracle (50×50)",
        cmp.closed_form_disagreements == 0,
        format!(
            "{} disagreements over {} conclusive points",
            cmp.closed_form_disagreements, cmp.conclusive
        ),
    ));

    let (total, bad) = non_repelling_cycles(&square_grid(10, 0.0), 7, 10_000);
    checks.push(check(
        "every cycle repelling (periods ≤ 7, 10×10)",
        bad == 0,
        format!("{bad} of {total} cycles not repelling"),
    ));
    checks
}

/// Total odd cycles found over `params`.
pub fn odd_cycles_found(params: &[P], max_odd: usize, grid: usize) -> usize {
    params
        .par_iter()
        .map(|p| odd_period_scan(p, max_odd, grid).unwrap().cycles.len())
        .sum()
}

fn odd_period_check(params: &[P], max_odd: usize, grid: usize) -> CheckResult {
    let found = odd_cycles_found(params, max_odd, grid);
    check(
        "no odd cycles under a ≤ b ≤ 4a/(4-a²)",
        found == 0,
        format!("{found} odd cycles over {} points", params.len()),
    )
}

/// Smallest exponent and largest excess over `ln(1 + max(a, b))` on an
/// `n × n` grid in `(0.05, 1]²`, `starts` random initial points per cell.
pub fn lyapunov_extremes(
    seed: u64,
    n: usize,
    starts: usize,
    burn: usize,
    iters: usize,
) -> (f64, f64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let step = 0.95 / n as f64;
    let jobs: Vec<(P, f64)> = (1..=n)
        .flat_map(|i| (1..=n).map(move |j| (0.05 + i as f64 * step, 0.05 + j as f64 * step)))
        .flat_map(|(a, b)| {
            let p = P::new(a.min(1.0), b.min(1.0)).unwrap();
            (0..starts)
                .map(|_| loop {
                    let x: f64 = rng.gen_range(0.001..0.999);
                    if x != 0.5 {
                        break x;
                    }
                })
                .map(move |x| (p, x))
                .collect::<Vec<_>>()
        })
        .collect();
    jobs.par_iter()
        .map(|(p, x0)| {
            let lam = lyapunov(p, *x0, burn, iters).unwrap().lambda;
            (lam, lam - (1.0 + p.a().max(p.b())).ln())
        })
        .reduce(
            || (f64::INFINITY, f64::NEG_INFINITY),
            |x, y| (x.0.min(y.0), x.1.max(y.1)),
        )
}

fn lyapunov_check(seed: u64, n: usize, starts: usize, burn: usize, iters: usize) -> CheckResult {
    let (min, excess) = lyapunov_extremes(seed, n, starts, burn, iters);
    check(
        "0 ≤ λ ≤ ln(1 + max(a,b))",
        min >= -1e-6 && excess <= 1e-9,
        format!("min λ {min:.6e}, max excess over bound {excess:e}"),
    )
}

/// Closed form, condition predicates and the brute-force oracle over a grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleComparison {
    pub points: usize,
    pub conclusive: usize,
    pub oracle_positive: usize,
    pub closed_form_disagreements: usize,
    pub ratio_bound_disagreements: usize,
    pub both_windows_disagreements: usize,
    /// A few `(a, b, oracle)` points where the single condition `b < a/(1-a)` is wrong.
    pub ratio_bound_examples: Vec<(f64, f64, bool)>,
}

impl OracleComparison {
    /// Reports without failing: the condition mismatch is a finding, not a defect.
    pub fn into_check(self) -> CheckResult {
        check(
            "2-cycle conditions vs oracle",
            true,
            format!(
                "{} conclusive of {}; oracle finds 2-cycles at {}; closed form disagrees at {}; \
                 b < a/(1-a) disagrees at {} (e.g. {:?}); both windows disagree at {}",
                self.conclusive,
                self.points,
                self.oracle_positive,
                self.closed_form_disagreements,
                self.ratio_bound_disagreements,
                self.ratio_bound_examples,
                self.both_windows_disagreements,
            ),
        )
    }
}

pub fn oracle_vs_theorem(n: usize, grid: usize) -> OracleComparison {
    let params = square_grid(n, 0.0);
    let rows: Vec<_> = params
        .par_iter()
        .map(|p| {
            let verdict = two_cycle_region_oracle(p, grid).unwrap();
            let closed = two_cycle_closed_form(p).unwrap().is_some();
            (
                *p,
                verdict.conclusive,
                verdict.exists(),
                closed,
                two_cycle_conditions(p),
            )
        })
        .collect();
    let conclusive: Vec<_> = rows.iter().filter(|r| r.1).collect();
    let ratio_bound_wrong: Vec<_> = conclusive
        .iter()
        .filter(|r| r.4.ratio_bound != r.2)
        .collect();
    OracleComparison {
        points: rows.len(),
        conclusive: conclusive.len(),
        oracle_positive: conclusive.iter().filter(|r| r.2).count(),
        closed_form_disagreements: conclusive.iter().filter(|r| r.3 != r.2).count(),
        ratio_bound_disagreements: ratio_bound_wrong.len(),
        both_windows_disagreements: conclusive
            .iter()
            .filter(|r| r.4.both_windows() != r.2)
            .count(),
        ratio_bound_examples: ratio_bound_wrong
            .iter()
            .take(3)
            .map(|r| (r.0.a(), r.0.b(), r.2))
            .collect(),
    }
}
