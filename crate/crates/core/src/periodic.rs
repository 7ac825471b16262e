//! Fixed points, periodic orbits and their stability.
//!
//! Cycles are located by decomposing `[0, 1]` into the continuity pieces of
//! `f^p` (bounded by the preimages of 1/2 up to depth `p - 1`), scanning
//! `f^p(x) - x` for sign changes on each piece with the branch itinerary held
//! fixed, and bisecting. Every reported cycle is re-checked by plain forward
//! iteration.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::map_core::{Branch, MapParams};
use crate::orbits::InvariantInterval;
use crate::scalar::{half, Scalar};

/// Two cycle points closer than this are the same point.
pub const DEDUP_TOL: f64 = 1e-9;

/// A candidate root must satisfy `|f^p(x) - x|` below this under true iteration.
pub const CYCLE_TOL: f64 = 1e-9;

pub const MAX_PERIOD: usize = 12;
pub const MIN_CYCLE_GRID: usize = 10_000;
pub const MIN_ORACLE_GRID: usize = 1_000;

/// Refinement factor applied to oracle cells that contain a discontinuity.
const ORACLE_REFINE: usize = 100;

/// An interval with explicit endpoint inclusivity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval<T> {
    pub lo: T,
    pub hi: T,
    pub lo_closed: bool,
    pub hi_closed: bool,
}

impl<T: Scalar> Interval<T> {
    /// `(lo, hi]`
    pub fn left_open(lo: T, hi: T) -> Self {
        Self {
            lo,
            hi,
            lo_closed: false,
            hi_closed: true,
        }
    }

    pub fn closed(lo: T, hi: T) -> Self {
        Self {
            lo,
            hi,
            lo_closed: true,
            hi_closed: true,
        }
    }

    pub fn contains(&self, x: T) -> bool {
        self.contains_with_slack(x, T::zero())
    }

    /// Membership with both endpoints widened by `slack`.
    pub fn contains_with_slack(&self, x: T, slack: T) -> bool {
        let above = if self.lo_closed {
            x >= self.lo - slack
        } else {
            x > self.lo - slack
        };
        let below = if self.hi_closed {
            x <= self.hi + slack
        } else {
            x < self.hi + slack
        };
        above && below
    }

    pub fn is_empty(&self) -> bool {
        self.lo > self.hi || (self.lo == self.hi && !(self.lo_closed && self.hi_closed))
    }

    /// `samples` evenly spaced points, skipping an open left endpoint.
    pub fn sample(&self, samples: usize) -> impl Iterator<Item = T> + '_ {
        let n = T::lit(samples as f64);
        let start = if self.lo_closed { 0 } else { 1 };
        (start..=samples)
            .map(move |j| self.lo + (self.hi - self.lo) * (T::lit(j as f64) / n))
            .filter(move |&x| self.contains(x))
    }
}

/// The fixed-point set of `f`: isolated points plus whole intervals in the
/// degenerate cases.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FixedPointSet<T> {
    pub points: Vec<T>,
    pub intervals: Vec<Interval<T>>,
}

impl<T: Scalar> FixedPointSet<T> {
    pub fn contains(&self, x: T) -> bool {
        self.points.contains(&x) || self.intervals.iter().any(|i| i.contains(x))
    }
}

pub fn fixed_points<T: Scalar>(p: &MapParams<T>) -> FixedPointSet<T> {
    let (zero, one) = (T::zero(), T::one());
    let left_flat = p.a() == zero;
    let right_flat = p.b() == zero;
    match (left_flat, right_flat) {
        (true, true) => FixedPointSet {
            points: vec![],
            intervals: vec![Interval::closed(zero, one)],
        },
        (true, false) => FixedPointSet {
            points: vec![one],
            intervals: vec![Interval::closed(zero, half())],
        },
        (false, true) => FixedPointSet {
            points: vec![zero],
            intervals: vec![Interval::left_open(half(), one)],
        },
        (false, false) => FixedPointSet {
            points: vec![zero, one],
            intervals: vec![],
        },
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Stability {
    Attracting,
    Repelling,
    Indifferent,
    /// Some cycle point sits exactly on the discontinuity.
    UndefinedDerivative,
}

/// A periodic orbit with its chain-rule multiplier.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CycleRecord<T> {
    /// Orbit order: `f(points[i]) = points[(i + 1) % len]`.
    pub points: Vec<T>,
    pub prime_period: usize,
    /// Product of `f'` along the cycle; `None` when undefined.
    pub multiplier: Option<T>,
    pub classification: Stability,
}

impl<T: Scalar> CycleRecord<T> {
    /// Checks `f(points[i]) = points[i + 1]` within `tol` for every point.
    pub fn max_step_error(&self, p: &MapParams<T>) -> T {
        let n = self.points.len();
        (0..n)
            .map(|i| (p.apply(self.points[i]) - self.points[(i + 1) % n]).abs())
            .fold(T::zero(), T::max)
    }

    pub fn verify(&self, p: &MapParams<T>, tol: T) -> bool {
        self.points.len() == self.prime_period && self.max_step_error(p) <= tol
    }

    fn min_point(&self) -> T {
        self.points.iter().copied().fold(T::infinity(), T::min)
    }
}

/// Builds a classified record from orbit-ordered points.
pub fn classify_cycle<T: Scalar>(p: &MapParams<T>, points: Vec<T>) -> CycleRecord<T> {
    let prime_period = points.len();
    let multiplier = points.iter().try_fold(T::one(), |acc, &x| {
        (x != half()).then(|| acc * p.branch_derivative(Branch::of(x), x))
    });
    let classification = match multiplier {
        None => Stability::UndefinedDerivative,
        Some(m) if m.abs() > T::one() => Stability::Repelling,
        Some(m) if m.abs() < T::one() => Stability::Attracting,
        Some(_) => Stability::Indifferent,
    };
    CycleRecord {
        points,
        prime_period,
        multiplier,
        classification,
    }
}

fn require_nondegenerate<T: Scalar>(p: &MapParams<T>, what: &'static str) -> Result<()> {
    if p.is_nondegenerate() {
        Ok(())
    } else {
        Err(Error::Degenerate {
            a: p.a().to_f64_lossy(),
            b: p.b().to_f64_lossy(),
            what,
        })
    }
}

/// Truth values of the three parameter conditions stated for 2-cycles:
/// `ratio_bound`: `a ∈ (0,1), b < a/(1-a)`;
/// `b_window`: `a/(a+1) < b ≤ 4a/(4-a²)`;
/// `a_window`: `b/(b+1) < a < 4b/(4-b²)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TwoCycleConditions {
    pub ratio_bound: bool,
    pub b_window: bool,
    pub a_window: bool,
}

impl TwoCycleConditions {
    pub fn both_windows(&self) -> bool {
        self.b_window && self.a_window
    }
}

pub fn two_cycle_conditions<T: Scalar>(p: &MapParams<T>) -> TwoCycleConditions {
    let (a, b) = (p.a(), p.b());
    let (one, four) = (T::one(), T::lit(4.0));
    TwoCycleConditions {
        ratio_bound: a > T::zero() && a < one && b < a / (one - a),
        b_window: a / (a + one) < b && b <= four * a / (four - a * a),
        a_window: b / (b + one) < a && a < four * b / (four - b * b),
    }
}

/// The pair `(x₂, f(x₂))` from the closed-form roots
/// `x₂ = (ab + 2b - sqrt(ab(ab+4))) / (2ab)`,
/// `f(x₂) = 1/2 + (-2a + sqrt(ab(ab+4))) / (2ab)`, valid or not.
pub fn two_cycle_candidate<T: Scalar>(p: &MapParams<T>) -> Result<(T, T)> {
    require_nondegenerate(p, "the closed-form 2-cycle needs ab ≠ 0")?;
    let (a, b) = (p.a(), p.b());
    let two = T::lit(2.0);
    let ab = a * b;
    let root = (ab * (ab + T::lit(4.0))).sqrt();
    let x2 = (ab + two * b - root) / (two * ab);
    let fx2 = half::<T>() + (root - two * a) / (two * ab);
    Ok((x2, fx2))
}

/// The 2-cycle given by the closed form, when `0 < x₂ ≤ 1/2` and
/// `f(x₂) ∈ (1/2, 1)`.
pub fn two_cycle_closed_form<T: Scalar>(p: &MapParams<T>) -> Result<Option<CycleRecord<T>>> {
    let (x2, fx2) = two_cycle_candidate(p)?;
    let valid = x2 > T::zero() && x2 <= half() && fx2 > half() && fx2 < T::one();
    Ok(valid.then(|| classify_cycle(p, vec![x2, fx2])))
}

/// Outcome of the brute-force 2-cycle search.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleVerdict<T> {
    /// Points `x` with `f²(x) = x`, `f(x) ≠ x`.
    pub roots: Vec<T>,
    /// `false` if some cell held more than one discontinuity after refinement.
    pub conclusive: bool,
}

impl<T> OracleVerdict<T> {
    pub fn exists(&self) -> bool {
        !self.roots.is_empty()
    }
}

/// Brute-force decision on whether `f` has a genuine 2-cycle, independent of
/// the closed form: scans `g(x) = f(f(x)) - x` on a uniform grid, splits
/// cells that straddle a discontinuity of `g`, and bisects sign changes.
pub fn two_cycle_region_oracle<T: Scalar>(
    p: &MapParams<T>,
    grid: usize,
) -> Result<OracleVerdict<T>> {
    require_nondegenerate(p, "the 2-cycle oracle needs ab ≠ 0")?;
    if grid < MIN_ORACLE_GRID {
        return Err(Error::Precondition(format!(
            "oracle grid {grid} below {MIN_ORACLE_GRID}"
        )));
    }
    let itinerary = |x: T| (Branch::of(x), Branch::of(p.apply(x)));
    let g = |x: T| p.apply(p.apply(x)) - x;
    let fix_guard = T::lit(1e-7);

    let mut roots: Vec<T> = Vec::new();
    let mut conclusive = true;
    let mut accept = |x: T, roots: &mut Vec<T>| {
        let genuine = (p.apply(p.apply(x)) - x).abs() < T::lit(1e-10)
            && (p.apply(x) - x).abs() > T::lit(1e-6)
            && x > fix_guard
            && x < T::one() - fix_guard;
        if genuine && roots.iter().all(|&r| (r - x).abs() > T::lit(DEDUP_TOL)) {
            roots.push(x);
        }
    };

    // sign changes of g on [l, r], where g is continuous
    let scan_smooth = |l: T, r: T, roots: &mut Vec<T>, accept: &mut dyn FnMut(T, &mut Vec<T>)| {
        let (gl, gr) = (g(l), g(r));
        if gl == T::zero() {
            accept(l, roots);
        }
        if gr == T::zero() {
            accept(r, roots);
        }
        if gl * gr < T::zero() {
            accept(bisect(&g, l, r, gl), roots);
        }
    };

    let step = T::one() / T::lit(grid as f64);
    for i in 0..grid {
        let l = T::lit(i as f64) * step;
        let r = if i + 1 == grid {
            T::one()
        } else {
            T::lit((i + 1) as f64) * step
        };
        if itinerary(l) == itinerary(r) {
            scan_smooth(l, r, &mut roots, &mut accept);
            continue;
        }
        let sub = (r - l) / T::lit(ORACLE_REFINE as f64);
        for j in 0..ORACLE_REFINE {
            let sl = l + sub * T::lit(j as f64);
            let sr = if j + 1 == ORACLE_REFINE {
                r
            } else {
                l + sub * T::lit((j + 1) as f64)
            };
            let (il, ir) = (itinerary(sl), itinerary(sr));
            if il == ir {
                scan_smooth(sl, sr, &mut roots, &mut accept);
                continue;
            }
            // locate the jump, then treat each side as smooth
            let (mut lo, mut hi) = (sl, sr);
            for _ in 0..200 {
                let mid = lo + (hi - lo) * half();
                if mid <= lo || mid >= hi {
                    break;
                }
                if itinerary(mid) == il {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            if itinerary(hi) != ir {
                conclusive = false;
            }
            scan_smooth(sl, lo, &mut roots, &mut accept);
            scan_smooth(hi, sr, &mut roots, &mut accept);
        }
    }
    roots.sort_by(|x, y| x.partial_cmp(y).unwrap());
    Ok(OracleVerdict { roots, conclusive })
}

/// Bisection on `[l, r]` given `g(l) = gl` and a sign change across the interval.
fn bisect<T: Scalar>(g: &impl Fn(T) -> T, mut l: T, mut r: T, mut gl: T) -> T {
    for _ in 0..200 {
        let mid = l + (r - l) * half();
        if mid <= l || mid >= r {
            break;
        }
        let gm = g(mid);
        if gm == T::zero() {
            return mid;
        }
        if (gm < T::zero()) == (gl < T::zero()) {
            l = mid;
            gl = gm;
        } else {
            r = mid;
        }
    }
    if g(r).abs() < gl.abs() {
        r
    } else {
        l
    }
}

/// A pair of roots closer than the scan resolution.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResolutionWarning<T> {
    pub period: usize,
    pub x1: T,
    pub x2: T,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CycleScan<T> {
    pub cycles: Vec<CycleRecord<T>>,
    pub warnings: Vec<ResolutionWarning<T>>,
}

/// Points `c` in `(0, 1)` with `f^k(c) = 1/2` for some `k < depth`, sorted.
pub fn discontinuity_preimages<T: Scalar>(p: &MapParams<T>, depth: usize) -> Vec<T> {
    let mut all = Vec::new();
    let mut level = vec![half::<T>()];
    for _ in 0..depth {
        all.extend(level.iter().copied());
        level = level
            .iter()
            .flat_map(|&y| [p.preimage(Branch::Left, y), p.preimage(Branch::Right, y)])
            .flatten()
            .filter(|&x| x > T::zero() && x < T::one())
            .collect();
        if level.is_empty() {
            break;
        }
    }
    all.sort_by(|x, y| x.partial_cmp(y).unwrap());
    all.dedup();
    all
}

fn itinerary_of<T: Scalar>(p: &MapParams<T>, x: T, len: usize) -> Vec<Branch> {
    let mut out = Vec::with_capacity(len);
    let mut y = x;
    for _ in 0..len {
        let br = Branch::of(y);
        out.push(br);
        y = p.branch_value(br, y);
    }
    out
}

fn compose<T: Scalar>(p: &MapParams<T>, itinerary: &[Branch], x: T) -> T {
    itinerary.iter().fold(x, |y, &br| p.branch_value(br, y))
}

/// Roots of `f^period(x) = x` in `[0, 1]`, one scan per continuity piece.
fn periodic_roots<T: Scalar>(
    p: &MapParams<T>,
    period: usize,
    grid: usize,
    warnings: &mut Vec<ResolutionWarning<T>>,
) -> Vec<T> {
    let cuts = discontinuity_preimages(p, period);
    let mut edges = Vec::with_capacity(cuts.len() + 2);
    edges.push(T::zero());
    edges.extend(cuts);
    edges.push(T::one());

    let mut roots: Vec<T> = Vec::new();
    let grid_t = T::lit(grid as f64);
    for (piece, w) in edges.windows(2).enumerate() {
        let (l, r) = (w[0], w[1]);
        if r <= l {
            continue;
        }
        // the first piece is [0, c1]; the rest are (c_i, c_{i+1}]
        let left_closed = piece == 0;
        let itinerary = itinerary_of(p, l + (r - l) * half(), period);
        let g = |x: T| compose(p, &itinerary, x) - x;
        let cells = ((r - l) * grid_t).ceil().to_f64_lossy().max(1.0) as usize;
        let at = |k: usize| {
            if k == cells {
                r
            } else {
                l + (r - l) * (T::lit(k as f64) / T::lit(cells as f64))
            }
        };
        let mut keep = |x: T| {
            let inside = if left_closed { x >= l } else { x > l } && x <= r;
            if inside
                && roots
                    .last()
                    .is_none_or(|&last| (x - last).abs() > T::lit(DEDUP_TOL))
            {
                roots.push(x);
            }
        };
        let mut xl = at(0);
        let mut gl = g(xl);
        if gl == T::zero() {
            keep(xl);
        }
        for k in 1..=cells {
            let xr = at(k);
            let gr = g(xr);
            if gr == T::zero() {
                keep(xr);
            } else if gl * gr < T::zero() {
                keep(bisect(&g, xl, xr, gl));
            }
            xl = xr;
            gl = gr;
        }
    }

    let resolution = T::lit(10.0) / grid_t;
    for w in roots.windows(2) {
        if w[1] - w[0] < resolution {
            warnings.push(ResolutionWarning {
                period,
                x1: w[0],
                x2: w[1],
            });
        }
    }
    roots
}

fn check_cycle_search<T: Scalar>(p: &MapParams<T>, max_period: usize, grid: usize) -> Result<()> {
    require_nondegenerate(p, "cycle search needs isolated fixed points (ab ≠ 0)")?;
    if max_period == 0 || max_period > MAX_PERIOD {
        return Err(Error::Precondition(format!(
            "max period {max_period} outside 1..={MAX_PERIOD}"
        )));
    }
    if grid < MIN_CYCLE_GRID {
        return Err(Error::Precondition(format!(
            "cycle grid {grid} below {MIN_CYCLE_GRID}"
        )));
    }
    Ok(())
}

fn search_periods<T: Scalar>(
    p: &MapParams<T>,
    periods: impl IntoIterator<Item = usize>,
    grid: usize,
) -> CycleScan<T> {
    let tol = T::lit(CYCLE_TOL);
    let mut cycles: Vec<CycleRecord<T>> = Vec::new();
    let mut warnings = Vec::new();

    for period in periods {
        for root in periodic_roots(p, period, grid, &mut warnings) {
            let mut orbit = Vec::with_capacity(period + 1);
            let mut x = root;
            orbit.push(x);
            for _ in 0..period {
                x = p.apply(x);
                orbit.push(x);
            }
            if (orbit[period] - root).abs() > tol {
                continue;
            }
            let prime = (1..=period)
                .find(|&d| period % d == 0 && (orbit[d] - root).abs() <= tol)
                .unwrap_or(period);
            if prime != period {
                continue;
            }
            let start = (0..period)
                .min_by(|&i, &j| orbit[i].partial_cmp(&orbit[j]).unwrap())
                .unwrap();
            let mut points: Vec<T> = orbit[..period].to_vec();
            points.rotate_left(start);
            let duplicate = cycles.iter().any(|c| {
                c.prime_period == period && (c.min_point() - points[0]).abs() <= T::lit(DEDUP_TOL)
            });
            if !duplicate {
                cycles.push(classify_cycle(p, points));
            }
        }
    }
    CycleScan { cycles, warnings }
}

/// Every cycle of prime period `≤ max_period`, each verified by forward
/// iteration. Requires `ab ≠ 0`, `max_period ≤ 12` and `grid ≥ 10⁴`.
pub fn find_cycles<T: Scalar>(
    p: &MapParams<T>,
    max_period: usize,
    grid: usize,
) -> Result<CycleScan<T>> {
    check_cycle_search(p, max_period, grid)?;
    Ok(search_periods(p, 1..=max_period, grid))
}

/// Cycles of odd prime period `3, 5, …, max_odd`.
pub fn odd_period_scan<T: Scalar>(
    p: &MapParams<T>,
    max_odd: usize,
    grid: usize,
) -> Result<CycleScan<T>> {
    check_cycle_search(p, max_odd.max(1), grid)?;
    Ok(search_periods(p, (3..=max_odd).step_by(2), grid))
}

/// `a ∈ (0, 1]` and `a ≤ b ≤ 4a/(4 - a²)`: the regime without odd cycles.
pub fn interleaved_regime<T: Scalar>(p: &MapParams<T>) -> bool {
    let (a, b) = (p.a(), p.b());
    a > T::zero() && a <= b && b <= T::lit(4.0) * a / (T::lit(4.0) - a * a)
}

/// `a ∈ (0, 1]` and `b > 4a/(4 - a²)`.
pub fn odd_cycle_regime<T: Scalar>(p: &MapParams<T>) -> bool {
    let (a, b) = (p.a(), p.b());
    a > T::zero() && b > T::lit(4.0) * a / (T::lit(4.0) - a * a)
}

/// The four subintervals of `A` whose images interleave under `f`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PartitionSets<T> {
    pub a1: Interval<T>,
    pub a2: Interval<T>,
    pub a3: Interval<T>,
    pub a4: Interval<T>,
}

impl<T: Scalar> PartitionSets<T> {
    pub fn all(&self) -> [Interval<T>; 4] {
        [self.a1, self.a2, self.a3, self.a4]
    }

    pub fn contains_any(&self, x: T, slack: T) -> bool {
        self.all().iter().any(|s| s.contains_with_slack(x, slack))
    }
}

pub fn partition_sets<T: Scalar>(p: &MapParams<T>) -> Result<PartitionSets<T>> {
    if !interleaved_regime(p) {
        return Err(Error::Precondition(format!(
            "(a, b) = ({}, {}) violates a ≤ b ≤ 4a/(4 - a²)",
            p.a(),
            p.b()
        )));
    }
    let (a, b) = (p.a(), p.b());
    let (one, two, four) = (T::one(), T::lit(2.0), T::lit(4.0));
    let sixteen = T::lit(16.0);
    let h = half::<T>();
    let lo = h - b / four;
    let hi = h + a / four;

    let a3_hi = hi * (one - b / two + a * b / four);
    let a1_hi = a3_hi * (one - b / two + b * ((a - b) / four + a * a * b / sixteen));
    let a2_lo = lo * (one + a / two + a * b / four);
    let a4_lo = a2_lo * (one + a / two - a * ((a - b) / four - a * b * b / sixteen));

    Ok(PartitionSets {
        a1: Interval::left_open(lo, a1_hi),
        a2: Interval::left_open(a2_lo, h),
        a3: Interval::left_open(h, a3_hi),
        a4: Interval::left_open(a4_lo, hi),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InclusionResult<T> {
    pub claim: String,
    pub checked: usize,
    pub violations: usize,
    /// Up to five `(x, f(x))` pairs that break the claim.
    pub counterexamples: Vec<(T, T)>,
}

impl<T> InclusionResult<T> {
    pub fn holds(&self) -> bool {
        self.violations == 0
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TransitionReport<T> {
    pub sets: PartitionSets<T>,
    /// `f(A1) ⊂ A2∪A3`, `f(A2) ⊂ A4`, `f(A3) ⊂ A1`, `f(A4) ⊂ A2∪A3`, in order.
    pub inclusions: Vec<InclusionResult<T>>,
    /// `f(K1) ∩ K1 = ∅` and `f(K2) ∩ K2 = ∅`, in order.
    pub alternation: Vec<InclusionResult<T>>,
}

impl<T> TransitionReport<T> {
    pub fn all_hold(&self) -> bool {
        self.inclusions
            .iter()
            .chain(&self.alternation)
            .all(InclusionResult::holds)
    }
}

/// Endpoint slack for membership tests: `f(1/2) = hi` holds only up to rounding.
pub const TRANSITION_SLACK: f64 = 1e-12;

/// Samples each `Aᵢ` and checks the four image inclusions, then checks that
/// the leftover sets `K1 = (lo, 1/2] \ (A1∪A2)` and `K2 = (1/2, hi] \ (A3∪A4)`
/// are each mapped off themselves.
pub fn transition_check<T: Scalar>(
    p: &MapParams<T>,
    samples: usize,
) -> Result<TransitionReport<T>> {
    let sets = partition_sets(p)?;
    let slack = T::lit(TRANSITION_SLACK);
    let check =
        |claim: &str, domain: &dyn Fn(T) -> bool, from: Interval<T>, ok: &dyn Fn(T) -> bool| {
            let mut checked = 0;
            let mut violations = 0;
            let mut counterexamples = Vec::new();
            for x in from.sample(samples).filter(|&x| domain(x)) {
                checked += 1;
                let y = p.apply(x);
                if !ok(y) {
                    violations += 1;
                    if counterexamples.len() < 5 {
                        counterexamples.push((x, y));
                    }
                }
            }
            InclusionResult {
                claim: claim.to_string(),
                checked,
                violations,
                counterexamples,
            }
        };
    let within = |s: Interval<T>| move |y: T| s.contains_with_slack(y, slack);
    let any = |_: T| true;
    let PartitionSets { a1, a2, a3, a4 } = sets;

    let inclusions = vec![
        check("f(A1) ⊂ A2 ∪ A3", &any, a1, &|y| {
            within(a2)(y) || within(a3)(y)
        }),
        check("f(A2) ⊂ A4", &any, a2, &within(a4)),
        check("f(A3) ⊂ A1", &any, a3, &within(a1)),
        check("f(A4) ⊂ A2 ∪ A3", &any, a4, &|y| {
            within(a2)(y) || within(a3)(y)
        }),
    ];

    let set = InvariantInterval::of(p)?;
    let left = Interval::left_open(set.lo, half());
    let right = Interval::left_open(half(), set.hi);
    let k1 = |x: T| left.contains(x) && !a1.contains(x) && !a2.contains(x);
    let k2 = |x: T| right.contains(x) && !a3.contains(x) && !a4.contains(x);
    let alternation = vec![
        check("f(K1) ∩ K1 = ∅", &k1, left, &|y| !k1(y)),
        check("f(K2) ∩ K2 = ∅", &k2, right, &|y| !k2(y)),
    ];

    Ok(TransitionReport {
        sets,
        inclusions,
        alternation,
    })
}
