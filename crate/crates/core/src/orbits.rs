//! Forward orbits on the interval and on the 1-simplex, the invariant
//! interval `A = (1/2 - b/4, 1/2 + a/4]`, entry times into it, and the
//! backward recurrence of the `a = 0` case.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::map_core::{check_point, Branch, MapParams};
use crate::scalar::{half, Scalar};

/// Default iteration cap for [`entry_time`].
pub const DEFAULT_ENTRY_CAP: usize = 1_000_000;

/// `x + y` may differ from 1 by this much in a [`SimplexState`].
pub const SIMPLEX_TOL: f64 = 1e-12;

/// One-step drift between the stored and the independently iterated `y`
/// that [`simplex_orbit`] tolerates.
pub const DRIFT_TOL: f64 = 1e-9;

/// The half-open interval `(lo, hi]` that every interior orbit enters and
/// never leaves when `ab ≠ 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InvariantInterval<T> {
    /// Excluded.
    pub lo: T,
    /// Included.
    pub hi: T,
}

impl<T: Scalar> InvariantInterval<T> {
    pub fn of(p: &MapParams<T>) -> Result<Self> {
        if !p.is_nondegenerate() {
            return Err(Error::Degenerate {
                a: p.a().to_f64_lossy(),
                b: p.b().to_f64_lossy(),
                what: "the invariant interval needs ab ≠ 0",
            });
        }
        let quarter = T::lit(0.25);
        Ok(Self {
            lo: half::<T>() - p.b() * quarter,
            hi: half::<T>() + p.a() * quarter,
        })
    }

    #[inline]
    pub fn contains(&self, x: T) -> bool {
        self.lo < x && x <= self.hi
    }

    pub fn width(&self) -> T {
        self.hi - self.lo
    }

    /// A point of `A` that `f` maps onto `y`, if any.
    pub fn preimage_within(&self, p: &MapParams<T>, y: T) -> Option<T> {
        [Branch::Left, Branch::Right]
            .into_iter()
            .filter_map(|br| p.preimage(br, y))
            .find(|&x| self.contains(x))
    }
}

/// Shorthand for [`InvariantInterval::of`].
pub fn invariant_interval<T: Scalar>(p: &MapParams<T>) -> Result<InvariantInterval<T>> {
    InvariantInterval::of(p)
}

/// When [`orbit`] stops early.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct OrbitPolicy {
    pub stop_on_entry: bool,
    pub stop_on_fixed_point: bool,
}

impl OrbitPolicy {
    /// Record all `n + 1` points.
    pub const FULL: Self = Self {
        stop_on_entry: false,
        stop_on_fixed_point: false,
    };
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Termination {
    MaxIterations,
    FixedPointReached,
    EnteredA,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrbitRecord<T> {
    pub x0: T,
    /// `iterates[0] = x0`, `iterates[k + 1] = f(iterates[k])`.
    pub iterates: Vec<T>,
    /// First index whose point lies in `A`; always `None` when `ab = 0`.
    pub entered_a_at: Option<usize>,
    pub terminated: Termination,
}

/// Forward orbit `x0, f(x0), …, f^n(x0)`, annotated with the entry time into
/// `A` and cut short according to `policy`.
pub fn orbit<T: Scalar>(
    p: &MapParams<T>,
    x0: T,
    n: usize,
    policy: OrbitPolicy,
) -> Result<OrbitRecord<T>> {
    let x0 = check_point(x0)?;
    let set = InvariantInterval::of(p).ok();
    let mut iterates = Vec::with_capacity(n.saturating_add(1).min(1 << 20));
    iterates.push(x0);
    let mut entered_a_at = None;
    let mut terminated = Termination::MaxIterations;

    let mut x = x0;
    for k in 0..=n {
        if entered_a_at.is_none() && set.is_some_and(|s| s.contains(x)) {
            entered_a_at = Some(k);
            if policy.stop_on_entry {
                terminated = Termination::EnteredA;
                break;
            }
        }
        if k == n {
            break;
        }
        let next = p.eval(x)?;
        iterates.push(next);
        if policy.stop_on_fixed_point && next == x {
            terminated = Termination::FixedPointReached;
            break;
        }
        x = next;
    }

    Ok(OrbitRecord {
        x0,
        iterates,
        entered_a_at,
        terminated,
    })
}

/// Least `n ≤ cap` with `f^n(x0) ∈ A`.
///
/// `None` is expected for `x0 ∈ {0, 1}`; for any other point it means the
/// cap was too small.
pub fn entry_time<T: Scalar>(p: &MapParams<T>, x0: T, cap: usize) -> Result<Option<usize>> {
    let set = InvariantInterval::of(p)?;
    let mut x = check_point(x0)?;
    for k in 0..=cap {
        if set.contains(x) {
            return Ok(Some(k));
        }
        x = p.apply(x);
    }
    Ok(None)
}

/// One step of the backward orbit for `f_{0,b}`: the right-branch preimage
///
/// ```text
/// x' = (1/b) (sqrt(b x + ((1 - b)/2)²) + (b - 1)/2)
/// ```
///
/// which satisfies `f_{0,b}(x') = x`.
pub fn preimage_step<T: Scalar>(b: T, x: T) -> Result<T> {
    if !(b > T::zero() && b <= T::one()) {
        return Err(Error::InvalidParameter {
            name: "b",
            value: b.to_f64_lossy(),
            lo: 0.0,
            hi: 1.0,
        });
    }
    let x = check_point(x)?;
    let shift = (T::one() - b) * half();
    let radicand = b * x + shift * shift;
    if radicand < T::zero() {
        return Err(Error::Domain {
            x: x.to_f64_lossy(),
        });
    }
    Ok((radicand.sqrt() + (b - T::one()) * half()) / b)
}

/// A point `(x, y)` of the 1-simplex.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimplexState<T> {
    pub x: T,
    pub y: T,
}

impl<T: Scalar> SimplexState<T> {
    pub fn new(x: T, y: T) -> Result<Self> {
        if !(x >= T::zero() && y >= T::zero()) || (x + y - T::one()).abs() > T::lit(SIMPLEX_TOL) {
            return Err(Error::Precondition(format!(
                "({x:e}, {y:e}) is not on the simplex"
            )));
        }
        Ok(Self { x, y })
    }

    /// The state `(x, 1 - x)`.
    pub fn from_x(x: T) -> Result<Self> {
        let x = check_point(x)?;
        Ok(Self { x, y: T::one() - x })
    }
}

/// Applies the Volterra operator with coefficient `c`:
/// `x' = x(1 + c y)`, storing `y' = 1 - x'`.
fn volterra_step<T: Scalar>(c: T, z: SimplexState<T>, step: usize) -> Result<SimplexState<T>> {
    let x = z.x * (T::one() + c * z.y);
    let y_independent = z.y * (T::one() - c * z.x);
    let next = SimplexState { x, y: T::one() - x };
    let drift = (next.y - y_independent).abs();
    if drift > T::lit(DRIFT_TOL) {
        return Err(Error::SimplexViolation {
            step,
            drift: drift.to_f64_lossy(),
        });
    }
    Ok(next)
}

fn check_signed_unit<T: Scalar>(a: T) -> Result<()> {
    if a >= -T::one() && a <= T::one() {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name: "a",
            value: a.to_f64_lossy(),
            lo: -1.0,
            hi: 1.0,
        })
    }
}

/// Orbit `z0, V_a(z0), …, V_a^n(z0)` of the two-species operator
/// `x' = x(1 + a y)`, `y' = y(1 - a x)` with `a ∈ [-1, 1]`.
pub fn simplex_orbit<T: Scalar>(
    a: T,
    z0: SimplexState<T>,
    n: usize,
) -> Result<Vec<SimplexState<T>>> {
    check_signed_unit(a)?;
    let mut out = Vec::with_capacity(n + 1);
    let mut z = z0;
    out.push(z);
    for step in 1..=n {
        z = volterra_step(a, z, step)?;
        out.push(z);
    }
    Ok(out)
}

/// Largest `|x + y - 1|` seen when both coordinates of `V_a` are iterated
/// independently for `n` steps.
pub fn simplex_drift<T: Scalar>(a: T, z0: SimplexState<T>, n: usize) -> Result<T> {
    check_signed_unit(a)?;
    let (mut x, mut y) = (z0.x, z0.y);
    let mut worst = (x + y - T::one()).abs();
    for _ in 0..n {
        let (nx, ny) = (x * (T::one() + a * y), y * (T::one() - a * x));
        x = nx;
        y = ny;
        worst = worst.max((x + y - T::one()).abs());
    }
    Ok(worst)
}

/// Orbit of the piecewise operator: `V_a` when `x ≤ 1/2`, the `b`-side
/// Volterra step (coefficient `-b`) when `x > 1/2`.
///
/// The `x`-update uses the same expressions as [`MapParams::apply`], so the
/// `x`-components coincide with the one-dimensional orbit bit for bit.
pub fn simplex_piecewise_orbit<T: Scalar>(
    p: &MapParams<T>,
    z0: SimplexState<T>,
    n: usize,
) -> Result<Vec<SimplexState<T>>> {
    let mut out = Vec::with_capacity(n + 1);
    let mut z = z0;
    out.push(z);
    for _ in 0..n {
        let x = p.apply(z.x);
        z = SimplexState { x, y: T::one() - x };
        out.push(z);
    }
    Ok(out)
}

/// The state-dependent heredity coefficients `(P_{12,1}(z), P_{12,2}(z))`.
pub fn simplex_coefficients<T: Scalar>(p: &MapParams<T>, z: SimplexState<T>) -> (T, T) {
    let first = match Branch::of(z.x) {
        Branch::Left => (T::one() + p.a()) * half(),
        Branch::Right => (T::one() - p.b()) * half(),
    };
    (first, T::one() - first)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(a: f64, b: f64) -> MapParams<f64> {
        MapParams::new(a, b).unwrap()
    }

    #[test]
    fn invariant_interval_examples() {
        let s = InvariantInterval::of(&p(0.2, 0.8)).unwrap();
        assert!((s.lo - 0.3).abs() < 1e-15 && (s.hi - 0.55).abs() < 1e-15);
        let s = InvariantInterval::of(&p(1.0, 1.0)).unwrap();
        assert_eq!((s.lo, s.hi), (0.25, 0.75));
        let s = InvariantInterval::of(&p(0.5, 0.5)).unwrap();
        assert_eq!((s.lo, s.hi), (0.375, 0.625));
        assert!(InvariantInterval::of(&p(0.0, 0.5)).is_err());
        assert!(InvariantInterval::of(&p(0.5, 0.0)).is_err());
    }

    #[test]
    fn membership_is_half_open() {
        let s = InvariantInterval::of(&p(0.5, 0.5)).unwrap();
        assert!(!s.contains(0.375));
        assert!(s.contains(0.625));
        assert!(s.contains(0.5));
    }

    #[test]
    fn orbit_from_0_9_decreases_until_entry() {
        let r = orbit(&p(0.2, 0.8), 0.9, 100, OrbitPolicy::FULL).unwrap();
        assert_eq!(r.iterates.len(), 101);
        let n0 = r.entered_a_at.unwrap();
        assert!(n0 >= 1);
        for w in r.iterates[..=n0].windows(2) {
            assert!(w[1] < w[0]);
        }
        for (k, &x) in r.iterates.iter().enumerate() {
            assert_eq!(0.3 < x && x <= 0.55, k >= n0, "k = {k}");
        }
    }

    #[test]
    fn orbit_of_one_is_constant() {
        let r = orbit(&p(0.6, 0.1), 1.0, 10, OrbitPolicy::FULL).unwrap();
        assert!(r.iterates.iter().all(|&x| x == 1.0));
        assert_eq!(r.entered_a_at, None);
    }

    #[test]
    fn orbit_reproduces_three_cycle() {
        let r = orbit(&p(0.5, 1.0), 0.47556611, 3, OrbitPolicy::FULL).unwrap();
        assert!((r.iterates[3] - 0.47556611).abs() < 1e-6);
    }

    #[test]
    fn orbit_policies() {
        let r = orbit(
            &p(0.2, 0.8),
            0.95,
            1000,
            OrbitPolicy {
                stop_on_entry: true,
                stop_on_fixed_point: false,
            },
        )
        .unwrap();
        assert_eq!(r.terminated, Termination::EnteredA);
        assert_eq!(r.iterates.len(), r.entered_a_at.unwrap() + 1);

        let r = orbit(
            &p(0.0, 0.5),
            0.8,
            100,
            OrbitPolicy {
                stop_on_entry: false,
                stop_on_fixed_point: true,
            },
        )
        .unwrap();
        assert_eq!(r.terminated, Termination::FixedPointReached);
        let last = *r.iterates.last().unwrap();
        assert!(last <= 0.5 && last > 0.5 - 0.5 / 4.0);
    }

    #[test]
    fn entry_time_examples() {
        let m = p(0.2, 0.8);
        assert_eq!(entry_time(&m, 0.4, 10).unwrap(), Some(0));
        assert_eq!(entry_time(&m, 0.0, 10_000).unwrap(), None);
        assert_eq!(entry_time(&m, 1.0, 10_000).unwrap(), None);
        // 0.95, 0.912, 0.8478, 0.7446, 0.5924, 0.3992
        assert_eq!(entry_time(&m, 0.95, DEFAULT_ENTRY_CAP).unwrap(), Some(5));
    }

    #[test]
    fn preimage_step_examples() {
        let golden = (5f64.sqrt() - 1.0) / 2.0;
        let x = preimage_step(0.5, 0.5).unwrap();
        assert!((x - golden).abs() < 1e-12);
        assert!((x * (0.5 + 0.5 * x) - 0.5).abs() < 1e-12);
        let x = preimage_step(1.0, 0.5).unwrap();
        assert!((x - 0.5f64.sqrt()).abs() < 1e-12);
        let x = preimage_step(0.5, 0.375 + 1e-9).unwrap();
        assert!(x > 0.5 && x < 1.0);
        assert!(preimage_step(0.0, 0.4).is_err());
    }

    #[test]
    fn preimage_step_matches_stable_inversion() {
        for &b in &[0.25, 0.5, 0.75, 1.0] {
            let m = p(0.0, b);
            for i in 1..50 {
                let x = 0.5 - b / 4.0 * (i as f64 / 50.0);
                let lit = preimage_step(b, x).unwrap();
                let stable = m.preimage(Branch::Right, x).unwrap();
                assert!((lit - stable).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn simplex_extinction_dichotomy() {
        let z0 = SimplexState::new(0.3f64, 0.7).unwrap();
        let up = simplex_orbit(0.5, z0, 10_000).unwrap();
        let end = up.last().unwrap();
        assert!((end.x - 1.0).abs() < 1e-6 && end.y.abs() < 1e-6);
        assert!(up.windows(2).all(|w| w[1].x >= w[0].x));

        let down = simplex_orbit(-0.5, z0, 10_000).unwrap();
        let end = down.last().unwrap();
        assert!(end.x.abs() < 1e-6 && (end.y - 1.0).abs() < 1e-6);
        assert!(down.windows(2).all(|w| w[1].x <= w[0].x));

        let flat = simplex_orbit(0.0, z0, 5).unwrap();
        assert!(flat.iter().all(|z| *z == z0));

        assert!(simplex_orbit(1.5, z0, 1).is_err());
    }

    #[test]
    fn simplex_drift_is_rounding_only() {
        let z0 = SimplexState::new(0.3, 0.7).unwrap();
        assert!(simplex_drift(0.9, z0, 1000).unwrap() < 1e-12);
    }

    #[test]
    fn piecewise_simplex_matches_the_interval_map() {
        let m = p(0.2, 0.8);
        let z = simplex_piecewise_orbit(&m, SimplexState::from_x(0.25).unwrap(), 1).unwrap();
        assert!((z[1].x - 0.2875).abs() < 1e-15);
        for v in [0.0, 1.0] {
            let z0 = SimplexState::from_x(v).unwrap();
            let orbit = simplex_piecewise_orbit(&m, z0, 10).unwrap();
            assert!(orbit.iter().all(|z| *z == z0));
        }
    }

    #[test]
    fn simplex_state_validation() {
        assert!(SimplexState::new(0.3, 0.6).is_err());
        assert!(SimplexState::new(-0.1, 1.1).is_err());
        assert!(SimplexState::new(0.25, 0.75).is_ok());
    }

    #[test]
    fn coefficient_examples() {
        let z = |x| SimplexState::from_x(x).unwrap();
        assert_eq!(simplex_coefficients(&p(0.0, 0.5), z(0.3)), (0.5, 0.5));
        let (c1, c2) = simplex_coefficients(&p(0.2, 0.8), z(0.3));
        assert!((c1 - 0.6).abs() < 1e-15 && (c2 - 0.4).abs() < 1e-15);
        let (c1, c2) = simplex_coefficients(&p(0.2, 0.8), z(0.7));
        assert!((c1 - 0.1).abs() < 1e-15 && (c2 - 0.9).abs() < 1e-15);
    }
}
