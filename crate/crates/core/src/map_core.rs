//! The piecewise map
//!
//! ```text
//!            ⎧ x(1 + a - a x)   0 ≤ x ≤ 1/2
//! f_{a,b}(x) ⎨
//!            ⎩ x(1 - b + b x)   1/2 < x ≤ 1
//! ```
//!
//! with parameters `a, b ∈ [0, 1]`. The map is increasing on each branch,
//! fixes 0 and 1, and jumps at `x = 1/2` whenever `(a, b) ≠ (0, 0)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{half, Scalar};

/// Results may overshoot `[0, 1]` by at most this many ulps before they are
/// treated as a formula defect.
const CLAMP_ULPS: f64 = 4.0;

/// The parameter pair `(a, b)`, both in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MapParams<T> {
    a: T,
    b: T,
}

impl<T: Scalar> MapParams<T> {
    pub fn new(a: T, b: T) -> Result<Self> {
        check_unit("a", a)?;
        check_unit("b", b)?;
        Ok(Self { a, b })
    }

    #[inline]
    pub fn a(&self) -> T {
        self.a
    }

    #[inline]
    pub fn b(&self) -> T {
        self.b
    }

    /// `f_{0,0}` is the identity.
    pub fn is_identity(&self) -> bool {
        self.a == T::zero() && self.b == T::zero()
    }

    /// `a = 0, b ≠ 0`: the left half of the interval is pointwise fixed.
    pub fn is_left_identity(&self) -> bool {
        self.a == T::zero() && self.b != T::zero()
    }

    /// `ab ≠ 0`, the regime with the invariant interval and only repelling cycles.
    pub fn is_nondegenerate(&self) -> bool {
        self.a != T::zero() && self.b != T::zero()
    }

    /// Parameters of the conjugate map `f_{b,a}`.
    pub fn swapped(&self) -> Self {
        Self {
            a: self.b,
            b: self.a,
        }
    }

    /// Evaluates `f(x)` for `x ∈ [0, 1]`.
    pub fn eval(&self, x: T) -> Result<T> {
        let x = check_point(x)?;
        let y = self.branch_value(Branch::of(x), x);
        settle(y, x)
    }

    /// Branch formula evaluation without the domain check. The result is
    /// clamped when it leaves `[0, 1]` by a few ulps; callers feed points that
    /// are already in range.
    #[inline]
    pub fn apply(&self, x: T) -> T {
        let y = self.branch_value(Branch::of(x), x);
        clamp_ulps(y)
    }

    /// Evaluates the formula of `branch` at `x`, regardless of which side of
    /// 1/2 the point lies on. Used to continue `f` across the jump when
    /// working on one continuity piece of an iterate.
    #[inline]
    pub fn branch_value(&self, branch: Branch, x: T) -> T {
        match branch {
            Branch::Left => x * (T::one() + self.a - self.a * x),
            Branch::Right => x * (T::one() - self.b + self.b * x),
        }
    }

    /// Derivative of `f` at `x`; `None` at the discontinuity `x = 1/2`.
    pub fn derivative(&self, x: T) -> Result<Option<T>> {
        let x = check_point(x)?;
        if x == half() {
            return Ok(None);
        }
        Ok(Some(self.branch_derivative(Branch::of(x), x)))
    }

    /// `1 + a - 2ax` on the left, `1 - b + 2bx` on the right.
    #[inline]
    pub fn branch_derivative(&self, branch: Branch, x: T) -> T {
        let two = T::lit(2.0);
        match branch {
            Branch::Left => T::one() + self.a - two * self.a * x,
            Branch::Right => T::one() - self.b + two * self.b * x,
        }
    }

    /// One-sided limits of the branch derivative formulas at 1/2.
    /// Both equal 1 for every parameter pair.
    pub fn derivative_limits_at_half(&self) -> (T, T) {
        (
            self.branch_derivative(Branch::Left, half()),
            self.branch_derivative(Branch::Right, half()),
        )
    }

    /// `f^n(x0)`.
    pub fn iterate(&self, x0: T, n: usize) -> Result<T> {
        let mut x = check_point(x0)?;
        for _ in 0..n {
            x = settle(self.branch_value(Branch::of(x), x), x)?;
        }
        Ok(x)
    }

    /// Compares `h(f_{a,b}(x))` with `f_{b,a}(h(x))` for `h(x) = 1 - x`.
    pub fn conjugacy_check(&self, x: T) -> Result<ConjugacyCheck<T>> {
        let x = check_point(x)?;
        let lhs = T::one() - self.eval(x)?;
        let rhs = self.swapped().eval(T::one() - x)?;
        Ok(ConjugacyCheck {
            lhs,
            rhs,
            boundary: x == half(),
        })
    }

    /// The preimage of `y` under the given branch, if it lies in that
    /// branch's domain (`[0, 1/2]` for `Left`, `(1/2, 1]` for `Right`).
    ///
    /// Uses the cancellation-free root `x = 2y / (B + sqrt(B² ± 4cy))`.
    pub fn preimage(&self, branch: Branch, y: T) -> Option<T> {
        if !(y >= T::zero() && y <= T::one()) {
            return None;
        }
        let two = T::lit(2.0);
        let four = T::lit(4.0);
        let x = match branch {
            // a x² - (1 + a) x + y = 0, smaller root
            Branch::Left => {
                let lin = T::one() + self.a;
                let disc = lin * lin - four * self.a * y;
                if disc < T::zero() {
                    return None;
                }
                two * y / (lin + disc.sqrt())
            }
            // b x² + (1 - b) x - y = 0, non-negative root
            Branch::Right => {
                let lin = T::one() - self.b;
                let disc = lin * lin + four * self.b * y;
                let den = lin + disc.sqrt();
                if den == T::zero() {
                    return None;
                }
                two * y / den
            }
        };
        (Branch::of(x) == branch && x <= T::one()).then_some(x)
    }
}

/// Which formula of the map applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Branch {
    /// `x ≤ 1/2`, inclusive at the jump.
    Left,
    /// `x > 1/2`.
    Right,
}

impl Branch {
    #[inline]
    pub fn of<T: Scalar>(x: T) -> Self {
        if x <= half() {
            Branch::Left
        } else {
            Branch::Right
        }
    }
}

/// A point tagged with the branch that acts on it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BranchPoint<T> {
    pub x: T,
    pub branch: Branch,
}

impl<T: Scalar> BranchPoint<T> {
    pub fn new(x: T) -> Result<Self> {
        let x = check_point(x)?;
        Ok(Self {
            x,
            branch: Branch::of(x),
        })
    }
}

/// Both sides of the conjugacy identity at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConjugacyCheck<T> {
    pub lhs: T,
    pub rhs: T,
    /// `x = 1/2`, where `h` flips the branch inclusivity and the sides may differ.
    pub boundary: bool,
}

impl<T: Scalar> ConjugacyCheck<T> {
    pub fn gap(&self) -> T {
        (self.lhs - self.rhs).abs()
    }
}

fn check_unit<T: Scalar>(name: &'static str, v: T) -> Result<()> {
    if v >= T::zero() && v <= T::one() {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name,
            value: v.to_f64_lossy(),
            lo: 0.0,
            hi: 1.0,
        })
    }
}

fn tolerance<T: Scalar>() -> T {
    T::lit(CLAMP_ULPS) * T::epsilon()
}

pub(crate) fn check_point<T: Scalar>(x: T) -> Result<T> {
    let tol = tolerance::<T>();
    if x >= -tol && x <= T::one() + tol {
        Ok(x.max(T::zero()).min(T::one()))
    } else {
        Err(Error::Domain {
            x: x.to_f64_lossy(),
        })
    }
}

#[inline]
fn clamp_ulps<T: Scalar>(y: T) -> T {
    y.max(T::zero()).min(T::one())
}

fn settle<T: Scalar>(y: T, x: T) -> Result<T> {
    let tol = tolerance::<T>();
    if y >= -tol && y <= T::one() + tol {
        Ok(clamp_ulps(y))
    } else {
        Err(Error::NumericIntegrity(format!(
            "f({x:e}) = {y:e} left the unit interval"
        )))
    }
}
