//! Dynamics of the piecewise-continuous interval map
//!
//! ```text
//! f_{a,b}(x) = x(1 + a - a x)  for 0 ≤ x ≤ 1/2
//!              x(1 - b + b x)  for 1/2 < x ≤ 1
//! ```
//!
//! and of the two-species evolution operator it reduces from: orbits, the
//! invariant interval, fixed and periodic points with their stability,
//! Lyapunov exponents and bifurcation sweeps.
//!
//! All numerics are generic over [`Scalar`] (`f32` or `f64`); the aliases
//! below fix the scalar to `f64`, which is what the command-line tool uses.

pub mod chaos;
pub mod error;
pub mod map_core;
pub mod orbits;
pub mod periodic;
pub mod scalar;
pub mod verify;

pub use chaos::{
    band_count, bifurcation_sweep, lyapunov, lyapunov_sweep, BRule, BifurcationSample,
    LyapunovEstimate, LyapunovRow,
};
pub use error::{Error, Result};
pub use map_core::{Branch, BranchPoint, ConjugacyCheck, MapParams};
pub use orbits::{
    entry_time, invariant_interval, orbit, preimage_step, simplex_coefficients, simplex_orbit,
    simplex_piecewise_orbit, InvariantInterval, OrbitPolicy, OrbitRecord, SimplexState,
    Termination,
};
pub use periodic::{
    classify_cycle, find_cycles, fixed_points, odd_period_scan, partition_sets, transition_check,
    two_cycle_closed_form, two_cycle_region_oracle, CycleRecord, CycleScan, FixedPointSet,
    Interval, PartitionSets, Stability,
};
pub use scalar::Scalar;

pub type Params = MapParams<f64>;
pub type Params32 = MapParams<f32>;
pub type Orbit = OrbitRecord<f64>;
pub type Cycle = CycleRecord<f64>;
pub type Simplex = SimplexState<f64>;
pub type Sample = BifurcationSample<f64>;
