//! Solver and certification toolkit for the hyperplane ham sandwich problem.
//!
//! Given finitely many weighted families of affine hyperplanes in `R^d`, find
//! a line `L = R e` through the origin and a point `v = x e` on it such that,
//! for every family, at least half of the mass meets (or is parallel to) each
//! of the two closed rays of `L` starting at `v`. The classical point-measure
//! bisection problem is supported through the same machinery, and
//! [`obstruction`] decides the mod-2 Euler class criteria behind existence.

pub mod error;
pub mod generate;
pub mod geometry;
mod linalg;
pub mod measure;
pub mod obstruction;
pub mod scalar;
pub mod solver;

pub use error::{Error, Result};
pub use geometry::{star_sides, Direction, HopfPoint, Hyperplane, Incidence};
pub use measure::{
    all_satisfied, verify_classical, verify_star, Extended, MedianInterval, PointFamily,
    SideReport, WeightedFamily,
};
pub use num_rational::BigRational;
pub use obstruction::{
    euler_power_closed_form, euler_power_reduce, euler_vanishes, fw_applicable, invert_total_class,
    ProjectiveClass, TotalSWClass, TruncatedClass,
};
pub use scalar::Scalar;

/// Exact rational scalar.
pub type Rational = BigRational;

pub type HyperplaneQ = Hyperplane<Rational>;
pub type Hyperplane64 = Hyperplane<f64>;
pub type HopfPointQ = HopfPoint<Rational>;
pub type HopfPoint64 = HopfPoint<f64>;
pub type DirectionQ = Direction<Rational>;
pub type Direction64 = Direction<f64>;
pub type WeightedFamilyQ = WeightedFamily<Rational>;
pub type WeightedFamily64 = WeightedFamily<f64>;
pub type PointFamilyQ = PointFamily<Rational>;
pub type PointFamily64 = PointFamily<f64>;

pub use solver::{
    choose_x, detect_case_ii, gap, solve_auto, solve_classical, solve_classical_exact_2d,
    solve_exact_2d, solve_sweep, solve_sweep_all, Certificate, Extent, GapValue, Instance, Method,
    Mode, Solution, SweepConfig, SweepOutcome, Witness,
};

pub type InstanceQ = Instance<Rational>;
pub type Instance64 = Instance<f64>;
pub type SolutionQ = Solution<Rational>;
pub type Solution64 = Solution<f64>;
