//! Scalar abstraction for all numeric kernels.
//!
//! Everything numeric in this crate (stoichiometric matrices, the simplex
//! solver, sweeps, ensemble statistics) is generic over [`Scalar`] so the
//! same code runs in `f32` or `f64`. Concrete `f64` aliases live at the
//! crate root; `f64` is the precision the default tolerances are tuned for.

use std::fmt::{Debug, Display};

use num_traits::{Float, FromPrimitive, ToPrimitive};

/// Floating-point scalar usable by the solver and the flux analyses.
pub trait Scalar:
    Float + FromPrimitive + ToPrimitive + Debug + Display + Default + Send + Sync + 'static
{
    /// Lossy conversion from `f64`, used for defaults and literals.
    ///
    /// Plain `from_f64` is too pessimistic here: it returns `None` for
    /// overflow, but defaults like `1e-9` always have a nearest
    /// representable value in any float type.
    fn from_f64_lossy(value: f64) -> Self {
        Self::from_f64(value).unwrap_or_else(|| {
            if value > 0.0 {
                Self::max_value()
            } else {
                -Self::max_value()
            }
        })
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}
