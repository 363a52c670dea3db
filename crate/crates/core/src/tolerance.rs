use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Numerical slack used by the criteria and the oracle.
///
/// `boundary` decides when an equality such as `|omega| = 1` is treated as
/// active, `psd` is the eigenvalue floor for semidefiniteness, and `residual`
/// is how far below zero an inequality margin may fall and still pass.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub boundary: f64,
    pub psd: f64,
    pub residual: f64,
}

impl Tolerances {
    pub const MAX: f64 = 1e-3;

    pub fn new(boundary: f64, psd: f64, residual: f64) -> Result<Self> {
        let tol = Tolerances {
            boundary,
            psd,
            residual,
        };
        tol.validate()?;
        Ok(tol)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("boundary", self.boundary),
            ("psd", self.psd),
            ("residual", self.residual),
        ] {
            if !(0.0..=Self::MAX).contains(&v) {
                return Err(Error::domain(format!(
                    "tolerance `{name}` = {v} outside [0, {}]",
                    Self::MAX
                )));
            }
        }
        Ok(())
    }

    /// Whether `|lhs - rhs|` is inside the boundary band, scaled by the
    /// magnitudes involved.
    pub fn on_boundary(&self, lhs: f64, rhs: f64) -> bool {
        let scale = 1f64.max(lhs.abs()).max(rhs.abs());
        (lhs - rhs).abs() <= self.boundary * scale
    }

    pub fn passes(&self, residual: f64) -> bool {
        residual >= -self.residual
    }
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            boundary: 1e-9,
            psd: 1e-12,
            residual: 1e-10,
        }
    }
}
