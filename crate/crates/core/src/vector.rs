//! Finite-dimensional real vectors, the tolerance policy, and deterministic seeds.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A point of a finite-dimensional real space. Coordinates are always finite.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Vector {
    coords: Vec<f64>,
}

impl Vector {
    /// Builds a vector, rejecting empty coordinate lists and non-finite entries.
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::EmptyVector);
        }
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(Error::NonFinite {
                context: "vector coordinate",
            });
        }
        Ok(Vector { coords })
    }

    pub fn zeros(dim: usize) -> Self {
        Vector {
            coords: vec![0.0; dim.max(1)],
        }
    }

    /// The i-th standard basis vector of the given dimension.
    pub fn basis(dim: usize, i: usize) -> Self {
        let mut coords = vec![0.0; dim.max(1)];
        coords[i] = 1.0;
        Vector { coords }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&c| c == 0.0)
    }

    pub fn add(&self, other: &Vector) -> Vector {
        debug_assert_eq!(self.dim(), other.dim());
        Vector {
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &Vector) -> Vector {
        debug_assert_eq!(self.dim(), other.dim());
        Vector {
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn scale(&self, c: f64) -> Vector {
        Vector {
            coords: self.coords.iter().map(|a| c * a).collect(),
        }
    }

    pub fn neg(&self) -> Vector {
        Vector {
            coords: self.coords.iter().map(|a| -a).collect(),
        }
    }

    /// c * self + other.
    pub fn scaled_add(&self, c: f64, other: &Vector) -> Vector {
        debug_assert_eq!(self.dim(), other.dim());
        Vector {
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| c * a + b)
                .collect(),
        }
    }

    /// Euclidean inner product (used for rank and independence tests,
    /// independent of whichever norm the space carries).
    pub fn dot(&self, other: &Vector) -> f64 {
        debug_assert_eq!(self.dim(), other.dim());
        self.coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| a * b)
            .sum()
    }

    pub fn norm2(&self) -> f64 {
        self.dot(self).sqrt()
    }
}

impl std::str::FromStr for Vector {
    type Err = Error;

    /// Parses a comma-separated coordinate list, e.g. `1,0,-2.5`.
    fn from_str(s: &str) -> Result<Self> {
        let coords = s
            .split(',')
            .map(|part| {
                part.trim()
                    .parse::<f64>()
                    .map_err(|e| Error::Parse(format!("bad coordinate {part:?}: {e}")))
            })
            .collect::<Result<Vec<f64>>>()?;
        Vector::new(coords)
    }
}

/// Tolerance policy: absolute/relative thresholds for residual decisions plus
/// the schedule of the numeric one-sided limit and the bisection budget.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Tolerance {
    pub abs_tol: f64,
    pub rel_tol: f64,
    /// Initial step of one-sided difference quotients (scaled per call by the
    /// norms of the inputs).
    pub limit_t0: f64,
    /// Multiplicative step shrink factor, in (0, 1).
    pub limit_shrink: f64,
    /// Smallest step of the quotient schedule.
    pub limit_floor: f64,
    pub max_bisect_iters: u32,
}

impl Tolerance {
    pub fn new(
        abs_tol: f64,
        rel_tol: f64,
        limit_t0: f64,
        limit_shrink: f64,
        limit_floor: f64,
        max_bisect_iters: u32,
    ) -> Result<Self> {
        let tol = Tolerance {
            abs_tol,
            rel_tol,
            limit_t0,
            limit_shrink,
            limit_floor,
            max_bisect_iters,
        };
        tol.validate()?;
        Ok(tol)
    }

    fn validate(&self) -> Result<()> {
        let fields = [
            (self.abs_tol, "abs_tol"),
            (self.rel_tol, "rel_tol"),
            (self.limit_t0, "limit_t0"),
            (self.limit_shrink, "limit_shrink"),
            (self.limit_floor, "limit_floor"),
        ];
        for (v, name) in fields {
            if !v.is_finite() {
                return Err(Error::InvalidTolerance(format!("{name} must be finite")));
            }
        }
        if self.abs_tol < 0.0 || self.rel_tol < 0.0 {
            return Err(Error::InvalidTolerance(
                "abs_tol and rel_tol must be >= 0".into(),
            ));
        }
        if self.limit_t0 <= 0.0 {
            return Err(Error::InvalidTolerance("limit_t0 must be > 0".into()));
        }
        if !(self.limit_shrink > 0.0 && self.limit_shrink < 1.0) {
            return Err(Error::InvalidTolerance(
                "limit_shrink must lie in (0, 1)".into(),
            ));
        }
        if self.limit_floor <= 0.0 || self.limit_floor >= self.limit_t0 {
            return Err(Error::InvalidTolerance(
                "limit_floor must satisfy 0 < limit_floor < limit_t0".into(),
            ));
        }
        if self.max_bisect_iters == 0 {
            return Err(Error::InvalidTolerance(
                "max_bisect_iters must be positive".into(),
            ));
        }
        Ok(())
    }
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance {
            abs_tol: 1e-9,
            rel_tol: 1e-9,
            limit_t0: 0.0625,
            limit_shrink: 0.5,
            // 2^-40, still above the cancellation noise of double quotients.
            limit_floor: 9.094947017729282e-13,
            max_bisect_iters: 200,
        }
    }
}

/// True iff |v| <= abs_tol + rel_tol * scale.
pub fn approx_zero(v: f64, scale: f64, tol: &Tolerance) -> Result<bool> {
    if !v.is_finite() {
        return Err(Error::NonFinite {
            context: "approx_zero value",
        });
    }
    if !scale.is_finite() || scale < 0.0 {
        return Err(Error::NonFinite {
            context: "approx_zero scale",
        });
    }
    Ok(v.abs() <= tol.abs_tol + tol.rel_tol * scale)
}

/// Seed of the deterministic sample streams. Same seed, same stream.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Seed(pub u64);
