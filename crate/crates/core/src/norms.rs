//! Norm families with evaluation and exact one-sided directional derivatives
//! of t -> ||x + t y|| at t = 0.
//!
//! Supported families: l1, l-infinity, lp (1 < p < oo), weighted lp, and
//! polyhedral norms ||x|| = max_j |<a_j, x>| given by a full-column-rank
//! matrix of functionals.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::rank;
use crate::vector::Vector;

/// Relative tolerance for detecting active coordinates / active functionals
/// of max-type norms; guards against floating-point ties.
const ACTIVE_RTOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "variant", rename_all = "snake_case")]
pub enum NormSpec {
    L1,
    Linf,
    Lp { p: f64 },
    WeightedLp { p: f64, weights: Vec<f64> },
    Polyhedral { rows: Vec<Vec<f64>> },
}

impl NormSpec {
    pub fn label(&self) -> String {
        match self {
            NormSpec::L1 => "l1".into(),
            NormSpec::Linf => "linf".into(),
            NormSpec::Lp { p } => format!("lp:{p}"),
            NormSpec::WeightedLp { p, .. } => format!("wlp:{p}"),
            NormSpec::Polyhedral { rows } => format!("poly[{}]", rows.len()),
        }
    }
}

/// A finite-dimensional real normed space (X, ||.||).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormedSpace {
    dim: usize,
    spec: NormSpec,
}

impl NormedSpace {
    pub fn new(dim: usize, spec: NormSpec) -> Result<Self> {
        if dim < 1 {
            return Err(Error::InvalidNorm("dimension must be >= 1".into()));
        }
        match &spec {
            NormSpec::L1 | NormSpec::Linf => {}
            NormSpec::Lp { p } => validate_p(*p)?,
            NormSpec::WeightedLp { p, weights } => {
                validate_p(*p)?;
                if weights.len() != dim {
                    return Err(Error::InvalidNorm(format!(
                        "expected {dim} weights, got {}",
                        weights.len()
                    )));
                }
                if weights.iter().any(|w| !w.is_finite() || *w <= 0.0) {
                    return Err(Error::InvalidNorm(
                        "weights must be finite and strictly positive".into(),
                    ));
                }
            }
            NormSpec::Polyhedral { rows } => {
                if rows.is_empty() {
                    return Err(Error::InvalidNorm("polyhedral norm needs rows".into()));
                }
                if rows.iter().any(|r| r.len() != dim) {
                    return Err(Error::InvalidNorm(format!(
                        "every polyhedral row must have {dim} entries"
                    )));
                }
                if rows
                    .iter()
                    .any(|r| r.iter().any(|a| !a.is_finite()))
                {
                    return Err(Error::InvalidNorm(
                        "polyhedral rows must be finite".into(),
                    ));
                }
                // full column rank <=> ||x|| = 0 only at x = 0
                if rank(rows, dim) < dim {
                    return Err(Error::InvalidNorm(
                        "polyhedral functionals are rank deficient".into(),
                    ));
                }
            }
        }
        Ok(NormedSpace { dim, spec })
    }

    pub fn l1(dim: usize) -> Self {
        NormedSpace::new(dim, NormSpec::L1).expect("l1")
    }

    pub fn linf(dim: usize) -> Self {
        NormedSpace::new(dim, NormSpec::Linf).expect("linf")
    }

    pub fn lp(dim: usize, p: f64) -> Result<Self> {
        NormedSpace::new(dim, NormSpec::Lp { p })
    }

    pub fn l2(dim: usize) -> Self {
        NormedSpace::new(dim, NormSpec::Lp { p: 2.0 }).expect("l2")
    }

    pub fn weighted_lp(dim: usize, p: f64, weights: Vec<f64>) -> Result<Self> {
        NormedSpace::new(dim, NormSpec::WeightedLp { p, weights })
    }

    pub fn polyhedral(dim: usize, rows: Vec<Vec<f64>>) -> Result<Self> {
        NormedSpace::new(dim, NormSpec::Polyhedral { rows })
    }

    /// Loads a polyhedral norm from a CSV file, one functional per row,
    /// plain decimal floats, no header.
    pub fn polyhedral_from_csv(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        let mut rows = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let row = line
                .split(',')
                .map(|f| {
                    f.trim().parse::<f64>().map_err(|e| {
                        Error::Parse(format!("{}:{}: bad float {f:?}: {e}", path.display(), lineno + 1))
                    })
                })
                .collect::<Result<Vec<f64>>>()?;
            rows.push(row);
        }
        let dim = rows.first().map(|r| r.len()).unwrap_or(0);
        if dim == 0 {
            return Err(Error::InvalidNorm(format!(
                "{}: no functionals found",
                path.display()
            )));
        }
        NormedSpace::polyhedral(dim, rows)
    }

    /// Parses the flat norm grammar `l1 | linf | lp:<p> | wlp:<p>:<w1,...> | poly:<path.csv>`.
    pub fn parse(grammar: &str, dim: usize) -> Result<Self> {
        let g = grammar.trim();
        if g == "l1" {
            return NormedSpace::new(dim, NormSpec::L1);
        }
        if g == "linf" {
            return NormedSpace::new(dim, NormSpec::Linf);
        }
        if let Some(rest) = g.strip_prefix("lp:") {
            let p = rest
                .parse::<f64>()
                .map_err(|e| Error::Parse(format!("bad p in {g:?}: {e}")))?;
            return NormedSpace::lp(dim, p);
        }
        if let Some(rest) = g.strip_prefix("wlp:") {
            let (p_str, w_str) = rest
                .split_once(':')
                .ok_or_else(|| Error::Parse(format!("expected wlp:<p>:<w1,...>, got {g:?}")))?;
            let p = p_str
                .parse::<f64>()
                .map_err(|e| Error::Parse(format!("bad p in {g:?}: {e}")))?;
            let weights = w_str
                .split(',')
                .map(|f| {
                    f.trim()
                        .parse::<f64>()
                        .map_err(|e| Error::Parse(format!("bad weight {f:?}: {e}")))
                })
                .collect::<Result<Vec<f64>>>()?;
            return NormedSpace::weighted_lp(dim, p, weights);
        }
        if let Some(path) = g.strip_prefix("poly:") {
            let space = NormedSpace::polyhedral_from_csv(std::path::Path::new(path))?;
            if space.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: space.dim(),
                });
            }
            return Ok(space);
        }
        if let Some(spec) = g.strip_prefix("polyrows:") {
            let rows = spec
                .split(';')
                .map(|row| {
                    row.split(',')
                        .map(|f| {
                            f.trim()
                                .parse::<f64>()
                                .map_err(|e| Error::Parse(format!("bad entry {f:?}: {e}")))
                        })
                        .collect::<Result<Vec<f64>>>()
                })
                .collect::<Result<Vec<Vec<f64>>>>()?;
            return NormedSpace::polyhedral(dim, rows);
        }
        Err(Error::Parse(format!(
            "unknown norm {g:?} (expected l1 | linf | lp:<p> | wlp:<p>:<w1,...> | poly:<path.csv> | polyrows:<a11,a12;a21,a22;...>)"
        )))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn spec(&self) -> &NormSpec {
        &self.spec
    }

    /// True for the norm families that are Gateaux differentiable away from
    /// the origin (lp and weighted lp with 1 < p < oo).
    pub fn is_smooth_family(&self) -> bool {
        matches!(self.spec, NormSpec::Lp { .. } | NormSpec::WeightedLp { .. })
    }

    pub fn check_dim(&self, v: &Vector) -> Result<()> {
        if v.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: v.dim(),
            });
        }
        Ok(())
    }

    /// ||x||.
    pub fn norm(&self, x: &Vector) -> Result<f64> {
        self.check_dim(x)?;
        Ok(self.norm_unchecked(x.coords()))
    }

    fn norm_unchecked(&self, x: &[f64]) -> f64 {
        match &self.spec {
            NormSpec::L1 => x.iter().map(|c| c.abs()).sum(),
            NormSpec::Linf => x.iter().map(|c| c.abs()).fold(0.0, f64::max),
            NormSpec::Lp { p } => lp_norm(x, *p, None),
            NormSpec::WeightedLp { p, weights } => lp_norm(x, *p, Some(weights)),
            NormSpec::Polyhedral { rows } => rows
                .iter()
                .map(|a| dot(a, x).abs())
                .fold(0.0, f64::max),
        }
    }

    /// Right derivative of t -> ||x + t y|| at t = 0 (exact closed form).
    ///
    /// At x = 0 the function is t -> |t| ||y||, so the value is ||y||.
    pub fn dplus(&self, x: &Vector, y: &Vector) -> Result<f64> {
        self.check_dim(x)?;
        self.check_dim(y)?;
        Ok(self.dplus_unchecked(x.coords(), y.coords()))
    }

    /// Left derivative of t -> ||x + t y|| at t = 0.
    ///
    /// Computed as -dplus(x, -y); the reflection identity therefore holds
    /// bit-exactly.
    pub fn dminus(&self, x: &Vector, y: &Vector) -> Result<f64> {
        self.check_dim(x)?;
        self.check_dim(y)?;
        let neg_y: Vec<f64> = y.coords().iter().map(|c| -c).collect();
        Ok(-self.dplus_unchecked(x.coords(), &neg_y))
    }

    fn dplus_unchecked(&self, x: &[f64], y: &[f64]) -> f64 {
        match &self.spec {
            NormSpec::L1 => {
                let mut d = 0.0;
                for (&xi, &yi) in x.iter().zip(y) {
                    if xi > 0.0 {
                        d += yi;
                    } else if xi < 0.0 {
                        d -= yi;
                    } else {
                        d += yi.abs();
                    }
                }
                d
            }
            NormSpec::Linf => {
                let nx = x.iter().map(|c| c.abs()).fold(0.0, f64::max);
                if nx == 0.0 {
                    return y.iter().map(|c| c.abs()).fold(0.0, f64::max);
                }
                let cut = nx * (1.0 - ACTIVE_RTOL);
                let mut d = f64::NEG_INFINITY;
                for (&xi, &yi) in x.iter().zip(y) {
                    if xi.abs() >= cut {
                        let slope = if xi > 0.0 { yi } else { -yi };
                        d = d.max(slope);
                    }
                }
                d
            }
            NormSpec::Lp { p } => lp_dplus(x, y, *p, None),
            NormSpec::WeightedLp { p, weights } => lp_dplus(x, y, *p, Some(weights)),
            NormSpec::Polyhedral { rows } => {
                let vals: Vec<f64> = rows.iter().map(|a| dot(a, x)).collect();
                let nx = vals.iter().map(|v| v.abs()).fold(0.0, f64::max);
                if nx == 0.0 {
                    return rows
                        .iter()
                        .map(|a| dot(a, y).abs())
                        .fold(0.0, f64::max);
                }
                let cut = nx * (1.0 - ACTIVE_RTOL);
                let mut d = f64::NEG_INFINITY;
                for (a, &v) in rows.iter().zip(&vals) {
                    if v.abs() >= cut {
                        let ay = dot(a, y);
                        let slope = if v > 0.0 {
                            ay
                        } else if v < 0.0 {
                            -ay
                        } else {
                            ay.abs()
                        };
                        d = d.max(slope);
                    }
                }
                d
            }
        }
    }
}

fn validate_p(p: f64) -> Result<()> {
    if !p.is_finite() || p <= 1.0 {
        return Err(Error::InvalidNorm(format!(
            "lp requires finite 1 < p < oo, got {p} (use l1/linf for the endpoints)"
        )));
    }
    Ok(())
}

fn dot(a: &[f64], x: &[f64]) -> f64 {
    a.iter().zip(x).map(|(ai, xi)| ai * xi).sum()
}

/// (sum_i w_i |x_i|^p)^(1/p), scaled by max|x_i| to avoid overflow. p = 2
/// uses sqrt and exact squares rather than powf.
fn lp_norm(x: &[f64], p: f64, weights: Option<&[f64]>) -> f64 {
    let m = x.iter().map(|c| c.abs()).fold(0.0, f64::max);
    if m == 0.0 {
        return 0.0;
    }
    let mut s = 0.0;
    for (i, &xi) in x.iter().enumerate() {
        if xi != 0.0 {
            let w = weights.map_or(1.0, |ws| ws[i]);
            let r = xi.abs() / m;
            s += if p == 2.0 { w * (r * r) } else { w * r.powf(p) };
        }
    }
    m * if p == 2.0 { s.sqrt() } else { s.powf(1.0 / p) }
}

/// Gradient form of the lp directional derivative:
/// sum_i w_i (|x_i| / ||x||)^(p-1) sgn(x_i) y_i, and ||y|| at x = 0.
fn lp_dplus(x: &[f64], y: &[f64], p: f64, weights: Option<&[f64]>) -> f64 {
    let nx = lp_norm(x, p, weights);
    if nx == 0.0 {
        return lp_norm(y, p, weights);
    }
    let mut d = 0.0;
    for (i, (&xi, &yi)) in x.iter().zip(y).enumerate() {
        if xi != 0.0 {
            let w = weights.map_or(1.0, |ws| ws[i]);
            let r = if p == 2.0 {
                xi.abs() / nx
            } else {
                (xi.abs() / nx).powf(p - 1.0)
            };
            d += w * r * xi.signum() * yi;
        }
    }
    d
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(coords: &[f64]) -> Vector {
        Vector::new(coords.to_vec()).unwrap()
    }

    #[test]
    fn norm_eval_examples() {
        assert_eq!(NormedSpace::l1(3).norm(&v(&[1.0, 1.0, 1.0])).unwrap(), 3.0);
        assert_eq!(NormedSpace::linf(2).norm(&v(&[1.0, -1.0])).unwrap(), 1.0);
        assert_eq!(NormedSpace::l2(2).norm(&v(&[3.0, 4.0])).unwrap(), 5.0);
    }

    #[test]
    fn norm_eval_dimension_mismatch() {
        let err = NormedSpace::l1(3).norm(&v(&[1.0, 2.0])).unwrap_err();
        assert!(matches!(err, Error::DimensionMismatch { expected: 3, got: 2 }));
    }

    #[test]
    fn l1_one_sided_derivatives() {
        let sp = NormedSpace::l1(3);
        let x = v(&[1.0, 0.0, 0.0]);
        let y = v(&[1.0, 1.0, 1.0]);
        assert_eq!(sp.dplus(&x, &y).unwrap(), 3.0);
        assert_eq!(sp.dminus(&x, &y).unwrap(), -1.0);
        // piecewise evaluation of |1 - t| + |t| around t = 0 from the left
        let w = v(&[-1.0, 1.0, 0.0]);
        assert_eq!(sp.dminus(&x, &w).unwrap(), -2.0);
        assert_eq!(sp.dplus(&x, &w).unwrap(), 0.0);
    }

    #[test]
    fn linf_active_set_derivatives() {
        let sp = NormedSpace::linf(2);
        let x = v(&[1.0, 1.0]);
        let y = v(&[1.0, -1.0]);
        assert_eq!(sp.dplus(&x, &y).unwrap(), 1.0);
        assert_eq!(sp.dminus(&x, &y).unwrap(), -1.0);
        // single active coordinate: two-sided derivative
        let x1 = v(&[1.0, 0.0]);
        assert_eq!(sp.dplus(&x1, &y).unwrap(), 1.0);
        assert_eq!(sp.dminus(&x1, &y).unwrap(), 1.0);
    }

    #[test]
    fn lp_gradient_derivative() {
        let sp = NormedSpace::lp(2, 3.0).unwrap();
        let x = v(&[1.0, 1.0]);
        let y = v(&[1.0, 0.0]);
        let expect = 2f64.powf(-2.0 / 3.0);
        assert!((sp.dplus(&x, &y).unwrap() - expect).abs() < 1e-15);
        // smooth point: both one-sided derivatives coincide
        assert!((sp.dminus(&x, &y).unwrap() - expect).abs() < 1e-15);
    }

    #[test]
    fn zero_point_derivative_is_norm_of_direction() {
        for sp in [
            NormedSpace::l1(2),
            NormedSpace::linf(2),
            NormedSpace::l2(2),
            NormedSpace::polyhedral(2, vec![vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap(),
        ] {
            let zero = Vector::zeros(2);
            let y = v(&[3.0, -4.0]);
            let ny = sp.norm(&y).unwrap();
            assert_eq!(sp.dplus(&zero, &y).unwrap(), ny);
            assert_eq!(sp.dminus(&zero, &y).unwrap(), -ny);
        }
    }

    #[test]
    fn polyhedral_requires_full_rank() {
        let err = NormedSpace::polyhedral(2, vec![vec![1.0, 0.0], vec![2.0, 0.0]]);
        assert!(matches!(err, Err(Error::InvalidNorm(_))));
        assert!(NormedSpace::polyhedral(2, vec![vec![1.0, 0.0], vec![1.0, 1.0]]).is_ok());
    }

    #[test]
    fn polyhedral_matches_linf_when_rows_are_basis() {
        let sp = NormedSpace::polyhedral(2, vec![vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap();
        let li = NormedSpace::linf(2);
        let x = v(&[0.3, -0.9]);
        let y = v(&[-0.4, 0.2]);
        assert_eq!(sp.norm(&x).unwrap(), li.norm(&x).unwrap());
        assert_eq!(sp.dplus(&x, &y).unwrap(), li.dplus(&x, &y).unwrap());
    }

    #[test]
    fn lp_validation() {
        assert!(NormedSpace::lp(2, 1.0).is_err());
        assert!(NormedSpace::lp(2, f64::INFINITY).is_err());
        assert!(NormedSpace::weighted_lp(2, 2.0, vec![1.0, 0.0]).is_err());
        assert!(NormedSpace::weighted_lp(2, 2.0, vec![1.0]).is_err());
    }

    #[test]
    fn parse_grammar() {
        assert!(NormedSpace::parse("l1", 3).is_ok());
        assert!(NormedSpace::parse("linf", 2).is_ok());
        assert!(NormedSpace::parse("lp:3", 2).is_ok());
        assert!(NormedSpace::parse("wlp:2:1,4", 2).is_ok());
        assert!(NormedSpace::parse("polyrows:1,0;0,1;0.75,0.75", 2).is_ok());
        assert!(NormedSpace::parse("l7", 2).is_err());
    }
}
