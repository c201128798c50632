//! Tolerance-aware predicates for the orthogonality relations of normed
//! spaces: Birkhoff-James, isosceles, the rho family and the semi-inner
//! product flavor, plus a direction scan over 2-D sections.

use serde::{Deserialize, Serialize};

use crate::derivatives::{rho, rho_minus, rho_plus, rho_star};
use crate::error::{Error, Result};
use crate::linalg::independent;
use crate::norms::NormedSpace;
use crate::vector::{approx_zero, Tolerance, Vector};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Flavor {
    /// ||x|| <= ||x + t y|| for all real t.
    Birkhoff,
    /// ||x + y|| = ||x - y||.
    Isosceles,
    RhoMinus,
    RhoPlus,
    Rho,
    RhoStar,
    /// [y|x] = 0 for the unique semi-inner product; smooth spaces only.
    Sip,
}

impl Flavor {
    pub const ALL: [Flavor; 7] = [
        Flavor::Birkhoff,
        Flavor::Isosceles,
        Flavor::RhoMinus,
        Flavor::RhoPlus,
        Flavor::Rho,
        Flavor::RhoStar,
        Flavor::Sip,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Flavor::Birkhoff => "b",
            Flavor::Isosceles => "i",
            Flavor::RhoMinus => "rho_minus",
            Flavor::RhoPlus => "rho_plus",
            Flavor::Rho => "rho",
            Flavor::RhoStar => "rho_star",
            Flavor::Sip => "s",
        }
    }
}

impl std::str::FromStr for Flavor {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "b" | "birkhoff" => Ok(Flavor::Birkhoff),
            "i" | "isosceles" => Ok(Flavor::Isosceles),
            "rho_minus" | "rho-" => Ok(Flavor::RhoMinus),
            "rho_plus" | "rho+" => Ok(Flavor::RhoPlus),
            "rho" => Ok(Flavor::Rho),
            "rho_star" | "rho*" => Ok(Flavor::RhoStar),
            "s" | "sip" => Ok(Flavor::Sip),
            other => Err(Error::Parse(format!("unknown flavor {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct WitnessPair {
    pub x: Vector,
    pub y: Vector,
}

/// Outcome of a tolerance-based decision: the residual, the normalizer it was
/// compared against, the tolerance in force, and an optional witness pair.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Verdict {
    pub holds: bool,
    pub residual: f64,
    pub scale: f64,
    pub tol_used: Tolerance,
    pub witness: Option<WitnessPair>,
}

impl Verdict {
    pub fn decide(residual: f64, scale: f64, tol: &Tolerance) -> Result<Self> {
        Ok(Verdict {
            holds: approx_zero(residual, scale, tol)?,
            residual,
            scale,
            tol_used: tol.clone(),
            witness: None,
        })
    }

    pub fn with_witness(mut self, x: Vector, y: Vector) -> Self {
        self.witness = Some(WitnessPair { x, y });
        self
    }
}

/// Decides x perp y for the requested flavor.
///
/// Residual/normalizer pairs: Birkhoff uses the derivative characterization
/// rho_- <= 0 <= rho_+ with residual max(rho_-, 0) + max(-rho_+, 0) over
/// ||x|| ||y||; isosceles uses | ||x+y|| - ||x-y|| | over ||x|| + ||y||; the
/// rho family uses |rho_flavor| over ||x|| ||y|| (squared norms for
/// rho_star). Zero vectors are orthogonal to everything, for every flavor.
pub fn is_orthogonal(
    space: &NormedSpace,
    x: &Vector,
    y: &Vector,
    flavor: Flavor,
    tol: &Tolerance,
) -> Result<Verdict> {
    space.check_dim(x)?;
    space.check_dim(y)?;
    if flavor == Flavor::Sip && !space.is_smooth_family() {
        return Err(Error::SemiInnerProductNotUnique);
    }
    let nx = space.norm(x)?;
    let ny = space.norm(y)?;
    if nx == 0.0 || ny == 0.0 {
        return Verdict::decide(0.0, 0.0, tol);
    }
    let (residual, scale) = match flavor {
        Flavor::Birkhoff => {
            let rm = rho_minus(space, x, y)?.value;
            let rp = rho_plus(space, x, y)?.value;
            (rm.max(0.0) + (-rp).max(0.0), nx * ny)
        }
        Flavor::Isosceles => {
            let plus = space.norm(&x.add(y))?;
            let minus = space.norm(&x.sub(y))?;
            ((plus - minus).abs(), nx + ny)
        }
        Flavor::RhoMinus => (rho_minus(space, x, y)?.value.abs(), nx * ny),
        Flavor::RhoPlus => (rho_plus(space, x, y)?.value.abs(), nx * ny),
        Flavor::Rho | Flavor::Sip => (rho(space, x, y)?.abs(), nx * ny),
        Flavor::RhoStar => (rho_star(space, x, y)?.abs(), nx * nx * ny * ny),
    };
    Verdict::decide(residual, scale, tol)
}

/// Signed residual used by the direction scan: the underlying quantity whose
/// zero set defines the relation. For Birkhoff the value is positive when
/// rho_- > 0 (the window [rho_-, rho_+] sits above zero), negative when
/// rho_+ < 0, and zero inside the window, so crossings are visible even when
/// the window falls between grid points.
fn signed_residual(space: &NormedSpace, x: &Vector, y: &Vector, flavor: Flavor) -> Result<f64> {
    Ok(match flavor {
        Flavor::Birkhoff => {
            let rm = rho_minus(space, x, y)?.value;
            let rp = rho_plus(space, x, y)?.value;
            rm.max(0.0) - (-rp).max(0.0)
        }
        Flavor::Isosceles => space.norm(&x.add(y))? - space.norm(&x.sub(y))?,
        Flavor::RhoMinus => rho_minus(space, x, y)?.value,
        Flavor::RhoPlus => rho_plus(space, x, y)?.value,
        Flavor::Rho | Flavor::Sip => rho(space, x, y)?,
        Flavor::RhoStar => rho_star(space, x, y)?,
    })
}

/// Independent check of Birkhoff-James orthogonality: minimizes the convex
/// map t -> ||x + t y|| by golden-section search on [-B, B] with
/// B = 2 ||x|| / ||y|| + 1, and holds iff the minimum is not below ||x||
/// beyond tolerance.
pub fn birkhoff_minimization_oracle(
    space: &NormedSpace,
    x: &Vector,
    y: &Vector,
    tol: &Tolerance,
) -> Result<Verdict> {
    space.check_dim(x)?;
    space.check_dim(y)?;
    let nx = space.norm(x)?;
    let ny = space.norm(y)?;
    if nx == 0.0 || ny == 0.0 {
        return Verdict::decide(0.0, 0.0, tol);
    }
    let bound = 2.0 * nx / ny + 1.0;
    let f = |t: f64| -> f64 {
        let shifted = y.scaled_add(t, x);
        space.norm(&shifted).expect("dims checked")
    };
    let (_, fmin) = golden_section_minimize(f, -bound, bound, 200);
    let defect = (nx - fmin).max(0.0);
    Verdict::decide(defect, nx, tol)
}

/// Golden-section search for the minimum of a convex `f` on [a, b].
fn golden_section_minimize(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, max_evals: usize) -> (f64, f64) {
    const PHI: f64 = 1.618_033_988_749_895;
    const RESP: f64 = 2.0 - PHI;

    let xtol = 1e-12 * (b - a).abs().max(1.0);
    let mut x1 = a + RESP * (b - a);
    let mut x2 = b - RESP * (b - a);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    let mut evals = 2;

    while evals < max_evals && (b - a).abs() > xtol {
        if f1 < f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = a + RESP * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = b - RESP * (b - a);
            f2 = f(x2);
        }
        evals += 1;
    }

    if f1 < f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct AngleSample {
    pub angle: f64,
    pub signed_residual: f64,
    pub verdict: Verdict,
}

/// Residual profile of a flavor over the directions
/// y(theta) = cos(theta) u + sin(theta) v, theta on a uniform grid of [0, pi).
#[derive(Debug, Clone, Serialize)]
pub struct OrthogonalityScan {
    pub samples: Vec<AngleSample>,
    /// Grid indices k where the relation holds at theta_k or the signed
    /// residual changes sign between theta_k and theta_{k+1}.
    pub zero_cells: Vec<usize>,
}

pub fn sample_orthogonal_set(
    space: &NormedSpace,
    x: &Vector,
    u: &Vector,
    v: &Vector,
    flavor: Flavor,
    resolution: usize,
    tol: &Tolerance,
) -> Result<OrthogonalityScan> {
    space.check_dim(x)?;
    space.check_dim(u)?;
    space.check_dim(v)?;
    if resolution < 8 {
        return Err(Error::InvalidArgument("resolution must be >= 8".into()));
    }
    if !independent(u.coords(), v.coords()) {
        return Err(Error::LinearlyDependent);
    }
    let mut samples = Vec::with_capacity(resolution);
    // crossing detection tracks the functions whose zeros define the
    // relation; for rho_star those are the two factors rho_- and rho_+
    // separately, since their product touches zero without a sign change at
    // smooth points
    let mut carriers: Vec<Vec<f64>> = Vec::with_capacity(resolution);
    for k in 0..resolution {
        let angle = std::f64::consts::PI * k as f64 / resolution as f64;
        let dir = u.scale(angle.cos()).add(&v.scale(angle.sin()));
        let verdict = is_orthogonal(space, x, &dir, flavor, tol)?;
        let signed = signed_residual(space, x, &dir, flavor)?;
        carriers.push(match flavor {
            Flavor::RhoStar => vec![
                rho_minus(space, x, &dir)?.value,
                rho_plus(space, x, &dir)?.value,
            ],
            _ => vec![signed],
        });
        samples.push(AngleSample {
            angle,
            signed_residual: signed,
            verdict,
        });
    }
    let mut zero_cells = Vec::new();
    for k in 0..resolution {
        let crossing = k + 1 < resolution
            && carriers[k].iter().zip(&carriers[k + 1]).any(|(a, b)| {
                a.signum() != b.signum() && *a != 0.0 && *b != 0.0
            });
        if samples[k].verdict.holds || crossing {
            zero_cells.push(k);
        }
    }
    Ok(OrthogonalityScan {
        samples,
        zero_cells,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(coords: &[f64]) -> Vector {
        Vector::new(coords.to_vec()).unwrap()
    }

    #[test]
    fn example_birkhoff_holds_rho_star_fails() {
        let sp = NormedSpace::l1(3);
        let tol = Tolerance::default();
        let x = v(&[1.0, 0.0, 0.0]);
        let y = v(&[1.0, 1.0, 1.0]);
        let b = is_orthogonal(&sp, &x, &y, Flavor::Birkhoff, &tol).unwrap();
        assert!(b.holds);
        let rs = is_orthogonal(&sp, &x, &y, Flavor::RhoStar, &tol).unwrap();
        assert!(!rs.holds);
        assert_eq!(rs.residual, 3.0);

        let z = v(&[1.0, 1.0, 0.0]);
        assert!(is_orthogonal(&sp, &x, &z, Flavor::RhoStar, &tol).unwrap().holds);
        assert!(!is_orthogonal(&sp, &x, &z, Flavor::RhoPlus, &tol).unwrap().holds);
        assert!(!is_orthogonal(&sp, &x, &z, Flavor::Rho, &tol).unwrap().holds);
    }

    #[test]
    fn zero_vector_is_orthogonal_to_everything() {
        let sp = NormedSpace::l1(2);
        let tol = Tolerance::default();
        let x = v(&[1.0, -2.0]);
        let zero = Vector::zeros(2);
        for flavor in [
            Flavor::Birkhoff,
            Flavor::Isosceles,
            Flavor::RhoMinus,
            Flavor::RhoPlus,
            Flavor::Rho,
            Flavor::RhoStar,
        ] {
            assert!(is_orthogonal(&sp, &x, &zero, flavor, &tol).unwrap().holds);
            assert!(is_orthogonal(&sp, &zero, &x, flavor, &tol).unwrap().holds);
        }
    }

    #[test]
    fn sip_flavor_needs_smooth_space() {
        let tol = Tolerance::default();
        let x = v(&[1.0, 0.0]);
        let y = v(&[0.0, 1.0]);
        assert!(is_orthogonal(&NormedSpace::l2(2), &x, &y, Flavor::Sip, &tol)
            .unwrap()
            .holds);
        assert!(matches!(
            is_orthogonal(&NormedSpace::l1(2), &x, &y, Flavor::Sip, &tol),
            Err(Error::SemiInnerProductNotUnique)
        ));
    }

    #[test]
    fn minimization_oracle_agrees_on_the_example() {
        let sp = NormedSpace::l1(3);
        let tol = Tolerance::default();
        let x = v(&[1.0, 0.0, 0.0]);
        let y = v(&[1.0, 1.0, 1.0]);
        assert!(birkhoff_minimization_oracle(&sp, &x, &y, &tol).unwrap().holds);

        let sp2 = NormedSpace::l2(2);
        let e1 = v(&[1.0, 0.0]);
        let oracle = birkhoff_minimization_oracle(&sp2, &e1, &e1, &tol).unwrap();
        assert!(!oracle.holds); // minimum 0 at t = -1
    }

    #[test]
    fn scan_finds_the_euclidean_zero() {
        let sp = NormedSpace::l2(2);
        let tol = Tolerance::default();
        let x = v(&[1.0, 0.0]);
        let scan = sample_orthogonal_set(
            &sp,
            &x,
            &v(&[1.0, 0.0]),
            &v(&[0.0, 1.0]),
            Flavor::Rho,
            8,
            &tol,
        )
        .unwrap();
        // rho(x, y(theta)) = cos(theta): zero at theta = pi/2, grid index 4
        assert!(scan.zero_cells.contains(&4));
        assert!(scan.samples[4].verdict.holds);
    }

    #[test]
    fn scan_rejects_dependent_plane() {
        let sp = NormedSpace::l2(2);
        let tol = Tolerance::default();
        let x = v(&[1.0, 0.0]);
        let err = sample_orthogonal_set(&sp, &x, &x.clone(), &x.scale(2.0), Flavor::Rho, 8, &tol);
        assert!(matches!(err, Err(Error::LinearlyDependent)));
    }

    #[test]
    fn scan_zero_sets_coincide_in_l2() {
        let sp = NormedSpace::l2(2);
        let tol = Tolerance::default();
        let x = v(&[0.6, 0.8]);
        let mut cells = Vec::new();
        for flavor in [Flavor::Birkhoff, Flavor::Isosceles, Flavor::Rho, Flavor::RhoStar] {
            let scan = sample_orthogonal_set(
                &sp,
                &x,
                &Vector::basis(2, 0),
                &Vector::basis(2, 1),
                flavor,
                16,
                &tol,
            )
            .unwrap();
            cells.push(scan.zero_cells);
        }
        for c in &cells[1..] {
            assert_eq!(c, &cells[0]);
        }
    }

    #[test]
    fn scan_l1_contains_example_direction() {
        let sp = NormedSpace::l1(3);
        let tol = Tolerance::default();
        let x = v(&[1.0, 0.0, 0.0]);
        let scan = sample_orthogonal_set(
            &sp,
            &x,
            &Vector::basis(3, 0),
            &Vector::basis(3, 1),
            Flavor::RhoStar,
            8,
            &tol,
        )
        .unwrap();
        // theta = pi/4 (grid index 2) gives direction (1, 1, 0) up to scale,
        // which is rho_star-orthogonal to x
        assert!(scan.samples[2].verdict.holds);
    }
}
