//! Space- and operator-level checks: orthogonality preservation by linear
//! maps, similarity, the 1/3-3 bound for isosceles-to-rho_star preservers,
//! smoothness classification with relation-inclusion tables, the
//! delta-parallelogram estimate, norm-comparison constants, moduli of
//! convexity/smoothness, and the orthogonality-space axioms.

use rand::Rng;
use serde::Serialize;

use crate::constructions::{rhostar_projection, thalesian_decompose};
use crate::derivatives::{rho, rho_minus, rho_plus, rho_star, Branch};
use crate::error::{Error, Result};
use crate::linalg::independent;
use crate::norms::NormedSpace;
use crate::orthogonality::{is_orthogonal, Flavor, Verdict, WitnessPair};
use crate::sampling::{deliberate_candidates, rng_from, sample_unit, sample_unit_vectors};
use crate::vector::{approx_zero, Seed, Tolerance, Vector};

/// A dense linear map between two normed spaces (row-major storage).
#[derive(Debug, Clone, Serialize)]
pub struct LinearMap {
    entries: Vec<f64>,
    rows: usize,
    cols: usize,
    domain: NormedSpace,
    codomain: NormedSpace,
}

impl LinearMap {
    pub fn new(rows_data: Vec<Vec<f64>>, domain: NormedSpace, codomain: NormedSpace) -> Result<Self> {
        let rows = rows_data.len();
        if rows != codomain.dim() {
            return Err(Error::DimensionMismatch {
                expected: codomain.dim(),
                got: rows,
            });
        }
        let cols = domain.dim();
        let mut entries = Vec::with_capacity(rows * cols);
        for row in &rows_data {
            if row.len() != cols {
                return Err(Error::DimensionMismatch {
                    expected: cols,
                    got: row.len(),
                });
            }
            for &v in row {
                if !v.is_finite() {
                    return Err(Error::NonFinite {
                        context: "linear map entry",
                    });
                }
                entries.push(v);
            }
        }
        Ok(LinearMap {
            entries,
            rows,
            cols,
            domain,
            codomain,
        })
    }

    /// Square map from a flat row-major entry list on a single space.
    pub fn square(flat: Vec<f64>, space: NormedSpace) -> Result<Self> {
        let dim = space.dim();
        if flat.len() != dim * dim {
            return Err(Error::InvalidArgument(format!(
                "expected {} entries for a {dim}x{dim} map, got {}",
                dim * dim,
                flat.len()
            )));
        }
        let rows_data: Vec<Vec<f64>> = flat.chunks(dim).map(|c| c.to_vec()).collect();
        LinearMap::new(rows_data, space.clone(), space)
    }

    pub fn scaled_identity(space: NormedSpace, c: f64) -> Result<Self> {
        let dim = space.dim();
        let mut flat = vec![0.0; dim * dim];
        for i in 0..dim {
            flat[i * dim + i] = c;
        }
        LinearMap::square(flat, space)
    }

    pub fn domain(&self) -> &NormedSpace {
        &self.domain
    }

    pub fn codomain(&self) -> &NormedSpace {
        &self.codomain
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|&v| v == 0.0)
    }

    pub fn apply(&self, x: &Vector) -> Result<Vector> {
        self.domain.check_dim(x)?;
        let xc = x.coords();
        let coords = (0..self.rows)
            .map(|i| {
                self.entries[i * self.cols..(i + 1) * self.cols]
                    .iter()
                    .zip(xc)
                    .map(|(a, b)| a * b)
                    .sum()
            })
            .collect();
        Vector::new(coords)
    }
}

/// Unit-sphere candidate pool: the deliberate extreme points normalized to
/// the space's unit sphere, followed by `n` seeded random unit vectors.
fn unit_pool(space: &NormedSpace, n: usize, seed: Seed) -> Result<Vec<Vector>> {
    let mut pool = Vec::new();
    for c in deliberate_candidates(space.dim()) {
        let nc = space.norm(&c)?;
        pool.push(c.scale(1.0 / nc));
    }
    pool.extend(sample_unit_vectors(space.dim(), n, seed, space)?);
    Ok(pool)
}

/// Ordered pairs drawn from the deliberate candidates (raw, unnormalized),
/// capped, for planting extreme-point witnesses into sampled checks.
fn deliberate_pairs(dim: usize, cap: usize) -> Vec<(Vector, Vector)> {
    let cands = deliberate_candidates(dim);
    let mut out = Vec::new();
    'outer: for x in &cands {
        for y in &cands {
            if out.len() >= cap {
                break 'outer;
            }
            out.push((x.clone(), y.clone()));
        }
    }
    out
}

fn derived_seed(seed: Seed, salt: u64) -> Seed {
    Seed(seed.0.wrapping_mul(0x9e3779b97f4a7c15).wrapping_add(salt))
}

/// Sampled sup and inf of ||Tx|| over unit vectors: `n` random draws plus the
/// signed basis vectors and +-1 patterns. The sup never exceeds the true
/// operator norm ||T||, the inf never falls below [T].
pub fn operator_norm_estimates(map: &LinearMap, n: usize, seed: Seed) -> Result<(f64, f64)> {
    if n < 1 {
        return Err(Error::InvalidArgument("need at least one sample".into()));
    }
    let mut sup = f64::NEG_INFINITY;
    let mut inf = f64::INFINITY;
    for x in unit_pool(&map.domain, n, seed)? {
        let nv = map.codomain.norm(&map.apply(&x)?)?;
        sup = sup.max(nv);
        inf = inf.min(nv);
    }
    Ok((sup, inf))
}

/// Projection pair (x, p) with rho_star(x, p) = 0 analytically, or None when
/// p is zero up to rounding (y parallel to x makes the exact projection
/// vanish; the float result is dust that must not enter sampled checks).
fn projection_pair(
    space: &NormedSpace,
    x: &Vector,
    y: &Vector,
    branch: Branch,
) -> Result<Option<(Vector, Vector)>> {
    let p = rhostar_projection(space, x, y, branch)?;
    let coef = crate::derivatives::rho_side(space, x, y, branch)? / space.norm(x)?.powi(2);
    let dust = 1e-12 * (space.norm(y)? + coef.abs() * space.norm(x)?);
    if space.norm(&p)? <= dust {
        return Ok(None);
    }
    Ok(Some((x.clone(), p)))
}

/// Pairs (x, p) with rho_star(x, p) = 0 by construction: the projection
/// p = y - (rho_pm(x, y)/||x||^2) x applied to both branches of deliberate
/// and random pairs, plus decomposition pairs from the Thalesian procedure.
fn rho_star_pairs(
    space: &NormedSpace,
    n: usize,
    seed: Seed,
    tol: &Tolerance,
) -> Result<Vec<(Vector, Vector)>> {
    let mut out = Vec::new();
    let mut raw: Vec<(Vector, Vector)> = deliberate_pairs(space.dim(), 128);
    let xs = sample_unit_vectors(space.dim(), n, derived_seed(seed, 1), space)?;
    let ys = sample_unit_vectors(space.dim(), n, derived_seed(seed, 2), space)?;
    raw.extend(xs.into_iter().zip(ys));
    for (i, (x, y)) in raw.iter().enumerate() {
        if out.len() >= n {
            break;
        }
        if x.is_zero() {
            continue;
        }
        let branch = if i % 2 == 0 { Branch::Plus } else { Branch::Minus };
        if let Some(pair) = projection_pair(space, x, y, branch)? {
            out.push(pair);
        }
    }
    // decomposition pairs exercise both relations of the Thalesian output
    let mut rng = rng_from(derived_seed(seed, 3));
    for k in 0..(n / 10).clamp(2, 16) {
        let x = sample_unit(&mut rng, space)?;
        let lambda = [0.5, 1.0, 2.0][k % 3];
        let d = thalesian_decompose(space, &x, lambda, derived_seed(seed, 4 + k as u64), tol)?;
        if d.holds && !d.y.is_zero() {
            out.push((x.clone(), d.y.clone()));
            out.push((x.add(&d.y), x.scale(lambda).sub(&d.y)));
        }
    }
    Ok(out)
}

/// Checks x perp_rho_star y => Tx perp_rho_star Ty on constructed pairs.
/// Returns the first violating pair as witness.
pub fn preserves_rho_star(
    map: &LinearMap,
    n: usize,
    seed: Seed,
    tol: &Tolerance,
) -> Result<Verdict> {
    if map.is_zero() {
        return Err(Error::InvalidArgument("zero map excluded".into()));
    }
    let mut worst = Verdict::decide(0.0, 0.0, tol)?;
    for (x, p) in rho_star_pairs(&map.domain, n, seed, tol)? {
        // generator guarantee, at closed-form accuracy
        if !is_orthogonal(&map.domain, &x, &p, Flavor::RhoStar, tol)?.holds {
            continue;
        }
        let v = is_orthogonal(&map.codomain, &map.apply(&x)?, &map.apply(&p)?, Flavor::RhoStar, tol)?;
        if !v.holds {
            return Ok(v.with_witness(x, p));
        }
        let worst_n = worst.residual / worst.scale.max(f64::MIN_POSITIVE);
        let v_n = v.residual / v.scale.max(f64::MIN_POSITIVE);
        if v_n > worst_n {
            worst = v;
        }
    }
    Ok(worst)
}

/// Decides ||Tx|| = ||T|| ||x|| on the sample: the residual is the largest
/// relative deviation of ||Tx|| from the sampled operator norm over unit x.
/// At least 32 samples are always used.
pub fn similarity_check(map: &LinearMap, n: usize, seed: Seed, tol: &Tolerance) -> Result<Verdict> {
    if map.is_zero() {
        return Err(Error::InvalidArgument("zero map excluded".into()));
    }
    let pool = unit_pool(&map.domain, n.max(32), seed)?;
    let norms: Vec<f64> = pool
        .iter()
        .map(|x| map.codomain.norm(&map.apply(x)?))
        .collect::<Result<_>>()?;
    let c = norms.iter().cloned().fold(0.0, f64::max);
    let mut residual = 0.0f64;
    let mut witness = None;
    for (x, &nv) in pool.iter().zip(&norms) {
        let dev = (c - nv) / c;
        if dev > residual {
            residual = dev;
            witness = Some(x.clone());
        }
    }
    let mut v = Verdict::decide(residual, 1.0, tol)?;
    if !v.holds {
        if let Some(x) = witness {
            v = v.with_witness(x.clone(), x);
        }
    }
    Ok(v)
}

/// Max relative residual of rho_star(Tx, Ty) = c^4 rho_star(x, y) over unit
/// sample pairs, with c the sampled operator norm. Diagnostic when the map is
/// not a similarity.
pub fn rho_star_scaling_check(map: &LinearMap, n: usize, seed: Seed) -> Result<f64> {
    let (c, _) = operator_norm_estimates(map, n, seed)?;
    if c == 0.0 {
        return Ok(0.0);
    }
    let c4 = c.powi(4);
    let xs = unit_pool(&map.domain, n, derived_seed(seed, 11))?;
    let ys = unit_pool(&map.domain, n, derived_seed(seed, 12))?;
    let mut worst = 0.0f64;
    for (x, y) in xs.iter().zip(&ys) {
        let lhs = rho_star(&map.codomain, &map.apply(x)?, &map.apply(y)?)?;
        let rhs = c4 * rho_star(&map.domain, x, y)?;
        worst = worst.max((lhs - rhs).abs() / c4);
    }
    Ok(worst)
}

#[derive(Debug, Clone, Serialize)]
pub struct MapAnalysisReport {
    pub op_norm_est: f64,
    pub lower_bound_est: f64,
    pub similarity: Verdict,
    pub preserves_rho_star: Verdict,
    pub scaling_residual: f64,
}

pub fn analyze_map(map: &LinearMap, n: usize, seed: Seed, tol: &Tolerance) -> Result<MapAnalysisReport> {
    let (op_norm_est, lower_bound_est) = operator_norm_estimates(map, n, seed)?;
    Ok(MapAnalysisReport {
        op_norm_est,
        lower_bound_est,
        similarity: similarity_check(map, n, seed, tol)?,
        preserves_rho_star: preserves_rho_star(map, n, seed, tol)?,
        scaling_residual: rho_star_scaling_check(map, n, seed)?,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundOutcome {
    /// Hypothesis not falsified on the sample and the two-sided bound held.
    BoundVerified,
    /// An isosceles pair whose image violates rho_star-orthogonality was
    /// found; the bound is not asserted.
    HypothesisViolated,
    /// Hypothesis survived the sample but the bound failed on it.
    BoundViolated,
    /// The bound is stated for nonzero maps only.
    ZeroMapExcluded,
}

#[derive(Debug, Clone, Serialize)]
pub struct IsoscelesBoundReport {
    pub outcome: BoundOutcome,
    pub verdict: Verdict,
    pub op_norm_est: f64,
    pub lower_bound_est: f64,
}

/// First tests the premise "x perp_I y implies Tx perp_rho_star Ty" on
/// isosceles pairs x = u + v, y = u - v with ||u|| = ||v|| = 1; a sampled
/// check can only falsify a universally quantified premise, so a pass means
/// "not falsified". If it survives, asserts
/// (1/3) ||T|| ||x|| <= ||Tx|| <= 3 [T] ||x|| over the unit sample.
pub fn bound_check_isosceles(
    map: &LinearMap,
    n: usize,
    seed: Seed,
    tol: &Tolerance,
) -> Result<IsoscelesBoundReport> {
    if map.is_zero() {
        return Ok(IsoscelesBoundReport {
            outcome: BoundOutcome::ZeroMapExcluded,
            verdict: Verdict::decide(0.0, 0.0, tol)?,
            op_norm_est: 0.0,
            lower_bound_est: 0.0,
        });
    }
    let (op, low) = operator_norm_estimates(map, n, seed)?;
    let us = unit_pool(&map.domain, n, derived_seed(seed, 21))?;
    let vs = unit_pool(&map.domain, n, derived_seed(seed, 22))?;
    for (u, v) in us.iter().zip(&vs) {
        let x = u.add(v);
        let y = u.sub(v);
        if x.is_zero() || y.is_zero() {
            continue;
        }
        let imaged = is_orthogonal(&map.codomain, &map.apply(&x)?, &map.apply(&y)?, Flavor::RhoStar, tol)?;
        if !imaged.holds {
            return Ok(IsoscelesBoundReport {
                outcome: BoundOutcome::HypothesisViolated,
                verdict: imaged.with_witness(x, y),
                op_norm_est: op,
                lower_bound_est: low,
            });
        }
    }
    // the premise survived; check the bound on unit vectors
    let mut violation = 0.0f64;
    let mut witness = None;
    for x in &us {
        let nv = map.codomain.norm(&map.apply(x)?)?;
        let lo = op / 3.0;
        let hi = 3.0 * low;
        let gap = (lo - nv).max(nv - hi).max(0.0);
        if gap > violation {
            violation = gap;
            witness = Some(x.clone());
        }
    }
    let mut verdict = Verdict::decide(violation, op, tol)?;
    if let Some(x) = witness {
        if !verdict.holds {
            verdict = verdict.with_witness(x.clone(), x);
        }
    }
    let outcome = if verdict.holds {
        BoundOutcome::BoundVerified
    } else {
        BoundOutcome::BoundViolated
    };
    Ok(IsoscelesBoundReport {
        outcome,
        verdict,
        op_norm_est: op,
        lower_bound_est: low,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct GapWitness {
    pub x: Vector,
    pub y: Vector,
    /// rho_+(x, y) - rho_-(x, y) at the witness.
    pub gap: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct InclusionEntry {
    pub from: Flavor,
    pub to: Flavor,
    pub verdict: Verdict,
}

#[derive(Debug, Clone, Serialize)]
pub struct SmoothnessReport {
    pub smooth: Verdict,
    pub witness: Option<GapWitness>,
    pub relation_tables: Vec<InclusionEntry>,
}

/// Classifies smoothness by the gap rho_+ - rho_- over deliberate extreme
/// pairs and random unit pairs, and fills the inclusion table for the five
/// relation inclusions that characterize smooth spaces.
pub fn smoothness_report(
    space: &NormedSpace,
    n: usize,
    seed: Seed,
    tol: &Tolerance,
) -> Result<SmoothnessReport> {
    if n < 32 {
        return Err(Error::InvalidArgument("need n >= 32 samples".into()));
    }
    let mut pairs = deliberate_pairs(space.dim(), 256);
    let xs = sample_unit_vectors(space.dim(), n, derived_seed(seed, 31), space)?;
    let ys = sample_unit_vectors(space.dim(), n, derived_seed(seed, 32), space)?;
    pairs.extend(xs.into_iter().zip(ys));

    let mut all_hold = true;
    let mut worst_norm = 0.0f64;
    let mut worst = (0.0, 0.0); // residual, scale
    let mut witness: Option<GapWitness> = None;
    for (x, y) in &pairs {
        let gap = rho_plus(space, x, y)?.value - rho_minus(space, x, y)?.value;
        let scale = space.norm(x)? * space.norm(y)?;
        if scale == 0.0 {
            continue;
        }
        if !approx_zero(gap, scale, tol)? {
            all_hold = false;
        }
        if gap / scale > worst_norm {
            worst_norm = gap / scale;
            worst = (gap, scale);
        }
        if gap > witness.as_ref().map_or(0.0, |w| w.gap) {
            witness = Some(GapWitness {
                x: x.clone(),
                y: y.clone(),
                gap,
            });
        }
    }
    let smooth = Verdict {
        holds: all_hold,
        residual: worst.0,
        scale: worst.1,
        tol_used: tol.clone(),
        witness: None,
    };
    let witness = if all_hold { None } else { witness };

    let inclusions = [
        (Flavor::Birkhoff, Flavor::RhoStar),
        (Flavor::Rho, Flavor::RhoStar),
        (Flavor::RhoStar, Flavor::Rho),
        (Flavor::RhoStar, Flavor::RhoPlus),
        (Flavor::RhoStar, Flavor::RhoMinus),
    ];
    let mut relation_tables = Vec::new();
    for (k, (from, to)) in inclusions.into_iter().enumerate() {
        let verdict = relation_inclusion_check(space, from, to, n, derived_seed(seed, 40 + k as u64), tol)?;
        relation_tables.push(InclusionEntry { from, to, verdict });
    }
    Ok(SmoothnessReport {
        smooth,
        witness,
        relation_tables,
    })
}

/// Pairs satisfying the `flavor` relation, built from exact constructions:
/// projections for the rho family, the translation interval for Birkhoff,
/// u +- v for isosceles.
pub fn generate_orthogonal_pairs(
    space: &NormedSpace,
    flavor: Flavor,
    n: usize,
    seed: Seed,
    tol: &Tolerance,
) -> Result<Vec<(Vector, Vector)>> {
    if flavor == Flavor::Sip && !space.is_smooth_family() {
        return Err(Error::SemiInnerProductNotUnique);
    }
    let mut raw = deliberate_pairs(space.dim(), 128);
    let xs = sample_unit_vectors(space.dim(), n, derived_seed(seed, 51), space)?;
    let ys = sample_unit_vectors(space.dim(), n, derived_seed(seed, 52), space)?;
    raw.extend(xs.into_iter().zip(ys));

    let mut out = Vec::new();
    for (i, (x, y)) in raw.iter().enumerate() {
        if out.len() >= n {
            break;
        }
        if x.is_zero() || y.is_zero() {
            continue;
        }
        match flavor {
            Flavor::RhoStar => {
                let branch = if i % 2 == 0 { Branch::Plus } else { Branch::Minus };
                if let Some(pair) = projection_pair(space, x, y, branch)? {
                    out.push(pair);
                }
            }
            Flavor::RhoPlus => {
                if let Some(pair) = projection_pair(space, x, y, Branch::Plus)? {
                    out.push(pair);
                }
            }
            Flavor::RhoMinus => {
                if let Some(pair) = projection_pair(space, x, y, Branch::Minus)? {
                    out.push(pair);
                }
            }
            Flavor::Rho | Flavor::Sip => {
                let nx = space.norm(x)?;
                let t = -rho(space, x, y)? / (nx * nx);
                let p = x.scaled_add(t, y);
                if space.norm(&p)? > 1e-12 * (space.norm(y)? + t.abs() * nx) {
                    out.push((x.clone(), p));
                }
            }
            Flavor::Birkhoff => {
                let rm = rho_minus(space, x, y)?.value;
                let rp = rho_plus(space, x, y)?.value;
                if rm <= 0.0 && 0.0 <= rp {
                    // already Birkhoff-orthogonal; keep the pair as-is
                    out.push((x.clone(), y.clone()));
                } else {
                    let nx = space.norm(x)?;
                    // any t in [-rho_+/||x||^2, -rho_-/||x||^2] works; cycle
                    // the endpoints and the midpoint
                    let t = match i % 3 {
                        0 => -rp / (nx * nx),
                        1 => -rm / (nx * nx),
                        _ => -(rm + rp) / (2.0 * nx * nx),
                    };
                    let p = x.scaled_add(t, y);
                    if space.norm(&p)? > 1e-12 * (space.norm(y)? + t.abs() * nx) {
                        out.push((x.clone(), p));
                    }
                }
            }
            Flavor::Isosceles => {
                let nx = space.norm(x)?;
                let ny = space.norm(y)?;
                let u = x.scale(1.0 / nx);
                let v = y.scale(1.0 / ny);
                let s = u.add(&v);
                let d = u.sub(&v);
                if !s.is_zero() && !d.is_zero() {
                    out.push((s, d));
                }
            }
        }
    }
    let _ = tol;
    Ok(out)
}

/// Generates pairs satisfying `from` and tests whether they satisfy `to`.
/// Fails with the first counterexample pair as witness.
pub fn relation_inclusion_check(
    space: &NormedSpace,
    from: Flavor,
    to: Flavor,
    n: usize,
    seed: Seed,
    tol: &Tolerance,
) -> Result<Verdict> {
    let pairs = generate_orthogonal_pairs(space, from, n, seed, tol)?;
    let mut worst = Verdict::decide(0.0, 0.0, tol)?;
    for (x, y) in pairs {
        // generator sanity: skip pairs that missed the source relation
        if !is_orthogonal(space, &x, &y, from, tol)?.holds {
            continue;
        }
        let v = is_orthogonal(space, &x, &y, to, tol)?;
        if !v.holds {
            return Ok(v.with_witness(x, y));
        }
        let worst_n = worst.residual / worst.scale.max(f64::MIN_POSITIVE);
        let v_n = v.residual / v.scale.max(f64::MIN_POSITIVE);
        if v_n > worst_n {
            worst = v;
        }
    }
    Ok(worst)
}

#[derive(Debug, Clone, Serialize)]
pub struct DeltaEstimate {
    /// Smallest delta consistent with the sampled parallelogram ratios;
    /// values >= 1 mean no delta < 1 is admissible on the sample.
    pub delta_min_feasible: f64,
    pub admissible: bool,
    pub sup_ratio: f64,
    pub inf_ratio: f64,
}

/// Samples r(z, w) = (||z+w||^2 + ||z-w||^2 - 2||w||^2) / (2||z||^2) and
/// reports how far the sample forces delta in
/// 2(1-delta)||z||^2 <= ||z+w||^2 + ||z-w||^2 - 2||w||^2 <= 2(1+delta)||z||^2.
pub fn parallelogram_delta(space: &NormedSpace, n: usize, seed: Seed) -> Result<DeltaEstimate> {
    if n < 32 {
        return Err(Error::InvalidArgument("need n >= 32 samples".into()));
    }
    let mut pairs = deliberate_pairs(space.dim(), 400);
    let zs = sample_unit_vectors(space.dim(), n, derived_seed(seed, 61), space)?;
    let ws = sample_unit_vectors(space.dim(), n, derived_seed(seed, 62), space)?;
    let mut rng = rng_from(derived_seed(seed, 63));
    pairs.extend(
        zs.into_iter()
            .zip(ws)
            .map(|(z, w)| (z, w.scale(rng.gen_range(0.25..=2.0)))),
    );

    let mut sup = f64::NEG_INFINITY;
    let mut inf = f64::INFINITY;
    for (z, w) in &pairs {
        let nz2 = space.norm(z)?.powi(2);
        if nz2 == 0.0 {
            continue;
        }
        let r = (space.norm(&z.add(w))?.powi(2) + space.norm(&z.sub(w))?.powi(2)
            - 2.0 * space.norm(w)?.powi(2))
            / (2.0 * nz2);
        sup = sup.max(r);
        inf = inf.min(r);
    }
    let delta = (sup - 1.0).max(1.0 - inf).max(0.0);
    Ok(DeltaEstimate {
        delta_min_feasible: delta,
        admissible: delta < 1.0,
        sup_ratio: sup,
        inf_ratio: inf,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct InnerBoundReport {
    /// Empirical check of sqrt(1-delta) ||z|| <= |||z||| <= sqrt(1+delta) ||z||.
    pub pairing: Verdict,
    /// |rho_star(x,y) - <x,y>^2| <= C min{||x||^2||y||^2, |||x|||^2|||y|||^2}
    /// with the corrected constant.
    pub bound: Verdict,
    pub corrected_constant: f64,
    pub printed_constant: f64,
    pub printed_constant_holds: bool,
    pub printed_violation: Option<WitnessPair>,
}

/// Verifies the inner-product comparison bound for rho_star against the
/// weighted-Euclidean inner product <x,y> = sum_i w_i x_i y_i.
///
/// The corrected constant is C = max{1 + (1+delta)^2, 1 + 1/(1-delta)^2}
/// (four powers of the norm-equivalence constants are required); the report
/// also evaluates the constant (2-delta)/(1-delta) and records where it
/// fails.
pub fn rhostar_inner_bound_check(
    space: &NormedSpace,
    inner_weights: &[f64],
    delta: f64,
    n: usize,
    seed: Seed,
    tol: &Tolerance,
) -> Result<InnerBoundReport> {
    if !(0.0..1.0).contains(&delta) {
        return Err(Error::InvalidArgument("delta must lie in [0, 1)".into()));
    }
    if inner_weights.len() != space.dim() {
        return Err(Error::DimensionMismatch {
            expected: space.dim(),
            got: inner_weights.len(),
        });
    }
    if inner_weights.iter().any(|w| !w.is_finite() || *w <= 0.0) {
        return Err(Error::InvalidArgument(
            "inner-product weights must be positive".into(),
        ));
    }
    let winner = |x: &Vector, y: &Vector| -> f64 {
        x.coords()
            .iter()
            .zip(y.coords())
            .zip(inner_weights)
            .map(|((a, b), w)| w * a * b)
            .sum()
    };
    let wnorm = |x: &Vector| -> f64 { winner(x, x).sqrt() };

    let pool = unit_pool(space, n, derived_seed(seed, 71))?;

    // pairing: the two norms must be sqrt(1 +- delta)-equivalent
    let lo = (1.0 - delta).sqrt();
    let hi = (1.0 + delta).sqrt();
    let mut pairing_violation = 0.0f64;
    for z in &pool {
        let a = wnorm(z);
        let b = space.norm(z)?;
        pairing_violation = pairing_violation.max(lo * b - a).max(a - hi * b);
    }
    let pairing = Verdict::decide(pairing_violation.max(0.0), 1.0, tol)?;

    let corrected = (1.0 + (1.0 + delta).powi(2)).max(1.0 + 1.0 / (1.0 - delta).powi(2));
    let printed = (2.0 - delta) / (1.0 - delta);

    let mut pairs: Vec<(Vector, Vector)> = pool.iter().map(|x| (x.clone(), x.clone())).collect();
    let xs = sample_unit_vectors(space.dim(), n, derived_seed(seed, 72), space)?;
    let ys = sample_unit_vectors(space.dim(), n, derived_seed(seed, 73), space)?;
    pairs.extend(xs.into_iter().zip(ys));

    let mut worst = 0.0f64; // violation of the corrected bound
    let mut worst_scale = 1.0f64;
    let mut printed_ok = true;
    let mut printed_violation = None;
    for (x, y) in &pairs {
        let lhs = (rho_star(space, x, y)? - winner(x, y).powi(2)).abs();
        let bound_scale = (space.norm(x)?.powi(2) * space.norm(y)?.powi(2))
            .min(wnorm(x).powi(2) * wnorm(y).powi(2));
        let c_violation = lhs - corrected * bound_scale;
        if c_violation > worst {
            worst = c_violation;
            worst_scale = bound_scale;
        }
        if printed_ok && lhs > printed * bound_scale + tol.abs_tol {
            printed_ok = false;
            printed_violation = Some(WitnessPair {
                x: x.clone(),
                y: y.clone(),
            });
        }
    }
    let bound = Verdict::decide(worst.max(0.0), worst_scale, tol)?;
    Ok(InnerBoundReport {
        pairing,
        bound,
        corrected_constant: corrected,
        printed_constant: printed,
        printed_constant_holds: printed_ok,
        printed_violation,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct NormComparisonReport {
    pub m_est: f64,
    pub big_m_est: f64,
    /// Corrected comparison constant max{1 + M^4, 1 + 1/m^4}.
    pub alpha: f64,
    /// The constant max{1 + M^2, 1 + 1/m^2}; reported with the sample pair
    /// violating it when one exists.
    pub printed_alpha: f64,
    pub bound_holds: Verdict,
    pub printed_alpha_holds: bool,
    pub printed_violation: Option<WitnessPair>,
    pub proportional: Verdict,
}

/// Estimates the equivalence constants m ||x||_1 <= ||x||_2 <= M ||x||_1 from
/// sampled ratios and checks
/// |rho_star_1(x,y) - rho_star_2(x,y)| <= alpha min{||x||_1^2||y||_1^2, ||x||_2^2||y||_2^2}.
pub fn norm_comparison_alpha(
    space1: &NormedSpace,
    space2: &NormedSpace,
    n: usize,
    seed: Seed,
) -> Result<NormComparisonReport> {
    if space1.dim() != space2.dim() {
        return Err(Error::DimensionMismatch {
            expected: space1.dim(),
            got: space2.dim(),
        });
    }
    let tol = Tolerance::default();
    let mut vectors = deliberate_candidates(space1.dim());
    vectors.extend(sample_unit_vectors(space1.dim(), n, derived_seed(seed, 81), space1)?);

    let mut m_est = f64::INFINITY;
    let mut big_m_est = 0.0f64;
    for v in &vectors {
        let r = space2.norm(v)? / space1.norm(v)?;
        m_est = m_est.min(r);
        big_m_est = big_m_est.max(r);
    }
    let alpha = (1.0 + big_m_est.powi(4)).max(1.0 + 1.0 / m_est.powi(4));
    let printed_alpha = (1.0 + big_m_est.powi(2)).max(1.0 + 1.0 / m_est.powi(2));

    // pairs from the same vector family, including x = y
    let mut pairs: Vec<(Vector, Vector)> = vectors.iter().map(|v| (v.clone(), v.clone())).collect();
    for k in 0..vectors.len().saturating_sub(1) {
        pairs.push((vectors[k].clone(), vectors[k + 1].clone()));
    }

    let mut worst = 0.0f64;
    let mut worst_scale = 1.0f64;
    let mut printed_ok = true;
    let mut printed_violation = None;
    for (x, y) in &pairs {
        let lhs = (rho_star(space1, x, y)? - rho_star(space2, x, y)?).abs();
        let scale = (space1.norm(x)?.powi(2) * space1.norm(y)?.powi(2))
            .min(space2.norm(x)?.powi(2) * space2.norm(y)?.powi(2));
        let violation = lhs - alpha * scale * (1.0 + 1e-12);
        if violation > worst {
            worst = violation;
            worst_scale = scale;
        }
        if printed_ok && lhs > printed_alpha * scale + tol.abs_tol {
            printed_ok = false;
            printed_violation = Some(WitnessPair {
                x: x.clone(),
                y: y.clone(),
            });
        }
    }
    let bound_holds = Verdict::decide(worst.max(0.0), worst_scale, &tol)?;
    let proportional = Verdict::decide(big_m_est - m_est, big_m_est, &tol)?;
    Ok(NormComparisonReport {
        m_est,
        big_m_est,
        alpha,
        printed_alpha,
        bound_holds,
        printed_alpha_holds: printed_ok,
        printed_violation,
        proportional,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct ModuliEstimates {
    /// (epsilon, sigma_hat(epsilon)): sampled upper bounds for the modulus of
    /// convexity, monotone-regularized.
    pub sigma_samples: Vec<(f64, f64)>,
    /// (t, varrho_hat(t)): sampled lower bounds for the modulus of
    /// smoothness, monotone-regularized.
    pub varrho_samples: Vec<(f64, f64)>,
}

/// sigma_hat(eps) = min over sampled unit pairs with ||x - y|| >= eps of
/// 1 - ||(x+y)/2||; varrho_hat(t) = max over sampled unit (x, d) of
/// (||x + t d|| + ||x - t d||)/2 - 1. Antipodal and axis pairs are always
/// included so the admissible sets are never empty.
pub fn moduli_estimates(
    space: &NormedSpace,
    eps_grid: &[f64],
    t_grid: &[f64],
    n: usize,
    seed: Seed,
) -> Result<ModuliEstimates> {
    if eps_grid.is_empty() || t_grid.is_empty() {
        return Err(Error::InvalidArgument("grids must be nonempty".into()));
    }
    if eps_grid.iter().any(|e| !(*e > 0.0 && *e <= 2.0)) {
        return Err(Error::InvalidArgument("eps grid must lie in (0, 2]".into()));
    }
    if t_grid.iter().any(|t| !(*t > 0.0 && t.is_finite())) {
        return Err(Error::InvalidArgument("t grid must be positive".into()));
    }
    let pool = unit_pool(space, n, derived_seed(seed, 91))?;
    let mut pairs: Vec<(Vector, Vector)> = Vec::new();
    for x in &pool {
        pairs.push((x.clone(), x.neg()));
    }
    for i in 0..pool.len() {
        pairs.push((pool[i].clone(), pool[(i + 1) % pool.len()].clone()));
        pairs.push((pool[i].clone(), pool[(i * 7 + 3) % pool.len()].clone()));
    }

    let mut sigma_samples = Vec::with_capacity(eps_grid.len());
    let mut eps_sorted: Vec<f64> = eps_grid.to_vec();
    eps_sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    for &eps in &eps_sorted {
        let mut best = f64::INFINITY;
        for (x, y) in &pairs {
            if space.norm(&x.sub(y))? >= eps * (1.0 - 1e-12) {
                let mid = 1.0 - space.norm(&x.add(y))? / 2.0;
                best = best.min(mid);
            }
        }
        sigma_samples.push((eps, best.max(0.0)));
    }
    // the true modulus is nondecreasing; regularize the sampled curve
    for i in 1..sigma_samples.len() {
        if sigma_samples[i].1 < sigma_samples[i - 1].1 {
            sigma_samples[i].1 = sigma_samples[i - 1].1;
        }
    }

    let mut varrho_samples = Vec::with_capacity(t_grid.len());
    let mut t_sorted: Vec<f64> = t_grid.to_vec();
    t_sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    for &t in &t_sorted {
        let mut best = 0.0f64;
        for (x, d) in &pairs {
            let y = d.scale(t);
            let v = (space.norm(&x.add(&y))? + space.norm(&x.sub(&y))?) / 2.0 - 1.0;
            best = best.max(v);
        }
        varrho_samples.push((t, best));
    }
    for i in 1..varrho_samples.len() {
        if varrho_samples[i].1 < varrho_samples[i - 1].1 {
            varrho_samples[i].1 = varrho_samples[i - 1].1;
        }
    }
    Ok(ModuliEstimates {
        sigma_samples,
        varrho_samples,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct GeometryReport {
    pub delta: DeltaEstimate,
    pub moduli: ModuliEstimates,
}

pub fn geometry_report(
    space: &NormedSpace,
    eps_grid: &[f64],
    t_grid: &[f64],
    n: usize,
    seed: Seed,
) -> Result<GeometryReport> {
    Ok(GeometryReport {
        delta: parallelogram_delta(space, n, seed)?,
        moduli: moduli_estimates(space, eps_grid, t_grid, n, seed)?,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct AxiomReport {
    /// Totality for zero: x perp 0 and 0 perp x, exactly.
    pub o1: Verdict,
    /// Independence of nonzero rho_star-orthogonal pairs.
    pub o2: Verdict,
    /// Homogeneity under scaling of both arguments.
    pub o3: Verdict,
    /// The Thalesian decomposition property.
    pub o4: Verdict,
    pub all_pass: bool,
}

/// Verifies the four orthogonality-space axioms for perp_rho_star on samples.
pub fn orthogonality_space_axioms(
    space: &NormedSpace,
    n: usize,
    seed: Seed,
    tol: &Tolerance,
) -> Result<AxiomReport> {
    if space.dim() < 2 {
        return Err(Error::InvalidArgument("need dimension >= 2".into()));
    }
    let pool = unit_pool(space, n, derived_seed(seed, 101))?;
    let zero = Vector::zeros(space.dim());

    // O1: rho_star(x, 0) = rho_star(0, x) = 0 exactly
    let mut o1_res = 0.0f64;
    let mut o1_witness = None;
    for x in &pool {
        let a = rho_star(space, x, &zero)?.abs();
        let b = rho_star(space, &zero, x)?.abs();
        let worst = a.max(b);
        if worst > o1_res {
            o1_res = worst;
            o1_witness = Some(x.clone());
        }
    }
    let mut o1 = Verdict {
        holds: o1_res == 0.0,
        residual: o1_res,
        scale: 0.0,
        tol_used: tol.clone(),
        witness: None,
    };
    if !o1.holds {
        if let Some(x) = o1_witness {
            o1 = o1.with_witness(x, zero.clone());
        }
    }

    // O2: nonzero rho_star-orthogonal pairs are linearly independent
    let pairs = generate_orthogonal_pairs(space, Flavor::RhoStar, n, derived_seed(seed, 102), tol)?;
    let mut o2 = Verdict::decide(0.0, 1.0, tol)?;
    for (x, y) in &pairs {
        if x.is_zero() || y.is_zero() {
            continue;
        }
        if !is_orthogonal(space, x, y, Flavor::RhoStar, tol)?.holds {
            continue;
        }
        if !independent(x.coords(), y.coords()) {
            o2 = Verdict {
                holds: false,
                residual: 1.0,
                scale: 1.0,
                tol_used: tol.clone(),
                witness: None,
            }
            .with_witness(x.clone(), y.clone());
            break;
        }
    }

    // O3: homogeneity under alpha x, beta y including negative scalings
    let mut rng = rng_from(derived_seed(seed, 103));
    let mut o3 = Verdict::decide(0.0, 0.0, tol)?;
    'o3: for (x, y) in pairs.iter().take(n / 2 + 1) {
        if !is_orthogonal(space, x, y, Flavor::RhoStar, tol)?.holds {
            continue;
        }
        for _ in 0..4 {
            let alpha: f64 = rng.gen_range(-2.0..=2.0);
            let beta: f64 = rng.gen_range(-2.0..=2.0);
            let v = is_orthogonal(space, &x.scale(alpha), &y.scale(beta), Flavor::RhoStar, tol)?;
            if !v.holds {
                o3 = v.with_witness(x.scale(alpha), y.scale(beta));
                break 'o3;
            }
            let v_n = v.residual / v.scale.max(f64::MIN_POSITIVE);
            if v_n > o3.residual / o3.scale.max(f64::MIN_POSITIVE) {
                o3 = v;
            }
        }
    }

    // O4: the Thalesian decomposition succeeds for fixed and random lambda
    let mut o4 = Verdict::decide(0.0, 0.0, tol)?;
    let mut lambda_rng = rng_from(derived_seed(seed, 104));
    'o4: for (k, x) in pool.iter().take((n / 4).max(8)).enumerate() {
        let mut lambdas = vec![0.0, 0.5, 1.0, 2.0];
        lambdas.push(lambda_rng.gen_range(0.0..=5.0));
        for lambda in lambdas {
            let d = thalesian_decompose(space, x, lambda, derived_seed(seed, 200 + k as u64), tol)?;
            let worst_res = (d.residual_first / d.scale_first.max(f64::MIN_POSITIVE))
                .max(d.residual_second / d.scale_second.max(f64::MIN_POSITIVE));
            if !d.holds {
                o4 = Verdict {
                    holds: false,
                    residual: d.residual_first.max(d.residual_second),
                    scale: d.scale_first.max(d.scale_second),
                    tol_used: tol.clone(),
                    witness: None,
                }
                .with_witness(x.clone(), d.y.clone());
                break 'o4;
            }
            if d.scale_first > 0.0 && worst_res > o4.residual / o4.scale.max(f64::MIN_POSITIVE) {
                o4 = Verdict {
                    holds: true,
                    residual: d.residual_first.max(d.residual_second),
                    scale: d.scale_first.max(d.scale_second),
                    tol_used: tol.clone(),
                    witness: None,
                };
            }
        }
    }

    let all_pass = o1.holds && o2.holds && o3.holds && o4.holds;
    Ok(AxiomReport {
        o1,
        o2,
        o3,
        o4,
        all_pass,
    })
}
