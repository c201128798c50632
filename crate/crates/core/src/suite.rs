//! The seeded property suite: runs every library invariant over a table of
//! normed spaces and reports one pass/fail line per property, with worst
//! residuals and witnesses.

use rand::Rng;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::analysis::{
    bound_check_isosceles, operator_norm_estimates, orthogonality_space_axioms,
    parallelogram_delta, preserves_rho_star, relation_inclusion_check, rho_star_scaling_check,
    similarity_check, smoothness_report, BoundOutcome, LinearMap,
};
use crate::constructions::{quadratic_expansion_residual, thalesian_decompose};
use crate::derivatives::{numeric_one_sided, rho_minus, rho_plus, rho_star, Branch};
use crate::error::{Error, Result};
use crate::norms::NormedSpace;
use crate::orthogonality::{birkhoff_minimization_oracle, is_orthogonal, Flavor};
use crate::sampling::{deliberate_candidates, rng_from, sample_unit_vectors};
use crate::vector::{Seed, Tolerance, Vector};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Profile {
    Quick,
    Full,
}

impl Profile {
    fn samples(&self) -> usize {
        match self {
            Profile::Quick => 60,
            Profile::Full => 400,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Profile::Quick => "quick",
            Profile::Full => "full",
        }
    }
}

impl std::str::FromStr for Profile {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "quick" => Ok(Profile::Quick),
            "full" => Ok(Profile::Full),
            other => Err(Error::Parse(format!("unknown profile {other:?}"))),
        }
    }
}

/// One row of the norm table the suite runs over. `smooth` and
/// `thalesian_total` are the declared expectations the suite verifies:
/// whether the space classifies as smooth, and whether the Thalesian
/// decomposition must succeed for every sampled (x, lambda).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct NormTableEntry {
    pub name: String,
    pub norm: String,
    pub dim: usize,
    pub smooth: bool,
    pub thalesian_total: bool,
}

pub fn default_norm_table() -> Vec<NormTableEntry> {
    let entry = |name: &str, norm: &str, dim: usize, smooth: bool, total: bool| NormTableEntry {
        name: name.into(),
        norm: norm.into(),
        dim,
        smooth,
        thalesian_total: total,
    };
    vec![
        entry("l1r3", "l1", 3, false, false),
        entry("linf2", "linf", 2, false, false),
        entry("l2r3", "lp:2", 3, true, true),
        entry("l3r3", "lp:3", 3, true, true),
        entry("wl2", "wlp:2:1,4,0.5", 3, true, true),
        entry("poly2", "polyrows:1,0;0,1;0.75,0.75", 2, false, false),
    ]
}

pub fn load_norm_table(path: &std::path::Path) -> Result<Vec<NormTableEntry>> {
    let text = std::fs::read_to_string(path)?;
    serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

#[derive(Debug, Clone, Serialize)]
pub struct PropertyResult {
    pub name: String,
    pub pass: bool,
    pub worst_residual: f64,
    pub witness: Option<serde_json::Value>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub seed: u64,
    pub profile: String,
    pub properties: Vec<PropertyResult>,
    pub all_pass: bool,
}

struct Recorder {
    prefix: String,
    results: Vec<PropertyResult>,
}

impl Recorder {
    fn new(prefix: &str) -> Self {
        Recorder {
            prefix: prefix.to_string(),
            results: Vec::new(),
        }
    }

    fn record(&mut self, name: &str, pass: bool, worst: f64, witness: Option<serde_json::Value>) {
        self.results.push(PropertyResult {
            name: format!("{}/{}", self.prefix, name),
            pass,
            worst_residual: worst,
            witness,
        });
    }
}

fn witness_pair(x: &Vector, y: &Vector) -> Option<serde_json::Value> {
    Some(json!({ "x": x.coords(), "y": y.coords() }))
}

/// Runs every property over every table entry plus the operator-level checks.
pub fn run_suite(seed: Seed, profile: Profile, table: &[NormTableEntry]) -> Result<SuiteReport> {
    let tol = Tolerance::default();
    let n = profile.samples();
    let mut properties = Vec::new();

    for entry in table {
        let space = NormedSpace::parse(&entry.norm, entry.dim)?;
        let mut rec = Recorder::new(&entry.name);
        space_properties(&mut rec, &space, entry, n, seed, &tol)?;
        properties.extend(rec.results);
    }

    let mut rec = Recorder::new("maps");
    map_properties(&mut rec, n, seed, &tol)?;
    properties.extend(rec.results);

    let all_pass = properties.iter().all(|p| p.pass);
    Ok(SuiteReport {
        seed: seed.0,
        profile: profile.name().to_string(),
        properties,
        all_pass,
    })
}

fn space_properties(
    rec: &mut Recorder,
    space: &NormedSpace,
    entry: &NormTableEntry,
    n: usize,
    seed: Seed,
    tol: &Tolerance,
) -> Result<()> {
    let dim = space.dim();
    let salt = |k: u64| Seed(seed.0.wrapping_mul(0x9e3779b97f4a7c15).wrapping_add(k));
    let xs = sample_unit_vectors(dim, n, salt(1), space)?;
    let ys = sample_unit_vectors(dim, n, salt(2), space)?;
    let mut pairs: Vec<(Vector, Vector)> = Vec::new();
    let cands = deliberate_candidates(dim);
    for (i, x) in cands.iter().enumerate() {
        pairs.push((x.clone(), cands[(i + 1) % cands.len()].clone()));
    }
    pairs.extend(xs.iter().cloned().zip(ys.iter().cloned()));
    let mut rng = rng_from(salt(3));

    // reflection rho_-(x, y) = -rho_+(x, -y), bit-exact
    {
        let mut worst = 0.0f64;
        let mut wit = None;
        for (x, y) in &pairs {
            let lhs = rho_minus(space, x, y)?.value;
            let rhs = -rho_plus(space, x, &y.neg())?.value;
            let d = (lhs - rhs).abs();
            if d > worst {
                worst = d;
                wit = witness_pair(x, y);
            }
        }
        rec.record("reflection_exact", worst == 0.0, worst, wit);
    }

    // convexity ordering rho_- <= rho_+
    {
        let mut worst = 0.0f64;
        let mut wit = None;
        for (x, y) in &pairs {
            let excess = rho_minus(space, x, y)?.value - rho_plus(space, x, y)?.value;
            if excess > worst {
                worst = excess;
                wit = witness_pair(x, y);
            }
        }
        rec.record("one_sided_ordering", worst <= 0.0, worst.max(0.0), wit);
    }

    // rho_star(x, y) = rho_star(x, -y), bit-exact
    {
        let mut worst = 0.0f64;
        let mut wit = None;
        for (x, y) in &pairs {
            let d = (rho_star(space, x, y)? - rho_star(space, x, &y.neg())?).abs();
            if d > worst {
                worst = d;
                wit = witness_pair(x, y);
            }
        }
        rec.record("rho_star_sign_symmetry", worst == 0.0, worst, wit);
    }

    // quadratic homogeneity rho_star(tx, y) = rho_star(x, ty) = t^2 rho_star(x, y)
    {
        let mut worst = 0.0f64;
        let mut wit = None;
        let mut pass = true;
        for (x, y) in &pairs {
            let t: f64 = rng.gen_range(-3.0..=3.0);
            let base = rho_star(space, x, y)?;
            let scale = t * t * space.norm(x)?.powi(2) * space.norm(y)?.powi(2) + 1e-300;
            for lhs in [rho_star(space, &x.scale(t), y)?, rho_star(space, x, &y.scale(t))?] {
                let rel = (lhs - t * t * base).abs() / scale;
                if rel > worst {
                    worst = rel;
                    wit = witness_pair(x, y);
                }
            }
        }
        if worst > 1e-9 {
            pass = false;
        }
        rec.record("homogeneity_quadratic", pass, worst, wit);
    }

    // |rho_star(x, y)| <= ||x||^2 ||y||^2
    {
        let mut worst = 0.0f64;
        let mut wit = None;
        for (x, y) in &pairs {
            let bound = space.norm(x)?.powi(2) * space.norm(y)?.powi(2);
            let excess = (rho_star(space, x, y)?.abs() - bound) / (bound + 1e-300);
            if excess > worst {
                worst = excess;
                wit = witness_pair(x, y);
            }
        }
        rec.record("rho_star_bound", worst <= 1e-9, worst.max(0.0), wit);
    }

    // rho_star(x, tx + y) = t^2 ||x||^4 + 2 t ||x||^2 rho(x, y) + rho_star(x, y)
    {
        let mut worst = 0.0f64;
        let mut wit = None;
        for (x, y) in &pairs {
            let t: f64 = rng.gen_range(-3.0..=3.0);
            let r = quadratic_expansion_residual(space, x, y, t)?;
            let scale = (space.norm(x)?.powi(4) * (1.0 + t * t))
                .max(rho_star(space, x, y)?.abs())
                .max(1.0);
            if r / scale > worst {
                worst = r / scale;
                wit = witness_pair(x, y);
            }
        }
        rec.record("quadratic_expansion", worst <= 1e-9, worst, wit);
    }

    // translation rule rho_pm(x, tx + y) = t ||x||^2 + rho_pm(x, y)
    {
        let mut worst = 0.0f64;
        let mut wit = None;
        for (x, y) in &pairs {
            let t: f64 = rng.gen_range(-2.0..=2.0);
            let nx2 = space.norm(x)?.powi(2);
            let shifted = x.scaled_add(t, y);
            let scale = nx2 * (1.0 + t.abs()) + space.norm(x)? * space.norm(y)? + 1e-300;
            for (lhs, rhs) in [
                (rho_minus(space, x, &shifted)?.value, t * nx2 + rho_minus(space, x, y)?.value),
                (rho_plus(space, x, &shifted)?.value, t * nx2 + rho_plus(space, x, y)?.value),
            ] {
                let rel = (lhs - rhs).abs() / scale;
                if rel > worst {
                    worst = rel;
                    wit = witness_pair(x, y);
                }
            }
        }
        rec.record("translation_rule", worst <= 1e-12, worst, wit);
    }

    // closed form vs numeric one-sided limit
    {
        let mut worst = 0.0f64;
        let mut wit = None;
        let mut pass = true;
        for (x, y) in xs.iter().zip(&ys) {
            for (side, closed) in [
                (Branch::Minus, rho_minus(space, x, y)?.value),
                (Branch::Plus, rho_plus(space, x, y)?.value),
            ] {
                let num = numeric_one_sided(space, x, y, side, tol)?;
                let allow = (1e-5 * closed.abs()).max(1e-7);
                let err = (num.value - closed).abs();
                if err / allow > worst {
                    worst = err / allow;
                    wit = witness_pair(x, y);
                }
                if err > allow {
                    pass = false;
                }
            }
        }
        rec.record("oracle_agreement", pass, worst, wit);
    }

    // Birkhoff via derivatives vs convex minimization
    {
        let mut disagreements = 0u32;
        let mut wit = None;
        let planted =
            crate::analysis::generate_orthogonal_pairs(space, Flavor::Birkhoff, n / 2, salt(4), tol)?;
        for (x, y) in pairs.iter().chain(&planted) {
            let a = is_orthogonal(space, x, y, Flavor::Birkhoff, tol)?;
            let b = birkhoff_minimization_oracle(space, x, y, tol)?;
            if a.holds != b.holds {
                disagreements += 1;
                if wit.is_none() {
                    wit = witness_pair(x, y);
                }
            }
        }
        rec.record(
            "birkhoff_cross_oracle",
            disagreements == 0,
            disagreements as f64,
            wit,
        );
    }

    // containment: rho_- and rho_+ pairs are rho_star pairs; rho_star pairs
    // are Birkhoff pairs
    {
        let mut pass = true;
        let mut worst = 0.0f64;
        let mut wit = None;
        for (flavor, salt_k) in [(Flavor::RhoMinus, 5u64), (Flavor::RhoPlus, 6), (Flavor::RhoStar, 7)]
        {
            let generated =
                crate::analysis::generate_orthogonal_pairs(space, flavor, n / 2, salt(salt_k), tol)?;
            for (x, y) in generated {
                if !is_orthogonal(space, &x, &y, flavor, tol)?.holds {
                    continue;
                }
                let target = if flavor == Flavor::RhoStar {
                    Flavor::Birkhoff
                } else {
                    Flavor::RhoStar
                };
                let v = is_orthogonal(space, &x, &y, target, tol)?;
                let v_n = v.residual / v.scale.max(f64::MIN_POSITIVE);
                if !v.holds {
                    pass = false;
                }
                if v_n > worst {
                    worst = v_n;
                    wit = witness_pair(&x, &y);
                }
            }
        }
        rec.record("containment_chain", pass, worst, wit);
    }

    // orthogonality-space axioms O1-O3 (O4 is covered by the decomposition
    // properties below, which respect where the decomposition exists)
    {
        let report = orthogonality_space_axioms(space, n.min(80), salt(8), tol)?;
        let pass = report.o1.holds && report.o2.holds && report.o3.holds;
        let worst = report
            .o1
            .residual
            .max(report.o2.residual)
            .max(report.o3.residual / report.o3.scale.max(f64::MIN_POSITIVE));
        rec.record("axioms_o1_o2_o3", pass, worst, None);
    }

    // lambda = 0 decomposition returns y = 0 exactly
    {
        let mut pass = true;
        let mut wit = None;
        for x in xs.iter().take(8) {
            let d = thalesian_decompose(space, x, 0.0, salt(9), tol)?;
            if !d.y.is_zero() || !d.holds {
                pass = false;
                wit = witness_pair(x, &d.y);
                break;
            }
        }
        rec.record("zero_lambda_exact", pass, 0.0, wit);
    }

    // every decomposition reported as holding must verify independently
    {
        let mut pass = true;
        let mut worst = 0.0f64;
        let mut wit = None;
        let mut total = true;
        let mut lrng = rng_from(salt(10));
        for (k, x) in xs.iter().take((n / 6).max(8)).enumerate() {
            for lambda in [0.5, 1.0, 2.0, lrng.gen_range(0.0..=5.0)] {
                let d = thalesian_decompose(space, x, lambda, salt(20 + k as u64), tol)?;
                if !d.holds {
                    total = false;
                    continue;
                }
                let first = is_orthogonal(space, x, &d.y, Flavor::RhoStar, tol)?;
                let second = is_orthogonal(
                    space,
                    &x.add(&d.y),
                    &x.scale(lambda).sub(&d.y),
                    Flavor::RhoStar,
                    tol,
                )?;
                if !first.holds || !second.holds {
                    pass = false;
                    wit = witness_pair(x, &d.y);
                }
                let w = (first.residual / first.scale.max(f64::MIN_POSITIVE))
                    .max(second.residual / second.scale.max(f64::MIN_POSITIVE));
                if w > worst {
                    worst = w;
                }
            }
        }
        rec.record("decomposition_verified", pass, worst, wit);
        if entry.thalesian_total {
            rec.record("decomposition_total", total, if total { 0.0 } else { 1.0 }, None);
        }
    }

    // smoothness classification matches the declared table entry
    {
        let report = smoothness_report(space, n.max(32), salt(11), tol)?;
        let pass = report.smooth.holds == entry.smooth;
        let wit = report
            .witness
            .as_ref()
            .map(|w| json!({ "x": w.x.coords(), "y": w.y.coords(), "gap": w.gap }));
        rec.record(
            "smoothness_matches_table",
            pass,
            report.smooth.residual / report.smooth.scale.max(f64::MIN_POSITIVE),
            wit,
        );

        // coherence: smooth iff all five inclusion tables hold
        let all_inclusions = report.relation_tables.iter().all(|e| e.verdict.holds);
        rec.record(
            "smoothness_inclusion_coherence",
            report.smooth.holds == all_inclusions,
            0.0,
            None,
        );
    }

    Ok(())
}

fn map_properties(rec: &mut Recorder, n: usize, seed: Seed, tol: &Tolerance) -> Result<()> {
    let salt = |k: u64| Seed(seed.0.wrapping_mul(0x9e3779b97f4a7c15).wrapping_add(1000 + k));

    // similarities preserve rho_star with fourth-power scaling
    {
        let theta: f64 = 0.7;
        let similarities = [
            LinearMap::square(
                vec![theta.cos(), -theta.sin(), theta.sin(), theta.cos()],
                NormedSpace::l2(2),
            )?,
            LinearMap::square(vec![0.0, -2.0, 2.0, 0.0], NormedSpace::l1(2))?,
            LinearMap::square(vec![0.0, 0.5, 0.5, 0.0], NormedSpace::linf(2))?,
            LinearMap::square(vec![0.0, 3.0, -3.0, 0.0], NormedSpace::lp(2, 3.0)?)?,
        ];
        let mut pass = true;
        let mut worst = 0.0f64;
        for (k, map) in similarities.iter().enumerate() {
            let sim = similarity_check(map, n, salt(k as u64), tol)?;
            let pres = preserves_rho_star(map, n, salt(k as u64), tol)?;
            let scaling = rho_star_scaling_check(map, n, salt(k as u64))?;
            if !sim.holds || !pres.holds || scaling > 1e-8 {
                pass = false;
            }
            worst = worst.max(scaling);
        }
        rec.record("similarity_forward", pass, worst, None);
    }

    // non-similarities produce a preservation witness
    {
        let maps = [
            LinearMap::square(vec![1.0, 0.0, 0.0, 2.0], NormedSpace::l2(2))?,
            LinearMap::square(vec![1.0, 0.0, 0.0, 2.0], NormedSpace::l1(2))?,
        ];
        let mut pass = true;
        let mut wit = None;
        for (k, map) in maps.iter().enumerate() {
            let sim = similarity_check(map, n, salt(10 + k as u64), tol)?;
            let pres = preserves_rho_star(map, 2000, salt(10 + k as u64), tol)?;
            if sim.holds || sim.residual < 0.05 || pres.holds {
                pass = false;
            }
            if wit.is_none() {
                wit = pres
                    .witness
                    .as_ref()
                    .map(|w| json!({ "x": w.x.coords(), "y": w.y.coords() }));
            }
        }
        rec.record("similarity_contrapositive", pass, 0.0, wit);
    }

    // the parallelogram ratio is identically 1 in l2
    {
        let est = parallelogram_delta(&NormedSpace::l2(3), n.max(32), salt(20))?;
        rec.record(
            "parallelogram_l2_identity",
            est.delta_min_feasible <= 1e-9,
            est.delta_min_feasible,
            None,
        );
    }

    // sampled sup/inf of ||Tx|| bracket the analytic values for diagonal maps
    {
        let mut pass = true;
        let mut worst = 0.0f64;
        for (p, entries, true_op, true_low) in [
            (2.0, vec![1.0, 0.0, 0.0, 2.0], 2.0, 1.0),
            (3.0, vec![0.5, 0.0, 0.0, 1.5], 1.5, 0.5),
        ] {
            let map = LinearMap::square(entries, NormedSpace::lp(2, p)?)?;
            let (op, low) = operator_norm_estimates(&map, 2000, salt(30))?;
            if op > true_op * (1.0 + 1e-12) || low < true_low * (1.0 - 1e-12) {
                pass = false;
            }
            let spread = ((true_op - op) / true_op).max((low - true_low) / true_low);
            worst = worst.max(spread);
            if spread > 0.02 {
                pass = false;
            }
        }
        rec.record("operator_norm_directionality", pass, worst, None);
    }

    // isosceles-hypothesis bound for scaled orthogonal maps
    {
        let mut pass = true;
        for c in [0.5, 1.0, 3.0] {
            let theta: f64 = 0.4;
            let map = LinearMap::square(
                vec![
                    c * theta.cos(),
                    -c * theta.sin(),
                    c * theta.sin(),
                    c * theta.cos(),
                ],
                NormedSpace::l2(2),
            )?;
            let report = bound_check_isosceles(&map, n.max(200), salt(40), tol)?;
            if report.outcome != BoundOutcome::BoundVerified {
                pass = false;
            }
        }
        rec.record("isosceles_bound", pass, 0.0, None);
    }

    // relation inclusions that hold in every space
    {
        let mut pass = true;
        let mut worst = 0.0f64;
        for space in [NormedSpace::l1(3), NormedSpace::linf(2), NormedSpace::l2(3)] {
            let v = relation_inclusion_check(&space, Flavor::RhoStar, Flavor::Birkhoff, n, salt(50), tol)?;
            if !v.holds {
                pass = false;
            }
            worst = worst.max(v.residual / v.scale.max(f64::MIN_POSITIVE));
        }
        rec.record("rho_star_inside_birkhoff", pass, worst, None);
    }

    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quick_suite_passes_on_shipped_table() {
        let started = std::time::Instant::now();
        let report = run_suite(Seed(1), Profile::Quick, &default_norm_table()).unwrap();
        assert!(started.elapsed().as_secs_f64() < 10.0);
        let failures: Vec<&str> = report
            .properties
            .iter()
            .filter(|p| !p.pass)
            .map(|p| p.name.as_str())
            .collect();
        assert!(report.all_pass, "failing properties: {failures:?}");
    }

    #[test]
    fn suite_is_deterministic() {
        let a = run_suite(Seed(2), Profile::Quick, &default_norm_table()).unwrap();
        let b = run_suite(Seed(2), Profile::Quick, &default_norm_table()).unwrap();
        assert_eq!(
            serde_json::to_string(&a).unwrap(),
            serde_json::to_string(&b).unwrap()
        );
    }

    #[test]
    fn broken_table_fails_named_property() {
        let mut table = default_norm_table();
        table.retain(|e| e.name == "l1r3");
        table[0].smooth = true; // wrong on purpose
        let report = run_suite(Seed(1), Profile::Quick, &table).unwrap();
        assert!(!report.all_pass);
        let failed: Vec<&str> = report
            .properties
            .iter()
            .filter(|p| !p.pass)
            .map(|p| p.name.as_str())
            .collect();
        assert_eq!(failed, vec!["l1r3/smoothness_matches_table"]);
    }
}
