//! Deterministic, seed-reproducible sampling of vectors.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::norms::NormedSpace;
use crate::vector::{Seed, Vector};

pub fn rng_from(seed: Seed) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed.0)
}

/// Draws `n` vectors of unit norm in the given space. Coordinates are drawn
/// uniformly on [-1, 1] and the vector is normalized; zero draws are redrawn.
/// The stream is a pure function of the seed.
pub fn sample_unit_vectors(
    dim: usize,
    n: usize,
    seed: Seed,
    space: &NormedSpace,
) -> Result<Vec<Vector>> {
    if dim < 1 {
        return Err(Error::InvalidArgument("dimension must be >= 1".into()));
    }
    if space.dim() != dim {
        return Err(Error::DimensionMismatch {
            expected: space.dim(),
            got: dim,
        });
    }
    let mut rng = rng_from(seed);
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        out.push(sample_unit(&mut rng, space)?);
    }
    Ok(out)
}

/// One unit vector from an already-running stream.
pub fn sample_unit(rng: &mut ChaCha8Rng, space: &NormedSpace) -> Result<Vector> {
    loop {
        let coords: Vec<f64> = (0..space.dim()).map(|_| rng.gen_range(-1.0..=1.0)).collect();
        let v = Vector::new(coords)?;
        let nv = space.norm(&v)?;
        if nv > 0.0 {
            return Ok(v.scale(1.0 / nv));
        }
    }
}

/// Deliberate extreme-point candidates: the signed basis vectors plus
/// +-1 sign patterns (all of them up to dimension 6, the constant and
/// alternating ones beyond). Not normalized.
pub fn deliberate_candidates(dim: usize) -> Vec<Vector> {
    let mut out = Vec::new();
    for i in 0..dim {
        let e = Vector::basis(dim, i);
        out.push(e.clone());
        out.push(e.neg());
    }
    if dim <= 6 {
        for mask in 0..(1usize << dim) {
            let coords: Vec<f64> = (0..dim)
                .map(|i| if mask >> i & 1 == 1 { -1.0 } else { 1.0 })
                .collect();
            out.push(Vector::new(coords).expect("pattern"));
        }
    } else {
        let ones: Vec<f64> = vec![1.0; dim];
        let alt: Vec<f64> = (0..dim).map(|i| if i % 2 == 0 { 1.0 } else { -1.0 }).collect();
        out.push(Vector::new(ones).expect("ones"));
        out.push(Vector::new(alt.clone()).expect("alt"));
        out.push(Vector::new(alt).expect("alt").neg());
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalization_contract() {
        let sp = NormedSpace::l2(2);
        let vs = sample_unit_vectors(2, 3, Seed(1), &sp).unwrap();
        assert_eq!(vs.len(), 3);
        for v in &vs {
            assert!((sp.norm(v).unwrap() - 1.0).abs() <= 1e-12);
        }

        let sp1 = NormedSpace::l1(3);
        let vs = sample_unit_vectors(3, 1, Seed(7), &sp1).unwrap();
        assert!((sp1.norm(&vs[0]).unwrap() - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn determinism() {
        let sp = NormedSpace::l1(4);
        let a = sample_unit_vectors(4, 10, Seed(42), &sp).unwrap();
        let b = sample_unit_vectors(4, 10, Seed(42), &sp).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn dim_zero_rejected() {
        let sp = NormedSpace::l2(2);
        assert!(sample_unit_vectors(0, 1, Seed(1), &sp).is_err());
    }

    #[test]
    fn candidates_cover_axes_and_patterns() {
        let cs = deliberate_candidates(3);
        assert!(cs.iter().any(|v| v.coords() == [1.0, 0.0, 0.0]));
        assert!(cs.iter().any(|v| v.coords() == [1.0, 1.0, 1.0]));
        assert!(cs.iter().any(|v| v.coords() == [1.0, -1.0, 1.0]));
    }
}
