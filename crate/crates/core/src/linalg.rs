//! Minimal dense-matrix helpers: rank via row echelon with partial pivoting.

/// Rank of the matrix whose rows are `rows` (each of length `cols`),
/// with a relative pivot threshold.
pub fn rank(rows: &[Vec<f64>], cols: usize) -> usize {
    let mut m: Vec<Vec<f64>> = rows.to_vec();
    let scale = m
        .iter()
        .flat_map(|r| r.iter())
        .map(|v| v.abs())
        .fold(0.0, f64::max);
    if scale == 0.0 {
        return 0;
    }
    let eps = 1e-12 * scale;
    let mut r = 0;
    for c in 0..cols {
        let Some(pivot) = (r..m.len()).max_by(|&a, &b| {
            m[a][c].abs().partial_cmp(&m[b][c].abs()).unwrap()
        }) else {
            break;
        };
        if m[pivot][c].abs() <= eps {
            continue;
        }
        m.swap(r, pivot);
        let (top, rest) = m.split_at_mut(r + 1);
        let pivot_row = &top[r];
        for row in rest.iter_mut() {
            let f = row[c] / pivot_row[c];
            for (a, &b) in row[c..].iter_mut().zip(&pivot_row[c..]) {
                *a -= f * b;
            }
        }
        r += 1;
        if r == m.len() {
            break;
        }
    }
    r
}

/// True iff the two vectors span a 2-dimensional subspace.
/// Uses the Euclidean Gram determinant with a relative threshold.
pub fn independent(x: &[f64], y: &[f64]) -> bool {
    let xx: f64 = x.iter().map(|a| a * a).sum();
    let yy: f64 = y.iter().map(|a| a * a).sum();
    let xy: f64 = x.iter().zip(y).map(|(a, b)| a * b).sum();
    if xx == 0.0 || yy == 0.0 {
        return false;
    }
    // sin^2 of the angle between x and y
    let gram = xx * yy - xy * xy;
    gram > 1e-20 * xx * yy
}
