use crate::scalar::{max_abs, Scalar};

/// Basis of `{e : r(e) = 0 for every row r}` by row reduction.
///
/// Exact backends reduce exactly; float backends pivot on the largest entry
/// and treat entries negligible against the row scale as zero.
pub fn kernel_basis<T: Scalar>(rows: &[Vec<T>], dim: usize) -> Vec<Vec<T>> {
    let mut m: Vec<Vec<T>> = rows.iter().filter(|r| r.len() == dim).cloned().collect();
    let scale = m.iter().fold(T::zero(), |acc, r| {
        let a = max_abs(r);
        if a > acc {
            a
        } else {
            acc
        }
    });
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..dim {
        if row == m.len() {
            break;
        }
        let best = (row..m.len())
            .max_by(|&a, &b| {
                m[a][col]
                    .abs()
                    .partial_cmp(&m[b][col].abs())
                    .unwrap_or(std::cmp::Ordering::Equal)
            })
            .expect("nonempty range");
        if m[best][col].is_negligible(&scale) {
            continue;
        }
        m.swap(row, best);
        let inv = T::one() / m[row][col].clone();
        for c in 0..dim {
            m[row][c] = m[row][c].clone() * inv.clone();
        }
        for r in 0..m.len() {
            if r == row || m[r][col].is_zero() {
                continue;
            }
            let factor = m[r][col].clone();
            for c in 0..dim {
                let delta = factor.clone() * m[row][c].clone();
                m[r][c] = m[r][c].clone() - delta;
            }
        }
        pivots.push(col);
        row += 1;
    }
    (0..dim)
        .filter(|c| !pivots.contains(c))
        .map(|free| {
            let mut v = vec![T::zero(); dim];
            v[free] = T::one();
            for (r, &p) in pivots.iter().enumerate() {
                v[p] = -m[r][free].clone();
            }
            v
        })
        .collect()
}
