//! Small dense helpers shared by the solvers.

use nalgebra::{DMatrix, DVector, SymmetricEigen};

/// Orthonormalizes `constraints` (dropping numerically dependent ones) and
/// returns `(rank, basis)`, where the columns of `basis` are an orthonormal
/// basis of the orthogonal complement in `R^dim`.
pub fn orthonormal_complement(dim: usize, constraints: &[DVector<f64>]) -> (usize, DMatrix<f64>) {
    let mut span: Vec<DVector<f64>> = Vec::with_capacity(dim);
    let scale = constraints.iter().map(|c| c.norm()).fold(0.0, f64::max);
    for c in constraints {
        if let Some(v) = orthogonalize(c, &span, 1e-9 * scale.max(f64::MIN_POSITIVE)) {
            span.push(v);
        }
    }
    let rank = span.len();
    let mut complement = Vec::with_capacity(dim - rank);
    for k in 0..dim {
        if span.len() == dim {
            break;
        }
        let e = DVector::from_fn(dim, |i, _| if i == k { 1.0 } else { 0.0 });
        if let Some(v) = orthogonalize(&e, &span, 0.3) {
            span.push(v.clone());
            complement.push(v);
        }
    }
    let basis = if complement.is_empty() {
        DMatrix::zeros(dim, 0)
    } else {
        DMatrix::from_columns(&complement)
    };
    (rank, basis)
}

/// Two passes of modified Gram-Schmidt; `None` when the remainder is below `floor`.
fn orthogonalize(v: &DVector<f64>, span: &[DVector<f64>], floor: f64) -> Option<DVector<f64>> {
    let mut w = v.clone();
    for _ in 0..2 {
        for s in span {
            let c = s.dot(&w);
            w.axpy(-c, s, 1.0);
        }
    }
    let norm = w.norm();
    (norm > floor).then(|| w / norm)
}

/// Eigen-decomposition with eigenvalues sorted ascending (columns follow).
pub fn sorted_symmetric_eigen(m: &DMatrix<f64>) -> (Vec<f64>, DMatrix<f64>) {
    let sym = (m + m.transpose()) * 0.5;
    let eig = SymmetricEigen::new(sym);
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = DMatrix::from_columns(
        &order.iter().map(|&i| eig.eigenvectors.column(i).into_owned()).collect::<Vec<_>>(),
    );
    (values, vectors)
}
