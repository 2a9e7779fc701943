// SPDX-License-Identifier: Apache-2.0

//! Density matrices and completely positive maps (real field).

use nalgebra::{DMatrix, SymmetricEigen};

use super::EvalError;

/// Tolerance for positivity and Hermiticity checks.
pub const PSD_TOL: f64 = 1e-9;
/// Eigenvalues closer than this are treated as one degenerate eigenvalue.
pub const CLUSTER_TOL: f64 = 1e-8;

pub type Matrix = DMatrix<f64>;

pub fn is_hermitian(m: &Matrix, tol: f64) -> bool {
    m.is_square() && (m - m.transpose()).abs().max() <= tol
}

/// Eigenvalues in ascending order of the symmetric part of `m`.
pub fn eigenvalues(m: &Matrix) -> Vec<f64> {
    let sym = (m + m.transpose()) * 0.5;
    let mut ev: Vec<f64> = SymmetricEigen::new(sym).eigenvalues.iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    ev
}

pub fn min_eigenvalue(m: &Matrix) -> f64 {
    eigenvalues(m).first().copied().unwrap_or(0.0)
}

pub fn max_eigenvalue(m: &Matrix) -> f64 {
    eigenvalues(m).last().copied().unwrap_or(0.0)
}

pub fn is_psd(m: &Matrix, tol: f64) -> bool {
    is_hermitian(m, tol) && min_eigenvalue(m) >= -tol
}

pub fn check_density(m: &Matrix, what: &str) -> Result<(), EvalError> {
    if !is_hermitian(m, PSD_TOL) {
        return Err(EvalError::InvalidPayload(format!("{what}: not symmetric")));
    }
    let low = min_eigenvalue(m);
    if low < -PSD_TOL {
        return Err(EvalError::InvalidPayload(format!(
            "{what}: negative eigenvalue {low:e}"
        )));
    }
    Ok(())
}

pub fn is_projector(p: &Matrix, tol: f64) -> bool {
    is_hermitian(p, tol) && (p * p - p).abs().max() <= tol
}

pub fn maximally_mixed(dim: usize) -> Matrix {
    Matrix::identity(dim, dim) / dim as f64
}

pub fn pure(v: &[f64]) -> Matrix {
    let v = nalgebra::DVector::from_column_slice(v);
    &v * v.transpose()
}

/// Spectral decomposition `rho = Σ p_i P_i` with degenerate eigenvalues
/// (within [`CLUSTER_TOL`]) grouped into one projector. Zero weights are
/// dropped.
pub fn spectral_projectors(rho: &Matrix) -> Vec<(f64, Matrix)> {
    let sym = (rho + rho.transpose()) * 0.5;
    let eig = SymmetricEigen::new(sym);
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    // (first eigenvalue of the cluster, sum of eigenvalues, count, projector)
    let mut out: Vec<(f64, f64, usize, Matrix)> = Vec::new();
    for k in order {
        let lam = eig.eigenvalues[k];
        let v = eig.eigenvectors.column(k);
        let proj = &v * v.transpose();
        match out.last_mut() {
            Some((first, sum, c, m)) if (lam - *first).abs() <= CLUSTER_TOL => {
                *m += proj;
                *sum += lam;
                *c += 1;
            }
            _ => out.push((lam, lam, 1, proj)),
        }
    }
    out.into_iter()
        .map(|(_, sum, c, m)| (sum / c as f64, m))
        .filter(|(p, _)| p.abs() > CLUSTER_TOL)
        .collect()
}

/// `P rho P`.
pub fn projector_merge(p: &Matrix, rho: &Matrix) -> Result<Matrix, EvalError> {
    if !is_projector(p, PSD_TOL) {
        return Err(EvalError::NotAProjector);
    }
    Ok(p * rho * p)
}

/// `Σ p_i P_i rho P_i` for the spectral decomposition of `adj`.
pub fn mixed_adjective(adj: &Matrix, rho: &Matrix) -> Matrix {
    spectral_projectors(adj)
        .iter()
        .fold(Matrix::zeros(rho.nrows(), rho.ncols()), |acc, (p, proj)| {
            acc + proj * rho * proj * *p
        })
}

/// Kraus operators of [`mixed_adjective`]: `sqrt(p_i) P_i`.
pub fn mixed_adjective_kraus(adj: &Matrix) -> Vec<Matrix> {
    spectral_projectors(adj)
        .into_iter()
        .filter(|(p, _)| *p > 0.0)
        .map(|(p, proj)| proj * p.sqrt())
        .collect()
}

/// `Σ K rho Kᵀ`.
pub fn cpm_apply(kraus: &[Matrix], rho: &Matrix) -> Result<Matrix, EvalError> {
    let Some(first) = kraus.first() else {
        return Err(EvalError::Shape("empty Kraus list".into()));
    };
    if first.ncols() != rho.nrows() || !rho.is_square() {
        return Err(EvalError::Shape(format!(
            "Kraus operators act on dimension {}, state has {}",
            first.ncols(),
            rho.nrows()
        )));
    }
    Ok(kraus
        .iter()
        .fold(Matrix::zeros(first.nrows(), first.nrows()), |acc, k| {
            acc + k * rho * k.transpose()
        }))
}

/// Whether `Σ KᵀK` equals the identity (trace preserving) within `tol`.
pub fn is_trace_preserving(kraus: &[Matrix], tol: f64) -> bool {
    let Some(first) = kraus.first() else { return false };
    let s = kraus
        .iter()
        .fold(Matrix::zeros(first.ncols(), first.ncols()), |acc, k| {
            acc + k.transpose() * k
        });
    (s - Matrix::identity(first.ncols(), first.ncols())).abs().max() <= tol
}

pub fn discard(rho: &Matrix) -> f64 {
    rho.trace()
}

/// Traces out every subsystem not listed in `keep`. `dims` are the
/// subsystem dimensions in row-major order.
pub fn partial_trace(rho: &Matrix, dims: &[usize], keep: &[usize]) -> Result<Matrix, EvalError> {
    let total: usize = dims.iter().product();
    if rho.nrows() != total || !rho.is_square() {
        return Err(EvalError::Shape(format!(
            "state of size {} does not match subsystems {dims:?}",
            rho.nrows()
        )));
    }
    if keep.iter().any(|&k| k >= dims.len()) || keep.windows(2).any(|w| w[0] >= w[1]) {
        return Err(EvalError::BadSubsystem(format!("{keep:?} of {}", dims.len())));
    }
    let kept_dims: Vec<usize> = keep.iter().map(|&k| dims[k]).collect();
    let out_n: usize = kept_dims.iter().product();
    let mut out = Matrix::zeros(out_n, out_n);
    let decompose = |mut x: usize| {
        let mut idx = vec![0; dims.len()];
        for k in (0..dims.len()).rev() {
            idx[k] = x % dims[k];
            x /= dims[k];
        }
        idx
    };
    let compose = |idx: &[usize]| keep.iter().fold(0, |acc, &k| acc * dims[k] + idx[k]);
    for r in 0..total {
        let ri = decompose(r);
        for c in 0..total {
            let ci = decompose(c);
            let traced_equal = (0..dims.len())
                .filter(|k| !keep.contains(k))
                .all(|k| ri[k] == ci[k]);
            if traced_equal {
                out[(compose(&ri), compose(&ci))] += rho[(r, c)];
            }
        }
    }
    Ok(out)
}

/// `I - rho`; requires the largest eigenvalue to be at most one.
pub fn negation(rho: &Matrix) -> Result<Matrix, EvalError> {
    let top = max_eigenvalue(rho);
    if top > 1.0 + PSD_TOL {
        return Err(EvalError::Scale(format!(
            "negation needs largest eigenvalue <= 1, got {top}"
        )));
    }
    Ok(Matrix::identity(rho.nrows(), rho.ncols()) - rho)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(n: usize, v: &[f64]) -> Matrix {
        Matrix::from_row_slice(n, n, v)
    }

    #[test]
    fn projector_merge_on_mixed_state() {
        let p = m(2, &[1., 0., 0., 0.]);
        let r = projector_merge(&p, &maximally_mixed(2)).unwrap();
        assert!((r - m(2, &[0.5, 0., 0., 0.])).abs().max() < 1e-15);
        assert!(projector_merge(&m(2, &[1., 1., 0., 0.]), &p).is_err());
    }

    #[test]
    fn non_commuting_projectors_do_not_commute() {
        let p = m(2, &[1., 0., 0., 0.]);
        let q = m(2, &[0.5, 0.5, 0.5, 0.5]);
        let rho = m(2, &[0.7, 0.1, 0.1, 0.3]);
        let pq = projector_merge(&q, &projector_merge(&p, &rho).unwrap()).unwrap();
        let qp = projector_merge(&p, &projector_merge(&q, &rho).unwrap()).unwrap();
        assert!((pq - qp).abs().max() > 1e-3);
    }

    #[test]
    fn mixed_adjective_reduces_to_projection() {
        let p = m(2, &[1., 0., 0., 0.]);
        let rho = m(2, &[0.6, 0.2, 0.2, 0.4]);
        let a = mixed_adjective(&p, &rho);
        assert!((a - &p * &rho * &p).abs().max() < 1e-12);
        // maximally mixed adjective: halved dephasing in its (degenerate) eigenbasis
        let b = mixed_adjective(&maximally_mixed(2), &rho);
        assert!((b - &rho * 0.5).abs().max() < 1e-12);
    }

    #[test]
    fn spectral_clusters_group_degenerate_eigenvalues() {
        let s = spectral_projectors(&m(3, &[0.25, 0., 0., 0., 0.25, 0., 0., 0., 0.5]));
        assert_eq!(s.len(), 2);
        assert!((s[0].1.trace() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn traces() {
        assert!((discard(&maximally_mixed(5)) - 1.0).abs() < 1e-15);
        let a = m(2, &[0.6, 0.2, 0.2, 0.4]);
        let b = m(2, &[0.5, 0.0, 0.0, 1.5]);
        let ab = a.kronecker(&b);
        let ta = partial_trace(&ab, &[2, 2], &[0]).unwrap();
        assert!((ta - &a * b.trace()).abs().max() < 1e-12);
        let tb = partial_trace(&ab, &[2, 2], &[1]).unwrap();
        assert!((tb - &b * a.trace()).abs().max() < 1e-12);
        assert!(partial_trace(&ab, &[2, 2], &[2]).is_err());
    }

    #[test]
    fn negation_of_projectors() {
        let p = m(2, &[1., 0., 0., 0.]);
        let np = negation(&p).unwrap();
        assert!((negation(&np).unwrap() - &p).abs().max() < 1e-15);
        assert!(negation(&Matrix::identity(2, 2)).unwrap().abs().max() < 1e-15);
        assert!(negation(&(Matrix::identity(2, 2) * 2.0)).is_err());
    }

    #[test]
    fn kraus_application() {
        let id = vec![Matrix::identity(2, 2)];
        let rho = m(2, &[0.6, 0.2, 0.2, 0.4]);
        assert!((cpm_apply(&id, &rho).unwrap() - &rho).abs().max() < 1e-15);
        assert!(is_trace_preserving(&id, 1e-12));
        let f = m(2, &[0., 1., 1., 0.]);
        let out = cpm_apply(&[f], &pure(&[1.0, 0.0])).unwrap();
        assert!((out - pure(&[0.0, 1.0])).abs().max() < 1e-15);
    }
}
