//! Numerical helpers shared across the crate: blockwise hermitian
//! eigendecomposition with eigenvalue grouping, orthonormal real subspaces
//! of the hermitian part (with cached coordinate matrices, so membership
//! tests are matrix-vector products), and small nullspace computations.

use std::sync::Arc;

use nalgebra::linalg::SymmetricEigen;
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::algebra::{AlgebraElement, StarAlgebra};

/// Eigenpairs of a hermitian element across all blocks, value-sorted
/// descending. Each entry keeps its block index and eigenvector.
pub struct AmbientSpectrum {
    pub pairs: Vec<(f64, usize, DVector<Complex64>)>,
}

pub fn herm_eig(x: &AlgebraElement) -> AmbientSpectrum {
    let mut pairs = Vec::new();
    for (b, m) in x.mats.iter().enumerate() {
        if m.nrows() == 0 {
            continue;
        }
        let se = SymmetricEigen::new(m.clone());
        for k in 0..se.eigenvalues.len() {
            pairs.push((se.eigenvalues[k], b, se.eigenvectors.column(k).into_owned()));
        }
    }
    pairs.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap());
    AmbientSpectrum { pairs }
}

/// All eigenvalues of a hermitian element, descending.
pub fn herm_eigenvalues(x: &AlgebraElement) -> Vec<f64> {
    let mut vals: Vec<f64> = x
        .mats
        .iter()
        .filter(|m| m.nrows() > 0)
        .flat_map(|m| {
            SymmetricEigen::new(m.clone())
                .eigenvalues
                .iter()
                .copied()
                .collect::<Vec<_>>()
        })
        .collect();
    vals.sort_by(|a, b| b.partial_cmp(a).unwrap());
    vals
}

pub fn min_eigenvalue(x: &AlgebraElement) -> f64 {
    herm_eigenvalues(x).last().copied().unwrap_or(0.0)
}

/// One cluster of nearby eigenvalues with its spectral projector.
pub struct SpectralGroup {
    pub value: f64,
    pub multiplicity: usize,
    pub projector: AlgebraElement,
}

/// Cluster the spectrum with the given gap width and form the projector of
/// each cluster. Clusters are returned in descending eigenvalue order and
/// their projectors sum to the identity.
pub fn grouped_projectors(x: &AlgebraElement, group_tol: f64) -> Vec<SpectralGroup> {
    let spec = herm_eig(x);
    let mut groups: Vec<SpectralGroup> = Vec::new();
    let mut i = 0;
    while i < spec.pairs.len() {
        let mut j = i + 1;
        while j < spec.pairs.len() && spec.pairs[j - 1].0 - spec.pairs[j].0 <= group_tol {
            j += 1;
        }
        let mut proj = AlgebraElement::zeros(&x.alg);
        let mut mean = 0.0;
        for (val, b, v) in &spec.pairs[i..j] {
            mean += val;
            let vv = v * v.adjoint();
            proj.mats[*b] += vv;
        }
        mean /= (j - i) as f64;
        groups.push(SpectralGroup { value: mean, multiplicity: j - i, projector: proj });
        i = j;
    }
    groups
}

/// Outcome of adjoining a vector to an orthonormal family.
pub enum Adjoin {
    Added,
    Dependent { residual: f64 },
}

/// An orthonormal basis of a real subspace of the hermitian part, stored
/// both as elements and as rows of a real coordinate matrix (so batch
/// projections are dense matrix products).
#[derive(Clone)]
pub struct HermSubspace {
    pub alg: Arc<StarAlgebra>,
    pub elems: Vec<AlgebraElement>,
    coords: DMatrix<f64>,
    rows: usize,
}

impl HermSubspace {
    pub fn empty(alg: &Arc<StarAlgebra>) -> Self {
        let cap = 16.min(alg.herm_dim().max(1));
        HermSubspace {
            alg: alg.clone(),
            elems: Vec::new(),
            coords: DMatrix::zeros(cap, alg.realvec_len()),
            rows: 0,
        }
    }

    pub fn from_elements(
        alg: &Arc<StarAlgebra>,
        elems: impl IntoIterator<Item = AlgebraElement>,
        tol: f64,
    ) -> Self {
        let mut s = Self::empty(alg);
        for e in elems {
            s.adjoin(&e, tol);
        }
        s
    }

    pub fn dim(&self) -> usize {
        self.rows
    }

    /// Row-view of the coordinate matrix (dim × realvec_len).
    pub fn coord_rows(&self) -> nalgebra::DMatrixView<'_, f64> {
        self.coords.rows(0, self.rows)
    }

    fn push_row(&mut self, v: &DVector<f64>) {
        if self.rows == self.coords.nrows() {
            let grown = self.coords.nrows().max(8) * 2;
            self.coords = self.coords.clone().resize_vertically(grown, 0.0);
        }
        self.coords.row_mut(self.rows).copy_from(&v.transpose());
        self.rows += 1;
    }

    /// Orthogonalize `v` in place against the current basis (one pass).
    fn orth_pass(&self, v: &mut DVector<f64>) {
        if self.rows == 0 {
            return;
        }
        let b = self.coord_rows();
        let coeff = b * &*v;
        v.gemv_tr(-1.0, &b, &coeff, 1.0);
    }

    /// Gram–Schmidt adjoin with reorthogonalization. The residual reported
    /// for dependent vectors is relative to the input norm.
    pub fn adjoin(&mut self, x: &AlgebraElement, tol: f64) -> Adjoin {
        let nrm0 = x.norm();
        if nrm0 < 1e-300 {
            return Adjoin::Dependent { residual: 0.0 };
        }
        let mut v = x.to_realvec() / nrm0;
        self.orth_pass(&mut v);
        self.orth_pass(&mut v);
        let nrm = v.norm();
        if nrm <= tol {
            return Adjoin::Dependent { residual: nrm };
        }
        v /= nrm;
        self.push_row(&v);
        self.elems
            .push(AlgebraElement::from_realvec(&self.alg, v.as_slice()));
        Adjoin::Added
    }

    /// Adjoin an element already known to be a unit vector orthogonal to
    /// the basis (used by the closure engine, which orthogonalizes itself).
    pub fn push_orthonormal(&mut self, x: AlgebraElement, v: &DVector<f64>) {
        self.push_row(v);
        self.elems.push(x);
    }

    /// Coefficients of the orthogonal projection onto the subspace.
    pub fn project_coeffs(&self, x: &AlgebraElement) -> DVector<f64> {
        let v = x.to_realvec();
        self.coord_rows() * v
    }

    pub fn project(&self, x: &AlgebraElement) -> AlgebraElement {
        let coeff = self.project_coeffs(x);
        let mut out = AlgebraElement::zeros(&self.alg);
        for (i, e) in self.elems.iter().enumerate() {
            out.axpy(coeff[i], e);
        }
        out
    }

    /// ‖x − P x‖ (absolute).
    pub fn residual(&self, x: &AlgebraElement) -> f64 {
        let mut v = x.to_realvec();
        self.orth_pass(&mut v);
        self.orth_pass(&mut v);
        v.norm()
    }

    /// Membership at tolerance `tol`, relative to max(1, ‖x‖).
    pub fn contains(&self, x: &AlgebraElement, tol: f64) -> bool {
        self.residual(x) <= tol * x.norm().max(1.0)
    }
}

/// Eigenvalue cut for nullspace detection through a normal matrix. The
/// normal-equations route floors true nulls at ≈ eps·λmax rather than
/// eps²·λmax, so the cut must not drop below that; callers rely on the
/// separation between exact nulls and O(λmax) nonzero eigenvalues.
fn normal_matrix_cut(rel_tol: f64, lmax: f64) -> f64 {
    ((rel_tol * rel_tol).max(1e-13) * lmax).max(1e-300)
}

/// Orthonormal basis (columns) of the kernel of a real matrix, detected
/// through the normal matrix MᵀM. Suitable when true null directions are
/// exact to machine precision and separated by a large spectral gap.
pub fn real_kernel(m: &DMatrix<f64>, rel_tol: f64) -> DMatrix<f64> {
    let n = m.ncols();
    let g = m.transpose() * m;
    let se = SymmetricEigen::new(g);
    let lmax = se.eigenvalues.iter().cloned().fold(0.0_f64, f64::max);
    let cut = normal_matrix_cut(rel_tol, lmax);
    let idx: Vec<usize> = (0..n).filter(|&i| se.eigenvalues[i] <= cut).collect();
    let mut out = DMatrix::zeros(n, idx.len());
    for (k, &i) in idx.iter().enumerate() {
        out.set_column(k, &se.eigenvectors.column(i));
    }
    out
}

/// Orthonormal nullspace of a complex matrix via the normal matrix M†M.
pub fn complex_nullspace(m: &DMatrix<Complex64>, rel_tol: f64) -> Vec<DVector<Complex64>> {
    let g = m.adjoint() * m;
    let se = SymmetricEigen::new(g);
    let lmax = se.eigenvalues.iter().cloned().fold(0.0_f64, f64::max);
    let cut = normal_matrix_cut(rel_tol, lmax);
    (0..se.eigenvalues.len())
        .filter(|&i| se.eigenvalues[i] <= cut)
        .map(|i| se.eigenvectors.column(i).into_owned())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{hermitian_basis, random_hermitian};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn alg() -> Arc<StarAlgebra> {
        StarAlgebra::new(vec![2, 3], "M_2 ⊕ M_3")
    }

    #[test]
    fn eigenvalue_sums_match_traces() {
        let alg = alg();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..10 {
            let h = random_hermitian(&alg, &mut rng);
            let vals = herm_eigenvalues(&h);
            assert_eq!(vals.len(), 5);
            let s1: f64 = vals.iter().sum();
            let s2: f64 = vals.iter().map(|v| v * v).sum();
            assert!((s1 - h.trace().re).abs() < 1e-10);
            assert!((s2 - h.inner_re(&h)).abs() < 1e-10);
        }
    }

    #[test]
    fn grouped_projectors_resolve_identity_and_reconstruct() {
        let alg = alg();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let h = random_hermitian(&alg, &mut rng);
        let groups = grouped_projectors(&h, 1e-7);
        let mut sum = AlgebraElement::zeros(&alg);
        let mut rec = AlgebraElement::zeros(&alg);
        for g in &groups {
            sum = sum.add(&g.projector);
            rec.axpy(g.value, &g.projector);
            // Projector idempotence.
            let p2 = g.projector.mul(&g.projector);
            assert!(p2.sub(&g.projector).norm() < 1e-10);
        }
        assert!(sum.sub(&AlgebraElement::identity(&alg)).norm() < 1e-10);
        assert!(rec.sub(&h).norm() < 1e-10);
    }

    #[test]
    fn degenerate_spectrum_groups_collapse() {
        let alg = StarAlgebra::new(vec![3], "M_3");
        let mut x = AlgebraElement::zeros(&alg);
        x.mats[0][(0, 0)] = Complex64::new(2.0, 0.0);
        x.mats[0][(1, 1)] = Complex64::new(2.0 + 1e-9, 0.0);
        x.mats[0][(2, 2)] = Complex64::new(-1.0, 0.0);
        let groups = grouped_projectors(&x, 1e-7);
        assert_eq!(groups.len(), 2);
        assert_eq!(groups[0].multiplicity, 2);
        assert!((groups[0].value - 2.0).abs() < 1e-8);
    }

    #[test]
    fn subspace_projection_is_idempotent_and_detects_membership() {
        let alg = alg();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let gens: Vec<_> = (0..4).map(|_| random_hermitian(&alg, &mut rng)).collect();
        let s = HermSubspace::from_elements(&alg, gens.iter().cloned(), 1e-10);
        assert_eq!(s.dim(), 4);
        for g in &gens {
            assert!(s.contains(g, 1e-10));
        }
        let combo = gens[0].scale(0.3).add(&gens[2].scale(-1.7));
        assert!(s.contains(&combo, 1e-10));
        let outside = random_hermitian(&alg, &mut rng);
        assert!(!s.contains(&outside, 1e-6));
        let p = s.project(&outside);
        let p2 = s.project(&p);
        assert!(p2.sub(&p).norm() < 1e-10);
        // Pythagoras: ‖x‖² = ‖Px‖² + ‖x−Px‖².
        let r = s.residual(&outside);
        let lhs = outside.inner_re(&outside);
        let rhs = p.inner_re(&p) + r * r;
        assert!((lhs - rhs).abs() < 1e-9);
    }

    #[test]
    fn full_basis_spans_everything() {
        let alg = alg();
        let s = HermSubspace::from_elements(&alg, hermitian_basis(&alg), 1e-10);
        assert_eq!(s.dim(), alg.herm_dim());
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let x = random_hermitian(&alg, &mut rng);
        assert!(s.residual(&x) < 1e-12);
    }

    #[test]
    fn real_kernel_of_known_matrix() {
        // Rows kill (1,1,0) and (0,0,1); kernel = span{(1,-1,0)}.
        let m = DMatrix::from_row_slice(2, 3, &[1.0, 1.0, 0.0, 0.0, 0.0, 1.0]);
        let k = real_kernel(&m, 1e-9);
        assert_eq!(k.ncols(), 1);
        let v = k.column(0);
        assert!((v[0] + v[1]).abs() < 1e-12 && v[2].abs() < 1e-12);
        assert!((v.norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn complex_nullspace_of_known_matrix() {
        // 1×2 matrix [1, i]: nullspace spanned by (i, 1)/√2 up to phase.
        let m = DMatrix::from_row_slice(1, 2, &[Complex64::new(1.0, 0.0), Complex64::new(0.0, 1.0)]);
        let ns = complex_nullspace(&m, 1e-9);
        assert_eq!(ns.len(), 1);
        let v = &ns[0];
        let residual = (m * v).norm();
        assert!(residual < 1e-12);
    }
}
