//! Concrete finite-dimensional complex ⋆-algebras: direct sums of full
//! matrix blocks, with elements stored as one dense matrix per block.
//!
//! Everything downstream (Jordan algebras, composites, morphisms) works
//! relative to a fixed ambient of this shape, so the conventions chosen
//! here — block order under tensor, the canonical hermitian basis, the
//! real coordinate view — are load-bearing and must stay deterministic.

use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{JordanError, Result};

/// A direct sum ⊕_b M_{d_b}(ℂ) with the conjugate-transpose ⋆.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StarAlgebra {
    /// Block dimensions, in order.
    pub blocks: Vec<usize>,
    /// Human-readable name, e.g. "M_3" or "M_2 ⊕ M_2".
    pub label: String,
}

impl StarAlgebra {
    pub fn new(blocks: Vec<usize>, label: impl Into<String>) -> Arc<Self> {
        assert!(!blocks.is_empty() && blocks.iter().all(|&d| d > 0));
        Arc::new(StarAlgebra { blocks, label: label.into() })
    }

    pub fn with_auto_label(blocks: Vec<usize>) -> Arc<Self> {
        let label = blocks
            .iter()
            .map(|d| format!("M_{d}"))
            .collect::<Vec<_>>()
            .join(" ⊕ ");
        Self::new(blocks, label)
    }

    /// The scalars ℂ, used as the target of counits and states.
    pub fn scalars() -> Arc<Self> {
        Self::new(vec![1], "ℂ")
    }

    /// Complex dimension Σ d_b².
    pub fn complex_dim(&self) -> usize {
        self.blocks.iter().map(|d| d * d).sum()
    }

    /// Real dimension of the hermitian part (= complex dimension).
    pub fn herm_dim(&self) -> usize {
        self.complex_dim()
    }

    /// Length of the real coordinate view of an element.
    pub fn realvec_len(&self) -> usize {
        2 * self.complex_dim()
    }

    /// Structural equality of the block pattern (labels may differ).
    pub fn same_shape(&self, other: &StarAlgebra) -> bool {
        self.blocks == other.blocks
    }

    /// Tensor product; blocks are ordered lexicographically (left index
    /// major) and each block is the Kronecker product of the factors.
    pub fn tensor(a: &Arc<StarAlgebra>, b: &Arc<StarAlgebra>) -> Arc<StarAlgebra> {
        let mut blocks = Vec::with_capacity(a.blocks.len() * b.blocks.len());
        for &da in &a.blocks {
            for &db in &b.blocks {
                blocks.push(da * db);
            }
        }
        Self::new(blocks, format!("({}) ⊗ ({})", a.label, b.label))
    }

    /// The conjugate algebra: same blocks, elements read as entrywise
    /// conjugates. Structurally identical; the label records the reading.
    pub fn conjugate(a: &Arc<StarAlgebra>) -> Arc<StarAlgebra> {
        Self::new(a.blocks.clone(), format!("conj({})", a.label))
    }

    /// Direct sum: concatenated block lists.
    pub fn direct_sum(a: &Arc<StarAlgebra>, b: &Arc<StarAlgebra>) -> Arc<StarAlgebra> {
        let mut blocks = a.blocks.clone();
        blocks.extend_from_slice(&b.blocks);
        Self::new(blocks, format!("({}) ⊕ ({})", a.label, b.label))
    }
}

/// An element of a [`StarAlgebra`]: one matrix per block.
#[derive(Debug, Clone)]
pub struct AlgebraElement {
    pub alg: Arc<StarAlgebra>,
    pub mats: Vec<DMatrix<Complex64>>,
}

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

impl AlgebraElement {
    pub fn zeros(alg: &Arc<StarAlgebra>) -> Self {
        let mats = alg.blocks.iter().map(|&d| DMatrix::zeros(d, d)).collect();
        AlgebraElement { alg: alg.clone(), mats }
    }

    pub fn identity(alg: &Arc<StarAlgebra>) -> Self {
        let mats = alg.blocks.iter().map(|&d| DMatrix::identity(d, d)).collect();
        AlgebraElement { alg: alg.clone(), mats }
    }

    pub fn from_mats(alg: &Arc<StarAlgebra>, mats: Vec<DMatrix<Complex64>>) -> Result<Self> {
        if mats.len() != alg.blocks.len()
            || mats.iter().zip(&alg.blocks).any(|(m, &d)| m.nrows() != d || m.ncols() != d)
        {
            return Err(JordanError::ShapeMismatch(format!(
                "blocks {:?} vs provided {:?}",
                alg.blocks,
                mats.iter().map(|m| m.nrows()).collect::<Vec<_>>()
            )));
        }
        Ok(AlgebraElement { alg: alg.clone(), mats })
    }

    /// Single-block convenience constructor.
    pub fn from_single(alg: &Arc<StarAlgebra>, m: DMatrix<Complex64>) -> Result<Self> {
        Self::from_mats(alg, vec![m])
    }

    pub fn map_blocks(&self, f: impl Fn(&DMatrix<Complex64>) -> DMatrix<Complex64>) -> Self {
        AlgebraElement {
            alg: self.alg.clone(),
            mats: self.mats.iter().map(f).collect(),
        }
    }

    fn zip_blocks(
        &self,
        other: &AlgebraElement,
        f: impl Fn(&DMatrix<Complex64>, &DMatrix<Complex64>) -> DMatrix<Complex64>,
    ) -> Self {
        debug_assert!(self.alg.same_shape(&other.alg));
        AlgebraElement {
            alg: self.alg.clone(),
            mats: self.mats.iter().zip(&other.mats).map(|(a, b)| f(a, b)).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.zip_blocks(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.zip_blocks(other, |a, b| a - b)
    }

    pub fn scale(&self, s: f64) -> Self {
        self.map_blocks(|m| m * c(s))
    }

    pub fn scale_complex(&self, s: Complex64) -> Self {
        self.map_blocks(|m| m * s)
    }

    pub fn axpy(&mut self, s: f64, other: &Self) {
        for (m, o) in self.mats.iter_mut().zip(&other.mats) {
            *m += o * c(s);
        }
    }

    /// Associative product, blockwise.
    pub fn mul(&self, other: &Self) -> Self {
        self.zip_blocks(other, |a, b| a * b)
    }

    /// Symmetrized product a∘b = (ab+ba)/2.
    pub fn jordan(&self, other: &Self) -> Self {
        self.zip_blocks(other, |a, b| (a * b + b * a) * c(0.5))
    }

    /// Jordan product for hermitian arguments: since (ab)⋆ = ba, one
    /// multiplication and a hermitian symmetrization suffice.
    pub fn jordan_hermitian(&self, other: &Self) -> Self {
        self.zip_blocks(other, |a, b| {
            let ab = a * b;
            (&ab + ab.adjoint()) * c(0.5)
        })
    }

    pub fn adjoint(&self) -> Self {
        self.map_blocks(|m| m.adjoint())
    }

    /// Entrywise complex conjugation (the reading map into/out of the
    /// conjugate algebra; also m̄ = (m⋆)ᵀ).
    pub fn conj_entries(&self) -> Self {
        self.map_blocks(|m| m.map(|z| z.conj()))
    }

    pub fn transpose(&self) -> Self {
        self.map_blocks(|m| m.transpose())
    }

    pub fn hermitize(&self) -> Self {
        self.map_blocks(|m| (m + m.adjoint()) * c(0.5))
    }

    pub fn trace(&self) -> Complex64 {
        self.mats.iter().map(|m| m.trace()).sum()
    }

    /// ⟨a|b⟩ = Σ_blocks tr(a⋆ b).
    pub fn inner(&self, other: &Self) -> Complex64 {
        self.mats
            .iter()
            .zip(&other.mats)
            .map(|(a, b)| a.iter().zip(b.iter()).map(|(x, y)| x.conj() * y).sum::<Complex64>())
            .sum()
    }

    /// Real part of ⟨a|b⟩ (the full value, for hermitian arguments).
    pub fn inner_re(&self, other: &Self) -> f64 {
        self.inner(other).re
    }

    pub fn norm(&self) -> f64 {
        self.inner(self).re.sqrt()
    }

    pub fn normalize(&self) -> Self {
        self.scale(1.0 / self.norm())
    }

    pub fn hermiticity_residual(&self) -> f64 {
        self.sub(&self.adjoint()).norm()
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_residual() <= tol * self.norm().max(1.0)
    }

    /// Real coordinates: per block in order, column-major entries, each as
    /// (re, im). The euclidean dot of two views equals Re⟨a|b⟩ exactly.
    pub fn to_realvec(&self) -> DVector<f64> {
        let mut v = Vec::with_capacity(self.alg.realvec_len());
        for m in &self.mats {
            for z in m.iter() {
                v.push(z.re);
                v.push(z.im);
            }
        }
        DVector::from_vec(v)
    }

    pub fn from_realvec(alg: &Arc<StarAlgebra>, v: &[f64]) -> Self {
        assert_eq!(v.len(), alg.realvec_len());
        let mut mats = Vec::with_capacity(alg.blocks.len());
        let mut k = 0;
        for &d in &alg.blocks {
            let mut m = DMatrix::zeros(d, d);
            for col in 0..d {
                for row in 0..d {
                    m[(row, col)] = Complex64::new(v[k], v[k + 1]);
                    k += 2;
                }
            }
            mats.push(m);
        }
        AlgebraElement { alg: alg.clone(), mats }
    }

    /// Kronecker product into the tensor ambient (blocks in lex order).
    pub fn kron(&self, other: &Self, target: &Arc<StarAlgebra>) -> Self {
        debug_assert_eq!(
            target.blocks.len(),
            self.alg.blocks.len() * other.alg.blocks.len()
        );
        let mut mats = Vec::with_capacity(target.blocks.len());
        for a in &self.mats {
            for b in &other.mats {
                mats.push(a.kronecker(b));
            }
        }
        AlgebraElement { alg: target.clone(), mats }
    }

    /// Partial trace over the right tensor factor: an element of `left`.
    pub fn ptrace_right(&self, left: &Arc<StarAlgebra>, right: &Arc<StarAlgebra>) -> Self {
        let mut out = AlgebraElement::zeros(left);
        let nb = right.blocks.len();
        for (i, &da) in left.blocks.iter().enumerate() {
            for (j, &db) in right.blocks.iter().enumerate() {
                let m = &self.mats[i * nb + j];
                let dst = &mut out.mats[i];
                for r1 in 0..da {
                    for c1 in 0..da {
                        let mut s = Complex64::new(0.0, 0.0);
                        for r2 in 0..db {
                            s += m[(r1 * db + r2, c1 * db + r2)];
                        }
                        dst[(r1, c1)] += s;
                    }
                }
            }
        }
        out
    }

    /// Partial trace over the left tensor factor: an element of `right`.
    pub fn ptrace_left(&self, left: &Arc<StarAlgebra>, right: &Arc<StarAlgebra>) -> Self {
        let mut out = AlgebraElement::zeros(right);
        let nb = right.blocks.len();
        for (i, &da) in left.blocks.iter().enumerate() {
            for (j, &db) in right.blocks.iter().enumerate() {
                let m = &self.mats[i * nb + j];
                let dst = &mut out.mats[j];
                for r2 in 0..db {
                    for c2 in 0..db {
                        let mut s = Complex64::new(0.0, 0.0);
                        for r1 in 0..da {
                            s += m[(r1 * db + r2, c1_index(r1, db, c2))];
                        }
                        dst[(r2, c2)] += s;
                    }
                }
            }
        }
        out
    }

    /// Contract the left tensor leg against `a`: the unique y ∈ right with
    /// ⟨a ⊗ w | x⟩ = ⟨w | y⟩ for all w.
    pub fn pair_left(&self, left: &Arc<StarAlgebra>, right: &Arc<StarAlgebra>, a: &Self) -> Self {
        let mut out = AlgebraElement::zeros(right);
        let nb = right.blocks.len();
        for (bi, &da) in left.blocks.iter().enumerate() {
            let am = &a.mats[bi];
            for (bj, &db) in right.blocks.iter().enumerate() {
                let m = &self.mats[bi * nb + bj];
                let dst = &mut out.mats[bj];
                for i in 0..da {
                    for j in 0..da {
                        let w = am[(i, j)].conj();
                        if w.norm_sqr() == 0.0 {
                            continue;
                        }
                        for k in 0..db {
                            for l in 0..db {
                                dst[(k, l)] += w * m[(i * db + k, j * db + l)];
                            }
                        }
                    }
                }
            }
        }
        out
    }

    /// Contract the right tensor leg against `b`: the unique y ∈ left with
    /// ⟨w ⊗ b | x⟩ = ⟨w | y⟩ for all w.
    pub fn pair_right(&self, left: &Arc<StarAlgebra>, right: &Arc<StarAlgebra>, b: &Self) -> Self {
        let mut out = AlgebraElement::zeros(left);
        let nb = right.blocks.len();
        for (bi, &da) in left.blocks.iter().enumerate() {
            let dst = &mut out.mats[bi];
            for (bj, &db) in right.blocks.iter().enumerate() {
                let bm = &b.mats[bj];
                let m = &self.mats[bi * nb + bj];
                for k in 0..db {
                    for l in 0..db {
                        let w = bm[(k, l)].conj();
                        if w.norm_sqr() == 0.0 {
                            continue;
                        }
                        for i in 0..da {
                            for j in 0..da {
                                dst[(i, j)] += w * m[(i * db + k, j * db + l)];
                            }
                        }
                    }
                }
            }
        }
        out
    }

    /// Reorder tensor legs: an element of A⊗B becomes one of B⊗A.
    pub fn swap_factors(
        &self,
        left: &Arc<StarAlgebra>,
        right: &Arc<StarAlgebra>,
        target: &Arc<StarAlgebra>,
    ) -> Self {
        let mut out = AlgebraElement::zeros(target);
        let nb = right.blocks.len();
        let na = left.blocks.len();
        for (i, &da) in left.blocks.iter().enumerate() {
            for (j, &db) in right.blocks.iter().enumerate() {
                let src = &self.mats[i * nb + j];
                let dst = &mut out.mats[j * na + i];
                for r1 in 0..da {
                    for r2 in 0..db {
                        for col1 in 0..da {
                            for col2 in 0..db {
                                dst[(r2 * da + r1, col2 * da + col1)] =
                                    src[(r1 * db + r2, col1 * db + col2)];
                            }
                        }
                    }
                }
            }
        }
        out
    }
}

fn c1_index(r1: usize, db: usize, c2: usize) -> usize {
    r1 * db + c2
}

/// Canonical orthonormal basis of the hermitian part, in deterministic
/// order: per block, diagonal units E_ii, then for each i<j the pair
/// (E_ij+E_ji)/√2 and (iE_ij−iE_ji)/√2.
pub fn hermitian_basis(alg: &Arc<StarAlgebra>) -> Vec<AlgebraElement> {
    let mut out = Vec::with_capacity(alg.herm_dim());
    let s = std::f64::consts::FRAC_1_SQRT_2;
    for (b, &d) in alg.blocks.iter().enumerate() {
        for i in 0..d {
            let mut e = AlgebraElement::zeros(alg);
            e.mats[b][(i, i)] = c(1.0);
            out.push(e);
        }
        for i in 0..d {
            for j in (i + 1)..d {
                let mut e = AlgebraElement::zeros(alg);
                e.mats[b][(i, j)] = c(s);
                e.mats[b][(j, i)] = c(s);
                out.push(e);
                let mut e = AlgebraElement::zeros(alg);
                e.mats[b][(i, j)] = Complex64::new(0.0, s);
                e.mats[b][(j, i)] = Complex64::new(0.0, -s);
                out.push(e);
            }
        }
    }
    out
}

/// Complex coordinates of an arbitrary element in the canonical hermitian
/// basis (which is also a ℂ-basis of the whole algebra). Order matches
/// [`hermitian_basis`]. For hermitian input the coordinates are real.
pub fn herm_coords(x: &AlgebraElement) -> DVector<Complex64> {
    let s2 = std::f64::consts::SQRT_2;
    let mut v = Vec::with_capacity(x.alg.herm_dim());
    for (b, &d) in x.alg.blocks.iter().enumerate() {
        let m = &x.mats[b];
        for i in 0..d {
            v.push(m[(i, i)]);
        }
        for i in 0..d {
            for j in (i + 1)..d {
                v.push((m[(j, i)] + m[(i, j)]) / c(s2));
                v.push((m[(j, i)] - m[(i, j)]) * Complex64::new(0.0, 1.0) / c(s2));
            }
        }
    }
    DVector::from_vec(v)
}

/// Inverse of [`herm_coords`].
pub fn from_herm_coords(alg: &Arc<StarAlgebra>, v: &DVector<Complex64>) -> AlgebraElement {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let mut x = AlgebraElement::zeros(alg);
    let mut k = 0;
    for (b, &d) in alg.blocks.iter().enumerate() {
        for i in 0..d {
            x.mats[b][(i, i)] = v[k];
            k += 1;
        }
        for i in 0..d {
            for j in (i + 1)..d {
                let a = v[k];
                let bb = v[k + 1];
                k += 2;
                x.mats[b][(i, j)] += a * c(s) + bb * Complex64::new(0.0, s);
                x.mats[b][(j, i)] += a * c(s) - bb * Complex64::new(0.0, s);
            }
        }
    }
    x
}

/// Real coordinates of a hermitian element in the canonical basis.
pub fn herm_coords_re(x: &AlgebraElement) -> DVector<f64> {
    herm_coords(x).map(|z| z.re)
}

pub fn from_herm_coords_re(alg: &Arc<StarAlgebra>, v: &DVector<f64>) -> AlgebraElement {
    from_herm_coords(alg, &v.map(|r| Complex64::new(r, 0.0)))
}

/// Matrix with entries N(0,1)/√2 + i·N(0,1)/√2.
pub fn gaussian_complex(d: usize, rng: &mut impl Rng) -> DMatrix<Complex64> {
    gaussian_complex_rect(d, d, rng)
}

pub fn gaussian_complex_rect(rows: usize, cols: usize, rng: &mut impl Rng) -> DMatrix<Complex64> {
    DMatrix::from_fn(rows, cols, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        Complex64::new(re, im) * c(std::f64::consts::FRAC_1_SQRT_2)
    })
}

/// Random hermitian ambient element (GUE-normalized blocks).
pub fn random_hermitian(alg: &Arc<StarAlgebra>, rng: &mut impl Rng) -> AlgebraElement {
    let mats = alg
        .blocks
        .iter()
        .map(|&d| {
            let g = gaussian_complex(d, rng);
            (&g + g.adjoint()) * c(0.5)
        })
        .collect();
    AlgebraElement { alg: alg.clone(), mats }
}

/// Random real combination Σ N(0,1)·basis[i].
pub fn random_in_span(basis: &[AlgebraElement], rng: &mut impl Rng) -> AlgebraElement {
    let mut x = AlgebraElement::zeros(&basis[0].alg);
    for b in basis {
        let w: f64 = rng.sample(StandardNormal);
        x.axpy(w, b);
    }
    x
}

/// Haar-ish random unitary via QR of a complex gaussian matrix.
pub fn random_unitary(d: usize, rng: &mut impl Rng) -> DMatrix<Complex64> {
    let g = gaussian_complex(d, rng);
    let qr = g.qr();
    qr.q()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn m2() -> Arc<StarAlgebra> {
        StarAlgebra::new(vec![2], "M_2")
    }

    fn m2m3() -> Arc<StarAlgebra> {
        StarAlgebra::new(vec![2, 3], "M_2 ⊕ M_3")
    }

    #[test]
    fn unit_norm_squared_is_total_dimension() {
        let u = AlgebraElement::identity(&m2());
        assert_eq!(u.inner_re(&u), 2.0);
        let u = AlgebraElement::identity(&m2m3());
        assert_eq!(u.inner_re(&u), 5.0);
    }

    #[test]
    fn pauli_matrices_orthogonal_norm_two() {
        let alg = m2();
        let sx = AlgebraElement::from_single(
            &alg,
            DMatrix::from_row_slice(2, 2, &[c(0.0), c(1.0), c(1.0), c(0.0)]),
        )
        .unwrap();
        let sy = AlgebraElement::from_single(
            &alg,
            DMatrix::from_row_slice(
                2,
                2,
                &[c(0.0), Complex64::new(0.0, -1.0), Complex64::new(0.0, 1.0), c(0.0)],
            ),
        )
        .unwrap();
        let sz = AlgebraElement::from_single(
            &alg,
            DMatrix::from_row_slice(2, 2, &[c(1.0), c(0.0), c(0.0), c(-1.0)]),
        )
        .unwrap();
        for (a, b) in [(&sx, &sy), (&sx, &sz), (&sy, &sz)] {
            assert!(a.inner(b).norm() < 1e-15);
        }
        for a in [&sx, &sy, &sz] {
            assert!((a.inner_re(a) - 2.0).abs() < 1e-15);
        }
        // σx σy = i σz: associative structure sanity.
        let prod = sx.mul(&sy);
        let expect = sz.scale_complex(Complex64::new(0.0, 1.0));
        assert!(prod.sub(&expect).norm() < 1e-15);
        // σx ∘ σy = 0.
        assert!(sx.jordan(&sy).norm() < 1e-15);
        assert!(sx.jordan_hermitian(&sy).norm() < 1e-15);
    }

    #[test]
    fn hermitian_basis_is_orthonormal_and_complete() {
        let alg = m2m3();
        let basis = hermitian_basis(&alg);
        assert_eq!(basis.len(), 13); // 4 + 9
        for (i, a) in basis.iter().enumerate() {
            assert!(a.hermiticity_residual() < 1e-15);
            for (j, b) in basis.iter().enumerate() {
                let g = a.inner(b);
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((g - c(want)).norm() < 1e-15, "gram({i},{j}) = {g}");
            }
        }
    }

    #[test]
    fn realvec_dot_matches_inner_product() {
        let alg = m2m3();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let a = random_hermitian(&alg, &mut rng);
            let b = random_hermitian(&alg, &mut rng);
            let va = a.to_realvec();
            let vb = b.to_realvec();
            assert!((va.dot(&vb) - a.inner_re(&b)).abs() < 1e-12);
            let back = AlgebraElement::from_realvec(&alg, va.as_slice());
            assert!(back.sub(&a).norm() == 0.0);
        }
    }

    #[test]
    fn herm_coords_roundtrip_and_isometry() {
        let alg = m2m3();
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let a = random_hermitian(&alg, &mut rng);
        let v = herm_coords(&a);
        assert!(v.iter().all(|z| z.im.abs() < 1e-14));
        let back = from_herm_coords(&alg, &v);
        assert!(back.sub(&a).norm() < 1e-13);
        // Non-hermitian elements decompose too (complex coefficients).
        let g = AlgebraElement {
            alg: alg.clone(),
            mats: alg.blocks.iter().map(|&d| gaussian_complex(d, &mut rng)).collect(),
        };
        let back = from_herm_coords(&alg, &herm_coords(&g));
        assert!(back.sub(&g).norm() < 1e-13);
        let b = random_hermitian(&alg, &mut rng);
        let w = herm_coords(&b);
        assert!((herm_coords(&a).dot(&w).re - a.inner_re(&b)).abs() < 1e-12);
    }

    #[test]
    fn kron_places_entries_at_lexicographic_indices() {
        let a2 = m2();
        let a3 = StarAlgebra::new(vec![3], "M_3");
        let t = StarAlgebra::tensor(&a2, &a3);
        assert_eq!(t.blocks, vec![6]);
        let mut x = AlgebraElement::zeros(&a2);
        x.mats[0][(0, 1)] = c(1.0);
        let mut y = AlgebraElement::zeros(&a3);
        y.mats[0][(2, 0)] = c(1.0);
        let k = x.kron(&y, &t);
        // (r1,r2)=(0,2) → 0·3+2 = 2; (c1,c2)=(1,0) → 1·3+0 = 3.
        for r in 0..6 {
            for col in 0..6 {
                let want = if (r, col) == (2, 3) { 1.0 } else { 0.0 };
                assert_eq!(k.mats[0][(r, col)], c(want));
            }
        }
    }

    #[test]
    fn tensor_block_order_is_left_major() {
        let a = m2m3();
        let b = m2();
        let t = StarAlgebra::tensor(&a, &b);
        assert_eq!(t.blocks, vec![4, 6]);
        let u = StarAlgebra::tensor(&b, &a);
        assert_eq!(u.blocks, vec![4, 6]);
    }

    #[test]
    fn partial_traces_are_compatible_with_full_trace() {
        let a = m2m3();
        let b = m2();
        let t = StarAlgebra::tensor(&a, &b);
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let x = random_hermitian(&a, &mut rng);
        let y = random_hermitian(&b, &mut rng);
        let xy = x.kron(&y, &t);
        // ptr over right of x⊗y = tr(y)·x, and symmetrically.
        let pr = xy.ptrace_right(&a, &b);
        assert!(pr.sub(&x.scale_complex(y.trace())).norm() < 1e-12);
        let pl = xy.ptrace_left(&a, &b);
        assert!(pl.sub(&y.scale_complex(x.trace())).norm() < 1e-12);
        let z = random_hermitian(&t, &mut rng);
        assert!((z.ptrace_right(&a, &b).trace() - z.trace()).norm() < 1e-12);
        assert!((z.ptrace_left(&a, &b).trace() - z.trace()).norm() < 1e-12);
    }

    #[test]
    fn swap_factors_is_an_isometric_involution() {
        let a = m2m3();
        let b = m2();
        let t = StarAlgebra::tensor(&a, &b);
        let u = StarAlgebra::tensor(&b, &a);
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        let z = random_hermitian(&t, &mut rng);
        let s = z.swap_factors(&a, &b, &u);
        assert!((s.norm() - z.norm()).abs() < 1e-12);
        let back = s.swap_factors(&b, &a, &t);
        assert!(back.sub(&z).norm() == 0.0);
        // On product elements it transposes the factors.
        let x = random_hermitian(&a, &mut rng);
        let y = random_hermitian(&b, &mut rng);
        let lhs = x.kron(&y, &t).swap_factors(&a, &b, &u);
        let rhs = y.kron(&x, &u);
        assert!(lhs.sub(&rhs).norm() < 1e-12);
    }

    #[test]
    fn pairings_adjoint_kron_and_generalize_ptrace() {
        let a = StarAlgebra::with_auto_label(vec![2, 3]);
        let b = StarAlgebra::new(vec![2], "M_2");
        let t = StarAlgebra::tensor(&a, &b);
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let z = random_hermitian(&t, &mut rng);
        let p = random_hermitian(&a, &mut rng);
        let q = random_hermitian(&b, &mut rng);
        // ⟨p⊗q | z⟩ = ⟨q | pair_left(z,p)⟩ = ⟨p | pair_right(z,q)⟩.
        let full = p.kron(&q, &t).inner(&z);
        assert!((full - q.inner(&z.pair_left(&a, &b, &p))).norm() < 1e-12);
        assert!((full - p.inner(&z.pair_right(&a, &b, &q))).norm() < 1e-12);
        // Pairing against the unit is the partial trace.
        let ua = AlgebraElement::identity(&a);
        let ub = AlgebraElement::identity(&b);
        assert!(z.pair_left(&a, &b, &ua).sub(&z.ptrace_left(&a, &b)).norm() < 1e-12);
        assert!(z.pair_right(&a, &b, &ub).sub(&z.ptrace_right(&a, &b)).norm() < 1e-12);
        // On product elements it rescales the other factor.
        let w = p.kron(&q, &t).pair_left(&a, &b, &p);
        assert!(w.sub(&q.scale(p.norm().powi(2))).norm() < 1e-10);
    }

    #[test]
    fn conjugation_is_a_real_isometry_and_antimultiplicative_on_inner() {
        let alg = m2m3();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let a = random_hermitian(&alg, &mut rng);
        let b = random_hermitian(&alg, &mut rng);
        // ⟨ā|b̄⟩ = conj⟨a|b⟩ (= ⟨b|a⟩).
        let lhs = a.conj_entries().inner(&b.conj_entries());
        assert!((lhs - a.inner(&b).conj()).norm() < 1e-12);
        // conj of a product = product of conjs (entrywise conj is a ring map).
        let p = a.mul(&b).conj_entries();
        let q = a.conj_entries().mul(&b.conj_entries());
        assert!(p.sub(&q).norm() < 1e-12);
    }
}
