//! Linear ⋆-preserving anti-automorphisms of a block ⋆-algebra, stored
//! structurally: a block permutation σ together with one unitary per
//! block, acting as Φ(x)_b = U_b · (x_{σ(b)})ᵀ · U_b⋆. Any map of this
//! shape reverses products and commutes with ⋆ by construction, so those
//! properties never depend on numerical verification.

use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::algebra::{hermitian_basis, AlgebraElement, StarAlgebra};
use crate::error::{JordanError, Result};
use crate::linalg::{complex_nullspace, HermSubspace};

#[derive(Debug, Clone)]
pub struct AntiAutomorphism {
    pub alg: Arc<StarAlgebra>,
    /// sigma[b] = index of the block read from when writing block b.
    pub sigma: Vec<usize>,
    /// One unitary per target block.
    pub us: Vec<DMatrix<Complex64>>,
}

impl AntiAutomorphism {
    /// Plain transpose (σ = id, U = I).
    pub fn transpose_on(alg: &Arc<StarAlgebra>) -> Self {
        let sigma = (0..alg.blocks.len()).collect();
        let us = alg.blocks.iter().map(|&d| DMatrix::identity(d, d)).collect();
        AntiAutomorphism { alg: alg.clone(), sigma, us }
    }

    /// Swap two equal-sized blocks and transpose (the doubled-embedding
    /// reversal). Requires exactly two blocks of equal dimension.
    pub fn swap_transpose_on(alg: &Arc<StarAlgebra>) -> Self {
        assert_eq!(alg.blocks.len(), 2);
        assert_eq!(alg.blocks[0], alg.blocks[1]);
        let d = alg.blocks[0];
        AntiAutomorphism {
            alg: alg.clone(),
            sigma: vec![1, 0],
            us: vec![DMatrix::identity(d, d), DMatrix::identity(d, d)],
        }
    }

    pub fn apply(&self, x: &AlgebraElement) -> AlgebraElement {
        debug_assert!(x.alg.same_shape(&self.alg));
        let mats = (0..self.alg.blocks.len())
            .map(|b| {
                let u = &self.us[b];
                u * x.mats[self.sigma[b]].transpose() * u.adjoint()
            })
            .collect();
        AlgebraElement { alg: x.alg.clone(), mats }
    }

    /// Tensor of two anti-automorphisms, on the lex-ordered tensor ambient.
    pub fn tensor(a: &AntiAutomorphism, b: &AntiAutomorphism, target: &Arc<StarAlgebra>) -> Self {
        let nb = b.alg.blocks.len();
        let mut sigma = Vec::with_capacity(target.blocks.len());
        let mut us = Vec::with_capacity(target.blocks.len());
        for i in 0..a.alg.blocks.len() {
            for j in 0..nb {
                sigma.push(a.sigma[i] * nb + b.sigma[j]);
                us.push(a.us[i].kronecker(&b.us[j]));
            }
        }
        AntiAutomorphism { alg: target.clone(), sigma, us }
    }

    pub fn direct_sum(a: &AntiAutomorphism, b: &AntiAutomorphism, target: &Arc<StarAlgebra>) -> Self {
        let off = a.alg.blocks.len();
        let mut sigma = a.sigma.clone();
        sigma.extend(b.sigma.iter().map(|&s| s + off));
        let mut us = a.us.clone();
        us.extend(b.us.iter().cloned());
        AntiAutomorphism { alg: target.clone(), sigma, us }
    }

    /// The same map read on the conjugate algebra: conj ∘ Φ ∘ conj has the
    /// same σ and conjugated unitaries.
    pub fn conj_transport(&self, conj_alg: &Arc<StarAlgebra>) -> Self {
        AntiAutomorphism {
            alg: conj_alg.clone(),
            sigma: self.sigma.clone(),
            us: self.us.iter().map(|u| u.map(|z| z.conj())).collect(),
        }
    }

    /// Trace of Φ restricted to the hermitian part (a real number).
    pub fn trace_on_hermitian(&self) -> f64 {
        hermitian_basis(&self.alg)
            .iter()
            .map(|h| h.inner_re(&self.apply(h)))
            .sum()
    }

    /// dim Fix(Φ)∩herm via the involution trace identity
    /// dim = (D + tr Φ|herm)/2. Errors if Φ is not an involution on the
    /// hermitian part (the formula would not produce an integer).
    pub fn fixed_herm_dim(&self) -> Result<usize> {
        let d = self.alg.herm_dim() as f64;
        let t = self.trace_on_hermitian();
        let v = (d + t) / 2.0;
        let r = v.round();
        if (v - r).abs() > 1e-6 || r < 0.0 {
            return Err(JordanError::Instability(format!(
                "fixed-space dimension {v} is not an integer; map is not an involution"
            )));
        }
        Ok(r as usize)
    }

    /// max over the canonical hermitian basis of ‖Φ²(h) − h‖.
    pub fn involution_residual(&self) -> f64 {
        hermitian_basis(&self.alg)
            .iter()
            .map(|h| self.apply(&self.apply(h)).sub(h).norm())
            .fold(0.0, f64::max)
    }

    /// max over a set of elements of ‖Φ(g) − g‖.
    pub fn fixes_residual(&self, elems: &[AlgebraElement]) -> f64 {
        elems
            .iter()
            .map(|g| self.apply(g).sub(g).norm())
            .fold(0.0, f64::max)
    }

    /// Pointwise comparison with another map on the hermitian basis.
    pub fn action_distance(&self, other: &AntiAutomorphism) -> f64 {
        hermitian_basis(&self.alg)
            .iter()
            .map(|h| self.apply(h).sub(&other.apply(h)).norm())
            .fold(0.0, f64::max)
    }
}

/// Does the real span of words in `gens` (and the unit) exhaust the whole
/// ambient algebra? Uses the real coordinate view of the full algebra and
/// closes under multiplication and multiplication by i.
pub fn generates_ambient(alg: &Arc<StarAlgebra>, gens: &[AlgebraElement], tol: f64) -> bool {
    let full = alg.realvec_len();
    let mut span = HermSubspace::empty(alg);
    let i = Complex64::new(0.0, 1.0);
    let mut seeds = vec![AlgebraElement::identity(alg)];
    for g in gens {
        seeds.push(g.clone());
        seeds.push(g.scale_complex(i));
    }
    for s in &seeds {
        span.adjoin(s, tol);
    }
    let mut old = 0;
    while span.dim() < full {
        let n = span.dim();
        if n == old {
            return false;
        }
        let snapshot: Vec<AlgebraElement> = span.elems.clone();
        for a_idx in 0..n {
            for b_idx in old..n {
                for (x, y) in [(a_idx, b_idx), (b_idx, a_idx)] {
                    let p = snapshot[x].mul(&snapshot[y]);
                    span.adjoin(&p, tol);
                    span.adjoin(&p.scale_complex(i), tol);
                    if span.dim() == full {
                        return true;
                    }
                }
            }
        }
        old = n;
    }
    true
}

/// Enumerate all block permutations compatible with block dimensions,
/// lexicographically. Callers only hit small block counts.
fn dim_preserving_permutations(blocks: &[usize]) -> Vec<Vec<usize>> {
    let n = blocks.len();
    let mut out = Vec::new();
    let mut perm = Vec::with_capacity(n);
    let mut used = vec![false; n];
    fn rec(
        blocks: &[usize],
        perm: &mut Vec<usize>,
        used: &mut Vec<bool>,
        out: &mut Vec<Vec<usize>>,
    ) {
        let n = blocks.len();
        if perm.len() == n {
            out.push(perm.clone());
            return;
        }
        let b = perm.len();
        for s in 0..n {
            if !used[s] && blocks[s] == blocks[b] {
                used[s] = true;
                perm.push(s);
                rec(blocks, perm, used, out);
                perm.pop();
                used[s] = false;
            }
        }
    }
    rec(blocks, &mut perm, &mut used, &mut out);
    out
}

/// Solve for the anti-automorphism fixing every element of `fixed`
/// pointwise. For each admissible block permutation the per-block unitary
/// satisfies the linear intertwining condition U·g_{σ(b)}ᵀ = g_b·U for all
/// fixed g, solved as a nullspace problem; a valid solution must be unique
/// up to phase and proportional to a unitary.
pub fn solve_antiautomorphism(
    alg: &Arc<StarAlgebra>,
    fixed: &[AlgebraElement],
    tol: f64,
) -> Result<AntiAutomorphism> {
    let mut found: Vec<AntiAutomorphism> = Vec::new();
    'sigma: for sigma in dim_preserving_permutations(&alg.blocks) {
        let mut us = Vec::with_capacity(alg.blocks.len());
        for (b, &d) in alg.blocks.iter().enumerate() {
            let m = fixed.len();
            let mut cons = DMatrix::<Complex64>::zeros(m * d * d, d * d);
            let eye = DMatrix::<Complex64>::identity(d, d);
            for (gi, g) in fixed.iter().enumerate() {
                let lhs = g.mats[sigma[b]].kronecker(&eye);
                let rhs = eye.kronecker(&g.mats[b]);
                let block = lhs - rhs;
                cons.rows_mut(gi * d * d, d * d).copy_from(&block);
            }
            let ns = complex_nullspace(&cons, 1e-9);
            if ns.len() != 1 {
                if ns.len() > 1 {
                    // Underdetermined for this σ: the fixed set does not pin
                    // the unitary, so no unique reversal exists along σ.
                    return Err(JordanError::AmbiguousAntiAutomorphism);
                }
                continue 'sigma;
            }
            let u_raw = DMatrix::from_column_slice(d, d, ns[0].as_slice());
            // Normalize to a unitary and fix the global phase.
            let gram = u_raw.adjoint() * &u_raw;
            let scale = (gram.trace().re / d as f64).sqrt();
            if scale < 1e-12 {
                continue 'sigma;
            }
            let mut u = u_raw / Complex64::new(scale, 0.0);
            let mut pivot = Complex64::new(0.0, 0.0);
            let mut best = 0.0;
            for z in u.iter() {
                if z.norm() > best + 1e-12 {
                    best = z.norm();
                    pivot = *z;
                }
            }
            u *= (pivot / best).conj();
            let unit_res = (u.adjoint() * &u - &eye).norm();
            if unit_res > 1e-7 * (d as f64).sqrt() {
                continue 'sigma;
            }
            us.push(u);
        }
        let cand = AntiAutomorphism { alg: alg.clone(), sigma, us };
        let res = cand.fixes_residual(fixed);
        if res > tol.max(1e-9) * 10.0 {
            continue;
        }
        if !found.iter().any(|f| f.action_distance(&cand) < 1e-6) {
            found.push(cand);
        }
    }
    match found.len() {
        0 => Err(JordanError::NoAntiAutomorphism(
            "no block permutation admits an intertwining unitary".into(),
        )),
        1 => Ok(found.pop().unwrap()),
        _ => Err(JordanError::AmbiguousAntiAutomorphism),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{random_hermitian, random_unitary};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn transpose_is_an_involution_fixing_symmetric_matrices() {
        let alg = StarAlgebra::new(vec![3], "M_3");
        let t = AntiAutomorphism::transpose_on(&alg);
        assert!(t.involution_residual() < 1e-14);
        // tr on hermitian part: symmetric (6) fixed, antisymmetric (3) negated.
        assert!((t.trace_on_hermitian() - 3.0).abs() < 1e-12);
        assert_eq!(t.fixed_herm_dim().unwrap(), 6);
    }

    #[test]
    fn anti_multiplicativity_is_structural() {
        let alg = StarAlgebra::new(vec![2, 2], "M_2 ⊕ M_2");
        let phi = AntiAutomorphism::swap_transpose_on(&alg);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..5 {
            let x = random_hermitian(&alg, &mut rng);
            let y = random_hermitian(&alg, &mut rng);
            let lhs = phi.apply(&x.mul(&y));
            let rhs = phi.apply(&y).mul(&phi.apply(&x));
            assert!(lhs.sub(&rhs).norm() < 1e-12);
            // ⋆-compatibility.
            let l2 = phi.apply(&x.adjoint());
            let r2 = phi.apply(&x).adjoint();
            assert!(l2.sub(&r2).norm() < 1e-12);
        }
    }

    #[test]
    fn solver_recovers_a_conjugated_transpose() {
        // Fix the symmetric subalgebra rotated by a unitary: Φ must come out
        // as x ↦ (V Vᵀ) xᵀ (V Vᵀ)⋆ for the rotation V.
        let alg = StarAlgebra::new(vec![3], "M_3");
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let v = random_unitary(3, &mut rng);
        let mut fixed = Vec::new();
        for h in hermitian_basis(&alg) {
            let m = &h.mats[0];
            if (m - m.transpose()).norm() < 1e-14 {
                // real-symmetric basis vector: conjugate by v
                let rot = &v * m * v.adjoint();
                fixed.push(AlgebraElement::from_single(&alg, rot).unwrap());
            }
        }
        assert_eq!(fixed.len(), 6);
        let phi = solve_antiautomorphism(&alg, &fixed, 1e-8).unwrap();
        assert!(phi.fixes_residual(&fixed) < 1e-8);
        assert!(phi.involution_residual() < 1e-7);
        assert_eq!(phi.fixed_herm_dim().unwrap(), 6);
        let expect_u = &v * v.transpose();
        let got = &phi.us[0];
        // Compare up to phase via |⟨expect, got⟩| = ‖expect‖·‖got‖.
        let ip: Complex64 = expect_u
            .iter()
            .zip(got.iter())
            .map(|(a, b)| a.conj() * b)
            .sum();
        assert!((ip.norm() - 3.0).abs() < 1e-6);
    }

    #[test]
    fn solver_errors_when_fixed_set_is_too_small() {
        let alg = StarAlgebra::new(vec![2], "M_2");
        // Only the identity fixed: every transpose-conjugation works.
        let fixed = vec![AlgebraElement::identity(&alg)];
        let r = solve_antiautomorphism(&alg, &fixed, 1e-8);
        assert!(matches!(r, Err(JordanError::AmbiguousAntiAutomorphism)));
    }

    #[test]
    fn generation_check_distinguishes_full_and_commutative_spans() {
        let alg = StarAlgebra::new(vec![2], "M_2");
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let full = vec![random_hermitian(&alg, &mut rng), random_hermitian(&alg, &mut rng)];
        assert!(generates_ambient(&alg, &full, 1e-10));
        let mut diag = AlgebraElement::zeros(&alg);
        diag.mats[0][(0, 0)] = Complex64::new(1.0, 0.0);
        diag.mats[0][(1, 1)] = Complex64::new(-2.0, 0.0);
        assert!(!generates_ambient(&alg, &[diag], 1e-10));
    }

    #[test]
    fn tensor_of_transposes_fixes_dimension_by_trace_formula() {
        let a2 = StarAlgebra::new(vec![2], "M_2");
        let a3 = StarAlgebra::new(vec![3], "M_3");
        let t = StarAlgebra::tensor(&a2, &a3);
        let phi = AntiAutomorphism::tensor(
            &AntiAutomorphism::transpose_on(&a2),
            &AntiAutomorphism::transpose_on(&a3),
            &t,
        );
        // tr multiplies: 2 · 3 = 6; fix dim = (36 + 6)/2 = 21 = sym(6).
        assert!((phi.trace_on_hermitian() - 6.0).abs() < 1e-10);
        assert_eq!(phi.fixed_herm_dim().unwrap(), 21);
    }
}

