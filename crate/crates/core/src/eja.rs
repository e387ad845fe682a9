//! Euclidean Jordan algebras presented as embedded Jordan components: a
//! real subspace of hermitian elements of a block ⋆-algebra, closed under
//! a∘b = (ab+ba)/2, containing the ambient unit, carrying the restricted
//! trace inner product. Constructors cover the four special families
//!
//!   R_n  symmetric matrices        dim n(n+1)/2   rank n
//!   C_n  complex hermitian         dim n²         rank n
//!   Q_n  quaternionic hermitian    dim n(2n−1)    rank n
//!   V_n  spin factor ℝ ⊕ ℝⁿ        dim n+1        rank 2
//!
//! each in a standard (smallest faithful) and a universal embedding; the
//! exceptional algebra has no associative embedding at all and is refused.

use std::fmt;
use std::sync::Arc;

use rand::Rng;

use crate::algebra::{
    hermitian_basis, random_in_span, AlgebraElement, StarAlgebra,
};
use crate::antiauto::{solve_antiautomorphism, AntiAutomorphism};
use crate::error::{JordanError, Result};
use crate::linalg::{grouped_projectors, herm_eigenvalues, real_kernel, HermSubspace};
use crate::spin::spin_system;
use crate::{DEFAULT_TOL, GROUP_TOL};

use nalgebra::{Complex, DMatrix};
use num_complex::Complex64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    R,
    C,
    Q,
    V,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Family::R => "R",
            Family::C => "C",
            Family::Q => "Q",
            Family::V => "V",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EmbeddingKind {
    Standard,
    Universal,
    Derived,
}

/// An embedded Jordan component.
#[derive(Clone)]
pub struct EmbeddedJordanAlgebra {
    pub label: String,
    pub ambient: Arc<StarAlgebra>,
    pub basis: HermSubspace,
    pub unit: AlgebraElement,
    /// The reversal anti-automorphism of the ambient, present exactly when
    /// this embedding is the universal one.
    pub involution: Option<AntiAutomorphism>,
    pub embedding: EmbeddingKind,
    pub universal: bool,
    /// Ambient block indices this component was compressed from; empty for
    /// objects constructed at the top level.
    pub support_key: Vec<usize>,
}

impl EmbeddedJordanAlgebra {
    pub fn dim(&self) -> usize {
        self.basis.dim()
    }

    pub fn contains(&self, x: &AlgebraElement, tol: f64) -> bool {
        self.basis.contains(x, tol)
    }

    pub fn residual(&self, x: &AlgebraElement) -> f64 {
        self.basis.residual(x)
    }

    pub fn project(&self, x: &AlgebraElement) -> AlgebraElement {
        self.basis.project(x)
    }

    /// a∘b with membership checks on inputs and output.
    pub fn jordan_product(
        &self,
        a: &AlgebraElement,
        b: &AlgebraElement,
        tol: f64,
    ) -> Result<AlgebraElement> {
        for x in [a, b] {
            let res = self.residual(x);
            if res > tol * x.norm().max(1.0) {
                return Err(JordanError::NotInAlgebra { residual: res });
            }
        }
        let p = a.jordan(b);
        let res = self.residual(&p);
        if res > tol.max(1e-10) * p.norm().max(1.0) * 10.0 {
            return Err(JordanError::NotAJordanSubalgebra(format!(
                "product of members leaves the subspace (residual {res:.3e})"
            )));
        }
        Ok(p)
    }

    /// The quadratic action x ↦ a x a of `a` on the ambient; for special
    /// Jordan algebras this is U_a = 2L_a² − L_{a²} restricted to members.
    pub fn quadratic_map(&self, a: &AlgebraElement, x: &AlgebraElement) -> AlgebraElement {
        a.mul(x).mul(a)
    }

    pub fn random_element(&self, rng: &mut impl Rng) -> AlgebraElement {
        random_in_span(&self.basis.elems, rng)
    }

    /// A random normalized density: ρ ∈ A, ρ ≥ 0, ⟨ρ|u⟩ = 1.
    pub fn random_density(&self, rng: &mut impl Rng) -> AlgebraElement {
        let y = self.random_element(rng);
        let sq = y.mul(&y).hermitize();
        let t = sq.inner_re(&self.unit);
        sq.scale(1.0 / t)
    }

    /// A random pure density: a primitive idempotent, trace-normalized.
    pub fn random_pure_density(&self, rng: &mut impl Rng) -> Result<AlgebraElement> {
        let x = self.random_element(rng);
        let dec = self.spectral(&x, rng)?;
        let q = &dec.frame[0];
        Ok(q.scale(1.0 / q.inner_re(&self.unit)))
    }

    /// Full spectral decomposition of a member: a complete Jordan frame of
    /// primitive idempotents of this algebra with real eigenvalues, sorted
    /// descending.
    pub fn spectral(
        &self,
        x: &AlgebraElement,
        rng: &mut impl Rng,
    ) -> Result<SpectralDecomposition> {
        let herm_res = x.hermiticity_residual();
        if herm_res > 1e-8 * x.norm().max(1.0) {
            return Err(JordanError::NotHermitian { residual: herm_res });
        }
        let mem_res = self.residual(x);
        if mem_res > DEFAULT_TOL * x.norm().max(1.0) * 10.0 {
            return Err(JordanError::NotInAlgebra { residual: mem_res });
        }
        let mut frame = Vec::new();
        for g in grouped_projectors(x, GROUP_TOL) {
            let p = g.projector;
            let res = self.residual(&p);
            if res > 1e-6 * p.norm().max(1.0) {
                return Err(JordanError::Instability(format!(
                    "spectral projector drifts off the algebra (residual {res:.3e})"
                )));
            }
            self.refine_to_primitives(&p, rng, 0, &mut frame)?;
        }
        let mut pairs: Vec<(f64, AlgebraElement)> = frame
            .into_iter()
            .map(|q| (x.inner_re(&q) / q.inner_re(&q), q))
            .collect();
        pairs.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap());
        let mut rec = AlgebraElement::zeros(&self.ambient);
        for (t, q) in &pairs {
            rec.axpy(*t, q);
        }
        let residual = rec.sub(x).norm();
        let (values, frame) = pairs.into_iter().unzip();
        Ok(SpectralDecomposition { values, frame, residual })
    }

    /// Split an idempotent of this algebra into primitive ones by drawing
    /// generic elements of its corner U_p(A) and splitting along their
    /// spectra. The shift by (‖pzp‖+1)·p keeps corner eigenvalues cleanly
    /// separated from the kernel of p.
    fn refine_to_primitives(
        &self,
        p: &AlgebraElement,
        rng: &mut impl Rng,
        depth: usize,
        out: &mut Vec<AlgebraElement>,
    ) -> Result<()> {
        if depth > 64 {
            return Err(JordanError::Instability("idempotent refinement recursion".into()));
        }
        let ambient_rank = p.trace().re;
        if (ambient_rank - 1.0).abs() < 1e-6 {
            // Rank one in the ambient: primitive in any subalgebra.
            out.push(p.clone());
            return Ok(());
        }
        'attempt: for _ in 0..10 {
            let z = random_in_span(&self.basis.elems, rng);
            let y = p.mul(&z).mul(p).hermitize();
            let shift = y.norm() + 1.0;
            let shifted = y.add(&p.scale(shift));
            let corner: Vec<_> = grouped_projectors(&shifted, GROUP_TOL)
                .into_iter()
                .filter(|g| g.value > 0.5)
                .collect();
            if corner.len() == 1 {
                out.push(p.clone());
                return Ok(());
            }
            for w in corner.windows(2) {
                if w[0].value - w[1].value < 10.0 * GROUP_TOL {
                    continue 'attempt; // degenerate draw, redo
                }
            }
            for g in &corner {
                self.refine_to_primitives(&g.projector, rng, depth + 1, out)?;
            }
            return Ok(());
        }
        Err(JordanError::Instability(
            "could not split idempotent with generic corner draws".into(),
        ))
    }

    /// Rank = size of the Jordan frame of a generic element.
    pub fn rank(&self, rng: &mut impl Rng) -> Result<usize> {
        let x = self.random_element(rng);
        Ok(self.spectral(&x, rng)?.frame.len())
    }

    pub fn random_jordan_frame(&self, rng: &mut impl Rng) -> Result<Vec<AlgebraElement>> {
        let x = self.random_element(rng);
        Ok(self.spectral(&x, rng)?.frame)
    }

    /// Cone membership: a member whose ambient spectrum is nonnegative.
    pub fn in_cone(&self, x: &AlgebraElement, tol: f64) -> bool {
        self.contains(x, tol)
            && herm_eigenvalues(x).last().copied().unwrap_or(0.0) >= -tol * x.norm().max(1.0)
    }

    pub fn is_effect(&self, x: &AlgebraElement, tol: f64) -> bool {
        if !self.contains(x, tol) {
            return false;
        }
        let vals = herm_eigenvalues(x);
        vals.iter().all(|&v| v >= -tol && v <= 1.0 + tol)
    }

    pub fn is_state_density(&self, x: &AlgebraElement, tol: f64) -> bool {
        self.in_cone(x, tol) && (x.inner_re(&self.unit) - 1.0).abs() <= tol * 10.0
    }

    /// dim Fix(Φ)∩herm − dim A for the universal involution; zero exactly
    /// when every reversal-fixed hermitian element is reachable, i.e. the
    /// embedding supports the dagger-compact structure fully.
    pub fn reversibility_gap(&self) -> Result<Option<i64>> {
        match &self.involution {
            None => Ok(None),
            Some(phi) => {
                let fix = phi.fixed_herm_dim()? as i64;
                Ok(Some(fix - self.dim() as i64))
            }
        }
    }

    /// Orthonormal basis of the centre together with the simple summands,
    /// each compressed to its supporting ambient blocks. Summands are
    /// ordered by their first supporting block.
    pub fn center_and_summands(
        &self,
        rng: &mut impl Rng,
    ) -> Result<(Vec<AlgebraElement>, Vec<EmbeddedJordanAlgebra>)> {
        let d = self.dim();
        let mut coeff = DMatrix::<f64>::identity(d, d);
        let mut members: Vec<AlgebraElement> = self.basis.elems.clone();

        // Intersect kernels of z ↦ [z, w] for w running through two generic
        // members first (collapsing the candidate space almost entirely),
        // then every basis member to certify the result.
        let mut witnesses: Vec<AlgebraElement> = Vec::with_capacity(d + 2);
        witnesses.push(random_in_span(&self.basis.elems, rng));
        witnesses.push(random_in_span(&self.basis.elems, rng));
        witnesses.extend(self.basis.elems.iter().cloned());

        for w in &witnesses {
            let k = coeff.ncols();
            if k == 1 {
                break;
            }
            let rows = self.ambient.realvec_len();
            let mut m = DMatrix::<f64>::zeros(rows, k);
            for (i, e) in members.iter().enumerate() {
                let comm = e.mul(w).sub(&w.mul(e));
                m.set_column(i, &comm.to_realvec());
            }
            if m.norm() < 1e-10 {
                continue;
            }
            let null = real_kernel(&m, 1e-7);
            if null.ncols() == k {
                continue;
            }
            if null.ncols() == 0 {
                return Err(JordanError::Instability(
                    "centre computation lost the unit direction".into(),
                ));
            }
            coeff = &coeff * &null;
            members = (0..coeff.ncols())
                .map(|i| {
                    let mut e = AlgebraElement::zeros(&self.ambient);
                    for (m_idx, b) in self.basis.elems.iter().enumerate() {
                        e.axpy(coeff[(m_idx, i)], b);
                    }
                    e
                })
                .collect();
        }

        let center = members;
        if center.len() == 1 {
            return Ok((center, vec![self.clone()]));
        }

        // Minimal central idempotents = spectral projectors of a generic
        // central element.
        let mut minimal: Option<Vec<AlgebraElement>> = None;
        for _ in 0..10 {
            let zc = random_in_span(&center, rng);
            let groups = grouped_projectors(&zc, GROUP_TOL);
            if groups.len() == center.len() {
                minimal = Some(groups.into_iter().map(|g| g.projector).collect());
                break;
            }
        }
        let minimal = minimal.ok_or_else(|| {
            JordanError::Instability("could not split the centre with generic draws".into())
        })?;

        let mut summands = Vec::new();
        for q in &minimal {
            summands.push(self.compress_to_summand(q)?);
        }
        summands.sort_by_key(|s: &EmbeddedJordanAlgebra| s.support_key.clone());
        Ok((center, summands))
    }

    /// Build the ideal q·A·q as an embedded component over the blocks that
    /// support the central idempotent q.
    fn compress_to_summand(&self, q: &AlgebraElement) -> Result<EmbeddedJordanAlgebra> {
        let mut support = Vec::new();
        for (b, m) in q.mats.iter().enumerate() {
            let d = m.nrows();
            let nrm = m.norm();
            if nrm < 1e-7 {
                continue;
            }
            let eye = DMatrix::<Complex64>::identity(d, d);
            if (m - &eye).norm() < 1e-7 {
                support.push(b);
            } else {
                return Err(JordanError::Instability(format!(
                    "central idempotent is not block-aligned on block {b}"
                )));
            }
        }
        if support.is_empty() {
            return Err(JordanError::Instability("central idempotent has empty support".into()));
        }
        let sub_blocks: Vec<usize> = support.iter().map(|&b| self.ambient.blocks[b]).collect();
        let sub = StarAlgebra::new(
            sub_blocks,
            format!("{} | blocks {:?}", self.ambient.label, support),
        );
        let mut basis = HermSubspace::empty(&sub);
        for b in &self.basis.elems {
            let cut = q.mul(b).mul(q).hermitize();
            let mats: Vec<DMatrix<Complex<f64>>> =
                support.iter().map(|&bi| cut.mats[bi].clone()).collect();
            let restricted = AlgebraElement::from_mats(&sub, mats)?;
            basis.adjoin(&restricted, 1e-8);
        }
        let mut s = EmbeddedJordanAlgebra {
            label: format!("{}[{}]", self.label, support[0]),
            ambient: sub.clone(),
            basis,
            unit: AlgebraElement::identity(&sub),
            involution: None,
            embedding: EmbeddingKind::Derived,
            universal: false,
            support_key: support.clone(),
        };
        // The restricted unit must be the restricted q.
        let qres = AlgebraElement::from_mats(
            &sub,
            support.iter().map(|&bi| q.mats[bi].clone()).collect(),
        )?;
        if qres.sub(&s.unit).norm() > 1e-7 {
            return Err(JordanError::Instability("summand unit mismatch".into()));
        }
        if s.basis.residual(&s.unit) > 1e-7 {
            return Err(JordanError::Instability("summand does not contain its unit".into()));
        }
        s.label = format!("{}[blocks {:?}]", self.label, support);
        Ok(s)
    }

    /// Classify each simple summand by (dimension, rank).
    pub fn classify(&self, rng: &mut impl Rng) -> Result<Vec<SummandClass>> {
        let (_, summands) = self.center_and_summands(rng)?;
        let mut out = Vec::new();
        for s in &summands {
            let dim = s.dim();
            let rank = s.rank(rng)?;
            out.push(SummandClass::from_dim_rank(dim, rank, s.ambient.blocks.clone()));
        }
        Ok(out)
    }
}

pub struct SpectralDecomposition {
    pub values: Vec<f64>,
    pub frame: Vec<AlgebraElement>,
    pub residual: f64,
}

/// Classification of one simple summand.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SummandClass {
    pub family: Option<Family>,
    pub param: usize,
    pub dim: usize,
    pub rank: usize,
    pub ambient_blocks: Vec<usize>,
}

impl SummandClass {
    pub fn from_dim_rank(dim: usize, rank: usize, ambient_blocks: Vec<usize>) -> Self {
        let (family, param) = if rank == 1 && dim == 1 {
            (Some(Family::R), 1)
        } else if rank == 2 && dim >= 2 {
            (Some(Family::V), dim - 1)
        } else if rank >= 3 && dim == rank * (rank + 1) / 2 {
            (Some(Family::R), rank)
        } else if rank >= 3 && dim == rank * rank {
            (Some(Family::C), rank)
        } else if rank >= 3 && dim == rank * (2 * rank - 1) {
            (Some(Family::Q), rank)
        } else {
            (None, 0)
        };
        SummandClass { family, param, dim, rank, ambient_blocks }
    }

    pub fn name(&self) -> String {
        match self.family {
            Some(f) => format!("{f}{}", self.param),
            None => format!("unclassified(dim={},rank={})", self.dim, self.rank),
        }
    }
}

impl fmt::Display for SummandClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

fn finish(
    label: String,
    ambient: Arc<StarAlgebra>,
    elems: Vec<AlgebraElement>,
    involution: Option<AntiAutomorphism>,
    embedding: EmbeddingKind,
    universal: bool,
) -> EmbeddedJordanAlgebra {
    let basis = HermSubspace::from_elements(&ambient, elems, 1e-10);
    let unit = AlgebraElement::identity(&ambient);
    debug_assert!(basis.residual(&unit) < 1e-9 * unit.norm());
    EmbeddedJordanAlgebra {
        label,
        ambient,
        basis,
        unit,
        involution,
        embedding,
        universal,
        support_key: Vec::new(),
    }
}

/// R_n: real symmetric matrices inside M_n, reversal = transpose. The
/// standard embedding is already the universal one.
fn make_r(n: usize, univ: bool) -> EmbeddedJordanAlgebra {
    let alg = StarAlgebra::new(vec![n], format!("M_{n}"));
    let elems: Vec<AlgebraElement> = hermitian_basis(&alg)
        .into_iter()
        .filter(|h| {
            let m = &h.mats[0];
            (m - m.transpose()).norm() < 1e-14
        })
        .collect();
    let phi = AntiAutomorphism::transpose_on(&alg);
    let _ = univ; // the standard embedding of R_n is already universal
    finish(format!("R{n}"), alg, elems, Some(phi), EmbeddingKind::Universal, true)
}

/// C_n standard: all hermitian matrices in M_n. Not universal (the
/// universal envelope doubles), so no reversal is attached.
fn make_c_std(n: usize) -> EmbeddedJordanAlgebra {
    let alg = StarAlgebra::new(vec![n], format!("M_{n}"));
    let elems = hermitian_basis(&alg);
    finish(format!("C{n}@std"), alg, elems, None, EmbeddingKind::Standard, false)
}

/// C_n universal: a ↦ (a, aᵀ) in M_n ⊕ M_n, reversal = swap ∘ transpose.
fn make_c_univ(n: usize) -> EmbeddedJordanAlgebra {
    let single = StarAlgebra::new(vec![n], format!("M_{n}"));
    let alg = StarAlgebra::new(vec![n, n], format!("M_{n} ⊕ M_{n}"));
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let elems: Vec<AlgebraElement> = hermitian_basis(&single)
        .into_iter()
        .map(|h| {
            let m = &h.mats[0];
            AlgebraElement::from_mats(&alg, vec![m * Complex64::new(s, 0.0), m.transpose() * Complex64::new(s, 0.0)])
                .unwrap()
        })
        .collect();
    let phi = AntiAutomorphism::swap_transpose_on(&alg);
    finish(format!("C{n}@univ"), alg, elems, Some(phi), EmbeddingKind::Universal, true)
}

/// Deterministic orthonormal basis of the quaternionic hermitian matrices
/// inside M_{2n}: X = [[A, B], [−B̄, Ā]] with A hermitian and B complex
/// antisymmetric.
fn quaternionic_basis(n: usize, alg: &Arc<StarAlgebra>) -> Vec<AlgebraElement> {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let mut out = Vec::new();
    let single = StarAlgebra::new(vec![n], "tmp");
    for h in hermitian_basis(&single) {
        let a = &h.mats[0];
        let mut m = DMatrix::<Complex64>::zeros(2 * n, 2 * n);
        m.view_mut((0, 0), (n, n)).copy_from(&(a * Complex64::new(s, 0.0)));
        m.view_mut((n, n), (n, n))
            .copy_from(&(a.map(|z| z.conj()) * Complex64::new(s, 0.0)));
        out.push(AlgebraElement::from_single(alg, m).unwrap());
    }
    for i in 0..n {
        for j in (i + 1)..n {
            for z in [Complex64::new(0.5, 0.0), Complex64::new(0.0, 0.5)] {
                let mut b = DMatrix::<Complex64>::zeros(n, n);
                b[(i, j)] = z;
                b[(j, i)] = -z;
                let mut m = DMatrix::<Complex64>::zeros(2 * n, 2 * n);
                m.view_mut((0, n), (n, n)).copy_from(&b);
                m.view_mut((n, 0), (n, n)).copy_from(&(-b.map(|w| w.conj())));
                out.push(AlgebraElement::from_single(alg, m).unwrap());
            }
        }
    }
    out
}

/// Q_n in M_{2n}. For n ≥ 3 this standard embedding is universal and the
/// reversal (a symplectic transpose) is recovered from its fixed set.
fn make_q(n: usize, univ: bool) -> Result<EmbeddedJordanAlgebra> {
    if univ && n == 2 {
        // The universal envelope of Q_2 is larger than M_4: Q_2 ≅ V_5, so
        // the universal embedding is the doubled spin one.
        let mut a = make_v(5, true)?;
        a.label = "Q2@univ".into();
        return Ok(a);
    }
    if univ && n == 1 {
        // Q_1 is just ℝ; its universal envelope is one-dimensional.
        let mut a = make_r(1, true);
        a.label = "Q1@univ".into();
        return Ok(a);
    }
    let alg = StarAlgebra::new(vec![2 * n], format!("M_{}", 2 * n));
    let elems = quaternionic_basis(n, &alg);
    // For n ≥ 3 the standard symplectic embedding is already universal, so
    // the two conventions coincide and share one label. At n = 2 the
    // envelope is larger, but the embedding still carries the symplectic
    // reversal (the generators fill M_4, so it is the unique one); at n = 1
    // the generated algebra is too small to pin a reversal down.
    let is_universal = n >= 3;
    let phi = if n >= 2 {
        Some(solve_antiautomorphism(&alg, &elems, DEFAULT_TOL)?)
    } else {
        None
    };
    let (label, kind) = if is_universal {
        (format!("Q{n}"), EmbeddingKind::Universal)
    } else {
        (format!("Q{n}@std"), EmbeddingKind::Standard)
    };
    Ok(finish(label, alg, elems, phi, kind, is_universal))
}

/// Spin factor V_n = ℝ·1 ⊕ ℝⁿ with (t,x)∘(s,y) = (ts+⟨x,y⟩, ty+sx),
/// realized on a spin system. Even n: single block (standard = universal).
/// Odd n: universal doubles the block; the single-block embedding is the
/// smallest faithful one but has no reversal.
fn make_v(n: usize, univ: bool) -> Result<EmbeddedJordanAlgebra> {
    let sys = spin_system(n, univ);
    let mut elems = vec![AlgebraElement::identity(&sys.alg)];
    elems.extend(sys.gens.iter().cloned());
    let doubled = sys.alg.blocks.len() == 2;
    let is_universal = univ || !doubled && n.is_multiple_of(2) || n == 1;
    let phi = if is_universal {
        Some(solve_antiautomorphism(&sys.alg, &elems, DEFAULT_TOL)?)
    } else {
        None
    };
    // Even degrees (and degree 1) admit a single embedding; odd degrees
    // split into the small single-block one and the doubled universal one.
    let (label, kind) = if n.is_multiple_of(2) || n == 1 {
        (format!("V{n}"), EmbeddingKind::Universal)
    } else if univ {
        (format!("V{n}@univ"), EmbeddingKind::Universal)
    } else {
        (format!("V{n}@std"), EmbeddingKind::Standard)
    };
    Ok(finish(label, sys.alg, elems, phi, kind, is_universal))
}

const MAX_MATRIX_DEGREE: usize = 16;
const MAX_Q_DEGREE: usize = 8;
const MAX_SPIN_DEGREE: usize = 10;

/// Construct a family member in the requested embedding.
pub fn make_algebra(family: Family, n: usize, universal: bool) -> Result<EmbeddedJordanAlgebra> {
    if n == 0 {
        return Err(JordanError::InvalidArgument("degree must be positive".into()));
    }
    let cap = match family {
        Family::R | Family::C => MAX_MATRIX_DEGREE,
        Family::Q => MAX_Q_DEGREE,
        Family::V => MAX_SPIN_DEGREE,
    };
    if n > cap {
        return Err(JordanError::InvalidArgument(format!(
            "degree {n} exceeds the supported cap {cap} for this family"
        )));
    }
    match family {
        Family::R => Ok(make_r(n, universal)),
        Family::C => Ok(if universal { make_c_univ(n) } else { make_c_std(n) }),
        Family::Q => make_q(n, universal),
        Family::V => make_v(n, universal),
    }
}

/// Direct sum of two components, blockwise.
pub fn direct_sum(
    a: &EmbeddedJordanAlgebra,
    b: &EmbeddedJordanAlgebra,
) -> EmbeddedJordanAlgebra {
    let ambient = StarAlgebra::direct_sum(&a.ambient, &b.ambient);
    let mut elems = Vec::with_capacity(a.dim() + b.dim());
    for e in &a.basis.elems {
        let mut mats = e.mats.clone();
        mats.extend(b.ambient.blocks.iter().map(|&d| DMatrix::zeros(d, d)));
        elems.push(AlgebraElement::from_mats(&ambient, mats).unwrap());
    }
    for e in &b.basis.elems {
        let mut mats: Vec<DMatrix<Complex64>> =
            a.ambient.blocks.iter().map(|&d| DMatrix::zeros(d, d)).collect();
        mats.extend(e.mats.iter().cloned());
        elems.push(AlgebraElement::from_mats(&ambient, mats).unwrap());
    }
    let involution = match (&a.involution, &b.involution) {
        (Some(pa), Some(pb)) => Some(AntiAutomorphism::direct_sum(pa, pb, &ambient)),
        _ => None,
    };
    let universal = a.universal && b.universal;
    let embedding = if a.embedding == b.embedding { a.embedding } else { EmbeddingKind::Derived };
    finish(
        format!("{}+{}", a.label, b.label),
        ambient,
        elems,
        involution,
        embedding,
        universal,
    )
}

/// Parse the algebra mini-spec grammar: terms like `R3`, `C2@univ`, `V4`,
/// joined by `+`. Families R, C, Q default to the standard embedding;
/// spin factors default to the universal one. Exceptional requests are
/// refused.
pub fn parse_spec(spec: &str) -> Result<EmbeddedJordanAlgebra> {
    let mut parts = Vec::new();
    for term in spec.split('+') {
        let term = term.trim();
        if term.is_empty() {
            return Err(JordanError::Parse { spec: spec.into(), msg: "empty term".into() });
        }
        parts.push(parse_term(spec, term)?);
    }
    let mut it = parts.into_iter();
    let mut acc = it.next().unwrap();
    for next in it {
        acc = direct_sum(&acc, &next);
    }
    Ok(acc)
}

fn parse_term(spec: &str, term: &str) -> Result<EmbeddedJordanAlgebra> {
    let (head, emb) = match term.split_once('@') {
        Some((h, e)) => (h.trim(), Some(e.trim())),
        None => (term, None),
    };
    let mut chars = head.chars();
    let fam_ch = chars.next().unwrap_or(' ').to_ascii_uppercase();
    let rest: String = chars.collect();
    if fam_ch == 'O' || head.eq_ignore_ascii_case("albert") || head.eq_ignore_ascii_case("exceptional") {
        // Octonionic degree ≤ 2 is still special — point at the spin
        // realization instead of refusing outright.
        if fam_ch == 'O' {
            if let Ok(n) = rest.trim().parse::<usize>() {
                if n <= 2 {
                    let alias = if n == 2 { "V9" } else { "R1" };
                    return Err(JordanError::Parse {
                        spec: spec.into(),
                        msg: format!("O{n} is special, not exceptional; request it as {alias}"),
                    });
                }
            }
        }
        return Err(JordanError::ExceptionalNotRepresentable);
    }
    let family = match fam_ch {
        'R' => Family::R,
        'C' => Family::C,
        'Q' => Family::Q,
        'V' => Family::V,
        _ => {
            return Err(JordanError::Parse {
                spec: spec.into(),
                msg: format!("unknown family '{fam_ch}' in term '{term}'"),
            })
        }
    };
    let n: usize = rest.trim().parse().map_err(|_| JordanError::Parse {
        spec: spec.into(),
        msg: format!("bad degree in term '{term}'"),
    })?;
    let universal = match emb {
        None => matches!(family, Family::V),
        Some("std") => false,
        Some("univ") => true,
        Some(other) => {
            return Err(JordanError::Parse {
                spec: spec.into(),
                msg: format!("unknown embedding '@{other}' (expected @std or @univ)"),
            })
        }
    };
    make_algebra(family, n, universal)
}
