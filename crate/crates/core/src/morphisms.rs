//! Real-linear maps between hermitian parts of ambient algebras, with the
//! predicates the category cares about: complete positivity (blockwise
//! Choi), Jordan preservation, relative complete Jordan preservation, and
//! the dagger (trace-form adjoint). Also the canonical ⋆-isomorphism γ
//! from the conjugate ambient, and the cup/counit identities (snakes,
//! f† = η) that make conjugates dual objects.

use std::sync::Arc;

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;
use rand::Rng;

use crate::algebra::{
    from_herm_coords, herm_coords, hermitian_basis, random_hermitian, AlgebraElement, StarAlgebra,
};
use crate::composites::{cup_element, cup_element_mirrored, Session};
use crate::eja::EmbeddedJordanAlgebra;
use crate::error::{JordanError, Result};
use crate::linalg::herm_eigenvalues;

/// A real-linear map between hermitian parts, stored as a real matrix in
/// the canonical orthonormal hermitian bases of source and target. The
/// complexification (used for Choi matrices and matrix-unit arguments) is
/// the complex-linear extension along the same bases.
#[derive(Clone)]
pub struct MorphismMap {
    pub source: Arc<StarAlgebra>,
    pub target: Arc<StarAlgebra>,
    /// target.herm_dim() × source.herm_dim()
    pub matrix: DMatrix<f64>,
    pub label: String,
}

impl MorphismMap {
    pub fn identity(alg: &Arc<StarAlgebra>) -> Self {
        let d = alg.herm_dim();
        MorphismMap {
            source: alg.clone(),
            target: alg.clone(),
            matrix: DMatrix::identity(d, d),
            label: format!("id[{}]", alg.label),
        }
    }

    /// Build from an action on hermitian elements (which must send
    /// hermitian to hermitian).
    pub fn from_action(
        source: &Arc<StarAlgebra>,
        target: &Arc<StarAlgebra>,
        label: impl Into<String>,
        f: impl Fn(&AlgebraElement) -> AlgebraElement,
    ) -> Self {
        let sbasis = hermitian_basis(source);
        let mut matrix = DMatrix::zeros(target.herm_dim(), source.herm_dim());
        for (k, h) in sbasis.iter().enumerate() {
            let out = f(h);
            let coords = herm_coords(&out);
            for (r, c) in coords.iter().enumerate() {
                debug_assert!(c.im.abs() < 1e-9, "action does not preserve hermiticity");
                matrix[(r, k)] = c.re;
            }
        }
        MorphismMap { source: source.clone(), target: target.clone(), matrix, label: label.into() }
    }

    /// CP map from Kraus families: kraus[t][s] lists operators d_t × d_s.
    pub fn from_kraus(
        source: &Arc<StarAlgebra>,
        target: &Arc<StarAlgebra>,
        label: impl Into<String>,
        kraus: &[Vec<Vec<DMatrix<Complex64>>>],
    ) -> Self {
        let tcl = target.clone();
        let kr = kraus.to_vec();
        MorphismMap::from_action(source, target, label, move |x| {
            let mut out = AlgebraElement::zeros(&tcl);
            for (t, row) in kr.iter().enumerate() {
                for (s, ops) in row.iter().enumerate() {
                    for k in ops {
                        out.mats[t] += k * &x.mats[s] * k.adjoint();
                    }
                }
            }
            out
        })
    }

    /// The functional x ↦ ⟨x|a⟩ into the unit object (ℝ, ℂ).
    pub fn functional(alg: &Arc<StarAlgebra>, a: &AlgebraElement) -> Self {
        let scalars = StarAlgebra::scalars();
        let coords = crate::algebra::herm_coords_re(a);
        let mut matrix = DMatrix::zeros(1, alg.herm_dim());
        for (k, v) in coords.iter().enumerate() {
            matrix[(0, k)] = *v;
        }
        MorphismMap { source: alg.clone(), target: scalars, matrix, label: "functional".into() }
    }

    /// Apply to any element via the complex-linear extension.
    pub fn apply(&self, x: &AlgebraElement) -> AlgebraElement {
        let c = herm_coords(x);
        let re: DVector<f64> = c.map(|z| z.re);
        let im: DVector<f64> = c.map(|z| z.im);
        let ore = &self.matrix * re;
        let oim = &self.matrix * im;
        let out: DVector<Complex64> =
            DVector::from_fn(ore.len(), |i, _| Complex64::new(ore[i], oim[i]));
        from_herm_coords(&self.target, &out)
    }

    pub fn compose(&self, inner: &MorphismMap) -> Result<MorphismMap> {
        if !inner.target.same_shape(&self.source) {
            return Err(JordanError::ShapeMismatch(format!(
                "cannot compose {} after {}",
                self.label, inner.label
            )));
        }
        Ok(MorphismMap {
            source: inner.source.clone(),
            target: self.target.clone(),
            matrix: &self.matrix * &inner.matrix,
            label: format!("{} ∘ {}", self.label, inner.label),
        })
    }

    /// Adjoint with respect to the trace inner products: the transpose in
    /// orthonormal hermitian coordinates.
    pub fn dagger(&self) -> MorphismMap {
        MorphismMap {
            source: self.target.clone(),
            target: self.source.clone(),
            matrix: self.matrix.transpose(),
            label: format!("({})†", self.label),
        }
    }

    pub fn sub_norm(&self, other: &MorphismMap) -> f64 {
        (&self.matrix - &other.matrix).norm()
    }

    /// (φ⊗ψ)(x) = Σ_p φ(e_p) ⊗ ψ(pair_left(x, e_p)) over a hermitian basis
    /// e_p of φ's source (a complex orthonormal basis, so the expansion is
    /// exact for every x).
    pub fn tensor_apply(
        phi: &MorphismMap,
        psi: &MorphismMap,
        x: &AlgebraElement,
        target: &Arc<StarAlgebra>,
    ) -> AlgebraElement {
        let basis = hermitian_basis(&phi.source);
        let mut out = AlgebraElement::zeros(target);
        for e in &basis {
            let slice = x.pair_left(&phi.source, &psi.source, e);
            if slice.norm() < 1e-15 {
                continue;
            }
            out = out.add(&phi.apply(e).kron(&psi.apply(&slice), target));
        }
        out
    }

    pub fn tensor_map(phi: &MorphismMap, psi: &MorphismMap) -> MorphismMap {
        let source = StarAlgebra::tensor(&phi.source, &psi.source);
        let target = StarAlgebra::tensor(&phi.target, &psi.target);
        let label = format!("{} ⊗ {}", phi.label, psi.label);
        let (p, q) = (phi.clone(), psi.clone());
        let tc = target.clone();
        MorphismMap::from_action(&source, &target, label, move |x| {
            MorphismMap::tensor_apply(&p, &q, x, &tc)
        })
    }
}

pub struct CpOutcome {
    pub cp: bool,
    pub min_choi_eigenvalue: f64,
}

/// Complete positivity via the blockwise Choi criterion: for every source
/// block s and target block t, the matrix Σ_ij E_ij ⊗ φ(E_ij)_t must be
/// positive semidefinite (maps between direct sums are CP exactly when all
/// block components are).
pub fn is_cp(phi: &MorphismMap, tol: f64) -> CpOutcome {
    let mut min_eig = f64::INFINITY;
    for (s, &ds) in phi.source.blocks.iter().enumerate() {
        // Images of this block's matrix units, computed once.
        let mut images = Vec::with_capacity(ds * ds);
        for i in 0..ds {
            for j in 0..ds {
                let mut e = AlgebraElement::zeros(&phi.source);
                e.mats[s][(i, j)] = Complex64::new(1.0, 0.0);
                images.push(phi.apply(&e));
            }
        }
        for (t, &dt) in phi.target.blocks.iter().enumerate() {
            let n = ds * dt;
            let mut choi = DMatrix::<Complex64>::zeros(n, n);
            for i in 0..ds {
                for j in 0..ds {
                    let img = &images[i * ds + j].mats[t];
                    for r in 0..dt {
                        for c in 0..dt {
                            choi[(i * dt + r, j * dt + c)] = img[(r, c)];
                        }
                    }
                }
            }
            let herm = (&choi + choi.adjoint()) * Complex64::new(0.5, 0.0);
            let scale = herm.norm().max(1.0);
            let eig = SymmetricEigen::new(herm);
            let m = eig.eigenvalues.iter().cloned().fold(f64::INFINITY, f64::min);
            min_eig = min_eig.min(m);
            if m < -tol * scale {
                return CpOutcome { cp: false, min_choi_eigenvalue: m };
            }
        }
    }
    CpOutcome { cp: true, min_choi_eigenvalue: min_eig }
}

pub struct JordanPreservation {
    pub preserved: bool,
    pub max_residual: f64,
}

/// Does φ map A into B (image of every basis element inside span B)?
pub fn is_jordan_preserving(
    phi: &MorphismMap,
    a: &EmbeddedJordanAlgebra,
    b: &EmbeddedJordanAlgebra,
    tol: f64,
) -> Result<JordanPreservation> {
    if !phi.source.same_shape(&a.ambient) || !phi.target.same_shape(&b.ambient) {
        return Err(JordanError::ShapeMismatch(
            "map endpoints do not match the given components".into(),
        ));
    }
    let mut worst = 0.0f64;
    for v in &a.basis.elems {
        let w = phi.apply(v);
        let r = b.residual(&w) / w.norm().max(1.0);
        worst = worst.max(r);
    }
    Ok(JordanPreservation { preserved: worst <= tol, max_residual: worst })
}

pub struct CjpOutcome {
    pub cjp: bool,
    pub worst_residual: f64,
    /// (witness label, max residual over the A⊙C basis)
    pub per_witness: Vec<(String, f64)>,
}

/// Relative complete Jordan preservation: for each witness C (the unit
/// object and Ā are always included), φ ⊗ id_C must take A⊙C into B⊙C.
pub fn is_cjp_relative(
    session: &mut Session,
    phi: &MorphismMap,
    a: &Arc<EmbeddedJordanAlgebra>,
    b: &Arc<EmbeddedJordanAlgebra>,
    witnesses: &[Arc<EmbeddedJordanAlgebra>],
    tol: f64,
) -> Result<CjpOutcome> {
    let mut list: Vec<Arc<EmbeddedJordanAlgebra>> = vec![session.object("R1")?, session.conjugate(a)];
    for w in witnesses {
        if !list.iter().any(|x| x.label == w.label) {
            list.push(w.clone());
        }
    }
    let idm: Vec<MorphismMap> = list.iter().map(|c| MorphismMap::identity(&c.ambient)).collect();
    let mut per_witness = Vec::new();
    let mut worst = 0.0f64;
    for (c, idc) in list.iter().zip(&idm) {
        let pac = session.product(a, c)?;
        let pbc = session.product(b, c)?;
        let mut here = 0.0f64;
        for v in &pac.product.basis.elems {
            let w = MorphismMap::tensor_apply(phi, idc, v, &pbc.product.ambient);
            let r = pbc.product.residual(&w) / w.norm().max(1.0);
            here = here.max(r);
        }
        worst = worst.max(here);
        per_witness.push((c.label.clone(), here));
    }
    Ok(CjpOutcome { cjp: worst <= tol, worst_residual: worst, per_witness })
}

/// The canonical ⋆-isomorphism γ : conj(M_A) → M_A determined by the
/// reversal, γ(ā) = Φ_A(a⋆); on stored matrices, block b of the output is
/// U_b x_{σ(b)} U_b†. Restricted to Ā it lands on A.
pub struct GammaIso {
    pub map: MorphismMap,
    pub inverse: MorphismMap,
    pub multiplicativity_residual: f64,
    pub onto_residual: f64,
    pub inverse_residual: f64,
}

pub fn gamma_iso(a: &EmbeddedJordanAlgebra, rng: &mut impl Rng) -> Result<GammaIso> {
    let phi = a
        .involution
        .as_ref()
        .ok_or_else(|| JordanError::NoAntiAutomorphism("object carries no reversal".into()))?;
    let conj = StarAlgebra::conjugate(&a.ambient);
    let sigma = phi.sigma.clone();
    let us = phi.us.clone();

    let forward = {
        let amb = a.ambient.clone();
        let (sigma, us) = (sigma.clone(), us.clone());
        move |x: &AlgebraElement| -> AlgebraElement {
            let mut out = AlgebraElement::zeros(&amb);
            for b in 0..amb.blocks.len() {
                out.mats[b] = &us[b] * &x.mats[sigma[b]] * us[b].adjoint();
            }
            out
        }
    };
    let backward = {
        let cj = conj.clone();
        let (sigma, us) = (sigma.clone(), us.clone());
        move |y: &AlgebraElement| -> AlgebraElement {
            let mut out = AlgebraElement::zeros(&cj);
            for b in 0..cj.blocks.len() {
                out.mats[sigma[b]] = us[b].adjoint() * &y.mats[b] * &us[b];
            }
            out
        }
    };

    let map = MorphismMap::from_action(&conj, &a.ambient, format!("γ[{}]", a.label), &forward);
    let inverse =
        MorphismMap::from_action(&a.ambient, &conj, format!("γ⁻¹[{}]", a.label), &backward);

    let round = inverse.compose(&map)?;
    let inverse_residual = round.sub_norm(&MorphismMap::identity(&conj));

    let mut mult = 0.0f64;
    for _ in 0..8 {
        let x = random_hermitian(&conj, rng);
        let y = random_hermitian(&conj, rng);
        let lhs = forward(&x.mul(&y));
        let rhs = forward(&x).mul(&forward(&y));
        mult = mult.max(lhs.sub(&rhs).norm() / (x.norm() * y.norm()).max(1.0));
    }

    let mut onto = 0.0f64;
    for v in &a.basis.elems {
        let vbar = AlgebraElement { alg: conj.clone(), mats: v.conj_entries().mats };
        onto = onto.max(a.residual(&forward(&vbar)));
    }

    Ok(GammaIso { map, inverse, multiplicativity_residual: mult, onto_residual: onto, inverse_residual })
}

/// Cup as a morphism I → M ⊗ M̄ (column of hermitian coordinates of f).
pub fn cup_as_map(a: &EmbeddedJordanAlgebra) -> (MorphismMap, AlgebraElement) {
    let conj = StarAlgebra::conjugate(&a.ambient);
    let tensor = StarAlgebra::tensor(&a.ambient, &conj);
    let f = cup_element(a, &tensor);
    let coords = crate::algebra::herm_coords_re(&f);
    let mut matrix = DMatrix::zeros(tensor.herm_dim(), 1);
    for (r, v) in coords.iter().enumerate() {
        matrix[(r, 0)] = *v;
    }
    let map = MorphismMap {
        source: StarAlgebra::scalars(),
        target: tensor,
        matrix,
        label: format!("f[{}]", a.label),
    };
    (map, f)
}

/// Counit as a morphism M ⊗ M̄ → I, built independently from inner
/// products η(h) = ⟨h|f⟩ over the tensor's hermitian basis.
pub fn counit_as_map(a: &EmbeddedJordanAlgebra) -> MorphismMap {
    let conj = StarAlgebra::conjugate(&a.ambient);
    let tensor = StarAlgebra::tensor(&a.ambient, &conj);
    let f = cup_element(a, &tensor);
    let basis = hermitian_basis(&tensor);
    let mut matrix = DMatrix::zeros(1, tensor.herm_dim());
    for (k, h) in basis.iter().enumerate() {
        matrix[(0, k)] = h.inner_re(&f);
    }
    MorphismMap {
        source: tensor,
        target: StarAlgebra::scalars(),
        matrix,
        label: format!("η[{}]", a.label),
    }
}

/// Linearized contraction kernels of a tensor element x ∈ P⊗Q, reshaped so
/// that pairing against one leg is a matrix-vector product on vec of the
/// other. `left_kernel`: out_Q(vec) = K · vec_P(w) represents w ↦ Σ w_ij-
/// weighted slices; indices follow the derivation in `snake_residuals`.
fn contraction_stage2(
    x: &AlgebraElement,
    left: &Arc<StarAlgebra>,
    right: &Arc<StarAlgebra>,
) -> DMatrix<Complex64> {
    // K[(right idx kl), (left idx mn)] = x[(m k),(n l)] with block offsets.
    let ldim = left.complex_dim();
    let rdim = right.complex_dim();
    let mut k = DMatrix::<Complex64>::zeros(rdim, ldim);
    let mut loff = vec![0usize; left.blocks.len()];
    {
        let mut acc = 0;
        for (b, &d) in left.blocks.iter().enumerate() {
            loff[b] = acc;
            acc += d * d;
        }
    }
    let mut roff = vec![0usize; right.blocks.len()];
    {
        let mut acc = 0;
        for (b, &d) in right.blocks.iter().enumerate() {
            roff[b] = acc;
            acc += d * d;
        }
    }
    let nb = right.blocks.len();
    for (bl, &dl) in left.blocks.iter().enumerate() {
        for (br, &dr) in right.blocks.iter().enumerate() {
            let m = &x.mats[bl * nb + br];
            for mi in 0..dl {
                for ni in 0..dl {
                    for ki in 0..dr {
                        for li in 0..dr {
                            k[(roff[br] + ki * dr + li, loff[bl] + mi * dl + ni)] =
                                m[(mi * dr + ki, ni * dr + li)];
                        }
                    }
                }
            }
        }
    }
    k
}

fn vec_of(x: &AlgebraElement) -> DVector<Complex64> {
    let n = x.alg.complex_dim();
    let mut v = DVector::zeros(n);
    let mut off = 0;
    for m in &x.mats {
        for i in 0..m.nrows() {
            for j in 0..m.ncols() {
                v[off + i * m.ncols() + j] = m[(i, j)];
            }
        }
        off += m.nrows() * m.ncols();
    }
    v
}

fn from_vec(alg: &Arc<StarAlgebra>, v: &DVector<Complex64>) -> AlgebraElement {
    let mut out = AlgebraElement::zeros(alg);
    let mut off = 0;
    for m in &mut out.mats {
        for i in 0..m.nrows() {
            for j in 0..m.ncols() {
                m[(i, j)] = v[off + i * m.ncols() + j];
            }
        }
        off += m.nrows() * m.ncols();
    }
    out
}

pub struct SnakeResiduals {
    pub side_a: f64,
    pub side_b: f64,
}

/// Verify the two zig-zag identities built from the stored cup f ∈ M⊗M̄,
/// its mirror f̄ ∈ M̄⊗M, and the counit η(y) = ⟨y|f⟩ (complex-linear
/// extension y ↦ tr(y f)):
///   side a: a ↦ (η ⊗ id)(a ⊗ f̄) must be the identity on M;
///   side b: ā ↦ (id ⊗ η)(f̄ ⊗ ā) must be the identity on M̄.
/// Contracting a ⊗ f̄ with tr(·f) on the first two legs gives, in entries,
///   out_kl = Σ_{mn} W_nm f̄[(mk),(nl)],  W_nm = Σ_{ij} a_ij f[(jn),(im)],
/// and symmetrically for side b; no triple tensor is ever materialized.
pub fn snake_residuals(a: &EmbeddedJordanAlgebra) -> SnakeResiduals {
    let amb = &a.ambient;
    let conj = StarAlgebra::conjugate(amb);
    let t_f = StarAlgebra::tensor(amb, &conj);
    let t_fbar = StarAlgebra::tensor(&conj, amb);
    let f = cup_element(a, &t_f);
    let fbar = cup_element_mirrored(a, &t_fbar);

    // Stage-1 kernels: W(a) from f, V(ā) from f.
    // W_nm = Σ_ij a_ij f[(j n),(i m)]  — reshape f with (left=M, right=M̄),
    // kernel K1[(n m), (j i)] = f[(jn),(im)]: use contraction_stage2 on the
    // swapped-index reading of f. Rather than a second reshape routine, W
    // is computed per basis element from a's few nonzero entries.
    let basis = hermitian_basis(amb);
    let s = amb.complex_dim();

    // Side a: stage 2 is out = Σ W_nm fbar[(mk),(nl)]; as a kernel on
    // vec(Wᵀ): K2[(kl),(mn)] = fbar[(mk),(nl)] = contraction_stage2(fbar).
    let k2 = contraction_stage2(&fbar, &conj, amb);
    let mut t1 = DMatrix::<Complex64>::zeros(s, s);
    let nbc = conj.blocks.len();
    for (col, h) in basis.iter().enumerate() {
        // W over M̄ entries (n, m) per block.
        let mut w = AlgebraElement::zeros(&conj);
        for (bl, &dl) in amb.blocks.iter().enumerate() {
            let hm = &h.mats[bl];
            for i in 0..dl {
                for j in 0..dl {
                    let v = hm[(i, j)];
                    if v.norm_sqr() == 0.0 {
                        continue;
                    }
                    for (bc, &dc) in conj.blocks.iter().enumerate() {
                        let fm = &f.mats[bl * nbc + bc];
                        let wm = &mut w.mats[bc];
                        for n in 0..dc {
                            for m in 0..dc {
                                wm[(n, m)] += v * fm[(j * dc + n, i * dc + m)];
                            }
                        }
                    }
                }
            }
        }
        // out = K2 · vec(W) with K2 indexed by (m n) on the input side: the
        // kernel above reads vec entries (m·d + n), i.e. vec(W viewed with
        // first index m) — so feed vec(Wᵀ per block) = vec of w transposed.
        let wt = AlgebraElement {
            alg: conj.clone(),
            mats: w.mats.iter().map(|m| m.transpose()).collect(),
        };
        let out = &k2 * vec_of(&wt);
        let oel = from_vec(amb, &out);
        let coords = herm_coords(&oel);
        for r in 0..s {
            t1[(r, col)] = coords[r];
        }
    }
    let side_a = (&t1 - DMatrix::<Complex64>::identity(s, s)).norm();

    // Side b: ā ↦ (id ⊗ η)(f̄ ⊗ ā): out_mn = Σ_kl fbar[(mk),(nl)] V_lk,
    // V_lk = Σ_pq ā_pq f[(l q),(k p)], over the conj ambient's own basis.
    let cbasis = hermitian_basis(&conj);
    let mut t2 = DMatrix::<Complex64>::zeros(s, s);
    for (col, hb) in cbasis.iter().enumerate() {
        // V over M entries (l, k).
        let mut v = AlgebraElement::zeros(amb);
        for (bc, &dc) in conj.blocks.iter().enumerate() {
            let am = &hb.mats[bc];
            for p in 0..dc {
                for q in 0..dc {
                    let w = am[(p, q)];
                    if w.norm_sqr() == 0.0 {
                        continue;
                    }
                    for (ba, &da) in amb.blocks.iter().enumerate() {
                        // f lives on M⊗M̄: block (ba, bc), entry (l q),(k p).
                        let fm = &f.mats[ba * conj.blocks.len() + bc];
                        let vm = &mut v.mats[ba];
                        for l in 0..da {
                            for k in 0..da {
                                vm[(l, k)] += w * fm[(l * dc + q, k * dc + p)];
                            }
                        }
                    }
                }
            }
        }
        // out_mn = Σ_kl fbar[(mk),(nl)] V_lk: feed vec with index (k l) of
        // Vᵀ into the k2' kernel built from fbar read as (left=M̄ out,
        // right=M in): that is exactly contraction_stage2(fbar) transposed
        // in its output/input grouping; compute directly instead.
        let mut out = AlgebraElement::zeros(&conj);
        let nbm = amb.blocks.len();
        for (bc, &dc) in conj.blocks.iter().enumerate() {
            let om = &mut out.mats[bc];
            for (ba, &da) in amb.blocks.iter().enumerate() {
                let fb = &fbar.mats[bc * nbm + ba];
                let vm = &v.mats[ba];
                for m in 0..dc {
                    for n in 0..dc {
                        let mut acc = Complex64::new(0.0, 0.0);
                        for k in 0..da {
                            for l in 0..da {
                                acc += fb[(m * da + k, n * da + l)] * vm[(l, k)];
                            }
                        }
                        om[(m, n)] += acc;
                    }
                }
            }
        }
        let coords = herm_coords(&out);
        for r in 0..s {
            t2[(r, col)] = coords[r];
        }
    }
    let side_b = (&t2 - DMatrix::<Complex64>::identity(s, s)).norm();

    SnakeResiduals { side_a, side_b }
}

/// Unitary conjugation x ↦ U x U† blockwise (U per block).
pub fn unitary_conj_map(alg: &Arc<StarAlgebra>, us: Vec<DMatrix<Complex64>>) -> MorphismMap {
    let a = alg.clone();
    MorphismMap::from_action(alg, alg, "unitary conj", move |x| {
        let mut out = AlgebraElement::zeros(&a);
        for (b, u) in us.iter().enumerate() {
            out.mats[b] = u * &x.mats[b] * u.adjoint();
        }
        out
    })
}

/// The quadratic map x ↦ a x a of an element (U_a in ambient form).
pub fn quad_map(alg: &Arc<StarAlgebra>, a: &AlgebraElement) -> MorphismMap {
    let ac = a.clone();
    MorphismMap::from_action(alg, alg, "U_a", move |x| ac.mul(x).mul(&ac))
}

/// A random CP map with `kraus` Kraus operators per block pair.
pub fn random_cp_map(
    source: &Arc<StarAlgebra>,
    target: &Arc<StarAlgebra>,
    kraus: usize,
    rng: &mut impl Rng,
) -> MorphismMap {
    let mut fam = Vec::with_capacity(target.blocks.len());
    for &dt in &target.blocks {
        let mut row = Vec::with_capacity(source.blocks.len());
        for &ds in &source.blocks {
            let ops: Vec<DMatrix<Complex64>> = (0..kraus)
                .map(|_| crate::algebra::gaussian_complex_rect(dt, ds, rng))
                .collect();
            row.push(ops);
        }
        fam.push(row);
    }
    MorphismMap::from_kraus(source, target, "random CP", &fam)
}

/// min ambient eigenvalue of the cup (positivity witness).
pub fn cup_min_eigenvalue(f: &AlgebraElement) -> f64 {
    herm_eigenvalues(f).last().copied().unwrap_or(0.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::random_unitary;
    use crate::eja::{make_algebra, Family};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn rng(seed: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(seed)
    }

    #[test]
    fn choi_oracles_identity_transpose_and_states() {
        let alg = StarAlgebra::new(vec![2], "M_2");
        let id = MorphismMap::identity(&alg);
        let out = is_cp(&id, 1e-10);
        assert!(out.cp);
        assert!(out.min_choi_eigenvalue.abs() < 1e-12); // entangled rank-1 Choi

        let tr_map = MorphismMap::from_action(&alg, &alg, "transpose", |x| x.transpose());
        let out = is_cp(&tr_map, 1e-10);
        assert!(!out.cp);
        assert!((out.min_choi_eigenvalue + 1.0).abs() < 1e-12); // swap operator

        let mut r = rng(1);
        let a = make_algebra(Family::C, 2, false).unwrap();
        let rho = a.random_density(&mut r);
        let st = MorphismMap::functional(&alg, &rho);
        let out = is_cp(&st, 1e-10);
        assert!(out.cp, "state functional must be CP (Choi = ρᵀ)");
    }

    #[test]
    fn dagger_is_involutive_contravariant_and_adjoint() {
        let alg = StarAlgebra::with_auto_label(vec![2, 3]);
        let mut r = rng(2);
        let phi = random_cp_map(&alg, &alg, 2, &mut r);
        let psi = random_cp_map(&alg, &alg, 2, &mut r);
        assert!(phi.dagger().dagger().sub_norm(&phi) < 1e-14);
        let lhs = phi.compose(&psi).unwrap().dagger();
        let rhs = psi.dagger().compose(&phi.dagger()).unwrap();
        assert!(lhs.sub_norm(&rhs) < 1e-11);
        for _ in 0..10 {
            let x = random_hermitian(&alg, &mut r);
            let y = random_hermitian(&alg, &mut r);
            let d = (phi.apply(&x).inner_re(&y) - x.inner_re(&phi.dagger().apply(&y))).abs();
            assert!(d < 1e-10 * x.norm() * y.norm());
        }
        // Unitary conjugation daggers to the inverse conjugation.
        let u = random_unitary(2, &mut r);
        let v = random_unitary(3, &mut r);
        let cj = unitary_conj_map(&alg, vec![u.clone(), v.clone()]);
        let cj_inv = unitary_conj_map(&alg, vec![u.adjoint(), v.adjoint()]);
        assert!(cj.dagger().sub_norm(&cj_inv) < 1e-11);
    }

    #[test]
    fn tensor_map_distributes_over_dagger_and_preserves_cp() {
        let a2 = StarAlgebra::new(vec![2], "M_2");
        let a3 = StarAlgebra::new(vec![3], "M_3");
        let mut r = rng(3);
        for _ in 0..3 {
            let phi = random_cp_map(&a2, &a2, 2, &mut r);
            let psi = random_cp_map(&a3, &a2, 2, &mut r);
            let t = MorphismMap::tensor_map(&phi, &psi);
            let td = MorphismMap::tensor_map(&phi.dagger(), &psi.dagger());
            assert!(t.dagger().sub_norm(&td) < 1e-10);
            assert!(is_cp(&t, 1e-9).cp);
        }
        // Tensor against identity acts as kron on product elements.
        let phi = random_cp_map(&a2, &a2, 2, &mut r);
        let ide = MorphismMap::identity(&a3);
        let t = MorphismMap::tensor_map(&phi, &ide);
        let x = random_hermitian(&a2, &mut r);
        let y = random_hermitian(&a3, &mut r);
        let tens = StarAlgebra::tensor(&a2, &a3);
        let lhs = t.apply(&x.kron(&y, &tens));
        let rhs = phi.apply(&x).kron(&y, &tens);
        assert!(lhs.sub(&rhs).norm() < 1e-10);
    }

    #[test]
    fn jordan_preservation_detects_subalgebra_escape() {
        let q2 = make_algebra(Family::Q, 2, false).unwrap();
        let alg = q2.ambient.clone();
        let mut r = rng(4);
        // U_a for a in the algebra stays inside.
        let a = q2.random_element(&mut r);
        let ua = quad_map(&alg, &a);
        let ok = is_jordan_preserving(&ua, &q2, &q2, 1e-9).unwrap();
        assert!(ok.preserved, "quadratic map leaked: {:.2e}", ok.max_residual);
        // A generic CP map leaves the 6-dimensional subspace.
        let generic = random_cp_map(&alg, &alg, 2, &mut r);
        let bad = is_jordan_preserving(&generic, &q2, &q2, 1e-9).unwrap();
        assert!(!bad.preserved);
        assert!(bad.max_residual > 1e-2);
    }

    #[test]
    fn gamma_is_a_star_isomorphism_onto_the_algebra() {
        let mut r = rng(5);
        for spec in ["R3", "C2@univ", "Q3", "V4"] {
            let a = crate::eja::parse_spec(spec).unwrap();
            let g = gamma_iso(&a, &mut r).unwrap();
            assert!(g.multiplicativity_residual < 1e-10, "{spec}");
            assert!(g.onto_residual < 1e-9, "{spec}");
            assert!(g.inverse_residual < 1e-10, "{spec}");
            // γ fixes real symmetric elements for R_n (γ(ā) = a there).
            if spec == "R3" {
                let x = a.random_element(&mut r);
                let conj = StarAlgebra::conjugate(&a.ambient);
                let xbar = AlgebraElement { alg: conj, mats: x.conj_entries().mats };
                assert!(g.map.apply(&xbar).sub(&x).norm() < 1e-10);
            }
        }
    }

    #[test]
    fn snake_identities_hold_for_small_objects() {
        for spec in ["R1", "R2", "C2@std", "C2@univ", "Q2@std", "V3@univ"] {
            let a = crate::eja::parse_spec(spec).unwrap();
            let s = snake_residuals(&a);
            assert!(s.side_a < 1e-10, "{spec}: side a {:.2e}", s.side_a);
            assert!(s.side_b < 1e-10, "{spec}: side b {:.2e}", s.side_b);
        }
    }

    #[test]
    fn cup_dagger_equals_counit() {
        for spec in ["R2", "C2@univ", "Q2@std"] {
            let a = crate::eja::parse_spec(spec).unwrap();
            let (fmap, f) = cup_as_map(&a);
            let eta = counit_as_map(&a);
            assert!(fmap.dagger().sub_norm(&eta) < 1e-11, "{spec}");
            assert!(eta.dagger().sub_norm(&fmap) < 1e-11, "{spec}");
            assert!(cup_min_eigenvalue(&f) > -1e-10, "{spec}");
        }
    }

    #[test]
    fn cjp_accepts_member_states_and_rejects_outsiders() {
        let mut s = Session::new(11, 1e-8);
        let a = s.object("R3").unwrap();
        let mut r = s.rng_for("cjp-test");
        // density inside A
        let rho = a.random_density(&mut r);
        let phi = MorphismMap::functional(&a.ambient, &rho);
        let unit_obj = s.object("R1").unwrap();
        let out = is_cjp_relative(&mut s, &phi, &a, &unit_obj, &[], 1e-8).unwrap();
        assert!(out.cjp, "member state failed: {:.2e}", out.worst_residual);
        // density with a component outside A (antisymmetric direction)
        let mut bad = rho.clone();
        let mut anti = AlgebraElement::zeros(&a.ambient);
        anti.mats[0][(0, 1)] = Complex64::new(0.0, 0.5);
        anti.mats[0][(1, 0)] = Complex64::new(0.0, -0.5);
        bad = bad.add(&anti.scale(0.2));
        let phi_bad = MorphismMap::functional(&a.ambient, &bad);
        let out = is_cjp_relative(&mut s, &phi_bad, &a, &unit_obj, &[], 1e-8).unwrap();
        assert!(!out.cjp);
        assert!(out.worst_residual > 1e-3);
    }
}
