//! Spin systems: families s_1,…,s_n of hermitian unitaries with
//! s_i s_j + s_j s_i = 2δ_ij, realized by the Jordan–Wigner construction.
//! For even n = 2k the ambient is M_{2^k}; for odd n = 2k+1 the faithful
//! universal ambient is M_{2^k} ⊕ M_{2^k}, the two blocks differing by the
//! sign of the last generator (the chirality splits them), while the
//! smallest faithful ambient keeps a single block.

use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::algebra::{AlgebraElement, StarAlgebra};

fn pauli(which: char) -> DMatrix<Complex64> {
    let o = Complex64::new(0.0, 0.0);
    let l = Complex64::new(1.0, 0.0);
    let i = Complex64::new(0.0, 1.0);
    match which {
        'I' => DMatrix::from_row_slice(2, 2, &[l, o, o, l]),
        'X' => DMatrix::from_row_slice(2, 2, &[o, l, l, o]),
        'Y' => DMatrix::from_row_slice(2, 2, &[o, -i, i, o]),
        'Z' => DMatrix::from_row_slice(2, 2, &[l, o, o, -l]),
        _ => unreachable!(),
    }
}

fn pauli_word(word: &[char]) -> DMatrix<Complex64> {
    if word.is_empty() {
        return DMatrix::identity(1, 1);
    }
    let mut m = pauli(word[0]);
    for &chr in &word[1..] {
        m = m.kronecker(&pauli(chr));
    }
    m
}

pub struct SpinSystem {
    pub n: usize,
    pub alg: Arc<StarAlgebra>,
    pub gens: Vec<AlgebraElement>,
}

/// Jordan–Wigner words on k qubits: s_{2j-1} = Z^{j-1} X I^{k-j},
/// s_{2j} = Z^{j-1} Y I^{k-j}.
fn jw_words(n_even: usize, k: usize) -> Vec<Vec<char>> {
    let mut words = Vec::with_capacity(n_even);
    for j in 0..(n_even / 2) {
        for axis in ['X', 'Y'] {
            let mut w = vec!['Z'; j];
            w.push(axis);
            w.resize(k, 'I');
            words.push(w);
        }
    }
    words
}

/// Build a spin system with n generators. `universal` selects the doubled
/// ambient for odd n; for even n both choices coincide.
pub fn spin_system(n: usize, universal: bool) -> SpinSystem {
    assert!(n >= 1);
    let k = n / 2;
    let dim = 1usize << k;
    if n.is_multiple_of(2) {
        let alg = StarAlgebra::new(vec![dim], format!("M_{dim}"));
        let gens = jw_words(n, k)
            .iter()
            .map(|w| AlgebraElement::from_single(&alg, pauli_word(w)).unwrap())
            .collect();
        SpinSystem { n, alg, gens }
    } else {
        let gamma = pauli_word(&vec!['Z'; k]);
        let even_words = jw_words(n - 1, k);
        // For n = 1 the unit and s_1 coincide in a single 1×1 block, so the
        // smallest faithful ambient is already the doubled one.
        if universal || n == 1 {
            let alg = StarAlgebra::new(vec![dim, dim], format!("M_{dim} ⊕ M_{dim}"));
            let mut gens: Vec<AlgebraElement> = even_words
                .iter()
                .map(|w| {
                    let m = pauli_word(w);
                    AlgebraElement::from_mats(&alg, vec![m.clone(), m]).unwrap()
                })
                .collect();
            gens.push(AlgebraElement::from_mats(&alg, vec![gamma.clone(), -gamma]).unwrap());
            SpinSystem { n, alg, gens }
        } else {
            let alg = StarAlgebra::new(vec![dim], format!("M_{dim}"));
            let mut gens: Vec<AlgebraElement> = even_words
                .iter()
                .map(|w| AlgebraElement::from_single(&alg, pauli_word(w)).unwrap())
                .collect();
            gens.push(AlgebraElement::from_single(&alg, gamma).unwrap());
            SpinSystem { n, alg, gens }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check_car(sys: &SpinSystem) {
        let u = AlgebraElement::identity(&sys.alg);
        for (i, a) in sys.gens.iter().enumerate() {
            assert!(a.hermiticity_residual() < 1e-14);
            assert!(a.trace().norm() < 1e-14);
            for (j, b) in sys.gens.iter().enumerate() {
                let anti = a.mul(b).add(&b.mul(a));
                let want = if i == j { u.scale(2.0) } else { AlgebraElement::zeros(&sys.alg) };
                assert!(anti.sub(&want).norm() < 1e-13, "CAR fails at ({i},{j})");
            }
        }
    }

    #[test]
    fn canonical_anticommutation_relations_hold() {
        for n in 1..=7 {
            check_car(&spin_system(n, true));
            check_car(&spin_system(n, false));
        }
    }

    #[test]
    fn ambient_shapes_match_clifford_algebra_dimensions() {
        assert_eq!(spin_system(2, true).alg.blocks, vec![2]);
        assert_eq!(spin_system(3, true).alg.blocks, vec![2, 2]);
        assert_eq!(spin_system(3, false).alg.blocks, vec![2]);
        assert_eq!(spin_system(4, true).alg.blocks, vec![4]);
        assert_eq!(spin_system(5, true).alg.blocks, vec![4, 4]);
        assert_eq!(spin_system(5, false).alg.blocks, vec![4]);
    }

    #[test]
    fn odd_universal_blocks_are_inequivalent() {
        // The full product s_1⋯s_n is central and takes opposite values on
        // the two blocks, so they carry inequivalent representations.
        for n in [3usize, 5, 7] {
            let sys = spin_system(n, true);
            let mut w = sys.gens[0].clone();
            for g in &sys.gens[1..] {
                w = w.mul(g);
            }
            let d = sys.alg.blocks[0] as f64;
            let t0 = w.mats[0].trace() / Complex64::new(d, 0.0);
            let t1 = w.mats[1].trace() / Complex64::new(d, 0.0);
            assert!((t0.norm() - 1.0).abs() < 1e-12, "block value not scalar of modulus 1");
            assert!((t0 + t1).norm() < 1e-12, "blocks do not carry opposite chirality");
            let scalar0 = &w.mats[0] - DMatrix::identity(sys.alg.blocks[0], sys.alg.blocks[0]) * t0;
            assert!(scalar0.norm() < 1e-12);
        }
    }

    #[test]
    fn grade_counting_oracle_for_word_spans() {
        // Products of distinct generators over n=4 span 2^4 = 16 dimensions
        // = the full ambient M_4 (complex dimension 16).
        let sys = spin_system(4, true);
        use crate::antiauto::generates_ambient;
        assert!(generates_ambient(&sys.alg, &sys.gens, 1e-10));
        let sys5 = spin_system(5, true);
        assert!(generates_ambient(&sys5.alg, &sys5.gens, 1e-10));
        // The single-block odd (non-universal) image is also all of M_4.
        let sys5s = spin_system(5, false);
        assert!(generates_ambient(&sys5s.alg, &sys5s.gens, 1e-10));
    }
}
