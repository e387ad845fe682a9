//! End-to-end acceptance run: one test per criterion, each printing a
//! single PASS/FAIL line. All tests share one session (seed 0, tol 1e-8)
//! so expensive composites are built once; results are deterministic.

use std::sync::{Mutex, MutexGuard, OnceLock};

use jordanc_core::algebra::AlgebraElement;
use jordanc_core::morphisms::{is_cp, random_cp_map};
use jordanc_core::suites;
use jordanc_core::Session;

fn session() -> MutexGuard<'static, Session> {
    static S: OnceLock<Mutex<Session>> = OnceLock::new();
    S.get_or_init(|| Mutex::new(Session::new(0, 1e-8))).lock().unwrap()
}

fn conclude(n: usize, name: &str, ok: bool, detail: &str) {
    println!("criterion {n} ({name}): {}", if ok { "PASS" } else { "FAIL" });
    assert!(ok, "criterion {n} ({name}) failed:\n{detail}");
}

#[test]
fn criterion_01_composite_table() {
    let mut s = session();
    let rep = suites::run_table(&mut s, 3).unwrap();
    conclude(1, "composite table", rep.all_pass(), &rep.to_markdown());
}

#[test]
fn criterion_02_doubled_quaternionic_product() {
    let mut s = session();
    let rep = suites::run_q2_hat(&mut s).unwrap();
    conclude(2, "Q2 universal self-product", rep.all_pass(), &rep.to_markdown());
}

#[test]
fn criterion_03_low_rank_isomorphisms() {
    let mut s = session();
    let cases = [("V2", "R2"), ("V3@univ", "C2@univ"), ("V5", "Q2@univ")];
    let mut ok = true;
    let mut detail = String::new();
    for (l, r) in cases {
        let a = s.object(l).unwrap();
        let b = s.object(r).unwrap();
        let mut rng = s.rng_for(&format!("acceptance:c3:{l}:{r}"));
        let (ra, rb) = (a.rank(&mut rng).unwrap(), b.rank(&mut rng).unwrap());
        let here = a.dim() == b.dim() && ra == rb;
        detail.push_str(&format!(
            "{l}: (dim {}, rank {ra})  vs  {r}: (dim {}, rank {rb})\n",
            a.dim(),
            b.dim()
        ));
        ok &= here;
    }
    conclude(3, "low-rank spin isomorphisms", ok, &detail);
}

#[test]
fn criterion_04_spin_factor_no_go() {
    let mut s = session();
    let rep = suites::run_nogo(&mut s, None).unwrap();
    conclude(4, "irreversible spin factor no-go", rep.all_pass(), &rep.to_markdown());
}

#[test]
fn criterion_05_compact_structure() {
    let mut s = session();
    let rep = suites::run_compact(&mut s).unwrap();
    conclude(5, "compact structure", rep.all_pass(), &rep.to_markdown());
}

#[test]
fn criterion_06_dagger_suite() {
    let mut s = session();
    let rep = suites::run_dagger(&mut s).unwrap();
    conclude(6, "dagger compatibility", rep.all_pass(), &rep.to_markdown());
}

#[test]
fn criterion_07_local_tomography() {
    let mut s = session();
    let rep = suites::run_tomography(&mut s).unwrap();
    conclude(7, "local tomography audit", rep.all_pass(), &rep.to_markdown());
}

#[test]
fn criterion_08_rank_supermultiplicativity() {
    let mut s = session();
    let rep = suites::run_distinguishability(&mut s).unwrap();
    conclude(8, "rank supermultiplicativity", rep.all_pass(), &rep.to_markdown());
}

#[test]
fn criterion_09_marginals_experiment() {
    let mut s = session();
    let rep = suites::run_marginals(&mut s).unwrap();
    conclude(9, "mixed states with pure marginals", rep.all_pass(), &rep.to_markdown());
}

#[test]
fn criterion_10_functional_oracle_separation() {
    let mut s = session();
    let rep = suites::run_oracle_separation(&mut s, 50).unwrap();
    conclude(10, "functional oracle separation", rep.all_pass(), &rep.to_markdown());
}

#[test]
fn criterion_11_property_suites() {
    let mut s = session();
    // (spec, expected rank) — rank constancy is checked against these.
    let objects: [(&str, usize); 8] = [
        ("R2", 2),
        ("R3", 3),
        ("C2@std", 2),
        ("C2@univ", 2),
        ("Q2@std", 2),
        ("Q3", 3),
        ("V3@univ", 2),
        ("V4", 2),
    ];
    const DRAWS: usize = 100;
    let mut ok = true;
    let mut detail = String::new();
    let note = |line: String, good: bool, ok: &mut bool, detail: &mut String| {
        if !good {
            detail.push_str(&line);
            detail.push('\n');
            *ok = false;
        }
    };

    for (spec, want_rank) in objects {
        let a = s.object(spec).unwrap();
        let mut rng = s.rng_for(&format!("acceptance:properties:{spec}"));

        // Jordan identity and associativity of the trace form.
        let mut worst_jordan = 0.0f64;
        let mut worst_form = 0.0f64;
        for _ in 0..DRAWS {
            let x = a.random_element(&mut rng);
            let y = a.random_element(&mut rng);
            let z = a.random_element(&mut rng);
            let x2 = x.jordan_hermitian(&x);
            let lhs = x.jordan_hermitian(&y).jordan_hermitian(&x2);
            let rhs = x.jordan_hermitian(&y.jordan_hermitian(&x2));
            let scale = (x.norm().powi(2) * y.norm()).max(1.0);
            worst_jordan = worst_jordan.max(lhs.sub(&rhs).norm() / scale);

            let f1 = x.jordan_hermitian(&y).inner_re(&z);
            let f2 = x.inner_re(&y.jordan_hermitian(&z));
            let fscale = (x.norm() * y.norm() * z.norm()).max(1.0);
            worst_form = worst_form.max((f1 - f2).abs() / fscale);
        }
        note(format!("{spec}: jordan identity residual {worst_jordan:.3e}"),
             worst_jordan < 1e-12, &mut ok, &mut detail);
        note(format!("{spec}: form associativity residual {worst_form:.3e}"),
             worst_form < 1e-12, &mut ok, &mut detail);

        // Spectral reconstruction, frame idempotency, rank constancy.
        let mut worst_recon = 0.0f64;
        let mut worst_frame = 0.0f64;
        let mut ranks_seen = std::collections::BTreeSet::new();
        for _ in 0..DRAWS {
            let x = a.random_element(&mut rng);
            let dec = a.spectral(&x, &mut rng).unwrap();
            let mut recon = AlgebraElement::zeros(&a.ambient);
            for (v, q) in dec.values.iter().zip(&dec.frame) {
                recon = recon.add(&q.scale(*v));
            }
            worst_recon = worst_recon.max(recon.sub(&x).norm() / x.norm().max(1.0));
            for q in &dec.frame {
                worst_frame = worst_frame.max(q.jordan_hermitian(q).sub(q).norm());
            }
            ranks_seen.insert(dec.frame.len());
        }
        note(format!("{spec}: spectral reconstruction residual {worst_recon:.3e}"),
             worst_recon < 1e-7, &mut ok, &mut detail);
        note(format!("{spec}: frame idempotency residual {worst_frame:.3e}"),
             worst_frame < 1e-6, &mut ok, &mut detail);
        note(format!("{spec}: ranks seen {ranks_seen:?}, expected {{{want_rank}}}"),
             ranks_seen == std::iter::once(want_rank).collect(), &mut ok, &mut detail);

        // Cone self-duality: positive elements pair nonnegatively with all
        // squares; non-positive elements are separated by some square.
        let mut worst_pairing = f64::INFINITY;
        let mut separated = true;
        for _ in 0..DRAWS {
            let x = a.random_element(&mut rng);
            let dec = a.spectral(&x, &mut rng).unwrap();
            let min_val = dec.values.iter().cloned().fold(f64::INFINITY, f64::min);
            if min_val >= -1e-10 {
                let y = a.random_element(&mut rng);
                let sq = y.jordan_hermitian(&y);
                worst_pairing = worst_pairing.min(x.inner_re(&sq) / sq.norm().max(1.0));
            } else {
                let mut w = AlgebraElement::zeros(&a.ambient);
                for (v, q) in dec.values.iter().zip(&dec.frame) {
                    if *v < 0.0 {
                        w = w.add(q);
                    }
                }
                separated &= x.inner_re(&w) < -1e-10;
            }
        }
        note(format!("{spec}: positive-cone pairing floor {worst_pairing:.3e}"),
             worst_pairing >= -1e-8, &mut ok, &mut detail);
        note(format!("{spec}: non-positive elements separated"),
             separated, &mut ok, &mut detail);

        // Dagger involutivity and adjointness on random CP maps.
        let mut worst_dagger = 0.0f64;
        let mut worst_adjoint = 0.0f64;
        let mut all_cp = true;
        for k in 0..DRAWS {
            let phi = random_cp_map(&a.ambient, &a.ambient, 2, &mut rng);
            worst_dagger = worst_dagger.max(phi.dagger().dagger().sub_norm(&phi));
            let x = jordanc_core::algebra::random_hermitian(&a.ambient, &mut rng);
            let y = jordanc_core::algebra::random_hermitian(&a.ambient, &mut rng);
            let d = (phi.apply(&x).inner_re(&y) - x.inner_re(&phi.dagger().apply(&y))).abs()
                / (x.norm() * y.norm()).max(1.0);
            worst_adjoint = worst_adjoint.max(d);
            if k < 5 {
                all_cp &= is_cp(&phi, 1e-9).cp && is_cp(&phi.dagger(), 1e-9).cp;
            }
        }
        note(format!("{spec}: random Kraus maps and their daggers are CP"),
             all_cp, &mut ok, &mut detail);
        note(format!("{spec}: dagger involutivity residual {worst_dagger:.3e}"),
             worst_dagger < 1e-11, &mut ok, &mut detail);
        note(format!("{spec}: dagger adjoint identity residual {worst_adjoint:.3e}"),
             worst_adjoint < 1e-10, &mut ok, &mut detail);
    }
    conclude(11, "property suites", ok, &detail);
}
