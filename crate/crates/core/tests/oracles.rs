//! Engine output against values computed independently: closed formulas
//! from explicit periodic resolutions, Poincaré series, and brute-force
//! enumeration of small Hom spaces.

use std::sync::Arc;

use tatekit::algebra::{default_vars, Algebra};
use tatekit::corpus::{builtin_algebras, complete_intersection, corpus_modules};
use tatekit::exactla::{Mat, PrimeField};
use tatekit::homalg::{betti_numbers, ordinary_ext_dims, tate_ext, tate_tor};
use tatekit::modrep::{self, hom_dim, hom_space_by_commutation, tensor, Module};

fn cyclic_power(a: &Arc<Algebra>, e: u32) -> Module {
    let label = if e == 1 { "x".to_string() } else { format!("x^{e}") };
    let i = a.label_index(&label).unwrap();
    Module::cyclic_by_elements(a, &[a.basis_element(i)]).unwrap()
}

/// Homology of `.. -> B --x^a--> B --x^(n-a)--> B -> ..` with
/// `B = k[x]/(x^b)`: multiplication by `x^c` on `B` has rank `max(b-c, 0)`.
fn periodic_homology(n: u32, a: u32, b: u32) -> usize {
    let rank = |c: u32| b.saturating_sub(c) as usize;
    b as usize - rank(a) - rank(n - a)
}

#[test]
fn truncated_polynomial_tables_match_periodic_resolution() {
    for p in [2u64, 3, 5] {
        for n in 2..=5u32 {
            let alg = complete_intersection(p, &[n]);
            for a in 1..n {
                for b in 1..n {
                    let (m, nn) = (cyclic_power(&alg, a), cyclic_power(&alg, b));
                    let expected = vec![periodic_homology(n, a, b); 13];
                    let tor = tate_tor(&m, &nn, -6, 6).unwrap();
                    let ext = tate_ext(&m, &nn, -6, 6).unwrap();
                    assert_eq!(tor.dims, expected, "Tor p={p} n={n} a={a} b={b}");
                    assert_eq!(ext.dims, expected, "Ext p={p} n={n} a={a} b={b}");
                }
            }
        }
    }
}

fn binomial(n: usize, k: usize) -> usize {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

#[test]
fn residue_field_betti_numbers_follow_poincare_series() {
    // Over F_p[x_1..x_r]/(x_i^{a_i}) with every a_i >= 2 the Poincaré series
    // of k is 1/(1-t)^r.
    for (p, powers) in [(2u64, vec![2u32]), (3, vec![4]), (2, vec![2, 2]), (5, vec![3, 3]), (3, vec![2, 3]), (2, vec![2, 2, 2])] {
        let alg = complete_intersection(p, &powers);
        let r = powers.len();
        let betti = betti_numbers(&Module::residue_field(&alg), 8);
        let expected: Vec<usize> = (0..=8).map(|i| binomial(i + r - 1, r - 1)).collect();
        assert_eq!(betti, expected, "p={p} powers={powers:?}");
    }
}

/// Counts `k`-linear maps commuting with every action matrix by trying all
/// of them.
fn brute_force_hom_count(m: &Module, n: &Module) -> usize {
    let f = m.field();
    let p = f.characteristic() as usize;
    let (rows, cols) = (n.kdim(), m.kdim());
    let entries = rows * cols;
    let total = p.pow(entries as u32);
    let mut count = 0;
    for code in 0..total {
        let mut c = code;
        let h = Mat::from_fn(f, rows, cols, |_, _| {
            let d = (c % p) as u32;
            c /= p;
            d
        });
        if m.action().iter().zip(n.action()).all(|(a, b)| h.mul(a) == b.mul(&h)) {
            count += 1;
        }
    }
    count
}

#[test]
fn hom_dimensions_match_brute_force() {
    let alg = complete_intersection(2, &[2, 2]);
    let modules = corpus_modules(&alg);
    for m in &modules {
        for n in &modules {
            if m.module.kdim() * n.module.kdim() > 12 {
                continue;
            }
            let d = hom_dim(&m.module, &n.module).unwrap();
            assert_eq!(1usize << d, brute_force_hom_count(&m.module, &n.module), "{} -> {}", m.name, n.name);
        }
    }
}

#[test]
fn hom_dimensions_match_commutation_system() {
    for named in builtin_algebras() {
        let modules = corpus_modules(&named.algebra);
        for m in &modules {
            for n in &modules {
                let via_presentation = hom_dim(&m.module, &n.module).unwrap();
                let via_commutation = hom_space_by_commutation(&m.module, &n.module).unwrap().len();
                assert_eq!(via_presentation, via_commutation, "{}: {} -> {}", named.name, m.name, n.name);
            }
        }
    }
}

#[test]
fn cyclic_tensor_and_hom_dimensions() {
    // Over k[x]/(x^n): A/(x^a) ⊗ A/(x^b) and Hom(A/(x^a), A/(x^b)) both have
    // dimension min(a, b).
    let alg = complete_intersection(3, &[4]);
    for a in 1..4u32 {
        for b in 1..4u32 {
            let (ma, mb) = (cyclic_power(&alg, a), cyclic_power(&alg, b));
            assert_eq!(ma.kdim(), a as usize);
            let expected = a.min(b) as usize;
            assert_eq!(tensor(&ma, &mb).unwrap().kdim(), expected);
            assert_eq!(hom_dim(&ma, &mb).unwrap(), expected);
        }
    }
}

#[test]
fn ordinary_ext_of_residue_field() {
    // Ext^i(k, k) has dimension beta_i(k) because the minimal resolution
    // has differentials with entries in the maximal ideal.
    let alg = complete_intersection(2, &[2, 2]);
    let k = Module::residue_field(&alg);
    assert_eq!(ordinary_ext_dims(&k, &k, 6), (1..=7).collect::<Vec<usize>>());
}

#[test]
fn matlis_dual_of_regular_module_detects_gorenstein() {
    for named in builtin_algebras() {
        let a = &named.algebra;
        let omega = modrep::matlis_dual(&Module::free(a, 1));
        let free = modrep::is_iso(&omega, &Module::free(a, 1)).unwrap().is_iso();
        assert_eq!(free, a.is_gorenstein(), "{}", named.name);
    }
}

#[test]
fn structure_constants_of_dual_numbers() {
    let f = PrimeField::new(7).unwrap();
    let a = Algebra::monomial_complete_intersection(f, &default_vars(1), &[2]).unwrap();
    assert_eq!(a.structure_constants(), &[vec![vec![1, 0], vec![0, 1]], vec![vec![0, 1], vec![0, 0]]]);
}
