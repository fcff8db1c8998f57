use std::sync::Arc;

use critcoh_core::algebra::{AlgebraName, FormTag, SimpleLieAlgebra};
use critcoh_core::chevalley::{cochain_axpy, Cell, Cochain};
use critcoh_core::loop_rep::{Mode, Rep};
use critcoh_core::rational::{binom, q, Q};
use critcoh_core::vertex::{
    generators, leibniz_defect, skew_symmetry_defect, translation_defect, z_leibniz_defect, VertexAlgebra, VertexState,
};
use proptest::prelude::*;

fn critical() -> Rep<Q> {
    let a = Arc::new(SimpleLieAlgebra::new(AlgebraName::Sl2));
    Rep::vacuum(a.clone(), &a.bilinear_form(FormTag::Critical))
}

fn unit(c: &Cell) -> Cochain<Q> {
    Cochain::from([(c.clone(), q(1))])
}

fn idx(rep: &Rep<Q>, label: &str) -> usize {
    rep.alg.index_of(label).unwrap()
}

fn current(rep: &Rep<Q>, label: &str, n: i32) -> Cell {
    Cell::new(vec![], vec![Mode::new(idx(rep, label), n)])
}

/// `Σ_{n=0}^m (1/n!) (-1)^{m-n} T^n Y_(m-n)(B,A)` times the parity sign.
fn printed_skew_rhs(va: &VertexAlgebra<'_>, a: &VertexState, b: &VertexState, m: i32) -> Cochain<Q> {
    let sigma = if a.parity * b.parity == 1 { q(-1) } else { q(1) };
    let mut out = Cochain::new();
    for n in 0..=m {
        let t = va.translate_divided(&va.y_m(&b.cochain, &a.cochain, m - n).unwrap(), n as u32);
        let s = if (m - n) % 2 == 0 { sigma.clone() } else { -sigma.clone() };
        cochain_axpy(&mut out, &s, &t);
    }
    out
}

#[test]
fn skew_symmetry_standard_form_holds_printed_form_fails() {
    let rep = critical();
    let va = VertexAlgebra::new(&rep, 8).unwrap();
    let h = VertexState::cell(current(&rep, "h", -1));
    assert!(skew_symmetry_defect(&va, &h, &h, 1).unwrap().is_empty());
    // h_(1)h = κ_c(h,h)·1 = -4·1.
    let lhs = va.y_m(&h.cochain, &h.cochain, 1).unwrap();
    assert_eq!(lhs, unit(&Cell::vacuum()).into_keys().map(|c| (c, q(-4))).collect());
    assert_ne!(printed_skew_rhs(&va, &h, &h, 1), lhs);
}

#[test]
fn translation_needs_the_factor_minus_m() {
    let rep = critical();
    let va = VertexAlgebra::new(&rep, 8).unwrap();
    let (a, b) = (unit(&current(&rep, "e", -1)), unit(&current(&rep, "f", -1)));
    for m in 0..=3 {
        assert!(translation_defect(&va, &a, &b, m).unwrap().is_empty(), "m={m}");
    }
    // Y_(2)(TA,B) = -2 Y_(1)(A,B) ≠ Y_(1)(A,B) since Y_(1)(e,f) = κ_c(e,f)·1 ≠ 0.
    let lhs = va.y_m(&va.translate(&a), &b, 2).unwrap();
    let printed = va.y_m(&a, &b, 1).unwrap();
    assert!(!printed.is_empty());
    assert_ne!(lhs, printed);
}

#[test]
fn commutator_formula_needs_binomials() {
    let rep = critical();
    let va = VertexAlgebra::new(&rep, 10).unwrap();
    let states = va.states(3, 1);
    let mut printed_fails = 0;
    for a in &states {
        for b in &states {
            for c in &states {
                if a.energy() + b.energy() + c.energy() > 4 {
                    continue;
                }
                let (sa, sb) = (VertexState::cell(a.clone()), VertexState::cell(b.clone()));
                let m = 2;
                let d = leibniz_defect(&va, &sa, &sb, &unit(c), m).unwrap();
                assert!(d.is_empty(), "A={a:?} B={b:?} C={c:?}");
                // Printed version: drop binom(m, j), i.e. add (binom - 1) times the j-terms back.
                let mut p = d.clone();
                for j in 0..m {
                    let t = va
                        .field_mode(&va.y_m(&sa.cochain, &sb.cochain, j).unwrap(), m - 1 - j, &unit(c))
                        .unwrap();
                    cochain_axpy(&mut p, &(binom(m as i64, j as i64) - q(1)), &t);
                }
                printed_fails += usize::from(!p.is_empty());
            }
        }
    }
    assert!(printed_fails > 0);
}

#[test]
fn clifford_relations_exhaustive_small() {
    let rep = critical();
    let va = VertexAlgebra::new(&rep, 6).unwrap();
    for w in va.states(2, 3) {
        for a in 0..3 {
            for b in 0..3 {
                for n in 0..=2 {
                    for m in -2..=0 {
                        assert!(va.clifford_defect(a, n, b, m, &w).unwrap().is_empty(), "a={a} n={n} b={b} m={m} w={w:?}");
                    }
                }
            }
        }
    }
}

#[test]
fn homotopy_on_generators() {
    let rep = critical();
    let va = VertexAlgebra::new(&rep, 6).unwrap();
    for a in generators(3) {
        for b in generators(3) {
            for m in 0..=3 {
                assert!(va.homotopy_defect(&a, &b, m, 1).unwrap().is_empty());
            }
        }
    }
}

#[test]
fn z_extension_is_not_leibniz_consistent() {
    let rep = critical();
    let va = VertexAlgebra::new(&rep, 8).unwrap();
    let psi = Cell::new(vec![Mode::new(idx(&rep, "e"), 0)], vec![]);
    let defect = z_leibniz_defect(&va, &psi, &current(&rep, "h", -1), &current(&rep, "e", -1), 1).unwrap();
    assert!(!defect.is_empty());
    // Consequence: some composite pair violates the homotopy identity.
    let states = va.states(2, 2);
    let failing = states.iter().any(|a| {
        states.iter().any(|b| {
            a.energy() + b.energy() <= 2 && (0..=2).any(|m| !va.homotopy_defect(a, b, m, 1).unwrap().is_empty())
        })
    });
    assert!(failing);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn dg_identity(i in 0usize..10_000, j in 0usize..10_000, shift in 0i32..4) {
        let rep = critical();
        let va = VertexAlgebra::new(&rep, 8).unwrap();
        let states = va.states(3, 3);
        let (a, w) = (&states[i % states.len()], &states[j % states.len()]);
        prop_assume!(a.energy() + w.energy() <= 3);
        let n = a.energy() + w.energy() - 1 - shift;
        prop_assert!(va.dg_defect(a, n, w).unwrap().is_empty());
    }

    #[test]
    fn symbol_is_multiplicative(i in 0usize..10_000, j in 0usize..10_000) {
        let rep = critical();
        let va = VertexAlgebra::new(&rep, 8).unwrap();
        let states: Vec<Cell> = va.states(3, 0);
        let (a, b) = (unit(&states[i % states.len()]), unit(&states[j % states.len()]));
        let prod = VertexAlgebra::classical_product(&a, &b);
        prop_assert_eq!(VertexAlgebra::symbol(&va.cup(&a, &b).unwrap()), prod);
    }

    #[test]
    fn skew_symmetry_and_translation(i in 0usize..10_000, j in 0usize..10_000, m in 0i32..3) {
        let rep = critical();
        let va = VertexAlgebra::new(&rep, 8).unwrap();
        let states = va.states(2, 2);
        let (a, b) = (&states[i % states.len()], &states[j % states.len()]);
        prop_assume!(a.energy() + b.energy() <= 3);
        let (sa, sb) = (VertexState::cell(a.clone()), VertexState::cell(b.clone()));
        prop_assert!(skew_symmetry_defect(&va, &sa, &sb, m).unwrap().is_empty());
        prop_assert!(translation_defect(&va, &unit(a), &unit(b), m).unwrap().is_empty());
    }
}
