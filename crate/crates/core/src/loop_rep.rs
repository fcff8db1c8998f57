//! Graded bases and mode actions on vacuum and Verma modules.
//!
//! A monomial is a nondecreasing list of creation modes applied to the
//! highest vector. Quantum actions commute a mode through the monomial
//! using the affine bracket with `K = 1`; classical actions are the
//! derivations of the symmetric algebra with brackets reduced modulo the
//! inducing subalgebra.

use serde::Serialize;
use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap};
use std::rc::Rc;
use std::sync::Arc;

use crate::algebra::{BilinearForm, RootKind, SimpleLieAlgebra};
use crate::rational::{q, Coeff, PolyQ, Q};

/// `J^a_n`; energy is `-n`. Ordered by `(n, a)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Mode {
    pub n: i32,
    pub a: u16,
}

impl Mode {
    pub fn new(a: usize, n: i32) -> Self {
        Mode { n, a: a as u16 }
    }
    pub fn idx(&self) -> usize {
        self.a as usize
    }
    pub fn energy(&self) -> i32 {
        -self.n
    }
}

pub type Mono = Vec<Mode>;
pub type Elem<C> = BTreeMap<Mono, C>;

pub fn elem_add<C: Coeff>(acc: &mut Elem<C>, key: Mono, c: &C) {
    if c.is_czero() {
        return;
    }
    use std::collections::btree_map::Entry;
    match acc.entry(key) {
        Entry::Vacant(v) => {
            v.insert(c.clone());
        }
        Entry::Occupied(mut o) => {
            let s = o.get().cadd(c);
            if s.is_czero() {
                o.remove();
            } else {
                *o.get_mut() = s;
            }
        }
    }
}

pub fn elem_axpy<C: Coeff>(acc: &mut Elem<C>, c: &C, x: &Elem<C>) {
    for (k, v) in x {
        elem_add(acc, k.clone(), &c.cmul(v));
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    Vacuum,
    Verma,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Flavor {
    Classical,
    Quantum,
}

/// A module family together with its level data and coefficient ring.
pub struct Rep<C: Coeff> {
    pub alg: Arc<SimpleLieAlgebra>,
    pub family: Family,
    pub flavor: Flavor,
    /// `central[a][b]` is the form value in `[J^a_n, J^b_m] ⊃ n δ_{n+m,0} κ(a,b)`.
    central: Vec<Vec<C>>,
    /// Value of the highest weight on each basis element (nonzero only on h).
    highest: Vec<C>,
    cache: RefCell<HashMap<(Mode, Mono), Rc<Elem<C>>>>,
}

impl<C: Coeff> Rep<C> {
    pub fn new(
        alg: Arc<SimpleLieAlgebra>,
        family: Family,
        flavor: Flavor,
        central: Vec<Vec<C>>,
        highest: Vec<C>,
    ) -> Self {
        Rep { alg, family, flavor, central, highest, cache: RefCell::new(HashMap::new()) }
    }

    /// Report label: `Vcl`, `Vkappa`, `Mcl` or `Mkappa`.
    pub fn tag(&self) -> &'static str {
        match (self.family, self.flavor) {
            (Family::Vacuum, Flavor::Classical) => "Vcl",
            (Family::Vacuum, Flavor::Quantum) => "Vkappa",
            (Family::Verma, Flavor::Classical) => "Mcl",
            (Family::Verma, Flavor::Quantum) => "Mkappa",
        }
    }

    pub fn central(&self, a: usize, b: usize) -> &C {
        &self.central[a][b]
    }

    pub fn is_creation(&self, x: Mode) -> bool {
        match self.family {
            Family::Vacuum => x.n <= -1,
            Family::Verma => x.n <= -1 || (x.n == 0 && self.alg.kinds[x.idx()] == RootKind::Negative),
        }
    }

    pub fn weight_of(&self, mono: &[Mode]) -> Vec<i32> {
        let mut w = vec![0; self.alg.rank];
        for m in mono {
            for (i, x) in self.alg.weights[m.idx()].iter().enumerate() {
                w[i] += x;
            }
        }
        w
    }

    pub fn energy_of(mono: &[Mode]) -> i32 {
        mono.iter().map(|m| -m.n).sum()
    }

    /// `[x, y]` as modes with coefficients plus the central scalar.
    pub fn mode_bracket(&self, x: Mode, y: Mode) -> (Vec<(Mode, Q)>, C) {
        let modes = self.alg.brackets[x.idx()][y.idx()]
            .iter()
            .map(|(c, mu)| (Mode::new(*c, x.n + y.n), mu.clone()))
            .collect();
        let central = if x.n + y.n == 0 && x.n != 0 {
            self.central[x.idx()][y.idx()].cscale(&q(x.n as i64))
        } else {
            C::czero()
        };
        (modes, central)
    }

    pub fn act(&self, x: Mode, mono: &[Mode]) -> Elem<C> {
        match self.flavor {
            Flavor::Quantum => (*self.quantum(x, mono)).clone(),
            Flavor::Classical => self.classical_action(x, mono),
        }
    }

    pub fn act_elem(&self, x: Mode, v: &Elem<C>) -> Elem<C> {
        let mut out = Elem::new();
        for (m, c) in v {
            match self.flavor {
                Flavor::Quantum => elem_axpy(&mut out, c, &self.quantum(x, m)),
                Flavor::Classical => elem_axpy(&mut out, c, &self.classical_action(x, m)),
            }
        }
        out
    }

    fn quantum(&self, x: Mode, mono: &[Mode]) -> Rc<Elem<C>> {
        let key = (x, mono.to_vec());
        if let Some(r) = self.cache.borrow().get(&key) {
            return r.clone();
        }
        let r = Rc::new(self.quantum_uncached(x, mono));
        self.cache.borrow_mut().insert(key, r.clone());
        r
    }

    fn quantum_uncached(&self, x: Mode, mono: &[Mode]) -> Elem<C> {
        let mut out = Elem::new();
        let creation = self.is_creation(x);
        let Some((&y, rest)) = mono.split_first() else {
            if creation {
                out.insert(vec![x], C::cone());
            } else if x.n == 0 {
                elem_add(&mut out, Vec::new(), &self.highest[x.idx()]);
            }
            return out;
        };
        if creation && x <= y {
            let mut m = Vec::with_capacity(mono.len() + 1);
            m.push(x);
            m.extend_from_slice(mono);
            out.insert(m, C::cone());
            return out;
        }
        // x y R = y (x R) + [x, y] R
        let xr = self.quantum(x, rest);
        for (m, c) in xr.iter() {
            elem_axpy(&mut out, c, &self.quantum(y, m));
        }
        let (modes, central) = self.mode_bracket(x, y);
        for (z, mu) in modes {
            elem_axpy(&mut out, &C::from_q(mu), &self.quantum(z, rest));
        }
        elem_add(&mut out, rest.to_vec(), &central);
        out
    }

    fn classical_action(&self, x: Mode, mono: &[Mode]) -> Elem<C> {
        let mut out = Elem::new();
        if self.is_creation(x) {
            let mut m = mono.to_vec();
            let pos = m.partition_point(|y| *y <= x);
            m.insert(pos, x);
            out.insert(m, C::cone());
            return out;
        }
        for i in 0..mono.len() {
            let (modes, central) = self.mode_bracket(x, mono[i]);
            let mut rest = mono.to_vec();
            rest.remove(i);
            for (z, mu) in modes {
                if self.is_creation(z) {
                    let mut m = rest.clone();
                    let pos = m.partition_point(|y| *y <= z);
                    m.insert(pos, z);
                    elem_add(&mut out, m, &C::from_q(mu));
                }
            }
            elem_add(&mut out, rest, &central);
        }
        out
    }

    /// Creation modes of energy at least 1 up to `max_energy`, in mode order.
    fn positive_energy_modes(&self, max_energy: u32) -> Vec<Mode> {
        let mut v = Vec::new();
        for e in (1..=max_energy as i32).rev() {
            for a in 0..self.alg.dim {
                v.push(Mode::new(a, -e));
            }
        }
        v
    }

    /// All admissible monomials of the given energy, filtered by weight when
    /// one is given. Verma families require a weight.
    pub fn graded_basis(&self, energy: u32, weight: Option<&[i32]>) -> Vec<Mono> {
        let modes = self.positive_energy_modes(energy);
        let mut pos_part: Vec<Mono> = Vec::new();
        let mut cur = Vec::new();
        multisets(&modes, 0, energy as i32, &mut cur, &mut pos_part, &|m: &Mode| m.energy());
        let mut out = Vec::new();
        match self.family {
            Family::Vacuum => {
                for m in pos_part {
                    if weight.is_none_or(|w| self.weight_of(&m) == w) {
                        out.push(m);
                    }
                }
            }
            Family::Verma => {
                let w = weight.expect("Verma slices are indexed by weight");
                let neg: Vec<Mode> = self.alg.negative().map(|a| Mode::new(a, 0)).collect();
                let rho = self.alg.principal_triple().rho_check;
                let height = |wt: &[i32]| -> Q {
                    self.alg.cartan.iter().enumerate().map(|(i, &h)| &rho[h] * q(wt[i] as i64)).sum()
                };
                for m in pos_part {
                    let w1 = self.weight_of(&m);
                    let rem: Vec<i32> = w.iter().zip(&w1).map(|(a, b)| a - b).collect();
                    let hgt = height(&rem);
                    if !hgt.is_integer() || hgt > Q::from_integer(0.into()) {
                        continue;
                    }
                    let budget: i32 = (-hgt.to_integer()).try_into().expect("small");
                    let mut zero_parts = Vec::new();
                    let mut cur = Vec::new();
                    let alg = &self.alg;
                    multisets(&neg, 0, budget, &mut cur, &mut zero_parts, &|m: &Mode| -alg.heights[m.idx()]);
                    for z in zero_parts {
                        if self.weight_of(&z) == rem {
                            let mut full = m.clone();
                            full.extend(z);
                            out.push(full);
                        }
                    }
                }
            }
        }
        out.sort();
        out
    }

    /// Top PBW-degree part of a quantum element, as a classical element.
    pub fn pbw_symbol(v: &Elem<C>) -> Elem<C> {
        let top = v.keys().map(Vec::len).max().unwrap_or(0);
        v.iter().filter(|(m, _)| m.len() == top).map(|(m, c)| (m.clone(), c.clone())).collect()
    }

    /// JSON dump of a basis: each monomial is a list of `[a, n]` pairs.
    pub fn basis_json(basis: &[Mono]) -> serde_json::Value {
        serde_json::Value::Array(
            basis
                .iter()
                .map(|m| serde_json::json!(m.iter().map(|x| [x.a as i32, x.n]).collect::<Vec<_>>()))
                .collect(),
        )
    }

    /// Forgets memoized action results.
    pub fn clear_cache(&self) {
        self.cache.borrow_mut().clear();
    }
}

/// Nondecreasing multisets from `items[start..]` whose `cost` sums to `budget`.
fn multisets(
    items: &[Mode],
    start: usize,
    budget: i32,
    cur: &mut Vec<Mode>,
    out: &mut Vec<Mono>,
    cost: &dyn Fn(&Mode) -> i32,
) {
    if budget == 0 {
        out.push(cur.clone());
        return;
    }
    for i in start..items.len() {
        let c = cost(&items[i]);
        if c <= budget && c > 0 {
            cur.push(items[i]);
            multisets(items, i, budget - c, cur, out, cost);
            cur.pop();
        }
    }
}

fn highest_from_lambda<C: Coeff>(alg: &SimpleLieAlgebra, lambda: &[i64]) -> Vec<C> {
    let mut h = vec![C::czero(); alg.dim];
    for (i, &c) in alg.cartan.iter().enumerate() {
        h[c] = C::from_q(q(lambda[i]));
    }
    h
}

fn zero_form<C: Coeff>(dim: usize) -> Vec<Vec<C>> {
    vec![vec![C::czero(); dim]; dim]
}

impl Rep<Q> {
    pub fn classical(alg: Arc<SimpleLieAlgebra>, family: Family) -> Self {
        let d = alg.dim;
        Rep::new(alg, family, Flavor::Classical, zero_form(d), vec![Q::czero(); d])
    }

    pub fn vacuum(alg: Arc<SimpleLieAlgebra>, form: &BilinearForm) -> Self {
        let d = alg.dim;
        Rep::new(alg, Family::Vacuum, Flavor::Quantum, form.matrix.clone(), vec![Q::czero(); d])
    }

    /// `lambda` in Dynkin labels.
    pub fn verma(alg: Arc<SimpleLieAlgebra>, form: &BilinearForm, lambda: &[i64]) -> Self {
        let hw = highest_from_lambda(&alg, lambda);
        Rep::new(alg, Family::Verma, Flavor::Quantum, form.matrix.clone(), hw)
    }
}

impl Rep<PolyQ> {
    /// Level family over `Q[h]`. Quantum: `κ_c + h s κ0`; classical: `h s κ0`.
    pub fn family(alg: Arc<SimpleLieAlgebra>, family: Family, flavor: Flavor, s: &Q, lambda: &[i64]) -> Self {
        let crit = alg.bilinear_form(crate::algebra::FormTag::Critical).matrix;
        let k0 = alg.kappa0().clone();
        let d = alg.dim;
        let central = (0..d)
            .map(|a| {
                (0..d)
                    .map(|b| {
                        let c0 = match flavor {
                            Flavor::Quantum => crit[a][b].clone(),
                            Flavor::Classical => Q::czero(),
                        };
                        PolyQ::new(vec![c0, &k0[a][b] * s])
                    })
                    .collect()
            })
            .collect();
        let hw = match (family, flavor) {
            (Family::Verma, Flavor::Quantum) => highest_from_lambda(&alg, lambda),
            _ => vec![PolyQ::czero(); d],
        };
        Rep::new(alg, family, flavor, central, hw)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{AlgebraName, FormTag};

    fn sl2() -> Arc<SimpleLieAlgebra> {
        Arc::new(SimpleLieAlgebra::new(AlgebraName::Sl2))
    }

    #[test]
    fn vacuum_basis_counts() {
        let r = Rep::classical(sl2(), Family::Vacuum);
        assert_eq!(r.graded_basis(0, None), vec![Vec::<Mode>::new()]);
        // Coefficients of prod (1-q^n)^{-3}.
        let counts: Vec<usize> = (0..7).map(|e| r.graded_basis(e, None).len()).collect();
        assert_eq!(counts, vec![1, 3, 9, 22, 51, 108, 221]);
    }

    #[test]
    fn verma_energy_zero_strings() {
        let r = Rep::classical(sl2(), Family::Verma);
        for k in 0..4usize {
            let b = r.graded_basis(0, Some(&[-2 * k as i32]));
            assert_eq!(b, vec![vec![Mode::new(2, 0); k]]);
        }
        assert!(r.graded_basis(0, Some(&[2])).is_empty());
    }

    #[test]
    fn critical_example() {
        let a = sl2();
        let r = Rep::vacuum(a.clone(), &a.bilinear_form(FormTag::Critical));
        let v = r.act(Mode::new(0, 1), &[Mode::new(2, -1)]);
        assert_eq!(v, Elem::from([(vec![], q(-2))]));
        let c = Rep::classical(a, Family::Vacuum);
        assert!(c.act(Mode::new(0, 1), &[Mode::new(2, -1)]).is_empty());
    }

    #[test]
    fn classical_family_contraction() {
        // e_1 . f_{-1} f_{-1} = 2 h f_{-1} in the classical family.
        let a = sl2();
        let r = Rep::family(a, Family::Vacuum, Flavor::Classical, &q(1), &[]);
        let f = Mode::new(2, -1);
        let v = r.act(Mode::new(0, 1), &[f, f]);
        assert_eq!(v, Elem::from([(vec![f], PolyQ::new(vec![q(0), q(2)]))]));
    }

    fn commutator_check<C: Coeff>(r: &Rep<C>, xs: &[Mode], basis: &[Mono]) {
        for &x in xs {
            for &y in xs {
                for m in basis {
                    let mut lhs = r.act_elem(x, &r.act(y, m));
                    let yx = r.act_elem(y, &r.act(x, m));
                    elem_axpy(&mut lhs, &C::cone().cneg(), &yx);
                    let (modes, central) = r.mode_bracket(x, y);
                    let mut rhs = Elem::new();
                    for (z, mu) in modes {
                        elem_axpy(&mut rhs, &C::from_q(mu), &r.act(z, m));
                    }
                    elem_add(&mut rhs, m.clone(), &central);
                    assert_eq!(lhs, rhs, "x={x:?} y={y:?} m={m:?}");
                }
            }
        }
    }

    #[test]
    fn quantum_vacuum_is_a_representation() {
        let a = sl2();
        for tag in [FormTag::Critical, FormTag::Family(q(3))] {
            let r = Rep::vacuum(a.clone(), &a.bilinear_form(tag));
            let xs: Vec<Mode> = (-2..=2).flat_map(|n| (0..3).map(move |b| Mode::new(b, n))).collect();
            for e in 0..=3 {
                commutator_check(&r, &xs, &r.graded_basis(e, None));
            }
        }
    }

    #[test]
    fn quantum_verma_is_a_representation() {
        let a = sl2();
        let r = Rep::verma(a.clone(), &a.bilinear_form(FormTag::Critical), &[1]);
        let xs: Vec<Mode> = (-1..=1).flat_map(|n| (0..3).map(move |b| Mode::new(b, n))).collect();
        for e in 0..=2 {
            for w in [0, -2, -4] {
                commutator_check(&r, &xs, &r.graded_basis(e, Some(&[w])));
            }
        }
    }

    #[test]
    fn classical_action_is_a_representation_of_the_inducing_algebra() {
        let a = sl2();
        let r = Rep::classical(a.clone(), Family::Vacuum);
        let xs: Vec<Mode> = (0..=2).flat_map(|n| (0..3).map(move |b| Mode::new(b, n))).collect();
        for e in 0..=3 {
            commutator_check(&r, &xs, &r.graded_basis(e, None));
        }
        let r = Rep::classical(a, Family::Verma);
        let xs: Vec<Mode> = [Mode::new(0, 0), Mode::new(1, 0)]
            .into_iter()
            .chain((1..=2).flat_map(|n| (0..3).map(move |b| Mode::new(b, n))))
            .collect();
        for e in 0..=2 {
            commutator_check(&r, &xs, &r.graded_basis(e, Some(&[-2])));
        }
    }

    #[test]
    fn symbols() {
        let a = sl2();
        let r = Rep::vacuum(a.clone(), &a.bilinear_form(FormTag::Critical));
        let (e1, f1) = (Mode::new(0, -1), Mode::new(2, -1));
        let v = r.act(Mode::new(0, 1), &[f1, f1]);
        let c = Rep::classical(a, Family::Vacuum);
        let cv = c.act(Mode::new(0, 1), &[f1, f1]);
        assert!(cv.is_empty());
        // The quantum answer has lower PBW degree than the input.
        assert!(v.keys().all(|m| m.len() < 2));
        let x = Elem::from([(vec![e1, f1], q(1))]);
        assert_eq!(Rep::<Q>::pbw_symbol(&x), x);
    }

    #[test]
    fn energy_and_weight_bookkeeping() {
        let a = Arc::new(SimpleLieAlgebra::new(AlgebraName::Sl3));
        let r = Rep::vacuum(a.clone(), &a.bilinear_form(FormTag::Critical));
        for m in r.graded_basis(2, None) {
            for x in [Mode::new(0, 1), Mode::new(5, -1), Mode::new(7, 2), Mode::new(3, 0)] {
                for (out, _) in r.act(x, &m) {
                    assert_eq!(Rep::<Q>::energy_of(&out), Rep::<Q>::energy_of(&m) - x.n);
                    let mut w = r.weight_of(&m);
                    for (i, d) in a.weights[x.idx()].iter().enumerate() {
                        w[i] += d;
                    }
                    assert_eq!(r.weight_of(&out), w);
                }
            }
        }
    }
}
