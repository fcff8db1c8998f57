//! Deformation of the level along `κ0` and the maps it induces on cohomology.
//!
//! The family module over `Q[h]` has level `κ_c + h·s·κ0` (quantum) or
//! `h·s·κ0` (classical). Its differential expands as
//! `δ_h = δ0 + h·δ1 + h²·δ2 + …`; `δ0` is the undeformed differential and
//! `δ1` induces `φ: H^i → H^{i+1}`.

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::Rng;

use crate::algebra::{FormTag, SimpleLieAlgebra};
use crate::chevalley::{cochain_add, cochain_axpy, Cell, Cochain, Complex, Pair};
use crate::error::{Error, Result};
use crate::linalg::{in_image, svec_to_dense, ImageOracle, SVec, SparseMatrix, SparseMatrixQ};
use crate::loop_rep::{Elem, Family, Flavor, Mode, Rep};
use crate::rational::{q, Coeff, PolyQ, Q};
use crate::vertex::VertexAlgebra;

pub fn pair_for(family: Family) -> Pair {
    match family {
        Family::Vacuum => Pair::LoopRelative,
        Family::Verma => Pair::IwahoriRelative,
    }
}

/// The module at `h = 0`: classical, or quantum at the critical level.
pub fn base_rep(alg: &Arc<SimpleLieAlgebra>, family: Family, flavor: Flavor, lambda: &[i64]) -> Rep<Q> {
    match (flavor, family) {
        (Flavor::Classical, _) => Rep::classical(alg.clone(), family),
        (Flavor::Quantum, Family::Vacuum) => Rep::vacuum(alg.clone(), &alg.bilinear_form(FormTag::Critical)),
        (Flavor::Quantum, Family::Verma) => Rep::verma(alg.clone(), &alg.bilinear_form(FormTag::Critical), lambda),
    }
}

/// `δ_h` from degree `p` to `p + 1` on one weight-zero energy slice.
pub struct FamilySlice {
    pub p: usize,
    pub energy: u32,
    pub source: Vec<Cell>,
    pub target: Vec<Cell>,
    pub matrix: SparseMatrix<PolyQ>,
}

impl FamilySlice {
    /// `δ_k`, the coefficient of `h^k`.
    pub fn component(&self, k: usize) -> SparseMatrixQ {
        self.matrix.map(|x| x.coeff(k))
    }

    pub fn h_degree(&self) -> usize {
        self.matrix.columns().iter().flatten().filter_map(|(_, x)| x.degree()).max().unwrap_or(0)
    }
}

pub struct FamilyDifferential {
    pub family: Family,
    pub flavor: Flavor,
    pub pair: Pair,
    pub scale: Q,
    /// Keyed by `(energy, p)`.
    pub slices: BTreeMap<(u32, usize), FamilySlice>,
}

pub fn family_differential(
    alg: &Arc<SimpleLieAlgebra>,
    family: Family,
    flavor: Flavor,
    scale: &Q,
    lambda: &[i64],
    p_max: usize,
    energies: impl IntoIterator<Item = u32>,
) -> Result<FamilyDifferential> {
    let rep = Rep::<PolyQ>::family(alg.clone(), family, flavor, scale, lambda);
    let pair = pair_for(family);
    let cx = Complex::new(&rep, pair)?;
    let zero = vec![0; alg.rank];
    let mut slices = BTreeMap::new();
    for energy in energies {
        let mut source = cx.cells(0, energy, Some(&zero));
        for p in 0..=p_max {
            let target = cx.cells(p + 1, energy, Some(&zero));
            let matrix = cx.matrix(&source, &target, |c| cx.d_cell(c))?;
            let next = target.clone();
            slices.insert((energy, p), FamilySlice { p, energy, source, target, matrix });
            source = next;
        }
    }
    Ok(FamilyDifferential { family, flavor, pair, scale: scale.clone(), slices })
}

impl FamilyDifferential {
    pub fn slice(&self, p: usize, energy: u32) -> Option<&FamilySlice> {
        self.slices.get(&(energy, p))
    }

    pub fn h_degree(&self) -> usize {
        self.slices.values().map(FamilySlice::h_degree).max().unwrap_or(0)
    }

    /// Consecutive pairs `(p, p + 1)` present in the window.
    fn consecutive(&self) -> impl Iterator<Item = (&FamilySlice, &FamilySlice)> {
        self.slices.values().filter_map(|a| self.slice(a.p + 1, a.energy).map(|b| (a, b)))
    }

    /// `δ_h ∘ δ_h = 0` as polynomial matrices on every consecutive pair.
    pub fn square_vanishes(&self) -> Result<bool> {
        for (a, b) in self.consecutive() {
            if !b.matrix.matmul(&a.matrix)?.is_zero() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// `Σ_{i+j=k} δ_i δ_j` from degree `p` to `p + 2`.
    pub fn component_square(&self, p: usize, energy: u32, k: usize) -> Result<SparseMatrixQ> {
        let (a, b) = match (self.slice(p, energy), self.slice(p + 1, energy)) {
            (Some(a), Some(b)) => (a, b),
            _ => return Err(Error::SliceMismatch(format!("no slices p={p},{} at energy {energy}", p + 1))),
        };
        let mut acc = SparseMatrixQ::zeros(b.target.len(), a.source.len());
        for i in 0..=k {
            acc = acc.add(&b.component(i).matmul(&a.component(k - i))?)?;
        }
        Ok(acc)
    }

    /// `[δ0, δ1]_+ = 0` and `δ1² + [δ0, δ2]_+ = 0` on every consecutive pair.
    pub fn low_order_identities_hold(&self) -> Result<bool> {
        let keys: Vec<(u32, usize)> = self.consecutive().map(|(a, _)| (a.energy, a.p)).collect();
        for (e, p) in keys {
            for k in 1..=2 {
                if !self.component_square(p, e, k)?.is_zero() {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

/// Whether `δ1` computed with `λ·κ0` equals `λ` times `δ1` computed with `κ0`.
pub fn scaling_covariance_check(
    alg: &Arc<SimpleLieAlgebra>,
    family: Family,
    flavor: Flavor,
    lambda_scale: &Q,
    weight: &[i64],
    p_max: usize,
    energies: impl IntoIterator<Item = u32> + Clone,
) -> Result<bool> {
    let unit = family_differential(alg, family, flavor, &q(1), weight, p_max, energies.clone())?;
    let scaled = family_differential(alg, family, flavor, lambda_scale, weight, p_max, energies)?;
    for (k, s) in &scaled.slices {
        let u = &unit.slices[k];
        if s.component(1) != u.component(1).scale(lambda_scale) || s.component(0) != u.component(0) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Cohomology classes of one weight-zero slice with a coordinate solver.
pub struct ClassBasis {
    pub p: usize,
    pub energy: u32,
    pub cells: Vec<Cell>,
    pub reps: Vec<Cochain<Q>>,
    n_prev: usize,
    solver: ImageOracle,
}

impl ClassBasis {
    pub fn dim(&self) -> usize {
        self.reps.len()
    }

    fn to_vec(&self, c: &Cochain<Q>) -> Result<SVec> {
        let index: std::collections::HashMap<&Cell, usize> =
            self.cells.iter().enumerate().map(|(i, c)| (c, i)).collect();
        let mut v = Vec::with_capacity(c.len());
        for (cell, x) in c {
            let i = index
                .get(cell)
                .ok_or_else(|| Error::SliceMismatch(format!("cell {cell:?} outside the slice")))?;
            v.push((*i, x.clone()));
        }
        v.sort_by_key(|e| e.0);
        Ok(v)
    }

    /// Coordinates of the class of the cocycle `y` on `reps`.
    pub fn coordinates(&self, y: &Cochain<Q>) -> Result<Vec<Q>> {
        let v = self.to_vec(y)?;
        let w = self.solver.witness(&v)?.ok_or_else(|| {
            Error::LiftingFailure(format!("cochain is not a cocycle of slice p={} E={}", self.p, self.energy))
        })?;
        let tail: SVec = w.into_iter().filter(|(i, _)| *i >= self.n_prev).map(|(i, x)| (i - self.n_prev, x)).collect();
        Ok(svec_to_dense(&tail, self.reps.len()))
    }

    pub fn is_exact(&self, y: &Cochain<Q>) -> Result<bool> {
        Ok(self.coordinates(y)?.iter().all(|x| x.is_czero()))
    }
}

/// `δ0`-cohomology together with the `δ1` operator of one family.
pub struct Deformation {
    pub alg: Arc<SimpleLieAlgebra>,
    pub family: Family,
    pub flavor: Flavor,
    pub lambda: Vec<i64>,
    pub base: Rep<Q>,
    pub fam: Rep<PolyQ>,
}

impl Deformation {
    pub fn new(alg: &Arc<SimpleLieAlgebra>, family: Family, flavor: Flavor, scale: &Q, lambda: &[i64]) -> Self {
        Deformation {
            alg: alg.clone(),
            family,
            flavor,
            lambda: lambda.to_vec(),
            base: base_rep(alg, family, flavor, lambda),
            fam: Rep::<PolyQ>::family(alg.clone(), family, flavor, scale, lambda),
        }
    }

    pub fn pair(&self) -> Pair {
        pair_for(self.family)
    }

    pub fn base_complex(&self) -> Complex<'_, Q> {
        Complex::new(&self.base, self.pair()).expect("pair matches family")
    }

    pub fn family_complex(&self) -> Complex<'_, PolyQ> {
        Complex::new(&self.fam, self.pair()).expect("pair matches family")
    }

    /// `δ_k` applied to an `h`-free cochain.
    pub fn delta(&self, c: &Cochain<Q>, k: usize) -> Cochain<Q> {
        let cx = self.family_complex();
        let mut out = Cochain::new();
        for (cell, x) in c {
            for (t, v) in cx.d_cell(cell) {
                cochain_add(&mut out, t, &(v.coeff(k) * x));
            }
        }
        out
    }

    pub fn delta1(&self, c: &Cochain<Q>) -> Cochain<Q> {
        self.delta(c, 1)
    }

    pub fn classes(&self, p: usize, energy: u32) -> Result<ClassBasis> {
        let cx = self.base_complex();
        let reps = cx.representatives(p, energy)?;
        let cob = cx.coboundaries(p, energy)?;
        let n_prev = cob.matrix.cols();
        let r = SparseMatrix::from_columns(reps.cells.len(), reps.reps.clone());
        let solver = ImageOracle::new(&SparseMatrix::hstack(&[&cob.matrix, &r])?);
        let cochains = reps.reps.iter().map(|v| reps.to_cochain(v)).collect();
        Ok(ClassBasis { p, energy, cells: reps.cells, reps: cochains, n_prev, solver })
    }

    /// Matrix of `φ: H^i → H^{i+1}` on one energy, columns indexed by the
    /// classes of `source`.
    pub fn phi_matrix_between(&self, source: &ClassBasis, target: &ClassBasis) -> Result<SparseMatrixQ> {
        let mut cols = Vec::with_capacity(source.dim());
        for z in &source.reps {
            let c = target.coordinates(&self.delta1(z))?;
            cols.push(crate::linalg::dense_to_svec(&c));
        }
        Ok(SparseMatrix::from_columns(target.dim(), cols))
    }

    pub fn phi_matrix(&self, i: usize, energy: u32) -> Result<SparseMatrixQ> {
        self.phi_matrix_between(&self.classes(i, energy)?, &self.classes(i + 1, energy)?)
    }

    /// Shifts every representative by a random coboundary and checks that
    /// the `φ` coordinates do not move.
    pub fn representative_independent(&self, i: usize, energy: u32, rng: &mut impl Rng) -> Result<bool> {
        let src = self.classes(i, energy)?;
        let tgt = self.classes(i + 1, energy)?;
        if i == 0 {
            return Ok(true);
        }
        let cx = self.base_complex();
        let zero = vec![0; self.alg.rank];
        let prev = cx.cells(i - 1, energy, Some(&zero));
        for z in &src.reps {
            let mut w = Cochain::new();
            for c in &prev {
                cochain_add(&mut w, c.clone(), &q(rng.gen_range(-3..=3)));
            }
            let mut shifted = z.clone();
            cochain_axpy(&mut shifted, &q(1), &cx.d(&w));
            if tgt.coordinates(&self.delta1(z))? != tgt.coordinates(&self.delta1(&shifted))? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// `φ(A ⌣ B) − φ(A) ⌣ B − (−1)^{p(A)} A ⌣ φ(B)` with the vertex-algebra
    /// cup product at `h = 0`.
    pub fn leibniz_defect(&self, va: &VertexAlgebra<'_>, a: &Cochain<Q>, pa: usize, b: &Cochain<Q>) -> Result<Cochain<Q>> {
        let mut out = self.delta1(&va.cup(a, b)?);
        cochain_axpy(&mut out, &q(-1), &va.cup(&self.delta1(a), b)?);
        let s = if pa.is_multiple_of(2) { q(-1) } else { q(1) };
        cochain_axpy(&mut out, &s, &va.cup(a, &self.delta1(b))?);
        Ok(out)
    }

    /// Completes a classical monomial element to a degree-zero cocycle of
    /// the base complex by adding terms of lower PBW degree.
    pub fn lift_to_cocycle(&self, elem: &Elem<Q>) -> Result<Cochain<Q>> {
        let top = elem.keys().map(Vec::len).max().unwrap_or(0);
        let energy = elem.keys().next().map_or(0, |m| Rep::<Q>::energy_of(m)) as u32;
        let cx = self.base_complex();
        let zero = vec![0; self.alg.rank];
        let cells = cx.cells(0, energy, Some(&zero));
        let next = cx.cells(1, energy, Some(&zero));
        let d = cx.matrix(&cells, &next, |c| cx.d_cell(c))?;
        let full = match self.pair() {
            Pair::LoopRelative => SparseMatrix::vstack(&[&d, &cx.raising_stack(0, energy, &cells)?])?,
            _ => d,
        };
        let index: std::collections::HashMap<&Cell, usize> = cells.iter().enumerate().map(|(i, c)| (c, i)).collect();
        let mut v: SVec = Vec::new();
        for (m, x) in elem {
            let cell = Cell::new(Vec::new(), m.clone());
            let i = index
                .get(&cell)
                .ok_or_else(|| Error::SliceMismatch(format!("monomial {m:?} is not of weight zero")))?;
            v.push((*i, x.clone()));
        }
        v.sort_by_key(|e| e.0);
        let rhs = crate::linalg::scale_vec(&full.mul_vec(&v), &q(-1));
        let lower: Vec<usize> = (0..cells.len()).filter(|&i| cells[i].mono.len() < top).collect();
        let w = in_image(&full.select_columns(&lower), &rhs)?
            .ok_or_else(|| Error::LiftingFailure("no lower-order completion to a cocycle".into()))?;
        let mut out: Cochain<Q> = v.iter().map(|(i, x)| (cells[*i].clone(), x.clone())).collect();
        for (j, x) in w {
            cochain_add(&mut out, cells[lower[j]].clone(), &x);
        }
        Ok(out)
    }
}

/// `P_{i,n}`: the `t^n` coefficient of `P_i(J(t))` with
/// `J^a(t) = Σ_{m≥1} J^a_{−m} t^{m−1}`. Energy `n + d_i + 1`.
pub fn invariant_generator(alg: &SimpleLieAlgebra, i: usize, n: u32) -> Elem<Q> {
    let polys = alg.invariant_polynomials();
    let p = &polys[i - 1];
    let mut out = Elem::new();
    for (vars, c) in &p.poly.0 {
        let k = vars.len();
        let mut ms = vec![1i32; k];
        distribute(n as i32, 0, &mut ms, &mut |ms| {
            let mut mono: Vec<Mode> = vars.iter().zip(ms).map(|(&a, &m)| Mode::new(a, -m)).collect();
            mono.sort();
            crate::loop_rep::elem_add(&mut out, mono, c);
        });
    }
    out
}

/// Every way of adding `budget` to the entries of `ms` from position `start`.
fn distribute(budget: i32, start: usize, ms: &mut Vec<i32>, f: &mut impl FnMut(&[i32])) {
    if start + 1 >= ms.len() {
        if let Some(last) = ms.last_mut() {
            *last += budget;
            f(ms);
            *ms.last_mut().expect("nonempty") -= budget;
        } else if budget == 0 {
            f(ms);
        }
        return;
    }
    for b in 0..=budget {
        ms[start] += b;
        distribute(budget - b, start + 1, ms, f);
        ms[start] -= b;
    }
}

/// Degree-zero cochain with the given module part.
pub fn cochain_of(elem: &Elem<Q>) -> Cochain<Q> {
    elem.iter().map(|(m, c)| (Cell::new(Vec::new(), m.clone()), c.clone())).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::AlgebraName;
    use crate::linalg::rank;
    use crate::vertex::VertexAlgebra;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn sl2() -> Arc<SimpleLieAlgebra> {
        Arc::new(SimpleLieAlgebra::new(AlgebraName::Sl2))
    }

    #[test]
    fn classical_h_term_contracts_one_factor() {
        let a = sl2();
        let rep = Rep::<PolyQ>::family(a.clone(), Family::Vacuum, Flavor::Classical, &q(1), &[]);
        let (e, f) = (a.e[0], a.f[0]);
        let r = rep.act(Mode::new(e, 1), &[Mode::new(f, -1), Mode::new(f, -1)]);
        assert_eq!(r.len(), 1);
        assert_eq!(r[&vec![Mode::new(f, -1)]], PolyQ::new(vec![q(0), q(2)]));
    }

    #[test]
    fn classical_family_is_linear_in_h() {
        let fd = family_differential(&sl2(), Family::Vacuum, Flavor::Classical, &q(1), &[], 2, 0..=4).unwrap();
        assert!(fd.h_degree() <= 1);
        assert!(fd.square_vanishes().unwrap());
        assert!(fd.low_order_identities_hold().unwrap());
    }

    #[test]
    fn delta0_is_the_base_differential() {
        let a = sl2();
        for flavor in [Flavor::Classical, Flavor::Quantum] {
            let fd = family_differential(&a, Family::Vacuum, flavor, &q(1), &[], 1, 0..=3).unwrap();
            let base = base_rep(&a, Family::Vacuum, flavor, &[]);
            let cx = Complex::new(&base, Pair::LoopRelative).unwrap();
            for s in fd.slices.values() {
                let m = cx.matrix(&s.source, &s.target, |c| cx.d_cell(c)).unwrap();
                assert_eq!(s.component(0), m);
            }
        }
    }

    #[test]
    fn generator_energies_and_invariance() {
        let a = sl2();
        let p10 = invariant_generator(&a, 1, 0);
        assert!(p10.keys().all(|m| Rep::<Q>::energy_of(m) == 2));
        let p12 = invariant_generator(&a, 1, 2);
        assert!(p12.keys().all(|m| Rep::<Q>::energy_of(m) == 4));
        let def = Deformation::new(&a, Family::Vacuum, Flavor::Classical, &q(1), &[]);
        let cx = def.base_complex();
        for n in 0..=2 {
            let c = cochain_of(&invariant_generator(&a, 1, n));
            assert!(cx.d(&c).is_empty(), "n={n}");
        }
    }

    #[test]
    fn phi_classical_on_casimir_is_nonzero() {
        let a = sl2();
        let def = Deformation::new(&a, Family::Vacuum, Flavor::Classical, &q(1), &[]);
        let h1 = def.classes(1, 2).unwrap();
        let y = def.delta1(&cochain_of(&invariant_generator(&a, 1, 0)));
        assert!(!h1.is_exact(&y).unwrap());
        let h0 = def.classes(0, 0).unwrap();
        let one = def.delta1(&h0.reps[0]);
        assert!(one.is_empty());
    }

    #[test]
    fn phi_squares_to_zero_small() {
        let a = sl2();
        for flavor in [Flavor::Classical, Flavor::Quantum] {
            let def = Deformation::new(&a, Family::Vacuum, flavor, &q(1), &[]);
            for e in 0..=4 {
                let m0 = def.phi_matrix(0, e).unwrap();
                let m1 = def.phi_matrix(1, e).unwrap();
                assert!(m1.matmul(&m0).unwrap().is_zero(), "{flavor:?} e={e}");
            }
        }
    }

    #[test]
    fn quantum_lift_symbol_matches_classical_phi() {
        let a = sl2();
        let qd = Deformation::new(&a, Family::Vacuum, Flavor::Quantum, &q(1), &[]);
        let cd = Deformation::new(&a, Family::Vacuum, Flavor::Classical, &q(1), &[]);
        for n in 0..=2 {
            let p = invariant_generator(&a, 1, n);
            let lift = qd.lift_to_cocycle(&p).unwrap();
            let y = qd.delta1(&lift);
            assert_eq!(VertexAlgebra::symbol(&y), cd.delta1(&cochain_of(&p)), "n={n}");
            let h1 = qd.classes(1, n + 2).unwrap();
            assert!(!h1.is_exact(&y).unwrap());
        }
    }

    #[test]
    fn representative_choice_does_not_matter() {
        let a = sl2();
        let def = Deformation::new(&a, Family::Vacuum, Flavor::Quantum, &q(1), &[]);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for e in 2..=4 {
            assert!(def.representative_independent(1, e, &mut rng).unwrap());
        }
    }

    #[test]
    fn scaling_is_linear() {
        let a = sl2();
        for s in [q(1), q(3), q(-2)] {
            assert!(scaling_covariance_check(&a, Family::Vacuum, Flavor::Classical, &s, &[], 1, 0..=3).unwrap());
        }
        let fd = family_differential(&a, Family::Vacuum, Flavor::Classical, &q(3), &[], 0, 2..=2).unwrap();
        assert!(rank(&fd.slice(0, 2).unwrap().component(1)).unwrap() > 0);
    }
}
