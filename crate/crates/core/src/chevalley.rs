//! Chevalley complexes of loop and Iwahori algebras with coefficients in
//! the loop modules, and their cohomology on bigraded slices.
//!
//! A cell is `ξ_1 ∧ … ∧ ξ_p ⊗ m` with exterior factors on the left, where
//! the dual mode `ξ[a,k]` (stored as `Mode { n: k, a }`, `k ≥ 0`) pairs with
//! `J^a_k`. The differential is
//! `d(ω ⊗ m) = Σ_x ξ_x ∧ ω ⊗ x·m + d_CE(ω) ⊗ m` with
//! `d_CE ξ_C = -½ Σ μ^{AB}_C ξ_A ∧ ξ_B`, extended as an odd derivation.

use std::collections::{BTreeMap, HashMap};

use serde::Serialize;

use crate::algebra::RootKind;
use crate::error::{Error, Result};
use crate::linalg::{kernel_basis, rank, Echelon, ImageOracle, SVec, SparseMatrix, SparseMatrixQ};
use crate::loop_rep::{Family, Mode, Mono, Rep};
use crate::rational::{q, qf, Coeff, Q};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Pair {
    /// Cochains of `g[[t]]` (vacuum) or `b̃` (Verma).
    Absolute,
    /// `(g[[t]], g)`.
    LoopRelative,
    /// `(b̃, h)`.
    IwahoriRelative,
}

impl Pair {
    pub fn label(&self) -> &'static str {
        match self {
            Pair::Absolute => "g[[t]]",
            Pair::LoopRelative => "(g[[t]],g)",
            Pair::IwahoriRelative => "(b~,h)",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cell {
    pub wedge: Vec<Mode>,
    pub mono: Mono,
}

impl Cell {
    pub fn new(wedge: Vec<Mode>, mono: Mono) -> Self {
        Cell { wedge, mono }
    }
    pub fn vacuum() -> Self {
        Cell { wedge: Vec::new(), mono: Vec::new() }
    }
    pub fn degree(&self) -> usize {
        self.wedge.len()
    }
    pub fn parity(&self) -> usize {
        self.wedge.len() % 2
    }
    pub fn energy(&self) -> i32 {
        self.wedge.iter().map(|x| x.n).sum::<i32>() - self.mono.iter().map(|x| x.n).sum::<i32>()
    }
}

pub type Cochain<C> = BTreeMap<Cell, C>;

pub fn cochain_add<C: Coeff>(acc: &mut Cochain<C>, key: Cell, c: &C) {
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

pub fn cochain_axpy<C: Coeff>(acc: &mut Cochain<C>, c: &C, x: &Cochain<C>) {
    for (k, v) in x {
        cochain_add(acc, k.clone(), &c.cmul(v));
    }
}

/// Sorts a list of odd generators; `None` if one repeats, otherwise the
/// sorted list and whether the permutation was odd.
pub fn wedge_sort(mut list: Vec<Mode>) -> Option<(Vec<Mode>, bool)> {
    let mut odd = false;
    for i in 1..list.len() {
        let mut j = i;
        while j > 0 && list[j - 1] > list[j] {
            list.swap(j - 1, j);
            odd = !odd;
            j -= 1;
        }
        if j > 0 && list[j - 1] == list[j] {
            return None;
        }
    }
    Some((list, odd))
}

/// Left multiplication by `ξ_x`.
pub fn psi_star(x: Mode, w: &[Mode]) -> Option<(Vec<Mode>, bool)> {
    let pos = w.partition_point(|y| *y < x);
    if w.get(pos) == Some(&x) {
        return None;
    }
    let mut v = w.to_vec();
    v.insert(pos, x);
    Some((v, pos % 2 == 1))
}

/// Contraction with `J_x`, acting from the left.
pub fn psi(x: Mode, w: &[Mode]) -> Option<(Vec<Mode>, bool)> {
    let pos = w.iter().position(|y| *y == x)?;
    let mut v = w.to_vec();
    v.remove(pos);
    Some((v, pos % 2 == 1))
}

fn signed<C: Coeff>(c: &C, odd: bool) -> C {
    if odd {
        c.cneg()
    } else {
        c.clone()
    }
}

pub struct Complex<'a, C: Coeff> {
    pub rep: &'a Rep<C>,
    pub pair: Pair,
}

impl<'a, C: Coeff> Complex<'a, C> {
    pub fn new(rep: &'a Rep<C>, pair: Pair) -> Result<Self> {
        let ok = match pair {
            Pair::LoopRelative => rep.family == Family::Vacuum,
            Pair::IwahoriRelative => rep.family == Family::Verma,
            Pair::Absolute => true,
        };
        if !ok {
            return Err(Error::SliceMismatch(format!("pair {} does not apply to {}", pair.label(), rep.tag())));
        }
        Ok(Complex { rep, pair })
    }

    /// Whether `J^a_k` belongs to the Lie algebra whose cochains we take.
    pub fn in_algebra(&self, x: Mode) -> bool {
        if x.n >= 1 {
            return true;
        }
        if x.n < 0 {
            return false;
        }
        let kind = self.rep.alg.kinds[x.idx()];
        match (self.pair, self.rep.family) {
            (Pair::Absolute, Family::Vacuum) => true,
            (Pair::Absolute, Family::Verma) => kind != RootKind::Negative,
            (Pair::LoopRelative, _) => false,
            (Pair::IwahoriRelative, _) => kind == RootKind::Positive,
        }
    }

    pub fn dual_modes(&self, max_energy: u32) -> Vec<Mode> {
        let mut v = Vec::new();
        for k in 0..=max_energy as i32 {
            for a in 0..self.rep.alg.dim {
                let m = Mode::new(a, k);
                if self.in_algebra(m) {
                    v.push(m);
                }
            }
        }
        v
    }

    fn wedge_weight(&self, w: &[Mode]) -> Vec<i32> {
        let mut out = vec![0; self.rep.alg.rank];
        for x in w {
            for (i, d) in self.rep.alg.weights[x.idx()].iter().enumerate() {
                out[i] -= d;
            }
        }
        out
    }

    pub fn cell_weight(&self, c: &Cell) -> Vec<i32> {
        let w = self.wedge_weight(&c.wedge);
        let m = self.rep.weight_of(&c.mono);
        w.iter().zip(&m).map(|(a, b)| a + b).collect()
    }

    /// All cells of degree `p`, energy `energy`, and the given total weight.
    pub fn cells(&self, p: usize, energy: u32, weight: Option<&[i32]>) -> Vec<Cell> {
        let duals = self.dual_modes(energy);
        let mut wedges = Vec::new();
        let mut cur = Vec::new();
        fn rec(duals: &[Mode], start: usize, p: usize, budget: i32, cur: &mut Vec<Mode>, out: &mut Vec<Vec<Mode>>) {
            if cur.len() == p {
                out.push(cur.clone());
                return;
            }
            for i in start..duals.len() {
                if duals[i].n <= budget {
                    cur.push(duals[i]);
                    rec(duals, i + 1, p, budget - duals[i].n, cur, out);
                    cur.pop();
                }
            }
        }
        rec(&duals, 0, p, energy as i32, &mut cur, &mut wedges);
        let mut out = Vec::new();
        let mut basis_cache: HashMap<(u32, Option<Vec<i32>>), Vec<Mono>> = HashMap::new();
        for w in wedges {
            let ew: i32 = w.iter().map(|x| x.n).sum();
            let rest = energy - ew as u32;
            let target = weight.map(|t| {
                let ww = self.wedge_weight(&w);
                t.iter().zip(&ww).map(|(a, b)| a - b).collect::<Vec<i32>>()
            });
            let monos = basis_cache
                .entry((rest, target.clone()))
                .or_insert_with(|| self.rep.graded_basis(rest, target.as_deref()));
            for m in monos.iter() {
                out.push(Cell::new(w.clone(), m.clone()));
            }
        }
        out.sort();
        out
    }

    /// `d` on a single cell by the finite Chevalley formula.
    pub fn d_cell(&self, c: &Cell) -> Cochain<C> {
        let mut out = Cochain::new();
        let e = Rep::<C>::energy_of(&c.mono);
        for k in 0..=e {
            for a in 0..self.rep.alg.dim {
                let x = Mode::new(a, k);
                if !self.in_algebra(x) {
                    continue;
                }
                let Some((w, odd)) = psi_star(x, &c.wedge) else { continue };
                for (m, v) in self.rep.act(x, &c.mono) {
                    cochain_add(&mut out, Cell::new(w.clone(), m), &signed(&v, odd));
                }
            }
        }
        let half = qf(-1, 2);
        for (k, xc) in c.wedge.iter().enumerate() {
            // d ξ_C = -½ Σ_{A,B} μ^{AB}_C ξ_A ξ_B over algebra modes with A+B = C.
            for i in 0..=xc.n {
                for a in 0..self.rep.alg.dim {
                    let xa = Mode::new(a, i);
                    if !self.in_algebra(xa) {
                        continue;
                    }
                    for b in 0..self.rep.alg.dim {
                        let xb = Mode::new(b, xc.n - i);
                        if !self.in_algebra(xb) {
                            continue;
                        }
                        let Some(mu) = self.rep.alg.brackets[a][b].iter().find(|(cc, _)| *cc == xc.idx()) else {
                            continue;
                        };
                        let mut list = c.wedge[..k].to_vec();
                        list.push(xa);
                        list.push(xb);
                        list.extend_from_slice(&c.wedge[k + 1..]);
                        let Some((w, odd)) = wedge_sort(list) else { continue };
                        // Moving d past k odd factors.
                        let s = if k % 2 == 1 { !odd } else { odd };
                        let coef = C::from_q(&half * &mu.1);
                        cochain_add(&mut out, Cell::new(w, c.mono.clone()), &signed(&coef, s));
                    }
                }
            }
        }
        out
    }

    /// `d` on a single cell by the residue formula
    /// `Σ ψ*_{a,k} J^a_k - ½ Σ μ^{ab}_c ψ*_{a,i} ψ*_{b,j} ψ_{c,i+j}`.
    pub fn d_cell_residue(&self, c: &Cell) -> Cochain<C> {
        let mut out = Cochain::new();
        let e = Rep::<C>::energy_of(&c.mono);
        for k in 0..=e {
            for a in 0..self.rep.alg.dim {
                let x = Mode::new(a, k);
                if !self.in_algebra(x) {
                    continue;
                }
                for (m, v) in self.rep.act(x, &c.mono) {
                    if let Some((w, odd)) = psi_star(x, &c.wedge) {
                        cochain_add(&mut out, Cell::new(w, m), &signed(&v, odd));
                    }
                }
            }
        }
        let half = qf(-1, 2);
        for xc in &c.wedge {
            let Some((w1, o1)) = psi(*xc, &c.wedge) else { continue };
            for i in 0..=xc.n {
                for a in 0..self.rep.alg.dim {
                    let xa = Mode::new(a, i);
                    let xb_n = xc.n - i;
                    for b in 0..self.rep.alg.dim {
                        let xb = Mode::new(b, xb_n);
                        if !self.in_algebra(xa) || !self.in_algebra(xb) {
                            continue;
                        }
                        let Some(mu) = self.rep.alg.brackets[a][b].iter().find(|(cc, _)| *cc == xc.idx()) else {
                            continue;
                        };
                        let Some((w2, o2)) = psi_star(xb, &w1) else { continue };
                        let Some((w3, o3)) = psi_star(xa, &w2) else { continue };
                        let coef = C::from_q(&half * &mu.1);
                        cochain_add(&mut out, Cell::new(w3, c.mono.clone()), &signed(&coef, o1 ^ o2 ^ o3));
                    }
                }
            }
        }
        out
    }

    pub fn d(&self, v: &Cochain<C>) -> Cochain<C> {
        let mut out = Cochain::new();
        for (c, x) in v {
            cochain_axpy(&mut out, x, &self.d_cell(c));
        }
        out
    }

    /// Action of the constant element `J^a_0` (coadjoint on the exterior part).
    pub fn constant_action_cell(&self, a: usize, c: &Cell) -> Cochain<C> {
        let mut out = Cochain::new();
        let x = Mode::new(a, 0);
        for (m, v) in self.rep.act(x, &c.mono) {
            cochain_add(&mut out, Cell::new(c.wedge.clone(), m), &v);
        }
        // J^a_0 · ξ[b,k] = -Σ_c μ^{ac}_b ξ[c,k]
        for (k, xb) in c.wedge.iter().enumerate() {
            for cc in 0..self.rep.alg.dim {
                let Some(mu) = self.rep.alg.brackets[a][cc].iter().find(|(t, _)| *t == xb.idx()) else {
                    continue;
                };
                let mut list = c.wedge.clone();
                list[k] = Mode::new(cc, xb.n);
                let Some((w, odd)) = wedge_sort(list) else { continue };
                cochain_add(&mut out, Cell::new(w, c.mono.clone()), &signed(&C::from_q(-mu.1.clone()), odd));
            }
        }
        out
    }

    /// Matrix of a cell map between two ordered bases.
    pub fn matrix(
        &self,
        source: &[Cell],
        target: &[Cell],
        f: impl Fn(&Cell) -> Cochain<C>,
    ) -> Result<SparseMatrix<C>> {
        let index: HashMap<&Cell, usize> = target.iter().enumerate().map(|(i, c)| (c, i)).collect();
        let mut columns = Vec::with_capacity(source.len());
        for c in source {
            let img = f(c);
            let mut col: SVec<C> = Vec::with_capacity(img.len());
            for (cell, v) in img {
                let Some(&r) = index.get(&cell) else {
                    return Err(Error::SliceMismatch(format!("image cell {cell:?} outside target slice")));
                };
                col.push((r, v));
            }
            col.sort_by_key(|e| e.0);
            columns.push(col);
        }
        Ok(SparseMatrix::from_columns(target.len(), columns))
    }

    /// Differential from the `(p, energy, weight)` slice to degree `p + 1`.
    pub fn differential(&self, p: usize, energy: u32, weight: Option<&[i32]>) -> Result<SparseMatrix<C>> {
        let s = self.cells(p, energy, weight);
        let t = self.cells(p + 1, energy, weight);
        self.matrix(&s, &t, |c| self.d_cell(c))
    }

    pub fn simple_root_weights(&self) -> Vec<Vec<i32>> {
        self.rep.alg.e.iter().map(|&e| self.rep.alg.weights[e].clone()).collect()
    }

    /// Stack of the raising operators `e_i` from the weight-zero slice.
    pub fn raising_stack(&self, p: usize, energy: u32, source: &[Cell]) -> Result<SparseMatrix<C>> {
        let mut blocks = Vec::new();
        for (i, w) in self.simple_root_weights().iter().enumerate() {
            let t = self.cells(p, energy, Some(w));
            let e = self.rep.alg.e[i];
            blocks.push(self.matrix(source, &t, |c| self.constant_action_cell(e, c))?);
        }
        let refs: Vec<&SparseMatrix<C>> = blocks.iter().collect();
        SparseMatrix::vstack(&refs)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SliceRecord {
    pub pair: String,
    pub module: String,
    pub p: usize,
    pub energy: u32,
    pub weight: Vec<i32>,
    pub dim_cochains: usize,
    pub rank_in: usize,
    pub rank_out: usize,
    pub dim: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct CohomologyReport {
    pub records: Vec<SliceRecord>,
}

impl CohomologyReport {
    pub fn dims(&self, p: usize) -> Vec<usize> {
        let mut r: Vec<&SliceRecord> = self.records.iter().filter(|x| x.p == p).collect();
        r.sort_by_key(|x| x.energy);
        r.iter().map(|x| x.dim).collect()
    }

    pub fn get(&self, p: usize, energy: u32) -> Option<&SliceRecord> {
        self.records.iter().find(|r| r.p == p && r.energy == energy)
    }
}

/// Per-degree data of one energy slice, restricted to weight zero.
struct Degrees {
    /// Dimension of the invariant part.
    inv: Vec<usize>,
    /// Dimension of invariant cocycles.
    cyc: Vec<usize>,
}

impl<'a> Complex<'a, Q> {
    fn degrees(&self, p_max: usize, energy: u32) -> Result<Degrees> {
        let zero = vec![0; self.rep.alg.rank];
        let mut inv = Vec::new();
        let mut cyc = Vec::new();
        let mut cells: Vec<Cell> = self.cells(0, energy, Some(&zero));
        for p in 0..=p_max {
            let next = self.cells(p + 1, energy, Some(&zero));
            let d = self.matrix(&cells, &next, |c| self.d_cell(c))?;
            if self.pair == Pair::LoopRelative {
                let e = self.raising_stack(p, energy, &cells)?;
                let re = rank(&e)?;
                let rz = rank(&SparseMatrix::vstack(&[&d, &e])?)?;
                inv.push(cells.len() - re);
                cyc.push(cells.len() - rz);
            } else {
                let rd = rank(&d)?;
                inv.push(cells.len());
                cyc.push(cells.len() - rd);
            }
            cells = next;
        }
        Ok(Degrees { inv, cyc })
    }

    /// Cohomology of the weight-zero (invariant) part, degrees `0..=p_max`,
    /// one energy slice.
    pub fn cohomology_slice(&self, p_max: usize, energy: u32) -> Result<Vec<SliceRecord>> {
        let deg = self.degrees(p_max, energy)?;
        let zero = vec![0; self.rep.alg.rank];
        let mut out = Vec::new();
        for p in 0..=p_max {
            let b = if p == 0 { 0 } else { deg.inv[p - 1] - deg.cyc[p - 1] };
            out.push(SliceRecord {
                pair: self.pair.label().to_string(),
                module: self.rep.tag().to_string(),
                p,
                energy,
                weight: zero.clone(),
                dim_cochains: deg.inv[p],
                rank_in: b,
                rank_out: deg.inv[p] - deg.cyc[p],
                dim: deg.cyc[p] - b,
            });
        }
        Ok(out)
    }

    pub fn cohomology(&self, p_max: usize, energies: impl IntoIterator<Item = u32>) -> Result<CohomologyReport> {
        let mut records = Vec::new();
        for e in energies {
            records.extend(self.cohomology_slice(p_max, e)?);
        }
        records.sort_by_key(|r| (r.energy, r.p));
        Ok(CohomologyReport { records })
    }

    /// Dimension of `H^p` of the full (non-invariant) complex in one weight.
    pub fn weight_space_dim(&self, p: usize, energy: u32, weight: &[i32]) -> Result<usize> {
        let c = self.cells(p, energy, Some(weight));
        let out = rank(&self.differential(p, energy, Some(weight))?)?;
        let inn = if p == 0 { 0 } else { rank(&self.differential(p - 1, energy, Some(weight))?)? };
        Ok(c.len() - out - inn)
    }

    /// Multiplicity of the trivial representation in `H^p` of the full
    /// complex: `Σ_w ε(w) dim H^p_{ρ - wρ}`.
    pub fn trivial_multiplicity(&self, p: usize, energy: u32) -> Result<i64> {
        let mut total = 0i64;
        for (mu, sign) in weyl_shifts(&self.rep.alg) {
            total += sign * self.weight_space_dim(p, energy, &mu)? as i64;
        }
        Ok(total)
    }

    /// Coboundary oracle of the weight-zero slice `(p, energy)`.
    pub fn coboundaries(&self, p: usize, energy: u32) -> Result<Coboundaries> {
        let zero = vec![0; self.rep.alg.rank];
        let cells = self.cells(p, energy, Some(&zero));
        let prev_d = if p == 0 {
            SparseMatrixQ::zeros(cells.len(), 0)
        } else {
            let prev = self.cells(p - 1, energy, Some(&zero));
            self.matrix(&prev, &cells, |c| self.d_cell(c))?
        };
        let r = rank(&prev_d)?;
        Ok(Coboundaries { cells, matrix: prev_d, rank: r })
    }

    /// Exact invariant cocycles spanning a complement of the coboundaries in
    /// degree `p`, together with the coboundary oracle of that degree.
    pub fn representatives(&self, p: usize, energy: u32) -> Result<Representatives> {
        let zero = vec![0; self.rep.alg.rank];
        let cells = self.cells(p, energy, Some(&zero));
        let next = self.cells(p + 1, energy, Some(&zero));
        let d = self.matrix(&cells, &next, |c| self.d_cell(c))?;
        let cocycles = if self.pair == Pair::LoopRelative {
            let e = self.raising_stack(p, energy, &cells)?;
            kernel_basis(&SparseMatrix::vstack(&[&d, &e])?)
        } else {
            kernel_basis(&d)
        };
        let prev_d = if p == 0 {
            SparseMatrixQ::zeros(cells.len(), 0)
        } else {
            let prev = self.cells(p - 1, energy, Some(&zero));
            self.matrix(&prev, &cells, |c| self.d_cell(c))?
        };
        let oracle = ImageOracle::new(&prev_d);
        // Seeded with coboundaries so only new classes survive.
        let mut ech = Echelon::new();
        for col in prev_d.columns() {
            ech.insert(col);
        }
        let mut reps = Vec::new();
        for z in cocycles {
            if ech.insert(&z).is_none() {
                reps.push(z);
            }
        }
        Ok(Representatives { cells, reps, oracle })
    }
}

/// Image of `d` into one weight-zero slice, for membership queries.
///
/// Membership is decided by `rank [D | v] = rank D` through the same rank
/// routine as the cohomology dimensions; `witness` solves exactly.
pub struct Coboundaries {
    pub cells: Vec<Cell>,
    pub matrix: SparseMatrixQ,
    pub rank: usize,
}

impl Coboundaries {
    pub fn to_vec(&self, c: &Cochain<Q>) -> Result<SVec> {
        cells_to_vec(&self.cells, c)
    }

    pub fn is_coboundary(&self, c: &Cochain<Q>) -> Result<bool> {
        let v = self.to_vec(c)?;
        if v.is_empty() {
            return Ok(true);
        }
        let col = SparseMatrix::from_columns(self.cells.len(), vec![v]);
        Ok(rank(&SparseMatrix::hstack(&[&self.matrix, &col])?)? == self.rank)
    }

    pub fn witness(&self, c: &Cochain<Q>) -> Result<Option<SVec>> {
        crate::linalg::in_image(&self.matrix, &self.to_vec(c)?)
    }
}

fn cells_to_vec(cells: &[Cell], c: &Cochain<Q>) -> Result<SVec> {
    let index: HashMap<&Cell, usize> = cells.iter().enumerate().map(|(i, c)| (c, i)).collect();
    let mut v = Vec::new();
    for (cell, x) in c {
        let i = index
            .get(cell)
            .ok_or_else(|| Error::SliceMismatch(format!("cell {cell:?} outside the slice")))?;
        v.push((*i, x.clone()));
    }
    v.sort_by_key(|e| e.0);
    Ok(v)
}

/// Representative cocycles of one slice, as vectors over `cells`.
pub struct Representatives {
    pub cells: Vec<Cell>,
    pub reps: Vec<SVec>,
    pub oracle: ImageOracle,
}

impl Representatives {
    pub fn to_cochain(&self, v: &[(usize, Q)]) -> Cochain<Q> {
        v.iter().map(|(i, x)| (self.cells[*i].clone(), x.clone())).collect()
    }

    pub fn to_vec(&self, c: &Cochain<Q>) -> Result<SVec> {
        cells_to_vec(&self.cells, c)
    }

    pub fn is_coboundary(&self, c: &Cochain<Q>) -> Result<bool> {
        Ok(self.oracle.witness(&self.to_vec(c)?)?.is_some())
    }
}

/// `(ρ - wρ, ε(w))` over the Weyl group, from the regular orbit of ρ.
pub fn weyl_shifts(alg: &crate::algebra::SimpleLieAlgebra) -> Vec<(Vec<i32>, i64)> {
    let rho = vec![1; alg.rank];
    let alphas: Vec<&Vec<i32>> = alg.e.iter().map(|&e| &alg.weights[e]).collect();
    let mut seen: BTreeMap<Vec<i32>, i64> = BTreeMap::from([(rho.clone(), 1)]);
    let mut frontier = vec![rho.clone()];
    while let Some(mu) = frontier.pop() {
        let s = seen[&mu];
        for (i, a) in alphas.iter().enumerate() {
            let nu: Vec<i32> = mu.iter().zip(a.iter()).map(|(m, x)| m - mu[i] * x).collect();
            if !seen.contains_key(&nu) {
                seen.insert(nu.clone(), -s);
                frontier.push(nu);
            }
        }
    }
    let mut out: Vec<(Vec<i32>, i64)> =
        seen.into_iter().map(|(w, s)| (rho.iter().zip(&w).map(|(r, x)| r - x).collect(), s)).collect();
    out.sort();
    out
}

/// `d` applied twice on a cell list, as a check of the sign conventions.
pub fn d_squared_vanishes<C: Coeff>(cx: &Complex<'_, C>, cells: &[Cell]) -> bool {
    cells.iter().all(|c| cx.d(&cx.d_cell(c)).is_empty())
}

/// Cochain whose only cell is `c`.
pub fn unit_cochain(c: Cell) -> Cochain<Q> {
    Cochain::from([(c, q(1))])
}
