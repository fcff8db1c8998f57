//! Vertex superalgebra structure on the absolute Chevalley complex of the
//! vacuum module, together with the homotopy operations `Z_(m)`.
//!
//! States are cochains of the absolute complex. The dual mode `ξ[a,k]`
//! plays the role of `ψ*_{a,-k}`, so `T ξ[a,k] = (k+1) ξ[a,k+1]` and the
//! single-mode state `J^a_{-1-r} v` equals `T^{(r)} J^a_{-1} v`, where
//! `T^{(r)} = T^r / r!`.
//!
//! Field modes are computed by recursion on the leftmost creation mode:
//! `(x_(-1) B)_(n) = Σ_{j≥0} x_(-1-j) B_(n+j) + Σ_{j≥0} B_(n-j-1) x_(j)`,
//! with `(J^a_{-1-r} v)_(j) = binom(r-j-1, r) J^a_{j-r}`. A pure exterior
//! state acts by multiplication with `T^{(r)} ω` for `n = -1-r`.
//!
//! Sign conventions for the odd operations `Z_(m)`: Koszul signs with `Z`
//! placed on the left, i.e.
//! `Z_(m)(A,B) = (-1)^{p(A)p(B)} Σ_{n≥0} (-1)^{m+n+1} T^{(n)} Z_(m+n)(B,A)`,
//! `Z_(m)(T^{(r)}A,B) = (-1)^r binom(m,r) Z_(m-r)(A,B)`,
//! `Z_(m)(A,TB) = T Z_(m)(A,B) + m Z_(m-1)(A,B)` and
//! `Z_(m)(A, b_(-1)C) = Z_(m)(A,b)_(-1)C + (-1)^{(p(A)+1)p(b)} b_(-1)Z_(m)(A,C)
//!   + Σ_{j<m} binom(m,j) Z_(j)(A,b)_(m-1-j) C`.
//! With these, `d Z + Z(d·,·) + (-1)^{p(A)} Z(·,d·) = Y_(m)` holds on all
//! pairs of single-factor states. On composite states it does not hold in
//! general: the Leibniz rule is not compatible with the commutation relations
//! of the currents once `[g, g] ≠ 0` (see `z_leibniz_defect`).

use std::cell::RefCell;
use std::collections::HashMap;
use std::rc::Rc;

use num_traits::{One, Zero};

use crate::chevalley::{cochain_add, cochain_axpy, wedge_sort, Cell, Cochain, Complex, Pair};
use crate::error::{Error, Result};
use crate::loop_rep::{Family, Flavor, Mode, Rep};
use crate::rational::{binom, q, qf, Q};

/// A homogeneous state: a cochain of fixed parity and energy.
#[derive(Clone, Debug, PartialEq)]
pub struct VertexState {
    pub cochain: Cochain<Q>,
    pub parity: usize,
    pub energy: i32,
}

impl VertexState {
    pub fn new(cochain: Cochain<Q>) -> Result<Self> {
        let mut it = cochain.keys();
        let Some(first) = it.next() else {
            return Ok(VertexState { cochain, parity: 0, energy: 0 });
        };
        let (p, e) = (first.parity(), first.energy());
        if it.any(|c| c.parity() != p || c.energy() != e) {
            return Err(Error::SliceMismatch("state is not homogeneous".into()));
        }
        Ok(VertexState { cochain, parity: p, energy: e })
    }

    pub fn cell(c: Cell) -> Self {
        let (p, e) = (c.parity(), c.energy());
        VertexState { cochain: Cochain::from([(c, q(1))]), parity: p, energy: e }
    }
}

/// The endomorphism `A_(n)`.
#[derive(Clone, Debug)]
pub struct FieldMode {
    pub state: VertexState,
    pub n: i32,
}

type ModeKey = (Cell, i32, Cell);
type ZKey = (Cell, Cell, u32);

pub struct VertexAlgebra<'a> {
    pub cx: Complex<'a, Q>,
    /// Largest energy any intermediate term may reach.
    pub window: u32,
    /// Value of `Z_(0)(J^a_{-1} v, ψ*_{a,0})`.
    pub z_constant: Q,
    modes: RefCell<HashMap<ModeKey, Rc<Cochain<Q>>>>,
    zs: RefCell<HashMap<ZKey, Rc<Cochain<Q>>>>,
}

fn cell_size(c: &Cell) -> usize {
    c.mono.len() + c.wedge.len()
}

/// Splits a state with at least two factors as `b_(-1) C`, `b` a single factor.
fn split_first(c: &Cell) -> (Cell, Cell) {
    if let Some((x, rest)) = c.mono.split_first() {
        (Cell::new(Vec::new(), vec![*x]), Cell::new(c.wedge.clone(), rest.to_vec()))
    } else {
        (Cell::new(vec![c.wedge[0]], Vec::new()), Cell::new(c.wedge[1..].to_vec(), Vec::new()))
    }
}

/// For a single-factor state `T^{(r)} g`, returns `(r, g)`.
fn single_to_generator(c: &Cell) -> (i32, Cell) {
    if let Some(x) = c.mono.first() {
        (-x.n - 1, Cell::new(Vec::new(), vec![Mode::new(x.idx(), -1)]))
    } else {
        let x = c.wedge[0];
        (x.n, Cell::new(vec![Mode::new(x.idx(), 0)], Vec::new()))
    }
}

/// `T^{(r-1)} g` for a single-factor state `T^{(r)} g`, `r ≥ 1`.
fn lower_single(c: &Cell) -> Cell {
    if let Some(x) = c.mono.first() {
        Cell::new(Vec::new(), vec![Mode::new(x.idx(), x.n + 1)])
    } else {
        let x = c.wedge[0];
        Cell::new(vec![Mode::new(x.idx(), x.n - 1)], Vec::new())
    }
}

fn parity_sign(odd: bool) -> Q {
    if odd {
        q(-1)
    } else {
        q(1)
    }
}

impl<'a> VertexAlgebra<'a> {
    pub fn new(rep: &'a Rep<Q>, window: u32) -> Result<Self> {
        if rep.family != Family::Vacuum || rep.flavor != Flavor::Quantum {
            return Err(Error::Config("the vertex layer needs a quantum vacuum module".into()));
        }
        Ok(VertexAlgebra {
            cx: Complex::new(rep, Pair::Absolute)?,
            window,
            z_constant: qf(1, 2),
            modes: RefCell::new(HashMap::new()),
            zs: RefCell::new(HashMap::new()),
        })
    }

    pub fn with_z_constant(mut self, c: Q) -> Self {
        self.z_constant = c;
        self
    }

    fn rep(&self) -> &Rep<Q> {
        self.cx.rep
    }

    fn check_window(&self, energy: i32) -> Result<()> {
        if energy > self.window as i32 {
            return Err(Error::WindowOverflow { energy: energy as i64, bound: self.window as i64 });
        }
        Ok(())
    }

    /// `J_x` acting on the module factor of a cell.
    fn act_mode(&self, x: Mode, w: &Cell) -> Cochain<Q> {
        let mut out = Cochain::new();
        for (m, c) in self.rep().act(x, &w.mono) {
            cochain_add(&mut out, Cell::new(w.wedge.clone(), m), &c);
        }
        out
    }

    /// `x_(j)` for the single-mode state `x = J^a_{-1-r} v`, on a cochain.
    fn single_mode(&self, x: Mode, j: i32, w: &Cochain<Q>) -> Cochain<Q> {
        let r = (-x.n - 1) as i64;
        let c = binom(r - j as i64 - 1, r);
        let mut out = Cochain::new();
        if c.is_zero() {
            return out;
        }
        let mode = Mode::new(x.idx(), j - r as i32);
        for (cell, v) in w {
            cochain_axpy(&mut out, &(&c * v), &self.act_mode(mode, cell));
        }
        out
    }

    /// `A_(n) w` on basis cells.
    pub fn field_mode_cell(&self, a: &Cell, n: i32, w: &Cell) -> Result<Rc<Cochain<Q>>> {
        let out_energy = a.energy() + w.energy() - n - 1;
        if out_energy < 0 {
            return Ok(Rc::new(Cochain::new()));
        }
        self.check_window(out_energy)?;
        let key = (a.clone(), n, w.clone());
        if let Some(r) = self.modes.borrow().get(&key) {
            return Ok(r.clone());
        }
        let r = Rc::new(self.field_mode_uncached(a, n, w)?);
        self.modes.borrow_mut().insert(key, r.clone());
        Ok(r)
    }

    fn field_mode_uncached(&self, a: &Cell, n: i32, w: &Cell) -> Result<Cochain<Q>> {
        let mut out = Cochain::new();
        let Some((&x, rest)) = a.mono.split_first() else {
            if n >= 0 {
                return Ok(out);
            }
            let r = (-n - 1) as u32;
            let omega = Cochain::from([(Cell::new(a.wedge.clone(), Vec::new()), q(1))]);
            for (c, v) in self.translate_divided(&omega, r) {
                let mut list = c.wedge.clone();
                list.extend_from_slice(&w.wedge);
                if let Some((wedge, odd)) = wedge_sort(list) {
                    cochain_add(&mut out, Cell::new(wedge, w.mono.clone()), &(v * parity_sign(odd)));
                }
            }
            return Ok(out);
        };
        let b = Cell::new(a.wedge.clone(), rest.to_vec());
        let (eb, ew) = (b.energy(), w.energy());
        // Σ_j x_(-1-j) B_(n+j) w
        for j in 0..=(eb + ew - n - 1).max(-1) {
            let inner = self.field_mode_cell(&b, n + j, w)?;
            if inner.is_empty() {
                continue;
            }
            cochain_axpy(&mut out, &q(1), &self.single_mode(x, -1 - j, &inner));
        }
        // Σ_j B_(n-j-1) x_(j) w
        let r = -x.n - 1;
        let unit = Cochain::from([(w.clone(), q(1))]);
        for j in 0..=(ew + r) {
            let xw = self.single_mode(x, j, &unit);
            for (c, v) in &xw {
                self.check_window(c.energy())?;
                let t = self.field_mode_cell(&b, n - j - 1, c)?;
                cochain_axpy(&mut out, v, &t);
            }
        }
        Ok(out)
    }

    /// `A_(n) w`, bilinear in `A` and `w`.
    pub fn field_mode(&self, a: &Cochain<Q>, n: i32, w: &Cochain<Q>) -> Result<Cochain<Q>> {
        let mut out = Cochain::new();
        for (ca, va) in a {
            for (cw, vw) in w {
                let t = self.field_mode_cell(ca, n, cw)?;
                cochain_axpy(&mut out, &(va * vw), &t);
            }
        }
        Ok(out)
    }

    pub fn apply(&self, f: &FieldMode, w: &Cochain<Q>) -> Result<Cochain<Q>> {
        self.field_mode(&f.state.cochain, f.n, w)
    }

    /// `A_(-1) B`.
    pub fn cup(&self, a: &Cochain<Q>, b: &Cochain<Q>) -> Result<Cochain<Q>> {
        self.field_mode(a, -1, b)
    }

    /// `Y_(m)(A,B)`: `A_(m) B` for `m ≥ 0`, zero otherwise.
    pub fn y_m(&self, a: &Cochain<Q>, b: &Cochain<Q>, m: i32) -> Result<Cochain<Q>> {
        if m < 0 {
            return Ok(Cochain::new());
        }
        self.field_mode(a, m, b)
    }

    fn translate_cell(&self, c: &Cell) -> Cochain<Q> {
        let mut out = Cochain::new();
        for (k, x) in c.wedge.iter().enumerate() {
            let mut list = c.wedge.clone();
            list[k] = Mode::new(x.idx(), x.n + 1);
            if let Some((w, odd)) = wedge_sort(list) {
                cochain_add(&mut out, Cell::new(w, c.mono.clone()), &(q(x.n as i64 + 1) * parity_sign(odd)));
            }
        }
        for (m, v) in self.translate_mono(&c.mono) {
            cochain_add(&mut out, Cell::new(c.wedge.clone(), m), &v);
        }
        out
    }

    /// `T` on the module factor: `T v = 0`, `[T, J_n] = -n J_{n-1}`.
    fn translate_mono(&self, mono: &[Mode]) -> crate::loop_rep::Elem<Q> {
        let mut out = crate::loop_rep::Elem::new();
        let Some((&y, rest)) = mono.split_first() else { return out };
        let shifted = Mode::new(y.idx(), y.n - 1);
        let c = q(-(y.n as i64));
        crate::loop_rep::elem_axpy(&mut out, &c, &self.rep().act(shifted, rest));
        let tr = self.translate_mono(rest);
        crate::loop_rep::elem_axpy(&mut out, &q(1), &self.rep().act_elem(y, &tr));
        out
    }

    pub fn translate(&self, v: &Cochain<Q>) -> Cochain<Q> {
        let mut out = Cochain::new();
        for (c, x) in v {
            cochain_axpy(&mut out, x, &self.translate_cell(c));
        }
        out
    }

    /// `T^{(r)} = T^r / r!`.
    pub fn translate_divided(&self, v: &Cochain<Q>, r: u32) -> Cochain<Q> {
        let mut cur = v.clone();
        for i in 1..=r {
            cur = self.translate(&cur);
            let inv = qf(1, i as i64);
            cur.values_mut().for_each(|x| *x = &*x * &inv);
        }
        cur
    }

    pub fn d(&self, v: &Cochain<Q>) -> Cochain<Q> {
        self.cx.d(v)
    }

    /// `Z_(m)(A,B)` on basis cells.
    pub fn z_cell(&self, a: &Cell, b: &Cell, m: u32) -> Result<Rc<Cochain<Q>>> {
        let e = a.energy() + b.energy() - m as i32 - 1;
        if e < 0 || a.degree() + b.degree() == 0 || cell_size(a) == 0 || cell_size(b) == 0 {
            return Ok(Rc::new(Cochain::new()));
        }
        self.check_window(a.energy() + b.energy())?;
        let key = (a.clone(), b.clone(), m);
        if let Some(r) = self.zs.borrow().get(&key) {
            return Ok(r.clone());
        }
        let r = Rc::new(self.z_uncached(a, b, m)?);
        self.zs.borrow_mut().insert(key, r.clone());
        Ok(r)
    }

    fn z_uncached(&self, a: &Cell, b: &Cell, m: u32) -> Result<Cochain<Q>> {
        let mut out = Cochain::new();
        if cell_size(b) >= 2 {
            let (bh, c) = split_first(b);
            let cc = Cochain::from([(c.clone(), q(1))]);
            let bhc = Cochain::from([(bh.clone(), q(1))]);
            let zab = self.z_cell(a, &bh, m)?;
            cochain_axpy(&mut out, &q(1), &self.field_mode(&zab, -1, &cc)?);
            let s = parity_sign((a.parity() + 1) * bh.parity() % 2 == 1);
            let zac = self.z_cell(a, &c, m)?;
            cochain_axpy(&mut out, &s, &self.field_mode(&bhc, -1, &zac)?);
            for j in 0..m {
                let zj = self.z_cell(a, &bh, j)?;
                let t = self.field_mode(&zj, (m - 1 - j) as i32, &cc)?;
                cochain_axpy(&mut out, &binom(m as i64, j as i64), &t);
            }
            return Ok(out);
        }
        if cell_size(a) >= 2 {
            let sigma = parity_sign(a.parity() * b.parity() == 1);
            let top = a.energy() + b.energy() - 1;
            for n in 0..=(top - m as i32).max(-1) {
                let z = self.z_cell(b, a, m + n as u32)?;
                let t = self.translate_divided(&z, n as u32);
                let s = &sigma * parity_sign((m as i32 + n + 1) % 2 == 1);
                cochain_axpy(&mut out, &s, &t);
            }
            return Ok(out);
        }
        let (r, g1) = single_to_generator(a);
        if r > 0 {
            if (m as i32) < r {
                return Ok(out);
            }
            let c = parity_sign(r % 2 == 1) * binom(m as i64, r as i64);
            let z = self.z_cell(&g1, b, m - r as u32)?;
            cochain_axpy(&mut out, &c, &z);
            return Ok(out);
        }
        let (s, g2) = single_to_generator(b);
        if s > 0 {
            let lower = lower_single(b);
            let inv = qf(1, s as i64);
            let z = self.z_cell(&g1, &lower, m)?;
            cochain_axpy(&mut out, &inv, &self.translate(&z));
            if m >= 1 {
                let z1 = self.z_cell(&g1, &lower, m - 1)?;
                cochain_axpy(&mut out, &(&inv * q(m as i64)), &z1);
            }
            return Ok(out);
        }
        // Generator values.
        if m == 0 {
            let (ja, xb) = match (g1.mono.first(), g2.wedge.first(), g1.wedge.first(), g2.mono.first()) {
                (Some(j), Some(x), _, _) => (Some((j.idx(), x.idx())), q(1)),
                (_, _, Some(x), Some(j)) => (Some((j.idx(), x.idx())), q(-1)),
                _ => (None, q(0)),
            };
            if let Some((ia, ib)) = ja {
                if ia == ib {
                    cochain_add(&mut out, Cell::vacuum(), &(&xb * &self.z_constant));
                }
            }
        }
        Ok(out)
    }

    pub fn z_m(&self, a: &Cochain<Q>, b: &Cochain<Q>, m: u32) -> Result<Cochain<Q>> {
        let mut out = Cochain::new();
        for (ca, va) in a {
            for (cb, vb) in b {
                let t = self.z_cell(ca, cb, m)?;
                cochain_axpy(&mut out, &(va * vb), &t);
            }
        }
        Ok(out)
    }

    /// `d Z(A,B) + ε Z(dA,B) + (-1)^{p(A)} Z(A,dB) - Y(A,B)` for cells, where
    /// `ε = +1` is the identity we establish and `ε = -1` the alternative.
    pub fn homotopy_defect(&self, a: &Cell, b: &Cell, m: u32, eps: i64) -> Result<Cochain<Q>> {
        let ua = Cochain::from([(a.clone(), q(1))]);
        let ub = Cochain::from([(b.clone(), q(1))]);
        let mut out = self.d(&self.z_m(&ua, &ub, m)?);
        cochain_axpy(&mut out, &q(eps), &self.z_m(&self.d(&ua), &ub, m)?);
        let s = parity_sign(a.parity() == 1);
        cochain_axpy(&mut out, &s, &self.z_m(&ua, &self.d(&ub), m)?);
        cochain_axpy(&mut out, &q(-1), &self.y_m(&ua, &ub, m as i32)?);
        Ok(out)
    }

    /// `d(A_(n) w) - (-1)^{p(A)} A_(n) dw - (dA)_(n) w`.
    pub fn dg_defect(&self, a: &Cell, n: i32, w: &Cell) -> Result<Cochain<Q>> {
        let ua = Cochain::from([(a.clone(), q(1))]);
        let uw = Cochain::from([(w.clone(), q(1))]);
        let mut out = self.d(&self.field_mode(&ua, n, &uw)?);
        let s = -parity_sign(a.parity() == 1);
        cochain_axpy(&mut out, &s, &self.field_mode(&ua, n, &self.d(&uw))?);
        cochain_axpy(&mut out, &q(-1), &self.field_mode(&self.d(&ua), n, &uw)?);
        Ok(out)
    }

    /// All cells of the absolute complex up to the given energy and degree.
    pub fn states(&self, max_energy: u32, max_degree: usize) -> Vec<Cell> {
        let mut v = Vec::new();
        for e in 0..=max_energy {
            for p in 0..=max_degree {
                v.extend(self.cx.cells(p, e, None));
            }
        }
        v
    }

    /// Vacuum axiom `A_(-1) 1 = A` and `A_(n) 1 = 0` for `n ≥ 0`, on a cell.
    pub fn vacuum_axiom_holds(&self, a: &Cell) -> Result<bool> {
        let vac = Cell::vacuum();
        let unit = self.field_mode_cell(a, -1, &vac)?;
        let ok = *unit == Cochain::from([(a.clone(), q(1))]);
        let mut zero = true;
        for n in 0..=a.energy() + 1 {
            zero &= self.field_mode_cell(a, n, &vac)?.is_empty();
        }
        Ok(ok && zero)
    }

    /// `[ψ_{a,n}, ψ*_{b,m}]_+ - δ_{ab} δ_{n,-m}` on a cell, with `ψ*_{b,m}`
    /// realized as the field mode `(ψ*_{b,0})_(m-1)`.
    pub fn clifford_defect(&self, a: usize, n: i32, b: usize, m: i32, w: &Cell) -> Result<Cochain<Q>> {
        let star = Cell::new(vec![Mode::new(b, 0)], Vec::new());
        let contract = |v: &Cochain<Q>| -> Cochain<Q> {
            let mut out = Cochain::new();
            for (c, x) in v {
                if let Some((wd, odd)) = crate::chevalley::psi(Mode::new(a, n), &c.wedge) {
                    cochain_add(&mut out, Cell::new(wd, c.mono.clone()), &(x * parity_sign(odd)));
                }
            }
            out
        };
        let uw = Cochain::from([(w.clone(), q(1))]);
        let unit_star = Cochain::from([(star, q(1))]);
        let mut out = contract(&self.field_mode(&unit_star, m - 1, &uw)?);
        let t = self.field_mode(&unit_star, m - 1, &contract(&uw))?;
        cochain_axpy(&mut out, &q(1), &t);
        if a == b && n == -m {
            cochain_axpy(&mut out, &q(-1), &uw);
        }
        Ok(out)
    }

    /// `A_(-1)B - (-1)^{p(A)p(B)} B_(-1)A`.
    pub fn skew_commutator(&self, a: &VertexState, b: &VertexState) -> Result<Cochain<Q>> {
        let mut out = self.cup(&a.cochain, &b.cochain)?;
        let s = -parity_sign(a.parity * b.parity == 1);
        cochain_axpy(&mut out, &s, &self.cup(&b.cochain, &a.cochain)?);
        Ok(out)
    }

    /// Top PBW-degree part of a cochain.
    pub fn symbol(v: &Cochain<Q>) -> Cochain<Q> {
        let top = v.keys().map(|c| c.mono.len()).max().unwrap_or(0);
        v.iter().filter(|(c, _)| c.mono.len() == top).map(|(c, x)| (c.clone(), x.clone())).collect()
    }

    /// Product in the classical algebra `Sym ⊗ Λ`.
    pub fn classical_product(a: &Cochain<Q>, b: &Cochain<Q>) -> Cochain<Q> {
        let mut out = Cochain::new();
        for (ca, va) in a {
            for (cb, vb) in b {
                let mut list = ca.wedge.clone();
                list.extend_from_slice(&cb.wedge);
                let Some((w, odd)) = wedge_sort(list) else { continue };
                let mut m = ca.mono.clone();
                m.extend_from_slice(&cb.mono);
                m.sort();
                cochain_add(&mut out, Cell::new(w, m), &(va * vb * parity_sign(odd)));
            }
        }
        out
    }

    pub fn clear_caches(&self) {
        self.modes.borrow_mut().clear();
        self.zs.borrow_mut().clear();
    }
}

/// `Z_(m)(A, X_(-1)C)` minus the Leibniz expansion, for an arbitrary first
/// factor `X` (the recursion only uses the leftmost factor of a basis cell).
pub fn z_leibniz_defect(va: &VertexAlgebra<'_>, a: &Cell, x: &Cell, c: &Cell, m: u32) -> Result<Cochain<Q>> {
    let (ua, ux, uc) = (
        Cochain::from([(a.clone(), q(1))]),
        Cochain::from([(x.clone(), q(1))]),
        Cochain::from([(c.clone(), q(1))]),
    );
    let mut out = va.z_m(&ua, &va.cup(&ux, &uc)?, m)?;
    cochain_axpy(&mut out, &q(-1), &va.cup(&va.z_m(&ua, &ux, m)?, &uc)?);
    let s = -parity_sign((a.parity() + 1) * x.parity() % 2 == 1);
    cochain_axpy(&mut out, &s, &va.cup(&ux, &va.z_m(&ua, &uc, m)?)?);
    for j in 0..m {
        let t = va.field_mode(&va.z_m(&ua, &ux, j)?, (m - 1 - j) as i32, &uc)?;
        cochain_axpy(&mut out, &-binom(m as i64, j as i64), &t);
    }
    Ok(out)
}

/// `Y_(m)(TA,B) + m Y_(m-1)(A,B)` (the translation rule in standard form).
pub fn translation_defect(va: &VertexAlgebra<'_>, a: &Cochain<Q>, b: &Cochain<Q>, m: i32) -> Result<Cochain<Q>> {
    let mut out = va.y_m(&va.translate(a), b, m)?;
    cochain_axpy(&mut out, &q(m as i64), &va.y_m(a, b, m - 1)?);
    Ok(out)
}

/// Standard skew-symmetry defect
/// `Y_(m)(A,B) - (-1)^{p(A)p(B)} Σ_{n≥0} (-1)^{m+n+1} T^{(n)} Y_(m+n)(B,A)`.
pub fn skew_symmetry_defect(va: &VertexAlgebra<'_>, a: &VertexState, b: &VertexState, m: i32) -> Result<Cochain<Q>> {
    let mut out = va.y_m(&a.cochain, &b.cochain, m)?;
    let sigma = parity_sign(a.parity * b.parity == 1);
    let top = a.energy + b.energy - 1;
    for n in 0..=(top - m).max(-1) {
        let t = va.translate_divided(&va.y_m(&b.cochain, &a.cochain, m + n)?, n as u32);
        let s = -(&sigma * parity_sign((m + n + 1) % 2 == 1));
        cochain_axpy(&mut out, &s, &t);
    }
    Ok(out)
}

/// Commutator-formula defect for `Y_(m)(A, B_(-1)C)`:
/// `(A_(m)B)_(-1)C + (-1)^{p(A)p(B)} B_(-1)A_(m)C + Σ_{j<m} binom(m,j)(A_(j)B)_(m-1-j)C`.
pub fn leibniz_defect(
    va: &VertexAlgebra<'_>,
    a: &VertexState,
    b: &VertexState,
    c: &Cochain<Q>,
    m: i32,
) -> Result<Cochain<Q>> {
    let bc = va.cup(&b.cochain, c)?;
    let mut out = va.y_m(&a.cochain, &bc, m)?;
    let ab = va.y_m(&a.cochain, &b.cochain, m)?;
    cochain_axpy(&mut out, &q(-1), &va.cup(&ab, c)?);
    let s = -parity_sign(a.parity * b.parity == 1);
    cochain_axpy(&mut out, &s, &va.cup(&b.cochain, &va.y_m(&a.cochain, c, m)?)?);
    for j in 0..m {
        let t = va.field_mode(&va.y_m(&a.cochain, &b.cochain, j)?, m - 1 - j, c)?;
        cochain_axpy(&mut out, &-binom(m as i64, j as i64), &t);
    }
    Ok(out)
}

/// Whether every coefficient is zero.
pub fn vanishes(v: &Cochain<Q>) -> bool {
    v.values().all(|x| x.is_zero())
}

/// Generators `J^a_{-1} v` and `ψ*_{a,0}` of the complex.
pub fn generators(dim: usize) -> Vec<Cell> {
    let mut v: Vec<Cell> = (0..dim).map(|a| Cell::new(Vec::new(), vec![Mode::new(a, -1)])).collect();
    v.extend((0..dim).map(|a| Cell::new(vec![Mode::new(a, 0)], Vec::new())));
    v
}

/// Value of `Z_(0)(J^a_{-1}v, ψ*_{a,0})` forced by the homotopy identity on
/// generator pairs; `None` if no single value works.
pub fn solve_z_constant(rep: &Rep<Q>, window: u32) -> Result<Option<Q>> {
    // The defect is affine in the constant: D(c) = D(0) + c (D(1) - D(0)).
    let base = VertexAlgebra::new(rep, window)?.with_z_constant(Q::zero());
    let unit = VertexAlgebra::new(rep, window)?.with_z_constant(Q::one());
    let gens = generators(rep.alg.dim);
    let mut candidate: Option<Q> = None;
    for a in &gens {
        for b in &gens {
            for m in 0..2 {
                let d0 = base.homotopy_defect(a, b, m, 1)?;
                let d1 = unit.homotopy_defect(a, b, m, 1)?;
                let mut keys: Vec<&Cell> = d0.keys().chain(d1.keys()).collect();
                keys.sort();
                keys.dedup();
                for k in keys {
                    let x0 = d0.get(k).cloned().unwrap_or_else(Q::zero);
                    let x1 = d1.get(k).cloned().unwrap_or_else(Q::zero);
                    let slope = &x1 - &x0;
                    if slope.is_zero() {
                        if !x0.is_zero() {
                            return Ok(None);
                        }
                        continue;
                    }
                    let c = -&x0 / slope;
                    match &candidate {
                        Some(prev) if *prev != c => return Ok(None),
                        _ => candidate = Some(c),
                    }
                }
            }
        }
    }
    Ok(candidate)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{build_simple_lie_algebra, FormTag};
    use std::sync::Arc;

    fn critical_sl2() -> Rep<Q> {
        let alg = Arc::new(build_simple_lie_algebra("sl2").unwrap());
        let form = alg.bilinear_form(FormTag::Critical);
        Rep::vacuum(alg, &form)
    }

    fn generic_sl2() -> Rep<Q> {
        let alg = Arc::new(build_simple_lie_algebra("sl2").unwrap());
        let form = alg.bilinear_form(FormTag::Family(q(1)));
        Rep::vacuum(alg, &form)
    }

    #[test]
    fn current_modes_match_module_action() {
        let rep = generic_sl2();
        let va = VertexAlgebra::new(&rep, 6).unwrap();
        for e in 0..=3 {
            for w in va.cx.cells(0, e, None) {
                for a in 0..3 {
                    let j = Cell::new(Vec::new(), vec![Mode::new(a, -1)]);
                    for n in -2..=4 {
                        let lhs = va.field_mode_cell(&j, n, &w).unwrap();
                        let rhs: Cochain<Q> = rep
                            .act(Mode::new(a, n), &w.mono)
                            .into_iter()
                            .map(|(m, c)| (Cell::new(Vec::new(), m), c))
                            .collect();
                        assert_eq!(*lhs, rhs);
                    }
                }
            }
        }
    }

    #[test]
    fn vacuum_axiom_small() {
        let rep = critical_sl2();
        let va = VertexAlgebra::new(&rep, 6).unwrap();
        for a in va.states(2, 2) {
            assert!(va.vacuum_axiom_holds(&a).unwrap(), "{a:?}");
        }
    }

    #[test]
    fn psi_star_fields() {
        let rep = critical_sl2();
        let va = VertexAlgebra::new(&rep, 6).unwrap();
        let x = Cell::new(vec![Mode::new(1, 0)], Vec::new());
        let w = Cell::new(vec![Mode::new(0, 1)], vec![Mode::new(2, -1)]);
        // (ψ*_{h,0})_(-3) multiplies by ξ[h,2].
        let r = va.field_mode_cell(&x, -3, &w).unwrap();
        let expected = Cochain::from([(Cell::new(vec![Mode::new(0, 1), Mode::new(1, 2)], vec![Mode::new(2, -1)]), q(-1))]);
        assert_eq!(*r, expected);
        assert!(va.field_mode_cell(&x, 0, &w).unwrap().is_empty());
    }

    #[test]
    fn translation_is_minus_two_mode() {
        let rep = critical_sl2();
        let va = VertexAlgebra::new(&rep, 6).unwrap();
        for a in va.states(2, 2) {
            let ta = va.translate(&Cochain::from([(a.clone(), q(1))]));
            let via_mode = va.field_mode_cell(&a, -2, &Cell::vacuum()).unwrap();
            assert_eq!(ta, *via_mode, "{a:?}");
        }
    }

    #[test]
    fn window_overflow_is_reported() {
        let rep = critical_sl2();
        let va = VertexAlgebra::new(&rep, 2).unwrap();
        let j = Cell::new(Vec::new(), vec![Mode::new(0, -1)]);
        let w = Cell::new(Vec::new(), vec![Mode::new(2, -2)]);
        assert!(matches!(va.field_mode_cell(&j, -2, &w), Err(Error::WindowOverflow { .. })));
    }

    #[test]
    fn z_generator_values() {
        let rep = critical_sl2();
        let va = VertexAlgebra::new(&rep, 6).unwrap();
        let gens = generators(3);
        for a in &gens {
            for b in &gens {
                let z0 = va.z_cell(a, b, 0).unwrap();
                let j_psi = !a.mono.is_empty() && !b.wedge.is_empty() && a.mono[0].a == b.wedge[0].a;
                let psi_j = !a.wedge.is_empty() && !b.mono.is_empty() && a.wedge[0].a == b.mono[0].a;
                let expected = if j_psi {
                    Cochain::from([(Cell::vacuum(), qf(1, 2))])
                } else if psi_j {
                    Cochain::from([(Cell::vacuum(), qf(-1, 2))])
                } else {
                    Cochain::new()
                };
                assert_eq!(*z0, expected);
                assert!(va.z_cell(a, b, 1).unwrap().is_empty());
            }
        }
    }

    #[test]
    fn homotopy_on_generators_and_sign_choice() {
        let rep = critical_sl2();
        let va = VertexAlgebra::new(&rep, 6).unwrap();
        let mut singles = Vec::new();
        for r in 0..2 {
            for a in 0..3 {
                singles.push(Cell::new(Vec::new(), vec![Mode::new(a, -1 - r)]));
                singles.push(Cell::new(vec![Mode::new(a, r)], Vec::new()));
            }
        }
        let mut alternative_fails = false;
        for a in &singles {
            for b in &singles {
                for m in 0..3 {
                    assert!(va.homotopy_defect(a, b, m, 1).unwrap().is_empty(), "{a:?} {b:?} {m}");
                    alternative_fails |= !va.homotopy_defect(a, b, m, -1).unwrap().is_empty();
                }
            }
        }
        assert!(alternative_fails);
    }

    #[test]
    fn z_constant_is_one_half() {
        let rep = critical_sl2();
        assert_eq!(solve_z_constant(&rep, 6).unwrap(), Some(qf(1, 2)));
    }
}
