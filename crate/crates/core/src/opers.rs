//! Opers on the formal disc: gauge action, canonical forms, residues of
//! opers with regular singularity, and graded-dimension oracles.
//!
//! Series are exact Laurent polynomials; truncation is by energy. A term
//! `t^i·J^a` of the connection has energy `i + ht(a) + 1` and a term
//! `t^i·J^a` of a gauge parameter has energy `i + ht(a)`. The gauge action
//! is homogeneous for energy, so the part of energy `≤ K` of a transform
//! depends only on the parts of energy `≤ K` of its inputs. Operators with
//! regular singularity use `t∂_t` and are truncated `t`-adically instead.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_traits::{One, Zero};
use rand::Rng;
use serde_json::{json, Value};

use crate::algebra::{build_simple_lie_algebra, SimpleLieAlgebra};
use crate::linalg::inverse_dense;
use crate::error::{Error, Result};
use crate::rational::{fmt_q, parse_q, q, qf, Q};

/// Shift of the first canonical coefficient at `t^{-2}` relating the
/// canonical form of an oper with regular singularity to its residue:
/// the residue is conjugate to `p_{-1} + (c_1(0) + 1/4) p_1 + Σ_{j≥2} c_j(0) p_j`.
pub const RESIDUE_SHIFT: (i64, i64) = (1, 4);

pub type Series = BTreeMap<i32, Q>;
type SMat = Vec<Vec<Series>>;

fn ser_add_assign(a: &mut Series, b: &Series, s: &Q) {
    for (k, v) in b {
        let e = a.entry(*k).or_insert_with(Q::zero);
        *e += v * s;
        if e.is_zero() {
            a.remove(k);
        }
    }
}

fn ser_mul(a: &Series, b: &Series) -> Series {
    let mut out = Series::new();
    for (i, x) in a {
        for (j, y) in b {
            let e = out.entry(i + j).or_insert_with(Q::zero);
            *e += x * y;
        }
    }
    out.retain(|_, v| !v.is_zero());
    out
}

fn mat_zero(n: usize) -> SMat {
    vec![vec![Series::new(); n]; n]
}

fn mat_id(n: usize) -> SMat {
    let mut m = mat_zero(n);
    for (i, row) in m.iter_mut().enumerate() {
        row[i].insert(0, Q::one());
    }
    m
}

fn mat_mul(a: &SMat, b: &SMat) -> SMat {
    let n = a.len();
    let mut out = mat_zero(n);
    for i in 0..n {
        for k in 0..n {
            if a[i][k].is_empty() {
                continue;
            }
            for j in 0..n {
                if !b[k][j].is_empty() {
                    let p = ser_mul(&a[i][k], &b[k][j]);
                    ser_add_assign(&mut out[i][j], &p, &Q::one());
                }
            }
        }
    }
    out
}

fn mat_axpy(a: &mut SMat, b: &SMat, s: &Q) {
    for (ra, rb) in a.iter_mut().zip(b) {
        for (x, y) in ra.iter_mut().zip(rb) {
            ser_add_assign(x, y, s);
        }
    }
}

fn mat_is_zero(a: &SMat) -> bool {
    a.iter().flatten().all(Series::is_empty)
}

/// `∂_t` entrywise, or `t∂_t` when `euler` is set.
fn mat_deriv(a: &SMat, euler: bool) -> SMat {
    a.iter()
        .map(|row| {
            row.iter()
                .map(|s| {
                    s.iter()
                        .filter(|(k, _)| **k != 0)
                        .map(|(k, v)| (if euler { *k } else { k - 1 }, v * q(*k as i64)))
                        .collect()
                })
                .collect()
        })
        .collect()
}

/// `exp(x)` for nilpotent `x`.
fn mat_exp(x: &SMat) -> SMat {
    let n = x.len();
    let mut out = mat_id(n);
    let mut pow = mat_id(n);
    let mut fact = Q::one();
    for k in 1..=n {
        pow = mat_mul(&pow, x);
        if mat_is_zero(&pow) {
            break;
        }
        fact *= q(k as i64);
        mat_axpy(&mut out, &pow, &fact.recip());
    }
    out
}

/// `log(g)` for unipotent `g`.
fn mat_log(g: &SMat) -> SMat {
    let n = g.len();
    let mut y = g.clone();
    mat_axpy(&mut y, &mat_id(n), &-Q::one());
    let mut out = mat_zero(n);
    let mut pow = mat_id(n);
    for k in 1..=n {
        pow = mat_mul(&pow, &y);
        if mat_is_zero(&pow) {
            break;
        }
        let s = if k % 2 == 1 { qf(1, k as i64) } else { qf(-1, k as i64) };
        mat_axpy(&mut out, &pow, &s);
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Singularity {
    /// `∂_t + p_{-1} + v(t)`, `v ∈ b[[t]]`.
    Regular,
    /// `∂_t + (p_{-1} + v(t))/t`, `v ∈ b[[t]]`.
    Rs,
    /// `∂_t + p_{-1} + v(t)` with Laurent `v` of nonnegative energy.
    Punctured,
}

impl Singularity {
    pub fn label(&self) -> &'static str {
        match self {
            Singularity::Regular => "regular",
            Singularity::Rs => "RS",
            Singularity::Punctured => "punctured",
        }
    }
}

impl FromStr for Singularity {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "regular" => Ok(Singularity::Regular),
            "RS" | "rs" => Ok(Singularity::Rs),
            "punctured" => Ok(Singularity::Punctured),
            _ => Err(Error::InvalidTag(s.to_string())),
        }
    }
}

/// Coefficients keyed by `(basis index, power of t)`.
pub type Coeffs = BTreeMap<(usize, i32), Q>;

fn coeffs_add(c: &mut Coeffs, key: (usize, i32), v: &Q) {
    let e = c.entry(key).or_insert_with(Q::zero);
    *e += v;
    if e.is_zero() {
        c.remove(&key);
    }
}

fn energy_ok(alg: &SimpleLieAlgebra, kind: Singularity, precision: u32, a: usize, i: i32, gauge: bool) -> bool {
    let ht = alg.heights[a];
    match kind {
        Singularity::Rs => i >= 0 && i < precision as i32,
        Singularity::Regular | Singularity::Punctured => {
            let e = if gauge { i + ht } else { i + ht + 1 };
            let lower = match kind {
                Singularity::Regular => i >= 0,
                _ => e >= 0,
            };
            lower && e <= precision as i32
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct OperRep {
    pub alg: Arc<SimpleLieAlgebra>,
    pub precision: u32,
    pub singularity: Singularity,
    /// `v(t)`; entries on negative root vectors are zero.
    pub v: Coeffs,
}

impl OperRep {
    pub fn new(alg: &Arc<SimpleLieAlgebra>, precision: u32, singularity: Singularity, v: Coeffs) -> Result<Self> {
        let mut out = BTreeMap::new();
        for ((a, i), x) in v {
            if alg.heights[a] < 0 {
                return Err(Error::NotOper(format!("coefficient on {}", alg.labels[a])));
            }
            if !x.is_zero() && energy_ok(alg, singularity, precision, a, i, false) {
                out.insert((a, i), x);
            } else if singularity != Singularity::Rs && !x.is_zero() && i < 0 && i + alg.heights[a] + 1 < 0 {
                return Err(Error::NotOper(format!("pole of negative energy on {}", alg.labels[a])));
            }
        }
        Ok(OperRep { alg: alg.clone(), precision, singularity, v: out })
    }

    /// Uniformly random coefficients in `[-r, r]` on every admissible term.
    pub fn random(alg: &Arc<SimpleLieAlgebra>, precision: u32, singularity: Singularity, r: i64, rng: &mut impl Rng) -> Self {
        let mut v = Coeffs::new();
        for a in alg.borel().collect::<Vec<_>>() {
            for i in 0..precision as i32 {
                if energy_ok(alg, singularity, precision, a, i, false) {
                    v.insert((a, i), q(rng.gen_range(-r..=r)));
                }
            }
        }
        OperRep::new(alg, precision, singularity, v).expect("admissible by construction")
    }

    fn matrix(&self) -> SMat {
        let n = self.alg.n;
        let mut m = mat_zero(n);
        let pm = self.alg.principal_triple().p_minus;
        let mut all: Coeffs = self.v.clone();
        for (a, x) in pm.iter().enumerate() {
            if !x.is_zero() {
                coeffs_add(&mut all, (a, 0), x);
            }
        }
        for ((a, i), x) in &all {
            let b = &self.alg.matrices[*a];
            for r in 0..n {
                for c in 0..n {
                    if !b[r][c].is_zero() {
                        let e = m[r][c].entry(*i).or_insert_with(Q::zero);
                        *e += x * &b[r][c];
                    }
                }
            }
        }
        for row in m.iter_mut() {
            for s in row.iter_mut() {
                s.retain(|_, v| !v.is_zero());
            }
        }
        m
    }

    fn from_matrix(&self, m: &SMat) -> Result<OperRep> {
        let coeffs = matrix_coeffs(&self.alg, m);
        let pm = self.alg.principal_triple().p_minus;
        let mut v = Coeffs::new();
        for ((a, i), x) in coeffs {
            let expected = if i == 0 { pm[a].clone() } else { Q::zero() };
            if self.alg.heights[a] < 0 {
                if x != expected {
                    return Err(Error::NotOper(format!("{} at t^{i}", self.alg.labels[a])));
                }
                continue;
            }
            if energy_ok(&self.alg, self.singularity, self.precision, a, i, false) {
                v.insert((a, i), x);
            }
        }
        for (a, x) in pm.iter().enumerate() {
            if !x.is_zero() && matrix_coeffs(&self.alg, m).get(&(a, 0)) != Some(x) {
                return Err(Error::NotOper("p_{-1} part changed".into()));
            }
        }
        Ok(OperRep { alg: self.alg.clone(), precision: self.precision, singularity: self.singularity, v })
    }

    pub fn to_json(&self) -> Value {
        coeffs_json(&self.alg, self.precision, self.singularity, &self.v, |a| self.alg.labels[a].clone())
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let (alg, precision, singularity, entries) = parse_header(v)?;
        let mut c = Coeffs::new();
        for (label, power, x) in entries {
            let a = alg
                .index_of(&label)
                .ok_or_else(|| Error::Parse(format!("unknown basis label `{label}`")))?;
            coeffs_add(&mut c, (a, power), &x);
        }
        OperRep::new(&alg, precision, singularity, c)
    }
}

fn parse_header(v: &Value) -> Result<(Arc<SimpleLieAlgebra>, u32, Singularity, Vec<(String, i32, Q)>)> {
    let field = |k: &str| v.get(k).ok_or_else(|| Error::Parse(format!("missing field `{k}`")));
    let alg = Arc::new(build_simple_lie_algebra(field("algebra")?.as_str().unwrap_or_default())?);
    let precision = field("precision")?
        .as_u64()
        .ok_or_else(|| Error::Parse("precision must be a nonnegative integer".into()))? as u32;
    let singularity: Singularity = field("singularity")?.as_str().unwrap_or_default().parse()?;
    let mut entries = Vec::new();
    for e in field("coefficients")?.as_array().ok_or_else(|| Error::Parse("coefficients must be a list".into()))? {
        let label = e.get("basis").and_then(Value::as_str).ok_or_else(|| Error::Parse("missing basis".into()))?;
        let power = e.get("power").and_then(Value::as_i64).ok_or_else(|| Error::Parse("missing power".into()))?;
        let value = e.get("value").and_then(Value::as_str).ok_or_else(|| Error::Parse("missing value".into()))?;
        entries.push((label.to_string(), power as i32, parse_q(value)?));
    }
    Ok((alg, precision, singularity, entries))
}

fn coeffs_json(
    alg: &SimpleLieAlgebra,
    precision: u32,
    singularity: Singularity,
    c: &Coeffs,
    label: impl Fn(usize) -> String,
) -> Value {
    let coefficients: Vec<Value> = c
        .iter()
        .map(|((a, i), x)| json!({"basis": label(*a), "power": i, "value": fmt_q(x)}))
        .collect();
    json!({
        "algebra": alg.name.to_string(),
        "precision": precision,
        "singularity": singularity.label(),
        "coefficients": coefficients,
    })
}

/// Basis coordinates of every power of a traceless series matrix.
fn matrix_coeffs(alg: &SimpleLieAlgebra, m: &SMat) -> Coeffs {
    let mut powers: Vec<i32> = m.iter().flatten().flat_map(|s| s.keys().copied()).collect();
    powers.sort_unstable();
    powers.dedup();
    let mut out = Coeffs::new();
    for i in powers {
        let slice: Vec<Vec<Q>> = m
            .iter()
            .map(|row| row.iter().map(|s| s.get(&i).cloned().unwrap_or_else(Q::zero)).collect())
            .collect();
        for (a, x) in alg.coords(&slice).into_iter().enumerate() {
            if !x.is_zero() {
                out.insert((a, i), x);
            }
        }
    }
    out
}

/// `exp(x(t))` with `x(t) ∈ n((t))`.
#[derive(Clone, Debug, PartialEq)]
pub struct GaugeElement {
    pub alg: Arc<SimpleLieAlgebra>,
    pub precision: u32,
    pub singularity: Singularity,
    pub x: Coeffs,
}

impl GaugeElement {
    pub fn identity(alg: &Arc<SimpleLieAlgebra>, precision: u32, singularity: Singularity) -> Self {
        GaugeElement { alg: alg.clone(), precision, singularity, x: Coeffs::new() }
    }

    pub fn new(alg: &Arc<SimpleLieAlgebra>, precision: u32, singularity: Singularity, x: Coeffs) -> Result<Self> {
        let mut out = Coeffs::new();
        for ((a, i), v) in x {
            if alg.heights[a] <= 0 {
                return Err(Error::NotOper(format!("gauge parameter on {}", alg.labels[a])));
            }
            if !v.is_zero() && energy_ok(alg, singularity, precision, a, i, true) {
                out.insert((a, i), v);
            }
        }
        Ok(GaugeElement { alg: alg.clone(), precision, singularity, x: out })
    }

    pub fn random(alg: &Arc<SimpleLieAlgebra>, precision: u32, singularity: Singularity, r: i64, rng: &mut impl Rng) -> Self {
        let mut x = Coeffs::new();
        for a in alg.positive().collect::<Vec<_>>() {
            for i in 0..=precision as i32 {
                if energy_ok(alg, singularity, precision, a, i, true) {
                    x.insert((a, i), q(rng.gen_range(-r..=r)));
                }
            }
        }
        GaugeElement::new(alg, precision, singularity, x).expect("admissible by construction")
    }

    fn x_matrix(&self) -> SMat {
        let n = self.alg.n;
        let mut m = mat_zero(n);
        for ((a, i), v) in &self.x {
            let b = &self.alg.matrices[*a];
            for r in 0..n {
                for c in 0..n {
                    if !b[r][c].is_zero() {
                        ser_add_assign(&mut m[r][c], &Series::from([(*i, v * &b[r][c])]), &Q::one());
                    }
                }
            }
        }
        m
    }

    pub fn group_matrix(&self) -> SMat {
        mat_exp(&self.x_matrix())
    }

    fn from_group(&self, g: &SMat) -> Result<GaugeElement> {
        GaugeElement::new(&self.alg, self.precision, self.singularity, matrix_coeffs(&self.alg, &mat_log(g)))
    }

    /// `self · other` as group elements.
    pub fn compose(&self, other: &GaugeElement) -> Result<GaugeElement> {
        check_precision(self.precision, other.precision)?;
        self.from_group(&mat_mul(&self.group_matrix(), &other.group_matrix()))
    }

    pub fn inverse(&self) -> GaugeElement {
        let x = self.x.iter().map(|(k, v)| (*k, -v)).collect();
        GaugeElement { x, ..self.clone() }
    }
}

fn check_precision(a: u32, b: u32) -> Result<()> {
    if a != b {
        return Err(Error::PrecisionMismatch(a as usize, b as usize));
    }
    Ok(())
}

/// `g·(∂_t + A) = ∂_t + gAg⁻¹ − ∂_t g·g⁻¹`; for regular singularity the
/// same with `t∂_t` acting on `p_{-1} + v`.
pub fn gauge_transform(g: &GaugeElement, op: &OperRep) -> Result<OperRep> {
    check_precision(g.precision, op.precision)?;
    if g.singularity != op.singularity {
        return Err(Error::InvalidTag(format!("{} gauge on {} oper", g.singularity.label(), op.singularity.label())));
    }
    let gm = g.group_matrix();
    let ginv = g.inverse().group_matrix();
    let mut a = mat_mul(&mat_mul(&gm, &op.matrix()), &ginv);
    let dg = mat_mul(&mat_deriv(&gm, op.singularity == Singularity::Rs), &ginv);
    mat_axpy(&mut a, &dg, &-Q::one());
    op.from_matrix(&a)
}

/// `v(t) = Σ_j c_j(t) p_j`.
#[derive(Clone, Debug, PartialEq)]
pub struct CanonicalOper {
    pub alg: Arc<SimpleLieAlgebra>,
    pub precision: u32,
    pub singularity: Singularity,
    /// `c[j]` is the series multiplying `p_{j+1}`.
    pub c: Vec<Series>,
}

impl CanonicalOper {
    pub fn to_oper(&self) -> OperRep {
        let tri = self.alg.principal_triple();
        let mut v = Coeffs::new();
        for (j, s) in self.c.iter().enumerate() {
            for (i, x) in s {
                for (a, pa) in tri.p[j].iter().enumerate() {
                    if !pa.is_zero() {
                        coeffs_add(&mut v, (a, *i), &(x * pa));
                    }
                }
            }
        }
        OperRep::new(&self.alg, self.precision, self.singularity, v).expect("slice elements are admissible")
    }

    pub fn to_json(&self) -> Value {
        let mut c = Coeffs::new();
        for (j, s) in self.c.iter().enumerate() {
            for (i, x) in s {
                c.insert((j, *i), x.clone());
            }
        }
        coeffs_json(&self.alg, self.precision, self.singularity, &c, |j| format!("p{}", j + 1))
    }
}

/// Reduces `op` to the slice `Σ c_j p_j` grade by grade in the principal
/// gradation. Returns the canonical operator and the gauge achieving it.
pub fn canonical_form(op: &OperRep) -> Result<(CanonicalOper, GaugeElement)> {
    if op.singularity == Singularity::Rs {
        return Err(Error::InvalidTag("canonical form takes a regular or punctured operator".into()));
    }
    let alg = &op.alg;
    let tri = alg.principal_triple();
    let max_ht = *alg.heights.iter().max().expect("nonempty");
    let mut cur = op.clone();
    let mut total = GaugeElement::identity(alg, op.precision, op.singularity);
    for k in 0..max_ht {
        let (lift, slice) = grade_data(alg, k);
        let sys = grade_system(alg, &tri, k, &lift, &slice);
        let inv = inverse_dense(&sys).expect("ad p_{-1} splits each grade");
        let bk: Vec<usize> = (0..alg.dim).filter(|&a| alg.heights[a] == k).collect();
        let powers: Vec<i32> = {
            let mut p: Vec<i32> = cur.v.keys().filter(|(a, _)| alg.heights[*a] == k).map(|(_, i)| *i).collect();
            p.dedup();
            p
        };
        let mut x = Coeffs::new();
        for i in powers {
            let rhs: Vec<Q> = bk.iter().map(|&a| cur.v.get(&(a, i)).cloned().unwrap_or_else(Q::zero)).collect();
            let sol: Vec<Q> = inv.iter().map(|row| row.iter().zip(&rhs).map(|(r, b)| r * b).sum()).collect();
            for (idx, &a) in lift.iter().enumerate() {
                if !sol[idx].is_zero() {
                    x.insert((a, i), -sol[idx].clone());
                }
            }
        }
        let g = GaugeElement::new(alg, op.precision, op.singularity, x)?;
        cur = gauge_transform(&g, &cur)?;
        total = g.compose(&total)?;
    }
    let c = slice_coordinates(&cur)?;
    Ok((CanonicalOper { alg: alg.clone(), precision: op.precision, singularity: op.singularity, c }, total))
}

/// Basis of `n_{k+1}` and the indices `j` with `d_j = k`.
fn grade_data(alg: &SimpleLieAlgebra, k: i32) -> (Vec<usize>, Vec<usize>) {
    let tri = alg.principal_triple();
    let lift = (0..alg.dim).filter(|&a| alg.heights[a] == k + 1).collect();
    let slice = (0..tri.p.len()).filter(|&j| tri.degrees[j] as i32 == k).collect();
    (lift, slice)
}

/// Square matrix of `(x, z) ↦ [x, p_{-1}] + Σ z_j p_j` on grade `k`.
fn grade_system(
    alg: &SimpleLieAlgebra,
    tri: &crate::algebra::PrincipalTriple,
    k: i32,
    lift: &[usize],
    slice: &[usize],
) -> Vec<Vec<Q>> {
    let bk: Vec<usize> = (0..alg.dim).filter(|&a| alg.heights[a] == k).collect();
    let mut cols: Vec<Vec<Q>> = Vec::new();
    for &a in lift {
        let br = alg.bracket(&alg.unit(a), &tri.p_minus);
        cols.push(bk.iter().map(|&b| br[b].clone()).collect());
    }
    for &j in slice {
        cols.push(bk.iter().map(|&b| tri.p[j][b].clone()).collect());
    }
    (0..bk.len()).map(|r| cols.iter().map(|c| c[r].clone()).collect()).collect()
}

/// Coordinates `c_j(t)` of an operator already in the slice.
fn slice_coordinates(op: &OperRep) -> Result<Vec<Series>> {
    let alg = &op.alg;
    let tri = alg.principal_triple();
    let mut c = vec![Series::new(); tri.p.len()];
    let mut rest = op.v.clone();
    for (j, pj) in tri.p.iter().enumerate() {
        let lead = (0..alg.dim).find(|&a| !pj[a].is_zero()).expect("nonzero");
        let powers: Vec<i32> = rest.keys().filter(|(a, _)| *a == lead).map(|(_, i)| *i).collect();
        for i in powers {
            let x = &rest[&(lead, i)] / &pj[lead];
            for (a, pa) in pj.iter().enumerate() {
                if !pa.is_zero() {
                    coeffs_add(&mut rest, (a, i), &(-&x * pa));
                }
            }
            c[j].insert(i, x);
        }
    }
    if !rest.is_empty() {
        return Err(Error::NotOper("reduction left terms off the slice".into()));
    }
    Ok(c)
}

/// Characteristic polynomial `det(x − M)` of `p_{-1} + v(0)` in the defining
/// representation, as the coefficients of `x^{n-1}, …, x^0`.
pub fn rs_residue(op: &OperRep) -> Result<Vec<Q>> {
    if op.singularity != Singularity::Rs {
        return Err(Error::InvalidTag("residue needs an operator with regular singularity".into()));
    }
    let alg = &op.alg;
    let mut x = alg.principal_triple().p_minus;
    for ((a, i), v) in &op.v {
        if *i == 0 {
            x[*a] += v;
        }
    }
    Ok(char_poly(&alg.matrix_of(&x)))
}

/// Faddeev–LeVerrier.
pub fn char_poly(m: &[Vec<Q>]) -> Vec<Q> {
    let n = m.len();
    let mut coeffs = Vec::with_capacity(n);
    let mut mk = crate::algebra::mat_zero(n);
    let mut c = Q::one();
    for k in 1..=n {
        // M_k = M (M_{k-1} + c_{k-1} I)
        let mut shifted = mk.clone();
        for (i, row) in shifted.iter_mut().enumerate() {
            row[i] += &c;
        }
        mk = crate::algebra::mat_mul(&m.to_vec(), &shifted);
        c = -crate::algebra::trace(&mk) / q(k as i64);
        coeffs.push(c.clone());
    }
    coeffs
}

/// Rewrites `∂_t + (p_{-1} + v(t))/t` as `∂_t + p_{-1} + …` on the punctured
/// disc by the coweight gauge `t^{-ρ̌}`; the result has precision `K − 1`.
pub fn rs_to_punctured(op: &OperRep) -> Result<OperRep> {
    if op.singularity != Singularity::Rs {
        return Err(Error::InvalidTag("expected an operator with regular singularity".into()));
    }
    let alg = &op.alg;
    let mut v = Coeffs::new();
    for ((a, i), x) in &op.v {
        coeffs_add(&mut v, (*a, i - 1 - alg.heights[*a]), x);
    }
    let rho = alg.principal_triple().rho_check;
    for (a, x) in rho.iter().enumerate() {
        if !x.is_zero() {
            coeffs_add(&mut v, (a, -1), x);
        }
    }
    OperRep::new(alg, op.precision.saturating_sub(1), Singularity::Punctured, v)
}

/// Characteristic polynomial of `p_{-1} + (c_1(0) + 1/4) p_1 + Σ_{j≥2} c_j(0) p_j`
/// for a canonical form on the punctured disc, where `c_j(0)` is the
/// coefficient of `t^{-d_j-1}`.
pub fn normalized_residue(c: &CanonicalOper) -> Vec<Q> {
    normalized_residue_with_shift(c, &qf(RESIDUE_SHIFT.0, RESIDUE_SHIFT.1))
}

pub fn normalized_residue_with_shift(c: &CanonicalOper, shift: &Q) -> Vec<Q> {
    let alg = &c.alg;
    let tri = alg.principal_triple();
    let mut x = tri.p_minus.clone();
    for (j, s) in c.c.iter().enumerate() {
        let mut v = s.get(&(-(tri.degrees[j] as i32) - 1)).cloned().unwrap_or_else(Q::zero);
        if j == 0 {
            v += shift;
        }
        for (a, pa) in tri.p[j].iter().enumerate() {
            x[a] += &v * pa;
        }
    }
    char_poly(&alg.matrix_of(&x))
}

// ---------------------------------------------------------------------------
// Graded-dimension oracles.

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SeriesLabel {
    FunC,
    OmegaC,
    FunCRS,
    OmegaCRS,
    FunOp,
    OmegaOp,
    OmegaOpRS,
}

impl FromStr for SeriesLabel {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "FunC" => SeriesLabel::FunC,
            "OmegaC" => SeriesLabel::OmegaC,
            "FunCRS" => SeriesLabel::FunCRS,
            "OmegaCRS" => SeriesLabel::OmegaCRS,
            "FunOp" => SeriesLabel::FunOp,
            "OmegaOp" => SeriesLabel::OmegaOp,
            "OmegaOpRS" => SeriesLabel::OmegaOpRS,
            _ => return Err(Error::InvalidTag(s.to_string())),
        })
    }
}

impl fmt::Display for SeriesLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

impl SeriesLabel {
    fn has_odd(&self) -> bool {
        matches!(self, SeriesLabel::OmegaC | SeriesLabel::OmegaCRS | SeriesLabel::OmegaOp | SeriesLabel::OmegaOpRS)
    }
}

/// Energies of the even generators up to `cutoff`. The classical labels
/// use `P_{i,n}` at `n + d_i + 1`; the oper labels read the energy of the
/// canonical-slice coordinate `c_{j,n}` off the principal grading.
pub fn generator_energies(label: SeriesLabel, alg: &SimpleLieAlgebra, cutoff: u32) -> Vec<u32> {
    let mut out = Vec::new();
    match label {
        SeriesLabel::FunC | SeriesLabel::OmegaC | SeriesLabel::FunCRS | SeriesLabel::OmegaCRS => {
            let rs = matches!(label, SeriesLabel::FunCRS | SeriesLabel::OmegaCRS);
            for &d in &alg.exponents {
                let n_min = if rs { -(d as i32) } else { 0 };
                for n in n_min.. {
                    let e = n + d as i32 + 1;
                    if e > cutoff as i32 {
                        break;
                    }
                    out.push(e as u32);
                }
            }
        }
        SeriesLabel::FunOp | SeriesLabel::OmegaOp | SeriesLabel::OmegaOpRS => {
            let tri = alg.principal_triple();
            for (j, pj) in tri.p.iter().enumerate() {
                let lead = (0..alg.dim).find(|&a| !pj[a].is_zero()).expect("nonzero");
                let grade = alg.heights[lead];
                debug_assert_eq!(grade as u32, tri.degrees[j]);
                // c_{j,n} multiplies t^n p_j (regular) or t^{n-d_j-1} p_j with n ≥ 1
                // once the residue is fixed (regular singularity).
                let (first, exponent): (i32, Box<dyn Fn(i32) -> i32>) = match label {
                    SeriesLabel::OmegaOpRS => (1, Box::new(move |n| n - grade - 1)),
                    _ => (0, Box::new(|n| n)),
                };
                for n in first.. {
                    let e = exponent(n) + grade + 1;
                    if e > cutoff as i32 {
                        break;
                    }
                    out.push(e as u32);
                }
            }
        }
    }
    out.sort_unstable();
    out
}

/// Coefficient of `q^d s^p`, `d = 0..=cutoff`, in the Hilbert series of the
/// free skew-commutative algebra on the generators of `label`.
pub fn expected_dimensions(label: SeriesLabel, alg: &SimpleLieAlgebra, cutoff: u32, p: usize) -> Vec<u64> {
    let gens = generator_energies(label, alg, cutoff);
    let odd = label.has_odd();
    let pmax = if odd { p } else { 0 };
    if p > pmax {
        return vec![0; cutoff as usize + 1];
    }
    // table[s][d]
    let mut table = vec![vec![0u64; cutoff as usize + 1]; pmax + 1];
    table[0][0] = 1;
    for &e in &gens {
        let e = e as usize;
        // even generator: multiply by 1/(1 - q^e)
        for row in table.iter_mut() {
            for d in e..row.len() {
                row[d] += row[d - e];
            }
        }
        if odd {
            // odd generator: multiply by (1 + s q^e)
            for s in (1..=pmax).rev() {
                for d in (e..=cutoff as usize).rev() {
                    table[s][d] += table[s - 1][d - e];
                }
            }
        }
    }
    table[p].clone()
}
