//! Exact sparse linear algebra over the rationals.
//!
//! Vectors are sorted `(index, value)` lists without zero entries. Matrices
//! are stored by column. Elimination always pivots on the smallest leading
//! index, and the first inserted vector with a given leading index becomes
//! its pivot, so every result is reproducible bit for bit.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::rational::{fmt_q, parse_q, Coeff, Q};

pub type SVec<C = Q> = Vec<(usize, C)>;

/// Primes just below 2^31 used by the modular fast path.
pub const PRIMES: [u64; 4] = [2147483647, 2147483629, 2147483587, 2147483579];

/// Matrices with at most this many stored entries are also ranked by the
/// exact fraction-free oracle, which must agree with the modular result.
pub const EXACT_ORACLE_NNZ: usize = 6000;

/// `y + a*x` for sparse vectors.
pub fn axpy<C: Coeff>(y: &[(usize, C)], a: &C, x: &[(usize, C)]) -> SVec<C> {
    let mut out = Vec::with_capacity(y.len() + x.len());
    let (mut i, mut j) = (0, 0);
    while i < y.len() || j < x.len() {
        if j == x.len() || (i < y.len() && y[i].0 < x[j].0) {
            out.push(y[i].clone());
            i += 1;
        } else if i == y.len() || x[j].0 < y[i].0 {
            let v = a.cmul(&x[j].1);
            if !v.is_czero() {
                out.push((x[j].0, v));
            }
            j += 1;
        } else {
            let v = y[i].1.cadd(&a.cmul(&x[j].1));
            if !v.is_czero() {
                out.push((y[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

pub fn scale_vec<C: Coeff>(v: &[(usize, C)], a: &C) -> SVec<C> {
    v.iter()
        .filter_map(|(i, x)| {
            let y = x.cmul(a);
            (!y.is_czero()).then_some((*i, y))
        })
        .collect()
}

/// Builds a sorted sparse vector from unsorted entries, summing duplicates.
pub fn svec_from_entries<C: Coeff>(entries: impl IntoIterator<Item = (usize, C)>) -> SVec<C> {
    let mut m: BTreeMap<usize, C> = BTreeMap::new();
    for (i, x) in entries {
        m.entry(i).or_insert_with(C::czero).cadd_assign(&x);
    }
    m.into_iter().filter(|(_, x)| !x.is_czero()).collect()
}

pub fn dense_to_svec(v: &[Q]) -> SVec {
    v.iter()
        .enumerate()
        .filter(|(_, x)| !x.is_zero())
        .map(|(i, x)| (i, x.clone()))
        .collect()
}

pub fn svec_to_dense(v: &[(usize, Q)], n: usize) -> Vec<Q> {
    let mut d = vec![Q::zero(); n];
    for (i, x) in v {
        d[*i] = x.clone();
    }
    d
}

/// Sparse matrix stored by columns; no stored zeros, indices in bounds.
#[derive(Clone, Debug, PartialEq)]
pub struct SparseMatrix<C: Coeff = Q> {
    rows: usize,
    cols: usize,
    columns: Vec<SVec<C>>,
}

pub type SparseMatrixQ = SparseMatrix<Q>;

impl<C: Coeff> SparseMatrix<C> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        SparseMatrix { rows, cols, columns: vec![Vec::new(); cols] }
    }

    pub fn identity(n: usize) -> Self {
        let columns = (0..n).map(|i| vec![(i, C::cone())]).collect();
        SparseMatrix { rows: n, cols: n, columns }
    }

    pub fn from_triplets(
        rows: usize,
        cols: usize,
        entries: impl IntoIterator<Item = (usize, usize, C)>,
    ) -> Result<Self> {
        let mut buckets: Vec<Vec<(usize, C)>> = vec![Vec::new(); cols];
        for (r, c, x) in entries {
            if r >= rows || c >= cols {
                return Err(Error::DimensionMismatch { expected: rows.max(cols), got: r.max(c) });
            }
            buckets[c].push((r, x));
        }
        let columns = buckets.into_iter().map(svec_from_entries).collect();
        Ok(SparseMatrix { rows, cols, columns })
    }

    pub fn from_columns(rows: usize, columns: Vec<SVec<C>>) -> Self {
        debug_assert!(columns.iter().all(|c| c.iter().all(|(r, x)| *r < rows && !x.is_czero())));
        debug_assert!(columns.iter().all(|c| c.windows(2).all(|w| w[0].0 < w[1].0)));
        SparseMatrix { rows, cols: columns.len(), columns }
    }

    pub fn from_dense(d: &[Vec<C>]) -> Self {
        let rows = d.len();
        let cols = d.first().map_or(0, |r| r.len());
        let columns = (0..cols)
            .map(|c| {
                (0..rows)
                    .filter(|&r| !d[r][c].is_czero())
                    .map(|r| (r, d[r][c].clone()))
                    .collect()
            })
            .collect();
        SparseMatrix { rows, cols, columns }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }
    pub fn column(&self, c: usize) -> &[(usize, C)] {
        &self.columns[c]
    }
    pub fn columns(&self) -> &[SVec<C>] {
        &self.columns
    }
    pub fn nnz(&self) -> usize {
        self.columns.iter().map(Vec::len).sum()
    }
    pub fn is_zero(&self) -> bool {
        self.columns.iter().all(Vec::is_empty)
    }

    pub fn get(&self, r: usize, c: usize) -> C {
        match self.columns[c].binary_search_by_key(&r, |e| e.0) {
            Ok(k) => self.columns[c][k].1.clone(),
            Err(_) => C::czero(),
        }
    }

    /// Entries in row-major order.
    pub fn triplets(&self) -> Vec<(usize, usize, C)> {
        let mut t: Vec<_> = self
            .columns
            .iter()
            .enumerate()
            .flat_map(|(c, col)| col.iter().map(move |(r, x)| (*r, c, x.clone())))
            .collect();
        t.sort_by_key(|e| (e.0, e.1));
        t
    }

    pub fn transpose(&self) -> Self {
        let mut cols: Vec<SVec<C>> = vec![Vec::new(); self.rows];
        for (c, col) in self.columns.iter().enumerate() {
            for (r, x) in col {
                cols[*r].push((c, x.clone()));
            }
        }
        SparseMatrix { rows: self.cols, cols: self.rows, columns: cols }
    }

    pub fn mul_vec(&self, v: &[(usize, C)]) -> SVec<C> {
        let mut acc: SVec<C> = Vec::new();
        for (c, x) in v {
            acc = axpy(&acc, x, &self.columns[*c]);
        }
        acc
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch { expected: self.cols, got: other.rows });
        }
        let columns = other.columns.iter().map(|c| self.mul_vec(c)).collect();
        Ok(SparseMatrix { rows: self.rows, cols: other.cols, columns })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch { expected: self.rows * self.cols, got: other.rows * other.cols });
        }
        let columns = self
            .columns
            .iter()
            .zip(&other.columns)
            .map(|(a, b)| axpy(a, &C::cone(), b))
            .collect();
        Ok(SparseMatrix { rows: self.rows, cols: self.cols, columns })
    }

    pub fn scale(&self, a: &C) -> Self {
        let columns = self.columns.iter().map(|c| scale_vec(c, a)).collect();
        SparseMatrix { rows: self.rows, cols: self.cols, columns }
    }

    pub fn map<D: Coeff>(&self, f: impl Fn(&C) -> D) -> SparseMatrix<D> {
        let columns = self
            .columns
            .iter()
            .map(|col| {
                col.iter()
                    .filter_map(|(r, x)| {
                        let y = f(x);
                        (!y.is_czero()).then_some((*r, y))
                    })
                    .collect()
            })
            .collect();
        SparseMatrix { rows: self.rows, cols: self.cols, columns }
    }

    /// Stacks matrices on top of each other; all must share the column count.
    pub fn vstack(blocks: &[&Self]) -> Result<Self> {
        let cols = blocks.first().map_or(0, |b| b.cols);
        let mut columns: Vec<SVec<C>> = vec![Vec::new(); cols];
        let mut offset = 0;
        for b in blocks {
            if b.cols != cols {
                return Err(Error::DimensionMismatch { expected: cols, got: b.cols });
            }
            for (c, col) in b.columns.iter().enumerate() {
                columns[c].extend(col.iter().map(|(r, x)| (r + offset, x.clone())));
            }
            offset += b.rows;
        }
        Ok(SparseMatrix { rows: offset, cols, columns })
    }

    /// Places matrices side by side; all must share the row count.
    pub fn hstack(blocks: &[&Self]) -> Result<Self> {
        let rows = blocks.first().map_or(0, |b| b.rows);
        let mut columns = Vec::new();
        for b in blocks {
            if b.rows != rows {
                return Err(Error::DimensionMismatch { expected: rows, got: b.rows });
            }
            columns.extend(b.columns.iter().cloned());
        }
        Ok(SparseMatrix { rows, cols: columns.len(), columns })
    }

    /// Keeps the listed columns, in the given order.
    pub fn select_columns(&self, idx: &[usize]) -> Self {
        let columns = idx.iter().map(|&c| self.columns[c].clone()).collect();
        SparseMatrix { rows: self.rows, cols: idx.len(), columns }
    }
}

impl SparseMatrixQ {
    /// Text dump: header `rows cols nnz`, then `row col p/q` in row-major order.
    pub fn dump(&self) -> String {
        let t = self.triplets();
        let mut s = format!("{} {} {}\n", self.rows, self.cols, t.len());
        for (r, c, x) in t {
            let _ = writeln!(s, "{r} {c} {}", fmt_q(&x));
        }
        s
    }

    pub fn parse_dump(s: &str) -> Result<Self> {
        let mut lines = s.lines().filter(|l| !l.trim().is_empty());
        let header = lines.next().ok_or_else(|| Error::Parse("empty matrix dump".into()))?;
        let h: Vec<usize> = header
            .split_whitespace()
            .map(|x| x.parse().map_err(|_| Error::Parse(format!("bad header `{header}`"))))
            .collect::<Result<_>>()?;
        if h.len() != 3 {
            return Err(Error::Parse(format!("bad header `{header}`")));
        }
        let mut entries = Vec::with_capacity(h[2]);
        for l in lines {
            let f: Vec<&str> = l.split_whitespace().collect();
            if f.len() != 3 {
                return Err(Error::Parse(format!("bad entry `{l}`")));
            }
            let r = f[0].parse().map_err(|_| Error::Parse(format!("bad row in `{l}`")))?;
            let c = f[1].parse().map_err(|_| Error::Parse(format!("bad column in `{l}`")))?;
            entries.push((r, c, parse_q(f[2])?));
        }
        if entries.len() != h[2] {
            return Err(Error::DimensionMismatch { expected: h[2], got: entries.len() });
        }
        Self::from_triplets(h[0], h[1], entries)
    }
}

// ---------------------------------------------------------------------------
// Modular fast path.

fn inv_mod(a: u64, p: u64) -> u64 {
    let mut r = 1u64;
    let mut b = a % p;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

fn big_mod(x: &BigInt, p: u64) -> u64 {
    let r = x.mod_floor(&BigInt::from(p));
    r.to_u64().expect("residue fits in u64")
}

/// `None` when the denominator vanishes modulo `p`.
fn q_mod(x: &Q, p: u64) -> Option<u64> {
    let d = big_mod(x.denom(), p);
    if d == 0 {
        return None;
    }
    Some(big_mod(x.numer(), p) * inv_mod(d, p) % p)
}

/// Rank modulo `p`; `None` if some entry is undefined modulo `p`.
pub fn rank_mod_p(m: &SparseMatrixQ, p: u64) -> Option<usize> {
    let mut pivots: BTreeMap<usize, Vec<(usize, u64)>> = BTreeMap::new();
    for col in m.columns() {
        let mut v: Vec<(usize, u64)> = Vec::with_capacity(col.len());
        for (r, x) in col {
            let y = q_mod(x, p)?;
            if y != 0 {
                v.push((*r, y));
            }
        }
        while let Some(&(lead, a)) = v.first() {
            match pivots.get(&lead) {
                Some(piv) => {
                    // Pivots are monic, so subtract a * pivot.
                    let f = p - a;
                    let mut out = Vec::with_capacity(v.len() + piv.len());
                    let (mut i, mut j) = (0, 0);
                    while i < v.len() || j < piv.len() {
                        if j == piv.len() || (i < v.len() && v[i].0 < piv[j].0) {
                            out.push(v[i]);
                            i += 1;
                        } else if i == v.len() || piv[j].0 < v[i].0 {
                            out.push((piv[j].0, f * piv[j].1 % p));
                            j += 1;
                        } else {
                            let y = (v[i].1 + f * piv[j].1) % p;
                            if y != 0 {
                                out.push((v[i].0, y));
                            }
                            i += 1;
                            j += 1;
                        }
                    }
                    v = out;
                }
                None => {
                    let inv = inv_mod(a, p);
                    for e in v.iter_mut() {
                        e.1 = e.1 * inv % p;
                    }
                    pivots.insert(lead, v);
                    break;
                }
            }
        }
    }
    Some(pivots.len())
}

// ---------------------------------------------------------------------------
// Exact fraction-free oracle.

fn primitive(v: &mut [(usize, BigInt)]) {
    let mut g = BigInt::zero();
    for (_, x) in v.iter() {
        g = g.gcd(x);
        if g.is_one() {
            return;
        }
    }
    if g.is_zero() || g.is_one() {
        return;
    }
    for (_, x) in v.iter_mut() {
        *x /= &g;
    }
}

fn integer_vector(col: &[(usize, Q)]) -> Vec<(usize, BigInt)> {
    let l = col.iter().fold(BigInt::one(), |acc, (_, x)| acc.lcm(x.denom()));
    let mut v: Vec<(usize, BigInt)> =
        col.iter().map(|(r, x)| (*r, x.numer() * (&l / x.denom()))).collect();
    primitive(&mut v);
    v
}

/// Exact rank by fraction-free integer elimination with content removal.
pub fn rank_exact(m: &SparseMatrixQ) -> usize {
    let mut pivots: BTreeMap<usize, Vec<(usize, BigInt)>> = BTreeMap::new();
    for col in m.columns() {
        let mut v = integer_vector(col);
        while let Some((lead, a)) = v.first().cloned() {
            match pivots.get(&lead) {
                Some(piv) => {
                    let b = &piv[0].1;
                    let mut out = Vec::with_capacity(v.len() + piv.len());
                    let (mut i, mut j) = (0, 0);
                    while i < v.len() || j < piv.len() {
                        if j == piv.len() || (i < v.len() && v[i].0 < piv[j].0) {
                            out.push((v[i].0, b * &v[i].1));
                            i += 1;
                        } else if i == v.len() || piv[j].0 < v[i].0 {
                            out.push((piv[j].0, -(&a * &piv[j].1)));
                            j += 1;
                        } else {
                            let y = b * &v[i].1 - &a * &piv[j].1;
                            if !y.is_zero() {
                                out.push((v[i].0, y));
                            }
                            i += 1;
                            j += 1;
                        }
                    }
                    primitive(&mut out);
                    v = out;
                }
                None => {
                    if v[0].1.is_negative() {
                        for e in v.iter_mut() {
                            e.1 = -&e.1;
                        }
                    }
                    pivots.insert(lead, v);
                    break;
                }
            }
        }
    }
    pivots.len()
}

/// Exact rank. Two primes give the fast answer; if they disagree the exact
/// oracle decides. Small matrices are always cross-checked against the
/// oracle and a disagreement is returned as an error.
pub fn rank(m: &SparseMatrixQ) -> Result<usize> {
    let mut mods = Vec::new();
    for &p in PRIMES.iter() {
        if let Some(r) = rank_mod_p(m, p) {
            mods.push(r);
            if mods.len() == 2 {
                break;
            }
        }
    }
    let fast = (mods.len() == 2 && mods[0] == mods[1]).then(|| mods[0]);
    match fast {
        Some(r) if m.nnz() > EXACT_ORACLE_NNZ => Ok(r),
        Some(r) => {
            let e = rank_exact(m);
            if e != r {
                return Err(Error::RankMismatch { modular: r, exact: e });
            }
            Ok(e)
        }
        None => Ok(rank_exact(m)),
    }
}

// ---------------------------------------------------------------------------
// Rational elimination with combination tracking.

/// Incremental echelon basis of a span, optionally remembering each pivot as
/// a combination of the inserted vectors.
#[derive(Clone, Debug, Default)]
pub struct Echelon {
    pivots: BTreeMap<usize, (SVec, SVec)>,
    inserted: usize,
}

impl Echelon {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Reduces `v` against the pivots. Returns the remainder and the
    /// combination `c` of inserted vectors with `v = remainder + sum c_i u_i`.
    pub fn reduce(&self, v: &[(usize, Q)]) -> (SVec, SVec) {
        let mut v = v.to_vec();
        let mut comb: SVec = Vec::new();
        while let Some((lead, a)) = v.first().cloned() {
            let Some((piv, track)) = self.pivots.get(&lead) else { break };
            let na = -&a;
            v = axpy(&v, &na, piv);
            comb = axpy(&comb, &a, track);
        }
        (v, comb)
    }

    /// Inserts a vector; returns the kernel relation among inserted vectors
    /// (with the new vector's own coefficient 1) when it is dependent.
    pub fn insert(&mut self, v: &[(usize, Q)]) -> Option<SVec> {
        let idx = self.inserted;
        self.inserted += 1;
        let (rem, comb) = self.reduce(v);
        // rem = v - comb·u, so (e_idx - comb) is a relation when rem = 0.
        let own = axpy(&[(idx, Q::one())], &-Q::one(), &comb);
        match rem.first() {
            None => Some(own),
            Some((lead, a)) => {
                let inv = a.recip();
                let lead = *lead;
                self.pivots.insert(lead, (scale_vec(&rem, &inv), scale_vec(&own, &inv)));
                None
            }
        }
    }

    /// `Some(c)` with `v = sum c_i u_i` when `v` lies in the span.
    pub fn express(&self, v: &[(usize, Q)]) -> Option<SVec> {
        let (rem, comb) = self.reduce(v);
        rem.is_empty().then_some(comb)
    }

    pub fn contains(&self, v: &[(usize, Q)]) -> bool {
        self.reduce(v).0.is_empty()
    }
}

/// Basis of the kernel; one vector per dependent column, each with
/// coefficient 1 at that column and zeros at later columns.
pub fn kernel_basis(m: &SparseMatrixQ) -> Vec<SVec> {
    let mut ech = Echelon::new();
    m.columns().iter().filter_map(|c| ech.insert(c)).collect()
}

/// Preimage witness `w` with `M w = v` if `v` lies in the column span.
pub fn in_image(m: &SparseMatrixQ, v: &[(usize, Q)]) -> Result<Option<SVec>> {
    if let Some((r, _)) = v.last() {
        if *r >= m.rows() {
            return Err(Error::DimensionMismatch { expected: m.rows(), got: r + 1 });
        }
    }
    let mut ech = Echelon::new();
    for c in m.columns() {
        ech.insert(c);
    }
    Ok(ech.express(v))
}

/// Column-span membership oracle reused across many queries.
pub struct ImageOracle {
    rows: usize,
    ech: Echelon,
}

impl ImageOracle {
    pub fn new(m: &SparseMatrixQ) -> Self {
        let mut ech = Echelon::new();
        for c in m.columns() {
            ech.insert(c);
        }
        ImageOracle { rows: m.rows(), ech }
    }
    pub fn rank(&self) -> usize {
        self.ech.rank()
    }
    pub fn witness(&self, v: &[(usize, Q)]) -> Result<Option<SVec>> {
        if let Some((r, _)) = v.last() {
            if *r >= self.rows {
                return Err(Error::DimensionMismatch { expected: self.rows, got: r + 1 });
            }
        }
        Ok(self.ech.express(v))
    }
}

/// Solves a square dense system with a unique solution.
pub fn solve_dense(a: &[Vec<Q>], b: &[Q]) -> Option<Vec<Q>> {
    let n = a.len();
    let mut m: Vec<Vec<Q>> = a
        .iter()
        .zip(b)
        .map(|(row, x)| {
            let mut r = row.clone();
            r.push(x.clone());
            r
        })
        .collect();
    for c in 0..n {
        let p = (c..n).find(|&r| !m[r][c].is_zero())?;
        m.swap(c, p);
        let inv = m[c][c].recip();
        for x in m[c].iter_mut() {
            *x *= &inv;
        }
        for r in 0..n {
            if r != c && !m[r][c].is_zero() {
                let f = m[r][c].clone();
                for k in c..=n {
                    let t = &f * &m[c][k];
                    m[r][k] -= t;
                }
            }
        }
    }
    Some(m.into_iter().map(|r| r[n].clone()).collect())
}

pub fn inverse_dense(a: &[Vec<Q>]) -> Option<Vec<Vec<Q>>> {
    let n = a.len();
    let cols: Option<Vec<Vec<Q>>> = (0..n)
        .map(|j| {
            let e: Vec<Q> = (0..n).map(|i| if i == j { Q::one() } else { Q::zero() }).collect();
            solve_dense(a, &e)
        })
        .collect();
    let cols = cols?;
    Some((0..n).map(|i| (0..n).map(|j| cols[j][i].clone()).collect()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    fn m(d: &[&[i64]]) -> SparseMatrixQ {
        SparseMatrixQ::from_dense(&d.iter().map(|r| r.iter().map(|&x| q(x)).collect()).collect::<Vec<_>>())
    }

    #[test]
    fn small_ranks() {
        assert_eq!(rank(&SparseMatrixQ::zeros(3, 4)).unwrap(), 0);
        assert_eq!(rank(&SparseMatrixQ::identity(5)).unwrap(), 5);
        assert_eq!(rank(&m(&[&[1, 2], &[2, 4]])).unwrap(), 1);
    }

    #[test]
    fn kernel_examples() {
        assert!(kernel_basis(&SparseMatrixQ::identity(3)).is_empty());
        assert_eq!(kernel_basis(&SparseMatrixQ::zeros(2, 2)).len(), 2);
        let k = kernel_basis(&m(&[&[1, 2], &[2, 4]]));
        assert_eq!(k.len(), 1);
        // Proportional to (2, -1).
        let v = svec_to_dense(&k[0], 2);
        assert_eq!(&v[0] * q(-1), &v[1] * q(2));
    }

    #[test]
    fn image_examples() {
        let a = m(&[&[1], &[2]]);
        assert!(in_image(&a, &[(0, q(1)), (1, q(3))]).unwrap().is_none());
        let w = in_image(&a, &[(0, q(2)), (1, q(4))]).unwrap().unwrap();
        assert_eq!(a.mul_vec(&w), vec![(0, q(2)), (1, q(4))]);
        assert_eq!(in_image(&a, &[]).unwrap(), Some(vec![]));
        assert!(in_image(&a, &[(5, q(1))]).is_err());
    }

    #[test]
    fn dump_roundtrip() {
        let a = m(&[&[1, 0, 3], &[0, -2, 0]]);
        let s = a.dump();
        assert!(s.starts_with("2 3 3\n0 0 1/1\n"));
        assert_eq!(SparseMatrixQ::parse_dump(&s).unwrap(), a);
    }

    #[test]
    fn dense_inverse() {
        let a = vec![vec![q(2), q(1)], vec![q(1), q(1)]];
        let inv = inverse_dense(&a).unwrap();
        assert_eq!(inv, vec![vec![q(1), q(-1)], vec![q(-1), q(2)]]);
    }
}
