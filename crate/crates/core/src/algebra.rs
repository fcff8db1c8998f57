//! sl2 and sl3 in a Chevalley basis taken from the defining representation.
//!
//! Basis order: positive root vectors by height, then the Cartan elements
//! `H_i = E_ii - E_{i+1,i+1}`, then negative root vectors in the same order
//! as their positive partners. Weights are Dynkin labels, the eigenvalues of
//! `ad H_i`.

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::linalg::{inverse_dense, kernel_basis, rank, solve_dense, svec_to_dense, SparseMatrixQ};
use crate::rational::{fmt_q, q, qf, PolyQ, Q};

pub type Mat = Vec<Vec<Q>>;

pub fn mat_zero(n: usize) -> Mat {
    vec![vec![Q::zero(); n]; n]
}

pub fn mat_identity(n: usize) -> Mat {
    (0..n).map(|i| (0..n).map(|j| if i == j { Q::one() } else { Q::zero() }).collect()).collect()
}

pub fn mat_mul(a: &Mat, b: &Mat) -> Mat {
    let n = a.len();
    let mut c = mat_zero(n);
    for i in 0..n {
        for k in 0..n {
            if a[i][k].is_zero() {
                continue;
            }
            for j in 0..n {
                c[i][j] += &a[i][k] * &b[k][j];
            }
        }
    }
    c
}

pub fn mat_add(a: &Mat, b: &Mat, s: &Q) -> Mat {
    a.iter().zip(b).map(|(r, t)| r.iter().zip(t).map(|(x, y)| x + s * y).collect()).collect()
}

pub fn commutator(a: &Mat, b: &Mat) -> Mat {
    mat_add(&mat_mul(a, b), &mat_mul(b, a), &-Q::one())
}

pub fn trace(a: &Mat) -> Q {
    (0..a.len()).map(|i| a[i][i].clone()).sum()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum AlgebraName {
    #[serde(rename = "sl2")]
    Sl2,
    #[serde(rename = "sl3")]
    Sl3,
}

impl FromStr for AlgebraName {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sl2" => Ok(AlgebraName::Sl2),
            "sl3" => Ok(AlgebraName::Sl3),
            _ => Err(Error::UnknownAlgebra(s.to_string())),
        }
    }
}

impl fmt::Display for AlgebraName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AlgebraName::Sl2 => "sl2",
            AlgebraName::Sl3 => "sl3",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RootKind {
    Positive,
    Cartan,
    Negative,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SimpleLieAlgebra {
    pub name: AlgebraName,
    /// Size of the defining matrices.
    pub n: usize,
    pub dim: usize,
    pub rank: usize,
    pub labels: Vec<String>,
    pub matrices: Vec<Mat>,
    /// `brackets[a][b]` lists `(c, mu^{ab}_c)` with `[J^a, J^b] = sum mu^{ab}_c J^c`.
    pub brackets: Vec<Vec<Vec<(usize, Q)>>>,
    pub kinds: Vec<RootKind>,
    pub weights: Vec<Vec<i32>>,
    /// Principal grading: eigenvalue of `ad rho-check`.
    pub heights: Vec<i32>,
    pub cartan: Vec<usize>,
    pub e: Vec<usize>,
    pub f: Vec<usize>,
    pub exponents: Vec<u32>,
    kappa0: Mat,
}

pub fn build_simple_lie_algebra(name: &str) -> Result<SimpleLieAlgebra> {
    Ok(SimpleLieAlgebra::new(name.parse()?))
}

impl SimpleLieAlgebra {
    pub fn new(name: AlgebraName) -> Self {
        let n = match name {
            AlgebraName::Sl2 => 2,
            AlgebraName::Sl3 => 3,
        };
        let unit = |i: usize, j: usize| {
            let mut m = mat_zero(n);
            m[i][j] = Q::one();
            m
        };
        let mut pos: Vec<(usize, usize)> = Vec::new();
        for h in 1..n {
            for i in 0..n - h {
                pos.push((i, i + h));
            }
        }
        let simple_label = |i: usize, j: usize| {
            if n == 2 {
                String::new()
            } else {
                (i + 1..=j).map(|k| k.to_string()).collect()
            }
        };
        let mut labels = Vec::new();
        let mut matrices = Vec::new();
        let mut kinds = Vec::new();
        let mut heights = Vec::new();
        for &(i, j) in &pos {
            labels.push(format!("e{}", simple_label(i, j)));
            matrices.push(unit(i, j));
            kinds.push(RootKind::Positive);
            heights.push((j - i) as i32);
        }
        for k in 0..n - 1 {
            labels.push(if n == 2 { "h".to_string() } else { format!("h{}", k + 1) });
            matrices.push(mat_add(&unit(k, k), &unit(k + 1, k + 1), &-Q::one()));
            kinds.push(RootKind::Cartan);
            heights.push(0);
        }
        for &(i, j) in &pos {
            labels.push(format!("f{}", simple_label(i, j)));
            matrices.push(unit(j, i));
            kinds.push(RootKind::Negative);
            heights.push(-((j - i) as i32));
        }
        let dim = matrices.len();
        let rank = n - 1;
        let np = pos.len();
        let cartan: Vec<usize> = (np..np + rank).collect();
        let e: Vec<usize> = (0..rank).collect();
        let f: Vec<usize> = (np + rank..np + 2 * rank).collect();
        let mut alg = SimpleLieAlgebra {
            name,
            n,
            dim,
            rank,
            labels,
            matrices,
            brackets: Vec::new(),
            kinds,
            weights: Vec::new(),
            heights,
            cartan,
            e,
            f,
            exponents: (1..n as u32).collect(),
            kappa0: Vec::new(),
        };
        alg.brackets = (0..dim)
            .map(|a| {
                (0..dim)
                    .map(|b| {
                        let c = commutator(&alg.matrices[a], &alg.matrices[b]);
                        alg.coords(&c)
                            .into_iter()
                            .enumerate()
                            .filter(|(_, x)| !x.is_zero())
                            .collect()
                    })
                    .collect()
            })
            .collect();
        alg.weights = (0..dim)
            .map(|a| {
                alg.cartan
                    .iter()
                    .map(|&h| {
                        let c = alg.bracket_basis(h, a);
                        let w = c.iter().find(|(i, _)| *i == a).map_or(Q::zero(), |(_, x)| x.clone());
                        w.to_integer().try_into().expect("small weight")
                    })
                    .collect()
            })
            .collect();
        alg.kappa0 = (0..dim)
            .map(|a| (0..dim).map(|b| trace(&mat_mul(&alg.matrices[a], &alg.matrices[b]))).collect())
            .collect();
        alg
    }

    /// Coordinates of a traceless matrix in the basis.
    pub fn coords(&self, m: &Mat) -> Vec<Q> {
        let mut v = vec![Q::zero(); self.dim];
        for (a, b) in self.matrices.iter().enumerate() {
            if self.kinds[a] != RootKind::Cartan {
                let (i, j) = unit_position(b);
                v[a] = m[i][j].clone();
            }
        }
        let mut acc = Q::zero();
        for (k, &h) in self.cartan.iter().enumerate() {
            acc += &m[k][k];
            v[h] = acc.clone();
        }
        v
    }

    pub fn matrix_of(&self, x: &[Q]) -> Mat {
        let mut m = mat_zero(self.n);
        for (a, c) in x.iter().enumerate() {
            if !c.is_zero() {
                m = mat_add(&m, &self.matrices[a], c);
            }
        }
        m
    }

    pub fn bracket_basis(&self, a: usize, b: usize) -> &[(usize, Q)] {
        &self.brackets[a][b]
    }

    pub fn bracket(&self, x: &[Q], y: &[Q]) -> Vec<Q> {
        let mut out = vec![Q::zero(); self.dim];
        for (a, xa) in x.iter().enumerate().filter(|(_, v)| !v.is_zero()) {
            for (b, yb) in y.iter().enumerate().filter(|(_, v)| !v.is_zero()) {
                for (c, mu) in &self.brackets[a][b] {
                    out[*c] += xa * yb * mu;
                }
            }
        }
        out
    }

    pub fn unit(&self, a: usize) -> Vec<Q> {
        let mut v = vec![Q::zero(); self.dim];
        v[a] = Q::one();
        v
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn positive(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.dim).filter(|&a| self.kinds[a] == RootKind::Positive)
    }

    pub fn negative(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.dim).filter(|&a| self.kinds[a] == RootKind::Negative)
    }

    /// Indices of the Borel subalgebra `b = h + n`.
    pub fn borel(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.dim).filter(|&a| self.kinds[a] != RootKind::Negative)
    }

    pub fn kappa0(&self) -> &Mat {
        &self.kappa0
    }

    pub fn killing(&self) -> Mat {
        let ad: Vec<Mat> = (0..self.dim)
            .map(|a| {
                let mut m = mat_zero(self.dim);
                for b in 0..self.dim {
                    for (c, mu) in &self.brackets[a][b] {
                        m[*c][b] = mu.clone();
                    }
                }
                m
            })
            .collect();
        (0..self.dim)
            .map(|a| (0..self.dim).map(|b| trace(&mat_mul(&ad[a], &ad[b]))).collect())
            .collect()
    }

    pub fn bilinear_form(&self, tag: FormTag) -> BilinearForm {
        let critical = || {
            self.killing()
                .into_iter()
                .map(|r| r.into_iter().map(|x| x * qf(-1, 2)).collect())
                .collect::<Mat>()
        };
        let matrix = match &tag {
            FormTag::Kappa0 => self.kappa0.clone(),
            FormTag::Killing => self.killing(),
            FormTag::Critical => critical(),
            FormTag::Family(h) => mat_add(&critical(), &self.kappa0, h),
        };
        BilinearForm { tag, matrix }
    }

    /// `kappa_c + h kappa0` with `h` kept symbolic.
    pub fn family_form(&self) -> Vec<Vec<PolyQ>> {
        let c = self.bilinear_form(FormTag::Critical).matrix;
        (0..self.dim)
            .map(|a| {
                (0..self.dim)
                    .map(|b| PolyQ::new(vec![c[a][b].clone(), self.kappa0[a][b].clone()]))
                    .collect()
            })
            .collect()
    }

    /// Jacobi identity over all basis triples.
    pub fn check_jacobi(&self) -> bool {
        (0..self.dim).all(|a| {
            (0..self.dim).all(|b| {
                (0..self.dim).all(|c| {
                    let (x, y, z) = (self.unit(a), self.unit(b), self.unit(c));
                    let t1 = self.bracket(&x, &self.bracket(&y, &z));
                    let t2 = self.bracket(&y, &self.bracket(&z, &x));
                    let t3 = self.bracket(&z, &self.bracket(&x, &y));
                    (0..self.dim).all(|i| (&t1[i] + &t2[i] + &t3[i]).is_zero())
                })
            })
        })
    }

    pub fn to_json(&self) -> serde_json::Value {
        let mut structure = Vec::new();
        for a in 0..self.dim {
            for b in 0..self.dim {
                for (c, mu) in &self.brackets[a][b] {
                    structure.push(serde_json::json!({
                        "a": self.labels[a], "b": self.labels[b], "c": self.labels[*c], "value": fmt_q(mu)
                    }));
                }
            }
        }
        let kappa0: Vec<Vec<String>> =
            self.kappa0.iter().map(|r| r.iter().map(fmt_q).collect()).collect();
        serde_json::json!({
            "name": self.name,
            "dim": self.dim,
            "rank": self.rank,
            "labels": self.labels,
            "exponents": self.exponents,
            "weights": self.weights,
            "structure": structure,
            "kappa0": kappa0,
        })
    }
}

fn unit_position(m: &Mat) -> (usize, usize) {
    for (i, r) in m.iter().enumerate() {
        for (j, x) in r.iter().enumerate() {
            if !x.is_zero() {
                return (i, j);
            }
        }
    }
    unreachable!("root vector has a nonzero entry")
}

#[derive(Clone, Debug, PartialEq)]
pub enum FormTag {
    Kappa0,
    Killing,
    Critical,
    /// `kappa_c + h kappa0`.
    Family(Q),
}

impl FromStr for FormTag {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "kappa0" => Ok(FormTag::Kappa0),
            "killing" => Ok(FormTag::Killing),
            "critical" => Ok(FormTag::Critical),
            _ => match s.strip_prefix("generic:") {
                Some(h) => Ok(FormTag::Family(crate::rational::parse_q(h)?)),
                None => Err(Error::InvalidTag(s.to_string())),
            },
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BilinearForm {
    pub tag: FormTag,
    pub matrix: Mat,
}

impl BilinearForm {
    pub fn eval(&self, x: &[Q], y: &[Q]) -> Q {
        let mut s = Q::zero();
        for (a, xa) in x.iter().enumerate().filter(|(_, v)| !v.is_zero()) {
            for (b, yb) in y.iter().enumerate().filter(|(_, v)| !v.is_zero()) {
                s += xa * yb * &self.matrix[a][b];
            }
        }
        s
    }

    pub fn is_symmetric(&self) -> bool {
        let n = self.matrix.len();
        (0..n).all(|a| (0..n).all(|b| self.matrix[a][b] == self.matrix[b][a]))
    }

    /// `k([x,y],z) + k(y,[x,z]) = 0` on all basis triples.
    pub fn is_invariant(&self, alg: &SimpleLieAlgebra) -> bool {
        (0..alg.dim).all(|a| {
            (0..alg.dim).all(|b| {
                (0..alg.dim).all(|c| {
                    let x = alg.unit(a);
                    let (y, z) = (alg.unit(b), alg.unit(c));
                    (self.eval(&alg.bracket(&x, &y), &z) + self.eval(&y, &alg.bracket(&x, &z))).is_zero()
                })
            })
        })
    }
}

// ---------------------------------------------------------------------------
// Polynomials on g*.

/// Sparse commutative polynomial; a monomial is the sorted multiset of
/// variable indices.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Poly(pub BTreeMap<Vec<usize>, Q>);

impl Poly {
    pub fn var(i: usize) -> Self {
        Poly(BTreeMap::from([(vec![i], Q::one())]))
    }
    pub fn constant(c: Q) -> Self {
        let mut m = BTreeMap::new();
        if !c.is_zero() {
            m.insert(Vec::new(), c);
        }
        Poly(m)
    }
    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }
    pub fn add_term(&mut self, mono: Vec<usize>, c: Q) {
        let e = self.0.entry(mono).or_insert_with(Q::zero);
        *e += c;
        if e.is_zero() {
            self.0.retain(|_, v| !v.is_zero());
        }
    }
    pub fn add(&self, o: &Poly) -> Poly {
        let mut r = self.clone();
        for (m, c) in &o.0 {
            r.add_term(m.clone(), c.clone());
        }
        r
    }
    pub fn scale(&self, s: &Q) -> Poly {
        if s.is_zero() {
            return Poly::default();
        }
        Poly(self.0.iter().map(|(m, c)| (m.clone(), c * s)).collect())
    }
    pub fn mul(&self, o: &Poly) -> Poly {
        let mut r = Poly::default();
        for (m1, c1) in &self.0 {
            for (m2, c2) in &o.0 {
                let mut m = m1.clone();
                m.extend_from_slice(m2);
                m.sort_unstable();
                r.add_term(m, c1 * c2);
            }
        }
        r
    }
    pub fn derivative(&self, i: usize) -> Poly {
        let mut r = Poly::default();
        for (m, c) in &self.0 {
            let k = m.iter().filter(|&&v| v == i).count();
            if k > 0 {
                let mut m2 = m.clone();
                let pos = m2.iter().position(|&v| v == i).expect("present");
                m2.remove(pos);
                r.add_term(m2, c * q(k as i64));
            }
        }
        r
    }
    pub fn eval(&self, x: &[Q]) -> Q {
        self.0.iter().map(|(m, c)| m.iter().fold(c.clone(), |acc, &i| acc * &x[i])).sum()
    }
    pub fn degree(&self) -> Option<usize> {
        self.0.keys().map(Vec::len).max()
    }
    pub fn is_homogeneous(&self) -> bool {
        let mut d = self.0.keys().map(Vec::len);
        match d.next() {
            Some(first) => d.all(|x| x == first),
            None => true,
        }
    }
}

#[derive(Clone, Debug)]
pub struct InvariantPolynomial {
    pub index: usize,
    pub degree: usize,
    /// Polynomial in the coordinates `x^a = phi(J^a)` on g*.
    pub poly: Poly,
}

impl SimpleLieAlgebra {
    /// Dual basis under kappa0: `kappa0(dual_a, J^b) = delta_ab`.
    pub fn kappa0_dual_basis(&self) -> Vec<Vec<Q>> {
        inverse_dense(&self.kappa0).expect("trace form is nondegenerate")
    }

    /// `P_i = tr(X^{d_i+1})` with `X = sum_a x^a dual_a`.
    pub fn invariant_polynomials(&self) -> Vec<InvariantPolynomial> {
        let dual = self.kappa0_dual_basis();
        let n = self.n;
        let mut x: Vec<Vec<Poly>> = vec![vec![Poly::default(); n]; n];
        for a in 0..self.dim {
            let m = self.matrix_of(&dual[a]);
            for i in 0..n {
                for j in 0..n {
                    if !m[i][j].is_zero() {
                        x[i][j] = x[i][j].add(&Poly::var(a).scale(&m[i][j]));
                    }
                }
            }
        }
        let mul = |a: &Vec<Vec<Poly>>, b: &Vec<Vec<Poly>>| -> Vec<Vec<Poly>> {
            (0..n)
                .map(|i| {
                    (0..n)
                        .map(|j| (0..n).fold(Poly::default(), |acc, k| acc.add(&a[i][k].mul(&b[k][j]))))
                        .collect()
                })
                .collect()
        };
        let mut power = x.clone();
        let mut out = Vec::new();
        for (i, d) in self.exponents.iter().enumerate() {
            while power_degree(&power) < (*d as usize + 1) {
                power = mul(&power, &x);
            }
            let tr = (0..n).fold(Poly::default(), |acc, k| acc.add(&power[k][k]));
            out.push(InvariantPolynomial { index: i + 1, degree: *d as usize + 1, poly: tr });
        }
        out
    }

    /// Coordinates of the point of g* corresponding to `y` under kappa0.
    pub fn dual_point(&self, y: &[Q]) -> Vec<Q> {
        (0..self.dim)
            .map(|a| (0..self.dim).map(|b| &y[b] * &self.kappa0[b][a]).sum())
            .collect()
    }

    /// Coadjoint vector field of `J^b` applied to `p`.
    pub fn coadjoint_derivative(&self, b: usize, p: &Poly) -> Poly {
        let mut r = Poly::default();
        for a in 0..self.dim {
            let dp = p.derivative(a);
            if dp.is_zero() {
                continue;
            }
            for (c, mu) in &self.brackets[b][a] {
                r = r.add(&dp.mul(&Poly::var(*c)).scale(mu));
            }
        }
        r
    }

    /// Rank of the Jacobian of the invariant polynomials at a random point.
    pub fn jacobian_rank(&self, polys: &[InvariantPolynomial], seed: u64) -> Result<usize> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let pt: Vec<Q> = (0..self.dim).map(|_| q(rng.gen_range(-9..=9))).collect();
        let rows: Vec<Vec<Q>> = polys
            .iter()
            .map(|p| (0..self.dim).map(|a| p.poly.derivative(a).eval(&pt)).collect())
            .collect();
        rank(&SparseMatrixQ::from_dense(&rows))
    }
}

fn power_degree(m: &[Vec<Poly>]) -> usize {
    m.iter().flatten().filter_map(Poly::degree).max().unwrap_or(0)
}

// ---------------------------------------------------------------------------
// Principal triple.

#[derive(Clone, Debug)]
pub struct PrincipalTriple {
    pub p_minus: Vec<Q>,
    pub rho_check: Vec<Q>,
    pub p_plus: Vec<Q>,
    /// `p_j` for `j = 1..rank`; `p[0]` is `p_plus`.
    pub p: Vec<Vec<Q>>,
    pub degrees: Vec<u32>,
}

impl SimpleLieAlgebra {
    pub fn principal_triple(&self) -> PrincipalTriple {
        let mut p_minus = vec![Q::zero(); self.dim];
        for &f in &self.f {
            p_minus[f] = Q::one();
        }
        // rho-check = sum c_i h_i with <alpha_j, rho-check> = 1.
        let a: Vec<Vec<Q>> = (0..self.rank)
            .map(|j| (0..self.rank).map(|i| q(self.weights[self.e[j]][i] as i64)).collect())
            .collect();
        let c = solve_dense(&a, &vec![Q::one(); self.rank]).expect("Cartan matrix invertible");
        let mut rho_check = vec![Q::zero(); self.dim];
        for (i, &h) in self.cartan.iter().enumerate() {
            rho_check[h] = c[i].clone();
        }
        // p_plus = sum b_i e_i with [p_plus, p_minus] = 2 rho-check; [e_i, f_i] = h_i.
        let mut p_plus = vec![Q::zero(); self.dim];
        for (i, &e) in self.e.iter().enumerate() {
            p_plus[e] = &c[i] * q(2);
        }
        let max_h = *self.heights.iter().max().expect("nonempty") as usize;
        let mut p = vec![p_plus.clone()];
        let mut degrees = vec![1];
        for k in 2..=max_h {
            let src: Vec<usize> = (0..self.dim).filter(|&a| self.heights[a] == k as i32).collect();
            let cols: Vec<Vec<Q>> = src.iter().map(|&a| self.bracket(&p_plus, &self.unit(a))).collect();
            let m = SparseMatrixQ::from_dense(
                &(0..self.dim).map(|r| cols.iter().map(|c| c[r].clone()).collect()).collect::<Vec<_>>(),
            );
            for kv in kernel_basis(&m) {
                let kv = svec_to_dense(&kv, src.len());
                let lead = kv.iter().find(|x| !x.is_zero()).expect("nonzero").clone();
                let mut v = vec![Q::zero(); self.dim];
                for (i, &a) in src.iter().enumerate() {
                    v[a] = &kv[i] / &lead;
                }
                p.push(v);
                degrees.push(k as u32);
            }
        }
        PrincipalTriple { p_minus, rho_check, p_plus, p, degrees }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sl(n: &str) -> SimpleLieAlgebra {
        build_simple_lie_algebra(n).unwrap()
    }

    #[test]
    fn basic_data() {
        let a = sl("sl2");
        assert_eq!((a.dim, a.exponents.clone()), (3, vec![1]));
        let b = sl("sl3");
        assert_eq!((b.dim, b.exponents.clone()), (8, vec![1, 2]));
        assert!(matches!(build_simple_lie_algebra("so5"), Err(Error::UnknownAlgebra(_))));
    }

    #[test]
    fn sl2_brackets() {
        let a = sl("sl2");
        let (e, h, f) = (0, 1, 2);
        assert_eq!(a.bracket_basis(e, f), &[(h, q(1))]);
        assert_eq!(a.bracket_basis(h, e), &[(e, q(2))]);
        assert_eq!(a.bracket_basis(h, f), &[(f, q(-2))]);
        assert_eq!(a.weights, vec![vec![2], vec![0], vec![-2]]);
    }

    #[test]
    fn jacobi_and_antisymmetry() {
        for name in ["sl2", "sl3"] {
            let a = sl(name);
            assert!(a.check_jacobi());
            for x in 0..a.dim {
                for y in 0..a.dim {
                    let s = a.bracket(&a.unit(x), &a.unit(y));
                    let t = a.bracket(&a.unit(y), &a.unit(x));
                    assert!(s.iter().zip(&t).all(|(u, v)| (u + v).is_zero()));
                }
            }
        }
    }

    #[test]
    fn representation_is_faithful_and_compatible() {
        for name in ["sl2", "sl3"] {
            let a = sl(name);
            for x in 0..a.dim {
                assert_eq!(a.coords(&a.matrices[x]), a.unit(x));
                for y in 0..a.dim {
                    let lhs = a.matrix_of(&a.bracket(&a.unit(x), &a.unit(y)));
                    assert_eq!(lhs, commutator(&a.matrices[x], &a.matrices[y]));
                }
            }
        }
    }

    #[test]
    fn forms() {
        let a = sl("sl2");
        let k = a.bilinear_form(FormTag::Killing);
        let c = a.bilinear_form(FormTag::Critical);
        let k0 = a.bilinear_form(FormTag::Kappa0);
        assert_eq!(k.matrix[1][1], q(8));
        assert_eq!(c.matrix[1][1], q(-4));
        assert_eq!(c.matrix[0][2], q(-2));
        assert_eq!(k0.matrix[0][2], q(1));
        for name in ["sl2", "sl3"] {
            let a = sl(name);
            for tag in [FormTag::Kappa0, FormTag::Killing, FormTag::Critical, FormTag::Family(qf(3, 7))] {
                let f = a.bilinear_form(tag);
                assert!(f.is_symmetric() && f.is_invariant(&a));
            }
            let k = a.bilinear_form(FormTag::Killing).matrix;
            let c = a.bilinear_form(FormTag::Critical).matrix;
            for i in 0..a.dim {
                for j in 0..a.dim {
                    assert_eq!(&c[i][j] * q(-2), k[i][j]);
                }
            }
        }
    }

    #[test]
    fn invariant_polynomials_sl2() {
        let a = sl("sl2");
        let p = a.invariant_polynomials();
        assert_eq!(p.len(), 1);
        assert_eq!(p[0].degree, 2);
        // Independent oracle: tr(y^2) for the matrix y itself.
        let h = a.dual_point(&a.unit(1));
        assert_eq!(p[0].poly.eval(&h), q(2));
        assert_eq!(p[0].poly.eval(&a.dual_point(&a.unit(0))), q(0));
    }

    #[test]
    fn invariant_polynomials_are_invariant_and_independent() {
        for name in ["sl2", "sl3"] {
            let a = sl(name);
            let ps = a.invariant_polynomials();
            let degs: Vec<usize> = ps.iter().map(|p| p.degree).collect();
            let expect: Vec<usize> = a.exponents.iter().map(|d| *d as usize + 1).collect();
            assert_eq!(degs, expect);
            for p in &ps {
                assert!(p.poly.is_homogeneous());
                for b in 0..a.dim {
                    assert!(a.coadjoint_derivative(b, &p.poly).is_zero());
                }
            }
            assert_eq!(a.jacobian_rank(&ps, 7).unwrap(), a.rank);
        }
    }

    #[test]
    fn invariant_polynomials_match_trace_powers() {
        // Evaluate at random points against tr(y^k) computed from matrices.
        let a = sl("sl3");
        let ps = a.invariant_polynomials();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..5 {
            let y: Vec<Q> = (0..a.dim).map(|_| q(rng.gen_range(-5..=5))).collect();
            let m = a.matrix_of(&y);
            let m2 = mat_mul(&m, &m);
            let m3 = mat_mul(&m2, &m);
            let pt = a.dual_point(&y);
            assert_eq!(ps[0].poly.eval(&pt), trace(&m2));
            assert_eq!(ps[1].poly.eval(&pt), trace(&m3));
        }
    }

    #[test]
    fn principal_triples() {
        for name in ["sl2", "sl3"] {
            let a = sl(name);
            let t = a.principal_triple();
            let two_rho: Vec<Q> = t.rho_check.iter().map(|x| x * q(2)).collect();
            assert_eq!(a.bracket(&t.p_plus, &t.p_minus), two_rho);
            assert_eq!(a.bracket(&two_rho, &t.p_plus), t.p_plus.iter().map(|x| x * q(2)).collect::<Vec<_>>());
            assert_eq!(a.bracket(&two_rho, &t.p_minus), t.p_minus.iter().map(|x| x * q(-2)).collect::<Vec<_>>());
            for &e in &a.e {
                assert_eq!(a.bracket(&t.rho_check, &a.unit(e)), a.unit(e));
            }
            assert_eq!(t.degrees, a.exponents);
            for (pj, d) in t.p.iter().zip(&t.degrees) {
                assert!(a.bracket(&t.p_plus, pj).iter().all(Zero::is_zero));
                let s: Vec<Q> = pj.iter().map(|x| x * q(*d as i64)).collect();
                assert_eq!(a.bracket(&t.rho_check, pj), s);
            }
            for x in 0..a.dim {
                let expect: Vec<Q> = a.unit(x).iter().map(|v| v * q(a.heights[x] as i64)).collect();
                assert_eq!(a.bracket(&t.rho_check, &a.unit(x)), expect);
            }
        }
        let a = sl("sl2");
        assert_eq!(a.principal_triple().p_plus, a.unit(0));
        let b = sl("sl3");
        let t = b.principal_triple();
        assert_eq!(t.p_plus, vec![q(2), q(2), q(0), q(0), q(0), q(0), q(0), q(0)]);
        assert_eq!(t.p[1], b.unit(b.index_of("e12").unwrap()));
    }

    #[test]
    fn json_export_uses_rational_strings() {
        let v = sl("sl2").to_json();
        assert_eq!(v["name"], "sl2");
        assert!(v["structure"].as_array().unwrap().iter().any(|e| e["value"] == "-2/1"));
    }
}
