//! Exact coefficients: rationals and polynomials in the deformation parameter.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt;

use crate::error::{Error, Result};

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn qf(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// Renders as `p/q` with `q > 0`, including integers (`3/1`).
pub fn fmt_q(x: &Q) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

/// Accepts `p/q` or a bare integer.
pub fn parse_q(s: &str) -> Result<Q> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational: `{s}`"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(Q::new(n, d))
        }
        None => Ok(Q::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

pub fn binom(n: i64, k: i64) -> Q {
    // Generalized binomial: n may be negative, k < 0 gives 0.
    if k < 0 {
        return Q::zero();
    }
    let mut acc = Q::one();
    for i in 0..k {
        acc = acc * q(n - i) / q(i + 1);
    }
    acc
}

/// Coefficient ring used by module actions and differentials.
pub trait Coeff: Clone + PartialEq + fmt::Debug + Send + Sync + 'static {
    fn czero() -> Self;
    fn cone() -> Self;
    fn is_czero(&self) -> bool;
    fn cadd(&self, o: &Self) -> Self;
    fn cmul(&self, o: &Self) -> Self;
    fn cneg(&self) -> Self;
    fn from_q(x: Q) -> Self;
    fn cscale(&self, x: &Q) -> Self;
    fn cadd_assign(&mut self, o: &Self) {
        *self = self.cadd(o);
    }
}

impl Coeff for Q {
    fn czero() -> Self {
        Zero::zero()
    }
    fn cone() -> Self {
        One::one()
    }
    fn is_czero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn cadd(&self, o: &Self) -> Self {
        self + o
    }
    fn cmul(&self, o: &Self) -> Self {
        self * o
    }
    fn cneg(&self) -> Self {
        -self
    }
    fn from_q(x: Q) -> Self {
        x
    }
    fn cscale(&self, x: &Q) -> Self {
        self * x
    }
    fn cadd_assign(&mut self, o: &Self) {
        *self += o;
    }
}

/// Polynomial in `h` with rational coefficients, lowest degree first.
/// Trailing zeros are never stored.
#[derive(Clone, PartialEq, Eq, Debug, Default, Hash)]
pub struct PolyQ(Vec<Q>);

impl PolyQ {
    pub fn new(mut c: Vec<Q>) -> Self {
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        PolyQ(c)
    }
    pub fn h() -> Self {
        PolyQ(vec![Q::zero(), Q::one()])
    }
    pub fn coeffs(&self) -> &[Q] {
        &self.0
    }
    /// Coefficient of `h^k`.
    pub fn coeff(&self, k: usize) -> Q {
        self.0.get(k).cloned().unwrap_or_else(Q::zero)
    }
    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }
    pub fn eval(&self, h: &Q) -> Q {
        self.0.iter().rev().fold(Q::zero(), |acc, c| acc * h + c)
    }
}

impl Coeff for PolyQ {
    fn czero() -> Self {
        PolyQ(Vec::new())
    }
    fn cone() -> Self {
        PolyQ(vec![Q::one()])
    }
    fn is_czero(&self) -> bool {
        self.0.is_empty()
    }
    fn cadd(&self, o: &Self) -> Self {
        let n = self.0.len().max(o.0.len());
        PolyQ::new((0..n).map(|i| self.coeff(i) + o.coeff(i)).collect())
    }
    fn cmul(&self, o: &Self) -> Self {
        if self.0.is_empty() || o.0.is_empty() {
            return PolyQ(Vec::new());
        }
        let mut c = vec![Q::zero(); self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in o.0.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        PolyQ::new(c)
    }
    fn cneg(&self) -> Self {
        PolyQ(self.0.iter().map(|c| -c).collect())
    }
    fn from_q(x: Q) -> Self {
        PolyQ::new(vec![x])
    }
    fn cscale(&self, x: &Q) -> Self {
        PolyQ::new(self.0.iter().map(|c| c * x).collect())
    }
}

impl fmt::Display for PolyQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "0");
        }
        let terms: Vec<String> = self
            .0
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| match k {
                0 => fmt_q(c),
                1 => format!("{}*h", fmt_q(c)),
                _ => format!("{}*h^{k}", fmt_q(c)),
            })
            .collect();
        write!(f, "{}", terms.join(" + "))
    }
}

/// Sign of an integer as a rational, `(-1)^k`.
pub fn sign(k: i64) -> Q {
    if k.rem_euclid(2) == 0 {
        Q::one()
    } else {
        -Q::one()
    }
}

pub fn is_integer(x: &Q) -> bool {
    x.is_integer()
}

pub fn abs(x: &Q) -> Q {
    x.abs()
}
