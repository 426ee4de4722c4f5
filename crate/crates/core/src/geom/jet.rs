//! Second-order forward-mode jets.
//!
//! A [`Jet2`] carries a value together with its gradient and Hessian with
//! respect to up to [`MAX_DIM`] seeded coordinates. Metric builders write
//! their component formulas once, generically over [`Scalar`], and get exact
//! first and second partials of the metric by evaluating on jets.

use std::ops::{Add, Div, Mul, Neg, Sub};

/// Largest chart dimension supported by the jet fast path.
pub const MAX_DIM: usize = 12;
const TRI: usize = MAX_DIM * (MAX_DIM + 1) / 2;

#[inline]
const fn tri(i: usize, j: usize) -> usize {
    // packed upper triangle, i <= j
    i * MAX_DIM - i * (i + 1) / 2 + j
}

/// Numeric types usable inside metric formulas.
pub trait Scalar:
    Copy
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn cst(c: f64) -> Self;
    fn value(&self) -> f64;
    /// Apply a scalar function given its value and first two derivatives at
    /// `self.value()`.
    fn lift(self, f0: f64, f1: f64, f2: f64) -> Self;

    fn sin(self) -> Self {
        let x = self.value();
        let (s, c) = x.sin_cos();
        self.lift(s, c, -s)
    }
    fn cos(self) -> Self {
        let x = self.value();
        let (s, c) = x.sin_cos();
        self.lift(c, -s, -c)
    }
    fn sqr(self) -> Self {
        self * self
    }
    fn sqrt(self) -> Self {
        let r = self.value().sqrt();
        self.lift(r, 0.5 / r, -0.25 / (r * r * r))
    }
    fn scale(self, c: f64) -> Self {
        Self::cst(c) * self
    }
}

impl Scalar for f64 {
    #[inline]
    fn cst(c: f64) -> Self {
        c
    }
    #[inline]
    fn value(&self) -> f64 {
        *self
    }
    #[inline]
    fn lift(self, f0: f64, _f1: f64, _f2: f64) -> Self {
        f0
    }
    #[inline]
    fn sin(self) -> Self {
        f64::sin(self)
    }
    #[inline]
    fn cos(self) -> Self {
        f64::cos(self)
    }
    #[inline]
    fn sqrt(self) -> Self {
        f64::sqrt(self)
    }
    #[inline]
    fn scale(self, c: f64) -> Self {
        c * self
    }
}

/// Value, gradient and Hessian of a function of `n` seeded variables.
#[derive(Clone, Copy, Debug)]
pub struct Jet2 {
    n: usize,
    v: f64,
    g: [f64; MAX_DIM],
    h: [f64; TRI],
}

impl Jet2 {
    /// The `i`-th coordinate of an `n`-dimensional point, as an independent variable.
    pub fn variable(n: usize, i: usize, x: f64) -> Self {
        assert!(n <= MAX_DIM && i < n, "jet dimension {n} out of range");
        let mut j = Self::constant(x);
        j.n = n;
        j.g[i] = 1.0;
        j
    }

    pub fn constant(x: f64) -> Self {
        Self { n: 0, v: x, g: [0.0; MAX_DIM], h: [0.0; TRI] }
    }

    pub fn grad(&self, i: usize) -> f64 {
        self.g[i]
    }

    pub fn hess(&self, i: usize, j: usize) -> f64 {
        let (a, b) = if i <= j { (i, j) } else { (j, i) };
        self.h[tri(a, b)]
    }
}

impl Scalar for Jet2 {
    #[inline]
    fn cst(c: f64) -> Self {
        Jet2::constant(c)
    }
    #[inline]
    fn value(&self) -> f64 {
        self.v
    }
    fn lift(self, f0: f64, f1: f64, f2: f64) -> Self {
        let mut out = Jet2::constant(f0);
        out.n = self.n;
        for i in 0..self.n {
            out.g[i] = f1 * self.g[i];
            for j in i..self.n {
                let k = tri(i, j);
                out.h[k] = f1 * self.h[k] + f2 * self.g[i] * self.g[j];
            }
        }
        out
    }
}

impl Add for Jet2 {
    type Output = Jet2;
    fn add(self, o: Jet2) -> Jet2 {
        let mut out = self;
        out.n = self.n.max(o.n);
        out.v += o.v;
        for i in 0..o.n {
            out.g[i] += o.g[i];
            for j in i..o.n {
                out.h[tri(i, j)] += o.h[tri(i, j)];
            }
        }
        out
    }
}

impl Neg for Jet2 {
    type Output = Jet2;
    fn neg(self) -> Jet2 {
        let mut out = self;
        out.v = -out.v;
        for i in 0..self.n {
            out.g[i] = -out.g[i];
            for j in i..self.n {
                out.h[tri(i, j)] = -out.h[tri(i, j)];
            }
        }
        out
    }
}

impl Sub for Jet2 {
    type Output = Jet2;
    fn sub(self, o: Jet2) -> Jet2 {
        self + (-o)
    }
}

impl Mul for Jet2 {
    type Output = Jet2;
    fn mul(self, o: Jet2) -> Jet2 {
        let n = self.n.max(o.n);
        let mut out = Jet2::constant(self.v * o.v);
        out.n = n;
        for i in 0..n {
            out.g[i] = self.v * o.g[i] + o.v * self.g[i];
            for j in i..n {
                let k = tri(i, j);
                out.h[k] = self.v * o.h[k]
                    + o.v * self.h[k]
                    + self.g[i] * o.g[j]
                    + self.g[j] * o.g[i];
            }
        }
        out
    }
}

impl Div for Jet2 {
    type Output = Jet2;
    fn div(self, o: Jet2) -> Jet2 {
        let x = o.v;
        self * o.lift(1.0 / x, -1.0 / (x * x), 2.0 / (x * x * x))
    }
}
