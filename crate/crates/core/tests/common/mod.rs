//! Brute-force reference computations in `f64` over small integer data.
//!
//! Nothing here calls into the crate's arithmetic: extended values are plain
//! `f64` infinities with the sum convention spelled out by hand, and every
//! supremum is a direct double loop. Integer data keeps every value exact.
#![allow(dead_code)]

use econvex_core::scalar::{q, Rational};
use econvex_core::ExtReal;

pub const INF: f64 = f64::INFINITY;

/// `a + b` where any `-inf` wins.
pub fn add(a: f64, b: f64) -> f64 {
    if a == -INF || b == -INF {
        -INF
    } else {
        a + b
    }
}

/// `a - b = a + (-b)`.
pub fn sub(a: f64, b: f64) -> f64 {
    add(a, -b)
}

pub fn max(xs: impl IntoIterator<Item = f64>) -> f64 {
    xs.into_iter().fold(-INF, f64::max)
}

pub fn min(xs: impl IntoIterator<Item = f64>) -> f64 {
    xs.into_iter().fold(INF, f64::min)
}

/// A dual point `(x*, u*, alpha)` in one dimension.
pub type W = (f64, f64, f64);

pub fn c(x: f64, w: W) -> f64 {
    if x * w.1 < w.2 {
        x * w.0
    } else {
        INF
    }
}

/// `f^c(w) = max_x c(x, w) - f(x)`.
pub fn conj(xs: &[f64], f: &[f64], w: W) -> f64 {
    max(xs.iter().zip(f).map(|(&x, &v)| sub(c(x, w), v)))
}

/// `g^{c'}(x) = max_w c(x, w) - g(w)`.
pub fn conj_prime(ws: &[W], g: &[f64], x: f64) -> f64 {
    max(ws.iter().zip(g).map(|(&w, &v)| sub(c(x, w), v)))
}

pub fn hull(xs: &[f64], f: &[f64], ws: &[W]) -> Vec<f64> {
    let g: Vec<f64> = ws.iter().map(|&w| conj(xs, f, w)).collect();
    xs.iter().map(|&x| conj_prime(ws, &g, x)).collect()
}

pub fn tensor(xstars: &[f64], ustars: &[f64], alphas: &[f64]) -> Vec<W> {
    let mut out = Vec::new();
    for &a in xstars {
        for &b in ustars {
            for &al in alphas {
                out.push((a, b, al));
            }
        }
    }
    out
}

/// A one-dimensional perturbation problem held as a dense table.
pub struct Problem {
    pub xs: Vec<f64>,
    pub ys: Vec<f64>,
    /// `phi[i][j] = Phi(xs[i], ys[j])`.
    pub phi: Vec<Vec<f64>>,
    pub dual_y: Vec<W>,
}

impl Problem {
    pub fn new(xs: Vec<f64>, ys: Vec<f64>, dual_y: Vec<W>, phi: impl Fn(f64, f64) -> f64) -> Self {
        let table = xs.iter().map(|&x| ys.iter().map(|&y| phi(x, y)).collect()).collect();
        Problem { xs, ys, phi: table, dual_y }
    }

    fn origin(&self) -> usize {
        self.ys.iter().position(|&y| y == 0.0).expect("origin")
    }

    pub fn primal(&self) -> f64 {
        let j = self.origin();
        min(self.phi.iter().map(|row| row[j]))
    }

    /// `G(w) = max_{x, y} c(y, w) - Phi(x, y)`.
    pub fn g(&self, w: W) -> f64 {
        max(self.phi.iter().flat_map(|row| self.ys.iter().zip(row).map(move |(&y, &v)| sub(c(y, w), v))))
    }

    pub fn dual(&self) -> f64 {
        max(self.dual_y.iter().map(|&w| -self.g(w)))
    }

    /// `L(x_i, w) = min over Y_x of Phi(x, y) - c(y, w)`.
    pub fn lagrangian(&self, i: usize, w: W) -> f64 {
        min(self.ys.iter().zip(&self.phi[i]).filter(|(_, &v)| v < INF).map(|(&y, &v)| sub(v, c(y, w))))
    }
}

pub fn ext(v: f64) -> ExtReal<Rational> {
    if v == INF {
        ExtReal::PosInf
    } else if v == -INF {
        ExtReal::NegInf
    } else {
        assert_eq!(v.fract(), 0.0, "oracle values stay integral");
        ExtReal::new(q(v as i64, 1))
    }
}

pub fn ints(lo: i64, hi: i64) -> Vec<f64> {
    (lo..=hi).map(|k| k as f64).collect()
}

pub fn nonpos(t: f64) -> f64 {
    if t <= 0.0 {
        0.0
    } else {
        INF
    }
}
