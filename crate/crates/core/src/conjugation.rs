//! The couplings `c`, `c'`, `c-bar` and the conjugation operators built on them.
//!
//! For `w = (x*, u*, alpha)` the coupling is `c(x, w) = <x, x*>` when
//! `<x, u*> < alpha` and `+inf` otherwise, with `c'(w, x) = c(x, w)`. The
//! paired coupling on `X x Y` is the same rule applied to concatenated
//! vectors. All suprema range over the supplied grid only.

use alloc::vec::Vec;

use crate::error::Error;
use crate::extreal::ExtReal;
use crate::funcrep::{check_distinct, Endpoint, Grid, GridLike, PhiTable, PieceValue, PwAffine1, Sampled, SampledFn};
use crate::scalar::{dot, Scalar};

/// Read access to the three components of a dual point. For a paired dual
/// point the slope is `(x*, y*)` and the gate is `(u*, v*)`.
pub trait Dual<S> {
    fn slope(&self) -> &[S];
    fn gate(&self) -> &[S];
    fn alpha(&self) -> &S;
}

/// `(x*, u*, alpha)`.
#[derive(Clone, Debug, PartialEq)]
pub struct DualPoint<S> {
    pub xstar: Vec<S>,
    pub ustar: Vec<S>,
    pub alpha: S,
}

impl<S: Scalar> DualPoint<S> {
    pub fn new(xstar: Vec<S>, ustar: Vec<S>, alpha: S) -> Self {
        DualPoint { xstar, ustar, alpha }
    }

    pub fn dim(&self) -> usize {
        self.xstar.len()
    }

    /// Coordinates `(x*, u*, alpha)` flattened.
    pub fn coords(&self) -> Vec<S> {
        let mut v = self.xstar.clone();
        v.extend_from_slice(&self.ustar);
        v.push(self.alpha.clone());
        v
    }
}

impl<S> Dual<S> for DualPoint<S> {
    fn slope(&self) -> &[S] {
        &self.xstar
    }
    fn gate(&self) -> &[S] {
        &self.ustar
    }
    fn alpha(&self) -> &S {
        &self.alpha
    }
}

/// `((x*, y*), (u*, v*), alpha)`.
#[derive(Clone, Debug, PartialEq)]
pub struct DualPairPoint<S> {
    x_dim: usize,
    slope: Vec<S>,
    gate: Vec<S>,
    alpha: S,
}

impl<S: Scalar> DualPairPoint<S> {
    pub fn new(xstar: &[S], ystar: &[S], ustar: &[S], vstar: &[S], alpha: S) -> Result<Self, Error> {
        if xstar.len() != ustar.len() {
            return Err(Error::DimensionMismatch { expected: xstar.len(), found: ustar.len() });
        }
        if ystar.len() != vstar.len() {
            return Err(Error::DimensionMismatch { expected: ystar.len(), found: vstar.len() });
        }
        let mut slope = xstar.to_vec();
        slope.extend_from_slice(ystar);
        let mut gate = ustar.to_vec();
        gate.extend_from_slice(vstar);
        Ok(DualPairPoint { x_dim: xstar.len(), slope, gate, alpha })
    }

    /// `((0, y*), (0, v*), alpha)` for a dual point of `W_Y`.
    pub fn embed(x_dim: usize, w: &DualPoint<S>) -> Self {
        let zeros = alloc::vec![S::zero(); x_dim];
        Self::new(&zeros, &w.xstar, &zeros, &w.ustar, w.alpha.clone()).expect("matching dimensions")
    }

    pub fn xstar(&self) -> &[S] {
        &self.slope[..self.x_dim]
    }
    pub fn ystar(&self) -> &[S] {
        &self.slope[self.x_dim..]
    }
    pub fn ustar(&self) -> &[S] {
        &self.gate[..self.x_dim]
    }
    pub fn vstar(&self) -> &[S] {
        &self.gate[self.x_dim..]
    }

    /// The projection `(x*, u*, alpha)` onto `W`.
    pub fn project_w(&self) -> DualPoint<S> {
        DualPoint::new(self.xstar().to_vec(), self.ustar().to_vec(), self.alpha.clone())
    }

    /// The `(y*, v*, alpha)` component.
    pub fn project_y(&self) -> DualPoint<S> {
        DualPoint::new(self.ystar().to_vec(), self.vstar().to_vec(), self.alpha.clone())
    }
}

impl<S> Dual<S> for DualPairPoint<S> {
    fn slope(&self) -> &[S] {
        &self.slope
    }
    fn gate(&self) -> &[S] {
        &self.gate
    }
    fn alpha(&self) -> &S {
        &self.alpha
    }
}

/// Finite subset of `W = X* x X* x R`.
#[derive(Clone, Debug, PartialEq)]
pub struct DualGrid<S> {
    dim: usize,
    points: Vec<DualPoint<S>>,
    alpha_positive: bool,
}

impl<S: Scalar> DualGrid<S> {
    pub fn new(dim: usize, points: Vec<DualPoint<S>>) -> Result<Self, Error> {
        for p in &points {
            for d in [p.xstar.len(), p.ustar.len()] {
                if d != dim {
                    return Err(Error::DimensionMismatch { expected: dim, found: d });
                }
            }
        }
        check_distinct(&points.iter().map(DualPoint::coords).collect::<Vec<_>>())?;
        let alpha_positive = points.iter().all(|p| p.alpha > S::zero());
        Ok(DualGrid { dim, points, alpha_positive })
    }

    /// Every combination of the given `x*`, `u*` and `alpha` values.
    pub fn tensor(dim: usize, xstars: &[Vec<S>], ustars: &[Vec<S>], alphas: &[S]) -> Result<Self, Error> {
        let mut points = Vec::with_capacity(xstars.len() * ustars.len() * alphas.len());
        for xs in xstars {
            for us in ustars {
                for a in alphas {
                    points.push(DualPoint::new(xs.clone(), us.clone(), a.clone()));
                }
            }
        }
        Self::new(dim, points)
    }

    /// One-dimensional tensor grid whose `x*` list is `slopes` extended by the
    /// slopes of `f`, so that affine pieces of `f` are recovered exactly.
    pub fn adapted(f: &PwAffine1<S>, slopes: &[S], ustars: &[S], alphas: &[S]) -> Result<Self, Error> {
        let mut xs: Vec<S> = slopes.to_vec();
        for s in f.slopes() {
            if !xs.contains(&s) {
                xs.push(s);
            }
        }
        let wrap = |v: &[S]| v.iter().map(|t| alloc::vec![t.clone()]).collect::<Vec<_>>();
        Self::tensor(1, &wrap(&xs), &wrap(ustars), alphas)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn alpha_positive(&self) -> bool {
        self.alpha_positive
    }

    pub fn point(&self, i: usize) -> &DualPoint<S> {
        &self.points[i]
    }

    /// True when some coordinate of point `i` is extreme over the grid.
    pub fn is_boundary(&self, i: usize) -> bool {
        if self.points.len() <= 1 {
            return false;
        }
        let coords: Vec<Vec<S>> = self.points.iter().map(DualPoint::coords).collect();
        let me = &coords[i];
        (0..me.len()).any(|k| {
            let lo = coords.iter().all(|c| c[k] >= me[k]);
            let hi = coords.iter().all(|c| c[k] <= me[k]);
            (lo || hi) && coords.iter().any(|c| c[k] != me[k])
        })
    }
}

impl<S: Scalar> GridLike for DualGrid<S> {
    type Scalar = S;
    type Point = DualPoint<S>;
    fn points(&self) -> &[DualPoint<S>] {
        &self.points
    }
}

/// Finite subset of `(X* x Y*) x (X* x Y*) x R`.
#[derive(Clone, Debug, PartialEq)]
pub struct PairDualGrid<S> {
    x_dim: usize,
    y_dim: usize,
    points: Vec<DualPairPoint<S>>,
}

impl<S: Scalar> PairDualGrid<S> {
    pub fn new(x_dim: usize, y_dim: usize, points: Vec<DualPairPoint<S>>) -> Result<Self, Error> {
        for p in &points {
            if p.x_dim != x_dim {
                return Err(Error::DimensionMismatch { expected: x_dim, found: p.x_dim });
            }
            if p.slope.len() != x_dim + y_dim {
                return Err(Error::DimensionMismatch { expected: x_dim + y_dim, found: p.slope.len() });
            }
        }
        let keys: Vec<Vec<S>> = points
            .iter()
            .map(|p| {
                let mut k = p.slope.clone();
                k.extend_from_slice(&p.gate);
                k.push(p.alpha.clone());
                k
            })
            .collect();
        check_distinct(&keys)?;
        Ok(PairDualGrid { x_dim, y_dim, points })
    }

    /// `((x*, y*), (u*, v*), alpha)` for every `(x*, u*)` pair and every
    /// `(y*, v*, alpha)` in `dual_y`. Point `k * dual_y.len() + j` uses pair
    /// `k` and dual point `j`.
    pub fn product(x_dim: usize, xu_pairs: &[(Vec<S>, Vec<S>)], dual_y: &DualGrid<S>) -> Result<Self, Error> {
        let mut points = Vec::with_capacity(xu_pairs.len() * dual_y.len());
        for (xs, us) in xu_pairs {
            for w in dual_y.points() {
                points.push(DualPairPoint::new(xs, &w.xstar, us, &w.ustar, w.alpha.clone())?);
            }
        }
        Self::new(x_dim, dual_y.dim(), points)
    }

    pub fn x_dim(&self) -> usize {
        self.x_dim
    }

    pub fn y_dim(&self) -> usize {
        self.y_dim
    }

    pub fn point(&self, i: usize) -> &DualPairPoint<S> {
        &self.points[i]
    }
}

impl<S: Scalar> GridLike for PairDualGrid<S> {
    type Scalar = S;
    type Point = DualPairPoint<S>;
    fn points(&self) -> &[DualPairPoint<S>] {
        &self.points
    }
}

pub type DualFn<S> = Sampled<DualGrid<S>>;
pub type PairDualFn<S> = Sampled<PairDualGrid<S>>;

/// The coupling rule on a primal vector `z` and any dual point.
pub fn couple<S: Scalar, D: Dual<S> + ?Sized>(z: &[S], w: &D) -> ExtReal<S> {
    if dot(z, w.gate()) < *w.alpha() {
        ExtReal::new(dot(z, w.slope()))
    } else {
        ExtReal::PosInf
    }
}

/// `c(x, (x*, u*, alpha))`.
pub fn coupling_c<S: Scalar>(x: &[S], w: &DualPoint<S>) -> ExtReal<S> {
    couple(x, w)
}

/// `c'((x*, u*, alpha), x) = c(x, (x*, u*, alpha))`.
pub fn coupling_cprime<S: Scalar>(w: &DualPoint<S>, x: &[S]) -> ExtReal<S> {
    couple(x, w)
}

/// `c-bar((x, y), ((x*, y*), (u*, v*), alpha))`.
pub fn coupling_cbar<S: Scalar>(x: &[S], y: &[S], w: &DualPairPoint<S>) -> ExtReal<S> {
    let gate = dot(x, w.ustar()) + dot(y, w.vstar());
    if gate < w.alpha {
        ExtReal::new(dot(x, w.xstar()) + dot(y, w.ystar()))
    } else {
        ExtReal::PosInf
    }
}

/// `c-bar'(W, (x, y)) = c-bar((x, y), W)`.
pub fn coupling_cbar_prime<S: Scalar>(w: &DualPairPoint<S>, x: &[S], y: &[S]) -> ExtReal<S> {
    coupling_cbar(x, y, w)
}

// `sup [c(z, w) - v]` over triples with `v < +inf`. Stops at the first `+inf`
// term, which comes from a failed gate or from `v = -inf`.
fn sup_coupled<'a, S: Scalar + 'a, D: Dual<S> + ?Sized + 'a>(terms: impl Iterator<Item = (&'a [S], &'a D, &'a ExtReal<S>)>) -> ExtReal<S> {
    let mut best = ExtReal::NegInf;
    for (z, w, v) in terms {
        let v = match v {
            ExtReal::Finite(v) => v,
            _ => return ExtReal::PosInf,
        };
        if dot(z, w.gate()) >= *w.alpha() {
            return ExtReal::PosInf;
        }
        let t = ExtReal::new(dot(z, w.slope()) - v.clone());
        if t > best {
            best = t;
        }
    }
    best
}

// `sup_z [c(z, w) - f(z)]` for each dual point, in dual-grid order.
fn sup_engine<S: Scalar, D: Dual<S> + Sync>(points: &[&[S]], values: &[ExtReal<S>], duals: &[D]) -> Vec<ExtReal<S>> {
    // Points where f = +inf contribute -inf whatever the coupling.
    let live: Vec<(&[S], &ExtReal<S>)> = points.iter().copied().zip(values).filter(|(_, f)| !f.is_pos_inf()).collect();
    let one = |w: &D| sup_coupled(live.iter().map(|(z, f)| (*z, w, *f)));
    #[cfg(feature = "rayon")]
    {
        use rayon::prelude::*;
        duals.par_iter().map(one).collect()
    }
    #[cfg(not(feature = "rayon"))]
    {
        duals.iter().map(one).collect()
    }
}

// `sup_w [c'(w, z) - g(w)]` for each primal point, in primal-grid order.
fn sup_engine_prime<S: Scalar, D: Dual<S> + Sync>(duals: &[D], values: &[ExtReal<S>], points: &[&[S]]) -> Vec<ExtReal<S>> {
    // Dual points where g = +inf contribute -inf whatever the coupling.
    let live: Vec<(&D, &ExtReal<S>)> = duals.iter().zip(values).filter(|(_, g)| !g.is_pos_inf()).collect();
    let one = |z: &&[S]| sup_coupled(live.iter().map(|(w, g)| (*z, *w, *g)));
    #[cfg(feature = "rayon")]
    {
        use rayon::prelude::*;
        points.par_iter().map(one).collect()
    }
    #[cfg(not(feature = "rayon"))]
    {
        points.iter().map(one).collect()
    }
}

/// `f^c` on `w_grid`.
pub fn c_conjugate<S: Scalar>(f: &SampledFn<S>, w_grid: &DualGrid<S>) -> Result<DualFn<S>, Error> {
    if f.grid().dim() != w_grid.dim() {
        return Err(Error::DimensionMismatch { expected: f.grid().dim(), found: w_grid.dim() });
    }
    let pts: Vec<&[S]> = f.grid().points().iter().map(Vec::as_slice).collect();
    let values = sup_engine(&pts, f.values(), w_grid.points());
    Sampled::new(w_grid.clone(), values)
}

/// `g^{c'}` on `x_grid`.
pub fn cprime_conjugate<S: Scalar>(g: &DualFn<S>, x_grid: &Grid<S>) -> Result<SampledFn<S>, Error> {
    if g.grid().dim() != x_grid.dim() {
        return Err(Error::DimensionMismatch { expected: g.grid().dim(), found: x_grid.dim() });
    }
    let pts: Vec<&[S]> = x_grid.points().iter().map(Vec::as_slice).collect();
    let values = sup_engine_prime(g.grid().points(), g.values(), &pts);
    Sampled::new(x_grid.clone(), values)
}

/// `f^{cc'}` on the grid of `f`.
pub fn biconjugate<S: Scalar>(f: &SampledFn<S>, w_grid: &DualGrid<S>) -> Result<SampledFn<S>, Error> {
    cprime_conjugate(&c_conjugate(f, w_grid)?, f.grid())
}

/// Grid approximation of the e-convex hull. It is a minorant of `f`, and it
/// does not decrease anywhere when `w_grid` is enlarged.
pub fn econvex_hull_approx<S: Scalar>(f: &SampledFn<S>, w_grid: &DualGrid<S>) -> Result<SampledFn<S>, Error> {
    biconjugate(f, w_grid)
}

/// `Phi^c` on a paired dual grid, for `Phi` tabulated on `X x Y`.
pub fn phi_conjugate<S: Scalar>(phi: &PhiTable<S>, grid: &PairDualGrid<S>) -> Result<PairDualFn<S>, Error> {
    let (xd, yd) = (phi.x_grid().dim(), phi.y_grid().dim());
    if grid.x_dim() != xd || grid.y_dim() != yd {
        return Err(Error::DimensionMismatch { expected: xd + yd, found: grid.x_dim() + grid.y_dim() });
    }
    let zs = joint_points(phi.x_grid(), phi.y_grid());
    let pts: Vec<&[S]> = zs.iter().map(Vec::as_slice).collect();
    let values = sup_engine(&pts, phi.values(), grid.points());
    Sampled::new(grid.clone(), values)
}

/// `Psi^{c'}` tabulated on `x_grid x y_grid`, for `Psi` on a paired dual grid.
pub fn phi_cprime_conjugate<S: Scalar>(psi: &PairDualFn<S>, x_grid: &Grid<S>, y_grid: &Grid<S>) -> Result<PhiTable<S>, Error> {
    let zs = joint_points(x_grid, y_grid);
    let pts: Vec<&[S]> = zs.iter().map(Vec::as_slice).collect();
    let values = sup_engine_prime(psi.grid().points(), psi.values(), &pts);
    PhiTable::new(x_grid.clone(), y_grid.clone(), values)
}

fn joint_points<S: Scalar>(xg: &Grid<S>, yg: &Grid<S>) -> Vec<Vec<S>> {
    let mut out = Vec::with_capacity(xg.len() * yg.len());
    for x in xg.points() {
        for y in yg.points() {
            let mut z = x.clone();
            z.extend_from_slice(y);
            out.push(z);
        }
    }
    out
}

/// Grid index pairs `(i, j)` where `<x_i, u*_j> = alpha_j`, i.e. the
/// coupling sits exactly on its switching boundary.
pub fn boundary_coincidences<S: Scalar>(x_grid: &Grid<S>, w_grid: &DualGrid<S>) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for (i, x) in x_grid.points().iter().enumerate() {
        for (j, w) in w_grid.points().iter().enumerate() {
            if dot(x, &w.ustar) == w.alpha {
                out.push((i, j));
            }
        }
    }
    out
}

// A real interval with optional endpoints, used by the exact 1-D conjugate.
#[derive(Clone, Debug)]
struct Span<S> {
    lo: Endpoint<S>,
    hi: Endpoint<S>,
}

impl<S: Scalar> Span<S> {
    fn is_empty(&self) -> bool {
        match (&self.lo, &self.hi) {
            (Endpoint::Closed(a), Endpoint::Closed(b)) => a > b,
            (Endpoint::Unbounded, _) | (_, Endpoint::Unbounded) => false,
            (a, b) => a.point() >= b.point(),
        }
    }

    fn intersect(&self, other: &Span<S>) -> Span<S> {
        Span { lo: tighter(&self.lo, &other.lo, true), hi: tighter(&self.hi, &other.hi, false) }
    }
}

// The more restrictive of two endpoints: the larger lower bound or the
// smaller upper bound, preferring the open side on ties.
fn tighter<S: Scalar>(a: &Endpoint<S>, b: &Endpoint<S>, lower: bool) -> Endpoint<S> {
    match (a.point(), b.point()) {
        (None, _) => b.clone(),
        (_, None) => a.clone(),
        (Some(p), Some(q)) => {
            if p == q {
                if matches!(a, Endpoint::Open(_)) {
                    a.clone()
                } else {
                    b.clone()
                }
            } else if (p > q) == lower {
                a.clone()
            } else {
                b.clone()
            }
        }
    }
}

/// Exact `f^c(w)` for a one-dimensional piecewise-affine `f`.
///
/// The supremum runs over all of `R`: points outside `{x : x u* < alpha}`
/// carry coupling `+inf`, so any such point with `f(x) < +inf` makes the
/// conjugate `+inf`.
pub fn c_conjugate_exact<S: Scalar>(f: &PwAffine1<S>, w: &DualPoint<S>) -> Result<ExtReal<S>, Error> {
    if w.dim() != 1 || w.ustar.len() != 1 {
        return Err(Error::DimensionMismatch { expected: 1, found: w.dim() });
    }
    let (xs, us, alpha) = (&w.xstar[0], &w.ustar[0], &w.alpha);
    let whole = Span { lo: Endpoint::Unbounded, hi: Endpoint::Unbounded };
    let none = Span { lo: Endpoint::Closed(S::one()), hi: Endpoint::Closed(S::zero()) };
    // Region where the coupling is finite, and its complement.
    let (inside, outside): (Span<S>, Vec<Span<S>>) = if us.is_zero() {
        if S::zero() < *alpha {
            (whole, Vec::new())
        } else {
            (none, alloc::vec![whole])
        }
    } else {
        let t = alpha.clone() / us.clone();
        if *us > S::zero() {
            (
                Span { lo: Endpoint::Unbounded, hi: Endpoint::Open(t.clone()) },
                alloc::vec![Span { lo: Endpoint::Closed(t), hi: Endpoint::Unbounded }],
            )
        } else {
            (
                Span { lo: Endpoint::Open(t.clone()), hi: Endpoint::Unbounded },
                alloc::vec![Span { lo: Endpoint::Unbounded, hi: Endpoint::Closed(t) }],
            )
        }
    };
    let mut best = ExtReal::NegInf;
    for piece in f.pieces() {
        let span = Span { lo: piece.lo.clone(), hi: piece.hi.clone() };
        if !matches!(piece.value, PieceValue::PosInf) && outside.iter().any(|o| !span.intersect(o).is_empty()) {
            return Ok(ExtReal::PosInf);
        }
        let part = span.intersect(&inside);
        if part.is_empty() {
            continue;
        }
        let v = match &piece.value {
            PieceValue::PosInf => ExtReal::NegInf,
            PieceValue::NegInf => ExtReal::PosInf,
            PieceValue::Affine { slope, intercept } => {
                // sup of k x - intercept over the span; open ends do not
                // change the supremum of an affine function.
                let k = xs.clone() - slope.clone();
                if k.is_zero() {
                    ExtReal::new(-intercept.clone())
                } else {
                    let end = if k > S::zero() { part.hi.point() } else { part.lo.point() };
                    match end {
                        None => ExtReal::PosInf,
                        Some(e) => ExtReal::new(k.clone() * e.clone() - intercept.clone()),
                    }
                }
            }
        };
        if v > best {
            best = v;
        }
    }
    Ok(best)
}
