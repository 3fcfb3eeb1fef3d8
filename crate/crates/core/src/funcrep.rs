//! Function representations: finite grids, sampled functions, exact 1-D
//! piecewise-affine functions and perturbation functions.
//!
//! Every conjugate in this crate treats the grid itself as the underlying
//! space. There is no interpolation between grid points.

use alloc::boxed::Box;
use alloc::vec::Vec;

use crate::error::Error;
use crate::esets::EPolyhedron;
use crate::extreal::{self, ExtReal};
use crate::scalar::{dot, Scalar};

/// Anything that can carry a [`Sampled`] function.
pub trait GridLike: Clone {
    type Scalar: Scalar;
    type Point: Clone + PartialEq + core::fmt::Debug;

    fn points(&self) -> &[Self::Point];

    fn len(&self) -> usize {
        self.points().len()
    }

    fn is_empty(&self) -> bool {
        self.points().is_empty()
    }

    fn index_of(&self, p: &Self::Point) -> Option<usize> {
        self.points().iter().position(|q| q == p)
    }
}

/// Rejects repeated keys. Sorting keeps this `O(n log n)` so that large
/// product grids stay cheap to validate.
pub(crate) fn check_distinct<S: Scalar>(keys: &[Vec<S>]) -> Result<(), Error> {
    let lex = |a: &Vec<S>, b: &Vec<S>| {
        a.iter()
            .zip(b)
            .map(|(x, y)| x.total_cmp(y))
            .find(|o| o.is_ne())
            .unwrap_or_else(|| a.len().cmp(&b.len()))
    };
    let mut order: Vec<usize> = (0..keys.len()).collect();
    order.sort_by(|&i, &j| lex(&keys[i], &keys[j]).then(i.cmp(&j)));
    for w in order.windows(2) {
        if keys[w[0]] == keys[w[1]] {
            return Err(Error::DuplicatePoint(w[1]));
        }
    }
    Ok(())
}

/// A finite, ordered set of pairwise distinct points of `R^dim`.
#[derive(Clone, Debug, PartialEq)]
pub struct Grid<S> {
    dim: usize,
    points: Vec<Vec<S>>,
    origin: Option<usize>,
}

impl<S: Scalar> Grid<S> {
    pub fn new(dim: usize, points: Vec<Vec<S>>) -> Result<Self, Error> {
        for p in &points {
            if p.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: p.len() });
            }
        }
        check_distinct(&points)?;
        let origin = points.iter().position(|p| p.iter().all(|v| v.is_zero()));
        Ok(Grid { dim, points, origin })
    }

    /// One-dimensional grid from scalar coordinates.
    pub fn line(values: Vec<S>) -> Result<Self, Error> {
        Self::new(1, values.into_iter().map(|v| alloc::vec![v]).collect())
    }

    /// `count` equally spaced points from `lo` to `hi` inclusive, in every
    /// coordinate (tensor product).
    pub fn uniform(dim: usize, lo: S, hi: S, count: usize) -> Result<Self, Error> {
        if count == 0 {
            return Err(Error::EmptyGrid);
        }
        let axis: Vec<S> = if count == 1 {
            alloc::vec![lo]
        } else {
            let steps = S::from_i64(count as i64 - 1);
            (0..count)
                .map(|k| lo.clone() + (hi.clone() - lo.clone()) * S::from_i64(k as i64) / steps.clone())
                .collect()
        };
        Self::new(dim, tensor(&axis, dim))
    }

    /// The integers `-n..=n` times `step`, in every coordinate.
    pub fn symmetric(dim: usize, step: S, n: usize) -> Result<Self, Error> {
        let axis: Vec<S> = (-(n as i64)..=n as i64).map(|k| S::from_i64(k) * step.clone()).collect();
        Self::new(dim, tensor(&axis, dim))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn origin_index(&self) -> Option<usize> {
        self.origin
    }

    pub fn has_origin(&self) -> bool {
        self.origin.is_some()
    }

    pub fn point(&self, i: usize) -> &[S] {
        &self.points[i]
    }

    /// True when some coordinate of point `i` attains that coordinate's
    /// extreme value over the grid.
    pub fn is_boundary(&self, i: usize) -> bool {
        if self.points.len() <= 1 {
            return false;
        }
        (0..self.dim).any(|k| {
            let v = &self.points[i][k];
            let mut lo = true;
            let mut hi = true;
            for p in &self.points {
                if p[k] < *v {
                    lo = false;
                }
                if p[k] > *v {
                    hi = false;
                }
            }
            lo || hi
        })
    }
}

pub(crate) fn tensor<S: Clone>(axis: &[S], dim: usize) -> Vec<Vec<S>> {
    let mut out: Vec<Vec<S>> = alloc::vec![Vec::new()];
    for _ in 0..dim {
        let mut next = Vec::with_capacity(out.len() * axis.len());
        for p in &out {
            for a in axis {
                let mut q = p.clone();
                q.push(a.clone());
                next.push(q);
            }
        }
        out = next;
    }
    out
}

impl<S: Scalar> GridLike for Grid<S> {
    type Scalar = S;
    type Point = Vec<S>;

    fn points(&self) -> &[Vec<S>] {
        &self.points
    }
}

/// An extended-real function tabulated on a grid.
#[derive(Clone, Debug, PartialEq)]
pub struct Sampled<G: GridLike> {
    grid: G,
    values: Vec<ExtReal<G::Scalar>>,
}

pub type SampledFn<S> = Sampled<Grid<S>>;

impl<G: GridLike> Sampled<G> {
    pub fn new(grid: G, values: Vec<ExtReal<G::Scalar>>) -> Result<Self, Error> {
        if values.len() != grid.len() {
            return Err(Error::LengthMismatch { expected: grid.len(), found: values.len() });
        }
        Ok(Sampled { grid, values })
    }

    pub fn from_fn(grid: G, f: impl Fn(&G::Point) -> ExtReal<G::Scalar>) -> Self {
        let values = grid.points().iter().map(f).collect();
        Sampled { grid, values }
    }

    pub fn grid(&self) -> &G {
        &self.grid
    }

    pub fn values(&self) -> &[ExtReal<G::Scalar>] {
        &self.values
    }

    pub fn value(&self, i: usize) -> &ExtReal<G::Scalar> {
        &self.values[i]
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn eval(&self, p: &G::Point) -> Result<&ExtReal<G::Scalar>, Error> {
        self.grid.index_of(p).map(|i| &self.values[i]).ok_or(Error::OffGrid)
    }

    /// Indices of the effective domain `{f < +inf}`.
    pub fn domain(&self) -> Vec<usize> {
        (0..self.values.len()).filter(|&i| !self.values[i].is_pos_inf()).collect()
    }

    /// Never `-inf` and finite somewhere.
    pub fn is_proper(&self) -> bool {
        !self.values.iter().any(ExtReal::is_neg_inf) && self.values.iter().any(ExtReal::is_finite)
    }

    /// Pointwise `<=`, exact.
    pub fn le(&self, other: &Self) -> bool {
        self.values.len() == other.values.len() && self.values.iter().zip(&other.values).all(|(a, b)| a <= b)
    }

    pub fn inf(&self) -> ExtReal<G::Scalar> {
        extreal::inf(self.values.iter().cloned())
    }

    pub fn sup(&self) -> ExtReal<G::Scalar> {
        extreal::sup(self.values.iter().cloned())
    }

    /// Indices where the value equals `target`.
    pub fn level(&self, target: &ExtReal<G::Scalar>) -> Vec<usize> {
        (0..self.values.len()).filter(|&i| self.values[i] == *target).collect()
    }
}

/// Endpoint of a piece of a [`PwAffine1`].
#[derive(Clone, Debug, PartialEq)]
pub enum Endpoint<S> {
    Unbounded,
    Closed(S),
    Open(S),
}

impl<S> Endpoint<S> {
    pub fn point(&self) -> Option<&S> {
        match self {
            Endpoint::Unbounded => None,
            Endpoint::Closed(v) | Endpoint::Open(v) => Some(v),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum PieceValue<S> {
    Affine { slope: S, intercept: S },
    PosInf,
    NegInf,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Piece<S> {
    pub lo: Endpoint<S>,
    pub hi: Endpoint<S>,
    pub value: PieceValue<S>,
}

impl<S: Scalar> Piece<S> {
    pub fn contains(&self, x: &S) -> bool {
        let above = match &self.lo {
            Endpoint::Unbounded => true,
            Endpoint::Closed(l) => l <= x,
            Endpoint::Open(l) => l < x,
        };
        let below = match &self.hi {
            Endpoint::Unbounded => true,
            Endpoint::Closed(h) => x <= h,
            Endpoint::Open(h) => x < h,
        };
        above && below
    }

    pub fn eval(&self, x: &S) -> ExtReal<S> {
        match &self.value {
            PieceValue::Affine { slope, intercept } => ExtReal::new(slope.clone() * x.clone() + intercept.clone()),
            PieceValue::PosInf => ExtReal::PosInf,
            PieceValue::NegInf => ExtReal::NegInf,
        }
    }
}

/// Exact piecewise-affine function on the real line. The pieces tile `R`
/// left to right without gaps or overlaps.
#[derive(Clone, Debug, PartialEq)]
pub struct PwAffine1<S> {
    pieces: Vec<Piece<S>>,
}

impl<S: Scalar> PwAffine1<S> {
    pub fn new(pieces: Vec<Piece<S>>) -> Result<Self, Error> {
        let (first, last) = match (pieces.first(), pieces.last()) {
            (Some(f), Some(l)) => (f, l),
            _ => return Err(Error::InvalidPieces("no pieces")),
        };
        if first.lo != Endpoint::Unbounded || last.hi != Endpoint::Unbounded {
            return Err(Error::InvalidPieces("pieces must cover the whole line"));
        }
        for p in &pieces {
            let ok = match (&p.lo, &p.hi) {
                (Endpoint::Closed(l), Endpoint::Closed(h)) => l <= h,
                (Endpoint::Unbounded, _) | (_, Endpoint::Unbounded) => true,
                (l, h) => l.point() < h.point(),
            };
            if !ok {
                return Err(Error::InvalidPieces("empty piece"));
            }
        }
        for w in pieces.windows(2) {
            let ok = match (&w[0].hi, &w[1].lo) {
                (Endpoint::Closed(a), Endpoint::Open(b)) | (Endpoint::Open(a), Endpoint::Closed(b)) => a == b,
                _ => false,
            };
            if !ok {
                return Err(Error::InvalidPieces("adjacent pieces must share an endpoint, closed on exactly one side"));
            }
        }
        Ok(PwAffine1 { pieces })
    }

    pub fn affine(slope: S, intercept: S) -> Self {
        PwAffine1 {
            pieces: alloc::vec![Piece {
                lo: Endpoint::Unbounded,
                hi: Endpoint::Unbounded,
                value: PieceValue::Affine { slope, intercept },
            }],
        }
    }

    pub fn abs() -> Self {
        PwAffine1 {
            pieces: alloc::vec![
                Piece {
                    lo: Endpoint::Unbounded,
                    hi: Endpoint::Open(S::zero()),
                    value: PieceValue::Affine { slope: -S::one(), intercept: S::zero() },
                },
                Piece {
                    lo: Endpoint::Closed(S::zero()),
                    hi: Endpoint::Unbounded,
                    value: PieceValue::Affine { slope: S::one(), intercept: S::zero() },
                },
            ],
        }
    }

    /// Indicator of an interval: `0` inside, `+inf` outside.
    pub fn indicator(lo: Endpoint<S>, hi: Endpoint<S>) -> Result<Self, Error> {
        let zero = || PieceValue::Affine { slope: S::zero(), intercept: S::zero() };
        let mut pieces = Vec::new();
        match &lo {
            Endpoint::Unbounded => {}
            Endpoint::Closed(a) => pieces.push(Piece {
                lo: Endpoint::Unbounded,
                hi: Endpoint::Open(a.clone()),
                value: PieceValue::PosInf,
            }),
            Endpoint::Open(a) => pieces.push(Piece {
                lo: Endpoint::Unbounded,
                hi: Endpoint::Closed(a.clone()),
                value: PieceValue::PosInf,
            }),
        }
        let tail = match &hi {
            Endpoint::Unbounded => None,
            Endpoint::Closed(b) => Some(Endpoint::Open(b.clone())),
            Endpoint::Open(b) => Some(Endpoint::Closed(b.clone())),
        };
        pieces.push(Piece { lo, hi, value: zero() });
        if let Some(t) = tail {
            pieces.push(Piece { lo: t, hi: Endpoint::Unbounded, value: PieceValue::PosInf });
        }
        Self::new(pieces)
    }

    /// Indicator of a finite point set.
    pub fn indicator_of_points(mut points: Vec<S>) -> Result<Self, Error> {
        points.sort_by(|a, b| a.total_cmp(b));
        points.dedup();
        if points.is_empty() {
            return Ok(PwAffine1 {
                pieces: alloc::vec![Piece { lo: Endpoint::Unbounded, hi: Endpoint::Unbounded, value: PieceValue::PosInf }],
            });
        }
        let mut pieces = Vec::new();
        let mut lo = Endpoint::Unbounded;
        for p in points {
            pieces.push(Piece { lo, hi: Endpoint::Open(p.clone()), value: PieceValue::PosInf });
            pieces.push(Piece {
                lo: Endpoint::Closed(p.clone()),
                hi: Endpoint::Closed(p.clone()),
                value: PieceValue::Affine { slope: S::zero(), intercept: S::zero() },
            });
            lo = Endpoint::Open(p);
        }
        pieces.push(Piece { lo, hi: Endpoint::Unbounded, value: PieceValue::PosInf });
        Self::new(pieces)
    }

    pub fn pieces(&self) -> &[Piece<S>] {
        &self.pieces
    }

    pub fn eval(&self, x: &S) -> ExtReal<S> {
        self.pieces
            .iter()
            .find(|p| p.contains(x))
            .map(|p| p.eval(x))
            .expect("pieces tile the line")
    }

    pub fn breakpoints(&self) -> Vec<S> {
        let mut out: Vec<S> = Vec::new();
        for p in &self.pieces {
            for e in [&p.lo, &p.hi] {
                if let Some(v) = e.point() {
                    if !out.contains(v) {
                        out.push(v.clone());
                    }
                }
            }
        }
        out
    }

    /// Slopes of the affine pieces, without repetition.
    pub fn slopes(&self) -> Vec<S> {
        let mut out: Vec<S> = Vec::new();
        for p in &self.pieces {
            if let PieceValue::Affine { slope, .. } = &p.value {
                if !out.contains(slope) {
                    out.push(slope.clone());
                }
            }
        }
        out
    }

    /// Samples the function onto a one-dimensional grid.
    pub fn sample(&self, grid: &Grid<S>) -> Result<SampledFn<S>, Error> {
        if grid.dim() != 1 {
            return Err(Error::DimensionMismatch { expected: 1, found: grid.dim() });
        }
        Ok(Sampled::from_fn(grid.clone(), |p| self.eval(&p[0])))
    }

    pub fn map_scalar<T: Scalar>(&self, f: impl Fn(&S) -> T) -> PwAffine1<T> {
        let ep = |e: &Endpoint<S>| match e {
            Endpoint::Unbounded => Endpoint::Unbounded,
            Endpoint::Closed(v) => Endpoint::Closed(f(v)),
            Endpoint::Open(v) => Endpoint::Open(f(v)),
        };
        PwAffine1 {
            pieces: self
                .pieces
                .iter()
                .map(|p| Piece {
                    lo: ep(&p.lo),
                    hi: ep(&p.hi),
                    value: match &p.value {
                        PieceValue::Affine { slope, intercept } => PieceValue::Affine { slope: f(slope), intercept: f(intercept) },
                        PieceValue::PosInf => PieceValue::PosInf,
                        PieceValue::NegInf => PieceValue::NegInf,
                    },
                })
                .collect(),
        }
    }
}

/// Expression over the concatenated variable `z = (x, y)`.
#[derive(Clone, Debug, PartialEq)]
pub enum Expr<S> {
    Affine { coeffs: Vec<S>, constant: S },
    Abs(Box<Expr<S>>),
    /// `0` on the set, `+inf` off it.
    Indicator(EPolyhedron<S>),
    Sum(Vec<Expr<S>>),
    Max(Vec<Expr<S>>),
    Min(Vec<Expr<S>>),
    /// `inner(M z + offset)`.
    Compose { rows: Vec<Vec<S>>, offset: Vec<S>, inner: Box<Expr<S>> },
    /// A one-dimensional piecewise-affine function of a scalar input.
    Pw1(PwAffine1<S>),
}

impl<S: Scalar> Expr<S> {
    /// Input dimension, when determined by the expression.
    pub fn input_dim(&self) -> Result<Option<usize>, Error> {
        let merge = |acc: Option<usize>, d: Option<usize>| -> Result<Option<usize>, Error> {
            match (acc, d) {
                (Some(a), Some(b)) if a != b => Err(Error::DimensionMismatch { expected: a, found: b }),
                (Some(a), _) => Ok(Some(a)),
                (None, d) => Ok(d),
            }
        };
        match self {
            Expr::Affine { coeffs, .. } => Ok(Some(coeffs.len())),
            Expr::Abs(e) => e.input_dim(),
            Expr::Indicator(p) => Ok(Some(p.dim())),
            Expr::Sum(es) | Expr::Max(es) | Expr::Min(es) => {
                let mut acc = None;
                for e in es {
                    acc = merge(acc, e.input_dim()?)?;
                }
                Ok(acc)
            }
            Expr::Compose { rows, offset, inner } => {
                if rows.len() != offset.len() {
                    return Err(Error::DimensionMismatch { expected: rows.len(), found: offset.len() });
                }
                merge(Some(rows.len()), inner.input_dim()?)?;
                let mut acc = None;
                for r in rows {
                    acc = merge(acc, Some(r.len()))?;
                }
                Ok(acc)
            }
            Expr::Pw1(_) => Ok(Some(1)),
        }
    }

    pub fn eval(&self, z: &[S]) -> ExtReal<S> {
        match self {
            Expr::Affine { coeffs, constant } => ExtReal::new(dot(coeffs, z) + constant.clone()),
            Expr::Abs(e) => e.eval(z).abs(),
            Expr::Indicator(p) => {
                if p.constraints().iter().all(|h| h.satisfied_by(z)) {
                    ExtReal::zero()
                } else {
                    ExtReal::PosInf
                }
            }
            Expr::Sum(es) => extreal::sum(es.iter().map(|e| e.eval(z))),
            Expr::Max(es) => extreal::sup(es.iter().map(|e| e.eval(z))),
            Expr::Min(es) => extreal::inf(es.iter().map(|e| e.eval(z))),
            Expr::Compose { rows, offset, inner } => {
                let w: Vec<S> = rows.iter().zip(offset).map(|(r, o)| dot(r, z) + o.clone()).collect();
                inner.eval(&w)
            }
            Expr::Pw1(f) => f.eval(&z[0]),
        }
    }

    pub fn map_scalar<T: Scalar>(&self, f: &impl Fn(&S) -> T) -> Expr<T> {
        let v = |xs: &Vec<S>| xs.iter().map(f).collect::<Vec<T>>();
        match self {
            Expr::Affine { coeffs, constant } => Expr::Affine { coeffs: v(coeffs), constant: f(constant) },
            Expr::Abs(e) => Expr::Abs(Box::new(e.map_scalar(f))),
            Expr::Indicator(p) => Expr::Indicator(p.map_scalar(f)),
            Expr::Sum(es) => Expr::Sum(es.iter().map(|e| e.map_scalar(f)).collect()),
            Expr::Max(es) => Expr::Max(es.iter().map(|e| e.map_scalar(f)).collect()),
            Expr::Min(es) => Expr::Min(es.iter().map(|e| e.map_scalar(f)).collect()),
            Expr::Compose { rows, offset, inner } => Expr::Compose {
                rows: rows.iter().map(v).collect(),
                offset: v(offset),
                inner: Box::new(inner.map_scalar(f)),
            },
            Expr::Pw1(p) => Expr::Pw1(p.map_scalar(f)),
        }
    }

    // Builders used by the catalog and tests.

    /// `<coeffs, z> + constant`.
    pub fn affine(coeffs: Vec<S>, constant: S) -> Self {
        Expr::Affine { coeffs, constant }
    }

    /// `self(<row, z> + offset)` for a scalar-input expression.
    pub fn of_linear(self, row: Vec<S>, offset: S) -> Self {
        Expr::Compose { rows: alloc::vec![row], offset: alloc::vec![offset], inner: Box::new(self) }
    }
}

/// `Phi(x, y)` tabulated on `xGrid x yGrid`, row-major in `x`.
#[derive(Clone, Debug, PartialEq)]
pub struct PhiTable<S> {
    x_grid: Grid<S>,
    y_grid: Grid<S>,
    values: Vec<ExtReal<S>>,
}

impl<S: Scalar> PhiTable<S> {
    pub fn new(x_grid: Grid<S>, y_grid: Grid<S>, values: Vec<ExtReal<S>>) -> Result<Self, Error> {
        let n = x_grid.len() * y_grid.len();
        if values.len() != n {
            return Err(Error::LengthMismatch { expected: n, found: values.len() });
        }
        Ok(PhiTable { x_grid, y_grid, values })
    }

    pub fn x_grid(&self) -> &Grid<S> {
        &self.x_grid
    }

    pub fn y_grid(&self) -> &Grid<S> {
        &self.y_grid
    }

    pub fn values(&self) -> &[ExtReal<S>] {
        &self.values
    }

    pub fn at(&self, i: usize, j: usize) -> &ExtReal<S> {
        &self.values[i * self.y_grid.len() + j]
    }

    pub fn row(&self, i: usize) -> &[ExtReal<S>] {
        let n = self.y_grid.len();
        &self.values[i * n..(i + 1) * n]
    }
}

/// A perturbation function `Phi : X x Y -> extended reals`.
#[derive(Clone, Debug, PartialEq)]
pub enum PerturbFn<S> {
    Expr { x_dim: usize, y_dim: usize, expr: Expr<S> },
    Table(PhiTable<S>),
}

impl<S: Scalar> PerturbFn<S> {
    pub fn from_expr(x_dim: usize, y_dim: usize, expr: Expr<S>) -> Result<Self, Error> {
        if let Some(d) = expr.input_dim()? {
            if d != x_dim + y_dim {
                return Err(Error::DimensionMismatch { expected: x_dim + y_dim, found: d });
            }
        }
        Ok(PerturbFn::Expr { x_dim, y_dim, expr })
    }

    pub fn x_dim(&self) -> usize {
        match self {
            PerturbFn::Expr { x_dim, .. } => *x_dim,
            PerturbFn::Table(t) => t.x_grid.dim(),
        }
    }

    pub fn y_dim(&self) -> usize {
        match self {
            PerturbFn::Expr { y_dim, .. } => *y_dim,
            PerturbFn::Table(t) => t.y_grid.dim(),
        }
    }

    pub fn eval(&self, x: &[S], y: &[S]) -> Result<ExtReal<S>, Error> {
        match self {
            PerturbFn::Expr { x_dim, y_dim, expr } => {
                if x.len() != *x_dim {
                    return Err(Error::DimensionMismatch { expected: *x_dim, found: x.len() });
                }
                if y.len() != *y_dim {
                    return Err(Error::DimensionMismatch { expected: *y_dim, found: y.len() });
                }
                let mut z = x.to_vec();
                z.extend_from_slice(y);
                Ok(expr.eval(&z))
            }
            PerturbFn::Table(t) => {
                let i = t.x_grid.points().iter().position(|p| p.as_slice() == x).ok_or(Error::OffGrid)?;
                let j = t.y_grid.points().iter().position(|p| p.as_slice() == y).ok_or(Error::OffGrid)?;
                Ok(t.at(i, j).clone())
            }
        }
    }

    /// Tabulates `Phi` on `x_grid x y_grid`.
    pub fn materialize(&self, x_grid: &Grid<S>, y_grid: &Grid<S>) -> Result<PhiTable<S>, Error> {
        if let PerturbFn::Table(t) = self {
            if t.x_grid == *x_grid && t.y_grid == *y_grid {
                return Ok(t.clone());
            }
        }
        let mut values = Vec::with_capacity(x_grid.len() * y_grid.len());
        for x in x_grid.points() {
            for y in y_grid.points() {
                values.push(self.eval(x, y)?);
            }
        }
        PhiTable::new(x_grid.clone(), y_grid.clone(), values)
    }
}

/// `p(y) = inf_x Phi(x, y)` over the grids.
pub fn infimum_value_function<S: Scalar>(
    phi: &PerturbFn<S>,
    x_grid: &Grid<S>,
    y_grid: &Grid<S>,
) -> Result<SampledFn<S>, Error> {
    if x_grid.is_empty() || y_grid.is_empty() {
        return Err(Error::EmptyGrid);
    }
    let t = phi.materialize(x_grid, y_grid)?;
    Ok(value_function(&t))
}

pub(crate) fn value_function<S: Scalar>(t: &PhiTable<S>) -> SampledFn<S> {
    let ny = t.y_grid.len();
    let values = (0..ny)
        .map(|j| extreal::inf((0..t.x_grid.len()).map(|i| t.at(i, j).clone())))
        .collect();
    Sampled { grid: t.y_grid.clone(), values }
}

/// `x -> Phi(x, 0)` on `x_grid`.
pub fn restrict_to_zero<S: Scalar>(
    phi: &PerturbFn<S>,
    x_grid: &Grid<S>,
    y_grid: &Grid<S>,
) -> Result<SampledFn<S>, Error> {
    let j0 = y_grid.origin_index().ok_or(Error::OriginMissing)?;
    let zero = &y_grid.points()[j0];
    let values = x_grid.points().iter().map(|x| phi.eval(x, zero)).collect::<Result<Vec<_>, _>>()?;
    Ok(Sampled { grid: x_grid.clone(), values })
}

/// `y -> Phi(x, y)` together with `Y_x = dom Phi(x, .)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Slice<S: Scalar> {
    pub f: SampledFn<S>,
    /// Indices into the y-grid of `Y_x`.
    pub domain: Vec<usize>,
}

pub fn slice_x<S: Scalar>(phi: &PerturbFn<S>, x: &[S], y_grid: &Grid<S>) -> Result<Slice<S>, Error> {
    let values = y_grid.points().iter().map(|y| phi.eval(x, y)).collect::<Result<Vec<_>, _>>()?;
    let f = Sampled { grid: y_grid.clone(), values };
    let domain = f.domain();
    Ok(Slice { f, domain })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::esets::Halfspace;
    use crate::scalar::{q, rv, Rational};
    use alloc::vec;

    fn nonpos_indicator() -> Expr<Rational> {
        // t <= 0
        Expr::Indicator(EPolyhedron::new(1, vec![Halfspace::closed(rv(&[1]), q(0, 1))]).unwrap())
    }

    // Phi(x, y) = x + delta_{(-inf, 0]}(x + y)
    fn example52() -> PerturbFn<Rational> {
        let expr = Expr::Sum(vec![
            Expr::affine(rv(&[1, 0]), q(0, 1)),
            nonpos_indicator().of_linear(rv(&[1, 1]), q(0, 1)),
        ]);
        PerturbFn::from_expr(1, 1, expr).unwrap()
    }

    // Phi(x, y) = |x| + delta_{(-inf, 0]}(x + y)
    fn fenchel_abs() -> PerturbFn<Rational> {
        let expr = Expr::Sum(vec![
            Expr::Abs(Box::new(Expr::affine(rv(&[1, 0]), q(0, 1)))),
            nonpos_indicator().of_linear(rv(&[1, 1]), q(0, 1)),
        ]);
        PerturbFn::from_expr(1, 1, expr).unwrap()
    }

    fn ints(lo: i64, hi: i64) -> Grid<Rational> {
        Grid::line((lo..=hi).map(|k| q(k, 1)).collect()).unwrap()
    }

    #[test]
    fn grid_invariants() {
        assert_eq!(Grid::line(rv(&[1, 2, 1])).err(), Some(Error::DuplicatePoint(2)));
        let g = Grid::<Rational>::symmetric(1, q(1, 2), 2).unwrap();
        assert_eq!(g.len(), 5);
        assert_eq!(g.origin_index(), Some(2));
        assert!(g.is_boundary(0) && g.is_boundary(4) && !g.is_boundary(2));
        let u = Grid::<Rational>::uniform(2, q(-1, 1), q(1, 1), 3).unwrap();
        assert_eq!(u.len(), 9);
        assert!(u.has_origin());
        assert!(!ints(1, 3).has_origin());
    }

    #[test]
    fn evaluations() {
        let ind = nonpos_indicator();
        assert_eq!(ind.eval(&rv(&[1])), ExtReal::PosInf);
        assert_eq!(PwAffine1::<Rational>::abs().eval(&q(-3, 1)), ExtReal::from_i64(3));
        assert_eq!(example52().eval(&rv(&[1]), &rv(&[-2])).unwrap(), ExtReal::from_i64(1));
        assert_eq!(example52().eval(&rv(&[1]), &rv(&[0])).unwrap(), ExtReal::PosInf);
    }

    #[test]
    fn sampled_off_grid_is_an_error() {
        let f = PwAffine1::<Rational>::abs().sample(&ints(-2, 2)).unwrap();
        assert_eq!(f.eval(&rv(&[7])), Err(Error::OffGrid));
        assert_eq!(f.eval(&rv(&[-2])).unwrap(), &ExtReal::from_i64(2));
        assert!(f.is_proper());
    }

    #[test]
    fn piece_validation() {
        let bad = PwAffine1::<Rational>::new(vec![Piece {
            lo: Endpoint::Unbounded,
            hi: Endpoint::Closed(q(0, 1)),
            value: PieceValue::PosInf,
        }]);
        assert!(bad.is_err());
        let overlap = PwAffine1::<Rational>::new(vec![
            Piece { lo: Endpoint::Unbounded, hi: Endpoint::Closed(q(0, 1)), value: PieceValue::PosInf },
            Piece { lo: Endpoint::Closed(q(0, 1)), hi: Endpoint::Unbounded, value: PieceValue::PosInf },
        ]);
        assert!(overlap.is_err());
        let two = PwAffine1::<Rational>::indicator_of_points(rv(&[1, -1])).unwrap();
        assert_eq!(two.eval(&q(-1, 1)), ExtReal::zero());
        assert_eq!(two.eval(&q(0, 1)), ExtReal::PosInf);
        assert_eq!(two.eval(&q(1, 1)), ExtReal::zero());
        let ind = PwAffine1::<Rational>::indicator(Endpoint::Unbounded, Endpoint::Closed(q(0, 1))).unwrap();
        assert_eq!(ind.eval(&q(0, 1)), ExtReal::zero());
        assert_eq!(ind.eval(&q(1, 100)), ExtReal::PosInf);
    }

    #[test]
    fn value_function_examples() {
        let g = ints(-10, 10);
        let p = infimum_value_function(&fenchel_abs(), &g, &g).unwrap();
        assert_eq!(p.eval(&rv(&[0])).unwrap(), &ExtReal::zero());
        // grid truncation: the continuum infimum is -inf
        let p = infimum_value_function(&example52(), &g, &g).unwrap();
        assert_eq!(p.eval(&rv(&[0])).unwrap(), &ExtReal::from_i64(-10));
        let never = PerturbFn::from_expr(1, 1, Expr::Indicator(EPolyhedron::new(2, vec![Halfspace::open(rv(&[0, 0]), q(0, 1))]).unwrap())).unwrap();
        let p = infimum_value_function(&never, &g, &g).unwrap();
        assert!(p.values().iter().all(ExtReal::is_pos_inf));
    }

    #[test]
    fn slices() {
        let g = ints(-3, 3);
        let r = restrict_to_zero(&example52(), &g, &g).unwrap();
        for (i, x) in g.points().iter().enumerate() {
            let expect = if x[0] <= q(0, 1) { ExtReal::Finite(x[0]) } else { ExtReal::PosInf };
            assert_eq!(r.value(i), &expect);
        }
        let s = slice_x(&example52(), &rv(&[0]), &g).unwrap();
        assert_eq!(s.domain, vec![0, 1, 2, 3]);
        assert_eq!(restrict_to_zero(&example52(), &g, &ints(1, 3)).err(), Some(Error::OriginMissing));
        let table = PhiTable::new(ints(0, 1), ints(0, 1), vec![ExtReal::PosInf, ExtReal::PosInf, ExtReal::zero(), ExtReal::zero()]).unwrap();
        let s = slice_x(&PerturbFn::Table(table), &rv(&[0]), &ints(0, 1)).unwrap();
        assert!(s.domain.is_empty());
    }

    #[test]
    fn dimension_checks() {
        assert!(PerturbFn::from_expr(1, 2, example52_expr()).is_err());
        let bad = Expr::Sum(vec![Expr::affine(rv(&[1]), q(0, 1)), Expr::affine(rv(&[1, 1]), q(0, 1))]);
        assert!(bad.input_dim().is_err());
    }

    fn example52_expr() -> Expr<Rational> {
        match example52() {
            PerturbFn::Expr { expr, .. } => expr,
            _ => unreachable!(),
        }
    }
}
