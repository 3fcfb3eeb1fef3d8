//! Built-in problem instances with their default grids.
//!
//! Every entry uses integer or small-denominator rationals so that the
//! rational backend reproduces it exactly.

use alloc::boxed::Box;
use alloc::vec;
use alloc::vec::Vec;

use crate::conjugation::{DualGrid, DualPoint};
use crate::duality::PerturbationProblem;
use crate::error::Error;
use crate::esets::{EPolyhedron, Halfspace};
use crate::funcrep::{Expr, Grid, PerturbFn, PwAffine1};
use crate::scalar::Scalar;

/// Names of the shipped instances, in display order.
pub const NAMES: [&str; 6] = [
    "example52",
    "fenchel_abs",
    "affine_recovery",
    "two_point_nonconvex",
    "open_epigraph_eset",
    "truncated_dual",
];

fn int<S: Scalar>(n: i64) -> S {
    S::from_i64(n)
}

fn ints<S: Scalar>(ns: &[i64]) -> Vec<S> {
    ns.iter().map(|&n| int(n)).collect()
}

fn line<S: Scalar>(lo: i64, hi: i64) -> Grid<S> {
    Grid::line((lo..=hi).map(int).collect()).expect("distinct")
}

// `delta_{(-inf, 0]}(x + y)` on `(x, y)`.
fn sum_nonpositive<S: Scalar>() -> Expr<S> {
    let half = EPolyhedron::new(1, vec![Halfspace::closed(ints(&[1]), S::zero())]).expect("dim 1");
    Expr::Indicator(half).of_linear(ints(&[1, 1]), S::zero())
}

fn x_coord<S: Scalar>() -> Expr<S> {
    Expr::affine(ints(&[1, 0]), S::zero())
}

/// `Phi(x, y) = x + delta_{(-inf, 0]}(x + y)`.
pub fn example52_phi<S: Scalar>() -> PerturbFn<S> {
    PerturbFn::from_expr(1, 1, Expr::Sum(vec![x_coord(), sum_nonpositive()])).expect("dims")
}

/// `Phi(x, y) = |x| + delta_{(-inf, 0]}(x + y)`.
pub fn fenchel_abs_phi<S: Scalar>() -> PerturbFn<S> {
    PerturbFn::from_expr(1, 1, Expr::Sum(vec![Expr::Abs(Box::new(x_coord())), sum_nonpositive()])).expect("dims")
}

/// `Phi(x, y) = x + y`.
pub fn affine_recovery_phi<S: Scalar>() -> PerturbFn<S> {
    PerturbFn::from_expr(1, 1, Expr::affine(ints(&[1, 1]), S::zero())).expect("dims")
}

/// `Phi(x, y) = delta_{{-1, 1}}(x) + |y|`.
pub fn two_point_phi<S: Scalar>() -> PerturbFn<S> {
    let two = PwAffine1::indicator_of_points(ints(&[-1, 1])).expect("valid");
    let expr = Expr::Sum(vec![
        Expr::Pw1(two).of_linear(ints(&[1, 0]), S::zero()),
        Expr::Abs(Box::new(Expr::affine(ints(&[0, 1]), S::zero()))),
    ]);
    PerturbFn::from_expr(1, 1, expr).expect("dims")
}

/// The strict epigraph `{(x, a) : a > x}`, written `x - a < 0`.
pub fn open_epigraph<S: Scalar>() -> EPolyhedron<S> {
    EPolyhedron::new(2, vec![Halfspace::open(ints(&[1, -1]), S::zero())]).expect("dim 2")
}

/// Grids and `Phi` of a shipped perturbation problem.
#[derive(Clone, Debug)]
pub struct Instance<S: Scalar> {
    pub name: &'static str,
    pub phi: PerturbFn<S>,
    pub x_grid: Grid<S>,
    pub y_grid: Grid<S>,
    pub dual_y: DualGrid<S>,
    pub xu_pairs: Vec<(Vec<S>, Vec<S>)>,
}

impl<S: Scalar> Instance<S> {
    pub fn build(&self) -> Result<PerturbationProblem<S>, Error> {
        PerturbationProblem::new(
            self.phi.clone(),
            self.x_grid.clone(),
            self.y_grid.clone(),
            self.dual_y.clone(),
            self.xu_pairs.clone(),
        )
    }
}

fn dual_tensor<S: Scalar>(ys: &[i64], vs: &[i64], alphas: &[i64]) -> DualGrid<S> {
    let wrap = |v: &[i64]| v.iter().map(|&n| vec![int::<S>(n)]).collect::<Vec<_>>();
    DualGrid::tensor(1, &wrap(ys), &wrap(vs), &ints(alphas)).expect("distinct")
}

fn pairs<S: Scalar>(xs: &[i64], us: &[i64]) -> Vec<(Vec<S>, Vec<S>)> {
    let mut out = Vec::new();
    for &a in xs {
        for &b in us {
            out.push((vec![int(a)], vec![int(b)]));
        }
    }
    out
}

/// A shipped perturbation problem by name. `open_epigraph_eset` is a set,
/// not a problem; see [`open_epigraph`].
pub fn instance<S: Scalar>(name: &str) -> Option<Instance<S>> {
    let inst = match name {
        "example52" => Instance {
            name: "example52",
            phi: example52_phi(),
            x_grid: line(-5, 5),
            y_grid: line(-5, 5),
            dual_y: dual_tensor(&[-1, 0, 1], &[0, 1], &[1, 2]),
            xu_pairs: pairs(&[-1, 0, 1], &[0, 1]),
        },
        "fenchel_abs" => Instance {
            name: "fenchel_abs",
            phi: fenchel_abs_phi(),
            x_grid: line(-4, 4),
            y_grid: line(-4, 4),
            dual_y: dual_tensor(&[0, 1], &[0, 1], &[1, 2]),
            xu_pairs: pairs(&[-1, 0, 1], &[-1, 0, 1]),
        },
        "affine_recovery" => Instance {
            name: "affine_recovery",
            phi: affine_recovery_phi(),
            x_grid: line(-3, 3),
            y_grid: line(-3, 3),
            dual_y: dual_tensor(&[0, 1], &[0], &[1]),
            xu_pairs: pairs(&[0, 1], &[0]),
        },
        "two_point_nonconvex" => Instance {
            name: "two_point_nonconvex",
            phi: two_point_phi(),
            x_grid: line(-2, 2),
            y_grid: line(-2, 2),
            dual_y: dual_tensor(&[-1, 0, 1], &[0], &[1]),
            xu_pairs: pairs(&[-1, 0, 1], &[-1, 0, 1]),
        },
        "truncated_dual" => Instance {
            name: "truncated_dual",
            phi: fenchel_abs_phi(),
            x_grid: line(-4, 4),
            y_grid: line(-4, 4),
            dual_y: dual_tensor(&[2], &[0, 1], &[1, 2]),
            xu_pairs: pairs(&[-1, 0, 1], &[-1, 0, 1]),
        },
        _ => return None,
    };
    Some(inst)
}

/// All shipped perturbation problems.
pub fn instances<S: Scalar>() -> Vec<Instance<S>> {
    NAMES.iter().filter_map(|n| instance(n)).collect()
}

/// `(1, 1, 1)`, the dual point of the non-convex Lagrangian slice.
pub fn example52_dual_point<S: Scalar>() -> DualPoint<S> {
    DualPoint::new(ints(&[1]), ints(&[1]), int(1))
}
