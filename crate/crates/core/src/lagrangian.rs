//! The c-Lagrangian `L(x, w) = inf_{y in Y_x} [Phi(x, y) - c(y, w)]` on
//! `x_grid x dual_y`, its minimax values and saddle points.
//!
//! The infimum only sees grid `y`. In particular the `-inf` branch of a
//! Lagrangian requires a grid `y` in `Y_x` where the coupling is `+inf`.

use alloc::vec::Vec;

use crate::conjugation::{c_conjugate, cprime_conjugate, coupling_c, DualPoint};
use crate::duality::{dual_value, primal_value, PerturbationProblem};
use crate::error::Error;
use crate::extreal::{self, ExtReal};
use crate::funcrep::{slice_x, GridLike, Sampled, SampledFn};
use crate::scalar::{dot, Scalar};

// inf over `Y_x` of `Phi(x, y) - c(y, w)`; `+inf` when `Y_x` is empty.
fn inf_over_slice<S: Scalar>(ys: &[Vec<S>], row: &[ExtReal<S>], w: &DualPoint<S>) -> ExtReal<S> {
    extreal::inf(
        ys.iter()
            .zip(row)
            .filter(|(_, v)| !v.is_pos_inf())
            .map(|(y, v)| ExtReal::sub(v, &coupling_c(y, w))),
    )
}

/// `L(x, w)` for any `x` and any `w` with `alpha > 0`, over the problem's y-grid.
pub fn lagrangian_value<S: Scalar>(p: &PerturbationProblem<S>, x: &[S], w: &DualPoint<S>) -> Result<ExtReal<S>, Error> {
    if w.alpha <= S::zero() {
        return Err(Error::NonPositiveAlpha(0));
    }
    let slice = slice_x(p.phi(), x, p.y_grid())?;
    Ok(inf_over_slice(p.y_grid().points(), slice.f.values(), w))
}

/// The Lagrangian table over `x_grid x dual_y`, row-major in `x`.
#[derive(Clone, Debug)]
pub struct CLagrangian<'a, S: Scalar> {
    problem: &'a PerturbationProblem<S>,
    values: Vec<ExtReal<S>>,
}

impl<'a, S: Scalar> CLagrangian<'a, S> {
    pub fn new(problem: &'a PerturbationProblem<S>) -> Self {
        let table = problem.table();
        let ys = problem.y_grid().points();
        let duals = problem.dual_y().points();
        let nw = duals.len();
        let cell = |k: usize| inf_over_slice(ys, table.row(k / nw), &duals[k % nw]);
        let n = problem.x_grid().len() * nw;
        #[cfg(feature = "rayon")]
        let values = {
            use rayon::prelude::*;
            (0..n).into_par_iter().map(cell).collect()
        };
        #[cfg(not(feature = "rayon"))]
        let values = (0..n).map(cell).collect();
        CLagrangian { problem, values }
    }

    pub fn problem(&self) -> &'a PerturbationProblem<S> {
        self.problem
    }

    pub fn values(&self) -> &[ExtReal<S>] {
        &self.values
    }

    pub fn at(&self, i: usize, j: usize) -> &ExtReal<S> {
        &self.values[i * self.problem.dual_y().len() + j]
    }

    /// `w -> L(x_i, w)`.
    pub fn row(&self, i: usize) -> &[ExtReal<S>] {
        let nw = self.problem.dual_y().len();
        &self.values[i * nw..(i + 1) * nw]
    }

    /// `x -> L(x, w_j)` on the x-grid.
    pub fn column(&self, j: usize) -> SampledFn<S> {
        let nx = self.problem.x_grid().len();
        let vals = (0..nx).map(|i| self.at(i, j).clone()).collect();
        Sampled::new(self.problem.x_grid().clone(), vals).expect("lengths agree")
    }

    pub fn row_sup(&self, i: usize) -> ExtReal<S> {
        extreal::sup(self.row(i).iter().cloned())
    }

    pub fn column_inf(&self, j: usize) -> ExtReal<S> {
        extreal::inf((0..self.problem.x_grid().len()).map(|i| self.at(i, j).clone()))
    }

    /// `sup_w inf_x L`.
    pub fn supinf(&self) -> ExtReal<S> {
        extreal::sup((0..self.problem.dual_y().len()).map(|j| self.column_inf(j)))
    }

    /// `inf_x sup_w L`.
    pub fn infsup(&self) -> ExtReal<S> {
        extreal::inf((0..self.problem.x_grid().len()).map(|i| self.row_sup(i)))
    }

    /// Both saddle inequalities over the full grids.
    pub fn is_saddle_point(&self, xbar: &[S], wbar: &DualPoint<S>) -> Result<bool, Error> {
        let p = self.problem;
        let centre = lagrangian_value(p, xbar, wbar)?;
        for w in p.dual_y().points() {
            if lagrangian_value(p, xbar, w)? > centre {
                return Ok(false);
            }
        }
        for x in p.x_grid().points() {
            if centre > lagrangian_value(p, x, wbar)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// All grid saddle points, ordered by `(x index, w index)`.
    pub fn saddle_search(&self) -> Vec<SaddleCandidate<S>> {
        let p = self.problem;
        let row_sups: Vec<ExtReal<S>> = (0..p.x_grid().len()).map(|i| self.row_sup(i)).collect();
        let col_infs: Vec<ExtReal<S>> = (0..p.dual_y().len()).map(|j| self.column_inf(j)).collect();
        let mut out = Vec::new();
        for (i, rs) in row_sups.iter().enumerate() {
            for (j, ci) in col_infs.iter().enumerate() {
                let v = self.at(i, j);
                if v == rs && v == ci {
                    out.push(SaddleCandidate {
                        x_index: i,
                        w_index: j,
                        xbar: p.x_grid().points()[i].clone(),
                        wbar: p.dual_y().point(j).clone(),
                        value: v.clone(),
                    });
                }
            }
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SaddleCandidate<S> {
    pub x_index: usize,
    pub w_index: usize,
    pub xbar: Vec<S>,
    pub wbar: DualPoint<S>,
    pub value: ExtReal<S>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SliceAudit<S> {
    pub x: Vec<S>,
    /// Dual-grid indices where `-L(x, w) != Phi(x, .)^c(w)`.
    pub mismatches: Vec<usize>,
    /// `Phi(x, .)^{cc'} = Phi(x, .)` on the y-grid.
    pub econvex_surrogate: bool,
}

impl<S> SliceAudit<S> {
    pub fn ok(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// Compares `-L(x, .)` with `Phi(x, .)^c` on `dual_y`.
pub fn dual_slice_audit<S: Scalar>(p: &PerturbationProblem<S>, x: &[S]) -> Result<SliceAudit<S>, Error> {
    let slice = slice_x(p.phi(), x, p.y_grid())?;
    let conj = c_conjugate(&slice.f, p.dual_y())?;
    let hull = cprime_conjugate(&conj, p.y_grid())?;
    let mut mismatches = Vec::new();
    for (j, w) in p.dual_y().points().iter().enumerate() {
        let l = inf_over_slice(p.y_grid().points(), slice.f.values(), w);
        if ExtReal::neg(&l) != *conj.value(j) {
            mismatches.push(j);
        }
    }
    Ok(SliceAudit { x: x.to_vec(), mismatches, econvex_surrogate: hull == slice.f })
}

#[derive(Clone, Debug, PartialEq)]
pub struct MinimaxAudit<S> {
    pub supinf: ExtReal<S>,
    pub infsup: ExtReal<S>,
    pub v_gp: ExtReal<S>,
    pub v_gdc: ExtReal<S>,
    /// `-G(w) = inf_x L(x, w)` at every dual point.
    pub column_identity_ok: bool,
    pub supinf_is_dual_value: bool,
    /// `sup_w L(x, w) <= Phi(x, 0)` at every grid `x`.
    pub row_bound_ok: bool,
    pub supinf_le_infsup: bool,
    /// Every slice `Phi(x, .)` equals its grid hull.
    pub slice_surrogate: bool,
    /// `infsup = v(GP)` within the tolerance. Guaranteed when
    /// `slice_surrogate` holds, observed otherwise.
    pub infsup_is_primal_value: bool,
    /// Every row identity `-L(x, .) = Phi(x, .)^c`.
    pub slices_ok: bool,
}

impl<S> MinimaxAudit<S> {
    /// The unconditional identities.
    pub fn exact_ok(&self) -> bool {
        self.column_identity_ok && self.supinf_is_dual_value && self.row_bound_ok && self.supinf_le_infsup && self.slices_ok
    }
}

pub fn minimax_audit<S: Scalar>(l: &CLagrangian<'_, S>, tau: f64) -> Result<MinimaxAudit<S>, Error> {
    let p = l.problem();
    let g = p.dual_objective();
    let column_identity_ok = (0..p.dual_y().len()).all(|j| l.column_inf(j) == ExtReal::neg(g.value(j)));
    let supinf = l.supinf();
    let infsup = l.infsup();
    let v_gp = primal_value(p).value;
    let v_gdc = dual_value(p).value;
    let t = p.table();
    let row_bound_ok = (0..p.x_grid().len()).all(|i| l.row_sup(i) <= *t.at(i, p.y_origin()));
    let mut slice_surrogate = true;
    let mut slices_ok = true;
    for x in p.x_grid().points() {
        let a = dual_slice_audit(p, x)?;
        slice_surrogate &= a.econvex_surrogate;
        slices_ok &= a.ok();
    }
    Ok(MinimaxAudit {
        supinf_is_dual_value: supinf == v_gdc,
        supinf_le_infsup: supinf <= infsup,
        infsup_is_primal_value: infsup.within(&v_gp, tau),
        supinf,
        infsup,
        v_gp,
        v_gdc,
        column_identity_ok,
        row_bound_ok,
        slice_surrogate,
        slices_ok,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct SaddleAudit<S> {
    pub saddles: Vec<SaddleCandidate<S>>,
    /// Primal argmin times dual argmax when the values agree and are finite.
    pub expected: Vec<(usize, usize)>,
    /// Every saddle value equals both `supinf` and `infsup`.
    pub minimax_ok: bool,
    /// Every expected pair is a saddle point.
    pub expected_are_saddles: bool,
    /// The finite-valued saddles are exactly the expected pairs.
    pub equivalence: bool,
    pub slice_surrogate: bool,
    /// The primal attainers all lie on the x-grid boundary.
    pub truncated: bool,
    /// Finite-valued saddles whose `xbar` lies on the x-grid boundary.
    pub boundary_saddles: Vec<usize>,
}

/// Saddle points against optimal pairs.
pub fn saddle_audit<S: Scalar>(l: &CLagrangian<'_, S>) -> Result<SaddleAudit<S>, Error> {
    let p = l.problem();
    let saddles = l.saddle_search();
    let supinf = l.supinf();
    let infsup = l.infsup();
    let minimax_ok = saddles.iter().all(|s| s.value == supinf && s.value == infsup);
    let pr = primal_value(p);
    let du = dual_value(p);
    let mut expected = Vec::new();
    if pr.value == du.value && pr.value.is_finite() {
        for &i in &pr.attainers {
            for &j in &du.attainers {
                expected.push((i, j));
            }
        }
    }
    let finite: Vec<(usize, usize)> = saddles.iter().filter(|s| s.value.is_finite()).map(|s| (s.x_index, s.w_index)).collect();
    let expected_are_saddles = expected.iter().all(|k| finite.contains(k));
    let mut slice_surrogate = true;
    for x in p.x_grid().points() {
        slice_surrogate &= dual_slice_audit(p, x)?.econvex_surrogate;
    }
    let boundary_saddles = (0..saddles.len())
        .filter(|&k| saddles[k].value.is_finite() && p.x_grid().is_boundary(saddles[k].x_index))
        .collect();
    Ok(SaddleAudit {
        boundary_saddles,
        equivalence: finite == expected,
        saddles,
        expected,
        minimax_ok,
        expected_are_saddles,
        slice_surrogate,
        truncated: pr.truncated,
    })
}

/// The value stated for the finite branch of the non-convex example slice.
pub const EXAMPLE52_STATED_CONSTANT: i64 = -2;

#[derive(Clone, Debug, PartialEq)]
pub struct NonconvexSlice<S> {
    pub w: DualPoint<S>,
    /// `x -> L(x, w)` on the x-grid.
    pub values: Vec<ExtReal<S>>,
    /// `L = -inf` at every grid `x <= -1`.
    pub neg_inf_branch: bool,
    /// `L` finite at every grid `x > -1`.
    pub finite_branch: bool,
    /// Indices `(x1, x2, mid)` with `L(mid) > (L(x1) + L(x2)) / 2`.
    pub witness: Option<(usize, usize, usize)>,
    pub value_at_zero: Option<ExtReal<S>>,
    /// `value_at_zero` equals [`EXAMPLE52_STATED_CONSTANT`].
    pub matches_stated: Option<bool>,
    /// Grid `x <= -1` with no `y` in `Y_x` where the coupling is `+inf`; the
    /// `-inf` branch cannot show at these points.
    pub inadequate: Vec<usize>,
}

/// First midpoint convexity violation of a sampled 1-D function.
pub fn midpoint_violation<S: Scalar>(f: &SampledFn<S>) -> Option<(usize, usize, usize)> {
    let pts = f.grid().points();
    let half = S::one() / S::from_i64(2);
    for a in 0..pts.len() {
        for b in a + 1..pts.len() {
            let mid: Vec<S> = pts[a].iter().zip(&pts[b]).map(|(s, t)| (s.clone() + t.clone()) * half.clone()).collect();
            let Some(m) = f.grid().index_of(&mid) else { continue };
            let avg = ExtReal::add(f.value(a), f.value(b)).scale(&half);
            if *f.value(m) > avg {
                return Some((a, b, m));
            }
        }
    }
    None
}

/// `x -> L(x, w)` for a 1-D problem, checked against the branch structure
/// `-inf` on `x <= -1` and finite on `x > -1`.
pub fn nonconvex_slice<S: Scalar>(p: &PerturbationProblem<S>, w: &DualPoint<S>) -> Result<NonconvexSlice<S>, Error> {
    if p.x_grid().dim() != 1 || p.y_grid().dim() != 1 {
        return Err(Error::DimensionMismatch { expected: 1, found: p.x_grid().dim().max(p.y_grid().dim()) });
    }
    let xs = p.x_grid().points();
    let values = xs.iter().map(|x| lagrangian_value(p, x, w)).collect::<Result<Vec<_>, _>>()?;
    let minus_one = -S::one();
    let neg_inf_branch = xs.iter().zip(&values).filter(|(x, _)| x[0] <= minus_one).all(|(_, v)| v.is_neg_inf());
    let finite_branch = xs.iter().zip(&values).filter(|(x, _)| x[0] > minus_one).all(|(_, v)| v.is_finite());
    let f = Sampled::new(p.x_grid().clone(), values.clone())?;
    let zero = p.x_grid().index_of(&alloc::vec![S::zero()]);
    let value_at_zero = zero.map(|i| values[i].clone());
    let stated = ExtReal::from_i64(EXAMPLE52_STATED_CONSTANT);
    let t = p.table();
    let inadequate = (0..xs.len())
        .filter(|&i| xs[i][0] <= minus_one)
        .filter(|&i| {
            !p.y_grid()
                .points()
                .iter()
                .enumerate()
                .any(|(j, y)| !t.at(i, j).is_pos_inf() && dot(y, &w.ustar) >= w.alpha)
        })
        .collect();
    Ok(NonconvexSlice {
        w: w.clone(),
        neg_inf_branch,
        finite_branch,
        witness: midpoint_violation(&f),
        matches_stated: value_at_zero.as_ref().map(|v| *v == stated),
        value_at_zero,
        values,
        inadequate,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::duality::TAU;
    use crate::scalar::{q, rv, Rational};

    type R = Rational;

    fn w(y: i64, v: i64, a: i64) -> DualPoint<R> {
        DualPoint::new(rv(&[y]), rv(&[v]), q(a, 1))
    }

    fn build(name: &str) -> PerturbationProblem<R> {
        catalog::instance::<R>(name).unwrap().build().unwrap()
    }

    #[test]
    fn example52_values() {
        let p = build("example52");
        assert_eq!(lagrangian_value(&p, &rv(&[-2]), &w(1, 1, 1)).unwrap(), ExtReal::NegInf);
        // inf of 0 - y over y in {-5, .., 0}
        assert_eq!(lagrangian_value(&p, &rv(&[0]), &w(1, 1, 1)).unwrap(), ExtReal::zero());
        assert_eq!(lagrangian_value(&p, &rv(&[2]), &w(1, 1, 1)).unwrap(), ExtReal::from_i64(4));
        assert_eq!(lagrangian_value(&p, &rv(&[0]), &w(1, 1, 0)), Err(Error::NonPositiveAlpha(0)));
    }

    #[test]
    fn fenchel_flat_dual_point() {
        let p = build("fenchel_abs");
        for k in -4..=4 {
            assert_eq!(lagrangian_value(&p, &rv(&[k]), &w(0, 0, 1)).unwrap(), ExtReal::from_i64(k.abs()));
        }
    }

    #[test]
    fn empty_slice_is_plus_infinity() {
        let p = build("two_point_nonconvex");
        assert_eq!(lagrangian_value(&p, &rv(&[0]), &w(1, 0, 1)).unwrap(), ExtReal::PosInf);
        let a = dual_slice_audit(&p, &rv(&[0])).unwrap();
        assert!(a.ok());
    }

    #[test]
    fn minimax_on_catalog() {
        for inst in catalog::instances::<R>() {
            let p = inst.build().unwrap();
            let l = CLagrangian::new(&p);
            let m = minimax_audit(&l, TAU).unwrap();
            assert!(m.exact_ok(), "{}", inst.name);
        }
        let p = build("fenchel_abs");
        let m = minimax_audit(&CLagrangian::new(&p), TAU).unwrap();
        assert_eq!(m.infsup, ExtReal::zero());
        assert!(m.infsup_is_primal_value);
        // the slices y -> |x| + delta(y <= -x) with x >= 1 miss the origin,
        // which no gate with alpha > 0 can cut off
        assert!(!m.slice_surrogate);
    }

    #[test]
    fn fenchel_saddles() {
        let p = build("fenchel_abs");
        let l = CLagrangian::new(&p);
        assert!(l.is_saddle_point(&rv(&[0]), &w(0, 0, 1)).unwrap());
        assert!(!l.is_saddle_point(&rv(&[1]), &w(0, 0, 1)).unwrap());
        let a = saddle_audit(&l).unwrap();
        assert!(a.minimax_ok && a.expected_are_saddles && a.equivalence);
        assert!(a.saddles.iter().all(|s| s.xbar == rv(&[0]) && s.value == ExtReal::zero()));
        assert!(a.saddles.iter().any(|s| s.wbar == w(0, 0, 1)));
    }

    #[test]
    fn positive_gap_saddles_sit_on_the_boundary() {
        let p = build("truncated_dual");
        let a = saddle_audit(&CLagrangian::new(&p)).unwrap();
        assert!(a.expected.is_empty() && a.minimax_ok);
        assert!(!a.slice_surrogate);
        let finite: Vec<_> = a.saddles.iter().filter(|s| s.value.is_finite()).collect();
        assert!(finite.iter().all(|s| s.xbar == rv(&[-4]) && s.value == ExtReal::from_i64(-4)));
        assert_eq!(a.boundary_saddles.len(), finite.len());
        assert_eq!(a.equivalence, finite.is_empty());
    }

    #[test]
    fn nonconvex_branch_structure() {
        let p = build("example52");
        let s = nonconvex_slice(&p, &catalog::example52_dual_point()).unwrap();
        assert!(s.neg_inf_branch && s.finite_branch);
        assert!(s.witness.is_some());
        assert_eq!(s.value_at_zero, Some(ExtReal::zero()));
        assert_eq!(s.matches_stated, Some(false));
        assert!(s.inadequate.is_empty());
    }
}
