//! c-, c'- and epsilon-c-subdifferentials on grids.
//!
//! Each membership test exists in two forms: the definitional inequality over
//! the whole grid, and the equality or inequality against a precomputed
//! conjugate. On the rational backend the two forms agree exactly.

use alloc::vec::Vec;

use crate::conjugation::{coupling_c, coupling_cbar, coupling_cprime, cprime_conjugate, c_conjugate, DualFn, DualGrid, DualPoint};
use crate::duality::{c5_audit, dual_value, primal_value, PerturbationProblem};
use crate::error::Error;
use crate::extreal::ExtReal;
use crate::funcrep::{GridLike, SampledFn};
use crate::scalar::{dot, Scalar};

fn index_of<S: Scalar>(f: &SampledFn<S>, x0: &[S]) -> Result<usize, Error> {
    f.grid().points().iter().position(|p| p.as_slice() == x0).ok_or(Error::OffGrid)
}

/// `f(x) - f(x0) >= c(x, w) - c(x0, w) - eps` for all grid `x`, together with
/// `f(x0)` finite and `<x0, u*> < alpha`.
pub fn is_eps_c_subgradient<S: Scalar>(f: &SampledFn<S>, x0: &[S], w: &DualPoint<S>, eps: &S) -> Result<bool, Error> {
    let i0 = index_of(f, x0)?;
    let f0 = f.value(i0);
    if !f0.is_finite() || dot(x0, &w.ustar) >= w.alpha {
        return Ok(false);
    }
    let c0 = coupling_c(x0, w);
    let e = ExtReal::new(eps.clone());
    Ok(f.grid().points().iter().zip(f.values()).all(|(x, fx)| {
        let lhs = fx.sub(f0);
        let rhs = coupling_c(x, w).sub(&c0).sub(&e);
        lhs >= rhs
    }))
}

/// The definition of a c-subgradient.
pub fn is_c_subgradient<S: Scalar>(f: &SampledFn<S>, x0: &[S], w: &DualPoint<S>) -> Result<bool, Error> {
    is_eps_c_subgradient(f, x0, w, &S::zero())
}

/// `f(x0) + f^c(w) <= c(x0, w) + eps` with `<x0, u*> < alpha` and `f(x0)` finite.
pub fn is_eps_c_subgradient_via_conjugate<S: Scalar>(
    f: &SampledFn<S>,
    fc: &DualFn<S>,
    x0: &[S],
    w: &DualPoint<S>,
    eps: &S,
) -> Result<bool, Error> {
    let f0 = f.value(index_of(f, x0)?);
    let fcw = fc.eval(w)?;
    if !f0.is_finite() || dot(x0, &w.ustar) >= w.alpha {
        return Ok(false);
    }
    Ok(f0.add(fcw) <= coupling_c(x0, w).add(&ExtReal::new(eps.clone())))
}

/// `f(x0) + f^c(w) = c(x0, w)` with `<x0, u*> < alpha`.
pub fn is_c_subgradient_via_conjugate<S: Scalar>(f: &SampledFn<S>, fc: &DualFn<S>, x0: &[S], w: &DualPoint<S>) -> Result<bool, Error> {
    let f0 = f.value(index_of(f, x0)?);
    let fcw = fc.eval(w)?;
    if !f0.is_finite() || dot(x0, &w.ustar) >= w.alpha {
        return Ok(false);
    }
    Ok(f0.add(fcw) == coupling_c(x0, w))
}

/// The definition of a c'-subgradient of `g` at `w0`: `g(w0)` finite,
/// `<x, u0*> < alpha0` and `g(w) - g(w0) >= c'(w, x) - c'(w0, x)` for all
/// grid `w`.
pub fn is_cprime_subgradient<S: Scalar>(g: &DualFn<S>, w0: &DualPoint<S>, x: &[S]) -> Result<bool, Error> {
    let g0 = g.eval(w0)?;
    if !g0.is_finite() || dot(x, &w0.ustar) >= w0.alpha {
        return Ok(false);
    }
    let c0 = coupling_cprime(w0, x);
    Ok(g.grid().points().iter().zip(g.values()).all(|(w, gw)| gw.sub(g0) >= coupling_cprime(w, x).sub(&c0)))
}

/// `g(w0) + g^{c'}(x) = c'(w0, x)` with `<x, u0*> < alpha0`.
pub fn is_cprime_subgradient_via_conjugate<S: Scalar>(
    g: &DualFn<S>,
    gc: &SampledFn<S>,
    w0: &DualPoint<S>,
    x: &[S],
) -> Result<bool, Error> {
    let g0 = g.eval(w0)?;
    let gcx = gc.eval(&x.to_vec())?;
    if !g0.is_finite() || dot(x, &w0.ustar) >= w0.alpha {
        return Ok(false);
    }
    Ok(g0.add(gcx) == coupling_cprime(w0, x))
}

/// A grid section of an epsilon-c-subdifferential.
#[derive(Clone, Debug, PartialEq)]
pub struct SubdiffSet<S> {
    pub x0: Vec<S>,
    pub eps: S,
    /// Indices into the dual grid.
    pub members: Vec<usize>,
    pub points: Vec<DualPoint<S>>,
    /// The definitional form selected the same members.
    pub definitional_agrees: bool,
}

/// Members of `d_{c,eps} f(x0)` among the points of `w_grid`, selected with
/// the conjugate form.
pub fn eps_c_subdifferential<S: Scalar>(f: &SampledFn<S>, x0: &[S], eps: &S, w_grid: &DualGrid<S>) -> Result<SubdiffSet<S>, Error> {
    if *eps < S::zero() {
        return Err(Error::NegativeEpsilon);
    }
    let fc = c_conjugate(f, w_grid)?;
    let mut members = Vec::new();
    let mut agrees = true;
    for (k, w) in w_grid.points().iter().enumerate() {
        let via = is_eps_c_subgradient_via_conjugate(f, &fc, x0, w, eps)?;
        if via != is_eps_c_subgradient(f, x0, w, eps)? {
            agrees = false;
        }
        if via {
            members.push(k);
        }
    }
    let points = members.iter().map(|&k| w_grid.point(k).clone()).collect();
    Ok(SubdiffSet { x0: x0.to_vec(), eps: eps.clone(), members, points, definitional_agrees: agrees })
}

#[derive(Clone, Debug, PartialEq)]
pub struct TransferAudit {
    pub pairs_checked: usize,
    /// `w in d_c f(x)` implies `x in d_{c'} f^c(w)` at every pair.
    pub forward_ok: bool,
    /// Pairs `(x index, w index)` where the forward implication fails.
    pub forward_failures: Vec<(usize, usize)>,
    /// Pairs where `x in d_{c'} f^c(w)` but `w` is not in `d_c f(x)`.
    pub converse_failures: Vec<(usize, usize)>,
    /// `f^{cc'} = f` on the grid, the surrogate for e-convexity.
    pub econvex_surrogate: bool,
    /// Definitional and conjugate forms agreed for both subdifferentials.
    pub forms_agree: bool,
}

impl TransferAudit {
    pub fn converse_ok(&self) -> bool {
        self.converse_failures.is_empty()
    }
}

/// Membership transfer between `d_c f(x)` and `d_{c'} f^c(w)` at the same
/// pair `(x, w)`, over every grid pair.
pub fn transfer_audit<S: Scalar>(f: &SampledFn<S>, w_grid: &DualGrid<S>) -> Result<TransferAudit, Error> {
    let fc = c_conjugate(f, w_grid)?;
    let fcc = cprime_conjugate(&fc, f.grid())?;
    let mut forward_failures = Vec::new();
    let mut converse_failures = Vec::new();
    let mut forms_agree = true;
    for (i, x) in f.grid().points().iter().enumerate() {
        for (k, w) in w_grid.points().iter().enumerate() {
            let primal = is_c_subgradient(f, x, w)?;
            let dual = is_cprime_subgradient(&fc, w, x)?;
            if primal != is_c_subgradient_via_conjugate(f, &fc, x, w)?
                || dual != is_cprime_subgradient_via_conjugate(&fc, &fcc, w, x)?
            {
                forms_agree = false;
            }
            if primal && !dual {
                forward_failures.push((i, k));
            }
            if dual && !primal {
                converse_failures.push((i, k));
            }
        }
    }
    Ok(TransferAudit {
        pairs_checked: f.len() * w_grid.len(),
        forward_ok: forward_failures.is_empty(),
        forward_failures,
        converse_failures,
        econvex_surrogate: fcc == *f,
        forms_agree,
    })
}

/// `((0, y*), (0, v*), alpha)` in `d_c Phi(x, 0)`, decided by the definition
/// over the whole `X x Y` grid.
fn embedded_subgradient_definitional<S: Scalar>(p: &PerturbationProblem<S>, i: usize, j: usize) -> bool {
    let t = p.table();
    let phi0 = t.at(i, p.y_origin());
    if !phi0.is_finite() {
        return false;
    }
    let w = p.dual_y().point(j);
    let zero_x = alloc::vec![S::zero(); p.x_grid().dim()];
    let wp = crate::conjugation::DualPairPoint::embed(zero_x.len(), w);
    let c0 = coupling_cbar(&p.x_grid().points()[i], &p.y_grid().points()[p.y_origin()], &wp);
    for (a, x) in p.x_grid().points().iter().enumerate() {
        for (b, y) in p.y_grid().points().iter().enumerate() {
            if t.at(a, b).sub(phi0) < coupling_cbar(x, y, &wp).sub(&c0) {
                return false;
            }
        }
    }
    true
}

#[derive(Clone, Debug, PartialEq)]
pub struct TotalDualityCertificate<S> {
    /// All `(x index, dual_y index)` pairs with `((0, y*), (0, v*), alpha)`
    /// in `d_c Phi(x, 0)`.
    pub pairs: Vec<(usize, usize)>,
    /// The first certificate, if any.
    pub first: Option<(Vec<S>, DualPoint<S>)>,
    /// The pairs coincide with primal argmin times dual argmax when the
    /// values agree and are finite, and are absent otherwise.
    pub consistent: bool,
    /// Conjugate-form and definitional search found the same pairs.
    pub forms_agree: bool,
}

/// Searches `x_grid x dual_y` for total-duality certificates.
pub fn total_duality_certificate<S: Scalar>(p: &PerturbationProblem<S>) -> TotalDualityCertificate<S> {
    let g = p.dual_objective();
    let f = p.primal_fn();
    let mut pairs = Vec::new();
    let mut forms_agree = true;
    for i in 0..p.x_grid().len() {
        for j in 0..p.dual_y().len() {
            // The embedded coupling at (x, 0) is 0 and its gate 0 < alpha holds.
            let via_values = f.value(i).is_finite() && f.value(i).add(g.value(j)) == ExtReal::zero();
            if via_values != embedded_subgradient_definitional(p, i, j) {
                forms_agree = false;
            }
            if via_values {
                pairs.push((i, j));
            }
        }
    }
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
    let first = pairs.first().map(|&(i, j)| (p.x_grid().points()[i].clone(), p.dual_y().point(j).clone()));
    TotalDualityCertificate { consistent: pairs == expected, pairs, first, forms_agree }
}

// Indices into `w_grid` of projections of `d_{c,eps} Phi(x, 0)`.
fn projected_members<S: Scalar>(p: &PerturbationProblem<S>, i: usize, eps: &S) -> Vec<bool> {
    let mut hit = alloc::vec![false; p.w_grid().len()];
    let phi0 = p.table().at(i, p.y_origin());
    if !phi0.is_finite() {
        return hit;
    }
    let x = &p.x_grid().points()[i];
    let y0 = &p.y_grid().points()[p.y_origin()];
    let e = ExtReal::new(eps.clone());
    for (m, wp) in p.full_grid().points().iter().enumerate() {
        // The gate of the paired coupling at (x, 0) is <x, u*> < alpha.
        if dot(x, wp.ustar()) >= *crate::conjugation::Dual::alpha(wp) {
            continue;
        }
        if phi0.add(p.psi().value(m)) <= coupling_cbar(x, y0, wp).add(&e) {
            hit[p.w_index_of_full(m)] = true;
        }
    }
    hit
}

fn indices(mask: &[bool]) -> Vec<usize> {
    (0..mask.len()).filter(|&k| mask[k]).collect()
}

fn x_index<S: Scalar>(p: &PerturbationProblem<S>, x: &[S]) -> Result<usize, Error> {
    p.x_grid().points().iter().position(|q| q.as_slice() == x).ok_or(Error::OffGrid)
}

#[derive(Clone, Debug, PartialEq)]
pub struct IntersectionAudit<S> {
    pub eps: S,
    /// `d_{c,eps} Phi(., 0)(x)` as indices into the problem's `w_grid`.
    pub lhs: Vec<usize>,
    /// The intersection of the projections over the supplied ladder.
    pub ladder_intersection: Vec<usize>,
    pub smallest_eta: S,
    /// The intersection over all `eta > 0`. On a finite grid every
    /// inequality `<= eps + eta` for all `eta > 0` collapses to `<= eps`, so
    /// this is the projection of `d_{c,eps} Phi(x, 0)`.
    pub limit: Vec<usize>,
    /// `limit` is contained in `lhs`; unconditional.
    pub superset_ok: bool,
    /// The grid surrogate of the hypothesis: `Phi(., 0)^c` equals the
    /// fibrewise infimum of `Phi^c`.
    pub hypothesis_surrogate: bool,
    pub equal_limit: bool,
    pub equal_ladder: bool,
    /// Members of `lhs` missing from `limit`.
    pub witnesses: Vec<DualPoint<S>>,
}

/// The intersection formula for `d_{c,eps} Phi(., 0)(x)`.
pub fn intersection_audit<S: Scalar>(p: &PerturbationProblem<S>, x: &[S], eps: &S, ladder: &[S]) -> Result<IntersectionAudit<S>, Error> {
    if *eps < S::zero() {
        return Err(Error::NegativeEpsilon);
    }
    if ladder.is_empty() {
        return Err(Error::EmptyLadder);
    }
    if ladder.iter().any(|e| *e <= S::zero()) {
        return Err(Error::NonPositiveEta);
    }
    let i = x_index(p, x)?;
    let lhs = eps_c_subdifferential(&p.primal_fn(), x, eps, p.w_grid())?.members;
    let mut inter = alloc::vec![true; p.w_grid().len()];
    for eta in ladder {
        let m = projected_members(p, i, &(eps.clone() + eta.clone()));
        for (a, b) in inter.iter_mut().zip(m) {
            *a &= b;
        }
    }
    let limit = indices(&projected_members(p, i, eps));
    let ladder_intersection = indices(&inter);
    let smallest_eta = ladder.iter().cloned().fold(ladder[0].clone(), |a, b| if b < a { b } else { a });
    let witnesses: Vec<DualPoint<S>> = lhs.iter().filter(|k| !limit.contains(k)).map(|&k| p.w_grid().point(k).clone()).collect();
    Ok(IntersectionAudit {
        eps: eps.clone(),
        superset_ok: limit.iter().all(|k| lhs.contains(k)),
        hypothesis_surrogate: c5_audit(p).holds,
        equal_limit: lhs == limit,
        equal_ladder: lhs == ladder_intersection,
        lhs,
        ladder_intersection,
        smallest_eta,
        limit,
        witnesses,
    })
}

/// The default eta ladder `{1, 1/10, 1/100, 1/1000}`.
pub fn default_ladder<S: Scalar>() -> Vec<S> {
    [1, 10, 100, 1000].iter().map(|&d| S::one() / S::from_i64(d)).collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct ProjectionAudit<S> {
    pub eps: S,
    pub lhs: Vec<usize>,
    /// `Pr_W d_{c,eps} Phi(x, 0)`.
    pub projection: Vec<usize>,
    pub superset_ok: bool,
    pub c5_holds: bool,
    pub equal: bool,
    pub witnesses: Vec<DualPoint<S>>,
}

/// The projection formula for `d_{c,eps} Phi(., 0)(x)`.
pub fn projection_audit<S: Scalar>(p: &PerturbationProblem<S>, x: &[S], eps: &S) -> Result<ProjectionAudit<S>, Error> {
    if *eps < S::zero() {
        return Err(Error::NegativeEpsilon);
    }
    let i = x_index(p, x)?;
    let lhs = eps_c_subdifferential(&p.primal_fn(), x, eps, p.w_grid())?.members;
    let projection = indices(&projected_members(p, i, eps));
    let witnesses: Vec<DualPoint<S>> = lhs.iter().filter(|k| !projection.contains(k)).map(|&k| p.w_grid().point(k).clone()).collect();
    Ok(ProjectionAudit {
        eps: eps.clone(),
        superset_ok: projection.iter().all(|k| lhs.contains(k)),
        c5_holds: c5_audit(p).holds,
        equal: lhs == projection,
        lhs,
        projection,
        witnesses,
    })
}
