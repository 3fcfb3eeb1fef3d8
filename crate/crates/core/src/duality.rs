//! Perturbational duality on grids.
//!
//! A [`PerturbationProblem`] fixes `Phi`, the primal grids and the dual grids,
//! and caches `Psi = Phi^c` and `Phi^{cc'} = Psi^{c'}`. The primal problem is
//! `inf_x Phi(x, 0)`; the dual is `sup -Phi^c((0, y*), (0, v*), alpha)` over
//! `alpha > 0`. The barred pair swaps roles: its values are `-v(dual)` and
//! `-v(primal)`.
//!
//! Audits come in two kinds. Unconditional inequalities hold on every finite
//! instance and are compared exactly. Conditional equalities depend on
//! regularity hypotheses that cannot be decided on a grid; they are compared
//! within [`TAU`] and labelled as surrogates.

use alloc::vec::Vec;

use crate::conjugation::{
    c_conjugate, coupling_cprime, couple, cprime_conjugate, phi_conjugate, phi_cprime_conjugate, DualFn, DualGrid,
    DualPairPoint, DualPoint, PairDualFn, PairDualGrid,
};
use crate::error::Error;
use crate::extreal::{self, ExtReal};
use crate::funcrep::{value_function, Grid, GridLike, PerturbFn, PhiTable, Sampled, SampledFn};
use crate::scalar::Scalar;

/// Tolerance for conditional equalities.
pub const TAU: f64 = 1e-9;

#[derive(Clone, Debug)]
pub struct PerturbationProblem<S: Scalar> {
    phi: PerturbFn<S>,
    table: PhiTable<S>,
    y0: usize,
    dual_y: DualGrid<S>,
    xu_pairs: Vec<(Vec<S>, Vec<S>)>,
    zero_pair: usize,
    full: PairDualGrid<S>,
    psi: PairDualFn<S>,
    psi_cc: PhiTable<S>,
    alphas: Vec<S>,
    alpha_index: Vec<usize>,
    w_grid: DualGrid<S>,
    origin_feasible: bool,
}

impl<S: Scalar> PerturbationProblem<S> {
    /// Builds the problem and tabulates `Phi`, `Phi^c` and `Phi^{cc'}`.
    ///
    /// `xu_pairs` lists the `(x*, u*)` components of the full dual grid,
    /// which is `xu_pairs x dual_y`. The zero pair is added in front when
    /// missing, so the dual objective can always be read off `Phi^c`.
    pub fn new(
        phi: PerturbFn<S>,
        x_grid: Grid<S>,
        y_grid: Grid<S>,
        dual_y: DualGrid<S>,
        mut xu_pairs: Vec<(Vec<S>, Vec<S>)>,
    ) -> Result<Self, Error> {
        if x_grid.is_empty() || y_grid.is_empty() {
            return Err(Error::EmptyGrid);
        }
        for (g, d) in [(&x_grid, phi.x_dim()), (&y_grid, phi.y_dim())] {
            if g.dim() != d {
                return Err(Error::DimensionMismatch { expected: d, found: g.dim() });
            }
        }
        if dual_y.dim() != phi.y_dim() {
            return Err(Error::DimensionMismatch { expected: phi.y_dim(), found: dual_y.dim() });
        }
        let y0 = y_grid.origin_index().ok_or(Error::OriginMissing)?;
        if let Some(i) = dual_y.points().iter().position(|w| w.alpha <= S::zero()) {
            return Err(Error::NonPositiveAlpha(i));
        }
        let xd = phi.x_dim();
        for (xs, us) in &xu_pairs {
            for d in [xs.len(), us.len()] {
                if d != xd {
                    return Err(Error::DimensionMismatch { expected: xd, found: d });
                }
            }
        }
        let zero = alloc::vec![S::zero(); xd];
        let zero_pair = match xu_pairs.iter().position(|(a, b)| *a == zero && *b == zero) {
            Some(k) => k,
            None => {
                xu_pairs.insert(0, (zero.clone(), zero));
                0
            }
        };
        let table = phi.materialize(&x_grid, &y_grid)?;
        let full = PairDualGrid::product(xd, &xu_pairs, &dual_y)?;
        let psi = phi_conjugate(&table, &full)?;
        let psi_cc = phi_cprime_conjugate(&psi, &x_grid, &y_grid)?;

        let mut alphas: Vec<S> = Vec::new();
        let mut alpha_index = Vec::with_capacity(dual_y.len());
        for w in dual_y.points() {
            let k = match alphas.iter().position(|a| *a == w.alpha) {
                Some(k) => k,
                None => {
                    alphas.push(w.alpha.clone());
                    alphas.len() - 1
                }
            };
            alpha_index.push(k);
        }
        let mut wpts = Vec::with_capacity(xu_pairs.len() * alphas.len());
        for (xs, us) in &xu_pairs {
            for a in &alphas {
                wpts.push(DualPoint::new(xs.clone(), us.clone(), a.clone()));
            }
        }
        let w_grid = DualGrid::new(xd, wpts)?;
        let origin_feasible = (0..x_grid.len()).any(|i| !table.at(i, y0).is_pos_inf());
        Ok(PerturbationProblem {
            phi,
            table,
            y0,
            dual_y,
            xu_pairs,
            zero_pair,
            full,
            psi,
            psi_cc,
            alphas,
            alpha_index,
            w_grid,
            origin_feasible,
        })
    }

    pub fn phi(&self) -> &PerturbFn<S> {
        &self.phi
    }

    pub fn table(&self) -> &PhiTable<S> {
        &self.table
    }

    pub fn x_grid(&self) -> &Grid<S> {
        self.table.x_grid()
    }

    pub fn y_grid(&self) -> &Grid<S> {
        self.table.y_grid()
    }

    /// Index of the origin in the y-grid.
    pub fn y_origin(&self) -> usize {
        self.y0
    }

    pub fn dual_y(&self) -> &DualGrid<S> {
        &self.dual_y
    }

    pub fn xu_pairs(&self) -> &[(Vec<S>, Vec<S>)] {
        &self.xu_pairs
    }

    pub fn full_grid(&self) -> &PairDualGrid<S> {
        &self.full
    }

    /// `Psi = Phi^c` on the full dual grid.
    pub fn psi(&self) -> &PairDualFn<S> {
        &self.psi
    }

    /// `Phi^{cc'}` on `X x Y`.
    pub fn phi_biconjugate(&self) -> &PhiTable<S> {
        &self.psi_cc
    }

    /// The projection of the full dual grid onto `W = X* x X* x R`.
    pub fn w_grid(&self) -> &DualGrid<S> {
        &self.w_grid
    }

    /// Whether `0` belongs to the projection of `dom Phi` onto `Y` on the grid.
    pub fn origin_feasible(&self) -> bool {
        self.origin_feasible
    }

    /// Index into the full grid of `((x*_k, y*), (u*_k, v*), alpha)` with
    /// `(y*, v*, alpha)` the `j`-th point of `dual_y`.
    pub fn full_index(&self, pair: usize, j: usize) -> usize {
        pair * self.dual_y.len() + j
    }

    /// Index into [`Self::w_grid`] of the projection of full point `m`.
    pub fn w_index_of_full(&self, m: usize) -> usize {
        let ny = self.dual_y.len();
        (m / ny) * self.alphas.len() + self.alpha_index[m % ny]
    }

    /// `x -> Phi(x, 0)`.
    pub fn primal_fn(&self) -> SampledFn<S> {
        let values = (0..self.x_grid().len()).map(|i| self.table.at(i, self.y0).clone()).collect();
        Sampled::new(self.x_grid().clone(), values).expect("aligned")
    }

    /// `Phi(., 0)^c` on [`Self::w_grid`].
    pub fn primal_conjugate(&self) -> DualFn<S> {
        c_conjugate(&self.primal_fn(), &self.w_grid).expect("aligned")
    }

    /// `G = Phi^c((0, .), (0, .), .)` on `dual_y`.
    pub fn dual_objective(&self) -> DualFn<S> {
        let values = (0..self.dual_y.len())
            .map(|j| self.psi.value(self.full_index(self.zero_pair, j)).clone())
            .collect();
        Sampled::new(self.dual_y.clone(), values).expect("aligned")
    }

    /// The infimum value function `p` on the y-grid.
    pub fn value_function(&self) -> SampledFn<S> {
        value_function(&self.table)
    }
}

/// `Phi^c((0, y*), (0, v*), alpha)` computed directly, for any `alpha`.
/// With `alpha <= 0` and `Phi(., 0)` proper somewhere this is `+inf`.
pub fn dual_objective_at<S: Scalar>(p: &PerturbationProblem<S>, w: &DualPoint<S>) -> ExtReal<S> {
    let wp = DualPairPoint::embed(p.x_grid().dim(), w);
    let mut z = Vec::new();
    let mut best = ExtReal::NegInf;
    for (i, x) in p.x_grid().points().iter().enumerate() {
        for (j, y) in p.y_grid().points().iter().enumerate() {
            z.clear();
            z.extend_from_slice(x);
            z.extend_from_slice(y);
            let v = ExtReal::sub(&couple(&z, &wp), p.table.at(i, j));
            if v > best {
                best = v;
            }
        }
    }
    best
}

/// An optimal value with its attaining grid indices.
#[derive(Clone, Debug, PartialEq)]
pub struct Optimum<S> {
    pub value: ExtReal<S>,
    /// Attaining indices; empty unless the value is finite.
    pub attainers: Vec<usize>,
    /// Every attainer lies on the boundary of its grid, so the value may be
    /// an artefact of truncation.
    pub truncated: bool,
}

impl<S: Scalar> Optimum<S> {
    pub fn attained(&self) -> bool {
        !self.attainers.is_empty()
    }
}

fn optimum<S: Scalar>(value: ExtReal<S>, values: impl Iterator<Item = ExtReal<S>>, boundary: impl Fn(usize) -> bool) -> Optimum<S> {
    let attainers: Vec<usize> = if value.is_finite() {
        values.enumerate().filter(|(_, v)| *v == value).map(|(i, _)| i).collect()
    } else {
        Vec::new()
    };
    let truncated = !attainers.is_empty() && attainers.iter().all(|&i| boundary(i));
    Optimum { value, attainers, truncated }
}

/// `v(GP) = inf_x Phi(x, 0)`.
pub fn primal_value<S: Scalar>(p: &PerturbationProblem<S>) -> Optimum<S> {
    let f = p.primal_fn();
    optimum(f.inf(), f.values().iter().cloned(), |i| p.x_grid().is_boundary(i))
}

/// `v(GD_c) = sup -G`.
pub fn dual_value<S: Scalar>(p: &PerturbationProblem<S>) -> Optimum<S> {
    let g = p.dual_objective();
    let neg: Vec<ExtReal<S>> = g.values().iter().map(ExtReal::neg).collect();
    let v = extreal::sup(neg.iter().cloned());
    optimum(v, neg.into_iter(), |j| p.dual_y().is_boundary(j))
}

/// `sup -p^c` with `p` the infimum value function.
pub fn dual_value_via_p<S: Scalar>(p: &PerturbationProblem<S>) -> ExtReal<S> {
    let pc = c_conjugate(&p.value_function(), p.dual_y()).expect("aligned");
    extreal::sup(pc.values().iter().map(ExtReal::neg))
}

/// `(v(GP-bar_c), v(GD-bar))` computed from their own definitions:
/// `inf G` and `sup -Phi(., 0)`.
pub fn converse_pair_values<S: Scalar>(p: &PerturbationProblem<S>) -> (ExtReal<S>, ExtReal<S>) {
    let gpbar = p.dual_objective().inf();
    let gdbar = extreal::sup(p.primal_fn().values().iter().map(ExtReal::neg));
    (gpbar, gdbar)
}

/// The weak-duality chain
/// `inf G >= sup_x -Phi^{cc'}(x, 0) >= sup_x -Phi(x, 0)`.
#[derive(Clone, Debug, PartialEq)]
pub struct ChainAudit<S> {
    pub gp_bar: ExtReal<S>,
    pub middle: ExtReal<S>,
    pub gd_bar: ExtReal<S>,
    pub first_ok: bool,
    pub second_ok: bool,
}

impl<S> ChainAudit<S> {
    pub fn ok(&self) -> bool {
        self.first_ok && self.second_ok
    }
}

pub fn weak_chain_audit<S: Scalar>(p: &PerturbationProblem<S>) -> ChainAudit<S> {
    let (gp_bar, gd_bar) = converse_pair_values(p);
    let middle = extreal::sup((0..p.x_grid().len()).map(|i| p.psi_cc.at(i, p.y0).neg()));
    ChainAudit { first_ok: gp_bar >= middle, second_ok: middle >= gd_bar, gp_bar, middle, gd_bar }
}

/// A point of `W` where `Phi(., 0)^c` differs from the minimum of `Psi`
/// over the `(y*, v*)` fibre.
#[derive(Clone, Debug, PartialEq)]
pub struct C5Witness<S> {
    pub w: DualPoint<S>,
    pub restricted: ExtReal<S>,
    pub fibre_min: ExtReal<S>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct C5Audit<S> {
    /// `Phi(., 0)^c <= Psi` on every fibre; unconditional.
    pub le_ok: bool,
    /// Equality with the fibre minimum everywhere; the finite surrogate of
    /// the closedness condition.
    pub holds: bool,
    /// Points where the equality fails.
    pub witnesses: Vec<C5Witness<S>>,
}

pub fn c5_audit<S: Scalar>(p: &PerturbationProblem<S>) -> C5Audit<S> {
    let restricted = p.primal_conjugate();
    let mut fibre_min: Vec<ExtReal<S>> = alloc::vec![ExtReal::PosInf; p.w_grid.len()];
    let mut le_ok = true;
    for m in 0..p.full.len() {
        let k = p.w_index_of_full(m);
        let v = p.psi.value(m);
        if restricted.value(k) > v {
            le_ok = false;
        }
        if *v < fibre_min[k] {
            fibre_min[k] = v.clone();
        }
    }
    let mut witnesses = Vec::new();
    for (k, w) in p.w_grid.points().iter().enumerate() {
        let (l, r) = (restricted.value(k), &fibre_min[k]);
        if !l.within(r, TAU) {
            witnesses.push(C5Witness { w: w.clone(), restricted: l.clone(), fibre_min: r.clone() });
        }
    }
    C5Audit { le_ok, holds: witnesses.is_empty(), witnesses }
}

/// A point `y` where `G^{c'}(y)` differs from `min_x Phi^{cc'}(x, y)`.
#[derive(Clone, Debug, PartialEq)]
pub struct PointWitness<S> {
    pub point: Vec<S>,
    pub lhs: ExtReal<S>,
    pub rhs: ExtReal<S>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct C5barAudit<S> {
    /// `G^{c'} <= inf_x Psi^{c'}(x, .)` everywhere; unconditional.
    pub le_ok: bool,
    /// Equality with an attained infimum at every `y`; surrogate.
    pub holds: bool,
    /// Some minimiser over `x` lies on the x-grid boundary.
    pub truncated: bool,
    pub witnesses: Vec<PointWitness<S>>,
}

// `inf_x Phi^{cc'}(x, y_j)` and whether a minimiser sits on the boundary.
fn biconj_inf_over_x<S: Scalar>(p: &PerturbationProblem<S>, j: usize) -> (ExtReal<S>, bool, bool) {
    let nx = p.x_grid().len();
    let v = extreal::inf((0..nx).map(|i| p.psi_cc.at(i, j).clone()));
    let attainers: Vec<usize> = (0..nx).filter(|&i| *p.psi_cc.at(i, j) == v).collect();
    let attained = v.is_finite() && !attainers.is_empty();
    let truncated = v.is_finite() && attainers.iter().all(|&i| p.x_grid().is_boundary(i));
    (v, attained, truncated)
}

pub fn c5bar_audit<S: Scalar>(p: &PerturbationProblem<S>) -> C5barAudit<S> {
    let gc = cprime_conjugate(&p.dual_objective(), p.y_grid()).expect("aligned");
    let mut le_ok = true;
    let mut truncated = false;
    let mut witnesses = Vec::new();
    for (j, y) in p.y_grid().points().iter().enumerate() {
        let (rhs, attained, trunc) = biconj_inf_over_x(p, j);
        let lhs = gc.value(j);
        if *lhs > rhs {
            le_ok = false;
        }
        truncated |= trunc;
        let equal = lhs.within(&rhs, TAU) && (attained || !rhs.is_finite());
        if !equal {
            witnesses.push(PointWitness { point: y.clone(), lhs: lhs.clone(), rhs });
        }
    }
    C5barAudit { le_ok, holds: witnesses.is_empty(), truncated, witnesses }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RestrictionAudit<S> {
    /// `(Phi(., 0))^{cc'} >= Phi^{cc'}(., 0)` everywhere; unconditional.
    pub ge_ok: bool,
    pub c5_holds: bool,
    /// Equality within tolerance, checked only when the surrogate holds.
    pub equality: Option<bool>,
    pub witnesses: Vec<PointWitness<S>>,
}

pub fn restriction_audit<S: Scalar>(p: &PerturbationProblem<S>) -> RestrictionAudit<S> {
    let c5 = c5_audit(p);
    let lhs = cprime_conjugate(&p.primal_conjugate(), p.x_grid()).expect("aligned");
    let mut ge_ok = true;
    let mut witnesses = Vec::new();
    for (i, x) in p.x_grid().points().iter().enumerate() {
        let (l, r) = (lhs.value(i), p.psi_cc.at(i, p.y0));
        if l < r {
            ge_ok = false;
        }
        if !l.within(r, TAU) {
            witnesses.push(PointWitness { point: x.clone(), lhs: l.clone(), rhs: r.clone() });
        }
    }
    let equality = c5.holds.then_some(witnesses.is_empty());
    RestrictionAudit { ge_ok, c5_holds: c5.holds, equality, witnesses }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ValueHullAudit<S> {
    /// `p^{cc'} <= inf_x Phi^{cc'}(x, .)` everywhere; unconditional.
    pub le_ok: bool,
    pub c5bar_holds: bool,
    /// Equality with attainment, checked only when the surrogate holds.
    pub equality: Option<bool>,
    pub witnesses: Vec<PointWitness<S>>,
}

pub fn value_hull_audit<S: Scalar>(p: &PerturbationProblem<S>) -> ValueHullAudit<S> {
    let c5bar = c5bar_audit(p);
    let pcc = cprime_conjugate(&c_conjugate(&p.value_function(), p.dual_y()).expect("aligned"), p.y_grid()).expect("aligned");
    let mut le_ok = true;
    let mut witnesses = Vec::new();
    for (j, y) in p.y_grid().points().iter().enumerate() {
        let (rhs, attained, _) = biconj_inf_over_x(p, j);
        let lhs = pcc.value(j);
        if *lhs > rhs {
            le_ok = false;
        }
        if !(lhs.within(&rhs, TAU) && (attained || !rhs.is_finite())) {
            witnesses.push(PointWitness { point: y.clone(), lhs: lhs.clone(), rhs });
        }
    }
    let equality = c5bar.holds.then_some(witnesses.is_empty());
    ValueHullAudit { le_ok, c5bar_holds: c5bar.holds, equality, witnesses }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DualityReport<S> {
    pub primal: Optimum<S>,
    pub dual: Optimum<S>,
    pub v_gp: ExtReal<S>,
    pub v_gdc: ExtReal<S>,
    pub v_gpbar: ExtReal<S>,
    pub v_gdbar: ExtReal<S>,
    /// `v(GP) - v(GD_c)`.
    pub gap: ExtReal<S>,
    pub weak_ok: bool,
    pub zero_gap: bool,
    /// Zero gap and the dual attained at a finite value.
    pub strong: bool,
    /// Zero gap and the primal attained at a finite value.
    pub converse: bool,
    pub total: bool,
    /// Strong duality for the barred pair, computed from its own values.
    pub barred_strong: bool,
    /// `barred_strong == converse`, as it must be.
    pub equivalence_ok: bool,
    pub via_p_ok: bool,
    pub origin_feasible: bool,
    pub chain: ChainAudit<S>,
    pub c5: C5Audit<S>,
    pub c5bar: C5barAudit<S>,
    pub restriction: RestrictionAudit<S>,
    pub value_hull: ValueHullAudit<S>,
}

pub fn converse_duality_report<S: Scalar>(p: &PerturbationProblem<S>) -> DualityReport<S> {
    let primal = primal_value(p);
    let dual = dual_value(p);
    let (v_gp, v_gdc) = (primal.value.clone(), dual.value.clone());
    let (v_gpbar, v_gdbar) = converse_pair_values(p);
    let zero_gap = v_gp == v_gdc;
    let strong = zero_gap && dual.attained();
    let converse = zero_gap && primal.attained();

    // The barred pair: inf G against sup -Phi(., 0), with the latter solved
    // by its own argmax.
    let neg_primal: Vec<ExtReal<S>> = p.primal_fn().values().iter().map(ExtReal::neg).collect();
    let barred_solved = v_gdbar.is_finite() && neg_primal.iter().any(|v| *v == v_gdbar);
    let barred_strong = v_gpbar == v_gdbar && barred_solved;

    DualityReport {
        gap: ExtReal::sub(&v_gp, &v_gdc),
        weak_ok: v_gdc <= v_gp,
        zero_gap,
        strong,
        converse,
        total: strong && converse,
        barred_strong,
        equivalence_ok: barred_strong == converse,
        via_p_ok: dual_value_via_p(p) == v_gdc,
        origin_feasible: p.origin_feasible(),
        chain: weak_chain_audit(p),
        c5: c5_audit(p),
        c5bar: c5bar_audit(p),
        restriction: restriction_audit(p),
        value_hull: value_hull_audit(p),
        primal,
        dual,
        v_gp,
        v_gdc,
        v_gpbar,
        v_gdbar,
    }
}

/// `c'(w, y) - G(w)` summed into `G^{c'}(y)` for a single `y`; exposed for
/// callers that audit individual points.
pub fn dual_biconjugate_at<S: Scalar>(p: &PerturbationProblem<S>, y: &[S]) -> ExtReal<S> {
    let g = p.dual_objective();
    extreal::sup(g.grid().points().iter().zip(g.values()).map(|(w, v)| ExtReal::sub(&coupling_cprime(w, y), v)))
}
