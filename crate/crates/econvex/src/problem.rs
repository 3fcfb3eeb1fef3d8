//! The JSON problem file.
//!
//! Numbers are strings so that rationals survive a round trip: `"3"`,
//! `"-1/2"`, and for the float backend also `"0.25"` or `"1e-3"`. Plain JSON
//! integers are accepted on input and written back as strings. Unknown keys
//! are rejected everywhere.

use std::fs;
use std::path::Path;

use econvex_core::catalog::Instance;
use econvex_core::conjugation::DualGrid;
use econvex_core::duality::{PerturbationProblem, TAU};
use econvex_core::esets::{EPolyhedron, Halfspace};
use econvex_core::funcrep::{Endpoint, Expr, Grid, GridLike, Piece, PieceValue, PerturbFn, PhiTable, PwAffine1, Sampled, SampledFn};
use econvex_core::scalar::Rational;
use econvex_core::{ExtReal, Scalar};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Num {
    Text(String),
    Int(i64),
}

impl Num {
    pub fn text(&self) -> String {
        match self {
            Num::Text(s) => s.clone(),
            Num::Int(n) => n.to_string(),
        }
    }

    fn of<S: Scalar>(v: &S) -> Num {
        Num::Text(v.to_string())
    }

    fn of_ext<S: Scalar>(v: &ExtReal<S>) -> Num {
        Num::Text(v.to_string())
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Kind {
    #[default]
    Perturbation,
    Eset,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BackendName {
    #[default]
    Rational,
    Float,
}

/// One coordinate vector; a bare number stands for a 1-vector.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Coord {
    Scalar(Num),
    Vector(Vec<Num>),
}

impl Coord {
    fn parts(&self) -> Vec<Num> {
        match self {
            Coord::Scalar(n) => vec![n.clone()],
            Coord::Vector(v) => v.clone(),
        }
    }

    fn of<S: Scalar>(v: &[S]) -> Coord {
        if v.len() == 1 {
            Coord::Scalar(Num::of(&v[0]))
        } else {
            Coord::Vector(v.iter().map(Num::of).collect())
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum GridSpec {
    /// `lo, lo + step, ..., hi` in every coordinate.
    Range { lo: Num, hi: Num, step: Num },
    Points(Vec<Coord>),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridsSpec {
    pub x: GridSpec,
    pub y: GridSpec,
    pub ystar: Vec<Coord>,
    pub vstar: Vec<Coord>,
    pub alpha: Vec<Num>,
    /// `x*` and `u*` components of the full dual grid, combined as a product.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub xstar: Vec<Coord>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub ustar: Vec<Coord>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
/// `<a, x> < b` when `strict`, `<a, x> <= b` otherwise.
pub struct HalfspaceSpec {
    pub a: Vec<Num>,
    pub b: Num,
    pub strict: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SetSpec {
    pub dim: usize,
    pub constraints: Vec<HalfspaceSpec>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum EndpointSpec {
    Unbounded,
    Closed(Num),
    Open(Num),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum PieceValueSpec {
    Affine { slope: Num, intercept: Num },
    PosInf,
    NegInf,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PieceSpec {
    pub lo: EndpointSpec,
    pub hi: EndpointSpec,
    pub value: PieceValueSpec,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case", deny_unknown_fields)]
pub enum ExprSpec {
    Affine { coeffs: Vec<Num>, constant: Num },
    Abs { arg: Box<ExprSpec> },
    Indicator { set: SetSpec },
    Sum { terms: Vec<ExprSpec> },
    Max { terms: Vec<ExprSpec> },
    Min { terms: Vec<ExprSpec> },
    Compose { rows: Vec<Vec<Num>>, offset: Vec<Num>, inner: Box<ExprSpec> },
    Pw1 { pieces: Vec<PieceSpec> },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum PhiSpec {
    Expr(ExprSpec),
    /// `table[i][j] = Phi(x_i, y_j)`; entries may be `"inf"` or `"-inf"`.
    Table(Vec<Vec<Num>>),
}

fn default_tolerance() -> f64 {
    TAU
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    pub name: String,
    #[serde(default)]
    pub kind: Kind,
    #[serde(default)]
    pub backend: BackendName,
    #[serde(default = "default_tolerance")]
    pub tolerance: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x_dim: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub y_dim: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phi: Option<PhiSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grids: Option<GridsSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub set: Option<SetSpec>,
}

impl ProblemFile {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        let f: ProblemFile = serde_json::from_str(text).map_err(|e| CliError::Schema(e.to_string()))?;
        f.check_shape()?;
        Ok(f)
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("plain data");
        s.push('\n');
        s
    }

    fn check_shape(&self) -> Result<(), CliError> {
        if !(self.tolerance.is_finite() && self.tolerance >= 0.0) {
            return Err(CliError::Invalid("tolerance must be a nonnegative number".into()));
        }
        match self.kind {
            Kind::Perturbation => {
                for (field, present) in [
                    ("x_dim", self.x_dim.is_some()),
                    ("y_dim", self.y_dim.is_some()),
                    ("phi", self.phi.is_some()),
                    ("grids", self.grids.is_some()),
                ] {
                    if !present {
                        return Err(CliError::Schema(format!("missing field `{field}` for kind `perturbation`")));
                    }
                }
                if self.set.is_some() {
                    return Err(CliError::Schema("field `set` belongs to kind `eset`".into()));
                }
            }
            Kind::Eset => {
                if self.set.is_none() {
                    return Err(CliError::Schema("missing field `set` for kind `eset`".into()));
                }
                if self.phi.is_some() || self.grids.is_some() {
                    return Err(CliError::Schema("fields `phi` and `grids` belong to kind `perturbation`".into()));
                }
            }
        }
        Ok(())
    }

    /// The perturbation problem in backend `S`.
    pub fn instance<S: Scalar>(&self) -> Result<Built<S>, CliError> {
        if self.kind != Kind::Perturbation {
            return Err(CliError::Invalid(format!("`{}` is a set, not a perturbation problem", self.name)));
        }
        let (xd, yd) = (self.x_dim.unwrap_or(0), self.y_dim.unwrap_or(0));
        let grids = self.grids.as_ref().expect("checked");
        let x_grid = grid::<S>(&grids.x, xd, "grids.x")?;
        let y_grid = grid::<S>(&grids.y, yd, "grids.y")?;
        if !y_grid.has_origin() {
            return Err(CliError::Invalid("grids.y must contain the origin".into()));
        }
        let ystar = coords::<S>(&grids.ystar, yd, "grids.ystar")?;
        let vstar = coords::<S>(&grids.vstar, yd, "grids.vstar")?;
        let alpha = grids.alpha.iter().map(|a| scalar::<S>(a, "grids.alpha")).collect::<Result<Vec<_>, _>>()?;
        let dual_y = DualGrid::tensor(yd, &ystar, &vstar, &alpha).map_err(|e| CliError::invalid("dual grid", e))?;
        let xstar = coords::<S>(&grids.xstar, xd, "grids.xstar")?;
        let ustar = coords::<S>(&grids.ustar, xd, "grids.ustar")?;
        let mut xu_pairs = Vec::new();
        for a in &xstar {
            for b in &ustar {
                xu_pairs.push((a.clone(), b.clone()));
            }
        }
        let phi = match self.phi.as_ref().expect("checked") {
            PhiSpec::Expr(e) => PerturbFn::from_expr(xd, yd, expr::<S>(e)?).map_err(|e| CliError::invalid("phi", e))?,
            PhiSpec::Table(rows) => {
                if rows.len() != x_grid.len() {
                    return Err(CliError::Invalid(format!("phi.table has {} rows, grids.x has {} points", rows.len(), x_grid.len())));
                }
                let mut values = Vec::new();
                for (i, row) in rows.iter().enumerate() {
                    if row.len() != y_grid.len() {
                        return Err(CliError::Invalid(format!("phi.table row {i} has {} entries, grids.y has {} points", row.len(), y_grid.len())));
                    }
                    for v in row {
                        values.push(ext::<S>(v, "phi.table")?);
                    }
                }
                PerturbFn::Table(PhiTable::new(x_grid.clone(), y_grid.clone(), values).map_err(|e| CliError::invalid("phi", e))?)
            }
        };
        Ok(Built { name: self.name.clone(), phi, x_grid, y_grid, dual_y, xu_pairs })
    }

    /// The set of an `eset` problem; exact rationals only.
    pub fn eset(&self) -> Result<EPolyhedron<Rational>, CliError> {
        match (&self.kind, &self.set) {
            (Kind::Eset, Some(s)) => set::<Rational>(s),
            _ => Err(CliError::Invalid(format!("`{}` is not a set problem", self.name))),
        }
    }

    /// A problem file describing a shipped instance.
    pub fn of_instance<S: Scalar>(inst: &Instance<S>) -> Result<Self, CliError> {
        let expr = match &inst.phi {
            PerturbFn::Expr { expr, .. } => PhiSpec::Expr(expr_spec(expr)),
            PerturbFn::Table(t) => PhiSpec::Table(
                (0..t.x_grid().len()).map(|i| t.row(i).iter().map(Num::of_ext).collect()).collect(),
            ),
        };
        let uniq = |pts: Vec<Vec<S>>| {
            let mut out: Vec<Vec<S>> = Vec::new();
            for p in pts {
                if !out.contains(&p) {
                    out.push(p);
                }
            }
            out
        };
        let dy = inst.dual_y.points();
        let ystar = uniq(dy.iter().map(|w| w.xstar.clone()).collect());
        let vstar = uniq(dy.iter().map(|w| w.ustar.clone()).collect());
        let alpha = uniq(dy.iter().map(|w| vec![w.alpha.clone()]).collect());
        let xstar = uniq(inst.xu_pairs.iter().map(|p| p.0.clone()).collect());
        let ustar = uniq(inst.xu_pairs.iter().map(|p| p.1.clone()).collect());
        if ystar.len() * vstar.len() * alpha.len() != dy.len() || xstar.len() * ustar.len() != inst.xu_pairs.len() {
            return Err(CliError::Invalid("only tensor-product dual grids have a file form".into()));
        }
        Ok(ProblemFile {
            name: inst.name.to_string(),
            kind: Kind::Perturbation,
            backend: if S::BACKEND == econvex_core::scalar::Backend::Rational { BackendName::Rational } else { BackendName::Float },
            tolerance: TAU,
            x_dim: Some(inst.x_grid.dim()),
            y_dim: Some(inst.y_grid.dim()),
            phi: Some(expr),
            grids: Some(GridsSpec {
                x: GridSpec::Points(inst.x_grid.points().iter().map(|p| Coord::of(p)).collect()),
                y: GridSpec::Points(inst.y_grid.points().iter().map(|p| Coord::of(p)).collect()),
                ystar: ystar.iter().map(|p| Coord::of(p)).collect(),
                vstar: vstar.iter().map(|p| Coord::of(p)).collect(),
                alpha: alpha.iter().map(|a| Num::of(&a[0])).collect(),
                xstar: xstar.iter().map(|p| Coord::of(p)).collect(),
                ustar: ustar.iter().map(|p| Coord::of(p)).collect(),
            }),
            set: None,
        })
    }

    pub fn of_set(name: &str, s: &EPolyhedron<Rational>) -> Self {
        ProblemFile {
            name: name.to_string(),
            kind: Kind::Eset,
            backend: BackendName::Rational,
            tolerance: TAU,
            x_dim: None,
            y_dim: None,
            phi: None,
            grids: None,
            set: Some(set_spec(s)),
        }
    }
}

/// A validated perturbation problem before tabulation.
#[derive(Clone, Debug)]
pub struct Built<S: Scalar> {
    pub name: String,
    pub phi: PerturbFn<S>,
    pub x_grid: Grid<S>,
    pub y_grid: Grid<S>,
    pub dual_y: DualGrid<S>,
    pub xu_pairs: Vec<(Vec<S>, Vec<S>)>,
}

impl<S: Scalar> Built<S> {
    /// Tabulates the problem; this is where `alpha > 0` is enforced.
    pub fn problem(&self) -> Result<PerturbationProblem<S>, CliError> {
        PerturbationProblem::new(self.phi.clone(), self.x_grid.clone(), self.y_grid.clone(), self.dual_y.clone(), self.xu_pairs.clone())
            .map_err(|e| CliError::invalid("problem", e))
    }

    /// `x -> Phi(x, 0)` on the x-grid.
    pub fn primal_fn(&self) -> Result<SampledFn<S>, CliError> {
        let zero = vec![S::zero(); self.y_grid.dim()];
        let values = self.x_grid.points().iter().map(|x| self.phi.eval(x, &zero)).collect::<Result<Vec<_>, _>>();
        Sampled::new(self.x_grid.clone(), values.map_err(|e| CliError::invalid("phi", e))?).map_err(|e| CliError::invalid("phi", e))
    }

    /// The `(x*, u*, alpha)` grid used for conjugating `Phi(., 0)`: the
    /// `x*`, `u*` product with the alpha list, alphas unrestricted.
    pub fn w_grid(&self) -> Result<DualGrid<S>, CliError> {
        let mut alphas: Vec<S> = Vec::new();
        for w in self.dual_y.points() {
            if !alphas.contains(&w.alpha) {
                alphas.push(w.alpha.clone());
            }
        }
        let mut pairs = self.xu_pairs.clone();
        let zero = vec![S::zero(); self.x_grid.dim()];
        if !pairs.iter().any(|(a, b)| *a == zero && *b == zero) {
            pairs.insert(0, (zero.clone(), zero));
        }
        let mut pts = Vec::new();
        for (a, b) in &pairs {
            for al in &alphas {
                pts.push(econvex_core::conjugation::DualPoint::new(a.clone(), b.clone(), al.clone()));
            }
        }
        DualGrid::new(self.x_grid.dim(), pts).map_err(|e| CliError::invalid("dual grid", e))
    }
}

pub fn scalar<S: Scalar>(n: &Num, field: &str) -> Result<S, CliError> {
    S::parse_literal(&n.text()).map_err(|e| CliError::Schema(format!("{field}: {e}")))
}

fn ext<S: Scalar>(n: &Num, field: &str) -> Result<ExtReal<S>, CliError> {
    ExtReal::parse(&n.text()).map_err(|e| CliError::Schema(format!("{field}: {e}")))
}

fn vector<S: Scalar>(v: &[Num], field: &str) -> Result<Vec<S>, CliError> {
    v.iter().map(|n| scalar(n, field)).collect()
}

fn coords<S: Scalar>(cs: &[Coord], dim: usize, field: &str) -> Result<Vec<Vec<S>>, CliError> {
    cs.iter()
        .map(|c| {
            let v = vector::<S>(&c.parts(), field)?;
            if v.len() != dim {
                return Err(CliError::Invalid(format!("{field}: expected dimension {dim}, found {}", v.len())));
            }
            Ok(v)
        })
        .collect()
}

fn grid<S: Scalar>(g: &GridSpec, dim: usize, field: &str) -> Result<Grid<S>, CliError> {
    let points = match g {
        GridSpec::Points(cs) => coords::<S>(cs, dim, field)?,
        GridSpec::Range { lo, hi, step } => {
            let (lo, hi, step) = (scalar::<S>(lo, field)?, scalar::<S>(hi, field)?, scalar::<S>(step, field)?);
            if step <= S::zero() || hi < lo {
                return Err(CliError::Invalid(format!("{field}: range needs lo <= hi and step > 0")));
            }
            let mut axis = Vec::new();
            let mut t = lo;
            while t <= hi {
                axis.push(t.clone());
                t = t + step.clone();
                if axis.len() > 1_000_000 {
                    return Err(CliError::Invalid(format!("{field}: range is too long")));
                }
            }
            let mut pts: Vec<Vec<S>> = vec![Vec::new()];
            for _ in 0..dim {
                pts = pts.into_iter().flat_map(|p| axis.iter().map(move |a| [p.clone(), vec![a.clone()]].concat())).collect();
            }
            pts
        }
    };
    Grid::new(dim, points).map_err(|e| CliError::invalid(field, e))
}

fn set<S: Scalar>(s: &SetSpec) -> Result<EPolyhedron<S>, CliError> {
    let cs = s
        .constraints
        .iter()
        .map(|h| Ok(Halfspace::new(vector::<S>(&h.a, "set.a")?, scalar::<S>(&h.b, "set.b")?, h.strict)))
        .collect::<Result<Vec<_>, CliError>>()?;
    EPolyhedron::new(s.dim, cs).map_err(|e| CliError::Invalid(format!("set: {e}")))
}

fn endpoint<S: Scalar>(e: &EndpointSpec) -> Result<Endpoint<S>, CliError> {
    Ok(match e {
        EndpointSpec::Unbounded => Endpoint::Unbounded,
        EndpointSpec::Closed(n) => Endpoint::Closed(scalar(n, "pw1.endpoint")?),
        EndpointSpec::Open(n) => Endpoint::Open(scalar(n, "pw1.endpoint")?),
    })
}

fn expr<S: Scalar>(e: &ExprSpec) -> Result<Expr<S>, CliError> {
    let list = |ts: &[ExprSpec]| ts.iter().map(expr::<S>).collect::<Result<Vec<_>, _>>();
    Ok(match e {
        ExprSpec::Affine { coeffs, constant } => Expr::Affine { coeffs: vector(coeffs, "affine.coeffs")?, constant: scalar(constant, "affine.constant")? },
        ExprSpec::Abs { arg } => Expr::Abs(Box::new(expr(arg)?)),
        ExprSpec::Indicator { set: s } => Expr::Indicator(set(s)?),
        ExprSpec::Sum { terms } => Expr::Sum(list(terms)?),
        ExprSpec::Max { terms } => Expr::Max(list(terms)?),
        ExprSpec::Min { terms } => Expr::Min(list(terms)?),
        ExprSpec::Compose { rows, offset, inner } => Expr::Compose {
            rows: rows.iter().map(|r| vector(r, "compose.rows")).collect::<Result<_, _>>()?,
            offset: vector(offset, "compose.offset")?,
            inner: Box::new(expr(inner)?),
        },
        ExprSpec::Pw1 { pieces } => {
            let ps = pieces
                .iter()
                .map(|p| {
                    let value = match &p.value {
                        PieceValueSpec::Affine { slope, intercept } => PieceValue::Affine { slope: scalar(slope, "pw1.slope")?, intercept: scalar(intercept, "pw1.intercept")? },
                        PieceValueSpec::PosInf => PieceValue::PosInf,
                        PieceValueSpec::NegInf => PieceValue::NegInf,
                    };
                    Ok(Piece { lo: endpoint(&p.lo)?, hi: endpoint(&p.hi)?, value })
                })
                .collect::<Result<Vec<_>, CliError>>()?;
            Expr::Pw1(PwAffine1::new(ps).map_err(|e| CliError::invalid("pw1", e))?)
        }
    })
}

fn set_spec<S: Scalar>(p: &EPolyhedron<S>) -> SetSpec {
    SetSpec {
        dim: p.dim(),
        constraints: p
            .constraints()
            .iter()
            .map(|h| HalfspaceSpec { a: h.normal().iter().map(Num::of).collect(), b: Num::of(h.offset()), strict: h.is_strict() })
            .collect(),
    }
}

fn endpoint_spec<S: Scalar>(e: &Endpoint<S>) -> EndpointSpec {
    match e {
        Endpoint::Unbounded => EndpointSpec::Unbounded,
        Endpoint::Closed(v) => EndpointSpec::Closed(Num::of(v)),
        Endpoint::Open(v) => EndpointSpec::Open(Num::of(v)),
    }
}

fn expr_spec<S: Scalar>(e: &Expr<S>) -> ExprSpec {
    let list = |ts: &[Expr<S>]| ts.iter().map(expr_spec).collect();
    match e {
        Expr::Affine { coeffs, constant } => ExprSpec::Affine { coeffs: coeffs.iter().map(Num::of).collect(), constant: Num::of(constant) },
        Expr::Abs(a) => ExprSpec::Abs { arg: Box::new(expr_spec(a)) },
        Expr::Indicator(p) => ExprSpec::Indicator { set: set_spec(p) },
        Expr::Sum(ts) => ExprSpec::Sum { terms: list(ts) },
        Expr::Max(ts) => ExprSpec::Max { terms: list(ts) },
        Expr::Min(ts) => ExprSpec::Min { terms: list(ts) },
        Expr::Compose { rows, offset, inner } => ExprSpec::Compose {
            rows: rows.iter().map(|r| r.iter().map(Num::of).collect()).collect(),
            offset: offset.iter().map(Num::of).collect(),
            inner: Box::new(expr_spec(inner)),
        },
        Expr::Pw1(f) => ExprSpec::Pw1 {
            pieces: f
                .pieces()
                .iter()
                .map(|p| PieceSpec {
                    lo: endpoint_spec(&p.lo),
                    hi: endpoint_spec(&p.hi),
                    value: match &p.value {
                        PieceValue::Affine { slope, intercept } => PieceValueSpec::Affine { slope: Num::of(slope), intercept: Num::of(intercept) },
                        PieceValue::PosInf => PieceValueSpec::PosInf,
                        PieceValue::NegInf => PieceValueSpec::NegInf,
                    },
                })
                .collect(),
        },
    }
}
