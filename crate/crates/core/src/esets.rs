//! Evenly convex sets given as finite intersections of open and closed halfspaces.
//!
//! Every such intersection is evenly convex, so an [`EPolyhedron`] is always a
//! legitimate instance. Membership works in either backend; the geometric
//! decision procedures (emptiness, separation, lower envelopes) run over exact
//! rationals only and are restricted to dimension at most 2.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::extreal::ExtReal;
use crate::scalar::{dot, Rational, Scalar};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Hypothesis {
    /// The set must be nonempty.
    Nonempty,
    /// `(0, 1)` must lie in the recession cone.
    UpwardRecession,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EsetError {
    DimensionMismatch { expected: usize, found: usize },
    UnsupportedDimension(usize),
    Precondition(Hypothesis),
    /// `separate` was asked to separate a point that lies in the set.
    PointInSet,
}

impl fmt::Display for EsetError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EsetError::DimensionMismatch { expected, found } => {
                write!(f, "dimension mismatch: expected {expected}, found {found}")
            }
            EsetError::UnsupportedDimension(d) => {
                write!(f, "exact geometry is not supported in dimension {d}")
            }
            EsetError::Precondition(Hypothesis::Nonempty) => f.write_str("the set is empty"),
            EsetError::Precondition(Hypothesis::UpwardRecession) => {
                f.write_str("(0, 1) is not a recession direction of the set")
            }
            EsetError::PointInSet => f.write_str("the point belongs to the set"),
        }
    }
}

/// What a constraint with a zero normal evaluates to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ConstraintKind {
    Proper,
    AlwaysTrue,
    AlwaysFalse,
}

/// `{x : <x, normal> < offset}` when strict, `<=` otherwise.
#[derive(Clone, Debug, PartialEq)]
pub struct Halfspace<S> {
    normal: Vec<S>,
    offset: S,
    strict: bool,
    kind: ConstraintKind,
}

impl<S: Scalar> Halfspace<S> {
    pub fn new(normal: Vec<S>, offset: S, strict: bool) -> Self {
        let kind = if normal.iter().all(|a| a.is_zero()) {
            let holds = if strict { S::zero() < offset } else { S::zero() <= offset };
            if holds {
                ConstraintKind::AlwaysTrue
            } else {
                ConstraintKind::AlwaysFalse
            }
        } else {
            ConstraintKind::Proper
        };
        Halfspace { normal, offset, strict, kind }
    }

    pub fn open(normal: Vec<S>, offset: S) -> Self {
        Self::new(normal, offset, true)
    }

    pub fn closed(normal: Vec<S>, offset: S) -> Self {
        Self::new(normal, offset, false)
    }

    pub fn normal(&self) -> &[S] {
        &self.normal
    }

    pub fn offset(&self) -> &S {
        &self.offset
    }

    pub fn is_strict(&self) -> bool {
        self.strict
    }

    pub fn kind(&self) -> ConstraintKind {
        self.kind
    }

    pub fn dim(&self) -> usize {
        self.normal.len()
    }

    pub fn satisfied_by(&self, x: &[S]) -> bool {
        let lhs = dot(x, &self.normal);
        if self.strict {
            lhs < self.offset
        } else {
            lhs <= self.offset
        }
    }

    pub fn map_scalar<T: Scalar>(&self, f: impl Fn(&S) -> T) -> Halfspace<T> {
        Halfspace::new(self.normal.iter().map(&f).collect(), f(&self.offset), self.strict)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct EPolyhedron<S> {
    dim: usize,
    constraints: Vec<Halfspace<S>>,
}

impl<S: Scalar> EPolyhedron<S> {
    pub fn new(dim: usize, constraints: Vec<Halfspace<S>>) -> Result<Self, EsetError> {
        for h in &constraints {
            if h.dim() != dim {
                return Err(EsetError::DimensionMismatch { expected: dim, found: h.dim() });
            }
        }
        Ok(EPolyhedron { dim, constraints })
    }

    /// The whole space (empty family of constraints).
    pub fn whole(dim: usize) -> Self {
        EPolyhedron { dim, constraints: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn constraints(&self) -> &[Halfspace<S>] {
        &self.constraints
    }

    pub fn contains(&self, x: &[S]) -> Result<bool, EsetError> {
        self.check_dim(x.len())?;
        Ok(self.constraints.iter().all(|h| h.satisfied_by(x)))
    }

    /// `<y, a> <= 0` for every constraint normal `a`. For a nonempty set this
    /// is exactly membership of `y` in its recession cone.
    pub fn in_recession_cone(&self, y: &[S]) -> Result<bool, EsetError> {
        self.check_dim(y.len())?;
        Ok(self.constraints.iter().all(|h| dot(y, &h.normal) <= S::zero()))
    }

    pub fn map_scalar<T: Scalar>(&self, f: impl Fn(&S) -> T) -> EPolyhedron<T> {
        EPolyhedron {
            dim: self.dim,
            constraints: self.constraints.iter().map(|h| h.map_scalar(&f)).collect(),
        }
    }

    fn check_dim(&self, found: usize) -> Result<(), EsetError> {
        if found != self.dim {
            Err(EsetError::DimensionMismatch { expected: self.dim, found })
        } else {
            Ok(())
        }
    }
}

// One inequality `<a, x> < b` (or `<=`) in the elimination workspace.
#[derive(Clone, Debug)]
struct Row {
    a: Vec<Rational>,
    b: Rational,
    strict: bool,
}

impl Row {
    fn from_halfspace(h: &Halfspace<Rational>) -> Self {
        Row { a: h.normal.clone(), b: h.offset, strict: h.strict }
    }
}

// Fourier-Motzkin step: eliminates the last coordinate. Strictness of a
// combined row is the disjunction of the strictness of its parents, which
// keeps the projection exact for mixed strict/non-strict systems.
fn eliminate_last(rows: &[Row]) -> Vec<Row> {
    let k = rows[0].a.len() - 1;
    let zero = Rational::zero();
    let mut out = Vec::new();
    let (mut upper, mut lower) = (Vec::new(), Vec::new());
    for r in rows {
        let c = r.a[k];
        if c == zero {
            out.push(Row { a: r.a[..k].to_vec(), b: r.b, strict: r.strict });
        } else if c > zero {
            upper.push(r);
        } else {
            lower.push(r);
        }
    }
    for p in &upper {
        let cp = p.a[k];
        for n in &lower {
            let cn = -n.a[k];
            let a = (0..k).map(|i| p.a[i] / cp + n.a[i] / cn).collect();
            out.push(Row { a, b: p.b / cp + n.b / cn, strict: p.strict || n.strict });
        }
    }
    out
}

/// One-dimensional feasible set `lo (<|<=) x (<|<=) hi`.
#[derive(Clone, Debug, PartialEq)]
pub struct Interval {
    /// Lower endpoint and whether it is excluded.
    pub lo: Option<(Rational, bool)>,
    /// Upper endpoint and whether it is excluded.
    pub hi: Option<(Rational, bool)>,
    pub empty: bool,
}

impl Interval {
    fn from_rows(rows: &[Row]) -> Self {
        let zero = Rational::zero();
        let mut iv = Interval { lo: None, hi: None, empty: false };
        for r in rows {
            let a = r.a[0];
            if a == zero {
                let ok = if r.strict { zero < r.b } else { zero <= r.b };
                if !ok {
                    iv.empty = true;
                }
                continue;
            }
            let t = r.b / a;
            if a > zero {
                iv.hi = Some(match iv.hi.take() {
                    None => (t, r.strict),
                    Some((h, _)) if t < h => (t, r.strict),
                    Some((h, s)) if t == h => (h, s || r.strict),
                    Some(cur) => cur,
                });
            } else {
                iv.lo = Some(match iv.lo.take() {
                    None => (t, r.strict),
                    Some((l, _)) if t > l => (t, r.strict),
                    Some((l, s)) if t == l => (l, s || r.strict),
                    Some(cur) => cur,
                });
            }
        }
        if let (Some((l, ls)), Some((h, hs))) = (&iv.lo, &iv.hi) {
            if l > h || (l == h && (*ls || *hs)) {
                iv.empty = true;
            }
        }
        iv
    }

    /// A canonical member: the midpoint of a bounded interval, the closed
    /// endpoint of a ray (or one unit inside an open one), and 0 for the line.
    pub fn pick(&self) -> Option<Rational> {
        if self.empty {
            return None;
        }
        let one = Rational::one();
        Some(match (&self.lo, &self.hi) {
            (Some((l, _)), Some((h, _))) if l == h => *l,
            (Some((l, _)), Some((h, _))) => (*l + *h) / Rational::from_integer(2),
            (Some((l, open)), None) => {
                if *open {
                    *l + one
                } else {
                    *l
                }
            }
            (None, Some((h, open))) => {
                if *open {
                    *h - one
                } else {
                    *h
                }
            }
            (None, None) => Rational::zero(),
        })
    }
}

impl EPolyhedron<Rational> {
    fn rows(&self) -> Vec<Row> {
        self.constraints.iter().map(Row::from_halfspace).collect()
    }

    fn require_small(&self) -> Result<(), EsetError> {
        if self.dim == 0 || self.dim > 2 {
            Err(EsetError::UnsupportedDimension(self.dim))
        } else {
            Ok(())
        }
    }

    /// Exact emptiness test by Fourier-Motzkin elimination (dim <= 2).
    pub fn is_empty(&self) -> Result<bool, EsetError> {
        Ok(self.find_point()?.is_none())
    }

    /// Some exact member of the set, or `None` when it is empty (dim <= 2).
    pub fn find_point(&self) -> Result<Option<Vec<Rational>>, EsetError> {
        self.require_small()?;
        if self.constraints.iter().any(|h| h.kind == ConstraintKind::AlwaysFalse) {
            return Ok(None);
        }
        let rows = self.rows();
        if rows.is_empty() {
            return Ok(Some(vec![Rational::zero(); self.dim]));
        }
        if self.dim == 1 {
            return Ok(Interval::from_rows(&rows).pick().map(|t| vec![t]));
        }
        let projected = eliminate_last(&rows);
        let x1 = if projected.is_empty() {
            Rational::zero()
        } else {
            match Interval::from_rows(&projected).pick() {
                Some(t) => t,
                None => return Ok(None),
            }
        };
        let fiber: Vec<Row> = rows
            .iter()
            .map(|r| Row { a: vec![r.a[1]], b: r.b - r.a[0] * x1, strict: r.strict })
            .collect();
        let x2 = Interval::from_rows(&fiber)
            .pick()
            .expect("projection is exact, so the fiber over a projected point is nonempty");
        Ok(Some(vec![x1, x2]))
    }

    /// Finds `a*` with `<x - x0, a*> < 0` for every `x` in the set.
    ///
    /// Candidates are the normals of constraints violated at `x0`, followed by
    /// pairwise sums of them. Each candidate is certified exactly by checking
    /// that the set misses the closed halfspace `{<x - x0, a*> >= 0}`. `None`
    /// means the finite candidate family was inconclusive.
    pub fn separate(&self, x0: &[Rational]) -> Result<Option<Vec<Rational>>, EsetError> {
        self.check_dim(x0.len())?;
        self.require_small()?;
        if self.contains(x0)? {
            return Err(EsetError::PointInSet);
        }
        if self.is_empty()? {
            return Err(EsetError::Precondition(Hypothesis::Nonempty));
        }
        let violated: Vec<&Halfspace<Rational>> = self
            .constraints
            .iter()
            .filter(|h| h.kind == ConstraintKind::Proper && !h.satisfied_by(x0))
            .collect();
        let mut candidates: Vec<Vec<Rational>> = violated.iter().map(|h| h.normal.clone()).collect();
        for i in 0..violated.len() {
            for j in i + 1..violated.len() {
                let s = violated[i].normal.iter().zip(&violated[j].normal).map(|(a, b)| *a + *b).collect();
                candidates.push(s);
            }
        }
        for c in candidates {
            if c.iter().all(|v| v.is_zero()) {
                continue;
            }
            if self.certifies(x0, &c)? {
                return Ok(Some(c));
            }
        }
        Ok(None)
    }

    /// Exact check of a separation certificate.
    pub fn certifies(&self, x0: &[Rational], a: &[Rational]) -> Result<bool, EsetError> {
        self.check_dim(a.len())?;
        let mut cs = self.constraints.clone();
        // <x, a> >= <x0, a>  <=>  <x, -a> <= -<x0, a>
        cs.push(Halfspace::closed(a.iter().map(|v| -*v).collect(), -dot(x0, a)));
        EPolyhedron::new(self.dim, cs)?.is_empty()
    }

    fn check_envelope_preconditions(&self) -> Result<(), EsetError> {
        if self.dim != 2 {
            return Err(EsetError::UnsupportedDimension(self.dim));
        }
        if self.is_empty()? {
            return Err(EsetError::Precondition(Hypothesis::Nonempty));
        }
        if !self.in_recession_cone(&[Rational::zero(), Rational::one()])? {
            return Err(EsetError::Precondition(Hypothesis::UpwardRecession));
        }
        Ok(())
    }

    /// `h(x) = inf { a : (x, a) in C }` for a set `C` in `R x R`.
    pub fn lower_envelope(&self) -> Result<EnvelopeFn, EsetError> {
        self.check_envelope_preconditions()?;
        let mut domain = Vec::new();
        let mut lower = Vec::new();
        for h in &self.constraints {
            let (a1, a2) = (h.normal[0], h.normal[1]);
            if a2.is_zero() {
                domain.push(Row { a: vec![a1], b: h.offset, strict: h.strict });
            } else {
                // a1 x + a2 t < b with a2 < 0  <=>  t > (b - a1 x) / a2
                lower.push(LowerBound {
                    slope: -a1 / a2,
                    intercept: h.offset / a2,
                    strict: h.strict,
                });
            }
        }
        Ok(EnvelopeFn { set: self.clone(), domain, lower })
    }

    /// Decides `grh h ⊆ C` exactly. On failure the witness `x` has
    /// `(x, h(x))` outside `C`.
    pub fn is_functionally_representable(&self) -> Result<Representability, EsetError> {
        let env = self.lower_envelope()?;
        for (i, li) in env.lower.iter().enumerate() {
            if !li.strict {
                continue;
            }
            // Region where the strict bound i is the active maximum.
            let mut rows = env.domain.clone();
            for (j, lj) in env.lower.iter().enumerate() {
                if i != j {
                    // li(x) >= lj(x)  <=>  (lj.slope - li.slope) x <= li.intercept - lj.intercept
                    rows.push(Row {
                        a: vec![lj.slope - li.slope],
                        b: li.intercept - lj.intercept,
                        strict: false,
                    });
                }
            }
            if let Some(x) = Interval::from_rows(&rows).pick() {
                return Ok(Representability { representable: false, witness: Some(x) });
            }
        }
        Ok(Representability { representable: true, witness: None })
    }
}

#[derive(Clone, Debug)]
struct LowerBound {
    slope: Rational,
    intercept: Rational,
    strict: bool,
}

/// Lower envelope of a set in `R x R` with `(0, 1)` in its recession cone.
#[derive(Clone, Debug)]
pub struct EnvelopeFn {
    set: EPolyhedron<Rational>,
    domain: Vec<Row>,
    lower: Vec<LowerBound>,
}

/// The fiber `{a : (x, a) in C}` of an upward-closed set.
#[derive(Clone, Debug, PartialEq)]
pub enum Fiber {
    Empty,
    Line,
    /// `[lo, inf)` or `(lo, inf)`.
    Ray { lo: Rational, open: bool },
}

impl EnvelopeFn {
    pub fn set(&self) -> &EPolyhedron<Rational> {
        &self.set
    }

    pub fn fiber(&self, x: &Rational) -> Fiber {
        for r in &self.domain {
            let lhs = r.a[0] * *x;
            let ok = if r.strict { lhs < r.b } else { lhs <= r.b };
            if !ok {
                return Fiber::Empty;
            }
        }
        let mut best: Option<(Rational, bool)> = None;
        for l in &self.lower {
            let v = l.slope * *x + l.intercept;
            best = match best {
                None => Some((v, l.strict)),
                Some((b, _)) if v > b => Some((v, l.strict)),
                Some((b, s)) if v == b => Some((b, s || l.strict)),
                keep => keep,
            };
        }
        match best {
            None => Fiber::Line,
            Some((lo, open)) => Fiber::Ray { lo, open },
        }
    }

    pub fn eval(&self, x: &Rational) -> ExtReal<Rational> {
        match self.fiber(x) {
            Fiber::Empty => ExtReal::PosInf,
            Fiber::Line => ExtReal::NegInf,
            Fiber::Ray { lo, .. } => ExtReal::Finite(lo),
        }
    }

    /// `(x, a)` lies in the epigraph of the envelope.
    pub fn in_epigraph(&self, x: &Rational, a: &Rational) -> bool {
        match self.eval(x) {
            ExtReal::PosInf => false,
            ExtReal::NegInf => true,
            ExtReal::Finite(h) => h <= *a,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Representability {
    pub representable: bool,
    pub witness: Option<Rational>,
}
