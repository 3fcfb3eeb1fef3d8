//! The shipped problem files.

use crate::error::CliError;
use crate::problem::ProblemFile;

pub const FILES: [(&str, &str); 6] = [
    ("example52", include_str!("../catalog/example52.json")),
    ("fenchel_abs", include_str!("../catalog/fenchel_abs.json")),
    ("affine_recovery", include_str!("../catalog/affine_recovery.json")),
    ("two_point_nonconvex", include_str!("../catalog/two_point_nonconvex.json")),
    ("open_epigraph_eset", include_str!("../catalog/open_epigraph_eset.json")),
    ("truncated_dual", include_str!("../catalog/truncated_dual.json")),
];

/// One-line descriptions, in the order of [`FILES`].
pub const SUMMARIES: [&str; 6] = [
    "Phi(x, y) = x + indicator(x + y <= 0); the non-convex Lagrangian slice",
    "Phi(x, y) = |x| + indicator(x + y <= 0); zero duality gap",
    "Phi(x, y) = x + y; the dual recovers an affine primal",
    "f = indicator of {-1, 1}; a non-convex primal",
    "the set {(x, a) : a > x}; not functionally representable",
    "fenchel_abs with a dual grid too coarse for (C5)",
];

pub fn text(name: &str) -> Option<&'static str> {
    FILES.iter().find(|(n, _)| *n == name).map(|(_, t)| *t)
}

pub fn load(name: &str) -> Result<ProblemFile, CliError> {
    let t = text(name).ok_or_else(|| {
        let names: Vec<&str> = FILES.iter().map(|(n, _)| *n).collect();
        CliError::Usage(format!("unknown catalog entry `{name}`; available: {}", names.join(", ")))
    })?;
    ProblemFile::from_json(t)
}
