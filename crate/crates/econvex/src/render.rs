//! CSV tables and plain-text reports.
//!
//! A report is a list of sections. Each section holds `key = value` lines
//! followed by an optional aligned table, so it reads well and still parses
//! with a line splitter.

use std::fmt::Write as _;

use econvex_core::conjugation::DualPoint;
use econvex_core::{ExtReal, Scalar};

/// A header row plus string cells.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Table {
    pub headers: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(headers: Vec<String>) -> Self {
        Table { headers, rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.headers.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.headers).expect("in-memory write");
        for r in &self.rows {
            w.write_record(r).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 cells")
    }

    fn render(&self, out: &mut String) {
        let mut widths: Vec<usize> = self.headers.iter().map(String::len).collect();
        for r in &self.rows {
            for (w, c) in widths.iter_mut().zip(r) {
                *w = (*w).max(c.len());
            }
        }
        let line = |out: &mut String, cells: &[String]| {
            let mut s = String::new();
            for (k, (c, w)) in cells.iter().zip(&widths).enumerate() {
                if k > 0 {
                    s.push_str("  ");
                }
                let _ = write!(s, "{c:>w$}");
            }
            out.push_str(s.trim_end());
            out.push('\n');
        };
        line(out, &self.headers);
        let rule: Vec<String> = widths.iter().map(|w| "-".repeat(*w)).collect();
        line(out, &rule);
        for r in &self.rows {
            line(out, r);
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct Section {
    pub title: String,
    pub fields: Vec<(String, String)>,
    pub table: Option<Table>,
}

impl Section {
    pub fn new(title: &str) -> Self {
        Section { title: title.to_string(), ..Default::default() }
    }

    pub fn field(&mut self, key: &str, value: impl ToString) -> &mut Self {
        self.fields.push((key.to_string(), value.to_string()));
        self
    }
}

#[derive(Clone, Debug, Default)]
pub struct Report {
    pub sections: Vec<Section>,
}

impl Report {
    pub fn section(&mut self, title: &str) -> &mut Section {
        self.sections.push(Section::new(title));
        self.sections.last_mut().expect("just pushed")
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for (k, s) in self.sections.iter().enumerate() {
            if k > 0 {
                out.push('\n');
            }
            let _ = writeln!(out, "[{}]", s.title);
            for (key, v) in &s.fields {
                let _ = writeln!(out, "{key} = {v}");
            }
            if let Some(t) = &s.table {
                if !s.fields.is_empty() {
                    out.push('\n');
                }
                t.render(&mut out);
            }
        }
        out
    }
}

/// Column names for a point of dimension `dim`: `x` or `x1, x2, ...`.
pub fn coord_headers(prefix: &str, dim: usize) -> Vec<String> {
    if dim == 1 {
        vec![prefix.to_string()]
    } else {
        (1..=dim).map(|k| format!("{prefix}{k}")).collect()
    }
}

pub fn cells<S: Scalar>(v: &[S]) -> Vec<String> {
    v.iter().map(|s| s.to_string()).collect()
}

/// `x*..., u*..., alpha`.
pub fn dual_headers(xstar: &str, ustar: &str, dim: usize) -> Vec<String> {
    let mut h = coord_headers(xstar, dim);
    h.extend(coord_headers(ustar, dim));
    h.push("alpha".into());
    h
}

pub fn dual_cells<S: Scalar>(w: &DualPoint<S>) -> Vec<String> {
    let mut c = cells(&w.xstar);
    c.extend(cells(&w.ustar));
    c.push(w.alpha.to_string());
    c
}

/// `(a, b, ...)` for short vectors.
pub fn tuple<S: Scalar>(v: &[S]) -> String {
    format!("({})", cells(v).join(", "))
}

pub fn dual_tuple<S: Scalar>(w: &DualPoint<S>) -> String {
    format!("({}, {}, {})", tuple(&w.xstar), tuple(&w.ustar), w.alpha)
}

pub fn ext<S: Scalar>(v: &ExtReal<S>) -> String {
    v.to_string()
}

pub fn yes(b: bool) -> &'static str {
    if b {
        "true"
    } else {
        "false"
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_quotes_only_when_needed() {
        let mut t = Table::new(vec!["x".into(), "value".into()]);
        t.push(vec!["-1/2".into(), "inf".into()]);
        t.push(vec!["a,b".into(), "0".into()]);
        assert_eq!(t.to_csv(), "x,value\n-1/2,inf\n\"a,b\",0\n");
    }

    #[test]
    fn report_layout() {
        let mut r = Report::default();
        let s = r.section("values");
        s.field("v_gp", "-5").field("gap", 0);
        let mut t = Table::new(vec!["x".into(), "value".into()]);
        t.push(vec!["-10".into(), "3".into()]);
        s.table = Some(t);
        r.section("empty");
        assert_eq!(r.render(), "[values]\nv_gp = -5\ngap = 0\n\n  x  value\n---  -----\n-10      3\n\n[empty]\n");
    }

    #[test]
    fn headers_by_dimension() {
        assert_eq!(coord_headers("x", 1), vec!["x"]);
        assert_eq!(coord_headers("y", 2), vec!["y1", "y2"]);
        assert_eq!(dual_headers("xstar", "ustar", 1), vec!["xstar", "ustar", "alpha"]);
    }
}
