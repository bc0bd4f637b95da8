//! Bisection on scalar witnesses, interval extraction, dense grid scans and
//! CSV output.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::tolerances::{BISECTION, INTERVAL_GRID_POINTS, THRESHOLD_GUARD};

/// Root of `f(x) = target` on `[a, b]` by bisection until the bracket is
/// no wider than `tol`. The bracket may be given in either order.
pub fn find_boundary(f: impl Fn(f64) -> f64, a: f64, b: f64, target: f64, tol: f64) -> Result<f64> {
    let (mut lo, mut hi) = if a <= b { (a, b) } else { (b, a) };
    let mut flo = f(lo) - target;
    let fhi = f(hi) - target;
    if flo == 0.0 {
        return Ok(lo);
    }
    if fhi == 0.0 {
        return Ok(hi);
    }
    if flo.signum() == fhi.signum() || flo.is_nan() || fhi.is_nan() {
        return Err(Error::NoSignChange {
            a: lo,
            b: hi,
            fa: flo,
            fb: fhi,
        });
    }
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        let fm = f(mid) - target;
        if fm == 0.0 {
            return Ok(mid);
        }
        if fm.signum() == flo.signum() {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Direction of the comparison `f(x) ⋈ target` defining membership.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sense {
    AtLeast,
    AtMost,
}

impl Sense {
    pub fn holds(self, value: f64, target: f64) -> bool {
        match self {
            Sense::AtLeast => value >= target - THRESHOLD_GUARD,
            Sense::AtMost => value <= target + THRESHOLD_GUARD,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
    pub predicate: String,
    pub witness_lo: f64,
    pub witness_hi: f64,
}

/// Maximal sub-intervals of `[lo, hi]` where `f ⋈ target`, located on the
/// default 2001-point grid and refined by bisection.
pub fn intervals(f: impl Fn(f64) -> f64 + Sync, lo: f64, hi: f64, target: f64, sense: Sense, predicate: &str) -> Vec<Interval> {
    intervals_on_grid(f, lo, hi, target, sense, predicate, INTERVAL_GRID_POINTS)
}

pub fn intervals_on_grid(
    f: impl Fn(f64) -> f64 + Sync,
    lo: f64,
    hi: f64,
    target: f64,
    sense: Sense,
    predicate: &str,
    points: usize,
) -> Vec<Interval> {
    let axis = Axis::linspace("x", lo, hi, points.max(2));
    let xs = axis.values();
    let fx: Vec<f64> = xs.par_iter().map(|&x| f(x)).collect();
    let inside: Vec<bool> = fx.iter().map(|&v| sense.holds(v, target)).collect();
    let refine = |i: usize| {
        // boundary between grid points i and i+1
        find_boundary(&f, xs[i], xs[i + 1], target, BISECTION).unwrap_or(0.5 * (xs[i] + xs[i + 1]))
    };
    let mut out = Vec::new();
    let mut i = 0;
    while i < xs.len() {
        if !inside[i] {
            i += 1;
            continue;
        }
        let start = i;
        while i + 1 < xs.len() && inside[i + 1] {
            i += 1;
        }
        let end = i;
        let a = if start == 0 { xs[0] } else { refine(start - 1) };
        let b = if end == xs.len() - 1 { xs[end] } else { refine(end) };
        out.push(Interval {
            lo: a,
            hi: b,
            predicate: predicate.to_string(),
            witness_lo: f(a),
            witness_hi: f(b),
        });
        i += 1;
    }
    out
}

/// A named, ordered set of sample points.
#[derive(Clone, Debug, PartialEq)]
pub struct Axis {
    name: String,
    values: Vec<f64>,
}

impl Axis {
    pub fn new(name: &str, values: Vec<f64>) -> Self {
        assert!(!values.is_empty(), "axis {name} has no points");
        Self {
            name: name.to_string(),
            values,
        }
    }

    /// `n` evenly spaced points including both ends.
    pub fn linspace(name: &str, lo: f64, hi: f64, n: usize) -> Self {
        let values = match n {
            0 => panic!("axis {name} has no points"),
            1 => vec![lo],
            _ => (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect(),
        };
        Self::new(name, values)
    }

    /// Centres of `n` equal cells of `(lo, hi)`; never touches the ends.
    pub fn midpoints(name: &str, lo: f64, hi: f64, n: usize) -> Self {
        Self::new(name, (0..n).map(|i| lo + (hi - lo) * (i as f64 + 0.5) / n as f64).collect())
    }

    pub fn single(name: &str, value: f64) -> Self {
        Self::new(name, vec![value])
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Values of a field over the Cartesian product of its axes, row-major with
/// the first axis outermost.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepGrid<T = f64> {
    axes: Vec<Axis>,
    values: Vec<T>,
}

impl<T> SweepGrid<T> {
    pub fn new(axes: Vec<Axis>, values: Vec<T>) -> Result<Self> {
        let expected: usize = axes.iter().map(Axis::len).product();
        if expected != values.len() {
            return Err(Error::DimensionMismatch(format!(
                "grid of {expected} points given {} values",
                values.len()
            )));
        }
        Ok(Self { axes, values })
    }

    pub fn axes(&self) -> &[Axis] {
        &self.axes
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn flat_index(&self, idx: &[usize]) -> usize {
        assert_eq!(idx.len(), self.axes.len());
        idx.iter().zip(&self.axes).fold(0, |acc, (&i, ax)| {
            assert!(i < ax.len());
            acc * ax.len() + i
        })
    }

    pub fn get(&self, idx: &[usize]) -> &T {
        &self.values[self.flat_index(idx)]
    }

    /// Coordinates of the point stored at flat position `k`.
    pub fn coordinates(&self, mut k: usize) -> Vec<f64> {
        let mut out = vec![0.0; self.axes.len()];
        for (slot, ax) in out.iter_mut().zip(&self.axes).rev() {
            *slot = ax.values[k % ax.len()];
            k /= ax.len();
        }
        out
    }

    pub fn map<U>(self, f: impl Fn(T) -> U) -> SweepGrid<U> {
        SweepGrid {
            axes: self.axes,
            values: self.values.into_iter().map(f).collect(),
        }
    }
}

impl<T> SweepGrid<Result<T>> {
    /// Collapse a grid of fallible evaluations, returning the first error.
    pub fn try_map<U>(self, f: impl Fn(T) -> U) -> Result<SweepGrid<U>> {
        let values = self.values.into_iter().map(|r| r.map(&f)).collect::<Result<Vec<U>>>()?;
        Ok(SweepGrid { axes: self.axes, values })
    }
}

impl SweepGrid<f64> {
    /// One row per point: axis coordinates then the value.
    pub fn to_table(&self, value_name: &str) -> Table {
        let mut header: Vec<String> = self.axes.iter().map(|a| a.name.clone()).collect();
        header.push(value_name.to_string());
        let rows = self
            .values
            .iter()
            .enumerate()
            .map(|(k, &v)| {
                let mut row: Vec<Field> = self.coordinates(k).into_iter().map(Field::Num).collect();
                row.push(Field::Num(v));
                row
            })
            .collect();
        Table { header, rows }
    }
}

pub fn scan_2d<T: Send>(f: impl Fn(f64, f64) -> T + Sync, axis1: Axis, axis2: Axis) -> SweepGrid<T> {
    let (n1, n2) = (axis1.len(), axis2.len());
    let values = (0..n1 * n2)
        .into_par_iter()
        .map(|k| f(axis1.values[k / n2], axis2.values[k % n2]))
        .collect();
    SweepGrid {
        axes: vec![axis1, axis2],
        values,
    }
}

pub fn scan_3d<T: Send>(f: impl Fn(f64, f64, f64) -> T + Sync, axis1: Axis, axis2: Axis, axis3: Axis) -> SweepGrid<T> {
    let (n1, n2, n3) = (axis1.len(), axis2.len(), axis3.len());
    let values = (0..n1 * n2 * n3)
        .into_par_iter()
        .map(|k| f(axis1.values[k / (n2 * n3)], axis2.values[(k / n3) % n2], axis3.values[k % n3]))
        .collect();
    SweepGrid {
        axes: vec![axis1, axis2, axis3],
        values,
    }
}

/// A CSV cell.
#[derive(Clone, Debug, PartialEq)]
pub enum Field {
    Num(f64),
    Int(i64),
    Bool(bool),
    Text(String),
}

impl Field {
    pub fn render(&self) -> String {
        match self {
            Field::Num(v) => format_sig(*v),
            Field::Int(v) => v.to_string(),
            Field::Bool(v) => v.to_string(),
            Field::Text(s) => quote(s),
        }
    }
}

impl From<f64> for Field {
    fn from(v: f64) -> Self {
        Field::Num(v)
    }
}

impl From<bool> for Field {
    fn from(v: bool) -> Self {
        Field::Bool(v)
    }
}

impl From<usize> for Field {
    fn from(v: usize) -> Self {
        Field::Int(v as i64)
    }
}

impl From<&str> for Field {
    fn from(v: &str) -> Self {
        Field::Text(v.to_string())
    }
}

impl From<String> for Field {
    fn from(v: String) -> Self {
        Field::Text(v)
    }
}

fn quote(s: &str) -> String {
    if s.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// 9 significant digits; plain decimals for exponents in `-4..9`, scientific
/// notation outside that range.
pub fn format_sig(v: f64) -> String {
    if !v.is_finite() {
        return if v.is_nan() { "NaN".into() } else if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if v == 0.0 {
        return "0".into();
    }
    // the exponent after rounding to 9 significant digits
    let sci = format!("{v:.8e}");
    let exp: i32 = sci.rsplit_once('e').and_then(|(_, e)| e.parse().ok()).unwrap_or(0);
    if !(-4..9).contains(&exp) {
        return sci;
    }
    let decimals = (8 - exp).max(0) as usize;
    format!("{v:.decimals$}")
}

/// Header plus rows, rendered as comma-separated UTF-8 with `\n` endings.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<Field>>,
}

impl Table {
    pub fn new<S: Into<String>>(header: impl IntoIterator<Item = S>) -> Self {
        Self {
            header: header.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Field>) {
        assert_eq!(row.len(), self.header.len(), "row width does not match header");
        self.rows.push(row);
    }

    pub fn to_csv_string(&self) -> String {
        let mut out = String::new();
        let header: Vec<String> = self.header.iter().map(|h| quote(h)).collect();
        writeln!(out, "{}", header.join(",")).unwrap();
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(Field::render).collect();
            writeln!(out, "{}", cells.join(",")).unwrap();
        }
        out
    }
}

impl From<&[Interval]> for Table {
    fn from(list: &[Interval]) -> Self {
        let mut t = Table::new(["predicate", "lo", "hi", "witness_lo", "witness_hi"]);
        for iv in list {
            t.push(vec![
                iv.predicate.as_str().into(),
                iv.lo.into(),
                iv.hi.into(),
                iv.witness_lo.into(),
                iv.witness_hi.into(),
            ]);
        }
        t
    }
}

pub fn emit_csv(table: &Table, path: impl AsRef<Path>) -> Result<()> {
    fs::write(path, table.to_csv_string())?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bisection_basics() {
        assert!((find_boundary(|x| x, 0.0, 1.0, 0.5, 1e-7).unwrap() - 0.5).abs() < 1e-7);
        let r = find_boundary(|x| x * x, 0.0, 2.0, 2.0, 1e-10).unwrap();
        assert!((r - 2f64.sqrt()).abs() < 1e-9);
        assert!(matches!(
            find_boundary(|x| x, 0.6, 1.0, 0.5, 1e-7),
            Err(Error::NoSignChange { .. })
        ));
    }

    #[test]
    fn bisection_ignores_orientation() {
        let f = |x: f64| (3.0 * x).cos();
        let a = find_boundary(f, 0.1, 0.9, 0.0, 1e-9).unwrap();
        let b = find_boundary(f, 0.9, 0.1, 0.0, 1e-9).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn interval_extraction() {
        let f = |x: f64| (x - 0.3) * (x - 0.7);
        let ivs = intervals(f, 0.0, 1.0, 0.0, Sense::AtMost, "dip");
        assert_eq!(ivs.len(), 1);
        assert!((ivs[0].lo - 0.3).abs() < 1e-7 && (ivs[0].hi - 0.7).abs() < 1e-7);
        let outside = intervals(f, 0.0, 1.0, 0.0, Sense::AtLeast, "hump");
        assert_eq!(outside.len(), 2);
        assert_eq!(outside[0].lo, 0.0);
        assert_eq!(outside[1].hi, 1.0);
        assert!(intervals(|_| -1.0, 0.0, 1.0, 0.0, Sense::AtLeast, "never").is_empty());
    }

    #[test]
    fn endpoints_stable_under_refinement() {
        let f = |x: f64| (5.0 * x).sin();
        let coarse = intervals_on_grid(f, 0.0, 2.0, 0.2, Sense::AtLeast, "s", 2001);
        let fine = intervals_on_grid(f, 0.0, 2.0, 0.2, Sense::AtLeast, "s", 8001);
        assert_eq!(coarse.len(), fine.len());
        for (a, b) in coarse.iter().zip(&fine) {
            assert!((a.lo - b.lo).abs() < 1e-7 && (a.hi - b.hi).abs() < 1e-7);
        }
    }

    #[test]
    fn grid_layout() {
        let g = scan_2d(|x, y| 10.0 * x + y, Axis::linspace("x", 0.0, 1.0, 3), Axis::linspace("y", 0.0, 2.0, 2));
        assert_eq!(g.values(), &[0.0, 2.0, 5.0, 7.0, 10.0, 12.0]);
        assert_eq!(*g.get(&[1, 1]), 7.0);
        assert_eq!(g.coordinates(3), vec![0.5, 2.0]);
        let single = scan_2d(|x, y| x + y, Axis::single("a", 1.0), Axis::single("b", 2.0));
        assert_eq!(single.values(), &[3.0]);
        let g3 = scan_3d(
            |x, y, z| x * 100.0 + y * 10.0 + z,
            Axis::new("a", vec![1.0, 2.0]),
            Axis::new("b", vec![3.0, 4.0, 5.0]),
            Axis::new("c", vec![6.0, 7.0]),
        );
        for k in 0..g3.values().len() {
            let c = g3.coordinates(k);
            assert_eq!(g3.values()[k], c[0] * 100.0 + c[1] * 10.0 + c[2]);
        }
        assert!(SweepGrid::new(vec![Axis::single("a", 0.0)], vec![1.0, 2.0]).is_err());
    }

    #[test]
    fn midpoints_avoid_ends() {
        let ax = Axis::midpoints("t", 0.0, 1.0, 4);
        assert_eq!(ax.values(), &[0.125, 0.375, 0.625, 0.875]);
    }

    #[test]
    fn significant_digits() {
        assert_eq!(format_sig(0.0654827123456), "0.0654827123");
        assert_eq!(format_sig(1.0), "1.00000000");
        assert_eq!(format_sig(-123.456), "-123.456000");
        assert_eq!(format_sig(0.99999999999), "1.00000000");
        assert_eq!(format_sig(1234567890.0), "1.23456789e9");
        assert_eq!(format_sig(-3.2034265e-16), "-3.20342650e-16");
        assert_eq!(format_sig(0.0), "0");
        assert_eq!(format_sig(f64::NAN), "NaN");
    }

    #[test]
    fn csv_rendering() {
        let g = scan_2d(|x, y| x * y, Axis::linspace("x", 0.0, 1.0, 2), Axis::linspace("y", 0.0, 1.0, 2));
        let text = g.to_table("xy").to_csv_string();
        assert_eq!(text.lines().count(), 5);
        assert!(text.ends_with('\n'));
        assert_eq!(text.lines().next().unwrap(), "x,y,xy");
        let mut t = Table::new(["name"]);
        t.push(vec!["a,b".into()]);
        assert_eq!(t.to_csv_string(), "name\n\"a,b\"\n");
    }
}
