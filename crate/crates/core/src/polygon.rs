//! Rational polygons: continuous piecewise-linear functions on `[0, 1]`
//! with finitely many rational breakpoints.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::exact::Rational;
use crate::exec::Exec;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PolygonError {
    #[error("a polygon needs at least two breakpoints, got {0}")]
    TooFewPoints(usize),
    #[error("breakpoint x-coordinates must strictly increase (index {0})")]
    NotIncreasing(usize),
    #[error("breakpoints must start at x = 0 and end at x = 1")]
    BadDomain,
    #[error("x = {0} is outside [0, 1]")]
    OutOfDomain(Rational),
}

/// Continuous piecewise-linear function on `[0, 1]`.
///
/// Breakpoints are kept normalized: x strictly increasing from 0 to 1 and no
/// interior breakpoint lies on the line through its neighbours. Two polygons
/// are equal as functions iff their breakpoint lists are equal.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "PolygonRepr", into = "PolygonRepr")]
pub struct Polygon {
    points: Vec<(Rational, Rational)>,
}

#[derive(Serialize, Deserialize)]
struct PolygonRepr {
    breakpoints: Vec<(Rational, Rational)>,
}

impl TryFrom<PolygonRepr> for Polygon {
    type Error = PolygonError;
    fn try_from(r: PolygonRepr) -> Result<Self, Self::Error> {
        Polygon::new(r.breakpoints)
    }
}

impl From<Polygon> for PolygonRepr {
    fn from(p: Polygon) -> Self {
        PolygonRepr { breakpoints: p.points }
    }
}

fn collinear(a: &(Rational, Rational), b: &(Rational, Rational), c: &(Rational, Rational)) -> bool {
    (&b.1 - &a.1) * (&c.0 - &b.0) == (&c.1 - &b.1) * (&b.0 - &a.0)
}

/// `y` on the segment from `a` to `b` at `x`.
fn lerp(a: &(Rational, Rational), b: &(Rational, Rational), x: &Rational) -> Rational {
    if x == &a.0 {
        return a.1.clone();
    }
    if x == &b.0 {
        return b.1.clone();
    }
    &a.1 + (&b.1 - &a.1) * (x - &a.0) / (&b.0 - &a.0)
}

/// Merges two sorted coordinate lists without duplicates.
fn merge_grids(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let next = match (a.get(i), b.get(j)) {
            (Some(x), Some(y)) if x == y => {
                i += 1;
                j += 1;
                x
            }
            (Some(x), Some(y)) if x < y => {
                i += 1;
                x
            }
            (Some(x), None) => {
                i += 1;
                x
            }
            (_, Some(y)) => {
                j += 1;
                y
            }
            (None, None) => unreachable!(),
        };
        out.push(next.clone());
    }
    out
}

/// `[0, 1/2^depth, 2/2^depth, ..., 1]`.
pub fn dyadic_grid(depth: u32) -> Vec<Rational> {
    let n = 1i64 << depth;
    (0..=n).map(|i| Rational::new(i, n)).collect()
}

impl Polygon {
    pub fn new(points: Vec<(Rational, Rational)>) -> Result<Self, PolygonError> {
        if points.len() < 2 {
            return Err(PolygonError::TooFewPoints(points.len()));
        }
        if let Some(i) = points.windows(2).position(|w| w[1].0 <= w[0].0) {
            return Err(PolygonError::NotIncreasing(i + 1));
        }
        if !points[0].0.is_zero() || points[points.len() - 1].0 != Rational::one() {
            return Err(PolygonError::BadDomain);
        }
        Ok(Self::normalized(points))
    }

    /// Builds from points already known to be valid, dropping collinear
    /// interior breakpoints.
    fn normalized(points: Vec<(Rational, Rational)>) -> Self {
        let mut out: Vec<(Rational, Rational)> = Vec::with_capacity(points.len());
        for p in points {
            while out.len() >= 2 && collinear(&out[out.len() - 2], &out[out.len() - 1], &p) {
                out.pop();
            }
            out.push(p);
        }
        Polygon { points: out }
    }

    pub fn constant(c: Rational) -> Self {
        Polygon { points: vec![(Rational::zero(), c.clone()), (Rational::one(), c)] }
    }

    pub fn zero() -> Self {
        Self::constant(Rational::zero())
    }

    /// `x -> x`.
    pub fn identity() -> Self {
        Polygon { points: vec![(Rational::zero(), Rational::zero()), (Rational::one(), Rational::one())] }
    }

    /// Linear function `x -> a + (b - a) x`.
    pub fn linear(a: Rational, b: Rational) -> Self {
        Self::normalized(vec![(Rational::zero(), a), (Rational::one(), b)])
    }

    /// Tent of the given height peaking at `peak`, zero outside `(left, right)`.
    /// `left` may equal `peak` only when both are 0, likewise `right`/`peak` at 1.
    pub fn tent(left: Rational, peak: Rational, right: Rational, height: Rational) -> Self {
        assert!(left <= peak && peak <= right, "tent needs left <= peak <= right");
        assert!(!left.is_negative() && right <= Rational::one(), "tent must lie in [0, 1]");
        let mut pts = Vec::new();
        if !left.is_zero() {
            pts.push((Rational::zero(), Rational::zero()));
        }
        if left != peak {
            pts.push((left, Rational::zero()));
        }
        pts.push((peak.clone(), height));
        if right != peak {
            pts.push((right.clone(), Rational::zero()));
        }
        if right != Rational::one() {
            pts.push((Rational::one(), Rational::zero()));
        }
        Polygon::new(pts).expect("tent breakpoints are valid")
    }

    /// The polygon interpolating sorted points whose x range is exactly `[0, 1]`.
    pub fn interpolate(points: Vec<(Rational, Rational)>) -> Result<Self, PolygonError> {
        Self::new(points)
    }

    pub fn breakpoints(&self) -> &[(Rational, Rational)] {
        &self.points
    }

    pub fn xs(&self) -> Vec<Rational> {
        self.points.iter().map(|p| p.0.clone()).collect()
    }

    pub fn eval(&self, x: &Rational) -> Result<Rational, PolygonError> {
        if x.is_negative() || x > &Rational::one() {
            return Err(PolygonError::OutOfDomain(x.clone()));
        }
        Ok(self.eval_in_domain(x))
    }

    /// Evaluation for `x` already known to lie in `[0, 1]`.
    pub fn eval_in_domain(&self, x: &Rational) -> Rational {
        // first breakpoint with x-coordinate >= x
        let i = self.points.partition_point(|p| &p.0 < x);
        if i == 0 {
            return self.points[0].1.clone();
        }
        let i = i.min(self.points.len() - 1);
        lerp(&self.points[i - 1], &self.points[i], x)
    }

    /// Values at sorted in-domain points, in one merged pass.
    pub fn values_on(&self, xs: &[Rational]) -> Vec<Rational> {
        let mut seg = 1;
        xs.iter()
            .map(|x| {
                while seg < self.points.len() - 1 && &self.points[seg].0 < x {
                    seg += 1;
                }
                lerp(&self.points[seg - 1], &self.points[seg], x)
            })
            .collect()
    }

    /// Largest `|dy/dx|` over the linear pieces.
    pub fn max_slope(&self) -> Rational {
        self.points
            .windows(2)
            .map(|w| ((&w[1].1 - &w[0].1) / (&w[1].0 - &w[0].0)).abs())
            .max()
            .unwrap_or_else(Rational::zero)
    }

    /// `m = s + max(0, ceil(log2 slope)) + 1`, so that `|x - y| <= 2^{-m}`
    /// gives `|pg(x) - pg(y)| <= 2^{-(s+1)} < 2^{-s}`.
    pub fn modulus_index(&self, s: usize) -> usize {
        let slope = self.max_slope();
        let lift = if slope > Rational::one() { slope.ceil_log2() as usize } else { 0 };
        s + lift + 1
    }

    /// Applies a pointwise operation that preserves linearity (sums, scalings)
    /// on the union of both breakpoint grids.
    fn zip_linear(&self, other: &Polygon, op: impl Fn(&Rational, &Rational) -> Rational) -> Polygon {
        let grid = merge_grids(&self.xs(), &other.xs());
        let a = self.values_on(&grid);
        let b = other.values_on(&grid);
        Self::normalized(grid.into_iter().zip(a.iter().zip(&b)).map(|(x, (u, v))| (x, op(u, v))).collect())
    }

    pub fn add(&self, other: &Polygon) -> Polygon {
        self.zip_linear(other, |u, v| u + v)
    }

    pub fn sub(&self, other: &Polygon) -> Polygon {
        self.zip_linear(other, |u, v| u - v)
    }

    pub fn scale(&self, c: &Rational) -> Polygon {
        Self::normalized(self.points.iter().map(|(x, y)| (x.clone(), y * c)).collect())
    }

    pub fn add_constant(&self, c: &Rational) -> Polygon {
        Polygon { points: self.points.iter().map(|(x, y)| (x.clone(), y + c)).collect() }
    }

    pub fn neg(&self) -> Polygon {
        Polygon { points: self.points.iter().map(|(x, y)| (x.clone(), -y)).collect() }
    }

    /// `max_x |a(x) - b(x)|`, attained on the union grid since `a - b` is
    /// piecewise linear.
    pub fn sup_distance(&self, other: &Polygon) -> Rational {
        let grid = merge_grids(&self.xs(), &other.xs());
        self.values_on(&grid)
            .iter()
            .zip(other.values_on(&grid))
            .map(|(u, v)| (u - v).abs())
            .max()
            .expect("grid is non-empty")
    }

    /// Smallest value of `self - other` over `[0, 1]`.
    pub fn min_gap_to(&self, other: &Polygon) -> Rational {
        self.sub(other).min_value().1
    }

    /// True when `self(x) <= other(x)` for every `x`.
    pub fn is_below(&self, other: &Polygon) -> bool {
        !other.min_gap_to(self).is_negative()
    }

    fn lattice(&self, other: &Polygon, take_max: bool) -> Polygon {
        let grid = merge_grids(&self.xs(), &other.xs());
        let a = self.values_on(&grid);
        let b = other.values_on(&grid);
        let pick = |u: &Rational, v: &Rational| {
            if (u >= v) == take_max {
                u.clone()
            } else {
                v.clone()
            }
        };
        let mut out = Vec::with_capacity(grid.len() * 2);
        for i in 0..grid.len() {
            if i > 0 {
                let d0 = &a[i - 1] - &b[i - 1];
                let d1 = &a[i] - &b[i];
                // strict sign change: the two segments cross inside the cell
                if (d0.is_positive() && d1.is_negative()) || (d0.is_negative() && d1.is_positive()) {
                    let t = &d0 / &(&d0 - &d1);
                    let x = &grid[i - 1] + &t * (&grid[i] - &grid[i - 1]);
                    let y = &a[i - 1] + &t * (&a[i] - &a[i - 1]);
                    out.push((x, y));
                }
            }
            out.push((grid[i].clone(), pick(&a[i], &b[i])));
        }
        Self::normalized(out)
    }

    pub fn pointwise_max(&self, other: &Polygon) -> Polygon {
        self.lattice(other, true)
    }

    pub fn pointwise_min(&self, other: &Polygon) -> Polygon {
        self.lattice(other, false)
    }

    /// `(argmax, max)` with the leftmost breakpoint winning ties.
    pub fn max_value(&self) -> (Rational, Rational) {
        let mut best = &self.points[0];
        for p in &self.points[1..] {
            if p.1 > best.1 {
                best = p;
            }
        }
        best.clone()
    }

    /// `(argmin, min)` with the leftmost breakpoint winning ties.
    pub fn min_value(&self) -> (Rational, Rational) {
        let mut best = &self.points[0];
        for p in &self.points[1..] {
            if p.1 < best.1 {
                best = p;
            }
        }
        best.clone()
    }

    /// `x,y` rows on the dyadic grid of the given depth, with a header row.
    pub fn to_csv(&self, depth: u32) -> String {
        let grid = dyadic_grid(depth);
        let mut out = String::from("x,y\n");
        for (x, y) in grid.iter().zip(self.values_on(&grid)) {
            let _ = writeln!(out, "{x},{y}");
        }
        out
    }
}

/// Largest `|a(x) - b(x)|` over the given in-domain sample points.
pub fn sampled_max_abs_diff(a: &Polygon, b: &Polygon, xs: &[Rational], exec: Exec) -> Rational {
    let d = a.sub(b);
    exec.map(xs, |x| d.eval_in_domain(x).abs()).into_iter().max().unwrap_or_else(Rational::zero)
}
