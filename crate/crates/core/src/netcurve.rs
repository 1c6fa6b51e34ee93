//! The non-real part of the net `b⁻¹(ℝ)`: the zero set of
//! `S(x, y) = Im b(x + iy) / y`, extracted by marching squares.

use std::collections::HashMap;
use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::classifier::{critical_points, singular_points};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::params::SymbolParams;
use crate::rect::{grid_node, Rect};

/// The eight monomials of `S` as `(power of x, power of y, coefficient)`.
pub fn s_monomials<T: Field>(alpha: &T, beta: &T, gamma: &T) -> [(u32, u32, T); 8] {
    let k = |v: i64| T::from_int(v);
    [
        (0, 0, T::one()),
        (2, 0, alpha.clone()),
        (3, 0, k(-2) * beta.clone()),
        (4, 0, k(3) * gamma.clone()),
        (0, 2, alpha.clone()),
        (1, 2, k(-2) * beta.clone()),
        (2, 2, k(2) * gamma.clone()),
        (0, 4, -gamma.clone()),
    ]
}

/// `S(x,y) = 1 + αx² - 2βx³ + 3γx⁴ + αy² - 2βxy² + 2γx²y² - γy⁴`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BivariateS {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
}

impl BivariateS {
    pub fn new(params: &SymbolParams) -> Self {
        BivariateS {
            alpha: params.alpha,
            beta: params.beta,
            gamma: params.gamma,
        }
    }

    fn terms(&self, x: f64, y: f64) -> [f64; 8] {
        let (a, b, c) = (self.alpha, self.beta, self.gamma);
        let (x2, y2) = (x * x, y * y);
        [
            1.0,
            a * x2,
            -2.0 * b * x2 * x,
            3.0 * c * x2 * x2,
            a * y2,
            -2.0 * b * x * y2,
            2.0 * c * x2 * y2,
            -c * y2 * y2,
        ]
    }

    pub fn eval(&self, x: f64, y: f64) -> f64 {
        self.terms(x, y).iter().sum()
    }

    /// `Σ |term|`, the scale of rounding error in [`eval`](Self::eval).
    pub fn magnitude(&self, x: f64, y: f64) -> f64 {
        self.terms(x, y).iter().map(|t| t.abs()).sum()
    }

    pub fn grad(&self, x: f64, y: f64) -> (f64, f64) {
        let (a, b, c) = (self.alpha, self.beta, self.gamma);
        let (x2, y2) = (x * x, y * y);
        let sx = 2.0 * a * x - 6.0 * b * x2 + 12.0 * c * x2 * x - 2.0 * b * y2 + 4.0 * c * x * y2;
        let sy = 2.0 * a * y - 4.0 * b * x * y + 4.0 * c * x2 * y - 4.0 * c * y2 * y;
        (sx, sy)
    }

    /// `max(|S|, |S_x|, |S_y|)` scaled by the term magnitude at the point.
    pub fn singular_residual(&self, x: f64, y: f64) -> f64 {
        let (sx, sy) = self.grad(x, y);
        let scale = self.magnitude(x, y).max(1.0);
        self.eval(x, y).abs().max(sx.abs()).max(sy.abs()) / scale
    }
}

pub fn s_eval(params: &SymbolParams, x: f64, y: f64) -> f64 {
    BivariateS::new(params).eval(x, y)
}

/// `Im(-1/z + αz - βz² + γz³)`, which equals `y·S(x,y) / |z|²`.
pub fn im_b(params: &SymbolParams, z: Complex64) -> Result<f64> {
    if z == Complex64::new(0.0, 0.0) {
        return Err(Error::ZeroArgument);
    }
    let (x, y) = (z.re, z.im);
    let r2 = x * x + y * y;
    // Im(-1/z) = y/|z|², Im(z²) = 2xy, Im(z³) = 3x²y - y³
    Ok(y / r2 + params.alpha * y - params.beta * 2.0 * x * y + params.gamma * (3.0 * x * x * y - y * y * y))
}

/// What to do with grid nodes where `S` vanishes to rounding accuracy.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum ZeroNodePolicy {
    /// Treat as slightly negative. Positive regions meeting at a saddle stay apart,
    /// so the region around the origin (where `S = 1`) is bounded by a closed loop.
    #[default]
    Negative,
    /// Treat as slightly positive.
    Positive,
    /// Fail with [`Error::DegenerateGrid`].
    Reject,
}

#[derive(Clone, Debug, Default)]
pub struct ExtractOptions {
    pub zero_policy: ZeroNodePolicy,
    /// Extra grid lines, typically through singular points.
    pub extra_x: Vec<f64>,
    pub extra_y: Vec<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CurveComponent {
    pub points: Vec<[f64; 2]>,
    pub closed: bool,
    pub touches_boundary: bool,
    /// Winding number about the origin; closed components only.
    pub winding: Option<i32>,
    /// Net change of the polar angle along the polyline.
    pub angle_sweep: f64,
    /// Abscissae where the component meets the real axis.
    pub real_crossings: Vec<f64>,
    /// Places where the polyline comes back within one cell of itself.
    pub self_contacts: usize,
}

impl CurveComponent {
    pub fn is_simple(&self) -> bool {
        self.self_contacts == 0
    }

    pub fn encloses_origin(&self) -> bool {
        self.winding.is_some_and(|w| w != 0)
    }
}

/// Polylines of `S = 0` over a rectilinear grid.
#[derive(Clone, Debug, Serialize)]
pub struct CurveSet {
    pub rect: Rect,
    pub resolution: usize,
    /// Largest cell diagonal.
    pub cell_diameter: f64,
    pub components: Vec<CurveComponent>,
}

impl CurveSet {
    pub fn empty(rect: Rect, resolution: usize) -> Self {
        CurveSet {
            rect,
            resolution,
            cell_diameter: (rect.width().powi(2) + rect.height().powi(2)).sqrt() / resolution as f64,
            components: Vec::new(),
        }
    }

    /// Distance from a point to the nearest polyline segment.
    pub fn distance_to(&self, x: f64, y: f64) -> f64 {
        let mut best = f64::INFINITY;
        for c in &self.components {
            for w in c.points.windows(2) {
                best = best.min(segment_distance([x, y], w[0], w[1]));
            }
            if let [p] = c.points.as_slice() {
                best = best.min(((p[0] - x).powi(2) + (p[1] - y).powi(2)).sqrt());
            }
        }
        best
    }
}

fn segment_distance(p: [f64; 2], a: [f64; 2], b: [f64; 2]) -> f64 {
    let (dx, dy) = (b[0] - a[0], b[1] - a[1]);
    let len2 = dx * dx + dy * dy;
    let t = if len2 > 0.0 {
        (((p[0] - a[0]) * dx + (p[1] - a[1]) * dy) / len2).clamp(0.0, 1.0)
    } else {
        0.0
    };
    let (qx, qy) = (a[0] + t * dx, a[1] + t * dy);
    ((p[0] - qx).powi(2) + (p[1] - qy).powi(2)).sqrt()
}

/// Uniform nodes with each extra coordinate either snapped onto the nearest node or inserted.
fn axis_nodes(a: f64, b: f64, res: usize, extras: &[f64]) -> Vec<f64> {
    let mut nodes: Vec<f64> = (0..=res).map(|i| grid_node(a, b, i, res)).collect();
    let cell = (b - a) / res as f64;
    for &e in extras {
        if !(e > a && e < b) {
            continue;
        }
        let k = ((e - a) / cell).round() as usize;
        let k = k.min(res);
        if (nodes[k] - e).abs() < 0.25 * cell && k != 0 && k != res {
            nodes[k] = e;
        } else {
            nodes.push(e);
        }
    }
    nodes.sort_by(f64::total_cmp);
    nodes.dedup();
    nodes
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
enum Edge {
    /// Between nodes `(i, j)` and `(i + 1, j)`.
    H(usize, usize),
    /// Between nodes `(i, j)` and `(i, j + 1)`.
    V(usize, usize),
}

struct Grid {
    xs: Vec<f64>,
    ys: Vec<f64>,
    /// Row-major, `vals[j][i]` at `(xs[i], ys[j])`; never zero.
    vals: Vec<Vec<f64>>,
}

impl Grid {
    fn edge_point(&self, e: Edge) -> [f64; 2] {
        let (i0, j0, i1, j1) = match e {
            Edge::H(i, j) => (i, j, i + 1, j),
            Edge::V(i, j) => (i, j, i, j + 1),
        };
        // Interpolate from the node nearer the real axis, so mirror-image edges give
        // mirror-image points bit for bit.
        let (i0, j0, i1, j1) = if self.ys[j1].abs() < self.ys[j0].abs() {
            (i1, j1, i0, j0)
        } else {
            (i0, j0, i1, j1)
        };
        let (va, vb) = (self.vals[j0][i0], self.vals[j1][i1]);
        let t = va / (va - vb);
        let x = self.xs[i0] + t * (self.xs[i1] - self.xs[i0]);
        let y = self.ys[j0] + t * (self.ys[j1] - self.ys[j0]);
        // Keep crossings of grid lines exactly on them.
        match e {
            Edge::H(..) => [x, self.ys[j0]],
            Edge::V(..) => [self.xs[i0], y],
        }
    }

    fn on_boundary(&self, e: Edge) -> bool {
        let (nx, ny) = (self.xs.len() - 1, self.ys.len() - 1);
        match e {
            Edge::H(_, j) => j == 0 || j == ny,
            Edge::V(i, _) => i == 0 || i == nx,
        }
    }
}

/// Extract `S = 0` on `rect` with `resolution` cells per axis (plus any inserted lines).
pub fn extract_curve(params: &SymbolParams, rect: &Rect, resolution: usize) -> Result<CurveSet> {
    let mut opts = ExtractOptions::default();
    for p in singular_points(params)?.points {
        opts.extra_x.push(p.x);
        opts.extra_y.push(p.y);
        opts.extra_y.push(-p.y);
    }
    opts.extra_y.push(0.0);
    extract_curve_with(params, rect, resolution, &opts)
}

pub fn extract_curve_with(
    params: &SymbolParams,
    rect: &Rect,
    resolution: usize,
    opts: &ExtractOptions,
) -> Result<CurveSet> {
    if resolution < 16 {
        return Err(Error::InvalidInput("resolution must be at least 16".into()));
    }
    let s = BivariateS::new(params);
    let xs = axis_nodes(rect.x0, rect.x1, resolution, &opts.extra_x);
    let ys = axis_nodes(rect.y0, rect.y1, resolution, &opts.extra_y);
    let value = |x: f64, y: f64| {
        let v = s.eval(x, y);
        let noise = 64.0 * f64::EPSILON * s.magnitude(x, y);
        if v.abs() > noise {
            Ok(v)
        } else {
            let tiny = noise.max(f64::MIN_POSITIVE);
            match opts.zero_policy {
                ZeroNodePolicy::Negative => Ok(-tiny),
                ZeroNodePolicy::Positive => Ok(tiny),
                ZeroNodePolicy::Reject => Err(Error::DegenerateGrid { x, y }),
            }
        }
    };
    let vals: Vec<Vec<f64>> = ys
        .par_iter()
        .map(|&y| xs.iter().map(|&x| value(x, y)).collect::<Result<Vec<f64>>>())
        .collect::<Result<_>>()?;
    let field = Grid { xs, ys, vals };
    let centre_zero = if opts.zero_policy == ZeroNodePolicy::Positive { 1.0 } else { -1.0 };
    let segments = march(&field, |x, y| {
        let v = s.eval(x, y);
        if v.abs() > 64.0 * f64::EPSILON * s.magnitude(x, y) {
            v
        } else {
            centre_zero
        }
    });
    let chains = assemble(&segments);

    let cell_diameter = field
        .xs
        .windows(2)
        .map(|w| w[1] - w[0])
        .fold(0.0f64, f64::max)
        .hypot(field.ys.windows(2).map(|w| w[1] - w[0]).fold(0.0f64, f64::max));
    let components = chains
        .into_iter()
        .map(|(edges, closed)| build_component(&field, &edges, closed, cell_diameter))
        .collect();
    Ok(CurveSet {
        rect: *rect,
        resolution,
        cell_diameter,
        components,
    })
}

fn march(f: &Grid, centre_value: impl Fn(f64, f64) -> f64) -> Vec<(Edge, Edge)> {
    let (nx, ny) = (f.xs.len() - 1, f.ys.len() - 1);
    let mut segs = Vec::new();
    for j in 0..ny {
        for i in 0..nx {
            let v00 = f.vals[j][i];
            let v10 = f.vals[j][i + 1];
            let v11 = f.vals[j + 1][i + 1];
            let v01 = f.vals[j + 1][i];
            let (b, r, t, l) = (Edge::H(i, j), Edge::V(i + 1, j), Edge::H(i, j + 1), Edge::V(i, j));
            let mut crossed = Vec::with_capacity(4);
            if (v00 > 0.0) != (v10 > 0.0) {
                crossed.push(b);
            }
            if (v10 > 0.0) != (v11 > 0.0) {
                crossed.push(r);
            }
            if (v11 > 0.0) != (v01 > 0.0) {
                crossed.push(t);
            }
            if (v01 > 0.0) != (v00 > 0.0) {
                crossed.push(l);
            }
            match crossed.len() {
                2 => segs.push((crossed[0], crossed[1])),
                4 => {
                    // Saddle cell: decide by the sign of S at the cell centre. This resolves
                    // cells next to degenerate singular points, where the bilinear
                    // interpolant joins the wrong pair of corners.
                    let centre = centre_value((f.xs[i] + f.xs[i + 1]) / 2.0, (f.ys[j] + f.ys[j + 1]) / 2.0);
                    if (centre > 0.0) == (v00 > 0.0) {
                        segs.push((b, r));
                        segs.push((t, l));
                    } else {
                        segs.push((l, b));
                        segs.push((r, t));
                    }
                }
                _ => {}
            }
        }
    }
    segs
}

/// Chains of edges; `true` marks closed chains (first edge not repeated).
fn assemble(segs: &[(Edge, Edge)]) -> Vec<(Vec<Edge>, bool)> {
    let mut by_edge: HashMap<Edge, Vec<usize>> = HashMap::with_capacity(segs.len() * 2);
    for (k, (a, b)) in segs.iter().enumerate() {
        by_edge.entry(*a).or_default().push(k);
        by_edge.entry(*b).or_default().push(k);
    }
    let mut used = vec![false; segs.len()];
    let mut out = Vec::new();

    let walk = |start_seg: usize, start_edge: Edge, used: &mut Vec<bool>| -> (Vec<Edge>, bool) {
        let mut chain = vec![start_edge];
        let mut seg = start_seg;
        let mut at = start_edge;
        loop {
            used[seg] = true;
            let (a, b) = segs[seg];
            let next = if a == at { b } else { a };
            if next == start_edge {
                return (chain, true);
            }
            chain.push(next);
            at = next;
            match by_edge[&next].iter().find(|&&k| !used[k]) {
                Some(&k) => seg = k,
                None => return (chain, false),
            }
        }
    };

    // Open chains start at edges used by a single segment; visit them in a fixed order.
    let mut ends: Vec<(Edge, usize)> = by_edge
        .iter()
        .filter(|(_, v)| v.len() == 1)
        .map(|(e, v)| (*e, v[0]))
        .collect();
    ends.sort_by_key(|&(e, k)| (k, edge_order(e)));
    for (e, k) in ends {
        if !used[k] {
            out.push(walk(k, e, &mut used));
        }
    }
    for k in 0..segs.len() {
        if !used[k] {
            out.push(walk(k, segs[k].0, &mut used));
        }
    }
    out
}

fn edge_order(e: Edge) -> (u8, usize, usize) {
    match e {
        Edge::H(i, j) => (0, j, i),
        Edge::V(i, j) => (1, j, i),
    }
}

fn build_component(f: &Grid, edges: &[Edge], closed: bool, cell: f64) -> CurveComponent {
    let mut points: Vec<[f64; 2]> = edges.iter().map(|&e| f.edge_point(e)).collect();
    if closed {
        points.push(points[0]);
    }
    let touches_boundary = edges.iter().any(|&e| f.on_boundary(e));
    let mut sweep = 0.0;
    let mut near_origin = false;
    for w in points.windows(2) {
        let (a0, a1) = (w[0][1].atan2(w[0][0]), w[1][1].atan2(w[1][0]));
        let mut d = a1 - a0;
        if d > PI {
            d -= 2.0 * PI;
        } else if d < -PI {
            d += 2.0 * PI;
        }
        sweep += d;
        if segment_distance([0.0, 0.0], w[0], w[1]) < cell {
            near_origin = true;
        }
    }
    let winding = (closed && !near_origin).then(|| (sweep / (2.0 * PI)).round() as i32);
    let mut real_crossings: Vec<f64> = edges
        .iter()
        .zip(&points)
        .filter(|(e, p)| matches!(e, Edge::H(..)) && p[1] == 0.0)
        .map(|(_, p)| p[0])
        .collect();
    real_crossings.sort_by(f64::total_cmp);
    let self_contacts = count_self_contacts(&points, closed, cell);
    CurveComponent {
        points,
        closed,
        touches_boundary,
        winding,
        angle_sweep: sweep,
        real_crossings,
        self_contacts,
    }
}

/// Number of distinct places where two parts of the polyline, far apart along the
/// curve, come within `cell` of each other.
fn count_self_contacts(points: &[[f64; 2]], closed: bool, cell: f64) -> usize {
    let n = points.len();
    if n < 4 || cell <= 0.0 {
        return 0;
    }
    let mut arc = vec![0.0; n];
    for k in 1..n {
        arc[k] = arc[k - 1] + (points[k][0] - points[k - 1][0]).hypot(points[k][1] - points[k - 1][1]);
    }
    let total = arc[n - 1];
    let key = |p: &[f64; 2]| ((p[0] / cell).floor() as i64, (p[1] / cell).floor() as i64);
    let mut buckets: HashMap<(i64, i64), Vec<usize>> = HashMap::new();
    for (k, p) in points.iter().enumerate() {
        buckets.entry(key(p)).or_default().push(k);
    }
    let mut sites: Vec<[f64; 2]> = Vec::new();
    for (a, p) in points.iter().enumerate() {
        let (cx, cy) = key(p);
        for dx in -1..=1 {
            for dy in -1..=1 {
                let Some(list) = buckets.get(&(cx + dx, cy + dy)) else {
                    continue;
                };
                for &b in list {
                    if b <= a {
                        continue;
                    }
                    let mut along = arc[b] - arc[a];
                    if closed {
                        along = along.min(total - along);
                    }
                    if along <= 4.0 * cell {
                        continue;
                    }
                    let q = &points[b];
                    if (p[0] - q[0]).hypot(p[1] - q[1]) < cell {
                        let mid = [(p[0] + q[0]) / 2.0, (p[1] + q[1]) / 2.0];
                        if !sites.iter().any(|s| (s[0] - mid[0]).hypot(s[1] - mid[1]) < 4.0 * cell) {
                            sites.push(mid);
                        }
                    }
                }
            }
        }
    }
    sites.len()
}

/// Whether two polylines come within `cell` of each other. Branches of the zero set
/// crossing at a singular point come out of the grid as separate pieces that touch.
fn polylines_meet(a: &[[f64; 2]], b: &[[f64; 2]], cell: f64) -> bool {
    let key = |p: &[f64; 2]| ((p[0] / cell).floor() as i64, (p[1] / cell).floor() as i64);
    let mut buckets: HashMap<(i64, i64), Vec<usize>> = HashMap::new();
    for (k, p) in a.iter().enumerate() {
        buckets.entry(key(p)).or_default().push(k);
    }
    b.iter().any(|q| {
        let (cx, cy) = key(q);
        (-1..=1).any(|dx| {
            (-1..=1).any(|dy| {
                buckets
                    .get(&(cx + dx, cy + dy))
                    .is_some_and(|l| l.iter().any(|&k| (a[k][0] - q[0]).hypot(a[k][1] - q[1]) < cell))
            })
        })
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Enclosure {
    pub enclosing: bool,
    /// Index of the enclosing component in the curve set.
    pub component: Option<usize>,
    pub simple: Option<bool>,
}

/// Whether some closed component winds around the origin.
///
/// Fails with [`Error::Inconclusive`] when nothing closed encloses the origin but an
/// open component reaching the box boundary might close outside it: one that meets
/// the real axis on both sides of the origin or turns at least half-way around it.
pub fn has_enclosing_closed_curve(curves: &CurveSet) -> Result<Enclosure> {
    let mut enclosing: Vec<usize> = (0..curves.components.len())
        .filter(|&k| curves.components[k].encloses_origin())
        .collect();
    if !enclosing.is_empty() {
        // Prefer the innermost loop: the one passing closest to the origin.
        enclosing.sort_by(|&a, &b| {
            let d = |k: usize| {
                curves.components[k]
                    .points
                    .iter()
                    .map(|p| p[0].hypot(p[1]))
                    .fold(f64::INFINITY, f64::min)
            };
            d(a).total_cmp(&d(b))
        });
        let k = enclosing[0];
        let c = &curves.components[k];
        let crossed = curves
            .components
            .iter()
            .enumerate()
            .any(|(m, other)| m != k && polylines_meet(&c.points, &other.points, curves.cell_diameter));
        return Ok(Enclosure {
            enclosing: true,
            component: Some(k),
            simple: Some(c.is_simple() && !crossed),
        });
    }
    if leaves_along_asymptotes(curves) {
        return Ok(Enclosure {
            enclosing: false,
            component: None,
            simple: None,
        });
    }
    let candidate = curves.components.iter().any(|c| {
        !c.closed
            && c.touches_boundary
            && ((c.real_crossings.iter().any(|&x| x < 0.0) && c.real_crossings.iter().any(|&x| x > 0.0))
                || c.angle_sweep.abs() >= PI)
    });
    if candidate {
        return Err(Error::Inconclusive);
    }
    Ok(Enclosure {
        enclosing: false,
        component: None,
        simple: None,
    })
}

/// Whether the curve leaves the box exactly along the four asymptotic directions of
/// `S = 0`, the lines `y = ±√3 x` coming from the top-degree form `(3x² - y²)(x² + y²)`.
/// Outside such a box the zero set is four rays, so nothing can close beyond it.
fn leaves_along_asymptotes(curves: &CurveSet) -> bool {
    let r = &curves.rect;
    let on_edge = |p: &[f64; 2]| {
        let tol = 1e-9 * (r.width() + r.height());
        (p[0] - r.x0).abs() < tol || (p[0] - r.x1).abs() < tol || (p[1] - r.y0).abs() < tol || (p[1] - r.y1).abs() < tol
    };
    let mut ends = Vec::new();
    for c in curves.components.iter().filter(|c| !c.closed) {
        for p in [c.points[0], c.points[c.points.len() - 1]] {
            if !on_edge(&p) {
                return false;
            }
            ends.push(p[1].atan2(p[0]));
        }
    }
    if ends.len() != 4 {
        return false;
    }
    let tol = 15f64.to_radians();
    let mut hit = [false; 4];
    for a in ends {
        for (k, dir) in [60.0f64, 120.0, -120.0, -60.0].iter().enumerate() {
            let mut d = (a - dir.to_radians()).abs();
            if d > PI {
                d = 2.0 * PI - d;
            }
            if d < tol {
                hit[k] = true;
            }
        }
    }
    hit.iter().all(|&h| h)
}

/// Half-width of the default square box.
pub fn default_half_width(params: &SymbolParams) -> f64 {
    let m = params
        .alpha
        .abs()
        .max(params.beta.abs())
        .max(params.gamma.abs())
        .max(1.0 / params.gamma.abs());
    1.5 * (1.0 + m)
}

#[derive(Clone, Debug, Serialize)]
pub struct EnclosureReport {
    pub enclosing: bool,
    pub simple: Option<bool>,
    /// Box of the last extraction.
    pub rect: Rect,
    pub resolution: usize,
    /// Every box tried was inconclusive; `enclosing` is then `false`.
    pub inconclusive: bool,
    pub boxes_tried: usize,
}

/// Enclosure test over growing boxes. Boxes of 1.5 times each critical-point modulus
/// come first and can only confirm an enclosing loop, since the loop runs through
/// critical points and may be too small to resolve in a larger box. Then the box
/// around all critical points, the default box, and two and four times the default
/// are tried in turn, and the first conclusive answer is returned.
pub fn detect_enclosure(params: &SymbolParams, resolution: usize) -> Result<EnclosureReport> {
    let moduli: Vec<f64> = match critical_points(params) {
        Ok(rs) => rs.roots.iter().map(|z| z.norm()).collect(),
        Err(Error::NoConvergence { partial, .. }) => partial.roots.iter().map(|z| z.norm()).collect(),
        Err(_) => Vec::new(),
    };
    let crit = moduli.iter().cloned().fold(0.0, f64::max);
    let default = default_half_width(params);
    let mut halves = vec![(1.5 * crit).max(1.0)];
    for h in [default, 2.0 * default, 4.0 * default] {
        if h > halves[halves.len() - 1] {
            halves.push(h);
        }
    }
    let mut probes: Vec<f64> = moduli.iter().map(|m| 1.5 * m).filter(|&h| h > 0.0 && h < 0.75 * halves[0]).collect();
    probes.sort_by(f64::total_cmp);
    probes.dedup_by(|a, b| *a < 1.25 * *b);

    let mut tried = 0;
    for &h in &probes {
        tried += 1;
        let rect = Rect::centered(h)?;
        let curves = extract_curve(params, &rect, resolution)?;
        if let Ok(e) = has_enclosing_closed_curve(&curves) {
            if e.enclosing {
                return Ok(EnclosureReport {
                    enclosing: true,
                    simple: e.simple,
                    rect,
                    resolution,
                    inconclusive: false,
                    boxes_tried: tried,
                });
            }
        }
    }
    let mut last = None;
    for &h in &halves {
        tried += 1;
        let rect = Rect::centered(h)?;
        let curves = extract_curve(params, &rect, resolution)?;
        match has_enclosing_closed_curve(&curves) {
            Ok(e) => {
                return Ok(EnclosureReport {
                    enclosing: e.enclosing,
                    simple: e.simple,
                    rect,
                    resolution,
                    inconclusive: false,
                    boxes_tried: tried,
                })
            }
            Err(Error::Inconclusive) => last = Some(rect),
            Err(e) => return Err(e),
        }
    }
    Ok(EnclosureReport {
        enclosing: false,
        simple: None,
        rect: last.expect("at least one box"),
        resolution,
        inconclusive: true,
        boxes_tried: tried,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{int, rat};

    fn p(a: f64, b: f64, c: f64) -> SymbolParams {
        SymbolParams::new(a, b, c).unwrap()
    }

    #[test]
    fn s_examples() {
        let q = p(-1.3, 0.4, 2.1);
        assert_eq!(s_eval(&q, 0.0, 0.0), 1.0);
        assert!((s_eval(&q, 0.0, 1.0) - (1.0 - 1.3 - 2.1)).abs() < 1e-15);
        let r = SymbolParams::exact(int(-1), int(0), rat(-1, 4)).unwrap();
        assert!(s_eval(&r, 0.0, 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn im_b_examples() {
        let q = p(-1.3, 0.4, 2.1);
        assert_eq!(im_b(&q, Complex64::new(0.7, 0.0)).unwrap(), 0.0);
        assert!((im_b(&q, Complex64::i()).unwrap() - (1.0 - 1.3 - 2.1)).abs() < 1e-15);
        let z = Complex64::new(0.6, -1.7);
        let lhs = im_b(&q, z).unwrap() * z.norm_sqr();
        assert!((lhs - z.im * s_eval(&q, z.re, z.im)).abs() < 1e-12 * lhs.abs());
        let w = Complex64::new(0.3, 0.8);
        assert!((im_b(&q, w.conj()).unwrap() + im_b(&q, w).unwrap()).abs() < 1e-15);
        assert!(matches!(im_b(&q, Complex64::new(0.0, 0.0)), Err(Error::ZeroArgument)));
    }

    #[test]
    fn gradient_matches_finite_differences() {
        let s = BivariateS::new(&p(-2.2, 0.9, -0.6));
        let h = 1e-6;
        for &(x, y) in &[(0.3, 0.4), (-1.2, 0.7), (0.9, -1.5)] {
            let (sx, sy) = s.grad(x, y);
            let fx = (s.eval(x + h, y) - s.eval(x - h, y)) / (2.0 * h);
            let fy = (s.eval(x, y + h) - s.eval(x, y - h)) / (2.0 * h);
            assert!((sx - fx).abs() < 1e-6 * (1.0 + sx.abs()));
            assert!((sy - fy).abs() < 1e-6 * (1.0 + sy.abs()));
        }
    }

    #[test]
    fn resolution_floor() {
        let r = Rect::centered(2.0).unwrap();
        assert!(extract_curve(&p(-1.0, 0.0, 1.0), &r, 8).is_err());
    }

    #[test]
    fn empty_curve_set_does_not_enclose() {
        let c = CurveSet::empty(Rect::centered(1.0).unwrap(), 16);
        assert_eq!(
            has_enclosing_closed_curve(&c).unwrap(),
            Enclosure {
                enclosing: false,
                component: None,
                simple: None
            }
        );
    }

    #[test]
    fn circle_like_loop_is_found() {
        let q = SymbolParams::exact(rat(-13, 4), int(1), rat(-1, 5)).unwrap();
        let c = extract_curve(&q, &Rect::centered(4.0).unwrap(), 256).unwrap();
        let e = has_enclosing_closed_curve(&c).unwrap();
        assert!(e.enclosing);
        assert_eq!(e.simple, Some(true));
        let k = e.component.unwrap();
        assert_eq!(c.components[k].winding.map(i32::abs), Some(1));
    }

    #[test]
    fn zero_node_policy_reject() {
        let q = SymbolParams::exact(int(-2), int(0), rat(1, 3)).unwrap();
        let opts = ExtractOptions {
            zero_policy: ZeroNodePolicy::Reject,
            extra_x: vec![1.0],
            extra_y: vec![0.0],
        };
        let r = extract_curve_with(&q, &Rect::centered(3.0).unwrap(), 64, &opts);
        assert!(matches!(r, Err(Error::DegenerateGrid { .. })));
    }

    #[test]
    fn axis_nodes_snap_and_insert() {
        let n = axis_nodes(-1.0, 1.0, 4, &[0.51, 0.26, 5.0]);
        assert_eq!(n, vec![-1.0, -0.5, 0.0, 0.26, 0.51, 1.0]);
    }
}
