//! Rasterization of a scene onto a Cartesian or log-polar node grid.
//!
//! Nodes sit at cell centers. Every link between neighboring nodes is tested
//! against the boundary pieces; a link that meets a piece is *cut*, and the
//! fraction `t` of the link lying before the first crossing is recorded. Uncut
//! links connect nodes into components, and each component is classified as
//! inside or outside the region by testing a few of its members.

use std::f64::consts::TAU;

use super::primitives::{BoundaryLabel, Edge, Piece, SegmentIndex, Shape};
use super::Point;
use crate::error::{Error, Result};

/// Resolution-independent frame description.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FrameSpec {
    /// Box `[min, max]` with one cell of margin on each side.
    Cartesian { min: Point, max: Point, box_label: BoundaryLabel },
    /// Coordinates `ξ = sign·ln|z − center|`, `η = arg(z − center)`, periodic in `η`.
    /// The ends `ξ = xi_min` and `ξ ≈ xi_max` are cell faces carrying `near` and `far`.
    /// With `align = (ξ, η)`, the near end moves down so that `ξ` is a cell face at every
    /// resolution divisible by 16, and the angular origin moves to `η` (slit tips then
    /// sit at the same sub-cell position on every level of a refinement ladder).
    LogPolar { center: Point, sign: f64, xi_min: f64, xi_max: f64, near: BoundaryLabel, far: BoundaryLabel, align: Option<(f64, f64)> },
}

/// Concrete frame; node `(i, j)` sits at frame coordinates `(i + ½, j + ½)·h` from the origin.
/// Log-polar angles are measured from `eta0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Frame {
    Cartesian { origin: Point, h: f64 },
    LogPolar { center: Point, sign: f64, xi0: f64, eta0: f64, h: f64 },
}

impl Frame {
    pub fn h(&self) -> f64 {
        match *self {
            Frame::Cartesian { h, .. } | Frame::LogPolar { h, .. } => h,
        }
    }

    /// Point at fractional frame coordinates (node `(i, j)` is at `(i + ½, j + ½)`).
    pub fn point(&self, s: f64, t: f64) -> Point {
        match *self {
            Frame::Cartesian { origin, h } => origin + Point::new(s * h, t * h),
            Frame::LogPolar { center, sign, xi0, eta0, h } => center + Point::from_polar((sign * (xi0 + s * h)).exp(), eta0 + t * h),
        }
    }

    pub fn node(&self, i: usize, j: usize) -> Point {
        self.point(i as f64 + 0.5, j as f64 + 0.5)
    }

    /// Fractional frame coordinates of `z`.
    pub fn coords(&self, z: Point) -> (f64, f64) {
        match *self {
            Frame::Cartesian { origin, h } => ((z.re - origin.re) / h, (z.im - origin.im) / h),
            Frame::LogPolar { center, sign, xi0, eta0, h } => {
                let w = z - center;
                let a = (w.arg() - eta0).rem_euclid(TAU);
                ((sign * w.norm().ln() - xi0) / h, a / h)
            }
        }
    }

    fn edge(&self, i: usize, j: usize, dir: Dir) -> Edge {
        let (s0, t0) = (i as f64 + 0.5, j as f64 + 0.5);
        let (s1, t1) = match dir {
            Dir::E => (s0 + 1.0, t0),
            Dir::W => (s0 - 1.0, t0),
            Dir::N => (s0, t0 + 1.0),
            Dir::S => (s0, t0 - 1.0),
        };
        match *self {
            Frame::Cartesian { .. } => Edge::Segment { a: self.point(s0, t0), b: self.point(s1, t1) },
            Frame::LogPolar { center, sign, xi0, eta0, h } => match dir {
                Dir::E | Dir::W => Edge::Radial { center, sign, xi_a: xi0 + s0 * h, xi_b: xi0 + s1 * h, eta: eta0 + t0 * h },
                Dir::N | Dir::S => Edge::Arc { center, radius: (sign * (xi0 + s0 * h)).exp(), theta0: eta0 + t0 * h, dtheta: (t1 - t0) * h },
            },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Dir {
    E,
    W,
    N,
    S,
}

pub const DIRS: [Dir; 4] = [Dir::E, Dir::W, Dir::N, Dir::S];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CellLabel {
    Interior,
    Boundary0,
    Boundary1,
    Neumann,
    Exterior,
}

impl From<BoundaryLabel> for CellLabel {
    fn from(l: BoundaryLabel) -> CellLabel {
        match l {
            BoundaryLabel::Zero => CellLabel::Boundary0,
            BoundaryLabel::One => CellLabel::Boundary1,
            BoundaryLabel::Neumann => CellLabel::Neumann,
        }
    }
}

/// A link from an interior node that ends on the boundary after fraction `t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cut {
    pub node: usize,
    pub dir: Dir,
    pub t: f64,
    pub label: BoundaryLabel,
    /// Fraction of the dual face inside the region (below 1 only next to Neumann pieces).
    pub w: f64,
}

/// A scene: labeled boundary pieces, a region predicate, and a frame.
pub struct Scene {
    pub pieces: Vec<Piece>,
    pub frame: FrameSpec,
    pub region: Box<dyn Fn(Point) -> bool + Send + Sync>,
}

impl std::fmt::Debug for Scene {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Scene").field("pieces", &self.pieces.len()).field("frame", &self.frame).finish()
    }
}

#[derive(Debug, Clone)]
pub struct LabeledGrid {
    pub frame: Frame,
    pub nx: usize,
    pub ny: usize,
    pub periodic: bool,
    pub labels: Vec<CellLabel>,
    pub cuts: Vec<Cut>,
    /// Node index of each unknown, in increasing order.
    pub unknowns: Vec<usize>,
    /// Neighbor unknowns of each unknown (`u32::MAX` where cut or absent).
    pub neighbors: Vec<[u32; 4]>,
    /// Link weights aligned with `neighbors`: the fraction of each dual face inside the region.
    pub weights: Vec<[f64; 4]>,
    /// Interior nodes dropped because their component touches no Dirichlet boundary.
    pub floating: usize,
}

impl LabeledGrid {
    pub fn index(&self, i: usize, j: usize) -> usize {
        j * self.nx + i
    }

    pub fn ij(&self, k: usize) -> (usize, usize) {
        (k % self.nx, k / self.nx)
    }

    pub fn node(&self, k: usize) -> Point {
        let (i, j) = self.ij(k);
        self.frame.node(i, j)
    }

    pub fn count(&self, label: CellLabel) -> usize {
        self.labels.iter().filter(|&&l| l == label).count()
    }

    /// Crossing points of the cut links carrying `label`.
    pub fn cut_points(&self, label: BoundaryLabel) -> Vec<Point> {
        self.cuts
            .iter()
            .filter(|c| c.label == label)
            .map(|c| {
                let (i, j) = self.ij(c.node);
                self.frame.edge(i, j, c.dir).at(c.t)
            })
            .collect()
    }

    pub fn has_label(&self, label: BoundaryLabel) -> bool {
        self.cuts.iter().any(|c| c.label == label)
    }

    /// Neighbor node of `(i, j)` in direction `dir`, if inside the frame.
    pub fn neighbor(&self, i: usize, j: usize, dir: Dir) -> Option<(usize, usize)> {
        match dir {
            Dir::E => (i + 1 < self.nx).then_some((i + 1, j)),
            Dir::W => (i > 0).then(|| (i - 1, j)),
            Dir::N => {
                if j + 1 < self.ny {
                    Some((i, j + 1))
                } else if self.periodic {
                    Some((i, 0))
                } else {
                    None
                }
            }
            Dir::S => {
                if j > 0 {
                    Some((i, j - 1))
                } else if self.periodic {
                    Some((i, self.ny - 1))
                } else {
                    None
                }
            }
        }
    }
}

/// First crossing seen from each end of a link.
#[derive(Debug, Clone, Copy)]
struct LinkCut {
    t_lo: f64,
    lab_lo: BoundaryLabel,
    t_hi: f64,
    lab_hi: BoundaryLabel,
}

const T_MIN: f64 = 1e-3;

struct Crosser<'a> {
    pieces: &'a [Piece],
    circles: Vec<usize>,
    index: SegmentIndex,
    buf: Vec<f64>,
}

impl<'a> Crosser<'a> {
    fn new(pieces: &'a [Piece]) -> Crosser<'a> {
        let circles: Vec<usize> = (0..pieces.len()).filter(|&i| matches!(pieces[i].shape, Shape::Circle { .. })).collect();
        let segs: Vec<usize> = (0..pieces.len()).filter(|&i| matches!(pieces[i].shape, Shape::Segment { .. })).collect();
        Crosser { pieces, circles, index: SegmentIndex::new(pieces, &segs), buf: Vec::new() }
    }

    fn link(&mut self, edge: &Edge) -> Option<LinkCut> {
        let mut best: Option<LinkCut> = None;
        let pieces = self.pieces;
        let consider = |t: f64, label: BoundaryLabel, best: &mut Option<LinkCut>| match best {
            None => *best = Some(LinkCut { t_lo: t, lab_lo: label, t_hi: t, lab_hi: label }),
            Some(c) => {
                if t < c.t_lo || (t == c.t_lo && label < c.lab_lo) {
                    c.t_lo = t;
                    c.lab_lo = label;
                }
                if t > c.t_hi || (t == c.t_hi && label < c.lab_hi) {
                    c.t_hi = t;
                    c.lab_hi = label;
                }
            }
        };
        for &ci in &self.circles {
            self.buf.clear();
            edge.crossings(&pieces[ci].shape, &mut self.buf);
            for &t in &self.buf {
                consider(t, pieces[ci].label, &mut best);
            }
        }
        let (lo, hi) = edge.bbox();
        let buf = &mut self.buf;
        self.index.query(lo, hi, |si| {
            buf.clear();
            edge.crossings(&pieces[si].shape, buf);
            for &t in buf.iter() {
                consider(t, pieces[si].label, &mut best);
            }
        });
        best
    }
}

impl Crosser<'_> {
    /// Every crossing of `edge` with a piece, with its label.
    fn all(&mut self, edge: &Edge) -> Vec<(f64, BoundaryLabel)> {
        let pieces = self.pieces;
        let mut out = Vec::new();
        for &ci in &self.circles {
            self.buf.clear();
            edge.crossings(&pieces[ci].shape, &mut self.buf);
            out.extend(self.buf.iter().map(|&t| (t, pieces[ci].label)));
        }
        let (lo, hi) = edge.bbox();
        let buf = &mut self.buf;
        self.index.query(lo, hi, |si| {
            buf.clear();
            edge.crossings(&pieces[si].shape, buf);
            out.extend(buf.iter().map(|&t| (t, pieces[si].label)));
        });
        out
    }

    /// Length (in units of the face segment `a→b`, whose middle unit is the
    /// dual face proper) of the part inside the region. Faces that meet a
    /// Dirichlet piece count as whole.
    fn aperture(&mut self, a: Point, b: Point, len: f64, region: &dyn Fn(Point) -> bool) -> f64 {
        let hits = self.all(&Edge::Segment { a, b });
        if hits.iter().any(|h| h.1 != BoundaryLabel::Neumann) {
            return 1.0;
        }
        if hits.is_empty() && len == 1.0 {
            return 1.0;
        }
        let mut ts: Vec<f64> = hits.iter().map(|h| h.0).collect();
        ts.push(0.0);
        ts.push(1.0);
        ts.sort_by(f64::total_cmp);
        let mut inside = 0.0;
        for w in ts.windows(2) {
            if w[1] > w[0] && region(a + (b - a) * (0.5 * (w[0] + w[1]))) {
                inside += w[1] - w[0];
            }
        }
        (inside * len).max(A_MIN)
    }
}

const A_MIN: f64 = 1e-3;

struct UnionFind(Vec<u32>);

impl UnionFind {
    fn find(&mut self, mut x: usize) -> usize {
        while self.0[x] as usize != x {
            let p = self.0[x] as usize;
            self.0[x] = self.0[p];
            x = p;
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.0[hi] = lo as u32;
        }
    }
}

/// Grid extent for a frame spec at the given resolution.
pub fn frame_for(spec: &FrameSpec, resolution: usize) -> (Frame, usize, usize, bool) {
    match *spec {
        FrameSpec::Cartesian { min, max, .. } => {
            let w = max.re - min.re;
            let hgt = max.im - min.im;
            let h = w.max(hgt) / resolution as f64;
            let cells = |len: f64| ((len / h) - 1e-9).ceil().max(1.0) as usize + 2;
            (Frame::Cartesian { origin: min - Point::new(h, h), h }, cells(w), cells(hgt), false)
        }
        FrameSpec::LogPolar { center, sign, xi_min, xi_max, align, .. } => {
            let h = TAU / resolution as f64;
            let (xi0, eta0) = match align {
                Some((a, eta)) => {
                    let coarse = TAU / 16.0;
                    (a - (((a - xi_min) / coarse) - 1e-9).ceil() * coarse, eta)
                }
                None => (xi_min, 0.0),
            };
            let nx = (((xi_max - xi0) / h) - 1e-9).ceil().max(1.0) as usize;
            (Frame::LogPolar { center, sign, xi0, eta0, h }, nx, resolution, true)
        }
    }
}

/// Links of all nodes: `[east, north]` cut status per node.
fn cut_links(frame: &Frame, nx: usize, ny: usize, periodic: bool, pieces: &[Piece]) -> Vec<[Option<LinkCut>; 2]> {
    let mut crosser = Crosser::new(pieces);
    let mut links = vec![[None, None]; nx * ny];
    for j in 0..ny {
        for i in 0..nx {
            let k = j * nx + i;
            if i + 1 < nx {
                links[k][0] = crosser.link(&frame.edge(i, j, Dir::E));
            }
            if j + 1 < ny || periodic {
                links[k][1] = crosser.link(&frame.edge(i, j, Dir::N));
            }
        }
    }
    links
}

pub fn rasterize_scene(scene: &Scene, resolution: usize) -> Result<LabeledGrid> {
    if resolution < 16 {
        return Err(Error::InvalidArgument(format!("resolution must be at least 16, got {resolution}")));
    }
    let (frame, nx, ny, periodic) = frame_for(&scene.frame, resolution);
    if nx * ny > 60_000_000 {
        return Err(Error::InvalidArgument(format!("grid of {nx}×{ny} nodes is too large")));
    }
    let links = cut_links(&frame, nx, ny, periodic, &scene.pieces);
    let n = nx * ny;
    let north = |i: usize, j: usize| if j + 1 < ny { j + 1 } else { let _ = i; 0 };

    let mut uf = UnionFind((0..n as u32).collect());
    for j in 0..ny {
        for i in 0..nx {
            let k = j * nx + i;
            if i + 1 < nx && links[k][0].is_none() {
                uf.union(k, k + 1);
            }
            if (j + 1 < ny || periodic) && links[k][1].is_none() {
                uf.union(k, north(i, j) * nx + i);
            }
        }
    }
    let mut root = vec![0u32; n];
    let mut members: Vec<Vec<u32>> = Vec::new();
    let mut comp_of_root = vec![u32::MAX; n];
    for k in 0..n {
        let r = uf.find(k);
        if comp_of_root[r] == u32::MAX {
            comp_of_root[r] = members.len() as u32;
            members.push(Vec::new());
        }
        let c = comp_of_root[r];
        root[k] = c;
        let m = &mut members[c as usize];
        if m.len() < 5 {
            m.push(k as u32);
        }
    }
    let inside: Vec<bool> = members
        .iter()
        .map(|m| {
            let votes = m.iter().filter(|&&k| {
                let (i, j) = ((k as usize) % nx, (k as usize) / nx);
                (scene.region)(frame.node(i, j))
            });
            2 * votes.count() > m.len()
        })
        .collect();

    let (end_lo, end_hi, box_label) = match scene.frame {
        FrameSpec::LogPolar { near, far, .. } => (near, far, None),
        FrameSpec::Cartesian { box_label, .. } => (box_label, box_label, Some(box_label)),
    };

    let link_of = |i: usize, j: usize, dir: Dir| -> (Option<LinkCut>, bool) {
        match dir {
            Dir::E => (links[j * nx + i][0], false),
            Dir::N => (links[j * nx + i][1], false),
            Dir::W => (links[j * nx + i - 1][0], true),
            Dir::S => {
                let jj = if j > 0 { j - 1 } else { ny - 1 };
                (links[jj * nx + i][1], true)
            }
        }
    };

    let mut labels = vec![CellLabel::Exterior; n];
    let mut cuts = Vec::new();
    for k in 0..n {
        if !inside[root[k] as usize] {
            continue;
        }
        labels[k] = CellLabel::Interior;
        let (i, j) = (k % nx, k / nx);
        for dir in DIRS {
            let in_frame = match dir {
                Dir::E => i + 1 < nx,
                Dir::W => i > 0,
                Dir::N => j + 1 < ny || periodic,
                Dir::S => j > 0 || periodic,
            };
            if !in_frame {
                let label = match dir {
                    Dir::W => end_lo,
                    Dir::E => end_hi,
                    _ => box_label.unwrap_or(BoundaryLabel::Neumann),
                };
                cuts.push(Cut { node: k, dir, t: 0.5, label, w: 1.0 });
                continue;
            }
            let (lc, reversed) = link_of(i, j, dir);
            if let Some(c) = lc {
                let (t, label) = if reversed { (1.0 - c.t_hi, c.lab_hi) } else { (c.t_lo, c.lab_lo) };
                cuts.push(Cut { node: k, dir, t: t.max(T_MIN), label, w: 1.0 });
            } else {
                let nb = match dir {
                    Dir::E => k + 1,
                    Dir::W => k - 1,
                    Dir::N => north(i, j) * nx + i,
                    Dir::S => (if j > 0 { j - 1 } else { ny - 1 }) * nx + i,
                };
                if !inside[root[nb] as usize] {
                    return Err(Error::InvalidDomain("rasterization leak: uncut link between inside and outside".into()));
                }
            }
        }
    }

    // Components without a Dirichlet cut carry no information; drop them.
    let mut anchored = vec![false; members.len()];
    for c in &cuts {
        if c.label != BoundaryLabel::Neumann {
            anchored[root[c.node] as usize] = true;
        }
    }
    let mut floating = 0;
    for k in 0..n {
        if labels[k] == CellLabel::Interior && !anchored[root[k] as usize] {
            labels[k] = CellLabel::Exterior;
            floating += 1;
        }
    }
    cuts.retain(|c| labels[c.node] == CellLabel::Interior);

    let mut grid = LabeledGrid { frame, nx, ny, periodic, labels, cuts, unknowns: Vec::new(), neighbors: Vec::new(), weights: Vec::new(), floating };

    // Exterior nodes next to the region take the label of the nearest crossing.
    let mut nearest: Vec<(f64, BoundaryLabel)> = vec![(f64::INFINITY, BoundaryLabel::Neumann); n];
    for c in &grid.cuts {
        let (i, j) = grid.ij(c.node);
        if let Some((ni, nj)) = grid.neighbor(i, j, c.dir) {
            let nb = grid.index(ni, nj);
            if grid.labels[nb] == CellLabel::Exterior {
                let d = 1.0 - c.t;
                let e = &mut nearest[nb];
                if d < e.0 || (d == e.0 && c.label < e.1) {
                    *e = (d, c.label);
                }
            }
        }
    }
    for k in 0..n {
        if nearest[k].0.is_finite() {
            grid.labels[k] = nearest[k].1.into();
        }
    }

    let mut unknown_of = vec![u32::MAX; n];
    for k in 0..n {
        if grid.labels[k] == CellLabel::Interior {
            unknown_of[k] = grid.unknowns.len() as u32;
            grid.unknowns.push(k);
        }
    }
    if grid.unknowns.is_empty() {
        return Err(Error::TooCoarse("no interior nodes at this resolution".into()));
    }
    let mut cut_mask = vec![0u8; n];
    for c in &grid.cuts {
        cut_mask[c.node] |= 1 << dir_bit(c.dir);
    }
    grid.neighbors = grid
        .unknowns
        .iter()
        .map(|&k| {
            let (i, j) = grid.ij(k);
            let mut nb = [u32::MAX; 4];
            for (s, dir) in DIRS.iter().enumerate() {
                if cut_mask[k] & (1 << dir_bit(*dir)) != 0 {
                    continue;
                }
                if let Some((ni, nj)) = grid.neighbor(i, j, *dir) {
                    nb[s] = unknown_of[grid.index(ni, nj)];
                }
            }
            nb
        })
        .collect();
    grid.weights = vec![[1.0; 4]; grid.unknowns.len()];
    let neumann = scene.pieces.iter().any(|p| p.label == BoundaryLabel::Neumann);
    if neumann && matches!(frame, Frame::Cartesian { .. }) {
        apply_apertures(&mut grid, scene, &unknown_of);
    }
    Ok(grid)
}

/// Dual face of the link from node `(i, j)` in direction `dir`, placed a
/// fraction `f` of the way along the link and stretched by `lo`, `hi` cells
/// beyond its ends.
fn face(frame: &Frame, i: usize, j: usize, dir: Dir, f: f64, lo: f64, hi: f64) -> (Point, Point) {
    let (s, t) = (i as f64 + 0.5, j as f64 + 0.5);
    match dir {
        Dir::E => (frame.point(s + f, t - 0.5 - lo), frame.point(s + f, t + 0.5 + hi)),
        Dir::W => (frame.point(s - f, t - 0.5 - lo), frame.point(s - f, t + 0.5 + hi)),
        Dir::N => (frame.point(s - 0.5 - lo, t + f), frame.point(s + 0.5 + hi, t + f)),
        Dir::S => (frame.point(s - 0.5 - lo, t - f), frame.point(s + 0.5 + hi, t - f)),
    }
}

pub(crate) fn dir_bit(d: Dir) -> u8 {
    match d {
        Dir::E => 0,
        Dir::W => 1,
        Dir::N => 2,
        Dir::S => 3,
    }
}

fn opposite(dir: Dir) -> usize {
    match dir {
        Dir::E => 1,
        Dir::W => 0,
        Dir::N => 3,
        Dir::S => 2,
    }
}

/// Scales links next to Neumann pieces by the part of their dual face that
/// lies inside the region (a finite-volume treatment of the no-flux
/// condition). A face whose link runs along a Neumann boundary is stretched
/// by half a cell toward it so that the sliver between the last node row and
/// the boundary is counted. Dirichlet cuts use the face halfway to the boundary.
fn apply_apertures(grid: &mut LabeledGrid, scene: &Scene, unknown_of: &[u32]) {
    let mut crosser = Crosser::new(&scene.pieces);
    let region = &*scene.region;
    let frame = grid.frame;
    let mut neumann = vec![0u8; grid.labels.len()];
    for c in &grid.cuts {
        if c.label == BoundaryLabel::Neumann {
            neumann[c.node] |= 1 << dir_bit(c.dir);
        }
    }
    let walled = |k: usize, d: Dir| neumann[k] & (1 << dir_bit(d)) != 0;
    for p in 0..grid.unknowns.len() {
        let kp = grid.unknowns[p];
        let (i, j) = grid.ij(kp);
        for (s, dir) in DIRS.iter().enumerate() {
            let q = grid.neighbors[p][s];
            if q == u32::MAX || (q as usize) < p {
                continue;
            }
            let kq = grid.unknowns[q as usize];
            let (lo_dir, hi_dir) = match dir {
                Dir::E | Dir::W => (Dir::S, Dir::N),
                Dir::N | Dir::S => (Dir::W, Dir::E),
            };
            let lo = if walled(kp, lo_dir) && walled(kq, lo_dir) { 0.5 } else { 0.0 };
            let hi = if walled(kp, hi_dir) && walled(kq, hi_dir) { 0.5 } else { 0.0 };
            let (a, b) = face(&frame, i, j, *dir, 0.5, lo, hi);
            let w = crosser.aperture(a, b, 1.0 + lo + hi, region);
            if w != 1.0 {
                grid.weights[p][s] = w;
                grid.weights[q as usize][opposite(*dir)] = w;
            }
        }
    }
    for c in 0..grid.cuts.len() {
        let cut = grid.cuts[c];
        if cut.label == BoundaryLabel::Neumann || unknown_of[cut.node] == u32::MAX {
            continue;
        }
        let (i, j) = grid.ij(cut.node);
        let (lo_dir, hi_dir) = match cut.dir {
            Dir::E | Dir::W => (Dir::S, Dir::N),
            Dir::N | Dir::S => (Dir::W, Dir::E),
        };
        let lo = if walled(cut.node, lo_dir) { 0.5 } else { 0.0 };
        let hi = if walled(cut.node, hi_dir) { 0.5 } else { 0.0 };
        let (a, b) = face(&frame, i, j, cut.dir, 0.5 * cut.t, lo, hi);
        grid.cuts[c].w = crosser.aperture(a, b, 1.0 + lo + hi, region);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{QuadrilateralSpec, RingDomainSpec, RingFrameOptions};

    #[test]
    fn annulus_labels() {
        let ring = RingDomainSpec::annulus(1.0, std::f64::consts::E);
        let g = rasterize_scene(&ring.scene(RingFrameOptions::default()).unwrap(), 128).unwrap();
        for p in g.cut_points(BoundaryLabel::Zero) {
            assert!((p.norm() - 1.0).abs() < 1e-9);
        }
        for p in g.cut_points(BoundaryLabel::One) {
            assert!((p.norm() - std::f64::consts::E).abs() < 1e-9);
        }
        assert!(g.count(CellLabel::Boundary0) > 0 && g.count(CellLabel::Boundary1) > 0);
        assert_eq!(g.floating, 0);
    }

    #[test]
    fn grotzsch_slit_and_box_labeled_one() {
        let ring = RingDomainSpec::Canonical(crate::geometry::DomainSpec::grotzsch(2.0));
        let g = rasterize_scene(&ring.cartesian_scene(50.0).unwrap(), 256).unwrap();
        let ones = g.cut_points(BoundaryLabel::One);
        let on_slit = ones.iter().filter(|p| p.im.abs() < 1e-9 && p.re >= 2.0).count();
        let on_box = ones.iter().filter(|p| p.re.abs().max(p.im.abs()) > 99.0).count();
        assert!(on_slit > 100 && on_box > 100, "{on_slit} {on_box}");
        let zeros = g.cut_points(BoundaryLabel::Zero);
        assert!(zeros.iter().all(|p| (p.norm() - 1.0).abs() < 1e-9));
    }

    #[test]
    fn slit_separates_neighbors() {
        let ring = RingDomainSpec::Canonical(crate::geometry::DomainSpec::grotzsch(2.0));
        let g = rasterize_scene(&ring.scene(RingFrameOptions::default()).unwrap(), 64).unwrap();
        // Nodes straddling η = 0 beyond ξ = ln 2 are not neighbors.
        let ones = g.cut_points(BoundaryLabel::One);
        assert!(ones.iter().any(|p| p.im.abs() < 1e-9 && p.re > 2.0));
        for c in &g.cuts {
            if c.label == BoundaryLabel::One && matches!(c.dir, Dir::N | Dir::S) {
                assert!((c.t - 0.5).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn rectangle_quad_labels() {
        let q = QuadrilateralSpec::rectangle(2.0, 1.0);
        let g = rasterize_scene(&q.scene().unwrap(), 64).unwrap();
        assert!(g.cut_points(BoundaryLabel::One).iter().all(|p| p.re.abs() < 1e-9));
        assert!(g.cut_points(BoundaryLabel::Zero).iter().all(|p| (p.re - 2.0).abs() < 1e-9));
        assert!(g.count(CellLabel::Neumann) > 0);
        assert_eq!(g.unknowns.len(), 64 * 32);
    }

    #[test]
    fn resolution_floor() {
        let ring = RingDomainSpec::annulus(1.0, 2.0);
        assert!(rasterize_scene(&ring.scene(RingFrameOptions::default()).unwrap(), 8).is_err());
    }
}
