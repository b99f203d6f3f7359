//! Hexagonal cell, sector 1, neighbour cells and evaluation grids.
//!
//! Cell 1 is centred at the origin with vertices at angles 0°, 60°, …,
//! 300° and edge length `d_b`. Its three base stations sit on the vertices
//! at 0°, 120° and 240°; BS₁ at `(d_b, 0)` serves sector 1, the rhombus
//! spanned by the origin, BS₁ and the vertices at ±60°.

use alloc::vec::Vec;

use crate::math;
use crate::{ModelError, Result};

const SQRT_3: f64 = 1.732_050_807_568_877_2;
const EPS: f64 = 1e-9;

/// A planar position in meters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

/// A user position relative to the centre of cell 1.
pub type UserPos = Point;

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    #[inline]
    pub fn dist(&self, o: &Point) -> f64 {
        math::hypot(self.x - o.x, self.y - o.y)
    }

    #[inline]
    pub fn mirror(&self) -> Point {
        Point { x: self.x, y: -self.y }
    }

    #[inline]
    pub fn sub(&self, o: &Point) -> Point {
        Point { x: self.x - o.x, y: self.y - o.y }
    }

    #[inline]
    pub fn add(&self, o: &Point) -> Point {
        Point { x: self.x + o.x, y: self.y + o.y }
    }
}

/// A base station with a sectored antenna.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BaseStation {
    pub pos: Point,
    /// Boresight direction in radians.
    pub boresight: f64,
}

impl BaseStation {
    /// Angle in [0, π] between boresight and the direction to `target`.
    pub fn off_boresight(&self, target: &Point) -> f64 {
        let d = target.sub(&self.pos);
        if d.x == 0.0 && d.y == 0.0 {
            return 0.0;
        }
        let mut a = math::atan2(d.y, d.x) - self.boresight;
        let two_pi = 2.0 * core::f64::consts::PI;
        a -= two_pi * math::floor(a / two_pi);
        if a > core::f64::consts::PI {
            a = two_pi - a;
        }
        a
    }
}

/// Cell edge, relays of sector 1 and grid resolution.
#[derive(Debug, Clone, PartialEq)]
pub struct CellLayout {
    pub d_b: f64,
    pub relays: Vec<Point>,
    pub grid_step: f64,
}

impl CellLayout {
    pub fn new(d_b: f64, relays: Vec<Point>, grid_step: f64) -> Result<Self> {
        if !(d_b > 0.0) || !d_b.is_finite() {
            return Err(ModelError::Domain { what: "cell edge", value: d_b });
        }
        if !(grid_step > 0.0) || !grid_step.is_finite() {
            return Err(ModelError::Domain { what: "grid step", value: grid_step });
        }
        for (index, p) in relays.iter().enumerate() {
            if !in_sector(p, d_b) {
                return Err(ModelError::RelayOutsideSector { index, x: p.x, y: p.y });
            }
        }
        Ok(CellLayout { d_b, relays, grid_step })
    }

    #[inline]
    pub fn n_r(&self) -> usize {
        self.relays.len()
    }

    pub fn sector_area(&self) -> f64 {
        sector_area(self.d_b)
    }

    pub fn bs(&self) -> BaseStation {
        sector_bs(self.d_b)
    }

    /// The same layout with every relay reflected about the x-axis.
    pub fn mirrored(&self) -> CellLayout {
        CellLayout {
            d_b: self.d_b,
            relays: self.relays.iter().map(Point::mirror).collect(),
            grid_step: self.grid_step,
        }
    }
}

/// Area of sector 1, (√3/2)·d_b².
pub fn sector_area(d_b: f64) -> f64 {
    0.5 * SQRT_3 * d_b * d_b
}

/// BS₁ at (d_b, 0) pointing at the cell centre.
pub fn sector_bs(d_b: f64) -> BaseStation {
    BaseStation { pos: Point::new(d_b, 0.0), boresight: core::f64::consts::PI }
}

/// Hexagon test for a point relative to the hexagon centre (inclusive).
#[inline]
pub fn in_hexagon_local(q: &Point, d_b: f64) -> bool {
    let ax = q.x.abs();
    let ay = q.y.abs();
    ay <= 0.5 * SQRT_3 * d_b * (1.0 + EPS) && SQRT_3 * ax + ay <= SQRT_3 * d_b * (1.0 + EPS)
}

/// Hexagon test for cell 1.
#[inline]
pub fn in_hexagon(p: &Point, d_b: f64) -> bool {
    in_hexagon_local(p, d_b)
}

/// Strict interior test for a hexagon centred at `c`.
pub fn strictly_inside_hexagon(p: &Point, c: &Point, d_b: f64) -> bool {
    let q = p.sub(c);
    let ax = q.x.abs();
    let ay = q.y.abs();
    ay < 0.5 * SQRT_3 * d_b * (1.0 - EPS) && SQRT_3 * ax + ay < SQRT_3 * d_b * (1.0 - EPS)
}

/// Sector 1 membership (inclusive of its boundary).
#[inline]
pub fn in_sector(p: &Point, d_b: f64) -> bool {
    let tol = EPS * d_b;
    SQRT_3 * p.x + tol >= p.y.abs() && SQRT_3 * p.x + p.y.abs() <= SQRT_3 * d_b + tol
}

fn cell_centered(n: i64, step: f64) -> impl Iterator<Item = f64> {
    (-n..n).map(move |i| (i as f64 + 0.5) * step)
}

/// Cell-centred samples of sector 1, ordered by y then x.
pub fn sector_grid(layout: &CellLayout) -> Result<Vec<UserPos>> {
    let (d_b, step) = (layout.d_b, layout.grid_step);
    if step > d_b {
        return Err(ModelError::EmptyGrid { d_b, grid_step: step });
    }
    let nx = math::floor(d_b / step) as i64 + 1;
    let ny = math::floor(0.5 * SQRT_3 * d_b / step) as i64 + 1;
    let mut out = Vec::new();
    for y in cell_centered(ny, step) {
        for i in 0..nx {
            let p = Point::new((i as f64 + 0.5) * step, y);
            if in_sector(&p, d_b) {
                out.push(p);
            }
        }
    }
    if out.is_empty() {
        return Err(ModelError::EmptyGrid { d_b, grid_step: step });
    }
    Ok(out)
}

/// Cell-centred offsets covering a hexagon of edge `d_b`, ordered by y then x.
pub fn hexagon_offsets(d_b: f64, step: f64) -> Vec<Point> {
    let nx = math::floor(d_b / step) as i64 + 1;
    let ny = math::floor(0.5 * SQRT_3 * d_b / step) as i64 + 1;
    let mut out = Vec::new();
    for y in cell_centered(ny, step) {
        for x in cell_centered(nx, step) {
            let q = Point::new(x, y);
            if strictly_inside_hexagon(&q, &Point::new(0.0, 0.0), d_b) {
                out.push(q);
            }
        }
    }
    out
}

/// A neighbouring cell with its uniform user grid.
#[derive(Debug, Clone, PartialEq)]
pub struct NeighborCell {
    pub center: Point,
    pub grid: Vec<UserPos>,
}

/// Centres of cells 2–7, at √3·d_b and angles 30° + k·60°.
pub fn neighbor_centers(d_b: f64) -> [Point; 6] {
    let r = SQRT_3 * d_b;
    core::array::from_fn(|k| {
        let a = (30.0 + 60.0 * k as f64).to_radians();
        Point::new(r * math::cos(a), r * math::sin(a))
    })
}

/// The six neighbouring cells and their grids (same step as the layout).
pub fn neighbor_cells(layout: &CellLayout) -> Vec<NeighborCell> {
    let offsets = hexagon_offsets(layout.d_b, layout.grid_step);
    neighbor_centers(layout.d_b)
        .iter()
        .map(|c| NeighborCell { center: *c, grid: offsets.iter().map(|o| o.add(c)).collect() })
        .collect()
}

/// The base station serving `p` inside the hexagon centred at `center`:
/// the one of the three stations at the 0°, 120°, 240° vertices whose
/// rhombus contains `p`.
pub fn serving_bs(p: &Point, center: &Point, d_b: f64) -> BaseStation {
    let q = p.sub(center);
    let ang = math::atan2(q.y, q.x);
    let deg = ang.to_degrees();
    // sectors centred on 0°, 120°, 240°, each 120° wide
    let k = {
        let a = deg + 60.0;
        let a = a - 360.0 * math::floor(a / 360.0);
        (a / 120.0) as usize % 3
    };
    let va = (120.0 * k as f64).to_radians();
    let pos = Point::new(center.x + d_b * math::cos(va), center.y + d_b * math::sin(va));
    BaseStation { pos, boresight: va + core::f64::consts::PI }
}

/// Index of the relay with the smallest path cost (ties to the lowest
/// index), or `None` when there are no relays.
pub fn serving_assignment<F>(u: &UserPos, layout: &CellLayout, mut cost: F) -> Option<usize>
where
    F: FnMut(&UserPos, &Point) -> f64,
{
    let mut best: Option<(usize, f64)> = None;
    for (j, p) in layout.relays.iter().enumerate() {
        let c = cost(u, p);
        match best {
            Some((_, b)) if !(c < b) => {}
            _ => best = Some((j, c)),
        }
    }
    best.map(|(j, _)| j)
}
