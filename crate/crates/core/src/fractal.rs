//! The Sierpinski carpet: subdivision approximants, exact membership, raster
//! output and the two boundary metrics on the unit square.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Default bound on subdivision depth.
pub const MAX_SUBDIVISION_DEPTH: u32 = 10;

/// The eight retained sub-squares `{0,1,2}² ∖ {(1,1)}`.
pub const M: [(u64, u64); 8] = [
    (0, 0),
    (0, 1),
    (0, 2),
    (1, 0),
    (1, 2),
    (2, 0),
    (2, 1),
    (2, 2),
];

/// The closed cells `[i/3ᵈ, (i+1)/3ᵈ] × [j/3ᵈ, (j+1)/3ᵈ]` of one approximant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CellSet {
    depth: u32,
    // Sorted and free of duplicates.
    cells: Vec<(u64, u64)>,
}

impl CellSet {
    /// The whole square as a single depth-0 cell.
    pub fn full() -> Self {
        CellSet {
            depth: 0,
            cells: vec![(0, 0)],
        }
    }

    pub fn empty(depth: u32) -> Self {
        CellSet {
            depth,
            cells: Vec::new(),
        }
    }

    pub fn from_cells(depth: u32, cells: impl IntoIterator<Item = (u64, u64)>) -> Result<Self> {
        let side = side(depth)?;
        let mut cells: Vec<_> = cells.into_iter().collect();
        if cells.iter().any(|&(i, j)| i >= side || j >= side) {
            return Err(Error::Invalid(format!(
                "cell outside the {side}×{side} grid"
            )));
        }
        cells.sort_unstable();
        cells.dedup();
        Ok(CellSet { depth, cells })
    }

    pub fn depth(&self) -> u32 {
        self.depth
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn cells(&self) -> &[(u64, u64)] {
        &self.cells
    }

    pub fn contains(&self, cell: (u64, u64)) -> bool {
        self.cells.binary_search(&cell).is_ok()
    }
}

fn side(depth: u32) -> Result<u64> {
    3u64.checked_pow(depth)
        .filter(|_| depth <= 40)
        .ok_or(Error::SubdivisionDepth(depth))
}

/// One step of `M ⊗ −`: every cell is replaced by its eight retained
/// sub-cells.
pub fn subdivide(c: &CellSet) -> Result<CellSet> {
    subdivide_with_limit(c, MAX_SUBDIVISION_DEPTH)
}

pub fn subdivide_with_limit(c: &CellSet, limit: u32) -> Result<CellSet> {
    let depth = c.depth + 1;
    if depth > limit {
        return Err(Error::SubdivisionDepth(depth));
    }
    side(depth)?;
    let mut cells = Vec::with_capacity(c.cells.len() * 8);
    // Children of neighbouring parents interleave, so sort once at the end.
    for &(i, j) in &c.cells {
        for &(m1, m2) in &M {
            cells.push((3 * i + m1, 3 * j + m2));
        }
    }
    cells.sort_unstable();
    Ok(CellSet { depth, cells })
}

/// `subdivide` applied `depth` times to the full square.
pub fn approximant(depth: u32) -> Result<CellSet> {
    let mut c = CellSet::full();
    for _ in 0..depth {
        c = subdivide(&c)?;
    }
    Ok(c)
}

/// An exact coordinate `num/den` in `[0, 1]`. Equality is by value.
#[derive(Debug, Clone)]
pub struct Coord {
    num: BigUint,
    den: BigUint,
}

impl PartialEq for Coord {
    fn eq(&self, other: &Self) -> bool {
        &self.num * &other.den == &other.num * &self.den
    }
}

impl Eq for Coord {}

impl Coord {
    pub fn new(num: impl Into<BigUint>, den: impl Into<BigUint>) -> Result<Self> {
        let (num, den) = (num.into(), den.into());
        if den.is_zero() {
            return Err(Error::Invalid("zero denominator".into()));
        }
        if num > den {
            return Err(Error::Invalid("coordinate must lie in [0, 1]".into()));
        }
        Ok(Coord { num, den })
    }

    /// The exact binary value of a finite double in `[0, 1]`.
    pub fn from_f64(x: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&x) {
            return Err(Error::Invalid(format!("coordinate {x} outside [0, 1]")));
        }
        if x == 0.0 {
            return Coord::new(0u32, 1u32);
        }
        let bits = x.to_bits();
        let exp = ((bits >> 52) & 0x7ff) as i64;
        let frac = bits & ((1u64 << 52) - 1);
        let (mantissa, exp) = if exp == 0 {
            (frac, -1074)
        } else {
            (frac | (1u64 << 52), exp - 1075)
        };
        if exp >= 0 {
            // Only 1.0 is an integer in range.
            return Coord::new(1u32, 1u32);
        }
        let shift = (mantissa.trailing_zeros() as i64).min(-exp);
        Coord::new(mantissa >> shift, BigUint::one() << (-exp - shift) as usize)
    }

    pub fn to_f64(&self) -> f64 {
        let (n, d) = (
            self.num.to_f64().unwrap_or(f64::MAX),
            self.den.to_f64().unwrap_or(f64::MAX),
        );
        n / d
    }
}

impl FromStr for Coord {
    type Err = Error;

    /// Accepts `p/q`, an integer `0` or `1`, or a decimal literal.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::Invalid(format!("cannot read coordinate `{s}`"));
        if let Some((p, q)) = s.split_once('/') {
            let p: BigUint = p.trim().parse().map_err(|_| bad())?;
            let q: BigUint = q.trim().parse().map_err(|_| bad())?;
            return Coord::new(p, q);
        }
        if let Ok(n) = s.parse::<BigUint>() {
            return Coord::new(n, 1u32);
        }
        Coord::from_f64(s.parse::<f64>().map_err(|_| bad())?)
    }
}

impl fmt::Display for Coord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

/// Digit choices for one coordinate at one level: scaling the position
/// `r/den` inside the current cell by 3 lands in sub-cell `k`, or on the
/// boundary between `k-1` and `k`, in which case both closed cells qualify.
fn digit_options(r: &BigUint, den: &BigUint) -> Vec<(u8, BigUint)> {
    let t = r * 3u32;
    let k = (&t / den).to_u8().expect("quotient is at most 3");
    let rem = t % den;
    if !rem.is_zero() {
        return vec![(k, rem)];
    }
    let mut out = Vec::with_capacity(2);
    if k > 0 {
        out.push((k - 1, den.clone()));
    }
    if k < 3 {
        out.push((k, BigUint::zero()));
    }
    out
}

/// Whether `(x, y)` lies in the closed depth-`depth` approximant: some
/// choice of base-3 expansions avoids the digit pair `(1, 1)` in the first
/// `depth` places.
pub fn carpet_member(x: &Coord, y: &Coord, depth: u32) -> bool {
    // Each coordinate has at most two live remainders, so at most four
    // joint states survive any level.
    let mut states = vec![(x.num.clone(), y.num.clone())];
    for _ in 0..depth {
        let mut next: Vec<(BigUint, BigUint)> = Vec::with_capacity(4);
        for (rx, ry) in &states {
            for (dx, nx) in digit_options(rx, &x.den) {
                for (dy, ny) in digit_options(ry, &y.den) {
                    if (dx, dy) != (1, 1) && !next.iter().any(|(a, b)| *a == nx && *b == ny) {
                        next.push((nx.clone(), ny));
                    }
                }
            }
        }
        if next.is_empty() {
            return false;
        }
        states = next;
    }
    true
}

/// [`carpet_member`] on the exact binary values of two doubles.
pub fn carpet_member_f64(x: f64, y: f64, depth: u32) -> Result<bool> {
    Ok(carpet_member(
        &Coord::from_f64(x)?,
        &Coord::from_f64(y)?,
        depth,
    ))
}

/// A square grayscale raster; row 0 is the top (largest `y`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Raster {
    size: usize,
    inside: Vec<bool>,
}

impl Raster {
    pub fn size(&self) -> usize {
        self.size
    }

    /// Whether the pixel in column `col` and row `row` is in the carpet.
    pub fn inside(&self, col: usize, row: usize) -> bool {
        self.inside[row * self.size + col]
    }

    pub fn count_inside(&self) -> usize {
        self.inside.iter().filter(|&&b| b).count()
    }

    /// Binary PGM, one byte per pixel: 0 inside, 255 outside.
    pub fn to_pgm(&self) -> Vec<u8> {
        let mut out = format!("P5\n{} {}\n255\n", self.size, self.size).into_bytes();
        out.extend(self.inside.iter().map(|&b| if b { 0u8 } else { 255 }));
        out
    }
}

/// Samples the depth-`depth` approximant at the pixel centres
/// `((2c+1)/2r, (2s+1)/2r)`.
pub fn render(depth: u32, resolution: usize) -> Result<Raster> {
    if resolution == 0 {
        return Err(Error::Invalid("resolution must be positive".into()));
    }
    let den = BigUint::from(2 * resolution);
    let coord = |i: usize| Coord {
        num: BigUint::from(2 * i + 1),
        den: den.clone(),
    };
    let mut inside = Vec::with_capacity(resolution * resolution);
    for row in 0..resolution {
        let y = coord(resolution - 1 - row);
        for col in 0..resolution {
            inside.push(carpet_member(&coord(col), &y, depth));
        }
    }
    Ok(Raster {
        size: resolution,
        inside,
    })
}

/// The four sides of the unit square, traversed counter-clockwise from the
/// origin.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Edge {
    Bottom,
    Right,
    Top,
    Left,
}

/// A point of the boundary of `[0,1]²` given as a side and a parameter in
/// `[0,1]` along it. Each side runs counter-clockwise, so the end of one
/// side is the start of the next.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryPoint {
    pub edge: Edge,
    pub t: f64,
}

impl BoundaryPoint {
    pub fn new(edge: Edge, t: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&t) {
            return Err(Error::Invalid(format!("edge parameter {t} outside [0, 1]")));
        }
        Ok(BoundaryPoint { edge, t })
    }

    /// The boundary point with coordinates `(x, y)`, if there is one.
    pub fn from_xy(x: f64, y: f64) -> Result<Self> {
        let in_range = (0.0..=1.0).contains(&x) && (0.0..=1.0).contains(&y);
        let p = match () {
            _ if !in_range => None,
            _ if y == 0.0 => Some((Edge::Bottom, x)),
            _ if x == 1.0 => Some((Edge::Right, y)),
            _ if y == 1.0 => Some((Edge::Top, 1.0 - x)),
            _ if x == 0.0 => Some((Edge::Left, 1.0 - y)),
            _ => None,
        };
        p.map(|(edge, t)| BoundaryPoint { edge, t })
            .ok_or_else(|| Error::Invalid(format!("({x}, {y}) is not on the boundary")))
    }

    pub fn xy(&self) -> (f64, f64) {
        let t = self.t;
        match self.edge {
            Edge::Bottom => (t, 0.0),
            Edge::Right => (1.0, t),
            Edge::Top => (1.0 - t, 1.0),
            Edge::Left => (0.0, 1.0 - t),
        }
    }

    /// Arc length from the origin, counter-clockwise, in `[0, 4)`.
    pub fn perimeter_position(&self) -> f64 {
        let base = match self.edge {
            Edge::Bottom => 0.0,
            Edge::Right => 1.0,
            Edge::Top => 2.0,
            Edge::Left => 3.0,
        };
        (base + self.t) % 4.0
    }
}

/// `|x' - x| + |y' - y|`.
pub fn d_taxicab(p: &BoundaryPoint, q: &BoundaryPoint) -> f64 {
    let ((x, y), (u, v)) = (p.xy(), q.xy());
    (u - x).abs() + (v - y).abs()
}

/// Length of the shorter way round the boundary between `p` and `q`.
pub fn d_path(p: &BoundaryPoint, q: &BoundaryPoint) -> f64 {
    let arc = (p.perimeter_position() - q.perimeter_position()).abs();
    arc.min(4.0 - arc)
}
