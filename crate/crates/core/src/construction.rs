//! The coordinate set `A`, the point set `P = A × A`, the slope set `S` and
//! the line set `L`, all in canonical deduplicated form.

use alloc::vec::Vec;
use core::cmp::Ordering;

use num_integer::Integer;

use crate::arith::{QkNum, Ring, ZkInt};
use crate::error::{Error, Result};

/// Largest component magnitude admitted on the `i64` fast paths.
pub(crate) const FAST_LIMIT: i128 = 1 << 61;

/// Sumsets whose bounding box has more cells than this are deduplicated by
/// sorting instead of with a bitmap.
const BITMAP_CELLS: u128 = 1 << 31;

/// Size of the coordinate grid: `x₁ + x₂√k` with `x₁, x₂ ∈ {−s, …, s−1}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct GridParams {
    side: i64,
}

impl GridParams {
    pub fn from_side(side: i64) -> Result<Self> {
        if side < 1 {
            return Err(Error::InvalidParameter(
                "side parameter s must be at least 1",
            ));
        }
        if side as i128 > FAST_LIMIT.isqrt() {
            return Err(Error::Overflow);
        }
        Ok(GridParams { side })
    }

    /// `s = ⌊√N⌋`.
    pub fn from_scale(n: i64) -> Result<Self> {
        if n < 1 {
            return Err(Error::InvalidParameter("scale N must be at least 1"));
        }
        Self::from_side(n.isqrt())
    }

    pub fn side(&self) -> i64 {
        self.side
    }

    /// The effective scale `s²`.
    pub fn scale(&self) -> i64 {
        self.side * self.side
    }

    /// `|A| = 4s²`.
    pub fn card_coords(&self) -> u64 {
        4 * (self.side as u64).pow(2)
    }

    /// `|P| = 16s⁴`.
    pub fn card_points(&self) -> u128 {
        (self.card_coords() as u128).pow(2)
    }

    /// The centred anchor grid `A_{N/4}`, side `⌊s/2⌋`; `None` when `s = 1`.
    pub fn anchors(&self) -> Option<GridParams> {
        (self.side >= 2).then_some(GridParams {
            side: self.side / 2,
        })
    }

    /// Constant-time membership in `A`.
    #[inline]
    pub fn contains(&self, z: ZkInt) -> bool {
        let s = self.side as i128;
        (-s..s).contains(&z.a) && (-s..s).contains(&z.b)
    }

    fn range(&self) -> core::ops::Range<i64> {
        -self.side..self.side
    }
}

/// Parameters of the slope set: scale `M`, cutoff `c = c_num / c_den` in
/// `(0, 1)` and the gcd cap on norms and coefficient pairs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SlopeParams {
    m: u64,
    c_num: u64,
    c_den: u64,
    gcd_cap: u64,
}

impl SlopeParams {
    pub const DEFAULT_GCD_CAP: u64 = 5;

    pub fn new(m: u64, c_num: u64, c_den: u64, gcd_cap: u64) -> Result<Self> {
        if m < 1 {
            return Err(Error::InvalidParameter("M must be at least 1"));
        }
        if c_den == 0 || c_num == 0 || c_num >= c_den {
            return Err(Error::InvalidParameter(
                "cutoff c must lie strictly between 0 and 1",
            ));
        }
        if gcd_cap < 1 {
            return Err(Error::InvalidParameter("gcd cap must be at least 1"));
        }
        let g = c_num.gcd(&c_den);
        let sp = SlopeParams {
            m,
            c_num: c_num / g,
            c_den: c_den / g,
            gcd_cap,
        };
        let (lo, hi) = sp.magnitudes();
        if lo > hi {
            return Err(Error::EmptyMagnitudeInterval { lo, hi });
        }
        if hi as i128 > FAST_LIMIT.isqrt().isqrt() {
            return Err(Error::Overflow);
        }
        Ok(sp)
    }

    pub fn m(&self) -> u64 {
        self.m
    }

    pub fn cutoff(&self) -> (u64, u64) {
        (self.c_num, self.c_den)
    }

    pub fn gcd_cap(&self) -> u64 {
        self.gcd_cap
    }

    /// `t = ⌊√M⌋`.
    pub fn t(&self) -> i64 {
        self.m.isqrt() as i64
    }

    /// The magnitude interval `(⌈c·t⌉, t)`.
    pub fn magnitudes(&self) -> (i64, i64) {
        let t = self.t();
        let lo = (self.c_num as u128 * t as u128).div_ceil(self.c_den as u128) as i64;
        (lo, t)
    }

    /// True when `(1 − c)·t < 1`, i.e. the window admits at most one magnitude
    /// for generic `c`.
    pub fn narrow_window(&self) -> bool {
        ((self.c_den - self.c_num) as u128) * (self.t() as u128) < self.c_den as u128
    }

    fn signed_magnitudes(&self) -> Vec<i64> {
        let (lo, hi) = self.magnitudes();
        (-hi..=-lo).chain(lo..=hi).collect()
    }
}

/// A slope value together with one quadruple `(p₁, p₂, q₁, q₂)` producing it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Slope {
    pub value: QkNum,
    pub witness: [i64; 4],
}

/// The line `y = slope·x + intercept`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Line {
    pub slope: QkNum,
    pub intercept: QkNum,
}

impl Line {
    /// The line of the given slope through `(a, b)`.
    pub fn through(ring: &Ring, slope: QkNum, a: ZkInt, b: ZkInt) -> Result<Self> {
        let intercept = QkNum::from(b).checked_sub(&ring.mul_qz(&slope, a)?)?;
        Ok(Line { slope, intercept })
    }

    /// `slope·x + intercept`.
    pub fn eval(&self, ring: &Ring, x: ZkInt) -> Result<QkNum> {
        ring.mul_qz(&self.slope, x)?.checked_add(&self.intercept)
    }
}

/// `A`, sorted by real value.
pub fn gen_coords(ring: &Ring, grid: &GridParams) -> Vec<ZkInt> {
    let mut out: Vec<ZkInt> = grid
        .range()
        .flat_map(|a| grid.range().map(move |b| ZkInt::new(a as i128, b as i128)))
        .collect();
    out.sort_by(|x, y| ring.cmp(*x, *y));
    out
}

/// `P = A × A`, materialised lazily over a sorted coordinate list.
#[derive(Clone, Debug)]
pub struct PointSet {
    grid: GridParams,
    coords: Vec<ZkInt>,
}

impl PointSet {
    pub fn new(ring: &Ring, grid: GridParams) -> Self {
        PointSet {
            grid,
            coords: gen_coords(ring, &grid),
        }
    }

    pub fn grid(&self) -> &GridParams {
        &self.grid
    }

    pub fn coords(&self) -> &[ZkInt] {
        &self.coords
    }

    pub fn len(&self) -> u128 {
        self.grid.card_points()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, x: ZkInt, y: ZkInt) -> bool {
        self.grid.contains(x) && self.grid.contains(y)
    }

    pub fn iter(&self) -> impl Iterator<Item = (ZkInt, ZkInt)> + '_ {
        self.coords
            .iter()
            .flat_map(move |&x| self.coords.iter().map(move |&y| (x, y)))
    }
}

pub fn gen_points(ring: &Ring, grid: GridParams) -> PointSet {
    PointSet::new(ring, grid)
}

fn abs_gcd(a: i128, b: i128) -> i128 {
    a.gcd(&b)
}

/// Whether a quadruple passes the magnitude and both gcd filters.
pub fn witness_admissible(ring: &Ring, sp: &SlopeParams, w: [i64; 4]) -> Result<bool> {
    let (lo, hi) = sp.magnitudes();
    if !w.iter().all(|v| (lo..=hi).contains(&v.abs())) {
        return Ok(false);
    }
    let cap = sp.gcd_cap as i128;
    let [p1, p2, q1, q2] = w.map(|v| v as i128);
    let np = ring.norm(ZkInt::new(p1, p2))?;
    let nq = ring.norm(ZkInt::new(q1, q2))?;
    Ok(abs_gcd(np, nq) <= cap && abs_gcd(p1, p2) <= cap)
}

/// The slope set, deduplicated by canonical value and sorted by real value.
///
/// Quadruples are visited in lexicographic order of their signed entries;
/// the first quadruple reaching a value is kept as its witness.
pub fn gen_slopes(ring: &Ring, sp: &SlopeParams) -> Result<Vec<Slope>> {
    let vals = sp.signed_magnitudes();
    let mut seen = alloc::collections::BTreeMap::new();
    for &p1 in &vals {
        for &p2 in &vals {
            let p = ZkInt::new(p1 as i128, p2 as i128);
            let np = ring.norm(p)?;
            if abs_gcd(p1 as i128, p2 as i128) > sp.gcd_cap as i128 {
                continue;
            }
            for &q1 in &vals {
                for &q2 in &vals {
                    let q = ZkInt::new(q1 as i128, q2 as i128);
                    if abs_gcd(np, ring.norm(q)?) > sp.gcd_cap as i128 {
                        continue;
                    }
                    let value = ring.ratio(p, q)?;
                    seen.entry(value).or_insert([p1, p2, q1, q2]);
                }
            }
        }
    }
    let mut out: Vec<Slope> = seen
        .into_iter()
        .map(|(value, witness)| Slope { value, witness })
        .collect();
    out.sort_by(|x, y| ring.cmp_q(&x.value, &y.value));
    Ok(out)
}

/// A set of parallel lines.
///
/// Each line is stored by the numerator `c ∈ ℤ[√k]` of its intercept
/// `c / denominator`. For generated families the denominator is the slope's
/// own denominator `d` and `c = d·b − u·a` for an anchor `(a, b)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LineFamily {
    slope: QkNum,
    witness: Option<[i64; 4]>,
    denom: i64,
    keys: Vec<[i64; 2]>,
}

impl LineFamily {
    /// Groups arbitrary lines of one slope into a family. Duplicates collapse.
    pub fn from_lines(ring: &Ring, slope: QkNum, lines: &[Line]) -> Result<Self> {
        let mut denom = slope.denominator();
        for l in lines {
            if l.slope != slope {
                return Err(Error::InvalidParameter("family lines must share one slope"));
            }
            denom = denom.lcm(&l.intercept.denominator());
        }
        small(denom)?;
        let mut keys = lines
            .iter()
            .map(|l| {
                let c = l
                    .intercept
                    .numerator()
                    .checked_scale(denom / l.intercept.denominator())?;
                Ok([small(c.a)?, small(c.b)?])
            })
            .collect::<Result<Vec<_>>>()?;
        keys.sort_unstable();
        keys.dedup();
        sort_by_value(ring, &mut keys);
        Ok(LineFamily {
            slope,
            witness: None,
            denom: denom as i64,
            keys,
        })
    }

    pub fn slope(&self) -> &QkNum {
        &self.slope
    }

    /// The quadruple that generated the slope, for families built from `S`.
    pub fn witness(&self) -> Option<[i64; 4]> {
        self.witness
    }

    pub fn denominator(&self) -> i64 {
        self.denom
    }

    /// Intercept numerators over [`LineFamily::denominator`], sorted by value.
    pub fn keys(&self) -> &[[i64; 2]] {
        &self.keys
    }

    pub fn len(&self) -> usize {
        self.keys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.keys.is_empty()
    }

    pub fn line(&self, i: usize) -> Line {
        let [c1, c2] = self.keys[i];
        Line {
            slope: self.slope,
            // fields are bounded by FAST_LIMIT and the denominator is positive
            intercept: QkNum::new(c1 as i128, c2 as i128, self.denom as i128)
                .expect("bounded intercept"),
        }
    }

    pub fn lines(&self) -> impl Iterator<Item = Line> + '_ {
        (0..self.keys.len()).map(move |i| self.line(i))
    }
}

fn sort_by_value(ring: &Ring, keys: &mut [[i64; 2]]) {
    keys.sort_by(|x, y| {
        ring.cmp(
            ZkInt::new(x[0] as i128, x[1] as i128),
            ZkInt::new(y[0] as i128, y[1] as i128),
        )
    });
}

/// The deduplicated line set, grouped by slope in increasing slope order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LineSet {
    families: Vec<LineFamily>,
    pairs_raw: u128,
}

impl LineSet {
    pub fn from_families(families: Vec<LineFamily>, pairs_raw: u128) -> Self {
        LineSet {
            families,
            pairs_raw,
        }
    }

    pub fn families(&self) -> &[LineFamily] {
        &self.families
    }

    /// Number of (slope, anchor) pairs before deduplication.
    pub fn pairs_raw(&self) -> u128 {
        self.pairs_raw
    }

    pub fn len(&self) -> usize {
        self.families.iter().map(LineFamily::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.families.iter().all(LineFamily::is_empty)
    }

    /// Lines ordered by slope, then intercept.
    pub fn iter(&self) -> impl Iterator<Item = Line> + '_ {
        self.families.iter().flat_map(LineFamily::lines)
    }

    /// The `i`-th line in [`LineSet::iter`] order.
    pub fn get(&self, mut i: usize) -> Option<Line> {
        for f in &self.families {
            if i < f.len() {
                return Some(f.line(i));
            }
            i -= f.len();
        }
        None
    }
}

/// `(min, max)` of `coef·x` over `x ∈ [lo, hi]`.
fn linear_span(coef: i128, lo: i128, hi: i128) -> (i128, i128) {
    let (x, y) = (coef * lo, coef * hi);
    (x.min(y), x.max(y))
}

fn small(v: i128) -> Result<i64> {
    if v.abs() < FAST_LIMIT {
        Ok(v as i64)
    } else {
        Err(Error::Overflow)
    }
}

/// Distinct intercept numerators `d·b − u·a` for `a, b` ranging over the grid,
/// where `u / d` is the canonical slope. Sorted by real value.
///
/// With anchors equal to the full grid this enumerates every line of the
/// slope that meets `P`.
pub fn family_intercepts(
    ring: &Ring,
    slope: &QkNum,
    anchors: &GridParams,
) -> Result<Vec<[i64; 2]>> {
    let k = ring.k() as i128;
    let d = slope.denominator();
    let u = slope.numerator();
    let s = anchors.side as i128;
    let (lo, hi) = (-s, s - 1);

    // c₁ = d·b₁ − u₁·a₁ − k·u₂·a₂,  c₂ = d·b₂ − u₂·a₁ − u₁·a₂
    let db = linear_span(d, lo, hi);
    let spans1 = [db, linear_span(-u.a, lo, hi), linear_span(-k * u.b, lo, hi)];
    let spans2 = [db, linear_span(-u.b, lo, hi), linear_span(-u.a, lo, hi)];
    let min1: i128 = spans1.iter().map(|p| p.0).sum();
    let max1: i128 = spans1.iter().map(|p| p.1).sum();
    let min2: i128 = spans2.iter().map(|p| p.0).sum();
    let max2: i128 = spans2.iter().map(|p| p.1).sum();
    for v in [min1, max1, min2, max2, k * u.b, d] {
        small(v)?;
    }
    let (d, u1, ku2, u2) = (d as i64, u.a as i64, (k * u.b) as i64, u.b as i64);
    let (min1, min2) = (min1 as i64, min2 as i64);
    let w1 = (max1 - min1 as i128 + 1) as u128;
    let w2 = (max2 - min2 as i128 + 1) as u128;
    let range = anchors.range();

    let mut keys: Vec<[i64; 2]> = if w1 * w2 <= BITMAP_CELLS {
        let w2 = w2 as i64;
        let cells = (w1 as usize) * (w2 as usize);
        let mut bits = alloc::vec![0u64; cells.div_ceil(64)];
        for a1 in range.clone() {
            for a2 in range.clone() {
                let base1 = -u1 * a1 - ku2 * a2 - min1;
                let base2 = -u2 * a1 - u1 * a2 - min2;
                for b1 in range.clone() {
                    let row = (base1 + d * b1) * w2 + base2;
                    for b2 in range.clone() {
                        let idx = (row + d * b2) as usize;
                        bits[idx >> 6] |= 1 << (idx & 63);
                    }
                }
            }
        }
        let mut out = Vec::new();
        for (wi, &word) in bits.iter().enumerate() {
            let mut w = word;
            while w != 0 {
                let idx = (wi * 64 + w.trailing_zeros() as usize) as i64;
                out.push([idx / w2 + min1, idx % w2 + min2]);
                w &= w - 1;
            }
        }
        out
    } else {
        let mut out = Vec::new();
        for a1 in range.clone() {
            for a2 in range.clone() {
                for b1 in range.clone() {
                    for b2 in range.clone() {
                        out.push([d * b1 - u1 * a1 - ku2 * a2, d * b2 - u2 * a1 - u1 * a2]);
                    }
                }
            }
        }
        out.sort_unstable();
        out.dedup();
        out
    };
    sort_by_value(ring, &mut keys);
    Ok(keys)
}

/// The family of lines of one slope through the anchor grid.
pub fn gen_family(ring: &Ring, slope: &Slope, anchors: &GridParams) -> Result<LineFamily> {
    Ok(LineFamily {
        slope: slope.value,
        witness: Some(slope.witness),
        denom: slope.value.denominator() as i64,
        keys: family_intercepts(ring, &slope.value, anchors)?,
    })
}

/// `L = { y = σ(x − a) + b : (a, b) ∈ A_{N/4}², σ ∈ S }`, deduplicated.
pub fn gen_lines(ring: &Ring, grid: &GridParams, slopes: &[Slope]) -> Result<LineSet> {
    let Some(anchors) = grid.anchors() else {
        return Ok(LineSet::from_families(Vec::new(), 0));
    };
    let families = slopes
        .iter()
        .map(|s| gen_family(ring, s, &anchors))
        .collect::<Result<Vec<_>>>()?;
    Ok(LineSet::from_families(
        families,
        raw_pairs(&anchors, slopes.len()),
    ))
}

/// `|A_{N/4}|² · |S|`.
pub fn raw_pairs(anchors: &GridParams, n_slopes: usize) -> u128 {
    (anchors.card_coords() as u128).pow(2) * n_slopes as u128
}

/// Numeric order on lines: slope first, then intercept.
pub fn cmp_lines(ring: &Ring, x: &Line, y: &Line) -> Ordering {
    ring.cmp_q(&x.slope, &y.slope)
        .then_with(|| ring.cmp_q(&x.intercept, &y.intercept))
}

/// Everything generated for one parameter set.
#[derive(Clone, Debug)]
pub struct Construction {
    pub ring: Ring,
    pub grid: GridParams,
    pub slope_params: SlopeParams,
    pub points: PointSet,
    pub slopes: Vec<Slope>,
    pub lines: LineSet,
}

impl Construction {
    pub fn build(ring: Ring, grid: GridParams, slope_params: SlopeParams) -> Result<Self> {
        let points = gen_points(&ring, grid);
        let slopes = gen_slopes(&ring, &slope_params)?;
        let lines = gen_lines(&ring, &grid, &slopes)?;
        Ok(Construction {
            ring,
            grid,
            slope_params,
            points,
            slopes,
            lines,
        })
    }
}
