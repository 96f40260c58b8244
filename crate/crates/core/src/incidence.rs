//! Incidence and richness counting over `(P, L)` and the sharpness ratio
//! against the bound `n²/r³ + n/r`.
//!
//! Two exact counters are provided. [`line_richness`] walks every `x ∈ A`
//! and evaluates the line in ℚ(√k). [`FamilyCounter`] solves the
//! integrality conditions as linear congruences: for each `x₂` it finds the
//! residue class of admissible `x₁` and intersects it with the interval
//! that keeps `y` inside the grid, so a line costs `O(s)` instead of
//! `O(s²)`. Reports use the second; the two are checked against each other
//! and against the point-scan oracle.

use alloc::vec::Vec;

use num_integer::Integer;

use crate::arith::{QkNum, Ring, ZkInt};
use crate::construction::{GridParams, Line, LineFamily, LineSet, FAST_LIMIT};
use crate::error::{Error, Result};
use crate::Rational;

/// Richness of `line` against `A × A`, by iterating `x` over `coords`.
pub fn line_richness(ring: &Ring, line: &Line, coords: &[ZkInt], grid: &GridParams) -> Result<u64> {
    let mut count = 0;
    for &x in coords {
        if let Some(y) = line.eval(ring, x)?.as_zk() {
            if grid.contains(y) {
                count += 1;
            }
        }
    }
    Ok(count)
}

#[inline]
fn floor_div(a: i64, b: i64) -> i64 {
    if b > 0 {
        a.div_euclid(b)
    } else {
        (-a).div_euclid(-b)
    }
}

#[inline]
fn ceil_div(a: i64, b: i64) -> i64 {
    -floor_div(-a, b)
}

/// Inverse of `a` modulo `m` for coprime `a, m`; 0 when `m = 1`.
fn mod_inverse(a: i64, m: i64) -> i64 {
    if m == 1 {
        return 0;
    }
    let e = a.extended_gcd(&m);
    debug_assert_eq!(e.gcd, 1);
    e.x.rem_euclid(m)
}

/// Richness counter for all lines `y = (u·x + c) / l` sharing one slope `u / l`.
#[derive(Clone, Debug)]
pub struct FamilyCounter {
    k: i64,
    side: i64,
    l: i64,
    u1: i64,
    u2: i64,
    // u₁·x₁ ≡ r₁ (mod l) ⇔ x₁ ≡ (r₁/g1)·inv1 (mod m1), solvable iff g1 | r₁
    g1: i64,
    m1: i64,
    inv1: i64,
    // then x₁ = x₀ + m1·j with a2·j ≡ r₂ − u₂·x₀ (mod l)
    g2: i64,
    m2: i64,
    inv2: i64,
    period: i64,
    reach1: i64,
    reach2: i64,
}

impl FamilyCounter {
    /// Counter for the canonical slope with intercept numerators over its own
    /// denominator.
    pub fn new(ring: &Ring, grid: &GridParams, slope: &QkNum) -> Result<Self> {
        Self::with_denominator(ring, grid, slope, slope.denominator())
    }

    /// Counter for intercept numerators over `denom`, a multiple of the slope
    /// denominator.
    pub fn with_denominator(
        ring: &Ring,
        grid: &GridParams,
        slope: &QkNum,
        denom: i128,
    ) -> Result<Self> {
        if denom <= 0 || denom % slope.denominator() != 0 {
            return Err(Error::InvalidParameter(
                "denominator must be a positive multiple of the slope denominator",
            ));
        }
        let u = slope
            .numerator()
            .checked_scale(denom / slope.denominator())?;
        let k = ring.k() as i128;
        let s = grid.side() as i128;
        // y stays in the grid only if |c| ≤ reach; all intermediates are below
        // 4·reach + l·s
        let reaches = || -> Option<(i128, i128)> {
            let (ua, ub) = (u.a.checked_abs()?, u.b.checked_abs()?);
            let r1 = ua
                .checked_add(k.checked_mul(ub)?)?
                .checked_add(denom)?
                .checked_mul(s + 1)?;
            let r2 = ua.checked_add(ub)?.checked_add(denom)?.checked_mul(s + 1)?;
            Some((r1, r2))
        };
        let (reach1, reach2) = reaches().ok_or(Error::Overflow)?;
        let reach = reach1.max(reach2);
        if reach >= FAST_LIMIT / 8 || reach.checked_mul(denom + 1).is_none_or(|v| v >= FAST_LIMIT) {
            return Err(Error::Overflow);
        }
        let (l, u1, u2) = (denom as i64, u.a as i64, u.b as i64);
        let g1 = u1.rem_euclid(l).gcd(&l);
        let m1 = l / g1;
        let inv1 = mod_inverse(u1.rem_euclid(l) / g1, m1);
        let a2 = (u2 * m1).rem_euclid(l);
        let g2 = a2.gcd(&l);
        let m2 = l / g2;
        let inv2 = mod_inverse(a2 / g2, m2);
        Ok(FamilyCounter {
            k: k as i64,
            side: grid.side(),
            l,
            u1,
            u2,
            g1,
            m1,
            inv1,
            g2,
            m2,
            inv2,
            period: m1 * m2,
            reach1: reach1 as i64,
            reach2: reach2 as i64,
        })
    }

    /// Clips `[lo, hi]` to the `x₁` with `−s·l ≤ a·x₁ + c ≤ (s−1)·l`.
    #[inline]
    fn clip(&self, a: i64, c: i64, lo: &mut i64, hi: &mut i64) {
        let bot = -self.side * self.l - c;
        let top = (self.side - 1) * self.l - c;
        match a.signum() {
            0 => {
                if bot > 0 || top < 0 {
                    *hi = *lo - 1;
                }
            }
            1 => {
                *lo = (*lo).max(ceil_div(bot, a));
                *hi = (*hi).min(floor_div(top, a));
            }
            _ => {
                *lo = (*lo).max(ceil_div(top, a));
                *hi = (*hi).min(floor_div(bot, a));
            }
        }
    }

    /// Number of `x ∈ A` with `(u·x + c) / l ∈ A`.
    pub fn count(&self, c: [i64; 2]) -> u64 {
        let [w1, w2] = c;
        if w1.abs() > self.reach1 || w2.abs() > self.reach2 {
            return 0;
        }
        let (l, s) = (self.l, self.side);
        let mut total = 0u64;
        for x2 in -s..s {
            // y·l = (u₁x₁ + c₁', u₂x₁ + c₂')
            let c1 = self.k * self.u2 * x2 + w1;
            let c2 = self.u1 * x2 + w2;
            let r1 = (-c1).rem_euclid(l);
            if r1 % self.g1 != 0 {
                continue;
            }
            let x0 = (r1 / self.g1 * self.inv1).rem_euclid(self.m1);
            let r2 = (-c2 - self.u2 * x0).rem_euclid(l);
            if r2 % self.g2 != 0 {
                continue;
            }
            let j0 = (r2 / self.g2 * self.inv2).rem_euclid(self.m2);
            let rho = x0 + self.m1 * j0;
            let (mut lo, mut hi) = (-s, s - 1);
            self.clip(self.u1, c1, &mut lo, &mut hi);
            self.clip(self.u2, c2, &mut lo, &mut hi);
            if lo <= hi {
                let p = self.period;
                total += (floor_div(hi - rho, p) - floor_div(lo - 1 - rho, p)) as u64;
            }
        }
        total
    }
}

/// Richness of an arbitrary line through [`FamilyCounter`].
pub fn count_line(ring: &Ring, grid: &GridParams, line: &Line) -> Result<u64> {
    let denom = line.slope.denominator().lcm(&line.intercept.denominator());
    let counter = FamilyCounter::with_denominator(ring, grid, &line.slope, denom)?;
    let c = line
        .intercept
        .numerator()
        .checked_scale(denom / line.intercept.denominator())?;
    if c.a.unsigned_abs() > counter.reach1 as u128 || c.b.unsigned_abs() > counter.reach2 as u128 {
        return Ok(0);
    }
    Ok(counter.count([c.a as i64, c.b as i64]))
}

/// Per-line richness of one family, in key order.
pub fn family_richness(ring: &Ring, grid: &GridParams, family: &LineFamily) -> Result<Vec<u32>> {
    let counter =
        FamilyCounter::with_denominator(ring, grid, family.slope(), family.denominator() as i128)?;
    family
        .keys()
        .iter()
        .map(|&c| u32::try_from(counter.count(c)).map_err(|_| Error::Overflow))
        .collect()
}

/// Per-line richness with summary statistics.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RichnessReport {
    counts: Vec<u32>,
    pub r_min: u64,
    pub r_max: u64,
    pub total: u128,
    pub mean: Rational,
    /// The nominal richness `N/M`.
    pub target: Rational,
}

impl RichnessReport {
    /// Aggregates counts listed in [`LineSet::iter`] order.
    pub fn from_counts(counts: Vec<u32>, grid: &GridParams, m: u64) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidParameter("M must be at least 1"));
        }
        let total: u128 = counts.iter().map(|&c| c as u128).sum();
        let r_min = counts.iter().copied().min().unwrap_or(0) as u64;
        let r_max = counts.iter().copied().max().unwrap_or(0) as u64;
        let n = counts.len().max(1) as i128;
        let total_i = i128::try_from(total).map_err(|_| Error::Overflow)?;
        Ok(RichnessReport {
            counts,
            r_min,
            r_max,
            total,
            mean: Rational::new(total_i, n),
            target: Rational::new(grid.scale() as i128, m as i128),
        })
    }

    pub fn counts(&self) -> &[u32] {
        &self.counts
    }

    pub fn n_lines(&self) -> usize {
        self.counts.len()
    }

    /// `(line, richness)` pairs; `lines` must be the set the report was built from.
    pub fn per_line<'a>(&'a self, lines: &'a LineSet) -> impl Iterator<Item = (Line, u32)> + 'a {
        lines.iter().zip(self.counts.iter().copied())
    }
}

/// Richness of every line in `lines` against `P` built on `grid`.
pub fn richness_report(
    ring: &Ring,
    grid: &GridParams,
    m: u64,
    lines: &LineSet,
) -> Result<RichnessReport> {
    let mut counts = Vec::with_capacity(lines.len());
    for f in lines.families() {
        counts.extend(family_richness(ring, grid, f)?);
    }
    RichnessReport::from_counts(counts, grid, m)
}

/// Sum of richness over all lines.
pub fn total_incidences(ring: &Ring, grid: &GridParams, lines: &LineSet) -> Result<u128> {
    let mut total = 0u128;
    for f in lines.families() {
        total += family_richness(ring, grid, f)?
            .iter()
            .map(|&c| c as u128)
            .sum::<u128>();
    }
    Ok(total)
}

/// `n²/r³ + n/r`, exactly.
pub fn st_bound(n: u128, r: u64) -> Result<Rational> {
    if r == 0 {
        return Err(Error::InvalidParameter("richness r must be at least 1"));
    }
    if n == 0 {
        return Err(Error::InvalidParameter("point count n must be at least 1"));
    }
    let n = i128::try_from(n).map_err(|_| Error::Overflow)?;
    let r = r as i128;
    let of = || Error::Overflow;
    let r2 = r.checked_mul(r).ok_or_else(of)?;
    let r3 = r2.checked_mul(r).ok_or_else(of)?;
    // (n² + n·r²) / r³
    let num = n
        .checked_mul(n)
        .and_then(|nn| n.checked_mul(r2).and_then(|nr| nn.checked_add(nr)))
        .ok_or_else(of)?;
    Ok(Rational::new(num, r3))
}

/// How close `|L|` comes to the bound at the observed minimum richness.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SharpnessReport {
    pub n_points: u128,
    /// The richness threshold used: the observed minimum, so every line is r-rich.
    pub r: u64,
    pub nominal_r: Rational,
    pub n_rich_lines: u64,
    pub st_bound: Rational,
    pub ratio: Rational,
}

impl SharpnessReport {
    pub fn from_richness(grid: &GridParams, richness: &RichnessReport) -> Result<Self> {
        let n_lines = richness.n_lines() as u64;
        if n_lines == 0 {
            return Err(Error::EmptyLineSet);
        }
        if richness.r_min == 0 {
            return Err(Error::InvalidParameter(
                "a line of the set misses P entirely",
            ));
        }
        let n_points = grid.card_points();
        let bound = st_bound(n_points, richness.r_min)?;
        let ratio = Rational::new(
            (n_lines as i128)
                .checked_mul(*bound.denom())
                .ok_or(Error::Overflow)?,
            *bound.numer(),
        );
        Ok(SharpnessReport {
            n_points,
            r: richness.r_min,
            nominal_r: richness.target,
            n_rich_lines: n_lines,
            st_bound: bound,
            ratio,
        })
    }
}

pub fn sharpness_report(
    ring: &Ring,
    grid: &GridParams,
    m: u64,
    lines: &LineSet,
) -> Result<SharpnessReport> {
    if lines.is_empty() {
        return Err(Error::EmptyLineSet);
    }
    SharpnessReport::from_richness(grid, &richness_report(ring, grid, m, lines)?)
}
