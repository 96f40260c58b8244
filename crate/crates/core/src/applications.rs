//! Projection sizes and additive energies computed from the construction.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec;
use alloc::vec::Vec;

use num_integer::Integer;

use crate::arith::{QkNum, Ring, ZkInt};
use crate::construction::{PointSet, Slope};
use crate::error::{Error, Result};

/// Integer bracket `floor ≤ √radicand ≤ ceil` of an irrational reference value.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RootBracket {
    pub radicand: u128,
    pub floor: u128,
    pub ceil: u128,
}

impl RootBracket {
    pub fn new(radicand: u128) -> Self {
        let floor = radicand.isqrt();
        let ceil = if floor * floor == radicand {
            floor
        } else {
            floor + 1
        };
        RootBracket {
            radicand,
            floor,
            ceil,
        }
    }

    pub fn is_exact(&self) -> bool {
        self.floor == self.ceil
    }
}

/// Size of the projection of `P` along one slope.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ProjectionReport {
    pub slope: QkNum,
    pub n_classes: u64,
    /// `√p · n` with `p = |S|` and `n = |A|`.
    pub expected: RootBracket,
}

/// `|{ y − slope·x : (x, y) ∈ points }|`, keyed by canonical values.
pub fn projection_classes<I>(ring: &Ring, points: I, slope: &QkNum) -> Result<u64>
where
    I: IntoIterator<Item = (ZkInt, ZkInt)>,
{
    let mut classes = BTreeSet::new();
    for (x, y) in points {
        classes.insert(QkNum::from(y).checked_sub(&ring.mul_qz(slope, x)?)?);
    }
    Ok(classes.len() as u64)
}

pub fn project(
    ring: &Ring,
    points: &PointSet,
    slope: &QkNum,
    n_slopes: usize,
) -> Result<ProjectionReport> {
    let n = points.coords().len() as u128;
    let radicand = (n_slopes as u128)
        .checked_mul(n * n)
        .ok_or(Error::Overflow)?;
    Ok(ProjectionReport {
        slope: *slope,
        n_classes: projection_classes(ring, points.iter(), slope)?,
        expected: RootBracket::new(radicand),
    })
}

/// One report per slope of `S`.
pub fn project_all(
    ring: &Ring,
    points: &PointSet,
    slopes: &[Slope],
) -> Result<Vec<ProjectionReport>> {
    slopes
        .iter()
        .map(|s| project(ring, points, &s.value, slopes.len()))
        .collect()
}

/// `|{ q·y − p·x : x, y ∈ {0, …, n−1} }|` for a reduced direction `p/q`.
pub fn lattice_projection_size(n: u64, p: i64, q: i64) -> Result<u64> {
    if n == 0 {
        return Err(Error::InvalidParameter("lattice side n must be at least 1"));
    }
    if q == 0 {
        return Err(Error::InvalidParameter(
            "projection slope denominator q must be nonzero",
        ));
    }
    if p.gcd(&q) != 1 {
        return Err(Error::NotCoprime { p, q });
    }
    let top = (n - 1) as i128;
    let (p, q) = (p as i128, q as i128);
    let lo = (q * top).min(0) + (-p * top).min(0);
    let hi = (q * top).max(0) + (-p * top).max(0);
    let width = usize::try_from(hi - lo + 1).map_err(|_| Error::Overflow)?;
    let mut seen = vec![false; width];
    for y in 0..=top {
        for x in 0..=top {
            seen[(q * y - p * x - lo) as usize] = true;
        }
    }
    Ok(seen.iter().filter(|&&b| b).count() as u64)
}

/// `E⁺(A, B) = Σ_v r(v)²` with `r(v) = |{(a, b) : a + b = v}|`.
pub fn additive_energy(a: &[QkNum], b: &[QkNum]) -> Result<u128> {
    let mut reps: BTreeMap<QkNum, u64> = BTreeMap::new();
    for x in a {
        for y in b {
            *reps.entry(x.checked_add(y)?).or_default() += 1;
        }
    }
    reps.values().try_fold(0u128, |acc, &r| {
        acc.checked_add(r as u128 * r as u128)
            .ok_or(Error::Overflow)
    })
}

/// `E⁺` for two subsets of ℤ[√k].
pub fn additive_energy_zk(a: &[ZkInt], b: &[ZkInt]) -> Result<u128> {
    let a: Vec<QkNum> = a.iter().map(|&z| z.into()).collect();
    let b: Vec<QkNum> = b.iter().map(|&z| z.into()).collect();
    additive_energy(&a, &b)
}

/// `{ x·a : a ∈ A }`.
pub fn dilate(ring: &Ring, x: &QkNum, set: &[ZkInt]) -> Result<Vec<QkNum>> {
    set.iter().map(|&a| ring.mul_qz(x, a)).collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EnergyReport {
    pub per_slope: Vec<(QkNum, u128)>,
    pub total: u128,
    /// `|A|³ · |X|^{1/2}`.
    pub reference: RootBracket,
}

/// `Σ_{x ∈ X} E⁺(A, x·A)` over the slope set `X`.
pub fn energy_sum(ring: &Ring, coords: &[ZkInt], slopes: &[Slope]) -> Result<EnergyReport> {
    let base: Vec<QkNum> = coords.iter().map(|&z| z.into()).collect();
    let mut per_slope = Vec::with_capacity(slopes.len());
    let mut total = 0u128;
    for s in slopes {
        let e = additive_energy(&base, &dilate(ring, &s.value, coords)?)?;
        total = total.checked_add(e).ok_or(Error::Overflow)?;
        per_slope.push((s.value, e));
    }
    Ok(EnergyReport {
        per_slope,
        total,
        reference: energy_reference(coords.len(), slopes.len())?,
    })
}

/// Bracket of `|A|³·|X|^{1/2} = √(|A|⁶·|X|)`.
pub fn energy_reference(card_a: usize, card_x: usize) -> Result<RootBracket> {
    let a = card_a as u128;
    let radicand = a
        .checked_pow(6)
        .and_then(|v| v.checked_mul(card_x as u128))
        .ok_or(Error::Overflow)?;
    Ok(RootBracket::new(radicand))
}
