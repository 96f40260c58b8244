//! Brute-force reference computations.
//!
//! These share only the ℤ[√k] / ℚ(√k) arithmetic with the fast paths; none
//! of the generation, deduplication or counting logic is reused. They are
//! slow on purpose and refuse inputs above the caps in [`caps`].

use alloc::vec::Vec;
use core::cmp::Ordering;

use num_integer::Integer;

use crate::arith::{QkNum, Ring, ZkInt};
use crate::construction::{Line, SlopeParams};
use crate::error::{Error, Result};

/// Size limits for every oracle, in one place.
pub mod caps {
    /// Points scanned per call of [`super::brute_richness`] and friends.
    pub const MAX_SCAN_POINTS: usize = 1 << 20;
    /// Largest `t = ⌊√M⌋` for [`super::brute_slope_set`] (`(2t)⁴` quadruples).
    pub const MAX_SLOPE_T: i64 = 12;
    /// Largest `|A|·|B|` for the quadruple scan in [`super::brute_energy`].
    pub const MAX_ENERGY_PAIRS: usize = 10_000;
}

fn cap_exceeded() -> Error {
    Error::InvalidParameter("input exceeds the oracle size cap")
}

/// Points `(x, y)` of `points` with `slope·x + intercept = y`, by direct evaluation.
pub fn brute_richness(ring: &Ring, line: &Line, points: &[(ZkInt, ZkInt)]) -> Result<u64> {
    if points.len() > caps::MAX_SCAN_POINTS {
        return Err(cap_exceeded());
    }
    let (u, d) = (line.slope.numerator(), line.slope.denominator());
    let (w, e) = (line.intercept.numerator(), line.intercept.denominator());
    let wd = w.checked_scale(d)?;
    let de = d.checked_mul(e).ok_or(Error::Overflow)?;
    let mut count = 0;
    for &(x, y) in points {
        // slope·x + intercept = y  ⇔  u·x·e + w·d = y·d·e
        let lhs = ring.mul(u, x)?.checked_scale(e)?.checked_add(wd)?;
        if lhs == y.checked_scale(de)? {
            count += 1;
        }
    }
    Ok(count)
}

/// The slope set by exhaustive enumeration with pairwise deduplication.
///
/// Two quadruples give the same slope iff `p·q' = p'·q` in ℤ[√k]; no
/// canonical form is used for the comparison. The values returned are in
/// discovery order.
pub fn brute_slope_set(ring: &Ring, sp: &SlopeParams) -> Result<Vec<QkNum>> {
    let (lo, hi) = sp.magnitudes();
    if hi > caps::MAX_SLOPE_T {
        return Err(cap_exceeded());
    }
    let cap = sp.gcd_cap() as i128;
    let mut signed = Vec::new();
    for m in lo..=hi {
        signed.push(m as i128);
        signed.push(-(m as i128));
    }
    let mut reps: Vec<(ZkInt, ZkInt)> = Vec::new();
    for &p1 in &signed {
        for &p2 in &signed {
            for &q1 in &signed {
                for &q2 in &signed {
                    let p = ZkInt::new(p1, p2);
                    let q = ZkInt::new(q1, q2);
                    let np = ring.norm(p)?.abs();
                    let nq = ring.norm(q)?.abs();
                    if np.gcd(&nq) > cap || p1.abs().gcd(&p2.abs()) > cap {
                        continue;
                    }
                    let mut fresh = true;
                    for &(rp, rq) in &reps {
                        if ring.mul(p, rq)? == ring.mul(rp, q)? {
                            fresh = false;
                            break;
                        }
                    }
                    if fresh {
                        reps.push((p, q));
                    }
                }
            }
        }
    }
    reps.into_iter().map(|(p, q)| ring.ratio(p, q)).collect()
}

/// `E⁺(A, B)` by scanning all quadruples.
pub fn brute_energy(a: &[QkNum], b: &[QkNum]) -> Result<u128> {
    if a.len().saturating_mul(b.len()) > caps::MAX_ENERGY_PAIRS {
        return Err(cap_exceeded());
    }
    let mut count = 0u128;
    for a1 in a {
        for b1 in b {
            let lhs = a1.checked_add(b1)?;
            for a2 in a {
                for b2 in b {
                    if lhs == a2.checked_add(b2)? {
                        count += 1;
                    }
                }
            }
        }
    }
    Ok(count)
}

/// Distinct values of `y − slope·x`, counted after sorting by real value.
pub fn brute_projection(ring: &Ring, points: &[(ZkInt, ZkInt)], slope: &QkNum) -> Result<u64> {
    if points.len() > caps::MAX_SCAN_POINTS {
        return Err(cap_exceeded());
    }
    let mut vals = points
        .iter()
        .map(|&(x, y)| QkNum::from(y).checked_sub(&ring.mul_qz(slope, x)?))
        .collect::<Result<Vec<_>>>()?;
    vals.sort_by(|x, y| ring.cmp_q(x, y));
    let distinct = vals
        .windows(2)
        .filter(|w| ring.cmp_q(&w[0], &w[1]) != Ordering::Equal)
        .count();
    Ok(if vals.is_empty() {
        0
    } else {
        distinct as u64 + 1
    })
}

/// Incidences counted point by point: for every point and every slope in
/// use, the line of that slope through the point is looked up in `lines`.
pub fn point_major_incidences(
    ring: &Ring,
    points: &[(ZkInt, ZkInt)],
    lines: &[Line],
) -> Result<u128> {
    if points.len() > caps::MAX_SCAN_POINTS {
        return Err(cap_exceeded());
    }
    let set: alloc::collections::BTreeSet<Line> = lines.iter().copied().collect();
    let slopes: alloc::collections::BTreeSet<QkNum> = lines.iter().map(|l| l.slope).collect();
    let mut total = 0u128;
    for &(x, y) in points {
        for &s in &slopes {
            if set.contains(&Line::through(ring, s, x, y)?) {
                total += 1;
            }
        }
    }
    Ok(total)
}

/// Indices of the points of `points` lying on `line`.
pub fn locus(ring: &Ring, line: &Line, points: &[(ZkInt, ZkInt)]) -> Result<Vec<usize>> {
    let mut out = Vec::new();
    for (i, &(x, y)) in points.iter().enumerate() {
        if line.eval(ring, x)? == QkNum::from(y) {
            out.push(i);
        }
    }
    Ok(out)
}

/// Deterministic spot-check sample of `want` indices out of `len`: the first,
/// the last and an even stride in between.
pub fn sample_indices(len: usize, want: usize) -> Vec<usize> {
    if len <= want {
        return (0..len).collect();
    }
    if want <= 1 {
        return (0..want).collect();
    }
    let mut out: Vec<usize> = (0..want).map(|i| i * (len - 1) / (want - 1)).collect();
    out.dedup();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construction::{gen_coords, GridParams};

    fn grid_points(ring: &Ring, side: i64) -> Vec<(ZkInt, ZkInt)> {
        let a = gen_coords(ring, &GridParams::from_side(side).unwrap());
        a.iter()
            .flat_map(|&x| a.iter().map(move |&y| (x, y)))
            .collect()
    }

    #[test]
    fn richness_examples() {
        let ring = Ring::new(2).unwrap();
        let pts = grid_points(&ring, 2);
        let diag = Line {
            slope: QkNum::ONE,
            intercept: QkNum::ZERO,
        };
        assert_eq!(brute_richness(&ring, &diag, &pts).unwrap(), 16);
        let off = Line {
            slope: QkNum::ZERO,
            intercept: QkNum::new(5, 5, 1).unwrap(),
        };
        assert_eq!(brute_richness(&ring, &off, &pts).unwrap(), 0);
    }

    #[test]
    fn energy_examples() {
        let ints = |v: &[i128]| {
            v.iter()
                .map(|&a| QkNum::from(ZkInt::from_int(a)))
                .collect::<Vec<_>>()
        };
        assert_eq!(brute_energy(&ints(&[0, 1]), &ints(&[0, 1])).unwrap(), 6);
        assert_eq!(
            brute_energy(&ints(&[0, 1, 2]), &ints(&[0, 1, 2])).unwrap(),
            19
        );
        let big = ints(&(0..101).collect::<Vec<_>>());
        assert!(brute_energy(&big, &big).is_err());
    }

    #[test]
    fn projection_examples() {
        let ring = Ring::new(2).unwrap();
        let unit = [0, 1].map(ZkInt::from_int);
        let sq: Vec<_> = unit
            .iter()
            .flat_map(|&x| unit.iter().map(move |&y| (x, y)))
            .collect();
        assert_eq!(brute_projection(&ring, &sq, &QkNum::ONE).unwrap(), 3);
        assert_eq!(brute_projection(&ring, &sq, &QkNum::ZERO).unwrap(), 2);
        assert_eq!(brute_projection(&ring, &[], &QkNum::ZERO).unwrap(), 0);
    }

    #[test]
    fn slope_set_filters() {
        let ring = Ring::new(2).unwrap();
        let loose = brute_slope_set(&ring, &SlopeParams::new(4, 1, 2, 5).unwrap()).unwrap();
        let tight = brute_slope_set(&ring, &SlopeParams::new(4, 1, 2, 1).unwrap()).unwrap();
        assert!(tight.iter().all(|v| loose.contains(v)));
        assert!(tight.len() < loose.len());
        // t = 2, c = 0.95: singleton interval {2}
        let single = brute_slope_set(&ring, &SlopeParams::new(4, 19, 20, 5).unwrap()).unwrap();
        assert!(!single.is_empty());
        assert!(brute_slope_set(&ring, &SlopeParams::new(13 * 13, 1, 2, 5).unwrap()).is_err());
    }

    #[test]
    fn samples() {
        assert_eq!(sample_indices(10, 3), [0, 4, 9]);
        assert_eq!(sample_indices(2, 5), [0, 1]);
        assert_eq!(sample_indices(1000, 100).len(), 100);
        assert_eq!(*sample_indices(1000, 100).last().unwrap(), 999);
    }
}
