//! Parallel drivers over slope families. Results are collected in slope
//! order, so output does not depend on the thread count.

use rayon::prelude::*;
use st_forge_core::applications::{self, EnergyReport, ProjectionReport};
use st_forge_core::construction::{gen_family, raw_pairs};
use st_forge_core::incidence::{family_richness, RichnessReport, SharpnessReport};
use st_forge_core::oracle::{self, caps};
use st_forge_core::{gen_coords, gen_slopes, GridParams, LineSet, PointSet, Ring, Slope, ZkInt};

use crate::config::{check_cells, RunConfig};
use crate::error::{CliError, Result};

/// Slope and line sets for one run.
pub struct Built {
    pub slopes: Vec<Slope>,
    pub lines: LineSet,
}

pub fn build_lines(ring: &Ring, grid: &GridParams, slopes: &[Slope]) -> Result<LineSet> {
    let Some(anchors) = grid.anchors() else {
        return Ok(LineSet::from_families(Vec::new(), 0));
    };
    let pairs = raw_pairs(&anchors, slopes.len());
    check_cells(pairs)?;
    let families = slopes
        .par_iter()
        .map(|s| gen_family(ring, s, &anchors))
        .collect::<st_forge_core::Result<Vec<_>>>()?;
    Ok(LineSet::from_families(families, pairs))
}

pub fn build(cfg: &RunConfig) -> Result<Built> {
    let slopes = gen_slopes(&cfg.ring, &cfg.slopes)?;
    let lines = build_lines(&cfg.ring, &cfg.grid, &slopes)?;
    Ok(Built { slopes, lines })
}

pub fn richness(cfg: &RunConfig, lines: &LineSet) -> Result<RichnessReport> {
    check_cells((lines.len() as u128).saturating_mul(cfg.grid.card_coords() as u128))?;
    let per_family = lines
        .families()
        .par_iter()
        .map(|f| family_richness(&cfg.ring, &cfg.grid, f))
        .collect::<st_forge_core::Result<Vec<_>>>()?;
    Ok(RichnessReport::from_counts(
        per_family.concat(),
        &cfg.grid,
        cfg.slopes.m(),
    )?)
}

/// Richness and sharpness in one pass. Sharpness is `None` for an empty line set.
pub fn verify(
    cfg: &RunConfig,
    lines: &LineSet,
) -> Result<(RichnessReport, Option<SharpnessReport>)> {
    let rich = richness(cfg, lines)?;
    let sharp = if lines.is_empty() {
        None
    } else {
        Some(SharpnessReport::from_richness(&cfg.grid, &rich)?)
    };
    Ok((rich, sharp))
}

/// Outcome of the spot check against the brute-force counters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleCheck {
    pub lines_checked: usize,
    pub method: &'static str,
    pub slope_set_checked: bool,
}

pub const ORACLE_SAMPLE: usize = 100;

/// Recounts a deterministic sample of lines with an independent method.
///
/// The full point scan is used while `|P|` fits the oracle cap, x-iteration
/// above it. The slope set is recomputed by brute force when `t` is small
/// enough. Any disagreement is an error.
pub fn oracle_check(cfg: &RunConfig, built: &Built, rich: &RichnessReport) -> Result<OracleCheck> {
    let ring = &cfg.ring;
    let coords = gen_coords(ring, &cfg.grid);
    let point_scan = cfg.grid.card_points() <= caps::MAX_SCAN_POINTS as u128;
    let points: Vec<(ZkInt, ZkInt)> = if point_scan {
        PointSet::new(ring, cfg.grid).iter().collect()
    } else {
        Vec::new()
    };
    let sample = oracle::sample_indices(built.lines.len(), ORACLE_SAMPLE);
    let mismatches: Vec<String> = sample
        .par_iter()
        .map(|&i| -> Result<Option<String>> {
            let line = built.lines.get(i).expect("sample index in range");
            let want = rich.counts()[i] as u64;
            let got = if point_scan {
                oracle::brute_richness(ring, &line, &points)?
            } else {
                st_forge_core::incidence::line_richness(ring, &line, &coords, &cfg.grid)?
            };
            Ok((got != want).then(|| {
                format!(
                    "line {i} ({} x + {}): counted {want}, oracle {got}",
                    line.slope, line.intercept
                )
            }))
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();
    if let Some(first) = mismatches.first() {
        return Err(CliError::OracleMismatch(format!(
            "{} of {} lines disagree; {first}",
            mismatches.len(),
            sample.len()
        )));
    }
    let slope_set_checked = cfg.slopes.t() <= caps::MAX_SLOPE_T;
    if slope_set_checked {
        let mut brute = oracle::brute_slope_set(ring, &cfg.slopes)?;
        brute.sort_by(|x, y| ring.cmp_q(x, y));
        let fast: Vec<_> = built.slopes.iter().map(|s| s.value).collect();
        if brute != fast {
            return Err(CliError::OracleMismatch(format!(
                "slope set has {} values, brute force finds {}",
                fast.len(),
                brute.len()
            )));
        }
    }
    Ok(OracleCheck {
        lines_checked: sample.len(),
        method: if point_scan {
            "point-scan"
        } else {
            "x-iteration"
        },
        slope_set_checked,
    })
}

pub fn energy(cfg: &RunConfig, slopes: &[Slope]) -> Result<EnergyReport> {
    let coords = gen_coords(&cfg.ring, &cfg.grid);
    let n = coords.len() as u128;
    check_cells((slopes.len() as u128).saturating_mul(n * n))?;
    let per_slope = slopes
        .par_iter()
        .map(|s| {
            let e = applications::energy_sum(&cfg.ring, &coords, std::slice::from_ref(s))?;
            Ok(e.per_slope[0])
        })
        .collect::<st_forge_core::Result<Vec<_>>>()?;
    let total = per_slope
        .iter()
        .try_fold(0u128, |acc, &(_, e)| acc.checked_add(e))
        .ok_or(st_forge_core::Error::Overflow)?;
    Ok(EnergyReport {
        per_slope,
        total,
        reference: applications::energy_reference(coords.len(), slopes.len())?,
    })
}

pub fn project(cfg: &RunConfig, slopes: &[Slope]) -> Result<Vec<ProjectionReport>> {
    let points = PointSet::new(&cfg.ring, cfg.grid);
    check_cells((slopes.len() as u128).saturating_mul(points.len()))?;
    Ok(slopes
        .par_iter()
        .map(|s| applications::project(&cfg.ring, &points, &s.value, slopes.len()))
        .collect::<st_forge_core::Result<Vec<_>>>()?)
}
