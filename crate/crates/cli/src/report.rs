//! Serialized report and file formats.
//!
//! Rationals are written as `"num/den"` strings, elements of ℚ(√k) as
//! `{a, b, d}` meaning `(a + b√k)/d`, elements of ℤ[√k] as `{a, b}`.
//! Every JSON document carries `schema_version`.

use std::io::Write;

use serde::Serialize;
use st_forge_core::applications::{EnergyReport, ProjectionReport, RootBracket};
use st_forge_core::incidence::{RichnessReport, SharpnessReport};
use st_forge_core::{Line, QkNum, Rational, Slope, ZkInt};

use crate::config::{Format, RunConfig};
use crate::error::Result;
use crate::pipeline::{Built, OracleCheck};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, Serialize, PartialEq, Eq)]
pub struct Zk {
    pub a: i128,
    pub b: i128,
}

impl From<ZkInt> for Zk {
    fn from(z: ZkInt) -> Self {
        Zk { a: z.a, b: z.b }
    }
}

#[derive(Clone, Copy, Debug, Serialize, PartialEq, Eq)]
pub struct Qk {
    pub a: i128,
    pub b: i128,
    pub d: i128,
}

impl From<QkNum> for Qk {
    fn from(q: QkNum) -> Self {
        let n = q.numerator();
        Qk {
            a: n.a,
            b: n.b,
            d: q.denominator(),
        }
    }
}

pub fn ratio_str(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Decimal approximation for human readers; never used in a decision.
pub fn ratio_f64(r: &Rational) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

#[derive(Debug, Serialize)]
pub struct Params {
    pub k: i64,
    pub s: i64,
    #[serde(rename = "N_eff")]
    pub n_eff: i64,
    #[serde(rename = "M")]
    pub m: u64,
    pub c: String,
    pub gcd_cap: u64,
}

impl From<&RunConfig> for Params {
    fn from(cfg: &RunConfig) -> Self {
        Params {
            k: cfg.ring.k(),
            s: cfg.grid.side(),
            n_eff: cfg.grid.scale(),
            m: cfg.slopes.m(),
            c: cfg.cutoff.to_string(),
            gcd_cap: cfg.slopes.gcd_cap(),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct Bracket {
    pub radicand: String,
    pub floor: String,
    pub ceil: String,
}

impl From<RootBracket> for Bracket {
    fn from(b: RootBracket) -> Self {
        Bracket {
            radicand: b.radicand.to_string(),
            floor: b.floor.to_string(),
            ceil: b.ceil.to_string(),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct Richness {
    pub r_min: u64,
    pub r_max: u64,
    pub total_incidences: String,
    pub mean: String,
    pub target: String,
}

impl From<&RichnessReport> for Richness {
    fn from(r: &RichnessReport) -> Self {
        Richness {
            r_min: r.r_min,
            r_max: r.r_max,
            total_incidences: r.total.to_string(),
            mean: ratio_str(&r.mean),
            target: ratio_str(&r.target),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct Sharpness {
    pub n_points: String,
    pub r: u64,
    pub nominal_r: String,
    pub n_rich_lines: u64,
    pub st_bound: String,
    pub ratio: String,
    pub ratio_approx: f64,
}

impl From<&SharpnessReport> for Sharpness {
    fn from(s: &SharpnessReport) -> Self {
        Sharpness {
            n_points: s.n_points.to_string(),
            r: s.r,
            nominal_r: ratio_str(&s.nominal_r),
            n_rich_lines: s.n_rich_lines,
            st_bound: ratio_str(&s.st_bound),
            ratio: ratio_str(&s.ratio),
            ratio_approx: ratio_f64(&s.ratio),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct LineRichness {
    pub slope: Qk,
    pub intercept: Qk,
    pub richness: u32,
}

#[derive(Debug, Serialize)]
pub struct VerifyReport {
    pub schema_version: u32,
    pub params: Params,
    pub card_a: u64,
    pub card_p: String,
    pub card_s: usize,
    pub pairs_raw: String,
    pub card_l: usize,
    pub richness: Richness,
    pub sharpness: Option<Sharpness>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle_agreement: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle_lines_checked: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle_method: Option<&'static str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle_slope_set_checked: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub per_line: Option<Vec<LineRichness>>,
}

impl VerifyReport {
    pub fn new(
        cfg: &RunConfig,
        built: &Built,
        rich: &RichnessReport,
        sharp: Option<&SharpnessReport>,
        oracle: Option<&OracleCheck>,
        per_line: bool,
    ) -> Self {
        VerifyReport {
            schema_version: SCHEMA_VERSION,
            params: cfg.into(),
            card_a: cfg.grid.card_coords(),
            card_p: cfg.grid.card_points().to_string(),
            card_s: built.slopes.len(),
            pairs_raw: built.lines.pairs_raw().to_string(),
            card_l: built.lines.len(),
            richness: rich.into(),
            sharpness: sharp.map(Into::into),
            oracle_agreement: oracle.map(|_| true),
            oracle_lines_checked: oracle.map(|o| o.lines_checked),
            oracle_method: oracle.map(|o| o.method),
            oracle_slope_set_checked: oracle.map(|o| o.slope_set_checked),
            per_line: per_line.then(|| {
                rich.per_line(&built.lines)
                    .map(|(l, r)| LineRichness {
                        slope: l.slope.into(),
                        intercept: l.intercept.into(),
                        richness: r,
                    })
                    .collect()
            }),
        }
    }
}

/// One sweep row; also the CSV form of a verify report.
#[derive(Debug, Serialize, Clone, PartialEq)]
pub struct SweepRow {
    pub k: i64,
    pub s: i64,
    #[serde(rename = "N_eff")]
    pub n_eff: i64,
    #[serde(rename = "M")]
    pub m: u64,
    pub c: String,
    #[serde(rename = "card_A")]
    pub card_a: u64,
    #[serde(rename = "card_S")]
    pub card_s: usize,
    pub pairs_raw: String,
    #[serde(rename = "card_L")]
    pub card_l: usize,
    pub r_min: u64,
    pub r_max: u64,
    pub mean_richness_num: i128,
    pub mean_richness_den: i128,
    pub st_bound_num: Option<i128>,
    pub st_bound_den: Option<i128>,
    pub ratio_num: Option<i128>,
    pub ratio_den: Option<i128>,
}

impl SweepRow {
    pub fn new(
        cfg: &RunConfig,
        built: &Built,
        rich: &RichnessReport,
        sharp: Option<&SharpnessReport>,
    ) -> Self {
        SweepRow {
            k: cfg.ring.k(),
            s: cfg.grid.side(),
            n_eff: cfg.grid.scale(),
            m: cfg.slopes.m(),
            c: cfg.cutoff.to_string(),
            card_a: cfg.grid.card_coords(),
            card_s: built.slopes.len(),
            pairs_raw: built.lines.pairs_raw().to_string(),
            card_l: built.lines.len(),
            r_min: rich.r_min,
            r_max: rich.r_max,
            mean_richness_num: *rich.mean.numer(),
            mean_richness_den: *rich.mean.denom(),
            st_bound_num: sharp.map(|s| *s.st_bound.numer()),
            st_bound_den: sharp.map(|s| *s.st_bound.denom()),
            ratio_num: sharp.map(|s| *s.ratio.numer()),
            ratio_den: sharp.map(|s| *s.ratio.denom()),
        }
    }
}

pub const SWEEP_HEADER_COMMENT: &str =
    "# st-forge sweep, schema_version 1; rationals split into _num/_den columns";

#[derive(Debug, Serialize)]
pub struct SweepReport<'a> {
    pub schema_version: u32,
    pub rows: &'a [SweepRow],
}

pub fn write_sweep(out: &mut dyn Write, rows: &[SweepRow], format: Format) -> Result<()> {
    match format {
        Format::Json => write_json(
            out,
            &SweepReport {
                schema_version: SCHEMA_VERSION,
                rows,
            },
        ),
        Format::Csv => {
            writeln!(out, "{SWEEP_HEADER_COMMENT}")?;
            let mut w = csv::Writer::from_writer(out);
            for r in rows {
                w.serialize(r)?;
            }
            w.flush()?;
            Ok(())
        }
    }
}

#[derive(Debug, Serialize)]
pub struct SlopeEnergy {
    pub slope: Qk,
    pub energy: String,
}

#[derive(Debug, Serialize)]
pub struct EnergyDoc {
    pub schema_version: u32,
    pub params: Params,
    pub card_a: u64,
    pub card_s: usize,
    pub total: String,
    pub reference: Bracket,
    pub per_slope: Vec<SlopeEnergy>,
}

impl EnergyDoc {
    pub fn new(cfg: &RunConfig, rep: &EnergyReport) -> Self {
        EnergyDoc {
            schema_version: SCHEMA_VERSION,
            params: cfg.into(),
            card_a: cfg.grid.card_coords(),
            card_s: rep.per_slope.len(),
            total: rep.total.to_string(),
            reference: rep.reference.into(),
            per_slope: rep
                .per_slope
                .iter()
                .map(|&(s, e)| SlopeEnergy {
                    slope: s.into(),
                    energy: e.to_string(),
                })
                .collect(),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct ProjectionRow {
    pub slope: Qk,
    pub n_classes: u64,
}

#[derive(Debug, Serialize)]
pub struct ProjectDoc {
    pub schema_version: u32,
    pub params: Params,
    pub card_p: String,
    pub card_s: usize,
    pub expected: Option<Bracket>,
    pub projections: Vec<ProjectionRow>,
}

impl ProjectDoc {
    pub fn new(cfg: &RunConfig, reps: &[ProjectionReport]) -> Self {
        ProjectDoc {
            schema_version: SCHEMA_VERSION,
            params: cfg.into(),
            card_p: cfg.grid.card_points().to_string(),
            card_s: reps.len(),
            expected: reps.first().map(|r| r.expected.into()),
            projections: reps
                .iter()
                .map(|r| ProjectionRow {
                    slope: r.slope.into(),
                    n_classes: r.n_classes,
                })
                .collect(),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct LatticeDoc {
    pub schema_version: u32,
    pub n: u64,
    pub p: i64,
    pub q: i64,
    pub size: u64,
    pub ratio_to_n: f64,
}

// Flat CSV rows for the generated sets.

#[derive(Debug, Serialize)]
struct CoordRow {
    a: i128,
    b: i128,
}

#[derive(Debug, Serialize)]
struct SlopeRow {
    a: i128,
    b: i128,
    d: i128,
    p1: i64,
    p2: i64,
    q1: i64,
    q2: i64,
}

#[derive(Debug, Serialize)]
struct LineRow {
    slope_a: i128,
    slope_b: i128,
    slope_d: i128,
    intercept_a: i128,
    intercept_b: i128,
    intercept_d: i128,
}

#[derive(Debug, Serialize)]
struct SetDoc<'a, T> {
    schema_version: u32,
    k: i64,
    set: &'a str,
    rows: T,
}

#[derive(Debug, Serialize)]
struct SlopeJson {
    value: Qk,
    witness: [i64; 4],
}

#[derive(Debug, Serialize)]
struct LineJson {
    slope: Qk,
    intercept: Qk,
}

pub fn write_json<T: Serialize>(out: &mut dyn Write, value: &T) -> Result<()> {
    serde_json::to_writer_pretty(&mut *out, value)?;
    writeln!(out)?;
    Ok(())
}

fn write_csv<T: Serialize>(out: &mut dyn Write, rows: impl Iterator<Item = T>) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_coords(out: &mut dyn Write, k: i64, coords: &[ZkInt], format: Format) -> Result<()> {
    match format {
        Format::Json => {
            let rows: Vec<Zk> = coords.iter().map(|&z| z.into()).collect();
            write_json(
                out,
                &SetDoc {
                    schema_version: SCHEMA_VERSION,
                    k,
                    set: "A",
                    rows,
                },
            )
        }
        Format::Csv => write_csv(out, coords.iter().map(|z| CoordRow { a: z.a, b: z.b })),
    }
}

pub fn write_slopes(out: &mut dyn Write, k: i64, slopes: &[Slope], format: Format) -> Result<()> {
    match format {
        Format::Json => {
            let rows: Vec<SlopeJson> = slopes
                .iter()
                .map(|s| SlopeJson {
                    value: s.value.into(),
                    witness: s.witness,
                })
                .collect();
            write_json(
                out,
                &SetDoc {
                    schema_version: SCHEMA_VERSION,
                    k,
                    set: "S",
                    rows,
                },
            )
        }
        Format::Csv => write_csv(
            out,
            slopes.iter().map(|s| {
                let v = Qk::from(s.value);
                let [p1, p2, q1, q2] = s.witness;
                SlopeRow {
                    a: v.a,
                    b: v.b,
                    d: v.d,
                    p1,
                    p2,
                    q1,
                    q2,
                }
            }),
        ),
    }
}

pub fn write_lines(
    out: &mut dyn Write,
    k: i64,
    lines: impl Iterator<Item = Line>,
    format: Format,
) -> Result<()> {
    match format {
        Format::Json => {
            let rows: Vec<LineJson> = lines
                .map(|l| LineJson {
                    slope: l.slope.into(),
                    intercept: l.intercept.into(),
                })
                .collect();
            write_json(
                out,
                &SetDoc {
                    schema_version: SCHEMA_VERSION,
                    k,
                    set: "L",
                    rows,
                },
            )
        }
        Format::Csv => write_csv(
            out,
            lines.map(|l| {
                let (s, i) = (Qk::from(l.slope), Qk::from(l.intercept));
                LineRow {
                    slope_a: s.a,
                    slope_b: s.b,
                    slope_d: s.d,
                    intercept_a: i.a,
                    intercept_b: i.b,
                    intercept_d: i.d,
                }
            }),
        ),
    }
}
