//! Acceptance suite: one line per criterion, nonzero exit if any fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use clap::Parser;
use st_forge_cli::config::{resolve, Cutoff, RunConfig};
use st_forge_cli::{commands, pipeline, Cli, Command};
use st_forge_core::applications::{
    additive_energy, dilate, lattice_projection_size, projection_classes,
};
use st_forge_core::construction::family_intercepts;
use st_forge_core::incidence::{line_richness, FamilyCounter, RichnessReport};
use st_forge_core::oracle::{brute_energy, brute_richness, brute_slope_set, sample_indices};
use st_forge_core::{
    gen_coords, gen_slopes, GridParams, LineSet, PointSet, QkNum, Rational, Ring, SlopeParams,
    ZkInt,
};

type Outcome = Result<String, String>;

struct Suite {
    failed: usize,
}

impl Suite {
    fn run(&mut self, id: u32, name: &str, limit: Duration, f: impl FnOnce() -> Outcome) {
        let start = Instant::now();
        let outcome = f();
        self.report(id, name, limit, start.elapsed(), outcome);
    }

    fn report(&mut self, id: u32, name: &str, limit: Duration, took: Duration, outcome: Outcome) {
        let slow = took > limit;
        let (ok, detail) = match outcome {
            Ok(d) if !slow => (true, d),
            Ok(d) => (
                false,
                format!("{d}; over the {:.0} s limit", limit.as_secs_f64()),
            ),
            Err(d) => (false, d),
        };
        if !ok {
            self.failed += 1;
        }
        println!(
            "[{}] {id:>2} {name}: {detail} ({:.2} s)",
            if ok { "PASS" } else { "FAIL" },
            took.as_secs_f64()
        );
    }
}

fn half() -> Cutoff {
    Cutoff { num: 1, den: 2 }
}

fn config(k: i64, side: i64, m: u64) -> RunConfig {
    resolve(
        k,
        None,
        Some(side),
        Some(m),
        None,
        half(),
        SlopeParams::DEFAULT_GCD_CAP,
    )
    .expect("valid config")
}

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn approx(r: &Rational) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// `max / min` over positive rationals.
fn spread(vals: &[Rational]) -> Rational {
    let lo = vals.iter().min().unwrap();
    let hi = vals.iter().max().unwrap();
    hi / lo
}

fn cardinalities() -> Outcome {
    for k in [2, 3, 5, 7] {
        let ring = Ring::new(k).map_err(err)?;
        for s in [4i64, 8, 16] {
            let grid = GridParams::from_side(s).map_err(err)?;
            let a = gen_coords(&ring, &grid);
            let p = PointSet::new(&ring, grid);
            let n_p = p.iter().count() as u128;
            let want_a = 4 * (s as usize).pow(2);
            if a.len() != want_a || n_p != (want_a as u128).pow(2) || p.len() != n_p {
                return Err(format!("k={k} s={s}: |A|={} |P|={n_p}", a.len()));
            }
        }
    }
    Ok("|A| = 4s², |P| = 16s⁴ for k ∈ {2,3,5,7}, s ∈ {4,8,16}".into())
}

fn slope_oracle() -> Outcome {
    let ring = Ring::new(2).map_err(err)?;
    let mut sizes = Vec::new();
    for m in [4, 16, 36] {
        let sp = SlopeParams::new(m, 1, 2, SlopeParams::DEFAULT_GCD_CAP).map_err(err)?;
        let fast: Vec<QkNum> = gen_slopes(&ring, &sp)
            .map_err(err)?
            .iter()
            .map(|s| s.value)
            .collect();
        let mut brute = brute_slope_set(&ring, &sp).map_err(err)?;
        brute.sort_by(|x, y| ring.cmp_q(x, y));
        if fast != brute {
            return Err(format!(
                "M={m}: gen {} values, brute force {}",
                fast.len(),
                brute.len()
            ));
        }
        sizes.push(format!("M={m}: {}", fast.len()));
    }
    Ok(format!("identical sets ({})", sizes.join(", ")))
}

fn slope_scaling() -> Outcome {
    let ring = Ring::new(2).map_err(err)?;
    let mut ratios = Vec::new();
    let mut shown = Vec::new();
    for m in [16u64, 36, 64, 100] {
        let sp = SlopeParams::new(m, 1, 2, SlopeParams::DEFAULT_GCD_CAP).map_err(err)?;
        let n = gen_slopes(&ring, &sp).map_err(err)?.len();
        let r = Rational::new(n as i128, (m * m) as i128);
        shown.push(format!("{n}/{m}² ≈ {:.3}", approx(&r)));
        ratios.push(r);
    }
    let w = spread(&ratios);
    let detail = format!(
        "{}; band width {:.2} (limit 4)",
        shown.join(", "),
        approx(&w)
    );
    if w <= Rational::from_integer(4) {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn richness_oracle(cfg: &RunConfig, lines: &LineSet, rich: &RichnessReport) -> Outcome {
    let ring = &cfg.ring;
    let coords = gen_coords(ring, &cfg.grid);
    let points: Vec<(ZkInt, ZkInt)> = PointSet::new(ring, cfg.grid).iter().collect();
    let sample = sample_indices(lines.len(), 100);
    for &i in &sample {
        let line = lines.get(i).ok_or("sample index out of range")?;
        let x_iter = line_richness(ring, &line, &coords, &cfg.grid).map_err(err)?;
        let brute = brute_richness(ring, &line, &points).map_err(err)?;
        let counted = rich.counts()[i] as u64;
        if x_iter != brute || counted != brute {
            return Err(format!(
                "line {i}: x-iteration {x_iter}, congruence {counted}, point scan {brute}"
            ));
        }
    }
    Ok(format!(
        "{} of {} lines agree exactly (x-iteration, congruence counter, point scan)",
        sample.len(),
        lines.len()
    ))
}

struct SweepPoint {
    side: i64,
    n_lines: usize,
    rich: RichnessReport,
    ratio: Rational,
}

fn sweep_point(side: i64) -> Result<(SweepPoint, Duration), String> {
    let start = Instant::now();
    let cfg = config(2, side, 4);
    let built = pipeline::build(&cfg).map_err(err)?;
    let (rich, sharp) = pipeline::verify(&cfg, &built.lines).map_err(err)?;
    let sharp = sharp.ok_or("empty line set")?;
    let point = SweepPoint {
        side,
        n_lines: built.lines.len(),
        rich,
        ratio: sharp.ratio,
    };
    Ok((point, start.elapsed()))
}

fn uniformity(sweep: &[SweepPoint]) -> Outcome {
    let base = &sweep[0];
    let uniform = Rational::new(base.rich.r_max as i128, base.rich.r_min as i128);
    let mut growth = Vec::new();
    for w in sweep.windows(2) {
        growth.push(w[1].rich.mean / w[0].rich.mean);
    }
    let uniform_ok = uniform <= Rational::from_integer(16);
    let growth_ok = growth
        .iter()
        .all(|g| *g >= Rational::from_integer(3) && *g <= Rational::from_integer(5));
    let detail = format!(
        "s={}: r_max/r_min = {}/{} ≈ {:.2} (limit 16){}; mean richness {} → growth {} (band [3, 5]){}",
        base.side,
        base.rich.r_max,
        base.rich.r_min,
        approx(&uniform),
        if uniform_ok { "" } else { " EXCEEDED" },
        sweep.iter().map(|p| format!("{:.2}", approx(&p.rich.mean))).collect::<Vec<_>>().join(", "),
        growth.iter().map(|g| format!("{:.2}", approx(g))).collect::<Vec<_>>().join(", "),
        if growth_ok { "" } else { " OUT OF BAND" },
    );
    if uniform_ok && growth_ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

/// Pinned floor for the sharpness ratio.
const SHARPNESS_FLOOR: (i128, i128) = (1, 200);

fn sharpness(sweep: &[SweepPoint]) -> Outcome {
    let ratios: Vec<Rational> = sweep.iter().map(|p| p.ratio).collect();
    let w = spread(&ratios);
    let floor = Rational::new(SHARPNESS_FLOOR.0, SHARPNESS_FLOOR.1);
    let detail = format!(
        "|L| = {}; ratio {}; band width {:.2} (limit 10), floor {}/{}",
        sweep
            .iter()
            .map(|p| p.n_lines.to_string())
            .collect::<Vec<_>>()
            .join(", "),
        sweep
            .iter()
            .map(|p| format!("s={}: {:.4}", p.side, approx(&p.ratio)))
            .collect::<Vec<_>>()
            .join(", "),
        approx(&w),
        SHARPNESS_FLOOR.0,
        SHARPNESS_FLOOR.1,
    );
    if w <= Rational::from_integer(10) && ratios.iter().all(|r| *r >= floor) {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn energy_identity() -> Outcome {
    let cfg = config(2, 8, 4);
    let ring = &cfg.ring;
    let slopes = gen_slopes(ring, &cfg.slopes).map_err(err)?;
    let rep = pipeline::energy(&cfg, &slopes).map_err(err)?;
    // r(v) = #{(a, b) : a + x·b = v} is the richness of the line of slope −x
    // and intercept v through A × A
    let mut by_lines = 0u128;
    for s in &slopes {
        let neg = s.value.checked_neg().map_err(err)?;
        let counter = FamilyCounter::new(ring, &cfg.grid, &neg).map_err(err)?;
        let mut on_p = 0u128;
        for c in family_intercepts(ring, &neg, &cfg.grid).map_err(err)? {
            let r = counter.count(c) as u128;
            on_p += r;
            by_lines += r * r;
        }
        if on_p != cfg.grid.card_points() {
            return Err(format!("slope {}: lines cover {on_p} points", s.value));
        }
    }
    if by_lines != rep.total {
        return Err(format!("energy_sum {} vs line count {by_lines}", rep.total));
    }
    let small = config(2, 2, 4);
    let a = gen_coords(&small.ring, &small.grid);
    let base: Vec<QkNum> = a.iter().map(|&z| z.into()).collect();
    for s in &slopes {
        let xa = dilate(&small.ring, &s.value, &a).map_err(err)?;
        let (fast, brute) = (
            additive_energy(&base, &xa).map_err(err)?,
            brute_energy(&base, &xa).map_err(err)?,
        );
        if fast != brute {
            return Err(format!(
                "s=2, slope {}: {fast} vs quadruple scan {brute}",
                s.value
            ));
        }
    }
    Ok(format!(
        "s=8 total {} equal by both methods (reference floor {}); s=2 matches quadruple scan for {} slopes",
        rep.total,
        rep.reference.floor,
        slopes.len()
    ))
}

fn projection_identity() -> Outcome {
    let cfg = config(2, 8, 4);
    let ring = &cfg.ring;
    let slopes = gen_slopes(ring, &cfg.slopes).map_err(err)?;
    let reps = pipeline::project(&cfg, &slopes).map_err(err)?;
    let mut sizes = Vec::new();
    for (s, r) in slopes.iter().zip(&reps) {
        let family = family_intercepts(ring, &s.value, &cfg.grid)
            .map_err(err)?
            .len() as u64;
        if r.n_classes != family {
            return Err(format!(
                "slope {}: {} classes vs {family} lines",
                s.value, r.n_classes
            ));
        }
        sizes.push(r.n_classes);
    }
    // hand check on the smallest non-trivial grid
    let unit = [0, 1].map(ZkInt::from_int);
    let square = unit.iter().flat_map(|&x| unit.iter().map(move |&y| (x, y)));
    if projection_classes(ring, square, &QkNum::ONE).map_err(err)? != 3 {
        return Err("unit square along slope 1".into());
    }
    let (lo, hi) = (*sizes.iter().min().unwrap(), *sizes.iter().max().unwrap());
    let band = Rational::new(hi as i128, lo as i128);
    let detail = format!(
        "n_classes = family size for all {} slopes; sizes {lo}..{hi}, width {:.2} (limit 4){}; expected ≈ {}",
        slopes.len(),
        approx(&band),
        if band <= Rational::from_integer(4) { "" } else { " EXCEEDED" },
        reps[0].expected.floor,
    );
    if band <= Rational::from_integer(4) {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn lattice() -> Outcome {
    for n in [3u64, 64, 256] {
        let got = lattice_projection_size(n, 1, 1).map_err(err)?;
        if got != 2 * n - 1 {
            return Err(format!("n={n}, slope 1: {got}"));
        }
    }
    let mut shown = Vec::new();
    for (p, q) in [(1, 2), (2, 3)] {
        for n in [64u64, 128] {
            let a = lattice_projection_size(n, p, q).map_err(err)?;
            let b = lattice_projection_size(2 * n, p, q).map_err(err)?;
            let r = Rational::new(b as i128, a as i128);
            shown.push(format!("{p}/{q} n={n}: {:.3}", approx(&r)));
            if r < Rational::new(18, 10) || r > Rational::new(21, 10) {
                return Err(format!("{p}/{q} n={n}: size(2n)/size(n) = {b}/{a}"));
            }
        }
    }
    Ok(format!(
        "2n−1 for n ∈ {{3, 64, 256}}; doubling ratios {}",
        shown.join(", ")
    ))
}

fn determinism() -> Outcome {
    let dir = tempfile::tempdir().map_err(err)?;
    let mut files = Vec::new();
    for run in 0..2 {
        let path = dir.path().join(format!("sweep{run}.csv"));
        let cli = Cli::try_parse_from([
            "st-forge",
            "sweep",
            "--side",
            "4,8,12",
            "--M",
            "4,9",
            "--out",
            path.to_str().ok_or("temp path")?,
        ])
        .map_err(err)?;
        let Command::Sweep(args) = &cli.command else {
            unreachable!()
        };
        commands::sweep(args).map_err(err)?;
        files.push(std::fs::read(&path).map_err(err)?);
    }
    if files[0] == files[1] {
        Ok(format!(
            "two sweep runs wrote identical {}-byte files",
            files[0].len()
        ))
    } else {
        Err("sweep outputs differ".into())
    }
}

fn main() -> ExitCode {
    let mut suite = Suite { failed: 0 };
    let secs = Duration::from_secs;

    suite.run(1, "cardinality exactness", secs(1), cardinalities);
    suite.run(2, "slope-set oracle equivalence", secs(30), slope_oracle);
    suite.run(3, "slope-set scaling", secs(120), slope_scaling);

    // criteria 4-6 share the s = 16, 32, 64 line sets
    let mut sweep = Vec::new();
    let mut sweep_time = Duration::ZERO;
    let mut sweep_err = None;
    for side in [16, 32, 64] {
        match sweep_point(side) {
            Ok((p, t)) => {
                sweep_time += t;
                sweep.push(p);
            }
            Err(e) => {
                sweep_err = Some(format!("s={side}: {e}"));
                break;
            }
        }
    }

    let start = Instant::now();
    let outcome = match (&sweep_err, sweep.first()) {
        (None, Some(p)) => {
            let cfg = config(2, p.side, 4);
            pipeline::build(&cfg)
                .map_err(err)
                .and_then(|b| richness_oracle(&cfg, &b.lines, &p.rich))
        }
        _ => Err(sweep_err.clone().unwrap_or_default()),
    };
    suite.report(
        4,
        "richness oracle equivalence",
        secs(60),
        start.elapsed(),
        outcome,
    );

    let shared = |f: fn(&[SweepPoint]) -> Outcome| match &sweep_err {
        None => f(&sweep),
        Some(e) => Err(e.clone()),
    };
    suite.report(
        5,
        "richness uniformity and scaling",
        secs(300),
        sweep_time,
        shared(uniformity),
    );
    suite.report(
        6,
        "sharpness against the incidence bound",
        secs(300),
        sweep_time,
        shared(sharpness),
    );

    suite.run(7, "energy identity", secs(120), energy_identity);
    suite.run(8, "projection identity", secs(120), projection_identity);
    suite.run(9, "lattice projections", secs(30), lattice);
    suite.run(10, "determinism", secs(60), determinism);

    println!("{} of 10 criteria passed", 10 - suite.failed);
    if suite.failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
