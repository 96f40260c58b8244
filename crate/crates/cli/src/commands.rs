use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::Path;

use st_forge_core::applications::lattice_projection_size;
use st_forge_core::{gen_coords, gen_slopes};

use crate::config::{
    CommonArgs, Format, GenerateArgs, LatticeArgs, RunConfig, SweepArgs, VerifyArgs,
};
use crate::error::Result;
use crate::pipeline;
use crate::report::{
    self, EnergyDoc, LatticeDoc, ProjectDoc, SweepRow, VerifyReport, SCHEMA_VERSION,
};

/// Buffered writer to a file, or to standard output when `path` is `None`.
fn sink(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn warn_narrow(cfg: &RunConfig) {
    if cfg.slopes.narrow_window() {
        let (lo, hi) = cfg.slopes.magnitudes();
        eprintln!(
            "warning: magnitude window {{{lo}..{hi}}} is narrow for c = {}; the slope set may be small",
            cfg.cutoff
        );
    }
}

pub fn generate(args: &GenerateArgs) -> Result<()> {
    let cfg = args.params.resolve()?;
    warn_narrow(&cfg);
    let built = pipeline::build(&cfg)?;
    let coords = gen_coords(&cfg.ring, &cfg.grid);
    fs::create_dir_all(&args.out)?;
    let ext = args.format.extension();
    let k = cfg.ring.k();
    let mut a = sink(Some(&args.out.join(format!("A.{ext}"))))?;
    report::write_coords(&mut a, k, &coords, args.format)?;
    a.flush()?;
    let mut s = sink(Some(&args.out.join(format!("S.{ext}"))))?;
    report::write_slopes(&mut s, k, &built.slopes, args.format)?;
    s.flush()?;
    let mut l = sink(Some(&args.out.join(format!("L.{ext}"))))?;
    report::write_lines(&mut l, k, built.lines.iter(), args.format)?;
    l.flush()?;
    eprintln!(
        "wrote |A| = {}, |S| = {}, |L| = {} to {}",
        coords.len(),
        built.slopes.len(),
        built.lines.len(),
        args.out.display()
    );
    Ok(())
}

pub fn verify(args: &VerifyArgs) -> Result<()> {
    let cfg = args.common.params.resolve()?;
    warn_narrow(&cfg);
    let built = pipeline::build(&cfg)?;
    let (rich, sharp) = pipeline::verify(&cfg, &built.lines)?;
    let oracle = if args.oracle {
        Some(pipeline::oracle_check(&cfg, &built, &rich)?)
    } else {
        None
    };
    let mut out = sink(args.common.out.as_deref())?;
    match args.common.format {
        Format::Json => {
            let doc = VerifyReport::new(
                &cfg,
                &built,
                &rich,
                sharp.as_ref(),
                oracle.as_ref(),
                args.per_line,
            );
            report::write_json(&mut out, &doc)?;
        }
        Format::Csv => {
            let row = SweepRow::new(&cfg, &built, &rich, sharp.as_ref());
            report::write_sweep(&mut out, &[row], Format::Csv)?;
        }
    }
    out.flush()?;
    Ok(())
}

/// Computes one sweep row per configuration, in order.
pub fn sweep_rows(cfgs: &[RunConfig]) -> Result<Vec<SweepRow>> {
    cfgs.iter()
        .map(|cfg| {
            warn_narrow(cfg);
            let built = pipeline::build(cfg)?;
            let (rich, sharp) = pipeline::verify(cfg, &built.lines)?;
            Ok(SweepRow::new(cfg, &built, &rich, sharp.as_ref()))
        })
        .collect()
}

pub fn sweep(args: &SweepArgs) -> Result<()> {
    let rows = sweep_rows(&args.resolve()?)?;
    let mut out = sink(args.out.as_deref())?;
    report::write_sweep(&mut out, &rows, args.format)?;
    out.flush()?;
    Ok(())
}

pub fn energy(args: &CommonArgs) -> Result<()> {
    let cfg = args.params.resolve()?;
    warn_narrow(&cfg);
    let slopes = gen_slopes(&cfg.ring, &cfg.slopes)?;
    let rep = pipeline::energy(&cfg, &slopes)?;
    let mut out = sink(args.out.as_deref())?;
    match args.format {
        Format::Json => report::write_json(&mut out, &EnergyDoc::new(&cfg, &rep))?,
        Format::Csv => {
            let mut w = csv::Writer::from_writer(&mut out);
            w.write_record(["slope_a", "slope_b", "slope_d", "energy"])?;
            for (s, e) in &rep.per_slope {
                let q = report::Qk::from(*s);
                w.write_record([
                    q.a.to_string(),
                    q.b.to_string(),
                    q.d.to_string(),
                    e.to_string(),
                ])?;
            }
            w.flush()?;
        }
    }
    out.flush()?;
    Ok(())
}

pub fn project(args: &CommonArgs) -> Result<()> {
    let cfg = args.params.resolve()?;
    warn_narrow(&cfg);
    let slopes = gen_slopes(&cfg.ring, &cfg.slopes)?;
    let reps = pipeline::project(&cfg, &slopes)?;
    let mut out = sink(args.out.as_deref())?;
    match args.format {
        Format::Json => report::write_json(&mut out, &ProjectDoc::new(&cfg, &reps))?,
        Format::Csv => {
            let mut w = csv::Writer::from_writer(&mut out);
            w.write_record(["slope_a", "slope_b", "slope_d", "n_classes"])?;
            for r in &reps {
                let q = report::Qk::from(r.slope);
                w.write_record([
                    q.a.to_string(),
                    q.b.to_string(),
                    q.d.to_string(),
                    r.n_classes.to_string(),
                ])?;
            }
            w.flush()?;
        }
    }
    out.flush()?;
    Ok(())
}

pub fn lattice(args: &LatticeArgs) -> Result<()> {
    let size = lattice_projection_size(args.n, args.p, args.q)?;
    let doc = LatticeDoc {
        schema_version: SCHEMA_VERSION,
        n: args.n,
        p: args.p,
        q: args.q,
        size,
        ratio_to_n: size as f64 / args.n as f64,
    };
    let mut out = sink(args.out.as_deref())?;
    match args.format {
        Format::Json => report::write_json(&mut out, &doc)?,
        Format::Csv => {
            let mut w = csv::Writer::from_writer(&mut out);
            w.serialize(&doc)?;
            w.flush()?;
        }
    }
    out.flush()?;
    Ok(())
}
