//! The five experiment subcommands. Each one resolves the truncation,
//! runs the core pipeline, and serializes byte-deterministic CSV (plus
//! optional SVG renderings of the same data).

use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use serde::Serialize;
use spectraflow::observables::{histogram, records_from_flow};
use spectraflow::spectra::{
    converge_truncation_capped, find_crossings, sweep, track_lines, SpectralFlow,
};
use spectraflow::FockTruncation;

use crate::config::RunConfig;
use crate::format::sig12;
use crate::svg;
use crate::CliError;

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir).map_err(CliError::Io)?;
    }
    let mut f = fs::File::create(path).map_err(CliError::Io)?;
    f.write_all(contents.as_bytes()).map_err(CliError::Io)
}

fn run_tracked_sweep(
    cfg: &RunConfig,
    grid: &[f64],
    probe_g: f64,
) -> Result<(SpectralFlow, FockTruncation), CliError> {
    let (trunc, _) = cfg.resolve_truncation(probe_g)?;
    let mut flow = sweep(&cfg.params(), grid, cfg.levels, trunc)?;
    track_lines(&mut flow);

    let unresolved = flow.unresolved.iter().filter(|&&u| u).count();
    if unresolved > 0 {
        eprintln!(
            "warning: {unresolved} segment(s) had eigenvector overlap below 0.5; \
             line identities there rely on slope extrapolation"
        );
    }
    for (segment, line) in flow.continuity_violations() {
        eprintln!("warning: line {line} jumps beyond the slope bound on segment {segment}");
    }
    Ok((flow, trunc))
}

/// `spectrum`: eigenvalue flow -> spectrum.csv (+ spectrum.svg).
pub fn cmd_spectrum(cfg: &RunConfig, out_dir: &Path, with_svg: bool) -> Result<(), CliError> {
    let grid = cfg.grid();
    let (flow, trunc) = run_tracked_sweep(cfg, &grid, cfg.g_max)?;

    let mut csv = String::from("g,line_id,sorted_index,energy,parity\n");
    for (k, &g) in grid.iter().enumerate() {
        for line_id in 0..cfg.levels {
            let sorted = flow
                .sorted_position(k, line_id)
                .expect("line ids are a permutation");
            csv.push_str(&format!(
                "{},{},{},{},{}\n",
                sig12(g),
                line_id,
                sorted,
                sig12(flow.energies[k][sorted]),
                flow.parities[k][sorted].value.to_sign()
            ));
        }
    }
    write_file(&out_dir.join("spectrum.csv"), &csv)?;

    if with_svg {
        let lines: Vec<(usize, Vec<(f64, f64)>)> = (0..cfg.levels)
            .map(|line_id| {
                let pts = grid
                    .iter()
                    .enumerate()
                    .map(|(k, &g)| (g, flow.line_energy(k, line_id).unwrap()))
                    .collect();
                (line_id, pts)
            })
            .collect();
        write_file(
            &out_dir.join("spectrum.svg"),
            &svg::line_chart(&lines, "g", "E"),
        )?;
    }

    eprintln!(
        "wrote spectrum.csv ({} points, M = {}, n_cut = {})",
        grid.len(),
        cfg.levels,
        trunc.n_cut()
    );
    Ok(())
}

/// `crossings`: refined gap minima -> crossings.csv.
pub fn cmd_crossings(cfg: &RunConfig, out_dir: &Path, _with_svg: bool) -> Result<(), CliError> {
    let grid = cfg.grid();
    let (flow, trunc) = run_tracked_sweep(cfg, &grid, cfg.g_max)?;
    let scan = find_crossings(&cfg.params(), &flow)?;

    for f in &scan.failures {
        eprintln!(
            "warning: refinement failed for pair {} in [{}, {}]: {}",
            f.pair, f.g_lo, f.g_hi, f.error
        );
    }

    let mut csv = String::from("g_star,energy,line_a,line_b,min_gap,kind\n");
    for c in &scan.crossings {
        csv.push_str(&format!(
            "{},{},{},{},{},{}\n",
            sig12(c.g_star),
            sig12(c.energy),
            c.line_a,
            c.line_b,
            sig12(c.min_gap),
            c.kind.as_str()
        ));
    }
    write_file(&out_dir.join("crossings.csv"), &csv)?;

    eprintln!(
        "wrote crossings.csv ({} candidates, {} true, n_cut = {})",
        scan.crossings.len(),
        scan.crossings
            .iter()
            .filter(|c| c.kind == spectraflow::CrossingKind::TrueCrossing)
            .count(),
        trunc.n_cut()
    );
    Ok(())
}

/// `uncertainty`: per-eigenstate records over the grid -> uncertainty.csv.
pub fn cmd_uncertainty(cfg: &RunConfig, out_dir: &Path, _with_svg: bool) -> Result<(), CliError> {
    let grid = cfg.grid();
    let (flow, trunc) = run_tracked_sweep(cfg, &grid, cfg.g_max)?;
    let records = records_from_flow(&flow)?;

    let mut csv = String::from("g,eigen_index,sx,sz,dsx,dsy,delta\n");
    for (k, &g) in grid.iter().enumerate() {
        for rec in &records[k] {
            csv.push_str(&format!(
                "{},{},{},{},{},{},{}\n",
                sig12(g),
                rec.eigen_index,
                sig12(rec.sx),
                sig12(rec.sz),
                sig12(rec.dsx),
                sig12(rec.dsy),
                sig12(rec.delta)
            ));
        }
    }
    write_file(&out_dir.join("uncertainty.csv"), &csv)?;

    eprintln!(
        "wrote uncertainty.csv ({} points x {} states, n_cut = {})",
        grid.len(),
        cfg.levels,
        trunc.n_cut()
    );
    Ok(())
}

/// `histogram`: distribution of `delta` at `histogram_g` -> histogram.csv
/// (+ histogram.svg).
pub fn cmd_histogram(cfg: &RunConfig, out_dir: &Path, with_svg: bool) -> Result<(), CliError> {
    let (trunc, _) = cfg.resolve_truncation(cfg.histogram_g)?;
    let mut flow = sweep(&cfg.params(), &[cfg.histogram_g], cfg.levels, trunc)?;
    track_lines(&mut flow);
    let records = records_from_flow(&flow)?;
    let hist = histogram(&records[0], cfg.n_bins)?;

    let mut csv = String::from("bin_lo,bin_hi,count,probability\n");
    for b in 0..hist.n_bins() {
        csv.push_str(&format!(
            "{},{},{},{}\n",
            sig12(hist.edges[b]),
            sig12(hist.edges[b + 1]),
            hist.counts[b],
            sig12(hist.probabilities[b])
        ));
    }
    write_file(&out_dir.join("histogram.csv"), &csv)?;

    if with_svg {
        let bins: Vec<(f64, f64, f64)> = (0..hist.n_bins())
            .map(|b| (hist.edges[b], hist.edges[b + 1], hist.probabilities[b]))
            .collect();
        write_file(
            &out_dir.join("histogram.svg"),
            &svg::histogram_chart(&bins, "delta", "probability"),
        )?;
    }

    eprintln!(
        "wrote histogram.csv ({} states at g = {}, modal bin {}, n_cut = {})",
        cfg.levels,
        cfg.histogram_g,
        hist.modal_bin(),
        trunc.n_cut()
    );
    Ok(())
}

#[derive(Serialize)]
struct ConvergeStepOut {
    n_cut_small: usize,
    n_cut_large: usize,
    max_delta: f64,
}

#[derive(Serialize)]
struct ConvergeOut {
    n_cut: usize,
    steps: Vec<ConvergeStepOut>,
}

/// `converge`: run the truncation controller and print one JSON object.
pub fn cmd_converge(cfg: &RunConfig, _out_dir: &Path, _with_svg: bool) -> Result<(), CliError> {
    let report = converge_truncation_capped(
        &cfg.params(),
        cfg.levels,
        cfg.converge_tol,
        cfg.g_max,
        cfg.n_cut_cap,
    )?;
    let out = ConvergeOut {
        n_cut: report.n_cut,
        steps: report
            .steps
            .iter()
            .map(|s| ConvergeStepOut {
                n_cut_small: s.n_cut_small,
                n_cut_large: s.n_cut_large,
                max_delta: s.max_delta,
            })
            .collect(),
    };
    println!(
        "{}",
        serde_json::to_string(&out).expect("report serialization")
    );
    Ok(())
}

/// Dispatch by subcommand name.
pub fn run(
    name: &str,
    cfg: &RunConfig,
    out_dir: Option<PathBuf>,
    with_svg: bool,
) -> Result<(), CliError> {
    let out_dir = out_dir.unwrap_or_else(|| PathBuf::from(&cfg.out_dir));
    match name {
        "spectrum" => cmd_spectrum(cfg, &out_dir, with_svg),
        "crossings" => cmd_crossings(cfg, &out_dir, with_svg),
        "uncertainty" => cmd_uncertainty(cfg, &out_dir, with_svg),
        "histogram" => cmd_histogram(cfg, &out_dir, with_svg),
        "converge" => cmd_converge(cfg, &out_dir, with_svg),
        other => Err(CliError::Config(format!("unknown subcommand {other}"))),
    }
}
