use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use cst_core::channels::{parse_labels, Selection};
use cst_core::io::{write_pgm, write_png_rgb, GrayDepth};
use cst_core::synth::{crossed_waves, white_noise, WaveSpec};
use cst_core::validate::{run_suite, ValidateOptions};
use cst_core::{assemble, cst_extract, load_gray, render_hsv, write_tensor, CstError, CstParams};
use rayon::prelude::*;
use thiserror::Error;

use crate::{ExtractArgs, PipelineArgs, SynthArgs, SynthKind, ValidateArgs, VizArgs};

/// Highest order accepted on the command line; the library accepts any order >= 1.
pub const MAX_CLI_ORDER: u32 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("order {0} out of range (supported orders are 1-{MAX_CLI_ORDER})")]
    InvalidOrderRange(String),
    #[error("{0}")]
    InvalidArgument(String),
    #[error("{0} of {1} inputs failed")]
    BatchFailed(usize, usize),
}

impl CliError {
    fn class(&self) -> &'static str {
        match self {
            CliError::InvalidOrderRange(_) => "InvalidOrderRange",
            CliError::InvalidArgument(_) => "InvalidArgument",
            CliError::BatchFailed(..) => "BatchFailed",
        }
    }
}

/// Class name printed in the one-line diagnostic.
pub fn error_class(e: &anyhow::Error) -> &'static str {
    for cause in e.chain() {
        if let Some(c) = cause.downcast_ref::<CstError>() {
            return c.class();
        }
        if let Some(c) = cause.downcast_ref::<CliError>() {
            return c.class();
        }
        if cause.is::<std::io::Error>() {
            return "IoError";
        }
    }
    "Error"
}

/// Caps the worker pool at `CST_THREADS` when set.
pub fn configure_threads() -> Result<()> {
    let Ok(value) = std::env::var("CST_THREADS") else {
        return Ok(());
    };
    let n: usize = value
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .with_context(|| format!("CST_THREADS must be a positive integer, got '{value}'"))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()?;
    Ok(())
}

fn parse_orders(list: &str) -> Result<Vec<u32>> {
    let mut orders = Vec::new();
    for item in list.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let n: u32 = item
            .parse()
            .map_err(|_| CliError::InvalidOrderRange(item.to_string()))?;
        if !(1..=MAX_CLI_ORDER).contains(&n) {
            return Err(CliError::InvalidOrderRange(item.to_string()).into());
        }
        orders.push(n);
    }
    if orders.is_empty() {
        return Err(CstError::InvalidOrder("no orders requested".into()).into());
    }
    Ok(orders)
}

fn params(a: &PipelineArgs) -> Result<CstParams> {
    let p = CstParams::default()
        .with_sigmas(a.sigma1, a.sigma2)
        .with_gamma(a.gamma)
        .with_orders(parse_orders(&a.orders)?)
        .with_boundary(a.boundary);
    cst_core::validate_params(&p)?;
    Ok(p)
}

fn is_image(path: &Path) -> bool {
    matches!(
        path.extension()
            .and_then(|e| e.to_str())
            .map(str::to_ascii_lowercase)
            .as_deref(),
        Some("png" | "pgm")
    )
}

fn extract_one(
    input: &Path,
    out: &Path,
    p: &CstParams,
    selection: &Selection,
    a: &ExtractArgs,
) -> Result<Vec<String>> {
    let f = load_gray(input).with_context(|| format!("loading {}", input.display()))?;
    let maps = cst_extract(&f, p)?;
    let stack = assemble(&f, &maps, selection, a.normalize)?;
    write_tensor(&stack, out, a.dtype).with_context(|| format!("writing {}", out.display()))?;
    Ok(stack.labels().iter().map(ToString::to_string).collect())
}

pub fn extract(a: &ExtractArgs) -> Result<ExitCode> {
    let p = params(&a.pipeline)?;
    let selection = match (&a.preset, &a.channels) {
        (_, Some(list)) => Selection::Labels(parse_labels(list)?),
        (Some(name), None) => Selection::Preset(name.clone()),
        (None, None) => Selection::default(),
    };
    // fail early on unknown presets
    selection.labels()?;

    if !a.input.is_dir() {
        for label in extract_one(&a.input, &a.out, &p, &selection, a)? {
            println!("{label}");
        }
        return Ok(ExitCode::SUCCESS);
    }

    fs::create_dir_all(&a.out)?;
    let mut inputs: Vec<PathBuf> = fs::read_dir(&a.input)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.is_file() && is_image(p))
        .collect();
    inputs.sort();
    let results: Vec<(PathBuf, Result<Vec<String>>)> = inputs
        .par_iter()
        .map(|input| {
            let stem = input.file_stem().unwrap_or_default();
            let out = a.out.join(stem).with_extension("npy");
            let r = extract_one(input, &out, &p, &selection, a);
            (out, r)
        })
        .collect();
    let mut failed = 0;
    for (out, r) in &results {
        match r {
            Ok(labels) => println!("{}\t{}", out.display(), labels.join(",")),
            Err(e) => {
                failed += 1;
                eprintln!("error[{}]: {e:#}", error_class(e));
            }
        }
    }
    if failed > 0 {
        return Err(CliError::BatchFailed(failed, results.len()).into());
    }
    Ok(ExitCode::SUCCESS)
}

pub fn viz(a: &VizArgs) -> Result<ExitCode> {
    let p = params(&a.pipeline)?;
    let f = load_gray(&a.input).with_context(|| format!("loading {}", a.input.display()))?;
    if !p.orders.contains(&a.order) {
        return Err(CstError::MissingOrder(a.order).into());
    }
    let maps = cst_extract(&f, &p)?;
    let m = maps
        .iter()
        .find(|m| m.order() == a.order)
        .ok_or(CstError::MissingOrder(a.order))?;
    write_png_rgb(&render_hsv(m), &a.out)
        .with_context(|| format!("writing {}", a.out.display()))?;
    Ok(ExitCode::SUCCESS)
}

fn parse_size(s: &str) -> Result<(usize, usize)> {
    let bad = || CliError::InvalidArgument(format!("size '{s}' must look like 128x96"));
    let (w, h) = s.split_once(['x', 'X']).ok_or_else(bad)?;
    let w: usize = w.trim().parse().map_err(|_| bad())?;
    let h: usize = h.trim().parse().map_err(|_| bad())?;
    if w == 0 || h == 0 {
        return Err(bad().into());
    }
    Ok((w, h))
}

pub fn synth(a: &SynthArgs) -> Result<ExitCode> {
    let (w, h) = parse_size(&a.size)?;
    let depth = match a.depth {
        8 => GrayDepth::Eight,
        16 => GrayDepth::Sixteen,
        d => return Err(CliError::InvalidArgument(format!("depth {d} must be 8 or 16")).into()),
    };
    let thetas: Vec<f64> = a
        .theta
        .split(',')
        .map(|t| t.trim().parse::<f64>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|_| {
            CliError::InvalidArgument(format!("theta '{}' is not a number list", a.theta))
        })?;
    let wave = |theta: f64| WaveSpec {
        amplitude: a.amplitude,
        wavelength: a.wavelength,
        theta,
        phase: a.phase,
    };
    let (field, lo, hi) = match a.kind {
        SynthKind::Noise => (white_noise(w, h, a.seed)?, 0.0, 1.0),
        SynthKind::Wave | SynthKind::Crossed => {
            let specs: Vec<WaveSpec> = if a.kind == SynthKind::Wave {
                vec![wave(thetas[0])]
            } else {
                thetas.iter().map(|&t| wave(t)).collect()
            };
            let peak = a.amplitude * specs.len() as f64;
            (crossed_waves(&specs, w, h)?, -peak, peak)
        }
    };
    write_pgm(&field, &a.out, lo, hi, depth)
        .with_context(|| format!("writing {}", a.out.display()))?;
    Ok(ExitCode::SUCCESS)
}

pub fn validate(a: &ValidateArgs) -> Result<ExitCode> {
    let results = run_suite(ValidateOptions {
        quick: a.quick,
        inject_sign_fault: a.inject_fault,
    })?;
    let width = results.iter().map(|r| r.name.len()).max().unwrap_or(0);
    for r in &results {
        println!(
            "{:<width$}  {}  {:>7.2}s  {}",
            r.name,
            if r.passed { "PASS" } else { "FAIL" },
            r.seconds,
            r.detail
        );
    }
    let failed = results.iter().filter(|r| !r.passed).count();
    println!(
        "{} of {} checks passed",
        results.len() - failed,
        results.len()
    );
    Ok(if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    })
}
