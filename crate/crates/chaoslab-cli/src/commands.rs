//! The six subcommands. All floating-point output uses nine significant
//! digits (`{:.8e}`), so files are byte-identical across runs and across
//! platforms with IEEE-754 doubles.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use chaoslab::builtin;
use chaoslab::chaosgame::{
    convergence_profile, fibre_estimate, rapunzel_experiment, run_orbit, run_orbit_word,
    tail_estimate, RapunzelParams, RapunzelReport,
};
use chaoslab::ifs::{ExtComplex, MapSpec, MetricPoint, SpaceTag};
use chaoslab::{FiniteWord, Ifs, PointCloud, SymbolStream};

use crate::config::{CgrConfig, ExperimentConfig, SeqgenConfig};
use crate::ppm::Raster;
use crate::CliError;

fn read_config(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path)
        .map_err(|e| CliError::usage(format!("cannot read config {}: {e}", path.display())))
}

fn write_output(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    fs::write(path, bytes)
        .map_err(|e| CliError::usage(format!("cannot write {}: {e}", path.display())))
}

/// `render`: plot the pruned orbit tail (truncated at the first entry of
/// Ks) as a binary PPM.
pub fn cmd_render(config: &Path, out: &Path, seed: Option<u64>) -> Result<(), CliError> {
    let config = ExperimentConfig::parse(&read_config(config)?)?;
    let ifs = config.build_ifs()?;
    let mut stream = config.build_stream(seed)?;
    let orbit = run_orbit(&ifs, config.x0()?, &mut stream, config.kmax)
        .map_err(|e| CliError::usage(format!("orbit: {e}")))?;
    let tail = tail_estimate(&orbit, config.ks[0], config.delta)
        .map_err(|e| CliError::usage(format!("tail: {e}")))?;
    let render = config.render.unwrap_or_default();
    let mut raster = Raster::new(
        render.width,
        render.height,
        render.viewport_for(ifs.space_tag()),
    );
    for &p in tail.cloud.points() {
        raster.plot(p);
    }
    let mut bytes = Vec::new();
    raster
        .write_ppm(&mut bytes)
        .map_err(|e| CliError::usage(format!("ppm: {e}")))?;
    write_output(out, &bytes)
}

/// `converge`: CSV of Hausdorff distances from each requested tail to the
/// deterministic attractor reference.
pub fn cmd_converge(config: &Path, out: &Path, seed: Option<u64>) -> Result<(), CliError> {
    let config = ExperimentConfig::parse(&read_config(config)?)?;
    let ifs = config.build_ifs()?;
    let a_ref = config.reference_attractor(&ifs)?;
    let mut stream = config.build_stream(seed)?;
    let orbit = run_orbit(&ifs, config.x0()?, &mut stream, config.kmax)
        .map_err(|e| CliError::usage(format!("orbit: {e}")))?;
    let profile = convergence_profile(&orbit, &a_ref, &config.ks, config.delta)
        .map_err(|e| CliError::usage(format!("profile: {e}")))?;
    let mut csv = String::from("K,hausdorff\n");
    for (k, h) in profile {
        csv.push_str(&format!("{k},{h:.8e}\n"));
    }
    write_output(out, csv.as_bytes())
}

/// `seqgen`: newline-separated symbols to a file or stdout.
pub fn cmd_seqgen(
    config: &Path,
    count: usize,
    out: Option<&Path>,
    seed: Option<u64>,
) -> Result<(), CliError> {
    if count == 0 {
        return Err(CliError::usage("--count must be >= 1"));
    }
    let config: SeqgenConfig = serde_json::from_str(&read_config(config)?)
        .map_err(|e| CliError::usage(format!("config: {e}")))?;
    let mut stream = config.stream.build(seed)?;
    let mut text = String::new();
    for _ in 0..count {
        text.push_str(&stream.next_symbol().to_string());
        text.push('\n');
    }
    match out {
        Some(path) => write_output(path, text.as_bytes()),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| CliError::usage(format!("stdout: {e}"))),
    }
}

fn cgr_vertices(n: u32) -> Result<Vec<(f64, f64)>, CliError> {
    Ok(match n {
        2 => vec![(0.0, 0.0), (1.0, 0.0)],
        3 => vec![(0.0, 0.0), (1.0, 0.0), (0.5, 3f64.sqrt() / 2.0)],
        4 => vec![(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)],
        other => {
            return Err(CliError::usage(format!(
                "cgr alphabet_size must be 2, 3 or 4, got {other}"
            )))
        }
    })
}

/// `cgr`: the data-driven chaos game. Maps each input character to a symbol,
/// runs the midpoint game toward the alphabet's corner set, renders the
/// orbit, and writes a full occupancy histogram (`row,col,count`, row-major,
/// rows indexed from y = 0 upward).
pub fn cmd_cgr(config: &Path, out: &Path, seed: Option<u64>) -> Result<(), CliError> {
    let _ = seed; // the data string is the driver; nothing stochastic here
    let config: CgrConfig = serde_json::from_str(&read_config(config)?)
        .map_err(|e| CliError::usage(format!("config: {e}")))?;
    let vertices = cgr_vertices(config.alphabet_size)?;
    let mut mapping = std::collections::HashMap::new();
    for (key, &symbol) in &config.mapping {
        let mut chars = key.chars();
        let (c, rest) = (chars.next(), chars.next());
        if c.is_none() || rest.is_some() {
            return Err(CliError::usage(format!(
                "cgr mapping key {key:?} must be a single character"
            )));
        }
        if symbol == 0 || symbol > config.alphabet_size {
            return Err(CliError::usage(format!(
                "cgr mapping value {symbol} out of range 1..={}",
                config.alphabet_size
            )));
        }
        mapping.insert(c.unwrap(), symbol);
    }

    let input = fs::read_to_string(&config.input)
        .map_err(|e| CliError::usage(format!("cannot read input {}: {e}", config.input)))?;
    let mut symbols = Vec::new();
    for (pos, c) in input.chars().enumerate() {
        if c.is_ascii_whitespace() {
            continue;
        }
        match mapping.get(&c) {
            Some(&s) => symbols.push(s),
            None => {
                return Err(CliError::usage(format!(
                    "unmapped character {c:?} at position {}",
                    pos + 1
                )))
            }
        }
    }
    if symbols.is_empty() {
        return Err(CliError::usage("cgr input contains no mapped characters"));
    }

    // midpoint maps toward the corners: f_s(x) = (x + v_s)/2
    let maps: Vec<MapSpec> = vertices
        .iter()
        .map(|&(vx, vy)| MapSpec::affine([0.5, 0.0, 0.0, 0.5], [vx / 2.0, vy / 2.0]))
        .collect();
    let ifs = Ifs::new(SpaceTag::Plane, maps).expect("valid midpoint maps");
    let centroid = {
        let n = vertices.len() as f64;
        let (sx, sy) = vertices
            .iter()
            .fold((0.0, 0.0), |(ax, ay), &(x, y)| (ax + x, ay + y));
        MetricPoint::planar(sx / n, sy / n)
    };
    let word = FiniteWord::new(symbols, config.alphabet_size)
        .map_err(|e| CliError::usage(format!("cgr symbols: {e}")))?;
    let orbit = run_orbit_word(&ifs, centroid, &word)
        .map_err(|e| CliError::usage(format!("cgr orbit: {e}")))?;

    // image of the data points x_1.. (x_0 is the arbitrary centroid start)
    let render = config.render.unwrap_or_default();
    let mut raster = Raster::new(
        render.width,
        render.height,
        render.viewport.unwrap_or([0.0, 1.0, 0.0, 1.0]),
    );
    for &p in &orbit.points()[1..] {
        raster.plot(p);
    }
    let mut bytes = Vec::new();
    raster
        .write_ppm(&mut bytes)
        .map_err(|e| CliError::usage(format!("ppm: {e}")))?;
    write_output(out, &bytes)?;

    // occupancy histogram over the unit square
    let res = config.histogram_resolution as usize;
    if res == 0 {
        return Err(CliError::usage("histogram_resolution must be >= 1"));
    }
    let mut counts = vec![0u64; res * res];
    for &p in &orbit.points()[1..] {
        if let MetricPoint::Planar { x, y } = p {
            let col = ((x * res as f64).floor() as isize).clamp(0, res as isize - 1) as usize;
            let row = ((y * res as f64).floor() as isize).clamp(0, res as isize - 1) as usize;
            counts[row * res + col] += 1;
        }
    }
    let mut csv = String::from("row,col,count\n");
    for row in 0..res {
        for col in 0..res {
            csv.push_str(&format!("{row},{col},{}\n", counts[row * res + col]));
        }
    }
    write_output(Path::new(&config.histogram_out), csv.as_bytes())
}

fn format_report(report: &RapunzelReport) -> String {
    let escape = match report.escape_index {
        Some(k) => k.to_string(),
        None => "none".to_string(),
    };
    format!(
        "escape_index = {escape}\nfinal_h_primal = {:.8e}\nfinal_h_dual = {:.8e}\nexceptional = {}\nconverged = {}\n",
        report.final_h_primal, report.final_h_dual, report.exceptional, report.converged
    )
}

/// The built-in rapunzel configurations: the Möbius pair started on its
/// repeller, and the all-affine demo pinned at infinity.
fn builtin_rapunzel(
    which: &str,
) -> Result<(Ifs, MetricPoint, SymbolStream, RapunzelParams), CliError> {
    let champernowne = SymbolStream::champernowne(2).expect("n = 2");
    let params = RapunzelParams {
        hutchinson_iters: 12,
        delta: 0.005,
        kmax: 100_000,
        tail_start: 1_000,
        ks: vec![1_000, 10_000],
        escape_threshold: 0.1,
        x0_dual: MetricPoint::sphere(0.0, 1.0),
        tolerance: 0.05,
    };
    match which {
        "mobius" => Ok((
            builtin::mobius_pair(),
            MetricPoint::sphere(-1.0, 0.0),
            champernowne,
            params,
        )),
        "affine" => Ok((
            builtin::affine_doubling_pair(),
            MetricPoint::infinity(),
            champernowne,
            params,
        )),
        other => Err(CliError::usage(format!(
            "unknown builtin {other:?}: expected \"mobius\" or \"affine\""
        ))),
    }
}

/// `rapunzel`: the dual-orbit escape experiment. Exit code 0 when both
/// convergence criteria are met or the run is flagged exceptional; 1
/// otherwise.
pub fn cmd_rapunzel(
    config: Option<&PathBuf>,
    builtin_name: Option<&str>,
    out: &Path,
    seed: Option<u64>,
) -> Result<(), CliError> {
    let (ifs, x0, mut stream, params) = match (config, builtin_name) {
        (Some(path), None) => {
            let config = ExperimentConfig::parse(&read_config(path)?)?;
            if config.space() != SpaceTag::Sphere {
                return Err(CliError::usage("rapunzel needs a sphere IFS config"));
            }
            let rapunzel = config.rapunzel.as_ref().ok_or_else(|| {
                CliError::usage("config: missing field `rapunzel` (x0_dual, escape_threshold)")
            })?;
            let reference = config.reference.as_ref();
            let params = RapunzelParams {
                hutchinson_iters: reference.map(|r| r.iters).unwrap_or(12),
                delta: config.delta,
                kmax: config.kmax,
                tail_start: config.ks[0],
                ks: config.ks.clone(),
                escape_threshold: rapunzel.escape_threshold,
                x0_dual: rapunzel.x0_dual.to_point(SpaceTag::Sphere)?,
                tolerance: config.epsilon,
            };
            let ifs = config.build_ifs()?;
            let stream = config.build_stream(seed)?;
            let x0 = config.x0()?;
            (ifs, x0, stream, params)
        }
        (None, Some(name)) => builtin_rapunzel(name)?,
        _ => {
            return Err(CliError::usage(
                "rapunzel takes exactly one of --config or --builtin",
            ))
        }
    };

    let report = rapunzel_experiment(&ifs, x0, &mut stream, &params)
        .map_err(|e| CliError::usage(format!("rapunzel: {e}")))?;
    write_output(out, format_report(&report).as_bytes())?;
    if report.converged || report.exceptional {
        Ok(())
    } else {
        Err(CliError::criterion(format!(
            "orbit did not converge: h_primal = {:.8e}, h_dual = {:.8e} (tolerance {:.8e})",
            report.final_h_primal, report.final_h_dual, params.tolerance
        )))
    }
}

/// `fibre`: push the attractor reference through an address prefix, write
/// the pruned cloud as CSV, and print its diameter.
pub fn cmd_fibre(config: &Path, rho: &str, out: &Path, seed: Option<u64>) -> Result<(), CliError> {
    let _ = seed; // deterministic
    let config = ExperimentConfig::parse(&read_config(config)?)?;
    let ifs = config.build_ifs()?;
    let a_ref = config.reference_attractor(&ifs)?;
    let symbols: Vec<u32> = rho
        .split(',')
        .map(|part| {
            part.trim()
                .parse::<u32>()
                .map_err(|_| CliError::usage(format!("--rho: {part:?} is not a symbol")))
        })
        .collect::<Result<_, _>>()?;
    let rho = FiniteWord::new(symbols, ifs.alphabet_size())
        .map_err(|e| CliError::usage(format!("--rho: {e}")))?;
    let fibre = fibre_estimate(&ifs, &a_ref, &rho, config.delta)
        .map_err(|e| CliError::usage(format!("fibre: {e}")))?;
    write_output(out, cloud_csv(&fibre.cloud).as_bytes())?;
    println!("diameter = {:.8e}", fibre.diameter);
    Ok(())
}

/// Point clouds as CSV: x,y on the plane; the unit-sphere embedding
/// s1,s2,s3 on the sphere (always finite, including the point at infinity).
fn cloud_csv(cloud: &PointCloud) -> String {
    let mut csv = String::new();
    match cloud.space_tag() {
        SpaceTag::Plane => {
            csv.push_str("x,y\n");
            for &p in cloud.points() {
                if let MetricPoint::Planar { x, y } = p {
                    csv.push_str(&format!("{x:.8e},{y:.8e}\n"));
                }
            }
        }
        SpaceTag::Sphere => {
            csv.push_str("s1,s2,s3\n");
            for &p in cloud.points() {
                if let MetricPoint::Sphere(z) = p {
                    let (s1, s2, s3) = match z {
                        ExtComplex::Infinity => (0.0, 0.0, 1.0),
                        ExtComplex::Finite(z) => {
                            let n = z.norm_sqr();
                            (
                                2.0 * z.re / (1.0 + n),
                                2.0 * z.im / (1.0 + n),
                                (n - 1.0) / (n + 1.0),
                            )
                        }
                    };
                    csv.push_str(&format!("{s1:.8e},{s2:.8e},{s3:.8e}\n"));
                }
            }
        }
    }
    csv
}
