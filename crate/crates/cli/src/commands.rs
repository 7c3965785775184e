//! The four subcommands. Each validates its inputs up front (exit 2 on
//! mistakes), runs the core pipeline (exit 1 on data failures), and writes
//! deterministic outputs — no timestamps, shortest-round-trip floats.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, Context};

use rcskit_core::{
    apply_gate, assemble_pattern, detect_gate, to_freq, to_time, write_csv, AngleCut,
    BistaticPattern, CampaignManifest, CampaignScript, FrequencyGrid, FrequencySweep, GateMode,
    GateReport, GateSpec, ManifestEntry, RcsError, TimeResponse, WindowShape,
};

use crate::svg;
use crate::{
    data_error, usage_error, Classify, CmdResult, GateArgs, GateSelection, PatternArgs, RcsrArgs,
    SimulateArgs, TransformArgs,
};

pub fn simulate(args: SimulateArgs) -> CmdResult {
    let (text, origin) = if args.demo {
        (CampaignScript::demo_toml().to_string(), "built-in demo script".to_string())
    } else {
        let path = args.script.expect("clap requires a script unless --demo");
        let text = fs::read_to_string(&path)
            .with_context(|| format!("cannot read scene script {}", path.display()))
            .or_usage()?;
        (text, path.display().to_string())
    };
    let script = CampaignScript::from_toml(&text)
        .with_context(|| format!("invalid scene script ({origin})"))
        .or_usage()?;

    let grid = match (args.f_start, args.f_stop, args.n_points) {
        (Some(f0), Some(f1), Some(n)) => FrequencyGrid::new(f0, f1, n).or_usage()?,
        _ => *script
            .grid()
            .ok_or_else(|| {
                usage_error(anyhow!(
                    "the script has no [grid]; pass --f-start, --f-stop and --n-points"
                ))
            })?,
    };

    // Delays are shared across angles, so one scene covers them all.
    if let Some(&angle) = script.angles().first() {
        let (dut, _) = script.scenes_at(angle).or_usage()?;
        for warning in dut.alias_warnings(&grid) {
            eprintln!("warning: {warning}");
        }
    }

    let manifest = rcskit_core::generate_campaign(&script, &grid, &args.out).or_data()?;
    let script_copy = args.out.join("script.toml");
    fs::write(&script_copy, &text)
        .with_context(|| format!("cannot write {}", script_copy.display()))
        .or_data()?;

    println!("{}", args.out.join("manifest.tsv").display());
    println!(
        "{} angles × {} points ({}–{} GHz)",
        manifest.len(),
        grid.n_points(),
        grid.f_start() / 1e9,
        grid.f_stop() / 1e9
    );
    Ok(())
}

pub fn gate(args: GateArgs) -> CmdResult {
    let manifest = load_manifest(&args.io.manifest)?;
    let entry = find_entry(&manifest, args.angle)?;
    let processed = process_angle(entry, &args.transform, &args.gate)?;
    ensure_dir(&args.io.out)?;
    let prefix = format!("angle_{}", entry.angle_deg);

    if args.io.format.wants_csv() {
        write_time_csv(&args.io.out.join(format!("{prefix}_dut_time.csv")), &processed.dut_time)?;
        write_time_csv(&args.io.out.join(format!("{prefix}_ref_time.csv")), &processed.ref_time)?;
        write_time_csv(
            &args.io.out.join(format!("{prefix}_dut_gated_time.csv")),
            &processed.dut_gated_time,
        )?;
        write_time_csv(
            &args.io.out.join(format!("{prefix}_ref_gated_time.csv")),
            &processed.ref_gated_time,
        )?;
        write_file(
            &args.io.out.join(format!("{prefix}_dut_gated.csv")),
            &write_csv(&processed.dut_gated),
        )?;
        write_file(
            &args.io.out.join(format!("{prefix}_ref_gated.csv")),
            &write_csv(&processed.ref_gated),
        )?;
    }
    write_file(
        &args.io.out.join(format!("{prefix}_gate_report.txt")),
        &gate_report_text(&processed, args.transform.pad),
    )?;
    if args.io.format.wants_svg() {
        write_file(
            &args.io.out.join(format!("{prefix}_dut_time.svg")),
            &time_overlay_svg("DUT reflection", &processed.dut_time, &processed.dut_gated_time),
        )?;
        write_file(
            &args.io.out.join(format!("{prefix}_ref_time.svg")),
            &time_overlay_svg(
                "Reference reflection",
                &processed.ref_time,
                &processed.ref_gated_time,
            ),
        )?;
    }

    println!(
        "angle {}°: gate [{:.3}, {:.3}] ns ({})",
        entry.angle_deg,
        processed.gate.t_start() * 1e9,
        processed.gate.t_stop() * 1e9,
        if processed.report.is_some() { "detected on reference" } else { "manual" },
    );
    Ok(())
}

pub fn rcsr(args: RcsrArgs) -> CmdResult {
    let manifest = load_manifest(&args.io.manifest)?;
    let entry = find_entry(&manifest, args.angle)?;
    let processed = process_angle(entry, &args.transform, &args.gate)?;
    let cut = AngleCut::new(entry.angle_deg, processed.dut_gated.clone(), processed.ref_gated.clone())
        .or_data()?;
    ensure_dir(&args.io.out)?;
    let prefix = format!("angle_{}", entry.angle_deg);

    if args.io.format.wants_csv() {
        let mut text = String::from("freq_hz,rcsr_db\n");
        for (k, level) in cut.rcsr_db().iter().enumerate() {
            writeln!(text, "{},{level}", cut.grid().freq_at(k)).expect("string write");
        }
        write_file(&args.io.out.join(format!("{prefix}_rcsr.csv")), &text)?;
        write_file(
            &args.io.out.join(format!("{prefix}_dut_gated.csv")),
            &write_csv(&processed.dut_gated),
        )?;
        write_file(
            &args.io.out.join(format!("{prefix}_ref_gated.csv")),
            &write_csv(&processed.ref_gated),
        )?;
    }
    if args.io.format.wants_svg() {
        let points: Vec<(f64, f64)> = cut
            .rcsr_db()
            .iter()
            .enumerate()
            .map(|(k, &db)| (cut.grid().freq_at(k) / 1e9, db))
            .collect();
        let plot = svg::line_plot(
            &format!("RCS reduction, θ = {}°", entry.angle_deg),
            "frequency (GHz)",
            "RCSR (dB)",
            &[svg::Series { label: "RCSR", points }],
        );
        write_file(&args.io.out.join(format!("{prefix}_rcsr.svg")), &plot)?;
    }

    println!(
        "angle {}°: gate [{:.3}, {:.3}] ns, {} points",
        entry.angle_deg,
        processed.gate.t_start() * 1e9,
        processed.gate.t_stop() * 1e9,
        cut.rcsr_db().len(),
    );
    Ok(())
}

pub fn pattern(args: PatternArgs) -> CmdResult {
    let manifest = load_manifest(&args.io.manifest)?;
    let mut cuts = Vec::with_capacity(manifest.len());
    for entry in manifest.entries() {
        let processed = process_angle(entry, &args.transform, &args.gate)
            .map_err(|f| f.with_context(format!("angle {}°", entry.angle_deg)))?;
        cuts.push(
            AngleCut::new(entry.angle_deg, processed.dut_gated, processed.ref_gated)
                .or_data()
                .map_err(|f| f.with_context(format!("angle {}°", entry.angle_deg)))?,
        );
    }

    // Assemble everything before writing anything: a bad frequency must not
    // leave a partial output set behind.
    let mut patterns: Vec<(String, BistaticPattern)> = Vec::new();
    for &f0 in &args.f0 {
        let pattern = assemble_pattern(&cuts, f0, args.source.into()).map_err(|e| match e {
            RcsError::OutOfBand { .. } => usage_error(e),
            other => data_error(other),
        })?;
        patterns.push((freq_token(f0), pattern));
    }

    ensure_dir(&args.io.out)?;
    for (token, pattern) in &patterns {
        if args.io.format.wants_csv() {
            let mut text = String::from("theta_deg,level_db\n");
            for &(theta, level) in pattern.entries() {
                writeln!(text, "{theta},{level}").expect("string write");
            }
            write_file(&args.io.out.join(format!("pattern_{token}.csv")), &text)?;
        }
        if args.io.format.wants_svg() {
            let plot = svg::line_plot(
                &format!("Bi-static pattern at {token}"),
                "angle (deg)",
                "level (dB)",
                &[svg::Series { label: "pattern", points: pattern.entries().to_vec() }],
            );
            write_file(&args.io.out.join(format!("pattern_{token}.svg")), &plot)?;
        }
        println!("pattern at {token}: {} entries", pattern.len());
    }
    Ok(())
}

/// Everything the processing commands derive from one manifest entry.
struct ProcessedAngle {
    dut_time: TimeResponse,
    ref_time: TimeResponse,
    dut_gated_time: TimeResponse,
    ref_gated_time: TimeResponse,
    dut_gated: FrequencySweep,
    ref_gated: FrequencySweep,
    gate: GateSpec,
    /// Present when the gate was detected rather than given manually.
    report: Option<GateReport>,
}

fn process_angle(
    entry: &ManifestEntry,
    transform: &TransformArgs,
    selection: &GateSelection,
) -> CmdResult<ProcessedAngle> {
    let (dut, reference) = entry
        .load_pair()
        .with_context(|| format!("cannot load sweeps for angle {}°", entry.angle_deg))
        .or_data()?;
    if !dut.grid().approx_eq(reference.grid()) {
        return Err(data_error(anyhow!(
            "angle {}°: DUT and reference sweeps live on different grids",
            entry.angle_deg
        )));
    }

    let shape = WindowShape::kaiser(transform.beta);
    let dut_time = to_time(&dut, transform.pad);
    let ref_time = to_time(&reference, transform.pad);

    let (gate, report) = match selection.gate {
        Some((t1, t2)) => (GateSpec::new(t1, t2, shape).or_usage()?, None),
        None => {
            let mode = match selection.threshold_db {
                Some(db) => GateMode::ThresholdDb(db),
                None => GateMode::HalfWidth(selection.half_width),
            };
            let report = detect_gate(&ref_time, mode, shape)
                .with_context(|| format!("gate detection failed at angle {}°", entry.angle_deg))
                .or_data()?;
            (report.gate, Some(report))
        }
    };

    let span = ref_time.span();
    if gate.near_alias_edge(span) {
        eprintln!(
            "warning: angle {}°: gate end {:.3} ns sits within 5% of the {:.1} ns alias-free \
             span; echoes from beyond the span fold back into it",
            entry.angle_deg,
            gate.t_stop() * 1e9,
            span * 1e9,
        );
    }

    let dut_gated_time = apply_gate(&dut_time, &gate).or_data()?;
    let ref_gated_time = apply_gate(&ref_time, &gate).or_data()?;
    let dut_gated = to_freq(&dut_gated_time, dut.grid()).or_data()?;
    let ref_gated = to_freq(&ref_gated_time, reference.grid()).or_data()?;

    Ok(ProcessedAngle {
        dut_time,
        ref_time,
        dut_gated_time,
        ref_gated_time,
        dut_gated,
        ref_gated,
        gate,
        report,
    })
}

fn load_manifest(path: &Path) -> CmdResult<CampaignManifest> {
    let file = if path.is_dir() { path.join("manifest.tsv") } else { path.to_path_buf() };
    if !file.is_file() {
        return Err(usage_error(anyhow!("manifest {} does not exist", file.display())));
    }
    CampaignManifest::load(&file)
        .with_context(|| format!("cannot load manifest {}", file.display()))
        .or_data()
}

fn find_entry(manifest: &CampaignManifest, angle: f64) -> CmdResult<&ManifestEntry> {
    manifest.entry_for(angle).ok_or_else(|| {
        let angles: Vec<String> = manifest.angles().map(|a| a.to_string()).collect();
        let available = if angles.len() <= 12 {
            angles.join(", ")
        } else {
            format!("{} angles from {} to {}", angles.len(), angles[0], angles[angles.len() - 1])
        };
        usage_error(anyhow!("angle {angle}° is not in the manifest (available: {available}°)"))
    })
}

fn ensure_dir(path: &Path) -> CmdResult {
    fs::create_dir_all(path)
        .with_context(|| format!("cannot create output directory {}", path.display()))
        .or_data()
}

fn write_file(path: &PathBuf, contents: &str) -> CmdResult {
    fs::write(path, contents)
        .with_context(|| format!("cannot write {}", path.display()))
        .or_data()
}

fn write_time_csv(path: &PathBuf, resp: &TimeResponse) -> CmdResult {
    let mut text = String::from("time_s,re,im\n");
    for (k, v) in resp.values().iter().enumerate() {
        writeln!(text, "{},{},{}", resp.time_at(k), v.re, v.im).expect("string write");
    }
    write_file(path, &text)
}

fn gate_report_text(processed: &ProcessedAngle, pad: usize) -> String {
    let gate = &processed.gate;
    let mut text = String::new();
    writeln!(text, "gate_start_s: {}", gate.t_start()).expect("string write");
    writeln!(text, "gate_stop_s: {}", gate.t_stop()).expect("string write");
    writeln!(text, "window: kaiser beta {}", gate.shape().beta()).expect("string write");
    writeln!(text, "pad_factor: {pad}").expect("string write");
    match &processed.report {
        Some(report) => {
            writeln!(text, "detected: yes").expect("string write");
            writeln!(text, "peak_time_s: {}", report.peak_time).expect("string write");
            writeln!(text, "peak_magnitude: {}", report.peak_magnitude).expect("string write");
            writeln!(text, "suppression_estimate_db: {}", report.suppression_estimate)
                .expect("string write");
        }
        None => {
            writeln!(text, "detected: no (manual gate)").expect("string write");
        }
    }
    text
}

/// Raw vs gated time-domain magnitude in dB, floored 120 dB below the raw
/// peak so the zeroed out-of-gate region doesn't stretch the axis to −∞.
fn time_overlay_svg(title: &str, raw: &TimeResponse, gated: &TimeResponse) -> String {
    let peak_nsq = raw.values().iter().map(|v| v.norm_sqr()).fold(0.0, f64::max);
    let floor = (peak_nsq * 1e-12).max(f64::MIN_POSITIVE);
    let db_points = |resp: &TimeResponse| -> Vec<(f64, f64)> {
        resp.values()
            .iter()
            .enumerate()
            .map(|(k, v)| (resp.time_at(k) * 1e9, 10.0 * v.norm_sqr().max(floor).log10()))
            .collect()
    };
    svg::line_plot(
        title,
        "time (ns)",
        "magnitude (dB)",
        &[
            svg::Series { label: "raw", points: db_points(raw) },
            svg::Series { label: "gated", points: db_points(gated) },
        ],
    )
}

/// Deterministic file-name token for a pattern frequency: GHz with
/// insignificant zeros trimmed (`18GHz`, `32.5GHz`).
fn freq_token(f_hz: f64) -> String {
    let mut s = format!("{:.6}", f_hz / 1e9);
    while s.ends_with('0') {
        s.pop();
    }
    if s.ends_with('.') {
        s.pop();
    }
    format!("{s}GHz")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn freq_tokens_trim_cleanly() {
        assert_eq!(freq_token(18e9), "18GHz");
        assert_eq!(freq_token(32.5e9), "32.5GHz");
        assert_eq!(freq_token(0.5e9), "0.5GHz");
        assert_eq!(freq_token(10.125e9), "10.125GHz");
    }
}
