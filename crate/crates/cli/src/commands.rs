use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use incrrelay_core::characteristics::{hull_characteristic, parallelogram};
use incrrelay_core::simulator::{simulate, verify_pipeline, VerifyReport};
use incrrelay_core::{fixtures, parse_network, FaultSpec, FaultType, Grid, NetworkModel, Settings};

use crate::args::{CharacteristicArgs, Format, NetworkArg, SimulateArgs, VerifyArgs};
use crate::error::{CliError, CliResult};
use crate::output::{render_svg, to_json, write_cloud_csv, CharacteristicReport};

pub const EPS_VAR: &str = "INCRRELAY_EPS";

pub fn settings_from_env() -> CliResult<Settings> {
    match std::env::var(EPS_VAR) {
        Err(_) => Ok(Settings::default()),
        Ok(text) => {
            let eps: f64 = text
                .trim()
                .parse()
                .map_err(|_| CliError::Usage(format!("{EPS_VAR}={text:?} is not a number")))?;
            if !(eps > 0.0 && eps < 0.5) {
                return Err(CliError::Usage(format!(
                    "{EPS_VAR} must lie in (0, 0.5), got {eps}"
                )));
            }
            Ok(Settings::with_eps(eps))
        }
    }
}

pub fn load_network(path: Option<&Path>) -> CliResult<NetworkModel> {
    match path {
        None => Ok(fixtures::four_bus()),
        Some(p) => {
            let text = fs::read_to_string(p).map_err(|e| CliError::io(p, e))?;
            Ok(parse_network(&text)?)
        }
    }
}

fn load(arg: &NetworkArg) -> CliResult<NetworkModel> {
    load_network(arg.network.as_deref())
}

fn write_file(path: &Path, contents: &[u8]) -> CliResult<()> {
    fs::write(path, contents).map_err(|e| CliError::io(path, e))
}

pub fn characteristic(
    args: &CharacteristicArgs,
    settings: &Settings,
    stdout: &mut dyn Write,
) -> CliResult<Vec<PathBuf>> {
    let net = load(&args.network)?;
    let grid = Grid::preset(args.grid);
    let formats = if args.format.is_empty() {
        vec![Format::Csv, Format::Json, Format::Svg]
    } else {
        args.format.clone()
    };
    fs::create_dir_all(&args.out).map_err(|e| CliError::io(&args.out, e))?;
    let mut written = Vec::new();
    for &eta in &args.fault {
        let (m_t, m_f) = args.mhat;
        let fault = FaultSpec::new(eta, m_t, m_f, net.relay().r_fault_max);
        let window = simulate(&net, &fault, settings)?.window;

        let t0 = Instant::now();
        let hull = hull_characteristic(&net, eta, &window, &grid, settings)?;
        let t_hull = t0.elapsed();
        let t0 = Instant::now();
        let para = parallelogram(&net, eta, &window, args.mhat, settings)?;
        let t_para = t0.elapsed();
        let _ = writeln!(
            stdout,
            "{eta} ({} loop, {} points): hull {:.3} ms, parallelogram {:.3} ms",
            hull.lp,
            hull.samples.len(),
            t_hull.as_secs_f64() * 1e3,
            t_para.as_secs_f64() * 1e3
        );

        let report = CharacteristicReport {
            line_impedance: net.protected_line().z1,
            hull,
            parallelogram: para,
        };
        for f in &formats {
            let (name, bytes) = match f {
                Format::Csv => {
                    let mut buf = Vec::new();
                    write_cloud_csv(&report.hull.samples, &mut buf).map_err(|e| {
                        CliError::Format {
                            path: args.out.clone(),
                            message: e.to_string(),
                        }
                    })?;
                    (format!("{eta}_cloud.csv"), buf)
                }
                Format::Json => (
                    format!("{eta}_characteristic.json"),
                    to_json(&report).into_bytes(),
                ),
                Format::Svg => (format!("{eta}.svg"), render_svg(&report).into_bytes()),
            };
            let path = args.out.join(name);
            write_file(&path, &bytes)?;
            written.push(path);
        }
    }
    Ok(written)
}

pub fn simulate_cmd(
    args: &SimulateArgs,
    settings: &Settings,
    stdout: &mut dyn Write,
) -> CliResult<()> {
    let net = load(&args.network)?;
    let (m_t, m_f) = args.mhat;
    let fault = FaultSpec::new(args.fault, m_t, m_f, net.relay().r_fault_max);
    let text = simulate(&net, &fault, settings)?.to_toml();
    match &args.out {
        Some(p) => write_file(p, text.as_bytes()),
        None => stdout
            .write_all(text.as_bytes())
            .map_err(|e| CliError::io("<stdout>", e)),
    }
}

/// Five locations spanning `[ε, 1 - ε]` by five resistance fractions in `(0, 1]`.
pub fn default_verify_points(settings: &Settings) -> Vec<(f64, f64)> {
    let mut out = Vec::new();
    for i in 0..5 {
        let m_t =
            (settings.eps + (1.0 - 2.0 * settings.eps) * i as f64 / 4.0).min(1.0 - settings.eps);
        for m_f in [0.2, 0.4, 0.6, 0.8, 1.0] {
            out.push((m_t, m_f));
        }
    }
    out
}

const COLUMNS: [&str; 9] = [
    "fault", "m_t", "m_f", "sigma", "z", "z_inc", "state", "balance", "kcl",
];

fn row(r: &VerifyReport) -> [String; 9] {
    [
        r.fault.eta.to_string(),
        format!("{:.6}", r.fault.m_t),
        format!("{:.3}", r.fault.m_f),
        format!("{:.2e}", r.sigma_rel),
        format!("{:.2e}", r.z_rel),
        format!("{:.2e}", r.z_inc_rel),
        format!("{:.2e}", r.state_rel),
        format!("{:.2e}", r.prefault_balance),
        format!("{:.2e}", r.kcl_residual),
    ]
}

pub fn verify(
    args: &VerifyArgs,
    settings: &Settings,
    stdout: &mut dyn Write,
) -> CliResult<Vec<VerifyReport>> {
    let model = load(&args.network)?;
    let truth = match &args.truth {
        Some(p) => load_network(Some(p))?,
        None => model.clone(),
    };
    let faults = if args.fault.is_empty() {
        FaultType::ALL.to_vec()
    } else {
        args.fault.clone()
    };
    let points = match args.grid {
        Some(p) => Grid::preset(p).clamped(settings).points,
        None => default_verify_points(settings),
    };
    let mut reports = Vec::new();
    for &eta in &faults {
        for &(m_t, m_f) in &points {
            let fault = FaultSpec::new(eta, m_t, m_f, model.relay().r_fault_max);
            reports.push(
                verify_pipeline(&model, &truth, &fault, settings).map_err(|e| {
                    CliError::Core(incrrelay_core::Error::AtGridPoint {
                        m_t,
                        m_f,
                        source: Box::new(e),
                    })
                })?,
            );
        }
    }

    let rows: Vec<[String; 9]> = reports.iter().map(row).collect();
    let mut widths = COLUMNS.map(str::len);
    for r in &rows {
        for (w, cell) in widths.iter_mut().zip(r) {
            *w = (*w).max(cell.len());
        }
    }
    let line = |cells: &[&str]| {
        cells
            .iter()
            .zip(widths)
            .map(|(c, w)| format!("{c:>w$}"))
            .collect::<Vec<_>>()
            .join("  ")
    };
    let mut text = line(&COLUMNS);
    text.push('\n');
    for (r, rep) in rows.iter().zip(&reports) {
        let cells: Vec<&str> = r.iter().map(String::as_str).collect();
        text.push_str(&line(&cells));
        text.push_str(if rep.passes() { "\n" } else { "  FAIL\n" });
    }
    let failed = reports.iter().filter(|r| !r.passes()).count();
    text.push_str(&format!("{} scenarios, {failed} failed\n", reports.len()));
    stdout
        .write_all(text.as_bytes())
        .map_err(|e| CliError::io("<stdout>", e))?;

    if let Some(path) = &args.out {
        let mut w = csv::Writer::from_writer(Vec::new());
        let io_err = |e: csv::Error| CliError::Format {
            path: path.clone(),
            message: e.to_string(),
        };
        let mut header: Vec<&str> = COLUMNS.to_vec();
        header.push("pass");
        w.write_record(&header).map_err(io_err)?;
        for (r, rep) in rows.iter().zip(&reports) {
            let mut rec: Vec<String> = r.to_vec();
            rec.push(rep.passes().to_string());
            w.write_record(&rec).map_err(io_err)?;
        }
        let bytes = w.into_inner().map_err(|e| CliError::Format {
            path: path.clone(),
            message: e.to_string(),
        })?;
        write_file(path, &bytes)?;
    }

    if failed > 0 {
        return Err(CliError::Residual {
            failed,
            total: reports.len(),
        });
    }
    Ok(reports)
}
