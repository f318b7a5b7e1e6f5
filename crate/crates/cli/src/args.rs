use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use incrrelay_core::{FaultType, GridPreset};

#[derive(Debug, Parser)]
#[command(
    name = "incrrelay",
    version,
    about = "Distance-relay characteristics from incremental quantities"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build hull and parallelogram characteristics and write CSV, JSON and SVG.
    Characteristic(CharacteristicArgs),
    /// Simulate one fault and print the prefault and faulted states as TOML.
    Simulate(SimulateArgs),
    /// Check the incremental pipeline against direct simulation.
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
pub struct NetworkArg {
    /// Network file (TOML). Defaults to the bundled four-bus fixture.
    #[arg(long, value_name = "PATH")]
    pub network: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
    Svg,
}

#[derive(Debug, Args)]
pub struct CharacteristicArgs {
    #[command(flatten)]
    pub network: NetworkArg,
    /// Fault types, repeated or comma separated.
    #[arg(long, value_delimiter = ',', value_parser = parse_fault, default_value = "ag,ab")]
    pub fault: Vec<FaultType>,
    /// paper22, corners4, dense:NxM or perimeter:N
    #[arg(long, value_parser = parse_grid, default_value = "paper22")]
    pub grid: GridPreset,
    /// Parallelogram design point; also the fault simulated for the relay window.
    #[arg(long, value_name = "MT,MF", value_parser = parse_pair, default_value = "0.5,1")]
    pub mhat: (f64, f64),
    /// Artifacts to write; all three when omitted.
    #[arg(long, value_delimiter = ',')]
    pub format: Vec<Format>,
    /// Output directory.
    #[arg(long, value_name = "DIR", default_value = ".")]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub network: NetworkArg,
    #[arg(long, value_parser = parse_fault)]
    pub fault: FaultType,
    /// Fault location and resistance fraction.
    #[arg(long, value_name = "MT,MF", value_parser = parse_pair, default_value = "0.5,1")]
    pub mhat: (f64, f64),
    /// Write to a file instead of stdout.
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub network: NetworkArg,
    /// Network to simulate in place of the model, e.g. with different line data.
    #[arg(long, value_name = "PATH")]
    pub truth: Option<PathBuf>,
    /// Fault types; all eleven when omitted.
    #[arg(long, value_delimiter = ',', value_parser = parse_fault)]
    pub fault: Vec<FaultType>,
    /// Grid of scenarios; a 5 x 5 grid with m_F > 0 when omitted.
    #[arg(long, value_parser = parse_grid)]
    pub grid: Option<GridPreset>,
    /// Also write the residual table as CSV.
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

fn parse_fault(s: &str) -> Result<FaultType, String> {
    s.parse()
        .map_err(|e: incrrelay_core::admittance::UnknownFaultType| e.to_string())
}

fn parse_grid(s: &str) -> Result<GridPreset, String> {
    s.parse()
        .map_err(|e: incrrelay_core::characteristics::GridParseError| e.to_string())
}

fn parse_pair(s: &str) -> Result<(f64, f64), String> {
    let (a, b) = s
        .split_once(',')
        .ok_or_else(|| format!("expected MT,MF, got {s:?}"))?;
    let num = |x: &str| x.trim().parse::<f64>().map_err(|e| format!("{x:?}: {e}"));
    Ok((num(a)?, num(b)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pair_parsing() {
        assert_eq!(parse_pair("0.5,1").unwrap(), (0.5, 1.0));
        assert!(parse_pair("0.5").is_err());
        assert!(parse_pair("a,1").is_err());
    }

    #[test]
    fn fault_list() {
        let cli = Cli::try_parse_from([
            "incrrelay",
            "characteristic",
            "--fault",
            "ag,bc",
            "--fault",
            "abcg",
        ])
        .unwrap();
        let Command::Characteristic(a) = cli.command else {
            panic!()
        };
        assert_eq!(a.fault, vec![FaultType::Ag, FaultType::Bc, FaultType::Abcg]);
    }

    #[test]
    fn unknown_fault_lists_names() {
        let err = Cli::try_parse_from(["incrrelay", "simulate", "--fault", "xg"]).unwrap_err();
        let msg = err.to_string();
        for eta in FaultType::ALL {
            assert!(msg.contains(eta.name()), "{msg}");
        }
    }
}
