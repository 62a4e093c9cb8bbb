//! Command-line front end. [`run`] is what the `adderlab` binary calls; it
//! takes explicit writers so tests can drive it in-process.
//!
//! Exit codes: 0 success, 1 runtime or verification failure, 2 usage error.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;

use crate::cells::{Library, DEFAULT_MAX_DEGRADATION};
use crate::generators::{AdderSpec, Architecture};
use crate::metrics::{self, AreaModel, MeasureConfig, MetricsReport, PowerModel};
use crate::netlist::{parse_netlist, serialize_netlist, Netlist};
use crate::sim::{verify_against_oracle, Stimulus, VerifyMode, MAX_EXHAUSTIVE_WIDTH};

pub const DEFAULT_SEED: u64 = 1;
pub const DEFAULT_VECTORS: usize = 1000;
pub const DEFAULT_VERIFY_VECTORS: usize = 10_000;

#[derive(Debug, Parser)]
#[command(name = "adderlab", version, about = "Generate, simulate and compare GDI and CMOS adders")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Write a generated adder netlist.
    Gen {
        #[arg(long)]
        adder: Architecture,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        width: u64,
        #[arg(long)]
        library: Library,
        #[arg(long)]
        out: PathBuf,
    },
    /// Check a netlist against integer addition.
    Verify {
        #[arg(long)]
        netlist: PathBuf,
        #[arg(long)]
        adder: Architecture,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        width: u64,
        #[arg(long, conflicts_with = "random")]
        exhaustive: bool,
        /// Number of random vectors.
        #[arg(long)]
        random: Option<usize>,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
    /// Area, depth, toggles, power and PDP for one netlist.
    Report {
        #[arg(long)]
        netlist: PathBuf,
        /// Stimulus file; random vectors are used when absent.
        #[arg(long, conflicts_with = "random")]
        vectors: Option<PathBuf>,
        #[arg(long, value_parser = clap::value_parser!(u64).range(2..))]
        random: Option<u64>,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[command(flatten)]
        model: ModelArgs,
    },
    /// Generate every selected design and compare them on shared stimulus.
    Compare {
        /// Comma-separated list of rca, cpa.
        #[arg(long)]
        designs: String,
        /// Comma-separated list of widths.
        #[arg(long)]
        widths: String,
        /// Comma-separated list of gdi, cmos.
        #[arg(long)]
        libraries: String,
        #[arg(long, default_value_t = DEFAULT_VECTORS as u64, value_parser = clap::value_parser!(u64).range(2..))]
        random: u64,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[command(flatten)]
        model: ModelArgs,
    },
}

#[derive(Debug, Args)]
struct ModelArgs {
    /// Supply voltage in volts.
    #[arg(long, default_value_t = 1.8)]
    vdd: f64,
    /// Clock frequency in Hz.
    #[arg(long, default_value_t = 1e8)]
    freq: f64,
    /// Capacitance per transistor gate terminal in farads.
    #[arg(long, default_value_t = 2e-15)]
    gate_cap: f64,
    /// Transistor width in nm.
    #[arg(long, default_value_t = 540.0)]
    w_nm: f64,
    /// Transistor length in nm.
    #[arg(long, default_value_t = 180.0)]
    l_nm: f64,
    #[arg(long, default_value_t = DEFAULT_MAX_DEGRADATION)]
    max_degradation: u32,
}

impl ModelArgs {
    fn config(&self) -> Result<MeasureConfig, Failure> {
        let power = PowerModel::new(self.vdd, self.freq, self.gate_cap).map_err(usage)?;
        let area = AreaModel::new(self.w_nm * 1e-9, self.l_nm * 1e-9).map_err(usage)?;
        Ok(MeasureConfig {
            power,
            area,
            max_degradation: self.max_degradation,
        })
    }

    fn describe(&self) -> String {
        format!(
            "vdd={} freq={:e} gate_cap={:e} w_nm={} l_nm={} max_degradation={}",
            self.vdd, self.freq, self.gate_cap, self.w_nm, self.l_nm, self.max_degradation
        )
    }
}

enum Failure {
    Usage(String),
    Runtime(String),
    /// Already reported; just set the exit code.
    Silent(i32),
}

fn usage(e: impl ToString) -> Failure {
    Failure::Usage(e.to_string())
}

fn runtime(e: impl ToString) -> Failure {
    Failure::Runtime(e.to_string())
}

type Outcome = Result<(), Failure>;

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    let result = match cli.command {
        Command::Gen {
            adder,
            width,
            library,
            out: path,
        } => cmd_gen(adder, width as usize, library, &path, err),
        Command::Verify {
            netlist,
            adder,
            width,
            exhaustive,
            random,
            seed,
        } => cmd_verify(&netlist, adder, width as usize, exhaustive, random, seed, out),
        Command::Report {
            netlist,
            vectors,
            random,
            seed,
            model,
        } => cmd_report(&netlist, vectors.as_deref(), random, seed, &model, out, err),
        Command::Compare {
            designs,
            widths,
            libraries,
            random,
            seed,
            model,
        } => cmd_compare(&designs, &widths, &libraries, random as usize, seed, &model, out, err),
    };
    match result {
        Ok(()) => 0,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            2
        }
        Err(Failure::Runtime(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            1
        }
        Err(Failure::Silent(code)) => code,
    }
}

fn read_netlist(path: &Path) -> Result<Netlist, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| runtime(format!("{}: {e}", path.display())))?;
    let netlist = parse_netlist(&text).map_err(|e| runtime(format!("{}: {e}", path.display())))?;
    crate::netlist::validate(&netlist).map_err(|diags| {
        let lines: Vec<String> = diags.iter().map(|d| format!("  {d}")).collect();
        runtime(format!("{}: invalid netlist\n{}", path.display(), lines.join("\n")))
    })?;
    Ok(netlist)
}

fn cmd_gen(adder: Architecture, width: usize, library: Library, path: &Path, err: &mut dyn Write) -> Outcome {
    let spec = AdderSpec::new(adder, width, library).map_err(usage)?;
    let netlist = spec.generate();
    let text = format!(
        "# adderlab gen adder={adder} width={width} library={library}\n{}",
        serialize_netlist(&netlist)
    );
    std::fs::write(path, text).map_err(|e| runtime(format!("{}: {e}", path.display())))?;
    let _ = writeln!(
        err,
        "wrote {} ({} cells, {} transistors) to {}",
        netlist.design_name,
        netlist.cells.len(),
        netlist.transistor_count(),
        path.display()
    );
    Ok(())
}

fn cmd_verify(
    path: &Path,
    adder: Architecture,
    width: usize,
    exhaustive: bool,
    random: Option<usize>,
    seed: u64,
    out: &mut dyn Write,
) -> Outcome {
    let netlist = read_netlist(path)?;
    let mode = match (exhaustive, random) {
        (true, _) => VerifyMode::Exhaustive,
        (false, Some(vectors)) => VerifyMode::Random { vectors, seed },
        (false, None) if width <= MAX_EXHAUSTIVE_WIDTH => VerifyMode::Exhaustive,
        (false, None) => VerifyMode::Random {
            vectors: DEFAULT_VERIFY_VECTORS,
            seed,
        },
    };
    let library = if metrics::library_label(&netlist) == "gdi" { Library::Gdi } else { Library::Cmos };
    let spec = AdderSpec::new(adder, width, library).map_err(usage)?;
    let report = verify_against_oracle(&netlist, &spec, mode).map_err(runtime)?;
    writeln!(out, "# verify netlist={} adder={adder} width={width} mode={mode}", path.display()).map_err(runtime)?;
    write!(out, "{report}").map_err(runtime)?;
    if report.all_passed() {
        Ok(())
    } else {
        Err(Failure::Silent(1))
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_report(
    path: &Path,
    vectors: Option<&Path>,
    random: Option<u64>,
    seed: u64,
    model: &ModelArgs,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Outcome {
    let config = model.config()?;
    let netlist = read_netlist(path)?;
    let (stimulus, source) = match vectors {
        Some(file) => {
            let text = std::fs::read_to_string(file).map_err(|e| runtime(format!("{}: {e}", file.display())))?;
            let s = Stimulus::parse(&text).map_err(|e| runtime(format!("{}: {e}", file.display())))?;
            (s, format!("vectors={}", file.display()))
        }
        None => {
            let count = random.unwrap_or(DEFAULT_VECTORS as u64) as usize;
            let nets = netlist.inputs().into_iter().map(String::from).collect();
            (Stimulus::random(nets, count, seed), format!("random={count} seed={seed}"))
        }
    };
    let report = metrics::measure(&netlist, &stimulus, &config).map_err(runtime)?;
    writeln!(out, "# report netlist={} {source} {}", path.display(), model.describe()).map_err(runtime)?;
    writeln!(out, "{}", metrics::CSV_HEADER).map_err(runtime)?;
    writeln!(out, "{}", report.csv_row()).map_err(runtime)?;
    let _ = writeln!(err, "{}", report.summary());
    Ok(())
}

fn parse_list<T: std::str::FromStr>(flag: &str, text: &str) -> Result<Vec<T>, Failure>
where
    T::Err: std::fmt::Display,
{
    let items: Vec<&str> = text.split(',').map(str::trim).filter(|s| !s.is_empty()).collect();
    if items.is_empty() {
        return Err(usage(format!("--{flag} selects nothing")));
    }
    items
        .into_iter()
        .map(|s| s.parse::<T>().map_err(|e| usage(format!("--{flag}: {e}"))))
        .collect()
}

#[allow(clippy::too_many_arguments)]
fn cmd_compare(
    designs: &str,
    widths: &str,
    libraries: &str,
    vectors: usize,
    seed: u64,
    model: &ModelArgs,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Outcome {
    let config = model.config()?;
    let mut designs: Vec<Architecture> = parse_list("designs", designs)?;
    let mut widths: Vec<usize> = parse_list("widths", widths)?;
    let mut libraries: Vec<Library> = parse_list("libraries", libraries)?;
    designs.sort();
    designs.dedup();
    widths.sort();
    widths.dedup();
    libraries.sort();
    libraries.dedup();

    let mut specs = Vec::new();
    for &d in &designs {
        for &w in &widths {
            for &l in &libraries {
                specs.push(AdderSpec::new(d, w, l).map_err(usage)?);
            }
        }
    }

    // every design of one width sees the same vectors
    let results: Vec<Result<MetricsReport, String>> = specs
        .par_iter()
        .map(|spec| {
            let netlist = spec.generate();
            let nets = netlist.inputs().into_iter().map(String::from).collect();
            let stimulus = Stimulus::random(nets, vectors, seed);
            metrics::measure(&netlist, &stimulus, &config).map_err(|e| format!("{spec}: {e}"))
        })
        .collect();
    let reports: Vec<MetricsReport> = results.into_iter().collect::<Result<_, _>>().map_err(runtime)?;

    let join = |v: Vec<String>| v.join(",");
    writeln!(
        out,
        "# compare designs={} widths={} libraries={} random={vectors} seed={seed} {}",
        join(designs.iter().map(|d| d.to_string()).collect()),
        join(widths.iter().map(|w| w.to_string()).collect()),
        join(libraries.iter().map(|l| l.to_string()).collect()),
        model.describe()
    )
    .map_err(runtime)?;
    write!(out, "{}", metrics::compare(&reports)).map_err(runtime)?;
    for r in &reports {
        let _ = writeln!(err, "{}", r.summary());
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(std::iter::once("adderlab").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn gen_and_verify() {
        let dir = tempfile::tempdir().unwrap();
        let file = dir.path().join("cpa4.net");
        let f = file.to_str().unwrap();
        let (code, _, err) = call(&["gen", "--adder", "cpa", "--width", "4", "--library", "gdi", "--out", f]);
        assert_eq!(code, 0, "{err}");
        assert!(err.contains("100 transistors"));
        let n = parse_netlist(&std::fs::read_to_string(&file).unwrap()).unwrap();
        assert_eq!(n.transistor_count(), 100);

        let (code, out, _) = call(&["verify", "--netlist", f, "--adder", "cpa", "--width", "4", "--exhaustive"]);
        assert_eq!(code, 0);
        assert!(out.contains("512/512 pass"));
    }

    #[test]
    fn usage_errors() {
        assert_eq!(call(&["gen", "--adder", "cpa", "--width", "0", "--library", "gdi", "--out", "x"]).0, 2);
        assert_eq!(call(&["gen", "--adder", "cla", "--width", "4", "--library", "gdi", "--out", "x"]).0, 2);
        assert_eq!(call(&["frobnicate"]).0, 2);
        assert_eq!(call(&["compare", "--designs", ",", "--widths", "4", "--libraries", "gdi"]).0, 2);
        assert_eq!(call(&["compare", "--designs", "cpa", "--widths", "0", "--libraries", "gdi"]).0, 2);
        assert_eq!(call(&["--help"]).0, 0);
    }

    #[test]
    fn missing_file_is_runtime_error() {
        let (code, _, err) = call(&["verify", "--netlist", "/nonexistent/x.net", "--adder", "rca", "--width", "2"]);
        assert_eq!(code, 1);
        assert!(err.starts_with("error:"));
    }

    #[test]
    fn compare_rows_and_config() {
        let (code, out, _) = call(&[
            "compare", "--designs", "rca,cpa", "--widths", "4,8", "--libraries", "gdi,cmos", "--random", "200",
        ]);
        assert_eq!(code, 0);
        let rows = out.lines().filter(|l| !l.starts_with('#')).count();
        assert_eq!(rows, 1 + 8);
        assert!(out.starts_with("# compare designs=cpa,rca widths=4,8 libraries=cmos,gdi random=200 seed=1 "));
    }
}
