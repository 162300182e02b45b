//! `wuyang` — sweeps and tables for the geometry and topology of a driven
//! two-level system. Physical inputs are plain MHz (multiplied by 2π on the
//! way in); all outputs carry the resolved rad/µs values in their metadata.
//!
//! Exit codes: 0 success, 2 usage error, 3 computation failure.

mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{ArgAction, Args, Parser, Subcommand};

use config::FileConfig;
use wuyang_core::qubit::{Band, DriveParams};
use wuyang_core::runner::{run, RunCommand, RunConfig, SweepSpec};
use wuyang_core::sweep::{write_output, OutputFormat};
use wuyang_core::topology::ChernRoute;
use wuyang_core::Error;

#[derive(Parser)]
#[command(
    name = "wuyang",
    version,
    about = "Berry curvature, Chern numbers, monopole fields and quench dynamics of a driven qubit",
    after_help = "Physical quantities are given in plain MHz and converted to rad/us \
                  internally. A flat `key = value` config file (--config) supplies \
                  defaults; command-line flags override it."
)]
struct Cli {
    /// Flat key = value config file supplying defaults for any long flag.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Output path (stdout when omitted).
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Output format: csv or json.
    #[arg(long, global = true)]
    format: Option<String>,

    /// Log resolved settings and wall time to stderr.
    #[arg(long, global = true, action = ArgAction::SetTrue)]
    verbose: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Default)]
struct DriveArgs {
    /// Detuning sweep amplitude Δ₁ in MHz (default 30).
    #[arg(long)]
    delta1_mhz: Option<f64>,

    /// Detuning offset Δ₂ in MHz (default 0).
    #[arg(long)]
    delta2_mhz: Option<f64>,

    /// Rabi amplitude Ωₙ in MHz (default 10).
    #[arg(long)]
    omega_mhz: Option<f64>,
}

#[derive(Subcommand)]
enum Command {
    /// Berry curvature over the parameter sphere by both routes.
    Curvature {
        #[command(flatten)]
        drive: DriveArgs,
        /// ground or excited.
        #[arg(long)]
        band: Option<String>,
        /// Grid as NxM (default 64x64).
        #[arg(long)]
        grid: Option<String>,
    },
    /// One first Chern number by the chosen route.
    Chern {
        #[command(flatten)]
        drive: DriveArgs,
        #[arg(long)]
        band: Option<String>,
        /// plaquette, spectral, dynamical or two_patch (default plaquette).
        #[arg(long)]
        route: Option<String>,
        #[arg(long)]
        grid: Option<String>,
        /// Monopole charge for the two_patch route (default 0.5).
        #[arg(long)]
        g_charge: Option<f64>,
        /// Sphere radius for the two_patch route (default 1).
        #[arg(long)]
        radius: Option<f64>,
        /// Transition-function winding n for the two_patch route.
        #[arg(long, allow_hyphen_values = true)]
        winding: Option<i32>,
        /// Ramp duration in µs for the dynamical route (default 1).
        #[arg(long)]
        t_ramp_us: Option<f64>,
        #[arg(long)]
        dt_us: Option<f64>,
    },
    /// Chern number against Δ₂/Δ₁ (the topological transition).
    Transition {
        #[command(flatten)]
        drive: DriveArgs,
        #[arg(long)]
        band: Option<String>,
        #[arg(long)]
        route: Option<String>,
        /// Sweep START:STOP:COUNT of Δ₂/Δ₁ (default -2:2:41).
        #[arg(long, allow_hyphen_values = true)]
        delta2_over_delta1: Option<String>,
        #[arg(long)]
        grid: Option<String>,
        #[arg(long)]
        t_ramp_us: Option<f64>,
        #[arg(long)]
        dt_us: Option<f64>,
    },
    /// One ramp: ⟨σ_y⟩ record and extracted curvature.
    Quench {
        #[command(flatten)]
        drive: DriveArgs,
        #[arg(long)]
        band: Option<String>,
        /// Ramp duration in µs (required).
        #[arg(long)]
        t_ramp_us: Option<f64>,
        #[arg(long)]
        dt_us: Option<f64>,
        /// Output rows (default 2001).
        #[arg(long)]
        samples: Option<usize>,
        /// Enable simulated projective readout with this many shots.
        #[arg(long)]
        shots: Option<u64>,
        /// RNG seed, used only with --shots (default 0).
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Fidelity map over (θ_meas, Δ₂/Δ₁), or the θ = π cut with --cut.
    Fidelity {
        #[command(flatten)]
        drive: DriveArgs,
        /// Initial bare state (default ground).
        #[arg(long)]
        band: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        delta2_over_delta1: Option<String>,
        /// Number of θ_meas values in [0, π] (default 33).
        #[arg(long)]
        theta_count: Option<usize>,
        #[arg(long)]
        t_ramp_us: Option<f64>,
        #[arg(long)]
        dt_us: Option<f64>,
        /// bare_g, bare_e or degenerate_s (default bare_e).
        #[arg(long)]
        target: Option<String>,
        /// Emit the four θ = π fidelity families instead of a map.
        #[arg(long, action = ArgAction::SetTrue)]
        cut: bool,
    },
    /// Gauss-Bonnet assembly on the sphere section.
    Geometry {
        /// Cap colatitude as a fraction of π (default 1 = closed sphere).
        #[arg(long)]
        theta_cap_over_pi: Option<f64>,
        #[arg(long)]
        grid: Option<String>,
    },
    /// Monopole flux and two-patch Chern number per radius.
    Monopole {
        #[arg(long, allow_hyphen_values = true)]
        g_charge: Option<f64>,
        /// Comma-separated radii (default 0.5,1,2).
        #[arg(long)]
        radii: Option<String>,
        #[arg(long)]
        grid: Option<String>,
    },
}

fn parse_grid(text: &str) -> Result<(usize, usize), Error> {
    let parts: Vec<&str> = text.split(['x', 'X']).collect();
    if parts.len() != 2 {
        return Err(Error::InvalidInput(format!(
            "--grid must be NxM, got '{text}'"
        )));
    }
    let n = parts[0]
        .parse()
        .map_err(|_| Error::InvalidInput(format!("bad grid rows in '{text}'")))?;
    let m = parts[1]
        .parse()
        .map_err(|_| Error::InvalidInput(format!("bad grid columns in '{text}'")))?;
    Ok((n, m))
}

fn parse_radii(text: &str) -> Result<Vec<f64>, Error> {
    text.split(',')
        .map(|s| {
            s.trim()
                .parse::<f64>()
                .map_err(|_| Error::InvalidInput(format!("bad radius '{s}' in --radii")))
        })
        .collect()
}

struct Resolver {
    file: FileConfig,
}

impl Resolver {
    /// Flag value, then config-file value, then the built-in default.
    fn get<T: std::str::FromStr + Clone>(
        &self,
        flag: Option<T>,
        key: &str,
        default: T,
    ) -> Result<T, Error> {
        match flag {
            Some(v) => Ok(v),
            None => Ok(self.file.get::<T>(key)?.unwrap_or(default)),
        }
    }

    fn required<T: std::str::FromStr + Clone>(
        &self,
        flag: Option<T>,
        key: &str,
    ) -> Result<T, Error> {
        match flag {
            Some(v) => Ok(v),
            None => self
                .file
                .get::<T>(key)?
                .ok_or_else(|| Error::InvalidInput(format!("missing required flag --{key}"))),
        }
    }

    fn drive(&self, args: &DriveArgs) -> Result<DriveParams, Error> {
        let d1 = self.get(args.delta1_mhz, "delta1-mhz", 30.0)?;
        let d2 = self.get(args.delta2_mhz, "delta2-mhz", 0.0)?;
        let wn = self.get(args.omega_mhz, "omega-mhz", 10.0)?;
        DriveParams::from_mhz(d1, d2, wn)
    }

    fn band(&self, flag: &Option<String>) -> Result<Band, Error> {
        self.get(flag.clone(), "band", "ground".to_string())?.parse()
    }

    fn route(&self, flag: &Option<String>) -> Result<ChernRoute, Error> {
        self.get(flag.clone(), "route", "plaquette".to_string())?.parse()
    }

    fn grid(&self, flag: &Option<String>, default: (usize, usize)) -> Result<(usize, usize), Error> {
        match self.get(flag.clone(), "grid", String::new())? {
            s if s.is_empty() => Ok(default),
            s => parse_grid(&s),
        }
    }

    fn sweep(&self, flag: &Option<String>) -> Result<SweepSpec, Error> {
        self.get(
            flag.clone(),
            "delta2-over-delta1",
            "-2:2:41".to_string(),
        )?
        .parse()
    }
}

fn resolve(cli: &Cli) -> Result<RunConfig, Error> {
    let file = match &cli.config {
        Some(path) => FileConfig::load(path)?,
        None => FileConfig::default(),
    };
    let r = Resolver { file };

    let command = match &cli.command {
        Command::Curvature { drive, band, grid } => RunCommand::Curvature {
            params: r.drive(drive)?,
            band: r.band(band)?,
            grid: r.grid(grid, (64, 64))?,
        },
        Command::Chern {
            drive,
            band,
            route,
            grid,
            g_charge,
            radius,
            winding,
            t_ramp_us,
            dt_us,
        } => RunCommand::Chern {
            params: r.drive(drive)?,
            band: r.band(band)?,
            route: r.route(route)?,
            grid: r.grid(grid, (48, 48))?,
            g_charge: r.get(*g_charge, "g-charge", 0.5)?,
            radius: r.get(*radius, "radius", 1.0)?,
            winding: *winding,
            t_ramp: r.get(*t_ramp_us, "t-ramp-us", 1.0)?,
            dt: *dt_us,
        },
        Command::Transition {
            drive,
            band,
            route,
            delta2_over_delta1,
            grid,
            t_ramp_us,
            dt_us,
        } => RunCommand::Transition {
            params: r.drive(drive)?,
            band: r.band(band)?,
            route: r.route(route)?,
            sweep: r.sweep(delta2_over_delta1)?,
            grid: r.grid(grid, (48, 48))?,
            t_ramp: r.get(*t_ramp_us, "t-ramp-us", 1.0)?,
            dt: *dt_us,
        },
        Command::Quench {
            drive,
            band,
            t_ramp_us,
            dt_us,
            samples,
            shots,
            seed,
        } => RunCommand::Quench {
            params: r.drive(drive)?,
            band: r.band(band)?,
            t_ramp: r.required(*t_ramp_us, "t-ramp-us")?,
            dt: *dt_us,
            samples: r.get(*samples, "samples", 2001)?,
            shots: *shots,
            seed: r.get(*seed, "seed", 0)?,
        },
        Command::Fidelity {
            drive,
            band,
            delta2_over_delta1,
            theta_count,
            t_ramp_us,
            dt_us,
            target,
            cut,
        } => RunCommand::Fidelity {
            params: r.drive(drive)?,
            band: r.band(band)?,
            sweep: r.sweep(delta2_over_delta1)?,
            theta_count: r.get(*theta_count, "theta-count", 33)?,
            t_ramp: r.get(*t_ramp_us, "t-ramp-us", 20.0)?,
            dt: *dt_us,
            target: r
                .get(target.clone(), "target", "bare_e".to_string())?
                .parse()?,
            cut: *cut,
        },
        Command::Geometry {
            theta_cap_over_pi,
            grid,
        } => RunCommand::Geometry {
            theta_cap_over_pi: r.get(*theta_cap_over_pi, "theta-cap-over-pi", 1.0)?,
            grid: r.grid(grid, (256, 256))?,
        },
        Command::Monopole {
            g_charge,
            radii,
            grid,
        } => RunCommand::Monopole {
            g_charge: r.get(*g_charge, "g-charge", 0.5)?,
            radii: parse_radii(&r.get(radii.clone(), "radii", "0.5,1,2".to_string())?)?,
            grid: r.grid(grid, (32, 32))?,
        },
    };

    let format: OutputFormat = r
        .get(cli.format.clone(), "format", "csv".to_string())?
        .parse()?;
    let out = match &cli.out {
        Some(p) => Some(p.clone()),
        None => r.file.get::<String>("out")?.map(PathBuf::from),
    };
    Ok(RunConfig {
        command,
        out,
        format,
    })
}

fn execute() -> Result<(), Error> {
    let cli = Cli::parse();
    let config = resolve(&cli)?;
    let started = std::time::Instant::now();
    let result = run(&config)?;
    if cli.verbose {
        eprintln!(
            "wuyang: {} finished in {:.3} s ({} rows)",
            config.command.label(),
            started.elapsed().as_secs_f64(),
            result.rows.len()
        );
    }
    match &config.out {
        Some(path) => write_output(&result, path, config.format)?,
        None => print!("{}", result.render(config.format)),
    }
    Ok(())
}

fn main() -> ExitCode {
    match execute() {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) if e.is_usage() => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(3)
        }
    }
}
