use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{value_parser, Arg, ArgAction, ArgMatches, Command};
use pmr_core::codes;
use pmr_core::harness::{
    self, run_sweep, write_trace, CsvSink, Decoded, DecoderVariant, ExperimentConfig, PointContext, CSV_HEADER, KEYS,
};
use pmr_core::rvcm::IMax;

/// Exit code 1 for configuration problems, 2 for failures while running.
enum Failure {
    Config(String),
    Runtime(String),
}

impl Failure {
    fn config(e: impl std::fmt::Display) -> Self {
        Failure::Config(e.to_string())
    }

    fn runtime(e: impl std::fmt::Display) -> Self {
        Failure::Runtime(e.to_string())
    }
}

type Outcome = Result<(), Failure>;

fn config_args(cmd: Command) -> Command {
    let cmd = cmd.arg(
        Arg::new("config")
            .long("config")
            .short('c')
            .value_name("FILE")
            .value_parser(value_parser!(PathBuf))
            .help("key = value experiment file"),
    );
    KEYS.iter().fold(cmd, |cmd, (key, help)| {
        cmd.arg(
            Arg::new(*key)
                .long(*key)
                .value_name("VALUE")
                .help(*help)
                .help_heading("Config overrides"),
        )
    })
}

fn output_arg(required: bool, help: &'static str) -> Arg {
    Arg::new("output")
        .long("output")
        .short('o')
        .value_name("PATH")
        .value_parser(value_parser!(PathBuf))
        .required(required)
        .help(help)
}

fn cli() -> Command {
    Command::new("pmrsim")
        .version(clap::crate_version!())
        .about("Perpendicular magnetic recording channel simulator with turbo equalization and RVCM decoding")
        .subcommand_required(true)
        .arg_required_else_help(true)
        .subcommand(
            config_args(Command::new("simulate").about("Simulate one (snr_db, mismatch_db) point for every decoder"))
                .arg(output_arg(false, "CSV output (default: stdout)")),
        )
        .subcommand(
            config_args(Command::new("sweep").about("Simulate the snr_db x mismatch_db x decoders grid"))
                .arg(output_arg(true, "CSV output, flushed after every point")),
        )
        .subcommand(
            config_args(Command::new("design-equalizer").about("Design the MMSE equalizer at the first snr_db"))
                .arg(output_arg(false, "equalizer file (default: stdout)")),
        )
        .subcommand(
            config_args(Command::new("decode-trace").about("Dump one frame's RVCM candidate set as CSV"))
                .arg(
                    Arg::new("frame")
                        .long("frame")
                        .value_name("INDEX")
                        .value_parser(value_parser!(u64))
                        .default_value("0")
                        .help("frame index at the first snr_db and mismatch_db"),
                )
                .arg(output_arg(false, "trace CSV (default: stdout)")),
        )
        .subcommand(
            Command::new("gen-code")
                .about("Write the built-in parity-check matrices as alist files")
                .arg(
                    Arg::new("name")
                        .long("name")
                        .value_name("NAME")
                        .action(ArgAction::Append)
                        .value_parser(codes::BUILTIN_NAMES)
                        .help("code to write (default: all)"),
                )
                .arg(
                    Arg::new("out-dir")
                        .long("out-dir")
                        .value_name("DIR")
                        .value_parser(value_parser!(PathBuf))
                        .default_value("codes"),
                ),
        )
}

/// Defaults, then the config file, then command-line overrides.
fn resolve_config(m: &ArgMatches) -> Result<ExperimentConfig, Failure> {
    let mut cfg = match m.get_one::<PathBuf>("config") {
        Some(path) => ExperimentConfig::load(path).map_err(Failure::config)?,
        None => ExperimentConfig::default(),
    };
    for (key, _) in KEYS {
        if let Some(value) = m.get_one::<String>(key) {
            cfg.set(key, value).map_err(|e| Failure::config(format!("--{key}: {e}")))?;
        }
    }
    cfg.validate().map_err(Failure::config)?;
    Ok(cfg)
}

fn write_output(path: Option<&PathBuf>, text: &str) -> Outcome {
    match path {
        Some(path) => fs::write(path, text).map_err(|e| Failure::runtime(format!("{}: {e}", path.display()))),
        None => std::io::stdout().write_all(text.as_bytes()).map_err(Failure::runtime),
    }
}

fn single_point(cfg: &ExperimentConfig) -> Result<(f64, f64), Failure> {
    match (cfg.snr_db.as_slice(), cfg.mismatch_db.as_slice()) {
        ([snr], [mismatch]) => Ok((*snr, *mismatch)),
        _ => Err(Failure::Config(
            "simulate takes a single snr_db and mismatch_db; use sweep for grids".into(),
        )),
    }
}

fn prepare(cfg: &ExperimentConfig, snr: f64) -> Result<PointContext, Failure> {
    let code = harness::load_code(&cfg.code).map_err(Failure::config)?;
    PointContext::with_code(cfg, code, snr).map_err(Failure::runtime)
}

fn simulate(m: &ArgMatches) -> Outcome {
    let cfg = resolve_config(m)?;
    let (snr, mismatch) = single_point(&cfg)?;
    let ctx = prepare(&cfg, snr)?;
    let mut text = format!("{CSV_HEADER}\n");
    for &decoder in &cfg.decoders {
        let record = harness::run_point_with(&cfg, &ctx, mismatch, decoder).map_err(Failure::runtime)?;
        let (lo, hi) = record.fer_interval();
        log::info!("{decoder}: fer {:.3e} (95% {lo:.3e}..{hi:.3e})", record.fer());
        text.push_str(&record.csv_row());
        text.push('\n');
    }
    write_output(m.get_one("output"), &text)
}

fn sweep(m: &ArgMatches) -> Outcome {
    let cfg = resolve_config(m)?;
    harness::load_code(&cfg.code).map_err(Failure::config)?;
    let path: &PathBuf = m.get_one("output").expect("required");
    let mut sink = CsvSink::create(path).map_err(Failure::runtime)?;
    let outcome = run_sweep(&cfg, Some(&mut sink)).map_err(Failure::runtime)?;
    if outcome.failures.is_empty() {
        Ok(())
    } else {
        for f in &outcome.failures {
            eprintln!(
                "point snr_db={} mismatch_db={} decoder={} failed: {}",
                f.snr_db, f.mismatch_db, f.decoder, f.error
            );
        }
        Err(Failure::Runtime(format!("{} point(s) failed", outcome.failures.len())))
    }
}

fn design_equalizer(m: &ArgMatches) -> Outcome {
    let mut cfg = resolve_config(m)?;
    cfg.channel = harness::ChannelKind::Recording;
    cfg.equalizer = None;
    let snr = cfg.snr_db[0];
    let ctx = prepare(&cfg, snr)?;
    let eq = ctx.equalizer.expect("recording channel designs an equalizer");
    log::info!(
        "snr {snr} dB: {} taps, delay {}, residual mse {:?}",
        eq.taps.len(),
        eq.delay,
        eq.residual_mse
    );
    write_output(m.get_one("output"), &eq.to_text())
}

fn decode_trace(m: &ArgMatches) -> Outcome {
    let cfg = resolve_config(m)?;
    let decoder = cfg
        .decoders
        .iter()
        .copied()
        .find(|d| matches!(d, DecoderVariant::Rvcm(_)))
        .unwrap_or(DecoderVariant::Rvcm(IMax::All));
    let (snr, mismatch) = (cfg.snr_db[0], cfg.mismatch_db[0]);
    let index: u64 = *m.get_one("frame").expect("has default");
    let ctx = prepare(&cfg, snr)?;
    let frame = harness::generate_frame(&cfg, &ctx, harness::frame_seed(&cfg, snr, mismatch, index))
        .map_err(Failure::runtime)?;
    let Decoded::Rvcm(out) =
        harness::decode_frame(&cfg, &ctx, decoder, &frame.z, mismatch).map_err(Failure::runtime)?
    else {
        unreachable!("decoder is an rvcm variant")
    };
    let correct = out.best.hard_bits == frame.codeword;
    log::info!(
        "frame {index}: {} candidates, selected codeword {}, correct {correct}",
        out.candidates.len(),
        out.best.is_codeword
    );
    let mut buf = Vec::new();
    write_trace(&mut buf, &out.candidates).map_err(Failure::runtime)?;
    write_output(m.get_one("output"), &String::from_utf8(buf).expect("ASCII CSV"))
}

fn gen_code(m: &ArgMatches) -> Outcome {
    let dir: &PathBuf = m.get_one("out-dir").expect("has default");
    let names: Vec<&str> = match m.get_many::<String>("name") {
        Some(names) => names.map(String::as_str).collect(),
        None => codes::BUILTIN_NAMES.to_vec(),
    };
    fs::create_dir_all(dir).map_err(|e| Failure::runtime(format!("{}: {e}", dir.display())))?;
    for name in names {
        let h = codes::builtin(name).map_err(Failure::config)?;
        let path = dir.join(format!("{name}.alist"));
        h.save_alist(&path).map_err(Failure::runtime)?;
        log::info!("{}: n = {}, k = {}, m = {}", path.display(), h.n(), h.k(), h.m());
    }
    Ok(())
}

fn run(m: &ArgMatches) -> Outcome {
    match m.subcommand() {
        Some(("simulate", m)) => simulate(m),
        Some(("sweep", m)) => sweep(m),
        Some(("design-equalizer", m)) => design_equalizer(m),
        Some(("decode-trace", m)) => decode_trace(m),
        Some(("gen-code", m)) => gen_code(m),
        _ => unreachable!("subcommand required"),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    let matches = match cli().try_get_matches() {
        Ok(m) => m,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(&matches) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Config(msg)) => {
            eprintln!("config error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Runtime(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn command_is_well_formed() {
        cli().debug_assert();
    }

    #[test]
    fn flags_override_file() {
        let m = cli()
            .try_get_matches_from(["pmrsim", "simulate", "--snr_db", "7.5", "--decoders", "bp,rvcm:n"])
            .unwrap();
        let (_, sub) = m.subcommand().unwrap();
        let cfg = resolve_config(sub).ok().unwrap();
        assert_eq!(cfg.snr_db, vec![7.5]);
        assert_eq!(cfg.decoders.len(), 2);
    }

    #[test]
    fn bad_override_is_config_error() {
        let m = cli().try_get_matches_from(["pmrsim", "simulate", "--max_frames", "lots"]).unwrap();
        let (_, sub) = m.subcommand().unwrap();
        assert!(matches!(resolve_config(sub), Err(Failure::Config(_))));
    }
}
