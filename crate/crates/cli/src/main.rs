mod commands;
mod config;

use clap::{Args, Parser, Subcommand};
use config::Layers;
use sha2::{Digest, Sha256};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

#[derive(Parser, Debug)]
#[command(name = "qcensus", version, about = "Binary quartic forms with small Galois group")]
struct Cli {
    /// Output format: csv or json
    #[arg(long, global = true)]
    format: Option<String>,
    /// Worker threads for the census
    #[arg(long, global = true)]
    shards: Option<String>,
    /// Write the primary output here instead of stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Write a run manifest (config, versions, timing, output hashes)
    #[arg(long, global = true)]
    manifest: Option<PathBuf>,
    /// Flat key=value file consulted after flags and QC_* variables
    #[arg(long, global = true, env = "QC_CONFIG")]
    config: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Invariants, Galois group, signature and maximality of a form a4,a3,a2,a1,a0
    Classify { form: String },
    /// A family member given as i:A,B,C
    Family { coords: String },
    /// F = h(f, g) for the lattice basis attached to J
    Decompose {
        form: String,
        /// J as c2,c1,c0; defaults to the first family containing F
        #[arg(long)]
        j: Option<String>,
    },
    /// Maximality report for family coordinates i:A,B,C
    Maximal {
        coords: String,
        /// Only this prime
        #[arg(long)]
        p: Option<String>,
    },
    /// Compare the maximality criteria with the order oracle on a box
    Validate {
        #[arg(long = "box")]
        radius: Option<String>,
        #[arg(long)]
        pmax: Option<String>,
        /// Drop one alternative of the family-1 criterion at p = 2
        #[arg(long)]
        inject_bug: bool,
    },
    /// Local density tables
    Densities(DensityArgs),
    /// Exact counts
    Census {
        #[command(subcommand)]
        mode: CensusCmd,
    },
    /// Leading constants
    Constants {
        #[arg(long, value_parser = ["carefree", "d4-leading", "v4-leading", "integrals"])]
        which: String,
        #[arg(long)]
        json: bool,
        #[arg(long)]
        prime_limit: Option<String>,
    },
}

#[derive(Args, Debug)]
struct DensityArgs {
    #[arg(long, value_parser = ["rho1", "rho2", "rho2_zero", "rho2_prime", "rho_v4"])]
    kind: String,
    /// Comma-separated values of a (ignored for rho_v4)
    #[arg(long, default_value = "1")]
    a: String,
    /// Comma-separated moduli
    #[arg(long, default_value = "2,3,5,7")]
    m: String,
}

#[derive(Args, Debug)]
pub struct CensusArgs {
    /// Bound on |conductor| or |disc|; accepts 1e8, 2.5e6, 1_000_000
    #[arg(long)]
    x: Option<String>,
    /// 0, 1, 2 or all
    #[arg(long)]
    r2: Option<String>,
    /// Comma-separated subset of 1,2,3
    #[arg(long)]
    families: Option<String>,
    /// Write per-class records as CSV
    #[arg(long)]
    emit: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum CensusCmd {
    Conductor(CensusArgs),
    Discriminant {
        #[command(flatten)]
        args: CensusArgs,
        /// d4, c4 or v4
        #[arg(long)]
        galois: Option<String>,
    },
}

pub struct Output {
    pub text: String,
    /// extra files written by the command, with their contents
    pub files: Vec<(PathBuf, Vec<u8>)>,
    pub ok: bool,
}

fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

fn run(cli: Cli, layers: &mut Layers) -> Result<Output, String> {
    let format = cli.format.clone();
    let fmt = |layers: &mut Layers, default: &str| -> Result<String, String> {
        let f = layers.get_or("format", format.as_deref(), default);
        match f.as_str() {
            "csv" | "json" => Ok(f),
            _ => Err(format!("--format must be csv or json, got '{f}'")),
        }
    };
    let shards = layers.int("shards", cli.shards.as_deref())?.unwrap_or(1);
    if !(1..=1024).contains(&shards) {
        return Err("--shards must be between 1 and 1024".into());
    }
    let shards = shards as usize;
    match cli.cmd {
        Cmd::Classify { form } => commands::classify(&form, &fmt(layers, "json")?),
        Cmd::Family { coords } => commands::family(&coords, &fmt(layers, "json")?),
        Cmd::Decompose { form, j } => commands::decompose(&form, j.as_deref(), &fmt(layers, "json")?),
        Cmd::Maximal { coords, p } => {
            let p = layers.int("p", p.as_deref())?;
            commands::maximal(&coords, p, &fmt(layers, "json")?)
        }
        Cmd::Validate { radius, pmax, inject_bug } => {
            let r = layers.int("box", radius.as_deref())?.unwrap_or(5);
            let pmax = layers.int("pmax", pmax.as_deref())?.unwrap_or(13);
            commands::validate(r, pmax, inject_bug, &fmt(layers, "json")?)
        }
        Cmd::Densities(d) => commands::densities(&d.kind, &d.a, &d.m, &fmt(layers, "csv")?),
        Cmd::Census { mode } => {
            let (mode, args, galois) = match mode {
                CensusCmd::Conductor(a) => ("conductor", a, None),
                CensusCmd::Discriminant { args, galois } => ("discriminant", args, galois),
            };
            let x = layers.require_int("x", args.x.as_deref())?;
            let r2 = layers.get_or("r2", args.r2.as_deref(), "all");
            let families = layers.get_or("families", args.families.as_deref(), "1,2,3");
            let galois = layers.get_or("galois", galois.as_deref(), "d4");
            let req = commands::CensusRequest { mode, x, r2, families, galois, shards, emit: args.emit };
            commands::census(req, &fmt(layers, "json")?)
        }
        Cmd::Constants { which, json, prime_limit } => {
            let limit = layers.int("prime_limit", prime_limit.as_deref())?;
            let f = if json { "json".to_string() } else { fmt(layers, "csv")? };
            commands::constants(&which, limit, &f)
        }
    }
}

fn main() -> ExitCode {
    let start = Instant::now();
    let argv: Vec<String> = std::env::args().collect();
    let cli = Cli::parse();
    let mut layers = match Layers::load(cli.config.as_deref()) {
        Ok(l) => l,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let out_path = layers.get("out", cli.out.as_ref().and_then(|p| p.to_str())).map(PathBuf::from);
    let manifest_path = layers.get("manifest", cli.manifest.as_ref().and_then(|p| p.to_str())).map(PathBuf::from);
    let command = format!("{:?}", cli.cmd);
    let shards_flag = cli.shards.clone();
    let out = match run(cli, &mut layers) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let mut hashes = serde_json::Map::new();
    let write = |path: &PathBuf, bytes: &[u8]| std::fs::write(path, bytes).map_err(|e| format!("{}: {e}", path.display()));
    for (path, bytes) in &out.files {
        if let Err(e) = write(path, bytes) {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
        hashes.insert(path.display().to_string(), sha256_hex(bytes).into());
    }
    match &out_path {
        Some(p) => {
            if let Err(e) = write(p, out.text.as_bytes()) {
                eprintln!("error: {e}");
                return ExitCode::from(2);
            }
            hashes.insert(p.display().to_string(), sha256_hex(out.text.as_bytes()).into());
        }
        None => {
            print!("{}", out.text);
            hashes.insert("stdout".into(), sha256_hex(out.text.as_bytes()).into());
        }
    }
    if let Some(mp) = manifest_path {
        let shards = layers.int("shards", shards_flag.as_deref()).ok().flatten().unwrap_or(1);
        let config: serde_json::Map<_, _> = layers
            .resolved
            .iter()
            .map(|(k, (v, s))| (k.clone(), serde_json::json!({ "value": v, "source": s })))
            .collect();
        let m = serde_json::json!({
            "command": command,
            "argv": argv,
            "config": config,
            "versions": {
                "qcensus": env!("CARGO_PKG_VERSION"),
                "quartic_census": quartic_census::VERSION,
            },
            "wall_time_s": start.elapsed().as_secs_f64(),
            "shards": shards,
            "outputs": hashes,
        });
        if let Err(e) = write(&mp, (serde_json::to_string_pretty(&m).unwrap() + "\n").as_bytes()) {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    if out.ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
