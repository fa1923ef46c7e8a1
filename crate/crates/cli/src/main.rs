use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};

use tfk_cli::{catalog_document, catalog_list, parse_input, resolve_precision, run, CliError, Command, Options};

#[derive(Copy, Clone, Debug, ValueEnum)]
enum Cmd {
    Validate,
    Fano,
    Candidates,
    Kstab,
    Soliton,
    Symmetry,
    Report,
    CatalogList,
}

/// Stability and soliton checks for Fano varieties with a complexity one torus action.
#[derive(Parser, Debug)]
#[command(name = "tfk", version)]
struct Args {
    #[arg(value_enum)]
    command: Cmd,
    /// Input document (JSON)
    #[arg(long, conflicts_with = "catalog")]
    input: Option<PathBuf>,
    /// Built-in example, see `catalog-list`
    #[arg(long)]
    catalog: Option<String>,
    /// Significant decimal digits for floating point stages
    #[arg(long)]
    precision: Option<u32>,
    /// Write SVG pictures into this directory
    #[arg(long)]
    svg: Option<PathBuf>,
    /// Print the machine readable report
    #[arg(long)]
    json: bool,
    /// Include stage timings (makes output nondeterministic)
    #[arg(long)]
    timings: bool,
}

fn main() -> ExitCode {
    let args = Args::parse();
    match real_main(args) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn real_main(args: Args) -> Result<i32, CliError> {
    let cmd = match args.command {
        Cmd::CatalogList => {
            if args.json {
                println!("{}", serde_json::to_string_pretty(&catalog_list()).expect("json"));
            } else {
                for name in catalog_list() {
                    println!("{name}");
                }
            }
            return Ok(0);
        }
        Cmd::Validate => Command::Validate,
        Cmd::Fano => Command::Fano,
        Cmd::Candidates => Command::Candidates,
        Cmd::Kstab => Command::Kstab,
        Cmd::Soliton => Command::Soliton,
        Cmd::Symmetry => Command::Symmetry,
        Cmd::Report => Command::Report,
    };
    let doc = match (&args.input, &args.catalog) {
        (Some(path), _) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
            parse_input(&text)?
        }
        (None, Some(name)) => catalog_document(name)?,
        (None, None) => {
            return Err(CliError::Usage("one of --input or --catalog is required".into()));
        }
    };
    let env = std::env::var("TFK_PRECISION").ok();
    let opts = Options {
        precision: Some(resolve_precision(args.precision, &doc, env.as_deref())?),
        timings: args.timings,
        svg_dir: args.svg,
    };
    let out = run(cmd, &doc, &opts)?;
    if args.json {
        println!("{}", serde_json::to_string_pretty(&out.json).expect("json"));
    } else {
        print!("{}", out.text);
    }
    Ok(out.exit_code)
}
