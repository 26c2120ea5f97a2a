use std::process::ExitCode;

use nestlab_cli::{run, summarize, CliError, Options, Workspace};

const USAGE: &str = "\
usage: nestlab <command> [<file>] [names...] [--horizon N] [--depth D] [--bound B] [--json OUT]

commands:
  classify FILE NAME            order-conservation flags of an embedding
  decompose FILE NAME           ordered-sum decomposition and group types
  k0 FILE NAME                  multiplicity matrix of an embedding or ghom
  gmap FILE NAME                cell-level homomorphism data
  conjugate FILE NAME NAME      decide inner conjugacy of two embeddings
  recover FILE NAME             summands from a multiplicity matrix
  lift FILE NAME [loc|op]       lift a ghom to an embedding
  compose FILE OUTER INNER      compose two embeddings
  system-classify FILE NAME     composite flags of a direct system
  scale FILE SYS ELEM STAGE KIND   scale membership (sigma|sigma0|sigma-oc|sigma-op)
  compare FILE SYS SYS          bounded intertwining search
  examples                      run the built-in example gallery

options:
  --horizon N   stages explored by colimit decisions (default 8)
  --depth D     commuting triangles required by compare (default 2)
  --bound B     crossover entry bound for compare (default 2)
  --json OUT    also write the JSON report to a file
";

struct Cli {
    command: String,
    file: Option<String>,
    names: Vec<String>,
    opts: Options,
    json_out: Option<String>,
}

fn parse_args(argv: &[String]) -> Result<Cli, String> {
    let mut positional = Vec::new();
    let mut opts = Options::default();
    let mut json_out = None;
    let mut it = argv.iter();
    while let Some(arg) = it.next() {
        let mut numeric = |name: &str| -> Result<usize, String> {
            it.next()
                .ok_or_else(|| format!("{name} needs a value"))?
                .parse()
                .map_err(|_| format!("{name} needs an integer value"))
        };
        match arg.as_str() {
            "--horizon" => opts.horizon = numeric("--horizon")?,
            "--depth" => opts.depth = numeric("--depth")?,
            "--bound" => opts.bound = numeric("--bound")?,
            "--json" => {
                json_out = Some(
                    it.next()
                        .ok_or_else(|| "--json needs a file name".to_string())?
                        .clone(),
                )
            }
            s if s.starts_with("--") => return Err(format!("unknown option '{s}'")),
            s => positional.push(s.to_string()),
        }
    }
    let mut positional = positional.into_iter();
    let command = positional.next().ok_or_else(|| "missing command".to_string())?;
    let file = if command == "examples" {
        None
    } else {
        Some(
            positional
                .next()
                .ok_or_else(|| format!("command '{command}' needs an input file"))?,
        )
    };
    Ok(Cli {
        command,
        file,
        names: positional.collect(),
        opts,
        json_out,
    })
}

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().skip(1).collect();
    let cli = match parse_args(&argv) {
        Ok(cli) => cli,
        Err(msg) => {
            eprintln!("usage error: {msg}\n\n{USAGE}");
            return ExitCode::from(2);
        }
    };

    let workspace = match &cli.file {
        None => Workspace::default(),
        Some(path) => {
            let input = match std::fs::read_to_string(path) {
                Ok(s) => s,
                Err(e) => {
                    eprintln!("error: cannot read '{path}': {e}");
                    return ExitCode::from(1);
                }
            };
            match Workspace::parse(&input) {
                Ok(ws) => ws,
                Err(e) => {
                    eprintln!("error: {path}: {e}");
                    return ExitCode::from(1);
                }
            }
        }
    };

    let report = match run(&cli.command, &workspace, &cli.names, &cli.opts) {
        Ok(report) => report,
        Err(CliError::Usage(msg)) => {
            eprintln!("usage error: {msg}\n\n{USAGE}");
            return ExitCode::from(2);
        }
        Err(CliError::Domain(msg)) => {
            eprintln!("error: {msg}");
            return ExitCode::from(1);
        }
    };

    let pretty = serde_json::to_string_pretty(&report).expect("report serializes");
    {
        // tolerate a closed pipe on stdout
        use std::io::Write;
        let mut out = std::io::stdout().lock();
        let _ = writeln!(out, "{}", summarize(&report));
        let _ = writeln!(out, "{pretty}");
    }
    if let Some(out) = &cli.json_out {
        if let Err(e) = std::fs::write(out, format!("{pretty}\n")) {
            eprintln!("error: cannot write '{out}': {e}");
            return ExitCode::from(1);
        }
    }
    ExitCode::SUCCESS
}
