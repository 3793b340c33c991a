use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::process::ExitCode;

use clap::Parser;
use vecquad_cli::{run, Cli};

fn main() -> ExitCode {
    // Exit 1 on bad arguments (clap's own code would be 2, which this tool
    // reserves for failed embedded assertions).
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            if e.use_stderr() {
                eprint!("{e}");
                return ExitCode::from(1);
            }
            // --help / --version
            print!("{e}");
            return ExitCode::SUCCESS;
        }
    };

    let result = match &cli.output {
        Some(path) => match File::create(path) {
            Ok(file) => {
                let mut w = BufWriter::new(file);
                let r = run(&cli, &mut w);
                if let Err(e) = w.flush() {
                    eprintln!("io error: {e}");
                    return ExitCode::from(1);
                }
                r
            }
            Err(e) => {
                eprintln!("cannot open {}: {e}", path.display());
                return ExitCode::from(1);
            }
        },
        None => {
            let stdout = io::stdout();
            let mut w = BufWriter::new(stdout.lock());
            let r = run(&cli, &mut w);
            if let Err(e) = w.flush() {
                eprintln!("io error: {e}");
                return ExitCode::from(1);
            }
            r
        }
    };

    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(1)
        }
    }
}
