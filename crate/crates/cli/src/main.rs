use std::io::{self, BufWriter};

use clap::Parser;
use kloos3_cli::args::Cli;

fn main() {
    let cli = Cli::parse();
    let stdout = io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    let code = kloos3_cli::run(&cli, &mut out, &mut io::stderr());
    drop(out);
    std::process::exit(code);
}
