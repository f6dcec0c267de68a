use clap::Parser;

use microswim_cli::args::Cli;

fn main() {
    let cli = Cli::parse();
    if let Err(e) = microswim_cli::run(&cli) {
        eprintln!("microswim: {e}");
        std::process::exit(e.exit_code());
    }
}
