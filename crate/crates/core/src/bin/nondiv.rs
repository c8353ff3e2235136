use clap::Parser;

fn main() {
    let cli = nondiv::cli::Cli::parse();
    std::process::exit(nondiv::cli::main_with(cli));
}
