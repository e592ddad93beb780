use clap::Parser;

fn main() {
    let cli = polyvor::cli::Cli::parse();
    std::process::exit(polyvor::cli::main_with(cli));
}
