use clap::Parser;

fn main() {
    let cli = zjones::cli::Cli::parse();
    std::process::exit(zjones::cli::run_and_print(&cli));
}
