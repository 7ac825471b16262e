use clap::Parser;

fn main() {
    let cli = pcmap_cli::Cli::parse();
    std::process::exit(pcmap_cli::run(&cli));
}
