use clap::Parser;

fn main() {
    let cli = taba_cli::Cli::parse();
    std::process::exit(taba_cli::run(&cli));
}
