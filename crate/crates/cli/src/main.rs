use clap::Parser;

fn main() {
    let cli = psusy::Cli::parse();
    std::process::exit(psusy::run(&cli.command));
}
