use clap::Parser;

use delayed_choice::cli::{run, Cli};

fn main() {
    let cli = Cli::parse();
    let code = run(cli, std::io::stdout().lock(), std::io::stderr().lock());
    std::process::exit(code);
}
