use clap::Parser;

use fml::cli::{execute, Cli};

fn main() {
    let cli = Cli::parse();
    let code = match execute(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("fml: {e}");
            e.exit_code()
        }
    };
    std::process::exit(code);
}
