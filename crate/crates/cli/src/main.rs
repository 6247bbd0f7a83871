use clap::Parser;
use gog_cli::app::{run, Cli};

fn main() {
    let cli = Cli::parse();
    let code = match run(&cli) {
        Ok(out) => {
            print!("{}", out.render(cli.format));
            out.code
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            2
        }
    };
    std::process::exit(code);
}
