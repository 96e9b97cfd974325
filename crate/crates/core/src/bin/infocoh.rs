use clap::Parser;
use infocoh::cli::{run, Cli, Format};

fn main() {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(outcome) => {
            let json =
                serde_json::to_string_pretty(&outcome.report).expect("reports are serializable");
            if let Some(path) = &cli.out {
                if let Err(e) = std::fs::write(path, format!("{json}\n")) {
                    eprintln!("error: cannot write {}: {e}", path.display());
                    std::process::exit(2);
                }
            }
            match cli.format {
                Format::Text => print!("{}", outcome.summary),
                Format::Json => println!("{json}"),
            }
            std::process::exit(outcome.exit);
        }
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(2);
        }
    }
}
