use clap::Parser;

fn main() {
    let cli = pcd::cli::Cli::parse();
    match pcd::cli::run(cli) {
        Ok(()) => {}
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(if e.is_validation() { 2 } else { 1 });
        }
    }
}
