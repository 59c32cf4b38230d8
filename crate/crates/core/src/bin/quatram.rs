use clap::Parser;

fn main() {
    let cli = quatram::cli::Cli::parse();
    match quatram::cli::run(cli) {
        Ok(code) => std::process::exit(code),
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(2);
        }
    }
}
