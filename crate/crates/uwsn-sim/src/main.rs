use clap::Parser;
use uwsn_sim::cli::{build_request, execute, Args};

fn main() {
    let args = Args::parse();
    let request = match build_request(&args) {
        Ok(req) => req,
        Err(err) => {
            eprintln!("error: {err}");
            std::process::exit(2);
        }
    };
    match execute(&request) {
        Ok(summary) => print!("{summary}"),
        Err(err) => {
            eprintln!("error: {err}");
            std::process::exit(1);
        }
    }
}
