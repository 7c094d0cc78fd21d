use clap::Parser;
use residuum::cli::{run, Args};

fn main() {
    let args = Args::parse();
    let (outcome, json_only) = run(&args);
    print!("{}", outcome.render(json_only));
    std::process::exit(outcome.exit);
}
