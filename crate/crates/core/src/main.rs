fn main() {
    let args: Vec<String> = std::env::args().collect();
    std::process::exit(policy_forest::cli::run(&args));
}
