fn main() {
    let argv: Vec<String> = std::env::args().collect();
    std::process::exit(marked_groups::cli::run(&argv));
}
