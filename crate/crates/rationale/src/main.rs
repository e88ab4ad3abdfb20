fn main() {
    std::process::exit(rationale::cli::main_with_args(std::env::args_os()));
}
