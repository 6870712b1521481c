fn main() {
    std::process::exit(tvcc::cli::main_with_args(std::env::args()));
}
