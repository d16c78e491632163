fn main() {
    std::process::exit(flavorsim::cli::main_with_args(std::env::args_os()));
}
