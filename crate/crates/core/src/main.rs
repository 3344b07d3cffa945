fn main() {
    std::process::exit(freemagma::cli::main_with_args(std::env::args_os()));
}
