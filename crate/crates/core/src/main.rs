fn main() {
    std::process::exit(ising_core::cli::main_with_args(std::env::args_os()));
}
