fn main() {
    std::process::exit(bilinear_poisson::cli::main_with_args(std::env::args_os()));
}
