fn main() {
    std::process::exit(fiberband_core::cli::main_with_args(std::env::args_os()));
}
