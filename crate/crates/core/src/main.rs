fn main() {
    std::process::exit(qcite::cli::main_with_args(std::env::args_os()));
}
