fn main() {
    std::process::exit(csflab::harness::cli::main_with_args(std::env::args_os()));
}
