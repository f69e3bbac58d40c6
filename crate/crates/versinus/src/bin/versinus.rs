fn main() {
    std::process::exit(versinus::cli::main_with_args(std::env::args_os()));
}
