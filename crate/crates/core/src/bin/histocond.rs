fn main() {
    std::process::exit(histocond::cli::main_with_args(std::env::args_os()));
}
