fn main() {
    std::process::exit(ich_cli::main_with_args(std::env::args_os()));
}
