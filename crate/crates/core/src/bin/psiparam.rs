fn main() {
    std::process::exit(psiparam::cli::main_with_args(std::env::args_os()));
}
