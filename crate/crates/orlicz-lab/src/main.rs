fn main() {
    std::process::exit(orlicz_lab::cli::args::main_from_args(std::env::args_os()));
}
