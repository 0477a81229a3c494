fn main() {
    std::process::exit(hardscatter::cli::main_with_args(std::env::args_os()));
}
