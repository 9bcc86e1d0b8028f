fn main() {
    std::process::exit(qwvd_cli::run_cli(std::env::args_os()));
}
