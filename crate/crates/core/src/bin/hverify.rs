fn main() {
    std::process::exit(hverify::cli::run_cli(std::env::args_os()));
}
