fn main() {
    std::process::exit(tvoa::cli::run(std::env::args_os()));
}
