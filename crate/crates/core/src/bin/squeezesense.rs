fn main() {
    std::process::exit(squeezesense::cli::run(std::env::args_os()));
}
