fn main() {
    std::process::exit(cfworld::cli::run(std::env::args_os()));
}
