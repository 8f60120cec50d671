fn main() {
    std::process::exit(popsrep::cli::run(std::env::args_os()));
}
