fn main() {
    std::process::exit(wproj::cli::run(std::env::args_os()));
}
