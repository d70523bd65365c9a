fn main() {
    std::process::exit(flamefront::cli::run(std::env::args_os()));
}
