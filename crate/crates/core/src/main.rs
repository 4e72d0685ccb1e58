fn main() {
    std::process::exit(perron::cli::run(std::env::args_os()));
}
