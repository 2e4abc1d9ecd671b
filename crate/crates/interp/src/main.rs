fn main() {
    std::process::exit(interp::cli::run(std::env::args_os()));
}
