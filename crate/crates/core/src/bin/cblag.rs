fn main() {
    std::process::exit(checkerboard_lagrange::cli::run(std::env::args_os()));
}
