fn main() {
    std::process::exit(magic_minors::cli::run(std::env::args_os()));
}
