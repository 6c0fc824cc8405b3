fn main() {
    std::process::exit(k3kit::cli::run(std::env::args_os()));
}
