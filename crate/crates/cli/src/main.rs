fn main() {
    std::process::exit(arboreal_cli::run(std::env::args_os()));
}
