fn main() {
    std::process::exit(paramstab::cli::run(std::env::args_os()));
}
