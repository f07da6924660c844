fn main() {
    std::process::exit(tvq_core::cli::run(std::env::args_os()));
}
