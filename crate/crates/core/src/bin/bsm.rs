fn main() {
    std::process::exit(bsm_core::cli::run(std::env::args_os()));
}
