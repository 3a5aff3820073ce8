fn main() {
    std::process::exit(semiperturb::cli::run(std::env::args_os()));
}
