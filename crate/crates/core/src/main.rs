fn main() {
    std::process::exit(asymkernel::cli::run(std::env::args_os().collect()));
}
