fn main() {
    std::process::exit(inner_dynamics::cli::run(std::env::args_os()));
}
