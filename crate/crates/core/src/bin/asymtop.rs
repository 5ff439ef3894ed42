fn main() {
    std::process::exit(asymtop::cli::run(std::env::args_os()));
}
