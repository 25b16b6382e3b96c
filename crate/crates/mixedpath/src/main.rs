fn main() {
    std::process::exit(mixedpath::cli::run(std::env::args_os()));
}
