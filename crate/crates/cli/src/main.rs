fn main() {
    std::process::exit(ccindex_cli::run(std::env::args_os()));
}
