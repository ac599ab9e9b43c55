fn main() {
    std::process::exit(heckepair::cli::run(std::env::args_os()));
}
