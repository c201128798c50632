fn main() {
    std::process::exit(rhostar::cli::run(std::env::args_os()));
}
