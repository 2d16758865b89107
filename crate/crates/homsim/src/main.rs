fn main() {
    std::process::exit(homsim::cli::run());
}
