fn main() {
    std::process::exit(fracmol::cli::run());
}
