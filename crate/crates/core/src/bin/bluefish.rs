fn main() {
    std::process::exit(bluefish::cli::main());
}
