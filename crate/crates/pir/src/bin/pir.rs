fn main() {
    std::process::exit(pir::cli::main());
}
