fn main() {
    std::process::exit(simterm::cli::main());
}
