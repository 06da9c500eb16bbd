fn main() {
    std::process::exit(grover_lab::cli::run());
}
