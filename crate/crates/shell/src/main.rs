fn main() {
    std::process::exit(spindual_shell::cli::main());
}
