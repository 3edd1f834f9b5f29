fn main() {
    std::process::exit(espart::cli::main_from_env());
}
