fn main() {
    std::process::exit(bineval::cli::main_with_std());
}
