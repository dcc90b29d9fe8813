fn main() {
    std::process::exit(thzbem::cli::main());
}
