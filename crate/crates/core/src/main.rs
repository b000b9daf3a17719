fn main() {
    std::process::exit(gwtree::cli::main());
}
