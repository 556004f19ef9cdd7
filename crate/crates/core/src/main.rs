fn main() {
    std::process::exit(boxlogic::cli::main());
}
