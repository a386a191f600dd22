fn main() {
    std::process::exit(acflow::cli::run());
}
