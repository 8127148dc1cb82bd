fn main() {
    std::process::exit(brannan::cli::run());
}
