fn main() {
    std::process::exit(qudit_cloning::cli::run());
}
