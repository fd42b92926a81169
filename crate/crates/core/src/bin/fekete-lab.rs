fn main() {
    std::process::exit(fekete_lab::cli::run());
}
