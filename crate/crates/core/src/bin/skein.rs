fn main() {
    std::process::exit(skein_core::cli::run());
}
