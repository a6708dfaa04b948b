fn main() {
    std::process::exit(pefet_sim::cli::run());
}
