fn main() {
    std::process::exit(catoni_cs::harness::cli::cli(std::env::args_os()));
}
