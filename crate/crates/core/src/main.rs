fn main() {
    std::process::exit(pda_cdc::cli::run());
}
