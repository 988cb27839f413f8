fn main() {
    std::process::exit(heightscout::cli::main_entry());
}
