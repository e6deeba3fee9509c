fn main() {
    std::process::exit(rfi_coexist::cli::main_entry());
}
