fn main() {
    std::process::exit(augteich::cli::main_entry());
}
