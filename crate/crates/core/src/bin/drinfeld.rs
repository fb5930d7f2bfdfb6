fn main() {
    std::process::exit(drinfeld::cli::main_with_args(std::env::args_os()));
}
