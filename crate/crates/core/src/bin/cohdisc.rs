fn main() {
    std::process::exit(cohdisc::cli::main_with_args(std::env::args_os()));
}
