fn main() {
    std::process::exit(primdeg::cli::main_with_args(std::env::args_os()));
}
