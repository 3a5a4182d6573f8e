fn main() {
    std::process::exit(cwres::cli::main_with_args(std::env::args_os()));
}
