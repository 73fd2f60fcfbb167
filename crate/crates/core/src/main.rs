fn main() {
    std::process::exit(euclid_pt::cli::main_with_args(std::env::args_os()));
}
