fn main() {
    std::process::exit(ringcoulomb::cli::main_with_args(std::env::args_os()));
}
