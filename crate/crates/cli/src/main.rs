fn main() {
    std::process::exit(qdirichlet_cli::main_with_args(std::env::args_os()));
}
