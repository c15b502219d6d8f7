fn main() {
    std::process::exit(bohr::cli::main_with_args(std::env::args_os()));
}
