fn main() {
    std::process::exit(sepal::cli::main_with_args(std::env::args_os()));
}
