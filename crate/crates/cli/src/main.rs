fn main() {
    std::process::exit(sixstate::main_with_args(std::env::args_os()));
}
