fn main() {
    let code = gjms_core::cli::main_with_args(std::env::args_os());
    std::process::exit(code);
}
