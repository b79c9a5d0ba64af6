fn main() {
    let (code, text) = pisot_cli::run(std::env::args_os());
    pisot_cli::emit(code, &text);
    std::process::exit(code);
}
