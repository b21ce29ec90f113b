fn main() {
    std::process::exit(omori_core::frontend::run(std::env::args_os()));
}
