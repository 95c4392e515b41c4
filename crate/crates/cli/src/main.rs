fn main() {
    std::process::exit(uaext_cli::run(std::env::args_os()));
}
