fn main() {
    std::process::exit(alnet::run_cli(std::env::args_os()));
}
