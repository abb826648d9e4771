fn main() {
    std::process::exit(wahl_cli::run(std::env::args_os()));
}
