fn main() {
    std::process::exit(siren_harmonics_cli::run(std::env::args_os()));
}
