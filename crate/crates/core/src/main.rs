fn main() {
    std::process::exit(holoscope::cli::run_command(std::env::args_os()));
}
