fn main() {
    std::process::exit(qconstell_cli::run(std::env::args_os()));
}
