fn main() {
    std::process::exit(prolate_cli::dispatch(std::env::args()));
}
