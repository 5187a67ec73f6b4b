fn main() {
    std::process::exit(betafreeze::cli::dispatch(std::env::args_os()));
}
