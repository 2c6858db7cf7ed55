fn main() {
    std::process::exit(vorint::cli::dispatch(std::env::args()));
}
