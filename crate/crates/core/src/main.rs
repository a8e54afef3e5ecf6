use dexengine::cli;

fn main() {
    std::process::exit(cli::run());
}
