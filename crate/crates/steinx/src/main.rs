//! Thin wrapper delegating to the library's command-line front end.

fn main() {
    std::process::exit(steinx::cli::run());
}
