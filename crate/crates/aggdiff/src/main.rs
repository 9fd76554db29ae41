fn main() -> std::process::ExitCode {
    aggdiff::cli::run(std::env::args_os())
}
