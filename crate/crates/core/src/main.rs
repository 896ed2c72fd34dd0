fn main() -> std::process::ExitCode {
    capforge::cli::run()
}
