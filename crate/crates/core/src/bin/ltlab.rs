fn main() -> std::process::ExitCode {
    ltlab::cli::main()
}
