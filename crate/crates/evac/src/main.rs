fn main() -> std::process::ExitCode {
    evac::cli::main()
}
