fn main() -> std::process::ExitCode {
    twin_descent::cli::main()
}
