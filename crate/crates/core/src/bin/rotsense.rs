fn main() -> std::process::ExitCode {
    rotsense::cli::main()
}
