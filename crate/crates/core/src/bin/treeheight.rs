fn main() -> std::process::ExitCode {
    treeheight::cli::main()
}
