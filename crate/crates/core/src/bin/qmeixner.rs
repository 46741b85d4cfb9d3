//! Command-line entry point; see [`qmeixner::cli`].

fn main() -> std::process::ExitCode {
    qmeixner::cli::main()
}
