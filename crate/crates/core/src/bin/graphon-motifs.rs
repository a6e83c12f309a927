use std::process::ExitCode;

fn main() -> ExitCode {
    graphon_motifs::cli::main()
}
