use std::io::{self, Read, Write};
use std::process::ExitCode;

fn main() -> ExitCode {
    let out = mubar_cli::run_with(std::env::args(), || {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s).map(|_| s)
    });
    print!("{}", out.stdout);
    eprint!("{}", out.stderr);
    io::stdout().flush().ok();
    ExitCode::from(out.code as u8)
}
