use std::process::ExitCode;

fn main() -> ExitCode {
    let mut out = String::new();
    let code = reinhardt_propmap::cli::execute(std::env::args_os(), &mut out);
    print!("{out}");
    ExitCode::from(code as u8)
}
