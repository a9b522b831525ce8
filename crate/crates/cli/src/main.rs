use std::process::ExitCode;

fn main() -> ExitCode {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let result = mutheta_cli::run(args);
    if !result.payload.is_empty() {
        println!("{}", result.payload);
    }
    for line in &result.diagnostics {
        eprintln!("{line}");
    }
    ExitCode::from(result.exit_code.clamp(0, 255) as u8)
}
