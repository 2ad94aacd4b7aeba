use std::io::Write;
use std::process::ExitCode;

fn main() -> ExitCode {
    pmpg::cli::init_threads();
    let out = pmpg::cli::run(std::env::args_os());
    let text = if out.pretty {
        serde_json::to_string_pretty(&out.payload)
    } else {
        serde_json::to_string(&out.payload)
    }
    .expect("payload serializes");
    let mut stdout = std::io::stdout().lock();
    let _ = writeln!(stdout, "{text}");
    if out.pretty || out.exit_code != 0 {
        eprintln!("{}", out.summary.trim_end());
    }
    ExitCode::from(out.exit_code as u8)
}
