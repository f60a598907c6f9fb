use std::io::Write;
use std::process::ExitCode;

fn main() -> ExitCode {
    let env_seed = std::env::var("CONJ_SEED").ok();
    match conjalg_cli::run_args(std::env::args_os(), env_seed) {
        Ok((report, code)) => {
            let text = serde_json::to_string_pretty(&report).expect("reports serialize");
            // a closed pipe (e.g. `| head`) is not an error worth a panic
            let _ = writeln!(std::io::stdout().lock(), "{text}");
            ExitCode::from(code as u8)
        }
        Err(help) => help.exit(),
    }
}
