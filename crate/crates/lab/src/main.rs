use std::process::ExitCode;

fn main() -> ExitCode {
    match stbc_lab::run(std::env::args_os()) {
        Ok(report) => {
            if report.written.is_some() {
                println!("{}", report.summary);
            } else {
                print!("{}", report.csv);
                eprintln!("{}", report.summary);
            }
            if let Some(m) = &report.mismatch {
                eprintln!("error: {m}");
            }
            ExitCode::from(report.exit_code() as u8)
        }
        Err(stbc_lab::LabError::Clap(e)) => e.exit(),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
