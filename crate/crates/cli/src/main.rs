use clap::error::ErrorKind;
use clap::Parser;
use restricted_hpd_cli::{run, Args};

fn fail(msg: &str, code: i32) -> ! {
    eprintln!("rhpd: {}", msg.replace('\n', " "));
    std::process::exit(code)
}

fn main() {
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => e.exit(),
        Err(e) => {
            let text = e.to_string();
            let first = text.lines().next().unwrap_or("bad arguments");
            fail(first.trim_start_matches("error: "), 2)
        }
    };
    if let Err(e) = run(args) {
        fail(&e.to_string(), e.exit_code());
    }
}
