use std::process::ExitCode;

fn main() -> ExitCode {
    // Unlocked handles: worker threads report progress on stderr concurrently.
    let code = genacc::run(
        std::env::args_os(),
        &mut std::io::stdout(),
        &mut std::io::stderr(),
    );
    ExitCode::from(code)
}
