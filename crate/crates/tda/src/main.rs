use std::process::ExitCode;

mod cli;

fn main() -> ExitCode {
    // Rust ignores SIGPIPE, turning `tda ... | head` into a stdout panic;
    // restore the default so a closed pipe just ends the process.
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    // Worker cap must land before any rayon pool exists; every parallel
    // region below goes through the global pool.
    if let Ok(raw) = std::env::var("TDA_THREADS") {
        match raw.parse::<usize>() {
            Ok(n) if n >= 1 => {
                if let Err(e) = rayon::ThreadPoolBuilder::new()
                    .num_threads(n)
                    .build_global()
                {
                    eprintln!("error: cannot configure {n} worker threads: {e}");
                    return ExitCode::from(2);
                }
            }
            _ => {
                eprintln!("error: TDA_THREADS must be a positive integer, got '{raw}'");
                return ExitCode::from(2);
            }
        }
    }
    match cli::run() {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
