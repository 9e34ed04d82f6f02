use std::io::Write;

fn main() {
    let threads = std::env::var("SUPERVOL_THREADS").ok();
    if let Err(msg) = supervol::cli::configure_threads(threads.as_deref()) {
        eprintln!("error: {msg}");
        std::process::exit(supervol::cli::EXIT_USAGE);
    }
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    let mut out = stdout.lock();
    let mut err = stderr.lock();
    let code = supervol::cli::run(std::env::args_os(), &mut out, &mut err);
    let _ = out.flush();
    std::process::exit(code);
}
