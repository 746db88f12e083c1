use std::io::Write;

fn main() {
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    let mut out = std::io::BufWriter::new(stdout.lock());
    let code = romkit::cli::run(std::env::args_os(), &mut out, &mut stderr.lock());
    if let Err(e) = out.flush() {
        if code == 0 && e.kind() != std::io::ErrorKind::BrokenPipe {
            std::process::exit(1);
        }
    }
    std::process::exit(code);
}
