use std::io::Write;

/// Generated formulas can be deeply nested; give the recursive passes room.
const STACK_BYTES: usize = 512 << 20;

fn main() {
    let worker = std::thread::Builder::new()
        .stack_size(STACK_BYTES)
        .spawn(|| {
            let mut out = std::io::stdout();
            let mut err = std::io::stderr();
            let code = toposat::cli::run(std::env::args_os(), &mut out, &mut err);
            let _ = out.flush();
            code
        })
        .expect("spawn main worker");
    let code = worker.join().unwrap_or(101);
    std::process::exit(code);
}
