use std::io::Write;

fn main() {
    let (code, out) = gns_deform::cli::run(std::env::args_os(), &mut std::io::stdin());
    let _ = std::io::stdout().write_all(out.as_bytes());
    std::process::exit(code);
}
