use std::io;

fn main() {
    let ceiling = std::env::var(vlab::cli::CEILING_VAR).ok();
    let code = vlab::cli::main_with(
        std::env::args_os(),
        ceiling.as_deref(),
        &mut io::stdout(),
        &mut io::stderr(),
    );
    std::process::exit(code);
}
