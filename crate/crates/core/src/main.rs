use clap::Parser;

fn main() {
    let args = match lifshitz::cli::Args::try_parse() {
        Ok(a) => a,
        Err(e) => {
            // usage errors share exit code 1 with bad configs
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    std::process::exit(lifshitz::cli::run(&args));
}
