use clap::Parser;
use valuesift::cli::{run, Cli, EXIT_OK, EXIT_USAGE};

fn main() {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            std::process::exit(code);
        }
    };
    if let Err(failure) = run(cli) {
        eprintln!("{failure}");
        std::process::exit(failure.exit_code());
    }
}
