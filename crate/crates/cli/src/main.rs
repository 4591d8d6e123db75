use clap::Parser;

fn main() {
    let cli = match hecke_cli::Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            std::process::exit(if e.use_stderr() {
                hecke_cli::EXIT_USAGE
            } else {
                0
            });
        }
    };
    let code = hecke_cli::run(cli, &mut std::io::stdout(), &mut std::io::stderr());
    std::process::exit(code);
}
