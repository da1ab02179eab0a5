fn main() {
    let code = cyclodist_cli::run_with(std::env::args().collect(), &mut std::io::stdout().lock(), &mut std::io::stderr().lock());
    std::process::exit(code);
}
