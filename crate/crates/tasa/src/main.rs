fn main() {
    let args: Vec<String> = std::env::args().collect();
    let (code, out) = tasa::cli::dispatch(&args);
    print!("{out}");
    std::process::exit(code);
}
