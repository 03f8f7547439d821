fn main() {
    std::process::exit(hdisc::cli::run(std::env::args_os()));
}
