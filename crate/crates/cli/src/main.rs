fn main() {
    std::process::exit(hkoty::run(std::env::args_os()));
}
