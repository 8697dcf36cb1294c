fn main() {
    std::process::exit(cpm::run(std::env::args_os()));
}
