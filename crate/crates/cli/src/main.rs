fn main() {
    std::process::exit(sumsetlab::run(std::env::args_os()));
}
